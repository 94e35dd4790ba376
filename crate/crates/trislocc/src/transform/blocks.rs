//! Building a target pencil out of a reservoir of small blocks: L₁ blocks, at most one L₂
//! and at most one M¹(0).
//!
//! Every step is a column elimination on Claire's side. Rows are never touched until the
//! end, where one equivalence witness brings the result into canonical form. When an
//! M¹(0) block seeds a Jordan chain, the whole construction runs in the coordinates of a
//! fractional linear map T with T(0) equal to the seeded eigenvalue, and Alice applies T
//! at the end.

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::{companion_coeffs, elimination_matrix, eliminate, Axis, EliminationSpec, TransformWitness};
use crate::error::{Error, Result};
use crate::exact::{Eigenvalue, GaussianRational, Matrix};
use crate::kcf::{assemble_kcf, equivalence_witness, kronecker_structure, KroneckerStructure};
use crate::pencil::{apply_alice, MoebiusMap, Pencil};

/// Counts of the small blocks in a source structure.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct ResourcePools {
    pub l1: usize,
    pub l2: usize,
    pub m0: usize,
}

impl ResourcePools {
    /// `None` unless the structure is (L₁)^k ⊕ (L₂)^{≤1} ⊕ (M¹(0))^{≤1}.
    pub fn of(ks: &KroneckerStructure) -> Option<Self> {
        if ks.h != 0 || ks.g != 0 || !ks.left_indices.is_empty() {
            return None;
        }
        let l1 = ks.right_indices.iter().filter(|&&e| e == 1).count();
        let l2 = ks.right_indices.iter().filter(|&&e| e == 2).count();
        if l1 + l2 != ks.right_indices.len() || l2 > 1 {
            return None;
        }
        let m0 = match ks.eigen.as_slice() {
            [] => 0,
            [(x, sig)] if *x == Eigenvalue::finite(0) && sig == &vec![1] => 1,
            _ => return None,
        };
        Some(ResourcePools { l1, l2, m0 })
    }

    pub fn structure(&self) -> KroneckerStructure {
        let mut eps = vec![1; self.l1];
        eps.extend(std::iter::repeat_n(2, self.l2));
        let eigen = if self.m0 == 1 {
            vec![(Eigenvalue::finite(0), vec![1])]
        } else {
            vec![]
        };
        KroneckerStructure::new(0, 0, eps, vec![], eigen).unwrap()
    }
}

/// One construction step. Eigenvalues are given in target coordinates.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(tag = "step", rename_all = "snake_case")]
pub enum BlockStep {
    /// Glue L₁ blocks (onto the L₂ block if available and size ≥ 2).
    BuildL { size: usize },
    /// Build L_{size+1} and drop its first and last columns.
    BuildLt { size: usize },
    /// Turn one L₁ into a 1×1 block with eigenvalue x.
    NewEigenvalue { x: Eigenvalue },
    /// Grow the most recent block of eigenvalue x by one, consuming an L₁.
    Enlarge { x: Eigenvalue },
    /// Use the M¹(0) block as the first block of eigenvalue x.
    SeedFromM0 { x: Eigenvalue },
    /// Build L_size, merge the M¹(0) column into its last column, drop its first column.
    LtFromM0 { size: usize },
    /// Build L_k and eliminate its last column with companion coefficients of the roots.
    FromCompanion { roots: Vec<Eigenvalue> },
    /// Merge the L₂ block with the seeded M¹(0) block into one block of size three.
    MergeL2WithM0,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
enum Kind {
    L1,
    L2,
    M0,
    Used,
}

#[derive(Clone, Debug)]
struct Block {
    kind: Kind,
    rows: Vec<usize>,
    cols: Vec<usize>,
}

struct Work {
    p: Pencil,
    c: Matrix,
    blocks: Vec<Block>,
    /// Most recent block per eigenvalue, in pre-image coordinates.
    latest: Vec<(Eigenvalue, usize)>,
}

impl Work {
    fn new(pools: ResourcePools) -> Work {
        let p = assemble_kcf(&pools.structure());
        let mut blocks = Vec::new();
        let (mut r, mut c) = (0, 0);
        let mut push = |kind: Kind, h: usize, w: usize| {
            blocks.push(Block {
                kind,
                rows: (r..r + h).collect(),
                cols: (c..c + w).collect(),
            });
            r += h;
            c += w;
        };
        for _ in 0..pools.l1 {
            push(Kind::L1, 1, 2);
        }
        for _ in 0..pools.l2 {
            push(Kind::L2, 2, 3);
        }
        for _ in 0..pools.m0 {
            push(Kind::M0, 1, 1);
        }
        let n = p.n();
        Work {
            p,
            c: Matrix::identity(n),
            blocks,
            latest: Vec::new(),
        }
    }

    fn take(&mut self, kind: Kind) -> Result<usize> {
        let i = self
            .blocks
            .iter()
            .position(|b| b.kind == kind)
            .ok_or_else(|| Error::InsufficientBlocks(format!("no {kind:?} block left")))?;
        self.blocks[i].kind = Kind::Used;
        Ok(i)
    }

    fn latest_of(&self, x: &Eigenvalue) -> Result<usize> {
        self.latest
            .iter()
            .rev()
            .find(|(y, _)| y == x)
            .map(|&(_, i)| i)
            .ok_or_else(|| Error::InvalidStructure(format!("no block with eigenvalue {x} to enlarge")))
    }

    /// Add column `col` to the listed columns and delete it. Indices are current ones.
    fn drop_col(&mut self, col: usize, adds: &[(usize, GaussianRational)]) {
        let n = self.p.n();
        let mut coeffs = vec![GaussianRational::zero(); n - 1];
        for (j, a) in adds {
            let pos = if *j < col { *j } else { j - 1 };
            coeffs[pos] += a;
        }
        let spec = EliminationSpec::new(Axis::Column, col, coeffs);
        let e = elimination_matrix(&spec, n).unwrap();
        self.p = eliminate(&self.p, &spec).unwrap();
        self.c = e.mul(&self.c);
        for b in &mut self.blocks {
            b.cols.retain(|&k| k != col);
            for k in &mut b.cols {
                if *k > col {
                    *k -= 1;
                }
            }
        }
    }

    /// Absorb block `from` into block `into`, placing its lines first or last.
    fn absorb(&mut self, into: usize, from: usize, front: bool) {
        let Block { rows, cols, .. } = std::mem::replace(
            &mut self.blocks[from],
            Block { kind: Kind::Used, rows: vec![], cols: vec![] },
        );
        let dst = &mut self.blocks[into];
        if front {
            dst.rows.splice(0..0, rows);
            dst.cols.splice(0..0, cols);
        } else {
            dst.rows.extend(rows);
            dst.cols.extend(cols);
        }
    }

    fn build_l(&mut self, eps: usize) -> Result<usize> {
        let seed = if eps >= 2 && self.blocks.iter().any(|b| b.kind == Kind::L2) {
            self.take(Kind::L2)?
        } else {
            self.take(Kind::L1)?
        };
        while self.blocks[seed].cols.len() - 1 < eps {
            let next = self.take(Kind::L1)?;
            let first = self.blocks[next].cols[0];
            let last = *self.blocks[seed].cols.last().unwrap();
            self.drop_col(first, &[(last, GaussianRational::one())]);
            self.absorb(seed, next, false);
        }
        Ok(seed)
    }

    fn build_lt(&mut self, nu: usize) -> Result<()> {
        let b = self.build_l(nu + 1)?;
        let first = self.blocks[b].cols[0];
        self.drop_col(first, &[]);
        let last = *self.blocks[b].cols.last().unwrap();
        self.drop_col(last, &[]);
        Ok(())
    }

    fn new_eigenvalue(&mut self, x: &Eigenvalue) -> Result<()> {
        let b = self.take(Kind::L1)?;
        let (c1, c2) = (self.blocks[b].cols[0], self.blocks[b].cols[1]);
        match x {
            Eigenvalue::Finite(v) => self.drop_col(c2, &[(c1, v.clone())]),
            Eigenvalue::Infinite => self.drop_col(c1, &[]),
        }
        self.latest.push((x.clone(), b));
        Ok(())
    }

    fn enlarge(&mut self, x: &Eigenvalue) -> Result<()> {
        let target = self.latest_of(x)?;
        let b = self.take(Kind::L1)?;
        let head = self.blocks[target].cols[0];
        let (c1, c2) = (self.blocks[b].cols[0], self.blocks[b].cols[1]);
        match x {
            Eigenvalue::Finite(v) => self.drop_col(c2, &[(head, GaussianRational::one()), (c1, v.clone())]),
            Eigenvalue::Infinite => self.drop_col(c1, &[(head, GaussianRational::one())]),
        }
        self.absorb(target, b, true);
        Ok(())
    }

    fn lt_from_m0(&mut self, nu: usize) -> Result<()> {
        let b = self.build_l(nu)?;
        let m0 = self.take(Kind::M0)?;
        let c0 = self.blocks[m0].cols[0];
        let last = *self.blocks[b].cols.last().unwrap();
        self.drop_col(c0, &[(last, GaussianRational::one())]);
        self.absorb(b, m0, false);
        let first = self.blocks[b].cols[0];
        self.drop_col(first, &[]);
        Ok(())
    }

    fn from_companion(&mut self, roots: &[GaussianRational]) -> Result<()> {
        let k = roots.len();
        let b = self.build_l(k)?;
        let a = companion_coeffs(roots);
        let cols = self.blocks[b].cols.clone();
        let adds: Vec<_> = (0..k).map(|j| (cols[j], -&a[j])).collect();
        self.drop_col(cols[k], &adds);
        Ok(())
    }

    fn merge_l2_with_m0(&mut self) -> Result<()> {
        let zero = Eigenvalue::finite(0);
        let seeded = self.latest_of(&zero)?;
        if self.blocks[seeded].cols.len() != 1 {
            return Err(Error::InvalidStructure("the seeded block has already grown".into()));
        }
        let l2 = self.take(Kind::L2)?;
        let c0 = self.blocks[seeded].cols[0];
        let c3 = self.blocks[l2].cols[2];
        self.drop_col(c0, &[(c3, GaussianRational::one())]);
        self.absorb(seeded, l2, true);
        Ok(())
    }
}

/// Eigenvalues mentioned anywhere in the script.
fn script_eigenvalues(script: &[BlockStep]) -> Vec<Eigenvalue> {
    let mut out = Vec::new();
    for s in script {
        match s {
            BlockStep::NewEigenvalue { x } | BlockStep::Enlarge { x } | BlockStep::SeedFromM0 { x } => out.push(x.clone()),
            BlockStep::FromCompanion { roots } => out.extend(roots.iter().cloned()),
            _ => {}
        }
    }
    out
}

/// T with T(0) = x and T(∞) = w for a finite w outside `avoid`.
fn seed_map(x: &Eigenvalue, avoid: &[Eigenvalue]) -> MoebiusMap {
    let w = (2..)
        .map(Eigenvalue::finite)
        .find(|w| w != x && !avoid.contains(w))
        .unwrap();
    let Eigenvalue::Finite(w) = w else { unreachable!() };
    let one = GaussianRational::one();
    // Eigenvalue action z ↦ (wz + x)/(z + 1), or (wz + 1)/z when x = ∞.
    let (q, s) = match x {
        Eigenvalue::Finite(v) => (v.clone(), one.clone()),
        Eigenvalue::Infinite => (one.clone(), GaussianRational::zero()),
    };
    MoebiusMap::new(w, one, q, s).unwrap()
}

/// Run a script on the reservoir `src`. Returns the reached structure and a witness from
/// the representative state of `src` to the representative state of that structure.
pub fn consume_blocks(script: &[BlockStep], src: &KroneckerStructure) -> Result<(KroneckerStructure, TransformWitness)> {
    let pools = ResourcePools::of(src)
        .ok_or_else(|| Error::ScopeViolation(format!("{src} is not a reservoir of L1, L2 and M1(0) blocks")))?;
    let mentioned = script_eigenvalues(script);
    let seed = script.iter().find_map(|s| match s {
        BlockStep::SeedFromM0 { x } => Some(x.clone()),
        _ => None,
    });
    let needs_map = seed.is_some()
        || (mentioned.contains(&Eigenvalue::Infinite)
            && script.iter().any(|s| matches!(s, BlockStep::FromCompanion { .. })));
    let t = needs_map.then(|| seed_map(seed.as_ref().unwrap_or(&Eigenvalue::finite(0)), &mentioned));
    let t_inv = t.as_ref().map(MoebiusMap::inverse);
    let pre = |y: &Eigenvalue| t_inv.as_ref().map_or_else(|| y.clone(), |ti| ti.map_eigenvalue(y));

    let mut w = Work::new(pools);
    for step in script {
        match step {
            BlockStep::BuildL { size } => {
                w.build_l(*size)?;
            }
            BlockStep::BuildLt { size } => w.build_lt(*size)?,
            BlockStep::NewEigenvalue { x } => w.new_eigenvalue(&pre(x))?,
            BlockStep::Enlarge { x } => w.enlarge(&pre(x))?,
            BlockStep::SeedFromM0 { .. } => {
                let b = w.take(Kind::M0)?;
                w.latest.push((Eigenvalue::finite(0), b));
            }
            BlockStep::LtFromM0 { size } => w.lt_from_m0(*size)?,
            BlockStep::FromCompanion { roots } => {
                let pre_roots: Vec<GaussianRational> = roots
                    .iter()
                    .map(|y| match pre(y) {
                        Eigenvalue::Finite(v) => Ok(v),
                        Eigenvalue::Infinite => Err(Error::InvalidStructure("companion root at infinity".into())),
                    })
                    .collect::<Result<_>>()?;
                w.from_companion(&pre_roots)?;
            }
            BlockStep::MergeL2WithM0 => w.merge_l2_with_m0()?,
        }
    }
    if w.blocks.iter().any(|b| b.kind != Kind::Used) {
        return Err(Error::InvalidStructure("script leaves source blocks unused".into()));
    }
    let (p, a) = match &t {
        Some(t) => (apply_alice(&w.p, t)?, t.operator()),
        None => (w.p.clone(), Matrix::identity(2)),
    };
    let reached = kronecker_structure(&p)?;
    let (b, c2) = equivalence_witness(&p, &assemble_kcf(&reached))
        .expect("a pencil is strictly equivalent to its canonical form");
    Ok((reached, TransformWitness { a, b, c: c2.mul(&w.c) }))
}

#[derive(Clone, Copy, Debug)]
enum L2Use {
    L(usize),
    Lt(usize),
    MergeM0(usize),
    LtWithM0(usize),
    Companion2(usize),
    CompanionPair(usize, usize),
}

#[derive(Clone, Copy, Debug)]
enum M0Use {
    Seed(usize),
    Lt(usize),
}

/// Blocks used by a choice: (L indices, Lᵀ indices, eigen-block indices).
#[derive(Default)]
struct Taken {
    l: Vec<usize>,
    lt: Vec<usize>,
    j: Vec<usize>,
}

/// Script building `dst` from the reservoir `src`, or `InsufficientBlocks` if no assignment
/// of the L₂ and M¹(0) blocks to target blocks works.
pub fn plan_consumption(src: &KroneckerStructure, dst: &KroneckerStructure) -> Result<Vec<BlockStep>> {
    let pools = ResourcePools::of(src)
        .ok_or_else(|| Error::ScopeViolation(format!("{src} is not a reservoir of L1, L2 and M1(0) blocks")))?;
    let (m, n) = src.dims();
    let (m2, n2) = dst.dims();
    if m2 != m || n2 > n || dst.h != 0 || dst.g != 0 {
        return Err(Error::ScopeViolation(format!("cannot build {dst} from {src}")));
    }
    let ls = &dst.right_indices;
    let lts = &dst.left_indices;
    let js: Vec<(Eigenvalue, usize)> = dst
        .eigen
        .iter()
        .flat_map(|(x, sig)| sig.iter().map(move |&e| (x.clone(), e)))
        .collect();

    let mut l2_opts: Vec<Option<L2Use>> = Vec::new();
    if pools.l2 == 1 {
        l2_opts.extend((0..ls.len()).filter(|&i| ls[i] >= 2).map(|i| Some(L2Use::L(i))));
        l2_opts.extend((0..lts.len()).map(|i| Some(L2Use::Lt(i))));
        if pools.m0 == 1 {
            l2_opts.extend((0..js.len()).filter(|&j| js[j].1 >= 3).map(|j| Some(L2Use::MergeM0(j))));
            l2_opts.extend((0..lts.len()).filter(|&i| lts[i] >= 2).map(|i| Some(L2Use::LtWithM0(i))));
        }
        l2_opts.extend((0..js.len()).filter(|&j| js[j].1 == 2).map(|j| Some(L2Use::Companion2(j))));
        for j in 0..js.len() {
            for k in j + 1..js.len() {
                if js[j].1 == 1 && js[k].1 == 1 && js[j].0 != js[k].0 {
                    l2_opts.push(Some(L2Use::CompanionPair(j, k)));
                }
            }
        }
    } else {
        l2_opts.push(None);
    }

    for l2 in &l2_opts {
        let mut taken = Taken::default();
        let mut m0_done = false;
        match *l2 {
            Some(L2Use::L(i)) => taken.l.push(i),
            Some(L2Use::Lt(i)) => taken.lt.push(i),
            Some(L2Use::MergeM0(j)) => {
                taken.j.push(j);
                m0_done = true;
            }
            Some(L2Use::LtWithM0(i)) => {
                taken.lt.push(i);
                m0_done = true;
            }
            Some(L2Use::Companion2(j)) => taken.j.push(j),
            Some(L2Use::CompanionPair(j, k)) => taken.j.extend([j, k]),
            None => {}
        }
        let mut m0_opts: Vec<Option<M0Use>> = Vec::new();
        if pools.m0 == 1 && !m0_done {
            let mut seeds: Vec<usize> = (0..js.len()).filter(|j| !taken.j.contains(j)).collect();
            seeds.sort_by_key(|&j| std::cmp::Reverse(js[j].1));
            m0_opts.extend(seeds.into_iter().map(|j| Some(M0Use::Seed(j))));
            m0_opts.extend((0..lts.len()).filter(|i| !taken.lt.contains(i)).map(|i| Some(M0Use::Lt(i))));
        } else {
            m0_opts.push(None);
        }
        let Some(m0) = m0_opts.first().copied() else { continue };

        let mut script = Vec::new();
        match *l2 {
            Some(L2Use::L(i)) => script.push(BlockStep::BuildL { size: ls[i] }),
            Some(L2Use::Lt(i)) => script.push(BlockStep::BuildLt { size: lts[i] }),
            Some(L2Use::MergeM0(j)) => {
                let x = js[j].0.clone();
                script.push(BlockStep::SeedFromM0 { x: x.clone() });
                script.push(BlockStep::MergeL2WithM0);
                script.extend((3..js[j].1).map(|_| BlockStep::Enlarge { x: x.clone() }));
            }
            Some(L2Use::LtWithM0(i)) => script.push(BlockStep::LtFromM0 { size: lts[i] }),
            Some(L2Use::Companion2(j)) => script.push(BlockStep::FromCompanion { roots: vec![js[j].0.clone(); 2] }),
            Some(L2Use::CompanionPair(j, k)) => script.push(BlockStep::FromCompanion {
                roots: vec![js[j].0.clone(), js[k].0.clone()],
            }),
            None => {}
        }
        match m0 {
            Some(M0Use::Seed(j)) => {
                taken.j.push(j);
                let x = js[j].0.clone();
                script.push(BlockStep::SeedFromM0 { x: x.clone() });
                script.extend((1..js[j].1).map(|_| BlockStep::Enlarge { x: x.clone() }));
            }
            Some(M0Use::Lt(i)) => {
                taken.lt.push(i);
                script.push(BlockStep::LtFromM0 { size: lts[i] });
            }
            None => {}
        }
        for (i, &e) in ls.iter().enumerate() {
            if !taken.l.contains(&i) {
                script.push(BlockStep::BuildL { size: e });
            }
        }
        for (i, &v) in lts.iter().enumerate() {
            if !taken.lt.contains(&i) {
                script.push(BlockStep::BuildLt { size: v });
            }
        }
        for (j, (x, e)) in js.iter().enumerate() {
            if !taken.j.contains(&j) {
                script.push(BlockStep::NewEigenvalue { x: x.clone() });
                script.extend((1..*e).map(|_| BlockStep::Enlarge { x: x.clone() }));
            }
        }
        return Ok(script);
    }
    Err(Error::InsufficientBlocks(format!(
        "no assignment of the L2 and M1(0) blocks of {src} builds {dst}"
    )))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::gr;
    use crate::pencil::state_from_pencil;
    use crate::transform::verify_witness;

    fn ks(eps: &[usize], nu: &[usize], eigen: &[(Eigenvalue, &[usize])]) -> KroneckerStructure {
        KroneckerStructure::new(0, 0, eps.to_vec(), nu.to_vec(), eigen.iter().map(|(x, s)| (x.clone(), s.to_vec())).collect())
            .unwrap()
    }

    fn run(src: &KroneckerStructure, dst: &KroneckerStructure) {
        let script = plan_consumption(src, dst).unwrap();
        let (reached, w) = consume_blocks(&script, src).unwrap();
        assert_eq!(&reached, dst, "script {script:?}");
        assert!(verify_witness(
            &state_from_pencil(&assemble_kcf(src)),
            &w,
            &state_from_pencil(&assemble_kcf(dst))
        ));
    }

    #[test]
    fn claire_merges_l2_and_m0() {
        let src = ks(&[2], &[], &[(Eigenvalue::finite(0), &[1])]);
        let dst = ks(&[], &[], &[(Eigenvalue::finite(0), &[3])]);
        assert_eq!(
            plan_consumption(&src, &dst).unwrap(),
            vec![BlockStep::SeedFromM0 { x: Eigenvalue::finite(0) }, BlockStep::MergeL2WithM0]
        );
        run(&src, &dst);
    }

    #[test]
    fn builds_mixed_targets() {
        let inf = Eigenvalue::Infinite;
        let e = Eigenvalue::finite;
        let src = ks(&[1, 1, 1, 1, 2], &[], &[(e(0), &[1])]);
        run(&src, &ks(&[], &[], &[(e(0), &[2]), (e(1), &[3]), (inf.clone(), &[2])]));
        run(&src, &ks(&[], &[2], &[(e(3), &[2, 1]), (inf.clone(), &[1])]));
        run(&src, &ks(&[3], &[1], &[(e(0), &[1]), (inf.clone(), &[1])]));
        run(&src, &ks(&[2], &[], &[(inf.clone(), &[2, 2]), (e(0), &[1])]));
        let no_m0 = ks(&[1, 1, 1, 2], &[], &[]);
        run(&no_m0, &ks(&[], &[], &[(e(0), &[2]), (e(1), &[1]), (inf.clone(), &[2])]));
        run(&no_m0, &ks(&[], &[], &[(e(0), &[1]), (inf, &[1]), (e(1), &[1]), (e(2), &[1]), (e(3), &[1])]));
        run(&no_m0, &ks(&[3], &[1], &[]));
        run(&ks(&[1, 1, 1], &[], &[(e(0), &[1])]), &ks(&[], &[2], &[(Eigenvalue::Finite(gr(5)), &[1])]));
    }

    #[test]
    fn exceptions_are_insufficient() {
        let e = Eigenvalue::finite;
        let src = ks(&[1, 2], &[], &[]);
        let dst = ks(&[], &[], &[(e(4), &[1, 1, 1])]);
        assert!(matches!(plan_consumption(&src, &dst), Err(Error::InsufficientBlocks(_))));
        let src = ks(&[2], &[], &[(e(0), &[1])]);
        let dst = ks(&[1], &[1], &[]);
        assert!(matches!(plan_consumption(&src, &dst), Err(Error::InsufficientBlocks(_))));
    }
}
