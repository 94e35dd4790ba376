//! Kronecker invariants of a pencil, canonical block assembly and strict equivalence.

mod indices;
mod reduce;

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::exact::{BinaryForm, Eigenvalue, GaussianRational, Matrix};
use crate::pencil::{invariant_polynomials, Pencil};

pub use indices::{minimal_indices, null_space_dimension, Side};
pub use reduce::{equivalence_witness, kcf_reduce, KcfReduction};

/// Jordan-type block sizes attached to one eigenvalue, in descending order.
pub type SizeSignature = Vec<usize>;

/// Complete strict-equivalence invariant of a pencil.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct KroneckerStructure {
    /// Zero rows (left minimal indices equal to zero).
    pub h: usize,
    /// Zero columns (right minimal indices equal to zero).
    pub g: usize,
    pub right_indices: Vec<usize>,
    pub left_indices: Vec<usize>,
    pub eigen: Vec<(Eigenvalue, SizeSignature)>,
}

impl KroneckerStructure {
    /// Build and bring into canonical order.
    pub fn new(
        h: usize,
        g: usize,
        right_indices: Vec<usize>,
        left_indices: Vec<usize>,
        eigen: Vec<(Eigenvalue, SizeSignature)>,
    ) -> Result<Self> {
        let mut ks = KroneckerStructure {
            h,
            g,
            right_indices,
            left_indices,
            eigen,
        };
        ks.canonicalize();
        ks.validate()?;
        Ok(ks)
    }

    /// Only right indices, no eigenvalues.
    pub fn right_only(eps: &[usize]) -> Self {
        KroneckerStructure::new(0, 0, eps.to_vec(), Vec::new(), Vec::new()).unwrap()
    }

    pub fn canonicalize(&mut self) {
        self.right_indices.sort_unstable();
        self.left_indices.sort_unstable();
        for (_, sig) in self.eigen.iter_mut() {
            sig.sort_unstable_by(|a, b| b.cmp(a));
        }
        self.eigen.sort_by(|a, b| a.0.cmp(&b.0));
    }

    pub fn validate(&self) -> Result<()> {
        if self.right_indices.contains(&0) || self.left_indices.contains(&0) {
            return Err(Error::InvalidStructure("zero minimal indices belong in h and g".into()));
        }
        for w in self.eigen.windows(2) {
            if w[0].0 == w[1].0 {
                return Err(Error::InvalidStructure(format!("eigenvalue {} listed twice", w[0].0)));
            }
        }
        if self.eigen.iter().any(|(_, s)| s.is_empty() || s.contains(&0)) {
            return Err(Error::InvalidStructure("size signatures must be non-empty and positive".into()));
        }
        Ok(())
    }

    /// Total size of the regular part.
    pub fn q(&self) -> usize {
        self.eigen.iter().map(|(_, s)| s.iter().sum::<usize>()).sum()
    }

    /// (m, n) from the bookkeeping identity.
    pub fn dims(&self) -> (usize, usize) {
        let se: usize = self.right_indices.iter().sum();
        let sn: usize = self.left_indices.iter().sum();
        let (a, b) = (self.right_indices.len(), self.left_indices.len());
        let q = self.q();
        (self.h + se + sn + b + q, self.g + se + a + sn + q)
    }

    pub fn has_eigenvalues(&self) -> bool {
        !self.eigen.is_empty()
    }

    /// Distinct eigenvalues in canonical order.
    pub fn eigenvalues(&self) -> Vec<Eigenvalue> {
        self.eigen.iter().map(|(x, _)| x.clone()).collect()
    }

    /// D_r, the product of all elementary divisors (r the pencil rank).
    pub fn determinantal_product(&self) -> BinaryForm {
        let mut acc = BinaryForm::one();
        for (x, sig) in &self.eigen {
            let total: usize = sig.iter().sum();
            acc = acc.mul(&x.linear_factor().pow(total as u32));
        }
        acc.monic()
    }

    /// Invariant polynomials E_1..E_r derived from the structure.
    pub fn invariant_polynomials(&self) -> Vec<BinaryForm> {
        let (m, n) = self.dims();
        let rank = m - self.h - self.left_indices.len();
        debug_assert_eq!(rank, n - self.g - self.right_indices.len());
        let mut es = vec![BinaryForm::one(); rank];
        for (x, sig) in &self.eigen {
            // The largest block goes to E_r, the next to E_{r-1}, and so on.
            for (k, &e) in sig.iter().enumerate() {
                let slot = rank - 1 - k;
                es[slot] = es[slot].mul(&x.linear_factor().pow(e as u32));
            }
        }
        es.into_iter().map(|e| e.monic()).collect()
    }

    /// Map eigenvalues through a substitution and re-canonicalize.
    pub fn map_eigenvalues(&self, f: impl Fn(&Eigenvalue) -> Eigenvalue) -> KroneckerStructure {
        let mut out = self.clone();
        out.eigen = self.eigen.iter().map(|(x, s)| (f(x), s.clone())).collect();
        out.canonicalize();
        out
    }

    /// Compact block notation, e.g. `L2+LT1+M1(0)+N2`.
    pub fn block_string(&self) -> String {
        let mut parts = Vec::new();
        if self.h > 0 || self.g > 0 {
            parts.push(format!("0[{}x{}]", self.h, self.g));
        }
        parts.extend(self.right_indices.iter().map(|e| format!("L{e}")));
        parts.extend(self.left_indices.iter().map(|v| format!("LT{v}")));
        for (x, sig) in &self.eigen {
            for e in sig {
                parts.push(match x {
                    Eigenvalue::Finite(v) => format!("M{e}({v})"),
                    Eigenvalue::Infinite => format!("N{e}"),
                });
            }
        }
        if parts.is_empty() {
            "empty".into()
        } else {
            parts.join("+")
        }
    }
}

impl fmt::Display for KroneckerStructure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.block_string())
    }
}

#[derive(Serialize, Deserialize)]
struct EigenJson {
    x: String,
    sig: Vec<usize>,
}

#[derive(Serialize, Deserialize)]
struct StructureJson {
    h: usize,
    g: usize,
    eps: Vec<usize>,
    nu: Vec<usize>,
    eigen: Vec<EigenJson>,
}

impl Serialize for KroneckerStructure {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        StructureJson {
            h: self.h,
            g: self.g,
            eps: self.right_indices.clone(),
            nu: self.left_indices.clone(),
            eigen: self
                .eigen
                .iter()
                .map(|(x, sig)| EigenJson {
                    x: x.to_json_string(),
                    sig: sig.clone(),
                })
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for KroneckerStructure {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let raw = StructureJson::deserialize(d)?;
        let mut eigen = Vec::new();
        for e in raw.eigen {
            let x: Eigenvalue = e.x.parse().map_err(D::Error::custom)?;
            eigen.push((x, e.sig));
        }
        KroneckerStructure::new(raw.h, raw.g, raw.eps, raw.nu, eigen).map_err(D::Error::custom)
    }
}

/// `L_ε`: ε×(ε+1), row i holds λ in column i and μ in column i+1.
pub fn l_block(eps: usize) -> Pencil {
    let mut r = Matrix::zeros(eps, eps + 1);
    let mut s = Matrix::zeros(eps, eps + 1);
    for i in 0..eps {
        s[(i, i)] = GaussianRational::one();
        r[(i, i + 1)] = GaussianRational::one();
    }
    Pencil::new(r, s).unwrap()
}

/// `L_νᵀ`: the transpose of `L_ν`.
pub fn lt_block(nu: usize) -> Pencil {
    l_block(nu).transpose()
}

/// `M^e(x)`: xμ + λ on the diagonal, μ on the superdiagonal.
pub fn m_block(e: usize, x: &GaussianRational) -> Pencil {
    let mut r = Matrix::zeros(e, e);
    let mut s = Matrix::zeros(e, e);
    for i in 0..e {
        r[(i, i)] = x.clone();
        s[(i, i)] = GaussianRational::one();
        if i + 1 < e {
            r[(i, i + 1)] = GaussianRational::one();
        }
    }
    Pencil::new(r, s).unwrap()
}

/// `N^e`: μ on the diagonal, λ on the superdiagonal.
pub fn n_block(e: usize) -> Pencil {
    let mut r = Matrix::zeros(e, e);
    let mut s = Matrix::zeros(e, e);
    for i in 0..e {
        r[(i, i)] = GaussianRational::one();
        if i + 1 < e {
            s[(i, i + 1)] = GaussianRational::one();
        }
    }
    Pencil::new(r, s).unwrap()
}

/// Jordan-type block for an eigenvalue.
pub fn eigen_block(e: usize, x: &Eigenvalue) -> Pencil {
    match x {
        Eigenvalue::Finite(v) => m_block(e, v),
        Eigenvalue::Infinite => n_block(e),
    }
}

/// Symbolic null vector of `L_ε`: Σ (−1)^j μ^(ε−j) λ^j e_j.
pub fn l_block_null_vector(eps: usize) -> Vec<BinaryForm> {
    (0..=eps)
        .map(|j| {
            let mut c = vec![GaussianRational::zero(); eps + 1];
            c[j] = if j % 2 == 0 {
                GaussianRational::one()
            } else {
                -GaussianRational::one()
            };
            BinaryForm::new(c)
        })
        .collect()
}

/// `P · v` for a vector of forms sharing one degree.
pub fn pencil_apply_forms(p: &Pencil, v: &[BinaryForm]) -> Vec<BinaryForm> {
    assert_eq!(v.len(), p.n());
    (0..p.m())
        .map(|i| {
            let mut acc = BinaryForm::zero();
            for (j, vj) in v.iter().enumerate() {
                let t = p.entry(i, j).mul(vj);
                acc = acc.add(&t);
            }
            acc
        })
        .collect()
}

/// Block-diagonal pencil in canonical order: zero header, L ascending, Lᵀ ascending,
/// finite eigenvalues by value with blocks descending, then ∞.
pub fn assemble_kcf(ks: &KroneckerStructure) -> Pencil {
    let mut p = Pencil::zeros(ks.h, ks.g);
    for &e in &ks.right_indices {
        p = p.direct_sum(&l_block(e));
    }
    for &v in &ks.left_indices {
        p = p.direct_sum(&lt_block(v));
    }
    for (x, sig) in &ks.eigen {
        for &e in sig {
            p = p.direct_sum(&eigen_block(e, x));
        }
    }
    p
}

/// Eigenvalues with size signatures, read off the factored invariant polynomials.
pub fn eigen_structure(p: &Pencil) -> Result<Vec<(Eigenvalue, SizeSignature)>> {
    eigen_from_invariants(&invariant_polynomials(p))
}

pub(crate) fn eigen_from_invariants(es: &[BinaryForm]) -> Result<Vec<(Eigenvalue, SizeSignature)>> {
    let mut table: BTreeMap<Eigenvalue, Vec<usize>> = BTreeMap::new();
    let mut residuals = Vec::new();
    for e in es {
        let f = e.factor();
        if !f.splits() {
            residuals.push(f.residual.clone());
        }
        if f.mu_power > 0 {
            table.entry(Eigenvalue::Infinite).or_default().push(f.mu_power);
        }
        for (x, mult) in f.roots {
            table.entry(Eigenvalue::Finite(x)).or_default().push(mult as usize);
        }
    }
    if !residuals.is_empty() {
        return Err(Error::NonSplitting(residuals));
    }
    Ok(table
        .into_iter()
        .map(|(x, mut sig)| {
            sig.sort_unstable_by(|a, b| b.cmp(a));
            (x, sig)
        })
        .collect())
}

/// Full Kronecker invariant; zero minimal indices are counted in h and g.
pub fn kronecker_structure(p: &Pencil) -> Result<KroneckerStructure> {
    let eigen = eigen_structure(p)?;
    let right = minimal_indices(p, Side::Right);
    let left = minimal_indices(p, Side::Left);
    let g = right.iter().filter(|&&e| e == 0).count();
    let h = left.iter().filter(|&&e| e == 0).count();
    let ks = KroneckerStructure::new(
        h,
        g,
        right.into_iter().filter(|&e| e > 0).collect(),
        left.into_iter().filter(|&e| e > 0).collect(),
        eigen,
    )?;
    debug_assert_eq!(ks.dims(), p.shape(), "bookkeeping identity failed for {ks}");
    Ok(ks)
}

/// Strict equivalence, decided by comparing Kronecker invariants.
pub fn strictly_equivalent(p1: &Pencil, p2: &Pencil) -> Result<bool> {
    if p1.shape() != p2.shape() {
        return Ok(false);
    }
    Ok(kronecker_structure(p1)? == kronecker_structure(p2)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::gr;

    #[test]
    fn blocks_have_expected_entries() {
        let l2 = l_block(2);
        assert_eq!(l2.entry(0, 0), BinaryForm::lambda());
        assert_eq!(l2.entry(0, 1), BinaryForm::mu());
        assert_eq!(l2.entry(1, 2), BinaryForm::mu());
        let n2 = n_block(2);
        assert_eq!(n2.entry(0, 0), BinaryForm::mu());
        assert_eq!(n2.entry(0, 1), BinaryForm::lambda());
        let m = m_block(1, &gr(3));
        assert_eq!(m.entry(0, 0), BinaryForm::from_ints(&[3, 1]));
    }

    #[test]
    fn null_vector_kills_l_block() {
        for eps in 1..=5 {
            let v = l_block_null_vector(eps);
            assert!(pencil_apply_forms(&l_block(eps), &v).iter().all(|f| f.is_zero()));
        }
    }

    #[test]
    fn structure_json_round_trip() {
        let ks = KroneckerStructure::new(
            1,
            0,
            vec![2, 1],
            vec![],
            vec![(Eigenvalue::Infinite, vec![1]), (Eigenvalue::finite(3), vec![1, 2])],
        )
        .unwrap();
        assert_eq!(ks.right_indices, vec![1, 2]);
        assert_eq!(ks.eigen[0].1, vec![2, 1]);
        let txt = serde_json::to_string(&ks).unwrap();
        assert!(txt.contains("\"x\":\"inf\""));
        assert_eq!(serde_json::from_str::<KroneckerStructure>(&txt).unwrap(), ks);
    }
}
