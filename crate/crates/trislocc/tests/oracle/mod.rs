//! Slow, independent reference computations. Nothing here calls the library's
//! polynomial or reduction code; only the scalar field is shared.
#![allow(dead_code)]

use num_traits::{One, Zero};
use trislocc::exact::GaussianRational as Q;

/// Binary form, coefficient `j` belongs to μ^(d−j) λ^j. Empty means zero.
pub type Form = Vec<Q>;

fn trim(mut f: Form) -> Form {
    // A form keeps its degree, so only an all-zero vector collapses.
    if f.iter().all(|c| c.is_zero()) {
        f.clear();
    }
    f
}

pub fn add(a: &Form, b: &Form) -> Form {
    if a.is_empty() {
        return b.clone();
    }
    if b.is_empty() {
        return a.clone();
    }
    assert_eq!(a.len(), b.len(), "adding forms of different degree");
    trim(a.iter().zip(b).map(|(x, y)| x + y).collect())
}

pub fn neg(a: &Form) -> Form {
    a.iter().map(|x| -x.clone()).collect()
}

pub fn mul(a: &Form, b: &Form) -> Form {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut out = vec![Q::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += &(x * y);
        }
    }
    trim(out)
}

/// Determinant by the permutation expansion.
pub fn det(m: &[Vec<Form>]) -> Form {
    let n = m.len();
    if n == 0 {
        return vec![Q::one()];
    }
    let mut perm: Vec<usize> = (0..n).collect();
    let mut total: Form = vec![];
    permutations(&mut perm, 0, &mut |p| {
        let mut term: Form = vec![Q::one()];
        for (i, &j) in p.iter().enumerate() {
            term = mul(&term, &m[i][j]);
        }
        if sign(p) < 0 {
            term = neg(&term);
        }
        total = add(&total, &term);
    });
    total
}

fn permutations(p: &mut Vec<usize>, k: usize, f: &mut impl FnMut(&[usize])) {
    if k == p.len() {
        f(p);
        return;
    }
    for i in k..p.len() {
        p.swap(k, i);
        permutations(p, k + 1, f);
        p.swap(k, i);
    }
}

fn sign(p: &[usize]) -> i32 {
    let mut s = 1;
    for i in 0..p.len() {
        for j in i + 1..p.len() {
            if p[i] > p[j] {
                s = -s;
            }
        }
    }
    s
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    if n < k {
        return vec![];
    }
    let mut out = subsets(n - 1, k);
    for mut s in subsets(n - 1, k - 1) {
        s.push(n - 1);
        out.push(s);
    }
    out
}

// Univariate polynomials, ascending powers, used for the gcd.
fn poly_trim(mut p: Vec<Q>) -> Vec<Q> {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
    p
}

fn poly_rem(a: &[Q], b: &[Q]) -> Vec<Q> {
    let mut r = poly_trim(a.to_vec());
    let lead = b.last().unwrap().inv().unwrap();
    while r.len() >= b.len() {
        let q = r.last().unwrap() * &lead;
        let shift = r.len() - b.len();
        for (i, c) in b.iter().enumerate() {
            let t = &q * c;
            r[shift + i] -= &t;
        }
        r = poly_trim(r);
    }
    r
}

/// Greatest common divisor, normalized so the highest λ power has coefficient 1.
pub fn gcd(a: &Form, b: &Form) -> Form {
    if a.is_empty() {
        return normalize(b);
    }
    if b.is_empty() {
        return normalize(a);
    }
    let mu = |f: &Form| f.iter().rev().take_while(|c| c.is_zero()).count();
    let e = mu(a).min(mu(b));
    // Setting μ = 1 leaves coefficient j on λ^j.
    let (mut x, mut y) = (poly_trim(a.clone()), poly_trim(b.clone()));
    while !y.is_empty() {
        let r = poly_rem(&x, &y);
        x = y;
        y = r;
    }
    let mut g = x;
    g.extend(std::iter::repeat_n(Q::zero(), e));
    normalize(&g)
}

fn normalize(f: &Form) -> Form {
    match f.iter().rev().find(|c| !c.is_zero()) {
        None => vec![],
        Some(c) => {
            let inv = c.inv().unwrap();
            f.iter().map(|x| x * &inv).collect()
        }
    }
}

/// Entry (i, j) of μR + λS.
pub fn entry(r: &[Vec<Q>], s: &[Vec<Q>], i: usize, j: usize) -> Form {
    trim(vec![r[i][j].clone(), s[i][j].clone()])
}

/// gcd of all k-minors; zero when every minor vanishes.
pub fn minor_gcd(r: &[Vec<Q>], s: &[Vec<Q>], k: usize) -> Form {
    let (m, n) = (r.len(), r.first().map_or(0, |row| row.len()));
    if k == 0 {
        return vec![Q::one()];
    }
    let mut g: Form = vec![];
    for rows in subsets(m, k) {
        for cols in subsets(n, k) {
            let sub: Vec<Vec<Form>> =
                rows.iter().map(|&i| cols.iter().map(|&j| entry(r, s, i, j)).collect()).collect();
            g = gcd(&g, &det(&sub));
        }
    }
    g
}

/// `a = c · b` for some non-zero scalar c (both zero counts).
pub fn associates(a: &Form, b: &[Q]) -> bool {
    let b = trim(b.to_vec());
    if a.is_empty() || b.is_empty() {
        return a.is_empty() && b.is_empty();
    }
    if a.len() != b.len() {
        return false;
    }
    let k = b.iter().position(|c| !c.is_zero()).unwrap();
    if a[k].is_zero() {
        return false;
    }
    let c = &a[k] / &b[k];
    a.iter().zip(&b).all(|(x, y)| *x == &c * y)
}

/// Rank by plain Gaussian elimination.
pub fn rank(mut rows: Vec<Vec<Q>>) -> usize {
    let cols = rows.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(rank, p);
        let inv = rows[rank][c].inv().unwrap();
        for i in 0..rows.len() {
            if i != rank && !rows[i][c].is_zero() {
                let f = &rows[i][c] * &inv;
                for j in c..cols {
                    let t = &f * &rows[rank][j];
                    rows[i][j] -= &t;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Local ranks of the state with slices R (a = 0) and S (a = 1).
pub fn local_ranks(r: &[Vec<Q>], s: &[Vec<Q>]) -> (usize, usize, usize) {
    let (m, n) = (r.len(), r[0].len());
    let slices = [r, s];
    let a: Vec<Vec<Q>> = slices.iter().map(|sl| sl.iter().flatten().cloned().collect()).collect();
    let b: Vec<Vec<Q>> = (0..m).map(|i| slices.iter().flat_map(|sl| sl[i].clone()).collect()).collect();
    let c: Vec<Vec<Q>> = (0..n).map(|j| slices.iter().flat_map(|sl| (0..m).map(move |i| sl[i][j].clone())).collect()).collect();
    (rank(a), rank(b), rank(c))
}

/// Block of a canonical pencil as (R, S) slices.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Block {
    L(usize),
    Lt(usize),
    /// Jordan-type block of the given size on eigenvalue label `x`.
    J(usize, i64),
}

impl Block {
    fn dims(&self) -> (usize, usize) {
        match *self {
            Block::L(e) => (e, e + 1),
            Block::Lt(v) => (v + 1, v),
            Block::J(e, _) => (e, e),
        }
    }
}

/// Direct sum of blocks, with L = [λ μ] and J = (xμ + λ) on the diagonal, μ above it.
pub fn assemble(blocks: &[Block]) -> (Vec<Vec<Q>>, Vec<Vec<Q>>) {
    let (m, n) = blocks.iter().fold((0, 0), |(a, b), bl| (a + bl.dims().0, b + bl.dims().1));
    let mut r = vec![vec![Q::zero(); n]; m];
    let mut s = r.clone();
    let (mut i0, mut j0) = (0, 0);
    for bl in blocks {
        match *bl {
            Block::L(e) => {
                for i in 0..e {
                    s[i0 + i][j0 + i] = Q::one();
                    r[i0 + i][j0 + i + 1] = Q::one();
                }
            }
            Block::Lt(v) => {
                for i in 0..v {
                    s[i0 + i][j0 + i] = Q::one();
                    r[i0 + i + 1][j0 + i] = Q::one();
                }
            }
            Block::J(e, x) => {
                for i in 0..e {
                    s[i0 + i][j0 + i] = Q::one();
                    r[i0 + i][j0 + i] = Q::from(x);
                    if i + 1 < e {
                        r[i0 + i][j0 + i + 1] = Q::one();
                    }
                }
            }
        }
        let (a, b) = bl.dims();
        i0 += a;
        j0 += b;
    }
    (r, s)
}

/// Number of fully entangled 2×m×n class families, by exhaustive block enumeration.
/// Eigenvalue labels are forgotten beyond the size signature they carry.
pub fn brute_force_class_count(m: usize, n: usize) -> usize {
    let mut catalog = Vec::new();
    for k in 1..=m {
        catalog.push(Block::L(k));
        catalog.push(Block::Lt(k));
        catalog.push(Block::J(k, 0));
    }
    let mut keys = std::collections::BTreeSet::new();
    let mut cur = Vec::new();
    choose(&catalog, 0, m, n, &mut cur, &mut |blocks| {
        let sizes: Vec<usize> = blocks.iter().filter_map(|b| if let Block::J(e, _) = b { Some(*e) } else { None }).collect();
        let rest: Vec<Block> = blocks.iter().filter(|b| !matches!(b, Block::J(..))).cloned().collect();
        // Every labelling of the Jordan blocks by distinct eigenvalues.
        labellings(sizes.len(), &mut |labels| {
            let mut all = rest.clone();
            all.extend(sizes.iter().zip(labels).map(|(&e, &x)| Block::J(e, x as i64)));
            let (r, s) = assemble(&all);
            if local_ranks(&r, &s) != (2, m, n) {
                return;
            }
            let mut sigs: Vec<Vec<usize>> = Vec::new();
            for x in 0..sizes.len() {
                let mut sig: Vec<usize> = sizes.iter().zip(labels).filter(|(_, &l)| l == x).map(|(&e, _)| e).collect();
                if !sig.is_empty() {
                    sig.sort_unstable_by(|a, b| b.cmp(a));
                    sigs.push(sig);
                }
            }
            sigs.sort();
            keys.insert((rest.clone(), sigs));
        });
    });
    keys.len()
}

fn choose(catalog: &[Block], start: usize, m: usize, n: usize, cur: &mut Vec<Block>, f: &mut impl FnMut(&[Block])) {
    let (a, b) = cur.iter().fold((0, 0), |(a, b), bl| (a + bl.dims().0, b + bl.dims().1));
    if (a, b) == (m, n) {
        f(cur);
        return;
    }
    for (i, bl) in catalog.iter().enumerate().skip(start) {
        let (x, y) = bl.dims();
        if a + x <= m && b + y <= n {
            cur.push(bl.clone());
            choose(catalog, i, m, n, cur, f);
            cur.pop();
        }
    }
}

/// Restricted growth strings: label of block i is at most 1 + max of earlier labels.
fn labellings(k: usize, f: &mut impl FnMut(&[usize])) {
    fn go(k: usize, cur: &mut Vec<usize>, f: &mut impl FnMut(&[usize])) {
        if cur.len() == k {
            f(cur);
            return;
        }
        let next = cur.iter().max().map_or(0, |m| m + 1);
        for l in 0..=next {
            cur.push(l);
            go(k, cur, f);
            cur.pop();
        }
    }
    go(k, &mut Vec::new(), f);
}
