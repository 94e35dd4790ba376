//! Reference route: D_k as the gcd of all k-minors, each minor obtained by interpolation.

use num_traits::Zero;

use super::{pencil_rank, Pencil};
use crate::exact::{BinaryForm, GaussianRational, Matrix};

/// Minor enumeration is exponential; beyond this min(m, n) callers use the Smith route.
pub const MINOR_ENUMERATION_LIMIT: usize = 6;

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

/// The k×k minor on the given rows and columns as a degree-k form.
fn minor(p: &Pencil, rows: &[usize], cols: &[usize]) -> BinaryForm {
    let k = rows.len();
    let sub = |m: &Matrix| m.select_rows(rows).select_cols(cols);
    let (r, s) = (sub(p.r()), sub(p.s()));
    // det(R + tS) has degree ≤ k in t; Newton interpolation through t = 0..k.
    let ts: Vec<GaussianRational> = (0..=k as i64).map(GaussianRational::from_int).collect();
    let mut dd: Vec<GaussianRational> = ts.iter().map(|t| r.add(&s.scale(t)).det()).collect();
    for lvl in 1..=k {
        for i in (lvl..=k).rev() {
            let den = &ts[i] - &ts[i - lvl];
            dd[i] = &(&dd[i] - &dd[i - 1]) / &den;
        }
    }
    let mut coeffs = vec![GaussianRational::zero(); k + 1];
    for i in (0..=k).rev() {
        // coeffs ← coeffs·(t − ts[i]) + dd[i]
        let mut next = vec![GaussianRational::zero(); k + 1];
        for j in 0..k {
            if !coeffs[j].is_zero() {
                next[j + 1] += &coeffs[j];
                next[j] -= &(&coeffs[j] * &ts[i]);
            }
        }
        next[0] += &dd[i];
        coeffs = next;
    }
    // Coefficient of t^j is the coefficient of μ^(k−j) λ^j.
    BinaryForm::new(coeffs)
}

/// D_k by enumerating every k-minor; stops early once the running gcd is constant.
pub fn k_minor_gcd_via_minors(p: &Pencil, k: usize) -> BinaryForm {
    if k == 0 {
        return BinaryForm::one();
    }
    if k > p.m().min(p.n()) {
        return BinaryForm::zero();
    }
    let rows = combinations(p.m(), k);
    let cols = combinations(p.n(), k);
    let mut g = BinaryForm::zero();
    for rs in &rows {
        for cs in &cols {
            let mnr = minor(p, rs, cs);
            if mnr.is_zero() {
                continue;
            }
            g = g.gcd(&mnr);
            if g.degree() == Some(0) {
                return g;
            }
        }
    }
    g
}

/// E_k = D_k / D_{k−1} for k = 1..rank, from the minor route.
pub fn invariant_polynomials_via_minors(p: &Pencil) -> Vec<BinaryForm> {
    let r = pencil_rank(p);
    let ds: Vec<BinaryForm> = (0..=r).map(|k| k_minor_gcd_via_minors(p, k)).collect();
    (1..=r)
        .map(|k| ds[k].div_exact(&ds[k - 1]).expect("D_{k-1} divides D_k").monic())
        .collect()
}
