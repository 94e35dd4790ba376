//! Default route: invariant polynomials from Smith normal forms over ℚ(i)[t].
//!
//! The finite part comes from the dehomogenization at μ = 1; the powers of μ come from a
//! second Smith form of the pencil with μ and λ exchanged.

use super::Pencil;
use crate::exact::{BinaryForm, Poly};

/// Monic invariant factors d₁ | d₂ | … of a polynomial matrix (zero diagonal entries dropped).
pub fn smith_diagonal(mut a: Vec<Vec<Poly>>) -> Vec<Poly> {
    let rows = a.len();
    let cols = a.first().map_or(0, |r| r.len());
    let mut out = Vec::new();
    for t in 0..rows.min(cols) {
        loop {
            // Pivot: non-zero entry of least degree in the trailing block.
            let mut best: Option<(usize, usize, usize)> = None;
            for (i, row) in a.iter().enumerate().skip(t) {
                for (j, e) in row.iter().enumerate().skip(t) {
                    if let Some(d) = e.degree() {
                        if best.is_none_or(|b| d < b.2) {
                            best = Some((i, j, d));
                        }
                    }
                }
            }
            let Some((pi, pj, _)) = best else {
                return out;
            };
            a.swap(t, pi);
            for row in a.iter_mut() {
                row.swap(t, pj);
            }
            let mut clean = true;
            for i in t + 1..rows {
                if a[i][t].is_zero() {
                    continue;
                }
                let (q, r) = a[i][t].div_rem(&a[t][t]);
                for j in t..cols {
                    let sub = q.mul(&a[t][j]);
                    a[i][j] = a[i][j].sub(&sub);
                }
                if !r.is_zero() {
                    clean = false;
                }
            }
            for j in t + 1..cols {
                if a[t][j].is_zero() {
                    continue;
                }
                let (q, r) = a[t][j].div_rem(&a[t][t]);
                for i in t..rows {
                    let sub = q.mul(&a[i][t]);
                    a[i][j] = a[i][j].sub(&sub);
                }
                if !r.is_zero() {
                    clean = false;
                }
            }
            if !clean {
                continue;
            }
            // The pivot must divide the whole trailing block; otherwise fold the offending row in.
            let bad = (t + 1..rows).find(|&i| (t + 1..cols).any(|j| !a[t][t].divides(&a[i][j])));
            match bad {
                Some(i) => {
                    for j in t..cols {
                        let v = a[t][j].add(&a[i][j]);
                        a[t][j] = v;
                    }
                }
                None => break,
            }
        }
        out.push(a[t][t].monic());
    }
    out
}

fn dehomogenized(p: &Pencil) -> Vec<Vec<Poly>> {
    (0..p.m())
        .map(|i| {
            (0..p.n())
                .map(|j| Poly::linear(p.r()[(i, j)].clone(), p.s()[(i, j)].clone()))
                .collect()
        })
        .collect()
}

/// E_1 | E_2 | … | E_r, monic-normalized, from the Smith route.
pub fn invariant_polynomials(p: &Pencil) -> Vec<BinaryForm> {
    let finite = smith_diagonal(dehomogenized(p));
    let swapped = smith_diagonal(dehomogenized(&p.swapped()));
    assert_eq!(finite.len(), swapped.len(), "rank differs between the two Smith forms");
    finite
        .iter()
        .zip(&swapped)
        .map(|(f, s)| BinaryForm::homogenize(f, s.zero_order()).monic())
        .collect()
}
