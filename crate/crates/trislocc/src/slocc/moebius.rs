//! Fractional linear maps through prescribed points and matching of eigenvalue multisets.

use num_traits::{One, Zero};

use crate::exact::{Eigenvalue, GaussianRational};
use crate::kcf::SizeSignature;
use crate::pencil::MoebiusMap;

/// Map with eigenvalue action z ↦ (pz + q)/(rz + s).
fn action(p: GaussianRational, q: GaussianRational, r: GaussianRational, s: GaussianRational) -> Option<MoebiusMap> {
    // `MoebiusMap` acts as (αz + γ)/(βz + δ).
    MoebiusMap::new(p, r, q, s).ok()
}

/// The unique map sending a ↦ 0, b ↦ 1, c ↦ ∞ (points pairwise distinct).
pub fn three_point_map(a: &Eigenvalue, b: &Eigenvalue, c: &Eigenvalue) -> Option<MoebiusMap> {
    use Eigenvalue::{Finite as F, Infinite as I};
    if a == b || b == c || a == c {
        return None;
    }
    let one = GaussianRational::one;
    let zero = GaussianRational::zero;
    match (a, b, c) {
        // (b − c)/(z − c)
        (I, F(b), F(c)) => action(zero(), b - c, one(), -c),
        // (z − a)/(z − c)
        (F(a), I, F(c)) => action(one(), -a, one(), -c),
        // (z − a)/(b − a)
        (F(a), F(b), I) => action(one(), -a, zero(), b - a),
        // (z − a)(b − c) / ((z − c)(b − a))
        (F(a), F(b), F(c)) => {
            let bc = b - c;
            let ba = b - a;
            action(bc.clone(), -&(a * &bc), ba.clone(), -&(c * &ba))
        }
        _ => unreachable!("at most one point is infinite"),
    }
}

/// Points not in `used`, drawn from ∞, 0, 1, 2, …
fn fresh_points(used: &[Eigenvalue], count: usize) -> Vec<Eigenvalue> {
    let pool = std::iter::once(Eigenvalue::Infinite).chain((0..).map(Eigenvalue::finite));
    pool.filter(|p| !used.contains(p)).take(count).collect()
}

/// A map sending src[i] ↦ dst[i] for up to three distinct points.
pub fn moebius_through(src: &[Eigenvalue], dst: &[Eigenvalue]) -> Option<MoebiusMap> {
    assert_eq!(src.len(), dst.len());
    assert!(src.len() <= 3, "a fractional linear map is fixed by three points");
    let pad = |v: &[Eigenvalue]| {
        let mut out = v.to_vec();
        out.extend(fresh_points(v, 3 - v.len()));
        out
    };
    let (s, d) = (pad(src), pad(dst));
    let ts = three_point_map(&s[0], &s[1], &s[2])?;
    let td = three_point_map(&d[0], &d[1], &d[2])?;
    Some(td.inverse().compose(&ts))
}

fn maps_onto(t: &MoebiusMap, xs: &[(Eigenvalue, SizeSignature)], ys: &[(Eigenvalue, SizeSignature)]) -> bool {
    xs.iter().all(|(x, s)| {
        let y = t.map_eigenvalue(x);
        ys.iter().any(|(v, sv)| *v == y && sv == s)
    })
}

/// A fractional linear map carrying the signature-labelled eigenvalues `xs` onto `ys`.
///
/// The first min(3, k) eigenvalues of `xs` are sent, in every signature-compatible way, to
/// ordered tuples of `ys`; each candidate is checked on the whole multiset.
pub fn moebius_between(xs: &[(Eigenvalue, SizeSignature)], ys: &[(Eigenvalue, SizeSignature)]) -> Option<MoebiusMap> {
    if xs.len() != ys.len() {
        return None;
    }
    let mut sx: Vec<_> = xs.iter().map(|e| e.1.clone()).collect();
    let mut sy: Vec<_> = ys.iter().map(|e| e.1.clone()).collect();
    sx.sort();
    sy.sort();
    if sx != sy {
        return None;
    }
    let k = xs.len().min(3);
    let src: Vec<Eigenvalue> = xs[..k].iter().map(|e| e.0.clone()).collect();
    let mut pick: Vec<usize> = Vec::with_capacity(k);
    search(xs, ys, &src, &mut pick)
}

fn search(
    xs: &[(Eigenvalue, SizeSignature)],
    ys: &[(Eigenvalue, SizeSignature)],
    src: &[Eigenvalue],
    pick: &mut Vec<usize>,
) -> Option<MoebiusMap> {
    let k = src.len();
    if pick.len() == k {
        let dst: Vec<Eigenvalue> = pick.iter().map(|&j| ys[j].0.clone()).collect();
        let t = moebius_through(src, &dst)?;
        return maps_onto(&t, xs, ys).then_some(t);
    }
    let i = pick.len();
    for j in 0..ys.len() {
        if !pick.contains(&j) && ys[j].1 == xs[i].1 {
            pick.push(j);
            if let Some(t) = search(xs, ys, src, pick) {
                return Some(t);
            }
            pick.pop();
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    fn simple(v: &[Eigenvalue]) -> Vec<(Eigenvalue, SizeSignature)> {
        v.iter().map(|x| (x.clone(), vec![1])).collect()
    }

    #[test]
    fn three_points_to_standard() {
        let pts = [Eigenvalue::finite(5), Eigenvalue::finite(7), Eigenvalue::finite(11)];
        let t = three_point_map(&pts[0], &pts[1], &pts[2]).unwrap();
        assert_eq!(t.map_eigenvalue(&pts[0]), Eigenvalue::finite(0));
        assert_eq!(t.map_eigenvalue(&pts[1]), Eigenvalue::finite(1));
        assert_eq!(t.map_eigenvalue(&pts[2]), Eigenvalue::Infinite);
        for inf_pos in 0..3 {
            let mut p = pts.clone();
            p[inf_pos] = Eigenvalue::Infinite;
            let t = three_point_map(&p[0], &p[1], &p[2]).unwrap();
            assert_eq!(t.map_eigenvalue(&p[0]), Eigenvalue::finite(0));
            assert_eq!(t.map_eigenvalue(&p[1]), Eigenvalue::finite(1));
            assert_eq!(t.map_eigenvalue(&p[2]), Eigenvalue::Infinite);
        }
    }

    #[test]
    fn matching_examples() {
        let e = |v: i64| Eigenvalue::finite(v);
        let a = simple(&[e(0), e(1), Eigenvalue::Infinite]);
        let b = simple(&[e(5), e(7), e(11)]);
        assert!(moebius_between(&a, &b).is_some());
        let c = simple(&[e(0), e(1), e(2), e(3)]);
        let t = moebius_between(&c, &c).unwrap();
        assert!(maps_onto(&t, &c, &c));
        let sig_mismatch = vec![(e(0), vec![2]), (e(1), vec![1])];
        let swapped = vec![(e(0), vec![1]), (e(1), vec![2])];
        let t = moebius_between(&sig_mismatch, &swapped).unwrap();
        assert_eq!(t.map_eigenvalue(&e(0)), e(1));
    }
}
