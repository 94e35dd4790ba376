//! Univariate polynomials over ℚ(i), used for the dehomogenized side of binary forms
//! and as the ring behind the Smith normal form.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::gauss_int::{self, GaussInt};
use super::scalar::GaussianRational;

/// Coefficients in ascending degree, no trailing zeros. The zero polynomial is empty.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Poly {
    c: Vec<GaussianRational>,
}

impl Poly {
    pub fn new(mut c: Vec<GaussianRational>) -> Self {
        while c.last().is_some_and(|x| x.is_zero()) {
            c.pop();
        }
        Poly { c }
    }

    pub fn zero() -> Self {
        Poly { c: Vec::new() }
    }

    pub fn one() -> Self {
        Poly::constant(GaussianRational::one())
    }

    pub fn constant(a: GaussianRational) -> Self {
        Poly::new(vec![a])
    }

    /// The monomial `a·t^k`.
    pub fn monomial(a: GaussianRational, k: usize) -> Self {
        let mut c = vec![GaussianRational::zero(); k + 1];
        c[k] = a;
        Poly::new(c)
    }

    /// `a + b·t`.
    pub fn linear(a: GaussianRational, b: GaussianRational) -> Self {
        Poly::new(vec![a, b])
    }

    pub fn coeffs(&self) -> &[GaussianRational] {
        &self.c
    }

    pub fn coeff(&self, k: usize) -> GaussianRational {
        self.c.get(k).cloned().unwrap_or_else(GaussianRational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.c.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&GaussianRational> {
        self.c.last()
    }

    pub fn is_constant(&self) -> bool {
        self.c.len() <= 1
    }

    pub fn add(&self, o: &Poly) -> Poly {
        let n = self.c.len().max(o.c.len());
        Poly::new((0..n).map(|k| &self.coeff(k) + &o.coeff(k)).collect())
    }

    pub fn sub(&self, o: &Poly) -> Poly {
        let n = self.c.len().max(o.c.len());
        Poly::new((0..n).map(|k| &self.coeff(k) - &o.coeff(k)).collect())
    }

    pub fn neg(&self) -> Poly {
        Poly::new(self.c.iter().map(|x| -x).collect())
    }

    pub fn mul(&self, o: &Poly) -> Poly {
        if self.is_zero() || o.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![GaussianRational::zero(); self.c.len() + o.c.len() - 1];
        for (i, a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.c.iter().enumerate() {
                out[i + j] += &(a * b);
            }
        }
        Poly::new(out)
    }

    pub fn scale(&self, a: &GaussianRational) -> Poly {
        Poly::new(self.c.iter().map(|x| x * a).collect())
    }

    pub fn pow(&self, e: u32) -> Poly {
        let mut acc = Poly::one();
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Euclidean division; panics on a zero divisor.
    pub fn div_rem(&self, d: &Poly) -> (Poly, Poly) {
        let dd = d.degree().expect("polynomial division by zero");
        let lead_inv = d.c[dd].inv().unwrap();
        let mut r = self.c.clone();
        if r.len() <= dd {
            return (Poly::zero(), self.clone());
        }
        let mut q = vec![GaussianRational::zero(); r.len() - dd];
        for k in (dd..r.len()).rev() {
            if r[k].is_zero() {
                continue;
            }
            let f = &r[k] * &lead_inv;
            for (j, dc) in d.c.iter().enumerate() {
                let t = &f * dc;
                r[k - dd + j] -= &t;
            }
            q[k - dd] = f;
        }
        r.truncate(dd);
        (Poly::new(q), Poly::new(r))
    }

    pub fn rem(&self, d: &Poly) -> Poly {
        self.div_rem(d).1
    }

    /// Quotient when `d` divides `self` exactly.
    pub fn div_exact(&self, d: &Poly) -> Option<Poly> {
        if d.is_zero() {
            return None;
        }
        let (q, r) = self.div_rem(d);
        r.is_zero().then_some(q)
    }

    pub fn divides(&self, f: &Poly) -> bool {
        if self.is_zero() {
            return f.is_zero();
        }
        f.rem(self).is_zero()
    }

    /// Scaled so the leading coefficient is one; zero stays zero.
    pub fn monic(&self) -> Poly {
        match self.leading() {
            None => Poly::zero(),
            Some(l) => {
                let inv = l.inv().unwrap();
                self.scale(&inv)
            }
        }
    }

    /// Monic gcd; gcd(0, 0) = 0.
    pub fn gcd(&self, o: &Poly) -> Poly {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn derivative(&self) -> Poly {
        Poly::new(
            self.c
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, x)| x * &GaussianRational::from_int(k as i64))
                .collect(),
        )
    }

    pub fn eval(&self, t: &GaussianRational) -> GaussianRational {
        let mut acc = GaussianRational::zero();
        for a in self.c.iter().rev() {
            acc = &(&acc * t) + a;
        }
        acc
    }

    /// Multiplicity of `t = 0` as a root.
    pub fn zero_order(&self) -> usize {
        self.c.iter().take_while(|x| x.is_zero()).count()
    }

    /// Yun's square-free decomposition: `monic(self) = Π fᵢ^i`, returned as `(fᵢ, i)` with
    /// non-constant monic `fᵢ`.
    pub fn square_free(&self) -> Vec<(Poly, u32)> {
        let f = self.monic();
        if f.degree().unwrap_or(0) == 0 {
            return Vec::new();
        }
        let mut out = Vec::new();
        let fp = f.derivative();
        let a0 = f.gcd(&fp);
        let mut b = f.div_exact(&a0).unwrap();
        let mut c = fp.div_exact(&a0).unwrap();
        let mut d = c.sub(&b.derivative());
        let mut i = 1;
        while !b.is_constant() {
            let a = b.gcd(&d);
            if !a.is_constant() {
                out.push((a.monic(), i));
            }
            b = b.div_exact(&a).unwrap();
            c = d.div_exact(&a).unwrap();
            d = c.sub(&b.derivative());
            i += 1;
        }
        out
    }

    /// Distinct roots in ℚ(i) of a square-free polynomial, by the rational root test over ℤ[i].
    pub fn gaussian_roots(&self) -> Vec<GaussianRational> {
        let mut roots = Vec::new();
        let mut f = self.monic();
        let z = f.zero_order();
        if z > 0 {
            roots.push(GaussianRational::zero());
            f = Poly::new(f.c[z..].to_vec());
        }
        let Some(n) = f.degree() else { return roots };
        if n == 0 {
            return roots;
        }
        // Substitute t = y / D so that the monic polynomial gets Gaussian-integer coefficients;
        // its roots in ℚ(i) are then Gaussian integers dividing the constant term.
        let den = f.c.iter().fold(BigInt::one(), |acc, x| acc.lcm(&x.denominator_lcm()));
        let dq = GaussianRational::from_bigint(den.clone());
        let mut scaled = Vec::with_capacity(n + 1);
        let mut dpow = GaussianRational::one();
        for k in (0..=n).rev() {
            scaled.push((k, &f.c[k] * &dpow));
            dpow = &dpow * &dq;
        }
        scaled.sort_by_key(|(k, _)| *k);
        let to_int = |x: &GaussianRational| GaussInt::new(x.re().to_integer(), x.im().to_integer());
        let constant = to_int(&scaled[0].1);
        let g = Poly::new(scaled.into_iter().map(|(_, x)| x).collect());
        let mut seen = Vec::new();
        for cand in gauss_int::divisors(&constant) {
            let y = GaussianRational::new(cand.re.clone().into(), cand.im.clone().into());
            if seen.contains(&y) {
                continue;
            }
            if g.eval(&y).is_zero() {
                roots.push(&y / &dq);
            }
            seen.push(y);
            if roots.len() == n + usize::from(z > 0) {
                break;
            }
        }
        roots.sort();
        roots
    }

    /// Roots in ℚ(i) with multiplicities, and the monic cofactor without such roots.
    pub fn split(&self) -> (Vec<(GaussianRational, u32)>, Poly) {
        assert!(!self.is_zero());
        let mut roots = Vec::new();
        let mut residual = self.monic();
        for (part, mult) in self.square_free() {
            for r in part.gaussian_roots() {
                let lin = Poly::linear(-&r, GaussianRational::one());
                residual = residual.div_exact(&lin.pow(mult)).expect("root multiplicity");
                roots.push((r, mult));
            }
        }
        roots.sort();
        (roots, residual)
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.c.is_empty() {
            return write!(f, "0");
        }
        let terms: Vec<String> = self
            .c
            .iter()
            .enumerate()
            .filter(|(_, x)| !x.is_zero())
            .map(|(k, x)| format!("({x})t^{k}"))
            .collect();
        write!(f, "{}", terms.join(" + "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::scalar::{gc, gr};

    fn from_roots(rs: &[GaussianRational]) -> Poly {
        rs.iter()
            .fold(Poly::one(), |acc, r| acc.mul(&Poly::linear(-r, gr(1))))
    }

    #[test]
    fn division_round_trip() {
        let a = Poly::new(vec![gr(1), gr(2), gr(3), gr(4)]);
        let b = Poly::new(vec![gc(1, 1), gr(2)]);
        let (q, r) = a.div_rem(&b);
        assert_eq!(q.mul(&b).add(&r), a);
        assert!(r.degree().unwrap_or(0) < 1);
    }

    #[test]
    fn gcd_of_products() {
        let f = from_roots(&[gr(1), gr(2), gr(3)]);
        let g = from_roots(&[gr(2), gr(3), gc(0, 1)]);
        assert_eq!(f.gcd(&g), from_roots(&[gr(2), gr(3)]));
    }

    #[test]
    fn square_free_parts() {
        let f = from_roots(&[gr(1), gr(1), gr(2), gr(3), gr(3), gr(3)]);
        let parts = f.square_free();
        assert_eq!(parts, vec![(from_roots(&[gr(2)]), 1), (from_roots(&[gr(1)]), 2), (from_roots(&[gr(3)]), 3)]);
    }

    #[test]
    fn finds_gaussian_roots() {
        let rs = vec![gc(0, 1), GaussianRational::from_frac(-3, 2), gc(2, -1), gr(0)];
        let mut got = from_roots(&rs).scale(&gr(7)).gaussian_roots();
        let mut want = rs.clone();
        got.sort();
        want.sort();
        assert_eq!(got, want);
    }

    #[test]
    fn irreducible_stays_residual() {
        // t² + 2 has roots ±i√2, outside ℚ(i).
        let f = Poly::new(vec![gr(2), gr(0), gr(1)]);
        let (roots, residual) = f.split();
        assert!(roots.is_empty());
        assert_eq!(residual, f);
    }
}
