//! Gaussian integers, just enough to enumerate divisors for the rational root test.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct GaussInt {
    pub re: BigInt,
    pub im: BigInt,
}

/// Trial division stops here; a cofactor left over is treated as prime.
const TRIAL_LIMIT: u64 = 1_000_000;

impl GaussInt {
    pub fn new(re: BigInt, im: BigInt) -> Self {
        GaussInt { re, im }
    }

    pub fn from_i64(re: i64, im: i64) -> Self {
        GaussInt::new(re.into(), im.into())
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn norm(&self) -> BigInt {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn conj(&self) -> Self {
        GaussInt::new(self.re.clone(), -self.im.clone())
    }

    pub fn mul(&self, o: &GaussInt) -> GaussInt {
        GaussInt::new(
            &self.re * &o.re - &self.im * &o.im,
            &self.re * &o.im + &self.im * &o.re,
        )
    }

    /// Exact quotient if `o` divides `self`.
    pub fn div_exact(&self, o: &GaussInt) -> Option<GaussInt> {
        let n = o.norm();
        let num = self.mul(&o.conj());
        let (qr, rr) = num.re.div_rem(&n);
        let (qi, ri) = num.im.div_rem(&n);
        (rr.is_zero() && ri.is_zero()).then(|| GaussInt::new(qr, qi))
    }

    fn div_round(&self, o: &GaussInt) -> GaussInt {
        let n = o.norm();
        let num = self.mul(&o.conj());
        let round = |a: &BigInt| -> BigInt {
            let two = BigInt::from(2);
            (a * &two + &n).div_floor(&(&n * &two))
        };
        GaussInt::new(round(&num.re), round(&num.im))
    }

    pub fn gcd(&self, o: &GaussInt) -> GaussInt {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let qb = a.div_round(&b).mul(&b);
            let r = GaussInt::new(&a.re - qb.re, &a.im - qb.im);
            a = b;
            b = r;
        }
        a
    }

    pub fn units() -> [GaussInt; 4] {
        [
            GaussInt::from_i64(1, 0),
            GaussInt::from_i64(0, 1),
            GaussInt::from_i64(-1, 0),
            GaussInt::from_i64(0, -1),
        ]
    }
}

fn sqrt_minus_one_mod(p: &BigInt) -> Option<BigInt> {
    let e = (p - BigInt::one()) / BigInt::from(4);
    let target = p - BigInt::one();
    let mut c = BigInt::from(2);
    while &c < p {
        let t = c.modpow(&e, p);
        if (&t * &t) % p == target {
            return Some(t);
        }
        c += 1;
    }
    None
}

/// Gaussian primes (up to units) above the rational prime `p`.
fn primes_above(p: &BigInt) -> Vec<GaussInt> {
    if *p == BigInt::from(2) {
        return vec![GaussInt::from_i64(1, 1)];
    }
    if (p % BigInt::from(4)) == BigInt::from(3) {
        return vec![GaussInt::new(p.clone(), BigInt::zero())];
    }
    match sqrt_minus_one_mod(p) {
        Some(a) => {
            let pi = GaussInt::new(p.clone(), BigInt::zero()).gcd(&GaussInt::new(a, BigInt::one()));
            vec![pi.clone(), pi.conj()]
        }
        None => vec![GaussInt::new(p.clone(), BigInt::zero())],
    }
}

/// Factorization of a non-zero Gaussian integer into (prime, exponent) pairs, unit dropped.
pub(crate) fn factor(z: &GaussInt) -> Vec<(GaussInt, u32)> {
    assert!(!z.is_zero());
    let mut rest = z.clone();
    let mut out = Vec::new();
    let mut n = z.norm();
    let divide_out = |rest: &mut GaussInt, out: &mut Vec<(GaussInt, u32)>, pi: GaussInt| {
        let mut e = 0;
        while let Some(q) = rest.div_exact(&pi) {
            *rest = q;
            e += 1;
        }
        if e > 0 {
            out.push((pi, e));
        }
    };
    let mut p: u64 = 2;
    while p <= TRIAL_LIMIT && BigInt::from(p) * BigInt::from(p) <= n {
        let bp = BigInt::from(p);
        if (&n % &bp).is_zero() {
            while (&n % &bp).is_zero() {
                n /= &bp;
            }
            for pi in primes_above(&bp) {
                divide_out(&mut rest, &mut out, pi);
            }
        }
        p += if p == 2 { 1 } else { 2 };
    }
    // Whatever survives trial division is prime unless the bound was hit first;
    // in that case it is kept whole and some divisors go unlisted.
    if rest.norm() > BigInt::one() {
        out.push((rest, 1));
    }
    out
}

/// All divisors of `z`, each listed with its four associates.
pub(crate) fn divisors(z: &GaussInt) -> Vec<GaussInt> {
    let fac = factor(z);
    let mut ds = vec![GaussInt::from_i64(1, 0)];
    for (pi, e) in &fac {
        let mut next = Vec::with_capacity(ds.len() * (*e as usize + 1));
        for d in &ds {
            let mut acc = d.clone();
            next.push(acc.clone());
            for _ in 0..*e {
                acc = acc.mul(pi);
                next.push(acc.clone());
            }
        }
        ds = next;
    }
    let mut out = Vec::with_capacity(ds.len() * 4);
    for d in ds {
        for u in GaussInt::units() {
            out.push(d.mul(&u));
        }
    }
    out
}
