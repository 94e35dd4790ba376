use std::fmt;

use num_traits::{One, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::poly::Poly;
use super::scalar::GaussianRational;

/// A homogeneous polynomial in (μ, λ): `coeffs[j]` multiplies `μ^(d−j) λ^j`.
///
/// The zero form has no coefficients and no degree.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BinaryForm {
    coeffs: Vec<GaussianRational>,
}

/// A finite eigenvalue `x` (the factor `xμ + λ`) or the eigenvalue ∞ (the factor `μ`).
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum Eigenvalue {
    Finite(GaussianRational),
    Infinite,
}

impl Eigenvalue {
    pub fn finite(v: i64) -> Self {
        Eigenvalue::Finite(GaussianRational::from_int(v))
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, Eigenvalue::Infinite)
    }

    /// The linear form vanishing at this eigenvalue.
    pub fn linear_factor(&self) -> BinaryForm {
        match self {
            Eigenvalue::Finite(x) => BinaryForm::new(vec![x.clone(), GaussianRational::one()]),
            Eigenvalue::Infinite => BinaryForm::mu(),
        }
    }

    pub fn to_json_string(&self) -> String {
        match self {
            Eigenvalue::Finite(x) => x.to_canonical_string(),
            Eigenvalue::Infinite => "inf".to_string(),
        }
    }
}

impl fmt::Display for Eigenvalue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Eigenvalue::Finite(x) => write!(f, "{x}"),
            Eigenvalue::Infinite => write!(f, "inf"),
        }
    }
}

impl std::str::FromStr for Eigenvalue {
    type Err = super::scalar::ParseScalarError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "inf" | "∞" | "infinity" => Ok(Eigenvalue::Infinite),
            t => t.parse().map(Eigenvalue::Finite),
        }
    }
}

impl Serialize for Eigenvalue {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_json_string())
    }
}

impl<'de> Deserialize<'de> for Eigenvalue {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let t = String::deserialize(d)?;
        t.parse().map_err(serde::de::Error::custom)
    }
}

/// Result of splitting a form into linear factors over ℚ(i).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factorization {
    pub scalar: GaussianRational,
    pub mu_power: usize,
    /// Finite roots `x` with multiplicity, for the factors `(xμ + λ)`; sorted by value.
    pub roots: Vec<(GaussianRational, u32)>,
    /// Monic-normalized cofactor with no linear factor over ℚ(i); `1` when the form splits.
    pub residual: BinaryForm,
}

impl Factorization {
    pub fn splits(&self) -> bool {
        self.residual.degree() == Some(0)
    }

    /// Multiply everything back together.
    pub fn expand(&self) -> BinaryForm {
        let mut acc = BinaryForm::constant(self.scalar.clone());
        acc = acc.mul(&BinaryForm::mu().pow(self.mu_power as u32));
        for (x, m) in &self.roots {
            acc = acc.mul(&Eigenvalue::Finite(x.clone()).linear_factor().pow(*m));
        }
        acc.mul(&self.residual)
    }
}

impl BinaryForm {
    pub fn new(coeffs: Vec<GaussianRational>) -> Self {
        if coeffs.iter().all(|c| c.is_zero()) {
            return BinaryForm::zero();
        }
        BinaryForm { coeffs }
    }

    pub fn zero() -> Self {
        BinaryForm { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        BinaryForm::constant(GaussianRational::one())
    }

    pub fn constant(c: GaussianRational) -> Self {
        BinaryForm::new(vec![c])
    }

    pub fn mu() -> Self {
        BinaryForm::new(vec![GaussianRational::one(), GaussianRational::zero()])
    }

    pub fn lambda() -> Self {
        BinaryForm::new(vec![GaussianRational::zero(), GaussianRational::one()])
    }

    /// Convenience constructor from integer coefficients, descending μ-degree.
    pub fn from_ints(cs: &[i64]) -> Self {
        BinaryForm::new(cs.iter().map(|&v| GaussianRational::from_int(v)).collect())
    }

    pub fn coeffs(&self) -> &[GaussianRational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    /// Exponent of the largest power of μ dividing the form.
    pub fn mu_order(&self) -> usize {
        self.coeffs.iter().rev().take_while(|c| c.is_zero()).count()
    }

    /// Exponent of the largest power of λ dividing the form.
    pub fn lambda_order(&self) -> usize {
        self.coeffs.iter().take_while(|c| c.is_zero()).count()
    }

    /// f(1, λ) as a polynomial in λ.
    pub fn dehomogenize(&self) -> Poly {
        Poly::new(self.coeffs.clone())
    }

    /// f(μ, 1) as a polynomial in μ.
    pub fn dehomogenize_mu(&self) -> Poly {
        Poly::new(self.coeffs.iter().rev().cloned().collect())
    }

    /// The form `μ^e · p(λ)` homogenized to degree `deg p + e`.
    pub fn homogenize(p: &Poly, mu_power: usize) -> BinaryForm {
        if p.is_zero() {
            return BinaryForm::zero();
        }
        let mut c = p.coeffs().to_vec();
        c.extend(std::iter::repeat_n(GaussianRational::zero(), mu_power));
        BinaryForm::new(c)
    }

    pub fn eval(&self, mu: &GaussianRational, lambda: &GaussianRational) -> GaussianRational {
        let Some(d) = self.degree() else {
            return GaussianRational::zero();
        };
        let mut acc = GaussianRational::zero();
        for (j, c) in self.coeffs.iter().enumerate() {
            acc += &(&(c * &mu.pow((d - j) as u32)) * &lambda.pow(j as u32));
        }
        acc
    }

    pub fn add(&self, o: &BinaryForm) -> BinaryForm {
        match (self.degree(), o.degree()) {
            (None, _) => o.clone(),
            (_, None) => self.clone(),
            (Some(a), Some(b)) => {
                assert_eq!(a, b, "adding forms of different degree");
                BinaryForm::new(self.coeffs.iter().zip(&o.coeffs).map(|(x, y)| x + y).collect())
            }
        }
    }

    pub fn scale(&self, a: &GaussianRational) -> BinaryForm {
        BinaryForm::new(self.coeffs.iter().map(|x| x * a).collect())
    }

    pub fn mul(&self, o: &BinaryForm) -> BinaryForm {
        if self.is_zero() || o.is_zero() {
            return BinaryForm::zero();
        }
        let mut c = vec![GaussianRational::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in o.coeffs.iter().enumerate() {
                c[i + j] += &(a * b);
            }
        }
        BinaryForm::new(c)
    }

    pub fn pow(&self, e: u32) -> BinaryForm {
        let mut acc = BinaryForm::one();
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Scaled so that the first non-zero coefficient (lowest power of λ) is one.
    pub fn monic(&self) -> BinaryForm {
        match self.coeffs.iter().find(|c| !c.is_zero()) {
            None => BinaryForm::zero(),
            Some(l) => {
                let inv = l.inv().unwrap();
                self.scale(&inv)
            }
        }
    }

    /// Exact quotient `self / d`, if `d` divides `self`.
    pub fn div_exact(&self, d: &BinaryForm) -> Option<BinaryForm> {
        if d.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(BinaryForm::zero());
        }
        let (a, b) = (self.mu_order(), d.mu_order());
        if b > a {
            return None;
        }
        let q = self.dehomogenize().div_exact(&d.dehomogenize())?;
        let out = BinaryForm::homogenize(&q, a - b);
        (out.degree()? + d.degree()? == self.degree()?).then_some(out)
    }

    pub fn divides(&self, f: &BinaryForm) -> bool {
        f.div_exact(self).is_some()
    }

    /// Monic gcd: the μ-content is the smaller μ-order, the rest is a univariate gcd at μ = 1.
    pub fn gcd(&self, o: &BinaryForm) -> BinaryForm {
        match (self.is_zero(), o.is_zero()) {
            (true, true) => return BinaryForm::zero(),
            (true, false) => return o.monic(),
            (false, true) => return self.monic(),
            _ => {}
        }
        let e = self.mu_order().min(o.mu_order());
        let g = self.dehomogenize().gcd(&o.dehomogenize());
        BinaryForm::homogenize(&g, e).monic()
    }

    /// Split into μ-power, ℚ(i) linear factors and a residual without ℚ(i) roots.
    pub fn factor(&self) -> Factorization {
        assert!(!self.is_zero(), "factoring the zero form");
        let mu_power = self.mu_order();
        let p = self.dehomogenize();
        let (roots, residual_poly) = p.split();
        // p(λ) = lead · Π(λ − r)^m · residual; the factor (xμ + λ) has root λ = −x.
        let roots: Vec<(GaussianRational, u32)> = {
            let mut v: Vec<_> = roots.into_iter().map(|(r, m)| (-r, m)).collect();
            v.sort();
            v
        };
        let residual = BinaryForm::homogenize(&residual_poly, 0).monic();
        let mut fact = Factorization {
            scalar: GaussianRational::one(),
            mu_power,
            roots,
            residual,
        };
        // Recover the scalar from any non-zero coefficient of the unscaled product.
        let expanded = fact.expand();
        let (k, c) = self.coeffs.iter().enumerate().find(|(_, c)| !c.is_zero()).unwrap();
        fact.scalar = c / &expanded.coeffs[k];
        fact
    }
}

/// `gcd(f, g)` as a free function.
pub fn form_gcd(f: &BinaryForm, g: &BinaryForm) -> BinaryForm {
    f.gcd(g)
}

/// `factor_form(f)` as a free function.
pub fn factor_form(f: &BinaryForm) -> Factorization {
    f.factor()
}

impl fmt::Display for BinaryForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let Some(d) = self.degree() else {
            return write!(f, "0");
        };
        let mut out = String::new();
        for (j, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mono = match (d - j, j) {
                (0, 0) => String::new(),
                (a, b) => {
                    let pw = |s: &str, e: usize| match e {
                        0 => String::new(),
                        1 => s.to_string(),
                        _ => format!("{s}^{e}"),
                    };
                    format!("{}{}", pw("μ", a), pw("λ", b))
                }
            };
            let ct = c.to_string();
            let body = if mono.is_empty() {
                ct
            } else if c.is_one() {
                mono
            } else if ct == "-1" {
                format!("-{mono}")
            } else if c.is_real() {
                format!("{ct}{mono}")
            } else {
                format!("({ct}){mono}")
            };
            if !out.is_empty() && !body.starts_with('-') {
                out.push('+');
            }
            out.push_str(&body);
        }
        write!(f, "{out}")
    }
}

impl fmt::Debug for BinaryForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl Serialize for BinaryForm {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.coeffs.serialize(s)
    }
}

impl<'de> Deserialize<'de> for BinaryForm {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        Ok(BinaryForm::new(Vec::<GaussianRational>::deserialize(d)?))
    }
}
