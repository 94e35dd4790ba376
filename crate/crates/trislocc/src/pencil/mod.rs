//! Pencils μR + λS, the state ↔ pencil correspondence and the action of local operators.

mod minors;
mod smith;

use std::fmt;

use num_traits::{One, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::exact::{BinaryForm, Eigenvalue, GaussianRational, Matrix};

pub use minors::{invariant_polynomials_via_minors, k_minor_gcd_via_minors, MINOR_ENUMERATION_LIMIT};
pub use smith::{invariant_polynomials, smith_diagonal};

/// Unnormalized amplitudes of a 2×m×n state; `slices[a]` holds the m×n block for `|a⟩`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct StateTensor {
    slices: [Matrix; 2],
}

/// The pencil μR + λS.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Pencil {
    r: Matrix,
    s: Matrix,
}

/// An invertible substitution of the pencil variables, applied as `R' = αR + γS`,
/// `S' = βR + δS`.
///
/// On eigenvalues it acts as `x ↦ (αx + γ)/(βx + δ)`, and the matrix of the corresponding
/// operator on the first party's qubit is `[[α, γ], [β, δ]]`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct MoebiusMap {
    pub alpha: GaussianRational,
    pub beta: GaussianRational,
    pub gamma: GaussianRational,
    pub delta: GaussianRational,
}

impl MoebiusMap {
    pub fn new(
        alpha: GaussianRational,
        beta: GaussianRational,
        gamma: GaussianRational,
        delta: GaussianRational,
    ) -> Result<Self> {
        let m = MoebiusMap { alpha, beta, gamma, delta };
        if m.det().is_zero() {
            return Err(Error::SingularMap);
        }
        Ok(m)
    }

    pub fn from_ints(a: i64, b: i64, c: i64, d: i64) -> Result<Self> {
        MoebiusMap::new(a.into(), b.into(), c.into(), d.into())
    }

    pub fn identity() -> Self {
        MoebiusMap::from_ints(1, 0, 0, 1).unwrap()
    }

    pub fn det(&self) -> GaussianRational {
        &(&self.alpha * &self.delta) - &(&self.beta * &self.gamma)
    }

    /// Operator on the first party's qubit realizing this substitution.
    pub fn operator(&self) -> Matrix {
        Matrix::from_rows(vec![
            vec![self.alpha.clone(), self.gamma.clone()],
            vec![self.beta.clone(), self.delta.clone()],
        ])
    }

    /// Inverse of [`MoebiusMap::operator`].
    pub fn from_operator(a: &Matrix) -> Result<Self> {
        if a.shape() != (2, 2) {
            return Err(Error::ShapeMismatch(format!("Alice operator must be 2x2, got {:?}", a.shape())));
        }
        MoebiusMap::new(a[(0, 0)].clone(), a[(1, 0)].clone(), a[(0, 1)].clone(), a[(1, 1)].clone())
    }

    /// Image of an eigenvalue under the induced fractional linear map.
    pub fn map_eigenvalue(&self, x: &Eigenvalue) -> Eigenvalue {
        let (p, q) = match x {
            Eigenvalue::Finite(v) => (v.clone(), GaussianRational::one()),
            Eigenvalue::Infinite => (GaussianRational::one(), GaussianRational::zero()),
        };
        let num = &(&self.alpha * &p) + &(&self.gamma * &q);
        let den = &(&self.beta * &p) + &(&self.delta * &q);
        if den.is_zero() {
            Eigenvalue::Infinite
        } else {
            Eigenvalue::Finite(&num / &den)
        }
    }

    /// `self` after `first`, as maps on eigenvalues.
    pub fn compose(&self, first: &MoebiusMap) -> MoebiusMap {
        MoebiusMap::from_operator(&self.operator().mul(&first.operator())).unwrap()
    }

    pub fn inverse(&self) -> MoebiusMap {
        MoebiusMap::from_operator(&self.operator().inverse().unwrap()).unwrap()
    }
}

fn mat_json(m: &Matrix) -> Vec<Vec<String>> {
    m.to_rows()
        .into_iter()
        .map(|r| r.into_iter().map(|x| x.to_canonical_string()).collect())
        .collect()
}

impl Pencil {
    pub fn new(r: Matrix, s: Matrix) -> Result<Self> {
        if r.shape() != s.shape() {
            return Err(Error::ShapeMismatch(format!(
                "R is {:?} but S is {:?}",
                r.shape(),
                s.shape()
            )));
        }
        Ok(Pencil { r, s })
    }

    pub fn zeros(m: usize, n: usize) -> Self {
        Pencil {
            r: Matrix::zeros(m, n),
            s: Matrix::zeros(m, n),
        }
    }

    /// Build from a grid of linear forms written as `(μ-coefficient, λ-coefficient)`.
    pub fn from_entries(rows: &[Vec<(GaussianRational, GaussianRational)>]) -> Self {
        let r = Matrix::from_rows(rows.iter().map(|row| row.iter().map(|e| e.0.clone()).collect()).collect());
        let s = Matrix::from_rows(rows.iter().map(|row| row.iter().map(|e| e.1.clone()).collect()).collect());
        Pencil { r, s }
    }

    /// Integer pencil from `(μ, λ)` coefficient pairs.
    pub fn from_int_entries(rows: &[&[(i64, i64)]]) -> Self {
        let conv: Vec<Vec<_>> = rows
            .iter()
            .map(|r| r.iter().map(|&(a, b)| (GaussianRational::from_int(a), GaussianRational::from_int(b))).collect())
            .collect();
        Pencil::from_entries(&conv)
    }

    pub fn m(&self) -> usize {
        self.r.rows()
    }

    pub fn n(&self) -> usize {
        self.r.cols()
    }

    pub fn shape(&self) -> (usize, usize) {
        self.r.shape()
    }

    pub fn r(&self) -> &Matrix {
        &self.r
    }

    pub fn s(&self) -> &Matrix {
        &self.s
    }

    pub fn is_zero(&self) -> bool {
        self.r.is_zero() && self.s.is_zero()
    }

    /// Entry (i, j) as a linear form.
    pub fn entry(&self, i: usize, j: usize) -> BinaryForm {
        BinaryForm::new(vec![self.r[(i, j)].clone(), self.s[(i, j)].clone()])
    }

    /// The constant matrix μR + λS at a point.
    pub fn eval(&self, mu: &GaussianRational, lambda: &GaussianRational) -> Matrix {
        self.r.scale(mu).add(&self.s.scale(lambda))
    }

    pub fn transpose(&self) -> Pencil {
        Pencil {
            r: self.r.transpose(),
            s: self.s.transpose(),
        }
    }

    /// The pencil with the roles of μ and λ exchanged.
    pub fn swapped(&self) -> Pencil {
        Pencil {
            r: self.s.clone(),
            s: self.r.clone(),
        }
    }

    pub fn direct_sum(&self, o: &Pencil) -> Pencil {
        Pencil {
            r: self.r.direct_sum(&o.r),
            s: self.s.direct_sum(&o.s),
        }
    }

    pub fn select_cols(&self, idx: &[usize]) -> Pencil {
        Pencil {
            r: self.r.select_cols(idx),
            s: self.s.select_cols(idx),
        }
    }

    pub fn select_rows(&self, idx: &[usize]) -> Pencil {
        Pencil {
            r: self.r.select_rows(idx),
            s: self.s.select_rows(idx),
        }
    }

    /// Multi-line rendering with `·` for zero entries.
    pub fn pretty(&self) -> String {
        let cells: Vec<Vec<String>> = (0..self.m())
            .map(|i| {
                (0..self.n())
                    .map(|j| {
                        let e = self.entry(i, j);
                        if e.is_zero() {
                            "·".to_string()
                        } else {
                            e.to_string()
                        }
                    })
                    .collect()
            })
            .collect();
        let width = cells.iter().flatten().map(|c| c.chars().count()).max().unwrap_or(1);
        cells
            .iter()
            .map(|row| {
                let padded: Vec<String> = row.iter().map(|c| format!("{c:>width$}")).collect();
                format!("[ {} ]", padded.join("  "))
            })
            .collect::<Vec<_>>()
            .join("\n")
    }
}

impl fmt::Debug for Pencil {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Pencil {}x{}", self.m(), self.n())?;
        write!(f, "{}", self.pretty())
    }
}

#[derive(Serialize, Deserialize)]
struct PencilJson {
    m: usize,
    n: usize,
    #[serde(rename = "R")]
    r: Vec<Vec<GaussianRational>>,
    #[serde(rename = "S")]
    s: Vec<Vec<GaussianRational>>,
}

impl Serialize for Pencil {
    fn serialize<S: Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Out {
            m: usize,
            n: usize,
            #[serde(rename = "R")]
            r: Vec<Vec<String>>,
            #[serde(rename = "S")]
            s: Vec<Vec<String>>,
        }
        Out {
            m: self.m(),
            n: self.n(),
            r: mat_json(&self.r),
            s: mat_json(&self.s),
        }
        .serialize(ser)
    }
}

impl<'de> Deserialize<'de> for Pencil {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let raw = PencilJson::deserialize(d)?;
        let check = |rows: &Vec<Vec<GaussianRational>>, name: &str| {
            if rows.len() != raw.m || rows.iter().any(|r| r.len() != raw.n) {
                return Err(D::Error::custom(format!("{name} does not have shape {}x{}", raw.m, raw.n)));
            }
            Ok(())
        };
        check(&raw.r, "R")?;
        check(&raw.s, "S")?;
        let to_m = |rows: Vec<Vec<GaussianRational>>| {
            if raw.m == 0 {
                Matrix::zeros(0, raw.n)
            } else {
                Matrix::from_rows(rows)
            }
        };
        Ok(Pencil {
            r: to_m(raw.r),
            s: to_m(raw.s),
        })
    }
}

impl StateTensor {
    pub fn new(zero: Matrix, one: Matrix) -> Result<Self> {
        if zero.shape() != one.shape() {
            return Err(Error::ShapeMismatch("slices of different shape".into()));
        }
        Ok(StateTensor { slices: [zero, one] })
    }

    pub fn zeros(m: usize, n: usize) -> Self {
        StateTensor {
            slices: [Matrix::zeros(m, n), Matrix::zeros(m, n)],
        }
    }

    /// Sum of basis kets `|a b c⟩` with unit amplitude.
    pub fn from_kets(m: usize, n: usize, kets: &[(usize, usize, usize)]) -> Self {
        let mut s = StateTensor::zeros(m, n);
        for &(a, b, c) in kets {
            s.slices[a][(b, c)] += &GaussianRational::one();
        }
        s
    }

    pub fn m(&self) -> usize {
        self.slices[0].rows()
    }

    pub fn n(&self) -> usize {
        self.slices[0].cols()
    }

    pub fn amplitude(&self, a: usize, b: usize, c: usize) -> &GaussianRational {
        &self.slices[a][(b, c)]
    }

    pub fn set(&mut self, a: usize, b: usize, c: usize, v: GaussianRational) {
        self.slices[a][(b, c)] = v;
    }

    pub fn slice(&self, a: usize) -> &Matrix {
        &self.slices[a]
    }

    pub fn is_zero(&self) -> bool {
        self.slices.iter().all(|s| s.is_zero())
    }

    /// `(A ⊗ B ⊗ C)|ψ⟩` with A 2×2, B m'×m, C n'×n.
    pub fn apply_local(&self, a: &Matrix, b: &Matrix, c: &Matrix) -> Result<StateTensor> {
        if a.shape() != (2, 2) || b.cols() != self.m() || c.cols() != self.n() {
            return Err(Error::ShapeMismatch(format!(
                "operators {:?}, {:?}, {:?} on a 2x{}x{} state",
                a.shape(),
                b.shape(),
                c.shape(),
                self.m(),
                self.n()
            )));
        }
        let ct = c.transpose();
        let moved: Vec<Matrix> = self.slices.iter().map(|s| b.mul(s).mul(&ct)).collect();
        let mut out = [Matrix::zeros(b.rows(), c.rows()), Matrix::zeros(b.rows(), c.rows())];
        for (ap, slot) in out.iter_mut().enumerate() {
            *slot = moved[0].scale(&a[(ap, 0)]).add(&moved[1].scale(&a[(ap, 1)]));
        }
        Ok(StateTensor { slices: out })
    }

    /// Non-zero amplitudes in (a, b, c) order.
    pub fn nonzero(&self) -> Vec<(usize, usize, usize, GaussianRational)> {
        let mut out = Vec::new();
        for a in 0..2 {
            for b in 0..self.m() {
                for c in 0..self.n() {
                    let v = &self.slices[a][(b, c)];
                    if !v.is_zero() {
                        out.push((a, b, c, v.clone()));
                    }
                }
            }
        }
        out
    }

    /// Ket notation such as `|001⟩+2|010⟩`; indices beyond 9 are comma separated.
    pub fn to_ket_string(&self) -> String {
        let wide = self.m() > 10 || self.n() > 10;
        let terms: Vec<String> = self
            .nonzero()
            .into_iter()
            .map(|(a, b, c, v)| {
                let ket = if wide {
                    format!("|{a},{b},{c}⟩")
                } else {
                    format!("|{a}{b}{c}⟩")
                };
                if v.is_one() {
                    ket
                } else if v.is_real() {
                    format!("{v}{ket}")
                } else {
                    format!("({v}){ket}")
                }
            })
            .collect();
        if terms.is_empty() {
            "0".into()
        } else {
            terms.join("+").replace("+-", "-")
        }
    }
}

impl fmt::Debug for StateTensor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "State 2x{}x{}: {}", self.m(), self.n(), self.to_ket_string())
    }
}

#[derive(Serialize, Deserialize)]
struct AmpJson {
    a: usize,
    b: usize,
    c: usize,
    v: GaussianRational,
}

#[derive(Serialize, Deserialize)]
struct StateJson {
    m: usize,
    n: usize,
    amplitudes: Vec<AmpJson>,
}

impl Serialize for StateTensor {
    fn serialize<S: Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        StateJson {
            m: self.m(),
            n: self.n(),
            amplitudes: self.nonzero().into_iter().map(|(a, b, c, v)| AmpJson { a, b, c, v }).collect(),
        }
        .serialize(ser)
    }
}

impl<'de> Deserialize<'de> for StateTensor {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let raw = StateJson::deserialize(d)?;
        if raw.m == 0 || raw.n == 0 {
            return Err(D::Error::custom("state dimensions must be positive"));
        }
        let mut s = StateTensor::zeros(raw.m, raw.n);
        for e in raw.amplitudes {
            if e.a > 1 || e.b >= raw.m || e.c >= raw.n {
                return Err(D::Error::custom(format!("amplitude index ({},{},{}) out of range", e.a, e.b, e.c)));
            }
            s.slices[e.a][(e.b, e.c)] = e.v;
        }
        Ok(s)
    }
}

/// R[j][k] = ⟨0jk|ψ⟩, S[j][k] = ⟨1jk|ψ⟩.
pub fn pencil_from_state(s: &StateTensor) -> Pencil {
    Pencil {
        r: s.slices[0].clone(),
        s: s.slices[1].clone(),
    }
}

pub fn state_from_pencil(p: &Pencil) -> StateTensor {
    StateTensor {
        slices: [p.r.clone(), p.s.clone()],
    }
}

/// Substitute the pencil variables: `R' = αR + γS`, `S' = βR + δS`.
pub fn apply_alice(p: &Pencil, a: &MoebiusMap) -> Result<Pencil> {
    if a.det().is_zero() {
        return Err(Error::SingularMap);
    }
    Ok(Pencil {
        r: p.r.scale(&a.alpha).add(&p.s.scale(&a.gamma)),
        s: p.r.scale(&a.beta).add(&p.s.scale(&a.delta)),
    })
}

/// `B (μR + λS) Cᵀ`.
pub fn apply_bc(p: &Pencil, b: &Matrix, c: &Matrix) -> Result<Pencil> {
    if b.cols() != p.m() || c.cols() != p.n() {
        return Err(Error::ShapeMismatch(format!(
            "B is {:?}, C is {:?}, pencil is {}x{}",
            b.shape(),
            c.shape(),
            p.m(),
            p.n()
        )));
    }
    let ct = c.transpose();
    Ok(Pencil {
        r: b.mul(&p.r).mul(&ct),
        s: b.mul(&p.s).mul(&ct),
    })
}

/// Rank of the pencil as a matrix over ℚ(i)(μ, λ).
///
/// A non-zero r-minor restricted to μ = 1 is a non-zero polynomial of degree at most r, so
/// it cannot vanish at all of min(m, n) + 1 distinct points.
pub fn pencil_rank(p: &Pencil) -> usize {
    let bound = p.m().min(p.n());
    (0..=bound as i64)
        .map(|t| p.eval(&GaussianRational::one(), &GaussianRational::from_int(t)).rank())
        .max()
        .unwrap_or(0)
}

/// D_k: monic gcd of all k-minors, D_0 = 1, zero above the rank.
///
/// Uses minor enumeration up to [`MINOR_ENUMERATION_LIMIT`] and the Smith form beyond.
pub fn k_minor_gcd(p: &Pencil, k: usize) -> BinaryForm {
    if k == 0 {
        return BinaryForm::one();
    }
    if p.m().min(p.n()) <= MINOR_ENUMERATION_LIMIT {
        return k_minor_gcd_via_minors(p, k);
    }
    let es = invariant_polynomials(p);
    if k > es.len() {
        return BinaryForm::zero();
    }
    es[..k].iter().fold(BinaryForm::one(), |acc, e| acc.mul(e)).monic()
}

/// Ranks of the three single-party reduced states, from exact Gram matrices.
pub fn local_ranks(s: &StateTensor) -> (usize, usize, usize) {
    let (r, sm) = (&s.slices[0], &s.slices[1]);
    let inner = |x: &Matrix, y: &Matrix| {
        let mut acc = GaussianRational::zero();
        for i in 0..x.rows() {
            for j in 0..x.cols() {
                acc += &(&x[(i, j)].conj() * &y[(i, j)]);
            }
        }
        acc
    };
    let rho_a = Matrix::from_rows(vec![
        vec![inner(r, r), inner(r, sm)],
        vec![inner(sm, r), inner(sm, sm)],
    ]);
    let rho_b = r.mul(&r.adjoint()).add(&sm.mul(&sm.adjoint()));
    let rho_c = r.transpose().mul(&r.conj()).add(&sm.transpose().mul(&sm.conj()));
    (rho_a.rank(), rho_b.rank(), rho_c.rank())
}

/// Factor of a form as an eigenvalue when it is linear.
pub fn linear_form_eigenvalue(f: &BinaryForm) -> Option<Eigenvalue> {
    if f.degree() != Some(1) {
        return None;
    }
    let c = f.coeffs();
    if c[1].is_zero() {
        Some(Eigenvalue::Infinite)
    } else {
        Some(Eigenvalue::Finite(&c[0] / &c[1]))
    }
}
