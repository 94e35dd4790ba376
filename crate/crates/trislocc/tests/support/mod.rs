//! Seeded generators shared by the integration tests.
#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use trislocc::exact::{gc, gr, Eigenvalue, GaussianRational, Matrix};
use trislocc::kcf::{assemble_kcf, KroneckerStructure};
use trislocc::pencil::apply_bc;
use trislocc::{MoebiusMap, Pencil};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Real part in −2..=2, imaginary part in −1..=1.
pub fn small_scalar(rng: &mut ChaCha8Rng) -> GaussianRational {
    gc(rng.random_range(-2..=2), rng.random_range(-1..=1))
}

pub fn random_pencil(rng: &mut ChaCha8Rng, m: usize, n: usize) -> Pencil {
    let mut slice = || {
        Matrix::from_rows((0..m).map(|_| (0..n).map(|_| small_scalar(rng)).collect()).collect())
    };
    let r = slice();
    let s = slice();
    Pencil::new(r, s).unwrap()
}

pub fn random_invertible(rng: &mut ChaCha8Rng, n: usize) -> Matrix {
    loop {
        let m = Matrix::from_rows((0..n).map(|_| (0..n).map(|_| small_scalar(rng)).collect()).collect());
        if m.is_invertible() {
            return m;
        }
    }
}

pub fn random_moebius(rng: &mut ChaCha8Rng) -> MoebiusMap {
    loop {
        let [a, b, c, d] = [0; 4].map(|_| small_scalar(rng));
        if let Ok(t) = MoebiusMap::new(a, b, c, d) {
            return t;
        }
    }
}

/// `B · P · Cᵀ` for random invertible B, C, returned with the operators.
pub fn scramble(rng: &mut ChaCha8Rng, p: &Pencil) -> (Pencil, Matrix, Matrix) {
    let b = random_invertible(rng, p.m());
    let c = random_invertible(rng, p.n());
    (apply_bc(p, &b, &c).unwrap(), b, c)
}

/// Random structure without zero rows or columns. `wide` forces more L than Lᵀ blocks.
pub fn random_structure(rng: &mut ChaCha8Rng, max_dim: usize, wide: bool, eigen: bool) -> KroneckerStructure {
    loop {
        let mut eps = Vec::new();
        let mut nu = Vec::new();
        let mut ev: Vec<(Eigenvalue, Vec<usize>)> = Vec::new();
        let blocks = rng.random_range(1..=4);
        for _ in 0..blocks {
            match rng.random_range(0..if eigen { 3 } else { 2 }) {
                0 => eps.push(rng.random_range(1..=3)),
                1 => nu.push(rng.random_range(1..=2)),
                _ => {
                    let x = match rng.random_range(0..4) {
                        0 => Eigenvalue::Infinite,
                        k => Eigenvalue::Finite(gr(k - 1)),
                    };
                    let e = rng.random_range(1..=2);
                    match ev.iter_mut().find(|(y, _)| *y == x) {
                        Some((_, sig)) => sig.push(e),
                        None => ev.push((x, vec![e])),
                    }
                }
            }
        }
        if wide && eps.len() <= nu.len() {
            continue;
        }
        let Ok(ks) = KroneckerStructure::new(0, 0, eps, nu, ev) else { continue };
        let (m, n) = ks.dims();
        if m >= 1 && m <= max_dim && n <= max_dim + 1 {
            return ks;
        }
    }
}

pub fn scrambled_structure(rng: &mut ChaCha8Rng, ks: &KroneckerStructure) -> Pencil {
    scramble(rng, &assemble_kcf(ks)).0
}
