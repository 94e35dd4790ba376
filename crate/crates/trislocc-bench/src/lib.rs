//! Inputs shared by the benchmarks.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use trislocc::exact::{gc, Matrix};
use trislocc::kcf::{assemble_kcf, KroneckerStructure};
use trislocc::pencil::apply_bc;
use trislocc::Pencil;

fn random_invertible(rng: &mut ChaCha8Rng, n: usize) -> Matrix {
    loop {
        let rows = (0..n)
            .map(|_| (0..n).map(|_| gc(rng.random_range(-2..=2), rng.random_range(-1..=1))).collect())
            .collect();
        let m = Matrix::from_rows(rows);
        if m.is_invertible() {
            return m;
        }
    }
}

/// The canonical form of `ks` hidden behind random invertible operators.
pub fn scrambled(ks: &KroneckerStructure, seed: u64) -> Pencil {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let p = assemble_kcf(ks);
    let b = random_invertible(&mut rng, p.m());
    let c = random_invertible(&mut rng, p.n());
    apply_bc(&p, &b, &c).expect("square operators")
}
