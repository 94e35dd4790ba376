mod oracle;
mod support;

use proptest::prelude::*;
use rand::Rng;

use num_traits::One;
use trislocc::exact::{BinaryForm, GaussianRational, Matrix};
use trislocc::hierarchy::{enumerate_skeletons, obstruction_check};
use trislocc::kcf::{assemble_kcf, kronecker_structure};
use trislocc::pencil::{
    apply_alice, apply_bc, invariant_polynomials, invariant_polynomials_via_minors, k_minor_gcd, local_ranks,
};
use trislocc::slocc::{representative_state, slocc_label, structures_slocc_equivalent};
use trislocc::transform::{
    companion_coeffs, companion_pencil, eliminate, elimination_matrix, search_column_step, verify_witness, Axis,
    EliminationSpec, SearchConfig, SearchOutcome, TransformWitness,
};

fn proportional(a: &trislocc::Pencil, b: &trislocc::Pencil) -> bool {
    let flat = |p: &trislocc::Pencil| -> Vec<GaussianRational> {
        p.r().to_rows().into_iter().chain(p.s().to_rows()).flatten().collect()
    };
    let (x, y) = (flat(a), flat(b));
    let Some(k) = y.iter().position(|v| !num_traits::Zero::is_zero(v)) else { return false };
    if num_traits::Zero::is_zero(&x[k]) {
        return false;
    }
    let c = &x[k] / &y[k];
    x.iter().zip(&y).all(|(u, v)| *u == &c * v)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn smith_route_matches_minor_route(seed in any::<u64>(), m in 1usize..=4, n in 1usize..=4) {
        let mut rng = support::rng(seed);
        let p = support::random_pencil(&mut rng, m, n);
        let smith = invariant_polynomials(&p);
        prop_assert_eq!(&smith, &invariant_polynomials_via_minors(&p));
        let (r, s) = (p.r().to_rows(), p.s().to_rows());
        let mut acc = BinaryForm::one();
        for k in 1..=m.min(n) {
            let lib = match smith.get(k - 1) {
                Some(e) => { acc = acc.mul(e); acc.clone() }
                None => BinaryForm::zero(),
            };
            prop_assert!(oracle::associates(&oracle::minor_gcd(&r, &s, k), lib.coeffs()));
        }
    }

    #[test]
    fn invariant_factors_divide_each_other(seed in any::<u64>(), m in 1usize..=4, n in 1usize..=4) {
        let mut rng = support::rng(seed);
        let es = invariant_polynomials(&support::random_pencil(&mut rng, m, n));
        for w in es.windows(2) {
            prop_assert!(w[0].divides(&w[1]));
        }
    }

    #[test]
    fn structure_survives_scrambling(seed in any::<u64>()) {
        let mut rng = support::rng(seed);
        let ks = support::random_structure(&mut rng, 4, false, true);
        let p = support::scrambled_structure(&mut rng, &ks);
        prop_assert_eq!(kronecker_structure(&p).unwrap(), ks);
    }

    #[test]
    fn dm_is_one_iff_right_blocks_only(seed in any::<u64>()) {
        let mut rng = support::rng(seed);
        let ks = support::random_structure(&mut rng, 4, true, true);
        let p = support::scrambled_structure(&mut rng, &ks);
        let only_l = ks.left_indices.is_empty() && ks.eigen.is_empty();
        prop_assert_eq!(k_minor_gcd(&p, p.m()).is_one(), only_l);
    }

    #[test]
    fn alice_moves_eigenvalues_only(seed in any::<u64>()) {
        let mut rng = support::rng(seed);
        let ks = support::random_structure(&mut rng, 4, false, true);
        let t = support::random_moebius(&mut rng);
        let moved = kronecker_structure(&apply_alice(&assemble_kcf(&ks), &t).unwrap()).unwrap();
        prop_assert_eq!(&moved.right_indices, &ks.right_indices);
        prop_assert_eq!(&moved.left_indices, &ks.left_indices);
        prop_assert_eq!(moved.clone(), ks.map_eigenvalues(|x| t.map_eigenvalue(x)));
        prop_assert!(structures_slocc_equivalent(&moved, &ks));
    }

    #[test]
    fn label_is_a_class_invariant(seed in any::<u64>()) {
        let mut rng = support::rng(seed);
        let sk = enumerate_skeletons(3, 4).unwrap();
        let s = representative_state(&sk[rng.random_range(0..sk.len())].instantiate());
        let img = s
            .apply_local(
                &support::random_invertible(&mut rng, 2),
                &support::random_invertible(&mut rng, 3),
                &support::random_invertible(&mut rng, 4),
            )
            .unwrap();
        prop_assert_eq!(local_ranks(&img), (2, 3, 4));
        prop_assert_eq!(slocc_label(&s).unwrap(), slocc_label(&img).unwrap());
    }

    #[test]
    fn elimination_matrix_route(seed in any::<u64>(), m in 1usize..=4, n in 2usize..=5, row in any::<bool>()) {
        let mut rng = support::rng(seed);
        let p = support::random_pencil(&mut rng, m.max(2), n);
        let (axis, dim) = if row { (Axis::Row, p.m()) } else { (Axis::Column, p.n()) };
        let index = rng.random_range(0..dim);
        let coeffs = (0..dim - 1).map(|_| support::small_scalar(&mut rng)).collect();
        let spec = EliminationSpec::new(axis, index, coeffs);
        let e = elimination_matrix(&spec, dim).unwrap();
        let via_matrix = match axis {
            Axis::Column => apply_bc(&p, &Matrix::identity(p.m()), &e).unwrap(),
            Axis::Row => apply_bc(&p, &e, &Matrix::identity(p.n())).unwrap(),
        };
        prop_assert_eq!(eliminate(&p, &spec).unwrap(), via_matrix);
    }

    #[test]
    fn companion_determinant_is_the_product(xs in prop::collection::vec((-3i64..=3, -1i64..=1), 1..=4)) {
        let xs: Vec<GaussianRational> = xs.into_iter().map(|(a, b)| GaussianRational::from_ints(a, b)).collect();
        let p = companion_pencil(&companion_coeffs(&xs));
        let m = xs.len();
        let (r, s) = (p.r().to_rows(), p.s().to_rows());
        let rows: Vec<Vec<oracle::Form>> = (0..m).map(|i| (0..m).map(|j| oracle::entry(&r, &s, i, j)).collect()).collect();
        let product = xs
            .iter()
            .map(|x| vec![x.clone(), GaussianRational::one()])
            .fold(vec![GaussianRational::one()], |a, f| oracle::mul(&a, &f));
        prop_assert!(oracle::associates(&oracle::det(&rows), &product));
    }

    #[test]
    fn perturbed_witness_is_rejected(seed in any::<u64>()) {
        let mut rng = support::rng(seed);
        let ks = support::random_structure(&mut rng, 3, false, true);
        let p = assemble_kcf(&ks);
        let (q, b, c) = support::scramble(&mut rng, &p);
        let src = trislocc::pencil::state_from_pencil(&p);
        let dst = trislocc::pencil::state_from_pencil(&q);
        let w = TransformWitness::from_bc(b.clone(), c);
        prop_assert!(verify_witness(&src, &w, &dst));
        let mut rows = b.to_rows();
        let (i, j) = (rng.random_range(0..rows.len()), rng.random_range(0..rows.len()));
        rows[i][j] += &GaussianRational::one();
        let bad = TransformWitness { b: Matrix::from_rows(rows), ..w };
        // Only images proportional to the target may survive the perturbation.
        let img = apply_bc(&p, &bad.b, &bad.c).unwrap();
        prop_assert_eq!(verify_witness(&src, &bad, &dst), proportional(&img, &q));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(2))]

    /// No column step found by search may contradict a fired obstruction.
    #[test]
    fn obstructions_agree_with_search(seed in any::<u64>()) {
        let targets = enumerate_skeletons(4, 4).unwrap();
        for src in enumerate_skeletons(4, 5).unwrap() {
            let sp = assemble_kcf(&src.instantiate());
            for dst in &targets {
                let d = dst.instantiate();
                if obstruction_check(&src.instantiate(), &d).unwrap().is_some() {
                    let out = search_column_step(&sp, &d, SearchConfig { seed, budget: 60 });
                    prop_assert!(matches!(out, SearchOutcome::Exhausted { .. }), "{} -> {}", src, dst);
                }
            }
        }
    }
}
