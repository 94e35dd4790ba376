mod oracle;

use trislocc::exact::{gr, Eigenvalue};
use trislocc::hierarchy::enumerate_skeletons;
use trislocc::kcf::{kcf_reduce, kronecker_structure, KroneckerStructure};
use trislocc::pencil::apply_bc;
use trislocc::transform::{companion_coeffs, companion_pencil};
use trislocc::Pencil;

#[test]
fn scalar_multiple_of_identity() {
    // diag(λ, λ): one eigenvalue 0 with two blocks of size one.
    let p = Pencil::from_int_entries(&[&[(0, 1), (0, 0)], &[(0, 0), (0, 1)]]);
    let ks = kronecker_structure(&p).unwrap();
    assert_eq!(ks.eigen, vec![(Eigenvalue::finite(0), vec![1, 1])]);
    assert!(ks.right_indices.is_empty() && ks.left_indices.is_empty());
}

#[test]
fn companion_pencils() {
    let distinct = companion_pencil(&companion_coeffs(&[gr(1), gr(2), gr(-1)]));
    let ks = kronecker_structure(&distinct).unwrap();
    assert_eq!(ks.eigen.len(), 3);
    assert!(ks.eigen.iter().all(|(_, s)| s == &vec![1]));
    // A repeated root gives one Jordan block, never two.
    let repeated = companion_pencil(&companion_coeffs(&[gr(0), gr(0), gr(1)]));
    let ks = kronecker_structure(&repeated).unwrap();
    assert_eq!(
        ks,
        KroneckerStructure::new(0, 0, vec![], vec![], vec![(Eigenvalue::finite(0), vec![2]), (Eigenvalue::finite(1), vec![1])])
            .unwrap()
    );
}

#[test]
fn zero_rows_and_columns() {
    let p = Pencil::from_int_entries(&[&[(0, 1), (1, 0), (0, 0)], &[(0, 0), (0, 0), (0, 0)]]);
    let red = kcf_reduce(&p).unwrap();
    assert_eq!((red.structure.h, red.structure.g), (1, 1));
    assert_eq!(red.structure.right_indices, vec![1]);
    assert_eq!(apply_bc(&p, &red.b, &red.c).unwrap(), red.kcf);
}

#[test]
fn class_counts_match_brute_force() {
    for (m, n) in [(2, 2), (2, 3), (2, 4), (3, 3), (3, 4), (3, 5)] {
        assert_eq!(enumerate_skeletons(m, n).unwrap().len(), oracle::brute_force_class_count(m, n), "({m}, {n})");
    }
}
