use harnack::linalg::{
    abs_matrix, det_lu, eig_general, eig_hermitian, haar_unitary, polar, random_complex_matrix,
    random_hermitian, random_with_singular_values, svd_values, ComplexMatrix, RngState,
};
use proptest::prelude::*;

fn rng(seed: u64) -> RngState {
    RngState::new(seed, 0)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn eigenvalues_match_det_and_trace(seed in any::<u64>(), n in 1usize..=8) {
        let a = random_complex_matrix(n, &mut rng(seed)).unwrap();
        let ev = eig_general(&a).unwrap();
        let det = det_lu(&a);
        let prod = ev.product();
        prop_assert!((det - prod).norm() <= 1e-8 * det.norm().max(prod.norm()).max(1e-300));
        let tr = a.trace();
        prop_assert!((tr - ev.sum()).norm() <= 1e-8 * (1.0 + tr.norm()));
    }

    #[test]
    fn hermitian_reconstruction(seed in any::<u64>(), n in 1usize..=8) {
        let h = random_hermitian(n, &mut rng(seed)).unwrap();
        let (vals, q) = eig_hermitian(&h).unwrap();
        let d = ComplexMatrix::from_real_diag(vals.values()).unwrap();
        let back = &(&q * &d) * &q.adjoint();
        prop_assert!(back.max_abs_diff(&h) <= 1e-9 * (1.0 + h.max_abs()));
        prop_assert!(q.unitarity_defect() <= 1e-10);
        prop_assert!(vals.values().windows(2).all(|w| w[0] >= w[1]));
    }

    #[test]
    fn singular_values_are_unitarily_invariant(seed in any::<u64>(), n in 1usize..=8) {
        let mut r = rng(seed);
        let a = random_complex_matrix(n, &mut r).unwrap();
        let u = haar_unitary(n, &mut r).unwrap();
        let s1 = svd_values(&a);
        let s2 = svd_values(&(&u * &a));
        for (x, y) in s1.values().iter().zip(s2.values()) {
            prop_assert!((x - y).abs() <= 1e-9 * (1.0 + x));
        }
    }

    #[test]
    fn polar_reconstructs_including_singular(seed in any::<u64>(), n in 1usize..=6, rank in 0usize..=6) {
        let mut r = rng(seed);
        let sigma: Vec<f64> = (0..n).map(|k| if k < rank { 0.1 + r.uniform() } else { 0.0 }).collect();
        let z = random_with_singular_values(&sigma, &mut r).unwrap();
        let f = polar(&z);
        prop_assert!((&f.v * &f.p).max_abs_diff(&z) <= 1e-9 * (1.0 + z.max_abs()));
        prop_assert!(f.v.unitarity_defect() <= 1e-9);
    }

    #[test]
    fn abs_eigenvalues_are_singular_values(seed in any::<u64>(), n in 1usize..=8) {
        let z = random_complex_matrix(n, &mut rng(seed)).unwrap();
        let (vals, _) = eig_hermitian(&abs_matrix(&z)).unwrap();
        for (x, y) in vals.values().iter().zip(svd_values(&z).values()) {
            prop_assert!((x - y).abs() <= 1e-9 * (1.0 + y));
        }
    }
}

#[test]
fn haar_first_entry_has_mean_quarter() {
    let mut r = rng(2024);
    let mean = (0..10_000)
        .map(|_| haar_unitary(4, &mut r).unwrap()[(0, 0)].norm_sqr())
        .sum::<f64>()
        / 10_000.0;
    assert!((mean - 0.25).abs() < 0.02, "mean {mean}");
}

#[test]
fn matrix_json_round_trip() {
    let a = random_complex_matrix(3, &mut rng(1)).unwrap();
    let s = serde_json::to_string(&a).unwrap();
    assert_eq!(serde_json::from_str::<ComplexMatrix>(&s).unwrap(), a);
}
