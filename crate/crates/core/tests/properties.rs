//! Randomized invariants across modules.

use num_complex::Complex64;
use proptest::prelude::*;

use oplip::doi::{commutator_identity_residual, divided_difference, identity_tolerance};
use oplip::funclib::{abs, pinned_piecewise, sin};
use oplip::harness::{fp_ratio, np_commutator_ratio, sample_pair, EnsembleKind, EnsembleSpec};
use oplip::norms::{schatten_norm, singular_values, weak_l1_quasinorm};
use oplip::spectral::{apply_function, hermitian_eig, ComplexMatrix, HermitianMatrix, EIG_TOL};

fn matrix(n: usize) -> impl Strategy<Value = ComplexMatrix> {
    prop::collection::vec((-2.0f64..2.0, -2.0f64..2.0), n * n)
        .prop_map(move |v| ComplexMatrix::new(n, v.into_iter().map(|(a, b)| Complex64::new(a, b)).collect()).unwrap())
}

fn hermitian(n: usize) -> impl Strategy<Value = HermitianMatrix> {
    matrix(n).prop_map(|m| HermitianMatrix::symmetrized((&m + &m.adjoint()).scale_real(0.5)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn weak_norm_below_trace_norm(x in (1usize..8).prop_flat_map(matrix)) {
        let w = weak_l1_quasinorm(&x).unwrap();
        prop_assert!(w <= schatten_norm(&x, 1.0).unwrap() * (1.0 + 1e-12));
        prop_assert!(w >= schatten_norm(&x, f64::INFINITY).unwrap() * (1.0 - 1e-12));
    }

    #[test]
    fn weak_quasi_triangle((x, y) in (1usize..8).prop_flat_map(|n| (matrix(n), matrix(n)))) {
        let lhs = weak_l1_quasinorm(&(&x + &y)).unwrap();
        let rhs = 2.0 * (weak_l1_quasinorm(&x).unwrap() + weak_l1_quasinorm(&y).unwrap());
        prop_assert!(lhs <= rhs * (1.0 + 1e-12));
    }

    #[test]
    fn singular_values_invariant_under_adjoint(x in (1usize..7).prop_flat_map(matrix)) {
        let a = singular_values(&x).unwrap();
        let b = singular_values(&x.adjoint()).unwrap();
        for (s, t) in a.values().iter().zip(b.values()) {
            prop_assert!((s - t).abs() <= 1e-10 * (1.0 + s));
        }
    }

    #[test]
    fn commutator_identity_holds((a, b) in (2usize..9).prop_flat_map(|n| (hermitian(n), hermitian(n)))) {
        for f in [abs(), sin(), pinned_piecewise()] {
            let r = commutator_identity_residual(&a, &b, &f).unwrap();
            prop_assert!(r <= identity_tolerance(&f, a.as_matrix(), b.as_matrix()));
        }
    }

    #[test]
    fn functional_calculus_is_contractive_in_frobenius((x, y) in (2usize..8).prop_flat_map(|n| (hermitian(n), hermitian(n)))) {
        // ||f(X) - f(Y)||_2 ≤ ||f'||_∞ ||X - Y||_2
        for f in [abs(), sin(), pinned_piecewise()] {
            let r = fp_ratio(&x, &y, &f, 2.0).unwrap();
            prop_assert!(r.ratio.unwrap_or(0.0) <= f.lipschitz_constant() + 1e-9);
        }
    }

    #[test]
    fn divided_difference_bounded(lambda in -5.0f64..5.0, mu in -5.0f64..5.0) {
        for f in [abs(), sin(), pinned_piecewise()] {
            prop_assert!(divided_difference(&f, lambda, mu).abs() <= f.lipschitz_constant() + 1e-12);
        }
    }

    #[test]
    fn eigendecomposition_reconstructs(a in (1usize..9).prop_flat_map(hermitian)) {
        let d = hermitian_eig(&a, EIG_TOL).unwrap();
        let err = (&d.reconstruct() - a.as_matrix()).frobenius_norm();
        prop_assert!(err <= 1e-10 * (1.0 + a.as_matrix().frobenius_norm()));
        let id = apply_function(&oplip::funclib::identity(), &d).unwrap();
        prop_assert!((id.as_matrix() - a.as_matrix()).frobenius_norm() <= 1e-10 * (1.0 + a.as_matrix().frobenius_norm()));
    }

    #[test]
    fn identity_function_ratio_at_most_one(seed in 0u64..1000, n in 2usize..10) {
        let (a, b) = sample_pair(&EnsembleSpec::new(EnsembleKind::GaussianHermitian, n, seed), 0).unwrap();
        let r = np_commutator_ratio(&a, &b, &oplip::funclib::identity()).unwrap();
        prop_assert!(r.ratio.unwrap() <= 1.0 + 1e-9);
        prop_assert!(r.lhs >= 0.0 && r.rhs >= 0.0);
    }
}
