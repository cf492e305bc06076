use ksep_core::linalg::{self, ComplexMatrix, C64};
use ksep_core::random::{random_density_matrix, random_product_state, random_unitary};
use ksep_core::states::{apply_local_unitaries, family_state};
use ksep_core::{DensityMatrix, StateFamilyPoint};
use nalgebra::DMatrix;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn weights() -> impl Strategy<Value = (f64, f64)> {
    (0.0f64..=1.0, 0.0f64..=1.0).prop_map(|(a, t)| (a, (1.0 - a) * t))
}

fn reference_min_eigenvalue(rho: &DensityMatrix) -> f64 {
    let d = rho.dim();
    let m = DMatrix::from_fn(d, d, |r, c| {
        let z = rho.matrix()[(r, c)];
        nalgebra::Complex::new(z.re, z.im)
    });
    m.symmetric_eigenvalues().iter().copied().fold(f64::INFINITY, f64::min)
}

proptest! {
    #[test]
    fn qubit_family_is_affine((a1, b1) in weights(), (a2, b2) in weights(), lambda in 0.0f64..=1.0) {
        let x = family_state(&StateFamilyPoint::GhzWQubit { alpha: a1, beta: b1 }).unwrap();
        let y = family_state(&StateFamilyPoint::GhzWQubit { alpha: a2, beta: b2 }).unwrap();
        let mid = StateFamilyPoint::GhzWQubit {
            alpha: lambda * a1 + (1.0 - lambda) * a2,
            beta: lambda * b1 + (1.0 - lambda) * b2,
        };
        let z = family_state(&mid).unwrap();
        prop_assert!(z.matrix().max_abs_diff(x.mix(&y, lambda).unwrap().matrix()) <= 1e-12);
    }

    #[test]
    fn qutrit_family_is_affine((a1, b1) in weights(), (a2, b2) in weights(), lambda in 0.0f64..=1.0) {
        let x = family_state(&StateFamilyPoint::GhzXiQutrit { alpha: a1, beta: b1 }).unwrap();
        let y = family_state(&StateFamilyPoint::GhzXiQutrit { alpha: a2, beta: b2 }).unwrap();
        let mid = StateFamilyPoint::GhzXiQutrit {
            alpha: lambda * a1 + (1.0 - lambda) * a2,
            beta: lambda * b1 + (1.0 - lambda) * b2,
        };
        let z = family_state(&mid).unwrap();
        prop_assert!(z.matrix().max_abs_diff(x.mix(&y, lambda).unwrap().matrix()) <= 1e-12);
        prop_assert!(z.min_eigenvalue() >= -1e-12);
    }

    #[test]
    fn isotropic_family_is_affine(p in 0.0f64..=1.0, q in 0.0f64..=1.0, lambda in 0.0f64..=1.0, n in 2usize..5, d in 2usize..4) {
        let x = family_state(&StateFamilyPoint::IsotropicGhz { n, d, p }).unwrap();
        let y = family_state(&StateFamilyPoint::IsotropicGhz { n, d, p: q }).unwrap();
        let z = family_state(&StateFamilyPoint::IsotropicGhz { n, d, p: lambda * p + (1.0 - lambda) * q }).unwrap();
        prop_assert!(z.matrix().max_abs_diff(x.mix(&y, lambda).unwrap().matrix()) <= 1e-12);
    }

    #[test]
    fn local_unitaries_preserve_overlaps(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let dims = [2, 3, 2];
        let a = random_product_state(&dims, &mut rng);
        let b = random_product_state(&dims, &mut rng);
        let us: Vec<ComplexMatrix> = dims.iter().map(|&d| random_unitary(d, &mut rng)).collect();
        let ua = apply_local_unitaries(&a, &us).unwrap();
        let ub = apply_local_unitaries(&b, &us).unwrap();
        let before = linalg::inner(&a.to_vector(), &b.to_vector());
        let after = linalg::inner(&ua.to_vector(), &ub.to_vector());
        prop_assert!((before - after).norm() <= 1e-10);
        for f in ua.factors() {
            prop_assert!((linalg::norm(f) - 1.0).abs() <= 1e-12);
        }
    }

    #[test]
    fn power_iteration_matches_dense_eigensolver(seed in any::<u64>(), shift in -0.2f64..0.2) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let rho = random_density_matrix(&[2, 3], &mut rng).unwrap();
        // ρ + s(𝟙/6 − ρ) keeps unit trace and moves the smallest eigenvalue below zero for s < 0.
        let centre = ComplexMatrix::identity(6).scale(C64::new(1.0 / 6.0, 0.0));
        let direction = centre.add_scaled(rho.matrix(), C64::new(-1.0, 0.0)).unwrap();
        let m = rho.matrix().add_scaled(&direction, C64::new(shift * 10.0, 0.0)).unwrap();
        let tilted = DensityMatrix::new(vec![2, 3], m, false).unwrap();
        let expected = reference_min_eigenvalue(&tilted);
        prop_assert!((tilted.min_eigenvalue() - expected).abs() <= 1e-8, "{} vs {}", tilted.min_eigenvalue(), expected);
    }
}

#[test]
fn constructors_are_normalized() {
    for n in 2..6 {
        for d in 2..4 {
            let g = ksep_core::states::ghz_state(n, d).unwrap();
            assert!((linalg::norm(&g) - 1.0).abs() <= 1e-12);
        }
        assert!((linalg::norm(&ksep_core::states::w_state(n).unwrap()) - 1.0).abs() <= 1e-12);
    }
}
