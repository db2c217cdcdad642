mod common;

use nalgebra::SymmetricEigen;
use pmdyn::correlations::{
    classical_correlation, concurrence, concurrence_hermitian, conditional_entropy, discord, entropy_2x2, entropy_4x4,
    mutual_information, partial_trace,
};
use pmdyn::dissipator::rates;
use pmdyn::model::{build_hamiltonian, critical_d, spectrum, to_energy_basis, SystemParams};
use pmdyn::propagator::{offdiag_multipliers, population_propagator, Propagator};
use pmdyn::{Basis, BathParams, DensityMatrix, Mat4, MeasurementSetting, OptimizerConfig, Side, C64};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn params() -> impl Strategy<Value = SystemParams> {
    (0.3..2.0f64, -0.95..0.95f64, -3.0..3.0f64, -3.0..3.0f64, -3.0..3.0f64)
        .prop_map(|(j, chi, bf, b, d)| SystemParams::new(j, chi, bf, b, d))
        .prop_filter("degenerate", |p| p.validate(None).is_ok())
}

fn baths() -> impl Strategy<Value = BathParams> {
    (0.05..3.0f64, 0.05..3.0f64, 0.01..1.0f64, 0.01..1.0f64, 0.5..50.0f64)
        .prop_map(|(t1, t2, g1, g2, ratio)| BathParams::new(t1, t2, g1, g2, ratio * 0.5 * (g1 + g2)))
}

fn x_state() -> impl Strategy<Value = Mat4> {
    any::<u64>().prop_map(|seed| common::random_x_state(&mut ChaCha8Rng::seed_from_u64(seed)))
}

fn opnorm(m: &Mat4) -> f64 {
    m.iter().fold(0.0f64, |a, z| a.max(z.norm()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(2000))]

    #[test]
    fn closed_form_levels_match_diagonalization(p in params()) {
        let v = p.validate(None).unwrap();
        let mut numeric = SymmetricEigen::new(build_hamiltonian(&p)).eigenvalues.as_slice().to_vec();
        numeric.sort_by(f64::total_cmp);
        let mut closed = vec![v.xi(), -v.xi(), v.eta(), -v.eta()];
        closed.sort_by(f64::total_cmp);
        for (a, b) in numeric.iter().zip(&closed) {
            prop_assert!((a - b).abs() < 1e-10);
        }
    }

    #[test]
    fn eigenvectors_diagonalize(p in params()) {
        let v = p.validate(None).unwrap();
        let s = spectrum(&v);
        let u = s.unitary();
        let d = u.adjoint() * build_hamiltonian(&p) * u;
        for i in 0..4 {
            prop_assert!((d[(i, i)].re - s.energies[i]).abs() < 1e-10);
            for j in 0..4 {
                if i != j {
                    prop_assert!(d[(i, j)].norm() < 1e-10);
                }
            }
        }
        prop_assert!(opnorm(&(u.adjoint() * u - Mat4::identity())) < 1e-12);
    }

    #[test]
    fn critical_dm_equalizes_gaps(j in 0.3..2.0f64, chi in -0.95..0.95f64, bf in -3.0..3.0f64, b in -3.0..3.0f64) {
        if let Ok(dc) = critical_d(j, chi, bf, b) {
            let p = SystemParams::new(j, chi, bf, b, dc);
            prop_assert!((p.xi() - p.eta()).abs() <= 1e-10 * p.eta().max(1.0));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn x_states_stay_block_diagonal_in_energy_basis(p in params(), rho in x_state()) {
        let v = p.validate(None).unwrap();
        let s = spectrum(&v);
        let e = to_energy_basis(&DensityMatrix::new_unchecked(rho, Basis::Standard), &s).unwrap();
        let m = e.elements();
        for (i, j) in [(0, 2), (0, 3), (1, 2), (1, 3)] {
            prop_assert!(m[(i, j)].norm() < 1e-12 && m[(j, i)].norm() < 1e-12);
        }
    }

    #[test]
    fn propagator_is_trace_preserving_and_bounded(p in params(), bp in baths(), t in 0.0..40.0f64) {
        let v = p.validate(None).unwrap();
        let Ok(prop) = Propagator::new(&v, &bp) else { return Ok(()); };
        let pt = prop.population_propagator(t);
        for col in 0..4 {
            let s: f64 = (0..4).map(|row| pt[(row, col)]).sum();
            prop_assert!((s - 1.0).abs() < 1e-10);
        }
        for d in offdiag_multipliers(prop.rates(), bp.gamma0, t) {
            prop_assert!(d.norm() <= 1.0 + 1e-12);
        }
        let out = prop.evolve(&DensityMatrix::bell_psi_plus(), t).unwrap();
        prop_assert!((out.elements().trace() - C64::new(1.0, 0.0)).norm() < 1e-10);
    }

    #[test]
    fn markov_limit_is_a_semigroup(p in params(), bp in baths(), t1 in 0.0..5.0f64, t2 in 0.0..5.0f64) {
        let v = p.validate(None).unwrap();
        let bp = bp.with_gamma0(1e4 * bp.mean_gamma());
        let Ok(r) = rates(&v, &bp) else { return Ok(()); };
        let whole = population_propagator(&r, bp.gamma0, t1 + t2);
        let split = population_propagator(&r, bp.gamma0, t1) * population_propagator(&r, bp.gamma0, t2);
        prop_assert!((whole - split).abs().max() < 1e-3);
    }

    #[test]
    fn concurrence_paths_agree(rho in x_state()) {
        let a = concurrence(&rho);
        prop_assert!((0.0..=1.0 + 1e-12).contains(&a));
        prop_assert!((a - concurrence_hermitian(&rho)).abs() < 1e-10);
    }

    #[test]
    fn entropies_are_bounded(rho in x_state()) {
        prop_assert!((-1e-12..=2.0 + 1e-12).contains(&entropy_4x4(&rho)));
        for side in [Side::A, Side::B] {
            prop_assert!((-1e-12..=1.0 + 1e-12).contains(&entropy_2x2(&partial_trace(&rho, side))));
        }
        prop_assert!(mutual_information(&rho) >= -1e-12);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn correlations_are_ordered(rho in x_state()) {
        let cfg = OptimizerConfig::default();
        let mi = mutual_information(&rho);
        for side in [Side::A, Side::B] {
            let cc = classical_correlation(&rho, side, &cfg).value;
            prop_assert!(cc >= -1e-9);
            let q = discord(&rho, side, &cfg);
            prop_assert!(q >= -1e-9 && q <= mi + 1e-9);
            let s_other = entropy_2x2(&partial_trace(&rho, side.other()));
            for m in [MeasurementSetting::Z, MeasurementSetting::X, MeasurementSetting::Y] {
                prop_assert!(q <= mi - (s_other - conditional_entropy(&rho, side, m)) + 1e-9);
            }
        }
    }

    #[test]
    fn product_states_carry_no_correlations(seed in any::<u64>()) {
        let rho = common::product_state(&mut ChaCha8Rng::seed_from_u64(seed));
        let cfg = OptimizerConfig::default();
        prop_assert!(mutual_information(&rho).abs() < 1e-9);
        for side in [Side::A, Side::B] {
            prop_assert!(discord(&rho, side, &cfg).abs() < 1e-7);
        }
    }
}
