#![allow(dead_code)]

use pmdyn::dissipator::jordan_decomposition;
use pmdyn::model::SystemParams;
use pmdyn::{Basis, BathParams, DensityMatrix, Mat4, RateSet, ValidatedParams, C64};
use rand::Rng;

pub fn fig1_params(dm: f64) -> ValidatedParams {
    SystemParams::new(1.0, 0.9, 2.0, 1.0, dm).validate(None).unwrap()
}

pub fn fig1_baths(ratio: f64) -> BathParams {
    BathParams::symmetric(1.25, 0.75, 0.01, ratio)
}

pub fn fig7_params() -> ValidatedParams {
    SystemParams::new(1.0, 0.9, 2.0, 2.0, 2.0).validate(None).unwrap()
}

pub fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    (0..n).map(|k| a + (b - a) * k as f64 / (n - 1) as f64).collect()
}

/// Random valid parameters with both gaps well away from zero.
pub fn random_params(rng: &mut impl Rng) -> ValidatedParams {
    loop {
        let p = SystemParams::new(
            rng.gen_range(0.5..2.0),
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-3.0..3.0),
            rng.gen_range(-3.0..3.0),
            rng.gen_range(-3.0..3.0),
        );
        if let Ok(v) = p.validate(None) {
            if (v.xi() - v.eta()).abs() > 0.05 {
                return v;
            }
        }
    }
}

/// Random rate set with distinct population eigenvalues, kept away from the
/// poles of the printed appendix at `gamma0 in {X1, Y2, X1 + Y2}`.
pub fn random_rates(rng: &mut impl Rng) -> (RateSet, f64) {
    loop {
        let r = RateSet {
            x1p: rng.gen_range(0.02..2.0),
            x1m: rng.gen_range(0.02..2.0),
            y2p: rng.gen_range(0.02..2.0),
            y2m: rng.gen_range(0.02..2.0),
            xi: rng.gen_range(0.5..3.0),
            eta: rng.gen_range(0.5..3.0),
        };
        let g0: f64 = rng.gen_range(0.1..5.0);
        let (x1, y2) = (r.x1(), r.y2());
        let far = [x1 - y2, g0 - x1, g0 - y2, g0 - x1 - y2].iter().all(|d| d.abs() > 0.1);
        if far && jordan_decomposition(&r).is_ok() {
            return (r, g0);
        }
    }
}

/// Random X-shaped state in the standard basis.
pub fn random_x_state(rng: &mut impl Rng) -> Mat4 {
    let mut w: [f64; 4] = [0.0; 4];
    for v in &mut w {
        *v = -rng.gen_range(1e-6f64..1.0).ln();
    }
    let s: f64 = w.iter().sum();
    let p = w.map(|v| v / s);
    let coh = |a: f64, d: f64, rng: &mut dyn rand::RngCore| {
        let r = (a * d).sqrt() * rng.gen_range(0.0..1.0);
        C64::from_polar(r, rng.gen_range(0.0..std::f64::consts::TAU))
    };
    let z14 = coh(p[0], p[3], rng);
    let z23 = coh(p[1], p[2], rng);
    let mut m = Mat4::zeros();
    for k in 0..4 {
        m[(k, k)] = C64::new(p[k], 0.0);
    }
    m[(0, 3)] = z14;
    m[(3, 0)] = z14.conj();
    m[(1, 2)] = z23;
    m[(2, 1)] = z23.conj();
    m
}

pub fn product_state(rng: &mut impl Rng) -> Mat4 {
    let mut qubit = || {
        let th: f64 = rng.gen_range(0.0..std::f64::consts::PI);
        let ph: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
        [C64::new((0.5 * th).cos(), 0.0), C64::from_polar((0.5 * th).sin(), ph)]
    };
    let a = qubit();
    let b = qubit();
    DensityMatrix::pure([a[0] * b[0], a[0] * b[1], a[1] * b[0], a[1] * b[1]], Basis::Standard).into_elements()
}
