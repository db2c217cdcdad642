//! Entanglement and discord measures for two-qubit states in the standard
//! basis. Entropies are in bits.
//!
//! Classical correlation is maximised over rank-one projective measurements
//! on the measured qubit, parametrised by the Bloch angles of the first
//! basis vector `cos(theta/2)|0> + e^{i phi} sin(theta/2)|1>`.

use std::f64::consts::PI;

use nalgebra::{Matrix2, SymmetricEigen};

use crate::error::{Error, Result};
use crate::model::{Basis, DensityMatrix, PSD_TOL};
use crate::{c, Mat4, C64};

pub type Mat2 = Matrix2<C64>;

/// Eigenvalues in `[-1e-9, 0)` are treated as zero.
pub const EIGEN_CLAMP: f64 = 1e-9;

/// Discord values in `[-1e-7, 0)` are reported as zero.
pub const DISCORD_CLAMP: f64 = 1e-7;

/// Which qubit is measured. `A` is the left factor of the standard basis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Side {
    A,
    B,
}

impl Side {
    pub fn other(self) -> Side {
        match self {
            Side::A => Side::B,
            Side::B => Side::A,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeasurementSetting {
    pub theta: f64,
    pub phi: f64,
}

impl MeasurementSetting {
    pub fn new(theta: f64, phi: f64) -> Self {
        Self { theta, phi }.normalized()
    }

    /// Folds the angles back into `theta in [0, pi]`, `phi in [0, 2 pi)`.
    pub fn normalized(self) -> Self {
        let mut theta = self.theta.rem_euclid(2.0 * PI);
        let mut phi = self.phi;
        if theta > PI {
            theta = 2.0 * PI - theta;
            phi += PI;
        }
        Self {
            theta,
            phi: phi.rem_euclid(2.0 * PI),
        }
    }

    /// The two orthonormal basis vectors of the measurement.
    pub fn basis(&self) -> [[C64; 2]; 2] {
        let (s, co) = (0.5 * self.theta).sin_cos();
        let e = C64::from_polar(1.0, self.phi);
        [[c(co, 0.0), e * s], [-e.conj() * s, c(co, 0.0)]]
    }

    pub const Z: MeasurementSetting = MeasurementSetting { theta: 0.0, phi: 0.0 };
    pub const X: MeasurementSetting = MeasurementSetting {
        theta: PI / 2.0,
        phi: 0.0,
    };
    pub const Y: MeasurementSetting = MeasurementSetting {
        theta: PI / 2.0,
        phi: PI / 2.0,
    };
}

/// Coarse grid plus pattern-search refinement.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OptimizerConfig {
    /// Number of intervals in `theta`; the grid has `grid_theta + 1` rows.
    pub grid_theta: usize,
    /// Number of points in `phi`.
    pub grid_phi: usize,
    pub refine_iterations: usize,
    pub shrink: f64,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        Self {
            grid_theta: 64,
            grid_phi: 128,
            refine_iterations: 40,
            shrink: 0.5,
        }
    }
}

/// `-sum lambda log2 lambda` with `0 log 0 = 0`.
pub fn entropy_bits(eigenvalues: &[f64]) -> f64 {
    eigenvalues
        .iter()
        .filter(|&&l| l > 0.0)
        .map(|&l| -l * l.log2())
        .sum::<f64>()
        .max(0.0)
}

/// Eigenvalues of a 2x2 Hermitian matrix, ascending.
pub fn eigenvalues_2x2(m: &Mat2) -> [f64; 2] {
    let a = m[(0, 0)].re;
    let d = m[(1, 1)].re;
    let half = 0.5 * (a + d);
    let r = (0.25 * (a - d) * (a - d) + m[(0, 1)].norm_sqr()).sqrt();
    [half - r, half + r]
}

pub fn eigenvalues_4x4(m: &Mat4) -> [f64; 4] {
    let sym = (m + m.adjoint()) * c(0.5, 0.0);
    let ev = SymmetricEigen::new(sym).eigenvalues;
    let mut out = [ev[0], ev[1], ev[2], ev[3]];
    out.sort_by(|a, b| a.total_cmp(b));
    out
}

pub fn entropy_2x2(m: &Mat2) -> f64 {
    entropy_bits(&eigenvalues_2x2(m))
}

pub fn entropy_4x4(m: &Mat4) -> f64 {
    entropy_bits(&eigenvalues_4x4(m))
}

/// Von Neumann entropy of a checked density matrix.
pub fn von_neumann_entropy(rho: &DensityMatrix) -> Result<f64> {
    let ev = eigenvalues_4x4(rho.elements());
    if ev[0] < -EIGEN_CLAMP.max(PSD_TOL) {
        return Err(Error::NotDensityMatrix(format!("negative eigenvalue {:.3e}", ev[0])));
    }
    Ok(entropy_bits(&ev))
}

/// Reduced state of the qubit `keep`.
pub fn partial_trace(rho: &Mat4, keep: Side) -> Mat2 {
    Mat2::from_fn(|x, y| match keep {
        Side::A => rho[(2 * x, 2 * y)] + rho[(2 * x + 1, 2 * y + 1)],
        Side::B => rho[(x, y)] + rho[(2 + x, 2 + y)],
    })
}

const SIGMA_YY: [(usize, usize, f64); 4] = [(0, 3, -1.0), (1, 2, 1.0), (2, 1, 1.0), (3, 0, -1.0)];

/// `(sigma_y x sigma_y) rho^* (sigma_y x sigma_y)`.
pub fn spin_flip(rho: &Mat4) -> Mat4 {
    let mut yy = Mat4::zeros();
    for (i, j, v) in SIGMA_YY {
        yy[(i, j)] = c(v, 0.0);
    }
    yy * rho.map(|z| z.conj()) * yy
}

fn wootters(mut lambdas: [f64; 4]) -> f64 {
    lambdas.sort_by(|a, b| b.total_cmp(a));
    (lambdas[0] - lambdas[1] - lambdas[2] - lambdas[3]).clamp(0.0, 1.0)
}

/// Largest element outside the X pattern below which the closed form is used.
const X_PATTERN_TOL: f64 = 1e-12;

/// Wootters concurrence. X-shaped states use the closed form, which avoids
/// the square roots of near-zero eigenvalues.
pub fn concurrence(rho: &Mat4) -> f64 {
    let off_x = (0..4)
        .flat_map(|i| (0..4).map(move |j| (i, j)))
        .filter(|&(i, j)| i != j && i + j != 3)
        .fold(0.0f64, |m, (i, j)| m.max(rho[(i, j)].norm()));
    if off_x <= X_PATTERN_TOL {
        concurrence_x_state(rho)
    } else {
        concurrence_schur(rho)
    }
}

/// `2 max(0, |rho14| - sqrt(rho22 rho33), |rho23| - sqrt(rho11 rho44))`.
pub fn concurrence_x_state(rho: &Mat4) -> f64 {
    let p = |k: usize| rho[(k, k)].re.max(0.0);
    let a = rho[(0, 3)].norm() - (p(1) * p(2)).sqrt();
    let b = rho[(1, 2)].norm() - (p(0) * p(3)).sqrt();
    (2.0 * a.max(b)).clamp(0.0, 1.0)
}

/// General path through the square roots of the eigenvalues of `rho rho~`.
pub fn concurrence_schur(rho: &Mat4) -> f64 {
    let m = rho * spin_flip(rho);
    match m.schur().eigenvalues() {
        Some(ev) => wootters([0, 1, 2, 3].map(|k| ev[k].re.max(0.0).sqrt())),
        None => concurrence_hermitian(rho),
    }
}

/// Same quantity through the Hermitian matrix `sqrt(rho) rho~ sqrt(rho)`.
pub fn concurrence_hermitian(rho: &Mat4) -> f64 {
    let sym = (rho + rho.adjoint()) * c(0.5, 0.0);
    let eig = SymmetricEigen::new(sym);
    let sqrt_d = eig.eigenvalues.map(|l| c(l.max(0.0).sqrt(), 0.0));
    let sqrt_rho = &eig.eigenvectors * Mat4::from_diagonal(&sqrt_d) * eig.eigenvectors.adjoint();
    let r = &sqrt_rho * spin_flip(rho) * &sqrt_rho;
    let ev = eigenvalues_4x4(&r);
    wootters(ev.map(|l| l.max(0.0).sqrt()))
}

/// `I = S(rho_A) + S(rho_B) - S(rho_AB)`.
pub fn mutual_information(rho: &Mat4) -> f64 {
    let sa = entropy_2x2(&partial_trace(rho, Side::A));
    let sb = entropy_2x2(&partial_trace(rho, Side::B));
    sa + sb - entropy_4x4(rho)
}

/// Precomputed blocks of `rho` for repeated local measurements on one side.
///
/// `blocks[x][y]` is the 2x2 operator on the measured qubit obtained by
/// fixing unmeasured-qubit indices `(x, y)`; the unnormalised conditional
/// state after outcome `m` is `sigma[x][y] = <m| blocks[x][y] |m>`.
#[derive(Debug, Clone)]
pub struct MeasurementProblem {
    pub side: Side,
    blocks: [[Mat2; 2]; 2],
}

impl MeasurementProblem {
    pub fn new(rho: &Mat4, side: Side) -> Self {
        let idx = |unmeasured: usize, measured: usize| match side {
            Side::B => 2 * unmeasured + measured,
            Side::A => 2 * measured + unmeasured,
        };
        let block = |x: usize, y: usize| Mat2::from_fn(|p, q| rho[(idx(x, p), idx(y, q))]);
        Self {
            side,
            blocks: [[block(0, 0), block(0, 1)], [block(1, 0), block(1, 1)]],
        }
    }

    /// `sum_k p_k S(rho_k)` for the projective measurement `m`.
    pub fn conditional_entropy(&self, m: MeasurementSetting) -> f64 {
        let mut total = 0.0;
        for v in m.basis() {
            let quad = |b: &Mat2| {
                let mut acc = c(0.0, 0.0);
                for p in 0..2 {
                    for q in 0..2 {
                        acc += v[p].conj() * b[(p, q)] * v[q];
                    }
                }
                acc
            };
            let a = quad(&self.blocks[0][0]).re;
            let d = quad(&self.blocks[1][1]).re;
            let off = quad(&self.blocks[0][1]);
            let p = a + d;
            if p <= 1e-12 {
                continue;
            }
            let half = 0.5;
            let r = (0.25 * (a - d) * (a - d) + off.norm_sqr()).sqrt() / p;
            total += p * entropy_bits(&[half - r, half + r]);
        }
        total
    }
}

pub fn conditional_entropy(rho: &Mat4, side: Side, m: MeasurementSetting) -> f64 {
    MeasurementProblem::new(rho, side).conditional_entropy(m)
}

/// Result of maximising the classical correlation on one side.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClassicalCorrelation {
    pub value: f64,
    pub setting: MeasurementSetting,
    /// Largest improvement still visible on the final refinement stencil.
    pub gap: f64,
}

/// Grid points `theta_i = pi i / n_theta` (`i = 0..=n_theta`) and
/// `phi_j = 2 pi j / n_phi`; the poles are visited once.
pub fn grid_settings(n_theta: usize, n_phi: usize) -> impl Iterator<Item = MeasurementSetting> {
    (0..=n_theta).flat_map(move |i| {
        let theta = (i as f64) * PI / (n_theta as f64);
        let n = if i == 0 || i == n_theta { 1 } else { n_phi };
        (0..n).map(move |j| MeasurementSetting {
            theta,
            phi: (j as f64) * 2.0 * PI / (n_phi as f64),
        })
    })
}

/// Minimum of the conditional entropy over a grid, returned with its setting.
pub fn grid_minimum(problem: &MeasurementProblem, n_theta: usize, n_phi: usize) -> (f64, MeasurementSetting) {
    let mut best = (f64::INFINITY, MeasurementSetting::Z);
    for m in grid_settings(n_theta, n_phi) {
        let f = problem.conditional_entropy(m);
        if f < best.0 {
            best = (f, m);
        }
    }
    best
}

/// `CC = S(rho_unmeasured) - min_m S(rho | m)`.
pub fn classical_correlation(rho: &Mat4, side: Side, cfg: &OptimizerConfig) -> ClassicalCorrelation {
    let problem = MeasurementProblem::new(rho, side);
    let s_other = entropy_2x2(&partial_trace(rho, side.other()));

    let (mut f_best, mut best) = grid_minimum(&problem, cfg.grid_theta, cfg.grid_phi);
    let mut d_theta = PI / cfg.grid_theta as f64;
    let mut d_phi = 2.0 * PI / cfg.grid_phi as f64;
    let stencil = |m: MeasurementSetting, dt: f64, dp: f64| {
        let mut pts = Vec::with_capacity(8);
        for (a, b) in [
            (1.0, 0.0),
            (-1.0, 0.0),
            (0.0, 1.0),
            (0.0, -1.0),
            (1.0, 1.0),
            (1.0, -1.0),
            (-1.0, 1.0),
            (-1.0, -1.0),
        ] {
            pts.push(MeasurementSetting::new(m.theta + a * dt, m.phi + b * dp));
        }
        pts
    };
    for _ in 0..cfg.refine_iterations {
        let mut moved = false;
        for m in stencil(best, d_theta, d_phi) {
            let f = problem.conditional_entropy(m);
            if f < f_best {
                f_best = f;
                best = m;
                moved = true;
            }
        }
        if !moved {
            d_theta *= cfg.shrink;
            d_phi *= cfg.shrink;
        }
    }
    let gap = stencil(best, d_theta, d_phi)
        .into_iter()
        .map(|m| f_best - problem.conditional_entropy(m))
        .fold(0.0f64, f64::max);
    ClassicalCorrelation {
        value: s_other - f_best,
        setting: best,
        gap,
    }
}

fn clamp_discord(d: f64) -> f64 {
    if d < 0.0 && d >= -DISCORD_CLAMP {
        0.0
    } else {
        d
    }
}

/// Discord with measurement on `side`: `I - CC_side`.
pub fn discord(rho: &Mat4, side: Side, cfg: &OptimizerConfig) -> f64 {
    clamp_discord(mutual_information(rho) - classical_correlation(rho, side, cfg).value)
}

/// All measures for one state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CorrelationReport {
    pub concurrence: f64,
    pub mutual_info: f64,
    pub classical_corr_a: f64,
    pub classical_corr_b: f64,
    /// Left discord (measurement on A).
    pub discord_a: f64,
    /// Right discord (measurement on B).
    pub discord_b: f64,
    pub optimal_a: MeasurementSetting,
    pub optimal_b: MeasurementSetting,
    pub optimizer_gap: f64,
}

impl CorrelationReport {
    /// `D_B - D_A`.
    pub fn discord_gap(&self) -> f64 {
        self.discord_b - self.discord_a
    }
}

pub fn report(rho: &DensityMatrix, cfg: &OptimizerConfig) -> Result<CorrelationReport> {
    rho.expect_basis(Basis::Standard)?;
    Ok(report_matrix(rho.elements(), cfg))
}

pub fn report_matrix(m: &Mat4, cfg: &OptimizerConfig) -> CorrelationReport {
    let mi = mutual_information(m);
    let cc_a = classical_correlation(m, Side::A, cfg);
    let cc_b = classical_correlation(m, Side::B, cfg);
    CorrelationReport {
        concurrence: concurrence(m),
        mutual_info: mi,
        classical_corr_a: cc_a.value,
        classical_corr_b: cc_b.value,
        discord_a: clamp_discord(mi - cc_a.value),
        discord_b: clamp_discord(mi - cc_b.value),
        optimal_a: cc_a.setting,
        optimal_b: cc_b.setting,
        optimizer_gap: cc_a.gap.max(cc_b.gap),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn bell() -> Mat4 {
        DensityMatrix::bell_psi_plus().into_elements()
    }

    fn product(a: [C64; 2], b: [C64; 2]) -> Mat4 {
        let psi = [a[0] * b[0], a[0] * b[1], a[1] * b[0], a[1] * b[1]];
        DensityMatrix::pure(psi, Basis::Standard).into_elements()
    }

    /// `p |Phi+><Phi+| + (1 - p) I/4`
    fn werner(p: f64) -> Mat4 {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let phi = DensityMatrix::pure([c(s, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(s, 0.0)], Basis::Standard);
        phi.into_elements() * c(p, 0.0) + Mat4::identity() * c(0.25 * (1.0 - p), 0.0)
    }

    fn classical() -> Mat4 {
        let mut m = Mat4::zeros();
        m[(0, 0)] = c(0.5, 0.0);
        m[(3, 3)] = c(0.5, 0.0);
        m
    }

    fn random_state(rng: &mut ChaCha8Rng) -> Mat4 {
        let g = Mat4::from_fn(|_, _| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
        let m = g * g.adjoint();
        m / m.trace()
    }

    /// Conditional entropy through explicit projectors and a partial trace.
    fn conditional_entropy_direct(rho: &Mat4, side: Side, m: MeasurementSetting) -> f64 {
        let mut total = 0.0;
        for v in m.basis() {
            let pr = Mat2::from_fn(|i, j| v[i] * v[j].conj());
            let id = Mat2::identity();
            let op = match side {
                Side::B => id.kronecker(&pr),
                Side::A => pr.kronecker(&id),
            };
            let post = op * rho * op;
            let p = post.trace().re;
            if p <= 1e-12 {
                continue;
            }
            let reduced = partial_trace(&post, side.other()) / c(p, 0.0);
            total += p * entropy_2x2(&reduced);
        }
        total
    }

    #[test]
    fn entropy_examples() {
        assert_abs_diff_eq!(entropy_4x4(&bell()), 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(entropy_4x4(&(Mat4::identity() * c(0.25, 0.0))), 2.0, epsilon = 1e-12);
        let mut m = Mat4::zeros();
        m[(0, 0)] = c(0.5, 0.0);
        m[(1, 1)] = c(0.5, 0.0);
        assert_abs_diff_eq!(entropy_4x4(&m), 1.0, epsilon = 1e-12);
        assert_eq!(entropy_bits(&[-5e-10, 1.0]), 0.0);

        let mut bad = Mat4::zeros();
        bad[(0, 0)] = c(1.1, 0.0);
        bad[(1, 1)] = c(-0.1, 0.0);
        let rho = DensityMatrix::new_unchecked(bad, Basis::Standard);
        assert!(von_neumann_entropy(&rho).is_err());
    }

    #[test]
    fn concurrence_examples() {
        assert_abs_diff_eq!(concurrence(&bell()), 1.0, epsilon = 1e-10);
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let prod = product([c(s, 0.0), c(0.0, s)], [c(0.6, 0.0), c(0.8, 0.0)]);
        assert_abs_diff_eq!(concurrence(&prod), 0.0, epsilon = 1e-7);
        assert_abs_diff_eq!(concurrence(&werner(0.5)), 0.25, epsilon = 1e-10);
        for p in [0.0, 0.2, 1.0 / 3.0, 0.6, 0.9] {
            let analytic = (0.5 * (3.0 * p - 1.0f64)).max(0.0);
            assert_abs_diff_eq!(concurrence(&werner(p)), analytic, epsilon = 1e-7);
        }
    }

    #[test]
    fn concurrence_two_paths_agree() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..200 {
            let m = random_state(&mut rng);
            assert!((concurrence(&m) - concurrence_hermitian(&m)).abs() < 1e-10);
        }
        assert!((concurrence(&werner(0.7)) - concurrence_hermitian(&werner(0.7))).abs() < 1e-10);
    }

    #[test]
    fn x_closed_form_matches_schur() {
        for p in [0.0, 0.25, 0.5, 0.8] {
            let m = werner(p);
            assert!((concurrence_x_state(&m) - concurrence_schur(&m)).abs() < 1e-10);
        }
        let mut noisy = bell();
        noisy[(0, 0)] = c(1e-17, 0.0);
        noisy[(3, 3)] = c(1e-17, 0.0);
        assert!(1.0 - concurrence(&noisy) < 1e-15);
    }

    #[test]
    fn mutual_information_examples() {
        let prod = product([c(0.6, 0.0), c(0.0, 0.8)], [c(1.0, 0.0), c(0.0, 0.0)]);
        assert_abs_diff_eq!(mutual_information(&prod), 0.0, epsilon = 1e-9);
        assert_abs_diff_eq!(mutual_information(&bell()), 2.0, epsilon = 1e-10);
        assert_abs_diff_eq!(mutual_information(&classical()), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn conditional_entropy_examples() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..10 {
            let m = MeasurementSetting::new(rng.gen_range(0.0..PI), rng.gen_range(0.0..2.0 * PI));
            for side in [Side::A, Side::B] {
                assert_abs_diff_eq!(conditional_entropy(&bell(), side, m), 0.0, epsilon = 1e-7);
                let mixed = Mat4::identity() * c(0.25, 0.0);
                assert_abs_diff_eq!(conditional_entropy(&mixed, side, m), 1.0, epsilon = 1e-12);
            }
        }
        assert_eq!(conditional_entropy(&classical(), Side::B, MeasurementSetting::Z), 0.0);
    }

    #[test]
    fn conditional_entropy_matches_projector_construction() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..200 {
            let rho = random_state(&mut rng);
            let m = MeasurementSetting::new(rng.gen_range(0.0..PI), rng.gen_range(0.0..2.0 * PI));
            for side in [Side::A, Side::B] {
                let a = conditional_entropy(&rho, side, m);
                let b = conditional_entropy_direct(&rho, side, m);
                assert!((a - b).abs() < 1e-12, "{a} vs {b}");
            }
        }
    }

    #[test]
    fn classical_correlation_examples() {
        let cfg = OptimizerConfig::default();
        for side in [Side::A, Side::B] {
            assert_abs_diff_eq!(classical_correlation(&bell(), side, &cfg).value, 1.0, epsilon = 1e-7);
            let prod = product([c(0.6, 0.0), c(0.0, 0.8)], [c(0.8, 0.0), c(0.6, 0.0)]);
            assert_abs_diff_eq!(classical_correlation(&prod, side, &cfg).value, 0.0, epsilon = 1e-7);
        }
        let cc = classical_correlation(&classical(), Side::B, &cfg);
        assert_abs_diff_eq!(cc.value, 1.0, epsilon = 1e-12);
        assert!(cc.setting.theta < 1e-9 || (PI - cc.setting.theta) < 1e-9);
    }

    #[test]
    fn discord_examples() {
        let cfg = OptimizerConfig::default();
        assert_abs_diff_eq!(discord(&bell(), Side::A, &cfg), 1.0, epsilon = 1e-6);
        assert_abs_diff_eq!(discord(&bell(), Side::B, &cfg), 1.0, epsilon = 1e-6);
        assert_eq!(discord(&classical(), Side::B, &cfg), 0.0);
        // classical-quantum state: measuring the classical side costs nothing
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let a = DensityMatrix::pure([c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)], Basis::Standard);
        let b = DensityMatrix::pure([c(0.0, 0.0), c(0.0, 0.0), c(s, 0.0), c(s, 0.0)], Basis::Standard);
        let cq = (a.into_elements() + b.into_elements()) * c(0.5, 0.0);
        assert_abs_diff_eq!(discord(&cq, Side::A, &cfg), 0.0, epsilon = 1e-9);
        assert!(discord(&cq, Side::B, &cfg) > 1e-3);
    }

    #[test]
    fn werner_discord_symmetric() {
        let cfg = OptimizerConfig::default();
        let m = werner(0.5);
        let da = discord(&m, Side::A, &cfg);
        let db = discord(&m, Side::B, &cfg);
        assert!((da - db).abs() < 1e-9);
        assert!(da > 0.1 && da < 1.0);
    }

    #[test]
    fn discord_invariant_under_local_unitaries() {
        let cfg = OptimizerConfig::default();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let unitary = |rng: &mut ChaCha8Rng| {
            let (a, b, g) = (
                rng.gen_range(0.0..PI),
                rng.gen_range(0.0..2.0 * PI),
                rng.gen_range(0.0..2.0 * PI),
            );
            let (s, co) = (0.5 * a).sin_cos();
            Mat2::new(
                c(co, 0.0),
                -C64::from_polar(s, g),
                C64::from_polar(s, b),
                C64::from_polar(co, b + g),
            )
        };
        for _ in 0..10 {
            let rho = random_state(&mut rng);
            let (ua, ub) = (unitary(&mut rng), unitary(&mut rng));
            let u = ua.kronecker(&ub);
            let rotated = u * rho * u.adjoint();
            for side in [Side::A, Side::B] {
                let d0 = discord(&rho, side, &cfg);
                let d1 = discord(&rotated, side, &cfg);
                assert!((d0 - d1).abs() < 1e-6, "{d0} vs {d1}");
            }
        }
    }

    #[test]
    fn report_bundles_everything() {
        let r = report(&DensityMatrix::bell_psi_plus(), &OptimizerConfig::default()).unwrap();
        assert_abs_diff_eq!(r.concurrence, 1.0, epsilon = 1e-10);
        assert_abs_diff_eq!(r.discord_a, 1.0, epsilon = 1e-6);
        assert_abs_diff_eq!(r.discord_b, 1.0, epsilon = 1e-6);
        assert!(r.optimizer_gap <= 1e-6);
        let e = DensityMatrix::new_unchecked(bell(), Basis::Energy);
        assert!(report(&e, &OptimizerConfig::default()).is_err());
    }

    #[test]
    fn settings_normalize() {
        let m = MeasurementSetting::new(-0.3, 0.1);
        assert_abs_diff_eq!(m.theta, 0.3, epsilon = 1e-15);
        assert_abs_diff_eq!(m.phi, 0.1 + PI, epsilon = 1e-15);
        let m = MeasurementSetting::new(PI + 0.2, 2.0 * PI - 0.1);
        assert_abs_diff_eq!(m.theta, PI - 0.2, epsilon = 1e-14);
        assert_abs_diff_eq!(m.phi, PI - 0.1, epsilon = 1e-14);
        let grid: Vec<_> = grid_settings(4, 8).collect();
        assert_eq!(grid.len(), 2 + 3 * 8);
    }
}
