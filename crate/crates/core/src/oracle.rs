//! Independent numerical ground truth.
//!
//! The master equation with kernel `k(t) = gamma0 exp(-gamma0 t)` is reduced to
//! a local linear system through the auxiliary field
//! `u(t) = int_0^t gamma0 exp(-gamma0 (t - s)) exp(L (t - s)) rho(s) ds`, and
//! integrated with classical fourth-order Runge-Kutta in the standard basis.
//! Nothing here uses the closed-form propagators: the Hamiltonian is
//! diagonalised from scratch, the transition strengths are matrix elements of
//! `sigma^x_j` between eigenstates, and the dissipator is assembled as a
//! superoperator from the jump operators.

use nalgebra::{DMatrix, SymmetricEigen};

use crate::correlations::{entropy_2x2, grid_minimum, mutual_information, partial_trace, MeasurementProblem, Side};
use crate::dissipator::{BathParams, RateSet};
use crate::error::{Error, Result};
use crate::model::{build_hamiltonian, Basis, DensityMatrix, ValidatedParams};
use crate::propagator::appendix::{self, ElementReport, Inputs};
use crate::propagator::{population_propagator_jordan, population_propagator_matrix_function};
use crate::{c, dissipator, Mat4, RealMat4, C64};

/// Maximum number of step halvings before giving up.
pub const MAX_HALVINGS: u32 = 12;

/// Where the Hamiltonian commutator sits relative to the memory convolution.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum OracleMode {
    /// `drho/dt = -i[H, rho] + L u`, `du/dt = gamma0 rho + (L - gamma0) u`.
    HamiltonianOutside,
    /// As above with `L` replaced by `G = -i[H, .] + L` in both places.
    HamiltonianInside,
    /// Memoryless kernel: `drho/dt = G rho`.
    Memoryless,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleConfig {
    pub mode: OracleMode,
    /// Initial step; halved until two successive runs agree.
    pub step: f64,
    /// Maximum elementwise difference between successive refinements.
    pub tolerance: f64,
}

impl Default for OracleConfig {
    fn default() -> Self {
        Self {
            mode: OracleMode::HamiltonianInside,
            step: 0.01,
            tolerance: 1e-10,
        }
    }
}

impl OracleConfig {
    pub fn with_mode(self, mode: OracleMode) -> Self {
        Self { mode, ..self }
    }

    fn validate(&self) -> Result<()> {
        if !(self.step > 0.0 && self.step.is_finite()) {
            return Err(Error::InvalidParameter {
                name: "step",
                expected: "> 0",
                value: self.step,
            });
        }
        if !(self.tolerance > 0.0 && self.tolerance.is_finite()) {
            return Err(Error::InvalidParameter {
                name: "tolerance",
                expected: "> 0",
                value: self.tolerance,
            });
        }
        Ok(())
    }
}

/// States at the requested times, all in the standard basis.
#[derive(Debug, Clone)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<DensityMatrix>,
    /// Step of the accepted run.
    pub step: f64,
    pub halvings: u32,
    /// Difference between the accepted run and the previous one.
    pub refinement_difference: f64,
    /// Largest `|tr rho - 1|` seen at any integration step.
    pub max_trace_error: f64,
}

fn thermal_rate(gamma: f64, temperature: f64, omega: f64) -> Result<f64> {
    if omega == 0.0 {
        return Err(Error::ZeroFrequency);
    }
    let n = 1.0 / (omega.abs() / temperature).exp_m1();
    Ok(if omega > 0.0 { gamma * n } else { gamma * (n + 1.0) })
}

/// Eigenpairs of `H` grouped by sector: `(psi, sigma)`, each sorted by
/// descending energy.
fn sectors(h: &Mat4) -> ([(f64, [C64; 4]); 2], [(f64, [C64; 4]); 2]) {
    let eig = SymmetricEigen::new(*h);
    let mut psi = Vec::new();
    let mut sigma = Vec::new();
    for k in 0..4 {
        let v = eig.eigenvectors.column(k);
        let v = [v[0], v[1], v[2], v[3]];
        let w_psi = v[1].norm_sqr() + v[2].norm_sqr();
        if w_psi > 0.5 {
            psi.push((eig.eigenvalues[k], v));
        } else {
            sigma.push((eig.eigenvalues[k], v));
        }
    }
    assert!(psi.len() == 2 && sigma.len() == 2, "Hamiltonian sectors are mixed");
    psi.sort_by(|a, b| b.0.total_cmp(&a.0));
    sigma.sort_by(|a, b| b.0.total_cmp(&a.0));
    ([psi[0], psi[1]], [sigma[0], sigma[1]])
}

fn outer(a: &[C64; 4], b: &[C64; 4]) -> Mat4 {
    Mat4::from_fn(|i, j| a[i] * b[j].conj())
}

fn sigma_x(site: usize) -> Mat4 {
    let mut m = Mat4::zeros();
    for i in 0..4 {
        let j = if site == 1 { i ^ 2 } else { i ^ 1 };
        m[(i, j)] = c(1.0, 0.0);
    }
    m
}

/// `|<psi| sigma^x_j |sigma>|^2` for bath `j` and the four transitions in the
/// order `(Psi+ Sigma+, Psi+ Sigma-, Psi- Sigma+, Psi- Sigma-)`.
pub fn coupling_strengths(p: &ValidatedParams) -> [[f64; 4]; 2] {
    let (psi, sigma) = sectors(&build_hamiltonian(p.params()));
    let mut out = [[0.0; 4]; 2];
    for (j, row) in out.iter_mut().enumerate() {
        let sx = sigma_x(j + 1);
        for (mu, (a, b)) in [(0, 0), (0, 1), (1, 0), (1, 1)].into_iter().enumerate() {
            let v = &psi[a].1;
            let w = &sigma[b].1;
            let mut amp = c(0.0, 0.0);
            for r in 0..4 {
                for s in 0..4 {
                    amp += v[r].conj() * sx[(r, s)] * w[s];
                }
            }
            row[mu] = amp.norm_sqr();
        }
    }
    out
}

type Super = DMatrix<C64>;

/// Column-stacking vectorisation: `vec(A X B) = (B^T kron A) vec(X)`.
fn left_right(a: &Mat4, b: &Mat4) -> Super {
    let k = b.transpose().kronecker(a);
    DMatrix::from_iterator(16, 16, k.iter().cloned())
}

fn commutator_super(h: &Mat4) -> Super {
    let id = Mat4::identity();
    (left_right(h, &id) - left_right(&id, h)) * c(0.0, -1.0)
}

fn jump_super(a: &Mat4, rate: f64) -> Super {
    let id = Mat4::identity();
    let ada = a.adjoint() * a;
    (left_right(a, &a.adjoint()) - (left_right(&ada, &id) + left_right(&id, &ada)) * c(0.5, 0.0)) * c(rate, 0.0)
}

/// The Hamiltonian and dissipative superoperators in the standard basis.
pub fn generators(p: &ValidatedParams, baths: &BathParams) -> Result<(Super, Super)> {
    baths.validate()?;
    let h = build_hamiltonian(p.params());
    let (psi, sigma) = sectors(&h);
    let strengths = coupling_strengths(p);
    let mut diss = Super::zeros(16, 16);
    for (mu, (a, b)) in [(0, 0), (0, 1), (1, 0), (1, 1)].into_iter().enumerate() {
        let (e_up, v_up) = psi[a];
        let (e_lo, v_lo) = sigma[b];
        let omega = e_up - e_lo;
        let raise = outer(&v_up, &v_lo);
        let lower = raise.adjoint();
        let (mut up_rate, mut down_rate) = (0.0, 0.0);
        for j in 0..2 {
            let g = baths.gamma(j + 1);
            let t = baths.temperature(j + 1);
            up_rate += 2.0 * thermal_rate(g, t, omega)? * strengths[j][mu];
            down_rate += 2.0 * thermal_rate(g, t, -omega)? * strengths[j][mu];
        }
        diss += jump_super(&raise, up_rate) + jump_super(&lower, down_rate);
    }
    Ok((commutator_super(&h), diss))
}

/// Generator of the linear local system for the given mode. The state is
/// `(vec rho, vec u)` for the memory modes and `vec rho` for the memoryless one.
fn system_matrix(hc: &Super, diss: &Super, gamma0: f64, mode: OracleMode) -> Super {
    let id = Super::identity(16, 16);
    let g0 = c(gamma0, 0.0);
    match mode {
        OracleMode::Memoryless => hc + diss,
        OracleMode::HamiltonianOutside | OracleMode::HamiltonianInside => {
            let (kernel, memory) = match mode {
                OracleMode::HamiltonianOutside => (diss.clone(), Some(hc)),
                _ => (hc + diss, None),
            };
            let mut m = Super::zeros(32, 32);
            if let Some(hc) = memory {
                m.view_mut((0, 0), (16, 16)).copy_from(hc);
            }
            m.view_mut((0, 16), (16, 16)).copy_from(&kernel);
            m.view_mut((16, 0), (16, 16)).copy_from(&(&id * g0));
            m.view_mut((16, 16), (16, 16)).copy_from(&(kernel - &id * g0));
            m
        }
    }
}

/// One classical RK4 step for `x' = M x`, as a matrix.
fn rk4_step_matrix(m: &DMatrix<C64>, h: f64) -> DMatrix<C64> {
    let n = m.nrows();
    let a = m * c(h, 0.0);
    let a2 = &a * &a;
    let a3 = &a2 * &a;
    let a4 = &a3 * &a;
    DMatrix::identity(n, n) + &a + a2 * c(0.5, 0.0) + a3 * c(1.0 / 6.0, 0.0) + a4 * c(1.0 / 24.0, 0.0)
}

fn check_times(times: &[f64]) -> Result<()> {
    let mut prev = 0.0;
    for &t in times {
        if !(t >= prev && t.is_finite()) {
            return Err(Error::InvalidParameter {
                name: "times",
                expected: "finite, nonnegative and nondecreasing",
                value: t,
            });
        }
        prev = t;
    }
    Ok(())
}

/// Fixed-step integration of `x' = M x`. Each interval between output times
/// is split into `2^level` times the smallest number of equal steps no longer
/// than `step`, so successive levels halve every step exactly. `probe` is
/// called after every step.
fn integrate_linear(
    m: &DMatrix<C64>,
    x0: &DMatrix<C64>,
    times: &[f64],
    step: f64,
    level: u32,
    mut probe: impl FnMut(&DMatrix<C64>),
) -> Vec<DMatrix<C64>> {
    let mut out = Vec::with_capacity(times.len());
    let mut x = x0.clone();
    let mut now = 0.0;
    for &t in times {
        let span = t - now;
        if span > 0.0 {
            let n = ((span / step - 1e-9).ceil().max(1.0) as usize) << level;
            let r = rk4_step_matrix(m, span / n as f64);
            for _ in 0..n {
                x = &r * &x;
                probe(&x);
            }
        }
        now = t;
        out.push(x.clone());
    }
    out
}

fn max_difference(a: &[DMatrix<C64>], b: &[DMatrix<C64>]) -> f64 {
    a.iter()
        .zip(b)
        .flat_map(|(x, y)| x.iter().zip(y.iter()).map(|(p, q)| (p - q).norm()))
        .fold(0.0f64, |acc, d| if d.is_nan() { f64::INFINITY } else { acc.max(d) })
}

/// Runs `run(level)` at successive halving levels until two consecutive
/// results agree to `tolerance`. Returns the nominal step of the accepted run.
fn refine<T>(
    cfg: &OracleConfig,
    mut run: impl FnMut(u32) -> (Vec<DMatrix<C64>>, T),
) -> Result<(Vec<DMatrix<C64>>, T, f64, u32, f64)> {
    let (mut prev, _) = run(0);
    let mut last_diff = f64::INFINITY;
    for k in 1..=MAX_HALVINGS {
        let (cur, extra) = run(k);
        last_diff = max_difference(&prev, &cur);
        if last_diff < cfg.tolerance {
            return Ok((cur, extra, cfg.step / f64::from(1u32 << k), k, last_diff));
        }
        prev = cur;
    }
    Err(Error::NonConvergence {
        halvings: MAX_HALVINGS,
        difference: last_diff,
    })
}

fn vec_of(rho: &Mat4) -> DMatrix<C64> {
    DMatrix::from_iterator(16, 1, rho.iter().cloned())
}

fn initial_vector(rho: &Mat4, mode: OracleMode) -> DMatrix<C64> {
    match mode {
        OracleMode::Memoryless => vec_of(rho),
        _ => {
            let mut x = DMatrix::zeros(32, 1);
            x.view_mut((0, 0), (16, 1)).copy_from(&vec_of(rho));
            x
        }
    }
}

fn unvec(x: &DMatrix<C64>) -> Mat4 {
    Mat4::from_iterator(x.iter().take(16).cloned())
}

fn trace_error(x: &DMatrix<C64>) -> f64 {
    (x[0] + x[5] + x[10] + x[15] - c(1.0, 0.0)).norm()
}

/// Fixed-step run without refinement, used for convergence studies.
pub fn integrate_fixed_step(
    rho0: &DensityMatrix,
    p: &ValidatedParams,
    baths: &BathParams,
    times: &[f64],
    mode: OracleMode,
    step: f64,
) -> Result<Vec<DensityMatrix>> {
    rho0.expect_basis(Basis::Standard)?;
    check_times(times)?;
    let (hc, diss) = generators(p, baths)?;
    let m = system_matrix(&hc, &diss, baths.gamma0, mode);
    let x0 = initial_vector(rho0.elements(), mode);
    Ok(integrate_linear(&m, &x0, times, step, 0, |_| {})
        .iter()
        .map(|x| DensityMatrix::new_unchecked(unvec(x), Basis::Standard))
        .collect())
}

/// Integrates the master equation from `rho0` (standard basis) and returns the
/// states at `times`.
pub fn integrate_master_equation(
    rho0: &DensityMatrix,
    p: &ValidatedParams,
    baths: &BathParams,
    times: &[f64],
    cfg: &OracleConfig,
) -> Result<Trajectory> {
    cfg.validate()?;
    rho0.expect_basis(Basis::Standard)?;
    check_times(times)?;
    let (hc, diss) = generators(p, baths)?;
    let m = system_matrix(&hc, &diss, baths.gamma0, cfg.mode);
    let x0 = initial_vector(rho0.elements(), cfg.mode);
    let (xs, max_trace_error, step, halvings, refinement_difference) = refine(cfg, |level| {
        let mut worst = 0.0f64;
        let xs = integrate_linear(&m, &x0, times, cfg.step, level, |x| worst = worst.max(trace_error(x)));
        (xs, worst)
    })?;
    Ok(Trajectory {
        times: times.to_vec(),
        states: xs
            .iter()
            .map(|x| DensityMatrix::new_unchecked(unvec(x), Basis::Standard))
            .collect(),
        step,
        halvings,
        refinement_difference,
        max_trace_error,
    })
}

/// Energy-basis population propagator from integrating the rate equations
/// with memory, `v' = L w`, `w' = gamma0 v + (L - gamma0) w`, for all four
/// initial populations at once.
pub fn population_ode(r: &RateSet, gamma0: f64, times: &[f64], cfg: &OracleConfig) -> Result<Vec<RealMat4>> {
    cfg.validate()?;
    check_times(times)?;
    let l = dissipator::lindblad_diag_matrix(r).map(|v| c(v, 0.0));
    let id = Mat4::identity();
    let mut m = DMatrix::zeros(8, 8);
    m.view_mut((0, 4), (4, 4)).copy_from(&l);
    m.view_mut((4, 0), (4, 4)).copy_from(&(id * c(gamma0, 0.0)));
    m.view_mut((4, 4), (4, 4)).copy_from(&(l - id * c(gamma0, 0.0)));
    let mut x0 = DMatrix::zeros(8, 4);
    for k in 0..4 {
        x0[(k, k)] = c(1.0, 0.0);
    }
    let (xs, _, _, _, _) = refine(cfg, |level| {
        (integrate_linear(&m, &x0, times, cfg.step, level, |_| {}), ())
    })?;
    Ok(xs.iter().map(|x| RealMat4::from_fn(|i, j| x[(i, j)].re)).collect())
}

/// Classical correlation and discord from an exhaustive grid over
/// measurement directions. Grid rows are `theta_i = pi i / n_theta`, so a
/// grid refines every coarser grid whose sizes divide it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridDiscord {
    pub classical_correlation: f64,
    pub discord: f64,
}

pub fn discord_grid_oracle(rho: &Mat4, side: Side, n_theta: usize, n_phi: usize) -> GridDiscord {
    assert!(n_theta >= 1 && n_phi >= 1, "grid must have at least one interval");
    let problem = MeasurementProblem::new(rho, side);
    let (min_cond, _) = grid_minimum(&problem, n_theta, n_phi);
    let cc = entropy_2x2(&partial_trace(rho, side.other())) - min_cond;
    GridDiscord {
        classical_correlation: cc,
        discord: mutual_information(rho) - cc,
    }
}

/// Element-wise comparison of the population propagator paths.
#[derive(Debug, Clone)]
pub struct ComparisonReport {
    pub times: Vec<f64>,
    /// Jordan form vs matrix function (`None` when the Jordan form is unavailable).
    pub jordan_vs_matrix_function: Option<f64>,
    /// Matrix function vs integrated rate equations.
    pub matrix_function_vs_ode: f64,
    /// Printed appendix vs the matrix-function path, per element.
    pub appendix: Vec<ElementReport>,
}

/// Elements deviating by more than this are flagged as typos.
pub const APPENDIX_TOL: f64 = 1e-6;

impl ComparisonReport {
    pub fn suspected_typos(&self) -> impl Iterator<Item = &ElementReport> {
        self.appendix.iter().filter(|e| !e.agrees(APPENDIX_TOL))
    }
}

pub fn compare_propagators(
    r: &RateSet,
    y1m: f64,
    gamma0: f64,
    t_grid: &[f64],
    cfg: &OracleConfig,
) -> Result<ComparisonReport> {
    let mf: Vec<RealMat4> = t_grid
        .iter()
        .map(|&t| population_propagator_matrix_function(r, gamma0, t))
        .collect();
    let max_dev =
        |a: &[RealMat4], b: &[RealMat4]| a.iter().zip(b).map(|(x, y)| (x - y).abs().max()).fold(0.0f64, f64::max);
    let jordan_vs_matrix_function = dissipator::jordan_decomposition(r).ok().map(|jd| {
        let j: Vec<RealMat4> = t_grid
            .iter()
            .map(|&t| population_propagator_jordan(&jd, gamma0, t))
            .collect();
        max_dev(&j, &mf)
    });
    let ode = population_ode(r, gamma0, t_grid, cfg)?;
    let samples: Vec<Inputs> = t_grid
        .iter()
        .map(|&t| Inputs {
            rates: *r,
            y1m,
            gamma0,
            t,
        })
        .collect();
    let appendix = appendix::arbitrate(
        &samples,
        |v| population_propagator_matrix_function(&v.rates, v.gamma0, v.t),
        APPENDIX_TOL,
    );
    Ok(ComparisonReport {
        times: t_grid.to_vec(),
        jordan_vs_matrix_function,
        matrix_function_vs_ode: max_dev(&mf, &ode),
        appendix,
    })
}
