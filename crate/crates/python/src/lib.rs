//! Python bindings. Density matrices cross the boundary as 4x4 nested lists
//! of complex numbers in the standard basis `|00>, |01>, |10>, |11>`.

use pmdyn::correlations::{self, report_matrix};
use pmdyn::model::{self, critical_d};
use pmdyn::oracle::{integrate_master_equation, OracleConfig, OracleMode};
use pmdyn::propagator::{self, Propagator as CorePropagator};
use pmdyn::{Basis, DensityMatrix, Mat4, OptimizerConfig, Side, C64};
use pyo3::create_exception;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;

create_exception!(pmdyn_py, PmdynError, PyValueError);

fn err(e: pmdyn::Error) -> PyErr {
    PmdynError::new_err(e.to_string())
}

type Rows = Vec<Vec<C64>>;

fn to_mat(rows: Rows) -> PyResult<Mat4> {
    if rows.len() != 4 || rows.iter().any(|r| r.len() != 4) {
        return Err(PyValueError::new_err("density matrix must be 4x4"));
    }
    Ok(Mat4::from_fn(|i, j| rows[i][j]))
}

fn to_rows(m: &Mat4) -> Rows {
    (0..4).map(|i| (0..4).map(|j| m[(i, j)]).collect()).collect()
}

fn state(rows: Rows) -> PyResult<DensityMatrix> {
    DensityMatrix::new(to_mat(rows)?, Basis::Standard).map_err(err)
}

fn side(name: &str) -> PyResult<Side> {
    match name {
        "A" | "a" => Ok(Side::A),
        "B" | "b" => Ok(Side::B),
        _ => Err(PyValueError::new_err(format!("side must be 'A' or 'B', got {name:?}"))),
    }
}

/// Hamiltonian parameters, validated on construction.
#[pyclass(frozen, module = "pmdyn_py")]
struct SystemParams {
    inner: pmdyn::ValidatedParams,
}

#[pymethods]
impl SystemParams {
    #[new]
    #[pyo3(signature = (J, chi, B, b, D, degeneracy_tol=None))]
    #[allow(non_snake_case)]
    fn new(J: f64, chi: f64, B: f64, b: f64, D: f64, degeneracy_tol: Option<f64>) -> PyResult<Self> {
        let inner = pmdyn::SystemParams::new(J, chi, B, b, D)
            .validate(degeneracy_tol)
            .map_err(err)?;
        Ok(Self { inner })
    }

    #[getter(J)]
    fn coupling(&self) -> f64 {
        self.inner.params().coupling
    }

    #[getter]
    fn chi(&self) -> f64 {
        self.inner.params().anisotropy
    }

    #[getter(B)]
    fn field(&self) -> f64 {
        self.inner.params().field
    }

    #[getter]
    fn b(&self) -> f64 {
        self.inner.params().inhomogeneity
    }

    #[getter(D)]
    fn dm(&self) -> f64 {
        self.inner.params().dm
    }

    #[getter]
    fn xi(&self) -> f64 {
        self.inner.xi()
    }

    #[getter]
    fn eta(&self) -> f64 {
        self.inner.eta()
    }

    /// `{"energies": [...], "eigenvectors": 4x4}` with columns ordered
    /// `(Psi+, Psi-, Sigma+, Sigma-)`.
    fn spectrum<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyDict>> {
        let s = model::spectrum(&self.inner);
        let d = PyDict::new(py);
        d.set_item("energies", s.energies.to_vec())?;
        d.set_item("eigenvectors", to_rows(&s.eigenvectors))?;
        Ok(d)
    }

    #[staticmethod]
    #[allow(non_snake_case)]
    fn critical_d(J: f64, chi: f64, B: f64, b: f64) -> PyResult<f64> {
        critical_d(J, chi, B, b).map_err(err)
    }

    fn __repr__(&self) -> String {
        let p = self.inner.params();
        format!(
            "SystemParams(J={}, chi={}, B={}, b={}, D={})",
            p.coupling, p.anisotropy, p.field, p.inhomogeneity, p.dm
        )
    }
}

/// Bath temperatures, couplings and memory rate. Give exactly one of
/// `gamma0` and `gamma0_ratio` (the latter relative to the mean coupling).
#[pyclass(frozen, module = "pmdyn_py")]
struct BathParams {
    inner: pmdyn::BathParams,
}

#[pymethods]
impl BathParams {
    #[new]
    #[pyo3(signature = (T1, T2, gamma1, gamma2, gamma0=None, gamma0_ratio=None))]
    #[allow(non_snake_case)]
    fn new(
        T1: f64,
        T2: f64,
        gamma1: f64,
        gamma2: f64,
        gamma0: Option<f64>,
        gamma0_ratio: Option<f64>,
    ) -> PyResult<Self> {
        let g0 = match (gamma0, gamma0_ratio) {
            (Some(g), None) => g,
            (None, Some(r)) => r * 0.5 * (gamma1 + gamma2),
            _ => return Err(PyValueError::new_err("give exactly one of gamma0 and gamma0_ratio")),
        };
        let inner = pmdyn::BathParams::new(T1, T2, gamma1, gamma2, g0);
        inner.validate().map_err(err)?;
        Ok(Self { inner })
    }

    #[getter(T1)]
    fn t1(&self) -> f64 {
        self.inner.t1
    }

    #[getter(T2)]
    fn t2(&self) -> f64 {
        self.inner.t2
    }

    #[getter]
    fn gamma1(&self) -> f64 {
        self.inner.gamma1
    }

    #[getter]
    fn gamma2(&self) -> f64 {
        self.inner.gamma2
    }

    #[getter]
    fn gamma0(&self) -> f64 {
        self.inner.gamma0
    }

    fn __repr__(&self) -> String {
        let b = &self.inner;
        format!(
            "BathParams(T1={}, T2={}, gamma1={}, gamma2={}, gamma0={})",
            b.t1, b.t2, b.gamma1, b.gamma2, b.gamma0
        )
    }
}

fn report_dict<'py>(py: Python<'py>, r: &pmdyn::CorrelationReport) -> PyResult<Bound<'py, PyDict>> {
    let d = PyDict::new(py);
    d.set_item("concurrence", r.concurrence)?;
    d.set_item("mutual_info", r.mutual_info)?;
    d.set_item("classical_corr_A", r.classical_corr_a)?;
    d.set_item("classical_corr_B", r.classical_corr_b)?;
    d.set_item("discord_A", r.discord_a)?;
    d.set_item("discord_B", r.discord_b)?;
    d.set_item("discord_gap", r.discord_gap())?;
    d.set_item("optimal_A", (r.optimal_a.theta, r.optimal_a.phi))?;
    d.set_item("optimal_B", (r.optimal_b.theta, r.optimal_b.phi))?;
    Ok(d)
}

/// Closed-form evolution for one parameter set.
#[pyclass(frozen, module = "pmdyn_py")]
struct Propagator {
    inner: CorePropagator,
}

#[pymethods]
impl Propagator {
    #[new]
    fn new(params: &SystemParams, baths: &BathParams) -> PyResult<Self> {
        let inner = CorePropagator::new(&params.inner, &baths.inner).map_err(err)?;
        Ok(Self { inner })
    }

    /// Rates `X1+-`, `Y2+-` and the sums `X1`, `Y2`.
    fn rates<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyDict>> {
        let r = self.inner.rates();
        let d = PyDict::new(py);
        for (k, v) in [
            ("X1+", r.x1p),
            ("X1-", r.x1m),
            ("Y2+", r.y2p),
            ("Y2-", r.y2m),
            ("X1", r.x1()),
            ("Y2", r.y2()),
        ] {
            d.set_item(k, v)?;
        }
        Ok(d)
    }

    fn evolve(&self, rho: Rows, t: f64) -> PyResult<Rows> {
        let out = self.inner.evolve(&state(rho)?, t).map_err(err)?;
        Ok(to_rows(out.elements()))
    }

    /// Correlation report at each time, with the time under key `t`.
    fn trajectory<'py>(&self, py: Python<'py>, rho: Rows, times: Vec<f64>) -> PyResult<Vec<Bound<'py, PyDict>>> {
        let rho0 = state(rho)?;
        let cfg = OptimizerConfig::default();
        times
            .iter()
            .map(|&t| {
                let rho = self.inner.evolve(&rho0, t).map_err(err)?;
                let d = report_dict(py, &report_matrix(rho.elements(), &cfg))?;
                d.set_item("t", t)?;
                d.set_item("purity", rho.purity())?;
                Ok(d)
            })
            .collect()
    }

    fn asymptotic_state(&self) -> PyResult<Rows> {
        Ok(to_rows(self.inner.asymptotic_state_standard().map_err(err)?.elements()))
    }

    fn settling_time(&self) -> f64 {
        self.inner.settling_time()
    }
}

/// Canonical state at temperature `T`.
#[pyfunction]
#[allow(non_snake_case)]
fn gibbs_state(params: &SystemParams, T: f64) -> PyResult<Rows> {
    let s = model::spectrum(&params.inner);
    let e = propagator::gibbs_state(&s, 1.0 / T).map_err(err)?;
    Ok(to_rows(model::from_energy_basis(&e, &s).map_err(err)?.elements()))
}

#[pyfunction]
fn bell_psi_plus() -> Rows {
    to_rows(DensityMatrix::bell_psi_plus().elements())
}

/// `p |psi+><psi+| + (1 - p) I / 4`.
#[pyfunction]
fn werner_psi_plus(p: f64) -> PyResult<Rows> {
    Ok(to_rows(DensityMatrix::werner_psi_plus(p).map_err(err)?.elements()))
}

#[pyfunction]
fn concurrence(rho: Rows) -> PyResult<f64> {
    Ok(correlations::concurrence(state(rho)?.elements()))
}

#[pyfunction]
fn mutual_information(rho: Rows) -> PyResult<f64> {
    Ok(correlations::mutual_information(state(rho)?.elements()))
}

/// Discord with the measurement on qubit `side`.
#[pyfunction]
#[pyo3(signature = (rho, side="A"))]
fn discord(rho: Rows, side: &str) -> PyResult<f64> {
    let s = self::side(side)?;
    Ok(correlations::discord(
        state(rho)?.elements(),
        s,
        &OptimizerConfig::default(),
    ))
}

#[pyfunction]
fn report<'py>(py: Python<'py>, rho: Rows) -> PyResult<Bound<'py, PyDict>> {
    let r = report_matrix(state(rho)?.elements(), &OptimizerConfig::default());
    report_dict(py, &r)
}

/// Numerical master-equation integration, for cross-checks.
#[pyfunction]
#[pyo3(signature = (rho, params, baths, times, mode="inside"))]
fn integrate(rho: Rows, params: &SystemParams, baths: &BathParams, times: Vec<f64>, mode: &str) -> PyResult<Vec<Rows>> {
    let mode = match mode {
        "inside" => OracleMode::HamiltonianInside,
        "outside" => OracleMode::HamiltonianOutside,
        "memoryless" => OracleMode::Memoryless,
        other => return Err(PyValueError::new_err(format!("unknown mode {other:?}"))),
    };
    let cfg = OracleConfig::default().with_mode(mode);
    let traj = integrate_master_equation(&state(rho)?, &params.inner, &baths.inner, &times, &cfg).map_err(err)?;
    Ok(traj.states.iter().map(|s| to_rows(s.elements())).collect())
}

#[pymodule]
fn pmdyn_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("PmdynError", m.py().get_type::<PmdynError>())?;
    m.add_class::<SystemParams>()?;
    m.add_class::<BathParams>()?;
    m.add_class::<Propagator>()?;
    m.add_function(wrap_pyfunction!(gibbs_state, m)?)?;
    m.add_function(wrap_pyfunction!(bell_psi_plus, m)?)?;
    m.add_function(wrap_pyfunction!(werner_psi_plus, m)?)?;
    m.add_function(wrap_pyfunction!(concurrence, m)?)?;
    m.add_function(wrap_pyfunction!(mutual_information, m)?)?;
    m.add_function(wrap_pyfunction!(discord, m)?)?;
    m.add_function(wrap_pyfunction!(report, m)?)?;
    m.add_function(wrap_pyfunction!(integrate, m)?)?;
    Ok(())
}
