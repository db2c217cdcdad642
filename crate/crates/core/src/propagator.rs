//! Closed-form solution of the memory-kernel master equation for X-shaped
//! initial states.
//!
//! With the kernel `k(t) = gamma0 exp(-gamma0 t)` every eigenmode `lambda` of
//! the generator evolves with the response function
//!
//! ```text
//! xi(lambda, t) = (gamma0 exp(lambda t) + lambda exp(-gamma0 t)) / (lambda + gamma0)
//! ```
//!
//! Energy-basis populations propagate through `P(t) = S diag(xi(J_kk, t)) S^-1`
//! and the `(1,2)`, `(3,4)` coherences through `xi` of the coherence
//! eigenvalues.

pub mod appendix;

use nalgebra::{SMatrix, Vector4};

use crate::dissipator::{self, BathParams, JordanDecomposition, RateSet};
use crate::error::{Error, Result};
use crate::model::{self, Basis, DensityMatrix, Spectrum, ValidatedParams};
use crate::{c, Mat4, RealMat4, C64};

/// Tolerance on the X pattern of an initial state.
pub const X_SHAPE_TOL: f64 = 1e-10;

/// `(exp(z) - 1) / z`, accurate for small `|z|`.
fn phi1(z: C64) -> C64 {
    if z.norm() < 1e-3 {
        // Horner form of 1 + z/2 + z^2/6 + z^3/24 + z^4/120 + z^5/720
        let mut acc = c(1.0 / 720.0, 0.0);
        for k in [120.0, 24.0, 6.0, 2.0, 1.0] {
            acc = acc * z + c(1.0 / k, 0.0);
        }
        acc
    } else {
        (z.exp() - 1.0) / z
    }
}

/// Memory response `xi(lambda, t)` for the exponential kernel.
///
/// Evaluated as `exp(lambda t) - lambda (exp(lambda t) - exp(-gamma0 t)) / (lambda + gamma0)`,
/// switching to a series for `(lambda + gamma0) t` near zero so that the
/// removable singularity at `lambda = -gamma0` (limit
/// `exp(-gamma0 t)(1 + gamma0 t)`) is handled smoothly.
pub fn memory_xi(lambda: C64, gamma0: f64, t: f64) -> C64 {
    let e_lt = (lambda * t).exp();
    let w = lambda + gamma0;
    let wt = w * t;
    if wt.norm() < 1e-3 {
        e_lt - lambda * t * (-gamma0 * t).exp() * phi1(wt)
    } else {
        e_lt - lambda * (e_lt - (-gamma0 * t).exp()) / w
    }
}

pub fn memory_xi_real(lambda: f64, gamma0: f64, t: f64) -> f64 {
    memory_xi(c(lambda, 0.0), gamma0, t).re
}

/// `P(t)` via the closed-form Jordan decomposition.
pub fn population_propagator_jordan(jd: &JordanDecomposition, gamma0: f64, t: f64) -> RealMat4 {
    let d = Vector4::from_fn(|k, _| memory_xi_real(jd.eigenvalues[k], gamma0, t));
    jd.s * RealMat4::from_diagonal(&d) * jd.s_inv
}

/// `P(t) = xi(L, t)` as a matrix function, without any eigendecomposition:
///
/// `xi(L, t) = exp(L t) - L exp(-gamma0 t) int_0^t exp((L + gamma0) s) ds`,
///
/// where the integral comes from one exponential of the block matrix
/// `[[L, I], [0, -gamma0 I]] t`. Used where the Jordan form breaks down.
pub fn population_propagator_matrix_function(r: &RateSet, gamma0: f64, t: f64) -> RealMat4 {
    let l = dissipator::lindblad_diag_matrix(r);
    let mut block = SMatrix::<f64, 8, 8>::zeros();
    block.fixed_view_mut::<4, 4>(0, 0).copy_from(&(l * t));
    block
        .fixed_view_mut::<4, 4>(0, 4)
        .copy_from(&(RealMat4::identity() * t));
    block
        .fixed_view_mut::<4, 4>(4, 4)
        .copy_from(&(RealMat4::identity() * (-gamma0 * t)));
    let e = block.exp();
    let e_lt: RealMat4 = e.fixed_view::<4, 4>(0, 0).into_owned();
    let integral: RealMat4 = e.fixed_view::<4, 4>(0, 4).into_owned();
    e_lt - l * integral
}

/// Population propagator `P(t)`; the Jordan path with a matrix-function
/// fallback on [`Error::RateDegeneracy`].
pub fn population_propagator(r: &RateSet, gamma0: f64, t: f64) -> RealMat4 {
    match dissipator::jordan_decomposition(r) {
        Ok(jd) => population_propagator_jordan(&jd, gamma0, t),
        Err(_) => population_propagator_matrix_function(r, gamma0, t),
    }
}

/// Multipliers of `(rho12, rho21, rho34, rho43)` in the energy basis.
/// The second of each pair is formed by conjugation, so the pairing is exact.
pub fn offdiag_multipliers(r: &RateSet, gamma0: f64, t: f64) -> [C64; 4] {
    let l = dissipator::nondiag_eigenvalues(r);
    let d1 = memory_xi(l[0], gamma0, t);
    let d3 = memory_xi(l[2], gamma0, t);
    [d1, d1.conj(), d3, d3.conj()]
}

/// Population propagator and coherence multipliers at one time.
#[derive(Debug, Clone, PartialEq)]
pub struct PropagatorSnapshot {
    pub t: f64,
    pub p: RealMat4,
    pub d: [C64; 4],
}

impl PropagatorSnapshot {
    /// Applies the snapshot to an energy-basis state. Elements outside the
    /// block pattern are dropped (they vanish for X-shaped states).
    pub fn apply(&self, rho_energy: &Mat4) -> Mat4 {
        let pops = Vector4::from_fn(|k, _| rho_energy[(k, k)].re);
        let new_pops = self.p * pops;
        let mut out = Mat4::zeros();
        for k in 0..4 {
            out[(k, k)] = c(new_pops[k], 0.0);
        }
        out[(0, 1)] = self.d[0] * rho_energy[(0, 1)];
        out[(1, 0)] = self.d[1] * rho_energy[(1, 0)];
        out[(2, 3)] = self.d[2] * rho_energy[(2, 3)];
        out[(3, 2)] = self.d[3] * rho_energy[(3, 2)];
        out
    }
}

/// Precomputed spectrum, rates and Jordan form for repeated evaluation along
/// a time grid.
#[derive(Debug, Clone)]
pub struct Propagator {
    params: ValidatedParams,
    baths: BathParams,
    spectrum: Spectrum,
    rates: RateSet,
    jordan: Option<JordanDecomposition>,
}

impl Propagator {
    pub fn new(params: &ValidatedParams, baths: &BathParams) -> Result<Self> {
        let rates = dissipator::rates(params, baths)?;
        Ok(Self {
            params: *params,
            baths: *baths,
            spectrum: model::spectrum(params),
            rates,
            jordan: dissipator::jordan_decomposition(&rates).ok(),
        })
    }

    pub fn params(&self) -> &ValidatedParams {
        &self.params
    }

    pub fn baths(&self) -> &BathParams {
        &self.baths
    }

    pub fn spectrum(&self) -> &Spectrum {
        &self.spectrum
    }

    pub fn rates(&self) -> &RateSet {
        &self.rates
    }

    pub fn uses_jordan_form(&self) -> bool {
        self.jordan.is_some()
    }

    pub fn population_propagator(&self, t: f64) -> RealMat4 {
        match &self.jordan {
            Some(jd) => population_propagator_jordan(jd, self.baths.gamma0, t),
            None => population_propagator_matrix_function(&self.rates, self.baths.gamma0, t),
        }
    }

    pub fn snapshot(&self, t: f64) -> PropagatorSnapshot {
        PropagatorSnapshot {
            t,
            p: self.population_propagator(t),
            d: offdiag_multipliers(&self.rates, self.baths.gamma0, t),
        }
    }

    /// Evolves an X-shaped standard-basis state to time `t`.
    pub fn evolve(&self, rho0: &DensityMatrix, t: f64) -> Result<DensityMatrix> {
        rho0.check_x_shaped(X_SHAPE_TOL)?;
        let e0 = model::to_energy_basis(rho0, &self.spectrum)?;
        let et = DensityMatrix::new_unchecked(self.snapshot(t).apply(e0.elements()), Basis::Energy);
        model::from_energy_basis(&et, &self.spectrum)
    }

    /// Energy-basis steady state.
    pub fn asymptotic_state(&self) -> Result<DensityMatrix> {
        asymptotic_state(&self.rates)
    }

    /// Steady state in the standard basis.
    pub fn asymptotic_state_standard(&self) -> Result<DensityMatrix> {
        model::from_energy_basis(&self.asymptotic_state()?, &self.spectrum)
    }

    /// A time by which every population mode has decayed by `exp(-50)`.
    pub fn settling_time(&self) -> f64 {
        50.0 / self.rates.slowest_rate()
    }
}

/// One-shot evolution of an X-shaped standard-basis state.
pub fn evolve(rho0: &DensityMatrix, params: &ValidatedParams, baths: &BathParams, t: f64) -> Result<DensityMatrix> {
    Propagator::new(params, baths)?.evolve(rho0, t)
}

/// `diag(X1+ Y2+, X1- Y2-, X1- Y2+, X1+ Y2-) / (X1 Y2)` in the energy basis.
pub fn asymptotic_state(r: &RateSet) -> Result<DensityMatrix> {
    let (x1, y2) = (r.x1(), r.y2());
    if !(x1 > 0.0 && y2 > 0.0) {
        return Err(Error::ZeroRates { x1, y2 });
    }
    let norm = x1 * y2;
    let pops = [
        r.x1p * r.y2p / norm,
        r.x1m * r.y2m / norm,
        r.x1m * r.y2p / norm,
        r.x1p * r.y2m / norm,
    ];
    let mut m = Mat4::zeros();
    for (k, v) in pops.into_iter().enumerate() {
        m[(k, k)] = c(v, 0.0);
    }
    Ok(DensityMatrix::new_unchecked(m, Basis::Energy))
}

/// Canonical state `exp(-beta H) / Z` in the energy basis.
pub fn gibbs_state(spectrum: &Spectrum, beta: f64) -> Result<DensityMatrix> {
    if !(beta > 0.0) {
        return Err(Error::InvalidParameter {
            name: "beta",
            expected: "positive",
            value: beta,
        });
    }
    let e_min = spectrum.energies.iter().copied().fold(f64::INFINITY, f64::min);
    let w = spectrum.energies.map(|e| {
        if beta.is_infinite() {
            if e == e_min {
                1.0
            } else {
                0.0
            }
        } else {
            (-beta * (e - e_min)).exp()
        }
    });
    let z: f64 = w.iter().sum();
    let mut m = Mat4::zeros();
    for (k, v) in w.into_iter().enumerate() {
        m[(k, k)] = c(v / z, 0.0);
    }
    Ok(DensityMatrix::new_unchecked(m, Basis::Energy))
}
