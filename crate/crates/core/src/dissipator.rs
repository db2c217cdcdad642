//! Bath spectral densities, transition coefficients and the dissipative rate
//! set, plus the diagonal-sector Lindbladian and its Jordan form.
//!
//! Transitions are labelled by `mu = 1..4`:
//!
//! | mu | raising operator    | frequency         |
//! |----|---------------------|-------------------|
//! | 1  | `|Psi+><Sigma+|`    | `w1 = xi - eta`   |
//! | 2  | `|Psi+><Sigma-|`    | `w2 = xi + eta`   |
//! | 3  | `|Psi-><Sigma+|`    | `w3 = -(xi + eta)`|
//! | 4  | `|Psi-><Sigma-|`    | `w4 = eta - xi`   |
//!
//! A raising operator moves the system up by its (signed) frequency, at the
//! rate `2 J(w) |c|^2`; its adjoint moves it back down at `2 J(-w) |c|^2`.

use nalgebra::Matrix4;

use crate::error::{Error, Result};
use crate::model::ValidatedParams;
use crate::{c, RealMat4, C64};

/// Temperatures, couplings and memory rate of the two baths.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BathParams {
    pub t1: f64,
    pub t2: f64,
    pub gamma1: f64,
    pub gamma2: f64,
    /// Inverse memory time of the exponential kernel `gamma0 exp(-gamma0 t)`.
    pub gamma0: f64,
}

impl BathParams {
    pub fn new(t1: f64, t2: f64, gamma1: f64, gamma2: f64, gamma0: f64) -> Self {
        Self {
            t1,
            t2,
            gamma1,
            gamma2,
            gamma0,
        }
    }

    /// Equal couplings `gamma` with `gamma0 = ratio * gamma`.
    pub fn symmetric(t1: f64, t2: f64, gamma: f64, ratio: f64) -> Self {
        Self::new(t1, t2, gamma, gamma, ratio * gamma)
    }

    pub fn mean_temperature(&self) -> f64 {
        0.5 * (self.t1 + self.t2)
    }

    /// `T1 - T2`.
    pub fn delta_t(&self) -> f64 {
        self.t1 - self.t2
    }

    /// `(gamma1 + gamma2) / 2`.
    pub fn mean_gamma(&self) -> f64 {
        0.5 * (self.gamma1 + self.gamma2)
    }

    pub fn with_temperatures(self, t1: f64, t2: f64) -> Self {
        Self { t1, t2, ..self }
    }

    pub fn with_gamma0(self, gamma0: f64) -> Self {
        Self { gamma0, ..self }
    }

    pub fn temperature(&self, bath: usize) -> f64 {
        match bath {
            1 => self.t1,
            2 => self.t2,
            _ => panic!("bath index {bath} out of range"),
        }
    }

    pub fn gamma(&self, bath: usize) -> f64 {
        match bath {
            1 => self.gamma1,
            2 => self.gamma2,
            _ => panic!("bath index {bath} out of range"),
        }
    }

    /// Positive temperatures, nonnegative couplings, positive `gamma0`.
    pub fn validate(&self) -> Result<()> {
        let positive = [("T1", self.t1), ("T2", self.t2), ("gamma0", self.gamma0)];
        for (name, value) in positive {
            if !(value > 0.0 && value.is_finite()) {
                return Err(Error::InvalidParameter {
                    name,
                    expected: "positive and finite",
                    value,
                });
            }
        }
        for (name, value) in [("gamma1", self.gamma1), ("gamma2", self.gamma2)] {
            if !(value >= 0.0 && value.is_finite()) {
                return Err(Error::InvalidParameter {
                    name,
                    expected: "nonnegative and finite",
                    value,
                });
            }
        }
        Ok(())
    }

    /// Spectral density of bath `1` or `2` at a signed frequency.
    pub fn spectral_density(&self, bath: usize, omega: f64) -> Result<f64> {
        spectral_density(self.gamma(bath), 1.0 / self.temperature(bath), omega)
    }
}

/// Bose-Einstein occupation `1 / (exp(beta omega) - 1)`.
pub fn bose_occupation(omega: f64, beta: f64) -> Result<f64> {
    if !(omega > 0.0) {
        return Err(Error::NonPositiveFrequency(omega));
    }
    if !(beta > 0.0) {
        return Err(Error::InvalidParameter {
            name: "beta",
            expected: "positive",
            value: beta,
        });
    }
    Ok(1.0 / (beta * omega).exp_m1())
}

/// Flat-coupling thermal spectral density: `gamma n(w)` for absorption
/// (`w > 0`) and `gamma (n(|w|) + 1)` for emission (`w < 0`), so that
/// `J(-w) = exp(beta w) J(w)`.
pub fn spectral_density(gamma: f64, beta: f64, omega: f64) -> Result<f64> {
    if omega == 0.0 {
        return Err(Error::ZeroFrequency);
    }
    let n = bose_occupation(omega.abs(), beta)?;
    Ok(if omega > 0.0 { gamma * n } else { gamma * (n + 1.0) })
}

/// `|c_{j,mu}|^2` for both baths, indexed `[j - 1][mu - 1]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransitionCoeffs {
    pub c2: [[f64; 4]; 2],
}

impl TransitionCoeffs {
    pub fn get(&self, bath: usize, transition: usize) -> f64 {
        self.c2[bath - 1][transition - 1]
    }
}

/// `|c_{j,1}|^2 = |c_{j,4}|^2 = (xi eta + J^2 chi + (-1)^j B b) / (2 xi eta)`,
/// `|c_{j,2}|^2 = |c_{j,3}|^2 = (xi eta - J^2 chi - (-1)^j B b) / (2 xi eta)`.
///
/// Negative values mean the parameters are outside the validity of these
/// expressions and are reported rather than clamped.
pub fn transition_coeffs(p: &ValidatedParams) -> Result<TransitionCoeffs> {
    let xe = p.xi() * p.eta();
    let j2chi = p.coupling * p.coupling * p.anisotropy;
    let bb = p.field * p.inhomogeneity;
    let mut c2 = [[0.0; 4]; 2];
    for (idx, row) in c2.iter_mut().enumerate() {
        let sign = if idx == 0 { -1.0 } else { 1.0 };
        let first = (xe + j2chi + sign * bb) / (2.0 * xe);
        let second = (xe - j2chi - sign * bb) / (2.0 * xe);
        *row = [first, second, second, first];
        for (mu, &v) in row.iter().enumerate() {
            if v < 0.0 {
                return Err(Error::NegativeCoefficient {
                    bath: idx + 1,
                    transition: mu + 1,
                    value: v,
                });
            }
        }
    }
    Ok(TransitionCoeffs { c2 })
}

/// The four rates that drive the population dynamics.
///
/// `X1+` raises the energy by `w1` (`Sigma+ -> Psi+`, `Psi- -> Sigma-`) and
/// `X1-` is the reverse; `Y2+-` are the same for `w2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RateSet {
    pub x1p: f64,
    pub x1m: f64,
    pub y2p: f64,
    pub y2m: f64,
    pub xi: f64,
    pub eta: f64,
}

impl RateSet {
    pub fn x1(&self) -> f64 {
        self.x1p + self.x1m
    }

    pub fn y2(&self) -> f64 {
        self.y2p + self.y2m
    }

    pub fn omega1(&self) -> f64 {
        self.xi - self.eta
    }

    pub fn omega2(&self) -> f64 {
        self.xi + self.eta
    }

    /// Slowest nonzero population relaxation rate, `min(X1, Y2)`.
    pub fn slowest_rate(&self) -> f64 {
        self.x1().min(self.y2())
    }
}

/// Rates `X1+- = 2 sum_j J_j(+-w1) |c_{j,1}|^2` and
/// `Y2+- = 2 sum_j J_j(+-w2) |c_{j,2}|^2`.
pub fn rates(p: &ValidatedParams, baths: &BathParams) -> Result<RateSet> {
    baths.validate()?;
    let coeffs = transition_coeffs(p)?;
    let w1 = p.xi() - p.eta();
    let w2 = p.xi() + p.eta();
    let (mut x1p, mut x1m, mut y2p, mut y2m) = (0.0, 0.0, 0.0, 0.0);
    for bath in 1..=2 {
        let a1 = coeffs.get(bath, 1);
        let a2 = coeffs.get(bath, 2);
        x1p += 2.0 * baths.spectral_density(bath, w1)? * a1;
        x1m += 2.0 * baths.spectral_density(bath, -w1)? * a1;
        y2p += 2.0 * baths.spectral_density(bath, w2)? * a2;
        y2m += 2.0 * baths.spectral_density(bath, -w2)? * a2;
    }
    Ok(RateSet {
        x1p,
        x1m,
        y2p,
        y2m,
        xi: p.xi(),
        eta: p.eta(),
    })
}

/// Population generator in the energy basis; column `j` holds the rates out
/// of level `j`.
pub fn lindblad_diag_matrix(r: &RateSet) -> RealMat4 {
    let (xp, xm, yp, ym) = (r.x1p, r.x1m, r.y2p, r.y2m);
    #[rustfmt::skip]
    let m = Matrix4::new(
        -(xm + ym), 0.0,        xp,         yp,
        0.0,        -(xp + yp), ym,         xm,
        xm,         yp,         -(xp + ym), 0.0,
        ym,         xp,         0.0,        -(xm + yp),
    );
    m
}

/// `L = S diag(eigenvalues) S^-1`.
#[derive(Debug, Clone, PartialEq)]
pub struct JordanDecomposition {
    pub s: RealMat4,
    pub s_inv: RealMat4,
    /// `(0, -X1, -Y2, -(X1 + Y2))`.
    pub eigenvalues: [f64; 4],
}

/// Relative separation under which `X1` and `Y2` are treated as coincident.
pub const RATE_DEGENERACY_TOL: f64 = 1e-9;

/// Closed-form eigenbasis of [`lindblad_diag_matrix`].
///
/// Fails with [`Error::RateDegeneracy`] when `X1 ~ Y2` or one of the divisors
/// `X1+`, `Y2-` vanishes.
pub fn jordan_decomposition(r: &RateSet) -> Result<JordanDecomposition> {
    let (x1, y2) = (r.x1(), r.y2());
    let scale = x1.max(y2);
    if !(x1 > 0.0 && y2 > 0.0) {
        return Err(Error::RateDegeneracy(format!(
            "vanishing rate (X1 = {x1:e}, Y2 = {y2:e})"
        )));
    }
    if !(r.x1p > 0.0 && r.y2m > 0.0) {
        return Err(Error::RateDegeneracy(format!(
            "vanishing divisor (X1+ = {:e}, Y2- = {:e})",
            r.x1p, r.y2m
        )));
    }
    if (x1 - y2).abs() <= RATE_DEGENERACY_TOL * scale {
        return Err(Error::RateDegeneracy(format!("X1 = {x1:e} and Y2 = {y2:e} coincide")));
    }
    let ry = r.y2p / r.y2m;
    let rx = r.x1m / r.x1p;
    #[rustfmt::skip]
    let s = Matrix4::new(
        ry,      ry,  -1.0, -1.0,
        rx,      -1.0, rx,  -1.0,
        rx * ry, -ry, -rx,   1.0,
        1.0,     1.0,  1.0,  1.0,
    );
    let s_inv = s
        .try_inverse()
        .ok_or_else(|| Error::RateDegeneracy("singular eigenvector matrix".into()))?;
    Ok(JordanDecomposition {
        s,
        s_inv,
        eigenvalues: [0.0, -x1, -y2, -(x1 + y2)],
    })
}

/// Coherence eigenvalues for `(rho12, rho21, rho34, rho43)` in the energy
/// basis: `(-2i xi, 2i xi, -2i eta, 2i eta) - (X1 + Y2)/2`.
pub fn nondiag_eigenvalues(r: &RateSet) -> [C64; 4] {
    let damp = -0.5 * (r.x1() + r.y2());
    [
        c(damp, -2.0 * r.xi),
        c(damp, 2.0 * r.xi),
        c(damp, -2.0 * r.eta),
        c(damp, 2.0 * r.eta),
    ]
}
