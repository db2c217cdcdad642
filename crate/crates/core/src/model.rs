//! System Hamiltonian, its analytic spectrum and the standard/energy basis
//! bookkeeping.
//!
//! Standard basis ordering is `{|00>, |01>, |10>, |11>}` with qubit A (site 1)
//! as the left factor and `|0>` the `sigma^z = +1` state. Energy basis ordering
//! is `(Psi+, Psi-, Sigma+, Sigma-)` with energies `(+xi, -xi, +eta, -eta)`.

use nalgebra::{Matrix2, SymmetricEigen};

use crate::error::{Error, Result};
use crate::{c, Mat4, C64};

/// Tolerances used when a [`DensityMatrix`] is checked.
pub const HERMITICITY_TOL: f64 = 1e-12;
pub const TRACE_TOL: f64 = 1e-10;
pub const PSD_TOL: f64 = 1e-9;

/// Relative gap `|xi - eta| / max(xi, eta)` below which the spectrum is
/// treated as degenerate unless the caller passes its own tolerance.
pub const DEFAULT_DEGENERACY_REL_TOL: f64 = 1e-6;

/// Parameters of the two-qubit Hamiltonian in dimensionless units.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SystemParams {
    /// Mean XY coupling `J = (Jx + Jy) / 2`.
    pub coupling: f64,
    /// Partial anisotropy `chi = (Jx - Jy) / (Jx + Jy)`, in `[-1, 1]`.
    pub anisotropy: f64,
    /// Mean magnetic field `B`.
    pub field: f64,
    /// Field inhomogeneity `b`; site 1 sees `B + b`, site 2 sees `B - b`.
    pub inhomogeneity: f64,
    /// DM strength `D`, the DM vector being `J D z`.
    pub dm: f64,
}

impl SystemParams {
    pub fn new(coupling: f64, anisotropy: f64, field: f64, inhomogeneity: f64, dm: f64) -> Self {
        Self {
            coupling,
            anisotropy,
            field,
            inhomogeneity,
            dm,
        }
    }

    /// `xi = sqrt(b^2 + J^2 (1 + D^2))`, the half-splitting of the `Psi` pair.
    pub fn xi(&self) -> f64 {
        let j = self.coupling;
        (self.inhomogeneity.powi(2) + j * j * (1.0 + self.dm * self.dm)).sqrt()
    }

    /// `eta = sqrt(B^2 + (J chi)^2)`, the half-splitting of the `Sigma` pair.
    pub fn eta(&self) -> f64 {
        (self.field.powi(2) + (self.coupling * self.anisotropy).powi(2)).sqrt()
    }

    pub fn with_dm(self, dm: f64) -> Self {
        Self { dm, ..self }
    }

    pub fn with_inhomogeneity(self, inhomogeneity: f64) -> Self {
        Self { inhomogeneity, ..self }
    }

    /// Checks the validity domain of the closed-form solution.
    ///
    /// `tol` defaults to `1e-6 * max(xi, eta)`.
    pub fn validate(&self, tol: Option<f64>) -> Result<ValidatedParams> {
        let fields = [
            ("J", self.coupling),
            ("chi", self.anisotropy),
            ("B", self.field),
            ("b", self.inhomogeneity),
            ("D", self.dm),
        ];
        for (name, value) in fields {
            if !value.is_finite() {
                return Err(Error::InvalidParameter {
                    name,
                    expected: "finite",
                    value,
                });
            }
        }
        if self.anisotropy.abs() > 1.0 {
            return Err(Error::InvalidAnisotropy(self.anisotropy));
        }
        let xi = self.xi();
        let eta = self.eta();
        let tol = tol.unwrap_or(DEFAULT_DEGENERACY_REL_TOL * xi.max(eta));
        if xi <= tol {
            return Err(Error::ZeroSplitting {
                branch: "Psi",
                value: xi,
                tol,
            });
        }
        if eta <= tol {
            return Err(Error::ZeroSplitting {
                branch: "Sigma",
                value: eta,
                tol,
            });
        }
        let gap = (xi - eta).abs();
        if gap <= tol {
            return Err(Error::DegenerateSpectrum { xi, eta, gap, tol });
        }
        Ok(ValidatedParams { params: *self, xi, eta })
    }
}

/// [`SystemParams`] that passed [`SystemParams::validate`], with `xi` and
/// `eta` cached.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ValidatedParams {
    params: SystemParams,
    xi: f64,
    eta: f64,
}

impl ValidatedParams {
    pub fn params(&self) -> &SystemParams {
        &self.params
    }

    pub fn xi(&self) -> f64 {
        self.xi
    }

    pub fn eta(&self) -> f64 {
        self.eta
    }
}

impl std::ops::Deref for ValidatedParams {
    type Target = SystemParams;

    fn deref(&self) -> &SystemParams {
        &self.params
    }
}

/// The system Hamiltonian in the standard basis.
///
/// `H = J chi (s1+ s2+ + s1- s2-) + J(1 + iD) s1+ s2- + J(1 - iD) s1- s2+
///      + (B + b)/2 s1z + (B - b)/2 s2z`
pub fn build_hamiltonian(p: &SystemParams) -> Mat4 {
    let j = p.coupling;
    let big_b = p.field;
    let small_b = p.inhomogeneity;
    let mut h = Mat4::zeros();
    h[(0, 0)] = c(big_b, 0.0);
    h[(1, 1)] = c(small_b, 0.0);
    h[(2, 2)] = c(-small_b, 0.0);
    h[(3, 3)] = c(-big_b, 0.0);
    h[(0, 3)] = c(j * p.anisotropy, 0.0);
    h[(3, 0)] = c(j * p.anisotropy, 0.0);
    h[(1, 2)] = c(j, j * p.dm);
    h[(2, 1)] = c(j, -j * p.dm);
    h
}

/// Energy levels and eigenvectors, columns ordered `(Psi+, Psi-, Sigma+, Sigma-)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    pub xi: f64,
    pub eta: f64,
    pub energies: [f64; 4],
    /// Column `k` is `|e_k>` in the standard basis.
    pub eigenvectors: Mat4,
}

impl Spectrum {
    pub fn unitary(&self) -> &Mat4 {
        &self.eigenvectors
    }
}

/// Diagonalizes one 2x2 block and returns `(upper, lower)` eigenpairs.
fn block_eigen(m: Matrix2<C64>) -> [(f64, [C64; 2]); 2] {
    let eig = SymmetricEigen::new(m);
    let (hi, lo) = if eig.eigenvalues[0] >= eig.eigenvalues[1] {
        (0, 1)
    } else {
        (1, 0)
    };
    let pick = |k: usize| {
        let v = eig.eigenvectors.column(k);
        (eig.eigenvalues[k], [v[0], v[1]])
    };
    [pick(hi), pick(lo)]
}

/// Rotates `v` so that `v[anchor]` is real and nonnegative. Falls back to the
/// other component when the anchor vanishes.
fn fix_phase(mut v: [C64; 2], anchor: usize) -> [C64; 2] {
    let a = if v[anchor].norm() > 1e-14 { anchor } else { 1 - anchor };
    let phase = v[a] / v[a].norm();
    let rot = phase.conj();
    v[0] *= rot;
    v[1] *= rot;
    v[a] = c(v[a].re, 0.0);
    let n = (v[0].norm_sqr() + v[1].norm_sqr()).sqrt();
    [v[0] / n, v[1] / n]
}

/// Numerically diagonalizes `H` block by block (the `{|01>,|10>}` and
/// `{|00>,|11>}` sectors) and fixes the eigenvector phases so that the `|10>`
/// component of `Psi+-` and the `|11>` component of `Sigma+-` are real and
/// nonnegative.
pub fn spectrum(p: &ValidatedParams) -> Spectrum {
    let h = build_hamiltonian(p.params());
    let psi_block = Matrix2::new(h[(1, 1)], h[(1, 2)], h[(2, 1)], h[(2, 2)]);
    let sigma_block = Matrix2::new(h[(0, 0)], h[(0, 3)], h[(3, 0)], h[(3, 3)]);
    let psi = block_eigen(psi_block);
    let sigma = block_eigen(sigma_block);

    let mut u = Mat4::zeros();
    let mut energies = [0.0; 4];
    for (k, (e, v)) in psi.into_iter().enumerate() {
        let v = fix_phase(v, 1);
        u[(1, k)] = v[0];
        u[(2, k)] = v[1];
        energies[k] = e;
    }
    for (k, (e, v)) in sigma.into_iter().enumerate() {
        let v = fix_phase(v, 1);
        u[(0, k + 2)] = v[0];
        u[(3, k + 2)] = v[1];
        energies[k + 2] = e;
    }
    Spectrum {
        xi: p.xi(),
        eta: p.eta(),
        energies,
        eigenvectors: u,
    }
}

/// DM strength at which `xi = eta` for the given remaining parameters.
pub fn critical_d(coupling: f64, anisotropy: f64, field: f64, inhomogeneity: f64) -> Result<f64> {
    let j2 = coupling * coupling;
    let numer = field * field + j2 * anisotropy * anisotropy - inhomogeneity * inhomogeneity;
    if j2 == 0.0 {
        return Err(Error::NoCriticalPoint { radicand: f64::NAN });
    }
    let radicand = numer / j2 - 1.0;
    if radicand < 0.0 {
        return Err(Error::NoCriticalPoint { radicand });
    }
    Ok(radicand.sqrt())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Basis {
    Standard,
    Energy,
}

/// Numerical health of a candidate density matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StateDiagnostics {
    pub hermiticity_error: f64,
    pub trace_error: f64,
    pub min_eigenvalue: f64,
}

impl StateDiagnostics {
    pub fn of(m: &Mat4) -> Self {
        let herm = (m - m.adjoint()).iter().fold(0.0f64, |a, z| a.max(z.norm()));
        let trace = m.trace();
        let trace_error = (trace - c(1.0, 0.0)).norm();
        let sym = (m + m.adjoint()) * c(0.5, 0.0);
        let min_eigenvalue = SymmetricEigen::new(sym)
            .eigenvalues
            .iter()
            .copied()
            .fold(f64::INFINITY, f64::min);
        Self {
            hermiticity_error: herm,
            trace_error,
            min_eigenvalue,
        }
    }

    pub fn is_valid(&self) -> bool {
        self.hermiticity_error <= HERMITICITY_TOL && self.trace_error <= TRACE_TOL && self.min_eigenvalue >= -PSD_TOL
    }

    /// Short description of the first violated invariant, if any.
    pub fn violation(&self) -> Option<String> {
        if self.hermiticity_error > HERMITICITY_TOL {
            Some(format!("hermiticity error {:.3e}", self.hermiticity_error))
        } else if self.trace_error > TRACE_TOL {
            Some(format!("trace error {:.3e}", self.trace_error))
        } else if self.min_eigenvalue < -PSD_TOL {
            Some(format!("negative eigenvalue {:.3e}", self.min_eigenvalue))
        } else {
            None
        }
    }
}

/// A two-qubit density matrix tagged with the basis it is written in.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    elements: Mat4,
    basis: Basis,
}

impl DensityMatrix {
    /// Validates Hermiticity, unit trace and positivity.
    pub fn new(elements: Mat4, basis: Basis) -> Result<Self> {
        let diag = StateDiagnostics::of(&elements);
        if let Some(v) = diag.violation() {
            return Err(Error::NotDensityMatrix(v));
        }
        Ok(Self { elements, basis })
    }

    /// Wraps a matrix without checking it. Evolved states go through this so
    /// that invariant violations can be monitored instead of aborting.
    pub fn new_unchecked(elements: Mat4, basis: Basis) -> Self {
        Self { elements, basis }
    }

    /// `|psi><psi|` for a (not necessarily normalized) state vector.
    pub fn pure(psi: [C64; 4], basis: Basis) -> Self {
        let n: f64 = psi.iter().map(|z| z.norm_sqr()).sum();
        let mut m = Mat4::zeros();
        for i in 0..4 {
            for j in 0..4 {
                m[(i, j)] = psi[i] * psi[j].conj() / n;
            }
        }
        Self { elements: m, basis }
    }

    pub fn maximally_mixed(basis: Basis) -> Self {
        Self {
            elements: Mat4::identity() * c(0.25, 0.0),
            basis,
        }
    }

    /// `(|01> + |10>)/sqrt(2)` in the standard basis.
    pub fn bell_psi_plus() -> Self {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        Self::pure([c(0.0, 0.0), c(s, 0.0), c(s, 0.0), c(0.0, 0.0)], Basis::Standard)
    }

    /// `p |psi+><psi+| + (1 - p) I/4`; separable for `p <= 1/3`, with nonzero
    /// discord for any `p > 0`.
    pub fn werner_psi_plus(p: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::InvalidParameter {
                name: "p",
                expected: "in [0, 1]",
                value: p,
            });
        }
        let bell = Self::bell_psi_plus().elements;
        Ok(Self {
            elements: bell * c(p, 0.0) + Mat4::identity() * c(0.25 * (1.0 - p), 0.0),
            basis: Basis::Standard,
        })
    }

    pub fn elements(&self) -> &Mat4 {
        &self.elements
    }

    pub fn into_elements(self) -> Mat4 {
        self.elements
    }

    pub fn basis(&self) -> Basis {
        self.basis
    }

    pub fn diagnostics(&self) -> StateDiagnostics {
        StateDiagnostics::of(&self.elements)
    }

    pub fn purity(&self) -> f64 {
        (self.elements * self.elements).trace().re
    }

    /// Largest magnitude among the elements outside the X pattern
    /// (diagonal plus anti-diagonal) of the standard basis.
    pub fn max_non_x_element(&self) -> (usize, usize, f64) {
        let mut worst = (0, 1, 0.0);
        for i in 0..4 {
            for j in 0..4 {
                if i != j && i + j != 3 {
                    let m = self.elements[(i, j)].norm();
                    if m > worst.2 {
                        worst = (i, j, m);
                    }
                }
            }
        }
        worst
    }

    pub fn check_x_shaped(&self, tol: f64) -> Result<()> {
        self.expect_basis(Basis::Standard)?;
        let (row, col, magnitude) = self.max_non_x_element();
        if magnitude > tol {
            return Err(Error::NotXShaped { row, col, magnitude });
        }
        Ok(())
    }

    pub fn expect_basis(&self, expected: Basis) -> Result<()> {
        if self.basis != expected {
            return Err(Error::BasisMismatch {
                expected,
                found: self.basis,
            });
        }
        Ok(())
    }
}

/// `rho' = U^dagger rho U`.
pub fn to_energy_basis(rho: &DensityMatrix, s: &Spectrum) -> Result<DensityMatrix> {
    rho.expect_basis(Basis::Standard)?;
    let u = s.unitary();
    Ok(DensityMatrix::new_unchecked(
        u.adjoint() * rho.elements() * u,
        Basis::Energy,
    ))
}

/// `rho = U rho' U^dagger`.
pub fn from_energy_basis(rho: &DensityMatrix, s: &Spectrum) -> Result<DensityMatrix> {
    rho.expect_basis(Basis::Energy)?;
    let u = s.unitary();
    Ok(DensityMatrix::new_unchecked(
        u * rho.elements() * u.adjoint(),
        Basis::Standard,
    ))
}
