use thiserror::Error;

use crate::model::Basis;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("anisotropy chi = {0} outside [-1, 1]")]
    InvalidAnisotropy(f64),

    #[error("parameter `{name}` must be {expected}, got {value}")]
    InvalidParameter {
        name: &'static str,
        expected: &'static str,
        value: f64,
    },

    #[error("degenerate spectrum: |xi - eta| = {gap:.3e} <= tolerance {tol:.3e} (xi = {xi}, eta = {eta})")]
    DegenerateSpectrum { xi: f64, eta: f64, gap: f64, tol: f64 },

    #[error("zero {branch} splitting ({value:.3e} <= tolerance {tol:.3e})")]
    ZeroSplitting { branch: &'static str, value: f64, tol: f64 },

    #[error("no critical DM strength: radicand {radicand} is negative")]
    NoCriticalPoint { radicand: f64 },

    #[error("expected a density matrix in the {expected:?} basis, got {found:?}")]
    BasisMismatch { expected: Basis, found: Basis },

    #[error("not a density matrix: {0}")]
    NotDensityMatrix(String),

    #[error("initial state is not X-shaped: element ({row}, {col}) has magnitude {magnitude:.3e}")]
    NotXShaped { row: usize, col: usize, magnitude: f64 },

    #[error("frequency must be positive, got {0}")]
    NonPositiveFrequency(f64),

    #[error("spectral density evaluated at zero frequency")]
    ZeroFrequency,

    #[error("transition coefficient |c_{{{bath},{transition}}}|^2 = {value} is negative")]
    NegativeCoefficient { bath: usize, transition: usize, value: f64 },

    #[error("rate degeneracy: {0}")]
    RateDegeneracy(String),

    #[error("asymptotic state needs X1 > 0 and Y2 > 0 (X1 = {x1}, Y2 = {y2})")]
    ZeroRates { x1: f64, y2: f64 },

    #[error("oracle integration did not converge after {halvings} step halvings (last difference {difference:.3e})")]
    NonConvergence { halvings: u32, difference: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
