//! Exact post-Markovian evolution of an open two-qubit XY-Heisenberg system
//! with Dzyaloshinskii-Moriya coupling and an inhomogeneous field, each qubit
//! attached to its own thermal bath through an exponential memory kernel.
//!
//! The crate is organised bottom-up:
//!
//! * [`model`]: parameters, Hamiltonian, spectrum, density matrices.
//! * [`dissipator`]: bath spectral densities and the dissipative rate set.
//! * [`propagator`]: closed-form population and coherence propagation.
//! * [`correlations`]: concurrence, mutual information and quantum discord.
//! * [`oracle`]: independent numerical ground truth for all of the above.

pub mod correlations;
pub mod dissipator;
pub mod error;
pub mod model;
pub mod oracle;
pub mod propagator;

pub use nalgebra::Complex;

pub type C64 = Complex<f64>;
pub type Mat4 = nalgebra::Matrix4<C64>;
pub type RealMat4 = nalgebra::Matrix4<f64>;

pub use correlations::{CorrelationReport, MeasurementSetting, OptimizerConfig, Side};
pub use dissipator::{BathParams, RateSet, TransitionCoeffs};
pub use error::{Error, Result};
pub use model::{Basis, DensityMatrix, Spectrum, SystemParams, ValidatedParams};
pub use propagator::PropagatorSnapshot;

#[inline]
pub(crate) fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}
