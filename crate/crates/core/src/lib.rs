//! Exact pure-dephasing dynamics of qubits driven by nonequilibrium random
//! telegraph noise with an exponential memory kernel.
//!
//! The environment is described by [`NoiseParams`]; [`DecoherenceFunction`]
//! gives the exact coherence factor `D(t)`, from which the single- and
//! two-qubit channels, non-Markovianity measures, concurrence and Bell
//! function follow. The [`oracle`] module integrates the underlying
//! differential equations independently for validation.

pub mod error;
pub mod noise;
pub mod oracle;
pub mod poly;
pub mod quadrature;
pub mod single_qubit;
pub mod spectral;
pub mod two_qubit;

pub use error::{Error, Result};
pub use noise::{Memory, MomentKernel, NoiseParams};
pub use oracle::{OdeConfig, Trajectory};
pub use single_qubit::{SingleQubitKraus, SingleQubitState};
pub use spectral::{build, markovian_limit, DecoherenceFunction, Rates};
pub use two_qubit::{
    CompositeBellParams, ExtendedWernerParams, MeasureSeries, Thresholds, TwoQubitState, WernerFamily,
};

/// Largest entry modulus of a complex matrix.
pub trait MaxNorm {
    fn max_norm(&self) -> f64;
}

impl<R: nalgebra::Dim, C: nalgebra::Dim, S: nalgebra::RawStorage<num_complex::Complex64, R, C>> MaxNorm
    for nalgebra::Matrix<num_complex::Complex64, R, C, S>
{
    fn max_norm(&self) -> f64 {
        self.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }
}
