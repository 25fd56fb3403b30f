//! Single-qubit pure-dephasing channel.
//!
//! Matrices are written in the ordered basis `{|1⟩, |0⟩}`, so `σ_z = diag(1, -1)`
//! and the element `ρ[(1, 0)] = ⟨0|ρ|1⟩` is the coherence that evolves as
//! `ρ_01(t) = ρ_01(0) D(t)`. Its Hermitian partner `ρ[(0, 1)]` picks up `D*`.

use nalgebra::Matrix2;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::spectral::DecoherenceFunction;
use crate::MaxNorm;

pub type CMatrix2 = Matrix2<Complex64>;

/// Tolerance for Hermiticity, trace and positivity of a single-qubit state.
pub const STATE_TOLERANCE: f64 = 1e-12;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Validated 2×2 density matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SingleQubitState {
    rho: CMatrix2,
}

impl SingleQubitState {
    pub fn new(rho: CMatrix2) -> Result<Self> {
        let herm = (rho - rho.adjoint()).max_norm();
        if herm > STATE_TOLERANCE {
            return Err(Error::InvalidState(format!("not Hermitian (deviation {herm:e})")));
        }
        let trace = rho.trace();
        if (trace - ONE).norm() > STATE_TOLERANCE {
            return Err(Error::InvalidState(format!("trace {trace} differs from 1")));
        }
        let (a, d) = (rho[(0, 0)].re, rho[(1, 1)].re);
        let lowest = 0.5 * (a + d) - (0.25 * (a - d).powi(2) + rho[(1, 0)].norm_sqr()).sqrt();
        if lowest < -STATE_TOLERANCE {
            return Err(Error::InvalidState(format!("negative eigenvalue {lowest:e}")));
        }
        Ok(Self { rho })
    }

    pub(crate) fn new_unchecked(rho: CMatrix2) -> Self {
        Self { rho }
    }

    /// `(|0⟩ + |1⟩)/√2`.
    pub fn maximally_coherent() -> Self {
        Self { rho: CMatrix2::from_element(Complex64::new(0.5, 0.0)) }
    }

    /// Populations `p1 = ⟨1|ρ|1⟩` and `1 - p1`, no coherence.
    pub fn diagonal(p1: f64) -> Result<Self> {
        Self::new(CMatrix2::new(Complex64::new(p1, 0.0), ZERO, ZERO, Complex64::new(1.0 - p1, 0.0)))
    }

    /// State with Bloch vector `(x, y, z)`, `x² + y² + z² ≤ 1`.
    pub fn from_bloch(x: f64, y: f64, z: f64) -> Result<Self> {
        let half = 0.5;
        let rho = CMatrix2::new(
            Complex64::new(half * (1.0 + z), 0.0),
            Complex64::new(half * x, -half * y),
            Complex64::new(half * x, half * y),
            Complex64::new(half * (1.0 - z), 0.0),
        );
        Self::new(rho)
    }

    pub fn matrix(&self) -> &CMatrix2 {
        &self.rho
    }

    /// `ρ_01 = ⟨0|ρ|1⟩`.
    pub fn coherence(&self) -> Complex64 {
        self.rho[(1, 0)]
    }
}

/// Kraus pair `K1 = diag(1, D)`, `K2 = diag(0, √(1 - |D|²))`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SingleQubitKraus {
    pub k1: CMatrix2,
    pub k2: CMatrix2,
}

impl SingleQubitKraus {
    pub fn new(d: Complex64) -> Self {
        let rest = (1.0 - d.norm_sqr()).max(0.0).sqrt();
        Self { k1: CMatrix2::new(ONE, ZERO, ZERO, d), k2: CMatrix2::new(ZERO, ZERO, ZERO, Complex64::new(rest, 0.0)) }
    }

    pub fn operators(&self) -> [CMatrix2; 2] {
        [self.k1, self.k2]
    }

    pub fn apply(&self, rho: &CMatrix2) -> CMatrix2 {
        self.k1 * rho * self.k1.adjoint() + self.k2 * rho * self.k2.adjoint()
    }

    /// `Σ K†K`, the identity for `|D| ≤ 1`.
    pub fn completeness(&self) -> CMatrix2 {
        self.k1.adjoint() * self.k1 + self.k2.adjoint() * self.k2
    }
}

/// Applies the dephasing channel with coherence factor `d`.
pub fn dephase(state: &SingleQubitState, d: Complex64) -> SingleQubitState {
    let mut rho = state.rho;
    rho[(1, 0)] *= d;
    rho[(0, 1)] *= d.conj();
    SingleQubitState::new_unchecked(rho)
}

pub fn evolve(state0: &SingleQubitState, df: &DecoherenceFunction, t: f64) -> Result<SingleQubitState> {
    if !(t.is_finite() && t >= 0.0) {
        return Err(Error::InvalidTime(t));
    }
    Ok(dephase(state0, df.evaluate(t)))
}

/// `[σ_z, X]`.
pub fn commutator_z(x: &CMatrix2) -> CMatrix2 {
    let two = Complex64::new(2.0, 0.0);
    CMatrix2::new(ZERO, two * x[(0, 1)], -two * x[(1, 0)], ZERO)
}

/// Right-hand side of the time-local master equation,
/// `(i/2) φ [σ_z, ρ] - (1/4) γ [σ_z, [σ_z, ρ]]`.
///
/// With this sign the coherence obeys `dρ_01/dt = -(γ + iφ) ρ_01`, matching
/// `φ = -d arg D/dt` and `γ = -d ln|D|/dt`.
pub fn master_equation_rhs(state: &SingleQubitState, phi: f64, gamma: f64) -> CMatrix2 {
    master_equation_generator(&state.rho, phi, gamma)
}

/// [`master_equation_rhs`] on a bare matrix, for integrators.
pub fn master_equation_generator(rho: &CMatrix2, phi: f64, gamma: f64) -> CMatrix2 {
    let c = commutator_z(rho);
    let cc = commutator_z(&c);
    c * Complex64::new(0.0, 0.5 * phi) - cc * Complex64::new(0.25 * gamma, 0.0)
}

/// Sum of the increases of `w(|D|)` over `[0, horizon]`, checked against the
/// tail bound scaled by `tail_factor`.
pub(crate) fn accumulated_increase(
    df: &DecoherenceFunction,
    horizon: f64,
    tol: f64,
    tail_factor: f64,
    weight: impl Fn(f64) -> f64,
) -> Result<f64> {
    if !(horizon.is_finite() && horizon > 0.0) {
        return Err(Error::InvalidTime(horizon));
    }
    if !(tol.is_finite() && tol > 0.0) {
        return Err(Error::InvalidConfig(format!("tolerance {tol} must be positive")));
    }
    let bound = tail_factor * df.tail_variation_bound(horizon);
    if bound > tol {
        return Err(Error::HorizonInsufficient { horizon, bound, tol });
    }
    let mut knots = vec![0.0];
    knots.extend(df.coherence_extrema(horizon));
    knots.push(horizon);
    let values: Vec<f64> = knots.iter().map(|&t| weight(df.evaluate(t).norm())).collect();
    Ok(values.windows(2).map(|w| (w[1] - w[0]).max(0.0)).sum())
}

/// Trace-distance non-Markovianity `N_S` for the maximally coherent pair:
/// the total increase of `|D|` over its monotone-increasing intervals.
pub fn non_markovianity_single(df: &DecoherenceFunction, horizon: f64, tol: f64) -> Result<f64> {
    accumulated_increase(df, horizon, tol, 1.0, |d| d)
}

/// [`non_markovianity_single`] over the default horizon for `tol`.
pub fn non_markovianity_single_auto(df: &DecoherenceFunction, tol: f64) -> Result<f64> {
    non_markovianity_single(df, df.default_horizon(tol), tol)
}

/// `N / (N + 1)`.
pub fn scaled_non_markovianity(n: f64) -> Result<f64> {
    if n.is_nan() || n < 0.0 {
        return Err(Error::NegativeMeasure(n));
    }
    if n.is_infinite() {
        return Ok(1.0);
    }
    Ok(n / (n + 1.0))
}
