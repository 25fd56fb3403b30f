//! Independent numerical references: fixed-step RK4 integration of the
//! closed third-order equation for the qubit density matrix, of the moment
//! equation, and of the time-local master equation, plus finite-difference
//! rates.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::noise::{Memory, NoiseParams};
use crate::single_qubit::{commutator_z, master_equation_generator, CMatrix2, SingleQubitState};
use crate::spectral::{DecoherenceFunction, Rates};

/// Fixed-step RK4 settings.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OdeConfig {
    step: f64,
    horizon: f64,
}

impl OdeConfig {
    pub fn new(step: f64, horizon: f64) -> Result<Self> {
        if !(step.is_finite() && step > 0.0) {
            return Err(Error::InvalidConfig(format!("step {step} must be positive")));
        }
        if !(horizon.is_finite() && horizon > 0.0) {
            return Err(Error::InvalidConfig(format!("horizon {horizon} must be positive")));
        }
        if step > horizon / 100.0 {
            return Err(Error::InvalidConfig(format!("step {step} exceeds horizon/100")));
        }
        Ok(Self { step, horizon })
    }

    pub fn step(&self) -> f64 {
        self.step
    }

    pub fn horizon(&self) -> f64 {
        self.horizon
    }

    /// Number of steps; the step is shrunk slightly so the grid ends on the horizon.
    pub fn steps(&self) -> usize {
        (self.horizon / self.step - 1e-9).ceil() as usize
    }

    pub fn effective_step(&self) -> f64 {
        self.horizon / self.steps() as f64
    }
}

/// Sampled solution on the RK4 grid.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory<T> {
    pub times: Vec<f64>,
    pub values: Vec<T>,
}

impl Trajectory<CMatrix2> {
    /// The `ρ_01` element along the trajectory.
    pub fn coherence(&self) -> Vec<Complex64> {
        self.values.iter().map(|m| m[(1, 0)]).collect()
    }
}

trait Linear: Copy {
    fn axpy(self, a: f64, x: Self) -> Self;
}

impl Linear for f64 {
    fn axpy(self, a: f64, x: Self) -> Self {
        self + a * x
    }
}

impl Linear for [CMatrix2; 3] {
    fn axpy(self, a: f64, x: Self) -> Self {
        let a = Complex64::new(a, 0.0);
        [self[0] + x[0] * a, self[1] + x[1] * a, self[2] + x[2] * a]
    }
}

impl Linear for [f64; 2] {
    fn axpy(self, a: f64, x: Self) -> Self {
        [self[0] + a * x[0], self[1] + a * x[1]]
    }
}

impl Linear for CMatrix2 {
    fn axpy(self, a: f64, x: Self) -> Self {
        self + x * Complex64::new(a, 0.0)
    }
}

fn rk4<S: Linear>(y0: S, cfg: &OdeConfig, mut f: impl FnMut(f64, &S) -> Result<S>) -> Result<Trajectory<S>> {
    let n = cfg.steps();
    let h = cfg.effective_step();
    let mut times = Vec::with_capacity(n + 1);
    let mut values = Vec::with_capacity(n + 1);
    let mut y = y0;
    times.push(0.0);
    values.push(y);
    for k in 0..n {
        let t = k as f64 * h;
        let k1 = f(t, &y)?;
        let k2 = f(t + 0.5 * h, &y.axpy(0.5 * h, k1))?;
        let k3 = f(t + 0.5 * h, &y.axpy(0.5 * h, k2))?;
        let k4 = f(t + h, &y.axpy(h, k3))?;
        y = y.axpy(h / 6.0, k1).axpy(h / 3.0, k2).axpy(h / 3.0, k3).axpy(h / 6.0, k4);
        times.push((k + 1) as f64 * h);
        values.push(y);
    }
    Ok(Trajectory { times, values })
}

/// `X` with its diagonal removed; `[σ_z, [σ_z, X]] = 4 off(X)`.
fn off_diagonal(x: &CMatrix2) -> CMatrix2 {
    let mut m = *x;
    m[(0, 0)] = Complex64::new(0.0, 0.0);
    m[(1, 1)] = Complex64::new(0.0, 0.0);
    m
}

/// Integrates `ρ''' = -κ(ρ'' + 2ηρ') - (χ²/4)[σ_z,[σ_z, ρ' + κρ]]` from
/// `ρ'(0) = -(i/2) a0 χ [σ_z, ρ(0)]` and `ρ''(0) = -(χ²/4)[σ_z,[σ_z,ρ(0)]]`.
pub fn integrate_third_order(
    params: &NoiseParams,
    state0: &SingleQubitState,
    cfg: &OdeConfig,
) -> Result<Trajectory<CMatrix2>> {
    let Memory::Finite(kappa) = params.memory() else {
        return Err(Error::Contract("finite memory decay rate"));
    };
    let (eta, chi, a0) = (params.eta(), params.chi(), params.a0());
    let chi2 = Complex64::new(chi * chi, 0.0);
    let rho = *state0.matrix();
    let d1 = commutator_z(&rho) * Complex64::new(0.0, -0.5 * a0 * chi);
    let d2 = -off_diagonal(&rho) * chi2;
    let kap = Complex64::new(kappa, 0.0);
    let two_eta = Complex64::new(2.0 * eta, 0.0);
    let traj = rk4([rho, d1, d2], cfg, |_, y| {
        let third = -(y[2] + y[1] * two_eta) * kap - off_diagonal(&(y[1] + y[0] * kap)) * chi2;
        Ok([y[1], y[2], third])
    })?;
    Ok(Trajectory { times: traj.times, values: traj.values.into_iter().map(|y| y[0]).collect() })
}

/// Integrates `M'' = -κ M' - 2ηκ M` (memoryless: `M' = -2ηM`) from `M(0) = m0`, `M'(0) = 0`.
fn integrate_relaxation(params: &NoiseParams, m0: f64, cfg: &OdeConfig) -> Result<Trajectory<f64>> {
    let eta = params.eta();
    match params.memory() {
        Memory::Finite(kappa) => {
            let traj = rk4([m0, 0.0], cfg, |_, y| Ok([y[1], -kappa * y[1] - 2.0 * eta * kappa * y[0]]))?;
            Ok(Trajectory { times: traj.times, values: traj.values.into_iter().map(|y| y[0]).collect() })
        }
        Memory::Memoryless => rk4(m0, cfg, |_, y| Ok(-2.0 * eta * y)),
    }
}

/// Second moment `M_2(τ)` from its closed differential equation, `M_2(0) = χ²`.
///
/// The transform `(s+κ)/(s²+κs+2ηκ) = 1/s - 2ηκ/s³ + …` has no `1/s²` term, so `M_2'(0) = 0`.
pub fn integrate_moment(params: &NoiseParams, cfg: &OdeConfig) -> Result<Trajectory<f64>> {
    integrate_relaxation(params, params.chi() * params.chi(), cfg)
}

/// Mean `M_1(t)` from the same equation with `M_1(0) = a0 χ`.
pub fn integrate_mean(params: &NoiseParams, cfg: &OdeConfig) -> Result<Trajectory<f64>> {
    integrate_relaxation(params, params.a0() * params.chi(), cfg)
}

/// Integrates the time-local master equation with rates taken from `df`.
///
/// Fails if the path crosses a zero of `D`, where the rates diverge.
pub fn integrate_master_equation(
    df: &DecoherenceFunction,
    state0: &SingleQubitState,
    cfg: &OdeConfig,
) -> Result<Trajectory<CMatrix2>> {
    rk4(*state0.matrix(), cfg, |t, rho| {
        let Rates { phi, gamma } = df.rates(t)?;
        Ok(master_equation_generator(rho, phi, gamma))
    })
}

/// `φ` and `γ` from fourth-order finite differences of `-ln D = -ln|D| - i arg D`.
///
/// Central five-point stencil with step `h`; a forward stencil is used for
/// `t < 2h`. Differences of `ln D` are taken as logarithms of ratios, so the
/// phase needs no unwrapping.
pub fn finite_difference_rates(df: &DecoherenceFunction, t: f64, h: f64) -> Result<Rates> {
    if !(t.is_finite() && t >= 0.0) {
        return Err(Error::InvalidTime(t));
    }
    if !(h.is_finite() && h > 0.0) {
        return Err(Error::InvalidConfig(format!("step {h} must be positive")));
    }
    let (offsets, weights): ([f64; 5], [f64; 5]) = if t >= 2.0 * h {
        ([-2.0, -1.0, 0.0, 1.0, 2.0], [1.0, -8.0, 0.0, 8.0, -1.0])
    } else {
        ([0.0, 1.0, 2.0, 3.0, 4.0], [-25.0, 48.0, -36.0, 16.0, -3.0])
    };
    let center = df.evaluate(t);
    let mut derivative = Complex64::new(0.0, 0.0);
    for (o, w) in offsets.iter().zip(weights) {
        let value = df.evaluate(t + o * h);
        let magnitude = value.norm();
        if magnitude < 1e-10 || center.norm() < 1e-10 {
            return Err(Error::CoherenceZero { t: t + o * h, magnitude: magnitude.min(center.norm()) });
        }
        if w != 0.0 {
            derivative += w * (value / center).ln();
        }
    }
    derivative /= 12.0 * h;
    Ok(Rates { phi: -derivative.im, gamma: -derivative.re })
}
