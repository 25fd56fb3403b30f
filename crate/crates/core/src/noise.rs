//! Nonequilibrium random telegraph noise with an exponential memory kernel.
//!
//! The noise `ε(t)` switches between `±χ` at average rate `η`. Its conditional
//! probabilities obey a generalized master equation with kernel
//! `K(τ) = κ e^{-κτ}`, and the initial distribution is biased by the
//! nonstationary parameter `a0`. Every moment reduces to the relaxation
//! function `Ω(τ)`, the inverse Laplace transform of
//! `(s + κ) / (s² + κ s + 2ηκ)`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::quadrature::GaussLegendre;

/// Memory of the noise kernel.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Memory {
    /// Exponential kernel with the given decay rate `κ > 0`.
    Finite(f64),
    /// The `κ → ∞` limit, where the kernel collapses to a delta function.
    Memoryless,
}

/// Parameters of the nonequilibrium environment.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoiseParams {
    eta: f64,
    chi: f64,
    memory: Memory,
    a0: f64,
}

impl NoiseParams {
    /// Environment with a finite memory decay rate `kappa`.
    pub fn new(eta: f64, chi: f64, kappa: f64, a0: f64) -> Result<Self> {
        if !(kappa.is_finite() && kappa > 0.0) {
            return Err(Error::InvalidParams(format!("memory decay rate must be finite and positive, got {kappa}")));
        }
        Self::validated(eta, chi, Memory::Finite(kappa), a0)
    }

    /// Environment in the memoryless (Markovian) limit `κ → ∞`.
    pub fn memoryless(eta: f64, chi: f64, a0: f64) -> Result<Self> {
        Self::validated(eta, chi, Memory::Memoryless, a0)
    }

    fn validated(eta: f64, chi: f64, memory: Memory, a0: f64) -> Result<Self> {
        if !(eta.is_finite() && eta > 0.0) {
            return Err(Error::InvalidParams(format!("transition rate must be positive, got {eta}")));
        }
        if !(chi.is_finite() && chi >= 0.0) {
            return Err(Error::InvalidParams(format!("coupling must be non-negative, got {chi}")));
        }
        if !(a0.is_finite() && (-1.0..=1.0).contains(&a0)) {
            return Err(Error::InvalidParams(format!("nonstationary parameter must lie in [-1, 1], got {a0}")));
        }
        Ok(Self { eta, chi, memory, a0 })
    }

    pub fn eta(&self) -> f64 {
        self.eta
    }

    pub fn chi(&self) -> f64 {
        self.chi
    }

    pub fn a0(&self) -> f64 {
        self.a0
    }

    pub fn memory(&self) -> Memory {
        self.memory
    }

    /// Finite memory decay rate, or `None` in the memoryless limit.
    pub fn kappa(&self) -> Option<f64> {
        match self.memory {
            Memory::Finite(k) => Some(k),
            Memory::Memoryless => None,
        }
    }

    pub fn is_memoryless(&self) -> bool {
        self.memory == Memory::Memoryless
    }

    pub fn is_stationary(&self) -> bool {
        self.a0 == 0.0
    }

    /// Same environment with a different nonstationary parameter.
    pub fn with_a0(&self, a0: f64) -> Result<Self> {
        Self::validated(self.eta, self.chi, self.memory, a0)
    }
}

#[derive(Debug, Clone, Copy)]
enum Relaxation {
    Memoryless { rate: f64 },
    Distinct { roots: [Complex64; 2], residues: [Complex64; 2] },
    Confluent { root: f64, slope: f64 },
}

/// Closed form of the relaxation function `Ω(τ)` from the roots of
/// `s² + κ s + 2ηκ`.
#[derive(Debug, Clone, Copy)]
pub struct MomentKernel {
    params: NoiseParams,
    relaxation: Relaxation,
}

impl MomentKernel {
    pub fn new(params: &NoiseParams) -> Self {
        let eta = params.eta;
        let relaxation = match params.memory {
            Memory::Memoryless => Relaxation::Memoryless { rate: 2.0 * eta },
            Memory::Finite(kappa) => {
                let disc = kappa * kappa - 8.0 * eta * kappa;
                if disc.abs() < 1e-12 * kappa * kappa {
                    // Double root at -κ/2: Ω = e^{pτ} (1 + (p + κ) τ).
                    let root = -0.5 * kappa;
                    Relaxation::Confluent { root, slope: root + kappa }
                } else {
                    let sq = Complex64::new(disc, 0.0).sqrt();
                    let p1 = 0.5 * (-kappa + sq);
                    let p2 = 0.5 * (-kappa - sq);
                    let r1 = (p1 + kappa) / (p1 - p2);
                    let r2 = (p2 + kappa) / (p2 - p1);
                    Relaxation::Distinct { roots: [p1, p2], residues: [r1, r2] }
                }
            }
        };
        Self { params: *params, relaxation }
    }

    pub fn params(&self) -> &NoiseParams {
        &self.params
    }

    /// Complex frequencies of `Ω`; a single entry in the memoryless and
    /// critically damped cases.
    pub fn frequencies(&self) -> Vec<Complex64> {
        match self.relaxation {
            Relaxation::Memoryless { rate } => vec![Complex64::new(-rate, 0.0)],
            Relaxation::Distinct { roots, .. } => roots.to_vec(),
            Relaxation::Confluent { root, .. } => vec![Complex64::new(root, 0.0)],
        }
    }

    /// `Ω(τ)` for `τ >= 0`; `Ω(0) = 1`.
    pub fn omega(&self, tau: f64) -> f64 {
        match self.relaxation {
            Relaxation::Memoryless { rate } => (-rate * tau).exp(),
            Relaxation::Distinct { roots, residues } => {
                let v = residues[0] * (roots[0] * tau).exp() + residues[1] * (roots[1] * tau).exp();
                v.re
            }
            Relaxation::Confluent { root, slope } => (root * tau).exp() * (1.0 + slope * tau),
        }
    }

    /// `M1(t) = a0 χ Ω(t)`.
    pub fn mean(&self, t: f64) -> f64 {
        self.params.a0 * self.params.chi * self.omega(t)
    }

    /// `M2(t, t') = χ² Ω(|t - t'|)`.
    pub fn second_moment(&self, t: f64, t_prime: f64) -> f64 {
        self.params.chi * self.params.chi * self.omega((t - t_prime).abs())
    }

    /// Moment `<ε(t_1) ... ε(t_n)>` for non-increasing times, peeling off the
    /// leading pair until one or zero times remain.
    pub fn ordered_moment(&self, times: &[f64]) -> Result<f64> {
        check_times(times)?;
        if times.windows(2).any(|w| w[1] > w[0]) {
            return Err(Error::UnorderedTimes);
        }
        Ok(self.ordered_moment_unchecked(times))
    }

    fn ordered_moment_unchecked(&self, times: &[f64]) -> f64 {
        let mut value = 1.0;
        let mut rest = times;
        while rest.len() >= 2 {
            value *= self.second_moment(rest[0], rest[1]);
            rest = &rest[2..];
        }
        if let [last] = rest {
            value *= self.mean(*last);
        }
        value
    }
}

fn check_time(t: f64) -> Result<()> {
    if t.is_finite() && t >= 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidTime(t))
    }
}

fn check_times(times: &[f64]) -> Result<()> {
    times.iter().try_for_each(|&t| check_time(t))
}

/// First moment `M1(t)` of the noise.
pub fn mean(params: &NoiseParams, t: f64) -> Result<f64> {
    check_time(t)?;
    Ok(MomentKernel::new(params).mean(t))
}

/// Second moment `M2(t, t')`, symmetric in its arguments.
pub fn second_moment(params: &NoiseParams, t: f64, t_prime: f64) -> Result<f64> {
    check_time(t)?;
    check_time(t_prime)?;
    Ok(MomentKernel::new(params).second_moment(t, t_prime))
}

/// Time-ordered moment of arbitrary order; `times` must be non-increasing.
pub fn ordered_moment(params: &NoiseParams, times: &[f64]) -> Result<f64> {
    if times.is_empty() {
        return Err(Error::InvalidParams("ordered moment needs at least one time".into()));
    }
    MomentKernel::new(params).ordered_moment(times)
}

/// Nodes per dimension of the simplex rule used by [`cumulant_series_check`].
pub const CUMULANT_QUADRATURE_ORDER: usize = 16;

/// Integrated cumulants `𝒞_1 .. 𝒞_order` of `X(t) = ∫_0^t ε(s) ds`.
///
/// The moments `<X^n> = n! ∫_{t > t_1 > ... > t_n > 0} M_n` come from simplex
/// quadrature of the factorized ordered moments, and the cumulants follow from
/// the moment–cumulant recursion.
pub fn integrated_cumulants(params: &NoiseParams, t: f64, order: usize) -> Result<Vec<f64>> {
    check_time(t)?;
    if !(1..=4).contains(&order) {
        return Err(Error::UnsupportedOrder(order));
    }
    let kernel = MomentKernel::new(params);
    let rule = GaussLegendre::new(CUMULANT_QUADRATURE_ORDER);

    // moments[n] = <X^n>, moments[0] = 1.
    let mut moments = vec![1.0];
    let mut factorial = 1.0;
    for n in 1..=order {
        factorial *= n as f64;
        moments.push(factorial * rule.integrate_simplex(n, t, |p| kernel.ordered_moment_unchecked(p)));
    }

    let mut cumulants = vec![0.0; order + 1];
    for n in 1..=order {
        let mut c = moments[n];
        for k in 1..n {
            c -= binomial(n - 1, k - 1) * cumulants[k] * moments[n - k];
        }
        cumulants[n] = c;
    }
    Ok(cumulants[1..].to_vec())
}

/// Truncated cumulant expansion of the decoherence function,
/// `exp(Σ_{n ≤ order} iⁿ 𝒞_n / n!)`.
///
/// The coherence picks up `<exp(+i X(t))>`; this orientation reproduces the
/// `+i a0 χ t` short-time slope of the exact decoherence function. Meaningful
/// only at short times, where the truncation error is `O(t^{order+1})`.
pub fn cumulant_series_check(params: &NoiseParams, t: f64, order: usize) -> Result<Complex64> {
    let cumulants = integrated_cumulants(params, t, order)?;
    let mut exponent = Complex64::new(0.0, 0.0);
    let mut factorial = 1.0;
    for (idx, c) in cumulants.iter().enumerate() {
        let n = idx + 1;
        factorial *= n as f64;
        exponent += Complex64::i().powu(n as u32) * (*c / factorial);
    }
    Ok(exponent.exp())
}

fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn params(eta: f64, chi: f64, kappa: f64, a0: f64) -> NoiseParams {
        NoiseParams::new(eta, chi, kappa, a0).unwrap()
    }

    #[test]
    fn rejects_invalid_parameters() {
        assert!(NoiseParams::new(0.0, 1.0, 1.0, 0.0).is_err());
        assert!(NoiseParams::new(1.0, -0.1, 1.0, 0.0).is_err());
        assert!(NoiseParams::new(1.0, 1.0, 0.0, 0.0).is_err());
        assert!(NoiseParams::new(1.0, 1.0, f64::INFINITY, 0.0).is_err());
        assert!(NoiseParams::new(1.0, 1.0, 1.0, 1.5).is_err());
        assert!(NoiseParams::memoryless(1.0, 1.0, -1.0).is_ok());
    }

    #[test]
    fn mean_starts_at_biased_amplitude() {
        let p = params(1.0, 1.0, 1.0, 0.5);
        assert_abs_diff_eq!(mean(&p, 0.0).unwrap(), 0.5, epsilon = 1e-15);
    }

    #[test]
    fn stationary_mean_vanishes() {
        let p = params(1.3, 2.0, 0.7, 0.0);
        for i in 0..50 {
            assert!(mean(&p, i as f64 * 0.2).unwrap().abs() < 1e-12);
        }
    }

    #[test]
    fn equal_time_second_moment_is_chi_squared() {
        for kappa in [0.3, 8.0, 20.0] {
            let p = params(1.0, 3.0, kappa, 0.2);
            for t in [0.0, 0.5, 7.0] {
                assert_abs_diff_eq!(second_moment(&p, t, t).unwrap(), 9.0, epsilon = 1e-13);
            }
        }
    }

    #[test]
    fn second_moment_is_symmetric() {
        let p = params(1.0, 2.0, 0.5, 0.0);
        assert_eq!(second_moment(&p, 2.0, 0.5).unwrap(), second_moment(&p, 0.5, 2.0).unwrap());
        assert!(second_moment(&p, -1.0, 0.5).is_err());
    }

    #[test]
    fn critically_damped_branch_is_continuous() {
        // κ = 8η sits exactly on the repeated root of s² + κs + 2ηκ.
        let crit = MomentKernel::new(&params(1.0, 1.0, 8.0, 0.0));
        let near = MomentKernel::new(&params(1.0, 1.0, 8.0 * (1.0 + 1e-7), 0.0));
        assert_eq!(crit.frequencies().len(), 1);
        for tau in [0.0, 0.1, 0.5, 2.0] {
            assert_abs_diff_eq!(crit.omega(tau), near.omega(tau), epsilon = 1e-6);
        }
    }

    #[test]
    fn memoryless_relaxation_is_exponential() {
        let p = NoiseParams::memoryless(1.0, 1.0, 0.0).unwrap();
        for tau in [0.0, 0.3, 1.0, 4.0] {
            assert_abs_diff_eq!(second_moment(&p, tau, 0.0).unwrap(), (-2.0 * tau).exp(), epsilon = 1e-15);
        }
    }

    #[test]
    fn moment_equation_residual_vanishes() {
        // Ω'' + κΩ' + 2ηκΩ = 0, checked by central differences.
        for (eta, kappa) in [(1.0, 1.0), (0.4, 5.0), (2.0, 16.0)] {
            let p = params(eta, 1.7, kappa, 0.0);
            let chi2 = 1.7 * 1.7;
            let h = 1e-4;
            for i in 1..40 {
                let tau = 0.1 * i as f64;
                let m = |x: f64| second_moment(&p, x, 0.0).unwrap();
                let d1 = (m(tau + h) - m(tau - h)) / (2.0 * h);
                let d2 = (m(tau + h) - 2.0 * m(tau) + m(tau - h)) / (h * h);
                let residual = d2 + kappa * d1 + 2.0 * eta * kappa * m(tau);
                assert!(residual.abs() < 1e-6 * chi2 * (1.0 + kappa * kappa), "residual {residual}");
            }
        }
    }

    #[test]
    fn ordered_moment_base_cases() {
        let p = params(1.0, 2.0, 1.0, 0.3);
        assert_eq!(ordered_moment(&p, &[0.7]).unwrap(), mean(&p, 0.7).unwrap());
        assert_eq!(ordered_moment(&p, &[0.9, 0.2]).unwrap(), second_moment(&p, 0.9, 0.2).unwrap());
    }

    #[test]
    fn ordered_moment_factorizes() {
        let p = params(1.0, 2.0, 1.0, 0.0);
        let m4 = ordered_moment(&p, &[2.0, 1.5, 0.8, 0.1]).unwrap();
        let expected = second_moment(&p, 2.0, 1.5).unwrap() * second_moment(&p, 0.8, 0.1).unwrap();
        assert_abs_diff_eq!(m4, expected, epsilon = 1e-15);
        let p = p.with_a0(0.4).unwrap();
        let m3 = ordered_moment(&p, &[2.0, 1.5, 0.8]).unwrap();
        let expected = second_moment(&p, 2.0, 1.5).unwrap() * mean(&p, 0.8).unwrap();
        assert_abs_diff_eq!(m3, expected, epsilon = 1e-15);
    }

    #[test]
    fn ordered_moment_rejects_increasing_times() {
        let p = params(1.0, 2.0, 1.0, 0.0);
        assert_eq!(ordered_moment(&p, &[0.1, 0.5]), Err(Error::UnorderedTimes));
        assert!(ordered_moment(&p, &[]).is_err());
    }

    #[test]
    fn equal_times_collapse_to_powers_of_chi() {
        let p = params(1.0, 1.5, 2.0, 0.6);
        let t = 0.9;
        assert_abs_diff_eq!(ordered_moment(&p, &[t; 4]).unwrap(), 1.5f64.powi(4), epsilon = 1e-12);
        let odd = ordered_moment(&p, &[t; 3]).unwrap();
        assert_abs_diff_eq!(odd, 1.5f64.powi(2) * mean(&p, t).unwrap(), epsilon = 1e-12);
    }

    #[test]
    fn cumulant_check_without_coupling_is_one() {
        let p = params(1.0, 0.0, 1.0, 0.5);
        for order in 1..=4 {
            let v = cumulant_series_check(&p, 0.3, order).unwrap();
            assert_abs_diff_eq!(v.re, 1.0, epsilon = 1e-15);
            assert_abs_diff_eq!(v.im, 0.0, epsilon = 1e-15);
        }
    }

    #[test]
    fn cumulant_order_is_guarded() {
        let p = params(1.0, 1.0, 1.0, 0.0);
        assert_eq!(cumulant_series_check(&p, 0.1, 5), Err(Error::UnsupportedOrder(5)));
        assert_eq!(cumulant_series_check(&p, 0.1, 0), Err(Error::UnsupportedOrder(0)));
    }

    #[test]
    fn first_integrated_cumulant_is_integral_of_mean() {
        let p = params(1.0, 2.0, 1.0, 0.5);
        let t = 0.7;
        let c = integrated_cumulants(&p, t, 2).unwrap();
        let rule = GaussLegendre::new(32);
        let direct = rule.integrate(0.0, t, |s| mean(&p, s).unwrap());
        assert_abs_diff_eq!(c[0], direct, epsilon = 1e-13);
        // Second cumulant of a stationary-free-variance process: variance of X.
        let m2 = 2.0 * rule.integrate(0.0, t, |a| rule.integrate(0.0, a, |b| second_moment(&p, a, b).unwrap()));
        assert_abs_diff_eq!(c[1], m2 - direct * direct, epsilon = 1e-12);
    }
}
