#![allow(dead_code)]

use dephasing_core::single_qubit::CMatrix2;
use dephasing_core::two_qubit::CMatrix4;
use dephasing_core::{DecoherenceFunction, NoiseParams, SingleQubitState, TwoQubitState};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const SEED: u64 = 0x5eed_d00d;

pub fn rng(stream: u64) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(SEED);
    r.set_stream(stream);
    r
}

/// η, κ ∈ [0.2, 5], χ/η ∈ [0.1, 5], a0 ∈ [-1, 1].
pub fn draw_params(rng: &mut ChaCha8Rng) -> NoiseParams {
    let eta = rng.gen_range(0.2..=5.0);
    let kappa = rng.gen_range(0.2..=5.0);
    let chi = eta * rng.gen_range(0.1..=5.0);
    let a0 = rng.gen_range(-1.0..=1.0);
    NoiseParams::new(eta, chi, kappa, a0).unwrap()
}

pub fn draws(count: usize, stream: u64) -> Vec<NoiseParams> {
    let mut r = rng(stream);
    (0..count).map(|_| draw_params(&mut r)).collect()
}

fn gaussian_complex(rng: &mut ChaCha8Rng) -> Complex64 {
    // Box-Muller
    let u1: f64 = rng.gen_range(f64::EPSILON..1.0);
    let u2: f64 = rng.gen();
    let rad = (-2.0 * u1.ln()).sqrt();
    let ang = std::f64::consts::TAU * u2;
    Complex64::new(rad * ang.cos(), rad * ang.sin())
}

pub fn random_single_state(rng: &mut ChaCha8Rng) -> SingleQubitState {
    loop {
        let (x, y, z): (f64, f64, f64) = (rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        if x * x + y * y + z * z <= 1.0 {
            return SingleQubitState::from_bloch(x, y, z).unwrap();
        }
    }
}

/// Ginibre-distributed full-rank state.
pub fn random_two_state(rng: &mut ChaCha8Rng) -> TwoQubitState {
    let g = CMatrix4::from_fn(|_, _| gaussian_complex(rng));
    let rho = g * g.adjoint();
    let tr = rho.trace();
    TwoQubitState::new(rho / tr).unwrap()
}

/// Random X state: random populations, anti-diagonal coherences inside the
/// positivity bounds with random phases.
pub fn random_x_state(rng: &mut ChaCha8Rng) -> TwoQubitState {
    let w: Vec<f64> = (0..4).map(|_| -rng.gen_range(f64::EPSILON..1.0f64).ln()).collect();
    let total: f64 = w.iter().sum();
    let p: Vec<f64> = w.iter().map(|x| x / total).collect();
    let mut rho = CMatrix4::zeros();
    for i in 0..4 {
        rho[(i, i)] = Complex64::new(p[i], 0.0);
    }
    let outer = rng.gen_range(0.0..=1.0) * (p[0] * p[3]).sqrt();
    let inner = rng.gen_range(0.0..=1.0) * (p[1] * p[2]).sqrt();
    let z1 = Complex64::from_polar(outer, rng.gen_range(0.0..std::f64::consts::TAU));
    let z2 = Complex64::from_polar(inner, rng.gen_range(0.0..std::f64::consts::TAU));
    rho[(0, 3)] = z1;
    rho[(3, 0)] = z1.conj();
    rho[(1, 2)] = z2;
    rho[(2, 1)] = z2.conj();
    TwoQubitState::new(rho).unwrap()
}

pub fn hermiticity_2(m: &CMatrix2) -> f64 {
    (m - m.adjoint()).iter().map(|z| z.norm()).fold(0.0, f64::max)
}

pub fn hermiticity_4(m: &CMatrix4) -> f64 {
    (m - m.adjoint()).iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Sum of rises of `values` between consecutive local extrema, found by
/// plain peak detection on a sampled sequence.
pub fn sampled_rises(values: &[f64]) -> f64 {
    values.windows(2).map(|w| (w[1] - w[0]).max(0.0)).sum()
}

/// RK4 step used to integrate the third-order equation for `params`.
pub fn rk4_step(params: &NoiseParams, horizon: f64, scale: f64) -> f64 {
    let rate = params.eta() + params.chi() + params.kappa().unwrap_or(0.0);
    (scale / rate).min(horizon / 100.0)
}

pub fn grid(t_max: f64, points: usize) -> Vec<f64> {
    (0..points).map(|k| t_max * k as f64 / (points - 1) as f64).collect()
}

pub fn coherence_minima(df: &DecoherenceFunction, horizon: f64) -> Vec<(f64, f64)> {
    let ext = df.coherence_extrema(horizon);
    ext.iter()
        .filter(|&&t| {
            let here = df.evaluate(t).norm();
            here <= df.evaluate((t - 1e-4).max(0.0)).norm() && here <= df.evaluate(t + 1e-4).norm()
        })
        .map(|&t| (t, df.evaluate(t).norm()))
        .collect()
}
