//! Exact decoherence function from the rational Laplace transform of the
//! coherence.
//!
//! With finite memory the transform is
//!
//! ```text
//! D̃_r(s) = (s² + κs + 2ηκ) / Q(s),   D̃_i(s) = a0 χ (s + κ) / Q(s),
//! Q(s)   = s³ + κs² + (2ηκ + χ²)s + κχ²,
//! ```
//!
//! and in the memoryless limit `Q(s) = s² + 2ηs + χ²` with numerators
//! `s + 2η` and `a0 χ`. Both are inverted by partial fractions over the
//! roots of `Q`, so `D(t) = Σ_n (c_rⁿ + i c_iⁿ) e^{r_n t}` for distinct roots.
//! Clustered roots use the confluent form `(c + c' t) e^{rt}`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::noise::{Memory, NoiseParams};
use crate::poly::{cluster_roots, inverse_laplace, ExpPolyTerm, RealPolynomial};

/// `|D|` below which the time-local rates are refused.
pub const RATE_ZERO_THRESHOLD: f64 = 1e-13;

/// Contribution of one (possibly repeated) root to `D_r` and `D_i`.
///
/// `real[q]` and `imag[q]` multiply `t^q e^{root t}`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralTerm {
    pub root: Complex64,
    pub real: Vec<Complex64>,
    pub imag: Vec<Complex64>,
}

impl SpectralTerm {
    pub fn multiplicity(&self) -> usize {
        self.real.len()
    }

    fn as_parts(&self) -> (ExpPolyTerm, ExpPolyTerm) {
        (
            ExpPolyTerm { root: self.root, coeffs: self.real.clone() },
            ExpPolyTerm { root: self.root, coeffs: self.imag.clone() },
        )
    }
}

/// Sums that pin the short-time behaviour: `D(0) = 1` and `D'(0) = i a0 χ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResidueIdentities {
    /// `Σ c_rⁿ`, expected 1.
    pub sum_real: Complex64,
    /// `Σ c_iⁿ`, expected 0.
    pub sum_imag: Complex64,
    /// `Σ c_rⁿ r_n`, expected 0.
    pub moment_real: Complex64,
    /// `Σ c_iⁿ r_n`, expected `a0 χ`.
    pub moment_imag: Complex64,
}

/// Frequency shift `φ` and decoherence rate `γ` of the time-local master
/// equation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rates {
    pub phi: f64,
    pub gamma: f64,
}

/// Spectral representation of the decoherence function `D(t)`.
#[derive(Debug, Clone, PartialEq)]
pub struct DecoherenceFunction {
    params: NoiseParams,
    roots: Vec<Complex64>,
    terms: Vec<SpectralTerm>,
    parts: Vec<(ExpPolyTerm, ExpPolyTerm)>,
}

/// Builds the decoherence function for the given environment.
///
/// Memoryless parameters use the quadratic limit of the transform.
pub fn build(params: &NoiseParams) -> DecoherenceFunction {
    DecoherenceFunction::new(params)
}

impl DecoherenceFunction {
    pub fn new(params: &NoiseParams) -> Self {
        let (eta, chi, a0) = (params.eta(), params.chi(), params.a0());
        let (den, num_r, num_i) = match params.memory() {
            Memory::Finite(kappa) => (
                RealPolynomial::new(vec![kappa * chi * chi, 2.0 * eta * kappa + chi * chi, kappa, 1.0]),
                RealPolynomial::new(vec![2.0 * eta * kappa, kappa, 1.0]),
                RealPolynomial::new(vec![a0 * chi * kappa, a0 * chi]),
            ),
            Memory::Memoryless => (
                RealPolynomial::new(vec![chi * chi, 2.0 * eta, 1.0]),
                RealPolynomial::new(vec![2.0 * eta, 1.0]),
                RealPolynomial::new(vec![a0 * chi]),
            ),
        };
        let roots = den.roots();
        let clusters = cluster_roots(&roots);
        let real = inverse_laplace(&num_r, &den, &clusters);
        let imag = inverse_laplace(&num_i, &den, &clusters);
        let mut terms: Vec<SpectralTerm> = real
            .into_iter()
            .zip(imag)
            .map(|(r, i)| SpectralTerm { root: r.root, real: r.coeffs, imag: i.coeffs })
            .collect();
        enforce_conjugate_symmetry(&mut terms);
        Self::from_terms(*params, roots, terms)
    }

    fn from_terms(params: NoiseParams, roots: Vec<Complex64>, terms: Vec<SpectralTerm>) -> Self {
        let parts = terms.iter().map(SpectralTerm::as_parts).collect();
        Self { params, roots, terms, parts }
    }

    pub fn params(&self) -> &NoiseParams {
        &self.params
    }

    /// Roots of the denominator, with multiplicity.
    pub fn roots(&self) -> &[Complex64] {
        &self.roots
    }

    pub fn terms(&self) -> &[SpectralTerm] {
        &self.terms
    }

    /// True when some roots were merged into a confluent term.
    pub fn is_degenerate(&self) -> bool {
        self.terms.iter().any(|t| t.multiplicity() > 1)
    }

    /// Simple-pole residues `c_rⁿ`, or `None` for a degenerate spectrum.
    pub fn residues_real(&self) -> Option<Vec<Complex64>> {
        (!self.is_degenerate()).then(|| self.terms.iter().map(|t| t.real[0]).collect())
    }

    /// Simple-pole residues `c_iⁿ`, or `None` for a degenerate spectrum.
    pub fn residues_imag(&self) -> Option<Vec<Complex64>> {
        (!self.is_degenerate()).then(|| self.terms.iter().map(|t| t.imag[0]).collect())
    }

    pub fn residue_identities(&self) -> ResidueIdentities {
        let zero = Complex64::new(0.0, 0.0);
        let slope = |c: &[Complex64], r: Complex64| c[0] * r + c.get(1).copied().unwrap_or(zero);
        ResidueIdentities {
            sum_real: self.terms.iter().map(|t| t.real[0]).sum(),
            sum_imag: self.terms.iter().map(|t| t.imag[0]).sum(),
            moment_real: self.terms.iter().map(|t| slope(&t.real, t.root)).sum(),
            moment_imag: self.terms.iter().map(|t| slope(&t.imag, t.root)).sum(),
        }
    }

    /// `D(t) = D_r(t) + i D_i(t)`.
    pub fn evaluate(&self, t: f64) -> Complex64 {
        if t == 0.0 {
            return Complex64::new(1.0, 0.0);
        }
        let mut re = Complex64::new(0.0, 0.0);
        let mut im = Complex64::new(0.0, 0.0);
        for (r, i) in &self.parts {
            re += r.eval(t);
            im += i.eval(t);
        }
        debug_assert!(re.im.abs() < 1e-10 && im.im.abs() < 1e-10, "realness leak at t={t}");
        Complex64::new(re.re, im.re)
    }

    /// `D(t)` and `dD/dt`.
    pub fn evaluate_with_derivative(&self, t: f64) -> (Complex64, Complex64) {
        let zero = Complex64::new(0.0, 0.0);
        let (mut re, mut im, mut dre, mut dim) = (zero, zero, zero, zero);
        for (r, i) in &self.parts {
            let (v, d) = r.eval_with_derivative(t);
            re += v;
            dre += d;
            let (v, d) = i.eval_with_derivative(t);
            im += v;
            dim += d;
        }
        (Complex64::new(re.re, im.re), Complex64::new(dre.re, dim.re))
    }

    /// Frequency shift and decoherence rate,
    /// `φ = -(D_r D_i' - D_i D_r') / |D|²` and `γ = -(D_r D_r' + D_i D_i') / |D|²`.
    ///
    /// These are the factored forms of the double sums over residue pairs.
    pub fn rates(&self, t: f64) -> Result<Rates> {
        if !(t.is_finite() && t >= 0.0) {
            return Err(Error::InvalidTime(t));
        }
        let (d, dd) = self.evaluate_with_derivative(t);
        let norm2 = d.norm_sqr();
        if norm2.sqrt() < RATE_ZERO_THRESHOLD {
            return Err(Error::CoherenceZero { t, magnitude: norm2.sqrt() });
        }
        let cross = d.conj() * dd;
        Ok(Rates { phi: -cross.im / norm2, gamma: -cross.re / norm2 })
    }

    /// Upper bound on `∫_T^∞ |D'(t)| dt`, which bounds any further change of
    /// `|D|` beyond `T`.
    pub fn tail_variation_bound(&self, horizon: f64) -> f64 {
        let mut total = 0.0;
        for term in &self.terms {
            let decay = -term.root.re;
            let rmod = term.root.norm();
            for coeffs in [&term.real, &term.imag] {
                for (q, c) in coeffs.iter().enumerate() {
                    let c = c.norm();
                    if c == 0.0 {
                        continue;
                    }
                    // |d/dt (c t^q e^{rt})| <= c (q t^{q-1} + |r| t^q) e^{Re(r) t}
                    let mut piece = 0.0;
                    if q > 0 {
                        piece += q as f64 * power_exp_tail(q - 1, decay, horizon);
                    }
                    if rmod > 0.0 {
                        piece += rmod * power_exp_tail(q, decay, horizon);
                    }
                    total += c * piece;
                }
            }
        }
        total
    }

    /// Slowest decay rate among terms that carry weight.
    pub fn slowest_decay(&self) -> f64 {
        self.terms
            .iter()
            .filter(|t| t.real.iter().chain(&t.imag).any(|c| c.norm() > 0.0) && t.root.norm() > 0.0)
            .map(|t| -t.root.re)
            .fold(f64::INFINITY, f64::min)
    }

    /// Horizon beyond which `|D|` can change by at most `tol`.
    ///
    /// Starts from `40 / min(η, κ, χ)` and extends until the tail bound holds.
    pub fn default_horizon(&self, tol: f64) -> f64 {
        let p = &self.params;
        let mut scale = p.eta().min(p.chi() + f64::EPSILON);
        if let Some(kappa) = p.kappa() {
            scale = scale.min(kappa);
        }
        let mut horizon = 40.0 / scale;
        let mut guard = 0;
        while self.tail_variation_bound(horizon) > tol && guard < 200 {
            horizon *= 1.5;
            guard += 1;
        }
        horizon
    }

    /// Times in `(0, horizon)` where `|D|` has a local extremum, located as
    /// sign changes of `d|D|²/dt` on a dense grid refined by bisection.
    ///
    /// `|D|²` is smooth even where `D` passes through zero, so its derivative
    /// changes sign at the cusps of `|D|` as well.
    pub fn coherence_extrema(&self, horizon: f64) -> Vec<f64> {
        let rmax = self.terms.iter().map(|t| t.root.norm()).fold(0.0, f64::max);
        let points = ((16.0 * horizon * rmax).ceil() as usize).clamp(4096, 1 << 24);
        let h = horizon / points as f64;
        let slope = |t: f64| {
            let (d, dd) = self.evaluate_with_derivative(t);
            (d.conj() * dd).re
        };
        let mut extrema = Vec::new();
        let mut last: Option<(f64, f64)> = None;
        for k in 1..=points {
            let t = k as f64 * h;
            let g = slope(t);
            if g == 0.0 {
                continue;
            }
            if let Some((t0, g0)) = last {
                if g0.signum() != g.signum() {
                    extrema.push(bisect_sign_change(&slope, t0, t, g0));
                }
            }
            last = Some((t, g));
        }
        extrema
    }

    #[doc(hidden)]
    /// Test hook: shifts the leading residue of `D_r` (and its conjugate
    /// partner), breaking the `D(0) = 1` identity.
    pub fn perturb_residue(&mut self, delta: f64) {
        if self.terms.is_empty() {
            return;
        }
        let root = self.terms[0].root;
        for term in &mut self.terms {
            if term.root == root || (root.im != 0.0 && term.root == root.conj()) {
                term.real[0] += delta;
            }
        }
        self.parts = self.terms.iter().map(SpectralTerm::as_parts).collect();
    }
}

fn bisect_sign_change<F: Fn(f64) -> f64>(f: &F, mut lo: f64, mut hi: f64, g_lo: f64) -> f64 {
    let sign_lo = g_lo.signum();
    while hi - lo > 1e-12 * hi.max(1.0) {
        let mid = 0.5 * (lo + hi);
        let g = f(mid);
        if g == 0.0 {
            return mid;
        }
        if g.signum() == sign_lo {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// `∫_T^∞ t^j e^{-a t} dt`.
fn power_exp_tail(j: usize, decay: f64, horizon: f64) -> f64 {
    if decay <= 0.0 {
        return f64::INFINITY;
    }
    let mut sum = 0.0;
    let mut factor = 1.0; // j! / i!
    for i in (0..=j).rev() {
        sum += factor * horizon.powi(i as i32) / decay.powi((j - i + 1) as i32);
        factor *= i as f64;
    }
    sum * (-decay * horizon).exp()
}

fn enforce_conjugate_symmetry(terms: &mut [SpectralTerm]) {
    for i in 0..terms.len() {
        let root = terms[i].root;
        if root.im == 0.0 {
            for c in terms[i].real.iter_mut().chain(terms[i].imag.iter_mut()) {
                c.im = 0.0;
            }
        } else if root.im > 0.0 {
            if let Some(j) = (0..terms.len()).find(|&j| terms[j].root == root.conj()) {
                let real = terms[i].real.iter().map(|c| c.conj()).collect();
                let imag = terms[i].imag.iter().map(|c| c.conj()).collect();
                terms[j].real = real;
                terms[j].imag = imag;
            }
        }
    }
}

/// Closed-form decoherence function of memoryless telegraph noise,
/// `e^{-ηt}[cosh δt + (η/δ) sinh δt] + i a0 χ e^{-ηt} sinh(δt)/δ` with
/// `δ = √(η² - χ²)`.
pub fn markovian_limit(params: &NoiseParams, t: f64) -> Result<Complex64> {
    if !params.is_memoryless() {
        return Err(Error::Contract("memoryless noise parameters"));
    }
    if !(t.is_finite() && t >= 0.0) {
        return Err(Error::InvalidTime(t));
    }
    let (eta, chi, a0) = (params.eta(), params.chi(), params.a0());
    let delta = Complex64::new(eta * eta - chi * chi, 0.0).sqrt();
    let z = delta * t;
    // e^{-ηt} cosh(δt) and e^{-ηt} sinh(δt)/δ without overflow.
    let (cosh_part, sinhc_part) = if z.norm() < 1e-3 {
        let z2 = z * z;
        let decay = (-eta * t).exp();
        ((1.0 + z2 / 2.0 + z2 * z2 / 24.0) * decay, (1.0 + z2 / 6.0 + z2 * z2 / 120.0) * t * decay)
    } else {
        let up = ((delta - eta) * t).exp();
        let down = ((-delta - eta) * t).exp();
        (0.5 * (up + down), (up - down) / (2.0 * delta))
    };
    let real = cosh_part + eta * sinhc_part;
    let imag = a0 * chi * sinhc_part;
    Ok(Complex64::new(real.re, imag.re))
}
