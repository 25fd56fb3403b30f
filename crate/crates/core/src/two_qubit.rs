//! Two-qubit dephasing: local channels on both qubits, concurrence, the
//! CHSH-Bell function, the composite Bell and extended Werner families, and
//! the `|D|` thresholds for entanglement and nonlocality.
//!
//! Matrices use the product basis `{|11⟩, |10⟩, |01⟩, |00⟩}`; each factor
//! follows the single-qubit ordering `{|1⟩, |0⟩}`.

use nalgebra::{Matrix3, Matrix4, Vector4};
use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::single_qubit::{accumulated_increase, CMatrix2, SingleQubitKraus, SingleQubitState};
use crate::spectral::DecoherenceFunction;
use crate::MaxNorm;

pub type CMatrix4 = Matrix4<Complex64>;

/// Tolerance for Hermiticity, trace and positivity of a two-qubit state.
pub const STATE_TOLERANCE: f64 = 1e-10;
/// Entries below this size count as zero when detecting X structure.
pub const X_STRUCTURE_TOLERANCE: f64 = 1e-14;
/// Resolution of the `|D|` threshold bisections.
pub const THRESHOLD_TOLERANCE: f64 = 1e-10;
const CLAMP: f64 = 1e-12;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Validated 4×4 density matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoQubitState {
    rho: CMatrix4,
}

impl TwoQubitState {
    pub fn new(rho: CMatrix4) -> Result<Self> {
        let herm = (rho - rho.adjoint()).max_norm();
        if herm > STATE_TOLERANCE {
            return Err(Error::InvalidState(format!("not Hermitian (deviation {herm:e})")));
        }
        let trace = rho.trace();
        if (trace - ONE).norm() > STATE_TOLERANCE {
            return Err(Error::InvalidState(format!("trace {trace} differs from 1")));
        }
        let lowest = hermitian_eigenvalues(&rho).into_iter().fold(f64::INFINITY, f64::min);
        if lowest < -STATE_TOLERANCE {
            return Err(Error::InvalidState(format!("negative eigenvalue {lowest:e}")));
        }
        Ok(Self { rho })
    }

    /// `|ψ⟩⟨ψ|` for a normalized vector in the product basis.
    pub fn pure(psi: &Vector4<Complex64>) -> Result<Self> {
        Self::new(psi * psi.adjoint())
    }

    pub fn product(a: &SingleQubitState, b: &SingleQubitState) -> Self {
        Self { rho: a.matrix().kronecker(b.matrix()) }
    }

    pub fn maximally_mixed() -> Self {
        Self { rho: CMatrix4::identity() * Complex64::new(0.25, 0.0) }
    }

    pub fn matrix(&self) -> &CMatrix4 {
        &self.rho
    }

    pub fn eigenvalues(&self) -> [f64; 4] {
        hermitian_eigenvalues(&self.rho)
    }

    /// True when only the diagonal, `(|11⟩,|00⟩)` and `(|10⟩,|01⟩)` entries are nonzero.
    pub fn is_x_structured(&self, tol: f64) -> bool {
        (0..4).all(|i| (0..4).all(|j| i == j || i + j == 3 || self.rho[(i, j)].norm() <= tol))
    }
}

fn hermitian_eigenvalues(rho: &CMatrix4) -> [f64; 4] {
    let herm = (rho + rho.adjoint()) * Complex64::new(0.5, 0.0);
    let eig = herm.symmetric_eigenvalues();
    [eig[0], eig[1], eig[2], eig[3]]
}

/// Coherence factor of element `(i, j)` under local dephasing on both qubits.
fn element_factor(i: usize, j: usize, d: Complex64) -> Complex64 {
    let single = |row: usize, col: usize| match (row, col) {
        (1, 0) => d,
        (0, 1) => d.conj(),
        _ => ONE,
    };
    single(i >> 1, j >> 1) * single(i & 1, j & 1)
}

/// Applies the same dephasing factor `d` to both qubits.
pub fn dephase_two(state: &TwoQubitState, d: Complex64) -> TwoQubitState {
    let mut rho = state.rho;
    for i in 0..4 {
        for j in 0..4 {
            if i != j {
                rho[(i, j)] *= element_factor(i, j, d);
            }
        }
    }
    TwoQubitState { rho }
}

pub fn evolve_two(state0: &TwoQubitState, df: &DecoherenceFunction, t: f64) -> Result<TwoQubitState> {
    if !(t.is_finite() && t >= 0.0) {
        return Err(Error::InvalidTime(t));
    }
    Ok(dephase_two(state0, df.evaluate(t)))
}

/// The four tensor products `K_μ ⊗ K_ν` of the single-qubit Kraus pair.
pub fn two_qubit_kraus(d: Complex64) -> [CMatrix4; 4] {
    let ops: [CMatrix2; 2] = SingleQubitKraus::new(d).operators();
    [ops[0].kronecker(&ops[0]), ops[0].kronecker(&ops[1]), ops[1].kronecker(&ops[0]), ops[1].kronecker(&ops[1])]
}

pub fn apply_kraus(ops: &[CMatrix4], rho: &CMatrix4) -> CMatrix4 {
    ops.iter().map(|k| k * rho * k.adjoint()).sum()
}

pub fn kraus_completeness(ops: &[CMatrix4]) -> CMatrix4 {
    ops.iter().map(|k| k.adjoint() * k).sum()
}

/// Non-Markovianity `N_T` of the two-qubit channel: the total increase of
/// `|D|²` over its monotone-increasing intervals.
pub fn non_markovianity_two(df: &DecoherenceFunction, horizon: f64, tol: f64) -> Result<f64> {
    accumulated_increase(df, horizon, tol, 2.0, |d| d * d)
}

pub fn non_markovianity_two_auto(df: &DecoherenceFunction, tol: f64) -> Result<f64> {
    non_markovianity_two(df, df.default_horizon(tol / 2.0), tol)
}

/// Concurrence, using the X-state closed form when the structure allows it.
pub fn concurrence(state: &TwoQubitState) -> f64 {
    if state.is_x_structured(X_STRUCTURE_TOLERANCE) {
        concurrence_x(state)
    } else {
        concurrence_wootters(state)
    }
}

/// `max{0, 2(|ρ23| - √(ρ11 ρ44)), 2(|ρ14| - √(ρ22 ρ33))}`.
pub fn concurrence_x(state: &TwoQubitState) -> f64 {
    let r = &state.rho;
    let p = |i: usize| r[(i, i)].re.max(0.0);
    let c1 = 2.0 * (r[(1, 2)].norm() - (p(0) * p(3)).sqrt());
    let c2 = 2.0 * (r[(0, 3)].norm() - (p(1) * p(2)).sqrt());
    c1.max(c2).max(0.0)
}

/// Wootters concurrence `max{0, s1 - s2 - s3 - s4}`, where `s_k` are the
/// singular values of `Vᵀ (σ_y ⊗ σ_y) V` with `ρ = V V†`; they equal the
/// square roots of the eigenvalues of `ρ ρ̃`.
pub fn concurrence_wootters(state: &TwoQubitState) -> f64 {
    let herm = (state.rho + state.rho.adjoint()) * Complex64::new(0.5, 0.0);
    let eig = herm.symmetric_eigen();
    let mut v = eig.eigenvectors;
    for k in 0..4 {
        let p = eig.eigenvalues[k];
        let w = if p < CLAMP { 0.0 } else { p.sqrt() };
        v.column_mut(k).scale_mut(w);
    }
    let yy = sigma_y_y();
    let tau = v.transpose() * yy * v;
    let mut s: Vec<f64> = tau.singular_values().iter().copied().collect();
    s.sort_by(|a, b| b.total_cmp(a));
    (s[0] - s[1] - s[2] - s[3]).max(0.0)
}

fn sigma_y_y() -> CMatrix4 {
    let mut m = CMatrix4::zeros();
    m[(0, 3)] = -ONE;
    m[(1, 2)] = ONE;
    m[(2, 1)] = ONE;
    m[(3, 0)] = -ONE;
    m
}

/// Maximal CHSH value, using the X-state closed form when possible.
pub fn bell_chsh(state: &TwoQubitState) -> f64 {
    if state.is_x_structured(X_STRUCTURE_TOLERANCE) {
        bell_chsh_x(state)
    } else {
        bell_chsh_horodecki(state)
    }
}

/// `max{2√(μ1+μ2), 2√(μ1+μ3)}` for an X state.
pub fn bell_chsh_x(state: &TwoQubitState) -> f64 {
    let r = &state.rho;
    let (a, b) = (r[(0, 3)].norm(), r[(1, 2)].norm());
    let mu1 = 4.0 * (a + b).powi(2);
    let mu2 = (r[(0, 0)].re + r[(3, 3)].re - r[(1, 1)].re - r[(2, 2)].re).powi(2);
    let mu3 = 4.0 * (a - b).powi(2);
    2.0 * (mu1 + mu2).max(mu1 + mu3).sqrt()
}

/// `(B/2)² - 1`, positive exactly when the CHSH inequality is violated.
///
/// The X-state form subtracts the 1 inside a factored difference so that a
/// violation of order `|D|⁴` stays resolvable near the boundary.
pub fn chsh_violation_margin(state: &TwoQubitState) -> f64 {
    if state.is_x_structured(X_STRUCTURE_TOLERANCE) {
        let r = &state.rho;
        let (a, b) = (r[(0, 3)].norm(), r[(1, 2)].norm());
        let z = r[(0, 0)].re + r[(3, 3)].re - r[(1, 1)].re - r[(2, 2)].re;
        let mu1 = 4.0 * (a + b).powi(2);
        let mu3 = 4.0 * (a - b).powi(2);
        (mu1 + (z - 1.0) * (z + 1.0)).max(mu1 + mu3 - 1.0)
    } else {
        let b = bell_chsh_horodecki(state);
        0.25 * b * b - 1.0
    }
}

/// Correlation matrix `T_mn = Tr[ρ (σ_m ⊗ σ_n)]`.
pub fn correlation_matrix(state: &TwoQubitState) -> Matrix3<f64> {
    let i = Complex64::new(0.0, 1.0);
    let paulis =
        [CMatrix2::new(ZERO, ONE, ONE, ZERO), CMatrix2::new(ZERO, -i, i, ZERO), CMatrix2::new(ONE, ZERO, ZERO, -ONE)];
    Matrix3::from_fn(|m, n| (state.rho * paulis[m].kronecker(&paulis[n])).trace().re)
}

/// Horodecki value `2√(μ1 + μ2)` from the two largest eigenvalues of `TᵀT`.
pub fn bell_chsh_horodecki(state: &TwoQubitState) -> f64 {
    let t = correlation_matrix(state);
    let mut mu: Vec<f64> = (t.transpose() * t).symmetric_eigenvalues().iter().map(|m| m.max(0.0)).collect();
    mu.sort_by(|a, b| b.total_cmp(a));
    2.0 * (mu[0] + mu[1]).sqrt()
}

/// Relative sign inside a Bell pair, `(|a⟩ ± |b⟩)/√2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    fn value(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }
}

/// `(1+c)/2 |ψ±⟩⟨ψ±| + (1-c)/2 |φ±⟩⟨φ±|` with `ψ± = (|00⟩ ± |11⟩)/√2` and
/// `φ± = (|01⟩ ± |10⟩)/√2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CompositeBellParams {
    c: f64,
    psi_sign: Sign,
    phi_sign: Sign,
}

impl CompositeBellParams {
    pub fn new(c: f64, psi_sign: Sign, phi_sign: Sign) -> Result<Self> {
        if !(-1.0..=1.0).contains(&c) {
            return Err(Error::InvalidFamily(format!("c = {c} outside [-1, 1]")));
        }
        Ok(Self { c, psi_sign, phi_sign })
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    pub fn initial_state(&self) -> TwoQubitState {
        let mut rho = CMatrix4::zeros();
        let high = (1.0 + self.c) / 4.0;
        let low = (1.0 - self.c) / 4.0;
        rho[(0, 0)] = Complex64::new(high, 0.0);
        rho[(3, 3)] = Complex64::new(high, 0.0);
        rho[(0, 3)] = Complex64::new(self.psi_sign.value() * high, 0.0);
        rho[(3, 0)] = rho[(0, 3)];
        rho[(1, 1)] = Complex64::new(low, 0.0);
        rho[(2, 2)] = Complex64::new(low, 0.0);
        rho[(1, 2)] = Complex64::new(self.phi_sign.value() * low, 0.0);
        rho[(2, 1)] = rho[(1, 2)];
        TwoQubitState { rho }
    }

    /// Matrix-derived `max{0, [(1-c)|D|² - (1+c)]/2, [(1+c)|D|² - (1-c)]/2}`.
    pub fn concurrence_closed_form(&self, abs_d: f64) -> f64 {
        let (c, d2) = (self.c, abs_d * abs_d);
        (((1.0 - c) * d2 - (1.0 + c)) / 2.0).max(((1.0 + c) * d2 - (1.0 - c)) / 2.0).max(0.0)
    }

    /// Matrix-derived `2√(|D|⁴ + c²)`.
    pub fn bell_closed_form(&self, abs_d: f64) -> f64 {
        2.0 * (abs_d.powi(4) + self.c * self.c).sqrt()
    }

    /// Literal closed form with the overall factor 2 of the original text.
    pub fn variant_concurrence(&self, abs_d: f64) -> f64 {
        2.0 * self.concurrence_closed_form(abs_d)
    }

    /// Literal `4√(|D|⁴ + c²)`.
    pub fn variant_bell(&self, abs_d: f64) -> f64 {
        2.0 * self.bell_closed_form(abs_d)
    }

    /// Closed-form `|D|` above which `C > 0`; `None` when never entangled.
    pub fn entanglement_threshold(&self) -> Option<f64> {
        let c = self.c;
        if c == 0.0 {
            return None;
        }
        Some(if c > 0.0 { ((1.0 - c) / (1.0 + c)).sqrt() } else { ((1.0 + c) / (1.0 - c)).sqrt() })
    }

    /// Literal nonlocality threshold `(1/2 - c²)^{1/4}` for `|c| ≤ 1/2`; zero
    /// (always nonlocal) for `|c| > 1/2`.
    pub fn variant_nonlocality_threshold(&self) -> Option<f64> {
        let c = self.c;
        if c == 0.0 {
            return None;
        }
        Some(if c.abs() > 0.5 { 0.0 } else { (0.5 - c * c).powf(0.25) })
    }
}

/// Which Bell-type component a Werner state is built on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WernerFamily {
    /// `α|00⟩ + β|11⟩`
    Psi,
    /// `α|01⟩ + β|10⟩`
    Phi,
}

/// `r |ψ⟩⟨ψ| + (1 - r) I/4`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExtendedWernerParams {
    r: f64,
    alpha: Complex64,
    beta: Complex64,
    family: WernerFamily,
}

impl ExtendedWernerParams {
    pub fn new(r: f64, alpha: Complex64, beta: Complex64, family: WernerFamily) -> Result<Self> {
        if !(0.0..=1.0).contains(&r) {
            return Err(Error::InvalidFamily(format!("r = {r} outside [0, 1]")));
        }
        let norm = alpha.norm_sqr() + beta.norm_sqr();
        if (norm - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidFamily(format!("|α|² + |β|² = {norm}")));
        }
        Ok(Self { r, alpha, beta, family })
    }

    pub fn r(&self) -> f64 {
        self.r
    }

    pub fn alpha(&self) -> Complex64 {
        self.alpha
    }

    pub fn beta(&self) -> Complex64 {
        self.beta
    }

    pub fn family(&self) -> WernerFamily {
        self.family
    }

    pub fn with_r(&self, r: f64) -> Result<Self> {
        Self::new(r, self.alpha, self.beta, self.family)
    }

    /// `|αβ|`.
    pub fn overlap(&self) -> f64 {
        self.alpha.norm() * self.beta.norm()
    }

    pub fn initial_state(&self) -> TwoQubitState {
        // |00⟩ = index 3, |11⟩ = 0, |01⟩ = 2, |10⟩ = 1
        let (ia, ib) = match self.family {
            WernerFamily::Psi => (3, 0),
            WernerFamily::Phi => (2, 1),
        };
        let mut psi = Vector4::zeros();
        psi[ia] = self.alpha;
        psi[ib] = self.beta;
        let pure = psi * psi.adjoint();
        let rho = pure * Complex64::new(self.r, 0.0) + CMatrix4::identity() * Complex64::new((1.0 - self.r) / 4.0, 0.0);
        TwoQubitState { rho }
    }

    /// Matrix-derived `max{0, 2r|αβ||D|² - (1-r)/2}`.
    pub fn concurrence_closed_form(&self, abs_d: f64) -> f64 {
        (2.0 * self.r * self.overlap() * abs_d * abs_d - (1.0 - self.r) / 2.0).max(0.0)
    }

    /// `2r√(1 + 4|αβ|²|D|⁴)`.
    pub fn bell_closed_form(&self, abs_d: f64) -> f64 {
        2.0 * self.r * (1.0 + 4.0 * self.overlap().powi(2) * abs_d.powi(4)).sqrt()
    }

    /// Literal form without the purity in the first term.
    pub fn variant_concurrence(&self, abs_d: f64) -> f64 {
        (2.0 * self.overlap() * abs_d * abs_d - (1.0 - self.r) / 2.0).max(0.0)
    }

    pub fn variant_bell(&self, abs_d: f64) -> f64 {
        self.bell_closed_form(abs_d)
    }

    /// `B = 2√(r² + [C + (1-r)/2]²)`, valid while `C > 0`.
    pub fn bell_from_concurrence(&self, concurrence: f64) -> f64 {
        2.0 * (self.r * self.r + (concurrence + (1.0 - self.r) / 2.0).powi(2)).sqrt()
    }

    /// Concurrence at which `B = 2`: `√(1 - r²) - (1 - r)/2`.
    pub fn classical_concurrence_threshold(&self) -> f64 {
        (1.0 - self.r * self.r).sqrt() - (1.0 - self.r) / 2.0
    }

    /// Closed-form `|D|` above which `C > 0`: `√((1-r)/(r|αβ|))/2`.
    pub fn entanglement_threshold(&self) -> Option<f64> {
        let (r, ab) = (self.r, self.overlap());
        if r == 0.0 || ab == 0.0 {
            return None;
        }
        let d = ((1.0 - r) / (r * ab)).sqrt() / 2.0;
        (d < 1.0).then_some(d)
    }

    /// Literal threshold `√((1-r)/|αβ|)/2`.
    pub fn variant_entanglement_threshold(&self) -> Option<f64> {
        let ab = self.overlap();
        if ab == 0.0 {
            return None;
        }
        let d = ((1.0 - self.r) / ab).sqrt() / 2.0;
        (d < 1.0).then_some(d)
    }

    /// Closed-form `|D|` above which `B > 2`: `(1 - r²)^{1/4} / √(2r|αβ|)`.
    pub fn nonlocality_threshold_closed_form(&self) -> Option<f64> {
        let (r, ab) = (self.r, self.overlap());
        if r == 0.0 || ab == 0.0 {
            return None;
        }
        let d = (1.0 - r * r).powf(0.25) / (2.0 * r * ab).sqrt();
        (d < 1.0).then_some(d)
    }

    /// Literal threshold `(1 - r²)^{1/4} / √(2|αβ|)`, without the purity.
    pub fn variant_nonlocality_threshold(&self) -> Option<f64> {
        let ab = self.overlap();
        if ab == 0.0 {
            return None;
        }
        let d = (1.0 - self.r * self.r).powf(0.25) / (2.0 * ab).sqrt();
        (d < 1.0).then_some(d)
    }
}

/// Initial-state family of a two-qubit run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum StateFamily {
    CompositeBell(CompositeBellParams),
    ExtendedWerner(ExtendedWernerParams),
}

impl StateFamily {
    pub fn initial_state(&self) -> TwoQubitState {
        match self {
            StateFamily::CompositeBell(p) => p.initial_state(),
            StateFamily::ExtendedWerner(p) => p.initial_state(),
        }
    }

    pub fn variant_concurrence(&self, abs_d: f64) -> f64 {
        match self {
            StateFamily::CompositeBell(p) => p.variant_concurrence(abs_d),
            StateFamily::ExtendedWerner(p) => p.variant_concurrence(abs_d),
        }
    }

    pub fn variant_bell(&self, abs_d: f64) -> f64 {
        match self {
            StateFamily::CompositeBell(p) => p.variant_bell(abs_d),
            StateFamily::ExtendedWerner(p) => p.variant_bell(abs_d),
        }
    }

    /// State reached when the coherence factor has modulus `abs_d`.
    pub fn state_at(&self, abs_d: f64) -> TwoQubitState {
        dephase_two(&self.initial_state(), Complex64::new(abs_d, 0.0))
    }
}

/// Sampled two-qubit measures along a time grid.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasureSeries {
    pub t: Vec<f64>,
    pub d: Vec<Complex64>,
    pub concurrence: Vec<f64>,
    pub bell: Vec<f64>,
    pub variant_concurrence: Vec<f64>,
    pub variant_bell: Vec<f64>,
}

impl MeasureSeries {
    pub fn len(&self) -> usize {
        self.t.len()
    }

    pub fn is_empty(&self) -> bool {
        self.t.is_empty()
    }
}

/// Evolves the family's initial state along `grid` and samples both the
/// matrix-derived measures and the literal closed forms.
pub fn family_series(family: &StateFamily, df: &DecoherenceFunction, grid: &[f64]) -> Result<MeasureSeries> {
    if let Some(&bad) = grid.iter().find(|t| !(t.is_finite() && **t >= 0.0)) {
        return Err(Error::InvalidTime(bad));
    }
    let rho0 = family.initial_state();
    let rows: Vec<(Complex64, f64, f64)> = grid
        .par_iter()
        .map(|&t| {
            let d = df.evaluate(t);
            let state = dephase_two(&rho0, d);
            (d, concurrence(&state), bell_chsh(&state))
        })
        .collect();
    let d: Vec<Complex64> = rows.iter().map(|r| r.0).collect();
    Ok(MeasureSeries {
        t: grid.to_vec(),
        variant_concurrence: d.iter().map(|v| family.variant_concurrence(v.norm())).collect(),
        variant_bell: d.iter().map(|v| family.variant_bell(v.norm())).collect(),
        concurrence: rows.iter().map(|r| r.1).collect(),
        bell: rows.iter().map(|r| r.2).collect(),
        d,
    })
}

pub fn cbs_series(params: &CompositeBellParams, df: &DecoherenceFunction, grid: &[f64]) -> Result<MeasureSeries> {
    family_series(&StateFamily::CompositeBell(*params), df, grid)
}

pub fn ews_series(params: &ExtendedWernerParams, df: &DecoherenceFunction, grid: &[f64]) -> Result<MeasureSeries> {
    family_series(&StateFamily::ExtendedWerner(*params), df, grid)
}

/// `|D|` thresholds; `None` means the property never holds for `|D| ≤ 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Thresholds {
    pub entanglement: Option<f64>,
    pub nonlocality: Option<f64>,
}

/// Entanglement threshold from the closed form and nonlocality threshold by
/// bisection on the matrix-derived Bell function.
pub fn thresholds(family: &StateFamily) -> Thresholds {
    let entanglement = match family {
        StateFamily::CompositeBell(p) => p.entanglement_threshold(),
        StateFamily::ExtendedWerner(p) => p.entanglement_threshold(),
    };
    let nonlocality = bisect_threshold(|d| chsh_violation_margin(&family.state_at(d)) > 0.0);
    Thresholds { entanglement, nonlocality }
}

/// Entanglement threshold by bisection on the matrix-derived concurrence.
pub fn entanglement_threshold_bisection(family: &StateFamily) -> Option<f64> {
    bisect_threshold(|d| concurrence(&family.state_at(d)) > 0.0)
}

/// Smallest `|D| ∈ [0, 1]` where a monotone predicate turns true.
pub fn bisect_threshold(holds: impl Fn(f64) -> bool) -> Option<f64> {
    if !holds(1.0) {
        return None;
    }
    if holds(0.0) {
        return Some(0.0);
    }
    let (mut lo, mut hi) = (0.0, 1.0);
    while hi - lo > THRESHOLD_TOLERANCE {
        let mid = 0.5 * (lo + hi);
        if holds(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Some(0.5 * (lo + hi))
}

/// Purity above which the initial Werner state is entangled, found by
/// bisection on the matrix-derived `C(0)`.
pub fn ews_entanglement_purity_boundary(params: &ExtendedWernerParams) -> Option<f64> {
    let entangled = |r: f64| concurrence(&params.with_r(r).expect("r in [0, 1]").initial_state()) > 0.0;
    if !entangled(1.0) {
        return None;
    }
    let (mut lo, mut hi) = (0.0, 1.0);
    while hi - lo > THRESHOLD_TOLERANCE {
        let mid = 0.5 * (lo + hi);
        if entangled(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Some(0.5 * (lo + hi))
}
