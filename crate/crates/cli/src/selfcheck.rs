//! Reduced oracle suite run by `dephasing selfcheck`.
//!
//! Every group is deterministic in the seed; the report carries no timings
//! so repeated runs print identical text.

use std::io::Write;

use dephasing_core::oracle::{finite_difference_rates, integrate_third_order};
use dephasing_core::single_qubit::{dephase, non_markovianity_single_auto, CMatrix2};
use dephasing_core::two_qubit::{
    bell_chsh_horodecki, bell_chsh_x, concurrence_wootters, concurrence_x, dephase_two, kraus_completeness,
    non_markovianity_two_auto, two_qubit_kraus, CMatrix4,
};
use dephasing_core::{
    build, markovian_limit, DecoherenceFunction, MaxNorm, NoiseParams, OdeConfig, SingleQubitKraus, SingleQubitState,
    TwoQubitState,
};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::commands::time_grid;
use crate::error::{CliError, Result};

pub struct GroupReport {
    pub name: &'static str,
    pub pass: bool,
    pub detail: String,
}

struct Checker {
    seed: u64,
    perturb: Option<f64>,
}

impl Checker {
    fn rng(&self, stream: u64) -> ChaCha8Rng {
        let mut r = ChaCha8Rng::seed_from_u64(self.seed);
        r.set_stream(stream);
        r
    }

    fn build(&self, p: &NoiseParams) -> DecoherenceFunction {
        let mut df = build(p);
        if let Some(delta) = self.perturb {
            df.perturb_residue(delta);
        }
        df
    }

    /// η, κ ∈ [0.2, 5], χ/η ∈ [0.1, 5], a0 ∈ [-1, 1].
    fn draws(&self, count: usize, stream: u64) -> Vec<NoiseParams> {
        let mut r = self.rng(stream);
        (0..count)
            .map(|_| {
                let eta = r.gen_range(0.2..=5.0);
                let kappa = r.gen_range(0.2..=5.0);
                let chi = eta * r.gen_range(0.1..=5.0);
                let a0 = r.gen_range(-1.0..=1.0);
                NoiseParams::new(eta, chi, kappa, a0).expect("drawn parameters are valid")
            })
            .collect()
    }

    fn residue_identities(&self) -> Result<(bool, String)> {
        let mut worst: f64 = 0.0;
        for p in self.draws(1000, 1) {
            let ids = self.build(&p).residue_identities();
            let chi = p.chi();
            worst = [
                (ids.sum_real - 1.0).norm(),
                ids.sum_imag.norm(),
                ids.moment_real.norm() / chi,
                (ids.moment_imag - p.a0() * chi).norm() / chi,
            ]
            .into_iter()
            .fold(worst, f64::max);
        }
        Ok((worst < 1e-9, format!("max relative residual {worst:.3e} over 1000 draws")))
    }

    fn rk4(&self) -> Result<(bool, String)> {
        let state = SingleQubitState::maximally_coherent();
        let mut worst: f64 = 0.0;
        for p in self.draws(100, 2) {
            let horizon = 20.0 / p.eta();
            let rate = p.eta() + p.chi() + p.kappa().unwrap_or(0.0);
            let cfg = OdeConfig::new((0.03 / rate).min(horizon / 100.0), horizon)?;
            let df = self.build(&p);
            let traj = integrate_third_order(&p, &state, &cfg)?;
            for (t, c) in traj.times.iter().zip(traj.coherence()) {
                worst = worst.max((2.0 * c - df.evaluate(*t)).norm());
            }
        }
        Ok((worst < 1e-6, format!("max |D - D_rk4| {worst:.3e} over 100 draws")))
    }

    fn rates(&self) -> Result<(bool, String)> {
        let mut worst: f64 = 0.0;
        let mut checked = 0usize;
        for p in self.draws(100, 3) {
            let df = self.build(&p);
            let scale = p.eta().max(p.chi());
            let fast = scale.max(p.kappa().unwrap_or(scale));
            for t in time_grid(20.0 / p.eta(), 41)?.into_iter().skip(1) {
                let d = df.evaluate(t).norm();
                if d <= 1e-3 {
                    continue;
                }
                let h = (1e-3 / fast).min(1e-3 * d / p.chi());
                let Ok(fd) = finite_difference_rates(&df, t, h) else { continue };
                let exact = df.rates(t)?;
                worst = worst.max((exact.phi - fd.phi).abs().max((exact.gamma - fd.gamma).abs()) / scale);
                checked += 1;
            }
        }
        Ok((worst < 1e-6, format!("max error / max(η,χ) {worst:.3e} at {checked} points")))
    }

    fn markov_limit(&self) -> Result<(bool, String)> {
        let mut worst: f64 = 0.0;
        for chi in [0.8, 3.0] {
            for a0 in [-0.5, 0.0, 0.5] {
                let finite = self.build(&NoiseParams::new(1.0, chi, 1e4, a0)?);
                let limit = NoiseParams::memoryless(1.0, chi, a0)?;
                for t in time_grid(10.0, 501)? {
                    worst = worst.max((finite.evaluate(t) - markovian_limit(&limit, t)?).norm());
                }
            }
        }
        Ok((worst < 1e-3, format!("max |D(κ/η=1e4) - D_memoryless| {worst:.3e}")))
    }

    fn channel(&self) -> Result<(bool, String)> {
        let mut r = self.rng(4);
        let (mut complete, mut herm, mut trace) = (0.0f64, 0.0f64, 0.0f64);
        let mut lowest = f64::INFINITY;
        for p in self.draws(50, 5) {
            let df = self.build(&p);
            let d = df.evaluate(r.gen_range(0.0..20.0 / p.eta()));
            let k1 = SingleQubitKraus::new(d);
            complete = complete.max((k1.completeness() - CMatrix2::identity()).max_norm());
            complete = complete.max((kraus_completeness(&two_qubit_kraus(d)) - CMatrix4::identity()).max_norm());

            let m = *dephase(&random_single_state(&mut r), d).matrix();
            herm = herm.max((m - m.adjoint()).max_norm());
            trace = trace.max((m.trace() - 1.0).norm());
            lowest = lowest.min(m.symmetric_eigenvalues().min());

            let e2 = dephase_two(&random_two_state(&mut r), d);
            let m = e2.matrix();
            herm = herm.max((m - m.adjoint()).max_norm());
            trace = trace.max((m.trace() - 1.0).norm());
            lowest = lowest.min(e2.eigenvalues().into_iter().fold(f64::INFINITY, f64::min));
        }
        let pass = complete < 1e-12 && herm < 1e-10 && trace < 1e-10 && lowest > -1e-10;
        Ok((
            pass,
            format!(
                "completeness {complete:.1e}, Hermiticity {herm:.1e}, trace {trace:.1e}, min eigenvalue {lowest:.2e}"
            ),
        ))
    }

    fn measures(&self) -> Result<(bool, String)> {
        let mut r = self.rng(6);
        let (mut dc, mut db) = (0.0f64, 0.0f64);
        for _ in 0..300 {
            let s = random_x_state(&mut r);
            dc = dc.max((concurrence_x(&s) - concurrence_wootters(&s)).abs());
            db = db.max((bell_chsh_x(&s) - bell_chsh_horodecki(&s)).abs());
        }
        Ok((dc < 1e-10 && db < 1e-10, format!("concurrence Δ {dc:.2e}, Bell Δ {db:.2e}")))
    }

    fn non_markovianity(&self) -> Result<(bool, String)> {
        let tol = 1e-9;
        let memoryless = non_markovianity_single_auto(&self.build(&NoiseParams::memoryless(1.0, 0.8, 0.3)?), tol)?;
        let mut asym: f64 = 0.0;
        let mut ordered = true;
        for kappa in [0.3, 1.0, 3.0] {
            for a0 in [0.25, 0.75] {
                let plus = self.build(&NoiseParams::new(1.0, 3.0, kappa, a0)?);
                let minus = self.build(&NoiseParams::new(1.0, 3.0, kappa, -a0)?);
                let ns = non_markovianity_single_auto(&plus, tol)?;
                asym = asym.max((ns - non_markovianity_single_auto(&minus, tol)?).abs());
                let nt = non_markovianity_two_auto(&plus, tol)?;
                if ns > 1e-8 && nt >= 2.0 * ns {
                    ordered = false;
                }
            }
        }
        let pass = memoryless == 0.0 && asym < 1e-6 && ordered;
        Ok((
            pass,
            format!("memoryless weak N {memoryless:.1e}, max |N(a0) - N(-a0)| {asym:.2e}, N_T < 2 N_S {ordered}"),
        ))
    }
}

fn gaussian(r: &mut ChaCha8Rng) -> Complex64 {
    Complex64::new(r.sample(StandardNormal), r.sample(StandardNormal))
}

fn random_single_state(r: &mut ChaCha8Rng) -> SingleQubitState {
    loop {
        let (x, y, z): (f64, f64, f64) = (r.gen_range(-1.0..1.0), r.gen_range(-1.0..1.0), r.gen_range(-1.0..1.0));
        if x * x + y * y + z * z <= 1.0 {
            return SingleQubitState::from_bloch(x, y, z).expect("inside the Bloch ball");
        }
    }
}

fn random_two_state(r: &mut ChaCha8Rng) -> TwoQubitState {
    let g = CMatrix4::from_fn(|_, _| gaussian(r));
    let rho = g * g.adjoint();
    let tr = rho.trace();
    TwoQubitState::new(rho / tr).expect("Ginibre states are valid")
}

fn random_x_state(r: &mut ChaCha8Rng) -> TwoQubitState {
    let w: Vec<f64> = (0..4).map(|_| -r.gen_range(f64::EPSILON..1.0f64).ln()).collect();
    let total: f64 = w.iter().sum();
    let mut rho = CMatrix4::zeros();
    for (i, wi) in w.iter().enumerate() {
        rho[(i, i)] = Complex64::new(wi / total, 0.0);
    }
    let p = |i: usize| w[i] / total;
    let outer =
        Complex64::from_polar(r.gen_range(0.0..=1.0) * (p(0) * p(3)).sqrt(), r.gen_range(0.0..std::f64::consts::TAU));
    let inner =
        Complex64::from_polar(r.gen_range(0.0..=1.0) * (p(1) * p(2)).sqrt(), r.gen_range(0.0..std::f64::consts::TAU));
    rho[(0, 3)] = outer;
    rho[(3, 0)] = outer.conj();
    rho[(1, 2)] = inner;
    rho[(2, 1)] = inner.conj();
    TwoQubitState::new(rho).expect("X state inside the positivity bounds")
}

type Group = fn(&Checker) -> Result<(bool, String)>;

const GROUPS: [(&str, Group); 7] = [
    ("residue-identities", Checker::residue_identities),
    ("rk4-oracle", Checker::rk4),
    ("rates", Checker::rates),
    ("markov-limit", Checker::markov_limit),
    ("channel", Checker::channel),
    ("measures", Checker::measures),
    ("non-markovianity", Checker::non_markovianity),
];

/// Runs every group; a numerical error inside a group counts as a failure.
pub fn groups(seed: u64, perturb: Option<f64>) -> Vec<GroupReport> {
    let c = Checker { seed, perturb };
    GROUPS
        .iter()
        .map(|(name, group)| {
            let (pass, detail) = group(&c).unwrap_or_else(|e| (false, format!("error: {e}")));
            GroupReport { name, pass, detail }
        })
        .collect()
}

/// Prints one line per group; fails if any group fails.
pub fn run(seed: u64, perturb: Option<f64>, out: &mut impl Write) -> Result<()> {
    let reports = groups(seed, perturb);
    let io = |e| CliError::io("<stdout>", e);
    for g in &reports {
        writeln!(out, "{} {}: {}", if g.pass { "PASS" } else { "FAIL" }, g.name, g.detail).map_err(io)?;
    }
    let failed = reports.iter().filter(|g| !g.pass).count();
    writeln!(out, "{} of {} groups passed (seed {seed})", reports.len() - failed, reports.len()).map_err(io)?;
    if failed == 0 {
        Ok(())
    } else {
        Err(CliError::SelfcheckFailed)
    }
}
