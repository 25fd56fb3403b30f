use std::f64::consts::FRAC_1_SQRT_2;
use std::path::PathBuf;

use dephasing_core::single_qubit::{non_markovianity_single_auto, scaled_non_markovianity};
use dephasing_core::two_qubit::{family_series, non_markovianity_two_auto, thresholds, Sign, StateFamily};
use dephasing_core::{
    build, CompositeBellParams, DecoherenceFunction, Error, ExtendedWernerParams, Memory, NoiseParams, WernerFamily,
};
use num_complex::Complex64;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::args::{
    DecoherenceArgs, EntanglementArgs, FamilyArg, GridArgs, NmMapArgs, NoiseArgs, Qubits, SignArg, WernerArg,
};
use crate::error::{CliError, Result};
use crate::output::{num, resolve_out, sidecar_path, write_csv, write_json};

pub const DECOHERENCE_HEADER: [&str; 6] = ["t", "abs_D", "re_D", "im_D", "phi", "gamma"];
pub const NM_MAP_HEADER: [&str; 4] = ["kappa", "a0", "N", "N_scaled"];
pub const ENTANGLEMENT_HEADER: [&str; 6] =
    ["t", "abs_D", "concurrence", "bell", "paper_variant_concurrence", "paper_variant_bell"];

/// Rates are left blank where `|D|` is this close to zero.
pub const RATE_BLANK_BELOW: f64 = 1e-12;

pub fn noise_params(eta: f64, chi: f64, memory: Memory, a0: f64) -> Result<NoiseParams> {
    let p = match memory {
        Memory::Finite(kappa) => NoiseParams::new(eta, chi, kappa, a0),
        Memory::Memoryless => NoiseParams::memoryless(eta, chi, a0),
    };
    Ok(p?)
}

impl NoiseArgs {
    pub fn params(&self) -> Result<NoiseParams> {
        noise_params(self.eta, self.chi, self.kappa, self.a0)
    }
}

pub fn time_grid(tmax: f64, points: usize) -> Result<Vec<f64>> {
    if !(tmax.is_finite() && tmax > 0.0) {
        return Err(CliError::Validation(format!("--tmax must be positive and finite, got {tmax}")));
    }
    if points < 2 {
        return Err(CliError::Validation(format!("--points must be at least 2, got {points}")));
    }
    let last = (points - 1) as f64;
    Ok((0..points).map(|i| tmax * i as f64 / last).collect())
}

impl GridArgs {
    pub fn times(&self) -> Result<Vec<f64>> {
        time_grid(self.tmax, self.points)
    }
}

fn kappa_label(memory: Memory) -> String {
    match memory {
        Memory::Finite(k) => num(k),
        Memory::Memoryless => "inf".into(),
    }
}

fn kappa_json(memory: Memory) -> Value {
    match memory {
        Memory::Finite(k) => json!(k),
        Memory::Memoryless => json!("inf"),
    }
}

fn threshold_json(th: Option<f64>) -> Value {
    th.map_or_else(|| json!("never"), |d| json!(d))
}

pub fn decoherence_rows(df: &DecoherenceFunction, grid: &[f64]) -> Result<Vec<Vec<String>>> {
    grid.par_iter()
        .map(|&t| {
            let d = df.evaluate(t);
            let abs = d.norm();
            let (phi, gamma) = if abs < RATE_BLANK_BELOW {
                (String::new(), String::new())
            } else {
                match df.rates(t) {
                    Ok(r) => (num(r.phi), num(r.gamma)),
                    Err(Error::CoherenceZero { .. }) => (String::new(), String::new()),
                    Err(e) => return Err(e.into()),
                }
            };
            Ok(vec![num(t), num(abs), num(d.re), num(d.im), phi, gamma])
        })
        .collect()
}

pub fn write_decoherence(params: &NoiseParams, grid: &[f64], out: &std::path::Path) -> Result<()> {
    let df = build(params);
    let rows = decoherence_rows(&df, grid)?;
    write_csv(out, &DECOHERENCE_HEADER, &rows)
}

pub fn decoherence(args: &DecoherenceArgs) -> Result<PathBuf> {
    let params = args.noise.params()?;
    let grid = args.grid.times()?;
    let out = resolve_out(args.output.out.as_deref(), "decoherence.csv");
    write_decoherence(&params, &grid, &out)?;
    Ok(out)
}

/// Product grid of a non-Markovianity map.
#[derive(Debug, Clone)]
pub struct NmGrid {
    pub eta: f64,
    pub chi: f64,
    pub kappas: Vec<Memory>,
    pub a0s: Vec<f64>,
    pub qubits: Qubits,
    pub tol: f64,
}

pub fn log_grid(min: f64, max: f64, points: usize) -> Result<Vec<f64>> {
    if !(min.is_finite() && max.is_finite() && min > 0.0 && max > min) {
        return Err(CliError::Validation(format!("κ range must satisfy 0 < min < max, got [{min}, {max}]")));
    }
    if points < 2 {
        return Err(CliError::Validation(format!("--kappa-points must be at least 2, got {points}")));
    }
    let (lo, hi) = (min.ln(), max.ln());
    let last = (points - 1) as f64;
    Ok((0..points)
        .map(|i| match i {
            0 => min,
            _ if i == points - 1 => max,
            _ => (lo + (hi - lo) * i as f64 / last).exp(),
        })
        .collect())
}

/// Uniform grid that is exactly symmetric when `min = -max`.
pub fn linear_grid(min: f64, max: f64, points: usize) -> Result<Vec<f64>> {
    if !(min.is_finite() && max.is_finite() && max > min) {
        return Err(CliError::Validation(format!("a0 range must satisfy min < max, got [{min}, {max}]")));
    }
    if points < 2 {
        return Err(CliError::Validation(format!("--a0-points must be at least 2, got {points}")));
    }
    let last = (points - 1) as f64;
    let (mid, half) = ((min + max) / 2.0, (max - min) / 2.0);
    Ok((0..points).map(|i| mid + half * (2.0 * i as f64 - last) / last).collect())
}

impl NmMapArgs {
    pub fn grid(&self) -> Result<NmGrid> {
        let mut kappas: Vec<Memory> =
            log_grid(self.kappa_min, self.kappa_max, self.kappa_points)?.into_iter().map(Memory::Finite).collect();
        if self.include_memoryless {
            kappas.push(Memory::Memoryless);
        }
        if !(self.tol.is_finite() && self.tol > 0.0) {
            return Err(CliError::Validation(format!("--tol must be positive, got {}", self.tol)));
        }
        Ok(NmGrid {
            eta: self.eta,
            chi: self.chi,
            kappas,
            a0s: linear_grid(self.a0_min, self.a0_max, self.a0_points)?,
            qubits: self.qubits,
            tol: self.tol,
        })
    }
}

pub fn nm_map_rows(grid: &NmGrid) -> Result<Vec<Vec<String>>> {
    let cells: Vec<(Memory, f64)> = grid.kappas.iter().flat_map(|&k| grid.a0s.iter().map(move |&a| (k, a))).collect();
    cells
        .par_iter()
        .map(|&(kappa, a0)| {
            let df = build(&noise_params(grid.eta, grid.chi, kappa, a0)?);
            let n = match grid.qubits {
                Qubits::One => non_markovianity_single_auto(&df, grid.tol)?,
                Qubits::Two => non_markovianity_two_auto(&df, grid.tol)?,
            };
            Ok(vec![kappa_label(kappa), num(a0), num(n), num(scaled_non_markovianity(n)?)])
        })
        .collect()
}

pub fn write_nm_map(grid: &NmGrid, out: &std::path::Path) -> Result<()> {
    let rows = nm_map_rows(grid)?;
    write_csv(out, &NM_MAP_HEADER, &rows)
}

pub fn nm_map(args: &NmMapArgs) -> Result<PathBuf> {
    let grid = args.grid()?;
    let out = resolve_out(args.output.out.as_deref(), "nm_map.csv");
    write_nm_map(&grid, &out)?;
    Ok(out)
}

fn sign(s: Option<SignArg>) -> Sign {
    match s.unwrap_or(SignArg::Plus) {
        SignArg::Plus => Sign::Plus,
        SignArg::Minus => Sign::Minus,
    }
}

fn sign_name(s: Option<SignArg>) -> &'static str {
    match s.unwrap_or(SignArg::Plus) {
        SignArg::Plus => "plus",
        SignArg::Minus => "minus",
    }
}

impl EntanglementArgs {
    pub fn family(&self) -> Result<StateFamily> {
        let reject = |present: &[(&str, bool)], family: &str| -> Result<()> {
            match present.iter().find(|(_, set)| *set) {
                Some((flag, _)) => Err(CliError::Validation(format!("--{flag} does not apply to --family {family}"))),
                None => Ok(()),
            }
        };
        match self.family {
            FamilyArg::Cbs => {
                reject(
                    &[
                        ("r", self.r.is_some()),
                        ("alpha", self.alpha.is_some()),
                        ("beta", self.beta.is_some()),
                        ("beta-phase", self.beta_phase.is_some()),
                        ("werner", self.werner.is_some()),
                    ],
                    "cbs",
                )?;
                let p = CompositeBellParams::new(self.c.unwrap_or(1.0), sign(self.psi_sign), sign(self.phi_sign))?;
                Ok(StateFamily::CompositeBell(p))
            }
            FamilyArg::Ews => {
                reject(
                    &[
                        ("c", self.c.is_some()),
                        ("psi-sign", self.psi_sign.is_some()),
                        ("phi-sign", self.phi_sign.is_some()),
                    ],
                    "ews",
                )?;
                let alpha = self.alpha.unwrap_or(FRAC_1_SQRT_2);
                if alpha.abs() > 1.0 {
                    return Err(CliError::Validation(format!("--alpha must lie in [-1, 1], got {alpha}")));
                }
                let beta = self.beta.unwrap_or_else(|| (1.0 - alpha * alpha).max(0.0).sqrt());
                let beta = Complex64::from_polar(beta, self.beta_phase.unwrap_or(0.0));
                let werner = match self.werner.unwrap_or(WernerArg::Psi) {
                    WernerArg::Psi => WernerFamily::Psi,
                    WernerArg::Phi => WernerFamily::Phi,
                };
                let p = ExtendedWernerParams::new(self.r.unwrap_or(1.0), Complex64::new(alpha, 0.0), beta, werner)?;
                Ok(StateFamily::ExtendedWerner(p))
            }
        }
    }

    fn family_json(&self, family: &StateFamily) -> Value {
        match family {
            StateFamily::CompositeBell(p) => json!({
                "name": "cbs",
                "c": p.c(),
                "psi_sign": sign_name(self.psi_sign),
                "phi_sign": sign_name(self.phi_sign),
            }),
            StateFamily::ExtendedWerner(p) => ews_json(p),
        }
    }
}

fn ews_json(p: &ExtendedWernerParams) -> Value {
    json!({
        "name": "ews",
        "r": p.r(),
        "alpha": [p.alpha().re, p.alpha().im],
        "beta": [p.beta().re, p.beta().im],
        "werner": match p.family() { WernerFamily::Psi => "psi", WernerFamily::Phi => "phi" },
    })
}

fn family_json_default(family: &StateFamily) -> Value {
    match family {
        StateFamily::CompositeBell(p) => json!({ "name": "cbs", "c": p.c() }),
        StateFamily::ExtendedWerner(p) => ews_json(p),
    }
}

/// Threshold and provenance block of the sidecar.
pub fn entanglement_metadata(params: &NoiseParams, family: &StateFamily, grid: &[f64], family_info: Value) -> Value {
    let th = thresholds(family);
    let (variant, extra, notes) = match family {
        StateFamily::CompositeBell(p) => (
            json!({
                "entanglement_abs_d": threshold_json(p.entanglement_threshold()),
                "nonlocality_abs_d": threshold_json(p.variant_nonlocality_threshold()),
            }),
            json!({}),
            json!([
                "paper_variant_concurrence carries an extra overall factor 2 relative to the density-matrix value",
                "paper_variant_bell is 4*sqrt(|D|^4 + c^2), twice the density-matrix value",
                "variant nonlocality threshold (1/2 - c^2)^(1/4) differs from the matrix-derived one",
            ]),
        ),
        StateFamily::ExtendedWerner(p) => (
            json!({
                "entanglement_abs_d": threshold_json(p.variant_entanglement_threshold()),
                "nonlocality_abs_d": threshold_json(p.variant_nonlocality_threshold()),
            }),
            json!({
                "classical_concurrence_threshold": p.classical_concurrence_threshold(),
                "entanglement_purity_boundary": 1.0 / (4.0 * p.overlap() + 1.0),
            }),
            json!([
                "paper_variant_concurrence omits the purity r in the first term; equal to the matrix value at r = 1",
                "variant thresholds omit r in the same places; equal to the matrix-derived thresholds at r = 1",
            ]),
        ),
    };
    json!({
        "command": "entanglement",
        "version": env!("CARGO_PKG_VERSION"),
        "noise": {
            "eta": params.eta(),
            "chi": params.chi(),
            "kappa": kappa_json(params.memory()),
            "a0": params.a0(),
        },
        "grid": {
            "tmax": grid.last().copied().unwrap_or(0.0),
            "points": grid.len(),
        },
        "family": family_info,
        "thresholds": {
            "entanglement_abs_d": threshold_json(th.entanglement),
            "nonlocality_abs_d": threshold_json(th.nonlocality),
        },
        "paper_variant_thresholds": variant,
        "family_constants": extra,
        "notes": notes,
    })
}

pub fn write_entanglement(
    params: &NoiseParams,
    family: &StateFamily,
    grid: &[f64],
    family_info: Option<Value>,
    out: &std::path::Path,
) -> Result<PathBuf> {
    let df = build(params);
    let series = family_series(family, &df, grid)?;
    let rows: Vec<Vec<String>> = (0..series.len())
        .map(|i| {
            vec![
                num(series.t[i]),
                num(series.d[i].norm()),
                num(series.concurrence[i]),
                num(series.bell[i]),
                num(series.variant_concurrence[i]),
                num(series.variant_bell[i]),
            ]
        })
        .collect();
    write_csv(out, &ENTANGLEMENT_HEADER, &rows)?;
    let info = family_info.unwrap_or_else(|| family_json_default(family));
    let sidecar = sidecar_path(out);
    write_json(&sidecar, &entanglement_metadata(params, family, grid, info))?;
    Ok(sidecar)
}

pub fn entanglement(args: &EntanglementArgs) -> Result<PathBuf> {
    let params = args.noise.params()?;
    let family = args.family()?;
    let grid = args.grid.times()?;
    let out = resolve_out(args.output.out.as_deref(), "entanglement.csv");
    write_entanglement(&params, &family, &grid, Some(args.family_json(&family)), &out)?;
    Ok(out)
}
