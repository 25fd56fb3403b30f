//! Named presets reproducing the data behind each figure panel.
//!
//! Figures 1 to 4 split panels by coupling (a: χ/η = 0.8, b: χ/η = 3).
//! Figures 5 to 8 split panels by quantity (a: concurrence, b: Bell
//! function) and show both couplings in each, so `figNa` and `figNb` write
//! the same files.

use std::f64::consts::FRAC_1_SQRT_2;
use std::path::{Path, PathBuf};

use dephasing_core::two_qubit::{Sign, StateFamily};
use dephasing_core::{CompositeBellParams, ExtendedWernerParams, Memory, WernerFamily};
use num_complex::Complex64;
use serde_json::json;

use crate::args::Qubits;
use crate::commands::{log_grid, noise_params, time_grid, write_decoherence, write_entanglement, write_nm_map, NmGrid};
use crate::error::{CliError, Result};
use crate::output::{ensure_dir, write_json};

pub const NAMES: [&str; 16] = [
    "fig1a", "fig1b", "fig2a", "fig2b", "fig3a", "fig3b", "fig4a", "fig4b", "fig5a", "fig5b", "fig6a", "fig6b",
    "fig7a", "fig7b", "fig8a", "fig8b",
];

const WEAK: f64 = 0.8;
const STRONG: f64 = 3.0;
const ETA: f64 = 1.0;
const KAPPA: f64 = 1.0;
const ABS_A0: f64 = 0.5;

/// Curves drawn per panel where the text only says "different values".
const A0_CURVES: [f64; 3] = [0.0, 0.5, 1.0];
const KAPPA_CURVES: [Memory; 4] = [Memory::Finite(0.1), Memory::Finite(1.0), Memory::Finite(10.0), Memory::Memoryless];

const TMAX: f64 = 20.0;
const POINTS: usize = 801;

const MAP_KAPPA_MIN: f64 = 0.1;
const MAP_KAPPA_MAX: f64 = 100.0;
const MAP_KAPPA_POINTS: usize = 13;
const MAP_A0_POINTS: usize = 21;
const MAP_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy)]
enum Sweep {
    A0,
    Kappa,
}

#[derive(Debug, Clone, Copy)]
enum Panel {
    Map { chi: f64, qubits: Qubits, memoryless_row: bool },
    Decoherence { chi: f64, sweep: Sweep },
    Entanglement { family: StateFamily, sweep: Sweep },
}

fn cbs() -> StateFamily {
    StateFamily::CompositeBell(CompositeBellParams::new(1.0, Sign::Plus, Sign::Plus).expect("c = 1 is valid"))
}

fn ews() -> StateFamily {
    let a = Complex64::new(FRAC_1_SQRT_2, 0.0);
    StateFamily::ExtendedWerner(ExtendedWernerParams::new(1.0, a, a, WernerFamily::Psi).expect("normalized"))
}

fn panel(name: &str) -> Option<Panel> {
    let (fig, sub) = name.strip_prefix("fig")?.split_at_checked(1)?;
    let chi = match sub {
        "a" => WEAK,
        "b" => STRONG,
        _ => return None,
    };
    Some(match fig {
        "1" => Panel::Map { chi, qubits: Qubits::One, memoryless_row: sub == "b" },
        "2" => Panel::Decoherence { chi, sweep: Sweep::A0 },
        "3" => Panel::Decoherence { chi, sweep: Sweep::Kappa },
        "4" => Panel::Map { chi, qubits: Qubits::Two, memoryless_row: sub == "b" },
        "5" => Panel::Entanglement { family: cbs(), sweep: Sweep::A0 },
        "6" => Panel::Entanglement { family: cbs(), sweep: Sweep::Kappa },
        "7" => Panel::Entanglement { family: ews(), sweep: Sweep::A0 },
        "8" => Panel::Entanglement { family: ews(), sweep: Sweep::Kappa },
        _ => return None,
    })
}

fn label(x: f64) -> String {
    format!("{x}")
}

fn memory_label(m: Memory) -> String {
    match m {
        Memory::Finite(k) => label(k),
        Memory::Memoryless => "inf".into(),
    }
}

fn memory_value(m: Memory) -> serde_json::Value {
    match m {
        Memory::Finite(k) => json!(k),
        Memory::Memoryless => json!("inf"),
    }
}

/// `(κ, a0)` pairs of a curve sweep.
fn curves(sweep: Sweep) -> Vec<(Memory, f64)> {
    match sweep {
        Sweep::A0 => A0_CURVES.iter().map(|&a| (Memory::Finite(KAPPA), a)).collect(),
        Sweep::Kappa => KAPPA_CURVES.iter().map(|&k| (k, ABS_A0)).collect(),
    }
}

/// Writes every file of the preset into `dir` and returns their paths; a
/// `<name>.json` manifest lists the runs.
pub fn run(name: &str, dir: &Path) -> Result<Vec<PathBuf>> {
    let panel = panel(name).ok_or_else(|| {
        CliError::Validation(format!("unknown preset `{name}`; expected one of {}", NAMES.join(", ")))
    })?;
    ensure_dir(dir)?;
    let mut files = Vec::new();
    let mut runs = Vec::new();
    match panel {
        Panel::Map { chi, qubits, memoryless_row } => {
            let mut kappas: Vec<Memory> =
                log_grid(MAP_KAPPA_MIN, MAP_KAPPA_MAX, MAP_KAPPA_POINTS)?.into_iter().map(Memory::Finite).collect();
            if memoryless_row {
                kappas.push(Memory::Memoryless);
            }
            let a0s = crate::commands::linear_grid(-1.0, 1.0, MAP_A0_POINTS)?;
            let grid = NmGrid { eta: ETA, chi, kappas, a0s, qubits, tol: MAP_TOL };
            let q = if qubits == Qubits::One { 1 } else { 2 };
            let out = dir.join(format!("{name}_nm_map_qubits_{q}_chi_{}.csv", label(chi)));
            write_nm_map(&grid, &out)?;
            runs.push(json!({
                "file": file_name(&out),
                "eta": ETA,
                "chi": chi,
                "qubits": q,
                "kappa_log_grid": [MAP_KAPPA_MIN, MAP_KAPPA_MAX, MAP_KAPPA_POINTS],
                "memoryless_row": memoryless_row,
                "a0_grid": [-1.0, 1.0, MAP_A0_POINTS],
                "tol": MAP_TOL,
            }));
            files.push(out);
        }
        Panel::Decoherence { chi, sweep } => {
            let grid = time_grid(TMAX, POINTS)?;
            for (kappa, a0) in curves(sweep) {
                let params = noise_params(ETA, chi, kappa, a0)?;
                let out =
                    dir.join(format!("{name}_chi_{}_kappa_{}_a0_{}.csv", label(chi), memory_label(kappa), label(a0)));
                write_decoherence(&params, &grid, &out)?;
                runs.push(run_json(&out, chi, kappa, a0));
                files.push(out);
            }
        }
        Panel::Entanglement { family, sweep } => {
            let grid = time_grid(TMAX, POINTS)?;
            let tag = match family {
                StateFamily::CompositeBell(_) => "cbs",
                StateFamily::ExtendedWerner(_) => "ews",
            };
            for chi in [WEAK, STRONG] {
                for (kappa, a0) in curves(sweep) {
                    let params = noise_params(ETA, chi, kappa, a0)?;
                    let out = dir.join(format!(
                        "{name}_{tag}_chi_{}_kappa_{}_a0_{}.csv",
                        label(chi),
                        memory_label(kappa),
                        label(a0)
                    ));
                    let sidecar = write_entanglement(&params, &family, &grid, None, &out)?;
                    runs.push(run_json(&out, chi, kappa, a0));
                    files.push(out);
                    files.push(sidecar);
                }
            }
        }
    }
    let manifest = dir.join(format!("{name}.json"));
    write_json(&manifest, &json!({ "preset": name, "tmax": TMAX, "points": POINTS, "runs": runs }))?;
    files.push(manifest);
    Ok(files)
}

fn file_name(p: &Path) -> String {
    p.file_name().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default()
}

fn run_json(out: &Path, chi: f64, kappa: Memory, a0: f64) -> serde_json::Value {
    json!({ "file": file_name(out), "eta": ETA, "chi": chi, "kappa": memory_value(kappa), "a0": a0 })
}
