use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use dephasing_core::Memory;

/// Exact dephasing of qubits in nonequilibrium telegraph-noise environments.
///
/// Rates and times are in units of the switching rate `η` unless `--eta` is
/// changed, so `--chi` and `--kappa` may be given directly as `χ/η`, `κ/η`.
#[derive(Debug, Parser)]
#[command(name = "dephasing", version)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Sample D(t) and the dephasing rates on a uniform time grid.
    Decoherence(DecoherenceArgs),
    /// Trace-distance non-Markovianity over a (κ, a0) grid.
    NmMap(NmMapArgs),
    /// Concurrence and Bell function for a two-qubit initial-state family.
    Entanglement(EntanglementArgs),
    /// Run the built-in oracle suite and report one line per group.
    Selfcheck(SelfcheckArgs),
    /// Write the data behind a named figure panel.
    Preset(PresetArgs),
}

#[derive(Debug, Clone, Args)]
pub struct NoiseArgs {
    /// Switching rate η.
    #[arg(long, default_value_t = 1.0)]
    pub eta: f64,
    /// Coupling strength χ.
    #[arg(long)]
    pub chi: f64,
    /// Memory decay rate κ, or `inf` for the memoryless limit.
    #[arg(long, value_parser = parse_kappa, allow_hyphen_values = true)]
    pub kappa: Memory,
    /// Nonstationary parameter a0 ∈ [-1, 1].
    #[arg(long, allow_hyphen_values = true)]
    pub a0: f64,
}

#[derive(Debug, Clone, Args)]
pub struct GridArgs {
    /// Last sample time.
    #[arg(long, default_value_t = 20.0)]
    pub tmax: f64,
    /// Number of samples including t = 0 and t = tmax.
    #[arg(long, default_value_t = 401)]
    pub points: usize,
}

#[derive(Debug, Clone, Args)]
pub struct OutputArgs {
    /// Output CSV path; defaults to a file named after the command inside
    /// `$DEPHASING_OUT_DIR` (or the working directory).
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct DecoherenceArgs {
    #[command(flatten)]
    pub noise: NoiseArgs,
    #[command(flatten)]
    pub grid: GridArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Qubits {
    #[value(name = "1")]
    One,
    #[value(name = "2")]
    Two,
}

#[derive(Debug, Clone, Args)]
pub struct NmMapArgs {
    #[arg(long, default_value_t = 1.0)]
    pub eta: f64,
    #[arg(long)]
    pub chi: f64,
    /// Smallest κ of the logarithmic κ grid.
    #[arg(long, default_value_t = 0.1)]
    pub kappa_min: f64,
    #[arg(long, default_value_t = 100.0)]
    pub kappa_max: f64,
    #[arg(long, default_value_t = 13)]
    pub kappa_points: usize,
    /// Append a memoryless (`kappa = inf`) row.
    #[arg(long)]
    pub include_memoryless: bool,
    #[arg(long, default_value_t = -1.0, allow_hyphen_values = true)]
    pub a0_min: f64,
    #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
    pub a0_max: f64,
    #[arg(long, default_value_t = 21)]
    pub a0_points: usize,
    #[arg(long, value_enum, default_value_t = Qubits::One)]
    pub qubits: Qubits,
    /// Bound on the neglected tail of the non-Markovianity integral.
    #[arg(long, default_value_t = 1e-8)]
    pub tol: f64,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FamilyArg {
    /// Composite Bell states.
    Cbs,
    /// Extended Werner states.
    Ews,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SignArg {
    Plus,
    Minus,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum WernerArg {
    /// Built on `α|00⟩ + β|11⟩`.
    Psi,
    /// Built on `α|01⟩ + β|10⟩`.
    Phi,
}

#[derive(Debug, Clone, Args)]
pub struct EntanglementArgs {
    #[command(flatten)]
    pub noise: NoiseArgs,
    #[command(flatten)]
    pub grid: GridArgs,
    #[arg(long, value_enum)]
    pub family: FamilyArg,
    /// CBS weight c ∈ [-1, 1] (default 1).
    #[arg(long, allow_hyphen_values = true)]
    pub c: Option<f64>,
    #[arg(long, value_enum)]
    pub psi_sign: Option<SignArg>,
    #[arg(long, value_enum)]
    pub phi_sign: Option<SignArg>,
    /// EWS purity r ∈ [0, 1] (default 1).
    #[arg(long)]
    pub r: Option<f64>,
    /// EWS amplitude α, real (default 1/√2).
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: Option<f64>,
    /// EWS amplitude modulus |β| (default √(1 - α²)).
    #[arg(long)]
    pub beta: Option<f64>,
    /// Phase of β in radians.
    #[arg(long, allow_hyphen_values = true)]
    pub beta_phase: Option<f64>,
    #[arg(long, value_enum)]
    pub werner: Option<WernerArg>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct SelfcheckArgs {
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Shift one residue of every decoherence function by this amount.
    #[arg(long, hide = true, allow_hyphen_values = true)]
    pub perturb_residue: Option<f64>,
}

#[derive(Debug, Clone, Args)]
pub struct PresetArgs {
    /// Panel name, `fig1a` through `fig8b`.
    pub name: String,
    #[arg(long, env = "DEPHASING_OUT_DIR", default_value = ".")]
    pub out_dir: PathBuf,
}

fn parse_kappa(s: &str) -> Result<Memory, String> {
    match s.trim().to_ascii_lowercase().as_str() {
        "inf" | "+inf" | "infinity" => Ok(Memory::Memoryless),
        other => {
            let k: f64 = other.parse().map_err(|e| format!("{e}"))?;
            if k.is_finite() && k > 0.0 {
                Ok(Memory::Finite(k))
            } else {
                Err(format!("κ must be positive or `inf`, got {s}"))
            }
        }
    }
}
