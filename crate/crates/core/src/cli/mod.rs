//! Command-line front end: presets, sweeps, regime maps, critical spacings,
//! trapping and trajectories.
//!
//! Every frequency on the command line is an ordinary frequency in GHz,
//! lifetimes are in ns and the temperature is in mK. Conversion to rad/ns
//! happens once, in [`config::resolve`].
//!
//! A `--config FILE` JSON object may carry any flag by its long name
//! (`{"preset": "charge", "wq-ghz": 3.43}`); flags given on the command line
//! win over the file.

mod commands;
pub mod config;
pub mod output;
pub mod presets;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

pub use config::EffectiveParams;

#[derive(Debug, Parser)]
#[command(
    name = "dressed-eit",
    version,
    about = "EIT/EIA spectra of a resonator-dressed superconducting qubit"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// χ′ and χ″ against probe detuning at one qubit spacing.
    Spectrum(SpectrumArgs),
    /// Long-format two-axis sweep of χ or of the regime.
    Map(MapArgs),
    /// Analytic critical spacings and the numeric switching point.
    Critical(CriticalArgs),
    /// Trapping spacing and the excited population reached from the dark state.
    Trap(TrapArgs),
    /// Density-matrix trajectory.
    Bloch(BlochArgs),
    /// Print the preset table.
    Presets(PresetsArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Normalize {
    #[default]
    None,
    Max,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SplitArg {
    /// κ_rel = r₁.
    #[default]
    Total,
    /// κ_rel = r₁/2.
    Down,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum InitialArg {
    #[default]
    Ground,
    Dark,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FrameArg {
    Lab,
    #[default]
    Rotating,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum, Serialize, Deserialize)]
pub enum MapOutput {
    #[value(name = "chi_re")]
    #[serde(rename = "chi_re")]
    ChiRe,
    #[default]
    #[value(name = "chi_im")]
    #[serde(rename = "chi_im")]
    ChiIm,
    #[value(name = "regime")]
    #[serde(rename = "regime")]
    Regime,
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", default)]
pub struct CommonArgs {
    /// charge | phase | flux (default charge).
    #[arg(long)]
    pub preset: Option<String>,
    /// JSON file with flag values; command-line flags take precedence.
    #[arg(long)]
    #[serde(skip)]
    pub config: Option<PathBuf>,
    /// Output file (default stdout).
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    #[arg(long, value_enum)]
    pub normalize: Option<Normalize>,
    /// Worker threads for sweeps (default: all cores).
    #[arg(long)]
    pub threads: Option<usize>,
}

/// Circuit, noise and drive overrides. Frequencies in GHz.
#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", default)]
pub struct ParamArgs {
    /// Resonator frequency ω₀/2π.
    #[arg(long)]
    pub w0_ghz: Option<f64>,
    /// Qubit-resonator coupling η/2π.
    #[arg(long)]
    pub eta_ghz: Option<f64>,
    /// Relaxation time 1/r₁.
    #[arg(long)]
    pub t1_ns: Option<f64>,
    /// Decoherence time 1/r₂.
    #[arg(long)]
    pub t2_ns: Option<f64>,
    /// Bath temperature.
    #[arg(long)]
    pub temp_mk: Option<f64>,
    /// Control Rabi amplitude Ω_c/2π.
    #[arg(long)]
    pub wc_rabi_ghz: Option<f64>,
    /// Probe Rabi amplitude Ω_p/2π.
    #[arg(long)]
    pub wp_rabi_ghz: Option<f64>,
    /// Qubit spacing ω_q/2π (default ω₀/4π, resonance).
    #[arg(long)]
    pub wq_ghz: Option<f64>,
    /// |d_μ1|²/ε₀, overall susceptibility scale.
    #[arg(long)]
    pub dipole_factor: Option<f64>,
    /// How r₁ maps onto the relaxation prefactor.
    #[arg(long, value_enum)]
    pub relaxation_split: Option<SplitArg>,
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", default)]
pub struct SpectrumArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub common: CommonArgs,
    #[command(flatten)]
    #[serde(flatten)]
    pub params: ParamArgs,
    /// Lower end of the detuning sweep (default: preset range).
    #[arg(long, allow_hyphen_values = true)]
    pub delta_min_ghz: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub delta_max_ghz: Option<f64>,
    /// Number of detuning samples (default 401).
    #[arg(long)]
    pub points: Option<usize>,
    /// Report detuning divided by this value (e.g. 0.025 for Δ′/2π).
    #[arg(long)]
    pub delta_scale_ghz: Option<f64>,
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", default)]
pub struct MapArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub common: CommonArgs,
    #[command(flatten)]
    #[serde(flatten)]
    pub params: ParamArgs,
    /// Outer axis `name:min:max:points`, name ∈ {delta, omega_q, omega_c_rabi}, GHz.
    #[arg(long, allow_hyphen_values = true)]
    pub axis1: Option<String>,
    /// Inner axis, same syntax.
    #[arg(long, allow_hyphen_values = true)]
    pub axis2: Option<String>,
    /// Probe detuning when neither axis is `delta`.
    #[arg(long, allow_hyphen_values = true)]
    pub delta_ghz: Option<f64>,
    #[arg(long, value_enum)]
    pub output: Option<MapOutput>,
    /// Divide `delta` axis values by this on output.
    #[arg(long)]
    pub delta_scale_ghz: Option<f64>,
    /// Divide `omega_q` axis values by this on output.
    #[arg(long)]
    pub wq_scale_ghz: Option<f64>,
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", default)]
pub struct CriticalArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub common: CommonArgs,
    #[command(flatten)]
    #[serde(flatten)]
    pub params: ParamArgs,
    /// Skip the numeric bisection.
    #[arg(long)]
    pub analytic_only: bool,
    /// Bisection bracket (default [ω₀/2 − 3η, ω₀/2]).
    #[arg(long)]
    pub bracket_lo_ghz: Option<f64>,
    #[arg(long)]
    pub bracket_hi_ghz: Option<f64>,
    /// Bisection tolerance (default 1e-5 GHz).
    #[arg(long)]
    pub tol_ghz: Option<f64>,
    /// Grid points for regime detection (default 4001).
    #[arg(long)]
    pub points: Option<usize>,
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", default)]
pub struct TrapArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub common: CommonArgs,
    #[command(flatten)]
    #[serde(flatten)]
    pub params: ParamArgs,
    /// Integration horizon (default 10³/Ω_p).
    #[arg(long)]
    pub t_max_ns: Option<f64>,
    /// Step (default 0.05 over the fastest scale).
    #[arg(long)]
    pub dt_ns: Option<f64>,
    #[arg(long, value_enum)]
    pub initial: Option<InitialArg>,
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", default)]
pub struct BlochArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub common: CommonArgs,
    #[command(flatten)]
    #[serde(flatten)]
    pub params: ParamArgs,
    /// Probe detuning Δ/2π.
    #[arg(long, allow_hyphen_values = true)]
    pub delta_ghz: Option<f64>,
    /// Integration horizon (default 1000 ns).
    #[arg(long)]
    pub t_max_ns: Option<f64>,
    /// Step (default 0.05 over the fastest scale).
    #[arg(long)]
    pub dt_ns: Option<f64>,
    /// Steps per recorded row (default: at most ~2000 rows).
    #[arg(long)]
    pub stride: Option<usize>,
    #[arg(long, value_enum)]
    pub initial: Option<InitialArg>,
    #[arg(long, value_enum)]
    pub frame: Option<FrameArg>,
    /// Set Γ_μ = Γ_ν = Γ₁ = 0.
    #[arg(long)]
    pub no_population_decay: bool,
    /// Set every decay rate to zero before applying the overrides below.
    #[arg(long)]
    pub zero_rates: bool,
    /// Rate overrides, 1/ns.
    #[arg(long)]
    pub gamma_mu: Option<f64>,
    #[arg(long)]
    pub gamma_nu: Option<f64>,
    #[arg(long)]
    pub gamma_1: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub gamma_mu1: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub gamma_nu1: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub gamma_munu: Option<f64>,
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", default)]
pub struct PresetsArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub common: CommonArgs,
}

/// Failure with the process exit code it maps to.
#[derive(Debug, Clone, PartialEq)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

pub const EXIT_INVALID: i32 = 2;
pub const EXIT_NO_BRACKET: i32 = 3;
pub const EXIT_STABILITY: i32 = 4;

impl CliError {
    pub fn invalid(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_INVALID,
            message: message.into(),
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.message)
    }
}

impl std::error::Error for CliError {}

impl From<crate::Error> for CliError {
    fn from(e: crate::Error) -> Self {
        let code = match e {
            crate::Error::StabilityGuard { .. } => EXIT_STABILITY,
            crate::Error::NoBracket { .. } => EXIT_NO_BRACKET,
            _ => EXIT_INVALID,
        };
        Self {
            code,
            message: e.to_string(),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        Self {
            code: 1,
            message: format!("io: {e}"),
        }
    }
}

/// Run one parsed command line.
pub fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Spectrum(a) => commands::spectrum(config::with_config(a)?),
        Command::Map(a) => commands::map(config::with_config(a)?),
        Command::Critical(a) => commands::critical(config::with_config(a)?),
        Command::Trap(a) => commands::trap(config::with_config(a)?),
        Command::Bloch(a) => commands::bloch(config::with_config(a)?),
        Command::Presets(a) => commands::presets(config::with_config(a)?),
    }
}
