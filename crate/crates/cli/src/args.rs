use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::output::Format;

/// Fluctuation estimators, uncertainty-relation audits and measurement
/// channels on grid-sampled quantum states.
#[derive(Debug, Parser)]
#[command(name = "qfluct", version, args_override_self = true)]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct GlobalArgs {
    /// Grid nodes: `N`, or `NxM` for sphere and plane grids.
    #[arg(long, global = true)]
    pub nodes: Option<Nodes>,
    #[arg(long, global = true, default_value_t = qfluct_core::DEFAULT_HBAR)]
    pub hbar: f64,
    /// Verdict and crosscheck tolerance; sweeps use it as their threshold.
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// JSON file mirroring these flags, with a "command" key.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Nodes {
    One(usize),
    Two(usize, usize),
}

impl FromStr for Nodes {
    type Err = String;

    fn from_str(s: &str) -> Result<Nodes, String> {
        let num = |t: &str| t.trim().parse::<usize>().map_err(|_| format!("bad node count '{t}'"));
        match s.split_once(['x', 'X']) {
            Some((a, b)) => Ok(Nodes::Two(num(a)?, num(b)?)),
            None => Ok(Nodes::One(num(s)?)),
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Closed-form values of catalog states.
    Catalog(CatalogArgs),
    /// Cauchy–Schwarz / Robertson–Schrödinger verdict for one pair.
    Audit(AuditArgs),
    /// Determinant of the correlation matrix of up to four observables.
    Detcheck(DetcheckArgs),
    /// Quantum measurement channel on a line state.
    Channel(ChannelArgs),
    /// Classical channel on a Gaussian mixture.
    Classical(ClassicalArgs),
    /// Gaussian packet or oscillator channel against its closed form.
    Annex(AnnexArgs),
    /// Spin magnetization commutators and the density-matrix inequality.
    Spins(SpinsArgs),
    /// Seeded property sweeps.
    Sweep(SweepArgs),
}

#[derive(Debug, Args)]
pub struct CatalogArgs {
    #[arg(long)]
    pub state: Option<String>,
}

#[derive(Debug, Args)]
pub struct AuditArgs {
    /// State text, e.g. `azimuthal:m=1`.
    #[arg(long)]
    pub state: Option<String>,
    /// Two operators, e.g. `Lz,phi`; `E,t` gives the energy-time verdict.
    #[arg(long)]
    pub pair: String,
    /// Energy spread for the `E,t` pair.
    #[arg(long)]
    pub delta_e: Option<f64>,
    /// Exit with status 1 unless the verdict has this class.
    #[arg(long)]
    pub expect: Option<String>,
}

#[derive(Debug, Args)]
pub struct DetcheckArgs {
    #[arg(long)]
    pub state: String,
    /// Comma-separated operators.
    #[arg(long)]
    pub ops: String,
}

#[derive(Debug, Args)]
pub struct ChannelArgs {
    #[arg(long)]
    pub state: String,
    #[arg(long, default_value = "x,p")]
    pub ops: String,
    #[arg(long)]
    pub gamma: f64,
    #[arg(long)]
    pub lambda: f64,
    /// Speed scale of the current; defaults to |ħk/m| for moving packets, else 1.
    #[arg(long)]
    pub upsilon: Option<f64>,
    #[arg(long, default_value_t = 1.0)]
    pub mass: f64,
}

#[derive(Debug, Args)]
pub struct ClassicalArgs {
    /// `w:mean:sd` terms separated by `;`.
    #[arg(long, default_value = "1:0:1")]
    pub mixture: String,
    #[arg(long)]
    pub width: f64,
    #[arg(long, default_value_t = qfluct_core::channel::DEFAULT_MAX_ORDER)]
    pub max_order: usize,
    /// Grid is `[-h, h]`; chosen from the mixture when omitted.
    #[arg(long)]
    pub half_width: Option<f64>,
}

#[derive(Debug, Args)]
pub struct AnnexArgs {
    #[arg(long, default_value_t = 1.0)]
    pub sigma: f64,
    #[arg(long, default_value_t = 0.5)]
    pub gamma: f64,
    #[arg(long, default_value_t = 0.5)]
    pub lambda: f64,
    #[arg(long, default_value_t = 1.0)]
    pub k: f64,
    #[arg(long, default_value_t = 0.0)]
    pub x0: f64,
    #[arg(long, default_value_t = 1.0)]
    pub mass: f64,
    #[arg(long)]
    pub upsilon: Option<f64>,
    /// Oscillator ground state instead of the packet; uses `gamma` for both kernels.
    #[arg(long)]
    pub oscillator: bool,
    #[arg(long, default_value_t = 1.0)]
    pub omega: f64,
}

#[derive(Debug, Args)]
pub struct SpinsArgs {
    #[arg(long, default_value_t = 3)]
    pub n: usize,
    #[arg(long, default_value_t = 1.0)]
    pub gamma: f64,
    /// Random density matrices for the inequality check.
    #[arg(long, default_value_t = 50)]
    pub samples: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SweepKind {
    ClassicalEntropy,
    QuantumEntropy,
    Boundary,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[arg(long, value_enum)]
    pub kind: SweepKind,
    #[arg(long, default_value_t = 100)]
    pub cases: usize,
}

/// Run-level settings shared by every command.
#[derive(Debug, Clone, Copy)]
pub struct RunSettings {
    pub nodes: Option<Nodes>,
    pub hbar: f64,
    pub tol: f64,
    explicit_tol: bool,
    pub seed: u64,
}

impl RunSettings {
    pub fn from_global(g: &GlobalArgs) -> RunSettings {
        RunSettings {
            nodes: g.nodes,
            hbar: g.hbar,
            tol: g.tol.unwrap_or(qfluct_core::urelations::DEFAULT_TOL),
            explicit_tol: g.tol.is_some(),
            seed: g.seed,
        }
    }

    /// `--tol` if given, else `default`.
    pub fn tol_or(&self, default: f64) -> f64 {
        if self.explicit_tol {
            self.tol
        } else {
            default
        }
    }
}
