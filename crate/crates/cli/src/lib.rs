//! Command-line surface: pattern evaluation, codebook dumps, misalignment
//! sweeps, and single-run training traces.
//!
//! Exit codes: 0 on success, 1 on usage errors (bad flags or parameters),
//! 2 on numerical failures while evaluating a user-supplied shape.

pub mod commands;
pub mod expr;
pub mod formats;

use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use irsbeam::Stitching;

#[derive(Debug, Parser)]
#[command(
    name = "irsbeam",
    version,
    about = "Beam patterns, hierarchical codebooks, and beam training for intelligent reflecting surfaces"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: CommandKind,
}

#[derive(Debug, Subcommand)]
pub enum CommandKind {
    /// Evaluate a beam pattern over the direction grid (CSV or JSON)
    Pattern(PatternArgs),
    /// Dump a hierarchical codebook as JSON
    Codebook(CodebookArgs),
    /// Sweep Monte Carlo misalignment rates over SNR or array size (CSV)
    Sweep(SweepArgs),
    /// Run one training descent and dump the trace as JSON
    Train(TrainArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FormatArg {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum StitchingArg {
    /// Each sub-beam keeps its own phase reference
    Independent,
    /// Sub-beam phases continue across block boundaries
    Continuous,
}

impl StitchingArg {
    pub fn to_core(self) -> Stitching {
        match self {
            StitchingArg::Independent => Stitching::Independent,
            StitchingArg::Continuous => Stitching::Continuous,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CodebookKindArg {
    /// Flat wide beams over each range
    Ncpd,
    /// Sub-array combination wide beams
    Bmwss,
}

impl CodebookKindArg {
    pub fn name(self) -> &'static str {
        match self {
            CodebookKindArg::Ncpd => "ncpd",
            CodebookKindArg::Bmwss => "bmwss",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SweepMode {
    Snr,
    Size,
}

impl SweepMode {
    pub fn name(self) -> &'static str {
        match self {
            SweepMode::Snr => "snr",
            SweepMode::Size => "size",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TrainScheme {
    /// Joint search over both axes (square arrays)
    Js,
    /// Dimension-wise search, horizontal then vertical
    Dws,
    /// Joint search down to --switch-layer, then dimension-wise completion
    Hybrid,
}

impl TrainScheme {
    pub fn name(self) -> &'static str {
        match self {
            TrainScheme::Js => "js",
            TrainScheme::Dws => "dws",
            TrainScheme::Hybrid => "hybrid",
        }
    }
}

#[derive(Debug, Parser)]
pub struct PatternArgs {
    /// ncpd | comb4 | comb16 | narrow | omni | shaped[:<expr>]
    #[arg(long)]
    pub method: String,
    /// Direction band as start,end (ncpd, comb*, shaped)
    #[arg(long, allow_hyphen_values = true)]
    pub band: Option<String>,
    /// Steering direction (narrow)
    #[arg(long, allow_negative_numbers = true)]
    pub psi: Option<f64>,
    /// Shape expression over beta, e.g. "beta" or "beta^2 + 0.25" (shaped)
    #[arg(long)]
    pub shape: Option<String>,
    /// Elements along the axis
    #[arg(long)]
    pub n: usize,
    /// Grid points across the full direction range
    #[arg(long, default_value_t = 1001)]
    pub grid: usize,
    /// Sub-beam stitching convention (comb*)
    #[arg(long, value_enum, default_value_t = StitchingArg::Independent)]
    pub stitching: StitchingArg,
    /// Element spacing as a fraction of the wavelength
    #[arg(long, default_value_t = 0.25)]
    pub spacing: f64,
    #[arg(long, value_enum, default_value_t = FormatArg::Csv)]
    pub format: FormatArg,
    /// Output path (stdout when omitted)
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Parser)]
pub struct CodebookArgs {
    /// Elements along the axis (power of two)
    #[arg(long)]
    pub n: usize,
    #[arg(long, value_enum, default_value_t = CodebookKindArg::Ncpd)]
    pub kind: CodebookKindArg,
    /// Output path (stdout when omitted)
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Parser)]
pub struct SweepArgs {
    #[arg(long, value_enum, default_value_t = SweepMode::Snr)]
    pub mode: SweepMode,
    /// SNR in dB: single value, or inclusive start:stop:step
    #[arg(long, allow_hyphen_values = true)]
    pub snr: String,
    /// Comma-separated element counts (size mode)
    #[arg(long)]
    pub sizes: Option<String>,
    /// Elements along the axis (snr mode)
    #[arg(long)]
    pub n: Option<usize>,
    /// Monte Carlo trials per point
    #[arg(long)]
    pub trials: usize,
    /// Master seed (required: sweeps are stochastic)
    #[arg(long)]
    pub seed: u64,
    /// Element spacing as a fraction of the wavelength
    #[arg(long, default_value_t = 0.25)]
    pub spacing: f64,
    /// Output path (stdout when omitted)
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Parser)]
pub struct TrainArgs {
    #[arg(long, value_enum)]
    pub scheme: TrainScheme,
    #[arg(long, value_enum, default_value_t = CodebookKindArg::Ncpd)]
    pub kind: CodebookKindArg,
    /// Horizontal element count
    #[arg(long)]
    pub n: usize,
    /// Vertical element count (defaults: same as --n for js/hybrid, 1 for dws)
    #[arg(long)]
    pub n_ver: Option<usize>,
    /// True horizontal cascaded direction
    #[arg(long, allow_negative_numbers = true)]
    pub beta_hor: f64,
    /// True vertical cascaded direction
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub beta_ver: f64,
    /// Channel gain
    #[arg(long, default_value_t = 1.0)]
    pub gain: f64,
    /// Receiver SNR in dB ("inf" for noiseless)
    #[arg(long, allow_negative_numbers = true)]
    pub snr_db: f64,
    /// Master seed (required: noisy probes are stochastic)
    #[arg(long)]
    pub seed: u64,
    /// Stop the js descent after this many layers
    #[arg(long)]
    pub stop_layer: Option<usize>,
    /// Layer at which the hybrid scheme switches from js to dws
    #[arg(long)]
    pub switch_layer: Option<usize>,
    /// Element spacing as a fraction of the wavelength
    #[arg(long, default_value_t = 0.25)]
    pub spacing: f64,
    /// Output path (stdout when omitted)
    #[arg(long)]
    pub output: Option<PathBuf>,
}

/// A command failure carrying the exit-code class.
#[derive(Debug)]
pub struct Failure {
    numerical: bool,
    error: anyhow::Error,
}

impl Failure {
    pub fn usage(error: impl Into<anyhow::Error>) -> Self {
        Self {
            numerical: false,
            error: error.into(),
        }
    }

    pub fn numerical(error: impl Into<anyhow::Error>) -> Self {
        Self {
            numerical: true,
            error: error.into(),
        }
    }

    pub fn code(&self) -> u8 {
        if self.numerical {
            2
        } else {
            1
        }
    }

    pub fn error(&self) -> &anyhow::Error {
        &self.error
    }
}

/// Execute a parsed invocation and write its output.
pub fn run(cli: Cli) -> Result<(), Failure> {
    let (text, output) = match &cli.command {
        CommandKind::Pattern(args) => (commands::cmd_pattern(args)?, args.output.clone()),
        CommandKind::Codebook(args) => (
            commands::cmd_codebook(args.n, args.kind)?,
            args.output.clone(),
        ),
        CommandKind::Sweep(args) => (commands::cmd_sweep(args)?, args.output.clone()),
        CommandKind::Train(args) => (commands::cmd_train(args)?, args.output.clone()),
    };
    commands::write_output(output.as_deref(), &text)
}
