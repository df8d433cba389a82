//! `fup`: masked-norm sweep over `h` with a decay fit.

use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use fuplab_core::fup::{fup_experiment, h_ladder, Engine, FupConfig, FupReport, KernelSpec, Mode, NormOptions};
use fuplab_core::intervals::triadic_cantor;
use fuplab_core::IntervalSet;

use super::read_json;
use crate::CliError;
use crate::emit::{Artifact, Table};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum KernelKind {
    Fourier,
    Hyperbolic,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum ModeArg {
    Raw,
    Embedded,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum EngineArg {
    Dense,
    Structured,
}

#[derive(Debug, Clone, Default, Serialize, Deserialize, clap::Args)]
#[serde(deny_unknown_fields)]
pub struct FupArgs {
    /// Oscillatory kernel; defaults to fourier.
    #[arg(long, value_enum)]
    pub kernel: Option<KernelKind>,
    /// Phase constant of the hyperbolic kernel.
    #[arg(long)]
    pub w: Option<f64>,
    /// Diagonal cutoff of the hyperbolic kernel.
    #[arg(long)]
    pub d_min: Option<f64>,
    /// Mask exponent; masks are neighborhoods of size h^rho. Defaults to 0.9.
    #[arg(long)]
    pub rho: Option<f64>,
    /// h runs over 2^-h_min_exp, ..., 2^-h_max_exp. Defaults to 6..=12.
    #[arg(long)]
    pub h_min_exp: Option<i32>,
    #[arg(long)]
    pub h_max_exp: Option<i32>,
    /// Interval set JSON for the output side.
    #[arg(long)]
    pub set_plus: Option<PathBuf>,
    /// Interval set JSON for the input side.
    #[arg(long)]
    pub set_minus: Option<PathBuf>,
    /// Triadic Cantor level used for any side without a file. Defaults to 10.
    #[arg(long)]
    pub cantor_level: Option<u32>,
    #[arg(long, value_enum)]
    pub mode: Option<ModeArg>,
    /// Porosity constant for the embedded mode.
    #[arg(long)]
    pub nu: Option<f64>,
    #[arg(long)]
    pub oversample: Option<f64>,
    #[arg(long, value_enum)]
    pub engine: Option<EngineArg>,
    /// Power-iteration tolerance.
    #[arg(long)]
    pub tol: Option<f64>,
}

#[derive(Serialize)]
struct FupOutput<'a> {
    config: &'a FupConfig,
    report: &'a FupReport,
    strictly_decreasing: bool,
}

pub fn fup(args: &FupArgs) -> Result<Artifact, CliError> {
    let spec = match args.kernel.unwrap_or(KernelKind::Fourier) {
        KernelKind::Fourier => KernelSpec::fourier(),
        KernelKind::Hyperbolic => KernelSpec::hyperbolic(args.w.unwrap_or(0.5), args.d_min.unwrap_or(0.05)),
    };
    let level = args.cantor_level.unwrap_or(10);
    if level > 20 {
        return Err(CliError::Validation("fup: cantor_level must be at most 20".into()));
    }
    let load = |p: &Option<PathBuf>| -> Result<IntervalSet, CliError> {
        match p {
            Some(path) => read_json("interval set", path),
            None => Ok(triadic_cantor(level)),
        }
    };
    let plus = load(&args.set_plus)?;
    let minus = load(&args.set_minus)?;
    let (lo, hi) = (args.h_min_exp.unwrap_or(6), args.h_max_exp.unwrap_or(12));
    if !(0 < lo && lo <= hi && hi <= 24) {
        return Err(CliError::Validation(format!("fup: need 0 < h_min_exp <= h_max_exp <= 24, got {lo}..{hi}")));
    }
    let mut cfg = FupConfig::new(spec, args.rho.unwrap_or(0.9), h_ladder(lo, hi));
    cfg.mode = match args.mode.unwrap_or(ModeArg::Raw) {
        ModeArg::Raw => Mode::Raw,
        ModeArg::Embedded => Mode::Embedded,
    };
    cfg.engine = match args.engine.unwrap_or(EngineArg::Structured) {
        EngineArg::Dense => Engine::Dense,
        EngineArg::Structured => Engine::Structured,
    };
    if let Some(nu) = args.nu {
        cfg.nu = nu;
    }
    if let Some(o) = args.oversample {
        cfg.oversample = o;
    }
    if let Some(tol) = args.tol {
        cfg.norm = NormOptions::with_tol(tol);
    }
    let report = fup_experiment(&plus, &minus, &cfg)?;
    let mut table = Table::new(&["h", "rho", "dim", "norm_masked", "norm_unmasked", "oversample"]);
    for r in &report.rows {
        table.push(vec![
            r.h.to_string(),
            r.rho.to_string(),
            r.dim.to_string(),
            r.norm_masked.to_string(),
            r.norm_unmasked.to_string(),
            r.oversample.to_string(),
        ]);
    }
    let mut artifact = Artifact::new(
        &FupOutput {
            config: &cfg,
            report: &report,
            strictly_decreasing: report.strictly_decreasing(),
        },
        table,
    );
    artifact.warnings = report.warnings.clone();
    Ok(artifact)
}
