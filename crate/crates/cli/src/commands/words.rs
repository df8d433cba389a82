//! `words count`, `words params` and `words classify`.

use serde::{Deserialize, Serialize};

use fuplab_core::words::{binary_entropy, count_x, density, derive_params, xy_membership, XyClass};
use fuplab_core::{CountReport, PartitionParams, Word};

use super::require;
use crate::emit::{cell, Artifact, Table};
use crate::CliError;

#[derive(Debug, Clone, Default, Serialize, Deserialize, clap::Args)]
#[serde(deny_unknown_fields)]
pub struct CountArgs {
    /// Block length; alternatively give h, rho and beta.
    #[arg(long)]
    pub n0: Option<u32>,
    #[arg(long)]
    pub alpha: Option<f64>,
    #[arg(long)]
    pub h: Option<f64>,
    #[arg(long)]
    pub rho: Option<f64>,
    #[arg(long)]
    pub beta: Option<f64>,
    /// Compare against brute-force enumeration.
    #[arg(long)]
    #[serde(default)]
    pub verify: bool,
}

#[derive(Debug, Clone, Default, Serialize, Deserialize, clap::Args)]
#[serde(deny_unknown_fields)]
pub struct ParamsArgs {
    #[arg(long)]
    pub h: Option<f64>,
    #[arg(long)]
    pub rho: Option<f64>,
    #[arg(long)]
    pub beta: Option<f64>,
}

#[derive(Debug, Clone, Default, Serialize, Deserialize, clap::Args)]
#[serde(deny_unknown_fields)]
pub struct ClassifyArgs {
    /// Word over the letters 1 and 2, of length 8·N0.
    #[arg(long)]
    pub word: Option<String>,
    #[arg(long)]
    pub alpha: Option<f64>,
}

fn params_for_count(args: &CountArgs) -> Result<PartitionParams, CliError> {
    const CMD: &str = "words count";
    match (args.n0, args.h, args.rho, args.beta) {
        (Some(n0), None, None, None) => {
            let alpha = require(CMD, "alpha", args.alpha)?;
            Ok(PartitionParams::from_n0(n0, alpha)?)
        }
        (Some(n0), Some(h), None, None) => {
            let alpha = require(CMD, "alpha", args.alpha)?;
            Ok(PartitionParams::from_n0(n0, alpha)?.with_h(h)?)
        }
        (None, Some(h), Some(rho), Some(beta)) if args.alpha.is_none() => Ok(derive_params(h, rho, beta)?),
        _ => Err(CliError::Validation(format!(
            "{CMD}: give either `n0` and `alpha` (optionally `h`) or `h`, `rho` and `beta`"
        ))),
    }
}

pub fn count(args: &CountArgs) -> Result<Artifact, CliError> {
    let params = params_for_count(args)?;
    let report = count_x(&params, args.verify)?;
    let mut table = Table::new(&[
        "n0",
        "alpha",
        "n_uncontrolled",
        "n_X",
        "block_bound",
        "stirling_bound",
        "block_bound_holds",
        "asymptotic_bound",
        "measured_ratio",
        "exhaustive_agrees",
    ]);
    table.push(count_row(&report));
    Ok(Artifact::new(&report, table))
}

fn count_row(r: &CountReport) -> Vec<String> {
    vec![
        r.n0.to_string(),
        r.alpha.to_string(),
        r.n_uncontrolled.to_string(),
        r.n_x.to_string(),
        r.block_bound.to_string(),
        r.stirling_bound.to_string(),
        r.block_bound_holds.to_string(),
        cell(r.asymptotic_bound),
        cell(r.measured_ratio),
        cell(r.exhaustive_agrees),
    ]
}

#[derive(Serialize)]
struct ParamsOutput<'a> {
    #[serde(flatten)]
    params: &'a PartitionParams,
    entropy: f64,
    sqrt_alpha: f64,
}

pub fn params(args: &ParamsArgs) -> Result<Artifact, CliError> {
    const CMD: &str = "words params";
    let p = derive_params(
        require(CMD, "h", args.h)?,
        require(CMD, "rho", args.rho)?,
        require(CMD, "beta", args.beta)?,
    )?;
    let out = ParamsOutput {
        params: &p,
        entropy: binary_entropy(p.alpha),
        sqrt_alpha: p.alpha.sqrt(),
    };
    let mut table = Table::new(&["h", "rho", "beta", "n0", "n1", "alpha", "entropy", "sqrt_alpha"]);
    table.push(vec![
        cell(p.h),
        cell(p.rho),
        cell(p.beta),
        p.n0.to_string(),
        p.n1.to_string(),
        p.alpha.to_string(),
        out.entropy.to_string(),
        out.sqrt_alpha.to_string(),
    ]);
    Ok(Artifact::new(&out, table))
}

#[derive(Serialize)]
struct ClassifyOutput<'a> {
    word: &'a Word,
    density: String,
    #[serde(flatten)]
    class: XyClass,
}

pub fn classify(args: &ClassifyArgs) -> Result<Artifact, CliError> {
    const CMD: &str = "words classify";
    let text = require(CMD, "word", args.word.as_ref())?;
    let alpha = require(CMD, "alpha", args.alpha)?;
    let word: Word = text.parse()?;
    let class = xy_membership(&word, alpha)?;
    let d = density(&word)?;
    let out = ClassifyOutput {
        word: &word,
        density: d.to_string(),
        class,
    };
    let (name, block) = match class {
        XyClass::X => ("X", None),
        XyClass::Y { block } => ("Y", Some(block)),
    };
    let mut table = Table::new(&["word", "density", "class", "block"]);
    table.push(vec![word.to_string(), out.density.clone(), name.into(), cell(block)]);
    Ok(Artifact::new(&out, table))
}
