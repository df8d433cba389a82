//! `porosity` and `embed`.

use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use fuplab_core::intervals::porosity_check;
use fuplab_core::regular::{contains_in_neighborhood, embed_porous_with, regularity_check, DEFAULT_EXTRA_LEVELS};
use fuplab_core::{CantorTree, IntervalSet, PorosityReport, RegularMeasure, RegularityReport};

use super::{require, SetSource};
use crate::emit::{cell, Artifact, Table};
use crate::CliError;

#[derive(Debug, Clone, Default, Serialize, Deserialize, clap::Args)]
#[serde(deny_unknown_fields)]
pub struct PorosityArgs {
    /// Interval set JSON file.
    #[arg(long)]
    pub input: Option<PathBuf>,
    /// Use the triadic Cantor set of this level.
    #[arg(long)]
    pub cantor_level: Option<u32>,
    /// Generate a random porous set from --seed.
    #[arg(long)]
    #[serde(default)]
    pub random: bool,
    #[arg(long)]
    pub nu: Option<f64>,
    #[arg(long)]
    pub alpha0: Option<f64>,
    /// Largest scale; defaults to 1.
    #[arg(long)]
    pub alpha1: Option<f64>,
}

#[derive(Serialize)]
struct PorosityOutput<'a> {
    report: &'a PorosityReport,
    set: &'a IntervalSet,
}

pub fn porosity(args: &PorosityArgs, seed: Option<u64>) -> Result<Artifact, CliError> {
    const CMD: &str = "porosity";
    let nu = require(CMD, "nu", args.nu)?;
    let alpha0 = require(CMD, "alpha0", args.alpha0)?;
    let set = SetSource {
        input: &args.input,
        cantor_level: args.cantor_level,
        random: args.random,
        nu: Some(nu),
        alpha0: Some(alpha0),
    }
    .load(CMD, seed)?;
    let report = porosity_check(&set, nu, alpha0, args.alpha1.unwrap_or(1.0))?;
    let mut table = Table::new(&[
        "certified",
        "nu_nominal",
        "nu_certified",
        "witness_lo",
        "witness_hi",
        "witness_gap",
        "alpha0",
        "alpha1",
        "windows_checked",
    ]);
    table.push(vec![
        report.certified.to_string(),
        report.nu_nominal.to_string(),
        report.nu_certified.to_string(),
        cell(report.witness.map(|w| w.lo)),
        cell(report.witness.map(|w| w.hi)),
        cell(report.witness_gap),
        report.scales.0.to_string(),
        report.scales.1.to_string(),
        report.windows_checked.to_string(),
    ]);
    Ok(Artifact::new(&PorosityOutput { report: &report, set: &set }, table))
}

#[derive(Debug, Clone, Default, Serialize, Deserialize, clap::Args)]
#[serde(deny_unknown_fields)]
pub struct EmbedArgs {
    /// Interval set JSON file.
    #[arg(long)]
    pub input: Option<PathBuf>,
    #[arg(long)]
    pub cantor_level: Option<u32>,
    /// Generate a random porous set from --seed.
    #[arg(long)]
    #[serde(default)]
    pub random: bool,
    #[arg(long)]
    pub nu: Option<f64>,
    #[arg(long)]
    pub alpha0: Option<f64>,
    /// Tree levels below the cutoff scale.
    #[arg(long)]
    pub extra_levels: Option<u32>,
    /// Sampled intervals for a regularity check of the tree measure (0 skips it).
    #[arg(long)]
    pub regularity_samples: Option<u64>,
}

#[derive(Serialize)]
struct EmbedOutput<'a> {
    tree: &'a CantorTree,
    contained: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    regularity: Option<&'a RegularityReport>,
}

pub fn embed(args: &EmbedArgs, seed: Option<u64>) -> Result<Artifact, CliError> {
    const CMD: &str = "embed";
    let nu = require(CMD, "nu", args.nu)?;
    let alpha0 = require(CMD, "alpha0", args.alpha0)?;
    let set = SetSource {
        input: &args.input,
        cantor_level: args.cantor_level,
        random: args.random,
        nu: Some(nu),
        alpha0: Some(alpha0),
    }
    .load(CMD, seed)?;
    let tree = embed_porous_with(&set, nu, alpha0, args.extra_levels.unwrap_or(DEFAULT_EXTRA_LEVELS))?;
    let contained = contained_or_fail(&tree, &set, alpha0)?;
    let regularity = match args.regularity_samples.unwrap_or(0) {
        0 => None,
        n => Some(regularity_check(&RegularMeasure::new(tree.clone()), n, seed.unwrap_or(0))?),
    };
    let mut table = Table::new(&["level", "node_length", "kept_nodes"]);
    for k in 0..=tree.explicit_level() {
        let kept = tree.kept(k).map_or(0, |v| v.len());
        table.push(vec![k.to_string(), (tree.base_l() as f64).powi(-(k as i32)).to_string(), kept.to_string()]);
    }
    Ok(Artifact::new(
        &EmbedOutput {
            tree: &tree,
            contained,
            regularity: regularity.as_ref(),
        },
        table,
    ))
}

fn contained_or_fail(tree: &CantorTree, set: &IntervalSet, alpha0: f64) -> Result<bool, CliError> {
    if contains_in_neighborhood(tree, set, alpha0)? {
        Ok(true)
    } else {
        Err(CliError::Failure("embed_porous: the tree neighborhood does not contain the input set".into()))
    }
}
