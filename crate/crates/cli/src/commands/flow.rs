//! `flow avg`, `flow hit` and `flow witness` on a Fuchsian group.

use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use fuplab_core::hyperbolic::hitting::{default_targets, empirical_bound, hitting_times, Ball};
use fuplab_core::hyperbolic::observables::{horocycle_averages, random_points};
use fuplab_core::hyperbolic::witness::INNER_FRACTION;
use fuplab_core::hyperbolic::{
    liouville_average, porosity_witness, Direction, FuchsianGroup, LiouvilleEstimate, Observable,
    SliceSpec, WitnessRecord,
};

use super::{read_json, require_seed};
use crate::emit::{cell, Artifact, Table};
use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum DirectionArg {
    Stable,
    Unstable,
}

impl From<DirectionArg> for Direction {
    fn from(d: DirectionArg) -> Self {
        match d {
            DirectionArg::Stable => Direction::Stable,
            DirectionArg::Unstable => Direction::Unstable,
        }
    }
}

fn load_group(path: &Option<PathBuf>) -> Result<FuchsianGroup, CliError> {
    match path {
        Some(p) => {
            let text = std::fs::read_to_string(p).map_err(|e| CliError::Validation(format!("group {}: {e}", p.display())))?;
            Ok(FuchsianGroup::from_json(&text)?)
        }
        None => Ok(FuchsianGroup::bolza()),
    }
}

/// Target balls from a JSON list, re-centred on reduced representatives, or
/// the two default balls of the given radius.
fn load_targets(group: &FuchsianGroup, path: &Option<PathBuf>, radius: f64) -> Result<Vec<Ball>, CliError> {
    match path {
        Some(p) => {
            let raw: Vec<Ball> = read_json("targets", p)?;
            if raw.is_empty() {
                return Err(CliError::Validation("targets: need at least one ball".into()));
            }
            raw.iter().map(|b| Ok(Ball::new(group, &b.center, b.radius)?)).collect()
        }
        None => Ok(default_targets(group, radius)?.to_vec()),
    }
}

fn positive_count(command: &str, name: &str, n: usize) -> Result<usize, CliError> {
    if n == 0 {
        return Err(CliError::Validation(format!("{command}: `{name}` must be at least 1")));
    }
    Ok(n)
}

#[derive(Debug, Clone, Default, Serialize, Deserialize, clap::Args)]
#[serde(deny_unknown_fields)]
pub struct AvgArgs {
    /// Group JSON (a preset name or explicit generators); defaults to Bolza.
    #[arg(long)]
    pub group: Option<PathBuf>,
    /// Observable JSON; defaults to the radius-1.5 bump at i.
    #[arg(long)]
    pub observable: Option<PathBuf>,
    /// Number of seeded starting points. Defaults to 20.
    #[arg(long)]
    pub points: Option<usize>,
    /// Horocycle lengths. Defaults to 10,20,40,80.
    #[arg(long, value_delimiter = ',')]
    pub t_grid: Option<Vec<f64>>,
    /// Midpoint-rule steps per unit length. Defaults to 100.
    #[arg(long)]
    pub steps_per_unit: Option<usize>,
    /// Monte Carlo samples of the Liouville average (0 skips it). Defaults to 200000.
    #[arg(long)]
    pub mc_samples: Option<u64>,
}

#[derive(Serialize)]
struct AvgRow {
    t: f64,
    point: usize,
    average: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    error: Option<f64>,
}

#[derive(Serialize)]
struct AvgOutput {
    observable: Observable,
    liouville: Option<LiouvilleEstimate>,
    rows: Vec<AvgRow>,
    /// Largest error over the points at each `T`, when the Liouville average is known.
    worst_error: Vec<(f64, f64)>,
}

pub fn avg(args: &AvgArgs, seed: Option<u64>) -> Result<Artifact, CliError> {
    const CMD: &str = "flow avg";
    let seed = require_seed(CMD, seed)?;
    let group = load_group(&args.group)?;
    let f: Observable = match &args.observable {
        Some(p) => read_json("observable", p)?,
        None => Observable::default(),
    };
    f.validate()?;
    let n = positive_count(CMD, "points", args.points.unwrap_or(20))?;
    let t_grid = args.t_grid.clone().unwrap_or_else(|| vec![10.0, 20.0, 40.0, 80.0]);
    if t_grid.is_empty() || t_grid.iter().any(|t| !(*t > 0.0 && t.is_finite())) {
        return Err(CliError::Validation(format!("{CMD}: t_grid must be non-empty and positive")));
    }
    let per_unit = positive_count(CMD, "steps_per_unit", args.steps_per_unit.unwrap_or(100))?;
    let liouville = match args.mc_samples.unwrap_or(200_000) {
        0 => None,
        m => Some(liouville_average(&group, &f, m, seed.wrapping_add(1))?),
    };
    let points = random_points(&group, n, seed);
    let mut rows = Vec::new();
    let mut worst_error = Vec::new();
    for &t in &t_grid {
        let steps = ((t * per_unit as f64).ceil() as usize).max(1);
        let avgs = horocycle_averages(&group, &f, &points, t, steps)?;
        let mut worst = 0.0f64;
        for (k, a) in avgs.into_iter().enumerate() {
            let error = liouville.map(|l| (a - l.mean).abs());
            worst = worst.max(error.unwrap_or(0.0));
            rows.push(AvgRow { t, point: k, average: a, error });
        }
        if liouville.is_some() {
            worst_error.push((t, worst));
        }
    }
    let mut table = Table::new(&["T", "point", "average", "liouville", "error"]);
    for r in &rows {
        table.push(vec![
            r.t.to_string(),
            r.point.to_string(),
            r.average.to_string(),
            cell(liouville.map(|l| l.mean)),
            cell(r.error),
        ]);
    }
    Ok(Artifact::new(
        &AvgOutput {
            observable: f,
            liouville,
            rows,
            worst_error,
        },
        table,
    ))
}

#[derive(Debug, Clone, Default, Serialize, Deserialize, clap::Args)]
#[serde(deny_unknown_fields)]
pub struct HitArgs {
    #[arg(long)]
    pub group: Option<PathBuf>,
    /// JSON list of balls `{"center": [a,b,c,d], "radius": r}`; defaults to two balls of `radius`.
    #[arg(long)]
    pub targets: Option<PathBuf>,
    /// Radius of the default target balls. Defaults to 0.3.
    #[arg(long)]
    pub radius: Option<f64>,
    /// Defaults to 200.
    #[arg(long)]
    pub points: Option<usize>,
    /// Largest horocycle time searched. Defaults to 1e5.
    #[arg(long)]
    pub s_max: Option<f64>,
    /// Defaults to unstable.
    #[arg(long, value_enum)]
    pub direction: Option<DirectionArg>,
}

#[derive(Serialize)]
struct HitOutput {
    targets: Vec<Ball>,
    times: Vec<Vec<Option<f64>>>,
    empirical_bound: Option<f64>,
}

pub fn hit(args: &HitArgs, seed: Option<u64>) -> Result<Artifact, CliError> {
    const CMD: &str = "flow hit";
    let seed = require_seed(CMD, seed)?;
    let group = load_group(&args.group)?;
    let targets = load_targets(&group, &args.targets, args.radius.unwrap_or(0.3))?;
    let n = positive_count(CMD, "points", args.points.unwrap_or(200))?;
    let dir: Direction = args.direction.unwrap_or(DirectionArg::Unstable).into();
    let points = random_points(&group, n, seed);
    let times = hitting_times(&group, &targets, &points, args.s_max.unwrap_or(1e5), dir)?;
    let mut table = Table::new(&["point", "ball", "hitting_time"]);
    for (p, row) in times.iter().enumerate() {
        for (b, t) in row.iter().enumerate() {
            table.push(vec![p.to_string(), b.to_string(), cell(*t)]);
        }
    }
    let out = HitOutput {
        empirical_bound: empirical_bound(&times),
        targets,
        times,
    };
    Ok(Artifact::new(&out, table))
}

#[derive(Debug, Clone, Default, Serialize, Deserialize, clap::Args)]
#[serde(deny_unknown_fields)]
pub struct WitnessArgs {
    #[arg(long)]
    pub group: Option<PathBuf>,
    #[arg(long)]
    pub targets: Option<PathBuf>,
    /// Radius of the default target balls. Defaults to 0.3.
    #[arg(long)]
    pub radius: Option<f64>,
    /// Starting points. Defaults to 50.
    #[arg(long)]
    pub points: Option<usize>,
    /// Defaults to 1,0.5,0.25.
    #[arg(long, value_delimiter = ',')]
    pub tau_grid: Option<Vec<f64>>,
    /// Uniform hitting bound; estimated from a sweep when absent.
    #[arg(long)]
    pub t_bound: Option<f64>,
    /// Points in the sweep that estimates the hitting bound. Defaults to 200.
    #[arg(long)]
    pub sweep_points: Option<usize>,
    /// Transverse slice radius. Defaults to 0.05.
    #[arg(long)]
    pub nu1: Option<f64>,
    /// Slice grid points per axis. Defaults to 3.
    #[arg(long)]
    pub grid: Option<usize>,
    /// Defaults to unstable.
    #[arg(long, value_enum)]
    pub direction: Option<DirectionArg>,
}

#[derive(Serialize)]
struct WitnessOutput {
    targets: Vec<Ball>,
    t_bound: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    empirical_bound: Option<f64>,
    records: Vec<WitnessEntry>,
    verified_rate: f64,
}

#[derive(Serialize)]
struct WitnessEntry {
    point: usize,
    #[serde(flatten)]
    record: WitnessRecord,
}

pub fn witness(args: &WitnessArgs, seed: Option<u64>) -> Result<Artifact, CliError> {
    const CMD: &str = "flow witness";
    let seed = require_seed(CMD, seed)?;
    let group = load_group(&args.group)?;
    let targets = load_targets(&group, &args.targets, args.radius.unwrap_or(0.3))?;
    let n = positive_count(CMD, "points", args.points.unwrap_or(50))?;
    let taus = args.tau_grid.clone().unwrap_or_else(|| vec![1.0, 0.5, 0.25]);
    if taus.is_empty() {
        return Err(CliError::Validation(format!("{CMD}: tau_grid must be non-empty")));
    }
    let dir: Direction = args.direction.unwrap_or(DirectionArg::Unstable).into();
    let (t_bound, emp) = match args.t_bound {
        Some(t) => (t, None),
        None => {
            let m = positive_count(CMD, "sweep_points", args.sweep_points.unwrap_or(200))?;
            let inner: Vec<Ball> = targets.iter().map(|b| b.shrunk(INNER_FRACTION)).collect();
            let sweep = random_points(&group, m, seed.wrapping_add(1));
            let times = hitting_times(&group, &inner, &sweep, 1e5, dir)?;
            let emp = empirical_bound(&times)
                .ok_or_else(|| CliError::Failure("hitting_time: a sweep orbit missed a target within 1e5".into()))?;
            ((1.25 * emp).ceil().max(1.0), Some(emp))
        }
    };
    let slice = SliceSpec {
        nu0: 1.0,
        nu1: args.nu1.unwrap_or(0.05),
        direction: dir,
        n_samples: positive_count(CMD, "grid", args.grid.unwrap_or(3))?,
    };
    let points = random_points(&group, n, seed);
    let mut records = Vec::new();
    for (k, p) in points.iter().enumerate() {
        for &tau in &taus {
            for letter in 0..targets.len() {
                let record = porosity_witness(&group, &targets, letter, p, tau, t_bound, &slice)?;
                records.push(WitnessEntry { point: k, record });
            }
        }
    }
    let verified = records.iter().filter(|r| r.record.verified).count();
    let mut table = Table::new(&[
        "point", "tau", "T", "j", "letter", "s_w", "s0", "eps0", "samples", "inside", "worst_distance", "verified",
    ]);
    for e in &records {
        let r = &e.record;
        table.push(vec![
            e.point.to_string(),
            r.tau.to_string(),
            r.t_bound.to_string(),
            r.j.to_string(),
            r.letter.to_string(),
            r.s_w.to_string(),
            r.s0.to_string(),
            r.eps0.to_string(),
            r.samples.to_string(),
            r.inside.to_string(),
            r.worst_distance.to_string(),
            r.verified.to_string(),
        ]);
    }
    let out = WitnessOutput {
        verified_rate: verified as f64 / records.len() as f64,
        targets,
        t_bound,
        empirical_bound: emp,
        records,
    };
    Ok(Artifact::new(&out, table))
}
