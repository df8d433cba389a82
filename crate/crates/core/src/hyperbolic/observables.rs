//! Γ-invariant observables, horocycle time averages and Liouville averages.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::flows::Direction;
use super::group::{FuchsianGroup, UnitTangentPoint};
use super::moebius::{hyperbolic_distance, MoebiusElement};
use crate::error::{Error, Result};
use crate::{par, rng};

/// Samples drawn per random stream in [`liouville_average`].
const CHUNK: u64 = 1024;

/// `f(g) = ψ(d(reduce(g)·i, q) / r)` with `ψ(u) = exp(1 - 1/(1 - u²))` on
/// `u < 1`, or a constant.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum Observable {
    Constant { value: f64 },
    Bump { center: [f64; 2], radius: f64 },
}

impl Default for Observable {
    /// Bump of radius 1.5 at `i`, inside the Bolza octagon's inscribed disk.
    fn default() -> Self {
        Observable::Bump {
            center: [0.0, 1.0],
            radius: 1.5,
        }
    }
}

/// `exp(1 - 1/(1 - u²))` for `|u| < 1`, else 0; equals 1 at `u = 0`.
pub fn bump_profile(u: f64) -> f64 {
    if u.abs() >= 1.0 {
        0.0
    } else {
        (1.0 - 1.0 / (1.0 - u * u)).exp()
    }
}

impl Observable {
    pub fn validate(&self) -> Result<()> {
        match *self {
            Observable::Constant { value } if !value.is_finite() => Err(Error::invalid("observable", "constant must be finite")),
            Observable::Bump { center, radius } if !(center[1] > 0.0 && center[0].is_finite() && radius > 0.0 && radius.is_finite()) => Err(
                Error::invalid("observable", "bump needs a center in the upper half plane and a positive radius"),
            ),
            _ => Ok(()),
        }
    }

    /// Value at an already reduced representative.
    pub fn eval_reduced(&self, rep: &MoebiusElement) -> f64 {
        match *self {
            Observable::Constant { value } => value,
            Observable::Bump { center, radius } => {
                let d = hyperbolic_distance(rep.base_point(), Complex64::new(center[0], center[1]));
                bump_profile(d / radius)
            }
        }
    }

    pub fn eval(&self, group: &FuchsianGroup, g: &MoebiusElement) -> Result<f64> {
        match self {
            Observable::Constant { value } => Ok(*value),
            Observable::Bump { .. } => Ok(self.eval_reduced(&group.reduce(g)?)),
        }
    }
}

/// `⟨f⟩_T = (1/T) ∫_0^T f(e^{sU₊} g) ds` by the midpoint rule with `n_steps`
/// nodes, reducing after every step.
pub fn horocycle_average(group: &FuchsianGroup, f: &Observable, g: &UnitTangentPoint, t_max: f64, n_steps: usize) -> Result<f64> {
    horocycle_average_along(group, f, g, t_max, n_steps, Direction::Stable)
}

pub fn horocycle_average_along(
    group: &FuchsianGroup,
    f: &Observable,
    g: &UnitTangentPoint,
    t_max: f64,
    n_steps: usize,
    direction: Direction,
) -> Result<f64> {
    const OP: &str = "horocycle_average";
    if !(t_max > 0.0 && t_max.is_finite()) {
        return Err(Error::invalid(OP, format!("T must be positive, got {t_max}")));
    }
    if n_steps < 2 {
        return Err(Error::invalid(OP, "n_steps must be at least 2"));
    }
    f.validate()?;
    if let Observable::Constant { value } = *f {
        return Ok(value);
    }
    let ds = t_max / n_steps as f64;
    let step = direction.unipotent(ds);
    let mut cur = group.reduce(&(g.rep * direction.unipotent(ds / 2.0)))?;
    let mut sum = 0.0;
    for k in 0..n_steps {
        if k > 0 {
            cur = group.reduce(&(cur * step))?;
        }
        sum += f.eval_reduced(&cur);
    }
    Ok(sum / n_steps as f64)
}

/// Horocycle averages from many starting points, in parallel.
pub fn horocycle_averages(
    group: &FuchsianGroup,
    f: &Observable,
    points: &[UnitTangentPoint],
    t_max: f64,
    n_steps: usize,
) -> Result<Vec<f64>> {
    par::map_indexed(points, |_, p| horocycle_average(group, f, p, t_max, n_steps))
        .into_iter()
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LiouvilleEstimate {
    pub mean: f64,
    pub std_error: f64,
    pub n_samples: u64,
}

/// Monte Carlo estimate of `∫ f dμ_L` from Haar-uniform samples of the
/// reduced fundamental domain. Streams of 1024 samples are split from `seed`.
pub fn liouville_average(group: &FuchsianGroup, f: &Observable, n_samples: u64, seed: u64) -> Result<LiouvilleEstimate> {
    if n_samples == 0 {
        return Err(Error::invalid("liouville_average", "n_samples must be at least 1"));
    }
    f.validate()?;
    let chunks: Vec<u64> = (0..n_samples.div_ceil(CHUNK)).collect();
    let parts = par::map_indexed(&chunks, |_, &c| {
        let mut rng = rng::stream(seed, c);
        let count = (n_samples - c * CHUNK).min(CHUNK);
        let (mut sum, mut sq) = (0.0, 0.0);
        for _ in 0..count {
            let v = f.eval_reduced(&group.sample_uniform(&mut rng));
            sum += v;
            sq += v * v;
        }
        (sum, sq)
    });
    let n = n_samples as f64;
    let (sum, sq) = parts.iter().fold((0.0, 0.0), |a, p| (a.0 + p.0, a.1 + p.1));
    let mean = sum / n;
    let var = if n_samples > 1 { ((sq - n * mean * mean) / (n - 1.0)).max(0.0) } else { 0.0 };
    Ok(LiouvilleEstimate {
        mean,
        std_error: (var / n).sqrt(),
        n_samples,
    })
}

/// Starting points drawn Haar-uniformly, one stream per index.
pub fn random_points(group: &FuchsianGroup, n: usize, seed: u64) -> Vec<UnitTangentPoint> {
    (0..n as u64)
        .map(|k| UnitTangentPoint {
            rep: group.sample_uniform(&mut rng::stream(seed, k)),
            scale_w: 1.0,
        })
        .collect()
}
