//! Constructive porosity witnesses along horocycles.
//!
//! Given `τ` and a uniform hitting bound `T`, take the integer `j` with
//! `e^{j-1}τ < T ≤ e^jτ`, find the hitting time `s_w` of the inner target
//! ball from `φ_j(g)`, and set `s₀ = e^{-j}s_w ∈ [0, τ]`. The slice of size
//! `(ε₀τ, ν₁)` with `ε₀ = ν₁/(3T)` around `e^{s₀U₋}(g)` is then pushed
//! forward by `φ_j` and every sample is checked to land in the target ball.

use serde::{Deserialize, Serialize};

use super::flows::{right_multiply, Direction};
use super::group::{FuchsianGroup, UnitTangentPoint};
use super::hitting::{hitting_time, Ball};
use crate::error::{Error, Result};

/// Radius fraction of the inner ball that the hitting time must reach.
pub const INNER_FRACTION: f64 = 0.5;

/// Smallest admissible `τ` is `K₁ · 2^{-20}` with `K₁ = 3T`.
pub const TAU_FLOOR_EXP: i32 = -20;

/// Slice `Σ^±_{ν₀,ν₁}`: `exp(𝒱v) exp(sU)(x)` with `|s| ≤ ν₀`, `|v| ≤ ν₁`.
///
/// `direction` is the horocycle `U` along the slice; samples form a uniform
/// grid of `n_samples` points per axis on `(s, v₁, v₂, v₃)`, restricted to
/// `|v| ≤ ν₁`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SliceSpec {
    pub nu0: f64,
    pub nu1: f64,
    pub direction: Direction,
    pub n_samples: usize,
}

impl SliceSpec {
    pub fn validate(&self) -> Result<()> {
        if !(self.nu0 > 0.0 && self.nu1 > 0.0 && self.nu0.is_finite() && self.nu1.is_finite()) {
            return Err(Error::invalid("slice", "nu0 and nu1 must be positive"));
        }
        if self.n_samples == 0 {
            return Err(Error::invalid("slice", "n_samples must be at least 1"));
        }
        Ok(())
    }

    /// Parameters `(s, v₁, v₂, v₃)` of the grid samples.
    pub fn parameters(&self) -> Vec<[f64; 4]> {
        let n = self.n_samples;
        let node = |k: usize| if n == 1 { 0.0 } else { -1.0 + 2.0 * k as f64 / (n - 1) as f64 };
        let mut out = Vec::new();
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    for d in 0..n {
                        let v = [node(b) * self.nu1, node(c) * self.nu1, node(d) * self.nu1];
                        if v.iter().map(|x| x * x).sum::<f64>().sqrt() <= self.nu1 * (1.0 + 1e-12) {
                            out.push([node(a) * self.nu0, v[0], v[1], v[2]]);
                        }
                    }
                }
            }
        }
        out
    }
}

/// Slice samples around `center`. The `D` coordinate `v₂` acts on `scale_w`.
pub fn slice_samples(group: &FuchsianGroup, center: &UnitTangentPoint, spec: &SliceSpec) -> Result<Vec<UnitTangentPoint>> {
    spec.validate()?;
    spec.parameters()
        .into_iter()
        .map(|[s, v1, v2, v3]| {
            let m = spec.direction.unipotent(s) * spec.direction.transverse(v1, v3);
            let p = right_multiply(group, center, &m)?;
            Ok(UnitTangentPoint {
                scale_w: p.scale_w * v2.exp(),
                ..p
            })
        })
        .collect()
}

/// The unique integer `j` with `e^{j-1}τ < T ≤ e^jτ`.
pub fn witness_index(tau: f64, t_bound: f64) -> Result<i64> {
    if !(tau > 0.0 && t_bound > 0.0 && tau.is_finite() && t_bound.is_finite()) {
        return Err(Error::invalid("witness_index", "tau and T must be positive"));
    }
    let mut j = (t_bound / tau).ln().ceil() as i64;
    while ((j - 1) as f64).exp() * tau >= t_bound {
        j -= 1;
    }
    while (j as f64).exp() * tau < t_bound {
        j += 1;
    }
    Ok(j)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WitnessRecord {
    pub tau: f64,
    #[serde(rename = "T")]
    pub t_bound: f64,
    pub j: i64,
    /// Index of the target ball (block letter).
    pub letter: usize,
    pub s_w: f64,
    pub s0: f64,
    pub eps0: f64,
    pub k1: f64,
    pub samples: usize,
    pub inside: usize,
    /// Largest distance from a pushed sample to the target center.
    pub worst_distance: f64,
    pub verified: bool,
}

/// Porosity witness for `g` at scale `τ` towards the ball `avoid[letter]`.
///
/// `slice.direction` selects the horocycle (unstable for `Σ⁻`); the flow is
/// pushed in the direction that expands it. `slice.nu0` is ignored: the slice
/// size along the horocycle is `ε₀τ`.
pub fn porosity_witness(
    group: &FuchsianGroup,
    avoid: &[Ball],
    letter: usize,
    g: &UnitTangentPoint,
    tau: f64,
    t_bound: f64,
    slice: &SliceSpec,
) -> Result<WitnessRecord> {
    const OP: &str = "porosity_witness";
    slice.validate()?;
    let target = avoid
        .get(letter)
        .ok_or_else(|| Error::invalid(OP, format!("letter {letter} has no target ball")))?;
    if !(t_bound > 0.0 && t_bound.is_finite()) {
        return Err(Error::invalid(OP, format!("T must be positive, got {t_bound}")));
    }
    let k1 = 3.0 * t_bound;
    if !(tau <= 1.0 && tau >= k1 * 2f64.powi(TAU_FLOOR_EXP)) {
        return Err(Error::invalid(OP, format!("tau must lie in [3T·2^-20, 1], got {tau}")));
    }
    let j = witness_index(tau, t_bound)?;
    let sign = slice.direction.expanding_sign();
    let push = super::moebius::MoebiusElement::a(sign * j as f64);

    let y = right_multiply(group, g, &push)?;
    let s_w = hitting_time(group, &target.shrunk(INNER_FRACTION), &y, t_bound, slice.direction)?.ok_or_else(|| Error::Witness {
        op: OP,
        msg: format!("no hit of ball {letter} within T = {t_bound}"),
    })?;
    let s0 = (-(j as f64)).exp() * s_w;
    let eps0 = slice.nu1 / (3.0 * t_bound);

    let center = right_multiply(group, g, &slice.direction.unipotent(s0))?;
    let spec = SliceSpec {
        nu0: eps0 * tau,
        ..*slice
    };
    let samples = slice_samples(group, &center, &spec)?;
    let mut inside = 0;
    let mut worst = 0.0f64;
    for p in &samples {
        let q = right_multiply(group, p, &push)?;
        let d = target.center.distance(&q.rep);
        worst = worst.max(d);
        inside += usize::from(d <= target.radius);
    }
    Ok(WitnessRecord {
        tau,
        t_bound,
        j,
        letter,
        s_w,
        s0,
        eps0,
        k1,
        samples: samples.len(),
        inside,
        worst_distance: worst,
        verified: inside == samples.len(),
    })
}
