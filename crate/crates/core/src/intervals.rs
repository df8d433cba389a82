//! Finite unions of closed intervals and porosity certification.
//!
//! A set Ω is ν-porous on scales α0 to α1 when every interval `I` with
//! `|I| ∈ [α0, α1]` contains a subinterval of length `ν|I|` that misses Ω.
//! [`porosity_check`] decides a discrete version of this on a ladder of
//! scales and translates that is strong enough to certify the continuum
//! statement with constant `ν/4`.

use rand::Rng as _;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng;

/// Relative slack used when comparing a measured gap against `ν·|I|`.
const GAP_SLACK: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "[f64; 2]", into = "[f64; 2]")]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if !lo.is_finite() || !hi.is_finite() {
            return Err(Error::invalid("interval", format!("non-finite endpoint in [{lo}, {hi}]")));
        }
        if lo > hi {
            return Err(Error::invalid("interval", format!("lo > hi in [{lo}, {hi}]")));
        }
        Ok(Interval { lo, hi })
    }

    pub const fn unit() -> Self {
        Interval { lo: 0.0, hi: 1.0 }
    }

    pub fn len(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn is_degenerate(&self) -> bool {
        self.lo == self.hi
    }

    pub fn contains_point(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }

    pub fn contains(&self, other: &Interval) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }

    /// Closed-interval intersection test.
    pub fn intersects(&self, other: &Interval) -> bool {
        self.lo <= other.hi && other.lo <= self.hi
    }

    pub fn fatten(&self, s: f64) -> Interval {
        Interval {
            lo: self.lo - s,
            hi: self.hi + s,
        }
    }

    pub fn midpoint(&self) -> f64 {
        0.5 * (self.lo + self.hi)
    }
}

impl TryFrom<[f64; 2]> for Interval {
    type Error = Error;

    fn try_from(v: [f64; 2]) -> Result<Self> {
        Interval::new(v[0], v[1])
    }
}

impl From<Interval> for [f64; 2] {
    fn from(i: Interval) -> Self {
        [i.lo, i.hi]
    }
}

/// Sorted, pairwise disjoint closed intervals inside a working window.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawIntervalSet", into = "RawIntervalSet")]
pub struct IntervalSet {
    parts: Vec<Interval>,
    window: Interval,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawIntervalSet {
    #[serde(default = "Interval::unit")]
    window: Interval,
    parts: Vec<Interval>,
}

impl TryFrom<RawIntervalSet> for IntervalSet {
    type Error = Error;

    fn try_from(raw: RawIntervalSet) -> Result<Self> {
        IntervalSet::with_window(raw.parts, raw.window)
    }
}

impl From<IntervalSet> for RawIntervalSet {
    fn from(s: IntervalSet) -> Self {
        RawIntervalSet {
            window: s.window,
            parts: s.parts,
        }
    }
}

impl IntervalSet {
    /// Normalizes `raw` inside the default window `[0, 1]`.
    pub fn new(raw: impl IntoIterator<Item = Interval>) -> Result<Self> {
        normalize(raw, Interval::unit())
    }

    pub fn with_window(raw: impl IntoIterator<Item = Interval>, window: Interval) -> Result<Self> {
        normalize(raw, window)
    }

    /// Builds a set from `(lo, hi)` pairs, validating every endpoint.
    pub fn from_pairs(pairs: &[(f64, f64)]) -> Result<Self> {
        let raw = pairs
            .iter()
            .map(|&(lo, hi)| Interval::new(lo, hi))
            .collect::<Result<Vec<_>>>()?;
        IntervalSet::new(raw)
    }

    pub fn empty() -> Self {
        IntervalSet {
            parts: Vec::new(),
            window: Interval::unit(),
        }
    }

    pub fn full() -> Self {
        IntervalSet {
            parts: vec![Interval::unit()],
            window: Interval::unit(),
        }
    }

    pub fn parts(&self) -> &[Interval] {
        &self.parts
    }

    pub fn window(&self) -> Interval {
        self.window
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// Lebesgue measure.
    pub fn measure(&self) -> f64 {
        self.parts.iter().map(Interval::len).sum()
    }

    pub fn contains_point(&self, x: f64) -> bool {
        let idx = self.parts.partition_point(|p| p.hi < x);
        self.parts.get(idx).is_some_and(|p| p.lo <= x)
    }

    /// True if the closed interval `i` meets the set.
    pub fn intersects(&self, i: &Interval) -> bool {
        let idx = self.parts.partition_point(|p| p.hi < i.lo);
        self.parts.get(idx).is_some_and(|p| p.lo <= i.hi)
    }

    /// True if every part of `other` lies inside a part of `self`.
    pub fn covers(&self, other: &IntervalSet) -> bool {
        other.parts.iter().all(|q| {
            let idx = self.parts.partition_point(|p| p.hi < q.lo);
            self.parts.get(idx).is_some_and(|p| p.contains(q))
        })
    }

    /// `X(s) = X + [-s, s]`, clipped to the window.
    pub fn neighborhood(&self, s: f64) -> Result<IntervalSet> {
        if !(s >= 0.0) || !s.is_finite() {
            return Err(Error::invalid("neighborhood", format!("radius must be finite and >= 0, got {s}")));
        }
        if s == 0.0 {
            return Ok(self.clone());
        }
        normalize(self.parts.iter().map(|p| p.fatten(s)), self.window)
    }

    /// Longest Ω-free subinterval of `i`, leftmost on ties.
    ///
    /// The returned `J` is the closure of an Ω-free open interval, so its
    /// endpoints may touch Ω. When `i` is covered by the set the result is the
    /// degenerate interval at `i.lo` with length zero.
    pub fn largest_gap(&self, i: &Interval) -> (Interval, f64) {
        let mut best = Interval { lo: i.lo, hi: i.lo };
        let mut best_len = 0.0;
        let mut cursor = i.lo;
        let start = self.parts.partition_point(|p| p.hi < i.lo);
        for p in &self.parts[start..] {
            if p.lo > i.hi {
                break;
            }
            if p.lo > cursor {
                let len = p.lo - cursor;
                if len > best_len {
                    best_len = len;
                    best = Interval { lo: cursor, hi: p.lo };
                }
            }
            cursor = cursor.max(p.hi);
            if cursor >= i.hi {
                break;
            }
        }
        if i.hi > cursor {
            let len = i.hi - cursor;
            if len > best_len {
                best_len = len;
                best = Interval { lo: cursor, hi: i.hi };
            }
        }
        (best, best_len)
    }

    /// Union with another set in the same window.
    pub fn union(&self, other: &IntervalSet) -> Result<IntervalSet> {
        normalize(self.parts.iter().chain(other.parts.iter()).copied(), self.window)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("interval sets always serialize")
    }

    pub fn from_json(s: &str) -> Result<IntervalSet> {
        serde_json::from_str(s).map_err(|e| Error::invalid("interval_set", e.to_string()))
    }
}

/// Sorts, merges overlapping or touching intervals and clips to `window`.
pub fn normalize(raw: impl IntoIterator<Item = Interval>, window: Interval) -> Result<IntervalSet> {
    if !window.lo.is_finite() || !window.hi.is_finite() || window.lo > window.hi {
        return Err(Error::invalid("normalize", "window must be a finite interval"));
    }
    let mut items: Vec<Interval> = Vec::new();
    for iv in raw {
        if !iv.lo.is_finite() || !iv.hi.is_finite() || iv.lo > iv.hi {
            return Err(Error::invalid("normalize", format!("bad interval [{}, {}]", iv.lo, iv.hi)));
        }
        if iv.hi < window.lo || iv.lo > window.hi {
            continue;
        }
        items.push(Interval {
            lo: iv.lo.max(window.lo),
            hi: iv.hi.min(window.hi),
        });
    }
    items.sort_by(|a, b| a.lo.total_cmp(&b.lo).then(a.hi.total_cmp(&b.hi)));
    let mut parts: Vec<Interval> = Vec::with_capacity(items.len());
    for iv in items {
        match parts.last_mut() {
            Some(last) if iv.lo <= last.hi => last.hi = last.hi.max(iv.hi),
            _ => parts.push(iv),
        }
    }
    Ok(IntervalSet { parts, window })
}

/// Middle-thirds Cantor approximation of the given level inside `[0, 1]`.
pub fn triadic_cantor(level: u32) -> IntervalSet {
    let mut parts = vec![Interval::unit()];
    for _ in 0..level {
        let mut next = Vec::with_capacity(parts.len() * 2);
        for p in &parts {
            let third = p.len() / 3.0;
            next.push(Interval { lo: p.lo, hi: p.lo + third });
            next.push(Interval { lo: p.hi - third, hi: p.hi });
        }
        parts = next;
    }
    IntervalSet {
        parts,
        window: Interval::unit(),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PorosityReport {
    pub certified: bool,
    pub nu_nominal: f64,
    /// Continuum porosity constant implied by the ladder scan (`ν/4`), or 0.
    pub nu_certified: f64,
    /// A ladder window whose largest Ω-free subinterval is shorter than `ν|I|`.
    pub witness: Option<Interval>,
    pub witness_gap: Option<f64>,
    pub scales: (f64, f64),
    pub windows_checked: u64,
}

/// Scales `α0·2^k` below `α1`, followed by `α1`, each capped at the window length.
fn ladder(alpha0: f64, alpha1: f64, window_len: f64) -> Vec<f64> {
    let mut scales = Vec::new();
    let mut l = alpha0;
    while l < alpha1 * (1.0 - 1e-12) && l <= window_len {
        scales.push(l);
        l *= 2.0;
    }
    if alpha1 <= window_len {
        scales.push(alpha1);
    } else if scales.last().is_none_or(|&s| s < window_len) {
        scales.push(window_len);
    }
    scales
}

/// Ladder-and-translates porosity scan.
///
/// Scales run over `α0, 2α0, 4α0, …` plus `α1`; at each scale `ℓ` windows are
/// translated by `νℓ/4` across the set's window (the last one flush with the
/// right edge). Passing every window with gap fraction `ν` certifies the
/// continuum definition with constant `ν/4` for intervals inside the window:
/// any such `I` is within `νℓ/4` of a ladder window of length `ℓ ∈ (|I|/2, |I|]`,
/// so at least `3νℓ/4 ≥ 3ν|I|/8` of that window's gap lies in `I`.
///
/// Scales are scanned from the largest down, so the reported witness is the
/// coarsest failing window.
pub fn porosity_check(omega: &IntervalSet, nu: f64, alpha0: f64, alpha1: f64) -> Result<PorosityReport> {
    const OP: &str = "porosity_check";
    if !(nu > 0.0 && nu < 1.0) {
        return Err(Error::invalid(OP, format!("nu must lie in (0,1), got {nu}")));
    }
    if !(alpha0 > 0.0) || !alpha1.is_finite() {
        return Err(Error::invalid(OP, format!("scales must be positive and finite, got {alpha0}, {alpha1}")));
    }
    if alpha0 > alpha1 {
        return Err(Error::invalid(OP, format!("alpha0 = {alpha0} exceeds alpha1 = {alpha1}")));
    }
    let window = omega.window();
    let mut checked = 0u64;
    let mut scales = ladder(alpha0, alpha1, window.len());
    scales.reverse();
    for ell in scales {
        let step = nu * ell / 4.0;
        let last_start = window.hi - ell;
        let mut k = 0u64;
        loop {
            let mut lo = window.lo + k as f64 * step;
            let done = lo >= last_start;
            if done {
                lo = last_start;
            }
            let w = Interval { lo, hi: lo + ell };
            let (_, gap) = omega.largest_gap(&w);
            checked += 1;
            if gap < nu * ell * (1.0 - GAP_SLACK) {
                return Ok(PorosityReport {
                    certified: false,
                    nu_nominal: nu,
                    nu_certified: 0.0,
                    witness: Some(w),
                    witness_gap: Some(gap),
                    scales: (alpha0, alpha1),
                    windows_checked: checked,
                });
            }
            if done {
                break;
            }
            k += 1;
        }
    }
    Ok(PorosityReport {
        certified: true,
        nu_nominal: nu,
        nu_certified: nu / 4.0,
        witness: None,
        witness_gap: None,
        scales: (alpha0, alpha1),
        windows_checked: checked,
    })
}

/// Largest child ratio for which a two-ended Cantor dust keeps gap fraction `ν`
/// in every window, from `(1 - 2r) / (3 - 4r) = ν`.
fn dust_ratio(nu: f64) -> f64 {
    (1.0 - 3.0 * nu) / (2.0 - 4.0 * nu)
}

fn cantor_dust(ratio: f64, leaf: f64, rng: &mut rng::Rng) -> Vec<Interval> {
    let mut out = Vec::new();
    let mut stack = vec![Interval::unit()];
    while let Some(cell) = stack.pop() {
        let len = cell.len();
        if len < leaf {
            out.push(cell);
            continue;
        }
        let r = ratio * rng.gen_range(0.6..=1.0);
        let left = Interval { lo: cell.lo, hi: cell.lo + r * len };
        let right = Interval { lo: cell.hi - r * len, hi: cell.hi };
        let u: f64 = rng.gen();
        if u < 0.7 {
            stack.push(right);
            stack.push(left);
        } else if u < 0.85 {
            stack.push(left);
        } else {
            stack.push(right);
        }
    }
    out
}

/// Random set that passes `porosity_check(·, ν, α0, 1)`; deterministic in `seed`.
///
/// For `ν ≤ 1/3` the set is a random two-ended Cantor dust: each cell keeps one
/// or both end pieces of relative length below [`dust_ratio`], down to pieces
/// shorter than `α0/4`. Above `1/3` no set with a cluster of positive length
/// can keep gap fraction `ν` in windows centred on it, so the generator returns
/// one or two isolated points. Every candidate is validated with
/// [`porosity_check`] and redrawn on failure.
pub fn random_porous(nu: f64, alpha0: f64, seed: u64) -> Result<IntervalSet> {
    const OP: &str = "random_porous";
    if !(nu > 0.0 && nu <= 0.5) {
        return Err(Error::invalid(OP, format!("nu must lie in (0, 1/2], got {nu}")));
    }
    if !(alpha0 > 0.0 && alpha0 <= 1.0) {
        return Err(Error::invalid(OP, format!("alpha0 must lie in (0, 1], got {alpha0}")));
    }
    let mut rng = rng::stream(seed, 0);
    if nu > 1.0 / 3.0 {
        return isolated_points(nu, alpha0, &mut rng);
    }
    let mut ratio = (0.85 * dust_ratio(nu)).max(0.02);
    for _round in 0..12 {
        for _attempt in 0..16 {
            let set = IntervalSet::new(cantor_dust(ratio, alpha0 / 4.0, &mut rng))?;
            if porosity_check(&set, nu, alpha0, 1.0)?.certified {
                return Ok(set);
            }
        }
        ratio *= 0.5;
    }
    Err(Error::Construction {
        op: OP,
        level: 0,
        index: 0,
        msg: format!("no certified set found for nu = {nu}, alpha0 = {alpha0}"),
    })
}

fn isolated_points(nu: f64, alpha0: f64, rng: &mut rng::Rng) -> Result<IntervalSet> {
    let point = |x: f64| Interval { lo: x, hi: x };
    let first = point(rng.gen_range(0.1..0.9));
    let base = IntervalSet::new([first])?;
    for _ in 0..32 {
        let candidate = IntervalSet::new([first, point(rng.gen_range(0.0..1.0))])?;
        if porosity_check(&candidate, nu, alpha0, 1.0)?.certified {
            return Ok(candidate);
        }
    }
    Ok(base)
}
