//! Cantor-tree embedding of porous sets into Ahlfors–David regular sets.
//!
//! With `L = ⌈2/ν⌉`, each kept interval `I_{m,k} = [m L^{-k}, (m+1) L^{-k}]`
//! drops one of its `L` children. Down to the cutoff level `k0` the dropped
//! child is chosen inside a gap of Ω, so Ω stays inside the kept intervals;
//! below `k0` the leftmost child `n(m,k) = Lm` is dropped. The limit set `X`
//! carries the measure giving every kept level-`k` interval mass `(L-1)^{-k}`,
//! which is `δ`-regular with `δ = log(L-1)/log L` and constant `2L`.

use rand::Rng as _;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::intervals::{Interval, IntervalSet};
use crate::{par, rng};

/// Levels stored below the cutoff, where child selection is fixed.
pub const DEFAULT_EXTRA_LEVELS: u32 = 4;

/// Node indices and `L^depth` must stay exactly representable as `f64`.
const MAX_GRID: u64 = 1 << 53;

/// Cap on the number of nodes enumerated when building neighborhoods.
const MAX_ENUMERATED_NODES: usize = 1 << 22;

/// Kept-interval sets `M(k)`; only levels `0..=k0+1` are stored.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawTree", into = "RawTree")]
pub struct CantorTree {
    base_l: u64,
    k0: u32,
    depth: u32,
    kept: Vec<Vec<u64>>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawTree {
    #[serde(rename = "L")]
    l: u64,
    k0: u32,
    depth: u32,
    kept: Vec<Vec<u64>>,
}

impl From<CantorTree> for RawTree {
    fn from(t: CantorTree) -> Self {
        RawTree {
            l: t.base_l,
            k0: t.k0,
            depth: t.depth,
            kept: t.kept,
        }
    }
}

impl TryFrom<RawTree> for CantorTree {
    type Error = Error;

    fn try_from(raw: RawTree) -> Result<Self> {
        let tree = CantorTree {
            base_l: raw.l,
            k0: raw.k0,
            depth: raw.depth,
            kept: raw.kept,
        };
        tree.validate()?;
        Ok(tree)
    }
}

fn checked_pow(l: u64, k: u32) -> Option<u64> {
    l.checked_pow(k).filter(|&p| p <= MAX_GRID)
}

impl CantorTree {
    /// Tree that drops the leftmost child at every level.
    pub fn uniform(base_l: u64, k0: u32, extra_levels: u32) -> Result<Self> {
        if base_l < 3 {
            return Err(Error::invalid("cantor_tree", format!("L must be at least 3, got {base_l}")));
        }
        let depth = k0 + extra_levels.max(1);
        if checked_pow(base_l, depth).is_none() {
            return Err(resource_depth(base_l, depth));
        }
        let mut kept = vec![vec![0u64]];
        for _ in 0..=k0 {
            let prev = kept.last().unwrap();
            let next = prev.iter().flat_map(|&m| (1..base_l).map(move |i| m * base_l + i)).collect();
            kept.push(next);
        }
        Ok(CantorTree {
            base_l,
            k0,
            depth,
            kept,
        })
    }

    fn validate(&self) -> Result<()> {
        const OP: &str = "cantor_tree";
        let l = self.base_l;
        if l < 3 {
            return Err(Error::invalid(OP, format!("L must be at least 3, got {l}")));
        }
        if self.depth <= self.k0 {
            return Err(Error::invalid(OP, "depth must exceed k0"));
        }
        if checked_pow(l, self.depth).is_none() {
            return Err(resource_depth(l, self.depth));
        }
        if self.kept.len() != self.k0 as usize + 2 {
            return Err(Error::invalid(OP, format!("expected {} kept levels, got {}", self.k0 + 2, self.kept.len())));
        }
        if self.kept[0] != [0] {
            return Err(Error::invalid(OP, "level 0 must be [0]"));
        }
        for k in 0..=self.k0 as usize {
            let parents = &self.kept[k];
            let children = &self.kept[k + 1];
            if children.windows(2).any(|w| w[0] >= w[1]) {
                return Err(Error::invalid(OP, format!("level {} is not strictly increasing", k + 1)));
            }
            if children.len() != parents.len() * (l as usize - 1) {
                return Err(Error::invalid(OP, format!("level {} must keep L-1 children per node", k + 1)));
            }
            if children.iter().any(|&c| parents.binary_search(&(c / l)).is_err()) {
                return Err(Error::invalid(OP, format!("level {} has a child of a dropped node", k + 1)));
            }
        }
        Ok(())
    }

    pub fn base_l(&self) -> u64 {
        self.base_l
    }

    pub fn k0(&self) -> u32 {
        self.k0
    }

    pub fn depth(&self) -> u32 {
        self.depth
    }

    /// Deepest explicitly stored level, `k0 + 1`.
    pub fn explicit_level(&self) -> u32 {
        self.k0 + 1
    }

    /// Stored kept indices at level `k ≤ k0 + 1`.
    pub fn kept(&self, k: u32) -> Option<&[u64]> {
        self.kept.get(k as usize).map(Vec::as_slice)
    }

    pub fn node(&self, k: u32, m: u64) -> Interval {
        let scale = self.base_l.pow(k) as f64;
        Interval {
            lo: m as f64 / scale,
            hi: (m + 1) as f64 / scale,
        }
    }

    /// Membership of `I_{m,k}` in `M(k)` for any `k ≤ depth`.
    pub fn is_kept(&self, k: u32, m: u64) -> bool {
        let top = self.explicit_level();
        if k <= top {
            return self.kept[k as usize].binary_search(&m).is_ok();
        }
        if k > self.depth {
            return false;
        }
        let mut m = m;
        for _ in top..k {
            if m.is_multiple_of(self.base_l) {
                return false;
            }
            m /= self.base_l;
        }
        self.kept[top as usize].binary_search(&m).is_ok()
    }

    /// `(L-1)^{-k}`.
    pub fn weight(&self, k: u32) -> f64 {
        ((self.base_l - 1) as f64).powi(-(k as i32))
    }

    /// Kept indices at level `k`, expanding implicit levels below `k0 + 1`.
    fn kept_at(&self, k: u32) -> Result<Vec<u64>> {
        let top = self.explicit_level();
        if k <= top {
            return Ok(self.kept[k as usize].clone());
        }
        let l = self.base_l;
        let count = self.kept[top as usize].len() as f64 * ((l - 1) as f64).powi((k - top) as i32);
        if count > MAX_ENUMERATED_NODES as f64 {
            return Err(Error::Resource {
                op: "cantor_tree",
                msg: format!("level {k} has {count:.0} kept nodes"),
            });
        }
        let mut level = self.kept[top as usize].clone();
        for _ in top..k {
            level = level.iter().flat_map(|&m| (1..l).map(move |i| m * l + i)).collect();
        }
        Ok(level)
    }

    /// Smallest and largest points of `X` inside a kept node at level `k ≥ k0 + 1`.
    fn hull(&self, k: u32, m: u64) -> Interval {
        let node = self.node(k, m);
        Interval {
            lo: node.lo + node.len() / (self.base_l - 1) as f64,
            hi: node.hi,
        }
    }

    /// `X(s)` for the limit set, exact for `s ≥ L^{-depth}`.
    ///
    /// At a level whose nodes are no longer than `s`, every point between the
    /// extreme points of `X` in a node is within `s` of `X`, so the union of
    /// the fattened hulls is the neighborhood.
    pub fn neighborhood(&self, s: f64) -> Result<IntervalSet> {
        const OP: &str = "regular_neighborhood";
        let finest = self.base_l.pow(self.depth) as f64;
        if !(s * finest >= 1.0) || !s.is_finite() {
            return Err(Error::invalid(OP, format!("radius {s} is below the tree resolution L^-depth")));
        }
        let mut k = self.explicit_level();
        while k < self.depth && s * (self.base_l.pow(k) as f64) < 1.0 {
            k += 1;
        }
        let parts = self.kept_at(k)?.into_iter().map(|m| self.hull(k, m).fatten(s));
        IntervalSet::new(parts)
    }

    /// Extreme points of `X` at the stored leaf level, which all lie in `X`.
    pub fn sample_point(&self, rng: &mut rng::Rng) -> f64 {
        let top = self.explicit_level();
        let leaves = &self.kept[top as usize];
        let mut m = leaves[rng.gen_range(0..leaves.len())];
        for _ in top..self.depth {
            m = m * self.base_l + rng.gen_range(1..self.base_l);
        }
        self.node(self.depth, m).hi
    }
}

fn resource_depth(l: u64, depth: u32) -> Error {
    Error::Resource {
        op: "cantor_tree",
        msg: format!("L^depth = {l}^{depth} exceeds 2^53"),
    }
}

/// `L = ⌈2/ν⌉`.
pub fn base_for(nu: f64) -> Result<u64> {
    if !(nu > 0.0 && nu < 1.0) {
        return Err(Error::invalid("embed_porous", format!("nu must lie in (0,1), got {nu}")));
    }
    Ok(((2.0 / nu) * (1.0 - 1e-12)).ceil().max(3.0) as u64)
}

/// The integer `k0` with `L^{-1-k0} < α0 ≤ L^{-k0}`.
pub fn cutoff_level(base_l: u64, alpha0: f64) -> Result<u32> {
    if !(alpha0 > 0.0 && alpha0 <= 1.0) {
        return Err(Error::invalid("embed_porous", format!("alpha0 must lie in (0,1], got {alpha0}")));
    }
    let mut k0 = 0u32;
    loop {
        let next = checked_pow(base_l, k0 + 1).ok_or_else(|| resource_depth(base_l, k0 + 1))?;
        if alpha0 * next as f64 > 1.0 {
            return Ok(k0);
        }
        k0 += 1;
    }
}

/// Embeds a porous `Ω ⊆ [0,1]` into the limit set of a Cantor tree with
/// `Ω ⊆ X(α0)`.
///
/// At each kept node down to level `k0` the dropped child is the leftmost
/// child lying inside the node's largest Ω-gap and missing Ω; if the gap
/// holds none, any Ω-free child is used. A node without an Ω-free child means
/// Ω is not porous enough and yields a construction error naming the node.
pub fn embed_porous(omega: &IntervalSet, nu: f64, alpha0: f64) -> Result<CantorTree> {
    embed_porous_with(omega, nu, alpha0, DEFAULT_EXTRA_LEVELS)
}

pub fn embed_porous_with(omega: &IntervalSet, nu: f64, alpha0: f64, extra_levels: u32) -> Result<CantorTree> {
    const OP: &str = "embed_porous";
    let l = base_for(nu)?;
    let k0 = cutoff_level(l, alpha0)?;
    if let (Some(first), Some(last)) = (omega.parts().first(), omega.parts().last()) {
        if first.lo < 0.0 || last.hi > 1.0 {
            return Err(Error::invalid(OP, "the set must lie inside [0,1]"));
        }
    }
    let depth = k0 + extra_levels.max(1);
    if checked_pow(l, depth).is_none() {
        return Err(resource_depth(l, depth));
    }
    let mut kept: Vec<Vec<u64>> = vec![vec![0]];
    for k in 0..=k0 {
        let child_scale = l.pow(k + 1) as f64;
        let child = |c: u64| Interval {
            lo: c as f64 / child_scale,
            hi: (c + 1) as f64 / child_scale,
        };
        let mut next = Vec::with_capacity(kept[k as usize].len() * (l as usize - 1));
        for &m in &kept[k as usize] {
            let node = Interval {
                lo: m as f64 * l as f64 / child_scale,
                hi: (m + 1) as f64 * l as f64 / child_scale,
            };
            let (gap, _) = omega.largest_gap(&node);
            let children = m * l..(m + 1) * l;
            let free = |c: &u64| !omega.intersects(&child(*c));
            let removed = children
                .clone()
                .find(|c| gap.contains(&child(*c)) && free(c))
                .or_else(|| children.clone().find(free))
                .ok_or_else(|| Error::Construction {
                    op: OP,
                    level: k as usize,
                    index: m,
                    msg: format!("no child of [{}, {}] avoids the set", node.lo, node.hi),
                })?;
            next.extend(children.filter(|&c| c != removed));
        }
        kept.push(next);
    }
    let tree = CantorTree {
        base_l: l,
        k0,
        depth,
        kept,
    };
    if !contains_in_neighborhood(&tree, omega, alpha0)? {
        return Err(Error::Construction {
            op: OP,
            level: k0 as usize + 1,
            index: 0,
            msg: "containment in X(alpha0) failed".into(),
        });
    }
    Ok(tree)
}

/// Checks `Ω ⊆ X(α0)` by interval containment and on the grid `α0·ℤ ∩ [0,1]`.
pub fn contains_in_neighborhood(tree: &CantorTree, omega: &IntervalSet, alpha0: f64) -> Result<bool> {
    let x = tree.neighborhood(alpha0)?;
    if !x.covers(omega) {
        return Ok(false);
    }
    let steps = (1.0 / alpha0).floor() as u64;
    Ok((0..=steps)
        .map(|i| i as f64 * alpha0)
        .all(|p| !omega.contains_point(p) || x.contains_point(p)))
}

/// The natural probability measure on the limit set of a tree.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegularMeasure {
    pub tree: CantorTree,
    pub delta: f64,
    pub c_r: f64,
}

impl RegularMeasure {
    pub fn new(tree: CantorTree) -> Self {
        let l = tree.base_l as f64;
        RegularMeasure {
            delta: (l - 1.0).ln() / l.ln(),
            c_r: 2.0 * l,
            tree,
        }
    }

    /// `μ_X([0, x])`.
    pub fn cdf(&self, x: f64) -> f64 {
        if x <= 0.0 {
            return 0.0;
        }
        if x >= 1.0 {
            return 1.0;
        }
        let tree = &self.tree;
        let top = tree.explicit_level();
        let leaves = &tree.kept[top as usize];
        let n = tree.base_l.pow(top);
        let pos = x * n as f64;
        let m = (pos.floor() as u64).min(n - 1);
        let below = leaves.partition_point(|&j| j < m);
        let w = tree.weight(top);
        let mut acc = below as f64 * w;
        if leaves.binary_search(&m).is_ok() {
            acc += w * self_similar_cdf(pos - m as f64, tree.base_l);
        }
        acc
    }

    /// `μ_X(I)`, exact up to rounding for any interval.
    pub fn measure_of_interval(&self, i: &Interval) -> f64 {
        (self.cdf(i.hi) - self.cdf(i.lo)).max(0.0)
    }

    pub fn ratio(&self, i: &Interval) -> f64 {
        self.measure_of_interval(i) / i.len().powf(self.delta)
    }
}

/// Distribution function of the measure on `[0,1]` that drops the leftmost
/// of `L` children at every level.
fn self_similar_cdf(t: f64, l: u64) -> f64 {
    let lf = l as f64;
    let mut t = t.clamp(0.0, 1.0);
    let mut acc = 0.0;
    let mut scale = 1.0;
    while scale > 1e-18 {
        let y = t * lf;
        let d = (y.floor() as u64).min(l - 1);
        if d == 0 {
            break;
        }
        acc += scale * (d - 1) as f64 / (lf - 1.0);
        scale /= lf - 1.0;
        t = (y - d as f64).clamp(0.0, 1.0);
    }
    acc
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegularityReport {
    pub upper_ok: bool,
    pub lower_ok: bool,
    pub worst_upper_ratio: f64,
    pub worst_lower_ratio: f64,
    pub upper_violations: u64,
    pub lower_violations: u64,
    pub samples: u64,
    pub c_r: f64,
}

const CHUNK: usize = 1024;

/// Random interval with length log-uniform in `[L^{-depth}, 1]` inside `[0,1]`.
fn random_interval(mu: &RegularMeasure, rng: &mut rng::Rng) -> Interval {
    let min_log = -(mu.tree.depth as f64) * (mu.tree.base_l as f64).ln();
    let len = rng.gen_range(min_log..=0.0f64).exp();
    let lo = rng.gen_range(0.0..=1.0 - len);
    Interval { lo, hi: lo + len }
}

/// Interval centred at a point of `X` with length log-uniform in `[L^{-depth}, 1]`.
fn random_centered(mu: &RegularMeasure, rng: &mut rng::Rng) -> Interval {
    let min_log = -(mu.tree.depth as f64) * (mu.tree.base_l as f64).ln();
    let len = rng.gen_range(min_log..=0.0f64).exp();
    let x = mu.tree.sample_point(rng);
    Interval {
        lo: x - len / 2.0,
        hi: x + len / 2.0,
    }
}

/// Samples `n_samples` arbitrary intervals for the upper bound and as many
/// intervals centred on `X` for the lower bound, in parallel chunks whose
/// streams are split from `seed`.
pub fn regularity_check(mu: &RegularMeasure, n_samples: u64, seed: u64) -> Result<RegularityReport> {
    if n_samples == 0 {
        return Err(Error::invalid("regularity_check", "n_samples must be at least 1"));
    }
    let chunks: Vec<u64> = (0..n_samples.div_ceil(CHUNK as u64)).collect();
    let tol = 1.0 + 1e-12;
    let partial = par::map_indexed(&chunks, |_, &c| {
        let mut rng = rng::stream(seed, c);
        let count = (n_samples - c * CHUNK as u64).min(CHUNK as u64);
        let mut worst_up = 0.0f64;
        let mut worst_lo = f64::INFINITY;
        let (mut bad_up, mut bad_lo) = (0u64, 0u64);
        for _ in 0..count {
            let up = mu.ratio(&random_interval(mu, &mut rng));
            let lo = mu.ratio(&random_centered(mu, &mut rng));
            worst_up = worst_up.max(up);
            worst_lo = worst_lo.min(lo);
            bad_up += u64::from(up > mu.c_r * tol);
            bad_lo += u64::from(lo * mu.c_r * tol < 1.0);
        }
        (worst_up, worst_lo, bad_up, bad_lo)
    });
    let (worst_up, worst_lo, bad_up, bad_lo) = partial.into_iter().fold(
        (0.0f64, f64::INFINITY, 0, 0),
        |a, b| (a.0.max(b.0), a.1.min(b.1), a.2 + b.2, a.3 + b.3),
    );
    Ok(RegularityReport {
        upper_ok: bad_up == 0,
        lower_ok: bad_lo == 0,
        worst_upper_ratio: worst_up,
        worst_lower_ratio: worst_lo,
        upper_violations: bad_up,
        lower_violations: bad_lo,
        samples: n_samples,
        c_r: mu.c_r,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub scale: f64,
    pub ratio_upper: f64,
    pub ratio_lower: f64,
}

/// Worst ratios at the scales `L^{-k}`, `k = 0..=depth`.
pub fn regularity_sweep(mu: &RegularMeasure, samples_per_scale: u64, seed: u64) -> Result<Vec<SweepRow>> {
    if samples_per_scale == 0 {
        return Err(Error::invalid("regularity_sweep", "samples_per_scale must be at least 1"));
    }
    let levels: Vec<u32> = (0..=mu.tree.depth).collect();
    Ok(par::map_indexed(&levels, |_, &k| {
        let mut rng = rng::stream(seed, u64::from(k));
        let scale = (mu.tree.base_l as f64).powi(-(k as i32));
        let mut up = 0.0f64;
        let mut lo = f64::INFINITY;
        for _ in 0..samples_per_scale {
            let a = rng.gen_range(0.0..=1.0 - scale);
            up = up.max(mu.ratio(&Interval { lo: a, hi: a + scale }));
            let x = mu.tree.sample_point(&mut rng);
            lo = lo.min(mu.ratio(&Interval {
                lo: x - scale / 2.0,
                hi: x + scale / 2.0,
            }));
        }
        SweepRow {
            scale,
            ratio_upper: up,
            ratio_lower: lo,
        }
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::intervals::random_porous;

    #[test]
    fn constants_for_half() {
        let tree = embed_porous(&IntervalSet::empty(), 0.5, 4f64.powi(-3)).unwrap();
        assert_eq!(tree.base_l(), 4);
        assert_eq!(tree.k0(), 3);
        let mu = RegularMeasure::new(tree);
        assert!((mu.delta - 3f64.ln() / 4f64.ln()).abs() < 1e-15);
        assert!((mu.delta - 0.7925).abs() < 1e-4);
        assert_eq!(mu.c_r, 8.0);
    }

    #[test]
    fn cutoff_brackets_alpha0() {
        for (l, a) in [(4u64, 4f64.powi(-3)), (8, 2f64.powi(-12)), (20, 2f64.powi(-12)), (3, 0.5), (5, 1.0)] {
            let k0 = cutoff_level(l, a).unwrap();
            let lk = (l as f64).powi(k0 as i32);
            assert!(a * lk <= 1.0 && a * lk * l as f64 > 1.0, "L={l} a={a} k0={k0}");
        }
    }

    #[test]
    fn empty_set_drops_leftmost_children() {
        let tree = embed_porous(&IntervalSet::empty(), 0.5, 4f64.powi(-3)).unwrap();
        assert_eq!(tree, CantorTree::uniform(4, 3, DEFAULT_EXTRA_LEVELS).unwrap());
        assert_eq!(tree.kept(1).unwrap(), &[1, 2, 3]);
    }

    #[test]
    fn embedding_random_set() {
        let alpha0 = 2f64.powi(-12);
        let omega = random_porous(0.25, alpha0, 3).unwrap();
        let tree = embed_porous(&omega, 0.25, alpha0).unwrap();
        assert_eq!(tree.base_l(), 8);
        assert!(contains_in_neighborhood(&tree, &omega, alpha0).unwrap());
        for k in 0..=tree.k0() {
            for &m in tree.kept(k).unwrap() {
                let kids = (m * 8..m * 8 + 8).filter(|&c| tree.is_kept(k + 1, c)).count();
                assert_eq!(kids, 7);
                let dropped = (m * 8..m * 8 + 8).find(|&c| !tree.is_kept(k + 1, c)).unwrap();
                assert!(!omega.intersects(&tree.node(k + 1, dropped)));
            }
        }
    }

    #[test]
    fn embedding_rejects_solid_block() {
        let omega = IntervalSet::from_pairs(&[(0.2, 0.6)]).unwrap();
        match embed_porous(&omega, 0.5, 0.01) {
            Err(Error::Construction { op, level, index, .. }) => {
                assert_eq!(op, "embed_porous");
                assert_eq!((level, index), (1, 1));
            }
            other => panic!("expected construction failure, got {other:?}"),
        }
    }

    #[test]
    fn node_weights() {
        let mu = RegularMeasure::new(CantorTree::uniform(4, 3, 4).unwrap());
        for k in 0..=5 {
            for m in 0..4u64.pow(k) {
                let node = mu.tree.node(k, m);
                let expect = if mu.tree.is_kept(k, m) { 3f64.powi(-(k as i32)) } else { 0.0 };
                assert!((mu.measure_of_interval(&node) - expect).abs() < 1e-12, "k={k} m={m}");
            }
        }
        // Dropped child of the root.
        assert_eq!(mu.measure_of_interval(&mu.tree.node(1, 0)), 0.0);
        // Two kept siblings at level 2.
        let both = Interval { lo: 5.0 / 16.0, hi: 7.0 / 16.0 };
        assert!((mu.measure_of_interval(&both) - 2.0 / 9.0).abs() < 1e-12);
        assert!((mu.ratio(&Interval::unit()) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn deep_node_weights() {
        let mu = RegularMeasure::new(CantorTree::uniform(5, 2, 4).unwrap());
        let mut m = 0u64;
        for k in 1..=6 {
            m = m * 5 + 1 + (k as u64 % 4);
            let w = mu.measure_of_interval(&mu.tree.node(k, m));
            assert!((w / 4f64.powi(-(k as i32)) - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn uniform_tree_is_regular() {
        let mu = RegularMeasure::new(CantorTree::uniform(4, 3, 4).unwrap());
        let r = regularity_check(&mu, 10_000, 11).unwrap();
        assert!(r.upper_ok && r.lower_ok, "{r:?}");
        assert!(r.worst_upper_ratio <= 8.0 && r.worst_lower_ratio >= 1.0 / 8.0);
        assert_eq!(r, regularity_check(&mu, 10_000, 11).unwrap());
    }

    #[test]
    fn centered_node_lower_bound() {
        let mu = RegularMeasure::new(CantorTree::uniform(4, 3, 4).unwrap());
        let mut rng = rng::stream(5, 0);
        for k in 0..=7 {
            let len = 4f64.powi(-k);
            let x = mu.tree.sample_point(&mut rng);
            let r = mu.ratio(&Interval { lo: x - len / 2.0, hi: x + len / 2.0 });
            assert!(r >= 1.0 / 8.0, "k={k} r={r}");
        }
    }

    #[test]
    fn neighborhood_contains_sampled_points() {
        let tree = CantorTree::uniform(4, 2, 3).unwrap();
        let x = tree.neighborhood(1e-3).unwrap();
        let mut rng = rng::stream(1, 0);
        for _ in 0..200 {
            assert!(x.contains_point(tree.sample_point(&mut rng)));
        }
        assert!(!x.contains_point(0.1));
        assert!(tree.neighborhood(1e-9).is_err());
    }

    #[test]
    fn tree_json_round_trip() {
        let tree = CantorTree::uniform(4, 1, 2).unwrap();
        let text = serde_json::to_string(&tree).unwrap();
        assert!(text.starts_with("{\"L\":4,\"k0\":1,\"depth\":3,\"kept\":[[0],[1,2,3]"));
        assert_eq!(serde_json::from_str::<CantorTree>(&text).unwrap(), tree);
        let bad = r#"{"L":4,"k0":0,"depth":2,"kept":[[0],[1,2]]}"#;
        assert!(serde_json::from_str::<CantorTree>(bad).is_err());
    }

    #[test]
    fn sweep_rows() {
        let mu = RegularMeasure::new(CantorTree::uniform(4, 2, 3).unwrap());
        let rows = regularity_sweep(&mu, 200, 2).unwrap();
        assert_eq!(rows.len(), 6);
        assert!(rows.iter().all(|r| r.ratio_upper <= 8.0 && r.ratio_lower >= 0.125));
    }
}
