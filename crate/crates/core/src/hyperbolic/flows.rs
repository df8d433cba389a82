//! Geodesic and horocycle flows by right multiplication.

use serde::{Deserialize, Serialize};

use super::group::{FuchsianGroup, UnitTangentPoint};
use super::moebius::MoebiusElement;
use crate::error::Result;

/// Horocycle direction: `Stable` is `U₊` (upper unipotent), `Unstable` is `U₋`
/// (lower unipotent).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Stable,
    Unstable,
}

impl Direction {
    /// `e^{sU}` as a matrix.
    pub fn unipotent(self, s: f64) -> MoebiusElement {
        match self {
            Direction::Stable => MoebiusElement::n_plus(s),
            Direction::Unstable => MoebiusElement::n_minus(s),
        }
    }

    /// `exp(v₁H + v₃U)` for the complementary field `U` (`U₊` when `self` is
    /// unstable and vice versa).
    pub fn transverse(self, v1: f64, v3: f64) -> MoebiusElement {
        match self {
            Direction::Stable => MoebiusElement::exp_sl2(v1, 0.0, v3),
            Direction::Unstable => MoebiusElement::exp_sl2(v1, v3, 0.0),
        }
    }

    /// Time direction in which this horocycle flow expands: `+1` for `U₋`.
    pub fn expanding_sign(self) -> f64 {
        match self {
            Direction::Stable => -1.0,
            Direction::Unstable => 1.0,
        }
    }
}

impl std::str::FromStr for Direction {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "stable" => Ok(Direction::Stable),
            "unstable" => Ok(Direction::Unstable),
            _ => Err(format!("unknown direction {s:?} (expected stable or unstable)")),
        }
    }
}

/// `φ_t`: `rep ↦ reduce(rep · a_t)`.
pub fn geodesic_flow(group: &FuchsianGroup, p: &UnitTangentPoint, t: f64) -> Result<UnitTangentPoint> {
    right_multiply(group, p, &MoebiusElement::a(t))
}

/// `e^{sU_±}`: `rep ↦ reduce(rep · n^±_s)`.
pub fn horocycle_flow(group: &FuchsianGroup, p: &UnitTangentPoint, s: f64, direction: Direction) -> Result<UnitTangentPoint> {
    right_multiply(group, p, &direction.unipotent(s))
}

pub(crate) fn right_multiply(group: &FuchsianGroup, p: &UnitTangentPoint, g: &MoebiusElement) -> Result<UnitTangentPoint> {
    Ok(UnitTangentPoint {
        rep: group.reduce(&(p.rep * *g))?,
        scale_w: p.scale_w,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng;

    fn start(group: &FuchsianGroup, seed: u64) -> UnitTangentPoint {
        UnitTangentPoint::new(group, &group.sample_uniform(&mut rng::stream(seed, 0))).unwrap()
    }

    #[test]
    fn geodesic_flow_is_a_one_parameter_group() {
        let g = FuchsianGroup::bolza();
        let p = start(&g, 1);
        assert_eq!(geodesic_flow(&g, &p, 0.0).unwrap(), p);
        let back = geodesic_flow(&g, &geodesic_flow(&g, &p, 1.7).unwrap(), -1.7).unwrap();
        assert!(back.rep.distance(&p.rep) < 1e-10);
        let two = geodesic_flow(&g, &geodesic_flow(&g, &p, 0.6).unwrap(), 1.1).unwrap();
        let one = geodesic_flow(&g, &p, 1.7).unwrap();
        assert!(two.rep.distance(&one.rep) < 1e-10);
    }

    #[test]
    fn horocycle_zero_is_identity() {
        let g = FuchsianGroup::bolza();
        let p = start(&g, 2);
        for d in [Direction::Stable, Direction::Unstable] {
            assert_eq!(horocycle_flow(&g, &p, 0.0, d).unwrap(), p);
        }
    }

    #[test]
    fn flow_commutes_with_reduction() {
        let g = FuchsianGroup::bolza();
        for seed in 0..20 {
            let m = MoebiusElement::a(3.0) * g.sample_uniform(&mut rng::stream(seed, 1));
            let a = MoebiusElement::a(0.8);
            let lhs = g.reduce(&(g.reduce(&m).unwrap() * a)).unwrap();
            let rhs = g.reduce(&(m * a)).unwrap();
            assert!(lhs.distance(&rhs) < 1e-9, "seed {seed}");
        }
    }

    #[test]
    fn unstable_direction_expands_forward() {
        // φ_t e^{sU₋} = e^{e^t s U₋} φ_t and φ_t e^{sU₊} = e^{e^{-t} s U₊} φ_t.
        let (t, s) = (0.9, 0.2);
        for d in [Direction::Stable, Direction::Unstable] {
            let lhs = d.unipotent(s) * MoebiusElement::a(t);
            let rhs = MoebiusElement::a(t) * d.unipotent((d.expanding_sign() * t).exp() * s);
            assert!(lhs.distance(&rhs) < 1e-14);
        }
    }

    #[test]
    fn det_is_preserved_along_flows() {
        let g = FuchsianGroup::bolza();
        let mut p = start(&g, 4);
        for k in 0..200 {
            p = horocycle_flow(&g, &p, 0.37, Direction::Stable).unwrap();
            p = geodesic_flow(&g, &p, if k % 2 == 0 { 1.3 } else { -0.4 }).unwrap();
            assert!((p.rep.det() - 1.0).abs() < 1e-12);
        }
    }
}
