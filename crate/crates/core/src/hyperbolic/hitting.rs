//! Metric balls in the group model and horocycle hitting times.
//!
//! Distances are `min ‖A ∓ B‖_F` between reduced representatives. This is a
//! proxy for the distance on `S*M`, faithful for balls well inside the
//! fundamental domain.

use serde::{Deserialize, Serialize};

use super::flows::Direction;
use super::group::{FuchsianGroup, UnitTangentPoint};
use super::moebius::MoebiusElement;
use crate::error::{Error, Result};
use crate::par;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Ball {
    pub center: MoebiusElement,
    pub radius: f64,
}

impl Ball {
    /// Ball around the reduced representative of `center`.
    pub fn new(group: &FuchsianGroup, center: &MoebiusElement, radius: f64) -> Result<Self> {
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(Error::invalid("ball", format!("radius must be positive, got {radius}")));
        }
        Ok(Ball {
            center: group.reduce(center)?,
            radius,
        })
    }

    pub fn contains(&self, rep: &MoebiusElement) -> bool {
        self.center.distance(rep) <= self.radius
    }

    /// Same center, radius scaled by `factor`.
    pub fn shrunk(&self, factor: f64) -> Ball {
        Ball {
            center: self.center,
            radius: self.radius * factor,
        }
    }
}

/// Two balls of the given radius centred at frames over `e^{±1/2} i`,
/// pointing in opposite directions.
pub fn default_targets(group: &FuchsianGroup, radius: f64) -> Result<[Ball; 2]> {
    let c1 = MoebiusElement::a(0.5);
    let c2 = MoebiusElement::rotation(std::f64::consts::FRAC_PI_2) * c1;
    Ok([Ball::new(group, &c1, radius)?, Ball::new(group, &c2, radius)?])
}

/// Smallest sampled `s ∈ [0, s_max]` with `e^{sU}(g)` in the ball.
///
/// The step adapts to the current representative, `ds = r / (4 max(1, ‖g‖_F))`,
/// so consecutive samples are at most `r/4` apart in the proxy metric.
pub fn hitting_time(group: &FuchsianGroup, ball: &Ball, g: &UnitTangentPoint, s_max: f64, direction: Direction) -> Result<Option<f64>> {
    const OP: &str = "hitting_time";
    if !(s_max > 0.0 && s_max.is_finite()) {
        return Err(Error::invalid(OP, format!("s_max must be positive, got {s_max}")));
    }
    if !(ball.radius > 0.0) {
        return Err(Error::invalid(OP, "ball radius must be positive"));
    }
    let mut cur = g.rep;
    let mut s = 0.0;
    loop {
        if ball.contains(&cur) {
            return Ok(Some(s));
        }
        if s >= s_max {
            return Ok(None);
        }
        let ds = (ball.radius / (4.0 * cur.frobenius().max(1.0))).min(s_max - s);
        cur = group.reduce(&(cur * direction.unipotent(ds)))?;
        s = if s_max - s <= ds { s_max } else { s + ds };
    }
}

/// Hitting times of every ball from every point, in parallel; `result[p][b]`.
pub fn hitting_times(
    group: &FuchsianGroup,
    balls: &[Ball],
    points: &[UnitTangentPoint],
    s_max: f64,
    direction: Direction,
) -> Result<Vec<Vec<Option<f64>>>> {
    par::map_indexed(points, |_, p| balls.iter().map(|b| hitting_time(group, b, p, s_max, direction)).collect())
        .into_iter()
        .collect()
}

/// Largest hitting time in a sweep, or `None` if some orbit missed a ball.
pub fn empirical_bound(times: &[Vec<Option<f64>>]) -> Option<f64> {
    times.iter().flatten().try_fold(0.0f64, |m, t| t.map(|t| m.max(t)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hyperbolic::group::bolza_circumradius;
    use crate::hyperbolic::observables::random_points;

    #[test]
    fn start_inside_hits_at_zero() {
        let g = FuchsianGroup::bolza();
        let p = random_points(&g, 1, 0)[0];
        let ball = Ball::new(&g, &p.rep, 0.1).unwrap();
        assert_eq!(hitting_time(&g, &ball, &p, 1.0, Direction::Unstable).unwrap(), Some(0.0));
    }

    #[test]
    fn huge_ball_covers_everything() {
        let g = FuchsianGroup::bolza();
        // ‖A - B‖_F ≤ ‖A‖_F + ‖B‖_F ≤ 2 √(2 cosh R) on the reduced domain.
        let r = 2.0 * (2.0 * bolza_circumradius().cosh()).sqrt();
        let ball = Ball::new(&g, &MoebiusElement::identity(), r + 1.0).unwrap();
        for p in random_points(&g, 10, 3) {
            assert_eq!(hitting_time(&g, &ball, &p, 1.0, Direction::Stable).unwrap(), Some(0.0));
        }
    }

    #[test]
    fn orbits_hit_a_ball_at_the_base_point() {
        let g = FuchsianGroup::bolza();
        let ball = Ball::new(&g, &MoebiusElement::identity(), 0.5).unwrap();
        let pts = random_points(&g, 12, 8);
        let times = hitting_times(&g, &[ball], &pts, 2000.0, Direction::Unstable).unwrap();
        let bound = empirical_bound(&times).expect("every orbit hits");
        assert!(bound > 0.0 && bound <= 2000.0);
    }

    #[test]
    fn rejects_bad_arguments() {
        let g = FuchsianGroup::bolza();
        let p = random_points(&g, 1, 0)[0];
        let ball = Ball::new(&g, &MoebiusElement::identity(), 0.5).unwrap();
        assert!(hitting_time(&g, &ball, &p, 0.0, Direction::Stable).is_err());
        assert!(Ball::new(&g, &MoebiusElement::identity(), 0.0).is_err());
    }
}
