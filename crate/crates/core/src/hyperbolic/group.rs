//! Cocompact Fuchsian groups, coset reduction and points of `Γ\PSL(2,ℝ)`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::moebius::MoebiusElement;
use crate::error::{Error, Result};
use crate::rng::Rng;
use rand::Rng as _;

/// Guard on the number of greedy reduction steps.
pub const MAX_REDUCTION_STEPS: usize = 10_000;

/// Tolerance for relation products to equal `±I`.
pub const RELATION_TOL: f64 = 1e-9;

/// Relative decrease of `‖γm‖_F²` a reduction step must achieve.
const STRICT_DECREASE: f64 = 1e-12;

/// Group as read from JSON: a named preset or explicit generators.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged, deny_unknown_fields)]
pub enum GroupSpec {
    Preset {
        preset: String,
    },
    Explicit {
        generators: Vec<MoebiusElement>,
        #[serde(default)]
        relations: Vec<Vec<usize>>,
        /// Upper bound on the displacement of the Dirichlet domain at `i`.
        #[serde(default, skip_serializing_if = "Option::is_none")]
        domain_radius: Option<f64>,
    },
}

/// Side pairings of a Dirichlet domain centred at `i`.
///
/// Serialized as `{"preset": name}` for presets and as explicit generators
/// otherwise.
#[derive(Debug, Clone)]
pub struct FuchsianGroup {
    pub preset_name: Option<String>,
    generators: Vec<MoebiusElement>,
    relation_products: Vec<Vec<usize>>,
    domain_radius: f64,
    /// Generators followed by their inverses.
    moves: Vec<MoebiusElement>,
}

impl Serialize for FuchsianGroup {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_spec().serialize(s)
    }
}

impl<'de> Deserialize<'de> for FuchsianGroup {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let spec = GroupSpec::deserialize(d)?;
        FuchsianGroup::from_spec(spec).map_err(serde::de::Error::custom)
    }
}

impl FuchsianGroup {
    /// Validates determinants, hyperbolicity and relations.
    pub fn new(generators: Vec<MoebiusElement>, relation_products: Vec<Vec<usize>>, domain_radius: Option<f64>) -> Result<Self> {
        const OP: &str = "fuchsian_group";
        if generators.is_empty() {
            return Err(Error::invalid(OP, "at least one generator is required"));
        }
        for (k, g) in generators.iter().enumerate() {
            if !g.is_hyperbolic() {
                return Err(Error::invalid(OP, format!("generator {k} is not hyperbolic (trace {})", g.trace())));
            }
        }
        let mut moves = generators.clone();
        for inv in generators.iter().map(MoebiusElement::inverse) {
            if moves.iter().all(|m| m.distance(&inv) > 1e-12) {
                moves.push(inv);
            }
        }
        let mut group = FuchsianGroup {
            preset_name: None,
            generators,
            relation_products,
            domain_radius: 0.0,
            moves,
        };
        for (r, rel) in group.relation_products.iter().enumerate() {
            let dev = group.relation_defect(rel)?;
            if dev > RELATION_TOL {
                return Err(Error::invalid(OP, format!("relation {r} deviates from ±I by {dev:e}")));
            }
        }
        group.domain_radius = match domain_radius {
            Some(r) if r > 0.0 && r.is_finite() => r,
            Some(r) => return Err(Error::invalid(OP, format!("domain_radius must be positive, got {r}"))),
            None => group.estimate_domain_radius()?,
        };
        Ok(group)
    }

    pub fn from_spec(spec: GroupSpec) -> Result<Self> {
        match spec {
            GroupSpec::Preset { preset } => Self::preset(&preset),
            GroupSpec::Explicit {
                generators,
                relations,
                domain_radius,
            } => Self::new(generators, relations, domain_radius),
        }
    }

    pub fn to_spec(&self) -> GroupSpec {
        match &self.preset_name {
            Some(name) => GroupSpec::Preset { preset: name.clone() },
            None => GroupSpec::Explicit {
                generators: self.generators.clone(),
                relations: self.relation_products.clone(),
                domain_radius: Some(self.domain_radius),
            },
        }
    }

    pub fn preset(name: &str) -> Result<Self> {
        match name {
            "bolza" => Ok(Self::bolza()),
            _ => Err(Error::invalid("fuchsian_group", format!("unknown preset {name:?}"))),
        }
    }

    /// The genus-2 Bolza group: translations of length `2 acosh(1+√2)` along
    /// the four axes through `i` at angles `kπ/4`, with opposite octagon
    /// sides paired.
    pub fn bolza() -> Self {
        let s2 = std::f64::consts::SQRT_2;
        let (c, s) = (1.0 + s2, (2.0 + 2.0 * s2).sqrt());
        // Axis through i along the imaginary direction, rotated by kπ/8 about i
        // (the rotation by θ in PSL(2,ℝ) turns directions at i by 2θ).
        let g0 = MoebiusElement::new(c + s, 0.0, 0.0, c - s).expect("unimodular");
        let mut gens: Vec<MoebiusElement> = (0..4)
            .map(|k| {
                let r = MoebiusElement::rotation(-(k as f64) * std::f64::consts::PI / 8.0);
                r * g0 * r.inverse()
            })
            .collect();
        let inverses: Vec<MoebiusElement> = gens.iter().map(MoebiusElement::inverse).collect();
        gens.extend(inverses);
        let mut group = Self::new(gens, vec![vec![0, 5, 2, 7, 4, 1, 6, 3]], Some(bolza_circumradius())).expect("Bolza preset");
        group.preset_name = Some("bolza".into());
        group
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::invalid("fuchsian_group", e.to_string()))
    }

    pub fn generators(&self) -> &[MoebiusElement] {
        &self.generators
    }

    pub fn relation_products(&self) -> &[Vec<usize>] {
        &self.relation_products
    }

    pub fn domain_radius(&self) -> f64 {
        self.domain_radius
    }

    /// `min ‖P ∓ I‖_F` for the product of the listed generators.
    pub fn relation_defect(&self, rel: &[usize]) -> Result<f64> {
        let mut p = MoebiusElement::identity();
        for &k in rel {
            let g = self
                .generators
                .get(k)
                .ok_or_else(|| Error::invalid("fuchsian_group", format!("relation index {k} out of range")))?;
            p = p * *g;
        }
        Ok(p.distance(&MoebiusElement::identity()))
    }

    /// Greedy left multiplication by generators and inverses while
    /// `d(m·i, i)` strictly decreases.
    pub fn reduce(&self, m: &MoebiusElement) -> Result<MoebiusElement> {
        let mut cur = *m;
        let mut norm = cur.frobenius_sq();
        for _ in 0..MAX_REDUCTION_STEPS {
            let (best, best_norm) = self
                .moves
                .iter()
                .map(|g| {
                    let c = *g * cur;
                    (c, c.frobenius_sq())
                })
                .fold((cur, norm), |acc, c| if c.1 < acc.1 { c } else { acc });
            if !(best_norm < norm * (1.0 - STRICT_DECREASE)) {
                return Ok(cur);
            }
            cur = best;
            norm = best_norm;
        }
        Err(Error::Reduction {
            op: "reduce",
            steps: MAX_REDUCTION_STEPS,
        })
    }

    /// True when no generator strictly decreases the displacement.
    pub fn is_reduced(&self, m: &MoebiusElement) -> bool {
        let norm = m.frobenius_sq();
        self.moves.iter().all(|g| !((*g * *m).frobenius_sq() < norm * (1.0 - STRICT_DECREASE)))
    }

    /// Haar-uniform element of the reduced fundamental domain.
    ///
    /// Rejection sampling: `k(φ) a(r) k(ψ)` with `r` area-distributed in the
    /// disk of radius `domain_radius` around `i`, kept when already reduced.
    pub fn sample_uniform(&self, rng: &mut Rng) -> MoebiusElement {
        let span = self.domain_radius.cosh() - 1.0;
        loop {
            let r = (1.0 + rng.gen::<f64>() * span).acosh();
            let phi = rng.gen::<f64>() * std::f64::consts::PI;
            let psi = rng.gen::<f64>() * std::f64::consts::PI;
            let g = MoebiusElement::rotation(phi) * MoebiusElement::a(r) * MoebiusElement::rotation(psi);
            if self.is_reduced(&g) {
                return g;
            }
        }
    }

    /// Largest displacement seen after reducing far-away points, with margin.
    fn estimate_domain_radius(&self) -> Result<f64> {
        let mut rng = crate::rng::stream(0x00d0_3a1e, 0);
        let mut max = 0.0f64;
        for _ in 0..4096 {
            let r = 4.0 * rng.gen::<f64>() + 1.0;
            let phi = rng.gen::<f64>() * std::f64::consts::PI;
            let g = MoebiusElement::rotation(phi) * MoebiusElement::a(r);
            max = max.max(self.reduce(&g)?.displacement());
        }
        Ok(1.25 * max + 0.1)
    }
}

/// `acosh(cot²(π/8))`: circumradius of the regular octagon with angles `π/4`.
pub fn bolza_circumradius() -> f64 {
    let c = (std::f64::consts::PI / 8.0).tan().recip();
    (c * c).acosh()
}

/// `acosh(cot(π/8))`: inradius of the same octagon.
pub fn bolza_inradius() -> f64 {
    (std::f64::consts::PI / 8.0).tan().recip().acosh()
}

/// A point of `S*M` (times the dilation coordinate `|ξ|`).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UnitTangentPoint {
    pub rep: MoebiusElement,
    #[serde(default = "unit_scale")]
    pub scale_w: f64,
}

fn unit_scale() -> f64 {
    1.0
}

impl UnitTangentPoint {
    /// Reduces `g`; the scale coordinate is 1.
    pub fn new(group: &FuchsianGroup, g: &MoebiusElement) -> Result<Self> {
        Ok(UnitTangentPoint {
            rep: group.reduce(g)?,
            scale_w: 1.0,
        })
    }

    pub fn with_scale(mut self, w: f64) -> Result<Self> {
        if !(0.25..=4.0).contains(&w) {
            return Err(Error::invalid("unit_tangent_point", format!("scale_w must lie in [1/4, 4], got {w}")));
        }
        self.scale_w = w;
        Ok(self)
    }

    /// Base point in the upper half plane.
    pub fn base_point(&self) -> Complex64 {
        self.rep.base_point()
    }
}
