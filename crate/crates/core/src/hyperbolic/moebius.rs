//! Elements of `PSL(2,ℝ)` stored as unimodular 2×2 matrices modulo sign.

use std::ops::Mul;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Tolerance on `|det - 1|` accepted when reading user-supplied matrices.
pub const DET_TOL: f64 = 1e-9;

/// `(a, b; c, d)` with `ad - bc = 1`, identified with its negative.
///
/// Stored in canonical sign: the first nonzero entry in row-major order is
/// positive. Serialized as `[a, b, c, d]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "[f64; 4]", into = "[f64; 4]")]
pub struct MoebiusElement {
    m: [f64; 4],
}

impl TryFrom<[f64; 4]> for MoebiusElement {
    type Error = Error;

    fn try_from(m: [f64; 4]) -> Result<Self> {
        MoebiusElement::new(m[0], m[1], m[2], m[3])
    }
}

impl From<MoebiusElement> for [f64; 4] {
    fn from(g: MoebiusElement) -> Self {
        g.m
    }
}

impl MoebiusElement {
    /// Validates `det ≈ 1`, then renormalizes and canonicalizes the sign.
    pub fn new(a: f64, b: f64, c: f64, d: f64) -> Result<Self> {
        let m = [a, b, c, d];
        if m.iter().any(|x| !x.is_finite()) {
            return Err(Error::invalid("moebius", "entries must be finite"));
        }
        let det = a * d - b * c;
        if (det - 1.0).abs() > DET_TOL {
            return Err(Error::invalid("moebius", format!("determinant must be 1, got {det}")));
        }
        Ok(Self::normalized(m))
    }

    /// Rescales by `det^{-1/2}` (for `det > 0`) and fixes the sign.
    pub(crate) fn normalized(mut m: [f64; 4]) -> Self {
        let det = m[0] * m[3] - m[1] * m[2];
        if det > 0.0 && det != 1.0 {
            let s = det.sqrt().recip();
            m.iter_mut().for_each(|x| *x *= s);
        }
        if m.iter().find(|x| **x != 0.0).is_some_and(|x| *x < 0.0) {
            m.iter_mut().for_each(|x| *x = -*x);
        }
        MoebiusElement { m }
    }

    pub fn identity() -> Self {
        MoebiusElement { m: [1.0, 0.0, 0.0, 1.0] }
    }

    /// Geodesic flow generator: `a_t = diag(e^{t/2}, e^{-t/2})`.
    pub fn a(t: f64) -> Self {
        let e = (t / 2.0).exp();
        MoebiusElement { m: [e, 0.0, 0.0, 1.0 / e] }
    }

    /// Upper unipotent `n⁺_s = (1, s; 0, 1)`.
    pub fn n_plus(s: f64) -> Self {
        Self::normalized([1.0, s, 0.0, 1.0])
    }

    /// Lower unipotent `n⁻_s = (1, 0; s, 1)`.
    pub fn n_minus(s: f64) -> Self {
        Self::normalized([1.0, 0.0, s, 1.0])
    }

    /// Rotation `(cos θ, -sin θ; sin θ, cos θ)` fixing `i`.
    pub fn rotation(theta: f64) -> Self {
        let (s, c) = theta.sin_cos();
        Self::normalized([c, -s, s, c])
    }

    /// `exp(x H + y E₁₂ + z E₂₁)` with `H = diag(1/2, -1/2)`.
    pub fn exp_sl2(x: f64, y: f64, z: f64) -> Self {
        // X = (x/2, y; z, -x/2), X² = q I with q = x²/4 + yz.
        let q = x * x / 4.0 + y * z;
        // exp(X) = c I + s X with c = cosh √q, s = sinh √q / √q (cos/sin for q < 0).
        let (c, s) = if q.abs() < 1e-8 {
            (1.0 + q / 2.0, 1.0 + q / 6.0)
        } else if q > 0.0 {
            let r = q.sqrt();
            (r.cosh(), r.sinh() / r)
        } else {
            let r = (-q).sqrt();
            (r.cos(), r.sin() / r)
        };
        Self::normalized([c + s * x / 2.0, s * y, s * z, c - s * x / 2.0])
    }

    pub fn entries(&self) -> [f64; 4] {
        self.m
    }

    pub fn det(&self) -> f64 {
        self.m[0] * self.m[3] - self.m[1] * self.m[2]
    }

    pub fn trace(&self) -> f64 {
        self.m[0] + self.m[3]
    }

    pub fn is_hyperbolic(&self) -> bool {
        self.trace().abs() > 2.0
    }

    pub fn inverse(&self) -> Self {
        let [a, b, c, d] = self.m;
        Self::normalized([d, -b, -c, a])
    }

    /// `‖g‖_F² = 2 cosh d(g·i, i)`.
    pub fn frobenius_sq(&self) -> f64 {
        self.m.iter().map(|x| x * x).sum()
    }

    pub fn frobenius(&self) -> f64 {
        self.frobenius_sq().sqrt()
    }

    /// `min(‖A - B‖_F, ‖A + B‖_F)`, independent of the sign representative.
    pub fn distance(&self, other: &Self) -> f64 {
        let (mut minus, mut plus) = (0.0, 0.0);
        for (x, y) in self.m.iter().zip(&other.m) {
            minus += (x - y) * (x - y);
            plus += (x + y) * (x + y);
        }
        minus.min(plus).sqrt()
    }

    /// `g·z` on the upper half plane.
    pub fn act(&self, z: Complex64) -> Complex64 {
        let [a, b, c, d] = self.m;
        (z * a + b) / (z * c + d)
    }

    /// Base point `g·i`.
    pub fn base_point(&self) -> Complex64 {
        self.act(Complex64::new(0.0, 1.0))
    }

    /// Hyperbolic distance from `g·i` to `i`.
    pub fn displacement(&self) -> f64 {
        (self.frobenius_sq() / 2.0).max(1.0).acosh()
    }
}

impl Mul for MoebiusElement {
    type Output = MoebiusElement;

    fn mul(self, rhs: Self) -> Self {
        let [a, b, c, d] = self.m;
        let [e, f, g, h] = rhs.m;
        Self::normalized([a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h])
    }
}

/// Hyperbolic distance on the upper half plane.
pub fn hyperbolic_distance(z: Complex64, w: Complex64) -> f64 {
    (1.0 + (z - w).norm_sqr() / (2.0 * z.im * w.im)).max(1.0).acosh()
}
