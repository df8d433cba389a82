//! Phase functions, amplitudes and quadrature grids.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::intervals::Interval;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum Phase {
    /// `Φ(x, y) = x·y`.
    Fourier,
    /// `Φ(y, y') = 2w log|y - y'| - w log 4` with `|y - y'|` the chord between
    /// the points `e^{2πiy}`, `e^{2πiy'}` of the unit circle.
    Hyperbolic { w: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Amplitude {
    /// Tensor product of window bumps times the diagonal cutoff.
    Bump,
    Zero,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KernelSpec {
    pub phase: Phase,
    #[serde(default = "default_amplitude")]
    pub amplitude: Amplitude,
    /// The amplitude vanishes where the diagonal distance is below `d_min`
    /// and is unaffected beyond `2·d_min`.
    #[serde(default)]
    pub d_min: f64,
    #[serde(default = "Interval::unit")]
    pub x_window: Interval,
    #[serde(default = "Interval::unit")]
    pub y_window: Interval,
}

fn default_amplitude() -> Amplitude {
    Amplitude::Bump
}

impl KernelSpec {
    pub fn fourier() -> Self {
        KernelSpec {
            phase: Phase::Fourier,
            amplitude: Amplitude::Bump,
            d_min: 0.0,
            x_window: Interval::unit(),
            y_window: Interval::unit(),
        }
    }

    pub fn hyperbolic(w: f64, d_min: f64) -> Self {
        KernelSpec {
            phase: Phase::Hyperbolic { w },
            d_min,
            ..KernelSpec::fourier()
        }
    }

    pub fn validate(&self) -> Result<()> {
        const OP: &str = "kernel_spec";
        let spec_err = |msg: String| Err(Error::InvalidSpec { op: OP, msg });
        for w in [self.x_window, self.y_window] {
            if !(w.len() > 0.0) || !w.lo.is_finite() || !w.hi.is_finite() {
                return spec_err(format!("window [{}, {}] must have positive finite length", w.lo, w.hi));
            }
        }
        if !(self.d_min >= 0.0) || !self.d_min.is_finite() {
            return spec_err(format!("d_min must be finite and >= 0, got {}", self.d_min));
        }
        if let Phase::Hyperbolic { w } = self.phase {
            if !w.is_finite() || w == 0.0 {
                return spec_err(format!("w must be finite and nonzero, got {w}"));
            }
            if self.d_min == 0.0 && self.amplitude != Amplitude::Zero {
                return spec_err("the hyperbolic phase is singular on the diagonal; d_min must be > 0".into());
            }
            if self.d_min >= 0.25 {
                return spec_err(format!("d_min = {} leaves no support on the circle", self.d_min));
            }
        }
        Ok(())
    }

    /// Distance entering the diagonal cutoff: arc length on `ℝ/ℤ` for the
    /// hyperbolic phase, `|x - y|` otherwise.
    pub fn diagonal_distance(&self, x: f64, y: f64) -> f64 {
        match self.phase {
            Phase::Fourier => (x - y).abs(),
            Phase::Hyperbolic { .. } => periodic_distance(x - y),
        }
    }

    pub fn diagonal_cutoff(&self, x: f64, y: f64) -> f64 {
        if self.d_min == 0.0 {
            return 1.0;
        }
        smooth_step((self.diagonal_distance(x, y) - self.d_min) / self.d_min)
    }

    /// `b(x, y)`, with values in `[0, 1]`.
    pub fn amplitude_at(&self, x: f64, y: f64) -> f64 {
        match self.amplitude {
            Amplitude::Zero => 0.0,
            Amplitude::Bump => {
                window_bump(x, self.x_window) * window_bump(y, self.y_window) * self.diagonal_cutoff(x, y)
            }
        }
    }

    /// `Φ(x, y) / h`; only meaningful where the amplitude is nonzero.
    pub fn phase_over_h(&self, x: f64, y: f64, h: f64) -> f64 {
        match self.phase {
            Phase::Fourier => x * y / h,
            Phase::Hyperbolic { w } => hyperbolic_phase_over_h(w, x - y, h),
        }
    }
}

/// `Φ/h` for the hyperbolic phase as a function of `y - y'`, using
/// `|y - y'| / 2 = |sin π(y - y')|` for the chord.
pub(crate) fn hyperbolic_phase_over_h(w: f64, delta: f64, h: f64) -> f64 {
    2.0 * w / h * (std::f64::consts::PI * delta).sin().abs().ln()
}

/// Distance from `d` to the nearest integer.
pub fn periodic_distance(d: f64) -> f64 {
    let r = d.rem_euclid(1.0);
    r.min(1.0 - r)
}

/// `exp(1 - 1/(1 - t²))` on `(-1, 1)`, zero outside.
pub fn bump(t: f64) -> f64 {
    if t.abs() >= 1.0 {
        0.0
    } else {
        (1.0 - 1.0 / (1.0 - t * t)).exp()
    }
}

/// Bump rescaled to `window`, equal to 1 at its midpoint.
pub fn window_bump(x: f64, window: Interval) -> f64 {
    bump((2.0 * x - window.lo - window.hi) / window.len())
}

/// Smooth transition from 0 (for `u ≤ 0`) to 1 (for `u ≥ 1`).
pub fn smooth_step(u: f64) -> f64 {
    let f = |v: f64| if v <= 0.0 { 0.0 } else { (-1.0 / v).exp() };
    if u <= 0.0 {
        0.0
    } else if u >= 1.0 {
        1.0
    } else {
        f(u) / (f(u) + f(1.0 - u))
    }
}

/// Midpoint grid `lo + (i + 1/2)·step`, `i < n`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    pub lo: f64,
    pub step: f64,
    pub n: usize,
}

impl Grid {
    /// `n = ⌈|window|·oversample/h⌉`, so that `step ≤ h/oversample`.
    pub fn for_window(window: Interval, h: f64, oversample: f64) -> Grid {
        let n = ((window.len() * oversample / h) * (1.0 - 1e-12)).ceil().max(1.0) as usize;
        Grid {
            lo: window.lo,
            step: window.len() / n as f64,
            n,
        }
    }

    pub fn point(&self, i: usize) -> f64 {
        self.lo + (i as f64 + 0.5) * self.step
    }

    pub fn points(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.n).map(|i| self.point(i))
    }
}

/// Dimension a window needs at semiclassical parameter `h`.
pub fn grid_dimension(window: Interval, h: f64, oversample: f64) -> usize {
    Grid::for_window(window, h, oversample).n
}
