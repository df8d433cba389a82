//! Matrix-free form of the discretized operator.
//!
//! For both phase families the matrix factors as `diag(r) · T · diag(c)` with
//! `T` Toeplitz, `T_{ij} = t(i - j)`:
//!
//! - Fourier: `x_i y_j = x_0 y_0 + x_0 jΔy + y_0 iΔx + ΔxΔy (i² + j² - (i-j)²)/2`,
//!   so the quadratic chirp `e^{-iΔxΔy (i-j)²/(2h)}` is the only coupled factor.
//! - Hyperbolic: the phase and the diagonal cutoff depend on `y_i - y'_j` only.
//!
//! Products with `T` are linear convolutions evaluated by FFT, so one
//! application costs `O(n log n)` instead of `O(n²)`.

use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use super::kernel::{hyperbolic_phase_over_h, periodic_distance, smooth_step, window_bump, Amplitude, Grid, KernelSpec, Phase};
use super::norm::LinearOperator;
use super::operator::check_h;
use crate::error::{Error, Result};

/// Default cap on either dimension of the structured operator.
pub const DEFAULT_MAX_FAST_DIM: usize = 1 << 21;

pub struct StructuredOperator {
    pub h: f64,
    pub oversample: f64,
    pub x_grid: Grid,
    pub y_grid: Grid,
    row: Vec<Complex64>,
    col: Vec<Complex64>,
    /// FFT of the Toeplitz symbol laid out for circular convolution.
    spectrum: Vec<Complex64>,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
}

impl std::fmt::Debug for StructuredOperator {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("StructuredOperator")
            .field("h", &self.h)
            .field("oversample", &self.oversample)
            .field("x_grid", &self.x_grid)
            .field("y_grid", &self.y_grid)
            .field("fft_len", &self.spectrum.len())
            .finish()
    }
}

fn same_step(a: &Grid, b: &Grid) -> bool {
    (a.step - b.step).abs() <= 1e-14 * a.step.max(b.step)
}

pub fn build_structured(spec: &KernelSpec, h: f64, oversample: f64, max_dim: usize) -> Result<StructuredOperator> {
    const OP: &str = "build_structured";
    check_h(OP, h)?;
    spec.validate()?;
    if !(oversample >= 1.0) {
        return Err(Error::invalid(OP, format!("oversample must be >= 1, got {oversample}")));
    }
    let xg = Grid::for_window(spec.x_window, h, oversample);
    let yg = Grid::for_window(spec.y_window, h, oversample);
    let (m, n) = (xg.n, yg.n);
    if m.max(n) > max_dim {
        return Err(Error::Resource {
            op: OP,
            msg: format!("operator of size {m}x{n} exceeds the cap (dimension {max_dim})"),
        });
    }
    let coupled_cutoff = spec.d_min > 0.0 || matches!(spec.phase, Phase::Hyperbolic { .. });
    if coupled_cutoff && !same_step(&xg, &yg) {
        return Err(Error::InvalidSpec {
            op: OP,
            msg: "diagonal cutoff and hyperbolic phase need windows of equal length".into(),
        });
    }

    let (dx, dy) = (xg.step, yg.step);
    let (x0, y0) = (xg.point(0), yg.point(0));
    let scale = (dx * dy / h).sqrt();
    let zero = Amplitude::Zero == spec.amplitude;
    let amp = |v: f64| if zero { 0.0 } else { v };

    let mut row: Vec<Complex64> = (0..m)
        .map(|i| Complex64::from_polar(amp(scale * window_bump(xg.point(i), spec.x_window)), 0.0))
        .collect();
    let mut col: Vec<Complex64> = (0..n)
        .map(|j| Complex64::from_polar(amp(window_bump(yg.point(j), spec.y_window)), 0.0))
        .collect();

    // Difference between x_i and y_j at offset d = i - j when the steps agree.
    let offset = x0 - y0;
    let cutoff = |d: i64| -> f64 {
        if spec.d_min == 0.0 {
            return 1.0;
        }
        let delta = offset + d as f64 * dx;
        let dist = match spec.phase {
            Phase::Fourier => delta.abs(),
            Phase::Hyperbolic { .. } => periodic_distance(delta),
        };
        smooth_step((dist - spec.d_min) / spec.d_min)
    };
    let symbol: Box<dyn Fn(i64) -> Complex64> = match spec.phase {
        Phase::Fourier => {
            for (i, r) in row.iter_mut().enumerate() {
                let i = i as f64;
                *r *= Complex64::from_polar(1.0, (y0 * i * dx + dx * dy * i * i / 2.0) / h);
            }
            for (j, c) in col.iter_mut().enumerate() {
                let j = j as f64;
                *c *= Complex64::from_polar(1.0, (x0 * y0 + x0 * j * dy + dx * dy * j * j / 2.0) / h);
            }
            Box::new(move |d: i64| {
                let b = cutoff(d);
                if b == 0.0 {
                    return Complex64::new(0.0, 0.0);
                }
                let d = d as f64;
                Complex64::from_polar(b, -dx * dy * d * d / (2.0 * h))
            })
        }
        Phase::Hyperbolic { w } => Box::new(move |d: i64| {
            let b = cutoff(d);
            if b == 0.0 {
                return Complex64::new(0.0, 0.0);
            }
            Complex64::from_polar(b, hyperbolic_phase_over_h(w, offset + d as f64 * dx, h))
        }),
    };

    let len = (m + n - 1).next_power_of_two();
    let mut kernel = vec![Complex64::new(0.0, 0.0); len];
    for d in -(n as i64 - 1)..=(m as i64 - 1) {
        kernel[d.rem_euclid(len as i64) as usize] = symbol(d);
    }
    let mut planner = FftPlanner::new();
    let forward = planner.plan_fft_forward(len);
    let inverse = planner.plan_fft_inverse(len);
    forward.process(&mut kernel);
    let norm = 1.0 / len as f64;
    kernel.iter_mut().for_each(|z| *z *= norm);
    Ok(StructuredOperator {
        h,
        oversample,
        x_grid: xg,
        y_grid: yg,
        row,
        col,
        spectrum: kernel,
        forward,
        inverse,
    })
}

impl StructuredOperator {
    fn fft_len(&self) -> usize {
        self.spectrum.len()
    }

    /// `out_k = Σ_j t(k - j) input_j` (or the adjoint symbol when `adjoint`).
    fn convolve(&self, input: &[Complex64], out: &mut [Complex64], adjoint: bool) {
        let mut buf = vec![Complex64::new(0.0, 0.0); self.fft_len()];
        buf[..input.len()].copy_from_slice(input);
        self.forward.process(&mut buf);
        if adjoint {
            buf.iter_mut().zip(&self.spectrum).for_each(|(b, s)| *b *= s.conj());
        } else {
            buf.iter_mut().zip(&self.spectrum).for_each(|(b, s)| *b *= s);
        }
        self.inverse.process(&mut buf);
        out.copy_from_slice(&buf[..out.len()]);
    }
}

impl LinearOperator for StructuredOperator {
    fn nrows(&self) -> usize {
        self.row.len()
    }

    fn ncols(&self) -> usize {
        self.col.len()
    }

    fn apply(&self, x: &[Complex64], out: &mut [Complex64]) {
        let scaled: Vec<Complex64> = x.iter().zip(&self.col).map(|(a, c)| a * c).collect();
        self.convolve(&scaled, out, false);
        out.iter_mut().zip(&self.row).for_each(|(o, r)| *o *= r);
    }

    fn apply_adjoint(&self, y: &[Complex64], out: &mut [Complex64]) {
        let scaled: Vec<Complex64> = y.iter().zip(&self.row).map(|(a, r)| a * r.conj()).collect();
        // With t*(d) = conj(t(-d)), the convolution `out_j = Σ_i t*(j - i) y_i`
        // has spectrum conj(spectrum) on the same zero-padded layout.
        self.convolve(&scaled, out, true);
        out.iter_mut().zip(&self.col).for_each(|(o, c)| *o *= c.conj());
    }
}
