//! Dense midpoint-rule discretization of `h^{-1/2} ∫ e^{iΦ(x,y)/h} b(x,y) f(y) dy`.

use num_complex::Complex64;

use super::kernel::{Grid, KernelSpec};
use super::norm::{DenseMatrix, LinearOperator};
use crate::error::{Error, Result};

/// Default cap on either matrix dimension.
pub const DEFAULT_MAX_DIM: usize = 1 << 15;

/// Matrices above this many entries are refused regardless of the dimension cap.
pub const MAX_DENSE_ENTRIES: usize = 1 << 27;

/// Smallest oversampling factor accepted by [`build_operator`].
pub const MIN_OVERSAMPLE: f64 = 8.0;

#[derive(Debug, Clone)]
pub struct DiscretizedOperator {
    pub h: f64,
    pub oversample: f64,
    pub x_grid: Grid,
    pub y_grid: Grid,
    pub matrix: DenseMatrix,
}

impl LinearOperator for DiscretizedOperator {
    fn nrows(&self) -> usize {
        self.matrix.nrows()
    }

    fn ncols(&self) -> usize {
        self.matrix.ncols()
    }

    fn apply(&self, x: &[Complex64], out: &mut [Complex64]) {
        self.matrix.apply(x, out)
    }

    fn apply_adjoint(&self, y: &[Complex64], out: &mut [Complex64]) {
        self.matrix.apply_adjoint(y, out)
    }
}

pub(crate) fn check_h(op: &'static str, h: f64) -> Result<()> {
    if !(h > 0.0 && h < 1.0) {
        return Err(Error::invalid(op, format!("h must lie in (0,1), got {h}")));
    }
    Ok(())
}

/// Entry `(i, j)`: `sqrt(Δx Δy) · h^{-1/2} · e^{iΦ(x_i, y_j)/h} · b(x_i, y_j)`.
pub fn entry(spec: &KernelSpec, h: f64, x: f64, y: f64, weight: f64) -> Complex64 {
    let b = spec.amplitude_at(x, y);
    if b == 0.0 {
        return Complex64::new(0.0, 0.0);
    }
    Complex64::from_polar(weight * b, spec.phase_over_h(x, y, h))
}

/// Dense operator with `oversample ≥ 8` points per `h` and the default dimension cap.
pub fn build_operator(spec: &KernelSpec, h: f64, oversample: f64) -> Result<DiscretizedOperator> {
    build_operator_capped(spec, h, oversample, DEFAULT_MAX_DIM)
}

pub fn build_operator_capped(spec: &KernelSpec, h: f64, oversample: f64, max_dim: usize) -> Result<DiscretizedOperator> {
    const OP: &str = "build_operator";
    if !(oversample >= MIN_OVERSAMPLE) {
        return Err(Error::invalid(OP, format!("oversample must be >= {MIN_OVERSAMPLE}, got {oversample}")));
    }
    build_dense(spec, h, oversample, max_dim)
}

/// Dense build without the oversampling floor.
pub(crate) fn build_dense(spec: &KernelSpec, h: f64, oversample: f64, max_dim: usize) -> Result<DiscretizedOperator> {
    const OP: &str = "build_operator";
    check_h(OP, h)?;
    spec.validate()?;
    let x_grid = Grid::for_window(spec.x_window, h, oversample);
    let y_grid = Grid::for_window(spec.y_window, h, oversample);
    let (m, n) = (x_grid.n, y_grid.n);
    if m.max(n) > max_dim || m.saturating_mul(n) > MAX_DENSE_ENTRIES {
        return Err(Error::Resource {
            op: OP,
            msg: format!("dense matrix of size {m}x{n} exceeds the cap (dimension {max_dim})"),
        });
    }
    let weight = (x_grid.step * y_grid.step / h).sqrt();
    let matrix = DenseMatrix::from_fn(m, n, |i, j| entry(spec, h, x_grid.point(i), y_grid.point(j), weight));
    Ok(DiscretizedOperator {
        h,
        oversample,
        x_grid,
        y_grid,
        matrix,
    })
}
