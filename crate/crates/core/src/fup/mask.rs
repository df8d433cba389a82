//! Indicator masks `1_X · A · 1_Y` on the quadrature grids.

use num_complex::Complex64;

use super::kernel::Grid;
use super::norm::LinearOperator;
use super::GridOperator;
use crate::error::{Error, Result};
use crate::intervals::IntervalSet;

/// `P A Q` with `P`, `Q` diagonal 0/1 matrices.
#[derive(Debug)]
pub struct MaskedOperator<'a, A: LinearOperator + ?Sized> {
    pub op: &'a A,
    pub x_mask: Vec<bool>,
    pub y_mask: Vec<bool>,
}

impl<'a, A: LinearOperator + ?Sized> MaskedOperator<'a, A> {
    pub fn new(op: &'a A, x_mask: Vec<bool>, y_mask: Vec<bool>) -> Result<Self> {
        if x_mask.len() != op.nrows() || y_mask.len() != op.ncols() {
            return Err(Error::invalid("mask", "mask lengths must match the operator dimensions"));
        }
        Ok(MaskedOperator { op, x_mask, y_mask })
    }

    pub fn is_zero(&self) -> bool {
        !self.x_mask.iter().any(|&b| b) || !self.y_mask.iter().any(|&b| b)
    }
}

fn restrict(v: &[Complex64], mask: &[bool]) -> Vec<Complex64> {
    v.iter()
        .zip(mask)
        .map(|(&z, &keep)| if keep { z } else { Complex64::new(0.0, 0.0) })
        .collect()
}

fn zero_outside(v: &mut [Complex64], mask: &[bool]) {
    v.iter_mut().zip(mask).filter(|(_, &keep)| !keep).for_each(|(z, _)| *z = Complex64::new(0.0, 0.0));
}

impl<A: LinearOperator + ?Sized> LinearOperator for MaskedOperator<'_, A> {
    fn nrows(&self) -> usize {
        self.op.nrows()
    }

    fn ncols(&self) -> usize {
        self.op.ncols()
    }

    fn apply(&self, x: &[Complex64], out: &mut [Complex64]) {
        self.op.apply(&restrict(x, &self.y_mask), out);
        zero_outside(out, &self.x_mask);
    }

    fn apply_adjoint(&self, y: &[Complex64], out: &mut [Complex64]) {
        self.op.apply_adjoint(&restrict(y, &self.x_mask), out);
        zero_outside(out, &self.y_mask);
    }
}

/// Grid points lying in `set`.
pub fn grid_membership(grid: &Grid, set: &IntervalSet) -> Vec<bool> {
    grid.points().map(|p| set.contains_point(p)).collect()
}

/// `1_{X(h^ρ)} A 1_{Y(h^ρ)}`: rows restricted to `X(h^ρ)`, columns to `Y(h^ρ)`.
pub fn mask<'a, A: GridOperator + ?Sized>(op: &'a A, x: &IntervalSet, y: &IntervalSet, rho: f64) -> Result<MaskedOperator<'a, A>> {
    if !(rho > 0.0 && rho < 1.0) {
        return Err(Error::invalid("mask", format!("rho must lie in (0,1), got {rho}")));
    }
    let s = op.h().powf(rho);
    mask_by_sets(op, &x.neighborhood(s)?, &y.neighborhood(s)?)
}

/// Restriction to sets given directly, without fattening.
pub fn mask_by_sets<'a, A: GridOperator + ?Sized>(op: &'a A, x: &IntervalSet, y: &IntervalSet) -> Result<MaskedOperator<'a, A>> {
    let xm = grid_membership(op.x_grid(), x);
    let ym = grid_membership(op.y_grid(), y);
    MaskedOperator::new(op, xm, ym)
}
