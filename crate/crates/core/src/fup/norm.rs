//! Matrix-free operators and the largest singular value by power iteration.

use num_complex::Complex64;
use rand::Rng as _;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng;

/// A linear map `ℂ^ncols → ℂ^nrows` together with its adjoint.
pub trait LinearOperator: Sync {
    fn nrows(&self) -> usize;
    fn ncols(&self) -> usize;
    /// `out = A x`.
    fn apply(&self, x: &[Complex64], out: &mut [Complex64]);
    /// `out = A* y`.
    fn apply_adjoint(&self, y: &[Complex64], out: &mut [Complex64]);
}

/// Row-major dense complex matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix {
    nrows: usize,
    ncols: usize,
    data: Vec<Complex64>,
}

impl DenseMatrix {
    pub fn zeros(nrows: usize, ncols: usize) -> Self {
        DenseMatrix {
            nrows,
            ncols,
            data: vec![Complex64::new(0.0, 0.0); nrows * ncols],
        }
    }

    pub fn from_fn(nrows: usize, ncols: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut data = Vec::with_capacity(nrows * ncols);
        for i in 0..nrows {
            for j in 0..ncols {
                data.push(f(i, j));
            }
        }
        DenseMatrix { nrows, ncols, data }
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.data[i * self.ncols + j]
    }

    pub fn row(&self, i: usize) -> &[Complex64] {
        &self.data[i * self.ncols..(i + 1) * self.ncols]
    }

    pub fn data(&self) -> &[Complex64] {
        &self.data
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(Complex64::norm_sqr).sum::<f64>().sqrt()
    }

    /// Dense copy of any operator, built column by column.
    pub fn from_operator(a: &dyn LinearOperator) -> Self {
        let (m, n) = (a.nrows(), a.ncols());
        let mut out = DenseMatrix::zeros(m, n);
        let mut e = vec![Complex64::new(0.0, 0.0); n];
        let mut col = vec![Complex64::new(0.0, 0.0); m];
        for j in 0..n {
            e[j] = Complex64::new(1.0, 0.0);
            a.apply(&e, &mut col);
            e[j] = Complex64::new(0.0, 0.0);
            for (i, v) in col.iter().enumerate() {
                out.data[i * n + j] = *v;
            }
        }
        out
    }
}

impl LinearOperator for DenseMatrix {
    fn nrows(&self) -> usize {
        self.nrows
    }

    fn ncols(&self) -> usize {
        self.ncols
    }

    fn apply(&self, x: &[Complex64], out: &mut [Complex64]) {
        for (i, o) in out.iter_mut().enumerate() {
            *o = self.row(i).iter().zip(x).map(|(a, b)| a * b).sum();
        }
    }

    fn apply_adjoint(&self, y: &[Complex64], out: &mut [Complex64]) {
        out.fill(Complex64::new(0.0, 0.0));
        for (i, yi) in y.iter().enumerate() {
            for (o, a) in out.iter_mut().zip(self.row(i)) {
                *o += a.conj() * yi;
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NormOptions {
    /// Stop when the relative change of the estimate of `‖A‖²` falls below this.
    pub tol: f64,
    pub max_iter: usize,
    pub seed: u64,
}

impl Default for NormOptions {
    fn default() -> Self {
        NormOptions {
            tol: 1e-10,
            max_iter: 10_000,
            seed: 0x5eed,
        }
    }
}

impl NormOptions {
    pub fn with_tol(tol: f64) -> Self {
        NormOptions {
            tol,
            ..NormOptions::default()
        }
    }
}

fn norm2(v: &[Complex64]) -> f64 {
    v.iter().map(Complex64::norm_sqr).sum::<f64>().sqrt()
}

/// Largest singular value of `a` by power iteration on `A*A`.
///
/// The iterate is renormalized each step and `‖Av‖²` serves as the Rayleigh
/// quotient; iteration stops once its relative change is below `tol`.
pub fn operator_norm(a: &dyn LinearOperator, opts: &NormOptions) -> Result<f64> {
    const OP: &str = "operator_norm";
    if !(opts.tol > 0.0) {
        return Err(Error::invalid(OP, format!("tol must be > 0, got {}", opts.tol)));
    }
    let (m, n) = (a.nrows(), a.ncols());
    if m == 0 || n == 0 {
        return Ok(0.0);
    }
    let mut r = rng::stream(opts.seed, 0);
    let mut v: Vec<Complex64> = (0..n)
        .map(|_| Complex64::new(r.gen_range(-1.0..1.0), r.gen_range(-1.0..1.0)))
        .collect();
    let nv = norm2(&v);
    v.iter_mut().for_each(|x| *x /= nv);
    let mut av = vec![Complex64::new(0.0, 0.0); m];
    let mut lambda_prev = 0.0;
    let mut change = f64::INFINITY;
    for _ in 0..opts.max_iter {
        a.apply(&v, &mut av);
        let lambda = av.iter().map(Complex64::norm_sqr).sum::<f64>();
        if lambda == 0.0 {
            return Ok(0.0);
        }
        change = (lambda - lambda_prev).abs() / lambda;
        if change < opts.tol {
            return Ok(lambda.sqrt());
        }
        lambda_prev = lambda;
        a.apply_adjoint(&av, &mut v);
        let nv = norm2(&v);
        if nv == 0.0 {
            return Ok(0.0);
        }
        v.iter_mut().for_each(|x| *x /= nv);
    }
    Err(Error::NoConvergence {
        op: OP,
        iterations: opts.max_iter,
        residual: change,
    })
}
