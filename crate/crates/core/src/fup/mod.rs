//! Discretized oscillatory operators `h^{-1/2} ∫ e^{iΦ(x,y)/h} b(x,y) f(y) dy`,
//! their restrictions to neighborhoods of fractal sets, and fits of the decay
//! exponent of the restricted norms.
//!
//! Two engines produce the same matrix: [`operator::build_operator`] stores it
//! densely and serves as the reference, [`fast::build_structured`] applies it
//! through FFT convolutions and is what the experiments use at small `h`.

pub mod experiment;
pub mod fast;
pub mod kernel;
pub mod mask;
pub mod norm;
pub mod operator;

pub use experiment::{fit_beta, fup_experiment, h_ladder, DecayFit, Engine, FupConfig, FupReport, FupRow, Mode};
pub use fast::{build_structured, StructuredOperator};
pub use kernel::{Amplitude, Grid, KernelSpec, Phase};
pub use mask::{mask, MaskedOperator};
pub use norm::{operator_norm, DenseMatrix, LinearOperator, NormOptions};
pub use operator::{build_operator, DiscretizedOperator};

/// An operator discretized on midpoint grids at a semiclassical parameter.
pub trait GridOperator: LinearOperator {
    fn h(&self) -> f64;
    fn oversample(&self) -> f64;
    fn x_grid(&self) -> &Grid;
    fn y_grid(&self) -> &Grid;
}

macro_rules! grid_operator {
    ($t:ty) => {
        impl GridOperator for $t {
            fn h(&self) -> f64 {
                self.h
            }

            fn oversample(&self) -> f64 {
                self.oversample
            }

            fn x_grid(&self) -> &Grid {
                &self.x_grid
            }

            fn y_grid(&self) -> &Grid {
                &self.y_grid
            }
        }
    };
}

grid_operator!(DiscretizedOperator);
grid_operator!(StructuredOperator);
