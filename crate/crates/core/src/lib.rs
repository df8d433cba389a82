//! Numerical laboratory for the constructive pieces of the fractal uncertainty
//! principle on hyperbolic surfaces.
//!
//! The crate is organised by subsystem:
//!
//! - [`intervals`]: finite unions of intervals, gaps and porosity certification.
//! - [`regular`]: Cantor-tree embedding of porous sets into Ahlfors–David
//!   regular sets, with the natural Cantor measure.
//! - [`fup`]: discretized oscillatory operators, masks, operator norms and
//!   decay-exponent fits.
//! - [`words`]: exact combinatorics of the dynamical word partition.
//! - [`hyperbolic`]: the `Γ\PSL(2,ℝ)` model of the unit cotangent bundle with
//!   geodesic and horocycle flows, equidistribution averages and porosity
//!   witnesses.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod fup;
pub mod hyperbolic;
pub mod intervals;
mod par;
pub mod regular;
pub mod rng;
pub mod words;

pub use error::{Error, Result};
pub use intervals::{Interval, IntervalSet, PorosityReport};
pub use regular::{CantorTree, RegularMeasure, RegularityReport};
pub use words::{CountReport, PartitionParams, Word};
