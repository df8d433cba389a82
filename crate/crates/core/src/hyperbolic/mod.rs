//! The `Γ\PSL(2,ℝ)` model of the unit cotangent bundle of a compact
//! hyperbolic surface.
//!
//! Points are cosets `Γg` represented by reduced matrices. The geodesic flow is
//! right multiplication by `a_t = diag(e^{t/2}, e^{-t/2})` and the horocycle
//! flows are right multiplication by unipotents. Orientation convention: the
//! stable flow `U₊` is the upper unipotent `n⁺_s` and the unstable flow `U₋`
//! is the lower unipotent `n⁻_s`, so that `φ_t ∘ e^{sU₋} = e^{e^t s U₋} ∘ φ_t`
//! and `φ_t ∘ e^{sU₊} = e^{e^{-t} s U₊} ∘ φ_t`.

pub mod flows;
pub mod group;
pub mod hitting;
pub mod moebius;
pub mod observables;
pub mod witness;

pub use flows::{geodesic_flow, horocycle_flow, Direction};
pub use group::{FuchsianGroup, GroupSpec, UnitTangentPoint};
pub use hitting::{hitting_time, Ball};
pub use moebius::MoebiusElement;
pub use observables::{horocycle_average, liouville_average, LiouvilleEstimate, Observable};
pub use witness::{porosity_witness, witness_index, SliceSpec, WitnessRecord};
