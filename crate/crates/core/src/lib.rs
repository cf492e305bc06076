//! Detection of k-nonseparability in multipartite qudit density matrices.
//!
//! For a density matrix ρ on n parties and a product detection pair
//! (|φ₁⟩, |φ₂⟩), [`criterion::evaluate_criterion`] computes a scalar that is
//! nonpositive for every k-separable ρ. A positive value is therefore a
//! certificate that ρ is not k-separable; a nonpositive value is
//! inconclusive.
//!
//! Besides the criterion itself the crate provides the state families used
//! to benchmark it, partition enumeration, a local-unitary optimizer for the
//! detection pair, chain states built from transfer operators, and the list
//! of local observables needed to measure the criterion.

pub mod criterion;
pub mod error;
pub mod fcs;
pub mod io;
pub mod linalg;
pub mod optimizer;
pub mod partition;
pub mod random;
pub mod states;
pub mod sweep;

pub use criterion::{
    analytic_threshold, apply_block_swap, evaluate_all_k, evaluate_criterion, evaluate_criterion_oracle,
    measurement_plan, numeric_threshold, CriterionResult, MeasurementPlan, DEFAULT_TOLERANCE,
};
pub use error::{Error, Result};
pub use linalg::{ComplexMatrix, C64};
pub use partition::{count_partitions, enumerate_partitions, Partition};
pub use states::{DensityMatrix, ProductState, StateFamily, StateFamilyPoint};
