//! Local observables needed to evaluate the inequality experimentally.
//!
//! Every diagonal bracket ⟨χ|ρ|χ⟩ is the expectation of |χ⟩⟨χ|, which is a
//! tensor product of single-subsystem projectors because χ is a product
//! state. The first term needs the single coherence ⟨φ₁|ρ|φ₂⟩.

use serde::{Deserialize, Serialize};

use super::apply_block_swap;
use crate::error::Result;
use crate::partition::enumerate_partitions;
use crate::states::ProductState;

/// Factor-wise tolerance used when merging identical observables.
const DEDUP_TOL: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OffDiagonalPair {
    pub phi1: ProductState,
    pub phi2: ProductState,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MeasurementPlan {
    /// Product states χ whose projectors |χ⟩⟨χ| must be measured, in order of
    /// first appearance over the canonical partition order.
    pub diagonal_observables: Vec<ProductState>,
    pub offdiagonal_pair: OffDiagonalPair,
    pub total_count: usize,
}

pub fn measurement_plan(phi1: &ProductState, phi2: &ProductState, k: usize) -> Result<MeasurementPlan> {
    let mut observables: Vec<ProductState> = Vec::new();
    for partition in enumerate_partitions(phi1.parties(), k)? {
        for block in partition.blocks() {
            let (a, b) = apply_block_swap(phi1, phi2, block)?;
            for chi in [a, b] {
                if !observables.iter().any(|o| o.approx_eq(&chi, DEDUP_TOL)) {
                    observables.push(chi);
                }
            }
        }
    }
    let total_count = observables.len() + 1;
    Ok(MeasurementPlan {
        diagonal_observables: observables,
        offdiagonal_pair: OffDiagonalPair { phi1: phi1.clone(), phi2: phi2.clone() },
        total_count,
    })
}
