//! The k-separability inequality.
//!
//! For a product detection vector |Φ⟩ = |φ₁⟩⊗|φ₂⟩ every k-separable ρ obeys
//!
//! ```text
//! |⟨φ₁|ρ|φ₂⟩| − Σ_α Π_{i=1..k} (⟨χᵢᴬ|ρ|χᵢᴬ⟩ ⟨χᵢᴮ|ρ|χᵢᴮ⟩)^{1/(2k)} ≤ 0
//! ```
//!
//! where α runs over all partitions of the parties into k blocks and
//! |χᵢᴬ⟩⊗|χᵢᴮ⟩ is |φ₁⟩⊗|φ₂⟩ with the factors in block αᵢ exchanged between
//! the two copies. A strictly positive left-hand side therefore certifies
//! that ρ is not k-separable; a nonpositive one proves nothing.

mod oracle;
mod plan;
mod threshold;

use std::collections::HashMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use oracle::{evaluate_criterion_oracle, ORACLE_MAX_TWO_COPY_DIM};
pub use plan::{measurement_plan, MeasurementPlan, OffDiagonalPair};
pub use threshold::{analytic_threshold, isotropic_numeric_threshold, numeric_threshold, THRESHOLD_VALUE_TOL};

use crate::error::{Error, Result};
use crate::linalg::C64;
use crate::partition::{check_block_count, enumerate_partitions, Partition};
use crate::states::{DensityMatrix, ProductState};

/// Default one-sided violation tolerance.
pub const DEFAULT_TOLERANCE: f64 = 1e-9;

/// Diagonal brackets in [−this, 0) are roundoff and read as zero.
pub const NEGATIVE_DIAGONAL_TOL: f64 = 1e-9;

/// Contribution of one partition to the subtracted sum.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PartitionTerm {
    pub partition: Partition,
    pub value: f64,
}

/// Outcome of one evaluation of the inequality.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CriterionResult {
    pub k: usize,
    pub first_term: f64,
    #[serde(rename = "terms")]
    pub partition_terms: Vec<PartitionTerm>,
    pub value: f64,
    pub violated: bool,
    pub tolerance: f64,
}

impl CriterionResult {
    pub(crate) fn assemble(k: usize, first_term: f64, partition_terms: Vec<PartitionTerm>, tolerance: f64) -> Self {
        let value = first_term - partition_terms.iter().map(|t| t.value).sum::<f64>();
        Self { k, first_term, partition_terms, value, violated: value > tolerance, tolerance }
    }
}

/// Exchange the factors listed in `block` between the two copies.
pub fn apply_block_swap(
    phi1: &ProductState,
    phi2: &ProductState,
    block: &[usize],
) -> Result<(ProductState, ProductState)> {
    check_pair(phi1, phi2)?;
    let n = phi1.parties();
    if let Some(&bad) = block.iter().find(|&&j| j >= n) {
        return Err(Error::ParameterOutOfRange(format!("block index {bad} >= n={n}")));
    }
    let mut a = phi1.factors().to_vec();
    let mut b = phi2.factors().to_vec();
    for &j in block {
        std::mem::swap(&mut a[j], &mut b[j]);
    }
    Ok((ProductState::from_factors_unchecked(a), ProductState::from_factors_unchecked(b)))
}

fn check_pair(phi1: &ProductState, phi2: &ProductState) -> Result<()> {
    if phi1.dims() != phi2.dims() {
        return Err(Error::DimensionMismatch(format!(
            "phi1 dims {:?} differ from phi2 dims {:?}",
            phi1.dims(),
            phi2.dims()
        )));
    }
    Ok(())
}

pub(crate) fn check_inputs(rho: &DensityMatrix, phi1: &ProductState, phi2: &ProductState, k: usize) -> Result<()> {
    check_pair(phi1, phi2)?;
    if phi1.dims() != rho.dims() {
        return Err(Error::DimensionMismatch(format!(
            "detection vector dims {:?} differ from state dims {:?}",
            phi1.dims(),
            rho.dims()
        )));
    }
    check_block_count(rho.parties(), k)
}

/// Read a diagonal bracket, clamping roundoff-sized negatives to zero.
pub(crate) fn nonnegative_diagonal(x: f64) -> Result<f64> {
    if x >= 0.0 {
        Ok(x)
    } else if x >= -NEGATIVE_DIAGONAL_TOL {
        Ok(0.0)
    } else {
        Err(Error::NegativeDiagonal(x))
    }
}

/// Reusable evaluator for fixed (n, k): holds the partition list so repeated
/// evaluations (optimization, sweeps) skip the enumeration.
#[derive(Clone, Debug)]
pub struct CriterionEvaluator {
    k: usize,
    partitions: Vec<Partition>,
}

impl CriterionEvaluator {
    pub fn new(n: usize, k: usize) -> Result<Self> {
        Ok(Self { k, partitions: enumerate_partitions(n, k)?.collect() })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn partitions(&self) -> &[Partition] {
        &self.partitions
    }

    pub fn evaluate(
        &self,
        rho: &DensityMatrix,
        phi1: &ProductState,
        phi2: &ProductState,
        tolerance: f64,
    ) -> Result<CriterionResult> {
        check_inputs(rho, phi1, phi2, self.k)?;
        if self.partitions.first().map_or(0, Partition::n) != rho.parties() {
            return Err(Error::DimensionMismatch(format!(
                "evaluator built for a different party count than {}",
                rho.parties()
            )));
        }
        let first_term = rho.element(&phi1.to_vector(), &phi2.to_vector()).norm();

        // ⟨χ|ρ|χ⟩ where χ takes φ₂'s factor on the subsystems in `mask` and
        // φ₁'s elsewhere. χᴮ of a block is χᴬ of its complement, so each mask
        // is evaluated once.
        let full = (1u64 << rho.parties()) - 1;
        let mut diagonals: HashMap<u64, f64> = HashMap::new();
        let mut diagonal = |mask: u64| -> Result<f64> {
            if let Some(&x) = diagonals.get(&mask) {
                return Ok(x);
            }
            let chi = mixed_vector(phi1, phi2, mask);
            let x = nonnegative_diagonal(rho.element(&chi, &chi).re)?;
            diagonals.insert(mask, x);
            Ok(x)
        };

        let exponent = 1.0 / (2 * self.k) as f64;
        let mut terms = Vec::with_capacity(self.partitions.len());
        for partition in &self.partitions {
            let mut log_sum = 0.0;
            let mut vanishes = false;
            for block in partition.blocks() {
                let mask = block.iter().fold(0u64, |m, &j| m | (1 << j));
                for x in [diagonal(mask)?, diagonal(full & !mask)?] {
                    if x == 0.0 {
                        vanishes = true;
                    } else {
                        log_sum += x.ln();
                    }
                }
            }
            // 2k-th root of the product as exp(mean log) to stay clear of underflow.
            let value = if vanishes { 0.0 } else { (log_sum * exponent).exp() };
            terms.push(PartitionTerm { partition: partition.clone(), value });
        }
        Ok(CriterionResult::assemble(self.k, first_term, terms, tolerance))
    }
}

fn mixed_vector(phi1: &ProductState, phi2: &ProductState, mask: u64) -> Vec<C64> {
    let factors: Vec<Vec<C64>> = (0..phi1.parties())
        .map(|j| if mask >> j & 1 == 1 { phi2.factors()[j].clone() } else { phi1.factors()[j].clone() })
        .collect();
    ProductState::from_factors_unchecked(factors).to_vector()
}

/// Evaluate the inequality for one k. Positive `value` beyond `tolerance`
/// certifies that ρ is not k-separable.
pub fn evaluate_criterion(
    rho: &DensityMatrix,
    phi1: &ProductState,
    phi2: &ProductState,
    k: usize,
    tolerance: f64,
) -> Result<CriterionResult> {
    check_inputs(rho, phi1, phi2, k)?;
    CriterionEvaluator::new(rho.parties(), k)?.evaluate(rho, phi1, phi2, tolerance)
}

/// Evaluate for every k = 2..n, in increasing k.
pub fn evaluate_all_k(
    rho: &DensityMatrix,
    phi1: &ProductState,
    phi2: &ProductState,
    tolerance: f64,
) -> Result<Vec<CriterionResult>> {
    (2..=rho.parties()).into_par_iter().map(|k| evaluate_criterion(rho, phi1, phi2, k, tolerance)).collect()
}
