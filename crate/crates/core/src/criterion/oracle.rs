//! Literal evaluation of the inequality on the two-copy space.
//!
//! Builds ρ⊗ρ as a D²×D² matrix, the swap operators P_i as permutations of
//! the two-copy basis, and evaluates every bracket as a quadratic form in
//! P|Φ⟩. Quadratic in memory and quartic in time; meant as a cross-check.

use super::{check_inputs, CriterionResult, PartitionTerm};
use crate::error::{Error, Result};
use crate::linalg::{self, C64};
use crate::partition::enumerate_partitions;
use crate::states::{DensityMatrix, ProductState};

/// Largest two-copy dimension D² the oracle accepts.
pub const ORACLE_MAX_TWO_COPY_DIM: usize = 4096;

/// Permutation of the two-copy basis: `image[x]` is the index of P|x⟩.
#[derive(Clone, Debug, PartialEq)]
struct TwoCopyPermutation {
    image: Vec<usize>,
}

impl TwoCopyPermutation {
    fn identity(dim: usize) -> Self {
        Self { image: (0..dim * dim).collect() }
    }

    /// P_i: exchange subsystem `site` of copy A with subsystem `site` of copy B.
    fn swap_site(dims: &[usize], site: usize) -> Self {
        let dim = linalg::total_dim(dims);
        let image = (0..dim * dim)
            .map(|x| {
                let mut a = linalg::digits(x / dim, dims);
                let mut b = linalg::digits(x % dim, dims);
                std::mem::swap(&mut a[site], &mut b[site]);
                linalg::index_of(&a, dims) * dim + linalg::index_of(&b, dims)
            })
            .collect();
        Self { image }
    }

    /// self ∘ other.
    fn compose(&self, other: &Self) -> Self {
        Self { image: other.image.iter().map(|&y| self.image[y]).collect() }
    }

    fn apply(&self, v: &[C64]) -> Vec<C64> {
        let mut out = vec![linalg::ZERO; v.len()];
        for (x, &amp) in v.iter().enumerate() {
            out[self.image[x]] = amp;
        }
        out
    }
}

fn block_operator(dims: &[usize], block: &[usize]) -> TwoCopyPermutation {
    let dim = linalg::total_dim(dims);
    block
        .iter()
        .fold(TwoCopyPermutation::identity(dim), |acc, &site| TwoCopyPermutation::swap_site(dims, site).compose(&acc))
}

/// Same contract as [`super::evaluate_criterion`], computed on the two-copy
/// space. Rejects D² > [`ORACLE_MAX_TWO_COPY_DIM`].
pub fn evaluate_criterion_oracle(
    rho: &DensityMatrix,
    phi1: &ProductState,
    phi2: &ProductState,
    k: usize,
    tolerance: f64,
) -> Result<CriterionResult> {
    check_inputs(rho, phi1, phi2, k)?;
    let dims = rho.dims();
    let two_copy_dim = rho.dim() * rho.dim();
    if two_copy_dim > ORACLE_MAX_TWO_COPY_DIM {
        return Err(Error::OracleTooLarge(two_copy_dim));
    }

    let rho2 = rho.matrix().kron(rho.matrix());
    let big_phi = linalg::kron_vec(&phi1.to_vector(), &phi2.to_vector());
    let form = |v: &[C64]| linalg::inner(v, &rho2.matvec(v));

    // ⟨Φ|ρ⊗ρ P_tot|Φ⟩ = |⟨φ₁|ρ|φ₂⟩|²
    let all: Vec<usize> = (0..dims.len()).collect();
    let total_swap = block_operator(dims, &all);
    let first = linalg::inner(&big_phi, &rho2.matvec(&total_swap.apply(&big_phi)));
    let first_term = first.norm().sqrt();

    let exponent = 1.0 / (2 * k) as f64;
    let mut terms = Vec::new();
    for partition in enumerate_partitions(dims.len(), k)? {
        let mut product = 1.0;
        for block in partition.blocks() {
            let swapped = block_operator(dims, block).apply(&big_phi);
            product *= form(&swapped).re.max(0.0);
        }
        terms.push(PartitionTerm { partition, value: product.powf(exponent) });
    }
    Ok(CriterionResult::assemble(k, first_term, terms, tolerance))
}
