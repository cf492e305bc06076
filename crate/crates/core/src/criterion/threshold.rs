//! Noise thresholds for GHZ states mixed with white noise.

use super::{evaluate_criterion, DEFAULT_TOLERANCE};
use crate::error::{Error, Result};
use crate::partition::count_partitions;
use crate::states::{family_state, DensityMatrix, ProductState, StateFamilyPoint};

/// Largest |value| accepted at a bisected threshold.
pub const THRESHOLD_VALUE_TOL: f64 = 1e-9;

/// γ / (γ + d^{n−1}) with γ = S(n, k): the mixing probability above which
/// the noisy GHZ state is flagged as not k-separable with |0…0⟩, |1…1⟩.
pub fn analytic_threshold(n: usize, d: usize, k: usize) -> Result<f64> {
    if d < 2 {
        return Err(Error::ParameterOutOfRange(format!("local dimension d={d} < 2")));
    }
    let gamma = count_partitions(n, k)? as f64;
    let scale = (d as f64).powi(n as i32 - 1);
    Ok(gamma / (gamma + scale))
}

/// Bisect on p ∈ [0, 1] for the sign change of the criterion value along a
/// one-parameter family. Needs value(0) ≤ 0 < value(1).
pub fn numeric_threshold<F>(
    family: F,
    phi1: &ProductState,
    phi2: &ProductState,
    k: usize,
    p_tolerance: f64,
) -> Result<f64>
where
    F: Fn(f64) -> Result<DensityMatrix>,
{
    let value =
        |p: f64| -> Result<f64> { Ok(evaluate_criterion(&family(p)?, phi1, phi2, k, DEFAULT_TOLERANCE)?.value) };
    let (low, high) = (value(0.0)?, value(1.0)?);
    if !(low <= 0.0 && high > 0.0) {
        return Err(Error::NoSignChange { low, high });
    }
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    while hi - lo > p_tolerance {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if value(mid)? > 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Numeric threshold of p|GHZ⟩⟨GHZ| + (1−p)𝟙/dⁿ with the computational pair.
pub fn isotropic_numeric_threshold(n: usize, d: usize, k: usize) -> Result<f64> {
    let (phi1, phi2) = ProductState::computational_pair(&vec![d; n])?;
    numeric_threshold(|p| family_state(&StateFamilyPoint::IsotropicGhz { n, d, p }), &phi1, &phi2, k, 1e-12)
}
