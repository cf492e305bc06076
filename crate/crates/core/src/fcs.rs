//! n-site reduced states of translationally invariant qubit chains given as
//! finitely correlated states.
//!
//! With b×b transfer operators v₀, v₁ and an auxiliary state ρ_B the n-site
//! state has entries ⟨s|ρ|t⟩ = Tr(v_s† ρ_B v_t), v_s = v_{s₁}v_{s₂}…v_{sₙ},
//! followed by explicit trace normalization.

use serde::{Deserialize, Serialize};

use crate::criterion::{evaluate_criterion, CriterionResult};
use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, C64, ONE};
use crate::optimizer::{optimize_phi, OptimizationReport, OptimizerSettings};
use crate::states::{DensityMatrix, ProductState, HERMITICITY_TOL, TRACE_TOL};

const DEGENERATE_TRACE: f64 = 1e-12;

/// Chain description. Serialized as
/// `{"b": 2, "n": 4, "v0": [[...]], "v1": [[...]], "rhoB": [[...]]}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "FcsSpecFile", into = "FcsSpecFile")]
pub struct FcsSpec {
    b: usize,
    n: usize,
    v0: ComplexMatrix,
    v1: ComplexMatrix,
    rho_b: ComplexMatrix,
}

#[derive(Serialize, Deserialize)]
struct FcsSpecFile {
    b: usize,
    n: usize,
    #[serde(with = "crate::io::matrix_rows")]
    v0: ComplexMatrix,
    #[serde(with = "crate::io::matrix_rows")]
    v1: ComplexMatrix,
    #[serde(rename = "rhoB", with = "crate::io::matrix_rows")]
    rho_b: ComplexMatrix,
}

impl TryFrom<FcsSpecFile> for FcsSpec {
    type Error = Error;

    fn try_from(f: FcsSpecFile) -> Result<Self> {
        let spec = Self::new(f.v0, f.v1, f.rho_b, f.n)?;
        if spec.b != f.b {
            return Err(Error::Shape(format!("declared b={} but matrices are {}x{}", f.b, spec.b, spec.b)));
        }
        Ok(spec)
    }
}

impl From<FcsSpec> for FcsSpecFile {
    fn from(s: FcsSpec) -> Self {
        Self { b: s.b, n: s.n, v0: s.v0, v1: s.v1, rho_b: s.rho_b }
    }
}

impl FcsSpec {
    pub fn new(v0: ComplexMatrix, v1: ComplexMatrix, rho_b: ComplexMatrix, n: usize) -> Result<Self> {
        let b = rho_b.rows();
        for (name, m) in [("v0", &v0), ("v1", &v1), ("rhoB", &rho_b)] {
            if m.rows() != b || m.cols() != b || b == 0 {
                return Err(Error::Shape(format!("{name} is {}x{}, expected {b}x{b}", m.rows(), m.cols())));
            }
        }
        if n < 2 {
            return Err(Error::ParameterOutOfRange(format!("chain length n={n} < 2")));
        }
        let herm = rho_b.hermiticity_deviation();
        if herm > HERMITICITY_TOL {
            return Err(Error::NotHermitian(herm));
        }
        let tr = rho_b.trace();
        if (tr - ONE).norm() > TRACE_TOL {
            return Err(Error::BadTrace(tr.re));
        }
        Ok(Self { b, n, v0, v1, rho_b })
    }

    pub fn bond_dim(&self) -> usize {
        self.b
    }

    pub fn sites(&self) -> usize {
        self.n
    }

    /// Same operators, different number of extracted sites.
    pub fn with_sites(&self, n: usize) -> Result<Self> {
        Self::new(self.v0.clone(), self.v1.clone(), self.rho_b.clone(), n)
    }

    /// ‖Σ_s v_s† ρ_B v_s − ρ_B‖_max: stationarity of ρ_B under the transfer
    /// map matching the entry convention Tr(v_s† ρ_B v_t).
    pub fn fixed_point_residual(&self) -> Result<f64> {
        let mut acc = ComplexMatrix::zeros(self.b, self.b);
        for v in [&self.v0, &self.v1] {
            acc = acc.add_scaled(&v.adjoint().matmul(&self.rho_b)?.matmul(v)?, ONE)?;
        }
        Ok(acc.max_abs_diff(&self.rho_b))
    }

    /// ‖Σ_s v_s v_s† − 𝟙‖_max.
    pub fn isometry_residual(&self) -> Result<f64> {
        let mut acc = ComplexMatrix::zeros(self.b, self.b);
        for v in [&self.v0, &self.v1] {
            acc = acc.add_scaled(&v.matmul(&v.adjoint())?, ONE)?;
        }
        Ok(acc.max_abs_diff(&ComplexMatrix::identity(self.b)))
    }
}

/// Assemble the normalized 2ⁿ×2ⁿ chain state.
pub fn build_fcs_state(spec: &FcsSpec, check_psd: bool) -> Result<DensityMatrix> {
    let n = spec.n;
    let dim = 1usize << n;
    // v_s for every string s, first site most significant.
    let mut products = vec![ComplexMatrix::identity(spec.b)];
    for _ in 0..n {
        products =
            products.iter().flat_map(|p| [p.matmul(&spec.v0), p.matmul(&spec.v1)]).collect::<Result<Vec<_>>>()?;
    }
    let weighted: Vec<ComplexMatrix> = products.iter().map(|v| spec.rho_b.matmul(v)).collect::<Result<_>>()?;
    // Tr(A† B) = Σ conj(A_ij) B_ij
    let entries = ComplexMatrix::from_fn(dim, dim, |s, t| {
        products[s].data().iter().zip(weighted[t].data()).map(|(a, b)| a.conj() * b).sum()
    });
    let trace = entries.trace();
    if trace.norm() <= DEGENERATE_TRACE {
        return Err(Error::DegenerateTrace(trace.norm()));
    }
    DensityMatrix::new(vec![2; n], entries.scale(C64::new(1.0, 0.0) / trace), check_psd)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChainReport {
    pub n: usize,
    pub b: usize,
    pub fixed_point_residual: f64,
    pub results: Vec<CriterionResult>,
    /// Present when the detection vector was optimized per k.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub optimizations: Vec<OptimizationReport>,
}

/// Build the chain state and evaluate the criterion for every k in `ks`
/// (k = 2..n when `ks` is empty), optionally optimizing Φ per k first.
pub fn chain_separability_report(
    spec: &FcsSpec,
    phi1: &ProductState,
    phi2: &ProductState,
    ks: &[usize],
    optimize: Option<OptimizerSettings>,
    tolerance: f64,
) -> Result<ChainReport> {
    let rho = build_fcs_state(spec, false)?;
    let ks: Vec<usize> = if ks.is_empty() { (2..=spec.n).collect() } else { ks.to_vec() };
    let mut results = Vec::with_capacity(ks.len());
    let mut optimizations = Vec::new();
    for k in ks {
        let result = match optimize {
            Some(settings) => {
                let report = optimize_phi(&rho, k, phi1, phi2, settings)?;
                let r = evaluate_criterion(&rho, &report.best_phi1, &report.best_phi2, k, tolerance)?;
                optimizations.push(report);
                r
            }
            None => evaluate_criterion(&rho, phi1, phi2, k, tolerance)?,
        };
        results.push(result);
    }
    Ok(ChainReport { n: spec.n, b: spec.b, fixed_point_residual: spec.fixed_point_residual()?, results, optimizations })
}
