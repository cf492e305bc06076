//! Local-unitary optimization of the detection vector.
//!
//! Each local unitary on a d-level subsystem is parametrized by d² real
//! numbers: one (θ, λ) pair per level pair (a, b), a < b, and d phases,
//!
//! ```text
//! U = diag(e^{iφ_0}, …, e^{iφ_{d-1}}) · G_{01} · G_{02} · … · G_{d-2,d-1}
//! ```
//!
//! where G_{ab}(θ, λ) acts on the (a, b) plane as
//! `[[cos θ, e^{iλ} sin θ], [−e^{−iλ} sin θ, cos θ]]`. The same U_1⊗…⊗U_n is
//! applied to both |φ₁⟩ and |φ₂⟩, and the criterion value is maximized by
//! seeded random restarts of a cyclic coordinate search with golden-section
//! line maximization. A sweep that improves the value is followed by a line
//! search along its net displacement, and the bracket width halves only
//! after a sweep that gains less than 1e-6. Restart 0 always starts at the identity, so the result
//! is never worse than the base vector.

use std::f64::consts::{FRAC_PI_2, PI, TAU};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::criterion::{CriterionEvaluator, DEFAULT_TOLERANCE};
use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, C64};
use crate::states::{apply_local_unitaries, DensityMatrix, ProductState};

const GOLDEN_EVALS: usize = 20;
const STEP_SHRINK: f64 = 0.5;
const MIN_STEP: f64 = 1e-9;
const SWEEP_GAIN: f64 = 1e-6;
const PATTERN_REACH: f64 = 4.0;

/// Angles for one subsystem.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SubsystemAngles {
    /// (θ, λ) per level pair (a, b), a < b, in lexicographic pair order.
    pub rotations: Vec<[f64; 2]>,
    pub phases: Vec<f64>,
}

impl SubsystemAngles {
    pub fn identity(d: usize) -> Self {
        Self { rotations: vec![[0.0, 0.0]; d * (d - 1) / 2], phases: vec![0.0; d] }
    }

    fn random<R: Rng + ?Sized>(d: usize, rng: &mut R) -> Self {
        let rotations =
            (0..d * (d - 1) / 2).map(|_| [rng.random_range(0.0..=FRAC_PI_2), rng.random_range(0.0..TAU)]).collect();
        let phases = (0..d).map(|_| rng.random_range(0.0..TAU)).collect();
        Self { rotations, phases }
    }
}

/// Parameters of a product of local unitaries.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LocalUnitaryParams {
    pub subsystems: Vec<SubsystemAngles>,
}

#[derive(Clone, Copy, Debug, PartialEq)]
enum Coordinate {
    /// θ ∈ [0, π/2]
    Polar,
    /// λ or phase, periodic in 2π
    Azimuthal,
}

impl LocalUnitaryParams {
    pub fn identity(dims: &[usize]) -> Self {
        Self { subsystems: dims.iter().map(|&d| SubsystemAngles::identity(d)).collect() }
    }

    pub fn random<R: Rng + ?Sized>(dims: &[usize], rng: &mut R) -> Self {
        Self { subsystems: dims.iter().map(|&d| SubsystemAngles::random(d, rng)).collect() }
    }

    pub fn unitaries(&self, dims: &[usize]) -> Result<Vec<ComplexMatrix>> {
        if dims.len() != self.subsystems.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} parameter sets for {} subsystems",
                self.subsystems.len(),
                dims.len()
            )));
        }
        self.subsystems.iter().zip(dims).map(|(a, &d)| build_unitary(a, d)).collect()
    }

    fn to_flat(&self) -> Vec<f64> {
        self.subsystems
            .iter()
            .flat_map(|s| s.rotations.iter().flatten().chain(&s.phases).copied().collect::<Vec<_>>())
            .collect()
    }

    fn from_flat(dims: &[usize], flat: &[f64]) -> Self {
        let mut it = flat.iter().copied();
        let subsystems = dims
            .iter()
            .map(|&d| {
                let rotations =
                    (0..d * (d - 1) / 2).map(|_| [it.next().expect("length"), it.next().expect("length")]).collect();
                let phases = (0..d).map(|_| it.next().expect("length")).collect();
                SubsystemAngles { rotations, phases }
            })
            .collect();
        Self { subsystems }
    }

    fn coordinates(dims: &[usize]) -> Vec<Coordinate> {
        dims.iter()
            .flat_map(|&d| {
                let pairs = (0..d * (d - 1) / 2).flat_map(|_| [Coordinate::Polar, Coordinate::Azimuthal]);
                pairs.chain(std::iter::repeat_n(Coordinate::Azimuthal, d)).collect::<Vec<_>>()
            })
            .collect()
    }
}

/// d×d unitary from the composite two-level parametrization.
pub fn build_unitary(angles: &SubsystemAngles, d: usize) -> Result<ComplexMatrix> {
    if d < 2 || angles.rotations.len() != d * (d - 1) / 2 || angles.phases.len() != d {
        return Err(Error::ParameterOutOfRange(format!(
            "d={d} needs {} rotation pairs and {d} phases, got {} and {}",
            d * (d.max(1) - 1) / 2,
            angles.rotations.len(),
            angles.phases.len()
        )));
    }
    let mut u =
        ComplexMatrix::from_fn(
            d,
            d,
            |r, c| if r == c { C64::from_polar(1.0, angles.phases[r]) } else { C64::new(0.0, 0.0) },
        );
    let pairs = (0..d).flat_map(|a| (a + 1..d).map(move |b| (a, b)));
    for ((a, b), &[theta, lambda]) in pairs.zip(&angles.rotations) {
        let (s, c) = theta.sin_cos();
        let mut g = ComplexMatrix::identity(d);
        g[(a, a)] = C64::new(c, 0.0);
        g[(b, b)] = C64::new(c, 0.0);
        g[(a, b)] = C64::from_polar(s, lambda);
        g[(b, a)] = -C64::from_polar(s, -lambda);
        u = u.matmul(&g)?;
    }
    Ok(u)
}

/// Search budget and seed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OptimizerSettings {
    pub restarts: usize,
    pub iterations: usize,
    pub seed: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OptimizationReport {
    pub k: usize,
    pub best_value: f64,
    /// Criterion value at the unrotated base vector.
    pub base_value: f64,
    pub best_params: LocalUnitaryParams,
    pub best_phi1: ProductState,
    pub best_phi2: ProductState,
    /// Index of the restart that produced the optimum (0 = base point).
    pub best_restart: usize,
    pub restarts: usize,
    pub iterations: usize,
    pub seed: u64,
}

struct Objective<'a> {
    rho: &'a DensityMatrix,
    evaluator: CriterionEvaluator,
    base1: &'a ProductState,
    base2: &'a ProductState,
    dims: Vec<usize>,
}

impl Objective<'_> {
    fn rotated(&self, params: &LocalUnitaryParams) -> Result<(ProductState, ProductState)> {
        let us = params.unitaries(&self.dims)?;
        Ok((apply_local_unitaries(self.base1, &us)?, apply_local_unitaries(self.base2, &us)?))
    }

    fn value(&self, flat: &[f64]) -> Result<f64> {
        let (p1, p2) = self.rotated(&LocalUnitaryParams::from_flat(&self.dims, flat))?;
        Ok(self.evaluator.evaluate(self.rho, &p1, &p2, DEFAULT_TOLERANCE)?.value)
    }

    /// Cyclic coordinate ascent from `start`; returns the final point and value.
    fn climb(&self, start: Vec<f64>, iterations: usize) -> Result<(Vec<f64>, f64)> {
        let coords = LocalUnitaryParams::coordinates(&self.dims);
        let mut x = start;
        let mut fx = self.value(&x)?;
        let mut scale = 1.0;
        for _ in 0..iterations {
            let before = fx;
            let anchor = x.clone();
            for (j, kind) in coords.iter().enumerate() {
                let (half_width, lo_bound, hi_bound) = match kind {
                    Coordinate::Polar => ((FRAC_PI_2 / 2.0 * scale).max(MIN_STEP), 0.0, FRAC_PI_2),
                    Coordinate::Azimuthal => ((PI * scale).max(MIN_STEP), f64::NEG_INFINITY, f64::INFINITY),
                };
                let lo = (x[j] - half_width).max(lo_bound);
                let hi = (x[j] + half_width).min(hi_bound);
                let mut trial = x.clone();
                let wrap = |t: f64| match kind {
                    Coordinate::Polar => t,
                    Coordinate::Azimuthal => t.rem_euclid(TAU),
                };
                let (t, ft) = golden_section_max(
                    |t| {
                        trial[j] = wrap(t);
                        self.value(&trial)
                    },
                    lo,
                    hi,
                )?;
                if ft > fx {
                    x[j] = wrap(t);
                    fx = ft;
                }
            }
            if fx > before {
                // Pattern move along the net displacement of the sweep.
                let step: Vec<f64> = coords
                    .iter()
                    .zip(x.iter().zip(&anchor))
                    .map(|(kind, (a, b))| match kind {
                        Coordinate::Polar => a - b,
                        Coordinate::Azimuthal => (a - b + PI).rem_euclid(TAU) - PI,
                    })
                    .collect();
                let project = |t: f64| -> Vec<f64> {
                    coords
                        .iter()
                        .zip(anchor.iter().zip(&step))
                        .map(|(kind, (a, d))| match kind {
                            Coordinate::Polar => (a + t * d).clamp(0.0, FRAC_PI_2),
                            Coordinate::Azimuthal => (a + t * d).rem_euclid(TAU),
                        })
                        .collect()
                };
                let (t, ft) = golden_section_max(|t| self.value(&project(t)), 1.0, PATTERN_REACH)?;
                if ft > fx {
                    x = project(t);
                    fx = ft;
                }
            }
            // Keep the bracket wide while sweeps still pay off.
            if fx - before <= SWEEP_GAIN {
                scale *= STEP_SHRINK;
            }
        }
        Ok((x, fx))
    }
}

/// Maximize a one-dimensional function on [lo, hi] with a fixed number of
/// golden-section steps. Returns the best probed point.
fn golden_section_max<F>(mut f: F, mut lo: f64, mut hi: f64) -> Result<(f64, f64)>
where
    F: FnMut(f64) -> Result<f64>,
{
    let ratio = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = hi - ratio * (hi - lo);
    let mut d = lo + ratio * (hi - lo);
    let mut fc = f(c)?;
    let mut fd = f(d)?;
    for _ in 0..GOLDEN_EVALS {
        if fc > fd {
            hi = d;
            d = c;
            fd = fc;
            c = hi - ratio * (hi - lo);
            fc = f(c)?;
        } else {
            lo = c;
            c = d;
            fc = fd;
            d = lo + ratio * (hi - lo);
            fd = f(d)?;
        }
    }
    Ok(if fc >= fd { (c, fc) } else { (d, fd) })
}

/// Maximize the criterion value over local unitaries applied to the base
/// detection pair. Deterministic in (seed, restarts, iterations).
pub fn optimize_phi(
    rho: &DensityMatrix,
    k: usize,
    base_phi1: &ProductState,
    base_phi2: &ProductState,
    settings: OptimizerSettings,
) -> Result<OptimizationReport> {
    let OptimizerSettings { restarts, iterations, seed } = settings;
    if restarts == 0 || iterations == 0 {
        return Err(Error::ParameterOutOfRange("restarts and iterations must be at least 1".into()));
    }
    crate::criterion::check_inputs(rho, base_phi1, base_phi2, k)?;
    let dims = rho.dims().to_vec();
    let objective = Objective {
        rho,
        evaluator: CriterionEvaluator::new(dims.len(), k)?,
        base1: base_phi1,
        base2: base_phi2,
        dims: dims.clone(),
    };

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let starts: Vec<Vec<f64>> = (0..restarts)
        .map(|r| {
            if r == 0 {
                LocalUnitaryParams::identity(&dims).to_flat()
            } else {
                LocalUnitaryParams::random(&dims, &mut rng).to_flat()
            }
        })
        .collect();

    let climbs: Vec<(Vec<f64>, f64)> =
        starts.into_par_iter().map(|start| objective.climb(start, iterations)).collect::<Result<_>>()?;

    // Ties go to the lowest restart index.
    let (best_restart, (best_flat, _)) = climbs
        .iter()
        .enumerate()
        .fold(None::<(usize, &(Vec<f64>, f64))>, |best, (i, c)| match best {
            Some((_, b)) if b.1 >= c.1 => best,
            _ => Some((i, c)),
        })
        .expect("at least one restart");

    let best_params = LocalUnitaryParams::from_flat(&dims, best_flat);
    let (best_phi1, best_phi2) = objective.rotated(&best_params)?;
    let best_value = objective.evaluator.evaluate(rho, &best_phi1, &best_phi2, DEFAULT_TOLERANCE)?.value;
    let base_value = objective.evaluator.evaluate(rho, base_phi1, base_phi2, DEFAULT_TOLERANCE)?.value;
    Ok(OptimizationReport {
        k,
        best_value,
        base_value,
        best_params,
        best_phi1,
        best_phi2,
        best_restart,
        restarts,
        iterations,
        seed,
    })
}
