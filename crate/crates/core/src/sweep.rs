//! (α, β) grid sweeps over the three-party GHZ/W and GHZ/ξ families.

use std::io::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::criterion::{evaluate_criterion, CriterionEvaluator};
use crate::error::{Error, Result};
use crate::optimizer::{optimize_phi, OptimizerSettings};
use crate::partition::check_block_count;
use crate::states::{family_state, ProductState, StateFamily, StateFamilyPoint};

#[derive(Clone, Debug)]
pub struct SweepConfig {
    pub family: StateFamily,
    /// Grid points per axis, including both endpoints.
    pub steps: usize,
    pub ks: Vec<usize>,
    pub phi1: ProductState,
    pub phi2: ProductState,
    pub optimize: Option<OptimizerSettings>,
    pub tolerance: f64,
}

/// One CSV row: `alpha,beta,k,value,violated`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepRecord {
    pub alpha: f64,
    pub beta: f64,
    pub k: usize,
    pub value: f64,
    pub violated: bool,
}

fn point(family: StateFamily, alpha: f64, beta: f64) -> Result<StateFamilyPoint> {
    match family {
        StateFamily::GhzWQubit => Ok(StateFamilyPoint::GhzWQubit { alpha, beta }),
        StateFamily::GhzXiQutrit => Ok(StateFamilyPoint::GhzXiQutrit { alpha, beta }),
        StateFamily::IsotropicGhz => {
            Err(Error::ParameterOutOfRange("isotropic-ghz is a one-parameter family; use thresholds".into()))
        }
    }
}

/// Evaluate every admissible cell (α + β ≤ 1) for every k. Rows come out
/// α-major, then β, then k in the order given.
pub fn run_sweep(config: &SweepConfig) -> Result<Vec<SweepRecord>> {
    if config.steps < 2 {
        return Err(Error::ParameterOutOfRange(format!("steps={} < 2", config.steps)));
    }
    if config.ks.is_empty() {
        return Err(Error::ParameterOutOfRange("empty k list".into()));
    }
    let probe = point(config.family, 0.0, 0.0)?;
    let dims = probe.dims();
    for &k in &config.ks {
        check_block_count(dims.len(), k)?;
    }
    if config.phi1.dims() != dims || config.phi2.dims() != dims {
        return Err(Error::DimensionMismatch(format!(
            "detection vectors must have dims {dims:?} for {}",
            config.family
        )));
    }
    let last = config.steps - 1;
    let cells: Vec<(usize, usize)> = (0..=last).flat_map(|i| (0..=last - i).map(move |j| (i, j))).collect();
    let evaluators: Vec<CriterionEvaluator> =
        config.ks.iter().map(|&k| CriterionEvaluator::new(dims.len(), k)).collect::<Result<_>>()?;

    let rows: Vec<Vec<SweepRecord>> = cells
        .par_iter()
        .map(|&(i, j)| {
            let alpha = i as f64 / last as f64;
            let beta = j as f64 / last as f64;
            let rho = family_state(&point(config.family, alpha, beta)?)?;
            evaluators
                .iter()
                .map(|ev| {
                    let result = match config.optimize {
                        Some(settings) => {
                            let report = optimize_phi(&rho, ev.k(), &config.phi1, &config.phi2, settings)?;
                            evaluate_criterion(&rho, &report.best_phi1, &report.best_phi2, ev.k(), config.tolerance)?
                        }
                        None => ev.evaluate(&rho, &config.phi1, &config.phi2, config.tolerance)?,
                    };
                    Ok(SweepRecord { alpha, beta, k: ev.k(), value: result.value, violated: result.violated })
                })
                .collect()
        })
        .collect::<Result<_>>()?;
    Ok(rows.into_iter().flatten().collect())
}

pub fn write_csv<W: Write>(records: &[SweepRecord], out: W) -> Result<()> {
    let mut writer = csv::Writer::from_writer(out);
    for r in records {
        writer.serialize(r).map_err(|e| Error::Io(std::io::Error::other(e)))?;
    }
    writer.flush()?;
    Ok(())
}

/// Grid line along which to look for sign changes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Axis {
    /// Vary α with β = 0.
    Alpha,
    /// Vary β with α = 0.
    Beta,
}

/// Positions where `value` changes sign from ≤ 0 to > 0 along an axis,
/// located by linear interpolation between neighbouring grid points.
pub fn zero_crossings(records: &[SweepRecord], k: usize, axis: Axis) -> Vec<f64> {
    let mut line: Vec<(f64, f64)> = records
        .iter()
        .filter(|r| r.k == k)
        .filter_map(|r| match axis {
            Axis::Alpha if r.beta == 0.0 => Some((r.alpha, r.value)),
            Axis::Beta if r.alpha == 0.0 => Some((r.beta, r.value)),
            _ => None,
        })
        .collect();
    line.sort_by(|a, b| a.0.total_cmp(&b.0));
    line.windows(2)
        .filter(|w| w[0].1 <= 0.0 && w[1].1 > 0.0)
        .map(|w| {
            let ((x0, y0), (x1, y1)) = (w[0], w[1]);
            x0 + (x1 - x0) * (-y0) / (y1 - y0)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn config(family: StateFamily, steps: usize, ks: Vec<usize>) -> SweepConfig {
        let dims = point(family, 0.0, 0.0).unwrap().dims();
        let (phi1, phi2) = ProductState::computational_pair(&dims).unwrap();
        SweepConfig { family, steps, ks, phi1, phi2, optimize: None, tolerance: 1e-9 }
    }

    #[test]
    fn row_count_and_order() {
        let records = run_sweep(&config(StateFamily::GhzWQubit, 4, vec![2, 3])).unwrap();
        // 4+3+2+1 admissible cells, two k values each
        assert_eq!(records.len(), 20);
        assert_eq!((records[0].alpha, records[0].beta, records[0].k), (0.0, 0.0, 2));
        assert_eq!((records[1].alpha, records[1].beta, records[1].k), (0.0, 0.0, 3));
        assert_eq!(records[2].beta, 1.0 / 3.0);
        assert!(records.iter().all(|r| r.alpha + r.beta <= 1.0 + 1e-12));
    }

    #[test]
    fn crossings_on_ghz_axis() {
        let records = run_sweep(&config(StateFamily::GhzWQubit, 36, vec![2, 3])).unwrap();
        let k2 = zero_crossings(&records, 2, Axis::Alpha);
        let k3 = zero_crossings(&records, 3, Axis::Alpha);
        assert_eq!(k2.len(), 1);
        assert_eq!(k3.len(), 1);
        assert!((k2[0] - 3.0 / 7.0).abs() < 1e-6);
        assert!((k3[0] - 0.2).abs() < 1e-6);
        assert!(zero_crossings(&records, 2, Axis::Beta).is_empty());
    }

    #[test]
    fn qutrit_origin_is_negative() {
        let records = run_sweep(&config(StateFamily::GhzXiQutrit, 3, vec![2, 3])).unwrap();
        assert!(records.iter().filter(|r| r.alpha == 0.0 && r.beta == 0.0).all(|r| r.value < 0.0));
    }

    #[test]
    fn csv_header() {
        let records = vec![SweepRecord { alpha: 0.5, beta: 0.25, k: 2, value: -0.125, violated: false }];
        let mut buf = Vec::new();
        write_csv(&records, &mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "alpha,beta,k,value,violated\n0.5,0.25,2,-0.125,false\n");
    }

    #[test]
    fn bad_configs() {
        assert!(run_sweep(&config(StateFamily::GhzWQubit, 1, vec![2])).is_err());
        assert!(run_sweep(&config(StateFamily::GhzWQubit, 3, vec![4])).is_err());
        assert!(run_sweep(&config(StateFamily::GhzWQubit, 3, vec![])).is_err());
    }
}
