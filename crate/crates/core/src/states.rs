//! Density matrices, product states and the state families used for
//! benchmarking the criterion.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, ComplexMatrix, C64, ONE, ZERO};

pub const HERMITICITY_TOL: f64 = 1e-9;
pub const TRACE_TOL: f64 = 1e-9;
pub const PSD_TOL: f64 = 1e-8;
pub const NORM_TOL: f64 = 1e-12;
pub const UNITARY_TOL: f64 = 1e-9;

/// Slack allowed on family parameter bounds (grid points such as α+β=1 are
/// computed in floating point).
const PARAM_SLACK: f64 = 1e-12;

const POWER_MAX_ITERS: usize = 20_000;

/// A validated multipartite density matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    dims: Vec<usize>,
    matrix: ComplexMatrix,
}

impl DensityMatrix {
    /// Validate and wrap `matrix`. Hermiticity and trace are always checked,
    /// positivity only when `check_psd` is set.
    pub fn new(dims: Vec<usize>, matrix: ComplexMatrix, check_psd: bool) -> Result<Self> {
        check_dims(&dims)?;
        let dim = linalg::total_dim(&dims);
        if !matrix.is_square() || matrix.rows() != dim {
            return Err(Error::DimensionMismatch(format!(
                "dims {:?} need a {}x{} matrix, got {}x{}",
                dims,
                dim,
                dim,
                matrix.rows(),
                matrix.cols()
            )));
        }
        let herm = matrix.hermiticity_deviation();
        if herm > HERMITICITY_TOL || !herm.is_finite() {
            return Err(Error::NotHermitian(herm));
        }
        let trace = matrix.trace();
        if (trace - ONE).norm() > TRACE_TOL {
            return Err(Error::BadTrace(trace.re));
        }
        let rho = Self { dims, matrix };
        if check_psd {
            let lowest = rho.min_eigenvalue();
            if lowest < -PSD_TOL {
                return Err(Error::NotPositive(lowest));
            }
        }
        Ok(rho)
    }

    /// |ψ⟩⟨ψ| for a normalized vector.
    pub fn from_pure(dims: Vec<usize>, psi: &[C64]) -> Result<Self> {
        Self::new(dims, ComplexMatrix::outer(psi, psi), false)
    }

    pub fn maximally_mixed(dims: Vec<usize>) -> Result<Self> {
        check_dims(&dims)?;
        let dim = linalg::total_dim(&dims);
        let m = ComplexMatrix::identity(dim).scale(C64::new(1.0 / dim as f64, 0.0));
        Self::new(dims, m, false)
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn parties(&self) -> usize {
        self.dims.len()
    }

    /// Total dimension D = Π d_j.
    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    /// ⟨bra|ρ|ket⟩ for full D-dimensional vectors.
    pub fn element(&self, bra: &[C64], ket: &[C64]) -> C64 {
        linalg::inner(bra, &self.matrix.matvec(ket))
    }

    /// λ·self + (1−λ)·other.
    pub fn mix(&self, other: &Self, lambda: f64) -> Result<Self> {
        if self.dims != other.dims {
            return Err(Error::DimensionMismatch(format!("cannot mix dims {:?} with {:?}", self.dims, other.dims)));
        }
        let m = self.matrix.scale(C64::new(lambda, 0.0)).add_scaled(&other.matrix, C64::new(1.0 - lambda, 0.0))?;
        Self::new(self.dims.clone(), m, false)
    }

    /// U ρ U† with U = U_1 ⊗ … ⊗ U_n.
    pub fn conjugate_by(&self, unitaries: &[ComplexMatrix]) -> Result<Self> {
        check_unitaries(&self.dims, unitaries)?;
        let u = unitaries.iter().skip(1).fold(unitaries[0].clone(), |acc, next| acc.kron(next));
        let m = u.matmul(&self.matrix)?.matmul(&u.adjoint())?;
        Self::new(self.dims.clone(), m, false)
    }

    /// Reduced state on the subsystems in `keep` (sorted, distinct).
    pub fn reduce_to(&self, keep: &[usize]) -> Result<Self> {
        let n = self.parties();
        if keep.is_empty() || keep.windows(2).any(|w| w[0] >= w[1]) || keep.iter().any(|&j| j >= n) {
            return Err(Error::ParameterOutOfRange(format!("invalid subsystem list {keep:?}")));
        }
        let kept_dims: Vec<usize> = keep.iter().map(|&j| self.dims[j]).collect();
        let traced: Vec<usize> = (0..n).filter(|j| !keep.contains(j)).collect();
        let traced_dims: Vec<usize> = traced.iter().map(|&j| self.dims[j]).collect();
        let kept_dim = linalg::total_dim(&kept_dims);
        let traced_dim = linalg::total_dim(&traced_dims);
        let full_index = |kept: &[usize], rest: &[usize]| {
            let mut d = vec![0; n];
            for (&j, &x) in keep.iter().zip(kept) {
                d[j] = x;
            }
            for (&j, &x) in traced.iter().zip(rest) {
                d[j] = x;
            }
            linalg::index_of(&d, &self.dims)
        };
        let mut out = ComplexMatrix::zeros(kept_dim, kept_dim);
        for r in 0..kept_dim {
            let rd = linalg::digits(r, &kept_dims);
            for c in 0..kept_dim {
                let cd = linalg::digits(c, &kept_dims);
                let mut acc = ZERO;
                for t in 0..traced_dim {
                    let td = linalg::digits(t, &traced_dims);
                    acc += self.matrix[(full_index(&rd, &td), full_index(&cd, &td))];
                }
                out[(r, c)] = acc;
            }
        }
        Self::new(kept_dims, out, false)
    }

    /// Smallest eigenvalue estimated by power iteration on c𝟙 − ρ, where c is
    /// the Gershgorin bound on the spectrum of ρ.
    pub fn min_eigenvalue(&self) -> f64 {
        let dim = self.dim();
        let shift = (0..dim).map(|r| self.matrix.row(r).iter().map(|z| z.norm()).sum::<f64>()).fold(0.0, f64::max);
        if shift == 0.0 {
            return 0.0;
        }
        // Fixed, irregular start vector so no eigenvector is missed by symmetry.
        let mut v: Vec<C64> = (0..dim)
            .map(|i| {
                let x = i as f64 + 1.0;
                C64::new((x * 0.7548776662).fract() + 0.1, (x * 0.5698402910).fract() - 0.5)
            })
            .collect();
        let n0 = linalg::norm(&v);
        v.iter_mut().for_each(|z| *z /= n0);
        let mut estimate = 0.0;
        for _ in 0..POWER_MAX_ITERS {
            let rv = self.matrix.matvec(&v);
            let w: Vec<C64> = v.iter().zip(&rv).map(|(x, y)| x * shift - y).collect();
            let next = linalg::inner(&v, &w).re;
            let nw = linalg::norm(&w);
            if nw == 0.0 {
                // v lies in the kernel of c𝟙 − ρ: every eigenvalue equals c.
                return shift;
            }
            v = w.into_iter().map(|z| z / nw).collect();
            let converged = (next - estimate).abs() <= 1e-15 * shift.max(1.0);
            estimate = next;
            if converged {
                break;
            }
        }
        shift - estimate
    }
}

fn check_dims(dims: &[usize]) -> Result<()> {
    if dims.is_empty() {
        return Err(Error::Shape("empty dimension list".into()));
    }
    if let Some(&d) = dims.iter().find(|&&d| d < 2) {
        return Err(Error::Shape(format!("subsystem dimension {d} < 2")));
    }
    Ok(())
}

fn check_unitaries(dims: &[usize], unitaries: &[ComplexMatrix]) -> Result<()> {
    if unitaries.len() != dims.len() {
        return Err(Error::DimensionMismatch(format!("{} unitaries for {} subsystems", unitaries.len(), dims.len())));
    }
    for (index, (u, &d)) in unitaries.iter().zip(dims).enumerate() {
        if u.rows() != d || u.cols() != d {
            return Err(Error::DimensionMismatch(format!(
                "unitary {index} is {}x{}, subsystem dimension {d}",
                u.rows(),
                u.cols()
            )));
        }
        let deviation = u.unitarity_deviation();
        if deviation > UNITARY_TOL || !deviation.is_finite() {
            return Err(Error::NotUnitary { index, deviation });
        }
    }
    Ok(())
}

/// A fully separable pure state, stored factor by factor.
#[derive(Clone, Debug, PartialEq)]
pub struct ProductState {
    factors: Vec<Vec<C64>>,
}

impl ProductState {
    pub fn new(factors: Vec<Vec<C64>>) -> Result<Self> {
        if factors.is_empty() {
            return Err(Error::Shape("product state without factors".into()));
        }
        for (index, f) in factors.iter().enumerate() {
            if f.len() < 2 {
                return Err(Error::Shape(format!("factor {index} has dimension {} < 2", f.len())));
            }
            let norm = linalg::norm(f);
            if (norm - 1.0).abs() > NORM_TOL || !norm.is_finite() {
                return Err(Error::NotNormalized { index, norm });
            }
        }
        Ok(Self { factors })
    }

    /// Computational basis string |x_1 x_2 … x_n⟩.
    pub fn basis(dims: &[usize], levels: &[usize]) -> Result<Self> {
        if dims.len() != levels.len() {
            return Err(Error::DimensionMismatch(format!("{} levels for {} subsystems", levels.len(), dims.len())));
        }
        let factors = dims
            .iter()
            .zip(levels)
            .map(|(&d, &x)| {
                if x >= d {
                    return Err(Error::ParameterOutOfRange(format!("level {x} >= dimension {d}")));
                }
                let mut f = vec![ZERO; d];
                f[x] = ONE;
                Ok(f)
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(factors)
    }

    /// The default detection pair |0…0⟩, |1…1⟩.
    pub fn computational_pair(dims: &[usize]) -> Result<(Self, Self)> {
        Ok((Self::basis(dims, &vec![0; dims.len()])?, Self::basis(dims, &vec![1; dims.len()])?))
    }

    pub fn factors(&self) -> &[Vec<C64>] {
        &self.factors
    }

    pub fn parties(&self) -> usize {
        self.factors.len()
    }

    pub fn dims(&self) -> Vec<usize> {
        self.factors.iter().map(Vec::len).collect()
    }

    /// Full D-dimensional vector |x_1⟩ ⊗ … ⊗ |x_n⟩.
    pub fn to_vector(&self) -> Vec<C64> {
        self.factors.iter().skip(1).fold(self.factors[0].clone(), |acc, f| linalg::kron_vec(&acc, f))
    }

    /// Factor-wise equality within `tol`, including phases.
    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        self.dims() == other.dims()
            && self.factors.iter().zip(&other.factors).all(|(a, b)| a.iter().zip(b).all(|(x, y)| (x - y).norm() <= tol))
    }

    /// Build a state from factors that are known to be normalized up to roundoff.
    pub(crate) fn from_factors_unchecked(factors: Vec<Vec<C64>>) -> Self {
        Self { factors }
    }
}

/// Replace every factor x_j by U_j x_j.
pub fn apply_local_unitaries(state: &ProductState, unitaries: &[ComplexMatrix]) -> Result<ProductState> {
    check_unitaries(&state.dims(), unitaries)?;
    let factors = state
        .factors
        .iter()
        .zip(unitaries)
        .map(|(f, u)| {
            let mut g = u.matvec(f);
            // Undo the norm drift allowed by the unitarity tolerance.
            let n = linalg::norm(&g);
            g.iter_mut().for_each(|z| *z /= n);
            g
        })
        .collect();
    ProductState::new(factors)
}

fn require(cond: bool, what: impl FnOnce() -> String) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::ParameterOutOfRange(what()))
    }
}

/// Normalized GHZ vector (Σ_i |i⟩^{⊗n}) / √d on n qudits of dimension d.
pub fn ghz_state(n: usize, d: usize) -> Result<Vec<C64>> {
    require(n >= 2 && d >= 2, || format!("GHZ state needs n >= 2 and d >= 2 (got n={n}, d={d})"))?;
    let dim = d.pow(n as u32);
    let stride: usize = (0..n).map(|e| d.pow(e as u32)).sum();
    let amp = C64::new(1.0 / (d as f64).sqrt(), 0.0);
    let mut v = vec![ZERO; dim];
    for i in 0..d {
        v[i * stride] = amp;
    }
    Ok(v)
}

/// Equal superposition of all n-qubit strings of Hamming weight one.
pub fn w_state(n: usize) -> Result<Vec<C64>> {
    require(n >= 2, || format!("W state needs n >= 2 (got {n})"))?;
    let amp = C64::new(1.0 / (n as f64).sqrt(), 0.0);
    let mut v = vec![ZERO; 1 << n];
    for bit in 0..n {
        v[1 << bit] = amp;
    }
    Ok(v)
}

/// Three-qutrit state: equal superposition of all permutations of |012⟩.
pub fn xi_state() -> Vec<C64> {
    const PERMS: [[usize; 3]; 6] = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
    let amp = C64::new(1.0 / 6f64.sqrt(), 0.0);
    let mut v = vec![ZERO; 27];
    for p in PERMS {
        v[linalg::index_of(&p, &[3, 3, 3])] = amp;
    }
    v
}

/// Named state families.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum StateFamily {
    GhzWQubit,
    GhzXiQutrit,
    IsotropicGhz,
}

impl StateFamily {
    pub fn id(self) -> &'static str {
        match self {
            StateFamily::GhzWQubit => "ghz-w-qubit",
            StateFamily::GhzXiQutrit => "ghz-xi-qutrit",
            StateFamily::IsotropicGhz => "isotropic-ghz",
        }
    }
}

impl fmt::Display for StateFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for StateFamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "ghz-w-qubit" => Ok(StateFamily::GhzWQubit),
            "ghz-xi-qutrit" => Ok(StateFamily::GhzXiQutrit),
            "isotropic-ghz" => Ok(StateFamily::IsotropicGhz),
            other => Err(Error::ParameterOutOfRange(format!("unknown state family '{other}'"))),
        }
    }
}

/// One member of a state family.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum StateFamilyPoint {
    /// α |GHZ⟩⟨GHZ| + β |W⟩⟨W| + (1−α−β) 𝟙/8 on three qubits.
    GhzWQubit { alpha: f64, beta: f64 },
    /// α |GHZ₃⟩⟨GHZ₃| + β |ξ⟩⟨ξ| + (1−α−β) 𝟙/27 on three qutrits.
    GhzXiQutrit { alpha: f64, beta: f64 },
    /// p |GHZ⟩⟨GHZ| + (1−p) 𝟙/dⁿ on n qudits.
    IsotropicGhz { n: usize, d: usize, p: f64 },
}

impl StateFamilyPoint {
    pub fn family(&self) -> StateFamily {
        match self {
            StateFamilyPoint::GhzWQubit { .. } => StateFamily::GhzWQubit,
            StateFamilyPoint::GhzXiQutrit { .. } => StateFamily::GhzXiQutrit,
            StateFamilyPoint::IsotropicGhz { .. } => StateFamily::IsotropicGhz,
        }
    }

    pub fn dims(&self) -> Vec<usize> {
        match *self {
            StateFamilyPoint::GhzWQubit { .. } => vec![2; 3],
            StateFamilyPoint::GhzXiQutrit { .. } => vec![3; 3],
            StateFamilyPoint::IsotropicGhz { n, d, .. } => vec![d; n],
        }
    }
}

fn check_weights(alpha: f64, beta: f64) -> Result<()> {
    require(alpha >= 0.0 && beta >= 0.0 && alpha + beta <= 1.0 + PARAM_SLACK, || {
        format!("mixing weights need alpha, beta >= 0 and alpha + beta <= 1 (got {alpha}, {beta})")
    })
}

/// Convex mixture α|a⟩⟨a| + β|b⟩⟨b| + (1−α−β)𝟙/D.
fn mixture(dims: Vec<usize>, parts: &[(f64, &[C64])]) -> Result<DensityMatrix> {
    let dim = linalg::total_dim(&dims);
    let noise = 1.0 - parts.iter().map(|(w, _)| w).sum::<f64>();
    let mut m = ComplexMatrix::identity(dim).scale(C64::new(noise / dim as f64, 0.0));
    for &(w, psi) in parts {
        m = m.add_scaled(&ComplexMatrix::outer(psi, psi), C64::new(w, 0.0))?;
    }
    DensityMatrix::new(dims, m, false)
}

/// Density matrix of a family member.
pub fn family_state(point: &StateFamilyPoint) -> Result<DensityMatrix> {
    match *point {
        StateFamilyPoint::GhzWQubit { alpha, beta } => {
            check_weights(alpha, beta)?;
            mixture(point.dims(), &[(alpha, &ghz_state(3, 2)?), (beta, &w_state(3)?)])
        }
        StateFamilyPoint::GhzXiQutrit { alpha, beta } => {
            check_weights(alpha, beta)?;
            mixture(point.dims(), &[(alpha, &ghz_state(3, 3)?), (beta, &xi_state())])
        }
        StateFamilyPoint::IsotropicGhz { n, d, p } => {
            require((0.0..=1.0).contains(&p), || format!("mixing probability p={p} outside [0, 1]"))?;
            mixture(point.dims(), &[(p, &ghz_state(n, d)?)])
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    fn mat(rows: &[&[f64]]) -> ComplexMatrix {
        ComplexMatrix::from_rows(rows.iter().map(|r| r.iter().map(|&x| c(x)).collect()).collect()).unwrap()
    }

    #[test]
    fn pure_projector_is_valid() {
        let rho = DensityMatrix::new(vec![2], mat(&[&[1.0, 0.0], &[0.0, 0.0]]), true).unwrap();
        assert_eq!(rho.dim(), 2);
    }

    #[test]
    fn psd_violation_detected_only_when_flagged() {
        let m = mat(&[&[0.5, 0.6], &[0.6, 0.5]]);
        assert!(DensityMatrix::new(vec![2], m.clone(), false).is_ok());
        match DensityMatrix::new(vec![2], m, true) {
            Err(Error::NotPositive(lowest)) => assert!((lowest + 0.1).abs() < 1e-9),
            other => panic!("expected PSD error, got {other:?}"),
        }
    }

    #[test]
    fn maximally_mixed_two_qubits() {
        let rho = DensityMatrix::maximally_mixed(vec![2, 2]).unwrap();
        assert!((rho.min_eigenvalue() - 0.25).abs() < 1e-12);
        let m = ComplexMatrix::identity(4).scale(c(0.25));
        assert!(DensityMatrix::new(vec![2, 2], m, true).is_ok());
    }

    #[test]
    fn validation_errors() {
        assert!(matches!(
            DensityMatrix::new(vec![2, 2], ComplexMatrix::identity(2), false),
            Err(Error::DimensionMismatch(_))
        ));
        assert!(matches!(
            DensityMatrix::new(vec![2], mat(&[&[0.5, 0.1], &[0.0, 0.5]]), false),
            Err(Error::NotHermitian(_))
        ));
        assert!(matches!(
            DensityMatrix::new(vec![2], mat(&[&[0.5, 0.0], &[0.0, 0.6]]), false),
            Err(Error::BadTrace(_))
        ));
        assert!(DensityMatrix::new(vec![1, 2], ComplexMatrix::identity(2), false).is_err());
    }

    #[test]
    fn ghz_amplitudes() {
        let g = ghz_state(3, 2).unwrap();
        let h = 1.0 / 2f64.sqrt();
        assert_eq!(g[0], c(h));
        assert_eq!(g[7], c(h));
        assert_eq!(g.iter().filter(|z| z.norm() > 0.0).count(), 2);

        let g3 = ghz_state(3, 3).unwrap();
        for i in 0..3 {
            assert!((g3[i * 13] - c(1.0 / 3f64.sqrt())).norm() < 1e-15);
        }
        assert!((linalg::norm(&g3) - 1.0).abs() < 1e-12);

        let bell = ghz_state(2, 2).unwrap();
        assert_eq!(bell, vec![c(h), ZERO, ZERO, c(h)]);
        assert!(ghz_state(1, 2).is_err());
    }

    #[test]
    fn w_amplitudes() {
        let w = w_state(3).unwrap();
        let a = c(1.0 / 3f64.sqrt());
        // |001⟩, |010⟩, |100⟩
        assert_eq!((w[1], w[2], w[4]), (a, a, a));
        assert_eq!(w.iter().filter(|z| z.norm() > 0.0).count(), 3);

        let w2 = w_state(2).unwrap();
        let h = c(1.0 / 2f64.sqrt());
        assert_eq!(w2, vec![ZERO, h, h, ZERO]);

        let w4 = w_state(4).unwrap();
        assert!((linalg::norm(&w4) - 1.0).abs() < 1e-12);
        for (i, z) in w4.iter().enumerate() {
            assert_eq!(z.norm() > 0.0, (i as u32).count_ones() == 1);
        }
    }

    #[test]
    fn xi_amplitudes() {
        let xi = xi_state();
        assert!((xi[5] - c(1.0 / 6f64.sqrt())).norm() < 1e-15);
        assert_eq!(xi[0], ZERO);
        assert!((linalg::norm(&xi) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn family_endpoints() {
        let pure = family_state(&StateFamilyPoint::GhzWQubit { alpha: 1.0, beta: 0.0 }).unwrap();
        let ghz = ghz_state(3, 2).unwrap();
        assert!(pure.matrix().max_abs_diff(&ComplexMatrix::outer(&ghz, &ghz)) < 1e-15);

        let mixed = family_state(&StateFamilyPoint::GhzWQubit { alpha: 0.0, beta: 0.0 }).unwrap();
        assert!(mixed.matrix().max_abs_diff(&ComplexMatrix::identity(8).scale(c(0.125))) < 1e-15);

        let iso = family_state(&StateFamilyPoint::IsotropicGhz { n: 3, d: 2, p: 0.5 }).unwrap();
        assert!((iso.matrix()[(0, 0)] - c(0.3125)).norm() < 1e-15);
    }

    #[test]
    fn family_parameter_errors() {
        assert!(family_state(&StateFamilyPoint::GhzWQubit { alpha: 0.7, beta: 0.4 }).is_err());
        assert!(family_state(&StateFamilyPoint::GhzXiQutrit { alpha: -0.1, beta: 0.0 }).is_err());
        assert!(family_state(&StateFamilyPoint::IsotropicGhz { n: 3, d: 2, p: 1.5 }).is_err());
        assert_eq!("ghz-xi-qutrit".parse::<StateFamily>().unwrap(), StateFamily::GhzXiQutrit);
        assert!("bogus".parse::<StateFamily>().is_err());
    }

    #[test]
    fn local_unitaries() {
        let zero = ProductState::basis(&[2, 2, 2], &[0, 0, 0]).unwrap();
        let id = vec![ComplexMatrix::identity(2); 3];
        assert_eq!(apply_local_unitaries(&zero, &id).unwrap(), zero);

        let x = mat(&[&[0.0, 1.0], &[1.0, 0.0]]);
        let flipped =
            apply_local_unitaries(&zero, &[x, ComplexMatrix::identity(2), ComplexMatrix::identity(2)]).unwrap();
        assert_eq!(flipped, ProductState::basis(&[2, 2, 2], &[1, 0, 0]).unwrap());

        let not_unitary = mat(&[&[1.0, 1.0], &[0.0, 1.0]]);
        assert!(matches!(
            apply_local_unitaries(&zero, &[not_unitary, ComplexMatrix::identity(2), ComplexMatrix::identity(2)]),
            Err(Error::NotUnitary { index: 0, .. })
        ));
        assert!(apply_local_unitaries(&zero, &id[..2]).is_err());
    }

    #[test]
    fn reduce_bell_pair() {
        let bell = DensityMatrix::from_pure(vec![2, 2], &ghz_state(2, 2).unwrap()).unwrap();
        let single = bell.reduce_to(&[1]).unwrap();
        assert!(single.matrix().max_abs_diff(&ComplexMatrix::identity(2).scale(c(0.5))) < 1e-15);
    }

    #[test]
    fn product_state_validation() {
        assert!(matches!(ProductState::new(vec![vec![c(1.0), c(1.0)]]), Err(Error::NotNormalized { index: 0, .. })));
        assert!(ProductState::new(vec![vec![c(1.0)]]).is_err());
        let s = ProductState::basis(&[2, 3], &[1, 2]).unwrap();
        let v = s.to_vector();
        assert_eq!(v[5], ONE);
        assert!(ProductState::basis(&[2, 3], &[2, 0]).is_err());
    }
}
