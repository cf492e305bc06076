//! Random states and unitaries for randomized testing.

use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::Result;
use crate::linalg::{self, ComplexMatrix, C64, ZERO};
use crate::partition::Partition;
use crate::states::{DensityMatrix, ProductState};

fn gaussian<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

/// Haar-distributed unit vector of length `dim`.
pub fn random_unit_vector<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Vec<C64> {
    loop {
        let v: Vec<C64> = (0..dim).map(|_| gaussian(rng)).collect();
        let n = linalg::norm(&v);
        if n > 1e-6 {
            return v.into_iter().map(|z| z / n).collect();
        }
    }
}

pub fn random_product_state<R: Rng + ?Sized>(dims: &[usize], rng: &mut R) -> ProductState {
    ProductState::from_factors_unchecked(dims.iter().map(|&d| random_unit_vector(d, rng)).collect())
}

/// Full-rank random state A A† / Tr(A A†) with Gaussian A.
pub fn random_density_matrix<R: Rng + ?Sized>(dims: &[usize], rng: &mut R) -> Result<DensityMatrix> {
    let dim = linalg::total_dim(dims);
    let a = ComplexMatrix::from_fn(dim, dim, |_, _| gaussian(rng));
    let aa = a.matmul(&a.adjoint())?;
    let tr = aa.trace().re;
    DensityMatrix::new(dims.to_vec(), hermitize(&aa.scale(C64::new(1.0 / tr, 0.0))), false)
}

/// Unitary from Gram–Schmidt orthonormalization of a Gaussian matrix.
pub fn random_unitary<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> ComplexMatrix {
    let mut cols: Vec<Vec<C64>> = Vec::with_capacity(dim);
    while cols.len() < dim {
        let mut v: Vec<C64> = (0..dim).map(|_| gaussian(rng)).collect();
        for _ in 0..2 {
            for q in &cols {
                let overlap = linalg::inner(q, &v);
                v.iter_mut().zip(q).for_each(|(x, y)| *x -= overlap * y);
            }
        }
        let n = linalg::norm(&v);
        if n > 1e-6 {
            cols.push(v.into_iter().map(|z| z / n).collect());
        }
    }
    ComplexMatrix::from_fn(dim, dim, |r, c| cols[c][r])
}

/// Partition of `n` parties into `k` blocks, drawn by random labels with
/// every block forced nonempty.
pub fn random_partition<R: Rng + ?Sized>(n: usize, k: usize, rng: &mut R) -> Partition {
    loop {
        let labels: Vec<usize> = (0..n).map(|_| rng.random_range(0..k)).collect();
        if (0..k).all(|b| labels.contains(&b)) {
            return Partition::from_labels(&labels).expect("labels cover 0..k");
        }
    }
}

/// Pure state that factorizes over the blocks of `partition`, with a random
/// (generally entangled) state inside each block.
pub fn random_block_product_vector<R: Rng + ?Sized>(dims: &[usize], partition: &Partition, rng: &mut R) -> Vec<C64> {
    let blocks: Vec<(&[usize], Vec<usize>, Vec<C64>)> = partition
        .blocks()
        .iter()
        .map(|b| {
            let bdims: Vec<usize> = b.iter().map(|&j| dims[j]).collect();
            let psi = random_unit_vector(linalg::total_dim(&bdims), rng);
            (b.as_slice(), bdims, psi)
        })
        .collect();
    let dim = linalg::total_dim(dims);
    let mut out = vec![ZERO; dim];
    for (i, slot) in out.iter_mut().enumerate() {
        let d = linalg::digits(i, dims);
        *slot = blocks.iter().fold(C64::new(1.0, 0.0), |acc, (block, bdims, psi)| {
            let local: Vec<usize> = block.iter().map(|&j| d[j]).collect();
            acc * psi[linalg::index_of(&local, bdims)]
        });
    }
    out
}

/// Random k-separable mixed state: a convex mixture of `terms` pure states,
/// each separable under its own randomly drawn k-block partition.
pub fn random_k_separable_state<R: Rng + ?Sized>(
    dims: &[usize],
    k: usize,
    terms: usize,
    rng: &mut R,
) -> Result<DensityMatrix> {
    let dim = linalg::total_dim(dims);
    let weights: Vec<f64> = (0..terms).map(|_| rng.random::<f64>() + 1e-3).collect();
    let total: f64 = weights.iter().sum();
    let mut m = ComplexMatrix::zeros(dim, dim);
    for w in weights {
        let partition = random_partition(dims.len(), k, rng);
        let psi = random_block_product_vector(dims, &partition, rng);
        m = m.add_scaled(&ComplexMatrix::outer(&psi, &psi), C64::new(w / total, 0.0))?;
    }
    DensityMatrix::new(dims.to_vec(), hermitize(&m), false)
}

/// (A + A†)/2, removing roundoff asymmetry.
fn hermitize(m: &ComplexMatrix) -> ComplexMatrix {
    ComplexMatrix::from_fn(m.rows(), m.cols(), |r, c| (m[(r, c)] + m[(c, r)].conj()) * 0.5)
}
