//! JSON file formats.
//!
//! Complex numbers are `[re, im]` pairs. Density matrices are stored as
//! `{"dims": [d1, …], "data": [[re, im], …]}` (row-major), product states as
//! `{"dims": [...], "factors": [[[re, im], …], …]}`. Floats are written in
//! shortest round-trip form and parsed exactly, so files round-trip bit for
//! bit.

use std::fs;
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::criterion::OffDiagonalPair;
use crate::error::{Error, Result};
use crate::linalg::{self, ComplexMatrix, C64};
use crate::states::{DensityMatrix, ProductState};

#[derive(Serialize, Deserialize)]
struct DensityMatrixFile {
    dims: Vec<usize>,
    data: Vec<C64>,
}

impl Serialize for DensityMatrix {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        DensityMatrixFile { dims: self.dims().to_vec(), data: self.matrix().data().to_vec() }.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for DensityMatrix {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let file = DensityMatrixFile::deserialize(deserializer)?;
        density_from_file(file, false).map_err(serde::de::Error::custom)
    }
}

fn density_from_file(file: DensityMatrixFile, check_psd: bool) -> Result<DensityMatrix> {
    let dim = linalg::total_dim(&file.dims);
    if file.data.len() != dim * dim {
        return Err(Error::Shape(format!(
            "dims {:?} need {} entries, file has {}",
            file.dims,
            dim * dim,
            file.data.len()
        )));
    }
    DensityMatrix::new(file.dims, ComplexMatrix::new(dim, dim, file.data)?, check_psd)
}

#[derive(Serialize, Deserialize)]
struct ProductStateFile {
    dims: Vec<usize>,
    factors: Vec<Vec<C64>>,
}

impl Serialize for ProductState {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        ProductStateFile { dims: self.dims(), factors: self.factors().to_vec() }.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for ProductState {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let file = ProductStateFile::deserialize(deserializer)?;
        product_from_file(file).map_err(serde::de::Error::custom)
    }
}

fn product_from_file(file: ProductStateFile) -> Result<ProductState> {
    let actual: Vec<usize> = file.factors.iter().map(Vec::len).collect();
    if actual != file.dims {
        return Err(Error::Shape(format!("dims {:?} disagree with factor lengths {:?}", file.dims, actual)));
    }
    ProductState::new(file.factors)
}

/// Matrix stored as a list of rows of `[re, im]` pairs.
pub(crate) mod matrix_rows {
    use super::*;

    pub fn serialize<S: serde::Serializer>(m: &ComplexMatrix, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        m.to_rows().serialize(serializer)
    }

    pub fn deserialize<'de, D: serde::Deserializer<'de>>(
        deserializer: D,
    ) -> std::result::Result<ComplexMatrix, D::Error> {
        let rows = Vec::<Vec<C64>>::deserialize(deserializer)?;
        ComplexMatrix::from_rows(rows).map_err(serde::de::Error::custom)
    }
}

fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path)?;
    Ok(serde_json::from_str(&text)?)
}

/// Load a density matrix; PSD is validated only if requested.
pub fn load_density_matrix(path: &Path, check_psd: bool) -> Result<DensityMatrix> {
    density_from_file(read_json(path)?, check_psd)
}

pub fn load_product_state(path: &Path) -> Result<ProductState> {
    product_from_file(read_json(path)?)
}

/// Load `{"phi1": {...}, "phi2": {...}}`.
pub fn load_phi_pair(path: &Path) -> Result<(ProductState, ProductState)> {
    let pair: OffDiagonalPair = read_json(path)?;
    Ok((pair.phi1, pair.phi2))
}

/// Pretty JSON with a trailing newline.
pub fn to_json_string<T: Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    fs::write(path, to_json_string(value)?)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::{random_density_matrix, random_product_state};
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn density_matrix_format() {
        let rho = DensityMatrix::maximally_mixed(vec![2]).unwrap();
        let s = serde_json::to_string(&rho).unwrap();
        assert_eq!(s, r#"{"dims":[2],"data":[[0.5,0.0],[0.0,0.0],[0.0,0.0],[0.5,0.0]]}"#);
    }

    #[test]
    fn product_state_format_and_errors() {
        let s = ProductState::basis(&[2, 3], &[1, 0]).unwrap();
        let json = serde_json::to_string(&s).unwrap();
        assert_eq!(json, r#"{"dims":[2,3],"factors":[[[0.0,0.0],[1.0,0.0]],[[1.0,0.0],[0.0,0.0],[0.0,0.0]]]}"#);
        let bad_dims = r#"{"dims":[3],"factors":[[[1.0,0.0],[0.0,0.0]]]}"#;
        assert!(serde_json::from_str::<ProductState>(bad_dims).is_err());
        let unnormalized = r#"{"dims":[2],"factors":[[[1.0,0.0],[1.0,0.0]]]}"#;
        assert!(serde_json::from_str::<ProductState>(unnormalized).is_err());
    }

    #[test]
    fn density_matrix_rejects_bad_files() {
        assert!(serde_json::from_str::<DensityMatrix>(r#"{"dims":[2],"data":[[1.0,0.0]]}"#).is_err());
        let non_herm = r#"{"dims":[2],"data":[[0.5,0.0],[0.3,0.0],[0.0,0.0],[0.5,0.0]]}"#;
        assert!(serde_json::from_str::<DensityMatrix>(non_herm).is_err());
    }

    proptest! {
        #[test]
        fn random_states_roundtrip_bitwise(seed in any::<u64>()) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let rho = random_density_matrix(&[2, 3], &mut rng).unwrap();
            let back: DensityMatrix = serde_json::from_str(&serde_json::to_string(&rho).unwrap()).unwrap();
            prop_assert_eq!(&back, &rho);
            let phi = random_product_state(&[3, 2, 2], &mut rng);
            let back: ProductState = serde_json::from_str(&to_json_string(&phi).unwrap()).unwrap();
            prop_assert_eq!(back, phi);
        }
    }
}
