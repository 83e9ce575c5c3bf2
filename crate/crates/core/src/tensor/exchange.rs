//! JSON exchange format: `{"dims": [d_1, ..], "entries": [[re, im], ..]}`, row-major.
//!
//! A density matrix carries its site dimensions and `D²` entries. A single
//! site factor is written with `dims: [d]` and `d²` entries; operator factor
//! files hold a JSON array of such records, one per site (or one per ω).
//! A pure state carries `D` entries.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{ComplexMatrix, DensityMatrix, PureState, SiteDims};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatrixRecord {
    pub dims: Vec<usize>,
    pub entries: Vec<[f64; 2]>,
}

impl MatrixRecord {
    fn complex_entries(&self) -> Vec<Complex64> {
        self.entries.iter().map(|&[re, im]| Complex64::new(re, im)).collect()
    }

    fn side(&self) -> Result<usize> {
        self.dims
            .iter()
            .try_fold(1usize, |a, &d| a.checked_mul(d))
            .filter(|&d| d > 0)
            .ok_or_else(|| Error::InvalidDims(format!("{:?}", self.dims)))
    }

    pub fn from_matrix(dims: Vec<usize>, m: &ComplexMatrix) -> Self {
        MatrixRecord { dims, entries: m.entries().iter().map(|z| [z.re, z.im]).collect() }
    }

    /// Square matrix of side `Π dims`.
    pub fn to_matrix(&self) -> Result<ComplexMatrix> {
        let side = self.side()?;
        ComplexMatrix::new(side, side, self.complex_entries())
    }

    pub fn to_density(&self, cap: usize) -> Result<DensityMatrix> {
        let dims = SiteDims::with_cap(self.dims.clone(), cap)?;
        let mat = self.to_matrix()?;
        DensityMatrix::new(dims, mat)
    }

    pub fn to_pure(&self, cap: usize) -> Result<PureState> {
        let dims = SiteDims::with_cap(self.dims.clone(), cap)?;
        PureState::new(dims, self.complex_entries())
    }
}

impl From<&DensityMatrix> for MatrixRecord {
    fn from(rho: &DensityMatrix) -> Self {
        MatrixRecord::from_matrix(rho.dims().as_slice().to_vec(), rho.matrix())
    }
}

impl From<&PureState> for MatrixRecord {
    fn from(psi: &PureState) -> Self {
        MatrixRecord {
            dims: psi.dims().as_slice().to_vec(),
            entries: psi.amplitudes().iter().map(|z| [z.re, z.im]).collect(),
        }
    }
}

pub fn density_from_json(text: &str, cap: usize) -> Result<DensityMatrix> {
    let rec: MatrixRecord = serde_json::from_str(text)?;
    rec.to_density(cap)
}

pub fn density_to_json(rho: &DensityMatrix) -> String {
    serde_json::to_string(&MatrixRecord::from(rho)).expect("plain data serializes")
}

/// A list of single-site matrices, from a JSON array of records (a lone record is accepted too).
pub fn factors_from_json(text: &str) -> Result<Vec<ComplexMatrix>> {
    #[derive(Deserialize)]
    #[serde(untagged)]
    enum OneOrMany {
        Many(Vec<MatrixRecord>),
        One(MatrixRecord),
    }
    let records = match serde_json::from_str(text)? {
        OneOrMany::Many(v) => v,
        OneOrMany::One(r) => vec![r],
    };
    if records.is_empty() {
        return Err(Error::Parse("empty factor list".into()));
    }
    records.iter().map(MatrixRecord::to_matrix).collect()
}

pub fn factors_to_json(factors: &[ComplexMatrix]) -> String {
    let recs: Vec<MatrixRecord> = factors.iter().map(|f| MatrixRecord::from_matrix(vec![f.rows()], f)).collect();
    serde_json::to_string(&recs).expect("plain data serializes")
}
