use serde::{Deserialize, Serialize};

use crate::config::DEFAULT_DIM_CAP;
use crate::error::{Error, Result};

/// Local dimensions `d_1..d_N` of a composite system.
///
/// Site 0 is the most significant Kronecker factor: the basis index of
/// `|b_0 .. b_{N-1}⟩` is `Σ b_i · Π_{j>i} d_j`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
#[serde(transparent)]
pub struct SiteDims {
    dims: Vec<usize>,
    #[serde(skip)]
    total: usize,
}

impl SiteDims {
    pub fn new(dims: Vec<usize>) -> Result<Self> {
        Self::with_cap(dims, DEFAULT_DIM_CAP)
    }

    pub fn with_cap(dims: Vec<usize>, cap: usize) -> Result<Self> {
        if dims.len() < 2 {
            return Err(Error::InvalidDims(format!("need at least 2 sites, got {}", dims.len())));
        }
        if let Some(&d) = dims.iter().find(|&&d| d < 2) {
            return Err(Error::InvalidDims(format!("local dimension {d} < 2")));
        }
        let mut total: usize = 1;
        for &d in &dims {
            total = total.checked_mul(d).filter(|&t| t <= cap).ok_or(Error::DimensionCap {
                dim: dims.iter().fold(1usize, |a, &d| a.saturating_mul(d)),
                cap,
            })?;
        }
        Ok(SiteDims { dims, total })
    }

    pub fn uniform(n: usize, d: usize) -> Result<Self> {
        Self::new(vec![d; n])
    }

    pub fn qubits(n: usize) -> Result<Self> {
        Self::uniform(n, 2)
    }

    /// Number of sites N.
    pub fn n(&self) -> usize {
        self.dims.len()
    }

    pub fn dim(&self, site: usize) -> usize {
        self.dims[site]
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.dims
    }

    /// Total dimension D = Π d_i.
    pub fn total(&self) -> usize {
        self.total
    }

    /// The common local dimension, if all sites share one.
    pub fn common_dim(&self) -> Option<usize> {
        let d = self.dims[0];
        self.dims.iter().all(|&x| x == d).then_some(d)
    }

    /// Place value of each site in the flat basis index.
    pub fn strides(&self) -> Vec<usize> {
        let mut strides = vec![1; self.n()];
        for i in (0..self.n() - 1).rev() {
            strides[i] = strides[i + 1] * self.dims[i + 1];
        }
        strides
    }

    pub fn digits(&self, mut index: usize) -> Vec<usize> {
        let mut out = vec![0; self.n()];
        for i in (0..self.n()).rev() {
            out[i] = index % self.dims[i];
            index /= self.dims[i];
        }
        out
    }

    pub fn index(&self, digits: &[usize]) -> usize {
        debug_assert_eq!(digits.len(), self.n());
        digits.iter().zip(&self.dims).fold(0, |acc, (&b, &d)| acc * d + b)
    }

    pub(crate) fn check(&self, other: &SiteDims, what: &str) -> Result<()> {
        if self.dims != other.dims {
            return Err(Error::DimensionMismatch(format!("{what}: {:?} vs {:?}", self.dims, other.dims)));
        }
        Ok(())
    }
}

impl<'de> Deserialize<'de> for SiteDims {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        let dims = Vec::<usize>::deserialize(de)?;
        SiteDims::new(dims).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn big_endian_layout() {
        let dims = SiteDims::new(vec![2, 3, 4]).unwrap();
        assert_eq!(dims.total(), 24);
        assert_eq!(dims.strides(), vec![12, 4, 1]);
        assert_eq!(dims.index(&[1, 2, 3]), 23);
        assert_eq!(dims.digits(13), vec![1, 0, 1]);
    }

    #[test]
    fn rejects_invalid() {
        assert!(SiteDims::new(vec![2]).is_err());
        assert!(SiteDims::new(vec![2, 1]).is_err());
        assert!(matches!(SiteDims::qubits(13), Err(Error::DimensionCap { dim: 8192, cap: 4096 })));
        assert!(SiteDims::qubits(12).is_ok());
        assert!(SiteDims::uniform(5, 4).is_ok());
        assert!(SiteDims::with_cap(vec![2, 2, 2], 4).is_err());
    }
}
