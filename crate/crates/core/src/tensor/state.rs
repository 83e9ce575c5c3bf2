use nalgebra::DMatrix;
use num_complex::Complex64;

use super::dims::SiteDims;
use super::matrix::{ComplexMatrix, ZERO};
use crate::config::TOLERANCES;
use crate::error::{Error, Result};

/// Normalized state vector `|ψ⟩` on a composite space.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    dims: SiteDims,
    amplitudes: Vec<Complex64>,
}

impl PureState {
    pub fn new(dims: SiteDims, amplitudes: Vec<Complex64>) -> Result<Self> {
        if amplitudes.len() != dims.total() {
            return Err(Error::DimensionMismatch(format!(
                "{} amplitudes for dimension {}",
                amplitudes.len(),
                dims.total()
            )));
        }
        if amplitudes.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        let norm: f64 = amplitudes.iter().map(|z| z.norm_sqr()).sum();
        if (norm - 1.0).abs() > TOLERANCES.norm {
            return Err(Error::NotNormalized(norm));
        }
        Ok(PureState { dims, amplitudes })
    }

    /// Normalizes `amplitudes` first; fails on the zero vector.
    pub fn normalized(dims: SiteDims, mut amplitudes: Vec<Complex64>) -> Result<Self> {
        let norm = amplitudes.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if !(norm > 0.0) {
            return Err(Error::NotNormalized(0.0));
        }
        amplitudes.iter_mut().for_each(|z| *z /= norm);
        Self::new(dims, amplitudes)
    }

    /// The product basis state with the given per-site levels.
    pub fn basis(dims: SiteDims, digits: &[usize]) -> Result<Self> {
        if digits.len() != dims.n() || digits.iter().zip(dims.as_slice()).any(|(&b, &d)| b >= d) {
            return Err(Error::InvalidArgument(format!("basis digits {digits:?} for dims {:?}", dims.as_slice())));
        }
        let mut amps = vec![ZERO; dims.total()];
        amps[dims.index(digits)] = Complex64::new(1.0, 0.0);
        Ok(PureState { dims, amplitudes: amps })
    }

    pub fn dims(&self) -> &SiteDims {
        &self.dims
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn inner(&self, other: &PureState) -> Result<Complex64> {
        self.dims.check(&other.dims, "inner product")?;
        Ok(self.amplitudes.iter().zip(&other.amplitudes).map(|(a, b)| a.conj() * b).sum())
    }

    pub fn density(&self) -> DensityMatrix {
        let d = self.dims.total();
        let mut data = vec![ZERO; d * d];
        crate::par::for_each_chunk(&mut data, d, |r, row| {
            let a = self.amplitudes[r];
            if a == ZERO {
                return;
            }
            for (o, b) in row.iter_mut().zip(&self.amplitudes) {
                *o = a * b.conj();
            }
        });
        DensityMatrix::from_parts(self.dims.clone(), ComplexMatrix::from_raw(d, d, data))
    }
}

/// A density matrix ρ with recorded site dimensions.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    dims: SiteDims,
    mat: ComplexMatrix,
}

impl DensityMatrix {
    /// Validates Hermiticity, unit trace and positivity (full eigendecomposition).
    pub fn new(dims: SiteDims, mat: ComplexMatrix) -> Result<Self> {
        let d = dims.total();
        if mat.rows() != d || mat.cols() != d {
            return Err(Error::DimensionMismatch(format!("{}x{} matrix for dimension {d}", mat.rows(), mat.cols())));
        }
        let dev = mat.hermitian_deviation();
        if dev > TOLERANCES.hermitian {
            return Err(Error::NotHermitian(dev));
        }
        let tr = mat.trace();
        if (tr.re - 1.0).abs() > TOLERANCES.trace || tr.im.abs() > TOLERANCES.trace {
            return Err(Error::TraceNotOne(tr.re));
        }
        let rho = DensityMatrix { dims, mat };
        let min = rho.min_eigenvalue();
        if min < -TOLERANCES.psd {
            return Err(Error::NotPositive(min));
        }
        Ok(rho)
    }

    /// For matrices that are valid by construction (convex mixtures of valid states).
    pub(crate) fn from_parts(dims: SiteDims, mat: ComplexMatrix) -> Self {
        debug_assert_eq!(mat.rows(), dims.total());
        DensityMatrix { dims, mat }
    }

    pub fn maximally_mixed(dims: &SiteDims) -> Self {
        let d = dims.total();
        let v = Complex64::new(1.0 / d as f64, 0.0);
        DensityMatrix::from_parts(dims.clone(), ComplexMatrix::from_fn(d, d, |r, c| if r == c { v } else { ZERO }))
    }

    pub fn dims(&self) -> &SiteDims {
        &self.dims
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.mat
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> Complex64 {
        self.mat.get(r, c)
    }

    pub fn min_eigenvalue(&self) -> f64 {
        let d = self.dims.total();
        let m = DMatrix::from_row_slice(d, d, self.mat.entries());
        // Symmetrize so rounding noise in the upper and lower halves agrees.
        let herm = (&m + m.adjoint()) * Complex64::new(0.5, 0.0);
        herm.symmetric_eigenvalues().iter().copied().fold(f64::INFINITY, f64::min)
    }
}
