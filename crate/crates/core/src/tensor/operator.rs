use num_complex::Complex64;

use super::dims::SiteDims;
use super::matrix::{kron_with_cap, ComplexMatrix, ZERO};
use crate::error::{Error, Result};

/// An N-site operator `⊗ x_i`, stored as one `d_i × d_i` factor per site.
#[derive(Debug, Clone, PartialEq)]
pub struct ProductOperator {
    dims: SiteDims,
    factors: Vec<ComplexMatrix>,
}

impl ProductOperator {
    pub fn new(dims: SiteDims, factors: Vec<ComplexMatrix>) -> Result<Self> {
        if factors.len() != dims.n() {
            return Err(Error::DimensionMismatch(format!("{} factors for {} sites", factors.len(), dims.n())));
        }
        for (i, f) in factors.iter().enumerate() {
            let d = dims.dim(i);
            if f.rows() != d || f.cols() != d {
                return Err(Error::DimensionMismatch(format!(
                    "factor {i} is {}x{}, site dimension is {d}",
                    f.rows(),
                    f.cols()
                )));
            }
        }
        Ok(ProductOperator { dims, factors })
    }

    /// Infers the site dimensions from the factor shapes.
    pub fn from_factors(factors: Vec<ComplexMatrix>) -> Result<Self> {
        let dims = SiteDims::new(factors.iter().map(|f| f.rows()).collect())?;
        Self::new(dims, factors)
    }

    /// The same factor on every site.
    pub fn uniform(dims: &SiteDims, factor: &ComplexMatrix) -> Result<Self> {
        Self::new(dims.clone(), vec![factor.clone(); dims.n()])
    }

    pub fn identity(dims: &SiteDims) -> Self {
        let factors = dims.as_slice().iter().map(|&d| ComplexMatrix::identity(d)).collect();
        ProductOperator { dims: dims.clone(), factors }
    }

    pub fn dims(&self) -> &SiteDims {
        &self.dims
    }

    pub fn factors(&self) -> &[ComplexMatrix] {
        &self.factors
    }

    pub fn factor(&self, site: usize) -> &ComplexMatrix {
        &self.factors[site]
    }

    /// Copy with the factor on `site` replaced.
    pub fn with_factor(&self, site: usize, w: &ComplexMatrix) -> Result<Self> {
        let n = self.dims.n();
        if site >= n {
            return Err(Error::SiteOutOfRange { site, n });
        }
        let d = self.dims.dim(site);
        if w.rows() != d || w.cols() != d {
            return Err(Error::DimensionMismatch(format!("substitute is {}x{}, site {site} has dimension {d}", w.rows(), w.cols())));
        }
        let mut out = self.clone();
        out.factors[site] = w.clone();
        Ok(out)
    }

    pub fn dagger(&self) -> Self {
        ProductOperator { dims: self.dims.clone(), factors: self.factors.iter().map(|f| f.dagger()).collect() }
    }

    /// Sitewise product `⊗ (self_i · other_i)`, which equals the matrix product of the assembled operators.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        self.dims.check(&other.dims, "compose")?;
        let factors = self.factors.iter().zip(&other.factors).map(|(a, b)| a.matmul(b)).collect::<Result<_>>()?;
        Ok(ProductOperator { dims: self.dims.clone(), factors })
    }

    /// True when some factor vanishes, so the whole operator is zero.
    pub fn is_zero(&self) -> bool {
        self.factors.iter().any(ComplexMatrix::is_zero)
    }

    /// Multiply every factor on one site by `c`.
    pub fn scale_site(&self, site: usize, c: Complex64) -> Result<Self> {
        let f = self.factors.get(site).ok_or(Error::SiteOutOfRange { site, n: self.dims.n() })?;
        self.with_factor(site, &f.scale(c))
    }

    /// Dense `⊗_i factors[i]` with site 0 leftmost.
    pub fn assemble(&self) -> Result<ComplexMatrix> {
        let mut acc = self.factors[0].clone();
        for f in &self.factors[1..] {
            acc = kron_with_cap(&acc, f, usize::MAX)?;
        }
        Ok(acc)
    }

    /// Apply to a state vector without assembling the operator.
    pub fn apply(&self, v: &[Complex64]) -> Result<Vec<Complex64>> {
        if v.len() != self.dims.total() {
            return Err(Error::DimensionMismatch(format!("vector length {} vs dimension {}", v.len(), self.dims.total())));
        }
        let mut cur = v.to_vec();
        let mut next = vec![ZERO; cur.len()];
        let strides = self.dims.strides();
        for (site, f) in self.factors.iter().enumerate() {
            let d = self.dims.dim(site);
            let stride = strides[site];
            let block = stride * d;
            next.iter_mut().for_each(|z| *z = ZERO);
            for base in (0..cur.len()).step_by(block) {
                for inner in 0..stride {
                    let off = base + inner;
                    for r in 0..d {
                        let mut acc = ZERO;
                        for c in 0..d {
                            acc += f.get(r, c) * cur[off + c * stride];
                        }
                        next[off + r * stride] = acc;
                    }
                }
            }
            std::mem::swap(&mut cur, &mut next);
        }
        Ok(cur)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tensor::matrix::kron;

    #[test]
    fn identity_assembles_to_identity() {
        let dims = SiteDims::new(vec![2, 3, 2]).unwrap();
        assert_eq!(ProductOperator::identity(&dims).assemble().unwrap(), ComplexMatrix::identity(12));
    }

    #[test]
    fn elementary_bookkeeping() {
        let op = ProductOperator::from_factors(vec![ComplexMatrix::ket_bra(2, 1, 0), ComplexMatrix::ket_bra(2, 0, 0)]).unwrap();
        assert_eq!(op.assemble().unwrap(), ComplexMatrix::ket_bra(4, 2, 0));
    }

    #[test]
    fn apply_matches_assembled() {
        let f = |s: f64| ComplexMatrix::from_fn(3, 3, |r, c| Complex64::new(s * r as f64 - c as f64, (r * c) as f64 + s));
        let op = ProductOperator::from_factors(vec![f(0.5), f(-1.0), f(2.0)]).unwrap();
        let v: Vec<Complex64> = (0..27).map(|i| Complex64::new(i as f64, 1.0 - i as f64)).collect();
        let dense = op.assemble().unwrap();
        let fast = op.apply(&v).unwrap();
        for r in 0..27 {
            let want: Complex64 = (0..27).map(|c| dense.get(r, c) * v[c]).sum();
            assert!((want - fast[r]).norm() < 1e-9);
        }
        assert_eq!(dense, kron(&kron(&f(0.5), &f(-1.0)).unwrap(), &f(2.0)).unwrap());
    }

    #[test]
    fn with_factor_checks_shape() {
        let dims = SiteDims::qubits(3).unwrap();
        let op = ProductOperator::identity(&dims);
        assert!(op.with_factor(3, &ComplexMatrix::identity(2)).is_err());
        assert!(op.with_factor(0, &ComplexMatrix::identity(3)).is_err());
    }
}
