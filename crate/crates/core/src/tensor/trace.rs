//! Single-copy trace kernels. Every two-copy expression in the criteria
//! reduces to `Tr[ρ Q]` for a product operator `Q = ⊗ q_i`, which is
//! evaluated here factor by factor without assembling `Q` or any doubled
//! space. Zero factor entries prune whole subtrees, so elementary probes such
//! as `|1⟩⟨0|` cost O(N).

use num_complex::Complex64;

use super::matrix::{ComplexMatrix, ZERO};
use super::operator::ProductOperator;
use super::state::DensityMatrix;
use crate::config::TOLERANCES;
use crate::error::Result;

struct Kernel<'a> {
    rho: &'a DensityMatrix,
    d: usize,
    strides: Vec<usize>,
    nonzero: Vec<Vec<(usize, usize, Complex64)>>,
}

impl Kernel<'_> {
    fn walk(&self, site: usize, row: usize, col: usize, prod: Complex64) -> Complex64 {
        if site == self.nonzero.len() {
            // Q[row][col] pairs with ρ[col][row].
            return self.rho.matrix().entries()[col * self.d + row] * prod;
        }
        let stride = self.strides[site];
        let mut acc = ZERO;
        for &(r, c, v) in &self.nonzero[site] {
            acc += self.walk(site + 1, row + r * stride, col + c * stride, prod * v);
        }
        acc
    }
}

/// `Tr[ρ (⊗ q_i)]` for per-site factors `q_i`. Callers guarantee shapes.
pub(crate) fn product_expectation(rho: &DensityMatrix, factors: &[ComplexMatrix]) -> Complex64 {
    let dims = rho.dims();
    debug_assert_eq!(factors.len(), dims.n());
    let nonzero: Vec<Vec<_>> = factors
        .iter()
        .map(|f| {
            let mut nz = Vec::new();
            for r in 0..f.rows() {
                for c in 0..f.cols() {
                    let v = f.get(r, c);
                    if v != ZERO {
                        nz.push((r, c, v));
                    }
                }
            }
            nz
        })
        .collect();
    if nonzero.iter().any(Vec::is_empty) {
        return ZERO;
    }
    let kernel = Kernel { rho, d: dims.total(), strides: dims.strides(), nonzero };
    kernel.walk(0, 0, 0, Complex64::new(1.0, 0.0))
}

/// `Tr[ρ Q]` for a product operator `Q`.
pub fn expectation(rho: &DensityMatrix, q: &ProductOperator) -> Result<Complex64> {
    rho.dims().check(q.dims(), "expectation")?;
    Ok(product_expectation(rho, q.factors()))
}

/// `Tr[M† ρ M] = Tr[ρ M M†]`, real and nonnegative for valid ρ.
///
/// Values within tolerance below zero are clamped to zero.
pub fn sandwich_trace(rho: &DensityMatrix, m: &ProductOperator) -> Result<f64> {
    rho.dims().check(m.dims(), "sandwich_trace")?;
    let mm: Vec<ComplexMatrix> = m.factors().iter().map(|f| f.matmul(&f.dagger())).collect::<Result<_>>()?;
    Ok(clamp_nonnegative(product_expectation(rho, &mm).re))
}

/// `Tr[X† ρ Y]`; for pure ρ = |ψ⟩⟨ψ| this is `⟨ψ|Y X†|ψ⟩`.
pub fn cross_trace(rho: &DensityMatrix, x: &ProductOperator, y: &ProductOperator) -> Result<Complex64> {
    rho.dims().check(x.dims(), "cross_trace x")?;
    rho.dims().check(y.dims(), "cross_trace y")?;
    let yx: Vec<ComplexMatrix> =
        y.factors().iter().zip(x.factors()).map(|(yf, xf)| yf.matmul(&xf.dagger())).collect::<Result<_>>()?;
    Ok(product_expectation(rho, &yx))
}

pub(crate) fn clamp_nonnegative(v: f64) -> f64 {
    if v < 0.0 && v >= -TOLERANCES.psd {
        0.0
    } else {
        v
    }
}
