//! Probe operators used by the GHZ and W examples.

use crate::error::{Error, Result};
use crate::tensor::{ComplexMatrix, ProductOperator, SiteDims};

/// `x_i = |1⟩⟨0|`, `y_i = |0⟩⟨0|` on every site.
pub fn ghz_probe(dims: &SiteDims) -> Result<(ProductOperator, ProductOperator)> {
    let x = dims.as_slice().iter().map(|&d| ComplexMatrix::ket_bra(d, 1, 0)).collect();
    let y = dims.as_slice().iter().map(|&d| ComplexMatrix::ket_bra(d, 0, 0)).collect();
    Ok((ProductOperator::new(dims.clone(), x)?, ProductOperator::new(dims.clone(), y)?))
}

fn uniform_probe(n: usize, d: usize, x: ComplexMatrix, omega: Vec<ComplexMatrix>) -> Result<(ProductOperator, Vec<ComplexMatrix>)> {
    if d < 2 {
        return Err(Error::InvalidArgument(format!("local dimension {d} < 2")));
    }
    let dims = SiteDims::uniform(n, d)?;
    Ok((ProductOperator::uniform(&dims, &x)?, omega))
}

/// `x_i = |0⟩⟨0|`, `ω = {|1⟩⟨0|, .., |d-1⟩⟨0|}`.
pub fn w_probe(n: usize, d: usize) -> Result<(ProductOperator, Vec<ComplexMatrix>)> {
    let omega = (1..d).map(|s| ComplexMatrix::ket_bra(d, s, 0)).collect();
    uniform_probe(n, d, ComplexMatrix::ket_bra(d, 0, 0), omega)
}

/// [`w_probe`] conjugated by the cyclic shift σ: `x_i = |1⟩⟨1|`,
/// `ω = {|2⟩⟨1|, .., |d-1⟩⟨1|, |0⟩⟨1|}`. Evaluated on `ρ(p, q)` it gives
/// the same margins as [`w_probe`] on `ρ(q, p)` once N ≥ 4.
pub fn w_probe_swapped(n: usize, d: usize) -> Result<(ProductOperator, Vec<ComplexMatrix>)> {
    let omega = (1..d).map(|s| ComplexMatrix::ket_bra(d, (s + 1) % d, 1)).collect();
    uniform_probe(n, d, ComplexMatrix::ket_bra(d, 1, 1), omega)
}

/// `x_i = |1⟩⟨1|`, `ω = {|0⟩⟨1|, .., |0⟩⟨d-1|}`; only `|0⟩⟨1|` overlaps the
/// support of W̃, so this probe is much weaker than [`w_probe_swapped`].
pub fn w_probe_literal_alternative(n: usize, d: usize) -> Result<(ProductOperator, Vec<ComplexMatrix>)> {
    let omega = (1..d).map(|s| ComplexMatrix::ket_bra(d, 0, s)).collect();
    uniform_probe(n, d, ComplexMatrix::ket_bra(d, 1, 1), omega)
}
