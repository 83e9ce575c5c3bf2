use super::{swap_on_subset, CriterionReport, PermutationAction, Term, Theorem};
use crate::config::DEFAULT_SUBSET_BUDGET;
use crate::error::{Error, Result};
use crate::tensor::{cross_trace, product_expectation, sandwich_trace, ComplexMatrix, DensityMatrix, ProductOperator};

/// `sqrt(Tr[(X†⊗Y†) P_α† ρ⊗² P_α (X⊗Y)]) = sqrt(Tr[A_α†ρA_α] · Tr[B_α†ρB_α])`.
pub fn theorem1_term(rho: &DensityMatrix, x: &ProductOperator, y: &ProductOperator, alpha: PermutationAction) -> Result<f64> {
    let (a, b) = swap_on_subset(x, y, alpha)?;
    Ok((sandwich_trace(rho, &a)? * sandwich_trace(rho, &b)?).max(0.0).sqrt())
}

/// Evaluates `(2^{k+1} - 2)·|Tr[X†ρY]| ≤ Σ_α sqrt(...)` over all nonempty proper α.
pub fn theorem1_margin(rho: &DensityMatrix, x: &ProductOperator, y: &ProductOperator, k: usize) -> Result<CriterionReport> {
    theorem1_margin_with_budget(rho, x, y, k, DEFAULT_SUBSET_BUDGET)
}

pub fn theorem1_margin_with_budget(
    rho: &DensityMatrix,
    x: &ProductOperator,
    y: &ProductOperator,
    k: usize,
    budget: usize,
) -> Result<CriterionReport> {
    rho.dims().check(x.dims(), "theorem 1 probe x")?;
    rho.dims().check(y.dims(), "theorem 1 probe y")?;
    let n = rho.dims().n();
    if k < 1 || k > n - 1 {
        return Err(Error::KOutOfRange { k, min: 1, max: n - 1 });
    }
    if n > budget.min(63) {
        return Err(Error::SubsetBudget { n, budget });
    }
    if x.is_zero() || y.is_zero() {
        return Ok(CriterionReport::degenerate(Theorem::T1, k, "X or Y vanishes"));
    }

    let lhs = cross_trace(rho, x, y)?.norm();

    let xx: Vec<ComplexMatrix> = x.factors().iter().map(|f| f.matmul(&f.dagger())).collect::<Result<_>>()?;
    let yy: Vec<ComplexMatrix> = y.factors().iter().map(|f| f.matmul(&f.dagger())).collect::<Result<_>>()?;
    let full = (1u64 << n) - 1;
    let sandwich = |mask: u64| -> f64 {
        let factors: Vec<ComplexMatrix> =
            (0..n).map(|s| if mask >> s & 1 == 1 { yy[s].clone() } else { xx[s].clone() }).collect();
        crate::tensor::trace::clamp_nonnegative(product_expectation(rho, &factors).re)
    };
    // α and its complement give the same term; evaluate only the α holding site 0.
    let half = 1usize << (n - 1);
    let paired: Vec<f64> = crate::par::map_range(half - 1, |j| {
        let mask = 2 * j as u64 + 1;
        (sandwich(mask) * sandwich(full ^ mask)).max(0.0).sqrt()
    });
    let value_of = |mask: u64| -> f64 {
        let m = if mask & 1 == 1 { mask } else { full ^ mask };
        paired[(m >> 1) as usize]
    };
    let terms: Vec<Term> = PermutationAction::nonempty_proper(n)
        .map(|alpha| Term { label: format!("alpha={}", alpha.label()), value: value_of(alpha.mask()) })
        .collect();
    let rhs = terms.iter().map(|t| t.value).sum::<f64>();
    let scale = ((1u64 << (k + 1)) - 2) as f64;
    Ok(CriterionReport::new(Theorem::T1, k, lhs, rhs, scale * lhs - rhs, terms))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::criteria::ghz_probe;
    use crate::states::{random_k_unentangled, NoiseFamily};
    use crate::tensor::{PureState, SiteDims};
    use rand::SeedableRng;

    #[test]
    fn product_state_with_equal_probes() {
        let dims = SiteDims::qubits(3).unwrap();
        let psi = PureState::basis(dims.clone(), &[0, 1, 0]).unwrap();
        let rho = psi.density();
        let x = ProductOperator::identity(&dims).with_factor(1, &ComplexMatrix::ket_bra(2, 0, 1)).unwrap();
        let alpha = PermutationAction::new(3, &[0]).unwrap();
        let s = sandwich_trace(&rho, &x).unwrap();
        assert!((theorem1_term(&rho, &x, &x, alpha).unwrap() - s).abs() < 1e-15);
    }

    #[test]
    fn ghz_family_terms_are_noise_diagonals() {
        for n in [3usize, 8] {
            let fam = NoiseFamily::ghz_white_noise(n).unwrap();
            let (x, y) = ghz_probe(fam.dims()).unwrap();
            let p = 0.3;
            let rho = fam.eval(&[p]).unwrap();
            let want = (1.0 - p) / (1u64 << n) as f64;
            for alpha in PermutationAction::nonempty_proper(n).step_by(7) {
                let t = theorem1_term(&rho, &x, &y, alpha).unwrap();
                assert!((t - want).abs() < 1e-15, "n={n} {alpha:?}: {t} vs {want}");
            }
        }
    }

    #[test]
    fn complement_symmetry_is_exact() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        let dims = SiteDims::new(vec![2, 3, 2]).unwrap();
        let rho = crate::states::random_density(&dims, 3, &mut rng).unwrap();
        let rnd = |rng: &mut rand_chacha::ChaCha8Rng| {
            let f = dims
                .as_slice()
                .iter()
                .map(|&d| {
                    let v = crate::states::random_vector(d * d, rng);
                    ComplexMatrix::new(d, d, v).unwrap()
                })
                .collect();
            ProductOperator::new(dims.clone(), f).unwrap()
        };
        let (x, y) = (rnd(&mut rng), rnd(&mut rng));
        for alpha in PermutationAction::nonempty_proper(3) {
            let a = theorem1_term(&rho, &x, &y, alpha).unwrap();
            let b = theorem1_term(&rho, &x, &y, alpha.complement()).unwrap();
            assert_eq!(a, b);
        }
        // The margin's per-term breakdown agrees with the standalone term.
        let report = theorem1_margin(&rho, &x, &y, 1).unwrap();
        for (alpha, term) in PermutationAction::nonempty_proper(3).zip(&report.terms) {
            assert!((theorem1_term(&rho, &x, &y, alpha).unwrap() - term.value).abs() < 1e-14);
        }
    }

    #[test]
    fn full_product_state_not_detected() {
        let dims = SiteDims::qubits(4).unwrap();
        let rho = random_k_unentangled(&dims, 3, 1, 11).unwrap();
        let (x, y) = ghz_probe(&dims).unwrap();
        let r = theorem1_margin(&rho, &x, &y, 3).unwrap();
        assert!(!r.detected);
    }

    #[test]
    fn k_range_and_budget() {
        let fam = NoiseFamily::ghz_white_noise(3).unwrap();
        let rho = fam.eval(&[0.5]).unwrap();
        let (x, y) = ghz_probe(fam.dims()).unwrap();
        assert!(matches!(theorem1_margin(&rho, &x, &y, 0), Err(Error::KOutOfRange { .. })));
        assert!(matches!(theorem1_margin(&rho, &x, &y, 3), Err(Error::KOutOfRange { .. })));
        assert!(matches!(theorem1_margin_with_budget(&rho, &x, &y, 1, 2), Err(Error::SubsetBudget { .. })));
    }

    #[test]
    fn zero_probe_is_degenerate() {
        let fam = NoiseFamily::ghz_white_noise(3).unwrap();
        let rho = fam.eval(&[1.0]).unwrap();
        let (x, _) = ghz_probe(fam.dims()).unwrap();
        let zero = ProductOperator::uniform(fam.dims(), &ComplexMatrix::zeros(2, 2)).unwrap();
        let r = theorem1_margin(&rho, &x, &zero, 1).unwrap();
        assert_eq!((r.lhs, r.rhs, r.detected), (0.0, 0.0, false));
        assert_eq!(r.warnings.len(), 1);
    }

    #[test]
    fn ghz_table_points() {
        let fam = NoiseFamily::ghz_white_noise(8).unwrap();
        let (x, y) = ghz_probe(fam.dims()).unwrap();
        assert!(theorem1_margin(&fam.eval(&[0.499]).unwrap(), &x, &y, 1).unwrap().detected);
        assert!(!theorem1_margin(&fam.eval(&[0.497]).unwrap(), &x, &y, 1).unwrap().detected);
        assert!(theorem1_margin(&fam.eval(&[0.125]).unwrap(), &x, &y, 3).unwrap().detected);
        assert!(!theorem1_margin(&fam.eval(&[0.123]).unwrap(), &x, &y, 3).unwrap().detected);
    }
}
