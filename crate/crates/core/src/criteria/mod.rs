//! The two inequality families and their factorized evaluation.
//!
//! # Permutation reading
//!
//! `P_α` acts on a pair of product operators by exchanging the factors on the
//! sites in `α` (see [`swap_on_subset`]). With that reading the two-copy
//! quantities collapse to single-copy traces:
//!
//! * `Tr[(X†⊗Y†) ρ⊗² P (X⊗Y)] = Tr[X†ρY] · Tr[Y†ρX] = |Tr[X†ρY]|²`, which for
//!   pure ρ is `|⟨ψ|YX†|ψ⟩|²`;
//! * `Tr[(X†⊗Y†) P_α† ρ⊗² P_α (X⊗Y)] = Tr[A_α†ρA_α] · Tr[B_α†ρB_α]`.
//!
//! Reading `P` as the swap matrix on the doubled space instead yields
//! `⟨ψ|YY†|ψ⟩⟨ψ|XX†|ψ⟩` for the global term, which cannot reproduce the
//! Cauchy–Schwarz step the inequalities rest on. For the local terms, where
//! `P_α` appears on both sides, the two readings agree.
//!
//! Site indices are 0-based throughout, including report labels.

mod presets;
mod theorem1;
mod theorem2;

pub use presets::{ghz_probe, w_probe, w_probe_literal_alternative, w_probe_swapped};
pub use theorem1::{theorem1_margin, theorem1_margin_with_budget, theorem1_term};
pub use theorem2::{site_substituted_operator, theorem2_k1_margin, theorem2_margin, two_site_substituted_operator, Aggregation};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::tensor::{DensityMatrix, ProductOperator};

/// The subset `α ⊆ {0..N-1}` whose factors `P_α` exchanges between copies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PermutationAction {
    n: usize,
    mask: u64,
}

impl PermutationAction {
    pub fn new(n: usize, sites: &[usize]) -> Result<Self> {
        if n > 63 {
            return Err(Error::InvalidArgument(format!("{n} sites exceed the 63-site subset encoding")));
        }
        let mut mask = 0u64;
        for &s in sites {
            if s >= n {
                return Err(Error::SiteOutOfRange { site: s, n });
            }
            mask |= 1 << s;
        }
        Ok(PermutationAction { n, mask })
    }

    pub fn from_mask(n: usize, mask: u64) -> Result<Self> {
        if n > 63 || mask >> n != 0 {
            return Err(Error::InvalidArgument(format!("mask {mask:#b} out of range for {n} sites")));
        }
        Ok(PermutationAction { n, mask })
    }

    /// The global permutation `P`.
    pub fn full(n: usize) -> Self {
        PermutationAction { n, mask: (1u64 << n) - 1 }
    }

    /// `P_i`.
    pub fn single(n: usize, site: usize) -> Result<Self> {
        Self::new(n, &[site])
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn mask(&self) -> u64 {
        self.mask
    }

    pub fn contains(&self, site: usize) -> bool {
        site < self.n && self.mask >> site & 1 == 1
    }

    pub fn complement(&self) -> Self {
        PermutationAction { n: self.n, mask: !self.mask & ((1u64 << self.n) - 1) }
    }

    pub fn is_nonempty_proper(&self) -> bool {
        self.mask != 0 && self.mask != (1u64 << self.n) - 1
    }

    pub fn sites(&self) -> Vec<usize> {
        (0..self.n).filter(|&s| self.contains(s)).collect()
    }

    pub fn label(&self) -> String {
        let s: Vec<String> = self.sites().iter().map(ToString::to_string).collect();
        format!("{{{}}}", s.join(","))
    }

    /// Every nonempty proper subset, in increasing mask order.
    pub fn nonempty_proper(n: usize) -> impl Iterator<Item = PermutationAction> {
        (1..(1u64 << n) - 1).map(move |mask| PermutationAction { n, mask })
    }
}

/// `P_α` applied to `x ⊗ y`: returns `(A_α, B_α)` where `A_α` carries `y`'s
/// factors on `α` and `x`'s elsewhere, and `B_α` the reverse.
pub fn swap_on_subset(
    x: &ProductOperator,
    y: &ProductOperator,
    alpha: PermutationAction,
) -> Result<(ProductOperator, ProductOperator)> {
    x.dims().check(y.dims(), "swap_on_subset")?;
    let n = x.dims().n();
    if alpha.n() != n {
        return Err(Error::DimensionMismatch(format!("subset over {} sites for {n}-site operators", alpha.n())));
    }
    let (mut a, mut b) = (Vec::with_capacity(n), Vec::with_capacity(n));
    for site in 0..n {
        let (xf, yf) = (x.factor(site).clone(), y.factor(site).clone());
        if alpha.contains(site) {
            a.push(yf);
            b.push(xf);
        } else {
            a.push(xf);
            b.push(yf);
        }
    }
    Ok((ProductOperator::new(x.dims().clone(), a)?, ProductOperator::new(x.dims().clone(), b)?))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Theorem {
    T1,
    T2,
    #[serde(rename = "T2_k1")]
    T2K1,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Term {
    pub label: String,
    pub value: f64,
}

/// Outcome of one criterion evaluation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CriterionReport {
    pub theorem: Theorem,
    pub k: usize,
    pub lhs: f64,
    pub rhs: f64,
    pub margin: f64,
    pub detected: bool,
    pub terms: Vec<Term>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<String>,
}

impl CriterionReport {
    fn new(theorem: Theorem, k: usize, lhs: f64, rhs: f64, margin: f64, terms: Vec<Term>) -> Self {
        CriterionReport {
            theorem,
            k,
            lhs,
            rhs,
            margin,
            detected: margin > crate::config::TOLERANCES.detection,
            terms,
            witness: None,
            warnings: Vec::new(),
        }
    }

    fn degenerate(theorem: Theorem, k: usize, why: &str) -> Self {
        let mut r = Self::new(theorem, k, 0.0, 0.0, 0.0, Vec::new());
        r.warnings.push(format!("degenerate probe: {why}; the inequality holds trivially"));
        r
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("report serializes")
    }
}

/// A criterion with fixed probe operators, evaluated for a given ρ and k.
pub trait Criterion: Sync {
    fn evaluate(&self, rho: &DensityMatrix, k: usize) -> Result<CriterionReport>;
}

/// Theorem 1 with probes `X = ⊗x_i`, `Y = ⊗y_i`.
#[derive(Debug, Clone)]
pub struct Theorem1 {
    pub x: ProductOperator,
    pub y: ProductOperator,
}

impl Criterion for Theorem1 {
    fn evaluate(&self, rho: &DensityMatrix, k: usize) -> Result<CriterionReport> {
        theorem1_margin(rho, &self.x, &self.y, k)
    }
}

/// Summed Theorem 2 inequality with probe `X` and substitutes `ω`.
#[derive(Debug, Clone)]
pub struct Theorem2 {
    pub x: ProductOperator,
    pub omega: Vec<crate::tensor::ComplexMatrix>,
}

impl Criterion for Theorem2 {
    fn evaluate(&self, rho: &DensityMatrix, k: usize) -> Result<CriterionReport> {
        theorem2_margin(rho, &self.x, &self.omega, k)
    }
}

/// Per-tuple form of Theorem 2; only `k = 1` is accepted.
#[derive(Debug, Clone)]
pub struct Theorem2Pairwise {
    pub x: ProductOperator,
    pub omega: Vec<crate::tensor::ComplexMatrix>,
    pub aggregation: Aggregation,
}

impl Criterion for Theorem2Pairwise {
    fn evaluate(&self, rho: &DensityMatrix, k: usize) -> Result<CriterionReport> {
        if k != 1 {
            return Err(Error::KOutOfRange { k, min: 1, max: 1 });
        }
        theorem2_k1_margin(rho, &self.x, &self.omega, self.aggregation)
    }
}
