use serde::{Deserialize, Serialize};

use super::{CriterionReport, Term, Theorem};
use crate::error::{Error, Result};
use crate::tensor::{cross_trace, sandwich_trace, ComplexMatrix, DensityMatrix, ProductOperator};

/// `X_i^s`: the probe with its factor on `site` replaced by `w`.
pub fn site_substituted_operator(x: &ProductOperator, site: usize, w: &ComplexMatrix) -> Result<ProductOperator> {
    x.with_factor(site, w)
}

/// `X_ij^st`: substitutes at two distinct sites.
pub fn two_site_substituted_operator(
    x: &ProductOperator,
    (i, wi): (usize, &ComplexMatrix),
    (j, wj): (usize, &ComplexMatrix),
) -> Result<ProductOperator> {
    if i == j {
        return Err(Error::InvalidArgument(format!("two-site substitution needs distinct sites, got {i} twice")));
    }
    x.with_factor(i, wi)?.with_factor(j, wj)
}

/// How the per-tuple margins of the k = 1 form are combined.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Aggregation {
    /// Largest per-tuple margin, with its tuple as witness.
    #[default]
    Max,
    /// Sum of all per-tuple margins.
    Sum,
}

struct Tuple {
    i: usize,
    j: usize,
    s: usize,
    t: usize,
}

impl Tuple {
    fn label(&self) -> String {
        format!("i={},j={},s={},t={}", self.i, self.j, self.s, self.t)
    }
}

/// Per-tuple ingredients shared by both forms.
struct Evaluated {
    cross: f64,
    product: f64,
}

struct Setup {
    substituted: Vec<Vec<ProductOperator>>,
    tuples: Vec<Tuple>,
    sandwich_x: f64,
}

fn setup(rho: &DensityMatrix, x: &ProductOperator, omega: &[ComplexMatrix]) -> Result<Setup> {
    rho.dims().check(x.dims(), "theorem 2 probe")?;
    let d = rho
        .dims()
        .common_dim()
        .ok_or_else(|| Error::DimensionMismatch(format!("theorem 2 needs equal local dimensions, got {:?}", rho.dims().as_slice())))?;
    if omega.is_empty() {
        return Err(Error::InvalidArgument("omega must hold at least one operator".into()));
    }
    if let Some(w) = omega.iter().find(|w| w.rows() != d || w.cols() != d) {
        return Err(Error::DimensionMismatch(format!("omega entry is {}x{}, local dimension is {d}", w.rows(), w.cols())));
    }
    let n = rho.dims().n();
    let substituted = (0..n)
        .map(|i| omega.iter().map(|w| site_substituted_operator(x, i, w)).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()?;
    let mut tuples = Vec::with_capacity(n * (n - 1) * omega.len() * omega.len());
    for i in 0..n {
        for j in (0..n).filter(|&j| j != i) {
            for s in 0..omega.len() {
                for t in 0..omega.len() {
                    tuples.push(Tuple { i, j, s, t });
                }
            }
        }
    }
    Ok(Setup { substituted, tuples, sandwich_x: sandwich_trace(rho, x)? })
}

fn evaluate_tuples(rho: &DensityMatrix, x: &ProductOperator, omega: &[ComplexMatrix], st: &Setup) -> Result<Vec<Evaluated>> {
    crate::par::map_slice(&st.tuples, |tu| {
        let xi = &st.substituted[tu.i][tu.s];
        let xj = &st.substituted[tu.j][tu.t];
        let cross = cross_trace(rho, xi, xj)?.norm();
        let xij = two_site_substituted_operator(x, (tu.i, &omega[tu.s]), (tu.j, &omega[tu.t]))?;
        let product = st.sandwich_x * sandwich_trace(rho, &xij)?;
        Ok(Evaluated { cross, product })
    })
    .into_iter()
    .collect()
}

/// Summed form: `Σ |Tr[X_i^s† ρ X_j^t]| ≤ Σ sqrt(Tr[X†ρX]·Tr[X_ij^st† ρ X_ij^st]) + T(N-k-1) Σ Tr[X_i^s† ρ X_i^s]`.
///
/// Accepts `1 ≤ k ≤ N-1`; the pure-state bound behind the summed form does not
/// need `k ≥ 2`.
pub fn theorem2_margin(rho: &DensityMatrix, x: &ProductOperator, omega: &[ComplexMatrix], k: usize) -> Result<CriterionReport> {
    let n = rho.dims().n();
    if k < 1 || k > n - 1 {
        return Err(Error::KOutOfRange { k, min: 1, max: n - 1 });
    }
    let st = setup(rho, x, omega)?;
    let evaluated = evaluate_tuples(rho, x, omega, &st)?;

    let mut terms = Vec::with_capacity(2 * evaluated.len() + n * omega.len());
    let mut lhs = 0.0;
    let mut permuted = 0.0;
    for (tu, ev) in st.tuples.iter().zip(&evaluated) {
        let root = ev.product.max(0.0).sqrt();
        lhs += ev.cross;
        permuted += root;
        terms.push(Term { label: format!("lhs[{}]", tu.label()), value: ev.cross });
        terms.push(Term { label: format!("perm[{}]", tu.label()), value: root });
    }
    let mut diagonal = 0.0;
    for (i, row) in st.substituted.iter().enumerate() {
        for (s, op) in row.iter().enumerate() {
            let v = sandwich_trace(rho, op)?;
            diagonal += v;
            terms.push(Term { label: format!("diag[i={i},s={s}]", ), value: v });
        }
    }
    let coeff = (omega.len() * (n - k - 1)) as f64;
    let rhs = permuted + coeff * diagonal;
    let mut report = CriterionReport::new(Theorem::T2, k, lhs, rhs, lhs - rhs, terms);
    if lhs == 0.0 && rhs == 0.0 {
        report.warnings.push("degenerate probe: every term vanishes".into());
    }
    Ok(report)
}

/// Per-tuple form: `|Tr[X_i^s† ρ X_j^t]|² ≤ Tr[X†ρX] · Tr[X_ij^st† ρ X_ij^st]` for each `(i, j, s, t)`.
///
/// The per-tuple bound only follows from the product structure when `i` and
/// `j` lie in different blocks. It is therefore guaranteed for fully product
/// states, but a state such as `|0⟩⊗|W_{N-1}⟩` (one unentangled particle) can
/// violate it through a pair inside the entangled block. Use
/// [`theorem2_margin`] with `k = 1` for a certificate that holds for every
/// state with at least one unentangled particle.
pub fn theorem2_k1_margin(
    rho: &DensityMatrix,
    x: &ProductOperator,
    omega: &[ComplexMatrix],
    aggregation: Aggregation,
) -> Result<CriterionReport> {
    let st = setup(rho, x, omega)?;
    let evaluated = evaluate_tuples(rho, x, omega, &st)?;
    let margins: Vec<f64> = evaluated.iter().map(|e| e.cross * e.cross - e.product).collect();
    let terms: Vec<Term> = st.tuples.iter().zip(&margins).map(|(tu, &m)| Term { label: tu.label(), value: m }).collect();

    let best = margins
        .iter()
        .enumerate()
        .fold(None::<(usize, f64)>, |acc, (i, &m)| match acc {
            Some((_, b)) if b >= m => acc,
            _ => Some((i, m)),
        })
        .map(|(i, _)| i)
        .expect("at least one tuple for N >= 2");
    let (lhs, rhs, margin) = match aggregation {
        Aggregation::Max => {
            let e = &evaluated[best];
            (e.cross * e.cross, e.product, margins[best])
        }
        Aggregation::Sum => {
            let lhs: f64 = evaluated.iter().map(|e| e.cross * e.cross).sum();
            let rhs: f64 = evaluated.iter().map(|e| e.product).sum();
            (lhs, rhs, margins.iter().sum())
        }
    };
    let mut report = CriterionReport::new(Theorem::T2K1, 1, lhs, rhs, margin, terms);
    if aggregation == Aggregation::Max {
        report.witness = Some(st.tuples[best].label());
    }
    if evaluated.iter().all(|e| e.cross == 0.0 && e.product == 0.0) {
        report.warnings.push("degenerate probe: every term vanishes".into());
    }
    Ok(report)
}
