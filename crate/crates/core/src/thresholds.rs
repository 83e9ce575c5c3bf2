//! Detection thresholds along white-noise families: bisection on criterion
//! margins, closed forms for the GHZ and W families, and (p, q) boundary scans.

use serde::{Deserialize, Serialize};

use crate::criteria::{theorem2_k1_margin, theorem2_margin, w_probe, w_probe_swapped, Aggregation, Criterion};
use crate::error::{Error, Result};
use crate::states::NoiseFamily;

pub const DEFAULT_TOL: f64 = 1e-8;
pub const MAX_ITERATIONS: usize = 60;

/// Published Theorem 1 thresholds for the 8-qubit GHZ family, k = 1..7 (4-decimal roundings).
pub const TABLE1_PUBLISHED: [f64; 7] = [0.4980, 0.2485, 0.1241, 0.0620, 0.0310, 0.0155, 0.0078];
/// Comparison thresholds from a Fisher-information criterion for the same family,
/// shipped as reference values only.
pub const TABLE1_REFERENCE_CRITERION: [f64; 7] = [0.8015, 0.6279, 0.4790, 0.3550, 0.2557, 0.1811, 0.1315];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Bisection,
    ClosedForm,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ThresholdResult {
    pub k: usize,
    /// `None` when the family is never detected.
    pub p_star: Option<f64>,
    pub method: Method,
    /// Margin evaluated at `p_star`.
    pub residual: Option<f64>,
}

/// Smallest parameter in `[lo, hi]` where `margin` turns positive, to within `tol`.
///
/// Returns `Some((lo, margin(lo)))` if already positive at `lo`, and `None` if
/// `margin(hi) ≤ 0`. Assumes a single sign change, which holds for margins
/// that are affine in the parameter.
pub fn bisect_sign_change(
    margin: impl Fn(f64) -> Result<f64>,
    lo: f64,
    hi: f64,
    tol: f64,
) -> Result<Option<(f64, f64)>> {
    if !(hi > lo) {
        return Ok(None);
    }
    let positive = |m: f64| m > crate::config::TOLERANCES.detection;
    let m_lo = margin(lo)?;
    if positive(m_lo) {
        return Ok(Some((lo, m_lo)));
    }
    if !positive(margin(hi)?) {
        return Ok(None);
    }
    let (mut a, mut b) = (lo, hi);
    for _ in 0..MAX_ITERATIONS {
        if b - a <= tol {
            break;
        }
        let mid = 0.5 * (a + b);
        if positive(margin(mid)?) {
            b = mid;
        } else {
            a = mid;
        }
    }
    let p = 0.5 * (a + b);
    Ok(Some((p, margin(p)?)))
}

/// Bisects the first parameter slot of `family` over `[0, 1]`, other slots at zero.
pub fn bisection_threshold(family: &NoiseFamily, criterion: &dyn Criterion, k: usize, tol: f64) -> Result<ThresholdResult> {
    if family.slots() == 0 {
        return Ok(ThresholdResult { k, p_star: None, method: Method::Bisection, residual: None });
    }
    let found = bisect_sign_change(|p| Ok(criterion.evaluate(&family.eval(&[p])?, k)?.margin), 0.0, 1.0, tol)?;
    Ok(ThresholdResult { k, p_star: found.map(|f| f.0), method: Method::Bisection, residual: found.map(|f| f.1) })
}

/// Theorem 1 threshold on `p·GHZ_n + (1-p)·I/2^n` with the `ghz_probe`
/// operators: the root of `(2^{k+1}-2)·p/2 = (2^n-2)(1-p)/2^n`.
pub fn ghz_noise_closed_form(n: usize, k: usize) -> Result<f64> {
    if n < 2 || n > 62 {
        return Err(Error::InvalidArgument(format!("n = {n} outside 2..=62")));
    }
    if k < 1 || k > n - 1 {
        return Err(Error::KOutOfRange { k, min: 1, max: n - 1 });
    }
    let c = 1.0 - 2.0 / (1u64 << n) as f64;
    let lead = ((1u64 << k) - 1) as f64;
    Ok(c / (lead + c))
}

/// `N(d-1)(2N-k-2) / (k d^N + N(d-1)(2N-k-2))`.
pub fn example2_closed_form(n: usize, k: usize, d: usize) -> Result<f64> {
    if n < 2 || d < 2 {
        return Err(Error::InvalidArgument(format!("need n >= 2 and d >= 2, got n={n}, d={d}")));
    }
    if k < 1 || k > n {
        return Err(Error::KOutOfRange { k, min: 1, max: n });
    }
    let (nf, kf, df) = (n as f64, k as f64, d as f64);
    let a = nf * (df - 1.0) * (2.0 * nf - kf - 2.0);
    Ok(a / (kf * df.powi(n as i32) + a))
}

/// Which W-family probe a scan uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WProbe {
    /// `x = |0⟩⟨0|`, `ω = {|s⟩⟨0|}`; bisects p along fixed-q lines.
    #[default]
    Standard,
    /// The σ-conjugate of `Standard`; bisects q along fixed-p lines.
    Swapped,
}

/// Which Theorem 2 inequality a scan evaluates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Theorem2Form {
    #[default]
    Summed,
    /// Per-tuple form with max aggregation, used for k = 1 only.
    Pairwise,
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct ScanConfig {
    pub probe: WProbe,
    pub form: Theorem2Form,
    pub tol: Option<f64>,
}

/// One boundary crossing on a grid line.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundaryPoint {
    pub k: usize,
    /// The grid coordinate held fixed (q for `Standard`, p for `Swapped`).
    pub fixed: f64,
    /// The bisected crossing of the other coordinate.
    pub star: Option<f64>,
    pub residual: Option<f64>,
}

/// Theorem 2 boundary of `ρ(p, q)` on `N = n`, local dimension `d`: for each of the
/// `grid + 1` lines `q = j/grid`, the bisected p where the margin turns positive.
pub fn pq_boundary_scan(n: usize, d: usize, k: usize, grid: usize) -> Result<Vec<BoundaryPoint>> {
    pq_boundary_scan_with(n, d, k, grid, ScanConfig::default())
}

pub fn pq_boundary_scan_with(n: usize, d: usize, k: usize, grid: usize, cfg: ScanConfig) -> Result<Vec<BoundaryPoint>> {
    if grid == 0 {
        return Err(Error::InvalidArgument("grid must be positive".into()));
    }
    if k < 1 || k + 1 > n {
        return Err(Error::KOutOfRange { k, min: 1, max: n.saturating_sub(1) });
    }
    if cfg.form == Theorem2Form::Pairwise && k != 1 {
        return Err(Error::InvalidArgument("the pairwise form applies to k = 1 only".into()));
    }
    let family = NoiseFamily::w_pair(n, d)?;
    let (x, omega) = match cfg.probe {
        WProbe::Standard => w_probe(n, d)?,
        WProbe::Swapped => w_probe_swapped(n, d)?,
    };
    let tol = cfg.tol.unwrap_or(DEFAULT_TOL);
    let margin = |p: f64, q: f64| -> Result<f64> {
        let rho = family.eval(&[p, q])?;
        Ok(match cfg.form {
            Theorem2Form::Summed => theorem2_margin(&rho, &x, &omega, k)?.margin,
            Theorem2Form::Pairwise => theorem2_k1_margin(&rho, &x, &omega, Aggregation::Max)?.margin,
        })
    };
    let rows = crate::par::map_range(grid + 1, |j| {
        let fixed = j as f64 / grid as f64;
        let found = match cfg.probe {
            WProbe::Standard => bisect_sign_change(|p| margin(p, fixed), 0.0, 1.0 - fixed, tol)?,
            WProbe::Swapped => bisect_sign_change(|q| margin(fixed, q), 0.0, 1.0 - fixed, tol)?,
        };
        Ok(BoundaryPoint { k, fixed, star: found.map(|f| f.0), residual: found.map(|f| f.1) })
    });
    rows.into_iter().collect()
}

/// Formats with `digits` significant digits; plain decimals for moderate exponents.
pub fn fmt_sig(x: f64, digits: usize) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let sci = format!("{:.*e}", digits.saturating_sub(1), x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if !(-5..15).contains(&exp) {
        return format!("{mantissa}e{exp}");
    }
    let decimals = (digits as i32 - 1 - exp).max(0) as usize;
    format!("{:.*}", decimals, x)
}

fn opt(v: Option<f64>) -> String {
    v.map_or_else(|| "none".to_string(), |x| fmt_sig(x, 10))
}

/// CSV rows `k,q,p_star,margin_residual` (or `k,p,q_star,...` for swapped scans), with header.
pub fn boundary_csv(points: &[BoundaryPoint], probe: WProbe) -> String {
    let mut out = String::from(match probe {
        WProbe::Standard => "k,q,p_star,margin_residual\n",
        WProbe::Swapped => "k,p,q_star,margin_residual\n",
    });
    for pt in points {
        out.push_str(&format!("{},{},{},{}\n", pt.k, fmt_sig(pt.fixed, 10), opt(pt.star), opt(pt.residual)));
    }
    out
}

/// One Theorem 1 threshold row for the GHZ family.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Table1Row {
    pub k: usize,
    pub p_k: Option<f64>,
    pub p_k_closed_form: f64,
    /// Published comparison value, only for n = 8.
    pub p_k_reference: Option<f64>,
}

/// Bisected Theorem 1 thresholds on `p·GHZ_n + (1-p)·I/2^n` for k = 1..n-1.
pub fn table1(n: usize, tol: f64) -> Result<Vec<Table1Row>> {
    let family = NoiseFamily::ghz_white_noise(n)?;
    let (x, y) = crate::criteria::ghz_probe(family.dims())?;
    let crit = crate::criteria::Theorem1 { x, y };
    let rows = crate::par::map_range(n - 1, |i| {
        let k = i + 1;
        let res = bisection_threshold(&family, &crit, k, tol)?;
        Ok(Table1Row {
            k,
            p_k: res.p_star,
            p_k_closed_form: ghz_noise_closed_form(n, k)?,
            p_k_reference: (n == 8).then(|| TABLE1_REFERENCE_CRITERION[i]),
        })
    });
    rows.into_iter().collect()
}

pub fn table1_csv(rows: &[Table1Row]) -> String {
    let mut out = String::from("k,p_k,p_k_closed_form,p_k_prime\n");
    for r in rows {
        out.push_str(&format!("{},{},{},{}\n", r.k, opt(r.p_k), fmt_sig(r.p_k_closed_form, 10), opt(r.p_k_reference)));
    }
    out
}
