//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails.

mod common;

use std::process::ExitCode;
use std::time::{Duration, Instant};

use common::{soundness_run, SOUNDNESS_CONFIGS};
use unentangled::criteria::{w_probe, Theorem1, Theorem2};
use unentangled::oracle::check_equivalence;
use unentangled::states::NoiseFamily;
use unentangled::tensor::SiteDims;
use unentangled::thresholds::{
    bisection_threshold, example2_closed_form, pq_boundary_scan_with, table1, ScanConfig, Theorem2Form, WProbe,
    DEFAULT_TOL, TABLE1_PUBLISHED,
};

type Outcome = Result<String, String>;

const FIG1_GRID: usize = 40;

fn table_one() -> Outcome {
    let start = Instant::now();
    let rows = table1(8, DEFAULT_TOL).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    let mut worst = 0.0f64;
    for (row, want) in rows.iter().zip(TABLE1_PUBLISHED) {
        let got = row.p_k.ok_or(format!("k={} never detected", row.k))?;
        worst = worst.max((got - want).abs());
    }
    if rows.len() != 7 || worst > 1e-4 || elapsed >= Duration::from_secs(5) {
        return Err(format!("rows={} max|Δ|={worst:.2e} time={elapsed:.2?}", rows.len()));
    }
    Ok(format!("7 rows, max|Δ|={worst:.2e}, {elapsed:.2?}"))
}

/// Bisected thresholds along q = 0, indexed by k - 1.
fn example2_thresholds(n: usize, d: usize) -> Result<Vec<f64>, String> {
    let family = NoiseFamily::w_pair(n, d).map_err(|e| e.to_string())?;
    let (x, omega) = w_probe(n, d).map_err(|e| e.to_string())?;
    let crit = Theorem2 { x, omega };
    (1..n)
        .map(|k| {
            bisection_threshold(&family, &crit, k, 1e-9)
                .map_err(|e| e.to_string())?
                .p_star
                .ok_or(format!("N={n} d={d} k={k} never detected"))
        })
        .collect()
}

fn example_two() -> Outcome {
    let start = Instant::now();
    let mut worst = 0.0f64;
    let mut cases = 0;
    for n in [3, 4, 5] {
        for d in [3, 4] {
            for (i, got) in example2_thresholds(n, d)?.into_iter().enumerate() {
                let want = example2_closed_form(n, i + 1, d).map_err(|e| e.to_string())?;
                worst = worst.max((got - want).abs());
                cases += 1;
            }
        }
    }
    let elapsed = start.elapsed();
    if worst > 1e-6 || elapsed >= Duration::from_secs(60) {
        return Err(format!("{cases} cases, max|Δ|={worst:.2e}, {elapsed:.2?}"));
    }
    Ok(format!("{cases} cases, max|Δ|={worst:.2e}, {elapsed:.2?}"))
}

fn oracle_equivalence() -> Outcome {
    let mut checked = 0;
    for dims in [vec![2, 2], vec![2, 3], vec![3, 2]] {
        let dims = SiteDims::new(dims).map_err(|e| e.to_string())?;
        let report = check_equivalence(&dims, 50, 7).map_err(|e| e.to_string())?;
        for c in &report.checks {
            if c.failures > 0 || c.checked == 0 {
                return Err(format!("{:?} {}: {} of {} failed", dims.as_slice(), c.name, c.failures, c.checked));
            }
            checked += c.checked;
        }
    }
    Ok(format!("{checked} term comparisons at 1e-10 relative"))
}

fn soundness() -> Outcome {
    let mut total = 0;
    let mut summary = Vec::new();
    for (n, k) in SOUNDNESS_CONFIGS {
        let (evals, hits, worst) = soundness_run(n, k, 200, 10, 1);
        if hits > 0 {
            return Err(format!("N={n} k={k}: {hits} detections of {evals}"));
        }
        total += evals;
        summary.push(format!("({n},{k}) max rel margin {worst:.3}"));
    }
    Ok(format!("0 detections in {total} evaluations; {}", summary.join(", ")))
}

fn strictly_decreasing(v: &[f64]) -> bool {
    v.windows(2).all(|w| w[1] < w[0])
}

fn monotonicity() -> Outcome {
    let ghz = NoiseFamily::ghz_white_noise(8).map_err(|e| e.to_string())?;
    let (x, y) = unentangled::criteria::ghz_probe(ghz.dims()).map_err(|e| e.to_string())?;
    let t1 = Theorem1 { x, y };
    let ghz_k: Vec<f64> = (1..8)
        .map(|k| bisection_threshold(&ghz, &t1, k, DEFAULT_TOL).ok().and_then(|r| r.p_star).unwrap_or(f64::NAN))
        .collect();
    if !strictly_decreasing(&ghz_k) {
        return Err(format!("GHZ thresholds not strictly decreasing: {ghz_k:?}"));
    }
    let w_k = example2_thresholds(5, 4)?;
    if !strictly_decreasing(&w_k) {
        return Err(format!("W thresholds not strictly decreasing: {w_k:?}"));
    }
    let f = |n, k, d| example2_closed_form(n, k, d).unwrap();
    let mut points = 0;
    for d in 3..=7 {
        for n in 3..=12 {
            for k in 1..n {
                if n < 12 && f(n + 1, k, d) >= f(n, k, d) {
                    return Err(format!("closed form not decreasing in N at N={n} k={k} d={d}"));
                }
                if d < 7 && f(n, k, d + 1) >= f(n, k, d) {
                    return Err(format!("closed form not decreasing in d at N={n} k={k} d={d}"));
                }
                points += 1;
            }
        }
    }
    Ok(format!("GHZ k=1..7, W(5,4) k=1..4, closed form on {points} grid points"))
}

fn fig_one() -> Outcome {
    let (n, d) = (5, 4);
    let scan = |k, probe| {
        pq_boundary_scan_with(n, d, k, FIG1_GRID, ScanConfig { probe, form: Theorem2Form::Summed, tol: Some(1e-9) })
            .map_err(|e| e.to_string())
    };
    let standard: Vec<_> = (1..n).map(|k| scan(k, WProbe::Standard)).collect::<Result<_, _>>()?;
    let swapped: Vec<_> = (1..n).map(|k| scan(k, WProbe::Swapped)).collect::<Result<_, _>>()?;
    let star = |v: Option<f64>| v.unwrap_or(f64::INFINITY);
    let mut worst_anchor = 0.0f64;
    let mut worst_sym = 0.0f64;
    for k in 1..n {
        let curve = &standard[k - 1];
        if k > 1 {
            for (lo, hi) in standard[k - 2].iter().zip(curve) {
                if star(hi.star) > star(lo.star) + 1e-9 {
                    return Err(format!("nesting fails between k={} and k={k} at q={}", k - 1, hi.fixed));
                }
            }
        }
        let anchor = curve[0].star.ok_or(format!("k={k}: no crossing on q=0"))?;
        worst_anchor = worst_anchor.max((anchor - example2_closed_form(n, k, d).unwrap()).abs());
        for (a, b) in curve.iter().zip(&swapped[k - 1]) {
            match (a.star, b.star) {
                (Some(p), Some(q)) => worst_sym = worst_sym.max((p - q).abs()),
                (None, None) => {}
                _ => return Err(format!("k={k}: crossing exists on only one side at {}", a.fixed)),
            }
        }
    }
    if worst_anchor > 1e-6 || worst_sym > 1e-6 {
        return Err(format!("anchor max|Δ|={worst_anchor:.2e}, symmetry max|Δ|={worst_sym:.2e}"));
    }
    Ok(format!("grid {FIG1_GRID}, nested, anchor max|Δ|={worst_anchor:.2e}, p<->q max|Δ|={worst_sym:.2e}"))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 6] = [
        ("table1_reproduction", table_one),
        ("example2_formula", example_two),
        ("oracle_equivalence", oracle_equivalence),
        ("soundness_suite", soundness),
        ("monotonicity", monotonicity),
        ("fig1_properties", fig_one),
    ];
    let mut failed = 0;
    for (name, run) in criteria {
        let start = Instant::now();
        let outcome = std::panic::catch_unwind(run).unwrap_or_else(|_| Err("panicked".into()));
        match outcome {
            Ok(detail) => println!("PASS {name}: {detail} [{:.2?}]", start.elapsed()),
            Err(detail) => {
                failed += 1;
                println!("FAIL {name}: {detail} [{:.2?}]", start.elapsed());
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
