mod common;

use common::{soundness_run, SOUNDNESS_CONFIGS};
use unentangled::oracle::{check_equivalence, verify_proof_chain};
use unentangled::tensor::SiteDims;

fn assert_clean(report: &unentangled::oracle::CheckReport) {
    for c in &report.checks {
        assert!(c.checked > 0, "{} never ran", c.name);
        assert_eq!(c.failures, 0, "{}: {} failures, worst {:e}", c.name, c.failures, c.worst);
    }
}

#[test]
fn factorized_terms_match_doubled_space() {
    for (dims, trials) in [(vec![2, 2], 20), (vec![2, 3], 20), (vec![3, 2], 20), (vec![3, 3], 3), (vec![2, 2, 2], 10)] {
        let dims = SiteDims::new(dims).unwrap();
        assert_clean(&check_equivalence(&dims, trials, 11).unwrap());
    }
}

#[test]
fn heterogeneous_theorem1_terms_match() {
    let dims = SiteDims::new(vec![2, 3, 2]).unwrap();
    let report = check_equivalence(&dims, 5, 3).unwrap();
    assert!(report.checks.iter().any(|c| c.name.starts_with("oracle.t1")));
    for c in report.checks.iter().filter(|c| c.name.starts_with("oracle.t1")) {
        assert_eq!(c.failures, 0, "{}", c.name);
    }
}

#[test]
fn oracle_refuses_large_spaces() {
    let dims = SiteDims::qubits(7).unwrap();
    assert!(check_equivalence(&dims, 1, 0).is_err());
}

#[test]
fn proof_chain_holds() {
    let report = verify_proof_chain(100, 2024).unwrap();
    assert_eq!(report.trials, 100);
    assert_clean(&report);
    assert!(report.passed());
}

#[test]
fn proof_chain_is_deterministic() {
    assert_eq!(verify_proof_chain(12, 5).unwrap(), verify_proof_chain(12, 5).unwrap());
}

#[test]
fn no_false_positives_on_small_runs() {
    for (n, k) in SOUNDNESS_CONFIGS {
        let (evals, hits, worst) = soundness_run(n, k, 20, 3, 99);
        assert_eq!(evals, 20 * 3 * 2);
        assert_eq!(hits, 0, "N={n} k={k}: worst relative margin {worst:e}");
    }
}
