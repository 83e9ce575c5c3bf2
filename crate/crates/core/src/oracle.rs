//! Literal doubled-space evaluation of the two-copy traces, for validating the
//! factorized fast path at small dimension.
//!
//! Everything here assembles `ρ⊗ρ` and the doubled operators explicitly. The
//! local permutations `P_α` are built as permutation matrices on the doubled
//! space, exchanging the digits of the sites in `α` between the two copies.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::config::DEFAULT_ORACLE_DIM_CAP;
use crate::criteria::{theorem1_margin, theorem2_margin, PermutationAction};
use crate::error::{Error, Result};
use crate::states::{random_density, random_vector, sample_k_unentangled, KUnentangledComponent, KUnentangledMixture};
use crate::tensor::{cross_trace, kron_with_cap, sandwich_trace, ComplexMatrix, DensityMatrix, ProductOperator, PureState, SiteDims, ONE, ZERO};

fn check_cap(rho: &DensityMatrix) -> Result<usize> {
    let d = rho.dims().total();
    if d > DEFAULT_ORACLE_DIM_CAP {
        return Err(Error::DimensionCap { dim: d, cap: DEFAULT_ORACLE_DIM_CAP });
    }
    Ok(d)
}

fn doubled_cap(d: usize) -> usize {
    d * d
}

/// `ρ ⊗ ρ`.
pub fn doubled_state(rho: &DensityMatrix) -> Result<ComplexMatrix> {
    let d = check_cap(rho)?;
    kron_with_cap(rho.matrix(), rho.matrix(), doubled_cap(d))
}

/// The permutation matrix exchanging the sites in `alpha` between two copies.
pub fn swap_matrix(dims: &SiteDims, alpha: PermutationAction) -> Result<ComplexMatrix> {
    let d = dims.total();
    if d > DEFAULT_ORACLE_DIM_CAP {
        return Err(Error::DimensionCap { dim: d, cap: DEFAULT_ORACLE_DIM_CAP });
    }
    if alpha.n() != dims.n() {
        return Err(Error::DimensionMismatch("subset size does not match dims".into()));
    }
    let dd = d * d;
    let mut data = vec![ZERO; dd * dd];
    for a in 0..d {
        for b in 0..d {
            let (mut da, mut db) = (dims.digits(a), dims.digits(b));
            for s in alpha.sites() {
                std::mem::swap(&mut da[s], &mut db[s]);
            }
            let from = a * d + b;
            let to = dims.index(&da) * d + dims.index(&db);
            data[to * dd + from] = ONE;
        }
    }
    ComplexMatrix::new(dd, dd, data)
}

/// `Tr[Z† M Z]`.
fn sandwich_dense(z: &ComplexMatrix, m: &ComplexMatrix) -> Result<Complex64> {
    let mz = m.matmul(z)?;
    Ok(z.entries().iter().zip(mz.entries()).map(|(a, b)| a.conj() * b).sum())
}

fn doubled_operator(a: &ProductOperator, b: &ProductOperator) -> Result<ComplexMatrix> {
    let (a, b) = (a.assemble()?, b.assemble()?);
    let cap = a.rows() * b.rows();
    kron_with_cap(&a, &b, cap)
}

/// `Tr[(X†⊗Y†) P_α† ρ⊗² P_α (X⊗Y)]`, with `P_α` the doubled-space permutation matrix.
pub fn doubled_term(rho: &DensityMatrix, x: &ProductOperator, y: &ProductOperator, alpha: PermutationAction) -> Result<Complex64> {
    rho.dims().check(x.dims(), "oracle x")?;
    rho.dims().check(y.dims(), "oracle y")?;
    let r = doubled_state(rho)?;
    let p = swap_matrix(rho.dims(), alpha)?;
    let conj = p.dagger().matmul(&r)?.matmul(&p)?;
    sandwich_dense(&doubled_operator(x, y)?, &conj)
}

/// The global term under the operator-action reading: `Tr[(X†⊗Y†) ρ⊗² (Y⊗X)]`.
pub fn doubled_global_lhs(rho: &DensityMatrix, x: &ProductOperator, y: &ProductOperator) -> Result<Complex64> {
    rho.dims().check(x.dims(), "oracle x")?;
    rho.dims().check(y.dims(), "oracle y")?;
    let r = doubled_state(rho)?;
    let left = doubled_operator(x, y)?.dagger();
    let right = doubled_operator(y, x)?;
    Ok(left.matmul(&r)?.matmul(&right)?.trace())
}

/// The global term with `P` read as the swap matrix: `Tr[(X†⊗Y†) ρ⊗² P (X⊗Y)]`.
/// For pure states this is `⟨ψ|YY†|ψ⟩⟨ψ|XX†|ψ⟩`, not `|⟨ψ|YX†|ψ⟩|²`.
#[cfg(any(test, feature = "swap-matrix-reading"))]
pub fn swap_matrix_global_lhs(rho: &DensityMatrix, x: &ProductOperator, y: &ProductOperator) -> Result<Complex64> {
    let r = doubled_state(rho)?;
    let p = swap_matrix(rho.dims(), PermutationAction::full(rho.dims().n()))?;
    let z = doubled_operator(x, y)?;
    Ok(z.dagger().matmul(&r)?.matmul(&p)?.matmul(&z)?.trace())
}

// ---------------------------------------------------------------------------
// Reports

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckTally {
    pub name: String,
    pub checked: usize,
    pub failures: usize,
    /// Worst observed slack (or negated relative error for equalities).
    pub worst: f64,
}

impl CheckTally {
    fn new(name: &str) -> Self {
        CheckTally { name: name.into(), checked: 0, failures: 0, worst: f64::INFINITY }
    }

    fn merge(&mut self, other: &CheckTally) {
        self.checked += other.checked;
        self.failures += other.failures;
        self.worst = self.worst.min(other.worst);
    }

    /// Inequality step: `slack ≥ -tol·max(1, scale)`.
    fn slack(&mut self, slack: f64, scale: f64) {
        self.checked += 1;
        let rel = slack / scale.abs().max(1.0);
        self.worst = self.worst.min(rel);
        if rel < -1e-10 || !slack.is_finite() {
            self.failures += 1;
        }
    }

    /// Equality: `|a - b| ≤ tol·max(1, |b|)`.
    fn equal(&mut self, a: f64, b: f64) {
        self.slack(-(a - b).abs(), b);
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    pub trials: usize,
    pub seed: u64,
    pub checks: Vec<CheckTally>,
}

impl CheckReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.failures == 0 && c.checked > 0)
    }

    pub fn failures(&self) -> usize {
        self.checks.iter().map(|c| c.failures).sum()
    }

    fn absorb(trials: usize, seed: u64, per_trial: Vec<Vec<CheckTally>>) -> Self {
        let mut checks: Vec<CheckTally> = Vec::new();
        for tallies in per_trial {
            for t in tallies {
                match checks.iter_mut().find(|c| c.name == t.name) {
                    Some(c) => c.merge(&t),
                    None => checks.push(t),
                }
            }
        }
        CheckReport { trials, seed, checks }
    }
}

fn tally<'a>(tallies: &'a mut Vec<CheckTally>, name: &str) -> &'a mut CheckTally {
    if let Some(i) = tallies.iter().position(|t| t.name == name) {
        return &mut tallies[i];
    }
    tallies.push(CheckTally::new(name));
    tallies.last_mut().unwrap()
}

fn trial_rng(seed: u64, trial: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial as u64);
    rng
}

pub(crate) fn random_factor<R: Rng + ?Sized>(d: usize, rng: &mut R) -> ComplexMatrix {
    ComplexMatrix::new(d, d, random_vector(d * d, rng)).expect("finite random factor")
}

pub(crate) fn random_probe<R: Rng + ?Sized>(dims: &SiteDims, rng: &mut R) -> ProductOperator {
    let f = dims.as_slice().iter().map(|&d| random_factor(d, rng)).collect();
    ProductOperator::new(dims.clone(), f).expect("shapes match dims")
}

fn parse_tuple(label: &str) -> Option<(usize, usize, usize, usize)> {
    let inner = label.split_once('[')?.1.strip_suffix(']')?;
    let mut v = inner.split(',').map(|kv| kv.split_once('=').and_then(|(_, n)| n.parse().ok()));
    Some((v.next()??, v.next()??, v.next()??, v.next()??))
}

// ---------------------------------------------------------------------------
// Oracle equivalence

/// Compares the production criterion reports with the literal doubled-space
/// evaluation on `trials` random instances of the given site dimensions.
pub fn check_equivalence(dims: &SiteDims, trials: usize, seed: u64) -> Result<CheckReport> {
    if dims.total() > DEFAULT_ORACLE_DIM_CAP {
        return Err(Error::DimensionCap { dim: dims.total(), cap: DEFAULT_ORACLE_DIM_CAP });
    }
    let per_trial = crate::par::map_range(trials, |trial| equivalence_trial(dims, seed, trial));
    let per_trial = per_trial.into_iter().collect::<Result<Vec<_>>>()?;
    Ok(CheckReport::absorb(trials, seed, per_trial))
}

fn equivalence_trial(dims: &SiteDims, seed: u64, trial: usize) -> Result<Vec<CheckTally>> {
    let mut rng = trial_rng(seed, trial);
    let mut out = Vec::new();
    let n = dims.n();
    let rank = 1 + rng.random_range(0..dims.total());
    let rho = random_density(dims, rank, &mut rng)?;
    let (x, y) = (random_probe(dims, &mut rng), random_probe(dims, &mut rng));

    let report = theorem1_margin(&rho, &x, &y, 1)?;
    let global = doubled_global_lhs(&rho, &x, &y)?;
    tally(&mut out, "oracle.t1_global").equal(report.lhs * report.lhs, global.re);
    tally(&mut out, "oracle.t1_global_real").equal(global.im, 0.0);
    for (alpha, term) in PermutationAction::nonempty_proper(n).zip(&report.terms) {
        let lit = doubled_term(&rho, &x, &y, alpha)?;
        tally(&mut out, "oracle.t1_local").equal(term.value * term.value, lit.re);
        tally(&mut out, "oracle.t1_local_real").equal(lit.im, 0.0);
    }

    if let Some(d) = dims.common_dim() {
        let probe = random_probe(dims, &mut rng);
        let t = 1 + rng.random_range(0..2usize);
        let omega: Vec<ComplexMatrix> = (0..t).map(|_| random_factor(d, &mut rng)).collect();
        let report2 = theorem2_margin(&rho, &probe, &omega, 1)?;
        let sub = |i: usize, s: usize| probe.with_factor(i, &omega[s]);
        for term in &report2.terms {
            let (kind, _) = term.label.split_once('[').unwrap_or((&term.label, ""));
            match kind {
                "lhs" | "perm" => {
                    let (i, j, s, tt) = parse_tuple(&term.label).expect("tuple label");
                    let (xi, xj) = (sub(i, s)?, sub(j, tt)?);
                    if kind == "lhs" {
                        tally(&mut out, "oracle.t2_global").equal(term.value * term.value, doubled_global_lhs(&rho, &xi, &xj)?.re);
                    } else {
                        let lit = doubled_term(&rho, &xi, &xj, PermutationAction::single(n, i)?)?;
                        tally(&mut out, "oracle.t2_local").equal(term.value * term.value, lit.re);
                    }
                }
                "diag" => {
                    let body = term.label.trim_start_matches("diag[").trim_end_matches(']');
                    let mut it = body.split(',').map(|kv| kv.split_once('=').and_then(|(_, v)| v.parse::<usize>().ok()));
                    let (i, s) = (it.next().flatten().unwrap(), it.next().flatten().unwrap());
                    let xi = sub(i, s)?;
                    let none = PermutationAction::new(n, &[])?;
                    let lit = doubled_term(&rho, &xi, &xi, none)?;
                    tally(&mut out, "oracle.t2_plain").equal(term.value * term.value, lit.re);
                }
                _ => {}
            }
        }
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// Proof chain

const CHAIN_SHAPES: [(usize, usize); 4] = [(2, 2), (2, 3), (3, 2), (3, 3)];
const CHAIN_TERMS: [usize; 3] = [1, 5, 20];

/// Numerically checks every chained step of both proofs on random mixtures
/// with a known decomposition into pure states with ≥ k unentangled particles.
/// Every tenth trial is a rank-one state plus 1e-13 white noise; every tenth
/// (offset one) is a single fully product state.
pub fn verify_proof_chain(n_trials: usize, seed: u64) -> Result<CheckReport> {
    let per_trial = crate::par::map_range(n_trials, |trial| chain_trial(seed, trial));
    let per_trial = per_trial.into_iter().collect::<Result<Vec<_>>>()?;
    Ok(CheckReport::absorb(n_trials, seed, per_trial))
}

fn near_degenerate(mix: &KUnentangledMixture, eps: f64) -> Result<KUnentangledMixture> {
    let first = &mix.components[0];
    let dims = first.state.dims().clone();
    let d = dims.total();
    let n = dims.n();
    let mut components = vec![KUnentangledComponent { weight: 1.0 - eps, ..first.clone() }];
    // I/D is the uniform mixture of product basis states.
    let singletons = crate::states::Partition::new(n, (0..n).map(|s| vec![s]).collect())?;
    for b in 0..d {
        let state = PureState::basis(dims.clone(), &dims.digits(b))?;
        components.push(KUnentangledComponent { weight: eps / d as f64, state, partition: singletons.clone() });
    }
    let pairs: Vec<(f64, &PureState)> = components.iter().map(|c| (c.weight, &c.state)).collect();
    let rho = crate::states::mix(&pairs, &dims)?;
    Ok(KUnentangledMixture { rho, k: mix.k, components })
}

fn chain_trial(seed: u64, trial: usize) -> Result<Vec<CheckTally>> {
    let mut rng = trial_rng(seed, trial);
    let (n, d) = CHAIN_SHAPES[rng.random_range(0..CHAIN_SHAPES.len())];
    let dims = SiteDims::uniform(n, d)?;
    let (k, terms) = match trial % 10 {
        1 => (n - 1, 1),
        _ => (rng.random_range(1..n), CHAIN_TERMS[rng.random_range(0..CHAIN_TERMS.len())]),
    };
    let mut sample = sample_k_unentangled(&dims, k, terms, &mut rng)?;
    if trial % 10 == 0 {
        sample = near_degenerate(&sample, 1e-13)?;
    }
    let x = random_probe(&dims, &mut rng);
    let y = random_probe(&dims, &mut rng);
    let t = 1 + rng.random_range(0..2usize);
    let omega: Vec<ComplexMatrix> = (0..t).map(|_| random_factor(d, &mut rng)).collect();

    let mut out = Vec::new();
    chain_theorem1(&sample, &x, &y, &mut out)?;
    chain_theorem2(&sample, &x, &omega, &mut out)?;
    Ok(out)
}

fn chain_theorem1(sample: &KUnentangledMixture, x: &ProductOperator, y: &ProductOperator, out: &mut Vec<CheckTally>) -> Result<()> {
    let k = sample.k;
    let n = sample.rho.dims().n();
    let scale = ((1u64 << (k + 1)) - 2) as f64;
    let mut weighted_lhs = 0.0;
    let alphas: Vec<PermutationAction> = PermutationAction::nonempty_proper(n).collect();
    let mut mixed_a = vec![0.0; alphas.len()];
    let mut mixed_b = vec![0.0; alphas.len()];
    let mut weighted_root = vec![0.0; alphas.len()];

    for c in &sample.components {
        let rho = c.state.density();
        let cross = cross_trace(&rho, x, y)?.norm();
        let (sx, sy) = (sandwich_trace(&rho, x)?, sandwich_trace(&rho, y)?);
        tally(out, "th1.cauchy_schwarz").slack(sx * sy - cross * cross, sx * sy);
        for mask in c.partition.block_unions() {
            let alpha = PermutationAction::from_mask(n, mask)?;
            let term = crate::criteria::theorem1_term(&rho, x, y, alpha)?;
            tally(out, "th1.block_union_identity").equal(term * term, sx * sy);
        }
        let mut sum = 0.0;
        for (idx, &alpha) in alphas.iter().enumerate() {
            let (a, b) = crate::criteria::swap_on_subset(x, y, alpha)?;
            let (sa, sb) = (sandwich_trace(&rho, &a)?, sandwich_trace(&rho, &b)?);
            sum += (sa * sb).sqrt();
            mixed_a[idx] += c.weight * sa;
            mixed_b[idx] += c.weight * sb;
            weighted_root[idx] += c.weight * (sa * sb).sqrt();
        }
        tally(out, "th1.pure_inequality").slack(sum - scale * cross, sum);
        weighted_lhs += c.weight * cross;
    }
    let lhs = cross_trace(&sample.rho, x, y)?.norm();
    tally(out, "th1.triangle").slack(weighted_lhs - lhs, lhs);
    for idx in 0..alphas.len() {
        let bound = (mixed_a[idx] * mixed_b[idx]).sqrt();
        tally(out, "th1.mixture_cauchy_schwarz").slack(bound - weighted_root[idx], bound);
    }
    let report = theorem1_margin(&sample.rho, x, y, k)?;
    tally(out, "th1.mixed_inequality").slack(-report.margin, report.rhs);
    Ok(())
}

fn chain_theorem2(sample: &KUnentangledMixture, x: &ProductOperator, omega: &[ComplexMatrix], out: &mut Vec<CheckTally>) -> Result<()> {
    let k = sample.k;
    let n = sample.rho.dims().n();
    let mut weighted_lhs = 0.0;
    let mut weighted_bound = 0.0;
    for c in &sample.components {
        let rho = c.state.density();
        let r = theorem2_margin(&rho, x, omega, k)?;
        tally(out, "th2.pure_inequality").slack(-r.margin, r.rhs);
        weighted_lhs += c.weight * r.lhs;
        weighted_bound += c.weight * r.rhs;
    }
    let mixed = theorem2_margin(&sample.rho, x, omega, k)?;
    tally(out, "th2.triangle").slack(weighted_lhs - mixed.lhs, mixed.lhs);
    tally(out, "th2.mixture_cauchy_schwarz").slack(mixed.rhs - weighted_bound, mixed.rhs);

    // Per tuple: sqrt(Σp a · Σp b) ≥ Σp sqrt(a b) for a = Tr[X†ρX], b = Tr[X_ij†ρX_ij].
    for i in 0..n {
        for j in (0..n).filter(|&j| j != i) {
            for s in 0..omega.len() {
                for t in 0..omega.len() {
                    let xij = crate::criteria::two_site_substituted_operator(x, (i, &omega[s]), (j, &omega[t]))?;
                    let (mut ma, mut mb, mut root) = (0.0, 0.0, 0.0);
                    for c in &sample.components {
                        let rho = c.state.density();
                        let (a, b) = (sandwich_trace(&rho, x)?, sandwich_trace(&rho, &xij)?);
                        ma += c.weight * a;
                        mb += c.weight * b;
                        root += c.weight * (a * b).sqrt();
                    }
                    let bound = (ma * mb).sqrt();
                    tally(out, "th2.tuple_cauchy_schwarz").slack(bound - root, bound);
                }
            }
        }
    }
    tally(out, "th2.mixed_inequality").slack(-mixed.margin, mixed.rhs);
    Ok(())
}
