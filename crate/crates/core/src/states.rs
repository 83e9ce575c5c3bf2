//! Example states, white-noise families and random test ensembles.

use num_complex::Complex64;
use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp1, StandardNormal};

use crate::config::TOLERANCES;
use crate::error::{Error, Result};
use crate::tensor::{ComplexMatrix, DensityMatrix, ProductOperator, PureState, SiteDims, ONE, ZERO};

/// `(|0⟩^⊗n + |1⟩^⊗n)/√2` on n qubits.
pub fn ghz(n: usize) -> Result<PureState> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!("GHZ needs n >= 2, got {n}")));
    }
    let dims = SiteDims::qubits(n)?;
    let mut amps = vec![ZERO; dims.total()];
    let h = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    amps[0] = h;
    amps[dims.total() - 1] = h;
    PureState::new(dims, amps)
}

/// Qudit W state: equal superposition of the `n(d-1)` basis states with
/// exactly one site excited to a level in `1..d` and every other site at 0.
pub fn w_state(n: usize, d: usize) -> Result<PureState> {
    if n < 2 || d < 2 {
        return Err(Error::InvalidArgument(format!("W state needs n >= 2 and d >= 2, got n={n}, d={d}")));
    }
    let dims = SiteDims::uniform(n, d)?;
    let amp = Complex64::new(1.0 / ((n * (d - 1)) as f64).sqrt(), 0.0);
    let mut amps = vec![ZERO; dims.total()];
    for stride in dims.strides() {
        for level in 1..d {
            amps[level * stride] = amp;
        }
    }
    PureState::new(dims, amps)
}

/// Cyclic shift `σ|j⟩ = |j+1 mod d⟩`.
pub fn shift_sigma(d: usize) -> Result<ComplexMatrix> {
    if d < 2 {
        return Err(Error::InvalidArgument(format!("shift needs d >= 2, got {d}")));
    }
    Ok(ComplexMatrix::from_fn(d, d, |r, c| if r == (c + 1) % d { ONE } else { ZERO }))
}

/// `σ^⊗n |W⟩`.
pub fn w_tilde(n: usize, d: usize) -> Result<PureState> {
    let w = w_state(n, d)?;
    let shift = ProductOperator::uniform(w.dims(), &shift_sigma(d)?)?;
    let amps = shift.apply(w.amplitudes())?;
    PureState::new(w.dims().clone(), amps)
}

/// `Σ w_k |ψ_k⟩⟨ψ_k| + (1 - Σ w_k) I/D`.
pub fn mix(signals: &[(f64, &PureState)], dims: &SiteDims) -> Result<DensityMatrix> {
    let mut total = 0.0;
    for (w, psi) in signals {
        if !w.is_finite() || *w < 0.0 {
            return Err(Error::InvalidWeights(format!("weight {w} is negative or non-finite")));
        }
        dims.check(psi.dims(), "mix signal")?;
        total += w;
    }
    if total > 1.0 + TOLERANCES.equality {
        return Err(Error::InvalidWeights(format!("weights sum to {total} > 1")));
    }
    let d = dims.total();
    let noise = (1.0 - total).max(0.0) / d as f64;
    // Sparse amplitude lists keep the W and GHZ families cheap at D = 1024.
    let sparse: Vec<(f64, Vec<(usize, Complex64)>)> = signals
        .iter()
        .filter(|(w, _)| *w > 0.0)
        .map(|(w, psi)| {
            let nz = psi.amplitudes().iter().copied().enumerate().filter(|(_, a)| *a != ZERO).collect();
            (*w, nz)
        })
        .collect();
    let mut data = vec![ZERO; d * d];
    for (w, nz) in &sparse {
        for &(r, a) in nz {
            let row = &mut data[r * d..(r + 1) * d];
            let wa = a * *w;
            for &(c, b) in nz {
                row[c] += wa * b.conj();
            }
        }
    }
    for i in 0..d {
        data[i * d + i] += Complex64::new(noise, 0.0);
    }
    let mat = ComplexMatrix::new(d, d, data)?;
    Ok(DensityMatrix::from_parts(dims.clone(), mat))
}

/// Convex family `ρ(params) = Σ_s params[s] |ψ_s⟩⟨ψ_s| + (1 - Σ params) I/D`.
#[derive(Debug, Clone)]
pub struct NoiseFamily {
    dims: SiteDims,
    signals: Vec<PureState>,
    label: String,
}

impl NoiseFamily {
    pub fn new(dims: SiteDims, signals: Vec<PureState>, label: impl Into<String>) -> Result<Self> {
        for s in &signals {
            dims.check(s.dims(), "noise family signal")?;
        }
        Ok(NoiseFamily { dims, signals, label: label.into() })
    }

    /// `p |G_n⟩⟨G_n| + (1-p) I/2^n`.
    pub fn ghz_white_noise(n: usize) -> Result<Self> {
        let g = ghz(n)?;
        Self::new(g.dims().clone(), vec![g], format!("ghz{n}+white"))
    }

    /// `p |W⟩⟨W| + q |W̃⟩⟨W̃| + (1-p-q) I/d^n`.
    pub fn w_pair(n: usize, d: usize) -> Result<Self> {
        let w = w_state(n, d)?;
        let wt = w_tilde(n, d)?;
        Self::new(w.dims().clone(), vec![w, wt], format!("w{n}x{d}+wtilde+white"))
    }

    /// Only white noise; every parameter slot is unused.
    pub fn white_noise(dims: SiteDims) -> Self {
        NoiseFamily { dims, signals: Vec::new(), label: "white".into() }
    }

    pub fn dims(&self) -> &SiteDims {
        &self.dims
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn slots(&self) -> usize {
        self.signals.len()
    }

    pub fn signals(&self) -> &[PureState] {
        &self.signals
    }

    /// Evaluate at `params`; missing trailing parameters are zero, extra ones must be zero.
    pub fn eval(&self, params: &[f64]) -> Result<DensityMatrix> {
        if params.iter().skip(self.signals.len()).any(|&p| p != 0.0) {
            return Err(Error::InvalidArgument(format!("family {} has {} parameter slots", self.label, self.slots())));
        }
        let pairs: Vec<(f64, &PureState)> = params.iter().copied().zip(&self.signals).collect();
        mix(&pairs, &self.dims)
    }
}

/// A partition of the sites `0..n` into disjoint nonempty blocks.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Partition {
    blocks: Vec<Vec<usize>>,
    n: usize,
}

impl Partition {
    pub fn new(n: usize, mut blocks: Vec<Vec<usize>>) -> Result<Self> {
        let mut seen = vec![false; n];
        for b in &mut blocks {
            if b.is_empty() {
                return Err(Error::InvalidPartition("empty block".into()));
            }
            b.sort_unstable();
            for &s in b.iter() {
                if s >= n {
                    return Err(Error::InvalidPartition(format!("site {s} out of range for {n} sites")));
                }
                if std::mem::replace(&mut seen[s], true) {
                    return Err(Error::InvalidPartition(format!("site {s} appears twice")));
                }
            }
        }
        if let Some(missing) = seen.iter().position(|&v| !v) {
            return Err(Error::InvalidPartition(format!("site {missing} not covered")));
        }
        blocks.sort();
        Ok(Partition { blocks, n })
    }

    /// Singletons at `singles` plus one block holding the remaining sites.
    pub fn k_unentangled(n: usize, singles: &[usize]) -> Result<Self> {
        let mut blocks: Vec<Vec<usize>> = singles.iter().map(|&s| vec![s]).collect();
        let rest: Vec<usize> = (0..n).filter(|s| !singles.contains(s)).collect();
        if rest.is_empty() {
            return Err(Error::InvalidPartition("no sites left for the entangled block".into()));
        }
        blocks.push(rest);
        Self::new(n, blocks)
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Bitmasks of every nonempty proper union of blocks.
    pub fn block_unions(&self) -> Vec<u64> {
        let masks: Vec<u64> = self.blocks.iter().map(|b| b.iter().fold(0u64, |m, &s| m | 1 << s)).collect();
        let full = (1u64 << self.n) - 1;
        (1..(1u64 << masks.len()) - 1)
            .map(|sel| masks.iter().enumerate().filter(|(i, _)| sel >> i & 1 == 1).fold(0, |m, (_, b)| m | b))
            .filter(|&m| m != 0 && m != full)
            .collect()
    }

    /// Block index holding each site.
    pub fn block_of(&self) -> Vec<usize> {
        let mut out = vec![0; self.n];
        for (i, b) in self.blocks.iter().enumerate() {
            for &s in b {
                out[s] = i;
            }
        }
        out
    }
}

/// Gaussian complex vector normalized to unit length.
pub fn random_vector<R: Rng + ?Sized>(len: usize, rng: &mut R) -> Vec<Complex64> {
    loop {
        let v: Vec<Complex64> = (0..len)
            .map(|_| Complex64::new(StandardNormal.sample(rng), StandardNormal.sample(rng)))
            .collect();
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm > 1e-12 {
            return v.into_iter().map(|z| z / norm).collect();
        }
    }
}

pub fn random_pure_state<R: Rng + ?Sized>(dims: &SiteDims, rng: &mut R) -> PureState {
    PureState::normalized(dims.clone(), random_vector(dims.total(), rng)).expect("nonzero random vector")
}

/// Flat-simplex weights (normalized unit exponentials).
pub fn random_simplex<R: Rng + ?Sized>(len: usize, rng: &mut R) -> Vec<f64> {
    let e: Vec<f64> = (0..len).map(|_| Exp1.sample(rng)).collect();
    let s: f64 = e.iter().sum();
    e.into_iter().map(|x| x / s).collect()
}

/// Mixture of `rank` random pure states with flat-simplex weights; generically full rank
/// once `rank >= D`.
pub fn random_density<R: Rng + ?Sized>(dims: &SiteDims, rank: usize, rng: &mut R) -> Result<DensityMatrix> {
    let states: Vec<PureState> = (0..rank.max(1)).map(|_| random_pure_state(dims, rng)).collect();
    let weights = random_simplex(states.len(), rng);
    let pairs: Vec<(f64, &PureState)> = weights.iter().copied().zip(&states).collect();
    mix(&pairs, dims)
}

/// Product of per-block states. Each block's vector is indexed big-endian over its sorted sites.
pub fn block_product_state(dims: &SiteDims, partition: &Partition, block_states: &[Vec<Complex64>]) -> Result<PureState> {
    if partition.n() != dims.n() || block_states.len() != partition.blocks().len() {
        return Err(Error::DimensionMismatch("partition does not match dims".into()));
    }
    let block_of = partition.block_of();
    // Position of each site inside its block, as a place value.
    let mut place = vec![0usize; dims.n()];
    for (b, sites) in partition.blocks().iter().enumerate() {
        let mut p = 1;
        for &s in sites.iter().rev() {
            place[s] = p;
            p *= dims.dim(s);
        }
        if block_states[b].len() != p {
            return Err(Error::DimensionMismatch(format!("block {b} state has length {}, expected {p}", block_states[b].len())));
        }
    }
    let amps = (0..dims.total())
        .map(|idx| {
            let digits = dims.digits(idx);
            let mut local = vec![0usize; block_states.len()];
            for (s, &b) in digits.iter().enumerate() {
                local[block_of[s]] += b * place[s];
            }
            local.iter().enumerate().map(|(blk, &i)| block_states[blk][i]).product()
        })
        .collect();
    PureState::new(dims.clone(), amps)
}

/// One component of a state with at least k unentangled particles.
#[derive(Debug, Clone)]
pub struct KUnentangledComponent {
    pub weight: f64,
    pub state: PureState,
    pub partition: Partition,
}

/// A mixture with at least k unentangled particles together with its decomposition.
#[derive(Debug, Clone)]
pub struct KUnentangledMixture {
    pub rho: DensityMatrix,
    pub k: usize,
    pub components: Vec<KUnentangledComponent>,
}

/// Draws `terms` pure states, each `k` random single-site states times one random
/// `(N-k)`-site state on a uniformly drawn partition, mixed with flat-simplex weights.
pub fn sample_k_unentangled<R: Rng + ?Sized>(
    dims: &SiteDims,
    k: usize,
    terms: usize,
    rng: &mut R,
) -> Result<KUnentangledMixture> {
    let n = dims.n();
    if k < 1 || k + 1 > n {
        return Err(Error::KOutOfRange { k, min: 1, max: n - 1 });
    }
    if terms == 0 {
        return Err(Error::InvalidArgument("need at least one mixture term".into()));
    }
    let mut components = Vec::with_capacity(terms);
    for _ in 0..terms {
        let singles = index::sample(rng, n, k).into_vec();
        let partition = Partition::k_unentangled(n, &singles)?;
        let block_states: Vec<Vec<Complex64>> = partition
            .blocks()
            .iter()
            .map(|b| random_vector(b.iter().map(|&s| dims.dim(s)).product(), rng))
            .collect();
        let state = block_product_state(dims, &partition, &block_states)?;
        components.push(KUnentangledComponent { weight: 0.0, state, partition });
    }
    let weights = random_simplex(terms, rng);
    for (c, w) in components.iter_mut().zip(&weights) {
        c.weight = *w;
    }
    let pairs: Vec<(f64, &PureState)> = components.iter().map(|c| (c.weight, &c.state)).collect();
    // Flat-simplex weights sum to 1 up to rounding; renormalized trace stays within tolerance.
    let rho = mix(&pairs, dims)?;
    Ok(KUnentangledMixture { rho, k, components })
}

/// Seeded convenience wrapper around [`sample_k_unentangled`].
pub fn random_k_unentangled(dims: &SiteDims, k: usize, terms: usize, seed: u64) -> Result<DensityMatrix> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok(sample_k_unentangled(dims, k, terms, &mut rng)?.rho)
}
