#![allow(dead_code)]

use rand::Rng;
use unentangled::states::random_vector;
use unentangled::tensor::{ComplexMatrix, ProductOperator, SiteDims};

pub fn random_factor<R: Rng>(d: usize, rng: &mut R) -> ComplexMatrix {
    ComplexMatrix::new(d, d, random_vector(d * d, rng)).unwrap()
}

pub fn random_probe<R: Rng>(dims: &SiteDims, rng: &mut R) -> ProductOperator {
    let f = dims.as_slice().iter().map(|&d| random_factor(d, rng)).collect();
    ProductOperator::new(dims.clone(), f).unwrap()
}

use rand_chacha::ChaCha8Rng;
use rand::SeedableRng;
use unentangled::criteria::{theorem1_margin, theorem2_margin};
use unentangled::states::sample_k_unentangled;

pub const SOUNDNESS_CONFIGS: [(usize, usize); 5] = [(3, 1), (3, 2), (4, 1), (4, 2), (4, 3)];
pub const SOUNDNESS_TERMS: [usize; 3] = [1, 5, 20];

/// Counts detections by either theorem over seeded ≥k-unentangled qubit mixtures.
/// Returns `(evaluations, detections, largest margin seen)`.
pub fn soundness_run(n: usize, k: usize, states: usize, probes: usize, seed: u64) -> (usize, usize, f64) {
    let dims = SiteDims::qubits(n).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ ((n as u64) << 32) ^ k as u64);
    let (mut evals, mut hits, mut worst) = (0, 0, f64::NEG_INFINITY);
    for i in 0..states {
        let terms = SOUNDNESS_TERMS[i % SOUNDNESS_TERMS.len()];
        let mix = sample_k_unentangled(&dims, k, terms, &mut rng).unwrap();
        for _ in 0..probes {
            let x = random_probe(&dims, &mut rng);
            let y = random_probe(&dims, &mut rng);
            let omega: Vec<ComplexMatrix> = (0..2).map(|_| random_factor(2, &mut rng)).collect();
            let r1 = theorem1_margin(&mix.rho, &x, &y, k).unwrap();
            let r2 = theorem2_margin(&mix.rho, &x, &omega, k).unwrap();
            for r in [r1, r2] {
                evals += 1;
                hits += r.detected as usize;
                worst = worst.max(r.margin / (r.lhs.abs() + r.rhs.abs()).max(1e-300));
            }
        }
    }
    (evals, hits, worst)
}
