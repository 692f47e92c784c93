#![allow(dead_code)]

use horizon_core::qcore::{MultipartiteState, SubsystemLabel};
use horizon_core::C64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

/// Gaussian amplitudes, normalised: a Haar-random pure state.
pub fn random_state(dims: &[(&str, usize)], seed: u64) -> MultipartiteState {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let labels: Vec<SubsystemLabel> = dims
        .iter()
        .map(|(n, d)| SubsystemLabel::new(*n, *d).unwrap())
        .collect();
    let total: usize = dims.iter().map(|(_, d)| d).product();
    let mut amps: Vec<C64> = (0..total)
        .map(|_| {
            let re: f64 = StandardNormal.sample(&mut rng);
            let im: f64 = StandardNormal.sample(&mut rng);
            C64::new(re, im)
        })
        .collect();
    let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    for a in &mut amps {
        *a /= norm;
    }
    MultipartiteState::new(labels, amps).unwrap()
}
