use fdwpcn_core::ptap::{self, PtapLink, PtapProblem};
use rand::distributions::Uniform;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::time::Instant;

#[test]
fn timing_probe() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for n in [2usize, 4, 6, 7] {
        let probs: Vec<PtapProblem> = (0..200)
            .map(|_| PtapProblem {
                bandwidth: 1e6,
                max_power: 5e-3,
                links: (0..n)
                    .map(|_| PtapLink {
                        snr_coefficient: rng.sample(Uniform::new(1e2, 1e5)),
                        harvest_rate: rng.sample(Uniform::new(1e-6, 1e-3)),
                        initial_battery: 0.0,
                    })
                    .collect(),
            })
            .collect();
        let start = Instant::now();
        let mut acc = 0.0;
        let mut iters = 0usize;
        for p in &probs {
            let s = ptap::solve_problem(p, 1e-6).unwrap();
            acc += s.objective;
            iters += s.iterations;
        }
        let dt = start.elapsed();
        println!(
            "n={n}: {:.1} us/solve, avg {:.1} newton steps (checksum {acc:.3})",
            dt.as_micros() as f64 / probs.len() as f64,
            iters as f64 / probs.len() as f64
        );
    }
}
