//! Seeded random generation of games, kernels, and perturbations.
//!
//! Everything here is deterministic given the seed; solvers and test suites
//! share these helpers so their sampling is reproducible.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::game::{Experiment, Game};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniform draw from the probability simplex (Dirichlet(1,...,1)).
pub fn random_simplex(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    let mut v: Vec<f64> = (0..n)
        .map(|_| -(rng.gen_range(f64::MIN_POSITIVE..1.0f64)).ln())
        .collect();
    let sum: f64 = v.iter().sum();
    for x in &mut v {
        *x /= sum;
    }
    v
}

/// Row-stochastic kernel with `n_states` rows over `n_messages` columns.
pub fn random_kernel(rng: &mut ChaCha8Rng, n_states: usize, n_messages: usize) -> Vec<Vec<f64>> {
    (0..n_states)
        .map(|_| random_simplex(rng, n_messages))
        .collect()
}

/// Random canonical experiment for `game`.
pub fn random_experiment(rng: &mut ChaCha8Rng, game: &Game) -> Experiment {
    Experiment {
        messages: game.actions.clone(),
        kernel: random_kernel(rng, game.n_states(), game.n_actions()),
    }
}

/// Random canonical experiment whose state-`w` row is supported on
/// `support[w]` only.
pub fn random_experiment_on_support(
    rng: &mut ChaCha8Rng,
    game: &Game,
    support: &[Vec<usize>],
) -> Experiment {
    let kernel = support
        .iter()
        .map(|sup| {
            let mut row = vec![0.0; game.n_actions()];
            let weights = random_simplex(rng, sup.len());
            for (&a, w) in sup.iter().zip(weights) {
                row[a] = w;
            }
            row
        })
        .collect();
    Experiment {
        messages: game.actions.clone(),
        kernel,
    }
}

/// Game with a random prior and payoffs uniform in `[lo, hi]`.
pub fn random_game(rng: &mut ChaCha8Rng, n_states: usize, n_actions: usize, lo: f64, hi: f64) -> Game {
    let prior = random_simplex(rng, n_states);
    let payoffs = |rng: &mut ChaCha8Rng| -> Vec<Vec<f64>> {
        (0..n_actions)
            .map(|_| (0..n_states).map(|_| rng.gen_range(lo..hi)).collect())
            .collect()
    };
    Game {
        states: (0..n_states).map(|i| format!("w{}", i + 1)).collect(),
        actions: (0..n_actions).map(|i| format!("a{}", i + 1)).collect(),
        prior,
        sender_payoff: payoffs(rng),
        receiver_payoff: payoffs(rng),
    }
}

/// Entrywise perturbation of a probability vector by uniform noise in
/// `[-radius, radius]`, clamped at zero and renormalized.
pub fn perturb_simplex(rng: &mut ChaCha8Rng, p: &[f64], radius: f64) -> Vec<f64> {
    loop {
        let mut v: Vec<f64> = p
            .iter()
            .map(|&x| (x + rng.gen_range(-radius..radius)).max(0.0))
            .collect();
        let sum: f64 = v.iter().sum();
        if sum > 1e-9 {
            for x in &mut v {
                *x /= sum;
            }
            return v;
        }
    }
}

/// All points of the `dims`-simplex whose coordinates are multiples of
/// `1/steps`. Used by the brute-force grid oracles in the test suites.
pub fn grid_simplex_points(dims: usize, steps: usize) -> Vec<Vec<f64>> {
    fn rec(
        dims: usize,
        left: usize,
        i: usize,
        point: &mut Vec<usize>,
        out: &mut Vec<Vec<f64>>,
        steps: usize,
    ) {
        if i == dims - 1 {
            point[i] = left;
            out.push(point.iter().map(|&k| k as f64 / steps as f64).collect());
            return;
        }
        for k in 0..=left {
            point[i] = k;
            rec(dims, left - k, i + 1, point, out, steps);
        }
    }
    let mut out = Vec::new();
    let mut point = vec![0usize; dims];
    rec(dims, steps, 0, &mut point, &mut out, steps);
    out
}

/// Row-wise perturbation of an experiment kernel.
pub fn perturb_experiment(rng: &mut ChaCha8Rng, experiment: &Experiment, radius: f64) -> Experiment {
    Experiment {
        messages: experiment.messages.clone(),
        kernel: experiment
            .kernel
            .iter()
            .map(|row| perturb_simplex(rng, row, radius))
            .collect(),
    }
}

/// Support-preserving perturbation: only entries already positive move, so
/// the experiment keeps sending the same messages. Zero-support rows are
/// degenerate and come back unchanged.
pub fn perturb_experiment_on_support(
    rng: &mut ChaCha8Rng,
    experiment: &Experiment,
    radius: f64,
) -> Experiment {
    let kernel = experiment
        .kernel
        .iter()
        .map(|row| {
            let support: Vec<usize> = row
                .iter()
                .enumerate()
                .filter(|(_, &v)| v > 0.0)
                .map(|(i, _)| i)
                .collect();
            if support.len() <= 1 {
                return row.clone();
            }
            let sub: Vec<f64> = support.iter().map(|&i| row[i]).collect();
            let perturbed = perturb_simplex(rng, &sub, radius);
            let mut out = vec![0.0; row.len()];
            for (&i, v) in support.iter().zip(perturbed) {
                out[i] = v;
            }
            out
        })
        .collect();
    Experiment {
        messages: experiment.messages.clone(),
        kernel,
    }
}
