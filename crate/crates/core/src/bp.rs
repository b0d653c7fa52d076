//! The unambiguous (Bayesian) persuasion baseline: an experiment-space LP for
//! the optimal obedient experiment, and the two-state indirect-utility /
//! concavification curve.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::game::{is_obedient, obedient_payoff, Experiment, Game, ObedienceReport, Player};
use crate::lp::{solve_lp, LinearProgram, LpStatus, Relation};

#[derive(Debug, Clone, Serialize)]
pub struct BpSolution {
    pub value: f64,
    pub experiment: Experiment,
    pub obedience: ObedienceReport,
}

/// Obedience rows shared by the persuasion LPs: for each ordered pair of
/// actions `(a, b)`, the row of coefficients of
/// `sum_w p(w) sigma(a|w) (u_r(a,w) - u_r(b,w)) >= 0`
/// over the variables `sigma(a|w)` laid out as `w * n_actions + a`.
pub(crate) fn obedience_rows(game: &Game, prior: &[f64]) -> Vec<Vec<f64>> {
    let n_a = game.n_actions();
    let n_w = game.n_states();
    let mut rows = Vec::with_capacity(n_a * (n_a - 1));
    for a in 0..n_a {
        for b in 0..n_a {
            if a == b {
                continue;
            }
            let mut row = vec![0.0; n_w * n_a];
            for w in 0..n_w {
                row[w * n_a + a] = prior[w]
                    * (game.payoff(Player::Receiver, a, w) - game.payoff(Player::Receiver, b, w));
            }
            rows.push(row);
        }
    }
    rows
}

/// Solve the sender's unambiguous persuasion problem as an LP over canonical
/// experiments: maximize the sender's expected payoff subject to row
/// stochasticity and obedience.
pub fn solve_bp(game: &Game) -> Result<BpSolution> {
    game.validate()?;
    let n_a = game.n_actions();
    let n_w = game.n_states();
    let n = n_w * n_a;

    let mut objective = vec![0.0; n];
    for w in 0..n_w {
        for a in 0..n_a {
            objective[w * n_a + a] = game.prior[w] * game.payoff(Player::Sender, a, w);
        }
    }
    let mut lp = LinearProgram::maximize(objective);
    for w in 0..n_w {
        let mut row = vec![0.0; n];
        for a in 0..n_a {
            row[w * n_a + a] = 1.0;
        }
        lp = lp.with_row(row, Relation::Eq, 1.0);
    }
    for row in obedience_rows(game, &game.prior) {
        lp = lp.with_row(row, Relation::Ge, 0.0);
    }

    let sol = solve_lp(&lp)?;
    if sol.status != LpStatus::Optimal {
        // An uninformative experiment recommending the prior-best action is
        // always feasible, so anything else is a solver defect.
        return Err(Error::Internal {
            what: format!("persuasion LP reported {:?}", sol.status),
        });
    }

    let kernel: Vec<Vec<f64>> = (0..n_w)
        .map(|w| {
            (0..n_a)
                .map(|a| sol.x[w * n_a + a].clamp(0.0, 1.0))
                .collect()
        })
        .collect();
    // Renormalize away LP round-off before validating.
    let kernel = kernel
        .into_iter()
        .map(|row| {
            let s: f64 = row.iter().sum();
            row.into_iter().map(|v| v / s).collect()
        })
        .collect();
    let experiment = Experiment::canonical(game, kernel)?;
    let obedience = is_obedient(game, &experiment)?;
    let value = obedient_payoff(game, &experiment, Player::Sender)?;
    Ok(BpSolution {
        value,
        experiment,
        obedience,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct CurvePoint {
    /// Probability of the second state.
    pub belief: f64,
    /// Receiver-optimal actions at this belief.
    pub best_actions: Vec<usize>,
    /// Sender payoff when the receiver best-responds, ties resolved in the
    /// sender's favor.
    pub indirect_utility: f64,
    /// Value of the concave envelope of the indirect utility at this belief.
    pub concavified: f64,
}

/// Sample the sender's indirect utility over beliefs `Pr(w2)` together with
/// its concavification. Only two-state games; the sample grid is augmented
/// with every receiver indifference belief so the envelope is exact at kinks.
pub fn indirect_utility_curve(game: &Game, resolution: usize) -> Result<Vec<CurvePoint>> {
    if game.n_states() != 2 {
        return Err(Error::Unsupported {
            what: format!("indirect utility curve needs 2 states, game has {}", game.n_states()),
        });
    }
    if resolution < 2 {
        return Err(Error::precondition("resolution must be at least 2"));
    }
    let mut beliefs: Vec<f64> = (0..=resolution).map(|i| i as f64 / resolution as f64).collect();
    beliefs.push(game.prior[1]);
    // Receiver indifference points between each action pair.
    let n_a = game.n_actions();
    let ur = |a: usize, q: f64| -> f64 {
        (1.0 - q) * game.payoff(Player::Receiver, a, 0) + q * game.payoff(Player::Receiver, a, 1)
    };
    for a in 0..n_a {
        for b in (a + 1)..n_a {
            let da = game.payoff(Player::Receiver, a, 0) - game.payoff(Player::Receiver, b, 0);
            let db = game.payoff(Player::Receiver, a, 1) - game.payoff(Player::Receiver, b, 1);
            let slope = db - da;
            if slope.abs() > 1e-14 {
                let q = -da / slope;
                if (0.0..=1.0).contains(&q) {
                    beliefs.push(q);
                }
            }
        }
    }
    beliefs.sort_by(|x, y| x.partial_cmp(y).unwrap());
    beliefs.dedup_by(|x, y| (*x - *y).abs() < 1e-12);

    let evaluate = |q: f64| -> (Vec<usize>, f64) {
        let values: Vec<f64> = (0..n_a).map(|a| ur(a, q)).collect();
        let best = values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let ties: Vec<usize> = (0..n_a).filter(|&a| values[a] >= best - 1e-9).collect();
        let sender = ties
            .iter()
            .map(|&a| {
                (1.0 - q) * game.payoff(Player::Sender, a, 0) + q * game.payoff(Player::Sender, a, 1)
            })
            .fold(f64::NEG_INFINITY, f64::max);
        (ties, sender)
    };

    let samples: Vec<(f64, Vec<usize>, f64)> = beliefs
        .iter()
        .map(|&q| {
            let (ties, iu) = evaluate(q);
            (q, ties, iu)
        })
        .collect();

    // Upper concave envelope of the sampled graph (monotone-chain upper hull).
    let points: Vec<(f64, f64)> = samples.iter().map(|(q, _, iu)| (*q, *iu)).collect();
    let hull = upper_hull(&points);
    let envelope = |q: f64| -> f64 {
        match hull.binary_search_by(|p| p.0.partial_cmp(&q).unwrap()) {
            Ok(i) => hull[i].1,
            Err(i) => {
                let (x0, y0) = hull[i - 1];
                let (x1, y1) = hull[i];
                y0 + (y1 - y0) * (q - x0) / (x1 - x0)
            }
        }
    };

    Ok(samples
        .into_iter()
        .map(|(q, best_actions, iu)| CurvePoint {
            belief: q,
            best_actions,
            indirect_utility: iu,
            concavified: envelope(q),
        })
        .collect())
}

/// Upper convex hull of points sorted by x (first and last always included).
fn upper_hull(points: &[(f64, f64)]) -> Vec<(f64, f64)> {
    let mut hull: Vec<(f64, f64)> = Vec::new();
    for &p in points {
        while hull.len() >= 2 {
            let a = hull[hull.len() - 2];
            let b = hull[hull.len() - 1];
            // Drop b if it lies (weakly) below chord a-p.
            let cross = (b.0 - a.0) * (p.1 - a.1) - (b.1 - a.1) * (p.0 - a.0);
            if cross >= -1e-14 {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(p);
    }
    hull
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::game::{is_obedient, ReceiverStrategy};
    use crate::sampling;

    #[test]
    fn intro_bp_value_and_experiment() {
        let game = fixtures::intro_game();
        let sol = solve_bp(&game).unwrap();
        assert!((sol.value - 1.25).abs() < 1e-9, "value {}", sol.value);
        let expected = fixtures::intro_sigma_bp();
        for (row, exp_row) in sol.experiment.kernel.iter().zip(&expected.kernel) {
            for (v, e) in row.iter().zip(exp_row) {
                assert!((v - e).abs() < 1e-7, "kernel {:?}", sol.experiment.kernel);
            }
        }
        assert!(sol.obedience.obedient);
    }

    #[test]
    fn sa2_first_bp_value_and_experiment() {
        let game = fixtures::sa2_first_game();
        let sol = solve_bp(&game).unwrap();
        assert!((sol.value - 2.0).abs() < 1e-9, "value {}", sol.value);
        let expected = fixtures::sa2_first_sigma_a();
        for (row, exp_row) in sol.experiment.kernel.iter().zip(&expected.kernel) {
            for (v, e) in row.iter().zip(exp_row) {
                assert!((v - e).abs() < 1e-7);
            }
        }
    }

    #[test]
    fn sa2_second_bp_recommends_safe_action() {
        let game = fixtures::sa2_second_game();
        let sol = solve_bp(&game).unwrap();
        assert!((sol.value - fixtures::SA2_SECOND_X).abs() < 1e-9);
    }

    #[test]
    fn aligned_interests_reach_full_information_value() {
        let mut rng = sampling::rng(5);
        for _ in 0..10 {
            let mut game = sampling::random_game(&mut rng, 2, 3, -2.0, 2.0);
            game.sender_payoff = game.receiver_payoff.clone();
            let sol = solve_bp(&game).unwrap();
            let full_info: f64 = (0..game.n_states())
                .map(|w| {
                    game.prior[w]
                        * (0..game.n_actions())
                            .map(|a| game.payoff(Player::Receiver, a, w))
                            .fold(f64::NEG_INFINITY, f64::max)
                })
                .sum();
            assert!((sol.value - full_info).abs() < 1e-8);
        }
    }

    #[test]
    fn lp_value_dominates_grid_search() {
        // Oracle: exhaustive step-0.1 grid over obedient experiments of
        // random 2-state 3-action games. Slack 0.15 = 1.5 grid steps, matching
        // the resolution of the rounding argument.
        let mut rng = sampling::rng(77);
        let grid = sampling::grid_simplex_points(3, 10);
        for _ in 0..20 {
            let game = sampling::random_game(&mut rng, 2, 3, -2.0, 2.0);
            let sol = solve_bp(&game).unwrap();
            let mut best = f64::NEG_INFINITY;
            for row0 in &grid {
                for row1 in &grid {
                    let exp =
                        Experiment::canonical(&game, vec![row0.clone(), row1.clone()]).unwrap();
                    if is_obedient(&game, &exp).unwrap().obedient {
                        let v = obedient_payoff(&game, &exp, Player::Sender).unwrap();
                        best = best.max(v);
                    }
                }
            }
            assert!(sol.value >= best - 1e-9, "LP below grid: {} < {}", sol.value, best);
            assert!(sol.value - best <= 0.15, "LP {} far above grid {}", sol.value, best);
        }
    }

    #[test]
    fn curve_values_at_reference_beliefs() {
        let game = fixtures::intro_game();
        let curve = indirect_utility_curve(&game, 100).unwrap();
        let at = |q: f64| -> &CurvePoint {
            curve
                .iter()
                .min_by(|a, b| {
                    (a.belief - q).abs().partial_cmp(&(b.belief - q).abs()).unwrap()
                })
                .unwrap()
        };
        let half = at(0.5);
        assert!((half.belief - 0.5).abs() < 1e-12);
        assert!((half.indirect_utility - 0.5).abs() < 1e-12);
        assert!((half.concavified - 1.25).abs() < 1e-9);
        let one = at(1.0);
        assert!((one.indirect_utility - 2.0).abs() < 1e-12);
        let kink = at(0.2);
        assert!((kink.belief - 0.2).abs() < 1e-12);
        // Sender-favorable tie-break at the a1/a3 boundary.
        assert!((kink.indirect_utility - 0.8).abs() < 1e-12);
    }

    #[test]
    fn curve_rejects_other_state_counts() {
        let mut rng = sampling::rng(9);
        let game = sampling::random_game(&mut rng, 3, 3, -1.0, 1.0);
        assert!(matches!(
            indirect_utility_curve(&game, 10),
            Err(Error::Unsupported { .. })
        ));
    }

    #[test]
    fn bp_dominates_every_obedient_strategy_payoff() {
        let mut rng = sampling::rng(13);
        for _ in 0..10 {
            let game = sampling::random_game(&mut rng, 2, 3, -2.0, 2.0);
            let sol = solve_bp(&game).unwrap();
            for _ in 0..50 {
                let exp = sampling::random_experiment(&mut rng, &game);
                if is_obedient(&game, &exp).unwrap().obedient {
                    let v = obedient_payoff(&game, &exp, Player::Sender).unwrap();
                    assert!(v <= sol.value + 1e-8);
                }
            }
        }
    }

    #[test]
    fn best_response_value_dominates_arbitrary_strategies() {
        let mut rng = sampling::rng(15);
        let game = fixtures::intro_game();
        for _ in 0..50 {
            let exp = sampling::random_experiment(&mut rng, &game);
            let br = crate::game::best_response(&game, &exp).unwrap();
            for _ in 0..10 {
                let tau = ReceiverStrategy::new(sampling::random_kernel(&mut rng, 3, 3)).unwrap();
                let v = crate::game::expected_payoff(&game, &exp, &tau, Player::Receiver).unwrap();
                assert!(br.value >= v - 1e-9);
            }
        }
    }
}
