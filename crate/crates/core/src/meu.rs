//! The polar case of an infinitely ambiguity-averse (maxmin) receiver facing
//! an ambiguity-neutral sender. Obedience reduces to obedience of the
//! mu-renormalized mixture over the receiver's worst experiments, and the
//! sender's supremum is an LP with a receiver payoff floor in place of any
//! obedience constraint.

use serde::Serialize;

use crate::ambiguity::AmbiguousExperiment;
use crate::bp::solve_bp;
use crate::error::{Error, Result};
use crate::game::{is_obedient, obedient_payoff, Experiment, Game, Player, PROB_TOL};
use crate::lp::{solve_lp, LinearProgram, LpStatus, Relation};

/// The receiver's no-information payoff: the best action at the prior.
pub fn outside_option(game: &Game) -> f64 {
    (0..game.n_actions())
        .map(|a| game.prior_payoff(Player::Receiver, a, &game.prior))
        .fold(f64::NEG_INFINITY, f64::max)
}

#[derive(Debug, Clone, Serialize)]
pub struct MeuObedience {
    pub obedient: bool,
    /// Indices of the worst experiments (the maxmin receiver's argmin).
    pub argmin: Vec<usize>,
    /// The mu-renormalized mixture over the argmin set.
    pub effective: Experiment,
    pub min_slack: f64,
    /// Strong obedience additionally needs every supported recommendation to
    /// be possible under the effective experiment.
    pub strong_support_ok: bool,
}

/// Obedience for a maxmin receiver: the tuple is obedient iff the
/// renormalized mixture of the payoff-minimizing experiments is obedient.
pub fn meu_obedience(game: &Game, ambiguous: &AmbiguousExperiment) -> Result<MeuObedience> {
    if !ambiguous.is_canonical(game) {
        return Err(Error::NotCanonical {
            what: "maxmin obedience expects action recommendations".into(),
        });
    }
    let payoffs = ambiguous.payoffs(game, Player::Receiver)?;
    let mut min_payoff = f64::INFINITY;
    for (t, &p) in payoffs.iter().enumerate() {
        if ambiguous.weights[t] > PROB_TOL {
            min_payoff = min_payoff.min(p);
        }
    }
    let argmin: Vec<usize> = (0..ambiguous.len())
        .filter(|&t| ambiguous.weights[t] > PROB_TOL && payoffs[t] <= min_payoff + 1e-9)
        .collect();
    let mass: f64 = argmin.iter().map(|&t| ambiguous.weights[t]).sum();
    let mut weights = vec![0.0; ambiguous.len()];
    for &t in &argmin {
        weights[t] = ambiguous.weights[t] / mass;
    }
    let effective = ambiguous.mixture(&weights)?;
    let report = is_obedient(game, &effective)?;

    let mut strong_support_ok = true;
    for (t, exp) in ambiguous.experiments.iter().enumerate() {
        if ambiguous.weights[t] <= PROB_TOL {
            continue;
        }
        for w in 0..game.n_states() {
            for a in 0..game.n_actions() {
                if exp.kernel[w][a] > PROB_TOL {
                    let marginal: f64 = (0..game.n_states())
                        .map(|v| game.prior[v] * effective.kernel[v][a])
                        .sum();
                    if marginal <= PROB_TOL {
                        strong_support_ok = false;
                    }
                }
            }
        }
    }

    Ok(MeuObedience {
        obedient: report.obedient,
        argmin,
        effective,
        min_slack: report.min_slack,
        strong_support_ok,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct MeuSolution {
    /// Supremum of the ambiguity-neutral sender's payoff. Approached, not
    /// attained: the witness weight on the better experiment tends to one.
    pub supremum: f64,
    pub hi: Experiment,
    pub lo: Experiment,
    /// Default witness weight on `hi`.
    pub witness_mu: f64,
    pub outside_option: f64,
    /// Actions that are a best response to some belief over supported states.
    pub a0: Vec<usize>,
    pub strong: bool,
    /// Set when no experiment beats the outside option, in which case the
    /// supremum falls back to the unambiguous optimum.
    pub degenerate: bool,
}

impl MeuSolution {
    /// The binary witness family at weight `mu` on the better experiment.
    pub fn witness(&self, mu: f64) -> Result<AmbiguousExperiment> {
        AmbiguousExperiment::binary(self.hi.clone(), self.lo.clone(), mu)
    }
}

fn full_information_receiver_value(game: &Game) -> f64 {
    (0..game.n_states())
        .map(|w| {
            game.prior[w]
                * (0..game.n_actions())
                    .map(|a| game.payoff(Player::Receiver, a, w))
                    .fold(f64::NEG_INFINITY, f64::max)
        })
        .sum()
}

/// Uninformative obedient experiment recommending a prior-best action.
fn floor_experiment(game: &Game) -> Experiment {
    let best = (0..game.n_actions())
        .max_by(|&a, &b| {
            game.prior_payoff(Player::Receiver, a, &game.prior)
                .partial_cmp(&game.prior_payoff(Player::Receiver, b, &game.prior))
                .unwrap()
                .then(b.cmp(&a))
        })
        .expect("non-empty actions");
    Experiment::uninformative(game, best)
}

/// Actions that best respond to some belief supported on `supp(prior)`:
/// feasibility LP per action maximizing the worst comparison slack.
pub fn best_response_region_actions(game: &Game) -> Result<Vec<usize>> {
    let support: Vec<usize> = (0..game.n_states())
        .filter(|&w| game.prior[w] > PROB_TOL)
        .collect();
    let mut a0 = Vec::new();
    for a in 0..game.n_actions() {
        // Variables: q over supported states, then t free.
        let k = support.len();
        let mut objective = vec![0.0; k + 1];
        objective[k] = 1.0;
        let mut lp = LinearProgram::maximize(objective).free_var(k);
        let mut simplex_row = vec![0.0; k + 1];
        for i in 0..k {
            simplex_row[i] = 1.0;
        }
        lp = lp.with_row(simplex_row, Relation::Eq, 1.0);
        for b in 0..game.n_actions() {
            if b == a {
                continue;
            }
            let mut row = vec![0.0; k + 1];
            for (i, &w) in support.iter().enumerate() {
                row[i] =
                    game.payoff(Player::Receiver, a, w) - game.payoff(Player::Receiver, b, w);
            }
            row[k] = -1.0;
            lp = lp.with_row(row, Relation::Ge, 0.0);
        }
        let sol = solve_lp(&lp)?;
        let feasible = match sol.status {
            LpStatus::Optimal => sol.objective >= -1e-9,
            // An unbounded slack means some belief makes `a` strictly best.
            LpStatus::Unbounded => true,
            LpStatus::Infeasible => false,
        };
        if feasible {
            a0.push(a);
        }
    }
    Ok(a0)
}

/// Sender supremum against a maxmin receiver: maximize the sender's payoff
/// over all experiments holding the receiver weakly above the outside
/// option (no obedience constraint), with `allowed` restricting columns.
fn supremum_lp(game: &Game, floor: f64, allowed: &[bool]) -> Result<(f64, Experiment)> {
    let n_a = game.n_actions();
    let n_w = game.n_states();
    let n = n_w * n_a;
    let mut objective = vec![0.0; n];
    let mut floor_row = vec![0.0; n];
    for w in 0..n_w {
        for a in 0..n_a {
            objective[w * n_a + a] = game.prior[w] * game.payoff(Player::Sender, a, w);
            floor_row[w * n_a + a] = game.prior[w] * game.payoff(Player::Receiver, a, w);
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
    lp = lp.with_row(floor_row, Relation::Ge, floor);
    for (a, &ok) in allowed.iter().enumerate() {
        if !ok {
            for w in 0..n_w {
                let mut row = vec![0.0; n];
                row[w * n_a + a] = 1.0;
                lp = lp.with_row(row, Relation::Eq, 0.0);
            }
        }
    }
    let sol = solve_lp(&lp)?;
    if sol.status != LpStatus::Optimal {
        return Err(Error::LpFailure {
            what: format!("maxmin supremum LP reported {:?}", sol.status),
        });
    }
    let kernel: Vec<Vec<f64>> = (0..n_w)
        .map(|w| {
            let row: Vec<f64> = (0..n_a).map(|a| sol.x[w * n_a + a].max(0.0)).collect();
            let s: f64 = row.iter().sum();
            row.into_iter().map(|v| v / s).collect()
        })
        .collect();
    Ok((sol.objective, Experiment::canonical(game, kernel)?))
}

pub fn meu_supremum(game: &Game) -> Result<MeuSolution> {
    meu_supremum_impl(game, false)
}

/// Variant under strong obedience: recommendations restricted to actions that
/// can be best responses, with a strict payoff floor.
pub fn meu_supremum_strong(game: &Game) -> Result<MeuSolution> {
    meu_supremum_impl(game, true)
}

fn meu_supremum_impl(game: &Game, strong: bool) -> Result<MeuSolution> {
    game.validate()?;
    let floor = outside_option(game);
    let a0 = best_response_region_actions(game)?;
    let lo = floor_experiment(game);

    // Precondition: some experiment strictly beats the outside option.
    if full_information_receiver_value(game) <= floor + 1e-12 {
        let bp = solve_bp(game)?;
        return Ok(MeuSolution {
            supremum: bp.value,
            hi: bp.experiment.clone(),
            lo,
            witness_mu: 0.999,
            outside_option: floor,
            a0,
            strong,
            degenerate: true,
        });
    }

    let allowed: Vec<bool> = if strong {
        (0..game.n_actions()).map(|a| a0.contains(&a)).collect()
    } else {
        vec![true; game.n_actions()]
    };
    let effective_floor = if strong { floor + 1e-9 } else { floor };
    let (value, mut hi) = supremum_lp(game, effective_floor, &allowed)?;

    // The witness needs the receiver to strictly prefer hi to lo; blend in a
    // little full information when the floor binds exactly.
    let ur_hi = obedient_payoff(game, &hi, Player::Receiver)?;
    if ur_hi <= floor + 1e-9 {
        let informative = Experiment::deterministic(
            game,
            &(0..game.n_states())
                .map(|w| {
                    (0..game.n_actions())
                        .filter(|&a| allowed[a])
                        .max_by(|&a, &b| {
                            game.payoff(Player::Receiver, a, w)
                                .partial_cmp(&game.payoff(Player::Receiver, b, w))
                                .unwrap()
                                .then(b.cmp(&a))
                        })
                        .expect("some action allowed")
                })
                .collect::<Vec<_>>(),
        );
        hi = hi.mix(&informative, 1.0 - 1e-3)?;
    }

    let mut lo_final = lo;
    if strong {
        // Give the worse experiment full support on the best-response actions
        // so every recommendation of hi remains possible under it.
        if let Some(tilde) = full_support_obedient_experiment(game, &a0, floor)? {
            lo_final = lo_final.mix(&tilde, 1.0 - 1e-3)?;
        }
    }

    Ok(MeuSolution {
        supremum: value,
        hi,
        lo: lo_final,
        witness_mu: 0.999,
        outside_option: floor,
        a0,
        strong,
        degenerate: false,
    })
}

/// Obedient experiment with strictly positive marginal on every action in
/// `a0` and receiver payoff strictly above the floor, found by maximizing the
/// smallest such marginal.
fn full_support_obedient_experiment(
    game: &Game,
    a0: &[usize],
    floor: f64,
) -> Result<Option<Experiment>> {
    let n_a = game.n_actions();
    let n_w = game.n_states();
    let n = n_w * n_a;
    // Variables: sigma entries then t.
    let mut objective = vec![0.0; n + 1];
    objective[n] = 1.0;
    let mut lp = LinearProgram::maximize(objective).free_var(n);
    for w in 0..n_w {
        let mut row = vec![0.0; n + 1];
        for a in 0..n_a {
            row[w * n_a + a] = 1.0;
        }
        lp = lp.with_row(row, Relation::Eq, 1.0);
    }
    for row in crate::bp::obedience_rows(game, &game.prior) {
        let mut padded = row;
        padded.push(0.0);
        lp = lp.with_row(padded, Relation::Ge, 0.0);
    }
    // Disallowed actions never recommended.
    for a in 0..n_a {
        if !a0.contains(&a) {
            for w in 0..n_w {
                let mut row = vec![0.0; n + 1];
                row[w * n_a + a] = 1.0;
                lp = lp.with_row(row, Relation::Eq, 0.0);
            }
        }
    }
    // Marginal of each allowed action at least t.
    for &a in a0 {
        let mut row = vec![0.0; n + 1];
        for w in 0..n_w {
            row[w * n_a + a] = game.prior[w];
        }
        row[n] = -1.0;
        lp = lp.with_row(row, Relation::Ge, 0.0);
    }
    // Receiver strictly above the floor.
    let mut floor_row = vec![0.0; n + 1];
    for w in 0..n_w {
        for a in 0..n_a {
            floor_row[w * n_a + a] = game.prior[w] * game.payoff(Player::Receiver, a, w);
        }
    }
    lp = lp.with_row(floor_row, Relation::Ge, floor + 1e-9);

    let sol = solve_lp(&lp)?;
    if sol.status != LpStatus::Optimal || sol.objective <= 1e-9 {
        return Ok(None);
    }
    let kernel: Vec<Vec<f64>> = (0..n_w)
        .map(|w| {
            let row: Vec<f64> = (0..n_a).map(|a| sol.x[w * n_a + a].max(0.0)).collect();
            let s: f64 = row.iter().sum();
            row.into_iter().map(|v| v / s).collect()
        })
        .collect();
    Ok(Some(Experiment::canonical(game, kernel)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn intro_outside_option() {
        assert!((outside_option(&fixtures::intro_game()) - 0.5).abs() < 1e-12);
    }

    #[test]
    fn single_action_outside_option() {
        let game = Game::new(
            vec!["w1".into(), "w2".into()],
            vec!["a".into()],
            vec![0.25, 0.75],
            vec![vec![1.0, 2.0]],
            vec![vec![3.0, -1.0]],
        )
        .unwrap();
        assert!((outside_option(&game) - 0.0).abs() < 1e-12);
    }

    #[test]
    fn sa2_second_outside_option() {
        assert!((outside_option(&fixtures::sa2_second_game()) - 1.75).abs() < 1e-12);
    }

    #[test]
    fn intro_tuple_meu_obedient_via_worst_experiment() {
        let game = fixtures::intro_game();
        for mu in [0.3, 0.78, 0.99] {
            let amb = AmbiguousExperiment::binary(
                fixtures::intro_sigma_bar(),
                fixtures::intro_sigma_lower(),
                mu,
            )
            .unwrap();
            let report = meu_obedience(&game, &amb).unwrap();
            assert_eq!(report.argmin, vec![1]);
            assert_eq!(report.effective.kernel, fixtures::intro_sigma_lower().kernel);
            assert!(report.obedient);
        }
    }

    #[test]
    fn equal_payoffs_mix_the_whole_tuple() {
        let game = fixtures::intro_game();
        // Both experiments give the receiver 1/2.
        let e1 = fixtures::intro_sigma_lower();
        let e2 = Experiment::uninformative(&game, 1);
        let amb = AmbiguousExperiment::new(vec![e1, e2], vec![0.4, 0.6]).unwrap();
        let report = meu_obedience(&game, &amb).unwrap();
        assert_eq!(report.argmin, vec![0, 1]);
        assert!((report.effective.kernel[0][0] - 0.4).abs() < 1e-12);
        assert!((report.effective.kernel[0][1] - 0.6).abs() < 1e-12);
    }

    #[test]
    fn non_obedient_worst_experiment_fails() {
        let game = fixtures::intro_game();
        // Worst experiment recommends a2 at the prior where a1 ties: fine;
        // make it recommend a3 instead, which the prior rejects.
        let bad = Experiment::uninformative(&game, 2);
        let amb =
            AmbiguousExperiment::binary(fixtures::intro_sigma_bar(), bad, 0.5).unwrap();
        let report = meu_obedience(&game, &amb).unwrap();
        assert_eq!(report.argmin, vec![1]);
        assert!(!report.obedient);
    }

    #[test]
    fn intro_supremum_matches_grid_oracle() {
        let game = fixtures::intro_game();
        let sol = meu_supremum(&game).unwrap();
        // Both players' best feasible point is full information: 3/2 each,
        // comfortably above the 1/2 floor.
        assert!((sol.supremum - 1.5).abs() < 1e-9, "supremum {}", sol.supremum);
        assert!(!sol.degenerate);
        // Brute-force oracle over the step-0.05 kernel grid.
        let grid = crate::sampling::grid_simplex_points(3, 20);
        let mut best = f64::NEG_INFINITY;
        for r0 in &grid {
            for r1 in &grid {
                let exp = Experiment::canonical(&game, vec![r0.clone(), r1.clone()]).unwrap();
                let ur = obedient_payoff(&game, &exp, Player::Receiver).unwrap();
                if ur >= 0.5 {
                    best =
                        best.max(obedient_payoff(&game, &exp, Player::Sender).unwrap());
                }
            }
        }
        assert!((sol.supremum - best).abs() <= 0.03, "lp {} grid {best}", sol.supremum);
    }

    #[test]
    fn aligned_game_supremum_is_full_information() {
        let game = Game::new(
            vec!["w1".into(), "w2".into()],
            vec!["a1".into(), "a2".into(), "a3".into()],
            vec![0.5, 0.5],
            vec![vec![2.0, 0.0], vec![0.0, 3.0], vec![1.0, 1.0]],
            vec![vec![2.0, 0.0], vec![0.0, 3.0], vec![1.0, 1.0]],
        )
        .unwrap();
        let sol = meu_supremum(&game).unwrap();
        assert!((sol.supremum - 2.5).abs() < 1e-9);
    }

    #[test]
    fn intro_a0_contains_all_actions() {
        let game = fixtures::intro_game();
        let a0 = best_response_region_actions(&game).unwrap();
        assert_eq!(a0, vec![0, 1, 2]);
    }

    #[test]
    fn dominated_action_never_in_a0() {
        let game = Game::new(
            vec!["w1".into(), "w2".into()],
            vec!["good".into(), "dominated".into()],
            vec![0.5, 0.5],
            vec![vec![1.0, 1.0], vec![0.0, 0.0]],
            vec![vec![2.0, 2.0], vec![1.0, 1.0]],
        )
        .unwrap();
        let a0 = best_response_region_actions(&game).unwrap();
        assert_eq!(a0, vec![0]);
    }

    #[test]
    fn strong_value_never_exceeds_plain() {
        for game in [
            fixtures::intro_game(),
            fixtures::sa2_first_game(),
            fixtures::sa2_second_game(),
        ] {
            let plain = meu_supremum(&game).unwrap();
            let strong = meu_supremum_strong(&game).unwrap();
            assert!(strong.supremum <= plain.supremum + 1e-9);
            assert!(!plain.degenerate);
        }
    }

    #[test]
    fn witness_family_approaches_supremum_monotonically() {
        let game = fixtures::intro_game();
        let sol = meu_supremum(&game).unwrap();
        let range = {
            let (lo, hi) = game.payoff_range(Player::Sender);
            hi - lo
        };
        let mut last = f64::NEG_INFINITY;
        for mu in [0.9, 0.99, 0.999] {
            let witness = sol.witness(mu).unwrap();
            let report = meu_obedience(&game, &witness).unwrap();
            assert!(report.obedient, "witness at mu={mu} not obedient");
            let value: f64 = witness
                .weights
                .iter()
                .zip(witness.payoffs(&game, Player::Sender).unwrap())
                .map(|(&m, u)| m * u)
                .sum();
            assert!(value > last);
            assert!(sol.supremum - value < (1.0 - mu) * range + 1e-9);
            last = value;
        }
    }

    #[test]
    fn strong_witness_keeps_full_support() {
        let game = fixtures::intro_game();
        let sol = meu_supremum_strong(&game).unwrap();
        let witness = sol.witness(0.999).unwrap();
        let report = meu_obedience(&game, &witness).unwrap();
        assert!(report.obedient);
        assert!(report.strong_support_ok);
    }

    /// Direct oracle for the minmax reduction: enumerate every pure strategy
    /// and check that obedience maximizes the worst-case receiver payoff
    /// exactly when the reduction says the tuple is obedient.
    #[test]
    fn obedience_matches_pure_strategy_enumeration() {
        use crate::game::{expected_payoff, ReceiverStrategy};
        let game = fixtures::intro_game();
        let meu_value = |amb: &AmbiguousExperiment, tau: &ReceiverStrategy| -> f64 {
            amb.experiments
                .iter()
                .zip(&amb.weights)
                .filter(|(_, &m)| m > PROB_TOL)
                .map(|(e, _)| expected_payoff(&game, e, tau, Player::Receiver).unwrap())
                .fold(f64::INFINITY, f64::min)
        };
        let tuples = [
            AmbiguousExperiment::binary(
                fixtures::intro_sigma_bar(),
                fixtures::intro_sigma_lower(),
                0.7,
            )
            .unwrap(),
            AmbiguousExperiment::binary(
                fixtures::intro_sigma_bar(),
                Experiment::uninformative(&game, 2),
                0.5,
            )
            .unwrap(),
            AmbiguousExperiment::singleton(fixtures::intro_sigma_bp()),
        ];
        for amb in &tuples {
            let obedient_value = meu_value(amb, &ReceiverStrategy::obedient(3));
            let mut best = f64::NEG_INFINITY;
            for m0 in 0..3 {
                for m1 in 0..3 {
                    for m2 in 0..3 {
                        let tau = ReceiverStrategy::pure(&[m0, m1, m2], 3);
                        best = best.max(meu_value(amb, &tau));
                    }
                }
            }
            let reduction = meu_obedience(&game, amb).unwrap();
            assert_eq!(
                reduction.obedient,
                obedient_value >= best - 1e-9,
                "reduction disagrees with enumeration (obedient {obedient_value}, best {best})"
            );
        }
    }

    /// Passing to the maxmin limit can drop the receiver's payoff
    /// discontinuously: the witness family holds a maxmin receiver at the
    /// uninformative payoff while moderately averse smooth receivers of the
    /// tuned binary improvement approach the fully informative payoff.
    #[test]
    fn receiver_payoff_drops_at_the_maxmin_limit() {
        use crate::ambiguity::smooth_value_obedient;
        use crate::attitude::Attitude;
        use crate::splitting::{binary_improvement, find_pareto_split};
        let game = fixtures::intro_game();
        let sol = meu_supremum(&game).unwrap();
        let witness = sol.witness(0.999).unwrap();
        let meu_receiver = witness
            .payoffs(&game, Player::Receiver)
            .unwrap()
            .into_iter()
            .fold(f64::INFINITY, f64::min);
        assert!(meu_receiver <= 1.25 + 1e-12);

        let base = fixtures::intro_sigma_bp();
        let split = find_pareto_split(&game, &base).unwrap().unwrap();
        let mut last = 1.25;
        for alpha in [1.0, 10.0] {
            let att = Attitude::cara(alpha).unwrap();
            let improved =
                binary_improvement(&game, &base, &split, &att, &Attitude::linear()).unwrap();
            let receiver =
                smooth_value_obedient(&game, &improved.ambiguous, &att, Player::Receiver).unwrap();
            assert!(
                receiver > last,
                "alpha={alpha}: receiver {receiver} not above {last}"
            );
            last = receiver;
        }
        // The ordering of the exhibit: smooth receivers sit strictly above
        // both the unambiguous payoff and the maxmin witness payoff.
        assert!(last > 1.25 && meu_receiver < last);
    }

    /// Fully opposed interests make the floor bind exactly; the witness is
    /// then blended with a little full information so the worse experiment
    /// stays the unique argmin.
    #[test]
    fn binding_floor_still_yields_an_obedient_witness() {
        let game = Game::new(
            vec!["w1".into(), "w2".into()],
            vec!["a1".into(), "a2".into(), "a3".into()],
            vec![0.5, 0.5],
            vec![vec![-1.0, 0.0], vec![1.0, -2.0], vec![-2.0, 3.0]],
            vec![vec![1.0, 0.0], vec![-1.0, 2.0], vec![2.0, -3.0]],
        )
        .unwrap();
        let sol = meu_supremum(&game).unwrap();
        assert!(!sol.degenerate);
        let ur_hi = obedient_payoff(&game, &sol.hi, Player::Receiver).unwrap();
        assert!(ur_hi > sol.outside_option, "floor not strictly cleared");
        let witness = sol.witness(0.999).unwrap();
        let report = meu_obedience(&game, &witness).unwrap();
        assert!(report.obedient);
        assert_eq!(report.argmin, vec![1]);
    }

    /// State-independent receiver payoffs: nothing beats the outside option,
    /// so the supremum degenerates to the unambiguous optimum.
    #[test]
    fn degenerate_when_information_is_worthless() {
        let game = Game::new(
            vec!["w1".into(), "w2".into()],
            vec!["a1".into(), "a2".into()],
            vec![0.5, 0.5],
            vec![vec![2.0, 0.0], vec![0.0, 1.0]],
            vec![vec![1.0, 1.0], vec![0.0, 0.0]],
        )
        .unwrap();
        let sol = meu_supremum(&game).unwrap();
        assert!(sol.degenerate);
        let bp = solve_bp(&game).unwrap();
        assert!((sol.supremum - bp.value).abs() < 1e-12);
    }

    /// Two-action games: the LP agrees with the grid oracle, and the floor
    /// program weakly dominates the unambiguous optimum (obedience is the
    /// tighter constraint set).
    #[test]
    fn two_action_supremum_matches_grid_and_dominates_bp() {
        use crate::sampling;
        let mut rng = sampling::rng(83);
        let grid = sampling::grid_simplex_points(2, 50);
        for _ in 0..10 {
            let game = sampling::random_game(&mut rng, 2, 2, -2.0, 2.0);
            let sol = meu_supremum(&game).unwrap();
            let floor = outside_option(&game);
            let mut best = f64::NEG_INFINITY;
            for r0 in &grid {
                for r1 in &grid {
                    let exp =
                        Experiment::canonical(&game, vec![r0.clone(), r1.clone()]).unwrap();
                    let ur = obedient_payoff(&game, &exp, Player::Receiver).unwrap();
                    if ur >= floor - 1e-12 {
                        best = best.max(obedient_payoff(&game, &exp, Player::Sender).unwrap());
                    }
                }
            }
            if sol.degenerate {
                continue;
            }
            assert!((sol.supremum - best).abs() <= 0.03, "lp {} grid {best}", sol.supremum);
            let bp = solve_bp(&game).unwrap();
            assert!(sol.supremum >= bp.value - 1e-9);
        }
    }
}
