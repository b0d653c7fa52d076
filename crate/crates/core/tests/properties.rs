//! Property tests for the structural invariants of the game primitives and
//! the ambiguity machinery.

use proptest::prelude::*;

use persuasion_core::ambiguity::{
    effective_measure, inverse_effective_measure, AmbiguousExperiment,
};
use persuasion_core::attitude::Attitude;
use persuasion_core::game::{
    expected_payoff, is_obedient, obedient_payoff, Experiment, Game, Player, ReceiverStrategy,
};

fn normalize(v: Vec<f64>) -> Vec<f64> {
    let s: f64 = v.iter().sum();
    v.into_iter().map(|x| x / s).collect()
}

fn simplex(n: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(0.01..1.0f64, n).prop_map(normalize)
}

fn kernel(states: usize, msgs: usize) -> impl Strategy<Value = Vec<Vec<f64>>> {
    prop::collection::vec(simplex(msgs), states)
}

fn payoffs(actions: usize, states: usize) -> impl Strategy<Value = Vec<Vec<f64>>> {
    prop::collection::vec(prop::collection::vec(-3.0..3.0f64, states), actions)
}

fn small_game() -> impl Strategy<Value = Game> {
    (simplex(2), payoffs(3, 2), payoffs(3, 2)).prop_map(|(prior, us, ur)| {
        Game::new(
            vec!["w1".into(), "w2".into()],
            vec!["a1".into(), "a2".into(), "a3".into()],
            prior,
            us,
            ur,
        )
        .unwrap()
    })
}

fn canonical_experiment() -> impl Strategy<Value = Vec<Vec<f64>>> {
    kernel(2, 3)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    /// Payoffs are bilinear: mixing experiments mixes payoffs linearly.
    #[test]
    fn expected_payoff_linear_in_experiment(
        game in small_game(),
        k1 in canonical_experiment(),
        k2 in canonical_experiment(),
        tau in kernel(3, 3),
        lambda in 0.0..1.0f64,
    ) {
        let e1 = Experiment::canonical(&game, k1).unwrap();
        let e2 = Experiment::canonical(&game, k2).unwrap();
        let mixed = e1.mix(&e2, lambda).unwrap();
        let tau = ReceiverStrategy::new(tau).unwrap();
        for player in [Player::Sender, Player::Receiver] {
            let v1 = expected_payoff(&game, &e1, &tau, player).unwrap();
            let v2 = expected_payoff(&game, &e2, &tau, player).unwrap();
            let vm = expected_payoff(&game, &mixed, &tau, player).unwrap();
            prop_assert!((vm - (lambda * v1 + (1.0 - lambda) * v2)).abs() < 1e-10);
        }
    }

    /// Payoffs are linear in the receiver strategy as well.
    #[test]
    fn expected_payoff_linear_in_strategy(
        game in small_game(),
        k in canonical_experiment(),
        t1 in kernel(3, 3),
        t2 in kernel(3, 3),
        lambda in 0.0..1.0f64,
    ) {
        let e = Experiment::canonical(&game, k).unwrap();
        let tau1 = ReceiverStrategy::new(t1.clone()).unwrap();
        let tau2 = ReceiverStrategy::new(t2.clone()).unwrap();
        let mixed = ReceiverStrategy::new(
            t1.iter()
                .zip(&t2)
                .map(|(a, b)| {
                    a.iter().zip(b).map(|(x, y)| lambda * x + (1.0 - lambda) * y).collect()
                })
                .collect(),
        )
        .unwrap();
        let v1 = expected_payoff(&game, &e, &tau1, Player::Sender).unwrap();
        let v2 = expected_payoff(&game, &e, &tau2, Player::Sender).unwrap();
        let vm = expected_payoff(&game, &e, &mixed, Player::Sender).unwrap();
        prop_assert!((vm - (lambda * v1 + (1.0 - lambda) * v2)).abs() < 1e-10);
    }

    /// Obedience slacks are linear, so obedience survives mixing.
    #[test]
    fn obedience_closed_under_mixing(
        game in small_game(),
        k1 in canonical_experiment(),
        k2 in canonical_experiment(),
        lambda in 0.0..1.0f64,
    ) {
        let e1 = Experiment::canonical(&game, k1).unwrap();
        let e2 = Experiment::canonical(&game, k2).unwrap();
        let r1 = is_obedient(&game, &e1).unwrap();
        let r2 = is_obedient(&game, &e2).unwrap();
        if r1.min_slack >= 0.0 && r2.min_slack >= 0.0 {
            let mixed = e1.mix(&e2, lambda).unwrap();
            prop_assert!(is_obedient(&game, &mixed).unwrap().obedient);
        }
    }

    /// The best-response value weakly dominates any strategy's payoff.
    #[test]
    fn best_response_dominates(
        game in small_game(),
        k in canonical_experiment(),
        t in kernel(3, 3),
    ) {
        let e = Experiment::canonical(&game, k).unwrap();
        let tau = ReceiverStrategy::new(t).unwrap();
        let br = persuasion_core::game::best_response(&game, &e).unwrap();
        let v = expected_payoff(&game, &e, &tau, Player::Receiver).unwrap();
        prop_assert!(br.value >= v - 1e-9);
    }

    /// Effective measures invert exactly and tilt toward worse payoffs.
    #[test]
    fn effective_measure_round_trip_and_pessimism(
        game in small_game(),
        k1 in canonical_experiment(),
        k2 in canonical_experiment(),
        mu_hi in 0.05..0.95f64,
    ) {
        let e1 = Experiment::canonical(&game, k1).unwrap();
        let e2 = Experiment::canonical(&game, k2).unwrap();
        let att = Attitude::shifted_log(1.0, 5.0, 1.0, 0.0).unwrap();
        let amb = AmbiguousExperiment::binary(e1.clone(), e2.clone(), mu_hi).unwrap();
        let em = effective_measure(&game, &amb, &att).unwrap();
        let mu = inverse_effective_measure(&game, &amb.experiments, &em, &att).unwrap();
        prop_assert!((mu[0] - mu_hi).abs() < 1e-10);

        let u1 = obedient_payoff(&game, &e1, Player::Receiver).unwrap();
        let u2 = obedient_payoff(&game, &e2, Player::Receiver).unwrap();
        if (u1 - u2).abs() > 1e-9 {
            let (worse, better, mu_w, mu_b) = if u1 < u2 {
                (em[0], em[1], mu_hi, 1.0 - mu_hi)
            } else {
                (em[1], em[0], 1.0 - mu_hi, mu_hi)
            };
            prop_assert!(worse / better > mu_w / mu_b - 1e-12);
        }
    }

    /// Canonicalizing folds the strategy into the kernel without moving
    /// either player's payoff.
    #[test]
    fn canonicalize_payoff_identity(
        game in small_game(),
        k in kernel(2, 4),
        t in kernel(4, 3),
    ) {
        let messages = vec!["m1".into(), "m2".into(), "m3".into(), "m4".into()];
        let e = Experiment::new(messages, k).unwrap();
        let tau = ReceiverStrategy::new(t).unwrap();
        let canonical = persuasion_core::game::canonicalize_experiment(&game, &e, &tau).unwrap();
        let tau_star = ReceiverStrategy::obedient(3);
        for player in [Player::Sender, Player::Receiver] {
            let before = expected_payoff(&game, &e, &tau, player).unwrap();
            let after = expected_payoff(&game, &canonical, &tau_star, player).unwrap();
            prop_assert!((before - after).abs() < 1e-12);
        }
    }
}
