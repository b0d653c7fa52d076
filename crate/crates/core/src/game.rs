//! Game primitives: payoff matrices, experiments, receiver strategies,
//! best responses, and obedience checks.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Tolerance for validating probability vectors (row sums, priors).
pub const PROB_TOL: f64 = 1e-12;

/// Slack at or above `-OBEDIENCE_TOL` counts as obedient. LP round-off at
/// polytope vertices makes exact-zero slacks unreliable; raw slacks are
/// always reported so callers can tighten.
pub const OBEDIENCE_TOL: f64 = 1e-9;

/// Tolerance for payoff ties in best responses.
pub const TIE_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Player {
    Sender,
    Receiver,
}

/// A finite persuasion game: states, actions, a prior, and one payoff matrix
/// per player indexed `[action][state]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Game {
    pub states: Vec<String>,
    pub actions: Vec<String>,
    pub prior: Vec<f64>,
    pub sender_payoff: Vec<Vec<f64>>,
    pub receiver_payoff: Vec<Vec<f64>>,
}

impl Game {
    pub fn new(
        states: Vec<String>,
        actions: Vec<String>,
        prior: Vec<f64>,
        sender_payoff: Vec<Vec<f64>>,
        receiver_payoff: Vec<Vec<f64>>,
    ) -> Result<Self> {
        let game = Game {
            states,
            actions,
            prior,
            sender_payoff,
            receiver_payoff,
        };
        game.validate()?;
        Ok(game)
    }

    pub fn validate(&self) -> Result<()> {
        if self.states.is_empty() {
            return Err(Error::dim("game states", 1, 0));
        }
        if self.actions.is_empty() {
            return Err(Error::dim("game actions", 1, 0));
        }
        if self.prior.len() != self.states.len() {
            return Err(Error::dim("prior length", self.states.len(), self.prior.len()));
        }
        validate_distribution("prior", &self.prior)?;
        for (name, matrix) in [
            ("sender_payoff", &self.sender_payoff),
            ("receiver_payoff", &self.receiver_payoff),
        ] {
            if matrix.len() != self.actions.len() {
                return Err(Error::dim(format!("{name} rows"), self.actions.len(), matrix.len()));
            }
            for (a, row) in matrix.iter().enumerate() {
                if row.len() != self.states.len() {
                    return Err(Error::dim(
                        format!("{name} row {a}"),
                        self.states.len(),
                        row.len(),
                    ));
                }
                if row.iter().any(|v| !v.is_finite()) {
                    return Err(Error::Precondition {
                        what: format!("{name} row {a} has a non-finite entry"),
                    });
                }
            }
        }
        Ok(())
    }

    pub fn n_states(&self) -> usize {
        self.states.len()
    }

    pub fn n_actions(&self) -> usize {
        self.actions.len()
    }

    pub fn payoff(&self, player: Player, action: usize, state: usize) -> f64 {
        match player {
            Player::Sender => self.sender_payoff[action][state],
            Player::Receiver => self.receiver_payoff[action][state],
        }
    }

    /// Min and max of a player's payoff entries.
    pub fn payoff_range(&self, player: Player) -> (f64, f64) {
        let matrix = match player {
            Player::Sender => &self.sender_payoff,
            Player::Receiver => &self.receiver_payoff,
        };
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for row in matrix {
            for &v in row {
                lo = lo.min(v);
                hi = hi.max(v);
            }
        }
        (lo, hi)
    }

    /// Expected payoff of playing `action` unconditionally at prior `prior`.
    pub fn prior_payoff(&self, player: Player, action: usize, prior: &[f64]) -> f64 {
        (0..self.n_states())
            .map(|w| prior[w] * self.payoff(player, action, w))
            .sum()
    }
}

fn validate_distribution(what: &str, p: &[f64]) -> Result<()> {
    let sum: f64 = p.iter().sum();
    let min = p.iter().cloned().fold(f64::INFINITY, f64::min);
    if !(sum - 1.0).abs().is_finite() || (sum - 1.0).abs() > PROB_TOL * p.len().max(1) as f64 || min < -PROB_TOL
    {
        return Err(Error::InvalidDistribution {
            what: what.to_string(),
            sum,
            min,
        });
    }
    Ok(())
}

/// A statistical experiment: a row-stochastic kernel from states to messages.
/// `kernel[state][message]` is the probability of the message in the state.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Experiment {
    pub messages: Vec<String>,
    pub kernel: Vec<Vec<f64>>,
}

impl Experiment {
    pub fn new(messages: Vec<String>, kernel: Vec<Vec<f64>>) -> Result<Self> {
        let exp = Experiment { messages, kernel };
        exp.validate()?;
        Ok(exp)
    }

    pub fn validate(&self) -> Result<()> {
        if self.messages.is_empty() {
            return Err(Error::dim("experiment messages", 1, 0));
        }
        for (w, row) in self.kernel.iter().enumerate() {
            if row.len() != self.messages.len() {
                return Err(Error::dim(
                    format!("experiment kernel row {w}"),
                    self.messages.len(),
                    row.len(),
                ));
            }
            validate_distribution(&format!("experiment kernel row {w}"), row)?;
        }
        Ok(())
    }

    pub fn n_states(&self) -> usize {
        self.kernel.len()
    }

    pub fn n_messages(&self) -> usize {
        self.messages.len()
    }

    /// Canonical means the message list equals the game's action list.
    pub fn is_canonical(&self, game: &Game) -> bool {
        self.messages == game.actions
    }

    /// Canonical experiment that sends message `actions[pick[w]]` in state `w`
    /// with probability one.
    pub fn deterministic(game: &Game, pick: &[usize]) -> Self {
        let kernel = pick
            .iter()
            .map(|&a| {
                let mut row = vec![0.0; game.n_actions()];
                row[a] = 1.0;
                row
            })
            .collect();
        Experiment {
            messages: game.actions.clone(),
            kernel,
        }
    }

    /// Canonical experiment recommending `action` in every state.
    pub fn uninformative(game: &Game, action: usize) -> Self {
        Experiment::deterministic(game, &vec![action; game.n_states()])
    }

    /// Canonical experiment from a raw kernel over actions.
    pub fn canonical(game: &Game, kernel: Vec<Vec<f64>>) -> Result<Self> {
        let exp = Experiment {
            messages: game.actions.clone(),
            kernel,
        };
        exp.validate()?;
        if exp.n_states() != game.n_states() {
            return Err(Error::dim("experiment states", game.n_states(), exp.n_states()));
        }
        Ok(exp)
    }

    /// Entrywise convex combination `lambda * self + (1 - lambda) * other`.
    pub fn mix(&self, other: &Experiment, lambda: f64) -> Result<Experiment> {
        if self.messages != other.messages {
            return Err(Error::Precondition {
                what: "mixing experiments with different message sets".into(),
            });
        }
        if self.n_states() != other.n_states() {
            return Err(Error::dim("mix states", self.n_states(), other.n_states()));
        }
        let kernel = self
            .kernel
            .iter()
            .zip(&other.kernel)
            .map(|(a, b)| {
                a.iter()
                    .zip(b)
                    .map(|(x, y)| lambda * x + (1.0 - lambda) * y)
                    .collect()
            })
            .collect();
        Ok(Experiment {
            messages: self.messages.clone(),
            kernel,
        })
    }

    /// Messages with positive probability in state `w`.
    pub fn support(&self, w: usize) -> Vec<usize> {
        self.kernel[w]
            .iter()
            .enumerate()
            .filter(|(_, &p)| p > PROB_TOL)
            .map(|(m, _)| m)
            .collect()
    }

    /// Marginal probability of each message under `prior`.
    pub fn message_marginals(&self, prior: &[f64]) -> Vec<f64> {
        let mut marg = vec![0.0; self.n_messages()];
        for (w, row) in self.kernel.iter().enumerate() {
            for (m, &p) in row.iter().enumerate() {
                marg[m] += prior[w] * p;
            }
        }
        marg
    }
}

/// A receiver strategy: a row-stochastic kernel from messages to actions.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReceiverStrategy {
    pub kernel: Vec<Vec<f64>>,
}

impl ReceiverStrategy {
    pub fn new(kernel: Vec<Vec<f64>>) -> Result<Self> {
        for (m, row) in kernel.iter().enumerate() {
            validate_distribution(&format!("strategy row {m}"), row)?;
        }
        Ok(ReceiverStrategy { kernel })
    }

    /// The obedient strategy on `n` messages-as-recommendations: the identity.
    pub fn obedient(n: usize) -> Self {
        let kernel = (0..n)
            .map(|m| {
                let mut row = vec![0.0; n];
                row[m] = 1.0;
                row
            })
            .collect();
        ReceiverStrategy { kernel }
    }

    /// Pure strategy mapping message `m` to action `pick[m]`.
    pub fn pure(pick: &[usize], n_actions: usize) -> Self {
        let kernel = pick
            .iter()
            .map(|&a| {
                let mut row = vec![0.0; n_actions];
                row[a] = 1.0;
                row
            })
            .collect();
        ReceiverStrategy { kernel }
    }

    pub fn n_messages(&self) -> usize {
        self.kernel.len()
    }

    pub fn n_actions(&self) -> usize {
        self.kernel.first().map_or(0, |r| r.len())
    }
}

/// Expected payoff of a player when messages come from `experiment` and the
/// receiver plays `strategy`. Bilinear in (experiment, strategy).
pub fn expected_payoff(
    game: &Game,
    experiment: &Experiment,
    strategy: &ReceiverStrategy,
    player: Player,
) -> Result<f64> {
    expected_payoff_with_prior(game, &game.prior, experiment, strategy, player)
}

/// Same as [`expected_payoff`] with the prior overridden (used by the
/// prior-ambiguity extension).
pub fn expected_payoff_with_prior(
    game: &Game,
    prior: &[f64],
    experiment: &Experiment,
    strategy: &ReceiverStrategy,
    player: Player,
) -> Result<f64> {
    if experiment.n_states() != game.n_states() {
        return Err(Error::dim("experiment states", game.n_states(), experiment.n_states()));
    }
    if strategy.n_messages() != experiment.n_messages() {
        return Err(Error::dim(
            "strategy messages",
            experiment.n_messages(),
            strategy.n_messages(),
        ));
    }
    if strategy.n_actions() != game.n_actions() {
        return Err(Error::dim("strategy actions", game.n_actions(), strategy.n_actions()));
    }
    if prior.len() != game.n_states() {
        return Err(Error::dim("prior length", game.n_states(), prior.len()));
    }
    let mut total = 0.0;
    for w in 0..game.n_states() {
        for m in 0..experiment.n_messages() {
            let pm = prior[w] * experiment.kernel[w][m];
            if pm == 0.0 {
                continue;
            }
            for a in 0..game.n_actions() {
                let ta = strategy.kernel[m][a];
                if ta != 0.0 {
                    total += pm * ta * game.payoff(player, a, w);
                }
            }
        }
    }
    Ok(total)
}

/// Shorthand: a canonical experiment's expected payoff under obedience.
pub fn obedient_payoff(game: &Game, experiment: &Experiment, player: Player) -> Result<f64> {
    let tau = ReceiverStrategy::obedient(experiment.n_messages());
    expected_payoff(game, experiment, &tau, player)
}

pub fn obedient_payoff_with_prior(
    game: &Game,
    prior: &[f64],
    experiment: &Experiment,
    player: Player,
) -> Result<f64> {
    let tau = ReceiverStrategy::obedient(experiment.n_messages());
    expected_payoff_with_prior(game, prior, experiment, &tau, player)
}

/// Receiver best response to an experiment: the optimal value and, per
/// message, the set of maximizing actions. Messages with zero marginal
/// probability admit every action.
#[derive(Debug, Clone, PartialEq)]
pub struct BestResponse {
    /// For each message, indices of all payoff-maximizing actions.
    pub argmax: Vec<Vec<usize>>,
    /// The receiver's optimal expected payoff.
    pub value: f64,
}

impl BestResponse {
    /// One pure strategy per combination of maximizers would be exponential;
    /// this returns the lexicographically first maximizing pure strategy.
    pub fn first_pure(&self, n_actions: usize) -> ReceiverStrategy {
        let pick: Vec<usize> = self.argmax.iter().map(|s| s[0]).collect();
        ReceiverStrategy::pure(&pick, n_actions)
    }

    /// True iff the obedient strategy is among the best responses
    /// (only meaningful when messages are action recommendations).
    pub fn contains_obedient(&self) -> bool {
        self.argmax.iter().enumerate().all(|(m, s)| s.contains(&m))
    }
}

pub fn best_response(game: &Game, experiment: &Experiment) -> Result<BestResponse> {
    best_response_with_prior(game, &game.prior, experiment)
}

pub fn best_response_with_prior(
    game: &Game,
    prior: &[f64],
    experiment: &Experiment,
) -> Result<BestResponse> {
    if experiment.n_states() != game.n_states() {
        return Err(Error::dim("experiment states", game.n_states(), experiment.n_states()));
    }
    let mut argmax = Vec::with_capacity(experiment.n_messages());
    let mut value = 0.0;
    for m in 0..experiment.n_messages() {
        // Unnormalized posterior score of action a on message m.
        let score = |a: usize| -> f64 {
            (0..game.n_states())
                .map(|w| prior[w] * experiment.kernel[w][m] * game.payoff(Player::Receiver, a, w))
                .sum()
        };
        let scores: Vec<f64> = (0..game.n_actions()).map(score).collect();
        let marginal: f64 = (0..game.n_states())
            .map(|w| prior[w] * experiment.kernel[w][m])
            .sum();
        if marginal <= PROB_TOL {
            argmax.push((0..game.n_actions()).collect());
            continue;
        }
        let best = scores.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let set: Vec<usize> = scores
            .iter()
            .enumerate()
            .filter(|(_, &s)| s >= best - TIE_TOL)
            .map(|(a, _)| a)
            .collect();
        value += best;
        argmax.push(set);
    }
    Ok(BestResponse { argmax, value })
}

/// Obedience slacks of a canonical experiment: for every recommended action
/// `a` and deviation `b`, the receiver's gain from obeying,
/// `sum_w p(w) sigma(a|w) (u_r(a,w) - u_r(b,w))`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ObedienceReport {
    pub obedient: bool,
    pub min_slack: f64,
    /// `(recommended, deviation, slack)` triples, all ordered pairs a != b.
    pub slacks: Vec<(usize, usize, f64)>,
}

pub fn is_obedient(game: &Game, experiment: &Experiment) -> Result<ObedienceReport> {
    is_obedient_with_prior(game, &game.prior, experiment)
}

pub fn is_obedient_with_prior(
    game: &Game,
    prior: &[f64],
    experiment: &Experiment,
) -> Result<ObedienceReport> {
    if !experiment.is_canonical(game) {
        return Err(Error::NotCanonical {
            what: "obedience is defined for action-recommendation experiments".into(),
        });
    }
    if experiment.n_states() != game.n_states() {
        return Err(Error::dim("experiment states", game.n_states(), experiment.n_states()));
    }
    let n = game.n_actions();
    let mut slacks = Vec::with_capacity(n * (n - 1));
    let mut min_slack = f64::INFINITY;
    for a in 0..n {
        for b in 0..n {
            if a == b {
                continue;
            }
            let slack: f64 = (0..game.n_states())
                .map(|w| {
                    prior[w]
                        * experiment.kernel[w][a]
                        * (game.payoff(Player::Receiver, a, w) - game.payoff(Player::Receiver, b, w))
                })
                .sum();
            min_slack = min_slack.min(slack);
            slacks.push((a, b, slack));
        }
    }
    if n == 1 {
        min_slack = 0.0;
    }
    Ok(ObedienceReport {
        obedient: min_slack >= -OBEDIENCE_TOL,
        min_slack,
        slacks,
    })
}

/// Revelation-principle transform of a single experiment: fold the receiver
/// strategy into the kernel so messages become action recommendations,
/// `sigma*(a|w) = sum_m tau(a|m) sigma(m|w)`.
pub fn canonicalize_experiment(
    game: &Game,
    experiment: &Experiment,
    strategy: &ReceiverStrategy,
) -> Result<Experiment> {
    if strategy.n_messages() != experiment.n_messages() {
        return Err(Error::dim(
            "strategy messages",
            experiment.n_messages(),
            strategy.n_messages(),
        ));
    }
    if strategy.n_actions() != game.n_actions() {
        return Err(Error::dim("strategy actions", game.n_actions(), strategy.n_actions()));
    }
    let kernel = experiment
        .kernel
        .iter()
        .map(|row| {
            (0..game.n_actions())
                .map(|a| {
                    row.iter()
                        .enumerate()
                        .map(|(m, &p)| strategy.kernel[m][a] * p)
                        .sum()
                })
                .collect()
        })
        .collect();
    Experiment::canonical(game, kernel)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn intro_full_information_receiver_payoff() {
        let game = fixtures::intro_game();
        let sigma = fixtures::intro_sigma_bar();
        let tau = ReceiverStrategy::obedient(3);
        let v = expected_payoff(&game, &sigma, &tau, Player::Receiver).unwrap();
        assert!((v - 1.5).abs() < 1e-12);
    }

    #[test]
    fn intro_uninformative_sender_payoff() {
        let game = fixtures::intro_game();
        let sigma = fixtures::intro_sigma_lower();
        let tau = ReceiverStrategy::obedient(3);
        let v = expected_payoff(&game, &sigma, &tau, Player::Sender).unwrap();
        assert!((v - 0.5).abs() < 1e-12);
    }

    #[test]
    fn message_independent_strategy_gives_prior_payoff() {
        let game = fixtures::intro_game();
        let sigma = fixtures::intro_sigma_bp();
        for a in 0..3 {
            let tau = ReceiverStrategy::pure(&[a, a, a], 3);
            for player in [Player::Sender, Player::Receiver] {
                let v = expected_payoff(&game, &sigma, &tau, player).unwrap();
                let direct = game.prior_payoff(player, a, &game.prior);
                assert!((v - direct).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn expected_payoff_rejects_bad_dimensions() {
        let game = fixtures::intro_game();
        let sigma = fixtures::intro_sigma_bp();
        let tau = ReceiverStrategy::obedient(2);
        let err = expected_payoff(&game, &sigma, &tau, Player::Sender).unwrap_err();
        assert!(matches!(err, Error::DimensionMismatch { .. }));
    }

    #[test]
    fn best_response_at_prior_is_a1() {
        let game = fixtures::intro_game();
        let sigma = fixtures::intro_sigma_lower();
        let br = best_response(&game, &sigma).unwrap();
        // Posterior equals the prior (1/2, 1/2); a1 and a2 tie at value 1/2.
        assert!((br.value - 0.5).abs() < 1e-12);
        assert!(br.argmax[0].contains(&0));
        assert!(br.argmax[0].contains(&1));
        assert!(!br.argmax[0].contains(&2));
    }

    #[test]
    fn best_response_to_revealing_message() {
        let game = fixtures::intro_game();
        let sigma = fixtures::intro_sigma_bp();
        let br = best_response(&game, &sigma).unwrap();
        // Message a2 reveals state w2, where a2 is optimal.
        assert_eq!(br.argmax[1], vec![1]);
        // Message a3 is never sent: every action allowed.
        assert_eq!(br.argmax[2].len(), 3);
    }

    #[test]
    fn dominant_action_always_best() {
        let game = Game::new(
            vec!["w1".into(), "w2".into()],
            vec!["a".into(), "b".into()],
            vec![0.3, 0.7],
            vec![vec![1.0, 1.0], vec![0.0, 0.0]],
            vec![vec![5.0, 5.0], vec![1.0, 0.0]],
        )
        .unwrap();
        for pick in [[0, 0], [0, 1], [1, 0], [1, 1]] {
            let sigma = Experiment::deterministic(&game, &pick);
            let br = best_response(&game, &sigma).unwrap();
            for (m, set) in br.argmax.iter().enumerate() {
                let marginal = sigma.message_marginals(&game.prior)[m];
                if marginal > 0.0 {
                    assert_eq!(set, &vec![0]);
                }
            }
        }
    }

    #[test]
    fn sigma_bp_is_obedient_with_binding_slack() {
        let game = fixtures::intro_game();
        let report = is_obedient(&game, &fixtures::intro_sigma_bp()).unwrap();
        assert!(report.obedient);
        // The a1-vs-a3 constraint binds exactly at sigma^BP.
        assert!(report.min_slack.abs() < 1e-12);
        let a1_vs_a3 = report
            .slacks
            .iter()
            .find(|(a, b, _)| *a == 0 && *b == 2)
            .unwrap()
            .2;
        assert!(a1_vs_a3.abs() < 1e-12);
    }

    #[test]
    fn mostly_informative_mix_is_not_obedient() {
        let game = fixtures::intro_game();
        let mixed = fixtures::intro_sigma_bar()
            .mix(&fixtures::intro_sigma_lower(), 0.9)
            .unwrap();
        // Message a1 leaves posterior 1/11 < 1/5 on w2, so a3 tempts.
        let report = is_obedient(&game, &mixed).unwrap();
        assert!(!report.obedient);
    }

    #[test]
    fn uninformative_recommendation_of_prior_best_action_is_obedient() {
        let game = fixtures::intro_game();
        let sigma = Experiment::uninformative(&game, 0);
        assert!(is_obedient(&game, &sigma).unwrap().obedient);
    }

    #[test]
    fn obedience_requires_canonical() {
        let game = fixtures::intro_game();
        let sigma = Experiment::new(
            vec!["L".into(), "R".into()],
            vec![vec![1.0, 0.0], vec![0.0, 1.0]],
        )
        .unwrap();
        let err = is_obedient(&game, &sigma).unwrap_err();
        assert!(matches!(err, Error::NotCanonical { .. }));
    }

    #[test]
    fn canonicalize_relabels_messages() {
        let game = fixtures::intro_game();
        let sigma = Experiment::new(
            vec!["L".into(), "R".into()],
            vec![vec![1.0, 0.0], vec![0.25, 0.75]],
        )
        .unwrap();
        // L -> a1, R -> a2.
        let tau = ReceiverStrategy::pure(&[0, 1], 3);
        let canonical = canonicalize_experiment(&game, &sigma, &tau).unwrap();
        assert_eq!(canonical.kernel, fixtures::intro_sigma_bp().kernel);
    }

    #[test]
    fn canonicalize_of_canonical_under_obedience_is_identity() {
        let game = fixtures::intro_game();
        let sigma = fixtures::intro_sigma_bp();
        let tau = ReceiverStrategy::obedient(3);
        let out = canonicalize_experiment(&game, &sigma, &tau).unwrap();
        assert_eq!(out.kernel, sigma.kernel);
    }
}
