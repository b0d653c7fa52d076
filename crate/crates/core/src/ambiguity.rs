//! Ambiguous experiments and the smooth-ambiguity machinery: valuations,
//! effective measures and their inverse, probability premiums, and the
//! effective-posterior updating implementation.

use serde::{Deserialize, Serialize};

use crate::attitude::Attitude;
use crate::error::{Error, Result};
use crate::game::{
    expected_payoff, expected_payoff_with_prior, is_obedient, obedient_payoff, Experiment, Game,
    ObedienceReport, Player, ReceiverStrategy, PROB_TOL,
};

/// A finite tuple of experiments together with a probability vector over
/// which one generates the message.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AmbiguousExperiment {
    pub experiments: Vec<Experiment>,
    pub weights: Vec<f64>,
}

impl AmbiguousExperiment {
    pub fn new(experiments: Vec<Experiment>, weights: Vec<f64>) -> Result<Self> {
        if experiments.is_empty() {
            return Err(Error::dim("ambiguous experiments", 1, 0));
        }
        if weights.len() != experiments.len() {
            return Err(Error::dim("ambiguous weights", experiments.len(), weights.len()));
        }
        let sum: f64 = weights.iter().sum();
        let min = weights.iter().cloned().fold(f64::INFINITY, f64::min);
        if (sum - 1.0).abs() > PROB_TOL * weights.len() as f64 || min < -PROB_TOL {
            return Err(Error::InvalidDistribution {
                what: "ambiguous experiment weights".into(),
                sum,
                min,
            });
        }
        let first = &experiments[0];
        for (i, e) in experiments.iter().enumerate() {
            e.validate()?;
            if e.messages != first.messages {
                return Err(Error::Precondition {
                    what: format!("experiment {i} has a different message set"),
                });
            }
        }
        Ok(AmbiguousExperiment {
            experiments,
            weights,
        })
    }

    /// Singleton tuple: the unambiguous special case.
    pub fn singleton(experiment: Experiment) -> Self {
        AmbiguousExperiment {
            experiments: vec![experiment],
            weights: vec![1.0],
        }
    }

    /// Binary tuple `(hi, lo)` with probability `mu_hi` on `hi`.
    pub fn binary(hi: Experiment, lo: Experiment, mu_hi: f64) -> Result<Self> {
        AmbiguousExperiment::new(vec![hi, lo], vec![mu_hi, 1.0 - mu_hi])
    }

    pub fn len(&self) -> usize {
        self.experiments.len()
    }

    pub fn is_empty(&self) -> bool {
        self.experiments.is_empty()
    }

    /// All experiments canonical for `game`.
    pub fn is_canonical(&self, game: &Game) -> bool {
        self.experiments.iter().all(|e| e.is_canonical(game))
    }

    fn require_canonical(&self, game: &Game) -> Result<()> {
        if !self.is_canonical(game) {
            return Err(Error::NotCanonical {
                what: "ambiguous experiment must use action recommendations".into(),
            });
        }
        Ok(())
    }

    /// Weighted mixture `sum_t w_t sigma_t` for an arbitrary weight vector.
    pub fn mixture(&self, weights: &[f64]) -> Result<Experiment> {
        if weights.len() != self.len() {
            return Err(Error::dim("mixture weights", self.len(), weights.len()));
        }
        let n_states = self.experiments[0].n_states();
        let n_msgs = self.experiments[0].n_messages();
        let mut kernel = vec![vec![0.0; n_msgs]; n_states];
        for (e, &w) in self.experiments.iter().zip(weights) {
            for s in 0..n_states {
                for m in 0..n_msgs {
                    kernel[s][m] += w * e.kernel[s][m];
                }
            }
        }
        Experiment::new(self.experiments[0].messages.clone(), kernel)
    }

    /// Obedient payoff of each experiment in the tuple.
    pub fn payoffs(&self, game: &Game, player: Player) -> Result<Vec<f64>> {
        self.experiments
            .iter()
            .map(|e| obedient_payoff(game, e, player))
            .collect()
    }
}

/// Revelation-principle transform: fold `strategy` into every kernel so the
/// tuple becomes canonical while preserving each experiment's payoffs.
pub fn canonicalize(
    game: &Game,
    ambiguous: &AmbiguousExperiment,
    strategy: &ReceiverStrategy,
) -> Result<AmbiguousExperiment> {
    let experiments = ambiguous
        .experiments
        .iter()
        .map(|e| crate::game::canonicalize_experiment(game, e, strategy))
        .collect::<Result<Vec<_>>>()?;
    Ok(AmbiguousExperiment {
        experiments,
        weights: ambiguous.weights.clone(),
    })
}

/// Smooth-ambiguity certainty equivalent
/// `phi^-1( sum_t mu_t phi(u_i(sigma_t, tau)) )` for a given strategy.
pub fn smooth_value(
    game: &Game,
    ambiguous: &AmbiguousExperiment,
    strategy: &ReceiverStrategy,
    attitude: &Attitude,
    player: Player,
) -> Result<f64> {
    if attitude.is_meu() {
        return Err(Error::Unsupported {
            what: "smooth_value does not handle the meu attitude; use the maxmin solver".into(),
        });
    }
    let payoffs = ambiguous
        .experiments
        .iter()
        .map(|e| expected_payoff(game, e, strategy, player))
        .collect::<Result<Vec<_>>>()?;
    attitude.certainty_equivalent(&ambiguous.weights, &payoffs)
}

/// Smooth value under the obedient strategy.
pub fn smooth_value_obedient(
    game: &Game,
    ambiguous: &AmbiguousExperiment,
    attitude: &Attitude,
    player: Player,
) -> Result<f64> {
    let tau = ReceiverStrategy::obedient(ambiguous.experiments[0].n_messages());
    smooth_value(game, ambiguous, &tau, attitude, player)
}

/// The receiver's effective measure: weights `mu_t phi'(u_r(sigma_t, tau*))`
/// normalized. The distorted measure under which the ambiguity-averse
/// receiver behaves like an expected-utility agent; same support as `mu`.
pub fn effective_measure(
    game: &Game,
    ambiguous: &AmbiguousExperiment,
    attitude_r: &Attitude,
) -> Result<Vec<f64>> {
    ambiguous.require_canonical(game)?;
    let payoffs = ambiguous.payoffs(game, Player::Receiver)?;
    effective_measure_from_payoffs(&ambiguous.weights, &payoffs, attitude_r)
}

pub(crate) fn effective_measure_from_payoffs(
    mu: &[f64],
    receiver_payoffs: &[f64],
    attitude_r: &Attitude,
) -> Result<Vec<f64>> {
    let mut weighted = Vec::with_capacity(mu.len());
    for (&m, &u) in mu.iter().zip(receiver_payoffs) {
        if m > 0.0 {
            weighted.push(m * attitude_r.deriv(u)?);
        } else {
            weighted.push(0.0);
        }
    }
    let total: f64 = weighted.iter().sum();
    if !total.is_finite() || total <= 0.0 {
        return Err(Error::AttitudeDomain {
            what: format!("effective-measure normalizer {total} is not positive and finite"),
        });
    }
    Ok(weighted.into_iter().map(|w| w / total).collect())
}

/// Invert the effective-measure map: the `mu` that generates `target_em`
/// for the fixed tuple, `mu_t` proportional to `em_t / phi'(u_r(sigma_t))`.
pub fn inverse_effective_measure(
    game: &Game,
    experiments: &[Experiment],
    target_em: &[f64],
    attitude_r: &Attitude,
) -> Result<Vec<f64>> {
    if target_em.len() != experiments.len() {
        return Err(Error::dim("target effective measure", experiments.len(), target_em.len()));
    }
    let sum: f64 = target_em.iter().sum();
    let min = target_em.iter().cloned().fold(f64::INFINITY, f64::min);
    if (sum - 1.0).abs() > 1e-9 || min < -PROB_TOL {
        return Err(Error::InvalidDistribution {
            what: "target effective measure".into(),
            sum,
            min,
        });
    }
    let mut weighted = Vec::with_capacity(target_em.len());
    for (e, &em) in experiments.iter().zip(target_em) {
        if em > 0.0 {
            let u = obedient_payoff(game, e, Player::Receiver)?;
            weighted.push(em / attitude_r.deriv(u)?);
        } else {
            weighted.push(0.0);
        }
    }
    let total: f64 = weighted.iter().sum();
    if !total.is_finite() || total <= 0.0 {
        return Err(Error::AttitudeDomain {
            what: "inverse effective measure normalizer is not positive".into(),
        });
    }
    Ok(weighted.into_iter().map(|w| w / total).collect())
}

/// Obedience certificate for an ambiguous experiment: obedience holds iff the
/// effective-measure mixture `sigma* = sum_t em_t sigma_t` is obedient.
pub fn is_obedient_ambiguous(
    game: &Game,
    ambiguous: &AmbiguousExperiment,
    attitude_r: &Attitude,
) -> Result<(ObedienceReport, Experiment)> {
    let em = effective_measure(game, ambiguous, attitude_r)?;
    let effective = ambiguous.mixture(&em)?;
    let report = is_obedient(game, &effective)?;
    Ok((report, effective))
}

/// The extra weight on the better experiment needed to compensate a player
/// for bearing the ambiguity of the binary split `(hi, lo, lambda)`:
/// `[phi(u(sigma*)) - lambda phi(u_hi) - (1-lambda) phi(u_lo)] / [phi(u_hi) - phi(u_lo)]`
/// with `sigma* = lambda hi + (1-lambda) lo`. Zero for affine phi,
/// non-negative under concavity, and always in [0, 1].
pub fn probability_premium(
    game: &Game,
    hi: &Experiment,
    lo: &Experiment,
    lambda: f64,
    attitude: &Attitude,
    player: Player,
) -> Result<f64> {
    if !(0.0..=1.0).contains(&lambda) {
        return Err(Error::precondition(format!("lambda {lambda} outside [0, 1]")));
    }
    let u_hi = obedient_payoff(game, hi, player)?;
    let u_lo = obedient_payoff(game, lo, player)?;
    if u_hi <= u_lo {
        return Err(Error::precondition(format!(
            "probability premium needs u(hi) > u(lo), got {u_hi} <= {u_lo}"
        )));
    }
    let u_mix = lambda * u_hi + (1.0 - lambda) * u_lo;
    let p_mix = attitude.value(u_mix)?;
    let p_hi = attitude.value(u_hi)?;
    let p_lo = attitude.value(u_lo)?;
    Ok((p_mix - lambda * p_hi - (1.0 - lambda) * p_lo) / (p_hi - p_lo))
}

/// Joint effective posterior over (experiment index, state) after observing
/// `message`: the Bayes update of `em x prior x kernel`. Its state marginal
/// equals the posterior of the effective experiment at that message.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EffectivePosterior {
    /// `joint[t][w]`: posterior probability of experiment `t` and state `w`.
    pub joint: Vec<Vec<f64>>,
    /// Posterior over states (marginal of `joint`).
    pub state_marginal: Vec<f64>,
    /// Prior probability of the message under the effective experiment.
    pub message_probability: f64,
}

pub fn effective_posterior(
    game: &Game,
    ambiguous: &AmbiguousExperiment,
    attitude_r: &Attitude,
    message: usize,
) -> Result<EffectivePosterior> {
    ambiguous.require_canonical(game)?;
    if message >= game.n_actions() {
        return Err(Error::dim("message index", game.n_actions(), message));
    }
    let em = effective_measure(game, ambiguous, attitude_r)?;
    let mut joint = vec![vec![0.0; game.n_states()]; ambiguous.len()];
    let mut total = 0.0;
    for (t, e) in ambiguous.experiments.iter().enumerate() {
        for w in 0..game.n_states() {
            let mass = em[t] * game.prior[w] * e.kernel[w][message];
            joint[t][w] = mass;
            total += mass;
        }
    }
    if total <= PROB_TOL {
        return Err(Error::precondition(format!(
            "message {message} has zero probability under the effective experiment"
        )));
    }
    for row in &mut joint {
        for v in row.iter_mut() {
            *v /= total;
        }
    }
    let state_marginal = (0..game.n_states())
        .map(|w| joint.iter().map(|row| row[w]).sum())
        .collect();
    Ok(EffectivePosterior {
        joint,
        state_marginal,
        message_probability: total,
    })
}

/// Effective measure under an arbitrary prior (prior-ambiguity extension).
pub fn effective_measure_with_prior(
    game: &Game,
    prior: &[f64],
    ambiguous: &AmbiguousExperiment,
    attitude_r: &Attitude,
) -> Result<Vec<f64>> {
    ambiguous.require_canonical(game)?;
    let tau = ReceiverStrategy::obedient(game.n_actions());
    let payoffs = ambiguous
        .experiments
        .iter()
        .map(|e| expected_payoff_with_prior(game, prior, e, &tau, Player::Receiver))
        .collect::<Result<Vec<_>>>()?;
    effective_measure_from_payoffs(&ambiguous.weights, &payoffs, attitude_r)
}
