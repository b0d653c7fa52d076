//! Pareto-ranked splittings of obedient experiments and the binary ambiguous
//! improvements they generate: existence tests, construction, comparative
//! statics, perturbation robustness, and the order of the receiver's
//! ambiguity cost for small splittings.

use serde::Serialize;

use crate::ambiguity::{
    is_obedient_ambiguous, probability_premium, smooth_value_obedient, AmbiguousExperiment,
};
use crate::attitude::{Attitude, ConcaveTransform, TransformedAttitude};
use crate::bp::solve_bp;
use crate::error::{Error, Result};
use crate::game::{is_obedient, obedient_payoff, Experiment, Game, Player, PROB_TOL};
use crate::sampling;

/// A strict convex decomposition `base = lambda * hi + (1 - lambda) * lo`
/// into two experiments both players strictly rank the same way.
#[derive(Debug, Clone, Serialize)]
pub struct SplitTriple {
    pub hi: Experiment,
    pub lo: Experiment,
    pub lambda: f64,
}

impl SplitTriple {
    /// Entrywise reconstruction `lambda*hi + (1-lambda)*lo`.
    pub fn reconstruct(&self) -> Result<Experiment> {
        self.hi.mix(&self.lo, self.lambda)
    }

    pub fn max_reconstruction_error(&self, base: &Experiment) -> f64 {
        let mixed = self.hi.mix(&self.lo, self.lambda).expect("consistent shapes");
        let mut err: f64 = 0.0;
        for (row, base_row) in mixed.kernel.iter().zip(&base.kernel) {
            for (v, b) in row.iter().zip(base_row) {
                err = err.max((v - b).abs());
            }
        }
        err
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SpanningReport {
    pub spans: bool,
    /// Designated on-support action per state (highest recommendation
    /// probability, ties to the lower action index).
    pub designated: Vec<usize>,
    /// Scaled payoff-difference vectors `(sender, receiver)` per on-support
    /// action and state.
    pub vectors: Vec<(f64, f64)>,
}

/// Spanning test for the existence of a Pareto-ranked splitting: collect the
/// vectors `p(w) (u_i(a,w) - u_i(a_w,w))` over on-support actions and report
/// whether they span the plane.
pub fn spanning_test(game: &Game, experiment: &Experiment) -> Result<SpanningReport> {
    if !experiment.is_canonical(game) {
        return Err(Error::NotCanonical {
            what: "spanning test expects a canonical experiment".into(),
        });
    }
    let mut designated = Vec::with_capacity(game.n_states());
    let mut vectors = Vec::new();
    for w in 0..game.n_states() {
        let support = experiment.support(w);
        let a_w = *support
            .iter()
            .max_by(|&&a, &&b| {
                experiment.kernel[w][a]
                    .partial_cmp(&experiment.kernel[w][b])
                    .unwrap()
                    .then(b.cmp(&a))
            })
            .ok_or_else(|| Error::Internal {
                what: format!("state {w} has empty support"),
            })?;
        designated.push(a_w);
        for &a in &support {
            vectors.push((
                game.prior[w] * (game.payoff(Player::Sender, a, w) - game.payoff(Player::Sender, a_w, w)),
                game.prior[w]
                    * (game.payoff(Player::Receiver, a, w) - game.payoff(Player::Receiver, a_w, w)),
            ));
        }
    }
    let scale = vectors
        .iter()
        .map(|(s, r)| s.abs().max(r.abs()))
        .fold(0.0f64, f64::max)
        .max(1.0);
    let tol = 1e-12 * scale * scale;
    let spans = vectors.iter().enumerate().any(|(i, &(s1, r1))| {
        vectors[i + 1..]
            .iter()
            .any(|&(s2, r2)| (s1 * r2 - r1 * s2).abs() > tol)
    });
    Ok(SpanningReport {
        spans,
        designated,
        vectors,
    })
}

/// Payoff bounds a candidate split must satisfy (used by the optimality
/// validators to look for bracketing or same-side splittings only).
#[derive(Debug, Clone, Copy, Default)]
pub(crate) struct SplitFilter {
    pub min_us_hi: Option<f64>,
    pub max_us_hi: Option<f64>,
    pub max_us_lo: Option<f64>,
    pub min_us_lo: Option<f64>,
}

/// Search budget for [`find_pareto_split`].
#[derive(Debug, Clone, Copy)]
pub struct SplitSearch {
    /// Cap on enumerated on-support deterministic candidates.
    pub extreme_cap: usize,
    /// Seeded random on-support candidates tried after the extremes.
    pub random_candidates: usize,
    pub seed: u64,
}

impl Default for SplitSearch {
    fn default() -> Self {
        SplitSearch {
            extreme_cap: 512,
            random_candidates: 1000,
            seed: 20240501,
        }
    }
}

/// Find a Pareto-ranked splitting of `experiment`, searching for a dominating
/// experiment `hi` supported within the base supports. Candidates are tried
/// in a fixed order: on-support extreme experiments, seeded random kernels,
/// then the improving direction from the spanning test. On success the split
/// weight is the largest `lambda` keeping `lo` a valid kernel, which makes
/// `lo` hit the boundary of the support face.
pub fn find_pareto_split(game: &Game, experiment: &Experiment) -> Result<Option<SplitTriple>> {
    find_pareto_split_with(game, experiment, &SplitSearch::default())
}

pub fn find_pareto_split_with(
    game: &Game,
    experiment: &Experiment,
    search: &SplitSearch,
) -> Result<Option<SplitTriple>> {
    find_split_filtered(game, experiment, &SplitFilter::default(), search)
}

pub(crate) fn find_split_filtered(
    game: &Game,
    experiment: &Experiment,
    filter: &SplitFilter,
    search: &SplitSearch,
) -> Result<Option<SplitTriple>> {
    if !experiment.is_canonical(game) {
        return Err(Error::NotCanonical {
            what: "splitting search expects a canonical experiment".into(),
        });
    }
    let us0 = obedient_payoff(game, experiment, Player::Sender)?;
    let ur0 = obedient_payoff(game, experiment, Player::Receiver)?;
    let supports: Vec<Vec<usize>> = (0..game.n_states()).map(|w| experiment.support(w)).collect();

    let try_candidate = |hi: &Experiment| -> Result<Option<SplitTriple>> {
        let us_hi = obedient_payoff(game, hi, Player::Sender)?;
        let ur_hi = obedient_payoff(game, hi, Player::Receiver)?;
        if us_hi <= us0 + 1e-10 || ur_hi <= ur0 + 1e-10 {
            return Ok(None);
        }
        if let Some(min) = filter.min_us_hi {
            if us_hi < min - 1e-9 {
                return Ok(None);
            }
        }
        if let Some(max) = filter.max_us_hi {
            if us_hi > max + 1e-9 {
                return Ok(None);
            }
        }
        Ok(split_against(game, experiment, hi, filter, us0, us_hi))
    };

    // Extreme experiments on the support face.
    let combos: usize = supports.iter().map(|s| s.len()).product();
    if combos <= search.extreme_cap {
        let mut pick = vec![0usize; game.n_states()];
        loop {
            let assignment: Vec<usize> = pick
                .iter()
                .enumerate()
                .map(|(w, &i)| supports[w][i])
                .collect();
            let hi = Experiment::deterministic(game, &assignment);
            if let Some(triple) = try_candidate(&hi)? {
                return Ok(Some(triple));
            }
            // Advance the odometer.
            let mut done = true;
            for w in (0..game.n_states()).rev() {
                pick[w] += 1;
                if pick[w] < supports[w].len() {
                    done = false;
                    break;
                }
                pick[w] = 0;
            }
            if done {
                break;
            }
        }
    }

    let mut rng = sampling::rng(search.seed);
    for _ in 0..search.random_candidates {
        let hi = sampling::random_experiment_on_support(&mut rng, game, &supports);
        if let Some(triple) = try_candidate(&hi)? {
            return Ok(Some(triple));
        }
    }

    // Ray along the spanning-test direction, when it spans.
    if let Some(hi) = spanning_direction_candidate(game, experiment, &supports)? {
        if let Some(triple) = try_candidate(&hi)? {
            return Ok(Some(triple));
        }
    }

    Ok(None)
}

/// Build the split against a strictly dominating `hi`:
/// `lo = (base - lambda*hi) / (1 - lambda)` at the largest feasible lambda.
fn split_against(
    game: &Game,
    base: &Experiment,
    hi: &Experiment,
    filter: &SplitFilter,
    us0: f64,
    us_hi: f64,
) -> Option<SplitTriple> {
    let mut lambda_max = f64::INFINITY;
    for w in 0..game.n_states() {
        for a in 0..game.n_actions() {
            if hi.kernel[w][a] > PROB_TOL {
                lambda_max = lambda_max.min(base.kernel[w][a] / hi.kernel[w][a]);
            }
        }
    }
    if !(lambda_max > 1e-9) {
        return None;
    }
    let mut lambda = lambda_max.min(1.0 - 1e-9);
    // Same-side validators need lo's sender payoff above a floor, which
    // shrinks lambda: us(lo) = (us0 - lambda*us_hi) / (1 - lambda).
    if let Some(min_lo) = filter.min_us_lo {
        if us_hi > min_lo + 1e-12 && us0 > min_lo {
            lambda = lambda.min(0.9 * (us0 - min_lo) / (us_hi - min_lo));
        } else {
            return None;
        }
    }
    // Shrink geometrically if round-off pushes an entry negative.
    for _ in 0..40 {
        if lambda < 1e-6 {
            return None;
        }
        match lower_part(game, base, hi, lambda) {
            Some(lo) => {
                let us_lo = obedient_payoff(game, &lo, Player::Sender).ok()?;
                let ur_lo = obedient_payoff(game, &lo, Player::Receiver).ok()?;
                let ur_hi = obedient_payoff(game, hi, Player::Receiver).ok()?;
                if !(us_hi > us_lo + 1e-10 && ur_hi > ur_lo + 1e-10) {
                    return None;
                }
                if let Some(max) = filter.max_us_lo {
                    if us_lo > max + 1e-9 {
                        return None;
                    }
                }
                if let Some(min) = filter.min_us_lo {
                    if us_lo < min - 1e-9 {
                        return None;
                    }
                }
                return Some(SplitTriple {
                    hi: hi.clone(),
                    lo,
                    lambda,
                });
            }
            None => lambda *= 0.5,
        }
    }
    None
}

fn lower_part(game: &Game, base: &Experiment, hi: &Experiment, lambda: f64) -> Option<Experiment> {
    let mut kernel = Vec::with_capacity(game.n_states());
    for w in 0..game.n_states() {
        let mut row = Vec::with_capacity(game.n_actions());
        for a in 0..game.n_actions() {
            let v = (base.kernel[w][a] - lambda * hi.kernel[w][a]) / (1.0 - lambda);
            if v < -1e-9 {
                return None;
            }
            row.push(v.max(0.0));
        }
        let sum: f64 = row.iter().sum();
        for v in &mut row {
            *v /= sum;
        }
        kernel.push(row);
    }
    Experiment::canonical(game, kernel).ok()
}

/// Perturbation of the base experiment along a least-norm combination of the
/// spanning vectors aimed at the direction where both payoffs rise.
fn spanning_direction_candidate(
    game: &Game,
    experiment: &Experiment,
    supports: &[Vec<usize>],
) -> Result<Option<Experiment>> {
    let report = spanning_test(game, experiment)?;
    if !report.spans {
        return Ok(None);
    }
    // Coordinates: on-support actions other than the designated one.
    let mut coords: Vec<(usize, usize)> = Vec::new();
    let mut vectors: Vec<(f64, f64)> = Vec::new();
    for w in 0..game.n_states() {
        let a_w = report.designated[w];
        for &a in &supports[w] {
            if a != a_w {
                coords.push((w, a));
                vectors.push((
                    game.prior[w]
                        * (game.payoff(Player::Sender, a, w) - game.payoff(Player::Sender, a_w, w)),
                    game.prior[w]
                        * (game.payoff(Player::Receiver, a, w)
                            - game.payoff(Player::Receiver, a_w, w)),
                ));
            }
        }
    }
    // Least-norm x with M x = (1, 1): x = M^T (M M^T)^{-1} (1,1).
    let (mut g11, mut g12, mut g22) = (0.0, 0.0, 0.0);
    for &(s, r) in &vectors {
        g11 += s * s;
        g12 += s * r;
        g22 += r * r;
    }
    let det = g11 * g22 - g12 * g12;
    if det.abs() < 1e-14 {
        return Ok(None);
    }
    let y1 = (g22 - g12) / det;
    let y2 = (g11 - g12) / det;
    let x: Vec<f64> = vectors.iter().map(|&(s, r)| s * y1 + r * y2).collect();

    // Largest step keeping all on-support entries non-negative.
    let mut t_max = f64::INFINITY;
    let mut deltas = vec![vec![0.0; game.n_actions()]; game.n_states()];
    for (&(w, a), &dx) in coords.iter().zip(&x) {
        deltas[w][a] += dx;
        deltas[w][report.designated[w]] -= dx;
    }
    for w in 0..game.n_states() {
        for a in 0..game.n_actions() {
            if deltas[w][a] < -1e-15 {
                t_max = t_max.min(-experiment.kernel[w][a] / deltas[w][a]);
            }
        }
    }
    if !t_max.is_finite() || t_max <= 1e-12 {
        return Ok(None);
    }
    let t = 0.9 * t_max;
    let mut kernel = experiment.kernel.clone();
    for w in 0..game.n_states() {
        for a in 0..game.n_actions() {
            kernel[w][a] = (kernel[w][a] + t * deltas[w][a]).max(0.0);
        }
        let sum: f64 = kernel[w].iter().sum();
        for v in &mut kernel[w] {
            *v /= sum;
        }
    }
    Ok(Some(Experiment::canonical(game, kernel)?))
}

/// A binary ambiguous experiment built on a Pareto-ranked splitting, with the
/// weight on the better experiment raised just enough that the effective
/// measure lands back on the splitting weights.
#[derive(Debug, Clone, Serialize)]
pub struct BinaryImprovement {
    pub ambiguous: AmbiguousExperiment,
    pub mu_hi: f64,
    pub lambda: f64,
    pub sender_gain: f64,
    pub receiver_gain: f64,
    pub sender_premium: f64,
    pub obedient: bool,
    pub min_slack: f64,
}

pub fn binary_improvement(
    game: &Game,
    base: &Experiment,
    split: &SplitTriple,
    attitude_r: &Attitude,
    attitude_s: &Attitude,
) -> Result<BinaryImprovement> {
    let base_report = is_obedient(game, base)?;
    if !base_report.obedient {
        return Err(Error::precondition("base experiment is not obedient"));
    }
    let err = split.max_reconstruction_error(base);
    if err > 1e-8 {
        return Err(Error::precondition(format!(
            "split does not reconstruct the base experiment (error {err:.2e})"
        )));
    }
    let us_hi = obedient_payoff(game, &split.hi, Player::Sender)?;
    let us_lo = obedient_payoff(game, &split.lo, Player::Sender)?;
    let ur_hi = obedient_payoff(game, &split.hi, Player::Receiver)?;
    let ur_lo = obedient_payoff(game, &split.lo, Player::Receiver)?;
    if !(us_hi > us_lo && ur_hi > ur_lo) {
        return Err(Error::precondition(
            "split is not Pareto-ranked with the sender preferring hi",
        ));
    }
    let lambda = split.lambda;
    let d_lo = attitude_r.deriv(ur_lo)?;
    let d_hi = attitude_r.deriv(ur_hi)?;
    let mu_hi = lambda * d_lo / (lambda * d_lo + (1.0 - lambda) * d_hi);

    let ambiguous = AmbiguousExperiment::binary(split.hi.clone(), split.lo.clone(), mu_hi)?;
    let (report, _) = is_obedient_ambiguous(game, &ambiguous, attitude_r)?;

    let us_base = obedient_payoff(game, base, Player::Sender)?;
    let ur_base = obedient_payoff(game, base, Player::Receiver)?;
    let sender_value = smooth_value_obedient(game, &ambiguous, attitude_s, Player::Sender)?;
    let receiver_value = smooth_value_obedient(game, &ambiguous, attitude_r, Player::Receiver)?;
    let sender_premium =
        probability_premium(game, &split.hi, &split.lo, lambda, attitude_s, Player::Sender)?;

    Ok(BinaryImprovement {
        ambiguous,
        mu_hi,
        lambda,
        sender_gain: sender_value - us_base,
        receiver_gain: receiver_value - ur_base,
        sender_premium,
        obedient: report.obedient,
        min_slack: report.min_slack,
    })
}

/// Comparative statics of a beneficial binary improvement: a less
/// ambiguity-averse sender keeps the benefit with the same experiment, and a
/// more ambiguity-averse receiver keeps it after re-tuning the weights (or
/// even without re-tuning when the worse experiment is itself obedient).
#[derive(Debug, Clone, Serialize)]
pub struct ComparativeStatics {
    pub base_sender_gain: f64,
    /// Gain of an ambiguity-neutral sender from the same (experiments, mu).
    pub neutral_sender_gain: f64,
    /// Re-tuned weight for the transformed (more concave) receiver attitude.
    pub mu_tilde_hi: f64,
    pub transformed_obedient: bool,
    pub transformed_sender_gain: f64,
    /// When `lo` is obedient: the original mu works unchanged.
    pub unchanged_mu: Option<UnchangedMu>,
}

#[derive(Debug, Clone, Serialize)]
pub struct UnchangedMu {
    pub obedient: bool,
    pub sender_gain: f64,
}

pub fn comparative_statics(
    game: &Game,
    base: &Experiment,
    split: &SplitTriple,
    attitude_r: &Attitude,
    attitude_s: &Attitude,
    transform: ConcaveTransform,
) -> Result<ComparativeStatics> {
    let improvement = binary_improvement(game, base, split, attitude_r, attitude_s)?;
    if improvement.sender_gain <= 0.0 {
        return Err(Error::precondition(
            "the binary improvement does not benefit the sender at this attitude",
        ));
    }
    let us_base = obedient_payoff(game, base, Player::Sender)?;
    let amb = &improvement.ambiguous;
    let neutral_value = smooth_value_obedient(game, amb, &Attitude::linear(), Player::Sender)?;

    let tilde = TransformedAttitude::new(attitude_r.clone(), transform);
    let ur = amb.payoffs(game, Player::Receiver)?;
    // Re-tune mu so the transformed receiver's effective measure stays at the
    // splitting weights (lambda, 1 - lambda).
    let em = [improvement.lambda, 1.0 - improvement.lambda];
    let inv_weights: Vec<f64> = em
        .iter()
        .zip(&ur)
        .map(|(&e, &u)| Ok(e / tilde.deriv(u)?))
        .collect::<Result<Vec<_>>>()?;
    let total: f64 = inv_weights.iter().sum();
    let mu_tilde_hi = inv_weights[0] / total;
    let retuned = AmbiguousExperiment::binary(split.hi.clone(), split.lo.clone(), mu_tilde_hi)?;

    let tilde_em = {
        let w: Vec<f64> = retuned
            .weights
            .iter()
            .zip(&ur)
            .map(|(&m, &u)| Ok(m * tilde.deriv(u)?))
            .collect::<Result<Vec<_>>>()?;
        let t: f64 = w.iter().sum();
        w.into_iter().map(|v| v / t).collect::<Vec<f64>>()
    };
    let effective = retuned.mixture(&tilde_em)?;
    let transformed_obedient = is_obedient(game, &effective)?.obedient;
    let transformed_sender_value = {
        let us = retuned.payoffs(game, Player::Sender)?;
        attitude_s.certainty_equivalent(&retuned.weights, &us)?
    };

    let unchanged_mu = if is_obedient(game, &split.lo)?.obedient {
        let em_unchanged: Vec<f64> = {
            let w: Vec<f64> = amb
                .weights
                .iter()
                .zip(&ur)
                .map(|(&m, &u)| Ok(m * tilde.deriv(u)?))
                .collect::<Result<Vec<_>>>()?;
            let t: f64 = w.iter().sum();
            w.into_iter().map(|v| v / t).collect()
        };
        let effective = amb.mixture(&em_unchanged)?;
        Some(UnchangedMu {
            obedient: is_obedient(game, &effective)?.obedient,
            sender_gain: improvement.sender_gain,
        })
    } else {
        None
    };

    Ok(ComparativeStatics {
        base_sender_gain: improvement.sender_gain,
        neutral_sender_gain: neutral_value - us_base,
        mu_tilde_hi,
        transformed_obedient,
        transformed_sender_gain: transformed_sender_value - us_base,
        unchanged_mu,
    })
}

/// Perturbation robustness of a strictly beneficial ambiguous experiment: the
/// largest tested radius at which all seeded perturbations of the kernels and
/// weights stay obedient and keep the ambiguity-neutral sender above the
/// unambiguous optimum. Kernel perturbations preserve supports: the players
/// misperceive likelihoods and weights, not which messages can occur.
#[derive(Debug, Clone, Serialize)]
pub struct RobustnessReport {
    /// Largest fully passing radius; 0 when every tested radius fails.
    pub radius: f64,
    /// `(radius, passes out of trials)` for each tested radius.
    pub tested: Vec<(f64, usize)>,
    pub trials: usize,
}

pub fn robustness_ball(
    game: &Game,
    ambiguous: &AmbiguousExperiment,
    attitude_r: &Attitude,
    radii: &[f64],
    seed: u64,
) -> Result<RobustnessReport> {
    let bp = solve_bp(game)?;
    let (report, _) = is_obedient_ambiguous(game, ambiguous, attitude_r)?;
    let value = smooth_value_obedient(game, ambiguous, &Attitude::linear(), Player::Sender)?;
    if !report.obedient || value <= bp.value + 1e-12 {
        return Err(Error::precondition(
            "robustness ball needs a strictly beneficial obedient ambiguous experiment",
        ));
    }
    let trials = 100;
    let mut radii = radii.to_vec();
    radii.sort_by(|a, b| b.partial_cmp(a).unwrap());
    let mut tested = Vec::new();
    let mut best = 0.0;
    for &radius in &radii {
        let mut rng = sampling::rng(seed ^ radius.to_bits());
        let mut passes = 0;
        for _ in 0..trials {
            let experiments: Vec<Experiment> = ambiguous
                .experiments
                .iter()
                .map(|e| sampling::perturb_experiment_on_support(&mut rng, e, radius))
                .collect();
            let weights = sampling::perturb_simplex(&mut rng, &ambiguous.weights, radius);
            let Ok(perturbed) = AmbiguousExperiment::new(experiments, weights) else {
                continue;
            };
            let Ok((rep, _)) = is_obedient_ambiguous(game, &perturbed, attitude_r) else {
                continue;
            };
            if !rep.obedient {
                continue;
            }
            let v = smooth_value_obedient(game, &perturbed, &Attitude::linear(), Player::Sender)?;
            if v > bp.value {
                passes += 1;
            }
        }
        tested.push((radius, passes));
        if passes == trials && best == 0.0 {
            best = radius;
        }
    }
    Ok(RobustnessReport {
        radius: best,
        tested,
        trials,
    })
}

/// Log-log slopes of the receiver's ambiguity cost and of the weight gain for
/// a symmetric eps-splitting family around an obedient experiment. The cost
/// fits close to slope 2 (second order) while the extra weight on the better
/// experiment fits close to slope 1.
#[derive(Debug, Clone, Serialize)]
pub struct EnvelopeReport {
    pub cost_exponent: Option<f64>,
    pub gain_exponent: Option<f64>,
    /// True when the receiver is ambiguity neutral on the family's payoff
    /// range, making the cost identically zero.
    pub degenerate: bool,
    pub ladder: Vec<f64>,
}

pub fn envelope_order_check(
    game: &Game,
    base: &Experiment,
    attitude_r: &Attitude,
) -> Result<Option<EnvelopeReport>> {
    if !is_obedient(game, base)?.obedient {
        return Err(Error::precondition("envelope check needs an obedient base"));
    }
    let Some(split) = find_pareto_split(game, base)? else {
        return Ok(None);
    };
    let ur_hi = obedient_payoff(game, &split.hi, Player::Receiver)?;
    let ur_lo = obedient_payoff(game, &split.lo, Player::Receiver)?;
    let gap = ur_hi - ur_lo;
    // Direction d = hi - lo moves the receiver payoff by `gap` per unit step.
    let delta: Vec<Vec<f64>> = split
        .hi
        .kernel
        .iter()
        .zip(&split.lo.kernel)
        .map(|(h, l)| h.iter().zip(l).map(|(a, b)| a - b).collect())
        .collect();
    // Largest symmetric step keeping both arms valid kernels: rows of delta
    // sum to zero, so only base -/+ t*|delta| >= 0 binds.
    let mut t_max = f64::INFINITY;
    for w in 0..game.n_states() {
        for a in 0..game.n_actions() {
            if delta[w][a].abs() > 1e-15 {
                t_max = t_max.min(base.kernel[w][a] / delta[w][a].abs());
            }
        }
    }
    if !t_max.is_finite() || t_max <= 1e-9 {
        return Ok(None);
    }
    let eps_cap = 0.9 * t_max * gap;
    let base_ladder = [0.2, 0.1, 0.05, 0.025];
    let scale = if base_ladder[0] > eps_cap {
        eps_cap / base_ladder[0]
    } else {
        1.0
    };
    let ladder: Vec<f64> = base_ladder.iter().map(|e| e * scale).collect();

    let mut costs = Vec::new();
    let mut gains = Vec::new();
    for &eps in &ladder {
        let t = eps / gap;
        let arm = |sign: f64| -> Result<Experiment> {
            let kernel = base
                .kernel
                .iter()
                .zip(&delta)
                .map(|(row, drow)| {
                    row.iter()
                        .zip(drow)
                        .map(|(v, d)| (v + sign * t * d).max(0.0))
                        .collect::<Vec<f64>>()
                })
                .map(|row: Vec<f64>| {
                    let s: f64 = row.iter().sum();
                    row.into_iter().map(|v| v / s).collect()
                })
                .collect();
            Experiment::canonical(game, kernel)
        };
        let hi = arm(1.0)?;
        let lo = arm(-1.0)?;
        let u_hi = obedient_payoff(game, &hi, Player::Receiver)?;
        let u_lo = obedient_payoff(game, &lo, Player::Receiver)?;
        let d_lo = attitude_r.deriv(u_lo)?;
        let d_hi = attitude_r.deriv(u_hi)?;
        let mu = d_lo / (d_lo + d_hi);
        let neutral = mu * u_hi + (1.0 - mu) * u_lo;
        let smooth = attitude_r.certainty_equivalent(&[mu, 1.0 - mu], &[u_hi, u_lo])?;
        costs.push(neutral - smooth);
        gains.push(mu - 0.5);
    }

    let degenerate = costs.iter().all(|&c| c.abs() < 1e-14);
    let cost_exponent = fit_slope(&ladder, &costs);
    let gain_exponent = fit_slope(&ladder, &gains);
    Ok(Some(EnvelopeReport {
        cost_exponent,
        gain_exponent,
        degenerate,
        ladder,
    }))
}

fn fit_slope(xs: &[f64], ys: &[f64]) -> Option<f64> {
    if ys.iter().any(|&y| y <= 1e-14) {
        return None;
    }
    let lx: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|y| y.ln()).collect();
    let n = lx.len() as f64;
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxx: f64 = lx.iter().map(|x| (x - mx) * (x - mx)).sum();
    let sxy: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    if sxx < 1e-14 {
        return None;
    }
    Some(sxy / sxx)
}

/// Necessity scanner: a beneficial obedient ambiguous experiment must carry
/// a Pareto-ranked pair whose sender payoffs bracket the unambiguous optimum.
pub fn has_bracketing_pareto_pair(
    game: &Game,
    ambiguous: &AmbiguousExperiment,
    bp_value: f64,
) -> Result<bool> {
    let us = ambiguous.payoffs(game, Player::Sender)?;
    let ur = ambiguous.payoffs(game, Player::Receiver)?;
    for i in 0..ambiguous.len() {
        for j in 0..ambiguous.len() {
            if i == j || ambiguous.weights[i] <= PROB_TOL || ambiguous.weights[j] <= PROB_TOL {
                continue;
            }
            let bracket = us[i] > bp_value + 1e-9 && us[j] <= bp_value + 1e-9;
            let ranked = us[i] > us[j] + 1e-12 && ur[i] > ur[j] + 1e-12;
            if bracket && ranked {
                return Ok(true);
            }
        }
    }
    Ok(false)
}
