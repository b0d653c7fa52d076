//! Optimal ambiguous persuasion.
//!
//! The sender's problem is solved through a change of variables to effective
//! measures: for a candidate sender value `u`, the score
//! `Phi_u(sigma) = (phi_s(u_s(sigma)) - phi_s(u)) / phi_r'(u_r(sigma))`
//! is maximized over convex combinations of experiments whose mixture is
//! obedient. That program is linear in the combination weights, so its value
//! is lower-bounded by an LP over a finite sample of experiments, refined
//! locally around incumbent supports. The optimal value is the root of
//! `u -> Phi*(u)`, found by bisection between the unambiguous optimum and the
//! best sender payoff; the optimizer's weights are the effective measure, and
//! inverting them yields the announced distribution over experiments.

use serde::Serialize;

use crate::ambiguity::{inverse_effective_measure, smooth_value_obedient, AmbiguousExperiment};
use crate::attitude::{Attitude, InverseDerivCurvature};
use crate::bp::{obedience_rows, solve_bp};
use crate::error::{Error, Result};
use crate::game::{is_obedient, obedient_payoff, Experiment, Game, ObedienceReport, Player};
use crate::lp::{solve_lp, LinearProgram, LpStatus, Relation};
use crate::sampling;
use crate::splitting::{find_pareto_split, find_split_filtered, SplitFilter, SplitSearch};
use rand_chacha::ChaCha8Rng;

#[derive(Debug, Clone, Serialize)]
pub struct SolverConfig {
    /// Seeded random experiments added to the sample bank.
    pub sample_budget: usize,
    /// Cap on fully enumerated deterministic experiments (`|A|^|Omega|`).
    pub deterministic_cap: usize,
    /// Local refinement passes per evaluation of the sampled program.
    pub refine_rounds: usize,
    /// Perturbed copies added around each incumbent support point per pass.
    pub refine_points: usize,
    /// Initial refinement radius, halved each pass.
    pub refine_radius: f64,
    /// Stop refining when a pass improves the value by less than this.
    pub refine_tol: f64,
    /// Bisection interval width at termination.
    pub bisect_tol: f64,
    pub max_bisect_iters: usize,
    /// Sampled value above this threshold counts as a strict benefit.
    pub benefit_threshold: f64,
    pub seed: u64,
    /// Accepted for forward compatibility; evaluation is sequential.
    pub threads: usize,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            sample_budget: 300,
            deterministic_cap: 4096,
            refine_rounds: 5,
            refine_points: 10,
            refine_radius: 0.25,
            refine_tol: 1e-7,
            bisect_tol: 1e-6,
            max_bisect_iters: 200,
            benefit_threshold: 1e-6,
            seed: 7,
            threads: 1,
        }
    }
}

/// The per-experiment score whose concavification over obedient mixtures
/// characterizes the optimum.
pub fn phi_u(
    game: &Game,
    experiment: &Experiment,
    u: f64,
    attitude_s: &Attitude,
    attitude_r: &Attitude,
) -> Result<f64> {
    let us = obedient_payoff(game, experiment, Player::Sender)?;
    let ur = obedient_payoff(game, experiment, Player::Receiver)?;
    Ok((attitude_s.value(us)? - attitude_s.value(u)?) / attitude_r.deriv(ur)?)
}

struct Sample {
    experiment: Experiment,
    us: f64,
    /// phi_r'(u_r), cached.
    deriv_r: f64,
    /// Obedience slack coefficients, one per ordered action pair.
    slack: Vec<f64>,
}

struct SampleBank {
    samples: Vec<Sample>,
    pair_count: usize,
}

impl SampleBank {
    fn contains(&self, experiment: &Experiment) -> bool {
        self.samples.iter().any(|s| {
            s.experiment
                .kernel
                .iter()
                .zip(&experiment.kernel)
                .all(|(a, b)| a.iter().zip(b).all(|(x, y)| (x - y).abs() < 1e-12))
        })
    }

    fn push(&mut self, game: &Game, attitude_r: &Attitude, experiment: Experiment) -> Result<()> {
        if self.contains(&experiment) {
            return Ok(());
        }
        let us = obedient_payoff(game, &experiment, Player::Sender)?;
        let ur = obedient_payoff(game, &experiment, Player::Receiver)?;
        let deriv_r = attitude_r.deriv(ur)?;
        let rows = obedience_rows(game, &game.prior);
        let n_a = game.n_actions();
        let flat: Vec<f64> = experiment.kernel.iter().flatten().cloned().collect();
        let slack = rows
            .iter()
            .map(|row| row.iter().zip(&flat).map(|(c, v)| c * v).sum())
            .collect();
        self.pair_count = n_a * (n_a - 1);
        self.samples.push(Sample {
            experiment,
            us,
            deriv_r,
            slack,
        });
        Ok(())
    }

    fn len(&self) -> usize {
        self.samples.len()
    }
}

fn build_bank(
    game: &Game,
    attitude_s: &Attitude,
    attitude_r: &Attitude,
    config: &SolverConfig,
    rng: &mut ChaCha8Rng,
) -> Result<(SampleBank, f64)> {
    let mut bank = SampleBank {
        samples: Vec::new(),
        pair_count: game.n_actions() * (game.n_actions() - 1),
    };
    let n_a = game.n_actions();
    let n_w = game.n_states();

    // Constant-recommendation experiments first: they guarantee a feasible
    // obedient point in every sampled program.
    for a in 0..n_a {
        bank.push(game, attitude_r, Experiment::uninformative(game, a))?;
    }
    // Deterministic experiments, enumerated when small enough.
    let total = (n_a as f64).powi(n_w as i32);
    if total <= config.deterministic_cap as f64 {
        let mut pick = vec![0usize; n_w];
        loop {
            bank.push(game, attitude_r, Experiment::deterministic(game, &pick))?;
            let mut done = true;
            for w in (0..n_w).rev() {
                pick[w] += 1;
                if pick[w] < n_a {
                    done = false;
                    break;
                }
                pick[w] = 0;
            }
            if done {
                break;
            }
        }
    } else {
        for _ in 0..config.deterministic_cap {
            let pick: Vec<usize> = (0..n_w)
                .map(|_| rand::Rng::gen_range(rng, 0..n_a))
                .collect();
            bank.push(game, attitude_r, Experiment::deterministic(game, &pick))?;
        }
    }

    // The unambiguous optimum and splitting candidates around it.
    let bp = solve_bp(game)?;
    bank.push(game, attitude_r, bp.experiment.clone())?;
    if let Some(split) = find_pareto_split(game, &bp.experiment)? {
        bank.push(game, attitude_r, split.hi)?;
        bank.push(game, attitude_r, split.lo)?;
    }

    for _ in 0..config.sample_budget {
        bank.push(game, attitude_r, sampling::random_experiment(rng, game))?;
    }

    let _ = attitude_s; // payoff cache is attitude_s independent
    Ok((bank, bp.value))
}

/// One LP solve of the sampled program at level `u`.
fn sampled_lp(
    bank: &SampleBank,
    u: f64,
    attitude_s: &Attitude,
) -> Result<(f64, Vec<f64>)> {
    let phi_su = attitude_s.value(u)?;
    let scores: Vec<f64> = bank
        .samples
        .iter()
        .map(|s| Ok((attitude_s.value(s.us)? - phi_su) / s.deriv_r))
        .collect::<Result<Vec<_>>>()?;
    let n = bank.len();
    let mut lp = LinearProgram::maximize(scores);
    lp = lp.with_row(vec![1.0; n], Relation::Eq, 1.0);
    for pair in 0..bank.pair_count {
        let row: Vec<f64> = bank.samples.iter().map(|s| s.slack[pair]).collect();
        lp = lp.with_row(row, Relation::Ge, 0.0);
    }
    let sol = solve_lp(&lp)?;
    if sol.status != LpStatus::Optimal {
        return Err(Error::LpFailure {
            what: format!("sampled concavification LP at u={u} reported {:?}", sol.status),
        });
    }
    Ok((sol.objective, sol.x))
}

/// Sampled-program evaluation with local refinement: perturb incumbent
/// support experiments at a halving radius and re-solve until the value
/// stops improving. The bank only grows, so values are monotone in budget.
fn refine_at(
    game: &Game,
    bank: &mut SampleBank,
    u: f64,
    attitude_s: &Attitude,
    attitude_r: &Attitude,
    config: &SolverConfig,
    rng: &mut ChaCha8Rng,
) -> Result<(f64, Vec<f64>)> {
    let (mut value, mut weights) = sampled_lp(bank, u, attitude_s)?;
    let mut radius = config.refine_radius;
    for _ in 0..config.refine_rounds {
        let support: Vec<usize> = weights
            .iter()
            .enumerate()
            .filter(|(_, &w)| w > 1e-9)
            .map(|(i, _)| i)
            .collect();
        for &i in &support {
            let base = bank.samples[i].experiment.clone();
            for _ in 0..config.refine_points {
                let perturbed = sampling::perturb_experiment(rng, &base, radius);
                bank.push(game, attitude_r, perturbed)?;
            }
        }
        let (new_value, new_weights) = sampled_lp(bank, u, attitude_s)?;
        let improved = new_value - value;
        value = new_value;
        weights = new_weights;
        if improved < config.refine_tol {
            break;
        }
        radius *= 0.5;
    }
    Ok((value, weights))
}

/// Witness for one level `u` of the sampled program.
#[derive(Debug, Clone, Serialize)]
pub struct PhiStarSolution {
    pub u: f64,
    pub value: f64,
    /// Splitting weights (the receiver's effective measure at the optimum).
    pub weights: Vec<f64>,
    pub experiments: Vec<Experiment>,
    pub effective_experiment: Experiment,
    pub obedience: ObedienceReport,
}

pub fn solve_phi_star(
    game: &Game,
    u: f64,
    attitude_s: &Attitude,
    attitude_r: &Attitude,
    config: &SolverConfig,
) -> Result<PhiStarSolution> {
    game.validate()?;
    check_attitudes(game, attitude_s, attitude_r)?;
    let mut rng = sampling::rng(config.seed);
    let (mut bank, _) = build_bank(game, attitude_s, attitude_r, config, &mut rng)?;
    let (value, weights) = refine_at(game, &mut bank, u, attitude_s, attitude_r, config, &mut rng)?;
    package_witness(game, &bank, u, value, &weights)
}

fn package_witness(
    game: &Game,
    bank: &SampleBank,
    u: f64,
    value: f64,
    weights: &[f64],
) -> Result<PhiStarSolution> {
    let support: Vec<usize> = weights
        .iter()
        .enumerate()
        .filter(|(_, &w)| w > 1e-9)
        .map(|(i, _)| i)
        .collect();
    let mut lam: Vec<f64> = support.iter().map(|&i| weights[i]).collect();
    let total: f64 = lam.iter().sum();
    for w in &mut lam {
        *w /= total;
    }
    let experiments: Vec<Experiment> = support
        .iter()
        .map(|&i| bank.samples[i].experiment.clone())
        .collect();
    let tuple = AmbiguousExperiment::new(experiments.clone(), lam.clone())?;
    let effective = tuple.mixture(&lam)?;
    let obedience = is_obedient(game, &effective)?;
    Ok(PhiStarSolution {
        u,
        value,
        weights: lam,
        experiments,
        effective_experiment: effective,
        obedience,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct BisectionStep {
    pub u: f64,
    pub value: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct SolveDiagnostics {
    pub bp_value: f64,
    pub trace: Vec<BisectionStep>,
    pub final_width: f64,
    /// Sampled program values at `root -/+ 1e-3` on the final bank.
    pub side_check: (f64, f64),
    pub sample_count: usize,
    pub support_before_reduction: usize,
    pub support_after_reduction: usize,
    /// Absolute change of the sampled-program objective under the support
    /// reduction (zero up to LP round-off).
    pub reduction_value_change: f64,
    pub obedient: bool,
    pub min_slack: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct AmbiguousSolution {
    /// The sender's smooth value of the returned ambiguous experiment.
    pub value: f64,
    pub ambiguous: AmbiguousExperiment,
    /// The receiver's effective measure over the support (the splitting
    /// weights of the effective experiment).
    pub effective_measure: Vec<f64>,
    pub diagnostics: SolveDiagnostics,
}

fn check_attitudes(game: &Game, attitude_s: &Attitude, attitude_r: &Attitude) -> Result<()> {
    if attitude_s.is_meu() || attitude_r.is_meu() {
        return Err(Error::Unsupported {
            what: "smooth solvers reject the meu tag; use the maxmin solver".into(),
        });
    }
    let (lo_r, hi_r) = game.payoff_range(Player::Receiver);
    attitude_r.validate_on_range(lo_r, hi_r)?;
    let (lo_s, hi_s) = game.payoff_range(Player::Sender);
    attitude_s.validate_on_range(lo_s, hi_s)?;
    Ok(())
}

pub fn solve_ambiguous(
    game: &Game,
    attitude_s: &Attitude,
    attitude_r: &Attitude,
    config: &SolverConfig,
) -> Result<AmbiguousSolution> {
    game.validate()?;
    check_attitudes(game, attitude_s, attitude_r)?;
    let mut rng = sampling::rng(config.seed);
    let (mut bank, bp_value) = build_bank(game, attitude_s, attitude_r, config, &mut rng)?;
    let u_top = game.payoff_range(Player::Sender).1;

    let mut trace = Vec::new();
    let (v0, _) = refine_at(game, &mut bank, bp_value, attitude_s, attitude_r, config, &mut rng)?;
    trace.push(BisectionStep {
        u: bp_value,
        value: v0,
    });

    if v0 <= config.benefit_threshold || u_top <= bp_value + config.bisect_tol {
        // No strict benefit: the unambiguous optimum stands.
        let bp = solve_bp(game)?;
        let (_, bp_weights) = sampled_weights_for(&bank, &bp.experiment);
        let witness = package_witness(game, &bank, bp_value, v0, &bp_weights)?;
        let side = side_check(&bank, bp_value, attitude_s, config)?;
        let obedient = witness.obedience.obedient;
        let min_slack = witness.obedience.min_slack;
        return Ok(AmbiguousSolution {
            value: bp_value,
            ambiguous: AmbiguousExperiment::singleton(bp.experiment),
            effective_measure: vec![1.0],
            diagnostics: SolveDiagnostics {
                bp_value,
                trace,
                final_width: 0.0,
                side_check: side,
                sample_count: bank.len(),
                support_before_reduction: 1,
                support_after_reduction: 1,
                reduction_value_change: 0.0,
                obedient,
                min_slack,
            },
        });
    }

    // Outer loop: bisect on the fixed bank, then refine at the root; if new
    // samples push the root further right, bisect again on the larger bank.
    let mut lo = bp_value;
    let mut hi = u_top;
    let mut root = bp_value;
    let mut iters = 0usize;
    let outer_rounds = 5;
    for outer in 0..outer_rounds {
        while hi - lo > config.bisect_tol {
            iters += 1;
            if iters > config.max_bisect_iters {
                return Err(Error::NoConvergence {
                    what: format!(
                        "bisection did not reach width {} in {} steps",
                        config.bisect_tol, config.max_bisect_iters
                    ),
                });
            }
            let mid = 0.5 * (lo + hi);
            let (v, _) = sampled_lp(&bank, mid, attitude_s)?;
            trace.push(BisectionStep { u: mid, value: v });
            if v > 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        root = 0.5 * (lo + hi);
        if outer + 1 == outer_rounds {
            break;
        }
        let before = bank.len();
        let (v_root, _) =
            refine_at(game, &mut bank, root, attitude_s, attitude_r, config, &mut rng)?;
        if v_root > config.benefit_threshold && bank.len() > before {
            // Refinement found genuinely better support: the root lies right.
            lo = root;
            hi = u_top;
            continue;
        }
        break;
    }

    // The witness is the optimizer a hair below the root, re-solved on the
    // final bank.
    let (_, root_weights) = sampled_lp(&bank, lo, attitude_s)?;
    let support_before = root_weights.iter().filter(|&&w| w > 1e-9).count();

    // Caratheodory reduction: pin the effective experiment and re-solve the
    // restricted program; a basic optimum uses at most
    // |Omega| * (|A|-1) + 1 experiments at unchanged value.
    let reduced = caratheodory_reduce(game, &bank, &root_weights, root, attitude_s)?;
    let score_at = |weights: &[f64]| -> Result<f64> {
        let phi_su = attitude_s.value(root)?;
        let mut total = 0.0;
        for (sample, &w) in bank.samples.iter().zip(weights) {
            if w > 0.0 {
                total += w * (attitude_s.value(sample.us)? - phi_su) / sample.deriv_r;
            }
        }
        Ok(total)
    };
    let reduction_value_change = (score_at(&reduced)? - score_at(&root_weights)?).abs();
    let witness = package_witness(game, &bank, root, 0.0, &reduced)?;

    let mu = inverse_effective_measure(game, &witness.experiments, &witness.weights, attitude_r)?;
    let ambiguous = AmbiguousExperiment::new(witness.experiments.clone(), mu)?;
    let value = smooth_value_obedient(game, &ambiguous, attitude_s, Player::Sender)?;

    let side = side_check(&bank, root, attitude_s, config)?;
    Ok(AmbiguousSolution {
        value,
        ambiguous,
        effective_measure: witness.weights.clone(),
        diagnostics: SolveDiagnostics {
            bp_value,
            trace,
            final_width: hi - lo,
            side_check: side,
            sample_count: bank.len(),
            support_before_reduction: support_before,
            support_after_reduction: witness.weights.len(),
            reduction_value_change,
            obedient: witness.obedience.obedient,
            min_slack: witness.obedience.min_slack,
        },
    })
}

fn side_check(
    bank: &SampleBank,
    root: f64,
    attitude_s: &Attitude,
    _config: &SolverConfig,
) -> Result<(f64, f64)> {
    let (below, _) = sampled_lp(bank, root - 1e-3, attitude_s)?;
    let (above, _) = sampled_lp(bank, root + 1e-3, attitude_s)?;
    Ok((below, above))
}

/// Weight vector putting all mass on (the bank copy of) `experiment`.
fn sampled_weights_for(bank: &SampleBank, experiment: &Experiment) -> (usize, Vec<f64>) {
    let mut weights = vec![0.0; bank.len()];
    let idx = bank
        .samples
        .iter()
        .position(|s| {
            s.experiment
                .kernel
                .iter()
                .zip(&experiment.kernel)
                .all(|(a, b)| a.iter().zip(b).all(|(x, y)| (x - y).abs() < 1e-9))
        })
        .unwrap_or(0);
    weights[idx] = 1.0;
    (idx, weights)
}

fn caratheodory_reduce(
    game: &Game,
    bank: &SampleBank,
    weights: &[f64],
    u: f64,
    attitude_s: &Attitude,
) -> Result<Vec<f64>> {
    let support: Vec<usize> = weights
        .iter()
        .enumerate()
        .filter(|(_, &w)| w > 1e-9)
        .map(|(i, _)| i)
        .collect();
    let dim = game.n_states() * (game.n_actions() - 1);
    if support.len() <= dim + 1 {
        return Ok(weights.to_vec());
    }
    // Target effective experiment, dropping the last action column per state
    // (row sums make it redundant).
    let n_a = game.n_actions();
    let mut target = vec![0.0; dim];
    for (&i, &w) in support.iter().zip(support.iter().map(|&i| &weights[i])) {
        for s in 0..game.n_states() {
            for a in 0..(n_a - 1) {
                target[s * (n_a - 1) + a] += w * bank.samples[i].experiment.kernel[s][a];
            }
        }
    }
    let phi_su = attitude_s.value(u)?;
    let scores: Vec<f64> = support
        .iter()
        .map(|&i| {
            let s = &bank.samples[i];
            Ok((attitude_s.value(s.us)? - phi_su) / s.deriv_r)
        })
        .collect::<Result<Vec<_>>>()?;
    let k = support.len();
    let mut lp = LinearProgram::maximize(scores);
    for s in 0..game.n_states() {
        for a in 0..(n_a - 1) {
            let row: Vec<f64> = support
                .iter()
                .map(|&i| bank.samples[i].experiment.kernel[s][a])
                .collect();
            lp = lp.with_row(row, Relation::Eq, target[s * (n_a - 1) + a]);
        }
    }
    lp = lp.with_row(vec![1.0; k], Relation::Eq, 1.0);
    let sol = solve_lp(&lp)?;
    if sol.status != LpStatus::Optimal {
        // The incumbent weights are feasible, so fall back to them.
        return Ok(weights.to_vec());
    }
    let mut out = vec![0.0; bank.len()];
    for (&i, &w) in support.iter().zip(&sol.x) {
        if w > 1e-9 {
            out[i] = w;
        }
    }
    let total: f64 = out.iter().sum();
    for w in &mut out {
        *w /= total;
    }
    Ok(out)
}

#[derive(Debug, Clone, Serialize)]
pub struct BenefitReport {
    pub benefits: bool,
    /// Value of the sampled program at the unambiguous optimum.
    pub margin: f64,
    pub bp_value: f64,
}

/// Strict-benefit test: ambiguity helps iff the sampled program at the
/// unambiguous optimum has strictly positive value.
pub fn benefits_from_ambiguity(
    game: &Game,
    attitude_s: &Attitude,
    attitude_r: &Attitude,
    config: &SolverConfig,
) -> Result<BenefitReport> {
    game.validate()?;
    check_attitudes(game, attitude_s, attitude_r)?;
    let mut rng = sampling::rng(config.seed);
    let (mut bank, bp_value) = build_bank(game, attitude_s, attitude_r, config, &mut rng)?;
    let (margin, _) = refine_at(game, &mut bank, bp_value, attitude_s, attitude_r, config, &mut rng)?;
    Ok(BenefitReport {
        benefits: margin > config.benefit_threshold,
        margin,
        bp_value,
    })
}

#[derive(Debug, Clone, Serialize)]
pub enum OptimalityViolation {
    /// A bracketing support pair the players rank oppositely; merging it at
    /// the effective weights strictly improves the sender.
    UnrankedBracketingPair {
        i: usize,
        j: usize,
        merged: Experiment,
        improved_value: f64,
    },
    /// A support experiment admits a Pareto-ranked splitting bracketing the
    /// solution value (affine-sender check).
    BracketingSplit { theta: usize },
    /// Same-side pair check under concave/convex `1/phi_r'`.
    UnrankedSameSidePair { i: usize, j: usize },
    /// Same-side splitting check under concave/convex `1/phi_r'`.
    SameSideSplit { theta: usize },
}

#[derive(Debug, Clone, Serialize)]
pub struct ValidationReport {
    pub clean: bool,
    pub violations: Vec<OptimalityViolation>,
}

/// Necessary-condition checks on a candidate optimum. A violation means the
/// candidate is improvable (and for bracketing pairs the improving merge is
/// returned), not that the validator failed.
pub fn validate_optimality(
    game: &Game,
    solution: &AmbiguousSolution,
    attitude_s: &Attitude,
    attitude_r: &Attitude,
) -> Result<ValidationReport> {
    let mut violations = Vec::new();
    let tuple = &solution.ambiguous;
    if tuple.len() < 2 {
        return Ok(ValidationReport {
            clean: true,
            violations,
        });
    }
    let us = tuple.payoffs(game, Player::Sender)?;
    let ur = tuple.payoffs(game, Player::Receiver)?;
    let lam = &solution.effective_measure;
    let u_val = solution.value;
    let tol = 1e-9;

    // (i) bracketing pairs must be weakly Pareto-ranked.
    for i in 0..tuple.len() {
        for j in 0..tuple.len() {
            if i == j {
                continue;
            }
            let bracket =
                us[i] >= u_val - tol && us[j] <= u_val + tol && us[i] > us[j] + tol;
            if !bracket {
                continue;
            }
            if ur[i] < ur[j] - tol {
                // Opposite ranking: merge at effective weights.
                let alpha = lam[i] / (lam[i] + lam[j]);
                let merged = tuple.experiments[i].mix(&tuple.experiments[j], alpha)?;
                let improved = merged_value(game, tuple, lam, i, j, &merged, attitude_s, attitude_r)?;
                violations.push(OptimalityViolation::UnrankedBracketingPair {
                    i,
                    j,
                    merged,
                    improved_value: improved,
                });
            }
        }
    }

    // (ii) with an affine sender, no bracketing Pareto-ranked splitting of a
    // support experiment may exist.
    let search = SplitSearch {
        extreme_cap: 256,
        random_candidates: 300,
        seed: 914,
    };
    if attitude_s.is_affine() {
        let filter = SplitFilter {
            min_us_hi: Some(u_val),
            max_us_lo: Some(u_val),
            ..SplitFilter::default()
        };
        for (theta, exp) in tuple.experiments.iter().enumerate() {
            if find_split_filtered(game, exp, &filter, &search)?.is_some() {
                violations.push(OptimalityViolation::BracketingSplit { theta });
            }
        }
    }

    // (iii) same-side checks keyed to the curvature of 1/phi_r'.
    match attitude_r.inverse_deriv_curvature() {
        InverseDerivCurvature::Concave => {
            same_side_pair_check(&us, &ur, u_val, true, tol, attitude_r, &mut violations)?;
            if attitude_s.is_affine() {
                let filter = SplitFilter {
                    max_us_hi: Some(u_val),
                    ..SplitFilter::default()
                };
                same_side_split_check(game, tuple, &filter, &search, &mut violations)?;
            }
        }
        InverseDerivCurvature::Convex => {
            same_side_pair_check(&us, &ur, u_val, false, tol, attitude_r, &mut violations)?;
            if attitude_s.is_affine() {
                let filter = SplitFilter {
                    min_us_lo: Some(u_val),
                    ..SplitFilter::default()
                };
                same_side_split_check(game, tuple, &filter, &search, &mut violations)?;
            }
        }
        InverseDerivCurvature::Affine => {
            // (iv) affine 1/phi_r' with an affine sender: every support pair
            // must be weakly Pareto-ranked, and no support experiment may
            // admit any Pareto-ranked splitting at all.
            if attitude_r.is_strictly_concave() {
                for i in 0..tuple.len() {
                    for j in (i + 1)..tuple.len() {
                        let agree = (us[i] - us[j]) * (ur[i] - ur[j]);
                        if agree < -tol
                            && (us[i] - us[j]).abs() > tol
                            && (ur[i] - ur[j]).abs() > tol
                        {
                            violations.push(OptimalityViolation::UnrankedSameSidePair { i, j });
                        }
                    }
                }
                if attitude_s.is_affine() {
                    for (theta, exp) in tuple.experiments.iter().enumerate() {
                        if find_split_filtered(game, exp, &SplitFilter::default(), &search)?
                            .is_some()
                        {
                            violations.push(OptimalityViolation::SameSideSplit { theta });
                        }
                    }
                }
            }
        }
    }

    Ok(ValidationReport {
        clean: violations.is_empty(),
        violations,
    })
}

#[allow(clippy::too_many_arguments)]
fn merged_value(
    game: &Game,
    tuple: &AmbiguousExperiment,
    lam: &[f64],
    i: usize,
    j: usize,
    merged: &Experiment,
    attitude_s: &Attitude,
    attitude_r: &Attitude,
) -> Result<f64> {
    // Replace the pair by its merge in effective-measure space, invert, and
    // price the sender's smooth value of the new tuple.
    let mut experiments = Vec::new();
    let mut weights = Vec::new();
    for t in 0..tuple.len() {
        if t == i {
            experiments.push(merged.clone());
            weights.push(lam[i] + lam[j]);
        } else if t != j {
            experiments.push(tuple.experiments[t].clone());
            weights.push(lam[t]);
        }
    }
    let mu = inverse_effective_measure(game, &experiments, &weights, attitude_r)?;
    let new_tuple = AmbiguousExperiment::new(experiments, mu)?;
    smooth_value_obedient(game, &new_tuple, attitude_s, Player::Sender)
}

fn same_side_pair_check(
    us: &[f64],
    ur: &[f64],
    u_val: f64,
    upper_side: bool,
    tol: f64,
    attitude_r: &Attitude,
    violations: &mut Vec<OptimalityViolation>,
) -> Result<()> {
    for i in 0..us.len() {
        for j in (i + 1)..us.len() {
            let on_side = if upper_side {
                us[i] > u_val + tol && us[j] > u_val + tol
            } else {
                us[i] <= u_val + tol && us[j] <= u_val + tol
            };
            if !on_side || (us[i] - us[j]).abs() <= tol {
                continue;
            }
            if (attitude_r.deriv(ur[i])? - attitude_r.deriv(ur[j])?).abs() <= tol {
                continue;
            }
            if (us[i] - us[j]) * (ur[i] - ur[j]) < -tol {
                violations.push(OptimalityViolation::UnrankedSameSidePair { i, j });
            }
        }
    }
    Ok(())
}

fn same_side_split_check(
    game: &Game,
    tuple: &AmbiguousExperiment,
    filter: &SplitFilter,
    search: &SplitSearch,
    violations: &mut Vec<OptimalityViolation>,
) -> Result<()> {
    for (theta, exp) in tuple.experiments.iter().enumerate() {
        if find_split_filtered(game, exp, filter, search)?.is_some() {
            violations.push(OptimalityViolation::SameSideSplit { theta });
        }
    }
    Ok(())
}

/// Lower bound from a hand-picked splitting: evaluate the sampled score of a
/// fixed collection at level `u` (used by regression tests).
pub fn splitting_score(
    game: &Game,
    experiments: &[Experiment],
    weights: &[f64],
    u: f64,
    attitude_s: &Attitude,
    attitude_r: &Attitude,
) -> Result<f64> {
    let mut total = 0.0;
    for (exp, &w) in experiments.iter().zip(weights) {
        total += w * phi_u(game, exp, u, attitude_s, attitude_r)?;
    }
    Ok(total)
}

/// Convenience: sender value of announcing `experiments` with the measure
/// that makes `target_em` the receiver's effective measure.
pub fn splitting_sender_value(
    game: &Game,
    experiments: &[Experiment],
    target_em: &[f64],
    attitude_s: &Attitude,
    attitude_r: &Attitude,
) -> Result<f64> {
    let mu = inverse_effective_measure(game, experiments, target_em, attitude_r)?;
    let tuple = AmbiguousExperiment::new(experiments.to_vec(), mu)?;
    smooth_value_obedient(game, &tuple, attitude_s, Player::Sender)
}
