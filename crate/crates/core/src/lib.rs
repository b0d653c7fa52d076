//! Solver toolkit for sender-receiver persuasion games in which the sender
//! may commit to ambiguous experiments and players have smooth-ambiguity or
//! maxmin preferences.
//!
//! The crate computes unambiguous (Bayesian) persuasion optima, obedience
//! certificates for ambiguous experiments via effective measures,
//! Pareto-ranked splittings and the binary improvements they generate, the
//! optimal ambiguous persuasion value through a sampled concavification of
//! the experiment space, the maxmin-receiver polar case, and an extension
//! with ambiguity over the prior itself.

pub mod ambiguity;
pub mod attitude;
pub mod bp;
pub mod error;
pub mod fixtures;
pub mod game;
pub mod lp;
pub mod meu;
pub mod prior;
pub mod sampling;
pub mod solver;
pub mod splitting;

pub use ambiguity::{
    effective_measure, effective_posterior, inverse_effective_measure, is_obedient_ambiguous,
    probability_premium, smooth_value, AmbiguousExperiment,
};
pub use attitude::{Attitude, ConcaveTransform, TransformedAttitude};
pub use bp::{indirect_utility_curve, solve_bp, BpSolution, CurvePoint};
pub use error::{Error, Result};
pub use game::{
    best_response, canonicalize_experiment, expected_payoff, is_obedient, obedient_payoff,
    BestResponse, Experiment, Game, ObedienceReport, Player, ReceiverStrategy,
};
pub use lp::{solve_lp, LinearProgram, LpConfig, LpSolution, LpStatus, Relation, VarBound};
pub use meu::{meu_obedience, meu_supremum, meu_supremum_strong, outside_option, MeuSolution};
pub use prior::{
    binary_improvement_under_eta, is_obedient_under_eta, robustness_delta, PriorAmbiguity,
};
pub use solver::{
    benefits_from_ambiguity, phi_u, solve_ambiguous, solve_phi_star, validate_optimality,
    AmbiguousSolution, PhiStarSolution, SolverConfig,
};
pub use splitting::{
    binary_improvement, comparative_statics, envelope_order_check, find_pareto_split,
    robustness_ball, spanning_test, SplitTriple,
};
