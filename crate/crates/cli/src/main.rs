//! Command-line surface for the persuasion solvers.
//!
//! Exit codes: 0 on success, 1 on domain or input errors, 2 on usage errors.

mod report;

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde::de::DeserializeOwned;
use serde_json::json;

use persuasion_core::ambiguity::{is_obedient_ambiguous, AmbiguousExperiment};
use persuasion_core::attitude::Attitude;
use persuasion_core::bp::{indirect_utility_curve, solve_bp};
use persuasion_core::game::{Experiment, Game};
use persuasion_core::meu::{meu_obedience, meu_supremum, meu_supremum_strong, outside_option};
use persuasion_core::prior::{
    binary_improvement_under_eta, is_obedient_under_eta, robustness_delta, PriorAmbiguity,
};
use persuasion_core::solver::{solve_ambiguous, validate_optimality, SolverConfig};
use persuasion_core::splitting::{binary_improvement, find_pareto_split};

use report::{digest_of, SolveReport};

#[derive(Parser)]
#[command(
    name = "persuasion",
    version,
    about = "Solvers for persuasion games with ambiguous experiments"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Seed for all randomized search.
    #[arg(long, global = true, default_value_t = 7)]
    seed: u64,

    /// Random-sample budget of the ambiguous solver.
    #[arg(long, global = true, default_value_t = 300)]
    budget: usize,

    /// Bisection width and strict-benefit threshold.
    #[arg(long, global = true, default_value_t = 1e-6)]
    tol: f64,

    /// Worker threads (reserved; evaluation is currently sequential).
    #[arg(long, global = true, default_value_t = 1)]
    threads: usize,

    /// Omit wall-clock timing so identical runs emit identical bytes.
    #[arg(long, global = true)]
    no_timestamp: bool,

    /// Write the JSON report to this file instead of stdout.
    #[arg(long, short, global = true)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct GameArg {
    /// Path to the game JSON file.
    #[arg(long)]
    game: PathBuf,
}

#[derive(Subcommand)]
enum Command {
    /// Optimal unambiguous persuasion: LP over obedient experiments.
    SolveBp {
        /// Path to the game JSON file.
        game: PathBuf,
    },
    /// Optimal ambiguous persuasion: bisection over the sampled program.
    SolveAmbiguous {
        #[command(flatten)]
        game: GameArg,
        /// Sender attitude: linear | log:a,b,c,d | cara:alpha | power:gamma,shift.
        #[arg(long, default_value = "linear")]
        phi_s: String,
        /// Receiver attitude, same grammar.
        #[arg(long)]
        phi_r: String,
    },
    /// Obedience certificate for an ambiguous experiment.
    Check {
        #[command(flatten)]
        game: GameArg,
        /// Path to the ambiguous-experiment JSON file.
        #[arg(long)]
        ambiguous: PathBuf,
        #[arg(long)]
        phi_r: String,
    },
    /// Pareto-ranked splitting of an experiment (default: the optimum).
    Split {
        #[command(flatten)]
        game: GameArg,
        /// Path to a canonical experiment JSON; defaults to the solved optimum.
        #[arg(long)]
        experiment: Option<PathBuf>,
    },
    /// Binary ambiguous improvement built on a Pareto-ranked splitting.
    Improve {
        #[command(flatten)]
        game: GameArg,
        #[arg(long)]
        phi_r: String,
        #[arg(long, default_value = "linear")]
        phi_s: String,
        #[arg(long)]
        experiment: Option<PathBuf>,
    },
    /// Maxmin-receiver supremum and witness family.
    Meu {
        #[command(flatten)]
        game: GameArg,
        /// Use the strong obedience notion (support restricted to A0).
        #[arg(long)]
        strong: bool,
    },
    /// Pre-existing ambiguity over the prior.
    PriorAmbiguity {
        #[command(subcommand)]
        command: PriorCommand,
    },
    /// Indirect utility and its concave envelope over beliefs (CSV).
    Curve {
        /// Path to a two-state game JSON file.
        game: PathBuf,
        #[arg(long, default_value_t = 200)]
        resolution: usize,
        /// Write the CSV here instead of stdout.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Solve, then run the optimality validators on the result.
    Validate {
        #[command(flatten)]
        game: GameArg,
        #[arg(long, default_value = "linear")]
        phi_s: String,
        #[arg(long)]
        phi_r: String,
    },
}

#[derive(Subcommand)]
enum PriorCommand {
    /// Obedience of an ambiguous experiment under prior ambiguity.
    Check {
        #[command(flatten)]
        game: GameArg,
        #[arg(long)]
        ambiguous: PathBuf,
        #[arg(long)]
        eta: PathBuf,
        #[arg(long)]
        phi_r: String,
    },
    /// Binary improvement with the weight tuned to the worst prior.
    Improve {
        #[command(flatten)]
        game: GameArg,
        #[arg(long)]
        eta: PathBuf,
        #[arg(long)]
        phi_r: String,
        #[arg(long)]
        experiment: Option<PathBuf>,
    },
    /// Largest mean-preserving prior-ambiguity radius keeping the benefit.
    Delta {
        #[command(flatten)]
        game: GameArg,
        #[arg(long)]
        phi_r: String,
    },
}

struct Failure(String);

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure(message)) => {
            eprintln!("error: {message}");
            ExitCode::from(1)
        }
    }
}

fn load_json<T: DeserializeOwned>(path: &Path, what: &str) -> Result<T, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure(format!("reading {what} {}: {e}", path.display())))?;
    serde_json::from_str(&text)
        .map_err(|e| Failure(format!("parsing {what} {}: {e}", path.display())))
}

fn load_game(path: &Path) -> Result<Game, Failure> {
    let game: Game = load_json(path, "game")?;
    game.validate()
        .map_err(|e| Failure(format!("invalid game {}: {e}", path.display())))?;
    Ok(game)
}

/// Attitude shorthand: `linear`, `log:a,b,c,d`, `cara:alpha`,
/// `power:gamma,shift`, `meu`.
fn parse_attitude(spec: &str) -> Result<Attitude, Failure> {
    let (family, params) = match spec.split_once(':') {
        Some((f, p)) => (f, p),
        None => (spec, ""),
    };
    let numbers = || -> Result<Vec<f64>, Failure> {
        params
            .split(',')
            .filter(|s| !s.is_empty())
            .map(|s| {
                s.trim()
                    .parse::<f64>()
                    .map_err(|e| Failure(format!("attitude parameter {s:?}: {e}")))
            })
            .collect()
    };
    match family {
        "linear" => Ok(Attitude::linear()),
        "meu" => Ok(Attitude::Meu),
        "log" => {
            let p = numbers()?;
            if p.len() != 4 {
                return Err(Failure(format!("log takes a,b,c,d (got {} values)", p.len())));
            }
            Ok(Attitude::shifted_log(p[0], p[1], p[2], p[3])?)
        }
        "cara" => {
            let p = numbers()?;
            if p.len() != 1 {
                return Err(Failure(format!("cara takes alpha (got {} values)", p.len())));
            }
            Ok(Attitude::cara(p[0])?)
        }
        "power" => {
            let p = numbers()?;
            if p.len() != 2 {
                return Err(Failure(format!("power takes gamma,shift (got {} values)", p.len())));
            }
            Ok(Attitude::power(p[0], p[1])?)
        }
        other => Err(Failure(format!(
            "unknown attitude family {other:?}; use linear, log:a,b,c,d, cara:alpha, power:gamma,shift, or meu"
        ))),
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    let config = SolverConfig {
        sample_budget: cli.budget,
        bisect_tol: cli.tol,
        benefit_threshold: cli.tol,
        seed: cli.seed,
        threads: cli.threads,
        ..SolverConfig::default()
    };
    let config_echo = json!({
        "seed": cli.seed,
        "budget": cli.budget,
        "tol": cli.tol,
        "threads": cli.threads,
    });
    let started = Instant::now();

    let (command_echo, game_digest, results, csv): (String, String, serde_json::Value, Option<(Option<PathBuf>, String)>) =
        match &cli.command {
            Command::SolveBp { game } => {
                let g = load_game(game)?;
                let sol = solve_bp(&g)?;
                (
                    format!("solve-bp {}", game.display()),
                    digest_of(&g),
                    serde_json::to_value(&sol)?,
                    None,
                )
            }
            Command::SolveAmbiguous { game, phi_s, phi_r } => {
                let g = load_game(&game.game)?;
                let att_s = parse_attitude(phi_s)?;
                let att_r = parse_attitude(phi_r)?;
                let sol = solve_ambiguous(&g, &att_s, &att_r, &config)?;
                (
                    format!("solve-ambiguous --game {} --phi-s {phi_s} --phi-r {phi_r}", game.game.display()),
                    digest_of(&g),
                    serde_json::to_value(&sol)?,
                    None,
                )
            }
            Command::Check {
                game,
                ambiguous,
                phi_r,
            } => {
                let g = load_game(&game.game)?;
                let amb: AmbiguousExperiment = load_json(ambiguous, "ambiguous experiment")?;
                let amb = AmbiguousExperiment::new(amb.experiments, amb.weights)?;
                let att_r = parse_attitude(phi_r)?;
                let (report, effective) = is_obedient_ambiguous(&g, &amb, &att_r)?;
                let em = persuasion_core::ambiguity::effective_measure(&g, &amb, &att_r)?;
                (
                    format!("check --game {} --phi-r {phi_r}", game.game.display()),
                    digest_of(&g),
                    json!({
                        "obedient": report.obedient,
                        "min_slack": report.min_slack,
                        "effective_measure": em,
                        "effective_experiment": effective,
                    }),
                    None,
                )
            }
            Command::Split { game, experiment } => {
                let g = load_game(&game.game)?;
                let base = match experiment {
                    Some(path) => {
                        let e: Experiment = load_json(path, "experiment")?;
                        Experiment::new(e.messages, e.kernel)?
                    }
                    None => solve_bp(&g)?.experiment,
                };
                let split = find_pareto_split(&g, &base)?;
                let results = match &split {
                    Some(s) => json!({
                        "found": true,
                        "split": s,
                        "base": base,
                    }),
                    None => json!({ "found": false, "base": base }),
                };
                (format!("split --game {}", game.game.display()), digest_of(&g), results, None)
            }
            Command::Improve {
                game,
                phi_r,
                phi_s,
                experiment,
            } => {
                let g = load_game(&game.game)?;
                let att_r = parse_attitude(phi_r)?;
                let att_s = parse_attitude(phi_s)?;
                let base = match experiment {
                    Some(path) => {
                        let e: Experiment = load_json(path, "experiment")?;
                        Experiment::new(e.messages, e.kernel)?
                    }
                    None => solve_bp(&g)?.experiment,
                };
                let split = find_pareto_split(&g, &base)?.ok_or_else(|| {
                    Failure("no Pareto-ranked splitting of the base experiment found".into())
                })?;
                let result = binary_improvement(&g, &base, &split, &att_r, &att_s)?;
                (
                    format!("improve --game {} --phi-r {phi_r} --phi-s {phi_s}", game.game.display()),
                    digest_of(&g),
                    serde_json::to_value(&result)?,
                    None,
                )
            }
            Command::Meu { game, strong } => {
                let g = load_game(&game.game)?;
                let sol = if *strong {
                    meu_supremum_strong(&g)?
                } else {
                    meu_supremum(&g)?
                };
                let witness = sol.witness(sol.witness_mu)?;
                let witness_report = meu_obedience(&g, &witness)?;
                (
                    format!("meu --game {}{}", game.game.display(), if *strong { " --strong" } else { "" }),
                    digest_of(&g),
                    json!({
                        "solution": sol,
                        "outside_option": outside_option(&g),
                        "witness_obedient": witness_report.obedient,
                        "witness_strong_support": witness_report.strong_support_ok,
                    }),
                    None,
                )
            }
            Command::PriorAmbiguity { command } => {
                return run_prior(command, &cli, &config, config_echo, started)
            }
            Command::Curve {
                game,
                resolution,
                csv,
            } => {
                let g = load_game(game)?;
                let points = indirect_utility_curve(&g, *resolution)?;
                let mut text = String::from("belief,iu,cav_iu\n");
                for p in &points {
                    text.push_str(&format!(
                        "{:.12},{:.12},{:.12}\n",
                        p.belief, p.indirect_utility, p.concavified
                    ));
                }
                (
                    format!("curve {} --resolution {resolution}", game.display()),
                    digest_of(&g),
                    json!({ "points": points.len() }),
                    Some((csv.clone(), text)),
                )
            }
            Command::Validate { game, phi_s, phi_r } => {
                let g = load_game(&game.game)?;
                let att_s = parse_attitude(phi_s)?;
                let att_r = parse_attitude(phi_r)?;
                let sol = solve_ambiguous(&g, &att_s, &att_r, &config)?;
                let validation = validate_optimality(&g, &sol, &att_s, &att_r)?;
                (
                    format!("validate --game {} --phi-s {phi_s} --phi-r {phi_r}", game.game.display()),
                    digest_of(&g),
                    json!({ "solution": sol, "validation": validation }),
                    None,
                )
            }
        };

    if let Some((path, text)) = csv {
        match path {
            Some(p) => std::fs::write(&p, text)
                .map_err(|e| Failure(format!("writing CSV {}: {e}", p.display())))?,
            None => print!("{text}"),
        }
    }
    emit(&cli, command_echo, game_digest, config_echo, results, started)
}

fn run_prior(
    command: &PriorCommand,
    cli: &Cli,
    config: &SolverConfig,
    config_echo: serde_json::Value,
    started: Instant,
) -> Result<(), Failure> {
    let (echo, digest, results) = match command {
        PriorCommand::Check {
            game,
            ambiguous,
            eta,
            phi_r,
        } => {
            let g = load_game(&game.game)?;
            let amb: AmbiguousExperiment = load_json(ambiguous, "ambiguous experiment")?;
            let amb = AmbiguousExperiment::new(amb.experiments, amb.weights)?;
            let eta: PriorAmbiguity = {
                let raw: PriorAmbiguity = load_json(eta, "prior ambiguity")?;
                PriorAmbiguity::new(raw.priors, raw.weights)?
            };
            let att_r = parse_attitude(phi_r)?;
            let report = is_obedient_under_eta(&g, &amb, &eta, &att_r)?;
            (
                format!("prior-ambiguity check --game {} --phi-r {phi_r}", game.game.display()),
                digest_of(&g),
                serde_json::to_value(&report)?,
            )
        }
        PriorCommand::Improve {
            game,
            eta,
            phi_r,
            experiment,
        } => {
            let g = load_game(&game.game)?;
            let eta: PriorAmbiguity = {
                let raw: PriorAmbiguity = load_json(eta, "prior ambiguity")?;
                PriorAmbiguity::new(raw.priors, raw.weights)?
            };
            let att_r = parse_attitude(phi_r)?;
            let base = match experiment {
                Some(path) => {
                    let e: Experiment = load_json(path, "experiment")?;
                    Experiment::new(e.messages, e.kernel)?
                }
                None => solve_bp(&g)?.experiment,
            };
            let split = find_pareto_split(&g, &base)?.ok_or_else(|| {
                Failure("no Pareto-ranked splitting of the base experiment found".into())
            })?;
            let result = binary_improvement_under_eta(&g, &base, &split, &eta, &att_r)?;
            (
                format!("prior-ambiguity improve --game {} --phi-r {phi_r}", game.game.display()),
                digest_of(&g),
                serde_json::to_value(&result)?,
            )
        }
        PriorCommand::Delta { game, phi_r } => {
            let g = load_game(&game.game)?;
            let att_r = parse_attitude(phi_r)?;
            let report = robustness_delta(&g, &att_r, config)?;
            (
                format!("prior-ambiguity delta --game {} --phi-r {phi_r}", game.game.display()),
                digest_of(&g),
                serde_json::to_value(&report)?,
            )
        }
    };
    emit(cli, echo, digest, config_echo, results, started)
}

fn emit(
    cli: &Cli,
    command: String,
    game_digest: String,
    config: serde_json::Value,
    results: serde_json::Value,
    started: Instant,
) -> Result<(), Failure> {
    let report = SolveReport {
        command,
        game_digest,
        seed: cli.seed,
        config,
        results,
        timing_ms: if cli.no_timestamp {
            None
        } else {
            Some(started.elapsed().as_secs_f64() * 1e3)
        },
    };
    let text = serde_json::to_string_pretty(&report)? + "\n";
    match &cli.out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| Failure(format!("writing report {}: {e}", path.display())))?,
        None => print!("{text}"),
    }
    Ok(())
}
