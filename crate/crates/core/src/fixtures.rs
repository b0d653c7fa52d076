//! Built-in example games used throughout the test suites and shipped as JSON
//! fixtures by the CLI crate.

use crate::attitude::Attitude;
use crate::game::{Experiment, Game};

/// Three-action example game: the receiver prefers a1 at intermediate
/// beliefs, a2 at high beliefs on w2, and a3 at low beliefs; a3 is the
/// conflict action, good for the receiver in w1 and bad for the sender.
pub fn intro_game() -> Game {
    Game::new(
        vec!["w1".into(), "w2".into()],
        vec!["a1".into(), "a2".into(), "a3".into()],
        vec![0.5, 0.5],
        vec![
            vec![1.0, 0.0],
            vec![-1.0, 2.0],
            vec![-4.0, -4.0],
        ],
        vec![
            vec![1.0, 0.0],
            vec![-1.0, 2.0],
            vec![2.0, -4.0],
        ],
    )
    .expect("intro game is valid")
}

/// Fully informative experiment: a1 in w1, a2 in w2. Both players get 3/2.
pub fn intro_sigma_bar() -> Experiment {
    Experiment::deterministic(&intro_game(), &[0, 1])
}

/// Uninformative experiment recommending a1 everywhere. Both players get 1/2.
pub fn intro_sigma_lower() -> Experiment {
    Experiment::uninformative(&intro_game(), 0)
}

/// The unambiguous optimum: recommend a1 in w1; in w2 recommend a1 with
/// probability 1/4 and a2 with probability 3/4. Sender value 5/4.
pub fn intro_sigma_bp() -> Experiment {
    Experiment::canonical(
        &intro_game(),
        vec![vec![1.0, 0.0, 0.0], vec![0.25, 0.75, 0.0]],
    )
    .expect("valid kernel")
}

/// The receiver attitude used in the worked solutions: phi(x) = ln(x + 5).
pub fn intro_log_attitude() -> Attitude {
    Attitude::shifted_log(1.0, 5.0, 1.0, 0.0).expect("valid parameters")
}

/// Five-action game where the optimal unambiguous experiment mixes only the
/// two aligned actions and is worth 2 to both players.
pub fn sa2_first_game() -> Game {
    Game::new(
        vec!["w1".into(), "w2".into()],
        vec!["a1".into(), "a2".into(), "b1".into(), "b2".into(), "b3".into()],
        vec![0.5, 0.5],
        vec![
            vec![3.0, 0.0],
            vec![-1.0, 3.0],
            vec![0.0, -1.0],
            vec![0.0, 1.0],
            vec![-2.0, 1.0],
        ],
        vec![
            vec![3.0, 0.0],
            vec![-1.0, 3.0],
            vec![4.0, -2.0],
            vec![2.0, 2.0],
            vec![-4.0, 4.0],
        ],
    )
    .expect("valid game")
}

/// The optimal unambiguous experiment of [`sa2_first_game`].
pub fn sa2_first_sigma_a() -> Experiment {
    Experiment::canonical(
        &sa2_first_game(),
        vec![
            vec![0.8, 0.2, 0.0, 0.0, 0.0],
            vec![0.4, 0.6, 0.0, 0.0, 0.0],
        ],
    )
    .expect("valid kernel")
}

/// The three deterministic experiments whose (1/5, 3/5, 1/5) mixture equals
/// sigma_a: recommend (a1,a1), (a1,a2), (a2,a1).
pub fn sa2_first_three_split() -> (Vec<Experiment>, Vec<f64>) {
    let game = sa2_first_game();
    let experiments = vec![
        Experiment::deterministic(&game, &[0, 0]),
        Experiment::deterministic(&game, &[0, 1]),
        Experiment::deterministic(&game, &[1, 0]),
    ];
    (experiments, vec![0.2, 0.6, 0.2])
}

/// Sender payoff of the safe action `c` in [`sa2_second_game`]. Any value
/// above 2 makes recommending `c` outright the unambiguous optimum.
pub const SA2_SECOND_X: f64 = 2.25;

/// Seven-action variant adding a state-independent safe action `c` worth
/// `SA2_SECOND_X` to the sender and 7/4 to the receiver.
pub fn sa2_second_game() -> Game {
    let x = SA2_SECOND_X;
    Game::new(
        vec!["w1".into(), "w2".into()],
        vec![
            "a1".into(),
            "a2".into(),
            "b1".into(),
            "b2m".into(),
            "b2p".into(),
            "b3".into(),
            "c".into(),
        ],
        vec![0.5, 0.5],
        vec![
            vec![3.0, 0.0],
            vec![-1.0, 3.0],
            vec![0.0, 0.0],
            vec![0.0, 0.0],
            vec![0.0, 0.0],
            vec![0.0, 0.0],
            vec![x, x],
        ],
        vec![
            vec![3.0, 0.0],
            vec![-1.0, 3.0],
            vec![4.0, -2.0],
            vec![2.5, 1.0],
            vec![1.25, 2.25],
            vec![-4.0, 4.0],
            vec![1.75, 1.75],
        ],
    )
    .expect("valid game")
}
