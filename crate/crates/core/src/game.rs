//! Two-player normal-form games over exact rationals and the elementary
//! queries everything else builds on: expected payoff, best responses,
//! dominance, constant-sum detection, and the pointwise-improvement
//! relation between two games.
//!
//! Games are immutable values. Every transform returns a new game, and all
//! operations are pure functions of their inputs, so values can be shared
//! and sent across threads freely.

use crate::rational::Rational;
use num_traits::{One, Signed, Zero};
use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

/// Errors raised by game construction and queries.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GameError {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("action spaces differ: {0}")]
    ActionSpaceMismatch(String),
    #[error("base game is not constant-sum")]
    NotConstantSum,
    #[error("invalid mixed strategy: {0}")]
    InvalidStrategy(String),
    #[error("empty equilibrium set")]
    EmptyEquilibriumSet,
    #[error("degenerate game: {0}")]
    DegenerateGame(String),
    #[error("unknown scenario `{0}`")]
    UnknownScenario(String),
}

/// One of the two players of a bimatrix game.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Player {
    One,
    Two,
}

impl Player {
    pub fn other(self) -> Player {
        match self {
            Player::One => Player::Two,
            Player::Two => Player::One,
        }
    }

    /// 0-based index, handy for pair lookups.
    pub fn index(self) -> usize {
        match self {
            Player::One => 0,
            Player::Two => 1,
        }
    }
}

impl fmt::Display for Player {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.index() + 1)
    }
}

impl FromStr for Player {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "1" => Ok(Player::One),
            "2" => Ok(Player::Two),
            other => Err(format!("player must be 1 or 2, got `{other}`")),
        }
    }
}

/// A probability distribution over one player's actions.
///
/// Entries are exact rationals, nonnegative, and sum to exactly 1; the
/// constructor rejects anything else.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MixedStrategy {
    probs: Vec<Rational>,
}

impl MixedStrategy {
    pub fn new(probs: Vec<Rational>) -> Result<Self, GameError> {
        if probs.is_empty() {
            return Err(GameError::InvalidStrategy("no actions".into()));
        }
        if let Some(p) = probs.iter().find(|p| p.is_negative()) {
            return Err(GameError::InvalidStrategy(format!(
                "negative probability {p}"
            )));
        }
        let total: Rational = probs.iter().sum();
        if !total.is_one() {
            return Err(GameError::InvalidStrategy(format!(
                "probabilities sum to {total}, not 1"
            )));
        }
        Ok(MixedStrategy { probs })
    }

    /// Point mass on a single action.
    pub fn pure(index: usize, len: usize) -> Self {
        assert!(index < len, "action index out of range");
        let mut probs = vec![Rational::zero(); len];
        probs[index] = Rational::one();
        MixedStrategy { probs }
    }

    pub fn uniform(len: usize) -> Self {
        assert!(len > 0);
        let p = Rational::new(1.into(), (len as i64).into());
        MixedStrategy {
            probs: vec![p; len],
        }
    }

    pub fn probs(&self) -> &[Rational] {
        &self.probs
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }

    /// Indices played with positive probability.
    pub fn support(&self) -> BTreeSet<usize> {
        self.probs
            .iter()
            .enumerate()
            .filter(|(_, p)| p.is_positive())
            .map(|(i, _)| i)
            .collect()
    }
}

/// A two-player normal-form game: two m x n payoff matrices over the same
/// labelled action grid.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BimatrixGame {
    name: String,
    row_actions: Vec<String>,
    col_actions: Vec<String>,
    u1: Vec<Vec<Rational>>,
    u2: Vec<Vec<Rational>>,
}

impl BimatrixGame {
    pub fn new(
        name: impl Into<String>,
        row_actions: Vec<String>,
        col_actions: Vec<String>,
        u1: Vec<Vec<Rational>>,
        u2: Vec<Vec<Rational>>,
    ) -> Result<Self, GameError> {
        let m = row_actions.len();
        let n = col_actions.len();
        if m == 0 || n == 0 {
            return Err(GameError::DimensionMismatch(
                "each player needs at least one action".into(),
            ));
        }
        for (label, matrix) in [("u1", &u1), ("u2", &u2)] {
            if matrix.len() != m {
                return Err(GameError::DimensionMismatch(format!(
                    "{label} has {} rows, expected {m}",
                    matrix.len()
                )));
            }
            for (i, row) in matrix.iter().enumerate() {
                if row.len() != n {
                    return Err(GameError::DimensionMismatch(format!(
                        "{label} row {i} has {} entries, expected {n}",
                        row.len()
                    )));
                }
            }
        }
        Ok(BimatrixGame {
            name: name.into(),
            row_actions,
            col_actions,
            u1,
            u2,
        })
    }

    /// Same game under a different name.
    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn rows(&self) -> usize {
        self.row_actions.len()
    }

    pub fn cols(&self) -> usize {
        self.col_actions.len()
    }

    pub fn row_actions(&self) -> &[String] {
        &self.row_actions
    }

    pub fn col_actions(&self) -> &[String] {
        &self.col_actions
    }

    /// Action labels of one player.
    pub fn actions(&self, player: Player) -> &[String] {
        match player {
            Player::One => &self.row_actions,
            Player::Two => &self.col_actions,
        }
    }

    pub fn action_count(&self, player: Player) -> usize {
        self.actions(player).len()
    }

    pub fn matrix(&self, player: Player) -> &[Vec<Rational>] {
        match player {
            Player::One => &self.u1,
            Player::Two => &self.u2,
        }
    }

    pub fn payoff(&self, player: Player, row: usize, col: usize) -> &Rational {
        &self.matrix(player)[row][col]
    }

    fn check_strategy_pair(
        &self,
        s1: &MixedStrategy,
        s2: &MixedStrategy,
    ) -> Result<(), GameError> {
        if s1.len() != self.rows() || s2.len() != self.cols() {
            return Err(GameError::DimensionMismatch(format!(
                "strategies {}x{} vs game {}x{}",
                s1.len(),
                s2.len(),
                self.rows(),
                self.cols()
            )));
        }
        Ok(())
    }

    /// Exact bilinear form of the player's payoff matrix at a mixed profile.
    pub fn expected_payoff(
        &self,
        s1: &MixedStrategy,
        s2: &MixedStrategy,
        player: Player,
    ) -> Result<Rational, GameError> {
        self.check_strategy_pair(s1, s2)?;
        let u = self.matrix(player);
        let mut total = Rational::zero();
        for (i, p) in s1.probs().iter().enumerate() {
            if p.is_zero() {
                continue;
            }
            for (j, q) in s2.probs().iter().enumerate() {
                if q.is_zero() {
                    continue;
                }
                total += p * q * &u[i][j];
            }
        }
        Ok(total)
    }

    /// Expected payoff of each of `player`'s pure actions against an
    /// opponent mixed strategy.
    pub fn action_values(
        &self,
        player: Player,
        opponent: &MixedStrategy,
    ) -> Result<Vec<Rational>, GameError> {
        let u = self.matrix(player);
        match player {
            Player::One => {
                if opponent.len() != self.cols() {
                    return Err(GameError::DimensionMismatch(format!(
                        "opponent strategy has {} entries, game has {} columns",
                        opponent.len(),
                        self.cols()
                    )));
                }
                Ok((0..self.rows())
                    .map(|i| {
                        opponent
                            .probs()
                            .iter()
                            .enumerate()
                            .map(|(j, q)| q * &u[i][j])
                            .sum()
                    })
                    .collect())
            }
            Player::Two => {
                if opponent.len() != self.rows() {
                    return Err(GameError::DimensionMismatch(format!(
                        "opponent strategy has {} entries, game has {} rows",
                        opponent.len(),
                        self.rows()
                    )));
                }
                Ok((0..self.cols())
                    .map(|j| {
                        opponent
                            .probs()
                            .iter()
                            .enumerate()
                            .map(|(i, p)| p * &u[i][j])
                            .sum()
                    })
                    .collect())
            }
        }
    }

    /// The set of pure actions attaining the maximum expected payoff against
    /// `opponent`, together with that maximum. Never empty.
    pub fn pure_best_responses(
        &self,
        player: Player,
        opponent: &MixedStrategy,
    ) -> Result<(BTreeSet<usize>, Rational), GameError> {
        let values = self.action_values(player, opponent)?;
        let best = values.iter().max().expect("at least one action").clone();
        let set = values
            .iter()
            .enumerate()
            .filter(|(_, v)| **v == best)
            .map(|(i, _)| i)
            .collect();
        Ok((set, best))
    }

    /// Returns the common sum `k` if `u1 + u2 = k` at every profile,
    /// checked entry by entry.
    pub fn is_constant_sum(&self) -> Option<Rational> {
        let k = &self.u1[0][0] + &self.u2[0][0];
        for i in 0..self.rows() {
            for j in 0..self.cols() {
                if &self.u1[i][j] + &self.u2[i][j] != k {
                    return None;
                }
            }
        }
        Some(k)
    }

    /// Actions that dominate every other action of `player` against every
    /// opponent pure action, strictly or weakly as requested.
    pub fn dominant_actions(&self, player: Player, mode: DominanceMode) -> BTreeSet<usize> {
        let own = self.action_count(player);
        let opp = self.action_count(player.other());
        let payoff = |a: usize, b: usize| match player {
            Player::One => &self.u1[a][b],
            Player::Two => &self.u2[b][a],
        };
        (0..own)
            .filter(|&a| {
                (0..own).filter(|&r| r != a).all(|rival| {
                    (0..opp).all(|b| match mode {
                        DominanceMode::Strict => payoff(a, b) > payoff(rival, b),
                        DominanceMode::Weak => payoff(a, b) >= payoff(rival, b),
                    })
                })
            })
            .collect()
    }

    /// New game with `player`'s matrix uniformly shifted by `delta`; the
    /// other matrix is untouched.
    pub fn shift_player_payoffs(&self, player: Player, delta: &Rational) -> BimatrixGame {
        let mut game = self.clone();
        let matrix = match player {
            Player::One => &mut game.u1,
            Player::Two => &mut game.u2,
        };
        for row in matrix.iter_mut() {
            for entry in row.iter_mut() {
                *entry += delta;
            }
        }
        game
    }
}

/// Strict vs weak dominance; ties are resolved by the caller's choice of
/// mode, never by a hidden default.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DominanceMode {
    Strict,
    Weak,
}

/// How one player's payoffs in an `after` game relate, profile by profile,
/// to the same player's payoffs in a `before` game.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ImprovementRelation {
    /// Weakly better everywhere and strictly better at the witness profile.
    ImprovedSomewhere { witness: (usize, usize) },
    /// Equal at every profile.
    Unchanged,
    /// Strictly worse at the witness profile.
    NotImproved { witness: (usize, usize) },
}

impl fmt::Display for ImprovementRelation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ImprovementRelation::ImprovedSomewhere { witness } => {
                write!(f, "improved_somewhere witness={},{}", witness.0, witness.1)
            }
            ImprovementRelation::Unchanged => write!(f, "unchanged"),
            ImprovementRelation::NotImproved { witness } => {
                write!(f, "not_improved witness={},{}", witness.0, witness.1)
            }
        }
    }
}

/// Classifies the pointwise relation on the focal player's matrix only; the
/// other player's matrix may change arbitrarily and is ignored here.
///
/// Both games must have identical action spaces (labels and dimensions).
pub fn improvement_relation(
    before: &BimatrixGame,
    after: &BimatrixGame,
    player: Player,
) -> Result<ImprovementRelation, GameError> {
    if before.row_actions != after.row_actions || before.col_actions != after.col_actions {
        return Err(GameError::ActionSpaceMismatch(format!(
            "`{}` is {}x{}, `{}` is {}x{} (or labels differ)",
            before.name(),
            before.rows(),
            before.cols(),
            after.name(),
            after.rows(),
            after.cols()
        )));
    }
    Ok(pointwise_relation(
        before.matrix(player),
        after.matrix(player),
    ))
}

/// Pointwise comparison of two equally-shaped matrices, row-major witness.
pub(crate) fn pointwise_relation(
    before: &[Vec<Rational>],
    after: &[Vec<Rational>],
) -> ImprovementRelation {
    let mut improved: Option<(usize, usize)> = None;
    for (i, (brow, arow)) in before.iter().zip(after).enumerate() {
        for (j, (b, a)) in brow.iter().zip(arow).enumerate() {
            if a < b {
                return ImprovementRelation::NotImproved { witness: (i, j) };
            }
            if a > b && improved.is_none() {
                improved = Some((i, j));
            }
        }
    }
    match improved {
        Some(witness) => ImprovementRelation::ImprovedSomewhere { witness },
        None => ImprovementRelation::Unchanged,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};
    use crate::scenarios::{chicken_game, subsidy_after, subsidy_before};

    fn matrix(entries: &[&[i64]]) -> Vec<Vec<Rational>> {
        entries
            .iter()
            .map(|row| row.iter().map(|&v| int(v)).collect())
            .collect()
    }

    fn labels(n: usize, prefix: &str) -> Vec<String> {
        (0..n).map(|i| format!("{prefix}{i}")).collect()
    }

    fn small_game(u1: &[&[i64]], u2: &[&[i64]]) -> BimatrixGame {
        BimatrixGame::new(
            "g",
            labels(u1.len(), "r"),
            labels(u1[0].len(), "c"),
            matrix(u1),
            matrix(u2),
        )
        .unwrap()
    }

    #[test]
    fn rejects_ragged_matrices() {
        let err = BimatrixGame::new(
            "bad",
            labels(2, "r"),
            labels(2, "c"),
            vec![vec![int(0), int(0)], vec![int(0)]],
            matrix(&[&[0, 0], &[0, 0]]),
        )
        .unwrap_err();
        assert!(matches!(err, GameError::DimensionMismatch(_)));
    }

    #[test]
    fn strategy_invariants_enforced() {
        assert!(MixedStrategy::new(vec![rat(1, 2), rat(1, 2)]).is_ok());
        assert!(MixedStrategy::new(vec![rat(1, 2), rat(1, 3)]).is_err());
        assert!(MixedStrategy::new(vec![rat(3, 2), rat(-1, 2)]).is_err());
        assert!(MixedStrategy::new(vec![]).is_err());
        assert_eq!(
            MixedStrategy::pure(1, 3).support(),
            BTreeSet::from([1usize])
        );
    }

    #[test]
    fn chicken_mixed_profile_pays_one() {
        // Indifference equation 13q - 10 = 1 puts the opponent at q = 11/13.
        let g = chicken_game();
        let s = MixedStrategy::new(vec![rat(11, 13), rat(2, 13)]).unwrap();
        assert_eq!(g.expected_payoff(&s, &s, Player::One).unwrap(), int(1));
        assert_eq!(g.expected_payoff(&s, &s, Player::Two).unwrap(), int(1));
    }

    #[test]
    fn pure_profile_payoff_is_matrix_entry() {
        let g = chicken_game();
        for i in 0..2 {
            for j in 0..2 {
                let s1 = MixedStrategy::pure(i, 2);
                let s2 = MixedStrategy::pure(j, 2);
                assert_eq!(
                    &g.expected_payoff(&s1, &s2, Player::One).unwrap(),
                    g.payoff(Player::One, i, j)
                );
            }
        }
    }

    #[test]
    fn expected_payoff_rejects_mismatch() {
        let g = chicken_game();
        let s3 = MixedStrategy::uniform(3);
        let s2 = MixedStrategy::uniform(2);
        assert!(matches!(
            g.expected_payoff(&s3, &s2, Player::One),
            Err(GameError::DimensionMismatch(_))
        ));
    }

    #[test]
    fn best_response_to_not_factoring_is_factoring() {
        // Mutual refusal is punished with -10, factoring pays 1.
        let g = chicken_game();
        let dont = MixedStrategy::pure(1, 2);
        let (set, value) = g.pure_best_responses(Player::Two, &dont).unwrap();
        assert_eq!(set, BTreeSet::from([0usize]));
        assert_eq!(value, int(1));
    }

    #[test]
    fn indifferent_opponent_makes_both_rows_best() {
        let g = chicken_game();
        let q = MixedStrategy::new(vec![rat(11, 13), rat(2, 13)]).unwrap();
        let (set, value) = g.pure_best_responses(Player::One, &q).unwrap();
        assert_eq!(set, BTreeSet::from([0usize, 1usize]));
        assert_eq!(value, int(1));
    }

    #[test]
    fn single_row_best_response() {
        let g = small_game(&[&[5, -1, 2]], &[&[0, 3, 3]]);
        let opp = MixedStrategy::pure(0, 1);
        let (set, value) = g.pure_best_responses(Player::Two, &opp).unwrap();
        assert_eq!(set, BTreeSet::from([1usize, 2usize]));
        assert_eq!(value, int(3));
    }

    #[test]
    fn constant_sum_detection() {
        let base = small_game(&[&[6, 2], &[4, 1]], &[&[0, 4], &[2, 5]]);
        assert_eq!(base.is_constant_sum(), Some(int(6)));

        let zeros = small_game(&[&[0, 0], &[0, 0]], &[&[0, 0], &[0, 0]]);
        assert_eq!(zeros.is_constant_sum(), Some(int(0)));

        assert_eq!(chicken_game().is_constant_sum(), None);
    }

    #[test]
    fn dominant_action_moves_with_subsidy() {
        let before = subsidy_before();
        let after = subsidy_after();
        assert_eq!(
            before.dominant_actions(Player::One, DominanceMode::Strict),
            BTreeSet::from([1usize])
        );
        assert_eq!(
            after.dominant_actions(Player::One, DominanceMode::Strict),
            BTreeSet::from([0usize])
        );
    }

    #[test]
    fn single_action_player_dominates_vacuously() {
        let g = small_game(&[&[1, 2]], &[&[3, 4]]);
        assert_eq!(
            g.dominant_actions(Player::One, DominanceMode::Weak),
            BTreeSet::from([0usize])
        );
    }

    #[test]
    fn weak_dominance_keeps_ties() {
        let g = small_game(&[&[1, 1], &[1, 0]], &[&[0, 0], &[0, 0]]);
        assert_eq!(
            g.dominant_actions(Player::One, DominanceMode::Strict),
            BTreeSet::new()
        );
        assert_eq!(
            g.dominant_actions(Player::One, DominanceMode::Weak),
            BTreeSet::from([0usize])
        );
    }

    #[test]
    fn improvement_relation_on_subsidy_pair() {
        let before = subsidy_before();
        let after = subsidy_after();
        assert_eq!(
            improvement_relation(&before, &after, Player::One).unwrap(),
            ImprovementRelation::ImprovedSomewhere { witness: (0, 0) }
        );
        assert_eq!(
            improvement_relation(&before, &before, Player::One).unwrap(),
            ImprovementRelation::Unchanged
        );
        assert_eq!(
            improvement_relation(&after, &before, Player::One).unwrap(),
            ImprovementRelation::NotImproved { witness: (0, 0) }
        );
    }

    #[test]
    fn improvement_relation_ignores_opponent_matrix() {
        let g = small_game(&[&[1, 2], &[3, 4]], &[&[0, 0], &[0, 0]]);
        let h = small_game(&[&[1, 2], &[3, 4]], &[&[9, -9], &[9, 9]]);
        assert_eq!(
            improvement_relation(&g, &h, Player::One).unwrap(),
            ImprovementRelation::Unchanged
        );
    }

    #[test]
    fn improvement_relation_needs_same_action_space() {
        let g = small_game(&[&[1, 2], &[3, 4]], &[&[0, 0], &[0, 0]]);
        let h = small_game(&[&[1, 2]], &[&[0, 0]]);
        assert!(matches!(
            improvement_relation(&g, &h, Player::One),
            Err(GameError::ActionSpaceMismatch(_))
        ));
    }

    #[test]
    fn uniform_shift_adds_delta_everywhere() {
        let g = chicken_game();
        let shifted = g.shift_player_payoffs(Player::One, &int(2));
        assert_eq!(shifted.matrix(Player::One), matrix(&[&[3, 3], &[5, -8]]));
        assert_eq!(shifted.matrix(Player::Two), g.matrix(Player::Two));

        let back = shifted.shift_player_payoffs(Player::One, &int(-2));
        assert_eq!(back, g);
        assert_eq!(g.shift_player_payoffs(Player::Two, &int(0)), g);
    }

    #[test]
    fn shift_preserves_best_response_sets() {
        let g = subsidy_before();
        let shifted = g.shift_player_payoffs(Player::One, &rat(7, 3));
        let opp = MixedStrategy::new(vec![rat(1, 3), rat(2, 3)]).unwrap();
        let (orig, _) = g.pure_best_responses(Player::One, &opp).unwrap();
        let (moved, _) = shifted.pure_best_responses(Player::One, &opp).unwrap();
        assert_eq!(orig, moved);
        // Other player's view is untouched entirely.
        let mine = MixedStrategy::new(vec![rat(2, 5), rat(3, 5)]).unwrap();
        assert_eq!(
            g.pure_best_responses(Player::Two, &mine).unwrap(),
            shifted.pure_best_responses(Player::Two, &mine).unwrap()
        );
    }
}
