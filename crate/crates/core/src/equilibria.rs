//! Exact Nash equilibrium enumeration for bimatrix games.
//!
//! Equilibria are found by support enumeration: for every pair of
//! equal-size supports (increasing size, then lexicographic), solve the two
//! indifference linear systems exactly and keep solutions with nonnegative
//! probabilities whose supports sit inside the best-response sets. For
//! nondegenerate games this is exhaustive; degenerate games are detected
//! (singular systems with solutions, best-response ties extending past a
//! support, unequal support sizes) and reported through flags while the
//! vertex equilibria that were found are returned.
//!
//! Maxmin values are computed by exact rational linear programming.

use crate::game::{BimatrixGame, GameError, MixedStrategy, Player};
use crate::rational::Rational;
use crate::simplex::{self, Constraint, LpOutcome, Relation};
use itertools::Itertools;
use num_traits::{One, Signed, Zero};
use std::collections::BTreeSet;

/// A pair of mutually best-responding mixed strategies.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Equilibrium {
    pub s1: MixedStrategy,
    pub s2: MixedStrategy,
    /// Expected payoffs (player 1, player 2) at the profile.
    pub payoffs: (Rational, Rational),
    pub support1: BTreeSet<usize>,
    pub support2: BTreeSet<usize>,
    /// True when a best-response set strictly exceeds the support or the
    /// support sizes differ, i.e. this vertex sits on an equilibrium
    /// component rather than being isolated.
    pub degenerate: bool,
}

impl Equilibrium {
    /// Builds the record for a strategy pair, computing payoffs, supports,
    /// and the degeneracy flag from the game. Does not check that the pair
    /// actually is an equilibrium; see `certify_equilibrium`.
    pub fn from_strategies(
        game: &BimatrixGame,
        s1: MixedStrategy,
        s2: MixedStrategy,
    ) -> Result<Equilibrium, GameError> {
        let p1 = game.expected_payoff(&s1, &s2, Player::One)?;
        let p2 = game.expected_payoff(&s1, &s2, Player::Two)?;
        let support1 = s1.support();
        let support2 = s2.support();
        let (br1, _) = game.pure_best_responses(Player::One, &s2)?;
        let (br2, _) = game.pure_best_responses(Player::Two, &s1)?;
        let degenerate = br1.len() > support1.len()
            || br2.len() > support2.len()
            || support1.len() != support2.len();
        Ok(Equilibrium {
            s1,
            s2,
            payoffs: (p1, p2),
            support1,
            support2,
            degenerate,
        })
    }

    pub fn payoff(&self, player: Player) -> &Rational {
        match player {
            Player::One => &self.payoffs.0,
            Player::Two => &self.payoffs.1,
        }
    }

    fn same_strategies(&self, other: &Equilibrium) -> bool {
        self.s1 == other.s1 && self.s2 == other.s2
    }
}

/// All equilibria found for a game, in deterministic enumeration order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EquilibriumSet {
    pub equilibria: Vec<Equilibrium>,
    /// Set when any degeneracy evidence was seen during enumeration; the
    /// listed vertex equilibria may then be part of larger components.
    pub game_degenerate: bool,
}

impl EquilibriumSet {
    pub fn len(&self) -> usize {
        self.equilibria.len()
    }

    pub fn is_empty(&self) -> bool {
        self.equilibria.is_empty()
    }

    /// Strategy pairs only, for equivalence comparisons across games.
    pub fn strategy_pairs(&self) -> Vec<(&MixedStrategy, &MixedStrategy)> {
        self.equilibria.iter().map(|e| (&e.s1, &e.s2)).collect()
    }
}

/// Maxmin (defense) strategy and its guaranteed floor value.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MaxminResult {
    pub strategy: MixedStrategy,
    pub value: Rational,
}

/// Outcome of exact Gaussian elimination on a square system.
#[derive(Debug, Clone, PartialEq, Eq)]
enum SystemSolution {
    Unique(Vec<Rational>),
    Inconsistent,
    Underdetermined,
}

/// Solves `a x = b` exactly for square `a`.
fn solve_square(mut a: Vec<Vec<Rational>>, mut b: Vec<Rational>) -> SystemSolution {
    let n = b.len();
    debug_assert!(a.iter().all(|row| row.len() == n));
    let mut rank = 0;
    for col in 0..n {
        let Some(pivot) = (rank..n).find(|&r| !a[r][col].is_zero()) else {
            continue;
        };
        a.swap(rank, pivot);
        b.swap(rank, pivot);
        let divisor = a[rank][col].clone();
        for v in a[rank].iter_mut() {
            *v /= &divisor;
        }
        b[rank] /= &divisor;
        for r in 0..n {
            if r == rank || a[r][col].is_zero() {
                continue;
            }
            let factor = a[r][col].clone();
            let pivot_row = a[rank].clone();
            for (v, p) in a[r].iter_mut().zip(&pivot_row) {
                *v -= &factor * p;
            }
            let pivot_b = b[rank].clone();
            b[r] -= factor * pivot_b;
        }
        rank += 1;
    }
    if rank < n {
        if b[rank..].iter().any(|v| !v.is_zero()) {
            return SystemSolution::Inconsistent;
        }
        return SystemSolution::Underdetermined;
    }
    // Reduced row echelon with full rank: read the solution by pivot column.
    let mut x = vec![Rational::zero(); n];
    for r in 0..n {
        let col = a[r].iter().position(|v| v.is_one()).expect("pivot column");
        x[col] = b[r].clone();
    }
    SystemSolution::Unique(x)
}

enum SupportOutcome {
    Equilibrium(Equilibrium),
    /// Singular-with-solutions indifference system: an equilibrium
    /// component may cross this support pair.
    Degenerate,
    None,
}

/// Solves the indifference system that makes `chooser`'s support rows equal
/// in value, yielding the OPPONENT's strategy over `opp_support`.
fn indifference_strategy(
    game: &BimatrixGame,
    chooser: Player,
    support: &[usize],
    opp_support: &[usize],
) -> Option<SystemSolution> {
    let k = support.len();
    let u = game.matrix(chooser);
    let entry = |own: usize, opp: usize| match chooser {
        Player::One => &u[own][opp],
        Player::Two => &u[opp][own],
    };
    let mut a = Vec::with_capacity(k);
    for t in 1..k {
        let row: Vec<Rational> = opp_support
            .iter()
            .map(|&j| entry(support[0], j) - entry(support[t], j))
            .collect();
        a.push(row);
    }
    a.push(vec![Rational::one(); opp_support.len()]);
    let mut b = vec![Rational::zero(); k - 1];
    b.push(Rational::one());
    Some(solve_square(a, b))
}

fn expand(partial: &[Rational], support: &[usize], len: usize) -> Vec<Rational> {
    let mut full = vec![Rational::zero(); len];
    for (slot, &idx) in support.iter().enumerate() {
        full[idx] = partial[slot].clone();
    }
    full
}

/// Cheap sound pruning: a support action strictly dominated by some pure
/// action conditional on the opponent's support can never be a best
/// response there, so the pair cannot host an equilibrium.
fn conditionally_dominated(
    game: &BimatrixGame,
    player: Player,
    support: &[usize],
    opp_support: &[usize],
) -> bool {
    let u = game.matrix(player);
    let entry = |own: usize, opp: usize| match player {
        Player::One => &u[own][opp],
        Player::Two => &u[opp][own],
    };
    let own_count = game.action_count(player);
    support.iter().any(|&a| {
        (0..own_count)
            .any(|r| r != a && opp_support.iter().all(|&j| entry(r, j) > entry(a, j)))
    })
}

fn solve_support_pair(game: &BimatrixGame, s1: &[usize], s2: &[usize]) -> SupportOutcome {
    if conditionally_dominated(game, Player::One, s1, s2)
        || conditionally_dominated(game, Player::Two, s2, s1)
    {
        return SupportOutcome::None;
    }

    // Player 2's strategy comes from player 1's indifference across s1.
    let y = match indifference_strategy(game, Player::One, s1, s2).unwrap() {
        SystemSolution::Unique(y) => y,
        SystemSolution::Underdetermined => return SupportOutcome::Degenerate,
        SystemSolution::Inconsistent => return SupportOutcome::None,
    };
    if y.iter().any(|p| p.is_negative()) {
        return SupportOutcome::None;
    }
    let y_full = MixedStrategy::new(expand(&y, s2, game.cols())).expect("normalized by system");
    let row_values = game
        .action_values(Player::One, &y_full)
        .expect("dimensions fixed");
    let v1 = row_values[s1[0]].clone();
    if row_values.iter().any(|v| *v > v1) {
        return SupportOutcome::None;
    }

    let x = match indifference_strategy(game, Player::Two, s2, s1).unwrap() {
        SystemSolution::Unique(x) => x,
        SystemSolution::Underdetermined => return SupportOutcome::Degenerate,
        SystemSolution::Inconsistent => return SupportOutcome::None,
    };
    if x.iter().any(|p| p.is_negative()) {
        return SupportOutcome::None;
    }
    let x_full = MixedStrategy::new(expand(&x, s1, game.rows())).expect("normalized by system");
    let col_values = game
        .action_values(Player::Two, &x_full)
        .expect("dimensions fixed");
    let v2 = col_values[s2[0]].clone();
    if col_values.iter().any(|v| *v > v2) {
        return SupportOutcome::None;
    }

    let support1 = x_full.support();
    let support2 = y_full.support();
    let br1: BTreeSet<usize> = row_values
        .iter()
        .enumerate()
        .filter(|(_, v)| **v == v1)
        .map(|(i, _)| i)
        .collect();
    let br2: BTreeSet<usize> = col_values
        .iter()
        .enumerate()
        .filter(|(_, v)| **v == v2)
        .map(|(j, _)| j)
        .collect();
    let degenerate = br1.len() > support1.len()
        || br2.len() > support2.len()
        || support1.len() != support2.len();
    SupportOutcome::Equilibrium(Equilibrium {
        s1: x_full,
        s2: y_full,
        payoffs: (v1, v2),
        support1,
        support2,
        degenerate,
    })
}

impl BimatrixGame {
    /// Exactly the pure profiles where each action is a best response to
    /// the other, exhaustively over all cells.
    pub fn pure_equilibria(&self) -> Vec<Equilibrium> {
        let mut out = Vec::new();
        for i in 0..self.rows() {
            for j in 0..self.cols() {
                let s1 = MixedStrategy::pure(i, self.rows());
                let s2 = MixedStrategy::pure(j, self.cols());
                let (br1, _) = self
                    .pure_best_responses(Player::One, &s2)
                    .expect("dimensions match");
                let (br2, _) = self
                    .pure_best_responses(Player::Two, &s1)
                    .expect("dimensions match");
                if br1.contains(&i) && br2.contains(&j) {
                    out.push(Equilibrium {
                        payoffs: (
                            self.payoff(Player::One, i, j).clone(),
                            self.payoff(Player::Two, i, j).clone(),
                        ),
                        support1: BTreeSet::from([i]),
                        support2: BTreeSet::from([j]),
                        degenerate: br1.len() > 1 || br2.len() > 1,
                        s1,
                        s2,
                    });
                }
            }
        }
        out
    }

    /// Support enumeration over all equal-size support pairs, increasing
    /// size then lexicographic, with exact duplicate elimination.
    pub fn enumerate_equilibria(&self) -> EquilibriumSet {
        let mut equilibria: Vec<Equilibrium> = Vec::new();
        let mut game_degenerate = false;
        let max_k = self.rows().min(self.cols());
        for k in 1..=max_k {
            for s1 in (0..self.rows()).combinations(k) {
                for s2 in (0..self.cols()).combinations(k) {
                    match solve_support_pair(self, &s1, &s2) {
                        SupportOutcome::Equilibrium(eq) => {
                            game_degenerate |= eq.degenerate;
                            if !equilibria.iter().any(|e| e.same_strategies(&eq)) {
                                equilibria.push(eq);
                            }
                        }
                        SupportOutcome::Degenerate => game_degenerate = true,
                        SupportOutcome::None => {}
                    }
                }
            }
        }
        EquilibriumSet {
            equilibria,
            game_degenerate,
        }
    }

    /// Solves the standard maxmin linear program exactly: maximize the
    /// floor value `v` over own mixed strategies, subject to the expected
    /// payoff meeting `v` against every opponent pure action.
    pub fn maxmin(&self, player: Player) -> MaxminResult {
        let own = self.action_count(player);
        let opp = self.action_count(player.other());
        // Variables: own probabilities, then v+ and v- (v = v+ - v-).
        let n_vars = own + 2;
        let mut objective = vec![Rational::zero(); n_vars];
        objective[own] = Rational::one();
        objective[own + 1] = -Rational::one();

        let mut constraints = Vec::with_capacity(opp + 1);
        for b in 0..opp {
            let mut coeffs = vec![Rational::zero(); n_vars];
            for a in 0..own {
                coeffs[a] = match player {
                    Player::One => self.u1[a][b].clone(),
                    Player::Two => self.u2[b][a].clone(),
                };
            }
            coeffs[own] = -Rational::one();
            coeffs[own + 1] = Rational::one();
            constraints.push(Constraint::new(coeffs, Relation::Ge, Rational::zero()));
        }
        let mut norm = vec![Rational::one(); n_vars];
        norm[own] = Rational::zero();
        norm[own + 1] = Rational::zero();
        constraints.push(Constraint::new(norm, Relation::Eq, Rational::one()));

        match simplex::maximize(&objective, &constraints) {
            LpOutcome::Optimal(sol) => {
                let probs = sol.values[..own].to_vec();
                MaxminResult {
                    strategy: MixedStrategy::new(probs).expect("LP enforces a distribution"),
                    value: sol.objective,
                }
            }
            // The program always has an optimum: any distribution with a low
            // enough floor is feasible, and v is bounded by the max payoff.
            other => unreachable!("maxmin LP must be solvable, got {other:?}"),
        }
    }

    /// Independent equilibrium checker: true iff both supports lie inside
    /// the pure-best-response sets against the opponent's strategy and the
    /// recorded payoffs match the expected payoffs. Exact, no tolerance.
    pub fn certify_equilibrium(&self, e: &Equilibrium) -> Result<bool, GameError> {
        let (br1, _) = self.pure_best_responses(Player::One, &e.s2)?;
        let (br2, _) = self.pure_best_responses(Player::Two, &e.s1)?;
        let supports_ok =
            e.s1.support().is_subset(&br1) && e.s2.support().is_subset(&br2);
        let payoffs_ok = e.payoffs.0 == self.expected_payoff(&e.s1, &e.s2, Player::One)?
            && e.payoffs.1 == self.expected_payoff(&e.s1, &e.s2, Player::Two)?;
        Ok(supports_ok && payoffs_ok)
    }
}
