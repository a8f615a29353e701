//! Exact two-phase simplex over rationals with Bland's rule.
//!
//! Problem sizes here are tiny (a handful of strategy probabilities plus a
//! floor-value variable), so a dense tableau with anti-cycling pivoting is
//! the right trade: no scaling tricks, no factorization, just exact
//! arithmetic that terminates.

use crate::rational::Rational;
use num_traits::{One, Signed, Zero};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Le,
    Ge,
    Eq,
}

#[derive(Debug, Clone)]
pub struct Constraint {
    pub coeffs: Vec<Rational>,
    pub relation: Relation,
    pub rhs: Rational,
}

impl Constraint {
    pub fn new(coeffs: Vec<Rational>, relation: Relation, rhs: Rational) -> Self {
        Constraint {
            coeffs,
            relation,
            rhs,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LpSolution {
    /// Optimal values of the decision variables, in input order.
    pub values: Vec<Rational>,
    pub objective: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LpOutcome {
    Optimal(LpSolution),
    Infeasible,
    Unbounded,
}

struct Tableau {
    /// rows x (cols + 1), last column is the right-hand side.
    rows: Vec<Vec<Rational>>,
    /// Basic variable of each row.
    basis: Vec<usize>,
    n_decision: usize,
    n_total: usize,
    first_artificial: usize,
}

impl Tableau {
    fn rhs(&self, r: usize) -> &Rational {
        &self.rows[r][self.n_total]
    }

    fn pivot(&mut self, row: usize, col: usize) {
        let divisor = self.rows[row][col].clone();
        debug_assert!(!divisor.is_zero());
        for entry in self.rows[row].iter_mut() {
            *entry /= &divisor;
        }
        let pivot_row = self.rows[row].clone();
        for (r, other) in self.rows.iter_mut().enumerate() {
            if r == row || other[col].is_zero() {
                continue;
            }
            let factor = other[col].clone();
            for (entry, p) in other.iter_mut().zip(&pivot_row) {
                *entry -= &factor * p;
            }
        }
        self.basis[row] = col;
    }

    /// Maximizes `objective` (indexed over all tableau variables) from the
    /// current basic feasible solution. Bland's rule: entering variable is
    /// the lowest-index column with positive reduced cost, leaving row is
    /// the minimum ratio with lowest basic-variable index on ties.
    fn optimize(&mut self, objective: &[Rational], allow: impl Fn(usize) -> bool) -> bool {
        loop {
            let mut entering = None;
            for col in 0..self.n_total {
                if !allow(col) || self.basis.contains(&col) {
                    continue;
                }
                let mut reduced = objective[col].clone();
                for (r, &b) in self.basis.iter().enumerate() {
                    if !objective[b].is_zero() {
                        reduced -= &objective[b] * &self.rows[r][col];
                    }
                }
                if reduced.is_positive() {
                    entering = Some(col);
                    break;
                }
            }
            let Some(col) = entering else {
                return true; // optimal
            };

            let mut leaving: Option<(usize, Rational)> = None;
            for r in 0..self.rows.len() {
                if !self.rows[r][col].is_positive() {
                    continue;
                }
                let ratio = self.rhs(r) / &self.rows[r][col];
                let better = match &leaving {
                    None => true,
                    Some((lr, lratio)) => {
                        ratio < *lratio || (ratio == *lratio && self.basis[r] < self.basis[*lr])
                    }
                };
                if better {
                    leaving = Some((r, ratio));
                }
            }
            let Some((row, _)) = leaving else {
                return false; // unbounded in the entering direction
            };
            self.pivot(row, col);
        }
    }
}

/// Maximizes `objective . x` subject to the constraints and `x >= 0`.
pub fn maximize(objective: &[Rational], constraints: &[Constraint]) -> LpOutcome {
    let n = objective.len();
    for c in constraints {
        assert_eq!(c.coeffs.len(), n, "constraint width mismatch");
    }

    let n_slack = constraints
        .iter()
        .filter(|c| c.relation != Relation::Eq)
        .count();
    let n_artificial = constraints
        .iter()
        .filter(|c| {
            let rhs_neg = c.rhs.is_negative();
            match c.relation {
                // After normalizing to rhs >= 0, Le stays Le only if rhs >= 0.
                Relation::Le => rhs_neg,
                Relation::Ge => !rhs_neg,
                Relation::Eq => true,
            }
        })
        .count();
    let n_total = n + n_slack + n_artificial;

    let mut rows = Vec::with_capacity(constraints.len());
    let mut basis = Vec::with_capacity(constraints.len());
    let mut slack_at = n;
    let mut artificial_at = n + n_slack;
    let first_artificial = n + n_slack;

    for c in constraints {
        let mut coeffs = c.coeffs.clone();
        let mut rhs = c.rhs.clone();
        let mut relation = c.relation;
        if rhs.is_negative() {
            for v in coeffs.iter_mut() {
                *v = -v.clone();
            }
            rhs = -rhs;
            relation = match relation {
                Relation::Le => Relation::Ge,
                Relation::Ge => Relation::Le,
                Relation::Eq => Relation::Eq,
            };
        }
        let mut row = vec![Rational::zero(); n_total + 1];
        row[..n].clone_from_slice(&coeffs);
        row[n_total] = rhs;
        match relation {
            Relation::Le => {
                row[slack_at] = Rational::one();
                basis.push(slack_at);
                slack_at += 1;
            }
            Relation::Ge => {
                row[slack_at] = -Rational::one();
                slack_at += 1;
                row[artificial_at] = Rational::one();
                basis.push(artificial_at);
                artificial_at += 1;
            }
            Relation::Eq => {
                row[artificial_at] = Rational::one();
                basis.push(artificial_at);
                artificial_at += 1;
            }
        }
        rows.push(row);
    }

    let mut tableau = Tableau {
        rows,
        basis,
        n_decision: n,
        n_total,
        first_artificial,
    };

    // Phase 1: drive the artificial variables to zero.
    if n_artificial > 0 {
        let mut phase1 = vec![Rational::zero(); n_total];
        for obj in phase1.iter_mut().skip(first_artificial) {
            *obj = -Rational::one();
        }
        tableau.optimize(&phase1, |_| true);
        let infeasible = tableau
            .basis
            .iter()
            .enumerate()
            .any(|(r, &b)| b >= first_artificial && !tableau.rhs(r).is_zero());
        if infeasible {
            return LpOutcome::Infeasible;
        }
        // Pivot out artificials stuck in the basis at level zero; rows that
        // offer no pivot are redundant and can be dropped.
        let mut r = 0;
        while r < tableau.rows.len() {
            if tableau.basis[r] >= first_artificial {
                match (0..first_artificial).find(|&c| !tableau.rows[r][c].is_zero()) {
                    Some(c) => tableau.pivot(r, c),
                    None => {
                        tableau.rows.remove(r);
                        tableau.basis.remove(r);
                        continue;
                    }
                }
            }
            r += 1;
        }
    }

    // Phase 2: optimize the real objective over non-artificial columns.
    let mut phase2 = vec![Rational::zero(); n_total];
    phase2[..n].clone_from_slice(objective);
    let limit = first_artificial;
    if !tableau.optimize(&phase2, |c| c < limit) {
        return LpOutcome::Unbounded;
    }

    let mut values = vec![Rational::zero(); tableau.n_decision];
    for (r, &b) in tableau.basis.iter().enumerate() {
        if b < tableau.n_decision {
            values[b] = tableau.rhs(r).clone();
        }
    }
    let objective_value = values
        .iter()
        .zip(objective)
        .map(|(v, c)| v * c)
        .sum::<Rational>();
    LpOutcome::Optimal(LpSolution {
        values,
        objective: objective_value,
    })
}
