//! Dense two-phase primal simplex over exact rationals with Bland's rule.

use num_traits::{Signed, Zero};

use crate::rational::Rational;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Le,
    Eq,
    Ge,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Constraint {
    pub coeffs: Vec<(usize, Rational)>,
    pub relation: Relation,
    pub rhs: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Outcome {
    Optimal { x: Vec<Rational>, value: Rational },
    Infeasible,
    Unbounded,
}

/// Minimizes `objective · x` subject to `constraints` and `x ≥ 0`.
pub fn minimize(num_vars: usize, objective: &[Rational], constraints: &[Constraint]) -> Outcome {
    Tableau::new(num_vars, constraints).solve(objective)
}

struct Tableau {
    num_vars: usize,
    /// Columns `0..num_vars` structural, then slack/surplus, then artificial.
    first_artificial: usize,
    num_cols: usize,
    rows: Vec<Vec<Rational>>,
    rhs: Vec<Rational>,
    basis: Vec<usize>,
}

impl Tableau {
    fn new(num_vars: usize, constraints: &[Constraint]) -> Self {
        let m = constraints.len();
        let num_slack = constraints.iter().filter(|c| c.relation != Relation::Eq).count();
        let num_artificial = constraints
            .iter()
            .filter(|c| {
                // After sign normalization a `≤` row with nonnegative rhs keeps its slack basic.
                let flipped = c.rhs.is_negative();
                !matches!((c.relation, flipped), (Relation::Le, false) | (Relation::Ge, true))
            })
            .count();
        let first_artificial = num_vars + num_slack;
        let num_cols = first_artificial + num_artificial;

        let mut rows = Vec::with_capacity(m);
        let mut rhs = Vec::with_capacity(m);
        let mut basis = Vec::with_capacity(m);
        let mut next_slack = num_vars;
        let mut next_artificial = first_artificial;
        for c in constraints {
            let mut row = vec![Rational::zero(); num_cols];
            for (j, a) in &c.coeffs {
                row[*j] += a;
            }
            let mut b = c.rhs.clone();
            let mut relation = c.relation;
            if b.is_negative() {
                for x in row.iter_mut() {
                    *x = -x.clone();
                }
                b = -b;
                relation = match relation {
                    Relation::Le => Relation::Ge,
                    Relation::Ge => Relation::Le,
                    Relation::Eq => Relation::Eq,
                };
            }
            let slack_sign = match relation {
                Relation::Le => 1,
                Relation::Ge => -1,
                Relation::Eq => 0,
            };
            if slack_sign != 0 {
                row[next_slack] = Rational::from_integer(slack_sign.into());
                next_slack += 1;
            }
            match relation {
                Relation::Le => basis.push(next_slack - 1),
                _ => {
                    row[next_artificial] = Rational::from_integer(1.into());
                    basis.push(next_artificial);
                    next_artificial += 1;
                }
            }
            rows.push(row);
            rhs.push(b);
        }
        Tableau {
            num_vars,
            first_artificial,
            num_cols,
            rows,
            rhs,
            basis,
        }
    }

    fn solve(mut self, objective: &[Rational]) -> Outcome {
        if self.first_artificial < self.num_cols {
            let mut phase1 = vec![Rational::zero(); self.num_cols];
            for c in phase1.iter_mut().skip(self.first_artificial) {
                *c = Rational::from_integer(1.into());
            }
            let value = match self.optimize(&phase1, self.num_cols) {
                Some(v) => v,
                None => unreachable!("phase one is bounded below by zero"),
            };
            if value.is_positive() {
                return Outcome::Infeasible;
            }
            self.drive_out_artificials();
        }
        let mut cost = vec![Rational::zero(); self.num_cols];
        for (c, o) in cost.iter_mut().zip(objective) {
            *c = o.clone();
        }
        match self.optimize(&cost, self.first_artificial) {
            Some(value) => {
                let mut x = vec![Rational::zero(); self.num_vars];
                for (row, &var) in self.basis.iter().enumerate() {
                    if var < self.num_vars {
                        x[var] = self.rhs[row].clone();
                    }
                }
                Outcome::Optimal { x, value }
            }
            None => Outcome::Unbounded,
        }
    }

    /// Runs simplex iterations for `cost`, considering only columns below
    /// `allowed` as entering candidates. Returns the optimum or `None` if unbounded.
    fn optimize(&mut self, cost: &[Rational], allowed: usize) -> Option<Rational> {
        // Reduced costs d_j = c_j − Σ_i c_{B_i} T[i][j]; objective = Σ_i c_{B_i} b_i.
        let mut reduced: Vec<Rational> = cost.to_vec();
        let mut value = Rational::zero();
        for (row, &var) in self.basis.iter().enumerate() {
            let cb = &cost[var];
            if cb.is_zero() {
                continue;
            }
            for (d, a) in reduced.iter_mut().zip(&self.rows[row]) {
                if !a.is_zero() {
                    *d -= cb * a;
                }
            }
            value += cb * &self.rhs[row];
        }
        loop {
            // Bland: lowest-index improving column.
            let Some(enter) = (0..allowed).find(|&j| reduced[j].is_negative()) else {
                return Some(value);
            };
            // Ratio test, ties broken by lowest basic variable index.
            let mut leave: Option<(usize, Rational)> = None;
            for (row, a) in self.rows.iter().enumerate() {
                let a = &a[enter];
                if !a.is_positive() {
                    continue;
                }
                let ratio = &self.rhs[row] / a;
                let better = match &leave {
                    None => true,
                    Some((best_row, best)) => {
                        ratio < *best || (ratio == *best && self.basis[row] < self.basis[*best_row])
                    }
                };
                if better {
                    leave = Some((row, ratio));
                }
            }
            let (pivot_row, _) = leave?;
            self.pivot(pivot_row, enter);
            let factor = reduced[enter].clone();
            for (d, a) in reduced.iter_mut().zip(&self.rows[pivot_row]) {
                if !a.is_zero() {
                    *d -= &factor * a;
                }
            }
            value += &factor * &self.rhs[pivot_row];
        }
    }

    fn pivot(&mut self, pivot_row: usize, col: usize) {
        let p = self.rows[pivot_row][col].clone();
        for x in self.rows[pivot_row].iter_mut() {
            if !x.is_zero() {
                *x /= &p;
            }
        }
        self.rhs[pivot_row] /= &p;
        let nonzero: Vec<usize> = (0..self.num_cols)
            .filter(|&j| !self.rows[pivot_row][j].is_zero())
            .collect();
        let pivot_vals: Vec<Rational> = nonzero.iter().map(|&j| self.rows[pivot_row][j].clone()).collect();
        let pivot_rhs = self.rhs[pivot_row].clone();
        for row in 0..self.rows.len() {
            if row == pivot_row || self.rows[row][col].is_zero() {
                continue;
            }
            let factor = self.rows[row][col].clone();
            for (&j, v) in nonzero.iter().zip(&pivot_vals) {
                self.rows[row][j] -= &factor * v;
            }
            self.rhs[row] -= &factor * &pivot_rhs;
        }
        self.basis[pivot_row] = col;
    }

    /// After a zero-value phase one, pivots every basic artificial out of the
    /// basis or deletes its row when it is redundant.
    fn drive_out_artificials(&mut self) {
        let mut row = 0;
        while row < self.rows.len() {
            if self.basis[row] < self.first_artificial {
                row += 1;
                continue;
            }
            match (0..self.first_artificial).find(|&j| !self.rows[row][j].is_zero()) {
                Some(col) => {
                    self.pivot(row, col);
                    row += 1;
                }
                None => {
                    self.rows.remove(row);
                    self.rhs.remove(row);
                    self.basis.remove(row);
                }
            }
        }
    }
}
