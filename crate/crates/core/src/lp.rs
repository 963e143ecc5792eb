//! Dense two-phase simplex over exact rationals with Bland's rule.
//!
//! Problems are stated as `maximize c^T x` subject to rows `a^T x {<=,>=,=} b`,
//! with each variable either nonnegative or free. The solver returns the
//! optimal point together with row duals and reduced costs, so callers can
//! check complementary slackness and a zero duality gap exactly.

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::{self, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sense {
    Le,
    Ge,
    Eq,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VarKind {
    NonNegative,
    Free,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Constraint {
    pub coeffs: Vec<Rational>,
    pub sense: Sense,
    pub rhs: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearProgram {
    objective: Vec<Rational>,
    kinds: Vec<VarKind>,
    rows: Vec<Constraint>,
}

/// Optimal primal-dual pair.
///
/// Dual signs follow the maximization convention: `y >= 0` on `<=` rows,
/// `y <= 0` on `>=` rows, free on equalities. Reduced costs `c - A^T y` are
/// `<= 0` on nonnegative variables and `0` on free ones.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LpSolution {
    pub x: Vec<Rational>,
    pub objective: Rational,
    pub duals: Vec<Rational>,
    pub reduced_costs: Vec<Rational>,
}

impl LinearProgram {
    pub fn maximize(objective: Vec<Rational>) -> Self {
        let n = objective.len();
        Self { objective, kinds: vec![VarKind::NonNegative; n], rows: Vec::new() }
    }

    pub fn num_vars(&self) -> usize {
        self.objective.len()
    }

    pub fn objective(&self) -> &[Rational] {
        &self.objective
    }

    pub fn kinds(&self) -> &[VarKind] {
        &self.kinds
    }

    pub fn rows(&self) -> &[Constraint] {
        &self.rows
    }

    pub fn set_free(&mut self, var: usize) -> &mut Self {
        self.kinds[var] = VarKind::Free;
        self
    }

    pub fn add_row(&mut self, coeffs: Vec<Rational>, sense: Sense, rhs: Rational) -> &mut Self {
        assert_eq!(coeffs.len(), self.num_vars(), "row width must match the variable count");
        self.rows.push(Constraint { coeffs, sense, rhs });
        self
    }

    pub fn solve(&self) -> Result<LpSolution> {
        let mut t = Tableau::build(self);
        t.phase_one()?;
        t.phase_two()?;
        Ok(t.extract(self))
    }

    /// Exact optimality check of a claimed primal-dual pair. Returns the
    /// first violated condition.
    pub fn certify(&self, sol: &LpSolution) -> Result<()> {
        let fail = |constraint: String, residual: Rational| Err(Error::CertificateInvalid { constraint, residual });
        for (j, (x, kind)) in sol.x.iter().zip(&self.kinds).enumerate() {
            if *kind == VarKind::NonNegative && x.is_negative() {
                return fail(format!("x[{j}] >= 0"), x.clone());
            }
        }
        for (i, (row, y)) in self.rows.iter().zip(&sol.duals).enumerate() {
            let lhs: Rational = row.coeffs.iter().zip(&sol.x).map(|(a, x)| a * x).sum();
            let slack = &row.rhs - &lhs;
            let primal_ok = match row.sense {
                Sense::Le => !slack.is_negative(),
                Sense::Ge => !slack.is_positive(),
                Sense::Eq => slack.is_zero(),
            };
            if !primal_ok {
                return fail(format!("row {i} primal feasibility"), slack);
            }
            let dual_ok = match row.sense {
                Sense::Le => !y.is_negative(),
                Sense::Ge => !y.is_positive(),
                Sense::Eq => true,
            };
            if !dual_ok {
                return fail(format!("row {i} dual sign"), y.clone());
            }
            let cs = y * &slack;
            if !cs.is_zero() {
                return fail(format!("row {i} complementary slackness"), cs);
            }
        }
        for j in 0..self.num_vars() {
            let r = &self.objective[j] - self.column_dot(j, &sol.duals);
            if r != sol.reduced_costs[j] {
                return fail(format!("x[{j}] reduced cost"), &r - &sol.reduced_costs[j]);
            }
            let ok = match self.kinds[j] {
                VarKind::NonNegative => !r.is_positive(),
                VarKind::Free => r.is_zero(),
            };
            if !ok {
                return fail(format!("x[{j}] dual feasibility"), r);
            }
            let cs = &r * &sol.x[j];
            if !cs.is_zero() {
                return fail(format!("x[{j}] complementary slackness"), cs);
            }
        }
        let primal: Rational = self.objective.iter().zip(&sol.x).map(|(c, x)| c * x).sum();
        let dual: Rational = self.rows.iter().zip(&sol.duals).map(|(r, y)| &r.rhs * y).sum();
        if primal != dual {
            return fail("duality gap".into(), primal - dual);
        }
        Ok(())
    }

    fn column_dot(&self, j: usize, y: &[Rational]) -> Rational {
        self.rows.iter().zip(y).map(|(r, y)| &r.coeffs[j] * y).sum()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum ColumnRole {
    /// Positive (or only) part of an original variable.
    Plus(usize),
    /// Negative part of a free original variable.
    Minus(usize),
    Slack,
    Surplus,
    Artificial,
}

struct Tableau {
    /// `B^{-1} A`, row-major.
    body: Vec<Vec<Rational>>,
    rhs: Vec<Rational>,
    basis: Vec<usize>,
    roles: Vec<ColumnRole>,
    /// Column that held the identity for each row at the start.
    identity_col: Vec<usize>,
    /// Rows multiplied by -1 to make the right-hand side nonnegative.
    flipped: Vec<bool>,
    phase_two_cost: Vec<Rational>,
}

impl Tableau {
    fn build(lp: &LinearProgram) -> Self {
        let mut roles = Vec::new();
        let mut var_cols = Vec::new();
        for (j, kind) in lp.kinds.iter().enumerate() {
            roles.push(ColumnRole::Plus(j));
            var_cols.push((j, 1));
            if *kind == VarKind::Free {
                roles.push(ColumnRole::Minus(j));
                var_cols.push((j, -1));
            }
        }
        let m = lp.rows.len();
        let mut flipped = Vec::with_capacity(m);
        let mut senses = Vec::with_capacity(m);
        let mut rhs = Vec::with_capacity(m);
        for row in &lp.rows {
            let flip = row.rhs.is_negative();
            flipped.push(flip);
            rhs.push(if flip { -&row.rhs } else { row.rhs.clone() });
            senses.push(match (row.sense, flip) {
                (Sense::Le, false) | (Sense::Ge, true) => Sense::Le,
                (Sense::Ge, false) | (Sense::Le, true) => Sense::Ge,
                (Sense::Eq, _) => Sense::Eq,
            });
        }
        // Auxiliary columns: one identity column per row, plus a surplus for >= rows.
        let mut identity_col = Vec::with_capacity(m);
        let mut surplus_col = vec![None; m];
        for (i, sense) in senses.iter().enumerate() {
            match sense {
                Sense::Le => {
                    identity_col.push(roles.len());
                    roles.push(ColumnRole::Slack);
                }
                Sense::Ge => {
                    surplus_col[i] = Some(roles.len());
                    roles.push(ColumnRole::Surplus);
                    identity_col.push(roles.len());
                    roles.push(ColumnRole::Artificial);
                }
                Sense::Eq => {
                    identity_col.push(roles.len());
                    roles.push(ColumnRole::Artificial);
                }
            }
        }
        let width = roles.len();
        let mut body = vec![vec![rational::zero(); width]; m];
        for (i, row) in lp.rows.iter().enumerate() {
            let sign = if flipped[i] { -rational::one() } else { rational::one() };
            for (col, &(j, s)) in var_cols.iter().enumerate() {
                let a = &row.coeffs[j] * &sign;
                body[i][col] = if s > 0 { a } else { -a };
            }
            body[i][identity_col[i]] = rational::one();
            if let Some(c) = surplus_col[i] {
                body[i][c] = -rational::one();
            }
        }
        let phase_two_cost = roles
            .iter()
            .map(|r| match r {
                ColumnRole::Plus(j) => lp.objective[*j].clone(),
                ColumnRole::Minus(j) => -&lp.objective[*j],
                _ => rational::zero(),
            })
            .collect();
        Self { body, rhs, basis: identity_col.clone(), roles, identity_col, flipped, phase_two_cost }
    }

    fn is_artificial(&self, col: usize) -> bool {
        self.roles[col] == ColumnRole::Artificial
    }

    fn phase_one(&mut self) -> Result<()> {
        if !self.roles.contains(&ColumnRole::Artificial) {
            return Ok(());
        }
        let cost: Vec<Rational> = (0..self.roles.len())
            .map(|c| if self.is_artificial(c) { -rational::one() } else { rational::zero() })
            .collect();
        self.optimize(&cost, true)?;
        let infeasibility: Rational = self
            .basis
            .iter()
            .zip(&self.rhs)
            .filter(|(&b, _)| self.is_artificial(b))
            .map(|(_, v)| v.clone())
            .sum();
        if infeasibility.is_positive() {
            return Err(Error::Infeasible);
        }
        // Artificials still basic sit at level zero; pivot them out where the
        // row allows. Rows with no eligible entry are redundant and stay inert.
        for i in 0..self.basis.len() {
            if !self.is_artificial(self.basis[i]) {
                continue;
            }
            let entering = (0..self.roles.len()).find(|&c| !self.is_artificial(c) && !self.body[i][c].is_zero());
            if let Some(c) = entering {
                self.pivot(i, c);
            }
        }
        Ok(())
    }

    fn phase_two(&mut self) -> Result<()> {
        let cost = self.phase_two_cost.clone();
        self.optimize(&cost, false)
    }

    fn optimize(&mut self, cost: &[Rational], allow_artificial: bool) -> Result<()> {
        loop {
            let entering = (0..self.roles.len()).find(|&c| {
                (allow_artificial || !self.is_artificial(c))
                    && !self.basis.contains(&c)
                    && self.reduced_cost(cost, c).is_positive()
            });
            let Some(e) = entering else {
                return Ok(());
            };
            let mut leaving: Option<(usize, Rational)> = None;
            for i in 0..self.body.len() {
                let a = &self.body[i][e];
                if !a.is_positive() {
                    continue;
                }
                let r = &self.rhs[i] / a;
                let better = match &leaving {
                    None => true,
                    Some((li, lr)) => r < *lr || (r == *lr && self.basis[i] < self.basis[*li]),
                };
                if better {
                    leaving = Some((i, r));
                }
            }
            let Some((row, _)) = leaving else {
                return Err(Error::Unbounded);
            };
            self.pivot(row, e);
        }
    }

    fn reduced_cost(&self, cost: &[Rational], col: usize) -> Rational {
        let mut r = cost[col].clone();
        for (i, &b) in self.basis.iter().enumerate() {
            if !cost[b].is_zero() && !self.body[i][col].is_zero() {
                r -= &cost[b] * &self.body[i][col];
            }
        }
        r
    }

    fn pivot(&mut self, row: usize, col: usize) {
        let p = self.body[row][col].clone();
        for v in self.body[row].iter_mut() {
            *v /= &p;
        }
        self.rhs[row] /= &p;
        let pivot_row = self.body[row].clone();
        let pivot_rhs = self.rhs[row].clone();
        for i in 0..self.body.len() {
            if i == row {
                continue;
            }
            let f = self.body[i][col].clone();
            if f.is_zero() {
                continue;
            }
            for (v, pv) in self.body[i].iter_mut().zip(&pivot_row) {
                if !pv.is_zero() {
                    *v -= &f * pv;
                }
            }
            self.rhs[i] -= &f * &pivot_rhs;
        }
        self.basis[row] = col;
    }

    fn extract(&self, lp: &LinearProgram) -> LpSolution {
        let mut x = vec![rational::zero(); lp.num_vars()];
        for (i, &b) in self.basis.iter().enumerate() {
            match self.roles[b] {
                ColumnRole::Plus(j) => x[j] += &self.rhs[i],
                ColumnRole::Minus(j) => x[j] -= &self.rhs[i],
                _ => {}
            }
        }
        let cost = &self.phase_two_cost;
        let duals: Vec<Rational> = (0..self.body.len())
            .map(|r| {
                let col = self.identity_col[r];
                let y: Rational = self
                    .basis
                    .iter()
                    .enumerate()
                    .map(|(i, &b)| &cost[b] * &self.body[i][col])
                    .sum();
                if self.flipped[r] {
                    -y
                } else {
                    y
                }
            })
            .collect();
        let reduced_costs = (0..lp.num_vars()).map(|j| &lp.objective[j] - lp.column_dot(j, &duals)).collect();
        let objective = lp.objective.iter().zip(&x).map(|(c, x)| c * x).sum();
        LpSolution { x, objective, duals, reduced_costs }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    fn v(xs: &[i64]) -> Vec<Rational> {
        xs.iter().map(|&x| int(x)).collect()
    }

    #[test]
    fn textbook_maximum() {
        // max x + 2y, x + y <= 4, x <= 2, y <= 3 -> (1, 3), value 7
        let mut lp = LinearProgram::maximize(v(&[1, 2]));
        lp.add_row(v(&[1, 1]), Sense::Le, int(4))
            .add_row(v(&[1, 0]), Sense::Le, int(2))
            .add_row(v(&[0, 1]), Sense::Le, int(3));
        let sol = lp.solve().unwrap();
        assert_eq!(sol.x, v(&[1, 3]));
        assert_eq!(sol.objective, int(7));
        lp.certify(&sol).unwrap();
    }

    #[test]
    fn phase_one_with_ge_and_eq_rows() {
        // min x + y  <=>  max -x - y, x + 2y >= 2, x - y = 1/2
        let mut lp = LinearProgram::maximize(v(&[-1, -1]));
        lp.add_row(v(&[1, 2]), Sense::Ge, int(2)).add_row(v(&[1, -1]), Sense::Eq, ratio(1, 2));
        let sol = lp.solve().unwrap();
        assert_eq!(sol.x, vec![ratio(1, 1), ratio(1, 2)]);
        assert_eq!(sol.objective, ratio(-3, 2));
        lp.certify(&sol).unwrap();
    }

    #[test]
    fn free_variables_and_negative_rhs() {
        // max -t, t >= -3 (written as -t <= 3), t free -> t = -3
        let mut lp = LinearProgram::maximize(v(&[-1]));
        lp.set_free(0);
        lp.add_row(v(&[1]), Sense::Ge, int(-3));
        let sol = lp.solve().unwrap();
        assert_eq!(sol.x, v(&[-3]));
        lp.certify(&sol).unwrap();
    }

    #[test]
    fn infeasible_and_unbounded() {
        let mut lp = LinearProgram::maximize(v(&[1]));
        lp.add_row(v(&[1]), Sense::Le, int(1)).add_row(v(&[1]), Sense::Ge, int(2));
        assert_eq!(lp.solve(), Err(Error::Infeasible));

        let mut lp = LinearProgram::maximize(v(&[1, 0]));
        lp.add_row(v(&[-1, 1]), Sense::Le, int(1));
        assert_eq!(lp.solve(), Err(Error::Unbounded));
    }

    #[test]
    fn redundant_equalities_keep_valid_duals() {
        let mut lp = LinearProgram::maximize(v(&[1, 1]));
        lp.add_row(v(&[1, 1]), Sense::Eq, int(1))
            .add_row(v(&[2, 2]), Sense::Eq, int(2))
            .add_row(v(&[1, 0]), Sense::Le, ratio(1, 3));
        let sol = lp.solve().unwrap();
        assert_eq!(sol.objective, int(1));
        lp.certify(&sol).unwrap();
    }

    #[test]
    fn degenerate_cycling_example_terminates() {
        // Beale's classic cycling instance; Bland's rule must terminate.
        let mut lp = LinearProgram::maximize(vec![ratio(3, 4), int(-150), ratio(1, 50), int(-6)]);
        lp.add_row(vec![ratio(1, 4), int(-60), ratio(-1, 25), int(9)], Sense::Le, int(0))
            .add_row(vec![ratio(1, 2), int(-90), ratio(-1, 50), int(3)], Sense::Le, int(0))
            .add_row(vec![int(0), int(0), int(1), int(0)], Sense::Le, int(1));
        let sol = lp.solve().unwrap();
        assert_eq!(sol.objective, ratio(1, 20));
        lp.certify(&sol).unwrap();
    }

    #[test]
    fn certify_rejects_a_suboptimal_pair() {
        let mut lp = LinearProgram::maximize(v(&[1]));
        lp.add_row(v(&[1]), Sense::Le, int(1));
        let mut sol = lp.solve().unwrap();
        sol.x = v(&[0]);
        assert!(matches!(lp.certify(&sol), Err(Error::CertificateInvalid { .. })));
    }
}
