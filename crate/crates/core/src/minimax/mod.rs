//! The robust testing problem solved as an exact linear program.
//!
//! Decision variables are the test values on the explicit atoms followed by
//! the tail value when the space has one. The power `min_Q E_Q[X]` enters
//! through an epigraph variable `t`:
//!
//! ```text
//! maximize t
//!   t - E_Q[X] <= 0      for every Q in the alternative family
//!   E_P[X]     <= alpha  for every P in the null family
//!   X          <= 1,  X >= 0,  t free
//! ```
//!
//! Duals on the first block are the mixture weights of the least-favorable
//! alternative charge.

mod case;
mod certificate;
mod representation;

pub use case::{beta_criterion, beta_criterion_check, compute_beta, BetaCriterion, detect_case, maximal_null_event, Case, CaseReport};
pub use certificate::{kkt_certificate, ConstraintRef, DualCertificate, Residual};
pub use representation::{
    verify_degenerate_form, verify_degenerate_form_sampled, verify_threshold_form, AtomClass, KappaCandidate,
    RepresentationForm, RepresentationReport,
};

use num_traits::Zero;

use crate::charge::{mix, upper_expectation, lower_expectation, yosida_hewitt, Charge, TestFunction};
use crate::error::{Error, Result};
use crate::lp::{LinearProgram, LpSolution, Sense};
use crate::problem::TestProblem;
use crate::rational::{self, Rational};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Solution {
    pub x_alpha: TestFunction,
    /// Optimal power `sup_X min_Q E_Q[X]`.
    pub gamma_alpha: Rational,
    /// `max_P E_P[x_alpha]`.
    pub attained_level: Rational,
    /// Least-favorable alternative charge, a mixture of the family.
    pub q_alpha: Charge,
    pub q_weights: Vec<Rational>,
    /// Least-favorable null charge from the auxiliary level-minimization problem.
    pub p_alpha: Charge,
    pub p_weights: Vec<Rational>,
    /// Weight of the countably additive part of `q_alpha`.
    pub lambda: Rational,
    /// `sup_{X feasible} E_{lambda Q^c}[X]`.
    pub gamma_countable: Rational,
    /// Whether some optimal test of the full problem leaves level unused.
    pub case: Case,
    /// The same split for the countable part: whether some test of level
    /// below alpha reaches `gamma_countable` under `lambda Q^c`. Equals
    /// `case` under the regularity hypotheses.
    pub countable_case: Case,
    /// Smallest level over all optimal tests, and a test attaining it.
    pub min_level: Rational,
    pub min_level_test: TestFunction,
    pub certificate: DualCertificate,
}

/// Solves the robust problem exactly, extracts least-favorable charges from
/// the LP duals, classifies the case and verifies the dual certificate.
pub fn solve_minimax(prob: &TestProblem) -> Result<Solution> {
    let space = prob.space();
    let n = space.variable_count();
    let nq = prob.alternative().len();
    let np = prob.null().len();

    let lp = epigraph_lp(prob);
    let primal = lp.solve()?;
    let gamma = primal.x[n].clone();
    let x_alpha = TestFunction::from_variables(space, &primal.x[..n])?;

    let duals = interior_duals(prob, &gamma, &primal)?;
    let mut certificate = DualCertificate::from_duals(prob, &duals);
    certificate.verify(prob, &x_alpha, &gamma)?;

    let q_weights = duals[..nq].to_vec();
    let q_alpha = mix(prob.alternative().family(), &q_weights)?;
    let lambda = rational::one() - q_alpha.tail_mass();
    let lambda_qc = q_alpha.atom_part();
    let gamma_countable = countable_value(prob, &lambda_qc, prob.alpha())?;

    let case_report = case::analyse(prob, &gamma)?;
    let (p_weights, p_alpha, countable_case) = if lambda.is_zero() {
        (case_report.p_weights.clone(), case_report.p_mixture.clone(), case_report.case)
    } else {
        let (w, level) = auxiliary_problem(prob, &lambda_qc, &gamma_countable)?;
        let m = mix(prob.null().family(), &w)?;
        let c = if level < *prob.alpha() { Case::LevelSlack } else { Case::LevelAttained };
        (w, m, c)
    };
    debug_assert_eq!(np, p_weights.len());

    let attained_level = upper_expectation(prob.null(), &x_alpha)?.value;
    Ok(Solution {
        x_alpha,
        gamma_alpha: gamma,
        attained_level,
        q_alpha,
        q_weights,
        p_alpha,
        p_weights,
        lambda,
        gamma_countable,
        case: case_report.case,
        countable_case,
        min_level: case_report.min_level,
        min_level_test: case_report.witness,
        certificate,
    })
}

pub(crate) fn epigraph_lp(prob: &TestProblem) -> LinearProgram {
    let n = prob.space().variable_count();
    let mut objective = vec![rational::zero(); n + 1];
    objective[n] = rational::one();
    let mut lp = LinearProgram::maximize(objective);
    lp.set_free(n);
    for q in prob.alternative().family() {
        let mut row: Vec<Rational> = q.to_variables().into_iter().map(|m| -m).collect();
        row.push(rational::one());
        lp.add_row(row, Sense::Le, rational::zero());
    }
    for p in prob.null().family() {
        let mut row = p.to_variables();
        row.push(rational::zero());
        lp.add_row(row, Sense::Le, prob.alpha().clone());
    }
    add_upper_bounds(&mut lp, n);
    lp
}

fn add_upper_bounds(lp: &mut LinearProgram, n: usize) {
    let width = lp.num_vars();
    for k in 0..n {
        let mut row = vec![rational::zero(); width];
        row[k] = rational::one();
        lp.add_row(row, Sense::Le, rational::one());
    }
}

/// Averages optimal duals, one maximizing each alternative weight, so that
/// every family member that can carry weight in some optimal dual does.
/// Layout: alternative weights, level duals, upper-bound duals.
fn interior_duals(prob: &TestProblem, gamma: &Rational, primal: &LpSolution) -> Result<Vec<Rational>> {
    let n = prob.space().variable_count();
    let nq = prob.alternative().len();
    let np = prob.null().len();
    let width = nq + np + n;

    let mut solutions = vec![primal.duals.clone()];
    if nq > 1 {
        for target in 0..nq {
            let mut objective = vec![rational::zero(); width];
            objective[target] = rational::one();
            let mut dual = LinearProgram::maximize(objective);
            // Stationarity in each test variable: sum_j w_j Q_jk <= sum_i l_i P_ik + u_k.
            for k in 0..n {
                let mut row = vec![rational::zero(); width];
                for (j, q) in prob.alternative().family().iter().enumerate() {
                    row[j] = q.to_variables()[k].clone();
                }
                for (i, p) in prob.null().family().iter().enumerate() {
                    row[nq + i] = -p.to_variables()[k].clone();
                }
                row[nq + np + k] = -rational::one();
                dual.add_row(row, Sense::Le, rational::zero());
            }
            let mut weights = vec![rational::zero(); width];
            weights[..nq].iter_mut().for_each(|w| *w = rational::one());
            dual.add_row(weights, Sense::Eq, rational::one());
            let mut value = vec![rational::zero(); width];
            value[nq..nq + np].iter_mut().for_each(|w| *w = prob.alpha().clone());
            value[nq + np..].iter_mut().for_each(|w| *w = rational::one());
            dual.add_row(value, Sense::Eq, gamma.clone());
            solutions.push(dual.solve()?.x);
        }
    }
    let count = Rational::from_integer(solutions.len().into());
    Ok((0..width)
        .map(|c| solutions.iter().map(|s| &s[c]).sum::<Rational>() / &count)
        .collect())
}

/// `sup { E_c[X] : max_P E_P[X] <= level, 0 <= X <= 1 }` for a (sub-probability) charge.
pub(crate) fn countable_value(prob: &TestProblem, c: &Charge, level: &Rational) -> Result<Rational> {
    let n = prob.space().variable_count();
    let mut lp = LinearProgram::maximize(c.to_variables());
    for p in prob.null().family() {
        lp.add_row(p.to_variables(), Sense::Le, level.clone());
    }
    add_upper_bounds(&mut lp, n);
    Ok(lp.solve()?.objective)
}

/// Level minimization with one power constraint:
/// `min_Y max_P E_P[Y]` subject to `E_c[Y] >= target`. Returns the dual
/// weights on the null family (they sum to one) and the minimal level.
fn auxiliary_problem(prob: &TestProblem, c: &Charge, target: &Rational) -> Result<(Vec<Rational>, Rational)> {
    let n = prob.space().variable_count();
    let mut objective = vec![rational::zero(); n + 1];
    objective[n] = -rational::one();
    let mut lp = LinearProgram::maximize(objective);
    lp.set_free(n);
    for p in prob.null().family() {
        let mut row = p.to_variables();
        row.push(-rational::one());
        lp.add_row(row, Sense::Le, rational::zero());
    }
    let mut power = c.to_variables();
    power.push(rational::zero());
    lp.add_row(power, Sense::Ge, target.clone());
    add_upper_bounds(&mut lp, n);
    let sol = lp.solve()?;
    Ok((sol.duals[..prob.null().len()].to_vec(), sol.x[n].clone()))
}

/// Recomputes the power of a solution and checks it against the claim.
pub(crate) fn check_claimed_value(prob: &TestProblem, sol: &Solution) -> Result<()> {
    let level = upper_expectation(prob.null(), &sol.x_alpha)?.value;
    if level > *prob.alpha() {
        return Err(Error::NotOptimal(format!("test has level {level} above alpha {}", prob.alpha())));
    }
    let power = lower_expectation(prob.alternative(), &sol.x_alpha)?.value;
    if power != sol.gamma_alpha {
        return Err(Error::NotOptimal(format!("test has power {power}, claimed {}", sol.gamma_alpha)));
    }
    Ok(())
}

/// Countable part of `q_alpha`, normalized. Fails with `PureLeastFavorable`
/// when `lambda = 0`.
pub(crate) fn countable_alternative(sol: &Solution) -> Result<Charge> {
    yosida_hewitt(&sol.q_alpha)?.countable.ok_or(Error::PureLeastFavorable)
}
