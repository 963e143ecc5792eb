use crate::charge::{lower_expectation, mix, Charge, Event, SublinearExpectation, TestFunction};
use crate::error::{Error, Result};
use crate::lp::{LinearProgram, Sense};
use crate::problem::TestProblem;
use crate::rational::{self, Rational};

use super::{check_claimed_value, countable_alternative, epigraph_lp, Solution};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Case {
    /// Every optimal test exhausts the level.
    LevelAttained,
    /// Some optimal test has level strictly below alpha.
    LevelSlack,
}

impl Case {
    pub fn as_str(&self) -> &'static str {
        match self {
            Case::LevelAttained => "LevelAttained",
            Case::LevelSlack => "LevelSlack",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CaseReport {
    pub case: Case,
    /// `min max_P E_P[X]` over the optimal face.
    pub min_level: Rational,
    pub witness: TestFunction,
    /// Null mixture weights from the duals of the level rows.
    pub p_weights: Vec<Rational>,
    pub p_mixture: Charge,
}

/// Minimizes the level over all tests whose power reaches `gamma`.
pub(crate) fn analyse(prob: &TestProblem, gamma: &Rational) -> Result<CaseReport> {
    let space = prob.space();
    let n = space.variable_count();
    let mut objective = vec![rational::zero(); n + 1];
    objective[n] = -rational::one();
    let mut lp = LinearProgram::maximize(objective);
    lp.set_free(n);
    for p in prob.null().family() {
        let mut row = p.to_variables();
        row.push(-rational::one());
        lp.add_row(row, Sense::Le, rational::zero());
    }
    for q in prob.alternative().family() {
        let mut row = q.to_variables();
        row.push(rational::zero());
        lp.add_row(row, Sense::Ge, gamma.clone());
    }
    for k in 0..n {
        let mut row = vec![rational::zero(); n + 1];
        row[k] = rational::one();
        lp.add_row(row, Sense::Le, rational::one());
    }
    let sol = lp.solve()?;
    let min_level = sol.x[n].clone();
    let witness = TestFunction::from_variables(space, &sol.x[..n])?;
    let p_weights = sol.duals[..prob.null().len()].to_vec();
    let p_mixture = mix(prob.null().family(), &p_weights)?;
    let case = if min_level < *prob.alpha() { Case::LevelSlack } else { Case::LevelAttained };
    Ok(CaseReport { case, min_level, witness, p_weights, p_mixture })
}

/// Decides whether some optimal test leaves level unused. The claimed
/// solution must be feasible and reach the true optimum.
pub fn detect_case(prob: &TestProblem, sol: &Solution) -> Result<CaseReport> {
    check_claimed_value(prob, sol)?;
    let optimum = epigraph_lp(prob).solve()?.objective;
    if optimum != sol.gamma_alpha {
        return Err(Error::NotOptimal(format!("claimed value {} but the optimum is {optimum}", sol.gamma_alpha)));
    }
    analyse(prob, &sol.gamma_alpha)
}

/// Largest event carrying no mass of `q`: the complement of its atom support,
/// together with the tail.
pub fn maximal_null_event(q: &Charge) -> Event {
    q.support().complement()
}

/// Lower null probability of the largest `q_countable`-null event. Lower
/// probability is monotone in the event, so this is the supremum over all
/// null events.
pub fn compute_beta(p_family: &SublinearExpectation, q_countable: &Charge) -> Result<Rational> {
    if !q_countable.is_countably_additive() {
        return Err(Error::TailMassPresent {
            what: "compute_beta argument q_countable".into(),
            detail: "pass the countable part of the decomposition".into(),
        });
    }
    let z = maximal_null_event(q_countable);
    Ok(lower_expectation(p_family, &z.indicator())?.value)
}

/// Outcome of comparing `beta > 1 - alpha` with the observed cases.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BetaCriterion {
    pub beta: Rational,
    pub predicts_slack: bool,
    /// Agreement with `countable_case`, the split the criterion characterizes.
    pub holds: bool,
    /// Agreement with `case` of the full problem. Can differ from `holds`
    /// only when the alternative keeps mass at infinity that the null sees.
    pub matches_full_case: bool,
}

/// Cross-check: slack exactly when `beta > 1 - alpha`.
pub fn beta_criterion(prob: &TestProblem, sol: &Solution) -> Result<BetaCriterion> {
    let qc = countable_alternative(sol)?;
    let beta = compute_beta(prob.null(), &qc)?;
    let predicts_slack = beta > rational::one() - prob.alpha();
    Ok(BetaCriterion {
        holds: predicts_slack == (sol.countable_case == Case::LevelSlack),
        matches_full_case: predicts_slack == (sol.case == Case::LevelSlack),
        beta,
        predicts_slack,
    })
}

pub fn beta_criterion_check(prob: &TestProblem, sol: &Solution) -> Result<bool> {
    Ok(beta_criterion(prob, sol)?.holds)
}
