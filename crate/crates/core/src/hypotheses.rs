//! Regularity conditions on the two families, decided on the tail model.
//!
//! Along the canonical decreasing sequence (explicit atoms removed one by one,
//! tail kept) the expectation of every charge converges to its tail mass, and
//! no decreasing-to-empty sequence has a larger limit. Limit conditions
//! therefore reduce to statements about tail masses.

use num_traits::{Signed, Zero};

use crate::charge::{upper_expectation, Charge, SampleSpace, SublinearExpectation, TestFunction};
use crate::error::{Error, Result};
use crate::minimax::solve_minimax;
use crate::problem::TestProblem;
use crate::rational::{self, Rational};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Witness {
    /// Limits of the null and alternative upper probabilities along the
    /// canonical decreasing sequence.
    TailSequence { null_limit: Rational, alternative_limit: Rational },
    /// Shaving by `1/k` does not lower the upper expectation.
    Shaving { k: u64, level: Rational, shaved: Rational },
    /// A maximizing member puts no mass where the test is positive.
    SupportGap { member: usize },
    /// A member with purely additive mass.
    TailMember { member: usize, tail_mass: Rational },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Check {
    pub holds: bool,
    pub witness: Option<Witness>,
}

impl Check {
    fn pass() -> Self {
        Self { holds: true, witness: None }
    }

    fn fail(witness: Witness) -> Self {
        Self { holds: false, witness: Some(witness) }
    }
}

fn tail_witness(p: &SublinearExpectation, q: &SublinearExpectation) -> Witness {
    Witness::TailSequence { null_limit: p.max_tail_mass(), alternative_limit: q.max_tail_mass() }
}

/// Wherever the alternative keeps mass at infinity, the null must not.
pub fn check_h1(p: &SublinearExpectation, q: &SublinearExpectation) -> Check {
    if q.max_tail_mass().is_zero() || p.max_tail_mass().is_zero() {
        Check::pass()
    } else {
        Check::fail(tail_witness(p, q))
    }
}

/// Strict decrease of the upper null expectation under shaving `(x - 1/k)^+`
/// for `k = 1..=k_max`, plus the support condition that decides all larger `k`.
pub fn check_h2_at(p: &SublinearExpectation, x: &TestFunction, k_max: u64) -> Result<Check> {
    let top = upper_expectation(p, x)?.value;
    if top.is_zero() {
        return Ok(Check::pass());
    }
    for k in 1..=k_max {
        let shift = rational::ratio(1, k as i64);
        let shaved = upper_expectation(p, &x.shave(&shift))?.value;
        if shaved >= top {
            return Ok(Check::fail(Witness::Shaving { k, level: top, shaved }));
        }
    }
    let positive = x.positive_event();
    for (member, c) in p.family().iter().enumerate() {
        if crate::charge::expectation(c, x)? == top && !c.measure(&positive)?.is_positive() {
            return Ok(Check::fail(Witness::SupportGap { member }));
        }
    }
    Ok(Check::pass())
}

/// Neither family may put full mass at infinity.
pub fn check_h3(p: &SublinearExpectation, q: &SublinearExpectation) -> Check {
    if p.max_tail_mass() < rational::one() && q.max_tail_mass() < rational::one() {
        Check::pass()
    } else {
        Check::fail(tail_witness(p, q))
    }
}

pub fn check_continuity_from_above(family: &SublinearExpectation) -> Check {
    match family.family().iter().enumerate().find(|(_, c)| !c.tail_mass().is_zero()) {
        Some((member, c)) => Check::fail(Witness::TailMember { member, tail_mass: c.tail_mass().clone() }),
        None => Check::pass(),
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HypothesisReport {
    pub h1: Check,
    pub h2_at: Vec<(TestFunction, Check)>,
    pub h3: Check,
    pub continuity_p: Check,
    pub continuity_q: Check,
}

impl HypothesisReport {
    pub fn h2_holds(&self) -> bool {
        self.h2_at.iter().all(|(_, c)| c.holds)
    }

    pub fn h1_to_h3_hold(&self) -> bool {
        self.h1.holds && self.h2_holds() && self.h3.holds
    }
}

pub const DEFAULT_K_MAX: u64 = 64;

pub fn hypothesis_report(prob: &TestProblem, tests: &[TestFunction], k_max: u64) -> Result<HypothesisReport> {
    let h2_at = tests
        .iter()
        .map(|x| Ok((x.clone(), check_h2_at(prob.null(), x, k_max)?)))
        .collect::<Result<_>>()?;
    Ok(HypothesisReport {
        h1: check_h1(prob.null(), prob.alternative()),
        h2_at,
        h3: check_h3(prob.null(), prob.alternative()),
        continuity_p: check_continuity_from_above(prob.null()),
        continuity_q: check_continuity_from_above(prob.alternative()),
    })
}

/// A family of problems indexed by truncation size.
pub trait ProblemGenerator {
    fn name(&self) -> &'static str;
    fn generate(&self, size: usize, alpha: &Rational) -> Result<TestProblem>;
}

/// Null: unit mass at infinity. Alternative: mass `1/2^k` on atom `k` for
/// `k = 1..=N`, remainder `1/2^N` on the tail. The optimal power
/// `1 - (1 - alpha)/2^N` increases to 1 without reaching it.
#[derive(Debug, Clone, Copy, Default)]
pub struct NonexistenceGenerator;

impl ProblemGenerator for NonexistenceGenerator {
    fn name(&self) -> &'static str {
        "nonexistence"
    }

    fn generate(&self, size: usize, alpha: &Rational) -> Result<TestProblem> {
        if size == 0 {
            return Err(Error::Usage("truncation size must be at least 1".into()));
        }
        let space = SampleSpace::new((1..=size).map(|k| k.to_string()), true)?;
        let mut mass = Vec::with_capacity(size);
        let mut half = rational::one();
        for _ in 0..size {
            half /= rational::int(2);
            mass.push(half.clone());
        }
        let alternative = Charge::probability(&space, mass, half)?;
        let null = Charge::pure_tail(&space)?;
        TestProblem::from_charges(vec![null], vec![alternative], alpha.clone())
    }
}

pub fn generator_by_name(name: &str) -> Option<Box<dyn ProblemGenerator>> {
    match name {
        "nonexistence" => Some(Box::new(NonexistenceGenerator)),
        _ => None,
    }
}

pub const GENERATOR_NAMES: &[&str] = &["nonexistence"];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SweepReport {
    pub generator: String,
    pub alpha: Rational,
    pub rows: Vec<(usize, Rational)>,
    /// Sizes whose value does not exceed the previous row's.
    pub non_monotone: Vec<usize>,
}

pub fn truncation_sweep(generator: &dyn ProblemGenerator, sizes: &[usize], alpha: &Rational) -> Result<SweepReport> {
    let mut rows = Vec::with_capacity(sizes.len());
    for &n in sizes {
        let prob = generator.generate(n, alpha)?;
        rows.push((n, solve_minimax(&prob)?.gamma_alpha));
    }
    let non_monotone = rows.windows(2).filter(|w| w[1].1 <= w[0].1).map(|w| w[1].0).collect();
    Ok(SweepReport { generator: generator.name().to_string(), alpha: alpha.clone(), rows, non_monotone })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::charge::FamilyRole;
    use crate::rational::{int, ratio};

    fn family(role: FamilyRole, cs: Vec<Charge>) -> SublinearExpectation {
        SublinearExpectation::new(role, cs).unwrap()
    }

    #[test]
    fn h1_cases() {
        let s = SampleSpace::new(["a", "b"], true).unwrap();
        let ca = Charge::uniform(&s);
        let half_tail = Charge::new(&s, vec![ratio(1, 4), ratio(1, 4)], ratio(1, 2)).unwrap();
        let p = family(FamilyRole::Null, vec![ca.clone()]);
        let q = family(FamilyRole::Alternative, vec![ca.clone()]);
        assert!(check_h1(&p, &q).holds);
        let pt = family(FamilyRole::Null, vec![half_tail.clone()]);
        let qt = family(FamilyRole::Alternative, vec![half_tail]);
        let c = check_h1(&pt, &qt);
        assert!(!c.holds);
        assert_eq!(
            c.witness,
            Some(Witness::TailSequence { null_limit: ratio(1, 2), alternative_limit: ratio(1, 2) })
        );
    }

    #[test]
    fn h3_and_continuity() {
        let s = SampleSpace::new(["a"], true).unwrap();
        let pure = Charge::pure_tail(&s).unwrap();
        let half = Charge::new(&s, vec![ratio(1, 2)], ratio(1, 2)).unwrap();
        let third = Charge::new(&s, vec![ratio(2, 3)], ratio(1, 3)).unwrap();
        let quarter = Charge::new(&s, vec![ratio(3, 4)], ratio(1, 4)).unwrap();
        assert!(!check_h3(&family(FamilyRole::Null, vec![pure.clone()]), &family(FamilyRole::Alternative, vec![half.clone()])).holds);
        assert!(check_h3(&family(FamilyRole::Null, vec![half]), &family(FamilyRole::Alternative, vec![third])).holds);
        assert!(!check_continuity_from_above(&family(FamilyRole::Null, vec![pure])).holds);
        assert!(!check_continuity_from_above(&family(FamilyRole::Null, vec![quarter])).holds);
        assert!(check_continuity_from_above(&family(FamilyRole::Null, vec![Charge::uniform(&s)])).holds);
    }

    #[test]
    fn h2_examples() {
        let s = SampleSpace::new(["a", "b"], true).unwrap();
        let x = TestFunction::new(&s, vec![int(1), ratio(1, 2)], int(0)).unwrap();
        assert!(check_h2_at(&family(FamilyRole::Null, vec![Charge::uniform(&s)]), &x, 32).unwrap().holds);
        assert!(check_h2_at(&family(FamilyRole::Null, vec![Charge::pure_tail(&s).unwrap()]), &x, 32).unwrap().holds);
        let y = TestFunction::new(&s, vec![int(0), int(1)], int(0)).unwrap();
        assert!(check_h2_at(&family(FamilyRole::Null, vec![Charge::dirac(&s, "a").unwrap()]), &y, 32).unwrap().holds);
    }

    #[test]
    fn nonexistence_sweep() {
        let g = NonexistenceGenerator;
        let r = truncation_sweep(&g, &[1, 2, 3], &ratio(1, 2)).unwrap();
        assert_eq!(r.rows, vec![(1, ratio(3, 4)), (2, ratio(7, 8)), (3, ratio(15, 16))]);
        assert!(r.non_monotone.is_empty());
        let r = truncation_sweep(&g, &[1, 2, 3], &ratio(1, 4)).unwrap();
        assert_eq!(r.rows, vec![(1, ratio(5, 8)), (2, ratio(13, 16)), (3, ratio(29, 32))]);
        assert!(g.generate(0, &ratio(1, 2)).is_err());
        let prob = g.generate(4, &ratio(1, 2)).unwrap();
        assert!(!check_h3(prob.null(), prob.alternative()).holds);
        // The truncation keeps alternative mass at infinity, so H1 fails there.
        assert!(!check_h1(prob.null(), prob.alternative()).holds);
    }

    #[test]
    fn h1_is_vacuous_for_an_atomic_alternative() {
        let s = SampleSpace::new(["1", "2", "3"], true).unwrap();
        let geometric = Charge::new(&s, vec![ratio(1, 2), ratio(1, 4), ratio(1, 4)], int(0)).unwrap();
        let p = family(FamilyRole::Null, vec![Charge::pure_tail(&s).unwrap()]);
        let q = family(FamilyRole::Alternative, vec![geometric]);
        assert!(check_h1(&p, &q).holds);
    }
}
