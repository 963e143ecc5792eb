//! Checks that an optimal test has the likelihood-ratio form predicted by
//! the least-favorable pair.

use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::charge::{expectation, radon_nikodym, yosida_hewitt, Charge, Densities, TestFunction};
use crate::error::{Error, Result};
use crate::neyman_pearson::Threshold;
use crate::problem::TestProblem;
use crate::rational::{self, Rational};

use super::{countable_value, Case, Solution};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum AtomClass {
    StrictAccept,
    StrictReject,
    Boundary,
    KNull,
}

impl AtomClass {
    pub fn as_str(&self) -> &'static str {
        match self {
            AtomClass::StrictAccept => "strict_accept",
            AtomClass::StrictReject => "strict_reject",
            AtomClass::Boundary => "boundary",
            AtomClass::KNull => "k_null",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RepresentationForm {
    /// `X = 1` where `H > kappa G`, `0` where `H < kappa G`.
    Threshold,
    /// `X = 1` where `H > 0`.
    Degenerate,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KappaCandidate {
    pub kappa: Threshold,
    pub certifies: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RepresentationReport {
    pub form: RepresentationForm,
    pub k: Charge,
    pub g: Vec<Option<Rational>>,
    pub h: Vec<Option<Rational>>,
    /// Threshold used for `classification`; `None` when no candidate certifies.
    pub kappa: Option<Threshold>,
    /// Threshold from the closed-form infimum, in the same orientation.
    pub kappa_formula: Option<Threshold>,
    pub candidates: Vec<KappaCandidate>,
    pub classification: Vec<AtomClass>,
    /// Test values on boundary atoms, by atom index.
    pub b_values: Vec<(usize, Rational)>,
    pub verdict: bool,
    pub violations: Vec<usize>,
    /// Level-value strictness on the epsilon grid (threshold form only).
    pub precondition_holds: Option<bool>,
    pub lambda: Rational,
    pub tau: Rational,
    pub gamma_countable: Rational,
    /// Threshold form: `E_{lambda Q^c}[X] = gamma^c`. Degenerate form: `= lambda`.
    pub gamma_consistent: bool,
}

fn classify(d: &Densities, kappa: &Threshold) -> Vec<AtomClass> {
    d.g.iter()
        .zip(&d.h)
        .map(|(g, h)| match (g, h) {
            (Some(g), Some(h)) => match kappa {
                Threshold::Finite(k) => {
                    let rhs = k * g;
                    if *h > rhs {
                        AtomClass::StrictAccept
                    } else if *h < rhs {
                        AtomClass::StrictReject
                    } else {
                        AtomClass::Boundary
                    }
                }
                Threshold::Infinite if g.is_zero() => AtomClass::Boundary,
                Threshold::Infinite => AtomClass::StrictReject,
            },
            _ => AtomClass::KNull,
        })
        .collect()
}

fn violations(classes: &[AtomClass], x: &TestFunction) -> Vec<usize> {
    classes
        .iter()
        .enumerate()
        .filter(|(a, c)| match c {
            AtomClass::StrictAccept => !x.value_at(*a).is_one(),
            AtomClass::StrictReject => !x.value_at(*a).is_zero(),
            _ => false,
        })
        .map(|(a, _)| a)
        .collect()
}

fn boundary_values(classes: &[AtomClass], x: &TestFunction) -> Vec<(usize, Rational)> {
    classes
        .iter()
        .enumerate()
        .filter(|(_, c)| **c == AtomClass::Boundary)
        .map(|(a, _)| (a, x.value_at(a).clone()))
        .collect()
}

/// Every threshold at which the classification can change, in increasing order.
fn candidate_thresholds(d: &Densities) -> Vec<Threshold> {
    let mut ratios: Vec<Rational> = d
        .g
        .iter()
        .zip(&d.h)
        .filter_map(|(g, h)| match (g, h) {
            (Some(g), Some(h)) if !g.is_zero() => Some(h / g),
            _ => None,
        })
        .collect();
    ratios.sort();
    ratios.dedup();
    let half = rational::ratio(1, 2);
    let mut out = vec![Threshold::Finite(rational::zero())];
    for (i, r) in ratios.iter().enumerate() {
        if i > 0 {
            out.push(Threshold::Finite((&ratios[i - 1] + r) * &half));
        }
        out.push(Threshold::Finite(r.clone()));
    }
    let top = ratios.last().cloned().unwrap_or_else(rational::zero) + rational::one();
    out.push(Threshold::Finite(top));
    out.push(Threshold::Infinite);
    out.dedup();
    out
}

/// `inf { u >= 0 : lambda Q^c(u H >= G) >= gamma^c }`, returned in the
/// orientation `H > kappa G`, that is as `1/u`.
fn formula_threshold(d: &Densities, lambda_qc: &Charge, gamma_c: &Rational) -> Option<Threshold> {
    if !gamma_c.is_positive() {
        return Some(Threshold::Infinite);
    }
    let mut atoms: Vec<(Rational, &Rational)> = d
        .g
        .iter()
        .zip(&d.h)
        .zip(lambda_qc.atom_mass())
        .filter_map(|((g, h), m)| match (g, h) {
            (Some(g), Some(h)) if h.is_positive() => Some((g / h, m)),
            _ => None,
        })
        .collect();
    atoms.sort_by(|a, b| a.0.cmp(&b.0));
    let mut mass = rational::zero();
    for (u, m) in atoms {
        mass += m;
        if mass >= *gamma_c {
            return Some(if u.is_zero() { Threshold::Infinite } else { Threshold::Finite(u.recip()) });
        }
    }
    None
}

fn precondition_on_grid(prob: &TestProblem, lambda_qc: &Charge, gamma_c: &Rational) -> Result<bool> {
    let mut eps = prob.alpha().clone();
    for _ in 0..20 {
        eps /= rational::int(2);
        let level = prob.alpha() - &eps;
        if countable_value(prob, lambda_qc, &level)? >= *gamma_c {
            return Ok(false);
        }
    }
    Ok(true)
}

/// First case: `x_alpha` must be `1` above and `0` below some threshold of
/// the density ratio of the countable parts of the least-favorable pair.
pub fn verify_threshold_form(prob: &TestProblem, sol: &Solution) -> Result<RepresentationReport> {
    if sol.case != Case::LevelAttained {
        return Err(Error::WrongCase("threshold form applies when the level is attained; use verify_degenerate_form".into()));
    }
    let q_dec = yosida_hewitt(&sol.q_alpha)?;
    if q_dec.lambda.is_zero() {
        return Err(Error::PureLeastFavorable);
    }
    let p_dec = yosida_hewitt(&sol.p_alpha)?;
    if p_dec.lambda.is_zero() {
        return Err(Error::PureNullLeastFavorable);
    }
    let lambda_qc = sol.q_alpha.atom_part();
    let tau_pc = sol.p_alpha.atom_part();
    let d = radon_nikodym(&tau_pc, &lambda_qc)?;
    let gamma_c = sol.gamma_countable.clone();

    let kappa_formula = formula_threshold(&d, &lambda_qc, &gamma_c);
    let candidates: Vec<KappaCandidate> = candidate_thresholds(&d)
        .into_iter()
        .map(|kappa| {
            let certifies = violations(&classify(&d, &kappa), &sol.x_alpha).is_empty();
            KappaCandidate { kappa, certifies }
        })
        .collect();
    let formula_ok = kappa_formula
        .as_ref()
        .is_some_and(|k| violations(&classify(&d, k), &sol.x_alpha).is_empty());
    let kappa = if formula_ok {
        kappa_formula.clone()
    } else {
        candidates.iter().find(|c| c.certifies).map(|c| c.kappa.clone())
    };
    let shown = kappa.clone().or_else(|| kappa_formula.clone()).unwrap_or(Threshold::Infinite);
    let classification = classify(&d, &shown);
    let bad = violations(&classification, &sol.x_alpha);
    let gamma_consistent = expectation(&lambda_qc, &sol.x_alpha)? == gamma_c;
    Ok(RepresentationReport {
        form: RepresentationForm::Threshold,
        b_values: boundary_values(&classification, &sol.x_alpha),
        verdict: kappa.is_some(),
        violations: bad,
        precondition_holds: Some(precondition_on_grid(prob, &lambda_qc, &gamma_c)?),
        k: d.k.clone(),
        g: d.g,
        h: d.h,
        kappa,
        kappa_formula,
        candidates,
        classification,
        lambda: q_dec.lambda,
        tau: p_dec.lambda,
        gamma_countable: gamma_c,
        gamma_consistent,
    })
}

/// Second case: `x_alpha = 1` wherever the countable alternative part has
/// positive density with respect to `(reference + lambda Q^c) / 2`.
pub fn verify_degenerate_form(prob: &TestProblem, sol: &Solution, reference: &Charge) -> Result<RepresentationReport> {
    if sol.case != Case::LevelSlack {
        return Err(Error::WrongCase("degenerate form applies when the level is slack; use verify_threshold_form".into()));
    }
    let q_dec = yosida_hewitt(&sol.q_alpha)?;
    if q_dec.lambda.is_zero() {
        return Err(Error::PureLeastFavorable);
    }
    if !reference.is_probability() || !reference.is_countably_additive() {
        return Err(Error::TailMassPresent {
            what: "reference charge".into(),
            detail: "must be a countably additive probability".into(),
        });
    }
    if reference.space() != prob.space() {
        return Err(Error::SpaceMismatch);
    }
    let lambda_qc = sol.q_alpha.atom_part();
    let d = radon_nikodym(reference, &lambda_qc)?;
    let kappa = Threshold::Finite(rational::zero());
    let classification: Vec<AtomClass> = d
        .h
        .iter()
        .map(|h| match h {
            None => AtomClass::KNull,
            Some(h) if h.is_positive() => AtomClass::StrictAccept,
            Some(_) => AtomClass::Boundary,
        })
        .collect();
    let bad = violations(&classification, &sol.x_alpha);
    let gamma_consistent = expectation(&lambda_qc, &sol.x_alpha)? == q_dec.lambda;
    Ok(RepresentationReport {
        form: RepresentationForm::Degenerate,
        b_values: boundary_values(&classification, &sol.x_alpha),
        verdict: bad.is_empty(),
        violations: bad,
        precondition_holds: None,
        k: d.k.clone(),
        g: d.g,
        h: d.h,
        kappa_formula: Some(kappa.clone()),
        candidates: vec![KappaCandidate { kappa: kappa.clone(), certifies: true }],
        kappa: Some(kappa),
        classification,
        lambda: q_dec.lambda.clone(),
        tau: rational::one(),
        gamma_countable: sol.gamma_countable.clone(),
        gamma_consistent,
    })
}

/// Runs the degenerate-form check against the uniform reference and
/// `extra` seeded random full-support references.
pub fn verify_degenerate_form_sampled(
    prob: &TestProblem,
    sol: &Solution,
    extra: usize,
    seed: u64,
) -> Result<Vec<RepresentationReport>> {
    let space = prob.space();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut refs = vec![Charge::uniform(space)];
    for _ in 0..extra {
        let raw: Vec<i64> = (0..space.len()).map(|_| rng.gen_range(1..=16)).collect();
        let total: i64 = raw.iter().sum();
        let masses = raw.iter().map(|&r| rational::ratio(r, total)).collect();
        refs.push(Charge::new(space, masses, rational::zero())?);
    }
    refs.iter().map(|r| verify_degenerate_form(prob, sol, r)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::charge::SampleSpace;
    use crate::minimax::solve_minimax;
    use crate::rational::{int, ratio};

    #[test]
    fn three_atom_threshold() {
        let s = SampleSpace::new(["w1", "w2", "w3"], false).unwrap();
        let p = Charge::new(&s, vec![ratio(1, 4), ratio(1, 4), ratio(1, 2)], int(0)).unwrap();
        let q1 = Charge::new(&s, vec![ratio(1, 2), ratio(1, 2), int(0)], int(0)).unwrap();
        let q2 = Charge::dirac(&s, "w1").unwrap();
        let prob = TestProblem::from_charges(vec![p], vec![q1, q2], ratio(1, 2)).unwrap();
        let sol = solve_minimax(&prob).unwrap();
        let rep = verify_threshold_form(&prob, &sol).unwrap();
        assert!(rep.verdict);
        assert!(rep.gamma_consistent);
        assert_eq!(rep.precondition_holds, Some(true));
        assert!(verify_degenerate_form(&prob, &sol, &Charge::uniform(&s)).is_err());
    }

    #[test]
    fn identical_hypotheses_are_all_boundary() {
        let s = SampleSpace::new(["a", "b"], false).unwrap();
        let c = Charge::new(&s, vec![ratio(1, 3), ratio(2, 3)], int(0)).unwrap();
        let prob = TestProblem::from_charges(vec![c.clone()], vec![c], ratio(1, 2)).unwrap();
        let sol = solve_minimax(&prob).unwrap();
        let rep = verify_threshold_form(&prob, &sol).unwrap();
        assert!(rep.verdict);
        assert_eq!(rep.kappa, Some(Threshold::Finite(int(1))));
        assert!(rep.classification.iter().all(|c| *c == AtomClass::Boundary));
    }

    #[test]
    fn dirac_degenerate_form() {
        let s = SampleSpace::new(["0", "1"], false).unwrap();
        let prob = TestProblem::from_charges(
            vec![Charge::dirac(&s, "0").unwrap()],
            vec![Charge::dirac(&s, "1").unwrap()],
            ratio(1, 3),
        )
        .unwrap();
        let sol = solve_minimax(&prob).unwrap();
        let reps = verify_degenerate_form_sampled(&prob, &sol, 3, 7).unwrap();
        assert_eq!(reps.len(), 4);
        assert!(reps.iter().all(|r| r.verdict && r.gamma_consistent));
        assert_eq!(reps[0].classification, vec![AtomClass::Boundary, AtomClass::StrictAccept]);
        assert!(matches!(verify_threshold_form(&prob, &sol), Err(Error::WrongCase(_))));
    }
}
