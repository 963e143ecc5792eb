//! Most powerful randomized test between two countably additive probability
//! charges.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{Signed, Zero};

use crate::charge::{expectation, radon_nikodym, Charge, TestFunction};
use crate::error::{Error, Result};
use crate::rational::{self, Rational};

/// Likelihood-ratio threshold. `Infinite` sits above every finite value.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Threshold {
    Finite(Rational),
    Infinite,
}

impl Threshold {
    /// Ratio `h / g` of an atom that is not K-null.
    pub fn ratio(g: &Rational, h: &Rational) -> Self {
        if g.is_zero() {
            Threshold::Infinite
        } else {
            Threshold::Finite(h / g)
        }
    }

    pub fn as_finite(&self) -> Option<&Rational> {
        match self {
            Threshold::Finite(v) => Some(v),
            Threshold::Infinite => None,
        }
    }
}

impl fmt::Display for Threshold {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Threshold::Finite(v) => write!(f, "{v}"),
            Threshold::Infinite => write!(f, "inf"),
        }
    }
}

/// Outcome of the classical lemma: `test = 1` where `h > kappa g`, `b` where
/// `h = kappa g`, `0` below, on every atom that is not K-null.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NpResult {
    pub kappa: Threshold,
    pub b: Rational,
    pub test: TestFunction,
    pub attained_level: Rational,
    pub power: Rational,
    /// The level is not exhausted: `q` is carried by a `p`-null set.
    pub level_slack: bool,
}

pub fn check_alpha(alpha: &Rational) -> Result<()> {
    if alpha.is_positive() && *alpha < rational::one() {
        Ok(())
    } else {
        Err(Error::AlphaOutOfRange(alpha.clone()))
    }
}

/// Builds the most powerful level-`alpha` test of `p` against `q`.
///
/// Atoms are accepted in decreasing order of `h/g` (atoms with `g = 0 < h`
/// first) until the `p`-mass `alpha` is used up; the class where the budget
/// runs out is randomized with one common constant `b`. When `q` lives on a
/// `p`-null set the test `1` on that set already has power one and level
/// zero, and is returned unrandomized.
pub fn np_test(p: &Charge, q: &Charge, alpha: &Rational) -> Result<NpResult> {
    check_alpha(alpha)?;
    for (name, c) in [("p", p), ("q", q)] {
        if !c.is_countably_additive() {
            return Err(Error::TailMassPresent {
                what: format!("np_test argument {name}"),
                detail: "the classical lemma needs countably additive charges".into(),
            });
        }
        let total = c.total_mass();
        if total != rational::one() {
            return Err(Error::NotProbability { what: format!("np_test argument {name}"), total });
        }
    }
    let densities = radon_nikodym(p, q)?;
    let space = p.space();

    let mut classes: BTreeMap<Threshold, Vec<usize>> = BTreeMap::new();
    for atom in 0..space.len() {
        if let (Some(g), Some(h)) = (&densities.g[atom], &densities.h[atom]) {
            classes.entry(Threshold::ratio(g, h)).or_default().push(atom);
        }
    }

    let mut values = vec![rational::zero(); space.len()];
    let q_support = q.support();
    let (kappa, b) = if p.measure(&q_support)?.is_zero() {
        for (atom, inside) in q_support.members().iter().enumerate() {
            if *inside {
                values[atom] = rational::one();
            }
        }
        (Threshold::Infinite, rational::one())
    } else {
        let mut remaining = alpha.clone();
        let mut boundary = None;
        for (ratio, atoms) in classes.iter().rev() {
            let mass: Rational = atoms.iter().map(|&a| &p.atom_mass()[a]).sum();
            if mass <= remaining {
                remaining -= &mass;
                for &a in atoms {
                    values[a] = rational::one();
                }
            } else {
                let b = &remaining / &mass;
                for &a in atoms {
                    values[a] = b.clone();
                }
                boundary = Some((ratio.clone(), b));
                break;
            }
        }
        // p has total mass one > alpha, so the budget always runs out inside a class.
        boundary.expect("level budget exhausted before the last ratio class")
    };

    let test = TestFunction::new(space, values, rational::zero())?;
    let attained_level = expectation(p, &test)?;
    let power = expectation(q, &test)?;
    let level_slack = attained_level < *alpha;
    Ok(NpResult { kappa, b, test, attained_level, power, level_slack })
}
