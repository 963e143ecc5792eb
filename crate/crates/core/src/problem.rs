use num_traits::Zero;

use crate::charge::{Charge, FamilyRole, Space, SublinearExpectation};
use crate::error::{Error, Result};
use crate::neyman_pearson::check_alpha;
use crate::rational::Rational;

/// Maximize the lower expectation of a test under the alternative family
/// while its upper expectation under the null family stays at most `alpha`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TestProblem {
    null: SublinearExpectation,
    alternative: SublinearExpectation,
    alpha: Rational,
}

impl TestProblem {
    pub fn new(null: SublinearExpectation, alternative: SublinearExpectation, alpha: Rational) -> Result<Self> {
        if null.role() != FamilyRole::Null || alternative.role() != FamilyRole::Alternative {
            return Err(Error::Usage("families passed with swapped roles".into()));
        }
        if null.space() != alternative.space() {
            return Err(Error::SpaceMismatch);
        }
        check_alpha(&alpha)?;
        Ok(Self { null, alternative, alpha })
    }

    pub fn from_charges(null: Vec<Charge>, alternative: Vec<Charge>, alpha: Rational) -> Result<Self> {
        Self::new(
            SublinearExpectation::new(FamilyRole::Null, null)?,
            SublinearExpectation::new(FamilyRole::Alternative, alternative)?,
            alpha,
        )
    }

    pub fn with_alpha(&self, alpha: Rational) -> Result<Self> {
        Self::new(self.null.clone(), self.alternative.clone(), alpha)
    }

    pub fn space(&self) -> &Space {
        self.null.space()
    }

    /// The null family (upper expectation bounds the level).
    pub fn null(&self) -> &SublinearExpectation {
        &self.null
    }

    /// The alternative family (lower expectation is the power).
    pub fn alternative(&self) -> &SublinearExpectation {
        &self.alternative
    }

    pub fn alpha(&self) -> &Rational {
        &self.alpha
    }

    /// True when no member of either family carries tail mass.
    pub fn is_countably_additive(&self) -> bool {
        self.null.family().iter().chain(self.alternative.family()).all(|c| c.tail_mass().is_zero())
    }
}
