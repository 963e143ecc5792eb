//! Finite sample spaces with an optional tail atom, charges on them, test
//! functions, and sublinear expectations represented by finite families.
//!
//! A purely finitely additive component cannot live on finitely many atoms,
//! so it is carried by one distinguished tail atom. Indicators of finite sets
//! of explicit atoms take the value 0 on the tail; cofinite sets take 1. A
//! decreasing sequence of events shrinking to the empty set is represented by
//! its canonical form: the tail plus an explicit part that shrinks to nothing.
//! Along such a sequence the measure of every charge converges to its tail
//! mass.

use std::fmt;
use std::sync::Arc;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::{self, Rational};

/// Reserved name of the tail atom in labelled views.
pub const TAIL_LABEL: &str = "tail";

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SampleSpace {
    atoms: Vec<String>,
    has_tail: bool,
}

pub type Space = Arc<SampleSpace>;

impl SampleSpace {
    pub fn new<S: Into<String>>(atoms: impl IntoIterator<Item = S>, has_tail: bool) -> Result<Space> {
        let atoms: Vec<String> = atoms.into_iter().map(Into::into).collect();
        if atoms.is_empty() {
            return Err(Error::InvalidSpace("at least one explicit atom is required".into()));
        }
        for (i, label) in atoms.iter().enumerate() {
            if atoms[..i].contains(label) {
                return Err(Error::InvalidSpace(format!("duplicate atom label {label:?}")));
            }
            if has_tail && label == TAIL_LABEL {
                return Err(Error::InvalidSpace(format!(
                    "atom label {TAIL_LABEL:?} is reserved for the tail atom"
                )));
            }
        }
        Ok(Arc::new(Self { atoms, has_tail }))
    }

    pub fn atoms(&self) -> &[String] {
        &self.atoms
    }

    /// Number of explicit atoms.
    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn has_tail(&self) -> bool {
        self.has_tail
    }

    /// Decision variables of a test on this space: one per explicit atom plus
    /// one for the tail when present.
    pub fn variable_count(&self) -> usize {
        self.atoms.len() + usize::from(self.has_tail)
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.atoms.iter().position(|a| a == label)
    }
}

fn same_space(a: &Space, b: &Space) -> Result<()> {
    if Arc::ptr_eq(a, b) || a == b {
        Ok(())
    } else {
        Err(Error::SpaceMismatch)
    }
}

/// A set of explicit atoms, possibly together with the tail.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Event {
    space: Space,
    members: Vec<bool>,
    contains_tail: bool,
}

impl Event {
    pub fn new(space: &Space, members: Vec<bool>, contains_tail: bool) -> Result<Self> {
        if members.len() != space.len() {
            return Err(Error::Usage(format!(
                "event mask has {} entries for {} atoms",
                members.len(),
                space.len()
            )));
        }
        if contains_tail && !space.has_tail() {
            return Err(Error::Usage("event contains the tail but the space has none".into()));
        }
        Ok(Self { space: space.clone(), members, contains_tail })
    }

    pub fn from_labels(space: &Space, labels: &[&str], contains_tail: bool) -> Result<Self> {
        let mut members = vec![false; space.len()];
        for label in labels {
            let i = space
                .index_of(label)
                .ok_or_else(|| Error::Usage(format!("unknown atom {label:?}")))?;
            members[i] = true;
        }
        Self::new(space, members, contains_tail)
    }

    pub fn empty(space: &Space) -> Self {
        Self { space: space.clone(), members: vec![false; space.len()], contains_tail: false }
    }

    pub fn full(space: &Space) -> Self {
        Self { space: space.clone(), members: vec![true; space.len()], contains_tail: space.has_tail() }
    }

    /// Limit representative of the canonical decreasing-to-empty sequence:
    /// the tail with no explicit atoms.
    pub fn tail_only(space: &Space) -> Result<Self> {
        Self::new(space, vec![false; space.len()], true)
    }

    /// The `n`-th member of the canonical decreasing sequence: the tail plus
    /// explicit atoms with index `>= n`.
    pub fn canonical_sequence_member(space: &Space, n: usize) -> Result<Self> {
        let members = (0..space.len()).map(|i| i >= n).collect();
        Self::new(space, members, true)
    }

    pub fn space(&self) -> &Space {
        &self.space
    }

    pub fn members(&self) -> &[bool] {
        &self.members
    }

    pub fn contains_tail(&self) -> bool {
        self.contains_tail
    }

    pub fn complement(&self) -> Self {
        Self {
            space: self.space.clone(),
            members: self.members.iter().map(|m| !m).collect(),
            contains_tail: self.space.has_tail() && !self.contains_tail,
        }
    }

    pub fn indicator(&self) -> TestFunction {
        let b = |m: bool| if m { rational::one() } else { rational::zero() };
        TestFunction {
            space: self.space.clone(),
            atom_value: self.members.iter().map(|&m| b(m)).collect(),
            tail_value: b(self.contains_tail),
        }
    }
}

/// Anything that can be integrated against a charge.
pub trait Integrand {
    fn space(&self) -> &Space;
    fn atom_values(&self) -> &[Rational];
    fn tail_value(&self) -> &Rational;
}

/// A bounded real function on the space (signed values allowed).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Payoff {
    space: Space,
    atom_value: Vec<Rational>,
    tail_value: Rational,
}

impl Payoff {
    pub fn new(space: &Space, atom_value: Vec<Rational>, tail_value: Rational) -> Result<Self> {
        if atom_value.len() != space.len() {
            return Err(Error::Usage(format!(
                "function has {} values for {} atoms",
                atom_value.len(),
                space.len()
            )));
        }
        let tail_value = if space.has_tail() { tail_value } else { rational::zero() };
        Ok(Self { space: space.clone(), atom_value, tail_value })
    }

    pub fn constant(space: &Space, value: Rational) -> Self {
        Self {
            space: space.clone(),
            atom_value: vec![value.clone(); space.len()],
            tail_value: if space.has_tail() { value } else { rational::zero() },
        }
    }

    pub fn map(&self, f: impl Fn(&Rational) -> Rational) -> Self {
        Self {
            space: self.space.clone(),
            atom_value: self.atom_value.iter().map(&f).collect(),
            tail_value: if self.space.has_tail() { f(&self.tail_value) } else { rational::zero() },
        }
    }

    pub fn zip_with(&self, other: &impl Integrand, f: impl Fn(&Rational, &Rational) -> Rational) -> Result<Self> {
        same_space(&self.space, other.space())?;
        Ok(Self {
            space: self.space.clone(),
            atom_value: self.atom_value.iter().zip(other.atom_values()).map(|(a, b)| f(a, b)).collect(),
            tail_value: if self.space.has_tail() {
                f(&self.tail_value, other.tail_value())
            } else {
                rational::zero()
            },
        })
    }

    pub fn neg(&self) -> Self {
        self.map(|v| -v)
    }
}

impl Integrand for Payoff {
    fn space(&self) -> &Space {
        &self.space
    }
    fn atom_values(&self) -> &[Rational] {
        &self.atom_value
    }
    fn tail_value(&self) -> &Rational {
        &self.tail_value
    }
}

/// A randomized test: rejection probability per atom, in `[0, 1]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TestFunction {
    space: Space,
    atom_value: Vec<Rational>,
    tail_value: Rational,
}

impl TestFunction {
    pub fn new(space: &Space, atom_value: Vec<Rational>, tail_value: Rational) -> Result<Self> {
        if atom_value.len() != space.len() {
            return Err(Error::Usage(format!(
                "test has {} values for {} atoms",
                atom_value.len(),
                space.len()
            )));
        }
        for (label, v) in space.atoms().iter().zip(&atom_value) {
            if !rational::is_unit(v) {
                return Err(Error::OutOfUnitInterval { what: format!("test at atom {label:?}"), value: v.clone() });
            }
        }
        if !rational::is_unit(&tail_value) {
            return Err(Error::OutOfUnitInterval { what: "test at the tail".into(), value: tail_value });
        }
        let tail_value = if space.has_tail() { tail_value } else { rational::zero() };
        Ok(Self { space: space.clone(), atom_value, tail_value })
    }

    /// Builds a test from the decision-variable layout used by the LPs:
    /// explicit atoms first, then the tail when present.
    pub fn from_variables(space: &Space, vars: &[Rational]) -> Result<Self> {
        if vars.len() != space.variable_count() {
            return Err(Error::Usage(format!(
                "expected {} variables, got {}",
                space.variable_count(),
                vars.len()
            )));
        }
        let atoms = vars[..space.len()].to_vec();
        let tail = if space.has_tail() { vars[space.len()].clone() } else { rational::zero() };
        Self::new(space, atoms, tail)
    }

    pub fn to_variables(&self) -> Vec<Rational> {
        let mut v = self.atom_value.clone();
        if self.space.has_tail() {
            v.push(self.tail_value.clone());
        }
        v
    }

    pub fn constant(space: &Space, value: Rational) -> Result<Self> {
        Self::new(space, vec![value.clone(); space.len()], value)
    }

    /// The conjugate test `1 - x`.
    pub fn complement(&self) -> Self {
        Self {
            space: self.space.clone(),
            atom_value: self.atom_value.iter().map(|v| rational::one() - v).collect(),
            tail_value: if self.space.has_tail() { rational::one() - &self.tail_value } else { rational::zero() },
        }
    }

    /// `(x - shift)^+`, still a test.
    pub fn shave(&self, shift: &Rational) -> Self {
        let f = |v: &Rational| rational::positive_part(v - shift);
        Self {
            space: self.space.clone(),
            atom_value: self.atom_value.iter().map(f).collect(),
            tail_value: if self.space.has_tail() { f(&self.tail_value) } else { rational::zero() },
        }
    }

    pub fn as_payoff(&self) -> Payoff {
        Payoff { space: self.space.clone(), atom_value: self.atom_value.clone(), tail_value: self.tail_value.clone() }
    }

    pub fn value_at(&self, atom: usize) -> &Rational {
        &self.atom_value[atom]
    }

    /// `{x > 0}`.
    pub fn positive_event(&self) -> Event {
        Event {
            space: self.space.clone(),
            members: self.atom_value.iter().map(|v| v.is_positive()).collect(),
            contains_tail: self.tail_value.is_positive(),
        }
    }
}

impl Integrand for TestFunction {
    fn space(&self) -> &Space {
        &self.space
    }
    fn atom_values(&self) -> &[Rational] {
        &self.atom_value
    }
    fn tail_value(&self) -> &Rational {
        &self.tail_value
    }
}

/// A nonnegative finitely additive set function: exact weights on explicit
/// atoms plus the magnitude of the purely finitely additive part on the tail.
///
/// Sub-probability charges (for instance `lambda * Q^c`) are allowed; use
/// [`Charge::probability`] when total mass one is required.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Charge {
    space: Space,
    atom_mass: Vec<Rational>,
    tail_mass: Rational,
}

impl Charge {
    pub fn new(space: &Space, atom_mass: Vec<Rational>, tail_mass: Rational) -> Result<Self> {
        if atom_mass.len() != space.len() {
            return Err(Error::Usage(format!(
                "charge has {} masses for {} atoms",
                atom_mass.len(),
                space.len()
            )));
        }
        for (label, m) in space.atoms().iter().zip(&atom_mass) {
            if m.is_negative() {
                return Err(Error::NegativeMass { what: format!("atom {label:?}"), value: m.clone() });
            }
        }
        if tail_mass.is_negative() {
            return Err(Error::NegativeMass { what: "tail".into(), value: tail_mass });
        }
        if !space.has_tail() && !tail_mass.is_zero() {
            return Err(Error::TailMassPresent {
                what: "charge".into(),
                detail: "the space has no tail atom".into(),
            });
        }
        Ok(Self { space: space.clone(), atom_mass, tail_mass })
    }

    pub fn probability(space: &Space, atom_mass: Vec<Rational>, tail_mass: Rational) -> Result<Self> {
        let c = Self::new(space, atom_mass, tail_mass)?;
        let total = c.total_mass();
        if !total.is_one() {
            return Err(Error::NotProbability { what: "charge".into(), total });
        }
        Ok(c)
    }

    pub fn dirac(space: &Space, label: &str) -> Result<Self> {
        let i = space.index_of(label).ok_or_else(|| Error::Usage(format!("unknown atom {label:?}")))?;
        let mut mass = vec![rational::zero(); space.len()];
        mass[i] = rational::one();
        Self::new(space, mass, rational::zero())
    }

    /// Uniform probability on the explicit atoms.
    pub fn uniform(space: &Space) -> Self {
        let w = rational::ratio(1, space.len() as i64);
        Self { space: space.clone(), atom_mass: vec![w; space.len()], tail_mass: rational::zero() }
    }

    /// Unit mass at infinity: zero on every finite set of atoms.
    pub fn pure_tail(space: &Space) -> Result<Self> {
        Self::new(space, vec![rational::zero(); space.len()], rational::one())
    }

    pub fn space(&self) -> &Space {
        &self.space
    }

    pub fn atom_mass(&self) -> &[Rational] {
        &self.atom_mass
    }

    pub fn tail_mass(&self) -> &Rational {
        &self.tail_mass
    }

    /// Masses in decision-variable layout (atoms, then tail if present).
    pub fn to_variables(&self) -> Vec<Rational> {
        let mut v = self.atom_mass.clone();
        if self.space.has_tail() {
            v.push(self.tail_mass.clone());
        }
        v
    }

    pub fn total_mass(&self) -> Rational {
        self.atom_mass.iter().sum::<Rational>() + &self.tail_mass
    }

    pub fn is_probability(&self) -> bool {
        self.total_mass().is_one()
    }

    pub fn is_countably_additive(&self) -> bool {
        self.tail_mass.is_zero()
    }

    pub fn measure(&self, event: &Event) -> Result<Rational> {
        same_space(&self.space, event.space())?;
        let mut m: Rational = self
            .atom_mass
            .iter()
            .zip(event.members())
            .filter(|(_, &inside)| inside)
            .map(|(w, _)| w)
            .sum();
        if event.contains_tail() {
            m += &self.tail_mass;
        }
        Ok(m)
    }

    /// The countably additive part as an unnormalized charge (tail removed).
    pub fn atom_part(&self) -> Self {
        Self { space: self.space.clone(), atom_mass: self.atom_mass.clone(), tail_mass: rational::zero() }
    }

    pub fn scaled(&self, factor: &Rational) -> Result<Self> {
        if factor.is_negative() {
            return Err(Error::NegativeMass { what: "scale factor".into(), value: factor.clone() });
        }
        Ok(Self {
            space: self.space.clone(),
            atom_mass: self.atom_mass.iter().map(|m| m * factor).collect(),
            tail_mass: &self.tail_mass * factor,
        })
    }

    /// Event where the charge is positive.
    pub fn support(&self) -> Event {
        Event {
            space: self.space.clone(),
            members: self.atom_mass.iter().map(|m| m.is_positive()).collect(),
            contains_tail: self.tail_mass.is_positive(),
        }
    }
}

impl fmt::Display for Charge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, (label, m)) in self.space.atoms().iter().zip(&self.atom_mass).enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{label}: {m}")?;
        }
        if self.space.has_tail() {
            write!(f, ", {TAIL_LABEL}: {}", self.tail_mass)?;
        }
        write!(f, "}}")
    }
}

/// Which side of the testing problem a family represents.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FamilyRole {
    /// The null family whose upper expectation bounds the level.
    Null,
    /// The alternative family whose lower expectation is the power.
    Alternative,
}

/// A sublinear expectation stored through a finite representing family of
/// probability charges: `E[X] = max_P E_P[X]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SublinearExpectation {
    role: FamilyRole,
    family: Vec<Charge>,
}

impl SublinearExpectation {
    pub fn new(role: FamilyRole, family: Vec<Charge>) -> Result<Self> {
        let first = family.first().ok_or(Error::EmptyFamily)?;
        for (i, c) in family.iter().enumerate() {
            same_space(first.space(), c.space())?;
            let total = c.total_mass();
            if !total.is_one() {
                return Err(Error::NotProbability { what: format!("{role:?} family member {i}"), total });
            }
        }
        Ok(Self { role, family })
    }

    pub fn role(&self) -> FamilyRole {
        self.role
    }

    pub fn family(&self) -> &[Charge] {
        &self.family
    }

    pub fn space(&self) -> &Space {
        self.family[0].space()
    }

    pub fn len(&self) -> usize {
        self.family.len()
    }

    pub fn is_empty(&self) -> bool {
        self.family.is_empty()
    }

    /// Largest tail mass over the family: the limit of the upper expectation
    /// along the canonical decreasing-to-empty sequence.
    pub fn max_tail_mass(&self) -> Rational {
        self.family.iter().map(|c| c.tail_mass().clone()).max().unwrap_or_else(rational::zero)
    }
}

/// Value of an extremal expectation together with the family member attaining it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Extremum {
    pub value: Rational,
    pub index: usize,
}

pub fn expectation(c: &Charge, x: &impl Integrand) -> Result<Rational> {
    same_space(c.space(), x.space())?;
    let mut total: Rational = c.atom_mass().iter().zip(x.atom_values()).map(|(m, v)| m * v).sum();
    total += c.tail_mass() * x.tail_value();
    Ok(total)
}

/// `max` over the family; ties resolve to the lowest index.
pub fn upper_expectation(e: &SublinearExpectation, x: &impl Integrand) -> Result<Extremum> {
    extremum(e, x, |candidate, best| candidate > best)
}

/// `min` over the family; ties resolve to the lowest index.
pub fn lower_expectation(e: &SublinearExpectation, x: &impl Integrand) -> Result<Extremum> {
    extremum(e, x, |candidate, best| candidate < best)
}

fn extremum(
    e: &SublinearExpectation,
    x: &impl Integrand,
    better: impl Fn(&Rational, &Rational) -> bool,
) -> Result<Extremum> {
    let mut best: Option<Extremum> = None;
    for (index, c) in e.family().iter().enumerate() {
        let value = expectation(c, x)?;
        if best.as_ref().is_none_or(|b| better(&value, &b.value)) {
            best = Some(Extremum { value, index });
        }
    }
    best.ok_or(Error::EmptyFamily)
}

/// Unique split `c = lambda * countable + (1 - lambda) * pure`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Decomposition {
    pub lambda: Rational,
    /// Normalized atom part; absent when `lambda = 0`.
    pub countable: Option<Charge>,
    /// Unit tail charge; absent when `lambda = 1`.
    pub pure: Option<Charge>,
}

impl Decomposition {
    pub fn recompose(&self) -> Result<Charge> {
        match (&self.countable, &self.pure) {
            (Some(c), Some(p)) => mix(&[c.clone(), p.clone()], &[self.lambda.clone(), rational::one() - &self.lambda]),
            (Some(c), None) => Ok(c.clone()),
            (None, Some(p)) => Ok(p.clone()),
            (None, None) => Err(Error::Usage("decomposition has no components".into())),
        }
    }
}

pub fn yosida_hewitt(c: &Charge) -> Result<Decomposition> {
    let total = c.total_mass();
    if !total.is_one() {
        return Err(Error::NotProbability { what: "decomposed charge".into(), total });
    }
    let lambda = rational::one() - c.tail_mass();
    let countable = if lambda.is_positive() {
        Some(c.atom_part().scaled(&lambda.recip())?)
    } else {
        None
    };
    let pure = if lambda < rational::one() { Some(Charge::pure_tail(c.space())?) } else { None };
    Ok(Decomposition { lambda, countable, pure })
}

/// True iff all mass sits at infinity.
pub fn is_pure(c: &Charge) -> bool {
    c.tail_mass().is_one()
}

pub fn mix(charges: &[Charge], weights: &[Rational]) -> Result<Charge> {
    if charges.len() != weights.len() {
        return Err(Error::WeightCount { charges: charges.len(), weights: weights.len() });
    }
    let first = charges.first().ok_or(Error::EmptyFamily)?;
    if let Some(w) = weights.iter().find(|w| w.is_negative()) {
        return Err(Error::NegativeMass { what: "mixture weight".into(), value: w.clone() });
    }
    let sum: Rational = weights.iter().sum();
    if !sum.is_one() {
        return Err(Error::WeightSum(sum));
    }
    let space = first.space();
    let mut atom_mass = vec![rational::zero(); space.len()];
    let mut tail_mass = rational::zero();
    for (c, w) in charges.iter().zip(weights) {
        same_space(space, c.space())?;
        for (acc, m) in atom_mass.iter_mut().zip(c.atom_mass()) {
            *acc += m * w;
        }
        tail_mass += c.tail_mass() * w;
    }
    Charge::new(space, atom_mass, tail_mass)
}

/// Densities of two countably additive charges with respect to their average.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Densities {
    /// Reference measure `(p + q) / 2`.
    pub k: Charge,
    /// `dp/dk` per atom; `None` on K-null atoms.
    pub g: Vec<Option<Rational>>,
    /// `dq/dk` per atom; `None` on K-null atoms.
    pub h: Vec<Option<Rational>>,
}

impl Densities {
    pub fn is_k_null(&self, atom: usize) -> bool {
        self.g[atom].is_none()
    }
}

pub fn radon_nikodym(p: &Charge, q: &Charge) -> Result<Densities> {
    same_space(p.space(), q.space())?;
    for (name, c) in [("p", p), ("q", q)] {
        if !c.is_countably_additive() {
            return Err(Error::TailMassPresent {
                what: format!("density argument {name}"),
                detail: "split off the purely additive part with yosida_hewitt first".into(),
            });
        }
    }
    if p.total_mass().is_zero() && q.total_mass().is_zero() {
        return Err(Error::Usage("both charges are zero; no reference measure".into()));
    }
    let half = rational::ratio(1, 2);
    let k_mass: Vec<Rational> = p.atom_mass().iter().zip(q.atom_mass()).map(|(a, b)| (a + b) * &half).collect();
    let density = |m: &Rational, k: &Rational| (!k.is_zero()).then(|| m / k);
    let g = p.atom_mass().iter().zip(&k_mass).map(|(m, k)| density(m, k)).collect();
    let h = q.atom_mass().iter().zip(&k_mass).map(|(m, k)| density(m, k)).collect();
    let k = Charge::new(p.space(), k_mass, rational::zero())?;
    Ok(Densities { k, g, h })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    fn space(n: usize, tail: bool) -> Space {
        SampleSpace::new((0..n).map(|i| format!("w{}", i + 1)), tail).unwrap()
    }

    fn charge(s: &Space, masses: &[(i64, i64)], tail: (i64, i64)) -> Charge {
        Charge::new(s, masses.iter().map(|&(a, b)| ratio(a, b)).collect(), ratio(tail.0, tail.1)).unwrap()
    }

    fn test_fn(s: &Space, vals: &[(i64, i64)], tail: (i64, i64)) -> TestFunction {
        TestFunction::new(s, vals.iter().map(|&(a, b)| ratio(a, b)).collect(), ratio(tail.0, tail.1)).unwrap()
    }

    #[test]
    fn space_rejects_duplicates_and_reserved_tail_label() {
        assert!(SampleSpace::new(["a", "a"], false).is_err());
        assert!(SampleSpace::new(Vec::<String>::new(), false).is_err());
        assert!(SampleSpace::new(["a", "tail"], true).is_err());
        assert!(SampleSpace::new(["a", "tail"], false).is_ok());
    }

    #[test]
    fn expectation_examples() {
        let s = space(2, false);
        let c = Charge::uniform(&s);
        assert_eq!(expectation(&c, &test_fn(&s, &[(1, 1), (0, 1)], (0, 1))).unwrap(), ratio(1, 2));

        let t = space(3, true);
        let pure = Charge::pure_tail(&t).unwrap();
        let finite = Event::from_labels(&t, &["w1", "w3"], false).unwrap().indicator();
        assert_eq!(expectation(&pure, &finite).unwrap(), int(0));

        let s3 = space(3, false);
        let p = charge(&s3, &[(1, 4), (1, 4), (1, 2)], (0, 1));
        assert_eq!(expectation(&p, &test_fn(&s3, &[(1, 1), (1, 1), (0, 1)], (0, 1))).unwrap(), ratio(1, 2));
    }

    #[test]
    fn expectation_rejects_space_mismatch() {
        let a = space(2, false);
        let b = space(3, false);
        let x = TestFunction::constant(&b, int(1)).unwrap();
        assert_eq!(expectation(&Charge::uniform(&a), &x), Err(Error::SpaceMismatch));
    }

    #[test]
    fn upper_and_lower_on_diracs() {
        let s = SampleSpace::new(["a", "b"], false).unwrap();
        let e = SublinearExpectation::new(
            FamilyRole::Null,
            vec![Charge::dirac(&s, "a").unwrap(), Charge::dirac(&s, "b").unwrap()],
        )
        .unwrap();
        let x = test_fn(&s, &[(1, 1), (0, 1)], (0, 1));
        assert_eq!(upper_expectation(&e, &x).unwrap(), Extremum { value: int(1), index: 0 });
        assert_eq!(lower_expectation(&e, &x).unwrap(), Extremum { value: int(0), index: 1 });
    }

    #[test]
    fn three_atom_alternative_family() {
        let s = space(3, false);
        let q = SublinearExpectation::new(
            FamilyRole::Alternative,
            vec![charge(&s, &[(1, 2), (1, 2), (0, 1)], (0, 1)), charge(&s, &[(1, 1), (0, 1), (0, 1)], (0, 1))],
        )
        .unwrap();
        let x = test_fn(&s, &[(1, 1), (1, 1), (0, 1)], (0, 1));
        assert_eq!(upper_expectation(&q, &x).unwrap().value, int(1));
        assert_eq!(lower_expectation(&q, &x).unwrap().value, int(1));
    }

    #[test]
    fn family_validation() {
        let s = space(2, false);
        assert_eq!(SublinearExpectation::new(FamilyRole::Null, vec![]), Err(Error::EmptyFamily));
        let half = charge(&s, &[(1, 4), (1, 4)], (0, 1));
        assert!(matches!(
            SublinearExpectation::new(FamilyRole::Null, vec![half]),
            Err(Error::NotProbability { .. })
        ));
        let other = space(3, false);
        assert_eq!(
            SublinearExpectation::new(FamilyRole::Null, vec![Charge::uniform(&s), Charge::uniform(&other)]),
            Err(Error::SpaceMismatch)
        );
    }

    #[test]
    fn yosida_hewitt_examples() {
        let s = space(2, true);
        let atoms_only = charge(&s, &[(1, 2), (1, 2)], (0, 1));
        let d = yosida_hewitt(&atoms_only).unwrap();
        assert_eq!(d.lambda, int(1));
        assert_eq!(d.countable.as_ref(), Some(&atoms_only));
        assert!(d.pure.is_none());

        let pure = Charge::pure_tail(&s).unwrap();
        let d = yosida_hewitt(&pure).unwrap();
        assert_eq!(d.lambda, int(0));
        assert!(d.countable.is_none());
        assert_eq!(d.pure.as_ref(), Some(&pure));

        let mixed = charge(&s, &[(1, 4), (1, 4)], (1, 2));
        let d = yosida_hewitt(&mixed).unwrap();
        assert_eq!(d.lambda, ratio(1, 2));
        assert_eq!(d.countable, Some(charge(&s, &[(1, 2), (1, 2)], (0, 1))));
        assert_eq!(d.pure, Some(pure));
        assert_eq!(d.recompose().unwrap(), mixed);
    }

    #[test]
    fn purity() {
        let s = space(2, true);
        assert!(!is_pure(&Charge::uniform(&s)));
        assert!(is_pure(&Charge::pure_tail(&s).unwrap()));
        assert!(!is_pure(&charge(&s, &[(1, 4), (1, 4)], (1, 2))));
    }

    #[test]
    fn mixing() {
        let s = space(3, false);
        let q1 = charge(&s, &[(1, 2), (1, 2), (0, 1)], (0, 1));
        let q2 = charge(&s, &[(1, 1), (0, 1), (0, 1)], (0, 1));
        assert_eq!(mix(std::slice::from_ref(&q1), &[int(1)]).unwrap(), q1);
        assert_eq!(
            mix(&[q1.clone(), q2.clone()], &[ratio(1, 2), ratio(1, 2)]).unwrap(),
            charge(&s, &[(3, 4), (1, 4), (0, 1)], (0, 1))
        );
        assert_eq!(mix(&[q1, q2], &[ratio(1, 2), ratio(1, 4)]), Err(Error::WeightSum(ratio(3, 4))));

        let ab = SampleSpace::new(["a", "b"], false).unwrap();
        let u = mix(
            &[Charge::dirac(&ab, "a").unwrap(), Charge::dirac(&ab, "b").unwrap()],
            &[ratio(1, 2), ratio(1, 2)],
        )
        .unwrap();
        assert_eq!(u, Charge::uniform(&ab));
    }

    #[test]
    fn densities() {
        let s = space(3, false);
        let u = Charge::uniform(&s);
        let d = radon_nikodym(&u, &u).unwrap();
        assert!(d.g.iter().chain(&d.h).all(|v| v.as_ref() == Some(&int(1))));

        let p = charge(&s, &[(1, 4), (1, 4), (1, 2)], (0, 1));
        let q1 = charge(&s, &[(1, 2), (1, 2), (0, 1)], (0, 1));
        let d = radon_nikodym(&p, &q1).unwrap();
        assert_eq!(d.k, charge(&s, &[(3, 8), (3, 8), (1, 4)], (0, 1)));
        assert_eq!(d.g, vec![Some(ratio(2, 3)), Some(ratio(2, 3)), Some(int(2))]);
        assert_eq!(d.h, vec![Some(ratio(4, 3)), Some(ratio(4, 3)), Some(int(0))]);

        let ab = SampleSpace::new(["a", "b"], false).unwrap();
        let d = radon_nikodym(&Charge::dirac(&ab, "a").unwrap(), &Charge::dirac(&ab, "b").unwrap()).unwrap();
        assert_eq!(d.g, vec![Some(int(2)), Some(int(0))]);
        assert_eq!(d.h, vec![Some(int(0)), Some(int(2))]);
    }

    #[test]
    fn densities_flag_k_null_atoms_and_reject_tails() {
        let s = space(3, true);
        let p = charge(&s, &[(1, 1), (0, 1), (0, 1)], (0, 1));
        let q = charge(&s, &[(0, 1), (1, 1), (0, 1)], (0, 1));
        let d = radon_nikodym(&p, &q).unwrap();
        assert!(d.is_k_null(2));
        assert!(!d.is_k_null(0));
        let with_tail = charge(&s, &[(1, 2), (0, 1), (0, 1)], (1, 2));
        assert!(matches!(radon_nikodym(&with_tail, &q), Err(Error::TailMassPresent { .. })));
    }

    #[test]
    fn event_complement_and_canonical_sequence() {
        let s = space(3, true);
        let e = Event::from_labels(&s, &["w2"], false).unwrap();
        let c = e.complement();
        assert_eq!(c.members(), &[true, false, true]);
        assert!(c.contains_tail());
        let mixed = charge(&s, &[(1, 4), (1, 4), (1, 4)], (1, 4));
        let limit = Event::canonical_sequence_member(&s, 3).unwrap();
        assert_eq!(limit, Event::tail_only(&s).unwrap());
        assert_eq!(mixed.measure(&limit).unwrap(), ratio(1, 4));
        assert!(Event::tail_only(&space(2, false)).is_err());
    }

    #[test]
    fn test_function_validation() {
        let s = space(2, false);
        assert!(matches!(
            TestFunction::new(&s, vec![int(2), int(0)], int(0)),
            Err(Error::OutOfUnitInterval { .. })
        ));
        let x = test_fn(&s, &[(1, 3), (1, 1)], (0, 1));
        assert_eq!(x.complement().atom_values(), &[ratio(2, 3), int(0)]);
        assert_eq!(x.shave(&ratio(1, 2)).atom_values(), &[int(0), ratio(1, 2)]);
    }
}
