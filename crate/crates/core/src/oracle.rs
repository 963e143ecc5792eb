//! Brute-force reference solvers for small instances.
//!
//! `vertex_enumerate` never calls the simplex code. It lists every point
//! where enough of the hyperplanes `X_k = 0`, `X_k = 1`, `E_P[X] = alpha`
//! and `E_{Q_i}[X] = E_{Q_j}[X]` meet, keeps the feasible ones and takes the
//! best. On each cell of the arrangement the power `min_Q E_Q[X]` is linear,
//! so some such point is optimal.

use std::collections::HashSet;

use num_traits::{One, Signed, Zero};

use crate::charge::{expectation, lower_expectation, Charge, Event, SublinearExpectation, TestFunction};
use crate::error::{Error, Result};
use crate::problem::TestProblem;
use crate::rational::{self, Rational};

pub const MAX_ATOMS_ENV: &str = "ROBUSTNP_MAX_ORACLE_ATOMS";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OracleLimits {
    /// Explicit atoms plus the tail.
    pub max_variables: usize,
    pub max_members: usize,
    /// Atom bound for exhaustive event enumeration.
    pub max_event_atoms: usize,
}

impl Default for OracleLimits {
    fn default() -> Self {
        Self { max_variables: 6, max_members: 4, max_event_atoms: 12 }
    }
}

impl OracleLimits {
    /// Defaults, with every bound raised to `ROBUSTNP_MAX_ORACLE_ATOMS` when set.
    pub fn from_env() -> Self {
        let mut limits = Self::default();
        if let Some(n) = std::env::var(MAX_ATOMS_ENV).ok().and_then(|v| v.trim().parse::<usize>().ok()) {
            limits.max_variables = n;
            limits.max_members = n;
            limits.max_event_atoms = limits.max_event_atoms.max(n);
        }
        limits
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleResult {
    pub value: Rational,
    /// Every vertex of the set of optimal tests.
    pub argmax_tests: Vec<TestFunction>,
    /// Distinct feasible points examined.
    pub enumeration_size: usize,
}

pub fn vertex_enumerate(prob: &TestProblem) -> Result<OracleResult> {
    vertex_enumerate_with(prob, &OracleLimits::from_env())
}

pub fn vertex_enumerate_with(prob: &TestProblem, limits: &OracleLimits) -> Result<OracleResult> {
    let space = prob.space();
    let n = space.variable_count();
    if n > limits.max_variables {
        return Err(Error::OracleBound(format!("{n} variables exceed the bound {}", limits.max_variables)));
    }
    for (name, fam) in [("null", prob.null()), ("alternative", prob.alternative())] {
        if fam.len() > limits.max_members {
            return Err(Error::OracleBound(format!(
                "{name} family has {} members, bound is {}",
                fam.len(),
                limits.max_members
            )));
        }
    }
    let p: Vec<Vec<Rational>> = prob.null().family().iter().map(|c| c.to_variables()).collect();
    let q: Vec<Vec<Rational>> = prob.alternative().family().iter().map(|c| c.to_variables()).collect();
    let alpha = prob.alpha();

    let mut planes: Vec<(Vec<Rational>, Rational)> = p.iter().map(|row| (row.clone(), alpha.clone())).collect();
    for i in 0..q.len() {
        for j in i + 1..q.len() {
            let diff: Vec<Rational> = q[i].iter().zip(&q[j]).map(|(a, b)| a - b).collect();
            if diff.iter().any(|d| !d.is_zero()) {
                planes.push((diff, rational::zero()));
            }
        }
    }
    let level_ok = |x: &[Rational]| p.iter().all(|row| dot(row, x) <= *alpha);
    let power = |x: &[Rational]| q.iter().map(|row| dot(row, x)).min().expect("non-empty family");

    let points = enumerate_points(n, &planes, level_ok);
    let value = points.iter().map(|x| power(x)).max().expect("the zero test is always feasible");

    // Vertices of the optimal face {feasible X : E_Q[X] >= value for all Q}.
    let mut face_planes: Vec<(Vec<Rational>, Rational)> = p.iter().map(|row| (row.clone(), alpha.clone())).collect();
    face_planes.extend(q.iter().map(|row| (row.clone(), value.clone())));
    let optimal = enumerate_points(n, &face_planes, |x| level_ok(x) && q.iter().all(|row| dot(row, x) >= value));
    let mut argmax_tests: Vec<TestFunction> =
        optimal.iter().map(|x| TestFunction::from_variables(space, x)).collect::<Result<_>>()?;
    argmax_tests.sort_by_key(|t| t.to_variables());

    Ok(OracleResult { value, argmax_tests, enumeration_size: points.len() })
}

fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// All points of `[0,1]^n` satisfying `feasible` at which `n` linearly
/// independent hyperplanes from the box faces and `planes` meet.
fn enumerate_points(
    n: usize,
    planes: &[(Vec<Rational>, Rational)],
    feasible: impl Fn(&[Rational]) -> bool,
) -> Vec<Vec<Rational>> {
    let mut seen: HashSet<Vec<Rational>> = HashSet::new();
    let mut out = Vec::new();
    for f in 0..=n.min(planes.len()) {
        for rows in combinations(planes.len(), f) {
            for free in combinations(n, f) {
                let fixed: Vec<usize> = (0..n).filter(|k| !free.contains(k)).collect();
                let matrix: Vec<Vec<Rational>> =
                    rows.iter().map(|&r| free.iter().map(|&k| planes[r].0[k].clone()).collect()).collect();
                let Some(inverse) = invert(matrix) else { continue };
                for mask in 0..(1usize << fixed.len()) {
                    let mut x = vec![rational::zero(); n];
                    for (bit, &k) in fixed.iter().enumerate() {
                        if mask >> bit & 1 == 1 {
                            x[k] = rational::one();
                        }
                    }
                    let rhs: Vec<Rational> = rows.iter().map(|&r| &planes[r].1 - dot(&planes[r].0, &x)).collect();
                    for (i, &k) in free.iter().enumerate() {
                        x[k] = dot(&inverse[i], &rhs);
                    }
                    if x.iter().all(|v| !v.is_negative() && *v <= rational::one()) && feasible(&x) && seen.insert(x.clone()) {
                        out.push(x);
                    }
                }
            }
        }
    }
    out
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::with_capacity(k), &mut out);
    out
}

/// Gauss-Jordan inverse; `None` when singular.
fn invert(mut a: Vec<Vec<Rational>>) -> Option<Vec<Vec<Rational>>> {
    let n = a.len();
    let mut inv: Vec<Vec<Rational>> =
        (0..n).map(|i| (0..n).map(|j| if i == j { rational::one() } else { rational::zero() }).collect()).collect();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, pivot);
        inv.swap(col, pivot);
        let scale = a[col][col].recip();
        for v in a[col].iter_mut().chain(inv[col].iter_mut()) {
            *v *= &scale;
        }
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let factor = a[r][col].clone();
                for c in 0..n {
                    let (da, di) = (&a[col][c] * &factor, &inv[col][c] * &factor);
                    a[r][c] -= da;
                    inv[r][c] -= di;
                }
            }
        }
    }
    debug_assert!(a.iter().enumerate().all(|(i, row)| row[i].is_one()));
    Some(inv)
}

/// Maximal power of a level-`alpha` test of `p` against `q`.
pub fn np_oracle(p: &Charge, q: &Charge, alpha: &Rational) -> Result<OracleResult> {
    let prob = TestProblem::from_charges(vec![p.clone()], vec![q.clone()], alpha.clone())?;
    vertex_enumerate(&prob)
}

/// `sup { lower_P(B) : q_countable(B) = 0 }` over every event, or 0 if that
/// supremum is 0.
pub fn beta_oracle(p_family: &SublinearExpectation, q_countable: &Charge) -> Result<Rational> {
    let limits = OracleLimits::from_env();
    let space = p_family.space();
    if space.len() > limits.max_event_atoms {
        return Err(Error::OracleBound(format!("{} atoms exceed the bound {}", space.len(), limits.max_event_atoms)));
    }
    let tail_options: &[bool] = if space.has_tail() { &[false, true] } else { &[false] };
    let mut best = rational::zero();
    for mask in 0..(1u64 << space.len()) {
        let members: Vec<bool> = (0..space.len()).map(|a| mask >> a & 1 == 1).collect();
        for &tail in tail_options {
            let event = Event::new(space, members.clone(), tail)?;
            if !q_countable.measure(&event)?.is_zero() {
                continue;
            }
            let lower = lower_expectation(p_family, &event.indicator())?.value;
            if lower > best {
                best = lower;
            }
        }
    }
    Ok(best)
}

/// Re-evaluates an oracle result; every listed test must reach `value`.
pub fn check_result(prob: &TestProblem, result: &OracleResult) -> Result<()> {
    for x in &result.argmax_tests {
        let power = lower_expectation(prob.alternative(), x)?.value;
        let level = prob.null().family().iter().map(|p| expectation(p, x)).collect::<Result<Vec<_>>>()?;
        if power != result.value || level.iter().any(|l| l > prob.alpha()) {
            return Err(Error::NotOptimal(format!("oracle vertex has power {power}, value {}", result.value)));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::charge::{FamilyRole, SampleSpace};
    use crate::rational::{int, ratio};

    #[test]
    fn three_atom_example() {
        let s = SampleSpace::new(["w1", "w2", "w3"], false).unwrap();
        let p = Charge::new(&s, vec![ratio(1, 4), ratio(1, 4), ratio(1, 2)], int(0)).unwrap();
        let q1 = Charge::new(&s, vec![ratio(1, 2), ratio(1, 2), int(0)], int(0)).unwrap();
        let q2 = Charge::dirac(&s, "w1").unwrap();
        let prob = TestProblem::from_charges(vec![p], vec![q1, q2], ratio(1, 2)).unwrap();
        let r = vertex_enumerate(&prob).unwrap();
        assert_eq!(r.value, int(1));
        let expected = TestFunction::new(&s, vec![int(1), int(1), int(0)], int(0)).unwrap();
        assert_eq!(r.argmax_tests, vec![expected]);
        check_result(&prob, &r).unwrap();
    }

    #[test]
    fn identical_singletons() {
        let s = SampleSpace::new(["a", "b", "c"], true).unwrap();
        let c = Charge::new(&s, vec![ratio(1, 4), ratio(1, 4), ratio(1, 4)], ratio(1, 4)).unwrap();
        let prob = TestProblem::from_charges(vec![c.clone()], vec![c], ratio(1, 4)).unwrap();
        assert_eq!(vertex_enumerate(&prob).unwrap().value, ratio(1, 4));
    }

    #[test]
    fn np_examples() {
        let s = SampleSpace::new(["0", "1"], false).unwrap();
        let r = np_oracle(&Charge::dirac(&s, "0").unwrap(), &Charge::dirac(&s, "1").unwrap(), &ratio(1, 3)).unwrap();
        assert_eq!(r.value, int(1));
        let s4 = SampleSpace::new(["1", "2", "3", "4"], false).unwrap();
        let q = Charge::new(&s4, vec![ratio(2, 5), ratio(3, 10), ratio(1, 5), ratio(1, 10)], int(0)).unwrap();
        assert_eq!(np_oracle(&Charge::uniform(&s4), &q, &ratio(1, 4)).unwrap().value, ratio(2, 5));
    }

    #[test]
    fn beta_examples() {
        let s = SampleSpace::new(["0", "1"], false).unwrap();
        let p = SublinearExpectation::new(FamilyRole::Null, vec![Charge::dirac(&s, "0").unwrap()]).unwrap();
        assert_eq!(beta_oracle(&p, &Charge::dirac(&s, "1").unwrap()).unwrap(), int(1));
        assert_eq!(beta_oracle(&p, &Charge::uniform(&s)).unwrap(), int(0));
    }

    #[test]
    fn size_bound() {
        let s = SampleSpace::new((0..7).map(|i| format!("a{i}")), false).unwrap();
        let c = Charge::uniform(&s);
        let prob = TestProblem::from_charges(vec![c.clone()], vec![c], ratio(1, 2)).unwrap();
        assert!(matches!(vertex_enumerate_with(&prob, &OracleLimits::default()), Err(Error::OracleBound(_))));
    }

    #[test]
    fn combinations_count() {
        assert_eq!(combinations(5, 2).len(), 10);
        assert_eq!(combinations(3, 0), vec![Vec::<usize>::new()]);
        assert!(combinations(2, 3).is_empty());
    }
}
