use std::fmt;

use num_traits::{Signed, Zero};

use crate::charge::{expectation, TestFunction};
use crate::error::{Error, Result};
use crate::problem::TestProblem;
use crate::rational::{self, Rational};

use super::Solution;

/// Names one condition of the optimality system.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ConstraintRef {
    /// `gamma <= E_{Q_j}[X]` and its complementary slackness.
    Power(usize),
    /// `E_{P_i}[X] <= alpha` and its complementary slackness.
    Level(usize),
    /// `X_k <= 1`.
    Upper(usize),
    /// `X_k >= 0`.
    Lower(usize),
    /// Alternative weights sum to one (stationarity in the epigraph variable).
    WeightsSum,
    DualityGap,
}

impl fmt::Display for ConstraintRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConstraintRef::Power(j) => write!(f, "power[{j}]"),
            ConstraintRef::Level(i) => write!(f, "level[{i}]"),
            ConstraintRef::Upper(k) => write!(f, "upper[{k}]"),
            ConstraintRef::Lower(k) => write!(f, "lower[{k}]"),
            ConstraintRef::WeightsSum => write!(f, "weights_sum"),
            ConstraintRef::DualityGap => write!(f, "duality_gap"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Residual {
    pub constraint: ConstraintRef,
    pub value: Rational,
}

/// Lagrange multipliers of the epigraph LP. Every residual of a valid
/// certificate is exactly zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DualCertificate {
    pub q_constraint_duals: Vec<Rational>,
    pub level_duals: Vec<Rational>,
    pub upper_box_duals: Vec<Rational>,
    pub lower_box_duals: Vec<Rational>,
    pub primal_objective: Rational,
    pub dual_objective: Rational,
    pub residuals: Vec<Residual>,
}

impl DualCertificate {
    /// Splits a stacked dual vector (alternative weights, level duals,
    /// upper-bound duals) and derives the lower-bound duals from stationarity.
    pub(crate) fn from_duals(prob: &TestProblem, duals: &[Rational]) -> Self {
        let n = prob.space().variable_count();
        let nq = prob.alternative().len();
        let np = prob.null().len();
        let q_constraint_duals = duals[..nq].to_vec();
        let level_duals = duals[nq..nq + np].to_vec();
        let upper_box_duals = duals[nq + np..nq + np + n].to_vec();
        let q_vars: Vec<_> = prob.alternative().family().iter().map(|q| q.to_variables()).collect();
        let p_vars: Vec<_> = prob.null().family().iter().map(|p| p.to_variables()).collect();
        let lower_box_duals = (0..n)
            .map(|k| {
                let mut r = upper_box_duals[k].clone();
                for (l, p) in level_duals.iter().zip(&p_vars) {
                    r += l * &p[k];
                }
                for (w, q) in q_constraint_duals.iter().zip(&q_vars) {
                    r -= w * &q[k];
                }
                r
            })
            .collect();
        let dual_objective =
            level_duals.iter().sum::<Rational>() * prob.alpha() + upper_box_duals.iter().sum::<Rational>();
        Self {
            q_constraint_duals,
            level_duals,
            upper_box_duals,
            lower_box_duals,
            primal_objective: rational::zero(),
            dual_objective,
            residuals: Vec::new(),
        }
    }

    /// Checks primal and dual feasibility, complementary slackness and the
    /// duality gap against `(x, gamma)`. Fills `residuals` and fails on the
    /// first nonzero one.
    pub(crate) fn verify(&mut self, prob: &TestProblem, x: &TestFunction, gamma: &Rational) -> Result<()> {
        let fail = |c: ConstraintRef, r: Rational| Err(Error::CertificateInvalid { constraint: c.to_string(), residual: r });
        let xv = x.to_variables();
        self.primal_objective = gamma.clone();
        self.residuals.clear();

        let multipliers = self
            .q_constraint_duals
            .iter()
            .enumerate()
            .map(|(j, v)| (ConstraintRef::Power(j), v))
            .chain(self.level_duals.iter().enumerate().map(|(i, v)| (ConstraintRef::Level(i), v)))
            .chain(self.upper_box_duals.iter().enumerate().map(|(k, v)| (ConstraintRef::Upper(k), v)))
            .chain(self.lower_box_duals.iter().enumerate().map(|(k, v)| (ConstraintRef::Lower(k), v)));
        for (c, v) in multipliers {
            if v.is_negative() {
                return fail(c, v.clone());
            }
        }

        let mut residuals = Vec::new();
        for (j, (q, w)) in prob.alternative().family().iter().zip(&self.q_constraint_duals).enumerate() {
            let slack = expectation(q, x)? - gamma;
            if slack.is_negative() {
                return fail(ConstraintRef::Power(j), slack);
            }
            residuals.push(Residual { constraint: ConstraintRef::Power(j), value: w * slack });
        }
        for (i, (p, l)) in prob.null().family().iter().zip(&self.level_duals).enumerate() {
            let slack = prob.alpha() - expectation(p, x)?;
            if slack.is_negative() {
                return fail(ConstraintRef::Level(i), slack);
            }
            residuals.push(Residual { constraint: ConstraintRef::Level(i), value: l * slack });
        }
        for (k, v) in xv.iter().enumerate() {
            residuals.push(Residual {
                constraint: ConstraintRef::Upper(k),
                value: &self.upper_box_duals[k] * (rational::one() - v),
            });
            residuals.push(Residual { constraint: ConstraintRef::Lower(k), value: &self.lower_box_duals[k] * v });
        }
        residuals.push(Residual {
            constraint: ConstraintRef::WeightsSum,
            value: self.q_constraint_duals.iter().sum::<Rational>() - rational::one(),
        });
        residuals.push(Residual { constraint: ConstraintRef::DualityGap, value: &self.dual_objective - gamma });

        let bad = residuals.iter().find(|r| !r.value.is_zero()).cloned();
        self.residuals = residuals;
        match bad {
            Some(r) => fail(r.constraint, r.value),
            None => Ok(()),
        }
    }

    pub fn is_exact(&self) -> bool {
        !self.residuals.is_empty() && self.residuals.iter().all(|r| r.value.is_zero())
    }
}

/// Re-verifies the optimality system of a claimed solution from scratch.
pub fn kkt_certificate(prob: &TestProblem, sol: &Solution) -> Result<DualCertificate> {
    let mut stacked = sol.certificate.q_constraint_duals.clone();
    stacked.extend(sol.certificate.level_duals.iter().cloned());
    stacked.extend(sol.certificate.upper_box_duals.iter().cloned());
    let mut cert = DualCertificate::from_duals(prob, &stacked);
    cert.verify(prob, &sol.x_alpha, &sol.gamma_alpha)?;
    Ok(cert)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::charge::{lower_expectation, Charge, SampleSpace};
    use crate::minimax::solve_minimax;
    use crate::rational::{int, ratio};

    fn three_atom() -> TestProblem {
        let s = SampleSpace::new(["w1", "w2", "w3"], false).unwrap();
        let p = Charge::new(&s, vec![ratio(1, 4), ratio(1, 4), ratio(1, 2)], int(0)).unwrap();
        let q1 = Charge::new(&s, vec![ratio(1, 2), ratio(1, 2), int(0)], int(0)).unwrap();
        let q2 = Charge::dirac(&s, "w1").unwrap();
        TestProblem::from_charges(vec![p], vec![q1, q2], ratio(1, 2)).unwrap()
    }

    #[test]
    fn three_atom_certificate_is_exact() {
        let prob = three_atom();
        let sol = solve_minimax(&prob).unwrap();
        let cert = kkt_certificate(&prob, &sol).unwrap();
        assert!(cert.is_exact());
        assert_eq!(cert.dual_objective, int(1));
        assert_eq!(cert.primal_objective, int(1));
    }

    #[test]
    fn zero_test_is_rejected() {
        let prob = three_atom();
        let mut sol = solve_minimax(&prob).unwrap();
        sol.x_alpha = TestFunction::constant(prob.space(), int(0)).unwrap();
        sol.gamma_alpha = lower_expectation(prob.alternative(), &sol.x_alpha).unwrap().value;
        assert!(matches!(kkt_certificate(&prob, &sol), Err(Error::CertificateInvalid { .. })));
    }
}
