//! Exact solver for optimal randomized tests between two sublinear
//! expectations given by finite families of charges.
//!
//! Sample spaces are finite sets of atoms, optionally extended by one tail
//! atom that carries purely finitely additive mass. All arithmetic is over
//! exact rationals.

pub mod charge;
pub mod error;
pub mod hypotheses;
pub mod io;
pub mod lp;
pub mod minimax;
pub mod neyman_pearson;
pub mod oracle;
pub mod problem;
pub mod rational;

pub use charge::{
    expectation, is_pure, lower_expectation, mix, radon_nikodym, upper_expectation, yosida_hewitt, Charge,
    Decomposition, Densities, Event, Extremum, FamilyRole, Integrand, Payoff, SampleSpace, Space,
    SublinearExpectation, TestFunction,
};
pub use error::{Error, Result};
pub use hypotheses::{
    check_continuity_from_above, check_h1, check_h2_at, check_h3, hypothesis_report, truncation_sweep,
    HypothesisReport, NonexistenceGenerator, ProblemGenerator,
};
pub use io::ProblemSpec;
pub use minimax::{
    beta_criterion_check, compute_beta, detect_case, kkt_certificate, solve_minimax, verify_degenerate_form,
    verify_degenerate_form_sampled, verify_threshold_form, AtomClass, Case, CaseReport, DualCertificate,
    RepresentationReport, Solution,
};
pub use neyman_pearson::{np_test, NpResult, Threshold};
pub use oracle::{beta_oracle, np_oracle, vertex_enumerate, OracleLimits, OracleResult};
pub use problem::TestProblem;
pub use rational::{format_rational, parse_rational, Rational};
