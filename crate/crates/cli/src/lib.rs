//! Command dispatch for the `robustnp` binary.

pub mod report;

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use robustnp_core::hypotheses::{generator_by_name, hypothesis_report, truncation_sweep, DEFAULT_K_MAX, GENERATOR_NAMES};
use robustnp_core::minimax::{beta_criterion, verify_degenerate_form_sampled};
use robustnp_core::oracle::{np_oracle, vertex_enumerate};
use robustnp_core::{
    kkt_certificate, np_test, parse_rational, solve_minimax, verify_threshold_form, Case, Error as CoreError,
    ProblemSpec, Rational, Solution, TestProblem,
};
use thiserror::Error;

use report::*;

/// Seed for the random reference charges of the degenerate-form check.
pub const REFERENCE_SEED: u64 = 0x5eed;

#[derive(Debug, Parser)]
#[command(name = "robustnp", version, about = "Optimal randomized tests between two families of charges")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct Common {
    /// Also write the JSON report to this path.
    #[arg(long, value_name = "PATH")]
    pub json: Option<PathBuf>,
    /// Override the level from the specification ("n/d").
    #[arg(long, value_name = "RATIONAL")]
    pub alpha: Option<String>,
    /// Cross-check against brute-force enumeration; exit 4 on mismatch.
    #[arg(long)]
    pub oracle: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Solve, classify the case and verify the representation and certificate.
    Solve {
        spec: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Classical test between single null and alternative charges.
    Np {
        spec: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Optimal values of a named problem generator over truncation sizes.
    Sweep {
        generator: String,
        /// Comma-separated sizes.
        #[arg(long, value_delimiter = ',', default_values_t = vec![1usize, 2, 3])]
        sizes: Vec<usize>,
        #[command(flatten)]
        common: Common,
    },
    /// Regularity hypotheses and the optimality certificate only.
    Check {
        spec: PathBuf,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("input error: {0}")]
    Input(String),
    #[error("certificate error: {0}")]
    Certificate(String),
    #[error("oracle mismatch: {0}")]
    OracleMismatch(String, Box<Report>),
    #[error("solver error: {0}")]
    Internal(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) => 2,
            CliError::Certificate(_) => 3,
            CliError::OracleMismatch(..) => 4,
            CliError::Internal(_) => 1,
        }
    }
}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        match e {
            CoreError::CertificateInvalid { .. } => CliError::Certificate(e.to_string()),
            CoreError::Infeasible | CoreError::Unbounded | CoreError::NotOptimal(_) => CliError::Internal(e.to_string()),
            other => CliError::Input(other.to_string()),
        }
    }
}

fn load(path: &Path, alpha: &Option<String>) -> Result<(ProblemSpec, TestProblem), CliError> {
    let spec = ProblemSpec::load(path)?;
    let mut prob = spec.to_problem()?;
    if let Some(a) = alpha {
        prob = prob.with_alpha(parse_alpha(a)?)?;
    }
    Ok((spec, prob))
}

fn parse_alpha(text: &str) -> Result<Rational, CliError> {
    parse_rational(text).map_err(|e| CliError::Input(format!("--alpha: {e}")))
}

fn representation(prob: &TestProblem, sol: &Solution) -> Result<RepresentationSummary, CliError> {
    let space = prob.space();
    let result = match sol.case {
        Case::LevelAttained => verify_threshold_form(prob, sol).map(|r| vec![r]),
        Case::LevelSlack => verify_degenerate_form_sampled(prob, sol, 3, REFERENCE_SEED),
    };
    match result {
        Ok(reports) => Ok(RepresentationSummary::from_reports(space, &reports)),
        Err(CoreError::PureLeastFavorable) => {
            Ok(RepresentationSummary::skipped("least-favorable alternative is purely finitely additive"))
        }
        Err(CoreError::PureNullLeastFavorable) => {
            Ok(RepresentationSummary::skipped("least-favorable null is purely finitely additive"))
        }
        Err(e) => Err(e.into()),
    }
}

fn certificate(prob: &TestProblem, sol: &Solution) -> CertificateSummary {
    match kkt_certificate(prob, sol) {
        Ok(c) => CertificateSummary {
            valid: c.is_exact(),
            primal_objective: num(&c.primal_objective),
            dual_objective: num(&c.dual_objective),
            residuals_checked: c.residuals.len(),
            error: None,
        },
        Err(e) => CertificateSummary {
            valid: false,
            primal_objective: num(&sol.gamma_alpha),
            dual_objective: num(&sol.certificate.dual_objective),
            residuals_checked: 0,
            error: Some(e.to_string()),
        },
    }
}

fn oracle_summary(value: &Rational, result: &robustnp_core::OracleResult) -> OracleSummary {
    OracleSummary {
        value: num(&result.value),
        agrees: result.value == *value,
        optimal_vertices: result.argmax_tests.len(),
        enumeration_size: result.enumeration_size,
    }
}

fn oracle_gate(report: Report, oracle: &Option<OracleSummary>) -> Result<Report, CliError> {
    match oracle {
        Some(o) if !o.agrees => Err(CliError::OracleMismatch(format!("oracle value {}", o.value.exact), Box::new(report))),
        _ => Ok(report),
    }
}

pub fn solve_report(spec: &ProblemSpec, prob: &TestProblem, with_oracle: bool) -> Result<Report, CliError> {
    let sol = solve_minimax(prob)?;
    let cert = certificate(prob, &sol);
    if let Some(e) = &cert.error {
        return Err(CliError::Certificate(e.clone()));
    }
    let beta = if sol.lambda > Rational::from_integer(0.into()) {
        Some(BetaSummary::from(&beta_criterion(prob, &sol)?))
    } else {
        None
    };
    let hyp = hypothesis_report(prob, std::slice::from_ref(&sol.x_alpha), DEFAULT_K_MAX)?;
    let oracle = if with_oracle { Some(oracle_summary(&sol.gamma_alpha, &vertex_enumerate(prob)?)) } else { None };
    let report = Report::Solve(Box::new(SolveReport {
        command: "solve".into(),
        description: spec.description.clone(),
        alpha: num(prob.alpha()),
        value: num(&sol.gamma_alpha),
        test: test_values(prob.space(), &sol.x_alpha),
        attained_level: num(&sol.attained_level),
        case: sol.case.as_str().into(),
        countable_case: sol.countable_case.as_str().into(),
        min_level: num(&sol.min_level),
        q_weights: sol.q_weights.iter().map(num).collect(),
        p_weights: sol.p_weights.iter().map(num).collect(),
        lambda: num(&sol.lambda),
        gamma_countable: num(&sol.gamma_countable),
        beta,
        representation: representation(prob, &sol)?,
        hypotheses: (&hyp).into(),
        certificate: cert,
        oracle: oracle.clone(),
    }));
    oracle_gate(report, &oracle)
}

pub fn np_report(spec: &ProblemSpec, prob: &TestProblem, with_oracle: bool) -> Result<Report, CliError> {
    if prob.null().len() != 1 || prob.alternative().len() != 1 {
        return Err(CliError::Input(format!(
            "np needs exactly one charge per family, got {} null and {} alternative",
            prob.null().len(),
            prob.alternative().len()
        )));
    }
    let (p, q) = (&prob.null().family()[0], &prob.alternative().family()[0]);
    let r = np_test(p, q, prob.alpha())?;
    let oracle = if with_oracle { Some(oracle_summary(&r.power, &np_oracle(p, q, prob.alpha())?)) } else { None };
    let report = Report::Np(NpReport {
        command: "np".into(),
        description: spec.description.clone(),
        alpha: num(prob.alpha()),
        kappa: threshold_text(&r.kappa),
        b: num(&r.b),
        test: test_values(prob.space(), &r.test),
        attained_level: num(&r.attained_level),
        power: num(&r.power),
        level_slack: r.level_slack,
        oracle: oracle.clone(),
    });
    oracle_gate(report, &oracle)
}

pub fn sweep_report(name: &str, sizes: &[usize], alpha: &Rational) -> Result<Report, CliError> {
    let generator = generator_by_name(name).ok_or_else(|| {
        CliError::Input(format!("unknown generator {name:?}; available: {}", GENERATOR_NAMES.join(", ")))
    })?;
    if sizes.is_empty() {
        return Err(CliError::Input("no sizes given".into()));
    }
    let sweep = truncation_sweep(generator.as_ref(), sizes, alpha)?;
    Ok(Report::Sweep(SweepReport {
        command: "sweep".into(),
        generator: sweep.generator,
        alpha: num(&sweep.alpha),
        rows: sweep.rows.iter().map(|(size, v)| SweepRow { size: *size, value: num(v) }).collect(),
        non_monotone: sweep.non_monotone,
    }))
}

pub fn check_report(spec: &ProblemSpec, prob: &TestProblem) -> Result<Report, CliError> {
    let sol = solve_minimax(prob)?;
    let cert = certificate(prob, &sol);
    if let Some(e) = &cert.error {
        return Err(CliError::Certificate(e.clone()));
    }
    let hyp = hypothesis_report(prob, std::slice::from_ref(&sol.x_alpha), DEFAULT_K_MAX)?;
    Ok(Report::Check(CheckReport {
        command: "check".into(),
        description: spec.description.clone(),
        hypotheses: (&hyp).into(),
        certificate: cert,
    }))
}

/// Runs one command and returns its report together with the JSON target.
pub fn run(cli: &Cli) -> Result<(Report, Option<PathBuf>), CliError> {
    match &cli.command {
        Command::Solve { spec, common } => {
            let (s, p) = load(spec, &common.alpha)?;
            Ok((solve_report(&s, &p, common.oracle)?, common.json.clone()))
        }
        Command::Np { spec, common } => {
            let (s, p) = load(spec, &common.alpha)?;
            Ok((np_report(&s, &p, common.oracle)?, common.json.clone()))
        }
        Command::Sweep { generator, sizes, common } => {
            let alpha = match &common.alpha {
                Some(a) => parse_alpha(a)?,
                None => Rational::new(1.into(), 2.into()),
            };
            Ok((sweep_report(generator, sizes, &alpha)?, common.json.clone()))
        }
        Command::Check { spec, common } => {
            let (s, p) = load(spec, &common.alpha)?;
            Ok((check_report(&s, &p)?, common.json.clone()))
        }
    }
}

pub fn json_target(cli: &Cli) -> Option<&PathBuf> {
    match &cli.command {
        Command::Solve { common, .. }
        | Command::Np { common, .. }
        | Command::Sweep { common, .. }
        | Command::Check { common, .. } => common.json.as_ref(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_codes_follow_the_error_kind() {
        assert_eq!(CliError::from(CoreError::Usage("x".into())).exit_code(), 2);
        let cert = CoreError::CertificateInvalid { constraint: "power[0]".into(), residual: Rational::from_integer(1.into()) };
        assert_eq!(CliError::from(cert).exit_code(), 3);
        let report = sweep_report("nonexistence", &[1], &Rational::new(1.into(), 2.into())).unwrap();
        assert_eq!(CliError::OracleMismatch("x".into(), Box::new(report)).exit_code(), 4);
        assert_eq!(CliError::from(CoreError::Infeasible).exit_code(), 1);
    }

    #[test]
    fn sweep_defaults_parse() {
        let cli = Cli::try_parse_from(["robustnp", "sweep", "nonexistence"]).unwrap();
        match cli.command {
            Command::Sweep { sizes, common, .. } => {
                assert_eq!(sizes, [1, 2, 3]);
                assert!(common.alpha.is_none() && !common.oracle);
            }
            _ => unreachable!(),
        }
    }
}
