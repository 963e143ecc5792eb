//! JSON problem specifications.
//!
//! ```json
//! {
//!   "atoms": ["a", "b"],
//!   "has_tail": true,
//!   "p_family": [{"a": "1/2", "tail": "1/2"}],
//!   "q_family": [{"b": "1"}],
//!   "alpha": "1/4"
//! }
//! ```
//!
//! Atoms missing from a charge have mass zero. With `has_tail` the key
//! `tail` addresses the tail atom.

use std::collections::BTreeMap;
use std::path::Path;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::charge::{Charge, SampleSpace, Space, TAIL_LABEL};
use crate::error::{Error, Result};
use crate::problem::TestProblem;
use crate::rational::{self, format_rational, parse_rational, Rational};

pub type MassMap = BTreeMap<String, String>;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub description: Option<String>,
    pub atoms: Vec<String>,
    #[serde(default)]
    pub has_tail: bool,
    pub p_family: Vec<MassMap>,
    pub q_family: Vec<MassMap>,
    pub alpha: String,
}

fn parse_err(location: impl Into<String>, message: impl Into<String>) -> Error {
    Error::Parse { location: location.into(), message: message.into() }
}

impl ProblemSpec {
    pub fn from_json_str(text: &str) -> Result<Self> {
        serde_json::from_str(text)
            .map_err(|e| parse_err(format!("line {} column {}", e.line(), e.column()), e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| parse_err(path.display().to_string(), e.to_string()))?;
        Self::from_json_str(&text).map_err(|e| match e {
            Error::Parse { location, message } => {
                Error::Parse { location: format!("{}: {location}", path.display()), message }
            }
            other => other,
        })
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(self).expect("specs always serialize")
    }

    pub fn alpha(&self) -> Result<Rational> {
        parse_rational(&self.alpha).map_err(|e| parse_err("alpha", e.to_string()))
    }

    pub fn space(&self) -> Result<Space> {
        SampleSpace::new(self.atoms.iter().cloned(), self.has_tail).map_err(|e| parse_err("atoms", e.to_string()))
    }

    fn charge(&self, space: &Space, masses: &MassMap, location: &str) -> Result<Charge> {
        let mut atom_mass = vec![rational::zero(); space.len()];
        let mut tail_mass = rational::zero();
        for (label, text) in masses {
            let at = format!("{location}.{label}");
            let value = parse_rational(text).map_err(|e| parse_err(&at, e.to_string()))?;
            let slot = if space.has_tail() && label == TAIL_LABEL {
                &mut tail_mass
            } else {
                let i = space.index_of(label).ok_or_else(|| parse_err(&at, "unknown atom label"))?;
                &mut atom_mass[i]
            };
            *slot = value;
        }
        let charge = Charge::new(space, atom_mass, tail_mass).map_err(|e| parse_err(location, e.to_string()))?;
        let total = charge.total_mass();
        if total != rational::one() {
            return Err(parse_err(location, format!("masses sum to {}, expected 1", format_rational(&total))));
        }
        Ok(charge)
    }

    fn family(&self, space: &Space, name: &str, maps: &[MassMap]) -> Result<Vec<Charge>> {
        if maps.is_empty() {
            return Err(parse_err(name, "family is empty"));
        }
        maps.iter().enumerate().map(|(i, m)| self.charge(space, m, &format!("{name}[{i}]"))).collect()
    }

    pub fn to_problem(&self) -> Result<TestProblem> {
        let space = self.space()?;
        let null = self.family(&space, "p_family", &self.p_family)?;
        let alternative = self.family(&space, "q_family", &self.q_family)?;
        let alpha = self.alpha()?;
        TestProblem::from_charges(null, alternative, alpha).map_err(|e| parse_err("problem", e.to_string()))
    }

    /// Nonzero masses only.
    pub fn from_problem(prob: &TestProblem, description: Option<String>) -> Self {
        let space = prob.space();
        let encode = |c: &Charge| {
            let mut m: MassMap = space
                .atoms()
                .iter()
                .zip(c.atom_mass())
                .filter(|(_, v)| !v.is_zero())
                .map(|(l, v)| (l.clone(), format_rational(v)))
                .collect();
            if !c.tail_mass().is_zero() {
                m.insert(TAIL_LABEL.to_string(), format_rational(c.tail_mass()));
            }
            m
        };
        Self {
            description,
            atoms: space.atoms().to_vec(),
            has_tail: space.has_tail(),
            p_family: prob.null().family().iter().map(encode).collect(),
            q_family: prob.alternative().family().iter().map(encode).collect(),
            alpha: format_rational(prob.alpha()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;

    const THREE: &str = r#"{
        "atoms": ["w1", "w2", "w3"],
        "p_family": [{"w1": "1/4", "w2": "1/4", "w3": "1/2"}],
        "q_family": [{"w1": "1/2", "w2": "1/2"}, {"w1": "1"}],
        "alpha": "1/2"
    }"#;

    #[test]
    fn parses_and_round_trips() {
        let spec = ProblemSpec::from_json_str(THREE).unwrap();
        let prob = spec.to_problem().unwrap();
        assert_eq!(prob.alpha(), &ratio(1, 2));
        let back = ProblemSpec::from_problem(&prob, None);
        let again = ProblemSpec::from_json_str(&back.to_json_string()).unwrap().to_problem().unwrap();
        assert_eq!(prob, again);
    }

    #[test]
    fn mass_error_names_the_charge() {
        let bad = THREE.replace(r#"{"w1": "1"}"#, r#"{"w1": "9/10"}"#);
        match ProblemSpec::from_json_str(&bad).unwrap().to_problem() {
            Err(Error::Parse { location, message }) => {
                assert_eq!(location, "q_family[1]");
                assert!(message.contains("9/10"));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn rejects_unknown_labels_and_decimals() {
        let bad = THREE.replace(r#""w1": "1"}"#, r#""w9": "1"}"#);
        assert!(matches!(
            ProblemSpec::from_json_str(&bad).unwrap().to_problem(),
            Err(Error::Parse { location, .. }) if location == "q_family[1].w9"
        ));
        let bad = THREE.replace(r#""alpha": "1/2""#, r#""alpha": "0.5""#);
        assert!(ProblemSpec::from_json_str(&bad).unwrap().to_problem().is_err());
        assert!(matches!(ProblemSpec::from_json_str("{"), Err(Error::Parse { .. })));
    }

    #[test]
    fn tail_key() {
        let text = r#"{"atoms": ["a"], "has_tail": true, "p_family": [{"tail": "1"}],
                       "q_family": [{"a": "1/2", "tail": "1/2"}], "alpha": "1/3"}"#;
        let prob = ProblemSpec::from_json_str(text).unwrap().to_problem().unwrap();
        assert_eq!(prob.null().max_tail_mass(), ratio(1, 1));
        let no_tail = text.replace("true", "false");
        assert!(ProblemSpec::from_json_str(&no_tail).unwrap().to_problem().is_err());
    }
}
