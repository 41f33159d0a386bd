//! Check reports shared by the symbolic derivations.

use std::fmt;

use serde::Serialize;

use crate::ncalg::{AbstractExpr, Budget};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    /// Informational: a known discrepancy that is recorded but does not fail the run.
    Reported,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Reported => "reported",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ResidualClass {
    pub e: usize,
    pub o: usize,
    pub terms: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub identity: String,
    pub status: Status,
    pub residual_classes: Vec<ResidualClass>,
}

impl Check {
    pub fn flag(identity: impl Into<String>, ok: bool) -> Check {
        Check {
            identity: identity.into(),
            status: if ok { Status::Pass } else { Status::Fail },
            residual_classes: Vec::new(),
        }
    }

    /// Passes when `residual` vanishes; otherwise lists its nonzero classes.
    pub fn vanishing(identity: impl Into<String>, residual: &AbstractExpr) -> Check {
        let residual_classes = residual_classes(residual);
        Check {
            identity: identity.into(),
            status: if residual_classes.is_empty() {
                Status::Pass
            } else {
                Status::Fail
            },
            residual_classes,
        }
    }

    pub fn equality(identity: impl Into<String>, lhs: &AbstractExpr, rhs: &AbstractExpr) -> Check {
        Check::vanishing(identity, &(lhs - rhs))
    }

    /// Downgrades a failure to `Reported`.
    pub fn report_only(mut self) -> Check {
        if self.status == Status::Fail {
            self.status = Status::Reported;
        }
        self
    }

    pub fn passed(&self) -> bool {
        self.status != Status::Fail
    }
}

pub fn residual_classes(x: &AbstractExpr) -> Vec<ResidualClass> {
    x.classify()
        .into_iter()
        .map(|((e, o), c)| ResidualClass {
            e,
            o,
            terms: c.terms().iter().map(|t| t.to_string()).collect(),
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckReport {
    pub command: String,
    pub budget: Option<Budget>,
    pub checks: Vec<Check>,
}

impl CheckReport {
    pub fn new(command: impl Into<String>, budget: Option<Budget>) -> CheckReport {
        CheckReport {
            command: command.into(),
            budget,
            checks: Vec::new(),
        }
    }

    pub fn push(&mut self, check: Check) {
        self.checks.push(check);
    }

    pub fn extend<I: IntoIterator<Item = Check>>(&mut self, checks: I) {
        self.checks.extend(checks);
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(Check::passed)
    }

    pub fn check(&self, identity: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.identity == identity)
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("{}", self.command);
        if let Some(b) = &self.budget {
            s.push_str(&format!(" at budget {b}"));
        }
        s.push('\n');
        for c in &self.checks {
            s.push_str(&format!("  [{:<8}] {}\n", c.status.to_string(), c.identity));
            for rc in &c.residual_classes {
                s.push_str(&format!("      ({}, {}): {}\n", rc.e, rc.o, rc.terms.join("  ")));
            }
        }
        s
    }
}
