//! Named executable checks over a grid of theories and spaces.

mod checks;
mod sample;

use std::collections::HashMap;
use std::fmt::Write as _;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::algebra::RingKind;
use crate::error::{Error, Result};
use crate::gysin::{Mutation, Theory};
use crate::spaces::Space;

use checks::{CheckFn, Outcome, Probe};

pub use checks::test_morphisms;
pub use sample::{sample_coh, sample_hom, DegreeWindow, Sampler};

/// Environment variable capping the worker threads of [`run_suite`].
pub const THREADS_ENV: &str = "ORIENT_DUALITY_THREADS";

const V1: &str = "V1-fgl-axioms";

const CHECKS: [(&str, CheckFn); 15] = [
    ("V2-orientation", checks::orientation),
    ("V3-pbt-bijectivity", checks::pbt_bijectivity),
    ("V4-normalizations", checks::normalizations),
    ("V5-cohomological-projection", checks::cohomological_projection),
    ("V6-first-projection-formula", checks::first_projection),
    ("V7-second-projection-formula", checks::second_projection),
    ("V8-transposition", checks::transposition),
    ("V9-diagonal-slant-fundamental", checks::diagonal_slant),
    ("V10-poincare-roundtrip", checks::poincare_roundtrip),
    ("V11-duality-transport", checks::duality_transport),
    ("V12-lemma-diag", checks::lemma_diag),
    ("V13-identity-decomposition", checks::identity_decomposition),
    ("V14-lemma-diamond", checks::lemma_diamond),
    ("V15-up-then-down", checks::up_then_down),
    ("V16-associativity", checks::associativity),
];

/// All check identifiers in execution order.
pub fn check_ids() -> Vec<&'static str> {
    std::iter::once(V1).chain(CHECKS.iter().map(|(id, _)| *id)).collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckConfig {
    pub theories: Vec<RingKind>,
    pub spaces: Vec<Space>,
    pub truncation: u32,
    pub seed: u64,
    pub samples: usize,
    /// Subset of check ids to run; empty means all.
    pub checks: Vec<String>,
    pub mutation: Option<Mutation>,
}

impl CheckConfig {
    pub fn new(theories: Vec<RingKind>, spaces: Vec<Space>, truncation: u32) -> CheckConfig {
        CheckConfig {
            theories,
            spaces,
            truncation,
            seed: 0,
            samples: 4,
            checks: Vec::new(),
            mutation: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.theories.is_empty() {
            return Err(Error::InvalidConfig("no theories selected".into()));
        }
        if self.spaces.is_empty() {
            return Err(Error::InvalidConfig("no spaces selected".into()));
        }
        if self.samples == 0 {
            return Err(Error::InvalidConfig("samples must be at least 1".into()));
        }
        let known = check_ids();
        if let Some(bad) = self.checks.iter().find(|c| !known.contains(&c.as_str())) {
            return Err(Error::InvalidConfig(format!("unknown check {bad}")));
        }
        let d_max = self.spaces.iter().map(Space::dim).max().unwrap_or(0);
        if self.truncation < d_max + 1 {
            return Err(Error::TruncationUnsound {
                needed: d_max + 1,
                available: self.truncation,
            });
        }
        Ok(())
    }

    fn selected(&self, id: &str) -> bool {
        self.checks.is_empty() || self.checks.iter().any(|c| c == id)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

/// The offending inputs and both sides of a failed identity.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub identity: String,
    pub inputs: Vec<String>,
    pub lhs: String,
    pub rhs: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckReport {
    pub check: String,
    pub theory: String,
    pub space: String,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub witness: Option<Witness>,
}

impl CheckReport {
    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }
}

fn report(check: &str, theory: RingKind, space: &Space, outcome: std::result::Result<(), Witness>) -> CheckReport {
    let (status, witness) = match outcome {
        Ok(()) => (Status::Pass, None),
        Err(w) => (Status::Fail, Some(w)),
    };
    CheckReport {
        check: check.to_string(),
        theory: theory.name().to_string(),
        space: space.to_string(),
        status,
        witness,
    }
}

fn settle(result: checks::CheckResult) -> Result<std::result::Result<(), Witness>> {
    match result {
        Ok(()) => Ok(Ok(())),
        Err(Outcome::Fail(w)) => Ok(Err(w)),
        Err(Outcome::Error(e)) => Err(e),
    }
}

fn thread_pool() -> Result<rayon::ThreadPool> {
    let threads = match std::env::var(THREADS_ENV) {
        Ok(v) if !v.trim().is_empty() => v
            .trim()
            .parse::<usize>()
            .map_err(|_| Error::InvalidConfig(format!("{THREADS_ENV}={v} is not a thread count")))?,
        _ => 0,
    };
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| Error::InvalidConfig(e.to_string()))
}

/// Run every selected check on every (theory, space) pair. Reports are
/// ordered by theory, then space, then check, independent of scheduling.
pub fn run_suite(cfg: &CheckConfig) -> Result<Vec<CheckReport>> {
    cfg.validate()?;
    let theories: Vec<(RingKind, Theory)> = cfg
        .theories
        .iter()
        .map(|&kind| {
            let base = Theory::new(kind, cfg.truncation)?;
            let theory = match cfg.mutation {
                Some(m) => base.with_mutation(m)?,
                None => base,
            };
            Ok((kind, theory))
        })
        .collect::<Result<_>>()?;
    thread_pool()?.install(|| {
        let axioms: HashMap<RingKind, std::result::Result<(), Witness>> = if cfg.selected(V1) {
            theories
                .par_iter()
                .map(|(kind, t)| Ok((*kind, settle(checks::fgl_axioms(t))?)))
                .collect::<Result<_>>()?
        } else {
            HashMap::new()
        };
        let tasks: Vec<(usize, &Space, &str, Option<CheckFn>)> = theories
            .iter()
            .enumerate()
            .flat_map(|(ti, _)| {
                cfg.spaces.iter().flat_map(move |space| {
                    std::iter::once((ti, space, V1, None))
                        .chain(CHECKS.iter().map(move |(id, f)| (ti, space, *id, Some(*f))))
                })
            })
            .filter(|(_, _, id, _)| cfg.selected(id))
            .collect();
        tasks
            .par_iter()
            .map(|&(ti, space, id, f)| {
                let (kind, theory) = &theories[ti];
                let outcome = match f {
                    None => axioms[kind].clone(),
                    Some(f) => {
                        let mut probe = Probe {
                            theory,
                            space,
                            samples: cfg.samples,
                            sampler: Sampler::for_task(cfg.seed, id, kind.name(), &space.to_string()),
                        };
                        settle(f(&mut probe))?
                    }
                };
                Ok(report(id, *kind, space, outcome))
            })
            .collect()
    })
}

pub fn all_passed(reports: &[CheckReport]) -> bool {
    reports.iter().all(CheckReport::passed)
}

pub fn reports_to_json(reports: &[CheckReport]) -> String {
    serde_json::to_string_pretty(reports).expect("reports serialize")
}

/// Fixed-width table with one row per report and witnesses under failures.
pub fn render_table(reports: &[CheckReport]) -> String {
    let w_check = reports.iter().map(|r| r.check.len()).chain([5]).max().unwrap_or(5);
    let w_theory = reports.iter().map(|r| r.theory.len()).chain([6]).max().unwrap_or(6);
    let w_space = reports.iter().map(|r| r.space.len()).chain([5]).max().unwrap_or(5);
    let mut out = String::new();
    let _ = writeln!(
        out,
        "{:w_check$}  {:w_theory$}  {:w_space$}  status",
        "check", "theory", "space"
    );
    for r in reports {
        let status = match r.status {
            Status::Pass => "pass",
            Status::Fail => "FAIL",
        };
        let _ = writeln!(
            out,
            "{:w_check$}  {:w_theory$}  {:w_space$}  {status}",
            r.check, r.theory, r.space
        );
        if let Some(w) = &r.witness {
            let _ = writeln!(out, "    identity: {}", w.identity);
            for input in &w.inputs {
                let _ = writeln!(out, "    {input}");
            }
            let _ = writeln!(out, "    lhs: {}", w.lhs);
            let _ = writeln!(out, "    rhs: {}", w.rhs);
        }
    }
    let failed = reports.iter().filter(|r| !r.passed()).count();
    let _ = writeln!(out, "{} passed, {failed} failed", reports.len() - failed);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_suite_passes() {
        let mut cfg = CheckConfig::new(vec![RingKind::Multiplicative], vec![Space::projective(1)], 4);
        cfg.samples = 2;
        let reports = run_suite(&cfg).unwrap();
        assert_eq!(reports.len(), 16);
        assert!(all_passed(&reports), "{}", render_table(&reports));
    }

    #[test]
    fn config_validation() {
        let cfg = CheckConfig::new(vec![RingKind::Additive], vec![Space::new(vec![2, 2])], 4);
        assert_eq!(
            run_suite(&cfg).unwrap_err(),
            Error::TruncationUnsound {
                needed: 5,
                available: 4
            }
        );
        let mut cfg = CheckConfig::new(vec![RingKind::Additive], vec![Space::projective(1)], 4);
        cfg.samples = 0;
        assert!(matches!(cfg.validate(), Err(Error::InvalidConfig(_))));
        cfg.samples = 1;
        cfg.checks = vec!["V99".into()];
        assert!(matches!(cfg.validate(), Err(Error::InvalidConfig(_))));
        let cfg = CheckConfig::new(vec![], vec![Space::projective(1)], 4);
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn json_round_trip() {
        let mut cfg = CheckConfig::new(vec![RingKind::Additive], vec![Space::point()], 2);
        cfg.checks = vec!["V9-diagonal-slant-fundamental".into()];
        let reports = run_suite(&cfg).unwrap();
        let json = reports_to_json(&reports);
        let back: Vec<CheckReport> = serde_json::from_str(&json).unwrap();
        assert_eq!(back, reports);
        assert!(!json.contains("witness"));
    }

    #[test]
    fn kernel_mutation_is_reported() {
        let mut cfg = CheckConfig::new(vec![RingKind::Multiplicative], vec![Space::projective(2)], 4);
        cfg.samples = 1;
        cfg.mutation = Some(Mutation::FlipKernelCoefficient { i: 1, j: 2 });
        cfg.checks = vec![
            "V8-transposition".into(),
            "V9-diagonal-slant-fundamental".into(),
            "V10-poincare-roundtrip".into(),
        ];
        let reports = run_suite(&cfg).unwrap();
        for r in &reports {
            assert_eq!(r.status, Status::Fail, "{}", r.check);
            assert!(r.witness.is_some());
        }
        assert!(render_table(&reports).contains("FAIL"));
    }
}
