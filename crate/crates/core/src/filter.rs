//! Layered necessary-condition test for a principal character.
//!
//! Stages, in order: common fixed point (`gamma = 0`), exceptional-set match,
//! dihedral recognition, Jorgensen's inequality, the equal-trace commutator
//! bound (only when `f` is not elliptic of order 2, 3, 4 or 6), and an orbit
//! search of the polynomial semigroup. Elementary matches come before the
//! inequalities since those inequalities only exclude non-elementary discrete
//! groups. `NotKleinian` therefore means "not a Kleinian group", not "not discrete".

use serde::{Deserialize, Serialize};

use crate::characters::{
    cao_ok, dihedral_check, jorgensen_ok, project, DihedralDiagnosis, PrincipalCharacter, CAO_BOUND,
    JORGENSEN_BOUND,
};
use crate::config::Config;
use crate::dynamics::{semigroup_search, Certificate, OrbitParams};
use crate::moebius::elliptic_order;
use crate::tables::{ExceptionalEntry, ExceptionalSet};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum NotKleinianReason {
    CommonFixedPoint,
    Jorgensen,
    EqualTraceBound,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Elementary {
    Table(ExceptionalEntry),
    Dihedral(DihedralDiagnosis),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "verdict", content = "detail")]
pub enum Verdict {
    NotKleinian(NotKleinianReason),
    ElementaryMatch(Elementary),
    LikelyNotDiscrete(Certificate),
    Inconclusive,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Outcome {
    /// Stage ran and produced the verdict.
    Triggered,
    Passed,
    Skipped,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Evidence {
    pub test: String,
    pub value: Option<f64>,
    pub threshold: Option<f64>,
    pub outcome: Outcome,
}

impl Evidence {
    fn new(test: &str, value: Option<f64>, threshold: Option<f64>, outcome: Outcome) -> Self {
        Evidence {
            test: test.to_string(),
            value,
            threshold,
            outcome,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FilterReport {
    #[serde(flatten)]
    pub verdict: Verdict,
    pub evidence: Vec<Evidence>,
}

pub fn discreteness_filter(ch: &PrincipalCharacter, config: &Config) -> FilterReport {
    discreteness_filter_with(ch, config, &ExceptionalSet::shared(config.p_max))
}

/// As [`discreteness_filter`] with a caller-supplied exceptional set.
pub fn discreteness_filter_with(ch: &PrincipalCharacter, config: &Config, set: &ExceptionalSet) -> FilterReport {
    use Outcome::*;
    let tol = config.tol;
    let mut evidence = Vec::with_capacity(6);
    let done = |evidence, verdict| FilterReport { verdict, evidence };

    let g_abs = ch.gamma.norm();
    if g_abs < tol {
        evidence.push(Evidence::new("common_fixed_point", Some(g_abs), Some(tol), Triggered));
        return done(evidence, Verdict::NotKleinian(NotKleinianReason::CommonFixedPoint));
    }
    evidence.push(Evidence::new("common_fixed_point", Some(g_abs), Some(tol), Passed));

    if let Some(entry) = set.find(ch, tol) {
        evidence.push(Evidence::new("exceptional_table", None, Some(tol), Triggered));
        return done(evidence, Verdict::ElementaryMatch(Elementary::Table(*entry)));
    }
    evidence.push(Evidence::new("exceptional_table", None, Some(tol), Passed));

    if let Some(diag) = dihedral_check(ch, tol, config.p_max) {
        evidence.push(Evidence::new("dihedral", None, Some(tol), Triggered));
        return done(evidence, Verdict::ElementaryMatch(Elementary::Dihedral(diag)));
    }
    evidence.push(Evidence::new("dihedral", None, Some(tol), Passed));

    let pt = project(ch);
    let j = jorgensen_ok(&pt);
    if !j.passed {
        evidence.push(Evidence::new("jorgensen", Some(j.value), Some(JORGENSEN_BOUND), Triggered));
        return done(evidence, Verdict::NotKleinian(NotKleinianReason::Jorgensen));
    }
    evidence.push(Evidence::new("jorgensen", Some(j.value), Some(JORGENSEN_BOUND), Passed));

    let low_order = matches!(elliptic_order(ch.beta, config.p_max, tol), Ok(Some((_, 2 | 3 | 4 | 6))));
    if low_order {
        evidence.push(Evidence::new("equal_trace_bound", None, Some(CAO_BOUND), Skipped));
    } else {
        let c = cao_ok(&pt);
        if !c.passed {
            evidence.push(Evidence::new("equal_trace_bound", Some(c.value), Some(CAO_BOUND), Triggered));
            return done(evidence, Verdict::NotKleinian(NotKleinianReason::EqualTraceBound));
        }
        evidence.push(Evidence::new("equal_trace_bound", Some(c.value), Some(CAO_BOUND), Passed));
    }

    if !config.use_dynamics {
        evidence.push(Evidence::new("orbit_certificate", None, None, Skipped));
        return done(evidence, Verdict::Inconclusive);
    }
    let params = OrbitParams::from_config(ch.beta, config);
    match semigroup_search(ch.beta, ch.gamma, config.search_depth, &params) {
        Some(cert) => {
            evidence.push(Evidence::new(
                "orbit_certificate",
                Some(cert.final_value.norm()),
                Some(config.zero_eps),
                Triggered,
            ));
            done(evidence, Verdict::LikelyNotDiscrete(cert))
        }
        None => {
            evidence.push(Evidence::new("orbit_certificate", None, Some(config.zero_eps), Passed));
            done(evidence, Verdict::Inconclusive)
        }
    }
}
