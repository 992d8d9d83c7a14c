//! Space descriptors and suite dispatch shared by the front ends.

use std::fmt;

use serde::{Deserialize, Serialize};

use super::action::Module;
use super::checks::{
    check_closure, check_highest_weight, check_level, check_relations, check_tame, CheckReport, Report, Window,
};
use super::params::ParamSpec;
use super::spaces::{FatModule, FockTensor, Space, VectorTensor};
use crate::error::{invalid, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SpaceDesc {
    /// `V(u_1) ⊗ … ⊗ V(u_n)`, generic.
    Vector { slots: usize },
    /// `𝓕(u_1) ⊗ … ⊗ 𝓕(u_n)`, generic.
    Fock { slots: usize },
    /// Shifted tensor product with no constraint imposed.
    Shifted { a: Vec<i64>, b: Vec<i64> },
    /// `M_{a,b}`; `a`, `b` have `n − 1` entries.
    Mab { a: Vec<i64>, b: Vec<i64> },
    /// `M^{p',p}_{a,b}`; `a`, `b` have all `n` entries.
    Mpp { a: Vec<i64>, b: Vec<i64> },
    W { k: usize, r: i64, a: Vec<i64> },
    G { k: usize, r: i64, a: Vec<i64> },
}

impl fmt::Display for SpaceDesc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SpaceDesc::Vector { slots } => write!(f, "V^{slots}"),
            SpaceDesc::Fock { slots } => write!(f, "F^{slots}"),
            SpaceDesc::Shifted { a, b } => write!(f, "F_shifted(a={a:?},b={b:?})"),
            SpaceDesc::Mab { a, b } => write!(f, "M(a={a:?},b={b:?})"),
            SpaceDesc::Mpp { a, b } => write!(f, "Mpp(a={a:?},b={b:?})"),
            SpaceDesc::W { k, r, a } => write!(f, "W(k={k},r={r},a={a:?})"),
            SpaceDesc::G { k, r, a } => write!(f, "G(k={k},r={r},a={a:?})"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Suite {
    Relations,
    Tame,
    Closure,
    HighestWeight,
    Level,
}

impl Suite {
    pub const ALL: [Suite; 5] = [Suite::Relations, Suite::Tame, Suite::Closure, Suite::HighestWeight, Suite::Level];

    pub fn from_key(s: &str) -> Result<Self> {
        Ok(match s {
            "relations" => Suite::Relations,
            "tame" => Suite::Tame,
            "closure" => Suite::Closure,
            "highest_weight" | "highest" => Suite::HighestWeight,
            "level" => Suite::Level,
            other => return invalid(format!("unknown suite {other:?}")),
        })
    }
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct SuiteOptions {
    pub window: Window,
}

fn run_on<S: Space>(space: S, suites: &[Suite], opts: SuiteOptions) -> Report {
    let m = Module::new(space);
    let w = opts.window;
    let mut checks: Vec<CheckReport> = Vec::new();
    for s in suites {
        match s {
            Suite::Relations => checks.extend(check_relations(&m, w)),
            Suite::Tame => checks.push(check_tame(&m, w.degree)),
            Suite::Closure => checks.push(check_closure(&m, w.degree, w.modes)),
            Suite::HighestWeight => {
                // spaces without a highest vector skip this suite
                if m.space().highest().is_some() {
                    checks.push(check_highest_weight(&m, w.degree, w.modes));
                }
            }
            Suite::Level => checks.push(check_level(&m, w.degree)),
        }
    }
    Report::new(&m, checks)
}

/// Builds the space and runs the selected suites.
pub fn run_suites(desc: &SpaceDesc, seeds: &[u64], suites: &[Suite], opts: SuiteOptions) -> Result<Report> {
    Ok(match desc {
        SpaceDesc::Vector { slots } => run_on(VectorTensor::new(ParamSpec::generic(seeds, *slots)?), suites, opts),
        SpaceDesc::Fock { slots } => run_on(FockTensor::tensor(ParamSpec::generic(seeds, *slots)?), suites, opts),
        SpaceDesc::Shifted { a, b } => run_on(FockTensor::shifted_full(seeds, a, b)?, suites, opts),
        SpaceDesc::Mab { a, b } => run_on(FockTensor::mab(seeds, a, b)?, suites, opts),
        SpaceDesc::Mpp { a, b } => run_on(FockTensor::mpp(seeds, a, b)?, suites, opts),
        SpaceDesc::W { k, r, a } => run_on(FatModule::w(seeds, *k, *r, a)?, suites, opts),
        SpaceDesc::G { k, r, a } => run_on(FatModule::g(seeds, *k, *r, a)?, suites, opts),
    })
}

/// The verification battery: every space kind, small parameters.
pub fn battery() -> Vec<SpaceDesc> {
    use SpaceDesc::*;
    vec![
        Vector { slots: 1 },
        Vector { slots: 2 },
        Fock { slots: 1 },
        Fock { slots: 2 },
        Fock { slots: 3 },
        Mab { a: vec![1], b: vec![0] },
        Mab { a: vec![0], b: vec![2] },
        Mab { a: vec![0, 1], b: vec![1, 0] },
        Mpp { a: vec![1, 1], b: vec![0, 1] },
        Mpp { a: vec![0, 1], b: vec![2, 0] },
        Mpp { a: vec![1, 0, 1], b: vec![1, 0, 0] },
        W { k: 1, r: 2, a: vec![2] },
        W { k: 2, r: 3, a: vec![1, 2] },
        G { k: 1, r: 2, a: vec![2] },
        G { k: 2, r: 3, a: vec![1, 2] },
    ]
}

/// Two independent prime-seed sets.
pub const SEED_SETS: [[u64; 5]; 2] = [[2, 3, 5, 7, 11], [13, 17, 19, 23, 29]];

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn descriptor_json_round_trip() {
        for d in battery() {
            let js = serde_json::to_string(&d).unwrap();
            assert_eq!(serde_json::from_str::<SpaceDesc>(&js).unwrap(), d);
        }
    }

    #[test]
    fn small_battery_passes() {
        let opts = SuiteOptions { window: Window::new(2, 2) };
        for d in battery() {
            let r = run_suites(&d, &SEED_SETS[0], &Suite::ALL, opts).unwrap();
            assert!(r.passed(), "{d}: {:?}", r.witness);
        }
    }
}
