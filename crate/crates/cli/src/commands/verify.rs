use glinf::affineweyl::{verify_lemch2, weights_of, ClassicalWeight};
use glinf::battery::bosonic_battery;
use glinf::emodule::catalog::{run_suites, SpaceDesc, Suite, SuiteOptions, SEED_SETS};
use glinf::emodule::checks::{Report, Window};
use glinf::par;
use glinf::partitions::TupleConstraint;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use serde_json::{json, Value};

use super::{CALIBRATION_MAX_PSUM, FROZEN_CONVENTION};
use crate::config::Params;
use crate::error::{CliError, CliResult};
use crate::output::{require_json, Artifact};

const DEFAULT_DEGREE: usize = 4;
const DEFAULT_WINDOW: i64 = 4;
const DEFAULT_INSTANCES: usize = 20;
const DEFAULT_RNG_SEED: u64 = 1;

/// Selected suites: the space-level ones plus the finitized-sum identities.
pub struct Selection {
    pub space: Vec<Suite>,
    pub lemch2: bool,
}

pub fn parse_suites(s: Option<&str>) -> CliResult<Selection> {
    let mut sel = Selection { space: Vec::new(), lemch2: false };
    for key in s.unwrap_or("all").split(',').map(str::trim) {
        match key {
            "all" => {
                sel.space = Suite::ALL.to_vec();
                sel.lemch2 = true;
            }
            "lemch2" => sel.lemch2 = true,
            other => {
                let suite = Suite::from_key(other).map_err(|_| {
                    CliError::Config(format!(
                        "unknown suite {other:?}; expected relations, tame, closure, highest_weight, level, lemch2 or all"
                    ))
                })?;
                if !sel.space.contains(&suite) {
                    sel.space.push(suite);
                }
            }
        }
    }
    Ok(sel)
}

pub fn space_desc(p: &Params) -> CliResult<SpaceDesc> {
    let kind = p.space.as_deref().unwrap_or("fock");
    let heads = || -> CliResult<(Vec<i64>, Vec<i64>)> {
        let c = p.constraint()?;
        if c.is_cyclic() {
            return Err(CliError::Config(format!("space {kind} takes n-1 entries in a and b")));
        }
        Ok((c.a().to_vec(), c.b().to_vec()))
    };
    Ok(match kind {
        "vector" => SpaceDesc::Vector { slots: p.n.unwrap_or(1) },
        "fock" => SpaceDesc::Fock { slots: p.n.unwrap_or(1) },
        "shifted" => {
            let (a, b) = heads()?;
            SpaceDesc::Shifted { a, b }
        }
        "mab" => {
            let (a, b) = heads()?;
            SpaceDesc::Mab { a, b }
        }
        "mpp" => {
            let c = p.constraint()?;
            if !c.is_cyclic() {
                return Err(CliError::Config("space mpp needs a cyclic constraint".into()));
            }
            SpaceDesc::Mpp { a: c.a().to_vec(), b: c.b().to_vec() }
        }
        "w" => SpaceDesc::W { k: p.k()?, r: p.r()?, a: p.a()?.to_vec() },
        "g" => SpaceDesc::G { k: p.k()?, r: p.r()?, a: p.a()?.to_vec() },
        other => {
            return Err(CliError::Config(format!(
                "unknown space {other:?}; expected vector, fock, shifted, mab, mpp, w or g"
            )))
        }
    })
}

pub fn window(p: &Params, degree: usize) -> Window {
    Window::new(degree, p.window.unwrap_or(DEFAULT_WINDOW)).with_literal(Some(p.literal.unwrap_or(degree)))
}

/// Runs `suites` on `desc` at every seed set, in parallel, reports in seed order.
pub fn run_space(desc: &SpaceDesc, seeds: &[Vec<u64>], suites: &[Suite], w: Window) -> CliResult<Vec<Report>> {
    let opts = SuiteOptions { window: w };
    par::map(seeds, |s| run_suites(desc, s, suites, opts)).into_iter().map(|r| r.map_err(CliError::from)).collect()
}

/// Random `(η, ξ, N)` instances plus the normalization instance and one
/// vanishing instance per finite simple root.
fn lemch2_cases(c: &TupleConstraint, instances: usize, rng: &mut StdRng) -> Vec<(Vec<i64>, Vec<i64>, Vec<i64>)> {
    let n = c.n();
    let mut cases: Vec<_> = (0..instances)
        .map(|_| {
            let eta = (0..n - 1).map(|_| rng.random_range(-2..=3)).collect();
            let xi = (0..n - 1).map(|_| rng.random_range(-1..=3)).collect();
            let big_n = (0..n).map(|_| rng.random_range(0..=3)).collect();
            (eta, xi, big_n)
        })
        .collect();
    let (eta0, xi0) = weights_of(c);
    let ints = |w: &ClassicalWeight| w.omega.iter().map(|x| x.to_integer()).collect::<Vec<i64>>();
    cases.push((ints(&eta0), ints(&xi0), vec![0; n]));
    for i in 1..n {
        let mut eta = ints(&eta0);
        eta[i - 1] = -1;
        let xi = ints(&xi0);
        let mut big_n = vec![1; n];
        big_n[i] = big_n[i - 1] + xi[i - 1] + 1;
        cases.push((eta, xi, big_n));
    }
    cases
}

pub fn lemch2_suite(p: &Params) -> CliResult<Value> {
    let points: Vec<TupleConstraint> = if p.a.is_some() {
        let c = p.constraint()?;
        if !c.is_cyclic() {
            return Err(CliError::Config("lemch2 needs a cyclic constraint".into()));
        }
        vec![c]
    } else {
        bosonic_battery(CALIBRATION_MAX_PSUM).into_iter().map(|pt| pt.constraint).collect()
    };
    let conv = p.convention()?.unwrap_or(FROZEN_CONVENTION);
    let mut rng = StdRng::seed_from_u64(p.rng_seed.unwrap_or(DEFAULT_RNG_SEED));
    let instances = p.instances.unwrap_or(DEFAULT_INSTANCES);
    let (mut runs, mut vanishing, mut normalizations) = (0usize, 0usize, 0usize);
    let mut failures = Vec::new();
    for c in &points {
        let (pp, pr) = (c.p_prime().expect("cyclic"), c.p().expect("cyclic"));
        for (eta, xi, big_n) in lemch2_cases(c, instances, &mut rng) {
            let rep =
                verify_lemch2(pp, pr, &ClassicalWeight::from_ints(&eta), &ClassicalWeight::from_ints(&xi), &big_n, conv)?;
            runs += 1;
            vanishing += rep.vanishing.len();
            normalizations += rep.normalization.is_some() as usize;
            if !rep.passed() {
                failures.push(json!({
                    "p_prime": pp, "p": pr, "eta": eta, "xi": xi, "N": big_n, "witness": rep.witness,
                }));
            }
        }
    }
    Ok(json!({
        "name": "lemch2",
        "status": if failures.is_empty() { "pass" } else { "fail" },
        "convention": conv.key(),
        "points": points.len(),
        "instances": runs,
        "vanishing_cases": vanishing,
        "normalizations": normalizations,
        "failures": failures,
    }))
}

pub fn verify_cmd(p: &Params) -> CliResult<Artifact> {
    require_json(p, "verify")?;
    let sel = parse_suites(p.suite.as_deref())?;
    let degree = p.degree_or(DEFAULT_DEGREE);
    let w = window(p, degree);
    let seeds = p.seed_sets(&SEED_SETS)?;
    let desc = if sel.space.is_empty() { None } else { Some(space_desc(p)?) };
    let reports = match &desc {
        Some(d) => run_space(d, &seeds, &sel.space, w)?,
        None => Vec::new(),
    };
    let lemch2 = if sel.lemch2 { Some(lemch2_suite(p)?) } else { None };
    let passed = reports.iter().all(Report::passed) && lemch2.as_ref().is_none_or(|v| v["status"] == "pass");
    let json = json!({
        "space": desc,
        "suites": sel.space,
        "degree": degree,
        "window": w.modes,
        "literal_degree": w.literal,
        "seeds": seeds,
        "reports": reports,
        "lemch2": lemch2,
        "passed": passed,
    });
    Ok(Artifact { json, table: None, passed })
}
