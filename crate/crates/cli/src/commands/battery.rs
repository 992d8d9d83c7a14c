//! The full battery: golden character tables, the calibration sweep, and
//! (unless skipped) every verification suite and isomorphism.

use std::path::{Path, PathBuf};

use clap::Args;
use glinf::affineweyl::calibrate;
use glinf::battery::{bosonic_battery, compositions, cyclic_battery};
use glinf::characters::{char_direct, char_kr, char_m_limit};
use glinf::emodule::catalog::{battery, Suite, SEED_SETS};
use glinf::emodule::checks::{Report, Window};
use glinf::par;
use glinf::partitions::{iota_domain, TupleConstraint};
use serde_json::{json, Value};

use super::{calibration_json, iso, verify, CALIBRATION_CUTOFF, CALIBRATION_MAX_PSUM};
use crate::config::{IntList, Params};
use crate::error::{CliError, CliResult};
use crate::output::{require_json, to_pretty, write_file, Artifact};

const CHAR_CUTOFF: usize = 10;
const KR_MAX_R: i64 = 4;
const MLIMIT_MAX_ENTRY: i64 = 2;
const DEFAULT_DEGREE: usize = 4;
const DEFAULT_LITERAL: usize = 3;

#[derive(Args, Clone, Debug)]
pub struct BatteryArgs {
    #[command(flatten)]
    pub params: Params,
    /// directory holding the golden files
    #[arg(long, default_value = "golden")]
    pub golden: PathBuf,
    /// rewrite the golden files instead of comparing against them
    #[arg(long)]
    pub update: bool,
    /// only the golden artifacts; no verification suites or isomorphisms
    #[arg(long)]
    pub skip_verify: bool,
}

fn constraint_entry(c: &TupleConstraint) -> Value {
    json!({ "n": c.n(), "a": c.a(), "b": c.b(), "p_prime": c.p_prime(), "p": c.p() })
}

/// Direct characters of the cyclic battery, `n = 2, 3`.
fn characters() -> Value {
    let cs: Vec<TupleConstraint> = [2, 3].into_iter().flat_map(|n| cyclic_battery(n, CALIBRATION_MAX_PSUM)).collect();
    let rows = par::map(&cs, |c| {
        let mut v = constraint_entry(c);
        v["series"] = json!(char_direct(c, CHAR_CUTOFF));
        v
    });
    json!({ "cutoff": CHAR_CUTOFF, "characters": rows })
}

/// `(k,r)`-admissible characters next to the direct character of the
/// interleaving's domain.
fn kr_table() -> CliResult<(Value, bool)> {
    let mut rows = Vec::new();
    let mut ok = true;
    for n in [2usize, 3] {
        for r in 1..=KR_MAX_R {
            for a in compositions(r, n) {
                let kr = char_kr(n, r, &a, CHAR_CUTOFF)?;
                let direct = char_direct(&iota_domain(n, r, &a)?, CHAR_CUTOFF);
                ok &= kr == direct;
                rows.push(json!({ "k": n, "r": r, "a": a, "series": kr, "agrees_with_direct": kr == direct }));
            }
        }
    }
    Ok((json!({ "cutoff": CHAR_CUTOFF, "characters": rows }), ok))
}

/// Open constraints: enumeration and the finite alternating sum.
fn mlimit_table() -> CliResult<(Value, bool)> {
    let mut rows = Vec::new();
    let mut ok = true;
    for n in [2usize, 3] {
        let entries: Vec<Vec<i64>> = (0..(MLIMIT_MAX_ENTRY + 1).pow(n as u32 - 1))
            .map(|mut x| {
                (0..n - 1)
                    .map(|_| {
                        let d = x % (MLIMIT_MAX_ENTRY + 1);
                        x /= MLIMIT_MAX_ENTRY + 1;
                        d
                    })
                    .collect()
            })
            .collect();
        for a in &entries {
            for b in &entries {
                let m = char_m_limit(a, b, CHAR_CUTOFF, super::FROZEN_CONVENTION)?;
                ok &= m.agreement;
                rows.push(json!({ "n": n, "a": a, "b": b, "series": m.direct, "agrees_with_formula": m.agreement }));
            }
        }
    }
    Ok((json!({ "cutoff": CHAR_CUTOFF, "characters": rows }), ok))
}

/// Compares (or with `update`, writes) one golden file.
fn golden(dir: &Path, name: &str, v: &Value, update: bool) -> CliResult<&'static str> {
    let path = dir.join(name);
    let text = to_pretty(v);
    if update {
        write_file(&path, &text)?;
        return Ok("written");
    }
    Ok(match std::fs::read_to_string(&path) {
        Ok(old) if old == text => "match",
        Ok(_) => "drift",
        Err(_) => "missing",
    })
}

fn verification(p: &Params) -> CliResult<(Vec<Value>, bool)> {
    let degree = p.degree_or(DEFAULT_DEGREE);
    let mut w: Window = verify::window(p, degree);
    w.literal = Some(p.literal.unwrap_or(DEFAULT_LITERAL.min(degree)));
    let seeds = p.seed_sets(&SEED_SETS)?;
    let mut items = Vec::new();
    let mut ok = true;
    for desc in battery() {
        let reports = verify::run_space(&desc, &seeds, &Suite::ALL, w)?;
        let passed = reports.iter().all(Report::passed);
        ok &= passed;
        let witness = reports.iter().find_map(|r| r.witness.clone());
        items.push(json!({ "item": desc.to_string(), "status": status(passed), "witness": witness }));
    }
    let lem = verify::lemch2_suite(&Params { a: None, ..p.clone() })?;
    ok &= lem["status"] == "pass";
    items.push(json!({ "item": "lemch2", "status": lem["status"], "instances": lem["instances"] }));

    let iso_runs: Vec<(&str, Params)> = vec![
        ("swap", Params { map: Some("swap".into()), ..p.clone() }),
        ("rotation a=[1,1] b=[0,1]", rotation_params(p, &[1, 1], &[0, 1])),
        ("rotation a=[1,0,1] b=[1,0,0]", rotation_params(p, &[1, 0, 1], &[1, 0, 0])),
        (
            "iota n=2 r=3 a=[2,1]",
            Params { map: Some("iota".into()), k: Some(2), r: Some(3), a: Some(IntList(vec![2, 1])), ..p.clone() },
        ),
    ];
    for (name, q) in iso_runs {
        let art = iso::iso_cmd(&Params { format: None, ..q })?;
        ok &= art.passed;
        items.push(json!({ "item": format!("iso {name}"), "status": status(art.passed) }));
    }
    Ok((items, ok))
}

fn rotation_params(p: &Params, a: &[i64], b: &[i64]) -> Params {
    Params {
        map: Some("rotation".into()),
        n: Some(a.len()),
        a: Some(IntList(a.to_vec())),
        b: Some(IntList(b.to_vec())),
        pprime: None,
        p: None,
        ..p.clone()
    }
}

fn status(ok: bool) -> &'static str {
    if ok {
        "pass"
    } else {
        "fail"
    }
}

pub fn battery_cmd(args: &BatteryArgs) -> CliResult<Artifact> {
    let p = &args.params;
    require_json(p, "battery")?;
    if p.a.is_some() || p.b.is_some() || p.map.is_some() || p.space.is_some() {
        return Err(CliError::Config("battery runs fixed parameter sets; drop --a/--b/--map/--space".into()));
    }
    let mut checks = Vec::new();
    let mut ok = true;

    let cal = calibrate(&bosonic_battery(CALIBRATION_MAX_PSUM), CALIBRATION_CUTOFF);
    let survivor = cal.unique_survivor();
    ok &= survivor.is_some();
    checks.push(json!({ "item": "calibration", "status": status(survivor.is_some()), "survivors": cal.survivors }));
    let calibration = json!({
        "cutoff": cal.cutoff,
        "survivor": survivor.map(|c| c.key()),
        "survivors": cal.survivors.iter().map(|c| c.key()).collect::<Vec<_>>(),
    });

    let (kr, kr_ok) = kr_table()?;
    ok &= kr_ok;
    checks.push(json!({ "item": "kr = interleaving domain", "status": status(kr_ok) }));
    let (mlimit, ml_ok) = mlimit_table()?;
    ok &= ml_ok;
    checks.push(json!({ "item": "open constraint formula", "status": status(ml_ok) }));

    let artifacts = [
        ("calibration.json", calibration),
        ("characters.json", characters()),
        ("kr.json", kr),
        ("mlimit.json", mlimit),
    ];
    let mut files = serde_json::Map::new();
    for (name, v) in &artifacts {
        let s = golden(&args.golden, name, v, args.update)?;
        ok &= s == "match" || s == "written";
        files.insert(name.to_string(), json!(s));
    }

    if !args.skip_verify {
        let (items, v_ok) = verification(p)?;
        ok &= v_ok;
        checks.extend(items);
    }
    let mut json = json!({
        "golden_dir": args.golden.display().to_string(),
        "golden": files,
        "checks": checks,
        "passed": ok,
    });
    if survivor.is_none() {
        json["calibration"] = calibration_json(&cal);
    }
    Ok(Artifact { json, table: None, passed: ok })
}
