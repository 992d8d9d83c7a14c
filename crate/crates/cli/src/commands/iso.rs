use std::fmt::Display;

use glinf::emodule::action::Module;
use glinf::emodule::catalog::SEED_SETS;
use glinf::emodule::spaces::Space;
use glinf::emodule::transport::{
    factor_swap, interleave_label, interleaving, rotate_labels, rotation, solve_transport_constants, swap_labels,
    TransportError,
};
use serde_json::{json, Map, Value};

use crate::config::Params;
use crate::error::{CliError, CliResult};
use crate::output::{require_json, Artifact};

const DEFAULT_DEGREE: usize = 4;

fn solve<S, T>(
    src: S,
    dst: T,
    map: impl Fn(&S::Label) -> glinf::Result<T::Label>,
    d: usize,
    seeds: &[u64],
) -> CliResult<Value>
where
    S: Space,
    T: Space,
    S::Label: Display,
{
    let (src, dst) = (Module::new(src), Module::new(dst));
    let head = json!({ "seeds": seeds, "source": src.space().name(), "target": dst.space().name() });
    let mut v = head;
    match solve_transport_constants(&src, &dst, map, d) {
        Ok(t) => {
            let constants: Map<String, Value> =
                t.constants.iter().map(|(l, c)| (l.to_string(), Value::String(c.to_string()))).collect();
            v["status"] = json!("pass");
            v["edges_checked"] = json!(t.edges_checked);
            v["constants"] = Value::Object(constants);
        }
        Err(TransportError::Core(e)) => return Err(CliError::Core(e)),
        Err(e) => {
            v["status"] = json!("fail");
            v["error"] = json!(e.to_string());
        }
    }
    Ok(v)
}

pub fn iso_cmd(p: &Params) -> CliResult<Artifact> {
    require_json(p, "iso")?;
    let d = p.degree_or(DEFAULT_DEGREE);
    let seeds = p.seed_sets(&SEED_SETS)?;
    let map = p.map.as_deref().unwrap_or("swap");
    let mut runs = Vec::new();
    let params = match map {
        "swap" => {
            for s in &seeds {
                let (a, b) = factor_swap(s)?;
                runs.push(solve(a, b, swap_labels, d, s)?);
            }
            json!({ "degree": d })
        }
        "rotation" => {
            let c = p.constraint()?;
            if !c.is_cyclic() {
                return Err(CliError::Config("rotation needs a cyclic constraint".into()));
            }
            for s in &seeds {
                let (x, y) = rotation(s, c.a(), c.b())?;
                runs.push(solve(x, y, rotate_labels, d, s)?);
            }
            json!({ "degree": d, "a": c.a(), "b": c.b() })
        }
        "iota" => {
            let (n, r, a) = (p.k()?, p.r()?, p.a()?.to_vec());
            for s in &seeds {
                let (x, y) = interleaving(s, n, r, &a)?;
                runs.push(solve(x, y, |l| interleave_label(l, n, r, &a), d, s)?);
            }
            json!({ "degree": d, "n": n, "r": r, "a": a })
        }
        other => return Err(CliError::Config(format!("unknown map {other:?}; expected swap, rotation or iota"))),
    };
    let passed = runs.iter().all(|r| r["status"] == "pass");
    let json = json!({ "map": map, "params": params, "runs": runs, "passed": passed });
    Ok(Artifact { json, table: None, passed })
}
