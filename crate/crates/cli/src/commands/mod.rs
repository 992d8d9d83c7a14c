//! Subcommand bodies. Each returns an [`Artifact`]; `main` writes it and maps
//! the outcome to an exit code.

pub mod battery;
pub mod iso;
pub mod verify;

use std::fmt;

use glinf::affineweyl::{calibrate, chi_bar, finitized_character, weights_of, Calibration, Convention};
use glinf::battery::bosonic_battery;
use glinf::characters::{char_direct, char_finitized, char_kr, char_m_limit, char_recursive, euler_power};
use glinf::partitions::TupleConstraint;
use glinf::qseries::QSeries;
use serde_json::{json, Value};

use crate::config::Params;
use crate::error::{CliError, CliResult};
use crate::output::{Artifact, Table};

/// The key the calibration sweep singles out; used whenever no key is configured.
pub const FROZEN_CONVENTION: Convention = Convention::Printed;
/// Size of the calibration sweep.
pub const CALIBRATION_MAX_PSUM: i64 = 12;
pub const CALIBRATION_CUTOFF: usize = 10;

const DEFAULT_DEGREE: usize = 10;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    Direct,
    Recursion,
    Bosonic,
    Kr,
    MLimit,
}

impl Method {
    pub fn from_key(s: &str) -> CliResult<Self> {
        Ok(match s.trim() {
            "direct" => Method::Direct,
            "recursion" => Method::Recursion,
            "bosonic" => Method::Bosonic,
            "kr" => Method::Kr,
            "mlimit" => Method::MLimit,
            other => {
                return Err(CliError::Config(format!(
                    "unknown method {other:?}; expected direct, recursion, bosonic, kr or mlimit"
                )))
            }
        })
    }

    pub fn key(self) -> &'static str {
        match self {
            Method::Direct => "direct",
            Method::Recursion => "recursion",
            Method::Bosonic => "bosonic",
            Method::Kr => "kr",
            Method::MLimit => "mlimit",
        }
    }

    /// The engine a result is cross-checked against.
    fn reference(self, c: Option<&TupleConstraint>) -> Method {
        match self {
            Method::Direct if c.is_some_and(|c| !c.is_cyclic()) => Method::MLimit,
            Method::Direct => Method::Bosonic,
            Method::Recursion | Method::Bosonic | Method::Kr | Method::MLimit => Method::Direct,
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.key())
    }
}

/// Everything a character computation needs, validated up front.
struct CharJob {
    degree: usize,
    constraint: Option<TupleConstraint>,
    convention: Convention,
    calibration: Option<Calibration>,
}

impl CharJob {
    fn new(p: &Params, methods: &[Method]) -> CliResult<Self> {
        let degree = p.degree_or(DEFAULT_DEGREE);
        let constraint = if methods.iter().all(|&m| m == Method::Kr) { None } else { Some(p.constraint()?) };
        for &m in methods {
            validate(m, p, constraint.as_ref())?;
        }
        let (convention, calibration) = match p.convention()? {
            Some(c) => (c, None),
            None if methods.contains(&Method::Bosonic) => {
                let cal = calibrate(&bosonic_battery(CALIBRATION_MAX_PSUM), CALIBRATION_CUTOFF);
                (cal.unique_survivor().unwrap_or(FROZEN_CONVENTION), Some(cal))
            }
            None => (FROZEN_CONVENTION, None),
        };
        Ok(CharJob { degree, constraint, convention, calibration })
    }

    fn constraint(&self) -> &TupleConstraint {
        self.constraint.as_ref().expect("validated")
    }

    fn series(&self, m: Method, p: &Params) -> CliResult<QSeries> {
        let d = self.degree;
        let conv = self.convention;
        Ok(match m {
            Method::Direct => match p.big_n() {
                Some(n) => char_finitized(self.constraint(), n, d)?,
                None => char_direct(self.constraint(), d),
            },
            Method::Recursion => char_recursive(self.constraint(), p.big_n().expect("validated"), d)?,
            Method::Bosonic => {
                let c = self.constraint();
                let (pp, pr) = (c.p_prime().expect("cyclic"), c.p().expect("cyclic"));
                let (eta, xi) = weights_of(c);
                match p.big_n() {
                    Some(n) => finitized_character(pp, pr, &eta, &xi, n, d, conv)?,
                    None => &chi_bar(pp, pr, &eta, &xi, d, conv)? * &euler_power(c.n(), d),
                }
            }
            Method::Kr => char_kr(p.k()?, p.r()?, p.a()?, d)?,
            Method::MLimit => {
                let c = self.constraint();
                char_m_limit(c.a(), c.b(), d, conv)?.formula
            }
        })
    }

    fn params_json(&self, p: &Params) -> Value {
        let mut v = json!({ "degree": self.degree, "convention": self.convention.key() });
        if let Some(c) = &self.constraint {
            v["n"] = json!(c.n());
            v["cyclic"] = json!(c.is_cyclic());
            v["a"] = json!(c.a());
            v["b"] = json!(c.b());
            if c.is_cyclic() {
                v["p_prime"] = json!(c.p_prime());
                v["p"] = json!(c.p());
            }
        }
        if let Some(n) = p.big_n() {
            v["N"] = json!(n);
        }
        if let (Some(k), Some(r)) = (p.k.or(p.n), p.r) {
            v["k"] = json!(k);
            v["r"] = json!(r);
        }
        v
    }
}

fn validate(m: Method, p: &Params, c: Option<&TupleConstraint>) -> CliResult<()> {
    let cyclic = c.is_some_and(TupleConstraint::is_cyclic);
    let need = |ok: bool, msg: &str| if ok { Ok(()) } else { Err(CliError::Config(format!("{m}: {msg}"))) };
    match m {
        Method::Direct => need(p.big_n().is_none() || cyclic, "--N needs a cyclic constraint"),
        Method::Recursion => {
            need(cyclic, "needs a cyclic constraint")?;
            need(p.big_n().is_some(), "needs --N")
        }
        Method::Bosonic => need(cyclic, "needs a cyclic constraint"),
        Method::Kr => {
            p.k()?;
            p.r()?;
            p.a()?;
            need(p.big_n().is_none(), "takes no --N")
        }
        Method::MLimit => {
            need(c.is_some_and(|c| !c.is_cyclic()), "needs an open constraint (n-1 entries, no --pprime/--p)")
        }
    }
}

pub(crate) fn calibration_json(cal: &Calibration) -> Value {
    let keys: Vec<Value> = cal
        .keys
        .iter()
        .map(|k| {
            let failing = k.points.iter().filter(|p| !(p.lattice && p.m_limit && p.finitized)).count();
            json!({
                "convention": k.convention.key(),
                "points": k.points.len(),
                "failing": failing,
                "first_diff": k.points.iter().find_map(|p| p.first_diff.clone()),
            })
        })
        .collect();
    json!({
        "cutoff": cal.cutoff,
        "survivor": cal.unique_survivor().map(|c| c.key()),
        "survivors": cal.survivors.iter().map(|c| c.key()).collect::<Vec<_>>(),
        "keys": keys,
    })
}

pub fn char_cmd(p: &Params) -> CliResult<Artifact> {
    let method = Method::from_key(p.method.as_deref().unwrap_or("direct"))?;
    let mut job = CharJob::new(p, &[method])?;
    let reference = method.reference(job.constraint.as_ref());
    if reference == Method::Direct && method == Method::Kr {
        // the interleaving's domain; needs only k, r, a
        job.constraint = Some(glinf::partitions::iota_domain(p.k()?, p.r()?, p.a()?)?);
    }
    let series = job.series(method, p)?;
    let check = job.series(reference, p)?;
    let agreement = series == check;
    let calibrated = job.calibration.as_ref().map(|c| c.unique_survivor().is_some()).unwrap_or(true);
    let mut json = json!({
        "params": job.params_json(p),
        "method": method.key(),
        "series": series,
        "agreement": agreement,
        "reference": reference.key(),
    });
    if let Some(cal) = &job.calibration {
        json["calibration"] = calibration_json(cal);
    }
    let table = Table::series(&["coefficient"], &[&series]);
    Ok(Artifact { json, table: Some(table), passed: agreement && calibrated })
}

pub fn compare_cmd(p: &Params) -> CliResult<Artifact> {
    let keys = p.method.as_deref().ok_or_else(|| CliError::Config("--method needs two engines, e.g. direct,recursion".into()))?;
    let methods: Vec<Method> = keys.split(',').map(Method::from_key).collect::<CliResult<_>>()?;
    let [left, right] = methods[..] else {
        return Err(CliError::Config(format!("--method needs exactly two engines, got {}", methods.len())));
    };
    let mut job = CharJob::new(p, &methods)?;
    if job.constraint.is_none() {
        job.constraint = Some(glinf::partitions::iota_domain(p.k()?, p.r()?, p.a()?)?);
    }
    let (l, r) = (job.series(left, p)?, job.series(right, p)?);
    let diff: Vec<Value> = (0..=job.degree)
        .filter(|&k| l.coeff(k) != r.coeff(k))
        .map(|k| json!({ "degree": k, "left": l.coeff(k).to_string(), "right": r.coeff(k).to_string() }))
        .collect();
    let identical = diff.is_empty();
    let mut json = json!({
        "params": job.params_json(p),
        "methods": [left.key(), right.key()],
        "identical": identical,
        "first_diff": diff.first().map(|d| d["degree"].clone()),
        "diff": diff,
        "left": l,
        "right": r,
    });
    if let Some(cal) = &job.calibration {
        json["calibration"] = calibration_json(cal);
    }
    let table = Table::series(&[left.key(), right.key()], &[&l, &r]);
    Ok(Artifact { json, table: Some(table), passed: identical })
}
