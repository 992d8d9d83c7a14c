//! Run parameters, accepted as flags and as a TOML file; flags win.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Args, ValueEnum};
use glinf::affineweyl::Convention;
use glinf::partitions::{iota_domain, TupleConstraint};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};

/// Comma-separated integers on the command line, an array in TOML.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "ListRepr")]
pub struct IntList(pub Vec<i64>);

#[derive(Deserialize)]
#[serde(untagged)]
enum ListRepr {
    Items(Vec<i64>),
    Text(String),
}

impl TryFrom<ListRepr> for IntList {
    type Error = String;
    fn try_from(r: ListRepr) -> Result<Self, String> {
        match r {
            ListRepr::Items(v) => Ok(IntList(v)),
            ListRepr::Text(s) => s.parse(),
        }
    }
}

impl FromStr for IntList {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        let s = s.trim();
        if s.is_empty() {
            return Ok(IntList(Vec::new()));
        }
        s.split(',')
            .map(|x| x.trim().parse::<i64>().map_err(|e| format!("{x:?}: {e}")))
            .collect::<Result<_, _>>()
            .map(IntList)
    }
}

/// One or more prime-seed sets: `2,3,5,7,11;13,17,19,23,29`, or nested arrays in TOML.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "SeedRepr")]
pub struct SeedSets(pub Vec<Vec<u64>>);

#[derive(Deserialize)]
#[serde(untagged)]
enum SeedRepr {
    Flat(Vec<u64>),
    Nested(Vec<Vec<u64>>),
    Text(String),
}

impl TryFrom<SeedRepr> for SeedSets {
    type Error = String;
    fn try_from(r: SeedRepr) -> Result<Self, String> {
        match r {
            SeedRepr::Flat(v) => Ok(SeedSets(vec![v])),
            SeedRepr::Nested(v) => Ok(SeedSets(v)),
            SeedRepr::Text(s) => s.parse(),
        }
    }
}

impl FromStr for SeedSets {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        s.split(';')
            .map(|set| {
                set.split(',')
                    .map(|x| x.trim().parse::<u64>().map_err(|e| format!("seed {x:?}: {e}")))
                    .collect::<Result<Vec<_>, _>>()
            })
            .collect::<Result<_, _>>()
            .map(SeedSets)
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Json,
    Csv,
}

impl fmt::Display for Format {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Format::Json => "json",
            Format::Csv => "csv",
        })
    }
}

/// Every parameter any subcommand reads. Unset fields fall back to the
/// config file, then to the subcommand's default.
#[derive(Args, Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
pub struct Params {
    /// TOML file with the same keys as the flags
    #[arg(long)]
    #[serde(skip)]
    pub config: Option<PathBuf>,

    /// number of tuple entries
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub pprime: Option<i64>,
    #[arg(long)]
    pub p: Option<i64>,
    /// a_1,...: n entries (cyclic) or n-1 (open, or cyclic with --pprime/--p)
    #[arg(long, allow_hyphen_values = true)]
    pub a: Option<IntList>,
    #[arg(long, allow_hyphen_values = true)]
    pub b: Option<IntList>,
    #[arg(long)]
    pub k: Option<usize>,
    #[arg(long)]
    pub r: Option<i64>,
    /// finitization vector
    #[arg(long = "N", allow_hyphen_values = true)]
    #[serde(rename = "N")]
    pub big_n: Option<IntList>,
    /// degree cutoff
    #[arg(long)]
    pub degree: Option<usize>,
    /// mode window for the literal relation check
    #[arg(long)]
    pub window: Option<i64>,
    /// degree for the literal relation check (defaults to --degree)
    #[arg(long)]
    pub literal: Option<usize>,
    #[arg(long)]
    pub seeds: Option<SeedSets>,
    #[arg(long)]
    pub convention: Option<String>,
    #[arg(long)]
    pub method: Option<String>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// vector | fock | shifted | mab | mpp | w | g
    #[arg(long)]
    pub space: Option<String>,
    /// comma-separated: relations, tame, closure, highest_weight, level, lemch2, all
    #[arg(long)]
    pub suite: Option<String>,
    /// swap | rotation | iota
    #[arg(long)]
    pub map: Option<String>,
    /// randomized instances per point for the lemch2 suite
    #[arg(long)]
    pub instances: Option<usize>,
    /// RNG seed for the lemch2 suite
    #[arg(long)]
    pub rng_seed: Option<u64>,
}

macro_rules! overlay {
    ($dst:ident, $src:ident; $($f:ident),*) => {
        $( if $dst.$f.is_none() { $dst.$f = $src.$f; } )*
    };
}

impl Params {
    /// Fills unset fields from `--config`, if given.
    pub fn resolve(mut self) -> CliResult<Self> {
        let Some(path) = self.config.clone() else {
            return Ok(self);
        };
        let file = Self::from_file(&path)?;
        overlay!(self, file; n, pprime, p, a, b, k, r, big_n, degree, window, literal, seeds, convention,
            method, format, out, space, suite, map, instances, rng_seed);
        Ok(self)
    }

    fn from_file(path: &Path) -> CliResult<Self> {
        let text =
            std::fs::read_to_string(path).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
        toml::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
    }

    pub fn format(&self) -> Format {
        self.format.unwrap_or_default()
    }

    pub fn degree_or(&self, d: usize) -> usize {
        self.degree.unwrap_or(d)
    }

    pub fn a(&self) -> CliResult<&[i64]> {
        self.a.as_ref().map(|v| v.0.as_slice()).ok_or_else(|| missing("a"))
    }

    pub fn b(&self) -> CliResult<&[i64]> {
        self.b.as_ref().map(|v| v.0.as_slice()).ok_or_else(|| missing("b"))
    }

    pub fn k(&self) -> CliResult<usize> {
        self.k.or(self.n).ok_or_else(|| missing("k"))
    }

    pub fn r(&self) -> CliResult<i64> {
        self.r.ok_or_else(|| missing("r"))
    }

    pub fn big_n(&self) -> Option<&[i64]> {
        self.big_n.as_ref().map(|v| v.0.as_slice())
    }

    pub fn convention(&self) -> CliResult<Option<Convention>> {
        self.convention.as_deref().map(Convention::from_key).transpose().map_err(CliError::from)
    }

    /// The tuple constraint described by `n, p', p, a, b`; with `k, r` and
    /// no `b`, the interleaving's domain (`p' = k + r`, `p = k + 1`).
    pub fn constraint(&self) -> CliResult<TupleConstraint> {
        if self.b.is_none() && self.r.is_some() {
            return Ok(iota_domain(self.k()?, self.r()?, self.a()?)?);
        }
        let (a, b) = (self.a()?, self.b()?);
        if a.len() != b.len() {
            return Err(CliError::Config(format!("a has {} entries, b has {}", a.len(), b.len())));
        }
        let n = self.n.unwrap_or(a.len() + 1);
        let c = match (self.pprime, self.p) {
            (Some(pp), Some(p)) if a.len() + 1 == n => TupleConstraint::cyclic_from_heads(a, b, pp, p)?,
            (Some(_), Some(_)) | (None, None) if a.len() == n => TupleConstraint::cyclic(a.to_vec(), b.to_vec())?,
            (None, None) if a.len() + 1 == n => TupleConstraint::open(a.to_vec(), b.to_vec())?,
            (None, None) | (Some(_), Some(_)) => {
                return Err(CliError::Config(format!("n = {n} needs {} or {n} entries in a and b", n - 1)))
            }
            _ => return Err(CliError::Config("--pprime and --p go together".into())),
        };
        if let (Some(pp), Some(p)) = (self.pprime, self.p) {
            if c.p_prime() != Some(pp) || c.p() != Some(p) {
                return Err(CliError::Config(format!(
                    "a, b give (p',p) = ({:?},{:?}), not ({pp},{p})",
                    c.p_prime().unwrap_or_default(),
                    c.p().unwrap_or_default()
                )));
            }
        }
        Ok(c)
    }

    /// The configured seed sets; a single set is paired with the next primes
    /// after its largest seed so that every run sees two independent sets.
    pub fn seed_sets(&self, defaults: &[[u64; 5]]) -> CliResult<Vec<Vec<u64>>> {
        let Some(SeedSets(sets)) = &self.seeds else {
            return Ok(defaults.iter().map(|s| s.to_vec()).collect());
        };
        for s in sets {
            if let Some(bad) = s.iter().find(|&&x| !is_prime(x)) {
                return Err(CliError::Config(format!("seed {bad} is not prime")));
            }
            let mut sorted = s.clone();
            sorted.sort_unstable();
            sorted.dedup();
            if sorted.len() != s.len() {
                return Err(CliError::Config(format!("seed set {s:?} repeats a prime")));
            }
        }
        match sets.as_slice() {
            [] => Err(CliError::Config("empty seed list".into())),
            [one] => {
                let mut next = one.iter().copied().max().unwrap_or(1);
                let two = (0..one.len())
                    .map(|_| {
                        next = next_prime(next);
                        next
                    })
                    .collect();
                Ok(vec![one.clone(), two])
            }
            many => Ok(many.to_vec()),
        }
    }
}

fn missing(name: &str) -> CliError {
    CliError::Config(format!("--{name} is required"))
}

fn is_prime(x: u64) -> bool {
    x >= 2 && (2..).take_while(|d| d * d <= x).all(|d| !x.is_multiple_of(d))
}

fn next_prime(x: u64) -> u64 {
    (x + 1..).find(|&y| is_prime(y)).expect("primes are unbounded")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lists_parse_from_both_sources() {
        assert_eq!("0, 2".parse::<IntList>().unwrap(), IntList(vec![0, 2]));
        let p: Params = toml::from_str("a = [0, 2]\nb = \"0,1\"\nN = [3, 2]").unwrap();
        assert_eq!(p.a().unwrap(), &[0, 2]);
        assert_eq!(p.b().unwrap(), &[0, 1]);
        assert_eq!(p.big_n().unwrap(), &[3, 2]);
    }

    #[test]
    fn unknown_keys_are_rejected() {
        assert!(toml::from_str::<Params>("degre = 3").is_err());
    }

    #[test]
    fn constraint_forms() {
        let full = Params { a: Some(IntList(vec![0, 2])), b: Some(IntList(vec![0, 1])), n: Some(2), ..Default::default() };
        let c = full.constraint().unwrap();
        assert_eq!((c.p_prime(), c.p()), (Some(4), Some(3)));

        let heads = Params {
            a: Some(IntList(vec![0])),
            b: Some(IntList(vec![0])),
            pprime: Some(4),
            p: Some(3),
            ..Default::default()
        };
        assert_eq!(heads.constraint().unwrap(), c);

        let open = Params { a: Some(IntList(vec![0])), b: Some(IntList(vec![0])), ..Default::default() };
        assert!(!open.constraint().unwrap().is_cyclic());

        let wrong = Params { pprime: Some(5), p: Some(3), ..full };
        assert!(wrong.constraint().is_err());
    }

    #[test]
    fn single_seed_set_gets_a_partner() {
        let p = Params { seeds: Some("2,3,5".parse().unwrap()), ..Default::default() };
        assert_eq!(p.seed_sets(&[]).unwrap(), vec![vec![2, 3, 5], vec![7, 11, 13]]);
        let bad = Params { seeds: Some("2,4".parse().unwrap()), ..Default::default() };
        assert!(bad.seed_sets(&[]).is_err());
    }
}
