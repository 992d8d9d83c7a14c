//! Evaluated action: cached matrix coefficients, mode operators and state vectors.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, RwLock};

use num_rational::BigRational;
use num_traits::{One, Zero};

use super::params::{Mono, ParamSpec};
use super::rational::{Expansion, RationalFunc};
use super::spaces::{Closure, RawTerm, Space};
use crate::error::{Error, Result};

/// An evaluated `coeff · δ(support/z)` (support as prime exponents).
#[derive(Clone, Debug, PartialEq)]
pub struct Term<L> {
    pub target: L,
    pub support: Mono,
    pub coeff: BigRational,
}

/// Finite combination of basis labels; zero coefficients are never stored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StateVector<L: Ord> {
    terms: BTreeMap<L, BigRational>,
}

impl<L: Ord + Clone> Default for StateVector<L> {
    fn default() -> Self {
        Self { terms: BTreeMap::new() }
    }
}

impl<L: Ord + Clone> StateVector<L> {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn basis(l: L) -> Self {
        let mut v = Self::zero();
        v.add_term(l, BigRational::one());
        v
    }

    pub fn add_term(&mut self, l: L, c: BigRational) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(l.clone()).or_insert_with(BigRational::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&l);
        }
    }

    pub fn add_scaled(&mut self, o: &Self, c: &BigRational) {
        for (l, x) in &o.terms {
            self.add_term(l.clone(), x * c);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> &BTreeMap<L, BigRational> {
        &self.terms
    }

    pub fn coeff(&self, l: &L) -> BigRational {
        self.terms.get(l).cloned().unwrap_or_else(BigRational::zero)
    }
}

/// A raw coefficient after evaluation: `None` when it vanishes exactly.
pub type Evaluated = Result<Option<BigRational>>;

type Cache<L, T> = RwLock<HashMap<L, Arc<T>>>;

/// A space together with its evaluated, memoized action.
pub struct Module<S: Space> {
    space: S,
    e_cache: Cache<S::Label, Vec<Term<S::Label>>>,
    f_cache: Cache<S::Label, Vec<Term<S::Label>>>,
    psi_cache: Cache<S::Label, RationalFunc>,
    series_cache: Cache<(S::Label, Expansion), Vec<BigRational>>,
}

fn cached<L: Clone + Eq + std::hash::Hash, T>(
    cache: &Cache<L, T>,
    key: &L,
    make: impl FnOnce() -> Result<T>,
) -> Result<Arc<T>> {
    if let Some(v) = cache.read().unwrap().get(key) {
        return Ok(v.clone());
    }
    let v = Arc::new(make()?);
    cache.write().unwrap().insert(key.clone(), v.clone());
    Ok(v)
}

/// `s^m` for a prime-exponent monomial.
pub fn power(spec: &ParamSpec, s: Mono, m: i64) -> BigRational {
    spec.value_of(s.pow(m))
}

impl<S: Space> Module<S> {
    pub fn new(space: S) -> Self {
        Self {
            space,
            e_cache: RwLock::new(HashMap::new()),
            f_cache: RwLock::new(HashMap::new()),
            psi_cache: RwLock::new(HashMap::new()),
            series_cache: RwLock::new(HashMap::new()),
        }
    }

    pub fn space(&self) -> &S {
        &self.space
    }

    pub fn spec(&self) -> &ParamSpec {
        self.space.spec()
    }

    pub fn psi(&self, l: &S::Label) -> Arc<RationalFunc> {
        cached(&self.psi_cache, l, || Ok(RationalFunc::from_symbolic(self.spec(), &self.space.psi_factors(l))))
            .expect("ψ eigenvalues are always defined")
    }

    /// `ψ^+_k` (`k ≥ 0`) or `ψ^−_k` (`k ≤ 0`), from a cached expansion.
    pub fn psi_mode(&self, l: &S::Label, k: i64, which: Expansion) -> Result<BigRational> {
        let order = k.unsigned_abs() as usize;
        let key = (l.clone(), which);
        if let Some(v) = self.series_cache.read().unwrap().get(&key) {
            if let Some(c) = v.get(order) {
                return Ok(c.clone());
            }
        }
        if (which == Expansion::Plus && k < 0) || (which == Expansion::Minus && k > 0) {
            // reported by `mode`
            return self.psi(l).mode(self.spec(), k, which);
        }
        let series = self.psi(l).expand(self.spec(), which, order.max(12))?;
        let c = series[order].clone();
        self.series_cache.write().unwrap().insert(key, Arc::new(series));
        Ok(c)
    }

    /// Evaluates raw terms, applying the closure rule of the space.
    /// `Sub`: a nonzero coefficient into a non-member is an error.
    /// `Quotient`: coefficients into non-members are dropped after evaluation.
    fn evaluate(&self, source: &S::Label, raw: Vec<RawTerm<S::Label>>, op: &str) -> Result<Vec<Term<S::Label>>> {
        let spec = self.spec();
        let mut out = Vec::with_capacity(raw.len());
        for t in raw {
            let v = spec.evaluate(&t.coeff).map_err(|e| match e {
                Error::Pole(m) => Error::Pole(format!(
                    "{op} {source} -> {} (slot {}, row {}): {m}",
                    t.target, t.site.0, t.site.1
                )),
                other => other,
            })?;
            let Some(coeff) = v else { continue };
            if !self.space.is_member(&t.target) {
                match self.space.closure() {
                    Closure::Sub => {
                        return Err(Error::Closure(format!(
                            "{op} {source} -> non-member {} has coefficient {coeff}",
                            t.target
                        )))
                    }
                    Closure::Quotient => continue,
                    Closure::Whole => {}
                }
            }
            out.push(Term { target: t.target, support: spec.specialize(t.support), coeff });
        }
        Ok(out)
    }

    pub fn e_terms(&self, l: &S::Label) -> Result<Arc<Vec<Term<S::Label>>>> {
        cached(&self.e_cache, l, || self.evaluate(l, self.space.e_raw(l), "e"))
    }

    pub fn f_terms(&self, l: &S::Label) -> Result<Arc<Vec<Term<S::Label>>>> {
        cached(&self.f_cache, l, || self.evaluate(l, self.space.f_raw(l), "f"))
    }

    /// Unfiltered evaluation of the raw terms (no closure rule, no cache).
    pub fn raw_terms(&self, l: &S::Label, raising: bool) -> Vec<(RawTerm<S::Label>, Evaluated)> {
        let raw = if raising { self.space.e_raw(l) } else { self.space.f_raw(l) };
        raw.into_iter()
            .map(|t| {
                let v = self.spec().evaluate(&t.coeff);
                (t, v)
            })
            .collect()
    }

    fn apply(&self, v: &StateVector<S::Label>, m: i64, raising: bool) -> Result<StateVector<S::Label>> {
        let mut out = StateVector::zero();
        for (l, c) in v.terms() {
            let terms = if raising { self.e_terms(l)? } else { self.f_terms(l)? };
            for t in terms.iter() {
                out.add_term(t.target.clone(), c * &t.coeff * power(self.spec(), t.support, m));
            }
        }
        Ok(out)
    }

    /// `e_m v`.
    pub fn apply_e(&self, v: &StateVector<S::Label>, m: i64) -> Result<StateVector<S::Label>> {
        self.apply(v, m, true)
    }

    /// `f_m v`.
    pub fn apply_f(&self, v: &StateVector<S::Label>, m: i64) -> Result<StateVector<S::Label>> {
        self.apply(v, m, false)
    }

    /// `ψ^±_k v`, with `ψ^+_k = 0` for `k < 0` and `ψ^−_k = 0` for `k > 0`.
    pub fn apply_psi(&self, v: &StateVector<S::Label>, k: i64, which: Expansion) -> Result<StateVector<S::Label>> {
        let mut out = StateVector::zero();
        let outside = match which {
            Expansion::Plus => k < 0,
            Expansion::Minus => k > 0,
        };
        if outside {
            return Ok(out);
        }
        for (l, c) in v.terms() {
            out.add_term(l.clone(), c * self.psi_mode(l, k, which)?);
        }
        Ok(out)
    }
}
