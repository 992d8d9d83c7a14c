//! Verification suites: defining relations, tameness, closure, highest
//! weight, levels and the two-point classification.
//!
//! Relations are checked in two ways. The grouped check collects every
//! product of delta functions by its support pair and requires each group to
//! match; distinct supports give independent delta functions, so this is
//! exact for all modes at once. The window check applies the mode operators
//! `e_m, f_m, ψ^±_k` literally for `|i|, |j| ≤ W` as an independent oracle.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};

use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use super::action::{Module, StateVector};
use super::params::{Mono, ParamSpec};
use super::rational::{Expansion, RationalFunc};
use super::spaces::{Closure, Levels, Space, VectorTensor};
use crate::error::{Error, Result};
use crate::par;
use crate::qseries::QSeries;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckReport {
    pub name: String,
    pub status: Status,
    pub labels_checked: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub window: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

impl CheckReport {
    fn from_outcomes(name: &str, labels: usize, window: Option<i64>, failures: Vec<String>) -> Self {
        let detail = failures.into_iter().next();
        let status = if detail.is_none() { Status::Pass } else { Status::Fail };
        Self { name: name.to_string(), status, labels_checked: labels, window, detail }
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Witness {
    pub check: String,
    pub message: String,
}

/// Aggregated verification report for one space.
#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub space: String,
    pub seeds: Vec<u64>,
    pub checks: Vec<CheckReport>,
    pub witness: Option<Witness>,
}

impl Report {
    pub fn new<S: Space>(m: &Module<S>, checks: Vec<CheckReport>) -> Self {
        let witness = checks
            .iter()
            .find(|c| !c.passed())
            .map(|c| Witness { check: c.name.clone(), message: c.detail.clone().unwrap_or_default() });
        Self { space: m.space().name(), seeds: m.spec().seeds.clone(), checks, witness }
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(CheckReport::passed)
    }
}

/// Truncation parameters for the relation suite.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct Window {
    /// Basis labels of degree at most this are checked.
    pub degree: usize,
    /// Mode indices `|i|, |j| ≤ modes` in the literal check.
    pub modes: i64,
    /// ψ series order.
    pub order: usize,
    /// Degree bound for the literal mode check; `None` skips it.
    pub literal: Option<usize>,
}

impl Window {
    pub fn new(degree: usize, modes: i64) -> Self {
        Self { degree, modes, order: degree + 6, literal: Some(degree) }
    }

    pub fn with_literal(self, literal: Option<usize>) -> Self {
        Self { literal: literal.map(|d| d.min(self.degree)), ..self }
    }
}

/// Values of `q1, q2, q3` at the prime level.
struct Qs {
    q: [BigRational; 3],
    mono: [Mono; 3],
}

impl Qs {
    fn of(spec: &ParamSpec) -> Self {
        let mono = [Mono::q1(), Mono::q2(), Mono::q3()].map(|m| spec.specialize(m));
        Self { q: mono.map(|m| spec.value_of(m)), mono }
    }

    /// `g(a, b) = ∏ (a − q_k b)`.
    fn g(&self, a: &BigRational, b: &BigRational) -> BigRational {
        self.q.iter().fold(BigRational::one(), |acc, q| acc * (a - q * b))
    }

    /// Coefficients of `g(z, w) = Σ g_r z^{3−r} w^r`.
    fn g_coeffs(&self) -> [BigRational; 4] {
        let [a, b, c] = &self.q;
        [BigRational::one(), -(a + b + c), a * b + a * c + b * c, -(a * b * c)]
    }
}

fn err_text(e: Error) -> String {
    e.to_string()
}

/// Runs `f` over labels in parallel and keeps the failures in label order.
fn over_labels<L: Sync, F>(labels: &[L], f: F) -> Vec<String>
where
    F: Fn(&L) -> std::result::Result<(), String> + Sync + Send,
{
    par::map(labels, f).into_iter().filter_map(|r| r.err()).collect()
}

type Key<L> = (L, Mono, Mono);

fn nonzero_entries<L: Ord + Clone>(m: BTreeMap<Key<L>, BigRational>) -> Vec<(Key<L>, BigRational)> {
    m.into_iter().filter(|(_, v)| !v.is_zero()).collect()
}

fn rel1_grouped<S: Space>(m: &Module<S>, qs: &Qs, x: &S::Label, raising: bool) -> Result<Option<String>> {
    let spec = m.spec();
    let mut acc: BTreeMap<Key<S::Label>, BigRational> = BTreeMap::new();
    let first = if raising { m.e_terms(x)? } else { m.f_terms(x)? };
    for t1 in first.iter() {
        let second = if raising { m.e_terms(&t1.target)? } else { m.f_terms(&t1.target)? };
        let s1 = spec.value_of(t1.support);
        for t2 in second.iter() {
            let s2 = spec.value_of(t2.support);
            let g = if raising { qs.g(&s2, &s1) } else { qs.g(&s1, &s2) };
            let v = g * &t1.coeff * &t2.coeff;
            *acc.entry((t2.target.clone(), t2.support, t1.support)).or_insert_with(BigRational::zero) += &v;
            *acc.entry((t2.target.clone(), t1.support, t2.support)).or_insert_with(BigRational::zero) += v;
        }
    }
    Ok(nonzero_entries(acc).into_iter().next().map(|((nu, _, _), v)| format!("{x} -> {nu}: residual {v}")))
}

fn rel2_grouped<S: Space>(m: &Module<S>, qs: &Qs, x: &S::Label, raising: bool) -> Result<Option<String>> {
    let terms = if raising { m.e_terms(x)? } else { m.f_terms(x)? };
    let psi_x = m.psi(x);
    for t in terms.iter() {
        let psi_y = m.psi(&t.target);
        let fwd: Vec<(Mono, i32)> = qs.mono.iter().map(|q| (*q * t.support, 1)).collect();
        let bwd: Vec<(Mono, i32)> = qs.mono.iter().map(|q| (t.support / *q, 1)).collect();
        let (with_y, with_x) = if raising { (fwd, bwd) } else { (bwd, fwd) };
        let lhs = psi_y.mul(&RationalFunc::from_specialized(&with_y));
        let rhs = psi_x.mul(&RationalFunc::from_specialized(&with_x));
        if lhs != rhs {
            return Ok(Some(format!("{x} -> {}: ψ exchange fails", t.target)));
        }
    }
    Ok(None)
}

fn rel3_grouped<S: Space>(m: &Module<S>, qs: &Qs, x: &S::Label) -> Result<Option<String>> {
    let spec = m.spec();
    let mut acc: BTreeMap<Key<S::Label>, BigRational> = BTreeMap::new();
    for t1 in m.f_terms(x)?.iter() {
        for t2 in m.e_terms(&t1.target)?.iter() {
            *acc.entry((t2.target.clone(), t2.support, t1.support)).or_insert_with(BigRational::zero) +=
                &t1.coeff * &t2.coeff;
        }
    }
    for t1 in m.e_terms(x)?.iter() {
        for t2 in m.f_terms(&t1.target)?.iter() {
            *acc.entry((t2.target.clone(), t1.support, t2.support)).or_insert_with(BigRational::zero) -=
                &t1.coeff * &t2.coeff;
        }
    }
    let psi = m.psi(x);
    let g11 = qs.g(&BigRational::one(), &BigRational::one());
    for (c, order) in psi.poles() {
        if order > 1 {
            return Ok(Some(format!("{x}: ψ has a pole of order {order}")));
        }
        let want = psi.delta_weight(spec, &c)? / &g11;
        *acc.entry((x.clone(), c, c)).or_insert_with(BigRational::zero) -= want;
    }
    Ok(nonzero_entries(acc)
        .into_iter()
        .next()
        .map(|((nu, z, w), v)| format!("{x} -> {nu} at z = {}, w = {}: residual {v}", spec.value_of(z), spec.value_of(w))))
}

fn rel6_grouped<S: Space>(m: &Module<S>, x: &S::Label, raising: bool) -> Result<Option<String>> {
    let spec = m.spec();
    let step = |l: &S::Label| if raising { m.e_terms(l) } else { m.f_terms(l) };
    let mut acc: BTreeMap<S::Label, BigRational> = BTreeMap::new();
    for t1 in step(x)?.iter() {
        let s1 = spec.value_of(t1.support);
        for t2 in step(&t1.target)?.iter() {
            let s2 = spec.value_of(t2.support);
            let c12 = &t1.coeff * &t2.coeff;
            for t3 in step(&t2.target)?.iter() {
                let s3 = spec.value_of(t3.support);
                let w = &s2 / &s1 - &s1 / &s2 - &s3 / &s2 + &s2 / &s3;
                *acc.entry(t3.target.clone()).or_insert_with(BigRational::zero) += &c12 * &t3.coeff * w;
            }
        }
    }
    Ok(acc.into_iter().find(|(_, v)| !v.is_zero()).map(|(nu, v)| format!("{x} -> {nu}: residual {v}")))
}

/// Mode operators on one basis vector, memoized by mode sequence.
struct ModeTable<'a, S: Space> {
    m: &'a Module<S>,
    x: StateVector<S::Label>,
}

impl<'a, S: Space> ModeTable<'a, S> {
    fn e(&self, v: &StateVector<S::Label>, k: i64) -> Result<StateVector<S::Label>> {
        self.m.apply_e(v, k)
    }
    fn f(&self, v: &StateVector<S::Label>, k: i64) -> Result<StateVector<S::Label>> {
        self.m.apply_f(v, k)
    }
}

fn combine<L: Ord + Clone>(parts: &[(&BigRational, &StateVector<L>)]) -> StateVector<L> {
    let mut out = StateVector::zero();
    for (c, v) in parts {
        out.add_scaled(v, c);
    }
    out
}

/// Literal mode-window check of rel1, rel2, rel3 and rel6 on one basis vector.
fn literal_modes<S: Space>(m: &Module<S>, qs: &Qs, x: &S::Label, w: i64) -> Result<Option<String>> {
    let t = ModeTable { m, x: StateVector::basis(x.clone()) };
    let g = qs.g_coeffs();
    let lo = -w;
    let hi = w + 3;
    // single applications e_b|x⟩, f_b|x⟩ and double applications
    let mut e1 = HashMap::new();
    let mut f1 = HashMap::new();
    for b in lo..=hi {
        e1.insert(b, t.e(&t.x, b)?);
        f1.insert(b, t.f(&t.x, b)?);
    }
    let mut ee = HashMap::new();
    let mut ff = HashMap::new();
    let mut ef = HashMap::new();
    let mut fe = HashMap::new();
    for a in lo..=hi {
        for b in lo..=hi {
            ee.insert((a, b), t.e(&e1[&b], a)?);
            ff.insert((a, b), t.f(&f1[&b], a)?);
            if a.abs() <= w && b.abs() <= w {
                ef.insert((a, b), t.e(&f1[&b], a)?);
                fe.insert((a, b), t.f(&e1[&a], b)?);
            }
        }
    }
    let g11 = qs.g(&BigRational::one(), &BigRational::one());
    for i in -w..=w {
        for j in -w..=w {
            // rel1: Σ_r g_r (e_{i+3−r} e_{j+r} + e_{j+3−r} e_{i+r}) = 0; for f the
            // factor g(w, z) sits on the other side, exchanging the index roles
            let mut ve = StateVector::zero();
            let mut vf = StateVector::zero();
            for (r, gr) in g.iter().enumerate() {
                let r = r as i64;
                ve.add_scaled(&ee[&(i + 3 - r, j + r)], gr);
                ve.add_scaled(&ee[&(j + 3 - r, i + r)], gr);
                vf.add_scaled(&ff[&(i + r, j + 3 - r)], gr);
                vf.add_scaled(&ff[&(j + r, i + 3 - r)], gr);
            }
            if !ve.is_zero() || !vf.is_zero() {
                let which = if ve.is_zero() { "f" } else { "e" };
                return Ok(Some(format!("rel1({which}) at {x}, modes ({i},{j})")));
            }
            // rel3: [e_i, f_j] = (ψ^+_{i+j} − ψ^−_{i+j}) / g(1,1)
            let mut lhs = ef[&(i, j)].clone();
            lhs.add_scaled(&fe[&(i, j)], &-BigRational::one());
            let mut rhs = m.apply_psi(&t.x, i + j, Expansion::Plus)?;
            rhs.add_scaled(&m.apply_psi(&t.x, i + j, Expansion::Minus)?, &-BigRational::one());
            let rhs = combine(&[(&(BigRational::one() / &g11), &rhs)]);
            if lhs != rhs {
                return Ok(Some(format!("rel3 at {x}, modes ({i},{j})")));
            }
            // rel2: Σ_r g_r (ψ_{i+3−r} e_{j+r} + e_{j+3−r} ψ_{i+r}) = 0 and the f form
            for which in [Expansion::Plus, Expansion::Minus] {
                let mut ve = StateVector::zero();
                let mut vf = StateVector::zero();
                for (r, gr) in g.iter().enumerate() {
                    let r = r as i64;
                    ve.add_scaled(&m.apply_psi(&e1[&(j + r)], i + 3 - r, which)?, gr);
                    let psi_x = m.apply_psi(&t.x, i + r, which)?;
                    ve.add_scaled(&t.e(&psi_x, j + 3 - r)?, gr);
                    vf.add_scaled(&m.apply_psi(&f1[&(j + 3 - r)], i + r, which)?, gr);
                    let psi_x = m.apply_psi(&t.x, i + 3 - r, which)?;
                    vf.add_scaled(&t.f(&psi_x, j + r)?, gr);
                }
                if !ve.is_zero() || !vf.is_zero() {
                    return Ok(Some(format!("rel2({which:?}) at {x}, modes ({i},{j})")));
                }
            }
        }
    }
    // rel6: [X_0, [X_1, X_{−1}]] = 0
    for (name, tab) in [("e", &ee), ("f", &ff)] {
        let inner = |a: i64, b: i64| &tab[&(a, b)];
        let apply = |v: &StateVector<S::Label>, k: i64| if name == "e" { t.e(v, k) } else { t.f(v, k) };
        let one = BigRational::one();
        let neg = -BigRational::one();
        let mut v = apply(inner(1, -1), 0)?;
        v.add_scaled(&apply(inner(-1, 1), 0)?, &neg);
        let x0 = if name == "e" { &e1[&0] } else { &f1[&0] };
        v.add_scaled(&apply(&apply(x0, -1)?, 1)?, &neg);
        v.add_scaled(&apply(&apply(x0, 1)?, -1)?, &one);
        if !v.is_zero() {
            return Ok(Some(format!("rel6({name}) at {x}")));
        }
    }
    Ok(None)
}

/// rel1–rel6 on all basis labels of degree at most `win.degree`.
pub fn check_relations<S: Space>(m: &Module<S>, win: Window) -> Vec<CheckReport> {
    let labels = m.space().basis(win.degree);
    let qs = Qs::of(m.spec());
    let n = labels.len();
    let grouped = |name: &str, f: &(dyn Fn(&S::Label) -> Result<Option<String>> + Sync)| {
        let fails = over_labels(&labels, |x| match f(x) {
            Ok(None) => Ok(()),
            Ok(Some(msg)) => Err(msg),
            Err(e) => Err(err_text(e)),
        });
        CheckReport::from_outcomes(name, n, Some(win.modes), fails)
    };
    let mut out = vec![
        grouped("rel1", &|x| Ok(rel1_grouped(m, &qs, x, true)?.or(rel1_grouped(m, &qs, x, false)?))),
        grouped("rel2", &|x| Ok(rel2_grouped(m, &qs, x, true)?.or(rel2_grouped(m, &qs, x, false)?))),
        grouped("rel3", &|x| rel3_grouped(m, &qs, x)),
        grouped("rel4_rel5", &|x| {
            let psi = m.psi(x);
            let spec = m.spec();
            if psi.kappa().is_zero() || m.psi_mode(x, 0, Expansion::Minus)?.is_zero() {
                return Ok(Some(format!("{x}: ψ_0 not invertible")));
            }
            for which in [Expansion::Plus, Expansion::Minus] {
                if !psi.expansion_consistent(spec, which, win.order)? {
                    return Ok(Some(format!("{x}: {which:?} expansion inconsistent")));
                }
            }
            Ok(None)
        }),
        grouped("rel6", &|x| Ok(rel6_grouped(m, x, true)?.or(rel6_grouped(m, x, false)?))),
    ];
    if let Some(ld) = win.literal {
        let small = m.space().basis(ld);
        let fails = over_labels(&small, |x| match literal_modes(m, &qs, x, win.modes) {
            Ok(None) => Ok(()),
            Ok(Some(msg)) => Err(msg),
            Err(e) => Err(err_text(e)),
        });
        out.push(CheckReport::from_outcomes("modes", small.len(), Some(win.modes), fails));
    }
    out
}

/// Pairwise distinctness of ψ eigenvalues on the basis up to degree `d`.
pub fn check_tame<S: Space>(m: &Module<S>, d: usize) -> CheckReport {
    let labels = m.space().basis(d);
    let psis = par::map(&labels, |l| m.psi(l));
    let mut seen: HashMap<&RationalFunc, &S::Label> = HashMap::new();
    let mut fails = Vec::new();
    for (l, psi) in labels.iter().zip(&psis) {
        if let Some(prev) = seen.insert(psi.as_ref(), l) {
            fails.push(format!("{prev} and {l} share the eigenvalue {psi}"));
        }
    }
    CheckReport::from_outcomes("tame", labels.len(), None, fails)
}

/// Every colliding pair of ψ eigenvalues up to degree `d`.
pub fn spectrum_collisions<S: Space>(m: &Module<S>, d: usize) -> Vec<(S::Label, S::Label)> {
    let mut seen: BTreeMap<RationalFunc, S::Label> = BTreeMap::new();
    let mut out = Vec::new();
    for l in m.space().basis(d) {
        let psi = m.psi(&l).as_ref().clone();
        if let Some(prev) = seen.get(&psi) {
            out.push((prev.clone(), l));
        } else {
            seen.insert(psi, l);
        }
    }
    out
}

/// Pole-freedom on members, vanishing into non-members (submodules) and
/// vanishing from non-members into members (quotients).
pub fn check_closure<S: Space>(m: &Module<S>, d: usize, w: i64) -> CheckReport {
    let space = m.space();
    let labels = space.basis(d);
    let mut fails = over_labels(&labels, |x| {
        m.e_terms(x).map_err(err_text)?;
        m.f_terms(x).map_err(err_text)?;
        Ok(())
    });
    let mut checked = labels.len();
    if space.closure() == Closure::Quotient {
        let outside: Vec<S::Label> = space.ambient(d).into_iter().filter(|l| !space.is_member(l)).collect();
        checked += outside.len();
        fails.extend(over_labels(&outside, |x| {
            for raising in [true, false] {
                for (t, v) in m.raw_terms(x, raising) {
                    if !space.is_member(&t.target) {
                        continue;
                    }
                    match v {
                        Ok(None) => {}
                        Ok(Some(c)) => return Err(format!("non-member {x} -> member {}: coefficient {c}", t.target)),
                        Err(e) => return Err(format!("non-member {x} -> member {}: {e}", t.target)),
                    }
                }
            }
            Ok(())
        }));
    }
    CheckReport::from_outcomes("closure", checked, Some(w), fails)
}

/// `(ψ^+_0, ψ^−_0)` on every basis label against the stated level.
pub fn check_level<S: Space>(m: &Module<S>, d: usize) -> CheckReport {
    let labels = m.space().basis(d);
    let want = m.spec().value(m.space().level());
    let fails = over_labels(&labels, |x| {
        let plus = m.psi_mode(x, 0, Expansion::Plus).map_err(err_text)?;
        let minus = m.psi_mode(x, 0, Expansion::Minus).map_err(err_text)?;
        if plus.is_one() && minus == want {
            Ok(())
        } else {
            Err(format!("{x}: level ({plus}, {minus}), expected (1, {want})"))
        }
    });
    CheckReport::from_outcomes("level", labels.len(), None, fails)
}

/// `f` kills the highest vector, its eigenvalue is the stated highest weight,
/// and `e`-paths from it reach every basis label up to degree `d`.
pub fn check_highest_weight<S: Space>(m: &Module<S>, d: usize, w: i64) -> CheckReport {
    let space = m.space();
    let (Some(h), Some(hw)) = (space.highest(), space.highest_weight()) else {
        return CheckReport::from_outcomes("highest_weight", 0, None, vec!["not a highest weight space".into()]);
    };
    let mut fails = Vec::new();
    let v = StateVector::basis(h.clone());
    for k in -w..=w {
        match m.apply_f(&v, k) {
            Ok(out) if out.is_zero() => {}
            Ok(_) => fails.push(format!("f_{k} does not kill {h}")),
            Err(e) => fails.push(err_text(e)),
        }
    }
    if *m.psi(&h) != RationalFunc::from_symbolic(m.spec(), &hw) {
        fails.push(format!("ψ({h}) = {} differs from the stated highest weight", m.psi(&h)));
    }
    let labels = space.basis(d);
    let mut reached: BTreeSet<S::Label> = BTreeSet::new();
    let mut queue = VecDeque::from([h.clone()]);
    reached.insert(h);
    while let Some(x) = queue.pop_front() {
        match m.e_terms(&x) {
            Ok(ts) => {
                for t in ts.iter() {
                    if space.degree(&t.target) <= d as i64 && reached.insert(t.target.clone()) {
                        queue.push_back(t.target.clone());
                    }
                }
            }
            Err(e) => fails.push(err_text(e)),
        }
    }
    if let Some(miss) = labels.iter().find(|l| !reached.contains(l)) {
        fails.push(format!("{miss} is not reached from the highest vector"));
    }
    CheckReport::from_outcomes("highest_weight", labels.len(), Some(w), fails)
}

/// Dimensions of the graded pieces of the basis.
pub fn graded_character<S: Space>(m: &Module<S>, d: usize) -> QSeries {
    let mut c = vec![num_bigint::BigInt::zero(); d + 1];
    for l in m.space().basis(d) {
        let deg = m.space().degree(&l);
        if (0..=d as i64).contains(&deg) {
            c[deg as usize] += 1;
        }
    }
    QSeries::from_coeffs(c).expect("nonempty coefficient list")
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Fragility {
    Undefined,
    Zero,
    Nonzero,
}

/// Classification of `⟨i,j| e |i,j−1⟩` and `⟨i,j| f |i+1,j⟩` in `V(u) ⊗ V(v)`
/// with `v/u = q1^x q3^y`, or generic `v/u` when `ratio` is `None`.
pub fn classify_2point(seeds: &[u64], i: i64, j: i64, ratio: Option<(i64, i64)>) -> Result<(Fragility, Fragility)> {
    let spec = match ratio {
        Some((x, y)) => ParamSpec::two_point(seeds, x, y)?,
        None => ParamSpec::generic(seeds, 2)?,
    };
    let m = Module::new(VectorTensor::new(spec));
    let classify = |src: Levels, raising: bool, slot: usize| -> Fragility {
        let hit = m.raw_terms(&src, raising).into_iter().find(|(t, _)| t.site.0 == slot);
        match hit.map(|(_, v)| v) {
            Some(Err(_)) => Fragility::Undefined,
            Some(Ok(None)) => Fragility::Zero,
            Some(Ok(Some(_))) => Fragility::Nonzero,
            None => unreachable!("every slot has a term"),
        }
    };
    Ok((classify(Levels(vec![i, j - 1]), true, 1), classify(Levels(vec![i + 1, j]), false, 0)))
}

/// The classification stated for both fragile coefficients, from `v/u` alone.
pub fn predicted_2point(i: i64, j: i64, ratio: Option<(i64, i64)>) -> Fragility {
    let Some((x, y)) = ratio else { return Fragility::Nonzero };
    let d = i - j;
    // q1^d q2^{-1} = q1^{d+1} q3 and q1^d q3^{-1}
    if (x, y) == (d, 0) || (x, y) == (d + 1, 0) {
        Fragility::Undefined
    } else if (x, y) == (d + 1, 1) || (x, y) == (d, -1) {
        Fragility::Zero
    } else {
        Fragility::Nonzero
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::emodule::spaces::FockTensor;

    #[test]
    fn g_at_one() {
        let spec = ParamSpec::generic(&[2, 3, 5], 1).unwrap();
        let qs = Qs::of(&spec);
        let one = BigRational::one();
        let want = (&one - spec.q1()) * (&one - spec.q2()) * (&one - spec.q3());
        assert_eq!(qs.g(&one, &one), want);
        let g = qs.g_coeffs();
        assert_eq!(g.iter().fold(BigRational::zero(), |a, b| a + b), want);
    }

    #[test]
    fn fock_relations_small() {
        let m = Module::new(FockTensor::tensor(ParamSpec::generic(&[2, 3, 5], 1).unwrap()));
        for r in check_relations(&m, Window::new(3, 2)) {
            assert!(r.passed(), "{r:?}");
        }
    }

    /// Fock module with the `f` coefficients out of two-box labels scaled by `q1`.
    struct Skewed(FockTensor);

    impl Space for Skewed {
        type Label = crate::partitions::PartitionTuple;
        fn name(&self) -> String {
            "skewed".into()
        }
        fn spec(&self) -> &ParamSpec {
            self.0.spec()
        }
        fn closure(&self) -> Closure {
            self.0.closure()
        }
        fn basis(&self, d: usize) -> Vec<Self::Label> {
            self.0.basis(d)
        }
        fn degree(&self, l: &Self::Label) -> i64 {
            self.0.degree(l)
        }
        fn is_member(&self, l: &Self::Label) -> bool {
            self.0.is_member(l)
        }
        fn highest(&self) -> Option<Self::Label> {
            self.0.highest()
        }
        fn highest_weight(&self) -> Option<Vec<(Mono, i32)>> {
            self.0.highest_weight()
        }
        fn level(&self) -> Mono {
            self.0.level()
        }
        fn psi_factors(&self, l: &Self::Label) -> Vec<(Mono, i32)> {
            self.0.psi_factors(l)
        }
        fn e_raw(&self, l: &Self::Label) -> Vec<super::super::spaces::RawTerm<Self::Label>> {
            self.0.e_raw(l)
        }
        fn f_raw(&self, l: &Self::Label) -> Vec<super::super::spaces::RawTerm<Self::Label>> {
            let mut out = self.0.f_raw(l);
            if l.degree() == 2 {
                for t in &mut out {
                    t.coeff.mono = t.coeff.mono * Mono::q1();
                }
            }
            out
        }
    }

    #[test]
    fn perturbed_coefficients_are_caught() {
        let m = Module::new(Skewed(FockTensor::tensor(ParamSpec::generic(&[2, 3, 5], 1).unwrap())));
        let reports = check_relations(&m, Window::new(3, 2));
        let failed: Vec<&str> = reports.iter().filter(|r| !r.passed()).map(|r| r.name.as_str()).collect();
        assert!(failed.contains(&"rel3") && failed.contains(&"modes"), "{failed:?}");
    }

    #[test]
    fn two_point_examples() {
        assert_eq!(classify_2point(&[2, 3, 5], 1, 0, Some((1, 0))).unwrap().0, Fragility::Undefined);
        assert_eq!(classify_2point(&[2, 3, 5], 1, 0, Some((2, 1))).unwrap().1, Fragility::Zero);
        assert_eq!(classify_2point(&[2, 3, 5, 7], 1, 0, None).unwrap(), (Fragility::Nonzero, Fragility::Nonzero));
    }
}
