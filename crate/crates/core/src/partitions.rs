//! Partitions, constrained partition tuples and the (k,r)-admissible
//! partitions with an infinite vacuum tail.
//!
//! Every enumerator here generates rows directly under the interlacing
//! bounds instead of filtering a product of partition sets; the admissible
//! sets are a thin slice of that product.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::par;

/// A finite partition with its zero tail stripped.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<i64>", into = "Vec<i64>")]
pub struct Partition {
    parts: Vec<i64>,
}

impl Partition {
    pub fn empty() -> Self {
        Self::default()
    }

    /// Builds a partition, rejecting increasing or negative entries.
    /// Trailing zeros are dropped.
    pub fn new(mut parts: Vec<i64>) -> Result<Self> {
        while parts.last() == Some(&0) {
            parts.pop();
        }
        if parts.iter().any(|&x| x < 0) {
            return invalid(format!("negative part in {parts:?}"));
        }
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return invalid(format!("parts not weakly decreasing: {parts:?}"));
        }
        Ok(Self { parts })
    }

    pub(crate) fn from_sorted(parts: Vec<i64>) -> Self {
        debug_assert!(parts.windows(2).all(|w| w[0] >= w[1]));
        debug_assert!(parts.last().is_none_or(|&x| x > 0));
        Self { parts }
    }

    pub fn parts(&self) -> &[i64] {
        &self.parts
    }

    /// Number of nonzero rows.
    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// Row `s` (1-based); zero beyond the stored parts.
    pub fn part(&self, s: usize) -> i64 {
        if s == 0 {
            panic!("rows are 1-based");
        }
        self.parts.get(s - 1).copied().unwrap_or(0)
    }

    pub fn size(&self) -> i64 {
        self.parts.iter().sum()
    }

    /// Rows where a box can be added, 1-based, including the first empty row.
    pub fn addable_rows(&self) -> Vec<usize> {
        (1..=self.len() + 1)
            .filter(|&s| s == 1 || self.part(s - 1) > self.part(s))
            .collect()
    }

    /// Rows where a box can be removed, 1-based.
    pub fn removable_rows(&self) -> Vec<usize> {
        (1..=self.len())
            .filter(|&s| self.part(s) > self.part(s + 1))
            .collect()
    }

    pub fn add_box(&self, s: usize) -> Option<Partition> {
        if s == 0 || (s > 1 && self.part(s - 1) == self.part(s)) {
            return None;
        }
        let mut parts = self.parts.clone();
        if s > parts.len() {
            if s != parts.len() + 1 {
                return None;
            }
            parts.push(0);
        }
        parts[s - 1] += 1;
        Some(Self { parts })
    }

    pub fn remove_box(&self, s: usize) -> Option<Partition> {
        if s == 0 || s > self.len() || self.part(s) == self.part(s + 1) {
            return None;
        }
        let mut parts = self.parts.clone();
        parts[s - 1] -= 1;
        if parts[s - 1] == 0 {
            parts.pop();
        }
        Some(Self { parts })
    }
}

impl TryFrom<Vec<i64>> for Partition {
    type Error = Error;
    fn try_from(v: Vec<i64>) -> Result<Self> {
        Self::new(v)
    }
}

impl From<Partition> for Vec<i64> {
    fn from(p: Partition) -> Self {
        p.parts
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.parts.is_empty() {
            return write!(f, "∅");
        }
        let s: Vec<String> = self.parts.iter().map(|x| x.to_string()).collect();
        write!(f, "({})", s.join(","))
    }
}

/// An n-tuple of partitions; ordered lexicographically entry by entry.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct PartitionTuple {
    pub entries: Vec<Partition>,
}

impl PartitionTuple {
    pub fn new(entries: Vec<Partition>) -> Self {
        Self { entries }
    }

    pub fn empty(n: usize) -> Self {
        Self { entries: vec![Partition::empty(); n] }
    }

    pub fn from_parts(rows: &[&[i64]]) -> Result<Self> {
        rows.iter()
            .map(|r| Partition::new(r.to_vec()))
            .collect::<Result<Vec<_>>>()
            .map(Self::new)
    }

    pub fn n(&self) -> usize {
        self.entries.len()
    }

    pub fn degree(&self) -> i64 {
        self.entries.iter().map(Partition::size).sum()
    }
}

impl fmt::Display for PartitionTuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self.entries.iter().map(|p| p.to_string()).collect();
        write!(f, "[{}]", s.join(", "))
    }
}

/// `λ^(upper)_s ≥ λ^(lower)_{s+b} − a` for all `s ≥ 1` (entry indices 0-based).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PairCondition {
    pub upper: usize,
    pub lower: usize,
    pub a: i64,
    pub b: i64,
}

impl PairCondition {
    pub fn holds(&self, t: &PartitionTuple) -> bool {
        satisfies_pair(&t.entries[self.upper], &t.entries[self.lower], self.a, self.b)
    }
}

/// True iff `λ_s ≥ μ_{s+b} − a` for every `s ≥ 1`.
///
/// Only rows where `μ_{s+b} > a` can fail, so the loop stops at the end of `μ`.
pub fn satisfies_pair(lambda: &Partition, mu: &Partition, a: i64, b: i64) -> bool {
    debug_assert!(a >= 0 && b >= 0);
    let b = b as usize;
    (1..=mu.len().saturating_sub(b)).all(|s| lambda.part(s) >= mu.part(s + b) - a)
}

#[derive(Deserialize)]
struct RawConstraint {
    a: Vec<i64>,
    b: Vec<i64>,
    cyclic: bool,
}

/// Interlacing data `(a, b)` for n-tuples, cyclic (`λ^(n+1) = λ^(1)`) or open.
///
/// The cyclic form keeps all `n` entries of `a` and `b`, so
/// `p' = Σ(a_i+1)` and `p = Σ(b_i+1)`. The open form keeps `n − 1` entries.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawConstraint")]
pub struct TupleConstraint {
    n: usize,
    a: Vec<i64>,
    b: Vec<i64>,
    cyclic: bool,
}

impl TryFrom<RawConstraint> for TupleConstraint {
    type Error = Error;
    fn try_from(r: RawConstraint) -> Result<Self> {
        if r.cyclic {
            Self::cyclic(r.a, r.b)
        } else {
            Self::open(r.a, r.b)
        }
    }
}

fn check_nonneg(name: &str, v: &[i64]) -> Result<()> {
    if v.iter().any(|&x| x < 0) {
        return invalid(format!("{name} has a negative entry: {v:?}"));
    }
    Ok(())
}

impl TupleConstraint {
    /// Cyclic constraint from all `n` entries of `a` and `b`.
    pub fn cyclic(a: Vec<i64>, b: Vec<i64>) -> Result<Self> {
        if a.len() != b.len() {
            return Err(Error::Arity { expected: a.len(), got: b.len() });
        }
        if a.len() < 2 {
            return invalid("cyclic constraint needs n >= 2");
        }
        check_nonneg("a", &a)?;
        check_nonneg("b", &b)?;
        Ok(Self { n: a.len(), a, b, cyclic: true })
    }

    /// Cyclic constraint from the first `n − 1` entries and `(p', p)`;
    /// the last entries are `a_n = p' − 1 − Σ_{i<n}(a_i+1)` and likewise for `b_n`.
    pub fn cyclic_from_heads(a: &[i64], b: &[i64], p_prime: i64, p: i64) -> Result<Self> {
        if a.len() != b.len() {
            return Err(Error::Arity { expected: a.len(), got: b.len() });
        }
        let an = p_prime - 1 - a.iter().map(|x| x + 1).sum::<i64>();
        let bn = p - 1 - b.iter().map(|x| x + 1).sum::<i64>();
        if an < 0 || bn < 0 {
            return invalid(format!("(p',p)=({p_prime},{p}) too small for heads a={a:?}, b={b:?}"));
        }
        let mut fa = a.to_vec();
        fa.push(an);
        let mut fb = b.to_vec();
        fb.push(bn);
        Self::cyclic(fa, fb)
    }

    /// Open (non-cyclic) constraint with `n − 1` entries each.
    pub fn open(a: Vec<i64>, b: Vec<i64>) -> Result<Self> {
        if a.len() != b.len() {
            return Err(Error::Arity { expected: a.len(), got: b.len() });
        }
        if a.is_empty() {
            return invalid("open constraint needs n >= 2");
        }
        check_nonneg("a", &a)?;
        check_nonneg("b", &b)?;
        Ok(Self { n: a.len() + 1, a, b, cyclic: false })
    }

    pub fn n(&self) -> usize {
        self.n
    }
    pub fn a(&self) -> &[i64] {
        &self.a
    }
    pub fn b(&self) -> &[i64] {
        &self.b
    }
    pub fn is_cyclic(&self) -> bool {
        self.cyclic
    }

    /// `p' = Σ(a_i+1)` for a cyclic constraint.
    pub fn p_prime(&self) -> Option<i64> {
        self.cyclic.then(|| self.a.iter().map(|x| x + 1).sum())
    }

    /// `p = Σ(b_i+1)` for a cyclic constraint.
    pub fn p(&self) -> Option<i64> {
        self.cyclic.then(|| self.b.iter().map(|x| x + 1).sum())
    }

    /// The same constraint with `a` replaced (cyclic only; `n` unchanged).
    pub fn with_a(&self, a: Vec<i64>) -> Result<Self> {
        if self.cyclic {
            Self::cyclic(a, self.b.clone())
        } else {
            Self::open(a, self.b.clone())
        }
    }

    pub fn conditions(&self) -> Vec<PairCondition> {
        let mut out: Vec<PairCondition> = (0..self.n - 1)
            .map(|i| PairCondition { upper: i, lower: i + 1, a: self.a[i], b: self.b[i] })
            .collect();
        if self.cyclic {
            out.push(PairCondition {
                upper: self.n - 1,
                lower: 0,
                a: self.a[self.n - 1],
                b: self.b[self.n - 1],
            });
        }
        out
    }

    /// The two-entry constraint governing entries `i < j` (0-based):
    /// `a_ij = Σ_{l=i}^{j−1}(a_l+1) − 1`, same for `b`; cyclic keeps `(p', p)`.
    pub fn pair_constraint(&self, i: usize, j: usize) -> Result<TupleConstraint> {
        if !(i < j && j < self.n) {
            return invalid(format!("need i < j < n, got ({i},{j})"));
        }
        let aij = self.a[i..j].iter().map(|x| x + 1).sum::<i64>() - 1;
        let bij = self.b[i..j].iter().map(|x| x + 1).sum::<i64>() - 1;
        if self.cyclic {
            let pp = self.p_prime().unwrap();
            let p = self.p().unwrap();
            Self::cyclic_from_heads(&[aij], &[bij], pp, p)
        } else {
            Self::open(vec![aij], vec![bij])
        }
    }
}

/// Membership of a tuple in the constrained set.
pub fn is_member(t: &PartitionTuple, c: &TupleConstraint) -> Result<bool> {
    if t.n() != c.n() {
        return Err(Error::Arity { expected: c.n(), got: t.n() });
    }
    Ok(c.conditions().iter().all(|cond| cond.holds(t)))
}

/// Generates partitions row by row under per-row bounds.
struct RowGen<'a> {
    upper: &'a [Option<i64>],
    lower: &'a [i64],
    /// `suffix[t] = Σ_{s≥t} max(lower[s], 0)`
    suffix: Vec<i64>,
    exact: bool,
}

impl<'a> RowGen<'a> {
    fn new(upper: &'a [Option<i64>], lower: &'a [i64], exact: bool) -> Self {
        let mut suffix = vec![0; lower.len() + 1];
        for t in (0..lower.len()).rev() {
            suffix[t] = suffix[t + 1] + lower[t].max(0);
        }
        Self { upper, lower, suffix, exact }
    }

    fn run(&self, budget: i64, out: &mut dyn FnMut(&[i64])) {
        let mut rows = Vec::new();
        self.rec(0, i64::MAX, budget, &mut rows, out);
    }

    fn rec(&self, t: usize, prev: i64, rem: i64, rows: &mut Vec<i64>, out: &mut dyn FnMut(&[i64])) {
        if rem < self.suffix[t] {
            return;
        }
        let close = |rows: &[i64], out: &mut dyn FnMut(&[i64])| {
            if !self.exact || rem == 0 {
                out(rows);
            }
        };
        if t == self.upper.len() {
            close(rows, out);
            return;
        }
        let mut hi = prev.min(rem - self.suffix[t + 1]);
        if let Some(u) = self.upper[t] {
            hi = hi.min(u);
        }
        let lo = self.lower[t].max(1);
        let mut v = hi;
        while v >= lo {
            rows.push(v);
            self.rec(t + 1, v, rem - v, rows, out);
            rows.pop();
            v -= 1;
        }
        // stopping here means every later row is zero
        if self.suffix[t] == 0 {
            close(rows, out);
        }
    }
}

/// Enumerates n-tuples of partitions satisfying `conds`, entry `i` having at
/// most `caps[i]` rows, with total degree exactly `d`. Unsorted.
fn tuples_of_degree(conds: &[PairCondition], caps: &[usize], d: i64) -> Vec<PartitionTuple> {
    let n = caps.len();
    let mut out = Vec::new();
    let mut current: Vec<Partition> = Vec::with_capacity(n);
    tuple_rec(conds, caps, d, &mut current, &mut out);
    debug_assert!(out.iter().all(|t| t.n() == n));
    out
}

fn tuple_rec(
    conds: &[PairCondition],
    caps: &[usize],
    rem: i64,
    current: &mut Vec<Partition>,
    out: &mut Vec<PartitionTuple>,
) {
    let x = current.len();
    let n = caps.len();
    if x == n {
        out.push(PartitionTuple::new(current.clone()));
        return;
    }
    let cap = caps[x].min(rem.max(0) as usize);
    let mut upper: Vec<Option<i64>> = vec![None; cap];
    let mut lower: Vec<i64> = vec![0; cap];
    for c in conds {
        if c.lower == x && c.upper < x {
            let src = &current[c.upper];
            for (t, slot) in upper.iter_mut().enumerate() {
                let row = t as i64 + 1;
                if row - c.b >= 1 {
                    let bound = src.part((row - c.b) as usize) + c.a;
                    *slot = Some(slot.map_or(bound, |u| u.min(bound)));
                }
            }
        } else if c.upper == x && c.lower < x {
            let src = &current[c.lower];
            for s in 1..=src.len() {
                let need = src.part(s + c.b as usize) - c.a;
                if need > 0 {
                    if s > cap {
                        return;
                    }
                    lower[s - 1] = lower[s - 1].max(need);
                }
            }
        }
    }
    let gen = RowGen::new(&upper, &lower, x + 1 == n);
    let mut found: Vec<Partition> = Vec::new();
    gen.run(rem, &mut |rows| found.push(Partition::from_sorted(rows.to_vec())));
    for p in found {
        let size = p.size();
        current.push(p);
        tuple_rec(conds, caps, rem - size, current, out);
        current.pop();
    }
}

fn sorted(mut v: Vec<PartitionTuple>) -> Vec<PartitionTuple> {
    v.sort();
    v
}

/// Every member of the constrained set with degree at most `d_max`, as
/// `(degree, tuple)` in degree-major then lexicographic order.
pub fn enumerate_by_degree(c: &TupleConstraint, d_max: usize) -> Vec<(usize, PartitionTuple)> {
    let caps = vec![d_max; c.n()];
    enumerate_with(&c.conditions(), &caps, d_max)
}

/// All n-tuples with total degree at most `d_max`, no interlacing.
pub fn enumerate_unconstrained(n: usize, d_max: usize) -> Vec<(usize, PartitionTuple)> {
    enumerate_with(&[], &vec![d_max; n], d_max)
}

/// All partitions of `d`, in lexicographic order.
pub fn partitions_of(d: usize) -> Vec<Partition> {
    sorted(tuples_of_degree(&[], &[d], d as i64))
        .into_iter()
        .map(|mut t| t.entries.pop().unwrap())
        .collect()
}

fn enumerate_with(conds: &[PairCondition], caps: &[usize], d_max: usize) -> Vec<(usize, PartitionTuple)> {
    let degrees: Vec<usize> = (0..=d_max).collect();
    let slices = par::map(&degrees, |&d| sorted(tuples_of_degree(conds, caps, d as i64)));
    degrees
        .into_iter()
        .zip(slices)
        .flat_map(|(d, ts)| ts.into_iter().map(move |t| (d, t)))
        .collect()
}

/// The finitized set: members whose `i`-th partition has at most `big_n[i]`
/// rows, truncated at degree `d_max`. Empty when some `big_n[i] < 0`.
pub fn enumerate_finitized(
    c: &TupleConstraint,
    big_n: &[i64],
    d_max: usize,
) -> Result<Vec<(usize, PartitionTuple)>> {
    if big_n.len() != c.n() {
        return Err(Error::Arity { expected: c.n(), got: big_n.len() });
    }
    if big_n.iter().any(|&x| x < 0) {
        return Ok(Vec::new());
    }
    let caps: Vec<usize> = big_n.iter().map(|&x| x as usize).collect();
    Ok(enumerate_with(&c.conditions(), &caps, d_max))
}

/// The vacuum pattern `Λ^0_{νk+i+1} = −νr − c_i`, `c_i = a_1 + … + a_i`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VacuumPattern {
    k: usize,
    r: i64,
    a: Vec<i64>,
    c: Vec<i64>,
}

impl VacuumPattern {
    pub fn new(k: usize, r: i64, a: Vec<i64>) -> Result<Self> {
        if k == 0 {
            return invalid("k must be at least 1");
        }
        if a.len() != k {
            return Err(Error::Arity { expected: k, got: a.len() });
        }
        check_nonneg("a", &a)?;
        if a.iter().sum::<i64>() != r {
            return invalid(format!("sum of a = {:?} must equal r = {r}", a));
        }
        let mut c = vec![0; k];
        for i in 1..k {
            c[i] = c[i - 1] + a[i - 1];
        }
        Ok(Self { k, r, a, c })
    }

    pub fn k(&self) -> usize {
        self.k
    }
    pub fn r(&self) -> i64 {
        self.r
    }
    pub fn a(&self) -> &[i64] {
        &self.a
    }

    /// Partial sums `c_0 = 0, c_1 = a_1, …, c_{k−1}`.
    pub fn c(&self) -> &[i64] {
        &self.c
    }

    /// `Λ^0_j`, `j ≥ 1`.
    pub fn entry(&self, j: usize) -> i64 {
        assert!(j >= 1, "rows are 1-based");
        let nu = ((j - 1) / self.k) as i64;
        let i = (j - 1) % self.k;
        -nu * self.r - self.c[i]
    }
}

#[derive(Serialize, Deserialize)]
struct RawTailed {
    head: Vec<i64>,
    k: usize,
    r: i64,
    a: Vec<i64>,
}

/// A partition `Λ` that agrees with the vacuum pattern beyond its head.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawTailed", into = "RawTailed")]
pub struct TailedPartition {
    vacuum: VacuumPattern,
    head: Vec<i64>,
}

impl PartialOrd for TailedPartition {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for TailedPartition {
    fn cmp(&self, other: &Self) -> Ordering {
        self.deviations().cmp(&other.deviations()).then_with(|| self.vacuum.cmp(&other.vacuum))
    }
}

impl TryFrom<RawTailed> for TailedPartition {
    type Error = Error;
    fn try_from(r: RawTailed) -> Result<Self> {
        let vac = VacuumPattern::new(r.k, r.r, r.a)?;
        let t = Self::new(vac, r.head);
        for j in 1..t.head.len() + t.vacuum.k + 1 {
            if t.entry(j) < t.entry(j + 1) {
                return invalid(format!("not weakly decreasing at row {j}"));
            }
        }
        Ok(t)
    }
}

impl From<TailedPartition> for RawTailed {
    fn from(t: TailedPartition) -> Self {
        RawTailed { head: t.head, k: t.vacuum.k, r: t.vacuum.r, a: t.vacuum.a }
    }
}

impl TailedPartition {
    /// The partition whose first entries are `head` and which follows the
    /// vacuum afterwards. Head entries matching the vacuum at the end are trimmed.
    pub fn new(vacuum: VacuumPattern, mut head: Vec<i64>) -> Self {
        while let Some(&x) = head.last() {
            if x == vacuum.entry(head.len()) {
                head.pop();
            } else {
                break;
            }
        }
        Self { vacuum, head }
    }

    pub fn vacuum_of(vacuum: &VacuumPattern) -> Self {
        Self { vacuum: vacuum.clone(), head: Vec::new() }
    }

    /// Builds `Λ` from deviations `Λ_j − Λ^0_j`.
    pub fn from_deviations(vacuum: &VacuumPattern, dev: &[i64]) -> Self {
        let head = dev.iter().enumerate().map(|(j, d)| d + vacuum.entry(j + 1)).collect();
        Self::new(vacuum.clone(), head)
    }

    pub fn vacuum(&self) -> &VacuumPattern {
        &self.vacuum
    }

    pub fn head(&self) -> &[i64] {
        &self.head
    }

    /// `Λ_j`, 1-based.
    pub fn entry(&self, j: usize) -> i64 {
        assert!(j >= 1, "rows are 1-based");
        self.head.get(j - 1).copied().unwrap_or_else(|| self.vacuum.entry(j))
    }

    /// `Λ_j − Λ^0_j` for the head rows.
    pub fn deviations(&self) -> Vec<i64> {
        (1..=self.head.len()).map(|j| self.entry(j) - self.vacuum.entry(j)).collect()
    }

    /// `|Λ − Λ^0|`.
    pub fn degree(&self) -> i64 {
        self.deviations().iter().sum()
    }

    /// Number of rows after which `Λ` is pure vacuum.
    pub fn support_len(&self) -> usize {
        self.head.len()
    }

    fn with_entry(&self, j: usize, delta: i64) -> Self {
        let mut head = self.head.clone();
        while head.len() < j {
            head.push(self.vacuum.entry(head.len() + 1));
        }
        head[j - 1] += delta;
        Self::new(self.vacuum.clone(), head)
    }

    pub fn add_box(&self, j: usize) -> Self {
        self.with_entry(j, 1)
    }

    pub fn remove_box(&self, j: usize) -> Self {
        self.with_entry(j, -1)
    }
}

impl fmt::Display for TailedPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = (1..=self.head.len() + self.vacuum.k)
            .map(|j| self.entry(j).to_string())
            .collect();
        write!(f, "({},…)", s.join(","))
    }
}

/// Generator for the vacuum pattern; see [`VacuumPattern`].
pub fn vacuum_partition(k: usize, r: i64, a: &[i64]) -> Result<VacuumPattern> {
    VacuumPattern::new(k, r, a.to_vec())
}

/// Weakly decreasing with `Λ_j − Λ_{j+k} ≥ r` for all `j`.
/// Only rows up to `head + k` can fail.
pub fn is_kr_admissible(l: &TailedPartition, k: usize, r: i64) -> bool {
    let last = l.support_len() + k.max(1);
    (1..=last).all(|j| l.entry(j) >= l.entry(j + 1) && l.entry(j) - l.entry(j + k) >= r)
}

/// `(k,r)`-admissible partitions of deviation degree at most `d_max`, sorted
/// by degree then deviation vector.
pub fn enumerate_kr(vacuum: &VacuumPattern, d_max: usize) -> Vec<(usize, TailedPartition)> {
    let mut found: Vec<Vec<i64>> = vec![Vec::new()];
    let mut dev = Vec::new();
    kr_rec(vacuum, d_max as i64, 0, &mut dev, &mut found);
    let mut out: Vec<(usize, TailedPartition)> = found
        .into_iter()
        .map(|d| {
            let t = TailedPartition::from_deviations(vacuum, &d);
            (t.degree() as usize, t)
        })
        .collect();
    out.sort();
    out
}

/// Deviations `δ_j ≥ 0` with `δ_{j+1} ≤ δ_j + Λ^0_j − Λ^0_{j+1}` and
/// `δ_{j+k} ≤ δ_j`. Each vector is recorded when its last nonzero entry is
/// placed; after `k` consecutive zeros nothing nonzero can follow.
fn kr_rec(vac: &VacuumPattern, rem: i64, zeros: usize, dev: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
    let k = vac.k;
    let j = dev.len() + 1;
    let mut hi = rem;
    if j > 1 {
        hi = hi.min(dev[j - 2] + vac.entry(j - 1) - vac.entry(j));
    }
    if j > k {
        hi = hi.min(dev[j - 1 - k]);
    }
    for v in 0..=hi {
        if v == 0 && zeros + 1 >= k {
            continue;
        }
        dev.push(v);
        if v > 0 {
            out.push(dev.clone());
        }
        kr_rec(vac, rem - v, if v == 0 { zeros + 1 } else { 0 }, dev, out);
        dev.pop();
    }
}

/// The cyclic constraint matched to `(k = n, r, a)`: `p' = n + r`, `p = n + 1`,
/// so `b = (0, …, 0)` on the first `n − 1` entries and the wrap entry is 1.
pub fn iota_domain(n: usize, r: i64, a: &[i64]) -> Result<TupleConstraint> {
    if a.len() != n {
        return Err(Error::Arity { expected: n, got: a.len() });
    }
    if a.iter().sum::<i64>() != r {
        return invalid(format!("sum of a = {a:?} must equal r = {r}"));
    }
    let mut b = vec![0; n];
    b[n - 1] = 1;
    TupleConstraint::cyclic(a.to_vec(), b)
}

/// Interleaves a tuple into one partition: `Λ_{ns+i} = λ^(i)_{s+1} + Λ^0_{ns+i}`.
pub fn iota(t: &PartitionTuple, k: usize, r: i64, a: &[i64]) -> Result<TailedPartition> {
    let dom = iota_domain(k, r, a)?;
    if !is_member(t, &dom)? {
        return invalid(format!("{t} is not in the interleaving domain for a = {a:?}"));
    }
    let vac = VacuumPattern::new(k, r, a.to_vec())?;
    let rows = t.entries.iter().map(Partition::len).max().unwrap_or(0);
    let mut dev = vec![0; rows * k];
    for (i, lam) in t.entries.iter().enumerate() {
        for s in 0..lam.len() {
            dev[k * s + i] = lam.part(s + 1);
        }
    }
    let out = TailedPartition::from_deviations(&vac, &dev);
    if !is_kr_admissible(&out, k, r) {
        return Err(Error::Integrality(format!("image of {t} is not admissible")));
    }
    Ok(out)
}

/// Inverse of [`iota`].
pub fn iota_inverse(l: &TailedPartition) -> Result<PartitionTuple> {
    let vac = l.vacuum();
    let k = vac.k;
    if !is_kr_admissible(l, k, vac.r) {
        return invalid(format!("{l} is not admissible"));
    }
    let dev = l.deviations();
    let mut entries = Vec::with_capacity(k);
    for i in 0..k {
        let rows: Vec<i64> = dev.iter().skip(i).step_by(k).copied().collect();
        entries.push(Partition::new(rows)?);
    }
    let t = PartitionTuple::new(entries);
    if !is_member(&t, &iota_domain(k, vac.r, vac.a())?)? {
        return invalid(format!("{l} does not come from the b = 0 cyclic set"));
    }
    Ok(t)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(v: &[i64]) -> Partition {
        Partition::new(v.to_vec()).unwrap()
    }

    fn tup(rows: &[&[i64]]) -> PartitionTuple {
        PartitionTuple::from_parts(rows).unwrap()
    }

    fn ising() -> TupleConstraint {
        TupleConstraint::cyclic(vec![0, 2], vec![0, 1]).unwrap()
    }

    #[test]
    fn normalizes_zero_tail() {
        assert_eq!(p(&[2, 1, 0, 0]), p(&[2, 1]));
        assert!(Partition::new(vec![1, 2]).is_err());
        assert!(Partition::new(vec![1, -1]).is_err());
    }

    #[test]
    fn pair_examples() {
        assert!(satisfies_pair(&p(&[2, 1]), &p(&[2, 1]), 0, 0));
        assert!(!satisfies_pair(&p(&[]), &p(&[1]), 0, 0));
        assert!(satisfies_pair(&p(&[1]), &p(&[3, 1]), 2, 0));
    }

    #[test]
    fn heads_constructor_matches_full() {
        let c = TupleConstraint::cyclic_from_heads(&[0], &[0], 4, 3).unwrap();
        assert_eq!(c, ising());
        assert_eq!((c.p_prime(), c.p()), (Some(4), Some(3)));
        assert!(TupleConstraint::cyclic_from_heads(&[3], &[0], 4, 3).is_err());
    }

    #[test]
    fn membership_examples() {
        let c = ising();
        assert!(is_member(&tup(&[&[1], &[]]), &c).unwrap());
        assert!(!is_member(&tup(&[&[], &[1]]), &c).unwrap());
        assert!(is_member(&PartitionTuple::empty(2), &c).unwrap());
        assert!(is_member(&PartitionTuple::empty(3), &c).is_err());
    }

    #[test]
    fn small_enumerations() {
        let c = ising();
        assert_eq!(enumerate_by_degree(&c, 0), vec![(0, PartitionTuple::empty(2))]);
        let d1: Vec<_> = enumerate_by_degree(&c, 1).into_iter().filter(|x| x.0 == 1).collect();
        assert_eq!(d1, vec![(1, tup(&[&[1], &[]]))]);
        let d2: Vec<_> = enumerate_by_degree(&c, 2)
            .into_iter()
            .filter(|x| x.0 == 2)
            .map(|x| x.1)
            .collect();
        assert_eq!(d2, vec![tup(&[&[1], &[1]]), tup(&[&[1, 1], &[]]), tup(&[&[2], &[]])]);
    }

    #[test]
    fn finitized_examples() {
        let c = ising();
        assert_eq!(enumerate_finitized(&c, &[0, 0], 5).unwrap(), vec![(0, PartitionTuple::empty(2))]);
        assert!(enumerate_finitized(&c, &[2, -1], 5).unwrap().is_empty());
        let got: Vec<_> = enumerate_finitized(&c, &[1, 0], 4).unwrap().into_iter().map(|x| x.1).collect();
        let want: Vec<_> = (0..=4).map(|m| tup(&[&[m], &[]])).collect();
        assert_eq!(got, want);
    }

    #[test]
    fn partition_counts() {
        let counts: Vec<usize> = (0..8).map(|d| partitions_of(d).len()).collect();
        assert_eq!(counts, vec![1, 1, 2, 3, 5, 7, 11, 15]);
    }

    #[test]
    fn vacuum_examples() {
        let v = vacuum_partition(2, 3, &[1, 2]).unwrap();
        let first: Vec<i64> = (1..=6).map(|j| v.entry(j)).collect();
        assert_eq!(first, vec![0, -1, -3, -4, -6, -7]);
        let v1 = vacuum_partition(1, 1, &[1]).unwrap();
        assert_eq!((1..=3).map(|j| v1.entry(j)).collect::<Vec<_>>(), vec![0, -1, -2]);
        assert!(vacuum_partition(2, 4, &[1, 2]).is_err());
    }

    #[test]
    fn kr_examples() {
        let v = vacuum_partition(2, 3, &[1, 2]).unwrap();
        let l0 = TailedPartition::vacuum_of(&v);
        assert!(is_kr_admissible(&l0, 2, 3));
        let l = TailedPartition::new(v.clone(), vec![2]);
        assert_eq!((1..=4).map(|j| l.entry(j)).collect::<Vec<_>>(), vec![2, -1, -3, -4]);
        assert!(is_kr_admissible(&l, 2, 3));
        let bad = TailedPartition::new(v, vec![0, -1, -1]);
        assert!(!is_kr_admissible(&bad, 2, 3));
    }

    #[test]
    fn iota_examples() {
        let a = [1, 2];
        let l = iota(&PartitionTuple::empty(2), 2, 3, &a).unwrap();
        assert!(l.head().is_empty());
        let t = tup(&[&[2], &[1]]);
        let l = iota(&t, 2, 3, &a).unwrap();
        assert_eq!((1..=4).map(|j| l.entry(j)).collect::<Vec<_>>(), vec![2, 0, -3, -4]);
        assert_eq!(iota_inverse(&l).unwrap(), t);
    }

    #[test]
    fn iota_domain_wraps_with_shift() {
        // λ^(2)_s ≥ λ^(1)_{s+1} − a_2: a single box in the first entry is allowed
        let c = iota_domain(2, 1, &[1, 0]).unwrap();
        assert_eq!((c.p_prime(), c.p()), (Some(3), Some(3)));
        assert!(is_member(&tup(&[&[1], &[]]), &c).unwrap());
        let vac = VacuumPattern::new(2, 1, vec![1, 0]).unwrap();
        for d in 0..=5 {
            let kr = enumerate_kr(&vac, d).into_iter().filter(|(e, _)| *e == d).count();
            assert_eq!(enumerate_by_degree(&c, d).into_iter().filter(|(e, _)| *e == d).count(), kr);
        }
    }

    #[test]
    fn tailed_json_shape() {
        let v = vacuum_partition(2, 3, &[1, 2]).unwrap();
        let l = TailedPartition::new(v, vec![2]);
        let js = serde_json::to_string(&l).unwrap();
        assert_eq!(js, r#"{"head":[2],"k":2,"r":3,"a":[1,2]}"#);
        let back: TailedPartition = serde_json::from_str(&js).unwrap();
        assert_eq!(back, l);
        let t = tup(&[&[2, 1], &[1]]);
        assert_eq!(serde_json::to_string(&t).unwrap(), "[[2,1],[1]]");
    }
}
