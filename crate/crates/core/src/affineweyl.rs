//! sl_n weights, the symmetric group action, and the alternating lattice sums
//! over `S_n ⋉ Q`.
//!
//! Internally every weight is lifted to an integer (or rational) vector in
//! `Z^n` modulo the all-ones vector: `ω_i ↦ ε_1 + … + ε_i`. Roots are sum-zero
//! vectors, so pairings between a root and a lift are plain dot products and
//! the Gram form on roots is the Euclidean norm. The latter makes the lattice
//! truncation radius an elementary quadratic bound.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::Rational64;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::characters::{char_direct, char_finitized, euler_power};
use crate::error::{invalid, Error, Result};
use crate::par;
use crate::partitions::TupleConstraint;
use crate::qseries::{pochhammer, pochhammer_inverse, QSeries};

/// A classical weight in fundamental-weight coordinates `ω_1..ω_{n−1}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ClassicalWeight {
    pub omega: Vec<Rational64>,
}

/// An element of the root lattice in simple-root coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RootVector {
    pub alpha: Vec<i64>,
}

impl ClassicalWeight {
    pub fn new(omega: Vec<Rational64>) -> Self {
        Self { omega }
    }

    pub fn from_ints(omega: &[i64]) -> Self {
        Self { omega: omega.iter().map(|&x| Rational64::from_integer(x)).collect() }
    }

    pub fn zero(n: usize) -> Self {
        Self::from_ints(&vec![0; n - 1])
    }

    /// `ω_i`; `ω_0` and `ω_n` are the zero weight.
    pub fn fundamental(n: usize, i: usize) -> Self {
        let mut v = vec![0; n - 1];
        if (1..n).contains(&i) {
            v[i - 1] = 1;
        }
        Self::from_ints(&v)
    }

    /// `ρ = ω_1 + … + ω_{n−1}`.
    pub fn rho(n: usize) -> Self {
        Self::from_ints(&vec![1; n - 1])
    }

    pub fn n(&self) -> usize {
        self.omega.len() + 1
    }

    pub fn add(&self, o: &Self) -> Self {
        Self { omega: self.omega.iter().zip(&o.omega).map(|(a, b)| a + b).collect() }
    }

    pub fn sub(&self, o: &Self) -> Self {
        Self { omega: self.omega.iter().zip(&o.omega).map(|(a, b)| a - b).collect() }
    }

    fn lift(&self) -> Vec<Rational64> {
        let n = self.n();
        let mut out = vec![Rational64::zero(); n];
        for k in (0..n - 1).rev() {
            out[k] = out[k + 1] + self.omega[k];
        }
        out
    }

    fn from_lift(l: &[Rational64]) -> Self {
        Self { omega: l.windows(2).map(|w| w[0] - w[1]).collect() }
    }

    fn int_lift(&self) -> Result<Vec<i64>> {
        self.lift()
            .into_iter()
            .map(|x| {
                if x.is_integer() {
                    Ok(x.to_integer())
                } else {
                    Err(Error::Integrality(format!("weight {:?} is not integral", self.omega)))
                }
            })
            .collect()
    }

    /// Dominant with `Σ coords ≤ level`.
    pub fn is_dominant_of_level(&self, level: i64) -> bool {
        let l = Rational64::from_integer(level);
        self.omega.iter().all(|x| !x.is_negative()) && self.omega.iter().sum::<Rational64>() <= l
    }
}

impl RootVector {
    pub fn simple(n: usize, i: usize) -> Self {
        let mut v = vec![0; n - 1];
        v[i - 1] = 1;
        Self { alpha: v }
    }

    fn eps(&self) -> Vec<i64> {
        let n = self.alpha.len() + 1;
        (0..n)
            .map(|k| {
                let cur = if k < n - 1 { self.alpha[k] } else { 0 };
                let prev = if k > 0 { self.alpha[k - 1] } else { 0 };
                cur - prev
            })
            .collect()
    }
}

/// Anything with coordinates in `Q^n / Q(1,…,1)`.
pub trait Epsilon {
    fn epsilon(&self) -> Vec<Rational64>;
}

impl Epsilon for ClassicalWeight {
    fn epsilon(&self) -> Vec<Rational64> {
        self.lift()
    }
}

impl Epsilon for RootVector {
    fn epsilon(&self) -> Vec<Rational64> {
        self.eps().into_iter().map(Rational64::from_integer).collect()
    }
}

/// The invariant form with `(α_i, α_j)` the Cartan matrix and `(ω_i, α_j) = δ_ij`.
pub fn gram_pairing(x: &impl Epsilon, y: &impl Epsilon) -> Result<Rational64> {
    let (u, v) = (x.epsilon(), y.epsilon());
    if u.len() != v.len() {
        return Err(Error::Arity { expected: u.len(), got: v.len() });
    }
    let n = Rational64::from_integer(u.len() as i64);
    let dot: Rational64 = u.iter().zip(&v).map(|(a, b)| a * b).sum();
    let su: Rational64 = u.iter().sum();
    let sv: Rational64 = v.iter().sum();
    Ok(dot - su * sv / n)
}

/// A permutation of `{0..n−1}` in one-line notation, `perm[k] = σ(k)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Permutation(pub Vec<usize>);

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Self((0..n).collect())
    }

    /// The simple transposition of `i` and `i + 1` (1-based `i`).
    pub fn simple(n: usize, i: usize) -> Self {
        let mut p = Self::identity(n);
        p.0.swap(i - 1, i);
        p
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.0.len()];
        for (k, &s) in self.0.iter().enumerate() {
            inv[s] = k;
        }
        Self(inv)
    }

    pub fn sign(&self) -> i64 {
        let p = &self.0;
        let mut inversions = 0;
        for i in 0..p.len() {
            for j in i + 1..p.len() {
                if p[i] > p[j] {
                    inversions += 1;
                }
            }
        }
        if inversions % 2 == 0 {
            1
        } else {
            -1
        }
    }

    /// `(σx)_{σ(k)} = x_k`.
    pub fn act<T: Clone>(&self, x: &[T]) -> Vec<T> {
        let mut out = x.to_vec();
        for (k, &s) in self.0.iter().enumerate() {
            out[s] = x[k].clone();
        }
        out
    }

    /// All of `S_n` in lexicographic order.
    pub fn all(n: usize) -> Vec<Permutation> {
        let mut out = Vec::new();
        let mut cur = Vec::with_capacity(n);
        let mut used = vec![false; n];
        fn rec(n: usize, cur: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Permutation>) {
            if cur.len() == n {
                out.push(Permutation(cur.clone()));
                return;
            }
            for k in 0..n {
                if !used[k] {
                    used[k] = true;
                    cur.push(k);
                    rec(n, cur, used, out);
                    cur.pop();
                    used[k] = false;
                }
            }
        }
        rec(n, &mut cur, &mut used, &mut out);
        out
    }
}

pub fn weyl_act(sigma: &Permutation, x: &ClassicalWeight) -> Result<ClassicalWeight> {
    if sigma.0.len() != x.n() {
        return Err(Error::Arity { expected: x.n(), got: sigma.0.len() });
    }
    Ok(ClassicalWeight::from_lift(&sigma.act(&x.lift())))
}

/// The candidate readings of the lattice sum that the calibration sweep
/// chooses between. Each one is a partial substitution into the printed
/// formula; applied globally, the `σ ↦ σ⁻¹` and `α ↦ −α` changes would be
/// symmetries of the full sum and could not be told apart.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Convention {
    /// Roles as printed: `X = ξ+ρ` is moved by `σ`, `Y = η+ρ` is fixed.
    Printed,
    /// `η` and `ξ` exchanged.
    Swapped,
    /// `σ⁻¹` in the constant term `(X − σ⁻¹X, Y)` only.
    InverseAction,
    /// `X − σX − pα` in the finitization shifts only.
    FlippedTranslation,
}

impl Convention {
    pub const ALL: [Convention; 4] =
        [Convention::Printed, Convention::Swapped, Convention::InverseAction, Convention::FlippedTranslation];

    pub fn key(&self) -> &'static str {
        match self {
            Convention::Printed => "printed",
            Convention::Swapped => "swapped",
            Convention::InverseAction => "inverse-action",
            Convention::FlippedTranslation => "flipped-translation",
        }
    }

    pub fn from_key(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|c| c.key() == s)
            .ok_or_else(|| Error::Invalid(format!("unknown convention key {s:?}")))
    }
}

impl fmt::Display for Convention {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.key())
    }
}

/// Integer data shared by the lattice sums: `X`, `Y` lifted to `Z^n`.
struct SumData {
    n: usize,
    pp: i64,
    p: i64,
    x: Vec<i64>,
    y: Vec<i64>,
    conv: Convention,
}

fn dot(u: &[i64], v: &[i64]) -> i64 {
    u.iter().zip(v).map(|(a, b)| a * b).sum()
}

impl SumData {
    fn new(pp: i64, p: i64, eta: &ClassicalWeight, xi: &ClassicalWeight, conv: Convention) -> Result<Self> {
        let n = eta.n();
        if xi.n() != n {
            return Err(Error::Arity { expected: n, got: xi.n() });
        }
        if n < 2 {
            return invalid("n must be at least 2");
        }
        let rho = ClassicalWeight::rho(n);
        let (eta, xi) = match conv {
            Convention::Swapped => (xi, eta),
            _ => (eta, xi),
        };
        let x = xi.add(&rho).int_lift()?;
        let y = eta.add(&rho).int_lift()?;
        Ok(Self { n, pp, p, x, y, conv })
    }

    fn sigma_x(&self, s: &Permutation) -> Vec<i64> {
        s.act(&self.x)
    }

    /// The part of the exponent that does not involve `α`.
    fn constant(&self, s: &Permutation) -> i64 {
        let moved = match self.conv {
            Convention::InverseAction => s.inverse().act(&self.x),
            _ => s.act(&self.x),
        };
        let diff: Vec<i64> = self.x.iter().zip(&moved).map(|(a, b)| a - b).collect();
        dot(&diff, &self.y)
    }

    /// `p'σX − pY`, the linear coefficient against `α`.
    fn linear(&self, s: &Permutation) -> Vec<i64> {
        let sx = self.sigma_x(s);
        sx.iter().zip(&self.y).map(|(a, b)| self.pp * a - self.p * b).collect()
    }

    fn exponent(&self, s: &Permutation, alpha: &[i64]) -> i64 {
        let sq: i64 = alpha.iter().map(|a| a * a).sum();
        debug_assert!(sq % 2 == 0);
        self.pp * self.p * sq / 2 + dot(&self.linear(s), alpha) + self.constant(s)
    }

    /// `d_i = (w*ξ − ξ, ω_i − ω_{i−1})`.
    fn shifts(&self, s: &Permutation, alpha: &[i64]) -> Vec<i64> {
        let sx = self.sigma_x(s);
        let sign = if self.conv == Convention::FlippedTranslation { -1 } else { 1 };
        (0..self.n).map(|k| sx[k] - self.x[k] + sign * self.p * alpha[k]).collect()
    }
}

/// Calls `f` on every integer vector with `lo[k] ≤ v[k] ≤ hi[k]` and `Σv = 0`.
fn for_each_sum_zero(lo: &[i64], hi: &[i64], f: &mut dyn FnMut(&[i64])) {
    let n = lo.len();
    let mut cur = vec![0; n];
    fn rec(k: usize, sum: i64, lo: &[i64], hi: &[i64], cur: &mut Vec<i64>, f: &mut dyn FnMut(&[i64])) {
        let n = lo.len();
        if k == n - 1 {
            let last = -sum;
            if lo[k] <= last && last <= hi[k] {
                cur[k] = last;
                f(cur);
            }
            return;
        }
        let rest_lo: i64 = lo[k + 1..].iter().sum();
        let rest_hi: i64 = hi[k + 1..].iter().sum();
        for v in lo[k]..=hi[k] {
            let s = sum + v;
            if -s < rest_lo || -s > rest_hi {
                continue;
            }
            cur[k] = v;
            rec(k + 1, s, lo, hi, cur, f);
        }
    }
    if lo.iter().zip(hi).any(|(l, h)| l > h) {
        return;
    }
    rec(0, 0, lo, hi, &mut cur, f);
}

fn ceil_sqrt(x: i64) -> i64 {
    let mut r = (x as f64).sqrt() as i64;
    while r * r < x {
        r += 1;
    }
    while r > 0 && (r - 1) * (r - 1) >= x {
        r -= 1;
    }
    r
}

/// Smallest `R` such that `(p'p/2)ρ² − Vρ + c > D` for all real `ρ ≥ R`.
/// Any `α` with `‖α‖ ≥ R` then has exponent above the cutoff, because
/// `|(v, α)| ≤ ‖v‖‖α‖ ≤ V‖α‖`.
pub fn lattice_radius(pp: i64, p: i64, v_norm_ceil: i64, c: i64, cutoff: usize) -> i64 {
    let a = pp * p; // twice the quadratic coefficient
    let f = |r: i64| a * r * r - 2 * v_norm_ceil * r + 2 * c > 2 * cutoff as i64;
    let mut r = (v_norm_ceil + a - 1) / a; // past the vertex the bound only grows
    while !f(r) {
        r += 1;
    }
    r
}

/// The alternating lattice sum `Σ_σ sign(σ) Σ_{α∈Q} q^{E(σ,α)}`, truncated.
pub fn chi_bar(
    pp: i64,
    p: i64,
    eta: &ClassicalWeight,
    xi: &ClassicalWeight,
    cutoff: usize,
    conv: Convention,
) -> Result<QSeries> {
    let data = SumData::new(pp, p, eta, xi, conv)?;
    if pp < data.n as i64 || p < data.n as i64 {
        return invalid(format!("need p, p' >= n, got ({pp},{p})"));
    }
    let perms = Permutation::all(data.n);
    let parts = par::map(&perms, |s| -> Result<QSeries> {
        let mut out = QSeries::zero(cutoff);
        let v = data.linear(s);
        let c = data.constant(s);
        let radius = lattice_radius(pp, p, ceil_sqrt(dot(&v, &v)), c, cutoff);
        let lo = vec![-radius; data.n];
        let hi = vec![radius; data.n];
        let sign = BigInt::from(s.sign());
        let mut err = None;
        for_each_sum_zero(&lo, &hi, &mut |alpha| {
            let e = data.exponent(s, alpha);
            if e < 0 {
                err.get_or_insert(Error::Integrality(format!(
                    "negative exponent {e} at σ = {:?}, α = {alpha:?}",
                    s.0
                )));
            } else if e as usize <= cutoff {
                out.add_at(e as usize, &sign);
            }
        });
        match err {
            Some(e) => Err(e),
            None => Ok(out),
        }
    });
    let mut total = QSeries::zero(cutoff);
    for part in parts {
        total = &total + &part?;
    }
    Ok(total)
}

/// `chi_bar / (q)_∞^{n−1}`: the alternating sum over the affine Weyl group
/// divided by the Weyl denominator of the coset.
pub fn w_character(
    pp: i64,
    p: i64,
    eta: &ClassicalWeight,
    xi: &ClassicalWeight,
    cutoff: usize,
    conv: Convention,
) -> Result<QSeries> {
    let n = eta.n();
    Ok(&chi_bar(pp, p, eta, xi, cutoff, conv)? * &euler_power(n - 1, cutoff))
}

/// A finite Laurent polynomial in `q` with integer coefficients.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LaurentPoly {
    terms: BTreeMap<i64, BigInt>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn from_series_shifted(s: &QSeries, shift: i64, scale: &BigInt) -> Self {
        let mut out = Self::zero();
        for (k, c) in s.coeffs().iter().enumerate() {
            out.add_term(k as i64 + shift, &(c * scale));
        }
        out
    }

    pub fn add_term(&mut self, e: i64, c: &BigInt) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(e).or_default();
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&e);
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut out = self.clone();
        for (e, c) in &o.terms {
            out.add_term(*e, c);
        }
        out
    }

    pub fn shift(&self, k: i64) -> Self {
        Self { terms: self.terms.iter().map(|(e, c)| (e + k, c.clone())).collect() }
    }

    pub fn neg(&self) -> Self {
        Self { terms: self.terms.iter().map(|(e, c)| (*e, -c)).collect() }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn min_exponent(&self) -> Option<i64> {
        self.terms.keys().next().copied()
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, &BigInt)> {
        self.terms.iter().map(|(e, c)| (*e, c))
    }

    /// As a series; fails on negative exponents.
    pub fn to_series(&self, cutoff: usize) -> Result<QSeries> {
        let mut s = QSeries::zero(cutoff);
        for (e, c) in &self.terms {
            if *e < 0 {
                return Err(Error::Integrality(format!("negative exponent {e}")));
            }
            s.add_at(*e as usize, c);
        }
        Ok(s)
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self.terms.iter().map(|(e, c)| format!("{c}q^{e}")).collect();
        f.write_str(&parts.join(" + "))
    }
}

/// `(q)_{Σm} / ∏ (q)_{m_i}` for non-negative `m`, as an exact polynomial.
pub fn q_multinomial(m: &[i64]) -> QSeries {
    let total: i64 = m.iter().sum();
    let mut deg = 0i64;
    let mut acc = 0i64;
    for &x in m {
        deg += acc * x;
        acc += x;
    }
    let cutoff = deg as usize;
    let mut s = pochhammer(total as usize, cutoff);
    for &x in m {
        s = &s * &pochhammer_inverse(x, cutoff);
    }
    s
}

/// Affine Weyl elements with every `N_i − d_i ≥ 0`, with their exponents.
fn finitized_terms(data: &SumData, big_n: &[i64]) -> Vec<(i64, i64, Vec<i64>)> {
    let n = data.n;
    let total: i64 = big_n.iter().sum();
    let mut out = Vec::new();
    let flip = data.conv == Convention::FlippedTranslation;
    for s in Permutation::all(n) {
        let sx = data.sigma_x(&s);
        let base: Vec<i64> = (0..n).map(|k| sx[k] - data.x[k]).collect();
        // ±pα_k ≤ N_k − base_k, and Σα = 0 keeps every d_k ≥ −|N| − max|base|
        let slack: i64 = total + base.iter().map(|b| b.abs()).max().unwrap_or(0);
        let mut lo = vec![0; n];
        let mut hi = vec![0; n];
        for k in 0..n {
            let room = big_n[k] - base[k];
            let reach = (slack + data.p - 1) / data.p + 1;
            if flip {
                lo[k] = Integer::div_ceil(&-room, &data.p);
                hi[k] = reach;
            } else {
                lo[k] = -reach;
                hi[k] = Integer::div_floor(&room, &data.p);
            }
        }
        for_each_sum_zero(&lo, &hi, &mut |alpha| {
            let d = data.shifts(&s, alpha);
            if (0..n).all(|k| big_n[k] - d[k] >= 0) {
                out.push((s.sign(), data.exponent(&s, alpha), d));
            }
        });
    }
    out
}

/// The finitized sum `Σ_w sign q^E (q)_{|N|} ∏ 1/(q)_{N_i − d_i}`; finite.
pub fn chi_bar_finitized(
    pp: i64,
    p: i64,
    eta: &ClassicalWeight,
    xi: &ClassicalWeight,
    big_n: &[i64],
    conv: Convention,
) -> Result<LaurentPoly> {
    let data = SumData::new(pp, p, eta, xi, conv)?;
    if big_n.len() != data.n {
        return Err(Error::Arity { expected: data.n, got: big_n.len() });
    }
    if big_n.iter().sum::<i64>() < 0 {
        return invalid("|N| must be non-negative");
    }
    let mut out = LaurentPoly::zero();
    for (sign, e, d) in finitized_terms(&data, big_n) {
        let m: Vec<i64> = (0..data.n).map(|k| big_n[k] - d[k]).collect();
        out = out.add(&LaurentPoly::from_series_shifted(&q_multinomial(&m), e, &BigInt::from(sign)));
    }
    Ok(out)
}

/// `(1/(q)_{|N|}) χ̄[N]` expanded as a series: `Σ_w sign q^E ∏ 1/(q)_{N_i − d_i}`.
pub fn finitized_character(
    pp: i64,
    p: i64,
    eta: &ClassicalWeight,
    xi: &ClassicalWeight,
    big_n: &[i64],
    cutoff: usize,
    conv: Convention,
) -> Result<QSeries> {
    let data = SumData::new(pp, p, eta, xi, conv)?;
    if big_n.len() != data.n {
        return Err(Error::Arity { expected: data.n, got: big_n.len() });
    }
    let mut out = QSeries::zero(cutoff);
    for (sign, e, d) in finitized_terms(&data, big_n) {
        if e < 0 {
            return Err(Error::Integrality(format!("negative exponent {e}")));
        }
        if e as usize > cutoff {
            continue;
        }
        let mut term = QSeries::monomial(e as usize, cutoff);
        for k in 0..data.n {
            term = &term * &pochhammer_inverse(big_n[k] - d[k], cutoff);
        }
        out = &out + &term.scale(&BigInt::from(sign));
    }
    Ok(out)
}

/// `(1/(q)_∞^n) Σ_{σ∈S_n} sign(σ) q^{(X − σX, Y)}` for the open constraint
/// with `η = Σ a_i ω_i`, `ξ = Σ b_i ω_i`.
pub fn m_limit_formula(a: &[i64], b: &[i64], cutoff: usize, conv: Convention) -> Result<QSeries> {
    if a.len() != b.len() {
        return Err(Error::Arity { expected: a.len(), got: b.len() });
    }
    let n = a.len() + 1;
    let data = SumData::new(0, 0, &ClassicalWeight::from_ints(a), &ClassicalWeight::from_ints(b), conv)?;
    let mut num = QSeries::zero(cutoff);
    for s in Permutation::all(n) {
        let e = data.constant(&s);
        if e < 0 {
            return Err(Error::Integrality(format!("negative exponent {e} at σ = {:?}", s.0)));
        }
        num.add_at(e as usize, &BigInt::from(s.sign()));
    }
    Ok(&num * &euler_power(n, cutoff))
}

/// Classical projections `η = Σ_{i<n} a_i ω_i`, `ξ = Σ_{i<n} b_i ω_i` of a cyclic constraint.
pub fn weights_of(c: &TupleConstraint) -> (ClassicalWeight, ClassicalWeight) {
    let n = c.n();
    (ClassicalWeight::from_ints(&c.a()[..n - 1]), ClassicalWeight::from_ints(&c.b()[..n - 1]))
}

/// Outcome of the three checks of the finitized-sum proposition at one point.
#[derive(Clone, Debug, Serialize)]
pub struct LemCh2Report {
    /// Per `i = 1..n`: does the three-term identity hold exactly.
    pub identity: Vec<bool>,
    /// Indices whose vanishing hypothesis holds, with the observed result.
    pub vanishing: Vec<(usize, bool)>,
    /// `Some(ok)` when `N = 0` and `ξ` is dominant of level `p − n`.
    pub normalization: Option<bool>,
    pub witness: Option<String>,
}

impl LemCh2Report {
    pub fn passed(&self) -> bool {
        self.identity.iter().all(|&x| x)
            && self.vanishing.iter().all(|&(_, ok)| ok)
            && self.normalization.unwrap_or(true)
    }
}

/// Indices `i ∈ 1..=n` where `χ̄[N]` must vanish: `(η+ρ, α_i) = 0` and
/// `N_{i+1} = N_i + (ξ+ρ, α_i)`, with `α_n` the affine simple root.
pub fn vanishing_indices(pp: i64, p: i64, eta: &ClassicalWeight, xi: &ClassicalWeight, big_n: &[i64]) -> Vec<usize> {
    let n = eta.n();
    let one = Rational64::one();
    let mut out = Vec::new();
    for i in 1..n {
        let e = eta.omega[i - 1] + one;
        let x = xi.omega[i - 1] + one;
        if e.is_zero() && x.is_integer() && big_n[i] == big_n[i - 1] + x.to_integer() {
            out.push(i);
        }
    }
    // affine root: (λ+ρ, α_0) = level − (λ̄+ρ̄, θ)
    let theta = |w: &ClassicalWeight| w.omega.iter().map(|x| x + one).sum::<Rational64>();
    let e0 = Rational64::from_integer(pp) - theta(eta);
    let x0 = Rational64::from_integer(p) - theta(xi);
    if e0.is_zero() && x0.is_integer() && big_n[0] == big_n[n - 1] + x0.to_integer() {
        out.push(n);
    }
    out
}

pub fn verify_lemch2(
    pp: i64,
    p: i64,
    eta: &ClassicalWeight,
    xi: &ClassicalWeight,
    big_n: &[i64],
    conv: Convention,
) -> Result<LemCh2Report> {
    let n = eta.n();
    if big_n.len() != n {
        return Err(Error::Arity { expected: n, got: big_n.len() });
    }
    let total: i64 = big_n.iter().sum();
    let lhs = chi_bar_finitized(pp, p, eta, xi, big_n, conv)?;
    let mut witness = None;
    let mut identity = Vec::with_capacity(n);
    for i in 1..=n {
        let shifted = eta.sub(&ClassicalWeight::fundamental(n, i - 1)).add(&ClassicalWeight::fundamental(n, i));
        let first = chi_bar_finitized(pp, p, &shifted, xi, big_n, conv)?.shift(big_n[i - 1]);
        let second = if total == 0 {
            LaurentPoly::zero()
        } else {
            let mut m = big_n.to_vec();
            m[i - 1] -= 1;
            let c = chi_bar_finitized(pp, p, eta, xi, &m, conv)?;
            c.add(&c.shift(total).neg())
        };
        let ok = lhs == first.add(&second);
        if !ok && witness.is_none() {
            witness = Some(format!("identity fails at i = {i}: lhs {lhs}, rhs {}", first.add(&second)));
        }
        identity.push(ok);
    }
    let vanishing = vanishing_indices(pp, p, eta, xi, big_n)
        .into_iter()
        .map(|i| {
            let ok = lhs.is_zero();
            if !ok && witness.is_none() {
                witness = Some(format!("vanishing fails at i = {i}: {lhs}"));
            }
            (i, ok)
        })
        .collect();
    let normalization = (total == 0 && big_n.iter().all(|&x| x == 0) && xi.is_dominant_of_level(p - n as i64))
        .then(|| {
            let mut one = LaurentPoly::zero();
            one.add_term(0, &BigInt::one());
            lhs == one
        });
    Ok(LemCh2Report { identity, vanishing, normalization, witness })
}

/// One battery point for the bosonic cross-checks: a cyclic constraint and
/// the finitization vectors to test.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BosonicPoint {
    pub constraint: TupleConstraint,
    pub finitizations: Vec<Vec<i64>>,
}

#[derive(Clone, Debug, Serialize)]
pub struct PointOutcome {
    pub n: usize,
    pub p_prime: i64,
    pub p: i64,
    pub a: Vec<i64>,
    pub b: Vec<i64>,
    pub lattice: bool,
    pub m_limit: bool,
    pub finitized: bool,
    pub first_diff: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct KeyOutcome {
    pub convention: Convention,
    pub points: Vec<PointOutcome>,
}

impl KeyOutcome {
    pub fn all_pass(&self) -> bool {
        self.points.iter().all(|p| p.lattice && p.m_limit && p.finitized)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Calibration {
    pub cutoff: usize,
    pub keys: Vec<KeyOutcome>,
    pub survivors: Vec<Convention>,
}

impl Calibration {
    pub fn unique_survivor(&self) -> Option<Convention> {
        match self.survivors.as_slice() {
            [only] => Some(*only),
            _ => None,
        }
    }
}

fn first_diff(a: &QSeries, b: &QSeries) -> Option<String> {
    (0..=a.cutoff().min(b.cutoff()))
        .find(|&k| a.coeff(k) != b.coeff(k))
        .map(|k| format!("q^{k}: {} vs {}", a.coeff(k), b.coeff(k)))
}

fn check_point(pt: &BosonicPoint, cutoff: usize, conv: Convention) -> PointOutcome {
    let c = &pt.constraint;
    let n = c.n();
    let (pp, p) = (c.p_prime().unwrap_or(0), c.p().unwrap_or(0));
    let (eta, xi) = weights_of(c);
    let direct = char_direct(c, cutoff);
    let mut diff = None;
    let mut note = |what: &str, r: Result<Option<String>>| -> bool {
        let d = match r {
            Ok(d) => d,
            Err(e) => Some(e.to_string()),
        };
        if let Some(d) = &d {
            diff.get_or_insert(format!("{what}: {d}"));
        }
        d.is_none()
    };
    let lattice = note(
        "lattice",
        chi_bar(pp, p, &eta, &xi, cutoff, conv).map(|s| first_diff(&(&s * &euler_power(n, cutoff)), &direct)),
    );
    let (ah, bh) = (&c.a()[..n - 1], &c.b()[..n - 1]);
    let m_limit = note(
        "m-limit",
        m_limit_formula(ah, bh, cutoff, conv).and_then(|f| {
            let open = TupleConstraint::open(ah.to_vec(), bh.to_vec())?;
            Ok(first_diff(&f, &char_direct(&open, cutoff)))
        }),
    );
    let mut finitized = true;
    for big_n in &pt.finitizations {
        let r = finitized_character(pp, p, &eta, &xi, big_n, cutoff, conv)
            .and_then(|f| Ok(first_diff(&f, &char_finitized(c, big_n, cutoff)?)));
        if !note(&format!("finitized N={big_n:?}"), r) {
            finitized = false;
            break;
        }
    }
    PointOutcome {
        n,
        p_prime: pp,
        p,
        a: c.a().to_vec(),
        b: c.b().to_vec(),
        lattice,
        m_limit,
        finitized,
        first_diff: diff,
    }
}

/// Runs every convention over the battery and reports which ones make all
/// three identities hold at every point.
pub fn calibrate(battery: &[BosonicPoint], cutoff: usize) -> Calibration {
    let keys: Vec<KeyOutcome> = Convention::ALL
        .iter()
        .map(|&conv| KeyOutcome {
            convention: conv,
            points: par::map(battery, |pt| check_point(pt, cutoff, conv)),
        })
        .collect();
    let survivors = keys.iter().filter(|k| k.all_pass()).map(|k| k.convention).collect();
    Calibration { cutoff, keys, survivors }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> Rational64 {
        Rational64::new(n, d)
    }

    #[test]
    fn gram_examples() {
        let a1 = RootVector::simple(2, 1);
        assert_eq!(gram_pairing(&a1, &a1).unwrap(), r(2, 1));
        let w1 = ClassicalWeight::fundamental(2, 1);
        assert_eq!(gram_pairing(&w1, &w1).unwrap(), r(1, 2));
        for n in 2..=4 {
            for i in 1..n {
                for j in 1..n {
                    let v = gram_pairing(&ClassicalWeight::fundamental(n, i), &RootVector::simple(n, j)).unwrap();
                    assert_eq!(v, r((i == j) as i64, 1));
                    let w = gram_pairing(&ClassicalWeight::fundamental(n, i), &ClassicalWeight::fundamental(n, j));
                    let (i, j, nn) = (i as i64, j as i64, n as i64);
                    assert_eq!(w.unwrap(), r(i.min(j), 1) - r(i * j, nn));
                }
            }
        }
    }

    #[test]
    fn reflections() {
        let w1 = ClassicalWeight::fundamental(2, 1);
        let s = Permutation::simple(2, 1);
        assert_eq!(weyl_act(&s, &w1).unwrap(), ClassicalWeight::from_ints(&[-1]));
        assert_eq!(weyl_act(&Permutation::identity(2), &w1).unwrap(), w1);
        let x = ClassicalWeight::new(vec![r(3, 2), r(-1, 1), r(2, 3)]);
        for i in 1..4 {
            let s = Permutation::simple(4, i);
            assert_eq!(weyl_act(&s, &weyl_act(&s, &x).unwrap()).unwrap(), x);
            // σ_i(x) = x − (x, α_i) α_i in ω-coordinates
            let c = x.omega[i - 1];
            let mut expect = x.omega.clone();
            for j in 1..4 {
                let cartan = match (i as i64 - j as i64).abs() {
                    0 => 2,
                    1 => -1,
                    _ => 0,
                };
                expect[j - 1] -= c * cartan;
            }
            assert_eq!(weyl_act(&s, &x).unwrap().omega, expect);
        }
    }

    #[test]
    fn sum_zero_enumeration() {
        let mut count = 0;
        for_each_sum_zero(&[-1, -1, -1], &[1, 1, 1], &mut |v| {
            assert_eq!(v.iter().sum::<i64>(), 0);
            count += 1;
        });
        assert_eq!(count, 7);
    }

    #[test]
    fn small_case_terms() {
        let w1 = ClassicalWeight::zero(2);
        let d = SumData::new(4, 3, &w1, &w1, Convention::Printed).unwrap();
        assert_eq!(d.exponent(&Permutation::identity(2), &[0, 0]), 0);
        assert_eq!(d.exponent(&Permutation::simple(2, 1), &[0, 0]), 1);
        let s = chi_bar(4, 3, &w1, &w1, 14, Convention::Printed).unwrap();
        let want = [1, -1, 0, 0, 0, 0, -1, 0, 0, 0, 0, 1, 0, 1, 0];
        assert_eq!(s, QSeries::from_i64s(&want).unwrap());
    }

    #[test]
    fn truncation_is_sound() {
        let eta = ClassicalWeight::from_ints(&[1, 0]);
        let xi = ClassicalWeight::from_ints(&[0, 1]);
        let lo = chi_bar(5, 4, &eta, &xi, 12, Convention::Printed).unwrap();
        let hi = chi_bar(5, 4, &eta, &xi, 24, Convention::Printed).unwrap();
        assert_eq!(hi.truncate(12), lo);
    }

    #[test]
    fn finitized_identity_term() {
        let z = ClassicalWeight::zero(2);
        // N = 0 with dominant ξ gives 1
        let v = chi_bar_finitized(4, 3, &z, &z, &[0, 0], Convention::Printed).unwrap();
        assert_eq!(v.to_series(0).unwrap(), QSeries::one(0));
        assert_eq!(q_multinomial(&[1, 1]), QSeries::from_i64s(&[1, 1]).unwrap());
        assert_eq!(q_multinomial(&[2, 1]), QSeries::from_i64s(&[1, 1, 1]).unwrap());
    }

    #[test]
    fn m_limit_identity_term() {
        // n = 2, a = b = 0: (1 − q)/(q)_∞² = 1 + q + 3q² + …
        let s = m_limit_formula(&[0], &[0], 4, Convention::Printed).unwrap();
        assert_eq!(s.coeffs()[..3], [1, 1, 3].map(BigInt::from));
    }

    #[test]
    fn sign_flips_on_transposition() {
        for p in Permutation::all(4) {
            let mut q = p.clone();
            q.0.swap(0, 2);
            assert_eq!(p.sign(), -q.sign());
        }
    }
}
