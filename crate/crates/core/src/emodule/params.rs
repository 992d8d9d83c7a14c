//! Exact parameter instantiation.
//!
//! Matrix coefficients are built from symbolic monomials in `q1, q3` and the
//! spectral parameters of the tensor slots. They are specialized in stages:
//! slot parameters are first expressed through the independent ones (the
//! shift chain), then every independent parameter becomes a product of seed
//! primes. At each stage factors are cancelled before the next substitution,
//! so a coefficient is zero or singular exactly when some surviving factor
//! `1 − r` has `r = 1` at that stage.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Div, Mul};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{invalid, Error, Result};

/// Number of symbols tracked by a [`Mono`].
pub const WIDTH: usize = 8;

/// Maximum number of tensor slots (`WIDTH − 2`).
pub const MAX_SLOTS: usize = WIDTH - 2;

/// A Laurent monomial as an exponent vector. The meaning of the coordinates
/// depends on the level: symbolic (`q1, q3, u_1, …`), independent
/// (`q1, q3, w_1, …`) or prime exponents over the seeds.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Mono(pub [i64; WIDTH]);

impl Mono {
    pub fn one() -> Self {
        Self::default()
    }

    pub fn basis(i: usize) -> Self {
        let mut m = Self::default();
        m.0[i] = 1;
        m
    }

    pub fn q1() -> Self {
        Self::basis(0)
    }

    pub fn q3() -> Self {
        Self::basis(1)
    }

    /// `q2 = q1⁻¹ q3⁻¹`.
    pub fn q2() -> Self {
        let mut m = Self::default();
        m.0[0] = -1;
        m.0[1] = -1;
        m
    }

    /// Spectral parameter of slot `i` (0-based).
    pub fn u(i: usize) -> Self {
        assert!(i < MAX_SLOTS, "at most {MAX_SLOTS} slots");
        Self::basis(2 + i)
    }

    pub fn pow(self, k: i64) -> Self {
        Self(self.0.map(|x| x * k))
    }

    pub fn inv(self) -> Self {
        self.pow(-1)
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&x| x == 0)
    }

    /// Applies the linear map sending basis vector `i` to `images[i]`.
    fn map(&self, images: &[Mono]) -> Mono {
        let mut out = Mono::one();
        for (i, &e) in self.0.iter().enumerate() {
            if e != 0 {
                out = out * images[i].pow(e);
            }
        }
        out
    }
}

// exponent vectors: multiplying monomials adds exponents
#[allow(clippy::suspicious_arithmetic_impl)]
impl Mul for Mono {
    type Output = Mono;
    fn mul(self, o: Mono) -> Mono {
        let mut out = self;
        for i in 0..WIDTH {
            out.0[i] += o.0[i];
        }
        out
    }
}

#[allow(clippy::suspicious_arithmetic_impl)]
impl Div for Mono {
    type Output = Mono;
    fn div(self, o: Mono) -> Mono {
        self * o.inv()
    }
}

impl fmt::Display for Mono {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names = ["q1", "q3", "u1", "u2", "u3", "u4", "u5", "u6"];
        let parts: Vec<String> = self
            .0
            .iter()
            .zip(names)
            .filter(|(e, _)| **e != 0)
            .map(|(e, n)| if *e == 1 { n.to_string() } else { format!("{n}^{e}") })
            .collect();
        if parts.is_empty() {
            f.write_str("1")
        } else {
            f.write_str(&parts.join("·"))
        }
    }
}

/// `mono · ∏ (1 − r)^m` over symbolic monomials.
#[derive(Clone, Debug, Default)]
pub struct Scalar {
    pub mono: Mono,
    pub factors: Vec<(Mono, i32)>,
}

impl Scalar {
    pub fn new(mono: Mono) -> Self {
        Self { mono, factors: Vec::new() }
    }

    pub fn push(&mut self, r: Mono, m: i32) {
        self.factors.push((r, m));
    }

    /// Multiplies by `∏ (1 − c/s)^m`, a rational function in `z` evaluated at `z = s`.
    pub fn absorb_at(&mut self, factors: &[(Mono, i32)], s: Mono) {
        self.factors.extend(factors.iter().map(|&(c, m)| (c / s, m)));
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ParamKind {
    /// `q1, q2` and every slot parameter independent.
    Generic,
    /// Slots tied by the shift chain, `q1, q2, u` independent.
    Shifted,
    /// `q1 = t^p`, `q3 = t^{−p'}`.
    ResonancePp { p_prime: i64, p: i64 },
    /// `q1 = t^{k+1}`, `q3 = t^{r−1}`.
    ResonanceW { k: usize, r: i64 },
}

/// An exact instantiation of `q1, q2, q3` and the slot parameters.
#[derive(Clone, Debug, Serialize)]
pub struct ParamSpec {
    pub kind: ParamKind,
    pub seeds: Vec<u64>,
    /// Independent-level image of each slot parameter.
    chain: Vec<Mono>,
    /// Prime exponents of the independent symbols `q1, q3, w_1, …`.
    base: Vec<Mono>,
}

fn is_prime(p: u64) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| !p.is_multiple_of(d))
}

fn check_seeds(seeds: &[u64], need: usize) -> Result<()> {
    if seeds.len() < need {
        return invalid(format!("need at least {need} prime seeds, got {}", seeds.len()));
    }
    if seeds.len() > WIDTH {
        return invalid(format!("at most {WIDTH} seeds are supported"));
    }
    for (i, &p) in seeds.iter().enumerate() {
        if !is_prime(p) {
            return invalid(format!("seed {p} is not prime"));
        }
        if seeds[..i].contains(&p) {
            return invalid(format!("seed {p} repeated"));
        }
    }
    Ok(())
}

/// `u_1 = origin`, `u_{i+1} = u_i q1^{−(a_i+1)} q3^{−(b_i+1)}`.
fn shift_chain(origin: Mono, a: &[i64], b: &[i64]) -> Vec<Mono> {
    let mut out = vec![origin];
    for (ai, bi) in a.iter().zip(b) {
        let prev = *out.last().unwrap();
        out.push(prev / (Mono::q1().pow(ai + 1) * Mono::q3().pow(bi + 1)));
    }
    out
}

fn check_shift(a: &[i64], b: &[i64]) -> Result<()> {
    if a.len() != b.len() {
        return Err(Error::Arity { expected: a.len(), got: b.len() });
    }
    if a.len() + 1 > MAX_SLOTS {
        return invalid(format!("at most {MAX_SLOTS} slots"));
    }
    if a.iter().chain(b).any(|&x| x < 0) {
        return invalid("shift entries must be non-negative");
    }
    Ok(())
}

impl ParamSpec {
    /// `q1 = s_0`, `q2 = s_1`, slot `i` gets `s_{2+i}`.
    pub fn generic(seeds: &[u64], slots: usize) -> Result<Self> {
        if slots == 0 || slots > MAX_SLOTS {
            return invalid(format!("slot count must be in 1..={MAX_SLOTS}"));
        }
        check_seeds(seeds, 2 + slots)?;
        let mut base = vec![Mono::basis(0), Mono::basis(0).inv() / Mono::basis(1)];
        base.extend((0..slots).map(|i| Mono::basis(2 + i)));
        let chain = (0..slots).map(|i| Mono::basis(2 + i)).collect();
        Ok(Self { kind: ParamKind::Generic, seeds: seeds.to_vec(), chain, base })
    }

    /// Generic `q1 = s_0`, `q2 = s_1`, `u = s_2`, slots on the shift chain.
    pub fn shifted(seeds: &[u64], a: &[i64], b: &[i64]) -> Result<Self> {
        check_shift(a, b)?;
        check_seeds(seeds, 3)?;
        let base = vec![Mono::basis(0), Mono::basis(0).inv() / Mono::basis(1), Mono::basis(2)];
        let chain = shift_chain(Mono::basis(2), a, b);
        Ok(Self { kind: ParamKind::Shifted, seeds: seeds.to_vec(), chain, base })
    }

    /// `q1 = t^p`, `q3 = t^{−p'}`, `u = s` with `seeds = [t, s, …]`; slots
    /// on the shift chain of the first `n − 1` entries of `a`, `b`.
    pub fn resonance_pp(seeds: &[u64], p_prime: i64, p: i64, a: &[i64], b: &[i64]) -> Result<Self> {
        check_shift(a, b)?;
        check_seeds(seeds, 2)?;
        if p_prime < 1 || p < 1 || p_prime == p || p_prime.gcd(&p) != 1 {
            return invalid(format!("resonance needs coprime p' != p, got ({p_prime},{p})"));
        }
        let base = vec![Mono::basis(0).pow(p), Mono::basis(0).pow(-p_prime), Mono::basis(1)];
        let chain = shift_chain(Mono::basis(2), a, b);
        Ok(Self { kind: ParamKind::ResonancePp { p_prime, p }, seeds: seeds.to_vec(), chain, base })
    }

    /// `q1 = t^{k+1}`, `q3 = t^{r−1}`, single slot `u = s`.
    pub fn resonance_w(seeds: &[u64], k: usize, r: i64) -> Result<Self> {
        check_seeds(seeds, 2)?;
        let k1 = k as i64 + 1;
        if k == 0 || r < 2 || k1.gcd(&(r - 1)) != 1 {
            return invalid(format!("need k >= 1, r >= 2, gcd(k+1, r-1) = 1, got ({k},{r})"));
        }
        let base = vec![Mono::basis(0).pow(k1), Mono::basis(0).pow(r - 1), Mono::basis(1)];
        let chain = vec![Mono::basis(2)];
        Ok(Self { kind: ParamKind::ResonanceW { k, r }, seeds: seeds.to_vec(), chain, base })
    }

    /// Same parameters with slot chain restarted at the independent-level
    /// monomial `origin`.
    pub fn with_origin(&self, origin: Mono, a: &[i64], b: &[i64]) -> Result<Self> {
        check_shift(a, b)?;
        Ok(Self { chain: shift_chain(origin, a, b), ..self.clone() })
    }

    /// Same parameters with the slots reordered: new slot `l` is old slot `perm[l]`.
    pub fn permute_slots(&self, perm: &[usize]) -> Result<Self> {
        let mut seen = vec![false; self.chain.len()];
        if perm.len() != seen.len() || perm.iter().any(|&i| i >= seen.len() || std::mem::replace(&mut seen[i], true)) {
            return invalid(format!("{perm:?} is not a permutation of the slots"));
        }
        Ok(Self { chain: perm.iter().map(|&i| self.chain[i]).collect(), ..self.clone() })
    }

    /// Two slots with `u_2 = u_1 q1^x q3^y`, all else generic.
    pub fn two_point(seeds: &[u64], x: i64, y: i64) -> Result<Self> {
        let mut spec = Self::shifted(seeds, &[], &[])?;
        spec.chain.push(Mono::basis(2) * Mono::q1().pow(x) * Mono::q3().pow(y));
        Ok(spec)
    }

    /// Independent-level image of slot `i`.
    pub fn slot_origin(&self, i: usize) -> Mono {
        self.chain[i]
    }

    pub fn slots(&self) -> usize {
        self.chain.len()
    }

    /// Symbolic → independent level.
    pub fn lift(&self, m: Mono) -> Mono {
        let mut images = vec![Mono::q1(), Mono::q3()];
        images.extend(self.chain.iter().copied());
        images.resize(WIDTH, Mono::one());
        m.map(&images)
    }

    /// Independent level → prime exponents.
    pub fn ground(&self, m: Mono) -> Mono {
        let mut images = self.base.clone();
        images.resize(WIDTH, Mono::one());
        m.map(&images)
    }

    /// Symbolic → prime exponents.
    pub fn specialize(&self, m: Mono) -> Mono {
        self.ground(self.lift(m))
    }

    /// The rational number with the given prime exponents.
    pub fn value_of(&self, primes: Mono) -> BigRational {
        let mut num = BigInt::one();
        let mut den = BigInt::one();
        for (i, &e) in primes.0.iter().enumerate() {
            if e == 0 {
                continue;
            }
            let p = BigInt::from(self.seeds[i]);
            let pw = num_traits::pow(p, e.unsigned_abs() as usize);
            if e > 0 {
                num *= pw;
            } else {
                den *= pw;
            }
        }
        // each prime lands wholly in the numerator or the denominator
        BigRational::new_raw(num, den)
    }

    pub fn value(&self, m: Mono) -> BigRational {
        self.value_of(self.specialize(m))
    }

    pub fn q1(&self) -> BigRational {
        self.value(Mono::q1())
    }
    pub fn q2(&self) -> BigRational {
        self.value(Mono::q2())
    }
    pub fn q3(&self) -> BigRational {
        self.value(Mono::q3())
    }
    pub fn u(&self, i: usize) -> BigRational {
        self.value(Mono::u(i))
    }

    /// Evaluates a scalar; `Ok(None)` when it vanishes.
    pub fn evaluate(&self, s: &Scalar) -> Result<Option<BigRational>> {
        let mut current: BTreeMap<Mono, i32> = BTreeMap::new();
        for &(r, m) in &s.factors {
            *current.entry(r).or_default() += m;
        }
        current.retain(|_, m| *m != 0);
        let stages: [&dyn Fn(Mono) -> Mono; 3] = [&|m| m, &|m| self.lift(m), &|m| self.ground(m)];
        for (level, stage) in stages.iter().enumerate() {
            // a factor whose image is 1 vanishes (or blows up) at this stage;
            // distinct factors are never cancelled against each other here
            let hits: Vec<(Mono, i32)> =
                current.iter().filter(|(r, _)| stage(**r).is_one()).map(|(r, m)| (*r, *m)).collect();
            if hits.iter().any(|&(_, m)| m < 0) {
                let origin: Vec<String> = hits.iter().map(|(r, m)| format!("(1 - {r})^{m}")).collect();
                return Err(Error::Pole(format!("singular factor at stage {level}: {}", origin.join(" "))));
            }
            if !hits.is_empty() {
                return Ok(None);
            }
            let mut next: BTreeMap<Mono, i32> = BTreeMap::new();
            for (r, m) in &current {
                *next.entry(stage(*r)).or_default() += m;
            }
            next.retain(|_, m| *m != 0);
            current = next;
        }
        let ground = current;
        let mut v = self.value(s.mono);
        let one = BigRational::one();
        for (r, m) in ground {
            let f = &one - self.value_of(r);
            debug_assert!(!f.is_zero());
            let f = if m > 0 { f } else { one.clone() / f };
            for _ in 0..m.unsigned_abs() {
                v *= &f;
            }
        }
        Ok(Some(v))
    }
}
