//! Truncated power series in `q` with big-integer coefficients.
//!
//! Binary operators truncate to the smaller of the two cutoffs. The
//! `checked_*` variants refuse mismatched cutoffs instead.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::de::{self, Deserializer};
use serde::ser::{SerializeSeq, Serializer};
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QSeries {
    coeffs: Vec<BigInt>,
}

impl QSeries {
    pub fn zero(cutoff: usize) -> Self {
        Self { coeffs: vec![BigInt::zero(); cutoff + 1] }
    }

    pub fn one(cutoff: usize) -> Self {
        Self::monomial(0, cutoff)
    }

    /// `q^k`, or zero when `k` exceeds the cutoff.
    pub fn monomial(k: usize, cutoff: usize) -> Self {
        let mut s = Self::zero(cutoff);
        if k <= cutoff {
            s.coeffs[k] = BigInt::one();
        }
        s
    }

    /// Coefficients of `q^0 .. q^D`; the cutoff is `coeffs.len() − 1`.
    pub fn from_coeffs(coeffs: Vec<BigInt>) -> Result<Self> {
        if coeffs.is_empty() {
            return invalid("a series needs at least the constant coefficient");
        }
        Ok(Self { coeffs })
    }

    pub fn from_i64s(coeffs: &[i64]) -> Result<Self> {
        Self::from_coeffs(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn cutoff(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    /// Coefficient of `q^k`; zero above the cutoff.
    pub fn coeff(&self, k: usize) -> BigInt {
        self.coeffs.get(k).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn truncate(&self, cutoff: usize) -> Self {
        let mut coeffs = self.coeffs.clone();
        coeffs.resize(cutoff.min(self.cutoff()) + 1, BigInt::zero());
        Self { coeffs }
    }

    pub(crate) fn add_at(&mut self, k: usize, c: &BigInt) {
        if let Some(x) = self.coeffs.get_mut(k) {
            *x += c;
        }
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        Self { coeffs: self.coeffs.iter().map(|x| x * c).collect() }
    }

    /// Multiplication by `q^k`.
    pub fn shift(&self, k: usize) -> Self {
        let mut out = Self::zero(self.cutoff());
        for (i, c) in self.coeffs.iter().enumerate() {
            if i + k > self.cutoff() {
                break;
            }
            out.coeffs[i + k] = c.clone();
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        let d = self.cutoff().min(other.cutoff());
        let mut out = vec![BigInt::zero(); d + 1];
        for (i, a) in self.coeffs.iter().take(d + 1).enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().take(d + 1 - i).enumerate() {
                if !b.is_zero() {
                    out[i + j] += a * b;
                }
            }
        }
        Self { coeffs: out }
    }

    fn zip(&self, other: &Self, f: impl Fn(&BigInt, &BigInt) -> BigInt) -> Self {
        let d = self.cutoff().min(other.cutoff());
        Self { coeffs: (0..=d).map(|k| f(&self.coeffs[k], &other.coeffs[k])).collect() }
    }

    fn same_cutoff(&self, other: &Self) -> Result<()> {
        if self.cutoff() != other.cutoff() {
            return Err(Error::CutoffMismatch(self.cutoff(), other.cutoff()));
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.same_cutoff(other)?;
        Ok(self + other)
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.same_cutoff(other)?;
        Ok(self - other)
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        self.same_cutoff(other)?;
        Ok(self.mul(other))
    }

    /// Multiplicative inverse; needs a constant term of `±1` to stay integral.
    pub fn inverse(&self) -> Result<Self> {
        let c0 = &self.coeffs[0];
        if !c0.abs().is_one() {
            return invalid(format!("constant term {c0} is not a unit"));
        }
        let d = self.cutoff();
        let mut out = vec![BigInt::zero(); d + 1];
        out[0] = c0.clone();
        for k in 1..=d {
            let mut acc = BigInt::zero();
            for j in 1..=k {
                if !self.coeffs[j].is_zero() {
                    acc += &self.coeffs[j] * &out[k - j];
                }
            }
            out[k] = -acc * c0;
        }
        Ok(Self { coeffs: out })
    }

    /// Division by `1 − q^k` for `k ≥ 1`, i.e. `out_j = s_j + out_{j−k}`.
    pub fn div_one_minus_qk(&self, k: usize) -> Result<Self> {
        if k == 0 {
            return invalid("1 − q^0 is not invertible");
        }
        let mut out = self.coeffs.clone();
        for j in k..out.len() {
            let prev = out[j - k].clone();
            out[j] += prev;
        }
        Ok(Self { coeffs: out })
    }

    /// Multiplication by `1 − q^k`.
    pub fn mul_one_minus_qk(&self, k: usize) -> Self {
        self - &self.shift(k)
    }
}

/// `(q)_m = ∏_{i=1}^m (1 − q^i)`, truncated at `cutoff`.
pub fn pochhammer(m: usize, cutoff: usize) -> QSeries {
    let mut s = QSeries::one(cutoff);
    for i in 1..=m.min(cutoff) {
        s = s.mul_one_minus_qk(i);
    }
    s
}

/// `1/(q)_m`; zero for negative `m`.
pub fn pochhammer_inverse(m: i64, cutoff: usize) -> QSeries {
    if m < 0 {
        return QSeries::zero(cutoff);
    }
    let mut s = QSeries::one(cutoff);
    for i in 1..=(m as usize).min(cutoff) {
        s = s.div_one_minus_qk(i).expect("i >= 1");
    }
    s
}

/// `1/(q)_∞ = Σ p(n) qⁿ`, by Euler's pentagonal recurrence.
pub fn euler_inverse(cutoff: usize) -> QSeries {
    let mut p = vec![BigInt::zero(); cutoff + 1];
    p[0] = BigInt::one();
    for n in 1..=cutoff as i64 {
        let mut acc = BigInt::zero();
        for k in 1.. {
            let g1 = k * (3 * k - 1) / 2;
            if g1 > n {
                break;
            }
            let sign_pos = k % 2 == 1;
            let mut term = p[(n - g1) as usize].clone();
            let g2 = k * (3 * k + 1) / 2;
            if g2 <= n {
                term += &p[(n - g2) as usize];
            }
            if sign_pos {
                acc += term;
            } else {
                acc -= term;
            }
        }
        p[n as usize] = acc;
    }
    QSeries { coeffs: p }
}

impl Add for &QSeries {
    type Output = QSeries;
    fn add(self, o: &QSeries) -> QSeries {
        self.zip(o, |a, b| a + b)
    }
}

impl Sub for &QSeries {
    type Output = QSeries;
    fn sub(self, o: &QSeries) -> QSeries {
        self.zip(o, |a, b| a - b)
    }
}

impl Mul for &QSeries {
    type Output = QSeries;
    fn mul(self, o: &QSeries) -> QSeries {
        QSeries::mul(self, o)
    }
}

impl Neg for &QSeries {
    type Output = QSeries;
    fn neg(self) -> QSeries {
        QSeries { coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
}

impl fmt::Display for QSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut terms = Vec::new();
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            terms.push(match k {
                0 => c.to_string(),
                1 => format!("{c}q"),
                _ => format!("{c}q^{k}"),
            });
        }
        if terms.is_empty() {
            terms.push("0".into());
        }
        write!(f, "{} + O(q^{})", terms.join(" + ").replace("+ -", "- "), self.cutoff() + 1)
    }
}

/// Serializes a big integer as a JSON number when it fits in `i64`, else as a
/// decimal string.
pub(crate) fn ser_bigint<S: Serializer>(c: &BigInt, s: S) -> std::result::Result<S::Ok, S::Error> {
    match c.to_i64() {
        Some(v) => s.serialize_i64(v),
        None => s.serialize_str(&c.to_string()),
    }
}

#[derive(Deserialize)]
#[serde(untagged)]
enum IntRepr {
    Small(i64),
    Big(String),
}

impl IntRepr {
    fn into_bigint<E: de::Error>(self) -> std::result::Result<BigInt, E> {
        match self {
            IntRepr::Small(v) => Ok(BigInt::from(v)),
            IntRepr::Big(s) => s.parse().map_err(E::custom),
        }
    }
}

struct Coeffs<'a>(&'a [BigInt]);

impl Serialize for Coeffs<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        struct One<'b>(&'b BigInt);
        impl Serialize for One<'_> {
            fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
                ser_bigint(self.0, s)
            }
        }
        let mut seq = s.serialize_seq(Some(self.0.len()))?;
        for c in self.0 {
            seq.serialize_element(&One(c))?;
        }
        seq.end()
    }
}

impl Serialize for QSeries {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Out<'a> {
            cutoff: usize,
            coeffs: Coeffs<'a>,
        }
        Out { cutoff: self.cutoff(), coeffs: Coeffs(&self.coeffs) }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for QSeries {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct In {
            cutoff: usize,
            coeffs: Vec<IntRepr>,
        }
        let raw = In::deserialize(d)?;
        if raw.coeffs.len() != raw.cutoff + 1 {
            return Err(de::Error::custom("coefficient count must be cutoff + 1"));
        }
        let coeffs = raw
            .coeffs
            .into_iter()
            .map(IntRepr::into_bigint)
            .collect::<std::result::Result<Vec<_>, _>>()?;
        Ok(QSeries { coeffs })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::partitions::partitions_of;

    fn s(v: &[i64]) -> QSeries {
        QSeries::from_i64s(v).unwrap()
    }

    #[test]
    fn add_examples() {
        assert!((&s(&[1]) + &s(&[-1])).is_zero());
        let e = euler_inverse(8);
        assert_eq!(&e + &QSeries::zero(8), e);
        assert_eq!(&s(&[1, 1, 0]) + &s(&[1, -1, 0]), s(&[2, 0, 0]));
    }

    #[test]
    fn min_cutoff_and_checked() {
        let a = s(&[1, 1, 1, 1]);
        let b = s(&[1, 1]);
        assert_eq!((&a + &b).cutoff(), 1);
        assert_eq!(a.checked_add(&b), Err(Error::CutoffMismatch(3, 1)));
        assert!(a.checked_mul(&a).is_ok());
    }

    #[test]
    fn geometric_telescopes() {
        let geo = s(&[1; 10]);
        assert_eq!(&s(&[1, -1, 0, 0, 0, 0, 0, 0, 0, 0]) * &geo, QSeries::one(9));
    }

    #[test]
    fn pochhammer_examples() {
        assert_eq!(pochhammer(0, 5), QSeries::one(5));
        assert_eq!(pochhammer(1, 3), s(&[1, -1, 0, 0]));
        assert_eq!(pochhammer(2, 4), s(&[1, -1, -1, 1, 0]));
        // (1−q)(1−q²)(1−q³) by repeated products
        let f = |k: usize| QSeries::one(6).mul_one_minus_qk(k);
        assert_eq!(pochhammer(3, 6), &(&f(1) * &f(2)) * &f(3));
        assert_eq!(pochhammer(3, 6), s(&[1, -1, -1, 0, 1, 1, -1]));
    }

    #[test]
    fn euler_matches_partition_counts() {
        let e = euler_inverse(12);
        for n in 0..=12 {
            assert_eq!(e.coeff(n), BigInt::from(partitions_of(n).len()));
        }
        assert_eq!(&e * &pochhammer(12, 12), QSeries::one(12));
    }

    #[test]
    fn inverse_and_division() {
        let p = pochhammer(5, 10);
        assert_eq!(&p.inverse().unwrap() * &p, QSeries::one(10));
        assert_eq!(p.inverse().unwrap(), pochhammer_inverse(5, 10));
        assert!(s(&[2, 1]).inverse().is_err());
        let x = s(&[1, 2, 3, 4, 5, 6]);
        assert_eq!(x.div_one_minus_qk(2).unwrap().mul_one_minus_qk(2), x);
        assert!(pochhammer_inverse(-1, 4).is_zero());
    }

    #[test]
    fn json_shape() {
        let js = serde_json::to_string(&s(&[1, -1, 0])).unwrap();
        assert_eq!(js, r#"{"cutoff":2,"coeffs":[1,-1,0]}"#);
        let back: QSeries = serde_json::from_str(&js).unwrap();
        assert_eq!(back, s(&[1, -1, 0]));
        let big = QSeries::from_coeffs(vec![BigInt::from(10).pow(30u32)]).unwrap();
        let js = serde_json::to_string(&big).unwrap();
        assert_eq!(serde_json::from_str::<QSeries>(&js).unwrap(), big);
        assert!(serde_json::from_str::<QSeries>(r#"{"cutoff":3,"coeffs":[1]}"#).is_err());
    }
}
