//! Graded characters of the constrained tuple sets: by enumeration, by the
//! finitized recursion, and for the `(k,r)`-admissible partitions.

use std::collections::HashMap;
use std::sync::RwLock;

use num_bigint::BigInt;
use num_traits::One;
use serde::Serialize;

use crate::affineweyl::{self, Convention};
use crate::error::{invalid, Error, Result};
use crate::partitions::{enumerate_by_degree, enumerate_finitized, enumerate_kr, TupleConstraint, VacuumPattern};
use crate::qseries::{euler_inverse, QSeries};

fn count_by_degree(degrees: impl IntoIterator<Item = usize>, cutoff: usize) -> QSeries {
    let mut s = QSeries::zero(cutoff);
    let one = BigInt::one();
    for d in degrees {
        s.add_at(d, &one);
    }
    s
}

/// Generating function of the constrained set by degree.
pub fn char_direct(c: &TupleConstraint, cutoff: usize) -> QSeries {
    count_by_degree(enumerate_by_degree(c, cutoff).into_iter().map(|(d, _)| d), cutoff)
}

/// Generating function of the finitized set; zero if some `N_i < 0`.
pub fn char_finitized(c: &TupleConstraint, big_n: &[i64], cutoff: usize) -> Result<QSeries> {
    let set = enumerate_finitized(c, big_n, cutoff)?;
    Ok(count_by_degree(set.into_iter().map(|(d, _)| d), cutoff))
}

/// Memoized finitized recursion for a fixed `b` and cutoff.
///
type MemoKey = (Vec<i64>, Vec<i64>);

/// Keys are `(a, N)`; the recursion only ever changes those two while
/// preserving `Σa`. The lock is held only around lookups and inserts, so a
/// value may be computed twice under contention, never stored twice.
pub struct FinitizedSession {
    b: Vec<i64>,
    cutoff: usize,
    memo: RwLock<HashMap<MemoKey, QSeries>>,
}

impl FinitizedSession {
    pub fn new(b: Vec<i64>, cutoff: usize) -> Result<Self> {
        if b.len() < 2 || b.iter().any(|&x| x < 0) {
            return invalid(format!("b = {b:?} must have n >= 2 non-negative entries"));
        }
        Ok(Self { b, cutoff, memo: RwLock::new(HashMap::new()) })
    }

    pub fn cutoff(&self) -> usize {
        self.cutoff
    }

    pub fn memo_len(&self) -> usize {
        self.memo.read().unwrap().len()
    }

    /// Checks the region where the recursion determines `χ[N]` uniquely:
    /// `N_i ≥ 0`, `a_i ≥ 0`, `N_{i+1} − N_i ≤ b_i + 1`, and `Σa_i > 0`.
    pub fn validate(&self, a: &[i64], big_n: &[i64]) -> Result<()> {
        let n = self.b.len();
        if a.len() != n {
            return Err(Error::Arity { expected: n, got: a.len() });
        }
        if big_n.len() != n {
            return Err(Error::Arity { expected: n, got: big_n.len() });
        }
        if a.iter().any(|&x| x < 0) || big_n.iter().any(|&x| x < 0) {
            return invalid("a and N must be non-negative");
        }
        if a.iter().all(|&x| x == 0) {
            return invalid("p' = n is outside the recursion's region");
        }
        for i in 0..n {
            let next = big_n[(i + 1) % n];
            if next - big_n[i] > self.b[i] + 1 {
                return invalid(format!(
                    "N = {big_n:?} violates N_{{i+1}} − N_i ≤ b_i + 1 at i = {}",
                    i + 1
                ));
            }
        }
        Ok(())
    }

    pub fn chi(&self, a: &[i64], big_n: &[i64]) -> Result<QSeries> {
        self.validate(a, big_n)?;
        Ok(self.eval(a, big_n))
    }

    fn eval(&self, a: &[i64], big_n: &[i64]) -> QSeries {
        let n = self.b.len();
        if big_n.iter().any(|&x| x < 0) {
            return QSeries::zero(self.cutoff);
        }
        if big_n.iter().all(|&x| x == 0) {
            return QSeries::one(self.cutoff);
        }
        let key = (a.to_vec(), big_n.to_vec());
        if let Some(v) = self.memo.read().unwrap().get(&key) {
            return v.clone();
        }
        let prev = |i: usize| (i + n - 1) % n;
        let tight = |i: usize| big_n[i] - big_n[prev(i)] == self.b[prev(i)] + 1;
        let loose_after = |i: usize| big_n[(i + 1) % n] - big_n[i] <= self.b[i];

        let value = if (0..n).all(|i| !tight(i)) {
            // unroll one full turn around the cycle starting where a_{i−1} > 0
            let i = (0..n).find(|&i| a[prev(i)] > 0).expect("Σa > 0");
            let total: i64 = big_n.iter().sum();
            let mut acc = QSeries::zero(self.cutoff);
            let mut offset = 0i64;
            for step in 0..n {
                let j = (i + step) % n;
                let mut a2 = a.to_vec();
                a2[prev(i)] -= 1;
                a2[prev(j)] += 1;
                let mut n2 = big_n.to_vec();
                n2[j] -= 1;
                if (offset as usize) <= self.cutoff {
                    acc = &acc + &self.eval(&a2, &n2).shift(offset as usize);
                }
                offset += big_n[j];
            }
            acc.div_one_minus_qk(total as usize).expect("|N| > 0")
        } else {
            let i = (0..n)
                .find(|&i| tight(i) && loose_after(i))
                .expect("a tight index followed by a loose one exists when p > 0");
            let mut n2 = big_n.to_vec();
            n2[i] -= 1;
            let mut acc = QSeries::zero(self.cutoff);
            for j in 0..=a[prev(i)] {
                let mut a2 = a.to_vec();
                a2[prev(i)] -= j;
                a2[i] += j;
                let shift = j * big_n[i];
                if shift as usize <= self.cutoff {
                    acc = &acc + &self.eval(&a2, &n2).shift(shift as usize);
                }
            }
            acc
        };
        self.memo.write().unwrap().insert(key, value.clone());
        value
    }
}

/// `χ[N]` by the recursion, for a cyclic constraint.
pub fn char_recursive(c: &TupleConstraint, big_n: &[i64], cutoff: usize) -> Result<QSeries> {
    if !c.is_cyclic() {
        return invalid("the finitized recursion needs a cyclic constraint");
    }
    FinitizedSession::new(c.b().to_vec(), cutoff)?.chi(c.a(), big_n)
}

/// Both sides of the non-resonant limit: enumeration of the open set and the
/// finite alternating sum over `S_n`.
#[derive(Clone, Debug, Serialize)]
pub struct MLimit {
    pub direct: QSeries,
    pub formula: QSeries,
    pub agreement: bool,
}

pub fn char_m_limit(a: &[i64], b: &[i64], cutoff: usize, convention: Convention) -> Result<MLimit> {
    let c = TupleConstraint::open(a.to_vec(), b.to_vec())?;
    let direct = char_direct(&c, cutoff);
    let formula = affineweyl::m_limit_formula(a, b, cutoff, convention)?;
    let agreement = direct == formula;
    Ok(MLimit { direct, formula, agreement })
}

/// Generating function of `(k,r)`-admissible partitions by deviation degree.
pub fn char_kr(k: usize, r: i64, a: &[i64], cutoff: usize) -> Result<QSeries> {
    let vac = VacuumPattern::new(k, r, a.to_vec())?;
    Ok(count_by_degree(enumerate_kr(&vac, cutoff).into_iter().map(|(d, _)| d), cutoff))
}

/// `1/(q)_∞^m`.
pub fn euler_power(m: usize, cutoff: usize) -> QSeries {
    let e = euler_inverse(cutoff);
    (0..m).fold(QSeries::one(cutoff), |acc, _| &acc * &e)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ising() -> TupleConstraint {
        TupleConstraint::cyclic(vec![0, 2], vec![0, 1]).unwrap()
    }

    #[test]
    fn direct_examples() {
        let s = char_direct(&ising(), 4);
        assert_eq!(s.coeffs()[..3], [1, 1, 3].map(BigInt::from));
        let open = TupleConstraint::open(vec![0], vec![0]).unwrap();
        assert_eq!(char_direct(&open, 3).coeff(1), BigInt::from(1));
    }

    #[test]
    fn finitized_boundaries() {
        let c = ising();
        assert_eq!(char_finitized(&c, &[0, 0], 6).unwrap(), QSeries::one(6));
        assert!(char_finitized(&c, &[-1, 3], 6).unwrap().is_zero());
        assert_eq!(char_finitized(&c, &[6, 6], 6).unwrap(), char_direct(&c, 6));
    }

    #[test]
    fn recursion_matches_enumeration_small() {
        let c = ising();
        for n1 in 0..=3 {
            for n2 in 0..=3 {
                let big_n = [n1, n2];
                if c.b().iter().enumerate().any(|(i, b)| big_n[(i + 1) % 2] - big_n[i] > b + 1) {
                    continue;
                }
                let rec = char_recursive(&c, &big_n, 8).unwrap();
                let enu = char_finitized(&c, &big_n, 8).unwrap();
                assert_eq!(rec, enu, "N = {big_n:?}");
            }
        }
    }

    #[test]
    fn recursion_rejects_outside_region() {
        let c = ising();
        assert!(char_recursive(&c, &[0, 2], 5).is_err());
        let trivial = TupleConstraint::cyclic(vec![0, 0], vec![0, 1]).unwrap();
        assert!(char_recursive(&trivial, &[1, 1], 5).is_err());
        assert!(char_recursive(&c, &[-1, 0], 5).is_err());
    }

    #[test]
    fn kr_small() {
        assert_eq!(char_kr(2, 3, &[1, 2], 0).unwrap(), QSeries::one(0));
        // k = 1, r = 1: strictly decreasing rows, so the deviations form an
        // ordinary partition
        assert_eq!(char_kr(1, 1, &[1], 10).unwrap(), euler_inverse(10));
    }
}
