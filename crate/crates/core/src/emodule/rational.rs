//! Eigenvalues of `ψ^±(z)` as one rational function with two expansions.

use std::collections::BTreeMap;
use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use super::params::{Mono, ParamSpec};
use crate::error::{invalid, Error, Result};

/// `κ ∏ (1 − c/z)^m` with `c` a specialized monomial (prime exponents).
/// Factors with equal `c` are merged, so two functions are equal iff their
/// canonical forms are.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RationalFunc {
    kappa: BigRational,
    factors: BTreeMap<Mono, i32>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Expansion {
    /// In `z⁻¹`, around `z = ∞`: the `ψ^+` series.
    Plus,
    /// In `z`, around `z = 0`: the `ψ^−` series.
    Minus,
}

fn poly_mul(a: &[BigRational], b: &[BigRational], order: usize) -> Vec<BigRational> {
    let mut out = vec![BigRational::zero(); order + 1];
    for (i, x) in a.iter().enumerate().take(order + 1) {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate().take(order + 1 - i) {
            out[i + j] += x * y;
        }
    }
    out
}

impl RationalFunc {
    pub fn one() -> Self {
        Self { kappa: BigRational::one(), factors: BTreeMap::new() }
    }

    /// From symbolic factors `(c, m)` meaning `(1 − c/z)^m`.
    pub fn from_symbolic(spec: &ParamSpec, factors: &[(Mono, i32)]) -> Self {
        let mut out = Self::one();
        for &(c, m) in factors {
            *out.factors.entry(spec.specialize(c)).or_default() += m;
        }
        out.factors.retain(|_, m| *m != 0);
        out
    }

    /// From factors whose `c` are already prime exponents.
    pub fn from_specialized(factors: &[(Mono, i32)]) -> Self {
        let mut out = Self::one();
        for &(c, m) in factors {
            *out.factors.entry(c).or_default() += m;
        }
        out.factors.retain(|_, m| *m != 0);
        out
    }

    pub fn kappa(&self) -> &BigRational {
        &self.kappa
    }

    pub fn factors(&self) -> impl Iterator<Item = (&Mono, i32)> {
        self.factors.iter().map(|(c, m)| (c, *m))
    }

    pub fn mul(&self, o: &Self) -> Self {
        let mut out = self.clone();
        out.kappa *= &o.kappa;
        for (c, m) in &o.factors {
            *out.factors.entry(*c).or_default() += m;
        }
        out.factors.retain(|_, m| *m != 0);
        out
    }

    /// `Σ m`; zero for every ψ eigenvalue.
    pub fn balance(&self) -> i32 {
        self.factors.values().sum()
    }

    /// Poles as `(c, order)`.
    pub fn poles(&self) -> Vec<(Mono, i32)> {
        self.factors.iter().filter(|(_, m)| **m < 0).map(|(c, m)| (*c, -m)).collect()
    }

    /// For a simple pole at `z = c`: the coefficient `A` in
    /// `ψ^+(z) − ψ^−(z) = Σ_c A_c δ(c/z)`, i.e. `κ ∏_{c' ≠ c} (1 − c'/c)^{m'}`.
    pub fn delta_weight(&self, spec: &ParamSpec, c: &Mono) -> Result<BigRational> {
        match self.factors.get(c) {
            Some(-1) => {}
            Some(m) if *m < -1 => return Err(Error::Pole(format!("pole of order {} at {c:?}", -m))),
            _ => return invalid("not a pole"),
        }
        let cv = spec.value_of(*c);
        let mut out = self.kappa.clone();
        for (d, m) in &self.factors {
            if d == c {
                continue;
            }
            let f = BigRational::one() - spec.value_of(*d) / &cv;
            for _ in 0..m.unsigned_abs() {
                if *m > 0 {
                    out *= &f;
                } else {
                    out /= &f;
                }
            }
        }
        Ok(out)
    }

    /// Series coefficients `ψ^+_0, ψ^+_1, …` (of `z^{−k}`) or
    /// `ψ^−_0, ψ^−_{−1}, …` (of `z^{k}`), up to `order`.
    pub fn expand(&self, spec: &ParamSpec, which: Expansion, order: usize) -> Result<Vec<BigRational>> {
        let mut series = vec![BigRational::zero(); order + 1];
        let mut lead = self.kappa.clone();
        if which == Expansion::Minus {
            if self.balance() != 0 {
                return invalid("the z → 0 expansion needs a balanced function");
            }
            // (1 − c/z) = (−c/z)(1 − z/c); the z-powers cancel
            for (c, m) in &self.factors {
                let v = -spec.value_of(*c);
                for _ in 0..m.unsigned_abs() {
                    if *m > 0 {
                        lead *= &v;
                    } else {
                        lead /= &v;
                    }
                }
            }
        }
        series[0] = lead;
        for (c, m) in &self.factors {
            let x = match which {
                Expansion::Plus => spec.value_of(*c),
                Expansion::Minus => BigRational::one() / spec.value_of(*c),
            };
            // (1 − x t)^{±1} as a series in t
            let factor: Vec<BigRational> = if *m > 0 {
                let mut f = vec![BigRational::one(), -x];
                f.truncate(order + 1);
                f
            } else {
                let mut f = Vec::with_capacity(order + 1);
                let mut p = BigRational::one();
                for _ in 0..=order {
                    f.push(p.clone());
                    p *= &x;
                }
                f
            };
            for _ in 0..m.unsigned_abs() {
                series = poly_mul(&series, &factor, order);
            }
        }
        Ok(series)
    }

    /// `ψ^+_k` (`k ≥ 0`) or `ψ^−_k` (`k ≤ 0`).
    pub fn mode(&self, spec: &ParamSpec, k: i64, which: Expansion) -> Result<BigRational> {
        match which {
            Expansion::Plus if k < 0 => invalid(format!("ψ^+_{k} needs k >= 0")),
            Expansion::Minus if k > 0 => invalid(format!("ψ^-_{k} needs k <= 0")),
            _ => Ok(self.expand(spec, which, k.unsigned_abs() as usize)?.pop().unwrap()),
        }
    }

    /// Multiplies the truncated expansion back by the denominator and compares
    /// with the numerator through order `order`.
    pub fn expansion_consistent(&self, spec: &ParamSpec, which: Expansion, order: usize) -> Result<bool> {
        let series = self.expand(spec, which, order)?;
        let (num, den) = self.numerator_denominator(spec);
        let (num, den) = match which {
            Expansion::Minus => (num, den),
            Expansion::Plus => {
                // in w = 1/z both become polynomials after multiplying by w^d
                let d = num.len().max(den.len()) - 1;
                let rev = |p: &[BigRational]| {
                    let mut v = vec![BigRational::zero(); d + 1];
                    for (i, c) in p.iter().enumerate() {
                        v[d - i] = c.clone();
                    }
                    v
                };
                (rev(&num), rev(&den))
            }
        };
        let prod = poly_mul(&series, &den, order);
        Ok((0..=order).all(|i| prod[i] == num.get(i).cloned().unwrap_or_else(BigRational::zero)))
    }

    /// Numerator and denominator as polynomials in `z`, lowest degree first.
    pub fn numerator_denominator(&self, spec: &ParamSpec) -> (Vec<BigRational>, Vec<BigRational>) {
        let mut num = vec![self.kappa.clone()];
        let mut den = vec![BigRational::one()];
        for (c, m) in &self.factors {
            let lin = vec![-spec.value_of(*c), BigRational::one()];
            let target = if *m > 0 { &mut num } else { &mut den };
            for _ in 0..m.unsigned_abs() {
                let deg = target.len() + 1;
                *target = poly_mul(target, &lin, deg);
                target.truncate(deg);
            }
        }
        // (1 − c/z)^m = (z − c)^m z^{−m}
        let b = self.balance();
        let shift = |v: &mut Vec<BigRational>, k: i32| {
            for _ in 0..k {
                v.insert(0, BigRational::zero());
            }
        };
        if b > 0 {
            shift(&mut den, b);
        } else {
            shift(&mut num, -b);
        }
        (num, den)
    }
}

impl fmt::Display for RationalFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.kappa)?;
        for (c, m) in &self.factors {
            let e: Vec<String> = c.0.iter().map(|x| x.to_string()).collect();
            write!(f, "·(1 - p^[{}]/z)^{m}", e.join(","))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fock_vacuum(spec: &ParamSpec) -> RationalFunc {
        RationalFunc::from_symbolic(spec, &[(Mono::q2() * Mono::u(0), 1), (Mono::u(0), -1)])
    }

    #[test]
    fn level_of_fock_vacuum() {
        let spec = ParamSpec::generic(&[2, 3, 5], 1).unwrap();
        let f = fock_vacuum(&spec);
        assert_eq!(f.mode(&spec, 0, Expansion::Plus).unwrap(), BigRational::one());
        assert_eq!(f.mode(&spec, 0, Expansion::Minus).unwrap(), spec.q2());
        assert!(f.mode(&spec, -1, Expansion::Plus).is_err());
    }

    #[test]
    fn expansion_reproduces_numerator() {
        let spec = ParamSpec::generic(&[2, 3, 5], 1).unwrap();
        let f = fock_vacuum(&spec).mul(&RationalFunc::from_symbolic(
            &spec,
            &[(Mono::q3() * Mono::u(0), 1), (Mono::q1() * Mono::u(0), -1)],
        ));
        assert!(f.expansion_consistent(&spec, Expansion::Plus, 6).unwrap());
        assert!(f.expansion_consistent(&spec, Expansion::Minus, 6).unwrap());
    }

    #[test]
    fn delta_weight_of_simple_pole() {
        let spec = ParamSpec::generic(&[2, 3, 5], 1).unwrap();
        let f = fock_vacuum(&spec);
        let (c, order) = f.poles()[0];
        assert_eq!(order, 1);
        // (1 − q2 u/z)/(1 − u/z): weight at z = u is 1 − q2
        assert_eq!(f.delta_weight(&spec, &c).unwrap(), BigRational::one() - spec.q2());
    }
}
