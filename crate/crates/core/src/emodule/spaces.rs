//! Bases and symbolic matrix coefficients of the implemented modules.
//!
//! A space only describes coefficients; [`super::action::Module`] evaluates
//! them at the attached parameters and enforces the sub/quotient rules.

use std::fmt::{self, Debug, Display};
use std::hash::Hash;

use serde::Serialize;

use super::params::{Mono, ParamSpec, Scalar};
use crate::error::{invalid, Error, Result};
use crate::partitions::{
    enumerate_by_degree, enumerate_kr, enumerate_unconstrained, is_kr_admissible, is_member, PartitionTuple,
    TailedPartition, TupleConstraint, VacuumPattern,
};

pub trait LabelLike: Clone + Ord + Hash + Debug + Display + Send + Sync + Serialize {}
impl<T: Clone + Ord + Hash + Debug + Display + Send + Sync + Serialize> LabelLike for T {}

/// How coefficients leaving or entering the basis are treated.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Closure {
    /// Every generated target is a basis label.
    Whole,
    /// Coefficients into non-members must vanish.
    Sub,
    /// Coefficients into non-members are dropped; coefficients from
    /// non-members of the ambient space into members must vanish.
    Quotient,
}

/// `coeff · δ(support/z)` taking the source to `target`. `site` records
/// (slot, row) for error messages.
#[derive(Clone, Debug)]
pub struct RawTerm<L> {
    pub target: L,
    pub support: Mono,
    pub coeff: Scalar,
    pub site: (usize, usize),
}

pub trait Space: Send + Sync {
    type Label: LabelLike;

    fn name(&self) -> String;
    fn spec(&self) -> &ParamSpec;
    fn closure(&self) -> Closure;
    /// Members of degree at most `d` (by absolute degree for `V`).
    fn basis(&self, d: usize) -> Vec<Self::Label>;
    /// Labels of the space the basis is a quotient of.
    fn ambient(&self, d: usize) -> Vec<Self::Label> {
        self.basis(d)
    }
    fn degree(&self, l: &Self::Label) -> i64;
    fn is_member(&self, l: &Self::Label) -> bool;
    fn highest(&self) -> Option<Self::Label>;
    /// Stated highest weight as symbolic `(c, m)` factors of `∏(1 − c/z)^m`.
    fn highest_weight(&self) -> Option<Vec<(Mono, i32)>>;
    /// Stated `ψ^−_0`; `ψ^+_0 = 1` everywhere.
    fn level(&self) -> Mono;
    fn psi_factors(&self, l: &Self::Label) -> Vec<(Mono, i32)>;
    fn e_raw(&self, l: &Self::Label) -> Vec<RawTerm<Self::Label>>;
    fn f_raw(&self, l: &Self::Label) -> Vec<RawTerm<Self::Label>>;
}

fn x_row(part: i64, row: usize, step: Mono, u: Mono) -> Mono {
    Mono::q1().pow(part) * step.pow(row as i64 - 1) * u
}

/// Eigenvalue factors of one row with box position `x`:
/// `(1 − q3 x/z)(1 − q2 x/z) / ((1 − x/z)(1 − x/(q1 z)))`.
fn row_factors(x: Mono, m: i32, out: &mut Vec<(Mono, i32)>) {
    out.push((Mono::q3() * x, m));
    out.push((Mono::q2() * x, m));
    out.push((x, -m));
    out.push((x / Mono::q1(), -m));
}

/// `(1 − Q X/z)/(1 − X/z)`.
fn vacuum_factor(q: Mono, x: Mono, out: &mut Vec<(Mono, i32)>) {
    out.push((q * x, 1));
    out.push((x, -1));
}

fn e_prefactor() -> Scalar {
    let mut s = Scalar::new(Mono::one());
    s.push(Mono::q1(), -1);
    s
}

fn f_prefactor() -> Scalar {
    let mut s = Scalar::new(Mono::q1());
    s.push(Mono::q1(), -1);
    s
}

// ---------------------------------------------------------------- V(u)^⊗n

/// Basis label `|i_1⟩ ⊗ … ⊗ |i_n⟩` of a tensor product of vector representations.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct Levels(pub Vec<i64>);

impl fmt::Display for Levels {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self.0.iter().map(|i| i.to_string()).collect();
        write!(f, "|{}>", s.join(","))
    }
}

/// `V(u_1) ⊗ … ⊗ V(u_n)`.
#[derive(Clone, Debug)]
pub struct VectorTensor {
    spec: ParamSpec,
}

impl VectorTensor {
    pub fn new(spec: ParamSpec) -> Self {
        Self { spec }
    }

    fn slot_psi(&self, k: usize, i: i64, out: &mut Vec<(Mono, i32)>) {
        row_factors(Mono::q1().pow(i) * Mono::u(k), 1, out);
    }
}

fn integer_vectors(n: usize, budget: i64) -> Vec<Vec<i64>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for first in -budget..=budget {
        for mut rest in integer_vectors(n - 1, budget - first.abs()) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

impl Space for VectorTensor {
    type Label = Levels;

    fn name(&self) -> String {
        format!("V^{}", self.spec.slots())
    }
    fn spec(&self) -> &ParamSpec {
        &self.spec
    }
    fn closure(&self) -> Closure {
        Closure::Whole
    }
    fn basis(&self, d: usize) -> Vec<Levels> {
        integer_vectors(self.spec.slots(), d as i64).into_iter().map(Levels).collect()
    }
    fn degree(&self, l: &Levels) -> i64 {
        l.0.iter().sum()
    }
    fn is_member(&self, l: &Levels) -> bool {
        l.0.len() == self.spec.slots()
    }
    fn highest(&self) -> Option<Levels> {
        None
    }
    fn highest_weight(&self) -> Option<Vec<(Mono, i32)>> {
        None
    }
    fn level(&self) -> Mono {
        Mono::one()
    }
    fn psi_factors(&self, l: &Levels) -> Vec<(Mono, i32)> {
        let mut out = Vec::new();
        for (k, &i) in l.0.iter().enumerate() {
            self.slot_psi(k, i, &mut out);
        }
        out
    }
    fn e_raw(&self, l: &Levels) -> Vec<RawTerm<Levels>> {
        (0..l.0.len())
            .map(|k| {
                let support = Mono::q1().pow(l.0[k]) * Mono::u(k);
                let mut coeff = e_prefactor();
                let mut left = Vec::new();
                for (j, &i) in l.0[..k].iter().enumerate() {
                    self.slot_psi(j, i, &mut left);
                }
                coeff.absorb_at(&left, support);
                let mut target = l.clone();
                target.0[k] += 1;
                RawTerm { target, support, coeff, site: (k, 0) }
            })
            .collect()
    }
    fn f_raw(&self, l: &Levels) -> Vec<RawTerm<Levels>> {
        (0..l.0.len())
            .map(|k| {
                let support = Mono::q1().pow(l.0[k] - 1) * Mono::u(k);
                let mut coeff = f_prefactor();
                let mut right = Vec::new();
                for (j, &i) in l.0.iter().enumerate().skip(k + 1) {
                    self.slot_psi(j, i, &mut right);
                }
                coeff.absorb_at(&right, support);
                let mut target = l.clone();
                target.0[k] -= 1;
                RawTerm { target, support, coeff, site: (k, 0) }
            })
            .collect()
    }
}

// ---------------------------------------------------------- Fock tensors

/// `F(u_1) ⊗ … ⊗ F(u_n)`, optionally cut down to a constrained set.
#[derive(Clone, Debug)]
pub struct FockTensor {
    spec: ParamSpec,
    label: String,
    constraint: Option<TupleConstraint>,
    /// The open constraint a quotient is taken of.
    ambient: Option<TupleConstraint>,
    closure: Closure,
}

/// `ψ_∅(X/z) = (1 − q2 X/z)/(1 − X/z)`.
fn fock_vacuum(x: Mono, out: &mut Vec<(Mono, i32)>) {
    vacuum_factor(Mono::q2(), x, out);
}

impl FockTensor {
    /// Single Fock module, or a tensor product with one slot per spec slot.
    pub fn tensor(spec: ParamSpec) -> Self {
        let label = if spec.slots() == 1 { "F".to_string() } else { format!("F^{}", spec.slots()) };
        Self { spec, label, constraint: None, ambient: None, closure: Closure::Whole }
    }

    /// The submodule of the shifted tensor product cut out by `(a, b)` (`n − 1` entries each).
    pub fn mab(seeds: &[u64], a: &[i64], b: &[i64]) -> Result<Self> {
        let spec = ParamSpec::shifted(seeds, a, b)?;
        let c = TupleConstraint::open(a.to_vec(), b.to_vec())?;
        Ok(Self {
            spec,
            label: format!("M_{{a={a:?},b={b:?}}}"),
            constraint: Some(c),
            ambient: None,
            closure: Closure::Sub,
        })
    }

    /// The quotient at `q1^{p'} q3^p = 1`; `a`, `b` carry all `n` entries.
    pub fn mpp(seeds: &[u64], a: &[i64], b: &[i64]) -> Result<Self> {
        let c = TupleConstraint::cyclic(a.to_vec(), b.to_vec())?;
        let n = c.n();
        let (pp, p) = (c.p_prime().unwrap(), c.p().unwrap());
        let spec = ParamSpec::resonance_pp(seeds, pp, p, &a[..n - 1], &b[..n - 1])?;
        Self::mpp_with_spec(spec, a, b)
    }

    /// As [`Self::mpp`] with a prepared parameter set (for rotated chains).
    pub fn mpp_with_spec(spec: ParamSpec, a: &[i64], b: &[i64]) -> Result<Self> {
        let c = TupleConstraint::cyclic(a.to_vec(), b.to_vec())?;
        let n = c.n();
        if spec.slots() != n {
            return Err(Error::Arity { expected: n, got: spec.slots() });
        }
        let open = TupleConstraint::open(a[..n - 1].to_vec(), b[..n - 1].to_vec())?;
        Ok(Self {
            label: format!("M^{{{},{}}}_{{a={a:?},b={b:?}}}", c.p_prime().unwrap(), c.p().unwrap()),
            spec,
            constraint: Some(c),
            ambient: Some(open),
            closure: Closure::Quotient,
        })
    }

    /// The full shifted tensor product, with no constraint imposed.
    pub fn shifted_full(seeds: &[u64], a: &[i64], b: &[i64]) -> Result<Self> {
        let spec = ParamSpec::shifted(seeds, a, b)?;
        Ok(Self {
            spec,
            label: format!("F^{}_shifted{{a={a:?},b={b:?}}}", a.len() + 1),
            constraint: None,
            ambient: None,
            closure: Closure::Whole,
        })
    }

    pub fn with_spec(&self, spec: ParamSpec) -> Result<Self> {
        if spec.slots() != self.spec.slots() {
            return Err(Error::Arity { expected: self.spec.slots(), got: spec.slots() });
        }
        Ok(Self { spec, ..self.clone() })
    }

    pub fn n(&self) -> usize {
        self.spec.slots()
    }

    pub fn constraint(&self) -> Option<&TupleConstraint> {
        self.constraint.as_ref()
    }

    fn slot_u(&self, k: usize) -> Mono {
        Mono::u(k)
    }

    /// `ψ` of one Fock slot.
    fn slot_psi(&self, k: usize, lam: &crate::partitions::Partition, out: &mut Vec<(Mono, i32)>) {
        let u = self.slot_u(k);
        fock_vacuum(u, out);
        for j in 1..=lam.len() {
            row_factors(x_row(lam.part(j), j, Mono::q3(), u), 1, out);
            row_factors(x_row(0, j, Mono::q3(), u), -1, out);
        }
    }

    fn member_of(c: &TupleConstraint, t: &PartitionTuple) -> bool {
        is_member(t, c).unwrap_or(false)
    }
}

impl Space for FockTensor {
    type Label = PartitionTuple;

    fn name(&self) -> String {
        self.label.clone()
    }
    fn spec(&self) -> &ParamSpec {
        &self.spec
    }
    fn closure(&self) -> Closure {
        self.closure
    }
    fn basis(&self, d: usize) -> Vec<PartitionTuple> {
        let raw = match &self.constraint {
            Some(c) => enumerate_by_degree(c, d),
            None => enumerate_unconstrained(self.n(), d),
        };
        raw.into_iter().map(|(_, t)| t).collect()
    }
    fn ambient(&self, d: usize) -> Vec<PartitionTuple> {
        match &self.ambient {
            Some(c) => enumerate_by_degree(c, d).into_iter().map(|(_, t)| t).collect(),
            None => self.basis(d),
        }
    }
    fn degree(&self, l: &PartitionTuple) -> i64 {
        l.degree()
    }
    fn is_member(&self, l: &PartitionTuple) -> bool {
        l.n() == self.n() && self.constraint.as_ref().is_none_or(|c| Self::member_of(c, l))
    }
    fn highest(&self) -> Option<PartitionTuple> {
        Some(PartitionTuple::empty(self.n()))
    }
    fn highest_weight(&self) -> Option<Vec<(Mono, i32)>> {
        let mut out = Vec::new();
        for k in 0..self.n() {
            fock_vacuum(self.slot_u(k), &mut out);
        }
        Some(out)
    }
    fn level(&self) -> Mono {
        Mono::q2().pow(self.n() as i64)
    }
    fn psi_factors(&self, l: &PartitionTuple) -> Vec<(Mono, i32)> {
        let mut out = Vec::new();
        for (k, lam) in l.entries.iter().enumerate() {
            self.slot_psi(k, lam, &mut out);
        }
        out
    }
    fn e_raw(&self, l: &PartitionTuple) -> Vec<RawTerm<PartitionTuple>> {
        let mut out = Vec::new();
        for (k, lam) in l.entries.iter().enumerate() {
            let u = self.slot_u(k);
            let mut left = Vec::new();
            for (j, other) in l.entries[..k].iter().enumerate() {
                self.slot_psi(j, other, &mut left);
            }
            for i in lam.addable_rows() {
                let support = x_row(lam.part(i), i, Mono::q3(), u);
                let mut coeff = e_prefactor();
                let mut rows = left.clone();
                for j in 1..i {
                    row_factors(x_row(lam.part(j), j, Mono::q3(), u), 1, &mut rows);
                }
                coeff.absorb_at(&rows, support);
                let mut target = l.clone();
                target.entries[k] = lam.add_box(i).expect("addable");
                out.push(RawTerm { target, support, coeff, site: (k, i) });
            }
        }
        out
    }
    fn f_raw(&self, l: &PartitionTuple) -> Vec<RawTerm<PartitionTuple>> {
        let mut out = Vec::new();
        for (k, mu) in l.entries.iter().enumerate() {
            let u = self.slot_u(k);
            let mut right = Vec::new();
            for (j, other) in l.entries.iter().enumerate().skip(k + 1) {
                self.slot_psi(j, other, &mut right);
            }
            for i in mu.removable_rows() {
                let lam = mu.remove_box(i).expect("removable");
                let support = x_row(lam.part(i), i, Mono::q3(), u);
                let mut coeff = f_prefactor();
                let mut rows = right.clone();
                fock_vacuum(Mono::q3().pow(i as i64) * u, &mut rows);
                for j in i + 1..=lam.len() {
                    row_factors(x_row(lam.part(j), j, Mono::q3(), u), 1, &mut rows);
                    row_factors(x_row(0, j, Mono::q3(), u), -1, &mut rows);
                }
                coeff.absorb_at(&rows, support);
                let mut target = l.clone();
                target.entries[k] = lam;
                out.push(RawTerm { target, support, coeff, site: (k, i) });
            }
        }
        out
    }
}

// ------------------------------------------------------------- W and G

/// Which of `q2, q3` steps down the rows of the semi-infinite vector.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FatKind {
    /// `W^{k,r}_a(u)`: rows step by `q3`, level `(1, q3^k)`.
    W,
    /// `G^{k,r}_a`: `q2` and `q3` exchanged, level `(1, q2^k)`.
    G,
}

/// The semi-infinite modules on `(k, r)`-admissible partitions.
#[derive(Clone, Debug)]
pub struct FatModule {
    spec: ParamSpec,
    kind: FatKind,
    vacuum: VacuumPattern,
}

impl FatModule {
    /// `W^{k,r}_a(u)` at `q1^{1−r} q3^{k+1} = 1`.
    pub fn w(seeds: &[u64], k: usize, r: i64, a: &[i64]) -> Result<Self> {
        let vacuum = VacuumPattern::new(k, r, a.to_vec())?;
        Ok(Self { spec: ParamSpec::resonance_w(seeds, k, r)?, kind: FatKind::W, vacuum })
    }

    /// `G^{k,r}_a` at `q1^{k+r} q3^{k+1} = 1`.
    pub fn g(seeds: &[u64], k: usize, r: i64, a: &[i64]) -> Result<Self> {
        let vacuum = VacuumPattern::new(k, r, a.to_vec())?;
        let spec = ParamSpec::resonance_pp(seeds, k as i64 + r, k as i64 + 1, &[], &[])?;
        Ok(Self { spec, kind: FatKind::G, vacuum })
    }

    pub fn with_spec(&self, spec: ParamSpec) -> Result<Self> {
        if spec.slots() != 1 {
            return invalid("the semi-infinite modules have one spectral parameter");
        }
        Ok(Self { spec, ..self.clone() })
    }

    pub fn vacuum(&self) -> &VacuumPattern {
        &self.vacuum
    }

    fn step(&self) -> Mono {
        match self.kind {
            FatKind::W => Mono::q3(),
            FatKind::G => Mono::q2(),
        }
    }

    fn x(&self, l: &TailedPartition, j: usize) -> Mono {
        x_row(l.entry(j), j, self.step(), Mono::u(0))
    }

    fn x0(&self, j: usize) -> Mono {
        x_row(self.vacuum.entry(j), j, self.step(), Mono::u(0))
    }

    /// Rows past which both `Λ` and its neighbours are pure vacuum.
    fn reach(&self, l: &TailedPartition) -> usize {
        l.support_len() + self.vacuum.k() + 1
    }

    fn weakly_decreasing(&self, l: &TailedPartition) -> bool {
        (1..=self.reach(l) + self.vacuum.k()).all(|j| l.entry(j) >= l.entry(j + 1))
    }
}

impl Space for FatModule {
    type Label = TailedPartition;

    fn name(&self) -> String {
        let tag = match self.kind {
            FatKind::W => "W",
            FatKind::G => "G",
        };
        format!("{tag}^{{{},{}}}_{{a={:?}}}", self.vacuum.k(), self.vacuum.r(), self.vacuum.a())
    }
    fn spec(&self) -> &ParamSpec {
        &self.spec
    }
    fn closure(&self) -> Closure {
        Closure::Sub
    }
    fn basis(&self, d: usize) -> Vec<TailedPartition> {
        enumerate_kr(&self.vacuum, d).into_iter().map(|(_, t)| t).collect()
    }
    fn degree(&self, l: &TailedPartition) -> i64 {
        l.degree()
    }
    fn is_member(&self, l: &TailedPartition) -> bool {
        is_kr_admissible(l, self.vacuum.k(), self.vacuum.r())
    }
    fn highest(&self) -> Option<TailedPartition> {
        Some(TailedPartition::vacuum_of(&self.vacuum))
    }
    fn highest_weight(&self) -> Option<Vec<(Mono, i32)>> {
        let q = self.step();
        let mut out = Vec::new();
        for (i, c) in self.vacuum.c().iter().enumerate() {
            vacuum_factor(q, Mono::u(0) / Mono::q1().pow(*c) * q.pow(i as i64), &mut out);
        }
        Some(out)
    }
    fn level(&self) -> Mono {
        self.step().pow(self.vacuum.k() as i64)
    }
    fn psi_factors(&self, l: &TailedPartition) -> Vec<(Mono, i32)> {
        let mut out = self.highest_weight().unwrap();
        for j in 1..=l.support_len() {
            row_factors(self.x(l, j), 1, &mut out);
            row_factors(self.x0(j), -1, &mut out);
        }
        out
    }
    fn e_raw(&self, l: &TailedPartition) -> Vec<RawTerm<TailedPartition>> {
        let mut out = Vec::new();
        for i in 1..=self.reach(l) {
            let target = l.add_box(i);
            if !self.weakly_decreasing(&target) {
                continue;
            }
            let support = self.x(l, i);
            let mut coeff = e_prefactor();
            let mut rows = Vec::new();
            for j in 1..i {
                row_factors(self.x(l, j), 1, &mut rows);
            }
            coeff.absorb_at(&rows, support);
            out.push(RawTerm { target, support, coeff, site: (0, i) });
        }
        out
    }
    fn f_raw(&self, l: &TailedPartition) -> Vec<RawTerm<TailedPartition>> {
        let q = self.step();
        let k = self.vacuum.k();
        let mut out = Vec::new();
        for i in 1..=self.reach(l) {
            let target = l.remove_box(i);
            if !self.weakly_decreasing(&target) {
                continue;
            }
            let support = self.x(&target, i);
            let mut coeff = f_prefactor();
            let mut rows = Vec::new();
            for j in i + 1..=target.support_len() {
                row_factors(self.x(&target, j), 1, &mut rows);
                row_factors(self.x0(j), -1, &mut rows);
            }
            for j in 0..k {
                let x = x_row(self.vacuum.entry(i + j + 1), i + j + 1, q, Mono::u(0));
                vacuum_factor(q, x, &mut rows);
            }
            coeff.absorb_at(&rows, support);
            out.push(RawTerm { target, support, coeff, site: (0, i) });
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn vector_basis_size() {
        let v = VectorTensor::new(ParamSpec::generic(&[2, 3, 5, 7], 2).unwrap());
        // |i| + |j| ≤ 2 has 1 + 4 + 8 points
        assert_eq!(v.basis(2).len(), 13);
    }

    #[test]
    fn fat_vacuum_factor_matches_row_shift() {
        // u q1^{Λ^0_{i+j+1}} Q^{i+j} for j = 0 is the vacuum box position of row i + 1
        let g = FatModule::g(&[2, 3], 2, 3, &[1, 2]).unwrap();
        let vac = g.highest().unwrap();
        assert_eq!(g.x(&vac, 2), g.x0(2));
        assert!(g.is_member(&vac));
    }
}
