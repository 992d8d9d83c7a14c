//! Transport constants between two modules with a label bijection.
//!
//! A map `|x⟩ ↦ c_x |φ(x)⟩` intertwines `e(z)` and `f(z)` iff every edge
//! `x → y` satisfies `c_y C_src = c_x C_dst` (for `e`) and
//! `c_x F_src = c_y F_dst` (for `f`, from `y` down to `x`), with equal delta
//! supports on both sides. The constants are propagated along a spanning
//! tree from the highest vector; every other edge is then a cycle condition.

use std::collections::{BTreeMap, HashMap, VecDeque};

use num_rational::BigRational;
use num_traits::{One, Zero};
use thiserror::Error;

use super::action::{Module, Term};
use super::params::ParamSpec;
use super::spaces::{FatModule, FockTensor, Space};
use crate::error::{self, Error as CoreError};
use crate::partitions::{self, PartitionTuple, TailedPartition};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TransportError {
    #[error("label map is not a bijection: {0}")]
    NotBijective(String),
    #[error("ψ eigenvalues differ at {0}")]
    Spectrum(String),
    #[error("delta supports differ on edge {0}")]
    Support(String),
    #[error("zero/nonzero mismatch on edge {0}")]
    ZeroPattern(String),
    #[error("cycle condition fails on edge {0}")]
    Cycle(String),
    #[error(transparent)]
    Core(#[from] CoreError),
}

/// Solved constants, keyed by source label.
#[derive(Clone, Debug)]
pub struct Transport<L: Ord> {
    pub constants: BTreeMap<L, BigRational>,
    pub edges_checked: usize,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Op {
    E,
    F,
}

/// One edge `x → y` (`e`) or `y → x` (`f`) expressed on source labels, with
/// the source and destination coefficients.
struct Edge<L> {
    op: Op,
    lower: L,
    upper: L,
    src: BigRational,
    dst: BigRational,
}

fn terms<S: Space>(m: &Module<S>, l: &S::Label, op: Op) -> error::Result<std::sync::Arc<Vec<Term<S::Label>>>> {
    match op {
        Op::E => m.e_terms(l),
        Op::F => m.f_terms(l),
    }
}

/// Solves for transport constants up to degree `d`.
pub fn solve_transport_constants<S, T, M>(
    src: &Module<S>,
    dst: &Module<T>,
    map: M,
    d: usize,
) -> Result<Transport<S::Label>, TransportError>
where
    S: Space,
    T: Space,
    M: Fn(&S::Label) -> error::Result<T::Label>,
{
    let labels = src.space().basis(d);
    let dst_labels = dst.space().basis(d);
    if labels.len() != dst_labels.len() {
        return Err(TransportError::NotBijective(format!(
            "{} source labels vs {} destination labels up to degree {d}",
            labels.len(),
            dst_labels.len()
        )));
    }
    let mut image: HashMap<S::Label, T::Label> = HashMap::new();
    let mut preimage: HashMap<T::Label, S::Label> = HashMap::new();
    for l in &labels {
        let t = map(l)?;
        if src.space().degree(l) != dst.space().degree(&t) {
            return Err(TransportError::NotBijective(format!("{l} ↦ {t} changes degree")));
        }
        if !dst.space().is_member(&t) {
            return Err(TransportError::NotBijective(format!("{l} ↦ {t} is not a basis label")));
        }
        if let Some(prev) = preimage.insert(t.clone(), l.clone()) {
            return Err(TransportError::NotBijective(format!("{prev} and {l} both map to {t}")));
        }
        image.insert(l.clone(), t);
    }

    let d = d as i64;
    let mut edges: Vec<Edge<S::Label>> = Vec::new();
    for x in &labels {
        let tx = &image[x];
        if *src.psi(x) != *dst.psi(tx) {
            return Err(TransportError::Spectrum(format!("{x} ↦ {tx}")));
        }
        for op in [Op::E, Op::F] {
            let st = terms(src, x, op)?;
            let dt = terms(dst, tx, op)?;
            let within = |deg: i64| deg <= d;
            let mut matched = 0;
            for t in st.iter().filter(|t| within(src.space().degree(&t.target))) {
                let want = &image[&t.target];
                let name = format!("{x} -> {}", t.target);
                let Some(u) = dt.iter().find(|u| &u.target == want) else {
                    return Err(TransportError::ZeroPattern(name));
                };
                if src.spec().value_of(t.support) != dst.spec().value_of(u.support) {
                    return Err(TransportError::Support(name));
                }
                matched += 1;
                let (lower, upper) = if op == Op::E { (x, &t.target) } else { (&t.target, x) };
                edges.push(Edge { op, lower: lower.clone(), upper: upper.clone(), src: t.coeff.clone(), dst: u.coeff.clone() });
            }
            let extra = dt.iter().filter(|u| within(dst.space().degree(&u.target))).count();
            if extra != matched {
                return Err(TransportError::ZeroPattern(format!("{x}: destination has {extra} edges, source {matched}")));
            }
        }
    }

    // spanning forest from the highest vector (or the first label)
    let mut adj: HashMap<&S::Label, Vec<usize>> = HashMap::new();
    for (i, e) in edges.iter().enumerate() {
        adj.entry(&e.lower).or_default().push(i);
        adj.entry(&e.upper).or_default().push(i);
    }
    let mut constants: BTreeMap<S::Label, BigRational> = BTreeMap::new();
    let mut roots: Vec<S::Label> = src.space().highest().into_iter().collect();
    roots.extend(labels.iter().cloned());
    for root in roots {
        if constants.contains_key(&root) {
            continue;
        }
        constants.insert(root.clone(), BigRational::one());
        let mut queue = VecDeque::from([root]);
        while let Some(v) = queue.pop_front() {
            let cv = constants[&v].clone();
            for &i in adj.get(&v).map(Vec::as_slice).unwrap_or(&[]) {
                let e = &edges[i];
                // upper/lower ratio: e gives C_dst/C_src, f gives F_src/F_dst
                let ratio = match e.op {
                    Op::E => &e.dst / &e.src,
                    Op::F => &e.src / &e.dst,
                };
                let (other, c) = if e.lower == v { (&e.upper, &cv * &ratio) } else { (&e.lower, &cv / &ratio) };
                if !constants.contains_key(other) {
                    constants.insert(other.clone(), c);
                    queue.push_back(other.clone());
                }
            }
        }
    }

    for e in &edges {
        let (cl, cu) = (&constants[&e.lower], &constants[&e.upper]);
        let ok = match e.op {
            Op::E => cu * &e.src == cl * &e.dst,
            Op::F => cl * &e.src == cu * &e.dst,
        };
        if !ok {
            let op = if e.op == Op::E { "e" } else { "f" };
            return Err(TransportError::Cycle(format!("{op}: {} - {}", e.lower, e.upper)));
        }
    }
    if constants.values().any(Zero::is_zero) {
        return Err(TransportError::Cycle("a constant vanished".into()));
    }
    Ok(Transport { constants, edges_checked: edges.len() })
}

/// `𝓕(u_1) ⊗ 𝓕(u_2) → 𝓕(u_2) ⊗ 𝓕(u_1)`, swapping the two entries.
pub fn factor_swap(seeds: &[u64]) -> error::Result<(FockTensor, FockTensor)> {
    let spec = ParamSpec::generic(seeds, 2)?;
    let src = FockTensor::tensor(spec.clone());
    let dst = src.with_spec(spec.permute_slots(&[1, 0])?)?;
    Ok((src, dst))
}

pub fn swap_labels(t: &PartitionTuple) -> error::Result<PartitionTuple> {
    let mut e = t.entries.clone();
    e.swap(0, 1);
    Ok(PartitionTuple::new(e))
}

/// `M^{p',p}_{a,b} → M^{p',p}_{a',b'}` with `a', b'` rotated one step left and
/// the chain restarted at `u_2`.
pub fn rotation(seeds: &[u64], a: &[i64], b: &[i64]) -> error::Result<(FockTensor, FockTensor)> {
    let src = FockTensor::mpp(seeds, a, b)?;
    let n = src.n();
    let mut ra = a.to_vec();
    ra.rotate_left(1);
    let mut rb = b.to_vec();
    rb.rotate_left(1);
    let spec = src.spec().with_origin(src.spec().slot_origin(1), &ra[..n - 1], &rb[..n - 1])?;
    let dst = FockTensor::mpp_with_spec(spec, &ra, &rb)?;
    Ok((src, dst))
}

pub fn rotate_labels(t: &PartitionTuple) -> error::Result<PartitionTuple> {
    let mut e = t.entries.clone();
    e.rotate_left(1);
    Ok(PartitionTuple::new(e))
}

/// `M^{n+r,n+1}_{a,0} → G^{n,r}_a` on the same resonance; `a` has `n` entries summing to `r`.
pub fn interleaving(seeds: &[u64], n: usize, r: i64, a: &[i64]) -> error::Result<(FockTensor, FatModule)> {
    let dom = partitions::iota_domain(n, r, a)?;
    let src = FockTensor::mpp(seeds, a, dom.b())?;
    let dst = FatModule::g(seeds, n, r, a)?;
    Ok((src, dst))
}

pub fn interleave_label(t: &PartitionTuple, n: usize, r: i64, a: &[i64]) -> error::Result<TailedPartition> {
    partitions::iota(t, n, r, a)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_map_has_unit_constants() {
        let m = Module::new(FockTensor::tensor(ParamSpec::generic(&[2, 3, 5, 7], 2).unwrap()));
        let t = solve_transport_constants(&m, &m, |l| Ok(l.clone()), 3).unwrap();
        assert!(t.constants.values().all(One::is_one));
        assert!(t.edges_checked > 0);
    }

    #[test]
    fn swap_small_degree() {
        let (a, b) = factor_swap(&[2, 3, 5, 7]).unwrap();
        let (a, b) = (Module::new(a), Module::new(b));
        solve_transport_constants(&a, &b, swap_labels, 3).unwrap();
    }

    #[test]
    fn swap_without_reordering_parameters_fails() {
        let spec = ParamSpec::generic(&[2, 3, 5, 7], 2).unwrap();
        let m = Module::new(FockTensor::tensor(spec));
        assert!(solve_transport_constants(&m, &m, swap_labels, 2).is_err());
    }
}
