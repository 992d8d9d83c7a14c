//! Parameter batteries shared by the acceptance run and the front end.

use num_integer::Integer;

use crate::affineweyl::BosonicPoint;
use crate::partitions::TupleConstraint;

/// Compositions of `total` into `parts` non-negative entries, lexicographic.
pub fn compositions(total: i64, parts: usize) -> Vec<Vec<i64>> {
    if parts == 0 {
        return if total == 0 { vec![vec![]] } else { vec![] };
    }
    if parts == 1 {
        return vec![vec![total]];
    }
    (0..=total)
        .flat_map(|first| {
            compositions(total - first, parts - 1).into_iter().map(move |mut rest| {
                rest.insert(0, first);
                rest
            })
        })
        .collect()
}

/// Cyclic constraints with `p, p' > n`, coprime, `p' + p ≤ max_sum`.
pub fn cyclic_battery(n: usize, max_sum: i64) -> Vec<TupleConstraint> {
    let n_i = n as i64;
    let mut out = Vec::new();
    for pp in n_i + 1..max_sum {
        for p in n_i + 1..=max_sum - pp {
            if pp.gcd(&p) != 1 {
                continue;
            }
            for a in compositions(pp - n_i, n) {
                for b in compositions(p - n_i, n) {
                    out.push(TupleConstraint::cyclic(a.clone(), b).expect("non-negative entries"));
                }
            }
        }
    }
    out
}

/// All `N` with entries in `0..=max` and `N_{i+1} − N_i ≤ b_i + 1` cyclically.
pub fn region(b: &[i64], max: i64) -> Vec<Vec<i64>> {
    let n = b.len();
    let mut out = Vec::new();
    let mut cur = vec![0i64; n];
    loop {
        if (0..n).all(|i| cur[(i + 1) % n] - cur[i] <= b[i] + 1) {
            out.push(cur.clone());
        }
        let mut k = 0;
        while k < n && cur[k] == max {
            cur[k] = 0;
            k += 1;
        }
        if k == n {
            return out;
        }
        cur[k] += 1;
    }
}

/// Cyclic battery for `n = 2, 3` with up to six nonzero finitizations per point.
pub fn bosonic_battery(max_sum: i64) -> Vec<BosonicPoint> {
    let mut pts = Vec::new();
    for n in [2usize, 3] {
        for c in cyclic_battery(n, max_sum) {
            let max = if n == 2 { 3 } else { 2 };
            let finitizations = region(c.b(), max).into_iter().filter(|v| v.iter().any(|&x| x > 0)).take(6).collect();
            pts.push(BosonicPoint { constraint: c, finitizations });
        }
    }
    pts
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn composition_counts() {
        assert_eq!(compositions(3, 2).len(), 4);
        assert_eq!(compositions(2, 3).len(), 6);
        assert_eq!(compositions(1, 0).len(), 0);
    }

    #[test]
    fn battery_constraints_are_coprime() {
        for c in cyclic_battery(3, 12) {
            let (pp, p) = (c.p_prime().unwrap(), c.p().unwrap());
            assert!(pp > 3 && p > 3 && pp + p <= 12 && pp.gcd(&p) == 1);
        }
    }

    #[test]
    fn region_respects_steps() {
        let b = [0, 1];
        let r = region(&b, 2);
        assert!(r.contains(&vec![0, 0]));
        assert!(!r.contains(&vec![0, 2]));
        assert!(r.contains(&vec![2, 0]));
    }
}
