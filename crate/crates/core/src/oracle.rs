//! Brute-force partition enumeration.
//!
//! Everything here is computed by walking the partitions themselves, never
//! through a recurrence, so it can serve as ground truth.

use std::fmt;

use num_bigint::BigUint;
use serde::Serialize;

use crate::error::{Error, Result};

/// Largest `n` the materialising enumerators accept.
pub const ORACLE_CAP: u64 = 80;

/// A partition as a nonincreasing sequence of positive parts.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Partition(Vec<u64>);

impl Partition {
    /// Builds a partition from parts in any order.
    pub fn new(mut parts: Vec<u64>) -> Result<Self> {
        if parts.contains(&0) {
            return Err(Error::InvalidPartition("parts must be positive".into()));
        }
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Ok(Partition(parts))
    }

    pub fn parts(&self) -> &[u64] {
        &self.0
    }

    pub fn total(&self) -> u64 {
        self.0.iter().sum()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn largest(&self) -> Option<u64> {
        self.0.first().copied()
    }

    pub fn smallest(&self) -> Option<u64> {
        self.0.last().copied()
    }

    pub fn is_strict(&self) -> bool {
        self.0.windows(2).all(|w| w[0] > w[1])
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_parts(f, &self.0)
    }
}

/// A partition with pairwise distinct parts, stored strictly decreasing.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct StrictPartition(Vec<u64>);

impl StrictPartition {
    /// Builds a strict partition, rejecting zero or repeated parts.
    pub fn new(mut parts: Vec<u64>) -> Result<Self> {
        if parts.contains(&0) {
            return Err(Error::InvalidPartition("parts must be positive".into()));
        }
        parts.sort_unstable_by(|a, b| b.cmp(a));
        if parts.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidPartition(format!(
                "repeated part in {parts:?}"
            )));
        }
        Ok(StrictPartition(parts))
    }

    pub fn parts(&self) -> &[u64] {
        &self.0
    }

    pub fn total(&self) -> u64 {
        self.0.iter().sum()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl fmt::Display for StrictPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_parts(f, &self.0)
    }
}

fn write_parts(f: &mut fmt::Formatter<'_>, parts: &[u64]) -> fmt::Result {
    f.write_str("{")?;
    for (i, p) in parts.iter().enumerate() {
        if i > 0 {
            f.write_str(",")?;
        }
        write!(f, "{p}")?;
    }
    f.write_str("}")
}

fn check_cap(n: u64) -> Result<()> {
    if n > ORACLE_CAP {
        Err(Error::OracleCap { n, cap: ORACLE_CAP })
    } else {
        Ok(())
    }
}

/// Calls `visit` on every partition of `n` with all parts at most `max_part`,
/// in lexicographically descending order. Parts are handed over nonincreasing.
pub fn for_each_partition(n: u64, max_part: u64, visit: &mut impl FnMut(&[u64])) {
    let mut parts = Vec::new();
    walk(n, max_part.min(n), 1, false, &mut parts, visit);
}

/// Like [`for_each_partition`] but with distinct parts, all at least `min_part`.
pub fn for_each_strict_partition(n: u64, min_part: u64, visit: &mut impl FnMut(&[u64])) {
    let mut parts = Vec::new();
    walk(n, n, min_part.max(1), true, &mut parts, visit);
}

fn walk(
    rest: u64,
    max: u64,
    min: u64,
    strict: bool,
    parts: &mut Vec<u64>,
    visit: &mut impl FnMut(&[u64]),
) {
    if rest == 0 {
        visit(parts);
        return;
    }
    let mut part = max.min(rest);
    while part >= min {
        let next_max = if strict { part - 1 } else { part };
        parts.push(part);
        walk(rest - part, next_max, min, strict, parts, visit);
        parts.pop();
        part -= 1;
    }
}

/// All partitions of `n`, lexicographically descending. `n = 0` yields the
/// single empty partition.
pub fn enumerate_partitions(n: u64) -> Result<Vec<Partition>> {
    check_cap(n)?;
    let mut out = Vec::new();
    for_each_partition(n, n, &mut |p| out.push(Partition(p.to_vec())));
    Ok(out)
}

/// All strict partitions of `n`, lexicographically descending.
pub fn enumerate_strict(n: u64) -> Result<Vec<StrictPartition>> {
    enumerate_strict_min(n, 1)
}

/// Strict partitions of `n` whose parts are all at least `min_part`.
pub fn enumerate_strict_min(n: u64, min_part: u64) -> Result<Vec<StrictPartition>> {
    check_cap(n)?;
    let mut out = Vec::new();
    for_each_strict_partition(n, min_part, &mut |p| out.push(StrictPartition(p.to_vec())));
    Ok(out)
}

/// Family filter for [`count_constrained`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    /// All partitions.
    P,
    /// Strict partitions.
    S,
}

/// Part constraint for [`count_constrained`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Constraint {
    None,
    /// Every part strictly below `k`.
    Below(u64),
    /// Every part strictly above `k`.
    Above(u64),
    /// Largest part equals `k`.
    Max(u64),
    /// Smallest part equals `k`.
    Min(u64),
}

impl Constraint {
    fn admits(self, parts: &[u64]) -> bool {
        match self {
            Constraint::None => true,
            Constraint::Below(k) => parts.iter().all(|&p| p < k),
            Constraint::Above(k) => parts.iter().all(|&p| p > k),
            Constraint::Max(k) => parts.first() == Some(&k),
            Constraint::Min(k) => parts.last() == Some(&k),
        }
    }

    fn bound(self) -> Option<u64> {
        match self {
            Constraint::None => None,
            Constraint::Below(k)
            | Constraint::Above(k)
            | Constraint::Max(k)
            | Constraint::Min(k) => Some(k),
        }
    }
}

/// Cardinality of the constrained family, by filtering the enumeration.
pub fn count_constrained(n: u64, family: Family, constraint: Constraint) -> Result<BigUint> {
    check_cap(n)?;
    if constraint.bound() == Some(0) {
        return Err(Error::InvalidArgument(
            "constraint bound must be at least 1".into(),
        ));
    }
    let mut count: u64 = 0;
    let mut visit = |p: &[u64]| {
        if constraint.admits(p) {
            count += 1;
        }
    };
    match family {
        Family::P => for_each_partition(n, n, &mut visit),
        Family::S => for_each_strict_partition(n, 1, &mut visit),
    }
    Ok(BigUint::from(count))
}

/// Number of partitions of `n`, by enumeration.
pub fn partition_count(n: u64) -> Result<BigUint> {
    count_constrained(n, Family::P, Constraint::None)
}

/// Number of partitions of `n` with exactly `m` parts, by enumeration.
pub fn count_with_length(n: u64, family: Family, m: usize) -> Result<BigUint> {
    check_cap(n)?;
    let mut count: u64 = 0;
    let mut visit = |p: &[u64]| {
        if p.len() == m {
            count += 1;
        }
    };
    match family {
        Family::P => for_each_partition(n, n, &mut visit),
        Family::S => for_each_strict_partition(n, 1, &mut visit),
    }
    Ok(BigUint::from(count))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parts(ps: &[Partition]) -> Vec<Vec<u64>> {
        ps.iter().map(|p| p.parts().to_vec()).collect()
    }

    #[test]
    fn zero_has_one_empty_partition() {
        assert_eq!(
            parts(&enumerate_partitions(0).unwrap()),
            vec![Vec::<u64>::new()]
        );
        let s = enumerate_strict(0).unwrap();
        assert_eq!(s.len(), 1);
        assert!(s[0].is_empty());
    }

    #[test]
    fn partitions_of_four_in_order() {
        assert_eq!(
            parts(&enumerate_partitions(4).unwrap()),
            vec![
                vec![4],
                vec![3, 1],
                vec![2, 2],
                vec![2, 1, 1],
                vec![1, 1, 1, 1]
            ]
        );
    }

    #[test]
    fn ten_has_42_partitions() {
        assert_eq!(enumerate_partitions(10).unwrap().len(), 42);
    }

    #[test]
    fn strict_partitions_of_five() {
        let s: Vec<Vec<u64>> = enumerate_strict(5)
            .unwrap()
            .iter()
            .map(|p| p.parts().to_vec())
            .collect();
        assert_eq!(s, vec![vec![5], vec![4, 1], vec![3, 2]]);
    }

    #[test]
    fn strict_partitions_of_ten_above_one() {
        let s: Vec<Vec<u64>> = enumerate_strict_min(10, 2)
            .unwrap()
            .iter()
            .map(|p| p.parts().to_vec())
            .collect();
        assert_eq!(
            s,
            vec![vec![10], vec![8, 2], vec![7, 3], vec![6, 4], vec![5, 3, 2]]
        );
    }

    #[test]
    fn constrained_counts() {
        let c = |n, f, k| count_constrained(n, f, k).unwrap();
        assert_eq!(c(4, Family::P, Constraint::Max(2)), 2u32.into());
        assert_eq!(c(4, Family::P, Constraint::Below(4)), 4u32.into());
        for n in 1..=20 {
            assert_eq!(c(n, Family::P, Constraint::Max(1)), 1u32.into());
        }
        assert_eq!(c(6, Family::S, Constraint::Min(1)), 2u32.into()); // {5,1},{3,2,1}
        assert_eq!(c(6, Family::S, Constraint::Above(1)), 2u32.into()); // {6},{4,2}
    }

    #[test]
    fn cap_is_enforced() {
        assert!(matches!(
            enumerate_partitions(81),
            Err(Error::OracleCap { n: 81, .. })
        ));
        assert!(count_constrained(81, Family::S, Constraint::None).is_err());
    }

    #[test]
    fn zero_bound_rejected() {
        assert!(count_constrained(3, Family::P, Constraint::Max(0)).is_err());
    }

    #[test]
    fn below_and_max_identity() {
        // p_<k(n) = sum over j < k of p_max j(n)
        for n in 2..=40u64 {
            for k in 2..=n {
                let lhs = count_constrained(n, Family::P, Constraint::Below(k)).unwrap();
                let rhs: BigUint = (1..k)
                    .map(|j| count_constrained(n, Family::P, Constraint::Max(j)).unwrap())
                    .sum();
                assert_eq!(lhs, rhs, "n={n} k={k}");
            }
        }
    }

    #[test]
    fn max_part_edge_values() {
        for n in 2..=30u64 {
            for k in [1, n, n - 1] {
                assert_eq!(
                    count_constrained(n, Family::P, Constraint::Max(k)).unwrap(),
                    1u32.into(),
                    "n={n} k={k}"
                );
            }
        }
    }

    #[test]
    fn large_max_part_is_unique() {
        for n in 1..=24u64 {
            for p in enumerate_partitions(n).unwrap() {
                let k = p.largest().unwrap();
                if 2 * k > n {
                    assert_eq!(p.parts().iter().filter(|&&x| x == k).count(), 1);
                }
            }
        }
    }

    #[test]
    fn transposition_equates_length_and_max_part_but_not_for_strict() {
        let mut strict_counterexample = false;
        for n in 0..=30u64 {
            for m in 1..=n {
                assert_eq!(
                    count_with_length(n, Family::P, m as usize).unwrap(),
                    count_constrained(n, Family::P, Constraint::Max(m)).unwrap()
                );
                if count_with_length(n, Family::S, m as usize).unwrap()
                    != count_constrained(n, Family::S, Constraint::Max(m)).unwrap()
                {
                    strict_counterexample = true;
                }
            }
        }
        assert!(strict_counterexample);
    }

    #[test]
    fn enumeration_is_canonical() {
        for n in 0..=20 {
            let ps = enumerate_partitions(n).unwrap();
            let mut sorted = ps.clone();
            sorted.sort_by(|a, b| b.cmp(a));
            sorted.dedup();
            assert_eq!(ps, sorted);
            for p in &ps {
                assert_eq!(p.total(), n);
                assert!(p.parts().windows(2).all(|w| w[0] >= w[1]));
            }
        }
    }

    #[test]
    fn constructors_validate() {
        assert_eq!(Partition::new(vec![1, 3, 1]).unwrap().parts(), &[3, 1, 1]);
        assert!(Partition::new(vec![0, 1]).is_err());
        assert!(StrictPartition::new(vec![2, 2]).is_err());
        assert_eq!(
            StrictPartition::new(vec![2, 5]).unwrap().to_string(),
            "{5,2}"
        );
    }
}
