//! Binary path codes for the largest-part reduction DAG.
//!
//! A code `b = b_{l+1} b_l ... b_2` is indexed from 2 at the rightmost bit.
//! Its rightmost 1-bit sits at the startup column `k0`; each bit to the left
//! of it is one auxiliary step, 0 for the rising edge `(n,k) -> (n+1,k+1)`
//! and 1 for the falling edge `(n,k) -> (n-k,k+1)`.

use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};

use crate::dag::DagPath;
use crate::error::{Error, Result};
use crate::oracle::{for_each_strict_partition, StrictPartition};
use crate::rewrite::Atom;

/// A finite binary word; leading zeros are significant.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PathCode {
    /// Leftmost bit first.
    bits: Vec<bool>,
}

impl PathCode {
    pub fn empty() -> Self {
        PathCode::default()
    }

    /// From bits written left to right.
    pub fn from_bits(bits: Vec<bool>) -> Self {
        PathCode { bits }
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    /// `l(b)`.
    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    /// Index of the leftmost bit, `l(b) + 1`.
    pub fn top_index(&self) -> u64 {
        self.bits.len() as u64 + 1
    }

    /// `b_index` for `2 <= index <= l(b) + 1`; zero elsewhere.
    pub fn bit(&self, index: u64) -> bool {
        let l = self.bits.len() as u64;
        (2..=l + 1).contains(&index) && self.bits[(l + 1 - index) as usize]
    }

    /// Indices of the 1-bits, ascending.
    pub fn ones(&self) -> Vec<u64> {
        let top = self.top_index();
        let mut out: Vec<u64> = self
            .bits
            .iter()
            .enumerate()
            .filter(|(_, &b)| b)
            .map(|(p, _)| top - p as u64)
            .collect();
        out.reverse();
        out
    }

    pub fn count_ones(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }

    pub fn leading_bit(&self) -> Option<bool> {
        self.bits.first().copied()
    }

    /// Index of the rightmost 1-bit.
    pub fn k0(&self) -> Option<u64> {
        let l = self.bits.len();
        self.bits
            .iter()
            .rposition(|&b| b)
            .map(|p| (l + 1 - p) as u64)
    }

    /// `self` written to the left of `suffix`.
    pub fn concat(&self, suffix: &PathCode) -> PathCode {
        let mut bits = self.bits.clone();
        bits.extend_from_slice(&suffix.bits);
        PathCode { bits }
    }

    /// Every word of length `len`, in binary counting order.
    pub fn all_of_length(len: usize) -> impl Iterator<Item = PathCode> {
        assert!(len < 64);
        (0u64..1 << len).map(move |w| PathCode {
            bits: (0..len).rev().map(|i| w >> i & 1 == 1).collect(),
        })
    }

    fn require_one(&self) -> Result<u64> {
        self.k0()
            .ok_or_else(|| Error::InvalidCode(format!("`{self}` has no 1-bit")))
    }
}

impl fmt::Display for PathCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.bits {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl FromStr for PathCode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        s.chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                _ => Err(Error::InvalidCode(format!("`{s}` is not a binary word"))),
            })
            .collect::<Result<Vec<_>>>()
            .map(PathCode::from_bits)
    }
}

impl Serialize for PathCode {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// `nu(b) = sum k b_k`.
pub fn valuation(b: &PathCode) -> u64 {
    b.ones().iter().sum()
}

/// `(-1)^(ones + 1)`.
pub fn polarity(b: &PathCode) -> Result<i64> {
    b.require_one()?;
    Ok(if b.count_ones() % 2 == 1 { 1 } else { -1 })
}

/// Number of auxiliary edges, `l(b) + 1 - k0`.
pub fn edge_count(b: &PathCode) -> Result<u64> {
    let k0 = b.require_one()?;
    Ok(b.top_index() - k0)
}

/// `nu(b_s) + nu(b_p) + |b_p|_1 l(b_s)`, the valuation of `b_p b_s`.
pub fn split_valuation(b_p: &PathCode, b_s: &PathCode) -> u64 {
    valuation(b_s) + valuation(b_p) + b_p.count_ones() as u64 * b_s.len() as u64
}

/// The terminal region `k >= 2, k <= n <= 2k`.
pub fn in_terminal_region(n: i64, k: i64) -> bool {
    k >= 2 && k <= n && n <= 2 * k
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PathClassification {
    TerminatingBelowBoundary,
    TerminatingAtBoundary,
    Nonterminating,
    /// A vertex before the last already lies in the terminal region, so the
    /// walk is not a path of the DAG.
    EntersRegionEarly,
    InvalidAllZero,
}

impl PathClassification {
    pub fn is_terminating(self) -> bool {
        matches!(
            self,
            PathClassification::TerminatingBelowBoundary
                | PathClassification::TerminatingAtBoundary
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DecodedPath {
    pub walk: Vec<(i64, i64)>,
    pub classification: PathClassification,
}

/// Walks `b` from `(ñ, k0)` and classifies where it meets the terminal region.
pub fn decode_path(n_tilde: u64, b: &PathCode) -> Result<DecodedPath> {
    let k0 = b.require_one()?;
    let (mut n, mut k) = (n_tilde as i64, k0 as i64);
    let mut walk = vec![(n, k)];
    for index in k0 + 1..=b.top_index() {
        if b.bit(index) {
            n -= k;
        } else {
            n += 1;
        }
        k += 1;
        walk.push((n, k));
    }
    let (last, before) = walk.split_last().expect("walk has a start");
    let classification = if before.iter().any(|&(n, k)| in_terminal_region(n, k)) {
        PathClassification::EntersRegionEarly
    } else if in_terminal_region(last.0, last.1) {
        if last.0 == 2 * last.1 {
            PathClassification::TerminatingAtBoundary
        } else {
            PathClassification::TerminatingBelowBoundary
        }
    } else {
        PathClassification::Nonterminating
    };
    Ok(DecodedPath {
        walk,
        classification,
    })
}

/// [`decode_path`] classification, with all-zero words tagged instead of rejected.
pub fn classify(n_tilde: u64, b: &PathCode) -> PathClassification {
    match decode_path(n_tilde, b) {
        Ok(d) => d.classification,
        Err(_) => PathClassification::InvalidAllZero,
    }
}

/// The arithmetic termination predicates on `(ñ, b)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct TerminationPredicates {
    /// `ñ - (l+1) <= nu <= ñ`.
    pub terminating: bool,
    /// `ñ - (l+1) < nu <= ñ`.
    pub below_boundary: bool,
    /// `nu = ñ - (l+1)`.
    pub at_boundary: bool,
    /// `ñ - 2 <= nu <= ñ`.
    pub near_diagonal: bool,
}

impl TerminationPredicates {
    /// The implied leading bit below the boundary and termination near the diagonal.
    pub fn implications_hold(&self, b: &PathCode) -> bool {
        let leading = b.leading_bit() == Some(true);
        (!self.below_boundary || leading) && (!self.near_diagonal || (self.terminating && leading))
    }

    /// Whether the predicates agree with a decoded classification.
    pub fn agrees_with(&self, c: PathClassification) -> bool {
        self.terminating == c.is_terminating()
            && self.below_boundary == (c == PathClassification::TerminatingBelowBoundary)
            && self.at_boundary == (c == PathClassification::TerminatingAtBoundary)
    }
}

pub fn termination_predicates(n_tilde: u64, b: &PathCode) -> Result<TerminationPredicates> {
    b.require_one()?;
    let nu = valuation(b) as i64;
    let n = n_tilde as i64;
    let lower = n - b.top_index() as i64;
    Ok(TerminationPredicates {
        terminating: lower <= nu && nu <= n,
        below_boundary: lower < nu && nu <= n,
        at_boundary: nu == lower,
        near_diagonal: n - 2 <= nu && nu <= n,
    })
}

/// Parts are the 1-bit indices.
pub fn to_strict_partition(b: &PathCode) -> Result<StrictPartition> {
    b.require_one()?;
    StrictPartition::new(b.ones())
}

/// The code with leading bit 1 whose 1-bit indices are the parts.
pub fn from_strict_partition(sp: &StrictPartition) -> Result<PathCode> {
    let parts = sp.parts();
    let Some(&largest) = parts.first() else {
        return Err(Error::InvalidPartition(
            "empty partition has no code".into(),
        ));
    };
    if let Some(bad) = parts.iter().find(|&&p| p < 2) {
        return Err(Error::InvalidPartition(format!("part {bad} is below 2")));
    }
    let mut bits = vec![false; (largest - 1) as usize];
    for &p in parts {
        bits[(largest - p) as usize] = true;
    }
    Ok(PathCode { bits })
}

/// `B_j`: codes with leading bit 1 and valuation `j`, via the strict
/// partitions of `j` with parts at least 2, in descending lexicographic order.
pub fn enumerate_bj(j: u64) -> Vec<PathCode> {
    let mut out = Vec::new();
    if j < 2 {
        return out;
    }
    for_each_strict_partition(j, 2, &mut |parts: &[u64]| {
        let sp = StrictPartition::new(parts.to_vec()).expect("visitor yields strict parts");
        out.push(from_strict_partition(&sp).expect("parts are at least 2"));
    });
    out
}

/// The two pairing rules of the involution on `B_j ∪ B_{j-1}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum InvolutionRule {
    /// `10x` in `B_j` to `1x` in `B_{j-1}`.
    DropZero,
    /// `1x` in `B_{j-1}` to `10x` in `B_j`.
    InsertZero,
    /// `1^{k+2} 0 x 0^{k+1}` to `1^{k+2} x 1 0^k`.
    MoveForward,
    /// `1^{k+2} x 1 0^k` to `1^{k+2} 0 x 0^{k+1}`.
    MoveBack,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InvolutionStep {
    pub input: PathCode,
    pub output: PathCode,
    /// `None` at fixed points.
    pub rule: Option<InvolutionRule>,
    pub k: Option<u64>,
}

impl InvolutionStep {
    pub fn is_fixed(&self) -> bool {
        self.rule.is_none()
    }
}

fn ones(n: usize) -> impl Iterator<Item = bool> {
    std::iter::repeat_n(true, n)
}

fn zeros(n: usize) -> impl Iterator<Item = bool> {
    std::iter::repeat_n(false, n)
}

fn rule_matches(b: &[bool], nu: u64, j: u64) -> Vec<(InvolutionRule, Option<u64>, Vec<bool>)> {
    let mut found = Vec::new();
    let len = b.len();
    if nu == j && len >= 2 && b[0] && !b[1] {
        let mut img = vec![true];
        img.extend_from_slice(&b[2..]);
        found.push((InvolutionRule::DropZero, None, img));
    }
    if nu + 1 == j && len >= 1 && b[0] {
        let mut img = vec![true, false];
        img.extend_from_slice(&b[1..]);
        found.push((InvolutionRule::InsertZero, None, img));
    }
    if nu == j {
        for k in 0..len {
            let run = k + 2;
            // 1^{k+2} 0 x 0^{k+1}
            if len >= 2 * k + 4
                && b[..run].iter().all(|&x| x)
                && !b[run]
                && b[len - k - 1..].iter().all(|&x| !x)
            {
                let x = &b[run + 1..len - k - 1];
                let img = ones(run)
                    .chain(x.iter().copied())
                    .chain([true])
                    .chain(zeros(k))
                    .collect();
                found.push((InvolutionRule::MoveForward, Some(k as u64), img));
            }
            // 1^{k+2} x 1 0^k
            if len >= 2 * k + 3
                && b[..run].iter().all(|&x| x)
                && b[len - k - 1]
                && b[len - k..].iter().all(|&x| !x)
            {
                let x = &b[run..len - k - 1];
                let img = ones(run)
                    .chain([false])
                    .chain(x.iter().copied())
                    .chain(zeros(k + 1))
                    .collect();
                found.push((InvolutionRule::MoveBack, Some(k as u64), img));
            }
        }
    }
    found
}

/// The sign-reversing pairing on `B_j ∪ B_{j-1}`. Codes matched by no rule
/// are fixed; a code matched by two rules is an error.
pub fn involution(j: u64, code: &PathCode) -> Result<InvolutionStep> {
    let nu = valuation(code);
    if code.leading_bit() != Some(true) || !(nu == j || nu + 1 == j) {
        return Err(Error::NotInDomain {
            j,
            code: code.to_string(),
        });
    }
    let mut found = rule_matches(&code.bits, nu, j);
    if found.len() > 1 {
        return Err(Error::AmbiguousMatch {
            code: code.to_string(),
            matches: found
                .iter()
                .map(|(r, k, _)| {
                    format!("{r:?}{}", k.map(|k| format!("(k={k})")).unwrap_or_default())
                })
                .collect(),
        });
    }
    Ok(match found.pop() {
        Some((rule, k, img)) => InvolutionStep {
            input: code.clone(),
            output: PathCode::from_bits(img),
            rule: Some(rule),
            k,
        },
        None => InvolutionStep {
            input: code.clone(),
            output: code.clone(),
            rule: None,
            k: None,
        },
    })
}

/// Words `(100)^m 1` and `(100)^m 011`, ordered by length.
pub fn pentagonal_codes(count: usize) -> Vec<PathCode> {
    let mut out = Vec::with_capacity(count);
    let mut m = 0;
    while out.len() < count {
        for tail in ["1", "011"] {
            if out.len() < count {
                let word = "100".repeat(m) + tail;
                out.push(word.parse().expect("binary literal"));
            }
        }
        m += 1;
    }
    out
}

/// The code of a root-to-terminal path in the largest-part DAG.
pub fn code_of_maxpart_path(path: &DagPath) -> Result<PathCode> {
    let aux: Vec<(i64, i64)> = path
        .vertices
        .iter()
        .filter_map(|a| match *a {
            Atom::Auxiliary(n, k) => Some((n, k)),
            Atom::Primary(_) => None,
        })
        .collect();
    let Some(&(_, k0)) = aux.first() else {
        return Err(Error::InvalidCode("path has no auxiliary vertex".into()));
    };
    if k0 < 2 {
        return Err(Error::InvalidCode(format!(
            "startup column {k0} is below 2"
        )));
    }
    let mut steps = Vec::with_capacity(aux.len());
    for w in aux.windows(2) {
        let ((n, k), next) = (w[0], w[1]);
        steps.push(match next {
            _ if next == (n + 1, k + 1) => false,
            _ if next == (n - k, k + 1) => true,
            _ => {
                return Err(Error::InvalidCode(format!(
                    "A({n},{k}) -> A({},{}) is not an auxiliary step",
                    next.0, next.1
                )))
            }
        });
    }
    let bits = steps
        .iter()
        .rev()
        .copied()
        .chain([true])
        .chain(zeros(k0 as usize - 2))
        .collect();
    Ok(PathCode::from_bits(bits))
}
