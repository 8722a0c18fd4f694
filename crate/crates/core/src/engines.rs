//! Independent memoized evaluators of the partition function.
//!
//! Every engine fills its own tables bottom-up, so `count(n)` also makes
//! `0..n` available and instrumented counters cover the whole run. Counters
//! record how many recurrent terms with a nonzero coefficient each step reads.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, Zero};
use serde::{Serialize, Serializer};

use crate::coefficients::{euler_e, sigma};
use crate::error::{Error, Result};

/// Arbitrary-precision nonnegative count.
pub type BigCount = BigUint;

/// The six recurrences for `p(n)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum EngineKind {
    /// Pentagonal recurrence with Euler coefficients.
    Euler,
    /// `p(n) = 1 + sum f_k p(n-k)` with the integrated coefficients.
    Integral,
    /// Divisor-sum recurrence.
    Sigma,
    /// Composite recurrence through partitions with a given smallest part.
    MinPart,
    /// Composite recurrence through partitions with bounded parts.
    Bounded,
    /// Composite recurrence through partitions with a given largest part.
    MaxPart,
}

impl EngineKind {
    pub const ALL: [EngineKind; 6] = [
        EngineKind::Euler,
        EngineKind::Integral,
        EngineKind::Sigma,
        EngineKind::MinPart,
        EngineKind::Bounded,
        EngineKind::MaxPart,
    ];

    pub fn name(self) -> &'static str {
        match self {
            EngineKind::Euler => "euler",
            EngineKind::Integral => "integral",
            EngineKind::Sigma => "sigma",
            EngineKind::MinPart => "minpart",
            EngineKind::Bounded => "bounded",
            EngineKind::MaxPart => "maxpart",
        }
    }

    /// A fresh engine of this kind.
    pub fn engine(self) -> Box<dyn Engine> {
        match self {
            EngineKind::Euler => Box::new(EulerEngine::default()),
            EngineKind::Integral => Box::new(IntegralEngine::default()),
            EngineKind::Sigma => Box::new(SigmaEngine::default()),
            EngineKind::MinPart => Box::new(MinPartEngine::default()),
            EngineKind::Bounded => Box::new(BoundedEngine::default()),
            EngineKind::MaxPart => Box::new(MaxPartEngine::default()),
        }
    }
}

impl fmt::Display for EngineKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for EngineKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        EngineKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown engine `{s}`")))
    }
}

impl Serialize for EngineKind {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.name())
    }
}

/// Instrumentation shared by all engines.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct EngineStats {
    /// Recurrent terms read while computing `p(m)`, indexed by `m`.
    pub per_step: Vec<u64>,
    /// Auxiliary applications whose targets left the restricted domain.
    pub closure_violations: u64,
}

impl EngineStats {
    pub fn total(&self) -> u64 {
        self.per_step.iter().sum()
    }

    /// Cumulative count for `p(0..=n)`.
    pub fn cumulative(&self, n: usize) -> u64 {
        self.per_step.iter().take(n + 1).sum()
    }
}

/// A memoized evaluator of `p(n)`.
pub trait Engine {
    fn kind(&self) -> EngineKind;

    /// `p(n)`; extends the internal tables as needed.
    fn count(&mut self, n: usize) -> Result<BigCount>;

    fn stats(&self) -> &EngineStats;
}

fn to_count(kind: EngineKind, n: usize, v: &BigInt) -> Result<BigCount> {
    v.to_biguint()
        .ok_or_else(|| Error::Invariant(format!("{kind} produced negative p({n}) = {v}")))
}

/// Primary table shared by every engine: entries are written once, in order.
#[derive(Debug, Default)]
struct PrimaryTable {
    values: Vec<BigInt>,
}

impl PrimaryTable {
    fn len(&self) -> usize {
        self.values.len()
    }

    fn get(&self, n: usize) -> &BigInt {
        &self.values[n]
    }

    fn push(&mut self, v: BigInt) {
        self.values.push(v);
    }
}

/// `p(n) = sum_{k>0} e_k p(n-k)`: only pentagonal `k` contribute.
#[derive(Debug, Default)]
pub struct EulerEngine {
    p: PrimaryTable,
    stats: EngineStats,
}

impl Engine for EulerEngine {
    fn kind(&self) -> EngineKind {
        EngineKind::Euler
    }

    fn count(&mut self, n: usize) -> Result<BigCount> {
        while self.p.len() <= n {
            let m = self.p.len();
            let (value, terms) = if m == 0 {
                (BigInt::one(), 0)
            } else {
                let mut acc = BigInt::zero();
                let mut terms = 0;
                let mut k = 1usize;
                loop {
                    let lo = k * (3 * k - 1) / 2;
                    if lo > m {
                        break;
                    }
                    let hi = k * (3 * k + 1) / 2;
                    let mut pair = self.p.get(m - lo).clone();
                    terms += 1;
                    if hi <= m {
                        pair += self.p.get(m - hi);
                        terms += 1;
                    }
                    if k % 2 == 1 {
                        acc += pair;
                    } else {
                        acc -= pair;
                    }
                    k += 1;
                }
                (acc, terms)
            };
            self.p.push(value);
            self.stats.per_step.push(terms);
        }
        to_count(self.kind(), n, self.p.get(n))
    }

    fn stats(&self) -> &EngineStats {
        &self.stats
    }
}

/// `p(n) = 1 + sum_{k>0} f_k p(n-k)` with `f` the prefix sums of `e`.
#[derive(Debug, Default)]
pub struct IntegralEngine {
    p: PrimaryTable,
    f: Vec<i64>,
    stats: EngineStats,
}

impl IntegralEngine {
    fn extend_f(&mut self, upto: usize) {
        while self.f.len() <= upto {
            let n = self.f.len();
            let prev = self.f.last().copied().unwrap_or(0);
            self.f.push(prev + euler_e(n as u64));
        }
    }
}

impl Engine for IntegralEngine {
    fn kind(&self) -> EngineKind {
        EngineKind::Integral
    }

    fn count(&mut self, n: usize) -> Result<BigCount> {
        self.extend_f(n);
        while self.p.len() <= n {
            let m = self.p.len();
            let mut acc = BigInt::one();
            let mut terms = 0;
            for k in 1..=m {
                match self.f[k] {
                    0 => {}
                    1 => {
                        acc += self.p.get(m - k);
                        terms += 1;
                    }
                    -1 => {
                        acc -= self.p.get(m - k);
                        terms += 1;
                    }
                    c => {
                        acc += self.p.get(m - k) * c;
                        terms += 1;
                    }
                }
            }
            self.p.push(acc);
            self.stats.per_step.push(terms);
        }
        to_count(self.kind(), n, self.p.get(n))
    }

    fn stats(&self) -> &EngineStats {
        &self.stats
    }
}

/// `p(n) = (1/n) sum_{k>=1} sigma(k) p(n-k)`, exact division checked.
#[derive(Debug, Default)]
pub struct SigmaEngine {
    p: PrimaryTable,
    sigma: Vec<u64>,
    stats: EngineStats,
}

impl Engine for SigmaEngine {
    fn kind(&self) -> EngineKind {
        EngineKind::Sigma
    }

    fn count(&mut self, n: usize) -> Result<BigCount> {
        while self.sigma.len() <= n {
            let k = self.sigma.len() as u64;
            self.sigma.push(if k == 0 { 0 } else { sigma(k) });
        }
        while self.p.len() <= n {
            let m = self.p.len();
            if m == 0 {
                self.p.push(BigInt::one());
                self.stats.per_step.push(0);
                continue;
            }
            let mut acc = BigInt::zero();
            for k in 1..=m {
                acc += self.p.get(m - k) * self.sigma[k];
            }
            let divisor = BigInt::from(m);
            if !(&acc % &divisor).is_zero() {
                return Err(Error::NonIntegralDivision {
                    context: "sigma recurrence",
                    numerator: acc.to_string(),
                    denominator: m as u64,
                });
            }
            self.p.push(acc / divisor);
            self.stats.per_step.push(m as u64);
        }
        to_count(self.kind(), n, self.p.get(n))
    }

    fn stats(&self) -> &EngineStats {
        &self.stats
    }
}

/// Composite recurrence over `p_min k(n)`, the partitions of `n` with smallest
/// part `k`:
///
/// - `p(n) = sum_{1<=i<=n} p_min i(n)` for `n > 0`;
/// - `p_min 1(n) = p(n-1)`;
/// - `p_min k(n) = p_min k-1(n-1) - p_min k-1(n-k)` for `2 <= k <= n`;
/// - `p_min k(n) = 0` for `k > n`.
#[derive(Debug, Default)]
pub struct MinPartEngine {
    p: PrimaryTable,
    /// `rows[n][k-1] = p_min k(n)` for `1 <= k <= n`.
    rows: Vec<Vec<BigInt>>,
    stats: EngineStats,
}

impl MinPartEngine {
    fn aux(&self, n: usize, k: usize) -> Option<&BigInt> {
        if k > n {
            None
        } else {
            Some(&self.rows[n][k - 1])
        }
    }
}

impl Engine for MinPartEngine {
    fn kind(&self) -> EngineKind {
        EngineKind::MinPart
    }

    fn count(&mut self, n: usize) -> Result<BigCount> {
        while self.p.len() <= n {
            let m = self.p.len();
            let mut row = Vec::with_capacity(m);
            let mut terms = 0;
            if m > 0 {
                row.push(self.p.get(m - 1).clone());
                terms += 1;
                for k in 2..=m {
                    let mut v = self.aux(m - 1, k - 1).cloned().unwrap_or_default();
                    terms += 1;
                    if let Some(sub) = self.aux(m - k, k - 1) {
                        v -= sub;
                        terms += 1;
                    }
                    row.push(v);
                }
            }
            let value = if m == 0 {
                BigInt::one()
            } else {
                terms += row.len() as u64;
                row.iter().sum()
            };
            self.rows.push(row);
            self.p.push(value);
            self.stats.per_step.push(terms);
        }
        to_count(self.kind(), n, self.p.get(n))
    }

    fn stats(&self) -> &EngineStats {
        &self.stats
    }
}

/// Composite recurrence over `p_<k(n)`, the partitions of `n` with every part
/// below `k`:
///
/// - `p(n) = 1` for `n <= 1`, `p(n) = 1 + p_<n(n)` otherwise;
/// - `p_<2(n) = 1`;
/// - `p_<k+1(n) = sum_{0<=m<=n/k} p_<k(n-mk)` for `2 <= k < n`;
/// - `p_<k(n) = p(n)` for `k > n`.
#[derive(Debug, Default)]
pub struct BoundedEngine {
    p: PrimaryTable,
    /// `rows[n][k-2] = p_<k(n)` for `2 <= k <= n`.
    rows: Vec<Vec<BigInt>>,
    stats: EngineStats,
}

impl BoundedEngine {
    fn below(&self, n: usize, k: usize, current: &[BigInt]) -> BigInt {
        if k > n {
            self.p.get(n).clone()
        } else if k == 2 {
            BigInt::one()
        } else if n == self.rows.len() {
            current[k - 2].clone()
        } else {
            self.rows[n][k - 2].clone()
        }
    }
}

impl Engine for BoundedEngine {
    fn kind(&self) -> EngineKind {
        EngineKind::Bounded
    }

    fn count(&mut self, n: usize) -> Result<BigCount> {
        while self.p.len() <= n {
            let m = self.p.len();
            let mut row: Vec<BigInt> = Vec::new();
            let mut terms = 0;
            if m >= 2 {
                row.push(BigInt::one());
                for k in 2..m {
                    let mut acc = BigInt::zero();
                    for mult in 0..=m / k {
                        acc += self.below(m - mult * k, k, &row);
                        terms += 1;
                    }
                    row.push(acc);
                }
            }
            let value = if m <= 1 {
                BigInt::one()
            } else {
                terms += 1;
                BigInt::one() + &row[m - 2]
            };
            self.rows.push(row);
            self.p.push(value);
            self.stats.per_step.push(terms);
        }
        to_count(self.kind(), n, self.p.get(n))
    }

    fn stats(&self) -> &EngineStats {
        &self.stats
    }
}

/// Composite recurrence over `p_max k(n)`, the partitions of `n` with largest
/// part `k`:
///
/// - `p(n) = 1 + sum_{2<=k<=n} p_max k(n)`;
/// - `p_max k(n) = p(n-k)` for `max(2, n/2) <= k <= n`;
/// - `p_max k(n) = p_max k+1(n+1) - p_max k+1(n-k)` for `2 <= k < n/2`.
///
/// The auxiliary rule raises both coordinates, so every chain started at
/// `(n, k)` carries a budget of `n - 2k + slack` auxiliary steps.
#[derive(Debug)]
pub struct MaxPartEngine {
    p: PrimaryTable,
    memo: HashMap<(usize, usize), BigInt>,
    slack: usize,
    stats: EngineStats,
    terms: u64,
}

impl Default for MaxPartEngine {
    fn default() -> Self {
        MaxPartEngine::with_slack(4)
    }
}

impl MaxPartEngine {
    pub fn with_slack(slack: usize) -> Self {
        MaxPartEngine {
            p: PrimaryTable::default(),
            memo: HashMap::new(),
            slack,
            stats: EngineStats::default(),
            terms: 0,
        }
    }

    fn max_part(&mut self, n: usize, k: usize, remaining: usize, budget: usize) -> Result<BigInt> {
        self.terms += 1;
        if let Some(v) = self.memo.get(&(n, k)) {
            return Ok(v.clone());
        }
        let value = if 2 * k >= n {
            debug_assert!(k <= n);
            self.p.get(n - k).clone()
        } else {
            if remaining == 0 {
                return Err(Error::BudgetExceeded {
                    what: format!("reducing p_max {k}({n})"),
                    budget,
                });
            }
            if k + 1 > n - k {
                self.stats.closure_violations += 1;
            }
            let up = self.max_part(n + 1, k + 1, remaining - 1, budget)?;
            let down = self.max_part(n - k, k + 1, remaining - 1, budget)?;
            up - down
        };
        let previous = self.memo.insert((n, k), value.clone());
        debug_assert!(previous.is_none());
        Ok(value)
    }
}

impl Engine for MaxPartEngine {
    fn kind(&self) -> EngineKind {
        EngineKind::MaxPart
    }

    fn count(&mut self, n: usize) -> Result<BigCount> {
        while self.p.len() <= n {
            let m = self.p.len();
            self.terms = 0;
            let mut acc = BigInt::one();
            for k in 2..=m {
                let budget = (m - 2 * k.min(m / 2)) + self.slack;
                acc += self.max_part(m, k, budget, budget)?;
            }
            if acc.is_negative() {
                return Err(Error::Invariant(format!("maxpart produced p({m}) = {acc}")));
            }
            self.p.push(acc);
            self.stats.per_step.push(self.terms);
        }
        to_count(self.kind(), n, self.p.get(n))
    }

    fn stats(&self) -> &EngineStats {
        &self.stats
    }
}

/// Runs one engine of `kind` up to `n`.
pub fn p_with(kind: EngineKind, n: usize) -> Result<BigCount> {
    kind.engine().count(n)
}

pub fn p_euler(n: usize) -> Result<BigCount> {
    p_with(EngineKind::Euler, n)
}

pub fn p_integral(n: usize) -> Result<BigCount> {
    p_with(EngineKind::Integral, n)
}

pub fn p_sigma(n: usize) -> Result<BigCount> {
    p_with(EngineKind::Sigma, n)
}

pub fn p_minpart(n: usize) -> Result<BigCount> {
    p_with(EngineKind::MinPart, n)
}

pub fn p_bounded(n: usize) -> Result<BigCount> {
    p_with(EngineKind::Bounded, n)
}

pub fn p_maxpart(n: usize) -> Result<BigCount> {
    p_with(EngineKind::MaxPart, n)
}

/// Every engine's value of `p(n)`.
pub fn p_all(n: usize) -> Result<BTreeMap<EngineKind, BigCount>> {
    EngineKind::ALL
        .into_iter()
        .map(|k| p_with(k, n).map(|v| (k, v)))
        .collect()
}

/// Every engine's table `p(0..=n)`, keyed by engine.
pub fn tables(n: usize) -> Result<BTreeMap<EngineKind, Vec<BigCount>>> {
    let mut out = BTreeMap::new();
    for kind in EngineKind::ALL {
        let mut engine = kind.engine();
        engine.count(n)?;
        let values = (0..=n)
            .map(|m| engine.count(m))
            .collect::<Result<Vec<_>>>()?;
        out.insert(kind, values);
    }
    Ok(out)
}
