//! Recurrence systems as rewrite rules with domain conditions.
//!
//! A rule rewrites a primary atom `P(n)` or an auxiliary atom `A(n, k)` into
//! a constant plus a signed fan of atoms. Rules are parameterized families:
//! a domain predicate decides where a rule applies and a generator builds the
//! right-hand side of the ground instance.

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::ops::RangeInclusive;
use std::str::FromStr;
use std::sync::Arc;

use num_bigint::BigInt;
use serde::Serialize;

use crate::error::{Error, Result};

/// A ground recurrence atom.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Atom {
    Primary(i64),
    Auxiliary(i64, i64),
}

impl Atom {
    pub fn is_primary(&self) -> bool {
        matches!(self, Atom::Primary(_))
    }

    /// `(n, k)` with `k = 0` for primary atoms.
    pub fn coords(&self) -> (i64, i64) {
        match *self {
            Atom::Primary(n) => (n, 0),
            Atom::Auxiliary(n, k) => (n, k),
        }
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Atom::Primary(n) => write!(f, "P({n})"),
            Atom::Auxiliary(n, k) => write!(f, "A({n},{k})"),
        }
    }
}

/// The four rule shapes, classified by which atom families occur on each side.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum RuleKind {
    /// `P -> constant + primaries`.
    Primary,
    /// `P -> constant + auxiliaries`.
    Startup,
    /// `A -> constant + auxiliaries`.
    Auxiliary,
    /// `A -> constant + primaries`.
    Termination,
}

impl RuleKind {
    pub fn lhs_is_primary(self) -> bool {
        matches!(self, RuleKind::Primary | RuleKind::Startup)
    }

    pub fn rhs_is_primary(self) -> bool {
        matches!(self, RuleKind::Primary | RuleKind::Termination)
    }
}

/// One signed summand of a right-hand side.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FanEntry {
    pub coeff: i64,
    pub target: Atom,
}

impl FanEntry {
    pub fn plus(target: Atom) -> Self {
        FanEntry { coeff: 1, target }
    }

    pub fn minus(target: Atom) -> Self {
        FanEntry { coeff: -1, target }
    }
}

/// Right-hand side in additive normal form.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct Rhs {
    pub constant: i64,
    pub fan: Vec<FanEntry>,
}

impl Rhs {
    pub fn constant(value: i64) -> Self {
        Rhs {
            constant: value,
            fan: Vec::new(),
        }
    }

    pub fn fan(constant: i64, fan: Vec<FanEntry>) -> Self {
        Rhs { constant, fan }
    }
}

/// A rule instantiated at a ground atom whose domain condition holds.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GroundRule {
    pub rule: String,
    pub kind: RuleKind,
    pub source: Atom,
    pub constant: i64,
    pub fan: Vec<FanEntry>,
}

type DomainFn = Arc<dyn Fn(i64, i64) -> bool + Send + Sync>;
type RhsFn = Arc<dyn Fn(i64, i64) -> Rhs + Send + Sync>;

/// A named rule family `[domain] lhs -> rhs`.
#[derive(Clone)]
pub struct Rule {
    name: String,
    kind: RuleKind,
    domain: DomainFn,
    rhs: RhsFn,
}

impl fmt::Debug for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Rule")
            .field("name", &self.name)
            .field("kind", &self.kind)
            .finish_non_exhaustive()
    }
}

impl Rule {
    /// Rule over `P(n)`; the closures receive `n`.
    pub fn on_primary(
        name: &str,
        kind: RuleKind,
        domain: impl Fn(i64) -> bool + Send + Sync + 'static,
        rhs: impl Fn(i64) -> Rhs + Send + Sync + 'static,
    ) -> Self {
        assert!(
            kind.lhs_is_primary(),
            "{kind:?} rules rewrite auxiliary atoms"
        );
        Rule {
            name: name.to_owned(),
            kind,
            domain: Arc::new(move |n, _| domain(n)),
            rhs: Arc::new(move |n, _| rhs(n)),
        }
    }

    /// Rule over `A(n, k)`; the closures receive `(n, k)`.
    pub fn on_auxiliary(
        name: &str,
        kind: RuleKind,
        domain: impl Fn(i64, i64) -> bool + Send + Sync + 'static,
        rhs: impl Fn(i64, i64) -> Rhs + Send + Sync + 'static,
    ) -> Self {
        assert!(
            !kind.lhs_is_primary(),
            "{kind:?} rules rewrite primary atoms"
        );
        Rule {
            name: name.to_owned(),
            kind,
            domain: Arc::new(domain),
            rhs: Arc::new(rhs),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn kind(&self) -> RuleKind {
        self.kind
    }

    fn matches_family(&self, atom: &Atom) -> bool {
        atom.is_primary() == self.kind.lhs_is_primary()
    }

    /// Whether the domain condition holds at `atom`.
    pub fn applies(&self, atom: &Atom) -> bool {
        let (n, k) = atom.coords();
        self.matches_family(atom) && (self.domain)(n, k)
    }

    /// Instantiates the right-hand side at `atom` regardless of the domain
    /// condition. `None` if the atom belongs to the other family.
    pub fn instantiate(&self, atom: &Atom) -> Option<Rhs> {
        if !self.matches_family(atom) {
            return None;
        }
        let (n, k) = atom.coords();
        Some((self.rhs)(n, k))
    }

    fn ground(&self, atom: &Atom) -> Result<GroundRule> {
        let rhs = self.instantiate(atom).expect("family checked by caller");
        if let Some(bad) = rhs
            .fan
            .iter()
            .find(|e| e.target.is_primary() != self.kind.rhs_is_primary())
        {
            return Err(Error::MalformedRule {
                rule: self.name.clone(),
                atom: *atom,
                detail: format!("{:?} rule with target {}", self.kind, bad.target),
            });
        }
        Ok(GroundRule {
            rule: self.name.clone(),
            kind: self.kind,
            source: *atom,
            constant: rhs.constant,
            fan: rhs.fan,
        })
    }
}

/// Finite box of ground atoms: `P(n)` for `n` in `n` and `A(n, k)` for
/// `(n, k)` in `n x k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Region {
    pub n: RangeInclusive<i64>,
    pub k: RangeInclusive<i64>,
}

impl Region {
    pub fn square(lo: i64, hi: i64) -> Self {
        Region {
            n: lo..=hi,
            k: lo..=hi,
        }
    }

    pub fn atoms(&self) -> impl Iterator<Item = Atom> + '_ {
        let primaries = self.n.clone().map(Atom::Primary);
        let aux = self
            .n
            .clone()
            .flat_map(move |n| self.k.clone().map(move |k| Atom::Auxiliary(n, k)));
        primaries.chain(aux)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct UnitarityViolation {
    pub atom: Atom,
    pub rule: String,
    pub detail: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct UnitarityReport {
    pub checked: usize,
    pub violations: Vec<UnitarityViolation>,
}

impl UnitarityReport {
    pub fn is_clean(&self) -> bool {
        self.violations.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Overlap {
    pub atom: Atom,
    pub rules: Vec<String>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct OrthogonalityReport {
    pub checked: usize,
    pub overlaps: Vec<Overlap>,
}

impl OrthogonalityReport {
    pub fn is_clean(&self) -> bool {
        self.overlaps.is_empty()
    }
}

/// Memo table for [`eval_atom`]; entries are written once.
pub type Memo = HashMap<Atom, BigInt>;

/// A named, immutable set of rules.
#[derive(Debug, Clone)]
pub struct RewriteSystem {
    name: String,
    rules: Vec<Rule>,
}

impl RewriteSystem {
    pub fn new(name: &str, rules: Vec<Rule>) -> Self {
        RewriteSystem {
            name: name.to_owned(),
            rules,
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn rules(&self) -> &[Rule] {
        &self.rules
    }

    pub fn rule(&self, name: &str) -> Option<&Rule> {
        self.rules.iter().find(|r| r.name == name)
    }

    pub fn rules_of_kind(&self, kind: RuleKind) -> impl Iterator<Item = &Rule> {
        self.rules.iter().filter(move |r| r.kind == kind)
    }

    /// Rules whose domain holds at `atom`. Primary atoms only see primary and
    /// startup rules; auxiliary atoms only auxiliary and termination rules.
    pub fn applicable(&self, atom: &Atom) -> Vec<&Rule> {
        self.rules.iter().filter(|r| r.applies(atom)).collect()
    }

    /// The unique ground rule with source `atom`, if any.
    pub fn ground_rule(&self, atom: &Atom) -> Result<Option<GroundRule>> {
        match self.applicable(atom).as_slice() {
            [] => Ok(None),
            [rule] => rule.ground(atom).map(Some),
            [first, second, ..] => Err(Error::AmbiguousRule {
                atom: *atom,
                first: first.name.clone(),
                second: second.name.clone(),
            }),
        }
    }

    /// Coefficient bounds and fan-target distinctness of every ground rule in
    /// `region`, for every rule whose domain holds.
    pub fn check_unitary(&self, region: &Region) -> UnitarityReport {
        let mut report = UnitarityReport::default();
        for atom in region.atoms() {
            for rule in self.applicable(&atom) {
                report.checked += 1;
                let rhs = rule
                    .instantiate(&atom)
                    .expect("applicable rule matches family");
                for entry in rhs.fan.iter().filter(|e| !(-1..=1).contains(&e.coeff)) {
                    report.violations.push(UnitarityViolation {
                        atom,
                        rule: rule.name.clone(),
                        detail: format!("coefficient {} on {}", entry.coeff, entry.target),
                    });
                }
                let mut seen = HashSet::new();
                for entry in &rhs.fan {
                    if !seen.insert(entry.target) {
                        report.violations.push(UnitarityViolation {
                            atom,
                            rule: rule.name.clone(),
                            detail: format!("repeated target {}", entry.target),
                        });
                    }
                }
            }
        }
        report
    }

    /// At most one rule per group applies at every atom of `region`.
    pub fn check_orthogonal(&self, region: &Region) -> OrthogonalityReport {
        let mut report = OrthogonalityReport::default();
        for atom in region.atoms() {
            report.checked += 1;
            let rules = self.applicable(&atom);
            if rules.len() > 1 {
                report.overlaps.push(Overlap {
                    atom,
                    rules: rules.iter().map(|r| r.name.clone()).collect(),
                });
            }
        }
        report
    }
}

/// Default bound on consecutive auxiliary rewrites below a query atom.
pub fn default_eval_budget(atom: &Atom) -> usize {
    let (n, k) = atom.coords();
    10 * (n.unsigned_abs() as usize + k.unsigned_abs() as usize + 1)
}

/// Evaluates `atom` with the default budget (or the environment override).
pub fn eval_atom(system: &RewriteSystem, atom: Atom, memo: &mut Memo) -> Result<BigInt> {
    let budget = crate::budget_override().unwrap_or_else(|| default_eval_budget(&atom));
    eval_atom_with_budget(system, atom, memo, budget)
}

struct Frame {
    atom: Atom,
    rule: GroundRule,
    next: usize,
    acc: BigInt,
    chain: usize,
}

/// Value of `atom` reading every rule left to right:
/// `constant + sum coeff * value(target)`.
///
/// `budget` bounds the number of consecutive auxiliary-plane rewrites along
/// any chain; chains restart at primary atoms. Evaluation uses an explicit
/// stack, so deep chains do not touch the call stack.
pub fn eval_atom_with_budget(
    system: &RewriteSystem,
    atom: Atom,
    memo: &mut Memo,
    budget: usize,
) -> Result<BigInt> {
    if let Some(v) = memo.get(&atom) {
        return Ok(v.clone());
    }
    let open = |atom: Atom, chain: usize| -> Result<Frame> {
        let rule = system
            .ground_rule(&atom)?
            .ok_or_else(|| Error::NoRuleApplies {
                system: system.name.clone(),
                atom,
            })?;
        Ok(Frame {
            atom,
            acc: BigInt::from(rule.constant),
            rule,
            next: 0,
            chain,
        })
    };
    let mut in_progress: HashSet<Atom> = HashSet::from([atom]);
    let mut stack = vec![open(atom, usize::from(!atom.is_primary()))?];
    while let Some(top) = stack.last_mut() {
        if top.next == top.rule.fan.len() {
            let done = stack.pop().expect("nonempty stack");
            in_progress.remove(&done.atom);
            memo.insert(done.atom, done.acc);
            if let Some(parent) = stack.last_mut() {
                let entry = &parent.rule.fan[parent.next];
                parent.acc += &memo[&entry.target] * entry.coeff;
                parent.next += 1;
            }
            continue;
        }
        let entry = &top.rule.fan[top.next];
        if let Some(v) = memo.get(&entry.target) {
            top.acc += v * entry.coeff;
            top.next += 1;
            continue;
        }
        let target = entry.target;
        if !in_progress.insert(target) {
            return Err(Error::Cyclic {
                system: system.name.clone(),
                atom: target,
            });
        }
        let chain = if target.is_primary() {
            0
        } else {
            top.chain + 1
        };
        if chain > budget {
            return Err(Error::BudgetExceeded {
                what: format!("evaluating {target} in `{}`", system.name),
                budget,
            });
        }
        let frame = open(target, chain)?;
        stack.push(frame);
    }
    Ok(memo[&atom].clone())
}

/// The built-in composite recurrences.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Builtin {
    MinPart,
    MaxPart,
    Bounded,
}

impl Builtin {
    pub const ALL: [Builtin; 3] = [Builtin::MinPart, Builtin::MaxPart, Builtin::Bounded];

    pub fn name(self) -> &'static str {
        match self {
            Builtin::MinPart => "minpart",
            Builtin::MaxPart => "maxpart",
            Builtin::Bounded => "bounded",
        }
    }
}

impl fmt::Display for Builtin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Builtin {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Builtin::ALL
            .into_iter()
            .find(|b| b.name() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown system `{s}`")))
    }
}

/// The named built-in system; `maxpart` without the completion rules.
pub fn builtin_system(which: Builtin) -> RewriteSystem {
    match which {
        Builtin::MinPart => minpart_system(),
        Builtin::MaxPart => maxpart_system(false),
        Builtin::Bounded => bounded_system(),
    }
}

/// Smallest-part system. Auxiliary atom `A(n, k)` is `p_min k(n)`.
pub fn minpart_system() -> RewriteSystem {
    use RuleKind::*;
    RewriteSystem::new(
        "minpart",
        vec![
            Rule::on_primary("min.base", Primary, |n| n == 0, |_| Rhs::constant(1)),
            Rule::on_primary(
                "min.split",
                Startup,
                |n| n > 0,
                |n| {
                    Rhs::fan(
                        0,
                        (1..=n)
                            .map(|i| FanEntry::plus(Atom::Auxiliary(n, i)))
                            .collect(),
                    )
                },
            ),
            Rule::on_auxiliary(
                "min.first",
                Termination,
                |n, k| n > 0 && k == 1,
                |n, _| Rhs::fan(0, vec![FanEntry::plus(Atom::Primary(n - 1))]),
            ),
            Rule::on_auxiliary(
                "min.step",
                Auxiliary,
                |n, k| 2 <= k && k <= n,
                |n, k| {
                    Rhs::fan(
                        0,
                        vec![
                            FanEntry::plus(Atom::Auxiliary(n - 1, k - 1)),
                            FanEntry::minus(Atom::Auxiliary(n - k, k - 1)),
                        ],
                    )
                },
            ),
            Rule::on_auxiliary(
                "min.empty",
                Termination,
                |n, k| k > n,
                |_, _| Rhs::constant(0),
            ),
        ],
    )
}

/// Largest-part system. Auxiliary atom `A(n, k)` is `p_max k(n)`.
///
/// The boundary `k = n/2` belongs to the termination rule. With `completed`
/// the two rules covering `k = 1` and `k > n` are added as well.
pub fn maxpart_system(completed: bool) -> RewriteSystem {
    use RuleKind::*;
    let mut rules = vec![
        Rule::on_primary(
            "max.split",
            Startup,
            |n| n >= 0,
            |n| {
                Rhs::fan(
                    1,
                    (2..=n)
                        .map(|k| FanEntry::plus(Atom::Auxiliary(n, k)))
                        .collect(),
                )
            },
        ),
        Rule::on_auxiliary(
            "max.single",
            Termination,
            |n, k| k >= 2 && 2 * k >= n && k <= n,
            |n, k| Rhs::fan(0, vec![FanEntry::plus(Atom::Primary(n - k))]),
        ),
        Rule::on_auxiliary(
            "max.step",
            Auxiliary,
            |n, k| k >= 2 && 2 * k < n,
            |n, k| {
                Rhs::fan(
                    0,
                    vec![
                        FanEntry::plus(Atom::Auxiliary(n + 1, k + 1)),
                        FanEntry::minus(Atom::Auxiliary(n - k, k + 1)),
                    ],
                )
            },
        ),
    ];
    if completed {
        rules.push(Rule::on_auxiliary(
            "max.unit",
            Termination,
            |n, k| n > 0 && k == 1,
            |_, _| Rhs::constant(1),
        ));
        rules.push(Rule::on_auxiliary(
            "max.empty",
            Termination,
            |n, k| k > n,
            |_, _| Rhs::constant(0),
        ));
    }
    let name = if completed {
        "maxpart+completion"
    } else {
        "maxpart"
    };
    RewriteSystem::new(name, rules)
}

/// Bounded-part system. Auxiliary atom `A(n, k)` is `p_<k(n)`.
///
/// At `k = 2, n <= 1` both "`p_<2 = 1`" and "`p_<k = p` for `k > n`" would
/// apply; the first one keeps `k = 2` and the second is restricted to `k >= 3`.
pub fn bounded_system() -> RewriteSystem {
    use RuleKind::*;
    RewriteSystem::new(
        "bounded",
        vec![
            Rule::on_primary(
                "lt.base",
                Primary,
                |n| (0..=1).contains(&n),
                |_| Rhs::constant(1),
            ),
            Rule::on_primary(
                "lt.split",
                Startup,
                |n| n >= 2,
                |n| Rhs::fan(1, vec![FanEntry::plus(Atom::Auxiliary(n, n))]),
            ),
            Rule::on_auxiliary(
                "lt.two",
                Termination,
                |n, k| k == 2 && n >= 0,
                |_, _| Rhs::constant(1),
            ),
            Rule::on_auxiliary(
                "lt.step",
                Auxiliary,
                |n, k| 3 <= k && k <= n,
                |n, k| {
                    let step = k - 1;
                    Rhs::fan(
                        0,
                        (0..=n / step)
                            .map(|m| FanEntry::plus(Atom::Auxiliary(n - m * step, step)))
                            .collect(),
                    )
                },
            ),
            Rule::on_auxiliary(
                "lt.all",
                Termination,
                |n, k| k >= 3 && 0 <= n && n < k,
                |n, _| Rhs::fan(0, vec![FanEntry::plus(Atom::Primary(n))]),
            ),
        ],
    )
}

/// The smallest-part equations read left to right exactly as stated, with
/// no domain adjustments. Its summation and difference rules overlap, so it
/// is not orthogonal; kept as a negative case for the checker.
pub fn naive_minpart_system() -> RewriteSystem {
    use RuleKind::*;
    RewriteSystem::new(
        "minpart-naive",
        vec![
            Rule::on_primary(
                "naive.shift",
                Startup,
                |n| n >= 0,
                |n| Rhs::fan(0, vec![FanEntry::plus(Atom::Auxiliary(n + 1, 1))]),
            ),
            Rule::on_auxiliary(
                "naive.sum",
                Auxiliary,
                |n, k| k < n,
                |n, k| {
                    Rhs::fan(
                        0,
                        (k..=n - k)
                            .map(|i| FanEntry::plus(Atom::Auxiliary(n - k, i)))
                            .collect(),
                    )
                },
            ),
            Rule::on_auxiliary(
                "naive.diag",
                Termination,
                |n, k| k == n,
                |_, _| Rhs::constant(1),
            ),
            Rule::on_auxiliary(
                "naive.empty",
                Termination,
                |n, k| k > n,
                |_, _| Rhs::constant(0),
            ),
            Rule::on_auxiliary(
                "naive.diff",
                Auxiliary,
                |_, k| k >= 2,
                |n, k| {
                    Rhs::fan(
                        0,
                        vec![
                            FanEntry::plus(Atom::Auxiliary(n - 1, k - 1)),
                            FanEntry::minus(Atom::Auxiliary(n - k, k - 1)),
                        ],
                    )
                },
            ),
        ],
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engines;

    fn counts(system: &RewriteSystem) -> [usize; 4] {
        [
            RuleKind::Primary,
            RuleKind::Startup,
            RuleKind::Auxiliary,
            RuleKind::Termination,
        ]
        .map(|k| system.rules_of_kind(k).count())
    }

    #[test]
    fn builtin_rule_inventory() {
        assert_eq!(counts(&minpart_system()), [1, 1, 1, 2]);
        assert_eq!(counts(&bounded_system()), [1, 1, 1, 2]);
        assert_eq!(counts(&maxpart_system(false)), [0, 1, 1, 1]);
        assert_eq!(counts(&maxpart_system(true)), [0, 1, 1, 3]);
    }

    #[test]
    fn ground_instances() {
        let min = minpart_system();
        let g = min.ground_rule(&Atom::Auxiliary(2, 2)).unwrap().unwrap();
        assert_eq!(g.rule, "min.step");
        assert_eq!(g.constant, 0);
        assert_eq!(
            g.fan,
            vec![
                FanEntry::plus(Atom::Auxiliary(1, 1)),
                FanEntry::minus(Atom::Auxiliary(0, 1))
            ]
        );
        let g = min.ground_rule(&Atom::Primary(0)).unwrap().unwrap();
        assert_eq!((g.constant, g.fan.len(), g.kind), (1, 0, RuleKind::Primary));

        let max = maxpart_system(false);
        let g = max.ground_rule(&Atom::Auxiliary(10, 2)).unwrap().unwrap();
        assert_eq!(
            g.fan,
            vec![
                FanEntry::plus(Atom::Auxiliary(11, 3)),
                FanEntry::minus(Atom::Auxiliary(8, 3))
            ]
        );
        // the startup rule has fanless ground instances at n <= 1
        for n in 0..=1 {
            let g = max.ground_rule(&Atom::Primary(n)).unwrap().unwrap();
            assert_eq!((g.constant, g.fan.len()), (1, 0));
        }
        assert!(max.ground_rule(&Atom::Auxiliary(3, 1)).unwrap().is_none());
    }

    #[test]
    fn naive_reading_overlaps() {
        let report = naive_minpart_system().check_orthogonal(&Region::square(0, 20));
        assert!(!report.is_clean());
        let at = report
            .overlaps
            .iter()
            .find(|o| o.atom == Atom::Auxiliary(5, 2))
            .expect("overlap at A(5,2)");
        assert_eq!(at.rules, vec!["naive.sum", "naive.diff"]);
        assert!(matches!(
            naive_minpart_system().ground_rule(&Atom::Auxiliary(5, 2)),
            Err(Error::AmbiguousRule { .. })
        ));
    }

    #[test]
    fn builtins_are_unitary_and_orthogonal() {
        let region = Region::square(0, 50);
        for b in Builtin::ALL {
            let s = builtin_system(b);
            assert!(s.check_unitary(&region).is_clean(), "{b}");
            assert!(s.check_orthogonal(&region).is_clean(), "{b}");
        }
        let completed = maxpart_system(true);
        assert!(completed.check_orthogonal(&region).is_clean());
        let region = Region {
            n: 0..=60,
            k: 2..=30,
        };
        assert!(maxpart_system(false).check_unitary(&region).is_clean());
    }

    #[test]
    fn duplicated_target_is_reported_once() {
        let broken = RewriteSystem::new(
            "broken",
            vec![Rule::on_auxiliary(
                "dup",
                RuleKind::Auxiliary,
                |n, k| n == 3 && k == 2,
                |_, _| {
                    Rhs::fan(
                        0,
                        vec![
                            FanEntry::plus(Atom::Auxiliary(2, 1)),
                            FanEntry::plus(Atom::Auxiliary(2, 1)),
                        ],
                    )
                },
            )],
        );
        let report = broken.check_unitary(&Region::square(0, 10));
        assert_eq!(report.violations.len(), 1);
        assert_eq!(report.violations[0].atom, Atom::Auxiliary(3, 2));
        assert_eq!(report.violations[0].rule, "dup");
    }

    #[test]
    fn nonunit_coefficient_is_reported() {
        let s = RewriteSystem::new(
            "scaled",
            vec![Rule::on_primary(
                "twice",
                RuleKind::Primary,
                |n| n == 1,
                |_| {
                    Rhs::fan(
                        0,
                        vec![FanEntry {
                            coeff: 2,
                            target: Atom::Primary(0),
                        }],
                    )
                },
            )],
        );
        assert_eq!(s.check_unitary(&Region::square(0, 3)).violations.len(), 1);
    }

    #[test]
    fn malformed_fan_is_rejected() {
        let s = RewriteSystem::new(
            "mixed",
            vec![Rule::on_primary(
                "bad",
                RuleKind::Startup,
                |_| true,
                |n| Rhs::fan(0, vec![FanEntry::plus(Atom::Primary(n - 1))]),
            )],
        );
        assert!(matches!(
            s.ground_rule(&Atom::Primary(3)),
            Err(Error::MalformedRule { .. })
        ));
    }

    #[test]
    fn evaluation_examples() {
        let mut memo = Memo::new();
        assert_eq!(
            eval_atom(&minpart_system(), Atom::Primary(5), &mut memo).unwrap(),
            7.into()
        );
        let mut memo = Memo::new();
        assert_eq!(
            eval_atom(&bounded_system(), Atom::Primary(4), &mut memo).unwrap(),
            5.into()
        );
        let mut memo = Memo::new();
        assert_eq!(
            eval_atom(&maxpart_system(false), Atom::Auxiliary(4, 3), &mut memo).unwrap(),
            1.into()
        );
    }

    #[test]
    fn builtins_match_engines() {
        let euler: Vec<BigInt> = {
            let mut e = engines::EulerEngine::default();
            use engines::Engine;
            (0..=200)
                .map(|n| BigInt::from(e.count(n).unwrap()))
                .collect()
        };
        for b in Builtin::ALL {
            let s = builtin_system(b);
            let mut memo = Memo::new();
            for n in 0..=200 {
                let v = eval_atom(&s, Atom::Primary(n), &mut memo).unwrap();
                assert_eq!(v, euler[n as usize], "{b} n={n}");
            }
        }
    }

    #[test]
    fn deep_query_without_warm_memo() {
        // a cold query walks the whole chain of nested primaries on the heap
        let mut memo = Memo::new();
        let v = eval_atom(&maxpart_system(false), Atom::Primary(300), &mut memo).unwrap();
        assert_eq!(v, BigInt::from(engines::p_euler(300).unwrap()));
    }

    #[test]
    fn missing_rule_and_budget_errors() {
        let mut memo = Memo::new();
        assert!(matches!(
            eval_atom(&maxpart_system(false), Atom::Auxiliary(5, 1), &mut memo),
            Err(Error::NoRuleApplies { .. })
        ));
        let mut memo = Memo::new();
        assert!(matches!(
            eval_atom_with_budget(&maxpart_system(false), Atom::Auxiliary(30, 2), &mut memo, 3),
            Err(Error::BudgetExceeded { .. })
        ));
    }

    #[test]
    fn cycles_are_detected() {
        let s = RewriteSystem::new(
            "loop",
            vec![Rule::on_auxiliary(
                "self",
                RuleKind::Auxiliary,
                |_, _| true,
                |n, k| Rhs::fan(0, vec![FanEntry::plus(Atom::Auxiliary(n, k))]),
            )],
        );
        let mut memo = Memo::new();
        assert!(matches!(
            eval_atom(&s, Atom::Auxiliary(1, 1), &mut memo),
            Err(Error::Cyclic { .. })
        ));
    }

    #[test]
    fn boundary_termination_equals_completed_auxiliary() {
        // at n = 2k the termination rule and the auxiliary rule (with the
        // completion rules in scope) produce the same value
        let completed = maxpart_system(true);
        let step = completed.rule("max.step").unwrap();
        let mut memo = Memo::new();
        for k in 2..=20i64 {
            let atom = Atom::Auxiliary(2 * k, k);
            assert_eq!(
                completed.ground_rule(&atom).unwrap().unwrap().rule,
                "max.single"
            );
            let direct = eval_atom(&completed, atom, &mut memo).unwrap();
            let rhs = step.instantiate(&atom).unwrap();
            let mut via_step = BigInt::from(rhs.constant);
            for e in &rhs.fan {
                via_step += eval_atom(&completed, e.target, &mut memo).unwrap() * e.coeff;
            }
            assert_eq!(direct, via_step, "k={k}");
        }
    }

    #[test]
    fn builtin_names_parse() {
        for b in Builtin::ALL {
            assert_eq!(b.name().parse::<Builtin>().unwrap(), b);
        }
        assert!("naive".parse::<Builtin>().is_err());
    }
}
