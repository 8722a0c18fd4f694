//! Invariant suites with pass/fail reports, shared by the CLI and tests.
//!
//! Every check runs over an explicit range. Suite runners clamp their upper
//! bound to the caps below unless the caller lifts them.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use serde::Serialize;

use crate::codes::{
    classify, code_of_maxpart_path, decode_path, enumerate_bj, involution, polarity,
    split_valuation, termination_predicates, valuation, PathClassification, PathCode,
};
use crate::coefficients::{
    c_from_product, c_from_recurrence, e_from_recurrence, euler_product, euler_seq, integrated_f,
    pentagonal_index,
};
use crate::dag::{enumerate_terminating_paths, extract_coefficients};
use crate::engines::{self, Engine, EngineKind, EulerEngine, IntegralEngine, MaxPartEngine};
use crate::error::{Error, Result};
use crate::oracle::{self, ORACLE_CAP};
use crate::rewrite::{
    builtin_system, maxpart_system, minpart_system, naive_minpart_system, Builtin, Region,
};

pub const ORACLE_CHECK_CAP: usize = 60;
pub const DAG_CAP: usize = 60;
pub const INVOLUTION_CAP: usize = 40;
pub const TERMINATION_N_CAP: u64 = 24;
pub const TERMINATION_LEN_CAP: usize = 12;
/// The integral recurrence is compared with the pentagonal one at least this far.
pub const INTEGRAL_EULER_RANGE: usize = 2000;
pub const SPLIT_SAMPLES: usize = 10_000;
pub const SPLIT_MAX_LEN: usize = 20;
pub const DEFAULT_SEED: u64 = 0x5eed_2008;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    fn new(name: &str, passed: bool, detail: impl Into<String>) -> Self {
        Check {
            name: name.to_owned(),
            passed,
            detail: detail.into(),
        }
    }

    fn from_failures(name: &str, scope: String, failures: Vec<String>) -> Self {
        if failures.is_empty() {
            Check::new(name, true, scope)
        } else {
            let shown: Vec<&str> = failures.iter().take(5).map(String::as_str).collect();
            Check::new(
                name,
                false,
                format!(
                    "{scope}; {} failure(s): {}",
                    failures.len(),
                    shown.join("; ")
                ),
            )
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerifyReport {
    pub suite: String,
    pub checks: Vec<Check>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    /// 0 iff every check passed.
    pub fn exit_code(&self) -> i32 {
        if self.passed() {
            0
        } else {
            1
        }
    }
}

impl fmt::Display for VerifyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            let tag = if c.passed { "PASS" } else { "FAIL" };
            writeln!(f, "{tag} {}: {}", c.name, c.detail)?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Engines,
    Claim,
    Lemmas,
    Involution,
    Rewrite,
    All,
}

impl Suite {
    pub const ALL: [Suite; 6] = [
        Suite::Engines,
        Suite::Claim,
        Suite::Lemmas,
        Suite::Involution,
        Suite::Rewrite,
        Suite::All,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Engines => "engines",
            Suite::Claim => "claim",
            Suite::Lemmas => "lemmas",
            Suite::Involution => "involution",
            Suite::Rewrite => "rewrite",
            Suite::All => "all",
        }
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown suite `{s}`")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct VerifyOptions {
    pub upto: usize,
    /// Use `upto` even where it exceeds a cap (the oracle cap still applies).
    pub lift_caps: bool,
    pub seed: u64,
}

impl VerifyOptions {
    pub fn new(upto: usize) -> Self {
        VerifyOptions {
            upto,
            lift_caps: false,
            seed: DEFAULT_SEED,
        }
    }

    fn capped(&self, cap: usize) -> usize {
        if self.lift_caps {
            self.upto
        } else {
            self.upto.min(cap)
        }
    }

    /// Caps that `upto` exceeds, as `(what, cap)`.
    pub fn exceeded_caps(&self, suite: Suite) -> Vec<(&'static str, usize)> {
        let mut caps = Vec::new();
        let wants = |s: Suite| suite == s || suite == Suite::All;
        if wants(Suite::Engines) || wants(Suite::Claim) {
            caps.push(("oracle", ORACLE_CHECK_CAP));
        }
        if wants(Suite::Rewrite) || wants(Suite::Lemmas) {
            caps.push(("dag", DAG_CAP));
        }
        if wants(Suite::Involution) || wants(Suite::Lemmas) {
            caps.push(("involution", INVOLUTION_CAP));
        }
        caps.into_iter().filter(|&(_, c)| self.upto > c).collect()
    }
}

pub fn run_suite(suite: Suite, opts: &VerifyOptions) -> Result<VerifyReport> {
    let checks = match suite {
        Suite::Engines => engines_suite(opts)?,
        Suite::Claim => claim_suite(opts)?,
        Suite::Lemmas => lemmas_suite(opts)?,
        Suite::Involution => involution_suite(opts)?,
        Suite::Rewrite => rewrite_suite(opts)?,
        Suite::All => {
            let mut all = Vec::new();
            for s in [
                Suite::Engines,
                Suite::Claim,
                Suite::Lemmas,
                Suite::Involution,
                Suite::Rewrite,
            ] {
                all.extend(run_suite(s, opts)?.checks);
            }
            all
        }
    };
    Ok(VerifyReport {
        suite: suite.name().to_owned(),
        checks,
    })
}

fn engines_suite(opts: &VerifyOptions) -> Result<Vec<Check>> {
    let oracle_n = opts.capped(ORACLE_CHECK_CAP).min(ORACLE_CAP as usize);
    Ok(vec![
        engines_vs_oracle(oracle_n)?,
        engine_agreement(opts.upto)?,
        maxpart_closure(opts.upto)?,
        counter_comparison(20, opts.upto.max(20))?,
    ])
}

fn claim_suite(opts: &VerifyOptions) -> Result<Vec<Check>> {
    let oracle_n = opts.capped(ORACLE_CHECK_CAP).min(ORACLE_CAP as usize);
    Ok(vec![
        integral_vs_oracle(oracle_n)?,
        integral_vs_euler(opts.upto.max(INTEGRAL_EULER_RANGE))?,
        coefficient_quadrangle(opts.upto.max(1))?,
    ])
}

fn lemmas_suite(opts: &VerifyOptions) -> Result<Vec<Check>> {
    let dag_n = opts.capped(DAG_CAP);
    let inv_n = opts.capped(INVOLUTION_CAP) as u64;
    Ok(vec![
        reference_codes(),
        termination_exhaustive(TERMINATION_N_CAP, TERMINATION_LEN_CAP)?,
        maxpart_dag_codes((dag_n as u64).min(TERMINATION_N_CAP), TERMINATION_LEN_CAP)?,
        constant_coefficients(dag_n as u64)?,
        signed_bj_counts(inv_n),
        split_valuation_sampling(SPLIT_SAMPLES, SPLIT_MAX_LEN, opts.seed),
    ])
}

fn involution_suite(opts: &VerifyOptions) -> Result<Vec<Check>> {
    involution_checks(opts.capped(INVOLUTION_CAP) as u64)
}

fn rewrite_suite(opts: &VerifyOptions) -> Result<Vec<Check>> {
    let n = opts.capped(DAG_CAP);
    Ok(vec![
        hygiene(n as i64),
        naive_overlap(),
        dag_minpart(n as u64)?,
        dag_maxpart(n as u64)?,
        substitution(n.min(40) as u64)?,
    ])
}

fn to_bigint(v: &engines::BigCount) -> BigInt {
    BigInt::from(v.clone())
}

/// Every engine equals the enumeration oracle on `0..=n`.
pub fn engines_vs_oracle(n: usize) -> Result<Check> {
    let tables = engines::tables(n)?;
    let mut failures = Vec::new();
    for m in 0..=n {
        let truth = oracle::partition_count(m as u64)?;
        for (kind, t) in &tables {
            if t[m] != truth {
                failures.push(format!("{kind}({m}) = {} != {truth}", t[m]));
            }
        }
    }
    Ok(Check::from_failures(
        "engines.oracle",
        format!("6 engines vs enumeration for 0 <= n <= {n}"),
        failures,
    ))
}

/// The six engines agree pairwise on `0..=n`.
pub fn engine_agreement(n: usize) -> Result<Check> {
    let tables = engines::tables(n)?;
    let euler = &tables[&EngineKind::Euler];
    let mut failures = Vec::new();
    for (kind, t) in &tables {
        for m in 0..=n {
            if t[m] != euler[m] {
                failures.push(format!("{kind}({m}) != euler({m})"));
            }
        }
    }
    Ok(Check::from_failures(
        "engines.agreement",
        format!("euler, integral, sigma, minpart, bounded, maxpart equal for 0 <= n <= {n}"),
        failures,
    ))
}

/// Auxiliary applications of the largest-part engine stay in `2 <= k < n/2`
/// with targets satisfying `k + 1 <= n'`.
pub fn maxpart_closure(n: usize) -> Result<Check> {
    let mut e = MaxPartEngine::default();
    e.count(n)?;
    let v = e.stats().closure_violations;
    Ok(Check::new(
        "engines.maxpart_closure",
        v == 0,
        format!("{v} closure violations computing p(0..={n})"),
    ))
}

/// Per-step recurrent-term counters: euler strictly below integral on `lo..=hi`.
pub fn counter_comparison(lo: usize, hi: usize) -> Result<Check> {
    let mut euler = EulerEngine::default();
    let mut integral = IntegralEngine::default();
    euler.count(hi)?;
    integral.count(hi)?;
    let (es, is) = (&euler.stats().per_step, &integral.stats().per_step);
    let failures: Vec<String> = (lo..=hi)
        .filter(|&n| es[n] >= is[n])
        .map(|n| format!("n={n}: euler {} >= integral {}", es[n], is[n]))
        .collect();
    Ok(Check::from_failures(
        "engines.counters",
        format!(
            "euler < integral per step for {lo} <= n <= {hi}; cumulative {} vs {}",
            euler.stats().cumulative(hi),
            integral.stats().cumulative(hi)
        ),
        failures,
    ))
}

/// `p(n) = 1 + sum f_k p(n-k)` equals the oracle on `0..=n`.
pub fn integral_vs_oracle(n: usize) -> Result<Check> {
    let mut e = IntegralEngine::default();
    let mut failures = Vec::new();
    for m in 0..=n {
        let (got, truth) = (e.count(m)?, oracle::partition_count(m as u64)?);
        if got != truth {
            failures.push(format!("p({m}) = {got} != {truth}"));
        }
    }
    Ok(Check::from_failures(
        "claim.oracle",
        format!("integral recurrence vs enumeration for 0 <= n <= {n}"),
        failures,
    ))
}

/// The integral recurrence equals the pentagonal recurrence on `0..=n`.
pub fn integral_vs_euler(n: usize) -> Result<Check> {
    let mut a = IntegralEngine::default();
    let mut b = EulerEngine::default();
    a.count(n)?;
    b.count(n)?;
    let mut failures = Vec::new();
    for m in 0..=n {
        if a.count(m)? != b.count(m)? {
            failures.push(format!("n={m}"));
        }
    }
    Ok(Check::from_failures(
        "claim.euler",
        format!("integral vs pentagonal recurrence for 0 <= n <= {n}"),
        failures,
    ))
}

/// `f = c` by product and by divisor sums; `e` by definition, by divisor
/// sums, and as minus the Euler product coefficients; all divisions exact.
pub fn coefficient_quadrangle(n: usize) -> Result<Check> {
    let f = integrated_f(n);
    let cp = c_from_product(n);
    let cr = c_from_recurrence(n)?;
    let e = euler_seq(n);
    let er = e_from_recurrence(n)?;
    let ep = euler_product(n);
    let mut failures = Vec::new();
    for m in 1..=n {
        if !(f[m] == cp[m] && cp[m] == cr[m]) {
            failures.push(format!(
                "c_{m}: f={} product={} recurrence={}",
                f[m], cp[m], cr[m]
            ));
        }
        if !(e[m] == er[m] && er[m] == -ep[m]) {
            failures.push(format!(
                "e_{m}: e={} recurrence={} -product={}",
                e[m], er[m], -ep[m]
            ));
        }
    }
    Ok(Check::from_failures(
        "claim.coefficients",
        format!(
            "f = c(product) = c(recurrence), e = e(recurrence) = -euler product, 1 <= n <= {n}"
        ),
        failures,
    ))
}

/// Reference codes: valuations, polarities, and termination at ñ = 10.
pub fn reference_codes() -> Check {
    let mut failures = Vec::new();
    for (s, nu, pi) in [
        ("10100", 10, -1),
        ("1011", 10, 1),
        ("1000", 5, 1),
        ("0011", 5, -1),
    ] {
        let b: PathCode = s.parse().expect("literal");
        let (got_nu, got_pi) = (valuation(&b), polarity(&b).unwrap_or(0));
        if (got_nu, got_pi) != (nu, pi) {
            failures.push(format!("{s}: nu={got_nu} pi={got_pi}"));
        }
    }
    for s in ["10100", "1011"] {
        let b: PathCode = s.parse().expect("literal");
        let c = classify(10, &b);
        if !c.is_terminating() || valuation(&b) != 10 {
            failures.push(format!("{s} at ñ=10 is {c:?}"));
        }
    }
    for s in ["1000", "0011"] {
        let b: PathCode = s.parse().expect("literal");
        if let Some(n0) = (11..40).find(|&n| classify(n, &b) != PathClassification::Nonterminating)
        {
            failures.push(format!("{s} terminates at ñ={n0}"));
        }
    }
    Check::from_failures(
        "lemmas.reference_codes",
        "10100, 1011, 1000, 0011: nu (10,10,5,5), pi (-,+,+,-); first two terminate at ñ=10, \
         last two stay outside the region for ñ >= 11"
            .into(),
        failures,
    )
}

/// Arithmetic termination predicates against walk simulation, for every code
/// of length `1..=max_len` with a 1-bit and every `ñ <= max_n`.
///
/// The predicates describe paths of the DAG. Walks that meet the terminal
/// region before their last vertex are not DAG paths; they are counted and
/// reported, not compared.
pub fn termination_exhaustive(max_n: u64, max_len: usize) -> Result<Check> {
    let mut failures = Vec::new();
    let (mut compared, mut early, mut early_satisfying) = (0u64, 0u64, 0u64);
    for n in 0..=max_n {
        for len in 1..=max_len {
            for b in PathCode::all_of_length(len).filter(|b| b.k0().is_some()) {
                let c = decode_path(n, &b)?.classification;
                let l = termination_predicates(n, &b)?;
                if c == PathClassification::EntersRegionEarly {
                    early += 1;
                    early_satisfying += u64::from(l.terminating);
                    continue;
                }
                compared += 1;
                if !l.agrees_with(c) || !l.implications_hold(&b) {
                    failures.push(format!("ñ={n} b={b}: {l:?} vs {c:?}"));
                }
            }
        }
    }
    Ok(Check::from_failures(
        "lemmas.termination",
        format!(
            "{compared} (ñ, code) pairs agree, ñ <= {max_n}, length <= {max_len}; \
             {early} walks enter the region early and are no DAG paths \
             ({early_satisfying} of them satisfy the arithmetic bounds)"
        ),
        failures,
    ))
}

/// Terminating paths of the largest-part DAG are exactly the terminating
/// codes, with matching sign and coefficient index.
pub fn maxpart_dag_codes(max_n: u64, max_len: usize) -> Result<Check> {
    let system = maxpart_system(false);
    let mut failures = Vec::new();
    let mut total = 0usize;
    for n in 0..=max_n {
        let mut from_dag = BTreeSet::new();
        for p in enumerate_terminating_paths(&system, n)? {
            let Some(j) = p.j else { continue };
            total += 1;
            let b = code_of_maxpart_path(&p)?;
            let l = termination_predicates(n, &b)?;
            if !l.terminating || valuation(&b) as i64 != j || polarity(&b)? != p.sign {
                failures.push(format!("ñ={n} path code {b}: j={j} sign={}", p.sign));
            }
            if !from_dag.insert(b.clone()) {
                failures.push(format!("ñ={n}: code {b} repeated"));
            }
        }
        for len in 1..=max_len {
            for b in PathCode::all_of_length(len).filter(|b| b.k0().is_some()) {
                if classify(n, &b).is_terminating() != from_dag.contains(&b) {
                    failures.push(format!("ñ={n}: code {b} decodes one way, DAG says other"));
                }
            }
        }
    }
    Ok(Check::from_failures(
        "lemmas.dag_codes",
        format!("{total} terminating DAG paths for ñ <= {max_n} match their codes; all codes of length <= {max_len} cross-checked"),
        failures,
    ))
}

/// The largest-part coefficients do not depend on ñ: consecutive DAGs agree
/// on every `j < ñ`.
pub fn constant_coefficients(max_n: u64) -> Result<Check> {
    let system = maxpart_system(false);
    let mut failures = Vec::new();
    let mut prev = extract_coefficients(&system, 2)?;
    for n in 3..=max_n.max(3) {
        let cur = extract_coefficients(&system, n)?;
        for j in 1..prev.n_tilde {
            if prev.coeff(j) != cur.coeff(j) {
                failures.push(format!("c_{j} differs between ñ={} and ñ={n}", n - 1));
            }
        }
        prev = cur;
    }
    Ok(Check::from_failures(
        "lemmas.constant_coefficients",
        format!(
            "largest-part extraction stable across consecutive ñ, 3 <= ñ <= {}",
            max_n.max(3)
        ),
        failures,
    ))
}

/// `c_j` is the signed count of `B_j`.
pub fn signed_bj_counts(max_j: u64) -> Check {
    let c = c_from_product(max_j as usize);
    let failures: Vec<String> = (2..=max_j)
        .filter_map(|j| {
            let s: i64 = enumerate_bj(j)
                .iter()
                .map(|b| polarity(b).expect("leading 1"))
                .sum();
            (s != c[j as usize]).then(|| format!("j={j}: {s} != {}", c[j as usize]))
        })
        .collect();
    Check::from_failures(
        "lemmas.signed_bj",
        format!("sum of polarities over B_j equals c_j for 2 <= j <= {max_j}"),
        failures,
    )
}

/// Split valuation of random word pairs.
pub fn split_valuation_sampling(samples: usize, max_len: usize, seed: u64) -> Check {
    let mut rng = StdRng::seed_from_u64(seed);
    let word = |rng: &mut StdRng| {
        let len = rng.gen_range(0..=max_len);
        PathCode::from_bits((0..len).map(|_| rng.gen()).collect())
    };
    let mut failures = Vec::new();
    for _ in 0..samples {
        let (p, s) = (word(&mut rng), word(&mut rng));
        if valuation(&p.concat(&s)) != split_valuation(&p, &s) {
            failures.push(format!("{p} . {s}"));
        }
    }
    Check::from_failures(
        "lemmas.split_valuation",
        format!("{samples} random pairs, lengths <= {max_len}, seed {seed:#x}"),
        failures,
    )
}

/// The involution on `B_j ∪ B_{j-1}` for `2 <= j <= max_j`.
pub fn involution_checks(max_j: u64) -> Result<Vec<Check>> {
    let e = euler_seq(max_j as usize);
    let (mut self_inverse, mut law, mut fixed, mut identity) = (vec![], vec![], vec![], vec![]);
    let mut pairs = 0usize;
    for j in 2..=max_j {
        let bj = enumerate_bj(j);
        let prev = enumerate_bj(j - 1);
        let mut fixed_sum = 0i64;
        let mut fixed_count = 0usize;
        for b in bj.iter().chain(&prev) {
            let step = involution(j, b)?;
            let back = involution(j, &step.output)?;
            if back.output != *b {
                self_inverse.push(format!("j={j}: {b} -> {} -> {}", step.output, back.output));
            }
            let pi = polarity(b)?;
            if step.is_fixed() {
                fixed_count += 1;
                fixed_sum += pi;
                if let Some(why) = fixed_point_defect(j, b, pi) {
                    fixed.push(format!("j={j}: {b} {why}"));
                }
                continue;
            }
            pairs += 1;
            let same_sign = pi == polarity(&step.output)?;
            let different_valuation = valuation(b) != valuation(&step.output);
            if same_sign != different_valuation {
                law.push(format!("j={j}: {b} <-> {}", step.output));
            }
        }
        if (fixed_count > 0) != pentagonal_index(j).is_some() {
            fixed.push(format!("j={j}: {fixed_count} fixed points"));
        }
        let lhs: i64 = bj
            .iter()
            .map(|b| polarity(b).expect("leading 1"))
            .sum::<i64>()
            - prev
                .iter()
                .map(|b| polarity(b).expect("leading 1"))
                .sum::<i64>();
        if lhs != e[j as usize] || fixed_sum != e[j as usize] {
            identity.push(format!(
                "j={j}: difference {lhs}, fixed sum {fixed_sum}, e_j {}",
                e[j as usize]
            ));
        }
    }
    let scope = |what: &str| format!("{what}, 2 <= j <= {max_j}");
    Ok(vec![
        Check::from_failures(
            "involution.self_inverse",
            scope("applied twice is the identity"),
            self_inverse,
        ),
        Check::from_failures(
            "involution.polarity_law",
            scope(&format!(
                "{pairs} non-fixed pairs: same polarity iff different valuation"
            )),
            law,
        ),
        Check::from_failures(
            "involution.fixed_points",
            scope("fixed points are 1^{k+2}0^k, 1^{k+2}0^{k+1}, 1 at pentagonal j with sign e_j"),
            fixed,
        ),
        Check::from_failures(
            "involution.identity",
            scope("sum over B_j minus sum over B_{j-1} is e_j"),
            identity,
        ),
    ])
}

fn fixed_point_defect(j: u64, b: &PathCode, pi: i64) -> Option<String> {
    let run = b.bits().iter().take_while(|&&x| x).count();
    let tail = b.len() - run;
    if b.bits()[run..].iter().any(|&x| x) {
        return Some("is not of the form 1^a 0^b".into());
    }
    let k = run as i64 - 2;
    let shape_ok = b.len() == 1 || (k >= 0 && (tail as i64 == k || tail as i64 == k + 1));
    if !shape_ok {
        return Some("has an unexpected shape".into());
    }
    if b.len() > 1 {
        let m = (k + 2) as u64;
        let expected = if tail as i64 == k {
            m * (3 * m - 1) / 2
        } else {
            m * (3 * m + 1) / 2
        };
        let sign = if k % 2 == 0 { -1 } else { 1 };
        if valuation(b) != expected || pi != sign {
            return Some(format!("nu={} pi={pi}", valuation(b)));
        }
    } else if j != 2 || pi != 1 {
        return Some("unexpected valuation".into());
    }
    None
}

/// Unitarity and orthogonality of the built-ins on `0 <= n, k <= max`.
pub fn hygiene(max: i64) -> Check {
    let region = Region::square(0, max);
    let mut failures = Vec::new();
    let mut checked = 0;
    for b in Builtin::ALL {
        let s = builtin_system(b);
        let u = s.check_unitary(&region);
        let o = s.check_orthogonal(&region);
        checked += u.checked;
        failures.extend(
            u.violations
                .iter()
                .map(|v| format!("{b}: {} {} {}", v.rule, v.atom, v.detail)),
        );
        failures.extend(
            o.overlaps
                .iter()
                .map(|v| format!("{b}: {} overlaps {:?}", v.atom, v.rules)),
        );
    }
    Check::from_failures(
        "rewrite.hygiene",
        format!("minpart, maxpart, bounded unitary and orthogonal on 0 <= n,k <= {max} ({checked} ground rules)"),
        failures,
    )
}

/// The face-value reading of the smallest-part equations is not orthogonal.
pub fn naive_overlap() -> Check {
    let report = naive_minpart_system().check_orthogonal(&Region::square(0, 20));
    let pair = report.overlaps.iter().any(|o| {
        o.rules.iter().any(|r| r == "naive.sum") && o.rules.iter().any(|r| r == "naive.diff")
    });
    let first = report
        .overlaps
        .first()
        .map(|o| o.atom.to_string())
        .unwrap_or_default();
    Check::new(
        "rewrite.naive_overlap",
        pair,
        format!(
            "{} overlapping atoms, first at {first}",
            report.overlaps.len()
        ),
    )
}

/// Smallest-part extraction gives constant 0 and the Euler coefficients.
pub fn dag_minpart(max_n: u64) -> Result<Check> {
    let e = euler_seq(max_n as usize);
    let system = minpart_system();
    let mut failures = Vec::new();
    for n in 1..=max_n {
        let r = extract_coefficients(&system, n)?;
        if !r.constant.is_zero() {
            failures.push(format!("ñ={n}: constant {}", r.constant));
        }
        for j in 1..=n as i64 {
            if r.coeff(j) != BigInt::from(e[j as usize]) {
                failures.push(format!("ñ={n}: c_{j} = {}", r.coeff(j)));
            }
        }
    }
    Ok(Check::from_failures(
        "rewrite.dag_minpart",
        format!("constant 0 and c_j = e_j for 1 <= j <= ñ <= {max_n}"),
        failures,
    ))
}

/// Largest-part extraction gives constant 1 and the integrated coefficients.
pub fn dag_maxpart(max_n: u64) -> Result<Check> {
    let f = integrated_f(max_n as usize);
    let system = maxpart_system(false);
    let mut failures = Vec::new();
    for n in 1..=max_n {
        let r = extract_coefficients(&system, n)?;
        if !r.constant.is_one() {
            failures.push(format!("ñ={n}: constant {}", r.constant));
        }
        for j in 1..=n as i64 {
            if r.coeff(j) != BigInt::from(f[j as usize]) {
                failures.push(format!("ñ={n}: c_{j} = {}", r.coeff(j)));
            }
        }
    }
    Ok(Check::from_failures(
        "rewrite.dag_maxpart",
        format!("constant 1 and c_j = f_j for 1 <= j <= ñ <= {max_n}"),
        failures,
    ))
}

/// Extracted recurrences reproduce `p(ñ)` on both reducible systems.
pub fn substitution(max_n: u64) -> Result<Check> {
    let p: Vec<BigInt> = {
        let t = engines::tables(max_n as usize)?;
        t[&EngineKind::Euler].iter().map(to_bigint).collect()
    };
    let mut failures = Vec::new();
    for system in [minpart_system(), maxpart_system(false)] {
        for n in 0..=max_n {
            let r = extract_coefficients(&system, n)?;
            if r.evaluate(&p) != p[n as usize] {
                failures.push(format!("{} ñ={n}", system.name()));
            }
        }
    }
    Ok(Check::from_failures(
        "rewrite.substitution",
        format!("c_0 + sum c_j p(ñ-j) = p(ñ) for ñ <= {max_n}"),
        failures,
    ))
}
