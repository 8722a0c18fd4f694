//! Subcommand implementations. Each returns the text to print and an exit code.

use std::path::Path;
use std::time::Instant;

use clap::ValueEnum;
use serde::Serialize;

use plab_core::codes::{
    self, decode_path, edge_count, enumerate_bj, pentagonal_codes, polarity,
    termination_predicates, to_strict_partition, valuation, PathClassification, PathCode,
    TerminationPredicates,
};
use plab_core::coefficients::{
    c_from_product, c_from_recurrence, e_from_recurrence, euler_e, euler_seq, integrated_f,
};
use plab_core::dag::{build_dag, default_vertex_budget, emit_dot, DagEdge, DagVertex};
use plab_core::engines::{Engine, EngineKind, EulerEngine, IntegralEngine};
use plab_core::oracle;
use plab_core::rewrite::{builtin_system, eval_atom, Atom, Builtin, Memo};
use plab_core::verify::{self, Suite, VerifyOptions, DAG_CAP};
use plab_core::Error;

use crate::render::{self, csv, index_value_csv, json, opt};
use crate::Format;

pub struct Output {
    pub text: String,
    pub code: u8,
}

impl Output {
    fn ok(text: String) -> Self {
        Output { text, code: 0 }
    }
}

#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

pub const EXIT_VERIFY: u8 = 1;
pub const EXIT_USAGE: u8 = 2;
pub const EXIT_INTERNAL: u8 = 3;

fn usage(message: impl Into<String>) -> Failure {
    Failure {
        code: EXIT_USAGE,
        message: message.into(),
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::OracleCap { .. }
            | Error::InvalidArgument(_)
            | Error::InvalidCode(_)
            | Error::InvalidPartition(_)
            | Error::NotInDomain { .. } => EXIT_USAGE,
            _ => EXIT_INTERNAL,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

type Result<T> = std::result::Result<T, Failure>;

fn allow(format: Format, allowed: &[Format], command: &str) -> Result<()> {
    if allowed.contains(&format) {
        Ok(())
    } else if format == Format::Dot {
        Err(usage(format!(
            "format `dot` is only valid for `dag`, not `{command}`"
        )))
    } else {
        Err(usage(
            format!("format `{format:?}` is not supported by `{command}`").to_lowercase(),
        ))
    }
}

const TABLES: &[Format] = &[Format::Json, Format::Csv, Format::Plain];

#[derive(Serialize)]
struct CountOut {
    n: u64,
    method: String,
    value: String,
    /// Recurrent terms read by an engine over `p(0..=n)`.
    recurrent_terms: Option<u64>,
}

pub fn count(n: u64, method: &str, format: Format) -> Result<Output> {
    allow(format, TABLES, "count")?;
    let (value, terms) = if method == "oracle" {
        (oracle::partition_count(n)?.to_string(), None)
    } else if let Some(system) = method.strip_prefix("rewrite:") {
        let system = builtin_system(system.parse::<Builtin>()?);
        let mut memo = Memo::new();
        (
            eval_atom(&system, Atom::Primary(n as i64), &mut memo)?.to_string(),
            None,
        )
    } else {
        let kind: EngineKind = method.parse()?;
        let mut engine = kind.engine();
        let v = engine.count(n as usize)?;
        (v.to_string(), Some(engine.stats().total()))
    };
    let out = CountOut {
        n,
        method: method.to_owned(),
        value,
        recurrent_terms: terms,
    };
    Ok(Output::ok(match format {
        Format::Json => json(&out),
        Format::Csv => index_value_csv([(n as i64, &out.value)]),
        _ => format!("{}\n", out.value),
    }))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CoeffsKind {
    E,
    F,
    CProduct,
    CRecurrence,
    ERecurrence,
    DagMinpart,
    DagMaxpart,
}

#[derive(Serialize)]
struct Entry {
    index: i64,
    value: i64,
}

#[derive(Serialize)]
struct CoeffsOut {
    kind: String,
    upto: usize,
    /// Constant term of an extracted recurrence; absent for sequences.
    #[serde(skip_serializing_if = "Option::is_none")]
    constant: Option<String>,
    values: Vec<Entry>,
}

pub fn coeffs(kind: CoeffsKind, upto: usize, lift_caps: bool, format: Format) -> Result<Output> {
    allow(format, TABLES, "coeffs")?;
    if upto < 1 {
        return Err(usage("--upto must be at least 1"));
    }
    let indexed = |v: Vec<i64>| -> Vec<Entry> {
        v.into_iter()
            .enumerate()
            .map(|(i, value)| Entry {
                index: i as i64,
                value,
            })
            .collect()
    };
    let mut constant = None;
    let values = match kind {
        CoeffsKind::E => indexed(euler_seq(upto).values),
        CoeffsKind::F => indexed(integrated_f(upto).values),
        CoeffsKind::CProduct => indexed(c_from_product(upto).values),
        CoeffsKind::CRecurrence => indexed(c_from_recurrence(upto)?.values),
        CoeffsKind::ERecurrence => indexed(e_from_recurrence(upto)?.values),
        CoeffsKind::DagMinpart | CoeffsKind::DagMaxpart => {
            dag_cap(upto as u64, lift_caps)?;
            let which = if kind == CoeffsKind::DagMinpart {
                Builtin::MinPart
            } else {
                Builtin::MaxPart
            };
            let r = plab_core::dag::extract_coefficients(&builtin_system(which), upto as u64)?;
            constant = Some(r.constant.to_string());
            r.coeffs
                .iter()
                .map(|(&index, c)| {
                    i64::try_from(c)
                        .map(|value| Entry { index, value })
                        .map_err(|_| Failure {
                            code: EXIT_INTERNAL,
                            message: format!("coefficient c_{index} = {c} does not fit in 64 bits"),
                        })
                })
                .collect::<Result<Vec<_>>>()?
        }
    };
    let out = CoeffsOut {
        kind: kind
            .to_possible_value()
            .expect("named")
            .get_name()
            .to_owned(),
        upto,
        constant,
        values,
    };
    Ok(Output::ok(match format {
        Format::Json => json(&out),
        Format::Csv => index_value_csv(out.values.iter().map(|e| (e.index, e.value))),
        _ => {
            let vs: Vec<String> = out.values.iter().map(|e| e.value.to_string()).collect();
            format!("{}\n", vs.join(","))
        }
    }))
}

fn dag_cap(n: u64, lift_caps: bool) -> Result<()> {
    if n as usize > DAG_CAP {
        if !lift_caps {
            return Err(usage(format!(
                "n = {n} exceeds the DAG cap {DAG_CAP}; pass --lift-caps to run anyway"
            )));
        }
        eprintln!("warning: running the DAG past its cap {DAG_CAP}");
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SuiteArg {
    Engines,
    Claim,
    Lemmas,
    Involution,
    Rewrite,
    All,
}

impl From<SuiteArg> for Suite {
    fn from(s: SuiteArg) -> Self {
        match s {
            SuiteArg::Engines => Suite::Engines,
            SuiteArg::Claim => Suite::Claim,
            SuiteArg::Lemmas => Suite::Lemmas,
            SuiteArg::Involution => Suite::Involution,
            SuiteArg::Rewrite => Suite::Rewrite,
            SuiteArg::All => Suite::All,
        }
    }
}

#[derive(Serialize)]
struct VerifyOut<'a> {
    suite: &'a str,
    upto: usize,
    passed: bool,
    checks: &'a [verify::Check],
}

pub fn verify(
    suite: SuiteArg,
    upto: usize,
    lift_caps: bool,
    seed: Option<u64>,
    format: Format,
) -> Result<Output> {
    allow(format, &[Format::Json, Format::Plain], "verify")?;
    let suite = Suite::from(suite);
    let opts = VerifyOptions {
        upto,
        lift_caps,
        seed: seed.unwrap_or(verify::DEFAULT_SEED),
    };
    for (what, cap) in opts.exceeded_caps(suite) {
        if lift_caps {
            eprintln!("warning: {what} checks run past their cap {cap}");
        } else {
            eprintln!("note: {what} checks clamped to {cap}; pass --lift-caps to go further");
        }
    }
    let report = verify::run_suite(suite, &opts)?;
    let text = match format {
        Format::Json => json(&VerifyOut {
            suite: &report.suite,
            upto,
            passed: report.passed(),
            checks: &report.checks,
        }),
        _ => {
            let verdict = if report.passed() { "PASS" } else { "FAIL" };
            format!(
                "{report}{verdict} {} ({} checks)\n",
                report.suite,
                report.checks.len()
            )
        }
    };
    Ok(Output {
        text,
        code: if report.passed() { 0 } else { EXIT_VERIFY },
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SystemArg {
    Minpart,
    Maxpart,
    Bounded,
}

impl From<SystemArg> for Builtin {
    fn from(s: SystemArg) -> Self {
        match s {
            SystemArg::Minpart => Builtin::MinPart,
            SystemArg::Maxpart => Builtin::MaxPart,
            SystemArg::Bounded => Builtin::Bounded,
        }
    }
}

#[derive(Serialize)]
struct Extracted {
    constant: String,
    coeffs: Vec<(i64, String)>,
}

#[derive(Serialize)]
struct DagOut<'a> {
    system: &'a str,
    n_tilde: i64,
    vertices: &'a [DagVertex],
    edges: &'a [DagEdge],
    extracted: Extracted,
}

pub fn dag(
    system: SystemArg,
    n: u64,
    lift_caps: bool,
    output: Option<&Path>,
    format: Format,
) -> Result<Output> {
    allow(format, &[Format::Dot, Format::Json], "dag")?;
    dag_cap(n, lift_caps)?;
    let budget = plab_core::budget_override().unwrap_or_else(|| default_vertex_budget(n));
    let d = build_dag(&builtin_system(system.into()), n, budget)?;
    let text = match format {
        Format::Dot => emit_dot(&d),
        _ => {
            let r = d.extract();
            json(&DagOut {
                system: d.system(),
                n_tilde: d.n_tilde(),
                vertices: d.vertices(),
                edges: d.edges(),
                extracted: Extracted {
                    constant: r.constant.to_string(),
                    coeffs: r.coeffs.iter().map(|(&j, c)| (j, c.to_string())).collect(),
                },
            })
        }
    };
    match output {
        Some(path) => {
            std::fs::write(path, text).map_err(|e| Failure {
                code: EXIT_INTERNAL,
                message: format!("writing {}: {e}", path.display()),
            })?;
            Ok(Output::ok(String::new()))
        }
        None => Ok(Output::ok(text)),
    }
}

#[derive(Serialize)]
struct MethodTiming {
    method: EngineKind,
    wall_ms: f64,
    value_digits: usize,
    /// Recurrent terms over `p(0..=upto)`.
    total_terms: u64,
    /// Recurrent terms of the last step alone.
    terms_at_upto: u64,
}

#[derive(Serialize)]
struct TrendPoint {
    n: usize,
    euler_cumulative: u64,
    integral_cumulative: u64,
    ratio: f64,
}

#[derive(Serialize)]
struct Comparison {
    lo: usize,
    hi: usize,
    euler_below_integral: bool,
    violations: usize,
    trend: Vec<TrendPoint>,
}

#[derive(Serialize)]
struct BenchOut {
    upto: usize,
    methods: Vec<MethodTiming>,
    /// Per-step counters, euler against integral; absent below 20.
    comparison: Option<Comparison>,
}

pub fn bench(upto: usize, methods: Option<Vec<String>>, format: Format) -> Result<Output> {
    allow(format, &[Format::Json, Format::Plain], "bench")?;
    if upto < 1 {
        return Err(usage("--upto must be at least 1"));
    }
    let kinds: Vec<EngineKind> = match methods {
        None => EngineKind::ALL.to_vec(),
        Some(names) => names
            .iter()
            .map(|m| m.trim().parse())
            .collect::<std::result::Result<_, _>>()?,
    };
    let mut timings = Vec::new();
    for kind in kinds {
        let mut engine = kind.engine();
        let start = Instant::now();
        let v = engine.count(upto)?;
        let wall_ms = start.elapsed().as_secs_f64() * 1e3;
        let stats = engine.stats();
        timings.push(MethodTiming {
            method: kind,
            wall_ms,
            value_digits: v.to_string().len(),
            total_terms: stats.total(),
            terms_at_upto: stats.per_step[upto],
        });
    }
    let comparison = if upto >= 20 {
        let mut euler = EulerEngine::default();
        let mut integral = IntegralEngine::default();
        euler.count(upto)?;
        integral.count(upto)?;
        let (es, is) = (euler.stats(), integral.stats());
        let violations = (20..=upto)
            .filter(|&n| es.per_step[n] >= is.per_step[n])
            .count();
        let mut marks: Vec<usize> = [20, 50, 100, 200, 500, 1000, 2000, 5000, 10_000]
            .into_iter()
            .filter(|&m| m < upto)
            .collect();
        marks.push(upto);
        let trend = marks
            .into_iter()
            .map(|n| {
                let (a, b) = (es.cumulative(n), is.cumulative(n));
                TrendPoint {
                    n,
                    euler_cumulative: a,
                    integral_cumulative: b,
                    ratio: a as f64 / b as f64,
                }
            })
            .collect();
        Some(Comparison {
            lo: 20,
            hi: upto,
            euler_below_integral: violations == 0,
            violations,
            trend,
        })
    } else {
        None
    };
    let out = BenchOut {
        upto,
        methods: timings,
        comparison,
    };
    let text = match format {
        Format::Json => json(&out),
        _ => {
            let mut s = format!(
                "{:<10} {:>12} {:>14} {:>10}\n",
                "method", "wall_ms", "total_terms", "at_upto"
            );
            for t in &out.methods {
                s.push_str(&format!(
                    "{:<10} {:>12.3} {:>14} {:>10}\n",
                    t.method.name(),
                    t.wall_ms,
                    t.total_terms,
                    t.terms_at_upto
                ));
            }
            if let Some(c) = &out.comparison {
                s.push_str(&format!(
                    "euler < integral per step on [{}, {}]: {} ({} violations)\n",
                    c.lo, c.hi, c.euler_below_integral, c.violations
                ));
                for p in &c.trend {
                    s.push_str(&format!("  n={:<6} ratio {:.4}\n", p.n, p.ratio));
                }
            }
            s
        }
    };
    let failed = out
        .comparison
        .as_ref()
        .is_some_and(|c| !c.euler_below_integral);
    Ok(Output {
        text,
        code: if failed { EXIT_VERIFY } else { 0 },
    })
}

#[derive(Serialize)]
struct OrbitRow {
    code: PathCode,
    valuation: u64,
    polarity: i64,
    image: PathCode,
    image_valuation: u64,
    image_polarity: i64,
    rule: Option<codes::InvolutionRule>,
    k: Option<u64>,
    fixed: bool,
}

#[derive(Serialize)]
struct InvolutionOut {
    j: u64,
    rows: Vec<OrbitRow>,
    sum_bj: i64,
    sum_bj_prev: i64,
    e_j: i64,
}

pub fn involution(j: u64, format: Format) -> Result<Output> {
    allow(format, TABLES, "involution")?;
    if j < 2 {
        return Err(usage("--j must be at least 2"));
    }
    let (bj, prev) = (enumerate_bj(j), enumerate_bj(j - 1));
    let mut rows = Vec::new();
    for b in bj.iter().chain(&prev) {
        let step = codes::involution(j, b)?;
        rows.push(OrbitRow {
            valuation: valuation(b),
            polarity: polarity(b)?,
            image_valuation: valuation(&step.output),
            image_polarity: polarity(&step.output)?,
            fixed: step.is_fixed(),
            rule: step.rule,
            k: step.k,
            code: step.input,
            image: step.output,
        });
    }
    let sum = |v: &[PathCode]| -> i64 { v.iter().map(|b| polarity(b).expect("leading 1")).sum() };
    let out = InvolutionOut {
        j,
        sum_bj: sum(&bj),
        sum_bj_prev: sum(&prev),
        e_j: euler_e(j),
        rows,
    };
    Ok(Output::ok(match format {
        Format::Json => json(&out),
        Format::Csv => {
            let rows: Vec<Vec<String>> = out
                .rows
                .iter()
                .enumerate()
                .map(|(i, r)| {
                    vec![
                        i.to_string(),
                        r.code.to_string(),
                        r.valuation.to_string(),
                        r.polarity.to_string(),
                        r.image.to_string(),
                        r.image_valuation.to_string(),
                        r.image_polarity.to_string(),
                        r.rule.map(|x| format!("{x:?}")).unwrap_or_default(),
                        opt(&r.k),
                        r.fixed.to_string(),
                    ]
                })
                .collect();
            csv(
                &[
                    "index",
                    "code",
                    "valuation",
                    "polarity",
                    "image",
                    "image_valuation",
                    "image_polarity",
                    "rule",
                    "k",
                    "fixed",
                ],
                &rows,
            )
        }
        _ => {
            let mut s = String::new();
            for r in &out.rows {
                let how = match (r.rule, r.k) {
                    (None, _) => "fixed".to_owned(),
                    (Some(rule), None) => format!("{rule:?}"),
                    (Some(rule), Some(k)) => format!("{rule:?} k={k}"),
                };
                s.push_str(&format!(
                    "{} ({:+}) -> {} ({:+})  {how}\n",
                    r.code, r.polarity, r.image, r.image_polarity
                ));
            }
            s.push_str(&format!(
                "sum B_j {} - sum B_j-1 {} = e_j {}\n",
                out.sum_bj, out.sum_bj_prev, out.e_j
            ));
            s
        }
    }))
}

#[derive(Serialize)]
struct Decoded {
    walk: Vec<(i64, i64)>,
    classification: PathClassification,
    predicates: TerminationPredicates,
}

#[derive(Serialize)]
struct CodeInfo {
    code: PathCode,
    length: usize,
    valuation: u64,
    polarity: Option<i64>,
    edge_count: Option<u64>,
    partition: Option<Vec<u64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    decoded: Option<Decoded>,
}

pub fn codes_info(words: &[String], n: Option<u64>, format: Format) -> Result<Output> {
    allow(format, TABLES, "codes info")?;
    let mut infos = Vec::new();
    for w in words {
        let b: PathCode = w.parse()?;
        let has_one = b.k0().is_some();
        let decoded = match n {
            Some(n) if has_one => {
                let d = decode_path(n, &b)?;
                Some(Decoded {
                    walk: d.walk,
                    classification: d.classification,
                    predicates: termination_predicates(n, &b)?,
                })
            }
            _ => None,
        };
        infos.push(CodeInfo {
            length: b.len(),
            valuation: valuation(&b),
            polarity: polarity(&b).ok(),
            edge_count: edge_count(&b).ok(),
            partition: to_strict_partition(&b).ok().map(|p| p.parts().to_vec()),
            decoded,
            code: b,
        });
    }
    Ok(Output::ok(match format {
        Format::Json => json(&infos),
        Format::Csv => {
            let rows: Vec<Vec<String>> = infos
                .iter()
                .enumerate()
                .map(|(i, c)| {
                    vec![
                        i.to_string(),
                        c.code.to_string(),
                        c.valuation.to_string(),
                        opt(&c.polarity),
                        opt(&c.edge_count),
                        c.decoded
                            .as_ref()
                            .map(|d| format!("{:?}", d.classification))
                            .unwrap_or_default(),
                    ]
                })
                .collect();
            csv(
                &[
                    "index",
                    "code",
                    "valuation",
                    "polarity",
                    "edge_count",
                    "classification",
                ],
                &rows,
            )
        }
        _ => infos
            .iter()
            .map(|c| {
                let mut line = format!(
                    "{} nu={} pi={} t={}",
                    c.code,
                    c.valuation,
                    opt(&c.polarity),
                    opt(&c.edge_count)
                );
                if let Some(d) = &c.decoded {
                    line.push_str(&format!(" {:?}", d.classification));
                }
                line + "\n"
            })
            .collect(),
    }))
}

#[derive(Serialize)]
struct BjRow {
    index: usize,
    code: PathCode,
    partition: Vec<u64>,
    polarity: i64,
}

pub fn codes_bj(j: u64, format: Format) -> Result<Output> {
    allow(format, TABLES, "codes bj")?;
    if j < 2 {
        return Err(usage("j must be at least 2"));
    }
    let rows: Vec<BjRow> = enumerate_bj(j)
        .into_iter()
        .enumerate()
        .map(|(index, code)| BjRow {
            index,
            partition: to_strict_partition(&code)
                .expect("leading 1")
                .parts()
                .to_vec(),
            polarity: polarity(&code).expect("leading 1"),
            code,
        })
        .collect();
    Ok(Output::ok(match format {
        Format::Json => json(&rows),
        Format::Csv => index_value_csv(rows.iter().map(|r| (r.index as i64, &r.code))),
        _ => rows
            .iter()
            .map(|r| format!("{} {:+}\n", r.code, r.polarity))
            .collect(),
    }))
}

#[derive(Serialize)]
struct PentagonalRow {
    index: usize,
    code: PathCode,
    valuation: u64,
}

pub fn codes_pentagonal(count: usize, format: Format) -> Result<Output> {
    allow(format, TABLES, "codes pentagonal")?;
    if count < 1 {
        return Err(usage("count must be at least 1"));
    }
    let rows: Vec<PentagonalRow> = pentagonal_codes(count)
        .into_iter()
        .enumerate()
        .map(|(index, code)| PentagonalRow {
            index,
            valuation: valuation(&code),
            code,
        })
        .collect();
    Ok(Output::ok(match format {
        Format::Json => json(&rows),
        Format::Csv => render::csv(
            &["index", "code", "valuation"],
            &rows
                .iter()
                .map(|r| {
                    vec![
                        r.index.to_string(),
                        r.code.to_string(),
                        r.valuation.to_string(),
                    ]
                })
                .collect::<Vec<_>>(),
        ),
        _ => rows
            .iter()
            .map(|r| format!("{} {}\n", r.code, r.valuation))
            .collect(),
    }))
}
