//! Batch front end: JSON in, JSON report out.
//!
//! Every run prints one report `{"verb", "result", "checks", "elapsed_ms"}`
//! (or `{"verb", "error", "elapsed_ms"}`) to stdout or `--out`, and a one
//! line summary to stderr. Exit status: 0 success, 1 domain error, 2
//! malformed input.

use std::ffi::OsString;
use std::fmt::Debug;
use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde::de::DeserializeOwned;
use serde::Serialize;
use serde_json::{json, Value};

use crate::cech::{
    self, classical_cech, compare_hyper, failures0, failures1, CocycleJson, OneCocycle, ZeroCocycle, DEFAULT_BUDGET,
};
use crate::crossed::CrossedModule;
use crate::descent::{bridge_verify, extract_class, validate_descent, DescentJson, WkbDescentDatum};
use crate::group::FiniteGroup;
use crate::nerve::Nerve;
use crate::series::TauSeries;
use crate::wkb::{HalfFormOperator, WkbSymbol};

#[derive(Debug, Parser)]
#[command(name = "wkb-cech", version, about = "WKB operator calculus and crossed-module Čech cohomology")]
struct Cli {
    #[command(subcommand)]
    verb: Verb,
    #[command(flatten)]
    opts: Opts,
}

#[derive(Debug, Args)]
struct Opts {
    /// Truncation depth for operator verbs and descent checks.
    #[arg(long, global = true)]
    depth: Option<usize>,
    /// Candidate-count ceiling for enumerations (accepts `1e7`).
    #[arg(long, global = true, value_parser = parse_budget)]
    budget: Option<u64>,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Crossed module fixture `<kind>:<group>`, kind one of g0, g1, central, collapse.
    #[arg(long, global = true)]
    fixture: Option<String>,
    /// Group fixture, e.g. Z4, S3, Q8, V4, Z2xZ2.
    #[arg(long, global = true)]
    group: Option<String>,
    /// Nerve fixture: point, interval, circle, sphere, ball.
    #[arg(long, global = true)]
    nerve: Option<String>,
    /// Order `m` for `symbol`; the principal symbol when absent.
    #[arg(long, global = true, allow_hyphen_values = true)]
    order: Option<i64>,
    /// Degree for `cech`.
    #[arg(long, global = true)]
    degree: Option<usize>,
}

#[derive(Debug, Subcommand)]
enum Verb {
    /// Star product of two symbols.
    Star { p: PathBuf, q: PathBuf },
    /// Formal adjoint of a half-form operator.
    Adjoint { h: PathBuf },
    /// Inverse of a symbol.
    Invert { p: PathBuf },
    /// Symbol of a given order (or the principal symbol).
    Symbol { p: PathBuf },
    /// Membership of a τ-series in k*.
    Kstar { s: PathBuf },
    /// Membership of a half-form operator in W^{√v,*}.
    Wstar { h: PathBuf },
    /// Crossed module axioms.
    CmValidate { inputs: Vec<PathBuf> },
    /// 0-cocycle relations: [cm] [nerve] cocycle.
    Check0 { inputs: Vec<PathBuf> },
    /// 1-cocycle relations: [cm] [nerve] cocycle.
    Check1 { inputs: Vec<PathBuf> },
    /// H^0 classes: [cm] [nerve].
    H0 { inputs: Vec<PathBuf> },
    /// H^1 classes: [cm] [nerve].
    H1 { inputs: Vec<PathBuf> },
    /// Classical cohomology: [group] [nerve] --degree d.
    Cech { inputs: Vec<PathBuf> },
    /// G[0] / G[1] against classical cohomology: [group] [nerve].
    CompareHyper { inputs: Vec<PathBuf> },
    /// Descent relations of a datum.
    DescentValidate { datum: PathBuf },
    /// Characteristic class of a datum.
    ExtractClass { datum: PathBuf },
    /// Central crossed module against classical H^2 of the center: [group] [nerve].
    Bridge { inputs: Vec<PathBuf> },
}

impl Verb {
    fn name(&self) -> &'static str {
        match self {
            Verb::Star { .. } => "star",
            Verb::Adjoint { .. } => "adjoint",
            Verb::Invert { .. } => "invert",
            Verb::Symbol { .. } => "symbol",
            Verb::Kstar { .. } => "kstar",
            Verb::Wstar { .. } => "wstar",
            Verb::CmValidate { .. } => "cm-validate",
            Verb::Check0 { .. } => "check0",
            Verb::Check1 { .. } => "check1",
            Verb::H0 { .. } => "h0",
            Verb::H1 { .. } => "h1",
            Verb::Cech { .. } => "cech",
            Verb::CompareHyper { .. } => "compare-hyper",
            Verb::DescentValidate { .. } => "descent-validate",
            Verb::ExtractClass { .. } => "extract-class",
            Verb::Bridge { .. } => "bridge",
        }
    }
}

fn parse_budget(s: &str) -> Result<u64, String> {
    let clean = s.replace('_', "");
    if let Ok(n) = clean.parse::<u64>() {
        return Ok(n);
    }
    match clean.parse::<f64>() {
        Ok(x) if x >= 0.0 && x.fract() == 0.0 && x <= u64::MAX as f64 => Ok(x as u64),
        _ => Err(format!("budget must be a nonnegative integer, got {s:?}")),
    }
}

#[derive(Debug)]
enum Failure {
    /// Malformed input: exit 2.
    Input(String),
    /// Error raised by a module: exit 1.
    Domain { kind: String, message: String, detail: Option<Value> },
}

fn domain<E: Debug + std::fmt::Display>(e: E) -> Failure {
    Failure::Domain { kind: error_kind(&e), message: e.to_string(), detail: None }
}

/// Variant name of a module error, looking through transparent wrappers.
pub fn error_kind<E: Debug>(e: &E) -> String {
    let text = format!("{e:?}");
    let mut rest = text.as_str();
    loop {
        let end = rest.find(|c: char| !c.is_alphanumeric() && c != '_').unwrap_or(rest.len());
        let ident = &rest[..end];
        let inner = &rest[end..];
        let wraps = matches!(ident, "Wkb" | "Nerve" | "Cech" | "Series" | "Group" | "Crossed");
        if wraps && inner.starts_with('(') && inner[1..].starts_with(|c: char| c.is_uppercase()) {
            rest = &inner[1..];
        } else {
            return ident.to_string();
        }
    }
}

#[derive(Serialize)]
struct Check {
    check: String,
    ok: bool,
}

fn check(name: impl Into<String>, ok: bool) -> Check {
    Check { check: name.into(), ok }
}

struct Outcome {
    result: Value,
    checks: Vec<Check>,
    summary: String,
}

fn to_value<T: Serialize>(t: &T) -> Value {
    serde_json::to_value(t).expect("report types serialize")
}

fn read_json<T: DeserializeOwned>(path: &PathBuf) -> Result<T, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

/// Positional inputs consumed in order, with fixtures standing in for
/// leading files.
struct Inputs<'a> {
    files: std::slice::Iter<'a, PathBuf>,
    opts: &'a Opts,
}

impl<'a> Inputs<'a> {
    fn new(files: &'a [PathBuf], opts: &'a Opts) -> Self {
        Inputs { files: files.iter(), opts }
    }

    fn file(&mut self, what: &str) -> Result<&'a PathBuf, Failure> {
        self.files.next().ok_or_else(|| Failure::Input(format!("missing {what} input")))
    }

    fn crossed(&mut self) -> Result<CrossedModule, Failure> {
        match &self.opts.fixture {
            Some(name) => crossed_fixture(name),
            None => read_json(self.file("crossed module")?),
        }
    }

    fn group(&mut self) -> Result<FiniteGroup, Failure> {
        match &self.opts.group {
            Some(name) => FiniteGroup::by_name(name).map_err(|e| Failure::Input(e.to_string())),
            None => read_json(self.file("group")?),
        }
    }

    fn nerve(&mut self) -> Result<Nerve, Failure> {
        match &self.opts.nerve {
            Some(name) => Nerve::by_name(name).map_err(|e| Failure::Input(e.to_string())),
            None => read_json(self.file("nerve")?),
        }
    }

    fn finish(mut self) -> Result<(), Failure> {
        match self.files.next() {
            Some(extra) => Err(Failure::Input(format!("unexpected input {}", extra.display()))),
            None => Ok(()),
        }
    }
}

fn crossed_fixture(name: &str) -> Result<CrossedModule, Failure> {
    let (kind, group) = name
        .split_once(':')
        .ok_or_else(|| Failure::Input(format!("fixture {name:?} is not <kind>:<group>")))?;
    let g = FiniteGroup::by_name(group).map_err(|e| Failure::Input(e.to_string()))?;
    match kind {
        "g0" => Ok(CrossedModule::make_g0(&g)),
        "g1" => CrossedModule::make_g1(&g).map_err(domain),
        "central" => Ok(CrossedModule::make_central(&g)),
        "collapse" => Ok(CrossedModule::collapse(&g)),
        _ => Err(Failure::Input(format!("unknown fixture kind {kind:?}"))),
    }
}

fn depth_of(opts: &Opts, default: usize) -> Result<usize, Failure> {
    match opts.depth {
        Some(0) => Err(Failure::Input("depth must be positive".into())),
        Some(d) => Ok(d),
        None => Ok(default),
    }
}

fn cech_error(e: cech::CechError) -> Failure {
    let detail = match &e {
        cech::CechError::BudgetExceeded { examined, partial } => {
            Some(json!({ "partial": true, "examined": examined, "representatives": partial }))
        }
        _ => None,
    };
    Failure::Domain { kind: error_kind(&e), message: e.to_string(), detail }
}

fn dispatch(verb: &Verb, opts: &Opts) -> Result<Outcome, Failure> {
    let budget = opts.budget.unwrap_or(DEFAULT_BUDGET);
    match verb {
        Verb::Star { p, q } => {
            let (p, q): (WkbSymbol, WkbSymbol) = (read_json(p)?, read_json(q)?);
            let mut r = p.star(&q).map_err(domain)?;
            if let Some(d) = opts.depth {
                r = r.with_depth(d.max(1));
            }
            let summary = format!("order {}, depth {}", r.top(), r.depth());
            Ok(Outcome { result: to_value(&r), checks: vec![check("same chart", true)], summary })
        }
        Verb::Adjoint { h } => {
            let h: HalfFormOperator = read_json(h)?;
            let a = h.adjoint();
            let involutive = a.adjoint().eq_section(&h);
            Ok(Outcome {
                result: to_value(&a),
                checks: vec![check("adjoint is an involution", involutive)],
                summary: "adjoint computed".into(),
            })
        }
        Verb::Invert { p } => {
            let p: WkbSymbol = read_json(p)?;
            let inv = p.invert().map_err(domain)?;
            let two_sided = p.star(&inv).map_err(domain)?.is_one_on_window()
                && inv.star(&p).map_err(domain)?.is_one_on_window();
            Ok(Outcome {
                result: to_value(&inv),
                checks: vec![check("P Q = Q P = 1", two_sided)],
                summary: format!("inverse of order {}", inv.top()),
            })
        }
        Verb::Symbol { p } => {
            let p: WkbSymbol = read_json(p)?;
            let (m, c) = match opts.order {
                Some(m) => (m, p.symbol_of_order(m).map_err(domain)?),
                None => p.principal_symbol().map_err(domain)?,
            };
            Ok(Outcome {
                result: json!({ "order": m, "symbol": c.to_json() }),
                checks: Vec::new(),
                summary: format!("σ_{m} = {c}"),
            })
        }
        Verb::Kstar { s } => {
            let mut s: TauSeries = read_json(s)?;
            if let Some(d) = opts.depth {
                s = s.with_depth(d.max(1));
            }
            let ok = s.kstar_check();
            Ok(Outcome { result: json!(ok), checks: vec![check("s(τ) s(-τ) = 1", ok)], summary: format!("in k*: {ok}") })
        }
        Verb::Wstar { h } => {
            let h: HalfFormOperator = read_json(h)?;
            let ok = h.wstar_check();
            Ok(Outcome { result: json!(ok), checks: vec![check("P P* = 1", ok)], summary: format!("in W*: {ok}") })
        }
        Verb::CmValidate { inputs } => {
            let mut inp = Inputs::new(inputs, opts);
            let cm = inp.crossed()?;
            inp.finish()?;
            let violations = cm.validate();
            let valid = violations.is_empty();
            Ok(Outcome {
                result: json!({ "valid": valid, "violations": violations }),
                checks: vec![check("crossed module axioms", valid)],
                summary: format!("{} violations", violations.len()),
            })
        }
        Verb::Check0 { inputs } | Verb::Check1 { inputs } => {
            let mut inp = Inputs::new(inputs, opts);
            let (cm, nerve) = (inp.crossed()?, inp.nerve()?);
            let j: CocycleJson = read_json(inp.file("cocycle")?)?;
            inp.finish()?;
            let failures = if matches!(verb, Verb::Check0 { .. }) {
                let c = ZeroCocycle::from_json(&nerve, &j).map_err(|e| Failure::Input(e.to_string()))?;
                failures0(&cm, &nerve, &c).map_err(cech_error)?
            } else {
                let c = OneCocycle::from_json(&nerve, &j).map_err(|e| Failure::Input(e.to_string()))?;
                failures1(&cm, &nerve, &c).map_err(cech_error)?
            };
            let valid = failures.is_empty();
            Ok(Outcome {
                result: json!({ "valid": valid, "failures": failures }),
                checks: vec![check("cocycle relations", valid)],
                summary: format!("cocycle: {valid}"),
            })
        }
        Verb::H0 { inputs } => {
            let mut inp = Inputs::new(inputs, opts);
            let (cm, nerve) = (inp.crossed()?, inp.nerve()?);
            inp.finish()?;
            let classes = cech::h0(&cm, &nerve, budget).map_err(cech_error)?;
            let reps: Vec<_> = classes.reps.iter().map(|c| c.to_json(&nerve)).collect();
            Ok(classes_outcome(reps, classes.cocycle_count(), classes.examined, classes.group()))
        }
        Verb::H1 { inputs } => {
            let mut inp = Inputs::new(inputs, opts);
            let (cm, nerve) = (inp.crossed()?, inp.nerve()?);
            inp.finish()?;
            let classes = cech::h1(&cm, &nerve, budget).map_err(cech_error)?;
            let reps: Vec<_> = classes.reps.iter().map(|c| c.to_json(&nerve)).collect();
            Ok(classes_outcome(reps, classes.cocycle_count(), classes.examined, classes.group()))
        }
        Verb::Cech { inputs } => {
            let mut inp = Inputs::new(inputs, opts);
            let (g, nerve) = (inp.group()?, inp.nerve()?);
            inp.finish()?;
            let degree = opts.degree.ok_or_else(|| Failure::Input("cech needs --degree".into()))?;
            let h = classical_cech(&g, &nerve, degree).map_err(cech_error)?;
            let summary = format!("H^{degree} has order {} with invariants {:?}", h.order, h.invariants);
            Ok(Outcome { result: to_value(&h), checks: Vec::new(), summary })
        }
        Verb::CompareHyper { inputs } => {
            let mut inp = Inputs::new(inputs, opts);
            let (g, nerve) = (inp.group()?, inp.nerve()?);
            inp.finish()?;
            let report = compare_hyper(&g, &nerve, budget).map_err(cech_error)?;
            let checks = report
                .entries
                .iter()
                .map(|e| check(e.label.clone(), e.crossed_classes == e.classical_classes))
                .collect();
            let summary = report
                .entries
                .iter()
                .map(|e| format!("{}: {} = {}", e.label, e.crossed_classes, e.classical_classes))
                .collect::<Vec<_>>()
                .join("; ");
            Ok(Outcome { result: to_value(&report), checks, summary })
        }
        Verb::DescentValidate { datum } => {
            let d = read_datum(datum)?;
            let depth = depth_of(opts, d.depth())?;
            let report = validate_descent(&d, depth).map_err(domain)?;
            let checks = report
                .checks
                .iter()
                .map(|c| {
                    let on = c.generator.as_deref().map(|g| format!(" on {g}")).unwrap_or_default();
                    check(format!("{:?} {}{on}", c.simplex, c.relation), c.ok)
                })
                .collect();
            let summary = format!("valid: {} ({} failed checks)", report.valid, report.failures().count());
            Ok(Outcome { result: to_value(&report), checks, summary })
        }
        Verb::ExtractClass { datum } => {
            let d = read_datum(datum)?;
            let depth = depth_of(opts, d.depth())?;
            let c = extract_class(&d, depth).map_err(domain)?;
            let keyed: serde_json::Map<String, Value> = d
                .nerve()
                .simplices(2)
                .iter()
                .zip(&c)
                .map(|(s, v)| (s.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(","), to_value(v)))
                .collect();
            Ok(Outcome {
                result: Value::Object(keyed),
                checks: vec![check("central, in k*, 2-cocycle", true)],
                summary: format!("class on {} triangles", c.len()),
            })
        }
        Verb::Bridge { inputs } => {
            let mut inp = Inputs::new(inputs, opts);
            let (g, nerve) = (inp.group()?, inp.nerve()?);
            inp.finish()?;
            let report = bridge_verify(&g, &nerve, budget).map_err(|e| match e {
                crate::descent::BridgeError::Cech(c) => cech_error(c),
                other => domain(other),
            })?;
            let summary = format!(
                "classes {} = {}, bijection verified: {}",
                report.crossed_classes, report.classical_classes, report.verified
            );
            Ok(Outcome {
                result: to_value(&report),
                checks: vec![
                    check("class counts agree", report.crossed_classes == report.classical_classes),
                    check("bijection", report.verified),
                ],
                summary,
            })
        }
    }
}

fn read_datum(path: &PathBuf) -> Result<WkbDescentDatum, Failure> {
    let j: DescentJson = read_json(path)?;
    WkbDescentDatum::try_from(j).map_err(domain)
}

fn classes_outcome(reps: Vec<CocycleJson>, cocycles: usize, examined: u64, group: Option<FiniteGroup>) -> Outcome {
    let invariants = group.as_ref().and_then(|g| g.abelian_invariants().ok());
    let summary = format!("{} classes from {} cocycles", reps.len(), cocycles);
    Outcome {
        result: json!({
            "classes": reps.len(),
            "representatives": reps,
            "cocycles": cocycles,
            "invariants": invariants,
            "examined": examined,
        }),
        checks: Vec::new(),
        summary,
    }
}

/// Parses `args` (program name first), runs the verb and writes the
/// report. Returns the exit status.
pub fn run_with<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = if code == 0 { write!(stdout, "{e}") } else { write!(stderr, "{e}") };
            return code;
        }
    };
    let start = Instant::now();
    let outcome = dispatch(&cli.verb, &cli.opts);
    let elapsed_ms = start.elapsed().as_millis() as u64;
    let verb = cli.verb.name();
    let (report, code, summary) = match outcome {
        Ok(o) => (json!({ "verb": verb, "result": o.result, "checks": o.checks, "elapsed_ms": elapsed_ms }), 0, o.summary),
        Err(Failure::Input(message)) => (
            json!({ "verb": verb, "error": { "kind": "ParseError", "message": message }, "elapsed_ms": elapsed_ms }),
            2,
            format!("malformed input: {message}"),
        ),
        Err(Failure::Domain { kind, message, detail }) => {
            let mut error = json!({ "kind": kind, "message": message });
            if let Some(d) = detail {
                error["detail"] = d;
            }
            (json!({ "verb": verb, "error": error, "elapsed_ms": elapsed_ms }), 1, format!("{kind}: {message}"))
        }
    };
    let text = serde_json::to_string_pretty(&report).expect("json") + "\n";
    match &cli.opts.out {
        Some(path) => {
            if let Err(e) = fs::write(path, &text) {
                let _ = writeln!(stderr, "cannot write {}: {e}", path.display());
                return 2;
            }
        }
        None => {
            let _ = stdout.write_all(text.as_bytes());
        }
    }
    let _ = writeln!(stderr, "{verb}: {summary}");
    code
}

pub fn run() -> i32 {
    run_with(std::env::args_os(), &mut std::io::stdout(), &mut std::io::stderr())
}
