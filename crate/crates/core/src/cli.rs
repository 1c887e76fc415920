//! Command-line front end for `tcl`.
//!
//! Every command builds a [`Report`]; JSON is the canonical rendering, CSV
//! and text are projections of it. Reports carry no timestamps, so identical
//! inputs give byte-identical JSON. Each run is also appended to a JSON-lines
//! history file as a [`RunRecord`], which adds the timestamp and duration.
//!
//! Settings resolve as flags, then `TCL_*` environment variables, then the
//! config file (`tcl.toml` or `--config`), then built-in defaults.
//!
//! Exit codes: 0 verified or evaluated, 1 mathematical failure, 2 usage or
//! validation error, 3 resource budget exceeded.

use std::fs::{self, OpenOptions};
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use serde_json::{json, Map, Value};
use thiserror::Error;

use crate::tensorrep::{self, DecompositionSpec, TensorError, DEFAULT_DIM_BUDGET};
use crate::theoremcheck::{self, SweepError, SweepOptions, DEFAULT_TUPLE_BUDGET};
use crate::triplesums::{self, EllIndex, EllMode, Form, Params, ParamsError, Shape};

pub const SCHEMA_VERSION: u32 = 1;
pub const DEFAULT_HISTORY: &str = "runs.jsonl";
pub const DEFAULT_CONFIG: &str = "tcl.toml";

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "tcl", version, about = "Exact triple-binomial sums, their congruences mod p, and Jordan-block tensor checks")]
pub struct Cli {
    /// Output format
    #[arg(long, global = true, value_enum, env = "TCL_FORMAT")]
    format: Option<OutputFormat>,

    /// Write the report here instead of stdout
    #[arg(long, global = true, env = "TCL_OUT")]
    out: Option<PathBuf>,

    /// Run history file (JSON lines, appended)
    #[arg(long, global = true, env = "TCL_HISTORY")]
    history: Option<PathBuf>,

    /// Do not append to the run history
    #[arg(long, global = true)]
    no_history: bool,

    /// Config file (default: ./tcl.toml when present)
    #[arg(long, global = true, env = "TCL_CONFIG")]
    config: Option<PathBuf>,

    /// Worker threads for sweeps
    #[arg(long, global = true, env = "TCL_JOBS")]
    jobs: Option<usize>,

    /// Ignore tuple and dimension budgets
    #[arg(long, global = true)]
    force_budget: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Evaluate one sum at one index
    Eval {
        #[arg(value_enum)]
        which: Which,
        #[arg(long)]
        p: Option<u64>,
        #[arg(long)]
        c: i64,
        #[arg(long)]
        d: i64,
        #[arg(long)]
        k: i64,
        #[arg(long, allow_hyphen_values = true)]
        ell: i64,
        /// Evaluation route for `f`
        #[arg(long, value_enum, default_value = "rewritten")]
        form: FormArg,
        /// Allow indices outside the theorem's range
        #[arg(long)]
        exploratory: bool,
    },
    /// Run exhaustive verifications
    Verify {
        #[arg(value_enum)]
        scope: Scope,
        #[arg(long, env = "TCL_P_MAX")]
        p_max: Option<u64>,
        #[arg(long, env = "TCL_MAX_CD")]
        max_cd: Option<i64>,
    },
    /// Representation checks on V_{p+c} (x) V_{p+d}
    Rep {
        #[arg(value_enum)]
        action: RepAction,
        #[arg(long)]
        p: u64,
        #[arg(long)]
        c: i64,
        #[arg(long)]
        d: i64,
        #[arg(long)]
        k: Option<i64>,
        #[arg(long, value_enum, default_value = "both")]
        method: Method,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Json,
    Csv,
    Text,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Which {
    #[value(name = "C")]
    C,
    #[value(name = "C_alt")]
    CAlt,
    #[value(name = "D")]
    D,
    #[value(name = "D_alt")]
    DAlt,
    #[value(name = "f")]
    F,
    #[value(name = "F")]
    CompanionF,
    #[value(name = "G")]
    CompanionG,
    #[value(name = "F_closed")]
    CompanionFClosed,
    #[value(name = "G_closed")]
    CompanionGClosed,
}

impl Which {
    fn name(self) -> &'static str {
        match self {
            Which::C => "C",
            Which::CAlt => "C_alt",
            Which::D => "D",
            Which::DAlt => "D_alt",
            Which::F => "f",
            Which::CompanionF => "F",
            Which::CompanionG => "G",
            Which::CompanionFClosed => "F_closed",
            Which::CompanionGClosed => "G_closed",
        }
    }

    fn needs_prime(self) -> bool {
        matches!(self, Which::C | Which::CAlt | Which::D | Which::DAlt | Which::F)
    }
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum FormArg {
    Defining,
    Rewritten,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Scope {
    Theorem,
    Rewrites,
    Lemmas,
    All,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum RepAction {
    Decompose,
    Generator,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Method {
    Closed,
    Rank,
    Both,
}

/// Keys accepted in the config file.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub format: Option<OutputFormat>,
    pub history: Option<PathBuf>,
    pub jobs: Option<usize>,
    pub p_max: Option<u64>,
    pub max_cd: Option<i64>,
    pub tuple_budget: Option<usize>,
    pub dim_budget: Option<usize>,
}

#[derive(Debug, Error)]
enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Params(#[from] ParamsError),
    #[error("{0}")]
    Budget(String),
    #[error("i/o error: {0}")]
    Io(#[from] io::Error),
}

impl CliError {
    fn exit_code(&self) -> i32 {
        match self {
            CliError::Budget(_) => EXIT_BUDGET,
            _ => EXIT_USAGE,
        }
    }
}

impl From<SweepError> for CliError {
    fn from(e: SweepError) -> Self {
        match e {
            SweepError::Budget { .. } => CliError::Budget(e.to_string()),
            other => CliError::Usage(other.to_string()),
        }
    }
}

impl From<TensorError> for CliError {
    fn from(e: TensorError) -> Self {
        match e {
            TensorError::Budget { .. } => CliError::Budget(e.to_string()),
            other => CliError::Usage(other.to_string()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
    Evaluated,
}

/// The stable machine-readable result of one command.
#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub schema_version: u32,
    pub command: String,
    pub params: Map<String, Value>,
    pub verdict: Verdict,
    pub payload: Value,
}

/// One line of the run history.
#[derive(Debug, Clone, Serialize)]
pub struct RunRecord<'a> {
    pub schema_version: u32,
    pub command: &'a str,
    pub parameters: &'a Map<String, Value>,
    pub verdict: Verdict,
    pub payload: &'a Value,
    pub timestamp: String,
    pub duration_seconds: f64,
}

struct Settings {
    format: OutputFormat,
    history: Option<PathBuf>,
    jobs: usize,
    p_max: u64,
    max_cd: i64,
    tuple_budget: usize,
    dim_budget: usize,
}

fn load_config(explicit: Option<&Path>) -> Result<FileConfig, CliError> {
    let path = match explicit {
        Some(p) => p.to_path_buf(),
        None => {
            let default = PathBuf::from(DEFAULT_CONFIG);
            if !default.exists() {
                return Ok(FileConfig::default());
            }
            default
        }
    };
    let text = fs::read_to_string(&path)
        .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
    toml::from_str(&text).map_err(|e| CliError::Usage(format!("bad config {}: {e}", path.display())))
}

fn resolve(cli: &Cli) -> Result<Settings, CliError> {
    let file = load_config(cli.config.as_deref())?;
    let (p_max, max_cd) = match &cli.command {
        Command::Verify { p_max, max_cd, .. } => (*p_max, *max_cd),
        _ => (None, None),
    };
    let unlimited = cli.force_budget;
    Ok(Settings {
        format: cli.format.or(file.format).unwrap_or(OutputFormat::Json),
        history: if cli.no_history {
            None
        } else {
            Some(
                cli.history
                    .clone()
                    .or(file.history)
                    .unwrap_or_else(|| PathBuf::from(DEFAULT_HISTORY)),
            )
        },
        jobs: cli.jobs.or(file.jobs).unwrap_or(1).max(1),
        p_max: p_max.or(file.p_max).unwrap_or(23),
        max_cd: max_cd.or(file.max_cd).unwrap_or(12),
        tuple_budget: if unlimited {
            usize::MAX
        } else {
            file.tuple_budget.unwrap_or(DEFAULT_TUPLE_BUDGET)
        },
        dim_budget: if unlimited {
            usize::MAX
        } else {
            file.dim_budget.unwrap_or(DEFAULT_DIM_BUDGET)
        },
    })
}

/// Parse `args` (including the program name), run, and return the exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let rendered = e.render().to_string();
            let sink: &mut dyn Write = if e.use_stderr() { stderr } else { stdout };
            let _ = write!(sink, "{rendered}");
            return code;
        }
    };
    match execute(&cli, stdout) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            e.exit_code()
        }
    }
}

fn execute(cli: &Cli, stdout: &mut dyn Write) -> Result<i32, CliError> {
    let settings = resolve(cli)?;
    let start = Instant::now();
    let (report, rendered) = match &cli.command {
        Command::Eval {
            which,
            p,
            c,
            d,
            k,
            ell,
            form,
            exploratory,
        } => {
            let report = cmd_eval(*which, *p, *c, *d, *k, *ell, *form, *exploratory)?;
            let text = render(&report, settings.format, eval_text, eval_csv)?;
            (report, text)
        }
        Command::Verify { scope, .. } => {
            let report = cmd_verify(*scope, &settings)?;
            let text = render(&report, settings.format, verify_text, verify_csv)?;
            (report, text)
        }
        Command::Rep {
            action,
            p,
            c,
            d,
            k,
            method,
        } => {
            let report = match action {
                RepAction::Decompose => cmd_decompose(*p, *c, *d, *method, settings.dim_budget)?,
                RepAction::Generator => {
                    let k = k.ok_or_else(|| CliError::Usage("rep generator requires --k".into()))?;
                    cmd_generator(*p, *c, *d, k)?
                }
            };
            let text = match action {
                RepAction::Decompose => render(&report, settings.format, decompose_text, decompose_csv)?,
                RepAction::Generator => render(&report, settings.format, generator_text, generator_csv)?,
            };
            (report, text)
        }
    };
    let duration = start.elapsed().as_secs_f64();

    match &cli.out {
        Some(path) => fs::write(path, &rendered)?,
        None => stdout.write_all(rendered.as_bytes())?,
    }
    if let Some(path) = &settings.history {
        append_history(path, &report, duration)?;
    }
    Ok(match report.verdict {
        Verdict::Fail => EXIT_FAILURE,
        _ => EXIT_OK,
    })
}

fn append_history(path: &Path, report: &Report, duration: f64) -> Result<(), CliError> {
    let record = RunRecord {
        schema_version: report.schema_version,
        command: &report.command,
        parameters: &report.params,
        verdict: report.verdict,
        payload: &report.payload,
        timestamp: chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Millis, true),
        duration_seconds: duration,
    };
    let mut line = serde_json::to_string(&record).expect("run record serializes");
    line.push('\n');
    let mut file = OpenOptions::new().create(true).append(true).open(path)?;
    // one write per record
    file.write_all(line.as_bytes())?;
    Ok(())
}

type Projection = fn(&Report) -> Result<String, CliError>;

fn render(report: &Report, format: OutputFormat, text: Projection, csv: Projection) -> Result<String, CliError> {
    match format {
        OutputFormat::Json => {
            let mut s = serde_json::to_string_pretty(report).expect("report serializes");
            s.push('\n');
            Ok(s)
        }
        OutputFormat::Text => text(report),
        OutputFormat::Csv => csv(report),
    }
}

fn csv_string(header: &[&str], rows: Vec<Vec<String>>) -> Result<String, CliError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).map_err(|e| CliError::Usage(e.to_string()))?;
    for row in rows {
        w.write_record(&row).map_err(|e| CliError::Usage(e.to_string()))?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::Usage(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

fn params_map(entries: &[(&str, Value)]) -> Map<String, Value> {
    entries.iter().map(|(k, v)| (k.to_string(), v.clone())).collect()
}

fn str_field(v: &Value, key: &str) -> String {
    match &v[key] {
        Value::String(s) => s.clone(),
        Value::Null => String::new(),
        other => other.to_string(),
    }
}

// ---------------------------------------------------------------- eval

#[allow(clippy::too_many_arguments)]
fn cmd_eval(
    which: Which,
    p: Option<u64>,
    c: i64,
    d: i64,
    k: i64,
    ell: i64,
    form: FormArg,
    exploratory: bool,
) -> Result<Report, CliError> {
    let mode = if exploratory { EllMode::Exploratory } else { EllMode::Strict };
    let (value, prime): (BigInt, Option<crate::arith::Prime>) = if which.needs_prime() {
        let p = p.ok_or_else(|| CliError::Usage(format!("eval {} requires --p", which.name())))?;
        let params = Params::new(p, c, d, k)?;
        let index = if exploratory {
            EllIndex::exploratory(&params, ell)
        } else {
            EllIndex::strict(&params, ell)?
        };
        let v = match which {
            Which::C => triplesums::c_def(&params, index),
            Which::CAlt => triplesums::c_alt(&params, index),
            Which::D => triplesums::d_def(&params, index),
            Which::DAlt => triplesums::d_alt(&params, index),
            Which::F => {
                let form = match form {
                    FormArg::Defining => Form::Defining,
                    FormArg::Rewritten => Form::Rewritten,
                };
                triplesums::f_eval(&params, index, form)
            }
            _ => unreachable!("companion sums do not need p"),
        };
        (v, Some(params.p()))
    } else {
        let shape = Shape::new(c, d, k)?;
        if !exploratory {
            shape.check_ell(ell)?;
        }
        let v = match which {
            Which::CompanionF => shape.companion_f(ell),
            Which::CompanionG => shape.companion_g(ell),
            Which::CompanionFClosed => shape.companion_f_closed(ell),
            Which::CompanionGClosed => shape.companion_g_closed(ell),
            _ => unreachable!("sums over p handled above"),
        };
        let prime = match p {
            Some(p) => Some(crate::arith::Prime::new(p).map_err(ParamsError::from)?),
            None => None,
        };
        (v, prime)
    };

    let residue = prime.map(|q| q.reduce(&value));
    let mut params = vec![("c", json!(c)), ("d", json!(d)), ("k", json!(k)), ("ell", json!(ell))];
    if let Some(p) = p {
        params.insert(0, ("p", json!(p)));
    }
    let mut payload = json!({
        "which": which.name(),
        "mode": mode,
        "value": value.to_string(),
        "residue": residue.map(|r| r.value()),
    });
    if which == Which::F {
        payload["form"] = json!(match form {
            FormArg::Defining => "defining",
            FormArg::Rewritten => "rewritten",
        });
    }
    Ok(Report {
        schema_version: SCHEMA_VERSION,
        command: format!("eval {}", which.name()),
        params: params_map(&params),
        verdict: Verdict::Evaluated,
        payload,
    })
}

fn eval_text(r: &Report) -> Result<String, CliError> {
    let value = str_field(&r.payload, "value");
    Ok(match (&r.payload["residue"], r.params.get("p")) {
        (Value::Number(res), Some(p)) => format!("{value} (mod {p}: {res})\n"),
        _ => format!("{value}\n"),
    })
}

fn eval_csv(r: &Report) -> Result<String, CliError> {
    let get = |k: &str| r.params.get(k).map(|v| v.to_string()).unwrap_or_default();
    csv_string(
        &["which", "p", "c", "d", "k", "ell", "mode", "value", "residue"],
        vec![vec![
            str_field(&r.payload, "which"),
            get("p"),
            get("c"),
            get("d"),
            get("k"),
            get("ell"),
            str_field(&r.payload, "mode"),
            str_field(&r.payload, "value"),
            str_field(&r.payload, "residue"),
        ]],
    )
}

// ---------------------------------------------------------------- verify

fn cmd_verify(scope: Scope, s: &Settings) -> Result<Report, CliError> {
    let opts = SweepOptions {
        jobs: s.jobs,
        tuple_budget: s.tuple_budget,
        progress: None,
    };
    let mut params = vec![("p_max", json!(s.p_max))];
    let mut sections = Map::new();
    let mut passed = true;
    if matches!(scope, Scope::Theorem | Scope::All) {
        let summary = theoremcheck::sweep(s.p_max, &opts)?;
        passed &= summary.passed();
        sections.insert("theorem".into(), serde_json::to_value(&summary).expect("serializes"));
    }
    if matches!(scope, Scope::Rewrites | Scope::All) {
        let summary = theoremcheck::verify_rewrites(s.p_max, &opts)?;
        passed &= summary.passed();
        sections.insert("rewrites".into(), serde_json::to_value(&summary).expect("serializes"));
    }
    if matches!(scope, Scope::Lemmas | Scope::All) {
        params.push(("max_cd", json!(s.max_cd)));
        let summary = theoremcheck::verify_lemmas(s.max_cd, s.p_max, &opts)?;
        passed &= summary.passed();
        sections.insert("lemmas".into(), serde_json::to_value(&summary).expect("serializes"));
    }
    let scope_name = match scope {
        Scope::Theorem => "theorem",
        Scope::Rewrites => "rewrites",
        Scope::Lemmas => "lemmas",
        Scope::All => "all",
    };
    Ok(Report {
        schema_version: SCHEMA_VERSION,
        command: format!("verify {scope_name}"),
        params: params_map(&params),
        verdict: if passed { Verdict::Pass } else { Verdict::Fail },
        payload: Value::Object(sections),
    })
}

/// `(section, cases, failures, counterexamples)` rows of a verify payload.
fn verify_rows(r: &Report) -> Vec<(String, u64, usize, Vec<String>)> {
    let mut rows = Vec::new();
    if let Some(t) = r.payload.get("theorem") {
        let failures: Vec<String> = t["failures"]
            .as_array()
            .into_iter()
            .flatten()
            .map(|f| {
                format!(
                    "{} f(1)={} first_failure_ell={}",
                    f["params"], f["f1"], f["first_failure_ell"]
                )
            })
            .collect();
        rows.push(("theorem".into(), t["tuples_checked"].as_u64().unwrap_or(0), failures.len(), failures));
    }
    if let Some(t) = r.payload.get("rewrites") {
        let failures: Vec<String> = t["mismatches"]
            .as_array()
            .into_iter()
            .flatten()
            .map(|m| format!("{} {} ell={}: {} != {}", m["sum"], m["params"], m["ell"], m["defining"], m["rewritten"]))
            .collect();
        rows.push(("rewrites".into(), t["comparisons"].as_u64().unwrap_or(0), failures.len(), failures));
    }
    if let Some(t) = r.payload.get("lemmas") {
        let all_failures: Vec<&Value> = t["failures"].as_array().into_iter().flatten().collect();
        for tally in t["tallies"].as_array().into_iter().flatten() {
            let name = tally["identity"].as_str().unwrap_or_default();
            let failures: Vec<String> = all_failures
                .iter()
                .filter(|f| f["identity"] == name)
                .map(|f| format!("{name} args={}", f["args"]))
                .collect();
            rows.push((
                format!("lemmas/{name}"),
                tally["cases"].as_u64().unwrap_or(0),
                failures.len(),
                failures,
            ));
        }
    }
    rows
}

fn verify_text(r: &Report) -> Result<String, CliError> {
    let mut out = format!("{}  [{}]\n", r.command, if r.verdict == Verdict::Pass { "PASS" } else { "FAIL" });
    for (section, cases, failures, examples) in verify_rows(r) {
        out.push_str(&format!("  {section:<28} {cases:>8} cases  {failures:>4} failures\n"));
        for e in examples {
            out.push_str(&format!("    counterexample: {e}\n"));
        }
    }
    if let Some(n) = r.payload.pointer("/lemmas/negative_tail_nonpositive_nonzero") {
        out.push_str(&format!("  note: negative-index tail is nonzero at {n} points with l in [1-k,-1]\n"));
    }
    Ok(out)
}

fn verify_csv(r: &Report) -> Result<String, CliError> {
    let rows = verify_rows(r)
        .into_iter()
        .map(|(section, cases, failures, examples)| {
            vec![
                section,
                cases.to_string(),
                failures.to_string(),
                examples.first().cloned().unwrap_or_default(),
            ]
        })
        .collect();
    csv_string(&["section", "cases", "failures", "first_counterexample"], rows)
}

// ---------------------------------------------------------------- rep

fn cmd_decompose(p: u64, c: i64, d: i64, method: Method, dim_budget: usize) -> Result<Report, CliError> {
    let closed = match method {
        Method::Closed | Method::Both => Some(tensorrep::decompose_closed(p, c, d)?),
        Method::Rank => None,
    };
    let rank = match method {
        Method::Rank | Method::Both => Some(tensorrep::decompose_rank(p, c, d, dim_budget)?),
        Method::Closed => None,
    };
    let expected_total = ((p as i64 + c) * (p as i64 + d)) as usize;
    let matches = match (&closed, &rank) {
        (Some(a), Some(b)) => Some(a == b),
        _ => None,
    };
    let total = closed.as_ref().or(rank.as_ref()).map(DecompositionSpec::total_dim);
    let verdict = match matches {
        Some(true) if total == Some(expected_total) => Verdict::Pass,
        Some(_) => Verdict::Fail,
        None => Verdict::Evaluated,
    };
    let method_name = match method {
        Method::Closed => "closed",
        Method::Rank => "rank",
        Method::Both => "both",
    };
    let payload = json!({
        "method": method_name,
        "closed": closed,
        "rank": rank,
        "match": matches,
        "total_dim": total,
        "expected_total_dim": expected_total,
    });
    Ok(Report {
        schema_version: SCHEMA_VERSION,
        command: "rep decompose".into(),
        params: params_map(&[("p", json!(p)), ("c", json!(c)), ("d", json!(d))]),
        verdict,
        payload,
    })
}

fn dims_of(v: &Value) -> Vec<u64> {
    let mut dims = Vec::new();
    for s in v.as_array().into_iter().flatten() {
        let (dim, mult) = (s["dimension"].as_u64().unwrap_or(0), s["multiplicity"].as_u64().unwrap_or(0));
        dims.extend(std::iter::repeat_n(dim, mult as usize));
    }
    dims
}

fn braces(dims: &[u64]) -> String {
    let parts: Vec<String> = dims.iter().map(u64::to_string).collect();
    format!("{{{}}}", parts.join(", "))
}

fn decompose_text(r: &Report) -> Result<String, CliError> {
    let mut out = String::new();
    for key in ["closed", "rank"] {
        let dims = &r.payload[key];
        if !dims.is_null() {
            out.push_str(&format!("{key:<7} {}\n", braces(&dims_of(dims))));
        }
    }
    out.push_str(&format!(
        "total   {} (expected {})\n",
        r.payload["total_dim"], r.payload["expected_total_dim"]
    ));
    match r.payload["match"].as_bool() {
        Some(true) => out.push_str("match\n"),
        Some(false) => out.push_str("MISMATCH\n"),
        None => {}
    }
    Ok(out)
}

fn decompose_csv(r: &Report) -> Result<String, CliError> {
    let multiplicities = |key: &str| -> std::collections::BTreeMap<u64, u64> {
        r.payload[key]
            .as_array()
            .into_iter()
            .flatten()
            .filter_map(|s| Some((s["dimension"].as_u64()?, s["multiplicity"].as_u64()?)))
            .collect()
    };
    let closed = multiplicities("closed");
    let rank = multiplicities("rank");
    let mut dims: Vec<u64> = closed.keys().chain(rank.keys()).copied().collect();
    dims.sort_unstable_by(|a, b| b.cmp(a));
    dims.dedup();
    let show = |m: &std::collections::BTreeMap<u64, u64>, present: bool, d: u64| {
        if present {
            m.get(&d).copied().unwrap_or(0).to_string()
        } else {
            String::new()
        }
    };
    let (has_closed, has_rank) = (!r.payload["closed"].is_null(), !r.payload["rank"].is_null());
    let rows = dims
        .into_iter()
        .map(|d| vec![d.to_string(), show(&closed, has_closed, d), show(&rank, has_rank, d)])
        .collect();
    csv_string(&["dimension", "multiplicity_closed", "multiplicity_rank"], rows)
}

fn cmd_generator(p: u64, c: i64, d: i64, k: i64) -> Result<Report, CliError> {
    let params = Params::new(p, c, d, k)?;
    let report = tensorrep::check_generator(&params);
    let verdict = if report.passed() { Verdict::Pass } else { Verdict::Fail };
    let mut payload = serde_json::to_value(&report).expect("serializes");
    payload["note"] = json!(
        "top image compared on the anti-diagonal i+j = c+d+2-k, the one reached from i+j = 2p+k after 2p-lambda_k-1 steps"
    );
    Ok(Report {
        schema_version: SCHEMA_VERSION,
        command: "rep generator".into(),
        params: params_map(&[("p", json!(p)), ("c", json!(c)), ("d", json!(d)), ("k", json!(k))]),
        verdict,
        payload,
    })
}

fn generator_text(r: &Report) -> Result<String, CliError> {
    let pl = &r.payload;
    let flag = |key: &str| if pl[key].as_bool() == Some(true) { "ok" } else { "FAILED" };
    let mut out = format!(
        "generator {}  [{}]\n",
        pl["params"],
        if r.verdict == Verdict::Pass { "PASS" } else { "FAIL" }
    );
    out.push_str(&format!(
        "  f(1) = {} (mod p: {}), top exponent {}, target anti-diagonal i+j = {}\n",
        str_field(pl, "f1"),
        pl["f1_residue"],
        pl["top_exponent"],
        pl["target_anti_diagonal"]
    ));
    out.push_str(&format!("  (a) top image = f(1) * alternating vector: {}\n", flag("top_matches_alt")));
    out.push_str(&format!("  (b) next power vanishes:                   {}\n", flag("annihilated")));
    out.push_str(&format!("  (c) top image nonzero:                     {}\n", flag("top_nonzero")));
    out.push_str(&format!(
        "  (d) cyclic dimension {} (expected {}):     {}\n",
        pl["cyclic_dim"],
        pl["expected_dim"],
        flag("cyclic_dim_ok")
    ));
    out.push_str(&format!("  alternating vector annihilated:            {}\n", flag("alt_annihilated")));
    Ok(out)
}

fn generator_csv(r: &Report) -> Result<String, CliError> {
    let rows = r.payload["top_coefficients"]
        .as_array()
        .into_iter()
        .flatten()
        .map(|t| {
            vec![
                t["ell"].to_string(),
                t["j"].to_string(),
                t["observed"].to_string(),
                t["expected"].to_string(),
            ]
        })
        .collect();
    csv_string(&["ell", "j", "observed", "expected"], rows)
}
