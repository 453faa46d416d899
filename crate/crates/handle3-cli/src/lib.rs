//! Command-line front end for `handle3`.
//!
//! [`run`] parses an argument vector, dispatches to the library and returns
//! the exit code together with everything that would be printed, so tests
//! can drive the CLI without spawning a process.

use std::fs;
use std::io::IsTerminal;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};

use handle3::classify::{self, Backend, ClassifyError};
use handle3::decomp::{self, match_case, validate, CaseId, DecompError, Decomposition};
use handle3::lens::{self, LensError, ManifoldForm};
use handle3::moves::{self, MoveError, MoveScript};
use handle3::surfaces::multiset_name;

pub const SCHEMA: &str = "handle3/1";

/// Exit code, standard output and standard error of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ColorChoice {
    Auto,
    Never,
    Always,
}

#[derive(Debug, Clone, Copy)]
pub struct Env {
    pub color: ColorChoice,
    pub stderr_is_tty: bool,
}

impl Env {
    /// Read `HANDLE3_COLOR` and probe the real stderr.
    pub fn from_process() -> (Env, Option<String>) {
        let raw = std::env::var("HANDLE3_COLOR").unwrap_or_default();
        let (color, warning) = match raw.as_str() {
            "" | "auto" => (ColorChoice::Auto, None),
            "never" => (ColorChoice::Never, None),
            "always" => (ColorChoice::Always, None),
            other => {
                (ColorChoice::Auto, Some(format!("ignoring HANDLE3_COLOR={other:?}; expected auto, never or always")))
            }
        };
        (Env { color, stderr_is_tty: std::io::stderr().is_terminal() }, warning)
    }

    fn colored(&self) -> bool {
        match self.color {
            ColorChoice::Always => true,
            ColorChoice::Never => false,
            ColorChoice::Auto => self.stderr_is_tty,
        }
    }
}

impl Default for Env {
    fn default() -> Self {
        Env { color: ColorChoice::Never, stderr_is_tty: false }
    }
}

#[derive(Parser, Debug)]
#[command(name = "handle3", version, about = "Three-handlebody decompositions of S3 and lens spaces")]
struct Cli {
    /// Emit a JSON envelope instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    group: Group,
}

#[derive(Subcommand, Debug)]
enum Group {
    /// Lens space arithmetic.
    #[command(subcommand)]
    Lens(LensCmd),
    /// Validate and enumerate decompositions.
    #[command(subcommand)]
    Decomp(DecompCmd),
    /// Stabilization moves.
    #[command(subcommand)]
    Moves(MovesCmd),
    /// Isotopy-class counts.
    #[command(subcommand)]
    Classify(ClassifyCmd),
}

#[derive(Args, Debug)]
struct PQ {
    #[arg(allow_negative_numbers = true)]
    p: i64,
    #[arg(allow_negative_numbers = true)]
    q: i64,
}

#[derive(Subcommand, Debug)]
enum LensCmd {
    /// Canonical form of L(p,q).
    Normalize(PQ),
    /// Whether L(p1,q1) and L(p2,q2) are homeomorphic.
    Homeo {
        #[arg(allow_negative_numbers = true)]
        p1: i64,
        #[arg(allow_negative_numbers = true)]
        q1: i64,
        #[arg(allow_negative_numbers = true)]
        p2: i64,
        #[arg(allow_negative_numbers = true)]
        q2: i64,
    },
    /// Diffeotopy group of L(p,q).
    Diffeotopy(PQ),
    /// Whether the two cores of the genus-one splitting are isotopic.
    CoreCriterion(PQ),
}

#[derive(Subcommand, Debug)]
enum DecompCmd {
    /// Check every invariant of a decomposition file.
    Validate { file: String },
    /// List the surface profiles surviving the pruning rules.
    Enumerate {
        #[arg(long, value_parser = parse_genera)]
        genera: [u32; 3],
        #[arg(long, value_parser = parse_manifold)]
        manifold: ManifoldArg,
        #[arg(long, default_value_t = 4)]
        max_loci: u32,
        /// Also list rejected profiles with the rule that pruned them.
        #[arg(long)]
        explain: bool,
    },
}

#[derive(Subcommand, Debug)]
enum MovesCmd {
    /// Replay a move script.
    Apply { decomp: String, script: String },
    /// List type-1 destabilization witnesses.
    Candidates { decomp: String },
    /// Destabilize greedily until stuck.
    Reduce { decomp: String },
}

#[derive(Subcommand, Debug)]
enum ClassifyCmd {
    /// Number of isotopy classes for one case.
    Count {
        #[arg(long, value_parser = parse_manifold)]
        manifold: ManifoldArg,
        #[arg(long, value_parser = parse_genera)]
        genera: [u32; 3],
        #[arg(long)]
        case: u32,
        #[arg(long, default_value = "theorem")]
        backend: Backend,
    },
    /// Cases where the theorem and derived backends disagree.
    Audit {
        #[arg(long, value_parser = parse_manifold)]
        manifold: ManifoldArg,
    },
    /// CSV of every count for S3 and all L(p,q) with p <= max-p.
    Table {
        #[arg(long)]
        max_p: u64,
    },
}

#[derive(Debug, Clone, Copy)]
enum ManifoldArg {
    S3,
    Pq(i64, i64),
}

fn parse_manifold(s: &str) -> Result<ManifoldArg, String> {
    if s.eq_ignore_ascii_case("s3") {
        return Ok(ManifoldArg::S3);
    }
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    match parts.as_slice() {
        [p, q] => {
            let p = p.parse().map_err(|_| format!("bad p in {s:?}"))?;
            let q = q.parse().map_err(|_| format!("bad q in {s:?}"))?;
            Ok(ManifoldArg::Pq(p, q))
        }
        _ => Err(format!("expected s3 or p,q, got {s:?}")),
    }
}

fn parse_genera(s: &str) -> Result<[u32; 3], String> {
    let v: Vec<u32> = s
        .split(',')
        .map(|x| x.trim().parse::<u32>())
        .collect::<Result<_, _>>()
        .map_err(|_| format!("expected g1,g2,g3, got {s:?}"))?;
    v.try_into().map_err(|_| format!("expected three genera, got {s:?}"))
}

/// A failure carried to the envelope.
#[derive(Debug, Clone, Serialize)]
struct Failure {
    kind: &'static str,
    message: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    details: Option<Value>,
}

impl Failure {
    fn new(kind: &'static str, message: impl Into<String>) -> Self {
        Failure { kind, message: message.into(), details: None }
    }
}

impl From<LensError> for Failure {
    fn from(e: LensError) -> Self {
        Failure::new("lens", e.to_string())
    }
}

impl From<DecompError> for Failure {
    fn from(e: DecompError) -> Self {
        Failure::new("decomp", e.to_string())
    }
}

impl From<MoveError> for Failure {
    fn from(e: MoveError) -> Self {
        Failure::new("moves", e.to_string())
    }
}

impl From<ClassifyError> for Failure {
    fn from(e: ClassifyError) -> Self {
        Failure::new("classify", e.to_string())
    }
}

#[derive(Serialize)]
struct Envelope<'a> {
    schema: &'static str,
    status: &'static str,
    command: &'a str,
    #[serde(skip_serializing_if = "Option::is_none")]
    data: Option<&'a Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    error: Option<&'a Failure>,
    warnings: &'a [String],
}

/// Successful result of a subcommand: JSON payload plus its text rendering.
struct Done {
    data: Value,
    text: String,
}

struct Ctx {
    warnings: Vec<String>,
}

impl Ctx {
    fn manifold(&mut self, m: ManifoldArg) -> Result<ManifoldForm, Failure> {
        match m {
            ManifoldArg::S3 => Ok(ManifoldForm::Sphere3),
            ManifoldArg::Pq(p, q) => {
                let n = lens::normalize(p, q)?;
                let same = match n {
                    ManifoldForm::Sphere3 => false,
                    ManifoldForm::Lens { p: np, q: nq } => np as i64 == p && nq as i64 == q,
                };
                if !same {
                    self.warnings.push(format!("manifold {p},{q} normalized to {n}"));
                }
                Ok(n)
            }
        }
    }
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("serializable payload")
}

fn read(path: &str) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::new("io", format!("{path}: {e}")))
}

fn load_decomposition(path: &str) -> Result<Decomposition, Failure> {
    Ok(Decomposition::from_json_str(&read(path)?)?)
}

fn load_script(path: &str) -> Result<MoveScript, Failure> {
    let text = read(path)?;
    let parse_err = |e: serde_json::Error| Failure::new("parse", format!("{path}: {e}"));
    let v: Value = serde_json::from_str(&text).map_err(parse_err)?;
    match v.pointer("/data/script") {
        Some(inner) => serde_json::from_value(inner.clone()).map_err(parse_err),
        None => MoveScript::from_json_str(&text).map_err(parse_err),
    }
}

fn describe(d: &Decomposition) -> String {
    let p = &d.patches;
    let [a, b, c] = d.genera;
    format!(
        "{} ({a},{b},{c}; b={}) F12={} F13={} F23={}",
        d.manifold,
        d.b(),
        multiset_name(&p.f12),
        multiset_name(&p.f13),
        multiset_name(&p.f23)
    )
}

fn case_of(d: &Decomposition) -> Option<CaseId> {
    match_case(d.genera, &d.patches)
}

fn lens_cmd(cmd: &LensCmd) -> Result<Done, Failure> {
    Ok(match cmd {
        LensCmd::Normalize(PQ { p, q }) => {
            let m = lens::normalize(*p, *q)?;
            Done { data: json!({ "manifold": m }), text: m.to_string() }
        }
        LensCmd::Homeo { p1, q1, p2, q2 } => {
            let a = lens::normalize(*p1, *q1)?;
            let b = lens::normalize(*p2, *q2)?;
            let h = lens::is_homeomorphic(&a, &b);
            Done { data: json!({ "homeomorphic": h }), text: h.to_string() }
        }
        LensCmd::Diffeotopy(PQ { p, q }) => {
            let m = lens::normalize(*p, *q)?;
            let g = lens::diffeotopy_group(&m)?;
            Done {
                data: json!({ "manifold": m, "group": g.group, "generator_tag": g.generator_tag }),
                text: format!("{:?} ({:?})", g.group, g.generator_tag),
            }
        }
        LensCmd::CoreCriterion(PQ { p, q }) => {
            let m = lens::normalize(*p, *q)?;
            let c = lens::core_isotopy_criterion(&m);
            Done { data: json!({ "manifold": m, "criterion": c }), text: c.to_string() }
        }
    })
}

fn decomp_cmd(cmd: &DecompCmd, ctx: &mut Ctx) -> Result<Done, Failure> {
    match cmd {
        DecompCmd::Validate { file } => {
            let d = load_decomposition(file)?;
            let report = validate(&d);
            if !report.is_valid() {
                let mut f = Failure::new("invalid_decomposition", format!("{} violation(s)", report.violations.len()));
                f.details = Some(to_value(&report.violations));
                return Err(f);
            }
            let case = case_of(&d);
            let text = match case {
                Some(c) => format!("valid: {}\ncase {c}", describe(&d)),
                None => format!("valid: {}", describe(&d)),
            };
            Ok(Done { data: json!({ "valid": true, "case": case, "decomposition": d }), text })
        }
        DecompCmd::Enumerate { genera, manifold, max_loci, explain } => {
            let m = ctx.manifold(*manifold)?;
            let e = decomp::enumerate_profiles(&m, *genera, *max_loci)?;
            let mut text = format!("{} genera {:?}: {} profile(s)", m, genera, e.cases.len());
            for c in &e.cases {
                let label = c.case.map_or("unmatched".to_string(), |k| k.to_string());
                text.push_str(&format!(
                    "\n  {label}: b={} F12={} F13={} F23={}",
                    c.b,
                    multiset_name(&c.profile.f12),
                    multiset_name(&c.profile.f13),
                    multiset_name(&c.profile.f23)
                ));
            }
            let mut data = json!({
                "manifold": m,
                "genera": genera,
                "max_loci": max_loci,
                "cases": e.cases,
            });
            if *explain {
                for r in &e.rejected {
                    text.push_str(&format!(
                        "\n  rejected by {}: b={} F12={} F13={} F23={}",
                        r.rule.name(),
                        r.b,
                        multiset_name(&r.profile.f12),
                        multiset_name(&r.profile.f13),
                        multiset_name(&r.profile.f23)
                    ));
                }
                data["rejected"] = to_value(&e.rejected);
            }
            Ok(Done { data, text })
        }
    }
}

fn moves_cmd(cmd: &MovesCmd) -> Result<Done, Failure> {
    match cmd {
        MovesCmd::Apply { decomp, script } => {
            let d = load_decomposition(decomp)?;
            let s = load_script(script)?;
            let states = moves::apply_script(&d, &s).map_err(|(i, e)| {
                let mut f = Failure::from(e);
                f.message = format!("move {i}: {}", f.message);
                f.details = Some(json!({ "index": i }));
                f
            })?;
            let end = states.last().expect("initial state").clone();
            let text = format!("applied {} move(s)\n{}", s.moves.len(), describe(&end));
            Ok(Done {
                data: json!({ "moves_applied": s.moves.len(), "case": case_of(&end), "decomposition": end }),
                text,
            })
        }
        MovesCmd::Candidates { decomp } => {
            let d = load_decomposition(decomp)?;
            let c = moves::destabilization_candidates(&d);
            let mut text = format!("{} witness(es)", c.witnesses.len());
            for w in &c.witnesses {
                text.push_str(&format!("\n  H{} loci {:?}", w.handlebody, w.loci));
            }
            if !c.indeterminate.is_empty() {
                text.push_str(&format!("\n  indeterminate: {:?}", c.indeterminate));
            }
            Ok(Done { data: to_value(&c), text })
        }
        MovesCmd::Reduce { decomp } => {
            let d = load_decomposition(decomp)?;
            let (end, script) = moves::stable_reduce(&d);
            let text = format!("{} move(s)\n{}", script.moves.len(), describe(&end));
            Ok(Done { data: json!({ "script": script, "case": case_of(&end), "decomposition": end }), text })
        }
    }
}

/// Genera sorted ascending; handlebody labels carry no meaning for counts.
fn sorted_genera(g: [u32; 3], ctx: &mut Ctx) -> [u32; 3] {
    let mut s = g;
    s.sort();
    if s != g {
        ctx.warnings.push(format!("genera {g:?} relabeled to {s:?}"));
    }
    s
}

#[derive(Serialize)]
struct TableRow {
    manifold: String,
    p: u64,
    q: u64,
    g1: u32,
    g2: u32,
    g3: u32,
    case: u32,
    theorem: u32,
    derived: u32,
    discrepancy: bool,
}

fn table_rows(max_p: u64) -> Vec<TableRow> {
    let mut forms = vec![ManifoldForm::Sphere3];
    for p in 2..=max_p {
        forms.extend((1..p).filter_map(|q| ManifoldForm::lens(p, q).ok()));
    }
    let mut rows = Vec::new();
    for m in forms {
        let (p, q) = match m {
            ManifoldForm::Sphere3 => (1, 0),
            ManifoldForm::Lens { p, q } => (p, q),
        };
        for c in classify::classified_cases() {
            let (Ok(t), Ok(d)) = (
                classify::isotopy_class_count(&m, c, Backend::Theorem),
                classify::isotopy_class_count(&m, c, Backend::Derived),
            ) else {
                continue;
            };
            let [g1, g2, g3] = c.genera;
            rows.push(TableRow {
                manifold: m.to_string(),
                p,
                q,
                g1,
                g2,
                g3,
                case: c.case,
                theorem: t.count,
                derived: d.count,
                discrepancy: t.discrepancy_flag,
            });
        }
    }
    rows
}

fn classify_cmd(cmd: &ClassifyCmd, ctx: &mut Ctx) -> Result<Done, Failure> {
    match cmd {
        ClassifyCmd::Count { manifold, genera, case, backend } => {
            let m = ctx.manifold(*manifold)?;
            let g = sorted_genera(*genera, ctx);
            let c = CaseId::new(g, *case)?;
            let n = classify::isotopy_class_count(&m, c, *backend)?;
            if n.discrepancy_flag {
                ctx.warnings.push(format!("backends disagree on {c} for {m}"));
            }
            Ok(Done { data: json!({ "manifold": m, "case": c, "count": n }), text: n.count.to_string() })
        }
        ClassifyCmd::Audit { manifold } => {
            let m = ctx.manifold(*manifold)?;
            let r = classify::consistency_report(&m);
            let mut text = format!("{m}: {} disagreement(s)", r.len());
            for x in &r {
                text.push_str(&format!("\n  {}: theorem {} derived {}", x.case, x.theorem, x.derived));
            }
            Ok(Done { data: json!({ "manifold": m, "disagreements": r }), text })
        }
        ClassifyCmd::Table { max_p } => {
            if *max_p < 2 {
                return Err(Failure::new("classify", "max-p must be at least 2"));
            }
            let rows = table_rows(*max_p);
            let mut w = csv::Writer::from_writer(Vec::new());
            for r in &rows {
                w.serialize(r).map_err(|e| Failure::new("io", e.to_string()))?;
            }
            let bytes = w.into_inner().map_err(|e| Failure::new("io", e.to_string()))?;
            let text = String::from_utf8(bytes).expect("csv is utf-8");
            let text = text.trim_end().to_string();
            Ok(Done { data: json!({ "rows": rows }), text })
        }
    }
}

fn command_name(g: &Group) -> &'static str {
    match g {
        Group::Lens(LensCmd::Normalize(_)) => "lens normalize",
        Group::Lens(LensCmd::Homeo { .. }) => "lens homeo",
        Group::Lens(LensCmd::Diffeotopy(_)) => "lens diffeotopy",
        Group::Lens(LensCmd::CoreCriterion(_)) => "lens core-criterion",
        Group::Decomp(DecompCmd::Validate { .. }) => "decomp validate",
        Group::Decomp(DecompCmd::Enumerate { .. }) => "decomp enumerate",
        Group::Moves(MovesCmd::Apply { .. }) => "moves apply",
        Group::Moves(MovesCmd::Candidates { .. }) => "moves candidates",
        Group::Moves(MovesCmd::Reduce { .. }) => "moves reduce",
        Group::Classify(ClassifyCmd::Count { .. }) => "classify count",
        Group::Classify(ClassifyCmd::Audit { .. }) => "classify audit",
        Group::Classify(ClassifyCmd::Table { .. }) => "classify table",
    }
}

fn envelope(command: &str, result: &Result<Done, Failure>, warnings: &[String]) -> String {
    let env = match result {
        Ok(done) => Envelope { schema: SCHEMA, status: "ok", command, data: Some(&done.data), error: None, warnings },
        Err(f) => Envelope { schema: SCHEMA, status: "error", command, data: None, error: Some(f), warnings },
    };
    serde_json::to_string_pretty(&env).expect("serializable envelope") + "\n"
}

fn paint(env: &Env, code: &str, label: &str) -> String {
    if env.colored() {
        format!("\x1b[{code}m{label}\x1b[0m")
    } else {
        label.to_string()
    }
}

/// Run with a default environment (no color).
pub fn run<I, S>(argv: I) -> Outcome
where
    I: IntoIterator<Item = S>,
    S: Into<String>,
{
    run_with(argv, &Env::default(), Vec::new())
}

/// Run with an explicit environment and warnings collected before parsing.
pub fn run_with<I, S>(argv: I, env: &Env, mut warnings: Vec<String>) -> Outcome
where
    I: IntoIterator<Item = S>,
    S: Into<String>,
{
    let argv: Vec<String> = argv.into_iter().map(Into::into).collect();
    let json_requested = argv.iter().skip(1).any(|a| a == "--json");
    let cli = match Cli::try_parse_from(&argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                return Outcome { code: 0, stdout: e.to_string(), stderr: String::new() };
            }
            let message = e.to_string();
            if json_requested {
                let f = Failure::new("usage", message.trim_end());
                let stdout = envelope("", &Err(f), &warnings);
                return Outcome { code: 2, stdout, stderr: String::new() };
            }
            return Outcome { code: 2, stdout: String::new(), stderr: message };
        }
    };

    let mut ctx = Ctx { warnings: Vec::new() };
    let result = match &cli.group {
        Group::Lens(c) => lens_cmd(c),
        Group::Decomp(c) => decomp_cmd(c, &mut ctx),
        Group::Moves(c) => moves_cmd(c),
        Group::Classify(c) => classify_cmd(c, &mut ctx),
    };
    warnings.append(&mut ctx.warnings);
    let code = if result.is_ok() { 0 } else { 1 };
    let command = command_name(&cli.group);

    if cli.json {
        return Outcome { code, stdout: envelope(command, &result, &warnings), stderr: String::new() };
    }
    let mut stderr = String::new();
    for w in &warnings {
        stderr.push_str(&format!("{} {w}\n", paint(env, "33", "warning:")));
    }
    match result {
        Ok(done) => Outcome { code, stdout: done.text + "\n", stderr },
        Err(f) => {
            stderr.push_str(&format!("{} {}\n", paint(env, "31", "error:"), f.message));
            if let Some(details) = &f.details {
                if let Some(list) = details.as_array() {
                    for v in list {
                        let kind = v.get("kind").and_then(Value::as_str).unwrap_or("");
                        let detail = v.get("detail").and_then(Value::as_str).unwrap_or("");
                        stderr.push_str(&format!("  {kind}: {detail}\n"));
                    }
                }
            }
            Outcome { code, stdout: String::new(), stderr }
        }
    }
}
