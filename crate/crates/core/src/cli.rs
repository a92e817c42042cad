//! The `ncgb` command line.
//!
//! Exit codes: 0 success, 1 usage or parse error, 2 computation error,
//! 3 truncated basis under `--strict`. With several input files the
//! largest code wins.

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::Value;

use crate::buchberger::{self, GroebnerBasis, Limits, Stats, Status};
use crate::division::{self, DivisionMode, StepRecord};
use crate::dynamical::{self, BranchChoice, CrtComponent, Verdict};
use crate::oracle::{self, VerifyReport};
use crate::par;
use crate::poly::{NcPoly, PolyRing, Term};
use crate::problem::{parse_problem, ProblemFile};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_COMPUTE: i32 = 2;
pub const EXIT_TRUNCATED: i32 = 3;

#[derive(Parser, Debug)]
#[command(
    name = "ncgb",
    version,
    about = "Noncommutative Gröbner bases over Z, Z/n and localizations of Z"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Divide a polynomial by an ordered list of generators.
    Divide {
        /// Comma-separated generator names, in division order. Defaults to
        /// the ideal in file order.
        #[arg(long, value_delimiter = ',')]
        by: Vec<String>,
        /// Polynomial to divide; defaults to the file's queries.
        #[arg(long)]
        poly: Option<String>,
        /// Include the step trace.
        #[arg(long)]
        trace: bool,
        #[command(flatten)]
        common: Common,
    },
    /// Complete the ideal to a Gröbner basis.
    Basis {
        #[command(flatten)]
        engine: Engine,
        #[command(flatten)]
        common: Common,
    },
    /// Decide ideal membership.
    Member {
        /// Polynomial to test; defaults to the file's queries.
        #[arg(long)]
        poly: Option<String>,
        #[command(flatten)]
        engine: Engine,
        #[command(flatten)]
        common: Common,
    },
    /// Minimal generating set of a list of terms.
    Minterms {
        /// Take the terms of this polynomial instead of every generator term.
        #[arg(long)]
        poly: Option<String>,
        #[command(flatten)]
        common: Common,
    },
    /// Reduced Gröbner basis (prime-power moduli only).
    Reduce {
        #[command(flatten)]
        engine: Engine,
        #[command(flatten)]
        common: Common,
    },
    /// Check a computed basis against bounded membership and closure.
    Verify {
        /// Word-length bound for the membership oracle.
        #[arg(long, default_value_t = 8)]
        bound: usize,
        #[command(flatten)]
        engine: Engine,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    /// Emit JSON.
    #[arg(long)]
    pub json: bool,
    /// Problem files.
    #[arg(required = true)]
    pub files: Vec<PathBuf>,
}

#[derive(Args, Debug, Clone)]
pub struct Engine {
    #[arg(long, default_value_t = Limits::default().max_word_length)]
    pub max_len: usize,
    #[arg(long, default_value_t = Limits::default().max_basis_size)]
    pub max_size: usize,
    #[arg(long, default_value_t = Limits::default().max_iterations)]
    pub max_iter: usize,
    /// Completion strategy; `auto` picks from the ring.
    #[arg(long, value_enum, default_value_t = Mode::Auto)]
    pub mode: Mode,
    /// Exit with code 3 when a basis is truncated.
    #[arg(long)]
    pub strict: bool,
    /// Worker threads; 1 runs sequentially.
    #[arg(long)]
    pub jobs: Option<usize>,
}

impl Engine {
    fn limits(&self) -> Limits {
        Limits {
            max_word_length: self.max_len,
            max_basis_size: self.max_size,
            max_iterations: self.max_iter,
        }
    }
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Auto,
    Plain,
    Crt,
    Dynamical,
}

/// `Z/p^k` → plain, composite `Z/n` → crt, Z and its localizations →
/// dynamical.
pub fn auto_mode(pr: &PolyRing) -> Mode {
    if pr.ring.is_valuation() {
        Mode::Plain
    } else if pr.ring.modulus().is_some() {
        Mode::Crt
    } else {
        Mode::Dynamical
    }
}

pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Compute(String),
}

impl Failure {
    fn code(&self) -> i32 {
        match self {
            Failure::Usage(_) => EXIT_USAGE,
            Failure::Compute(_) => EXIT_COMPUTE,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Usage(m) | Failure::Compute(m) => m,
        }
    }
}

fn compute<E: std::fmt::Display>(e: E) -> Failure {
    Failure::Compute(e.to_string())
}

fn status_str(s: Status) -> &'static str {
    match s {
        Status::Complete => "complete",
        Status::Truncated => "truncated",
    }
}

#[derive(Serialize)]
struct BasisOut {
    ring: String,
    status: &'static str,
    verified: bool,
    elements: Vec<String>,
    stats: Stats,
}

impl BasisOut {
    fn new(pr: &PolyRing, g: &GroebnerBasis) -> Self {
        BasisOut {
            ring: pr.ring.to_string(),
            status: status_str(g.status),
            verified: g.verified,
            elements: g.elements.iter().map(|e| pr.format(e)).collect(),
            stats: g.stats.clone(),
        }
    }
}

#[derive(Serialize)]
struct ComponentOut {
    modulus: String,
    generators: Vec<String>,
    basis: BasisOut,
}

#[derive(Serialize)]
struct LeafOut {
    inverted: Vec<String>,
    path: Vec<BranchChoice>,
    basis: BasisOut,
}

#[derive(Serialize)]
struct ComaximalOut {
    comaximal: bool,
    bezout: Option<Vec<String>>,
}

/// A completed ideal in whichever shape the mode produces.
enum Computed {
    Plain(GroebnerBasis),
    Crt(Vec<CrtComponent>),
    Dynamical(Vec<dynamical::BranchLeaf>),
}

impl Computed {
    fn status(&self) -> Status {
        let truncated = match self {
            Computed::Plain(g) => g.status == Status::Truncated,
            Computed::Crt(cs) => cs.iter().any(|c| c.basis.status == Status::Truncated),
            Computed::Dynamical(ls) => ls.iter().any(|l| l.basis.status == Status::Truncated),
        };
        if truncated {
            Status::Truncated
        } else {
            Status::Complete
        }
    }

    fn mode(&self) -> Mode {
        match self {
            Computed::Plain(_) => Mode::Plain,
            Computed::Crt(_) => Mode::Crt,
            Computed::Dynamical(_) => Mode::Dynamical,
        }
    }

    fn member(&self, pr: &PolyRing, f: &NcPoly) -> Result<Verdict, Failure> {
        match self {
            Computed::Plain(g) => {
                let nf = if g.verified {
                    division::normal_form(pr, f, g)
                } else {
                    division::normal_form_unchecked(pr, f, &g.elements)
                }
                .map_err(compute)?;
                Ok(Verdict {
                    member: nf.is_zero(),
                    at_bound: !g.verified,
                })
            }
            Computed::Crt(cs) => dynamical::crt_member(pr, f, cs).map_err(compute),
            Computed::Dynamical(ls) => dynamical::dynamical_member(pr, f, ls).map_err(compute),
        }
    }

    fn to_json(&self, pr: &PolyRing) -> Value {
        let mut out = serde_json::Map::new();
        out.insert("mode".into(), serde_json::to_value(self.mode()).unwrap());
        out.insert("status".into(), status_str(self.status()).into());
        match self {
            Computed::Plain(g) => {
                out.insert("basis".into(), serde_json::to_value(BasisOut::new(pr, g)).unwrap());
            }
            Computed::Crt(cs) => {
                let comps: Vec<ComponentOut> = cs
                    .iter()
                    .map(|c| ComponentOut {
                        modulus: c.factor.value.to_string(),
                        generators: c.projected.iter().map(|p| c.ring.format(p)).collect(),
                        basis: BasisOut::new(&c.ring, &c.basis),
                    })
                    .collect();
                out.insert("components".into(), serde_json::to_value(comps).unwrap());
            }
            Computed::Dynamical(ls) => {
                let leaves: Vec<LeafOut> = ls
                    .iter()
                    .map(|l| LeafOut {
                        inverted: l.generators.iter().map(|g| g.to_string()).collect(),
                        path: l.path.clone(),
                        basis: BasisOut::new(&l.ring, &l.basis),
                    })
                    .collect();
                let cm = dynamical::leaves_comaximal(ls);
                out.insert("leaves".into(), serde_json::to_value(leaves).unwrap());
                out.insert(
                    "comaximal".into(),
                    serde_json::to_value(ComaximalOut {
                        comaximal: cm.comaximal,
                        bezout: cm.bezout,
                    })
                    .unwrap(),
                );
            }
        }
        Value::Object(out)
    }
}

fn complete(p: &ProblemFile, engine: &Engine) -> Result<Computed, Failure> {
    let pr = &p.ring;
    let gens = p.generators();
    let lim = engine.limits();
    let mode = match engine.mode {
        Mode::Auto => auto_mode(pr),
        m => m,
    };
    par::with_jobs(engine.jobs, |exec| match mode {
        Mode::Plain | Mode::Auto => buchberger::buchberger(pr, &gens, lim, exec)
            .map(Computed::Plain)
            .map_err(compute),
        Mode::Crt => dynamical::crt_basis(pr, &gens, lim, exec)
            .map(Computed::Crt)
            .map_err(compute),
        Mode::Dynamical => dynamical::dynamical_basis(pr, &gens, lim, exec)
            .map(Computed::Dynamical)
            .map_err(compute),
    })
}

fn targets(p: &ProblemFile, poly: &Option<String>) -> Result<Vec<(String, NcPoly)>, Failure> {
    match poly {
        Some(text) => {
            let f = p.parse_poly(text).map_err(|e| Failure::Usage(format!("--poly: {e}")))?;
            Ok(vec![("poly".to_string(), f)])
        }
        None if p.queries.is_empty() => Err(Failure::Usage("no --poly given and the file has no queries".into())),
        None => Ok(p.queries.clone()),
    }
}

fn strict_code(engine: &Engine, status: Status) -> i32 {
    if engine.strict && status == Status::Truncated {
        EXIT_TRUNCATED
    } else {
        EXIT_OK
    }
}

fn run_divide(p: &ProblemFile, by: &[String], poly: &Option<String>, trace: bool) -> Result<(Value, i32), Failure> {
    let pr = &p.ring;
    let names: Vec<String> = if by.is_empty() {
        p.ideal.iter().map(|(n, _)| n.clone()).collect()
    } else {
        by.to_vec()
    };
    let mut divisors = Vec::with_capacity(names.len());
    for n in &names {
        match p.generator(n) {
            Some(g) => divisors.push(g.clone()),
            None => return Err(Failure::Usage(format!("--by: no generator named `{n}`"))),
        }
    }
    let mut results = Vec::new();
    for (name, f) in targets(p, poly)? {
        let r = division::divide_with(pr, &f, &divisors, DivisionMode::Plain, trace).map_err(compute)?;
        let quotients: Vec<Value> = r
            .quotients
            .iter()
            .map(|q| {
                serde_json::json!({
                    "divisor": names[q.divisor],
                    "left": pr.alphabet.format_word(&q.u),
                    "right": pr.alphabet.format_word(&q.v),
                    "coeff": pr.ring.display(&q.coeff),
                })
            })
            .collect();
        let mut obj = serde_json::json!({
            "name": name,
            "poly": pr.format(&f),
            "quotients": quotients,
            "remainder": pr.format(&r.remainder),
        });
        if trace {
            let steps: Vec<StepRecord> = r.steps.iter().map(|s| s.record(pr)).collect();
            obj["trace"] = serde_json::to_value(steps).unwrap();
        }
        results.push(obj);
    }
    Ok((
        serde_json::json!({ "ring": pr.ring.to_string(), "divisors": names, "results": results }),
        EXIT_OK,
    ))
}

fn run_basis(p: &ProblemFile, engine: &Engine) -> Result<(Value, i32), Failure> {
    let c = complete(p, engine)?;
    let mut v = c.to_json(&p.ring);
    v["ring"] = p.ring.ring.to_string().into();
    Ok((v, strict_code(engine, c.status())))
}

fn run_member(p: &ProblemFile, poly: &Option<String>, engine: &Engine) -> Result<(Value, i32), Failure> {
    let ts = targets(p, poly)?;
    let c = complete(p, engine)?;
    let mut results = Vec::new();
    let mut all = true;
    let mut any_bound = false;
    for (name, f) in ts {
        let v = c.member(&p.ring, &f)?;
        all &= v.member;
        any_bound |= v.at_bound;
        results.push(serde_json::json!({
            "name": name,
            "poly": p.ring.format(&f),
            "member": v.member,
            "at_bound": v.at_bound,
        }));
    }
    let v = serde_json::json!({
        "ring": p.ring.ring.to_string(),
        "mode": c.mode(),
        "status": status_str(c.status()),
        "member": all,
        "at_bound": any_bound,
        "results": results,
    });
    Ok((v, strict_code(engine, c.status())))
}

fn run_minterms(p: &ProblemFile, poly: &Option<String>) -> Result<(Value, i32), Failure> {
    let pr = &p.ring;
    let terms: Vec<Term> = match poly {
        Some(text) => {
            let f = p.parse_poly(text).map_err(|e| Failure::Usage(format!("--poly: {e}")))?;
            f.terms().to_vec()
        }
        None => p.ideal.iter().flat_map(|(_, f)| f.terms().iter().cloned()).collect(),
    };
    let m = buchberger::minimal_term_set(&pr.ring, &terms).map_err(compute)?;
    let out: Vec<String> = m.iter().map(|t| pr.format_term(t)).collect();
    Ok((
        serde_json::json!({ "ring": pr.ring.to_string(), "terms": out }),
        EXIT_OK,
    ))
}

fn run_reduce(p: &ProblemFile, engine: &Engine) -> Result<(Value, i32), Failure> {
    let pr = &p.ring;
    if !pr.ring.is_valuation() {
        return Err(Failure::Compute(format!(
            "reduced bases need a prime-power modulus, not {}",
            pr.ring
        )));
    }
    let lim = engine.limits();
    let gens = p.generators();
    let (g, r) = par::with_jobs(engine.jobs, |exec| -> Result<_, Failure> {
        let g = buchberger::buchberger(pr, &gens, lim, exec).map_err(compute)?;
        let r = buchberger::reduced_basis(pr, &g, exec).map_err(compute)?;
        Ok((g, r))
    })?;
    let v = serde_json::json!({
        "ring": pr.ring.to_string(),
        "status": status_str(g.status),
        "basis": BasisOut::new(pr, &r),
    });
    Ok((v, strict_code(engine, g.status)))
}

#[derive(Serialize)]
struct LabelledReport {
    label: String,
    report: VerifyReport,
}

fn run_verify(p: &ProblemFile, bound: usize, engine: &Engine) -> Result<(Value, i32), Failure> {
    let pr = &p.ring;
    let gens = p.generators();
    if let Some(g) = gens.iter().find(|g| g.max_word_len() > bound) {
        return Err(Failure::Usage(format!(
            "--bound {bound} is below the generator word length {}",
            g.max_word_len()
        )));
    }
    let c = complete(p, engine)?;
    let reports = par::with_jobs(engine.jobs, |exec| -> Result<Vec<LabelledReport>, Failure> {
        let check = |label: String, ring: &PolyRing, g: &GroebnerBasis, local: &[NcPoly]| {
            oracle::verify_basis(ring, g, local, bound, exec)
                .map(|report| LabelledReport { label, report })
                .map_err(compute)
        };
        match &c {
            Computed::Plain(g) => Ok(vec![check(pr.ring.to_string(), pr, g, &gens)?]),
            Computed::Crt(cs) => cs
                .iter()
                .map(|comp| check(comp.ring.ring.to_string(), &comp.ring, &comp.basis, &comp.projected))
                .collect(),
            Computed::Dynamical(ls) => ls
                .iter()
                .map(|l| {
                    let local = gens
                        .iter()
                        .map(|f| l.ring.project(f, &pr.ring))
                        .collect::<Result<Vec<_>, _>>()
                        .map_err(compute)?;
                    check(l.ring.ring.to_string(), &l.ring, &l.basis, &local)
                })
                .collect(),
        }
    })?;
    let verified = reports.iter().all(|r| r.report.verified);
    let v = serde_json::json!({
        "ring": pr.ring.to_string(),
        "mode": c.mode(),
        "status": status_str(c.status()),
        "bound": bound,
        "verified": verified,
        "reports": reports,
    });
    let code = if verified {
        strict_code(engine, c.status())
    } else {
        EXIT_COMPUTE
    };
    Ok((v, code))
}

fn run_file(cmd: &Command, p: &ProblemFile) -> Result<(Value, i32), Failure> {
    match cmd {
        Command::Divide { by, poly, trace, .. } => run_divide(p, by, poly, *trace),
        Command::Basis { engine, .. } => run_basis(p, engine),
        Command::Member { poly, engine, .. } => run_member(p, poly, engine),
        Command::Minterms { poly, .. } => run_minterms(p, poly),
        Command::Reduce { engine, .. } => run_reduce(p, engine),
        Command::Verify { bound, engine, .. } => run_verify(p, *bound, engine),
    }
}

fn common(cmd: &Command) -> &Common {
    match cmd {
        Command::Divide { common, .. }
        | Command::Basis { common, .. }
        | Command::Member { common, .. }
        | Command::Minterms { common, .. }
        | Command::Reduce { common, .. }
        | Command::Verify { common, .. } => common,
    }
}

fn engine(cmd: &Command) -> Option<&Engine> {
    match cmd {
        Command::Basis { engine, .. }
        | Command::Member { engine, .. }
        | Command::Reduce { engine, .. }
        | Command::Verify { engine, .. } => Some(engine),
        _ => None,
    }
}

fn list(out: &mut String, title: &str, items: &Value) {
    out.push_str(title);
    out.push('\n');
    for e in items.as_array().into_iter().flatten() {
        out.push_str("  ");
        out.push_str(e.as_str().unwrap_or_default());
        out.push('\n');
    }
}

fn basis_text(out: &mut String, title: &str, b: &Value) {
    let head = format!(
        "{title} [{}, {} elements]",
        b["status"].as_str().unwrap_or_default(),
        b["elements"].as_array().map_or(0, Vec::len)
    );
    list(out, &head, &b["elements"]);
}

/// Human-readable rendering of a command's JSON payload.
fn human(cmd: &Command, v: &Value) -> String {
    let mut out = String::new();
    if let Some(file) = v["file"].as_str() {
        out.push_str(&format!("== {file}\n"));
    }
    if let Some(e) = v.get("error") {
        out.push_str(&format!("error: {}\n", e["message"].as_str().unwrap_or_default()));
        return out;
    }
    match cmd {
        Command::Divide { .. } => {
            for r in v["results"].as_array().into_iter().flatten() {
                out.push_str(&format!(
                    "{} = {}\n",
                    r["name"].as_str().unwrap_or_default(),
                    r["poly"].as_str().unwrap_or_default()
                ));
                for q in r["quotients"].as_array().into_iter().flatten() {
                    out.push_str(&format!(
                        "  + ({}) * {} * {} * {}\n",
                        q["coeff"].as_str().unwrap_or_default(),
                        q["left"].as_str().unwrap_or_default(),
                        q["divisor"].as_str().unwrap_or_default(),
                        q["right"].as_str().unwrap_or_default()
                    ));
                }
                out.push_str(&format!(
                    "  remainder: {}\n",
                    r["remainder"].as_str().unwrap_or_default()
                ));
            }
        }
        Command::Basis { .. } => {
            out.push_str(&format!(
                "ring {}, mode {}, status {}\n",
                v["ring"].as_str().unwrap_or_default(),
                v["mode"].as_str().unwrap_or_default(),
                v["status"].as_str().unwrap_or_default()
            ));
            if v.get("basis").is_some() {
                basis_text(&mut out, "basis", &v["basis"]);
            }
            for c in v["components"].as_array().into_iter().flatten() {
                basis_text(
                    &mut out,
                    &format!("component Z/{}", c["modulus"].as_str().unwrap_or_default()),
                    &c["basis"],
                );
            }
            for l in v["leaves"].as_array().into_iter().flatten() {
                basis_text(
                    &mut out,
                    &format!("leaf {}", l["basis"]["ring"].as_str().unwrap_or_default()),
                    &l["basis"],
                );
            }
            if let Some(c) = v.get("comaximal") {
                out.push_str(&format!("comaximal: {}\n", c["comaximal"]));
            }
        }
        Command::Member { .. } => {
            for r in v["results"].as_array().into_iter().flatten() {
                let verdict = if r["member"].as_bool() == Some(true) {
                    "member"
                } else {
                    "not a member"
                };
                let qual = if r["at_bound"].as_bool() == Some(true) {
                    " (at bound)"
                } else {
                    ""
                };
                out.push_str(&format!(
                    "{}: {verdict}{qual}\n",
                    r["poly"].as_str().unwrap_or_default()
                ));
            }
        }
        Command::Minterms { .. } => list(&mut out, "minimal terms", &v["terms"]),
        Command::Reduce { .. } => basis_text(&mut out, "reduced basis", &v["basis"]),
        Command::Verify { .. } => {
            for r in v["reports"].as_array().into_iter().flatten() {
                let rep = &r["report"];
                out.push_str(&format!(
                    "{}: {}\n",
                    r["label"].as_str().unwrap_or_default(),
                    if rep["verified"].as_bool() == Some(true) {
                        "verified"
                    } else {
                        "FAILED"
                    }
                ));
                for e in rep["elements_in_ideal"].as_array().into_iter().flatten() {
                    out.push_str(&format!(
                        "  {}: {}\n",
                        e["poly"].as_str().unwrap_or_default(),
                        e["verdict"].as_str().unwrap_or_default()
                    ));
                }
                for g in rep["generators_reduce"].as_array().into_iter().flatten() {
                    if g["ok"].as_bool() != Some(true) {
                        out.push_str(&format!(
                            "  generator {} leaves {}\n",
                            g["index"],
                            g["remainder"].as_str().unwrap_or_default()
                        ));
                    }
                }
                for f in rep["relation_failures"].as_array().into_iter().flatten() {
                    out.push_str(&format!(
                        "  {} leaves {}\n",
                        f["relation"].as_str().unwrap_or_default(),
                        f["remainder"].as_str().unwrap_or_default()
                    ));
                }
                for f in rep["open_disjoint"].as_array().into_iter().flatten() {
                    out.push_str(&format!(
                        "  {} open, {} does not reduce\n",
                        f["relation"].as_str().unwrap_or_default(),
                        f["remainder"].as_str().unwrap_or_default()
                    ));
                }
            }
        }
    }
    out
}

/// Runs one invocation. `args` includes the program name.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            return if e.use_stderr() {
                Outcome {
                    code,
                    stdout: String::new(),
                    stderr: text,
                }
            } else {
                Outcome {
                    code,
                    stdout: text,
                    stderr: String::new(),
                }
            };
        }
    };
    let cmd = &cli.command;
    let com = common(cmd);
    if let Some(e) = engine(cmd) {
        if e.limits().validate().is_err() {
            return Outcome {
                code: EXIT_USAGE,
                stdout: String::new(),
                stderr: "error: limits must be positive\n".into(),
            };
        }
        if e.jobs == Some(0) {
            return Outcome {
                code: EXIT_USAGE,
                stdout: String::new(),
                stderr: "error: --jobs must be positive\n".into(),
            };
        }
    }
    let mut code = EXIT_OK;
    let mut payloads = Vec::new();
    let mut stderr = String::new();
    for path in &com.files {
        let name = path.display().to_string();
        let result = std::fs::read_to_string(path)
            .map_err(|e| Failure::Usage(format!("cannot read {name}: {e}")))
            .and_then(|text| parse_problem(&text).map_err(|e| Failure::Usage(format!("{name}: {e}"))))
            .and_then(|p| run_file(cmd, &p));
        let mut obj = serde_json::Map::new();
        obj.insert("file".into(), name.clone().into());
        match result {
            Ok((Value::Object(m), c)) => {
                obj.extend(m);
                code = code.max(c);
            }
            Ok((v, c)) => {
                obj.insert("result".into(), v);
                code = code.max(c);
            }
            Err(f) => {
                let kind = if f.code() == EXIT_USAGE { "usage" } else { "computation" };
                stderr.push_str(&format!("error: {}\n", f.message()));
                obj.insert(
                    "error".into(),
                    serde_json::json!({ "kind": kind, "message": f.message() }),
                );
                code = code.max(f.code());
            }
        }
        payloads.push(Value::Object(obj));
    }
    let stdout = if com.json {
        let v = if payloads.len() == 1 {
            payloads.pop().unwrap()
        } else {
            Value::Array(payloads)
        };
        let mut s = serde_json::to_string_pretty(&v).unwrap();
        s.push('\n');
        s
    } else {
        payloads.iter().map(|v| human(cmd, v)).collect()
    };
    Outcome { code, stdout, stderr }
}
