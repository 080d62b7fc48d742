//! Command-line surface: argument grammar, dispatch and report rendering.

use std::ffi::OsString;
use std::path::Path;

use clap::{Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::datum::{parse_datum, validate_datum, SphericalDatum};
use crate::engine::{
    beta, bw, constant_c, eisenstein_factors, lfactors, lfull, omega_at_delta,
    omega_schur, omega_sum, plancherel_pairing, tamagawa_volume, triangularity_defects, volume,
    OmegaValue,
};
use crate::error::{Error, Result};
use crate::exact::lattice::{self, IVec};
use crate::exact::qrat::{fmt_qrat, parse_qrat, to_i64};
use crate::exact::{QRat, TPoly, TRat, TorusRational};
use crate::fixtures::{
    antidominant_box, datum_source, get_fixture, list_fixtures, list_paths, load_path,
    regression_suite, statement_suite, SuiteReport,
};
use crate::padic::{verify_case, OracleParams, DEFAULT_TOLERANCE};
use crate::par::Exec;
use crate::rankone::{backtick_b, compose_path, fe_coefficient, parse_path, path_element, FeCase};
use crate::roots::RootSystem;

pub const DEFAULT_PREC: i64 = 24;

/// Points drawn by the seeded battery of `examples --run`.
pub const BATTERY_POINTS: usize = 4;

#[derive(Debug, Parser)]
#[command(
    name = "sphericalis",
    version,
    about = "Exact unramified spherical functions on spherical varieties"
)]
pub struct Cli {
    /// Emit the report as JSON.
    #[arg(long, global = true)]
    pub json: bool,
    /// t-adic truncation order for series output.
    #[arg(long, global = true, default_value_t = DEFAULT_PREC)]
    pub prec: i64,
    /// Seed for randomized property batteries.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum FormArg {
    Sum,
    Schur,
    Both,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run the datum axiom checks.
    Validate { datum: String },
    /// Ω_λ̌ in the W_X-sum form, the Schur form, or both.
    Omega {
        datum: String,
        /// λ̌ in undoubled coordinates, e.g. -1,1/2.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
        lambda: Vec<String>,
        #[arg(long, value_enum, default_value_t = FormArg::Schur)]
        form: FormArg,
    },
    /// B_w for a word in the simple reflections of W_X.
    Bw {
        datum: String,
        /// Comma-separated simple reflection indices.
        #[arg(long, value_delimiter = ',')]
        word: Vec<usize>,
    },
    /// The constant c and L_X, expanded or factored.
    Lvalue {
        datum: String,
        /// Report the constant and factor multiset of L_X.
        #[arg(long)]
        factored: bool,
    },
    /// Vol(X(𝔬)) and optionally the Tamagawa-normalized volume.
    Volume {
        datum: String,
        /// Also report the Tamagawa-normalized volume.
        #[arg(long)]
        tamagawa: bool,
    },
    /// Plancherel pairings over the antidominant box with coordinates in [−lmax, 0].
    Plancherel {
        datum: String,
        /// Bound on the absolute value of each coordinate.
        #[arg(long, default_value_t = 1)]
        lmax: i64,
    },
    /// j_w, j̃_w and the F_w/T_w ratio for a word in the ambient Weyl group.
    Eisenstein {
        datum: String,
        /// Comma-separated simple reflection indices.
        #[arg(long, value_delimiter = ',')]
        word: Vec<usize>,
    },
    /// Compose the coefficients along an orbit path.
    Path { pathfile: String },
    /// Check a rank-one functional equation by p-adic integration.
    Oracle {
        /// Case tag such as t-nonsplit-unram, or a JSON case object.
        #[arg(long)]
        case: String,
        /// Odd residue characteristic.
        #[arg(long)]
        p: u64,
        /// Single character sample u instead of the default set.
        #[arg(long)]
        u: Option<String>,
        /// Relative error tolerance.
        #[arg(long)]
        tol: Option<f64>,
    },
    /// List the built-in fixtures or run their regression targets.
    Examples {
        name: Option<String>,
        /// Run the regression targets instead of listing.
        #[arg(long)]
        run: bool,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Ok,
    Fail,
    Error,
}

impl Status {
    pub fn exit_code(self) -> i32 {
        match self {
            Status::Ok => 0,
            Status::Fail => 1,
            Status::Error => 2,
        }
    }
}

/// Fields are declared in key order so the JSON form re-serializes byte-identically.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CliReport {
    pub command: String,
    pub diagnostics: Vec<String>,
    pub payload: Value,
    pub status: Status,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// Parses argv (program name first), dispatches and renders.
pub fn run<I, T>(argv: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            let code = if e.use_stderr() { 2 } else { 0 };
            return if code == 0 {
                Outcome {
                    code,
                    stdout: text,
                    stderr: String::new(),
                }
            } else {
                Outcome {
                    code,
                    stdout: String::new(),
                    stderr: text,
                }
            };
        }
    };
    let report = execute(&cli);
    let code = report.status.exit_code();
    Outcome {
        code,
        stdout: render(&report, cli.json),
        stderr: String::new(),
    }
}

pub fn render(report: &CliReport, as_json: bool) -> String {
    if as_json {
        let mut s = serde_json::to_string_pretty(report).expect("report serializes");
        s.push('\n');
        return s;
    }
    let mut out = format!("{}: {}\n", report.command, status_word(report.status));
    human(&report.payload, 1, &mut out);
    for d in &report.diagnostics {
        out.push_str(&format!("! {d}\n"));
    }
    out
}

fn status_word(s: Status) -> &'static str {
    match s {
        Status::Ok => "ok",
        Status::Fail => "FAIL",
        Status::Error => "ERROR",
    }
}

fn scalar(v: &Value) -> Option<String> {
    match v {
        Value::Null => Some("-".into()),
        Value::Bool(b) => Some(b.to_string()),
        Value::Number(n) => Some(n.to_string()),
        Value::String(s) => Some(s.clone()),
        Value::Object(m) if m.contains_key("display") => scalar(&m["display"]),
        Value::Array(a) if a.iter().all(|x| !x.is_array() && !x.is_object()) => Some(format!(
            "[{}]",
            a.iter()
                .map(|x| scalar(x).unwrap_or_default())
                .collect::<Vec<_>>()
                .join(", ")
        )),
        _ => None,
    }
}

fn human(v: &Value, depth: usize, out: &mut String) {
    let pad = "  ".repeat(depth);
    match v {
        Value::Object(m) => {
            for (k, x) in m {
                match scalar(x) {
                    Some(s) => out.push_str(&format!("{pad}{k}: {s}\n")),
                    None => {
                        out.push_str(&format!("{pad}{k}:\n"));
                        human(x, depth + 1, out);
                    }
                }
            }
        }
        Value::Array(a) => {
            for (i, x) in a.iter().enumerate() {
                match scalar(x) {
                    Some(s) => out.push_str(&format!("{pad}- {s}\n")),
                    None => {
                        out.push_str(&format!("{pad}[{i}]\n"));
                        human(x, depth + 1, out);
                    }
                }
            }
        }
        other => out.push_str(&format!("{pad}{}\n", scalar(other).unwrap_or_default())),
    }
}

struct Reply {
    status: Status,
    payload: Value,
    diagnostics: Vec<String>,
}

impl Reply {
    fn new(pass: bool, payload: Value) -> Self {
        Self {
            status: if pass { Status::Ok } else { Status::Fail },
            payload,
            diagnostics: Vec::new(),
        }
    }
}

pub fn execute(cli: &Cli) -> CliReport {
    let name = command_name(&cli.command);
    let mut notes = Vec::new();
    let outcome = dispatch(cli, &mut notes);
    let (status, payload, mut diagnostics) = match outcome {
        Ok(r) => (r.status, r.payload, r.diagnostics),
        Err(Error::Consistency(msg)) => (Status::Fail, Value::Null, vec![msg]),
        Err(e) => (Status::Error, Value::Null, vec![e.to_string()]),
    };
    notes.append(&mut diagnostics);
    CliReport {
        command: name.into(),
        diagnostics: notes,
        payload,
        status,
    }
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Validate { .. } => "validate",
        Command::Omega { .. } => "omega",
        Command::Bw { .. } => "bw",
        Command::Lvalue { .. } => "lvalue",
        Command::Volume { .. } => "volume",
        Command::Plancherel { .. } => "plancherel",
        Command::Eisenstein { .. } => "eisenstein",
        Command::Path { .. } => "path",
        Command::Oracle { .. } => "oracle",
        Command::Examples { .. } => "examples",
    }
}

fn dispatch(cli: &Cli, notes: &mut Vec<String>) -> Result<Reply> {
    match &cli.command {
        Command::Validate { datum } => cmd_validate(&load(datum, notes)?),
        Command::Omega {
            datum,
            lambda,
            form,
        } => cmd_omega(&load(datum, notes)?, lambda, *form),
        Command::Bw { datum, word } => cmd_bw(&load(datum, notes)?, word),
        Command::Lvalue { datum, factored } => cmd_lvalue(&load(datum, notes)?, *factored),
        Command::Volume { datum, tamagawa } => cmd_volume(&load(datum, notes)?, *tamagawa),
        Command::Plancherel { datum, lmax } => cmd_plancherel(&load(datum, notes)?, *lmax, cli.prec),
        Command::Eisenstein { datum, word } => cmd_eisenstein(&load(datum, notes)?, word),
        Command::Path { pathfile } => cmd_path(pathfile, notes),
        Command::Oracle { case, p, u, tol } => cmd_oracle(case, *p, u.as_deref(), *tol),
        Command::Examples { name, run } => cmd_examples(name.as_deref(), *run, cli.seed),
    }
}

/// A datum file, or a built-in fixture named by the argument or its file stem.
fn load(arg: &str, notes: &mut Vec<String>) -> Result<SphericalDatum> {
    let path = Path::new(arg);
    if path.is_file() {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Invalid(format!("cannot read {arg}: {e}")))?;
        return parse_datum(&text);
    }
    let stem = builtin_name(arg);
    let text = datum_source(&stem)
        .map_err(|_| Error::Invalid(format!("{arg} is neither a datum file nor a fixture")))?;
    if stem != arg {
        notes.push(format!("{arg} not found; using built-in fixture {stem}"));
    }
    parse_datum(text)
}

fn builtin_name(arg: &str) -> String {
    Path::new(arg)
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| arg.to_string())
}

fn rat_json(f: &TorusRational) -> Value {
    let (num, den) = f.to_parts();
    json!({
        "display": f.to_string(),
        "numerator": num,
        "denominator_factors": den,
    })
}

fn trat_json(x: &TRat) -> Value {
    Value::String(x.to_string())
}

fn cmd_validate(d: &SphericalDatum) -> Result<Reply> {
    let r = validate_datum(d);
    Ok(Reply::new(r.all_pass(), to_value(&r)?))
}

fn to_value<T: Serialize>(x: &T) -> Result<Value> {
    serde_json::to_value(x).map_err(|e| Error::Invalid(e.to_string()))
}

/// Undoubled rational coordinates to the doubled lattice.
pub fn parse_lambda(parts: &[String]) -> Result<IVec> {
    parts
        .iter()
        .map(|s| {
            let x = parse_qrat(s.trim())?;
            to_i64(&(x.clone() * QRat::from_integer(2.into()))).ok_or_else(|| {
                Error::Invalid(format!("coordinate {s} is not a half-integer"))
            })
        })
        .collect()
}

fn omega_json(v: &OmegaValue) -> Value {
    json!({
        "form": v.form_used,
        "prefactor_exp": v.prefactor_exp,
        "body": rat_json(&v.body),
        "value": rat_json(&v.value),
    })
}

fn cmd_omega(d: &SphericalDatum, lambda: &[String], form: FormArg) -> Result<Reply> {
    let l = parse_lambda(lambda)?;
    let mut payload = json!({ "datum": d.name(), "lambda_doubled": l });
    let mut pass = true;
    let sum = matches!(form, FormArg::Sum | FormArg::Both)
        .then(|| omega_sum(d, &l))
        .transpose()?;
    let schur = matches!(form, FormArg::Schur | FormArg::Both)
        .then(|| omega_schur(d, &l))
        .transpose()?;
    if let Some(s) = &sum {
        payload["sum"] = omega_json(s);
    }
    if let Some(s) = &schur {
        payload["schur"] = omega_json(s);
    }
    if let (Some(a), Some(b)) = (&sum, &schur) {
        let consistent = a.value == &beta(d)? * &b.value;
        payload["consistency"] = Value::Bool(consistent);
        pass = consistent;
    }
    Ok(Reply::new(pass, payload))
}

fn cmd_bw(d: &SphericalDatum, word: &[usize]) -> Result<Reply> {
    let rs = d.roots()?;
    if let Some(&bad) = word.iter().find(|&&i| i >= rs.rank()) {
        return Err(Error::Invalid(format!("simple reflection {bad} out of range")));
    }
    let w = rs.element_from_word(word)?;
    let value = bw(d, &w)?;
    Ok(Reply::new(
        true,
        json!({
            "datum": d.name(),
            "word": word,
            "reduced_word": w.reduced_word,
            "bw": rat_json(&value),
        }),
    ))
}

fn cmd_lvalue(d: &SphericalDatum, factored: bool) -> Result<Reply> {
    let mut payload = json!({
        "datum": d.name(),
        "c": trat_json(&constant_c(d)?),
    });
    if factored {
        let f = lfactors(d)?;
        payload["constant"] = trat_json(&f.constant);
        payload["factors"] = to_value(&f.factors)?;
        payload["modulo_zeta"] = to_value(&f.modulo_zeta())?;
    } else {
        payload["l_x"] = rat_json(&lfull(d)?);
    }
    Ok(Reply::new(true, payload))
}

fn cmd_volume(d: &SphericalDatum, tamagawa: bool) -> Result<Reply> {
    let mut payload = json!({
        "datum": d.name(),
        "volume": trat_json(&volume(d)?),
    });
    if tamagawa {
        payload["tamagawa"] = trat_json(&tamagawa_volume(d)?);
    }
    Ok(Reply::new(true, payload))
}

fn cmd_plancherel(d: &SphericalDatum, lmax: i64, prec: i64) -> Result<Reply> {
    if lmax < 0 {
        return Err(Error::Invalid(format!("lmax {lmax} is negative")));
    }
    let points = antidominant_box(d, lmax);
    let c = constant_c(d)?;
    let order = TPoly::int(d.weyl.len() as i64);
    let diagonal = &c * &TRat::from_poly(order);
    let pairs: Vec<(usize, usize)> = (0..points.len())
        .flat_map(|i| (i..points.len()).map(move |j| (i, j)))
        .collect();
    let results = Exec::default().map(&pairs, |&(i, j)| {
        plancherel_pairing(d, &points[j], &points[i], prec)
    });
    let mut rows = Vec::new();
    let mut failures = Vec::new();
    for (&(i, j), r) in pairs.iter().zip(results) {
        let v = r?;
        let (l, m) = (&points[j], &points[i]);
        let both_zero = lattice::is_zero(l) && lattice::is_zero(m);
        let ok = if both_zero {
            v.exact.as_ref() == Some(&diagonal)
        } else if lattice::is_zero(m) {
            v.exact.as_ref().is_some_and(|x| x.is_zero())
        } else if i != j {
            v.series.is_zero()
        } else {
            true
        };
        if !ok {
            failures.push(format!("pairing at {l:?}, {m:?}"));
        }
        rows.push(json!({
            "lambda": l,
            "mu": m,
            "series": v.series.to_string(),
            "exact": v.exact.as_ref().map(trat_json),
            "check": ok,
        }));
    }
    let mut reply = Reply::new(
        failures.is_empty(),
        json!({
            "datum": d.name(),
            "prec": prec,
            "expected_diagonal_at_zero": trat_json(&diagonal),
            "pairings": rows,
        }),
    );
    reply.diagnostics = failures;
    Ok(reply)
}

fn cmd_eisenstein(d: &SphericalDatum, word: &[usize]) -> Result<Reply> {
    let rs: &RootSystem = match &d.ambient {
        Some(a) => a,
        None => d.roots()?,
    };
    if let Some(&bad) = word.iter().find(|&&i| i >= rs.rank()) {
        return Err(Error::Invalid(format!("simple reflection {bad} out of range")));
    }
    let w = rs.element_from_word(word)?;
    let f = eisenstein_factors(rs, &w)?;
    Ok(Reply::new(
        true,
        json!({
            "datum": d.name(),
            "word": word,
            "reduced_word": w.reduced_word,
            "j_w": rat_json(&f.j_w),
            "j_tilde_w": rat_json(&f.j_tilde_w),
            "fw_tw_ratio": rat_json(&f.fw_tw_ratio),
        }),
    ))
}

fn cmd_path(arg: &str, notes: &mut Vec<String>) -> Result<Reply> {
    let path = if Path::new(arg).is_file() {
        let text = std::fs::read_to_string(arg)
            .map_err(|e| Error::Invalid(format!("cannot read {arg}: {e}")))?;
        parse_path(&text)?
    } else {
        let stem = builtin_name(arg);
        let p = load_path(&stem)
            .map_err(|_| Error::Invalid(format!("{arg} is neither a path file nor a fixture")))?;
        if stem != arg {
            notes.push(format!("{arg} not found; using built-in path {stem}"));
        }
        p
    };
    let ambient = RootSystem::from_cartan(&path.ambient)?;
    let w = path_element(&ambient, &path)?;
    let steps: Vec<Value> = path
        .steps
        .iter()
        .map(|s| {
            let alpha = ambient
                .simple_coroots
                .get(s.root_index)
                .ok_or_else(|| Error::Invalid(format!("root index {} out of range", s.root_index)))?;
            Ok(json!({
                "root_index": s.root_index,
                "case": s.case.tag(),
                "coefficient": fe_coefficient(&s.case, alpha).ok().map(|b| rat_json(&b)),
            }))
        })
        .collect::<Result<_>>()?;
    Ok(Reply::new(
        true,
        json!({
            "path": path.name,
            "word": w.reduced_word,
            "steps": steps,
            "b_w": rat_json(&compose_path(&ambient, &path)?),
            "backtick_b_w": rat_json(&backtick_b(&ambient, &path)?),
        }),
    ))
}

/// A case tag in any letter case, or a JSON object in the path-step schema.
pub fn parse_case(s: &str) -> Result<FeCase> {
    let s = s.trim();
    if s.starts_with('{') {
        return serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()));
    }
    let defaults = [
        FeCase::ULower,
        FeCase::URaise,
        FeCase::UPsi,
        FeCase::TSplitUnram {
            v_d: vec![-2, 0],
            k_d: 2,
            v_dp: vec![2, 2],
            k_dp: 0,
        },
        FeCase::TSplitRam { m: 1 },
        FeCase::TNonsplitUnram,
        FeCase::TNonsplitRam,
        FeCase::NNonintegral { ratio: "1".into() },
    ];
    defaults
        .into_iter()
        .find(|c| c.tag().eq_ignore_ascii_case(s))
        .ok_or_else(|| Error::Invalid(format!("case {s} has no oracle model")))
}

fn cmd_oracle(case: &str, p: u64, u: Option<&str>, tol: Option<f64>) -> Result<Reply> {
    let case = parse_case(case)?;
    let mut params = OracleParams::new(p, &case);
    if let Some(u) = u {
        params.samples = vec![parse_qrat(u)?];
    }
    let tol = tol.unwrap_or(DEFAULT_TOLERANCE);
    let report = verify_case(&case, &params, tol)?;
    let mut payload = to_value(&report)?;
    payload["tolerance"] = json!(tol);
    payload["grid"] = json!([params.m, params.n]);
    payload["u"] = json!(params.samples.iter().map(fmt_qrat).collect::<Vec<_>>());
    Ok(Reply::new(report.pass, payload))
}

fn cmd_examples(name: Option<&str>, run: bool, seed: Option<u64>) -> Result<Reply> {
    let names: Vec<String> = match name {
        Some(n) => {
            get_fixture(n)?;
            vec![n.to_string()]
        }
        None => list_fixtures().iter().map(|s| s.to_string()).collect(),
    };
    if !run {
        let listing: Vec<Value> = names
            .iter()
            .map(|n| {
                let fx = get_fixture(n)?;
                Ok(json!({
                    "name": n,
                    "rank": fx.datum.rank(),
                    "weyl_order": fx.datum.weyl.len(),
                    "targets": fx.expected.iter().map(|t| json!({
                        "name": t.name,
                        "citation": t.citation,
                    })).collect::<Vec<_>>(),
                    "paths": fx.paths.iter().map(|p| p.name.clone()).collect::<Vec<_>>(),
                }))
            })
            .collect::<Result<_>>()?;
        let mut payload = json!({ "fixtures": listing });
        if name.is_none() {
            payload["paths"] = json!(list_paths());
        }
        return Ok(Reply::new(true, payload));
    }
    let mut reports: Vec<SuiteReport> = names
        .iter()
        .map(|n| regression_suite(n))
        .collect::<Result<_>>()?;
    if name.is_none() {
        reports.push(statement_suite());
    }
    let mut pass = reports.iter().all(SuiteReport::all_pass);
    let mut diagnostics: Vec<String> = reports
        .iter()
        .flat_map(|r| {
            r.entries
                .iter()
                .filter(|e| !e.pass)
                .map(move |e| format!("{} / {}: {}", r.fixture, e.target, e.detail))
        })
        .collect();
    let mut payload = json!({ "suites": to_value(&reports)? });
    if let Some(seed) = seed {
        let battery = names
            .iter()
            .map(|n| random_battery(n, seed))
            .collect::<Result<Vec<_>>>()?;
        for b in &battery {
            if !b["pass"].as_bool().unwrap_or(false) {
                pass = false;
                diagnostics.push(format!("battery failed on {}", b["fixture"]));
            }
        }
        payload["battery"] = json!({ "seed": seed, "runs": battery });
    }
    let mut reply = Reply::new(pass, payload);
    reply.diagnostics = diagnostics;
    Ok(reply)
}

/// Consistency, pinning and triangularity at λ̌ drawn from the antidominant box.
pub fn random_battery(name: &str, seed: u64) -> Result<Value> {
    let d = get_fixture(name)?.datum;
    let pool = antidominant_box(&d, 3);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut picks: Vec<IVec> = (0..BATTERY_POINTS)
        .map(|_| pool[rng.random_range(0..pool.len())].clone())
        .collect();
    picks.sort();
    picks.dedup();
    let b = beta(&d)?;
    let checks = Exec::default().map(&picks, |l| -> Result<bool> {
        let schur = omega_schur(&d, l)?;
        let consistent = omega_sum(&d, l)?.value == &b * &schur.value;
        let pinned = d.doc.twisted || omega_at_delta(&d, l)? == TRat::one();
        let triangular = triangularity_defects(&d, l)?.is_empty();
        Ok(consistent && pinned && triangular)
    });
    let checks = checks.into_iter().collect::<Result<Vec<_>>>()?;
    Ok(json!({
        "fixture": name,
        "points": picks,
        "pass": checks.iter().all(|&c| c),
    }))
}
