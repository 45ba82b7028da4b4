//! Command-line front end. [`run`] parses arguments, executes one subcommand
//! and returns the process exit code:
//!
//! | code | meaning |
//! |------|---------|
//! | 0 | every condition or suite rule passed |
//! | 1 | a condition or estimate failed |
//! | 2 | input error (file, schema, flags) |
//! | 3 | numerical indeterminacy |
//!
//! Payloads are deterministic. Timing goes to stderr only.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::elliptic::{check_epsilon, direction_grid, full_check, interior_margin_with, CheckConfig, EllipticityReport};
use crate::error::PencilError;
use crate::estimate_lab::{
    apriori_ratio, eps_apriori, parametrix_p0, wholespace_ratio, BoundaryDataSpec, Profile, RatioTable,
};
use crate::halfline::{deriv_l2_norm, estimate_table, fundamental_solution};
use crate::newton::{NewtonPolygon, WeightSpec};
use crate::problem::{Form, Problem};
use crate::quadrature::GridConfig;
use crate::symbols::validate_problem;
use crate::Verdict;

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_INDETERMINATE: i32 = 3;

/// Environment variable capping the worker-thread count.
pub const THREADS_ENV: &str = "PENCIL_LAB_THREADS";

#[derive(Debug, Parser)]
#[command(name = "pencil-lab", version, about = "Ellipticity checks and estimate verification for operator pencils")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Structural and index validation of a problem file.
    Validate {
        path: PathBuf,
        /// Write the JSON report here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Conditions a) to d), plus the ε endpoint for ε-form files.
    Check {
        path: PathBuf,
        #[arg(long)]
        grid: Option<usize>,
        #[arg(long)]
        pole_cutoff: Option<f64>,
        /// Print the full JSON report.
        #[arg(long)]
        json: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Fundamental solution `w_j` of the half-line model problem.
    SolveModel {
        path: PathBuf,
        /// Tangential frequency, comma separated.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
        xi: Vec<f64>,
        #[arg(long)]
        lambda: f64,
        /// 1-based boundary operator index.
        #[arg(long)]
        j: usize,
        #[arg(long)]
        json: bool,
    },
    /// Numerical verification suites.
    Verify {
        path: PathBuf,
        #[arg(long, value_enum)]
        suite: Suite,
        /// Parameter ladder (λ, or ε for the eps suite), comma separated.
        #[arg(long, value_delimiter = ',')]
        ladder: Option<Vec<f64>>,
        /// Write the result table as CSV.
        #[arg(long)]
        csv: Option<PathBuf>,
        #[arg(long)]
        json: bool,
        #[arg(long)]
        grid: Option<usize>,
    },
    /// Vertices and lattice points of the Newton polygon.
    Polygon {
        #[arg(long, allow_hyphen_values = true)]
        r: i64,
        #[arg(long, allow_hyphen_values = true)]
        s: i64,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Ode,
    Apriori,
    Wholespace,
    Parametrix,
    Eps,
}

/// Provenance block embedded in every payload.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunManifest {
    pub command: String,
    /// SHA-256 of the canonical problem and effective configuration.
    pub config_hash: String,
    pub seed: u64,
    pub version: String,
}

impl RunManifest {
    fn new(command: &str, config: &Value) -> Self {
        let mut h = Sha256::new();
        h.update(command.as_bytes());
        h.update(config.to_string().as_bytes());
        let digest = h.finalize();
        RunManifest {
            command: command.to_string(),
            config_hash: digest.iter().map(|b| format!("{b:02x}")).collect(),
            seed: 0,
            version: env!("CARGO_PKG_VERSION").to_string(),
        }
    }
}

fn exit_for(v: Verdict) -> i32 {
    match v {
        Verdict::Pass => EXIT_PASS,
        Verdict::Fail => EXIT_FAIL,
        Verdict::Indeterminate => EXIT_INDETERMINATE,
    }
}

fn exit_for_error(e: &PencilError) -> i32 {
    match e {
        PencilError::Input(_) => EXIT_INPUT,
        e if e.is_structural() => EXIT_FAIL,
        _ => EXIT_INDETERMINATE,
    }
}

struct Io<'a> {
    out: &'a mut dyn Write,
    err: &'a mut dyn Write,
}

impl Io<'_> {
    fn emit(&mut self, text: &str, file: Option<&Path>) -> std::result::Result<(), i32> {
        match file {
            Some(p) => std::fs::write(p, text.as_bytes()).map_err(|e| {
                let _ = writeln!(self.err, "error: cannot write {}: {e}", p.display());
                EXIT_INPUT
            }),
            None => {
                let _ = writeln!(self.out, "{text}");
                Ok(())
            }
        }
    }

    fn fail(&mut self, code: i32, msg: impl std::fmt::Display) -> i32 {
        let _ = writeln!(self.err, "error: {msg}");
        code
    }
}

fn pretty(v: &Value) -> String {
    serde_json::to_string_pretty(v).unwrap_or_else(|_| v.to_string())
}

fn configure_threads() {
    if let Some(n) = std::env::var(THREADS_ENV).ok().and_then(|v| v.parse::<usize>().ok()) {
        if n > 0 {
            // a pool may already exist when called twice in one process
            let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
        }
    }
}

/// Entry point used by the binary; returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_PASS };
            let text = e.render().to_string();
            if e.use_stderr() {
                let _ = write!(err, "{text}");
            } else {
                let _ = write!(out, "{text}");
            }
            return code;
        }
    };
    configure_threads();
    let mut io = Io { out, err };
    let start = Instant::now();
    let code = match cli.command {
        Command::Validate { path, out } => cmd_validate(&mut io, &path, out.as_deref()),
        Command::Check {
            path,
            grid,
            pole_cutoff,
            json,
            out,
        } => cmd_check(&mut io, &path, grid, pole_cutoff, json, out.as_deref()),
        Command::SolveModel {
            path,
            xi,
            lambda,
            j,
            json,
        } => cmd_solve_model(&mut io, &path, &xi, lambda, j, json),
        Command::Verify {
            path,
            suite,
            ladder,
            csv,
            json,
            grid,
        } => cmd_verify(&mut io, &path, suite, ladder, csv.as_deref(), json, grid),
        Command::Polygon { r, s, json } => cmd_polygon(&mut io, r, s, json),
    };
    let _ = writeln!(io.err, "elapsed: {:.3} s", start.elapsed().as_secs_f64());
    code
}

fn load(io: &mut Io, path: &Path) -> std::result::Result<Problem, i32> {
    Problem::from_path(path).map_err(|e| io.fail(EXIT_INPUT, format!("{}: {e}", path.display())))
}

fn problem_value(p: &Problem) -> Value {
    serde_json::to_value(p.to_file()).unwrap_or(Value::Null)
}

fn check_config(p: &Problem, grid: Option<usize>, pole_cutoff: Option<f64>) -> CheckConfig {
    let d = CheckConfig::default();
    let o = &p.overrides;
    CheckConfig {
        grid_n: grid.or(o.grid).unwrap_or(d.grid_n),
        pole_cutoff: pole_cutoff.or(o.pole_cutoff).unwrap_or(d.pole_cutoff),
        margin_floor: o.margin_floor.unwrap_or(d.margin_floor),
        det_floor: o.det_floor.unwrap_or(d.det_floor),
        ..d
    }
}

fn grid_config(p: &Problem) -> GridConfig {
    let d = GridConfig::default();
    let o = &p.overrides;
    GridConfig {
        radial: o.radial_nodes.unwrap_or(d.radial),
        angular: o.angular_nodes.unwrap_or(d.angular),
        truncation_factor: o.truncation_factor.unwrap_or(d.truncation_factor),
        ..d
    }
}

fn cmd_validate(io: &mut Io, path: &Path, out: Option<&Path>) -> i32 {
    let p = match load(io, path) {
        Ok(p) => p,
        Err(c) => return c,
    };
    let report = validate_problem(&p.pencil, &p.boundary, p.r, p.s);
    let ok = report.mandatory_ok();
    let manifest = RunManifest::new("validate", &problem_value(&p));
    let payload = json!({
        "manifest": manifest,
        "mandatory_ok": ok,
        "necessity_ok": report.necessity_ok(),
        "report": report,
    });
    for f in report.failures() {
        let _ = writeln!(io.err, "rule {} failed: {}", f.rule, f.detail);
    }
    if let Err(c) = io.emit(&pretty(&payload), out) {
        return c;
    }
    if ok {
        EXIT_PASS
    } else {
        EXIT_FAIL
    }
}

/// Rejects problems whose mandatory rules fail; those cannot be checked.
fn require_valid(io: &mut Io, p: &Problem) -> std::result::Result<(), i32> {
    let report = validate_problem(&p.pencil, &p.boundary, p.r, p.s);
    if report.mandatory_ok() {
        return Ok(());
    }
    let names: Vec<String> = report.failures().map(|f| format!("{} ({})", f.rule, f.detail)).collect();
    Err(io.fail(EXIT_INPUT, format!("problem fails validation: {}", names.join("; "))))
}

fn run_check(p: &Problem, cfg: &CheckConfig) -> crate::Result<EllipticityReport> {
    match p.form {
        Form::Lambda => Ok(full_check(&p.pencil, &p.boundary, cfg)),
        Form::Epsilon => check_epsilon(&p.epsilon_pencil(), &p.boundary, cfg),
    }
}

fn check_summary(rep: &EllipticityReport) -> String {
    let mut lines = vec![
        format!("condition a: {} (margin {:.6})", rep.condition_a.verdict, rep.condition_a.margin),
        format!(
            "regular degeneration: {} ({:?} of {} upper roots)",
            rep.regular_degeneration.verdict, rep.regular_degeneration.upper_count, rep.regular_degeneration.expected
        ),
        format!(
            "condition b: {} (min |det| {:.6e})",
            rep.condition_b.report.verdict, rep.condition_b.report.min_abs_det
        ),
        format!("condition c: {} (min |det| {:.6e})", rep.condition_c.verdict, rep.condition_c.min_abs_det),
        format!("condition d: {} (|det| {:.6e})", rep.condition_d.verdict, rep.condition_d.min_abs_det),
    ];
    if let Some(e) = &rep.epsilon_endpoint {
        lines.push(format!("epsilon endpoint: {} (min |det| {:.6e})", e.verdict, e.min_abs_det));
    }
    lines.push(format!("overall: {}", rep.overall));
    lines.join("\n")
}

fn cmd_check(
    io: &mut Io,
    path: &Path,
    grid: Option<usize>,
    pole_cutoff: Option<f64>,
    json_out: bool,
    out: Option<&Path>,
) -> i32 {
    let p = match load(io, path) {
        Ok(p) => p,
        Err(c) => return c,
    };
    if let Err(c) = require_valid(io, &p) {
        return c;
    }
    let cfg = check_config(&p, grid, pole_cutoff);
    let rep = match run_check(&p, &cfg) {
        Ok(r) => r,
        Err(e) => return io.fail(exit_for_error(&e), e),
    };
    let manifest = RunManifest::new("check", &json!({"problem": problem_value(&p), "config": cfg}));
    let text = if json_out || out.is_some() {
        pretty(&json!({"manifest": manifest, "config": cfg, "report": rep}))
    } else {
        check_summary(&rep)
    };
    if let Err(c) = io.emit(&text, out) {
        return c;
    }
    exit_for(rep.overall)
}

fn cmd_solve_model(io: &mut Io, path: &Path, xi: &[f64], lambda: f64, j: usize, json_out: bool) -> i32 {
    let p = match load(io, path) {
        Ok(p) => p,
        Err(c) => return c,
    };
    if let Err(c) = require_valid(io, &p) {
        return c;
    }
    if j == 0 || j > p.boundary.len() {
        return io.fail(EXIT_INPUT, format!("j = {j} is out of range 1..={}", p.boundary.len()));
    }
    if xi.len() + 1 != p.pencil.dim() {
        return io.fail(
            EXIT_INPUT,
            format!("--xi needs {} components, got {}", p.pencil.dim() - 1, xi.len()),
        );
    }
    let w = match fundamental_solution(&p.pencil, &p.boundary, xi, lambda, j) {
        Ok(w) => w,
        Err(PencilError::Input(msg)) => return io.fail(EXIT_INPUT, msg),
        Err(e) => return io.fail(EXIT_INDETERMINATE, format!("degenerate point: {e}")),
    };
    let norms: Vec<f64> = (0..=p.r.max(0) as usize).map(|l| deriv_l2_norm(&w, l)).collect();
    let manifest = RunManifest::new(
        "solve-model",
        &json!({"problem": problem_value(&p), "xi": xi, "lambda": lambda, "j": j}),
    );
    let text = if json_out {
        pretty(&json!({"manifest": manifest, "j": j, "solution": w, "derivative_norms": norms}))
    } else {
        let mut lines = vec![format!("w_{j} at xi' = {xi:?}, lambda = {lambda}")];
        for t in &w.terms {
            let coeffs: Vec<String> = t.coeffs.iter().map(fmt_c).collect();
            lines.push(format!("root {}: coefficients of t^q: [{}]", fmt_c(&t.root), coeffs.join(", ")));
        }
        lines.push(format!("boundary residual: {:.3e}", w.boundary_residual));
        lines.push(format!("condition: {:.3e}", w.condition));
        for (l, n) in norms.iter().enumerate() {
            lines.push(format!("||D_t^{l} w|| = {n:.12e}"));
        }
        lines.join("\n")
    };
    let _ = io.emit(&text, None);
    EXIT_PASS
}

fn fmt_c(z: &Complex64) -> String {
    format!("{:.12}{:+.12}i", z.re + 0.0, z.im + 0.0)
}

fn cmd_polygon(io: &mut Io, r: i64, s: i64, json_out: bool) -> i32 {
    let poly = match NewtonPolygon::new(r, s) {
        Ok(p) => p,
        Err(e) => return io.fail(EXIT_INPUT, e),
    };
    let text = if json_out {
        let manifest = RunManifest::new("polygon", &json!({"r": r, "s": s}));
        pretty(&json!({"manifest": manifest, "polygon": poly.to_json(), "card": poly.card()}))
    } else {
        format!(
            "vertices: {:?}\npoints ({}): {:?}",
            poly.vertices,
            poly.card(),
            poly.points
        )
    };
    let _ = io.emit(&text, None);
    EXIT_PASS
}

/// Outcome of one verification suite.
#[derive(Debug, Serialize)]
struct SuiteOutcome {
    verdict: Verdict,
    notes: Vec<String>,
    /// Exported as CSV with `--csv`.
    #[serde(skip)]
    csv: String,
    data: Value,
}

fn default_ladder(suite: Suite) -> Vec<f64> {
    match suite {
        Suite::Ode => vec![0.0, 1.0, 10.0, 100.0, 1e3, 1e4],
        Suite::Apriori => vec![1.0, 10.0, 100.0, 1e3],
        Suite::Wholespace => vec![0.0, 1.0, 10.0, 100.0],
        Suite::Parametrix => vec![1.0, 10.0, 100.0],
        Suite::Eps => vec![1.0, 0.1, 0.01],
    }
}

/// Slack allowed on top of `1/margin` for the whole-space table.
pub const WHOLESPACE_SLACK: f64 = 0.05;
/// Allowed change of the largest ODE ratio between the last two ladder values.
pub const ODE_STABILITY: f64 = 0.10;
/// Agreement required between the two ε routes.
pub const EPS_ROUTE_TOL: f64 = 1e-10;

/// One table per boundary operator, each with data on that operator only.
fn tables_outcome(tables: &[RatioTable], mut notes: Vec<String>) -> crate::Result<SuiteOutcome> {
    let mut verdict = Verdict::Pass;
    for t in tables {
        verdict = verdict.and(t.stability_verdict());
        notes.push(format!(
            "{}: ratios in [{:.6}, {:.6}], variation {:.4}",
            t.label,
            t.min_ratio(),
            t.max_ratio(),
            t.variation()
        ));
        if let (Some(a), Some(b)) = (t.rows.first(), t.rows.last()) {
            notes.push(format!("{}: trend ratio(last)/ratio(first) = {:.4}", t.label, b.ratio / a.ratio));
        }
    }
    Ok(SuiteOutcome {
        verdict,
        notes,
        csv: tables_csv(tables)?,
        data: serde_json::to_value(tables).unwrap_or(Value::Null),
    })
}

/// Concatenated CSV with a leading `table` column.
fn tables_csv(tables: &[RatioTable]) -> crate::Result<String> {
    let mut csv = String::new();
    for (k, t) in tables.iter().enumerate() {
        for (i, line) in t.to_csv()?.lines().enumerate() {
            if i == 0 && k > 0 {
                continue;
            }
            let first = if i == 0 { "table" } else { t.label.as_str() };
            csv.push_str(&format!("{first},{line}\n"));
        }
    }
    Ok(csv)
}

fn per_operator<F>(m: usize, mut f: F) -> crate::Result<Vec<RatioTable>>
where
    F: FnMut(&BoundaryDataSpec) -> crate::Result<RatioTable>,
{
    (1..=m)
        .map(|j| {
            let mut t = f(&BoundaryDataSpec::default_for(m, &[j]))?;
            t.label = format!("{} g{j}", t.label);
            Ok(t)
        })
        .collect()
}

fn weights(p: &Problem) -> WeightSpec {
    WeightSpec::new(p.r as f64, p.s as f64)
}

fn run_suite(p: &Problem, suite: Suite, ladder: &[f64], cfg: &CheckConfig) -> crate::Result<SuiteOutcome> {
    let grid = grid_config(p);
    let w = weights(p);
    let m = p.pencil.m();
    match suite {
        Suite::Ode => {
            let dirs = direction_grid(p.pencil.dim() - 1, 8);
            let table = estimate_table(&p.pencil, &p.boundary, &dirs, ladder, p.r.max(0) as usize)?;
            let mut verdict = Verdict::from_bool(table.all_finite());
            let mut notes = vec![format!("max ratio {:.6}", table.max_ratio())];
            if ladder.len() >= 2 {
                let a = table.max_ratio_at(ladder[ladder.len() - 2]);
                let b = table.max_ratio_at(ladder[ladder.len() - 1]);
                let change = (b - a).abs() / a;
                notes.push(format!("relative change of the max ratio over the last two columns {change:.4}"));
                verdict = verdict.and(Verdict::from_bool(change <= ODE_STABILITY));
            }
            Ok(SuiteOutcome {
                verdict,
                notes,
                csv: table.to_csv()?,
                data: serde_json::to_value(&table).unwrap_or(Value::Null),
            })
        }
        Suite::Apriori => {
            let tables = per_operator(m, |data| apriori_ratio(&p.pencil, &p.boundary, &w, data, ladder, &grid))?;
            tables_outcome(&tables, Vec::new())
        }
        Suite::Wholespace => {
            let margin = interior_margin_with(&p.pencil, cfg).margin;
            let bound = 1.0 / margin + WHOLESPACE_SLACK;
            let mut tables = Vec::new();
            let mut notes = Vec::new();
            let mut verdict = Verdict::Pass;
            for sigma in [1.0, 4.0] {
                let mut t = wholespace_ratio(&p.pencil, &w, &[Profile::gaussian(sigma)], ladder, &grid)?;
                t.label = format!("wholespace sigma={sigma}");
                verdict = verdict.and(Verdict::from_bool(t.all_finite() && t.max_ratio() <= bound));
                notes.push(format!("{}: max ratio {:.6} against bound {bound:.6}", t.label, t.max_ratio()));
                tables.push(t);
            }
            Ok(SuiteOutcome {
                verdict,
                notes,
                csv: tables_csv(&tables)?,
                data: serde_json::to_value(&tables).unwrap_or(Value::Null),
            })
        }
        Suite::Parametrix => {
            let f = Profile::gaussian(3.0);
            let mut reports = Vec::new();
            let mut verdict = Verdict::Pass;
            let mut csv = String::from("lambda,boundedness_ratio,residual_ratio,identity_defect,bound\n");
            for &lam in ladder {
                let rep = parametrix_p0(&p.pencil, &w, &f, lam, &grid)?;
                let ok = rep.boundedness_ratio <= rep.bound
                    && rep.residual_ratio.is_finite()
                    && rep.identity_defect <= 1e-10;
                verdict = verdict.and(Verdict::from_bool(ok));
                csv.push_str(&format!(
                    "{},{},{},{},{}\n",
                    rep.lambda, rep.boundedness_ratio, rep.residual_ratio, rep.identity_defect, rep.bound
                ));
                reports.push(rep);
            }
            Ok(SuiteOutcome {
                verdict,
                notes: Vec::new(),
                csv,
                data: serde_json::to_value(&reports).unwrap_or(Value::Null),
            })
        }
        Suite::Eps => {
            let pe = p.epsilon_pencil();
            let te = per_operator(m, |data| eps_apriori(&pe, &p.boundary, &w, data, ladder, &grid))?;
            let lambdas: Vec<f64> = ladder.iter().map(|e| 1.0 / e).collect();
            let tl = per_operator(m, |data| apriori_ratio(&p.pencil, &p.boundary, &w, data, &lambdas, &grid))?;
            let gap = te
                .iter()
                .zip(&tl)
                .flat_map(|(a, b)| a.rows.iter().zip(&b.rows))
                .map(|(a, b)| (a.ratio - b.ratio).abs() / b.ratio)
                .fold(0.0, f64::max);
            let mut out = tables_outcome(&te, vec![format!("largest relative gap to the λ-form route {gap:.3e}")])?;
            out.verdict = out.verdict.and(Verdict::from_bool(gap <= EPS_ROUTE_TOL));
            Ok(out)
        }
    }
}

#[allow(clippy::too_many_arguments)]
fn cmd_verify(
    io: &mut Io,
    path: &Path,
    suite: Suite,
    ladder: Option<Vec<f64>>,
    csv: Option<&Path>,
    json_out: bool,
    grid: Option<usize>,
) -> i32 {
    let p = match load(io, path) {
        Ok(p) => p,
        Err(c) => return c,
    };
    if let Err(c) = require_valid(io, &p) {
        return c;
    }
    let ladder = ladder.unwrap_or_else(|| default_ladder(suite));
    if ladder.is_empty() || ladder.iter().any(|v| !v.is_finite() || *v < 0.0) {
        return io.fail(EXIT_INPUT, "ladder values must be finite and non-negative");
    }
    if suite == Suite::Eps && ladder.iter().any(|&e| e <= 0.0) {
        return io.fail(EXIT_INPUT, "ε values must be positive");
    }
    let cfg = check_config(&p, grid, None);
    let check = match suite {
        Suite::Eps => check_epsilon(&p.epsilon_pencil(), &p.boundary, &cfg),
        _ => Ok(full_check(&p.pencil, &p.boundary, &cfg)),
    };
    let check = match check {
        Ok(c) => c,
        Err(e) => return io.fail(exit_for_error(&e), e),
    };
    let [a, b, c, d] = check.verdicts();
    let interior = a.and(b);
    if interior != Verdict::Pass {
        let _ = writeln!(io.err, "{}", check_summary(&check));
        return io.fail(exit_for(interior), "condition a) or b) does not hold; suite not run");
    }
    let control = !c.and(d).and(check.overall).is_pass();
    if control {
        let _ = writeln!(io.err, "conditions c)/d) do not hold; running the suite as a negative control");
    }
    let outcome = match run_suite(&p, suite, &ladder, &cfg) {
        Ok(o) => o,
        Err(e) => return io.fail(exit_for_error(&e).max(EXIT_INDETERMINATE), e),
    };
    if let Some(path) = csv {
        if let Err(c) = io.emit(&outcome.csv, Some(path)) {
            return c;
        }
    }
    let manifest = RunManifest::new(
        "verify",
        &json!({"problem": problem_value(&p), "suite": suite, "ladder": ladder, "config": cfg, "grid": grid_config(&p)}),
    );
    let text = if json_out {
        pretty(&json!({
            "manifest": manifest,
            "suite": suite,
            "negative_control": control,
            "outcome": outcome,
        }))
    } else {
        let mut lines = vec![format!("suite {}: {}", suite.to_possible_value().map(|v| v.get_name().to_owned()).unwrap_or_default(), outcome.verdict)];
        lines.extend(outcome.notes.iter().cloned());
        if control {
            lines.push("negative control: conditions c)/d) fail".into());
        }
        lines.join("\n")
    };
    let _ = io.emit(&text, None);
    if control {
        EXIT_FAIL
    } else {
        exit_for(outcome.verdict)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_args(args: &[&str]) -> (i32, String, String) {
        let (mut out, mut err) = (Vec::new(), Vec::new());
        let code = run(std::iter::once("pencil-lab").chain(args.iter().copied()), &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn polygon_counts_and_errors() {
        let (code, out, _) = run_args(&["polygon", "--r", "4", "--s", "1", "--json"]);
        assert_eq!(code, 0);
        let v: Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["card"], 14);
        let (code, out, _) = run_args(&["polygon", "--r", "1", "--s", "0", "--json"]);
        assert_eq!(code, 0);
        assert!(out.contains("\"card\": 3"));
        assert_eq!(run_args(&["polygon", "--r", "2", "--s", "2"]).0, EXIT_INPUT);
    }

    #[test]
    fn unknown_flag_is_input_error() {
        assert_eq!(run_args(&["check", "x.json", "--bogus"]).0, EXIT_INPUT);
    }

    #[test]
    fn manifest_hash_is_stable() {
        let a = RunManifest::new("check", &json!({"k": 1}));
        let b = RunManifest::new("check", &json!({"k": 1}));
        assert_eq!(a, b);
        assert_eq!(a.config_hash.len(), 64);
        assert_ne!(a.config_hash, RunManifest::new("verify", &json!({"k": 1})).config_hash);
    }
}
