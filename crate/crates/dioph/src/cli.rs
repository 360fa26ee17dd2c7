//! Command-line front end: argument parsing, artifact writing and replay.

use std::fs;
use std::path::{Path, PathBuf};
use std::time::{Instant, SystemTime, UNIX_EPOCH};

use clap::{Parser, Subcommand, ValueEnum};
use dioph_core::constructors::construct;
use dioph_core::exponents::{estimate_chi, estimate_omega, lambda1_profile, uniform_chi_check, verify_witness, ChiMethod, Schedule};
use dioph_core::source::DEFAULT_BUDGET_BITS;
use dioph_core::variety::{
    denominator_bound_check, exclusion_certificate, rational_point_search, variety_approx_scan, within_threshold, Interval,
    RatBox, ScanConfig, ScanMode,
};
use dioph_core::{Error, Int, Precision, Rat, RealSource};
use serde::{Deserialize, Serialize};

use crate::exec::Pool;
use crate::format::{self, EstimateDoc, FormatError, PlanDoc, PolyDoc, ScanDoc, ScanRecord, SourceDoc};

pub const EXIT_OK: i32 = 0;
pub const EXIT_IO: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_COST_GUARD: i32 = 3;
pub const EXIT_VERIFICATION: i32 = 4;
pub const EXIT_INDETERMINATE: i32 = 5;

/// Smallest accepted `--budget`.
pub const MIN_BUDGET_BITS: u64 = 64;

pub const MANIFEST: &str = "manifest.json";

#[derive(Parser, Debug, Clone, Serialize)]
#[command(name = "dioph", version, about = "Certified Diophantine approximation experiments")]
pub struct RunConfig {
    #[command(subcommand)]
    pub command: Command,

    /// Directory for result files and the manifest.
    #[arg(long, global = true, default_value = "out")]
    pub out: PathBuf,

    /// Precision budget in bits for certified comparisons.
    #[arg(long, global = true, env = "DIOPH_BUDGET_BITS", default_value_t = DEFAULT_BUDGET_BITS)]
    pub budget: u64,

    /// Worker threads; 0 uses every core.
    #[arg(long, global = true, default_value_t = 0)]
    pub threads: usize,

    /// Overrides the salt of a construction plan.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
}

#[derive(Subcommand, Debug, Clone, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    /// Build sources from a plan; writes source JSON and a trace CSV.
    Construct {
        #[arg(long)]
        plan: PathBuf,
        /// Overrides the plan's depth.
        #[arg(long)]
        depth: Option<usize>,
    },
    /// Estimate an exponent; writes estimate JSON with witnesses and a CSV.
    Estimate(EstimateArgs),
    /// Scan for rational points near a variety; writes a scan CSV.
    Variety(VarietyArgs),
    /// Replay the witnesses and certificates stored in a result directory.
    Verify { dir: PathBuf },
}

#[derive(clap::Args, Debug, Clone, Serialize)]
pub struct EstimateArgs {
    #[arg(long, value_enum)]
    pub exponent: ExponentArg,

    #[arg(long, num_args = 1.., required = true)]
    pub sources: Vec<PathBuf>,

    /// Largest window; required except for `lambda1`.
    #[arg(long)]
    pub xmax: Option<String>,

    /// Geometric window ratio; the default schedule doubles from 8.
    #[arg(long)]
    pub ratio: Option<String>,

    /// First window of a geometric schedule.
    #[arg(long, default_value = "8")]
    pub start: String,

    /// Also place a window at every convergent denominator.
    #[arg(long)]
    pub convergents: bool,

    #[arg(long, value_enum, default_value_t = MethodArg::Candidates)]
    pub method: MethodArg,

    /// Convergents listed by `lambda1`.
    #[arg(long, default_value_t = 20)]
    pub depth: usize,

    /// `lambda1` rows start once `log2 s_n` reaches this.
    #[arg(long, default_value_t = 0)]
    pub min_bits: u64,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExponentArg {
    Omega,
    Chi,
    Uniform,
    Lambda1,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum MethodArg {
    Brute,
    Candidates,
    Both,
}

impl From<MethodArg> for ChiMethod {
    fn from(m: MethodArg) -> Self {
        match m {
            MethodArg::Brute => ChiMethod::BruteForce,
            MethodArg::Candidates => ChiMethod::ConvergentCandidates,
            MethodArg::Both => ChiMethod::Both,
        }
    }
}

#[derive(clap::Args, Debug, Clone, Serialize)]
pub struct VarietyArgs {
    #[arg(long)]
    pub poly: PathBuf,

    /// Scan exponent, e.g. `2.5` or `5/2`.
    #[arg(long)]
    pub mu: String,

    #[arg(long)]
    pub xmax: u64,

    /// `lo hi` per coordinate, or a single pair used for every coordinate.
    #[arg(long = "box", num_args = 2.., required = true, allow_negative_numbers = true)]
    pub region: Vec<String>,

    /// Height bound of the rational point search.
    #[arg(long, default_value_t = 100)]
    pub height: u64,

    /// Independent denominators per coordinate.
    #[arg(long)]
    pub per_coordinate: bool,

    /// Hits this close to a known rational point are classed as near it.
    #[arg(long, default_value = "1/16")]
    pub near_radius: String,
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("{}: {source}", path.display())]
    Input { path: PathBuf, source: FormatError },
    #[error("{}: {source}", path.display())]
    Read { path: PathBuf, source: std::io::Error },
    #[error("{}: {source}", path.display())]
    Write { path: PathBuf, source: std::io::Error },
    #[error(transparent)]
    Core(#[from] Error),
    #[error("verification failed: {0}")]
    Verification(String),
}

impl From<FormatError> for CliError {
    fn from(e: FormatError) -> Self {
        match e {
            FormatError::Core(c) => CliError::Core(c),
            other => CliError::Config(other.to_string()),
        }
    }
}

pub fn core_exit_code(e: &Error) -> i32 {
    match e {
        Error::CostGuard { .. } | Error::Overflow(_) => EXIT_COST_GUARD,
        Error::Verification(_) | Error::BoundViolation(_) | Error::MethodDisagreement { .. } => EXIT_VERIFICATION,
        Error::Indeterminate { .. } | Error::StreamExhausted(_) => EXIT_INDETERMINATE,
        _ => EXIT_CONFIG,
    }
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) | CliError::Read { .. } => EXIT_CONFIG,
            CliError::Input { source: FormatError::Core(e), .. } | CliError::Core(e) => core_exit_code(e),
            CliError::Input { .. } => EXIT_CONFIG,
            CliError::Write { .. } => EXIT_IO,
            CliError::Verification(_) => EXIT_VERIFICATION,
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

/// Config echo, tool version and timing, written beside the results.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Manifest {
    pub tool: String,
    pub version: String,
    pub command: String,
    pub config: serde_json::Value,
    pub outputs: Vec<String>,
    pub wall_time_seconds: f64,
    pub finished_unix_seconds: u64,
}

/// What a run produced.
#[derive(Debug, Clone, Default)]
pub struct Outcome {
    pub summary: Vec<String>,
    pub written: Vec<PathBuf>,
}

struct Artifacts {
    files: Vec<(String, Vec<u8>)>,
    summary: Vec<String>,
}

impl Artifacts {
    fn new() -> Self {
        Self {
            files: Vec::new(),
            summary: Vec::new(),
        }
    }

    fn add(&mut self, name: impl Into<String>, bytes: impl Into<Vec<u8>>) {
        self.files.push((name.into(), bytes.into()));
    }
}

/// Parses `std::env::args`, runs, prints and returns the exit status.
pub fn main() -> i32 {
    let config = match RunConfig::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_CONFIG } else { EXIT_OK };
        }
    };
    match run(&config) {
        Ok(outcome) => {
            for line in &outcome.summary {
                println!("{line}");
            }
            EXIT_OK
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

pub fn run(config: &RunConfig) -> CliResult<Outcome> {
    if config.budget < MIN_BUDGET_BITS {
        return Err(CliError::Config(format!("budget {} is below {MIN_BUDGET_BITS} bits", config.budget)));
    }
    let pool = Pool::new(config.threads).map_err(|e| CliError::Config(e.to_string()))?;
    let started = Instant::now();
    let (name, artifacts) = match &config.command {
        Command::Construct { plan, depth } => ("construct", run_construct(plan, *depth, config.seed)?),
        Command::Estimate(args) => ("estimate", run_estimate(args, config.budget, &pool)?),
        Command::Variety(args) => ("variety", run_variety(args, &pool)?),
        Command::Verify { dir } => {
            return Ok(Outcome {
                summary: verify_dir(dir)?,
                written: Vec::new(),
            })
        }
    };
    fs::create_dir_all(&config.out).map_err(|source| CliError::Write {
        path: config.out.clone(),
        source,
    })?;
    let mut written = Vec::new();
    for (file, bytes) in &artifacts.files {
        written.push(write_file(&config.out.join(file), bytes)?);
    }
    let manifest = Manifest {
        tool: env!("CARGO_PKG_NAME").into(),
        version: env!("CARGO_PKG_VERSION").into(),
        command: name.into(),
        config: serde_json::to_value(config).map_err(|e| CliError::Config(e.to_string()))?,
        outputs: artifacts.files.iter().map(|(f, _)| f.clone()).collect(),
        wall_time_seconds: started.elapsed().as_secs_f64(),
        finished_unix_seconds: SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0),
    };
    written.push(write_file(&config.out.join(MANIFEST), format::to_json(&manifest)?.as_bytes())?);
    Ok(Outcome {
        summary: artifacts.summary,
        written,
    })
}

fn write_file(path: &Path, bytes: &[u8]) -> CliResult<PathBuf> {
    fs::write(path, bytes).map_err(|source| CliError::Write {
        path: path.to_path_buf(),
        source,
    })?;
    Ok(path.to_path_buf())
}

fn read_text(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|source| CliError::Read {
        path: path.to_path_buf(),
        source,
    })
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> CliResult<T> {
    format::from_json(&read_text(path)?).map_err(|source| CliError::Input {
        path: path.to_path_buf(),
        source,
    })
}

fn load_source(path: &Path) -> CliResult<RealSource> {
    let doc: SourceDoc = read_json(path)?;
    doc.source().map_err(|source| CliError::Input {
        path: path.to_path_buf(),
        source,
    })
}

fn source_file(j: usize) -> String {
    format!("source-{j}.json")
}

fn csv_bytes(f: impl FnOnce(&mut Vec<u8>) -> format::Result<()>) -> CliResult<Vec<u8>> {
    let mut out = Vec::new();
    f(&mut out)?;
    Ok(out)
}

fn run_construct(plan_path: &Path, depth: Option<usize>, seed: Option<u64>) -> CliResult<Artifacts> {
    let doc: PlanDoc = read_json(plan_path)?;
    let plan = doc.plan(depth, seed).map_err(|source| CliError::Input {
        path: plan_path.to_path_buf(),
        source,
    })?;
    let built = construct(&plan)?;
    let mut out = Artifacts::new();
    out.add("plan.json", format::to_json(&PlanDoc::of(&plan))?);
    for (j, src) in built.sources.iter().enumerate() {
        out.add(source_file(j + 1), format::to_json(&SourceDoc::of(src))?);
    }
    out.add("trace.csv", csv_bytes(|w| format::write_trace_csv(w, &built.trace.rows))?);
    out.summary.push(format!(
        "constructed {} source(s) at depth {}, {} trace rows",
        built.sources.len(),
        plan.depth,
        built.trace.rows.len()
    ));
    Ok(out)
}

fn run_estimate(args: &EstimateArgs, budget: u64, pool: &Pool) -> CliResult<Artifacts> {
    let sources = args.sources.iter().map(|p| load_source(p)).collect::<CliResult<Vec<_>>>()?;
    let prec = Precision::with_budget(budget).covering(&sources);
    let doc = if args.exponent == ExponentArg::Lambda1 {
        let [src] = sources.as_slice() else {
            return Err(CliError::Config("lambda1 takes exactly one source".into()));
        };
        let est = lambda1_profile(src, args.depth, args.min_bits, prec)?;
        EstimateDoc::of(&est, &sources, prec.budget_bits)
    } else {
        let xmax = args.xmax.as_deref().ok_or_else(|| CliError::Config("--xmax is required".into()))?;
        let xmax = format::parse_int(xmax)?;
        let mut schedule = match &args.ratio {
            Some(r) => Schedule::geometric(&format::parse_int(&args.start)?, &format::parse_rat(r)?, &xmax)?,
            None => Schedule::default_for(&xmax)?,
        };
        if args.convergents {
            schedule = schedule.with_convergents(&sources, prec)?;
        }
        match args.exponent {
            ExponentArg::Omega => EstimateDoc::of(&estimate_omega(&sources, &schedule, prec, pool)?, &sources, prec.budget_bits),
            ExponentArg::Chi => EstimateDoc::of(
                &estimate_chi(&sources, &schedule, args.method.into(), prec, pool)?,
                &sources,
                prec.budget_bits,
            ),
            ExponentArg::Uniform => EstimateDoc::of_uniform(&uniform_chi_check(&sources, &xmax, prec, pool)?, &sources, prec.budget_bits),
            ExponentArg::Lambda1 => unreachable!("handled above"),
        }
    };
    let mut out = Artifacts::new();
    out.add("estimate.json", format::to_json(&doc)?);
    out.add("estimate.csv", csv_bytes(|w| format::write_estimate_csv(w, &doc))?);
    let witnesses = doc.windows.iter().filter(|w| w.witness.is_some()).count();
    out.summary.push(format!(
        "{} over {} windows ({witnesses} with witnesses): empirical {}",
        doc.exponent,
        doc.windows.len(),
        doc.empirical.as_deref().unwrap_or("none")
    ));
    if let Some(u) = &doc.uniform {
        out.summary.push(format!("worst window {} at exponent {}", u.worst_window, u.worst_exponent));
    }
    Ok(out)
}

fn parse_region(values: &[String], k: usize) -> CliResult<RatBox> {
    let nums = values.iter().map(|s| format::parse_rat(s)).collect::<format::Result<Vec<Rat>>>()?;
    let pairs: Vec<(Rat, Rat)> = match nums.len() {
        2 => vec![(nums[0].clone(), nums[1].clone()); k],
        n if n == 2 * k => nums.chunks(2).map(|c| (c[0].clone(), c[1].clone())).collect(),
        n => return Err(CliError::Config(format!("--box needs 2 or {} values, got {n}", 2 * k))),
    };
    if let Some((lo, hi)) = pairs.iter().find(|(lo, hi)| lo > hi) {
        return Err(CliError::Config(format!("box side [{lo}, {hi}] is empty")));
    }
    Ok(RatBox::new(pairs.into_iter().map(|(lo, hi)| Interval::new(lo, hi)).collect()))
}

fn run_variety(args: &VarietyArgs, pool: &Pool) -> CliResult<Artifacts> {
    let poly_doc: PolyDoc = read_json(&args.poly)?;
    let poly = poly_doc.polynomial().map_err(|source| CliError::Input {
        path: args.poly.clone(),
        source,
    })?;
    let region = parse_region(&args.region, poly.k())?;
    let mut cfg = ScanConfig::new(args.xmax, format::parse_rat(&args.mu)?);
    if args.per_coordinate {
        cfg = cfg.per_coordinate();
    }
    cfg.near_radius = format::parse_rat(&args.near_radius)?;
    let points = rational_point_search(&poly, args.height)?;
    let report = variety_approx_scan(&poly, &region, &points, &cfg, pool)?;
    let rows: Vec<ScanRecord> = report.hits.iter().map(|h| ScanRecord::of(h, report.mode, &points)).collect();
    let mut certificates = Vec::new();
    for hit in report.outliers() {
        if hit.value != Rat::from_integer(Int::from(0)) {
            certificates.push(format::CertificateDoc::of(&exclusion_certificate(&poly, &region, &hit.point())?));
        }
    }
    let late_hits = report.cutoff.map_or(0, |c| report.hits_from(c).count());
    let doc = ScanDoc {
        polynomial: PolyDoc::of(&poly),
        region: region.sides.iter().map(|s| (s.lo.to_string(), s.hi.to_string())).collect(),
        mu: cfg.mu.to_string(),
        x_max: cfg.x_max,
        mode: format::mode_name(cfg.mode).into(),
        near_radius: cfg.near_radius.to_string(),
        height: args.height,
        derivative_bound: report.derivative_bound.to_string(),
        cutoff: report.cutoff,
        rational_points: format::point_texts(&points),
        hits: report.hits.len(),
        outliers: report.outliers().count(),
        late_hits,
        denominator_tuples: report.denominator_tuples,
        prefixes: report.prefixes,
        bound_checks: report.bound_checks,
        bound_violations: report.bound_violations,
        certificates,
    };
    let mut out = Artifacts::new();
    out.add("scan.csv", csv_bytes(|w| format::write_scan_csv(w, &rows))?);
    out.add("scan.json", format::to_json(&doc)?);
    out.summary.push(format!(
        "{} hits ({} near rational points, {} outliers), cutoff {}, {} late",
        doc.hits,
        doc.hits - doc.outliers,
        doc.outliers,
        doc.cutoff.map_or("none".to_string(), |c| c.to_string()),
        late_hits
    ));
    out.summary.push(format!("{} bound checks, {} violations", doc.bound_checks, doc.bound_violations));
    Ok(out)
}

// ---------------------------------------------------------------- verify

fn failed(msg: impl Into<String>) -> CliError {
    CliError::Verification(msg.into())
}

/// Core failures during a replay are verification failures, except for
/// running out of precision or budget.
fn replay<T>(r: dioph_core::Result<T>) -> CliResult<T> {
    r.map_err(|e| match e {
        Error::Indeterminate { .. } | Error::CostGuard { .. } => CliError::Core(e),
        other => failed(other.to_string()),
    })
}

fn artifact<T>(r: CliResult<T>) -> CliResult<T> {
    r.map_err(|e| match e {
        CliError::Core(_) | CliError::Verification(_) => e,
        other => failed(other.to_string()),
    })
}

fn verify_dir(dir: &Path) -> CliResult<Vec<String>> {
    let manifest: Manifest = artifact(read_json(&dir.join(MANIFEST)))?;
    match manifest.command.as_str() {
        "construct" => verify_construction(dir),
        "estimate" => verify_estimate(dir),
        "variety" => verify_scan(dir),
        other => Err(failed(format!("manifest names unknown command {other:?}"))),
    }
}

fn verify_construction(dir: &Path) -> CliResult<Vec<String>> {
    let doc: PlanDoc = artifact(read_json(&dir.join("plan.json")))?;
    let plan = artifact(doc.plan(None, None).map_err(CliError::from))?;
    let built = replay(construct(&plan))?;
    for (j, src) in built.sources.iter().enumerate() {
        let stored: SourceDoc = artifact(read_json(&dir.join(source_file(j + 1))))?;
        if stored != SourceDoc::of(src) {
            return Err(failed(format!("{} differs from the rebuilt source", source_file(j + 1))));
        }
    }
    let stored = artifact(read_text(&dir.join("trace.csv")))?;
    let fresh = csv_bytes(|w| format::write_trace_csv(w, &built.trace.rows))?;
    if stored.as_bytes() != fresh.as_slice() {
        return Err(failed("trace.csv differs from the rebuilt trace"));
    }
    Ok(vec![format!(
        "rebuilt {} source(s) and {} trace rows from plan.json",
        built.sources.len(),
        built.trace.rows.len()
    )])
}

fn verify_estimate(dir: &Path) -> CliResult<Vec<String>> {
    let doc: EstimateDoc = artifact(read_json(&dir.join("estimate.json")))?;
    let sources = artifact(doc.sources().map_err(CliError::from))?;
    let witnesses = artifact(doc.witnesses().map_err(CliError::from))?;
    let prec = Precision::with_budget(doc.budget_bits);
    for w in &witnesses {
        replay(verify_witness(w, &sources, prec))?;
    }
    for win in &doc.windows {
        let from_witness = win.witness.as_ref().map(|w| w.exponent.clone());
        if win.exponent != from_witness {
            return Err(failed(format!("window {} reports an exponent its witness does not give", win.window)));
        }
    }
    let found = doc
        .windows
        .iter()
        .filter_map(|w| w.exponent.as_deref())
        .map(format::parse_exponent)
        .collect::<format::Result<Vec<_>>>()
        .map_err(|e| failed(e.to_string()))?;
    // the uniform exponent is the worst window, the others the best
    let (summary, what) = match &doc.uniform {
        Some(_) => (found.into_iter().min(), "minimum"),
        None => (found.into_iter().max(), "maximum"),
    };
    let summary = summary.as_ref().map(format::exponent_text);
    if summary != doc.empirical {
        return Err(failed(format!("empirical exponent is not the {what} over windows")));
    }
    if let Some(u) = &doc.uniform {
        if Some(&u.worst_exponent) != summary.as_ref() {
            return Err(failed("worst exponent does not match the windows"));
        }
    }
    let stored = artifact(read_text(&dir.join("estimate.csv")))?;
    if stored.as_bytes() != csv_bytes(|w| format::write_estimate_csv(w, &doc))?.as_slice() {
        return Err(failed("estimate.csv does not match estimate.json"));
    }
    Ok(vec![format!("re-verified {} witnesses over {} windows", witnesses.len(), doc.windows.len())])
}

fn verify_scan(dir: &Path) -> CliResult<Vec<String>> {
    let doc: ScanDoc = artifact(read_json(&dir.join("scan.json")))?;
    let text = artifact(read_text(&dir.join("scan.csv")))?;
    let rows = format::read_scan_csv(text.as_bytes()).map_err(|e| failed(e.to_string()))?;
    let bad = |e: FormatError| failed(e.to_string());
    let poly = doc.polynomial.polynomial().map_err(bad)?;
    let k = poly.k();
    let sides = doc
        .region
        .iter()
        .map(|(lo, hi)| Ok(Interval::new(format::parse_rat(lo)?, format::parse_rat(hi)?)))
        .collect::<format::Result<Vec<_>>>()
        .map_err(bad)?;
    let region = RatBox::new(sides);
    let mu = format::parse_rat(&doc.mu).map_err(bad)?;
    let near_radius = format::parse_rat(&doc.near_radius).map_err(bad)?;
    let c = replay(poly.derivative_bound(&region.sides))?;
    if c.to_string() != doc.derivative_bound {
        return Err(failed(format!("derivative bound {} recomputes as {c}", doc.derivative_bound)));
    }
    let kc = Rat::from_integer(Int::from(k)) * &c;
    let (cleared, _) = poly.cleared();
    let mode = if doc.mode == format::mode_name(ScanMode::PerCoordinate) {
        ScanMode::PerCoordinate
    } else {
        ScanMode::Shared
    };
    if rows.len() != doc.hits {
        return Err(failed(format!("scan.csv has {} rows, scan.json counts {}", rows.len(), doc.hits)));
    }
    for (i, row) in rows.iter().enumerate() {
        let line = i + 2;
        let xs = format::split_ints(&row.x).map_err(bad)?;
        let xs = match mode {
            ScanMode::Shared if xs.len() == 1 => vec![xs[0].clone(); k],
            _ => xs,
        };
        let ys = format::split_ints(&row.y).map_err(bad)?;
        if xs.len() != k || ys.len() != k {
            return Err(failed(format!("row {line}: expected {k} coordinates")));
        }
        if xs.iter().any(|x| x <= &Int::from(0) || x > &Int::from(doc.x_max)) {
            return Err(failed(format!("row {line}: denominator outside [1, {}]", doc.x_max)));
        }
        let point: Vec<Rat> = ys.iter().zip(&xs).map(|(y, x)| Rat::new(y.clone(), x.clone())).collect();
        if !region.contains(&point) {
            return Err(failed(format!("row {line}: point outside the box")));
        }
        let value = replay(poly.eval(&point))?;
        let abs = if value < Rat::from_integer(Int::from(0)) { -value.clone() } else { value.clone() };
        if abs.to_string() != row.abs_value {
            return Err(failed(format!("row {line}: |P| is {abs}, stored {}", row.abs_value)));
        }
        let w: u64 = xs.iter().max().expect("k >= 1").try_into().map_err(|_| failed("window overflows"))?;
        if !within_threshold(&value, &kc, w, &mu) {
            return Err(failed(format!("row {line}: |P| is above the scan threshold")));
        }
        replay(denominator_bound_check(&cleared, &point))?;
        if row.class == format::NEAR_POINT {
            let target = format::split_rats(&row.nearest).map_err(bad)?;
            let known = doc.rational_points.iter().any(|p| p.iter().map(String::as_str).eq(row.nearest.split(';')));
            let d = target.iter().zip(&point).map(|(a, b)| if a > b { a - b } else { b - a }).max();
            if !known || !d.is_some_and(|d| d <= near_radius && d.to_string() == row.distance) {
                return Err(failed(format!("row {line}: not within {near_radius} of {}", row.nearest)));
            }
            if replay(poly.eval(&target))? != Rat::from_integer(Int::from(0)) {
                return Err(failed(format!("row {line}: {} is not on the variety", row.nearest)));
            }
        } else if row.class != format::OUTLIER {
            return Err(failed(format!("row {line}: unknown class {:?}", row.class)));
        }
    }
    for cert in &doc.certificates {
        let stored = cert.certificate().map_err(bad)?;
        let fresh = replay(exclusion_certificate(&poly, &region, &stored.candidate))?;
        if fresh != stored {
            return Err(failed(format!("certificate at {:?} does not replay", cert.candidate)));
        }
    }
    Ok(vec![format!(
        "replayed {} scan rows and {} exclusion certificates",
        rows.len(),
        doc.certificates.len()
    )])
}
