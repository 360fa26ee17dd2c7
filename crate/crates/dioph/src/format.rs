//! JSON and CSV schemas for sources, plans, polynomials, estimates,
//! construction traces and variety scans.
//!
//! Big integers and rationals are written as decimal strings (`"-7"`,
//! `"5/2"`). On input, plain JSON numbers and decimal fractions such as
//! `2.5` are accepted too and converted exactly.

use std::io::{Read, Write};

use dioph_core::cf::ConvergentList;
use dioph_core::constructors::{ConstructionPlan, PlanKind, TraceRow};
use dioph_core::exponents::{Exponent, ExponentEstimate, Origin, ProfileRow, UniformReport, WitnessMode, WitnessRecord};
use dioph_core::source::SourceKind;
use dioph_core::variety::{ExclusionCertificate, HitClass, MultiPolynomial, RationalPointSet, ScanHit, ScanMode};
use dioph_core::{CfTail, DistanceInterval, Int, Rat, RealSource, SeriesTail};
use serde::{Deserialize, Serialize};

#[derive(Debug, thiserror::Error)]
pub enum FormatError {
    #[error("malformed number {0:?}")]
    Number(String),
    #[error("{0}")]
    Schema(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Core(#[from] dioph_core::Error),
}

pub type Result<T> = std::result::Result<T, FormatError>;

fn schema(msg: impl Into<String>) -> FormatError {
    FormatError::Schema(msg.into())
}

pub fn parse_int(s: &str) -> Result<Int> {
    s.trim().parse().map_err(|_| FormatError::Number(s.into()))
}

/// Accepts `p/q`, integers and finite decimals.
pub fn parse_rat(s: &str) -> Result<Rat> {
    let t = s.trim();
    let bad = || FormatError::Number(s.into());
    if let Some((n, d)) = t.split_once('/') {
        let d = parse_int(d)?;
        if d == Int::from(0) {
            return Err(bad());
        }
        return Ok(Rat::new(parse_int(n)?, d));
    }
    let Some((whole, frac)) = t.split_once('.') else {
        return Ok(Rat::from_integer(parse_int(t)?));
    };
    if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
        return Err(bad());
    }
    let negative = whole.starts_with('-');
    let digits = format!("{}{frac}", whole.trim_start_matches(['-', '+']));
    let mut num = parse_int(&digits)?;
    if negative {
        num = -num;
    }
    let den = num_pow10(frac.len());
    Ok(Rat::new(num, den))
}

fn num_pow10(n: usize) -> Int {
    (0..n).fold(Int::from(1), |acc, _| acc * 10u32)
}

/// A number as written by a user: string, JSON integer or JSON float.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Lit {
    Text(String),
    Int(i64),
    Float(f64),
}

impl Lit {
    pub fn int(&self) -> Result<Int> {
        match self {
            Lit::Text(s) => parse_int(s),
            Lit::Int(v) => Ok(Int::from(*v)),
            Lit::Float(f) => Err(FormatError::Number(f.to_string())),
        }
    }

    pub fn rat(&self) -> Result<Rat> {
        match self {
            Lit::Text(s) => parse_rat(s),
            Lit::Int(v) => Ok(Rat::from_integer(Int::from(*v))),
            Lit::Float(f) if f.is_finite() => parse_rat(&f.to_string()),
            Lit::Float(f) => Err(FormatError::Number(f.to_string())),
        }
    }
}

impl From<&Int> for Lit {
    fn from(v: &Int) -> Self {
        Lit::Text(v.to_string())
    }
}

impl From<&Rat> for Lit {
    fn from(v: &Rat) -> Self {
        Lit::Text(v.to_string())
    }
}

fn ints(v: &[Lit]) -> Result<Vec<Int>> {
    v.iter().map(Lit::int).collect()
}

fn texts<T: ToString>(v: &[T]) -> Vec<String> {
    v.iter().map(T::to_string).collect()
}

fn parse_ints(v: &[String]) -> Result<Vec<Int>> {
    v.iter().map(|s| parse_int(s)).collect()
}

pub fn exponent_text(e: &Exponent) -> String {
    e.to_string()
}

pub fn parse_exponent(s: &str) -> Result<Exponent> {
    if s == "inf" {
        Ok(Exponent::Unbounded)
    } else {
        Ok(Exponent::Finite(parse_rat(s)?))
    }
}

fn finite(v: f64) -> Option<f64> {
    v.is_finite().then_some(v)
}

// ---------------------------------------------------------------- sources

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum SourceDoc {
    Rational {
        num: Lit,
        den: Lit,
    },
    Cf {
        quotients: Vec<Lit>,
        #[serde(default)]
        tail: CfTailDoc,
    },
    Binseries {
        exponents: Vec<u64>,
        #[serde(default)]
        tail: SeriesTailDoc,
    },
    Power {
        base: Box<SourceDoc>,
        exponent: u32,
    },
}

/// A missing tail means the quotient list is the whole expansion.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CfTailDoc {
    #[default]
    Terminate,
    Ones,
    Periodic(Vec<Lit>),
    Unknown,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SeriesTailDoc {
    #[default]
    Finite,
    Geometric(Lit),
    Unknown,
}

impl SourceDoc {
    pub fn of(src: &RealSource) -> Self {
        match src.kind() {
            SourceKind::Rational(v) => SourceDoc::Rational {
                num: Lit::from(v.numer()),
                den: Lit::from(v.denom()),
            },
            SourceKind::Cf(d) => SourceDoc::Cf {
                quotients: d.prefix().iter().map(Lit::from).collect(),
                tail: match d.tail() {
                    CfTail::Terminate => CfTailDoc::Terminate,
                    CfTail::Ones => CfTailDoc::Ones,
                    CfTail::Periodic(p) => CfTailDoc::Periodic(p.iter().map(Lit::from).collect()),
                    CfTail::Unknown => CfTailDoc::Unknown,
                },
            },
            SourceKind::BinarySeries(d) => SourceDoc::Binseries {
                exponents: d.exponents().to_vec(),
                tail: match d.tail() {
                    SeriesTail::Finite => SeriesTailDoc::Finite,
                    SeriesTail::Geometric(l) => SeriesTailDoc::Geometric(Lit::from(l)),
                    SeriesTail::Unknown => SeriesTailDoc::Unknown,
                },
            },
            SourceKind::Power { base, exponent } => SourceDoc::Power {
                base: Box::new(SourceDoc::of(base)),
                exponent: *exponent,
            },
        }
    }

    pub fn source(&self) -> Result<RealSource> {
        Ok(match self {
            SourceDoc::Rational { num, den } => {
                let den = den.int()?;
                if den == Int::from(0) {
                    return Err(schema("rational source with zero denominator"));
                }
                RealSource::rational(Rat::new(num.int()?, den))
            }
            SourceDoc::Cf { quotients, tail } => {
                let tail = match tail {
                    CfTailDoc::Terminate => CfTail::Terminate,
                    CfTailDoc::Ones => CfTail::Ones,
                    CfTailDoc::Periodic(p) => CfTail::Periodic(ints(p)?),
                    CfTailDoc::Unknown => CfTail::Unknown,
                };
                RealSource::cf(ints(quotients)?, tail)?
            }
            SourceDoc::Binseries { exponents, tail } => {
                let tail = match tail {
                    SeriesTailDoc::Finite => SeriesTail::Finite,
                    SeriesTailDoc::Geometric(l) => SeriesTail::Geometric(l.rat()?),
                    SeriesTailDoc::Unknown => SeriesTail::Unknown,
                };
                RealSource::binary_series(exponents.clone(), tail)?
            }
            SourceDoc::Power { base, exponent } => RealSource::power(base.source()?, *exponent)?,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConvergentDoc {
    pub index: usize,
    pub num: String,
    pub den: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConvergentsDoc {
    pub quotients: Vec<String>,
    pub convergents: Vec<ConvergentDoc>,
    pub terminated: bool,
    pub truncated: bool,
}

impl ConvergentsDoc {
    pub fn of(list: &ConvergentList) -> Self {
        Self {
            quotients: texts(&list.quotients),
            convergents: list
                .items
                .iter()
                .map(|c| ConvergentDoc {
                    index: c.index,
                    num: c.num.to_string(),
                    den: c.den.to_string(),
                })
                .collect(),
            terminated: list.terminated,
            truncated: list.truncated,
        }
    }
}

// ---------------------------------------------------------------- plans

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum PlanKindDoc {
    Lambda1Cf { lambda: Lit },
    Lambda1Series { lambda: Lit },
    Vector { lambdas: Vec<Lit>, w: Lit },
    Veronese { k: u32, lambda: Lit },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PlanDoc {
    #[serde(flatten)]
    pub kind: PlanKindDoc,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub depth: Option<usize>,
    #[serde(default)]
    pub salt: u64,
}

impl PlanDoc {
    pub fn of(plan: &ConstructionPlan) -> Self {
        let kind = match &plan.kind {
            PlanKind::Lambda1Cf { lambda } => PlanKindDoc::Lambda1Cf { lambda: lambda.into() },
            PlanKind::Lambda1Series { lambda } => PlanKindDoc::Lambda1Series { lambda: lambda.into() },
            PlanKind::VectorLamblemm { lambdas, w } => PlanKindDoc::Vector {
                lambdas: lambdas.iter().map(Lit::from).collect(),
                w: w.into(),
            },
            PlanKind::Veronese { k, lambda } => PlanKindDoc::Veronese { k: *k, lambda: lambda.into() },
        };
        Self {
            kind,
            depth: Some(plan.depth),
            salt: plan.salt,
        }
    }

    /// `depth` and `salt` override the document's values when given.
    pub fn plan(&self, depth: Option<usize>, salt: Option<u64>) -> Result<ConstructionPlan> {
        let kind = match &self.kind {
            PlanKindDoc::Lambda1Cf { lambda } => PlanKind::Lambda1Cf { lambda: lambda.rat()? },
            PlanKindDoc::Lambda1Series { lambda } => PlanKind::Lambda1Series { lambda: lambda.rat()? },
            PlanKindDoc::Vector { lambdas, w } => PlanKind::VectorLamblemm {
                lambdas: lambdas.iter().map(Lit::rat).collect::<Result<_>>()?,
                w: w.rat()?,
            },
            PlanKindDoc::Veronese { k, lambda } => PlanKind::Veronese { k: *k, lambda: lambda.rat()? },
        };
        let depth = depth.or(self.depth).ok_or_else(|| schema("plan has no depth and none was given"))?;
        let plan = ConstructionPlan::new(kind, depth).with_salt(salt.unwrap_or(self.salt));
        plan.validate()?;
        Ok(plan)
    }
}

// ---------------------------------------------------------------- polynomials

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TermDoc {
    pub exps: Vec<u32>,
    pub coef: Lit,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PolyDoc {
    pub k: usize,
    pub terms: Vec<TermDoc>,
}

impl PolyDoc {
    pub fn of(p: &MultiPolynomial) -> Self {
        Self {
            k: p.k(),
            terms: p
                .terms()
                .map(|(e, c)| TermDoc {
                    exps: e.clone(),
                    coef: c.into(),
                })
                .collect(),
        }
    }

    pub fn polynomial(&self) -> Result<MultiPolynomial> {
        let terms = self
            .terms
            .iter()
            .map(|t| Ok((t.exps.clone(), t.coef.rat()?)))
            .collect::<Result<Vec<_>>>()?;
        Ok(MultiPolynomial::new(self.k, terms)?)
    }
}

// ---------------------------------------------------------------- witnesses

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "kebab-case")]
pub enum ModeDoc {
    Shared { x: String, numerators: Vec<String> },
    PerCoordinate { xs: Vec<String>, numerators: Vec<String> },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ErrorDoc {
    pub lo: String,
    pub hi: String,
    pub target_precision: u64,
    pub indeterminate: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OriginDoc {
    Search,
    Transform(Box<WitnessDoc>),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessDoc {
    pub mode: ModeDoc,
    pub window: String,
    pub errors: Vec<ErrorDoc>,
    pub exponent: String,
    pub vacuous: bool,
    pub origin: OriginDoc,
}

impl WitnessDoc {
    pub fn of(w: &WitnessRecord) -> Self {
        let mode = match &w.mode {
            WitnessMode::Shared { x, numerators } => ModeDoc::Shared {
                x: x.to_string(),
                numerators: texts(numerators),
            },
            WitnessMode::PerCoordinate { xs, numerators } => ModeDoc::PerCoordinate {
                xs: texts(xs),
                numerators: texts(numerators),
            },
        };
        Self {
            mode,
            window: w.window.to_string(),
            errors: w
                .errors
                .iter()
                .map(|e| ErrorDoc {
                    lo: e.lo.to_string(),
                    hi: e.hi.to_string(),
                    target_precision: e.target_precision,
                    indeterminate: e.indeterminate,
                })
                .collect(),
            exponent: exponent_text(&w.exponent),
            vacuous: w.vacuous,
            origin: match &w.origin {
                Origin::Search => OriginDoc::Search,
                Origin::LemmaTransform { source } => OriginDoc::Transform(Box::new(WitnessDoc::of(source))),
            },
        }
    }

    pub fn witness(&self) -> Result<WitnessRecord> {
        let mode = match &self.mode {
            ModeDoc::Shared { x, numerators } => WitnessMode::Shared {
                x: parse_int(x)?,
                numerators: parse_ints(numerators)?,
            },
            ModeDoc::PerCoordinate { xs, numerators } => WitnessMode::PerCoordinate {
                xs: parse_ints(xs)?,
                numerators: parse_ints(numerators)?,
            },
        };
        let errors = self
            .errors
            .iter()
            .map(|e| {
                Ok(DistanceInterval {
                    lo: parse_rat(&e.lo)?,
                    hi: parse_rat(&e.hi)?,
                    target_precision: e.target_precision,
                    indeterminate: e.indeterminate,
                })
            })
            .collect::<Result<_>>()?;
        Ok(WitnessRecord {
            mode,
            window: parse_int(&self.window)?,
            errors,
            exponent: parse_exponent(&self.exponent)?,
            vacuous: self.vacuous,
            origin: match &self.origin {
                OriginDoc::Search => Origin::Search,
                OriginDoc::Transform(src) => Origin::LemmaTransform {
                    source: Box::new(src.witness()?),
                },
            },
        })
    }
}

// ---------------------------------------------------------------- estimates

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WindowDoc {
    pub window: String,
    pub exponent: Option<String>,
    pub flag: Option<String>,
    pub witness: Option<WitnessDoc>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProfileDoc {
    pub n: usize,
    pub s_n: String,
    pub next_quotient: String,
    pub s_next: String,
    pub nu: String,
    pub nu_approx: Option<f64>,
    pub eta: Option<f64>,
    pub tau: Option<f64>,
    pub witness: WitnessDoc,
}

impl ProfileDoc {
    pub fn of(r: &ProfileRow) -> Self {
        Self {
            n: r.n,
            s_n: r.s_n.to_string(),
            next_quotient: r.next_quotient.to_string(),
            s_next: r.s_next.to_string(),
            nu: exponent_text(&r.nu),
            nu_approx: finite(r.nu_approx),
            eta: finite(r.eta),
            tau: finite(r.tau),
            witness: WitnessDoc::of(&r.witness),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct UniformDoc {
    pub worst_window: String,
    pub worst_exponent: String,
    pub flagged_windows: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EstimateDoc {
    pub exponent: String,
    pub k: usize,
    pub budget_bits: u64,
    pub sources: Vec<SourceDoc>,
    pub empirical: Option<String>,
    pub trend: Vec<(String, String)>,
    pub windows: Vec<WindowDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub profile: Option<Vec<ProfileDoc>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub uniform: Option<UniformDoc>,
}

impl EstimateDoc {
    pub fn of(est: &ExponentEstimate, sources: &[RealSource], budget_bits: u64) -> Self {
        Self {
            exponent: est.name.as_str().into(),
            k: est.k,
            budget_bits,
            sources: sources.iter().map(SourceDoc::of).collect(),
            empirical: est.empirical.as_ref().map(exponent_text),
            trend: est.trend().iter().map(|(w, e)| (w.to_string(), exponent_text(e))).collect(),
            windows: est
                .windows
                .iter()
                .map(|w| WindowDoc {
                    window: w.window.to_string(),
                    exponent: w.exponent().map(exponent_text),
                    flag: w.flag.clone(),
                    witness: w.witness.as_ref().map(WitnessDoc::of),
                })
                .collect(),
            profile: est.profile.as_ref().map(|rows| rows.iter().map(ProfileDoc::of).collect()),
            uniform: None,
        }
    }

    pub fn of_uniform(report: &UniformReport, sources: &[RealSource], budget_bits: u64) -> Self {
        let mut doc = Self::of(&report.estimate, sources, budget_bits);
        doc.uniform = Some(UniformDoc {
            worst_window: report.worst_window.to_string(),
            worst_exponent: exponent_text(&report.worst_exponent),
            flagged_windows: report.flagged_windows,
        });
        doc
    }

    pub fn sources(&self) -> Result<Vec<RealSource>> {
        self.sources.iter().map(SourceDoc::source).collect()
    }

    /// Every inlined witness, window witnesses first, then profile rows.
    pub fn witnesses(&self) -> Result<Vec<WitnessRecord>> {
        let mut out = Vec::new();
        for w in &self.windows {
            if let Some(doc) = &w.witness {
                let rec = doc.witness()?;
                if rec.window != parse_int(&w.window)? {
                    return Err(schema(format!("witness window {} filed under {}", rec.window, w.window)));
                }
                out.push(rec);
            }
        }
        for row in self.profile.iter().flatten() {
            out.push(row.witness.witness()?);
        }
        Ok(out)
    }
}

#[derive(Serialize)]
struct EstimateRow<'a> {
    window: &'a str,
    exponent: &'a str,
    exponent_approx: Option<f64>,
    flag: &'a str,
}

/// `(window, best exponent)` pairs for plotting; empty cells where a window
/// has no witness.
pub fn write_estimate_csv<W: Write>(out: W, doc: &EstimateDoc) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for win in &doc.windows {
        let exponent = win.exponent.as_deref().unwrap_or("");
        let approx = match win.exponent.as_deref() {
            Some(e) => finite(parse_exponent(e)?.to_f64()),
            None => None,
        };
        w.serialize(EstimateRow {
            window: &win.window,
            exponent,
            exponent_approx: approx,
            flag: win.flag.as_deref().unwrap_or(""),
        })?;
    }
    w.flush().map_err(csv::Error::from)?;
    Ok(())
}

// ---------------------------------------------------------------- traces

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TraceRecord {
    pub jump: usize,
    pub j: usize,
    pub position: usize,
    pub h: String,
    pub s: String,
    pub ratio: f64,
    pub nu: String,
    pub nu_approx: f64,
    pub predicted_log2: Option<f64>,
}

impl TraceRecord {
    pub fn of(r: &TraceRow) -> Self {
        Self {
            jump: r.jump,
            j: r.coordinate,
            position: r.position,
            h: r.h.to_string(),
            s: r.s.to_string(),
            ratio: r.ratio,
            nu: exponent_text(&r.nu),
            nu_approx: r.nu_approx,
            predicted_log2: r.predicted_log2,
        }
    }
}

pub fn write_trace_csv<W: Write>(out: W, rows: &[TraceRow]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for r in rows {
        w.serialize(TraceRecord::of(r))?;
    }
    w.flush().map_err(csv::Error::from)?;
    Ok(())
}

pub fn read_trace_csv<R: Read>(input: R) -> Result<Vec<TraceRecord>> {
    let mut r = csv::Reader::from_reader(input);
    r.deserialize().map(|row| row.map_err(FormatError::from)).collect()
}

// ---------------------------------------------------------------- scans

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScanRecord {
    /// Shared denominator, or `x1;x2;...` per coordinate.
    pub x: String,
    pub y: String,
    pub abs_value: String,
    pub class: String,
    /// Closest known rational point, `a1;a2;...`.
    pub nearest: String,
    pub distance: String,
}

pub const NEAR_POINT: &str = "near-point";
pub const OUTLIER: &str = "outlier";

fn joined<T: ToString>(v: &[T]) -> String {
    v.iter().map(T::to_string).collect::<Vec<_>>().join(";")
}

pub fn split_ints(s: &str) -> Result<Vec<Int>> {
    s.split(';').map(parse_int).collect()
}

pub fn split_rats(s: &str) -> Result<Vec<Rat>> {
    if s.is_empty() {
        return Ok(Vec::new());
    }
    s.split(';').map(parse_rat).collect()
}

impl ScanRecord {
    pub fn of(hit: &ScanHit, mode: ScanMode, points: &RationalPointSet) -> Self {
        let x = match mode {
            ScanMode::Shared => hit.denominators[0].to_string(),
            ScanMode::PerCoordinate => joined(&hit.denominators),
        };
        let (class, near) = match &hit.class {
            HitClass::NearRationalPoint { point, distance } => (NEAR_POINT, Some((*point, distance.clone()))),
            HitClass::Outlier => (OUTLIER, points.nearest(&hit.point())),
        };
        let (nearest, distance) = match near {
            Some((i, d)) => (joined(&points.points[i]), d.to_string()),
            None => (String::new(), String::new()),
        };
        Self {
            x,
            y: joined(&hit.numerators),
            abs_value: num_abs(&hit.value).to_string(),
            class: class.into(),
            nearest,
            distance,
        }
    }
}

fn num_abs(v: &Rat) -> Rat {
    if v < &Rat::from_integer(Int::from(0)) {
        -v.clone()
    } else {
        v.clone()
    }
}

pub fn write_scan_csv<W: Write>(out: W, rows: &[ScanRecord]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for r in rows {
        w.serialize(r)?;
    }
    w.flush().map_err(csv::Error::from)?;
    Ok(())
}

pub fn read_scan_csv<R: Read>(input: R) -> Result<Vec<ScanRecord>> {
    let mut r = csv::Reader::from_reader(input);
    r.deserialize().map(|row| row.map_err(FormatError::from)).collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateDoc {
    pub candidate: Vec<String>,
    pub value: String,
    pub derivative_bound: String,
    pub exclusion_radius: String,
}

impl CertificateDoc {
    pub fn of(c: &ExclusionCertificate) -> Self {
        Self {
            candidate: texts(&c.candidate),
            value: c.value.to_string(),
            derivative_bound: c.derivative_bound.to_string(),
            exclusion_radius: c.exclusion_radius.to_string(),
        }
    }

    pub fn certificate(&self) -> Result<ExclusionCertificate> {
        Ok(ExclusionCertificate {
            candidate: self.candidate.iter().map(|s| parse_rat(s)).collect::<Result<_>>()?,
            value: parse_rat(&self.value)?,
            derivative_bound: parse_rat(&self.derivative_bound)?,
            exclusion_radius: parse_rat(&self.exclusion_radius)?,
        })
    }
}

/// Summary written next to the scan CSV.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScanDoc {
    pub polynomial: PolyDoc,
    pub region: Vec<(String, String)>,
    pub mu: String,
    pub x_max: u64,
    pub mode: String,
    pub near_radius: String,
    pub height: u64,
    pub derivative_bound: String,
    pub cutoff: Option<u64>,
    pub rational_points: Vec<Vec<String>>,
    pub hits: usize,
    pub outliers: usize,
    pub late_hits: usize,
    pub denominator_tuples: u64,
    pub prefixes: u64,
    pub bound_checks: u64,
    pub bound_violations: u64,
    /// Zero-free balls around the nonzero outliers.
    pub certificates: Vec<CertificateDoc>,
}

pub fn mode_name(mode: ScanMode) -> &'static str {
    match mode {
        ScanMode::Shared => "shared",
        ScanMode::PerCoordinate => "per-coordinate",
    }
}

pub fn point_texts(points: &RationalPointSet) -> Vec<Vec<String>> {
    points.points.iter().map(|p| texts(p)).collect()
}

// ---------------------------------------------------------------- json io

/// Pretty JSON with a trailing newline.
pub fn to_json<T: Serialize>(v: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(v)?;
    s.push('\n');
    Ok(s)
}

pub fn from_json<T: serde::de::DeserializeOwned>(s: &str) -> Result<T> {
    Ok(serde_json::from_str(s)?)
}
