//! Manifests, evaluation and report files.

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use univalence::criteria::{
    eval_corollary, eval_theorem2, eval_theorem3, eval_theorem4, CorollaryFunctions, CorollaryId, CriterionParams,
    CriterionReport, GridConfig,
};
use univalence::integral_op::{f_beta_point, f_beta_series, IntegralOperatorInput};
use univalence::loewner::{validate_chain, ChainFamily, ChainReport, LoewnerConfig};
use univalence::operators::OperatorKind;
use univalence::oracle::{oracle_check, OracleReport};
use univalence::{AnalyticFunction, Builtin, Complex64, Error, PowerSeries};

use crate::spec::FunctionSpec;

pub const EXIT_SATISFIED: i32 = 0;
pub const EXIT_VIOLATED: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_SINGULAR: i32 = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum Criterion {
    T2,
    T3,
    T4,
    T5,
    T6,
    Preset(CorollaryId),
}

impl Criterion {
    pub fn name(self) -> String {
        match self {
            Criterion::T2 => "T2".into(),
            Criterion::T3 => "T3".into(),
            Criterion::T4 => "T4".into(),
            Criterion::T5 => "T5".into(),
            Criterion::T6 => "T6".into(),
            Criterion::Preset(id) => id.name().into(),
        }
    }

    /// Whether `g` and `h` are read.
    pub fn uses(self) -> (bool, bool) {
        match self {
            Criterion::Preset(id) => id.uses(),
            _ => (true, true),
        }
    }

    pub fn chain_family(self) -> Option<ChainFamily> {
        match self {
            Criterion::T2 | Criterion::T3 | Criterion::T5 => Some(ChainFamily::Derivative),
            Criterion::T4 | Criterion::T6 => Some(ChainFamily::Quotient),
            Criterion::Preset(_) => None,
        }
    }

    /// Parameters actually used by the evaluation.
    pub fn effective_params(self, params: &CriterionParams) -> CriterionParams {
        let mut p = *params;
        match self {
            Criterion::T2 | Criterion::T4 => p.operator_kind = OperatorKind::Ruscheweyh,
            Criterion::T5 | Criterion::T6 => {
                p.operator_kind = OperatorKind::Salagean;
                p.lambda = None;
            }
            Criterion::T3 => {}
            Criterion::Preset(id) => p = id.frozen_params(params),
        }
        p
    }
}

impl fmt::Display for Criterion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

impl FromStr for Criterion {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        Ok(match s.to_ascii_uppercase().as_str() {
            "T2" => Criterion::T2,
            "T3" => Criterion::T3,
            "T4" => Criterion::T4,
            "T5" => Criterion::T5,
            "T6" => Criterion::T6,
            _ => Criterion::Preset(s.parse::<CorollaryId>().map_err(|_| {
                format!("unknown criterion {s:?}; expected T2..T6, C1..C10, C5_realcase or R3")
            })?),
        })
    }
}

impl TryFrom<String> for Criterion {
    type Error = String;

    fn try_from(s: String) -> Result<Self, String> {
        s.parse()
    }
}

impl From<Criterion> for String {
    fn from(c: Criterion) -> String {
        c.name()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub criterion: Criterion,
    pub f: FunctionSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub g: Option<FunctionSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub h: Option<FunctionSpec>,
    #[serde(default)]
    pub params: CriterionParams,
    #[serde(default)]
    pub grid: GridConfig,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub loewner: Option<LoewnerConfig>,
    #[serde(default)]
    pub oracle: bool,
    #[serde(default)]
    pub seed: u64,
}

impl RunManifest {
    pub fn new(criterion: Criterion, f: FunctionSpec) -> Self {
        Self {
            criterion,
            f,
            g: None,
            h: None,
            params: CriterionParams::default(),
            grid: GridConfig::default(),
            loewner: None,
            oracle: false,
            seed: 0,
        }
    }

    /// Reads a manifest, or the manifest embedded in a report.
    pub fn load(path: &Path) -> Result<Self, RunError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| RunError::input(format!("cannot read {}: {e}", path.display())))?;
        let value: serde_json::Value =
            serde_json::from_str(&text).map_err(|e| RunError::input(format!("{}: {e}", path.display())))?;
        let value = match value.get("manifest") {
            Some(inner) => inner.clone(),
            None => value,
        };
        serde_json::from_value(value).map_err(|e| RunError::input(format!("{}: {e}", path.display())))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunError {
    pub code: i32,
    pub message: String,
}

impl RunError {
    pub fn input(message: impl Into<String>) -> Self {
        Self { code: EXIT_INPUT, message: message.into() }
    }
}

impl fmt::Display for RunError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl From<Error> for RunError {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::SingularPoint(_) | Error::BranchAmbiguity(_) | Error::DegenerateDenominator { .. } => EXIT_SINGULAR,
            _ => EXIT_INPUT,
        };
        Self { code, message: e.to_string() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub manifest: RunManifest,
    pub report: CriterionReport,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub chain: Option<ChainReport>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub oracle: Option<OracleReport>,
}

impl RunReport {
    pub fn exit_code(&self) -> i32 {
        if !self.report.params_ok {
            EXIT_INPUT
        } else if !self.report.singular_points.is_empty() {
            EXIT_SINGULAR
        } else if self.report.satisfied {
            EXIT_SATISFIED
        } else {
            EXIT_VIOLATED
        }
    }

    /// One line per violated constraint, or empty.
    pub fn diagnostics(&self) -> Vec<String> {
        self.report
            .constraints
            .violations()
            .map(|c| {
                format!(
                    "parameter constraint violated: {} (value {}, bound {})",
                    c.label, c.value, c.bound
                )
            })
            .collect()
    }
}

pub struct Functions {
    pub f: AnalyticFunction,
    pub g: Option<AnalyticFunction>,
    pub h: Option<AnalyticFunction>,
}

pub fn resolve_functions(m: &RunManifest) -> Result<Functions, RunError> {
    let resolve = |name: &str, spec: &FunctionSpec| spec.resolve().map_err(|e| RunError::input(format!("{name}: {e}")));
    let (uses_g, uses_h) = m.criterion.uses();
    let optional = |name: &str, spec: &Option<FunctionSpec>, used: bool| -> Result<Option<AnalyticFunction>, RunError> {
        match spec {
            Some(s) => resolve(name, s).map(Some),
            None if used => Err(RunError::input(format!("{} requires the function {name}", m.criterion))),
            None => Ok(None),
        }
    };
    Ok(Functions {
        f: resolve("f", &m.f)?,
        g: optional("g", &m.g, uses_g)?,
        h: optional("h", &m.h, uses_h)?,
    })
}

/// The criterion verdict alone.
pub fn evaluate(m: &RunManifest, fns: &Functions) -> Result<CriterionReport, RunError> {
    m.grid.validate()?;
    let p = m.criterion.effective_params(&m.params);
    let need = |x: &Option<AnalyticFunction>| x.clone().expect("checked by resolve_functions");
    Ok(match m.criterion {
        Criterion::T2 | Criterion::T5 => eval_theorem2(&fns.f, &need(&fns.g), &need(&fns.h), &p, &m.grid)?,
        Criterion::T3 => eval_theorem3(&fns.f, &need(&fns.g), &need(&fns.h), &p, &m.grid)?,
        Criterion::T4 | Criterion::T6 => eval_theorem4(&fns.f, &need(&fns.g), &need(&fns.h), &p, &m.grid)?,
        Criterion::Preset(id) => eval_corollary(
            id,
            CorollaryFunctions { f: &fns.f, g: fns.g.as_ref(), h: fns.h.as_ref() },
            &m.params,
            &m.grid,
        )?,
    })
}

/// The function whose univalence the criterion asserts: `F_beta` with the
/// criterion's `g`.
fn oracle_input(m: &RunManifest, fns: &Functions) -> IntegralOperatorInput {
    let p = m.criterion.effective_params(&m.params);
    let g = match m.criterion {
        Criterion::Preset(CorollaryId::C4 | CorollaryId::C5 | CorollaryId::C5RealCase) => fns.f.clone(),
        Criterion::Preset(CorollaryId::R3) => AnalyticFunction::identity(),
        _ => fns.g.clone().unwrap_or_else(AnalyticFunction::identity),
    };
    IntegralOperatorInput::new(fns.f.clone(), g, p.beta)
}

/// Polynomial inputs as series; other builtins have no finite series.
fn exact_series(f: &AnalyticFunction) -> Option<PowerSeries> {
    match f {
        AnalyticFunction::Series(s) => Some(s.clone()),
        AnalyticFunction::Builtin(Builtin::Identity) => Some(PowerSeries::identity(1)),
        _ => None,
    }
}

pub fn run_oracle(m: &RunManifest, fns: &Functions) -> Result<OracleReport, RunError> {
    let input = oracle_input(m, fns);
    if input.beta == Complex64::new(1.0, 0.0) {
        let f = &input.f;
        return Ok(oracle_check(|z| f.value(z), m.seed));
    }
    if let (Some(f), Some(g)) = (exact_series(&input.f), exact_series(&input.g)) {
        let order = f.order().max(g.order());
        let exact = IntegralOperatorInput::new(
            PowerSeries::padded(f.coeffs(), order),
            PowerSeries::padded(g.coeffs(), order),
            input.beta,
        );
        let series = f_beta_series(&exact)?;
        return Ok(oracle_check(|z| series.evaluate(z), m.seed));
    }
    Ok(oracle_check(|z| f_beta_point(&input, z), m.seed))
}

pub fn run_chain(m: &RunManifest, fns: &Functions, cfg: &LoewnerConfig) -> Result<ChainReport, RunError> {
    let family = m
        .criterion
        .chain_family()
        .ok_or_else(|| RunError::input(format!("chain validation needs T2..T6, not {}", m.criterion)))?;
    let p = m.criterion.effective_params(&m.params);
    let g = fns.g.as_ref().expect("checked by resolve_functions");
    let h = fns.h.as_ref().expect("checked by resolve_functions");
    Ok(validate_chain(&fns.f, g, h, &p, &cfg.clone().with_family(family))?)
}

pub fn run(m: &RunManifest) -> Result<RunReport, RunError> {
    let fns = resolve_functions(m)?;
    let report = evaluate(m, &fns)?;
    let chain = m.loewner.as_ref().map(|cfg| run_chain(m, &fns, cfg)).transpose()?;
    let oracle = m.oracle.then(|| run_oracle(m, &fns)).transpose()?;
    Ok(RunReport { manifest: m.clone(), report, chain, oracle })
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("reports serialize");
    s.push('\n');
    s
}

/// Per-grid-point expression values with the worst excess over the bounds.
pub fn grid_csv(report: &CriterionReport) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut header = vec!["re".to_string(), "im".to_string()];
    header.extend(report.inequalities.iter().map(|i| i.label.clone()));
    header.push("worst_excess".into());
    w.write_record(&header).expect("in-memory write");
    for row in &report.grid_rows {
        let mut record = vec![row.z.re.to_string(), row.z.im.to_string()];
        let mut worst: Option<f64> = None;
        for (value, ineq) in row.values.iter().zip(&report.inequalities) {
            record.push(value.map(|v| v.to_string()).unwrap_or_default());
            if let Some(v) = value {
                worst = Some(worst.map_or(v - ineq.bound, |x: f64| x.max(v - ineq.bound)));
            }
        }
        record.push(worst.map(|v| v.to_string()).unwrap_or_default());
        w.write_record(&record).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("csv is utf-8")
}

pub fn write_outputs(dir: &Path, report: &RunReport) -> std::io::Result<()> {
    std::fs::create_dir_all(dir)?;
    std::fs::write(dir.join("report.json"), to_json(report))?;
    std::fs::write(dir.join("grid.csv"), grid_csv(&report.report))
}

pub fn summary(report: &RunReport) -> Vec<String> {
    let r = &report.report;
    let mut lines = vec![format!(
        "{}: {}",
        r.criterion,
        if r.satisfied { "satisfied" } else { "not satisfied" }
    )];
    for i in &r.inequalities {
        lines.push(format!(
            "  {:<12} sup {:.9} bound {} margin {:+.9} at {} {}",
            i.label,
            i.sup_estimate,
            i.bound,
            i.margin,
            i.argmax_z,
            if i.holds { "ok" } else { "FAIL" }
        ));
    }
    lines.extend(report.diagnostics().into_iter().map(|d| format!("  {d}")));
    if !r.singular_points.is_empty() {
        lines.push(format!("  {} singular point(s), first at {}", r.singular_points.len(), r.singular_points[0]));
    }
    if let Some(chain) = &report.chain {
        lines.push(format!("chain: {}", if chain.satisfied { "valid" } else { "not valid" }));
        for c in &chain.checks {
            lines.push(format!("  {:<18} worst {} bound {} {}", c.name, c.worst, c.bound, if c.passed { "ok" } else { "FAIL" }));
        }
    }
    if let Some(o) = &report.oracle {
        lines.push(format!(
            "oracle: {} ({} collisions in {} pairs, winding all 1: {})",
            if o.passed { "injective" } else { "not injective" },
            o.injectivity.collision_count,
            o.injectivity.tested_pairs,
            o.winding.all_simple
        ));
    }
    lines
}

/// Parameter varied by a sweep.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepParam {
    /// `f = z + a z^2`, also used for `g` and `h` where the criterion reads them.
    A,
    Alpha,
    Beta,
    C,
    M,
}

impl FromStr for SweepParam {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        Ok(match s {
            "a" => SweepParam::A,
            "alpha" => SweepParam::Alpha,
            "beta" => SweepParam::Beta,
            "c" => SweepParam::C,
            "m" => SweepParam::M,
            _ => return Err(format!("cannot vary {s:?}; expected a, alpha, beta, c or m")),
        })
    }
}

impl SweepParam {
    pub fn name(self) -> &'static str {
        match self {
            SweepParam::A => "a",
            SweepParam::Alpha => "alpha",
            SweepParam::Beta => "beta",
            SweepParam::C => "c",
            SweepParam::M => "m",
        }
    }

    fn apply(self, m: &mut RunManifest, value: f64) {
        let re = Complex64::new(value, 0.0);
        match self {
            SweepParam::A => {
                let spec = FunctionSpec::quadratic(re);
                let (uses_g, uses_h) = m.criterion.uses();
                m.f = spec.clone();
                if uses_g {
                    m.g = Some(spec.clone());
                }
                if uses_h {
                    m.h = Some(spec);
                }
            }
            SweepParam::Alpha => m.params.alpha = re,
            SweepParam::Beta => m.params.beta = re,
            SweepParam::C => m.params.c = re,
            SweepParam::M => m.params.m = value,
        }
    }
}

/// Parses `lo..hi`.
pub fn parse_range(s: &str) -> Result<(f64, f64), String> {
    let (lo, hi) = s.split_once("..").ok_or_else(|| format!("expected a range lo..hi, got {s:?}"))?;
    let parse = |x: &str| x.trim().parse::<f64>().map_err(|_| format!("bad range bound {x:?}"));
    let (lo, hi) = (parse(lo)?, parse(hi)?);
    if !(lo < hi) {
        return Err(format!("empty range {s:?}"));
    }
    Ok((lo, hi))
}

/// Margin of every inequality across `steps` evenly spaced values.
pub fn sweep(base: &RunManifest, param: SweepParam, lo: f64, hi: f64, steps: usize) -> Result<String, RunError> {
    if steps < 2 {
        return Err(RunError::input("a sweep needs at least 2 steps"));
    }
    let mut first = base.clone();
    param.apply(&mut first, lo);
    resolve_functions(&first)?;
    first.grid.validate()?;
    let mut rows: Vec<(f64, Result<CriterionReport, RunError>)> = Vec::with_capacity(steps);
    for k in 0..steps {
        let value = lo + (hi - lo) * k as f64 / (steps - 1) as f64;
        let mut m = base.clone();
        param.apply(&mut m, value);
        rows.push((value, resolve_functions(&m).and_then(|fns| evaluate(&m, &fns))));
    }
    let labels: Vec<String> = rows
        .iter()
        .find_map(|(_, r)| r.as_ref().ok())
        .map(|r| r.inequalities.iter().map(|i| i.label.clone()).collect())
        .unwrap_or_default();
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut header = vec![param.name().to_string(), "satisfied".into(), "params_ok".into(), "worst_margin".into()];
    header.extend(labels.iter().map(|l| format!("{l}_margin")));
    header.extend(labels.iter().map(|l| format!("{l}_sup")));
    header.push("error".into());
    w.write_record(&header).expect("in-memory write");
    for (value, result) in rows {
        let mut record = vec![value.to_string()];
        match result {
            Ok(r) => {
                record.push(r.satisfied.to_string());
                record.push(r.params_ok.to_string());
                record.push(r.worst_margin().to_string());
                record.extend(r.inequalities.iter().map(|i| i.margin.to_string()));
                record.extend(r.inequalities.iter().map(|i| i.sup_estimate.to_string()));
                record.push(String::new());
            }
            Err(e) => {
                record.extend(["false".to_string(), String::new(), String::new()]);
                record.extend(labels.iter().flat_map(|_| [String::new(), String::new()]));
                record.push(e.message);
            }
        }
        w.write_record(&record).expect("in-memory write");
    }
    Ok(String::from_utf8(w.into_inner().expect("in-memory flush")).expect("csv is utf-8"))
}
