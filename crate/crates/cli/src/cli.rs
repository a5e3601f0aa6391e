use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use univalence::integral_op::{f_beta_point, f_beta_series, IntegralOperatorInput};
use univalence::loewner::LoewnerConfig;
use univalence::operators::{apply_ruscheweyh, salagean, RuscheweyhOrder, SalageanOrder};
use univalence::{AnalyticFunction, Complex64, PowerSeries};

use crate::run::{
    parse_range, resolve_functions, run, run_chain, summary, sweep, to_json, write_outputs, Criterion, RunError,
    RunManifest, SweepParam, EXIT_INPUT, EXIT_SATISFIED, EXIT_VIOLATED,
};
use crate::spec::{parse_complex, FunctionSpec, DEFAULT_TRUNCATION};

#[derive(Parser, Debug)]
#[command(name = "univalence", version, about = "Numerical univalence criteria, Loewner chains and injectivity checks")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Evaluate a criterion; exit 0 satisfied, 1 violated, 2 bad input, 3 singular
    Run(InputArgs),
    /// Print operator coefficients of f
    Operators(OperatorArgs),
    /// Print F_beta coefficients, optionally with a quadrature cross-check
    Integral(IntegralArgs),
    /// Validate the Loewner chain of a T2..T6 criterion
    Loewner {
        #[command(flatten)]
        input: InputArgs,
        /// Chain rate a; b is set to m a
        #[arg(long, default_value_t = 1.0)]
        a: f64,
    },
    /// Vary one parameter and emit a margin table as CSV
    Sweep {
        #[command(flatten)]
        input: InputArgs,
        /// Parameter and range, e.g. `--vary a 0..0.5`
        #[arg(long, num_args = 2, value_names = ["NAME", "LO..HI"], required = true)]
        vary: Vec<String>,
        #[arg(long, default_value_t = 21)]
        steps: usize,
    },
}

#[derive(Args, Debug, Default)]
pub struct InputArgs {
    /// Manifest JSON (or a report embedding one); flags override its fields
    #[arg(long)]
    pub manifest: Option<PathBuf>,
    #[arg(long)]
    pub criterion: Option<String>,
    /// Builtin name, polynomial in z, JSON coefficient list or spec file
    #[arg(long)]
    pub f: Option<String>,
    #[arg(long)]
    pub g: Option<String>,
    #[arg(long)]
    pub h: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub beta: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub c: Option<String>,
    #[arg(long)]
    pub m: Option<f64>,
    #[arg(long)]
    pub n: Option<u32>,
    #[arg(long)]
    pub v: Option<u32>,
    /// Fractional Ruscheweyh order
    #[arg(long)]
    pub lambda: Option<f64>,
    #[arg(long)]
    pub grid_radii: Option<usize>,
    #[arg(long)]
    pub grid_angles: Option<usize>,
    #[arg(long)]
    pub max_radius: Option<f64>,
    #[arg(long)]
    pub tolerance: Option<f64>,
    /// Also run the injectivity oracle
    #[arg(long)]
    pub oracle: bool,
    /// Also validate the Loewner chain with default settings
    #[arg(long)]
    pub chain: bool,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Directory for report files
    #[arg(long)]
    pub out: Option<PathBuf>,
}

impl InputArgs {
    pub fn manifest(&self) -> Result<RunManifest, RunError> {
        let spec = |s: &str| FunctionSpec::parse_arg(s).map_err(RunError::input);
        let complex = |s: &str| parse_complex(s).map_err(RunError::input);
        let mut m = match (&self.manifest, &self.criterion, &self.f) {
            (Some(path), _, _) => RunManifest::load(path)?,
            (None, Some(c), Some(f)) => RunManifest::new(c.parse::<Criterion>().map_err(RunError::input)?, spec(f)?),
            _ => return Err(RunError::input("either --manifest or both --criterion and --f are required")),
        };
        if let Some(c) = &self.criterion {
            m.criterion = c.parse().map_err(RunError::input)?;
        }
        if let Some(f) = &self.f {
            m.f = spec(f)?;
        }
        if let Some(g) = &self.g {
            m.g = Some(spec(g)?);
        }
        if let Some(h) = &self.h {
            m.h = Some(spec(h)?);
        }
        let p = &mut m.params;
        if let Some(x) = &self.alpha {
            p.alpha = complex(x)?;
        }
        if let Some(x) = &self.beta {
            p.beta = complex(x)?;
        }
        if let Some(x) = &self.c {
            p.c = complex(x)?;
        }
        p.m = self.m.unwrap_or(p.m);
        p.n = self.n.unwrap_or(p.n);
        p.v = self.v.unwrap_or(p.v);
        p.lambda = self.lambda.or(p.lambda);
        let g = &mut m.grid;
        g.n_radii = self.grid_radii.unwrap_or(g.n_radii);
        g.n_angles = self.grid_angles.unwrap_or(g.n_angles);
        g.max_radius = self.max_radius.unwrap_or(g.max_radius);
        g.tolerance = self.tolerance.unwrap_or(g.tolerance);
        m.oracle |= self.oracle;
        m.seed = self.seed.unwrap_or(m.seed);
        if self.chain && m.loewner.is_none() {
            m.loewner = Some(LoewnerConfig::for_params(&m.params));
        }
        Ok(m)
    }
}

#[derive(Args, Debug)]
pub struct OperatorArgs {
    #[arg(long)]
    pub f: String,
    /// Ruscheweyh order lambda > -1
    #[arg(long, conflicts_with = "salagean", required_unless_present = "salagean")]
    pub ruscheweyh: Option<f64>,
    #[arg(long)]
    pub salagean: Option<u32>,
    /// Truncation order for builtin inputs
    #[arg(long, default_value_t = DEFAULT_TRUNCATION)]
    pub order: usize,
}

#[derive(Args, Debug)]
pub struct IntegralArgs {
    #[arg(long)]
    pub f: String,
    #[arg(long)]
    pub g: String,
    #[arg(long, allow_hyphen_values = true)]
    pub beta: String,
    /// Point for the series/quadrature cross-check
    #[arg(long, allow_hyphen_values = true)]
    pub at: Option<String>,
    #[arg(long, default_value_t = DEFAULT_TRUNCATION)]
    pub order: usize,
}

#[derive(Serialize)]
struct Coefficients {
    coefficients: Vec<Complex64>,
}

#[derive(Serialize)]
struct IntegralOutput {
    coefficients: Vec<Complex64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    at: Option<Complex64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    series_value: Option<Complex64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    quadrature_value: Option<Complex64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    difference: Option<f64>,
}

/// Stored coefficients without trailing zeros (keeping `z`).
fn trimmed(s: &PowerSeries) -> Vec<Complex64> {
    let mut c = s.coeffs().to_vec();
    while c.len() > 2 && c.last() == Some(&Complex64::new(0.0, 0.0)) {
        c.pop();
    }
    c
}

fn series(f: &AnalyticFunction, order: usize) -> Result<PowerSeries, RunError> {
    Ok(match f.as_series() {
        Some(s) => s.clone(),
        None => f.to_series(order)?,
    })
}

fn resolve_arg(name: &str, arg: &str) -> Result<AnalyticFunction, RunError> {
    FunctionSpec::parse_arg(arg)
        .and_then(|s| s.resolve())
        .map_err(|e| RunError::input(format!("{name}: {e}")))
}

fn operators(args: &OperatorArgs, out: &mut dyn Write) -> Result<i32, RunError> {
    let f = series(&resolve_arg("f", &args.f)?, args.order)?;
    let image = match (args.ruscheweyh, args.salagean) {
        (Some(lambda), _) => {
            let order = RuscheweyhOrder::new(lambda)?;
            series(&apply_ruscheweyh(&AnalyticFunction::from(f), order)?, args.order)?
        }
        (None, Some(n)) => salagean(&f, SalageanOrder(n))?,
        (None, None) => return Err(RunError::input("one of --ruscheweyh or --salagean is required")),
    };
    write_out(out, &to_json(&Coefficients { coefficients: trimmed(&image) }))?;
    Ok(EXIT_SATISFIED)
}

fn integral(args: &IntegralArgs, out: &mut dyn Write) -> Result<i32, RunError> {
    let f = resolve_arg("f", &args.f)?;
    let g = resolve_arg("g", &args.g)?;
    let beta = parse_complex(&args.beta).map_err(RunError::input)?;
    let input = IntegralOperatorInput::new(series(&f, args.order)?, series(&g, args.order)?, beta);
    let s = f_beta_series(&input)?;
    let mut output = IntegralOutput {
        coefficients: trimmed(&s),
        at: None,
        series_value: None,
        quadrature_value: None,
        difference: None,
    };
    if let Some(at) = &args.at {
        let z = parse_complex(at).map_err(RunError::input)?;
        let exact = IntegralOperatorInput::new(f, g, beta);
        let sv = s.evaluate(z)?;
        let qv = f_beta_point(&exact, z)?;
        output.at = Some(z);
        output.series_value = Some(sv);
        output.quadrature_value = Some(qv);
        output.difference = Some((sv - qv).norm());
    }
    write_out(out, &to_json(&output))?;
    Ok(EXIT_SATISFIED)
}

fn write_out(out: &mut dyn Write, text: &str) -> Result<(), RunError> {
    out.write_all(text.as_bytes()).map_err(|e| RunError::input(format!("cannot write output: {e}")))
}

fn write_file(dir: &Path, name: &str, text: &str) -> Result<(), RunError> {
    std::fs::create_dir_all(dir)
        .and_then(|_| std::fs::write(dir.join(name), text))
        .map_err(|e| RunError::input(format!("cannot write {}: {e}", dir.join(name).display())))
}

fn execute(command: &Command, out: &mut dyn Write) -> Result<i32, RunError> {
    match command {
        Command::Run(input) => {
            let m = input.manifest()?;
            let report = run(&m)?;
            if let Some(dir) = &input.out {
                write_outputs(dir, &report).map_err(|e| RunError::input(format!("cannot write report: {e}")))?;
            }
            write_out(out, &(summary(&report).join("\n") + "\n"))?;
            Ok(report.exit_code())
        }
        Command::Operators(args) => operators(args, out),
        Command::Integral(args) => integral(args, out),
        Command::Loewner { input, a } => {
            let mut m = input.manifest()?;
            let cfg = m.loewner.clone().unwrap_or_else(|| LoewnerConfig {
                a: *a,
                b: a * m.params.m,
                ..LoewnerConfig::for_params(&m.params)
            });
            m.loewner = Some(cfg.clone());
            let fns = resolve_functions(&m)?;
            let report = run_chain(&m, &fns, &cfg)?;
            let json = to_json(&report);
            if let Some(dir) = &input.out {
                write_file(dir, "loewner.json", &json)?;
            }
            write_out(out, &json)?;
            Ok(if report.satisfied { EXIT_SATISFIED } else { EXIT_VIOLATED })
        }
        Command::Sweep { input, vary, steps } => {
            let m = input.manifest()?;
            let param: SweepParam = vary[0].parse().map_err(RunError::input)?;
            let (lo, hi) = parse_range(&vary[1]).map_err(RunError::input)?;
            let csv = sweep(&m, param, lo, hi, *steps)?;
            if let Some(dir) = &input.out {
                write_file(dir, "sweep.csv", &csv)?;
            }
            write_out(out, &csv)?;
            Ok(EXIT_SATISFIED)
        }
    }
}

/// Parses arguments, runs the command and returns the exit code.
pub fn main_with<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_SATISFIED };
            let _ = if e.use_stderr() { write!(err, "{e}") } else { write!(out, "{e}") };
            return code;
        }
    };
    match execute(&cli.command, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.code
        }
    }
}
