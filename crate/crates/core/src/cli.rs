//! Command-line surface: a `key = value` config format, four subcommands
//! (density-check, eval, converge, voronovskaya), CSV and plot-script
//! emission, and a three-value exit-code contract:
//!
//! * 0: success
//! * 1: usage, config, or I/O problem
//! * 2: a numerical check failed (a property out of tolerance, a non-finite
//!   value, or a fully saturated rate fit)
//!
//! All floats in reports and CSV files are printed with 17 significant
//! digits, which round-trips f64 exactly; identical inputs give bitwise
//! identical outputs.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::activation::{self, ActivationParams};
use crate::convergence::{self, SweepPlan};
use crate::density::MultivariatePoint;
use crate::error::{Error, Result};
use crate::operators::{self, OperatorConfig, OperatorKind};
use crate::testbed::{lookup_function, GridSpec, NormKind};

#[derive(Parser)]
#[command(
    name = "qtanh",
    version,
    about = "Sampling-operator harness: density checks, evaluation, convergence sweeps"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Verify kernel symmetry, normalization, and partition of unity
    DensityCheck(CommonArgs),
    /// Evaluate the configured operator at points read from a file
    Eval(EvalArgs),
    /// Sweep the scale n and fit a convergence rate
    Converge(CommonArgs),
    /// Split the pointwise error into Taylor main terms and a residual
    Voronovskaya(CommonArgs),
}

#[derive(Args)]
struct CommonArgs {
    /// Config file of `key = value` lines; omit to run with defaults
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output directory (overrides the config's `out` key)
    #[arg(long)]
    out: Option<PathBuf>,
    /// Seed for pair subsampling in Holder-type norms
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct EvalArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Points file: one point per line, comma-separated coordinates
    #[arg(long)]
    points: PathBuf,
}

/// All run parameters with their defaults. Every tolerance the binary uses is
/// a config key, so no threshold is baked in invisibly.
#[derive(Debug, Clone)]
struct ExperimentConfig {
    kind: OperatorKind,
    q: f64,
    lambda: f64,
    n_values: Vec<u32>,
    dimension: usize,
    function: String,
    norm: NormKind,
    grid_lower: Vec<f64>,
    grid_upper: Vec<f64>,
    grid_points: usize,
    theta: u32,
    weights: Option<Vec<f64>>,
    cell_quad_order: u32,
    truncation_tol: f64,
    derivatives: bool,
    m: usize,
    point: Vec<f64>,
    symmetry_tol: f64,
    integral_tol: f64,
    partition_tol: f64,
    partition_window_tol: f64,
    out: Option<PathBuf>,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            kind: OperatorKind::Basic,
            q: 1.0,
            lambda: 1.0,
            n_values: vec![8, 16, 32, 64, 128, 256],
            dimension: 1,
            function: "gaussian".to_string(),
            norm: NormKind::Sup,
            grid_lower: vec![-1.0],
            grid_upper: vec![1.0],
            grid_points: 101,
            theta: 3,
            weights: None,
            cell_quad_order: 5,
            truncation_tol: 1e-12,
            derivatives: false,
            m: 2,
            point: vec![0.0],
            symmetry_tol: 1e-12,
            integral_tol: 1e-8,
            partition_tol: 1e-10,
            partition_window_tol: 1e-13,
            out: None,
        }
    }
}

fn bad_key(key: &str, value: &str, what: &str) -> Error {
    Error::InvalidConfig(format!("config key '{key}': expected {what}, got '{value}'"))
}

fn parse_f64(key: &str, value: &str) -> Result<f64> {
    value
        .parse::<f64>()
        .map_err(|_| bad_key(key, value, "a real number"))
}

fn parse_usize(key: &str, value: &str) -> Result<usize> {
    value
        .parse::<usize>()
        .map_err(|_| bad_key(key, value, "a non-negative integer"))
}

fn parse_u32(key: &str, value: &str) -> Result<u32> {
    value
        .parse::<u32>()
        .map_err(|_| bad_key(key, value, "a non-negative integer"))
}

fn parse_bool(key: &str, value: &str) -> Result<bool> {
    match value {
        "true" => Ok(true),
        "false" => Ok(false),
        _ => Err(bad_key(key, value, "true or false")),
    }
}

fn parse_f64_list(key: &str, value: &str) -> Result<Vec<f64>> {
    value
        .split(',')
        .map(|part| parse_f64(key, part.trim()))
        .collect()
}

fn parse_u32_list(key: &str, value: &str) -> Result<Vec<u32>> {
    value
        .split(',')
        .map(|part| parse_u32(key, part.trim()))
        .collect()
}

/// Expands a one-element list to `dim` copies; lists already of length `dim`
/// pass through.
fn broadcast(key: &str, values: Vec<f64>, dim: usize) -> Result<Vec<f64>> {
    if values.len() == dim {
        Ok(values)
    } else if values.len() == 1 {
        Ok(vec![values[0]; dim])
    } else {
        Err(Error::InvalidConfig(format!(
            "config key '{key}': expected 1 or {dim} comma-separated values, got {}",
            values.len()
        )))
    }
}

impl ExperimentConfig {
    /// Parses the flat `key = value` format. Lines that are empty or start
    /// with `#` are skipped; unknown and repeated keys are rejected so typos
    /// cannot silently fall back to defaults.
    fn parse(text: &str) -> Result<Self> {
        let mut pairs: Vec<(String, String)> = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                Error::InvalidConfig(format!(
                    "config line {}: expected 'key = value', got '{line}'",
                    idx + 1
                ))
            })?;
            let key = key.trim().to_string();
            let value = value.trim().to_string();
            if pairs.iter().any(|(k, _)| *k == key) {
                return Err(Error::InvalidConfig(format!(
                    "config key '{key}' appears more than once"
                )));
            }
            pairs.push((key, value));
        }

        let mut config = Self::default();
        // dimension first: list-valued keys broadcast against it
        if let Some((_, v)) = pairs.iter().find(|(k, _)| k == "dimension") {
            config.dimension = parse_usize("dimension", v)?;
            if config.dimension == 0 {
                return Err(Error::InvalidConfig("dimension must be >= 1".into()));
            }
        }
        let dim = config.dimension;
        config.grid_lower = vec![-1.0; dim];
        config.grid_upper = vec![1.0; dim];
        config.point = vec![0.0; dim];

        for (key, value) in &pairs {
            match key.as_str() {
                "dimension" => {}
                "kind" => config.kind = value.parse()?,
                "q" => config.q = parse_f64(key, value)?,
                "lambda" => config.lambda = parse_f64(key, value)?,
                "n" => config.n_values = parse_u32_list(key, value)?,
                "function" => config.function = value.clone(),
                "norm" => config.norm = value.parse()?,
                "grid_lower" => {
                    config.grid_lower = broadcast(key, parse_f64_list(key, value)?, dim)?
                }
                "grid_upper" => {
                    config.grid_upper = broadcast(key, parse_f64_list(key, value)?, dim)?
                }
                "grid_points" => config.grid_points = parse_usize(key, value)?,
                "theta" => config.theta = parse_u32(key, value)?,
                "weights" => config.weights = Some(parse_f64_list(key, value)?),
                "cell_quad_order" => config.cell_quad_order = parse_u32(key, value)?,
                "truncation_tol" => config.truncation_tol = parse_f64(key, value)?,
                "derivatives" => config.derivatives = parse_bool(key, value)?,
                "m" => config.m = parse_usize(key, value)?,
                "point" => config.point = broadcast(key, parse_f64_list(key, value)?, dim)?,
                "symmetry_tol" => config.symmetry_tol = parse_f64(key, value)?,
                "integral_tol" => config.integral_tol = parse_f64(key, value)?,
                "partition_tol" => config.partition_tol = parse_f64(key, value)?,
                "partition_window_tol" => config.partition_window_tol = parse_f64(key, value)?,
                "out" => config.out = Some(PathBuf::from(value)),
                other => {
                    return Err(Error::InvalidConfig(format!("unknown config key '{other}'")))
                }
            }
        }
        if config.n_values.is_empty() {
            return Err(Error::InvalidConfig("key 'n' needs at least one scale".into()));
        }
        Ok(config)
    }

    fn load(path: Option<&Path>) -> Result<Self> {
        match path {
            None => Ok(Self::default()),
            Some(p) => Self::parse(&fs::read_to_string(p)?),
        }
    }

    fn activation(&self) -> Result<ActivationParams> {
        ActivationParams::new(self.q, self.lambda)
    }

    fn operator_config(&self, n: u32) -> Result<OperatorConfig> {
        let mut cfg = OperatorConfig::new(self.kind, n, self.dimension, self.activation()?)?
            .with_truncation_tol(self.truncation_tol)?
            .with_theta(self.theta)?
            .with_cell_quad_order(self.cell_quad_order)?;
        if let Some(w) = &self.weights {
            cfg = cfg.with_weights(w.clone())?;
        }
        Ok(cfg)
    }

    fn grid(&self) -> Result<GridSpec> {
        GridSpec::new(
            self.grid_lower.clone(),
            self.grid_upper.clone(),
            self.grid_points,
        )
    }
}

/// 17 significant digits: enough to reconstruct the exact f64.
fn fmt17(v: f64) -> String {
    format!("{v:.16e}")
}

/// RFC-4180 style quoting for the rare field that contains a comma.
fn csv_field(s: &str) -> String {
    if s.contains(',') || s.contains('"') || s.contains('\n') {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn resolve_out_dir(flag: &Option<PathBuf>, config: &ExperimentConfig) -> PathBuf {
    flag.clone()
        .or_else(|| config.out.clone())
        .unwrap_or_else(|| PathBuf::from("."))
}

fn write_file(dir: &Path, name: &str, content: &str) -> Result<PathBuf> {
    fs::create_dir_all(dir)?;
    let path = dir.join(name);
    fs::write(&path, content)?;
    Ok(path)
}

/// Three checks on the symmetrized kernel: evenness on a sample grid,
/// unit integral, unit lattice sums. Returns 0 when all pass, 2 otherwise.
fn cmd_density_check(args: &CommonArgs) -> Result<i32> {
    let config = ExperimentConfig::load(args.config.as_deref())?;
    let params = config.activation()?;
    let out_dir = resolve_out_dir(&args.out, &config);

    // evenness: phi(x) = phi(-x); sample where the kernel has any mass
    let mode = 0.5 * config.q.ln() / config.lambda;
    let reach = 1.0 + mode.abs() + 12.0 / config.lambda;
    let mut symmetry_dev = 0.0f64;
    let samples = 2001;
    for i in 0..samples {
        let x = reach * (2.0 * i as f64 / (samples - 1) as f64 - 1.0);
        let dev = (activation::phi(&params, x) - activation::phi(&params, -x)).abs();
        symmetry_dev = symmetry_dev.max(dev);
    }
    let symmetry_pass = symmetry_dev < config.symmetry_tol;

    // normalization: quadrature of the kernel over the real line
    let integral = activation::phi_integral(&params, config.integral_tol)?;
    let integral_dev = (integral - 1.0).abs();
    let integral_pass = integral_dev < config.integral_tol;

    // partition of unity: lattice sums at fractional offsets
    let radius = activation::window_radius(&params, config.partition_window_tol)?;
    let mut partition_dev = 0.0f64;
    for i in 0..101 {
        let u = i as f64 / 101.0;
        let mut sum = 0.0;
        let mut terms = Vec::with_capacity(2 * radius as usize + 1);
        for k in -(radius as i64)..=radius as i64 {
            terms.push(activation::phi(&params, u - k as f64));
        }
        for pair in 0..=radius as usize {
            let left = pair;
            let right = terms.len() - 1 - pair;
            if left < right {
                sum += terms[left] + terms[right];
            } else if left == right {
                sum += terms[left];
            }
        }
        partition_dev = partition_dev.max((sum - 1.0).abs());
    }
    let partition_pass = partition_dev < config.partition_tol;

    let status = |ok: bool| if ok { "pass" } else { "fail" };
    let mut report = String::new();
    let _ = writeln!(report, "q={}", fmt17(config.q));
    let _ = writeln!(report, "lambda={}", fmt17(config.lambda));
    let _ = writeln!(
        report,
        "symmetry_max_deviation={} tol={} status={}",
        fmt17(symmetry_dev),
        fmt17(config.symmetry_tol),
        status(symmetry_pass)
    );
    let _ = writeln!(
        report,
        "integral_value={} deviation={} tol={} status={}",
        fmt17(integral),
        fmt17(integral_dev),
        fmt17(config.integral_tol),
        status(integral_pass)
    );
    let _ = writeln!(
        report,
        "partition_max_deviation={} tol={} status={}",
        fmt17(partition_dev),
        fmt17(config.partition_tol),
        status(partition_pass)
    );
    let all_pass = symmetry_pass && integral_pass && partition_pass;
    let _ = writeln!(report, "overall={}", status(all_pass));

    let path = write_file(&out_dir, "density_report.txt", &report)?;
    print!("{report}");
    if all_pass {
        Ok(0)
    } else {
        eprintln!("density checks failed; see {}", path.display());
        Ok(2)
    }
}

/// Evaluates the operator (first scale in `n`) at each point of the points
/// file. Rows whose evaluation fails are written with `nan` cells and
/// reported; any such row turns the exit code to 2.
fn cmd_eval(args: &EvalArgs) -> Result<i32> {
    let config = ExperimentConfig::load(args.common.config.as_deref())?;
    let out_dir = resolve_out_dir(&args.common.out, &config);
    let dim = config.dimension;

    let text = fs::read_to_string(&args.points)?;
    let mut points: Vec<Vec<f64>> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        let coords: Vec<f64> = line
            .split(',')
            .map(|part| {
                let part = part.trim();
                part.parse::<f64>().map_err(|_| {
                    Error::InvalidParameter(format!(
                        "points line {}: '{part}' is not a real number",
                        idx + 1
                    ))
                })
            })
            .collect::<Result<_>>()?;
        if coords.len() != dim {
            return Err(Error::InvalidParameter(format!(
                "points line {}: expected {dim} coordinates, got {}",
                idx + 1,
                coords.len()
            )));
        }
        if let Some(bad) = coords.iter().find(|c| !c.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "points line {}: coordinate {bad} is not finite",
                idx + 1
            )));
        }
        points.push(coords);
    }

    let cfg = config.operator_config(config.n_values[0])?;
    let f = lookup_function(&config.function, dim)?;
    let eval_target = move |t: &[f64]| f.eval(t);

    let mut header: Vec<String> = (1..=dim).map(|i| format!("x{i}")).collect();
    header.push("value".to_string());
    if config.derivatives {
        for i in 1..=dim {
            header.push(format!("deriv{i}"));
        }
    }
    let mut csv = header.join(",");
    csv.push('\n');

    let mut failures = 0usize;
    for coords in &points {
        let mut cells: Vec<String> = coords.iter().map(|&c| fmt17(c)).collect();
        let x = MultivariatePoint::new(coords.clone())?;
        let mut row_failed = false;
        match operators::apply(&cfg, &eval_target, &x) {
            Ok(v) => cells.push(fmt17(v)),
            Err(e) => {
                eprintln!("point {coords:?}: {e}");
                cells.push("nan".to_string());
                row_failed = true;
            }
        }
        if config.derivatives {
            for axis in 0..dim {
                match operators::apply_derivative(&cfg, &eval_target, &x, axis) {
                    Ok(v) => cells.push(fmt17(v)),
                    Err(e) => {
                        eprintln!("point {coords:?} axis {axis}: {e}");
                        cells.push("nan".to_string());
                        row_failed = true;
                    }
                }
            }
        }
        if row_failed {
            failures += 1;
        }
        csv.push_str(&cells.join(","));
        csv.push('\n');
    }

    let path = write_file(&out_dir, "eval.csv", &csv)?;
    println!("wrote {} ({} points)", path.display(), points.len());
    if failures > 0 {
        eprintln!("{failures} of {} rows failed to evaluate", points.len());
        Ok(2)
    } else {
        Ok(0)
    }
}

fn gnuplot_header(csv_name: &str) -> String {
    format!(
        "# gnuplot script; run from this directory: gnuplot {name}\n\
         set datafile separator ','\n\
         set logscale xy\n\
         set xlabel 'n'\n\
         set ylabel 'error'\n\
         set grid\n",
        name = csv_name.replace(".csv", "_plot.gp")
    )
}

/// Runs the configured n-sweep, writes the per-scale errors, a gnuplot
/// script, and a rate summary; prints `slope=<s> r2=<r>`. A fully saturated
/// sweep still writes the CSV but exits 2.
fn cmd_converge(args: &CommonArgs) -> Result<i32> {
    let config = ExperimentConfig::load(args.config.as_deref())?;
    let out_dir = resolve_out_dir(&args.out, &config);

    let base = config.operator_config(config.n_values[0])?;
    let plan = SweepPlan::new(
        base,
        config.n_values.clone(),
        config.norm,
        &config.function,
        config.grid()?,
        args.seed,
    )?;
    let records = convergence::run_sweep(&plan)?;

    let mut csv = String::from("n,error,norm_kind\n");
    for r in &records {
        let _ = writeln!(
            csv,
            "{},{},{}",
            r.n,
            fmt17(r.value),
            csv_field(&r.norm_kind.to_string())
        );
    }
    write_file(&out_dir, "converge.csv", &csv)?;

    let plot = format!(
        "{}plot 'converge.csv' using 1:2 with linespoints title 'error ({} norm)'\n",
        gnuplot_header("converge.csv"),
        config.norm
    );
    write_file(&out_dir, "converge_plot.gp", &plot)?;

    let floor = 100.0 * config.truncation_tol;
    let mut summary = String::new();
    let _ = writeln!(summary, "function={}", config.function);
    let _ = writeln!(summary, "norm={}", config.norm);
    let _ = writeln!(summary, "kind={}", config.kind);
    match convergence::fit_rate_with_floor(&records, floor) {
        Ok(fit) => {
            let _ = writeln!(summary, "slope={}", fmt17(fit.slope));
            let _ = writeln!(summary, "intercept={}", fmt17(fit.intercept));
            let _ = writeln!(summary, "r2={}", fmt17(fit.r_squared));
            let _ = writeln!(summary, "records_used={}", fit.records.len());
            let _ = writeln!(summary, "saturated={}", fit.saturated);
            write_file(&out_dir, "converge_summary.txt", &summary)?;
            println!("slope={} r2={}", fmt17(fit.slope), fmt17(fit.r_squared));
            Ok(0)
        }
        Err(Error::Saturated(msg)) => {
            let _ = writeln!(summary, "saturated=all");
            let _ = writeln!(summary, "note={msg}");
            write_file(&out_dir, "converge_summary.txt", &summary)?;
            eprintln!("saturated sweep: {msg}");
            Ok(2)
        }
        Err(e) => Err(e),
    }
}

/// Per-scale pointwise error and Taylor residual at the configured point,
/// with a rate fit for each column; prints `raw_slope=<a> residual_slope=<b>`.
fn cmd_voronovskaya(args: &CommonArgs) -> Result<i32> {
    let config = ExperimentConfig::load(args.config.as_deref())?;
    let out_dir = resolve_out_dir(&args.out, &config);

    if config.kind != OperatorKind::Basic {
        return Err(Error::InvalidConfig(format!(
            "the main-term decomposition requires kind = basic, got {}",
            config.kind
        )));
    }
    let f = lookup_function(&config.function, config.dimension)?;
    if config.m > f.m_max() {
        return Err(Error::InvalidConfig(format!(
            "m = {} exceeds the derivatives available for '{}' (m_max = {})",
            config.m,
            f.name(),
            f.m_max()
        )));
    }
    let x = MultivariatePoint::new(config.point.clone())?;
    let fx = f.eval(x.coords());
    let eval_target = {
        let f = f.clone();
        move |t: &[f64]| f.eval(t)
    };

    let mut raw_records = Vec::new();
    let mut residual_records = Vec::new();
    let mut csv = String::from("n,abs_error,abs_residual\n");
    for &n in &config.n_values {
        let cfg = config.operator_config(n)?;
        let value = operators::apply_basic(&cfg, &eval_target, &x)?;
        let abs_error = (value - fx).abs();
        let (_, residual) = convergence::voronovskaya_residual(&cfg, &f, &x, config.m)?;
        let abs_residual = residual.abs();
        let _ = writeln!(csv, "{n},{},{}", fmt17(abs_error), fmt17(abs_residual));
        raw_records.push(crate::testbed::ErrorRecord::new(n, config.norm, abs_error)?);
        residual_records.push(crate::testbed::ErrorRecord::new(n, config.norm, abs_residual)?);
    }
    write_file(&out_dir, "voronovskaya.csv", &csv)?;

    let plot = format!(
        "{}plot 'voronovskaya.csv' using 1:2 with linespoints title 'error', \\\n     'voronovskaya.csv' using 1:3 with linespoints title 'residual'\n",
        gnuplot_header("voronovskaya.csv")
    );
    write_file(&out_dir, "voronovskaya_plot.gp", &plot)?;

    let floor = 100.0 * config.truncation_tol;
    let mut summary = String::new();
    let _ = writeln!(summary, "function={}", config.function);
    let _ = writeln!(summary, "m={}", config.m);
    let _ = writeln!(
        summary,
        "point={}",
        config
            .point
            .iter()
            .map(|&c| fmt17(c))
            .collect::<Vec<_>>()
            .join(";")
    );

    // appends <label>_slope / <label>_r2 lines; None marks a saturated column
    let fit_lines = |label: &str,
                         records: &[crate::testbed::ErrorRecord],
                         summary: &mut String|
     -> Result<Option<String>> {
        match convergence::fit_rate_with_floor(records, floor) {
            Ok(fit) => {
                let _ = writeln!(summary, "{label}_slope={}", fmt17(fit.slope));
                let _ = writeln!(summary, "{label}_r2={}", fmt17(fit.r_squared));
                Ok(Some(fmt17(fit.slope)))
            }
            Err(Error::Saturated(msg)) => {
                let _ = writeln!(summary, "{label}_slope=saturated");
                let _ = writeln!(summary, "{label}_note={msg}");
                Ok(None)
            }
            Err(e) => Err(e),
        }
    };
    let raw_slope = fit_lines("raw", &raw_records, &mut summary)?;
    let residual_slope = fit_lines("residual", &residual_records, &mut summary)?;
    write_file(&out_dir, "voronovskaya_summary.txt", &summary)?;

    match (raw_slope, residual_slope) {
        (Some(raw), Some(residual)) => {
            println!("raw_slope={raw} residual_slope={residual}");
            Ok(0)
        }
        _ => {
            eprintln!("one or both columns sit at the noise floor; no rate fitted there");
            Ok(2)
        }
    }
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Saturated(_) | Error::NonFinite(_) => 2,
        _ => 1,
    }
}

/// Entry point for the binary: parses arguments, dispatches, and converts
/// every outcome into the documented exit codes.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return code;
        }
    };
    let outcome = match &cli.command {
        Command::DensityCheck(args) => cmd_density_check(args),
        Command::Eval(args) => cmd_eval(args),
        Command::Converge(args) => cmd_converge(args),
        Command::Voronovskaya(args) => cmd_voronovskaya(args),
    };
    match outcome {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_defaults_are_sensible() {
        let c = ExperimentConfig::parse("").unwrap();
        assert_eq!(c.kind, OperatorKind::Basic);
        assert_eq!(c.n_values, vec![8, 16, 32, 64, 128, 256]);
        assert_eq!(c.dimension, 1);
        assert_eq!(c.function, "gaussian");
        assert_eq!(c.norm, NormKind::Sup);
        assert_eq!(c.grid_points, 101);
        assert!(!c.derivatives);
    }

    #[test]
    fn config_parses_all_keys() {
        let text = "\
# full config
kind = quadrature
q = 2.5
lambda = 0.8
n = 4, 8, 16
dimension = 2
function = trig
norm = sobolev:1,2
grid_lower = -2
grid_upper = 2, 3
grid_points = 41
theta = 4
weights = 0.1, 0.2, 0.3, 0.4
cell_quad_order = 7
truncation_tol = 1e-10
derivatives = true
m = 3
point = 0.25, -0.5
out = results
";
        let c = ExperimentConfig::parse(text).unwrap();
        assert_eq!(c.kind, OperatorKind::Quadrature);
        assert_eq!(c.q, 2.5);
        assert_eq!(c.n_values, vec![4, 8, 16]);
        assert_eq!(c.dimension, 2);
        assert_eq!(c.norm, NormKind::Sobolev { m: 1, p: 2.0 });
        assert_eq!(c.grid_lower, vec![-2.0, -2.0]); // broadcast
        assert_eq!(c.grid_upper, vec![2.0, 3.0]);
        assert_eq!(c.weights, Some(vec![0.1, 0.2, 0.3, 0.4]));
        assert_eq!(c.point, vec![0.25, -0.5]);
        assert!(c.derivatives);
        assert_eq!(c.out, Some(PathBuf::from("results")));
    }

    #[test]
    fn config_rejects_unknown_duplicate_and_malformed_keys() {
        assert!(ExperimentConfig::parse("qq = 1").is_err());
        assert!(ExperimentConfig::parse("q = 1\nq = 2").is_err());
        assert!(ExperimentConfig::parse("just words").is_err());
        assert!(ExperimentConfig::parse("q = banana").is_err());
        assert!(ExperimentConfig::parse("n = ").is_err());
        assert!(ExperimentConfig::parse("derivatives = yes").is_err());
        assert!(ExperimentConfig::parse("point = 1, 2, 3").is_err()); // dim 1
    }

    #[test]
    fn seventeen_digit_floats_round_trip() {
        for v in [
            0.1,
            std::f64::consts::PI,
            1.0 / 3.0,
            6.02e23,
            -5.5e-300,
            0.0,
        ] {
            let text = fmt17(v);
            let back: f64 = text.parse().unwrap();
            assert_eq!(v.to_bits(), back.to_bits(), "{text}");
        }
    }

    #[test]
    fn csv_fields_with_commas_are_quoted() {
        assert_eq!(csv_field("sup"), "sup");
        assert_eq!(csv_field("sobolev:1,2"), "\"sobolev:1,2\"");
        assert_eq!(csv_field("a\"b"), "\"a\"\"b\"");
    }

    #[test]
    fn operator_config_is_buildable_from_parsed_text() {
        let c = ExperimentConfig::parse("kind = kantorovich\ncell_quad_order = 3").unwrap();
        let cfg = c.operator_config(16).unwrap();
        assert_eq!(cfg.kind(), OperatorKind::Kantorovich);
        assert_eq!(cfg.n(), 16);
        assert_eq!(cfg.cell_quad_order(), 3);
        // invalid parameter surfaces as an error, not a panic
        let bad = ExperimentConfig::parse("q = -1").unwrap();
        assert!(bad.operator_config(8).is_err());
    }
}
