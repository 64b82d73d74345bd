//! The `ptdephase` command line.
//!
//! Exit codes: 0 success, 2 usage or validation, 3 numerical non-convergence,
//! 4 verification failure.

use std::f64::consts::PI;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;

use crate::decoherence::{
    discretize_spectral_density, lambda_continuum, lambda_discrete, lambda_hermitian,
};
use crate::error::Error;
use crate::experiments::{fig1_ordering, linspace, FigureName, DEFAULT_POINTS};
use crate::fock::{composite_residual, similarity_residual, ResidualReport};
use crate::model::{EnvConfig, EnvParams, SystemConfig, Temperature, ZetaForm};
use crate::quadrature::QuadratureConfig;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;
pub const EXIT_VERIFY: i32 = 4;

/// Residuals at or below this level count as converged noise in `verify`.
const RESIDUAL_NOISE_FLOOR: f64 = 1e-12;

#[derive(Debug, Parser)]
#[command(
    name = "ptdephase",
    version,
    about = "Decoherence of a PT-symmetric qubit in a PT-symmetric bosonic bath"
)]
struct Cli {
    /// Cap on worker threads.
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Λ(t) from the continuum spectral density.
    #[command(allow_negative_numbers = true)]
    Lambda(LambdaArgs),
    /// λ(t) of the Hermitian spin-boson model.
    #[command(allow_negative_numbers = true)]
    Hermitian(HermitianArgs),
    /// Reproduce a figure as CSV/JSON series.
    #[command(allow_negative_numbers = true)]
    Figure(FigureArgs),
    /// Check the similarity maps in a truncated Fock space.
    #[command(allow_negative_numbers = true)]
    Verify(VerifyArgs),
    /// Compare discrete-mode and continuum Λ.
    #[command(allow_negative_numbers = true)]
    Oracle(OracleArgs),
}

#[derive(Debug, Args)]
struct BathArgs {
    #[arg(long, default_value_t = 0.0)]
    tau: f64,
    #[arg(long, default_value = "quadratic")]
    zeta_form: ZetaForm,
    #[arg(long, default_value_t = 1.0)]
    delta: f64,
    /// Coupling phase in radians; accepts `pi`, `pi/N`, `K*pi/N`.
    #[arg(long, default_value = "pi/2", value_parser = parse_angle)]
    theta: f64,
    #[arg(long, default_value_t = 1.0)]
    amp: f64,
    #[arg(long, default_value_t = 0.1)]
    cutoff: f64,
    #[arg(long, default_value_t = 300.0, conflicts_with = "zero_temperature")]
    temperature: f64,
    #[arg(long)]
    zero_temperature: bool,
}

impl BathArgs {
    fn temperature(&self) -> Temperature {
        if self.zero_temperature {
            Temperature::Zero
        } else {
            Temperature::Finite(self.temperature)
        }
    }

    fn build(&self) -> crate::Result<EnvConfig> {
        EnvConfig::new(EnvParams {
            tau: self.tau,
            zeta_form: self.zeta_form,
            delta: self.delta,
            amp: self.amp,
            cutoff: self.cutoff,
            temperature: self.temperature(),
            theta: self.theta,
        })
    }
}

#[derive(Debug, Args)]
struct SystemArgs {
    #[arg(long, default_value_t = 0.0)]
    alpha_s: f64,
    /// Set the qubit by its eigenvalue E₁ = sqrt(1 − α_S²) instead.
    #[arg(long, conflicts_with = "alpha_s")]
    e1: Option<f64>,
}

impl SystemArgs {
    fn build(&self) -> crate::Result<SystemConfig> {
        match self.e1 {
            Some(e1) => SystemConfig::from_e1(e1),
            None => SystemConfig::new(self.alpha_s),
        }
    }
}

#[derive(Debug, Args)]
struct QuadArgs {
    #[arg(long, default_value_t = 1e-9)]
    rel_tol: f64,
    #[arg(long, default_value_t = 1e-12)]
    abs_tol: f64,
    #[arg(long, default_value_t = 200)]
    max_subdivisions: usize,
    #[arg(long, default_value_t = 60.0)]
    truncation_factor: f64,
}

impl QuadArgs {
    fn build(&self) -> crate::Result<QuadratureConfig> {
        let cfg = QuadratureConfig {
            rel_tol: self.rel_tol,
            abs_tol: self.abs_tol,
            max_subdivisions: self.max_subdivisions,
            truncation_factor: self.truncation_factor,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    fn params(&self) -> Vec<(String, String)> {
        vec![
            param("rel_tol", format!("{:e}", self.rel_tol)),
            param("abs_tol", format!("{:e}", self.abs_tol)),
            param("max_subdivisions", self.max_subdivisions),
            param("truncation_factor", self.truncation_factor),
        ]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Debug, Args)]
struct OutputArgs {
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Write to this file instead of stdout.
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct TimeArgs {
    /// Evaluation time; repeat for several.
    #[arg(long = "t", num_args = 1.., conflicts_with = "t_max")]
    t: Vec<f64>,
    /// Uniform grid on [0, t-max] instead of explicit times.
    #[arg(long)]
    t_max: Option<f64>,
    #[arg(long, default_value_t = DEFAULT_POINTS, requires = "t_max")]
    n_points: usize,
}

impl TimeArgs {
    fn grid(&self) -> Result<Vec<f64>, Failure> {
        let times = match self.t_max {
            Some(t_max) => {
                if !(t_max.is_finite() && t_max >= 0.0) {
                    return Err(Failure::usage(
                        "--t-max",
                        format!("{t_max} must be finite and >= 0"),
                    ));
                }
                if self.n_points == 0 {
                    return Err(Failure::usage("--n-points", "must be at least 1"));
                }
                linspace(t_max, self.n_points)
            }
            None if self.t.is_empty() => {
                return Err(Failure::usage("--t", "at least one time is required"))
            }
            None => self.t.clone(),
        };
        if let Some(bad) = times.iter().find(|t| !(t.is_finite() && **t >= 0.0)) {
            return Err(Failure::usage(
                "--t",
                format!("{bad} must be finite and >= 0"),
            ));
        }
        Ok(times)
    }
}

#[derive(Debug, Args)]
struct LambdaArgs {
    #[command(flatten)]
    system: SystemArgs,
    #[command(flatten)]
    bath: BathArgs,
    #[command(flatten)]
    times: TimeArgs,
    #[command(flatten)]
    quad: QuadArgs,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Debug, Args)]
struct HermitianArgs {
    #[arg(long, default_value_t = 1.0)]
    amp: f64,
    #[arg(long, default_value_t = 0.1)]
    cutoff: f64,
    #[arg(long, default_value_t = 300.0, conflicts_with = "zero_temperature")]
    temperature: f64,
    #[arg(long)]
    zero_temperature: bool,
    #[command(flatten)]
    times: TimeArgs,
    #[command(flatten)]
    quad: QuadArgs,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Debug, Args)]
struct FigureArgs {
    /// fig1a, fig1b, fig1c, fig2, fig3, fig4 or fig5.
    name: FigureName,
    /// Grid points per series.
    #[arg(long, default_value_t = DEFAULT_POINTS)]
    n_points: usize,
    /// Horizon of the grid: t for time series, τ for fig5.
    #[arg(long)]
    extent: Option<f64>,
    #[command(flatten)]
    quad: QuadArgs,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    /// Fock truncation; repeat for a ladder.
    #[arg(long, num_args = 1.., default_values_t = [20, 40, 80])]
    dim: Vec<usize>,
    #[arg(long, default_value_t = 0.1)]
    tau: f64,
    #[arg(long, default_value_t = 0.6)]
    alpha_s: f64,
    /// Complex coupling such as `0.1` or `0.1+0.05i`.
    #[arg(long, default_value = "0.1", value_parser = parse_complex)]
    coupling: Complex64,
    #[arg(long, default_value = "quadratic")]
    zeta_form: ZetaForm,
    #[arg(long, default_value_t = 1.0)]
    delta: f64,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Debug, Args)]
struct OracleArgs {
    #[command(flatten)]
    system: SystemArgs,
    #[command(flatten)]
    bath: BathArgs,
    #[arg(long = "t", num_args = 1.., default_values_t = [10.0])]
    t: Vec<f64>,
    /// Number of discrete modes; repeat for a convergence ladder.
    #[arg(long, num_args = 1.., default_values_t = [4000])]
    n_modes: Vec<usize>,
    /// Discretisation range in units of the cutoff.
    #[arg(long, default_value_t = 60.0)]
    omega_max_factor: f64,
    /// Exit 4 if the relative deviation at the largest n exceeds this.
    #[arg(long)]
    max_deviation: Option<f64>,
    #[command(flatten)]
    quad: QuadArgs,
    #[command(flatten)]
    output: OutputArgs,
}

/// `pi`, `-pi/2`, `2*pi/3`, `2pi/3` or a plain number of radians.
pub fn parse_angle(s: &str) -> Result<f64, String> {
    let text = s.trim().to_ascii_lowercase();
    if let Ok(v) = text.parse::<f64>() {
        return Ok(v);
    }
    let Some(idx) = text.find("pi") else {
        return Err(format!(
            "`{s}` is not an angle (use radians, pi, pi/N or K*pi/N)"
        ));
    };
    let bad = || format!("`{s}` is not an angle (use radians, pi, pi/N or K*pi/N)");
    let head = text[..idx].trim_end_matches('*').trim();
    let factor = match head {
        "" => 1.0,
        "-" => -1.0,
        h => h.parse::<f64>().map_err(|_| bad())?,
    };
    let tail = text[idx + 2..].trim();
    let divisor = match tail.strip_prefix('/') {
        Some(d) => d.trim().parse::<f64>().map_err(|_| bad())?,
        None if tail.is_empty() => 1.0,
        None => return Err(bad()),
    };
    if divisor == 0.0 {
        return Err(bad());
    }
    Ok(factor * PI / divisor)
}

fn parse_complex(s: &str) -> Result<Complex64, String> {
    s.trim()
        .replace(' ', "")
        .parse::<Complex64>()
        .map_err(|_| format!("`{s}` is not a complex number (e.g. 0.1 or 0.1+0.05i)"))
}

/// A command failure with its exit code.
#[derive(Debug)]
struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn usage(flag: &str, reason: impl std::fmt::Display) -> Self {
        Failure {
            code: EXIT_USAGE,
            message: format!("invalid {flag}: {reason}"),
        }
    }

    fn verify(message: String) -> Self {
        Failure {
            code: EXIT_VERIFY,
            message,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        if e.is_numerical() {
            return Failure {
                code: EXIT_NUMERICAL,
                message: e.to_string(),
            };
        }
        match e.param() {
            Some(p) => Failure::usage(&format!("--{}", flag_for(p)), &e),
            None => Failure {
                code: EXIT_USAGE,
                message: e.to_string(),
            },
        }
    }
}

fn flag_for(param: &str) -> String {
    match param {
        "omega_max" => "omega-max-factor".to_owned(),
        "couplings" => "coupling".to_owned(),
        other => other.replace('_', "-"),
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure {
            code: EXIT_USAGE,
            message: format!("cannot write output: {e}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Cell {
    Num(f64),
    Int(usize),
    Text(String),
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Num(v) => format!("{v:.16e}"),
            Cell::Int(v) => v.to_string(),
            Cell::Text(s) => s.clone(),
        }
    }

    fn json(&self) -> serde_json::Value {
        match self {
            Cell::Num(v) => serde_json::json!(v),
            Cell::Int(v) => serde_json::json!(v),
            Cell::Text(s) => serde_json::json!(s),
        }
    }
}

/// Output table with metadata lines.
#[derive(Debug, Default)]
struct Table {
    params: Vec<(String, String)>,
    columns: Vec<&'static str>,
    rows: Vec<Vec<Cell>>,
}

impl Table {
    fn write_csv(&self, w: &mut dyn Write) -> io::Result<()> {
        for (k, v) in &self.params {
            writeln!(w, "# {k} = {v}")?;
        }
        writeln!(w, "{}", self.columns.join(","))?;
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(Cell::csv).collect();
            writeln!(w, "{}", cells.join(","))?;
        }
        Ok(())
    }

    fn write_json(&self, w: &mut dyn Write) -> io::Result<()> {
        let params: serde_json::Map<String, serde_json::Value> = self
            .params
            .iter()
            .map(|(k, v)| (k.clone(), serde_json::Value::String(v.clone())))
            .collect();
        let rows: Vec<Vec<serde_json::Value>> = self
            .rows
            .iter()
            .map(|r| r.iter().map(Cell::json).collect())
            .collect();
        let doc = serde_json::json!({ "params": params, "columns": self.columns, "rows": rows });
        serde_json::to_writer_pretty(&mut *w, &doc)?;
        writeln!(w)
    }

    fn emit(&self, output: &OutputArgs, out: &mut dyn Write) -> Result<(), Failure> {
        let write = |w: &mut dyn Write| match output.format {
            Format::Csv => self.write_csv(w),
            Format::Json => self.write_json(w),
        };
        match &output.output {
            Some(path) => {
                let mut file = BufWriter::new(File::create(path)?);
                write(&mut file)?;
                file.flush()?;
            }
            None => write(out)?,
        }
        Ok(())
    }
}

fn param(key: &str, value: impl ToString) -> (String, String) {
    (key.to_owned(), value.to_string())
}

fn bath_params(bath: &BathArgs, env: &EnvConfig) -> Vec<(String, String)> {
    vec![
        param("tau", bath.tau),
        param("zeta_form", bath.zeta_form),
        param("zeta", env.zeta()),
        param("delta", bath.delta),
        param("theta", env.theta()),
        param("amp", bath.amp),
        param("cutoff", bath.cutoff),
        param("temperature", bath.temperature().describe()),
    ]
}

fn cmd_lambda(args: &LambdaArgs, out: &mut dyn Write) -> Result<(), Failure> {
    let sys = args.system.build()?;
    let env = args.bath.build()?;
    let cfg = args.quad.build()?;
    let times = args.times.grid()?;
    let series = crate::decoherence::lambda_series(&times, &sys, &env, &cfg)?;
    let mut params = vec![
        param("command", "lambda"),
        param("alpha_s", sys.alpha_s()),
        param("e1", sys.e1()),
    ];
    params.extend(bath_params(&args.bath, &env));
    params.extend(args.quad.params());
    let rows = (0..series.len())
        .map(|i| {
            vec![
                Cell::Num(series.times[i]),
                Cell::Num(series.lambda[i]),
                Cell::Num(series.error_estimates[i]),
            ]
        })
        .collect();
    Table {
        params,
        columns: vec!["t", "lambda", "abs_error"],
        rows,
    }
    .emit(&args.output, out)
}

fn cmd_hermitian(args: &HermitianArgs, out: &mut dyn Write) -> Result<(), Failure> {
    let temperature = if args.zero_temperature {
        Temperature::Zero
    } else {
        Temperature::Finite(args.temperature)
    };
    let cfg = args.quad.build()?;
    let times = args.times.grid()?;
    let mut rows = Vec::with_capacity(times.len());
    for &t in &times {
        let r = lambda_hermitian(t, args.amp, args.cutoff, temperature, &cfg)?;
        rows.push(vec![
            Cell::Num(t),
            Cell::Num(r.value),
            Cell::Num(r.abs_error_estimate),
        ]);
    }
    let mut params = vec![
        param("command", "hermitian"),
        param("amp", args.amp),
        param("cutoff", args.cutoff),
        param("temperature", temperature.describe()),
    ];
    params.extend(args.quad.params());
    Table {
        params,
        columns: vec!["t", "lambda", "abs_error"],
        rows,
    }
    .emit(&args.output, out)
}

fn cmd_figure(args: &FigureArgs, out: &mut dyn Write) -> Result<(), Failure> {
    let cfg = args.quad.build()?;
    let extent = args.extent.unwrap_or_else(|| args.name.default_extent());
    if !(extent.is_finite() && extent > 0.0) {
        return Err(Failure::usage(
            "--extent",
            format!("{extent} must be finite and > 0"),
        ));
    }
    if args.n_points < 2 {
        return Err(Failure::usage("--n-points", "need at least 2 grid points"));
    }
    let figure = args.name.run(extent, args.n_points, &cfg)?;
    let mut params = vec![param("command", "figure"), param("figure", figure.name)];
    params.extend(figure.params.iter().cloned());
    for s in &figure.series {
        let detail: Vec<String> = s.params.iter().map(|(k, v)| format!("{k}={v}")).collect();
        params.push((format!("series {}", s.label), detail.join(" ")));
    }
    if matches!(
        figure.name,
        FigureName::Fig1a | FigureName::Fig1b | FigureName::Fig1c
    ) {
        let ord = fig1_ordering(&figure.series)?;
        params.push(param("final_extremes_ordered", ord.extremes_hold));
        params.push(param("final_middle_pair_ordered", ord.middle_pair_holds));
    }
    let axis_name = figure.series.first().map_or("t", |s| s.axis_name);
    let mut rows = Vec::new();
    for s in &figure.series {
        for i in 0..s.len() {
            rows.push(vec![
                Cell::Text(s.label.clone()),
                Cell::Num(s.axis[i]),
                Cell::Num(s.lambda[i]),
                Cell::Num(s.error_estimates[i]),
            ]);
        }
    }
    Table {
        params,
        columns: vec!["series", axis_name, "lambda", "abs_error"],
        rows,
    }
    .emit(&args.output, out)
}

/// Non-increasing in dim, treating values at the noise floor as converged.
fn residuals_decrease(reports: &[ResidualReport]) -> bool {
    reports
        .windows(2)
        .all(|w| w[1].residual <= w[0].residual || w[1].residual <= RESIDUAL_NOISE_FLOOR)
}

fn cmd_verify(args: &VerifyArgs, out: &mut dyn Write) -> Result<(), Failure> {
    if args.dim.is_empty() {
        return Err(Failure::usage(
            "--dim",
            "at least one dimension is required",
        ));
    }
    if args.dim.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Failure::usage(
            "--dim",
            "dimensions must be strictly increasing",
        ));
    }
    let sys = SystemConfig::new(args.alpha_s)?;
    let env = EnvConfig::new(EnvParams {
        tau: args.tau,
        zeta_form: args.zeta_form,
        delta: args.delta,
        ..EnvParams::default()
    })?;
    let mut single = Vec::new();
    let mut composite = Vec::new();
    for &dim in &args.dim {
        single.push(similarity_residual(dim, &env, 1.0, 1.0)?);
        composite.push(composite_residual(
            dim,
            &sys,
            &env,
            &[args.coupling],
            1.0,
            1.0,
        )?);
    }
    let rows = single
        .iter()
        .map(|r| ("bath", r))
        .chain(composite.iter().map(|r| ("composite", r)))
        .map(|(kind, r)| {
            vec![
                Cell::Text(kind.to_owned()),
                Cell::Int(r.dim),
                Cell::Num(r.tau),
                Cell::Num(r.zeta),
                Cell::Num(r.delta),
                Cell::Int(r.block_size),
                Cell::Num(r.residual),
            ]
        })
        .collect();
    let ok = residuals_decrease(&single) && residuals_decrease(&composite);
    Table {
        params: vec![
            param("command", "verify"),
            param("alpha_s", args.alpha_s),
            param("coupling", args.coupling),
            param("zeta_form", args.zeta_form),
            param("m", 1),
            param("k", 1),
            param("residuals_decrease", ok),
        ],
        columns: vec![
            "kind",
            "dim",
            "tau",
            "zeta",
            "delta",
            "block_size",
            "residual",
        ],
        rows,
    }
    .emit(&args.output, out)?;
    if ok {
        Ok(())
    } else {
        Err(Failure::verify(
            "residuals do not decrease with dim".to_owned(),
        ))
    }
}

fn cmd_oracle(args: &OracleArgs, out: &mut dyn Write) -> Result<(), Failure> {
    let sys = args.system.build()?;
    let env = args.bath.build()?;
    let cfg = args.quad.build()?;
    if let Some(bad) = args.t.iter().find(|t| !(t.is_finite() && **t >= 0.0)) {
        return Err(Failure::usage(
            "--t",
            format!("{bad} must be finite and >= 0"),
        ));
    }
    if args.n_modes.is_empty() {
        return Err(Failure::usage(
            "--n-modes",
            "at least one mode count is required",
        ));
    }
    if let Some(max) = args.max_deviation {
        if !(max.is_finite() && max >= 0.0) {
            return Err(Failure::usage(
                "--max-deviation",
                format!("{max} must be finite and >= 0"),
            ));
        }
    }
    let omega_max = args.omega_max_factor * env.cutoff();
    let mut rows = Vec::new();
    let mut worst_final: f64 = 0.0;
    for &t in &args.t {
        let continuum = lambda_continuum(t, &sys, &env, &cfg)?;
        for (k, &n) in args.n_modes.iter().enumerate() {
            let modes =
                discretize_spectral_density(env.amp(), env.cutoff(), env.theta(), n, omega_max)?;
            let discrete = lambda_discrete(
                t,
                &modes,
                sys.e1(),
                env.zeta(),
                env.delta(),
                env.temperature(),
            )?;
            let diff = (discrete - continuum.value).abs();
            let deviation = if continuum.value > 0.0 {
                diff / continuum.value
            } else {
                diff
            };
            if k + 1 == args.n_modes.len() {
                worst_final = worst_final.max(deviation);
            }
            rows.push(vec![
                Cell::Num(t),
                Cell::Int(n),
                Cell::Num(discrete),
                Cell::Num(continuum.value),
                Cell::Num(continuum.abs_error_estimate),
                Cell::Num(deviation),
            ]);
        }
    }
    let mut params = vec![
        param("command", "oracle"),
        param("alpha_s", sys.alpha_s()),
        param("e1", sys.e1()),
        param("omega_max", omega_max),
    ];
    params.extend(bath_params(&args.bath, &env));
    params.extend(args.quad.params());
    if let Some(max) = args.max_deviation {
        params.push(param("max_deviation", max));
    }
    Table {
        params,
        columns: vec![
            "t",
            "n_modes",
            "discrete",
            "continuum",
            "abs_error",
            "rel_deviation",
        ],
        rows,
    }
    .emit(&args.output, out)?;
    match args.max_deviation {
        Some(max) if worst_final > max => Err(Failure::verify(format!(
            "relative deviation {worst_final:e} exceeds --max-deviation {max:e}"
        ))),
        _ => Ok(()),
    }
}

fn dispatch(cli: &Cli, out: &mut dyn Write) -> Result<(), Failure> {
    match &cli.command {
        Command::Lambda(a) => cmd_lambda(a, out),
        Command::Hermitian(a) => cmd_hermitian(a, out),
        Command::Figure(a) => cmd_figure(a, out),
        Command::Verify(a) => cmd_verify(a, out),
        Command::Oracle(a) => cmd_oracle(a, out),
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, S>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let rendered = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(err, "{rendered}");
                EXIT_USAGE
            } else {
                let _ = write!(out, "{rendered}");
                EXIT_OK
            };
        }
    };
    let result = match cli.threads {
        Some(0) => Err(Failure::usage("--threads", "must be at least 1")),
        Some(n) => match rayon::ThreadPoolBuilder::new().num_threads(n).build() {
            Ok(pool) => {
                let mut buffer = Vec::new();
                let result = pool.install(|| dispatch(&cli, &mut buffer));
                out.write_all(&buffer).map_err(Failure::from).and(result)
            }
            Err(e) => Err(Failure::usage("--threads", e)),
        },
        None => dispatch(&cli, out),
    };
    match result {
        Ok(()) => EXIT_OK,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_capture(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = run(
            std::iter::once("ptdephase").chain(args.iter().copied()),
            &mut out,
            &mut err,
        );
        (
            code,
            String::from_utf8(out).unwrap(),
            String::from_utf8(err).unwrap(),
        )
    }

    #[test]
    fn angles() {
        assert_eq!(parse_angle("pi").unwrap(), PI);
        assert_eq!(parse_angle("pi/2").unwrap(), PI / 2.0);
        assert_eq!(parse_angle("-pi/3").unwrap(), -PI / 3.0);
        assert_eq!(parse_angle("2*pi/3").unwrap(), 2.0 * PI / 3.0);
        assert_eq!(parse_angle("2pi").unwrap(), 2.0 * PI);
        assert_eq!(parse_angle("0.25").unwrap(), 0.25);
        assert!(parse_angle("pi/0").is_err());
        assert!(parse_angle("tau").is_err());
        assert!(parse_angle("pi*2").is_err());
    }

    #[test]
    fn complex_coupling() {
        assert_eq!(parse_complex("0.1").unwrap(), Complex64::new(0.1, 0.0));
        assert_eq!(
            parse_complex("0.1+0.05i").unwrap(),
            Complex64::new(0.1, 0.05)
        );
        assert_eq!(
            parse_complex("0.1 - 0.05i").unwrap(),
            Complex64::new(0.1, -0.05)
        );
        assert!(parse_complex("x").is_err());
    }

    #[test]
    fn csv_layout() {
        let (code, out, _) = run_capture(&["lambda", "--t", "0", "--t", "1"]);
        assert_eq!(code, 0);
        let data: Vec<&str> = out.lines().filter(|l| !l.starts_with('#')).collect();
        assert_eq!(data[0], "t,lambda,abs_error");
        assert_eq!(data.len(), 3);
        assert!(data[1].starts_with("0.0000000000000000e0,0.0000000000000000e0,"));
        assert!(out.contains("# alpha_s = 0"));
    }

    #[test]
    fn validation_names_the_flag() {
        let (code, _, err) = run_capture(&["lambda", "--alpha-s", "1.5", "--t", "1"]);
        assert_eq!(code, EXIT_USAGE);
        assert!(err.contains("--alpha-s"), "{err}");
        let (code, _, err) = run_capture(&["lambda", "--cutoff", "-1", "--t", "1"]);
        assert_eq!(code, EXIT_USAGE);
        assert!(err.contains("--cutoff"), "{err}");
        let (code, _, err) = run_capture(&["lambda", "--rel-tol", "0", "--t", "1"]);
        assert_eq!(code, EXIT_USAGE);
        assert!(err.contains("--rel-tol"), "{err}");
        let (code, _, err) = run_capture(&["lambda", "--t", "-1"]);
        assert_eq!(code, EXIT_USAGE);
        assert!(err.contains("--t"), "{err}");
        let (code, _, _) = run_capture(&["lambda"]);
        assert_eq!(code, EXIT_USAGE);
        let (code, _, _) = run_capture(&["figure", "fig9"]);
        assert_eq!(code, EXIT_USAGE);
        let (code, _, err) = run_capture(&["verify", "--dim", "4"]);
        assert_eq!(code, EXIT_USAGE);
        assert!(err.contains("--dim"), "{err}");
        let (code, _, err) = run_capture(&["--threads", "0", "lambda", "--t", "1"]);
        assert_eq!(code, EXIT_USAGE);
        assert!(err.contains("--threads"), "{err}");
    }

    #[test]
    fn non_convergence_exit_code() {
        let (code, _, err) = run_capture(&[
            "lambda",
            "--t",
            "10",
            "--max-subdivisions",
            "0",
            "--rel-tol",
            "1e-15",
            "--abs-tol",
            "1e-300",
        ]);
        assert_eq!(code, EXIT_NUMERICAL, "{err}");
    }

    #[test]
    fn help_goes_to_stdout() {
        let (code, out, _) = run_capture(&["--help"]);
        assert_eq!(code, 0);
        assert!(out.contains("verify"));
    }

    #[test]
    fn residual_monotonicity_rule() {
        let report = |residual| ResidualReport {
            dim: 0,
            tau: 0.0,
            zeta: 1.0,
            delta: 1.0,
            block_size: 0,
            residual,
        };
        assert!(residuals_decrease(&[
            report(1e-5),
            report(1e-9),
            report(1e-11)
        ]));
        assert!(residuals_decrease(&[report(1e-15), report(3e-15)]));
        assert!(!residuals_decrease(&[report(1e-9), report(1e-6)]));
    }
}
