//! `mww` command-line front end: simulate panels, estimate `d` and `Omega`
//! from CSV, and run Monte-Carlo scenarios.
//!
//! Exit codes: 0 success, 1 runtime failure, 2 parse or configuration error,
//! 3 infeasible scale range, 4 invalid covariance.

pub mod io;

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use mww_core::harness::{run_scenario, MCReport, Scenario};
use mww_core::lrd::{simulate_arfima, ArfimaSpec, LongRunCov, MemoryParams};
use mww_core::mww::{estimate_panel, EstimationConfig, MwwEstimate, PairFlag, ScaleSelection};
use mww_core::plot::{matrix_grid, Histogram};
use mww_core::wavelet::WaveletSpec;
use mww_core::MwwError;
use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_SCALES: i32 = 3;
pub const EXIT_COVARIANCE: i32 = 4;

#[derive(Debug, Clone, PartialEq)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    pub fn parse(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_CONFIG,
            message: message.into(),
        }
    }

    pub fn io(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_FAILURE,
            message: message.into(),
        }
    }
}

impl From<MwwError> for CliError {
    fn from(e: MwwError) -> Self {
        let code = match e {
            MwwError::ScaleRange { .. } | MwwError::InsufficientData { .. } => EXIT_SCALES,
            MwwError::NotPositiveDefinite(_) | MwwError::Singular => EXIT_COVARIANCE,
            MwwError::AllReplicationsFailed(_) | MwwError::UndefinedRatio(_) => EXIT_FAILURE,
            MwwError::UnsupportedOrder(_)
            | MwwError::Domain { .. }
            | MwwError::VanishingMoments { .. }
            | MwwError::Config(_)
            | MwwError::Dimension(_) => EXIT_CONFIG,
        };
        Self {
            code,
            message: e.to_string(),
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "mww",
    version,
    about = "Multivariate wavelet Whittle estimation"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Estimate d, Omega and correlations from a CSV panel.
    Estimate(EstimateArgs),
    /// Simulate an ARFIMA(0,d,0) panel to CSV.
    Simulate(SimulateArgs),
    /// Run a Monte-Carlo scenario file.
    Mc(McArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
pub struct EstimateArgs {
    /// CSV panel: header row of channel names, one row per time point.
    #[arg(long)]
    pub input: PathBuf,
    /// Report path; standard output when omitted.
    #[arg(long)]
    pub output: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Vanishing moments of the Daubechies wavelet.
    #[arg(long = "M", default_value_t = 4)]
    pub m: usize,
    #[arg(long, default_value_t = 1)]
    pub j0: usize,
    /// Coarsest scale; defaults to, and is clamped to, the coarsest usable one.
    #[arg(long)]
    pub j1: Option<usize>,
    /// Subtract each channel's mean before the transform.
    #[arg(long)]
    pub demean: bool,
    /// Write `bin_center,count` histogram data of the estimated d.
    #[arg(long)]
    pub histogram: Option<PathBuf>,
    #[arg(long)]
    pub bins: Option<usize>,
    /// Write the correlation matrix as `row,col,value` triples.
    #[arg(long)]
    pub correlation_grid: Option<PathBuf>,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
pub struct SimulateArgs {
    /// Memory exponents, comma separated.
    #[arg(
        long,
        value_delimiter = ',',
        required = true,
        allow_hyphen_values = true
    )]
    pub d: Vec<f64>,
    /// Common correlation with unit variances.
    #[arg(long, allow_hyphen_values = true, conflicts_with = "omega_file")]
    pub rho: Option<f64>,
    /// Long-run covariance as rows of numbers.
    #[arg(long)]
    pub omega_file: Option<PathBuf>,
    #[arg(long = "N")]
    pub n: usize,
    /// Reject exponents at or above this number of vanishing moments.
    #[arg(long = "M", default_value_t = 4)]
    pub m: usize,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    #[arg(long)]
    pub truncation: Option<usize>,
    #[arg(long)]
    pub burn_in: Option<usize>,
    /// CSV path; standard output when omitted.
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
pub struct McArgs {
    /// TOML scenario file.
    #[arg(long)]
    pub scenario: PathBuf,
    /// Output prefix; writes `<prefix>.json` and `<prefix>.csv`. Standard
    /// output (in `--format`) when omitted.
    #[arg(long)]
    pub output: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Override the scenario's replication count.
    #[arg(long)]
    pub reps: Option<usize>,
    /// Override the scenario's root seed.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Keep per-replication estimates in the JSON report.
    #[arg(long)]
    pub raw: bool,
}

/// Configuration echo attached to every estimate report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EstimateEcho {
    pub tool: String,
    pub version: String,
    pub args: EstimateArgs,
    pub estimation: EstimationConfig,
    pub scales: ScaleSelection,
}

impl PartialEq for EstimateArgs {
    fn eq(&self, other: &Self) -> bool {
        serde_json::to_value(self).ok() == serde_json::to_value(other).ok()
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct EstimateReport {
    pub config: EstimateEcho,
    pub channels: Vec<String>,
    pub samples: usize,
    pub d: Vec<f64>,
    pub objective: f64,
    pub g_hat: Vec<Vec<f64>>,
    /// Non-finite entries serialize as `null`.
    pub omega: Vec<Vec<f64>>,
    pub correlation: Vec<Vec<f64>>,
    pub converged: bool,
    pub iterations: usize,
    pub gradient_norm: f64,
    pub flags: Vec<PairFlag>,
    pub warnings: Vec<String>,
}

fn rows(m: &DMatrix<f64>) -> Vec<Vec<f64>> {
    (0..m.nrows())
        .map(|r| (0..m.ncols()).map(|c| m[(r, c)]).collect())
        .collect()
}

impl EstimateReport {
    pub fn new(
        config: EstimateEcho,
        channels: Vec<String>,
        samples: usize,
        e: &MwwEstimate,
    ) -> Self {
        Self {
            config,
            channels,
            samples,
            d: e.d.0.clone(),
            objective: e.objective,
            g_hat: rows(&e.g_hat),
            omega: rows(&e.omega),
            correlation: rows(&e.correlation),
            converged: e.diagnostics.converged,
            iterations: e.diagnostics.iterations,
            gradient_norm: e.diagnostics.gradient_norm,
            flags: e.diagnostics.flags.clone(),
            warnings: e.diagnostics.warnings.clone(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes") + "\n"
    }

    /// Long-format CSV `quantity,row,col,value`, preceded by the echo and
    /// warnings as `#` comment lines.
    pub fn to_csv(&self) -> String {
        let mut out = format!(
            "# config = {}\n",
            serde_json::to_string(&self.config).expect("echo serializes")
        );
        for w in &self.warnings {
            out.push_str(&format!("# warning: {w}\n"));
        }
        let mut w = csv::Writer::from_writer(Vec::new());
        let mut put = |q: &str, r: String, c: String, v: f64| {
            w.write_record([q.to_string(), r, c, v.to_string()])
                .expect("in-memory write");
        };
        put("objective", String::new(), String::new(), self.objective);
        for (i, v) in self.d.iter().enumerate() {
            put("d", i.to_string(), String::new(), *v);
        }
        for (name, m) in [
            ("g_hat", &self.g_hat),
            ("omega", &self.omega),
            ("correlation", &self.correlation),
        ] {
            for (i, row) in m.iter().enumerate() {
                for (j, v) in row.iter().enumerate() {
                    put(name, i.to_string(), j.to_string(), *v);
                }
            }
        }
        out.push_str("quantity,row,col,value\n");
        out.push_str(&String::from_utf8(w.into_inner().expect("flush")).expect("utf8"));
        out
    }
}

fn emit(path: Option<&Path>, text: &str, out: &mut dyn Write) -> Result<(), CliError> {
    match path {
        Some(p) => io::write_atomic(p, text),
        None => out
            .write_all(text.as_bytes())
            .map_err(|e| CliError::io(format!("stdout: {e}"))),
    }
}

pub fn cmd_estimate(args: &EstimateArgs, out: &mut dyn Write) -> Result<EstimateReport, CliError> {
    let file = io::read_panel(&args.input)?;
    let spec = WaveletSpec::daubechies(args.m)?;
    let panel = if args.demean {
        file.panel.demeaned()
    } else {
        file.panel.clone()
    };
    let config = EstimationConfig::default().with_scales(args.j0, args.j1);
    let est = estimate_panel(&panel, &spec, &config)?;
    let echo = EstimateEcho {
        tool: "mww".into(),
        version: env!("CARGO_PKG_VERSION").into(),
        args: args.clone(),
        estimation: config,
        scales: est.diagnostics.scales,
    };
    let report = EstimateReport::new(echo, file.names, panel.len(), &est);
    let text = match args.format {
        Format::Json => report.to_json(),
        Format::Csv => report.to_csv(),
    };
    emit(args.output.as_deref(), &text, out)?;

    let echo_line = format!(
        "config = {}",
        serde_json::to_string(&report.config).expect("echo serializes")
    );
    if let Some(path) = &args.histogram {
        let h = Histogram::new(&report.d, args.bins);
        io::write_atomic(path, &format!("# {echo_line}\n{}", h.to_text()))?;
    }
    if let Some(path) = &args.correlation_grid {
        let mut text = format!("# {echo_line}\nrow,col,value\n");
        for (r, c, v) in matrix_grid(&est.correlation) {
            text.push_str(&format!("{r},{c},{v}\n"));
        }
        io::write_atomic(path, &text)?;
    }
    Ok(report)
}

/// Simulation spec described by the flags.
pub fn simulation_spec(args: &SimulateArgs) -> Result<ArfimaSpec, CliError> {
    let d = MemoryParams::new(args.d.clone())?;
    let p = d.len();
    let omega = match (&args.rho, &args.omega_file) {
        (Some(r), None) => LongRunCov::equicorrelated(p, *r)?,
        (None, Some(path)) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| CliError::parse(format!("{}: {e}", path.display())))?;
            LongRunCov::new(io::parse_matrix(&text)?)?
        }
        (None, None) => LongRunCov::identity(p),
        (Some(_), Some(_)) => return Err(CliError::parse("give either --rho or --omega-file")),
    };
    let mut spec = ArfimaSpec::new(d, omega, args.n, args.seed).with_moment_bound(args.m);
    if let Some(t) = args.truncation {
        spec.truncation = t;
    }
    if let Some(b) = args.burn_in {
        spec.burn_in = b;
    }
    spec.validate()?;
    Ok(spec)
}

#[derive(Serialize)]
struct SimulateEcho<'a> {
    tool: &'a str,
    version: &'a str,
    args: &'a SimulateArgs,
    omega: Vec<Vec<f64>>,
    truncation: usize,
    burn_in: usize,
}

pub fn cmd_simulate(args: &SimulateArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let spec = simulation_spec(args)?;
    let panel = simulate_arfima(&spec)?;
    let names: Vec<String> = (1..=panel.channels()).map(|i| format!("x{i}")).collect();
    let echo = SimulateEcho {
        tool: "mww",
        version: env!("CARGO_PKG_VERSION"),
        args,
        omega: rows(spec.omega.matrix()),
        truncation: spec.truncation,
        burn_in: spec.burn_in,
    };
    let comment = format!(
        "config = {}",
        serde_json::to_string(&echo).expect("echo serializes")
    );
    emit(
        args.output.as_deref(),
        &io::format_panel(&names, &panel, &[comment]),
        out,
    )
}

pub fn cmd_mc(args: &McArgs, out: &mut dyn Write) -> Result<MCReport, CliError> {
    let mut scenario = Scenario::load(&args.scenario)?;
    if let Some(r) = args.reps {
        scenario.reps = r;
    }
    if let Some(s) = args.seed {
        scenario.seed = s;
    }
    scenario.keep_raw |= args.raw;
    scenario.validate()?;
    let report = run_scenario(&scenario)?;
    match &args.output {
        Some(prefix) => {
            io::write_atomic(&prefix.with_extension("json"), &(report.to_json() + "\n"))?;
            io::write_atomic(&prefix.with_extension("csv"), &report.to_csv())?;
        }
        None => {
            let text = match args.format {
                Format::Json => report.to_json() + "\n",
                Format::Csv => report.to_csv(),
            };
            emit(None, &text, out)?;
        }
    }
    Ok(report)
}

/// Parses `args` (including the program name) and runs the command.
/// Returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_CONFIG } else { EXIT_OK };
            let sink: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = write!(sink, "{}", e.render());
            return code;
        }
    };
    let result = match &cli.command {
        Command::Estimate(a) => cmd_estimate(a, out).map(|r| {
            for w in &r.warnings {
                let _ = writeln!(err, "warning: {w}");
            }
        }),
        Command::Simulate(a) => cmd_simulate(a, out),
        Command::Mc(a) => cmd_mc(a, out).map(|r| {
            if r.failures > 0 {
                let _ = writeln!(
                    err,
                    "warning: {} of {} replications excluded",
                    r.failures, r.replications
                );
            }
        }),
    };
    match result {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let _ = writeln!(err, "error: {}", e.message);
            e.code
        }
    }
}
