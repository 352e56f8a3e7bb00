//! Command-line front end: run configuration, β sweeps, ensembles and the
//! closed-form comparison report.
//!
//! Settings come from an optional `--config` file of `key = value` lines
//! (`#` starts a comment) and from flags; flags win. Keys match the long
//! flag names without the leading dashes.
//!
//! Output is CSV with a `beta,l` header (`beta,l,seed` for ensembles),
//! `.` as decimal separator and LF line endings. Optional `#` footer lines
//! carry the limit classification. Numbers are written in the shortest
//! form that parses back to the same `f64`.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::Parser;

use crate::analytic::{classify_limits, IntegrableCase, LimitClassification};
use crate::derivatives::{sweep_curve, InvestmentCurve, StencilConfig, StencilOrder};
use crate::error::Error;
use crate::model::{CouplingProfile, ModelParams};
use crate::profiles::{ensemble_sweep, make_profile, ProfileKind, ProfileSpec, SeedEnsemble};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Config(String),
    #[error("numerical failure: {0}")]
    Numerical(String),
    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => EXIT_CONFIG,
            CliError::Numerical(_) => EXIT_NUMERICAL,
            CliError::Io { .. } => 1,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        if e.is_numerical() {
            CliError::Numerical(e.to_string())
        } else {
            CliError::Config(e.to_string())
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum CouplingSource {
    Profile(ProfileKind),
    Explicit(Vec<f64>),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Spacing {
    Linear,
    Log,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BetaGrid {
    pub min: f64,
    pub max: f64,
    pub count: usize,
    pub spacing: Spacing,
}

impl Default for BetaGrid {
    fn default() -> Self {
        Self {
            min: 0.0,
            max: 10.0,
            count: 200,
            spacing: Spacing::Linear,
        }
    }
}

impl BetaGrid {
    pub fn points(&self) -> Vec<f64> {
        if self.count == 1 {
            return vec![self.min];
        }
        let last = (self.count - 1) as f64;
        let mut pts: Vec<f64> = match self.spacing {
            Spacing::Linear => (0..self.count)
                .map(|k| self.min + (self.max - self.min) * (k as f64 / last))
                .collect(),
            Spacing::Log => {
                let (a, b) = (self.min.ln(), self.max.ln());
                (0..self.count)
                    .map(|k| (a + (b - a) * (k as f64 / last)).exp())
                    .collect()
            }
        };
        pts[0] = self.min;
        pts[self.count - 1] = self.max;
        pts
    }

    fn validate(&self) -> Result<(), String> {
        if self.count == 0 {
            return Err("beta-count must be at least 1".into());
        }
        if !(self.min >= 0.0) || !self.min.is_finite() || !self.max.is_finite() {
            return Err("beta-min and beta-max must be finite with beta-min >= 0".into());
        }
        if self.count > 1 && !(self.max > self.min) {
            return Err("beta-max must exceed beta-min when beta-count > 1".into());
        }
        if self.spacing == Spacing::Log && !(self.min > 0.0) {
            return Err("log-grid requires beta-min > 0".into());
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub q: usize,
    pub couplings: CouplingSource,
    pub beta_grid: BetaGrid,
    pub stencil: StencilConfig,
    pub seeds: Vec<u64>,
    /// `None` writes to standard output.
    pub output_path: Option<PathBuf>,
    pub emit_limits: bool,
    pub compare: bool,
}

#[derive(Debug, Parser)]
#[command(
    name = "potts-invest",
    version,
    about = "Per-capita investment l(beta) of a ring of q-level interacting agents"
)]
struct Args {
    /// Read settings from a key=value file; flags override it
    #[arg(long, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Number of investment levels
    #[arg(long)]
    q: Option<String>,
    /// aggressive | conservative | random
    #[arg(long)]
    profile: Option<String>,
    /// Explicit couplings "j0,j1,..."
    #[arg(long, allow_hyphen_values = true)]
    couplings: Option<String>,
    #[arg(long = "beta-min")]
    beta_min: Option<String>,
    #[arg(long = "beta-max")]
    beta_max: Option<String>,
    #[arg(long = "beta-count")]
    beta_count: Option<String>,
    /// Logarithmically spaced beta grid
    #[arg(long = "log-grid")]
    log_grid: bool,
    /// Field step of the derivative stencil
    #[arg(long)]
    xi: Option<String>,
    /// Stencil order: 2 or 4
    #[arg(long)]
    order: Option<String>,
    /// Random-profile seeds "s1,s2,..."
    #[arg(long)]
    seeds: Option<String>,
    #[arg(long = "eigen-tol")]
    eigen_tol: Option<String>,
    #[arg(long = "eigen-max-iter")]
    eigen_max_iter: Option<String>,
    /// Output CSV path (standard output when absent)
    #[arg(long, value_name = "PATH")]
    out: Option<String>,
    /// Append the beta -> 0 / beta -> infinity classification as comments
    #[arg(long = "emit-limits")]
    emit_limits: bool,
    /// Compare the numeric curve with the closed form
    #[arg(long)]
    compare: bool,
}

/// Settings before validation: every key is optional.
#[derive(Debug, Default)]
struct Draft {
    q: Option<usize>,
    profile: Option<ProfileKind>,
    couplings: Option<Vec<f64>>,
    grid: BetaGrid,
    stencil: StencilConfig,
    seeds: Option<Vec<u64>>,
    out: Option<PathBuf>,
    emit_limits: bool,
    compare: bool,
}

fn parse_num<T: std::str::FromStr>(value: &str) -> Result<T, String> {
    value
        .trim()
        .parse()
        .map_err(|_| format!("cannot parse '{value}'"))
}

fn parse_list<T: std::str::FromStr>(value: &str) -> Result<Vec<T>, String> {
    value
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(parse_num)
        .collect()
}

fn parse_bool(value: &str) -> Result<bool, String> {
    match value.trim() {
        "true" | "yes" | "1" | "on" => Ok(true),
        "false" | "no" | "0" | "off" => Ok(false),
        other => Err(format!("expected true or false, got '{other}'")),
    }
}

impl Draft {
    fn set(&mut self, key: &str, value: &str) -> Result<(), String> {
        let key = key.trim().replace('_', "-");
        match key.as_str() {
            "q" => self.q = Some(parse_num(value)?),
            "profile" => {
                self.profile = Some(value.trim().parse().map_err(|e: Error| e.to_string())?)
            }
            "couplings" => self.couplings = Some(parse_list(value)?),
            "beta-min" => self.grid.min = parse_num(value)?,
            "beta-max" => self.grid.max = parse_num(value)?,
            "beta-count" => self.grid.count = parse_num(value)?,
            "log-grid" => {
                self.grid.spacing = if parse_bool(value)? {
                    Spacing::Log
                } else {
                    Spacing::Linear
                }
            }
            "xi" => self.stencil.xi = parse_num(value)?,
            "order" => {
                self.stencil.order = match value.trim() {
                    "2" => StencilOrder::TwoPoint,
                    "4" => StencilOrder::FourPoint,
                    other => return Err(format!("order must be 2 or 4, got '{other}'")),
                }
            }
            "seeds" => self.seeds = Some(parse_list(value)?),
            "eigen-tol" => self.stencil.eigen_tol = parse_num(value)?,
            "eigen-max-iter" => self.stencil.eigen_max_iter = parse_num(value)?,
            "out" => self.out = Some(PathBuf::from(value.trim())),
            "emit-limits" => self.emit_limits = parse_bool(value)?,
            "compare" => self.compare = parse_bool(value)?,
            other => return Err(format!("unknown key '{other}'")),
        }
        Ok(())
    }

    fn apply_file(&mut self, path: &Path, text: &str) -> Result<(), CliError> {
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let anchor =
                |msg: String| CliError::Config(format!("{}:{}: {msg}", path.display(), i + 1));
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| anchor("expected 'key = value'".into()))?;
            self.set(key, value).map_err(anchor)?;
        }
        Ok(())
    }

    fn finish(self) -> Result<RunConfig, String> {
        let couplings = match (self.profile, self.couplings) {
            (Some(_), Some(_)) => {
                return Err("give either a profile or explicit couplings, not both".into())
            }
            (None, None) => return Err("a profile or explicit couplings is required".into()),
            (Some(kind), None) => CouplingSource::Profile(kind),
            (None, Some(j)) => CouplingSource::Explicit(j),
        };
        let q = match (&couplings, self.q) {
            (CouplingSource::Explicit(j), Some(q)) if q != j.len() => {
                return Err(format!("q = {q} but {} couplings were given", j.len()))
            }
            (CouplingSource::Explicit(j), _) => j.len(),
            (CouplingSource::Profile(_), Some(q)) => q,
            (CouplingSource::Profile(_), None) => return Err("q is required with a profile".into()),
        };
        if q < 2 {
            return Err(format!("q must be at least 2, got {q}"));
        }
        self.grid.validate()?;
        self.stencil.validate().map_err(|e| e.to_string())?;

        let is_random = couplings == CouplingSource::Profile(ProfileKind::Random);
        let seeds = self.seeds.unwrap_or_default();
        if is_random && seeds.is_empty() {
            return Err("the random profile needs --seeds".into());
        }
        if !is_random && !seeds.is_empty() {
            return Err("seeds only apply to the random profile".into());
        }
        if self.compare && is_random {
            return Err(
                "compare needs fixed couplings; random profiles have no closed form".into(),
            );
        }
        Ok(RunConfig {
            q,
            couplings,
            beta_grid: self.grid,
            stencil: self.stencil,
            seeds,
            output_path: self.out,
            emit_limits: self.emit_limits,
            compare: self.compare,
        })
    }
}

/// Outcome of parsing the command line.
#[derive(Debug)]
pub enum Invocation {
    Run(RunConfig),
    /// `--help` / `--version` text, to be printed with exit status 0.
    Info(String),
}

pub fn parse_args<I, T>(args: I) -> Result<Invocation, CliError>
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let args = match Args::try_parse_from(args) {
        Ok(a) => a,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    Ok(Invocation::Info(e.render().to_string()))
                }
                _ => Err(CliError::Config(
                    e.render().to_string().trim_end().to_string(),
                )),
            };
        }
    };

    let mut draft = Draft::default();
    if let Some(path) = &args.config {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
        draft.apply_file(path, &text)?;
    }

    let flags: [(&str, &Option<String>); 12] = [
        ("q", &args.q),
        ("profile", &args.profile),
        ("couplings", &args.couplings),
        ("beta-min", &args.beta_min),
        ("beta-max", &args.beta_max),
        ("beta-count", &args.beta_count),
        ("xi", &args.xi),
        ("order", &args.order),
        ("seeds", &args.seeds),
        ("eigen-tol", &args.eigen_tol),
        ("eigen-max-iter", &args.eigen_max_iter),
        ("out", &args.out),
    ];
    for (key, value) in flags {
        if let Some(v) = value {
            draft
                .set(key, v)
                .map_err(|m| CliError::Config(format!("--{key}: {m}")))?;
        }
    }
    if args.log_grid {
        draft.grid.spacing = Spacing::Log;
    }
    if args.emit_limits {
        draft.emit_limits = true;
    }
    if args.compare {
        draft.compare = true;
    }
    draft
        .finish()
        .map(Invocation::Run)
        .map_err(|m| CliError::Config(format!("config: {m}")))
}

/// Rendered results of one invocation.
#[derive(Debug, Clone, PartialEq)]
pub struct RunOutput {
    pub csv: String,
    /// One-line summary for the terminal (comparison mode).
    pub summary: Option<String>,
}

fn fixed_couplings(config: &RunConfig) -> Result<CouplingProfile, CliError> {
    let profile = match &config.couplings {
        CouplingSource::Explicit(j) => CouplingProfile::new(j.clone())?,
        CouplingSource::Profile(kind) => make_profile(&ProfileSpec {
            kind: *kind,
            q: config.q,
            seed: None,
        })?,
    };
    Ok(profile)
}

fn fmt_limit(l: Option<f64>) -> String {
    l.map_or_else(|| "undefined".to_string(), |v| v.to_string())
}

fn write_limits(out: &mut String, prefix: &str, lim: &LimitClassification) {
    let _ = writeln!(
        out,
        "# {prefix}beta_zero={} beta_infinity={} unique_min={} uniform_ground_state={}",
        lim.beta_zero,
        fmt_limit(lim.beta_infinity),
        lim.unique_min,
        lim.uniform_ground_state
    );
}

fn render_curve(curve: &InvestmentCurve, limits: Option<&LimitClassification>) -> String {
    let mut out = String::from("beta,l\n");
    for p in &curve.points {
        let _ = writeln!(out, "{},{}", p.beta, p.l);
    }
    if let Some(lim) = limits {
        write_limits(&mut out, "", lim);
    }
    out
}

fn render_ensemble(ens: &SeedEnsemble, emit_limits: bool) -> String {
    let mut out = String::from("beta,l,seed\n");
    for curve in &ens.curves {
        let seed = curve.seed.expect("ensemble members carry their seed");
        for p in &curve.points {
            let _ = writeln!(out, "{},{},{seed}", p.beta, p.l);
        }
    }
    for p in &ens.mean_curve.points {
        let _ = writeln!(out, "{},{},mean", p.beta, p.l);
    }
    if emit_limits {
        for (seed, lim) in ens.seeds.iter().zip(&ens.limits) {
            write_limits(&mut out, &format!("seed={seed} "), lim);
        }
        if let Some(first) = ens.limits.first() {
            let _ = writeln!(out, "# mean beta_zero={}", first.beta_zero);
        }
    }
    out
}

fn render_comparison(config: &RunConfig, params: &ModelParams) -> Result<RunOutput, CliError> {
    let case = IntegrableCase::detect(params).ok_or_else(|| {
        CliError::Config(
            "config: compare: no closed form for these couplings; closed forms exist for \
             q=2 with any (J0,J1), and q=3 with J=(0,0,J), (0,J,0) or (J,0,0)"
                .into(),
        )
    })?;
    let curve = sweep_curve(params, &config.beta_grid.points(), &config.stencil)?;
    let mut csv = String::from("beta,numeric,closed_form,abs_error\n");
    let mut max_err: f64 = 0.0;
    for p in &curve.points {
        let exact = case.investment(p.beta);
        let err = (p.l - exact).abs();
        max_err = max_err.max(err);
        let _ = writeln!(csv, "{},{},{},{}", p.beta, p.l, exact, err);
    }
    let summary = format!("max_abs_error={max_err:e} case={}", case.describe());
    let _ = writeln!(csv, "# {summary}");
    if config.emit_limits {
        write_limits(&mut csv, "", &classify_limits(params));
    }
    Ok(RunOutput {
        csv,
        summary: Some(summary),
    })
}

/// Runs the configured sweep and renders it, without touching the file
/// system.
pub fn execute(config: &RunConfig) -> Result<RunOutput, CliError> {
    let betas = config.beta_grid.points();
    if config.couplings == CouplingSource::Profile(ProfileKind::Random) {
        let ens = ensemble_sweep(config.q, &config.seeds, &betas, &config.stencil)?;
        return Ok(RunOutput {
            csv: render_ensemble(&ens, config.emit_limits),
            summary: None,
        });
    }
    let params = ModelParams::new(fixed_couplings(config)?, 0.0)?;
    if config.compare {
        return render_comparison(config, &params);
    }
    let curve = sweep_curve(&params, &betas, &config.stencil)?;
    let limits = config.emit_limits.then(|| classify_limits(&params));
    Ok(RunOutput {
        csv: render_curve(&curve, limits.as_ref()),
        summary: None,
    })
}

/// Executes and writes the CSV in one piece once every point is computed.
pub fn run(config: &RunConfig) -> Result<RunOutput, CliError> {
    let output = execute(config)?;
    if let Some(path) = &config.output_path {
        std::fs::write(path, &output.csv).map_err(|source| CliError::Io {
            path: path.clone(),
            source,
        })?;
    }
    Ok(output)
}

/// Full command-line entry point; returns the process exit status.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let config = match parse_args(args) {
        Ok(Invocation::Run(c)) => c,
        Ok(Invocation::Info(text)) => {
            print!("{text}");
            return EXIT_OK;
        }
        Err(e) => {
            eprintln!("error: {e}");
            return e.exit_code();
        }
    };
    match run(&config) {
        Ok(output) => {
            if config.output_path.is_none() {
                print!("{}", output.csv);
            }
            if let Some(s) = output.summary {
                eprintln!("{s}");
            }
            EXIT_OK
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
