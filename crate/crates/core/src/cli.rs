//! Command-line front end. Every command writes CSV or JSON to `--out` (or
//! stdout) and exits 0 on pass, 1 on a failed check, 2 on a usage error and 3
//! on a numerical failure.

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use std::fmt::Write as _;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use crate::basis::{reconstruct, shared_engine, BasisEngine, BasisTable, SeminormEnvelope, X_CAP};
use crate::checks::{
    classical_suite, interpolation_suite, kernel_suite, lp_suite, poisson_suite, theta_suite, SuiteReport,
};
use crate::classical::{sinc_limit, sinc_product_partial};
use crate::error::{Error, Result};
use crate::fourier::fixture;
use crate::lattice::{lattice_fixture, lattice_packing_density, minimal_length, poisson_check, Lattice, PoissonPair};
use crate::lp::{
    gaussian_certificate, lp_bound_sharpness_gap, lp_certificate_check, product_triangle_certificate,
    triangle_certificate, CertificateOutcome, SharpnessGap,
};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Theta,
    Kernels,
    Interpolation,
    Poisson,
    Lp,
    Classical,
}

#[derive(Debug, Parser)]
#[command(name = "fourier-interp", version, about = "Fourier interpolation basis, kernel checks and lattice tools")]
pub struct Cli {
    #[command(flatten)]
    pub options: Options,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Default, Args)]
pub struct Options {
    /// Tolerance for residuals without a fixed threshold.
    #[arg(long, global = true)]
    pub abs_tol: Option<f64>,
    /// Largest basis index (basis-table).
    #[arg(long, global = true)]
    pub max_n: Option<usize>,
    /// Terms in the interpolation sums, or J for `classical`.
    #[arg(long = "truncation-N", global = true)]
    pub truncation_n: Option<usize>,
    /// start:stop:step
    #[arg(long, global = true)]
    pub x_grid: Option<String>,
    /// Test function, lattice or certificate label, depending on the command.
    #[arg(long, global = true)]
    pub fixture: Option<String>,
    /// Lattice basis file: dimension n, then n rows of n numbers.
    #[arg(long, global = true)]
    pub lattice_file: Option<PathBuf>,
    /// Output format (default csv).
    #[arg(long, global = true)]
    pub format: Option<Format>,
    /// Output file; stdout when absent.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Seed for sampled property checks.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Flat key=value file; flags take precedence over it.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Tabulate aₙ and âₙ on an x grid.
    BasisTable,
    /// Run a property suite and report every check.
    Verify { suite: Suite },
    /// Reconstruct a fixture from its values at √n.
    Reconstruct {
        /// Comma-separated x values; defaults to the x grid.
        #[arg(long, value_delimiter = ',')]
        x: Vec<f64>,
    },
    /// Poisson summation for a Gaussian on a lattice.
    Poisson {
        #[arg(long)]
        radius: Option<f64>,
        /// Gaussian e^{−πt|x|²} dilation t.
        #[arg(long, default_value_t = 1.0)]
        dilation: f64,
    },
    /// Check an LP certificate (triangle, product-triangle, gaussian).
    LpCheck,
    /// Packing density of a lattice.
    LatticeDensity,
    /// Partial sine product against sin(πx)/(πx) as plot data.
    Classical,
}

/// Settings after merging flags, config file and defaults.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunConfig {
    pub abs_tol: f64,
    pub truncation_n: usize,
    pub max_n: usize,
    pub x_grid: (f64, f64, f64),
    pub output_path: Option<PathBuf>,
    pub format: Format,
    pub seed: u64,
    pub fixture: Option<String>,
    pub lattice_file: Option<PathBuf>,
    pub x_cap: f64,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            abs_tol: 1e-3,
            truncation_n: crate::basis::DEFAULT_TRUNCATION,
            max_n: 6,
            x_grid: (0.0, 3.0, 0.1),
            output_path: None,
            format: Format::Csv,
            seed: 20240917,
            fixture: None,
            lattice_file: None,
            x_cap: X_CAP,
        }
    }
}

pub fn parse_grid(spec: &str) -> Result<(f64, f64, f64)> {
    let parts: Vec<&str> = spec.split(':').collect();
    if parts.len() != 3 {
        return Err(Error::InvalidArgument(format!("x grid must be start:stop:step, got '{spec}'")));
    }
    let num = |s: &str| s.trim().parse::<f64>().map_err(|_| Error::InvalidArgument(format!("bad grid number '{s}'")));
    let (a, b, s) = (num(parts[0])?, num(parts[1])?, num(parts[2])?);
    if !(s > 0.0) || !(b >= a) || a < 0.0 || !b.is_finite() {
        return Err(Error::InvalidArgument(format!("invalid x grid '{spec}': need 0 <= start <= stop and step > 0")));
    }
    Ok((a, b, s))
}

/// start + k·step for k = 0, 1, … while ≤ stop (with rounding slack).
pub fn grid_points((a, b, s): (f64, f64, f64)) -> Vec<f64> {
    let k = ((b - a) / s + 1e-9).floor() as usize;
    (0..=k).map(|i| a + i as f64 * s).collect()
}

fn parse_config_file(path: &Path) -> Result<Vec<(String, String)>> {
    let text = std::fs::read_to_string(path)?;
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| Error::Parse(format!("{}:{}: expected key=value", path.display(), i + 1)))?;
        out.push((k.trim().to_string(), v.trim().to_string()));
    }
    Ok(out)
}

fn parse_val<T: std::str::FromStr>(key: &str, v: &str) -> Result<T> {
    v.parse().map_err(|_| Error::Parse(format!("bad value '{v}' for {key}")))
}

impl RunConfig {
    pub fn resolve(opts: &Options) -> Result<Self> {
        let mut c = RunConfig::default();
        if let Some(path) = &opts.config {
            for (k, v) in parse_config_file(path)? {
                match k.as_str() {
                    "abs_tol" => c.abs_tol = parse_val(&k, &v)?,
                    "truncation_N" => c.truncation_n = parse_val(&k, &v)?,
                    "max_n" => c.max_n = parse_val(&k, &v)?,
                    "x_grid" => c.x_grid = parse_grid(&v)?,
                    "out" => c.output_path = Some(PathBuf::from(v)),
                    "format" => {
                        c.format = Format::from_str(&v, true).map_err(|_| Error::Parse(format!("bad format '{v}'")))?
                    }
                    "seed" => c.seed = parse_val(&k, &v)?,
                    "fixture" => c.fixture = Some(v),
                    "lattice_file" => c.lattice_file = Some(PathBuf::from(v)),
                    "x_cap" => c.x_cap = parse_val(&k, &v)?,
                    _ => return Err(Error::Parse(format!("unknown config key '{k}'"))),
                }
            }
        }
        if let Some(v) = opts.abs_tol {
            c.abs_tol = v;
        }
        if let Some(v) = opts.truncation_n {
            c.truncation_n = v;
        }
        if let Some(v) = opts.max_n {
            c.max_n = v;
        }
        if let Some(v) = &opts.x_grid {
            c.x_grid = parse_grid(v)?;
        }
        if let Some(v) = &opts.out {
            c.output_path = Some(v.clone());
        }
        if let Some(v) = opts.format {
            c.format = v;
        }
        if let Some(v) = opts.seed {
            c.seed = v;
        }
        if let Some(v) = &opts.fixture {
            c.fixture = Some(v.clone());
        }
        if let Some(v) = &opts.lattice_file {
            c.lattice_file = Some(v.clone());
        }
        if !(c.abs_tol > 0.0) {
            return Err(Error::InvalidTolerance(format!("abs_tol must be positive, got {}", c.abs_tol)));
        }
        if c.truncation_n == 0 {
            return Err(Error::InvalidArgument("truncation_N must be positive".into()));
        }
        Ok(c)
    }
}

fn exit_code_for(e: &Error) -> i32 {
    match e {
        Error::InvalidArgument(_)
        | Error::InvalidTolerance(_)
        | Error::Parse(_)
        | Error::Io(_)
        | Error::ShapeMismatch(_)
        | Error::SingularBasis { .. }
        | Error::IndexOutOfRange { .. }
        | Error::OutsideRegionS { .. }
        | Error::InvalidPoint { .. } => EXIT_USAGE,
        _ => EXIT_NUMERICAL,
    }
}

fn emit(cfg: &RunConfig, body: &str) -> Result<()> {
    match &cfg.output_path {
        Some(p) => std::fs::write(p, body)?,
        None => std::io::stdout().write_all(body.as_bytes())?,
    }
    Ok(())
}

// summaries go to stdout when the payload went to a file
fn say(cfg: &RunConfig, msg: &str) {
    if cfg.output_path.is_some() {
        println!("{msg}");
    } else {
        eprintln!("{msg}");
    }
}

fn json<T: Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("report serializes") + "\n"
}

fn f(v: f64) -> String {
    format!("{v:.16e}")
}

/// Parses `args` (including the program name) and runs the command.
pub fn run_from<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    let cfg = match RunConfig::resolve(&cli.options) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_USAGE;
        }
    };
    match run(&cli.command, &cfg) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code_for(&e)
        }
    }
}

pub fn run(cmd: &Command, cfg: &RunConfig) -> Result<i32> {
    match cmd {
        Command::BasisTable => cmd_basis_table(cfg),
        Command::Verify { suite } => cmd_verify(cfg, *suite),
        Command::Reconstruct { x } => cmd_reconstruct(cfg, x),
        Command::Poisson { radius, dilation } => cmd_poisson(cfg, *radius, *dilation),
        Command::LpCheck => cmd_lp_check(cfg),
        Command::LatticeDensity => cmd_lattice_density(cfg),
        Command::Classical => cmd_classical(cfg),
    }
}

#[derive(Serialize)]
struct NodeSummary {
    max_n: usize,
    node_deviation: f64,
    threshold: f64,
    max_imag: f64,
    imag_threshold: f64,
}

pub fn cmd_basis_table(cfg: &RunConfig) -> Result<i32> {
    let engine = BasisEngine::new(cfg.max_n)?;
    let grid = grid_points(cfg.x_grid);
    warn_beyond_cap(cfg, &grid);
    let table = BasisTable::build(&engine, cfg.max_n, &grid).map_err(|e| match e {
        Error::NonFiniteIntegrand { re, im } => {
            Error::ToleranceUnreachable(format!("non-finite basis value at n={im}, x={re}"))
        }
        other => other,
    })?;
    let body = match cfg.format {
        Format::Csv => table.to_csv(),
        Format::Json => table.to_json(),
    };
    emit(cfg, &body)?;
    // deviation from δₙₘ at the nodes √m, m ≤ max_n, computed directly
    let mut dev: f64 = 0.0;
    if cfg.max_n == 0 {
        let a00 = engine.value(0, false, 0.0)?.value;
        say(cfg, &format!("a_0(0) = {a00:.17}"));
        dev = (a00 - 0.5).abs();
    }
    for m in 1..=cfg.max_n {
        let x = (m as f64).sqrt();
        for n in 0..=cfg.max_n {
            let target = if n == m { 1.0 } else { 0.0 };
            dev = dev.max((engine.value(n, false, x)?.value - target).abs());
            if n >= 1 {
                dev = dev.max(engine.value(n, true, x)?.value.abs());
            }
        }
    }
    let max_imag = table.max_imag.iter().cloned().fold(0.0, f64::max);
    let s = NodeSummary { max_n: cfg.max_n, node_deviation: dev, threshold: 1e-4, max_imag, imag_threshold: 1e-8 };
    say(cfg, &format!("node-matrix max deviation {dev:.3e} (threshold 1e-4); max imaginary part {max_imag:.3e} (threshold 1e-8)"));
    Ok(if s.node_deviation < s.threshold && s.max_imag < s.imag_threshold { EXIT_PASS } else { EXIT_CHECK_FAILED })
}

fn warn_beyond_cap(cfg: &RunConfig, xs: &[f64]) -> bool {
    let beyond = xs.iter().any(|&x| x > cfg.x_cap);
    if beyond {
        eprintln!("warning: x beyond the cap {} loses accuracy; tolerance widened 100-fold there", cfg.x_cap);
    }
    beyond
}

fn suite_csv(r: &SuiteReport) -> String {
    let mut s = String::from("check,value,threshold,pass\n");
    for c in &r.checks {
        let _ = writeln!(s, "\"{}\",{},{},{}", c.name, f(c.value), f(c.threshold), c.pass);
    }
    s
}

#[derive(Serialize)]
struct VerifyOutput<'a> {
    #[serde(flatten)]
    report: &'a SuiteReport,
    pass: bool,
}

pub fn cmd_verify(cfg: &RunConfig, suite: Suite) -> Result<i32> {
    let report = match suite {
        Suite::Theta => theta_suite(cfg.seed)?,
        Suite::Kernels => kernel_suite(cfg.seed)?,
        Suite::Interpolation => interpolation_suite(&*shared_engine()?)?,
        Suite::Poisson => poisson_suite()?,
        Suite::Lp => lp_suite(cfg.fixture.as_deref().unwrap_or("e8"))?,
        Suite::Classical => classical_suite(cfg.seed)?,
    };
    let body = match cfg.format {
        // JSON is the natural report; CSV lists the checks only
        Format::Json => json(&VerifyOutput { report: &report, pass: report.pass() }),
        Format::Csv => suite_csv(&report),
    };
    emit(cfg, &body)?;
    for (name, v) in &report.notes {
        say(cfg, &format!("{name}: {v:.10}"));
    }
    match report.first_failure() {
        None => Ok(EXIT_PASS),
        Some(c) => {
            eprintln!("check failed: {} (value {:e}, threshold {:e})", c.name, c.value, c.threshold);
            Ok(EXIT_CHECK_FAILED)
        }
    }
}

#[derive(Serialize)]
struct ReconstructionRow {
    #[serde(flatten)]
    report: crate::basis::ReconstructionReport,
    threshold: f64,
    pass: bool,
}

pub fn cmd_reconstruct(cfg: &RunConfig, xs: &[f64]) -> Result<i32> {
    let label = cfg.fixture.clone().unwrap_or_else(|| "gaussian".into());
    let pair = fixture(&label).ok_or_else(|| Error::InvalidArgument(format!("unknown fixture '{label}'")))?;
    let xs: Vec<f64> = if xs.is_empty() { grid_points(cfg.x_grid) } else { xs.to_vec() };
    if xs.iter().any(|&x| !(x >= 0.0)) {
        return Err(Error::InvalidArgument("x values must be nonnegative".into()));
    }
    warn_beyond_cap(cfg, &xs);
    let engine = shared_engine()?;
    let env = SeminormEnvelope::fit(&engine)?;
    let mut rows = Vec::new();
    for &x in &xs {
        let report = reconstruct(&engine, &env, &pair, x, cfg.truncation_n)?;
        let threshold = if x > cfg.x_cap { cfg.abs_tol * 100.0 } else { cfg.abs_tol };
        rows.push(ReconstructionRow { report, threshold, pass: report.abs_error < threshold });
    }
    let body = match cfg.format {
        Format::Json => json(&rows),
        Format::Csv => {
            let mut s = String::from("x,truncation_N,reconstructed,reference,abs_error,term_tail_bound,threshold,pass\n");
            for r in &rows {
                let p = &r.report;
                let _ = writeln!(
                    s,
                    "{},{},{},{},{},{},{},{}",
                    f(p.x),
                    p.truncation_n,
                    f(p.reconstructed),
                    f(p.reference),
                    f(p.abs_error),
                    f(p.term_tail_bound),
                    f(r.threshold),
                    r.pass
                );
            }
            s
        }
    };
    emit(cfg, &body)?;
    Ok(if rows.iter().all(|r| r.pass) { EXIT_PASS } else { EXIT_CHECK_FAILED })
}

fn load_lattice(cfg: &RunConfig, default: &str) -> Result<Lattice> {
    if let Some(p) = &cfg.lattice_file {
        return Lattice::load(p);
    }
    let label = cfg.fixture.clone().unwrap_or_else(|| default.into());
    lattice_fixture(&label).ok_or_else(|| Error::InvalidArgument(format!("unknown lattice fixture '{label}'")))
}

#[derive(Serialize)]
struct PoissonOutput {
    lattice: String,
    dilation: f64,
    radius: f64,
    #[serde(flatten)]
    report: crate::lattice::PoissonReport,
    threshold: f64,
    pass: bool,
}

pub fn cmd_poisson(cfg: &RunConfig, radius: Option<f64>, t: f64) -> Result<i32> {
    if !(t > 0.0) {
        return Err(Error::InvalidArgument(format!("dilation must be positive, got {t}")));
    }
    let l = load_lattice(cfg, "z1")?;
    // both Gaussians below ~1e−16 at the default radius
    let radius = radius.unwrap_or_else(|| (37.0 / (std::f64::consts::PI * t.min(1.0 / t))).sqrt() + 0.5);
    let report = poisson_check(&PoissonPair::gaussian(l.dimension, t), &l, radius)?;
    let threshold = 1e-9;
    let out = PoissonOutput {
        lattice: l.label.clone(),
        dilation: t,
        radius,
        report,
        threshold,
        pass: report.residual < threshold,
    };
    let body = match cfg.format {
        Format::Json => json(&out),
        Format::Csv => format!(
            "lattice,dilation,radius,lhs,rhs,residual,lhs_tail_bound,rhs_tail_bound,threshold,pass\n{},{},{},{},{},{},{},{},{},{}\n",
            out.lattice,
            f(t),
            f(radius),
            f(report.lhs.re),
            f(report.rhs.re),
            f(report.residual),
            f(report.lhs_tail_bound),
            f(report.rhs_tail_bound),
            f(threshold),
            out.pass
        ),
    };
    emit(cfg, &body)?;
    Ok(if out.pass { EXIT_PASS } else { EXIT_CHECK_FAILED })
}

#[derive(Serialize)]
struct LpOutput {
    certificate: String,
    dimension: usize,
    r: f64,
    outcome: CertificateOutcome,
    slack: f64,
    gap_lattice: Option<String>,
    gap: Option<SharpnessGap>,
}

pub fn cmd_lp_check(cfg: &RunConfig) -> Result<i32> {
    let label = cfg.fixture.clone().unwrap_or_else(|| "triangle".into());
    let (cert, lattice) = match label.as_str() {
        "triangle" => (triangle_certificate(), Some("z1")),
        "product-triangle" => (product_triangle_certificate(), Some("z2")),
        "gaussian" => (gaussian_certificate(8, 2f64.sqrt()), None),
        other => return Err(Error::InvalidArgument(format!("unknown certificate '{other}'"))),
    };
    let outcome = lp_certificate_check(&cert);
    let passed = matches!(outcome, CertificateOutcome::Bound(_));
    let gap = match (passed, lattice) {
        (true, Some(l)) => Some(lp_bound_sharpness_gap(&lattice_fixture(l).expect("fixture"), &cert, 20.0)?),
        _ => None,
    };
    let out = LpOutput {
        certificate: cert.label.clone(),
        dimension: cert.dimension,
        r: cert.r,
        outcome,
        slack: cert.slack,
        gap_lattice: lattice.filter(|_| passed).map(String::from),
        gap,
    };
    let body = match cfg.format {
        Format::Json => json(&out),
        Format::Csv => {
            let (kind, radius, value) = match &out.outcome {
                CertificateOutcome::Bound(b) => ("bound".to_string(), f64::NAN, *b),
                CertificateOutcome::Violation { condition, radius, value } => {
                    (format!("violation-{condition}"), *radius, *value)
                }
            };
            format!(
                "certificate,dimension,r,outcome,radius,value,slack\n{},{},{},{},{},{},{}\n",
                out.certificate,
                out.dimension,
                f(out.r),
                kind,
                f(radius),
                f(value),
                f(out.slack)
            )
        }
    };
    emit(cfg, &body)?;
    if let Some(g) = &out.gap {
        say(cfg, &format!("dropped terms {:.3e} + {:.3e}, slack {:.3e}", g.dropped_f, g.dropped_f_hat, g.slack));
    }
    Ok(if passed { EXIT_PASS } else { EXIT_CHECK_FAILED })
}

#[derive(Serialize)]
struct DensityOutput {
    lattice: String,
    dimension: usize,
    covolume: f64,
    minimal_length: f64,
    density: f64,
    density_root: f64,
}

pub fn cmd_lattice_density(cfg: &RunConfig) -> Result<i32> {
    let l = load_lattice(cfg, "e8")?;
    let density = lattice_packing_density(&l)?;
    let out = DensityOutput {
        lattice: l.label.clone(),
        dimension: l.dimension,
        covolume: l.covolume(),
        minimal_length: minimal_length(&l)?,
        density,
        density_root: density.powf(1.0 / l.dimension as f64),
    };
    let body = match cfg.format {
        Format::Json => json(&out),
        Format::Csv => format!(
            "lattice,dimension,covolume,minimal_length,density,density_root\n{},{},{},{},{},{}\n",
            out.lattice,
            out.dimension,
            f(out.covolume),
            f(out.minimal_length),
            f(out.density),
            f(out.density_root)
        ),
    };
    emit(cfg, &body)?;
    Ok(EXIT_PASS)
}

#[derive(Serialize)]
struct ProductRow {
    x: f64,
    value: f64,
    error: f64,
    threshold: f64,
}

/// Columns x, value, error for Π_{j≤N}(1 − x²/j²); the threshold is the
/// empirical bound x² ln N / N.
pub fn cmd_classical(cfg: &RunConfig) -> Result<i32> {
    let j = cfg.truncation_n;
    let grid = grid_points(cfg.x_grid);
    let jf = j as f64;
    let rows: Vec<ProductRow> = grid
        .iter()
        .map(|&x| {
            let value = sinc_product_partial(x, j);
            let error = (value - sinc_limit(x)).abs();
            ProductRow { x, value, error, threshold: x * x * jf.ln().max(1.0) / jf + 1e-15 }
        })
        .collect();
    let body = match cfg.format {
        Format::Json => json(&rows),
        Format::Csv => {
            let mut s = String::from("x,value,error,threshold\n");
            for r in &rows {
                let _ = writeln!(s, "{},{},{},{}", f(r.x), f(r.value), f(r.error), f(r.threshold));
            }
            s
        }
    };
    emit(cfg, &body)?;
    Ok(if rows.iter().all(|r| r.error <= r.threshold) { EXIT_PASS } else { EXIT_CHECK_FAILED })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grids() {
        assert_eq!(grid_points(parse_grid("0:2.5:0.1").unwrap()).len(), 26);
        assert!(parse_grid("0:1:0").is_err());
        assert!(parse_grid("1:0:0.1").is_err());
        assert!(parse_grid("0:1").is_err());
    }

    #[test]
    fn precedence() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("run.cfg");
        std::fs::write(&p, "# comment\nmax_n = 3\nseed=5\nformat=json\n").unwrap();
        let mut o = Options { config: Some(p.clone()), ..Default::default() };
        let c = RunConfig::resolve(&o).unwrap();
        assert_eq!((c.max_n, c.seed, c.format), (3, 5, Format::Json));
        o.max_n = Some(9);
        assert_eq!(RunConfig::resolve(&o).unwrap().max_n, 9);
        std::fs::write(&p, "colour=blue\n").unwrap();
        assert!(RunConfig::resolve(&o).is_err());
        assert_eq!(RunConfig::resolve(&Options::default()).unwrap(), RunConfig::default());
    }

    #[test]
    fn usage_errors_exit_2() {
        assert_eq!(run_from(["fi", "basis-table", "--x-grid", "0:1:0"]), EXIT_USAGE);
        assert_eq!(run_from(["fi", "frobnicate"]), EXIT_USAGE);
        assert_eq!(run_from(["fi", "reconstruct", "--fixture", "nope"]), EXIT_USAGE);
    }
}
