//! Command-line front end. Exit codes: 0 success, 1 domain failure
//! (certification, reconstruction, failed checks), 2 usage error.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::Deserialize;
use serde_json::json;

use crate::charfn::{delta_expanded, Bvp, CharEval, Problem};
use crate::funcrep::{Cubic, PiecewisePoly, Rho};
use crate::inverse::{reconstruct, SpectraPair};
use crate::nonuniq::{build_sr, confusable_pairs, verify_coincidence, BumpSpec};
use crate::spectrum::{fmt, locate_eigenvalues, Spectrum};
use crate::traces::{trace_compare, trend, write_csv as write_trace_csv};
use crate::verify;
use crate::Error;

pub const MAX_N: usize = 5000;
pub const DEFAULT_N: usize = 200;
pub const DEFAULT_M: usize = 150;
pub const THREADS_VAR: &str = "FROZEN_SPECTRA_THREADS";

#[derive(Parser, Debug)]
#[command(
    name = "frozen-spectra",
    version,
    about = "Spectra of -y'' + p(x) y(a) + q(x) y(b) on (0, pi)"
)]
pub struct RunConfig {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Export Delta_j and its parts on a straight line of lambda values (CSV).
    Charfn {
        #[arg(long)]
        problem: PathBuf,
        #[arg(long, default_value_t = 0)]
        j: u8,
        #[arg(long, allow_negative_numbers = true)]
        from: f64,
        #[arg(long, allow_negative_numbers = true)]
        to: f64,
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        from_im: f64,
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        to_im: f64,
        #[arg(long, default_value_t = 101)]
        count: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Locate and certify the first N eigenvalues.
    Spectrum {
        #[arg(long)]
        problem: PathBuf,
        #[arg(long, default_value_t = 0)]
        j: u8,
        #[arg(long, default_value_t = DEFAULT_N)]
        n: usize,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        /// Both spectra as a JSON array `[j = 0, j = 1]`, the input of `reconstruct`.
        #[arg(long)]
        pair: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Trace coefficients against eigenvalue partial sums (CSV).
    Trace {
        #[arg(long)]
        problem: PathBuf,
        #[arg(long, default_value_t = 0)]
        j: u8,
        #[arg(long, default_value_t = DEFAULT_N)]
        n: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Build the two coefficient pairs generated by a bump and compare their spectra.
    NonuniqDemo {
        #[arg(long)]
        a: f64,
        #[arg(long)]
        b: f64,
        /// JSON `{"profile": {"breakpoints": [0, ..., T], "coeffs": [[[re, im], ...], ...]}}`.
        #[arg(long)]
        bump: PathBuf,
        #[arg(long, default_value = ".")]
        out_dir: PathBuf,
        #[arg(long, default_value_t = 20)]
        eigenvalues: usize,
    },
    /// Rebuild p, q vanishing on [0, b] from a spectra pair file.
    Reconstruct {
        #[arg(long)]
        spectra: PathBuf,
        #[arg(long)]
        a: f64,
        #[arg(long)]
        b: f64,
        #[arg(long, default_value_t = DEFAULT_M)]
        m: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run an invariant suite.
    Verify {
        #[arg(long, default_value = "all")]
        suite: String,
    },
}

#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Domain(String),
}

impl Failure {
    pub fn code(&self) -> i32 {
        match self {
            Failure::Usage(_) => 2,
            Failure::Domain(_) => 1,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Json(_) | Error::Parse(_) | Error::InvalidArguments { .. } | Error::Precondition(_) => {
                Failure::Usage(e.to_string())
            }
            other => Failure::Domain(other.to_string()),
        }
    }
}

type CliResult<T> = std::result::Result<T, Failure>;

fn usage(msg: impl Into<String>) -> Failure {
    Failure::Usage(msg.into())
}

impl RunConfig {
    /// Range checks clap cannot express.
    pub fn validate(&self) -> CliResult<()> {
        let check_n = |n: usize| {
            if (1..=MAX_N).contains(&n) {
                Ok(())
            } else {
                Err(usage(format!("--n must lie in 1..={MAX_N}, got {n}")))
            }
        };
        let check_j = |j: u8| Bvp::from_index(j).map(|_| ()).map_err(Failure::from);
        match &self.command {
            Command::Charfn {
                j,
                count,
                from,
                to,
                from_im,
                to_im,
                ..
            } => {
                check_j(*j)?;
                if *count < 1 {
                    return Err(usage("--count must be at least 1"));
                }
                if ![from, to, from_im, to_im].iter().all(|x| x.is_finite()) {
                    return Err(usage("grid end points must be finite"));
                }
                Ok(())
            }
            Command::Spectrum { j, n, format, pair, .. } => {
                check_j(*j)?;
                check_n(*n)?;
                if *pair && *format == Format::Csv {
                    return Err(usage("--pair writes JSON; pass --format json"));
                }
                Ok(())
            }
            Command::Trace { j, n, .. } => {
                check_j(*j)?;
                check_n(*n)
            }
            Command::NonuniqDemo { eigenvalues, .. } => {
                if *eigenvalues > MAX_N {
                    return Err(usage(format!("--eigenvalues must not exceed {MAX_N}")));
                }
                Ok(())
            }
            Command::Reconstruct { m, .. } => {
                if !(1..=MAX_N).contains(m) {
                    return Err(usage(format!("--m must lie in 1..={MAX_N}, got {m}")));
                }
                Ok(())
            }
            Command::Verify { suite } => {
                if verify::SUITES.contains(&suite.as_str()) {
                    Ok(())
                } else {
                    Err(usage(format!(
                        "unknown suite '{suite}', expected one of {}",
                        verify::SUITES.join(", ")
                    )))
                }
            }
        }
    }
}

/// Parses `args` (program name first), runs the command and returns the exit code.
pub fn main_with<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let config = match RunConfig::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = if code == 0 {
                write!(stdout, "{e}")
            } else {
                write!(stderr, "{e}")
            };
            return code;
        }
    };
    if let Err(msg) = configure_threads() {
        let _ = writeln!(stderr, "error: {msg}");
        return 2;
    }
    match config.validate().and_then(|_| run(&config, stdout)) {
        Ok(code) => code,
        Err(f) => {
            let msg = match &f {
                Failure::Usage(m) => format!("usage error: {m}"),
                Failure::Domain(m) => format!("error: {m}"),
            };
            let _ = writeln!(stderr, "{msg}");
            f.code()
        }
    }
}

fn configure_threads() -> std::result::Result<(), String> {
    let Ok(raw) = std::env::var(THREADS_VAR) else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|n| *n > 0)
        .ok_or_else(|| format!("{THREADS_VAR} must be a positive integer, got '{raw}'"))?;
    // a second call in the same process finds the pool already built, which is fine
    let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    Ok(())
}

fn read_text(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|e| usage(format!("cannot read {}: {e}", path.display())))
}

fn parse_json<T: for<'de> Deserialize<'de>>(path: &Path) -> CliResult<T> {
    let text = read_text(path)?;
    serde_json::from_str(&text).map_err(|e| usage(format!("{}: {e}", path.display())))
}

pub fn read_problem(path: &Path) -> CliResult<Problem> {
    parse_json(path)
}

/// Writes through a temporary file in the target directory, then renames.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> std::io::Result<()> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(bytes)?;
    tmp.flush()?;
    tmp.persist(path).map_err(|e| e.error)?;
    Ok(())
}

fn emit(out: &Option<PathBuf>, bytes: Vec<u8>, stdout: &mut dyn Write) -> CliResult<()> {
    match out {
        Some(path) => {
            write_atomic(path, &bytes).map_err(|e| Failure::Domain(format!("cannot write {}: {e}", path.display())))
        }
        None => stdout.write_all(&bytes).map_err(|e| Failure::Domain(e.to_string())),
    }
}

fn to_json_bytes(v: &serde_json::Value) -> Vec<u8> {
    let mut s = serde_json::to_string_pretty(v).expect("values serialize");
    s.push('\n');
    s.into_bytes()
}

/// `count` evenly spaced points from `from` to `to`, both included.
pub fn line_grid(from: Complex64, to: Complex64, count: usize) -> Vec<Complex64> {
    if count == 1 {
        return vec![from];
    }
    (0..count)
        .map(|k| from + (to - from) * (k as f64 / (count - 1) as f64))
        .collect()
}

pub fn grid_rows(prob: &Problem, j: Bvp, grid: &[Complex64]) -> Vec<CharEval> {
    grid.par_iter()
        .map(|&l| delta_expanded(j, &Rho::from_lambda(l), prob))
        .collect()
}

/// `x` rounded to `digits` significant digits, as text.
pub fn round_sig(x: f64, digits: usize) -> String {
    format!("{:.*e}", digits.saturating_sub(1), x)
}

pub fn grid_export<W: Write>(prob: &Problem, j: Bvp, grid: &[Complex64], out: W) -> crate::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record([
        "lambda_re",
        "lambda_im",
        "delta_re",
        "delta_im",
        "phi_re",
        "phi_im",
        "a0_re",
        "a0_im",
        "a1_re",
        "a1_im",
        "b_re",
        "b_im",
    ])
    .map_err(crate::spectrum::csv_err)?;
    for e in grid_rows(prob, j, grid) {
        let cells: Vec<String> = [e.lambda, e.total, e.phi_pi, e.a0, e.a1, e.b]
            .iter()
            .flat_map(|z| [fmt(z.re), fmt(z.im)])
            .collect();
        w.write_record(&cells).map_err(crate::spectrum::csv_err)?;
    }
    w.flush()?;
    Ok(())
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct BumpFile {
    profile: ProfileJson,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ProfileJson {
    breakpoints: Vec<f64>,
    coeffs: Vec<Vec<[f64; 2]>>,
}

pub fn read_bump(path: &Path) -> CliResult<BumpSpec> {
    let file: BumpFile = parse_json(path)?;
    let mut pieces = Vec::with_capacity(file.profile.coeffs.len());
    for (k, cs) in file.profile.coeffs.iter().enumerate() {
        if cs.len() > 4 {
            return Err(usage(format!(
                "{}: profile piece {k} has degree above 3",
                path.display()
            )));
        }
        let mut cu = Cubic::ZERO;
        for (d, [re, im]) in cs.iter().enumerate() {
            cu.0[d] = Complex64::new(*re, *im);
        }
        pieces.push(cu);
    }
    let half = PiecewisePoly::new(file.profile.breakpoints, pieces)?;
    Ok(BumpSpec::new(half)?)
}

fn parse_spectra_pair(path: &Path) -> CliResult<SpectraPair> {
    let value: serde_json::Value = parse_json(path)?;
    let arr = value.as_array().filter(|a| a.len() == 2).ok_or_else(|| {
        usage(format!(
            "{}: expected a JSON array [spectrum_j0, spectrum_j1]",
            path.display()
        ))
    })?;
    let s0 = Spectrum::from_json(Bvp::Dirichlet, &arr[0]).map_err(|e| usage(format!("{}[0]: {e}", path.display())))?;
    let s1 = Spectrum::from_json(Bvp::Neumann, &arr[1]).map_err(|e| usage(format!("{}[1]: {e}", path.display())))?;
    Ok(SpectraPair::new(s0, s1)?)
}

fn spectrum_json(spec: &Spectrum) -> serde_json::Value {
    spec.to_json()
}

pub fn run(config: &RunConfig, stdout: &mut dyn Write) -> CliResult<i32> {
    match &config.command {
        Command::Charfn {
            problem,
            j,
            from,
            to,
            from_im,
            to_im,
            count,
            out,
        } => {
            let prob = read_problem(problem)?;
            let grid = line_grid(Complex64::new(*from, *from_im), Complex64::new(*to, *to_im), *count);
            let mut buf = Vec::new();
            grid_export(&prob, Bvp::from_index(*j)?, &grid, &mut buf)?;
            emit(out, buf, stdout)?;
            Ok(0)
        }
        Command::Spectrum {
            problem,
            j,
            n,
            format,
            pair,
            out,
        } => {
            let prob = read_problem(problem)?;
            if *pair {
                let s0 = locate_eigenvalues(&prob, Bvp::Dirichlet, *n)?;
                let s1 = locate_eigenvalues(&prob, Bvp::Neumann, *n)?;
                emit(
                    out,
                    to_json_bytes(&json!([spectrum_json(&s0), spectrum_json(&s1)])),
                    stdout,
                )?;
                return Ok(0);
            }
            let spec = locate_eigenvalues(&prob, Bvp::from_index(*j)?, *n)?;
            let bytes = match format {
                Format::Json => to_json_bytes(&spectrum_json(&spec)),
                Format::Csv => {
                    let mut buf = Vec::new();
                    spec.write_csv(&mut buf)?;
                    buf
                }
            };
            emit(out, bytes, stdout)?;
            Ok(0)
        }
        Command::Trace { problem, j, n, out } => {
            let prob = read_problem(problem)?;
            let rows = trace_compare(&prob, Bvp::from_index(*j)?, *n)?;
            let mut buf = Vec::new();
            write_trace_csv(&rows, &mut buf)?;
            emit(out, buf, stdout)?;
            if let Some(t) = trend(&rows) {
                if out.is_some() {
                    let _ = writeln!(stdout, "{}", serde_json::to_string(&t).expect("plain struct"));
                }
            }
            Ok(0)
        }
        Command::NonuniqDemo {
            a,
            b,
            bump,
            out_dir,
            eigenvalues,
        } => {
            let bump = read_bump(bump)?;
            let (s, r) = build_sr(&bump, *a, *b)?;
            let (pair1, pair2) = confusable_pairs(&s, &r)?;
            let first = Problem::new(*a, *b, pair1.0.clone(), pair1.1.clone())?;
            let second = Problem::new(*a, *b, pair2.0.clone(), pair2.1.clone())?;
            let grid = crate::fixtures::real_grid();
            let report = verify_coincidence(&pair1, &pair2, *a, *b, &grid, *eigenvalues)?;
            fs::create_dir_all(out_dir)
                .map_err(|e| Failure::Domain(format!("cannot create {}: {e}", out_dir.display())))?;
            let write = |name: &str, v: serde_json::Value| -> CliResult<()> {
                let path = out_dir.join(name);
                write_atomic(&path, &to_json_bytes(&v))
                    .map_err(|e| Failure::Domain(format!("cannot write {}: {e}", path.display())))
            };
            write("pair1.json", serde_json::to_value(&first).map_err(Error::from)?)?;
            write("pair2.json", serde_json::to_value(&second).map_err(Error::from)?)?;
            let report_json = serde_json::to_value(&report).map_err(Error::from)?;
            write("coincidence.json", report_json.clone())?;
            let _ = writeln!(stdout, "{}", serde_json::to_string(&report_json).expect("value"));
            Ok(if report.max_discrepancy <= 1e-10 { 0 } else { 1 })
        }
        Command::Reconstruct { spectra, a, b, m, out } => {
            let pair = parse_spectra_pair(spectra)?;
            if *m > pair.len() {
                return Err(usage(format!(
                    "--m {m} exceeds the {} eigenvalues in {}",
                    pair.len(),
                    spectra.display()
                )));
            }
            let result = reconstruct(&pair, *a, *b, *m)?;
            let value = serde_json::to_value(&result).map_err(Error::from)?;
            emit(out, to_json_bytes(&value), stdout)?;
            Ok(0)
        }
        Command::Verify { suite } => {
            let checks = verify::run_suite(suite)?;
            let mut failed = 0;
            for c in &checks {
                let _ = writeln!(stdout, "{}", c.line());
                failed += usize::from(!c.passed);
            }
            let _ = writeln!(stdout, "{} checks, {failed} failed", checks.len());
            Ok(if failed == 0 { 0 } else { 1 })
        }
    }
}
