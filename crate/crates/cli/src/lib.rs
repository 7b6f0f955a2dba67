//! Command-line front end for `ridge-core`.
//!
//! Each subcommand reads the plain-text formats of [`ridge_core::format`] and
//! writes text results to `--out` or stdout. Exit codes: 0 success, 1 usage,
//! 2 unreadable or malformed input, 3 a check that ran but failed (its
//! outputs are still written).

use std::fmt::Write as _;
use std::fs;
use std::io::{self, Read};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use ridge_core::annihilator::{convolve_hats, haar_hat, perpendicular, verify_annihilation};
use ridge_core::direction::{canonicalize, generate_complete, is_complete, DirectionSet, DEFAULT_BOX_RADIUS};
use ridge_core::format;
use ridge_core::projection::project;
use ridge_core::radon::{radon_profile, radon_zero};
use ridge_core::shannon::{interpolate_many, HatSamples};
use ridge_core::spectrum::{analyze_grid, synthesize_grid, GridFunction, LatticeSpectrum, Measure};
use ridge_core::stochastic::{conditional_expectation_with, Binning, EmpiricalSample};
use ridge_core::{reproduce, Error};

#[derive(Debug, Parser)]
#[command(name = "ridge", version, about = "Ridge-function projections, annihilators and slice tests on [-1,1]^m")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Canonical primitive representatives of integer vectors.
    Canon(CanonArgs),
    /// Generate a complete direction set, or check one.
    Complete(CompleteArgs),
    /// Split a function into its ridge part along W and the residual.
    Project(ProjectArgs),
    /// Binned slice integrals along each direction.
    Radon(RadonArgs),
    /// Sample a product of Haar hats along the lines of W.
    Annihilate(AnnihilateArgs),
    /// Evaluate the Fourier transform from its lattice samples.
    Interp(InterpArgs),
    /// Binned conditional means of F given X.
    Condexp(CondexpArgs),
    /// Run the worked examples and print a pass/fail table.
    Reproduce(ReproduceArgs),
}

/// Function input: a spectrum file or a grid file.
#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
pub struct FunctionInput {
    /// Spectrum file (`k_1 … k_m re im` lines).
    #[arg(long, value_name = "PATH")]
    pub spectrum: Option<PathBuf>,
    /// Grid file (`m n_1 … n_m` header, then `re im` lines).
    #[arg(long = "grid-file", value_name = "PATH")]
    pub grid_file: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CanonArgs {
    /// Vector entries; reads a direction file from --input or stdin when absent.
    #[arg(allow_negative_numbers = true)]
    pub vector: Vec<i64>,
    #[arg(long, value_name = "PATH")]
    pub input: Option<PathBuf>,
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CompleteArgs {
    /// Ambient dimension.
    #[arg(long, default_value_t = 2)]
    pub dim: usize,
    /// Half-width N of the box [-N, N]^m.
    #[arg(long, default_value_t = DEFAULT_BOX_RADIUS)]
    pub radius: i64,
    /// Check this direction file instead of generating one.
    #[arg(long, value_name = "PATH")]
    pub check: Option<PathBuf>,
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ProjectArgs {
    #[command(flatten)]
    pub input: FunctionInput,
    /// Direction file W.
    #[arg(long, value_name = "PATH")]
    pub dirs: PathBuf,
    #[arg(long, default_value = "normalized")]
    pub measure: Measure,
    /// Band used when analysing a grid input.
    #[arg(long, value_name = "K")]
    pub band: Option<usize>,
    /// Prefix for PREFIX.projected and PREFIX.residual spectrum files.
    #[arg(long, value_name = "PREFIX")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct RadonArgs {
    #[command(flatten)]
    pub input: FunctionInput,
    /// Direction file; one profile per direction.
    #[arg(long, value_name = "PATH")]
    pub dirs: PathBuf,
    #[arg(long, default_value_t = 31)]
    pub bins: usize,
    /// Samples per axis when synthesising a spectrum input.
    #[arg(long, value_name = "N", default_value_t = 256)]
    pub grid: usize,
    /// Also test that every profile vanishes within this tolerance.
    #[arg(long)]
    pub tol: Option<f64>,
    /// Output file; with several directions PATH gets a `.<index>` suffix per direction.
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct AnnihilateArgs {
    /// Direction file W.
    #[arg(long, value_name = "PATH")]
    pub dirs: PathBuf,
    /// One z-vector per direction (real entries); integer perpendiculars by default.
    #[arg(long, value_name = "PATH")]
    pub z: Option<PathBuf>,
    #[arg(long = "t-samples", default_value_t = 64)]
    pub t_samples: usize,
    #[arg(long, default_value_t = 0.0)]
    pub tol: f64,
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct InterpArgs {
    #[command(flatten)]
    pub input: FunctionInput,
    /// Query points, one per line; stdin when absent.
    #[arg(long, value_name = "PATH")]
    pub points: Option<PathBuf>,
    /// Lattice band of the samples (default: the spectrum's band; required for grids).
    #[arg(long, value_name = "K")]
    pub band: Option<usize>,
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CondexpArgs {
    /// Sample CSV `x,re,im`; omit to draw --samples uniform X with F = X².
    pub input: Option<PathBuf>,
    #[arg(long, default_value_t = 20)]
    pub bins: usize,
    /// Place edges at empirical quantiles instead of equal widths.
    #[arg(long)]
    pub quantile: bool,
    #[arg(long, default_value_t = 100_000)]
    pub samples: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ReproduceArgs {
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
}

/// A run that could not complete, classified by exit code.
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Input(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Input(_) => 2,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Input(m) => m,
        }
    }
}

/// Exit code for a run whose outputs were produced but whose check failed.
pub const CHECK_FAILED: u8 = 3;

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::Aliasing { .. } | Error::Undersampled { .. } | Error::InvalidArgument(_) => {
                CliError::Usage(e.to_string())
            }
            _ => CliError::Input(e.to_string()),
        }
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

/// Output of a completed run. `failed` marks a check that ran and did not pass.
#[derive(Debug, Default)]
pub struct Outcome {
    pub stdout: String,
    pub stderr: String,
    pub failed: bool,
}

impl Outcome {
    fn with_check(mut self, passed: bool, note: String) -> Self {
        self.stderr.push_str(&note);
        self.failed |= !passed;
        self
    }
}

fn read_text(path: Option<&Path>) -> CliResult<String> {
    match path {
        Some(p) => fs::read_to_string(p).map_err(|e| CliError::Input(format!("{}: {e}", p.display()))),
        None => {
            let mut s = String::new();
            io::stdin()
                .read_to_string(&mut s)
                .map_err(|e| CliError::Input(format!("stdin: {e}")))?;
            Ok(s)
        }
    }
}

fn with_path<T>(path: &Path, r: ridge_core::Result<T>) -> CliResult<T> {
    r.map_err(|e| match CliError::from(e) {
        CliError::Input(m) => CliError::Input(format!("{}: {m}", path.display())),
        other => other,
    })
}

fn write_text(path: &Path, text: &str) -> CliResult<()> {
    fs::write(path, text).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

/// Writes to `out` if given, otherwise returns the text for stdout.
fn emit(out: Option<&Path>, text: String) -> CliResult<Outcome> {
    match out {
        Some(p) => {
            write_text(p, &text)?;
            Ok(Outcome::default())
        }
        None => Ok(Outcome {
            stdout: text,
            ..Outcome::default()
        }),
    }
}

fn suffixed(path: &Path, suffix: &str) -> PathBuf {
    let mut s = path.as_os_str().to_owned();
    s.push(suffix);
    PathBuf::from(s)
}

fn load_directions(path: &Path) -> CliResult<Vec<Vec<i64>>> {
    let dirs = with_path(path, format::parse_directions(&read_text(Some(path))?))?;
    if dirs.is_empty() {
        return Err(CliError::Input(format!("{}: no directions", path.display())));
    }
    Ok(dirs)
}

fn load_direction_set(path: &Path, dim: usize) -> CliResult<DirectionSet> {
    let dirs = load_directions(path)?;
    with_path(path, DirectionSet::from_vectors(dim, &dirs))
}

enum Loaded {
    Spectrum(LatticeSpectrum),
    Grid(GridFunction),
}

fn load_function(input: &FunctionInput) -> CliResult<Loaded> {
    match (&input.spectrum, &input.grid_file) {
        (Some(p), _) => Ok(Loaded::Spectrum(with_path(p, format::parse_spectrum(&read_text(Some(p))?))?)),
        (_, Some(p)) => Ok(Loaded::Grid(with_path(p, format::parse_grid(&read_text(Some(p))?))?)),
        (None, None) => Err(CliError::Usage("one of --spectrum or --grid-file is required".into())),
    }
}

/// Executes one parsed command line.
pub fn run(cli: Cli) -> CliResult<Outcome> {
    match cli.command {
        Command::Canon(a) => canon(a),
        Command::Complete(a) => complete(a),
        Command::Project(a) => project_cmd(a),
        Command::Radon(a) => radon(a),
        Command::Annihilate(a) => annihilate(a),
        Command::Interp(a) => interp(a),
        Command::Condexp(a) => condexp(a),
        Command::Reproduce(a) => reproduce_cmd(a),
    }
}

fn canon(a: CanonArgs) -> CliResult<Outcome> {
    let vectors = if a.vector.is_empty() {
        let text = read_text(a.input.as_deref())?;
        match &a.input {
            Some(p) => with_path(p, format::parse_directions(&text))?,
            None => format::parse_directions(&text)?,
        }
    } else {
        vec![a.vector]
    };
    let canonical = vectors
        .iter()
        .map(|v| canonicalize(v).map(|d| d.into_vec()))
        .collect::<ridge_core::Result<Vec<_>>>()?;
    emit(a.out.as_deref(), format::write_directions(&canonical))
}

fn complete(a: CompleteArgs) -> CliResult<Outcome> {
    if a.dim == 0 || a.radius < 1 {
        return Err(CliError::Usage("--dim and --radius must be positive".into()));
    }
    match a.check {
        None => {
            let set = generate_complete(a.dim, a.radius)?;
            emit(a.out.as_deref(), format::write_directions(set.as_slice()))
        }
        Some(path) => {
            let set = load_direction_set(&path, a.dim)?;
            let report = is_complete(set.as_slice(), a.radius)?;
            let mut text = format!(
                "complete on [-{r},{r}]^{m}: {}\nuncovered: {}\noverlaps: {}\n",
                report.complete_on_box,
                report.uncovered.len(),
                report.overlaps.len(),
                r = a.radius,
                m = a.dim,
            );
            for p in report.uncovered.iter().take(10) {
                let _ = writeln!(text, "uncovered {}", format::write_directions(&[p]).trim_end());
            }
            let passed = report.complete_on_box;
            Ok(emit(a.out.as_deref(), text)?.with_check(passed, String::new()))
        }
    }
}

fn project_cmd(a: ProjectArgs) -> CliResult<Outcome> {
    let s = match load_function(&a.input)? {
        Loaded::Spectrum(s) => s,
        Loaded::Grid(g) => {
            let band = a
                .band
                .ok_or_else(|| CliError::Usage("--band is required with --grid-file".into()))?;
            analyze_grid(&g, band)?
        }
    };
    let w = load_direction_set(&a.dirs, s.dim())?;
    let split = project(&s, &w, a.measure)?;
    if let Some(prefix) = &a.out {
        write_text(&suffixed(prefix, ".projected"), &format::write_spectrum(&split.projected))?;
        write_text(&suffixed(prefix, ".residual"), &format::write_spectrum(&split.residual))?;
    }
    let summary = serde_json::json!({
        "distance_sq": split.distance_sq,
        "distance": split.distance(),
        "measure": split.measure.name(),
    });
    Ok(Outcome {
        stdout: format!("{summary}\n"),
        ..Outcome::default()
    })
}

fn radon(a: RadonArgs) -> CliResult<Outcome> {
    let grid = match load_function(&a.input)? {
        Loaded::Grid(g) => g,
        Loaded::Spectrum(s) => synthesize_grid(&s, &vec![a.grid; s.dim()])?,
    };
    let dirs: Vec<Vec<f64>> = load_directions(&a.dirs)?
        .into_iter()
        .map(|v| v.into_iter().map(|x| x as f64).collect())
        .collect();
    let real = grid.is_real();
    let mut files = Vec::new();
    for w in &dirs {
        let p = radon_profile(&grid, w, a.bins)?;
        let mut text = String::from(if real { "t,value\n" } else { "t,value_re,value_im\n" });
        for (t, v) in p.ts.iter().zip(&p.values) {
            if real {
                let _ = writeln!(text, "{t},{}", v.re);
            } else {
                let _ = writeln!(text, "{t},{},{}", v.re, v.im);
            }
        }
        files.push(text);
    }
    let mut outcome = match (&a.out, files.len()) {
        (Some(p), 1) => {
            write_text(p, &files[0])?;
            Outcome::default()
        }
        (Some(p), _) => {
            for (i, text) in files.iter().enumerate() {
                write_text(&suffixed(p, &format!(".{i}")), text)?;
            }
            Outcome::default()
        }
        (None, _) => Outcome {
            stdout: files.join("\n"),
            ..Outcome::default()
        },
    };
    if let Some(tol) = a.tol {
        let report = radon_zero(&grid, &dirs, a.bins, tol)?;
        let line = format!(
            "radon zero test: {} (max |profile| = {:e}, tol = {tol:e})\n",
            if report.passed { "PASS" } else { "FAIL" },
            report.max_deviation
        );
        outcome = outcome.with_check(report.passed, line);
    }
    Ok(outcome)
}

fn annihilate(a: AnnihilateArgs) -> CliResult<Outcome> {
    let dirs: Vec<Vec<f64>> = load_directions(&a.dirs)?
        .into_iter()
        .map(|v| v.into_iter().map(|x| x as f64).collect())
        .collect();
    let dim = dirs[0].len();
    let zs = match &a.z {
        Some(p) => {
            let zs = with_path(p, format::parse_points(&read_text(Some(p))?, dim))?;
            if zs.len() != dirs.len() {
                return Err(CliError::Input(format!(
                    "{}: {} z-vectors for {} directions",
                    p.display(),
                    zs.len(),
                    dirs.len()
                )));
            }
            zs
        }
        None => dirs.iter().map(|w| perpendicular(w)).collect::<ridge_core::Result<_>>()?,
    };
    let hats = zs.iter().map(|z| haar_hat(z)).collect::<ridge_core::Result<Vec<_>>>()?;
    let hat = convolve_hats(&hats)?;
    let report = verify_annihilation(&hat, &dirs, a.t_samples, a.tol)?;
    let mut csv = String::from("t,w_index,value\n");
    for (d, row) in report.samples.iter().enumerate() {
        for (t, v) in report.ts.iter().zip(row) {
            let _ = writeln!(csv, "{t},{d},{v}");
        }
    }
    let line = format!(
        "annihilation: {} (max |hat| on lines = {:e}, tol = {:e}, {} directions x {} samples)\n",
        if report.passed { "PASS" } else { "FAIL" },
        report.max_abs,
        a.tol,
        dirs.len(),
        report.ts.len()
    );
    Ok(emit(a.out.as_deref(), csv)?.with_check(report.passed, line))
}

fn interp(a: InterpArgs) -> CliResult<Outcome> {
    let h = match load_function(&a.input)? {
        Loaded::Spectrum(s) => HatSamples::from_spectrum(&s, a.band.unwrap_or_else(|| s.band())),
        Loaded::Grid(g) => {
            let band = a
                .band
                .ok_or_else(|| CliError::Usage("--band is required with --grid-file".into()))?;
            HatSamples::from_grid(&g, band)
        }
    };
    let text = read_text(a.points.as_deref())?;
    let points = format::parse_points(&text, h.dim()).map_err(|e| match (&a.points, CliError::from(e)) {
        (Some(p), CliError::Input(m)) => CliError::Input(format!("{}: {m}", p.display())),
        (_, other) => other,
    })?;
    let values = interpolate_many(&h, &points)?;
    let mut csv: String = (1..=h.dim()).map(|j| format!("xi_{j},")).collect();
    csv.push_str("re,im\n");
    for (p, v) in points.iter().zip(values) {
        for x in p {
            let _ = write!(csv, "{x},");
        }
        let _ = writeln!(csv, "{},{}", v.re, v.im);
    }
    emit(a.out.as_deref(), csv)
}

fn condexp(a: CondexpArgs) -> CliResult<Outcome> {
    let sample = match &a.input {
        Some(p) => with_path(p, format::parse_samples(&read_text(Some(p))?))?,
        None => {
            let mut rng = ChaCha8Rng::seed_from_u64(a.seed);
            let xs: Vec<f64> = (0..a.samples).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let fs = xs.iter().map(|x| Complex64::new(x * x, 0.0)).collect();
            EmpiricalSample::new(xs, fs)?
        }
    };
    let binning = if a.quantile { Binning::Quantile } else { Binning::EqualWidth };
    let cond = conditional_expectation_with(&sample, a.bins, binning)?;
    let mut csv = String::from("bin_center,count,mean_re,mean_im\n");
    for ((center, count), mean) in cond.centers().iter().zip(&cond.counts).zip(&cond.means) {
        match mean {
            Some(m) => {
                let _ = writeln!(csv, "{center},{count},{},{}", m.re, m.im);
            }
            None => {
                let _ = writeln!(csv, "{center},{count},,");
            }
        }
    }
    emit(a.out.as_deref(), csv)
}

fn reproduce_cmd(a: ReproduceArgs) -> CliResult<Outcome> {
    let rows = reproduce::run()?;
    let table = reproduce::table(&rows);
    let failed = rows.iter().filter(|r| !r.passed).count();
    if let Some(p) = &a.out {
        write_text(p, &table)?;
    }
    let note = format!("{} of {} rows passed\n", rows.len() - failed, rows.len());
    Ok(Outcome {
        stdout: if a.out.is_some() { String::new() } else { table },
        ..Outcome::default()
    }
    .with_check(failed == 0, note))
}
