//! Argument parsing and subcommand dispatch for the `simplexity` binary.
//!
//! Exit codes: 0 success, 1 a verification failed, 2 usage or input error,
//! 3 an internal invariant was violated.

use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use simplexity::bounds::{self, BoundsRow};
use simplexity::dissection::{self, Dissection, VerificationReport};
use simplexity::enumeration::{self, ClassFile, ConstraintClass, EnumerationOptions};
use simplexity::lp::{self, LpResultFile};
use simplexity::rational::{to_display, to_pq};
use simplexity::{BigRational, Error};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_INTERNAL: i32 = 3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Debug, Parser)]
#[command(name = "simplexity", version, about = "Exact lower bounds for simplicial dissections of the n-cube")]
pub struct RunConfig {
    #[command(subcommand)]
    pub command: Command,
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Worker threads for enumeration (0 = all cores).
    #[arg(long, global = true, env = "SIMPLEXITY_THREADS", default_value_t = 0)]
    pub threads: usize,
    /// Allow n = 6 enumeration, which takes a long time.
    #[arg(long, global = true)]
    pub long_running: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Enumerate all 0/1-simplices of the n-cube into constraint classes.
    Enumerate {
        #[arg(short = 'n')]
        n: usize,
        /// Class-list JSON file to write.
        #[arg(short = 'o', long = "output")]
        output: Option<PathBuf>,
    },
    /// Maximal determinant of an n x n 0/1-matrix.
    Rho {
        #[arg(short = 'n')]
        n: usize,
    },
    /// Closed-form bounds for n = 1..=N.
    Bounds {
        #[arg(short = 'n')]
        n: usize,
        #[arg(short = 'o', long = "output")]
        output: Option<PathBuf>,
    },
    /// Solve the exact weight program.
    Lp {
        #[arg(short = 'n')]
        n: usize,
        /// Class list from `enumerate`; enumerated on the fly when absent.
        #[arg(long)]
        classes: Option<PathBuf>,
        #[arg(short = 'o', long = "output")]
        output: Option<PathBuf>,
    },
    /// Analytic log-weights and the `(n+1)^((n-1)/2)` verification.
    Weights {
        #[arg(short = 'n')]
        n: usize,
        #[arg(long)]
        classes: Option<PathBuf>,
    },
    /// Verify a dissection file.
    Verify {
        path: PathBuf,
        /// Also require the slice invariants on every axis.
        #[arg(long)]
        all_checks: bool,
        /// Axis for the class-volume report (defaults to the file's axis).
        #[arg(long)]
        axis: Option<usize>,
        #[arg(short = 'o', long = "output")]
        output: Option<PathBuf>,
    },
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Internal(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Internal(_) => Failure::Internal(e.to_string()),
            other => Failure::Usage(other.to_string()),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Self {
        Failure::Internal(e.to_string())
    }
}

type CmdResult = std::result::Result<i32, Failure>;

/// Parses `args` (including the program name) and runs one subcommand.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let config = match RunConfig::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            if code == EXIT_OK {
                let _ = write!(out, "{text}");
            } else {
                let _ = write!(err, "{text}");
            }
            return code;
        }
    };
    match execute(&config, out) {
        Ok(code) => code,
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_USAGE
        }
        Err(Failure::Internal(msg)) => {
            let _ = writeln!(err, "internal error: {msg}");
            EXIT_INTERNAL
        }
    }
}

fn execute(cfg: &RunConfig, out: &mut dyn Write) -> CmdResult {
    let opts = EnumerationOptions { threads: cfg.threads, long_running: cfg.long_running };
    match &cfg.command {
        Command::Enumerate { n, output } => cmd_enumerate(*n, output.as_deref(), &opts, cfg.format, out),
        Command::Rho { n } => cmd_rho(*n, &opts, cfg.format, out),
        Command::Bounds { n, output } => cmd_bounds(*n, output.as_deref(), cfg.format, out),
        Command::Lp { n, classes, output } => cmd_lp(*n, classes.as_deref(), output.as_deref(), &opts, cfg.format, out),
        Command::Weights { n, classes } => cmd_weights(*n, classes.as_deref(), &opts, cfg.format, out),
        Command::Verify { path, all_checks, axis, output } => {
            cmd_verify(path, *all_checks, *axis, output.as_deref(), cfg.format, out)
        }
    }
}

fn no_csv(format: Format, cmd: &str) -> std::result::Result<(), Failure> {
    if format == Format::Csv {
        return Err(Failure::Usage(format!("csv output is not available for `{cmd}`")));
    }
    Ok(())
}

fn write_json<T: Serialize>(out: &mut dyn Write, value: &T) -> std::result::Result<(), Failure> {
    writeln!(out, "{}", serde_json::to_string_pretty(value)?)?;
    Ok(())
}

fn load_classes(n: usize, path: Option<&Path>, opts: &EnumerationOptions) -> std::result::Result<Vec<ConstraintClass>, Failure> {
    match path {
        Some(p) => {
            let file = ClassFile::load(p)?;
            if file.n != n {
                return Err(Failure::Usage(format!("class file is for n = {}, not n = {n}", file.n)));
            }
            Ok(file.classes)
        }
        None => Ok(enumeration::enumerate_classes(n, opts)?.classes),
    }
}

#[derive(Serialize)]
struct EnumerationReport {
    n: usize,
    total_subsets: u64,
    degenerate: u64,
    nondegenerate: u64,
    classes: usize,
    rho: u64,
    max_volume: String,
}

fn cmd_enumerate(n: usize, output: Option<&Path>, opts: &EnumerationOptions, format: Format, out: &mut dyn Write) -> CmdResult {
    let summary = enumeration::enumerate_classes(n, opts)?;
    if let Some(path) = output {
        std::fs::write(path, ClassFile::from(&summary).to_json()? + "\n")?;
    }
    match format {
        Format::Json => write_json(
            out,
            &EnumerationReport {
                n,
                total_subsets: summary.total_subsets,
                degenerate: summary.degenerate,
                nondegenerate: summary.nondegenerate,
                classes: summary.classes.len(),
                rho: summary.rho,
                max_volume: to_pq(&summary.max_volume),
            },
        )?,
        Format::Csv => {
            writeln!(out, "volume,folded,count,witness")?;
            for c in &summary.classes {
                let folded: Vec<String> = c.folded.0.iter().map(ToString::to_string).collect();
                let witness: Vec<String> = c.witness.vertices().iter().map(ToString::to_string).collect();
                writeln!(out, "{},{},{},{}", to_pq(&c.volume), folded.join(" "), c.count, witness.join(" "))?;
            }
        }
        Format::Text => {
            writeln!(out, "n = {n}")?;
            writeln!(out, "subsets scanned = {}", summary.total_subsets)?;
            writeln!(out, "degenerate = {}", summary.degenerate)?;
            writeln!(out, "non-degenerate = {}", summary.nondegenerate)?;
            writeln!(out, "classes = {}", summary.classes.len())?;
            writeln!(out, "rho = {}", summary.rho)?;
            writeln!(out, "max volume = {}", to_display(&summary.max_volume))?;
            if let Some(path) = output {
                writeln!(out, "class list written to {}", path.display())?;
            }
        }
    }
    Ok(EXIT_OK)
}

#[derive(Serialize)]
struct RhoReport {
    n: usize,
    rho: u64,
    euclidean_lower_bound: String,
    hadamard_bound: f64,
    within_hadamard: bool,
}

fn cmd_rho(n: usize, opts: &EnumerationOptions, format: Format, out: &mut dyn Write) -> CmdResult {
    no_csv(format, "rho")?;
    let rho = enumeration::rho(n, opts)?;
    let e = enumeration::euclidean_lower_bound_exact(n, opts)?;
    let bound = bounds::hadamard_rho_bound(n);
    let within = match bounds::hadamard_rho_bound_exact(n) {
        Some(exact) => BigRational::from_integer(rho.into()) <= exact,
        None => (rho as f64) <= bound * (1.0 + 1e-12),
    };
    let report = RhoReport { n, rho, euclidean_lower_bound: to_pq(&e), hadamard_bound: bound, within_hadamard: within };
    match format {
        Format::Json => write_json(out, &report)?,
        _ => {
            writeln!(out, "rho({n}) = {rho}")?;
            writeln!(out, "n!/rho = {}", to_display(&e))?;
            writeln!(out, "2 (sqrt(n+1)/2)^(n+1) = {}", bounds::format_sig10(bound))?;
        }
    }
    Ok(if within { EXIT_OK } else { EXIT_INTERNAL })
}

#[derive(Serialize)]
struct BoundsJsonRow {
    n: usize,
    #[serde(rename = "E")]
    e: f64,
    #[serde(rename = "F")]
    f: f64,
    #[serde(rename = "H_lower")]
    h_lower: f64,
    rho_bound: f64,
    known_dis: Option<u64>,
    ratio: Option<f64>,
}

fn cmd_bounds(n_max: usize, output: Option<&Path>, format: Format, out: &mut dyn Write) -> CmdResult {
    if n_max == 0 {
        return Err(Failure::Usage("bounds needs n >= 1".into()));
    }
    let rows = bounds::bounds_table(n_max);
    let csv = bounds::bounds_csv(&rows);
    if let Some(path) = output {
        std::fs::write(path, &csv)?;
    }
    match format {
        Format::Csv => write!(out, "{csv}")?,
        Format::Json => {
            let json: Vec<BoundsJsonRow> = rows
                .iter()
                .map(|r: &BoundsRow| BoundsJsonRow {
                    n: r.n,
                    e: r.euclidean.value,
                    f: r.asymptotic.value,
                    h_lower: r.h_lower.value,
                    rho_bound: r.rho_bound.value,
                    known_dis: r.known_dis,
                    ratio: (r.n >= 2).then(|| bounds::ratio_diagnostic(r.n)),
                })
                .collect();
            write_json(out, &json)?;
        }
        Format::Text => {
            let mut table = String::new();
            let _ = writeln!(table, "{:>4} {:>18} {:>18} {:>18} {:>18} {:>9}", "n", "E", "F", "H_lower", "rho_bound", "known");
            for r in &rows {
                let _ = writeln!(
                    table,
                    "{:>4} {:>18} {:>18} {:>18} {:>18} {:>9}",
                    r.n,
                    r.euclidean.format(),
                    r.asymptotic.format(),
                    r.h_lower.format(),
                    r.rho_bound.format(),
                    r.known_dis.map(|k| k.to_string()).unwrap_or_else(|| "-".into())
                );
            }
            write!(out, "{table}")?;
            if n_max >= 2 {
                writeln!(out, "(F/E)^(1/n) at n = {n_max}: {:.10}  (limit e/2 = {:.9})", bounds::ratio_diagnostic(n_max), std::f64::consts::E / 2.0)?;
            }
        }
    }
    Ok(EXIT_OK)
}

fn cmd_lp(
    n: usize,
    classes: Option<&Path>,
    output: Option<&Path>,
    opts: &EnumerationOptions,
    format: Format,
    out: &mut dyn Write,
) -> CmdResult {
    no_csv(format, "lp")?;
    let classes = load_classes(n, classes, opts)?;
    let problem = lp::build_lp(&classes, n)?;
    let solution = lp::solve_lp(&problem)?;
    let file = LpResultFile::from(&solution);
    if let Some(path) = output {
        std::fs::write(path, serde_json::to_string_pretty(&file)? + "\n")?;
    }
    match format {
        Format::Json => write_json(out, &file)?,
        _ => {
            writeln!(out, "n = {n}")?;
            writeln!(out, "constraint classes = {}", problem.constraints.len())?;
            writeln!(out, "g* = {}", to_display(&solution.g_star))?;
            writeln!(out, "bound = {}", to_display(&solution.bound))?;
            let alpha: Vec<String> = file.alpha.iter().map(to_display).collect();
            writeln!(out, "alpha* = ({})", alpha.join(", "))?;
            writeln!(out, "tight classes:")?;
            for key in &solution.tight_classes {
                let folded: Vec<String> = key.folded.0.iter().map(ToString::to_string).collect();
                writeln!(out, "  volume {}  folded {{{}}}", to_display(&key.volume), folded.join(","))?;
            }
        }
    }
    Ok(EXIT_OK)
}

#[derive(Serialize)]
struct WeightsReport {
    #[serde(flatten)]
    analytic: lp::AnalyticReport,
    h: lp::HAnalysis,
}

fn cmd_weights(n: usize, classes: Option<&Path>, opts: &EnumerationOptions, format: Format, out: &mut dyn Write) -> CmdResult {
    no_csv(format, "weights")?;
    let classes = load_classes(n, classes, opts)?;
    let report = lp::verify_analytic_bound(n, &classes)?;
    let h = lp::h_function_analysis(n);
    let ok = report.holds() && h.sampled_maximum;
    match format {
        Format::Json => write_json(out, &WeightsReport { analytic: report, h })?,
        _ => {
            writeln!(out, "n = {n}")?;
            for (m, a) in report.alpha.iter().enumerate() {
                writeln!(out, "alpha_{} = {:.12}", m + 1, a)?;
            }
            writeln!(out, "classes checked = {}", report.classes_checked)?;
            writeln!(out, "max weighted volume = {:.12}", report.max_weighted_volume)?;
            writeln!(out, "(n+1)^((1-n)/2) = {:.12}", report.threshold)?;
            writeln!(out, "violations = {}", report.violations.len())?;
            writeln!(out, "h maximised at t = ln n! = {:.12}, max h = {}", h.t_max, bounds::format_sig10(h.h_max))?;
            writeln!(out, "F(n) = {}", bounds::bounds_row(n).asymptotic.format())?;
        }
    }
    Ok(if ok { EXIT_OK } else { EXIT_VERIFY_FAILED })
}

#[derive(Serialize)]
struct VerifyOutput<'a> {
    #[serde(flatten)]
    report: &'a VerificationReport,
    all_checks: bool,
    passed: bool,
}

fn cmd_verify(
    path: &Path,
    all_checks: bool,
    axis: Option<usize>,
    output: Option<&Path>,
    format: Format,
    out: &mut dyn Write,
) -> CmdResult {
    no_csv(format, "verify")?;
    let d: Dissection = dissection::load_dissection(path)?;
    let axis = axis.unwrap_or(d.axis);
    if axis == 0 || axis > d.n {
        return Err(Failure::Usage(format!("axis {axis} is outside 1..={}", d.n)));
    }
    let report = dissection::verify_partition(&d);
    let passed = report.partition_ok && (!all_checks || (report.section_ok && report.profile_table_ok));
    let payload = VerifyOutput { report: &report, all_checks, passed };
    if let Some(p) = output {
        std::fs::write(p, serde_json::to_string_pretty(&payload)? + "\n")?;
    }
    match format {
        Format::Json => write_json(out, &payload)?,
        _ => {
            writeln!(out, "simplices = {}", d.simplices.len())?;
            writeln!(out, "volume sum = {}", to_display(&report.volume_sum))?;
            match &report.overlap_witness {
                Some(w) => {
                    let pt: Vec<String> = w.point.iter().map(to_display).collect();
                    writeln!(out, "overlap: simplices {} and {} share interior point ({})", w.first, w.second, pt.join(", "))?;
                }
                None => writeln!(out, "overlap: none")?,
            }
            writeln!(out, "partition_ok = {}", report.partition_ok)?;
            let cv = &report.class_volumes[axis - 1];
            let vs: Vec<String> = cv.volumes.iter().map(to_display).collect();
            writeln!(out, "V(i) on axis {axis} = ({})", vs.join(", "))?;
            if all_checks {
                let cs: Vec<String> = report.bernstein[axis - 1].c.iter().map(to_display).collect();
                writeln!(out, "bernstein c on axis {axis} = ({})", cs.join(", "))?;
                for (k, cv) in report.class_volumes.iter().enumerate() {
                    let vs: Vec<String> = cv.volumes.iter().map(to_display).collect();
                    writeln!(out, "axis {}: V(i) = ({})", k + 1, vs.join(", "))?;
                }
                writeln!(out, "section polynomial constant 1 on every axis = {}", report.section_ok)?;
                writeln!(out, "profile volume table (row k, column m):")?;
                for row in &report.profile_table.values {
                    let r: Vec<String> = row.iter().map(to_display).collect();
                    writeln!(out, "  {}", r.join("  "))?;
                }
                writeln!(out, "profile_table_ok = {}", report.profile_table_ok)?;
            }
        }
    }
    Ok(if passed { EXIT_OK } else { EXIT_VERIFY_FAILED })
}
