//! Argument handling and dispatch for the `lyness` binary.

use crate::repro;
use clap::{Args, Parser, Subcommand};
use lyness_core::adherence::{bifurcation_levels, classify, AdherenceError};
use lyness_core::exact::{parse_rational, Rational, DEFAULT_PRECISION};
use lyness_core::lyness::{critical_level_of, fixed_point, orbit, orbit_ball, Coord, LynessError, Params, Point, StartPoint};
use lyness_core::rotation::{rows_to_csv, rows_to_json, scan_profile, winding_bounds, Backend, Level, RotationError, WindingOptions};
use serde::{Deserialize, Serialize};
use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::PathBuf;

pub const EXIT_OK: i32 = 0;
pub const EXIT_DOMAIN: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_VERIFY: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "lyness", version, about = "Exact and certified computations for periodic Lyness recurrences")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Option<Command>,
    #[command(flatten)]
    pub job: JobSpec,
    /// JSON file with the same fields as the flags; flags take precedence.
    #[arg(long, global = true)]
    pub job_file: Option<PathBuf>,
}

#[derive(Subcommand, Debug, Clone, PartialEq, Eq)]
pub enum Command {
    /// Iterates the composed map from (x0, y0) for n steps.
    Orbit,
    /// Exact value of the invariant at (x0, y0).
    Invariant,
    /// Fixed point, its images under the one-step maps and the critical level.
    FixedPoint,
    /// Certified rotation-number enclosure from n orbit points.
    Rotation,
    /// Rotation enclosures for a comma-separated list of x0 values.
    Scan,
    /// Bifurcation levels and interval counts above the critical level.
    Bifurcation,
    /// Projection intervals and their component count at level h.
    Classify,
    /// Runs the reproduction suite and prints a pass/fail table.
    Verify(VerifyArgs),
}

#[derive(Args, Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct VerifyArgs {
    /// Criteria to run, comma separated; all by default.
    #[arg(long, value_delimiter = ',')]
    #[serde(default)]
    pub criteria: Vec<u8>,
    /// Leaves out the long-running criteria.
    #[arg(long)]
    #[serde(default)]
    pub skip_slow: bool,
    /// Prints the findings of passing criteria as well.
    #[arg(long)]
    #[serde(default)]
    pub verbose: bool,
}

/// Everything a run depends on. Also the schema of `--job-file`.
#[derive(Args, Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JobSpec {
    /// Subcommand name; only read from a job file.
    #[arg(skip)]
    pub subcommand: Option<String>,
    /// Period of the coefficient sequence, 2 or 3.
    #[arg(long, global = true)]
    pub k: Option<usize>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub a: Option<String>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub b: Option<String>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub c: Option<String>,
    /// Exact fraction, or `xbar`/`ybar` for a fixed-point coordinate.
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub x0: Option<String>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub y0: Option<String>,
    /// Steps for `orbit`, orbit points for `rotation` and `scan`.
    #[arg(long, global = true)]
    pub n: Option<usize>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub h: Option<String>,
    /// exact, ball or auto.
    #[arg(long, global = true)]
    pub backend: Option<String>,
    #[arg(long, global = true, env = "LYNESS_PRECISION_CAP")]
    pub precision_cap: Option<u32>,
    /// text, csv or json.
    #[arg(long, global = true)]
    pub format: Option<String>,
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    #[arg(skip)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub verify: Option<VerifyArgs>,
}

impl JobSpec {
    /// Fields set here win over those of `base`.
    fn over(self, base: JobSpec) -> JobSpec {
        JobSpec {
            subcommand: self.subcommand.or(base.subcommand),
            k: self.k.or(base.k),
            a: self.a.or(base.a),
            b: self.b.or(base.b),
            c: self.c.or(base.c),
            x0: self.x0.or(base.x0),
            y0: self.y0.or(base.y0),
            n: self.n.or(base.n),
            h: self.h.or(base.h),
            backend: self.backend.or(base.backend),
            precision_cap: self.precision_cap.or(base.precision_cap),
            format: self.format.or(base.format),
            output: self.output.or(base.output),
            verify: self.verify.or(base.verify),
        }
    }
}

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    /// Error from a computation, with the name of the originating type.
    Domain { name: String, message: String },
    Verification(String),
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Domain { .. } | CliError::Io(_) => EXIT_DOMAIN,
            CliError::Verification(_) => EXIT_VERIFY,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage error: {m}"),
            CliError::Domain { name, message } => write!(f, "{name}: {message}"),
            CliError::Verification(m) => write!(f, "verification failed: {m}"),
            CliError::Io(m) => write!(f, "i/o error: {m}"),
        }
    }
}

/// `Type::Variant::Inner...` read off the derived `Debug` rendering, which
/// nests variants as `Variant(Inner(...))`.
fn variant_path(type_name: &str, debug: &str) -> String {
    let mut parts = vec![type_name.to_string()];
    let mut rest = debug;
    loop {
        let end = rest.find(|c: char| !(c.is_alphanumeric() || c == '_')).unwrap_or(rest.len());
        if end == 0 {
            break;
        }
        parts.push(rest[..end].to_string());
        match rest[end..].strip_prefix('(') {
            Some(r) => rest = r,
            None => break,
        }
    }
    parts.join("::")
}

macro_rules! domain_error {
    ($($t:ty),*) => {$(
        impl From<$t> for CliError {
            fn from(e: $t) -> Self {
                let short = stringify!($t).rsplit("::").next().unwrap_or(stringify!($t));
                CliError::Domain { name: variant_path(short, &format!("{e:?}")), message: e.to_string() }
            }
        }
    )*};
}

domain_error!(LynessError, RotationError, AdherenceError, lyness_core::exact::AlgebraicError);

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Format {
    Text,
    Csv,
    Json,
}

fn usage(m: impl Into<String>) -> CliError {
    CliError::Usage(m.into())
}

fn fraction(name: &str, s: &str) -> Result<Rational, CliError> {
    parse_rational(s).map_err(|_| usage(format!("--{name} expects an exact fraction such as 3/2, got {s:?}")))
}

fn params(job: &JobSpec) -> Result<Params, CliError> {
    let k = job.k.unwrap_or(2);
    let need = |name: &str, v: &Option<String>| -> Result<Rational, CliError> {
        fraction(name, v.as_deref().ok_or_else(|| usage(format!("--{name} is required")))?)
    };
    let a = need("a", &job.a)?;
    let b = need("b", &job.b)?;
    let c = match (k, &job.c) {
        (3, v) => Some(need("c", v)?),
        (2, None) => None,
        (2, Some(_)) => return Err(usage("--c is only used with --k 3")),
        _ => return Err(usage(format!("--k must be 2 or 3, got {k}"))),
    };
    Ok(Params::new(k, a, b, c)?)
}

fn coordinate(name: &str, v: &str, p: &Params) -> Result<Coord, CliError> {
    match v {
        "xbar" => Ok(Coord::Algebraic(fixed_point(p)?.x)),
        "ybar" => Ok(Coord::Algebraic(fixed_point(p)?.y)),
        s => Ok(Coord::Rational(fraction(name, s)?)),
    }
}

fn start(job: &JobSpec, p: &Params) -> Result<StartPoint, CliError> {
    let x = job.x0.as_deref().ok_or_else(|| usage("--x0 is required"))?;
    let y = job.y0.as_deref().ok_or_else(|| usage("--y0 is required"))?;
    Ok(Point::new(coordinate("x0", x, p)?, coordinate("y0", y, p)?))
}

fn level(job: &JobSpec) -> Result<Rational, CliError> {
    fraction("h", job.h.as_deref().ok_or_else(|| usage("--h is required"))?)
}

fn points(job: &JobSpec, default: usize) -> Result<usize, CliError> {
    match job.n.unwrap_or(default) {
        0 => Err(usage("--n must be at least 1")),
        n => Ok(n),
    }
}

fn backend(job: &JobSpec) -> Result<Backend, CliError> {
    job.backend.as_deref().map_or(Ok(Backend::Auto), |s| s.parse().map_err(usage))
}

fn winding_options(job: &JobSpec) -> Result<WindingOptions, CliError> {
    let mut o = WindingOptions { backend: backend(job)?, ..WindingOptions::default() };
    if let Some(c) = job.precision_cap {
        if c < 64 {
            return Err(usage("--precision-cap must be at least 64 bits"));
        }
        o.precision_cap = c;
    }
    Ok(o)
}

fn format(job: &JobSpec) -> Result<Format, CliError> {
    match job.format.as_deref().unwrap_or("text") {
        "text" => Ok(Format::Text),
        "csv" => Ok(Format::Csv),
        "json" => Ok(Format::Json),
        f => Err(usage(format!("--format must be text, csv or json, got {f:?}"))),
    }
}

fn json(v: &impl Serialize) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("output serializes");
    s.push('\n');
    s
}

fn csv_unsupported(cmd: &str) -> CliError {
    usage(format!("{cmd} has no csv output; use text or json"))
}

fn parse_command(name: &str, verify: Option<VerifyArgs>) -> Result<Command, CliError> {
    Ok(match name {
        "orbit" => Command::Orbit,
        "invariant" => Command::Invariant,
        "fixed-point" => Command::FixedPoint,
        "rotation" => Command::Rotation,
        "scan" => Command::Scan,
        "bifurcation" => Command::Bifurcation,
        "classify" => Command::Classify,
        "verify" => Command::Verify(verify.unwrap_or_default()),
        s => return Err(usage(format!("unknown subcommand {s:?}"))),
    })
}

/// Resolves the subcommand and job from parsed flags and the job file.
pub fn resolve(cli: Cli) -> Result<(Command, JobSpec), CliError> {
    let job = match &cli.job_file {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
            let file: JobSpec = serde_json::from_str(&text).map_err(|e| usage(format!("job file {}: {e}", path.display())))?;
            cli.job.over(file)
        }
        None => cli.job,
    };
    let cmd = match cli.command {
        Some(c) => c,
        None => {
            let name = job.subcommand.as_deref().ok_or_else(|| usage("no subcommand given"))?;
            parse_command(name, job.verify.clone())?
        }
    };
    Ok((cmd, job))
}

/// Output of a successful run, or the verification report with failures.
pub fn execute(cmd: &Command, job: &JobSpec) -> Result<String, CliError> {
    let fmt = format(job)?;
    match cmd {
        Command::Orbit => run_orbit(job, fmt),
        Command::Invariant => run_invariant(job, fmt),
        Command::FixedPoint => run_fixed_point(job, fmt),
        Command::Rotation => run_rotation(job, fmt),
        Command::Scan => run_scan(job, fmt),
        Command::Bifurcation => run_bifurcation(job, fmt),
        Command::Classify => run_classify(job, fmt),
        Command::Verify(v) => run_verify(v, fmt),
    }
}

fn run_orbit(job: &JobSpec, fmt: Format) -> Result<String, CliError> {
    let p = params(job)?;
    let z0 = start(job, &p)?;
    let n = points(job, 10)?;
    let be = backend(job)?;
    match (z0.as_rational(), be) {
        (Some(z), Backend::Exact | Backend::Auto) => {
            let o = orbit(&p, &z, n)?;
            Ok(match fmt {
                Format::Csv => o.to_csv(),
                Format::Json => json(&o.to_json()),
                Format::Text => {
                    let mut s = String::new();
                    for (j, q) in o.points.iter().enumerate() {
                        let _ = writeln!(s, "{j}: ({}, {})", q.x, q.y);
                    }
                    let _ = writeln!(s, "level {}", o.level);
                    if let Some(q) = o.period {
                        let _ = writeln!(s, "period {q}, sequence period {}", q * p.k());
                    }
                    s
                }
            })
        }
        (None, Backend::Exact) => Err(usage("the exact backend needs rational x0 and y0")),
        _ => {
            let cap = winding_options(job)?.precision_cap;
            let o = orbit_ball(&p, &z0, n, DEFAULT_PRECISION, cap)?;
            Ok(match fmt {
                Format::Csv => o.to_csv(30),
                Format::Json => json(&o.to_json(30)),
                Format::Text => {
                    let mut s = String::new();
                    for (j, q) in o.points.iter().enumerate() {
                        let _ = writeln!(s, "{j}: ({}, {})", q.x.decimal(20), q.y.decimal(20));
                    }
                    let _ = writeln!(s, "level {}", o.level.decimal(20));
                    s
                }
            })
        }
    }
}

fn run_invariant(job: &JobSpec, fmt: Format) -> Result<String, CliError> {
    let p = params(job)?;
    let z0 = start(job, &p)?;
    z0.require_positive()?;
    let lv = Level::of(&p, &z0)?;
    let (value, exact) = match &lv {
        Level::Exact(h) => (h.to_string(), true),
        Level::Enclosed(b) => (b.decimal(30), false),
    };
    Ok(match fmt {
        Format::Text => format!("{value}\n"),
        Format::Json => json(&serde_json::json!({ "params": p, "x0": z0.x.to_string(), "y0": z0.y.to_string(), "h": value, "exact": exact })),
        Format::Csv => format!("h,exact\n{value},{exact}\n"),
    })
}

fn run_fixed_point(job: &JobSpec, fmt: Format) -> Result<String, CliError> {
    let p = params(job)?;
    let fp = fixed_point(&p)?;
    let h_c = critical_level_of(&fp)?;
    let xs = fp.image_xs()?;
    Ok(match fmt {
        Format::Json => json(&serde_json::json!({ "params": p, "x": fp.x, "y": fp.y, "h_c": h_c, "image_xs": xs })),
        Format::Text => {
            let mut s = String::new();
            let _ = writeln!(s, "x = {}  ({})", fp.x.decimal(12), fp.x);
            let _ = writeln!(s, "y = {}  ({})", fp.y.decimal(12), fp.y);
            let _ = writeln!(s, "h_c = {}  ({})", h_c.decimal(12), h_c);
            for (i, x) in xs.iter().enumerate() {
                let _ = writeln!(s, "image {} x = {}", i + 1, x.decimal(12));
            }
            s
        }
        Format::Csv => return Err(csv_unsupported("fixed-point")),
    })
}

fn run_rotation(job: &JobSpec, fmt: Format) -> Result<String, CliError> {
    let p = params(job)?;
    let z0 = start(job, &p)?;
    let n = points(job, 1000)?;
    let r = winding_bounds(&p, &z0, n, &winding_options(job)?)?;
    Ok(match fmt {
        Format::Text => format!("{}\n", r.estimate),
        Format::Json => json(&serde_json::json!({ "params": p, "n_points": n, "estimate": r.estimate, "log": r.log })),
        Format::Csv => {
            let (l, u) = r.estimate.bounds();
            format!("rho_low_num,rho_low_den,rho_upp_num,rho_upp_den,n_points\n{},{},{},{},{n}\n", l.num, l.den, u.num, u.den)
        }
    })
}

fn run_scan(job: &JobSpec, fmt: Format) -> Result<String, CliError> {
    let p = params(job)?;
    let xs = job.x0.as_deref().ok_or_else(|| usage("--x0 takes a comma-separated list for scan"))?;
    let y = job.y0.as_deref().ok_or_else(|| usage("--y0 is required"))?;
    let y = coordinate("y0", y, &p)?;
    let sched = xs
        .split(',')
        .map(|x| Ok(Point::new(coordinate("x0", x.trim(), &p)?, y.clone())))
        .collect::<Result<Vec<StartPoint>, CliError>>()?;
    let n = points(job, 1000)?;
    let rows = scan_profile(&p, &sched, n, &winding_options(job)?);
    Ok(match fmt {
        Format::Json => json(&rows_to_json(&rows)),
        Format::Csv | Format::Text => rows_to_csv(&rows),
    })
}

fn run_bifurcation(job: &JobSpec, fmt: Format) -> Result<String, CliError> {
    let p = params(job)?;
    let rep = bifurcation_levels(&p)?;
    let hi = |r: &lyness_core::adherence::Region| r.hi.as_ref().map_or("inf".to_string(), |h| h.decimal(12));
    Ok(match fmt {
        Format::Json => json(&rep.to_json()),
        Format::Csv => {
            let mut s = String::from("lo,hi,count\n");
            for r in &rep.regions {
                let _ = writeln!(s, "{},{},{}", r.lo.decimal(12), hi(r), r.count);
            }
            s
        }
        Format::Text => {
            let mut s = String::new();
            let _ = writeln!(s, "h_c = {}", rep.h_c.decimal(12));
            for l in &rep.levels {
                let pairs: Vec<String> = l.shifts.iter().map(|(i, j)| format!("R{}/R{}", i + 1, j + 1)).collect();
                let _ = writeln!(s, "level {} from {}", l.value.decimal(12), pairs.join(", "));
            }
            for r in &rep.regions {
                let _ = writeln!(s, "h in [{}, {}): {} interval{}", r.lo.decimal(12), hi(r), r.count, if r.count == 1 { "" } else { "s" });
            }
            s
        }
    })
}

fn run_classify(job: &JobSpec, fmt: Format) -> Result<String, CliError> {
    let p = params(job)?;
    let h = level(job)?;
    let cl = classify(&p, &h)?;
    Ok(match fmt {
        Format::Json => json(&cl),
        Format::Csv => cl.to_csv(12),
        Format::Text => {
            let mut s = format!("{} interval{}\n", cl.count, if cl.count == 1 { "" } else { "s" });
            for iv in &cl.intervals {
                let _ = writeln!(s, "shift {}: [{}, {}] around {}", iv.shift + 1, iv.x_lo.decimal(12), iv.x_hi.decimal(12), iv.image_x.decimal(12));
            }
            s
        }
    })
}

fn run_verify(v: &VerifyArgs, fmt: Format) -> Result<String, CliError> {
    let ids: Vec<u8> = if v.criteria.is_empty() { repro::ALL.to_vec() } else { v.criteria.clone() };
    if let Some(bad) = ids.iter().find(|i| !repro::ALL.contains(i)) {
        return Err(usage(format!("no criterion {bad}")));
    }
    let ids: Vec<u8> = ids.into_iter().filter(|i| !(v.skip_slow && repro::SLOW.contains(i))).collect();
    let reports: Vec<repro::CriterionReport> = ids.iter().map(|&i| repro::run(i)).collect();
    let out = match fmt {
        Format::Json => json(&reports),
        Format::Text | Format::Csv => repro::table(&reports, v.verbose),
    };
    if reports.iter().all(|r| r.passed) {
        Ok(out)
    } else {
        Err(CliError::Verification(out))
    }
}

fn emit(job: &JobSpec, text: &str) -> Result<(), CliError> {
    match &job.output {
        Some(path) => std::fs::write(path, text).map_err(|e| CliError::Io(format!("{}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

/// Parses `argv`, runs the job, writes its output and returns the exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    let (cmd, job) = match resolve(cli) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("{e}");
            return e.exit_code();
        }
    };
    match execute(&cmd, &job) {
        Ok(out) => match emit(&job, &out) {
            Ok(()) => EXIT_OK,
            Err(e) => {
                eprintln!("{e}");
                e.exit_code()
            }
        },
        Err(CliError::Verification(report)) => {
            let _ = emit(&job, &report);
            EXIT_VERIFY
        }
        Err(e) => {
            eprintln!("{e}");
            e.exit_code()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nested_variant_names() {
        assert_eq!(variant_path("RotationError", "Lyness(Domain(\"x\"))"), "RotationError::Lyness::Domain");
        assert_eq!(variant_path("AdherenceError", "LevelBelowCritical { h: \"1\" }"), "AdherenceError::LevelBelowCritical");
    }

    #[test]
    fn flags_override_job_file() {
        let file = JobSpec { a: Some("1".into()), b: Some("2".into()), ..JobSpec::default() };
        let flags = JobSpec { a: Some("3".into()), ..JobSpec::default() };
        let j = flags.over(file);
        assert_eq!((j.a.as_deref(), j.b.as_deref()), (Some("3"), Some("2")));
    }
}
