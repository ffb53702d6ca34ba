//! Command-line front end. [`run`] is the whole program minus process setup,
//! so it can be driven from tests with in-memory writers.

use std::io::{self, Write};

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use serde_json::json;

use crate::chains::{enumerate_fixed_points, kappa};
use crate::compass::{compass, dimension};
use crate::error::Error;
use crate::localization::{
    localization_sums, random_subgroup, Parallelism, Subgroup,
};
use crate::reference::interpolate_phi;
use crate::verify;

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_INTERNAL: i32 = 3;

/// Default upper bound for random subgroup weights.
pub const DEFAULT_RANDOM_BOUND: u64 = 1 << 20;

#[derive(Debug, Parser)]
#[command(
    name = "mldegree",
    version,
    about = "Exact ML-degrees of generic linear concentration models"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Compute phi(n, a).
    Compute {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        a: u32,
        #[command(flatten)]
        opts: CommonOpts,
    },
    /// Compute the full row phi(n, 1..C(n+1,2)).
    Table {
        #[arg(long)]
        n: u32,
        #[command(flatten)]
        opts: CommonOpts,
    },
    /// Stream fixed points with their compasses as JSON lines.
    FixedPoints {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        count_only: bool,
        #[command(flatten)]
        opts: CommonOpts,
    },
    /// Run the invariant suite for every n up to --n-max.
    Verify {
        #[arg(long)]
        n_max: u32,
        #[command(flatten)]
        opts: CommonOpts,
    },
    /// Interpolate phi(., a) from computed values at n_min..=n_max.
    Interpolate {
        #[arg(long)]
        a: u32,
        #[arg(long)]
        n_min: u32,
        #[arg(long)]
        n_max: u32,
        #[command(flatten)]
        opts: CommonOpts,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SubgroupMode {
    Pow2,
    Random,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Plain,
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Threads {
    Auto,
    Fixed(usize),
}

fn parse_threads(s: &str) -> Result<Threads, String> {
    if s == "auto" {
        return Ok(Threads::Auto);
    }
    match s.parse::<usize>() {
        Ok(0) => Err("threads must be at least 1".into()),
        Ok(t) => Ok(Threads::Fixed(t)),
        Err(_) => Err(format!("expected a positive integer or 'auto', got '{s}'")),
    }
}

#[derive(Debug, Clone, Args)]
pub struct CommonOpts {
    #[arg(long, value_enum, default_value_t = SubgroupMode::Pow2)]
    pub subgroup: SubgroupMode,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = DEFAULT_RANDOM_BOUND)]
    pub bound: u64,
    #[arg(long, value_parser = parse_threads, default_value = "auto")]
    pub threads: Threads,
    #[arg(long, value_enum, default_value_t = OutputFormat::Plain)]
    pub format: OutputFormat,
}

impl CommonOpts {
    fn parallelism(&self) -> Parallelism {
        match self.threads {
            Threads::Auto => Parallelism::default(),
            Threads::Fixed(t) => Parallelism::threads(t),
        }
    }

    fn subgroup(&self, n: u32) -> Result<Option<Subgroup>, Error> {
        match self.subgroup {
            SubgroupMode::Pow2 => Ok(None),
            SubgroupMode::Random => random_subgroup(n, self.seed, self.bound).map(Some),
        }
    }

    fn subgroup_label(&self) -> &'static str {
        match self.subgroup {
            SubgroupMode::Pow2 => "pow2",
            SubgroupMode::Random => "random",
        }
    }
}

#[derive(Debug)]
enum Failure {
    Lib(Error),
    Io(io::Error),
    Verify(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Io(e)
    }
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Internal(_) => EXIT_INTERNAL,
        Error::InconsistentSample { .. } => EXIT_VERIFY_FAILED,
        _ => EXIT_USAGE,
    }
}

/// Parses `args` (including the program name) and runs the command.
/// Returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = write!(err, "{}", e.render());
            if !e.use_stderr() {
                let _ = write!(out, "{}", e.render());
            }
            return code;
        }
    };
    match dispatch(&cli.command, out) {
        Ok(()) => EXIT_OK,
        Err(Failure::Lib(e)) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
        Err(Failure::Io(e)) if e.kind() == io::ErrorKind::BrokenPipe => EXIT_OK,
        Err(Failure::Io(e)) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_INTERNAL
        }
        Err(Failure::Verify(msg)) => {
            let _ = writeln!(err, "verification failed: {msg}");
            EXIT_VERIFY_FAILED
        }
    }
}

fn dispatch(command: &Command, out: &mut dyn Write) -> Result<(), Failure> {
    match command {
        Command::Compute { n, a, opts } => cmd_compute(*n, *a, opts, out),
        Command::Table { n, opts } => cmd_table(*n, opts, out),
        Command::FixedPoints {
            n,
            count_only,
            opts,
        } => cmd_fixed_points(*n, *count_only, opts, out),
        Command::Verify { n_max, opts } => cmd_verify(*n_max, opts, out),
        Command::Interpolate {
            a,
            n_min,
            n_max,
            opts,
        } => cmd_interpolate(*a, *n_min, *n_max, opts, out),
    }
}

fn cmd_compute(n: u32, a: u32, opts: &CommonOpts, out: &mut dyn Write) -> Result<(), Failure> {
    let subgroup = opts.subgroup(n)?;
    let sums = localization_sums(n, &[a], subgroup.as_ref(), opts.parallelism())?;
    let fixed_points = sums.fixed_points;
    let phi = sums.into_degrees()?.remove(0);
    match opts.format {
        OutputFormat::Plain => writeln!(out, "{phi}")?,
        OutputFormat::Json => writeln!(
            out,
            "{}",
            json!({
                "n": n,
                "a": a,
                "phi": phi.to_string(),
                "fixed_points": fixed_points,
                "subgroup": opts.subgroup_label(),
            })
        )?,
        OutputFormat::Csv => {
            writeln!(out, "n,a,phi")?;
            writeln!(out, "{n},{a},{phi}")?;
        }
    }
    Ok(())
}

fn cmd_table(n: u32, opts: &CommonOpts, out: &mut dyn Write) -> Result<(), Failure> {
    if n == 0 {
        return Err(Error::InvalidArgument("n must be at least 1".into()).into());
    }
    let subgroup = opts.subgroup(n)?;
    let a_values: Vec<u32> = (1..=dimension(n) as u32 + 1).collect();
    let row = localization_sums(n, &a_values, subgroup.as_ref(), opts.parallelism())?
        .into_degrees()?;
    match opts.format {
        OutputFormat::Plain => {
            let cells: Vec<String> = row.iter().map(ToString::to_string).collect();
            writeln!(out, "{}", cells.join(","))?;
        }
        OutputFormat::Json => {
            let rows: Vec<_> = row
                .iter()
                .zip(1u32..)
                .map(|(phi, a)| json!({"n": n, "a": a, "phi": phi.to_string()}))
                .collect();
            writeln!(out, "{}", serde_json::Value::Array(rows))?;
        }
        OutputFormat::Csv => {
            writeln!(out, "n,a,phi")?;
            for (phi, a) in row.iter().zip(1u32..) {
                writeln!(out, "{n},{a},{phi}")?;
            }
        }
    }
    Ok(())
}

fn cmd_fixed_points(
    n: u32,
    count_only: bool,
    opts: &CommonOpts,
    out: &mut dyn Write,
) -> Result<(), Failure> {
    if n == 0 {
        return Err(Error::InvalidArgument("n must be at least 1".into()).into());
    }
    if count_only {
        let k = kappa(n);
        match opts.format {
            OutputFormat::Json => writeln!(out, "{}", json!({"n": n, "fixed_points": k.to_string()}))?,
            OutputFormat::Csv => {
                writeln!(out, "n,fixed_points")?;
                writeln!(out, "{n},{k}")?;
            }
            OutputFormat::Plain => writeln!(out, "{k}")?,
        }
        return Ok(());
    }
    for p in enumerate_fixed_points(n)? {
        let chars: Vec<Vec<i32>> = compass(&p)?
            .into_iter()
            .map(|c| c.coeffs().to_vec())
            .collect();
        writeln!(
            out,
            "{}",
            json!({"blocks": p.index_sets(), "compass": chars})
        )?;
    }
    Ok(())
}

fn cmd_verify(n_max: u32, opts: &CommonOpts, out: &mut dyn Write) -> Result<(), Failure> {
    if n_max == 0 {
        return Err(Error::InvalidArgument("--n-max must be at least 1".into()).into());
    }
    let report = verify::run(n_max, opts.parallelism())?;
    match opts.format {
        OutputFormat::Json => writeln!(
            out,
            "{}",
            serde_json::to_string(&report.checks).expect("report serializes")
        )?,
        OutputFormat::Csv => {
            writeln!(out, "check,status,detail")?;
            for c in &report.checks {
                writeln!(out, "{},{},\"{}\"", c.name, c.status, c.detail.replace('"', "'"))?;
            }
        }
        OutputFormat::Plain => {
            for c in &report.checks {
                writeln!(out, "{} {} ({})", c.status, c.name, c.detail)?;
            }
        }
    }
    match report.first_failure() {
        None => Ok(()),
        Some(c) => Err(Failure::Verify(format!("{}: {}", c.name, c.detail))),
    }
}

fn cmd_interpolate(
    a: u32,
    n_min: u32,
    n_max: u32,
    opts: &CommonOpts,
    out: &mut dyn Write,
) -> Result<(), Failure> {
    if a == 0 || n_min == 0 || n_max < n_min {
        return Err(Error::InvalidArgument(
            "need a >= 1 and 1 <= n_min <= n_max".into(),
        )
        .into());
    }
    if ((n_max - n_min + 1) as u64) < a as u64 {
        return Err(Error::InvalidArgument(format!(
            "range {n_min}..={n_max} has fewer than a = {a} points"
        ))
        .into());
    }
    let mut samples = Vec::new();
    for n in n_min..=n_max {
        // phi(n, a) vanishes once a exceeds C(n+1, 2).
        let phi = if a as u64 > dimension(n) + 1 {
            BigInt::from(0)
        } else {
            let subgroup = opts.subgroup(n)?;
            let degree = localization_sums(n, &[a], subgroup.as_ref(), opts.parallelism())?
                .into_degrees()?
                .remove(0);
            BigInt::from(degree)
        };
        samples.push((n as i64, phi));
    }
    let poly = interpolate_phi(a, &samples)?;
    let coeffs = poly.coeff_strings();
    match opts.format {
        OutputFormat::Plain => writeln!(out, "{}", coeffs.join(" "))?,
        OutputFormat::Json => writeln!(
            out,
            "{}",
            json!({"a": a, "n_min": n_min, "n_max": n_max, "coeffs": coeffs})
        )?,
        OutputFormat::Csv => {
            writeln!(out, "degree,coeff")?;
            for (k, c) in coeffs.iter().enumerate() {
                writeln!(out, "{k},{c}")?;
            }
        }
    }
    Ok(())
}
