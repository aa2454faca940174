//! Command-line front end.
//!
//! ```text
//! titree <-c|-g|-s|-p|-v> <n_max> [m] [--threads T] [--deterministic] [--verify-against-oracle]
//! ```

use std::io::{self, Write};
use std::process::ExitCode;

use clap::{ArgGroup, Parser};
use titree_core::oracle::ORACLE_MAX_ORDER;
use titree_core::wti::MAX_ORDER;
use titree_core::GenerationPlan;

use crate::codecs::Format;
use crate::parallel::{generate_formatted, RunOptions};
use crate::verify::{verify_against_oracle, VerifyError, VerifyReport};

#[derive(Parser, Debug)]
#[command(
    name = "titree",
    version,
    about = "Generates all transmission-irregular trees up to a given order",
    group(ArgGroup::new("mode").required(true).multiple(false))
)]
struct Args {
    /// Print the number of TI trees of each order
    #[arg(short = 'c', long = "count", group = "mode")]
    count: bool,
    /// Print every tree in graph6
    #[arg(short = 'g', long = "graph6", group = "mode")]
    graph6: bool,
    /// Print every tree in sparse6
    #[arg(short = 's', long = "sparse6", group = "mode")]
    sparse6: bool,
    /// Print, for every tree, the parent of each non-root vertex
    #[arg(short = 'p', long = "parent-list", group = "mode")]
    parent_list: bool,
    /// Compare the generator with the brute-force oracle for each order
    #[arg(short = 'v', long = "verify", group = "mode")]
    verify: bool,

    /// Maximum tree order
    n_max: usize,
    /// Maximum vertex degree (unbounded if omitted)
    m: Option<usize>,

    /// Worker threads (defaults to the available parallelism)
    #[arg(long)]
    threads: Option<usize>,
    /// Single-threaded run with a fixed output order
    #[arg(long)]
    deterministic: bool,
    /// After the normal output, check it against the oracle
    #[arg(long)]
    verify_against_oracle: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    Count,
    Graph6,
    Sparse6,
    ParentList,
    Verify,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunConfig {
    pub mode: Mode,
    pub n_max: usize,
    pub max_degree: Option<usize>,
    pub options: RunOptions,
    /// Also cross-check against the oracle in a non-verify mode.
    pub cross_check: bool,
}

/// Process exit statuses.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Success = 0,
    Usage = 1,
    Mismatch = 2,
    Io = 3,
}

impl From<Status> for ExitCode {
    fn from(status: Status) -> Self {
        ExitCode::from(status as u8)
    }
}

/// Either a usage error (message for stderr) or a help/version request
/// (message for stdout).
#[derive(Debug)]
pub enum ParseOutcome {
    Usage(String),
    Info(String),
}

impl RunConfig {
    pub fn parse_from<I, T>(args: I) -> Result<RunConfig, ParseOutcome>
    where
        I: IntoIterator<Item = T>,
        T: Into<std::ffi::OsString> + Clone,
    {
        let args = Args::try_parse_from(args).map_err(|e| {
            let text = e.render().to_string();
            if e.use_stderr() {
                ParseOutcome::Usage(text)
            } else {
                ParseOutcome::Info(text)
            }
        })?;
        let mode = if args.count {
            Mode::Count
        } else if args.graph6 {
            Mode::Graph6
        } else if args.sparse6 {
            Mode::Sparse6
        } else if args.parent_list {
            Mode::ParentList
        } else {
            Mode::Verify
        };
        let usage = |msg: String| Err(ParseOutcome::Usage(format!("error: {msg}\n")));
        if args.n_max == 0 || args.n_max > MAX_ORDER {
            return usage(format!("n_max must be in 1..={MAX_ORDER}"));
        }
        if let Some(m) = args.m {
            if m < 2 {
                return usage("the maximum degree must be at least 2".into());
            }
        }
        if (mode == Mode::Verify || args.verify_against_oracle) && args.n_max > ORACLE_MAX_ORDER {
            return usage(format!(
                "oracle verification needs n_max <= {ORACLE_MAX_ORDER}"
            ));
        }
        if args.threads == Some(0) {
            return usage("--threads must be at least 1".into());
        }
        let mut options = RunOptions {
            deterministic: args.deterministic,
            ..RunOptions::default()
        };
        if let Some(t) = args.threads {
            options.threads = t;
        }
        Ok(RunConfig {
            mode,
            n_max: args.n_max,
            max_degree: args.m,
            options,
            cross_check: args.verify_against_oracle,
        })
    }
}

/// Runs one configuration. Results go to `out`, diagnostics to `err`.
pub fn run<W: Write, E: Write>(config: &RunConfig, out: &mut W, err: &mut E) -> Status {
    let plan = match GenerationPlan::new(config.n_max, config.max_degree) {
        Ok(plan) => plan,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return Status::Usage;
        }
    };
    let format = match config.mode {
        Mode::Count => None,
        Mode::Graph6 => Some(Format::Graph6),
        Mode::Sparse6 => Some(Format::Sparse6),
        Mode::ParentList => Some(Format::ParentList),
        Mode::Verify => return verify_mode(&plan, config, out, err),
    };

    let census = match generate_formatted(&plan, format, &config.options, out) {
        Ok(census) => census,
        Err(e) => return io_failure(err, &e),
    };
    if config.mode == Mode::Count {
        for (k, count) in census.iter() {
            if let Err(e) = writeln!(out, "{k} {count}") {
                return io_failure(err, &e);
            }
        }
    }
    if let Err(e) = out.flush() {
        return io_failure(err, &e);
    }

    if config.cross_check {
        match verify_against_oracle(&plan, &config.options) {
            Ok(report) => {
                if write_report(err, &report).is_err() {
                    return Status::Io;
                }
                if !report.all_agree() {
                    return Status::Mismatch;
                }
            }
            Err(e) => return verify_failure(err, e),
        }
    }
    Status::Success
}

fn verify_mode<W: Write, E: Write>(
    plan: &GenerationPlan,
    config: &RunConfig,
    out: &mut W,
    err: &mut E,
) -> Status {
    let report = match verify_against_oracle(plan, &config.options) {
        Ok(report) => report,
        Err(e) => return verify_failure(err, e),
    };
    if let Err(e) = write_report(out, &report).and_then(|_| out.flush()) {
        return io_failure(err, &e);
    }
    if report.all_agree() {
        Status::Success
    } else {
        let _ = writeln!(err, "error: generator and oracle disagree");
        Status::Mismatch
    }
}

/// One line per order: `order generated oracle ok|MISMATCH`.
fn write_report<W: Write>(w: &mut W, report: &VerifyReport) -> io::Result<()> {
    for o in &report.orders {
        let verdict = if o.agree { "ok" } else { "MISMATCH" };
        writeln!(w, "{} {} {} {}", o.order, o.generated, o.oracle, verdict)?;
    }
    Ok(())
}

fn verify_failure<E: Write>(err: &mut E, e: VerifyError) -> Status {
    match e {
        VerifyError::Io(e) => io_failure(err, &e),
        other => {
            let _ = writeln!(err, "error: {other}");
            Status::Usage
        }
    }
}

fn io_failure<E: Write>(err: &mut E, e: &io::Error) -> Status {
    let _ = writeln!(err, "error: output failed: {e}");
    Status::Io
}
