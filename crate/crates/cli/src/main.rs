use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use hyperconvex::scenario::{execute, Command, Report, Scenario, DEFAULT_DIRS};

/// Hausdorff geometry of convex polytopes under finite group actions.
///
/// Every command writes a JSON report (to `--report`, or standard output) and
/// exits 0 when all checks pass, 1 when a check fails, 2 on invalid input.
#[derive(Debug, Parser)]
#[command(name = "hyperconvex", version)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Debug, Args)]
struct Common {
    /// Tolerance for checks that default to 1e-9.
    #[arg(long, allow_negative_numbers = true)]
    tol: Option<f64>,
    /// Seed for sampled directions.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Report file; standard output when omitted.
    #[arg(long)]
    report: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
enum Cmd {
    /// Hausdorff distance between two body files.
    Hausdorff {
        #[arg(long)]
        a: PathBuf,
        #[arg(long)]
        b: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Minkowski sum of two body files.
    Minkowski {
        #[arg(long)]
        a: PathBuf,
        #[arg(long)]
        b: PathBuf,
        /// Where to write the sum as a body file.
        #[arg(long)]
        out: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Formal-difference embedding checks on two bodies.
    Embed {
        #[arg(long)]
        a: PathBuf,
        #[arg(long)]
        b: PathBuf,
        /// Number of support directions to sample.
        #[arg(long, default_value_t = DEFAULT_DIRS)]
        dirs: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Equivariant extension of a problem file.
    Extend {
        #[arg(long)]
        problem: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Discontinuity table for the Cantor group truncated at k bits.
    Cantor {
        #[arg(long)]
        k: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Lift an affine group and a body to the block-permutation space.
    Lift {
        #[arg(long)]
        group: PathBuf,
        #[arg(long)]
        body: PathBuf,
        /// Second body, enabling the isometry check.
        #[arg(long)]
        other: Option<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
    /// Run a property suite: metric, group, radstrom, extension, cantor, lift or all.
    Verify {
        #[arg(long)]
        suite: String,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        cases: usize,
        #[arg(long, allow_negative_numbers = true)]
        tol: Option<f64>,
        #[arg(long)]
        report: PathBuf,
    },
    /// Run a scenario file.
    Run {
        #[arg(long)]
        scenario: PathBuf,
    },
}

fn with_common(command: Command, common: Common) -> Scenario {
    Scenario {
        command,
        seed: common.seed,
        tol: common.tol,
        report: common.report,
    }
}

fn scenario(cmd: Cmd) -> hyperconvex::Result<Scenario> {
    Ok(match cmd {
        Cmd::Hausdorff { a, b, common } => with_common(Command::Hausdorff { a, b }, common),
        Cmd::Minkowski { a, b, out, common } => with_common(Command::Minkowski { a, b, out: Some(out) }, common),
        Cmd::Embed { a, b, dirs, common } => with_common(Command::Embed { a, b, dirs }, common),
        Cmd::Extend { problem, common } => with_common(Command::Extend { problem }, common),
        Cmd::Cantor { k, common } => with_common(Command::Cantor { k }, common),
        Cmd::Lift {
            group,
            body,
            other,
            common,
        } => with_common(Command::Lift { group, body, other }, common),
        Cmd::Verify {
            suite,
            seed,
            cases,
            tol,
            report,
        } => Scenario {
            command: Command::Verify { suite, cases },
            seed,
            tol,
            report: Some(report),
        },
        Cmd::Run { scenario } => Scenario::load(&scenario)?,
    })
}

fn summary(report: &Report) -> String {
    match report {
        Report::Scenario(r) => {
            let failed: Vec<&str> = r.checks.iter().filter(|c| !c.pass).map(|c| c.name.as_str()).collect();
            if failed.is_empty() {
                format!("{}: {} checks passed", r.command, r.checks.len())
            } else {
                format!("{}: failed {}", r.command, failed.join(", "))
            }
        }
        Report::Suite(r) => format!(
            "suite {} seed {} cases {}: {} failures",
            r.suite,
            r.seed,
            r.cases,
            r.failures.len()
        ),
    }
}

fn run(cli: Cli) -> hyperconvex::Result<bool> {
    let s = scenario(cli.command)?;
    let report = execute(&s)?;
    if s.report.is_some() {
        eprintln!("{}", summary(&report));
    } else {
        print!("{}", report.to_json()?);
    }
    Ok(report.passed())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
