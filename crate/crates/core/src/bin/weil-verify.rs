use std::fs::File;
use std::io::{self, BufWriter};
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, ValueEnum};

use canonical_weil::suite::{emit_report, run_suite, Format, SuiteConfig, DEFAULT_SAMPLES};

#[derive(Debug, Clone, Copy, ValueEnum)]
enum OutFormat {
    Json,
    Csv,
}

/// Exact verification suites for the canonical intertwining kernels and the
/// canonical Weil representation over F_p.
#[derive(Debug, Parser)]
#[command(name = "weil-verify", version)]
struct Args {
    /// Odd prime; supported with --n: (3,1) (5,1) (7,1) (11,1) (3,2)
    #[arg(long, default_value_t = 3)]
    p: u32,
    /// Half the dimension of V
    #[arg(long, default_value_t = 1)]
    n: usize,
    /// Suite name, or "all"
    #[arg(long, default_value = "all")]
    suite: String,
    /// Size of sampled check families that have no fixed count
    #[arg(long, default_value_t = DEFAULT_SAMPLES)]
    samples: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output file; standard output when absent
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = OutFormat::Json)]
    format: OutFormat,
    /// Record wall-clock duration in the report (output is then not byte-stable)
    #[arg(long)]
    timing: bool,
}

fn main() -> ExitCode {
    let args = match Args::try_parse() {
        Ok(a) => a,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(2) } else { ExitCode::SUCCESS };
        }
    };
    let config = SuiteConfig {
        p: args.p,
        n: args.n,
        suite: args.suite,
        samples: args.samples,
        seed: args.seed,
    };
    let start = Instant::now();
    let mut report = match run_suite(&config) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("weil-verify: {e}");
            return ExitCode::from(2);
        }
    };
    if args.timing {
        report.duration_ms = Some(start.elapsed().as_millis());
    }
    let format = match args.format {
        OutFormat::Json => Format::Json,
        OutFormat::Csv => Format::Csv,
    };
    let written = match &args.out {
        Some(path) => match File::create(path) {
            Ok(f) => emit_report(&report, format, BufWriter::new(f)),
            Err(e) => {
                eprintln!("weil-verify: cannot write {}: {e}", path.display());
                return ExitCode::from(2);
            }
        },
        None => emit_report(&report, format, io::stdout().lock()),
    };
    if let Err(e) = written {
        eprintln!("weil-verify: {e}");
        return ExitCode::from(2);
    }
    if report.all_passed() {
        ExitCode::SUCCESS
    } else {
        eprintln!(
            "weil-verify: {} of {} checks failed",
            report.failed, report.total
        );
        ExitCode::from(1)
    }
}
