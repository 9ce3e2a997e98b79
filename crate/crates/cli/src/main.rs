use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use gemqm_cli::{run, Options, Profile};

/// Simulate gradient echo memories and gradient frequency combs.
#[derive(Debug, Parser)]
#[command(name = "gemqm", version)]
struct Args {
    /// JSON run configuration.
    #[arg(long)]
    config: PathBuf,
    /// Directory for artifacts, report.json and manifest.json.
    #[arg(long, default_value = "out")]
    out_dir: PathBuf,
    /// Worker threads for sweeps.
    #[arg(long)]
    jobs: Option<usize>,
    #[arg(long, value_enum, default_value = "fast")]
    tolerance_profile: Profile,
}

fn fmt_value(v: [f64; 2]) -> String {
    if v[1] == 0.0 {
        format!("{}", v[0])
    } else {
        format!("{}{:+}i", v[0], v[1])
    }
}

fn main() -> ExitCode {
    let args = match Args::try_parse() {
        Ok(a) => a,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    if args.jobs == Some(0) {
        eprintln!("error: --jobs must be at least 1");
        return ExitCode::from(2);
    }
    let opts = Options { config: args.config, out_dir: args.out_dir, jobs: args.jobs, profile: args.tolerance_profile };
    match run(&opts) {
        Ok(report) => {
            for case in &report.cases {
                if let Some(v) = case.probe.as_ref().and_then(|p| p.value) {
                    println!("{}", fmt_value(v));
                }
                for w in &case.warnings {
                    eprintln!("warning: {}: {w}", case.name);
                }
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
