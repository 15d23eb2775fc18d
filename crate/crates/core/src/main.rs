use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use slicereg::cli::{run, Cli};

fn init_threads() -> Result<(), String> {
    let Ok(v) = std::env::var("SLICEREG_THREADS") else {
        return Ok(());
    };
    let n: usize = v
        .parse()
        .map_err(|_| format!("SLICEREG_THREADS={v} is not a thread count"))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| e.to_string())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Err(e) = init_threads() {
        eprintln!("error: {e}");
        return ExitCode::from(2);
    }
    match run(&cli) {
        Ok(rep) => {
            if cli.out.is_none() {
                let _ = std::io::stdout().write_all(rep.to_json().as_bytes());
            }
            for v in &rep.violations {
                eprintln!("violation: {v}");
            }
            if rep.pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
