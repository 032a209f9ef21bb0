use std::process::ExitCode;

use clap::Parser;
use lightning::config::read_config;
use lightning::{run_with_threads, write_atomic, write_records, Args, CliResult, ExperimentSpec, FileConfig};

fn main() -> ExitCode {
    match try_main() {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("lightning: {e}");
            e.exit_code()
        }
    }
}

fn try_main() -> CliResult<()> {
    let args = match Args::try_parse() {
        Ok(a) => a,
        Err(e) if e.use_stderr() => {
            let _ = e.print();
            std::process::exit(2);
        }
        Err(e) => {
            let _ = e.print();
            std::process::exit(0);
        }
    };
    let file = match &args.config {
        Some(path) => read_config(path)?,
        None => FileConfig::default(),
    };
    let spec = ExperimentSpec::resolve(args, file)?;
    let records = run_with_threads(&spec)?;
    match &spec.out {
        Some(path) => write_atomic(path, spec.format, records.into_iter().map(Ok)),
        None => write_records(&mut std::io::stdout().lock(), spec.format, records.into_iter().map(Ok)),
    }
}
