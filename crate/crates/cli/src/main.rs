use std::process::ExitCode;

use clap::Parser;
use robustnp_cli::report::Report;
use robustnp_cli::{json_target, run, Cli, CliError};

fn emit(report: &Report, json: Option<&std::path::PathBuf>) -> Result<(), CliError> {
    print!("{}", report.to_table());
    if let Some(path) = json {
        std::fs::write(path, report.to_json())
            .map_err(|e| CliError::Input(format!("cannot write {}: {e}", path.display())))?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = run(&cli).and_then(|(report, json)| emit(&report, json.as_ref()));
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            if let CliError::OracleMismatch(_, report) = &e {
                let _ = emit(report, json_target(&cli));
            }
            eprintln!("robustnp: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
