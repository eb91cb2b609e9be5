use clap::Parser;
use std::io::Write;

fn main() {
    let cli = hodgenorm_cli::Cli::parse();
    match hodgenorm_cli::run(cli) {
        Ok(outcome) => {
            let code = i32::from(outcome.violation);
            // A closed pipe downstream is not an error worth reporting;
            // keep the exit code either way.
            let _ = writeln!(std::io::stdout().lock(), "{}", outcome.body);
            std::process::exit(code);
        }
        Err(err) => {
            eprintln!("error: {err:#}");
            std::process::exit(2);
        }
    }
}
