use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use shallowq_cli::{run, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            let mut stdout = std::io::stdout().lock();
            let _ = stdout.write_all(out.stdout.as_bytes());
            ExitCode::from(out.code)
        }
        Err(e) => {
            eprintln!("shallowq: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
