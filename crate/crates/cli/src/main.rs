use std::io::Write;
use std::panic;
use std::process::ExitCode;

use clap::Parser;
use dgcalc::{execute, Cli};

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    panic::set_hook(Box::new(|_| {}));
    let outcome = panic::catch_unwind(|| execute(&cli));
    match outcome {
        Ok(Ok(out)) => {
            let _ = std::io::stdout().write_all(out.as_bytes());
            ExitCode::SUCCESS
        }
        Ok(Err(e)) => {
            eprintln!("dgcalc: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
        Err(p) => {
            let msg = p.downcast_ref::<String>().cloned().or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string())).unwrap_or_default();
            eprintln!("dgcalc: internal failure: {msg}");
            ExitCode::from(3)
        }
    }
}
