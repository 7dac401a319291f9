mod args;
mod output;
mod run;

use std::io::Write;
use std::process::ExitCode;

use clap::{CommandFactory, Parser};

use args::{Cli, Format};

const EXIT_ASSERTION: u8 = 1;
const EXIT_USAGE: u8 = 2;

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Err(msg) = cli.command.validate() {
        Cli::command().error(clap::error::ErrorKind::ValueValidation, msg).exit();
    }

    let (doc, code) = match run::run(&cli.command) {
        Ok(done) => (done.doc, if done.failed { EXIT_ASSERTION } else { 0 }),
        Err(e) => {
            eprintln!("error: {e}");
            let code = if run::is_usage_error(&e) { EXIT_USAGE } else { EXIT_ASSERTION };
            (run::error_document(cli.command.name(), &e), code)
        }
    };

    let out = cli.command.output();
    let text = match out.format {
        Format::Json => doc.to_json(),
        Format::Csv => doc.to_csv(),
    };
    let written = match &out.out {
        Some(path) => std::fs::write(path, text.as_bytes()),
        None => std::io::stdout().lock().write_all(text.as_bytes()),
    };
    if let Err(e) = written {
        eprintln!("error: cannot write output: {e}");
        return ExitCode::from(EXIT_ASSERTION);
    }
    ExitCode::from(code)
}
