use std::io;
use std::process::ExitCode;

use clap::Parser;
use fixindex::cli::{run, RunConfig};

fn main() -> ExitCode {
    let cfg = RunConfig::parse();
    let code = run(&cfg, &mut io::stdout().lock(), &mut io::stderr().lock());
    ExitCode::from(code as u8)
}
