use std::io::{self, BufWriter, Write};
use std::process::ExitCode;

use titree::cli::{run, ParseOutcome, RunConfig, Status};

fn main() -> ExitCode {
    let config = match RunConfig::parse_from(std::env::args_os()) {
        Ok(config) => config,
        Err(ParseOutcome::Info(text)) => {
            print!("{text}");
            return Status::Success.into();
        }
        Err(ParseOutcome::Usage(text)) => {
            eprint!("{text}");
            return Status::Usage.into();
        }
    };
    let stdout = io::stdout();
    let mut out = BufWriter::with_capacity(1 << 16, stdout.lock());
    let mut err = io::stderr().lock();
    let status = run(&config, &mut out, &mut err);
    let _ = err.flush();
    status.into()
}
