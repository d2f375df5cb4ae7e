use std::io::{self, Write};
use std::process::ExitCode;

use ddl_cli::{parse_args, run, Command, EXIT_PARSE, USAGE};

fn main() -> ExitCode {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let stdout = io::stdout();
    let mut out = io::BufWriter::new(stdout.lock());
    let mut err = io::stderr();
    let code = match parse_args(&args) {
        Ok(Command::Run(config)) => run(&config, &mut out, &mut err),
        Ok(Command::Bench(rest)) => ddl_cli::bench::bench(&rest, &mut out, &mut err),
        Ok(Command::Help) => {
            let _ = write!(out, "{USAGE}");
            0
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}\n\n{USAGE}");
            EXIT_PARSE
        }
    };
    let _ = out.flush();
    ExitCode::from(code as u8)
}
