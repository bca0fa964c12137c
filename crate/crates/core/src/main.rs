use std::io;
use std::process::ExitCode;

fn main() -> ExitCode {
    let code = biclique_cert::cli::run(std::env::args_os(), &mut io::stdout(), &mut io::stderr());
    ExitCode::from(code as u8)
}
