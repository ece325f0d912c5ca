use std::io::{self, IsTerminal, Read, Write};
use std::process::ExitCode;

fn main() -> ExitCode {
    let mut stdin = String::new();
    if !io::stdin().is_terminal() {
        if let Err(e) = io::stdin().read_to_string(&mut stdin) {
            eprintln!("error: cannot read standard input: {e}");
            return ExitCode::from(2);
        }
    }
    let out = vanilla_cli::run(std::env::args_os(), &stdin);
    let _ = io::stdout().write_all(out.stdout.as_bytes());
    let _ = io::stderr().write_all(out.stderr.as_bytes());
    ExitCode::from(out.code as u8)
}
