use std::io::Write;
use std::process::ExitCode;

fn main() -> ExitCode {
    let outcome = crystal_cli::execute(std::env::args_os());
    let bytes = outcome.output.as_bytes();
    let _ = if outcome.to_stderr {
        std::io::stderr().lock().write_all(bytes)
    } else {
        let mut out = std::io::stdout().lock();
        out.write_all(bytes).and_then(|_| out.flush())
    };
    ExitCode::from(outcome.code as u8)
}
