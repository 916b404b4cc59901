use std::io::Write;
use std::process::ExitCode;

fn main() -> ExitCode {
    match toruspdo::run(std::env::args_os()) {
        Ok(outcome) => {
            let mut stdout = std::io::stdout().lock();
            if stdout.write_all(outcome.body.as_bytes()).and_then(|_| stdout.flush()).is_err() {
                return ExitCode::from(toruspdo::EXIT_ERROR as u8);
            }
            for m in &outcome.messages {
                eprintln!("{m}");
            }
            ExitCode::from(outcome.exit_code as u8)
        }
        Err((code, message)) => {
            eprint!("{message}");
            if !message.ends_with('\n') {
                eprintln!();
            }
            ExitCode::from(code as u8)
        }
    }
}
