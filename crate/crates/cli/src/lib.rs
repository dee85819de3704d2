//! The `gw` command line tool: argument parsing, the invariant cache and output formats.

pub mod args;
pub mod cache;
pub mod commands;
pub mod output;

use clap::Parser;

pub use commands::Outcome;

/// Process exit codes.
pub mod exit {
    pub const SUCCESS: i32 = 0;
    pub const VERIFICATION_FAILURE: i32 = 1;
    pub const SOLVER: i32 = 2;
    pub const ROUTE_DISAGREEMENT: i32 = 3;
    pub const CACHE: i32 = 4;
    pub const USAGE: i32 = 64;
}

/// Parses `argv` (including the program name) and runs the command.
pub fn run<I, T>(argv: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match args::Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                Outcome { code: exit::USAGE, stdout: String::new(), stderr: text }
            } else {
                Outcome { code: exit::SUCCESS, stdout: text, stderr: String::new() }
            };
        }
    };
    match &cli.command {
        args::Command::Rational(a) => commands::cmd_rational(a),
        args::Command::Elliptic(a) => commands::cmd_elliptic(a),
        args::Command::Verify(a) => commands::cmd_verify(a),
    }
}
