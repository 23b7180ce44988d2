use std::fmt;

/// Unreadable or invalid input: missing paths, undecodable files, bad
/// configuration.
pub const EXIT_INPUT: i32 = 2;
/// A baseline corpus with no parseable source files.
pub const EXIT_EMPTY_CORPUS: i32 = 3;

/// A fatal command failure carrying its process exit code. Recoverable
/// problems (skipped files, unavailable commits) never become a CliError;
/// they are reported as diagnostics and leave the exit code at 0.
#[derive(Debug)]
pub struct CliError {
    code: i32,
    message: String,
}

impl CliError {
    pub fn input(message: impl Into<String>) -> CliError {
        CliError {
            code: EXIT_INPUT,
            message: message.into(),
        }
    }

    pub fn empty_corpus(message: impl Into<String>) -> CliError {
        CliError {
            code: EXIT_EMPTY_CORPUS,
            message: message.into(),
        }
    }

    pub fn general(message: impl Into<String>) -> CliError {
        CliError {
            code: 1,
            message: message.into(),
        }
    }

    pub fn code(&self) -> i32 {
        self.code
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl std::error::Error for CliError {}
