use std::fmt;

/// Failure classes, each with its own exit code.
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Io(String),
    /// A computation that could not complete.
    Compute(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 64,
            CliError::Io(_) => 2,
            CliError::Compute(_) => 1,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage: {m}"),
            CliError::Io(m) => write!(f, "i/o: {m}"),
            CliError::Compute(m) => write!(f, "{m}"),
        }
    }
}

impl From<lfun_core::Error> for CliError {
    fn from(e: lfun_core::Error) -> Self {
        use lfun_core::Error as E;
        match e {
            E::Io(_) | E::Parse { .. } | E::Schema(_) | E::Checksum { .. } => CliError::Io(e.to_string()),
            other => CliError::Compute(other.to_string()),
        }
    }
}
