use std::path::PathBuf;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Config(String),

    #[error(transparent)]
    Core(#[from] toruspdo_core::Error),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{context}: {source}")]
    Json {
        context: String,
        #[source]
        source: serde_json::Error,
    },

    #[error("{0}")]
    Format(String),
}

impl CliError {
    /// Module-qualified error code printed by the binary.
    pub fn code(&self) -> &'static str {
        match self {
            CliError::Config(_) => "cli.ConfigError",
            CliError::Core(e) => e.code(),
            CliError::Io { .. } => "cli.IoError",
            CliError::Json { .. } => "cli.ParseError",
            CliError::Format(_) => "cli.FormatError",
        }
    }
}

pub type Result<T, E = CliError> = std::result::Result<T, E>;
