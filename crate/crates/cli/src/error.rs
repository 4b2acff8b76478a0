use serde::Serialize;
use trilat::Error;

pub const EXIT_OK: i32 = 0;
pub const EXIT_OTHER: i32 = 1;
pub const EXIT_DEGENERATE: i32 = 2;
pub const EXIT_SCHEMA: i32 = 3;

/// Failure reported by a subcommand, carrying its process exit code.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CliError {
    pub error: String,
    pub message: String,
    #[serde(skip)]
    pub code: i32,
}

impl CliError {
    pub fn schema(message: impl Into<String>) -> Self {
        CliError { error: "SchemaError".into(), message: message.into(), code: EXIT_SCHEMA }
    }

    pub fn io(message: impl Into<String>) -> Self {
        CliError { error: "IoError".into(), message: message.into(), code: EXIT_SCHEMA }
    }

    pub fn usage(message: impl Into<String>) -> Self {
        CliError { error: "UsageError".into(), message: message.into(), code: EXIT_SCHEMA }
    }

    /// Error document printed in place of regular output.
    pub fn to_json(&self) -> String {
        #[derive(Serialize)]
        struct Doc<'a> {
            schema: &'a str,
            #[serde(flatten)]
            err: &'a CliError,
            exit_code: i32,
        }
        serde_json::to_string_pretty(&Doc { schema: crate::SCHEMA, err: self, exit_code: self.code })
            .expect("error document serializes")
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let code = if e.is_degenerate_geometry() { EXIT_DEGENERATE } else { EXIT_OTHER };
        CliError { error: e.kind().into(), message: e.to_string(), code }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}: {}", self.error, self.message)
    }
}

impl std::error::Error for CliError {}

pub type CliResult<T> = std::result::Result<T, CliError>;
