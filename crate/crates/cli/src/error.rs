use serde_json::json;
use thiserror::Error;

pub type CliResult<T> = Result<T, CliError>;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error(transparent)]
    Core(#[from] glinf::Error),
    #[error("i/o: {0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Core(e) => match e {
                glinf::Error::Invalid(_) | glinf::Error::Arity { .. } | glinf::Error::CutoffMismatch(..) => 2,
                glinf::Error::Pole(_) | glinf::Error::Closure(_) | glinf::Error::Integrality(_) => 3,
            },
            CliError::Io(_) => 3,
        }
    }

    fn kind(&self) -> &'static str {
        match self {
            CliError::Config(_) => "config",
            CliError::Core(e) => match e {
                glinf::Error::Invalid(_) => "invalid",
                glinf::Error::Arity { .. } => "arity",
                glinf::Error::CutoffMismatch(..) => "cutoff",
                glinf::Error::Pole(_) => "pole",
                glinf::Error::Closure(_) => "closure",
                glinf::Error::Integrality(_) => "integrality",
            },
            CliError::Io(_) => "io",
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        json!({ "error": { "kind": self.kind(), "message": self.to_string(), "exit_code": self.exit_code() } })
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}
