use std::fmt;

/// Failure of a CLI run, mapped to an exit status.
#[derive(Debug, Clone, PartialEq)]
pub enum CliError {
    Validation {
        param: String,
        message: String,
    },
    Numerical(String),
    Io(String),
    /// A reproduction finished but missed reference values.
    Checks(String),
}

impl CliError {
    pub fn validation(param: impl Into<String>, message: impl Into<String>) -> Self {
        CliError::Validation {
            param: param.into(),
            message: message.into(),
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Validation { .. } => 2,
            CliError::Numerical(_) => 3,
            CliError::Io(_) | CliError::Checks(_) => 1,
        }
    }

    fn kind(&self) -> &'static str {
        match self {
            CliError::Validation { .. } => "validation",
            CliError::Numerical(_) => "numerical",
            CliError::Io(_) => "io",
            CliError::Checks(_) => "check",
        }
    }
}

/// One line: `error=<kind> [param=<name>] message="<json string>"`.
impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "error={}", self.kind())?;
        let message = match self {
            CliError::Validation { param, message } => {
                write!(f, " param={param}")?;
                message
            }
            CliError::Numerical(m) | CliError::Io(m) | CliError::Checks(m) => m,
        };
        write!(f, " message={}", serde_json::Value::from(message.as_str()))
    }
}

impl From<lossyphase::Error> for CliError {
    fn from(e: lossyphase::Error) -> Self {
        match e {
            lossyphase::Error::InvalidParameter { name, .. } => {
                CliError::validation(name, e.to_string())
            }
            other => CliError::Numerical(other.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}
