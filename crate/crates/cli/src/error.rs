use topos_core::filters::FilterError;
use topos_core::fincat::FincatError;
use topos_core::normalize::{AnalysisError, GroupError};
use topos_core::words::WordsError;

/// Failures that stop a command before any verdict is produced.
#[derive(Debug)]
pub enum CliError {
    /// Unreadable or malformed input; exit code 2.
    Input(String),
    /// An enumeration would exceed the budget; exit code 3.
    Budget(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Input(_) => 2,
            CliError::Budget(_) => 3,
        }
    }

    pub fn input(context: impl std::fmt::Display, err: impl std::fmt::Display) -> Self {
        CliError::Input(format!("{context}: {err}"))
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Input(m) => write!(f, "input error: {m}"),
            CliError::Budget(m) => write!(f, "{m}"),
        }
    }
}

impl From<FincatError> for CliError {
    fn from(e: FincatError) -> Self {
        match e {
            FincatError::BudgetExceeded { .. } => CliError::Budget(e.to_string()),
            other => CliError::Input(other.to_string()),
        }
    }
}

impl From<WordsError> for CliError {
    fn from(e: WordsError) -> Self {
        match e {
            WordsError::BudgetExceeded { .. } => CliError::Budget(e.to_string()),
            other => CliError::Input(other.to_string()),
        }
    }
}

impl From<GroupError> for CliError {
    fn from(e: GroupError) -> Self {
        CliError::Input(e.to_string())
    }
}

impl From<AnalysisError> for CliError {
    fn from(e: AnalysisError) -> Self {
        match e {
            AnalysisError::Fincat(e) => e.into(),
            AnalysisError::Group(e) => e.into(),
        }
    }
}

impl From<FilterError> for CliError {
    fn from(e: FilterError) -> Self {
        match e {
            FilterError::Fincat(e) => e.into(),
            other => CliError::Input(other.to_string()),
        }
    }
}
