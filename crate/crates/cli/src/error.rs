use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    /// Bad input: unparseable documents, invalid matrices or states, missing flags.
    #[error("{0}")]
    Validation(String),
    /// A cross-check between independently computed quantities failed.
    #[error("consistency check failed: {0}")]
    Consistency(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Validation(_) => 2,
            CliError::Consistency(_) => 3,
        }
    }
}

macro_rules! validation_from {
    ($($t:ty),* $(,)?) => {
        $(impl From<$t> for CliError {
            fn from(e: $t) -> Self {
                CliError::Validation(e.to_string())
            }
        })*
    };
}

validation_from!(
    homwit::witness::WitnessError,
    homwit::quantum::QuantumError,
    homwit::json::RecordError,
    homwit::experiment::ExperimentError,
    homwit::optics::OpticsError,
    homwit::hom::HomError,
);
