use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("cannot access {}: {source}", path.display())]
    Io { path: PathBuf, source: std::io::Error },

    #[error("{0}")]
    Schema(String),

    #[error(transparent)]
    Core(#[from] geophase_core::Error),
}

impl CliError {
    pub fn schema(msg: impl Into<String>) -> Self {
        CliError::Schema(msg.into())
    }

    /// Process exit status for this error.
    pub fn exit_code(&self) -> i32 {
        use geophase_core::Error as E;
        match self {
            CliError::Io { .. } | CliError::Schema(_) => 2,
            CliError::Core(e) => match e {
                E::UndefinedPhase { .. } => 3,
                E::Degeneracy { .. } => 4,
                E::Antipodal { .. } => 5,
                E::Resolution(_) | E::StepSize { .. } | E::NormDrift { .. } => 6,
                E::Dimension { .. } | E::Domain(_) | E::DegenerateTriangle { .. } => 2,
            },
        }
    }

    /// Short class name printed alongside the message.
    pub fn class(&self) -> &'static str {
        use geophase_core::Error as E;
        match self {
            CliError::Io { .. } => "file",
            CliError::Schema(_) => "schema",
            CliError::Core(e) => match e {
                E::UndefinedPhase { .. } => "undefined-phase",
                E::Degeneracy { .. } => "degeneracy",
                E::Antipodal { .. } => "antipodal",
                E::Resolution(_) => "resolution",
                E::StepSize { .. } => "step-size",
                E::NormDrift { .. } => "norm-drift",
                E::Dimension { .. } | E::Domain(_) | E::DegenerateTriangle { .. } => "schema",
            },
        }
    }
}
