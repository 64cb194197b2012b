use rie::effint::EffIntError;
use rie::kernels::KernelError;
use rie::scan::ScanError;
use rie::twoqubit::StateError;
use std::path::PathBuf;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("configuration error in `{key}`: {reason}")]
    Config { key: String, reason: String },
    #[error("numerical strategy refused: {0}")]
    Refused(String),
    #[error("I/O error on {}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config { .. } => 2,
            CliError::Refused(_) => 3,
            CliError::Io { .. } => 1,
        }
    }

    pub fn config(key: &str, reason: impl Into<String>) -> Self {
        CliError::Config {
            key: key.to_string(),
            reason: reason.into(),
        }
    }

    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.into(),
            source,
        }
    }
}

impl From<KernelError> for CliError {
    fn from(e: KernelError) -> Self {
        match e {
            KernelError::OscillationBudget { .. } => CliError::Refused(e.to_string()),
            KernelError::Configuration(_) => CliError::config("strategy", e.to_string()),
            KernelError::DivergentTail(_) => CliError::config("cutoff_p", e.to_string()),
            KernelError::InvalidQuery(_) => CliError::config("t_over_tau", e.to_string()),
        }
    }
}

impl From<StateError> for CliError {
    fn from(e: StateError) -> Self {
        match e {
            StateError::Kernel(k) => k.into(),
            StateError::Param(p) => crate::config::param_error(p, "dipole_nm"),
            StateError::Domain { name: "gamma", .. } => CliError::config("gamma", e.to_string()),
            other => CliError::config("state", other.to_string()),
        }
    }
}

impl From<ScanError> for CliError {
    fn from(e: ScanError) -> Self {
        match e {
            ScanError::Axis { ref name, .. } => CliError::config(&format!("grid ({name})"), e.to_string()),
            ScanError::Param(p) => crate::config::param_error(p, "dipole_nm"),
            ScanError::Kernel(k) => k.into(),
            ScanError::State(s) => s.into(),
            ScanError::Precondition(_) | ScanError::SearchWindow { .. } | ScanError::ThreadPool(_) => {
                CliError::Refused(e.to_string())
            }
        }
    }
}

impl From<EffIntError> for CliError {
    fn from(e: EffIntError) -> Self {
        match e {
            EffIntError::Underresolved { .. } => CliError::Refused(e.to_string()),
            _ => CliError::config("effint_box_ratios", e.to_string()),
        }
    }
}
