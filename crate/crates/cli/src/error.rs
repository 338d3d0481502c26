use std::process::ExitCode;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    /// A flag value that only fails once the data is known.
    #[error("invalid value for {flag}: {reason}")]
    Flag { flag: &'static str, reason: String },

    #[error("QUATCOMP_THREADS: {0}")]
    Threads(String),

    #[error("{context}: {source}")]
    Core {
        context: String,
        #[source]
        source: quatcomp::Error,
    },

    #[error("{context}: {source}")]
    Io {
        context: String,
        #[source]
        source: std::io::Error,
    },

    #[error("writing {path}: {source}")]
    Csv { path: String, source: csv::Error },

    #[error("iteration cap reached after {0} inner iterations")]
    IterationLimit(usize),
}

impl CliError {
    pub fn core(context: impl Into<String>, source: quatcomp::Error) -> Self {
        // Solver parameter names map back onto the flags that set them.
        if let quatcomp::Error::InvalidParameter { name, reason } = &source {
            if let Some(flag) = flag_for(name) {
                return Self::Flag { flag, reason: reason.clone() };
            }
        }
        if let quatcomp::Error::InvalidTruncation { .. } = &source {
            return Self::Flag { flag: "--rank-trunc", reason: source.to_string() };
        }
        Self::Core { context: context.into(), source }
    }

    pub fn io(context: impl Into<String>, source: std::io::Error) -> Self {
        Self::Io { context: context.into(), source }
    }

    pub fn exit_code(&self) -> ExitCode {
        use quatcomp::Error as E;
        let code = match self {
            Self::Io { .. } | Self::Csv { .. } => 2,
            Self::Core { source, .. } => match source {
                E::Io(_) | E::Image(_) | E::NoFrames(_) | E::Format { .. } | E::Json(_) => 2,
                _ => 1,
            },
            Self::IterationLimit(_) => 3,
            Self::Flag { .. } | Self::Threads(_) => 1,
        };
        ExitCode::from(code)
    }
}

fn flag_for(name: &str) -> Option<&'static str> {
    Some(match name {
        "lambda" => "--lambda",
        "beta1" => "--beta1",
        "beta_max" => "--beta-max",
        "rho" => "--rho",
        "log_eps" => "--log-eps",
        "eps_inner" => "--tol-inner",
        "eps_outer" => "--tol-outer",
        "max_inner" => "--max-inner",
        "sample_rate" => "--sr",
        _ => return None,
    })
}
