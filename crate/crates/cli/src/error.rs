use std::fmt;

use translit_core::align::AlignError;
use translit_core::decode::DecodeError;
use translit_core::eval::EvalError;
use translit_core::integrate::IntegrateError;
use translit_core::mine::MineError;
use translit_core::textnorm::TextError;

/// A failed run, classified by exit status.
#[derive(Debug)]
pub enum CliError {
    /// Bad flags, configuration or missing inputs (exit 1).
    Usage(String),
    /// Unreadable or malformed data (exit 2).
    Data(String),
    /// Numerical breakdown such as EM divergence (exit 3).
    Numeric(String),
}

impl CliError {
    pub fn code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Data(_) => 2,
            CliError::Numeric(_) => 3,
        }
    }

    pub fn usage(m: impl Into<String>) -> Self {
        CliError::Usage(m.into())
    }

    pub fn data(m: impl Into<String>) -> Self {
        CliError::Data(m.into())
    }

    /// Prefixes the message with the file it concerns.
    pub fn in_file(self, path: &std::path::Path) -> Self {
        let p = path.display();
        match self {
            CliError::Usage(m) => CliError::Usage(format!("{p}: {m}")),
            CliError::Data(m) => CliError::Data(format!("{p}: {m}")),
            CliError::Numeric(m) => CliError::Numeric(format!("{p}: {m}")),
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) | CliError::Data(m) | CliError::Numeric(m) => f.write_str(m),
        }
    }
}

impl std::error::Error for CliError {}

pub type Result<T> = std::result::Result<T, CliError>;

impl From<TextError> for CliError {
    fn from(e: TextError) -> Self {
        match e {
            TextError::InvalidBounds { .. } => CliError::Usage(e.to_string()),
            _ => CliError::Data(e.to_string()),
        }
    }
}

impl From<AlignError> for CliError {
    fn from(e: AlignError) -> Self {
        match e {
            AlignError::ZeroIterations | AlignError::UnknownHeuristic(_) => CliError::Usage(e.to_string()),
            _ => CliError::Data(e.to_string()),
        }
    }
}

impl From<MineError> for CliError {
    fn from(e: MineError) -> Self {
        match e {
            MineError::Diverged(_) | MineError::NotNormalized { .. } => CliError::Numeric(e.to_string()),
            MineError::ZeroIterations
            | MineError::LambdaOutOfRange(_)
            | MineError::ThresholdOutOfRange(_)
            | MineError::InvalidShape(..)
            | MineError::NoShapes => CliError::Usage(e.to_string()),
            _ => CliError::Data(e.to_string()),
        }
    }
}

impl From<DecodeError> for CliError {
    fn from(e: DecodeError) -> Self {
        match e {
            DecodeError::InvalidConfig(_) | DecodeError::InvalidOrder | DecodeError::InvalidDiscount(_) => {
                CliError::Usage(e.to_string())
            }
            _ => CliError::Data(e.to_string()),
        }
    }
}

impl From<IntegrateError> for CliError {
    fn from(e: IntegrateError) -> Self {
        match e {
            IntegrateError::ZeroNBest => CliError::Usage(e.to_string()),
            IntegrateError::Decode(d) => d.into(),
            _ => CliError::Data(e.to_string()),
        }
    }
}

impl From<EvalError> for CliError {
    fn from(e: EvalError) -> Self {
        match e {
            EvalError::InvalidOrder => CliError::Usage(e.to_string()),
            _ => CliError::Data(e.to_string()),
        }
    }
}
