use alloc::string::String;
use core::fmt;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// An argument violated an operation's precondition.
    InvalidArgument(String),
    /// The scenario, material set or model selection is inconsistent.
    Config(String),
    /// An antenna pattern was evaluated outside its sampled support.
    OutOfRange { angle: f64, min: f64, max: f64 },
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }

    pub(crate) fn config(msg: impl Into<String>) -> Self {
        Error::Config(msg.into())
    }
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidArgument(msg) => write!(f, "invalid argument: {msg}"),
            Error::Config(msg) => write!(f, "configuration error: {msg}"),
            Error::OutOfRange { angle, min, max } => write!(
                f,
                "angle {:.4} deg outside pattern support [{:.4}, {:.4}] deg",
                angle.to_degrees(),
                min.to_degrees(),
                max.to_degrees()
            ),
        }
    }
}

impl core::error::Error for Error {}
