use cylnlw::Error;
use std::fmt;

/// Invalid command-line usage, such as a zero `n_max` or a non-empty run
/// directory.
#[derive(Debug)]
pub struct Usage(pub String);

impl fmt::Display for Usage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Usage {}

/// A configuration that could not be read or does not validate.
#[derive(Debug)]
pub struct BadConfig(pub String);

impl fmt::Display for BadConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for BadConfig {}

/// A run whose outputs were written but which stopped early.
#[derive(Debug)]
pub struct Partial(pub String);

impl fmt::Display for Partial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Partial {}

pub struct Failure(anyhow::Error);

impl Failure {
    pub fn error(&self) -> &anyhow::Error {
        &self.0
    }

    /// 1 usage or I/O, 2 configuration, 3 numerical failure.
    pub fn code(&self) -> u8 {
        for cause in self.0.chain() {
            if cause.is::<Usage>() {
                return 1;
            }
            if cause.is::<BadConfig>() || cause.is::<serde_json::Error>() {
                return 2;
            }
            if cause.is::<Partial>() {
                return 3;
            }
            if let Some(e) = cause.downcast_ref::<Error>() {
                return match e {
                    Error::Domain(_) | Error::ModeSetMismatch | Error::Snapshot(_) => 2,
                    Error::Io(_) => 1,
                    _ => 3,
                };
            }
        }
        1
    }
}

impl<E: Into<anyhow::Error>> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure(e.into())
    }
}
