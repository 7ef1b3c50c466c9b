use thiserror::Error;

/// Errors shared by every module of the toolkit.
///
/// The command-line front end maps `Input` and `NotExpandable` to exit
/// status 1 and `Budget` to exit status 2.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("input error: {0}")]
    Input(String),
    #[error("budget exhausted: {0}")]
    Budget(String),
    /// An (m,p,c) expansion produced an entry below 1.
    #[error("not expandable over the positive integers: row k={level}, coefficients {coefficients:?} gives {value}")]
    NotExpandable {
        level: usize,
        coefficients: Vec<i64>,
        value: i128,
    },
}

impl Error {
    pub fn input(msg: impl Into<String>) -> Self {
        Error::Input(msg.into())
    }

    pub fn budget(msg: impl Into<String>) -> Self {
        Error::Budget(msg.into())
    }

    pub fn is_budget(&self) -> bool {
        matches!(self, Error::Budget(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
