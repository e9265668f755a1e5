use thiserror::Error;

/// Errors raised by every operation in the crate.
///
/// Spread-condition violations are *not* errors; they come back as a failing
/// [`CertResult`](crate::spread::CertResult).
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    Input(String),

    /// A structural precondition of the requested operation does not hold
    /// (for example, a hypergraph that is not `r_1`-bounded).
    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("{what} needs {cost} units of work, budget is {budget}")]
    Resource {
        what: String,
        cost: u128,
        budget: u128,
    },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn input<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Input(msg.into()))
}

pub(crate) fn precondition<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Precondition(msg.into()))
}

/// Work limits for exhaustive routines.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Budget {
    /// Upper bound on the number of candidate subsets generated by exact
    /// certification.
    pub candidates: u128,
    /// Upper bound on the size of any other exhaustive enumeration
    /// (vertex subsets, `(S, W)` pairs, injections).
    pub enumeration: u128,
}

impl Budget {
    pub const DEFAULT_CANDIDATES: u128 = 1 << 26;
    pub const DEFAULT_ENUMERATION: u128 = 10_000_000;

    pub fn check_candidates(&self, what: &str, cost: u128) -> Result<()> {
        if cost > self.candidates {
            return Err(Error::Resource {
                what: what.to_string(),
                cost,
                budget: self.candidates,
            });
        }
        Ok(())
    }

    pub fn check_enumeration(&self, what: &str, cost: u128) -> Result<()> {
        if cost > self.enumeration {
            return Err(Error::Resource {
                what: what.to_string(),
                cost,
                budget: self.enumeration,
            });
        }
        Ok(())
    }
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            candidates: Self::DEFAULT_CANDIDATES,
            enumeration: Self::DEFAULT_ENUMERATION,
        }
    }
}
