use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("relation closes to a cycle through elements {0} and {1}")]
    Cycle(usize, usize),
    #[error("index {index} out of range for size {size}")]
    Index { index: usize, size: usize },
    #[error("domain mismatch: {0}")]
    DomainMismatch(String),
    #[error("map is not monotone: {0} <= {1} but images are not ordered")]
    NotMonotone(usize, usize),
    #[error("bound exceeded: {what} = {value}, limit {limit}")]
    BoundExceeded {
        what: &'static str,
        value: usize,
        limit: usize,
    },
    #[error("map is not idempotent")]
    NotIdempotent,
    #[error("poset is not complete")]
    NotComplete,
    #[error("shape error: {0}")]
    Shape(String),
    #[error("site mismatch: {0}")]
    SiteMismatch(String),
    #[error("left Kan extension unstable between truncations {depth} and {next}: {at_depth} vs {at_next} components")]
    TruncationUnstable {
        depth: usize,
        next: usize,
        at_depth: usize,
        at_next: usize,
    },
    #[error("bad index set: {0}")]
    BadIndexSet(String),
    #[error("invariant violated: {0}")]
    InvariantViolation(String),
    #[error("malformed input: {0}")]
    Parse(String),
}

pub(crate) fn bound(what: &'static str, value: usize, limit: usize) -> Result<()> {
    if value > limit {
        Err(Error::BoundExceeded { what, value, limit })
    } else {
        Ok(())
    }
}
