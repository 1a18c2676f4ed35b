use thiserror::Error;

/// Errors raised by the algebraic pipelines.
///
/// Failures while reading the text formats live in [`crate::io::InputError`];
/// everything here is an invariant violation of already-parsed data.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("modulus {0} is not a prime below 2^31")]
    InvalidField(u64),

    #[error("field mismatch: {left} vs {right}")]
    FieldMismatch { left: u32, right: u32 },

    #[error("shape mismatch in {context}: expected {expected}, found {found}")]
    Shape {
        context: String,
        expected: String,
        found: String,
    },

    #[error("residue {value} out of range for p = {p} at {context}")]
    Residue { value: u64, p: u32, context: String },

    #[error("interval with birth {birth} after death {death}")]
    BadInterval { birth: usize, death: usize },

    #[error("annotation mismatch at middle generator {index}: {left} vs {right}")]
    AnnotationMismatch {
        index: usize,
        left: String,
        right: String,
    },

    #[error("entry ({row}, {col}) violates the {rule} rule: row {row_bar}, column {col_bar}")]
    InvalidEntry {
        row: usize,
        col: usize,
        rule: &'static str,
        row_bar: String,
        col_bar: String,
    },

    #[error("commutativity fails at index {index} for {what}")]
    NotCommutative { index: usize, what: String },

    #[error("composite of the connecting maps is nonzero at index {index}")]
    NotComplex { index: usize },

    #[error(
        "presentations do not form a complex: composite entry ({row}, {col}) pairs row bar {row_bar} with column bar {col_bar}"
    )]
    NotRepairable {
        row: usize,
        col: usize,
        row_bar: String,
        col_bar: String,
    },

    #[error("composite of the presentations is nonzero at ({row}, {col}); run complexify first")]
    NonzeroComposite { row: usize, col: usize },

    #[error("free presentation required, but {side} {index} has finite death")]
    NotFree { side: &'static str, index: usize },

    #[error("invalid tower event at time {time}: {reason}")]
    Tower { time: usize, reason: String },

    #[error("cosheaf data: {reason}")]
    Cosheaf { reason: String },

    #[error("sheaf data: {reason}")]
    Sheaf { reason: String },

    #[error("poset: {reason}")]
    Poset { reason: String },

    #[error("order complex has {count} simplices, above the limit of {limit}{hint}")]
    SizeGuard {
        count: u128,
        limit: u128,
        hint: &'static str,
    },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn shape(
        context: impl Into<String>,
        expected: impl ToString,
        found: impl ToString,
    ) -> Self {
        Error::Shape {
            context: context.into(),
            expected: expected.to_string(),
            found: found.to_string(),
        }
    }

    pub(crate) fn sheaf(reason: impl Into<String>) -> Self {
        Error::Sheaf {
            reason: reason.into(),
        }
    }

    pub(crate) fn poset(reason: impl Into<String>) -> Self {
        Error::Poset {
            reason: reason.into(),
        }
    }

    pub(crate) fn tower(time: usize, reason: impl Into<String>) -> Self {
        Error::Tower {
            time,
            reason: reason.into(),
        }
    }
}
