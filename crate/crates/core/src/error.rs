use thiserror::Error;

/// Errors surfaced by the enumeration engine.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid word: {0}")]
    Parse(String),

    #[error("code word {word:?} is not admissible: {reason}")]
    Codec { word: String, reason: CodecViolation },

    #[error("invalid half-column state {0}")]
    InvalidState(String),

    #[error("resource limit exceeded: {0}")]
    ResourceLimit(String),

    #[error("sphere accumulator for n = {n} is not an integer: {value}")]
    Integrality { n: usize, value: String },

    #[error("corrected series coefficient f({n}) is negative: {value}")]
    NegativeCoefficient { n: usize, value: String },

    #[error("requested precision {requested} exceeds the cap of {cap} digits")]
    Precision { requested: usize, cap: usize },

    #[error("series too short: {0}")]
    SeriesTooShort(String),

    #[error("malformed b-file line {line}: {reason}")]
    BFile { line: usize, reason: String },
}

/// The first condition of the code-word admissibility lemma that a word breaks.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CodecViolation {
    /// Letter outside {n, N, i, I}.
    Alphabet,
    /// Condition (i): the word must start with `n`.
    Start,
    /// Condition (ii): the word must end with `I`.
    End,
    /// Condition (iii): letters must alternate lower and upper case.
    Alternation,
    /// Condition (iv): some prefix has more closing than opening letters.
    NegativePrefix,
    /// Condition (v): opening and closing letters do not balance (positive excess).
    Incomplete,
}

impl std::fmt::Display for CodecViolation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            CodecViolation::Alphabet => "letter outside {n, N, i, I}",
            CodecViolation::Start => "does not start with 'n'",
            CodecViolation::End => "does not end with 'I'",
            CodecViolation::Alternation => "case does not alternate",
            CodecViolation::NegativePrefix => "a prefix has negative excess",
            CodecViolation::Incomplete => "positive excess (incomplete tree)",
        };
        f.write_str(s)
    }
}

pub type Result<T> = std::result::Result<T, Error>;
