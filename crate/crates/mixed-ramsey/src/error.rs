//! Error type shared by the whole crate.

use std::fmt;

/// Errors reported by construction, verification and search routines.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Error {
    /// `p` is not a prime number.
    NotPrime(u64),
    /// A field exponent of zero was requested.
    ZeroExponent,
    /// The requested field exceeds the size cap.
    FieldTooLarge { q: u64, cap: u64 },
    /// `q` is not a prime power.
    NotPrimePower(u64),
    /// The requested plane order exceeds the size cap.
    PlaneTooLarge { q: u64, cap: u64 },
    /// The multiplicative order of zero is undefined.
    ZeroElement,
    /// A coefficient vector does not describe a field element.
    InvalidElement(String),
    /// Two objects that must have equal size do not.
    SizeMismatch { expected: usize, got: usize },
    /// A vertex list that must be a permutation is not one.
    NotPermutation,
    /// A word has the wrong length.
    WordLength { expected: usize, got: usize },
    /// A word contains a character outside the palette alphabet.
    BadSymbol(char),
    /// Offset 1 of a word must be a star (Hamilton-cycle edges lie in the incidence graph).
    MissingCycleStar,
    /// Symmetric word positions carry different symbols.
    SymmetryConflict { offset: usize },
    /// The words' star pattern differs from the labeling's adjacency offsets.
    StarMismatch { offset: usize },
    /// The words' star offsets do not describe an incidence graph.
    BadStarOffsets(String),
    /// A colouring is not rotational; the two edges received conflicting colours.
    NotRotational { edge_a: (usize, usize), edge_b: (usize, usize) },
    /// An embedding that must be injective is not.
    EmbeddingNotInjective,
    /// The vertex sets of a sigma query must be disjoint.
    OverlappingSets,
    /// The vertex sets of a sigma query must be nonempty.
    EmptySet,
    /// The forbidden clique order is out of range.
    InvalidM(u32),
    /// The host graph is too small for the requested check.
    TooFewVertices { needed: usize, got: usize },
    /// The palette exceeds the symbol alphabet.
    PaletteTooLarge(u32),
    /// A search palette size outside 1..=36.
    BadPalette(u32),
    /// The SAT export only supports a two-symbol palette.
    SatPalette(u32),
    /// The CNF has too many variables for the built-in model counter.
    TooManyVariables(usize),
    /// The requested brute-force order is out of the supported range.
    BruteForceRange(usize),
    /// A colouring fails the admissibility precondition of a lemma check.
    NotAdmissible,
    /// A text file could not be parsed.
    Parse { line: usize, msg: String },
    /// An I/O error, flattened to its message.
    Io(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::NotPrime(p) => write!(f, "{p} is not prime"),
            Error::ZeroExponent => write!(f, "field exponent must be at least 1"),
            Error::FieldTooLarge { q, cap } => {
                write!(f, "field of order {q} exceeds the cap {cap}")
            }
            Error::NotPrimePower(q) => write!(f, "{q} is not a prime power"),
            Error::PlaneTooLarge { q, cap } => {
                write!(f, "plane of order {q} exceeds the cap {cap}")
            }
            Error::ZeroElement => write!(f, "the zero element has no multiplicative order"),
            Error::InvalidElement(msg) => write!(f, "invalid field element: {msg}"),
            Error::SizeMismatch { expected, got } => {
                write!(f, "size mismatch: expected {expected}, got {got}")
            }
            Error::NotPermutation => write!(f, "vertex list is not a permutation"),
            Error::WordLength { expected, got } => {
                write!(f, "word has length {got}, expected {expected}")
            }
            Error::BadSymbol(c) => write!(f, "invalid word symbol {c:?}"),
            Error::MissingCycleStar => write!(f, "offset 1 of each word must be a star"),
            Error::SymmetryConflict { offset } => {
                write!(f, "symmetric positions at offset {offset} carry different symbols")
            }
            Error::StarMismatch { offset } => {
                write!(f, "star pattern differs from the labeling's offsets at offset {offset}")
            }
            Error::BadStarOffsets(msg) => write!(f, "star offsets are not valid: {msg}"),
            Error::NotRotational { edge_a, edge_b } => write!(
                f,
                "colouring is not rotational: edges {:?} and {:?} disagree",
                edge_a, edge_b
            ),
            Error::EmbeddingNotInjective => write!(f, "embedding is not injective"),
            Error::OverlappingSets => write!(f, "vertex sets must be disjoint"),
            Error::EmptySet => write!(f, "vertex sets must be nonempty"),
            Error::InvalidM(m) => write!(f, "forbidden clique order m={m} must be at least 3"),
            Error::TooFewVertices { needed, got } => {
                write!(f, "need at least {needed} vertices, got {got}")
            }
            Error::PaletteTooLarge(t) => write!(f, "palette size {t} exceeds 36"),
            Error::BadPalette(t) => {
                write!(f, "palette size {t} is outside the supported range 1..=36")
            }
            Error::SatPalette(t) => {
                write!(f, "SAT export supports palette size 2 only, got {t}")
            }
            Error::TooManyVariables(v) => {
                write!(f, "built-in model counter supports at most 30 variables, got {v}")
            }
            Error::BruteForceRange(n) => {
                write!(f, "brute force supports 3 <= n <= 6, got {n}")
            }
            Error::NotAdmissible => write!(f, "colouring is not admissible"),
            Error::Parse { line, msg } => write!(f, "parse error on line {line}: {msg}"),
            Error::Io(msg) => write!(f, "i/o error: {msg}"),
        }
    }
}

impl std::error::Error for Error {}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
