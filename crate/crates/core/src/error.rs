use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("lattice dimensions must be positive (got {width}x{height})")]
    EmptyLattice { width: usize, height: usize },

    #[error("invalid lattice: {0}")]
    InvalidLattice(String),

    #[error("bitstring has length {got}, register has {expected} qubits")]
    BitstringLength { expected: usize, got: usize },

    #[error("invalid bitstring character {0:?}")]
    BitstringChar(char),

    #[error("qubit {qubit} out of range for a {n_qubits}-qubit register")]
    QubitOutOfRange { qubit: usize, n_qubits: usize },

    #[error("register size mismatch: {left} vs {right} qubits")]
    SizeMismatch { left: usize, right: usize },

    #[error("pauli string with imaginary phase is not Hermitian")]
    NonHermitian,

    #[error("control qubit {0} lies in the support of the controlled Pauli string")]
    ControlInSupport(usize),

    #[error("vertex {0} does not exist")]
    InvalidVertex(usize),

    #[error("link {0} does not exist")]
    InvalidLink(usize),

    #[error("links {0:?} do not form a plaquette of the lattice")]
    NotAPlaquette(Vec<usize>),

    #[error("path is not vertex-contiguous at position {0}")]
    PathNotContiguous(usize),

    #[error("qubit {0} is not an allocated ancilla")]
    AncillaUnavailable(usize),

    #[error("ancilla {0} is already in use by this construction")]
    AncillaCollision(usize),

    #[error("sector too large: {0}")]
    SectorTooLarge(String),

    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("state is not normalized (norm^2 = {0})")]
    NotNormalized(f64),

    #[error("invalid loop program: {0}")]
    InvalidProgram(String),

    #[error("need at least {needed} usable rows for a fit, have {have}")]
    TooFewRows { needed: usize, have: usize },

    #[error("n_T must be at least 1")]
    ZeroTrotterSteps,

    #[error("n_T list must be non-empty and strictly increasing")]
    BadStepList,

    #[error("shot count must be positive")]
    ZeroShots,

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("numerical failure: {0}")]
    Numerical(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn parse(line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            message: message.into(),
        }
    }
}
