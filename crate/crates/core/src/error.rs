use alloc::string::String;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(&'static str),
    #[error("degenerate geometry: {0}")]
    Degenerate(&'static str),
    /// cos(gamma - alpha_o) vanishes inside the heading set; the velocity ratio is unbounded.
    #[error("projected velocity is singular on the heading set")]
    Singular,
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("invalid scene: {0}")]
    Scene(String),
    #[error("evaluation mismatch: {0}")]
    Mismatch(String),
    #[error("unknown scene `{0}`")]
    UnknownScene(String),
}
