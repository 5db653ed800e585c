use thiserror::Error;

/// Errors raised by the numeric library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("pole of the gamma function at {0}")]
    Pole(f64),
    #[error("unsupported polygamma order {0} (supported: 0, 1, 2)")]
    UnsupportedOrder(u32),
    #[error("enumeration budget exceeded: {count} > {budget}")]
    Size { count: f64, budget: f64 },
    #[error("numerical failure: {0}")]
    Numerical(String),
    #[error("no critical point of H'' on the search bracket (c = {c}, gamma = {gamma})")]
    NoCriticalPoint { c: f64, gamma: f64 },
    #[error("contour configuration error: {0}")]
    Contour(String),
    #[error("truncation error: tail estimate {tail:e} exceeds tolerance {tol:e}")]
    Truncation { tail: f64, tol: f64 },
    #[error("determinant has imaginary residue {imag:e} (value {value})")]
    ImaginaryResidue { value: f64, imag: f64 },
    #[error("argument {x} outside the tabulated range [{lo}, {hi}]")]
    Range { x: f64, lo: f64, hi: f64 },
    #[error("degenerate parameters: {0}")]
    Degenerate(String),
    #[error("empty sample")]
    EmptySample,
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
