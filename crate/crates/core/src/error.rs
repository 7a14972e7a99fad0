use std::fmt;

use thiserror::Error;

use crate::field::FieldSpec;

/// A text-format diagnostic, optionally anchored to a 1-based line number.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub struct ParseError {
    pub line: Option<usize>,
    pub message: String,
}

impl ParseError {
    pub fn bare(message: impl Into<String>) -> ParseError {
        ParseError {
            line: None,
            message: message.into(),
        }
    }

    pub fn at(line: usize, message: impl Into<String>) -> ParseError {
        ParseError {
            line: Some(line),
            message: message.into(),
        }
    }

    /// Attaches a line number unless one is already present.
    pub fn or_line(mut self, line: usize) -> ParseError {
        if self.line.is_none() {
            self.line = Some(line);
        }
        self
    }
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.line {
            Some(l) => write!(f, "line {l}: {}", self.message),
            None => f.write_str(&self.message),
        }
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("field mismatch: {0} vs {1}")]
    FieldMismatch(FieldSpec, FieldSpec),
    #[error("quiver mismatch: `{0}` vs `{1}`")]
    QuiverMismatch(String, String),
    #[error("side mismatch: {0}")]
    SideMismatch(String),
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("invalid quiver: {0}")]
    InvalidQuiver(String),
    #[error("not a module homomorphism: square for arrow `{0}` does not commute")]
    NotHomomorphism(String),
    #[error("not a short exact sequence: {0}")]
    NotExact(String),
    #[error("not indecomposable: {0}")]
    Decomposable(String),
    #[error("class is not definable: {0}")]
    NotDefinable(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("internal inconsistency: {0}")]
    Internal(String),
    #[error(transparent)]
    Parse(#[from] ParseError),
}

pub type Result<T> = std::result::Result<T, Error>;
