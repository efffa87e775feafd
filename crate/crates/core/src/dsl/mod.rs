//! Plain-text `.crn` format for reaction networks.
//!
//! ```text
//! # comment
//! let kp = 1
//! species E0 = 40
//! species B = 0 clamped
//! B + E0 <-> E1 @ kp, 5
//! H1 -> @ 0.0003
//! ```
//!
//! Species used before (or without) a declaration start at count 0.
//! `<->` expands to the forward reaction followed by its reverse.

mod lexer;
mod parser;
mod printer;

pub use parser::parse_network;
pub use printer::{format_rate, print_network};

use std::fmt;

use thiserror::Error;

use crate::crn::CrnError;

#[derive(Clone, Debug, PartialEq, Error)]
pub enum ErrorKind {
    #[error("unexpected input `{0}`")]
    Lexical(String),
    #[error("expected {expected}, found {found}")]
    Syntax { expected: &'static str, found: String },
    #[error("rate alias `{0}` is not defined")]
    UndeclaredRate(String),
    #[error("rate must be nonnegative, got -{0}")]
    NegativeRate(f64),
    #[error("rate must be finite, got {0}")]
    NonFiniteRate(f64),
    #[error("species `{0}` declared twice")]
    DuplicateSpecies(String),
    #[error("rate alias `{0}` defined twice")]
    DuplicateAlias(String),
    #[error("at most 2 reactants are supported, got {0}")]
    TooManyReactants(usize),
    #[error("at most 2 products are supported, got {0}")]
    TooManyProducts(usize),
    #[error("initial count must be a nonnegative integer, got {0}")]
    InvalidCount(String),
    #[error("`{0}` is a keyword and cannot name a species")]
    ReservedName(String),
    #[error(transparent)]
    Network(#[from] CrnError),
}

/// Parse failure at a 1-based line and column.
#[derive(Clone, Debug, PartialEq)]
pub struct DslError {
    pub line: usize,
    pub column: usize,
    pub kind: ErrorKind,
}

impl DslError {
    pub(crate) fn new(line: usize, column: usize, kind: ErrorKind) -> Self {
        Self { line, column, kind }
    }
}

impl fmt::Display for DslError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: {}", self.line, self.column, self.kind)
    }
}

impl std::error::Error for DslError {}

pub(crate) const KEYWORDS: [&str; 3] = ["let", "species", "clamped"];
