use std::fmt;

/// Syntax error with a byte offset into the input and a description of what
/// was expected there.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseError {
    pub offset: usize,
    pub expected: String,
}

impl ParseError {
    pub fn new(offset: usize, expected: impl Into<String>) -> Self {
        ParseError {
            offset,
            expected: expected.into(),
        }
    }
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "syntax error at offset {}: expected {}", self.offset, self.expected)
    }
}

impl std::error::Error for ParseError {}
