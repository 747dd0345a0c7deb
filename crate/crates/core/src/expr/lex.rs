use std::fmt;

use num_bigint::BigInt;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TokenKind {
    Int(BigInt),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    Sqrt,
    Dx,
    Omega,
    X,
    St,
    Classify,
    /// Unknown character or identifier.
    Error(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Token {
    pub kind: TokenKind,
    pub offset: usize,
    pub len: usize,
}

impl fmt::Display for TokenKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TokenKind::Int(n) => write!(f, "integer {n}"),
            TokenKind::Plus => f.write_str("'+'"),
            TokenKind::Minus => f.write_str("'-'"),
            TokenKind::Star => f.write_str("'*'"),
            TokenKind::Slash => f.write_str("'/'"),
            TokenKind::Caret => f.write_str("'^'"),
            TokenKind::LParen => f.write_str("'('"),
            TokenKind::RParen => f.write_str("')'"),
            TokenKind::Sqrt => f.write_str("'sqrt'"),
            TokenKind::Dx => f.write_str("'dx'"),
            TokenKind::Omega => f.write_str("'omega'"),
            TokenKind::X => f.write_str("'x'"),
            TokenKind::St => f.write_str("'st'"),
            TokenKind::Classify => f.write_str("'classify'"),
            TokenKind::Error(s) => write!(f, "unrecognised {s:?}"),
        }
    }
}

/// Longest-match lexer. Whitespace separates tokens and is dropped.
pub fn tokenize(input: &str) -> Vec<Token> {
    let mut out = Vec::new();
    let mut chars = input.char_indices().peekable();
    while let Some(&(start, c)) = chars.peek() {
        if c.is_whitespace() {
            chars.next();
            continue;
        }
        let run = |chars: &mut std::iter::Peekable<std::str::CharIndices>, pred: fn(char) -> bool| {
            let mut end = start;
            while let Some(&(i, ch)) = chars.peek() {
                if !pred(ch) {
                    break;
                }
                end = i + ch.len_utf8();
                chars.next();
            }
            end
        };
        let kind;
        let end;
        if c.is_ascii_digit() {
            end = run(&mut chars, |ch| ch.is_ascii_digit());
            kind = TokenKind::Int(input[start..end].parse().expect("digit run"));
        } else if c.is_ascii_alphabetic() || c == '_' {
            end = run(&mut chars, |ch| ch.is_ascii_alphanumeric() || ch == '_');
            kind = match &input[start..end] {
                "sqrt" => TokenKind::Sqrt,
                "dx" => TokenKind::Dx,
                "omega" => TokenKind::Omega,
                "x" => TokenKind::X,
                "st" => TokenKind::St,
                "classify" => TokenKind::Classify,
                other => TokenKind::Error(other.to_string()),
            };
        } else {
            chars.next();
            end = start + c.len_utf8();
            kind = match c {
                '+' => TokenKind::Plus,
                '-' => TokenKind::Minus,
                '*' => TokenKind::Star,
                '/' => TokenKind::Slash,
                '^' => TokenKind::Caret,
                '(' => TokenKind::LParen,
                ')' => TokenKind::RParen,
                other => TokenKind::Error(other.to_string()),
            };
        }
        out.push(Token {
            kind,
            offset: start,
            len: end - start,
        });
    }
    out
}
