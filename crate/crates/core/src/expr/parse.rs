use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

use super::lex::{tokenize, Token, TokenKind};
use super::Ast;
use crate::error::ParseError;

const MAX_DEPTH: usize = 256;

const ATOM_START: &str =
    "one of integer, 'sqrt', 'dx', 'omega', 'x', 'st', 'classify', '('";

pub fn parse(input: &str) -> Result<Ast, ParseError> {
    parse_tokens(&tokenize(input), input.len())
}

/// Parses a token stream; `end` is the input length, used as the offset of
/// errors at end of input.
pub fn parse_tokens(tokens: &[Token], end: usize) -> Result<Ast, ParseError> {
    let mut p = Parser {
        tokens,
        pos: 0,
        end,
        depth: 0,
    };
    let ast = p.expr()?;
    match p.peek() {
        None => Ok(ast),
        Some(t) if t.kind == TokenKind::Caret => {
            Err(ParseError::new(t.offset, "operator or end of input ('^' is nonassociative)"))
        }
        Some(t) => Err(p.unexpected(t, "one of '+', '-', '*', '/', '^' or end of input")),
    }
}

struct Parser<'a> {
    tokens: &'a [Token],
    pos: usize,
    end: usize,
    depth: usize,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn offset(&self) -> usize {
        self.peek().map_or(self.end, |t| t.offset)
    }

    fn unexpected(&self, t: &Token, expected: &str) -> ParseError {
        match &t.kind {
            TokenKind::Error(s) => ParseError::new(t.offset, format!("{expected} (found unrecognised {s:?})")),
            _ => ParseError::new(t.offset, expected),
        }
    }

    fn error_here(&self, expected: &str) -> ParseError {
        match self.peek() {
            Some(t) => self.unexpected(t, expected),
            None => ParseError::new(self.end, format!("{expected} (found end of input)")),
        }
    }

    fn eat(&mut self, kind: &TokenKind) -> bool {
        if self.peek().is_some_and(|t| &t.kind == kind) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, kind: TokenKind) -> Result<(), ParseError> {
        if self.eat(&kind) {
            Ok(())
        } else {
            Err(self.error_here(&kind.to_string()))
        }
    }

    fn int(&mut self) -> Result<BigInt, ParseError> {
        match self.peek() {
            Some(Token {
                kind: TokenKind::Int(n),
                ..
            }) => {
                let n = n.clone();
                self.pos += 1;
                Ok(n)
            }
            _ => Err(self.error_here("integer")),
        }
    }

    fn expr(&mut self) -> Result<Ast, ParseError> {
        self.depth += 1;
        if self.depth > MAX_DEPTH {
            return Err(ParseError::new(self.offset(), "shallower nesting"));
        }
        let mut lhs = self.term()?;
        loop {
            if self.eat(&TokenKind::Plus) {
                lhs = Ast::Add(Box::new(lhs), Box::new(self.term()?));
            } else if self.eat(&TokenKind::Minus) {
                lhs = Ast::Sub(Box::new(lhs), Box::new(self.term()?));
            } else {
                break;
            }
        }
        self.depth -= 1;
        Ok(lhs)
    }

    fn term(&mut self) -> Result<Ast, ParseError> {
        let mut lhs = self.factor()?;
        loop {
            if self.eat(&TokenKind::Star) {
                lhs = Ast::Mul(Box::new(lhs), Box::new(self.factor()?));
            } else if self.eat(&TokenKind::Slash) {
                let rhs = self.factor()?;
                lhs = match (lhs, rhs) {
                    (Ast::Int(p), Ast::Int(q)) if !q.is_zero() => Ast::Rat(p, q),
                    (l, r) => Ast::Div(Box::new(l), Box::new(r)),
                };
            } else {
                break;
            }
        }
        Ok(lhs)
    }

    fn factor(&mut self) -> Result<Ast, ParseError> {
        let base = self.atom()?;
        if !self.eat(&TokenKind::Caret) {
            return Ok(base);
        }
        let at = self.offset();
        let exp = self
            .int()?
            .to_u32()
            .ok_or_else(|| ParseError::new(at, "exponent below 2^32"))?;
        if let Some(t) = self.peek().filter(|t| t.kind == TokenKind::Caret) {
            return Err(ParseError::new(
                t.offset,
                "operator or end of input ('^' is nonassociative)",
            ));
        }
        Ok(Ast::Pow(Box::new(base), exp))
    }

    fn atom(&mut self) -> Result<Ast, ParseError> {
        let Some(t) = self.peek() else {
            return Err(self.error_here(ATOM_START));
        };
        let kind = t.kind.clone();
        let ast = match kind {
            TokenKind::Int(n) => {
                self.pos += 1;
                Ast::Int(n)
            }
            TokenKind::Sqrt => {
                self.pos += 1;
                self.expect(TokenKind::LParen)?;
                let k = self.int()?;
                self.expect(TokenKind::RParen)?;
                Ast::Sqrt(k)
            }
            TokenKind::Dx => {
                self.pos += 1;
                Ast::Dx
            }
            TokenKind::Omega => {
                self.pos += 1;
                Ast::Omega
            }
            TokenKind::X => {
                self.pos += 1;
                Ast::Var
            }
            TokenKind::St | TokenKind::Classify => {
                self.pos += 1;
                self.expect(TokenKind::LParen)?;
                let inner = Box::new(self.expr()?);
                self.expect(TokenKind::RParen)?;
                if kind == TokenKind::St {
                    Ast::St(inner)
                } else {
                    Ast::Classify(inner)
                }
            }
            TokenKind::LParen => {
                self.pos += 1;
                let inner = self.expr()?;
                self.expect(TokenKind::RParen)?;
                inner
            }
            _ => return Err(self.error_here(ATOM_START)),
        };
        Ok(ast)
    }
}
