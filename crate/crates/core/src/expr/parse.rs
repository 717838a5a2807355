//! Recursive-descent parser for the field definition DSL.
//!
//! Grammar (see `docs/grammar.md` for the full EBNF):
//!
//! ```text
//! expr     := term (("+" | "-") term)*
//! term     := unary (("*" | "/") unary)*
//! unary    := "-" unary | power
//! power    := atom ("^" exponent)*
//! exponent := ["-"] number
//! atom     := number | symbol | func "(" expr ")" | "(" expr ")"
//! ```
//!
//! Precedence is `^` > unary `-` > `*`,`/` > `+`,`-`, left-associative
//! within a level. Symbols are `x0..x{n-1}` and `v0..v{n-1}`; indices are
//! checked against the chart dimension at parse time.

use super::ast::{Expr, Func};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ParseErrorKind {
    #[error("empty source")]
    EmptySource,
    #[error("unexpected character '{0}'")]
    UnexpectedChar(char),
    #[error("unexpected end of input")]
    UnexpectedEnd,
    #[error("expected {expected}, found '{found}'")]
    UnexpectedToken { expected: &'static str, found: String },
    #[error("unknown function '{0}'")]
    UnknownFunction(String),
    #[error("unknown symbol '{0}'")]
    UnknownSymbol(String),
    #[error("symbol '{symbol}' exceeds chart dimension {dim}")]
    SymbolIndexOutOfRange { symbol: String, dim: usize },
    #[error("malformed number '{0}'")]
    BadNumber(String),
    #[error("exponent must be a constant number")]
    NonConstantExponent,
}

/// Syntax or validation error with the byte offset it occurred at.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("{kind} at byte {offset}")]
pub struct ParseError {
    pub kind: ParseErrorKind,
    pub offset: usize,
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(f64),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Num(v) => format!("number {v}"),
            Tok::Ident(s) => format!("identifier {s}"),
            Tok::Plus => "+".into(),
            Tok::Minus => "-".into(),
            Tok::Star => "*".into(),
            Tok::Slash => "/".into(),
            Tok::Caret => "^".into(),
            Tok::LParen => "(".into(),
            Tok::RParen => ")".into(),
        }
    }
}

fn lex(source: &str) -> Result<Vec<(Tok, usize)>, ParseError> {
    let bytes = source.as_bytes();
    let mut toks = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        match c {
            ' ' | '\t' | '\n' | '\r' => i += 1,
            '+' => {
                toks.push((Tok::Plus, i));
                i += 1;
            }
            '-' => {
                toks.push((Tok::Minus, i));
                i += 1;
            }
            '*' => {
                toks.push((Tok::Star, i));
                i += 1;
            }
            '/' => {
                toks.push((Tok::Slash, i));
                i += 1;
            }
            '^' => {
                toks.push((Tok::Caret, i));
                i += 1;
            }
            '(' => {
                toks.push((Tok::LParen, i));
                i += 1;
            }
            ')' => {
                toks.push((Tok::RParen, i));
                i += 1;
            }
            '0'..='9' => {
                let start = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                if i < bytes.len() && bytes[i] == b'.' {
                    i += 1;
                    while i < bytes.len() && bytes[i].is_ascii_digit() {
                        i += 1;
                    }
                }
                if i < bytes.len() && (bytes[i] == b'e' || bytes[i] == b'E') {
                    let mut j = i + 1;
                    if j < bytes.len() && (bytes[j] == b'+' || bytes[j] == b'-') {
                        j += 1;
                    }
                    if j < bytes.len() && bytes[j].is_ascii_digit() {
                        i = j;
                        while i < bytes.len() && bytes[i].is_ascii_digit() {
                            i += 1;
                        }
                    }
                }
                let text = &source[start..i];
                let value: f64 = text.parse().map_err(|_| ParseError {
                    kind: ParseErrorKind::BadNumber(text.to_string()),
                    offset: start,
                })?;
                toks.push((Tok::Num(value), start));
            }
            'a'..='z' | 'A'..='Z' => {
                let start = i;
                while i < bytes.len() && (bytes[i] as char).is_ascii_alphabetic() {
                    i += 1;
                }
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                toks.push((Tok::Ident(source[start..i].to_string()), start));
            }
            other => {
                return Err(ParseError {
                    kind: ParseErrorKind::UnexpectedChar(other),
                    offset: i,
                })
            }
        }
    }
    Ok(toks)
}

struct Parser<'a> {
    toks: &'a [(Tok, usize)],
    pos: usize,
    dim: usize,
    end: usize,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _)| t)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map(|(_, o)| *o).unwrap_or(self.end)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|(t, _)| t.clone());
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn err(&self, kind: ParseErrorKind) -> ParseError {
        ParseError {
            kind,
            offset: self.offset(),
        }
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.term()?;
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.bump();
                    let rhs = self.term()?;
                    lhs = Expr::Add(Box::new(lhs), Box::new(rhs));
                }
                Some(Tok::Minus) => {
                    self.bump();
                    let rhs = self.term()?;
                    lhs = Expr::Sub(Box::new(lhs), Box::new(rhs));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.unary()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.bump();
                    let rhs = self.unary()?;
                    lhs = Expr::Mul(Box::new(lhs), Box::new(rhs));
                }
                Some(Tok::Slash) => {
                    self.bump();
                    let rhs = self.unary()?;
                    lhs = Expr::Div(Box::new(lhs), Box::new(rhs));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn unary(&mut self) -> Result<Expr, ParseError> {
        if let Some(Tok::Minus) = self.peek() {
            self.bump();
            let inner = self.unary()?;
            return Ok(Expr::Neg(Box::new(inner)));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr, ParseError> {
        let mut base = self.atom()?;
        while let Some(Tok::Caret) = self.peek() {
            self.bump();
            let mut sign = 1.0;
            if let Some(Tok::Minus) = self.peek() {
                self.bump();
                sign = -1.0;
            }
            match self.bump() {
                Some(Tok::Num(v)) => {
                    base = Expr::Pow(Box::new(base), sign * v);
                }
                Some(_) | None => return Err(self.err(ParseErrorKind::NonConstantExponent)),
            }
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expr, ParseError> {
        let offset = self.offset();
        match self.bump() {
            Some(Tok::Num(v)) => Ok(Expr::Const(v)),
            Some(Tok::LParen) => {
                let inner = self.expr()?;
                match self.bump() {
                    Some(Tok::RParen) => Ok(inner),
                    Some(t) => Err(ParseError {
                        kind: ParseErrorKind::UnexpectedToken {
                            expected: "')'",
                            found: t.describe(),
                        },
                        offset: self.toks[self.pos - 1].1,
                    }),
                    None => Err(self.err(ParseErrorKind::UnexpectedEnd)),
                }
            }
            Some(Tok::Ident(name)) => {
                if let Some(Tok::LParen) = self.peek() {
                    let func = Func::from_name(&name).ok_or(ParseError {
                        kind: ParseErrorKind::UnknownFunction(name.clone()),
                        offset,
                    })?;
                    self.bump();
                    let arg = self.expr()?;
                    match self.bump() {
                        Some(Tok::RParen) => Ok(Expr::Call(func, Box::new(arg))),
                        Some(t) => Err(ParseError {
                            kind: ParseErrorKind::UnexpectedToken {
                                expected: "')'",
                                found: t.describe(),
                            },
                            offset: self.toks[self.pos - 1].1,
                        }),
                        None => Err(self.err(ParseErrorKind::UnexpectedEnd)),
                    }
                } else {
                    self.symbol(&name, offset)
                }
            }
            Some(t) => Err(ParseError {
                kind: ParseErrorKind::UnexpectedToken {
                    expected: "a value",
                    found: t.describe(),
                },
                offset,
            }),
            None => Err(self.err(ParseErrorKind::UnexpectedEnd)),
        }
    }

    fn symbol(&self, name: &str, offset: usize) -> Result<Expr, ParseError> {
        let mut chars = name.chars();
        let head = chars.next().unwrap_or(' ');
        let digits: String = chars.collect();
        let canonical = !digits.is_empty()
            && digits.chars().all(|c| c.is_ascii_digit())
            && (digits.len() == 1 || !digits.starts_with('0'));
        if (head != 'x' && head != 'v') || !canonical {
            return Err(ParseError {
                kind: ParseErrorKind::UnknownSymbol(name.to_string()),
                offset,
            });
        }
        let index: usize = digits.parse().map_err(|_| ParseError {
            kind: ParseErrorKind::UnknownSymbol(name.to_string()),
            offset,
        })?;
        if index >= self.dim {
            return Err(ParseError {
                kind: ParseErrorKind::SymbolIndexOutOfRange {
                    symbol: name.to_string(),
                    dim: self.dim,
                },
                offset,
            });
        }
        Ok(if head == 'x' {
            Expr::Coord(index)
        } else {
            Expr::Vel(index)
        })
    }
}

/// Parses `source` against a chart of dimension `dim`.
pub fn parse(source: &str, dim: usize) -> Result<Expr, ParseError> {
    if source.trim().is_empty() {
        return Err(ParseError {
            kind: ParseErrorKind::EmptySource,
            offset: 0,
        });
    }
    let toks = lex(source)?;
    let mut parser = Parser {
        toks: &toks,
        pos: 0,
        dim,
        end: source.len(),
    };
    let expr = parser.expr()?;
    if parser.pos != toks.len() {
        let (t, o) = &toks[parser.pos];
        return Err(ParseError {
            kind: ParseErrorKind::UnexpectedToken {
                expected: "end of input",
                found: t.describe(),
            },
            offset: *o,
        });
    }
    Ok(expr)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basic_precedence() {
        let e = parse("x1 + 2*x2", 4).unwrap();
        assert_eq!(
            e,
            Expr::Add(
                Box::new(Expr::Coord(1)),
                Box::new(Expr::Mul(
                    Box::new(Expr::Const(2.0)),
                    Box::new(Expr::Coord(2))
                ))
            )
        );
    }

    #[test]
    fn schwarzschild_fragment() {
        let e = parse("1 - 2/x1", 4).unwrap();
        assert_eq!(
            e,
            Expr::Sub(
                Box::new(Expr::Const(1.0)),
                Box::new(Expr::Div(
                    Box::new(Expr::Const(2.0)),
                    Box::new(Expr::Coord(1))
                ))
            )
        );
    }

    #[test]
    fn symbol_out_of_range() {
        let err = parse("x5", 4).unwrap_err();
        assert_eq!(
            err.kind,
            ParseErrorKind::SymbolIndexOutOfRange {
                symbol: "x5".into(),
                dim: 4
            }
        );
        assert_eq!(err.offset, 0);
    }

    #[test]
    fn unknown_symbols_and_functions() {
        assert!(matches!(
            parse("y1", 4).unwrap_err().kind,
            ParseErrorKind::UnknownSymbol(_)
        ));
        assert!(matches!(
            parse("x01", 4).unwrap_err().kind,
            ParseErrorKind::UnknownSymbol(_)
        ));
        assert!(matches!(
            parse("foo(x1)", 4).unwrap_err().kind,
            ParseErrorKind::UnknownFunction(_)
        ));
    }

    #[test]
    fn unary_minus_binds_below_power() {
        // -x1^2 reads as -(x1^2)
        let e = parse("-x1^2", 4).unwrap();
        assert_eq!(
            e,
            Expr::Neg(Box::new(Expr::Pow(Box::new(Expr::Coord(1)), 2.0)))
        );
    }

    #[test]
    fn negative_exponent() {
        let e = parse("x1^-2", 4).unwrap();
        assert_eq!(e, Expr::Pow(Box::new(Expr::Coord(1)), -2.0));
    }

    #[test]
    fn error_offsets_point_at_bytes() {
        let err = parse("x1 + ", 4).unwrap_err();
        assert_eq!(err.kind, ParseErrorKind::UnexpectedEnd);
        assert_eq!(err.offset, 5);

        let err = parse("x1 @ x2", 4).unwrap_err();
        assert_eq!(err.kind, ParseErrorKind::UnexpectedChar('@'));
        assert_eq!(err.offset, 3);
    }

    #[test]
    fn empty_source_rejected() {
        assert_eq!(parse("  ", 4).unwrap_err().kind, ParseErrorKind::EmptySource);
    }
}
