//! Parser for the expression mini-language.
//!
//! ```text
//! expr   := ['+'|'-'] term (('+'|'-') term)*
//! term   := factor ('*' factor)*
//! factor := RATIONAL | 'm' ['^' INT] | 'beta' | 'E' | 'O'
//!         | 'comm(' expr ',' expr ')' | 'acomm(' expr ',' expr ')'
//!         | 'pow(' expr ',' NAT ')' | 'epsfun(' NAME ')' | '(' expr ')'
//! ```
//!
//! At the outermost level factors may also be juxtaposed, which is how the
//! canonical serialization `1/2 m^-1 beta O O` reads back in.

use num::{BigInt, BigRational, Zero};
use thiserror::Error;

use super::bracket::BracketExpr;
use crate::fseries::EpsilonFunctionSpec;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("syntax error at offset {offset}: {message}")]
    Syntax { offset: usize, message: String },
    #[error("unknown symbol `{name}` at offset {offset}")]
    UnknownSymbol { offset: usize, name: String },
}

impl ParseError {
    pub fn offset(&self) -> usize {
        match self {
            ParseError::Syntax { offset, .. } | ParseError::UnknownSymbol { offset, .. } => *offset,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Num(BigInt),
    Ident(String),
    Sym(char),
    End,
}

struct Lexer;

impl Lexer {
    fn tokens(src: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
        let bytes = src.as_bytes();
        let mut out = Vec::new();
        let mut i = 0;
        while i < bytes.len() {
            let c = bytes[i] as char;
            if c.is_ascii_whitespace() {
                i += 1;
            } else if c.is_ascii_digit() {
                let start = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                let n: BigInt = src[start..i].parse().expect("digits");
                out.push((start, Tok::Num(n)));
            } else if c.is_ascii_alphabetic() || c == '_' {
                let start = i;
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                out.push((start, Tok::Ident(src[start..i].to_string())));
            } else if "+-*/^(),".contains(c) {
                out.push((i, Tok::Sym(c)));
                i += 1;
            } else {
                let ch = src[i..].chars().next().unwrap_or(c);
                return Err(ParseError::Syntax {
                    offset: i,
                    message: format!("unexpected character `{ch}`"),
                });
            }
        }
        out.push((src.len(), Tok::End));
        Ok(out)
    }
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    depth: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].1
    }

    fn offset(&self) -> usize {
        self.toks[self.pos].0
    }

    fn bump(&mut self) -> (usize, Tok) {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn err<T>(&self, message: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError::Syntax {
            offset: self.offset(),
            message: message.into(),
        })
    }

    fn expect_sym(&mut self, c: char) -> Result<(), ParseError> {
        if self.peek() == &Tok::Sym(c) {
            self.bump();
            Ok(())
        } else {
            self.err(format!("expected `{c}`, found {}", describe(self.peek())))
        }
    }

    fn expr(&mut self) -> Result<BracketExpr, ParseError> {
        let mut terms = Vec::new();
        let mut negate = match self.peek() {
            Tok::Sym('-') => {
                self.bump();
                true
            }
            Tok::Sym('+') => {
                self.bump();
                false
            }
            _ => false,
        };
        loop {
            let t = self.term()?;
            terms.push(if negate { negated(t) } else { t });
            match self.peek() {
                Tok::Sym('+') => negate = false,
                Tok::Sym('-') => negate = true,
                _ => break,
            }
            self.bump();
        }
        Ok(if terms.len() == 1 {
            terms.pop().unwrap()
        } else {
            BracketExpr::Sum(terms)
        })
    }

    fn starts_factor(&self) -> bool {
        matches!(self.peek(), Tok::Num(_) | Tok::Ident(_) | Tok::Sym('('))
    }

    fn term(&mut self) -> Result<BracketExpr, ParseError> {
        let mut factors = vec![self.factor()?];
        loop {
            if self.peek() == &Tok::Sym('*') {
                self.bump();
                factors.push(self.factor()?);
            } else if self.depth == 0 && self.starts_factor() {
                factors.push(self.factor()?);
            } else {
                break;
            }
        }
        Ok(if factors.len() == 1 {
            factors.pop().unwrap()
        } else {
            BracketExpr::Product(factors)
        })
    }

    fn integer(&mut self) -> Result<i64, ParseError> {
        let neg = if self.peek() == &Tok::Sym('-') {
            self.bump();
            true
        } else {
            false
        };
        match self.peek().clone() {
            Tok::Num(n) => {
                let v: i64 = (&n).try_into().or_else(|_| self.err("integer out of range"))?;
                self.bump();
                Ok(if neg { -v } else { v })
            }
            other => self.err(format!("expected integer, found {}", describe(&other))),
        }
    }

    fn call_args2(&mut self) -> Result<(BracketExpr, BracketExpr), ParseError> {
        self.depth += 1;
        let a = self.expr()?;
        self.expect_sym(',')?;
        let b = self.expr()?;
        self.expect_sym(')')?;
        self.depth -= 1;
        Ok((a, b))
    }

    fn factor(&mut self) -> Result<BracketExpr, ParseError> {
        let (offset, tok) = self.bump();
        match tok {
            Tok::Num(n) => {
                let mut r = BigRational::from_integer(n);
                if self.peek() == &Tok::Sym('/') {
                    self.bump();
                    match self.peek().clone() {
                        Tok::Num(d) if !d.is_zero() => {
                            self.bump();
                            r /= BigRational::from_integer(d);
                        }
                        Tok::Num(_) => return self.err("zero denominator"),
                        other => return self.err(format!("expected denominator, found {}", describe(&other))),
                    }
                }
                Ok(BracketExpr::Scalar(r))
            }
            Tok::Sym('(') => {
                self.depth += 1;
                let e = self.expr()?;
                self.expect_sym(')')?;
                self.depth -= 1;
                Ok(e)
            }
            Tok::Ident(name) => match name.as_str() {
                "E" => Ok(BracketExpr::e()),
                "O" => Ok(BracketExpr::o()),
                "beta" => Ok(BracketExpr::Beta),
                "m" => {
                    if self.peek() == &Tok::Sym('^') {
                        self.bump();
                        let k = self.integer()?;
                        let k = i32::try_from(k).or_else(|_| self.err("mass power out of range"))?;
                        Ok(BracketExpr::MassPower(k))
                    } else {
                        Ok(BracketExpr::MassPower(1))
                    }
                }
                "comm" | "acomm" | "pow" | "epsfun" => {
                    self.expect_sym('(')?;
                    match name.as_str() {
                        "comm" => {
                            let (a, b) = self.call_args2()?;
                            Ok(BracketExpr::comm(a, b))
                        }
                        "acomm" => {
                            let (a, b) = self.call_args2()?;
                            Ok(BracketExpr::acomm(a, b))
                        }
                        "pow" => {
                            self.depth += 1;
                            let base = self.expr()?;
                            self.expect_sym(',')?;
                            let n = match self.peek().clone() {
                                Tok::Num(n) => {
                                    self.bump();
                                    usize::try_from(n).or_else(|_| self.err("exponent out of range"))?
                                }
                                other => {
                                    return self.err(format!(
                                        "expected natural exponent, found {}",
                                        describe(&other)
                                    ))
                                }
                            };
                            self.expect_sym(')')?;
                            self.depth -= 1;
                            Ok(if n == 0 {
                                BracketExpr::Product(vec![])
                            } else if n == 1 {
                                base
                            } else {
                                BracketExpr::pow(base, n)
                            })
                        }
                        _ => {
                            let off = self.offset();
                            let fname = match self.bump().1 {
                                Tok::Ident(s) => s,
                                other => {
                                    return Err(ParseError::Syntax {
                                        offset: off,
                                        message: format!("expected function name, found {}", describe(&other)),
                                    })
                                }
                            };
                            let spec = EpsilonFunctionSpec::named(&fname).map_err(|_| {
                                ParseError::UnknownSymbol {
                                    offset: off,
                                    name: fname.clone(),
                                }
                            })?;
                            self.expect_sym(')')?;
                            Ok(BracketExpr::EpsilonFunction(spec))
                        }
                    }
                }
                _ => Err(ParseError::UnknownSymbol { offset, name }),
            },
            other => Err(ParseError::Syntax {
                offset,
                message: format!("expected a factor, found {}", describe(&other)),
            }),
        }
    }
}

fn describe(t: &Tok) -> String {
    match t {
        Tok::Num(n) => format!("number `{n}`"),
        Tok::Ident(s) => format!("`{s}`"),
        Tok::Sym(c) => format!("`{c}`"),
        Tok::End => "end of input".to_string(),
    }
}

fn negated(t: BracketExpr) -> BracketExpr {
    match t {
        BracketExpr::Scalar(c) => BracketExpr::Scalar(-c),
        BracketExpr::Product(mut fs) => {
            if let Some(BracketExpr::Scalar(c)) = fs.first_mut() {
                *c = -c.clone();
                BracketExpr::Product(fs)
            } else {
                fs.insert(0, BracketExpr::Scalar(BigRational::from_integer((-1).into())));
                BracketExpr::Product(fs)
            }
        }
        other => BracketExpr::Product(vec![
            BracketExpr::Scalar(BigRational::from_integer((-1).into())),
            other,
        ]),
    }
}

/// `parseExpr`.
pub fn parse_expr(text: &str) -> Result<BracketExpr, ParseError> {
    let toks = Lexer::tokens(text)?;
    let mut p = Parser {
        toks,
        pos: 0,
        depth: 0,
    };
    let e = p.expr()?;
    if p.peek() != &Tok::End {
        return p.err(format!("unexpected {}", describe(p.peek())));
    }
    Ok(e)
}
