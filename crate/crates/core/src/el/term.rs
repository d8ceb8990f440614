//! Closed-form terms over exp, log, field operations, and named constants,
//! with a conventional infix text syntax.

use std::fmt;

use num_bigint::BigInt;
use thiserror::Error;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ElTerm {
    Lit1,
    LitInt(BigInt),
    ConstE,
    ConstPi,
    ConstI,
    Exp(Box<ElTerm>),
    Log(Box<ElTerm>),
    Neg(Box<ElTerm>),
    Inv(Box<ElTerm>),
    Add(Box<ElTerm>, Box<ElTerm>),
    Sub(Box<ElTerm>, Box<ElTerm>),
    Mul(Box<ElTerm>, Box<ElTerm>),
    Div(Box<ElTerm>, Box<ElTerm>),
    Pow(Box<ElTerm>, Box<ElTerm>),
}

impl ElTerm {
    pub fn int(n: impl Into<BigInt>) -> ElTerm {
        ElTerm::LitInt(n.into())
    }
    pub fn exp(t: ElTerm) -> ElTerm {
        ElTerm::Exp(Box::new(t))
    }
    pub fn log(t: ElTerm) -> ElTerm {
        ElTerm::Log(Box::new(t))
    }
    pub fn neg(t: ElTerm) -> ElTerm {
        ElTerm::Neg(Box::new(t))
    }
    pub fn inv(t: ElTerm) -> ElTerm {
        ElTerm::Inv(Box::new(t))
    }
    pub fn add(a: ElTerm, b: ElTerm) -> ElTerm {
        ElTerm::Add(Box::new(a), Box::new(b))
    }
    pub fn sub(a: ElTerm, b: ElTerm) -> ElTerm {
        ElTerm::Sub(Box::new(a), Box::new(b))
    }
    pub fn mul(a: ElTerm, b: ElTerm) -> ElTerm {
        ElTerm::Mul(Box::new(a), Box::new(b))
    }
    pub fn div(a: ElTerm, b: ElTerm) -> ElTerm {
        ElTerm::Div(Box::new(a), Box::new(b))
    }
    pub fn pow(a: ElTerm, b: ElTerm) -> ElTerm {
        ElTerm::Pow(Box::new(a), Box::new(b))
    }
}

impl fmt::Display for ElTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ElTerm::Lit1 => f.write_str("1"),
            ElTerm::LitInt(n) if n.sign() == num_bigint::Sign::Minus => write!(f, "({n})"),
            ElTerm::LitInt(n) => write!(f, "{n}"),
            ElTerm::ConstE => f.write_str("e"),
            ElTerm::ConstPi => f.write_str("pi"),
            ElTerm::ConstI => f.write_str("i"),
            ElTerm::Exp(t) => write!(f, "exp({t})"),
            ElTerm::Log(t) => write!(f, "log({t})"),
            ElTerm::Neg(t) => write!(f, "(-{t})"),
            ElTerm::Inv(t) => write!(f, "(1/{t})"),
            ElTerm::Add(a, b) => write!(f, "({a} + {b})"),
            ElTerm::Sub(a, b) => write!(f, "({a} - {b})"),
            ElTerm::Mul(a, b) => write!(f, "({a} * {b})"),
            ElTerm::Div(a, b) => write!(f, "({a} / {b})"),
            ElTerm::Pow(a, b) => write!(f, "({a} ^ {b})"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("{message} at position {position}")]
pub struct TermParseError {
    pub position: usize,
    pub message: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Sym(char),
    End,
}

fn lex(text: &str) -> Result<Vec<(usize, Tok)>, TermParseError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        if c.is_ascii_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            let n: BigInt = text[start..i].parse().expect("digits");
            out.push((start, Tok::Int(n)));
        } else if c.is_ascii_alphabetic() {
            let start = i;
            while i < bytes.len() && bytes[i].is_ascii_alphanumeric() {
                i += 1;
            }
            out.push((start, Tok::Ident(text[start..i].to_string())));
        } else if b"+-*/^()".contains(&c) {
            out.push((i, Tok::Sym(c as char)));
            i += 1;
        } else {
            return Err(TermParseError {
                position: i,
                message: format!("unexpected character {:?}", text[i..].chars().next().unwrap_or('?')),
            });
        }
    }
    out.push((text.len(), Tok::End));
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    at: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.at].1
    }

    fn pos(&self) -> usize {
        self.toks[self.at].0
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.at].1.clone();
        if self.at + 1 < self.toks.len() {
            self.at += 1;
        }
        t
    }

    fn fail<T>(&self, message: impl Into<String>) -> Result<T, TermParseError> {
        Err(TermParseError {
            position: self.pos(),
            message: message.into(),
        })
    }

    fn expect(&mut self, c: char) -> Result<(), TermParseError> {
        if *self.peek() == Tok::Sym(c) {
            self.bump();
            Ok(())
        } else {
            self.fail(format!("expected '{c}'"))
        }
    }

    fn sum(&mut self) -> Result<ElTerm, TermParseError> {
        let mut acc = self.product()?;
        loop {
            match self.peek() {
                Tok::Sym('+') => {
                    self.bump();
                    acc = ElTerm::add(acc, self.product()?);
                }
                Tok::Sym('-') => {
                    self.bump();
                    acc = ElTerm::sub(acc, self.product()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn product(&mut self) -> Result<ElTerm, TermParseError> {
        let mut acc = self.unary()?;
        loop {
            match self.peek() {
                Tok::Sym('*') => {
                    self.bump();
                    acc = ElTerm::mul(acc, self.unary()?);
                }
                Tok::Sym('/') => {
                    self.bump();
                    acc = ElTerm::div(acc, self.unary()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> Result<ElTerm, TermParseError> {
        if *self.peek() == Tok::Sym('-') {
            self.bump();
            return Ok(ElTerm::neg(self.unary()?));
        }
        self.power()
    }

    fn power(&mut self) -> Result<ElTerm, TermParseError> {
        let base = self.atom()?;
        if *self.peek() == Tok::Sym('^') {
            self.bump();
            // right associative; the exponent may carry its own sign
            let exponent = self.unary()?;
            return Ok(ElTerm::pow(base, exponent));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<ElTerm, TermParseError> {
        let pos = self.pos();
        match self.bump() {
            Tok::Int(n) => Ok(if n == BigInt::from(1) {
                ElTerm::Lit1
            } else {
                ElTerm::LitInt(n)
            }),
            Tok::Sym('(') => {
                let inner = self.sum()?;
                self.expect(')')?;
                Ok(inner)
            }
            Tok::Ident(name) => match name.as_str() {
                "e" => Ok(ElTerm::ConstE),
                "pi" => Ok(ElTerm::ConstPi),
                "i" => Ok(ElTerm::ConstI),
                "exp" | "log" => {
                    self.expect('(')?;
                    let inner = self.sum()?;
                    self.expect(')')?;
                    Ok(if name == "exp" {
                        ElTerm::exp(inner)
                    } else {
                        ElTerm::log(inner)
                    })
                }
                _ => Err(TermParseError {
                    position: pos,
                    message: format!("unknown name '{name}'"),
                }),
            },
            Tok::End => Err(TermParseError {
                position: pos,
                message: "unexpected end of input".into(),
            }),
            Tok::Sym(c) => Err(TermParseError {
                position: pos,
                message: format!("unexpected '{c}'"),
            }),
        }
    }
}

/// Parses infix term syntax. Precedence from tightest: `^` (right
/// associative), unary `-`, `* /`, `+ -`.
pub fn parse_term(text: &str) -> Result<ElTerm, TermParseError> {
    let mut p = Parser {
        toks: lex(text)?,
        at: 0,
    };
    let t = p.sum()?;
    if *p.peek() != Tok::End {
        return p.fail("trailing input");
    }
    Ok(t)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> ElTerm {
        parse_term(s).unwrap()
    }

    #[test]
    fn precedence() {
        assert_eq!(
            p("1 + 2 * 3"),
            ElTerm::add(ElTerm::Lit1, ElTerm::mul(ElTerm::int(2), ElTerm::int(3)))
        );
        assert_eq!(p("-2^2"), ElTerm::neg(ElTerm::pow(ElTerm::int(2), ElTerm::int(2))));
        assert_eq!(
            p("2^3^2"),
            ElTerm::pow(ElTerm::int(2), ElTerm::pow(ElTerm::int(3), ElTerm::int(2)))
        );
        assert_eq!(p("2^-1"), ElTerm::pow(ElTerm::int(2), ElTerm::neg(ElTerm::Lit1)));
        assert_eq!(
            p("-2*3"),
            ElTerm::mul(ElTerm::neg(ElTerm::int(2)), ElTerm::int(3))
        );
        assert_eq!(
            p("8 - 2 - 1"),
            ElTerm::sub(ElTerm::sub(ElTerm::int(8), ElTerm::int(2)), ElTerm::Lit1)
        );
    }

    #[test]
    fn names_and_calls() {
        assert_eq!(p("log(1)"), ElTerm::log(ElTerm::Lit1));
        assert_eq!(
            p("exp(i*pi)"),
            ElTerm::exp(ElTerm::mul(ElTerm::ConstI, ElTerm::ConstPi))
        );
        assert_eq!(p("e"), ElTerm::ConstE);
    }

    #[test]
    fn errors() {
        assert_eq!(parse_term("1 +").unwrap_err().position, 3);
        assert_eq!(parse_term("sin(1)").unwrap_err().position, 0);
        assert_eq!(parse_term("(1").unwrap_err().position, 2);
        assert_eq!(parse_term("1 2").unwrap_err().position, 2);
        assert_eq!(parse_term("1 % 2").unwrap_err().position, 2);
    }

    #[test]
    fn display_reparses() {
        for s in ["1 + 2 * 3", "-2^2", "exp(log(2)) / (3 - i)", "2^-1"] {
            let t = p(s);
            assert_eq!(p(&t.to_string()), t);
        }
    }
}
