use thiserror::Error;

use super::EmlExpr;

/// Parse failure; positions are byte offsets into the input.
#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("unexpected {found} at position {position}, expected {expected}")]
    UnexpectedToken {
        position: usize,
        found: String,
        expected: &'static str,
    },
    #[error("unbalanced parentheses at position {position}")]
    UnbalancedParens { position: usize },
    #[error("trailing input at position {position}")]
    TrailingInput { position: usize },
}

impl ParseError {
    pub fn position(&self) -> usize {
        match self {
            ParseError::UnexpectedToken { position, .. }
            | ParseError::UnbalancedParens { position }
            | ParseError::TrailingInput { position } => *position,
        }
    }
}

enum Frame {
    Alpha,
    Beta(EmlExpr),
}

struct Cursor<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl Cursor<'_> {
    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.bytes.get(self.pos).copied()
    }

    fn describe(&self) -> String {
        match std::str::from_utf8(&self.bytes[self.pos..])
            .ok()
            .and_then(|s| s.chars().next())
        {
            Some(c) => format!("'{c}'"),
            None => "byte".to_string(),
        }
    }

    fn unexpected(&self, expected: &'static str) -> ParseError {
        ParseError::UnexpectedToken {
            position: self.pos,
            found: self.describe(),
            expected,
        }
    }
}

/// Parses the EML grammar `phi ::= 1 | E(phi,phi)`. ASCII whitespace is
/// allowed between tokens.
///
/// The parser keeps an explicit stack, so nesting depth is bounded only by
/// memory.
pub fn parse(text: &str) -> Result<EmlExpr, ParseError> {
    let mut cur = Cursor {
        bytes: text.as_bytes(),
        pos: 0,
    };
    let mut stack: Vec<Frame> = Vec::new();

    loop {
        let mut value = match cur.peek() {
            Some(b'1') => {
                cur.pos += 1;
                EmlExpr::One
            }
            Some(b'E') => {
                cur.pos += 1;
                match cur.peek() {
                    Some(b'(') => cur.pos += 1,
                    None => return Err(ParseError::UnbalancedParens { position: cur.pos }),
                    Some(_) => return Err(cur.unexpected("'('")),
                }
                stack.push(Frame::Alpha);
                continue;
            }
            None if !stack.is_empty() => {
                return Err(ParseError::UnbalancedParens { position: cur.pos })
            }
            None => {
                return Err(ParseError::UnexpectedToken {
                    position: cur.pos,
                    found: "end of input".to_string(),
                    expected: "'1' or 'E'",
                })
            }
            Some(_) => return Err(cur.unexpected("'1' or 'E'")),
        };

        loop {
            match stack.pop() {
                None => {
                    return match cur.peek() {
                        None => Ok(value),
                        Some(b')') => Err(ParseError::UnbalancedParens { position: cur.pos }),
                        Some(_) => Err(ParseError::TrailingInput { position: cur.pos }),
                    };
                }
                Some(Frame::Alpha) => {
                    match cur.peek() {
                        Some(b',') => cur.pos += 1,
                        None => return Err(ParseError::UnbalancedParens { position: cur.pos }),
                        Some(_) => return Err(cur.unexpected("','")),
                    }
                    stack.push(Frame::Beta(value));
                    break;
                }
                Some(Frame::Beta(alpha)) => {
                    match cur.peek() {
                        Some(b')') => cur.pos += 1,
                        None => return Err(ParseError::UnbalancedParens { position: cur.pos }),
                        Some(_) => return Err(cur.unexpected("')'")),
                    }
                    value = EmlExpr::e(alpha, value);
                }
            }
        }
    }
}
