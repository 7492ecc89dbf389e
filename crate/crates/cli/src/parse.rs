//! Polynomial input grammar.
//!
//! ```text
//! input  := list | expr
//! list   := '[' [int (',' int)*] ']'          ascending coefficients
//! expr   := term (('+' | '-') term)*
//! term   := unary ('*'? unary)*               juxtaposition multiplies
//! unary  := ('+' | '-') unary | power
//! power  := atom ('^' uint)?
//! atom   := uint | 'x' | '(' expr ')'
//! ```
//!
//! Whitespace is ignored between tokens. Error offsets are byte offsets
//! into the input.

use std::fmt;

use num_bigint::BigInt;
use resval_core::Polynomial;

/// Largest exponent accepted after `^`.
pub const MAX_EXPONENT: u32 = 256;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseError {
    pub offset: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "parse error at byte {}: {}", self.offset, self.message)
    }
}

impl std::error::Error for ParseError {}

type PResult<T> = Result<T, ParseError>;

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn err<T>(&self, offset: usize, message: impl Into<String>) -> PResult<T> {
        Err(ParseError {
            offset,
            message: message.into(),
        })
    }

    fn skip_ws(&mut self) {
        while self.src.get(self.pos).is_some_and(u8::is_ascii_whitespace) {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn expect(&mut self, c: u8) -> PResult<()> {
        match self.peek() {
            Some(b) if b == c => {
                self.pos += 1;
                Ok(())
            }
            Some(b) => self.err(
                self.pos,
                format!("expected '{}', found '{}'", c as char, b as char),
            ),
            None => self.err(
                self.pos,
                format!("expected '{}', found end of input", c as char),
            ),
        }
    }

    fn uint(&mut self) -> PResult<BigInt> {
        self.skip_ws();
        let start = self.pos;
        while self.src.get(self.pos).is_some_and(u8::is_ascii_digit) {
            self.pos += 1;
        }
        if start == self.pos {
            return self.err(start, "expected an integer");
        }
        if matches!(self.src.get(self.pos), Some(b'.') | Some(b'/')) {
            return self.err(self.pos, "non-integer coefficient");
        }
        let digits = std::str::from_utf8(&self.src[start..self.pos]).expect("ASCII digits");
        Ok(digits.parse().expect("nonempty digit string"))
    }

    fn int(&mut self) -> PResult<BigInt> {
        let neg = match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                true
            }
            Some(b'+') => {
                self.pos += 1;
                false
            }
            _ => false,
        };
        let n = self.uint()?;
        Ok(if neg { -n } else { n })
    }

    fn list(&mut self) -> PResult<Polynomial> {
        self.expect(b'[')?;
        let mut coeffs = Vec::new();
        if self.peek() != Some(b']') {
            coeffs.push(self.int()?);
            while self.peek() == Some(b',') {
                self.pos += 1;
                coeffs.push(self.int()?);
            }
        }
        self.expect(b']')?;
        Ok(Polynomial::new(coeffs))
    }

    fn expr(&mut self) -> PResult<Polynomial> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    acc = acc + self.term()?;
                }
                Some(b'-') => {
                    self.pos += 1;
                    acc = acc - self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> PResult<Polynomial> {
        let mut acc = self.unary()?;
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                    acc = acc * self.unary()?;
                }
                Some(b'x' | b'X' | b'(') => acc = acc * self.power()?,
                Some(c) if c.is_ascii_digit() => {
                    return self.err(self.pos, "missing operator before integer");
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> PResult<Polynomial> {
        match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                Ok(-self.unary()?)
            }
            Some(b'+') => {
                self.pos += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> PResult<Polynomial> {
        let base = self.atom()?;
        if self.peek() != Some(b'^') {
            return Ok(base);
        }
        self.pos += 1;
        self.skip_ws();
        let at = self.pos;
        let e = self.uint()?;
        match u32::try_from(e) {
            Ok(e) if e <= MAX_EXPONENT => Ok(base.pow(e)),
            _ => self.err(at, format!("exponent exceeds {MAX_EXPONENT}")),
        }
    }

    fn atom(&mut self) -> PResult<Polynomial> {
        match self.peek() {
            Some(b'x' | b'X') => {
                self.pos += 1;
                Ok(Polynomial::x())
            }
            Some(b'(') => {
                self.pos += 1;
                let inner = self.expr()?;
                self.expect(b')')?;
                Ok(inner)
            }
            Some(c) if c.is_ascii_digit() => Ok(Polynomial::constant(self.uint()?)),
            Some(b'.') => self.err(self.pos, "non-integer coefficient"),
            Some(c) => self.err(self.pos, format!("unexpected '{}'", c as char)),
            None => self.err(self.pos, "unexpected end of input"),
        }
    }
}

/// Parses an expression in `x` or a bracketed ascending coefficient list.
pub fn parse_polynomial(text: &str) -> PResult<Polynomial> {
    let mut p = Parser {
        src: text.as_bytes(),
        pos: 0,
    };
    let poly = match p.peek() {
        None => return p.err(p.pos, "empty input"),
        Some(b'[') => p.list()?,
        Some(_) => p.expr()?,
    };
    match p.peek() {
        None => Ok(poly),
        Some(b'/' | b'.') => p.err(p.pos, "non-integer coefficient"),
        Some(c) => p.err(p.pos, format!("unexpected '{}'", c as char)),
    }
}
