//! Textual surd literals: `"a/b + c/e * sqrt(d)"`.
//!
//! The printer emits the rational part first and drops zero terms and unit
//! coefficients (`"-1 + sqrt(2)"`, `"1 - 1/2 * sqrt(2)"`). The parser accepts
//! any arithmetic expression over integers, decimals, `sqrt(..)`, `+ - * /`
//! and parentheses, so `"sqrt(2) - 1"` and `"(2 - sqrt(2))/2"` both work.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::QuadSurd;
use crate::error::{Error, Result};

fn format_rational(q: &BigRational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Canonical literal for a surd; `parse_surd` inverts it exactly.
pub fn format_surd(x: &QuadSurd) -> String {
    let a = x.a();
    let b = x.b();
    if b.is_zero() {
        return format_rational(a);
    }
    let mag = b.abs();
    let radical = if mag.is_one() {
        format!("sqrt({})", x.d())
    } else {
        format!("{} * sqrt({})", format_rational(&mag), x.d())
    };
    if a.is_zero() {
        if b.is_negative() {
            format!("-{radical}")
        } else {
            radical
        }
    } else {
        let op = if b.is_negative() { '-' } else { '+' };
        format!("{} {op} {radical}", format_rational(a))
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Token {
    Num(BigRational),
    Sqrt,
    Plus,
    Minus,
    Star,
    Slash,
    LParen,
    RParen,
}

fn tokenize(s: &str) -> Result<Vec<Token>> {
    let chars: Vec<char> = s.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        match c {
            ' ' | '\t' => i += 1,
            '+' => {
                out.push(Token::Plus);
                i += 1;
            }
            '-' | '\u{2212}' => {
                out.push(Token::Minus);
                i += 1;
            }
            '*' | '\u{00b7}' => {
                out.push(Token::Star);
                i += 1;
            }
            '/' => {
                out.push(Token::Slash);
                i += 1;
            }
            '(' => {
                out.push(Token::LParen);
                i += 1;
            }
            ')' => {
                out.push(Token::RParen);
                i += 1;
            }
            '\u{221a}' => {
                out.push(Token::Sqrt);
                i += 1;
            }
            '0'..='9' | '.' => {
                let start = i;
                while i < chars.len() && (chars[i].is_ascii_digit() || chars[i] == '.') {
                    i += 1;
                }
                let text: String = chars[start..i].iter().collect();
                out.push(Token::Num(parse_decimal(&text)?));
            }
            c if c.is_ascii_alphabetic() => {
                let start = i;
                while i < chars.len() && chars[i].is_ascii_alphabetic() {
                    i += 1;
                }
                let word: String = chars[start..i].iter().collect();
                if word == "sqrt" {
                    out.push(Token::Sqrt);
                } else {
                    return Err(Error::Parse(format!("unknown identifier '{word}'")));
                }
            }
            other => return Err(Error::Parse(format!("unexpected character '{other}'"))),
        }
    }
    Ok(out)
}

fn parse_decimal(text: &str) -> Result<BigRational> {
    let bad = || Error::Parse(format!("bad number '{text}'"));
    let (int, frac) = match text.split_once('.') {
        Some((i, f)) => (i, f),
        None => (text, ""),
    };
    if frac.contains('.') || (int.is_empty() && frac.is_empty()) {
        return Err(bad());
    }
    let digits = format!("{int}{frac}");
    let n: BigInt = digits.parse().map_err(|_| bad())?;
    let den = BigInt::from(10u32).pow(frac.len() as u32);
    Ok(BigRational::new(n, den))
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn next(&mut self) -> Option<Token> {
        let t = self.tokens.get(self.pos).cloned();
        self.pos += 1;
        t
    }

    fn expect(&mut self, want: Token) -> Result<()> {
        match self.next() {
            Some(t) if t == want => Ok(()),
            other => Err(Error::Parse(format!("expected {want:?}, found {other:?}"))),
        }
    }

    fn expr(&mut self) -> Result<QuadSurd> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some(Token::Plus) => {
                    self.pos += 1;
                    acc = acc.try_add(&self.term()?)?;
                }
                Some(Token::Minus) => {
                    self.pos += 1;
                    acc = acc.try_sub(&self.term()?)?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<QuadSurd> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Some(Token::Star) => {
                    self.pos += 1;
                    acc = acc.try_mul(&self.factor()?)?;
                }
                Some(Token::Slash) => {
                    self.pos += 1;
                    acc = acc.try_div(&self.factor()?)?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn factor(&mut self) -> Result<QuadSurd> {
        match self.next() {
            Some(Token::Minus) => Ok(-self.factor()?),
            Some(Token::Plus) => self.factor(),
            Some(Token::Num(q)) => Ok(QuadSurd::from_rational(q)),
            Some(Token::LParen) => {
                let v = self.expr()?;
                self.expect(Token::RParen)?;
                Ok(v)
            }
            Some(Token::Sqrt) => {
                self.expect(Token::LParen)?;
                let arg = self.expr()?;
                self.expect(Token::RParen)?;
                let q = arg
                    .to_rational()
                    .ok_or_else(|| Error::Parse("sqrt of an irrational argument".into()))?;
                QuadSurd::sqrt_rational(&q).map_err(|e| Error::Parse(e.to_string()))
            }
            other => Err(Error::Parse(format!("unexpected token {other:?}"))),
        }
    }
}

/// Parse a surd expression such as `"sqrt(2) - 1"` or `"3/2 - 5/7 * sqrt(2)"`.
pub fn parse_surd(s: &str) -> Result<QuadSurd> {
    let tokens = tokenize(s)?;
    if tokens.is_empty() {
        return Err(Error::Parse("empty literal".into()));
    }
    let mut p = Parser { tokens, pos: 0 };
    let v = p.expr()?;
    if p.pos != p.tokens.len() {
        return Err(Error::Parse(format!("trailing input in '{s}'")));
    }
    Ok(v)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prints_canonical_forms() {
        let cases = [
            ("sqrt(2) - 1", "-1 + sqrt(2)"),
            ("(2 - sqrt(2))/2", "1 - 1/2 * sqrt(2)"),
            ("3 - 2*sqrt(2)", "3 - 2 * sqrt(2)"),
            ("-sqrt(3)", "-sqrt(3)"),
            ("2/5", "2/5"),
            ("sqrt(8)", "2 * sqrt(2)"),
            ("0", "0"),
            ("sqrt(3) - 3/2", "-3/2 + sqrt(3)"),
            ("0.25", "1/4"),
            ("sqrt(1/2)", "1/2 * sqrt(2)"),
        ];
        for (input, want) in cases {
            let v = parse_surd(input).unwrap();
            assert_eq!(format_surd(&v), want, "{input}");
            assert_eq!(parse_surd(want).unwrap(), v);
        }
    }

    #[test]
    fn rejects_garbage() {
        for s in [
            "",
            "sqrt(2",
            "x+1",
            "1 +",
            "sqrt(sqrt(2))",
            "1..2",
            "sqrt(2)+sqrt(3)",
        ] {
            assert!(parse_surd(s).is_err(), "{s}");
        }
    }
}
