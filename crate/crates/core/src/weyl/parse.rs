//! ASCII syntax for Weyl algebra elements, e.g. `3*x1^2*d1 - 1/2*d2^3`.
//!
//! Factors inside a term are multiplied left to right, so `d1*x1` parses to
//! its normal form `x1*d1 + 1`.

use std::iter::Peekable;
use std::str::Chars;

use num_traits::One;

use super::WeylElement;
use crate::error::{Error, Result};
use crate::linalg::{parse_q, Q};

pub fn parse_element(n: usize, text: &str) -> Result<WeylElement> {
    let mut p = Parser { chars: text.chars().peekable(), n, text };
    let mut acc = WeylElement::zero(n)?;
    p.skip_ws();
    let mut sign = Q::one();
    if p.eat('-') {
        sign = -sign;
    } else {
        p.eat('+');
    }
    loop {
        let term = p.term()?;
        acc = acc.add(&term.scale(&sign))?;
        p.skip_ws();
        match p.chars.next() {
            None => break,
            Some('+') => sign = Q::one(),
            Some('-') => sign = -Q::one(),
            Some(c) => return Err(p.err(&format!("unexpected character {c:?}"))),
        }
    }
    Ok(acc)
}

struct Parser<'a> {
    chars: Peekable<Chars<'a>>,
    n: usize,
    text: &'a str,
}

impl Parser<'_> {
    fn err(&self, msg: &str) -> Error {
        Error::Parse(format!("{msg} in {:?}", self.text))
    }

    fn skip_ws(&mut self) {
        while self.chars.peek().is_some_and(|c| c.is_whitespace()) {
            self.chars.next();
        }
    }

    fn eat(&mut self, c: char) -> bool {
        self.skip_ws();
        if self.chars.peek() == Some(&c) {
            self.chars.next();
            true
        } else {
            false
        }
    }

    fn digits(&mut self) -> String {
        let mut s = String::new();
        while let Some(&c) = self.chars.peek() {
            if c.is_ascii_digit() {
                s.push(c);
                self.chars.next();
            } else {
                break;
            }
        }
        s
    }

    fn term(&mut self) -> Result<WeylElement> {
        let mut acc = self.factor()?;
        while self.eat('*') {
            let f = self.factor()?;
            acc = acc.multiply(&f)?;
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<WeylElement> {
        self.skip_ws();
        match self.chars.peek().copied() {
            Some(c) if c.is_ascii_digit() => {
                let mut num = self.digits();
                if self.chars.peek() == Some(&'/') {
                    self.chars.next();
                    let den = self.digits();
                    if den.is_empty() {
                        return Err(self.err("missing denominator"));
                    }
                    num = format!("{num}/{den}");
                }
                WeylElement::constant(self.n, parse_q(&num)?)
            }
            Some(c @ ('x' | 'd')) => {
                self.chars.next();
                let idx: usize = self.digits().parse().map_err(|_| self.err("missing variable index"))?;
                let base = if c == 'x' { WeylElement::x(self.n, idx)? } else { WeylElement::d(self.n, idx)? };
                let exp = if self.eat('^') {
                    self.skip_ws();
                    self.digits().parse::<u32>().map_err(|_| self.err("bad exponent"))?
                } else {
                    1
                };
                base.pow(exp)
            }
            other => Err(self.err(&format!("expected a factor, found {other:?}"))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_garbage() {
        assert!(parse_element(2, "x1 +").is_err());
        assert!(parse_element(2, "y1").is_err());
        assert!(parse_element(2, "x3").is_err());
        assert!(parse_element(2, "1/").is_err());
    }

    #[test]
    fn reorders_factors_into_normal_form() {
        let a = parse_element(1, "d1*x1").unwrap();
        assert_eq!(a, parse_element(1, "x1*d1 + 1").unwrap());
        assert_eq!(parse_element(1, "-x1 + x1").unwrap(), WeylElement::zero(1).unwrap());
    }
}
