//! Text form of ring elements.
//!
//! ```text
//! expr  := ['-'] term (('+' | '-') term)*
//! term  := unary (('*' | '/') unary)*
//! unary := '-' unary | power
//! power := atom ('^' uint)?
//! atom  := int | ident | '(' expr ')'
//! ```
//!
//! Identifiers resolve to body variables, generators, or declared
//! denominators (which stand for their polynomial). Division requires an
//! invertible even divisor.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed};

use super::elem::{Mono, SuperElem};
use super::poly::{Poly, RatFunc};
use super::ring::{Atom, SuperRingSpec};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Sym(char),
}

fn tokenize(src: &str) -> Result<Vec<(Tok, usize)>> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let col = i + 1;
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let s: String = chars[start..i].iter().collect();
            out.push((Tok::Int(s.parse().expect("digits")), col));
        } else if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_' || chars[i] == '\'') {
                i += 1;
            }
            out.push((Tok::Ident(chars[start..i].iter().collect()), col));
        } else if "+-*/^()".contains(c) {
            out.push((Tok::Sym(c), col));
            i += 1;
        } else {
            return Err(Error::parse(col, format!("unexpected character `{c}`")));
        }
    }
    Ok(out)
}

struct Parser<'a> {
    ring: &'a Arc<SuperRingSpec>,
    toks: Vec<(Tok, usize)>,
    pos: usize,
    end_col: usize,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _)| t)
    }

    fn col(&self) -> usize {
        self.toks.get(self.pos).map(|(_, c)| *c).unwrap_or(self.end_col)
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Sym(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<SuperElem> {
        let neg = self.eat('-');
        let mut acc = self.term()?;
        if neg {
            acc = acc.neg();
        }
        loop {
            if self.eat('+') {
                acc = &acc + &self.term()?;
            } else if self.eat('-') {
                acc = &acc - &self.term()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<SuperElem> {
        let mut acc = self.unary()?;
        loop {
            if self.eat('*') {
                acc = &acc * &self.unary()?;
            } else if self.peek() == Some(&Tok::Sym('/')) {
                let col = self.col();
                self.pos += 1;
                let d = self.unary()?;
                let inv = d.invert().map_err(|e| Error::parse(col, format!("cannot divide: {e}")))?;
                acc = &acc * &inv;
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<SuperElem> {
        if self.eat('-') {
            Ok(self.unary()?.neg())
        } else {
            self.power()
        }
    }

    fn power(&mut self) -> Result<SuperElem> {
        let base = self.atom()?;
        if !self.eat('^') {
            return Ok(base);
        }
        let col = self.col();
        match self.peek().cloned() {
            Some(Tok::Int(n)) => {
                self.pos += 1;
                let k: u32 = n.try_into().map_err(|_| Error::parse(col, "exponent too large"))?;
                Ok(base.pow(k))
            }
            _ => Err(Error::parse(col, "expected a nonnegative integer exponent")),
        }
    }

    fn atom(&mut self) -> Result<SuperElem> {
        let col = self.col();
        match self.peek().cloned() {
            Some(Tok::Int(n)) => {
                self.pos += 1;
                Ok(SuperElem::rational(self.ring, BigRational::from_integer(n)))
            }
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                if let Some(a) = self.ring.atom(&name) {
                    Ok(SuperElem::from_atom(self.ring, a))
                } else if let Some(i) = self.ring.denominator_index(&name) {
                    Ok(SuperElem::denominator(self.ring, i))
                } else {
                    Err(Error::Parse { line: 1, column: col, message: format!("unknown name `{name}`") })
                }
            }
            Some(Tok::Sym('(')) => {
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat(')') {
                    return Err(Error::parse(self.col(), "expected `)`"));
                }
                Ok(e)
            }
            Some(Tok::Sym(c)) => Err(Error::parse(col, format!("unexpected `{c}`"))),
            None => Err(Error::parse(col, "unexpected end of input")),
        }
    }
}

/// Parses an element of `ring`.
pub fn parse(ring: &Arc<SuperRingSpec>, src: &str) -> Result<SuperElem> {
    let toks = tokenize(src)?;
    if toks.is_empty() {
        return Err(Error::parse(1, "empty expression"));
    }
    let mut p = Parser { ring, toks, pos: 0, end_col: src.chars().count() + 1 };
    let e = p.expr()?;
    if p.pos != p.toks.len() {
        return Err(Error::parse(p.col(), "trailing input"));
    }
    Ok(e)
}

fn fmt_rational(q: &BigRational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Prints a polynomial in the given variable names, highest lex term first.
pub fn format_poly(p: &Poly, names: &[String]) -> String {
    if p.is_zero() {
        return "0".into();
    }
    let mut out = String::new();
    let terms: Vec<_> = p.terms().collect();
    for (k, (e, c)) in terms.iter().rev().enumerate() {
        let vars: Vec<String> = e
            .iter()
            .enumerate()
            .filter(|(_, &x)| x > 0)
            .map(|(i, &x)| if x == 1 { names[i].clone() } else { format!("{}^{x}", names[i]) })
            .collect();
        let neg = c.is_negative();
        let a = c.abs();
        if k == 0 {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        if vars.is_empty() {
            out.push_str(&fmt_rational(&a));
        } else if a.is_one() {
            out.push_str(&vars.join("*"));
        } else {
            out.push_str(&fmt_rational(&a));
            out.push('*');
            out.push_str(&vars.join("*"));
        }
    }
    out
}

fn format_coeff(c: &RatFunc, names: &[String]) -> String {
    let num = format_poly(c.numer(), names);
    if c.denom().is_one() {
        format!("({num})")
    } else {
        format!("({num})/({})", format_poly(c.denom(), names))
    }
}

fn format_mono(ring: &SuperRingSpec, m: &Mono) -> Vec<String> {
    let mut out: Vec<String> = m.odd_slots().map(|s| ring.atom_name(Atom::Odd(s)).to_string()).collect();
    for &(g, e) in &m.even {
        let name = ring.atom_name(Atom::Even(g as usize));
        out.push(if e == 1 { name.to_string() } else { format!("{name}^{e}") });
    }
    out
}

fn format_numerator(e: &SuperElem) -> (String, usize) {
    let ring = e.ring();
    let names = ring.body_vars();
    let mut out = String::new();
    let mut count = 0;
    for (m, c) in e.terms() {
        let factors = format_mono(ring, m);
        let (neg, coeff) = match c.constant_value() {
            Some(q) => {
                let neg = q.is_negative();
                let a = q.abs();
                let s = if a.is_one() && !factors.is_empty() {
                    None
                } else if a.is_integer() {
                    Some(fmt_rational(&a))
                } else {
                    Some(format!("({})", fmt_rational(&a)))
                };
                (neg, s)
            }
            None => (false, Some(format_coeff(c, names))),
        };
        if count == 0 {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        let mut parts: Vec<String> = coeff.into_iter().collect();
        parts.extend(factors);
        out.push_str(&parts.join("*"));
        count += 1;
    }
    (out, count)
}

impl fmt::Display for SuperElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let (num, count) = format_numerator(self);
        if !self.has_denominator() {
            return f.write_str(&num);
        }
        if count > 1 {
            write!(f, "({num})")?;
        } else {
            f.write_str(&num)?;
        }
        for (i, &k) in self.den().iter().enumerate() {
            if k > 0 {
                write!(f, " / {}^{k}", self.ring().denominators()[i].name)?;
            }
        }
        Ok(())
    }
}

impl SuperElem {
    pub fn parse(ring: &Arc<SuperRingSpec>, src: &str) -> Result<SuperElem> {
        parse(ring, src)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::supercore::Parity;

    fn ring() -> Arc<SuperRingSpec> {
        SuperRingSpec::builder().body("t").odd("th1").odd("th2").poly("x", Parity::Even).build().unwrap()
    }

    #[test]
    fn round_trips() {
        let r = ring();
        for s in ["0", "1", "-th1*th2", "(1/2)*th1 + (t^2 + 1)/(t - 3)*th2*x^2", "th2*th1 - 7", "x/(t+1)"] {
            let e = parse(&r, s).unwrap();
            let back = parse(&r, &e.to_string()).unwrap();
            assert_eq!(e, back, "{s} printed as {e}");
        }
    }

    #[test]
    fn koszul_sign_in_parse() {
        let r = ring();
        assert_eq!(parse(&r, "th2*th1").unwrap(), parse(&r, "-th1*th2").unwrap());
        assert!(parse(&r, "th1*th1").unwrap().is_zero());
    }

    #[test]
    fn denominators_round_trip() {
        let r = ring();
        let d = parse(&r, "x^2 + t").unwrap();
        let r2 = r.with_denominators([("D".to_string(), d)]).unwrap();
        let e = parse(&r2, "(th1 + x)/D^2 - 1/D").unwrap();
        assert!(e.has_denominator());
        let printed = e.to_string();
        assert!(printed.contains("/ D^2"), "{printed}");
        assert_eq!(parse(&r2, &printed).unwrap(), e);
        assert_eq!(parse(&r2, "D/D").unwrap(), SuperElem::one(&r2));
    }

    #[test]
    fn errors_carry_columns() {
        let r = ring();
        match parse(&r, "t + zz") {
            Err(Error::Parse { column, .. }) => assert_eq!(column, 5),
            other => panic!("{other:?}"),
        }
        assert!(matches!(parse(&r, "1/th1"), Err(Error::Parse { column: 2, .. })));
        assert!(matches!(parse(&r, "(t"), Err(Error::Parse { .. })));
        assert!(matches!(parse(&r, "t^x"), Err(Error::Parse { .. })));
    }
}
