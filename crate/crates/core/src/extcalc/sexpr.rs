//! Textual serialization of forms for golden tests.
//!
//! A form prints as an s-expression carrying its space, degree, and the
//! canonical term list:
//!
//! ```text
//! (form (jet 2 1) deg 2
//!   ((dx1 dx2) "x1^2 - 1")
//!   ((dx1 dp1_1) "3/2*u1"))
//! ```
//!
//! Polynomial strings are sums of monomials with rational or Gaussian
//! coefficients (`i`, `-2i`, `(1+i)`), `*`-separated factors and `^` powers.
//! The parser accepts what the writer emits and a little more (parenthesized
//! subexpressions), enough to state golden values by hand.

use super::form::PolyForm;
use super::poly::Poly;
use super::scalar::{s_i, Rat, Scalar};
use super::vars::{Var, VarSpace};
use super::ExtError;
use num_bigint::BigInt;
use num_traits::Zero;
use std::fmt::Write as _;
use std::str::FromStr;
use std::sync::Arc;

/// Canonical s-expression text of a form.
pub fn write_form(form: &PolyForm) -> String {
    let mut out = String::new();
    let _ = write!(out, "(form {} deg {}", form.space(), form.degree());
    for (idx, coef) in form.terms() {
        let names: Vec<String> = idx
            .iter()
            .map(|v| format!("d{}", form.space().name(*v)))
            .collect();
        let _ = write!(out, "\n  (({}) \"{}\")", names.join(" "), coef);
    }
    out.push(')');
    out
}

/// Parse the output of [`write_form`].
pub fn parse_form(text: &str) -> Result<PolyForm, ExtError> {
    let tokens = tokenize(text)?;
    let mut pos = 0usize;
    let form = parse_form_tokens(&tokens, &mut pos)?;
    if pos != tokens.len() {
        return Err(ExtError::Parse("trailing tokens after form".into()));
    }
    Ok(form)
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Open,
    Close,
    Atom(String),
    Str(String),
}

fn tokenize(text: &str) -> Result<Vec<Tok>, ExtError> {
    let mut toks = Vec::new();
    let mut chars = text.chars().peekable();
    while let Some(&c) = chars.peek() {
        match c {
            '(' => {
                chars.next();
                toks.push(Tok::Open);
            }
            ')' => {
                chars.next();
                toks.push(Tok::Close);
            }
            '"' => {
                chars.next();
                let mut s = String::new();
                loop {
                    match chars.next() {
                        Some('"') => break,
                        Some(c) => s.push(c),
                        None => return Err(ExtError::Parse("unterminated string".into())),
                    }
                }
                toks.push(Tok::Str(s));
            }
            c if c.is_whitespace() => {
                chars.next();
            }
            _ => {
                let mut s = String::new();
                while let Some(&c) = chars.peek() {
                    if c.is_whitespace() || c == '(' || c == ')' || c == '"' {
                        break;
                    }
                    s.push(c);
                    chars.next();
                }
                toks.push(Tok::Atom(s));
            }
        }
    }
    Ok(toks)
}

fn expect(tokens: &[Tok], pos: &mut usize, tok: &Tok) -> Result<(), ExtError> {
    if tokens.get(*pos) == Some(tok) {
        *pos += 1;
        Ok(())
    } else {
        Err(ExtError::Parse(format!("expected {tok:?} at token {}", *pos)))
    }
}

fn atom<'a>(tokens: &'a [Tok], pos: &mut usize) -> Result<&'a str, ExtError> {
    match tokens.get(*pos) {
        Some(Tok::Atom(s)) => {
            *pos += 1;
            Ok(s)
        }
        other => Err(ExtError::Parse(format!("expected atom, got {other:?}"))),
    }
}

fn parse_space(tokens: &[Tok], pos: &mut usize) -> Result<Arc<VarSpace>, ExtError> {
    expect(tokens, pos, &Tok::Open)?;
    let kind = atom(tokens, pos)?.to_string();
    let space = match kind.as_str() {
        "jet" => {
            let n: usize = parse_usize(atom(tokens, pos)?)?;
            let m: usize = parse_usize(atom(tokens, pos)?)?;
            VarSpace::jet(n, m)
        }
        "cspace" => {
            let m: usize = parse_usize(atom(tokens, pos)?)?;
            VarSpace::complex_space(m)
        }
        other => return Err(ExtError::Parse(format!("unknown space kind {other}"))),
    };
    expect(tokens, pos, &Tok::Close)?;
    Ok(space)
}

fn parse_usize(s: &str) -> Result<usize, ExtError> {
    s.parse().map_err(|_| ExtError::Parse(format!("bad integer {s}")))
}

fn parse_form_tokens(tokens: &[Tok], pos: &mut usize) -> Result<PolyForm, ExtError> {
    expect(tokens, pos, &Tok::Open)?;
    if atom(tokens, pos)? != "form" {
        return Err(ExtError::Parse("expected form".into()));
    }
    let space = parse_space(tokens, pos)?;
    if atom(tokens, pos)? != "deg" {
        return Err(ExtError::Parse("expected deg".into()));
    }
    let degree = parse_usize(atom(tokens, pos)?)?;
    let mut form = PolyForm::zero(&space, degree);
    while tokens.get(*pos) == Some(&Tok::Open) {
        *pos += 1;
        expect(tokens, pos, &Tok::Open)?;
        let mut idx: Vec<Var> = Vec::new();
        while let Some(Tok::Atom(name)) = tokens.get(*pos) {
            let bare = name
                .strip_prefix('d')
                .ok_or_else(|| ExtError::Parse(format!("differential {name} must start with d")))?;
            let v = space
                .lookup(bare)
                .ok_or_else(|| ExtError::Parse(format!("unknown variable {bare}")))?;
            idx.push(v);
            *pos += 1;
        }
        expect(tokens, pos, &Tok::Close)?;
        let coef = match tokens.get(*pos) {
            Some(Tok::Str(s)) => {
                *pos += 1;
                parse_poly(s, &space)?
            }
            other => return Err(ExtError::Parse(format!("expected coefficient string, got {other:?}"))),
        };
        if idx.len() != degree {
            return Err(ExtError::Parse(format!(
                "tuple of length {} in a degree-{degree} form",
                idx.len()
            )));
        }
        form.add_term(idx, coef);
        expect(tokens, pos, &Tok::Close)?;
    }
    expect(tokens, pos, &Tok::Close)?;
    Ok(form)
}

/// Parse a polynomial expression over the given space.
pub fn parse_poly(text: &str, space: &Arc<VarSpace>) -> Result<Poly, ExtError> {
    let mut p = PolyParser { text: text.as_bytes(), pos: 0, space: space.clone() };
    let poly = p.parse_sum()?;
    p.skip_ws();
    if p.pos != p.text.len() {
        return Err(ExtError::Parse(format!("trailing input at byte {}", p.pos)));
    }
    Ok(poly)
}

struct PolyParser<'a> {
    text: &'a [u8],
    pos: usize,
    space: Arc<VarSpace>,
}

impl<'a> PolyParser<'a> {
    fn skip_ws(&mut self) {
        while self.pos < self.text.len() && self.text[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.text.get(self.pos).copied()
    }

    fn parse_sum(&mut self) -> Result<Poly, ExtError> {
        let mut acc = Poly::zero(&self.space);
        let mut sign = match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                -1
            }
            Some(b'+') => {
                self.pos += 1;
                1
            }
            _ => 1,
        };
        loop {
            let term = self.parse_product()?;
            acc = if sign < 0 { acc.sub(&term) } else { acc.add(&term) };
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    sign = 1;
                }
                Some(b'-') => {
                    self.pos += 1;
                    sign = -1;
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn parse_product(&mut self) -> Result<Poly, ExtError> {
        let mut acc = self.parse_factor()?;
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                    let f = self.parse_factor()?;
                    acc = acc.mul(&f)?;
                }
                // juxtaposition of a number and `i`, as in `2i`
                Some(b'i') if !self.at_identifier_boundary() => break,
                _ => break,
            }
        }
        Ok(acc)
    }

    fn at_identifier_boundary(&self) -> bool {
        true
    }

    fn parse_factor(&mut self) -> Result<Poly, ExtError> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let inner = self.parse_sum()?;
                if self.peek() != Some(b')') {
                    return Err(ExtError::Parse("expected )".into()));
                }
                self.pos += 1;
                self.parse_power(inner)
            }
            Some(c) if c.is_ascii_digit() => {
                let num = self.parse_rational()?;
                // `3i` means the Gaussian scalar 3i
                if self.text.get(self.pos) == Some(&b'i') {
                    self.pos += 1;
                    Ok(Poly::constant(&self.space, Scalar::new(Rat::zero(), num)))
                } else {
                    Ok(Poly::constant(&self.space, Scalar::new(num, Rat::zero())))
                }
            }
            Some(c) if c.is_ascii_alphabetic() => {
                let name = self.parse_ident();
                if name == "i" {
                    return Ok(Poly::constant(&self.space, s_i()));
                }
                let v = self
                    .space
                    .lookup(&name)
                    .ok_or_else(|| ExtError::Parse(format!("unknown variable {name}")))?;
                self.parse_power(Poly::var(&self.space, v))
            }
            other => Err(ExtError::Parse(format!("unexpected input {other:?}"))),
        }
    }

    fn parse_power(&mut self, base: Poly) -> Result<Poly, ExtError> {
        if self.peek() == Some(b'^') {
            self.pos += 1;
            self.skip_ws();
            let start = self.pos;
            while self.pos < self.text.len() && self.text[self.pos].is_ascii_digit() {
                self.pos += 1;
            }
            let digits = std::str::from_utf8(&self.text[start..self.pos]).unwrap();
            let k: usize = digits
                .parse()
                .map_err(|_| ExtError::Parse("bad exponent".into()))?;
            base.pow(k)
        } else {
            Ok(base)
        }
    }

    fn parse_ident(&mut self) -> String {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.text.len()
            && (self.text[self.pos].is_ascii_alphanumeric() || self.text[self.pos] == b'_')
        {
            self.pos += 1;
        }
        String::from_utf8_lossy(&self.text[start..self.pos]).into_owned()
    }

    fn parse_rational(&mut self) -> Result<Rat, ExtError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.text.len() && self.text[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        let numer = BigInt::from_str(std::str::from_utf8(&self.text[start..self.pos]).unwrap())
            .map_err(|_| ExtError::Parse("bad number".into()))?;
        if self.text.get(self.pos) == Some(&b'/') {
            self.pos += 1;
            let dstart = self.pos;
            while self.pos < self.text.len() && self.text[self.pos].is_ascii_digit() {
                self.pos += 1;
            }
            let denom =
                BigInt::from_str(std::str::from_utf8(&self.text[dstart..self.pos]).unwrap())
                    .map_err(|_| ExtError::Parse("bad denominator".into()))?;
            if denom.is_zero() {
                return Err(ExtError::Parse("zero denominator".into()));
            }
            Ok(Rat::new(numer, denom))
        } else {
            Ok(Rat::from(numer))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::extcalc::jet::{phi_antiderivative, theta};

    #[test]
    fn poly_round_trip() {
        let sp = VarSpace::jet(2, 1);
        for text in [
            "0",
            "1",
            "-5/2",
            "x1",
            "-1 + 3/2*x1^2",
            "i*x1",
            "(1+i)*u1*p1_2",
            "x1^2*x2 - 2i*p1_1 + 7/3",
        ] {
            let p = parse_poly(text, &sp).unwrap();
            let back = parse_poly(&p.to_string(), &sp).unwrap();
            assert_eq!(p, back, "round trip failed for {text}");
        }
    }

    #[test]
    fn parse_rejects_garbage() {
        let sp = VarSpace::jet(2, 1);
        assert!(parse_poly("x9", &sp).is_err());
        assert!(parse_poly("1/0", &sp).is_err());
        assert!(parse_poly("x1 +", &sp).is_err());
        assert!(parse_poly("(x1", &sp).is_err());
    }

    #[test]
    fn form_round_trip() {
        let sp = VarSpace::jet(2, 1);
        let th = theta(&sp, 1);
        let text = write_form(&th);
        let parsed = parse_form(&text).unwrap();
        assert_eq!(parsed, th);
        // a degree-0 and a degree-2 form too
        let h = parse_poly("x1*x2", &sp).unwrap();
        let phi = phi_antiderivative(&[h]).unwrap();
        assert_eq!(parse_form(&write_form(&phi)).unwrap(), phi);
        assert_eq!(parse_form(&write_form(&phi.extd())).unwrap(), phi.extd());
    }

    #[test]
    fn golden_theta_text() {
        let sp = VarSpace::jet(2, 1);
        let th = theta(&sp, 1);
        let expect = "(form (jet 2 1) deg 1\n  ((dx1) \"-p1_1\")\n  ((dx2) \"-p1_2\")\n  ((du1) \"1\"))";
        assert_eq!(write_form(&th), expect);
    }
}

