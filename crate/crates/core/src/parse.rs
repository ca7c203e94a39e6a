//! Expression parser for the canonical textual forms: field elements, skew
//! polynomials, and left fractions over a fixed ring. Every string printed
//! by the library's Display impls re-parses to an equal object.

use crate::error::{CoreError, Result};
use crate::field::FieldElem;
use crate::fraction::LeftFraction;
use crate::scalar::{CoeffCtx, Scalar};
use crate::skewpoly::{SkewPoly, SkewRing};

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Int(i64),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    LBracket,
    RBracket,
}

struct Lexer {
    toks: Vec<(Tok, usize, usize)>,
    pos: usize,
}

fn lex(text: &str) -> Result<Lexer> {
    let mut toks = Vec::new();
    let mut line = 1usize;
    let mut col = 1usize;
    let mut chars = text.chars().peekable();
    while let Some(&c) = chars.peek() {
        let (l, co) = (line, col);
        let mut bump = |chars: &mut std::iter::Peekable<std::str::Chars>| {
            chars.next();
            col += 1;
        };
        match c {
            '\n' => {
                chars.next();
                line += 1;
                col = 1;
            }
            c if c.is_whitespace() => bump(&mut chars),
            '+' => {
                bump(&mut chars);
                toks.push((Tok::Plus, l, co));
            }
            '-' => {
                bump(&mut chars);
                toks.push((Tok::Minus, l, co));
            }
            '*' => {
                bump(&mut chars);
                toks.push((Tok::Star, l, co));
            }
            '/' => {
                bump(&mut chars);
                toks.push((Tok::Slash, l, co));
            }
            '^' => {
                bump(&mut chars);
                toks.push((Tok::Caret, l, co));
            }
            '(' => {
                bump(&mut chars);
                toks.push((Tok::LParen, l, co));
            }
            ')' => {
                bump(&mut chars);
                toks.push((Tok::RParen, l, co));
            }
            '[' => {
                bump(&mut chars);
                toks.push((Tok::LBracket, l, co));
            }
            ']' => {
                bump(&mut chars);
                toks.push((Tok::RBracket, l, co));
            }
            c if c.is_ascii_digit() => {
                let mut s = String::new();
                while let Some(&d) = chars.peek() {
                    if d.is_ascii_digit() {
                        s.push(d);
                        bump(&mut chars);
                    } else {
                        break;
                    }
                }
                let v = s.parse::<i64>().map_err(|_| CoreError::Parse {
                    line: l,
                    col: co,
                    msg: format!("integer literal out of range: {s}"),
                })?;
                toks.push((Tok::Int(v), l, co));
            }
            c if c.is_alphabetic() || c == '_' => {
                let mut s = String::new();
                while let Some(&d) = chars.peek() {
                    if d.is_alphanumeric() || d == '_' {
                        s.push(d);
                        bump(&mut chars);
                    } else {
                        break;
                    }
                }
                toks.push((Tok::Ident(s), l, co));
            }
            other => {
                return Err(CoreError::Parse {
                    line: l,
                    col: co,
                    msg: format!("unexpected character {other:?}"),
                })
            }
        }
    }
    Ok(Lexer { toks, pos: 0 })
}

impl Lexer {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _, _)| t)
    }

    fn loc(&self) -> (usize, usize) {
        self.toks
            .get(self.pos)
            .or_else(|| self.toks.last())
            .map(|&(_, l, c)| (l, c))
            .unwrap_or((1, 1))
    }

    fn next(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|(t, _, _)| t.clone());
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn err(&self, msg: impl Into<String>) -> CoreError {
        let (line, col) = self.loc();
        CoreError::Parse { line, col, msg: msg.into() }
    }

    fn expect(&mut self, t: Tok) -> Result<()> {
        if self.peek() == Some(&t) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.err(format!("expected {t:?}")))
        }
    }
}

struct Parser<'a> {
    lx: Lexer,
    ring: &'a SkewRing,
}

impl<'a> Parser<'a> {
    fn expr(&mut self) -> Result<LeftFraction> {
        let mut acc = if self.lx.peek() == Some(&Tok::Minus) {
            self.lx.next();
            self.term()?.neg()
        } else {
            self.term()?
        };
        loop {
            match self.lx.peek() {
                Some(Tok::Plus) => {
                    self.lx.next();
                    acc = acc.add(&self.term()?)?;
                }
                Some(Tok::Minus) => {
                    self.lx.next();
                    acc = acc.sub(&self.term()?)?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<LeftFraction> {
        let mut acc = self.factor()?;
        loop {
            match self.lx.peek() {
                Some(Tok::Star) => {
                    self.lx.next();
                    acc = acc.mul(&self.factor()?)?;
                }
                Some(Tok::Slash) => {
                    self.lx.next();
                    let d = self.factor()?;
                    if d.is_zero() {
                        return Err(self.lx.err("division by zero"));
                    }
                    acc = acc.mul(&d.inv()?)?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn factor(&mut self) -> Result<LeftFraction> {
        if self.lx.peek() == Some(&Tok::Minus) {
            self.lx.next();
            return Ok(self.factor()?.neg());
        }
        let base = self.atom()?;
        if self.lx.peek() == Some(&Tok::Caret) {
            self.lx.next();
            let neg = if self.lx.peek() == Some(&Tok::Minus) {
                self.lx.next();
                true
            } else {
                false
            };
            let e = match self.lx.next() {
                Some(Tok::Int(v)) => v,
                _ => return Err(self.lx.err("expected integer exponent after ^")),
            };
            let b = if neg {
                if base.is_zero() {
                    return Err(self.lx.err("zero to a negative power"));
                }
                base.inv()?
            } else {
                base
            };
            let mut acc = LeftFraction::one(self.ring);
            for _ in 0..e {
                acc = acc.mul(&b)?;
            }
            return Ok(acc);
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<LeftFraction> {
        let field = &self.ring.field;
        match self.lx.next() {
            Some(Tok::Int(v)) => Ok(LeftFraction::from_poly(self.ring.from_i64(v))),
            Some(Tok::LParen) => {
                let inner = self.expr()?;
                self.lx.expect(Tok::RParen)?;
                Ok(inner)
            }
            Some(Tok::Ident(name)) if name == "x" => {
                Ok(LeftFraction::from_poly(self.ring.x()))
            }
            Some(Tok::Ident(name)) => {
                // indexed family member t[i]
                if self.lx.peek() == Some(&Tok::LBracket) {
                    if field.indexed_family() != Some(name.as_str()) {
                        return Err(self.lx.err(format!("unknown indexed family {name}")));
                    }
                    self.lx.next();
                    let neg = if self.lx.peek() == Some(&Tok::Minus) {
                        self.lx.next();
                        true
                    } else {
                        false
                    };
                    let i = match self.lx.next() {
                        Some(Tok::Int(v)) => {
                            if neg {
                                -v
                            } else {
                                v
                            }
                        }
                        _ => return Err(self.lx.err("expected index")),
                    };
                    self.lx.expect(Tok::RBracket)?;
                    let e = FieldElem::indexed_var(field, i)?;
                    return Ok(LeftFraction::from_poly(self.ring.from_elem(e)));
                }
                // extension-field generator
                if name == "w" {
                    if let CoeffCtx::Ff(ctx) = field.coeff_ctx() {
                        if ctx.degree() > 1 {
                            let e = FieldElem::from_scalar(field, Scalar::Ff(ctx.gen()));
                            return Ok(LeftFraction::from_poly(self.ring.from_elem(e)));
                        }
                    }
                }
                match FieldElem::var(field, &name) {
                    Ok(e) => Ok(LeftFraction::from_poly(self.ring.from_elem(e))),
                    Err(_) => Err(self.lx.err(format!("unknown variable {name}"))),
                }
            }
            _ => Err(self.lx.err("expected an atom")),
        }
    }
}

/// Full expression over the ring, valued in Frac(R).
pub fn parse_fraction(ring: &SkewRing, text: &str) -> Result<LeftFraction> {
    let mut p = Parser { lx: lex(text)?, ring };
    let v = p.expr()?;
    if p.lx.peek().is_some() {
        return Err(p.lx.err("trailing input"));
    }
    Ok(v)
}

/// Expression that must reduce to a polynomial (constant denominator).
pub fn parse_poly(ring: &SkewRing, text: &str) -> Result<SkewPoly> {
    let f = parse_fraction(ring, text)?;
    match f.den().degree() {
        Some(0) => {
            let c = f.den().coeff(0).inv()?;
            Ok(f.num().scale_left(&c))
        }
        _ => Err(CoreError::Invalid(format!(
            "expression is not polynomial: denominator {}",
            f.den()
        ))),
    }
}

/// Expression with no x: a coefficient-field element.
pub fn parse_elem(ring: &SkewRing, text: &str) -> Result<FieldElem> {
    let f = parse_fraction(ring, text)?;
    let (dd, nd) = (f.den().degree(), f.num().degree());
    if dd.map_or(false, |d| d > 0) || nd.map_or(false, |d| d > 0) {
        return Err(CoreError::Invalid("expression must not involve x".into()));
    }
    f.num().coeff(0).div(&f.den().coeff(0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scenarios;

    #[test]
    fn defining_relation_from_text() {
        // SC-A: x*t - t*x = delta(t) = 1
        let ring = scenarios::sc_a();
        let v = parse_fraction(&ring, "x*t - t*x").unwrap();
        assert!(v.eq_frac(&LeftFraction::one(&ring)));
        // SC-B: x*t = (t+1)*x
        let ring = scenarios::sc_b();
        let lhs = parse_poly(&ring, "x*t").unwrap();
        let rhs = parse_poly(&ring, "(t+1)*x").unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn roundtrip_polys_and_fractions() {
        let ring = scenarios::sc_b();
        for text in ["(t)*x^2 + (t^2 + 4)*x + (3)", "(2*t + 1)", "x^3"] {
            let p = parse_poly(&ring, text).unwrap();
            let again = parse_poly(&ring, &p.to_string()).unwrap();
            assert_eq!(p, again);
        }
        let f = parse_fraction(&ring, "(1 + t*x)^-1 * (x^2 - t)").unwrap();
        let again = parse_fraction(&ring, &f.to_string()).unwrap();
        assert!(f.eq_frac(&again));
    }

    #[test]
    fn indexed_family_and_field_elems() {
        let ring = scenarios::sc_c();
        let p = parse_poly(&ring, "t[0]*t[1]*x^3").unwrap();
        let t0 = FieldElem::indexed_var(&ring.field, 0).unwrap();
        let t1 = FieldElem::indexed_var(&ring.field, 1).unwrap();
        assert_eq!(p, ring.monomial(3, t0.mul(&t1)));
        let e = parse_elem(&ring, "t[-1] + 2").unwrap();
        let again = parse_elem(&ring, &e.to_string()).unwrap();
        assert_eq!(e, again);
    }

    #[test]
    fn rational_coefficients() {
        let ring = scenarios::sc_a();
        let e = parse_elem(&ring, "1/2 * t + 3/4").unwrap();
        let again = parse_elem(&ring, &e.to_string()).unwrap();
        assert_eq!(e, again);
    }

    #[test]
    fn positioned_errors() {
        let ring = scenarios::sc_b();
        match parse_poly(&ring, "t + \n  ? 3") {
            Err(CoreError::Parse { line, col, .. }) => {
                assert_eq!((line, col), (2, 3));
            }
            other => panic!("expected parse error, got {other:?}"),
        }
        assert!(parse_poly(&ring, "nosuchvar + 1").is_err());
        assert!(parse_elem(&ring, "x + 1").is_err());
        assert!(parse_poly(&ring, "1/x").is_err());
    }

    #[test]
    fn extension_generator_roundtrip() {
        let ring = scenarios::f4_ring();
        let v = parse_elem(&ring, "w^2 + w").unwrap();
        // w^2 + w = 1 in F_4 with modulus w^2 + w + 1
        assert!(v.is_one());
    }
}
