//! Reduced rational functions in the coupling symbol `a`.
//!
//! Canonical form: numerator and denominator are integer-coefficient
//! polynomials, coprime as polynomials, with integer contents sharing no
//! common factor and a positive leading denominator coefficient. The zero
//! function is 0/1. Canonical form makes structural equality coincide with
//! value equality, which the golden regression tests rely on.

use std::collections::HashMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::poly::RatPoly;
use crate::rational::{parse_rational, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RatFunc {
    num: RatPoly,
    den: RatPoly,
}

impl RatFunc {
    /// Canonical reduced form of num/den.
    pub fn normalize(num: RatPoly, den: RatPoly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZeroPoly);
        }
        if num.is_zero() {
            return Ok(RatFunc {
                num: RatPoly::zero(),
                den: RatPoly::one(),
            });
        }
        let g = num.gcd(&den);
        let num = num.div_exact(&g)?;
        let den = den.div_exact(&g)?;
        // Rescale so both polynomials have integer coefficients with coprime
        // contents, denominator leading coefficient positive.
        let cn = num.content();
        let cd = den.content();
        let ratio = cn / cd; // positive
        let num = num.scale(&(num.content().recip() * Rational::from_integer(ratio.numer().clone())));
        let den = den.scale(&(den.content().recip() * Rational::from_integer(ratio.denom().clone())));
        if den.leading().unwrap().is_negative() {
            Ok(RatFunc {
                num: num.neg(),
                den: den.neg(),
            })
        } else {
            Ok(RatFunc { num, den })
        }
    }

    pub fn zero() -> Self {
        RatFunc {
            num: RatPoly::zero(),
            den: RatPoly::one(),
        }
    }

    pub fn one() -> Self {
        RatFunc {
            num: RatPoly::one(),
            den: RatPoly::one(),
        }
    }

    pub fn from_poly(p: RatPoly) -> Self {
        RatFunc::normalize(p, RatPoly::one()).expect("unit denominator")
    }

    pub fn from_rational(r: Rational) -> Self {
        RatFunc::from_poly(RatPoly::constant(r))
    }

    pub fn from_i64(n: i64) -> Self {
        RatFunc::from_rational(Rational::from_integer(BigInt::from(n)))
    }

    /// The coupling symbol `a`.
    pub fn var() -> Self {
        RatFunc::from_poly(RatPoly::var())
    }

    pub fn num(&self) -> &RatPoly {
        &self.num
    }

    pub fn den(&self) -> &RatPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num == RatPoly::one() && self.den == RatPoly::one()
    }

    pub fn add(&self, other: &Self) -> Self {
        let num = self
            .num
            .mul(&other.den)
            .add(&other.num.mul(&self.den));
        let den = self.den.mul(&other.den);
        RatFunc::normalize(num, den).expect("nonzero denominator product")
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        RatFunc {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        RatFunc::normalize(self.num.mul(&other.num), self.den.mul(&other.den))
            .expect("nonzero denominator product")
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        if other.is_zero() {
            return Err(Error::DivisionByZeroRatFunc);
        }
        RatFunc::normalize(self.num.mul(&other.den), self.den.mul(&other.num))
    }

    pub fn recip(&self) -> Result<Self> {
        RatFunc::one().div(self)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        RatFunc::normalize(self.num.scale(c), self.den.clone()).expect("nonzero denominator")
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = RatFunc::one();
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    /// True when the denominator vanishes at a0.
    pub fn has_pole_at(&self, a0: &Rational) -> bool {
        self.den.sign_at(a0) == 0
    }

    /// Exact value at a0; errors at poles.
    pub fn eval(&self, a0: &Rational) -> Result<Rational> {
        let dv = self.den.eval(a0);
        if dv.is_zero() {
            return Err(Error::Pole {
                point: crate::rational::render_rational(a0),
                context: self.render(),
            });
        }
        Ok(self.num.eval(a0) / dv)
    }

    /// Canonical text form, ascending powers, integer coefficients:
    /// `(1+a)/(2*a)`, `(1+a)/2`, `2*a`, `0`.
    pub fn render(&self) -> String {
        let num_str = self.num.render_ascending('a');
        if self.den == RatPoly::one() {
            return num_str;
        }
        let num_wrapped = if self.num.coeffs().iter().filter(|c| !c.is_zero()).count() > 1 {
            format!("({num_str})")
        } else {
            num_str
        };
        let den_str = self.den.render_ascending('a');
        let den_multi_term = self.den.coeffs().iter().filter(|c| !c.is_zero()).count() > 1;
        let den_is_product = self.den.degree() >= 1 && !self.den.leading().unwrap().is_one();
        let den_wrapped = if den_multi_term || den_is_product {
            format!("({den_str})")
        } else {
            den_str
        };
        format!("{num_wrapped}/{den_wrapped}")
    }
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render())
    }
}

/// Distinct identifiers other than `a` appearing in an expression, in order
/// of first appearance.
pub fn free_symbols(input: &str, field: &str) -> Result<Vec<String>> {
    let tokens = tokenize(input, field)?;
    let mut out: Vec<String> = Vec::new();
    for t in tokens {
        if let Token::Ident(name) = t {
            if name != "a" && !out.contains(&name) {
                out.push(name);
            }
        }
    }
    Ok(out)
}

/// Parses an arithmetic expression over integers, decimals, the symbol `a`,
/// and any identifiers bound to rational values. Supports `+ - * / ^`,
/// parentheses, and implicit multiplication by adjacency (`2a^2`).
pub fn parse_ratfunc(
    input: &str,
    field: &str,
    bindings: &HashMap<String, Rational>,
) -> Result<RatFunc> {
    let tokens = tokenize(input, field)?;
    let mut parser = Parser {
        tokens,
        pos: 0,
        field,
        bindings,
    };
    let value = parser.expr()?;
    if parser.pos != parser.tokens.len() {
        return Err(Error::parse(
            field,
            format!("unexpected trailing input at token {}", parser.pos),
        ));
    }
    Ok(value)
}

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Number(Rational),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

fn tokenize(input: &str, field: &str) -> Result<Vec<Token>> {
    let mut tokens = Vec::new();
    let bytes = input.as_bytes();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        match c {
            ' ' | '\t' => i += 1,
            '+' => {
                tokens.push(Token::Plus);
                i += 1;
            }
            '-' => {
                tokens.push(Token::Minus);
                i += 1;
            }
            '*' => {
                tokens.push(Token::Star);
                i += 1;
            }
            '/' => {
                tokens.push(Token::Slash);
                i += 1;
            }
            '^' => {
                tokens.push(Token::Caret);
                i += 1;
            }
            '(' => {
                tokens.push(Token::LParen);
                i += 1;
            }
            ')' => {
                tokens.push(Token::RParen);
                i += 1;
            }
            '0'..='9' | '.' => {
                let start = i;
                while i < bytes.len() && matches!(bytes[i] as char, '0'..='9' | '.') {
                    i += 1;
                }
                let lit = &input[start..i];
                let value = parse_rational(lit, field)?;
                tokens.push(Token::Number(value));
            }
            'a'..='z' | 'A'..='Z' | '_' => {
                let start = i;
                while i < bytes.len()
                    && matches!(bytes[i] as char, 'a'..='z' | 'A'..='Z' | '0'..='9' | '_')
                {
                    i += 1;
                }
                tokens.push(Token::Ident(input[start..i].to_string()));
            }
            other => {
                return Err(Error::parse(field, format!("unexpected character `{other}`")));
            }
        }
    }
    Ok(tokens)
}

struct Parser<'a> {
    tokens: Vec<Token>,
    pos: usize,
    field: &'a str,
    bindings: &'a HashMap<String, Rational>,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn expr(&mut self) -> Result<RatFunc> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some(Token::Plus) => {
                    self.pos += 1;
                    acc = acc.add(&self.term()?);
                }
                Some(Token::Minus) => {
                    self.pos += 1;
                    acc = acc.sub(&self.term()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<RatFunc> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Some(Token::Star) => {
                    self.pos += 1;
                    acc = acc.mul(&self.factor()?);
                }
                Some(Token::Slash) => {
                    self.pos += 1;
                    let rhs = self.factor()?;
                    acc = acc.div(&rhs)?;
                }
                // implicit multiplication: `2a`, `2(a+1)`, `a(1+a)`
                Some(Token::Ident(_)) | Some(Token::LParen) | Some(Token::Number(_)) => {
                    acc = acc.mul(&self.factor()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn factor(&mut self) -> Result<RatFunc> {
        match self.peek() {
            Some(Token::Minus) => {
                self.pos += 1;
                Ok(self.factor()?.neg())
            }
            Some(Token::Plus) => {
                self.pos += 1;
                self.factor()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<RatFunc> {
        let base = self.atom()?;
        if matches!(self.peek(), Some(Token::Caret)) {
            self.pos += 1;
            let negative = if matches!(self.peek(), Some(Token::Minus)) {
                self.pos += 1;
                true
            } else {
                false
            };
            let exp = match self.peek() {
                Some(Token::Number(r)) if r.denom().is_one() && !r.is_negative() => {
                    let e: u32 = r.numer().to_string().parse().map_err(|_| {
                        Error::parse(self.field, "exponent too large")
                    })?;
                    self.pos += 1;
                    e
                }
                _ => return Err(Error::parse(self.field, "expected integer exponent after ^")),
            };
            let p = base.pow(exp);
            if negative {
                return p.recip();
            }
            return Ok(p);
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<RatFunc> {
        match self.peek().cloned() {
            Some(Token::Number(r)) => {
                self.pos += 1;
                Ok(RatFunc::from_rational(r))
            }
            Some(Token::Ident(name)) => {
                self.pos += 1;
                if name == "a" {
                    Ok(RatFunc::var())
                } else if let Some(value) = self.bindings.get(&name) {
                    Ok(RatFunc::from_rational(value.clone()))
                } else {
                    Err(Error::parse(
                        self.field,
                        format!("unknown symbol `{name}` (only `a` and bound names allowed)"),
                    ))
                }
            }
            Some(Token::LParen) => {
                self.pos += 1;
                let inner = self.expr()?;
                match self.peek() {
                    Some(Token::RParen) => {
                        self.pos += 1;
                        Ok(inner)
                    }
                    _ => Err(Error::parse(self.field, "missing closing parenthesis")),
                }
            }
            other => Err(Error::parse(
                self.field,
                format!("expected number, symbol or parenthesis, found {other:?}"),
            )),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{rat, rat_i64};

    fn parse(s: &str) -> RatFunc {
        parse_ratfunc(s, "test", &HashMap::new()).unwrap()
    }

    #[test]
    fn normalize_cancels_gcd() {
        // (2a^2 + 2a) / (4a) -> (1+a)/2
        let num = RatPoly::from_i64(&[0, 2, 2]);
        let den = RatPoly::from_i64(&[0, 4]);
        let f = RatFunc::normalize(num, den).unwrap();
        assert_eq!(f.render(), "(1+a)/2");
    }

    #[test]
    fn normalize_zero_numerator() {
        let f = RatFunc::normalize(RatPoly::zero(), RatPoly::from_i64(&[3, 1])).unwrap();
        assert_eq!(f, RatFunc::zero());
        assert_eq!(f.render(), "0");
    }

    #[test]
    fn normalize_difference_of_squares() {
        let f = RatFunc::normalize(RatPoly::from_i64(&[-1, 0, 1]), RatPoly::from_i64(&[-1, 1]))
            .unwrap();
        assert_eq!(f.render(), "1+a");
    }

    #[test]
    fn normalize_zero_denominator_errors() {
        assert!(matches!(
            RatFunc::normalize(RatPoly::one(), RatPoly::zero()),
            Err(Error::DivisionByZeroPoly)
        ));
    }

    #[test]
    fn normalize_fixes_denominator_sign() {
        let f = RatFunc::normalize(RatPoly::from_i64(&[1]), RatPoly::from_i64(&[0, -2])).unwrap();
        assert_eq!(f.render(), "-1/(2*a)");
    }

    #[test]
    fn normalize_is_idempotent() {
        let f = parse("(2a^2+2a)/(4a)");
        let again = RatFunc::normalize(f.num().clone(), f.den().clone()).unwrap();
        assert_eq!(f, again);
    }

    #[test]
    fn arith_examples() {
        let half_over_a = parse("1/(2a)");
        assert_eq!(half_over_a.add(&half_over_a).render(), "1/a");

        let x = parse("(a+1)/a");
        let y = parse("a/(a+1)");
        assert!(x.mul(&y).is_one());

        let h = parse("3*(a+1)/(2*(a+2)*a)");
        assert!(h.sub(&h).is_zero());
    }

    #[test]
    fn div_by_zero_errors() {
        assert!(matches!(
            RatFunc::one().div(&RatFunc::zero()),
            Err(Error::DivisionByZeroRatFunc)
        ));
    }

    #[test]
    fn eval_examples() {
        let f = parse("(a+1)/(2a)");
        assert_eq!(f.eval(&rat_i64(1)).unwrap(), rat_i64(1));
        let g = parse("1/(2a)");
        assert_eq!(g.eval(&rat(1, 2)).unwrap(), rat_i64(1));
        let h = parse("1/(2a+2)");
        assert!(matches!(h.eval(&rat_i64(-1)), Err(Error::Pole { .. })));
    }

    #[test]
    fn render_parse_round_trip() {
        for s in [
            "(1+a)/(2*a)",
            "(1+a)/2",
            "2*a",
            "0",
            "-1/(2*a)",
            "(-10-6*a)/(2*a+4*a^2)",
            "(1+a)/a",
        ] {
            let f = parse(s);
            assert_eq!(parse(&f.render()), f, "round trip through {s}");
        }
    }

    #[test]
    fn parser_handles_implicit_multiplication() {
        assert_eq!(parse("2a^2"), parse("2*a^2"));
        assert_eq!(parse("2a(a+1)"), parse("2*a*(a+1)"));
        let mut binds = HashMap::new();
        binds.insert("c".to_string(), rat(3, 2));
        assert_eq!(
            parse_ratfunc("c(a+1)/(2(a+2)a)", "t", &binds).unwrap(),
            parse_ratfunc("c*(a+1)/(2*(a+2)*a)", "t", &binds).unwrap()
        );
    }

    #[test]
    fn parser_rejects_unknown_symbol() {
        let err = parse_ratfunc("2*q", "first_row", &HashMap::new()).unwrap_err();
        assert!(err.to_string().contains('q'));
    }

    #[test]
    fn parser_uses_bindings() {
        let mut binds = HashMap::new();
        binds.insert("g".to_string(), rat(1, 2));
        let f = parse_ratfunc("2*g*a", "line", &binds).unwrap();
        assert_eq!(f.render(), "a");
    }
}
