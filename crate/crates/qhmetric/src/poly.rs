//! Dense univariate polynomials over exact rationals.
//!
//! Coefficients are stored in ascending degree with no trailing zeros, so the
//! zero polynomial is the empty list and `degree()` is -1 for it.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::{render_rational, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RatPoly {
    coeffs: Vec<Rational>,
}

impl RatPoly {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().map_or(false, |c| c.is_zero()) {
            coeffs.pop();
        }
        RatPoly { coeffs }
    }

    pub fn zero() -> Self {
        RatPoly { coeffs: vec![] }
    }

    pub fn one() -> Self {
        RatPoly::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        RatPoly::new(vec![c])
    }

    /// The monomial c * x^k.
    pub fn monomial(c: Rational, k: usize) -> Self {
        if c.is_zero() {
            return RatPoly::zero();
        }
        let mut coeffs = vec![Rational::zero(); k + 1];
        coeffs[k] = c;
        RatPoly { coeffs }
    }

    /// The indeterminate x.
    pub fn var() -> Self {
        RatPoly::monomial(Rational::one(), 1)
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        RatPoly::new(
            coeffs
                .iter()
                .map(|&c| Rational::from_integer(BigInt::from(c)))
                .collect(),
        )
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> Rational {
        self.coeffs.get(k).cloned().unwrap_or_else(Rational::zero)
    }

    /// -1 for the zero polynomial.
    pub fn degree(&self) -> i64 {
        self.coeffs.len() as i64 - 1
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn leading(&self) -> Option<&Rational> {
        self.coeffs.last()
    }

    pub fn neg(&self) -> Self {
        RatPoly {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for k in 0..n {
            out.push(self.coeff(k) + other.coeff(k));
        }
        RatPoly::new(out)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return RatPoly::zero();
        }
        let mut out = vec![Rational::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        RatPoly::new(out)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return RatPoly::zero();
        }
        RatPoly {
            coeffs: self.coeffs.iter().map(|x| x * c).collect(),
        }
    }

    /// Multiply by x^k.
    pub fn shift_up(&self, k: usize) -> Self {
        if self.is_zero() {
            return RatPoly::zero();
        }
        let mut coeffs = vec![Rational::zero(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        RatPoly { coeffs }
    }

    pub fn div_rem(&self, divisor: &Self) -> Result<(Self, Self)> {
        if divisor.is_zero() {
            return Err(Error::DivisionByZeroPoly);
        }
        let dlead = divisor.leading().unwrap().clone();
        let ddeg = divisor.coeffs.len() - 1;
        let mut rem = self.coeffs.clone();
        let mut quot = vec![Rational::zero(); self.coeffs.len().saturating_sub(ddeg)];
        while rem.len() > ddeg || (rem.len() == ddeg + 1 && ddeg == 0 && !rem.is_empty()) {
            if rem.len() < ddeg + 1 {
                break;
            }
            let k = rem.len() - 1 - ddeg;
            let factor = rem.last().unwrap() / &dlead;
            if !factor.is_zero() {
                for (j, d) in divisor.coeffs.iter().enumerate() {
                    let v = &factor * d;
                    rem[k + j] -= v;
                }
                quot[k] = factor;
            }
            rem.pop();
        }
        Ok((RatPoly::new(quot), RatPoly::new(rem)))
    }

    /// Exact division; errors if the remainder is nonzero.
    pub fn div_exact(&self, divisor: &Self) -> Result<Self> {
        let (q, r) = self.div_rem(divisor)?;
        if !r.is_zero() {
            return Err(Error::Numerical(format!(
                "polynomial division left remainder of degree {}",
                r.degree()
            )));
        }
        Ok(q)
    }

    /// Monic gcd by the Euclidean algorithm over the rationals.
    pub fn gcd(&self, other: &Self) -> Self {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b).expect("nonzero divisor");
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn monic(&self) -> Self {
        match self.leading() {
            None => RatPoly::zero(),
            Some(l) => {
                let inv = l.recip();
                self.scale(&inv)
            }
        }
    }

    pub fn derivative(&self) -> Self {
        if self.coeffs.len() <= 1 {
            return RatPoly::zero();
        }
        RatPoly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * Rational::from_integer(BigInt::from(k)))
                .collect(),
        )
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    /// Positive gcd of all coefficients (as a rational), 0 for the zero poly.
    pub fn content(&self) -> Rational {
        let mut num_gcd = BigInt::zero();
        let mut den_lcm = BigInt::one();
        for c in &self.coeffs {
            num_gcd = num_gcd.gcd(c.numer());
            den_lcm = den_lcm.lcm(c.denom());
        }
        if num_gcd.is_zero() {
            Rational::zero()
        } else {
            Rational::new(num_gcd, den_lcm)
        }
    }

    /// Integer-coefficient multiple with content 1 and the same sign pattern
    /// and roots. Empty for the zero polynomial.
    pub fn primitive_integer_coeffs(&self) -> Vec<BigInt> {
        if self.is_zero() {
            return vec![];
        }
        let content = self.content();
        let inv = content.recip();
        self.coeffs
            .iter()
            .map(|c| {
                let v = c * &inv;
                debug_assert!(v.denom().is_one());
                v.numer().clone()
            })
            .collect()
    }

    /// Exact sign of self(p/q) for q > 0, without building the rational value.
    pub fn sign_at_fraction(&self, p: &BigInt, q: &BigInt) -> i32 {
        debug_assert!(q.is_positive());
        let ic = self.primitive_integer_coeffs();
        if ic.is_empty() {
            return 0;
        }
        let n = ic.len() - 1;
        let mut acc = ic[n].clone();
        let mut qq = BigInt::one();
        for i in (0..n).rev() {
            qq *= q;
            acc = acc * p + &ic[i] * &qq;
        }
        match acc.sign() {
            num_bigint::Sign::Minus => -1,
            num_bigint::Sign::NoSign => 0,
            num_bigint::Sign::Plus => 1,
        }
    }

    pub fn sign_at(&self, x: &Rational) -> i32 {
        self.sign_at_fraction(x.numer(), x.denom())
    }

    /// Renders in ascending powers of `var`, e.g. `1+a-2*a^2`.
    pub fn render_ascending(&self, var: char) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            let sign_str = if c.is_negative() {
                "-"
            } else if first {
                ""
            } else {
                "+"
            };
            out.push_str(sign_str);
            let mag_one = mag.is_one();
            match (k, mag_one) {
                (0, _) => out.push_str(&render_rational(&mag)),
                (_, true) => {}
                (_, false) => {
                    out.push_str(&render_rational(&mag));
                    out.push('*');
                }
            }
            if k == 1 {
                out.push(var);
            } else if k >= 2 {
                out.push(var);
                out.push_str(&format!("^{k}"));
            }
            first = false;
        }
        out
    }
}
