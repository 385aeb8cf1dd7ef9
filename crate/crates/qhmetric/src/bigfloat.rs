//! Precision-controlled binary floating point on top of `BigInt`.
//!
//! A value is `m * 2^e` with the mantissa kept at or below a per-value
//! precision in bits (round half to even on every operation). The default
//! working precision for `digits` decimal digits adds 64 guard bits, which
//! keeps accumulated rounding well under the tolerances the numeric layer
//! has to certify (1e-38 .. 1e-40 at 50 digits).

use std::cmp::Ordering;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::rational::Rational;

pub const MIN_PRECISION_BITS: u32 = 32;

/// Working precision in bits for a requested decimal digit count.
pub fn bits_for_digits(digits: u32) -> u32 {
    let core = (digits as f64 * std::f64::consts::LOG2_10).ceil() as u32;
    (core + 64).max(MIN_PRECISION_BITS)
}

#[derive(Debug, Clone)]
pub struct BigFloat {
    m: BigInt,
    e: i64,
    prec: u32,
}

impl BigFloat {
    pub fn zero(prec: u32) -> Self {
        BigFloat {
            m: BigInt::zero(),
            e: 0,
            prec: prec.max(MIN_PRECISION_BITS),
        }
    }

    pub fn one(prec: u32) -> Self {
        BigFloat::from_i64(1, prec)
    }

    pub fn from_i64(n: i64, prec: u32) -> Self {
        BigFloat {
            m: BigInt::from(n),
            e: 0,
            prec: prec.max(MIN_PRECISION_BITS),
        }
        .normalized()
    }

    pub fn from_rational(r: &Rational, prec: u32) -> Self {
        let prec = prec.max(MIN_PRECISION_BITS);
        if r.is_zero() {
            return BigFloat::zero(prec);
        }
        let shift = prec as u64 + r.denom().bits() + 2;
        let scaled = r.numer() << shift;
        let m = div_round_nearest(&scaled, r.denom());
        BigFloat {
            m,
            e: -(shift as i64),
            prec,
        }
        .normalized()
    }

    /// Exact rational value of the stored dyadic number.
    pub fn to_rational(&self) -> Rational {
        if self.e >= 0 {
            Rational::from_integer(&self.m << (self.e as u64))
        } else {
            Rational::new(self.m.clone(), BigInt::one() << ((-self.e) as u64))
        }
    }

    pub fn precision(&self) -> u32 {
        self.prec
    }

    pub fn is_zero(&self) -> bool {
        self.m.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.m.is_negative()
    }

    pub fn is_positive(&self) -> bool {
        self.m.is_positive()
    }

    /// Sign as -1, 0, +1.
    pub fn signum(&self) -> i32 {
        match self.m.sign() {
            Sign::Minus => -1,
            Sign::NoSign => 0,
            Sign::Plus => 1,
        }
    }

    fn normalized(mut self) -> Self {
        if self.m.is_zero() {
            self.e = 0;
            return self;
        }
        let bits = self.m.magnitude().bits();
        if bits > self.prec as u64 {
            let shift = bits - self.prec as u64;
            self.m = shift_round_nearest(&self.m, shift);
            self.e += shift as i64;
            // rounding can carry into one extra bit
            let bits2 = self.m.magnitude().bits();
            if bits2 > self.prec as u64 {
                self.m = shift_round_nearest(&self.m, bits2 - self.prec as u64);
                self.e += (bits2 - self.prec as u64) as i64;
            }
        }
        let tz = self.m.trailing_zeros().unwrap_or(0);
        if tz > 0 {
            self.m >>= tz;
            self.e += tz as i64;
        }
        self
    }

    /// Position of the leading bit: floor(log2|x|) + 1. None for zero.
    fn magnitude_exponent(&self) -> Option<i64> {
        if self.m.is_zero() {
            None
        } else {
            Some(self.m.magnitude().bits() as i64 + self.e)
        }
    }

    pub fn abs(&self) -> Self {
        BigFloat {
            m: self.m.abs(),
            e: self.e,
            prec: self.prec,
        }
    }

    pub fn neg(&self) -> Self {
        BigFloat {
            m: -&self.m,
            e: self.e,
            prec: self.prec,
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let prec = self.prec.max(other.prec);
        if self.is_zero() {
            let mut r = other.clone();
            r.prec = prec;
            return r.normalized();
        }
        if other.is_zero() {
            let mut r = self.clone();
            r.prec = prec;
            return r.normalized();
        }
        // If the magnitudes are too far apart to interact at this precision,
        // return the dominant operand instead of materializing a huge shift.
        let ma = self.magnitude_exponent().unwrap();
        let mb = other.magnitude_exponent().unwrap();
        let gap = prec as i64 + 8;
        if ma - mb > gap {
            let mut r = self.clone();
            r.prec = prec;
            return r.normalized();
        }
        if mb - ma > gap {
            let mut r = other.clone();
            r.prec = prec;
            return r.normalized();
        }
        let (hi, lo) = if self.e >= other.e {
            (self, other)
        } else {
            (other, self)
        };
        let shift = (hi.e - lo.e) as u64;
        let m = (&hi.m << shift) + &lo.m;
        BigFloat { m, e: lo.e, prec }.normalized()
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        let prec = self.prec.max(other.prec);
        BigFloat {
            m: &self.m * &other.m,
            e: self.e + other.e,
            prec,
        }
        .normalized()
    }

    pub fn div(&self, other: &Self) -> Self {
        assert!(!other.is_zero(), "BigFloat division by zero");
        let prec = self.prec.max(other.prec);
        if self.is_zero() {
            return BigFloat::zero(prec);
        }
        let shift = prec as u64 + other.m.magnitude().bits() + 2;
        let scaled = &self.m << shift;
        let m = div_round_nearest(&scaled, &other.m);
        BigFloat {
            m,
            e: self.e - shift as i64 - other.e,
            prec,
        }
        .normalized()
    }

    /// Nonnegative square root; panics on negative input.
    pub fn sqrt(&self) -> Self {
        assert!(!self.is_negative(), "BigFloat sqrt of negative value");
        if self.is_zero() {
            return BigFloat::zero(self.prec);
        }
        let target = 2 * (self.prec as u64 + 2);
        let bits = self.m.magnitude().bits();
        let mut shift = target.saturating_sub(bits);
        if (self.e - shift as i64) % 2 != 0 {
            shift += 1;
        }
        let scaled = &self.m << shift;
        let root = scaled.sqrt();
        BigFloat {
            m: root,
            e: (self.e - shift as i64) / 2,
            prec: self.prec,
        }
        .normalized()
    }

    pub fn cmp_value(&self, other: &Self) -> Ordering {
        let sa = self.signum();
        let sb = other.signum();
        if sa != sb {
            return sa.cmp(&sb);
        }
        if sa == 0 {
            return Ordering::Equal;
        }
        // Same nonzero sign: compare magnitude ranges first.
        let ma = self.magnitude_exponent().unwrap();
        let mb = other.magnitude_exponent().unwrap();
        if ma != mb {
            let mag = ma.cmp(&mb);
            return if sa > 0 { mag } else { mag.reverse() };
        }
        // Overlapping ranges: exact aligned comparison (bounded shift).
        let (a, b) = (self, other);
        if a.e >= b.e {
            ((&a.m) << ((a.e - b.e) as u64)).cmp(&b.m)
        } else {
            a.m.cmp(&(&b.m << ((b.e - a.e) as u64)))
        }
    }

    pub fn max_value(&self, other: &Self) -> Self {
        if self.cmp_value(other) == Ordering::Less {
            other.clone()
        } else {
            self.clone()
        }
    }

    pub fn min_value(&self, other: &Self) -> Self {
        if self.cmp_value(other) == Ordering::Greater {
            other.clone()
        } else {
            self.clone()
        }
    }

    pub fn from_f64(x: f64, prec: u32) -> Option<Self> {
        let r = crate::rational::rational_from_f64(x)?;
        Some(BigFloat::from_rational(&r, prec))
    }

    pub fn to_f64(&self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        let bits = self.m.magnitude().bits();
        let (top, shift) = if bits > 53 {
            let rounded = shift_round_nearest(&BigInt::from(self.m.magnitude().clone()), bits - 53);
            (
                rounded.magnitude().to_u64_digits().first().copied().unwrap_or(0),
                self.e + (bits - 53) as i64,
            )
        } else {
            (
                self.m.magnitude().to_u64_digits().first().copied().unwrap_or(0),
                self.e,
            )
        };
        let mut value = top as f64;
        if shift > 1_100 {
            value = f64::INFINITY;
        } else if shift < -1_100 {
            value = 0.0;
        } else {
            value *= 2f64.powi(shift as i32);
        }
        if self.is_negative() {
            -value
        } else {
            value
        }
    }

    /// Natural log as f64, safe for magnitudes far outside f64 range.
    /// Panics on non-positive values.
    pub fn ln_f64(&self) -> f64 {
        assert!(self.is_positive(), "ln of non-positive BigFloat");
        let bits = self.m.magnitude().bits();
        let take = bits.min(53);
        let top = (self.m.magnitude() >> (bits - take))
            .to_u64_digits()
            .first()
            .copied()
            .unwrap_or(1) as f64;
        // |x| = top * 2^(e + bits - take)
        top.ln() + (self.e + (bits - take) as i64) as f64 * std::f64::consts::LN_2
    }

    /// Decimal rendering with `digits` significant digits. Uses fixed-point
    /// notation for moderate magnitudes and scientific notation otherwise.
    pub fn to_decimal(&self, digits: u32) -> String {
        let digits = digits.max(1) as i64;
        if self.is_zero() {
            return "0".to_string();
        }
        // First decimal-exponent estimate from the binary magnitude.
        let mag2 = self.magnitude_exponent().unwrap();
        let mut k = ((mag2 - 1) as f64 * std::f64::consts::LOG10_2).floor() as i64;
        let mut scaled = self.scaled_decimal_digits(digits - 1 - k);
        // Correct the estimate so the integer has exactly `digits` digits.
        let mut digit_count = count_decimal_digits(&scaled);
        while digit_count > digits {
            k += 1;
            scaled = self.scaled_decimal_digits(digits - 1 - k);
            digit_count = count_decimal_digits(&scaled);
        }
        while digit_count < digits {
            k -= 1;
            scaled = self.scaled_decimal_digits(digits - 1 - k);
            digit_count = count_decimal_digits(&scaled);
        }
        let neg = scaled.is_negative();
        let body = scaled.magnitude().to_string();
        let sign = if neg { "-" } else { "" };
        if k >= -6 && k < digits + 6 {
            // fixed notation
            let mut s = String::from(sign);
            if k >= 0 {
                let int_len = (k + 1) as usize;
                if int_len >= body.len() {
                    s.push_str(&body);
                    s.push_str(&"0".repeat(int_len - body.len()));
                } else {
                    s.push_str(&body[..int_len]);
                    s.push('.');
                    s.push_str(&body[int_len..]);
                }
            } else {
                s.push_str("0.");
                s.push_str(&"0".repeat((-k - 1) as usize));
                s.push_str(&body);
            }
            trim_fraction(s)
        } else {
            let mut s = format!("{sign}{}", &body[..1]);
            if body.len() > 1 {
                s.push('.');
                s.push_str(&body[1..]);
            }
            let s = trim_fraction(s);
            format!("{s}e{k}")
        }
    }

    /// round(|self| * 10^p) with sign, as a BigInt.
    fn scaled_decimal_digits(&self, p: i64) -> BigInt {
        let ten = BigInt::from(10);
        let (mut num, mut den) = (self.m.clone(), BigInt::one());
        if self.e >= 0 {
            num <<= self.e as u64;
        } else {
            den <<= (-self.e) as u64;
        }
        if p >= 0 {
            num *= ten.pow(p as u32);
        } else {
            den *= ten.pow((-p) as u32);
        }
        div_round_nearest(&num, &den)
    }
}

fn count_decimal_digits(n: &BigInt) -> i64 {
    if n.is_zero() {
        1
    } else {
        n.magnitude().to_string().len() as i64
    }
}

fn trim_fraction(s: String) -> String {
    if !s.contains('.') {
        return s;
    }
    let t = s.trim_end_matches('0');
    t.trim_end_matches('.').to_string()
}

/// Round-half-even division.
fn div_round_nearest(num: &BigInt, den: &BigInt) -> BigInt {
    let (q, r) = num.div_rem(den);
    if r.is_zero() {
        return q;
    }
    let twice = (&r << 1u32).abs();
    let dabs = den.abs();
    let bump = match twice.cmp(&dabs) {
        Ordering::Greater => true,
        Ordering::Equal => q.is_odd(),
        Ordering::Less => false,
    };
    if bump {
        if (num.sign() == Sign::Minus) ^ (den.sign() == Sign::Minus) {
            q - BigInt::one()
        } else {
            q + BigInt::one()
        }
    } else {
        q
    }
}

/// Round-half-even right shift.
fn shift_round_nearest(m: &BigInt, shift: u64) -> BigInt {
    if shift == 0 {
        return m.clone();
    }
    let q: BigInt = m >> shift;
    let dropped = m - (&q << shift);
    // dropped has the sign of m (or zero); compare against half of 2^shift
    let half = BigInt::one() << (shift - 1);
    let mag = dropped.abs();
    let bump = match mag.cmp(&half) {
        Ordering::Greater => true,
        Ordering::Equal => q.is_odd(),
        Ordering::Less => false,
    };
    if bump {
        if m.is_negative() {
            q - BigInt::one()
        } else {
            q + BigInt::one()
        }
    } else {
        q
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{rat, rat_i64};

    const P: u32 = 200;

    fn bf(n: i64, d: i64) -> BigFloat {
        BigFloat::from_rational(&rat(n, d), P)
    }

    #[test]
    fn dyadic_values_are_exact() {
        let x = bf(3, 8);
        assert_eq!(x.to_rational(), rat(3, 8));
        let y = bf(-7, 2);
        assert_eq!(y.to_rational(), rat(-7, 2));
    }

    #[test]
    fn arithmetic_close_to_exact() {
        let third = bf(1, 3);
        let sum = third.add(&third).add(&third);
        let err = sum.sub(&BigFloat::one(P)).abs();
        assert!(err.to_f64() < 1e-55, "err = {}", err.to_f64());

        let x = bf(22, 7);
        let q = x.div(&bf(11, 7));
        assert!((q.to_f64() - 2.0).abs() < 1e-15);
    }

    #[test]
    fn sqrt_squares_back() {
        for (n, d) in [(2, 1), (3, 4), (1, 3), (17, 5)] {
            let x = bf(n, d);
            let s = x.sqrt();
            let back = s.mul(&s);
            let err = back.sub(&x).abs().to_f64();
            assert!(err < 1e-55, "sqrt({n}/{d}) err {err}");
        }
        assert!(BigFloat::zero(P).sqrt().is_zero());
    }

    #[test]
    fn comparison_is_exact() {
        assert_eq!(bf(1, 3).cmp_value(&bf(1, 3)), Ordering::Equal);
        assert_eq!(bf(1, 3).cmp_value(&bf(2, 3)), Ordering::Less);
        assert_eq!(bf(-1, 3).cmp_value(&bf(-2, 3)), Ordering::Greater);
        assert_eq!(bf(-1, 3).cmp_value(&bf(2, 3)), Ordering::Less);
        // wildly different magnitudes
        let big = BigFloat::from_rational(&rat_i64(1_000_000_007), P);
        let tiny = bf(1, 1_000_000_007);
        assert_eq!(tiny.cmp_value(&big), Ordering::Less);
    }

    #[test]
    fn far_apart_addition_keeps_dominant() {
        let big = BigFloat::from_rational(&Rational::new(1.into(), 1.into()), 64);
        let tiny = BigFloat {
            m: BigInt::one(),
            e: -1000,
            prec: 64,
        };
        let sum = big.add(&tiny);
        assert_eq!(sum.to_rational(), rat_i64(1));
    }

    #[test]
    fn decimal_rendering() {
        let half = bf(1, 2);
        assert_eq!(half.to_decimal(10), "0.5");
        let third = bf(1, 3);
        assert_eq!(third.to_decimal(10), "0.3333333333");
        let neg = bf(-1, 3);
        assert!(neg.to_decimal(10).starts_with("-0.3333"));
        let thousand = BigFloat::from_i64(1000, P);
        assert_eq!(thousand.to_decimal(10), "1000");
        let tiny = bf(1, 1_000_000_000);
        assert_eq!(tiny.to_decimal(5), "1e-9");
        let small = BigFloat::from_rational(&rat(123456, 100000000000), P);
        assert_eq!(small.to_decimal(6), "0.00000123456");
        let sci = BigFloat::from_rational(&rat(123456, 10000000000000), P);
        assert_eq!(sci.to_decimal(6), "1.23456e-8");
        assert_eq!(BigFloat::zero(P).to_decimal(10), "0");
    }

    #[test]
    fn fifty_digit_rendering_of_sqrt_two_thirds() {
        // sqrt(2/3) = 0.81649658092772603273242802490196379732198249355222...
        let x = bf(2, 3).sqrt();
        let s = x.to_decimal(50);
        assert!(s.starts_with("0.8164965809277260327324280249019637973219824935522"));
    }

    #[test]
    fn ln_f64_handles_extreme_magnitudes() {
        let x = BigFloat {
            m: BigInt::one(),
            e: -2000,
            prec: 64,
        };
        let expected = -2000.0 * std::f64::consts::LN_2;
        assert!((x.ln_f64() - expected).abs() < 1e-9);
        let e = BigFloat::from_f64(std::f64::consts::E, 64).unwrap();
        assert!((e.ln_f64() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn to_f64_round_trip() {
        for x in [0.5, -1.25, 3.141592653589793, 1e-30, -2e25] {
            let b = BigFloat::from_f64(x, 128).unwrap();
            assert_eq!(b.to_f64(), x);
        }
    }
}
