//! Gegenbauer polynomials C_n^alpha: exact evaluation, coefficient
//! extraction, and certified real roots of the secular equation
//! C_N^alpha(E) = 0.
//!
//! The normalization is fixed by the standard three-term recurrence
//! C_0 = 1, C_1 = 2 alpha x,
//! (n+1) C_{n+1} = 2 x (n+alpha) C_n - (n + 2 alpha - 1) C_{n-1}.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::bigfloat::{bits_for_digits, BigFloat};
use crate::error::{Error, Result};
use crate::poly::RatPoly;
use crate::rational::Rational;
use crate::roots::{polish_root, refine_bracket, IsolatedRoot};

/// Coefficient rows of C_0..C_order_max for a fixed alpha.
#[derive(Debug, Clone)]
pub struct GegenbauerTable {
    pub order_max: usize,
    pub alpha: Rational,
    pub rows: Vec<RatPoly>,
}

impl GegenbauerTable {
    pub fn build(order_max: usize, alpha: &Rational) -> Self {
        let mut rows = Vec::with_capacity(order_max + 1);
        rows.push(RatPoly::one());
        if order_max >= 1 {
            let two_alpha = alpha * Rational::from_integer(2.into());
            rows.push(RatPoly::monomial(two_alpha, 1));
        }
        for n in 1..order_max {
            let nr = Rational::from_integer(BigInt::from(n));
            let a2 = (&nr + alpha) * Rational::from_integer(2.into());
            let b = &nr + alpha * Rational::from_integer(2.into()) - Rational::one();
            let inv = (nr + Rational::one()).recip();
            // (n+1) C_{n+1} = 2x(n+alpha) C_n - (n+2alpha-1) C_{n-1}
            let next = rows[n]
                .shift_up(1)
                .scale(&a2)
                .sub(&rows[n - 1].scale(&b))
                .scale(&inv);
            rows.push(next);
        }
        GegenbauerTable {
            order_max,
            alpha: alpha.clone(),
            rows,
        }
    }
}

/// Exact value of C_n^alpha(x) by the three-term recurrence.
pub fn gegenbauer_eval(n: usize, alpha: &Rational, x: &Rational) -> Rational {
    let mut prev = Rational::one();
    if n == 0 {
        return prev;
    }
    let mut cur = alpha * Rational::from_integer(2.into()) * x;
    for k in 1..n {
        let kr = Rational::from_integer(BigInt::from(k));
        let a2 = (&kr + alpha) * Rational::from_integer(2.into()) * x;
        let b = &kr + alpha * Rational::from_integer(2.into()) - Rational::one();
        let next = (a2 * &cur - b * &prev) / (kr + Rational::one());
        prev = cur;
        cur = next;
    }
    cur
}

/// C_n^alpha(x) for a high-precision real x (used for eigenvector components
/// at numerically determined energies).
pub fn gegenbauer_eval_bigfloat(n: usize, alpha: &Rational, x: &BigFloat, prec: u32) -> BigFloat {
    let mut prev = BigFloat::one(prec);
    if n == 0 {
        return prev;
    }
    let two_alpha = BigFloat::from_rational(&(alpha * Rational::from_integer(2.into())), prec);
    let mut cur = two_alpha.mul(x);
    for k in 1..n {
        let kr = Rational::from_integer(BigInt::from(k));
        let a2 = BigFloat::from_rational(
            &((&kr + alpha) * Rational::from_integer(2.into())),
            prec,
        );
        let b = BigFloat::from_rational(
            &(&kr + alpha * Rational::from_integer(2.into()) - Rational::one()),
            prec,
        );
        let inv = BigFloat::from_rational(&(kr + Rational::one()).recip(), prec);
        let next = a2.mul(x).mul(&cur).sub(&b.mul(&prev)).mul(&inv);
        prev = cur;
        cur = next;
    }
    cur
}

/// Exact coefficients of C_n^alpha as a polynomial in x.
pub fn gegenbauer_coeffs(n: usize, alpha: &Rational) -> RatPoly {
    GegenbauerTable::build(n, alpha).rows[n].clone()
}

/// The N bound-state energies: roots of C_N^alpha, ascending.
#[derive(Debug, Clone)]
pub struct EnergySpectrum {
    pub n: usize,
    pub alpha: Rational,
    pub roots: Vec<BigFloat>,
    pub precision_digits: u32,
}

/// All N real roots of C_N^alpha by parity + interlacing bracketing,
/// each certified to 10^-(digits+2) absolute accuracy.
///
/// Rejects alpha <= 0: outside the orthogonality regime the realness of all
/// roots is not guaranteed, and the interlacing ladder does not apply.
pub fn secular_roots(n: usize, alpha: &Rational, digits: u32) -> Result<EnergySpectrum> {
    if !alpha.is_positive() {
        return Err(Error::precondition(
            "alpha",
            "secular_roots requires alpha > 0",
        ));
    }
    if n < 1 {
        return Err(Error::precondition("N", "secular_roots requires N >= 1"));
    }
    if digits < 15 {
        return Err(Error::precondition(
            "digits",
            "secular_roots requires digits >= 15",
        ));
    }
    let table = GegenbauerTable::build(n, alpha);
    let prec = bits_for_digits(digits + 4);

    // Ladder of certified enclosures, level by level. Enclosures at level k
    // hold the positive roots of C_k; full root sets are the mirror image
    // plus an exact zero for odd k.
    let mut positive: Vec<(Rational, Rational)> = Vec::new();
    for k in 1..=n {
        if k == 1 {
            // C_1 has the single root 0; no positive roots.
            positive = Vec::new();
            continue;
        }
        let poly = &table.rows[k];
        let width = Rational::new(BigInt::one(), BigInt::one() << 48u32);
        let mut attempt = 0usize;
        loop {
            match ladder_step(poly, k, &positive, &width) {
                Some(next) => {
                    positive = next;
                    break;
                }
                None => {
                    // Sign alternation failed: previous-level enclosures are
                    // too loose. Tighten them against C_{k-1} and retry.
                    attempt += 1;
                    if attempt > 8 {
                        return Err(Error::RootCount {
                            expected: k,
                            found: 0,
                        });
                    }
                    let prev_poly = &table.rows[k - 1];
                    let tighter = Rational::new(
                        BigInt::one(),
                        BigInt::one() << (48 + 32 * attempt as u32),
                    );
                    positive = positive
                        .iter()
                        .map(|(lo, hi)| {
                            match refine_bracket(prev_poly, lo.clone(), hi.clone(), &tighter) {
                                IsolatedRoot::Exact(r) => {
                                    let eps = &tighter / Rational::from_integer(2.into());
                                    (&r - &eps, r + eps)
                                }
                                IsolatedRoot::Bracket(l, h) => (l, h),
                            }
                        })
                        .collect();
                }
            }
        }
    }

    // Polish the positive roots of C_N, then mirror.
    let poly = &table.rows[n];
    let mut roots: Vec<BigFloat> = Vec::new();
    for (lo, hi) in &positive {
        let root = polish_root(
            poly,
            &IsolatedRoot::Bracket(lo.clone(), hi.clone()),
            digits,
        );
        roots.push(root);
    }
    roots.sort_by(|a, b| a.cmp_value(b));
    let mut all: Vec<BigFloat> = roots.iter().map(|r| r.neg()).rev().collect();
    if n % 2 == 1 {
        all.push(BigFloat::zero(prec));
    }
    all.extend(roots);
    if all.len() != n {
        return Err(Error::RootCount {
            expected: n,
            found: all.len(),
        });
    }
    Ok(EnergySpectrum {
        n,
        alpha: alpha.clone(),
        roots: all,
        precision_digits: digits,
    })
}

/// One interlacing step: given certified enclosures of the positive roots of
/// C_{k-1}, isolate and return enclosures of the positive roots of C_k.
/// Returns None when the expected sign alternation is not visible (caller
/// refines the previous level and retries).
fn ladder_step(
    poly: &RatPoly,
    k: usize,
    prev_positive: &[(Rational, Rational)],
    width: &Rational,
) -> Option<Vec<(Rational, Rational)>> {
    // Candidate separators on the nonnegative axis: 0, both ends of every
    // previous-level enclosure, and 1. Roots of C_{k-1} separate consecutive
    // roots of C_k, so once the enclosures are tight enough the sign of C_k
    // alternates across these points, one flip per positive root.
    let mut points: Vec<Rational> = vec![Rational::zero()];
    for (lo, hi) in prev_positive {
        points.push(lo.clone());
        points.push(hi.clone());
    }
    points.push(Rational::one());

    let signs: Vec<i32> = points.iter().map(|x| poly.sign_at(x)).collect();

    // Pair consecutive points with opposite nonzero signs (zero signs are
    // skipped; for odd k the point 0 is itself a root of C_k).
    let expected = k / 2; // number of positive roots of C_k
    let mut brackets: Vec<(Rational, Rational)> = Vec::new();
    let mut i = 0;
    while i < points.len() {
        if signs[i] == 0 {
            i += 1;
            continue;
        }
        let mut j = i + 1;
        while j < points.len() && signs[j] == 0 {
            j += 1;
        }
        if j >= points.len() {
            break;
        }
        if signs[j] != signs[i] {
            brackets.push((points[i].clone(), points[j].clone()));
        }
        i = j;
    }
    if brackets.len() != expected {
        return None;
    }
    // Tighten each bracket to the working width.
    let mut out = Vec::with_capacity(brackets.len());
    for (lo, hi) in brackets {
        match refine_bracket(poly, lo, hi, width) {
            IsolatedRoot::Exact(r) => {
                let eps = width / Rational::from_integer(2.into());
                out.push((&r - &eps, r + eps));
            }
            IsolatedRoot::Bracket(l, h) => out.push((l, h)),
        }
    }
    Some(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{rat, rat_i64};

    #[test]
    fn eval_seed_and_first_orders() {
        assert_eq!(gegenbauer_eval(0, &rat(7, 3), &rat(-5, 2)), rat_i64(1));
        // C_1 = 2 alpha x
        assert_eq!(gegenbauer_eval(1, &rat(1, 2), &rat(3, 4)), rat(3, 4));
        // C_2^1(1/2) = 4 (1/2)^2 - 1 = 0
        assert_eq!(gegenbauer_eval(2, &rat_i64(1), &rat(1, 2)), rat_i64(0));
    }

    #[test]
    fn eval_matches_symbolic_second_order() {
        // C_2^alpha(x) = 2 alpha (alpha+1) x^2 - alpha
        for (an, ad, xn, xd) in [(1i64, 1i64, 1i64, 2i64), (3, 2, -2, 5), (7, 4, 1, 3)] {
            let alpha = rat(an, ad);
            let x = rat(xn, xd);
            let expected = rat_i64(2) * &alpha * (&alpha + rat_i64(1)) * &x * &x - &alpha;
            assert_eq!(gegenbauer_eval(2, &alpha, &x), expected);
        }
    }

    #[test]
    fn coeffs_low_orders() {
        assert_eq!(gegenbauer_coeffs(0, &rat(5, 3)), RatPoly::one());
        assert_eq!(
            gegenbauer_coeffs(1, &rat(5, 3)),
            RatPoly::new(vec![rat_i64(0), rat(10, 3)])
        );
        assert_eq!(
            gegenbauer_coeffs(2, &rat_i64(1)),
            RatPoly::from_i64(&[-1, 0, 4])
        );
        assert_eq!(
            gegenbauer_coeffs(3, &rat_i64(1)),
            RatPoly::from_i64(&[0, -4, 0, 8])
        );
    }

    #[test]
    fn coeffs_parity_and_degree() {
        let alpha = rat(3, 7);
        for n in 0..=12usize {
            let p = gegenbauer_coeffs(n, &alpha);
            assert_eq!(p.degree(), n as i64);
            for (k, c) in p.coeffs().iter().enumerate() {
                if (k % 2) != (n % 2) {
                    assert!(c.is_zero(), "parity violation at n={n}, k={k}");
                }
            }
        }
    }

    #[test]
    fn eval_consistency_with_coeffs() {
        // seeded pseudo-random rational samples
        let samples = [
            (rat(1, 2), rat(2, 3)),
            (rat(5, 4), rat(-1, 7)),
            (rat(13, 3), rat(9, 11)),
            (rat(2, 9), rat(-4, 5)),
        ];
        for n in 0..=12usize {
            for (alpha, x) in &samples {
                assert_eq!(
                    gegenbauer_eval(n, alpha, x),
                    gegenbauer_coeffs(n, alpha).eval(x),
                    "n={n}"
                );
            }
        }
    }

    #[test]
    fn bigfloat_eval_matches_exact() {
        let alpha = rat(3, 2);
        let x = rat(-2, 5);
        let xb = BigFloat::from_rational(&x, 200);
        for n in 0..=9usize {
            let exact = gegenbauer_eval(n, &alpha, &x);
            let approx = gegenbauer_eval_bigfloat(n, &alpha, &xb, 200);
            let err = approx
                .sub(&BigFloat::from_rational(&exact, 200))
                .abs()
                .to_f64();
            assert!(err < 1e-50, "n={n} err={err}");
        }
    }

    #[test]
    fn secular_roots_n2() {
        let s = secular_roots(2, &rat_i64(1), 30).unwrap();
        assert_eq!(s.roots.len(), 2);
        assert!((s.roots[0].to_f64() + 0.5).abs() < 1e-25);
        assert!((s.roots[1].to_f64() - 0.5).abs() < 1e-25);
    }

    #[test]
    fn secular_roots_n2_closed_form() {
        // roots of C_2^alpha: +- 1/sqrt(2(alpha+1))
        for alpha in [rat_i64(1), rat(1, 2), rat_i64(3)] {
            let s = secular_roots(2, &alpha, 40).unwrap();
            let expected = 1.0
                / (2.0 * (crate::rational::rational_to_f64(&alpha) + 1.0)).sqrt();
            assert!((s.roots[1].to_f64() - expected).abs() < 1e-14);
        }
    }

    #[test]
    fn secular_roots_odd_contains_exact_zero() {
        let s = secular_roots(3, &rat(7, 5), 30).unwrap();
        assert!(s.roots[1].is_zero());
        let s9 = secular_roots(9, &rat_i64(2), 30).unwrap();
        assert!(s9.roots[4].is_zero());
    }

    #[test]
    fn secular_roots_symmetric_and_in_unit_interval() {
        for n in 1..=10usize {
            let s = secular_roots(n, &rat(5, 4), 30).unwrap();
            assert_eq!(s.roots.len(), n);
            for k in 0..n {
                let neg = s.roots[k].neg();
                let mirror = &s.roots[n - 1 - k];
                assert_eq!(
                    neg.cmp_value(mirror),
                    std::cmp::Ordering::Equal,
                    "mirror symmetry at n={n}, k={k}"
                );
                assert!(s.roots[k].abs().to_f64() < 1.0);
            }
            for k in 1..n {
                assert!(
                    s.roots[k - 1].cmp_value(&s.roots[k]) == std::cmp::Ordering::Less,
                    "strictly increasing at n={n}"
                );
            }
        }
    }

    #[test]
    fn secular_roots_interlace() {
        for n in 1..=9usize {
            let lo = secular_roots(n, &rat_i64(1), 20).unwrap();
            let hi = secular_roots(n + 1, &rat_i64(1), 20).unwrap();
            for k in 0..n {
                let below = hi.roots[k].to_f64();
                let mid = lo.roots[k].to_f64();
                let above = hi.roots[k + 1].to_f64();
                assert!(below < mid && mid < above, "interlacing failed at n={n}");
            }
        }
    }

    #[test]
    fn secular_roots_rejects_bad_inputs() {
        assert!(secular_roots(3, &rat_i64(0), 30).is_err());
        assert!(secular_roots(3, &rat_i64(-1), 30).is_err());
        assert!(secular_roots(0, &rat_i64(1), 30).is_err());
        assert!(secular_roots(3, &rat_i64(1), 10).is_err());
    }

    #[test]
    fn fifty_digit_root() {
        let s = secular_roots(2, &rat_i64(1), 50).unwrap();
        // exact root 1/2
        let err = s.roots[1]
            .sub(&BigFloat::from_rational(&rat(1, 2), 200))
            .abs();
        assert!(err.to_f64() < 1e-50);
    }
}
