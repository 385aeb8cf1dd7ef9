//! Exact real-root isolation and high-precision refinement for `RatPoly`.
//!
//! Isolation uses Sturm sequences with exact rational sign evaluation, so the
//! root count in any interval is certified. Refinement bisects exactly to a
//! coarse width, polishes with Newton steps in `BigFloat`, and then certifies
//! the final enclosure again by exact sign evaluation. The result is a root
//! correct to the advertised tolerance regardless of float rounding.

use num_traits::{One, Signed, Zero};

use crate::bigfloat::{bits_for_digits, BigFloat};
use crate::error::{Error, Result};
use crate::poly::RatPoly;
use crate::rational::Rational;

#[derive(Debug, Clone)]
pub enum IsolatedRoot {
    Exact(Rational),
    /// Open interval with a sign change and exactly one simple root inside.
    Bracket(Rational, Rational),
}

impl IsolatedRoot {
    pub fn midpoint(&self) -> Rational {
        match self {
            IsolatedRoot::Exact(r) => r.clone(),
            IsolatedRoot::Bracket(lo, hi) => (lo + hi) / Rational::from_integer(2.into()),
        }
    }
}

/// Sturm chain of a square-free polynomial, entries kept primitive-integer.
fn sturm_chain(p: &RatPoly) -> Vec<RatPoly> {
    let mut chain = Vec::new();
    let mut a = primitive(p);
    let mut b = primitive(&p.derivative());
    while !a.is_zero() {
        chain.push(a.clone());
        if b.is_zero() {
            break;
        }
        let (_, r) = a.div_rem(&b).expect("nonzero divisor");
        a = b;
        b = primitive(&r.neg());
    }
    chain
}

fn primitive(p: &RatPoly) -> RatPoly {
    if p.is_zero() {
        return RatPoly::zero();
    }
    let c = p.content();
    p.scale(&c.recip())
}

fn sign_variations(signs: impl Iterator<Item = i32>) -> usize {
    let mut variations = 0;
    let mut last = 0;
    for s in signs {
        if s == 0 {
            continue;
        }
        if last != 0 && s != last {
            variations += 1;
        }
        last = s;
    }
    variations
}

fn variations_at(chain: &[RatPoly], x: &Rational) -> usize {
    sign_variations(chain.iter().map(|p| p.sign_at(x)))
}

/// Number of distinct real roots in (lo, hi], assuming p(lo) != 0.
fn sturm_count(chain: &[RatPoly], lo: &Rational, hi: &Rational) -> usize {
    variations_at(chain, lo) - variations_at(chain, hi)
}

/// Cauchy bound: all real roots lie in (-B, B).
pub fn root_bound(p: &RatPoly) -> Rational {
    let lead = p.leading().expect("nonzero polynomial").abs();
    let mut max_ratio = Rational::zero();
    for c in p.coeffs().iter().take(p.coeffs().len() - 1) {
        let r = c.abs() / lead.clone();
        if r > max_ratio {
            max_ratio = r;
        }
    }
    max_ratio + Rational::one()
}

/// Isolates all distinct real roots of `p` (any multiplicities collapse to
/// their square-free root). Returns the roots in ascending order together
/// with the deflated square-free polynomial the brackets are certified
/// against: exact rational roots found on the way are divided out, so the
/// returned polynomial is nonzero at every bracket endpoint. Refinement and
/// polishing must evaluate that polynomial, not the original.
pub fn isolate_real_roots(p: &RatPoly) -> Result<(RatPoly, Vec<IsolatedRoot>)> {
    if p.is_zero() {
        return Err(Error::Numerical(
            "cannot isolate roots of the zero polynomial".into(),
        ));
    }
    if p.degree() == 0 {
        return Ok((p.clone(), vec![]));
    }
    // Square-free part.
    let g = p.gcd(&p.derivative());
    let mut q = p.div_exact(&g)?;
    let mut exact: Vec<Rational> = Vec::new();

    // Deflate exact rational roots discovered during subdivision, then retry.
    'restart: loop {
        if q.degree() == 0 {
            break;
        }
        // x = 0 root comes out of the constant term directly.
        if q.coeff(0).is_zero() {
            exact.push(Rational::zero());
            q = q.div_exact(&RatPoly::var())?;
            continue;
        }
        let chain = sturm_chain(&q);
        let bound = root_bound(&q);
        let lo = -bound.clone();
        let hi = bound;
        let mut brackets: Vec<(Rational, Rational)> = Vec::new();
        let mut stack = vec![(lo, hi)];
        while let Some((lo, hi)) = stack.pop() {
            let count = sturm_count(&chain, &lo, &hi);
            if count == 0 {
                continue;
            }
            if count == 1 && q.sign_at(&hi) != 0 {
                brackets.push((lo, hi));
                continue;
            }
            let mid = (&lo + &hi) / Rational::from_integer(2.into());
            if q.sign_at(&mid) == 0 {
                exact.push(mid.clone());
                q = q.div_exact(&RatPoly::new(vec![-mid, Rational::one()]))?;
                continue 'restart;
            }
            stack.push((lo, mid.clone()));
            stack.push((mid, hi));
        }
        let mut out: Vec<IsolatedRoot> = brackets
            .into_iter()
            .map(|(lo, hi)| IsolatedRoot::Bracket(lo, hi))
            .collect();
        out.extend(exact.into_iter().map(IsolatedRoot::Exact));
        out.sort_by(|x, y| x.midpoint().cmp(&y.midpoint()));
        return Ok((q, out));
    }
    let mut out: Vec<IsolatedRoot> = exact.into_iter().map(IsolatedRoot::Exact).collect();
    out.sort_by(|x, y| x.midpoint().cmp(&y.midpoint()));
    Ok((q, out))
}

/// Shrinks a sign-change bracket below `width` by exact bisection.
/// May collapse to an exact root on the way.
pub fn refine_bracket(
    p: &RatPoly,
    mut lo: Rational,
    mut hi: Rational,
    width: &Rational,
) -> IsolatedRoot {
    let mut sign_lo = p.sign_at(&lo);
    debug_assert!(sign_lo != 0 && p.sign_at(&hi) != 0);
    debug_assert!(sign_lo != p.sign_at(&hi));
    let two = Rational::from_integer(2.into());
    while &(&hi - &lo) > width {
        let mid = (&lo + &hi) / &two;
        let s = p.sign_at(&mid);
        if s == 0 {
            return IsolatedRoot::Exact(mid);
        }
        if s == sign_lo {
            lo = mid;
            sign_lo = s;
        } else {
            hi = mid;
        }
    }
    IsolatedRoot::Bracket(lo, hi)
}

/// Refines one isolated root to an absolute error below 10^-(digits+2),
/// certified by exact sign evaluation around the returned point.
pub fn polish_root(p: &RatPoly, root: &IsolatedRoot, digits: u32) -> BigFloat {
    let prec = bits_for_digits(digits + 4);
    let (mut lo, mut hi) = match root {
        IsolatedRoot::Exact(r) => return BigFloat::from_rational(&r, prec),
        IsolatedRoot::Bracket(lo, hi) => (lo.clone(), hi.clone()),
    };
    // Coarse exact bisection to make Newton safe.
    let coarse = Rational::new(1.into(), num_bigint::BigInt::one() << 64u32);
    match refine_bracket(p, lo.clone(), hi.clone(), &coarse) {
        IsolatedRoot::Exact(r) => return BigFloat::from_rational(&r, prec),
        IsolatedRoot::Bracket(l, h) => {
            lo = l;
            hi = h;
        }
    }
    let tol = Rational::new(
        1.into(),
        num_bigint::BigInt::from(10).pow(digits + 2),
    );

    // Newton polishing in high-precision floats.
    let coeffs: Vec<BigFloat> = p
        .coeffs()
        .iter()
        .map(|c| BigFloat::from_rational(c, prec))
        .collect();
    let dp = p.derivative();
    let dcoeffs: Vec<BigFloat> = dp
        .coeffs()
        .iter()
        .map(|c| BigFloat::from_rational(c, prec))
        .collect();
    let eval = |cs: &[BigFloat], x: &BigFloat| -> BigFloat {
        let mut acc = BigFloat::zero(prec);
        for c in cs.iter().rev() {
            acc = acc.mul(x).add(c);
        }
        acc
    };
    let mid = (&lo + &hi) / Rational::from_integer(2.into());
    let mut x = BigFloat::from_rational(&mid, prec);
    let steps = ((prec as f64) / 60.0).log2().ceil().max(1.0) as usize + 2;
    for _ in 0..steps {
        let fx = eval(&coeffs, &x);
        let dfx = eval(&dcoeffs, &x);
        if dfx.is_zero() {
            break;
        }
        x = x.sub(&fx.div(&dfx));
    }
    // Certify: the true root must lie within tol of x.
    let xr = x.to_rational();
    let lo_probe = &xr - &tol;
    let hi_probe = &xr + &tol;
    let s_lo = p.sign_at(&lo_probe);
    let s_hi = p.sign_at(&hi_probe);
    if s_lo != 0 && s_hi != 0 && s_lo != s_hi {
        return x;
    }
    if p.sign_at(&xr) == 0 {
        return x;
    }
    // Newton drifted; fall back to certified exact bisection.
    match refine_bracket(p, lo, hi, &tol) {
        IsolatedRoot::Exact(r) => BigFloat::from_rational(&r, prec),
        IsolatedRoot::Bracket(l, h) => {
            let m = (&l + &h) / Rational::from_integer(2.into());
            BigFloat::from_rational(&m, prec)
        }
    }
}

/// All distinct real roots, ascending, to 10^-(digits+2) absolute accuracy.
pub fn real_roots(p: &RatPoly, digits: u32) -> Result<Vec<BigFloat>> {
    let (deflated, isolated) = isolate_real_roots(p)?;
    let mut roots: Vec<BigFloat> = isolated
        .iter()
        .map(|r| polish_root(&deflated, r, digits))
        .collect();
    roots.sort_by(|a, b| a.cmp_value(b));
    Ok(roots)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{rat, rat_i64};

    #[test]
    fn isolates_simple_quadratic() {
        // 4x^2 - 1: roots -1/2, 1/2
        let p = RatPoly::from_i64(&[-1, 0, 4]);
        let (_, roots) = isolate_real_roots(&p).unwrap();
        assert_eq!(roots.len(), 2);
        let vals = real_roots(&p, 30).unwrap();
        assert!((vals[0].to_f64() + 0.5).abs() < 1e-25);
        assert!((vals[1].to_f64() - 0.5).abs() < 1e-25);
    }

    #[test]
    fn finds_exact_rational_roots() {
        // (x - 1/2)(x + 3) = x^2 + 5/2 x - 3/2
        let p = RatPoly::new(vec![rat(-3, 2), rat(5, 2), rat_i64(1)]);
        let (_, roots) = isolate_real_roots(&p).unwrap();
        assert_eq!(roots.len(), 2);
        let vals = real_roots(&p, 40).unwrap();
        assert!((vals[0].to_f64() + 3.0).abs() < 1e-30);
        assert!((vals[1].to_f64() - 0.5).abs() < 1e-30);
    }

    #[test]
    fn zero_root_and_multiplicity() {
        // x^3 (x-2)^2: distinct roots {0, 2}
        let p = RatPoly::from_i64(&[0, 0, 0, 4, -4, 1]);
        let roots = real_roots(&p, 30).unwrap();
        assert_eq!(roots.len(), 2);
        assert!(roots[0].is_zero());
        assert!((roots[1].to_f64() - 2.0).abs() < 1e-25);
    }

    #[test]
    fn ignores_complex_pairs() {
        // (x^2 + 1)(x - 3)
        let p = RatPoly::from_i64(&[-3, 1, -3, 1]);
        let roots = real_roots(&p, 30).unwrap();
        assert_eq!(roots.len(), 1);
        assert!((roots[0].to_f64() - 3.0).abs() < 1e-25);
    }

    #[test]
    fn high_precision_sqrt_two() {
        // x^2 - 2
        let p = RatPoly::from_i64(&[-2, 0, 1]);
        let roots = real_roots(&p, 50).unwrap();
        let s = roots[1].to_decimal(50);
        assert!(s.starts_with("1.414213562373095048801688724209698078569671875376"));
    }

    #[test]
    fn close_roots_are_separated() {
        // (x - 1)(x - 1 - 1/1024)(x + 5)
        let eps = rat(1, 1024);
        let r1 = RatPoly::new(vec![rat_i64(-1), rat_i64(1)]);
        let r2 = RatPoly::new(vec![-(rat_i64(1) + eps), rat_i64(1)]);
        let r3 = RatPoly::new(vec![rat_i64(5), rat_i64(1)]);
        let p = r1.mul(&r2).mul(&r3);
        let roots = real_roots(&p, 30).unwrap();
        assert_eq!(roots.len(), 3);
        assert!((roots[1].to_f64() - 1.0).abs() < 1e-20);
        assert!((roots[2].to_f64() - (1.0 + 1.0 / 1024.0)).abs() < 1e-20);
    }
}
