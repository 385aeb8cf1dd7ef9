//! The tridiagonal lattice Hamiltonians H(a) and their numeric
//! instantiation and eigensystem cross-checks.
//!
//! Two entry conventions are built. `Displayed` follows the printed N=4
//! sample: superdiagonal 1/(2a+2n), subdiagonal (2a+n-1)/(2a+2n) in 0-based
//! row n. `Recurrence` replaces the superdiagonal by (n+1)/(2a+2n), the
//! unique zero-diagonal tridiagonal pattern whose rows realize the Gegenbauer
//! three-term recurrence, so that the Gegenbauer eigenvector/secular claims
//! hold exactly. The two agree at N=2 and differ from N=3 on; both are
//! exposed rather than silently "fixing" either.

use num_traits::Signed;

use crate::bigfloat::{bits_for_digits, BigFloat};
use crate::error::{Error, Result};
use crate::gegenbauer::{gegenbauer_eval_bigfloat, secular_roots};
use crate::matrix::{MatrixTag, NumericMatrix, RatFuncMatrix};
use crate::poly::RatPoly;
use crate::positivity::char_poly_exact;
use crate::rational::{rat_i64, render_rational, Rational};
use crate::ratfunc::RatFunc;
use crate::roots;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Convention {
    Displayed,
    Recurrence,
}

impl Convention {
    pub fn tag(&self) -> MatrixTag {
        match self {
            Convention::Displayed => MatrixTag::Displayed,
            Convention::Recurrence => MatrixTag::Recurrence,
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            Convention::Displayed => "displayed",
            Convention::Recurrence => "recurrence",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "displayed" => Ok(Convention::Displayed),
            "recurrence" => Ok(Convention::Recurrence),
            other => Err(Error::precondition(
                "convention",
                format!("unknown convention `{other}` (displayed|recurrence)"),
            )),
        }
    }
}

/// 2a + c as a rational function.
fn two_a_plus(c: i64) -> RatPoly {
    RatPoly::new(vec![rat_i64(c), rat_i64(2)])
}

/// Superdiagonal entry H[n][n+1], 0-based row n.
pub fn super_entry(n: usize, convention: Convention) -> RatFunc {
    let den = two_a_plus(2 * n as i64);
    let num = match convention {
        Convention::Displayed => RatPoly::one(),
        Convention::Recurrence => RatPoly::constant(rat_i64(n as i64 + 1)),
    };
    RatFunc::normalize(num, den).expect("nonzero denominator")
}

/// Subdiagonal entry H[n][n-1], 0-based row n (same in both conventions).
pub fn sub_entry(n: usize) -> RatFunc {
    let num = two_a_plus(n as i64 - 1);
    let den = two_a_plus(2 * n as i64);
    RatFunc::normalize(num, den).expect("nonzero denominator")
}

/// Builds H(a) as an N x N matrix of reduced rational functions.
pub fn build_hamiltonian(n: usize, convention: Convention) -> Result<RatFuncMatrix> {
    if n < 1 {
        return Err(Error::precondition("N", "Hamiltonian needs N >= 1"));
    }
    let mut h = RatFuncMatrix::zero(n, convention.tag());
    for row in 0..n {
        if row + 1 < n {
            h.set(row, row + 1, super_entry(row, convention));
        }
        if row >= 1 {
            h.set(row, row - 1, sub_entry(row));
        }
    }
    Ok(h)
}

/// Entrywise high-precision instantiation of a rational-function matrix.
///
/// For Hamiltonians a0 > 0 is required unless `allow_nonpositive` is set
/// (the paper works in the orthogonality regime a > 0; the entry pattern has
/// poles only at a in {0, -1/2, -1, -3/2, ...}).
pub fn instantiate(
    m: &RatFuncMatrix,
    a0: &Rational,
    digits: u32,
    allow_nonpositive: bool,
) -> Result<NumericMatrix> {
    let is_hamiltonian = matches!(m.tag(), MatrixTag::Displayed | MatrixTag::Recurrence);
    if is_hamiltonian && !a0.is_positive() && !allow_nonpositive {
        return Err(Error::precondition(
            "a",
            format!(
                "Hamiltonian instantiation needs a > 0 (got {}); pass the override to force",
                render_rational(a0)
            ),
        ));
    }
    let rational = m.instantiate(a0)?;
    let mut numeric = rational.to_numeric(bits_for_digits(digits));
    numeric.set_symmetric_flag(m.is_symmetric());
    Ok(numeric)
}

/// Residuals of the Gegenbauer eigensystem against a Hamiltonian convention.
#[derive(Debug, Clone)]
pub struct EigReport {
    pub n: usize,
    pub convention: Convention,
    pub digits: u32,
    /// max over roots E_k of || H psi_k - E_k psi_k ||_inf with psi from
    /// Gegenbauer evaluation at E_k.
    pub max_residual: BigFloat,
    /// max |sorted eigenvalue of H - sorted Gegenbauer root|, eigenvalues of
    /// H taken independently from its exact characteristic polynomial.
    pub spectral_gap: BigFloat,
}

/// Checks how well the Gegenbauer eigenvectors and secular roots solve the
/// eigenproblem of H(alpha) in the given convention. Large residuals are a
/// finding, not an error.
pub fn verify_eigensystem(
    n: usize,
    alpha: &Rational,
    convention: Convention,
    digits: u32,
) -> Result<EigReport> {
    let spectrum = secular_roots(n, alpha, digits)?;
    let h = build_hamiltonian(n, convention)?;
    let h_rat = h.instantiate(alpha)?;
    let prec = bits_for_digits(digits);
    let h_num = h_rat.to_numeric(prec);

    let mut max_residual = BigFloat::zero(prec);
    for energy in &spectrum.roots {
        let psi: Vec<BigFloat> = (0..n)
            .map(|comp| gegenbauer_eval_bigfloat(comp, alpha, energy, prec))
            .collect();
        for i in 0..n {
            let mut acc = BigFloat::zero(prec);
            for (j, psi_j) in psi.iter().enumerate() {
                acc = acc.add(&h_num.get(i, j).mul(psi_j));
            }
            let r = acc.sub(&energy.mul(&psi[i])).abs();
            max_residual = max_residual.max_value(&r);
        }
    }

    // Independent spectrum of H via its exact characteristic polynomial.
    let cp = char_poly_exact(&h_rat)?;
    let h_eigs = roots::real_roots(&cp, digits)?;
    if h_eigs.len() != n {
        return Err(Error::RootCount {
            expected: n,
            found: h_eigs.len(),
        });
    }
    let mut spectral_gap = BigFloat::zero(prec);
    for (mine, theirs) in h_eigs.iter().zip(spectrum.roots.iter()) {
        spectral_gap = spectral_gap.max_value(&mine.sub(theirs).abs());
    }

    Ok(EigReport {
        n,
        convention,
        digits,
        max_residual,
        spectral_gap,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;
    use crate::ratfunc::parse_ratfunc;
    use std::collections::HashMap;

    fn rf(s: &str) -> RatFunc {
        parse_ratfunc(s, "test", &HashMap::new()).unwrap()
    }

    #[test]
    fn displayed_n4_matches_printed_sample() {
        let h = build_hamiltonian(4, Convention::Displayed).unwrap();
        assert_eq!(h.get(0, 1), &rf("1/(2a)"));
        assert_eq!(h.get(1, 0), &rf("2a/(2a+2)"));
        assert_eq!(h.get(1, 2), &rf("1/(2a+2)"));
        assert_eq!(h.get(2, 1), &rf("(2a+1)/(2a+4)"));
        assert_eq!(h.get(2, 3), &rf("1/(2a+4)"));
        assert_eq!(h.get(3, 2), &rf("(2a+2)/(2a+6)"));
        // tridiagonal, zero diagonal
        for i in 0..4 {
            for j in 0..4 {
                if (i as i64 - j as i64).abs() != 1 {
                    assert!(h.get(i, j).is_zero(), "({i},{j}) should vanish");
                }
            }
        }
    }

    #[test]
    fn single_site_is_zero() {
        let h = build_hamiltonian(1, Convention::Displayed).unwrap();
        assert!(h.get(0, 0).is_zero());
        assert_eq!(h.n(), 1);
    }

    #[test]
    fn recurrence_n3_superdiagonal() {
        let h = build_hamiltonian(3, Convention::Recurrence).unwrap();
        assert_eq!(h.get(1, 2), &rf("1/(a+1)"));
        // subdiagonal and first row agree with displayed
        let d = build_hamiltonian(3, Convention::Displayed).unwrap();
        assert_eq!(h.get(0, 1), d.get(0, 1));
        assert_eq!(h.get(1, 0), d.get(1, 0));
        assert_eq!(h.get(2, 1), d.get(2, 1));
    }

    #[test]
    fn conventions_coincide_at_n2() {
        let a = build_hamiltonian(2, Convention::Displayed).unwrap();
        let b = build_hamiltonian(2, Convention::Recurrence).unwrap();
        for i in 0..2 {
            for j in 0..2 {
                assert_eq!(a.get(i, j), b.get(i, j));
            }
        }
    }

    #[test]
    fn instantiate_n2_at_one() {
        let h = build_hamiltonian(2, Convention::Displayed).unwrap();
        let m = instantiate(&h, &rat_i64(1), 30, false).unwrap();
        assert!((m.get(0, 1).to_f64() - 0.5).abs() < 1e-25);
        assert!((m.get(1, 0).to_f64() - 0.5).abs() < 1e-25);
        assert!(m.get(0, 0).is_zero());
        // symmetric only numerically at a=1, not at the rational-function level
        assert!(!m.is_flagged_symmetric());
    }

    #[test]
    fn instantiate_single_site_zero() {
        let h = build_hamiltonian(1, Convention::Recurrence).unwrap();
        let m = instantiate(&h, &rat(7, 3), 20, false).unwrap();
        assert!(m.get(0, 0).is_zero());
    }

    #[test]
    fn instantiate_rejects_pole_and_nonpositive() {
        let h = build_hamiltonian(4, Convention::Displayed).unwrap();
        assert!(matches!(
            instantiate(&h, &rat_i64(0), 30, true),
            Err(Error::Pole { .. })
        ));
        assert!(matches!(
            instantiate(&h, &rat(-3, 7), 30, false),
            Err(Error::Precondition { .. })
        ));
        // the override lets valid negative couplings through
        assert!(instantiate(&h, &rat(-3, 7), 30, true).is_ok());
    }

    #[test]
    fn products_of_paired_offdiagonals_positive() {
        // H is similar to a symmetric matrix via a positive diagonal when
        // super * sub > 0; check instantiated samples.
        for n in 2..=10usize {
            for conv in [Convention::Displayed, Convention::Recurrence] {
                let h = build_hamiltonian(n, conv).unwrap();
                for a0 in [rat(1, 2), rat_i64(1), rat_i64(3)] {
                    for i in 0..n - 1 {
                        let p = h.get(i, i + 1).eval(&a0).unwrap()
                            * h.get(i + 1, i).eval(&a0).unwrap();
                        assert!(p.is_positive(), "n={n} i={i}");
                    }
                }
            }
        }
    }

    #[test]
    fn recurrence_eigensystem_is_exact() {
        for n in 2..=5usize {
            let rep = verify_eigensystem(n, &rat_i64(1), Convention::Recurrence, 30).unwrap();
            assert!(
                rep.max_residual.to_f64() < 1e-25,
                "n={n} residual {}",
                rep.max_residual.to_f64()
            );
            assert!(rep.spectral_gap.to_f64() < 1e-25, "n={n}");
        }
    }

    #[test]
    fn displayed_n3_has_documented_gap() {
        // eigenvalues of displayed H(1) at N=3: 0, +-sqrt(3/8)
        // Gegenbauer roots: 0, +-sqrt(1/2)
        let rep = verify_eigensystem(3, &rat_i64(1), Convention::Displayed, 30).unwrap();
        let expected = BigFloat::from_rational(&rat(1, 2), 200)
            .sqrt()
            .sub(&BigFloat::from_rational(&rat(3, 8), 200).sqrt());
        assert!(rep.spectral_gap.sub(&expected).abs().to_f64() < 1e-25);
        assert!(rep.max_residual.to_f64() > 1e-3);
    }

    #[test]
    fn n2_conventions_agree_spectrally() {
        let rep = verify_eigensystem(2, &rat_i64(1), Convention::Displayed, 30).unwrap();
        assert!(rep.max_residual.to_f64() < 1e-25);
        assert!(rep.spectral_gap.to_f64() < 1e-25);
    }
}
