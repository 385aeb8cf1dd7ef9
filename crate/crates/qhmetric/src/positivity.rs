//! Positive-definiteness domains, eigenvalue curves, characteristic
//! polynomials, and the hermitizing similarity transform.
//!
//! Positivity verdicts on exact rational matrices use Sylvester's criterion
//! (leading principal minors, fraction-free determinants), so domain
//! boundaries are refined by exact bisection with no numeric band at all.
//! Numeric verdicts go through the high-precision Jacobi eigensolver and
//! carry an explicit indeterminate state instead of a silent boolean.
//!
//! The eigensolver is a cyclic two-sided Jacobi rotation iteration. That
//! choice (rather than tridiagonalization + QR) keeps good relative accuracy
//! for the tiny eigenvalues of the strongly multiscale metrics.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::bigfloat::{bits_for_digits, BigFloat};
use crate::dieudonne::pseudometric_basis;
use crate::error::{Error, Result};
use crate::hamiltonian::Convention;
use crate::matrix::{NumericMatrix, RatMatrix};
use crate::poly::RatPoly;
use crate::rational::{rat_i64, Rational};

// ---------------------------------------------------------------------------
// symmetric eigensolver

#[derive(Debug, Clone)]
pub struct SymEigen {
    /// Ascending eigenvalues.
    pub eigenvalues: Vec<BigFloat>,
    /// Orthonormal eigenvectors as columns, aligned with `eigenvalues`.
    pub eigenvectors: NumericMatrix,
}

/// Eigendecomposition of a symmetric matrix by cyclic Jacobi rotations,
/// iterated until the off-diagonal Frobenius norm falls below
/// 10^(8-digits) relative to the matrix norm.
pub fn sym_eigen(m: &NumericMatrix, digits: u32) -> Result<SymEigen> {
    if !m.is_flagged_symmetric() {
        return Err(Error::NotSymmetric { i: 0, j: 0 });
    }
    let n = m.n();
    let prec = bits_for_digits(digits);
    let mut a = NumericMatrix::zero(n, prec);
    for i in 0..n {
        for j in 0..n {
            a.set(i, j, m.get(i, j).clone());
        }
    }
    let mut v = NumericMatrix::identity(n, prec);
    if n == 0 {
        return Ok(SymEigen {
            eigenvalues: vec![],
            eigenvectors: v,
        });
    }

    let norm = frobenius(&a);
    let tol_rel = pow10(8i64 - digits as i64, prec);
    let target = norm.mul(&tol_rel);
    let one = BigFloat::one(prec);
    let half = BigFloat::from_rational(&Rational::new(1.into(), 2.into()), prec);

    let mut sweeps = 0usize;
    while off_frobenius(&a).cmp_value(&target) == std::cmp::Ordering::Greater {
        sweeps += 1;
        if sweeps > 60 {
            return Err(Error::Numerical(
                "Jacobi iteration did not converge in 60 sweeps".into(),
            ));
        }
        for p in 0..n - 1 {
            for q in (p + 1)..n {
                let apq = a.get(p, q).clone();
                if apq.is_zero() {
                    continue;
                }
                let diff = a.get(q, q).sub(a.get(p, p));
                // tan of the rotation angle
                let t = if diff.is_zero() {
                    if apq.is_positive() {
                        one.clone()
                    } else {
                        one.neg()
                    }
                } else {
                    let theta = diff.mul(&half).div(&apq);
                    let root = one.add(&theta.mul(&theta)).sqrt();
                    let denom = theta.abs().add(&root);
                    let t = one.div(&denom);
                    if theta.is_negative() {
                        t.neg()
                    } else {
                        t
                    }
                };
                let c = one.div(&one.add(&t.mul(&t)).sqrt());
                let s = t.mul(&c);

                // A <- J^T A J on rows/cols p, q
                for k in 0..n {
                    let akp = a.get(k, p).clone();
                    let akq = a.get(k, q).clone();
                    a.set(k, p, akp.mul(&c).sub(&akq.mul(&s)));
                    a.set(k, q, akp.mul(&s).add(&akq.mul(&c)));
                }
                for k in 0..n {
                    let apk = a.get(p, k).clone();
                    let aqk = a.get(q, k).clone();
                    a.set(p, k, apk.mul(&c).sub(&aqk.mul(&s)));
                    a.set(q, k, apk.mul(&s).add(&aqk.mul(&c)));
                }
                for k in 0..n {
                    let vkp = v.get(k, p).clone();
                    let vkq = v.get(k, q).clone();
                    v.set(k, p, vkp.mul(&c).sub(&vkq.mul(&s)));
                    v.set(k, q, vkp.mul(&s).add(&vkq.mul(&c)));
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&x, &y| a.get(x, x).cmp_value(a.get(y, y)));
    let eigenvalues: Vec<BigFloat> = order.iter().map(|&k| a.get(k, k).clone()).collect();
    let mut vectors = NumericMatrix::zero(n, prec);
    for (col, &k) in order.iter().enumerate() {
        for row in 0..n {
            vectors.set(row, col, v.get(row, k).clone());
        }
    }
    vectors.set_symmetric_flag(false);
    Ok(SymEigen {
        eigenvalues,
        eigenvectors: vectors,
    })
}

fn frobenius(a: &NumericMatrix) -> BigFloat {
    let n = a.n();
    let prec = a.get(0, 0).precision();
    let mut acc = BigFloat::zero(prec);
    for i in 0..n {
        for j in 0..n {
            let e = a.get(i, j);
            acc = acc.add(&e.mul(e));
        }
    }
    acc.sqrt()
}

fn off_frobenius(a: &NumericMatrix) -> BigFloat {
    let n = a.n();
    let prec = a.get(0, 0).precision();
    let mut acc = BigFloat::zero(prec);
    for i in 0..n {
        for j in 0..n {
            if i != j {
                let e = a.get(i, j);
                acc = acc.add(&e.mul(e));
            }
        }
    }
    acc.sqrt()
}

fn pow10(exp: i64, prec: u32) -> BigFloat {
    let base = BigInt::from(10);
    let r = if exp >= 0 {
        Rational::from_integer(base.pow(exp as u32))
    } else {
        Rational::new(BigInt::one(), base.pow((-exp) as u32))
    };
    BigFloat::from_rational(&r, prec)
}

// ---------------------------------------------------------------------------
// characteristic polynomials

/// Exact coefficients of det(M - lambda I), ascending in lambda, by the
/// Faddeev-LeVerrier recurrence over the rationals.
pub fn char_poly_exact(m: &RatMatrix) -> Result<RatPoly> {
    let n = m.n();
    // p(l) = det(l I - M) = l^n + a_{n-1} l^{n-1} + ... + a_0
    let mut coeffs = vec![Rational::zero(); n + 1];
    coeffs[n] = Rational::one();
    let mut aux = RatMatrix::zero(n);
    for k in 1..=n {
        // aux <- M * aux + a_{n-k+1} I
        let mut next = m.mul(&aux)?;
        let shift = coeffs[n - k + 1].clone();
        for i in 0..n {
            let d = next.get(i, i) + &shift;
            next.set(i, i, d);
        }
        let prod = m.mul(&next)?;
        let mut trace = Rational::zero();
        for i in 0..n {
            trace += prod.get(i, i);
        }
        coeffs[n - k] = -trace / Rational::from_integer(BigInt::from(k));
        aux = next;
    }
    // det(M - l I) = (-1)^n p(l)
    if n % 2 == 1 {
        for c in coeffs.iter_mut() {
            *c = -c.clone();
        }
    }
    Ok(RatPoly::new(coeffs))
}

/// High-precision coefficients of det(M - lambda I) for numeric matrices.
pub fn char_poly_numeric(m: &NumericMatrix, digits: u32) -> Result<Vec<BigFloat>> {
    let n = m.n();
    let prec = bits_for_digits(digits);
    let mut coeffs = vec![BigFloat::zero(prec); n + 1];
    coeffs[n] = BigFloat::one(prec);
    let mut aux = NumericMatrix::zero(n, prec);
    for k in 1..=n {
        let mut next = m.mul(&aux)?;
        for i in 0..n {
            let d = next.get(i, i).add(&coeffs[n - k + 1]);
            next.set(i, i, d);
        }
        let prod = m.mul(&next)?;
        let mut trace = BigFloat::zero(prec);
        for i in 0..n {
            trace = trace.add(prod.get(i, i));
        }
        coeffs[n - k] = trace.div(&BigFloat::from_i64(k as i64, prec)).neg();
        aux = next;
    }
    if n % 2 == 1 {
        for c in coeffs.iter_mut() {
            *c = c.neg();
        }
    }
    Ok(coeffs)
}

// ---------------------------------------------------------------------------
// positive definiteness

/// Exact determinant by fraction-free (Bareiss) elimination.
pub fn det_exact(m: &RatMatrix) -> Rational {
    let n = m.n();
    if n == 0 {
        return Rational::one();
    }
    // clear denominators per row, track the scaling
    let mut scale = Rational::one();
    let mut a: Vec<Vec<BigInt>> = (0..n)
        .map(|i| {
            let mut lcm = BigInt::one();
            for j in 0..n {
                lcm = lcm.lcm(m.get(i, j).denom());
            }
            scale *= Rational::from_integer(lcm.clone());
            (0..n)
                .map(|j| m.get(i, j).numer() * (&lcm / m.get(i, j).denom()))
                .collect()
        })
        .collect();

    let mut sign = 1i64;
    let mut prev = BigInt::one();
    for k in 0..n {
        if a[k][k].is_zero() {
            let Some(p) = ((k + 1)..n).find(|&p| !a[p][k].is_zero()) else {
                return Rational::zero();
            };
            a.swap(k, p);
            sign = -sign;
        }
        for i in (k + 1)..n {
            for j in (k + 1)..n {
                let num = &a[k][k] * &a[i][j] - &a[i][k] * &a[k][j];
                let (q, r) = num.div_rem(&prev);
                debug_assert!(r.is_zero());
                a[i][j] = q;
            }
            a[i][k] = BigInt::zero();
        }
        prev = a[k][k].clone();
    }
    Rational::from_integer(a[n - 1][n - 1].clone() * BigInt::from(sign)) / scale
}

/// Leading principal minors det(M[..k][..k]) for k = 1..=n.
pub fn leading_principal_minors(m: &RatMatrix) -> Vec<Rational> {
    let n = m.n();
    (1..=n)
        .map(|k| {
            let mut sub = RatMatrix::zero(k);
            for i in 0..k {
                for j in 0..k {
                    sub.set(i, j, m.get(i, j).clone());
                }
            }
            det_exact(&sub)
        })
        .collect()
}

/// Exact Sylvester test on a symmetric rational matrix.
/// Returns Ok(None) when positive definite, Ok(Some(k)) with the 1-based
/// index of the first non-positive leading principal minor otherwise.
pub fn is_positive_definite_exact(m: &RatMatrix) -> Result<Option<usize>> {
    for i in 0..m.n() {
        for j in (i + 1)..m.n() {
            if m.get(i, j) != m.get(j, i) {
                return Err(Error::NotSymmetric { i, j });
            }
        }
    }
    for (k, minor) in leading_principal_minors(m).iter().enumerate() {
        if !minor.is_positive() {
            return Ok(Some(k + 1));
        }
    }
    Ok(None)
}

/// Three-valued numeric verdict.
#[derive(Debug, Clone)]
pub enum PdVerdict {
    PositiveDefinite { min_eigenvalue: BigFloat },
    NotPositiveDefinite { min_eigenvalue: BigFloat },
    Indeterminate { min_eigenvalue: BigFloat, band: BigFloat },
}

/// Numeric positive-definiteness with an explicit indeterminate band of
/// 10 * 10^(8-digits) * max|entry| around zero.
pub fn is_positive_definite_numeric(m: &NumericMatrix, digits: u32) -> Result<PdVerdict> {
    let eig = sym_eigen(m, digits)?;
    let min = eig.eigenvalues[0].clone();
    let prec = bits_for_digits(digits);
    let scale = m.max_abs().max_value(&BigFloat::one(prec));
    let band = scale
        .mul(&pow10(8i64 - digits as i64, prec))
        .mul(&BigFloat::from_i64(10, prec));
    if min.cmp_value(&band) == std::cmp::Ordering::Greater {
        Ok(PdVerdict::PositiveDefinite {
            min_eigenvalue: min,
        })
    } else if min.cmp_value(&band.neg()) == std::cmp::Ordering::Less {
        Ok(PdVerdict::NotPositiveDefinite {
            min_eigenvalue: min,
        })
    } else {
        Ok(PdVerdict::Indeterminate {
            min_eigenvalue: min,
            band,
        })
    }
}

// ---------------------------------------------------------------------------
// parameter lines and domain scans

/// One-dimensional slice kappa(t) = base + t * direction through the
/// N-parameter metric family.
#[derive(Debug, Clone)]
pub struct ParameterLine {
    pub base: Vec<Rational>,
    pub direction: Vec<Rational>,
    pub t_min: Rational,
    pub t_max: Rational,
    pub grid_points: usize,
}

impl ParameterLine {
    pub fn new(
        base: Vec<Rational>,
        direction: Vec<Rational>,
        t_min: Rational,
        t_max: Rational,
        grid_points: usize,
    ) -> Result<Self> {
        if direction.iter().all(|d| d.is_zero()) {
            return Err(Error::precondition(
                "direction",
                "direction must not be the zero vector",
            ));
        }
        if base.len() != direction.len() {
            return Err(Error::precondition(
                "line",
                "base and direction lengths differ",
            ));
        }
        if grid_points < 2 {
            return Err(Error::precondition("grid", "need at least 2 grid points"));
        }
        if t_min >= t_max {
            return Err(Error::precondition("range", "need t_min < t_max"));
        }
        Ok(ParameterLine {
            base,
            direction,
            t_min,
            t_max,
            grid_points,
        })
    }

    /// The toy slice: first row (2 a^2, 2 t a, 0, ..., 0), so t plays the
    /// role of the coupling g of the 3x3 toy metric.
    pub fn toy(
        n: usize,
        a0: &Rational,
        t_min: Rational,
        t_max: Rational,
        grid_points: usize,
    ) -> Result<Self> {
        let two_a_sq = rat_i64(2) * a0 * a0;
        let mut base = vec![Rational::zero(); n];
        base[0] = two_a_sq;
        let mut direction = vec![Rational::zero(); n];
        if n >= 2 {
            direction[1] = rat_i64(2) * a0;
        } else {
            direction[0] = Rational::one();
        }
        ParameterLine::new(base, direction, t_min, t_max, grid_points)
    }

    /// Repository default line: base is the toy first row at g = 0
    /// (2 a^2, 0, ..., 0), direction the second unit vector.
    pub fn default_line(
        n: usize,
        a0: &Rational,
        t_min: Rational,
        t_max: Rational,
        grid_points: usize,
    ) -> Result<Self> {
        let two_a_sq = rat_i64(2) * a0 * a0;
        let mut base = vec![Rational::zero(); n];
        base[0] = two_a_sq;
        let mut direction = vec![Rational::zero(); n];
        direction[if n >= 2 { 1 } else { 0 }] = Rational::one();
        ParameterLine::new(base, direction, t_min, t_max, grid_points)
    }

    pub fn grid(&self) -> Vec<Rational> {
        let span = &self.t_max - &self.t_min;
        let steps = Rational::from_integer(BigInt::from(self.grid_points as i64 - 1));
        (0..self.grid_points)
            .map(|k| {
                &self.t_min + &span * Rational::from_integer(BigInt::from(k as i64)) / &steps
            })
            .collect()
    }

    pub fn kappa_at(&self, t: &Rational) -> Vec<Rational> {
        self.base
            .iter()
            .zip(&self.direction)
            .map(|(b, d)| b + d * t)
            .collect()
    }
}

/// An interval of certified positive definiteness.
#[derive(Debug, Clone)]
pub struct PositivityInterval {
    pub lo: Rational,
    pub hi: Rational,
    /// True when the interval runs into the scanned range edge, i.e. the
    /// boundary is open there rather than bracketed.
    pub lo_open_at_edge: bool,
    pub hi_open_at_edge: bool,
}

#[derive(Debug, Clone)]
pub struct DomainScan {
    pub line: ParameterLine,
    pub a0: Rational,
    pub ts: Vec<Rational>,
    /// Per grid point, ascending eigenvalues p_1..p_N.
    pub curves: Vec<Vec<BigFloat>>,
    pub intervals: Vec<PositivityInterval>,
    pub digits: u32,
    pub refine_tol: Rational,
}

/// Instantiated pseudometric basis at a = a0.
pub fn instantiated_basis(
    n: usize,
    convention: Convention,
    a0: &Rational,
) -> Result<Vec<RatMatrix>> {
    let sol = pseudometric_basis(n, convention)?;
    sol.basis.iter().map(|p| p.instantiate(a0)).collect()
}

fn theta_at(basis: &[RatMatrix], kappa: &[Rational]) -> Result<RatMatrix> {
    let n = basis[0].n();
    let mut theta = RatMatrix::zero(n);
    for (p, k) in basis.iter().zip(kappa) {
        theta = theta.add_scaled(p, k)?;
    }
    Ok(theta)
}

/// Scans Theta(kappa(t)) along a parameter line: eigenvalue curves at every
/// grid point plus positivity intervals with boundaries refined by exact
/// Sylvester bisection to below `refine_tol`.
pub fn scan_domain(
    n: usize,
    convention: Convention,
    a0: &Rational,
    line: &ParameterLine,
    digits: u32,
    refine_tol: &Rational,
) -> Result<DomainScan> {
    if line.base.len() != n {
        return Err(Error::precondition(
            "line",
            format!("line dimension {} does not match N = {n}", line.base.len()),
        ));
    }
    if !refine_tol.is_positive() {
        return Err(Error::precondition("refine_tol", "must be positive"));
    }
    let basis = instantiated_basis(n, convention, a0)?;
    let ts = line.grid();

    let mut curves = Vec::with_capacity(ts.len());
    let mut pd_flags = Vec::with_capacity(ts.len());
    for t in &ts {
        let theta = theta_at(&basis, &line.kappa_at(t))?;
        let numeric = theta.to_numeric(bits_for_digits(digits));
        let eig = sym_eigen(&numeric, digits)?;
        curves.push(eig.eigenvalues);
        pd_flags.push(is_positive_definite_exact(&theta)?.is_none());
    }

    // maximal PD runs on the grid, boundaries refined between grid neighbors
    let mut intervals = Vec::new();
    let mut k = 0usize;
    let pd_at = |t: &Rational| -> Result<bool> {
        let theta = theta_at(&basis, &line.kappa_at(t))?;
        Ok(is_positive_definite_exact(&theta)?.is_none())
    };
    while k < ts.len() {
        if !pd_flags[k] {
            k += 1;
            continue;
        }
        let run_start = k;
        while k + 1 < ts.len() && pd_flags[k + 1] {
            k += 1;
        }
        let run_end = k;
        let (lo, lo_open) = if run_start == 0 {
            (ts[0].clone(), true)
        } else {
            (
                refine_boundary(&pd_at, ts[run_start - 1].clone(), ts[run_start].clone(), refine_tol)?,
                false,
            )
        };
        let (hi, hi_open) = if run_end + 1 == ts.len() {
            (ts[run_end].clone(), true)
        } else {
            (
                refine_boundary(&pd_at, ts[run_end + 1].clone(), ts[run_end].clone(), refine_tol)?,
                false,
            )
        };
        intervals.push(PositivityInterval {
            lo,
            hi,
            lo_open_at_edge: lo_open,
            hi_open_at_edge: hi_open,
        });
        k += 1;
    }

    Ok(DomainScan {
        line: line.clone(),
        a0: a0.clone(),
        ts,
        curves,
        intervals,
        digits,
        refine_tol: refine_tol.clone(),
    })
}

/// Bisects between a non-PD point and a PD point until the bracket is below
/// `tol`; returns the midpoint of the final bracket.
fn refine_boundary(
    pd_at: &dyn Fn(&Rational) -> Result<bool>,
    mut outside: Rational,
    mut inside: Rational,
    tol: &Rational,
) -> Result<Rational> {
    let two = Rational::from_integer(2.into());
    while (&outside - &inside).abs() > *tol {
        let mid = (&outside + &inside) / &two;
        if pd_at(&mid)? {
            inside = mid;
        } else {
            outside = mid;
        }
    }
    Ok((&outside + &inside) / &two)
}

/// Tabulated eigenvalue curves along a line, optionally in natural log.
#[derive(Debug, Clone)]
pub struct CurveTable {
    pub ts: Vec<Rational>,
    /// curves[j][k]: eigenvalue j at grid point k.
    pub curves: Vec<Vec<BigFloat>>,
    pub log_scale: bool,
    /// In log mode, ln p_j(t_k) where p > 0; None marks nonpositive entries.
    pub log_curves: Option<Vec<Vec<Option<f64>>>>,
    pub digits: u32,
}

/// Eigenvalue curves p_1..p_N along a line. With `log_scale`, natural logs
/// of positive values are tabulated alongside and nonpositive entries are
/// marked. The log transform is display-only; the engine always computes
/// true eigenvalues.
pub fn eigencurves(
    n: usize,
    convention: Convention,
    a0: &Rational,
    line: &ParameterLine,
    digits: u32,
    log_scale: bool,
) -> Result<CurveTable> {
    if line.base.len() != n {
        return Err(Error::precondition(
            "line",
            format!("line dimension {} does not match N = {n}", line.base.len()),
        ));
    }
    let basis = instantiated_basis(n, convention, a0)?;
    let ts = line.grid();
    let mut per_point = Vec::with_capacity(ts.len());
    for t in &ts {
        let theta = theta_at(&basis, &line.kappa_at(t))?;
        let numeric = theta.to_numeric(bits_for_digits(digits));
        per_point.push(sym_eigen(&numeric, digits)?.eigenvalues);
    }
    // transpose to per-curve layout
    let mut curves = vec![Vec::with_capacity(ts.len()); n];
    for point in &per_point {
        for (j, v) in point.iter().enumerate() {
            curves[j].push(v.clone());
        }
    }
    let log_curves = log_scale.then(|| {
        curves
            .iter()
            .map(|curve| {
                curve
                    .iter()
                    .map(|p| p.is_positive().then(|| p.ln_f64()))
                    .collect()
            })
            .collect()
    });
    Ok(CurveTable {
        ts,
        curves,
        log_scale,
        log_curves,
        digits,
    })
}

// ---------------------------------------------------------------------------
// hermitization

/// The similarity transform h = Omega H Omega^{-1} with Omega the unique
/// symmetric positive-definite square root of Theta.
#[derive(Debug, Clone)]
pub struct Hermitization {
    pub omega: NumericMatrix,
    pub h: NumericMatrix,
    /// max |h - h^T| entry.
    pub symmetry_defect: BigFloat,
    /// max |Omega Omega - Theta| entry.
    pub sqrt_defect: BigFloat,
    pub digits: u32,
}

pub fn hermitize(
    h_num: &NumericMatrix,
    theta_num: &NumericMatrix,
    digits: u32,
) -> Result<Hermitization> {
    if h_num.n() != theta_num.n() {
        return Err(Error::DimensionMismatch("hermitize".into()));
    }
    let eig = sym_eigen(theta_num, digits)?;
    match is_positive_definite_numeric(theta_num, digits)? {
        PdVerdict::PositiveDefinite { .. } => {}
        PdVerdict::NotPositiveDefinite { min_eigenvalue } => {
            return Err(Error::NotPositiveDefinite {
                witness: format!("min eigenvalue {}", min_eigenvalue.to_decimal(6)),
            });
        }
        PdVerdict::Indeterminate {
            min_eigenvalue,
            band,
        } => {
            return Err(Error::Indeterminate {
                min_eigenvalue: min_eigenvalue.to_decimal(6),
                band: band.to_decimal(6),
            });
        }
    }
    let n = theta_num.n();
    let prec = bits_for_digits(digits);
    // Omega = V sqrt(L) V^T, Omega^{-1} = V (1/sqrt(L)) V^T
    let v = &eig.eigenvectors;
    let mut omega = NumericMatrix::zero(n, prec);
    let mut omega_inv = NumericMatrix::zero(n, prec);
    let sqrts: Vec<BigFloat> = eig.eigenvalues.iter().map(|l| l.sqrt()).collect();
    for i in 0..n {
        for j in 0..n {
            let mut acc = BigFloat::zero(prec);
            let mut acc_inv = BigFloat::zero(prec);
            for (k, sk) in sqrts.iter().enumerate() {
                let w = v.get(i, k).mul(v.get(j, k));
                acc = acc.add(&w.mul(sk));
                acc_inv = acc_inv.add(&w.div(sk));
            }
            omega.set(i, j, acc);
            omega_inv.set(i, j, acc_inv);
        }
    }
    omega.set_symmetric_flag(true);
    let h = omega.mul(h_num)?.mul(&omega_inv)?;
    let symmetry_defect = h.symmetry_defect();
    let sqrt_defect = omega
        .mul(&omega)?
        .sub(theta_num)?
        .max_abs();
    Ok(Hermitization {
        omega,
        h,
        symmetry_defect,
        sqrt_defect,
        digits,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dieudonne::solve_metric;
    use crate::hamiltonian::{build_hamiltonian, instantiate};
    use crate::rational::rat;
    use crate::ratfunc::{parse_ratfunc, RatFunc};
    use std::collections::HashMap;

    fn toy_theta_rat(g: &Rational) -> RatMatrix {
        // Theta_g^(3)(1) = [[2, 2g, 0], [2g, 2, g], [0, g, 1]]
        let mut m = RatMatrix::zero(3);
        m.set(0, 0, rat_i64(2));
        m.set(0, 1, rat_i64(2) * g);
        m.set(1, 0, rat_i64(2) * g);
        m.set(1, 1, rat_i64(2));
        m.set(1, 2, g.clone());
        m.set(2, 1, g.clone());
        m.set(2, 2, rat_i64(1));
        m
    }

    #[test]
    fn jacobi_diagonal_matrix() {
        // toy metric at a=1, g=0 is diag(2, 2, 1): eigenvalues {1, 2, 2}
        let m = toy_theta_rat(&Rational::zero()).to_numeric(200);
        let eig = sym_eigen(&m, 40).unwrap();
        assert!((eig.eigenvalues[0].to_f64() - 1.0).abs() < 1e-30);
        assert!((eig.eigenvalues[1].to_f64() - 2.0).abs() < 1e-30);
        assert!((eig.eigenvalues[2].to_f64() - 2.0).abs() < 1e-30);
    }

    #[test]
    fn jacobi_identity() {
        let m = RatMatrix::identity(4).to_numeric(200);
        let eig = sym_eigen(&m, 40).unwrap();
        for v in &eig.eigenvalues {
            assert!((v.to_f64() - 1.0).abs() < 1e-35);
        }
    }

    #[test]
    fn jacobi_rejects_asymmetric() {
        let mut m = NumericMatrix::zero(2, 64);
        m.set(0, 1, BigFloat::one(64));
        m.set_symmetric_flag(false);
        assert!(matches!(sym_eigen(&m, 20), Err(Error::NotSymmetric { .. })));
    }

    #[test]
    fn jacobi_trace_and_det_consistency() {
        let g = rat(2, 5);
        let theta = toy_theta_rat(&g);
        let eig = sym_eigen(&theta.to_numeric(200), 40).unwrap();
        let sum: f64 = eig.eigenvalues.iter().map(|v| v.to_f64()).sum();
        let trace = 5.0;
        assert!((sum - trace).abs() < 1e-30);
        let prod: f64 = eig.eigenvalues.iter().map(|v| v.to_f64()).product();
        let det = crate::rational::rational_to_f64(&det_exact(&theta));
        assert!((prod - det).abs() < 1e-12);
    }

    #[test]
    fn jacobi_multiscale_relative_accuracy() {
        // diag(1, 1e-30) with small coupling: the tiny eigenvalue keeps
        // relative accuracy
        let mut m = RatMatrix::zero(2);
        m.set(0, 0, rat_i64(1));
        m.set(1, 1, Rational::new(1.into(), BigInt::from(10).pow(30)));
        let tiny = Rational::new(1.into(), BigInt::from(10).pow(35));
        m.set(0, 1, tiny.clone());
        m.set(1, 0, tiny);
        let eig = sym_eigen(&m.to_numeric(bits_for_digits(50)), 50).unwrap();
        let small = &eig.eigenvalues[0];
        // perturbation of the 1e-30 eigenvalue is ~ -1e-70/(1) ~ negligible
        let expected = BigFloat::from_rational(
            &Rational::new(1.into(), BigInt::from(10).pow(30)),
            bits_for_digits(50),
        );
        let rel = small.sub(&expected).abs().div(&expected);
        assert!(rel.to_f64() < 1e-8, "relative error {}", rel.to_f64());
    }

    #[test]
    fn char_poly_toy_metric() {
        // det(Theta - l I) = -l^3 + 5 l^2 - (8 - 5g^2) l + (4 - 6g^2)
        for g in [rat(1, 2), rat(-2, 3), rat(7, 9)] {
            let cp = char_poly_exact(&toy_theta_rat(&g)).unwrap();
            let g2 = &g * &g;
            assert_eq!(cp.coeff(3), rat_i64(-1));
            assert_eq!(cp.coeff(2), rat_i64(5));
            assert_eq!(cp.coeff(1), -(rat_i64(8) - rat_i64(5) * &g2));
            assert_eq!(cp.coeff(0), rat_i64(4) - rat_i64(6) * &g2);
        }
    }

    #[test]
    fn char_poly_trivial_cases() {
        // identity 2x2: l^2 - 2l + 1
        let cp = char_poly_exact(&RatMatrix::identity(2)).unwrap();
        assert_eq!(cp, RatPoly::from_i64(&[1, -2, 1]));
        // zero 3x3: -l^3
        let cp = char_poly_exact(&RatMatrix::zero(3)).unwrap();
        assert_eq!(cp, RatPoly::from_i64(&[0, 0, 0, -1]));
    }

    #[test]
    fn char_poly_numeric_matches_exact() {
        let g = rat(1, 3);
        let theta = toy_theta_rat(&g);
        let exact = char_poly_exact(&theta).unwrap();
        let numeric = char_poly_numeric(&theta.to_numeric(200), 40).unwrap();
        for (k, c) in numeric.iter().enumerate() {
            let e = BigFloat::from_rational(&exact.coeff(k), 200);
            assert!(c.sub(&e).abs().to_f64() < 1e-30, "coeff {k}");
        }
    }

    #[test]
    fn sylvester_toy_metric() {
        // PD iff g^2 < 2/3
        assert!(is_positive_definite_exact(&toy_theta_rat(&Rational::zero()))
            .unwrap()
            .is_none());
        assert!(is_positive_definite_exact(&toy_theta_rat(&rat(1, 2)))
            .unwrap()
            .is_none());
        // g = 1: the 2nd minor 4 - 4g^2 already hits zero
        assert_eq!(
            is_positive_definite_exact(&toy_theta_rat(&rat_i64(1))).unwrap(),
            Some(2)
        );
        // g = 9/10: 2nd minor positive but det = 4 - 6g^2 < 0
        assert_eq!(
            is_positive_definite_exact(&toy_theta_rat(&rat(9, 10))).unwrap(),
            Some(3)
        );
        // theta_11 = 0 fails at the first minor
        let mut z = RatMatrix::zero(2);
        z.set(1, 1, rat_i64(1));
        assert_eq!(is_positive_definite_exact(&z).unwrap(), Some(1));
    }

    #[test]
    fn numeric_pd_verdicts() {
        let pd = toy_theta_rat(&rat(1, 2)).to_numeric(200);
        assert!(matches!(
            is_positive_definite_numeric(&pd, 40).unwrap(),
            PdVerdict::PositiveDefinite { .. }
        ));
        let npd = toy_theta_rat(&rat_i64(1)).to_numeric(200);
        assert!(matches!(
            is_positive_definite_numeric(&npd, 40).unwrap(),
            PdVerdict::NotPositiveDefinite { .. }
        ));
        // singular at the boundary g = sqrt(2/3): indeterminate by design;
        // emulate with an exactly singular diag(1, 0) matrix
        let mut sing = RatMatrix::identity(2);
        sing.set(1, 1, Rational::zero());
        assert!(matches!(
            is_positive_definite_numeric(&sing.to_numeric(200), 40).unwrap(),
            PdVerdict::Indeterminate { .. }
        ));
    }

    #[test]
    fn scan_finds_toy_boundary() {
        let line = ParameterLine::toy(3, &rat_i64(1), rat_i64(-1), rat_i64(1), 41).unwrap();
        let tol = Rational::new(1.into(), BigInt::from(10).pow(12));
        let scan = scan_domain(3, Convention::Displayed, &rat_i64(1), &line, 30, &tol).unwrap();
        assert_eq!(scan.intervals.len(), 1);
        let iv = &scan.intervals[0];
        let expected = (2.0f64 / 3.0).sqrt();
        let lo = crate::rational::rational_to_f64(&iv.lo);
        let hi = crate::rational::rational_to_f64(&iv.hi);
        assert!((lo + expected).abs() < 1e-10, "lo = {lo}");
        assert!((hi - expected).abs() < 1e-10, "hi = {hi}");
        assert!(!iv.lo_open_at_edge && !iv.hi_open_at_edge);
    }

    #[test]
    fn scan_flags_open_edges() {
        // scan inside the PD region only: both edges open
        let line = ParameterLine::toy(
            3,
            &rat_i64(1),
            rat(-1, 2),
            rat(1, 2),
            11,
        )
        .unwrap();
        let tol = Rational::new(1.into(), BigInt::from(10).pow(10));
        let scan = scan_domain(3, Convention::Displayed, &rat_i64(1), &line, 25, &tol).unwrap();
        assert_eq!(scan.intervals.len(), 1);
        assert!(scan.intervals[0].lo_open_at_edge);
        assert!(scan.intervals[0].hi_open_at_edge);
    }

    #[test]
    fn direction_zero_rejected() {
        let err = ParameterLine::new(
            vec![rat_i64(1)],
            vec![Rational::zero()],
            rat_i64(-1),
            rat_i64(1),
            11,
        );
        assert!(err.is_err());
    }

    #[test]
    fn sign_flip_spectral_invariance() {
        // Theta_g and Theta_{-g} are diagonally similar: same spectra
        let line = ParameterLine::toy(3, &rat_i64(1), rat_i64(-1), rat_i64(1), 21).unwrap();
        let scan = scan_domain(
            3,
            Convention::Displayed,
            &rat_i64(1),
            &line,
            30,
            &Rational::new(1.into(), BigInt::from(10).pow(10)),
        )
        .unwrap();
        let m = scan.ts.len();
        for k in 0..m {
            let mirror = m - 1 - k;
            for j in 0..3 {
                let d = scan.curves[k][j].sub(&scan.curves[mirror][j]).abs();
                assert!(d.to_f64() < 1e-20, "k={k} j={j}");
            }
        }
    }

    #[test]
    fn eigencurves_log_marks_nonpositive() {
        let line = ParameterLine::toy(3, &rat_i64(1), rat_i64(-1), rat_i64(1), 9).unwrap();
        let table = eigencurves(3, Convention::Displayed, &rat_i64(1), &line, 25, true).unwrap();
        let logs = table.log_curves.as_ref().unwrap();
        // at g = +-1 the smallest eigenvalue is negative: marked None
        assert!(logs[0][0].is_none());
        // and at g = 0 everything is positive
        let mid = table.ts.len() / 2;
        for j in 0..3 {
            assert!(logs[j][mid].is_some());
        }
    }

    #[test]
    fn hermitize_identity_metric() {
        // N=2, a=1, first row (1, 0): Theta = I, h = H already symmetric
        let theta = solve_metric(
            2,
            Convention::Displayed,
            &[RatFunc::one(), RatFunc::zero()],
        )
        .unwrap();
        let theta_num = instantiate_generic(&theta, &rat_i64(1), 40);
        let h = build_hamiltonian(2, Convention::Displayed).unwrap();
        let h_num = instantiate(&h, &rat_i64(1), 40, false).unwrap();
        let result = hermitize(&h_num, &theta_num, 40).unwrap();
        assert!(result.symmetry_defect.to_f64() < 1e-30);
        assert!(result.sqrt_defect.to_f64() < 1e-30);
        assert!((result.h.get(0, 1).to_f64() - 0.5).abs() < 1e-30);
        assert!((result.h.get(1, 0).to_f64() - 0.5).abs() < 1e-30);
    }

    fn instantiate_generic(
        m: &crate::matrix::RatFuncMatrix,
        a0: &Rational,
        digits: u32,
    ) -> NumericMatrix {
        let rm = m.instantiate(a0).unwrap();
        let mut nm = rm.to_numeric(bits_for_digits(digits));
        nm.set_symmetric_flag(m.is_symmetric());
        nm
    }

    #[test]
    fn hermitize_toy_metric_half() {
        let mut binds = HashMap::new();
        binds.insert("g".to_string(), rat(1, 2));
        let first_row = [
            parse_ratfunc("2a^2", "t", &binds).unwrap(),
            parse_ratfunc("2*g*a", "t", &binds).unwrap(),
            parse_ratfunc("0", "t", &binds).unwrap(),
        ];
        let theta = solve_metric(3, Convention::Displayed, &first_row).unwrap();
        let theta_num = instantiate_generic(&theta, &rat_i64(1), 50);
        let h = build_hamiltonian(3, Convention::Displayed).unwrap();
        let h_num = instantiate(&h, &rat_i64(1), 50, false).unwrap();
        let result = hermitize(&h_num, &theta_num, 50).unwrap();
        assert!(
            result.symmetry_defect.to_f64() < 1e-38,
            "defect {}",
            result.symmetry_defect.to_f64()
        );
        // isospectrality against the exact characteristic polynomial of H
        let h_rat = h.instantiate(&rat_i64(1)).unwrap();
        let cp = char_poly_exact(&h_rat).unwrap();
        let h_eigs = crate::roots::real_roots(&cp, 50).unwrap();
        let h_sym = result.h.symmetrize();
        let eig_h = sym_eigen(&h_sym, 50).unwrap();
        for (x, y) in h_eigs.iter().zip(eig_h.eigenvalues.iter()) {
            assert!(x.sub(y).abs().to_f64() < 1e-38);
        }
    }

    #[test]
    fn single_site_curve_is_the_first_row_entry() {
        // N=1: the only eigenvalue is theta_11 itself along the line
        let line = ParameterLine::toy(1, &rat_i64(1), rat_i64(-1), rat_i64(1), 5).unwrap();
        let table = eigencurves(1, Convention::Displayed, &rat_i64(1), &line, 25, false).unwrap();
        assert_eq!(table.curves.len(), 1);
        for (t, v) in table.ts.iter().zip(&table.curves[0]) {
            // kappa_1(t) = 2 a^2 + t at a=1
            let expected = rat_i64(2) + t;
            let err = v
                .sub(&BigFloat::from_rational(&expected, 200))
                .abs()
                .to_f64();
            assert!(err < 1e-20);
        }
    }

    #[test]
    fn exact_and_numeric_pd_verdicts_agree() {
        // away from the boundary sqrt(2/3), the two routes must coincide
        for (num, den) in [(0i64, 1i64), (1, 2), (-3, 5), (4, 5), (9, 10), (1, 1), (-7, 5)] {
            let g = rat(num, den);
            let theta = toy_theta_rat(&g);
            let exact_pd = is_positive_definite_exact(&theta).unwrap().is_none();
            let numeric = is_positive_definite_numeric(&theta.to_numeric(200), 40).unwrap();
            match numeric {
                PdVerdict::PositiveDefinite { .. } => assert!(exact_pd, "g={num}/{den}"),
                PdVerdict::NotPositiveDefinite { .. } => assert!(!exact_pd, "g={num}/{den}"),
                PdVerdict::Indeterminate { .. } => {
                    panic!("unexpected indeterminate verdict at g={num}/{den}")
                }
            }
        }
    }

    #[test]
    fn refined_boundary_brackets_the_sign_change() {
        let line = ParameterLine::toy(3, &rat_i64(1), rat_i64(-1), rat_i64(1), 21).unwrap();
        let tol = Rational::new(1.into(), BigInt::from(10).pow(9));
        let scan = scan_domain(3, Convention::Displayed, &rat_i64(1), &line, 25, &tol).unwrap();
        let basis = instantiated_basis(3, Convention::Displayed, &rat_i64(1)).unwrap();
        let pd_at = |t: &Rational| -> bool {
            let mut theta = RatMatrix::zero(3);
            for (p, kv) in basis.iter().zip(&line.kappa_at(t)) {
                theta = theta.add_scaled(p, kv).unwrap();
            }
            is_positive_definite_exact(&theta).unwrap().is_none()
        };
        for iv in &scan.intervals {
            // minimal eigenvalue changes sign across [t* - tol, t* + tol]
            assert!(!pd_at(&(&iv.lo - &tol)) && pd_at(&(&iv.lo + &tol)));
            assert!(pd_at(&(&iv.hi - &tol)) && !pd_at(&(&iv.hi + &tol)));
        }
    }

    #[test]
    fn jacobi_trace_det_on_random_spd_samples() {
        // random SPD matrices via B^T B + I over small rationals
        let seeds = [3i64, 11, 27];
        for (s, n) in seeds.iter().zip([3usize, 4, 5]) {
            let mut b = RatMatrix::zero(n);
            let mut state = *s;
            for i in 0..n {
                for j in 0..n {
                    state = (state * 31 + 17) % 101;
                    b.set(i, j, rat(state - 50, 13));
                }
            }
            let mut spd = b.transpose().mul(&b).unwrap();
            for i in 0..n {
                spd.set(i, i, spd.get(i, i) + rat_i64(1));
            }
            let eig = sym_eigen(&spd.to_numeric(bits_for_digits(40)), 40).unwrap();
            let mut sum = BigFloat::zero(200);
            let mut prod = BigFloat::one(200);
            for v in &eig.eigenvalues {
                sum = sum.add(v);
                prod = prod.mul(v);
            }
            let mut trace = Rational::zero();
            for i in 0..n {
                trace += spd.get(i, i);
            }
            let det = det_exact(&spd);
            let trace_err = sum
                .sub(&BigFloat::from_rational(&trace, 200))
                .abs()
                .div(&BigFloat::from_rational(&trace, 200))
                .to_f64();
            let det_err = prod
                .sub(&BigFloat::from_rational(&det, 200))
                .abs()
                .div(&BigFloat::from_rational(&det, 200).abs())
                .to_f64();
            assert!(trace_err.abs() < 1e-30, "n={n} trace err {trace_err}");
            assert!(det_err.abs() < 1e-30, "n={n} det err {det_err}");
        }
    }

    #[test]
    fn hermitize_rejects_non_spd() {
        let theta = toy_theta_rat(&rat_i64(1)).to_numeric(200);
        let h = build_hamiltonian(3, Convention::Displayed).unwrap();
        let h_num = instantiate(&h, &rat_i64(1), 40, false).unwrap();
        assert!(matches!(
            hermitize(&h_num, &theta, 40),
            Err(Error::NotPositiveDefinite { .. })
        ));
    }
}
