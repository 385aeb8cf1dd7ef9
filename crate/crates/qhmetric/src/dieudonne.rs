//! Exact solution of the quasi-Hermiticity equation H^T Theta = Theta H.
//!
//! The equation array M = H^T Theta - Theta H is antisymmetric for symmetric
//! Theta, so only the upper triangle matters. Processed in the diagonal-wise
//! order (1,N); (1,N-1),(2,N); ...; (1,2),...,(N-1,N), every equation
//! introduces exactly one not-yet-determined element of Theta, which is
//! eliminated by one exact rational-function division. The first row of
//! Theta stays free, so the solution space is an N-parameter family; the
//! elimination is run once with symbolic first-row coefficients and
//! everything else substitutes into that.
//!
//! A brute-force oracle sets up the full linear system at a fixed rational
//! coupling and computes its nullspace by fraction-free elimination,
//! independently of the recurrent path.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::hamiltonian::{build_hamiltonian, Convention};
use crate::matrix::{MatrixTag, RatFuncMatrix, RatMatrix};
use crate::rational::Rational;
use crate::ratfunc::RatFunc;

/// The ordered upper-triangle equation sequence, 1-based pairs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EquationOrdering {
    pub n: usize,
    pub sequence: Vec<(usize, usize)>,
}

/// Diagonal-wise ordering: anti-diagonal distance descending, row ascending.
pub fn order_equations(n: usize) -> Result<EquationOrdering> {
    if n < 2 {
        return Err(Error::precondition("N", "equation ordering needs N >= 2"));
    }
    let mut sequence = Vec::with_capacity(n * (n - 1) / 2);
    for d in (1..n).rev() {
        for i in 1..=(n - d) {
            sequence.push((i, i + d));
        }
    }
    Ok(EquationOrdering { n, sequence })
}

/// Entry of the symbolic metric: coefficients over the N first-row
/// parameters theta_{1,1}..theta_{1,N}.
#[derive(Debug, Clone, PartialEq)]
pub struct ParamVec {
    coeffs: Vec<RatFunc>,
}

impl ParamVec {
    fn zero(n: usize) -> Self {
        ParamVec {
            coeffs: vec![RatFunc::zero(); n],
        }
    }

    fn unit(n: usize, j: usize) -> Self {
        let mut v = ParamVec::zero(n);
        v.coeffs[j] = RatFunc::one();
        v
    }

    fn add(&self, other: &Self) -> Self {
        ParamVec {
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a.add(b))
                .collect(),
        }
    }

    fn sub(&self, other: &Self) -> Self {
        ParamVec {
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a.sub(b))
                .collect(),
        }
    }

    fn scale(&self, f: &RatFunc) -> Self {
        ParamVec {
            coeffs: self.coeffs.iter().map(|c| c.mul(f)).collect(),
        }
    }

    fn div(&self, f: &RatFunc) -> Result<Self> {
        Ok(ParamVec {
            coeffs: self
                .coeffs
                .iter()
                .map(|c| c.div(f))
                .collect::<Result<_>>()?,
        })
    }

    pub fn coeff(&self, j: usize) -> &RatFunc {
        &self.coeffs[j]
    }

    /// Substitute concrete first-row values.
    fn substitute(&self, first_row: &[RatFunc]) -> RatFunc {
        let mut acc = RatFunc::zero();
        for (c, v) in self.coeffs.iter().zip(first_row) {
            acc = acc.add(&c.mul(v));
        }
        acc
    }
}

/// Theta with entries linear in the free first-row parameters.
#[derive(Debug, Clone)]
pub struct SymbolicMetric {
    pub n: usize,
    pub convention: Convention,
    entries: Vec<ParamVec>,
}

impl SymbolicMetric {
    pub fn get(&self, i: usize, j: usize) -> &ParamVec {
        &self.entries[i * self.n + j]
    }

    fn set_symmetric(&mut self, i: usize, j: usize, value: ParamVec) {
        self.entries[i * self.n + j] = value.clone();
        self.entries[j * self.n + i] = value;
    }
}

/// Runs the diagonal-wise recurrent elimination once, with the first row of
/// Theta kept as free parameters. Verifies the one-new-unknown property of
/// every step as it goes.
pub fn solve_symbolic(n: usize, convention: Convention) -> Result<SymbolicMetric> {
    if n < 1 {
        return Err(Error::precondition("N", "metric construction needs N >= 1"));
    }
    let mut metric = SymbolicMetric {
        n,
        convention,
        entries: vec![ParamVec::zero(n); n * n],
    };
    let mut known = vec![vec![false; n]; n];
    for j in 0..n {
        metric.set_symmetric(0, j, ParamVec::unit(n, j));
        known[0][j] = true;
        known[j][0] = true;
    }
    if n == 1 {
        return Ok(metric);
    }

    let h = build_hamiltonian(n, convention)?;
    let superd = |r: usize| h.get(r, r + 1);
    let subd = |r: usize| h.get(r, r - 1);

    for &(i1, j1) in &order_equations(n)?.sequence {
        let (i, j) = (i1 - 1, j1 - 1); // 0-based
        // M[i][j] = super(i-1) T[i-1][j] + sub(i+1) T[i+1][j]
        //         - super(j-1) T[i][j-1] - sub(j+1) T[i][j+1] = 0,
        // out-of-range terms absent. The single new unknown is T[i+1][j].
        debug_assert!(i + 1 < n);
        if known[i + 1][j] {
            return Err(Error::Numerical(format!(
                "element ({},{}) already determined before its equation",
                i + 2,
                j + 1
            )));
        }
        let mut rhs = ParamVec::zero(n);
        if j >= 1 {
            if !known[i][j - 1] {
                return Err(Error::Numerical(format!(
                    "equation ({i1},{j1}) references undetermined element ({},{})",
                    i + 1, j
                )));
            }
            rhs = rhs.add(&metric.get(i, j - 1).scale(superd(j - 1)));
        }
        if j + 1 < n {
            if !known[i][j + 1] {
                return Err(Error::Numerical(format!(
                    "equation ({i1},{j1}) references undetermined element ({},{})",
                    i + 1,
                    j + 2
                )));
            }
            rhs = rhs.add(&metric.get(i, j + 1).scale(subd(j + 1)));
        }
        if i >= 1 {
            if !known[i - 1][j] {
                return Err(Error::Numerical(format!(
                    "equation ({i1},{j1}) references undetermined element ({},{})",
                    i, j + 1
                )));
            }
            rhs = rhs.sub(&metric.get(i - 1, j).scale(superd(i - 1)));
        }
        let pivot = subd(i + 1);
        if pivot.is_zero() {
            return Err(Error::DegeneratePivot { i: i + 2, j: j + 1 });
        }
        let value = rhs.div(pivot)?;
        metric.set_symmetric(i + 1, j, value);
        known[i + 1][j] = true;
        known[j][i + 1] = true;
    }

    for (idx, row) in known.iter().enumerate() {
        for (jdx, &k) in row.iter().enumerate() {
            if !k {
                return Err(Error::Numerical(format!(
                    "element ({},{}) left undetermined",
                    idx + 1,
                    jdx + 1
                )));
            }
        }
    }
    Ok(metric)
}

/// The N-parameter family: basis pseudometrics P_j with unit first rows,
/// Theta(kappa) = sum_j kappa_j P_j.
#[derive(Debug, Clone)]
pub struct MetricSolution {
    pub n: usize,
    pub convention: Convention,
    pub basis: Vec<RatFuncMatrix>,
    pub parameter_names: Vec<String>,
}

pub fn pseudometric_basis(n: usize, convention: Convention) -> Result<MetricSolution> {
    let symbolic = solve_symbolic(n, convention)?;
    let mut basis = Vec::with_capacity(n);
    for j in 0..n {
        let mut p = RatFuncMatrix::zero(n, MatrixTag::Generic);
        for r in 0..n {
            for c in 0..n {
                p.set(r, c, symbolic.get(r, c).coeff(j).clone());
            }
        }
        basis.push(p);
    }
    Ok(MetricSolution {
        n,
        convention,
        basis,
        parameter_names: (1..=n).map(|j| format!("theta_1_{j}")).collect(),
    })
}

/// Solves H^T Theta = Theta H for the symmetric Theta with the given first
/// row (entries are rational functions in `a`; plain rationals and symbols
/// bound upstream both arrive here as `RatFunc` values).
pub fn solve_metric(
    n: usize,
    convention: Convention,
    first_row: &[RatFunc],
) -> Result<RatFuncMatrix> {
    if first_row.len() != n {
        return Err(Error::precondition(
            "first_row",
            format!("expected {n} entries, got {}", first_row.len()),
        ));
    }
    let symbolic = solve_symbolic(n, convention)?;
    let mut theta = RatFuncMatrix::zero(n, MatrixTag::Generic);
    for i in 0..n {
        for j in 0..n {
            theta.set(i, j, symbolic.get(i, j).substitute(first_row));
        }
    }
    Ok(theta)
}

/// H^T Theta - Theta H, exactly.
pub fn residual(h: &RatFuncMatrix, theta: &RatFuncMatrix) -> Result<RatFuncMatrix> {
    if h.n() != theta.n() {
        return Err(Error::DimensionMismatch(format!(
            "H is {0}x{0}, Theta is {1}x{1}",
            h.n(),
            theta.n()
        )));
    }
    let left = h.transpose().mul(theta)?;
    let right = theta.mul(h)?;
    left.sub(&right)
}

/// Nullspace of the Dieudonne system at a fixed coupling.
#[derive(Debug, Clone)]
pub struct OracleBasis {
    pub n: usize,
    pub a0: Rational,
    pub dimension: usize,
    /// Symmetric rational matrices spanning all solutions at a0.
    pub basis: Vec<RatMatrix>,
}

/// Brute-force validation oracle: builds the homogeneous linear system for
/// the N(N+1)/2 unknown entries of symmetric Theta from H^T Theta = Theta H
/// at a = a0 and computes an exact rational nullspace basis by fraction-free
/// (Bareiss) elimination.
pub fn nullspace_oracle(n: usize, convention: Convention, a0: &Rational) -> Result<OracleBasis> {
    if !a0.is_positive() {
        return Err(Error::precondition("a", "oracle needs a0 > 0"));
    }
    let h = build_hamiltonian(n, convention)?.instantiate(a0)?;
    let unknowns = n * (n + 1) / 2;
    let index = |p: usize, q: usize| -> usize {
        let (p, q) = if p <= q { (p, q) } else { (q, p) };
        // row-major upper triangle offset
        p * n + q - p * (p + 1) / 2
    };

    // Equations M[i][j] = 0 for i < j:
    // sum_k H[k][i] T[k][j] - sum_k T[i][k] H[k][j]
    let mut rows: Vec<Vec<Rational>> = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            let mut row = vec![Rational::zero(); unknowns];
            for k in 0..n {
                let hki = h.get(k, i);
                if !hki.is_zero() {
                    row[index(k, j)] += hki;
                }
                let hkj = h.get(k, j);
                if !hkj.is_zero() {
                    row[index(i, k)] -= hkj;
                }
            }
            rows.push(row);
        }
    }

    let null_basis = nullspace_fraction_free(&rows, unknowns);
    let dimension = null_basis.len();
    let mut basis = Vec::with_capacity(dimension);
    for vec in null_basis {
        let mut m = RatMatrix::zero(n);
        for p in 0..n {
            for q in p..n {
                let v = vec[index(p, q)].clone();
                m.set(p, q, v.clone());
                m.set(q, p, v);
            }
        }
        basis.push(m);
    }
    Ok(OracleBasis {
        n,
        a0: a0.clone(),
        dimension,
        basis,
    })
}

/// Nullspace basis of a rational matrix by integer fraction-free (Bareiss)
/// forward elimination and rational back-substitution. Basis vectors are
/// scaled to primitive integers for determinism.
fn nullspace_fraction_free(rows: &[Vec<Rational>], cols: usize) -> Vec<Vec<Rational>> {
    // Clear denominators row by row.
    let mut m: Vec<Vec<BigInt>> = rows
        .iter()
        .map(|row| {
            let mut lcm = BigInt::one();
            for c in row {
                lcm = lcm.lcm(c.denom());
            }
            row.iter()
                .map(|c| c.numer() * (&lcm / c.denom()))
                .collect()
        })
        .collect();

    let nrows = m.len();
    let mut pivot_cols: Vec<usize> = Vec::new();
    let mut prev_pivot = BigInt::one();
    let mut r = 0usize;
    for c in 0..cols {
        if r >= nrows {
            break;
        }
        // find a pivot in column c at or below row r
        let Some(p) = (r..nrows).find(|&p| !m[p][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        // Bareiss step: rows below r
        for i in (r + 1)..nrows {
            for j in (c + 1)..cols {
                let num = &m[r][c] * &m[i][j] - &m[i][c] * &m[r][j];
                m[i][j] = num.div_exact(&prev_pivot);
            }
            m[i][c] = BigInt::zero();
        }
        prev_pivot = m[r][c].clone();
        pivot_cols.push(c);
        r += 1;
    }
    let rank = pivot_cols.len();

    // Back-substitute for each free column.
    let free_cols: Vec<usize> = (0..cols).filter(|c| !pivot_cols.contains(c)).collect();
    let mut basis = Vec::with_capacity(free_cols.len());
    for &f in &free_cols {
        let mut x = vec![Rational::zero(); cols];
        x[f] = Rational::one();
        for k in (0..rank).rev() {
            let pc = pivot_cols[k];
            let mut acc = Rational::zero();
            for c in (pc + 1)..cols {
                if !x[c].is_zero() {
                    acc += Rational::from_integer(m[k][c].clone()) * &x[c];
                }
            }
            x[pc] = -acc / Rational::from_integer(m[k][pc].clone());
        }
        // primitive integer scaling
        let mut lcm = BigInt::one();
        for v in &x {
            lcm = lcm.lcm(v.denom());
        }
        let mut ints: Vec<BigInt> = x.iter().map(|v| v.numer() * (&lcm / v.denom())).collect();
        let mut gcd = BigInt::zero();
        for v in &ints {
            gcd = gcd.gcd(v);
        }
        if !gcd.is_zero() && !gcd.is_one() {
            for v in &mut ints {
                *v = &*v / &gcd;
            }
        }
        basis.push(ints.into_iter().map(Rational::from_integer).collect());
    }
    basis
}

/// Exact membership test: is `target` a rational linear combination of
/// `basis` (comparing flattened upper triangles)?
pub fn in_span(basis: &[RatMatrix], target: &RatMatrix) -> bool {
    if basis.is_empty() {
        return target.is_zero();
    }
    let cols: Vec<Vec<Rational>> = basis.iter().map(|b| b.upper_triangle()).collect();
    let rhs = target.upper_triangle();
    solve_rational_least(&cols, &rhs).is_some()
}

/// Solves sum_j x_j cols[j] = rhs exactly, if possible.
fn solve_rational_least(cols: &[Vec<Rational>], rhs: &[Rational]) -> Option<Vec<Rational>> {
    let m = rhs.len();
    let k = cols.len();
    // augmented [cols | rhs], Gauss-Jordan
    let mut a: Vec<Vec<Rational>> = (0..m)
        .map(|i| {
            let mut row: Vec<Rational> = cols.iter().map(|c| c[i].clone()).collect();
            row.push(rhs[i].clone());
            row
        })
        .collect();
    let mut r = 0usize;
    let mut pivots = Vec::new();
    for c in 0..k {
        let Some(p) = (r..m).find(|&p| !a[p][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        let inv = a[r][c].clone().recip();
        for v in a[r].iter_mut() {
            *v *= &inv;
        }
        for i in 0..m {
            if i != r && !a[i][c].is_zero() {
                let f = a[i][c].clone();
                for j in 0..=k {
                    let sub = &a[r][j] * &f;
                    a[i][j] -= sub;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == m {
            break;
        }
    }
    // consistency: zero rows must have zero rhs
    for row in a.iter().skip(r) {
        if !row[k].is_zero() {
            return None;
        }
    }
    let mut x = vec![Rational::zero(); k];
    for (row_idx, &c) in pivots.iter().enumerate() {
        x[c] = a[row_idx][k].clone();
    }
    Some(x)
}

trait DivExact {
    fn div_exact(&self, d: &BigInt) -> BigInt;
}

impl DivExact for BigInt {
    fn div_exact(&self, d: &BigInt) -> BigInt {
        let (q, r) = self.div_rem(d);
        debug_assert!(r.is_zero(), "Bareiss division must be exact");
        q
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{rat, rat_i64};
    use crate::ratfunc::parse_ratfunc;
    use std::collections::HashMap;

    fn rf(s: &str) -> RatFunc {
        parse_ratfunc(s, "test", &HashMap::new()).unwrap()
    }

    fn rfg(s: &str, g: Rational) -> RatFunc {
        let mut binds = HashMap::new();
        binds.insert("g".to_string(), g);
        parse_ratfunc(s, "test", &binds).unwrap()
    }

    #[test]
    fn ordering_examples() {
        assert_eq!(order_equations(2).unwrap().sequence, vec![(1, 2)]);
        assert_eq!(
            order_equations(3).unwrap().sequence,
            vec![(1, 3), (1, 2), (2, 3)]
        );
        assert_eq!(
            order_equations(4).unwrap().sequence,
            vec![(1, 4), (1, 3), (2, 4), (1, 2), (2, 3), (3, 4)]
        );
        assert_eq!(order_equations(6).unwrap().sequence.len(), 15);
        assert!(order_equations(1).is_err());
    }

    #[test]
    fn n2_closed_form() {
        // first row (k, b): Theta = [[k, b], [b, k(a+1)/(2a^2)]]
        let sym = solve_symbolic(2, Convention::Displayed).unwrap();
        assert_eq!(sym.get(1, 1).coeff(0), &rf("(a+1)/(2a^2)"));
        assert_eq!(sym.get(1, 1).coeff(1), &rf("0"));
        assert_eq!(sym.get(0, 1).coeff(0), &rf("0"));
        assert_eq!(sym.get(0, 1).coeff(1), &rf("1"));
        assert_eq!(sym.get(1, 0).coeff(1), &rf("1"));
    }

    #[test]
    fn toy_metric_n3() {
        // first row (2a^2, 2ga, 0) reproduces the displayed 3x3 toy metric
        for g in [rat(1, 2), rat(-2, 3), rat_i64(1), rat(7, 5), rat(-1, 9)] {
            let first_row = [
                rf("2a^2"),
                rfg("2*g*a", g.clone()),
                rf("0"),
            ];
            let theta = solve_metric(3, Convention::Displayed, &first_row).unwrap();
            assert_eq!(theta.get(0, 0), &rf("2a^2"));
            assert_eq!(theta.get(0, 1), &rfg("2*g*a", g.clone()));
            assert_eq!(theta.get(0, 2), &rf("0"));
            assert_eq!(theta.get(1, 1), &rf("a+1"));
            assert_eq!(theta.get(1, 2), &rfg("g", g.clone()));
            assert_eq!(theta.get(2, 2), &rf("(a+2)/(2a+1)"));
            assert!(theta.is_symmetric());

            let h = build_hamiltonian(3, Convention::Displayed).unwrap();
            assert!(residual(&h, &theta).unwrap().is_zero());
        }
    }

    #[test]
    fn identity_is_not_a_metric() {
        let h = build_hamiltonian(3, Convention::Displayed).unwrap();
        let mut id = RatFuncMatrix::zero(3, MatrixTag::Generic);
        for i in 0..3 {
            id.set(i, i, RatFunc::one());
        }
        let r = residual(&h, &id).unwrap();
        assert!(!r.is_zero());
        // equals H^T - H
        let expected = h.transpose().sub(&h).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(r.get(i, j), expected.get(i, j));
            }
        }
    }

    #[test]
    fn residual_zero_for_solver_output() {
        // three pseudo-random rational first rows per size and convention
        let samples: [fn(usize) -> Rational; 3] = [
            |j| rat(2 * j as i64 + 1, j as i64 + 2),
            |j| rat(-(j as i64) - 3, 2 * j as i64 + 5),
            |j| rat(7 * j as i64 - 4, j as i64 + 1),
        ];
        for n in 2..=8usize {
            for conv in [Convention::Displayed, Convention::Recurrence] {
                for sample in samples {
                    let first_row: Vec<RatFunc> =
                        (0..n).map(|j| RatFunc::from_rational(sample(j))).collect();
                    let theta = solve_metric(n, conv, &first_row).unwrap();
                    let h = build_hamiltonian(n, conv).unwrap();
                    assert!(
                        residual(&h, &theta).unwrap().is_zero(),
                        "nonzero residual at n={n}, {conv:?}"
                    );
                    assert!(theta.is_symmetric());
                }
            }
        }
    }

    #[test]
    fn basis_properties() {
        for n in [1usize, 2, 3, 5] {
            let sol = pseudometric_basis(n, Convention::Displayed).unwrap();
            assert_eq!(sol.basis.len(), n);
            for (j, p) in sol.basis.iter().enumerate() {
                assert!(p.is_symmetric());
                // first row of P_j is the j-th unit vector
                for c in 0..n {
                    let expected = if c == j { RatFunc::one() } else { RatFunc::zero() };
                    assert_eq!(p.get(0, c), &expected, "n={n} j={j} c={c}");
                }
                let h = build_hamiltonian(n, Convention::Displayed).unwrap();
                assert!(residual(&h, p).unwrap().is_zero());
            }
        }
    }

    #[test]
    fn basis_reconstructs_solve_metric() {
        let n = 4;
        let sol = pseudometric_basis(n, Convention::Displayed).unwrap();
        let kappa = [rat(1, 3), rat(-2, 5), rat_i64(2), rat(7, 11)];
        let first_row: Vec<RatFunc> = kappa
            .iter()
            .map(|k| RatFunc::from_rational(k.clone()))
            .collect();
        let direct = solve_metric(n, Convention::Displayed, &first_row).unwrap();
        let mut combo = RatFuncMatrix::zero(n, MatrixTag::Generic);
        for (j, p) in sol.basis.iter().enumerate() {
            combo = combo
                .add(&p.scale(&RatFunc::from_rational(kappa[j].clone())))
                .unwrap();
        }
        for i in 0..n {
            for j in 0..n {
                assert_eq!(direct.get(i, j), combo.get(i, j));
            }
        }
    }

    #[test]
    fn linearity_of_solve_metric() {
        let n = 4;
        let alpha = rat(3, 7);
        let beta = rat(-5, 2);
        let u: Vec<RatFunc> = (0..n)
            .map(|j| if j == 1 { RatFunc::one() } else { RatFunc::zero() })
            .collect();
        let v: Vec<RatFunc> = (0..n)
            .map(|j| if j == 3 { RatFunc::one() } else { RatFunc::zero() })
            .collect();
        let combo: Vec<RatFunc> = (0..n)
            .map(|j| {
                u[j].scale(&alpha).add(&v[j].scale(&beta))
            })
            .collect();
        let left = solve_metric(n, Convention::Displayed, &combo).unwrap();
        let a = solve_metric(n, Convention::Displayed, &u).unwrap();
        let b = solve_metric(n, Convention::Displayed, &v).unwrap();
        let right = a
            .scale(&RatFunc::from_rational(alpha))
            .add(&b.scale(&RatFunc::from_rational(beta)))
            .unwrap();
        for i in 0..n {
            for j in 0..n {
                assert_eq!(left.get(i, j), right.get(i, j));
            }
        }
    }

    #[test]
    fn oracle_dimensions() {
        for (n, expected) in [(1usize, 1usize), (2, 2), (5, 5)] {
            let oracle = nullspace_oracle(n, Convention::Displayed, &rat_i64(1)).unwrap();
            assert_eq!(oracle.dimension, expected, "n={n}");
            for b in &oracle.basis {
                assert!(b.is_symmetric());
            }
        }
    }

    #[test]
    fn oracle_rejects_nonpositive_coupling() {
        assert!(nullspace_oracle(3, Convention::Displayed, &rat_i64(0)).is_err());
        assert!(nullspace_oracle(3, Convention::Displayed, &rat(-1, 2)).is_err());
    }

    #[test]
    fn oracle_matches_basis_span() {
        for n in 2..=4usize {
            for conv in [Convention::Displayed, Convention::Recurrence] {
                let a0 = rat(1, 2);
                let oracle = nullspace_oracle(n, conv, &a0).unwrap();
                assert_eq!(oracle.dimension, n);
                let sol = pseudometric_basis(n, conv).unwrap();
                let instantiated: Vec<RatMatrix> = sol
                    .basis
                    .iter()
                    .map(|p| p.instantiate(&a0).unwrap())
                    .collect();
                for p in &instantiated {
                    assert!(in_span(&oracle.basis, p), "basis elem outside oracle span");
                }
                for o in &oracle.basis {
                    assert!(in_span(&instantiated, o), "oracle elem outside basis span");
                }
            }
        }
    }

    #[test]
    fn degenerate_first_rows_still_solve() {
        // all-zero first row gives the zero matrix, which trivially solves
        let theta = solve_metric(3, Convention::Displayed, &[
            rf("0"), rf("0"), rf("0"),
        ])
        .unwrap();
        assert!(theta.is_zero());
    }
}
