//! Dense matrices over the three scalar layers: rational functions in `a`,
//! exact rationals (instantiated), and high-precision floats.

use num_traits::Zero;
use serde::Serialize;

use crate::bigfloat::BigFloat;
use crate::error::{Error, Result};
use crate::ratfunc::RatFunc;
use crate::rational::{render_rational, Rational};

/// Which entry pattern a rational-function matrix carries.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum MatrixTag {
    /// The Hamiltonian exactly as printed in the paper's N=4 sample.
    Displayed,
    /// The variant forced by the Gegenbauer three-term recurrence.
    Recurrence,
    /// Anything else (metrics, residuals).
    Generic,
}

impl MatrixTag {
    pub fn as_str(&self) -> &'static str {
        match self {
            MatrixTag::Displayed => "displayed",
            MatrixTag::Recurrence => "recurrence",
            MatrixTag::Generic => "generic",
        }
    }
}

/// Square matrix of reduced rational functions in `a`.
#[derive(Debug, Clone, PartialEq)]
pub struct RatFuncMatrix {
    n: usize,
    entries: Vec<RatFunc>,
    tag: MatrixTag,
}

impl RatFuncMatrix {
    pub fn zero(n: usize, tag: MatrixTag) -> Self {
        RatFuncMatrix {
            n,
            entries: vec![RatFunc::zero(); n * n],
            tag,
        }
    }

    pub fn from_entries(n: usize, entries: Vec<RatFunc>, tag: MatrixTag) -> Result<Self> {
        if entries.len() != n * n {
            return Err(Error::DimensionMismatch(format!(
                "expected {} entries, got {}",
                n * n,
                entries.len()
            )));
        }
        Ok(RatFuncMatrix { n, entries, tag })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn tag(&self) -> MatrixTag {
        self.tag
    }

    pub fn get(&self, i: usize, j: usize) -> &RatFunc {
        &self.entries[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: RatFunc) {
        self.entries[i * self.n + j] = value;
    }

    pub fn transpose(&self) -> Self {
        let mut out = RatFuncMatrix::zero(self.n, self.tag);
        for i in 0..self.n {
            for j in 0..self.n {
                out.set(j, i, self.get(i, j).clone());
            }
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} * {}x{}",
                self.n, self.n, other.n, other.n
            )));
        }
        let mut out = RatFuncMatrix::zero(self.n, MatrixTag::Generic);
        for i in 0..self.n {
            for j in 0..self.n {
                let mut acc = RatFunc::zero();
                for k in 0..self.n {
                    let term = self.get(i, k).mul(other.get(k, j));
                    acc = acc.add(&term);
                }
                out.set(i, j, acc);
            }
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} - {}x{}",
                self.n, self.n, other.n, other.n
            )));
        }
        let mut out = RatFuncMatrix::zero(self.n, MatrixTag::Generic);
        for i in 0..self.n {
            for j in 0..self.n {
                out.set(i, j, self.get(i, j).sub(other.get(i, j)));
            }
        }
        Ok(out)
    }

    pub fn scale(&self, f: &RatFunc) -> Self {
        let mut out = RatFuncMatrix::zero(self.n, self.tag);
        for i in 0..self.n {
            for j in 0..self.n {
                out.set(i, j, self.get(i, j).mul(f));
            }
        }
        out
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch("matrix add".into()));
        }
        let mut out = RatFuncMatrix::zero(self.n, MatrixTag::Generic);
        for i in 0..self.n {
            for j in 0..self.n {
                out.set(i, j, self.get(i, j).add(other.get(i, j)));
            }
        }
        Ok(out)
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|e| e.is_zero())
    }

    /// Exact structural symmetry test at the rational-function level.
    pub fn is_symmetric(&self) -> bool {
        for i in 0..self.n {
            for j in (i + 1)..self.n {
                if self.get(i, j) != self.get(j, i) {
                    return false;
                }
            }
        }
        true
    }

    /// Exact evaluation at a = a0; errors name the first offending entry.
    pub fn instantiate(&self, a0: &Rational) -> Result<RatMatrix> {
        let mut entries = Vec::with_capacity(self.n * self.n);
        for i in 0..self.n {
            for j in 0..self.n {
                let f = self.get(i, j);
                if f.has_pole_at(a0) {
                    return Err(Error::Pole {
                        point: render_rational(a0),
                        context: format!("entry ({},{}) = {}", i + 1, j + 1, f.render()),
                    });
                }
                entries.push(f.eval(a0)?);
            }
        }
        Ok(RatMatrix {
            n: self.n,
            entries,
        })
    }

    pub fn render_rows(&self) -> Vec<Vec<String>> {
        (0..self.n)
            .map(|i| (0..self.n).map(|j| self.get(i, j).render()).collect())
            .collect()
    }
}

/// Square matrix of exact rationals.
#[derive(Debug, Clone, PartialEq)]
pub struct RatMatrix {
    n: usize,
    entries: Vec<Rational>,
}

impl RatMatrix {
    pub fn zero(n: usize) -> Self {
        RatMatrix {
            n,
            entries: vec![Rational::zero(); n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = RatMatrix::zero(n);
        for i in 0..n {
            m.set(i, i, Rational::new(1.into(), 1.into()));
        }
        m
    }

    pub fn from_entries(n: usize, entries: Vec<Rational>) -> Result<Self> {
        if entries.len() != n * n {
            return Err(Error::DimensionMismatch(format!(
                "expected {} entries, got {}",
                n * n,
                entries.len()
            )));
        }
        Ok(RatMatrix { n, entries })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.entries[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: Rational) {
        self.entries[i * self.n + j] = value;
    }

    pub fn transpose(&self) -> Self {
        let mut out = RatMatrix::zero(self.n);
        for i in 0..self.n {
            for j in 0..self.n {
                out.set(j, i, self.get(i, j).clone());
            }
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch("rational matrix mul".into()));
        }
        let mut out = RatMatrix::zero(self.n);
        for i in 0..self.n {
            for j in 0..self.n {
                let mut acc = Rational::zero();
                for k in 0..self.n {
                    acc += self.get(i, k) * other.get(k, j);
                }
                out.set(i, j, acc);
            }
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch("rational matrix sub".into()));
        }
        let mut out = RatMatrix::zero(self.n);
        for i in 0..self.n {
            for j in 0..self.n {
                out.set(i, j, self.get(i, j) - other.get(i, j));
            }
        }
        Ok(out)
    }

    pub fn add_scaled(&self, other: &Self, c: &Rational) -> Result<Self> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch("rational matrix add".into()));
        }
        let mut out = RatMatrix::zero(self.n);
        for i in 0..self.n {
            for j in 0..self.n {
                out.set(i, j, self.get(i, j) + other.get(i, j) * c);
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        let mut out = RatMatrix::zero(self.n);
        for i in 0..self.n {
            for j in 0..self.n {
                out.set(i, j, self.get(i, j) * c);
            }
        }
        out
    }

    pub fn is_symmetric(&self) -> bool {
        for i in 0..self.n {
            for j in (i + 1)..self.n {
                if self.get(i, j) != self.get(j, i) {
                    return false;
                }
            }
        }
        true
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|e| e.is_zero())
    }

    /// High-precision numeric image.
    pub fn to_numeric(&self, prec: u32) -> NumericMatrix {
        let entries = self
            .entries
            .iter()
            .map(|r| BigFloat::from_rational(r, prec))
            .collect();
        NumericMatrix {
            n: self.n,
            entries,
            symmetric: self.is_symmetric(),
        }
    }

    /// Flattened upper triangle (row-major, i <= j).
    pub fn upper_triangle(&self) -> Vec<Rational> {
        let mut out = Vec::with_capacity(self.n * (self.n + 1) / 2);
        for i in 0..self.n {
            for j in i..self.n {
                out.push(self.get(i, j).clone());
            }
        }
        out
    }

    pub fn render_rows(&self) -> Vec<Vec<String>> {
        (0..self.n)
            .map(|i| {
                (0..self.n)
                    .map(|j| render_rational(self.get(i, j)))
                    .collect()
            })
            .collect()
    }
}

/// Square matrix of high-precision floats.
#[derive(Debug, Clone)]
pub struct NumericMatrix {
    n: usize,
    entries: Vec<BigFloat>,
    symmetric: bool,
}

impl NumericMatrix {
    pub fn zero(n: usize, prec: u32) -> Self {
        NumericMatrix {
            n,
            entries: vec![BigFloat::zero(prec); n * n],
            symmetric: true,
        }
    }

    pub fn identity(n: usize, prec: u32) -> Self {
        let mut m = NumericMatrix::zero(n, prec);
        for i in 0..n {
            m.set(i, i, BigFloat::one(prec));
        }
        m.symmetric = true;
        m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn is_flagged_symmetric(&self) -> bool {
        self.symmetric
    }

    pub fn set_symmetric_flag(&mut self, flag: bool) {
        self.symmetric = flag;
    }

    pub fn get(&self, i: usize, j: usize) -> &BigFloat {
        &self.entries[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: BigFloat) {
        self.entries[i * self.n + j] = value;
    }

    pub fn transpose(&self) -> Self {
        let mut out = self.clone();
        for i in 0..self.n {
            for j in 0..self.n {
                out.set(j, i, self.get(i, j).clone());
            }
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch("numeric matrix mul".into()));
        }
        let prec = self
            .entries
            .first()
            .map(|e| e.precision())
            .unwrap_or(crate::bigfloat::MIN_PRECISION_BITS);
        let mut out = NumericMatrix::zero(self.n, prec);
        out.symmetric = false;
        for i in 0..self.n {
            for j in 0..self.n {
                let mut acc = BigFloat::zero(prec);
                for k in 0..self.n {
                    acc = acc.add(&self.get(i, k).mul(other.get(k, j)));
                }
                out.set(i, j, acc);
            }
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch("numeric matrix sub".into()));
        }
        let mut out = self.clone();
        out.symmetric = false;
        for i in 0..self.n {
            for j in 0..self.n {
                out.set(i, j, self.get(i, j).sub(other.get(i, j)));
            }
        }
        Ok(out)
    }

    /// Largest |entry of (self - self^T)|.
    pub fn symmetry_defect(&self) -> BigFloat {
        let prec = self
            .entries
            .first()
            .map(|e| e.precision())
            .unwrap_or(crate::bigfloat::MIN_PRECISION_BITS);
        let mut worst = BigFloat::zero(prec);
        for i in 0..self.n {
            for j in (i + 1)..self.n {
                let d = self.get(i, j).sub(self.get(j, i)).abs();
                worst = worst.max_value(&d);
            }
        }
        worst
    }

    /// (self + self^T) / 2, flagged symmetric.
    pub fn symmetrize(&self) -> Self {
        let mut out = self.clone();
        let half = BigFloat::from_rational(
            &Rational::new(1.into(), 2.into()),
            self.entries
                .first()
                .map(|e| e.precision())
                .unwrap_or(crate::bigfloat::MIN_PRECISION_BITS),
        );
        for i in 0..self.n {
            for j in 0..self.n {
                let avg = self.get(i, j).add(self.get(j, i)).mul(&half);
                out.set(i, j, avg);
            }
        }
        out.symmetric = true;
        out
    }

    pub fn max_abs(&self) -> BigFloat {
        let prec = self
            .entries
            .first()
            .map(|e| e.precision())
            .unwrap_or(crate::bigfloat::MIN_PRECISION_BITS);
        let mut worst = BigFloat::zero(prec);
        for e in &self.entries {
            worst = worst.max_value(&e.abs());
        }
        worst
    }

    pub fn render_rows(&self, digits: u32) -> Vec<Vec<String>> {
        (0..self.n)
            .map(|i| {
                (0..self.n)
                    .map(|j| self.get(i, j).to_decimal(digits))
                    .collect()
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat_i64;
    use crate::ratfunc::parse_ratfunc;
    use std::collections::HashMap;

    fn rf(s: &str) -> RatFunc {
        parse_ratfunc(s, "test", &HashMap::new()).unwrap()
    }

    #[test]
    fn ratfunc_matrix_mul_and_transpose() {
        let m = RatFuncMatrix::from_entries(
            2,
            vec![rf("0"), rf("1/(2a)"), rf("a/(a+1)"), rf("0")],
            MatrixTag::Generic,
        )
        .unwrap();
        let mt = m.transpose();
        assert_eq!(mt.get(0, 1), &rf("a/(a+1)"));
        let prod = m.mul(&mt).unwrap();
        assert_eq!(prod.get(0, 0), &rf("1/(4a^2)"));
        assert_eq!(prod.get(0, 1), &rf("0"));
    }

    #[test]
    fn instantiate_detects_pole() {
        let m = RatFuncMatrix::from_entries(
            1,
            vec![rf("1/(2a)")],
            MatrixTag::Generic,
        )
        .unwrap();
        let err = m.instantiate(&rat_i64(0)).unwrap_err();
        assert!(err.to_string().contains("(1,1)"));
        let ok = m.instantiate(&rat_i64(1)).unwrap();
        assert_eq!(ok.get(0, 0), &crate::rational::rat(1, 2));
    }

    #[test]
    fn numeric_symmetry_defect() {
        let mut m = NumericMatrix::zero(2, 64);
        m.set(0, 1, BigFloat::from_i64(3, 64));
        m.set(1, 0, BigFloat::from_i64(1, 64));
        assert_eq!(m.symmetry_defect().to_f64(), 2.0);
        let s = m.symmetrize();
        assert_eq!(s.get(0, 1).to_f64(), 2.0);
        assert_eq!(s.get(1, 0).to_f64(), 2.0);
    }
}
