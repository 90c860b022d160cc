//! Small dense matrices over exact backends, the diagonal quadratic forms of
//! the catalog and the quadratic extension Q_p(√v).

mod form;
mod qext;

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::padic::{format_rational, parse_rational, Rational};

pub use form::{lambda_matrix, FormParam, QuadForm};
pub use qext::QExtElem;

/// Commutative ring operations needed by [`Mat`].
pub trait Ring:
    Clone + PartialEq + Add<Output = Self> + Sub<Output = Self> + Mul<Output = Self> + Neg<Output = Self>
{
    /// `Σ a_k b_k` over a nonempty pairing.
    fn dot<'a>(terms: impl Iterator<Item = (&'a Self, &'a Self)>) -> Self
    where
        Self: 'a,
    {
        terms
            .map(|(a, b)| a.clone() * b.clone())
            .reduce(|acc, x| acc + x)
            .expect("nonempty dot product")
    }
}

impl Ring for QExtElem {}

impl Ring for Rational {
    /// Sums over a common denominator and normalizes once.
    fn dot<'a>(terms: impl Iterator<Item = (&'a Self, &'a Self)>) -> Self {
        let parts: Vec<(BigInt, BigInt)> = terms
            .map(|(a, b)| (a.numer() * b.numer(), a.denom() * b.denom()))
            .collect();
        let den = parts.iter().fold(BigInt::one(), |acc, (_, d)| acc.lcm(d));
        let num: BigInt = parts.iter().map(|(n, d)| n * (&den / d)).sum();
        Rational::new(num, den)
    }
}

/// Square n×n matrix, row-major.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Mat<T = Rational> {
    n: usize,
    entries: Vec<T>,
}

impl<T: Ring> Mat<T> {
    pub fn from_rows(rows: Vec<Vec<T>>) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::DimensionMismatch {
                expected: 1,
                found: 0,
            });
        }
        if let Some(bad) = rows.iter().find(|r| r.len() != n) {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: bad.len(),
            });
        }
        Ok(Mat {
            n,
            entries: rows.into_iter().flatten().collect(),
        })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &T {
        &self.entries[i * self.n + j]
    }

    pub fn rows(&self) -> Vec<Vec<T>> {
        self.entries.chunks(self.n).map(<[T]>::to_vec).collect()
    }

    pub fn transpose(&self) -> Self {
        let n = self.n;
        let entries = (0..n * n)
            .map(|k| self.get(k % n, k / n).clone())
            .collect();
        Mat { n, entries }
    }

    pub fn map<U, F: Fn(&T) -> U>(&self, f: F) -> Mat<U> {
        Mat {
            n: self.n,
            entries: self.entries.iter().map(f).collect(),
        }
    }

    pub fn mul(&self, rhs: &Mat<T>) -> Result<Mat<T>> {
        if self.n != rhs.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: rhs.n,
            });
        }
        let n = self.n;
        let entries = (0..n * n)
            .map(|k| {
                let (i, j) = (k / n, k % n);
                T::dot((0..n).map(|m| (self.get(i, m), rhs.get(m, j))))
            })
            .collect();
        Ok(Mat { n, entries })
    }

    /// Determinant by cofactor expansion along the first row; ring operations
    /// only.
    pub fn det_cofactor(&self) -> T {
        if self.n == 1 {
            return self.entries[0].clone();
        }
        let mut acc: Option<T> = None;
        for j in 0..self.n {
            let minor = self.minor(0, j);
            let term = self.get(0, j).clone() * minor.det_cofactor();
            acc = Some(match acc {
                None => term,
                Some(a) if j % 2 == 0 => a + term,
                Some(a) => a - term,
            });
        }
        acc.expect("n >= 1")
    }

    fn minor(&self, row: usize, col: usize) -> Mat<T> {
        let n = self.n;
        let entries = (0..n)
            .filter(|&i| i != row)
            .flat_map(|i| {
                (0..n)
                    .filter(move |&j| j != col)
                    .map(move |j| self.get(i, j).clone())
            })
            .collect();
        Mat { n: n - 1, entries }
    }
}

impl Mat<Rational> {
    pub fn identity(n: usize) -> Self {
        Self::diag(vec![Rational::one(); n])
    }

    pub fn diag(d: Vec<Rational>) -> Self {
        let n = d.len();
        let mut entries = vec![Rational::zero(); n * n];
        for (i, x) in d.into_iter().enumerate() {
            entries[i * n + i] = x;
        }
        Mat { n, entries }
    }

    pub fn from_i64(rows: &[&[i64]]) -> Result<Self> {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| crate::padic::int(x)).collect())
                .collect(),
        )
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity(self.n)
    }

    pub fn scale(&self, s: &Rational) -> Self {
        self.map(|x| x * s)
    }

    /// Exact determinant by Bareiss fraction-free elimination.
    pub fn det(&self) -> Rational {
        let n = self.n;
        let mut a = self.rows();
        let mut prev = Rational::one();
        let mut sign = Rational::one();
        for k in 0..n.saturating_sub(1) {
            if a[k][k].is_zero() {
                match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                    Some(i) => {
                        a.swap(k, i);
                        sign = -sign;
                    }
                    None => return Rational::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    a[i][j] = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
                }
                a[i][k] = Rational::zero();
            }
            prev = a[k][k].clone();
        }
        sign * &a[n - 1][n - 1]
    }

    /// Exact inverse by Gauss-Jordan elimination.
    pub fn inverse(&self) -> Result<Self> {
        let n = self.n;
        let mut a = self.rows();
        let mut inv = Self::identity(n).rows();
        for col in 0..n {
            let piv = (col..n)
                .find(|&i| !a[i][col].is_zero())
                .ok_or(Error::DivisionByZero)?;
            a.swap(col, piv);
            inv.swap(col, piv);
            let scale = a[col][col].clone();
            for j in 0..n {
                a[col][j] = &a[col][j] / &scale;
                inv[col][j] = &inv[col][j] / &scale;
            }
            for i in 0..n {
                if i == col || a[i][col].is_zero() {
                    continue;
                }
                let f = a[i][col].clone();
                for j in 0..n {
                    a[i][j] = &a[i][j] - &f * &a[col][j];
                    inv[i][j] = &inv[i][j] - &f * &inv[col][j];
                }
            }
        }
        Self::from_rows(inv)
    }

    /// JSON value: array of row arrays of rational literals (as strings).
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::Value::Array(
            self.rows()
                .iter()
                .map(|r| {
                    serde_json::Value::Array(
                        r.iter()
                            .map(|x| serde_json::Value::String(format_rational(x)))
                            .collect(),
                    )
                })
                .collect(),
        )
    }

    /// Accepts numbers given either as JSON strings (`"1/3"`) or integers.
    pub fn from_json(v: &serde_json::Value) -> Result<Self> {
        let bad = || Error::Parse("matrix must be an array of row arrays".into());
        let rows = v.as_array().ok_or_else(bad)?;
        let rows = rows
            .iter()
            .map(|r| {
                r.as_array()
                    .ok_or_else(bad)?
                    .iter()
                    .map(|x| match x {
                        serde_json::Value::String(s) => parse_rational(s),
                        serde_json::Value::Number(n) => parse_rational(&n.to_string()),
                        _ => Err(bad()),
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_rows(rows)
    }
}

impl fmt::Display for Mat<Rational> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, row) in self.rows().iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            let cells: Vec<String> = row.iter().map(format_rational).collect();
            f.write_str(&cells.join(" "))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::padic::{int, rat};

    #[test]
    fn bareiss_matches_cofactor() {
        let m = Mat::from_rows(vec![
            vec![rat(1, 2), int(3), int(0), int(-1)],
            vec![int(0), int(0), rat(2, 3), int(5)],
            vec![int(4), int(1), int(1), int(1)],
            vec![int(2), rat(-7, 5), int(0), int(3)],
        ])
        .unwrap();
        assert_eq!(m.det(), m.det_cofactor());
        let singular = Mat::from_i64(&[&[1, 2], &[2, 4]]).unwrap();
        assert_eq!(singular.det(), int(0));
    }

    #[test]
    fn inverse_round_trip() {
        let m = Mat::from_i64(&[&[0, 0, 3], &[0, 3, 0], &[1, 0, 0]]).unwrap();
        let inv = m.inverse().unwrap();
        assert!(m.mul(&inv).unwrap().is_identity());
        assert_eq!(
            Mat::from_i64(&[&[1, 1], &[1, 1]]).unwrap().inverse(),
            Err(Error::DivisionByZero)
        );
    }

    #[test]
    fn ragged_rows_rejected() {
        assert!(Mat::from_rows(vec![vec![int(1), int(2)], vec![int(3)]]).is_err());
    }

    #[test]
    fn json_round_trip() {
        let m = Mat::from_rows(vec![vec![rat(1, 3), int(0)], vec![int(-2), int(1)]]).unwrap();
        assert_eq!(Mat::from_json(&m.to_json()).unwrap(), m);
    }
}
