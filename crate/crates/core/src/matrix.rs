//! Dense row-major matrices over an exact [`Scalar`], plus the JSON matrix
//! file format.
//!
//! Columns are the points of the arrangement; the row space is the point of
//! the Grassmannian. Subsets of columns are 1-based and sorted.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::perm::SignedPerm;
use crate::scalar::{Scalar, Sign};
use crate::subset::SubsetIndexer;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    entries: Vec<T>,
}

impl<T: Scalar> Matrix<T> {
    /// Builds an `m x n` matrix; requires `1 <= m <= n` and rectangular rows.
    pub fn from_rows(rows: Vec<Vec<T>>) -> Result<Self> {
        let m = rows.len();
        if m == 0 {
            return Err(Error::Parse("matrix needs at least one row".into()));
        }
        let n = rows[0].len();
        for (r, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::Parse(format!(
                    "ragged row {}: expected {} entries, found {}",
                    r + 1,
                    n,
                    row.len()
                )));
            }
        }
        if m > n {
            return Err(Error::Parse(format!(
                "m = {m} exceeds n = {n}; a Grassmannian witness needs m <= n"
            )));
        }
        Ok(Matrix {
            rows: m,
            cols: n,
            entries: rows.into_iter().flatten().collect(),
        })
    }

    /// Builds a matrix from its columns.
    pub fn from_columns(columns: Vec<Vec<T>>) -> Result<Self> {
        let m = columns.first().map_or(0, Vec::len);
        if columns.iter().any(|c| c.len() != m) {
            return Err(Error::Parse("columns of unequal length".into()));
        }
        let rows = (0..m)
            .map(|r| columns.iter().map(|c| c[r].clone()).collect())
            .collect();
        Self::from_rows(rows)
    }

    /// Square matrix; used for the left `GL_m` action.
    pub fn square(rows: Vec<Vec<T>>) -> Result<Self> {
        if rows.iter().any(|r| r.len() != rows.len()) {
            return Err(Error::Parse("expected a square matrix".into()));
        }
        Self::from_rows(rows)
    }

    pub fn m(&self) -> usize {
        self.rows
    }

    pub fn n(&self) -> usize {
        self.cols
    }

    pub fn get(&self, row: usize, col: usize) -> &T {
        &self.entries[row * self.cols + col]
    }

    pub fn row(&self, row: usize) -> &[T] {
        &self.entries[row * self.cols..(row + 1) * self.cols]
    }

    /// Column `col` (0-based) as an owned vector.
    pub fn column(&self, col: usize) -> Vec<T> {
        (0..self.rows).map(|r| self.get(r, col).clone()).collect()
    }

    pub fn rows(&self) -> Vec<Vec<T>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(&T) -> U) -> Matrix<U> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(f).collect(),
        }
    }

    /// Determinant of the square submatrix on the 1-based sorted column set.
    pub fn maximal_minor(&self, subset: &[usize]) -> Result<T> {
        if subset.len() != self.rows {
            return Err(Error::InvalidSubset {
                subset: subset.to_vec(),
                reason: format!("expected {} columns", self.rows),
            });
        }
        if subset.iter().any(|&c| c == 0 || c > self.cols) {
            return Err(Error::InvalidSubset {
                subset: subset.to_vec(),
                reason: format!("columns must lie in 1..={}", self.cols),
            });
        }
        Ok(self.minor_unchecked(subset))
    }

    pub(crate) fn minor_unchecked(&self, subset: &[usize]) -> T {
        let block = (0..self.rows)
            .map(|r| subset.iter().map(|&c| self.get(r, c - 1).clone()).collect())
            .collect();
        T::determinant(block)
    }

    /// True iff every maximal minor is nonzero.
    pub fn is_totally_nonzero(&self) -> bool {
        self.first_zero_minor().is_none()
    }

    /// First (in lexicographic order) subset with a vanishing minor.
    pub fn first_zero_minor(&self) -> Option<Vec<usize>> {
        let indexer = SubsetIndexer::new(self.cols, self.rows).expect("m <= n by construction");
        indexer
            .subsets()
            .find(|s| self.minor_unchecked(s).sign() == Sign::Zero)
    }

    /// `A * self` for a square `A` of size `m`.
    pub fn left_multiply(&self, a: &Matrix<T>) -> Result<Matrix<T>> {
        if a.rows != self.rows || a.cols != self.rows {
            return Err(Error::SizeMismatch {
                expected: format!("{0}x{0}", self.rows),
                found: format!("{}x{}", a.rows, a.cols),
            });
        }
        let mut entries = Vec::with_capacity(self.entries.len());
        for i in 0..self.rows {
            for j in 0..self.cols {
                let mut acc = T::zero();
                for k in 0..self.rows {
                    acc = acc + a.get(i, k).clone() * self.get(k, j).clone();
                }
                entries.push(acc);
            }
        }
        Ok(Matrix {
            rows: self.rows,
            cols: self.cols,
            entries,
        })
    }

    /// `self * P^{-1}` for the signed permutation matrix `P` of `p`: column
    /// `v_j` is scaled by `sgn(a_j)` and moved to position `|a_j|`.
    pub fn transform_columns(&self, p: &SignedPerm) -> Result<Matrix<T>> {
        if p.n() != self.cols {
            return Err(Error::SizeMismatch {
                expected: format!("signed permutation of size {}", self.cols),
                found: format!("size {}", p.n()),
            });
        }
        let mut columns: Vec<Vec<T>> = vec![Vec::new(); self.cols];
        for (j, &a) in p.entries().iter().enumerate() {
            let target = a.unsigned_abs() as usize - 1;
            let col = self.column(j);
            columns[target] = if a < 0 {
                col.into_iter().map(|x| -x).collect()
            } else {
                col
            };
        }
        Matrix::from_columns(columns)
    }

    /// Columns in reverse order, `(v_n, ..., v_1)`.
    pub fn reversed_columns(&self) -> Matrix<T> {
        let columns = (0..self.cols).rev().map(|c| self.column(c)).collect();
        Matrix::from_columns(columns).expect("same shape")
    }
}

impl Matrix<BigRational> {
    pub fn from_integers(m: usize, n: usize, values: &[i64]) -> Result<Self> {
        if values.len() != m * n {
            return Err(Error::SizeMismatch {
                expected: format!("{} entries", m * n),
                found: format!("{}", values.len()),
            });
        }
        let rows = values
            .chunks(n.max(1))
            .map(|row| {
                row.iter()
                    .map(|&v| BigRational::from_integer(v.into()))
                    .collect()
            })
            .collect();
        Self::from_rows(rows)
    }

    /// Reads the JSON matrix file format.
    pub fn from_json(text: &str) -> Result<Self> {
        let file: MatrixFile = serde_json::from_str(text)?;
        file.into_matrix()
    }

    pub fn to_file(&self) -> MatrixFile {
        MatrixFile {
            m: self.rows,
            n: self.cols,
            entries: (0..self.rows)
                .map(|r| self.row(r).iter().map(format_rational).collect())
                .collect(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_file()).expect("plain data serializes")
    }

    /// Integer matrix with the same row space: each row scaled by the lcm
    /// of its denominators (positive factors, so minor signs are preserved).
    pub fn clear_denominators(&self) -> Matrix<BigInt> {
        let rows = (0..self.rows)
            .map(|r| {
                let row = self.row(r);
                let lcm = row.iter().fold(BigInt::one(), |acc, x| {
                    num_integer::Integer::lcm(&acc, x.denom())
                });
                row.iter().map(|x| x.numer() * (&lcm / x.denom())).collect()
            })
            .collect();
        Matrix::from_rows(rows).expect("same shape")
    }
}

impl<T: Scalar + fmt::Display> fmt::Display for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in 0..self.rows {
            let cells: Vec<String> = self.row(r).iter().map(|x| x.to_string()).collect();
            writeln!(f, "[{}]", cells.join(", "))?;
        }
        Ok(())
    }
}

/// On-disk matrix: `{"m": 2, "n": 3, "entries": [["1","0","1"],["0","1","1"]]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixFile {
    pub m: usize,
    pub n: usize,
    pub entries: Vec<Vec<String>>,
}

impl MatrixFile {
    pub fn into_matrix(self) -> Result<Matrix<BigRational>> {
        if self.m == 0 {
            return Err(Error::Parse("m must be at least 1".into()));
        }
        if self.m > self.n {
            return Err(Error::Parse(format!(
                "m = {} exceeds n = {}",
                self.m, self.n
            )));
        }
        if self.entries.len() != self.m {
            return Err(Error::Parse(format!(
                "expected {} rows, found {}",
                self.m,
                self.entries.len()
            )));
        }
        let mut rows = Vec::with_capacity(self.m);
        for (r, row) in self.entries.iter().enumerate() {
            if row.len() != self.n {
                return Err(Error::Parse(format!(
                    "ragged row {}: expected {} entries, found {}",
                    r + 1,
                    self.n,
                    row.len()
                )));
            }
            let parsed = row
                .iter()
                .enumerate()
                .map(|(c, s)| {
                    parse_rational(s)
                        .map_err(|why| Error::Parse(format!("{why} at ({},{})", r + 1, c + 1)))
                })
                .collect::<Result<Vec<_>>>()?;
            rows.push(parsed);
        }
        Matrix::from_rows(rows)
    }
}

/// Parses `"p"` or `"p/q"` in base 10.
pub fn parse_rational(text: &str) -> std::result::Result<BigRational, String> {
    let text = text.trim();
    let (num, den) = match text.split_once('/') {
        Some((p, q)) => (p.trim(), Some(q.trim())),
        None => (text, None),
    };
    let numer = BigInt::from_str(num).map_err(|_| format!("malformed rational {text:?}"))?;
    let denom = match den {
        Some(q) => BigInt::from_str(q).map_err(|_| format!("malformed rational {text:?}"))?,
        None => BigInt::one(),
    };
    if denom.is_zero() {
        return Err("zero denominator".into());
    }
    Ok(BigRational::new(numer, denom))
}

pub fn format_rational(x: &BigRational) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}
