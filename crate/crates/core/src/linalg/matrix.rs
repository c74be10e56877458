use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num::{BigInt, Integer, One, Signed, Zero};

use super::{big, int, LinalgError, Rational};

/// Dense row-major matrix over the rationals.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Rational>,
}

impl QMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        QMatrix {
            rows,
            cols,
            entries: vec![Rational::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::scalar(n, Rational::one())
    }

    pub fn scalar(n: usize, s: Rational) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, s.clone());
        }
        m
    }

    pub fn from_entries(rows: usize, cols: usize, entries: Vec<Rational>) -> Result<Self, LinalgError> {
        if entries.len() != rows * cols {
            return Err(LinalgError::DimensionMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                entries.len()
            )));
        }
        Ok(QMatrix { rows, cols, entries })
    }

    /// Builds a matrix from rows. An empty row list is the 0x0 matrix.
    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Result<Self, LinalgError> {
        let n = rows.len();
        let cols = rows.first().map_or(0, Vec::len);
        let mut entries = Vec::with_capacity(n * cols);
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != cols {
                return Err(LinalgError::RaggedRows {
                    expected: cols,
                    row: i,
                    found: row.len(),
                });
            }
            entries.extend(row);
        }
        Ok(QMatrix {
            rows: n,
            cols,
            entries,
        })
    }

    pub fn from_integer_rows(rows: Vec<Vec<BigInt>>) -> Result<Self, LinalgError> {
        Self::from_rows(
            rows.into_iter()
                .map(|r| r.into_iter().map(big).collect())
                .collect(),
        )
    }

    /// Convenience constructor for small literal matrices. Panics on ragged input.
    pub fn from_i64(rows: &[&[i64]]) -> Self {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| int(x)).collect())
                .collect(),
        )
        .expect("ragged literal matrix")
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn entries(&self) -> &[Rational] {
        &self.entries
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Rational) {
        self.entries[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<Rational>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Zero::is_zero)
    }

    pub fn is_integral(&self) -> bool {
        self.entries.iter().all(Rational::is_integer)
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }

    pub fn scale(&self, s: &Rational) -> Self {
        QMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|x| x * s).collect(),
        }
    }

    pub fn checked_mul(&self, rhs: &QMatrix) -> Result<QMatrix, LinalgError> {
        if self.cols != rhs.rows {
            return Err(LinalgError::DimensionMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = rhs.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let idx = i * rhs.cols + j;
                    out.entries[idx] = &out.entries[idx] + a * b;
                }
            }
        }
        Ok(out)
    }

    fn zip_with(&self, rhs: &QMatrix, op: impl Fn(&Rational, &Rational) -> Rational) -> Result<QMatrix, LinalgError> {
        if self.rows != rhs.rows || self.cols != rhs.cols {
            return Err(LinalgError::DimensionMismatch(format!(
                "{}x{} vs {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        Ok(QMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self
                .entries
                .iter()
                .zip(&rhs.entries)
                .map(|(a, b)| op(a, b))
                .collect(),
        })
    }

    pub fn checked_add(&self, rhs: &QMatrix) -> Result<QMatrix, LinalgError> {
        self.zip_with(rhs, |a, b| a + b)
    }

    pub fn checked_sub(&self, rhs: &QMatrix) -> Result<QMatrix, LinalgError> {
        self.zip_with(rhs, |a, b| a - b)
    }

    /// Copy of rows `r0..r1`, columns `c0..c1`.
    pub fn submatrix(&self, r0: usize, r1: usize, c0: usize, c1: usize) -> QMatrix {
        let mut out = Self::zeros(r1 - r0, c1 - c0);
        for i in r0..r1 {
            for j in c0..c1 {
                out.set(i - r0, j - c0, self.get(i, j).clone());
            }
        }
        out
    }

    /// Writes `block` with its top-left corner at `(r0, c0)`.
    pub fn set_block(&mut self, r0: usize, c0: usize, block: &QMatrix) {
        for i in 0..block.rows {
            for j in 0..block.cols {
                self.set(r0 + i, c0 + j, block.get(i, j).clone());
            }
        }
    }

    pub fn block_diag(blocks: &[&QMatrix]) -> QMatrix {
        let rows = blocks.iter().map(|b| b.rows).sum();
        let cols = blocks.iter().map(|b| b.cols).sum();
        let mut out = Self::zeros(rows, cols);
        let (mut r, mut c) = (0, 0);
        for b in blocks {
            out.set_block(r, c, b);
            r += b.rows;
            c += b.cols;
        }
        out
    }

    /// Each row multiplied by the lcm of its denominators, so every row becomes
    /// integral. Returns the integer rows and the per-row multipliers.
    fn integer_rows(&self) -> (Vec<Vec<BigInt>>, Vec<BigInt>) {
        let mut rows = Vec::with_capacity(self.rows);
        let mut scales = Vec::with_capacity(self.rows);
        for i in 0..self.rows {
            let row = self.row(i);
            let l = row
                .iter()
                .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
            rows.push(
                row.iter()
                    .map(|x| x.numer() * (&l / x.denom()))
                    .collect(),
            );
            scales.push(l);
        }
        (rows, scales)
    }

    /// Rank by fraction-free (Bareiss) elimination.
    pub fn rank(&self) -> usize {
        let (mut a, _) = self.integer_rows();
        bareiss(&mut a, self.cols).rank
    }

    pub fn det(&self) -> Result<Rational, LinalgError> {
        if !self.is_square() {
            return Err(LinalgError::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        if self.rows == 0 {
            return Ok(Rational::one());
        }
        let (mut a, scales) = self.integer_rows();
        let out = bareiss(&mut a, self.cols);
        if out.rank < self.rows {
            return Ok(Rational::zero());
        }
        let mut d = out.last_pivot;
        if out.negate {
            d = -d;
        }
        let denom = scales.iter().fold(BigInt::one(), |acc, s| acc * s);
        Ok(Rational::new(d, denom))
    }

    /// Basis of the right kernel, from the reduced row echelon form.
    pub fn kernel(&self) -> Vec<Vec<Rational>> {
        let (m, n) = (self.rows, self.cols);
        let mut a = self.to_rows();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..n {
            if r == m {
                break;
            }
            let Some(p) = (r..m).find(|&i| !a[i][c].is_zero()) else {
                continue;
            };
            a.swap(r, p);
            let inv = a[r][c].recip();
            for x in a[r].iter_mut() {
                *x = &*x * &inv;
            }
            let pivot = a[r].clone();
            for (i, row) in a.iter_mut().enumerate() {
                if i != r && !row[c].is_zero() {
                    let factor = row[c].clone();
                    for (x, y) in row.iter_mut().zip(&pivot) {
                        *x = &*x - &factor * y;
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        let mut basis = Vec::new();
        for free in (0..n).filter(|c| !pivots.contains(c)) {
            let mut v = vec![Rational::zero(); n];
            v[free] = Rational::one();
            for (row, &pc) in pivots.iter().enumerate() {
                v[pc] = -a[row][free].clone();
            }
            basis.push(v);
        }
        basis
    }

    /// Symmetric with every leading principal minor positive.
    pub fn is_positive_definite(&self) -> bool {
        self.is_symmetric()
            && (1..=self.rows).all(|k| {
                self.submatrix(0, k, 0, k)
                    .det()
                    .map(|d| d.is_positive())
                    .unwrap_or(false)
            })
    }

    pub fn apply(&self, v: &[Rational]) -> Result<Vec<Rational>, LinalgError> {
        if v.len() != self.cols {
            return Err(LinalgError::DimensionMismatch(format!(
                "vector of length {} against {} columns",
                v.len(),
                self.cols
            )));
        }
        Ok((0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .fold(Rational::zero(), |acc, (a, b)| acc + a * b)
            })
            .collect())
    }
}

struct Elimination {
    rank: usize,
    negate: bool,
    last_pivot: BigInt,
}

/// In-place fraction-free row echelon form. Every division is exact.
fn bareiss(a: &mut [Vec<BigInt>], cols: usize) -> Elimination {
    let rows = a.len();
    let mut prev = BigInt::one();
    let mut r = 0;
    let mut negate = false;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        if p != r {
            a.swap(p, r);
            negate = !negate;
        }
        for i in r + 1..rows {
            for j in c + 1..cols {
                let v = &a[r][c] * &a[i][j] - &a[i][c] * &a[r][j];
                a[i][j] = v / &prev;
            }
            a[i][c] = BigInt::zero();
        }
        prev = a[r][c].clone();
        r += 1;
    }
    Elimination {
        rank: r,
        negate,
        last_pivot: prev,
    }
}

impl Mul for &QMatrix {
    type Output = QMatrix;

    /// Panics on a dimension mismatch; use [`QMatrix::checked_mul`] otherwise.
    fn mul(self, rhs: &QMatrix) -> QMatrix {
        self.checked_mul(rhs).expect("matrix dimension mismatch")
    }
}

impl Add for &QMatrix {
    type Output = QMatrix;

    fn add(self, rhs: &QMatrix) -> QMatrix {
        self.checked_add(rhs).expect("matrix dimension mismatch")
    }
}

impl Sub for &QMatrix {
    type Output = QMatrix;

    fn sub(self, rhs: &QMatrix) -> QMatrix {
        self.checked_sub(rhs).expect("matrix dimension mismatch")
    }
}

impl Neg for &QMatrix {
    type Output = QMatrix;

    fn neg(self) -> QMatrix {
        self.scale(&int(-1))
    }
}

impl fmt::Display for QMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "[")?;
            for (j, x) in self.row(i).iter().enumerate() {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{x}")?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn rank_examples() {
        assert_eq!(QMatrix::zeros(3, 3).rank(), 0);
        assert_eq!(QMatrix::identity(3).rank(), 3);
        assert_eq!(QMatrix::from_i64(&[&[1, 2], &[2, 4]]).rank(), 1);
        assert_eq!(QMatrix::zeros(0, 0).rank(), 0);
    }

    #[test]
    fn rank_with_skipped_columns() {
        let m = QMatrix::from_i64(&[&[0, 1, 2, 3], &[0, 2, 4, 7], &[0, 0, 0, 1]]);
        assert_eq!(m.rank(), 2);
    }

    #[test]
    fn rational_det_and_rank() {
        let m = QMatrix::from_rows(vec![vec![q(1, 2), q(1, 3)], vec![q(1, 4), q(1, 5)]]).unwrap();
        // 1/10 - 1/12 = 1/60
        assert_eq!(m.det().unwrap(), q(1, 60));
        assert_eq!(m.rank(), 2);
    }

    #[test]
    fn det_sign_after_swap() {
        let m = QMatrix::from_i64(&[&[0, 1], &[1, 0]]);
        assert_eq!(m.det().unwrap(), int(-1));
        let m = QMatrix::from_i64(&[&[2, -1, 0], &[-1, 2, -1], &[0, -1, 2]]);
        assert_eq!(m.det().unwrap(), int(4));
    }

    #[test]
    fn det_rejects_non_square() {
        assert!(matches!(
            QMatrix::zeros(2, 3).det(),
            Err(LinalgError::NotSquare { rows: 2, cols: 3 })
        ));
    }

    #[test]
    fn kernel_of_rank_one() {
        let m = QMatrix::from_i64(&[&[1, 2], &[2, 4]]);
        let k = m.kernel();
        assert_eq!(k.len(), 1);
        assert!(m.apply(&k[0]).unwrap().iter().all(Zero::is_zero));
    }

    #[test]
    fn positive_definite() {
        assert!(QMatrix::from_i64(&[&[2, 1], &[1, 2]]).is_positive_definite());
        assert!(!QMatrix::from_i64(&[&[0]]).is_positive_definite());
        assert!(!QMatrix::from_i64(&[&[1, 2], &[2, 1]]).is_positive_definite());
        assert!(!QMatrix::from_i64(&[&[2, 1], &[0, 2]]).is_positive_definite());
        assert!(QMatrix::zeros(0, 0).is_positive_definite());
    }

    #[test]
    fn ragged_rows_rejected() {
        let err = QMatrix::from_rows(vec![vec![int(1), int(2)], vec![int(3)]]).unwrap_err();
        assert!(matches!(err, LinalgError::RaggedRows { row: 1, .. }));
    }

    #[test]
    fn display() {
        let m = QMatrix::from_rows(vec![vec![q(1, 2), int(-3)]]).unwrap();
        assert_eq!(m.to_string(), "[[1/2, -3]]");
    }
}
