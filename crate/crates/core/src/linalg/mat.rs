//! Dense matrices over `F_p` with exact row reduction.
//!
//! Linear maps act on column vectors: a map `F^n -> F^m` is an `m x n` matrix.
//! Row-major storage; all entries share one characteristic.

use super::scalar::{self, Scalar};
use super::subspace::Subspace;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Mat {
    p: u16,
    rows: usize,
    cols: usize,
    data: Vec<u16>,
}

impl Mat {
    pub fn zero(p: u16, rows: usize, cols: usize) -> Mat {
        Mat { p, rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(p: u16, n: usize) -> Mat {
        let mut m = Mat::zero(p, n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    pub fn from_rows(p: u16, rows: Vec<Vec<u16>>) -> Mat {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        let mut data = Vec::with_capacity(r * c);
        for row in &rows {
            assert_eq!(row.len(), c, "ragged rows");
            for &x in row {
                assert!(x < p, "entry {x} out of range mod {p}");
                data.push(x);
            }
        }
        Mat { p, rows: r, cols: c, data }
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_cols(p: u16, cols: Vec<Vec<u16>>, col_len: usize) -> Mat {
        let c = cols.len();
        let mut m = Mat::zero(p, col_len, c);
        for (j, col) in cols.iter().enumerate() {
            assert_eq!(col.len(), col_len, "ragged columns");
            for (i, &x) in col.iter().enumerate() {
                m.set(i, j, x);
            }
        }
        m
    }

    pub fn characteristic(&self) -> u16 {
        self.p
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u16 {
        self.data[i * self.cols + j]
    }

    pub fn at(&self, i: usize, j: usize) -> Scalar {
        Scalar::new(self.p, self.get(i, j)).expect("stored residue is valid")
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: u16) {
        debug_assert!(v < self.p);
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[u16] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col(&self, j: usize) -> Vec<u16> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    pub fn transpose(&self) -> Mat {
        let mut t = Mat::zero(self.p, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j));
            }
        }
        t
    }

    pub fn add(&self, other: &Mat) -> Mat {
        assert_eq!((self.rows, self.cols, self.p), (other.rows, other.cols, other.p));
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(&a, &b)| scalar::add(self.p, a, b))
            .collect();
        Mat { p: self.p, rows: self.rows, cols: self.cols, data }
    }

    pub fn sub(&self, other: &Mat) -> Mat {
        assert_eq!((self.rows, self.cols, self.p), (other.rows, other.cols, other.p));
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(&a, &b)| scalar::sub(self.p, a, b))
            .collect();
        Mat { p: self.p, rows: self.rows, cols: self.cols, data }
    }

    pub fn scale(&self, c: u16) -> Mat {
        let data = self.data.iter().map(|&a| scalar::mul(self.p, c, a)).collect();
        Mat { p: self.p, rows: self.rows, cols: self.cols, data }
    }

    pub fn mul(&self, other: &Mat) -> Mat {
        assert_eq!(self.p, other.p, "mixed characteristics");
        assert_eq!(self.cols, other.rows, "inner dimension mismatch");
        let p = self.p as u32;
        let mut out = Mat::zero(self.p, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k) as u32;
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    let cur = out.get(i, j) as u32;
                    out.set(i, j, ((cur + a * other.get(k, j) as u32) % p) as u16);
                }
            }
        }
        out
    }

    /// Apply to a column vector.
    pub fn apply(&self, v: &[u16]) -> Vec<u16> {
        assert_eq!(v.len(), self.cols, "vector length mismatch");
        let p = self.p as u32;
        (0..self.rows)
            .map(|i| {
                let mut acc: u32 = 0;
                for j in 0..self.cols {
                    acc = (acc + self.get(i, j) as u32 * v[j] as u32) % p;
                }
                acc as u16
            })
            .collect()
    }

    /// Kronecker product; `kron(A, B) . vec(x (x) y) = vec(Ax (x) By)` with
    /// `vec(x (x) y)[i * dim_y + j] = x_i y_j`.
    pub fn kron(&self, other: &Mat) -> Mat {
        assert_eq!(self.p, other.p);
        let mut out = Mat::zero(self.p, self.rows * other.rows, self.cols * other.cols);
        for i1 in 0..self.rows {
            for j1 in 0..self.cols {
                let a = self.get(i1, j1);
                if a == 0 {
                    continue;
                }
                for i2 in 0..other.rows {
                    for j2 in 0..other.cols {
                        let v = scalar::mul(self.p, a, other.get(i2, j2));
                        out.set(i1 * other.rows + i2, j1 * other.cols + j2, v);
                    }
                }
            }
        }
        out
    }

    pub fn hstack(&self, other: &Mat) -> Mat {
        assert_eq!(self.rows, other.rows);
        assert_eq!(self.p, other.p);
        let mut out = Mat::zero(self.p, self.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(i, j, self.get(i, j));
            }
            for j in 0..other.cols {
                out.set(i, self.cols + j, other.get(i, j));
            }
        }
        out
    }

    pub fn vstack(&self, other: &Mat) -> Mat {
        assert_eq!(self.cols, other.cols);
        assert_eq!(self.p, other.p);
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Mat { p: self.p, rows: self.rows + other.rows, cols: self.cols, data }
    }

    /// Reduced row-echelon form and the pivot column indices.
    /// The row space is preserved; pivots are 1 and alone in their column.
    pub fn rref(&self) -> (Mat, Vec<usize>) {
        let mut m = self.clone();
        let p = m.p;
        let mut pivots = Vec::new();
        let mut pivot_row = 0usize;
        for col in 0..m.cols {
            if pivot_row >= m.rows {
                break;
            }
            let Some(src) = (pivot_row..m.rows).find(|&r| m.get(r, col) != 0) else {
                continue;
            };
            if src != pivot_row {
                for j in 0..m.cols {
                    let a = m.get(pivot_row, j);
                    let b = m.get(src, j);
                    m.set(pivot_row, j, b);
                    m.set(src, j, a);
                }
            }
            let inv = scalar::inv(p, m.get(pivot_row, col));
            for j in 0..m.cols {
                m.set(pivot_row, j, scalar::mul(p, inv, m.get(pivot_row, j)));
            }
            for r in 0..m.rows {
                if r != pivot_row {
                    let c = m.get(r, col);
                    if c != 0 {
                        for j in 0..m.cols {
                            let v = scalar::sub(p, m.get(r, j), scalar::mul(p, c, m.get(pivot_row, j)));
                            m.set(r, j, v);
                        }
                    }
                }
            }
            pivots.push(col);
            pivot_row += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    pub fn is_invertible(&self) -> bool {
        self.rows == self.cols && self.rank() == self.rows
    }

    /// Right null space `{ v : M v = 0 }` as a canonical subspace of `F^cols`.
    pub fn kernel(&self) -> Subspace {
        let (r, pivots) = self.rref();
        let mut basis = Vec::new();
        let pivot_set: Vec<bool> = {
            let mut s = vec![false; self.cols];
            for &c in &pivots {
                s[c] = true;
            }
            s
        };
        for free in 0..self.cols {
            if pivot_set[free] {
                continue;
            }
            let mut v = vec![0u16; self.cols];
            v[free] = 1;
            for (row, &pc) in pivots.iter().enumerate() {
                v[pc] = scalar::neg(self.p, r.get(row, free));
            }
            basis.push(v);
        }
        Subspace::from_rows(self.p, self.cols, basis)
    }

    /// Column space as a canonical subspace of `F^rows`.
    pub fn image(&self) -> Subspace {
        let rows: Vec<Vec<u16>> = (0..self.cols).map(|j| self.col(j)).collect();
        Subspace::from_rows(self.p, self.rows, rows)
    }

    /// A particular solution of `M x = b`, or `None` when the system is
    /// inconsistent. Free variables are set to zero.
    pub fn solve(&self, b: &[u16]) -> Result<Option<Vec<u16>>> {
        if b.len() != self.rows {
            return Err(Error::DimensionMismatch(format!(
                "solve: rhs length {} vs {} rows",
                b.len(),
                self.rows
            )));
        }
        let rhs = Mat::from_cols(self.p, vec![b.to_vec()], self.rows);
        Ok(self.solve_matrix(&rhs)?.map(|x| x.col(0)))
    }

    /// Solve `M X = B` column-wise; `None` when any column is inconsistent.
    pub fn solve_matrix(&self, b: &Mat) -> Result<Option<Mat>> {
        if b.rows() != self.rows {
            return Err(Error::DimensionMismatch(format!(
                "solve_matrix: rhs has {} rows, lhs has {}",
                b.rows(),
                self.rows
            )));
        }
        let aug = self.hstack(b);
        let (r, pivots) = aug.rref();
        // a pivot in the rhs block means inconsistency
        if pivots.iter().any(|&c| c >= self.cols) {
            return Ok(None);
        }
        let mut x = Mat::zero(self.p, self.cols, b.cols());
        for (row, &pc) in pivots.iter().enumerate() {
            for j in 0..b.cols() {
                x.set(pc, j, r.get(row, self.cols + j));
            }
        }
        Ok(Some(x))
    }

    pub fn inverse(&self) -> Option<Mat> {
        if self.rows != self.cols {
            return None;
        }
        if self.rows == 0 {
            return Some(self.clone());
        }
        let inv = self
            .solve_matrix(&Mat::identity(self.p, self.rows))
            .expect("square dimensions")?;
        // solve_matrix silently zero-fills free columns; reject singular input
        if self.mul(&inv) == Mat::identity(self.p, self.rows) {
            Some(inv)
        } else {
            None
        }
    }

    /// Row-major flattening, for representing matrices as vectors of `F^(r*c)`.
    pub fn flatten(&self) -> Vec<u16> {
        self.data.clone()
    }

    pub fn from_flat(p: u16, rows: usize, cols: usize, data: Vec<u16>) -> Mat {
        assert_eq!(data.len(), rows * cols);
        debug_assert!(data.iter().all(|&x| x < p));
        Mat { p, rows, cols, data }
    }

    /// Stable byte key (dimensions + entries); entries fit in `u8` since `p <= 97`.
    pub fn key(&self) -> Vec<u8> {
        let mut k = Vec::with_capacity(4 + self.data.len());
        k.extend_from_slice(&(self.rows as u16).to_le_bytes());
        k.extend_from_slice(&(self.cols as u16).to_le_bytes());
        k.extend(self.data.iter().map(|&x| x as u8));
        k
    }

    /// Render as `[[..],[..]]` for report witnesses.
    pub fn render(&self) -> String {
        let rows: Vec<String> = (0..self.rows)
            .map(|i| {
                let entries: Vec<String> = self.row(i).iter().map(|x| x.to_string()).collect();
                format!("[{}]", entries.join(","))
            })
            .collect();
        format!("[{}]", rows.join(","))
    }
}

/// Sum of `coeffs[i] * mats[i]`.
pub fn linear_combination(p: u16, mats: &[Mat], coeffs: &[u16]) -> Mat {
    assert_eq!(mats.len(), coeffs.len());
    assert!(!mats.is_empty(), "empty linear combination");
    let mut acc = Mat::zero(p, mats[0].rows(), mats[0].cols());
    for (m, &c) in mats.iter().zip(coeffs) {
        if c != 0 {
            acc = acc.add(&m.scale(c));
        }
    }
    acc
}
