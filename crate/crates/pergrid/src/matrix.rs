//! Dense matrices over a `FieldSpec`, with exact rank, kernel, and solve.
//!
//! Rank over the rationals goes through fraction-free (Bareiss) elimination on
//! a denominator-cleared integer copy, so no intermediate fractions appear.
//! Prime fields use plain Gaussian elimination. Pivot choice is deterministic:
//! leftmost column first, then topmost nonzero row.

use crate::field::{FieldSpec, Scalar};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Matrix {
    field: FieldSpec,
    rows: usize,
    cols: usize,
    entries: Vec<Scalar>,
}

impl Matrix {
    pub fn new(field: FieldSpec, rows: usize, cols: usize, entries: Vec<Scalar>) -> Matrix {
        assert_eq!(entries.len(), rows * cols, "entry count mismatch");
        debug_assert!(entries.iter().all(|e| field.owns(e)));
        Matrix { field, rows, cols, entries }
    }

    pub fn zero(field: FieldSpec, rows: usize, cols: usize) -> Matrix {
        Matrix::new(field, rows, cols, vec![field.zero(); rows * cols])
    }

    pub fn identity(field: FieldSpec, n: usize) -> Matrix {
        let mut m = Matrix::zero(field, n, n);
        for i in 0..n {
            m.set(i, i, field.one());
        }
        m
    }

    pub fn from_i64(field: FieldSpec, rows: usize, cols: usize, data: &[i64]) -> Matrix {
        assert_eq!(data.len(), rows * cols);
        Matrix::new(field, rows, cols, data.iter().map(|&x| field.from_i64(x)).collect())
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &Scalar {
        debug_assert!(r < self.rows && c < self.cols);
        &self.entries[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Scalar) {
        debug_assert!(r < self.rows && c < self.cols);
        self.entries[r * self.cols + c] = v;
    }

    pub fn entries(&self) -> &[Scalar] {
        &self.entries
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|e| e.is_zero())
    }

    pub fn is_identity(&self) -> bool {
        if self.rows != self.cols {
            return false;
        }
        (0..self.rows).all(|r| {
            (0..self.cols).all(|c| {
                let e = self.get(r, c);
                if r == c { e.is_one() } else { e.is_zero() }
            })
        })
    }

    pub fn transpose(&self) -> Matrix {
        let mut out = Matrix::zero(self.field, self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                out.set(c, r, self.get(r, c).clone());
            }
        }
        out
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.field, other.field, "field mismatch");
        assert_eq!(self.cols, other.rows, "shape mismatch in mul");
        let f = self.field;
        let mut out = Matrix::zero(f, self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(r, k);
                if a.is_zero() {
                    continue;
                }
                for c in 0..other.cols {
                    let add = f.mul(a, other.get(k, c));
                    if !add.is_zero() {
                        out.set(r, c, f.add(out.get(r, c), &add));
                    }
                }
            }
        }
        out
    }

    pub fn add(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.field, other.field);
        assert!(self.rows == other.rows && self.cols == other.cols, "shape mismatch in add");
        let f = self.field;
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| f.add(a, b))
            .collect();
        Matrix::new(f, self.rows, self.cols, entries)
    }

    pub fn neg(&self) -> Matrix {
        let f = self.field;
        Matrix::new(f, self.rows, self.cols, self.entries.iter().map(|e| f.neg(e)).collect())
    }

    pub fn sub(&self, other: &Matrix) -> Matrix {
        self.add(&other.neg())
    }

    pub fn scale(&self, s: &Scalar) -> Matrix {
        let f = self.field;
        Matrix::new(f, self.rows, self.cols, self.entries.iter().map(|e| f.mul(e, s)).collect())
    }

    /// Stacks blocks vertically. All blocks must agree on column count.
    pub fn vstack(blocks: &[&Matrix]) -> Matrix {
        assert!(!blocks.is_empty());
        let f = blocks[0].field;
        let cols = blocks[0].cols;
        let rows = blocks.iter().map(|b| b.rows).sum();
        let mut entries = Vec::with_capacity(rows * cols);
        for b in blocks {
            assert_eq!(b.cols, cols, "column mismatch in vstack");
            assert_eq!(b.field, f);
            entries.extend(b.entries.iter().cloned());
        }
        Matrix::new(f, rows, cols, entries)
    }

    /// Stacks blocks horizontally. All blocks must agree on row count.
    pub fn hstack(blocks: &[&Matrix]) -> Matrix {
        assert!(!blocks.is_empty());
        let t: Vec<Matrix> = blocks.iter().map(|b| b.transpose()).collect();
        Matrix::vstack(&t.iter().collect::<Vec<_>>()).transpose()
    }

    pub fn submatrix(&self, rs: std::ops::Range<usize>, cs: std::ops::Range<usize>) -> Matrix {
        let mut out = Matrix::zero(self.field, rs.len(), cs.len());
        for (ri, r) in rs.clone().enumerate() {
            for (ci, c) in cs.clone().enumerate() {
                out.set(ri, ci, self.get(r, c).clone());
            }
        }
        out
    }

    pub fn column(&self, c: usize) -> Matrix {
        self.submatrix(0..self.rows, c..c + 1)
    }

    /// Reduced row echelon form together with the pivot column indices.
    pub fn rref(&self) -> (Matrix, Vec<usize>) {
        let f = self.field;
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..m.cols {
            if row == m.rows {
                break;
            }
            let Some(pr) = (row..m.rows).find(|&r| !m.get(r, col).is_zero()) else {
                continue;
            };
            if pr != row {
                for c in 0..m.cols {
                    let a = m.get(row, c).clone();
                    let b = m.get(pr, c).clone();
                    m.set(row, c, b);
                    m.set(pr, c, a);
                }
            }
            let inv = f.inv(m.get(row, col));
            for c in col..m.cols {
                let v = f.mul(m.get(row, c), &inv);
                m.set(row, c, v);
            }
            for r in 0..m.rows {
                if r == row || m.get(r, col).is_zero() {
                    continue;
                }
                let factor = m.get(r, col).clone();
                for c in col..m.cols {
                    let v = f.sub(m.get(r, c), &f.mul(&factor, m.get(row, c)));
                    m.set(r, c, v);
                }
            }
            pivots.push(col);
            row += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        match self.field {
            FieldSpec::Prime(_) => self.rref().1.len(),
            FieldSpec::Rational => self.bareiss_rank(),
        }
    }

    /// Fraction-free rank: clear denominators rowwise, then Bareiss elimination
    /// over the integers with exact divisions only.
    fn bareiss_rank(&self) -> usize {
        let mut m: Vec<Vec<BigInt>> = (0..self.rows)
            .map(|r| {
                let mut lcm = BigInt::one();
                for c in 0..self.cols {
                    lcm = lcm.lcm(self.get(r, c).as_rational().denom());
                }
                (0..self.cols)
                    .map(|c| {
                        let q = self.get(r, c).as_rational();
                        q.numer() * (&lcm / q.denom())
                    })
                    .collect()
            })
            .collect();
        let mut prev = BigInt::one();
        let mut row = 0;
        for col in 0..self.cols {
            if row == self.rows {
                break;
            }
            let Some(pr) = (row..self.rows).find(|&r| !m[r][col].is_zero()) else {
                continue;
            };
            m.swap(row, pr);
            for r in row + 1..self.rows {
                for c in col + 1..self.cols {
                    let num = &m[row][col] * &m[r][c] - &m[r][col] * &m[row][c];
                    let (q, rem) = num.div_rem(&prev);
                    debug_assert!(rem.is_zero(), "Bareiss division must be exact");
                    m[r][c] = q;
                }
                m[r][col] = BigInt::zero();
            }
            prev = m[row][col].clone();
            row += 1;
        }
        row
    }

    /// Basis of the right kernel, returned as the columns of a `cols x nullity`
    /// matrix. Deterministic: one column per free variable, ascending.
    pub fn kernel_basis(&self) -> Matrix {
        let f = self.field;
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut out = Matrix::zero(f, self.cols, free.len());
        for (k, &fc) in free.iter().enumerate() {
            out.set(fc, k, f.one());
            for (pi, &pc) in pivots.iter().enumerate() {
                out.set(pc, k, f.neg(r.get(pi, fc)));
            }
        }
        out
    }

    /// Solves `self * x = b` for all columns of `b` at once. Returns the
    /// particular solution with every free variable zero, or `None`.
    pub fn solve(&self, b: &Matrix) -> Option<Matrix> {
        assert_eq!(self.rows, b.rows, "solve needs rows(a) = rows(b)");
        assert_eq!(self.field, b.field);
        let f = self.field;
        let aug = Matrix::hstack(&[self, b]);
        let (r, pivots) = aug.rref();
        if pivots.iter().any(|&c| c >= self.cols) {
            return None;
        }
        let mut x = Matrix::zero(f, self.cols, b.cols);
        for (pi, &pc) in pivots.iter().enumerate() {
            for k in 0..b.cols {
                x.set(pc, k, r.get(pi, self.cols + k).clone());
            }
        }
        Some(x)
    }

    /// Inverse of a square matrix, if it exists.
    pub fn invert(&self) -> Option<Matrix> {
        if self.rows != self.cols {
            return None;
        }
        let id = Matrix::identity(self.field, self.rows);
        let inv = self.solve(&id)?;
        if self.mul(&inv).is_identity() {
            Some(inv)
        } else {
            None
        }
    }

    /// Greedily extends the column space of `self` by standard basis vectors
    /// until it spans everything; returns the indices of the added vectors.
    pub fn complement_standard_columns(&self) -> Vec<usize> {
        let mut cur = self.clone();
        let mut rank = cur.rank();
        let mut added = Vec::new();
        for i in 0..self.rows {
            if rank == self.rows {
                break;
            }
            let mut e = Matrix::zero(self.field, self.rows, 1);
            e.set(i, 0, self.field.one());
            let cand = Matrix::hstack(&[&cur, &e]);
            let cr = cand.rank();
            if cr > rank {
                rank = cr;
                cur = cand;
                added.push(i);
            }
        }
        assert_eq!(rank, self.rows, "columns cannot be completed");
        added
    }
}
