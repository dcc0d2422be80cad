//! Dense matrices over a [`Field`].

use std::fmt;

use crate::error::{Error, Result};
use crate::field::{Elem, Field};

/// Row-major matrix of field elements. The field is passed to every
/// arithmetic operation, so values stay small and hashable.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FqMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Elem>,
}

impl fmt::Debug for FqMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for r in 0..self.rows {
            if r > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{:?}", self.row(r))?;
        }
        write!(f, "]")
    }
}

impl FqMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        FqMatrix {
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = 1;
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Elem>>) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if let Some(bad) = rows.iter().find(|r| r.len() != cols) {
            return Err(Error::DimensionMismatch {
                expected: cols,
                found: bad.len(),
            });
        }
        let n = rows.len();
        Ok(FqMatrix {
            rows: n,
            cols,
            data: rows.into_iter().flatten().collect(),
        })
    }

    /// Builds a matrix from integer entries reduced into `field`.
    pub fn from_ints(field: &Field, rows: &[Vec<i64>]) -> Result<Self> {
        let converted = rows
            .iter()
            .map(|r| {
                r.iter()
                    .map(|&x| field.from_int(x))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_rows(converted)
    }

    pub fn from_flat(rows: usize, cols: usize, data: Vec<Elem>) -> Self {
        assert_eq!(data.len(), rows * cols);
        FqMatrix { rows, cols, data }
    }

    pub fn diagonal(entries: &[Elem]) -> Self {
        let n = entries.len();
        let mut m = Self::zeros(n, n);
        for (i, &e) in entries.iter().enumerate() {
            m.data[i * n + i] = e;
        }
        m
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

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> Elem {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: Elem) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[Elem] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn data(&self) -> &[Elem] {
        &self.data
    }

    pub fn to_rows(&self) -> Vec<Vec<Elem>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn is_identity(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| (0..self.cols).all(|j| self.get(i, j) == u16::from(i == j)))
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c));
            }
        }
        t
    }

    pub fn mul(&self, field: &Field, other: &FqMatrix) -> FqMatrix {
        assert_eq!(self.cols, other.rows, "matrix product dimension mismatch");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if b != 0 {
                        let idx = i * other.cols + j;
                        out.data[idx] = field.add(out.data[idx], field.mul(a, b));
                    }
                }
            }
        }
        out
    }

    /// Applies `f` to every entry.
    pub fn map(&self, f: impl Fn(Elem) -> Elem) -> FqMatrix {
        FqMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&x| f(x)).collect(),
        }
    }

    pub fn frobenius(&self, field: &Field, r: u32) -> FqMatrix {
        self.map(|x| field.frobenius(x, r))
    }

    pub fn scale(&self, field: &Field, s: Elem) -> FqMatrix {
        self.map(|x| field.mul(s, x))
    }

    /// Reduced row echelon form and rank. Zero rows are kept at the bottom.
    pub fn rref(&self, field: &Field) -> (FqMatrix, usize) {
        let mut m = self.clone();
        let mut rank = 0;
        for c in 0..m.cols {
            if rank == m.rows {
                break;
            }
            let Some(pivot) = (rank..m.rows).find(|&r| m.get(r, c) != 0) else {
                continue;
            };
            m.swap_rows(pivot, rank);
            let inv = field.inv(m.get(rank, c)).expect("pivot is nonzero");
            for j in c..m.cols {
                let v = m.get(rank, j);
                m.set(rank, j, field.mul(inv, v));
            }
            for r in 0..m.rows {
                if r == rank {
                    continue;
                }
                let factor = m.get(r, c);
                if factor == 0 {
                    continue;
                }
                for j in c..m.cols {
                    let v = field.sub(m.get(r, j), field.mul(factor, m.get(rank, j)));
                    m.set(r, j, v);
                }
            }
            rank += 1;
        }
        (m, rank)
    }

    pub fn rank(&self, field: &Field) -> usize {
        self.rref(field).1
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    /// Keeps the first `n` rows.
    pub fn truncate_rows(&self, n: usize) -> FqMatrix {
        FqMatrix {
            rows: n,
            cols: self.cols,
            data: self.data[..n * self.cols].to_vec(),
        }
    }

    /// Stacks `self` on top of `other`.
    pub fn vstack(&self, other: &FqMatrix) -> FqMatrix {
        assert_eq!(self.cols, other.cols);
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        FqMatrix {
            rows: self.rows + other.rows,
            cols: self.cols,
            data,
        }
    }

    pub fn inverse(&self, field: &Field) -> Result<FqMatrix> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch {
                expected: self.rows,
                found: self.cols,
            });
        }
        let n = self.rows;
        let mut aug = Self::zeros(n, 2 * n);
        for r in 0..n {
            for c in 0..n {
                aug.set(r, c, self.get(r, c));
            }
            aug.set(r, n + r, 1);
        }
        let (red, _) = aug.rref(field);
        for i in 0..n {
            for j in 0..n {
                if red.get(i, j) != u16::from(i == j) {
                    return Err(Error::Singular);
                }
            }
        }
        let mut inv = Self::zeros(n, n);
        for r in 0..n {
            for c in 0..n {
                inv.set(r, c, red.get(r, n + c));
            }
        }
        Ok(inv)
    }

    pub fn is_invertible(&self, field: &Field) -> bool {
        self.is_square() && self.rank(field) == self.rows
    }

    pub fn det(&self, field: &Field) -> Elem {
        assert!(self.is_square());
        let mut m = self.clone();
        let n = self.rows;
        let mut det: Elem = 1;
        for c in 0..n {
            let Some(pivot) = (c..n).find(|&r| m.get(r, c) != 0) else {
                return 0;
            };
            if pivot != c {
                m.swap_rows(pivot, c);
                det = field.neg(det);
            }
            let pv = m.get(c, c);
            det = field.mul(det, pv);
            let inv = field.inv(pv).expect("nonzero pivot");
            for r in c + 1..n {
                let factor = field.mul(m.get(r, c), inv);
                if factor == 0 {
                    continue;
                }
                for j in c..n {
                    let v = field.sub(m.get(r, j), field.mul(factor, m.get(c, j)));
                    m.set(r, j, v);
                }
            }
        }
        det
    }

    /// `g ↦ (gᵀ)⁻¹`.
    pub fn inverse_transpose(&self, field: &Field) -> Result<FqMatrix> {
        Ok(self.inverse(field)?.transpose())
    }

    /// Block-diagonal matrix with the given square blocks.
    pub fn block_diagonal(blocks: &[FqMatrix]) -> FqMatrix {
        let n: usize = blocks.iter().map(|b| b.rows).sum();
        let mut out = Self::zeros(n, n);
        let mut off = 0;
        for b in blocks {
            for r in 0..b.rows {
                for c in 0..b.cols {
                    out.set(off + r, off + c, b.get(r, c));
                }
            }
            off += b.rows;
        }
        out
    }

    /// Matrix with index `code` in the enumeration of all `rows × cols`
    /// matrices over a field of order `q` (entries as base-`q` digits,
    /// first entry least significant).
    pub fn from_index(rows: usize, cols: usize, q: u32, mut code: u64) -> FqMatrix {
        let mut data = vec![0; rows * cols];
        for d in data.iter_mut() {
            *d = (code % q as u64) as Elem;
            code /= q as u64;
        }
        FqMatrix { rows, cols, data }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(p: u32, m: u32) -> Field {
        Field::new(p, m).unwrap()
    }

    #[test]
    fn rref_identity_is_fixed() {
        let f2 = f(2, 1);
        let id = FqMatrix::identity(2);
        assert_eq!(id.rref(&f2), (id.clone(), 2));
    }

    #[test]
    fn rref_rank_one() {
        let f2 = f(2, 1);
        let m = FqMatrix::from_ints(&f2, &[vec![1, 1], vec![1, 1]]).unwrap();
        let (r, rank) = m.rref(&f2);
        assert_eq!(rank, 1);
        assert_eq!(
            r,
            FqMatrix::from_ints(&f2, &[vec![1, 1], vec![0, 0]]).unwrap()
        );
    }

    #[test]
    fn rref_zero() {
        let f3 = f(3, 1);
        let z = FqMatrix::zeros(2, 3);
        assert_eq!(z.rref(&f3), (z.clone(), 0));
    }

    #[test]
    fn rref_is_idempotent_on_all_2x3_over_f3() {
        let f3 = f(3, 1);
        for code in 0..3u64.pow(6) {
            let m = FqMatrix::from_index(2, 3, 3, code);
            let (r, rank) = m.rref(&f3);
            assert_eq!(r.rref(&f3), (r.clone(), rank));
        }
    }

    #[test]
    fn inverse_and_det_agree_over_f4() {
        let f4 = f(2, 2);
        let mut invertible = 0;
        for code in 0..4u64.pow(4) {
            let m = FqMatrix::from_index(2, 2, 4, code);
            let det = m.det(&f4);
            match m.inverse(&f4) {
                Ok(inv) => {
                    assert_ne!(det, 0);
                    assert!(m.mul(&f4, &inv).is_identity());
                    invertible += 1;
                }
                Err(e) => {
                    assert_eq!(e, Error::Singular);
                    assert_eq!(det, 0);
                }
            }
        }
        // |GL_2(F_4)| = (16 - 1)(16 - 4)
        assert_eq!(invertible, 180);
    }

    #[test]
    fn det_is_multiplicative() {
        let f3 = f(3, 1);
        for a in (0..3u64.pow(4)).step_by(7) {
            for b in (0..3u64.pow(4)).step_by(5) {
                let (x, y) = (
                    FqMatrix::from_index(2, 2, 3, a),
                    FqMatrix::from_index(2, 2, 3, b),
                );
                assert_eq!(x.mul(&f3, &y).det(&f3), f3.mul(x.det(&f3), y.det(&f3)));
            }
        }
    }
}
