//! Subspaces of `F_q^n` in canonical (RREF) form.

use std::fmt;

use crate::error::{Error, Result};
use crate::field::{Elem, Field};
use crate::matrix::FqMatrix;

/// A subspace of `F_q^n`, stored as the RREF of a basis with no zero rows.
///
/// Two subspaces are equal exactly when their bases are identical, so
/// subspaces (and flags built from them) can be hashed and sorted.
/// The derived order compares dimension first, then basis entries.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Subspace {
    basis: FqMatrix,
    ambient: usize,
}

impl fmt::Debug for Subspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<{:?}>", self.basis)
    }
}

/// Number of `d`-dimensional subspaces of `F_q^n`.
pub fn gaussian_binomial(n: usize, d: usize, q: u64) -> u64 {
    if d > n {
        return 0;
    }
    let mut num: u128 = 1;
    let mut den: u128 = 1;
    for i in 0..d {
        num *= (q as u128).pow((n - i) as u32) - 1;
        den *= (q as u128).pow((i + 1) as u32) - 1;
    }
    (num / den) as u64
}

impl Subspace {
    /// Span of the rows of `spanning`.
    pub fn span(field: &Field, spanning: &FqMatrix) -> Subspace {
        let (r, rank) = spanning.rref(field);
        Subspace {
            basis: r.truncate_rows(rank),
            ambient: spanning.cols(),
        }
    }

    pub fn from_vectors(field: &Field, ambient: usize, vectors: &[Vec<Elem>]) -> Result<Subspace> {
        if let Some(v) = vectors.iter().find(|v| v.len() != ambient) {
            return Err(Error::DimensionMismatch {
                expected: ambient,
                found: v.len(),
            });
        }
        let m = FqMatrix::from_flat(vectors.len(), ambient, vectors.concat());
        Ok(Self::span(field, &m))
    }

    pub fn zero(ambient: usize) -> Subspace {
        Subspace {
            basis: FqMatrix::zeros(0, ambient),
            ambient,
        }
    }

    pub fn full(ambient: usize) -> Subspace {
        Subspace {
            basis: FqMatrix::identity(ambient),
            ambient,
        }
    }

    /// Span of the standard basis vectors `e_i`, `i ∈ coords` (0-based).
    pub fn coordinate(ambient: usize, coords: &[usize]) -> Subspace {
        let mut idx = coords.to_vec();
        idx.sort_unstable();
        idx.dedup();
        let mut m = FqMatrix::zeros(idx.len(), ambient);
        for (r, &c) in idx.iter().enumerate() {
            m.set(r, c, 1);
        }
        Subspace { basis: m, ambient }
    }

    pub fn dim(&self) -> usize {
        self.basis.rows()
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn basis(&self) -> &FqMatrix {
        &self.basis
    }

    pub fn is_zero(&self) -> bool {
        self.dim() == 0
    }

    pub fn is_full(&self) -> bool {
        self.dim() == self.ambient
    }

    fn check(&self, other: &Subspace) -> Result<()> {
        if self.ambient != other.ambient {
            return Err(Error::DimensionMismatch {
                expected: self.ambient,
                found: other.ambient,
            });
        }
        Ok(())
    }

    pub fn sum(&self, field: &Field, other: &Subspace) -> Result<Subspace> {
        self.check(other)?;
        Ok(Self::span(field, &self.basis.vstack(&other.basis)))
    }

    pub fn intersect(&self, field: &Field, other: &Subspace) -> Result<Subspace> {
        self.check(other)?;
        // A ∩ B = (A° + B°)°
        let sum = self
            .annihilator(field)
            .sum(field, &other.annihilator(field))?;
        Ok(sum.annihilator(field))
    }

    /// Does `self` contain `other`?
    pub fn contains(&self, field: &Field, other: &Subspace) -> Result<bool> {
        self.check(other)?;
        if other.dim() > self.dim() {
            return Ok(false);
        }
        Ok((0..other.dim()).all(|r| self.contains_vector(field, other.basis.row(r))))
    }

    pub fn contains_vector(&self, field: &Field, v: &[Elem]) -> bool {
        // Reduce v against the RREF basis using its pivots.
        let mut w = v.to_vec();
        for r in 0..self.dim() {
            let row = self.basis.row(r);
            let pivot = row
                .iter()
                .position(|&x| x != 0)
                .expect("RREF rows are nonzero");
            let c = w[pivot];
            if c != 0 {
                for (wj, &bj) in w.iter_mut().zip(row) {
                    *wj = field.sub(*wj, field.mul(c, bj));
                }
            }
        }
        w.iter().all(|&x| x == 0)
    }

    /// `{x : x·u = 0 for all u ∈ self}` for the standard dot product.
    pub fn annihilator(&self, field: &Field) -> Subspace {
        let n = self.ambient;
        let pivots: Vec<usize> = (0..self.dim())
            .map(|r| self.basis.row(r).iter().position(|&x| x != 0).unwrap())
            .collect();
        let free: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
        let mut out = FqMatrix::zeros(free.len(), n);
        for (k, &fc) in free.iter().enumerate() {
            out.set(k, fc, 1);
            for (r, &pc) in pivots.iter().enumerate() {
                out.set(k, pc, field.neg(self.basis.get(r, fc)));
            }
        }
        Self::span(field, &out)
    }

    /// Image `g·U` under the column-vector action of an `n × n` matrix.
    pub fn image(&self, field: &Field, g: &FqMatrix) -> Subspace {
        Self::span(field, &self.basis.mul(field, &g.transpose()))
    }

    /// Entrywise `x ↦ x^{p^r}` applied to a basis.
    pub fn frobenius(&self, field: &Field, r: u32) -> Subspace {
        Self::span(field, &self.basis.frobenius(field, r))
    }

    /// Do all basis entries satisfy `pred`?
    pub fn entries_in(&self, pred: impl Fn(Elem) -> bool) -> bool {
        self.basis.data().iter().all(|&x| pred(x))
    }

    /// All subspaces of dimension `d` in `F_q^n`, in sorted order.
    pub fn enumerate(field: &Field, n: usize, d: usize) -> Vec<Subspace> {
        let q = field.order() as u64;
        let mut out = Vec::with_capacity(gaussian_binomial(n, d, q) as usize);
        for pivots in combinations(n, d) {
            let free: Vec<(usize, usize)> = pivots
                .iter()
                .enumerate()
                .flat_map(|(r, &pc)| {
                    let pivots = &pivots;
                    (pc + 1..n)
                        .filter(move |c| !pivots.contains(c))
                        .map(move |c| (r, c))
                })
                .collect();
            let count = q.pow(free.len() as u32);
            for code in 0..count {
                let mut m = FqMatrix::zeros(d, n);
                for (r, &pc) in pivots.iter().enumerate() {
                    m.set(r, pc, 1);
                }
                let mut k = code;
                for &(r, c) in &free {
                    m.set(r, c, (k % q) as Elem);
                    k /= q;
                }
                out.push(Subspace {
                    basis: m,
                    ambient: n,
                });
            }
        }
        out.sort();
        out
    }

    /// All subspaces of `F_q^n` including `0` and the full space.
    pub fn enumerate_all(field: &Field, n: usize) -> Vec<Subspace> {
        (0..=n).flat_map(|d| Self::enumerate(field, n, d)).collect()
    }

    /// Total subspace count of `F_q^n`, `0` and full space included.
    pub fn count_all(n: usize, q: u64) -> u64 {
        (0..=n).map(|d| gaussian_binomial(n, d, q)).sum()
    }
}

pub(crate) fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::new(), &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(p: u32, m: u32) -> Field {
        Field::new(p, m).unwrap()
    }

    fn sub(field: &Field, rows: &[Vec<i64>]) -> Subspace {
        Subspace::span(field, &FqMatrix::from_ints(field, rows).unwrap())
    }

    #[test]
    fn complementary_lines() {
        let f2 = f(2, 1);
        let a = sub(&f2, &[vec![1, 0]]);
        let b = sub(&f2, &[vec![0, 1]]);
        assert!(a.sum(&f2, &b).unwrap().is_full());
        assert!(a.intersect(&f2, &b).unwrap().is_zero());
    }

    #[test]
    fn annihilator_of_110() {
        let f2 = f(2, 1);
        let a = sub(&f2, &[vec![1, 1, 0]]);
        let ann = a.annihilator(&f2);
        assert_eq!(ann.dim(), 2);
        // {x : x1 + x2 = 0} over F_2 = span{(1,1,0), (0,0,1)}
        assert_eq!(ann, sub(&f2, &[vec![1, 1, 0], vec![0, 0, 1]]));
    }

    #[test]
    fn full_space_contains_everything() {
        let f3 = f(3, 1);
        let full = Subspace::full(3);
        for s in Subspace::enumerate_all(&f3, 3) {
            assert!(full.contains(&f3, &s).unwrap());
        }
    }

    #[test]
    fn ambient_mismatch_is_an_error() {
        let f2 = f(2, 1);
        let a = Subspace::full(2);
        let b = Subspace::full(3);
        assert!(a.sum(&f2, &b).is_err());
        assert!(a.intersect(&f2, &b).is_err());
        assert!(a.contains(&f2, &b).is_err());
    }

    #[test]
    fn enumeration_counts_match_gaussian_binomials() {
        for (p, m, n) in [(2, 1, 3), (3, 1, 3), (2, 2, 3), (2, 1, 4), (3, 1, 2)] {
            let field = f(p, m);
            let q = field.order() as u64;
            for d in 0..=n {
                let subs = Subspace::enumerate(&field, n, d);
                assert_eq!(
                    subs.len() as u64,
                    gaussian_binomial(n, d, q),
                    "n={n} d={d} q={q}"
                );
                let mut dedup = subs.clone();
                dedup.dedup();
                assert_eq!(dedup.len(), subs.len());
            }
        }
    }

    #[test]
    fn dimension_formula_and_duality_exhaustive_f2_cubed() {
        let f2 = f(2, 1);
        let all = Subspace::enumerate_all(&f2, 3);
        for a in &all {
            let ann = a.annihilator(&f2);
            assert_eq!(ann.dim(), 3 - a.dim());
            assert_eq!(&ann.annihilator(&f2), a);
            for b in &all {
                let s = a.sum(&f2, b).unwrap();
                let i = a.intersect(&f2, b).unwrap();
                assert_eq!(a.dim() + b.dim(), s.dim() + i.dim());
                if a.contains(&f2, b).unwrap() {
                    assert!(b.annihilator(&f2).contains(&f2, &ann).unwrap());
                }
            }
        }
    }

    #[test]
    fn canonical_form_is_basis_independent() {
        let f3 = f(3, 1);
        let a = sub(&f3, &[vec![1, 2, 0], vec![0, 1, 1]]);
        // (1,0,1) = (1,2,0) + (0,1,1) and (1,1,2) = (1,2,0) + 2(0,1,1)
        let b = sub(&f3, &[vec![1, 0, 1], vec![1, 1, 2]]);
        assert_eq!(a, b);
    }

    #[test]
    fn gaussian_binomial_values() {
        assert_eq!(gaussian_binomial(2, 1, 2), 3);
        assert_eq!(gaussian_binomial(3, 1, 2), 7);
        assert_eq!(gaussian_binomial(3, 1, 3), 13);
        assert_eq!(gaussian_binomial(4, 2, 2), 35);
        assert_eq!(gaussian_binomial(4, 2, 4), 357);
    }
}
