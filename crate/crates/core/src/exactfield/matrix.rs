use std::fmt;

use super::echelon::{streamed_rank, Echelon};
use super::scalar::{add_mod, check_modulus, inv_mod, mul_mod, neg_mod, sub_mod, FieldScalar};
use crate::error::{Error, Result};

/// Dense row-major matrix over GF(p).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FieldMatrix {
    p: u32,
    nrows: usize,
    ncols: usize,
    data: Vec<u32>,
}

/// Reduced row echelon form: ascending pivot columns and one row per pivot.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rref {
    pub pivots: Vec<usize>,
    pub rows: FieldMatrix,
}

impl FieldMatrix {
    pub fn zeros(p: u32, nrows: usize, ncols: usize) -> Self {
        FieldMatrix {
            p,
            nrows,
            ncols,
            data: vec![0; nrows * ncols],
        }
    }

    pub fn identity(p: u32, n: usize) -> Self {
        let mut m = Self::zeros(p, n, n);
        for i in 0..n {
            m.data[i * n + i] = 1 % p;
        }
        m
    }

    pub fn diagonal(p: u32, diag: &[u32]) -> Self {
        let n = diag.len();
        let mut m = Self::zeros(p, n, n);
        for (i, &d) in diag.iter().enumerate() {
            m.data[i * n + i] = d % p;
        }
        m
    }

    /// Builds a matrix from row-major data, reducing every entry mod p.
    pub fn from_vec(p: u32, nrows: usize, ncols: usize, data: Vec<u32>) -> Result<Self> {
        check_modulus(p as u64)?;
        if data.len() != nrows * ncols {
            return Err(Error::Dimension(format!(
                "{} entries for a {nrows}x{ncols} matrix",
                data.len()
            )));
        }
        let data = data.into_iter().map(|x| x % p).collect();
        Ok(FieldMatrix { p, nrows, ncols, data })
    }

    pub fn from_rows(p: u32, rows: &[Vec<u32>]) -> Result<Self> {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, |r| r.len());
        if rows.iter().any(|r| r.len() != ncols) {
            return Err(Error::Dimension("ragged rows".into()));
        }
        Self::from_vec(p, nrows, ncols, rows.concat())
    }

    /// Signed integer entries, reduced into `[0, p)`.
    pub fn from_i64_rows(p: u32, rows: &[Vec<i64>]) -> Result<Self> {
        let reduced: Vec<Vec<u32>> = rows
            .iter()
            .map(|r| r.iter().map(|&x| x.rem_euclid(p as i64) as u32).collect())
            .collect();
        Self::from_rows(p, &reduced)
    }

    pub fn from_fn(p: u32, nrows: usize, ncols: usize, mut f: impl FnMut(usize, usize) -> u32) -> Self {
        let mut data = Vec::with_capacity(nrows * ncols);
        for i in 0..nrows {
            for j in 0..ncols {
                data.push(f(i, j) % p);
            }
        }
        FieldMatrix { p, nrows, ncols, data }
    }

    pub fn modulus(&self) -> u32 {
        self.p
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.nrows, self.ncols)
    }

    pub fn data(&self) -> &[u32] {
        &self.data
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u32 {
        self.data[i * self.ncols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: u32) {
        self.data[i * self.ncols + j] = v % self.p;
    }

    /// Adds `v` to entry `(i, j)`.
    #[inline]
    pub fn add_at(&mut self, i: usize, j: usize, v: u32) {
        let e = &mut self.data[i * self.ncols + j];
        *e = add_mod(*e, v % self.p, self.p);
    }

    pub fn scalar(&self, i: usize, j: usize) -> FieldScalar {
        FieldScalar::new(self.get(i, j) as u64, self.p)
    }

    pub fn row(&self, i: usize) -> &[u32] {
        &self.data[i * self.ncols..(i + 1) * self.ncols]
    }

    pub fn column(&self, j: usize) -> Vec<u32> {
        (0..self.nrows).map(|i| self.get(i, j)).collect()
    }

    pub fn rows(&self) -> impl Iterator<Item = &[u32]> {
        (0..self.nrows).map(move |i| self.row(i))
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.p, self.ncols, self.nrows);
        for i in 0..self.nrows {
            for j in 0..self.ncols {
                t.data[j * self.nrows + i] = self.data[i * self.ncols + j];
            }
        }
        t
    }

    fn same_field(&self, other: &Self) -> Result<()> {
        if self.p != other.p {
            return Err(Error::Dimension(format!("moduli {} and {}", self.p, other.p)));
        }
        Ok(())
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.same_field(other)?;
        if self.ncols != other.nrows {
            return Err(Error::Dimension(format!(
                "cannot multiply {}x{} by {}x{}",
                self.nrows, self.ncols, other.nrows, other.ncols
            )));
        }
        let p = self.p as u64;
        let n = other.ncols;
        let mut out = vec![0u64; self.nrows * n];
        // residues are below 2^26, so 2^12 products fit in u64 before reducing
        const FLUSH: usize = 4096;
        for i in 0..self.nrows {
            let acc = &mut out[i * n..(i + 1) * n];
            for (t, &a) in self.row(i).iter().enumerate() {
                if a == 0 {
                    continue;
                }
                let a = a as u64;
                for (x, &b) in acc.iter_mut().zip(other.row(t)) {
                    *x += a * b as u64;
                }
                if t % FLUSH == FLUSH - 1 {
                    acc.iter_mut().for_each(|x| *x %= p);
                }
            }
        }
        let data = out.into_iter().map(|x| (x % p) as u32).collect();
        Ok(FieldMatrix {
            p: self.p,
            nrows: self.nrows,
            ncols: n,
            data,
        })
    }

    pub fn mul_vec(&self, v: &[u32]) -> Result<Vec<u32>> {
        if v.len() != self.ncols {
            return Err(Error::Dimension(format!("vector of length {} for {} columns", v.len(), self.ncols)));
        }
        let p = self.p as u64;
        Ok(self
            .rows()
            .map(|row| (row.iter().zip(v).map(|(&a, &b)| a as u64 * b as u64 % p).sum::<u64>() % p) as u32)
            .collect())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, add_mod)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, sub_mod)
    }

    fn zip_with(&self, other: &Self, op: fn(u32, u32, u32) -> u32) -> Result<Self> {
        self.same_field(other)?;
        if self.shape() != other.shape() {
            return Err(Error::Dimension(format!("shapes {:?} and {:?}", self.shape(), other.shape())));
        }
        let data = self.data.iter().zip(&other.data).map(|(&a, &b)| op(a, b, self.p)).collect();
        Ok(FieldMatrix { data, ..*self })
    }

    pub fn scale(&self, c: u32) -> Self {
        let c = c % self.p;
        let data = self.data.iter().map(|&a| mul_mod(a, c, self.p)).collect();
        FieldMatrix { data, ..*self }
    }

    pub fn neg(&self) -> Self {
        let data = self.data.iter().map(|&a| neg_mod(a, self.p)).collect();
        FieldMatrix { data, ..*self }
    }

    pub fn vstack(blocks: &[&FieldMatrix]) -> Result<Self> {
        let first = blocks.first().ok_or_else(|| Error::Dimension("empty stack".into()))?;
        let mut data = Vec::new();
        let mut nrows = 0;
        for b in blocks {
            first.same_field(b)?;
            if b.ncols != first.ncols {
                return Err(Error::Dimension("vstack with differing column counts".into()));
            }
            data.extend_from_slice(&b.data);
            nrows += b.nrows;
        }
        Ok(FieldMatrix {
            p: first.p,
            nrows,
            ncols: first.ncols,
            data,
        })
    }

    pub fn hstack(blocks: &[&FieldMatrix]) -> Result<Self> {
        let first = blocks.first().ok_or_else(|| Error::Dimension("empty stack".into()))?;
        for b in blocks {
            first.same_field(b)?;
            if b.nrows != first.nrows {
                return Err(Error::Dimension("hstack with differing row counts".into()));
            }
        }
        let ncols = blocks.iter().map(|b| b.ncols).sum();
        let mut data = Vec::with_capacity(first.nrows * ncols);
        for i in 0..first.nrows {
            for b in blocks {
                data.extend_from_slice(b.row(i));
            }
        }
        Ok(FieldMatrix {
            p: first.p,
            nrows: first.nrows,
            ncols,
            data,
        })
    }

    pub fn select_columns(&self, cols: &[usize]) -> Self {
        Self::from_fn(self.p, self.nrows, cols.len(), |i, j| self.get(i, cols[j]))
    }

    pub fn select_rows(&self, rows: &[usize]) -> Self {
        Self::from_fn(self.p, rows.len(), self.ncols, |i, j| self.get(rows[i], j))
    }

    fn to_f64_rows(&self) -> Vec<f64> {
        self.data.iter().map(|&x| x as f64).collect()
    }

    /// Rank over GF(p).
    pub fn rank(&self) -> usize {
        if self.nrows == 0 || self.ncols == 0 {
            return 0;
        }
        // eliminate along the orientation with fewer columns
        if self.ncols <= self.nrows {
            streamed_rank(self.p, self.nrows, self.ncols, |r, buf| buf.copy_from_slice(self.row(r)))
        } else {
            streamed_rank(self.p, self.ncols, self.nrows, |c, buf| {
                for (i, x) in buf.iter_mut().enumerate() {
                    *x = self.get(i, c);
                }
            })
        }
    }

    /// Reduced row echelon form (pivot = first nonzero column of each row).
    pub fn rref(&self) -> Rref {
        let mut ech = Echelon::new(self.p, self.ncols);
        if self.nrows > 0 && self.ncols > 0 {
            ech.absorb(&self.to_f64_rows(), self.nrows);
        }
        let (pivots, rows) = ech.into_rref();
        let rows = if rows.is_empty() {
            FieldMatrix::zeros(self.p, 0, self.ncols)
        } else {
            FieldMatrix::from_rows(self.p, &rows).expect("rref rows are well formed")
        };
        Rref { pivots, rows }
    }

    /// Columns form a basis of the kernel, one column per non-pivot column of
    /// the reduced row echelon form (1 in that position, ascending order).
    pub fn kernel_basis(&self) -> FieldMatrix {
        let Rref { pivots, rows } = self.rref();
        let mut is_pivot = vec![false; self.ncols];
        for &c in &pivots {
            is_pivot[c] = true;
        }
        let free: Vec<usize> = (0..self.ncols).filter(|&c| !is_pivot[c]).collect();
        let mut k = FieldMatrix::zeros(self.p, self.ncols, free.len());
        for (j, &f) in free.iter().enumerate() {
            k.set(f, j, 1);
            for (i, &c) in pivots.iter().enumerate() {
                k.set(c, j, neg_mod(rows.get(i, f), self.p));
            }
        }
        k
    }

    /// Basis of the row space as the nonzero rows of the reduced echelon form.
    pub fn row_basis(&self) -> FieldMatrix {
        self.rref().rows
    }

    /// Basis of the column space: the pivot columns of the matrix itself.
    pub fn column_basis(&self) -> FieldMatrix {
        self.select_columns(&self.rref().pivots)
    }

    /// Whether the two row spaces coincide.
    pub fn row_space_equal(&self, other: &FieldMatrix) -> Result<bool> {
        self.same_field(other)?;
        if self.ncols != other.ncols {
            return Err(Error::Dimension(format!(
                "row spaces in dimensions {} and {}",
                self.ncols, other.ncols
            )));
        }
        let ra = self.rank();
        let rb = other.rank();
        if ra != rb {
            return Ok(false);
        }
        Ok(FieldMatrix::vstack(&[self, other])?.rank() == ra)
    }

    /// Solves `self * x = b` for one solution, `None` when inconsistent.
    pub fn solve(&self, b: &[u32]) -> Result<Option<Vec<u32>>> {
        if b.len() != self.nrows {
            return Err(Error::Dimension("right-hand side length".into()));
        }
        let bcol = FieldMatrix::from_vec(self.p, self.nrows, 1, b.to_vec())?;
        let aug = FieldMatrix::hstack(&[self, &bcol])?;
        let Rref { pivots, rows } = aug.rref();
        if pivots.last() == Some(&self.ncols) {
            return Ok(None);
        }
        let mut x = vec![0u32; self.ncols];
        for (i, &c) in pivots.iter().enumerate() {
            x[c] = rows.get(i, self.ncols);
        }
        Ok(Some(x))
    }

    /// Inverse of a square matrix, `None` when singular.
    pub fn inverse(&self) -> Option<FieldMatrix> {
        if self.nrows != self.ncols {
            return None;
        }
        let n = self.nrows;
        if n == 0 {
            return Some(self.clone());
        }
        let aug = FieldMatrix::hstack(&[self, &FieldMatrix::identity(self.p, n)]).ok()?;
        let Rref { pivots, rows } = aug.rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return None;
        }
        Some(FieldMatrix::from_fn(self.p, n, n, |i, j| rows.get(i, n + j)))
    }

    /// Determinant by elimination.
    pub fn determinant(&self) -> Option<u32> {
        if self.nrows != self.ncols {
            return None;
        }
        let n = self.nrows;
        let p = self.p;
        let mut m = self.data.clone();
        let mut det = 1 % p;
        for c in 0..n {
            let Some(pr) = (c..n).find(|&r| m[r * n + c] != 0) else {
                return Some(0);
            };
            if pr != c {
                for j in 0..n {
                    m.swap(c * n + j, pr * n + j);
                }
                det = neg_mod(det, p);
            }
            let piv = m[c * n + c];
            det = mul_mod(det, piv, p);
            let inv = inv_mod(piv, p).unwrap();
            for r in c + 1..n {
                let f = mul_mod(m[r * n + c], inv, p);
                if f == 0 {
                    continue;
                }
                for j in c..n {
                    m[r * n + j] = sub_mod(m[r * n + j], mul_mod(f, m[c * n + j], p), p);
                }
            }
        }
        Some(det)
    }

    /// Kronecker product `self ⊗ other` (row index `i * other.nrows + k`).
    pub fn kron(&self, other: &FieldMatrix) -> Result<FieldMatrix> {
        self.same_field(other)?;
        let (r1, c1) = self.shape();
        let (r2, c2) = other.shape();
        Ok(FieldMatrix::from_fn(self.p, r1 * r2, c1 * c2, |i, j| {
            mul_mod(self.get(i / r2, j / c2), other.get(i % r2, j % c2), self.p)
        }))
    }
}

impl fmt::Debug for FieldMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "FieldMatrix {}x{} over GF({})", self.nrows, self.ncols, self.p)?;
        for row in self.rows() {
            writeln!(f, "  {row:?}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(p: u32, rows: &[&[i64]]) -> FieldMatrix {
        FieldMatrix::from_i64_rows(p, &rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>()).unwrap()
    }

    /// Cofactor expansion over the integers, independent of elimination.
    fn cofactor_det(a: &[Vec<i64>]) -> i64 {
        let n = a.len();
        if n == 1 {
            return a[0][0];
        }
        (0..n)
            .map(|j| {
                let minor: Vec<Vec<i64>> = a[1..]
                    .iter()
                    .map(|row| row.iter().enumerate().filter(|&(c, _)| c != j).map(|(_, &x)| x).collect())
                    .collect();
                let sign = if j % 2 == 0 { 1 } else { -1 };
                sign * a[0][j] * cofactor_det(&minor)
            })
            .sum()
    }

    #[test]
    fn rank_examples() {
        assert_eq!(FieldMatrix::identity(7, 3).rank(), 3);
        assert_eq!(FieldMatrix::zeros(101, 4, 5).rank(), 0);
        assert_eq!(FieldMatrix::zeros(101, 0, 5).rank(), 0);
        let nodes = [1i64, 2, 3, 4];
        let vander: Vec<Vec<i64>> = nodes.iter().map(|&x| (0..4).map(|k| x.pow(k)).collect()).collect();
        // 1! 2! 3! = 12, nonzero mod 7
        assert_eq!(cofactor_det(&vander), 12);
        let v = FieldMatrix::from_i64_rows(7, &vander).unwrap();
        assert_eq!(v.rank(), 4);
        assert_eq!(v.determinant(), Some(12 % 7));
    }

    #[test]
    fn kernel_examples() {
        assert_eq!(FieldMatrix::identity(5, 4).kernel_basis().ncols(), 0);
        let k = m(5, &[&[1, 1]]).kernel_basis();
        assert_eq!(k.shape(), (2, 1));
        assert_eq!(k.column(0), vec![4, 1]);
        // four distinct points of P^1
        let pts = m(32003, &[&[1, 0, 1, 1], &[0, 1, 1, 2]]);
        let k = pts.kernel_basis();
        assert_eq!(k.shape(), (4, 2));
        assert!(pts.mul(&k).unwrap().is_zero());
        assert_eq!(k.rank(), 2);
    }

    #[test]
    fn row_space_examples() {
        let a = m(7, &[&[1, 2, 3], &[0, 1, 4]]);
        assert!(a.row_space_equal(&a).unwrap());
        let b = m(7, &[&[0, 3, 12], &[2, 4, 6]]);
        assert!(a.row_space_equal(&b).unwrap());
        let rank1 = m(7, &[&[1, 2, 3], &[2, 4, 6]]);
        assert!(!rank1.row_space_equal(&a).unwrap());
        let wide = FieldMatrix::zeros(7, 1, 4);
        assert!(matches!(a.row_space_equal(&wide), Err(Error::Dimension(_))));
    }

    #[test]
    fn rref_is_canonical() {
        let a = m(7, &[&[0, 2, 4, 1], &[1, 1, 0, 0], &[1, 3, 4, 2]]);
        let r = a.rref();
        assert_eq!(r.pivots, vec![0, 1, 3]);
        assert_eq!(r.rows.row(0), &[1, 0, 5, 0]);
        assert_eq!(r.rows.row(1), &[0, 1, 2, 0]);
        assert_eq!(r.rows.row(2), &[0, 0, 0, 1]);
    }

    #[test]
    fn solve_inverse_kron() {
        let a = m(7, &[&[2, 1], &[1, 1]]);
        let inv = a.inverse().unwrap();
        assert_eq!(a.mul(&inv).unwrap(), FieldMatrix::identity(7, 2));
        assert_eq!(a.solve(&[3, 2]).unwrap(), Some(vec![1, 1]));
        let sing = m(7, &[&[1, 1], &[2, 2]]);
        assert!(sing.inverse().is_none());
        assert_eq!(sing.solve(&[1, 0]).unwrap(), None);
        let k = a.kron(&FieldMatrix::identity(7, 2)).unwrap();
        assert_eq!(k.shape(), (4, 4));
        assert_eq!(k.get(0, 2), 1);
        assert_eq!(k.get(2, 0), 1);
    }
}
