//! Blocked row reduction over GF(p).
//!
//! Rows are streamed in blocks. Each block is first reduced against the
//! current reduced basis with one dense product, then echelonized
//! recursively, then merged back so that the basis stays in reduced row
//! echelon form. Residues are held in `f64`: every product of two residues is
//! below 2^30 for the default prime, so long inner products stay exact and the
//! heavy lifting runs through `matrixmultiply::dgemm`. Inner dimensions are
//! split whenever the accumulated sum could leave the exact range.
//!
//! The reduced basis is stored only on the non-pivot columns; pivot columns of
//! a reduced row echelon form are unit vectors.

use super::scalar::inv_mod;

const TOP_BLOCK: usize = 384;
const BRANCH: usize = 8;
/// 2^53: integers below this are exact in `f64`.
const EXACT: f64 = 9_007_199_254_740_992.0;
const ROUNDER: f64 = 6_755_399_441_055_744.0; // 1.5 * 2^52

#[derive(Clone, Copy, Debug)]
struct Modulus {
    p: u32,
    pf: f64,
    pinv: f64,
    /// how many products of two residues may be summed exactly
    max_terms: usize,
}

impl Modulus {
    fn new(p: u32) -> Self {
        let pm1 = (p as f64 - 1.0).max(1.0);
        let max_terms = (((EXACT - 2.0 * p as f64) / (pm1 * pm1)).floor() as usize).max(1);
        Modulus {
            p,
            pf: p as f64,
            pinv: 1.0 / p as f64,
            max_terms,
        }
    }

    #[inline(always)]
    fn reduce(&self, x: f64) -> f64 {
        // round-to-nearest quotient via the 1.5*2^52 trick, then one correction
        let q = (x * self.pinv + ROUNDER) - ROUNDER;
        let mut r = x - q * self.pf;
        if r < 0.0 {
            r += self.pf;
        }
        if r >= self.pf {
            r -= self.pf;
        }
        r
    }

    fn reduce_all(&self, xs: &mut [f64]) {
        for x in xs.iter_mut() {
            *x = self.reduce(*x);
        }
    }
}

/// `c <- c - a * b` modulo p, all row-major, `a: m x k`, `b: k x n`, `c: m x n`.
/// Entries of `a`, `b`, `c` are reduced residues on input; `c` is reduced on output.
fn sub_product(md: &Modulus, m: usize, k: usize, n: usize, a: &[f64], b: &[f64], c: &mut [f64]) {
    if m == 0 || n == 0 {
        return;
    }
    if k == 0 {
        return;
    }
    let mut start = 0;
    while start < k {
        let len = (k - start).min(md.max_terms);
        // SAFETY: slices are sized m*k, k*n, m*n with the strides given.
        unsafe {
            matrixmultiply::dgemm(
                m,
                len,
                n,
                -1.0,
                a.as_ptr().add(start),
                k as isize,
                1,
                b.as_ptr().add(start * n),
                n as isize,
                1,
                1.0,
                c.as_mut_ptr(),
                n as isize,
                1,
            );
        }
        md.reduce_all(c);
        start += len;
    }
}

/// Incremental reduced row echelon form of a stream of rows.
#[derive(Clone, Debug)]
pub(crate) struct Echelon {
    md: Modulus,
    ncols: usize,
    block: usize,
    /// pivot column of each basis row, in insertion order
    pivots: Vec<usize>,
    /// non-pivot columns, ascending
    free: Vec<usize>,
    /// basis rows restricted to `free`, `pivots.len() x free.len()`
    basis: Vec<f64>,
}

impl Echelon {
    pub(crate) fn new(p: u32, ncols: usize) -> Self {
        Self::with_block(p, ncols, TOP_BLOCK)
    }

    fn with_block(p: u32, ncols: usize, block: usize) -> Self {
        Echelon {
            md: Modulus::new(p),
            ncols,
            block: block.max(1),
            pivots: Vec::new(),
            free: (0..ncols).collect(),
            basis: Vec::new(),
        }
    }

    pub(crate) fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub(crate) fn is_full(&self) -> bool {
        self.free.is_empty()
    }

    /// Absorbs `nrows` full-width rows of reduced residues stored row-major.
    pub(crate) fn absorb(&mut self, rows: &[f64], nrows: usize) {
        debug_assert_eq!(rows.len(), nrows * self.ncols);
        let n = self.ncols;
        for chunk in rows.chunks(self.block * n) {
            if self.is_full() {
                return;
            }
            self.absorb_block(chunk, chunk.len() / n);
        }
    }

    fn absorb_block(&mut self, rows: &[f64], nrows: usize) {
        let n = self.ncols;
        let k = self.pivots.len();
        let f = self.free.len();
        // split the block into pivot and free coordinates
        let mut cp = vec![0.0; nrows * k];
        let mut cf = vec![0.0; nrows * f];
        for r in 0..nrows {
            let row = &rows[r * n..(r + 1) * n];
            for (j, &c) in self.pivots.iter().enumerate() {
                cp[r * k + j] = row[c];
            }
            for (j, &c) in self.free.iter().enumerate() {
                cf[r * f + j] = row[c];
            }
        }
        sub_product(&self.md, nrows, k, f, &cp, &self.basis, &mut cf);
        drop(cp);

        // echelonize the residual block on the free columns
        let (local_pivots, new_rows) = if nrows == 1 {
            match cf.iter().position(|&x| x != 0.0) {
                None => return,
                Some(lead) => {
                    let inv = inv_mod(cf[lead] as u32, self.md.p).unwrap() as f64;
                    for x in cf.iter_mut() {
                        *x = self.md.reduce(*x * inv);
                    }
                    (vec![lead], cf)
                }
            }
        } else {
            let mut sub = Echelon::with_block(self.md.p, f, (self.block / BRANCH).max(1));
            sub.absorb(&cf, nrows);
            drop(cf);
            sub.into_rows()
        };
        if local_pivots.is_empty() {
            return;
        }
        self.merge(&local_pivots, new_rows);
    }

    /// Merges rows in reduced form with respect to `local_pivots`, which index
    /// into `self.free`. `new_rows` is `local_pivots.len() x free.len()`.
    fn merge(&mut self, local_pivots: &[usize], new_rows: Vec<f64>) {
        let k = self.pivots.len();
        let f = self.free.len();
        let b = local_pivots.len();
        if k > 0 {
            // clear the new pivot columns from the existing basis
            let mut coef = vec![0.0; k * b];
            for i in 0..k {
                for (j, &q) in local_pivots.iter().enumerate() {
                    coef[i * b + j] = self.basis[i * f + q];
                }
            }
            sub_product(&self.md, k, b, f, &coef, &new_rows, &mut self.basis);
        }
        let mut is_new_pivot = vec![false; f];
        for &q in local_pivots {
            is_new_pivot[q] = true;
        }
        let keep: Vec<usize> = (0..f).filter(|&j| !is_new_pivot[j]).collect();
        let f2 = keep.len();
        let mut basis = Vec::with_capacity((k + b) * f2);
        for i in 0..k {
            let row = &self.basis[i * f..(i + 1) * f];
            basis.extend(keep.iter().map(|&j| row[j]));
        }
        for i in 0..b {
            let row = &new_rows[i * f..(i + 1) * f];
            basis.extend(keep.iter().map(|&j| row[j]));
        }
        self.pivots.extend(local_pivots.iter().map(|&q| self.free[q]));
        self.free = keep.iter().map(|&j| self.free[j]).collect();
        self.basis = basis;
    }

    /// Full-width basis rows and their pivot columns, in insertion order.
    fn into_rows(self) -> (Vec<usize>, Vec<f64>) {
        let n = self.ncols;
        let f = self.free.len();
        let k = self.pivots.len();
        let mut rows = vec![0.0; k * n];
        for i in 0..k {
            rows[i * n + self.pivots[i]] = 1.0;
            for (j, &c) in self.free.iter().enumerate() {
                rows[i * n + c] = self.basis[i * f + j];
            }
        }
        (self.pivots, rows)
    }

    /// Reduced row echelon form: pivot columns ascending and the rows as residues.
    pub(crate) fn into_rref(self) -> (Vec<usize>, Vec<Vec<u32>>) {
        let (pivots, rows) = self.into_rows();
        let n = if pivots.is_empty() { 0 } else { rows.len() / pivots.len() };
        let mut order: Vec<usize> = (0..pivots.len()).collect();
        order.sort_by_key(|&i| pivots[i]);
        let sorted_pivots = order.iter().map(|&i| pivots[i]).collect();
        let sorted_rows = order
            .iter()
            .map(|&i| rows[i * n..(i + 1) * n].iter().map(|&x| x as u32).collect())
            .collect();
        (sorted_pivots, sorted_rows)
    }
}

/// Rank of a row stream. `fill(r, buf)` writes row `r` as residues into `buf`
/// (length `ncols`, pre-zeroed).
pub fn streamed_rank<F>(p: u32, nrows: usize, ncols: usize, mut fill: F) -> usize
where
    F: FnMut(usize, &mut [u32]),
{
    if nrows == 0 || ncols == 0 {
        return 0;
    }
    let mut ech = Echelon::new(p, ncols);
    let mut buf = vec![0u32; ncols];
    let mut r = 0;
    while r < nrows && !ech.is_full() {
        let take = (nrows - r).min(TOP_BLOCK);
        let mut block = vec![0.0f64; take * ncols];
        for i in 0..take {
            buf.iter_mut().for_each(|x| *x = 0);
            fill(r + i, &mut buf);
            for (dst, &src) in block[i * ncols..(i + 1) * ncols].iter_mut().zip(&buf) {
                *dst = src as f64;
            }
        }
        ech.absorb(&block, take);
        r += take;
    }
    ech.rank()
}
