//! Exterior modules and linear free complexes.
//!
//! Grading conventions:
//! - An [`ExteriorModule`] `P` over `E = ∧V*` has the generators `e_k` acting
//!   with degree -1, `act(k, d): P_d -> P_(d-1)`.
//! - `L(P)` has `F_i = S ⊗ P_i` and `φ_i = Σ_k x_k ⊗ C_k[i]` with `C_k[i] = act(k, i)`.
//! - The dual module has `(P*)_i = (P_(-i))*` and `e_k` acting by the
//!   transposed matrices, with no extra signs.
//!
//! `F(μ)` has `F_l = ∧^(l+1)W ⊗ D_l U` with basis `(T, a)` indexed
//! `T_index * dim D_l U + a_index`; the dual module `Q` uses the dual bases.

use std::collections::HashMap;
use std::fmt;

use itertools::Itertools;

use crate::error::{Error, Result};
use crate::exactfield::{add_mod, mul_mod, neg_mod, sub_mod, FieldMatrix, Rref, SeededRng};
use crate::multilinear::{binomial, divided_diagonal, wedge_diagonal, SymBasis, WedgeBasis};
use crate::points::{PairingTensor, Subspace};

/// A finite graded module over the exterior algebra on `ngens` generators,
/// nonzero only on the degrees `dmin..=dmax`.
#[derive(Clone, PartialEq, Eq)]
pub struct ExteriorModule {
    p: u32,
    ngens: usize,
    dmin: i64,
    dims: Vec<usize>,
    // act[k][idx] is e_k out of degree dmin + 1 + idx
    act: Vec<Vec<FieldMatrix>>,
}

impl ExteriorModule {
    /// `act[k][idx]` is `e_k: P_(dmin+1+idx) -> P_(dmin+idx)`.
    pub fn new(p: u32, ngens: usize, dmin: i64, dims: Vec<usize>, act: Vec<Vec<FieldMatrix>>) -> Result<Self> {
        if dims.is_empty() {
            return Err(Error::Dimension("module needs at least one degree".into()));
        }
        if act.len() != ngens {
            return Err(Error::Dimension(format!("{} action lists for {ngens} generators", act.len())));
        }
        for acts in &act {
            if acts.len() != dims.len() - 1 {
                return Err(Error::Dimension("one action per consecutive pair of degrees".into()));
            }
            for (idx, a) in acts.iter().enumerate() {
                if a.shape() != (dims[idx], dims[idx + 1]) || a.modulus() != p {
                    return Err(Error::Dimension(format!(
                        "action out of degree {} has shape {:?}, expected {}x{}",
                        dmin + 1 + idx as i64,
                        a.shape(),
                        dims[idx],
                        dims[idx + 1]
                    )));
                }
            }
        }
        Ok(ExteriorModule {
            p,
            ngens,
            dmin,
            dims,
            act,
        })
    }

    pub fn modulus(&self) -> u32 {
        self.p
    }

    pub fn ngens(&self) -> usize {
        self.ngens
    }

    /// `(dmin, dmax)`.
    pub fn window(&self) -> (i64, i64) {
        (self.dmin, self.dmin + self.dims.len() as i64 - 1)
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn dim(&self, d: i64) -> usize {
        let (lo, hi) = self.window();
        if d < lo || d > hi {
            0
        } else {
            self.dims[(d - lo) as usize]
        }
    }

    /// `e_k: P_d -> P_(d-1)`, zero-sized outside the window.
    pub fn action(&self, k: usize, d: i64) -> FieldMatrix {
        let (lo, hi) = self.window();
        if d <= lo || d > hi {
            return FieldMatrix::zeros(self.p, self.dim(d - 1), self.dim(d));
        }
        self.act[k][(d - lo - 1) as usize].clone()
    }

    /// Checks `e_k^2 = 0` and `e_j e_k + e_k e_j = 0`.
    pub fn validate(&self) -> Result<()> {
        let (lo, hi) = self.window();
        for d in lo + 2..=hi {
            for j in 0..self.ngens {
                for k in j..self.ngens {
                    let jk = self.action(j, d - 1).mul(&self.action(k, d))?;
                    let kj = self.action(k, d - 1).mul(&self.action(j, d))?;
                    if !jk.add(&kj)?.is_zero() {
                        return Err(Error::Consistency(format!(
                            "e_{j} e_{k} + e_{k} e_{j} is nonzero out of degree {d}"
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// `(P*)_i = (P_(-i))*` with transposed actions.
    pub fn dual(&self) -> ExteriorModule {
        let (lo, hi) = self.window();
        let dims: Vec<usize> = self.dims.iter().rev().copied().collect();
        // e_k on (P*)_i is the transpose of e_k: P_(1-i) -> P_(-i)
        let act = (0..self.ngens)
            .map(|k| ((-hi + 1)..=(-lo)).map(|i| self.action(k, 1 - i).transpose()).collect())
            .collect();
        ExteriorModule::new(self.p, self.ngens, -hi, dims, act).expect("dual of a valid module")
    }

    /// `E` itself with `P_d = ∧^(top-d)`, `e_k` acting by left multiplication.
    pub fn free(p: u32, ngens: usize, top: i64) -> ExteriorModule {
        let dims: Vec<usize> = (0..=ngens).rev().map(|k| binomial(ngens, k)).collect();
        let act = (0..ngens)
            .map(|k| {
                // degree d = top - ngens + 1 + idx holds ∧^(ngens - 1 - idx)
                (0..ngens)
                    .map(|idx| {
                        let deg = ngens - 1 - idx;
                        let src = WedgeBasis::new(ngens, deg);
                        let dst = WedgeBasis::new(ngens, deg + 1);
                        let mut m = FieldMatrix::zeros(p, dst.len(), src.len());
                        for (si, s) in src.subsets().iter().enumerate() {
                            if s.contains(&k) {
                                continue;
                            }
                            let pos = s.iter().filter(|&&x| x < k).count();
                            let mut t = s.clone();
                            t.insert(pos, k);
                            let v = if pos % 2 == 1 { neg_mod(1, p) } else { 1 };
                            m.set(dst.index_of(&t).unwrap(), si, v);
                        }
                        m
                    })
                    .collect()
            })
            .collect();
        ExteriorModule::new(p, ngens, top - ngens as i64, dims, act).expect("free module")
    }

    /// Degrees `lo..=hi` only, which is a subquotient.
    pub fn restrict_window(&self, lo: i64, hi: i64) -> Result<ExteriorModule> {
        if hi < lo {
            return Err(Error::Window(format!("empty window [{lo}, {hi}]")));
        }
        let dims = (lo..=hi).map(|d| self.dim(d)).collect();
        let act = (0..self.ngens)
            .map(|k| (lo + 1..=hi).map(|d| self.action(k, d)).collect())
            .collect();
        ExteriorModule::new(self.p, self.ngens, lo, dims, act)
    }

    /// Direct sum with another module on the same generators.
    pub fn direct_sum(&self, other: &ExteriorModule) -> Result<ExteriorModule> {
        if self.ngens != other.ngens || self.p != other.p {
            return Err(Error::Dimension("direct sum needs matching generators".into()));
        }
        let lo = self.window().0.min(other.window().0);
        let hi = self.window().1.max(other.window().1);
        let dims = (lo..=hi).map(|d| self.dim(d) + other.dim(d)).collect();
        let act = (0..self.ngens)
            .map(|k| {
                (lo + 1..=hi)
                    .map(|d| block_diag(&self.action(k, d), &other.action(k, d)))
                    .collect()
            })
            .collect();
        ExteriorModule::new(self.p, self.ngens, lo, dims, act)
    }

    /// Column bases of the submodule generated by `gens` (degree, vector).
    pub fn generated_submodule(&self, gens: &[(i64, Vec<u32>)]) -> Result<Vec<FieldMatrix>> {
        let (lo, hi) = self.window();
        let mut bases: Vec<FieldMatrix> = vec![FieldMatrix::zeros(self.p, 0, 0); self.dims.len()];
        for d in (lo..=hi).rev() {
            let n = self.dim(d);
            let mut cols: Vec<Vec<u32>> = gens.iter().filter(|g| g.0 == d).map(|g| g.1.clone()).collect();
            if cols.iter().any(|c| c.len() != n) {
                return Err(Error::Dimension(format!("generator of degree {d} must have length {n}")));
            }
            if d < hi {
                let above = &bases[(d + 1 - lo) as usize];
                for k in 0..self.ngens {
                    let img = self.action(k, d + 1).mul(above)?;
                    cols.extend((0..img.ncols()).map(|j| img.column(j)));
                }
            }
            let m = FieldMatrix::from_fn(self.p, cols.len(), n, |i, j| cols[i][j]);
            bases[(d - lo) as usize] = m.row_basis().transpose();
        }
        Ok(bases)
    }

    /// The submodule with the given column bases (closed under the action).
    pub fn submodule(&self, bases: &[FieldMatrix]) -> Result<ExteriorModule> {
        let (lo, hi) = self.window();
        let spaces: Vec<Subspace> = bases.iter().map(|b| Subspace::new(b.clone())).collect::<Result<_>>()?;
        let dims = spaces.iter().map(|s| s.dim()).collect();
        let mut act = vec![Vec::new(); self.ngens];
        for d in lo + 1..=hi {
            let idx = (d - lo) as usize;
            for (k, acts) in act.iter_mut().enumerate() {
                let img = self.action(k, d).mul(spaces[idx].basis())?;
                acts.push(
                    spaces[idx - 1]
                        .coordinates_of_columns(&img)
                        .ok_or_else(|| Error::Input("subspaces are not closed under the action".into()))?,
                );
            }
        }
        ExteriorModule::new(self.p, self.ngens, lo, dims, act)
    }

    /// The quotient by a submodule given by column bases.
    pub fn quotient(&self, bases: &[FieldMatrix]) -> Result<ExteriorModule> {
        let (lo, hi) = self.window();
        // functionals vanishing on the submodule, in reduced form
        let ann: Vec<Rref> = bases
            .iter()
            .zip(&self.dims)
            .map(|(b, &n)| {
                if b.ncols() == 0 {
                    FieldMatrix::identity(self.p, n).rref()
                } else {
                    b.transpose().kernel_basis().transpose().rref()
                }
            })
            .collect();
        let dims = ann.iter().map(|a| a.pivots.len()).collect();
        let mut act = vec![Vec::new(); self.ngens];
        for d in lo + 1..=hi {
            let idx = (d - lo) as usize;
            for (k, acts) in act.iter_mut().enumerate() {
                acts.push(induced_action(&ann[idx - 1].rows, &self.action(k, d), &ann[idx])?);
            }
        }
        ExteriorModule::new(self.p, self.ngens, lo, dims, act)
    }
}

impl fmt::Debug for ExteriorModule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "ExteriorModule(gens={}, window={:?}, dims={:?})",
            self.ngens,
            self.window(),
            self.dims
        )
    }
}

fn block_diag(a: &FieldMatrix, b: &FieldMatrix) -> FieldMatrix {
    let p = a.modulus();
    let mut m = FieldMatrix::zeros(p, a.nrows() + b.nrows(), a.ncols() + b.ncols());
    for i in 0..a.nrows() {
        for j in 0..a.ncols() {
            m.set(i, j, a.get(i, j));
        }
    }
    for i in 0..b.nrows() {
        for j in 0..b.ncols() {
            m.set(a.nrows() + i, a.ncols() + j, b.get(i, j));
        }
    }
    m
}

/// `X` with `X * dst_rref = lower * action`, where the rows of `dst_rref` are
/// in reduced echelon form and span the functionals defining the quotient.
fn induced_action(lower: &FieldMatrix, action: &FieldMatrix, dst: &Rref) -> Result<FieldMatrix> {
    let target = lower.mul(action)?;
    let x = target.select_columns(&dst.pivots);
    if x.mul(&dst.rows)? != target {
        return Err(Error::Consistency("functionals do not descend to the quotient".into()));
    }
    Ok(x)
}

/// A linear free complex `F_0 <- F_1 <- ...` over `k[x_0..x_(nvars-1)]`
/// with `F_i` generated in degree `twist + i`.
#[derive(Clone, PartialEq, Eq)]
pub struct LinearComplex {
    p: u32,
    nvars: usize,
    twist: i64,
    ranks: Vec<usize>,
    // coeffs[i - 1][k] = C_k[i]: F_i -> F_(i-1)
    coeffs: Vec<Vec<FieldMatrix>>,
}

impl LinearComplex {
    pub fn new(p: u32, nvars: usize, twist: i64, ranks: Vec<usize>, coeffs: Vec<Vec<FieldMatrix>>) -> Result<Self> {
        if ranks.is_empty() || coeffs.len() + 1 != ranks.len() {
            return Err(Error::Dimension("one coefficient list per differential".into()));
        }
        for (i, cs) in coeffs.iter().enumerate() {
            if cs.len() != nvars {
                return Err(Error::Dimension(format!("differential {} needs {nvars} matrices", i + 1)));
            }
            if cs.iter().any(|c| c.shape() != (ranks[i], ranks[i + 1]) || c.modulus() != p) {
                return Err(Error::Dimension(format!(
                    "differential {} must be {}x{}",
                    i + 1,
                    ranks[i],
                    ranks[i + 1]
                )));
            }
        }
        Ok(LinearComplex {
            p,
            nvars,
            twist,
            ranks,
            coeffs,
        })
    }

    pub fn modulus(&self) -> u32 {
        self.p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn twist(&self) -> i64 {
        self.twist
    }

    pub fn ranks(&self) -> &[usize] {
        &self.ranks
    }

    /// Index of the last term.
    pub fn length(&self) -> usize {
        self.ranks.len() - 1
    }

    /// `C_k[i]` for `1 <= i <= length`.
    pub fn coefficient(&self, k: usize, i: usize) -> &FieldMatrix {
        &self.coeffs[i - 1][k]
    }

    /// Ranks with trailing zero terms removed.
    pub fn trimmed_ranks(&self) -> Vec<usize> {
        let mut r = self.ranks.clone();
        while r.len() > 1 && *r.last().unwrap() == 0 {
            r.pop();
        }
        r
    }

    /// `[C_0[i]; ...; C_n[i]]`, the map from generators of `F_i` to linear
    /// forms times generators of `F_(i-1)`.
    pub fn stacked(&self, i: usize) -> FieldMatrix {
        let blocks: Vec<&FieldMatrix> = self.coeffs[i - 1].iter().collect();
        FieldMatrix::vstack(&blocks).expect("equal widths")
    }

    /// `φ_i φ_(i+1) = 0` as identities between coefficient matrices.
    pub fn validate(&self) -> Result<()> {
        for i in 1..self.length() {
            for j in 0..self.nvars {
                for k in j..self.nvars {
                    let a = self.coefficient(j, i).mul(self.coefficient(k, i + 1))?;
                    let b = self.coefficient(k, i).mul(self.coefficient(j, i + 1))?;
                    let sum = if j == k { a } else { a.add(&b)? };
                    if !sum.is_zero() {
                        return Err(Error::Consistency(format!("d^2 != 0 at position {i} for x_{j} x_{k}")));
                    }
                }
            }
        }
        Ok(())
    }

    /// The exterior module `P` with `L(P) = self`.
    pub fn to_module(&self) -> ExteriorModule {
        let act = (0..self.nvars)
            .map(|k| (1..=self.length()).map(|i| self.coefficient(k, i).clone()).collect())
            .collect();
        ExteriorModule::new(self.p, self.nvars, self.twist, self.ranks.clone(), act).expect("shapes match")
    }
}

impl fmt::Debug for LinearComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LinearComplex(nvars={}, twist={}, ranks={:?})", self.nvars, self.twist, self.ranks)
    }
}

/// `L(P)`: `F_i = S ⊗ P_i`, `1 ⊗ p -> Σ x_k ⊗ e_k p`.
pub fn linear_complex(module: &ExteriorModule) -> LinearComplex {
    let (lo, hi) = module.window();
    let coeffs = (lo + 1..=hi)
        .map(|d| (0..module.ngens).map(|k| module.action(k, d)).collect())
        .collect();
    LinearComplex::new(module.p, module.ngens, lo, module.dims.clone(), coeffs).expect("shapes match")
}

/// Every `F_i -> F_(i-1)` with `i >= 1` is injective on generators modulo
/// the square of the maximal ideal.
pub fn is_irredundant(f: &LinearComplex) -> bool {
    (1..=f.length()).all(|i| f.ranks[i] == 0 || f.stacked(i).rank() == f.ranks[i])
}

/// Whether the module (or its dual) is spanned by `E` applied to its degree-0 piece.
pub fn is_generated_in_degree_zero(module: &ExteriorModule, dualize: bool) -> bool {
    let m = if dualize { module.dual() } else { module.clone() };
    let (lo, hi) = m.window();
    if (1..=hi).any(|d| m.dim(d) != 0) {
        return false;
    }
    (lo..0).all(|d| {
        let n = m.dim(d);
        if n == 0 {
            return true;
        }
        let images: Vec<FieldMatrix> = (0..m.ngens).map(|k| m.action(k, d + 1)).collect();
        let refs: Vec<&FieldMatrix> = images.iter().collect();
        FieldMatrix::hstack(&refs).map(|h| h.rank() == n).unwrap_or(false)
    })
}

/// Builds the quotient complex from RREF row bases `bases[i]` of the
/// functionals on the generators of `F_i` that survive.
fn quotient_from_bases(f: &LinearComplex, bases: &[Rref]) -> Result<LinearComplex> {
    let ranks = bases.iter().map(|b| b.pivots.len()).collect();
    let mut coeffs = Vec::with_capacity(f.length());
    for i in 1..=f.length() {
        let cs = (0..f.nvars)
            .map(|k| induced_action(&bases[i - 1].rows, f.coefficient(k, i), &bases[i]))
            .collect::<Result<_>>()?;
        coeffs.push(cs);
    }
    LinearComplex::new(f.p, f.nvars, f.twist, ranks, coeffs)
}

/// `F' = L(Q*)` with `Q ⊂ P*` the submodule generated by `P_0*`.
pub fn max_irredundant_quotient_generation(f: &LinearComplex) -> Result<LinearComplex> {
    let mut bases = vec![FieldMatrix::identity(f.p, f.ranks[0]).rref()];
    for i in 1..=f.length() {
        let prev = &bases[i - 1].rows;
        let blocks: Vec<FieldMatrix> = (0..f.nvars)
            .map(|k| prev.mul(f.coefficient(k, i)))
            .collect::<Result<_>>()?;
        let refs: Vec<&FieldMatrix> = blocks.iter().collect();
        let stack = if refs.is_empty() {
            FieldMatrix::zeros(f.p, 0, f.ranks[i])
        } else {
            FieldMatrix::vstack(&refs)?
        };
        bases.push(stack.rref());
    }
    quotient_from_bases(f, &bases)
}

/// `F' = L(P/N)` with `N_i` the elements of `P_i` killed by every product
/// of `i` generators of `E`.
pub fn max_irredundant_quotient_annihilator(f: &LinearComplex) -> Result<LinearComplex> {
    let mut bases = vec![FieldMatrix::identity(f.p, f.ranks[0]).rref()];
    for i in 1..=f.length() {
        let mut rows: Vec<FieldMatrix> = Vec::new();
        for seq in (0..f.nvars).combinations(i) {
            // e_(k_1) ... e_(k_i): P_i -> P_0
            let mut prod = f.coefficient(seq[0], 1).clone();
            for (pos, &k) in seq.iter().enumerate().skip(1) {
                prod = prod.mul(f.coefficient(k, pos + 1))?;
            }
            rows.push(prod);
        }
        let refs: Vec<&FieldMatrix> = rows.iter().collect();
        let stack = if refs.is_empty() {
            FieldMatrix::zeros(f.p, 0, f.ranks[i])
        } else {
            FieldMatrix::vstack(&refs)?
        };
        bases.push(stack.rref());
    }
    quotient_from_bases(f, &bases)
}

fn pairing_complex_ranks(w: usize, u: usize) -> Vec<usize> {
    (0..w).map(|l| binomial(w, l + 1) * binomial(l + u - 1, u - 1)).collect()
}

/// `F(μ)` assembled from the diagonals of the exterior and divided powers
/// followed by contraction against `μ`.
pub fn pairing_complex(mu: &PairingTensor) -> Result<LinearComplex> {
    let p = mu.modulus();
    let (w, u, v) = mu.dims();
    let ranks = pairing_complex_ranks(w, u);
    let mut coeffs = Vec::with_capacity(w - 1);
    for l in 1..w {
        let wd = wedge_diagonal(p, w, l + 1)?;
        let dd = divided_diagonal(p, u, l)?;
        let src_sym = binomial(l + u - 1, u - 1);
        let dst_sym = binomial(l + u - 2, u - 1);
        let mut cs = vec![FieldMatrix::zeros(p, ranks[l - 1], ranks[l]); v];
        for t in 0..wd.ncols() {
            for row in (0..wd.nrows()).filter(|&r| wd.get(r, t) != 0) {
                let (ti, k) = (row / w, row % w);
                let sign = wd.get(row, t);
                for a in 0..dd.ncols() {
                    for drow in (0..dd.nrows()).filter(|&r| dd.get(r, a) != 0) {
                        let (ai, b) = (drow / u, drow % u);
                        let c = mul_mod(sign, dd.get(drow, a), p);
                        let (r, col) = (ti * dst_sym + ai, t * src_sym + a);
                        for (j, cj) in cs.iter_mut().enumerate() {
                            let x = mu.get(k, b, j);
                            if x != 0 {
                                cj.add_at(r, col, mul_mod(c, x, p));
                            }
                        }
                    }
                }
            }
        }
        coeffs.push(cs);
    }
    LinearComplex::new(p, v, 0, ranks, coeffs)
}

/// The module `Q = Σ_l ∧^(l+1)W* ⊗ Sym_l U*` with `Q_(-l)` in degree `-l` and
/// `e_j` acting through `μ*(e_j) = Σ μ_(a,b,j) w*_a ⊗ u*_b`.
pub fn pairing_module(mu: &PairingTensor) -> Result<ExteriorModule> {
    let p = mu.modulus();
    let (w, u, v) = mu.dims();
    let ranks = pairing_complex_ranks(w, u);
    let dims: Vec<usize> = ranks.iter().rev().copied().collect();
    let mut act = vec![Vec::with_capacity(w - 1); v];
    // degree -(w-1)+1+idx = -l, mapping Q_(-l) -> Q_(-l-1)
    for l in (0..w - 1).rev() {
        let src_w = WedgeBasis::new(w, l + 1);
        let dst_w = WedgeBasis::new(w, l + 2);
        let src_s = SymBasis::new(u, l);
        let dst_s = SymBasis::new(u, l + 1);
        let up = src_s.times_variable_table(&dst_s);
        let mut ms = vec![FieldMatrix::zeros(p, ranks[l + 1], ranks[l]); v];
        for (si, s) in src_w.subsets().iter().enumerate() {
            for a in (0..w).filter(|a| !s.contains(a)) {
                let before = s.iter().filter(|&&x| x < a).count();
                let mut t = s.clone();
                t.insert(before, a);
                let ti = dst_w.index_of(&t).unwrap();
                for (mi, shifts) in up.iter().enumerate() {
                    for (b, &mj) in shifts.iter().enumerate() {
                        let (row, col) = (ti * dst_s.len() + mj, si * src_s.len() + mi);
                        for (j, mat) in ms.iter_mut().enumerate() {
                            let x = mu.get(a, b, j);
                            if x != 0 {
                                mat.add_at(row, col, if before % 2 == 1 { neg_mod(x, p) } else { x });
                            }
                        }
                    }
                }
            }
        }
        for (j, m) in ms.into_iter().enumerate() {
            act[j].push(m);
        }
    }
    ExteriorModule::new(p, v, -(w as i64 - 1), dims, act)
}

/// `F(μ) = L(Q*)`.
pub fn pairing_complex_via_module(mu: &PairingTensor) -> Result<LinearComplex> {
    Ok(linear_complex(&pairing_module(mu)?.dual()))
}

/// Multiplication `k[s,t]_dw ⊗ k[s,t]_du -> k[s,t]_(dw+du)` in the bases
/// `s^(d-i) t^i`.
pub fn binary_form_multiplication(p: u32, dw: usize, du: usize) -> Result<PairingTensor> {
    PairingTensor::from_fn(p, dw + 1, du + 1, dw + du + 1, |a, b, k| (a + b == k) as u32)
}

/// `V = W ⊗ U` with `μ` the identity.
pub fn identity_pairing(p: u32, w: usize, u: usize) -> Result<PairingTensor> {
    PairingTensor::from_fn(p, w, u, w * u, |a, b, k| (a * u + b == k) as u32)
}

/// How to look for `a ⊗ b` with `μ(a ⊗ b) = 0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GenericityMode {
    /// Every projective point of `U` over `GF(p^e)`.
    Exhaustive(u32),
    /// Random points of `U` over `GF(p)`; can only refute.
    MonteCarlo { samples: usize, seed: u64 },
}

/// Largest number of projective points enumerated in exhaustive mode.
pub const ENUMERATION_BUDGET: u64 = 2_000_000;

/// `GF(p^e)` as polynomials modulo a monic irreducible of degree `e`.
struct ExtField {
    p: u32,
    e: usize,
    // x^e = -Σ modulus[i] x^i
    modulus: Vec<u32>,
}

impl ExtField {
    fn new(p: u32, e: usize) -> ExtField {
        let modulus = if e == 1 {
            vec![0]
        } else {
            find_irreducible(p, e)
        };
        ExtField { p, e, modulus }
    }

    fn mul(&self, a: &[u32], b: &[u32]) -> Vec<u32> {
        let p = self.p;
        let mut prod = vec![0u32; 2 * self.e - 1];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                prod[i + j] = add_mod(prod[i + j], mul_mod(x, y, p), p);
            }
        }
        for deg in (self.e..prod.len()).rev() {
            let c = prod[deg];
            if c != 0 {
                for (i, &m) in self.modulus.iter().enumerate() {
                    let at = deg - self.e + i;
                    prod[at] = sub_mod(prod[at], mul_mod(c, m, p), p);
                }
            }
        }
        prod.truncate(self.e);
        prod
    }

    fn pow(&self, a: &[u32], mut n: u64) -> Vec<u32> {
        let mut base = a.to_vec();
        let mut acc = self.one();
        while n > 0 {
            if n & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            n >>= 1;
        }
        acc
    }

    fn one(&self) -> Vec<u32> {
        let mut v = vec![0; self.e];
        v[0] = 1;
        v
    }

    fn inv(&self, a: &[u32]) -> Vec<u32> {
        let q = (self.p as u64).pow(self.e as u32);
        self.pow(a, q - 2)
    }

    /// Rank of a matrix given by rows of field elements.
    fn rank(&self, mut rows: Vec<Vec<Vec<u32>>>) -> usize {
        let p = self.p;
        let ncols = rows.first().map_or(0, |r| r.len());
        let mut rank = 0;
        for c in 0..ncols {
            let Some(piv) = (rank..rows.len()).find(|&i| rows[i][c].iter().any(|&x| x != 0)) else {
                continue;
            };
            rows.swap(rank, piv);
            let inv = self.inv(&rows[rank][c]);
            let pivot_row: Vec<Vec<u32>> = rows[rank].iter().map(|x| self.mul(x, &inv)).collect();
            for row in rows.iter_mut().skip(rank + 1) {
                if row[c].iter().all(|&x| x == 0) {
                    continue;
                }
                let f = row[c].clone();
                for (x, y) in row.iter_mut().zip(&pivot_row).skip(c) {
                    let t = self.mul(&f, y);
                    for (xi, ti) in x.iter_mut().zip(t) {
                        *xi = sub_mod(*xi, ti, p);
                    }
                }
            }
            rows[rank] = pivot_row;
            rank += 1;
        }
        rank
    }
}

/// Monic irreducible polynomial of degree `e` over GF(p), lowest coefficients
/// first and the leading 1 omitted; found by trial division.
fn find_irreducible(p: u32, e: usize) -> Vec<u32> {
    let monic = |deg: usize, idx: u64| -> Vec<u32> {
        let mut c = Vec::with_capacity(deg + 1);
        let mut x = idx;
        for _ in 0..deg {
            c.push((x % p as u64) as u32);
            x /= p as u64;
        }
        c.push(1);
        c
    };
    let divides = |d: &[u32], f: &[u32]| -> bool {
        let mut r = f.to_vec();
        let dd = d.len() - 1;
        while r.len() > dd {
            let c = *r.last().unwrap();
            let shift = r.len() - 1 - dd;
            for (i, &x) in d.iter().enumerate() {
                r[shift + i] = sub_mod(r[shift + i], mul_mod(c, x, p), p);
            }
            r.pop();
        }
        r.iter().all(|&x| x == 0)
    };
    let count = |deg: usize| (p as u64).pow(deg as u32);
    for idx in 0..count(e) {
        let f = monic(e, idx);
        let reducible = (1..=e / 2).any(|deg| (0..count(deg)).any(|j| divides(&monic(deg, j), &f)));
        if !reducible {
            return f[..e].to_vec();
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}

/// Whether `μ(a ⊗ b) != 0` for all nonzero `a ∈ W`, `b ∈ U`.
pub fn is_one_generic(mu: &PairingTensor, mode: GenericityMode) -> Result<bool> {
    let p = mu.modulus();
    let (w, u, v) = mu.dims();
    if w > v {
        return Ok(false);
    }
    match mode {
        GenericityMode::MonteCarlo { samples, seed } => {
            let mut rng = SeededRng::new(seed);
            for _ in 0..samples {
                let b: Vec<u32> = (0..u).map(|_| rng.next_residue(p)).collect();
                if b.iter().all(|&x| x == 0) {
                    continue;
                }
                if mu.slice_at(&b).rank() < w {
                    return Ok(false);
                }
            }
            Ok(true)
        }
        GenericityMode::Exhaustive(e) => {
            if e == 0 {
                return Err(Error::Mode("extension degree must be positive".into()));
            }
            let q = (p as u64).checked_pow(e).filter(|&q| q <= u32::MAX as u64);
            let points = q.and_then(|q| {
                let mut total: u64 = 0;
                let mut pw: u64 = 1;
                for _ in 0..u {
                    total = total.checked_add(pw)?;
                    pw = pw.checked_mul(q)?;
                }
                Some(total)
            });
            let q = match (q, points) {
                (Some(q), Some(n)) if n <= ENUMERATION_BUDGET => q,
                _ => {
                    return Err(Error::Mode(format!(
                        "enumerating P^{} over GF({p}^{e}) exceeds the budget of {ENUMERATION_BUDGET} points",
                        u - 1
                    )))
                }
            };
            let field = ExtField::new(p, e as usize);
            let elements: Vec<Vec<u32>> = (0..q)
                .map(|mut x| {
                    (0..e)
                        .map(|_| {
                            let c = (x % p as u64) as u32;
                            x /= p as u64;
                            c
                        })
                        .collect()
                })
                .collect();
            // projective points: leading coordinate 1 at position `lead`
            for lead in 0..u {
                let free = u - lead - 1;
                let total = q.pow(free as u32);
                for idx in 0..total {
                    let mut b = vec![vec![0u32; e as usize]; u];
                    b[lead] = field.one();
                    let mut x = idx;
                    for slot in b.iter_mut().skip(lead + 1) {
                        *slot = elements[(x % q) as usize].clone();
                        x /= q;
                    }
                    let rows: Vec<Vec<Vec<u32>>> = (0..v)
                        .map(|k| {
                            (0..w)
                                .map(|a| {
                                    let mut acc = vec![0u32; e as usize];
                                    for (j, bj) in b.iter().enumerate() {
                                        let c = mu.get(a, j, k);
                                        if c != 0 {
                                            for (t, &y) in acc.iter_mut().zip(bj) {
                                                *t = add_mod(*t, mul_mod(c, y, p), p);
                                            }
                                        }
                                    }
                                    acc
                                })
                                .collect()
                        })
                        .collect();
                    if field.rank(rows) < w {
                        return Ok(false);
                    }
                }
            }
            Ok(true)
        }
    }
}

/// Limits the number of minors expanded by [`minors_span`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MinorSampling {
    pub budget: usize,
    pub seed: u64,
}

impl Default for MinorSampling {
    fn default() -> Self {
        MinorSampling {
            budget: 200_000,
            seed: 0,
        }
    }
}

/// Result of [`minors_span`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MinorsSpan {
    pub spans: bool,
    pub dimension: usize,
    pub sampled: bool,
}

/// Span of the `d x d` minors of the `v x w` matrix of linear forms on `U`
/// attached to `μ`, inside `Sym_d(U*)`.
pub fn minors_span(mu: &PairingTensor, d: usize, sampling: MinorSampling) -> Result<MinorsSpan> {
    let p = mu.modulus();
    let (w, u, v) = mu.dims();
    if d > w {
        return Err(Error::DegreeRange(format!("minor size {d} exceeds dim W = {w}")));
    }
    let target = SymBasis::new(u, d);
    if d == 0 {
        return Ok(MinorsSpan {
            spans: true,
            dimension: 1,
            sampled: false,
        });
    }
    if d > v {
        return Ok(MinorsSpan {
            spans: false,
            dimension: 0,
            sampled: false,
        });
    }
    let sym: Vec<SymBasis> = (0..=d).map(|t| SymBasis::new(u, t)).collect();
    let up: Vec<Vec<Vec<usize>>> = (0..d).map(|t| sym[t].times_variable_table(&sym[t + 1])).collect();
    let per_rows = binomial(w, d);
    let all_rows = binomial(v, d);
    let sampled = all_rows.saturating_mul(per_rows) > sampling.budget;
    let row_sets: Vec<Vec<usize>> = if sampled {
        let mut rng = SeededRng::new(sampling.seed);
        (0..(sampling.budget / per_rows).max(1)).map(|_| rng.subset(v, d)).collect()
    } else {
        (0..v).combinations(d).collect()
    };
    let mut minors: Vec<u32> = Vec::new();
    let mut count = 0usize;
    for rows in &row_sets {
        // det of rows[..t] against column set C, keyed by bitmask of C
        let mut layer: HashMap<u64, Vec<u32>> = HashMap::new();
        layer.insert(0, vec![1]);
        for t in 1..=d {
            let row = rows[t - 1];
            let mut next: HashMap<u64, Vec<u32>> = HashMap::new();
            for cols in (0..w).combinations(t) {
                let mask = cols.iter().fold(0u64, |m, &c| m | (1 << c));
                let mut poly = vec![0u32; sym[t].len()];
                for (pos, &c) in cols.iter().enumerate() {
                    let minor = &layer[&(mask & !(1 << c))];
                    let negative = (pos + t - 1) % 2 == 1;
                    for (mi, &coef) in minor.iter().enumerate() {
                        if coef == 0 {
                            continue;
                        }
                        for b in 0..u {
                            let x = mu.get(c, b, row);
                            if x == 0 {
                                continue;
                            }
                            let y = mul_mod(coef, x, p);
                            let at = up[t - 1][mi][b];
                            poly[at] = if negative {
                                sub_mod(poly[at], y, p)
                            } else {
                                add_mod(poly[at], y, p)
                            };
                        }
                    }
                }
                next.insert(mask, poly);
            }
            layer = next;
        }
        for cols in (0..w).combinations(d) {
            let mask = cols.iter().fold(0u64, |m, &c| m | (1 << c));
            minors.extend_from_slice(&layer[&mask]);
            count += 1;
        }
    }
    let dimension = crate::exactfield::streamed_rank(p, count, target.len(), |i, buf| {
        buf.copy_from_slice(&minors[i * target.len()..(i + 1) * target.len()])
    });
    Ok(MinorsSpan {
        spans: dimension == target.len(),
        dimension,
        sampled,
    })
}

/// Whether `F(μ)` and its maximal irredundant quotient share the last term.
pub fn last_term_preserved(mu: &PairingTensor) -> Result<bool> {
    let (w, u, _) = mu.dims();
    let f = pairing_complex(mu)?;
    let fp = max_irredundant_quotient_generation(&f)?;
    Ok(fp.ranks()[w - 1] == binomial(w - 1 + u - 1, u - 1))
}

/// Matrix of `Sym_m(V) ⊗ F_i -> Sym_(m+1)(V) ⊗ F_(i-1)`, basis index
/// `monomial * rank + generator`.
pub fn strand_map(f: &LinearComplex, i: usize, m: usize) -> FieldMatrix {
    let n = f.nvars;
    let src = SymBasis::new(n, m);
    let dst = SymBasis::new(n, m + 1);
    let up = src.times_variable_table(&dst);
    let (rs, rt) = (f.ranks[i], f.ranks[i - 1]);
    let mut out = FieldMatrix::zeros(f.p, dst.len() * rt, src.len() * rs);
    for (mi, shifts) in up.iter().enumerate() {
        for (k, &mj) in shifts.iter().enumerate() {
            let c = f.coefficient(k, i);
            for g in 0..rt {
                for h in 0..rs {
                    let x = c.get(g, h);
                    if x != 0 {
                        out.add_at(mj * rt + g, mi * rs + h, x);
                    }
                }
            }
        }
    }
    out
}

/// Dimension of the homology of `F` at position `i` in internal degree `m`.
pub fn strand_homology(f: &LinearComplex, i: usize, m: i64) -> Result<usize> {
    if i > f.length() {
        return Err(Error::DegreeRange(format!("position {i} beyond the complex of length {}", f.length())));
    }
    let e = m - f.twist - i as i64;
    if e < 0 {
        return Err(Error::DegreeRange(format!(
            "internal degree {m} is below the generators of F_{i} (degree {})",
            f.twist + i as i64
        )));
    }
    let e = e as usize;
    let mid = SymBasis::new(f.nvars, e).len() * f.ranks[i];
    let out = if i >= 1 { strand_map(f, i, e).rank() } else { 0 };
    let inn = if i < f.length() && e >= 1 {
        strand_map(f, i + 1, e - 1).rank()
    } else {
        0
    };
    mid.checked_sub(out + inn)
        .ok_or_else(|| Error::Consistency("strand ranks exceed the middle dimension".into()))
}

/// Base change along a projection `V -> V'` given by a full-rank
/// `dim V' x dim V` matrix `T`: `C'_j = Σ_k T_(j,k) C_k`.
pub fn restrict_complex(f: &LinearComplex, projection: &FieldMatrix) -> Result<LinearComplex> {
    if projection.ncols() != f.nvars {
        return Err(Error::Input(format!(
            "projection needs {} columns, has {}",
            f.nvars,
            projection.ncols()
        )));
    }
    if projection.rank() != projection.nrows() {
        return Err(Error::Input("projection is rank-deficient".into()));
    }
    let p = f.p;
    let coeffs = (1..=f.length())
        .map(|i| {
            (0..projection.nrows())
                .map(|j| {
                    let mut acc = FieldMatrix::zeros(p, f.ranks[i - 1], f.ranks[i]);
                    for k in 0..f.nvars {
                        let t = projection.get(j, k);
                        if t != 0 {
                            acc = acc.add(&f.coefficient(k, i).scale(t)).expect("same shape");
                        }
                    }
                    acc
                })
                .collect()
        })
        .collect();
    LinearComplex::new(p, projection.nrows(), f.twist, f.ranks.clone(), coeffs)
}

/// A random module for property suites: a subquotient of a sum of shifted
/// free modules, cut down to `0..len`, with every piece of dimension at most
/// `max_dim`.
pub fn random_exterior_module(p: u32, rng: &mut SeededRng, max_gens: usize, max_dim: usize, max_len: usize) -> ExteriorModule {
    loop {
        let ngens = 1 + rng.next_below(max_gens as u64) as usize;
        let len = 1 + rng.next_below(max_len as u64) as usize;
        let mut m = ExteriorModule::free(p, ngens, rng.next_below(len as u64 + 1) as i64);
        if rng.next_below(2) == 1 {
            let other = ExteriorModule::free(p, ngens, rng.next_below(len as u64 + 1) as i64);
            m = m.direct_sum(&other).expect("same generators");
        }
        let (lo, hi) = m.window();
        let ngen_elems = rng.next_below(3) as usize;
        let gens: Vec<(i64, Vec<u32>)> = (0..ngen_elems)
            .map(|_| {
                let d = lo + rng.next_below((hi - lo + 1) as u64) as i64;
                (d, (0..m.dim(d)).map(|_| rng.next_residue(p)).collect())
            })
            .collect();
        let bases = m.generated_submodule(&gens).expect("generators fit");
        let m = match rng.next_below(3) {
            0 => m,
            1 => m.quotient(&bases).expect("quotient"),
            _ => m.submodule(&bases).expect("submodule"),
        };
        let m = m.restrict_window(0, len as i64 - 1).expect("window");
        if m.dims().iter().all(|&d| d <= max_dim) && m.dims().iter().any(|&d| d > 0) {
            return m;
        }
    }
}

/// Random pairing with `1 <= w, u <= max` and `1 <= v <= max_v`.
pub fn random_pairing(p: u32, rng: &mut SeededRng, max: usize, max_v: usize) -> PairingTensor {
    let w = 1 + rng.next_below(max as u64) as usize;
    let u = 1 + rng.next_below(max as u64) as usize;
    let v = 1 + rng.next_below(max_v as u64) as usize;
    PairingTensor::random(p, w, u, v, rng).expect("positive dims")
}

#[cfg(test)]
mod tests {
    use super::*;

    const P: u32 = 32003;

    fn binary_quadrics() -> PairingTensor {
        binary_form_multiplication(P, 2, 2).unwrap()
    }

    #[test]
    fn free_module_and_its_complex() {
        let e = ExteriorModule::free(P, 2, 2);
        e.validate().unwrap();
        assert_eq!(e.dims(), &[1, 2, 1]);
        let f = linear_complex(&e);
        f.validate().unwrap();
        assert_eq!(f.ranks(), &[1, 2, 1]);
        assert!(is_irredundant(&f));
        assert!(is_generated_in_degree_zero(&ExteriorModule::free(P, 3, 0), false));
        let e3 = ExteriorModule::free(P, 3, 3);
        assert!(is_irredundant(&linear_complex(&e3)));
        assert!(is_generated_in_degree_zero(&e3, true));
    }

    #[test]
    fn trivial_module() {
        let k = ExteriorModule::new(P, 3, 0, vec![1], vec![vec![], vec![], vec![]]).unwrap();
        let f = linear_complex(&k);
        assert_eq!(f.ranks(), &[1]);
        assert!(is_irredundant(&f));
    }

    #[test]
    fn zero_differential_is_redundant() {
        let z = FieldMatrix::zeros(P, 1, 1);
        let m = ExteriorModule::new(P, 2, 0, vec![1, 1], vec![vec![z.clone()], vec![z]]).unwrap();
        assert!(!is_irredundant(&linear_complex(&m)));
        // socle generator in degree 1 is not reached from degree 0
        let e = ExteriorModule::free(P, 2, 0).direct_sum(&ExteriorModule::new(P, 2, 1, vec![1], vec![vec![], vec![]]).unwrap()).unwrap();
        assert!(!is_generated_in_degree_zero(&e, false));
    }

    #[test]
    fn dual_is_an_involution() {
        let mut rng = SeededRng::new(4);
        for _ in 0..20 {
            let m = random_exterior_module(101, &mut rng, 4, 5, 4);
            m.validate().unwrap();
            assert_eq!(m.dual().dual(), m);
            m.dual().validate().unwrap();
        }
    }

    #[test]
    fn binary_quadric_complexes() {
        let mu = binary_quadrics();
        let f = pairing_complex(&mu).unwrap();
        f.validate().unwrap();
        assert_eq!(f.ranks(), &[3, 9, 6]);
        assert!(!is_irredundant(&f));
        assert_eq!(f.stacked(1).rank(), 8);
        assert_eq!(strand_homology(&f, 1, 1).unwrap(), 1);
        let g = max_irredundant_quotient_generation(&f).unwrap();
        g.validate().unwrap();
        assert_eq!(g.ranks(), &[3, 8, 6]);
        assert!(is_irredundant(&g));
        let a = max_irredundant_quotient_annihilator(&f).unwrap();
        assert_eq!(a, g);
        assert!(last_term_preserved(&mu).unwrap());
        assert_eq!(pairing_complex_via_module(&mu).unwrap(), f);
    }

    #[test]
    fn one_term_complex_for_one_dimensional_w() {
        let mut rng = SeededRng::new(2);
        let mu = PairingTensor::random(P, 1, 3, 4, &mut rng).unwrap();
        let f = pairing_complex(&mu).unwrap();
        assert_eq!(f.ranks(), &[1]);
    }

    #[test]
    fn q_module_is_an_exterior_module() {
        let mut rng = SeededRng::new(8);
        for _ in 0..10 {
            let mu = random_pairing(101, &mut rng, 3, 4);
            let q = pairing_module(&mu).unwrap();
            q.validate().unwrap();
            assert_eq!(pairing_complex_via_module(&mu).unwrap(), pairing_complex(&mu).unwrap());
        }
    }

    #[test]
    fn identity_pairing_gives_an_irredundant_complex() {
        for (w, u) in [(2, 2), (3, 2), (2, 3)] {
            let mu = identity_pairing(P, w, u).unwrap();
            let f = pairing_complex(&mu).unwrap();
            assert!(is_irredundant(&f), "{w} {u}");
            assert!(is_one_generic(&mu, GenericityMode::MonteCarlo { samples: 50, seed: 1 }).unwrap());
        }
        let mu = identity_pairing(5, 2, 2).unwrap();
        assert!(is_one_generic(&mu, GenericityMode::Exhaustive(2)).unwrap());
    }

    #[test]
    fn genericity_examples() {
        let mu = binary_form_multiplication(7, 2, 2).unwrap();
        assert!(is_one_generic(&mu, GenericityMode::Exhaustive(1)).unwrap());
        assert!(is_one_generic(&mu, GenericityMode::Exhaustive(2)).unwrap());
        let zero_slice = PairingTensor::from_fn(7, 2, 2, 3, |a, b, k| if a == 0 { 0 } else { ((b + k) % 2) as u32 }).unwrap();
        assert!(!is_one_generic(&zero_slice, GenericityMode::Exhaustive(1)).unwrap());
        assert!(!is_one_generic(&zero_slice, GenericityMode::MonteCarlo { samples: 5, seed: 0 }).unwrap());
        assert!(matches!(
            is_one_generic(&binary_quadrics(), GenericityMode::Exhaustive(1)),
            Err(Error::Mode(_))
        ));
        // field multiplication of GF(4) over GF(2) is 1-generic, but not over GF(4)
        let gf4 = PairingTensor::from_fn(2, 2, 2, 2, |a, b, k| match (a, b) {
            (0, 0) => (k == 0) as u32,
            (0, 1) | (1, 0) => (k == 1) as u32,
            _ => 1,
        })
        .unwrap();
        assert!(is_one_generic(&gf4, GenericityMode::Exhaustive(1)).unwrap());
        assert!(!is_one_generic(&gf4, GenericityMode::Exhaustive(2)).unwrap());
    }

    #[test]
    fn irreducible_polynomials() {
        // x^2 + 1 is irreducible over GF(3) and is the first candidate in order
        assert_eq!(find_irreducible(3, 2), vec![1, 0]);
        let f = ExtField::new(3, 2);
        let x = vec![0, 1];
        assert_eq!(f.mul(&x, &x), vec![2, 0]);
        for a in 1..9u32 {
            let el = vec![a % 3, a / 3];
            assert_eq!(f.mul(&el, &f.inv(&el)), f.one());
        }
    }

    #[test]
    fn minors_examples() {
        let mu = binary_quadrics();
        let s = minors_span(&mu, 2, MinorSampling::default()).unwrap();
        assert_eq!((s.dimension, s.spans), (6, true));
        let s = minors_span(&mu, 3, MinorSampling::default()).unwrap();
        assert_eq!(s.dimension, 10);
        assert!(matches!(minors_span(&mu, 4, MinorSampling::default()), Err(Error::DegreeRange(_))));
        // u = 1: a scalar matrix; span is 1-dimensional iff some minor is nonzero
        let one = PairingTensor::from_fn(P, 2, 1, 3, |a, _, k| (a == k) as u32).unwrap();
        assert_eq!(minors_span(&one, 2, MinorSampling::default()).unwrap().dimension, 1);
        let none = PairingTensor::from_fn(P, 2, 1, 3, |_, _, k| (k == 0) as u32).unwrap();
        assert_eq!(minors_span(&none, 2, MinorSampling::default()).unwrap().dimension, 0);
    }

    #[test]
    fn minors_match_determinants() {
        // evaluate the expanded minors at points and compare with determinants
        let mut rng = SeededRng::new(3);
        let mu = PairingTensor::random(101, 3, 2, 3, &mut rng).unwrap();
        let s = minors_span(&mu, 3, MinorSampling::default()).unwrap();
        // the one 3x3 determinant is a cubic in 2 variables: span 1 unless it vanishes
        let b = [5u32, 7];
        let det = mu.slice_at(&b).determinant().unwrap();
        assert_eq!(s.dimension, (det != 0) as usize);
    }

    #[test]
    fn strand_homology_of_koszul_complex() {
        let f = linear_complex(&ExteriorModule::free(P, 3, 3));
        for i in 1..=3 {
            assert_eq!(strand_homology(&f, i, i as i64).unwrap(), 0);
            assert_eq!(strand_homology(&f, i, i as i64 + 1).unwrap(), 0);
        }
        assert_eq!(strand_homology(&f, 0, 0).unwrap(), 1);
        assert!(matches!(strand_homology(&f, 2, 1), Err(Error::DegreeRange(_))));
        for i in 1..3 {
            for m in 0..3 {
                let a = strand_map(&f, i, m + 1);
                let b = strand_map(&f, i + 1, m);
                assert!(a.mul(&b).unwrap().is_zero());
            }
        }
    }

    #[test]
    fn restriction() {
        let f = linear_complex(&ExteriorModule::free(P, 3, 3));
        let id = FieldMatrix::identity(P, 3);
        assert_eq!(restrict_complex(&f, &id).unwrap(), f);
        let t = FieldMatrix::from_rows(P, &[vec![1, 0, 2], vec![0, 1, 3]]).unwrap();
        let g = restrict_complex(&f, &t).unwrap();
        g.validate().unwrap();
        assert_eq!(is_irredundant(&g), strand_homology(&g, 1, 1).unwrap() == 0);
        let bad = FieldMatrix::from_rows(P, &[vec![1, 0, 2], vec![2, 0, 4]]).unwrap();
        assert!(matches!(restrict_complex(&f, &bad), Err(Error::Input(_))));
    }

    #[test]
    fn quotients_agree_and_are_idempotent() {
        let mut rng = SeededRng::new(11);
        for _ in 0..30 {
            let m = random_exterior_module(101, &mut rng, 4, 5, 4);
            let f = linear_complex(&m);
            let g = max_irredundant_quotient_generation(&f).unwrap();
            let a = max_irredundant_quotient_annihilator(&f).unwrap();
            assert_eq!(g, a);
            assert!(is_irredundant(&g));
            assert_eq!(g.ranks()[0], f.ranks()[0]);
            assert_eq!(max_irredundant_quotient_generation(&g).unwrap(), g);
        }
    }
}
