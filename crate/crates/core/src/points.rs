//! Finite point configurations in P^r over GF(p).
//!
//! A configuration stores an `(r+1) x γ` coordinate matrix whose columns are
//! the points. Functions on the points are identified with `k^γ` by
//! evaluating at the normalized representatives (first nonzero coordinate
//! equal to 1). Under this identification:
//! - `(S/I)_d` is the column space of the degree-`d` evaluation matrix;
//! - the canonical module piece `ω_j` for `j <= 0` is the space of functionals
//!   on `k^γ` vanishing on `(S/I)_(-j)`, and all of `k^γ` for `j >= 1`;
//! - variables act on both by componentwise multiplication with their values.

use std::fmt;

use itertools::Itertools;

use crate::betti::GradedModulePresentation;
use crate::error::{Error, Result};
use crate::exactfield::text::{content_lines, ensure_consumed, parse_header, parse_rows, write_rows};
use crate::exactfield::{check_modulus, derive_seed, inv_mod, mul_mod, FieldMatrix, SeededRng};
use crate::multilinear::{binomial, SymBasis};

/// Number of generation attempts before giving up.
pub const MAX_ATTEMPTS: usize = 16;

const EXHAUSTIVE_LIMIT: usize = 1_000_000;
const DEFAULT_SAMPLES: usize = 10_000;
const SAMPLING_SEED: u64 = 0x5EED_0F_1A7;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CheckMode {
    Exhaustive,
    Sampled(usize),
}

impl CheckMode {
    /// Exhaustive when there are at most 10^6 subsets to test, else 10^4 samples.
    pub fn default_for(r: usize, gamma: usize) -> CheckMode {
        if binomial(gamma, r + 1) <= EXHAUSTIVE_LIMIT {
            CheckMode::Exhaustive
        } else {
            CheckMode::Sampled(DEFAULT_SAMPLES)
        }
    }

    /// Parses `exhaustive` or `sampled:N`.
    pub fn parse(s: &str) -> Result<CheckMode> {
        match s {
            "exhaustive" => Ok(CheckMode::Exhaustive),
            _ => s
                .strip_prefix("sampled:")
                .and_then(|n| n.parse().ok())
                .map(CheckMode::Sampled)
                .ok_or_else(|| Error::Input(format!("check mode `{s}`: expected exhaustive or sampled:N"))),
        }
    }
}

impl fmt::Display for CheckMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CheckMode::Exhaustive => write!(f, "exhaustive"),
            CheckMode::Sampled(n) => write!(f, "sampled:{n}"),
        }
    }
}

/// γ points in P^r, one per column.
#[derive(Clone, PartialEq, Eq)]
pub struct PointConfiguration {
    r: usize,
    coords: FieldMatrix,
    normalized: bool,
}

fn normalize_column(m: &mut FieldMatrix, j: usize) {
    let p = m.modulus();
    let lead = (0..m.nrows()).map(|i| m.get(i, j)).find(|&x| x != 0).expect("nonzero column");
    let inv = inv_mod(lead, p).unwrap();
    for i in 0..m.nrows() {
        let v = m.get(i, j);
        m.set(i, j, mul_mod(v, inv, p));
    }
}

impl PointConfiguration {
    /// Wraps a coordinate matrix. Columns must be nonzero; repeated points
    /// are representable so that checks can reject them.
    pub fn new(coords: FieldMatrix) -> Result<Self> {
        if coords.nrows() == 0 {
            return Err(Error::Input("points need at least one coordinate".into()));
        }
        if let Some(j) = (0..coords.ncols()).find(|&j| (0..coords.nrows()).all(|i| coords.get(i, j) == 0)) {
            return Err(Error::Input(format!("point {j} has all coordinates zero")));
        }
        let normalized = (0..coords.ncols())
            .all(|j| (0..coords.nrows()).map(|i| coords.get(i, j)).find(|&x| x != 0) == Some(1));
        Ok(PointConfiguration {
            r: coords.nrows() - 1,
            coords,
            normalized,
        })
    }

    pub fn modulus(&self) -> u32 {
        self.coords.modulus()
    }

    pub fn ambient_dim(&self) -> usize {
        self.r
    }

    pub fn len(&self) -> usize {
        self.coords.ncols()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.ncols() == 0
    }

    pub fn coords(&self) -> &FieldMatrix {
        &self.coords
    }

    pub fn is_normalized(&self) -> bool {
        self.normalized
    }

    /// Same points with every column scaled so its first nonzero entry is 1.
    pub fn normalized(&self) -> PointConfiguration {
        if self.normalized {
            return self.clone();
        }
        let mut m = self.coords.clone();
        for j in 0..m.ncols() {
            normalize_column(&mut m, j);
        }
        PointConfiguration {
            r: self.r,
            coords: m,
            normalized: true,
        }
    }

    /// Whether the points are pairwise distinct in projective space.
    pub fn has_distinct_points(&self) -> bool {
        let n = self.normalized();
        let cols: Vec<Vec<u32>> = (0..n.len()).map(|j| n.coords.column(j)).collect();
        cols.iter().all_unique()
    }

    /// Coordinate change `x -> A x` on P^r.
    pub fn transform(&self, a: &FieldMatrix) -> Result<PointConfiguration> {
        if a.inverse().is_none() || a.nrows() != self.r + 1 {
            return Err(Error::Input("coordinate change must be invertible of size r+1".into()));
        }
        PointConfiguration::new(a.mul(&self.coords)?)
    }

    /// Text form: `p r gamma`, then `r+1` lines of `gamma` residues.
    pub fn to_text(&self) -> String {
        let mut out = format!("{} {} {}\n", self.modulus(), self.r, self.len());
        write_rows(&mut out, &self.coords);
        out
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = content_lines(text);
        let h = parse_header(&mut lines, 3, "points")?;
        let p = check_modulus(h[0])?;
        let (r, gamma) = (h[1] as usize, h[2] as usize);
        let data = parse_rows(&mut lines, p, r + 1, gamma)?;
        ensure_consumed(&mut lines)?;
        PointConfiguration::new(FieldMatrix::from_vec(p, r + 1, gamma, data)?)
    }
}

impl fmt::Debug for PointConfiguration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} points in P^{} over GF({})", self.len(), self.r, self.modulus())
    }
}

/// Whether every `r+1` of the points are linearly independent.
pub fn is_lgp(config: &PointConfiguration, mode: CheckMode) -> bool {
    let (r, gamma) = (config.r, config.len());
    if gamma <= r + 1 {
        return config.coords.rank() == gamma;
    }
    let independent = |subset: &[usize]| config.coords.select_columns(subset).determinant() != Some(0);
    match mode {
        CheckMode::Exhaustive => (0..gamma).combinations(r + 1).all(|s| independent(&s)),
        CheckMode::Sampled(n) => {
            // duplicates make some pair dependent; sampling alone could miss them
            if !config.has_distinct_points() {
                return false;
            }
            let mut rng = SeededRng::new(SAMPLING_SEED);
            (0..n).all(|_| independent(&rng.subset(gamma, r + 1)))
        }
    }
}

/// Random configuration in linearly general position, retrying with derived seeds.
pub fn random_lgp_config(r: usize, gamma: usize, p: u32, seed: u64, mode: CheckMode) -> Result<PointConfiguration> {
    check_modulus(p as u64)?;
    if gamma < r + 1 {
        return Err(Error::Input(format!("need at least r+1 = {} points, got {gamma}", r + 1)));
    }
    for attempt in 0..MAX_ATTEMPTS {
        if let Some(config) = random_configuration(r, gamma, p, derive_seed(seed, attempt)) {
            if is_lgp(&config, mode) {
                return Ok(config);
            }
        }
    }
    Err(Error::Generation {
        attempts: MAX_ATTEMPTS,
        reason: format!("no configuration of {gamma} points in P^{r} over GF({p}) passed the {mode} lgp check"),
    })
}

/// One seeded draw of `gamma` normalized points, without any genericity check.
/// `None` if some drawn column is zero.
pub fn random_configuration(r: usize, gamma: usize, p: u32, seed: u64) -> Option<PointConfiguration> {
    let mut rng = SeededRng::new(seed);
    let coords = FieldMatrix::from_fn(p, r + 1, gamma, |_, _| rng.next_residue(p));
    PointConfiguration::new(coords).ok().map(|c| c.normalized())
}

/// `γ x dim Sym_d` matrix of monomials evaluated at the normalized points.
pub fn evaluation_matrix(config: &PointConfiguration, d: usize) -> FieldMatrix {
    let n = config.normalized();
    let p = config.modulus();
    let basis = SymBasis::new(config.r + 1, d);
    let nv = config.r + 1;
    // powers[j][k][e] = x_k(point j)^e
    let powers: Vec<Vec<Vec<u32>>> = (0..config.len())
        .map(|j| {
            (0..nv)
                .map(|k| {
                    let x = n.coords.get(k, j);
                    let mut pw = vec![1 % p; d + 1];
                    for e in 1..=d {
                        pw[e] = mul_mod(pw[e - 1], x, p);
                    }
                    pw
                })
                .collect()
        })
        .collect();
    FieldMatrix::from_fn(p, config.len(), basis.len(), |j, m| {
        basis
            .monomial(m)
            .iter()
            .enumerate()
            .fold(1 % p, |acc, (k, &e)| mul_mod(acc, powers[j][k][e], p))
    })
}

/// `dim (S/I_Γ)_d`.
pub fn hilbert_function(config: &PointConfiguration, d: usize) -> usize {
    evaluation_matrix(config, d).rank()
}

/// Columns span the forms of degree `d` vanishing on the points.
pub fn ideal_piece(config: &PointConfiguration, d: usize) -> FieldMatrix {
    evaluation_matrix(config, d).kernel_basis()
}

/// Gale transform: the rows of a kernel basis of the coordinate matrix, as
/// points of P^s with `s = γ - r - 2`. Coordinates are left unscaled so that
/// applying the transform twice recovers the original row space exactly.
pub fn gale_transform(config: &PointConfiguration) -> Result<PointConfiguration> {
    let (r, gamma) = (config.r, config.len());
    if gamma < r + 3 {
        return Err(Error::GaleUndefined(format!("needs at least r+3 = {} points, got {gamma}", r + 3)));
    }
    if config.coords.rank() != r + 1 {
        return Err(Error::GaleUndefined("points do not span the ambient space".into()));
    }
    let kernel = config.coords.kernel_basis();
    if let Some(j) = (0..gamma).find(|&j| kernel.row(j).iter().all(|&x| x == 0)) {
        return Err(Error::GaleUndefined(format!(
            "point {j} is not in the span of the other points"
        )));
    }
    PointConfiguration::new(kernel.transpose())
}

/// A subspace of `k^n` with a fixed column basis and fast coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subspace {
    basis: FieldMatrix,
    rows: Vec<usize>,
    inv: FieldMatrix,
}

impl Subspace {
    /// `basis` must have independent columns.
    pub fn new(basis: FieldMatrix) -> Result<Subspace> {
        let rows = basis.transpose().rref().pivots;
        if rows.len() != basis.ncols() {
            return Err(Error::Input("subspace basis columns are dependent".into()));
        }
        let inv = basis
            .select_rows(&rows)
            .inverse()
            .ok_or_else(|| Error::Consistency("pivot block of a basis is singular".into()))?;
        Ok(Subspace { basis, rows, inv })
    }

    pub fn dim(&self) -> usize {
        self.basis.ncols()
    }

    pub fn ambient_dim(&self) -> usize {
        self.basis.nrows()
    }

    pub fn basis(&self) -> &FieldMatrix {
        &self.basis
    }

    /// Coordinates of `v` in the basis, `None` when `v` is outside the subspace.
    pub fn coordinates(&self, v: &[u32]) -> Option<Vec<u32>> {
        let sel: Vec<u32> = self.rows.iter().map(|&i| v[i]).collect();
        let c = self.inv.mul_vec(&sel).ok()?;
        let back = self.basis.mul_vec(&c).ok()?;
        (back == v).then_some(c)
    }

    /// Coordinates of every column of `m`, as a `dim x m.ncols()` matrix.
    pub fn coordinates_of_columns(&self, m: &FieldMatrix) -> Option<FieldMatrix> {
        let p = self.basis.modulus();
        let mut out = FieldMatrix::zeros(p, self.dim(), m.ncols());
        for j in 0..m.ncols() {
            let c = self.coordinates(&m.column(j))?;
            for (i, x) in c.into_iter().enumerate() {
                out.set(i, j, x);
            }
        }
        Some(out)
    }
}

/// A graded piece `(ω_Γ)_j`, as a subspace of functionals on `k^γ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CanonicalPiece {
    pub degree: i64,
    pub space: Subspace,
}

impl CanonicalPiece {
    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    pub fn basis(&self) -> &FieldMatrix {
        self.space.basis()
    }
}

/// `(ω_Γ)_j`: functionals orthogonal to `(S/I)_(-j)` for `j <= 0`, everything for `j >= 1`.
pub fn canonical_piece(config: &PointConfiguration, j: i64) -> CanonicalPiece {
    let p = config.modulus();
    let basis = if j >= 1 {
        FieldMatrix::identity(p, config.len())
    } else {
        evaluation_matrix(config, (-j) as usize).transpose().kernel_basis()
    };
    CanonicalPiece {
        degree: j,
        space: Subspace::new(basis).expect("kernel bases have independent columns"),
    }
}

/// Values of a linear form at the normalized points.
pub fn linear_form_values(config: &PointConfiguration, form: &[u32]) -> Result<Vec<u32>> {
    if form.len() != config.r + 1 {
        return Err(Error::Dimension(format!("linear form needs {} coefficients", config.r + 1)));
    }
    config.normalized().coords.transpose().mul_vec(form)
}

/// Multiplication by a linear form on the canonical module: the diagonal
/// matrix of its values at the points.
pub fn canonical_action(config: &PointConfiguration, form: &[u32]) -> Result<FieldMatrix> {
    Ok(FieldMatrix::diagonal(config.modulus(), &linear_form_values(config, form)?))
}

fn hadamard(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    a.iter().zip(b).map(|(&x, &y)| mul_mod(x, y, p)).collect()
}

/// Bilinear map `μ: W ⊗ U -> V` with `μ(w_a ⊗ u_b) = Σ_k entry(a, b, k) v_k`.
#[derive(Clone, PartialEq, Eq)]
pub struct PairingTensor {
    p: u32,
    w: usize,
    u: usize,
    v: usize,
    entries: Vec<u32>,
}

impl PairingTensor {
    pub fn new(p: u32, w: usize, u: usize, v: usize, entries: Vec<u32>) -> Result<Self> {
        check_modulus(p as u64)?;
        if w == 0 || u == 0 || v == 0 {
            return Err(Error::Dimension("pairing dimensions must be positive".into()));
        }
        if entries.len() != w * u * v {
            return Err(Error::Dimension(format!("{} entries for a {w}x{u}x{v} tensor", entries.len())));
        }
        let entries = entries.into_iter().map(|x| x % p).collect();
        Ok(PairingTensor { p, w, u, v, entries })
    }

    pub fn from_fn(p: u32, w: usize, u: usize, v: usize, mut f: impl FnMut(usize, usize, usize) -> u32) -> Result<Self> {
        let mut entries = Vec::with_capacity(w * u * v);
        for a in 0..w {
            for b in 0..u {
                for k in 0..v {
                    entries.push(f(a, b, k));
                }
            }
        }
        Self::new(p, w, u, v, entries)
    }

    pub fn random(p: u32, w: usize, u: usize, v: usize, rng: &mut SeededRng) -> Result<Self> {
        Self::from_fn(p, w, u, v, |_, _, _| rng.next_residue(p))
    }

    pub fn modulus(&self) -> u32 {
        self.p
    }

    /// `(w, u, v)`.
    pub fn dims(&self) -> (usize, usize, usize) {
        (self.w, self.u, self.v)
    }

    #[inline]
    pub fn get(&self, a: usize, b: usize, k: usize) -> u32 {
        self.entries[(a * self.u + b) * self.v + k]
    }

    /// `μ(w_a ⊗ u_b)` in V-coordinates.
    pub fn image(&self, a: usize, b: usize) -> &[u32] {
        let start = (a * self.u + b) * self.v;
        &self.entries[start..start + self.v]
    }

    /// `v x w` matrix of `a -> μ(a ⊗ b)` for a vector `b ∈ U`.
    pub fn slice_at(&self, b: &[u32]) -> FieldMatrix {
        let p = self.p;
        FieldMatrix::from_fn(p, self.v, self.w, |k, a| {
            (0..self.u).fold(0u64, |acc, j| (acc + self.get(a, j, k) as u64 * b[j] as u64) % p as u64) as u32
        })
    }

    /// Text form: `p w u v`, then `w*u` lines (row `(a, b)`, `b` fastest) of `v` residues.
    pub fn to_text(&self) -> String {
        let mut out = format!("{} {} {} {}\n", self.p, self.w, self.u, self.v);
        let m = FieldMatrix::from_vec(self.p, self.w * self.u, self.v, self.entries.clone()).expect("sized");
        write_rows(&mut out, &m);
        out
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = content_lines(text);
        let h = parse_header(&mut lines, 4, "tensor")?;
        let p = check_modulus(h[0])?;
        let (w, u, v) = (h[1] as usize, h[2] as usize, h[3] as usize);
        let data = parse_rows(&mut lines, p, w * u, v)?;
        ensure_consumed(&mut lines)?;
        PairingTensor::new(p, w, u, v, data)
    }
}

impl fmt::Debug for PairingTensor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PairingTensor {}x{}->{} over GF({})", self.w, self.u, self.v, self.p)
    }
}

/// The pairing `μ: W ⊗ U -> V` of a configuration Γ' in P^s:
/// `W` = linear forms on P^s, `U = (ω_Γ')_(-2)`, `V = (ω_Γ')_(-1)`, and
/// `μ(x ⊗ λ)` is the componentwise product of the values of `x` with `λ`.
#[derive(Clone, Debug)]
pub struct CanonicalPairing {
    pub mu: PairingTensor,
    /// Columns: the basis of `V` used for the coordinates of `μ`.
    pub v_basis: FieldMatrix,
    pub u_basis: FieldMatrix,
}

pub fn canonical_pairing(config: &PointConfiguration) -> Result<CanonicalPairing> {
    let p = config.modulus();
    let s = config.r;
    if ideal_piece(config, 2).ncols() != 0 {
        return Err(Error::Precondition("the points lie on a quadric".into()));
    }
    let u_piece = canonical_piece(config, -2);
    if u_piece.dim() == 0 {
        return Err(Error::Precondition(
            "μ degenerate: parameters outside counterexample range (points impose independent conditions on quadrics)"
                .into(),
        ));
    }
    let v_piece = canonical_piece(config, -1);
    let normalized = config.normalized();
    let (w, u, v) = (s + 1, u_piece.dim(), v_piece.dim());
    let mut entries = Vec::with_capacity(w * u * v);
    for a in 0..w {
        let xa = normalized.coords.row(a).to_vec();
        for b in 0..u {
            let prod = hadamard(&xa, &u_piece.basis().column(b), p);
            let c = v_piece
                .space
                .coordinates(&prod)
                .ok_or_else(|| Error::Consistency("μ(w ⊗ λ) is not in (ω)_(-1)".into()))?;
            entries.extend(c);
        }
    }
    Ok(CanonicalPairing {
        mu: PairingTensor::new(p, w, u, v, entries)?,
        v_basis: v_piece.basis().clone(),
        u_basis: u_piece.basis().clone(),
    })
}

/// `S/I_Γ` on degrees `0..=d_max`, each piece the column space of the
/// evaluation matrix with the pivot columns as basis.
pub fn quotient_module_presentation(config: &PointConfiguration, d_max: usize) -> Result<GradedModulePresentation> {
    let p = config.modulus();
    let nv = config.r + 1;
    let normalized = config.normalized();
    let pieces: Vec<Subspace> = (0..=d_max)
        .map(|d| Subspace::new(evaluation_matrix(config, d).column_basis()))
        .collect::<Result<_>>()?;
    let mut actions = vec![Vec::with_capacity(d_max); nv];
    for d in 0..d_max {
        for (k, acts) in actions.iter_mut().enumerate() {
            let xk = normalized.coords.row(k);
            let src = pieces[d].basis();
            let moved = FieldMatrix::from_fn(p, config.len(), src.ncols(), |i, j| mul_mod(xk[i], src.get(i, j), p));
            let a = pieces[d + 1]
                .coordinates_of_columns(&moved)
                .ok_or_else(|| Error::Consistency("x_k (S/I)_d not inside (S/I)_(d+1)".into()))?;
            acts.push(a);
        }
    }
    GradedModulePresentation::new(p, nv, 0, pieces.iter().map(|s| s.dim()).collect(), actions)
}

/// `ω_Γ` on degrees `j_min..=j_max`. The lowest piece must vanish so that the
/// module is known to be zero below the window.
pub fn canonical_module_presentation(
    config: &PointConfiguration,
    j_min: i64,
    j_max: i64,
) -> Result<GradedModulePresentation> {
    if j_max < j_min {
        return Err(Error::Window(format!("empty window [{j_min}, {j_max}]")));
    }
    let p = config.modulus();
    let nv = config.r + 1;
    let normalized = config.normalized();
    let pieces: Vec<CanonicalPiece> = (j_min..=j_max).map(|j| canonical_piece(config, j)).collect();
    if pieces[0].dim() != 0 {
        return Err(Error::Window(format!(
            "(ω)_{j_min} has dimension {}; the window must start at a vanishing piece",
            pieces[0].dim()
        )));
    }
    let mut actions = vec![Vec::new(); nv];
    for idx in 0..pieces.len() - 1 {
        for (k, acts) in actions.iter_mut().enumerate() {
            let xk = normalized.coords.row(k);
            let src = pieces[idx].basis();
            let moved = FieldMatrix::from_fn(p, config.len(), src.ncols(), |i, j| mul_mod(xk[i], src.get(i, j), p));
            let a = pieces[idx + 1].space.coordinates_of_columns(&moved).ok_or_else(|| {
                Error::Window(format!("action does not map (ω)_{} into the next piece", pieces[idx].degree))
            })?;
            acts.push(a);
        }
    }
    GradedModulePresentation::new(p, nv, j_min, pieces.iter().map(|c| c.dim()).collect(), actions)
}
