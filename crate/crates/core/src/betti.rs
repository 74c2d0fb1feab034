//! Graded Betti numbers through Koszul homology.
//!
//! `β_{i,j}(M) = dim Tor_i(M, k)_j` is the homology at the middle of
//! `∧^(i+1)V ⊗ M_(j-i-1) -> ∧^i V ⊗ M_(j-i) -> ∧^(i-1)V ⊗ M_(j-i+1)`,
//! computed as `dim - rank(out) - rank(in)`.

use std::collections::BTreeMap;
use std::fmt::{self, Write as _};

use crate::error::{Error, Result};
use crate::exactfield::FieldMatrix;
use crate::multilinear::{binomial, koszul_rank};
use crate::points::{canonical_module_presentation, hilbert_function, PointConfiguration};

/// A graded module over `k[x_0..x_n]` known on the degrees `d0..=d1`, and
/// zero below `d0`. `actions[k][d - d0]` is `x_k: M_d -> M_(d+1)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedModulePresentation {
    p: u32,
    nvars: usize,
    d0: i64,
    dims: Vec<usize>,
    actions: Vec<Vec<FieldMatrix>>,
}

impl GradedModulePresentation {
    pub fn new(p: u32, nvars: usize, d0: i64, dims: Vec<usize>, actions: Vec<Vec<FieldMatrix>>) -> Result<Self> {
        if nvars == 0 || dims.is_empty() {
            return Err(Error::Dimension("module needs variables and at least one degree".into()));
        }
        if actions.len() != nvars {
            return Err(Error::Dimension(format!("{} action lists for {nvars} variables", actions.len())));
        }
        for acts in &actions {
            if acts.len() != dims.len() - 1 {
                return Err(Error::Dimension("one action matrix per consecutive pair of degrees".into()));
            }
            for (d, a) in acts.iter().enumerate() {
                if a.shape() != (dims[d + 1], dims[d]) || a.modulus() != p {
                    return Err(Error::Dimension(format!(
                        "action out of degree {} has shape {:?}, expected {}x{}",
                        d0 + d as i64,
                        a.shape(),
                        dims[d + 1],
                        dims[d]
                    )));
                }
            }
        }
        Ok(GradedModulePresentation {
            p,
            nvars,
            d0,
            dims,
            actions,
        })
    }

    pub fn modulus(&self) -> u32 {
        self.p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    /// `(d0, d1)`.
    pub fn window(&self) -> (i64, i64) {
        (self.d0, self.d0 + self.dims.len() as i64 - 1)
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    /// `dim M_d`; zero below the window, error above it.
    pub fn dim(&self, d: i64) -> Result<usize> {
        let (d0, d1) = self.window();
        if d < d0 {
            Ok(0)
        } else if d > d1 {
            Err(Error::Window(format!("degree {d} is above the window [{d0}, {d1}]")))
        } else {
            Ok(self.dims[(d - d0) as usize])
        }
    }

    /// `x_k: M_d -> M_(d+1)`.
    pub fn action(&self, k: usize, d: i64) -> Result<FieldMatrix> {
        let (d0, d1) = self.window();
        if d + 1 > d1 {
            return Err(Error::Window(format!("degree {} is above the window [{d0}, {d1}]", d + 1)));
        }
        if d < d0 {
            return Ok(FieldMatrix::zeros(self.p, self.dim(d + 1)?, 0));
        }
        Ok(self.actions[k][(d - d0) as usize].clone())
    }

    fn actions_at(&self, d: i64) -> Result<Vec<FieldMatrix>> {
        (0..self.nvars).map(|k| self.action(k, d)).collect()
    }

    pub fn check_commutativity(&self) -> Result<()> {
        for d in 0..self.dims.len().saturating_sub(2) {
            for j in 0..self.nvars {
                for k in j + 1..self.nvars {
                    let a = self.actions[k][d + 1].mul(&self.actions[j][d])?;
                    let b = self.actions[j][d + 1].mul(&self.actions[k][d])?;
                    if a != b {
                        return Err(Error::Consistency(format!(
                            "x_{j} and x_{k} do not commute out of degree {}",
                            self.d0 + d as i64
                        )));
                    }
                }
            }
        }
        Ok(())
    }
}

/// `dim Tor_i(M, k)_j`.
pub fn tor_dimension(m: &GradedModulePresentation, i: usize, j: i64) -> Result<usize> {
    let n = m.nvars;
    if i > n {
        return Ok(0);
    }
    let d = j - i as i64;
    let mid = m.dim(d)?;
    let out_rank = if i >= 1 {
        koszul_rank(i, &m.actions_at(d)?, mid, m.dim(d + 1)?)?
    } else {
        0
    };
    let in_rank = if i < n {
        koszul_rank(i + 1, &m.actions_at(d - 1)?, m.dim(d - 1)?, mid)?
    } else {
        0
    };
    let total = binomial(n, i) * mid;
    total
        .checked_sub(out_rank + in_rank)
        .ok_or_else(|| Error::Consistency(format!("Koszul ranks exceed the middle dimension at ({i}, {j})")))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum EntryTag {
    Computed,
    Expected,
}

impl fmt::Display for EntryTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            EntryTag::Computed => "computed",
            EntryTag::Expected => "expected",
        })
    }
}

/// Betti numbers keyed by `(i, j)`. Missing entries are zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BettiTable {
    r: usize,
    entries: BTreeMap<(usize, i64), (u64, EntryTag)>,
}

impl BettiTable {
    pub fn new(r: usize) -> Self {
        BettiTable {
            r,
            entries: BTreeMap::new(),
        }
    }

    pub fn ambient_dim(&self) -> usize {
        self.r
    }

    pub fn set(&mut self, i: usize, j: i64, value: u64, tag: EntryTag) {
        self.entries.insert((i, j), (value, tag));
    }

    pub fn get(&self, i: usize, j: i64) -> u64 {
        self.entries.get(&(i, j)).map_or(0, |e| e.0)
    }

    pub fn tag(&self, i: usize, j: i64) -> Option<EntryTag> {
        self.entries.get(&(i, j)).map(|e| e.1)
    }

    /// Nonzero entries sorted by `(j - i, i)`.
    pub fn nonzero(&self) -> Vec<(usize, i64, u64, EntryTag)> {
        let mut v: Vec<_> = self
            .entries
            .iter()
            .filter(|(_, e)| e.0 != 0)
            .map(|(&(i, j), &(x, t))| (i, j, x, t))
            .collect();
        v.sort_by_key(|&(i, j, _, _)| (j - i as i64, i));
        v
    }

    /// `Σ_i (-1)^i β_{i,j}`.
    pub fn alternating_sum(&self, j: i64) -> i64 {
        self.entries
            .iter()
            .filter(|(&(_, jj), _)| jj == j)
            .map(|(&(i, _), e)| if i % 2 == 0 { e.0 as i64 } else { -(e.0 as i64) })
            .sum()
    }

    /// `betti r=<r>` then `i j value tag` per nonzero entry.
    pub fn to_text(&self) -> String {
        let mut out = format!("betti r={}\n", self.r);
        for (i, j, x, t) in self.nonzero() {
            let _ = writeln!(out, "{i} {j} {x} {t}");
        }
        out
    }

    pub fn from_text(text: &str) -> Result<BettiTable> {
        let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#'));
        let header = lines.next().ok_or_else(|| Error::Parse("empty betti table".into()))?;
        let r = header
            .strip_prefix("betti r=")
            .and_then(|x| x.parse().ok())
            .ok_or_else(|| Error::Parse(format!("bad betti header `{header}`")))?;
        let mut table = BettiTable::new(r);
        for line in lines {
            let f: Vec<&str> = line.split_whitespace().collect();
            let parsed = (f.len() == 4)
                .then(|| Some((f[0].parse().ok()?, f[1].parse().ok()?, f[2].parse().ok()?)))
                .flatten();
            let (i, j, x) = parsed.ok_or_else(|| Error::Parse(format!("bad betti entry `{line}`")))?;
            let tag = match f[3] {
                "computed" => EntryTag::Computed,
                "expected" => EntryTag::Expected,
                other => return Err(Error::Parse(format!("unknown tag `{other}`"))),
            };
            table.set(i, j, x, tag);
        }
        Ok(table)
    }

    /// Rows `j - i`, columns `i`, `.` for zero.
    pub fn diagram(&self) -> String {
        let nz = self.nonzero();
        let Some(max_i) = nz.iter().map(|e| e.0).max() else {
            return "(zero)\n".into();
        };
        let rows: Vec<i64> = {
            let lo = nz.iter().map(|e| e.1 - e.0 as i64).min().unwrap();
            let hi = nz.iter().map(|e| e.1 - e.0 as i64).max().unwrap();
            (lo..=hi).collect()
        };
        let cell = |i: usize, row: i64| {
            let x = self.get(i, row + i as i64);
            if x == 0 {
                ".".to_string()
            } else {
                x.to_string()
            }
        };
        let width = nz.iter().map(|e| e.2.to_string().len()).max().unwrap().max(max_i.to_string().len());
        let mut out = format!("{:>4} ", "");
        for i in 0..=max_i {
            let _ = write!(out, " {i:>width$}");
        }
        out.push('\n');
        for row in rows {
            let _ = write!(out, "{:>4}:", row);
            for i in 0..=max_i {
                let _ = write!(out, " {:>width$}", cell(i, row));
            }
            out.push('\n');
        }
        out
    }
}

/// All `β_{i,j}` with `i <= i_max` and `j <= j_max`.
pub fn betti_table(m: &GradedModulePresentation, i_max: usize, j_max: i64) -> Result<BettiTable> {
    let mut table = BettiTable::new(m.nvars - 1);
    let (d0, _) = m.window();
    for i in 0..=i_max.min(m.nvars) {
        // Tor_i(M)_j vanishes for j < i + d0
        for j in (i as i64 + d0)..=j_max {
            table.set(i, j, tor_dimension(m, i, j)? as u64, EntryTag::Computed);
        }
    }
    Ok(table)
}

/// `β_{i,j}(S/I_Γ)` computed as `dim Tor_(r-i)(ω_Γ)_(r+1-j)`.
pub fn betti_via_duality(config: &PointConfiguration, i: usize, j: i64) -> Result<usize> {
    let r = config.ambient_dim();
    if i > r {
        return Ok(0);
    }
    let gamma = config.len();
    // ω_(-t) = 0 once the points impose independent conditions in degree t
    let t = (0..=gamma)
        .find(|&d| hilbert_function(config, d) == gamma)
        .expect("points are separated in degree γ - 1") as i64;
    let lo = (i as i64 - j).min(-t);
    let hi = i as i64 - j + 2;
    let omega = canonical_module_presentation(config, lo, hi)?;
    tor_dimension(&omega, r - i, r as i64 + 1 - j)
}

/// Coordinate ring of the rational normal curve of degree `c`: `M_d = k[s,t]_(cd)`
/// with `x_k` acting as multiplication by `s^(c-k) t^k`.
pub fn rational_normal_curve_presentation(p: u32, c: usize, d_max: usize) -> Result<GradedModulePresentation> {
    let dims: Vec<usize> = (0..=d_max).map(|d| c * d + 1).collect();
    let actions = (0..=c)
        .map(|k| {
            (0..d_max)
                .map(|d| {
                    let mut a = FieldMatrix::zeros(p, dims[d + 1], dims[d]);
                    for e in 0..dims[d] {
                        a.set(e + k, e, 1);
                    }
                    a
                })
                .collect()
        })
        .collect();
    GradedModulePresentation::new(p, c + 1, 0, dims, actions)
}
