//! Expected Betti numbers of general points, the `(s, δ)` parameter family,
//! and the end-to-end check that a computed Betti number exceeds the expected one.
//!
//! For `γ` general points in `P^r` the Hilbert series is
//! `1 + (r+1)t + γ t^2/(1-t) = Σ_j b_j t^j / (1-t)^(r+1)`, and `b_j` is the
//! alternating sum `Σ_i (-1)^i β_{i,j}`. With 2-regularity only
//! `β_{j-2,j}` and `β_{j-1,j}` can be nonzero, and the expected table puts
//! all of `b_j` into one of them.

use std::fmt::{self, Write as _};
use std::time::Instant;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::betti::{betti_table, betti_via_duality, BettiTable, EntryTag};
use crate::bgg::{max_irredundant_quotient_generation, pairing_complex};
use crate::error::{Error, Result};
use crate::exactfield::{check_modulus, derive_seed};
use crate::multilinear::binomial;
use crate::points::{
    canonical_pairing, gale_transform, hilbert_function, ideal_piece, is_lgp, quotient_module_presentation,
    random_configuration, CheckMode, PointConfiguration, MAX_ATTEMPTS,
};

fn big_binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

/// `b_0, ..., b_(r+2)`: coefficients of `(1+(r+1)t)(1-t)^(r+1) + γ t^2 (1-t)^r`.
pub fn hilbert_numerator(r: usize, gamma: usize) -> Vec<BigInt> {
    let r64 = r as u64;
    let mut b = vec![BigInt::zero(); r + 3];
    for k in 0..=r + 1 {
        let c = big_binomial(r64 + 1, k as u64);
        let c = if k % 2 == 1 { -c } else { c };
        b[k + 1] += &c * BigInt::from(r + 1);
        b[k] += c;
    }
    for k in 0..=r {
        let c = big_binomial(r64, k as u64) * BigInt::from(gamma);
        b[k + 2] += if k % 2 == 1 { -c } else { c };
    }
    b
}

/// Expected `(β̃_{j-2,j}, β̃_{j-1,j})` for `j >= 2`.
pub fn expected_pair(b: &[BigInt], j: usize) -> (BigInt, BigInt) {
    let signed = if j % 2 == 0 { b[j].clone() } else { -b[j].clone() };
    if signed.is_positive() {
        (signed, BigInt::zero())
    } else {
        (BigInt::zero(), -signed)
    }
}

/// The table predicted for `γ` general points in `P^r`, assuming the
/// Hilbert function `1, r+1, γ, γ, ...`.
pub fn expected_betti(r: usize, gamma: usize) -> Result<BettiTable> {
    if gamma < r + 2 {
        return Err(Error::Parameter(format!("need γ >= r+2 = {}, got {gamma}", r + 2)));
    }
    let b = hilbert_numerator(r, gamma);
    let mut t = BettiTable::new(r);
    t.set(0, 0, 1, EntryTag::Expected);
    for j in 2..b.len() {
        let (lo, hi) = expected_pair(&b, j);
        let to_u64 = |x: &BigInt| {
            x.to_u64()
                .ok_or_else(|| Error::Parameter(format!("expected entry in degree {j} does not fit in 64 bits")))
        };
        t.set(j - 2, j as i64, to_u64(&lo)?, EntryTag::Expected);
        t.set(j - 1, j as i64, to_u64(&hi)?, EntryTag::Expected);
    }
    Ok(t)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MrcParameters {
    pub s: usize,
    pub delta: usize,
    pub r: usize,
    pub gamma: usize,
}

/// Largest `δ` in the family for a given `s`.
pub fn max_delta(s: usize) -> usize {
    binomial(s, 2) - if s <= 4 { 1 } else { 2 }
}

/// `r = binom(s+1, 2) + δ`, `γ = r + s + 2`.
pub fn params_from_s_delta(s: usize, delta: usize) -> Result<MrcParameters> {
    if s < 3 {
        return Err(Error::Parameter(format!("s = {s} violates s >= 3")));
    }
    if delta > max_delta(s) {
        return Err(Error::Parameter(format!(
            "δ = {delta} violates δ <= binom(s,2) - {} = {} for s = {s}",
            if s <= 4 { 1 } else { 2 },
            max_delta(s)
        )));
    }
    let r = binomial(s + 1, 2) + delta;
    Ok(MrcParameters {
        s,
        delta,
        r,
        gamma: r + s + 2,
    })
}

/// Integers `γ` with `r + 2 + √(r+2) <= γ <= r + (3 + √(8r+1))/2`, plus the
/// two exceptional pairs `(8, 13)` and `(15, 21)`.
pub fn gamma_range(r: usize) -> Result<Vec<usize>> {
    if r < 6 || r == 9 {
        return Err(Error::Parameter(format!("r = {r} is outside the range r >= 6, r != 9")));
    }
    let (r, mut out) = (r as i64, Vec::new());
    for gamma in r + 2..=3 * r + 4 {
        let a = gamma - r - 2;
        let lower = a * a >= r + 2;
        let x = 2 * (gamma - r) - 3;
        let upper = x < 0 || x * x <= 8 * r + 1;
        if lower && upper {
            out.push(gamma as usize);
        }
    }
    for (rr, g) in [(8, 13), (15, 21)] {
        if r == rr && !out.contains(&g) {
            out.push(g);
        }
    }
    out.sort_unstable();
    Ok(out)
}

/// `(binom(s+δ, δ), max(q, 0))` where `q` is the closed form
/// `(2δ+4-s^2+s)/(s^2-s+2δ+4) * binom(binom(s+1,2)+δ, s)`.
/// Accepts any `s >= 1` so that scans can go past the family.
pub fn predicted_defect(s: usize, delta: usize) -> Result<(BigInt, BigInt)> {
    let lower = big_binomial((s + delta) as u64, delta as u64);
    let (s_i, d_i) = (s as i64, delta as i64);
    let num = BigInt::from(2 * d_i + 4 - s_i * s_i + s_i);
    let den = BigInt::from(s_i * s_i - s_i + 2 * d_i + 4);
    let top = num * big_binomial((binomial(s + 1, 2) + delta) as u64, s as u64);
    let (q, rem) = top.div_rem(&den);
    if !rem.is_zero() {
        return Err(Error::Consistency(format!("closed form is not integral at (s, δ) = ({s}, {delta})")));
    }
    Ok((lower, q.max(BigInt::zero())))
}

/// One row of the `(s, δ)` scan.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScanRow {
    pub s: usize,
    pub delta: usize,
    pub lower_bound: BigInt,
    pub expected: BigInt,
    pub exceeds: bool,
    pub in_family: bool,
}

/// Every `3 <= s <= s_max` and `0 <= δ <= binom(s,2) + s`.
pub fn scan(s_max: usize) -> Result<Vec<ScanRow>> {
    let mut rows = Vec::new();
    for s in 3..=s_max {
        for delta in 0..=binomial(s, 2) + s {
            let (lower_bound, expected) = predicted_defect(s, delta)?;
            rows.push(ScanRow {
                s,
                delta,
                exceeds: lower_bound > expected,
                in_family: delta <= max_delta(s),
                lower_bound,
                expected,
            });
        }
    }
    Ok(rows)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Confirmed,
    NotConfirmed,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Confirmed => "CONFIRMED",
            Verdict::NotConfirmed => "NOT_CONFIRMED",
        })
    }
}

#[derive(Clone, Debug)]
pub struct VerificationReport {
    pub params: MrcParameters,
    pub prime: u32,
    pub seed: u64,
    pub retries: usize,
    /// `h_Γ(0..=3)`.
    pub hilbert: Vec<usize>,
    pub expected: u64,
    pub lower_bound: u64,
    pub computed: u64,
    pub verdict: Verdict,
    pub millis: u128,
    pub table: Option<(BettiTable, BettiTable)>,
}

impl VerificationReport {
    /// `key=value` lines, then the computed and expected diagrams when present.
    pub fn to_text(&self) -> String {
        let hf: Vec<String> = self.hilbert.iter().map(|h| h.to_string()).collect();
        let mut out = String::new();
        let m = &self.params;
        let _ = writeln!(out, "s={}", m.s);
        let _ = writeln!(out, "delta={}", m.delta);
        let _ = writeln!(out, "r={}", m.r);
        let _ = writeln!(out, "gamma={}", m.gamma);
        let _ = writeln!(out, "prime={}", self.prime);
        let _ = writeln!(out, "seed={}", self.seed);
        let _ = writeln!(out, "retries={}", self.retries);
        let _ = writeln!(out, "hf={}", hf.join(","));
        let _ = writeln!(out, "expected={}", self.expected);
        let _ = writeln!(out, "lower_bound={}", self.lower_bound);
        let _ = writeln!(out, "computed={}", self.computed);
        let _ = writeln!(out, "verdict={}", self.verdict);
        let _ = writeln!(out, "millis={}", self.millis);
        if let Some((computed, expected)) = &self.table {
            out.push_str("# computed\n");
            out.push_str(&computed.diagram());
            out.push_str("# expected\n");
            out.push_str(&expected.diagram());
        }
        out
    }
}

/// Why an attempt was rejected, used in the final diagnostic.
fn attempt(params: &MrcParameters, p: u32, seed: u64) -> std::result::Result<(PointConfiguration, PointConfiguration), String> {
    let (s, r, gamma) = (params.s, params.r, params.gamma);
    let gp = random_configuration(s, gamma, p, seed).ok_or("drew a zero point")?;
    if !is_lgp(&gp, CheckMode::default_for(s, gamma)) {
        return Err("Γ' is not in linearly general position".into());
    }
    if ideal_piece(&gp, 2).ncols() != 0 {
        return Err("Γ' lies on a quadric".into());
    }
    let g = gale_transform(&gp).map_err(|e| e.to_string())?;
    if !is_lgp(&g, CheckMode::default_for(r, gamma)) {
        return Err("Γ is not in linearly general position".into());
    }
    if hilbert_function(&g, 2) != gamma {
        return Err("Γ does not impose independent conditions on quadrics".into());
    }
    Ok((gp, g))
}

/// Generates `Γ'` in `P^s`, passes to its Gale transform `Γ` in `P^r`, and
/// compares `β_{r-s, r-s+2}(S/I_Γ)` with the lower bound from the pairing
/// complex and with the expected value. With `full_table` (only for
/// `r <= 8`) the whole table of `S/I_Γ` is computed as well.
pub fn verify_counterexample(s: usize, delta: usize, p: u32, seed: u64, full_table: bool) -> Result<VerificationReport> {
    let start = Instant::now();
    let params = params_from_s_delta(s, delta)?;
    check_modulus(p as u64)?;
    if !crate::exactfield::is_prime(p as u64) {
        return Err(Error::BadModulus(p as u64));
    }
    if full_table && params.r > 8 {
        return Err(Error::Parameter("full tables are limited to r <= 8".into()));
    }
    let (r, gamma) = (params.r, params.gamma);
    let mut last = String::new();
    let mut found = None;
    for retry in 0..MAX_ATTEMPTS {
        match attempt(&params, p, derive_seed(seed, retry)) {
            Ok(pair) => {
                found = Some((retry, pair));
                break;
            }
            Err(why) => last = why,
        }
    }
    let (retries, (gp, g)) = found.ok_or_else(|| Error::Generation {
        attempts: MAX_ATTEMPTS,
        reason: last,
    })?;

    let pairing = canonical_pairing(&gp)?;
    let (w, u, v) = pairing.mu.dims();
    if (w, u, v) != (s + 1, delta + 1, r + 1) {
        return Err(Error::Consistency(format!(
            "pairing has dimensions {:?}, expected {:?}",
            (w, u, v),
            (s + 1, delta + 1, r + 1)
        )));
    }
    let quotient = max_irredundant_quotient_generation(&pairing_complex(&pairing.mu)?)?;
    let lower_bound = quotient.ranks()[s] as u64;
    let (closed_lower, _) = predicted_defect(s, delta)?;
    if BigInt::from(lower_bound) != closed_lower {
        return Err(Error::Consistency(format!(
            "last term of the irredundant quotient has rank {lower_bound}, expected {closed_lower}"
        )));
    }
    let (i, j) = (r - s, r - s + 2);
    let expected = expected_betti(r, gamma)?.get(i, j as i64);
    let computed = betti_via_duality(&g, i, j as i64)? as u64;
    let hilbert = (0..=3).map(|d| hilbert_function(&g, d)).collect();
    let table = if full_table {
        let m = quotient_module_presentation(&g, r + 2)?;
        Some((betti_table(&m, r, r as i64 + 2)?, expected_betti(r, gamma)?))
    } else {
        None
    };
    let verdict = if computed >= lower_bound && lower_bound > expected {
        Verdict::Confirmed
    } else {
        Verdict::NotConfirmed
    };
    Ok(VerificationReport {
        params,
        prime: p,
        seed,
        retries,
        hilbert,
        expected,
        lower_bound,
        computed,
        verdict,
        millis: start.elapsed().as_millis(),
        table,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FailureMechanism {
    LinearStrand,
    EagonNorthcott,
}

impl fmt::Display for FailureMechanism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FailureMechanism::LinearStrand => "linear-strand",
            FailureMechanism::EagonNorthcott => "Eagon-Northcott",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CurveVerdict {
    /// `g < 4`: no statement.
    Withheld,
    /// `2g+2 <= d < 3g-2`: neither argument applies.
    NotEstablished,
    Fails(FailureMechanism),
}

/// Numbers attached to a curve of genus `g` embedded by a line bundle of degree `d`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CurveArithmetic {
    pub g: usize,
    pub d: usize,
    /// `binom(d-2g+1, g-1)`.
    pub lower_bound: BigInt,
    /// `β_{d-2g,d-2g+2} - β_{d-2g+1,d-2g+2}`.
    pub alt_difference: BigInt,
    /// `d - 2g + 1`, for `g >= 4`.
    pub en_bound: Option<usize>,
    pub verdict: CurveVerdict,
}

impl CurveArithmetic {
    /// One line of `key=value` fields.
    pub fn to_text(&self) -> String {
        let (fails, mechanism) = match self.verdict {
            CurveVerdict::Withheld => ("withheld".to_string(), "none".to_string()),
            CurveVerdict::NotEstablished => ("unknown".to_string(), "none".to_string()),
            CurveVerdict::Fails(m) => ("true".to_string(), m.to_string()),
        };
        let en = self.en_bound.map_or("withheld".to_string(), |b| b.to_string());
        format!(
            "g={} d={} mrc_fails={fails} mechanism={mechanism} lower_bound={} alt_difference={} en_bound={en}\n",
            self.g, self.d, self.lower_bound, self.alt_difference
        )
    }
}

pub fn curve_arithmetic(g: usize, d: usize) -> Result<CurveArithmetic> {
    if g < 2 {
        return Err(Error::Parameter(format!("g = {g} violates g >= 2")));
    }
    if d < 2 * g + 2 {
        return Err(Error::Parameter(format!("d = {d} violates d >= 2g+2 = {}", 2 * g + 2)));
    }
    let (gi, di) = (g as i64, d as i64);
    let lower_bound = big_binomial((d - 2 * g + 1) as u64, (g - 1) as u64);
    let top = BigInt::from(di - gi * gi + gi) * big_binomial((d - g - 1) as u64, (g - 1) as u64);
    let (alt_difference, rem) = top.div_rem(&BigInt::from(di - 2 * gi + 2));
    if !rem.is_zero() {
        return Err(Error::Consistency(format!("alternating sum is not integral at (g, d) = ({g}, {d})")));
    }
    let en_bound = (g >= 4).then_some(d - 2 * g + 1);
    let verdict = if g < 4 {
        CurveVerdict::Withheld
    } else if d + 2 >= 3 * g && d <= g * g - g {
        CurveVerdict::Fails(FailureMechanism::LinearStrand)
    } else if d > g * g - g {
        CurveVerdict::Fails(FailureMechanism::EagonNorthcott)
    } else {
        CurveVerdict::NotEstablished
    };
    Ok(CurveArithmetic {
        g,
        d,
        lower_bound,
        alt_difference,
        en_bound,
        verdict,
    })
}
