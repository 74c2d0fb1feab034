//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use num_bigint::BigInt;

use extmrc::betti::{betti_table, rational_normal_curve_presentation, BettiTable};
use extmrc::bgg::{
    binary_form_multiplication, is_generated_in_degree_zero, is_irredundant, last_term_preserved, linear_complex,
    max_irredundant_quotient_annihilator, max_irredundant_quotient_generation, minors_span, pairing_complex,
    pairing_complex_via_module, random_exterior_module, random_pairing, restrict_complex, strand_homology,
    LinearComplex, MinorSampling,
};
use extmrc::exactfield::{FieldMatrix, SeededRng};
use extmrc::mrc::{
    curve_arithmetic, expected_betti, gamma_range, hilbert_numerator, max_delta, params_from_s_delta, scan,
    verify_counterexample, CurveVerdict, FailureMechanism, Verdict,
};
use extmrc::multilinear::binomial;
use extmrc::points::{
    canonical_pairing, gale_transform, hilbert_function, quotient_module_presentation, random_lgp_config, CheckMode,
};

const P: u32 = 32003;

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(start: Instant, limit: Duration) -> Result<(), String> {
    ensure(start.elapsed() < limit, || format!("took {:?}, limit {limit:?}", start.elapsed()))
}

fn example_complex() -> Outcome {
    let start = Instant::now();
    let mu = binary_form_multiplication(P, 2, 2).map_err(|e| e.to_string())?;
    let f = pairing_complex(&mu).map_err(|e| e.to_string())?;
    let fp = max_irredundant_quotient_generation(&f).map_err(|e| e.to_string())?;
    let h1 = strand_homology(&f, 1, 1).map_err(|e| e.to_string())?;
    let last = last_term_preserved(&mu).map_err(|e| e.to_string())?;
    ensure(f.ranks() == [3, 9, 6], || format!("F ranks {:?}", f.ranks()))?;
    ensure(fp.ranks() == [3, 8, 6], || format!("F' ranks {:?}", fp.ranks()))?;
    ensure(last, || "last term not preserved".into())?;
    ensure(h1 == 1, || format!("H_1 in degree 1 has dimension {h1}"))?;
    within(start, Duration::from_secs(1))?;
    Ok(format!("F=(3,9,6) F'=(3,8,6) H1_1={h1} in {:?}", start.elapsed()))
}

fn quartic_table() -> Outcome {
    let start = Instant::now();
    let m = rational_normal_curve_presentation(P, 4, 5).map_err(|e| e.to_string())?;
    let t = betti_table(&m, 4, 4).map_err(|e| e.to_string())?;
    let got = (t.get(1, 2), t.get(2, 3), t.get(3, 4));
    ensure(got == (6, 8, 3), || format!("linear strand {got:?}"))?;
    within(start, Duration::from_secs(5))?;
    Ok(format!("β_12,β_23,β_34 = {got:?}"))
}

fn verify_seeds(s: usize, delta: usize, seeds: &[u64], limit: Duration, check: impl Fn(u64, u64, u64) -> Result<(), String>) -> Outcome {
    let mut lines = Vec::new();
    for &seed in seeds {
        let start = Instant::now();
        let rep = verify_counterexample(s, delta, P, seed, false).map_err(|e| format!("seed {seed}: {e}"))?;
        let m = rep.params;
        let expected_hf = vec![1, m.r + 1, m.gamma, m.gamma];
        ensure(rep.hilbert == expected_hf, || format!("seed {seed}: hf {:?}", rep.hilbert))?;
        check(rep.expected, rep.lower_bound, rep.computed).map_err(|e| format!("seed {seed}: {e}"))?;
        ensure(rep.verdict == Verdict::Confirmed, || format!("seed {seed}: {}", rep.verdict))?;
        within(start, limit).map_err(|e| format!("seed {seed}: {e}"))?;
        lines.push(format!("seed {seed}: computed={} ({} ms)", rep.computed, rep.millis));
    }
    Ok(lines.join(", "))
}

fn eleven_points() -> Outcome {
    verify_seeds(3, 0, &[1, 2, 3, 4, 5], Duration::from_secs(10), |expected, _, computed| {
        ensure(expected == 0, || format!("expected {expected}"))?;
        ensure(computed >= 1, || format!("computed {computed}"))
    })
}

fn thirteen_points() -> Outcome {
    verify_seeds(3, 2, &[1, 2, 3], Duration::from_secs(60), |expected, _, computed| {
        ensure(expected == 8, || format!("expected {expected}"))?;
        ensure(computed >= 10, || format!("computed {computed}"))
    })
}

fn twenty_one_points() -> Outcome {
    verify_seeds(4, 5, &[1], Duration::from_secs(1800), |expected, _, computed| {
        ensure(expected == 105, || format!("expected {expected}"))?;
        ensure(computed >= 126, || format!("computed {computed}"))
    })
}

/// `H_i(F)` vanishes in the degree of the generators of `F_i` for all `i >= 1`.
fn homology_irredundant(f: &LinearComplex) -> bool {
    (1..=f.length()).all(|i| f.ranks()[i] == 0 || strand_homology(f, i, f.twist() + i as i64).unwrap() == 0)
}

fn irredundancy_equivalence() -> Outcome {
    let mut rng = SeededRng::new(2024);
    let (mut yes, mut no) = (0, 0);
    for n in 0..120 {
        let m = random_exterior_module(P, &mut rng, 4, 5, 4);
        let by_homology = homology_irredundant(&linear_complex(&m));
        let by_generation = is_generated_in_degree_zero(&m, true);
        ensure(by_homology == by_generation, || {
            format!("module {n} dims {:?}: homology {by_homology}, generation {by_generation}", m.dims())
        })?;
        if by_homology {
            yes += 1;
        } else {
            no += 1;
        }
    }
    ensure(yes > 0 && no > 0, || format!("one-sided sample: {yes} irredundant, {no} not"))?;
    Ok(format!("120 modules agree ({yes} irredundant, {no} not)"))
}

fn quotient_equivalence() -> Outcome {
    let mut rng = SeededRng::new(2024);
    let mut idem = 0;
    for n in 0..120 {
        let m = random_exterior_module(P, &mut rng, 4, 5, 4);
        let f = linear_complex(&m);
        let g = max_irredundant_quotient_generation(&f).map_err(|e| e.to_string())?;
        let a = max_irredundant_quotient_annihilator(&f).map_err(|e| e.to_string())?;
        ensure(g.ranks() == a.ranks(), || format!("module {n}: {:?} vs {:?}", g.ranks(), a.ranks()))?;
        ensure(is_irredundant(&g), || format!("module {n}: quotient is redundant"))?;
        let again = max_irredundant_quotient_generation(&g).map_err(|e| e.to_string())?;
        ensure(again == g, || format!("module {n}: not idempotent"))?;
        if is_irredundant(&f) {
            ensure(g.ranks() == f.ranks(), || format!("module {n}: irredundant input shrank"))?;
            idem += 1;
        }
    }
    Ok(format!("120 modules agree, {idem} irredundant inputs unchanged"))
}

fn construction_equality() -> Outcome {
    let mut rng = SeededRng::new(77);
    for n in 0..60 {
        let mu = random_pairing(101, &mut rng, 4, 6);
        let direct = pairing_complex(&mu).map_err(|e| e.to_string())?;
        let via = pairing_complex_via_module(&mu).map_err(|e| e.to_string())?;
        ensure(direct == via, || format!("tensor {n} {mu:?}: constructions differ"))?;
    }
    Ok("60 tensors over GF(101) agree entry for entry".into())
}

fn minors_and_last_term() -> Outcome {
    let mut dims = Vec::new();
    for delta in 0..=2 {
        let m = params_from_s_delta(3, delta).map_err(|e| e.to_string())?;
        for seed in 1..=5u64 {
            let config = random_lgp_config(3, m.gamma, P, seed, CheckMode::Exhaustive).map_err(|e| e.to_string())?;
            let mu = canonical_pairing(&config).map_err(|e| format!("δ={delta} seed {seed}: {e}"))?.mu;
            let (w, u, _) = mu.dims();
            let span = minors_span(&mu, w - 1, MinorSampling::default()).map_err(|e| e.to_string())?;
            let target = binomial(w - 1 + u - 1, u - 1);
            ensure(span.dimension == target, || {
                format!("δ={delta} seed {seed}: minors span {} of {target}", span.dimension)
            })?;
            let last = last_term_preserved(&mu).map_err(|e| e.to_string())?;
            ensure(last, || format!("δ={delta} seed {seed}: last term lost"))?;
        }
        dims.push(binomial(3 + delta, delta));
    }
    Ok(format!("minor spans {dims:?} reached for δ = 0,1,2 over 5 seeds each"))
}

fn gale_involution() -> Outcome {
    let mut rng = SeededRng::new(5);
    for n in 0..100 {
        let r = 1 + rng.next_below(6) as usize;
        let gamma = r + 3 + rng.next_below((12 - r - 2) as u64) as usize;
        let config = random_lgp_config(r, gamma, P, rng.next_u64(), CheckMode::Exhaustive).map_err(|e| e.to_string())?;
        let dual = gale_transform(&config).map_err(|e| format!("config {n}: {e}"))?;
        let back = gale_transform(&dual).map_err(|e| format!("config {n}: {e}"))?;
        let same = back.coords().row_space_equal(config.coords()).map_err(|e| e.to_string())?;
        ensure(same, || format!("config {n} ({r}, {gamma}): row spaces differ"))?;
    }
    Ok("100 configurations".into())
}

fn random_projection(rng: &mut SeededRng, rows: usize, cols: usize) -> FieldMatrix {
    loop {
        let t = FieldMatrix::from_fn(P, rows, cols, |_, _| rng.next_residue(P));
        if t.rank() == rows {
            return t;
        }
    }
}

fn rigidity() -> Outcome {
    let mut rng = SeededRng::new(99);
    let (mut done, mut yes, mut no) = (0, 0, 0);
    while done < 50 {
        let m = random_exterior_module(P, &mut rng, 4, 5, 4);
        let f = max_irredundant_quotient_generation(&linear_complex(&m)).map_err(|e| e.to_string())?;
        if f.length() == 0 || f.ranks()[1] == 0 || f.nvars() < 2 {
            continue;
        }
        let rows = 1 + rng.next_below(f.nvars() as u64 - 1) as usize;
        let g = restrict_complex(&f, &random_projection(&mut rng, rows, f.nvars())).map_err(|e| e.to_string())?;
        let irr = is_irredundant(&g);
        let h1 = strand_homology(&g, 1, g.twist() + 1).map_err(|e| e.to_string())?;
        ensure(irr == (h1 == 0), || format!("instance {done}: irredundant {irr}, H_1 {h1}"))?;
        if irr {
            yes += 1;
        } else {
            no += 1;
        }
        done += 1;
    }
    Ok(format!("50 instances agree ({yes} irredundant, {no} not)"))
}

fn numerator_consistency() -> Outcome {
    let mut checked = Vec::new();
    let mut tables: Vec<(usize, usize, BettiTable)> = Vec::new();
    for (r, gamma, seed) in [(4, 7, 1), (5, 9, 1), (5, 9, 2), (6, 11, 1), (6, 11, 2), (6, 10, 3)] {
        let config = random_lgp_config(r, gamma, P, seed, CheckMode::Exhaustive).map_err(|e| e.to_string())?;
        let hf: Vec<usize> = (0..=3).map(|d| hilbert_function(&config, d)).collect();
        let generic: Vec<usize> = (0..=3).map(|d| binomial(r + d, d).min(gamma)).collect();
        ensure(hf == generic, || format!("({r},{gamma}) seed {seed}: Hilbert function {hf:?}"))?;
        let m = quotient_module_presentation(&config, r + 3).map_err(|e| e.to_string())?;
        let t = betti_table(&m, r + 1, r as i64 + 2).map_err(|e| e.to_string())?;
        tables.push((r, gamma, t));
    }
    let rep = verify_counterexample(3, 0, P, 11, true).map_err(|e| e.to_string())?;
    let (full, _) = rep.table.ok_or("no table")?;
    tables.push((6, 11, full));
    for (r, gamma, t) in &tables {
        let b = hilbert_numerator(*r, *gamma);
        for (j, bj) in b.iter().enumerate() {
            let alt = BigInt::from(t.alternating_sum(j as i64));
            ensure(&alt == bj, || format!("({r},{gamma}) degree {j}: Σ(-1)^i β = {alt}, b = {bj}"))?;
        }
        checked.push(format!("({r},{gamma})"));
    }
    // the expected tables satisfy the same identity by construction
    for (r, gamma) in [(8, 13), (15, 21)] {
        let e = expected_betti(r, gamma).map_err(|e| e.to_string())?;
        let b = hilbert_numerator(r, gamma);
        for (j, bj) in b.iter().enumerate() {
            ensure(&BigInt::from(e.alternating_sum(j as i64)) == bj, || format!("expected ({r},{gamma}) degree {j}"))?;
        }
    }
    Ok(format!("tables {}", checked.join(" ")))
}

fn parameter_arithmetic() -> Outcome {
    for r in (6..=100).filter(|&r| r != 9) {
        let mut from_family: Vec<usize> = (3..=r)
            .flat_map(|s| (0..=max_delta(s)).map(move |d| (s, d)))
            .filter_map(|(s, d)| params_from_s_delta(s, d).ok())
            .filter(|m| m.r == r)
            .map(|m| m.gamma)
            .collect();
        from_family.sort_unstable();
        let range = gamma_range(r).map_err(|e| e.to_string())?;
        ensure(range == from_family, || format!("r={r}: range {range:?}, family {from_family:?}"))?;
    }
    let rows = scan(40).map_err(|e| e.to_string())?;
    let bad: Vec<_> = rows.iter().filter(|row| row.exceeds != row.in_family).collect();
    ensure(bad.is_empty(), || format!("scan mismatches at {:?}", bad.iter().map(|r| (r.s, r.delta)).collect::<Vec<_>>()))?;
    let exceeding = rows.iter().filter(|r| r.exceeds).count();
    Ok(format!("ranges match for 6 <= r <= 100; {exceeding} of {} scanned pairs exceed", rows.len()))
}

fn curve_checks() -> Outcome {
    let start = Instant::now();
    let a = curve_arithmetic(4, 12).map_err(|e| e.to_string())?;
    ensure(a.alt_difference == BigInt::from(0) && a.lower_bound == BigInt::from(10), || format!("{a:?}"))?;
    ensure(a.verdict == CurveVerdict::Fails(FailureMechanism::LinearStrand), || format!("{a:?}"))?;
    let b = curve_arithmetic(4, 13).map_err(|e| e.to_string())?;
    ensure(b.alt_difference == BigInt::from(8) && b.en_bound == Some(6), || format!("{b:?}"))?;
    ensure(matches!(b.verdict, CurveVerdict::Fails(_)), || format!("{b:?}"))?;
    let mut count = 0;
    for g in 4..=20 {
        for d in 2 * g + 2..=g * g + g {
            curve_arithmetic(g, d).map_err(|e| e.to_string())?;
            count += 1;
        }
    }
    within(start, Duration::from_secs(1))?;
    Ok(format!("{count} (g,d) pairs integral"))
}

fn main() {
    let criteria: Vec<(&str, fn() -> Outcome)> = vec![
        ("complex of binary quadric multiplication", example_complex),
        ("rational normal quartic linear strand", quartic_table),
        ("11 points in P^6, five seeds", eleven_points),
        ("13 points in P^8, three seeds", thirteen_points),
        ("21 points in P^15", twenty_one_points),
        ("irredundancy by homology vs generation", irredundancy_equivalence),
        ("quotient constructions agree, idempotent", quotient_equivalence),
        ("direct vs module construction of pairing complex", construction_equality),
        ("minor spans and last term for s=3", minors_and_last_term),
        ("Gale transform is an involution", gale_involution),
        ("linear rigidity under restriction", rigidity),
        ("alternating sums match Hilbert numerator", numerator_consistency),
        ("gamma ranges and exhaustive scan", parameter_arithmetic),
        ("curve arithmetic", curve_checks),
    ];
    let mut failed = 0;
    for (n, (name, f)) in criteria.into_iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panic: {msg}"))
        });
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {:>2}: PASS  {name} [{secs:.2}s] {detail}", n + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2}: FAIL  {name} [{secs:.2}s] {why}", n + 1);
            }
        }
    }
    println!("acceptance: {} failed", failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
