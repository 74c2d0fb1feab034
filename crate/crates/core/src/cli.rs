//! The `extmrc` command line.
//!
//! Every output starts with a `# extmrc ...` line listing the resolved flags,
//! defaults included, so a run can be repeated from its output alone.
//! Exit codes: 0 success, 1 verification or generation failure, 2 usage or parse error.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::betti::{betti_table, betti_via_duality, tor_dimension, BettiTable, EntryTag};
use crate::bgg::{
    is_irredundant, is_one_generic, last_term_preserved, max_irredundant_quotient_generation, pairing_complex,
    GenericityMode, LinearComplex,
};
use crate::error::Error;
use crate::exactfield::{check_modulus, is_prime, DEFAULT_PRIME};
use crate::mrc::{curve_arithmetic, expected_betti, gamma_range, scan, verify_counterexample, Verdict};
use crate::points::{
    gale_transform, is_lgp, quotient_module_presentation, random_lgp_config, CheckMode, PairingTensor,
    PointConfiguration,
};

#[derive(Parser, Debug)]
#[command(name = "extmrc", version, about = "Exact Betti numbers of general points over prime fields")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Generate or check point configurations.
    #[command(subcommand)]
    Points(PointsCommand),
    /// Gale transform of a points file.
    Gale(GaleArgs),
    /// Graded Betti numbers of the coordinate ring of a points file.
    Betti(BettiArgs),
    /// Complexes built from a pairing tensor.
    #[command(subcommand)]
    Bgg(BggCommand),
    /// Expected tables, parameter ranges and end-to-end verification.
    #[command(subcommand)]
    Mrc(MrcCommand),
    /// Betti-number arithmetic for curves of genus g and degree d.
    Curve(CurveArgs),
}

#[derive(Subcommand, Debug)]
enum PointsCommand {
    /// Random points in linearly general position.
    Gen(PointsGenArgs),
    /// Linear general position check.
    Check(PointsCheckArgs),
}

#[derive(Args, Debug)]
struct PointsGenArgs {
    #[arg(long)]
    r: usize,
    #[arg(long)]
    gamma: usize,
    #[arg(long, default_value_t = DEFAULT_PRIME)]
    prime: u32,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// `exhaustive` or `sampled:N`; chosen from the size of the problem when omitted.
    #[arg(long)]
    check: Option<String>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct PointsCheckArgs {
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long)]
    check: Option<String>,
}

#[derive(Args, Debug)]
struct GaleArgs {
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Also check that transforming twice gives back the row space.
    #[arg(long)]
    verify: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Via {
    Direct,
    Dual,
}

#[derive(Args, Debug)]
struct BettiArgs {
    #[arg(long = "in")]
    input: PathBuf,
    /// A single entry `i,j`.
    #[arg(long, conflicts_with = "table", required_unless_present = "table")]
    entry: Option<String>,
    /// All entries with `i <= imax`, `j <= jmax`, given as `imax,jmax`.
    #[arg(long)]
    table: Option<String>,
    #[arg(long, value_enum, default_value_t = Via::Direct)]
    via: Via,
    /// Top degree of the quotient ring to build for `--via direct`.
    #[arg(long)]
    dmax: Option<usize>,
}

#[derive(Args, Debug)]
struct BggArgs {
    #[arg(long = "in")]
    input: PathBuf,
    /// `exhaustive:E` over GF(p^E) or `montecarlo:N`; exhaustive over GF(p)
    /// when it fits the enumeration budget, else 1000 random samples.
    #[arg(long)]
    generic: Option<String>,
}

#[derive(Subcommand, Debug)]
enum BggCommand {
    /// Ranks of the complex and 1-genericity of the tensor.
    Fmu(BggArgs),
    /// Irredundancy of the complex.
    Irred(BggArgs),
    /// Ranks of the maximal irredundant quotient.
    Quotient(BggArgs),
}

#[derive(Subcommand, Debug)]
enum MrcCommand {
    /// Compare a computed Betti number with the expected value.
    Verify(VerifyArgs),
    /// Expected Betti table of general points.
    Expected(ExpectedArgs),
    /// Numbers of points covered for a given ambient dimension.
    Range(RangeArgs),
    /// Compare lower bound and expected value for every (s, δ).
    Scan(ScanArgs),
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[arg(long)]
    s: usize,
    #[arg(long)]
    delta: usize,
    #[arg(long, default_value_t = DEFAULT_PRIME)]
    prime: u32,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Also compute the full table (ambient dimension at most 8).
    #[arg(long)]
    table: bool,
}

#[derive(Args, Debug)]
struct ExpectedArgs {
    #[arg(long)]
    r: usize,
    #[arg(long)]
    gamma: usize,
}

#[derive(Args, Debug)]
struct RangeArgs {
    #[arg(long)]
    r: usize,
}

#[derive(Args, Debug)]
struct ScanArgs {
    #[arg(long, default_value_t = 40)]
    smax: usize,
}

#[derive(Args, Debug)]
struct CurveArgs {
    #[arg(long)]
    g: usize,
    #[arg(long)]
    d: usize,
}

/// Failure of a command, carrying its exit code.
struct Failure {
    code: i32,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Parse(_) | Error::Input(_) | Error::Mode(_) | Error::Parameter(_) | Error::BadModulus(_) => 2,
            _ => 1,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

fn usage(message: impl Into<String>) -> Failure {
    Failure {
        code: 2,
        message: message.into(),
    }
}

type CmdResult = std::result::Result<i32, Failure>;

/// Runs the command line on `args` (program name first); returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let rendered = e.render().to_string();
            let _ = if code == 0 {
                out.write_all(rendered.as_bytes())
            } else {
                err.write_all(rendered.as_bytes())
            };
            return code;
        }
    };
    let mut buf = String::new();
    let result = dispatch(cli.command, &mut buf);
    let _ = out.write_all(buf.as_bytes());
    match result {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}

fn dispatch(command: Command, out: &mut String) -> CmdResult {
    match command {
        Command::Points(PointsCommand::Gen(a)) => points_gen(a, out),
        Command::Points(PointsCommand::Check(a)) => points_check(a, out),
        Command::Gale(a) => gale(a, out),
        Command::Betti(a) => betti(a, out),
        Command::Bgg(c) => bgg(c, out),
        Command::Mrc(MrcCommand::Verify(a)) => mrc_verify(a, out),
        Command::Mrc(MrcCommand::Expected(a)) => mrc_expected(a, out),
        Command::Mrc(MrcCommand::Range(a)) => mrc_range(a, out),
        Command::Mrc(MrcCommand::Scan(a)) => mrc_scan(a, out),
        Command::Curve(a) => curve(a, out),
    }
}

fn header(words: &[String]) -> String {
    format!("# extmrc {}\n", words.join(" "))
}

fn flag(name: &str, value: impl std::fmt::Display) -> String {
    format!("--{name} {value}")
}

fn read_file(path: &Path) -> std::result::Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| usage(format!("cannot read {}: {e}", path.display())))
}

/// Writes `text` to `path`, or appends it to `out` when no path is given.
fn emit(path: Option<&Path>, text: &str, out: &mut String) -> std::result::Result<(), Failure> {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| Failure {
            code: 1,
            message: format!("cannot write {}: {e}", p.display()),
        }),
        None => {
            out.push_str(text);
            Ok(())
        }
    }
}

fn prime_arg(p: u32) -> std::result::Result<u32, Failure> {
    check_modulus(p as u64)?;
    if !is_prime(p as u64) {
        return Err(Error::BadModulus(p as u64).into());
    }
    Ok(p)
}

fn parse_pair(s: &str, what: &str) -> std::result::Result<(usize, i64), Failure> {
    let bad = || usage(format!("{what} must be `i,j`, got `{s}`"));
    let (a, b) = s.split_once(',').ok_or_else(bad)?;
    Ok((a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?))
}

fn points_gen(a: PointsGenArgs, out: &mut String) -> CmdResult {
    let p = prime_arg(a.prime)?;
    let mode = match &a.check {
        Some(s) => CheckMode::parse(s)?,
        None => CheckMode::default_for(a.r, a.gamma),
    };
    let config = random_lgp_config(a.r, a.gamma, p, a.seed, mode)?;
    let mut words = vec![
        "points gen".to_string(),
        flag("r", a.r),
        flag("gamma", a.gamma),
        flag("prime", p),
        flag("seed", a.seed),
        flag("check", mode),
    ];
    if let Some(path) = &a.out {
        words.push(flag("out", path.display()));
    }
    let text = header(&words) + &config.to_text();
    emit(a.out.as_deref(), &text, out)?;
    Ok(0)
}

fn points_check(a: PointsCheckArgs, out: &mut String) -> CmdResult {
    let config = PointConfiguration::from_text(&read_file(&a.input)?)?;
    let mode = match &a.check {
        Some(s) => CheckMode::parse(s)?,
        None => CheckMode::default_for(config.ambient_dim(), config.len()),
    };
    let ok = is_lgp(&config, mode);
    out.push_str(&header(&[
        "points check".into(),
        flag("in", a.input.display()),
        flag("check", mode),
    ]));
    out.push_str(&format!("lgp={ok}\n"));
    if !config.has_distinct_points() {
        out.push_str("reason=repeated point\n");
    }
    Ok(if ok { 0 } else { 1 })
}

fn gale(a: GaleArgs, out: &mut String) -> CmdResult {
    let config = PointConfiguration::from_text(&read_file(&a.input)?)?;
    let dual = gale_transform(&config)?;
    let product = config.coords().mul(&dual.coords().transpose())?;
    let checksum = product.data().iter().filter(|&&x| x != 0).count();
    let mut words = vec!["gale".to_string(), flag("in", a.input.display())];
    if let Some(path) = &a.out {
        words.push(flag("out", path.display()));
    }
    if a.verify {
        words.push("--verify".into());
    }
    let mut report = header(&words);
    report.push_str(&format!("# s={}\n# checksum={checksum}\n", dual.ambient_dim()));
    let mut code = if checksum == 0 { 0 } else { 1 };
    if a.verify {
        let back = gale_transform(&dual)?;
        let same = back.coords().row_space_equal(config.coords())?;
        report.push_str(&format!("# roundtrip={same}\n"));
        if !same {
            code = 1;
        }
    }
    match &a.out {
        Some(_) => {
            emit(a.out.as_deref(), &(report.clone() + &dual.to_text()), out)?;
            out.push_str(&report);
        }
        None => out.push_str(&(report + &dual.to_text())),
    }
    Ok(code)
}

fn betti(a: BettiArgs, out: &mut String) -> CmdResult {
    let config = PointConfiguration::from_text(&read_file(&a.input)?)?;
    let r = config.ambient_dim();
    let (cells, spec_word) = match (&a.entry, &a.table) {
        (Some(e), _) => {
            let (i, j) = parse_pair(e, "--entry")?;
            (vec![(i, j)], flag("entry", e))
        }
        (None, Some(t)) => {
            let (imax, jmax) = parse_pair(t, "--table")?;
            let cells = (0..=imax.min(r + 1))
                .flat_map(|i| (i as i64..=jmax).map(move |j| (i, j)))
                .collect();
            (cells, flag("table", t))
        }
        (None, None) => return Err(usage("one of --entry or --table is required")),
    };
    let mut words = vec![
        "betti".to_string(),
        flag("in", a.input.display()),
        spec_word,
        flag("via", format!("{:?}", a.via).to_lowercase()),
    ];
    let mut table = BettiTable::new(r);
    match a.via {
        Via::Direct => {
            let top = cells.iter().map(|&(i, j)| j - i as i64 + 1).max().unwrap_or(0).max(0) as usize;
            let dmax = a.dmax.unwrap_or(top);
            words.push(flag("dmax", dmax));
            let m = quotient_module_presentation(&config, dmax)?;
            if a.table.is_some() && a.entry.is_none() {
                let jmax = cells.iter().map(|c| c.1).max().unwrap_or(0);
                let imax = cells.iter().map(|c| c.0).max().unwrap_or(0);
                table = betti_table(&m, imax, jmax)?;
            } else {
                for &(i, j) in &cells {
                    table.set(i, j, tor_dimension(&m, i, j)? as u64, EntryTag::Computed);
                }
            }
        }
        Via::Dual => {
            for &(i, j) in &cells {
                table.set(i, j, betti_via_duality(&config, i, j)? as u64, EntryTag::Computed);
            }
        }
    }
    out.push_str(&header(&words));
    out.push_str(&table.to_text());
    if let [(i, j)] = cells[..] {
        out.push_str(&format!("# value={}\n", table.get(i, j)));
    }
    for line in table.diagram().lines() {
        out.push_str(&format!("# {line}\n"));
    }
    Ok(0)
}

fn genericity(requested: Option<&str>, mu: &PairingTensor) -> std::result::Result<(bool, String), Failure> {
    let parse_num = |s: &str| s.parse::<u64>().map_err(|_| usage(format!("bad --generic value `{s}`")));
    match requested {
        Some(s) if s.starts_with("exhaustive:") => {
            let e = parse_num(&s["exhaustive:".len()..])? as u32;
            Ok((is_one_generic(mu, GenericityMode::Exhaustive(e))?, s.to_string()))
        }
        Some(s) if s.starts_with("montecarlo:") => {
            let samples = parse_num(&s["montecarlo:".len()..])? as usize;
            let mode = GenericityMode::MonteCarlo { samples, seed: 0 };
            Ok((is_one_generic(mu, mode)?, s.to_string()))
        }
        Some(s) => Err(usage(format!("--generic must be exhaustive:E or montecarlo:N, got `{s}`"))),
        None => match is_one_generic(mu, GenericityMode::Exhaustive(1)) {
            Ok(v) => Ok((v, "exhaustive:1".into())),
            Err(Error::Mode(_)) => {
                let mode = GenericityMode::MonteCarlo { samples: 1000, seed: 0 };
                Ok((is_one_generic(mu, mode)?, "montecarlo:1000".into()))
            }
            Err(e) => Err(e.into()),
        },
    }
}

fn ranks_line(name: &str, f: &LinearComplex) -> String {
    let ranks: Vec<String> = f.ranks().iter().map(|r| r.to_string()).collect();
    format!("{name}: {}\n", ranks.join(" "))
}

fn bgg(command: BggCommand, out: &mut String) -> CmdResult {
    let (name, a) = match command {
        BggCommand::Fmu(a) => ("fmu", a),
        BggCommand::Irred(a) => ("irred", a),
        BggCommand::Quotient(a) => ("quotient", a),
    };
    let mu = PairingTensor::from_text(&read_file(&a.input)?)?;
    let f = pairing_complex(&mu)?;
    let mut body = ranks_line("F", &f);
    let mut generic_word = None;
    match name {
        "fmu" | "irred" => {
            if name == "irred" {
                body.push_str(&format!("irredundant: {}\n", is_irredundant(&f)));
            }
            let (g, mode) = genericity(a.generic.as_deref(), &mu)?;
            body.push_str(&format!("one_generic: {g}\n"));
            generic_word = Some(flag("generic", mode));
        }
        _ => {
            let fp = max_irredundant_quotient_generation(&f)?;
            body.push_str(&ranks_line("F'", &fp));
            body.push_str(&format!("last_term_preserved: {}\n", last_term_preserved(&mu)?));
            body.push_str(&format!("irredundant: {}\n", is_irredundant(&f)));
        }
    }
    let mut words = vec![format!("bgg {name}"), flag("in", a.input.display())];
    words.extend(generic_word);
    out.push_str(&header(&words));
    out.push_str(&body);
    Ok(0)
}

fn mrc_verify(a: VerifyArgs, out: &mut String) -> CmdResult {
    let mut words = vec![
        "mrc verify".to_string(),
        flag("s", a.s),
        flag("delta", a.delta),
        flag("prime", a.prime),
        flag("seed", a.seed),
    ];
    if a.table {
        words.push("--table".into());
    }
    out.push_str(&header(&words));
    let report = verify_counterexample(a.s, a.delta, a.prime, a.seed, a.table)?;
    out.push_str(&report.to_text());
    Ok(if report.verdict == Verdict::Confirmed { 0 } else { 1 })
}

fn mrc_expected(a: ExpectedArgs, out: &mut String) -> CmdResult {
    let t = expected_betti(a.r, a.gamma)?;
    out.push_str(&header(&["mrc expected".into(), flag("r", a.r), flag("gamma", a.gamma)]));
    out.push_str(&t.to_text());
    for line in t.diagram().lines() {
        out.push_str(&format!("# {line}\n"));
    }
    Ok(0)
}

fn mrc_range(a: RangeArgs, out: &mut String) -> CmdResult {
    let g = gamma_range(a.r)?;
    let list: Vec<String> = g.iter().map(|x| x.to_string()).collect();
    out.push_str(&header(&["mrc range".into(), flag("r", a.r)]));
    out.push_str(&format!("r={}\ngamma={}\ncount={}\n", a.r, list.join(","), g.len()));
    Ok(0)
}

fn mrc_scan(a: ScanArgs, out: &mut String) -> CmdResult {
    if a.smax < 3 {
        return Err(usage("--smax must be at least 3"));
    }
    let rows = scan(a.smax)?;
    out.push_str(&header(&["mrc scan".into(), flag("smax", a.smax)]));
    let (mut exceeding, mut outside) = (0, 0);
    for row in &rows {
        let mark = if row.exceeds { " *" } else { "" };
        out.push_str(&format!(
            "s={} delta={} lower_bound={} expected={} exceeds={} in_family={}{mark}\n",
            row.s, row.delta, row.lower_bound, row.expected, row.exceeds, row.in_family
        ));
        exceeding += row.exceeds as usize;
        outside += (row.exceeds != row.in_family) as usize;
    }
    out.push_str(&format!("exceeding={exceeding}\nmismatches={outside}\n"));
    Ok(if outside == 0 { 0 } else { 1 })
}

fn curve(a: CurveArgs, out: &mut String) -> CmdResult {
    let c = curve_arithmetic(a.g, a.d)?;
    out.push_str(&header(&["curve".into(), flag("g", a.g), flag("d", a.d)]));
    out.push_str(&c.to_text());
    Ok(0)
}
