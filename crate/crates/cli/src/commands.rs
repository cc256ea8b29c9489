//! The subcommands, as functions from file contents and options to output text.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use clap::{Args, Parser, Subcommand};
use tannaka_core::bar::{bar_complex, cech_level, comonadic_oracle, BarBound, BarComplex, Stability, TableRow};
use tannaka_core::complexes::{cohomology_table, truncate_geq, truncate_leq, Complex};
use tannaka_core::dga::{validate, InvariantKind};
use tannaka_core::hopf::{coarse_moduli, hopf_validate};
use tannaka_core::weighted::{connectivity_check, equivariant_bar, MixedTateInput};
use thiserror::Error;

use crate::cache::ResultCache;
use crate::format::{parse_algebra, write_hopf, write_hopf_report, write_table, AlgebraFile, ParseError};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Parse(#[from] ParseError),
    #[error("usage: {0}")]
    Usage(String),
    #[error("{0}")]
    Io(String),
    /// A mathematical refusal: the input is well-formed but the request cannot be honoured.
    #[error("refused: {0}")]
    Refusal(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Refusal(_) => 1,
            _ => 2,
        }
    }
}

fn refuse(e: impl std::fmt::Display) -> CliError {
    CliError::Refusal(e.to_string())
}

/// Captured result of one invocation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub stdout: String,
    pub stderr: String,
    pub code: i32,
}

impl Outcome {
    fn ok(stdout: String) -> Outcome {
        Outcome { stdout, stderr: String::new(), code: 0 }
    }

    fn error(e: &CliError) -> Outcome {
        Outcome { stdout: String::new(), stderr: format!("error: {e}\n"), code: e.exit_code() }
    }
}

#[derive(Parser, Debug)]
#[command(name = "tannaka", version, about = "Bar constructions, their cohomology and coarse moduli Hopf algebras over Q")]
pub struct Cli {
    /// Worker threads (default: available parallelism). Output does not depend on it.
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
    /// Neither read nor write the result cache.
    #[arg(long, global = true)]
    pub no_cache: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug, Clone)]
pub enum Command {
    /// Check the algebra axioms; exit 1 on a violation.
    Validate { file: String },
    /// Cohomology table `weight degree dim` of the bar construction.
    Bar(BarArgs),
    /// The degree-zero Hopf algebra of the weight-graded bar construction.
    Coarse {
        file: String,
        #[arg(long)]
        weight_bound: i64,
        /// Skip the connectivity precondition.
        #[arg(long)]
        force: bool,
    },
    /// Cohomology table of level `n` of the Čech nerve.
    Cech {
        #[command(flatten)]
        bar: BarArgs,
        #[arg(long)]
        level: usize,
    },
    /// Cohomology table of a smart truncation of the bar construction.
    Truncate {
        #[command(flatten)]
        bar: BarArgs,
        /// Keep degrees at most `n`.
        #[arg(long, allow_hyphen_values = true)]
        leq: Option<i64>,
        /// Keep degrees at least `n`.
        #[arg(long, allow_hyphen_values = true)]
        geq: Option<i64>,
    },
    /// Compare the bar complex with the simplicial (Moore) model; exit 1 on mismatch.
    Oracle {
        file: String,
        #[arg(long)]
        levels: usize,
        #[arg(long, value_parser = parse_window, allow_hyphen_values = true)]
        window: Option<(i64, i64)>,
    },
}

#[derive(Args, Debug, Clone)]
pub struct BarArgs {
    pub file: String,
    /// Degrees to report, as `lo:hi`.
    #[arg(long, value_parser = parse_window, allow_hyphen_values = true)]
    pub window: Option<(i64, i64)>,
    /// Word-length cap (monomial-length cap for free presentations).
    #[arg(long, conflicts_with = "weight_bound")]
    pub cap: Option<usize>,
    /// Expand every weight up to this bound exactly.
    #[arg(long)]
    pub weight_bound: Option<i64>,
}

fn parse_window(s: &str) -> Result<(i64, i64), String> {
    let (a, b) = s.split_once(':').ok_or_else(|| format!("window `{s}` must look like lo:hi"))?;
    let lo = a.trim().parse().map_err(|_| format!("bad lower end `{a}`"))?;
    let hi = b.trim().parse().map_err(|_| format!("bad upper end `{b}`"))?;
    if lo > hi {
        return Err(format!("empty window {lo}:{hi}"));
    }
    Ok((lo, hi))
}

impl Command {
    fn file(&self) -> &str {
        match self {
            Command::Validate { file } | Command::Coarse { file, .. } | Command::Oracle { file, .. } => file,
            Command::Bar(b) | Command::Cech { bar: b, .. } | Command::Truncate { bar: b, .. } => &b.file,
        }
    }

    /// Name and parameters for the cache key; `None` for uncached commands.
    fn cache_params(&self) -> Option<(&'static str, Vec<String>)> {
        let bar = |b: &BarArgs| vec![format!("{:?}", b.window), format!("{:?}", b.cap), format!("{:?}", b.weight_bound)];
        match self {
            Command::Validate { .. } => None,
            Command::Bar(b) => Some(("bar", bar(b))),
            Command::Coarse { weight_bound, force, .. } => Some(("coarse", vec![weight_bound.to_string(), force.to_string()])),
            Command::Cech { bar: b, level } => Some(("cech", [bar(b), vec![level.to_string()]].concat())),
            Command::Truncate { bar: b, leq, geq } => Some(("truncate", [bar(b), vec![format!("{leq:?}"), format!("{geq:?}")]].concat())),
            Command::Oracle { levels, window, .. } => Some(("oracle", vec![levels.to_string(), format!("{window:?}")])),
        }
    }
}

/// Runs a parsed command line: reads the file, consults the cache and runs
/// the command on a pool of `--jobs` workers.
pub fn run(cli: &Cli, cache: &ResultCache) -> Outcome {
    let path = cli.command.file();
    let bytes = match std::fs::read(path) {
        Ok(b) => b,
        Err(e) => return Outcome::error(&CliError::Io(format!("cannot read {path}: {e}"))),
    };
    let Ok(src) = String::from_utf8(bytes.clone()) else {
        return Outcome::error(&CliError::Io(format!("{path} is not UTF-8")));
    };
    let cache = if cli.no_cache { ResultCache::disabled() } else { cache.clone() };
    let key = cli.command.cache_params().map(|(name, params)| ResultCache::key(&bytes, name, &params));
    if let Some(hit) = key.as_deref().and_then(|k| cache.get(k)) {
        return Outcome::ok(hit);
    }
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(j) = cli.jobs {
        if j == 0 {
            return Outcome::error(&CliError::Usage("--jobs must be at least 1".into()));
        }
        pool = pool.num_threads(j);
    }
    let pool = match pool.build() {
        Ok(p) => p,
        Err(e) => return Outcome::error(&CliError::Io(format!("cannot start workers: {e}"))),
    };
    let out = pool.install(|| execute(&cli.command, &src));
    if let (Some(k), 0) = (&key, out.code) {
        cache.put(k, &out.stdout);
    }
    out
}

/// Runs a command on file contents, without caching.
pub fn execute(command: &Command, src: &str) -> Outcome {
    if let Command::Validate { .. } = command {
        return cmd_validate(src);
    }
    let result = parse_algebra(src).map_err(CliError::from).and_then(|file| match command {
        Command::Validate { .. } => unreachable!(),
        Command::Bar(b) => cmd_bar(&file, b),
        Command::Coarse { weight_bound, force, .. } => cmd_coarse(&file, *weight_bound, *force),
        Command::Cech { bar, level } => cmd_cech(&file, bar, *level),
        Command::Truncate { bar, leq, geq } => cmd_truncate(&file, bar, *leq, *geq),
        Command::Oracle { levels, window, .. } => cmd_oracle(&file, *levels, *window),
    });
    match result {
        Ok(Report { text, failed: false }) => Outcome::ok(text),
        Ok(Report { text, failed: true }) => Outcome { stdout: text, stderr: String::new(), code: 1 },
        Err(e) => Outcome::error(&e),
    }
}

/// Output text and whether the command reports a negative verdict.
pub struct Report {
    pub text: String,
    pub failed: bool,
}

impl Report {
    fn ok(text: String) -> Result<Report, CliError> {
        Ok(Report { text, failed: false })
    }
}

pub fn cmd_validate(src: &str) -> Outcome {
    let file = match parse_algebra(src) {
        Ok(f) => f,
        Err(e) => return Outcome::error(&e.into()),
    };
    let a = &file.algebra;
    let report = validate(a);
    let mut s = String::new();
    if report.is_valid() {
        writeln!(s, "valid: {}", a.name()).unwrap();
        return Outcome::ok(s);
    }
    for v in &report.violations {
        let prefer_d = matches!(v.kind, InvariantKind::Leibniz | InvariantKind::DSquared);
        let line = v.witness.first().map_or(1, |w| file.line_of(w, prefer_d));
        writeln!(s, "line {line}: {v}").unwrap();
    }
    Outcome { stdout: s, stderr: String::new(), code: 1 }
}

fn bound_of(b: &BarArgs) -> Result<BarBound, CliError> {
    match (b.cap, b.weight_bound) {
        (Some(n), None) => Ok(BarBound::WordLength(n)),
        (None, Some(w)) => Ok(BarBound::Weight(w)),
        _ => Err(CliError::Usage("give exactly one of --cap N or --weight-bound W".into())),
    }
}

fn build_bar(file: &AlgebraFile, b: &BarArgs) -> Result<BarComplex, CliError> {
    let bound = bound_of(b)?;
    let a = &file.algebra;
    match bound {
        BarBound::Weight(w) if a.is_mixed_tate() && b.window.is_none() => {
            let q = MixedTateInput::new(a.clone(), "").map_err(refuse)?;
            equivariant_bar(&q, w).map_err(refuse)
        }
        _ => bar_complex(a, b.window, bound).map_err(refuse),
    }
}

/// Comment lines describing which degrees a capped run can vouch for; exact runs get none.
fn stability_notes(bound: BarBound, stability: Stability, unstable: &[i64]) -> String {
    let mut s = String::new();
    if let BarBound::WordLength(n) = bound {
        match stability {
            Stability::Exact => {}
            Stability::Capped { lowest, highest, .. } => {
                let mut parts = Vec::new();
                if let Some(l) = lowest {
                    parts.push(format!("degrees below {l}"));
                }
                if let Some(h) = highest {
                    parts.push(format!("degrees above {}", h + 1));
                }
                let stable = if parts.is_empty() { "no degree".to_string() } else { parts.join(" and ") };
                writeln!(s, "# cap {n}: stable in {stable}").unwrap();
                if !unstable.is_empty() {
                    let list: Vec<String> = unstable.iter().map(i64::to_string).collect();
                    writeln!(s, "# cap {n}: omitted unstable degrees {}", list.join(" ")).unwrap();
                }
            }
        }
    }
    s
}

pub fn cmd_bar(file: &AlgebraFile, b: &BarArgs) -> Result<Report, CliError> {
    let bar = build_bar(file, b)?;
    let notes = stability_notes(bar.bound(), bar.stability(), &bar.unstable_degrees());
    Report::ok(notes + &write_table(&bar.table()))
}

pub fn cmd_cech(file: &AlgebraFile, b: &BarArgs, level: usize) -> Result<Report, CliError> {
    let bound = bound_of(b)?;
    let c = cech_level(&file.algebra, level, b.window, bound).map_err(refuse)?;
    Report::ok(stability_notes(bound, c.stability(), &[]) + &write_table(&c.table()))
}

pub fn cmd_truncate(file: &AlgebraFile, b: &BarArgs, leq: Option<i64>, geq: Option<i64>) -> Result<Report, CliError> {
    if leq.is_none() && geq.is_none() {
        return Err(CliError::Usage("give --leq n, --geq n or both".into()));
    }
    let bar = build_bar(file, b)?;
    let stability = bar.stability();
    let truncate = |c: &Complex| -> Result<Complex, CliError> {
        let c = match leq {
            Some(n) => truncate_leq(c, n).map_err(refuse)?,
            None => c.clone(),
        };
        match geq {
            Some(n) => truncate_geq(&c, n).map_err(refuse),
            None => Ok(c),
        }
    };
    let mut acc: BTreeMap<(i64, i64), usize> = BTreeMap::new();
    for p in bar.pieces() {
        let t = truncate(p.complex())?;
        for (n, d) in cohomology_table(&t) {
            let in_window = b.window.is_none_or(|(lo, hi)| (lo..=hi).contains(&n));
            if d > 0 && in_window && stability.is_stable(n) {
                *acc.entry((p.weight(), n)).or_default() += d;
            }
        }
    }
    let rows: Vec<TableRow> = acc.into_iter().map(|((weight, degree), dim)| TableRow { weight, degree, dim }).collect();
    let notes = stability_notes(bar.bound(), stability, &[]);
    Report::ok(notes + &write_table(&rows))
}

pub fn cmd_oracle(file: &AlgebraFile, levels: usize, window: Option<(i64, i64)>) -> Result<Report, CliError> {
    let r = comonadic_oracle(&file.algebra, levels, window).map_err(refuse)?;
    let mut s = String::from("# weight degree moore normalized bar\n");
    for row in &r.rows {
        writeln!(s, "{} {} {} {} {}", row.weight, row.degree, row.moore, row.normalized, row.bar).unwrap();
    }
    let verdict = r.matches();
    s.push_str(if verdict { "MATCH\n" } else { "MISMATCH\n" });
    Ok(Report { text: s, failed: !verdict })
}

pub fn cmd_coarse(file: &AlgebraFile, weight_bound: i64, force: bool) -> Result<Report, CliError> {
    let a = &file.algebra;
    if !a.is_mixed_tate() {
        return Err(CliError::Refusal(format!("`{}` lacks the mixed-tate flag; coarse needs a mixed Tate input", a.name())));
    }
    let q = MixedTateInput::new(a.clone(), "").map_err(refuse)?;
    let mut s = String::new();
    let conn = connectivity_check(&q, weight_bound).map_err(refuse)?;
    if !conn.passes() {
        if !force {
            return Err(CliError::Refusal(format!("connectivity check failed: {}", conn.failures.join("; "))));
        }
        writeln!(s, "# connectivity check failed, continuing under --force: {}", conn.failures.join("; ")).unwrap();
    }
    let bar = equivariant_bar(&q, weight_bound).map_err(refuse)?;
    let h = coarse_moduli(&bar, weight_bound).map_err(refuse)?;
    let report = hopf_validate(&h);
    s.push_str(&write_hopf(&h));
    s.push_str(&write_hopf_report(&report));
    Ok(Report { text: s, failed: !report.passes() })
}
