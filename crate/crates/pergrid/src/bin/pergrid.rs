//! Command-line front end.
//!
//! Verdicts go to standard output, diagnostics to standard error. Exit codes:
//! 0 success (verdicts are output, not exit codes), 2 invalid input,
//! 3 unsupported combination, 4 internal inconsistency.

use std::collections::BTreeMap;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Parser, Subcommand, ValueEnum};

use pergrid::classify::{classify, rebase, thin_decompose};
use pergrid::error::{Error, Result};
use pergrid::grid::GridQuiver;
use pergrid::intervals::{
    count_by_size, count_intervals, enumerate_intervals, interval_rep, staircase_from_support,
    Staircase,
};
use pergrid::io::{parse_module, write_module, write_module_str};
use pergrid::oracle::{all_interval_reps, interval_decomposable, s_decomposable, OracleVerdict};
use pergrid::rep::Rep;
use pergrid::{bruteforce, multiplicity, source_map_target};

#[derive(Parser)]
#[command(
    name = "pergrid",
    version,
    about = "Interval modules over commutative grids: counting, classification, \
             decomposability"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum EnumFormat {
    /// Staircase text, one per line: "s..t: [b,d];[b,d];...".
    Staircase,
    /// 0/1 dimension rows, top grid row first, rows joined by "/".
    Dimvec,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum CandidateSet {
    /// Every interval module of the input's grid.
    Intervals,
}

#[derive(Subcommand)]
enum Cmd {
    /// Count the interval modules of an equioriented 2D grid.
    CountIntervals {
        /// Grid shape, e.g. 3x4.
        #[arg(long, value_parser = parse_shape)]
        shape: (usize, usize),
        /// Break the count down by bounding-box size.
        #[arg(long)]
        by_size: bool,
    },
    /// List the interval modules of an equioriented 2D grid in a fixed order.
    EnumIntervals {
        /// Grid shape, e.g. 3x4.
        #[arg(long, value_parser = parse_shape)]
        shape: (usize, usize),
        /// Keep only intervals with this bounding-box size, e.g. 2x2.
        #[arg(long, value_parser = parse_shape)]
        size: Option<(usize, usize)>,
        #[arg(long, value_enum, default_value = "staircase")]
        format: EnumFormat,
    },
    /// Report the thin/pre-interval/interval classification of a module file.
    Classify { file: PathBuf },
    /// Rewrite a pre-interval module with identity maps over its support.
    ///
    /// Prints the per-vertex basis scalars; writes the rewritten module to
    /// OUT when given, otherwise prints it after the scalars.
    Rebase {
        file: PathBuf,
        #[arg(short, long, value_name = "OUT")]
        out: Option<PathBuf>,
    },
    /// Split a thin module over an equioriented 2D grid into intervals.
    ThinDecompose { file: PathBuf },
    /// Number of direct summands of the module isomorphic to one interval.
    Multiplicity {
        file: PathBuf,
        /// Staircase text, e.g. "1..2: [2,3];[1,2]".
        #[arg(long)]
        interval: String,
    },
    /// Decide decomposability into a candidate set via counting of maps.
    Oracle {
        file: PathBuf,
        /// Built-in candidate family.
        #[arg(long, value_enum, default_value = "intervals", conflicts_with = "set_dir")]
        set: CandidateSet,
        /// Directory of candidate module files on the same grid and field.
        #[arg(long, value_name = "DIR")]
        set_dir: Option<PathBuf>,
    },
    /// Split a module over a prime field into indecomposable summands.
    Decompose {
        file: PathBuf,
        /// Seed for the randomized endomorphism search.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Write one module file per isomorphism class of summands here.
        #[arg(short, long, value_name = "DIR")]
        out_dir: Option<PathBuf>,
    },
    /// Run the bundled fixtures against their documented outputs.
    Selfcheck,
}

fn parse_shape(text: &str) -> std::result::Result<(usize, usize), String> {
    let bad = || format!("expected WIDTHxHEIGHT such as 3x4, got {text:?}");
    let (m, n) = text.split_once(['x', 'X']).ok_or_else(bad)?;
    let m = m.trim().parse().map_err(|_| bad())?;
    let n = n.trim().parse().map_err(|_| bad())?;
    if m == 0 || n == 0 {
        return Err("grid sides must be positive".into());
    }
    Ok((m, n))
}

fn exit_class(e: &Error) -> u8 {
    match e {
        Error::Unsupported(_) | Error::BudgetExhausted(_) => 3,
        Error::Inconsistency(_) => 4,
        _ => 2,
    }
}

/// Stdout wrapper that treats a reader hanging up (broken pipe) as a normal
/// end of output instead of an error.
struct Out<W: Write>(W);

impl<W: Write> Write for Out<W> {
    fn write(&mut self, buf: &[u8]) -> io::Result<usize> {
        match self.0.write(buf) {
            Err(e) if e.kind() == io::ErrorKind::BrokenPipe => std::process::exit(0),
            r => r,
        }
    }
    fn flush(&mut self) -> io::Result<()> {
        match self.0.flush() {
            Err(e) if e.kind() == io::ErrorKind::BrokenPipe => std::process::exit(0),
            r => r,
        }
    }
}

fn main() -> ExitCode {
    let stdout = io::stdout();
    let mut out = io::BufWriter::new(Out(stdout.lock()));
    let result = run(Cli::parse(), &mut out);
    if let Err(e) = out.flush() {
        eprintln!("error: {e}");
        return ExitCode::from(2);
    }
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_class(&e))
        }
    }
}

fn run(cli: Cli, out: &mut impl Write) -> Result<()> {
    match cli.cmd {
        Cmd::CountIntervals { shape: (m, n), by_size } => {
            if by_size {
                let mut total = 0;
                for h in 1..=m {
                    for w in 1..=n {
                        let c = count_by_size(m as u64, n as u64, h as u64, w as u64);
                        total += c;
                        writeln!(out, "{h}x{w}: {c}")?;
                    }
                }
                writeln!(out, "total: {total}")?;
            } else {
                writeln!(out, "{}", count_intervals(m as u64, n as u64))?;
            }
            Ok(())
        }
        Cmd::EnumIntervals { shape: (m, n), size, format } => {
            for st in enumerate_intervals(m, n) {
                if let Some(hw) = size {
                    if st.size() != hw {
                        continue;
                    }
                }
                match format {
                    EnumFormat::Staircase => writeln!(out, "{st}")?,
                    EnumFormat::Dimvec => writeln!(out, "{}", dimvec(&st, m, n))?,
                }
            }
            Ok(())
        }
        Cmd::Classify { file } => {
            let rep = parse_module(&file)?;
            let report = classify(&rep)?;
            let yn = |b: bool| if b { "yes" } else { "no" };
            writeln!(out, "thin: {}", yn(report.thin))?;
            writeln!(out, "support_connected: {}", yn(report.support_connected))?;
            writeln!(out, "support_convex: {}", yn(report.support_convex))?;
            writeln!(out, "nonzero_over_support: {}", yn(report.nonzero_over_support))?;
            writeln!(out, "identity_over_support: {}", yn(report.identity_over_support))?;
            writeln!(out, "pre_interval: {}", yn(report.is_pre_interval()))?;
            writeln!(out, "interval: {}", yn(report.is_interval()))?;
            Ok(())
        }
        Cmd::Rebase { file, out: out_path } => {
            let rep = parse_module(&file)?;
            let (fixed, scalars) = rebase(&rep)?;
            let q = rep.quiver();
            for v in q.vertices() {
                if rep.dim(v) > 0 {
                    writeln!(out, "{}: {}", q.vertex_name(v), scalars[v])?;
                }
            }
            match out_path {
                Some(path) => write_module(&fixed, &path)?,
                None => write!(out, "{}", write_module_str(&fixed))?,
            }
            Ok(())
        }
        Cmd::ThinDecompose { file } => {
            let rep = parse_module(&file)?;
            let mut multiset = BTreeMap::new();
            for st in thin_decompose(&rep)? {
                *multiset.entry(st).or_insert(0usize) += 1;
            }
            for (st, count) in multiset {
                writeln!(out, "{count} x {st}")?;
            }
            Ok(())
        }
        Cmd::Multiplicity { file, interval } => {
            let rep = parse_module(&file)?;
            let st = Staircase::parse(&interval)?;
            let l = interval_rep(rep.quiver(), &st, rep.field())?;
            writeln!(out, "{}", multiplicity(&l, &rep)?)?;
            Ok(())
        }
        Cmd::Oracle { file, set: CandidateSet::Intervals, set_dir } => {
            let rep = parse_module(&file)?;
            let (verdict, labels) = match set_dir {
                Some(dir) => oracle_against_dir(&rep, &dir)?,
                None => oracle_against_intervals(&rep)?,
            };
            writeln!(out, "decomposable: {}", if verdict.decomposable { "yes" } else { "no" })?;
            for (label, &count) in labels.iter().zip(&verdict.counts) {
                if count > 0 {
                    writeln!(out, "{count} x {label}")?;
                }
            }
            writeln!(out, 
                "dimension accounted: {} of {}",
                verdict.dim_accounted, verdict.dim_total
            )?;
            Ok(())
        }
        Cmd::Decompose { file, seed, out_dir } => {
            let rep = parse_module(&file)?;
            let dec = bruteforce::decompose(&rep, seed)?;
            for (summand, count) in &dec.summands {
                let dims: Vec<String> =
                    summand.dim_vector().iter().map(|d| d.to_string()).collect();
                writeln!(out, "{count} x dim [{}]", dims.join(","))?;
            }
            if let Some(dir) = out_dir {
                std::fs::create_dir_all(&dir)
                    .map_err(|e| Error::Io(format!("{}: {e}", dir.display())))?;
                for (i, (summand, _)) in dec.summands.iter().enumerate() {
                    write_module(summand, &dir.join(format!("summand_{:02}.json", i + 1)))?;
                }
            }
            Ok(())
        }
        Cmd::Selfcheck => selfcheck(out),
    }
}

fn dimvec(st: &Staircase, m: usize, n: usize) -> String {
    let mut rows = Vec::with_capacity(m);
    for r in (1..=m).rev() {
        let row: String = (1..=n)
            .map(|c| match st.slice_at_row(r) {
                Some((b, d)) if b <= c && c <= d => '1',
                _ => '0',
            })
            .collect();
        rows.push(row);
    }
    rows.join("/")
}

/// Oracle run against every interval module of the input's grid. On grids
/// with more than two factors the intervals are enumerated directly, which
/// is viable only for small grids.
fn oracle_against_intervals(rep: &Rep) -> Result<(OracleVerdict, Vec<String>)> {
    let q = rep.quiver();
    if q.shape_2d().is_some() && q.is_equioriented() {
        let verdict = interval_decomposable(rep)?;
        let labels = verdict
            .multiplicities
            .keys()
            .map(|st| st.to_string())
            .collect();
        // The verdict's staircase table is already count-keyed; rebuild a
        // parallel counts vector so the printing loop stays uniform.
        let counts = verdict.multiplicities.values().copied().collect();
        let mut flat = verdict.clone();
        flat.counts = counts;
        return Ok((flat, labels));
    }
    if q.vertex_count() > 16 {
        return Err(Error::Unsupported(
            "interval enumeration beyond two-factor grids is limited to 16 vertices; \
             pass --set-dir with explicit candidates"
                .into(),
        ));
    }
    let candidates = all_interval_reps(q, rep.field());
    let labels = candidates
        .iter()
        .map(|c| {
            let names: Vec<String> = q
                .vertices()
                .filter(|&v| c.dim(v) > 0)
                .map(|v| q.vertex_name(v))
                .collect();
            format!("support: {}", names.join(" "))
        })
        .collect();
    Ok((s_decomposable(rep, &candidates)?, labels))
}

/// Oracle run against candidate module files read from a directory, in file
/// name order.
fn oracle_against_dir(rep: &Rep, dir: &Path) -> Result<(OracleVerdict, Vec<String>)> {
    let mut paths: Vec<PathBuf> = std::fs::read_dir(dir)
        .map_err(|e| Error::Io(format!("{}: {e}", dir.display())))?
        .filter_map(|entry| entry.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|ext| ext == "json"))
        .collect();
    paths.sort();
    if paths.is_empty() {
        return Err(Error::Validation(format!(
            "no .json candidate files in {}",
            dir.display()
        )));
    }
    let candidates: Vec<Rep> = paths.iter().map(|p| parse_module(p)).collect::<Result<_>>()?;
    let labels = paths
        .iter()
        .map(|p| p.file_name().unwrap_or_default().to_string_lossy().into_owned())
        .collect();
    Ok((s_decomposable(rep, &candidates)?, labels))
}

struct Check {
    log: Vec<String>,
    failures: usize,
}

impl Check {
    fn assert(&mut self, ok: bool, what: &str) {
        if ok {
            self.log.push(format!("ok: {what}"));
        } else {
            self.log.push(format!("FAIL: {what}"));
            self.failures += 1;
        }
    }
}

/// Bundled fixtures with their documented behavior, embedded at build time so
/// the binary can be checked without a source tree.
static FIXTURES: &[(&str, &str)] = &[
    ("m_lambda_0.json", include_str!("../../../../fixtures/m_lambda_0.json")),
    ("m_lambda_1.json", include_str!("../../../../fixtures/m_lambda_1.json")),
    ("m_lambda_2.json", include_str!("../../../../fixtures/m_lambda_2.json")),
    ("nonequi_lambda_0.json", include_str!("../../../../fixtures/nonequi_lambda_0.json")),
    ("nonequi_lambda_2.json", include_str!("../../../../fixtures/nonequi_lambda_2.json")),
    ("correspondence_a.json", include_str!("../../../../fixtures/correspondence_a.json")),
    ("correspondence_b.json", include_str!("../../../../fixtures/correspondence_b.json")),
    ("i12_plus_i11_a3.json", include_str!("../../../../fixtures/i12_plus_i11_a3.json")),
    ("i22_plus_i23_a3.json", include_str!("../../../../fixtures/i22_plus_i23_a3.json")),
];

fn fixture(name: &str) -> Result<Rep> {
    let text = FIXTURES
        .iter()
        .find(|(n, _)| *n == name)
        .map(|(_, t)| *t)
        .ok_or_else(|| Error::Io(format!("no bundled fixture {name}")))?;
    pergrid::io::parse_module_str(text)
}

fn selfcheck(out: &mut impl Write) -> Result<()> {
    let mut c = Check { log: Vec::new(), failures: 0 };

    c.assert(count_intervals(2, 2) == 11, "count 2x2 = 11");
    c.assert(count_intervals(3, 3) == 83, "count 3x3 = 83");
    c.assert(count_intervals(2, 4) == 55, "count 2x4 = 55");
    c.assert(count_by_size(3, 3, 2, 2) == 12, "count 3x3 by size 2x2 = 12");
    c.assert(
        enumerate_intervals(3, 3).count() as u64 == count_intervals(3, 3),
        "enumeration of 3x3 matches its count",
    );

    for (name, text) in FIXTURES {
        let parsed = pergrid::io::parse_module_str(text).and_then(|rep| {
            rep.validate()?;
            Ok(rep)
        });
        match parsed {
            Ok(rep) => c.assert(
                pergrid::io::write_module_str(&rep) == *text,
                &format!("{name} parses, validates, and round-trips"),
            ),
            Err(e) => c.assert(false, &format!("{name} parses and validates ({e})")),
        }
    }

    let m0 = fixture("m_lambda_0.json")?;
    let r0 = classify(&m0)?;
    c.assert(r0.thin && !r0.is_pre_interval(), "M(0) is thin but not pre-interval");
    c.assert(
        bruteforce::decompose(&m0, 1)?.summands.len() == 1,
        "M(0) is indecomposable",
    );
    let (v0, _) = oracle_against_intervals(&m0)?;
    c.assert(!v0.decomposable, "M(0) is not interval-decomposable");

    let m1 = fixture("m_lambda_1.json")?;
    c.assert(classify(&m1)?.is_interval(), "M(1) is an interval module");

    let m2 = fixture("m_lambda_2.json")?;
    let r2 = classify(&m2)?;
    c.assert(
        r2.is_pre_interval() && !r2.is_interval(),
        "M(2) is pre-interval but not interval",
    );
    c.assert(rebase(&m2).is_err(), "M(2) admits no rebasing to identity maps");

    let n0 = fixture("nonequi_lambda_0.json")?;
    let rn0 = classify(&n0)?;
    c.assert(rn0.thin && !rn0.is_pre_interval(), "ring(0) is thin but not pre-interval");

    let n2 = fixture("nonequi_lambda_2.json")?;
    let rn2 = classify(&n2)?;
    c.assert(rn2.is_pre_interval(), "ring(2) is pre-interval");
    c.assert(rebase(&n2).is_err(), "ring(2) admits no rebasing to identity maps");

    let tall = Staircase::new(1, vec![(5, 6), (3, 5), (3, 4), (2, 4)]).unwrap();
    let flat = Staircase::new(2, vec![(3, 5), (2, 4)]).unwrap();
    for (name, want) in [("correspondence_a.json", &tall), ("correspondence_b.json", &flat)] {
        let rep = fixture(name)?;
        c.assert(classify(&rep)?.is_interval(), &format!("{name} is an interval module"));
        let support: Vec<(usize, usize)> = rep
            .quiver()
            .vertices()
            .filter(|&v| rep.dim(v) > 0)
            .map(|v| {
                let coords = rep.quiver().coords(v);
                (coords[0], coords[1])
            })
            .collect();
        c.assert(
            staircase_from_support(4, 6, &support).as_ref() == Ok(want),
            &format!("{name} support reads back as {want}"),
        );
    }

    let sum = fixture("i12_plus_i11_a3.json")?;
    let a3: &Arc<GridQuiver> = sum.quiver();
    let i12 = interval_rep(a3, &Staircase::new(1, vec![(1, 2)]).unwrap(), sum.field())?;
    c.assert(multiplicity(&i12, &sum)? == 1, "I[1,2] occurs once in I[1,2] + I[1,1]");
    let data = source_map_target(&i12)?;
    c.assert(
        data.middle.dim_vector() == [1, 0, 0] && data.tau_inv.dim_total() == 0,
        "source map of I[1,2] lands in I[1,1] with zero translate",
    );
    let v = interval_decomposable(&sum)?;
    c.assert(
        v.decomposable && v.counts.iter().sum::<usize>() == 2,
        "I[1,2] + I[1,1] splits into its two intervals",
    );

    let pair = fixture("i22_plus_i23_a3.json")?;
    let vp = interval_decomposable(&pair)?;
    let split: BTreeMap<String, usize> = vp
        .multiplicities
        .iter()
        .map(|(st, &k)| (st.to_string(), k))
        .collect();
    c.assert(
        vp.decomposable
            && split == BTreeMap::from([("1..1: [2,2]".into(), 1), ("1..1: [2,3]".into(), 1)]),
        "I[2,2] + I[2,3] splits into its two intervals",
    );

    for line in &c.log {
        writeln!(out, "{line}")?;
    }
    if c.failures == 0 {
        writeln!(out, "all checks passed")?;
        Ok(())
    } else {
        Err(Error::Inconsistency(format!("{} fixture check(s) failed", c.failures)))
    }
}
