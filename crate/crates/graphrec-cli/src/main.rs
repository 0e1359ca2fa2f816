use std::fs;
use std::io::Read;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use graphrec::augment::{is_graphic, maximal_graphic_rows, RowTrace};
use graphrec::binmatrix::{parse_matrix, serialize_matrix, MatrixFormat, SparseBinaryMatrix};
use graphrec::oracle::{oracle_is_graphic, random_graphic_instance, random_matrix, verify_realization, ORACLE_MAX_ROWS};
use graphrec::spqr::{to_dot, to_json, ForestStats, GraphTreePair, Origin, SpqrForest};
use serde::Serialize;

const SEED_ENV: &str = "GRAPHREC_SEED";

#[derive(Parser)]
#[command(name = "graphrec", version, about = "Decide whether binary matrices are graphic")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide graphicness; exit 0 if graphic, 1 if not, 2 on input errors.
    Check(CheckArgs),
    /// Greedily keep rows while the kept submatrix stays graphic.
    Maximal(MaximalArgs),
    /// Generate graphic matrices from random graphs.
    Gen(GenArgs),
    /// Compare the decision procedure with brute-force tree enumeration.
    OracleCheck(OracleArgs),
}

#[derive(Args)]
struct Input {
    /// Matrix file, or `-` for standard input.
    path: PathBuf,
    /// One of coordinate, dense, row-list.
    #[arg(long, default_value = "coordinate")]
    format: MatrixFormat,
}

#[derive(Args)]
struct CheckArgs {
    #[command(flatten)]
    input: Input,
    /// Print a realizing graph and spanning tree.
    #[arg(long)]
    certificate: bool,
    /// Write the SPQR forest to a file; `.dot` selects Graphviz, anything else JSON.
    #[arg(long, value_name = "FILE")]
    dump_spqr: Option<PathBuf>,
    /// Print the report as JSON.
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct MaximalArgs {
    #[command(flatten)]
    input: Input,
    #[arg(long)]
    certificate: bool,
    #[arg(long)]
    json: bool,
    /// Confirm with the oracle that every skipped row breaks graphicness.
    #[arg(long)]
    verify: bool,
}

#[derive(Args)]
struct GenArgs {
    /// Overridden by the GRAPHREC_SEED environment variable.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    vertices: usize,
    #[arg(long)]
    edges: usize,
    #[arg(long, default_value_t = 1)]
    count: usize,
    /// Forbid parallel edges.
    #[arg(long)]
    simple: bool,
    #[arg(long, default_value = "coordinate")]
    format: MatrixFormat,
    /// Directory for the generated files; standard output when omitted.
    #[arg(long)]
    out_dir: Option<PathBuf>,
}

#[derive(Args)]
struct OracleArgs {
    /// Matrix file to compare on; omit with --random.
    path: Option<PathBuf>,
    #[arg(long, default_value = "coordinate")]
    format: MatrixFormat,
    /// Number of random trials instead of a file.
    #[arg(long, value_name = "TRIALS")]
    random: Option<usize>,
    /// Overridden by the GRAPHREC_SEED environment variable.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 6)]
    max_rows: usize,
    #[arg(long, default_value_t = 6)]
    max_cols: usize,
    #[arg(long)]
    json: bool,
}

struct Failure(String);

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Check(a) => check(a),
        Command::Maximal(a) => maximal(a),
        Command::Gen(a) => gen(a),
        Command::OracleCheck(a) => oracle_check(a),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(Failure(msg)) => {
            eprintln!("graphrec: {msg}");
            ExitCode::from(2)
        }
    }
}

fn seed(flag: u64) -> Result<u64, Failure> {
    match std::env::var(SEED_ENV) {
        Ok(s) => s.trim().parse().map_err(|_| Failure(format!("{SEED_ENV}={s:?} is not an unsigned integer"))),
        Err(_) => Ok(flag),
    }
}

fn read_matrix(path: &Path, format: MatrixFormat) -> Result<SparseBinaryMatrix, Failure> {
    let text = if path.as_os_str() == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s)?;
        s
    } else {
        fs::read_to_string(path).map_err(|e| Failure(format!("{}: {e}", path.display())))?
    };
    parse_matrix(&text, format).map_err(|e| Failure(format!("{}: {e}", path.display())))
}

#[derive(Serialize)]
struct TraceLine {
    row: usize,
    label: String,
    accepted: bool,
    ops: u64,
}

#[derive(Serialize)]
struct Timings {
    parse_ms: f64,
    run_ms: f64,
}

#[derive(Serialize)]
struct CheckReport {
    command: &'static str,
    input: String,
    rows: usize,
    cols: usize,
    graphic: bool,
    first_rejected: Option<usize>,
    first_rejected_label: Option<String>,
    trace: Vec<TraceLine>,
    timings: Timings,
    stats: ForestStats,
    certificate: Option<GraphTreePair>,
}

fn trace_lines(m: &SparseBinaryMatrix, trace: &[RowTrace]) -> Vec<TraceLine> {
    trace
        .iter()
        .map(|t| TraceLine { row: t.row, label: m.row_labels()[t.row].clone(), accepted: t.accepted, ops: t.ops })
        .collect()
}

fn print_certificate(m: &SparseBinaryMatrix, g: &GraphTreePair) {
    println!("certificate: {} vertices, {} edges", g.num_vertices, g.edges.len());
    for e in &g.edges {
        let (label, kind) = match e.origin {
            Origin::Row(r) => (m.row_labels()[r].as_str(), "tree"),
            Origin::Col(c) => (m.col_labels()[c].as_str(), "cotree"),
            Origin::Virtual => ("?", "virtual"),
        };
        println!("{} {} {} {}", e.u, e.v, label, kind);
    }
}

fn dump_forest(forest: &mut SpqrForest, path: &Path) -> Result<(), Failure> {
    let text = if path.extension().is_some_and(|e| e == "dot") { to_dot(forest) } else { to_json(forest) };
    fs::write(path, text).map_err(|e| Failure(format!("{}: {e}", path.display())))
}

fn ms(t: Instant) -> f64 {
    t.elapsed().as_secs_f64() * 1e3
}

fn check(a: CheckArgs) -> Result<u8, Failure> {
    let t0 = Instant::now();
    let m = read_matrix(&a.input.path, a.input.format)?;
    let parse_ms = ms(t0);
    let t1 = Instant::now();
    let mut rep = is_graphic(&m);
    let run_ms = ms(t1);
    if let Some(p) = &a.dump_spqr {
        dump_forest(&mut rep.forest, p)?;
    }
    let report = CheckReport {
        command: "check",
        input: a.input.path.display().to_string(),
        rows: m.num_rows(),
        cols: m.num_cols(),
        graphic: rep.graphic,
        first_rejected: rep.first_rejected,
        first_rejected_label: rep.first_rejected.map(|r| m.row_labels()[r].clone()),
        trace: trace_lines(&m, &rep.trace),
        timings: Timings { parse_ms, run_ms },
        stats: rep.stats.clone(),
        certificate: if a.certificate { rep.certificate.clone() } else { None },
    };
    if a.json {
        println!("{}", serde_json::to_string_pretty(&report)?);
    } else {
        match report.first_rejected {
            None => println!("graphic: {} x {} matrix", report.rows, report.cols),
            Some(r) => println!("not graphic: row {} ({}) rejected", r + 1, m.row_labels()[r]),
        }
        let s = &report.stats;
        println!(
            "forest: {} trees, {} S, {} P, {} Q, {} R, {} skeleton edges",
            s.trees, s.s_nodes, s.p_nodes, s.q_nodes, s.r_nodes, s.skeleton_edges
        );
        if let Some(g) = &report.certificate {
            print_certificate(&m, g);
        }
    }
    Ok(if rep.graphic { 0 } else { 1 })
}

#[derive(Serialize)]
struct MaximalOut {
    command: &'static str,
    input: String,
    rows: usize,
    cols: usize,
    kept: Vec<usize>,
    skipped: Vec<usize>,
    trace: Vec<TraceLine>,
    stats: ForestStats,
    verified: Option<bool>,
    certificate: Option<GraphTreePair>,
}

/// Oracle confirmation that the kept rows are graphic and each skipped row
/// breaks that.
fn verify_maximal(m: &SparseBinaryMatrix, kept: &[usize], skipped: &[usize]) -> Result<bool, Failure> {
    if !oracle_is_graphic(&m.select_rows(kept))?.graphic {
        return Ok(false);
    }
    for &r in skipped {
        let mut sel = kept.to_vec();
        sel.push(r);
        sel.sort_unstable();
        if oracle_is_graphic(&m.select_rows(&sel))?.graphic {
            return Ok(false);
        }
    }
    Ok(true)
}

fn maximal(a: MaximalArgs) -> Result<u8, Failure> {
    let m = read_matrix(&a.input.path, a.input.format)?;
    let rep = maximal_graphic_rows(&m);
    let verified = if a.verify { Some(verify_maximal(&m, &rep.kept, &rep.skipped)?) } else { None };
    let out = MaximalOut {
        command: "maximal",
        input: a.input.path.display().to_string(),
        rows: m.num_rows(),
        cols: m.num_cols(),
        kept: rep.kept.clone(),
        skipped: rep.skipped.clone(),
        trace: trace_lines(&m, &rep.trace),
        stats: rep.stats.clone(),
        verified,
        certificate: if a.certificate { Some(rep.certificate.clone()) } else { None },
    };
    if a.json {
        println!("{}", serde_json::to_string_pretty(&out)?);
    } else {
        let names = |rows: &[usize]| rows.iter().map(|&r| m.row_labels()[r].clone()).collect::<Vec<_>>().join(" ");
        println!("kept {} of {} rows: {}", out.kept.len(), out.rows, names(&out.kept));
        println!("skipped: {}", names(&out.skipped));
        if let Some(v) = verified {
            println!("oracle verification: {}", if v { "passed" } else { "FAILED" });
        }
        if let Some(g) = &out.certificate {
            print_certificate(&m, g);
        }
    }
    Ok(if verified == Some(false) { 1 } else { 0 })
}

fn extension(f: MatrixFormat) -> &'static str {
    match f {
        MatrixFormat::Coordinate => "mtx",
        MatrixFormat::Dense => "dense",
        MatrixFormat::RowList => "rows",
    }
}

fn gen(a: GenArgs) -> Result<u8, Failure> {
    let base = seed(a.seed)?;
    if let Some(dir) = &a.out_dir {
        fs::create_dir_all(dir)?;
    }
    for i in 0..a.count {
        let s = base.wrapping_add(i as u64);
        let (_, m) = random_graphic_instance(s, a.vertices, a.edges, a.simple)?;
        let text = serialize_matrix(&m, a.format);
        match &a.out_dir {
            Some(dir) => {
                let path = dir.join(format!("graphic-{s}.{}", extension(a.format)));
                fs::write(&path, text)?;
                println!("{}", path.display());
            }
            None => {
                if a.count > 1 {
                    println!("% seed {s}");
                }
                print!("{text}");
            }
        }
    }
    Ok(0)
}

#[derive(Serialize)]
struct Comparison {
    graphic: bool,
    oracle_graphic: bool,
    trees_examined: u64,
}

#[derive(Serialize)]
struct AgreementReport {
    trials: usize,
    agreed: usize,
    graphic: usize,
    non_graphic: usize,
    by_construction: usize,
    disagreements: Vec<u64>,
}

fn compare(m: &SparseBinaryMatrix) -> Result<Comparison, Failure> {
    let ours = is_graphic(m);
    let truth = oracle_is_graphic(m)?;
    if let Some(c) = &ours.certificate {
        if !verify_realization(m, c) {
            return Err(Failure("certificate does not reproduce the matrix".into()));
        }
    }
    Ok(Comparison { graphic: ours.graphic, oracle_graphic: truth.graphic, trees_examined: truth.trees_examined })
}

fn oracle_check(a: OracleArgs) -> Result<u8, Failure> {
    if a.max_rows > ORACLE_MAX_ROWS {
        return Err(Failure(format!("--max-rows {} exceeds the oracle limit of {ORACLE_MAX_ROWS}", a.max_rows)));
    }
    match (&a.path, a.random) {
        (Some(path), None) => {
            let m = read_matrix(path, a.format)?;
            let c = compare(&m)?;
            if a.json {
                println!("{}", serde_json::to_string_pretty(&c)?);
            } else {
                let word = |g: bool| if g { "graphic" } else { "not graphic" };
                println!("decision: {}", word(c.graphic));
                println!("oracle:   {} ({} trees examined)", word(c.oracle_graphic), c.trees_examined);
            }
            Ok(if c.graphic == c.oracle_graphic { 0 } else { 1 })
        }
        (None, Some(trials)) => {
            let base = seed(a.seed)?;
            let mut rep =
                AgreementReport { trials, agreed: 0, graphic: 0, non_graphic: 0, by_construction: 0, disagreements: Vec::new() };
            for i in 0..trials {
                let s = base.wrapping_add(i as u64);
                let m = if i % 4 == 0 {
                    rep.by_construction += 1;
                    let nv = 2 + (s as usize % a.max_rows.max(1));
                    let extra = (s as usize / 7) % (a.max_cols + 1);
                    random_graphic_instance(s, nv, nv - 1 + extra, false)?.1
                } else {
                    random_matrix(s, a.max_rows, a.max_cols)
                };
                let c = compare(&m)?;
                if c.graphic == c.oracle_graphic {
                    rep.agreed += 1;
                } else {
                    rep.disagreements.push(s);
                }
                if c.oracle_graphic {
                    rep.graphic += 1;
                } else {
                    rep.non_graphic += 1;
                }
            }
            if a.json {
                println!("{}", serde_json::to_string_pretty(&rep)?);
            } else {
                println!(
                    "{}/{} agree ({} graphic, {} not graphic, {} graphic by construction)",
                    rep.agreed, rep.trials, rep.graphic, rep.non_graphic, rep.by_construction
                );
                for s in &rep.disagreements {
                    println!("disagreement at seed {s}");
                }
            }
            Ok(if rep.disagreements.is_empty() { 0 } else { 1 })
        }
        _ => Err(Failure("give either a matrix path or --random TRIALS".into())),
    }
}
