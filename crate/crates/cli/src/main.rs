mod input;
mod manifest;

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;
use starprod::constructions::chi_base;
use starprod::derived::{self, DERIVED_MAX_NODES};
use starprod::solver::{decide_k_counted, Decision};
use starprod::table::{self, TableKind, TableOptions};
use starprod::{
    builtin_bank, chi_formula, chi_star, load_bank, verify, verify_star_forest, ChiKind, ChiResult,
    Coloring, Constructor, Family, PatternBank, ProductSpec, Provenance, SolverBudget,
    KNOWN_COUNTEREXAMPLES,
};

use crate::input::{load_coloring, load_graph, parse_count, parse_inline_colors};
use crate::manifest::{sha256_hex, RunManifest};

const EXIT_SEMANTIC: u8 = 1;
const EXIT_PARSE: u8 = 2;
const EXIT_BUDGET: u8 = 3;

#[derive(Parser)]
#[command(
    name = "starprod",
    version,
    about = "Star colorings of tensor products of paths and cycles"
)]
struct Cli {
    /// Output format (defaults: csv for tables, json otherwise).
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Write the main output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Search-node budget per solver decision; accepts `1e8`.
    #[arg(long, global = true, value_parser = parse_count, default_value = "1000000000")]
    max_nodes: u64,
    /// Seed for randomized checks.
    #[arg(long, global = true, default_value_t = 20240611)]
    seed: u64,
    /// Also write a run manifest (digests of inputs and output) here.
    #[arg(long, global = true)]
    manifest: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Md,
}

#[derive(Subcommand)]
enum Command {
    /// Check that a coloring is a star coloring of a graph.
    Verify(VerifyArgs),
    /// Star chromatic number by search, closed form, or construction.
    Chi(ChiArgs),
    /// Formula / construction / solver grid for pp, cc or cp products.
    Table(TableArgs),
    /// Recompute the cached solver witnesses and refutations.
    RegenDerived(RegenArgs),
    /// Run internal consistency checks.
    Selfcheck,
    /// List the pattern bank, or print one entry as CSV.
    Bank { id: Option<String> },
}

#[derive(Args)]
struct VerifyArgs {
    /// Product spec (e.g. C3xC4) or a DIMACS/JSON graph file.
    graph: String,
    /// Coloring file: JSON or pattern CSV.
    coloring: Option<PathBuf>,
    /// Inline colors, e.g. 1,2,1,2.
    #[arg(long, conflicts_with = "coloring")]
    colors: Option<String>,
}

#[derive(Args)]
struct ChiArgs {
    /// Product spec or graph file.
    target: String,
    /// Exhaustive search (the default)
    #[arg(long, group = "mode")]
    exact: bool,
    /// Closed-form value for Pm x Pn, Cm x Cn, Cm x Pn and base families
    #[arg(long, group = "mode")]
    formula: bool,
    /// Build and verify an explicit coloring
    #[arg(long, group = "mode")]
    construct: bool,
    /// Decide a single k instead of computing the minimum.
    #[arg(long, requires = "exact")]
    k: Option<usize>,
    /// Where --construct writes the pattern CSV (default `<spec>.csv`).
    #[arg(long)]
    witness: Option<PathBuf>,
}

#[derive(Args)]
struct TableArgs {
    #[arg(value_enum)]
    which: Which,
    #[arg(long)]
    m_min: Option<usize>,
    #[arg(long, default_value_t = 12)]
    m_max: usize,
    #[arg(long)]
    n_min: Option<usize>,
    #[arg(long, default_value_t = 12)]
    n_max: usize,
    /// Cross-check with the solver on products with at most this many vertices.
    #[arg(long, default_value_t = 0)]
    solver_check_upto: usize,
}

#[derive(Copy, Clone, ValueEnum)]
enum Which {
    Pp,
    Cc,
    Cp,
}

#[derive(Args)]
struct RegenArgs {
    /// Output directory for derived.json and manifest.json.
    #[arg(long, default_value = "derived")]
    dir: PathBuf,
}

struct Output {
    text: String,
    code: u8,
}

impl Output {
    fn ok(text: String) -> Self {
        Output { text, code: 0 }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(classify(&err))
        }
    }
}

fn classify(err: &anyhow::Error) -> u8 {
    for cause in err.chain() {
        if let Some(e) = cause.downcast_ref::<starprod::Error>() {
            use starprod::Error::*;
            return match e {
                Parse(_)
                | LengthMismatch { .. }
                | InvalidInputColoring(_)
                | Io(_)
                | UnknownEntry(_)
                | SizeTooSmall(_)
                | WrapTooSmall(_) => EXIT_PARSE,
                BudgetExceeded { .. } => EXIT_BUDGET,
                _ => EXIT_SEMANTIC,
            };
        }
        if cause.is::<std::io::Error>() || cause.is::<serde_json::Error>() {
            return EXIT_PARSE;
        }
    }
    EXIT_SEMANTIC
}

fn run(cli: &Cli) -> Result<u8> {
    let start = Instant::now();
    let mut manifest = RunManifest::new(std::env::args().collect(), cli.max_nodes, cli.seed);
    let budget = SolverBudget::nodes(cli.max_nodes);
    let bank = bank_from_env()?;
    let ctor = Constructor::new(&bank);
    let out = match &cli.command {
        Command::Verify(a) => cmd_verify(a, &mut manifest)?,
        Command::Chi(a) => cmd_chi(a, &budget, &ctor, &mut manifest)?,
        Command::Table(a) => cmd_table(a, cli.format.unwrap_or(Format::Csv), &budget, &ctor)?,
        Command::RegenDerived(a) => cmd_regen(a, cli.max_nodes, &mut manifest)?,
        Command::Selfcheck => cmd_selfcheck(cli.seed, &bank)?,
        Command::Bank { id } => cmd_bank(id.as_deref(), cli.format.unwrap_or(Format::Csv), &bank)?,
    };
    match &cli.out {
        Some(path) => std::fs::write(path, &out.text)
            .with_context(|| format!("writing {}", path.display()))?,
        None => print!("{}", out.text),
    }
    if let Some(path) = &cli.manifest {
        manifest.results_sha256 = sha256_hex(out.text.as_bytes());
        manifest.wall_seconds = start.elapsed().as_secs_f64();
        std::fs::write(path, manifest.to_json())
            .with_context(|| format!("writing {}", path.display()))?;
    }
    Ok(out.code)
}

fn bank_from_env() -> Result<PatternBank> {
    match std::env::var_os("STARPROD_BANK") {
        Some(dir) => load_bank(Path::new(&dir))
            .with_context(|| format!("loading bank from {}", dir.to_string_lossy())),
        None => Ok(builtin_bank()),
    }
}

fn pretty(v: &impl serde::Serialize) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

fn cmd_verify(a: &VerifyArgs, manifest: &mut RunManifest) -> Result<Output> {
    let g = load_graph(&a.graph, manifest)?;
    let c = match (&a.coloring, &a.colors) {
        (Some(path), _) => load_coloring(path, manifest)?.coloring(),
        (None, Some(list)) => parse_inline_colors(list)?,
        (None, None) => bail!(starprod::Error::Parse(
            "give a coloring file or --colors".into()
        )),
    };
    let report = verify(&g, &c)?;
    let code = if report.is_star { 0 } else { EXIT_SEMANTIC };
    let violation = report.first_violation().map(|v| v.to_string());
    let body = json!({
        "graph": g.label().to_string(),
        "n": g.n(),
        "k": c.num_colors(),
        "proper_violation": report.proper_violation,
        "star_violation": report.star_violation,
        "is_star": report.is_star,
        "message": violation,
    });
    Ok(Output {
        text: pretty(&body),
        code,
    })
}

fn cmd_chi(
    a: &ChiArgs,
    budget: &SolverBudget,
    ctor: &Constructor<'_>,
    manifest: &mut RunManifest,
) -> Result<Output> {
    if a.formula {
        return chi_by_formula(&a.target);
    }
    if a.construct {
        return chi_by_construction(a, ctor);
    }
    let g = load_graph(&a.target, manifest)?;
    if let Some(k) = a.k {
        let out = decide_k_counted(&g, k, budget);
        let (answer, witness, code) = match out.decision {
            Decision::Yes(w) => ("yes", Some(w.colors().to_vec()), 0),
            Decision::No => ("no", None, 0),
            Decision::Unknown => ("unknown", None, EXIT_BUDGET),
        };
        let body = json!({ "k": k, "decision": answer, "nodes": out.nodes, "witness": witness });
        return Ok(Output {
            text: pretty(&body),
            code,
        });
    }
    let r = chi_star(&g, budget);
    let code = if r.is_exact() { 0 } else { EXIT_BUDGET };
    Ok(Output {
        text: pretty(&r),
        code,
    })
}

fn chi_by_formula(target: &str) -> Result<Output> {
    let family: Family = target.parse()?;
    let kind = match family {
        Family::Path(_) | Family::Cycle(_) => ChiKind::Exact(chi_base(&family)?),
        _ => {
            let spec: ProductSpec = target.parse()?;
            if let starprod::Shape::CP(m, n) = spec.shape()? {
                if let Some((_, _, published, computed)) =
                    KNOWN_COUNTEREXAMPLES.iter().find(|c| (c.0, c.1) == (m, n))
                {
                    eprintln!("note: closed form gives {published}; exhaustive search finds {computed} (run `chi --exact`)");
                }
            }
            chi_formula(&spec)?.kind
        }
    };
    Ok(Output::ok(pretty(&ChiResult {
        kind,
        witness: None,
        provenance: Provenance::Formula,
    })))
}

fn chi_by_construction(a: &ChiArgs, ctor: &Constructor<'_>) -> Result<Output> {
    let spec: ProductSpec = a.target.parse()?;
    let pattern = ctor.pattern(&spec)?;
    let formula = chi_formula(&spec)?.kind;
    let path = a
        .witness
        .clone()
        .unwrap_or_else(|| PathBuf::from(format!("{spec}.csv")));
    std::fs::write(&path, pattern.to_csv(Some("construction")))
        .with_context(|| format!("writing {}", path.display()))?;
    let k = pattern.num_colors();
    let kind = if formula.lo() == k {
        ChiKind::Exact(k)
    } else {
        ChiKind::Range(formula.lo(), k)
    };
    let code = if k == formula.hi() { 0 } else { EXIT_SEMANTIC };
    let mut body = serde_json::to_value(ChiResult {
        kind,
        witness: None,
        provenance: Provenance::Construction,
    })?;
    body["witness_file"] = json!(path.display().to_string());
    Ok(Output {
        text: pretty(&body),
        code,
    })
}

fn cmd_table(
    a: &TableArgs,
    format: Format,
    budget: &SolverBudget,
    ctor: &Constructor<'_>,
) -> Result<Output> {
    let kind = match a.which {
        Which::Pp => TableKind::Pp,
        Which::Cc => TableKind::Cc,
        Which::Cp => TableKind::Cp,
    };
    let (m0, n0) = kind.minimums();
    let opts = TableOptions {
        m: (a.m_min.unwrap_or(m0), a.m_max),
        n: (a.n_min.unwrap_or(n0), a.n_max),
        solver_check_upto: a.solver_check_upto,
        budget: *budget,
    };
    let rows = table::build_table(kind, &opts, ctor)?;
    let bad: Vec<String> = rows
        .iter()
        .filter(|r| !r.consistent)
        .map(|r| format!("({},{})", r.m, r.n))
        .collect();
    if !bad.is_empty() {
        eprintln!(
            "cells where construction or solver disagree with the closed form: {}",
            bad.join(" ")
        );
    }
    let text = match format {
        Format::Csv => table::to_csv(&rows),
        Format::Md => table::to_markdown(&rows),
        Format::Json => table::to_json(&rows),
    };
    Ok(Output {
        text,
        code: if bad.is_empty() { 0 } else { EXIT_SEMANTIC },
    })
}

fn cmd_regen(a: &RegenArgs, max_nodes: u64, manifest: &mut RunManifest) -> Result<Output> {
    let start = Instant::now();
    let (records, incomplete) = derived::regenerate(max_nodes);
    if !incomplete.is_empty() {
        let list: Vec<String> = incomplete
            .iter()
            .map(|(g, k)| format!("{g} k={k}"))
            .collect();
        let body = json!({ "complete": false, "incomplete": list, "max_nodes": max_nodes });
        return Ok(Output {
            text: pretty(&body),
            code: EXIT_BUDGET,
        });
    }
    std::fs::create_dir_all(&a.dir)?;
    let text = derived::records_to_json(&records);
    std::fs::write(a.dir.join("derived.json"), &text)?;
    manifest.results_sha256 = sha256_hex(text.as_bytes());
    manifest.wall_seconds = start.elapsed().as_secs_f64();
    std::fs::write(a.dir.join("manifest.json"), manifest.to_json())?;
    let body = json!({
        "complete": true,
        "records": records.len(),
        "max_nodes": max_nodes,
        "default_max_nodes": DERIVED_MAX_NODES,
        "sha256": manifest.results_sha256,
        "matches_builtin": text == derived::builtin_cache_text(),
    });
    Ok(Output::ok(pretty(&body)))
}

fn cmd_selfcheck(seed: u64, bank: &PatternBank) -> Result<Output> {
    let mut failures = Vec::new();
    for e in bank.iter() {
        if !e.pattern.verify().is_star {
            failures.push(format!("bank {}", e.id));
        }
    }
    for r in derived::builtin_records() {
        if let Some(w) = r.witness() {
            let g = starprod::build_family(&r.graph.parse()?)?;
            if !verify(&g, &w)?.is_star {
                failures.push(format!("derived {}", r.graph));
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut next = move |bound: u64| rng.gen_range(0..bound);
    let mut agreements = 0;
    for _ in 0..200 {
        let (m, n) = (3 + next(6) as usize, 3 + next(6) as usize);
        let g = starprod::build_family(&format!("C{m}xP{n}").parse()?)?;
        // random proper coloring: 5 colors suffice since degrees are at most 4
        let mut colors = vec![0u32; g.n()];
        for v in 0..g.n() {
            let free: Vec<u32> = (1..=5)
                .filter(|c| g.neighbors(v).iter().all(|&w| colors[w] != *c))
                .collect();
            colors[v] = free[next(free.len() as u64) as usize];
        }
        let c = Coloring::new(colors)?;
        if verify(&g, &c)?.is_star == verify_star_forest(&g, &c)? {
            agreements += 1;
        } else {
            failures.push(format!("verifiers disagree on C{m}xP{n}"));
        }
    }
    let ctor = Constructor::new(bank);
    let mut constructions = 0;
    for _ in 0..50 {
        let (m, n) = (3 + next(30) as usize, 3 + next(30) as usize);
        for spec in [
            ProductSpec::cc(m, n)?,
            ProductSpec::cp(m, n)?,
            ProductSpec::pp(m, n)?,
        ] {
            match ctor.pattern(&spec) {
                Ok(p) if p.num_colors() == chi_formula(&spec)?.kind.hi() => constructions += 1,
                Ok(_) => failures.push(format!("{spec}: color count differs from the closed form")),
                Err(e) => failures.push(format!("{spec}: {e}")),
            }
        }
    }
    let body = json!({
        "seed": seed,
        "bank_entries": bank.len(),
        "verifier_agreements": agreements,
        "constructions": constructions,
        "failures": failures,
    });
    Ok(Output {
        text: pretty(&body),
        code: if failures.is_empty() {
            0
        } else {
            EXIT_SEMANTIC
        },
    })
}

fn cmd_bank(id: Option<&str>, format: Format, bank: &PatternBank) -> Result<Output> {
    if let Some(id) = id {
        let e = bank.get(id)?;
        return Ok(Output::ok(e.pattern.to_csv(Some(&e.source))));
    }
    let rows: Vec<_> = bank
        .iter()
        .map(|e| {
            json!({
                "id": e.id, "rows": e.pattern.rows(), "cols": e.pattern.cols(),
                "colors": e.pattern.num_colors(), "source": e.source, "verified": e.verified,
            })
        })
        .collect();
    let text = match format {
        Format::Json => pretty(&rows),
        Format::Csv | Format::Md => {
            let md = format == Format::Md;
            let sep = if md { " | " } else { "," };
            let line = |cells: &[String]| {
                if md {
                    format!("| {} |\n", cells.join(sep))
                } else {
                    format!("{}\n", cells.join(sep))
                }
            };
            let header: Vec<String> = ["id", "rows", "cols", "colors", "source", "verified"]
                .map(String::from)
                .to_vec();
            let mut s = line(&header);
            if md {
                s.push_str(&format!("|{}\n", "---|".repeat(header.len())));
            }
            for e in bank.iter() {
                let cells = [
                    e.id.clone(),
                    e.pattern.rows().to_string(),
                    e.pattern.cols().to_string(),
                    e.pattern.num_colors().to_string(),
                    e.source.clone(),
                    e.verified.to_string(),
                ];
                s.push_str(&line(&cells));
            }
            s
        }
    };
    Ok(Output::ok(text))
}
