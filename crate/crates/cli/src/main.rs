//! Command-line front end: solve, chromatic, reduce, verify, scan and
//! encode-cnf over the formats described in docs/formats.md.
//!
//! Exit codes: 0 success, 1 operational error, 2 counterexample candidate
//! recorded, 64 usage error. All output is deterministic for a fixed
//! invocation and seed.

use std::fs;
use std::io::{self, BufReader, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::error::ErrorKind;
use clap::{Parser, Subcommand, ValueEnum};

use sgcol::graph::Graph;
use sgcol::harness::{scan, verify_certificate, ScanConfig, ScanMode};
use sgcol::io::report::{parse_report_line, write_report_line};
use sgcol::io::{parse_signed_graph, CorpusFormat, CorpusReader};
use sgcol::reduction::{list_colour_via_signature, ListAssignment, ListColourOutcome};
use sgcol::solver::{chromatic_number, encode_cnf, solve_k, Budget, Verdict};

#[derive(Parser)]
#[command(name = "sgcol", version, about = "Exact signed-graph colouring toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Graph6,
    Sparse6,
    PlanarCode,
}

impl From<FormatArg> for CorpusFormat {
    fn from(arg: FormatArg) -> CorpusFormat {
        match arg {
            FormatArg::Graph6 => CorpusFormat::Graph6,
            FormatArg::Sparse6 => CorpusFormat::Sparse6,
            FormatArg::PlanarCode => CorpusFormat::PlanarCode,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum GraphFormatArg {
    SignedText,
    Graph6,
    Sparse6,
    PlanarCode,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Conjecture1,
    Conjecture2Exhaustive,
    Conjecture2Random,
}

impl From<ModeArg> for ScanMode {
    fn from(arg: ModeArg) -> ScanMode {
        match arg {
            ModeArg::Conjecture1 => ScanMode::Conjecture1,
            ModeArg::Conjecture2Exhaustive => ScanMode::Conjecture2Exhaustive,
            ModeArg::Conjecture2Random => ScanMode::Conjecture2Random,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Decide signed k-colourability of one graph + signature (text format)
    Solve {
        /// Signed-graph text file (`n <count>`, then `u v [+|-]` lines)
        #[arg(long)]
        input: PathBuf,
        #[arg(long, default_value_t = 4)]
        k: u32,
    },
    /// Print the signed chromatic number of one graph + signature
    Chromatic {
        #[arg(long)]
        input: PathBuf,
    },
    /// Build the list-derived signature and print sigma, phi and the witness
    Reduce {
        /// Graph input (signature content is ignored; the lists define it)
        #[arg(long)]
        graph: PathBuf,
        /// List file (`v: a b` lines)
        #[arg(long)]
        lists: PathBuf,
        #[arg(long, value_enum, default_value = "signed-text")]
        format: GraphFormatArg,
        /// Record index when the graph input is a corpus
        #[arg(long, default_value_t = 0)]
        index: usize,
    },
    /// Re-check the certificates of a report against its corpus
    Verify {
        #[arg(long)]
        report: PathBuf,
        #[arg(long)]
        corpus: PathBuf,
        #[arg(long, value_enum)]
        format: FormatArg,
    },
    /// Scan a corpus for conjecture counterexample candidates
    Scan {
        #[arg(long)]
        corpus: PathBuf,
        #[arg(long, value_enum)]
        format: FormatArg,
        #[arg(long, value_enum)]
        mode: ModeArg,
        /// Colours per signature (signature scans only; list scans use 4)
        #[arg(long, default_value_t = 4)]
        k: u32,
        /// Palette size P; lists are 2-subsets of {1..P}
        #[arg(long, default_value_t = 4)]
        palette: u32,
        /// Random list assignments per graph
        #[arg(long, default_value_t = 1000)]
        samples: u32,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// 1 = sequential, 0 = all cores
        #[arg(long, default_value_t = 0)]
        workers: usize,
        /// Per-object search node cap
        #[arg(long)]
        budget_nodes: Option<u64>,
        /// Per-object wall-clock cap (breaks report determinism)
        #[arg(long)]
        budget_ms: Option<u64>,
        /// Cap on objects per graph before the graph is skipped
        #[arg(long, default_value_t = 1 << 22)]
        max_objects: u64,
        /// Report file (stdout when absent)
        #[arg(long)]
        out: Option<PathBuf>,
        /// Counterexample file (defaults to `<out>.ce` when --out is given)
        #[arg(long)]
        counterexamples: Option<PathBuf>,
        /// Scan all 2^|E| signatures instead of class representatives
        #[arg(long)]
        debug_full_signatures: bool,
        /// Include wall-clock ms in records (breaks byte-identical reports)
        #[arg(long)]
        emit_ms: bool,
    },
    /// Write the DIMACS CNF encoding of signed k-colourability
    EncodeCnf {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, default_value_t = 4)]
        k: u32,
        /// Output file (stdout when absent)
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    // tolerate a closed pipe while paging help
                    let _ = write!(io::stdout(), "{e}");
                    return ExitCode::SUCCESS;
                }
                _ => 64,
            };
            eprintln!("error: usage: {e}");
            return ExitCode::from(code);
        }
    };
    match run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(1)
        }
    }
}

fn run(command: Command) -> Result<u8> {
    match command {
        Command::Solve { input, k } => cmd_solve(&input, k),
        Command::Chromatic { input } => cmd_chromatic(&input),
        Command::Reduce {
            graph,
            lists,
            format,
            index,
        } => cmd_reduce(&graph, &lists, format, index),
        Command::Verify {
            report,
            corpus,
            format,
        } => cmd_verify(&report, &corpus, format.into()),
        Command::Scan {
            corpus,
            format,
            mode,
            k,
            palette,
            samples,
            seed,
            workers,
            budget_nodes,
            budget_ms,
            max_objects,
            out,
            counterexamples,
            debug_full_signatures,
            emit_ms,
        } => {
            let cfg = ScanConfig {
                mode: mode.into(),
                k,
                palette,
                samples,
                seed,
                workers,
                budget: Budget {
                    max_nodes: budget_nodes,
                    max_millis: budget_ms,
                },
                max_objects_per_graph: max_objects,
                debug_full_signatures,
                emit_millis: emit_ms,
            };
            cmd_scan(&corpus, format.into(), &cfg, out, counterexamples)
        }
        Command::EncodeCnf { input, k, out } => cmd_encode_cnf(&input, k, out),
    }
}

fn read_signed_input(path: &Path) -> Result<sgcol::signed::SignedGraph> {
    let text = fs::read_to_string(path)
        .with_context(|| format!("reading {}", path.display()))?;
    parse_signed_graph(&text).with_context(|| format!("parsing {}", path.display()))
}

fn cmd_solve(input: &Path, k: u32) -> Result<u8> {
    let sg = read_signed_input(input)?;
    match solve_k(&sg, k)? {
        Verdict::Satisfiable(f) => {
            let colours = f
                .colours()
                .iter()
                .map(|c| c.to_string())
                .collect::<Vec<_>>()
                .join(",");
            println!("outcome=colourable k={k} f={colours}");
        }
        Verdict::Unsatisfiable => println!("outcome=unsatisfiable k={k}"),
    }
    Ok(0)
}

fn cmd_chromatic(input: &Path) -> Result<u8> {
    let sg = read_signed_input(input)?;
    println!("{}", chromatic_number(&sg));
    Ok(0)
}

fn load_corpus(path: &Path, format: CorpusFormat) -> Result<Vec<Graph>> {
    let file = fs::File::open(path).with_context(|| format!("opening {}", path.display()))?;
    let reader = CorpusReader::new(format, BufReader::new(file));
    let mut graphs = Vec::new();
    for (index, item) in reader.enumerate() {
        graphs.push(item.with_context(|| format!("corpus record {index}"))?);
    }
    Ok(graphs)
}

fn cmd_reduce(
    graph_path: &Path,
    lists_path: &Path,
    format: GraphFormatArg,
    index: usize,
) -> Result<u8> {
    let graph = match format {
        GraphFormatArg::SignedText => read_signed_input(graph_path)?.graph().clone(),
        GraphFormatArg::Graph6 => corpus_record(graph_path, CorpusFormat::Graph6, index)?,
        GraphFormatArg::Sparse6 => corpus_record(graph_path, CorpusFormat::Sparse6, index)?,
        GraphFormatArg::PlanarCode => corpus_record(graph_path, CorpusFormat::PlanarCode, index)?,
    };
    let lists_text = fs::read_to_string(lists_path)
        .with_context(|| format!("reading {}", lists_path.display()))?;
    let lists = ListAssignment::parse(&lists_text)
        .with_context(|| format!("parsing {}", lists_path.display()))?;
    if lists.len() != graph.vertex_count() {
        bail!(
            "list file covers {} vertices but the graph has {}",
            lists.len(),
            graph.vertex_count()
        );
    }

    match list_colour_via_signature(&graph, &lists, &Budget::UNLIMITED)? {
        ListColourOutcome::Coloured(outcome) => {
            println!("sigma={}", outcome.sigma);
            let phi = outcome
                .phi
                .colours()
                .iter()
                .map(|c| c.to_string())
                .collect::<Vec<_>>()
                .join(",");
            println!("phi={phi}");
            for class in &outcome.witness.classes {
                let members = join_usize(&class.members);
                let psi = class
                    .psi
                    .iter()
                    .map(|(_, side)| side.to_string())
                    .collect::<Vec<_>>()
                    .join(",");
                println!(
                    "class colour={} members={members} psi={psi}",
                    class.colour
                );
            }
            Ok(0)
        }
        ListColourOutcome::SignatureUncolourable { sigma, .. } => {
            println!("outcome=signature-uncolourable sigma={sigma}");
            // for a planar graph this is a conjecture counterexample candidate
            Ok(2)
        }
    }
}

fn corpus_record(path: &Path, format: CorpusFormat, index: usize) -> Result<Graph> {
    let graphs = load_corpus(path, format)?;
    graphs
        .get(index)
        .cloned()
        .ok_or_else(|| anyhow!("corpus has {} records, index {index} out of range", graphs.len()))
}

fn join_usize(items: &[usize]) -> String {
    items
        .iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join(",")
}

fn cmd_verify(report: &Path, corpus: &Path, format: CorpusFormat) -> Result<u8> {
    let graphs = load_corpus(corpus, format)?;
    let text = fs::read_to_string(report)
        .with_context(|| format!("reading {}", report.display()))?;

    let mut verified = 0usize;
    let mut failed = 0usize;
    let mut unverifiable = 0usize;
    for (idx, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let record = parse_report_line(line)
            .map_err(|e| anyhow!("report line {}: {e}", idx + 1))?;
        if record.certificate.is_none() {
            unverifiable += 1;
            continue;
        }
        match verify_certificate(&record, &graphs) {
            Ok(true) => verified += 1,
            Ok(false) => {
                failed += 1;
                println!("line={} verdict=failed", idx + 1);
            }
            Err(e) => return Err(anyhow!("report line {}: {e}", idx + 1)),
        }
    }
    println!("verified={verified} failed={failed} unverifiable={unverifiable}");
    Ok(if failed > 0 { 1 } else { 0 })
}

fn cmd_scan(
    corpus: &Path,
    format: CorpusFormat,
    cfg: &ScanConfig,
    out: Option<PathBuf>,
    counterexamples: Option<PathBuf>,
) -> Result<u8> {
    let file = fs::File::open(corpus).with_context(|| format!("opening {}", corpus.display()))?;
    let reader = CorpusReader::new(format, BufReader::new(file));

    let mut report: Box<dyn Write> = match &out {
        Some(path) => Box::new(io::BufWriter::new(
            fs::File::create(path).with_context(|| format!("creating {}", path.display()))?,
        )),
        None => Box::new(io::stdout().lock()),
    };
    let ce_path = counterexamples.or_else(|| {
        out.as_ref()
            .map(|p| PathBuf::from(format!("{}.ce", p.display())))
    });
    let mut ce_file = match &ce_path {
        Some(path) => Some(io::BufWriter::new(
            fs::File::create(path).with_context(|| format!("creating {}", path.display()))?,
        )),
        None => None,
    };

    let mut write_error: Option<io::Error> = None;
    let summary = scan(reader, cfg, |record| {
        if write_error.is_some() {
            return;
        }
        let line = write_report_line(record);
        let result = writeln!(report, "{line}").and_then(|_| {
            if record.outcome.is_counterexample_candidate() {
                if let Some(ce) = ce_file.as_mut() {
                    return writeln!(ce, "{line}");
                }
            }
            Ok(())
        });
        if let Err(e) = result {
            write_error = Some(e);
        }
    })?;
    report.flush()?;
    if let Some(ce) = ce_file.as_mut() {
        ce.flush()?;
    }
    if let Some(e) = write_error {
        return Err(e).context("writing report");
    }

    eprintln!(
        "scanned graphs={} records={} colourable={} not-4-colourable={} \
         bipartite-classes-ok={} witness-failures={} skipped={}",
        summary.graphs,
        summary.records,
        summary.colourable,
        summary.not_four_colourable,
        summary.bipartite_classes_ok,
        summary.witness_failures,
        summary.skipped,
    );
    Ok(summary.exit_code() as u8)
}

fn cmd_encode_cnf(input: &Path, k: u32, out: Option<PathBuf>) -> Result<u8> {
    let sg = read_signed_input(input)?;
    let formula = encode_cnf(&sg, k)?;
    let dimacs = formula.to_dimacs();
    match out {
        Some(path) => fs::write(&path, dimacs)
            .with_context(|| format!("writing {}", path.display()))?,
        None => print!("{dimacs}"),
    }
    Ok(0)
}
