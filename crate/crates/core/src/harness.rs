//! Batch conjecture scanning over graph corpora.
//!
//! Conjecture-1 scans test every switching class of every corpus graph for
//! signed 4-colourability; conjecture-2 scans push 2-list assignments
//! through the signature reduction. Work items within a graph are
//! independent and run data-parallel when the `parallel` feature is enabled
//! and more than one worker is requested; record order is canonical (corpus
//! order, then object index) either way, so reports are byte-identical
//! across worker counts.

use std::fmt;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::graph::Graph;
use crate::io::report::certificate_token;
use crate::io::FormatError;
use crate::reduction::{
    list_colour_via_signature, palette_pairs, ListAssignment, ListColourOutcome, ReductionError,
};
use crate::signed::{enumerate_signature_classes, Signature, SignedGraph};
use crate::solver::{solve_k_budgeted, Budget, SolverError, Verdict};

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("corpus record {index}: {source}")]
    Corpus {
        index: usize,
        #[source]
        source: FormatError,
    },
    #[error("invalid scan config: {0}")]
    InvalidConfig(String),
    #[error("record references graph {0} beyond the corpus")]
    GraphIdOutOfRange(usize),
    #[error("record has no stored certificate to audit")]
    MissingCertificate,
    #[error("record certificate is malformed: {0}")]
    MalformedCertificate(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScanMode {
    Conjecture1,
    Conjecture2Exhaustive,
    Conjecture2Random,
}

impl ScanMode {
    pub fn parse_name(name: &str) -> Option<Self> {
        match name {
            "conjecture1" => Some(ScanMode::Conjecture1),
            "conjecture2-exhaustive" => Some(ScanMode::Conjecture2Exhaustive),
            "conjecture2-random" => Some(ScanMode::Conjecture2Random),
            _ => None,
        }
    }
}

#[derive(Debug, Clone)]
pub struct ScanConfig {
    pub mode: ScanMode,
    /// Colours tested per signature (the conjectures use 4).
    pub k: u32,
    /// Palette size P for list modes; lists are 2-subsets of {1..P}.
    pub palette: u32,
    /// Samples per graph in random list mode.
    pub samples: u32,
    pub seed: u64,
    /// 1 runs sequentially; 0 uses all cores (with the `parallel` feature);
    /// any other value sets the worker count.
    pub workers: usize,
    /// Per-object search budget.
    pub budget: Budget,
    /// Caps the number of objects per graph (signature classes or list
    /// assignments); beyond it the graph is recorded as skipped.
    pub max_objects_per_graph: u64,
    /// Scan all 2^|E| signatures instead of one representative per class.
    /// Validates the switching-class reduction on tiny graphs.
    pub debug_full_signatures: bool,
    /// Include wall-clock `ms=` in records. Off by default: wall time is
    /// not deterministic, and reports are byte-identical without it.
    pub emit_millis: bool,
}

impl Default for ScanConfig {
    fn default() -> Self {
        ScanConfig {
            mode: ScanMode::Conjecture1,
            k: 4,
            palette: 4,
            samples: 1000,
            seed: 0,
            workers: 0,
            budget: Budget::UNLIMITED,
            max_objects_per_graph: 1 << 22,
            debug_full_signatures: false,
            emit_millis: false,
        }
    }
}

/// What a scanned object turned out to be. `not-4-colourable` and
/// `witness-failure` are counterexample candidates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Colourable,
    NotFourColourable,
    BipartiteClassesOk,
    WitnessFailure,
    Skipped,
}

impl Outcome {
    pub fn as_str(self) -> &'static str {
        match self {
            Outcome::Colourable => "colourable",
            Outcome::NotFourColourable => "not-4-colourable",
            Outcome::BipartiteClassesOk => "bipartite-classes-ok",
            Outcome::WitnessFailure => "witness-failure",
            Outcome::Skipped => "skipped",
        }
    }

    pub fn parse_name(name: &str) -> Option<Self> {
        match name {
            "colourable" => Some(Outcome::Colourable),
            "not-4-colourable" => Some(Outcome::NotFourColourable),
            "bipartite-classes-ok" => Some(Outcome::BipartiteClassesOk),
            "witness-failure" => Some(Outcome::WitnessFailure),
            "skipped" => Some(Outcome::Skipped),
            _ => None,
        }
    }

    pub fn is_counterexample_candidate(self) -> bool {
        matches!(self, Outcome::NotFourColourable | Outcome::WitnessFailure)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SkipReason {
    EulerScreen,
    SearchBudget,
    ObjectBudget,
}

impl SkipReason {
    pub fn as_str(self) -> &'static str {
        match self {
            SkipReason::EulerScreen => "euler-screen",
            SkipReason::SearchBudget => "search-budget",
            SkipReason::ObjectBudget => "object-budget",
        }
    }

    pub fn parse_name(name: &str) -> Option<Self> {
        match name {
            "euler-screen" => Some(SkipReason::EulerScreen),
            "search-budget" => Some(SkipReason::SearchBudget),
            "object-budget" => Some(SkipReason::ObjectBudget),
            _ => None,
        }
    }
}

/// Identifies the object a record is about: a signature (bit string over
/// edge indices), a list assignment (digest of its canonical form), or the
/// whole graph for per-graph skips.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ObjectId {
    Signature(String),
    Lists(String),
    WholeGraph,
}

impl fmt::Display for ObjectId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ObjectId::Signature(pm) => write!(f, "s:{pm}"),
            ObjectId::Lists(digest) => write!(f, "l:{digest}"),
            ObjectId::WholeGraph => f.write_str("-"),
        }
    }
}

/// Stored certificate: the colouring for `colourable` records, the
/// L-colouring for `bipartite-classes-ok` records.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Certificate {
    SignedColouring(Vec<i32>),
    ListColouring(Vec<u32>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScanRecord {
    pub graph_id: usize,
    pub object: ObjectId,
    pub k: u32,
    pub outcome: Outcome,
    /// Search nodes spent on the object; the deterministic cost measure.
    pub nodes: u64,
    pub certificate: Option<Certificate>,
    /// Full signature; always present on `not-4-colourable` records.
    pub sigma: Option<String>,
    /// Canonical list assignment; present on list-mode counterexample
    /// candidates so they can be reproduced directly.
    pub lists: Option<String>,
    pub reason: Option<SkipReason>,
    /// Wall time, only when the scan opts in; breaks byte-identity.
    pub millis: Option<u64>,
    /// Certificate digest as read back from a report; fresh records carry
    /// None and the digest is computed when the line is written.
    pub digest: Option<String>,
}

impl ScanRecord {
    fn skipped(graph_id: usize, object: ObjectId, k: u32, reason: SkipReason) -> Self {
        ScanRecord {
            graph_id,
            object,
            k,
            outcome: Outcome::Skipped,
            nodes: 0,
            certificate: None,
            sigma: None,
            lists: None,
            reason: Some(reason),
            millis: None,
            digest: None,
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct ScanSummary {
    pub graphs: usize,
    pub records: usize,
    pub colourable: usize,
    pub not_four_colourable: usize,
    pub bipartite_classes_ok: usize,
    pub witness_failures: usize,
    pub skipped: usize,
}

impl ScanSummary {
    pub fn counterexample_candidates(&self) -> usize {
        self.not_four_colourable + self.witness_failures
    }

    /// Process exit status: 0 clean, 2 when a counterexample candidate was
    /// recorded. Operational failures surface as errors instead.
    pub fn exit_code(&self) -> i32 {
        if self.counterexample_candidates() > 0 {
            2
        } else {
            0
        }
    }

    fn count(&mut self, record: &ScanRecord) {
        self.records += 1;
        match record.outcome {
            Outcome::Colourable => self.colourable += 1,
            Outcome::NotFourColourable => self.not_four_colourable += 1,
            Outcome::BipartiteClassesOk => self.bipartite_classes_ok += 1,
            Outcome::WitnessFailure => self.witness_failures += 1,
            Outcome::Skipped => self.skipped += 1,
        }
    }
}

/// Runs the configured scan over a corpus stream, pushing each record to
/// `sink` in canonical order. Corpus errors abort with the failing record
/// index.
pub fn scan<I>(
    corpus: I,
    cfg: &ScanConfig,
    mut sink: impl FnMut(&ScanRecord),
) -> Result<ScanSummary, HarnessError>
where
    I: IntoIterator<Item = Result<Graph, FormatError>>,
{
    validate(cfg)?;
    let pool = WorkerPool::new(cfg.workers);
    let mut summary = ScanSummary::default();
    for (graph_id, item) in corpus.into_iter().enumerate() {
        let graph = item.map_err(|source| HarnessError::Corpus {
            index: graph_id,
            source,
        })?;
        summary.graphs += 1;
        let records = scan_graph(&graph, graph_id, cfg, &pool);
        for record in &records {
            summary.count(record);
            sink(record);
        }
    }
    Ok(summary)
}

fn validate(cfg: &ScanConfig) -> Result<(), HarnessError> {
    if cfg.k == 0 {
        return Err(HarnessError::InvalidConfig("k must be at least 1".into()));
    }
    match cfg.mode {
        ScanMode::Conjecture1 => Ok(()),
        ScanMode::Conjecture2Exhaustive | ScanMode::Conjecture2Random => {
            if cfg.palette < 2 {
                return Err(HarnessError::InvalidConfig(format!(
                    "palette must be at least 2 for list modes, got {}",
                    cfg.palette
                )));
            }
            Ok(())
        }
    }
}

fn scan_graph(
    graph: &Graph,
    graph_id: usize,
    cfg: &ScanConfig,
    pool: &WorkerPool,
) -> Vec<ScanRecord> {
    let record_k = match cfg.mode {
        ScanMode::Conjecture1 => cfg.k,
        _ => 4, // the reduction pipeline is inherently about 4-colourings
    };
    if !graph.passes_euler_bound() {
        return vec![ScanRecord::skipped(
            graph_id,
            ObjectId::WholeGraph,
            record_k,
            SkipReason::EulerScreen,
        )];
    }
    match cfg.mode {
        ScanMode::Conjecture1 => scan_signatures(graph, graph_id, cfg, pool),
        ScanMode::Conjecture2Exhaustive => scan_lists_exhaustive(graph, graph_id, cfg, pool),
        ScanMode::Conjecture2Random => scan_lists_random(graph, graph_id, cfg, pool),
    }
}

fn scan_signatures(
    graph: &Graph,
    graph_id: usize,
    cfg: &ScanConfig,
    pool: &WorkerPool,
) -> Vec<ScanRecord> {
    let object_count: u64 = if cfg.debug_full_signatures {
        1u64.checked_shl(graph.edge_count() as u32)
            .unwrap_or(u64::MAX)
    } else {
        enumerate_signature_classes(graph).len()
    };
    if object_count > cfg.max_objects_per_graph {
        return vec![ScanRecord::skipped(
            graph_id,
            ObjectId::WholeGraph,
            cfg.k,
            SkipReason::ObjectBudget,
        )];
    }
    let classes = enumerate_signature_classes(graph);
    pool.map(object_count, |index| {
        let sigma = if cfg.debug_full_signatures {
            signature_from_bits(graph.edge_count(), index)
        } else {
            classes.get(index)
        };
        solve_signature_item(graph, graph_id, sigma, cfg)
    })
}

/// Bit `i` of `bits` set makes edge `i` negative; the debug full-signature
/// enumeration order.
pub fn signature_from_bits(edge_count: usize, bits: u64) -> Signature {
    Signature::new(
        (0..edge_count)
            .map(|i| if (bits >> i) & 1 == 1 { -1 } else { 1 })
            .collect(),
    )
}

fn solve_signature_item(
    graph: &Graph,
    graph_id: usize,
    sigma: Signature,
    cfg: &ScanConfig,
) -> ScanRecord {
    let started = Instant::now();
    let pm = sigma.to_string();
    let sg = SignedGraph::new(graph.clone(), sigma).expect("signature built over graph");
    let mut record = match solve_k_budgeted(&sg, cfg.k, &cfg.budget) {
        Ok((Verdict::Satisfiable(f), stats)) => ScanRecord {
            graph_id,
            object: ObjectId::Signature(pm),
            k: cfg.k,
            outcome: Outcome::Colourable,
            nodes: stats.nodes,
            certificate: Some(Certificate::SignedColouring(f.colours().to_vec())),
            sigma: None,
            lists: None,
            reason: None,
            millis: None,
            digest: None,
        },
        Ok((Verdict::Unsatisfiable, stats)) => ScanRecord {
            graph_id,
            object: ObjectId::Signature(pm.clone()),
            k: cfg.k,
            outcome: Outcome::NotFourColourable,
            nodes: stats.nodes,
            certificate: None,
            sigma: Some(pm),
            lists: None,
            reason: None,
            millis: None,
            digest: None,
        },
        Err(SolverError::BudgetExceeded { nodes }) => {
            let mut r = ScanRecord::skipped(
                graph_id,
                ObjectId::Signature(pm),
                cfg.k,
                SkipReason::SearchBudget,
            );
            r.nodes = nodes;
            r
        }
        Err(e) => unreachable!("config validated up front: {e}"),
    };
    if cfg.emit_millis {
        record.millis = Some(started.elapsed().as_millis() as u64);
    }
    record
}

fn scan_lists_exhaustive(
    graph: &Graph,
    graph_id: usize,
    cfg: &ScanConfig,
    pool: &WorkerPool,
) -> Vec<ScanRecord> {
    let pairs = palette_pairs(cfg.palette);
    let n = graph.vertex_count();
    let total = (pairs.len() as u128)
        .checked_pow(n as u32)
        .unwrap_or(u128::MAX);
    if total > cfg.max_objects_per_graph as u128 {
        return vec![ScanRecord::skipped(
            graph_id,
            ObjectId::WholeGraph,
            4,
            SkipReason::ObjectBudget,
        )];
    }
    pool.map(total as u64, |index| {
        // mixed-radix decode, vertex 0 most significant
        let mut digits = index;
        let mut chosen = vec![(0u32, 0u32); n];
        for v in (0..n).rev() {
            chosen[v] = pairs[(digits % pairs.len() as u64) as usize];
            digits /= pairs.len() as u64;
        }
        let lists = ListAssignment::new(chosen).expect("palette pairs are increasing");
        list_item(graph, graph_id, lists, cfg)
    })
}

fn scan_lists_random(
    graph: &Graph,
    graph_id: usize,
    cfg: &ScanConfig,
    pool: &WorkerPool,
) -> Vec<ScanRecord> {
    let pairs = palette_pairs(cfg.palette);
    let n = graph.vertex_count();
    pool.map(cfg.samples as u64, |sample| {
        // one independent, addressable stream per (graph, sample)
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        rng.set_stream(((graph_id as u64) << 32) | sample);
        let chosen: Vec<(u32, u32)> = (0..n)
            .map(|_| pairs[rng.gen_range(0..pairs.len())])
            .collect();
        let lists = ListAssignment::new(chosen).expect("palette pairs are increasing");
        list_item(graph, graph_id, lists, cfg)
    })
}

fn list_item(
    graph: &Graph,
    graph_id: usize,
    lists: ListAssignment,
    cfg: &ScanConfig,
) -> ScanRecord {
    let started = Instant::now();
    let canonical = lists.to_string();
    let object = ObjectId::Lists(crate::io::report::digest16(&canonical));
    let mut record = match list_colour_via_signature(graph, &lists, &cfg.budget) {
        Ok(ListColourOutcome::Coloured(outcome)) => ScanRecord {
            graph_id,
            object,
            k: 4,
            outcome: Outcome::BipartiteClassesOk,
            nodes: outcome.stats.nodes,
            certificate: Some(Certificate::ListColouring(outcome.phi.colours().to_vec())),
            sigma: None,
            lists: None,
            reason: None,
            millis: None,
            digest: None,
        },
        Ok(ListColourOutcome::SignatureUncolourable { sigma, stats }) => ScanRecord {
            graph_id,
            object,
            k: 4,
            outcome: Outcome::NotFourColourable,
            nodes: stats.nodes,
            certificate: None,
            sigma: Some(sigma.to_string()),
            lists: Some(canonical),
            reason: None,
            millis: None,
            digest: None,
        },
        Err(ReductionError::Solver(SolverError::BudgetExceeded { nodes })) => {
            let mut r = ScanRecord::skipped(graph_id, object, 4, SkipReason::SearchBudget);
            r.nodes = nodes;
            r
        }
        Err(ReductionError::WitnessFailure { .. }) => ScanRecord {
            graph_id,
            object,
            k: 4,
            outcome: Outcome::WitnessFailure,
            nodes: 0,
            certificate: None,
            sigma: crate::reduction::build_signature(graph, &lists)
                .ok()
                .map(|s| s.to_string()),
            lists: Some(canonical),
            reason: None,
            millis: None,
            digest: None,
        },
        Err(e) => unreachable!("pipeline over its own lists cannot fail otherwise: {e}"),
    };
    if cfg.emit_millis {
        record.millis = Some(started.elapsed().as_millis() as u64);
    }
    record
}

/// Re-checks a record's stored certificate against the corpus using only
/// the properness and bipartiteness checkers; never re-runs or trusts the
/// solver. Returns false for certificates that do not hold up (tampering,
/// wrong graph). Records without a stored certificate are an error.
pub fn verify_certificate(record: &ScanRecord, corpus: &[Graph]) -> Result<bool, HarnessError> {
    use crate::solver::{is_proper, ColourSet, SignedColouring};

    let graph = corpus
        .get(record.graph_id)
        .ok_or(HarnessError::GraphIdOutOfRange(record.graph_id))?;
    let certificate = record
        .certificate
        .as_ref()
        .ok_or(HarnessError::MissingCertificate)?;

    // a digest read back from a report must match the certificate
    if let Some(stored) = &record.digest {
        let fresh = crate::io::report::digest16(&certificate_token(certificate));
        if *stored != fresh {
            return Ok(false);
        }
    }

    match (record.outcome, certificate) {
        (Outcome::Colourable, Certificate::SignedColouring(colours)) => {
            let ObjectId::Signature(pm) = &record.object else {
                return Err(HarnessError::MalformedCertificate(
                    "colourable record without a signature object".into(),
                ));
            };
            let Ok(sigma) = Signature::from_pm_str(pm) else {
                return Ok(false);
            };
            if sigma.len() != graph.edge_count() || colours.len() != graph.vertex_count() {
                return Ok(false);
            }
            let sg = SignedGraph::new(graph.clone(), sigma).expect("length checked");
            let Ok(set) = ColourSet::new(record.k) else {
                return Ok(false);
            };
            let Ok(f) = SignedColouring::new(colours.clone(), &set) else {
                return Ok(false);
            };
            Ok(is_proper(&sg, &f).expect("lengths checked"))
        }
        (Outcome::BipartiteClassesOk, Certificate::ListColouring(phi)) => {
            if phi.len() != graph.vertex_count() {
                return Ok(false);
            }
            let mut colours: Vec<u32> = phi.clone();
            colours.sort_unstable();
            colours.dedup();
            for colour in colours {
                let members = (0..graph.vertex_count()).filter(|&v| phi[v] == colour);
                let class = graph.induced_subgraph(members).expect("members in range");
                if !class.is_bipartite() {
                    return Ok(false);
                }
            }
            Ok(true)
        }
        _ => Err(HarnessError::MalformedCertificate(format!(
            "certificate kind does not fit outcome {}",
            record.outcome.as_str()
        ))),
    }
}

/// Work-item dispatcher: a rayon pool when the `parallel` feature is on and
/// more than one worker is requested, otherwise a plain sequential loop.
/// Outputs preserve index order either way.
enum WorkerPool {
    Sequential,
    #[cfg(feature = "parallel")]
    Pool(rayon::ThreadPool),
}

impl WorkerPool {
    /// `workers` of 1 is sequential; 0 uses all cores.
    fn new(workers: usize) -> Self {
        #[cfg(feature = "parallel")]
        {
            if workers != 1 {
                let pool = rayon::ThreadPoolBuilder::new()
                    .num_threads(workers)
                    .build()
                    .expect("thread pool");
                return WorkerPool::Pool(pool);
            }
        }
        let _ = workers;
        WorkerPool::Sequential
    }

    fn map<T: Send>(&self, count: u64, f: impl Fn(u64) -> T + Sync + Send) -> Vec<T> {
        match self {
            WorkerPool::Sequential => (0..count).map(f).collect(),
            #[cfg(feature = "parallel")]
            WorkerPool::Pool(pool) => {
                use rayon::prelude::*;
                pool.install(|| (0..count).into_par_iter().map(f).collect())
            }
        }
    }
}
