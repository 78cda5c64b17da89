//! From 2-list assignments to signatures and back.
//!
//! Given a 2-list assignment `L`, a signature is built on the parent graph;
//! a proper 4-colouring `f` of the resulting signed graph (colours
//! `{-2, -1, 1, 2}`) is turned into an L-colouring `phi` by picking the top
//! of the list where `f` is positive and the bottom where it is negative;
//! and each colour class of `phi` is certified bipartite by the side map
//! `psi(v) = |f(v)|`.

use std::fmt;

use thiserror::Error;

use crate::graph::{Graph, Vertex};
use crate::signed::{Signature, SignedGraph};
use crate::solver::{
    enumerate_colourings, is_proper, solve_k_budgeted, Budget, SearchStats, SignedColouring,
    SolverError, Verdict,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ReductionError {
    #[error("no list for vertex {vertex}")]
    MissingList { vertex: Vertex },
    #[error("list for vertex {vertex} must be two distinct positive integers, got ({min}, {max})")]
    BadList { vertex: Vertex, min: u32, max: u32 },
    #[error("colouring covers {got} of {expected} vertices")]
    PartialColouring { expected: usize, got: usize },
    #[error("colour {colour} at vertex {vertex} is outside {{-2, -1, 1, 2}}")]
    WrongColourSet { vertex: Vertex, colour: i32 },
    #[error(
        "bipartite witness failed on edge ({u}, {v}) in colour class {colour} \
         ({case} case); reaching this from the module's own pipeline indicates \
         an implementation bug"
    )]
    WitnessFailure {
        colour: u32,
        u: Vertex,
        v: Vertex,
        case: &'static str,
    },
    #[error("list file line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error(transparent)]
    Solver(#[from] SolverError),
}

/// A 2-list assignment: each vertex owns an ordered pair `(min, max)` of
/// distinct positive integers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ListAssignment {
    lists: Vec<(u32, u32)>,
}

impl ListAssignment {
    pub fn new(lists: Vec<(u32, u32)>) -> Result<Self, ReductionError> {
        for (vertex, &(min, max)) in lists.iter().enumerate() {
            if min == 0 || min >= max {
                return Err(ReductionError::BadList { vertex, min, max });
            }
        }
        Ok(ListAssignment { lists })
    }

    pub fn len(&self) -> usize {
        self.lists.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lists.is_empty()
    }

    pub fn min(&self, v: Vertex) -> u32 {
        self.lists[v].0
    }

    pub fn max(&self, v: Vertex) -> u32 {
        self.lists[v].1
    }

    pub fn contains(&self, v: Vertex, colour: u32) -> bool {
        self.lists[v].0 == colour || self.lists[v].1 == colour
    }

    pub fn lists(&self) -> &[(u32, u32)] {
        &self.lists
    }

    /// Parses the list file format: one `v: a b` line per vertex with
    /// `a < b`, every vertex of `0..n` exactly once (n = number of list
    /// lines). `#` starts a comment; blank lines are ignored.
    pub fn parse(text: &str) -> Result<Self, ReductionError> {
        let mut entries: Vec<(usize, u32, u32, usize)> = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let err = |message: String| ReductionError::Parse {
                line: line_no,
                message,
            };
            let (vertex_part, rest) = line
                .split_once(':')
                .ok_or_else(|| err("expected `v: a b`".into()))?;
            let vertex: usize = vertex_part
                .trim()
                .parse()
                .map_err(|_| err(format!("bad vertex {vertex_part:?}")))?;
            let mut nums = rest.split_whitespace();
            let mut next_num = |what: &str| {
                nums.next()
                    .ok_or_else(|| err(format!("missing {what}")))?
                    .parse::<u32>()
                    .map_err(|_| err(format!("bad {what}")))
            };
            let a = next_num("first colour")?;
            let b = next_num("second colour")?;
            if nums.next().is_some() {
                return Err(err("trailing tokens after `v: a b`".into()));
            }
            if a == 0 || a >= b {
                return Err(err(format!(
                    "list must be two increasing positive integers, got {a} {b}"
                )));
            }
            entries.push((vertex, a, b, line_no));
        }
        let n = entries.len();
        let mut lists = vec![None; n];
        for (vertex, a, b, line_no) in entries {
            if vertex >= n {
                return Err(ReductionError::Parse {
                    line: line_no,
                    message: format!("vertex {vertex} out of range for {n} list lines"),
                });
            }
            if lists[vertex].is_some() {
                return Err(ReductionError::Parse {
                    line: line_no,
                    message: format!("duplicate list for vertex {vertex}"),
                });
            }
            lists[vertex] = Some((a, b));
        }
        ListAssignment::new(lists.into_iter().map(|l| l.unwrap()).collect())
    }

    fn require_total(&self, n: usize) -> Result<(), ReductionError> {
        if self.lists.len() < n {
            return Err(ReductionError::MissingList {
                vertex: self.lists.len(),
            });
        }
        Ok(())
    }
}

/// Canonical serialization `a,b;c,d;..` used for digests and reports.
impl fmt::Display for ListAssignment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (min, max)) in self.lists.iter().enumerate() {
            if i > 0 {
                f.write_str(";")?;
            }
            write!(f, "{min},{max}")?;
        }
        Ok(())
    }
}

/// An L-colouring: one chosen colour per vertex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ListColouring {
    phi: Vec<u32>,
}

impl ListColouring {
    pub fn colour(&self, v: Vertex) -> u32 {
        self.phi[v]
    }

    pub fn colours(&self) -> &[u32] {
        &self.phi
    }

    pub fn len(&self) -> usize {
        self.phi.len()
    }

    pub fn is_empty(&self) -> bool {
        self.phi.is_empty()
    }
}

/// Per-class bipartiteness certificate: members of the class and the side
/// map `psi(v) = |f(v)|` in `{1, 2}`, proper on every induced edge.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassWitness {
    pub colour: u32,
    pub members: Vec<Vertex>,
    pub psi: Vec<(Vertex, u8)>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BipartiteWitness {
    pub classes: Vec<ClassWitness>,
}

/// Builds the signature induced by a 2-list assignment: an edge is negative
/// exactly when the bottom of one endpoint's list meets the top of the
/// other's.
pub fn build_signature(g: &Graph, lists: &ListAssignment) -> Result<Signature, ReductionError> {
    lists.require_total(g.vertex_count())?;
    let signs = g
        .edges()
        .iter()
        .map(|&(u, v)| {
            let down_up = lists.min(u) == lists.max(v);
            let up_down = lists.min(v) == lists.max(u);
            // min < max on both lists makes the two conditions exclusive
            debug_assert!(!(down_up && up_down));
            if down_up || up_down {
                -1
            } else {
                1
            }
        })
        .collect();
    Ok(Signature::new(signs))
}

/// Derives the L-colouring from a 4-colouring: top of the list where f is
/// positive, bottom where negative. Rejects colours outside `{-2, -1, 1, 2}`.
pub fn derive_phi(
    f: &SignedColouring,
    lists: &ListAssignment,
) -> Result<ListColouring, ReductionError> {
    lists.require_total(f.len())?;
    let mut phi = Vec::with_capacity(f.len());
    for (v, &c) in f.colours().iter().enumerate() {
        if c == 0 || c.unsigned_abs() > 2 {
            return Err(ReductionError::WrongColourSet { vertex: v, colour: c });
        }
        let chosen = if c > 0 { lists.max(v) } else { lists.min(v) };
        debug_assert!(lists.contains(v, chosen));
        phi.push(chosen);
    }
    Ok(ListColouring { phi })
}

/// Certifies that every colour class of `phi` induces a bipartite graph,
/// using the side map `psi(v) = |f(v)|`.
///
/// For each induced class edge the two proof cases are re-derived at
/// runtime: endpoints on the same side of their lists correspond to a
/// positive edge and must differ in `f`; endpoints on opposite sides
/// correspond to a negative edge and must differ in `-f`. Either way
/// `|f(u)| != |f(v)|` follows; a violation is reported as `WitnessFailure`.
pub fn psi_witness(
    g: &Graph,
    f: &SignedColouring,
    phi: &ListColouring,
) -> Result<BipartiteWitness, ReductionError> {
    let n = g.vertex_count();
    if f.len() != n {
        return Err(ReductionError::PartialColouring {
            expected: n,
            got: f.len(),
        });
    }
    if phi.len() != n {
        return Err(ReductionError::PartialColouring {
            expected: n,
            got: phi.len(),
        });
    }
    for (v, &c) in f.colours().iter().enumerate() {
        if c == 0 || c.unsigned_abs() > 2 {
            return Err(ReductionError::WrongColourSet { vertex: v, colour: c });
        }
    }

    let mut colours: Vec<u32> = phi.colours().to_vec();
    colours.sort_unstable();
    colours.dedup();

    let mut classes = Vec::with_capacity(colours.len());
    for colour in colours {
        let members: Vec<Vertex> = (0..n).filter(|&v| phi.colour(v) == colour).collect();
        let class = g
            .induced_subgraph(members.iter().copied())
            .expect("members come from 0..n");
        for &(u, v) in class.edges() {
            let (fu, fv) = (f.colour(u), f.colour(v));
            if (fu > 0) == (fv > 0) {
                // same list side meeting in one class: a positive edge
                if fu == fv {
                    return Err(ReductionError::WitnessFailure {
                        colour,
                        u,
                        v,
                        case: "positive-edge",
                    });
                }
            } else {
                // opposite list sides: a negative edge
                if fu == -fv {
                    return Err(ReductionError::WitnessFailure {
                        colour,
                        u,
                        v,
                        case: "negative-edge",
                    });
                }
            }
            debug_assert_ne!(fu.unsigned_abs(), fv.unsigned_abs());
        }
        let psi = members
            .iter()
            .map(|&v| (v, f.colour(v).unsigned_abs() as u8))
            .collect();
        classes.push(ClassWitness {
            colour,
            members,
            psi,
        });
    }
    Ok(BipartiteWitness { classes })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColouredOutcome {
    pub sigma: Signature,
    pub colouring: SignedColouring,
    pub phi: ListColouring,
    pub witness: BipartiteWitness,
    pub stats: SearchStats,
}

/// Result of the full pipeline. An uncolourable signature is a first-class
/// outcome: for a planar input it is a counterexample candidate for the
/// 4-colourability conjecture and the harness reports it prominently.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ListColourOutcome {
    Coloured(Box<ColouredOutcome>),
    SignatureUncolourable {
        sigma: Signature,
        stats: SearchStats,
    },
}

/// Composes signature construction, the k = 4 solver, phi derivation and
/// the bipartite witness.
pub fn list_colour_via_signature(
    g: &Graph,
    lists: &ListAssignment,
    budget: &Budget,
) -> Result<ListColourOutcome, ReductionError> {
    let sigma = build_signature(g, lists)?;
    let sg = SignedGraph::new(g.clone(), sigma.clone()).expect("signature built over g");
    let (verdict, stats) = solve_k_budgeted(&sg, 4, budget)?;
    match verdict {
        Verdict::Unsatisfiable => Ok(ListColourOutcome::SignatureUncolourable { sigma, stats }),
        Verdict::Satisfiable(f) => {
            debug_assert!(is_proper(&sg, &f).unwrap());
            let phi = derive_phi(&f, lists)?;
            let witness = psi_witness(g, &f, &phi)?;
            Ok(ListColourOutcome::Coloured(Box::new(ColouredOutcome {
                sigma,
                colouring: f,
                phi,
                witness,
                stats,
            })))
        }
    }
}

/// Runs the pipeline over *every* proper 4-colouring of the derived signed
/// graph, for exhaustive sweeps. Returns the number of colourings visited;
/// the first witness failure aborts with its error.
pub fn sweep_all_colourings(
    g: &Graph,
    lists: &ListAssignment,
    max_assignments: u64,
    mut visit: impl FnMut(&SignedColouring, &ListColouring, &BipartiteWitness),
) -> Result<u64, ReductionError> {
    let sigma = build_signature(g, lists)?;
    let sg = SignedGraph::new(g.clone(), sigma).expect("signature built over g");
    let mut failure: Option<ReductionError> = None;
    let count = enumerate_colourings(&sg, 4, max_assignments, |f| {
        match derive_phi(f, lists).and_then(|phi| {
            psi_witness(g, f, &phi).map(|witness| {
                visit(f, &phi, &witness);
            })
        }) {
            Ok(()) => true,
            Err(e) => {
                failure = Some(e);
                false
            }
        }
    })?;
    match failure {
        Some(e) => Err(e),
        None => Ok(count),
    }
}

/// All 2-element subsets of the palette `{1..p}` as ordered pairs, in
/// lexicographic order. This is the per-vertex domain for list scans.
pub fn palette_pairs(p: u32) -> Vec<(u32, u32)> {
    let mut pairs = Vec::new();
    for a in 1..=p {
        for b in a + 1..=p {
            pairs.push((a, b));
        }
    }
    pairs
}
