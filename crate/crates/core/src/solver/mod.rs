//! Exact signed k-colourability.
//!
//! A k-colouring of a signed graph assigns each vertex a colour from the
//! symmetric set `{-q, .., -1, 1, .., q}` (k = 2q) or `{-q, .., -1, 0, 1,
//! .., q}` (k = 2q+1) such that `f(x) != sigma(e) * f(y)` on every edge
//! `e = xy`. The chromatic number is the least such k.
//!
//! [`solve_k`] is a backtracking search with forward checking; vertices are
//! branched most-constrained-first (saturation, then degree, then lowest
//! index) and colours are tried in ascending value order, so runs are fully
//! reproducible. [`brute_force_k`] is the independent oracle: plain
//! enumeration of all assignments, refused outright when it would exceed its
//! assignment budget.

mod cnf;

pub use cnf::{decode_cnf_model, encode_cnf, CnfFormula};

use std::time::Instant;

use thiserror::Error;

use crate::graph::Vertex;
use crate::signed::SignedGraph;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SolverError {
    #[error("k must be at least 1")]
    InvalidK,
    #[error("assignment covers {got} of {expected} vertices")]
    PartialAssignment { expected: usize, got: usize },
    #[error("colour {colour} is not in the {k}-colour set")]
    ColourNotInSet { colour: i32, k: u32 },
    #[error("budget exceeded after {nodes} search nodes")]
    BudgetExceeded { nodes: u64 },
    #[error("oracle instance too large: {assignments} assignments exceed budget {budget}")]
    OracleTooLarge { assignments: u128, budget: u64 },
    #[error("model assigns {count} colours at vertex {vertex}")]
    AmbiguousModel { vertex: Vertex, count: usize },
}

/// The ordered colour set for a given k: ascending, symmetric under
/// negation, containing 0 exactly when k is odd.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColourSet {
    k: u32,
    values: Vec<i32>,
}

impl ColourSet {
    pub fn new(k: u32) -> Result<Self, SolverError> {
        if k == 0 {
            return Err(SolverError::InvalidK);
        }
        let q = (k / 2) as i32;
        let mut values: Vec<i32> = (-q..=-1).collect();
        if k % 2 == 1 {
            values.push(0);
        }
        values.extend(1..=q);
        debug_assert_eq!(values.len(), k as usize);
        Ok(ColourSet { k, values })
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    /// Colours in ascending order.
    pub fn values(&self) -> &[i32] {
        &self.values
    }

    pub fn contains(&self, colour: i32) -> bool {
        self.index_of(colour).is_some()
    }

    /// Position of `colour` in the ascending value list.
    pub fn index_of(&self, colour: i32) -> Option<usize> {
        self.values.binary_search(&colour).ok()
    }
}

/// A total vertex-to-colour assignment.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SignedColouring {
    colours: Vec<i32>,
}

impl SignedColouring {
    /// Validates that every colour belongs to `set`.
    pub fn new(colours: Vec<i32>, set: &ColourSet) -> Result<Self, SolverError> {
        for &c in &colours {
            if !set.contains(c) {
                return Err(SolverError::ColourNotInSet {
                    colour: c,
                    k: set.k(),
                });
            }
        }
        Ok(SignedColouring { colours })
    }

    pub fn colours(&self) -> &[i32] {
        &self.colours
    }

    pub fn colour(&self, v: Vertex) -> i32 {
        self.colours[v]
    }

    pub fn len(&self) -> usize {
        self.colours.len()
    }

    pub fn is_empty(&self) -> bool {
        self.colours.is_empty()
    }
}

/// True iff `f(x) != sigma(e) * f(y)` holds on every edge.
///
/// Note that colour 0 conflicts with 0 across an edge of either sign.
pub fn is_proper(sg: &SignedGraph, f: &SignedColouring) -> Result<bool, SolverError> {
    let n = sg.graph().vertex_count();
    if f.len() != n {
        return Err(SolverError::PartialAssignment {
            expected: n,
            got: f.len(),
        });
    }
    Ok(edges_proper(sg, f.colours()))
}

fn edges_proper(sg: &SignedGraph, colours: &[i32]) -> bool {
    sg.graph()
        .edges()
        .iter()
        .enumerate()
        .all(|(i, &(x, y))| colours[x] != i32::from(sg.edge_sign(i)) * colours[y])
}

/// Outcome of a decision procedure. `Unsatisfiable` is a verified verdict,
/// not an error.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Satisfiable(SignedColouring),
    Unsatisfiable,
}

impl Verdict {
    pub fn is_satisfiable(&self) -> bool {
        matches!(self, Verdict::Satisfiable(_))
    }
}

/// Per-instance resource caps. Node counts are deterministic; the wall-clock
/// cap is inherently not, and is off by default.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Budget {
    pub max_nodes: Option<u64>,
    pub max_millis: Option<u64>,
}

impl Budget {
    pub const UNLIMITED: Budget = Budget {
        max_nodes: None,
        max_millis: None,
    };

    pub fn nodes(max_nodes: u64) -> Budget {
        Budget {
            max_nodes: Some(max_nodes),
            max_millis: None,
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SearchStats {
    /// Assignments attempted during the search.
    pub nodes: u64,
}

/// Default assignment budget for the brute-force oracle.
pub const DEFAULT_ORACLE_BUDGET: u64 = 10_000_000;

/// Decides signed k-colourability by exhaustive backtracking.
pub fn solve_k(sg: &SignedGraph, k: u32) -> Result<Verdict, SolverError> {
    solve_k_budgeted(sg, k, &Budget::UNLIMITED).map(|(verdict, _)| verdict)
}

/// As [`solve_k`], stopping with `BudgetExceeded` when the budget runs out.
pub fn solve_k_budgeted(
    sg: &SignedGraph,
    k: u32,
    budget: &Budget,
) -> Result<(Verdict, SearchStats), SolverError> {
    let set = ColourSet::new(k)?;
    let mut search = Search::new(sg, &set, budget);
    let found = search.run()?;
    let stats = SearchStats {
        nodes: search.nodes,
    };
    let verdict = match found {
        Some(colours) => {
            let f = SignedColouring::new(colours, &set)?;
            // Never trust search state: re-check the result from scratch.
            assert!(
                is_proper(sg, &f)?,
                "internal error: search produced an improper colouring"
            );
            Verdict::Satisfiable(f)
        }
        None => Verdict::Unsatisfiable,
    };
    Ok((verdict, stats))
}

/// The signed chromatic number: the least k for which a k-colouring exists.
/// The empty graph gets 0 by convention.
///
/// k is scanned upward from 1; satisfiability at k is decided independently
/// for each k (the colour sets for consecutive k are not nested, so
/// monotonicity is not assumed). The scan terminates because assigning
/// pairwise distinct positive colours is proper for k = 2n.
pub fn chromatic_number(sg: &SignedGraph) -> u32 {
    let n = sg.graph().vertex_count();
    if n == 0 {
        return 0;
    }
    for k in 1..=2 * n as u32 {
        if solve_k(sg, k)
            .expect("k >= 1")
            .is_satisfiable()
        {
            return k;
        }
    }
    unreachable!("a 2n-colouring always exists");
}

/// Brute-force oracle: enumerates every one of the `k^n` assignments.
///
/// Refuses instances whose assignment count exceeds `max_assignments`
/// rather than truncating the enumeration.
pub fn brute_force_k(
    sg: &SignedGraph,
    k: u32,
    max_assignments: u64,
) -> Result<Verdict, SolverError> {
    let set = ColourSet::new(k)?;
    let mut first = None;
    enumerate_assignments(sg, &set, max_assignments, |colours| {
        if first.is_none() {
            first = Some(colours.to_vec());
        }
        first.is_none()
    })?;
    Ok(match first {
        Some(colours) => Verdict::Satisfiable(SignedColouring::new(colours, &set)?),
        None => Verdict::Unsatisfiable,
    })
}

/// Visits every proper k-colouring of `sg` in lexicographic order of colour
/// indices. The visitor returns `false` to stop early. Returns the number of
/// colourings visited.
pub fn enumerate_colourings(
    sg: &SignedGraph,
    k: u32,
    max_assignments: u64,
    mut visit: impl FnMut(&SignedColouring) -> bool,
) -> Result<u64, SolverError> {
    let set = ColourSet::new(k)?;
    let mut count = 0;
    enumerate_assignments(sg, &set, max_assignments, |colours| {
        count += 1;
        let f = SignedColouring {
            colours: colours.to_vec(),
        };
        visit(&f)
    })?;
    Ok(count)
}

/// Odometer over all assignments, calling `on_proper` for each proper one.
fn enumerate_assignments(
    sg: &SignedGraph,
    set: &ColourSet,
    max_assignments: u64,
    mut on_proper: impl FnMut(&[i32]) -> bool,
) -> Result<(), SolverError> {
    let n = sg.graph().vertex_count();
    let k = set.k();
    let total = (k as u128)
        .checked_pow(n as u32)
        .unwrap_or(u128::MAX);
    if total > max_assignments as u128 {
        return Err(SolverError::OracleTooLarge {
            assignments: total,
            budget: max_assignments,
        });
    }

    let values = set.values();
    let mut indices = vec![0usize; n];
    let mut colours: Vec<i32> = vec![values[0]; n];
    loop {
        if edges_proper(sg, &colours) && !on_proper(&colours) {
            return Ok(());
        }
        // advance the odometer, least-significant digit at the last vertex
        let mut pos = n;
        loop {
            if pos == 0 {
                return Ok(());
            }
            pos -= 1;
            indices[pos] += 1;
            if indices[pos] < values.len() {
                colours[pos] = values[indices[pos]];
                break;
            }
            indices[pos] = 0;
            colours[pos] = values[0];
        }
    }
}

/// Backtracking state. Domains are bitmasks over colour indices.
struct Search<'a> {
    values: &'a [i32],
    /// `neg[i]` is the index of `-values[i]` (the set is negation-closed).
    neg: Vec<u8>,
    /// Per vertex: `(neighbour, sign)` pairs.
    adj: Vec<Vec<(Vertex, i8)>>,
    domain: Vec<u128>,
    assigned: Vec<Option<u8>>,
    unassigned: usize,
    /// Colour indices with a non-negative value, for the first-branch cut.
    nonneg_mask: u128,
    nodes: u64,
    budget: &'a Budget,
    started: Instant,
}

impl<'a> Search<'a> {
    fn new(sg: &SignedGraph, set: &'a ColourSet, budget: &'a Budget) -> Self {
        let n = sg.graph().vertex_count();
        let k = set.values().len();
        assert!(k <= 128, "colour sets beyond k = 128 are not supported");

        let neg = set
            .values()
            .iter()
            .map(|&c| set.index_of(-c).expect("set is negation-closed") as u8)
            .collect();
        let mut adj = vec![Vec::new(); n];
        for (i, &(u, v)) in sg.graph().edges().iter().enumerate() {
            let s = sg.edge_sign(i);
            adj[u].push((v, s));
            adj[v].push((u, s));
        }
        let full: u128 = if k == 128 { u128::MAX } else { (1 << k) - 1 };
        let nonneg_mask = set
            .values()
            .iter()
            .enumerate()
            .filter(|(_, &c)| c >= 0)
            .fold(0u128, |m, (i, _)| m | (1 << i));

        Search {
            values: set.values(),
            neg,
            adj,
            domain: vec![full; n],
            assigned: vec![None; n],
            unassigned: n,
            nonneg_mask,
            nodes: 0,
            budget,
            started: Instant::now(),
        }
    }

    fn run(&mut self) -> Result<Option<Vec<i32>>, SolverError> {
        if self.search(0)? {
            let colours = self
                .assigned
                .iter()
                .map(|ci| self.values[ci.expect("search complete") as usize])
                .collect();
            Ok(Some(colours))
        } else {
            Ok(None)
        }
    }

    /// Most-constrained vertex: maximal (saturation, degree), lowest index
    /// on ties. Saturation is the number of colours forbidden so far.
    fn select_vertex(&self) -> Vertex {
        let k = self.values.len() as u32;
        let mut best = None;
        let mut best_key = (0u32, 0usize);
        for v in 0..self.assigned.len() {
            if self.assigned[v].is_some() {
                continue;
            }
            let key = (k - self.domain[v].count_ones(), self.adj[v].len());
            if best.is_none() || key > best_key {
                best = Some(v);
                best_key = key;
            }
        }
        best.expect("called with unassigned vertices")
    }

    fn check_budget(&self) -> Result<(), SolverError> {
        if let Some(max) = self.budget.max_nodes {
            if self.nodes > max {
                return Err(SolverError::BudgetExceeded { nodes: self.nodes });
            }
        }
        if let Some(max) = self.budget.max_millis {
            if self.nodes.is_multiple_of(4096) && self.started.elapsed().as_millis() as u64 > max {
                return Err(SolverError::BudgetExceeded { nodes: self.nodes });
            }
        }
        Ok(())
    }

    fn search(&mut self, depth: usize) -> Result<bool, SolverError> {
        if self.unassigned == 0 {
            return Ok(true);
        }
        let v = self.select_vertex();
        let mut candidates = self.domain[v];
        if depth == 0 {
            // Negating an entire colouring preserves properness for any
            // signature, so the first branched vertex only needs the
            // non-negative half of its domain.
            candidates &= self.nonneg_mask;
        }
        while candidates != 0 {
            let ci = candidates.trailing_zeros() as u8;
            candidates &= candidates - 1;
            self.nodes += 1;
            self.check_budget()?;
            if let Some(undo) = self.assign(v, ci) {
                if self.search(depth + 1)? {
                    return Ok(true);
                }
                self.unassign(v, undo);
            }
        }
        Ok(false)
    }

    /// Assigns colour index `ci` to `v` and forward-checks neighbours.
    /// Returns `None` (with no net state change) if some neighbour's domain
    /// would be wiped out.
    fn assign(&mut self, v: Vertex, ci: u8) -> Option<Vec<(Vertex, u128)>> {
        let mut undo = Vec::new();
        for idx in 0..self.adj[v].len() {
            let (w, sign) = self.adj[v][idx];
            if self.assigned[w].is_some() {
                continue;
            }
            // f(w) = sign * f(v) is the one forbidden value at w
            let forbidden = if sign == 1 { ci } else { self.neg[ci as usize] };
            let bit = 1u128 << forbidden;
            if self.domain[w] & bit != 0 {
                self.domain[w] &= !bit;
                undo.push((w, bit));
                if self.domain[w] == 0 {
                    for &(x, b) in &undo {
                        self.domain[x] |= b;
                    }
                    return None;
                }
            }
        }
        self.assigned[v] = Some(ci);
        self.unassigned -= 1;
        Some(undo)
    }

    fn unassign(&mut self, v: Vertex, undo: Vec<(Vertex, u128)>) {
        self.assigned[v] = None;
        self.unassigned += 1;
        for (w, bit) in undo {
            self.domain[w] |= bit;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Graph;
    use crate::signed::{
        all_positive, enumerate_signature_classes, Signature, SignedGraph,
    };

    fn k2(sign: i8) -> SignedGraph {
        let g = Graph::new(2, [(0, 1)]).unwrap();
        SignedGraph::new(g, Signature::new(vec![sign])).unwrap()
    }

    #[test]
    fn colour_sets_match_definition() {
        assert_eq!(ColourSet::new(4).unwrap().values(), &[-2, -1, 1, 2]);
        assert_eq!(ColourSet::new(1).unwrap().values(), &[0]);
        assert_eq!(ColourSet::new(3).unwrap().values(), &[-1, 0, 1]);
        assert_eq!(ColourSet::new(2).unwrap().values(), &[-1, 1]);
        assert_eq!(ColourSet::new(0), Err(SolverError::InvalidK));
    }

    #[test]
    fn colour_set_is_negation_closed_with_zero_iff_odd() {
        for k in 1..=9 {
            let set = ColourSet::new(k).unwrap();
            assert_eq!(set.values().len(), k as usize);
            assert_eq!(set.contains(0), k % 2 == 1);
            for &c in set.values() {
                assert!(set.contains(-c));
            }
        }
    }

    #[test]
    fn properness_on_k2() {
        let set = ColourSet::new(2).unwrap();
        let f = |a, b| SignedColouring::new(vec![a, b], &set).unwrap();
        assert!(is_proper(&k2(1), &f(1, -1)).unwrap());
        assert!(is_proper(&k2(-1), &f(1, 1)).unwrap()); // 1 != -1
        assert!(!is_proper(&k2(-1), &f(1, -1)).unwrap()); // 1 == -(-1)
        assert!(!is_proper(&k2(1), &f(1, 1)).unwrap());
    }

    #[test]
    fn zero_conflicts_with_zero_on_both_signs() {
        let set = ColourSet::new(1).unwrap();
        let f = SignedColouring::new(vec![0, 0], &set).unwrap();
        assert!(!is_proper(&k2(1), &f).unwrap());
        assert!(!is_proper(&k2(-1), &f).unwrap());
    }

    #[test]
    fn is_proper_requires_total_assignment() {
        let set = ColourSet::new(2).unwrap();
        let f = SignedColouring::new(vec![1], &set).unwrap();
        assert_eq!(
            is_proper(&k2(1), &f),
            Err(SolverError::PartialAssignment {
                expected: 2,
                got: 1
            })
        );
    }

    #[test]
    fn colouring_validates_against_set() {
        let set = ColourSet::new(4).unwrap();
        assert!(matches!(
            SignedColouring::new(vec![0, 1], &set),
            Err(SolverError::ColourNotInSet { colour: 0, k: 4 })
        ));
    }

    #[test]
    fn solve_k_small_cases() {
        assert!(solve_k(&k2(1), 2).unwrap().is_satisfiable());

        let tri = SignedGraph::all_positive(Graph::cycle(3));
        assert!(!solve_k(&tri, 2).unwrap().is_satisfiable());
        assert!(solve_k(&tri, 3).unwrap().is_satisfiable());

        // triangle with one negative edge is 2-colourable
        let g = Graph::cycle(3);
        let sg = SignedGraph::new(g, Signature::new(vec![-1, 1, 1])).unwrap();
        assert!(solve_k(&sg, 2).unwrap().is_satisfiable());
    }

    #[test]
    fn chromatic_numbers() {
        let empty = SignedGraph::all_positive(Graph::new(0, []).unwrap());
        assert_eq!(chromatic_number(&empty), 0);

        let single = SignedGraph::all_positive(Graph::new(1, []).unwrap());
        assert_eq!(chromatic_number(&single), 1);

        assert_eq!(chromatic_number(&k2(1)), 2);
        assert_eq!(chromatic_number(&k2(-1)), 2);

        let k4 = SignedGraph::all_positive(Graph::complete(4));
        assert_eq!(chromatic_number(&k4), 4);
    }

    #[test]
    fn brute_force_agrees_with_solver_on_triangle() {
        let g = Graph::cycle(3);
        for bits in 0..8u32 {
            let signs = (0..3)
                .map(|i| if (bits >> i) & 1 == 1 { -1 } else { 1 })
                .collect();
            let sg = SignedGraph::new(g.clone(), Signature::new(signs)).unwrap();
            for k in 1..=4 {
                let fast = solve_k(&sg, k).unwrap().is_satisfiable();
                let slow = brute_force_k(&sg, k, DEFAULT_ORACLE_BUDGET)
                    .unwrap()
                    .is_satisfiable();
                assert_eq!(fast, slow, "signature bits {bits:03b}, k = {k}");
            }
        }
    }

    #[test]
    fn brute_force_k4_needs_four_colours() {
        let k4 = SignedGraph::all_positive(Graph::complete(4));
        assert!(!brute_force_k(&k4, 3, DEFAULT_ORACLE_BUDGET)
            .unwrap()
            .is_satisfiable());
        assert!(brute_force_k(&k4, 4, DEFAULT_ORACLE_BUDGET)
            .unwrap()
            .is_satisfiable());
    }

    #[test]
    fn brute_force_refuses_oversized_instances() {
        let sg = SignedGraph::all_positive(Graph::complete(8));
        assert!(matches!(
            brute_force_k(&sg, 4, 1000),
            Err(SolverError::OracleTooLarge { .. })
        ));
    }

    #[test]
    fn empty_graph_brute_force() {
        let sg = SignedGraph::all_positive(Graph::new(0, []).unwrap());
        assert!(brute_force_k(&sg, 1, 10).unwrap().is_satisfiable());
    }

    #[test]
    fn budget_stops_search() {
        let sg = SignedGraph::all_positive(Graph::complete(6));
        let err = solve_k_budgeted(&sg, 5, &Budget::nodes(2)).unwrap_err();
        assert!(matches!(err, SolverError::BudgetExceeded { .. }));
    }

    #[test]
    fn enumerate_counts_all_proper_colourings() {
        // positive K2, k = 2: proper pairs are (-1,1) and (1,-1)
        let count = enumerate_colourings(&k2(1), 2, 100, |_| true).unwrap();
        assert_eq!(count, 2);

        // negative K2, k = 2: proper pairs are (1,1) and (-1,-1)
        let mut seen = Vec::new();
        enumerate_colourings(&k2(-1), 2, 100, |f| {
            seen.push(f.colours().to_vec());
            true
        })
        .unwrap();
        assert_eq!(seen, vec![vec![-1, -1], vec![1, 1]]);
    }

    #[test]
    fn all_positive_matches_ordinary_chromatic_number() {
        // ordinary chromatic numbers: path 2, C5 3, K4 4, Petersen 3
        let cases = [
            (Graph::path(4), 2),
            (Graph::cycle(5), 3),
            (Graph::complete(4), 4),
        ];
        for (g, chi) in cases {
            let sg = SignedGraph::all_positive(g);
            assert_eq!(chromatic_number(&sg), chi);
        }
    }

    #[test]
    fn solver_agrees_with_oracle_on_all_k4_classes() {
        let g = Graph::complete(4);
        let classes = enumerate_signature_classes(&g);
        for sigma in classes.iter() {
            let sg = SignedGraph::new(g.clone(), sigma).unwrap();
            for k in 1..=4 {
                let fast = solve_k(&sg, k).unwrap().is_satisfiable();
                let slow = brute_force_k(&sg, k, DEFAULT_ORACLE_BUDGET)
                    .unwrap()
                    .is_satisfiable();
                assert_eq!(fast, slow);
            }
        }
    }

    #[test]
    fn returned_colourings_are_proper() {
        let g = Graph::cycle(5);
        let classes = enumerate_signature_classes(&g);
        for sigma in classes.iter() {
            let sg = SignedGraph::new(g.clone(), sigma).unwrap();
            let k = chromatic_number(&sg);
            match solve_k(&sg, k).unwrap() {
                Verdict::Satisfiable(f) => assert!(is_proper(&sg, &f).unwrap()),
                Verdict::Unsatisfiable => panic!("chromatic number must be satisfiable"),
            }
        }
    }

    #[test]
    fn switching_preserves_chromatic_number_spot_check() {
        use crate::signed::switch;
        let g = Graph::cycle(5);
        let sg = SignedGraph::new(
            g,
            Signature::new(vec![-1, 1, -1, 1, 1]),
        )
        .unwrap();
        let base = chromatic_number(&sg);
        for mask in 0..1u32 << 5 {
            let s: Vec<usize> = (0..5).filter(|&v| (mask >> v) & 1 == 1).collect();
            assert_eq!(chromatic_number(&switch(&sg, &s).unwrap()), base);
        }
    }

    #[test]
    fn all_positive_signature_is_first_class() {
        let g = Graph::cycle(4);
        let classes = enumerate_signature_classes(&g);
        assert_eq!(classes.get(0), all_positive(&g));
    }
}
