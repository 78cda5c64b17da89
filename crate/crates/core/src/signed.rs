//! Signatures, signed graphs, switching and switching-class enumeration.

use std::collections::VecDeque;
use std::fmt;

use thiserror::Error;

use crate::graph::{Graph, Vertex};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SignedError {
    #[error("vertex {vertex} out of range for graph on {n} vertices")]
    VertexOutOfRange { vertex: Vertex, n: usize },
    #[error("signature length {got} does not match edge count {expected}")]
    SignatureLength { expected: usize, got: usize },
    #[error("signed graphs are over different underlying graphs")]
    GraphMismatch,
    #[error("invalid sign character {0:?} (expected '+' or '-')")]
    BadSignChar(char),
}

/// Per-edge signs in `{+1, -1}`, indexed by the parent graph's edge indices.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Signature(Vec<i8>);

impl Signature {
    pub fn new(signs: Vec<i8>) -> Self {
        assert!(
            signs.iter().all(|&s| s == 1 || s == -1),
            "signs must be +1 or -1"
        );
        Signature(signs)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn sign(&self, edge_index: usize) -> i8 {
        self.0[edge_index]
    }

    pub fn signs(&self) -> &[i8] {
        &self.0
    }

    pub fn negative_count(&self) -> usize {
        self.0.iter().filter(|&&s| s == -1).count()
    }

    /// Parses the report serialization: one `+` or `-` per edge index.
    pub fn from_pm_str(s: &str) -> Result<Self, SignedError> {
        let mut signs = Vec::with_capacity(s.len());
        for c in s.chars() {
            match c {
                '+' => signs.push(1),
                '-' => signs.push(-1),
                other => return Err(SignedError::BadSignChar(other)),
            }
        }
        Ok(Signature(signs))
    }
}

/// `+`/`-` string over edge indices, as used in reports.
impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &s in &self.0 {
            f.write_str(if s == 1 { "+" } else { "-" })?;
        }
        Ok(())
    }
}

/// The all-positive baseline signature of `g`.
pub fn all_positive(g: &Graph) -> Signature {
    Signature(vec![1; g.edge_count()])
}

/// A graph paired with a signature.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SignedGraph {
    graph: Graph,
    sigma: Signature,
}

impl SignedGraph {
    pub fn new(graph: Graph, sigma: Signature) -> Result<Self, SignedError> {
        if sigma.len() != graph.edge_count() {
            return Err(SignedError::SignatureLength {
                expected: graph.edge_count(),
                got: sigma.len(),
            });
        }
        Ok(SignedGraph { graph, sigma })
    }

    pub fn all_positive(graph: Graph) -> Self {
        let sigma = all_positive(&graph);
        SignedGraph { graph, sigma }
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn sigma(&self) -> &Signature {
        &self.sigma
    }

    pub fn edge_sign(&self, edge_index: usize) -> i8 {
        self.sigma.sign(edge_index)
    }
}

/// Switches `sg` at the vertex set `s`: an edge sign is negated exactly when
/// one endpoint is in `s`. The underlying graph is unchanged.
pub fn switch(sg: &SignedGraph, s: &[Vertex]) -> Result<SignedGraph, SignedError> {
    let n = sg.graph().vertex_count();
    let mut in_s = vec![false; n];
    for &v in s {
        if v >= n {
            return Err(SignedError::VertexOutOfRange { vertex: v, n });
        }
        in_s[v] = true;
    }
    let signs = sg
        .graph()
        .edges()
        .iter()
        .zip(sg.sigma().signs())
        .map(|(&(u, v), &sign)| if in_s[u] != in_s[v] { -sign } else { sign })
        .collect();
    Ok(SignedGraph {
        graph: sg.graph().clone(),
        sigma: Signature(signs),
    })
}

/// True iff some switching set takes `a` to `b`. Brute force over the
/// `2^(n-1)` subsets avoiding vertex 0 (switching at a set and at its
/// complement agree on every edge), intended for small-n test use.
pub fn is_switching_equivalent(a: &SignedGraph, b: &SignedGraph) -> Result<bool, SignedError> {
    if a.graph() != b.graph() {
        return Err(SignedError::GraphMismatch);
    }
    let n = a.graph().vertex_count();
    if n == 0 {
        return Ok(true);
    }
    assert!(n <= 24, "brute-force switching check is for small graphs");
    let edges = a.graph().edges();
    'subset: for mask in 0..1u64 << (n - 1) {
        // bit v-1 of mask <=> vertex v is switched; vertex 0 never is
        let in_s = |v: Vertex| v > 0 && (mask >> (v - 1)) & 1 == 1;
        for (i, &(u, v)) in edges.iter().enumerate() {
            let switched = if in_s(u) != in_s(v) {
                -a.sigma().sign(i)
            } else {
                a.sigma().sign(i)
            };
            if switched != b.sigma().sign(i) {
                continue 'subset;
            }
        }
        return Ok(true);
    }
    Ok(false)
}

/// Switching-class representatives of all signatures of a graph.
///
/// A spanning forest is fixed by BFS from the lowest-index vertex of each
/// component (neighbours in ascending order); representatives are `+1` on
/// every forest edge while the non-forest edges range over all sign
/// patterns. Every signature of the graph is switching-equivalent to
/// exactly one representative, so there are `2^(|E| - n + c)` of them.
#[derive(Debug, Clone)]
pub struct SignatureClasses {
    edge_count: usize,
    /// Indices of non-forest edges, ascending.
    free_edges: Vec<usize>,
}

impl SignatureClasses {
    pub fn len(&self) -> u64 {
        1u64 << self.free_edges.len()
    }

    pub fn is_empty(&self) -> bool {
        false // there is always at least the all-positive representative
    }

    /// Number of non-forest edges (the exponent in `2^t`).
    pub fn free_edge_count(&self) -> usize {
        self.free_edges.len()
    }

    /// The `pattern`-th representative: bit `b` of `pattern` set makes the
    /// `b`-th non-forest edge negative. Pattern 0 is all-positive.
    pub fn get(&self, pattern: u64) -> Signature {
        assert!(pattern < self.len(), "pattern out of range");
        let mut signs = vec![1i8; self.edge_count];
        for (bit, &edge) in self.free_edges.iter().enumerate() {
            if (pattern >> bit) & 1 == 1 {
                signs[edge] = -1;
            }
        }
        Signature(signs)
    }

    pub fn iter(&self) -> impl Iterator<Item = Signature> + '_ {
        (0..self.len()).map(|p| self.get(p))
    }
}

/// Fixes the BFS spanning forest of `g` and returns the signature-class
/// representatives (see [`SignatureClasses`]).
pub fn enumerate_signature_classes(g: &Graph) -> SignatureClasses {
    let n = g.vertex_count();
    let mut edge_index = std::collections::HashMap::new();
    for (i, &(u, v)) in g.edges().iter().enumerate() {
        edge_index.insert((u, v), i);
    }
    let index_of = |u: Vertex, v: Vertex| {
        let key = if u < v { (u, v) } else { (v, u) };
        edge_index[&key]
    };

    let mut in_forest = vec![false; g.edge_count()];
    let mut seen = vec![false; n];
    for root in 0..n {
        if seen[root] {
            continue;
        }
        seen[root] = true;
        let mut queue = VecDeque::from([root]);
        while let Some(v) = queue.pop_front() {
            for &w in g.neighbours(v) {
                if !seen[w] {
                    seen[w] = true;
                    in_forest[index_of(v, w)] = true;
                    queue.push_back(w);
                }
            }
        }
    }

    let free_edges: Vec<usize> = (0..g.edge_count()).filter(|&i| !in_forest[i]).collect();
    assert!(
        free_edges.len() < 64,
        "graph has too many independent cycles to enumerate"
    );
    SignatureClasses {
        edge_count: g.edge_count(),
        free_edges,
    }
}
