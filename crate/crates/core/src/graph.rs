//! Simple undirected graphs with stable vertex and edge indexing.
//!
//! Vertices are `0..n`. Edges are stored as normalized pairs `(u, v)` with
//! `u < v`, in construction order; the position of a pair in that list is the
//! edge's index for the lifetime of the graph, and signatures, reports and
//! CNF encodings all refer to edges by these indices.

use std::collections::VecDeque;

use thiserror::Error;

pub type Vertex = usize;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("loop edge at vertex {0}")]
    LoopEdge(Vertex),
    #[error("vertex {vertex} out of range for graph on {n} vertices")]
    VertexOutOfRange { vertex: Vertex, n: usize },
    #[error("duplicate edge ({0}, {1})")]
    DuplicateEdge(Vertex, Vertex),
}

/// A simple undirected graph. Immutable after construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    edges: Vec<(Vertex, Vertex)>,
    adj: Vec<Vec<Vertex>>,
}

impl Graph {
    /// Builds a graph on `n` vertices from an edge list.
    ///
    /// Pairs are normalized to `u < v` but kept in input order. Loops,
    /// out-of-range endpoints and duplicate pairs (after normalization) are
    /// rejected rather than silently dropped.
    pub fn new(
        n: usize,
        edges: impl IntoIterator<Item = (Vertex, Vertex)>,
    ) -> Result<Self, GraphError> {
        let mut normalized: Vec<(Vertex, Vertex)> = Vec::new();
        let mut adj = vec![Vec::new(); n];
        for (a, b) in edges {
            if a == b {
                return Err(GraphError::LoopEdge(a));
            }
            for v in [a, b] {
                if v >= n {
                    return Err(GraphError::VertexOutOfRange { vertex: v, n });
                }
            }
            let (u, v) = if a < b { (a, b) } else { (b, a) };
            if adj[u].contains(&v) {
                return Err(GraphError::DuplicateEdge(u, v));
            }
            adj[u].push(v);
            adj[v].push(u);
            normalized.push((u, v));
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        Ok(Graph {
            n,
            edges: normalized,
            adj,
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Edge pairs in index order, each with `u < v`.
    pub fn edges(&self) -> &[(Vertex, Vertex)] {
        &self.edges
    }

    /// Neighbours of `v` in ascending order.
    pub fn neighbours(&self, v: Vertex) -> &[Vertex] {
        &self.adj[v]
    }

    pub fn degree(&self, v: Vertex) -> usize {
        self.adj[v].len()
    }

    pub fn has_edge(&self, u: Vertex, v: Vertex) -> bool {
        u < self.n && self.adj[u].binary_search(&v).is_ok()
    }

    /// Number of connected components.
    pub fn component_count(&self) -> usize {
        let mut seen = vec![false; self.n];
        let mut components = 0;
        for start in 0..self.n {
            if seen[start] {
                continue;
            }
            components += 1;
            let mut queue = VecDeque::from([start]);
            seen[start] = true;
            while let Some(v) = queue.pop_front() {
                for &w in self.neighbours(v) {
                    if !seen[w] {
                        seen[w] = true;
                        queue.push_back(w);
                    }
                }
            }
        }
        components
    }

    /// The subgraph induced by `members`: exactly the edges of `self` with
    /// both endpoints in the set.
    pub fn induced_subgraph(
        &self,
        members: impl IntoIterator<Item = Vertex>,
    ) -> Result<InducedSubgraph<'_>, GraphError> {
        let mut in_members = vec![false; self.n];
        for v in members {
            if v >= self.n {
                return Err(GraphError::VertexOutOfRange { vertex: v, n: self.n });
            }
            in_members[v] = true;
        }
        let members: Vec<Vertex> = (0..self.n).filter(|&v| in_members[v]).collect();
        let edges: Vec<(Vertex, Vertex)> = self
            .edges
            .iter()
            .copied()
            .filter(|&(u, v)| in_members[u] && in_members[v])
            .collect();
        Ok(InducedSubgraph {
            parent: self,
            members,
            in_members,
            edges,
        })
    }

    /// Euler-formula screen: true iff `n < 3` or `|E| <= 3n - 6`.
    ///
    /// A necessary condition for planarity only; passing does not certify
    /// that the graph is planar.
    pub fn passes_euler_bound(&self) -> bool {
        self.n < 3 || self.edges.len() <= 3 * self.n - 6
    }

    pub fn complete(n: usize) -> Self {
        let edges = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v)));
        Graph::new(n, edges).expect("complete graph is simple")
    }

    pub fn path(n: usize) -> Self {
        Graph::new(n, (1..n).map(|v| (v - 1, v))).expect("path is simple")
    }

    pub fn cycle(n: usize) -> Self {
        assert!(n >= 3, "cycle needs at least 3 vertices");
        Graph::new(n, (0..n).map(|v| (v, (v + 1) % n))).expect("cycle is simple")
    }
}

/// A vertex subset of a parent graph together with the induced edges.
#[derive(Debug, Clone)]
pub struct InducedSubgraph<'a> {
    parent: &'a Graph,
    members: Vec<Vertex>,
    in_members: Vec<bool>,
    edges: Vec<(Vertex, Vertex)>,
}

/// Result of a bipartiteness test: a proper 2-sided map over the members, or
/// an odd cycle. Sides are labelled 1 and 2.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BipartitionResult {
    /// `(vertex, side)` pairs for every member, in ascending vertex order.
    Bipartite(Vec<(Vertex, u8)>),
    /// Closed odd cycle: consecutive vertices (including last back to first)
    /// are induced edges.
    OddCycle(Vec<Vertex>),
}

impl InducedSubgraph<'_> {
    pub fn parent(&self) -> &Graph {
        self.parent
    }

    /// Members in ascending order.
    pub fn members(&self) -> &[Vertex] {
        &self.members
    }

    pub fn contains(&self, v: Vertex) -> bool {
        v < self.in_members.len() && self.in_members[v]
    }

    /// Induced edges in parent edge-index order.
    pub fn edges(&self) -> &[(Vertex, Vertex)] {
        &self.edges
    }

    fn induced_neighbours(&self, v: Vertex) -> impl Iterator<Item = Vertex> + '_ {
        self.parent
            .neighbours(v)
            .iter()
            .copied()
            .filter(|&w| self.in_members[w])
    }

    /// BFS 2-colouring. Deterministic: components are rooted at their
    /// lowest-index member and neighbours are visited in ascending order.
    pub fn bipartition(&self) -> BipartitionResult {
        let n = self.parent.vertex_count();
        // side 0 = unvisited
        let mut side = vec![0u8; n];
        let mut parent_of = vec![usize::MAX; n];

        for &root in &self.members {
            if side[root] != 0 {
                continue;
            }
            side[root] = 1;
            let mut queue = VecDeque::from([root]);
            while let Some(v) = queue.pop_front() {
                for w in self.induced_neighbours(v).collect::<Vec<_>>() {
                    if side[w] == 0 {
                        side[w] = 3 - side[v];
                        parent_of[w] = v;
                        queue.push_back(w);
                    } else if side[w] == side[v] {
                        return BipartitionResult::OddCycle(odd_cycle(&parent_of, v, w));
                    }
                }
            }
        }
        BipartitionResult::Bipartite(self.members.iter().map(|&v| (v, side[v])).collect())
    }

    pub fn is_bipartite(&self) -> bool {
        matches!(self.bipartition(), BipartitionResult::Bipartite(_))
    }
}

/// Reconstructs the closed odd cycle through BFS-tree vertices `u` and `v`
/// Joined by the conflicting edge `(u, v)`.
fn odd_cycle(parent_of: &[usize], u: Vertex, v: Vertex) -> Vec<Vertex> {
    let ancestors = |mut x: Vertex| {
        let mut path = vec![x];
        while parent_of[x] != usize::MAX {
            x = parent_of[x];
            path.push(x);
        }
        path
    };
    let pu = ancestors(u);
    let pv = ancestors(v);
    // Both paths end at the BFS root; strip the common suffix down to the
    // lowest common ancestor.
    let mut iu = pu.len();
    let mut iv = pv.len();
    while iu > 1 && iv > 1 && pu[iu - 2] == pv[iv - 2] {
        iu -= 1;
        iv -= 1;
    }
    // u .. lca followed by the v-side path reversed, lca not repeated.
    let mut cycle: Vec<Vertex> = pu[..iu].to_vec();
    cycle.extend(pv[..iv - 1].iter().rev());
    cycle
}
