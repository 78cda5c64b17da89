//! CNF export of signed k-colourability and DIMACS serialization.
//!
//! Variable numbering is fixed: `x(v, c) = v*k + index(c) + 1` where
//! `index(c)` is the position of `c` in the ascending colour set. Clause
//! order is fixed too (at-least-one per vertex, then pairwise at-most-one
//! per vertex, then per-edge conflict clauses in edge-index order), which
//! makes the DIMACS output byte-exact for golden tests.

use super::{ColourSet, SignedColouring, SolverError};
use crate::graph::Vertex;
use crate::signed::SignedGraph;

/// A propositional formula in conjunctive normal form. Literals use DIMACS
/// conventions: variable `i` is `i` positive, `-i` negated, variables start
/// at 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CnfFormula {
    num_vars: usize,
    clauses: Vec<Vec<i32>>,
}

impl CnfFormula {
    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn clauses(&self) -> &[Vec<i32>] {
        &self.clauses
    }

    /// DIMACS text: `p cnf <vars> <clauses>` then one zero-terminated
    /// clause per line.
    pub fn to_dimacs(&self) -> String {
        let mut out = format!("p cnf {} {}\n", self.num_vars, self.clauses.len());
        for clause in &self.clauses {
            for lit in clause {
                out.push_str(&lit.to_string());
                out.push(' ');
            }
            out.push_str("0\n");
        }
        out
    }

    /// Complete satisfiability decision by DPLL (unit propagation plus
    /// branching). This is the built-in check for the export path; it never
    /// inspects the colouring search.
    pub fn satisfiable(&self) -> Option<Vec<bool>> {
        let mut assignment: Vec<Option<bool>> = vec![None; self.num_vars];
        if self.dpll(&mut assignment) {
            Some(assignment.into_iter().map(|v| v.unwrap_or(false)).collect())
        } else {
            None
        }
    }

    fn dpll(&self, assignment: &mut Vec<Option<bool>>) -> bool {
        // unit propagation to fixpoint
        let mut trail: Vec<usize> = Vec::new();
        loop {
            let mut propagated = false;
            for clause in &self.clauses {
                let mut unassigned = None;
                let mut unassigned_count = 0;
                let mut satisfied = false;
                for &lit in clause {
                    let var = lit.unsigned_abs() as usize - 1;
                    match assignment[var] {
                        Some(value) => {
                            if value == (lit > 0) {
                                satisfied = true;
                                break;
                            }
                        }
                        None => {
                            unassigned = Some(lit);
                            unassigned_count += 1;
                        }
                    }
                }
                if satisfied {
                    continue;
                }
                match unassigned_count {
                    0 => {
                        for var in trail {
                            assignment[var] = None;
                        }
                        return false;
                    }
                    1 => {
                        let lit = unassigned.unwrap();
                        let var = lit.unsigned_abs() as usize - 1;
                        assignment[var] = Some(lit > 0);
                        trail.push(var);
                        propagated = true;
                    }
                    _ => {}
                }
            }
            if !propagated {
                break;
            }
        }

        match assignment.iter().position(|a| a.is_none()) {
            None => true, // total and no empty clause: satisfied
            Some(var) => {
                for value in [true, false] {
                    assignment[var] = Some(value);
                    if self.dpll(assignment) {
                        return true;
                    }
                }
                assignment[var] = None;
                for var in trail {
                    assignment[var] = None;
                }
                false
            }
        }
    }
}

/// Encodes k-colourability of `sg` as CNF.
///
/// For each edge `e = (u, v)` with sign `s` and each colour `c`, the pair
/// `f(u) = s*c, f(v) = c` violates the colouring condition, so the clause
/// `-x(u, s*c) | -x(v, c)` is emitted; the colour set is negation-closed,
/// hence each edge contributes exactly k conflict clauses.
pub fn encode_cnf(sg: &SignedGraph, k: u32) -> Result<CnfFormula, SolverError> {
    let set = ColourSet::new(k)?;
    let n = sg.graph().vertex_count();
    let k = k as usize;
    let var = |v: Vertex, colour_index: usize| (v * k + colour_index + 1) as i32;

    let mut clauses = Vec::new();
    for v in 0..n {
        clauses.push((0..k).map(|i| var(v, i)).collect());
    }
    for v in 0..n {
        for i in 0..k {
            for j in i + 1..k {
                clauses.push(vec![-var(v, i), -var(v, j)]);
            }
        }
    }
    for (e, &(u, v)) in sg.graph().edges().iter().enumerate() {
        let sign = i32::from(sg.edge_sign(e));
        for (i, &c) in set.values().iter().enumerate() {
            let j = set
                .index_of(sign * c)
                .expect("colour set is negation-closed");
            clauses.push(vec![-var(u, i), -var(v, j)]);
        }
    }
    Ok(CnfFormula {
        num_vars: n * k,
        clauses,
    })
}

/// Reads a colouring off a total model: vertex `v` gets the colour whose
/// variable is true. Zero or several true colour variables at a vertex is an
/// `AmbiguousModel` error.
pub fn decode_cnf_model(
    model: &[bool],
    sg: &SignedGraph,
    k: u32,
) -> Result<SignedColouring, SolverError> {
    let set = ColourSet::new(k)?;
    let n = sg.graph().vertex_count();
    let k = k as usize;
    assert_eq!(model.len(), n * k, "model must assign every variable");

    let mut colours = Vec::with_capacity(n);
    for v in 0..n {
        let true_indices: Vec<usize> = (0..k).filter(|&i| model[v * k + i]).collect();
        if true_indices.len() != 1 {
            return Err(SolverError::AmbiguousModel {
                vertex: v,
                count: true_indices.len(),
            });
        }
        colours.push(set.values()[true_indices[0]]);
    }
    SignedColouring::new(colours, &set)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Graph;
    use crate::signed::Signature;
    use crate::solver::{is_proper, solve_k};

    fn k2(sign: i8) -> SignedGraph {
        let g = Graph::new(2, [(0, 1)]).unwrap();
        SignedGraph::new(g, Signature::new(vec![sign])).unwrap()
    }

    #[test]
    fn k2_positive_dimacs_is_exact() {
        let formula = encode_cnf(&k2(1), 2).unwrap();
        // vars: x(0,-1)=1 x(0,1)=2 x(1,-1)=3 x(1,1)=4
        // conflicts forbid (-1,-1) and (1,1)
        assert_eq!(
            formula.to_dimacs(),
            "p cnf 4 6\n\
             1 2 0\n\
             3 4 0\n\
             -1 -2 0\n\
             -3 -4 0\n\
             -1 -3 0\n\
             -2 -4 0\n"
        );
    }

    #[test]
    fn k2_negative_conflicts_forbid_opposite_pairs() {
        let formula = encode_cnf(&k2(-1), 2).unwrap();
        // conflicts forbid (-1,1) and (1,-1): clauses (-1,-4) and (-2,-3)
        let conflicts: Vec<_> = formula.clauses()[4..].to_vec();
        assert_eq!(conflicts, vec![vec![-1, -4], vec![-2, -3]]);
    }

    #[test]
    fn clause_counts() {
        // n vertices contribute n ALO + n*k(k-1)/2 AMO; each edge adds k.
        let tri = SignedGraph::all_positive(Graph::cycle(3));
        let formula = encode_cnf(&tri, 3).unwrap();
        assert_eq!(formula.num_vars(), 9);
        assert_eq!(formula.clauses().len(), 3 + 3 * 3 + 3 * 3);
    }

    #[test]
    fn decode_reads_off_true_literals() {
        let sg = k2(1);
        // x(0,1) and x(1,-1) true
        let model = [false, true, true, false];
        let f = decode_cnf_model(&model, &sg, 2).unwrap();
        assert_eq!(f.colours(), &[1, -1]);
        assert!(is_proper(&sg, &f).unwrap());
    }

    #[test]
    fn decode_rejects_all_false_model() {
        let err = decode_cnf_model(&[false; 4], &k2(1), 2).unwrap_err();
        assert_eq!(
            err,
            SolverError::AmbiguousModel {
                vertex: 0,
                count: 0
            }
        );
    }

    #[test]
    fn model_from_dpll_decodes_to_proper_colouring() {
        let sg = k2(-1);
        let formula = encode_cnf(&sg, 2).unwrap();
        let model = formula.satisfiable().expect("negative K2 is 2-colourable");
        let f = decode_cnf_model(&model, &sg, 2).unwrap();
        assert!(is_proper(&sg, &f).unwrap());
        assert_ne!(f.colours()[0], -f.colours()[1]);
    }

    #[test]
    fn cnf_satisfiability_matches_solver_on_triangles() {
        let g = Graph::cycle(3);
        for bits in 0..8u32 {
            let signs = (0..3)
                .map(|i| if (bits >> i) & 1 == 1 { -1 } else { 1 })
                .collect();
            let sg = SignedGraph::new(g.clone(), Signature::new(signs)).unwrap();
            for k in 1..=4 {
                let direct = solve_k(&sg, k).unwrap().is_satisfiable();
                let via_cnf = encode_cnf(&sg, k).unwrap().satisfiable().is_some();
                assert_eq!(direct, via_cnf, "bits {bits:03b} k {k}");
            }
        }
    }

    #[test]
    fn unsat_formula_has_no_model() {
        let tri = SignedGraph::all_positive(Graph::cycle(3));
        assert!(encode_cnf(&tri, 2).unwrap().satisfiable().is_none());
    }

    #[test]
    fn empty_graph_formula() {
        let sg = SignedGraph::all_positive(Graph::new(0, []).unwrap());
        let formula = encode_cnf(&sg, 3).unwrap();
        assert_eq!(formula.to_dimacs(), "p cnf 0 0\n");
        assert!(formula.satisfiable().is_some());
    }
}
