//! Exact signed-graph colouring toolkit.
//!
//! A signed graph pairs a simple graph with a `{+1, -1}` edge signature. A
//! signed k-colouring maps vertices into the symmetric colour set
//! `{-q, .., -1, (0,) 1, .., q}` so that `f(x) != sigma(e) * f(y)` across
//! every edge, and the signed chromatic number is the least workable k.
//!
//! The crate provides:
//!
//! * [`graph`] — simple graphs, induced subgraphs, BFS bipartiteness with
//!   odd-cycle certificates, the Euler planarity screen;
//! * [`signed`] — signatures, switching, and enumeration of signatures
//!   modulo switching (one representative per class);
//! * [`solver`] — exact backtracking k-colourability, a brute-force oracle,
//!   and a DIMACS CNF export path;
//! * [`reduction`] — the 2-list machinery: list-derived signatures, derived
//!   L-colourings, and bipartite colour-class witnesses;
//! * [`harness`] — corpus scans for signed 4-colourability (per switching
//!   class) and for 2-list assignments, with certificates and deterministic
//!   reports;
//! * [`io`] — graph6/sparse6/planar_code readers, the signed-graph text
//!   format, and the report line schema.
//!
//! Scans parallelize across work items with the `parallel` feature (on by
//! default); without it everything runs sequentially with identical output.

pub mod graph;
pub mod harness;
pub mod io;
pub mod reduction;
pub mod signed;
pub mod solver;
