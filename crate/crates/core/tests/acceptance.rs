//! Acceptance suite: one test per release criterion, each printing a
//! PASS line (visible with `--nocapture`). Catalogue choice: *all labelled
//! graphs* on the stated vertex counts, which is strictly stronger than one
//! representative per isomorphism class and needs no isomorphism code.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use sgcol::graph::{BipartitionResult, Graph};
use sgcol::harness::{
    scan, Certificate, ObjectId, Outcome, ScanConfig, ScanMode, ScanRecord,
};
use sgcol::io::report::write_report_line;
use sgcol::io::{encode_graph6, parse_graph6, CorpusFormat, CorpusReader};
use sgcol::reduction::{
    build_signature, list_colour_via_signature, palette_pairs, sweep_all_colourings,
    ListAssignment, ListColourOutcome,
};
use sgcol::signed::{
    all_positive, enumerate_signature_classes, is_switching_equivalent, switch, Signature,
    SignedGraph,
};
use sgcol::solver::{
    brute_force_k, chromatic_number, encode_cnf, solve_k, Budget, DEFAULT_ORACLE_BUDGET,
};

fn pass(criterion: u32, name: &str) {
    println!("acceptance criterion {criterion:02} ({name}): PASS");
}

/// Every labelled graph on exactly `n` vertices (2^C(n,2) of them).
fn labelled_graphs(n: usize) -> impl Iterator<Item = Graph> {
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
        .collect();
    let count = 1u64 << pairs.len();
    (0..count).map(move |mask| {
        let edges = pairs
            .iter()
            .enumerate()
            .filter(|(i, _)| (mask >> i) & 1 == 1)
            .map(|(_, &e)| e);
        Graph::new(n, edges).expect("pair lists are simple")
    })
}

fn catalogue_up_to(n: usize) -> Vec<Graph> {
    (0..=n).flat_map(labelled_graphs).collect()
}

/// Independent oracle for the ordinary chromatic number: plain enumeration
/// of maps V -> {0..k-1} under f(x) != f(y); no signed machinery involved.
fn ordinary_chromatic(g: &Graph) -> u32 {
    let n = g.vertex_count();
    if n == 0 {
        return 0;
    }
    let colourable = |k: u32| -> bool {
        let mut assignment = vec![0u32; n];
        loop {
            if g.edges()
                .iter()
                .all(|&(u, v)| assignment[u] != assignment[v])
            {
                return true;
            }
            let mut pos = n;
            loop {
                if pos == 0 {
                    return false;
                }
                pos -= 1;
                assignment[pos] += 1;
                if assignment[pos] < k {
                    break;
                }
                assignment[pos] = 0;
            }
        }
    };
    (1..=n as u32).find(|&k| colourable(k)).expect("k = n works")
}

fn fixture_path(name: &str) -> std::path::PathBuf {
    std::path::Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name)
}

fn load_fixture(name: &str) -> Vec<Graph> {
    let file = std::fs::File::open(fixture_path(name)).expect("fixture present");
    CorpusReader::new(CorpusFormat::PlanarCode, std::io::BufReader::new(file))
        .collect::<Result<Vec<_>, _>>()
        .expect("fixture parses")
}

#[test]
fn acceptance_01_oracle_equivalence() {
    let graphs = catalogue_up_to(5);
    graphs.par_iter().for_each(|g| {
        let classes = enumerate_signature_classes(g);
        for sigma in classes.iter() {
            let sg = SignedGraph::new(g.clone(), sigma).unwrap();
            for k in 1..=4 {
                let fast = solve_k(&sg, k).unwrap().is_satisfiable();
                let slow = brute_force_k(&sg, k, DEFAULT_ORACLE_BUDGET)
                    .unwrap()
                    .is_satisfiable();
                assert_eq!(
                    fast,
                    slow,
                    "solver / oracle disagree: n={} edges={:?} sigma={} k={k}",
                    g.vertex_count(),
                    g.edges(),
                    sg.sigma()
                );
            }
        }
    });
    pass(1, "oracle equivalence on all labelled graphs <= 5 vertices");
}

#[test]
fn acceptance_02_all_positive_coincidence() {
    let graphs = catalogue_up_to(5);
    graphs.par_iter().for_each(|g| {
        let sg = SignedGraph::all_positive(g.clone());
        assert_eq!(
            chromatic_number(&sg),
            ordinary_chromatic(g),
            "all-positive chi differs from ordinary chromatic number: {:?}",
            g.edges()
        );
    });
    pass(2, "all-positive chi equals the ordinary chromatic number");
}

#[test]
fn acceptance_03_switching_invariance() {
    let mut rng = ChaCha8Rng::seed_from_u64(20_2608);
    let mut triples = Vec::new();
    while triples.len() < 200 {
        let n = rng.gen_range(0..=5usize);
        let pairs: Vec<(usize, usize)> = (0..n)
            .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
            .collect();
        let edges: Vec<(usize, usize)> = pairs
            .iter()
            .copied()
            .filter(|_| rng.gen_bool(0.5))
            .collect();
        let g = Graph::new(n, edges).unwrap();
        let signs: Vec<i8> = (0..g.edge_count())
            .map(|_| if rng.gen_bool(0.5) { -1 } else { 1 })
            .collect();
        let sg = SignedGraph::new(g, Signature::new(signs)).unwrap();
        let s: Vec<usize> = (0..n).filter(|_| rng.gen_bool(0.5)).collect();
        triples.push((sg, s));
    }
    triples.par_iter().for_each(|(sg, s)| {
        let switched = switch(sg, s).unwrap();
        assert_eq!(
            chromatic_number(sg),
            chromatic_number(&switched),
            "chi changed under switching at {s:?}"
        );
    });
    pass(3, "chromatic number invariant under switching, 200 seeded triples");
}

#[test]
fn acceptance_04_signature_class_enumeration() {
    let graphs = catalogue_up_to(5);
    graphs.par_iter().for_each(|g| {
        let m = g.edge_count();
        let n = g.vertex_count();
        let c = g.component_count();
        let classes = enumerate_signature_classes(g);
        let reps: Vec<Signature> = classes.iter().collect();
        assert_eq!(
            reps.len() as u64,
            1u64 << (m + c - n),
            "class count != 2^(|E|-n+c) for {:?}",
            g.edges()
        );

        let signed = |sigma: Signature| SignedGraph::new(g.clone(), sigma).unwrap();
        for i in 0..reps.len() {
            for j in i + 1..reps.len() {
                assert!(
                    !is_switching_equivalent(&signed(reps[i].clone()), &signed(reps[j].clone()))
                        .unwrap(),
                    "representatives {i} and {j} are equivalent on {:?}",
                    g.edges()
                );
            }
        }
        for bits in 0..1u64 << m {
            let signs = (0..m)
                .map(|e| if (bits >> e) & 1 == 1 { -1 } else { 1 })
                .collect();
            let sg = signed(Signature::new(signs));
            let covered = reps
                .iter()
                .any(|rep| is_switching_equivalent(&sg, &signed(rep.clone())).unwrap());
            assert!(covered, "signature {bits:b} uncovered on {:?}", g.edges());
        }
    });
    pass(4, "2^(|E|-n+c) pairwise-inequivalent classes covering all signatures");
}

#[test]
fn acceptance_05_theorem_pipeline_soundness() {
    // independent check applied to every outcome that produced a colouring
    fn check(g: &Graph, lists: &ListAssignment, outcome: &ListColourOutcome) {
        match outcome {
            ListColourOutcome::Coloured(out) => {
                for (v, &colour) in out.phi.colours().iter().enumerate() {
                    assert!(
                        lists.contains(v, colour),
                        "phi({v}) = {colour} escaped its list"
                    );
                }
                for class in &out.witness.classes {
                    let sub = g.induced_subgraph(class.members.iter().copied()).unwrap();
                    assert!(
                        matches!(sub.bipartition(), BipartitionResult::Bipartite(_)),
                        "BFS found class {} non-bipartite",
                        class.colour
                    );
                }
            }
            // an unsatisfiable signature has no colourings to check; the
            // Euler screen is necessary-only, so non-planar survivors may
            // legitimately land here
            ListColourOutcome::SignatureUncolourable { .. } => {}
        }
    }

    // n <= 4: every 2-list assignment over {1..3}, every proper colouring
    for n in 0..=4usize {
        let pairs = palette_pairs(3);
        for g in labelled_graphs(n) {
            let total = pairs.len().pow(n as u32);
            for index in 0..total {
                let mut digits = index;
                let mut chosen = vec![(0u32, 0u32); n];
                for v in (0..n).rev() {
                    chosen[v] = pairs[digits % pairs.len()];
                    digits /= pairs.len();
                }
                let lists = ListAssignment::new(chosen).unwrap();
                sweep_all_colourings(&g, &lists, 1 << 20, |f, phi, witness| {
                    for (v, &colour) in phi.colours().iter().enumerate() {
                        assert!(lists.contains(v, colour));
                    }
                    for class in &witness.classes {
                        let sub = g.induced_subgraph(class.members.iter().copied()).unwrap();
                        assert!(sub.is_bipartite(), "f = {:?}", f.colours());
                    }
                })
                .expect("no witness failures in the exhaustive sweep");
            }
        }
    }

    // n in {5, 6}: 500 seeded random assignments over {1..4}, first
    // colouring per assignment, graphs passing the Euler screen
    for n in [5usize, 6] {
        let pairs = palette_pairs(4);
        let graphs: Vec<Graph> = labelled_graphs(n)
            .filter(|g| g.passes_euler_bound())
            .collect();
        graphs.par_iter().enumerate().for_each(|(gi, g)| {
            let mut rng = ChaCha8Rng::seed_from_u64(5_0500);
            rng.set_stream(gi as u64);
            for _ in 0..500 {
                let chosen: Vec<(u32, u32)> =
                    (0..n).map(|_| pairs[rng.gen_range(0..pairs.len())]).collect();
                let lists = ListAssignment::new(chosen).unwrap();
                let outcome = list_colour_via_signature(&g, &lists, &Budget::UNLIMITED)
                    .expect("pipeline cannot fail on its own lists");
                check(g, &lists, &outcome);
            }
        });
    }
    pass(5, "zero witness failures across exhaustive and random sweeps");
}

#[test]
fn acceptance_06_sigma_well_definedness() {
    let mut rng = ChaCha8Rng::seed_from_u64(6_0600);
    for _ in 0..100_000 {
        let draw = |rng: &mut ChaCha8Rng| {
            let a = rng.gen_range(1..=50u32);
            let b = rng.gen_range(1..=50u32);
            if a == b {
                (a, b + 1)
            } else {
                (a.min(b), a.max(b))
            }
        };
        let (min_u, max_u) = draw(&mut rng);
        let (min_v, max_v) = draw(&mut rng);
        let down_up = min_u == max_v;
        let up_down = min_v == max_u;
        assert!(
            !(down_up && up_down),
            "both signature conditions hold for ({min_u},{max_u}) / ({min_v},{max_v})"
        );
        // and the built signature agrees with the direct formula
        let g = Graph::new(2, [(0, 1)]).unwrap();
        let lists = ListAssignment::new(vec![(min_u, max_u), (min_v, max_v)]).unwrap();
        let sigma = build_signature(&g, &lists).unwrap();
        assert_eq!(sigma.sign(0) == -1, down_up || up_down);
    }
    pass(6, "signature case conditions never hold simultaneously (1e5 draws)");
}

#[test]
fn acceptance_07_conjecture1_desk_scan() {
    let graphs = load_fixture("triangulations_03_08.plc");
    assert_eq!(graphs.len(), 24, "3..8-vertex triangulation corpus size");
    for g in &graphs {
        let n = g.vertex_count();
        assert!((3..=8).contains(&n));
        assert_eq!(g.edge_count(), 3 * n - 6, "not a triangulation");
        assert!(g.passes_euler_bound());
        assert_eq!(g.component_count(), 1);
    }

    let file = std::fs::File::open(fixture_path("triangulations_03_08.plc")).unwrap();
    let reader = CorpusReader::new(CorpusFormat::PlanarCode, std::io::BufReader::new(file));
    let cfg = ScanConfig {
        mode: ScanMode::Conjecture1,
        k: 4,
        ..ScanConfig::default()
    };
    let mut records: Vec<ScanRecord> = Vec::new();
    let summary = scan(reader, &cfg, |r| records.push(r.clone())).unwrap();

    assert_eq!(summary.graphs, 24);
    assert_eq!(summary.skipped, 0);
    assert_eq!(summary.counterexample_candidates(), 0, "conjecture holds on the corpus");
    assert_eq!(summary.exit_code(), 0);
    for (graph_id, g) in graphs.iter().enumerate() {
        let expected = 1u64 << (2 * g.vertex_count() - 5);
        let got = records.iter().filter(|r| r.graph_id == graph_id).count() as u64;
        assert_eq!(got, expected, "class count for graph {graph_id}");
    }
    assert!(records.iter().all(|r| r.outcome == Outcome::Colourable));

    // cross-check a sample of classes against the brute-force oracle
    for record in records.iter().filter(|r| graphs[r.graph_id].vertex_count() <= 6) {
        let ObjectId::Signature(pm) = &record.object else {
            panic!("conjecture1 records carry signature objects");
        };
        let sigma = Signature::from_pm_str(pm).unwrap();
        let g = &graphs[record.graph_id];
        let sg = SignedGraph::new(g.clone(), sigma).unwrap();
        assert!(brute_force_k(&sg, 4, DEFAULT_ORACLE_BUDGET)
            .unwrap()
            .is_satisfiable());
        let Some(Certificate::SignedColouring(colours)) = &record.certificate else {
            panic!("colourable records carry colourings");
        };
        let set = sgcol::solver::ColourSet::new(4).unwrap();
        let f = sgcol::solver::SignedColouring::new(colours.clone(), &set).unwrap();
        assert!(sgcol::solver::is_proper(&sg, &f).unwrap());
    }
    pass(7, "all switching classes of all 3..8-vertex triangulations 4-colourable");
}

#[test]
fn acceptance_08_cnf_path_equivalence() {
    for g in catalogue_up_to(4) {
        let classes = enumerate_signature_classes(&g);
        for sigma in classes.iter() {
            let sg = SignedGraph::new(g.clone(), sigma).unwrap();
            for k in 1..=4 {
                let direct = solve_k(&sg, k).unwrap();
                let formula = encode_cnf(&sg, k).unwrap();
                match formula.satisfiable() {
                    Some(model) => {
                        assert!(direct.is_satisfiable(), "CNF SAT but solver UNSAT");
                        let f = sgcol::solver::decode_cnf_model(&model, &sg, k).unwrap();
                        assert!(sgcol::solver::is_proper(&sg, &f).unwrap());
                    }
                    None => assert!(!direct.is_satisfiable(), "CNF UNSAT but solver SAT"),
                }
            }
        }
    }
    pass(8, "DIMACS satisfiability matches the solver on all graphs <= 4 vertices");
}

#[test]
fn acceptance_09_format_round_trips() {
    for n in 0..=7usize {
        labelled_graphs(n).par_bridge().for_each(|g| {
            let encoded = encode_graph6(&g).unwrap();
            let decoded = parse_graph6(&encoded).unwrap();
            assert_eq!(g.vertex_count(), decoded.vertex_count());
            let mut original = g.edges().to_vec();
            original.sort_unstable();
            assert_eq!(original, decoded.edges());
        });
    }

    let fixtures = load_fixture("k4_octahedron.plc");
    assert_eq!(fixtures.len(), 2);
    assert_eq!(
        fixtures[0].edges(),
        &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)],
        "K4 edge set"
    );
    assert_eq!(
        fixtures[1].edges(),
        &[
            (0, 1),
            (0, 3),
            (0, 4),
            (0, 5),
            (1, 2),
            (1, 4),
            (1, 5),
            (2, 3),
            (2, 4),
            (2, 5),
            (3, 4),
            (3, 5)
        ],
        "octahedron edge set"
    );
    pass(9, "graph6 round-trip on all graphs <= 7 vertices; planar_code fixtures exact");
}

#[test]
fn acceptance_10_determinism() {
    let run_scan = |cfg: &ScanConfig| -> String {
        let file = std::fs::File::open(fixture_path("k4_octahedron.plc")).unwrap();
        let reader = CorpusReader::new(CorpusFormat::PlanarCode, std::io::BufReader::new(file));
        let mut out = String::new();
        scan(reader, cfg, |record| {
            out.push_str(&write_report_line(record));
            out.push('\n');
        })
        .unwrap();
        out
    };

    for mode in [
        ScanMode::Conjecture1,
        ScanMode::Conjecture2Exhaustive,
        ScanMode::Conjecture2Random,
    ] {
        let cfg = ScanConfig {
            mode,
            palette: 3,
            samples: 40,
            seed: 99,
            workers: 1,
            ..ScanConfig::default()
        };
        let first = run_scan(&cfg);
        let second = run_scan(&cfg);
        assert_eq!(first, second, "same config + seed must be byte-identical");
        assert!(!first.is_empty());

        #[cfg(feature = "parallel")]
        {
            let parallel = run_scan(&ScanConfig {
                workers: 0,
                ..cfg.clone()
            });
            assert_eq!(first, parallel, "worker count must not change the report");
        }
    }
    pass(10, "byte-identical reports for identical config and seed");
}

#[test]
fn acceptance_all_positive_baseline_sanity() {
    // plumbing check for the suite itself: the first class is all-positive
    let g = Graph::complete(4);
    assert_eq!(enumerate_signature_classes(&g).get(0), all_positive(&g));
    let cfg = ScanConfig::default();
    assert_eq!(cfg.k, 4);
}
