//! The shipped fixture files stay in lockstep with the in-crate reference
//! graphs, and the recorded structure of the spliced example holds.

use std::path::PathBuf;

use twodd_core::certify::{reduce_2ac, reduce_3ac, Caps};
use twodd_core::digraph::spliced_graph;
use twodd_core::enumerate::canonical_form;
use twodd_core::io::{format_graph_text, parse_graph_text};
use twodd_core::{fixtures, Digraph, SpliceMap};

fn read(name: &str) -> Digraph {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(name);
    parse_graph_text(&std::fs::read_to_string(path).expect("fixture file")).expect("parses")
}

#[test]
fn files_match_reference_constructors() {
    for (name, g) in [
        ("g1.graph", fixtures::g1()),
        ("g2.graph", fixtures::g2()),
        ("g3.graph", fixtures::g3()),
        ("g4.graph", fixtures::g4()),
        ("ga.graph", fixtures::ga()),
        ("gb.graph", fixtures::gb()),
        ("g5.graph", fixtures::g5()),
    ] {
        let file = read(name);
        assert_eq!(file, g, "{name} drifted from the constructor");
        // And the text render round-trips byte for byte.
        assert_eq!(format_graph_text(&file), format_graph_text(&g));
    }
}

#[test]
fn g5_boundary_and_splice_structure() {
    let g5 = read("g5.graph");
    let classes = g5.classify_vertices().unwrap();
    assert_eq!(classes.saturated.len(), 18);
    // All six cycles are open: both halves of each are path systems.
    let acs = g5.ac_decompose().unwrap();
    assert!(acs.iter().all(|c| !g5.ac_is_closed(c)));
    // The two splice sides induce subgraphs isomorphic to the reference
    // three-AC components.
    let side = g5.induced_by_acs(&acs, &[0, 2, 3]).unwrap();
    assert_eq!(
        canonical_form(&side.graph).code,
        canonical_form(&fixtures::gb()).code
    );
    let other = g5.induced_by_acs(&acs, &[1, 4, 5]).unwrap();
    assert_eq!(
        canonical_form(&other.graph).code,
        canonical_form(&fixtures::ga()).code
    );
    // Splitting the ten splice vertices (both families) separates the two
    // sides again.
    let boundary: Vec<usize> = (0..5).chain(13..18).collect();
    let split = g5.split(&boundary).unwrap().graph;
    assert_eq!(split.components(), 2);
    // Splicing the reference sides with identity permutations rebuilds the
    // same graph up to isomorphism.
    let ga = read("ga.graph");
    let gb = read("gb.graph");
    let map = SpliceMap::identity(&ga, &gb).unwrap();
    let spliced = spliced_graph(&ga, &gb, &map).unwrap();
    assert_eq!(canonical_form(&spliced).code, canonical_form(&g5).code);
}

#[test]
fn g5_is_a_difficult_case_for_the_reductions() {
    let g5 = read("g5.graph");
    let caps = Caps::default();
    assert!(g5.is_connected());
    assert!(g5.graph_is_clean().unwrap());
    assert!(!g5.is_2_splittable().unwrap());
    assert!(reduce_2ac(&g5, &caps).unwrap().is_none());
    assert!(reduce_3ac(&g5, &caps).unwrap().is_none());
}
