//! Reference graphs used by the reduction rules, the test suite, and the
//! shipped fixture files.
//!
//! Vertex numbering convention: entries first (in label order), then exits
//! (in label order), then saturated vertices, so the default ascending-id
//! labeling reproduces each graph's reference boundary numbering.

use crate::digraph::Digraph;

fn build(vertices: usize, arcs: &[(usize, usize)]) -> Digraph {
    let g = Digraph::new(vertices, arcs.to_vec()).expect("fixture arcs in range");
    debug_assert!(g.validate().is_valid());
    g
}

/// Open 2-graph with two alternating cycles, two saturated vertices, and
/// open routes {I, (1 4 3), (1 2 4)} under the default labeling.
pub fn g1() -> Digraph {
    build(
        10,
        &[
            // first cycle
            (0, 9), (8, 7), (1, 5), (1, 7), (0, 5), (8, 9),
            // second cycle
            (9, 8), (3, 6), (2, 4), (9, 4), (3, 8), (2, 6),
        ],
    )
}

/// Open routes {I, (1 4 3), (1 2 3)}.
pub fn g2() -> Digraph {
    build(
        10,
        &[
            (8, 6), (1, 5), (0, 9), (8, 9), (0, 5), (1, 6),
            (2, 8), (3, 7), (9, 4), (9, 7), (3, 8), (2, 4),
        ],
    )
}

/// Open routes {I, (1 4)(2 3), (1 2 3), (2 4 3)}.
pub fn g3() -> Digraph {
    build(
        10,
        &[
            (1, 8), (0, 4), (9, 6), (0, 8), (1, 6), (9, 4),
            (8, 5), (2, 9), (3, 7), (8, 7), (3, 9), (2, 5),
        ],
    )
}

/// Open routes {I, (1 2)(3 4), (1 2 3), (2 3 4)}; the residue is empty.
pub fn g4() -> Digraph {
    build(
        10,
        &[
            (3, 7), (2, 9), (1, 8), (3, 8), (1, 9), (2, 7),
            (8, 5), (0, 4), (9, 6), (8, 6), (9, 4), (0, 5),
        ],
    )
}

pub fn two_ac_references() -> [Digraph; 4] {
    [g1(), g2(), g3(), g4()]
}

/// Open 2-graph with three alternating cycles, four saturated vertices, and
/// six open routes.
pub fn ga() -> Digraph {
    build(
        14,
        &[
            // blue
            (1, 9), (12, 5), (0, 13), (12, 9), (1, 13), (0, 5),
            // black
            (4, 6), (13, 11), (10, 12), (4, 12), (13, 6), (10, 11),
            // teal
            (2, 10), (11, 7), (3, 8), (2, 7), (3, 10), (11, 8),
        ],
    )
}

/// Companion of [`ga`] with four open routes.
pub fn gb() -> Digraph {
    build(
        14,
        &[
            // red
            (12, 13), (0, 7), (2, 5), (12, 7), (2, 13), (0, 5),
            // brown
            (4, 8), (3, 6), (11, 10), (11, 6), (4, 10), (3, 8),
            // cyan
            (13, 11), (10, 12), (1, 9), (1, 11), (10, 9), (13, 12),
        ],
    )
}

/// The connected, clean, odd, non-2-splittable, non-Hamiltonian 2-dd with
/// six alternating cycles obtained by splicing [`ga`] and [`gb`] with
/// identity splicing permutations.
pub fn g5() -> Digraph {
    build(
        18,
        &[
            // red
            (7, 8), (0, 15), (2, 13), (7, 15), (2, 8), (0, 13),
            // teal
            (15, 9), (10, 2), (16, 3), (15, 2), (16, 9), (10, 3),
            // brown
            (4, 16), (3, 14), (6, 5), (6, 14), (4, 5), (3, 16),
            // cyan
            (8, 6), (5, 7), (1, 17), (1, 6), (5, 17), (8, 7),
            // blue
            (14, 4), (11, 0), (13, 12), (11, 4), (14, 12), (13, 0),
            // black
            (17, 1), (12, 10), (9, 11), (17, 11), (12, 1), (9, 10),
        ],
    )
}

/// A single clean alternating cycle with 2k arcs in isolation: k entries,
/// k exits, no saturated vertices. Its open routes under the default
/// labeling are the identity and one k-cycle.
pub fn clean_ac(k: usize) -> Digraph {
    assert!(k >= 2);
    let mut arcs = Vec::with_capacity(2 * k);
    for i in 0..k {
        arcs.push((i, k + i)); // forward
        arcs.push(((i + 1) % k, k + i)); // backward
    }
    build(2 * k, &arcs)
}
