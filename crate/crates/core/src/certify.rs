//! Non-Hamiltonicity certification and AC-count reduction. Every verdict is
//! backed by a machine-checkable step trace; [`verify_certificate`] replays
//! the trace against the graph using only recorded data.

use serde::{Deserialize, Serialize};

use crate::digraph::{spliced_graph, AltCycle, Digraph, InducedSubgraph, Labeling, SpliceMap, VertexId};
use crate::error::{Error, Result};
use crate::factors::{
    classify_parity_family, is_hamiltonian, open_routes_with, ParityFamily, RouteSet,
};
use crate::fixtures;
use crate::io::GraphJson;
use crate::perm::Perm;
use crate::permset::{classify_parity_case, find_biconjugacy, CaseClass, PermSet};

/// Resource bounds for the certification pipeline.
#[derive(Clone, Copy, Debug)]
pub struct Caps {
    /// Factor scans refuse graphs with more alternating cycles than this.
    pub max_factor_bits: u32,
    /// Exhaustive AC-subset residue scans refuse graphs with more cycles than
    /// this; beyond it only 2- and 3-cycle subsets are tried.
    pub max_subset_acs: usize,
}

impl Default for Caps {
    fn default() -> Caps {
        Caps {
            max_factor_bits: crate::factors::DEFAULT_FACTOR_CAP,
            max_subset_acs: 12,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    NonHamiltonian,
    Hamiltonian,
    Undecided,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SplitComponent {
    /// Original vertex ids (1-based) covered by the component.
    pub vertices: Vec<usize>,
    pub parity: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub nested: Option<Box<Certificate>>,
}

/// One certification or reduction step. Permutations are recorded in cycle
/// notation; vertices and AC indices refer to the graph the step was applied
/// to (reduction steps change that graph for the steps after them).
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum Step {
    Disconnected {
        components: usize,
    },
    ClosedAc {
        ac: usize,
    },
    EvenFamily,
    Split {
        split_set: Vec<usize>,
        components: Vec<SplitComponent>,
    },
    Residue {
        ac_subset: Vec<usize>,
        degree: usize,
        case: String,
        x: String,
        y: String,
        routes_p: Vec<String>,
        routes_q: Vec<String>,
        residue_p: Vec<String>,
    },
    Replace {
        ac_subset: Vec<usize>,
        replacement: GraphJson,
        a: String,
        b: String,
        degree: usize,
    },
    Collapse {
        ac_subset: Vec<usize>,
        route: String,
        degree: usize,
    },
    BruteForce {
        factor_count: u64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        witness: Option<u64>,
    },
    Undecided {
        reason: String,
    },
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Certificate {
    pub verdict: Verdict,
    pub steps: Vec<Step>,
}

/// An even 2-dd has no index-1 factor, hence no Hamiltonian circuit.
pub fn certify_even(g: &Digraph, caps: &Caps) -> Result<Option<Certificate>> {
    if classify_parity_family(g, caps.max_factor_bits)? == ParityFamily::Even {
        Ok(Some(Certificate {
            verdict: Verdict::NonHamiltonian,
            steps: vec![Step::EvenFamily],
        }))
    } else {
        Ok(None)
    }
}

struct SplitPieces {
    /// Per component: (original vertex ids 1-based, spliced 2-dd).
    components: Vec<(Vec<usize>, Digraph)>,
}

/// Splits a minimal split-set of a 2-dd and splices each component's unique
/// boundary pair back into a saturated vertex.
fn split_components(g: &Digraph, split_set: &[VertexId]) -> Result<Option<SplitPieces>> {
    let outcome = g.split(split_set)?;
    let ids = outcome.graph.component_ids();
    let count = ids.iter().max().map_or(0, |m| m + 1);
    if count < 2 {
        return Ok(None);
    }
    let classes = outcome.graph.classify_vertices()?;
    let mut components = Vec::new();
    for c in 0..count {
        let vertices: Vec<VertexId> = (0..outcome.graph.vertex_count())
            .filter(|&v| ids[v] == c)
            .collect();
        let entries: Vec<VertexId> = classes
            .entries
            .iter()
            .copied()
            .filter(|&v| ids[v] == c)
            .collect();
        let exits: Vec<VertexId> = classes
            .exits
            .iter()
            .copied()
            .filter(|&v| ids[v] == c)
            .collect();
        if entries.len() != 1 || exits.len() != 1 {
            // Not the one-entry-one-exit shape the splice argument needs.
            return Ok(None);
        }
        let index_of = |v: VertexId| vertices.binary_search(&v).unwrap();
        let arcs = outcome
            .graph
            .arcs()
            .iter()
            .filter(|a| ids[a.from] == c)
            .map(|a| (index_of(a.from), index_of(a.to)))
            .collect();
        let sub = Digraph::new(vertices.len(), arcs)?;
        let spliced = sub
            .splice_pair(index_of(entries[0]), index_of(exits[0]))?
            .graph;
        // Map split copies back to the original vertex numbering.
        let mut originals: Vec<usize> = vertices
            .iter()
            .map(|&v| {
                if v < g.vertex_count() {
                    v + 1
                } else {
                    outcome.table[v - g.vertex_count()].0 + 1
                }
            })
            .collect();
        originals.sort_unstable();
        originals.dedup();
        components.push((originals, spliced));
    }
    Ok(Some(SplitPieces { components }))
}

fn parity_name(p: ParityFamily) -> String {
    match p {
        ParityFamily::Odd => "odd".into(),
        ParityFamily::Even => "even".into(),
        ParityFamily::Neither => "neither".into(),
    }
}

/// Searches minimal split-sets of size at most two; if splicing the split
/// components leaves an even piece (possibly after recursive splitting), the
/// graph is non-Hamiltonian.
pub fn certify_split(g: &Digraph, caps: &Caps) -> Result<Option<Certificate>> {
    g.ensure_valid()?;
    if !g.is_saturated() {
        return Err(Error::Unsaturated);
    }
    if !g.is_connected() {
        return Ok(None);
    }
    for split_set in g.find_split_sets(2)? {
        let Some(pieces) = split_components(g, &split_set)? else {
            continue;
        };
        let mut recorded = Vec::new();
        let mut decided = false;
        for (vertices, spliced) in &pieces.components {
            let parity = classify_parity_family(spliced, caps.max_factor_bits)?;
            let nested = if parity == ParityFamily::Even {
                decided = true;
                None
            } else {
                let deeper = certify_split(spliced, caps)?;
                if deeper.is_some() {
                    decided = true;
                }
                deeper.map(Box::new)
            };
            recorded.push(SplitComponent {
                vertices: vertices.clone(),
                parity: parity_name(parity),
                nested,
            });
        }
        if decided {
            return Ok(Some(Certificate {
                verdict: Verdict::NonHamiltonian,
                steps: vec![Step::Split {
                    split_set: split_set.iter().map(|v| v + 1).collect(),
                    components: recorded,
                }],
            }));
        }
    }
    Ok(None)
}

/// A boundary between an AC subset and its complement, labelled by ascending
/// parent vertex id so both splicing permutations are the identity.
struct BoundarySides {
    k_side: InducedSubgraph,
    c_side: InducedSubgraph,
    degree: usize,
}

fn boundary_sides(g: &Digraph, acs: &[AltCycle], chosen: &[usize]) -> Result<BoundarySides> {
    let complement: Vec<usize> = (0..acs.len()).filter(|i| !chosen.contains(i)).collect();
    if complement.is_empty() {
        return Err(Error::Precondition("AC subset must be proper".into()));
    }
    let k_side = g.induced_by_acs(acs, chosen)?;
    let c_side = g.induced_by_acs(acs, &complement)?;
    let k_classes = k_side.graph.classify_vertices()?;
    let c_classes = c_side.graph.classify_vertices()?;
    let to_parent = |sub: &InducedSubgraph, ids: &[VertexId]| -> Vec<VertexId> {
        ids.iter().map(|&v| sub.vertex_parent[v]).collect()
    };
    let k_exits = to_parent(&k_side, &k_classes.exits);
    let c_entries = to_parent(&c_side, &c_classes.entries);
    if k_exits != c_entries {
        return Err(Error::Precondition(
            "subset boundary does not match its complement".into(),
        ));
    }
    let k_entries = to_parent(&k_side, &k_classes.entries);
    let c_exits = to_parent(&c_side, &c_classes.exits);
    if k_entries != c_exits {
        return Err(Error::Precondition(
            "subset boundary does not match its complement".into(),
        ));
    }
    Ok(BoundarySides {
        degree: k_exits.len(),
        k_side,
        c_side,
    })
}

fn side_routes(side: &InducedSubgraph, cap: u32) -> Result<RouteSet> {
    let classes = side.graph.classify_vertices()?;
    open_routes_with(
        &side.graph,
        Labeling {
            entries: classes.entries,
            exits: classes.exits,
        },
        cap,
    )
}

/// Outcome of a residue-containment attempt at one AC-subset boundary.
#[derive(Debug)]
pub enum ResidueCheck {
    Proved(Certificate),
    /// The biconjugate route set is not contained in the residue; by the
    /// containment theorem the graph has a Hamiltonian circuit through this
    /// boundary.
    NotContained,
    /// The boundary does not satisfy the theorem's hypotheses.
    Inapplicable(String),
}

/// Tries to certify non-Hamiltonicity across the boundary of an AC subset:
/// both sides must be connected and open; the splicing permutations are the
/// identity under the shared-vertex labeling.
pub fn certify_residue(g: &Digraph, chosen: &[usize], caps: &Caps) -> Result<ResidueCheck> {
    let acs = g.ac_decompose()?;
    let mut chosen: Vec<usize> = chosen.to_vec();
    chosen.sort_unstable();
    chosen.dedup();
    if chosen.is_empty() || chosen.iter().any(|&i| i >= acs.len()) {
        return Err(Error::Precondition("bad AC subset".into()));
    }
    let sides = match boundary_sides(g, &acs, &chosen) {
        Ok(s) => s,
        Err(Error::Precondition(msg)) => return Ok(ResidueCheck::Inapplicable(msg)),
        Err(e) => return Err(e),
    };
    if sides.degree == 0 {
        return Ok(ResidueCheck::Inapplicable("empty boundary".into()));
    }
    if !sides.k_side.graph.is_connected() || !sides.c_side.graph.is_connected() {
        return Ok(ResidueCheck::Inapplicable("disconnected side".into()));
    }
    let p = match side_routes(&sides.k_side, caps.max_factor_bits) {
        Ok(r) => r,
        Err(Error::ClosedGraph) => return Ok(ResidueCheck::Inapplicable("closed side".into())),
        Err(e) => return Err(e),
    };
    let q = match side_routes(&sides.c_side, caps.max_factor_bits) {
        Ok(r) => r,
        Err(Error::ClosedGraph) => return Ok(ResidueCheck::Inapplicable("closed side".into())),
        Err(e) => return Err(e),
    };
    let id = Perm::identity(sides.degree);
    let case = match classify_parity_case(&p.routes, &q.routes, &id, &id) {
        Ok(c) => c,
        Err(Error::NotUniform) => {
            return Ok(ResidueCheck::Inapplicable("non-uniform routes".into()))
        }
        Err(e) => return Err(e),
    };
    let fmt_set = |s: &PermSet| s.iter().map(|x| x.to_string()).collect::<Vec<_>>();
    let step = |case_name: &str, residue_p: &PermSet| Step::Residue {
        ac_subset: chosen.clone(),
        degree: sides.degree,
        case: case_name.into(),
        x: id.to_string(),
        y: id.to_string(),
        routes_p: fmt_set(&p.routes),
        routes_q: fmt_set(&q.routes),
        residue_p: fmt_set(residue_p),
    };
    if case.class == CaseClass::Boring {
        // Products of routes across this boundary all have even size, so no
        // factor crossing it is a single cycle.
        let residue = p.routes.residue()?;
        return Ok(ResidueCheck::Proved(Certificate {
            verdict: Verdict::NonHamiltonian,
            steps: vec![step("boring", &residue)],
        }));
    }
    let residue = p.routes.residue()?;
    if q.routes.is_subset_of(&residue) {
        Ok(ResidueCheck::Proved(Certificate {
            verdict: Verdict::NonHamiltonian,
            steps: vec![step("interesting", &residue)],
        }))
    } else {
        Ok(ResidueCheck::NotContained)
    }
}

/// Replaces the subgraph induced by `chosen` with `repl`, given a witness
/// that the residues are biconjugate: R_sub = a R_repl b. The complement is
/// untouched and the splicing maps absorb the witness permutations, so the
/// result is H-equivalent.
pub fn replace_subgraph(
    g: &Digraph,
    chosen: &[usize],
    repl: &Digraph,
    a: &Perm,
    b: &Perm,
    caps: &Caps,
) -> Result<Digraph> {
    let acs = g.ac_decompose()?;
    let sides = boundary_sides(g, &acs, &{
        let mut c = chosen.to_vec();
        c.sort_unstable();
        c.dedup();
        c
    })?;
    let sub_routes = side_routes(&sides.k_side, caps.max_factor_bits)?;
    let repl_routes = crate::factors::open_routes(repl, caps.max_factor_bits)?;
    let r_sub = sub_routes.routes.residue()?;
    let r_repl = repl_routes.routes.residue()?;
    if r_sub != PermSet::translate(a, &r_repl, b)? {
        return Err(Error::Precondition(
            "replacement residue is not biconjugate through the witness".into(),
        ));
    }
    // The witness must also keep the boundary parity case intact. Nonempty
    // residues force this (their parity class pins the witness parity); for
    // empty residues any pair is a biconjugacy witness, so it is a real
    // constraint.
    let aligned = (sub_routes.routes.parity()? ^ repl_routes.routes.parity()?)
        == (a.parity() ^ b.parity());
    if !aligned {
        return Err(Error::Precondition(
            "witness parity flips the boundary parity case".into(),
        ));
    }
    let map = SpliceMap::new(&sides.c_side.graph, repl, b.inverse(), a.inverse())?;
    let out = spliced_graph(&sides.c_side.graph, repl, &map)?;
    out.ensure_valid()?;
    Ok(out)
}

/// Removes the chosen ACs, whose subgraph must have a unique open route, and
/// re-splices the complement boundary through that route.
pub fn collapse_unique_route(g: &Digraph, chosen: &[usize], caps: &Caps) -> Result<Digraph> {
    let acs = g.ac_decompose()?;
    let sides = boundary_sides(g, &acs, &{
        let mut c = chosen.to_vec();
        c.sort_unstable();
        c.dedup();
        c
    })?;
    let routes = side_routes(&sides.k_side, caps.max_factor_bits)?;
    if routes.routes.len() != 1 {
        return Err(Error::Precondition(format!(
            "collapse needs a unique open route, found {}",
            routes.routes.len()
        )));
    }
    let route = routes.routes.iter().next().unwrap().clone();
    let c_classes = sides.c_side.graph.classify_vertices()?;
    // Complement exit j continues at complement entry route(j).
    let pairs: Vec<(VertexId, VertexId)> = (0..sides.degree)
        .map(|j| (c_classes.exits[j], c_classes.entries[route.apply(j)]))
        .collect();
    let (out, _) = sides.c_side.graph.splice_many(&pairs)?;
    out.ensure_valid()?;
    Ok(out)
}

/// A reduction outcome: the H-equivalent smaller graph and the recorded step.
#[derive(Clone, Debug)]
pub struct Reduction {
    pub graph: Digraph,
    pub step: Step,
}

fn reduction_hypotheses(g: &Digraph, caps: &Caps) -> Result<bool> {
    Ok(g.is_saturated()
        && g.is_connected()
        && g.graph_is_clean()?
        && !g.is_2_splittable()?
        && classify_parity_family(g, caps.max_factor_bits)? == ParityFamily::Odd)
}

fn subset_saturated_count(side: &InducedSubgraph) -> Result<usize> {
    Ok(side.graph.classify_vertices()?.saturated.len())
}

fn try_collapse(g: &Digraph, chosen: &[usize], routes: &RouteSet, caps: &Caps) -> Result<Reduction> {
    let route = routes.routes.iter().next().unwrap();
    let graph = collapse_unique_route(g, chosen, caps)?;
    Ok(Reduction {
        graph,
        step: Step::Collapse {
            ac_subset: chosen.to_vec(),
            route: route.to_string(),
            degree: route.degree(),
        },
    })
}

fn try_replace(
    g: &Digraph,
    chosen: &[usize],
    routes: &RouteSet,
    repl: &Digraph,
    caps: &Caps,
) -> Result<Option<Reduction>> {
    let r_sub = routes.routes.residue()?;
    let repl_routes = crate::factors::open_routes(repl, caps.max_factor_bits)?;
    let r_repl = repl_routes.routes.residue()?;
    let Some((a, mut b)) = find_biconjugacy(&r_sub, &r_repl)? else {
        return Ok(None);
    };
    let needed = routes.routes.parity()? ^ repl_routes.routes.parity()?;
    if a.parity() ^ b.parity() != needed {
        if !r_sub.is_empty() {
            // Impossible for nonempty residues; bail out defensively.
            return Ok(None);
        }
        // Empty residues accept any witness: swap two symbols in b to fix
        // the parity of the boundary case.
        let n = b.degree();
        let mut images: Vec<usize> = b.images().collect();
        images.swap(0, 1.min(n - 1));
        b = Perm::from_images(&images)?;
    }
    let graph = replace_subgraph(g, chosen, repl, &a, &b, caps)?;
    let acs = repl.ac_decompose()?;
    Ok(Some(Reduction {
        graph,
        step: Step::Replace {
            ac_subset: chosen.to_vec(),
            replacement: GraphJson::from_graph(repl, Some(&acs)),
            a: a.to_string(),
            b: b.to_string(),
            degree: a.degree(),
        },
    }))
}

/// Route set of a subset side if it is connected and open; None otherwise.
fn usable_routes(g: &Digraph, acs: &[AltCycle], chosen: &[usize], caps: &Caps) -> Result<Option<(InducedSubgraph, RouteSet)>> {
    let sides = match boundary_sides(g, acs, chosen) {
        Ok(s) => s,
        Err(Error::Precondition(_)) => return Ok(None),
        Err(e) => return Err(e),
    };
    if sides.degree == 0 || !sides.k_side.graph.is_connected() || !sides.c_side.graph.is_connected()
    {
        return Ok(None);
    }
    match side_routes(&sides.k_side, caps.max_factor_bits) {
        Ok(r) => Ok(Some((sides.k_side, r))),
        Err(Error::ClosedGraph) => Ok(None),
        Err(e) => Err(e),
    }
}

/// Reduction through 2-AC subgraphs with more than two saturated vertices:
/// collapse on a unique route (s = 4) or replacement by a single clean AC
/// when the residue is empty (s = 3).
pub fn reduce_2ac(g: &Digraph, caps: &Caps) -> Result<Option<Reduction>> {
    if !reduction_hypotheses(g, caps)? {
        return Ok(None);
    }
    let acs = g.ac_decompose()?;
    let m = acs.len();
    for i in 0..m {
        for j in i + 1..m {
            let chosen = [i, j];
            let Some((k_side, routes)) = usable_routes(g, &acs, &chosen, caps)? else {
                continue;
            };
            let s = subset_saturated_count(&k_side)?;
            if s == 4 && routes.routes.len() == 1 {
                return Ok(Some(try_collapse(g, &chosen, &routes, caps)?));
            }
            if s == 3 && routes.routes.residue()?.is_empty() {
                let template = fixtures::clean_ac(3);
                if let Some(red) = try_replace(g, &chosen, &routes, &template, caps)? {
                    return Ok(Some(red));
                }
            }
        }
    }
    Ok(None)
}

/// Reduction through 3-AC subgraphs with more than four saturated vertices:
/// collapse on a unique route, replacement by a single clean AC on an empty
/// residue (s = 6), or replacement by a two-AC reference graph (s = 5, where
/// the residue has at most one element).
pub fn reduce_3ac(g: &Digraph, caps: &Caps) -> Result<Option<Reduction>> {
    if !reduction_hypotheses(g, caps)? {
        return Ok(None);
    }
    let acs = g.ac_decompose()?;
    let m = acs.len();
    for i in 0..m {
        for j in i + 1..m {
            for l in j + 1..m {
                let chosen = [i, j, l];
                let Some((k_side, routes)) = usable_routes(g, &acs, &chosen, caps)? else {
                    continue;
                };
                let s = subset_saturated_count(&k_side)?;
                if s < 5 {
                    continue;
                }
                if routes.routes.len() == 1 {
                    return Ok(Some(try_collapse(g, &chosen, &routes, caps)?));
                }
                if s == 6 && routes.routes.residue()?.is_empty() {
                    let template = fixtures::clean_ac(3);
                    if let Some(red) = try_replace(g, &chosen, &routes, &template, caps)? {
                        return Ok(Some(red));
                    }
                }
                if s == 5 {
                    let residue = routes.routes.residue()?;
                    let repl = match residue.len() {
                        0 => fixtures::g4(),
                        1 => fixtures::g1(),
                        _ => continue,
                    };
                    if let Some(red) = try_replace(g, &chosen, &routes, &repl, caps)? {
                        return Ok(Some(red));
                    }
                }
            }
        }
    }
    Ok(None)
}

/// Cheap certificates: connectivity, closed cycles, even family, split.
fn cheap_certificates(g: &Digraph, caps: &Caps) -> Result<Option<Certificate>> {
    if !g.is_connected() {
        return Ok(Some(Certificate {
            verdict: Verdict::NonHamiltonian,
            steps: vec![Step::Disconnected {
                components: g.components(),
            }],
        }));
    }
    let acs = g.ac_decompose()?;
    if acs.len() >= 2 {
        if let Some(pos) = acs.iter().position(|c| g.ac_is_closed(c)) {
            return Ok(Some(Certificate {
                verdict: Verdict::NonHamiltonian,
                steps: vec![Step::ClosedAc { ac: pos }],
            }));
        }
    }
    if let Some(cert) = certify_even(g, caps)? {
        return Ok(Some(cert));
    }
    if let Some(cert) = certify_split(g, caps)? {
        return Ok(Some(cert));
    }
    Ok(None)
}

/// Proper nonempty AC subsets containing cycle 0, by size then
/// lexicographically. Restricting to subsets through cycle 0 visits each
/// complementary pair once; the containment test is symmetric in the pair.
fn subset_scan_order(m: usize) -> Vec<Vec<usize>> {
    let mut out: Vec<Vec<usize>> = Vec::new();
    let rest: Vec<usize> = (1..m).collect();
    for size in 0..m - 1 {
        let mut stack: Vec<(Vec<usize>, usize)> = vec![(Vec::new(), 0)];
        while let Some((current, from)) = stack.pop() {
            if current.len() == size {
                let mut subset = vec![0];
                subset.extend(&current);
                out.push(subset);
                continue;
            }
            // Depth-first in reverse so pops come out in lexicographic order.
            for idx in (from..rest.len()).rev() {
                let mut next = current.clone();
                next.push(rest[idx]);
                stack.push((next, idx + 1));
            }
        }
    }
    out
}

/// Full certification pipeline: cheap certificates, reduction to fixpoint,
/// residue scan over AC-subset boundaries, brute-force fallback.
pub fn check(g: &Digraph, caps: &Caps) -> Result<Certificate> {
    g.ensure_valid()?;
    if !g.is_saturated() {
        return Err(Error::Unsaturated);
    }
    let mut steps: Vec<Step> = Vec::new();
    let mut current = g.clone();
    let finish = |mut steps: Vec<Step>, cert: Certificate| -> Certificate {
        steps.extend(cert.steps);
        Certificate {
            verdict: cert.verdict,
            steps,
        }
    };
    if let Some(cert) = cheap_certificates(&current, caps)? {
        return Ok(finish(steps, cert));
    }
    loop {
        let reduction = match reduce_2ac(&current, caps)? {
            Some(r) => Some(r),
            None => reduce_3ac(&current, caps)?,
        };
        let Some(red) = reduction else { break };
        steps.push(red.step);
        current = red.graph;
        if let Some(cert) = cheap_certificates(&current, caps)? {
            return Ok(finish(steps, cert));
        }
    }
    let acs = current.ac_decompose()?;
    let m = acs.len();
    let subsets: Vec<Vec<usize>> = if m <= caps.max_subset_acs {
        subset_scan_order(m)
    } else {
        // Heuristic fallback: small contiguous subsets only.
        let mut out = Vec::new();
        for size in [2usize, 3] {
            for start in 0..m.saturating_sub(size - 1) {
                out.push((start..start + size).collect());
            }
        }
        out
    };
    for subset in subsets {
        if subset.is_empty() || subset.len() >= m {
            continue;
        }
        if let ResidueCheck::Proved(cert) = certify_residue(&current, &subset, caps)? {
            return Ok(finish(steps, cert));
        }
    }
    let ac_count = current.ac_decompose()?.len();
    if ac_count as u32 > caps.max_factor_bits {
        steps.push(Step::Undecided {
            reason: format!(
                "{ac_count} alternating cycles exceed the factor cap of {}",
                caps.max_factor_bits
            ),
        });
        return Ok(Certificate {
            verdict: Verdict::Undecided,
            steps,
        });
    }
    let factor_count = 1u64 << ac_count;
    let witness = find_hamiltonian_witness(&current, caps)?;
    match witness {
        Some(sel) => {
            steps.push(Step::BruteForce {
                factor_count,
                witness: Some(sel),
            });
            Ok(Certificate {
                verdict: Verdict::Hamiltonian,
                steps,
            })
        }
        None => {
            steps.push(Step::BruteForce {
                factor_count,
                witness: None,
            });
            Ok(Certificate {
                verdict: Verdict::NonHamiltonian,
                steps,
            })
        }
    }
}

/// Smallest selection word whose factor is a single spanning cycle.
fn find_hamiltonian_witness(g: &Digraph, caps: &Caps) -> Result<Option<u64>> {
    let acs = g.ac_decompose()?;
    if acs.len() as u32 > caps.max_factor_bits {
        return Err(Error::CapExceeded("factor scan".into()));
    }
    for f in crate::factors::enumerate_factors(g, &acs, caps.max_factor_bits)? {
        if f.index() == 1 && f.paths.is_empty() {
            return Ok(Some(f.selection));
        }
    }
    Ok(None)
}

fn replay_error(msg: impl Into<String>) -> Error {
    Error::BadCertificate(msg.into())
}

fn parse_set(texts: &[String], n: usize) -> Result<PermSet> {
    PermSet::new(
        n,
        texts
            .iter()
            .map(|t| Perm::parse(t, n))
            .collect::<Result<Vec<_>>>()?,
    )
}

/// Replays a certificate against a graph, re-deriving every claim from the
/// recorded data. Returns an error describing the first step that fails.
pub fn verify_certificate(g: &Digraph, cert: &Certificate) -> Result<()> {
    let caps = Caps::default();
    let mut current = g.clone();
    let mut terminal: Option<Verdict> = None;
    for (idx, step) in cert.steps.iter().enumerate() {
        if terminal.is_some() {
            return Err(replay_error(format!("step {idx} after a terminal step")));
        }
        match step {
            Step::Disconnected { components } => {
                if current.components() != *components || *components < 2 {
                    return Err(replay_error("disconnected step does not match the graph"));
                }
                terminal = Some(Verdict::NonHamiltonian);
            }
            Step::ClosedAc { ac } => {
                let acs = current.ac_decompose()?;
                if acs.len() < 2 || *ac >= acs.len() || !current.ac_is_closed(&acs[*ac]) {
                    return Err(replay_error("closed-AC step does not match the graph"));
                }
                terminal = Some(Verdict::NonHamiltonian);
            }
            Step::EvenFamily => {
                if classify_parity_family(&current, caps.max_factor_bits)? != ParityFamily::Even {
                    return Err(replay_error("graph is not an even family"));
                }
                terminal = Some(Verdict::NonHamiltonian);
            }
            Step::Split {
                split_set,
                components,
            } => {
                let set: Vec<usize> = split_set
                    .iter()
                    .map(|v| v.checked_sub(1).ok_or_else(|| replay_error("bad vertex id")))
                    .collect::<Result<_>>()?;
                let Some(pieces) = split_components(&current, &set)? else {
                    return Err(replay_error("recorded split set does not split"));
                };
                if pieces.components.len() != components.len() {
                    return Err(replay_error("split component count mismatch"));
                }
                let mut decided = false;
                for ((vertices, spliced), recorded) in
                    pieces.components.iter().zip(components)
                {
                    if vertices != &recorded.vertices {
                        return Err(replay_error("split component vertices mismatch"));
                    }
                    let parity = classify_parity_family(spliced, caps.max_factor_bits)?;
                    if parity_name(parity) != recorded.parity {
                        return Err(replay_error("split component parity mismatch"));
                    }
                    if parity == ParityFamily::Even {
                        decided = true;
                    } else if let Some(nested) = &recorded.nested {
                        if nested.verdict == Verdict::NonHamiltonian {
                            verify_certificate(spliced, nested)?;
                            decided = true;
                        }
                    }
                }
                if !decided {
                    return Err(replay_error("split step decides nothing"));
                }
                terminal = Some(Verdict::NonHamiltonian);
            }
            Step::Residue {
                ac_subset,
                degree,
                case,
                x,
                y,
                routes_p,
                routes_q,
                residue_p,
            } => {
                let n = *degree;
                let x = Perm::parse(x, n)?;
                let y = Perm::parse(y, n)?;
                if !x.is_identity() || !y.is_identity() {
                    return Err(replay_error("boundary splicing permutations must be I"));
                }
                let acs = current.ac_decompose()?;
                let sides = boundary_sides(&current, &acs, ac_subset)
                    .map_err(|_| replay_error("recorded AC subset has no valid boundary"))?;
                if sides.degree != n {
                    return Err(replay_error("recorded boundary degree mismatch"));
                }
                let p = side_routes(&sides.k_side, caps.max_factor_bits)?;
                let q = side_routes(&sides.c_side, caps.max_factor_bits)?;
                if p.routes != parse_set(routes_p, n)? || q.routes != parse_set(routes_q, n)? {
                    return Err(replay_error("recorded route sets mismatch"));
                }
                let parity_case = classify_parity_case(&p.routes, &q.routes, &x, &y)?;
                match case.as_str() {
                    "boring" => {
                        if parity_case.class != CaseClass::Boring {
                            return Err(replay_error("case is not boring"));
                        }
                    }
                    "interesting" => {
                        if parity_case.class != CaseClass::Interesting {
                            return Err(replay_error("case is not interesting"));
                        }
                        let residue = p.routes.residue()?;
                        if residue != parse_set(residue_p, n)? {
                            return Err(replay_error("recorded residue mismatch"));
                        }
                        if !q.routes.is_subset_of(&residue) {
                            return Err(replay_error("routes are not contained in the residue"));
                        }
                    }
                    other => return Err(replay_error(format!("unknown case {other:?}"))),
                }
                terminal = Some(Verdict::NonHamiltonian);
            }
            Step::Replace {
                ac_subset,
                replacement,
                a,
                b,
                degree,
            } => {
                let repl = replacement.to_graph()?;
                let a = Perm::parse(a, *degree)?;
                let b = Perm::parse(b, *degree)?;
                current = replace_subgraph(&current, ac_subset, &repl, &a, &b, &caps)?;
            }
            Step::Collapse {
                ac_subset,
                route,
                degree,
            } => {
                let acs = current.ac_decompose()?;
                let Some((_, routes)) = usable_routes(&current, &acs, ac_subset, &caps)? else {
                    return Err(replay_error("collapse subset is not usable"));
                };
                if routes.routes.len() != 1 {
                    return Err(replay_error("collapse route is not unique"));
                }
                let recorded = Perm::parse(route, *degree)?;
                if routes.routes.iter().next() != Some(&recorded) {
                    return Err(replay_error("recorded collapse route mismatch"));
                }
                current = collapse_unique_route(&current, ac_subset, &caps)?;
            }
            Step::BruteForce {
                factor_count,
                witness,
            } => {
                let acs = current.ac_decompose()?;
                if 1u64 << acs.len() != *factor_count {
                    return Err(replay_error("factor count mismatch"));
                }
                match witness {
                    Some(sel) => {
                        let f = crate::factors::factor_for_selection(&current, &acs, *sel)?;
                        if f.index() != 1 || !f.paths.is_empty() {
                            return Err(replay_error("witness factor is not a Hamiltonian circuit"));
                        }
                        terminal = Some(Verdict::Hamiltonian);
                    }
                    None => {
                        if is_hamiltonian(&current, caps.max_factor_bits)? {
                            return Err(replay_error("graph has a Hamiltonian factor"));
                        }
                        terminal = Some(Verdict::NonHamiltonian);
                    }
                }
            }
            Step::Undecided { .. } => {
                terminal = Some(Verdict::Undecided);
            }
        }
    }
    match terminal {
        Some(v) if v == cert.verdict => Ok(()),
        Some(_) => Err(replay_error("terminal step does not support the verdict")),
        None => Err(replay_error("certificate has no terminal step")),
    }
}
