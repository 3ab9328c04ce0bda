//! Factor enumeration by per-cycle half selection, index and openness,
//! route extraction, and the Hamiltonicity brute force. Factor scans are
//! data-parallel over selection ranges and merged deterministically.

use std::collections::BTreeSet;

use crate::digraph::{AltCycle, Digraph, Labeling, SpliceMap, VertexId};
use crate::error::{Error, Result};
use crate::par;
use crate::perm::Perm;
use crate::permset::{intersects_cyclic, PermSet};

/// Default bound on the alternating-cycle count for exhaustive factor scans
/// (2^24 factors). Operations refuse larger graphs rather than sampling.
pub const DEFAULT_FACTOR_CAP: u32 = 24;

/// One factor: a half selection over the alternating cycles together with the
/// spanning 1-digraph it induces.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factor {
    /// Bit k set means the backward half of cycle k was chosen.
    pub selection: u64,
    /// Chosen arcs, ascending.
    pub arcs: Vec<usize>,
    /// Vertex cycles, each starting at its smallest vertex, ordered by that
    /// vertex.
    pub cycles: Vec<Vec<VertexId>>,
    /// Entry-to-exit vertex paths in ascending entry order.
    pub paths: Vec<Vec<VertexId>>,
}

impl Factor {
    pub fn index(&self) -> usize {
        self.cycles.len()
    }

    pub fn is_open(&self) -> bool {
        self.cycles.is_empty()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ParityFamily {
    /// Every factor has odd index.
    Odd,
    /// Every factor has even index; such a 2-dd is trivially non-Hamiltonian.
    Even,
    Neither,
}

/// Open routes of a graph under a boundary labeling, deduplicated: distinct
/// open factors frequently induce the same route.
#[derive(Clone, Debug)]
pub struct RouteSet {
    pub labeling: Labeling,
    pub routes: PermSet,
    /// Route of the open factor with the smallest selection word; used by the
    /// identity-normalizing relabeling.
    pub first: Perm,
}

impl RouteSet {
    /// Relabels the exits so that `first` becomes the identity route.
    pub fn normalized(&self) -> RouteSet {
        let n = self.first.degree();
        let exits = (0..n)
            .map(|i| self.labeling.exits[self.first.apply(i)])
            .collect();
        let inv = self.first.inverse();
        let routes = PermSet::new(
            n,
            self.routes.iter().map(|r| r.mul(&inv)).collect(),
        )
        .expect("degrees preserved");
        RouteSet {
            labeling: Labeling {
                entries: self.labeling.entries.clone(),
                exits,
            },
            routes,
            first: Perm::identity(n),
        }
    }
}

fn check_cap(ac_count: usize, cap: u32) -> Result<u64> {
    if ac_count as u32 > cap {
        return Err(Error::CapExceeded(format!(
            "{ac_count} alternating cycles exceed the factor cap of {cap}"
        )));
    }
    Ok(1u64 << ac_count)
}

fn next_map(g: &Digraph, acs: &[AltCycle], selection: u64) -> Vec<Option<VertexId>> {
    let mut next = vec![None; g.vertex_count()];
    for (k, cycle) in acs.iter().enumerate() {
        let backward = selection >> k & 1 == 1;
        let offset = usize::from(backward);
        for id in cycle.arcs.iter().skip(offset).step_by(2) {
            let a = g.arc(*id);
            debug_assert!(next[a.from].is_none());
            next[a.from] = Some(a.to);
        }
    }
    next
}

/// Number of vertex cycles in the factor; path vertices are walked from the
/// entries first.
fn cycle_count(next: &[Option<VertexId>], entries: &[VertexId]) -> usize {
    let mut visited = vec![false; next.len()];
    for &e in entries {
        let mut v = e;
        visited[v] = true;
        while let Some(w) = next[v] {
            v = w;
            visited[v] = true;
        }
    }
    let mut cycles = 0;
    for start in 0..next.len() {
        if visited[start] || next[start].is_none() {
            continue;
        }
        cycles += 1;
        let mut v = start;
        while !visited[v] {
            visited[v] = true;
            v = next[v].expect("cycle vertices are saturated");
        }
    }
    cycles
}

/// Materializes the factor for one selection word.
pub fn factor_for_selection(g: &Digraph, acs: &[AltCycle], selection: u64) -> Result<Factor> {
    let entries = g.classify_vertices()?.entries;
    Ok(build_factor(g, acs, &entries, selection))
}

fn build_factor(g: &Digraph, acs: &[AltCycle], entries: &[VertexId], selection: u64) -> Factor {
    let next = next_map(g, acs, selection);
    let mut arcs: Vec<usize> = acs
        .iter()
        .enumerate()
        .flat_map(|(k, cycle)| {
            let backward = selection >> k & 1 == 1;
            let ids: Vec<usize> = if backward {
                cycle.backward_arcs().collect()
            } else {
                cycle.forward_arcs().collect()
            };
            ids
        })
        .collect();
    arcs.sort_unstable();
    let mut visited = vec![false; next.len()];
    let mut paths = Vec::new();
    for &e in entries {
        let mut path = vec![e];
        visited[e] = true;
        let mut v = e;
        while let Some(w) = next[v] {
            path.push(w);
            visited[w] = true;
            v = w;
        }
        paths.push(path);
    }
    let mut cycles = Vec::new();
    for start in 0..next.len() {
        if visited[start] || next[start].is_none() {
            continue;
        }
        let mut cycle = vec![start];
        visited[start] = true;
        let mut v = next[start].unwrap();
        while v != start {
            cycle.push(v);
            visited[v] = true;
            v = next[v].unwrap();
        }
        cycles.push(cycle);
    }
    Factor {
        selection,
        arcs,
        cycles,
        paths,
    }
}

/// Sequential stream over all 2^K factors in selection order.
pub struct Factors<'a> {
    g: &'a Digraph,
    acs: &'a [AltCycle],
    entries: Vec<VertexId>,
    selection: u64,
    end: u64,
}

impl Iterator for Factors<'_> {
    type Item = Factor;

    fn next(&mut self) -> Option<Factor> {
        if self.selection >= self.end {
            return None;
        }
        let f = build_factor(self.g, self.acs, &self.entries, self.selection);
        self.selection += 1;
        Some(f)
    }
}

pub fn enumerate_factors<'a>(
    g: &'a Digraph,
    acs: &'a [AltCycle],
    cap: u32,
) -> Result<Factors<'a>> {
    let end = check_cap(acs.len(), cap)?;
    let entries = g.classify_vertices()?.entries;
    Ok(Factors {
        g,
        acs,
        entries,
        selection: 0,
        end,
    })
}

/// Minimum index over all factors.
pub fn graph_index(g: &Digraph, cap: u32) -> Result<usize> {
    let acs = g.ac_decompose()?;
    let end = check_cap(acs.len(), cap)?;
    let entries = g.classify_vertices()?.entries;
    Ok(par::fold_range(
        0..end,
        || usize::MAX,
        |best, sel| best.min(cycle_count(&next_map(g, &acs, sel), &entries)),
        usize::min,
    ))
}

pub fn is_open(g: &Digraph, cap: u32) -> Result<bool> {
    Ok(graph_index(g, cap)? == 0)
}

/// Exhaustive Hamiltonicity oracle for 2-dds: true iff some factor is a
/// single spanning cycle.
pub fn is_hamiltonian(g: &Digraph, cap: u32) -> Result<bool> {
    g.ensure_valid()?;
    if !g.is_saturated() {
        return Err(Error::Unsaturated);
    }
    let acs = g.ac_decompose()?;
    let end = check_cap(acs.len(), cap)?;
    Ok(par::any_in_range(0..end, |sel| {
        cycle_count(&next_map(g, &acs, sel), &[]) == 1
    }))
}

/// Classifies a 2-dd as odd, even, or neither by exhaustive factor scan.
pub fn classify_parity_family(g: &Digraph, cap: u32) -> Result<ParityFamily> {
    g.ensure_valid()?;
    if !g.is_saturated() {
        return Err(Error::Unsaturated);
    }
    let acs = g.ac_decompose()?;
    let end = check_cap(acs.len(), cap)?;
    let (odd, even) = par::fold_range(
        0..end,
        || (false, false),
        |acc, sel| {
            let index = cycle_count(&next_map(g, &acs, sel), &[]);
            (acc.0 || !index.is_multiple_of(2), acc.1 || index.is_multiple_of(2))
        },
        |a, b| (a.0 || b.0, a.1 || b.1),
    );
    Ok(match (odd, even) {
        (true, false) => ParityFamily::Odd,
        (false, true) => ParityFamily::Even,
        _ => ParityFamily::Neither,
    })
}

fn route_of(
    next: &[Option<VertexId>],
    entries: &[VertexId],
    exit_index: &[usize],
) -> Option<Perm> {
    // None when the factor has a cycle, i.e. is not open.
    let mut visited = vec![false; next.len()];
    let mut images = vec![0usize; entries.len()];
    for (i, &e) in entries.iter().enumerate() {
        let mut v = e;
        visited[v] = true;
        while let Some(w) = next[v] {
            v = w;
            visited[v] = true;
        }
        images[i] = exit_index[v];
    }
    for v in 0..next.len() {
        if !visited[v] && next[v].is_some() {
            return None;
        }
    }
    Some(Perm::from_images(&images).expect("paths induce a bijection"))
}

/// Routes of the open factors under the graph's own labeling.
pub fn open_routes(g: &Digraph, cap: u32) -> Result<RouteSet> {
    let labeling = g.labeling()?;
    open_routes_with(g, labeling, cap)
}

/// Routes of the open factors under an explicit labeling.
pub fn open_routes_with(g: &Digraph, labeling: Labeling, cap: u32) -> Result<RouteSet> {
    let acs = g.ac_decompose()?;
    let end = check_cap(acs.len(), cap)?;
    let n = labeling.exits.len();
    if n == 0 || labeling.entries.len() != n {
        return Err(Error::Precondition(
            "route extraction needs matching nonempty entry and exit sets".into(),
        ));
    }
    let mut exit_index = vec![usize::MAX; g.vertex_count()];
    for (k, &v) in labeling.exits.iter().enumerate() {
        exit_index[v] = k;
    }
    type Acc = (BTreeSet<Perm>, Option<(u64, Perm)>);
    let (routes, first) = par::fold_range(
        0..end,
        || -> Acc { (BTreeSet::new(), None) },
        |mut acc, sel| {
            if let Some(r) = route_of(&next_map(g, &acs, sel), &labeling.entries, &exit_index) {
                if acc.1.as_ref().is_none_or(|(s, _)| sel < *s) {
                    acc.1 = Some((sel, r.clone()));
                }
                acc.0.insert(r);
            }
            acc
        },
        |mut a, b| {
            a.0.extend(b.0);
            let first = match (a.1, b.1) {
                (Some(x), Some(y)) => Some(if x.0 <= y.0 { x } else { y }),
                (x, y) => x.or(y),
            };
            (a.0, first)
        },
    );
    let Some((_, first)) = first else {
        return Err(Error::ClosedGraph);
    };
    Ok(RouteSet {
        labeling,
        routes: PermSet::new(n, routes.into_iter().collect())?,
        first,
    })
}

/// Decides Hamiltonicity of the spliced graph through the route sets of its
/// two sides: true iff some product route is cyclic.
pub fn hamiltonicity_via_routes(
    f: &Digraph,
    fp: &Digraph,
    map: &SpliceMap,
    cap: u32,
) -> Result<bool> {
    let rf = open_routes_with(
        f,
        Labeling {
            entries: map.f_entries.clone(),
            exits: map.f_exits.clone(),
        },
        cap,
    )?;
    let rfp = open_routes_with(
        fp,
        Labeling {
            entries: map.fp_entries.clone(),
            exits: map.fp_exits.clone(),
        },
        cap,
    )?;
    intersects_cyclic(&rf.routes, &map.x, &rfp.routes, &map.y)
}
