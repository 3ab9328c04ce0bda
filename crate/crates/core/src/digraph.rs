//! The 2-digraph model: vertex classification, alternating-cycle
//! decomposition, clean/closed predicates, split and splice, split-set
//! search, AC-induced subgraphs, and the two-sided splicing constructor.
//!
//! Arcs form an indexed multiset: parallel arcs are permitted and arcs carry
//! identity by index, which is what the alternating-cycle traversal relies
//! on.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::perm::Perm;

pub type VertexId = usize;
pub type ArcId = usize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Arc {
    pub from: VertexId,
    pub to: VertexId,
}

/// Entry/exit role of a labelled boundary vertex.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BoundaryRole {
    Entry,
    Exit,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Digraph {
    vertex_count: usize,
    arcs: Vec<Arc>,
    entry_labels: BTreeMap<VertexId, usize>,
    exit_labels: BTreeMap<VertexId, usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DegreeViolation {
    pub vertex: VertexId,
    pub in_degree: usize,
    pub out_degree: usize,
}

/// Outcome of the degree-condition check; reports every offending vertex.
#[derive(Clone, Debug, Default)]
pub struct ValidationReport {
    pub violations: Vec<DegreeViolation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct VertexClasses {
    pub entries: Vec<VertexId>,
    pub exits: Vec<VertexId>,
    pub saturated: Vec<VertexId>,
}

/// One alternating cycle: the arc sequence alternates shared end-vertices at
/// even joins and shared start-vertices at odd joins; even positions form the
/// forward half.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AltCycle {
    pub arcs: Vec<ArcId>,
}

impl AltCycle {
    /// Half length r; the cycle has 2r arcs.
    pub fn half_len(&self) -> usize {
        self.arcs.len() / 2
    }

    pub fn is_odd(&self) -> bool {
        self.half_len() % 2 == 1
    }

    pub fn forward_arcs(&self) -> impl Iterator<Item = ArcId> + '_ {
        self.arcs.iter().step_by(2).copied()
    }

    pub fn backward_arcs(&self) -> impl Iterator<Item = ArcId> + '_ {
        self.arcs.iter().skip(1).step_by(2).copied()
    }
}

/// Entry and exit orders defining the boundary numbering: position k holds
/// the vertex labelled k+1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Labeling {
    pub entries: Vec<VertexId>,
    pub exits: Vec<VertexId>,
}

/// Subgraph induced by a set of alternating cycles, with the parent
/// correspondence kept so boundary vertices can be matched up again.
#[derive(Clone, Debug)]
pub struct InducedSubgraph {
    pub graph: Digraph,
    /// Subgraph vertex id -> parent vertex id, ascending in the parent.
    pub vertex_parent: Vec<VertexId>,
    /// Subgraph arc id -> parent arc id, ascending.
    pub arc_parent: Vec<ArcId>,
}

#[derive(Clone, Debug)]
pub struct SplitOutcome {
    pub graph: Digraph,
    /// (original vertex, in-side id, appended out-side id) per split vertex.
    pub table: Vec<(VertexId, VertexId, VertexId)>,
}

#[derive(Clone, Debug)]
pub struct SpliceOutcome {
    pub graph: Digraph,
    /// Old vertex id -> new vertex id.
    pub vertex_map: Vec<VertexId>,
    pub merged: VertexId,
}

/// How to splice two open 2-graphs into one graph: exit `i` of the first
/// joins entry `x(i)` of the second, exit `j` of the second joins entry
/// `y(j)` of the first (labels through the stored orders).
#[derive(Clone, Debug)]
pub struct SpliceMap {
    pub f_exits: Vec<VertexId>,
    pub f_entries: Vec<VertexId>,
    pub fp_exits: Vec<VertexId>,
    pub fp_entries: Vec<VertexId>,
    pub x: Perm,
    pub y: Perm,
}

impl SpliceMap {
    pub fn new(f: &Digraph, fp: &Digraph, x: Perm, y: Perm) -> Result<SpliceMap> {
        let lf = f.labeling()?;
        let lfp = fp.labeling()?;
        let n = x.degree();
        if y.degree() != n {
            return Err(Error::DegreeMismatch(n, y.degree()));
        }
        for (what, len) in [
            ("exits of the first graph", lf.exits.len()),
            ("entries of the first graph", lf.entries.len()),
            ("exits of the second graph", lfp.exits.len()),
            ("entries of the second graph", lfp.entries.len()),
        ] {
            if len != n {
                return Err(Error::Precondition(format!(
                    "splice map degree {n} does not match {what} ({len})"
                )));
            }
        }
        Ok(SpliceMap {
            f_exits: lf.exits,
            f_entries: lf.entries,
            fp_exits: lfp.exits,
            fp_entries: lfp.entries,
            x,
            y,
        })
    }

    pub fn identity(f: &Digraph, fp: &Digraph) -> Result<SpliceMap> {
        let n = f.labeling()?.exits.len();
        if n == 0 {
            return Err(Error::Precondition("cannot splice without exits".into()));
        }
        SpliceMap::new(f, fp, Perm::identity(n), Perm::identity(n))
    }
}

impl Digraph {
    pub fn new(vertex_count: usize, arcs: Vec<(VertexId, VertexId)>) -> Result<Digraph> {
        for &(u, v) in &arcs {
            if u >= vertex_count || v >= vertex_count {
                return Err(Error::BadGraph(format!(
                    "arc ({u},{v}) out of range for {vertex_count} vertices"
                )));
            }
        }
        Ok(Digraph {
            vertex_count,
            arcs: arcs.into_iter().map(|(from, to)| Arc { from, to }).collect(),
            entry_labels: BTreeMap::new(),
            exit_labels: BTreeMap::new(),
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn arcs(&self) -> &[Arc] {
        &self.arcs
    }

    pub fn arc(&self, id: ArcId) -> Arc {
        self.arcs[id]
    }

    pub fn entry_labels(&self) -> &BTreeMap<VertexId, usize> {
        &self.entry_labels
    }

    pub fn exit_labels(&self) -> &BTreeMap<VertexId, usize> {
        &self.exit_labels
    }

    /// Binds label `k` (1-based) to a boundary vertex for route numbering.
    pub fn set_label(&mut self, vertex: VertexId, role: BoundaryRole, k: usize) -> Result<()> {
        if vertex >= self.vertex_count {
            return Err(Error::BadGraph(format!("label vertex {vertex} out of range")));
        }
        if k == 0 {
            return Err(Error::BadGraph("labels are 1-based".into()));
        }
        match role {
            BoundaryRole::Entry => self.entry_labels.insert(vertex, k),
            BoundaryRole::Exit => self.exit_labels.insert(vertex, k),
        };
        Ok(())
    }

    pub(crate) fn degrees(&self) -> (Vec<usize>, Vec<usize>) {
        let mut ins = vec![0usize; self.vertex_count];
        let mut outs = vec![0usize; self.vertex_count];
        for a in &self.arcs {
            outs[a.from] += 1;
            ins[a.to] += 1;
        }
        (ins, outs)
    }

    /// Checks the degree condition for 2-digraphs: every vertex must have
    /// (in, out) degrees (0,2), (2,0) or (2,2).
    pub fn validate(&self) -> ValidationReport {
        let (ins, outs) = self.degrees();
        let mut violations = Vec::new();
        for v in 0..self.vertex_count {
            let ok = matches!((ins[v], outs[v]), (0, 2) | (2, 0) | (2, 2));
            if !ok {
                violations.push(DegreeViolation {
                    vertex: v,
                    in_degree: ins[v],
                    out_degree: outs[v],
                });
            }
        }
        ValidationReport { violations }
    }

    pub fn ensure_valid(&self) -> Result<()> {
        let report = self.validate();
        if report.is_valid() {
            Ok(())
        } else {
            Err(Error::BadGraph(format!(
                "{} vertices violate the 2-digraph degree condition (first: vertex {})",
                report.violations.len(),
                report.violations[0].vertex + 1
            )))
        }
    }

    pub fn classify_vertices(&self) -> Result<VertexClasses> {
        self.ensure_valid()?;
        let (ins, outs) = self.degrees();
        let mut classes = VertexClasses::default();
        for v in 0..self.vertex_count {
            match (ins[v], outs[v]) {
                (0, 2) => classes.entries.push(v),
                (2, 0) => classes.exits.push(v),
                _ => classes.saturated.push(v),
            }
        }
        Ok(classes)
    }

    /// True iff every vertex is saturated (the graph is a 2-dd).
    pub fn is_saturated(&self) -> bool {
        let (ins, outs) = self.degrees();
        (0..self.vertex_count).all(|v| ins[v] == 2 && outs[v] == 2)
    }

    /// Effective boundary numbering: explicit labels when they are complete
    /// and consistent, otherwise ascending vertex id.
    pub fn labeling(&self) -> Result<Labeling> {
        let classes = self.classify_vertices()?;
        let build = |labels: &BTreeMap<VertexId, usize>, vertices: &[VertexId], role: &str| {
            if labels.is_empty() {
                return Ok(vertices.to_vec());
            }
            let n = vertices.len();
            let mut order = vec![usize::MAX; n];
            for (&v, &k) in labels {
                if !vertices.contains(&v) {
                    return Err(Error::BadGraph(format!(
                        "vertex {} labelled as {role} but is not one",
                        v + 1
                    )));
                }
                if k < 1 || k > n || order[k - 1] != usize::MAX {
                    return Err(Error::BadGraph(format!("bad or duplicate {role} label {k}")));
                }
                order[k - 1] = v;
            }
            if order.contains(&usize::MAX) {
                return Err(Error::BadGraph(format!("incomplete {role} labelling")));
            }
            Ok(order)
        };
        Ok(Labeling {
            entries: build(&self.entry_labels, &classes.entries, "entry")?,
            exits: build(&self.exit_labels, &classes.exits, "exit")?,
        })
    }

    fn arc_slots(&self) -> (Vec<Vec<ArcId>>, Vec<Vec<ArcId>>) {
        let mut ins = vec![Vec::with_capacity(2); self.vertex_count];
        let mut outs = vec![Vec::with_capacity(2); self.vertex_count];
        for (id, a) in self.arcs.iter().enumerate() {
            outs[a.from].push(id);
            ins[a.to].push(id);
        }
        (ins, outs)
    }

    /// Unique partition of the arcs into alternating cycles. Each cycle is
    /// started from its smallest unvisited arc index, which is traversed
    /// forward, so the output order is deterministic.
    pub fn ac_decompose(&self) -> Result<Vec<AltCycle>> {
        self.ensure_valid()?;
        let (ins, outs) = self.arc_slots();
        let other = |slots: &[ArcId], id: ArcId| {
            debug_assert_eq!(slots.len(), 2);
            if slots[0] == id {
                slots[1]
            } else {
                slots[0]
            }
        };
        let mut visited = vec![false; self.arcs.len()];
        let mut cycles = Vec::new();
        for start in 0..self.arcs.len() {
            if visited[start] {
                continue;
            }
            let mut seq = vec![start];
            visited[start] = true;
            loop {
                let pos = seq.len() - 1;
                let cur = seq[pos];
                let next = if pos % 2 == 0 {
                    // Forward arc: continue through the shared end-vertex.
                    other(&ins[self.arcs[cur].to], cur)
                } else {
                    // Backward arc: continue through the shared start-vertex.
                    other(&outs[self.arcs[cur].from], cur)
                };
                if next == start {
                    debug_assert!(pos % 2 == 1, "alternating cycle must close after a backward arc");
                    break;
                }
                debug_assert!(!visited[next], "arc revisited before the cycle closed");
                visited[next] = true;
                seq.push(next);
            }
            cycles.push(AltCycle { arcs: seq });
        }
        Ok(cycles)
    }

    /// A cycle is clean when its r shared end-vertices and r shared
    /// start-vertices are 2r pairwise distinct vertices.
    pub fn ac_is_clean(&self, cycle: &AltCycle) -> bool {
        let mut shared: Vec<VertexId> = Vec::with_capacity(cycle.arcs.len());
        for id in cycle.forward_arcs() {
            shared.push(self.arcs[id].to);
            shared.push(self.arcs[id].from);
        }
        shared.sort_unstable();
        shared.windows(2).all(|w| w[0] != w[1])
    }

    pub fn graph_is_clean(&self) -> Result<bool> {
        Ok(self.ac_decompose()?.iter().all(|c| self.ac_is_clean(c)))
    }

    /// A cycle is closed when, in the subgraph it induces on its own, both
    /// half-selections contain a directed cycle.
    pub fn ac_is_closed(&self, cycle: &AltCycle) -> bool {
        let has_cycle = |arc_ids: Vec<ArcId>| -> bool {
            // Kahn peel on the partial functional graph of the half.
            let mut ins: BTreeMap<VertexId, usize> = BTreeMap::new();
            let mut next: BTreeMap<VertexId, VertexId> = BTreeMap::new();
            for id in &arc_ids {
                let a = self.arcs[*id];
                next.insert(a.from, a.to);
                *ins.entry(a.to).or_insert(0) += 1;
                ins.entry(a.from).or_insert(0);
            }
            let mut queue: Vec<VertexId> = ins
                .iter()
                .filter(|&(_, &d)| d == 0)
                .map(|(&v, _)| v)
                .collect();
            let mut remaining = arc_ids.len();
            while let Some(v) = queue.pop() {
                if let Some(&w) = next.get(&v) {
                    remaining -= 1;
                    let d = ins.get_mut(&w).unwrap();
                    *d -= 1;
                    if *d == 0 {
                        queue.push(w);
                    }
                }
            }
            remaining > 0
        };
        has_cycle(cycle.forward_arcs().collect()) && has_cycle(cycle.backward_arcs().collect())
    }

    /// Connected components of the underlying undirected graph.
    pub fn components(&self) -> usize {
        let mut parent: Vec<usize> = (0..self.vertex_count).collect();
        fn find(parent: &mut [usize], mut v: usize) -> usize {
            while parent[v] != v {
                parent[v] = parent[parent[v]];
                v = parent[v];
            }
            v
        }
        for a in &self.arcs {
            let (ra, rb) = (find(&mut parent, a.from), find(&mut parent, a.to));
            if ra != rb {
                parent[ra] = rb;
            }
        }
        (0..self.vertex_count)
            .filter(|&v| find(&mut parent, v) == v)
            .count()
    }

    pub fn is_connected(&self) -> bool {
        self.vertex_count == 0 || self.components() == 1
    }

    /// Component index per vertex; components numbered by smallest member.
    pub fn component_ids(&self) -> Vec<usize> {
        let mut parent: Vec<usize> = (0..self.vertex_count).collect();
        fn find(parent: &mut [usize], mut v: usize) -> usize {
            while parent[v] != v {
                parent[v] = parent[parent[v]];
                v = parent[v];
            }
            v
        }
        for a in &self.arcs {
            let (ra, rb) = (find(&mut parent, a.from), find(&mut parent, a.to));
            if ra != rb {
                parent[ra.max(rb)] = ra.min(rb);
            }
        }
        let mut ids = vec![usize::MAX; self.vertex_count];
        let mut next = 0;
        for v in 0..self.vertex_count {
            let root = find(&mut parent, v);
            if ids[root] == usize::MAX {
                ids[root] = next;
                next += 1;
            }
            ids[v] = ids[root];
        }
        ids
    }

    /// Splices several disjoint (exit, entry) pairs at once.
    pub fn splice_many(&self, pairs: &[(VertexId, VertexId)]) -> Result<(Digraph, Vec<VertexId>)> {
        let classes = self.classify_vertices()?;
        for &(exit, entry) in pairs {
            if !classes.exits.contains(&exit) {
                return Err(Error::Precondition(format!("vertex {} is not an exit", exit + 1)));
            }
            if !classes.entries.contains(&entry) {
                return Err(Error::Precondition(format!(
                    "vertex {} is not an entry",
                    entry + 1
                )));
            }
        }
        self.merge_pairs(pairs)
    }

    /// Splits each saturated vertex of `split_set` into an in-side (keeps the
    /// original id) and an out-side appended in operation order.
    pub fn split(&self, split_set: &[VertexId]) -> Result<SplitOutcome> {
        self.ensure_valid()?;
        let classes = self.classify_vertices()?;
        let mut set: Vec<VertexId> = split_set.to_vec();
        set.sort_unstable();
        set.dedup();
        for &v in &set {
            if !classes.saturated.contains(&v) {
                return Err(Error::Precondition(format!(
                    "vertex {} is not saturated, cannot split",
                    v + 1
                )));
            }
        }
        let mut out_side: BTreeMap<VertexId, VertexId> = BTreeMap::new();
        let mut table = Vec::new();
        for (k, &v) in set.iter().enumerate() {
            let fresh = self.vertex_count + k;
            out_side.insert(v, fresh);
            table.push((v, v, fresh));
        }
        let arcs = self
            .arcs
            .iter()
            .map(|a| {
                let from = out_side.get(&a.from).copied().unwrap_or(a.from);
                (from, a.to)
            })
            .collect();
        let graph = Digraph::new(self.vertex_count + set.len(), arcs)?;
        Ok(SplitOutcome { graph, table })
    }

    /// Merges disjoint (exit, entry) pairs into fresh saturated vertices.
    /// Surviving vertices are compacted in ascending order; merged vertices
    /// are appended in pair order.
    fn merge_pairs(&self, pairs: &[(VertexId, VertexId)]) -> Result<(Digraph, Vec<VertexId>)> {
        let mut target = vec![usize::MAX; self.vertex_count];
        for (k, &(a, b)) in pairs.iter().enumerate() {
            for v in [a, b] {
                if v >= self.vertex_count {
                    return Err(Error::BadGraph(format!("merge vertex {v} out of range")));
                }
                if target[v] != usize::MAX {
                    return Err(Error::Precondition(format!(
                        "vertex {} appears in two splice pairs",
                        v + 1
                    )));
                }
                target[v] = k;
            }
        }
        let survivors = self.vertex_count - 2 * pairs.len();
        let mut map = vec![usize::MAX; self.vertex_count];
        let mut next = 0;
        for v in 0..self.vertex_count {
            if target[v] == usize::MAX {
                map[v] = next;
                next += 1;
            } else {
                map[v] = survivors + target[v];
            }
        }
        debug_assert_eq!(next, survivors);
        let arcs = self.arcs.iter().map(|a| (map[a.from], map[a.to])).collect();
        Ok((Digraph::new(survivors + pairs.len(), arcs)?, map))
    }

    /// Identifies an entry vertex with an exit vertex into a new saturated
    /// vertex: the inverse of splitting.
    pub fn splice_pair(&self, entry: VertexId, exit: VertexId) -> Result<SpliceOutcome> {
        let classes = self.classify_vertices()?;
        if !classes.entries.contains(&entry) {
            return Err(Error::Precondition(format!("vertex {} is not an entry", entry + 1)));
        }
        if !classes.exits.contains(&exit) {
            return Err(Error::Precondition(format!("vertex {} is not an exit", exit + 1)));
        }
        let (graph, vertex_map) = self.merge_pairs(&[(exit, entry)])?;
        let merged = vertex_map[exit];
        Ok(SpliceOutcome {
            graph,
            vertex_map,
            merged,
        })
    }

    fn is_split_set(&self, set: &[VertexId], base_components: usize) -> bool {
        match self.split(set) {
            Ok(outcome) => outcome.graph.components() > base_components,
            Err(_) => false,
        }
    }

    /// All minimal split-sets of size at most `k_max`, by exhaustive subset
    /// search in increasing size. Requires a connected valid graph.
    pub fn find_split_sets(&self, k_max: usize) -> Result<Vec<Vec<VertexId>>> {
        self.ensure_valid()?;
        if !self.is_connected() {
            return Err(Error::Precondition(
                "split-set search requires a connected graph".into(),
            ));
        }
        let saturated = self.classify_vertices()?.saturated;
        let base = self.components();
        let mut minimal: Vec<Vec<VertexId>> = Vec::new();
        let mut subset: Vec<VertexId> = Vec::new();
        fn visit(
            g: &Digraph,
            saturated: &[VertexId],
            start: usize,
            size: usize,
            subset: &mut Vec<VertexId>,
            base: usize,
            minimal: &mut Vec<Vec<VertexId>>,
        ) {
            if subset.len() == size {
                if minimal.iter().any(|m| m.iter().all(|v| subset.contains(v))) {
                    return;
                }
                if g.is_split_set(subset, base) {
                    minimal.push(subset.clone());
                }
                return;
            }
            for i in start..saturated.len() {
                subset.push(saturated[i]);
                visit(g, saturated, i + 1, size, subset, base, minimal);
                subset.pop();
            }
        }
        for size in 1..=k_max.min(saturated.len()) {
            visit(self, &saturated, 0, size, &mut subset, base, &mut minimal);
        }
        Ok(minimal)
    }

    pub fn is_2_splittable(&self) -> Result<bool> {
        Ok(!self.find_split_sets(2)?.is_empty())
    }

    /// Subgraph on exactly the arcs of the chosen alternating cycles.
    pub fn induced_by_acs(&self, cycles: &[AltCycle], chosen: &[usize]) -> Result<InducedSubgraph> {
        let mut k: Vec<usize> = chosen.to_vec();
        k.sort_unstable();
        k.dedup();
        if k.is_empty() {
            return Err(Error::Precondition("empty AC subset".into()));
        }
        if k.iter().any(|&i| i >= cycles.len()) {
            return Err(Error::Precondition("AC index out of range".into()));
        }
        let mut arc_parent: Vec<ArcId> = k
            .iter()
            .flat_map(|&i| cycles[i].arcs.iter().copied())
            .collect();
        arc_parent.sort_unstable();
        let mut vertex_parent: Vec<VertexId> = arc_parent
            .iter()
            .flat_map(|&id| [self.arcs[id].from, self.arcs[id].to])
            .collect();
        vertex_parent.sort_unstable();
        vertex_parent.dedup();
        let index_of = |v: VertexId| vertex_parent.binary_search(&v).unwrap();
        let arcs = arc_parent
            .iter()
            .map(|&id| (index_of(self.arcs[id].from), index_of(self.arcs[id].to)))
            .collect();
        Ok(InducedSubgraph {
            graph: Digraph::new(vertex_parent.len(), arcs)?,
            vertex_parent,
            arc_parent,
        })
    }
}

/// Splices two open 2-graphs: exit `i` of `f` is identified with entry
/// `x(i)` of `fp`, and exit `j` of `fp` with entry `y(j)` of `f`.
pub fn spliced_graph(f: &Digraph, fp: &Digraph, map: &SpliceMap) -> Result<Digraph> {
    let n = map.x.degree();
    let offset = f.vertex_count();
    let mut arcs: Vec<(VertexId, VertexId)> = f.arcs().iter().map(|a| (a.from, a.to)).collect();
    arcs.extend(fp.arcs().iter().map(|a| (a.from + offset, a.to + offset)));
    let union = Digraph::new(offset + fp.vertex_count(), arcs)?;
    let mut pairs = Vec::with_capacity(2 * n);
    for i in 0..n {
        pairs.push((map.f_exits[i], map.fp_entries[map.x.apply(i)] + offset));
    }
    for j in 0..n {
        pairs.push((map.fp_exits[j] + offset, map.f_entries[map.y.apply(j)]));
    }
    let (graph, _) = union.merge_pairs(&pairs)?;
    graph.ensure_valid()?;
    Ok(graph)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Complete symmetric triangle: every vertex saturated.
    fn triangle() -> Digraph {
        Digraph::new(3, vec![(0, 1), (1, 2), (2, 0), (0, 2), (2, 1), (1, 0)]).unwrap()
    }

    /// Directed triangle with every arc doubled.
    fn doubled_triangle() -> Digraph {
        Digraph::new(3, vec![(0, 1), (0, 1), (1, 2), (1, 2), (2, 0), (2, 0)]).unwrap()
    }

    #[test]
    fn triangle_is_valid_and_saturated() {
        let g = triangle();
        assert!(g.validate().is_valid());
        let classes = g.classify_vertices().unwrap();
        assert_eq!(classes.saturated, vec![0, 1, 2]);
        assert!(classes.entries.is_empty());
        assert!(g.is_saturated());
    }

    #[test]
    fn self_loop_vertex_is_reported() {
        let g = Digraph::new(1, vec![(0, 0)]).unwrap();
        let report = g.validate();
        assert!(!report.is_valid());
        assert_eq!(report.violations[0].vertex, 0);
    }

    #[test]
    fn triangle_decomposes_into_single_ac() {
        // Hand trace of the alternating traversal: starting from arc 0->1 the
        // cycle picks up all six arcs.
        let g = triangle();
        let acs = g.ac_decompose().unwrap();
        assert_eq!(acs.len(), 1);
        assert_eq!(acs[0].arcs.len(), 6);
        assert_eq!(acs[0].arcs, vec![0, 4, 2, 5, 1, 3]);
        assert!(acs[0].is_odd());
        // Every arc appears exactly once.
        let mut all: Vec<ArcId> = acs.iter().flat_map(|c| c.arcs.clone()).collect();
        all.sort_unstable();
        assert_eq!(all, (0..6).collect::<Vec<_>>());
    }

    #[test]
    fn doubled_arcs_make_two_arc_cycles() {
        let g = doubled_triangle();
        let acs = g.ac_decompose().unwrap();
        assert_eq!(acs.len(), 3);
        assert!(acs.iter().all(|c| c.arcs.len() == 2 && c.is_odd()));
        assert!(acs.iter().all(|c| g.ac_is_clean(c)));
        assert!(acs.iter().all(|c| !g.ac_is_closed(c)));
    }

    #[test]
    fn dirty_cycle_detected() {
        // Identify a shared start with a shared end inside one cycle:
        // vertices 0,1 with arcs forming one AC where vertex 0 serves both
        // roles.
        let g = Digraph::new(2, vec![(0, 0), (1, 0), (0, 1), (1, 1)]).unwrap();
        assert!(g.validate().is_valid());
        let acs = g.ac_decompose().unwrap();
        assert!(acs.iter().any(|c| !g.ac_is_clean(c)));
    }

    #[test]
    fn closed_cycle_detected() {
        // The complete symmetric triangle is a single AC whose forward half
        // is the cycle 0->1->2->0 and whose backward half is its reversal.
        let g = triangle();
        let acs = g.ac_decompose().unwrap();
        assert_eq!(acs.len(), 1);
        assert!(g.ac_is_closed(&acs[0]));
        // A doubled directed 2-cycle decomposes into parallel-arc pairs whose
        // halves are single arcs, hence open.
        let d = Digraph::new(2, vec![(0, 1), (1, 0), (0, 1), (1, 0)]).unwrap();
        let acs = d.ac_decompose().unwrap();
        assert_eq!(acs.len(), 2);
        assert!(acs.iter().all(|c| !d.ac_is_closed(c)));
    }

    #[test]
    fn connectivity_counts() {
        assert_eq!(triangle().components(), 1);
        let two = Digraph::new(
            6,
            vec![
                (0, 1), (1, 2), (2, 0), (0, 2), (2, 1), (1, 0),
                (3, 4), (4, 5), (5, 3), (3, 5), (5, 4), (4, 3),
            ],
        )
        .unwrap();
        assert_eq!(two.components(), 2);
        assert!(!two.is_connected());
    }

    #[test]
    fn split_then_splice_restores_triangle() {
        let g = triangle();
        let split = g.split(&[1]).unwrap();
        assert!(split.graph.validate().is_valid());
        let classes = split.graph.classify_vertices().unwrap();
        assert_eq!(classes.entries, vec![3]);
        assert_eq!(classes.exits, vec![1]);
        let back = split.graph.splice_pair(3, 1).unwrap();
        assert!(back.graph.is_saturated());
        assert_eq!(back.graph.vertex_count(), 3);
        assert_eq!(back.graph.arcs().len(), 6);
        // Same arc multiset up to the deterministic relabeling.
        let acs = back.graph.ac_decompose().unwrap();
        assert_eq!(acs.len(), 1);
    }

    #[test]
    fn split_rejects_unsaturated() {
        let g = triangle().split(&[0]).unwrap().graph;
        assert!(g.split(&[0]).is_err());
    }

    #[test]
    fn split_set_search_requires_connectivity() {
        let two = Digraph::new(
            6,
            vec![
                (0, 1), (1, 2), (2, 0), (0, 2), (2, 1), (1, 0),
                (3, 4), (4, 5), (5, 3), (3, 5), (5, 4), (4, 3),
            ],
        )
        .unwrap();
        assert!(matches!(two.find_split_sets(2), Err(Error::Precondition(_))));
    }

    #[test]
    fn splicing_two_components_gives_one_element_split_set() {
        // Split one vertex in each triangle, cross-splice one pair only.
        let t = triangle();
        let a = t.split(&[0]).unwrap().graph; // exit 0, entry 3
        let b = t.split(&[0]).unwrap().graph;
        let mut arcs: Vec<(usize, usize)> = a.arcs().iter().map(|x| (x.from, x.to)).collect();
        arcs.extend(b.arcs().iter().map(|x| (x.from + 4, x.to + 4)));
        let u = Digraph::new(8, arcs).unwrap();
        // Splice exit 0 (of a) with entry 7 (= b's entry 3).
        let spliced = u.splice_pair(7, 0).unwrap().graph;
        // Remaining boundary: entry 3 (a) and exit 4 (b); still a 2-digraph.
        assert!(spliced.validate().is_valid());
        let sets = spliced.find_split_sets(2).unwrap();
        assert_eq!(sets, vec![vec![spliced.vertex_count() - 1]]);
    }

    #[test]
    fn induced_subgraph_partitions() {
        let g = doubled_triangle();
        let acs = g.ac_decompose().unwrap();
        let all: Vec<usize> = (0..acs.len()).collect();
        let sub = g.induced_by_acs(&acs, &all).unwrap();
        assert_eq!(sub.graph.arcs().len(), g.arcs().len());
        let first = g.induced_by_acs(&acs, &[0]).unwrap();
        let rest = g.induced_by_acs(&acs, &[1, 2]).unwrap();
        assert_eq!(first.graph.arcs().len() + rest.graph.arcs().len(), 6);
        assert!(g.induced_by_acs(&acs, &[]).is_err());
    }

    #[test]
    fn splice_map_checks_counts() {
        let f = triangle().split(&[0]).unwrap().graph;
        let fp = triangle().split(&[0]).unwrap().graph;
        let map = SpliceMap::identity(&f, &fp).unwrap();
        let g = spliced_graph(&f, &fp, &map).unwrap();
        assert!(g.is_saturated());
        assert_eq!(g.vertex_count(), 6);
        assert_eq!(g.arcs().len(), 12);
        // Releasing both spliced vertices recovers two components.
        let classes = g.classify_vertices().unwrap();
        let split = g.split(&classes.saturated[4..]).unwrap();
        let _ = split;
    }

    #[test]
    fn split_and_splice_preserve_ac_partition() {
        let g = triangle();
        let acs_before = g.ac_decompose().unwrap();
        let split = g.split(&[0, 1]).unwrap().graph;
        let acs_after = split.ac_decompose().unwrap();
        // Arc adjacencies within cycles are untouched, so the partition has
        // the same shape: one 6-arc cycle.
        assert_eq!(acs_before.len(), acs_after.len());
        assert_eq!(acs_before[0].arcs.len(), acs_after[0].arcs.len());
    }

    #[test]
    fn labeling_defaults_to_ascending_ids() {
        let g = triangle().split(&[0, 1]).unwrap().graph;
        let lab = g.labeling().unwrap();
        assert_eq!(lab.exits, vec![0, 1]);
        assert_eq!(lab.entries, vec![3, 4]);
    }

    #[test]
    fn explicit_labels_override_order() {
        let mut g = triangle().split(&[0, 1]).unwrap().graph;
        g.set_label(0, BoundaryRole::Exit, 2).unwrap();
        g.set_label(1, BoundaryRole::Exit, 1).unwrap();
        g.set_label(3, BoundaryRole::Entry, 1).unwrap();
        g.set_label(4, BoundaryRole::Entry, 2).unwrap();
        let lab = g.labeling().unwrap();
        assert_eq!(lab.exits, vec![1, 0]);
        assert_eq!(lab.entries, vec![3, 4]);
    }
}
