//! Isomorph-free exhaustive generation of 2-digraph families built from
//! alternating-cycle templates, canonical labeling for the dedup, and census
//! statistics.
//!
//! Generation works on the template picture: a graph whose every AC has 2k
//! arcs is m disjoint clean AC templates whose exits are identified with
//! entries by a partial injection. Splitting every saturated vertex recovers
//! the templates, so enumerating identifications visits every member of the
//! family; canonical codes collapse the isomorphic duplicates.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::certify::{check, Caps, Step, Verdict};
use crate::digraph::Digraph;
use crate::error::{Error, Result};
use crate::factors::{classify_parity_family, is_hamiltonian, open_routes, ParityFamily};
use crate::par;

/// Isomorphism-invariant code plus the automorphism count of the graph.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct CanonicalForm {
    pub code: Vec<u8>,
    pub automorphism_count: u64,
}

/// Adjacency with at most two in- and two out-neighbors per vertex packed
/// into fixed slots (the 2-digraph case), falling back to general lists.
enum Adjacency {
    /// Neighbor slots hold vertex ids, `NO_SLOT` when absent.
    Packed { outs: Vec<[u8; 2]>, ins: Vec<[u8; 2]> },
    General { outs: Vec<Vec<usize>>, ins: Vec<Vec<usize>> },
}

const NO_SLOT: u8 = u8::MAX;

fn adjacency(g: &Digraph) -> Adjacency {
    let n = g.vertex_count();
    let mut outs = vec![Vec::new(); n];
    let mut ins = vec![Vec::new(); n];
    for a in g.arcs() {
        outs[a.from].push(a.to);
        ins[a.to].push(a.from);
    }
    let packable = n < NO_SLOT as usize
        && outs.iter().all(|v| v.len() <= 2)
        && ins.iter().all(|v| v.len() <= 2);
    if !packable {
        return Adjacency::General { outs, ins };
    }
    let pack = |lists: Vec<Vec<usize>>| {
        lists
            .into_iter()
            .map(|l| {
                let mut slot = [NO_SLOT; 2];
                for (k, v) in l.into_iter().enumerate() {
                    slot[k] = v as u8;
                }
                slot
            })
            .collect()
    };
    Adjacency::Packed {
        outs: pack(outs),
        ins: pack(ins),
    }
}

/// One signature per vertex per round: smaller is refined first. Colors stay
/// below 256 here (the packed path requires fewer than 255 vertices), so the
/// five components fit a u64.
#[inline]
fn packed_sig(colors: &[u32], outs: &[u8; 2], ins: &[u8; 2], color: u32) -> u64 {
    let look = |slot: u8| -> u64 {
        if slot == NO_SLOT {
            0xFF
        } else {
            colors[slot as usize] as u64
        }
    };
    let (a, b) = (look(outs[0]), look(outs[1]));
    let (o1, o2) = (a.min(b), a.max(b));
    let (c, d) = (look(ins[0]), look(ins[1]));
    let (i1, i2) = (c.min(d), c.max(d));
    (color as u64) << 32 | o1 << 24 | o2 << 16 | i1 << 8 | i2
}

/// Color refinement on the directed multigraph; colors are normalized ranks,
/// so equal partitions get identical color vectors on isomorphic graphs.
fn refine(adj: &Adjacency, colors: &mut Vec<u32>) {
    let n = colors.len();
    let mut distinct = {
        let mut c = colors.clone();
        c.sort_unstable();
        c.dedup();
        c.len()
    };
    match adj {
        Adjacency::Packed { outs, ins } => {
            let mut keyed: Vec<(u64, u8)> = Vec::with_capacity(n);
            loop {
                keyed.clear();
                for v in 0..n {
                    keyed.push((packed_sig(colors, &outs[v], &ins[v], colors[v]), v as u8));
                }
                keyed.sort_unstable();
                let mut next = 0u32;
                let mut prev = keyed[0].0;
                for &(sig, v) in keyed.iter() {
                    if sig != prev {
                        next += 1;
                        prev = sig;
                    }
                    colors[v as usize] = next;
                }
                if next as usize + 1 == distinct {
                    return;
                }
                distinct = next as usize + 1;
            }
        }
        Adjacency::General { outs, ins } => loop {
            let mut sigs: Vec<(u32, Vec<u32>, Vec<u32>)> = Vec::with_capacity(n);
            for v in 0..n {
                let mut o: Vec<u32> = outs[v].iter().map(|&w| colors[w]).collect();
                o.sort_unstable();
                let mut i: Vec<u32> = ins[v].iter().map(|&w| colors[w]).collect();
                i.sort_unstable();
                sigs.push((colors[v], o, i));
            }
            let mut order: Vec<usize> = (0..n).collect();
            order.sort_by(|&a, &b| sigs[a].cmp(&sigs[b]));
            let mut next = 0u32;
            let mut new_colors = vec![0u32; n];
            for k in 0..n {
                if k > 0 && sigs[order[k]] != sigs[order[k - 1]] {
                    next += 1;
                }
                new_colors[order[k]] = next;
            }
            *colors = new_colors;
            if next as usize + 1 == distinct {
                return;
            }
            distinct = next as usize + 1;
        },
    }
}

fn encode_with(g: &Digraph, colors: &[u32]) -> Vec<u8> {
    let mut arcs: Vec<(u8, u8)> = g
        .arcs()
        .iter()
        .map(|a| (colors[a.from] as u8, colors[a.to] as u8))
        .collect();
    arcs.sort_unstable();
    let mut code = Vec::with_capacity(1 + 2 * arcs.len());
    code.push(g.vertex_count() as u8);
    for (f, t) in arcs {
        code.push(f);
        code.push(t);
    }
    code
}

/// Smallest color value whose class has more than one vertex.
fn target_cell(colors: &[u32]) -> Option<u32> {
    let mut counts = vec![0usize; colors.len()];
    for &c in colors {
        counts[c as usize] += 1;
    }
    counts
        .iter()
        .position(|&c| c > 1)
        .map(|c| c as u32)
}

fn search(
    g: &Digraph,
    adj: &Adjacency,
    colors: Vec<u32>,
    best: &mut Option<Vec<u8>>,
    count: &mut u64,
) {
    match target_cell(&colors) {
        None => {
            let code = encode_with(g, &colors);
            match best.as_ref() {
                None => {
                    *best = Some(code);
                    *count = 1;
                }
                Some(cur) => {
                    if code < *cur {
                        *best = Some(code);
                        *count = 1;
                    } else if code == *cur {
                        *count += 1;
                    }
                }
            }
        }
        Some(cell) => {
            for v in 0..colors.len() {
                if colors[v] != cell {
                    continue;
                }
                let mut child = colors.clone();
                child[v] = colors.len() as u32;
                refine(adj, &mut child);
                search(g, adj, child, best, count);
            }
        }
    }
}

/// Canonical form by individualization and refinement: the code is the
/// minimum arc encoding over the discrete leaves of the search tree, and the
/// number of leaves attaining it is the automorphism count.
pub fn canonical_form(g: &Digraph) -> CanonicalForm {
    assert!(
        g.vertex_count() <= u8::MAX as usize,
        "canonical codes assume at most 255 vertices"
    );
    let adj = adjacency(g);
    let mut colors = vec![0u32; g.vertex_count()];
    refine(&adj, &mut colors);
    let mut best = None;
    let mut count = 0;
    search(g, &adj, colors, &mut best, &mut count);
    CanonicalForm {
        code: best.unwrap_or_else(|| encode_with(g, &[])),
        automorphism_count: count.max(1),
    }
}

/// Code-only variant used by the generation dedup.
fn canonical_code(g: &Digraph) -> Vec<u8> {
    canonical_form(g).code
}

/// Rebuilds the canonical representative from its code.
pub fn canonical_graph(code: &[u8]) -> Result<Digraph> {
    if code.is_empty() || code.len().is_multiple_of(2) {
        return Err(Error::Parse("bad canonical code length".into()));
    }
    let n = code[0] as usize;
    let arcs = code[1..]
        .chunks(2)
        .map(|c| (c[0] as usize, c[1] as usize))
        .collect();
    Digraph::new(n, arcs)
}

pub fn code_hex(code: &[u8]) -> String {
    code.iter().map(|b| format!("{b:02x}")).collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FamilyFilter {
    /// Keep only graphs whose factors all have odd index (saturated only).
    OddFamily,
    /// Keep only graphs without a split-set of size at most two.
    Non2Splittable,
    /// Identify every exit: the family of 2-dds.
    SaturatedOnly,
}

/// What to generate: m alternating cycles of 2k arcs each, with the chosen
/// identification count and filters.
#[derive(Clone, Debug)]
pub struct FamilySpec {
    pub arcs_per_ac: usize,
    pub ac_count: usize,
    pub clean: bool,
    pub require_connected: bool,
    /// Exact number of identifications (saturated vertices); ignored when
    /// `SaturatedOnly` is present, unconstrained when `None`.
    pub saturated_count: Option<usize>,
    pub filters: Vec<FamilyFilter>,
}

impl FamilySpec {
    pub fn new(arcs_per_ac: usize, ac_count: usize) -> FamilySpec {
        FamilySpec {
            arcs_per_ac,
            ac_count,
            clean: false,
            require_connected: false,
            saturated_count: None,
            filters: Vec::new(),
        }
    }

    fn k(&self) -> usize {
        self.arcs_per_ac / 2
    }

    fn km(&self) -> usize {
        self.k() * self.ac_count
    }

    fn saturated_only(&self) -> bool {
        self.filters.contains(&FamilyFilter::SaturatedOnly)
    }

    fn target_saturated(&self) -> Option<usize> {
        if self.saturated_only() {
            Some(self.km())
        } else {
            self.saturated_count
        }
    }

    fn validate(&self) -> Result<()> {
        if self.arcs_per_ac < 4 || !self.arcs_per_ac.is_multiple_of(2) {
            return Err(Error::Precondition(
                "arcs per AC must be an even number >= 4".into(),
            ));
        }
        if self.ac_count == 0 {
            return Err(Error::Precondition("need at least one AC".into()));
        }
        if let Some(s) = self.target_saturated() {
            if s > self.km() {
                return Err(Error::Precondition(format!(
                    "cannot saturate {s} of {} exits",
                    self.km()
                )));
            }
        }
        Ok(())
    }
}

/// Default bound on the identification-slot count for exhaustive runs; the
/// bigger families run only in long-run mode.
pub const DEFAULT_GENERATION_SLOT_CAP: usize = 12;

#[derive(Clone, Copy, Debug, Default)]
pub struct GenerateOptions {
    pub long_run: bool,
    /// Process only the prefixes with `index % count == shard`, for
    /// restartable sharded runs.
    pub shard: Option<(usize, usize)>,
}

#[derive(Clone)]
struct GenState {
    targets: Vec<Option<u16>>,
    used: u64,
    assigned: usize,
}

struct Generator {
    k: usize,
    m: usize,
    km: usize,
    clean: bool,
    target: Option<usize>,
    /// Template symmetries used to discard non-minimal assignments before
    /// the canonical dedup: per-AC rotations and flips plus adjacent AC
    /// swaps, each as (inverse exit permutation, entry permutation) over the
    /// global slot indices.
    symmetries: Vec<(Vec<u16>, Vec<u16>)>,
}

fn template_symmetries(k: usize, m: usize) -> Vec<(Vec<u16>, Vec<u16>)> {
    let km = k * m;
    let identity: Vec<u16> = (0..km as u16).collect();
    let mut gens = Vec::new();
    // Rotations s_i -> s_{i+d}, t_i -> t_{i+d} and flips s_i -> s_{d+1-i},
    // t_i -> t_{d-i} of each AC.
    for c in 0..m {
        let base = c * k;
        for d in 0..k {
            for flip in [false, true] {
                if !flip && d == 0 {
                    continue;
                }
                let sigma_t = |i: usize| if flip { (d + k - i) % k } else { (i + d) % k };
                let sigma_s = |i: usize| if flip { (d + 1 + k - i) % k } else { (i + d) % k };
                let mut exit_inv = identity.clone();
                let mut entry = identity.clone();
                for i in 0..k {
                    exit_inv[base + sigma_t(i)] = (base + i) as u16;
                    entry[base + i] = (base + sigma_s(i)) as u16;
                }
                gens.push((exit_inv, entry));
            }
        }
    }
    // Adjacent AC transpositions.
    for c in 0..m.saturating_sub(1) {
        let mut exit_inv = identity.clone();
        let mut entry = identity.clone();
        for i in 0..k {
            exit_inv[c * k + i] = ((c + 1) * k + i) as u16;
            exit_inv[(c + 1) * k + i] = (c * k + i) as u16;
            entry[c * k + i] = ((c + 1) * k + i) as u16;
            entry[(c + 1) * k + i] = (c * k + i) as u16;
        }
        gens.push((exit_inv, entry));
    }
    gens
}

impl Generator {
    fn choices(&self, state: &GenState) -> Vec<Option<u16>> {
        let exit_idx = state.targets.len();
        let cur_ac = exit_idx / self.k;
        let remaining = self.km - exit_idx;
        let mut out = Vec::new();
        let may_skip = match self.target {
            Some(s) => state.assigned + remaining > s,
            None => true,
        };
        let need_all = match self.target {
            Some(s) => s.saturating_sub(state.assigned) == remaining,
            None => false,
        };
        if may_skip && !need_all {
            out.push(None);
        }
        if self.target == Some(state.assigned) {
            return out;
        }
        let mut first_fresh: Option<usize> = None;
        for c in 0..self.m {
            let mask = ((1u64 << self.k) - 1) << (c * self.k);
            let fresh = c > cur_ac && state.used & mask == 0;
            if fresh {
                if first_fresh.is_none() {
                    first_fresh = Some(c);
                }
                continue;
            }
            if self.clean && c == cur_ac {
                continue;
            }
            for i in 0..self.k {
                let e = c * self.k + i;
                if state.used >> e & 1 == 0 {
                    out.push(Some(e as u16));
                }
            }
        }
        if let Some(c) = first_fresh {
            out.push(Some((c * self.k) as u16));
        }
        out
    }

    fn advance(&self, state: &GenState, choice: Option<u16>) -> GenState {
        let mut next = state.clone();
        next.targets.push(choice);
        if let Some(e) = choice {
            next.used |= 1 << e;
            next.assigned += 1;
        }
        next
    }

    /// Rejects assignments that a recorded template symmetry maps to a
    /// lexicographically smaller one; the orbit minimum always survives, so
    /// every isomorphism class keeps a representative.
    fn is_symmetry_minimal(&self, targets: &[Option<u16>]) -> bool {
        'gen: for (exit_inv, entry) in &self.symmetries {
            for x in 0..self.km {
                let mine = targets[x];
                let image = targets[exit_inv[x] as usize].map(|e| entry[e as usize]);
                match image.cmp(&mine) {
                    std::cmp::Ordering::Less => return false,
                    std::cmp::Ordering::Greater => continue 'gen,
                    std::cmp::Ordering::Equal => {}
                }
            }
        }
        true
    }

    /// Builds the graph for a complete assignment, compacting the merged
    /// template vertices deterministically.
    fn build(&self, targets: &[Option<u16>]) -> Digraph {
        let per_ac = 2 * self.k;
        let total = per_ac * self.m;
        let entry_vertex = |e: usize| (e / self.k) * per_ac + e % self.k;
        let exit_vertex = |x: usize| (x / self.k) * per_ac + self.k + x % self.k;
        let mut canon_rep: Vec<usize> = (0..total).collect();
        for (x, t) in targets.iter().enumerate() {
            if let Some(e) = t {
                let (a, b) = (exit_vertex(x), entry_vertex(*e as usize));
                let (lo, hi) = (a.min(b), a.max(b));
                canon_rep[hi] = lo;
            }
        }
        let mut map = vec![usize::MAX; total];
        let mut next = 0;
        for v in 0..total {
            let rep = canon_rep[v];
            debug_assert!(canon_rep[rep] == rep);
            if map[rep] == usize::MAX {
                map[rep] = next;
                next += 1;
            }
            map[v] = map[rep];
        }
        let mut arcs = Vec::with_capacity(self.arcs_total());
        for c in 0..self.m {
            let base = c * per_ac;
            for i in 0..self.k {
                arcs.push((map[base + i], map[base + self.k + i]));
                arcs.push((map[base + (i + 1) % self.k], map[base + self.k + i]));
            }
        }
        Digraph::new(next, arcs).expect("template assembly is well formed")
    }

    fn arcs_total(&self) -> usize {
        2 * self.k * self.m
    }
}

fn passes_filters(g: &Digraph, spec: &FamilySpec) -> Result<bool> {
    if spec.require_connected && !g.is_connected() {
        return Ok(false);
    }
    if spec.clean && !g.graph_is_clean()? {
        return Ok(false);
    }
    for f in &spec.filters {
        match f {
            FamilyFilter::SaturatedOnly => {
                debug_assert!(g.is_saturated());
            }
            FamilyFilter::OddFamily => {
                if !g.is_saturated()
                    || classify_parity_family(g, crate::factors::DEFAULT_FACTOR_CAP)?
                        != ParityFamily::Odd
                {
                    return Ok(false);
                }
            }
            FamilyFilter::Non2Splittable => {
                if !g.is_connected() || g.is_2_splittable()? {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

fn dfs_collect(
    gen: &Generator,
    spec: &FamilySpec,
    state: GenState,
    out: &mut BTreeSet<Vec<u8>>,
) -> Result<()> {
    if state.targets.len() == gen.km {
        if let Some(s) = gen.target {
            if state.assigned != s {
                return Ok(());
            }
        }
        if !gen.is_symmetry_minimal(&state.targets) {
            return Ok(());
        }
        let g = gen.build(&state.targets);
        if passes_filters(&g, spec)? {
            out.insert(canonical_code(&g));
        }
        return Ok(());
    }
    for choice in gen.choices(&state) {
        dfs_collect(gen, spec, gen.advance(&state, choice), out)?;
    }
    Ok(())
}

/// Expands the assignment tree breadth-first until there are enough disjoint
/// prefixes to spread across workers.
fn prefixes(gen: &Generator, want: usize) -> Vec<GenState> {
    let mut states = vec![GenState {
        targets: Vec::new(),
        used: 0,
        assigned: 0,
    }];
    while states.len() < want {
        let mut next = Vec::new();
        let mut grew = false;
        for st in &states {
            if st.targets.len() == gen.km {
                next.push(st.clone());
                continue;
            }
            for choice in gen.choices(st) {
                next.push(gen.advance(st, choice));
                grew = true;
            }
        }
        if !grew {
            return next;
        }
        states = next;
    }
    states
}

/// Generates the family as canonical representatives, sorted by code, each
/// graph in its canonical labeling.
pub fn generate(spec: &FamilySpec, options: &GenerateOptions) -> Result<Vec<Digraph>> {
    Ok(generate_codes(spec, options)?
        .into_iter()
        .map(|code| canonical_graph(&code).expect("self-produced code"))
        .collect())
}

/// The canonical codes of the family, sorted.
pub fn generate_codes(spec: &FamilySpec, options: &GenerateOptions) -> Result<Vec<Vec<u8>>> {
    spec.validate()?;
    if spec.km() > DEFAULT_GENERATION_SLOT_CAP && !options.long_run {
        return Err(Error::CapExceeded(format!(
            "{} identification slots exceed the default cap of {}; use long-run mode",
            spec.km(),
            DEFAULT_GENERATION_SLOT_CAP
        )));
    }
    let gen = Generator {
        k: spec.k(),
        m: spec.ac_count,
        km: spec.km(),
        clean: spec.clean,
        target: spec.target_saturated(),
        symmetries: template_symmetries(spec.k(), spec.ac_count),
    };
    let mut starts = prefixes(&gen, 128);
    if let Some((shard, of)) = options.shard {
        if of == 0 || shard >= of {
            return Err(Error::Precondition("bad shard indices".into()));
        }
        starts = starts
            .into_iter()
            .enumerate()
            .filter(|(i, _)| i % of == shard)
            .map(|(_, s)| s)
            .collect();
    }
    let sets: Vec<Result<BTreeSet<Vec<u8>>>> = par::map_vec(starts, |st| {
        let mut local = BTreeSet::new();
        dfs_collect(&gen, spec, st, &mut local)?;
        Ok(local)
    });
    let mut merged = BTreeSet::new();
    for set in sets {
        merged.extend(set?);
    }
    Ok(merged.into_iter().collect())
}

fn splitmix64(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9e3779b97f4a7c15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
    z ^ (z >> 31)
}

/// Draws random members of the family (not deduplicated): each attempt picks
/// a uniformly random assignment with the requested saturation and keeps it
/// if it passes the filters.
pub fn sample(spec: &FamilySpec, attempts: usize, seed: u64) -> Result<Vec<Digraph>> {
    spec.validate()?;
    let gen = Generator {
        k: spec.k(),
        m: spec.ac_count,
        km: spec.km(),
        clean: spec.clean,
        target: spec.target_saturated(),
        symmetries: Vec::new(),
    };
    let km = spec.km();
    let target = spec.target_saturated().unwrap_or(km);
    let mut rng = seed;
    let mut out = Vec::new();
    'attempt: for _ in 0..attempts {
        // Random subset of exits of the target size, random injection into
        // the entries.
        let mut exits: Vec<usize> = (0..km).collect();
        for i in (1..km).rev() {
            let j = (splitmix64(&mut rng) % (i as u64 + 1)) as usize;
            exits.swap(i, j);
        }
        let mut entries: Vec<usize> = (0..km).collect();
        for i in (1..km).rev() {
            let j = (splitmix64(&mut rng) % (i as u64 + 1)) as usize;
            entries.swap(i, j);
        }
        let mut targets: Vec<Option<u16>> = vec![None; km];
        for (x, e) in exits.iter().take(target).zip(entries.iter()) {
            if spec.clean && x / spec.k() == e / spec.k() {
                continue 'attempt;
            }
            targets[*x] = Some(*e as u16);
        }
        let g = gen.build(&targets);
        if passes_filters(&g, spec)? {
            out.push(g);
        }
    }
    Ok(out)
}

/// Which statistics a census should compute.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Analysis {
    Connectivity,
    Cleanliness,
    ParityFamily,
    Splittability,
    Hamiltonicity,
    ResidueSize,
    Certification,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct Census {
    pub total: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub connected: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub clean: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub odd: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub even: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub neither: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub two_splittable: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub hamiltonian: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub non_hamiltonian: Option<usize>,
    /// Residue size -> class count, over connected open boundary graphs.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub residue_sizes: Option<std::collections::BTreeMap<usize, usize>>,
    /// Final certificate step kind -> count, over connected non-Hamiltonian
    /// members.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub certificates: Option<std::collections::BTreeMap<String, usize>>,
}

fn step_kind(step: &Step) -> &'static str {
    match step {
        Step::Disconnected { .. } => "disconnected",
        Step::ClosedAc { .. } => "closed-ac",
        Step::EvenFamily => "even-family",
        Step::Split { .. } => "split",
        Step::Residue { .. } => "residue",
        Step::Replace { .. } => "replace",
        Step::Collapse { .. } => "collapse",
        Step::BruteForce { .. } => "brute-force",
        Step::Undecided { .. } => "undecided",
    }
}

/// Generates the family and tabulates the requested statistics.
pub fn census(
    spec: &FamilySpec,
    analyses: &[Analysis],
    options: &GenerateOptions,
) -> Result<Census> {
    let graphs = generate(spec, options)?;
    let caps = Caps::default();
    let mut result = Census {
        total: graphs.len(),
        ..Census::default()
    };
    type CensusRow = (
        bool,
        bool,
        Option<ParityFamily>,
        Option<bool>,
        Option<bool>,
        Option<usize>,
        Option<String>,
    );
    let per_graph: Vec<Result<CensusRow>> = par::map_vec(graphs, |g| {
            let connected = g.is_connected();
            let clean = g.graph_is_clean()?;
            let parity = if analyses.contains(&Analysis::ParityFamily) && g.is_saturated() {
                Some(classify_parity_family(&g, caps.max_factor_bits)?)
            } else {
                None
            };
            let splittable = if analyses.contains(&Analysis::Splittability) && connected {
                Some(g.is_2_splittable()?)
            } else {
                None
            };
            let ham = if analyses.contains(&Analysis::Hamiltonicity) && g.is_saturated() {
                Some(is_hamiltonian(&g, caps.max_factor_bits)?)
            } else {
                None
            };
            let residue_size = if analyses.contains(&Analysis::ResidueSize)
                && !g.is_saturated()
                && connected
            {
                match open_routes(&g, caps.max_factor_bits) {
                    Ok(routes) => Some(routes.routes.residue()?.len()),
                    Err(Error::ClosedGraph) => None,
                    Err(e) => return Err(e),
                }
            } else {
                None
            };
            let cert_kind = if analyses.contains(&Analysis::Certification)
                && g.is_saturated()
                && connected
                && !is_hamiltonian(&g, caps.max_factor_bits)?
            {
                let cert = check(&g, &caps)?;
                debug_assert_eq!(cert.verdict, Verdict::NonHamiltonian);
                Some(cert.steps.last().map(step_kind).unwrap_or("none").to_string())
            } else {
                None
            };
            Ok((connected, clean, parity, splittable, ham, residue_size, cert_kind))
        });
    let mut connected = 0;
    let mut clean = 0;
    let (mut odd, mut even, mut neither) = (0, 0, 0);
    let mut splittable = 0;
    let (mut ham, mut nonham) = (0, 0);
    let mut residue_sizes = std::collections::BTreeMap::new();
    let mut certificates = std::collections::BTreeMap::new();
    for row in per_graph {
        let (c, cl, parity, split, h, rsize, cert) = row?;
        connected += usize::from(c);
        clean += usize::from(cl);
        match parity {
            Some(ParityFamily::Odd) => odd += 1,
            Some(ParityFamily::Even) => even += 1,
            Some(ParityFamily::Neither) => neither += 1,
            None => {}
        }
        if split == Some(true) {
            splittable += 1;
        }
        match h {
            Some(true) => ham += 1,
            Some(false) => nonham += 1,
            None => {}
        }
        if let Some(s) = rsize {
            *residue_sizes.entry(s).or_insert(0) += 1;
        }
        if let Some(kind) = cert {
            *certificates.entry(kind).or_insert(0) += 1;
        }
    }
    if analyses.contains(&Analysis::Connectivity) {
        result.connected = Some(connected);
    }
    if analyses.contains(&Analysis::Cleanliness) {
        result.clean = Some(clean);
    }
    if analyses.contains(&Analysis::ParityFamily) {
        result.odd = Some(odd);
        result.even = Some(even);
        result.neither = Some(neither);
    }
    if analyses.contains(&Analysis::Splittability) {
        result.two_splittable = Some(splittable);
    }
    if analyses.contains(&Analysis::Hamiltonicity) {
        result.hamiltonian = Some(ham);
        result.non_hamiltonian = Some(nonham);
    }
    if analyses.contains(&Analysis::ResidueSize) {
        result.residue_sizes = Some(residue_sizes);
    }
    if analyses.contains(&Analysis::Certification) {
        result.certificates = Some(certificates);
    }
    Ok(result)
}

impl Census {
    pub fn to_tsv(&self) -> String {
        let mut out = String::new();
        let mut push = |k: &str, v: String| out.push_str(&format!("{k}\t{v}\n"));
        push("total", self.total.to_string());
        if let Some(v) = self.connected {
            push("connected", v.to_string());
        }
        if let Some(v) = self.clean {
            push("clean", v.to_string());
        }
        if let Some(v) = self.odd {
            push("odd", v.to_string());
        }
        if let Some(v) = self.even {
            push("even", v.to_string());
        }
        if let Some(v) = self.neither {
            push("neither", v.to_string());
        }
        if let Some(v) = self.two_splittable {
            push("two_splittable", v.to_string());
        }
        if let Some(v) = self.hamiltonian {
            push("hamiltonian", v.to_string());
        }
        if let Some(v) = self.non_hamiltonian {
            push("non_hamiltonian", v.to_string());
        }
        if let Some(sizes) = &self.residue_sizes {
            for (s, c) in sizes {
                push(&format!("residue_size_{s}"), c.to_string());
            }
        }
        if let Some(certs) = &self.certificates {
            for (kind, c) in certs {
                push(&format!("certified_{kind}"), c.to_string());
            }
        }
        out
    }
}
