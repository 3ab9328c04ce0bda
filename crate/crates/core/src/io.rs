//! Text and JSON formats for graphs and permutation sets.
//!
//! Graph text format: line 1 `vertices <n>`, then one arc per line `u v`
//! (1-based), optional `label <v> <entry|exit> <k>` lines, `#` comments.
//! Permutation-set format: first line `n=<degree>`, one permutation per line
//! in cycle notation, `#` comments.

use serde::{Deserialize, Serialize};

use crate::digraph::{AltCycle, BoundaryRole, Digraph};
use crate::error::{Error, Result};
use crate::perm::Perm;
use crate::permset::PermSet;

pub fn parse_graph_text(text: &str) -> Result<Digraph> {
    let mut vertices: Option<usize> = None;
    let mut arcs: Vec<(usize, usize)> = Vec::new();
    let mut labels: Vec<(usize, BoundaryRole, usize)> = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let mut tokens = line.split_whitespace();
        let head = tokens.next().unwrap();
        let fail = |msg: &str| Error::Parse(format!("line {}: {msg}", lineno + 1));
        match head {
            "vertices" => {
                let n: usize = tokens
                    .next()
                    .ok_or_else(|| fail("missing vertex count"))?
                    .parse()
                    .map_err(|_| fail("bad vertex count"))?;
                if vertices.replace(n).is_some() {
                    return Err(fail("duplicate vertices line"));
                }
            }
            "label" => {
                let v: usize = tokens
                    .next()
                    .ok_or_else(|| fail("missing label vertex"))?
                    .parse()
                    .map_err(|_| fail("bad label vertex"))?;
                let role = match tokens.next() {
                    Some("entry") => BoundaryRole::Entry,
                    Some("exit") => BoundaryRole::Exit,
                    _ => return Err(fail("label role must be entry or exit")),
                };
                let k: usize = tokens
                    .next()
                    .ok_or_else(|| fail("missing label number"))?
                    .parse()
                    .map_err(|_| fail("bad label number"))?;
                if v == 0 {
                    return Err(fail("vertices are 1-based"));
                }
                labels.push((v - 1, role, k));
            }
            u => {
                let u: usize = u.parse().map_err(|_| fail("bad arc start"))?;
                let v: usize = tokens
                    .next()
                    .ok_or_else(|| fail("missing arc end"))?
                    .parse()
                    .map_err(|_| fail("bad arc end"))?;
                if u == 0 || v == 0 {
                    return Err(fail("vertices are 1-based"));
                }
                arcs.push((u - 1, v - 1));
            }
        }
        if tokens.next().is_some() {
            return Err(Error::Parse(format!("line {}: trailing tokens", lineno + 1)));
        }
    }
    let vertices = vertices.ok_or_else(|| Error::Parse("missing vertices line".into()))?;
    let mut g = Digraph::new(vertices, arcs)?;
    for (v, role, k) in labels {
        g.set_label(v, role, k)?;
    }
    Ok(g)
}

pub fn format_graph_text(g: &Digraph) -> String {
    let mut out = format!("vertices {}\n", g.vertex_count());
    for a in g.arcs() {
        out.push_str(&format!("{} {}\n", a.from + 1, a.to + 1));
    }
    for (&v, &k) in g.entry_labels() {
        out.push_str(&format!("label {} entry {}\n", v + 1, k));
    }
    for (&v, &k) in g.exit_labels() {
        out.push_str(&format!("label {} exit {}\n", v + 1, k));
    }
    out
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct LabelJson {
    pub vertex: usize,
    pub role: String,
    pub label: usize,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct AcJson {
    pub forward: Vec<usize>,
    pub backward: Vec<usize>,
}

/// JSON mirror of the graph text format; `acs` carries the decomposition
/// when requested (arc ids are 0-based indices into `arcs`).
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GraphJson {
    pub vertices: usize,
    /// 1-based endpoints, matching the text format.
    pub arcs: Vec<[usize; 2]>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub labels: Vec<LabelJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub acs: Option<Vec<AcJson>>,
}

impl GraphJson {
    pub fn from_graph(g: &Digraph, acs: Option<&[AltCycle]>) -> GraphJson {
        let mut labels = Vec::new();
        for (&v, &k) in g.entry_labels() {
            labels.push(LabelJson {
                vertex: v + 1,
                role: "entry".into(),
                label: k,
            });
        }
        for (&v, &k) in g.exit_labels() {
            labels.push(LabelJson {
                vertex: v + 1,
                role: "exit".into(),
                label: k,
            });
        }
        GraphJson {
            vertices: g.vertex_count(),
            arcs: g.arcs().iter().map(|a| [a.from + 1, a.to + 1]).collect(),
            labels,
            acs: acs.map(|cycles| {
                cycles
                    .iter()
                    .map(|c| AcJson {
                        forward: c.forward_arcs().collect(),
                        backward: c.backward_arcs().collect(),
                    })
                    .collect()
            }),
        }
    }

    pub fn to_graph(&self) -> Result<Digraph> {
        let mut arcs = Vec::with_capacity(self.arcs.len());
        for &[u, v] in &self.arcs {
            if u == 0 || v == 0 {
                return Err(Error::Parse("vertices are 1-based".into()));
            }
            arcs.push((u - 1, v - 1));
        }
        let mut g = Digraph::new(self.vertices, arcs)?;
        for l in &self.labels {
            let role = match l.role.as_str() {
                "entry" => BoundaryRole::Entry,
                "exit" => BoundaryRole::Exit,
                other => return Err(Error::Parse(format!("bad label role {other:?}"))),
            };
            if l.vertex == 0 {
                return Err(Error::Parse("vertices are 1-based".into()));
            }
            g.set_label(l.vertex - 1, role, l.label)?;
        }
        Ok(g)
    }
}

pub fn parse_permset(text: &str) -> Result<PermSet> {
    let mut degree: Option<usize> = None;
    let mut elems: Vec<Perm> = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix("n=") {
            let n: usize = rest
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("line {}: bad degree", lineno + 1)))?;
            if degree.replace(n).is_some() {
                return Err(Error::Parse(format!("line {}: duplicate degree", lineno + 1)));
            }
            continue;
        }
        let n = degree.ok_or_else(|| {
            Error::Parse(format!("line {}: permutation before n=<degree>", lineno + 1))
        })?;
        elems.push(Perm::parse(line, n)?);
    }
    let degree = degree.ok_or_else(|| Error::Parse("missing n=<degree> line".into()))?;
    PermSet::new(degree, elems)
}

pub fn format_permset(set: &PermSet) -> String {
    let mut out = format!("n={}\n", set.degree());
    for p in set.iter() {
        out.push_str(&format!("{p}\n"));
    }
    out
}

/// Plain structural DOT dump, no layout logic.
pub fn format_graph_dot(g: &Digraph) -> String {
    let mut out = String::from("digraph {\n");
    for v in 0..g.vertex_count() {
        out.push_str(&format!("  v{};\n", v + 1));
    }
    for a in g.arcs() {
        out.push_str(&format!("  v{} -> v{};\n", a.from + 1, a.to + 1));
    }
    out.push_str("}\n");
    out
}
