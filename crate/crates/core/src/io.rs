//! Text formats for graphs, leanings, constraints, probabilities and
//! assignments.
//!
//! Every format is UTF-8, one record per line, fields separated by tabs (any
//! run of whitespace is accepted). Blank lines and lines starting with `#`
//! are ignored.
//!
//! * edges: `u<TAB>v`, meaning `v` follows `u`. A line holding a single id
//!   declares a node without edges.
//! * node or item leanings: `id<TAB>leaning`.
//! * attention overrides: `node<TAB>bound`.
//! * explicit probabilities: `u<TAB>v<TAB>item<TAB>p`.
//! * assignments: `node<TAB>item`.
//!
//! Node ids are labels. Dense ids follow numeric order when every label is
//! a non-negative integer and lexicographic order otherwise. Item ids follow
//! the order of the item file.

use std::collections::{BTreeSet, HashMap};
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::model::{
    validate_leaning, Assignment, ConstraintSet, EdgeId, ItemCatalog, ItemId, NodeId, Pair,
    SocialGraph,
};

struct Records {
    path: PathBuf,
    text: String,
}

impl Records {
    fn open(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path)
            .map_err(|e| Error::io(format!("reading {}", path.display()), e))?;
        Ok(Records {
            path: path.to_path_buf(),
            text,
        })
    }

    /// Non-comment lines as `(line number, fields)`.
    fn lines(&self) -> impl Iterator<Item = (usize, Vec<&str>)> + '_ {
        self.text.lines().enumerate().filter_map(|(i, line)| {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                None
            } else {
                Some((i + 1, line.split_whitespace().collect()))
            }
        })
    }

    fn error(&self, line: usize, message: impl Into<String>) -> Error {
        Error::Parse {
            path: self.path.clone(),
            line,
            message: message.into(),
        }
    }

    fn expect_fields<'a>(&self, line: usize, fields: &'a [&'a str], n: usize) -> Result<&'a [&'a str]> {
        if fields.len() != n {
            return Err(self.error(line, format!("expected {n} fields, found {}", fields.len())));
        }
        Ok(fields)
    }

    fn leaning(&self, line: usize, field: &str) -> Result<f64> {
        let x: f64 = field
            .parse()
            .map_err(|_| self.error(line, format!("bad leaning {field:?}")))?;
        validate_leaning(x).map_err(|_| self.error(line, format!("leaning {field} outside [-1, 1]")))
    }
}

fn label_order(labels: BTreeSet<&str>) -> Vec<String> {
    let numeric: Option<Vec<u64>> = labels.iter().map(|s| s.parse().ok()).collect();
    match numeric {
        Some(mut ids) if ids.iter().zip(&labels).all(|(x, s)| x.to_string() == *s) => {
            ids.sort_unstable();
            ids.into_iter().map(|x| x.to_string()).collect()
        }
        _ => labels.into_iter().map(str::to_string).collect(),
    }
}

/// Loads an edge file and the matching node-leaning file.
pub fn load_graph(edge_path: &Path, leaning_path: &Path) -> Result<SocialGraph> {
    let edges_file = Records::open(edge_path)?;
    let mut labels = BTreeSet::new();
    let mut raw_edges = Vec::new();
    for (line, f) in edges_file.lines() {
        match f.as_slice() {
            [u] => {
                labels.insert(*u);
            }
            [u, v] => {
                if u == v {
                    return Err(edges_file.error(line, format!("self-loop on {u}")));
                }
                labels.insert(*u);
                labels.insert(*v);
                raw_edges.push((line, *u, *v));
            }
            _ => return Err(edges_file.error(line, format!("expected 1 or 2 fields, found {}", f.len()))),
        }
    }
    let labels = label_order(labels);
    let ids: HashMap<&str, NodeId> = labels
        .iter()
        .enumerate()
        .map(|(i, s)| (s.as_str(), i as NodeId))
        .collect();

    let mut seen = std::collections::HashSet::with_capacity(raw_edges.len());
    let mut edges = Vec::with_capacity(raw_edges.len());
    for (line, u, v) in raw_edges {
        let e = (ids[u], ids[v]);
        if !seen.insert(e) {
            return Err(edges_file.error(line, format!("duplicate edge {u} -> {v}")));
        }
        edges.push(e);
    }

    let lean_file = Records::open(leaning_path)?;
    let mut leanings = vec![None; labels.len()];
    for (line, f) in lean_file.lines() {
        let f = lean_file.expect_fields(line, &f, 2)?;
        let Some(&v) = ids.get(f[0]) else {
            return Err(lean_file.error(line, format!("unknown node {}", f[0])));
        };
        if leanings[v as usize].is_some() {
            return Err(lean_file.error(line, format!("duplicate leaning for node {}", f[0])));
        }
        leanings[v as usize] = Some(lean_file.leaning(line, f[1])?);
    }
    let leanings = leanings
        .into_iter()
        .enumerate()
        .map(|(v, x)| {
            x.ok_or_else(|| Error::Config(format!(
                "node {} has no leaning in {}",
                labels[v],
                leaning_path.display()
            )))
        })
        .collect::<Result<Vec<_>>>()?;
    SocialGraph::with_labels(&edges, leanings, labels)
}

/// Loads an item-leaning file; items keep file order.
pub fn load_items(path: &Path) -> Result<ItemCatalog> {
    let file = Records::open(path)?;
    let mut labels = Vec::new();
    let mut leanings = Vec::new();
    let mut seen = std::collections::HashSet::new();
    for (line, f) in file.lines() {
        let f = file.expect_fields(line, &f, 2)?;
        if !seen.insert(f[0].to_string()) {
            return Err(file.error(line, format!("duplicate item {}", f[0])));
        }
        labels.push(f[0].to_string());
        leanings.push(file.leaning(line, f[1])?);
    }
    if leanings.is_empty() {
        return Err(Error::Config(format!("no items in {}", path.display())));
    }
    ItemCatalog::with_labels(leanings, labels)
}

fn node_index(g: &SocialGraph) -> HashMap<&str, NodeId> {
    g.labels()
        .iter()
        .enumerate()
        .map(|(i, s)| (s.as_str(), i as NodeId))
        .collect()
}

fn item_index(items: &ItemCatalog) -> HashMap<&str, ItemId> {
    items
        .labels()
        .iter()
        .enumerate()
        .map(|(i, s)| (s.as_str(), i as ItemId))
        .collect()
}

/// Applies per-node attention bounds from `path` to `c`.
pub fn load_overrides(path: &Path, g: &SocialGraph, mut c: ConstraintSet) -> Result<ConstraintSet> {
    let file = Records::open(path)?;
    let nodes = node_index(g);
    for (line, f) in file.lines() {
        let f = file.expect_fields(line, &f, 2)?;
        let Some(&v) = nodes.get(f[0]) else {
            return Err(file.error(line, format!("unknown node {}", f[0])));
        };
        let bound: usize = f[1]
            .parse()
            .map_err(|_| file.error(line, format!("bad bound {:?}", f[1])))?;
        c = c.with_override(v, bound).map_err(|e| file.error(line, e.to_string()))?;
    }
    Ok(c)
}

/// Loads an explicit `(edge, item) -> probability` table.
pub fn load_probabilities(
    path: &Path,
    g: &SocialGraph,
    items: &ItemCatalog,
) -> Result<HashMap<(EdgeId, ItemId), f64>> {
    let file = Records::open(path)?;
    let nodes = node_index(g);
    let item_ids = item_index(items);
    let mut edge_ids = HashMap::with_capacity(g.edge_count());
    for (e, (u, v)) in g.edges().enumerate() {
        edge_ids.insert((u, v), e as EdgeId);
    }
    let mut table = HashMap::new();
    for (line, f) in file.lines() {
        let f = file.expect_fields(line, &f, 4)?;
        let (Some(&u), Some(&v)) = (nodes.get(f[0]), nodes.get(f[1])) else {
            return Err(file.error(line, format!("unknown node in edge {} -> {}", f[0], f[1])));
        };
        let Some(&e) = edge_ids.get(&(u, v)) else {
            return Err(file.error(line, format!("no edge {} -> {}", f[0], f[1])));
        };
        let Some(&i) = item_ids.get(f[2]) else {
            return Err(file.error(line, format!("unknown item {}", f[2])));
        };
        let p: f64 = f[3]
            .parse()
            .map_err(|_| file.error(line, format!("bad probability {:?}", f[3])))?;
        if !(0.0..=1.0).contains(&p) {
            return Err(file.error(line, format!("probability {p} outside [0, 1]")));
        }
        if table.insert((e, i), p).is_some() {
            return Err(file.error(line, "duplicate probability entry"));
        }
    }
    Ok(table)
}

/// Loads an assignment written by [`write_assignment`].
pub fn load_assignment(path: &Path, g: &SocialGraph, items: &ItemCatalog) -> Result<Assignment> {
    let file = Records::open(path)?;
    let nodes = node_index(g);
    let item_ids = item_index(items);
    let mut a = Assignment::new();
    for (line, f) in file.lines() {
        let f = file.expect_fields(line, &f, 2)?;
        let Some(&u) = nodes.get(f[0]) else {
            return Err(file.error(line, format!("unknown node {}", f[0])));
        };
        let Some(&i) = item_ids.get(f[1]) else {
            return Err(file.error(line, format!("unknown item {}", f[1])));
        };
        a.push(Pair::new(u, i)).map_err(|e| file.error(line, e.to_string()))?;
    }
    Ok(a)
}

pub(crate) fn write_file(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|e| Error::io(format!("writing {}", path.display()), e))
}

/// Writes `g` so that [`load_graph`] rebuilds it with the same ids.
pub fn write_graph(g: &SocialGraph, edge_path: &Path, leaning_path: &Path) -> Result<()> {
    let mut edges = String::new();
    for v in 0..g.node_count() as NodeId {
        if g.out_degree(v) == 0 && g.in_degree(v) == 0 {
            let _ = writeln!(edges, "{}", g.label(v));
        }
    }
    for (u, v) in g.edges() {
        let _ = writeln!(edges, "{}\t{}", g.label(u), g.label(v));
    }
    write_file(edge_path, &edges)?;
    let mut lean = String::new();
    for v in 0..g.node_count() as NodeId {
        let _ = writeln!(lean, "{}\t{}", g.label(v), g.leaning(v));
    }
    write_file(leaning_path, &lean)
}

pub fn write_items(items: &ItemCatalog, path: &Path) -> Result<()> {
    let mut text = String::new();
    for i in 0..items.len() as ItemId {
        let _ = writeln!(text, "{}\t{}", items.label(i), items.leaning(i));
    }
    write_file(path, &text)
}

pub fn format_assignment(a: &Assignment, g: &SocialGraph, items: &ItemCatalog) -> String {
    let mut text = String::new();
    for p in a.pairs() {
        let _ = writeln!(text, "{}\t{}", g.label(p.node), items.label(p.item));
    }
    text
}

pub fn write_assignment(a: &Assignment, g: &SocialGraph, items: &ItemCatalog, path: &Path) -> Result<()> {
    write_file(path, &format_assignment(a, g, items))
}
