use crate::error::{Error, Result};
use crate::model::leaning::validate_leaning;

pub type NodeId = u32;
pub type ItemId = u32;
pub type EdgeId = u32;

/// Directed follower graph in compressed adjacency form.
///
/// An edge `(u, v)` means `v` follows `u`, so content flows from `u` to `v`.
/// Edge ids are positions in the out-adjacency; the in-adjacency carries the
/// same ids so explicit per-edge data can be looked up from either side.
#[derive(Debug, Clone, PartialEq)]
pub struct SocialGraph {
    out_offsets: Vec<usize>,
    out_targets: Vec<NodeId>,
    in_offsets: Vec<usize>,
    in_sources: Vec<NodeId>,
    in_edge_ids: Vec<EdgeId>,
    leanings: Vec<f64>,
    labels: Vec<String>,
}

impl SocialGraph {
    /// Builds a graph over nodes `0..leanings.len()`, labelled by their index.
    pub fn new(edges: &[(NodeId, NodeId)], leanings: Vec<f64>) -> Result<Self> {
        let labels = (0..leanings.len()).map(|i| i.to_string()).collect();
        Self::with_labels(edges, leanings, labels)
    }

    pub fn with_labels(
        edges: &[(NodeId, NodeId)],
        leanings: Vec<f64>,
        labels: Vec<String>,
    ) -> Result<Self> {
        let n = leanings.len();
        if labels.len() != n {
            return Err(Error::Invalid(format!("{} labels for {n} nodes", labels.len())));
        }
        if edges.len() > EdgeId::MAX as usize {
            return Err(Error::Invalid("too many edges".into()));
        }
        let leanings = leanings
            .into_iter()
            .map(validate_leaning)
            .collect::<Result<Vec<_>>>()?;
        for &(u, v) in edges {
            if u as usize >= n || v as usize >= n {
                return Err(Error::Invalid(format!("edge ({u}, {v}) outside node range 0..{n}")));
            }
        }

        // Stable counting sort by source, then by target for the reverse side.
        let mut order: Vec<usize> = (0..edges.len()).collect();
        order.sort_by_key(|&e| edges[e].0);
        let mut out_offsets = vec![0usize; n + 1];
        for &(u, _) in edges {
            out_offsets[u as usize + 1] += 1;
        }
        for i in 0..n {
            out_offsets[i + 1] += out_offsets[i];
        }
        let out_targets: Vec<NodeId> = order.iter().map(|&e| edges[e].1).collect();

        let mut in_offsets = vec![0usize; n + 1];
        for &v in &out_targets {
            in_offsets[v as usize + 1] += 1;
        }
        for i in 0..n {
            in_offsets[i + 1] += in_offsets[i];
        }
        let mut cursor = in_offsets.clone();
        let mut in_sources = vec![0; out_targets.len()];
        let mut in_edge_ids = vec![0; out_targets.len()];
        for u in 0..n {
            let range = out_offsets[u]..out_offsets[u + 1];
            for (e, &v) in range.clone().zip(&out_targets[range]) {
                let v = v as usize;
                in_sources[cursor[v]] = u as NodeId;
                in_edge_ids[cursor[v]] = e as EdgeId;
                cursor[v] += 1;
            }
        }

        Ok(SocialGraph {
            out_offsets,
            out_targets,
            in_offsets,
            in_sources,
            in_edge_ids,
            leanings,
            labels,
        })
    }

    #[inline]
    pub fn node_count(&self) -> usize {
        self.leanings.len()
    }

    #[inline]
    pub fn edge_count(&self) -> usize {
        self.out_targets.len()
    }

    #[inline]
    pub fn leaning(&self, v: NodeId) -> f64 {
        self.leanings[v as usize]
    }

    pub fn leanings(&self) -> &[f64] {
        &self.leanings
    }

    pub fn label(&self, v: NodeId) -> &str {
        &self.labels[v as usize]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    #[inline]
    pub fn out_degree(&self, u: NodeId) -> usize {
        self.out_offsets[u as usize + 1] - self.out_offsets[u as usize]
    }

    #[inline]
    pub fn in_degree(&self, v: NodeId) -> usize {
        self.in_offsets[v as usize + 1] - self.in_offsets[v as usize]
    }

    /// Out-edges of `u` as `(edge id, target)`.
    #[inline]
    pub fn out_edges(&self, u: NodeId) -> impl Iterator<Item = (EdgeId, NodeId)> + '_ {
        let range = self.out_offsets[u as usize]..self.out_offsets[u as usize + 1];
        range.map(move |e| (e as EdgeId, self.out_targets[e]))
    }

    /// In-edges of `v` as `(edge id, source)`.
    #[inline]
    pub fn in_edges(&self, v: NodeId) -> impl Iterator<Item = (EdgeId, NodeId)> + '_ {
        let range = self.in_offsets[v as usize]..self.in_offsets[v as usize + 1];
        range.map(move |j| (self.in_edge_ids[j], self.in_sources[j]))
    }

    /// Source and target of edge `e`.
    pub fn endpoints(&self, e: EdgeId) -> (NodeId, NodeId) {
        let e = e as usize;
        let u = self.out_offsets.partition_point(|&off| off <= e) - 1;
        (u as NodeId, self.out_targets[e])
    }

    /// All edges in edge-id order.
    pub fn edges(&self) -> impl Iterator<Item = (NodeId, NodeId)> + '_ {
        (0..self.node_count() as NodeId)
            .flat_map(move |u| self.out_edges(u).map(move |(_, v)| (u, v)))
    }

    pub fn max_out_degree(&self) -> usize {
        (0..self.node_count() as NodeId)
            .map(|u| self.out_degree(u))
            .max()
            .unwrap_or(0)
    }
}

/// The pool of items that can be seeded, each with a leaning.
#[derive(Debug, Clone, PartialEq)]
pub struct ItemCatalog {
    leanings: Vec<f64>,
    labels: Vec<String>,
}

impl ItemCatalog {
    pub fn new(leanings: Vec<f64>) -> Result<Self> {
        let labels = (0..leanings.len()).map(|i| i.to_string()).collect();
        Self::with_labels(leanings, labels)
    }

    pub fn with_labels(leanings: Vec<f64>, labels: Vec<String>) -> Result<Self> {
        if leanings.is_empty() {
            return Err(Error::Invalid("item catalog needs at least one item".into()));
        }
        if labels.len() != leanings.len() {
            return Err(Error::Invalid("item label count mismatch".into()));
        }
        let leanings = leanings
            .into_iter()
            .map(validate_leaning)
            .collect::<Result<Vec<_>>>()?;
        Ok(ItemCatalog { leanings, labels })
    }

    /// `h` items spread evenly over `[-1, 1]`; a single item sits at 0.
    pub fn even_spread(h: usize) -> Result<Self> {
        if h == 0 {
            return Err(Error::Invalid("item catalog needs at least one item".into()));
        }
        let leanings = if h == 1 {
            vec![0.0]
        } else {
            (0..h)
                .map(|i| -1.0 + 2.0 * i as f64 / (h - 1) as f64)
                .collect()
        };
        Self::new(leanings)
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.leanings.len()
    }

    pub fn is_empty(&self) -> bool {
        self.leanings.is_empty()
    }

    #[inline]
    pub fn leaning(&self, i: ItemId) -> f64 {
        self.leanings[i as usize]
    }

    pub fn leanings(&self) -> &[f64] {
        &self.leanings
    }

    pub fn label(&self, i: ItemId) -> &str {
        &self.labels[i as usize]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }
}
