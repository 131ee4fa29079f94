use std::collections::{HashMap, HashSet};

use crate::error::{Error, Result};
use crate::model::graph::{ItemCatalog, ItemId, NodeId, SocialGraph};

/// A `(node, item)` seed pair. Orders by node, then item.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Pair {
    pub node: NodeId,
    pub item: ItemId,
}

impl Pair {
    pub fn new(node: NodeId, item: ItemId) -> Self {
        Pair { node, item }
    }

    /// Dense id `node * h + item`; preserves the pair order.
    #[inline]
    pub fn pack(self, h: usize) -> u32 {
        self.node * h as u32 + self.item
    }

    #[inline]
    pub fn unpack(id: u32, h: usize) -> Self {
        Pair {
            node: id / h as u32,
            item: id % h as u32,
        }
    }
}

/// Seed pairs in selection order.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Assignment {
    pairs: Vec<Pair>,
    members: HashSet<Pair>,
}

impl Assignment {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = Pair>) -> Result<Self> {
        let mut a = Assignment::new();
        for p in pairs {
            a.push(p)?;
        }
        Ok(a)
    }

    pub fn push(&mut self, pair: Pair) -> Result<()> {
        if !self.members.insert(pair) {
            return Err(Error::Invalid(format!(
                "duplicate pair (node {}, item {})",
                pair.node, pair.item
            )));
        }
        self.pairs.push(pair);
        Ok(())
    }

    pub fn pairs(&self) -> &[Pair] {
        &self.pairs
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn contains(&self, pair: Pair) -> bool {
        self.members.contains(&pair)
    }

    /// Number of pairs per seed node.
    pub fn node_counts(&self) -> HashMap<NodeId, usize> {
        let mut counts = HashMap::new();
        for p in &self.pairs {
            *counts.entry(p.node).or_insert(0) += 1;
        }
        counts
    }

    /// Seed nodes of each item, indexed by item id.
    pub fn seeds_by_item(&self, h: usize) -> Vec<Vec<NodeId>> {
        let mut out = vec![Vec::new(); h];
        for p in &self.pairs {
            out[p.item as usize].push(p.node);
        }
        for seeds in &mut out {
            seeds.sort_unstable();
        }
        out
    }

    pub fn check_ids(&self, n: usize, h: usize) -> Result<()> {
        for p in &self.pairs {
            if p.node as usize >= n || p.item as usize >= h {
                return Err(Error::Invalid(format!(
                    "pair (node {}, item {}) outside {n} nodes x {h} items",
                    p.node, p.item
                )));
            }
        }
        Ok(())
    }
}

/// Budget `k` on the total number of pairs and per-node attention bounds.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConstraintSet {
    k: usize,
    default_bound: usize,
    overrides: HashMap<NodeId, usize>,
}

impl ConstraintSet {
    pub fn new(k: usize, default_bound: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::Config("k must be at least 1".into()));
        }
        if default_bound == 0 {
            return Err(Error::Config("attention bound must be at least 1".into()));
        }
        Ok(ConstraintSet {
            k,
            default_bound,
            overrides: HashMap::new(),
        })
    }

    pub fn with_override(mut self, node: NodeId, bound: usize) -> Result<Self> {
        if bound == 0 {
            return Err(Error::Config(format!("attention bound of node {node} must be at least 1")));
        }
        self.overrides.insert(node, bound);
        Ok(self)
    }

    #[inline]
    pub fn k(&self) -> usize {
        self.k
    }

    pub fn default_bound(&self) -> usize {
        self.default_bound
    }

    #[inline]
    pub fn bound(&self, node: NodeId) -> usize {
        self.overrides.get(&node).copied().unwrap_or(self.default_bound)
    }

    pub fn overrides(&self) -> &HashMap<NodeId, usize> {
        &self.overrides
    }

    /// Largest feasible assignment size over `n` nodes and `h` items.
    pub fn capacity(&self, n: usize, h: usize) -> usize {
        let per_node: usize = (0..n as NodeId).map(|u| self.bound(u).min(h)).sum();
        per_node.min(self.k)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    TooManyPairs { len: usize, k: usize },
    NodeOverBound { node: NodeId, count: usize, bound: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Feasibility {
    pub violations: Vec<Violation>,
}

impl Feasibility {
    pub fn is_feasible(&self) -> bool {
        self.violations.is_empty()
    }
}

pub fn check_feasible(a: &Assignment, c: &ConstraintSet) -> Feasibility {
    let mut violations = Vec::new();
    if a.len() > c.k() {
        violations.push(Violation::TooManyPairs { len: a.len(), k: c.k() });
    }
    let mut over: Vec<_> = a
        .node_counts()
        .into_iter()
        .filter(|&(node, count)| count > c.bound(node))
        .map(|(node, count)| Violation::NodeOverBound {
            node,
            count,
            bound: c.bound(node),
        })
        .collect();
    over.sort_by_key(|v| match v {
        Violation::NodeOverBound { node, .. } => *node,
        Violation::TooManyPairs { .. } => 0,
    });
    violations.extend(over);
    Feasibility { violations }
}

/// Summary statistics of the seed pairs themselves.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AssignmentStats {
    /// Mean immediate exposure `|leaning(i) - leaning(u)|` over the pairs.
    pub seed_exposure: f64,
    /// Mean seed out-degree divided by the maximum out-degree in the graph.
    pub normalized_degree: f64,
    /// Mean raw seed out-degree.
    pub mean_degree: f64,
    pub node_leaning_sq: f64,
    pub item_leaning_sq: f64,
    pub distinct_items: usize,
    /// `distinct_items / h`.
    pub distinct_item_fraction: f64,
}

pub fn assignment_stats(
    a: &Assignment,
    g: &SocialGraph,
    items: &ItemCatalog,
) -> Result<AssignmentStats> {
    if a.is_empty() {
        return Err(Error::Empty("assignment"));
    }
    a.check_ids(g.node_count(), items.len())?;
    let len = a.len() as f64;
    let max_deg = g.max_out_degree();
    let mut exposure = 0.0;
    let mut degree = 0.0;
    let mut node_sq = 0.0;
    let mut item_sq = 0.0;
    let mut distinct = HashSet::new();
    for p in a.pairs() {
        let lu = g.leaning(p.node);
        let li = items.leaning(p.item);
        exposure += (li - lu).abs();
        degree += g.out_degree(p.node) as f64;
        node_sq += lu * lu;
        item_sq += li * li;
        distinct.insert(p.item);
    }
    let mean_degree = degree / len;
    Ok(AssignmentStats {
        seed_exposure: exposure / len,
        normalized_degree: if max_deg == 0 { 0.0 } else { mean_degree / max_deg as f64 },
        mean_degree,
        node_leaning_sq: node_sq / len,
        item_leaning_sq: item_sq / len,
        distinct_items: distinct.len(),
        distinct_item_fraction: distinct.len() as f64 / items.len() as f64,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn pairs(raw: &[(u32, u32)]) -> Assignment {
        Assignment::from_pairs(raw.iter().map(|&(u, i)| Pair::new(u, i))).unwrap()
    }

    #[test]
    fn feasibility_examples() {
        let a = pairs(&[(0, 1), (0, 2)]);
        let f = check_feasible(&a, &ConstraintSet::new(5, 1).unwrap());
        assert!(!f.is_feasible());
        assert_eq!(
            f.violations,
            vec![Violation::NodeOverBound { node: 0, count: 2, bound: 1 }]
        );
        assert!(check_feasible(&a, &ConstraintSet::new(2, 2).unwrap()).is_feasible());

        let b = pairs(&[(0, 1), (1, 2)]);
        let f = check_feasible(&b, &ConstraintSet::new(1, 3).unwrap());
        assert_eq!(f.violations, vec![Violation::TooManyPairs { len: 2, k: 1 }]);
    }

    #[test]
    fn per_node_override() {
        let c = ConstraintSet::new(10, 1).unwrap().with_override(3, 4).unwrap();
        assert_eq!(c.bound(3), 4);
        assert_eq!(c.bound(0), 1);
        assert!(check_feasible(&pairs(&[(3, 0), (3, 1), (3, 2)]), &c).is_feasible());
        assert_eq!(c.capacity(4, 2), 5);
        assert!(ConstraintSet::new(0, 1).is_err());
        assert!(ConstraintSet::new(1, 0).is_err());
    }

    #[test]
    fn duplicate_pairs_rejected() {
        let mut a = pairs(&[(0, 1)]);
        assert!(a.push(Pair::new(0, 1)).is_err());
        assert_eq!(a.len(), 1);
    }

    #[test]
    fn pack_preserves_order() {
        let h = 7;
        let mut ps: Vec<Pair> = (0..5).flat_map(|u| (0..7).map(move |i| Pair::new(u, i))).collect();
        ps.reverse();
        let mut ids: Vec<u32> = ps.iter().map(|p| p.pack(h)).collect();
        ps.sort();
        ids.sort();
        let back: Vec<Pair> = ids.iter().map(|&x| Pair::unpack(x, h)).collect();
        assert_eq!(back, ps);
    }

    #[test]
    fn stats_single_pair() {
        let g = SocialGraph::new(&[(0, 1), (0, 2)], vec![0.0, 0.3, 0.3]).unwrap();
        let items = ItemCatalog::new(vec![1.0, 0.0]).unwrap();
        let s = assignment_stats(&pairs(&[(0, 0)]), &g, &items).unwrap();
        assert_eq!(s.seed_exposure, 1.0);
        assert_eq!(s.node_leaning_sq, 0.0);
        assert_eq!(s.item_leaning_sq, 1.0);
        assert_eq!(s.normalized_degree, 1.0);
        assert_eq!(s.distinct_items, 1);
        assert_eq!(s.distinct_item_fraction, 0.5);
    }

    #[test]
    fn stats_two_pairs() {
        let g = SocialGraph::new(&[], vec![0.5, -0.5]).unwrap();
        let items = ItemCatalog::new(vec![0.5, 0.5]).unwrap();
        let s = assignment_stats(&pairs(&[(0, 0), (1, 1)]), &g, &items).unwrap();
        assert_eq!(s.seed_exposure, 0.5);
        assert_eq!(s.node_leaning_sq, 0.25);
        assert_eq!(s.item_leaning_sq, 0.25);
        assert_eq!(s.normalized_degree, 0.0);
        assert_eq!(s.distinct_items, 2);
    }

    #[test]
    fn stats_empty_is_error() {
        let g = SocialGraph::new(&[], vec![0.0]).unwrap();
        let items = ItemCatalog::new(vec![0.0]).unwrap();
        assert!(matches!(
            assignment_stats(&Assignment::new(), &g, &items),
            Err(Error::Empty(_))
        ));
    }

    proptest! {
        #[test]
        fn feasibility_is_downward_closed(raw in prop::collection::btree_set((0u32..5, 0u32..4), 0..12),
                                          k in 1usize..8, ku in 1usize..4, keep in prop::collection::vec(any::<bool>(), 12)) {
            let a = pairs(&raw.iter().copied().collect::<Vec<_>>());
            let c = ConstraintSet::new(k, ku).unwrap();
            if check_feasible(&a, &c).is_feasible() {
                let sub = pairs(&raw.iter().zip(&keep).filter(|(_, &k)| k).map(|(p, _)| *p).collect::<Vec<_>>());
                prop_assert!(check_feasible(&sub, &c).is_feasible());
            }
        }
    }
}
