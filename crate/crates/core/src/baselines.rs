//! Degree-and-leaning heuristics used as comparison points.
//!
//! All three ignore propagation probabilities. "Degree" is out-degree: a
//! seed spreads to its followers along out-edges. Ties go to the smallest
//! node id, then the smallest item id.

use std::cmp::Ordering;

use crate::model::{Assignment, ConstraintSet, ItemCatalog, NodeId, Pair, SocialGraph};

/// The available heuristics.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Baseline {
    /// Highest-degree nodes get the items closest to their own leaning.
    Close,
    /// Highest-degree nodes get the items farthest from their own leaning.
    Far,
    /// Pairs ranked globally by `out_degree(u) * |ℓ(u) - ℓ(i)|`.
    Weight,
}

impl Baseline {
    pub fn name(self) -> &'static str {
        match self {
            Baseline::Close => "close",
            Baseline::Far => "far",
            Baseline::Weight => "weight",
        }
    }

    pub fn run(self, g: &SocialGraph, items: &ItemCatalog, c: &ConstraintSet) -> BaselineOutcome {
        match self {
            Baseline::Close => baseline_close(g, items, c),
            Baseline::Far => baseline_far(g, items, c),
            Baseline::Weight => baseline_weight(g, items, c),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BaselineOutcome {
    pub assignment: Assignment,
    /// Set when the constraints admitted fewer than `k` pairs.
    pub exhausted: bool,
}

fn nodes_by_degree(g: &SocialGraph) -> Vec<NodeId> {
    let mut nodes: Vec<NodeId> = (0..g.node_count() as NodeId).collect();
    nodes.sort_by_key(|&u| (std::cmp::Reverse(g.out_degree(u)), u));
    nodes
}

/// Walks nodes by decreasing degree, giving each up to its bound of items in
/// the order `rank` prefers.
fn per_node(
    g: &SocialGraph,
    items: &ItemCatalog,
    c: &ConstraintSet,
    rank: impl Fn(f64, f64) -> Ordering,
) -> BaselineOutcome {
    let mut a = Assignment::new();
    let h = items.len();
    'nodes: for u in nodes_by_degree(g) {
        let lu = g.leaning(u);
        let mut order: Vec<u32> = (0..h as u32).collect();
        order.sort_by(|&i, &j| {
            rank((lu - items.leaning(i)).abs(), (lu - items.leaning(j)).abs()).then(i.cmp(&j))
        });
        for &i in order.iter().take(c.bound(u)) {
            if a.len() == c.k() {
                break 'nodes;
            }
            a.push(Pair::new(u, i)).expect("distinct pairs");
        }
    }
    let exhausted = a.len() < c.k();
    BaselineOutcome { assignment: a, exhausted }
}

pub fn baseline_close(g: &SocialGraph, items: &ItemCatalog, c: &ConstraintSet) -> BaselineOutcome {
    per_node(g, items, c, |x, y| x.total_cmp(&y))
}

pub fn baseline_far(g: &SocialGraph, items: &ItemCatalog, c: &ConstraintSet) -> BaselineOutcome {
    per_node(g, items, c, |x, y| y.total_cmp(&x))
}

pub fn baseline_weight(g: &SocialGraph, items: &ItemCatalog, c: &ConstraintSet) -> BaselineOutcome {
    let h = items.len();
    let mut ranked: Vec<(f64, Pair)> = (0..g.node_count() as NodeId)
        .flat_map(|u| {
            let deg = g.out_degree(u) as f64;
            let lu = g.leaning(u);
            (0..h as u32).map(move |i| (deg * (lu - items.leaning(i)).abs(), Pair::new(u, i)))
        })
        .collect();
    ranked.sort_by(|x, y| y.0.total_cmp(&x.0).then(x.1.cmp(&y.1)));

    let mut a = Assignment::new();
    let mut used = vec![0usize; g.node_count()];
    for (_, p) in ranked {
        if a.len() == c.k() {
            break;
        }
        if used[p.node as usize] < c.bound(p.node) {
            used[p.node as usize] += 1;
            a.push(p).expect("distinct pairs");
        }
    }
    let exhausted = a.len() < c.k();
    BaselineOutcome { assignment: a, exhausted }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::check_feasible;
    use proptest::prelude::*;

    fn graph(edges: &[(u32, u32)], leanings: Vec<f64>) -> SocialGraph {
        SocialGraph::new(edges, leanings).unwrap()
    }

    /// Node 0 has out-degree 5, node 1 out-degree 1.
    fn star() -> SocialGraph {
        let mut edges: Vec<(u32, u32)> = (2..7).map(|v| (0, v)).collect();
        edges.push((1, 0));
        let mut leanings = vec![0.0; 7];
        leanings[0] = 0.4;
        graph(&edges, leanings)
    }

    #[test]
    fn close_and_far_pick_by_similarity() {
        let g = star();
        let items = ItemCatalog::new(vec![0.5, -1.0]).unwrap();
        let c = ConstraintSet::new(1, 1).unwrap();
        assert_eq!(baseline_close(&g, &items, &c).assignment.pairs(), &[Pair::new(0, 0)]);
        assert_eq!(baseline_far(&g, &items, &c).assignment.pairs(), &[Pair::new(0, 1)]);
    }

    #[test]
    fn attention_bound_spills_to_next_node() {
        let g = star();
        let items = ItemCatalog::new(vec![0.5, -1.0]).unwrap();
        let out = baseline_close(&g, &items, &ConstraintSet::new(2, 1).unwrap());
        assert_eq!(out.assignment.pairs(), &[Pair::new(0, 0), Pair::new(1, 0)]);
        let out = baseline_close(&g, &items, &ConstraintSet::new(2, 2).unwrap());
        assert_eq!(out.assignment.pairs(), &[Pair::new(0, 0), Pair::new(0, 1)]);
    }

    #[test]
    fn far_ties_go_to_smallest_item() {
        let g = graph(&[], vec![0.0]);
        let items = ItemCatalog::new(vec![1.0, -1.0]).unwrap();
        let out = baseline_far(&g, &items, &ConstraintSet::new(1, 1).unwrap());
        assert_eq!(out.assignment.pairs(), &[Pair::new(0, 0)]);
    }

    #[test]
    fn weight_ranks_by_degree_times_gap() {
        let g = graph(&[(0, 2), (0, 3), (0, 4), (1, 2), (1, 3)], vec![0.0; 5]);
        let items = ItemCatalog::new(vec![1.0]).unwrap();
        let out = baseline_weight(&g, &items, &ConstraintSet::new(2, 1).unwrap());
        assert_eq!(out.assignment.pairs(), &[Pair::new(0, 0), Pair::new(1, 0)]);

        // Degree 10 with gap 0.1 scores 1.0; degree 1 with gap 2 scores 2.0.
        let mut edges: Vec<(u32, u32)> = (2..12).map(|v| (0, v)).collect();
        edges.push((1, 0));
        let mut leanings = vec![0.0; 12];
        leanings[0] = 0.9;
        leanings[1] = -1.0;
        let g = graph(&edges, leanings);
        let out = baseline_weight(&g, &ItemCatalog::new(vec![1.0]).unwrap(), &ConstraintSet::new(1, 1).unwrap());
        assert_eq!(out.assignment.pairs(), &[Pair::new(1, 0)]);
    }

    #[test]
    fn exhaustion_is_flagged() {
        let g = graph(&[(0, 1)], vec![0.0, 0.0]);
        let items = ItemCatalog::new(vec![1.0, -1.0]).unwrap();
        for b in [Baseline::Close, Baseline::Far, Baseline::Weight] {
            let out = b.run(&g, &items, &ConstraintSet::new(5, 3).unwrap());
            assert_eq!(out.assignment.len(), 4);
            assert!(out.exhausted);
        }
    }

    proptest! {
        #[test]
        fn always_feasible_and_full(
            n in 1usize..12,
            h in 1usize..5,
            k in 1usize..20,
            ku in 1usize..4,
            raw in proptest::collection::vec((0u32..12, 0u32..12), 0..40),
            seed_leanings in proptest::collection::vec(-1.0f64..=1.0, 12),
        ) {
            let edges: Vec<(u32, u32)> = raw
                .into_iter()
                .filter(|&(u, v)| (u as usize) < n && (v as usize) < n && u != v)
                .collect::<std::collections::BTreeSet<_>>()
                .into_iter()
                .collect();
            let g = graph(&edges, seed_leanings[..n].to_vec());
            let items = ItemCatalog::even_spread(h).unwrap();
            let c = ConstraintSet::new(k, ku).unwrap();
            let cap = k.min(n * ku.min(h));
            for b in [Baseline::Close, Baseline::Far, Baseline::Weight] {
                let out = b.run(&g, &items, &c);
                prop_assert!(check_feasible(&out.assignment, &c).is_feasible());
                prop_assert_eq!(out.assignment.len(), cap);
                prop_assert_eq!(out.exhausted, cap < k);
            }
        }
    }
}
