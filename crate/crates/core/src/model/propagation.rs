use std::collections::HashMap;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::model::graph::{EdgeId, ItemCatalog, ItemId, NodeId, SocialGraph};

/// How item-specific edge probabilities are derived.
#[derive(Debug, Clone, PartialEq)]
pub enum PropagationModel {
    /// `beta * (1 - d / 2)` where `d` is the larger of the two endpoint-to-item leaning gaps.
    Linear { beta: f64 },
    /// `beta * exp(-gamma * d / 2)` with `d` as above.
    Exponential { beta: f64, gamma: f64 },
    /// `1 / in_degree(target)` for every item.
    WeightedCascade,
    /// Given per `(edge, item)`.
    Explicit(HashMap<(EdgeId, ItemId), f64>),
}

/// Everything `edge_probability` may look at for one colored edge.
#[derive(Debug, Clone, Copy)]
pub struct EdgeContext {
    pub edge: EdgeId,
    pub item: ItemId,
    pub source_leaning: f64,
    pub target_leaning: f64,
    pub item_leaning: f64,
    pub target_in_degree: usize,
}

impl PropagationModel {
    pub fn validate(&self) -> Result<()> {
        match *self {
            PropagationModel::Linear { beta } => check_beta(beta),
            PropagationModel::Exponential { beta, gamma } => {
                check_beta(beta)?;
                if !(gamma >= 0.0 && gamma.is_finite()) {
                    return Err(Error::Config(format!("gamma must be finite and >= 0, got {gamma}")));
                }
                Ok(())
            }
            PropagationModel::WeightedCascade => Ok(()),
            PropagationModel::Explicit(ref table) => {
                for (&(e, i), &p) in table {
                    if !(0.0..=1.0).contains(&p) {
                        return Err(Error::Config(format!(
                            "probability {p} for edge {e} item {i} outside [0, 1]"
                        )));
                    }
                }
                Ok(())
            }
        }
    }

    /// Propagation probability of one colored edge.
    pub fn edge_probability(&self, ctx: &EdgeContext) -> Result<f64> {
        let gap = || {
            (ctx.source_leaning - ctx.item_leaning)
                .abs()
                .max((ctx.target_leaning - ctx.item_leaning).abs())
        };
        let p = match *self {
            PropagationModel::Linear { beta } => beta * (1.0 - gap() / 2.0),
            PropagationModel::Exponential { beta, gamma } => beta * (-gamma * gap() / 2.0).exp(),
            PropagationModel::WeightedCascade => {
                if ctx.target_in_degree == 0 {
                    return Err(Error::Invalid("weighted cascade on a node without in-edges".into()));
                }
                1.0 / ctx.target_in_degree as f64
            }
            PropagationModel::Explicit(ref table) => {
                *table.get(&(ctx.edge, ctx.item)).ok_or_else(|| {
                    Error::Config(format!(
                        "no explicit probability for edge {} item {}",
                        ctx.edge, ctx.item
                    ))
                })?
            }
        };
        Ok(p.clamp(0.0, 1.0))
    }
}

fn check_beta(beta: f64) -> Result<()> {
    if !(beta >= 0.0 && beta.is_finite()) {
        return Err(Error::Config(format!("beta must be finite and >= 0, got {beta}")));
    }
    Ok(())
}

#[derive(Debug)]
enum Compiled {
    /// `beta * min(f[u*h+i], f[v*h+i])`: both formula modes decrease in the leaning gap,
    /// so the max-gap probability is the min over per-endpoint factors.
    NodeItemFactor { beta: f64, factor: Vec<f64> },
    PerTarget(Vec<f64>),
    PerColoredEdge(Vec<f64>),
}

#[derive(Debug)]
struct InstanceData {
    graph: SocialGraph,
    items: ItemCatalog,
    model: PropagationModel,
    compiled: Compiled,
}

/// A graph, its items and a propagation model, with probabilities ready for hot loops.
///
/// The colored multigraph is never built; probabilities are produced per
/// `(edge, item)` on demand. Cloning is cheap.
#[derive(Debug, Clone)]
pub struct Instance {
    data: Arc<InstanceData>,
}

impl Instance {
    pub fn new(graph: SocialGraph, items: ItemCatalog, model: PropagationModel) -> Result<Self> {
        model.validate()?;
        let n = graph.node_count();
        let h = items.len();
        if (n as u64) * (h as u64) > u32::MAX as u64 {
            return Err(Error::Invalid(format!("{n} nodes x {h} items exceeds the pair id space")));
        }
        let node_item = |f: &dyn Fn(f64) -> f64| -> Vec<f64> {
            let mut out = Vec::with_capacity(n * h);
            for &lu in graph.leanings() {
                for &li in items.leanings() {
                    out.push(f((lu - li).abs()));
                }
            }
            out
        };
        let compiled = match model {
            PropagationModel::Linear { beta } => Compiled::NodeItemFactor {
                beta,
                factor: node_item(&|d| 1.0 - d / 2.0),
            },
            PropagationModel::Exponential { beta, gamma } => Compiled::NodeItemFactor {
                beta,
                factor: node_item(&|d| (-gamma * d / 2.0).exp()),
            },
            PropagationModel::WeightedCascade => Compiled::PerTarget(
                (0..n as NodeId)
                    .map(|v| match graph.in_degree(v) {
                        0 => 0.0,
                        d => 1.0 / d as f64,
                    })
                    .collect(),
            ),
            PropagationModel::Explicit(ref table) => {
                let mut dense = Vec::with_capacity(graph.edge_count() * h);
                for e in 0..graph.edge_count() as EdgeId {
                    for i in 0..h as ItemId {
                        let p = table.get(&(e, i)).ok_or_else(|| {
                            Error::Config(format!("no explicit probability for edge {e} item {i}"))
                        })?;
                        dense.push(*p);
                    }
                }
                Compiled::PerColoredEdge(dense)
            }
        };
        Ok(Instance {
            data: Arc::new(InstanceData {
                graph,
                items,
                model,
                compiled,
            }),
        })
    }

    #[inline]
    pub fn graph(&self) -> &SocialGraph {
        &self.data.graph
    }

    #[inline]
    pub fn items(&self) -> &ItemCatalog {
        &self.data.items
    }

    pub fn model(&self) -> &PropagationModel {
        &self.data.model
    }

    #[inline]
    pub fn node_count(&self) -> usize {
        self.data.graph.node_count()
    }

    #[inline]
    pub fn item_count(&self) -> usize {
        self.data.items.len()
    }

    /// Probability that `item` crosses edge `edge = (source, target)`.
    #[inline]
    pub fn probability(&self, edge: EdgeId, source: NodeId, target: NodeId, item: ItemId) -> f64 {
        let h = self.data.items.len();
        match &self.data.compiled {
            Compiled::NodeItemFactor { beta, factor } => {
                let a = factor[source as usize * h + item as usize];
                let b = factor[target as usize * h + item as usize];
                (beta * a.min(b)).min(1.0)
            }
            Compiled::PerTarget(p) => p[target as usize],
            Compiled::PerColoredEdge(p) => p[edge as usize * h + item as usize],
        }
    }

    /// Public form of the probability lookup going through the model formula.
    pub fn edge_probability(&self, edge: EdgeId, item: ItemId) -> Result<f64> {
        let g = &self.data.graph;
        if edge as usize >= g.edge_count() || item as usize >= self.item_count() {
            return Err(Error::Invalid(format!("edge {edge} item {item} out of range")));
        }
        let (u, v) = g.endpoints(edge);
        self.data.model.edge_probability(&EdgeContext {
            edge,
            item,
            source_leaning: g.leaning(u),
            target_leaning: g.leaning(v),
            item_leaning: self.data.items.leaning(item),
            target_in_degree: g.in_degree(v),
        })
    }

    /// Largest `|leaning(u) - leaning(i)|` over all node-item pairs.
    pub fn max_pair_gap(&self) -> f64 {
        let items = self.data.items.leanings();
        let (lo, hi) = items
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &x| (lo.min(x), hi.max(x)));
        self.data
            .graph
            .leanings()
            .iter()
            .map(|&l| (l - lo).abs().max((hi - l).abs()))
            .fold(0.0, f64::max)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx(lu: f64, lv: f64, li: f64) -> EdgeContext {
        EdgeContext {
            edge: 0,
            item: 0,
            source_leaning: lu,
            target_leaning: lv,
            item_leaning: li,
            target_in_degree: 4,
        }
    }

    #[test]
    fn formula_examples() {
        let lin = PropagationModel::Linear { beta: 0.25 };
        assert_eq!(lin.edge_probability(&ctx(0.3, 0.3, 0.3)).unwrap(), 0.25);
        for lv in [-1.0, 0.0, 0.7, 1.0] {
            assert_eq!(lin.edge_probability(&ctx(-1.0, lv, 1.0)).unwrap(), 0.0);
        }
        let exp2 = PropagationModel::Exponential { beta: 0.25, gamma: 2.0 };
        let p = exp2.edge_probability(&ctx(-1.0, 0.0, 1.0)).unwrap();
        assert!((p - 0.25 * (-2.0f64).exp()).abs() < 1e-15);
        assert!((p - 0.03383).abs() < 1e-5);
        assert_eq!(
            PropagationModel::WeightedCascade.edge_probability(&ctx(0.0, 0.0, 0.0)).unwrap(),
            0.25
        );
    }

    #[test]
    fn explicit_missing_entry_is_config_error() {
        let m = PropagationModel::Explicit(HashMap::new());
        assert!(matches!(m.edge_probability(&ctx(0.0, 0.0, 0.0)), Err(Error::Config(_))));
        let g = SocialGraph::new(&[(0, 1)], vec![0.0, 0.0]).unwrap();
        let items = ItemCatalog::new(vec![0.0]).unwrap();
        assert!(matches!(
            Instance::new(g, items, PropagationModel::Explicit(HashMap::new())),
            Err(Error::Config(_))
        ));
    }

    #[test]
    fn compiled_matches_formula() {
        let edges = [(0, 1), (1, 2), (2, 0), (0, 2), (3, 2)];
        let g = SocialGraph::new(&edges, vec![-0.9, 0.1, 0.6, 1.0]).unwrap();
        let items = ItemCatalog::even_spread(5).unwrap();
        let mut table = HashMap::new();
        for e in 0..edges.len() as u32 {
            for i in 0..5 {
                table.insert((e, i), (e as f64 + 1.0) / (i as f64 + 7.0));
            }
        }
        for model in [
            PropagationModel::Linear { beta: 0.25 },
            PropagationModel::Exponential { beta: 0.8, gamma: 4.0 },
            PropagationModel::Exponential { beta: 3.0, gamma: 0.5 },
            PropagationModel::WeightedCascade,
            PropagationModel::Explicit(table.clone()),
        ] {
            let inst = Instance::new(g.clone(), items.clone(), model).unwrap();
            for e in 0..edges.len() as u32 {
                let (u, v) = inst.graph().endpoints(e);
                for i in 0..5 {
                    let fast = inst.probability(e, u, v, i);
                    let slow = inst.edge_probability(e, i).unwrap();
                    assert!((fast - slow).abs() < 1e-15, "{fast} vs {slow}");
                    assert!((0.0..=1.0).contains(&fast));
                }
            }
        }
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(PropagationModel::Linear { beta: -0.1 }.validate().is_err());
        assert!(PropagationModel::Exponential { beta: 0.1, gamma: f64::NAN }.validate().is_err());
    }

    #[test]
    fn max_pair_gap_brute_force() {
        let g = SocialGraph::new(&[], vec![-0.2, 0.4, 0.9]).unwrap();
        let items = ItemCatalog::new(vec![0.5, -0.6]).unwrap();
        let inst = Instance::new(g, items, PropagationModel::WeightedCascade).unwrap();
        let mut best = 0.0f64;
        for &a in inst.graph().leanings() {
            for &b in inst.items().leanings() {
                best = best.max((a - b).abs());
            }
        }
        assert!((inst.max_pair_gap() - best).abs() < 1e-15);
    }

    proptest::proptest! {
        #[test]
        fn formula_probability_bounded(
            lu in -1.0f64..=1.0, lv in -1.0f64..=1.0, li in -1.0f64..=1.0,
            beta in 0.0f64..3.0, gamma in 0.0f64..8.0, indeg in 1usize..50,
        ) {
            let c = EdgeContext { target_in_degree: indeg, ..ctx(lu, lv, li) };
            for m in [
                PropagationModel::Linear { beta },
                PropagationModel::Exponential { beta, gamma },
            ] {
                let p = m.edge_probability(&c).unwrap();
                proptest::prop_assert!((0.0..=beta.min(1.0)).contains(&p), "{m:?}: {p}");
            }
            let p = PropagationModel::WeightedCascade.edge_probability(&c).unwrap();
            proptest::prop_assert!(p > 0.0 && p <= 1.0);
        }
    }
}
