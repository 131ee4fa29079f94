//! Random follower graphs with leanings, for desk-scale experiments.

use std::collections::HashSet;

use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::Rng;
use rand_distr::Normal;

use crate::error::{Error, Result};
use crate::model::{NodeId, SocialGraph};
use crate::rng::{stream_rng, Stream};

/// How node leanings are drawn.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LeaningDist {
    Uniform,
    /// Equal mixture of normals at `±mode`, truncated to `[-1, 1]`.
    Polarized { mode: f64, sd: f64 },
}

/// How edge sources are drawn; targets are always uniform.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DegreeModel {
    Uniform,
    /// Source weights `(rank + 1)^(-1 / (exponent - 1))`, giving out-degrees
    /// with a power-law tail of the given exponent.
    PowerLaw { exponent: f64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct SynthSpec {
    pub n: usize,
    pub m: usize,
    pub leanings: LeaningDist,
    pub degrees: DegreeModel,
    /// Relative weight penalty in `[0, 1)` for edges joining nodes whose
    /// leanings have opposite signs.
    pub homophily: f64,
    pub seed: u64,
}

impl SynthSpec {
    pub fn new(n: usize, m: usize, seed: u64) -> Self {
        SynthSpec {
            n,
            m,
            leanings: LeaningDist::Uniform,
            degrees: DegreeModel::Uniform,
            homophily: 0.0,
            seed,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::Config("synthetic graph needs n >= 1".into()));
        }
        let max_edges = self.n as u128 * (self.n as u128 - 1);
        if self.m as u128 > max_edges {
            return Err(Error::Config(format!(
                "m = {} exceeds n(n-1) = {max_edges}",
                self.m
            )));
        }
        if self.m > u32::MAX as usize {
            return Err(Error::Config("too many edges".into()));
        }
        if !(0.0..1.0).contains(&self.homophily) {
            return Err(Error::Config(format!("homophily {} outside [0, 1)", self.homophily)));
        }
        match self.leanings {
            LeaningDist::Uniform => {}
            LeaningDist::Polarized { mode, sd } => {
                if !(-1.0..=1.0).contains(&mode) || !(sd > 0.0 && sd.is_finite()) {
                    return Err(Error::Config(format!("bad polarized leaning parameters ({mode}, {sd})")));
                }
            }
        }
        if let DegreeModel::PowerLaw { exponent } = self.degrees {
            if !(exponent > 1.0 && exponent.is_finite()) {
                return Err(Error::Config(format!("power-law exponent {exponent} must exceed 1")));
            }
        }
        Ok(())
    }
}

fn draw_leanings<R: Rng>(rng: &mut R, n: usize, dist: LeaningDist) -> Vec<f64> {
    match dist {
        LeaningDist::Uniform => (0..n).map(|_| rng.random_range(-1.0..=1.0)).collect(),
        LeaningDist::Polarized { mode, sd } => {
            let normal = Normal::new(0.0, sd).expect("validated sd");
            (0..n)
                .map(|_| {
                    let center = if rng.random::<bool>() { mode } else { -mode };
                    loop {
                        let x = center + normal.sample(rng);
                        if (-1.0..=1.0).contains(&x) {
                            break x;
                        }
                    }
                })
                .collect()
        }
    }
}

fn source_weights(n: usize, degrees: DegreeModel) -> Vec<f64> {
    match degrees {
        DegreeModel::Uniform => vec![1.0; n],
        DegreeModel::PowerLaw { exponent } => {
            let a = -1.0 / (exponent - 1.0);
            (0..n).map(|u| (u as f64 + 1.0).powf(a)).collect()
        }
    }
}

/// Draws a graph per `spec`. Edges are distinct and loop-free; an edge
/// `(u, v)` is drawn with probability proportional to
/// `w(u) * (1 - homophily if signs differ else 1)`, without replacement.
pub fn generate_synthetic(spec: &SynthSpec) -> Result<SocialGraph> {
    spec.validate()?;
    let mut rng = stream_rng(spec.seed, Stream::Synth, 0);
    let n = spec.n;
    let leanings = draw_leanings(&mut rng, n, spec.leanings);
    let weights = source_weights(n, spec.degrees);
    let side = |v: usize| leanings[v] >= 0.0;
    let pair_weight = |u: usize, v: usize| {
        weights[u] * if side(u) == side(v) { 1.0 } else { 1.0 - spec.homophily }
    };

    let total_pairs = n as u128 * (n as u128 - 1);
    let edges: Vec<(NodeId, NodeId)> = if 2 * spec.m as u128 > total_pairs {
        // Dense: weighted sampling without replacement over all pairs,
        // keeping the m largest keys u^(1/w).
        let mut keyed: Vec<(f64, NodeId, NodeId)> = Vec::with_capacity(total_pairs as usize);
        for u in 0..n {
            for v in (0..n).filter(|&v| v != u) {
                let key = rng.random::<f64>().powf(1.0 / pair_weight(u, v));
                keyed.push((key, u as NodeId, v as NodeId));
            }
        }
        keyed.sort_by(|a, b| b.0.total_cmp(&a.0));
        keyed.truncate(spec.m);
        keyed.into_iter().map(|(_, u, v)| (u, v)).collect()
    } else {
        let sources = WeightedIndex::new(&weights).map_err(|e| Error::Config(e.to_string()))?;
        let mut seen = HashSet::with_capacity(spec.m);
        let mut edges = Vec::with_capacity(spec.m);
        let limit = 100 * spec.m as u64 + 1_000_000;
        let mut attempts = 0u64;
        while edges.len() < spec.m {
            attempts += 1;
            if attempts > limit {
                return Err(Error::Config(format!(
                    "could not place {} distinct edges; lower m or flatten the degree model",
                    spec.m
                )));
            }
            let u = sources.sample(&mut rng);
            let v = rng.random_range(0..n);
            if u == v || (side(u) != side(v) && rng.random::<f64>() < spec.homophily) {
                continue;
            }
            if seen.insert((u as u64) << 32 | v as u64) {
                edges.push((u as NodeId, v as NodeId));
            }
        }
        edges
    };
    SocialGraph::new(&edges, leanings)
}
