//! Small random instances and brute-force oracles written independently of
//! the library's cascade, enumeration and RC-set code.

#![allow(dead_code)]

use std::collections::{BTreeSet, HashMap};

use exposure_core::model::{
    Assignment, ConstraintSet, Instance, ItemCatalog, Pair, PropagationModel, SocialGraph,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

#[derive(Debug, Clone, Copy)]
pub enum Kind {
    Linear(f64),
    Exp(f64, f64),
    Cascade,
    /// Each colored edge independently 0, 1 or uniform in (0, 1).
    Explicit,
}

/// A tiny instance together with the raw data the oracles work from.
pub struct Tiny {
    pub n: usize,
    pub h: usize,
    /// Sorted by source, so positions are the library's edge ids.
    pub edges: Vec<(u32, u32)>,
    pub node_leanings: Vec<f64>,
    pub item_leanings: Vec<f64>,
    /// `probs[e][i]`, computed here from the formulas.
    pub probs: Vec<Vec<f64>>,
    pub inst: Instance,
}

impl Tiny {
    pub fn uncertain(&self) -> usize {
        self.probs.iter().flatten().filter(|&&p| p > 0.0 && p < 1.0).count()
    }

    pub fn ground(&self) -> Vec<Pair> {
        (0..self.n as u32)
            .flat_map(|u| (0..self.h as u32).map(move |i| Pair::new(u, i)))
            .collect()
    }
}

fn formula(kind: Kind, lu: f64, lv: f64, li: f64, indeg: usize) -> f64 {
    let gap = (lu - li).abs().max((lv - li).abs());
    let p = match kind {
        Kind::Linear(beta) => beta * (1.0 - gap / 2.0),
        Kind::Exp(beta, gamma) => beta * (-gamma * gap / 2.0).exp(),
        Kind::Cascade => 1.0 / indeg as f64,
        Kind::Explicit => unreachable!(),
    };
    p.clamp(0.0, 1.0)
}

/// Builds an instance over the given data; explicit probabilities are drawn from `rng`.
pub fn build(
    edges: Vec<(u32, u32)>,
    node_leanings: Vec<f64>,
    item_leanings: Vec<f64>,
    kind: Kind,
    rng: &mut ChaCha8Rng,
) -> Tiny {
    let n = node_leanings.len();
    let h = item_leanings.len();
    let mut edges = edges;
    edges.sort();
    let mut indeg = vec![0usize; n];
    for &(_, v) in &edges {
        indeg[v as usize] += 1;
    }
    let mut table = HashMap::new();
    let probs: Vec<Vec<f64>> = edges
        .iter()
        .enumerate()
        .map(|(e, &(u, v))| {
            (0..h)
                .map(|i| {
                    let p = match kind {
                        Kind::Explicit => match rng.random_range(0..4) {
                            0 => 0.0,
                            1 => 1.0,
                            _ => rng.random_range(0.05..0.95),
                        },
                        _ => formula(
                            kind,
                            node_leanings[u as usize],
                            node_leanings[v as usize],
                            item_leanings[i],
                            indeg[v as usize],
                        ),
                    };
                    table.insert((e as u32, i as u32), p);
                    p
                })
                .collect()
        })
        .collect();
    let model = match kind {
        Kind::Linear(beta) => PropagationModel::Linear { beta },
        Kind::Exp(beta, gamma) => PropagationModel::Exponential { beta, gamma },
        Kind::Cascade => PropagationModel::WeightedCascade,
        Kind::Explicit => PropagationModel::Explicit(table),
    };
    let inst = Instance::new(
        SocialGraph::new(&edges, node_leanings.clone()).unwrap(),
        ItemCatalog::new(item_leanings.clone()).unwrap(),
        model,
    )
    .unwrap();
    Tiny {
        n,
        h,
        edges,
        node_leanings,
        item_leanings,
        probs,
        inst,
    }
}

pub fn random_kind(rng: &mut ChaCha8Rng) -> Kind {
    match rng.random_range(0..4) {
        0 => Kind::Linear(rng.random_range(0.3..1.0)),
        1 => Kind::Exp(rng.random_range(0.3..1.0), [2.0, 4.0][rng.random_range(0..2)]),
        2 => Kind::Cascade,
        _ => Kind::Explicit,
    }
}

fn leaning(rng: &mut ChaCha8Rng) -> f64 {
    // Mix exact extremes and midpoints in with continuous values.
    match rng.random_range(0..6) {
        0 => -1.0,
        1 => 1.0,
        2 => 0.0,
        _ => rng.random_range(-1.0..=1.0),
    }
}

/// Random instance with `n` in `2..=max_n`, `h` in `1..=max_h` and at most
/// `max_colored` colored edges (edges times items).
pub fn random_tiny(rng: &mut ChaCha8Rng, max_n: usize, max_h: usize, max_colored: usize) -> Tiny {
    let n = rng.random_range(2..=max_n);
    let h = rng.random_range(1..=max_h);
    let m_cap = (max_colored / h).min(n * (n - 1));
    let m = rng.random_range(0..=m_cap);
    let mut edges = BTreeSet::new();
    while edges.len() < m {
        let u = rng.random_range(0..n as u32);
        let v = rng.random_range(0..n as u32);
        if u != v {
            edges.insert((u, v));
        }
    }
    let nodes = (0..n).map(|_| leaning(rng)).collect();
    let items = (0..h).map(|_| leaning(rng)).collect();
    let kind = random_kind(rng);
    build(edges.into_iter().collect(), nodes, items, kind, rng)
}

pub fn random_assignment(rng: &mut ChaCha8Rng, n: usize, h: usize, max_len: usize) -> Assignment {
    let len = rng.random_range(0..=max_len.min(n * h));
    let mut pairs = BTreeSet::new();
    while pairs.len() < len {
        pairs.insert(Pair::new(rng.random_range(0..n as u32), rng.random_range(0..h as u32)));
    }
    Assignment::from_pairs(pairs).unwrap()
}

/// Neumaier-compensated accumulator.
#[derive(Default)]
pub struct Sum {
    s: f64,
    c: f64,
}

impl Sum {
    pub fn add(&mut self, x: f64) {
        let t = self.s + x;
        if self.s.abs() >= x.abs() {
            self.c += (self.s - t) + x;
        } else {
            self.c += (x - t) + self.s;
        }
        self.s = t;
    }

    pub fn value(&self) -> f64 {
        self.s + self.c
    }
}

/// Expected diversity score by enumerating every world over all colored
/// edges, with per-item reachability from a Warshall transitive closure.
pub fn brute_force_score(t: &Tiny, seeds: &[Pair]) -> f64 {
    let mut uncertain = Vec::new();
    let mut certain = Vec::new();
    for (e, row) in t.probs.iter().enumerate() {
        for (i, &p) in row.iter().enumerate() {
            if p >= 1.0 {
                certain.push((e, i));
            } else if p > 0.0 {
                uncertain.push((e, i, p));
            }
        }
    }
    assert!(uncertain.len() <= 24, "too many uncertain edges for brute force");
    let mut total = Sum::default();
    for mask in 0u32..(1u32 << uncertain.len()) {
        let mut prob = 1.0;
        // reach[i][u] is a bitset of nodes reachable from u with item i.
        let mut reach = vec![vec![0u64; t.n]; t.h];
        for item in reach.iter_mut() {
            for (u, row) in item.iter_mut().enumerate() {
                *row = 1 << u;
            }
        }
        for &(e, i) in &certain {
            let (u, v) = t.edges[e];
            reach[i][u as usize] |= 1 << v;
        }
        for (bit, &(e, i, p)) in uncertain.iter().enumerate() {
            if mask >> bit & 1 == 1 {
                prob *= p;
                let (u, v) = t.edges[e];
                reach[i][u as usize] |= 1 << v;
            } else {
                prob *= 1.0 - p;
            }
        }
        for item in reach.iter_mut() {
            for k in 0..t.n {
                for u in 0..t.n {
                    if item[u] >> k & 1 == 1 {
                        item[u] |= item[k];
                    }
                }
            }
        }
        let mut world = 0.0;
        for v in 0..t.n {
            let (mut lo, mut hi) = (t.node_leanings[v], t.node_leanings[v]);
            for s in seeds {
                if reach[s.item as usize][s.node as usize] >> v & 1 == 1 {
                    let x = t.item_leanings[s.item as usize];
                    lo = lo.min(x);
                    hi = hi.max(x);
                }
            }
            world += hi - lo;
        }
        total.add(prob * world);
    }
    total.value()
}

/// Expected number of nodes reached from `seeds` when every edge carries
/// the item-0 probability, by recursive enumeration and DFS.
pub fn brute_force_spread(t: &Tiny, seeds: &[u32]) -> f64 {
    fn recurse(t: &Tiny, seeds: &[u32], e: usize, live: &mut Vec<bool>, prob: f64, acc: &mut Sum) {
        if prob == 0.0 {
            return;
        }
        if e == t.edges.len() {
            let mut seen = vec![false; t.n];
            let mut stack: Vec<u32> = seeds.to_vec();
            while let Some(u) = stack.pop() {
                if std::mem::replace(&mut seen[u as usize], true) {
                    continue;
                }
                for (j, &(a, b)) in t.edges.iter().enumerate() {
                    if a == u && live[j] && !seen[b as usize] {
                        stack.push(b);
                    }
                }
            }
            acc.add(prob * seen.iter().filter(|&&s| s).count() as f64);
            return;
        }
        let p = t.probs[e][0];
        live.push(true);
        recurse(t, seeds, e + 1, live, prob * p, acc);
        live.pop();
        live.push(false);
        recurse(t, seeds, e + 1, live, prob * (1.0 - p), acc);
        live.pop();
    }
    let mut acc = Sum::default();
    recurse(t, seeds, 0, &mut Vec::new(), 1.0, &mut acc);
    acc.value()
}

/// Best score over every feasible subset of `ground`.
pub fn brute_force_opt(
    ground: &[Pair],
    c: &ConstraintSet,
    mut score: impl FnMut(&Assignment) -> f64,
) -> (f64, Assignment) {
    fn recurse(
        ground: &[Pair],
        start: usize,
        c: &ConstraintSet,
        chosen: &mut Vec<Pair>,
        best: &mut (f64, Vec<Pair>),
        score: &mut dyn FnMut(&Assignment) -> f64,
    ) {
        let a = Assignment::from_pairs(chosen.iter().copied()).unwrap();
        let s = score(&a);
        if s > best.0 {
            *best = (s, chosen.clone());
        }
        if chosen.len() == c.k() {
            return;
        }
        for j in start..ground.len() {
            let p = ground[j];
            let used = chosen.iter().filter(|q| q.node == p.node).count();
            if used < c.bound(p.node) {
                chosen.push(p);
                recurse(ground, j + 1, c, chosen, best, score);
                chosen.pop();
            }
        }
    }
    let mut best = (f64::NEG_INFINITY, Vec::new());
    recurse(ground, 0, c, &mut Vec::new(), &mut best, &mut score);
    (best.0, Assignment::from_pairs(best.1).unwrap())
}
