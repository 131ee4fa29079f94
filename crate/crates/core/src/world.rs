//! Ground-truth evaluation of the expected diversity exposure score.
//!
//! [`exact_score`] enumerates every possible world of the uncertain colored
//! edges; [`mc_score`] averages independent cascade simulations.

use rand::Rng;

use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::model::{Assignment, EdgeId, Instance, ItemId, LeaningSpan, NodeId};
use crate::rng::{stream_rng, Stream};

/// Default cap on uncertain colored edges for exact enumeration (2^20 worlds).
pub const DEFAULT_EXACT_CAP: usize = 20;

/// Items each node ends up exposed to.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExposureOutcome {
    exposed: Vec<Vec<ItemId>>,
}

impl ExposureOutcome {
    pub fn items(&self, v: NodeId) -> &[ItemId] {
        &self.exposed[v as usize]
    }

    /// Diversity exposure level of `v`.
    pub fn level(&self, inst: &Instance, v: NodeId) -> f64 {
        let mut span = LeaningSpan::point(inst.graph().leaning(v));
        for &i in self.items(v) {
            span.extend(inst.items().leaning(i));
        }
        span.width()
    }

    /// Sum of exposure levels over all nodes.
    pub fn score(&self, inst: &Instance) -> f64 {
        (0..self.exposed.len() as NodeId).map(|v| self.level(inst, v)).sum()
    }
}

/// Reusable buffers for forward propagation on one graph.
pub(crate) struct Cascade {
    reached: Vec<u32>,
    epoch: u32,
    queue: Vec<NodeId>,
    span: Vec<LeaningSpan>,
    span_epoch: Vec<u32>,
    trial: u32,
    touched: Vec<NodeId>,
}

impl Cascade {
    pub(crate) fn new(n: usize) -> Self {
        Cascade {
            reached: vec![0; n],
            epoch: 0,
            queue: Vec::new(),
            span: vec![LeaningSpan::point(0.0); n],
            span_epoch: vec![0; n],
            trial: 0,
            touched: Vec::new(),
        }
    }

    fn next_epoch(&mut self) {
        self.epoch = self.epoch.wrapping_add(1);
        if self.epoch == 0 {
            self.reached.fill(0);
            self.epoch = 1;
        }
    }

    /// Breadth-first spread of one item from `seeds`. `live` is asked about each
    /// colored edge at most once, and only for edges leaving a reached node
    /// toward a node not yet reached.
    fn spread(
        &mut self,
        inst: &Instance,
        seeds: &[NodeId],
        mut live: impl FnMut(EdgeId, NodeId, NodeId) -> bool,
        mut on_reach: impl FnMut(NodeId),
    ) {
        self.next_epoch();
        self.queue.clear();
        for &s in seeds {
            if self.reached[s as usize] != self.epoch {
                self.reached[s as usize] = self.epoch;
                self.queue.push(s);
                on_reach(s);
            }
        }
        let g = inst.graph();
        let mut head = 0;
        while head < self.queue.len() {
            let u = self.queue[head];
            head += 1;
            for (e, v) in g.out_edges(u) {
                if self.reached[v as usize] != self.epoch && live(e, u, v) {
                    self.reached[v as usize] = self.epoch;
                    self.queue.push(v);
                    on_reach(v);
                }
            }
        }
    }

    /// Propagates every seeded item in one world and returns `sum_v f_v`.
    /// Nodes with a positive level are left in `touched` with their spans.
    pub(crate) fn run_world(
        &mut self,
        inst: &Instance,
        seeds_by_item: &[Vec<NodeId>],
        mut live: impl FnMut(EdgeId, NodeId, NodeId, ItemId) -> bool,
    ) -> f64 {
        self.trial = self.trial.wrapping_add(1);
        if self.trial == 0 {
            self.span_epoch.fill(0);
            self.trial = 1;
        }
        self.touched.clear();
        let trial = self.trial;
        let leanings = inst.graph().leanings();
        for (item, seeds) in seeds_by_item.iter().enumerate() {
            if seeds.is_empty() {
                continue;
            }
            let item = item as ItemId;
            let x = inst.items().leaning(item);
            let mut span = std::mem::take(&mut self.span);
            let mut span_epoch = std::mem::take(&mut self.span_epoch);
            let mut touched = std::mem::take(&mut self.touched);
            self.spread(
                inst,
                seeds,
                |e, u, v| live(e, u, v, item),
                |v| {
                    let s = &mut span[v as usize];
                    if span_epoch[v as usize] != trial {
                        span_epoch[v as usize] = trial;
                        *s = LeaningSpan::point(leanings[v as usize]);
                        touched.push(v);
                    }
                    s.extend(x);
                },
            );
            self.span = span;
            self.span_epoch = span_epoch;
            self.touched = touched;
        }
        self.touched.iter().map(|&v| self.span[v as usize].width()).sum()
    }

    pub(crate) fn touched_levels(&self) -> impl Iterator<Item = (NodeId, f64)> + '_ {
        self.touched.iter().map(|&v| (v, self.span[v as usize].width()))
    }
}

/// One independent-cascade run of `a` with randomness from `rng_seed`.
pub fn simulate_cascade(inst: &Instance, a: &Assignment, rng_seed: u64) -> Result<ExposureOutcome> {
    let n = inst.node_count();
    let h = inst.item_count();
    a.check_ids(n, h)?;
    let mut rng = stream_rng(rng_seed, Stream::Trial, 0);
    let mut exposed = vec![Vec::new(); n];
    let mut cascade = Cascade::new(n);
    for (item, seeds) in a.seeds_by_item(h).iter().enumerate() {
        if seeds.is_empty() {
            continue;
        }
        let item = item as ItemId;
        cascade.spread(
            inst,
            seeds,
            |e, u, v| rng.random::<f64>() < inst.probability(e, u, v, item),
            |v| exposed[v as usize].push(item),
        );
    }
    Ok(ExposureOutcome { exposed })
}

/// Mean and standard error of a Monte-Carlo estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McEstimate {
    pub mean: f64,
    pub std_error: f64,
    pub trials: usize,
}

/// A Monte-Carlo estimate with per-node mean exposure levels.
#[derive(Debug, Clone, PartialEq)]
pub struct McEvaluation {
    pub estimate: McEstimate,
    pub node_levels: Vec<f64>,
}

#[derive(Clone)]
struct Moments {
    count: f64,
    mean: f64,
    m2: f64,
}

impl Moments {
    fn push(&mut self, x: f64) {
        self.count += 1.0;
        let d = x - self.mean;
        self.mean += d / self.count;
        self.m2 += d * (x - self.mean);
    }

    fn merge(&mut self, o: &Moments) {
        if o.count == 0.0 {
            return;
        }
        let count = self.count + o.count;
        let d = o.mean - self.mean;
        self.mean += d * o.count / count;
        self.m2 += o.m2 + d * d * self.count * o.count / count;
        self.count = count;
    }
}

/// Trials per work unit; fixed by the trial count alone so results do not
/// depend on the thread count.
fn chunk_len(trials: usize) -> usize {
    (trials / 64).max(64)
}

fn mc_run(
    inst: &Instance,
    a: &Assignment,
    trials: usize,
    rng_seed: u64,
    exec: Execution,
    per_node: bool,
) -> Result<McEvaluation> {
    if trials == 0 {
        return Err(Error::Config("trials must be at least 1".into()));
    }
    let n = inst.node_count();
    let h = inst.item_count();
    a.check_ids(n, h)?;
    let seeds = a.seeds_by_item(h);
    let chunk = chunk_len(trials);
    let chunks = trials.div_ceil(chunk);
    let parts = exec.map_init(
        0..chunks,
        || Cascade::new(n),
        |cascade, c| {
            let mut m = Moments { count: 0.0, mean: 0.0, m2: 0.0 };
            let mut levels = if per_node { vec![0.0; n] } else { Vec::new() };
            for t in c * chunk..((c + 1) * chunk).min(trials) {
                let mut rng = stream_rng(rng_seed, Stream::Trial, t as u64);
                let score = cascade.run_world(inst, &seeds, |e, u, v, i| {
                    rng.random::<f64>() < inst.probability(e, u, v, i)
                });
                m.push(score);
                if per_node {
                    for (v, w) in cascade.touched_levels() {
                        levels[v as usize] += w;
                    }
                }
            }
            (m, levels)
        },
    );
    let mut total = Moments { count: 0.0, mean: 0.0, m2: 0.0 };
    let mut node_levels = if per_node { vec![0.0; n] } else { Vec::new() };
    for (m, levels) in &parts {
        total.merge(m);
        for (acc, x) in node_levels.iter_mut().zip(levels) {
            *acc += x;
        }
    }
    for x in &mut node_levels {
        *x /= trials as f64;
    }
    let std_error = if trials > 1 {
        (total.m2.max(0.0) / (trials as f64 - 1.0)).sqrt() / (trials as f64).sqrt()
    } else {
        0.0
    };
    Ok(McEvaluation {
        estimate: McEstimate {
            mean: total.mean,
            std_error,
            trials,
        },
        node_levels,
    })
}

/// Monte-Carlo estimate of the expected score over `trials` simulated worlds.
pub fn mc_score(
    inst: &Instance,
    a: &Assignment,
    trials: usize,
    rng_seed: u64,
    exec: Execution,
) -> Result<McEstimate> {
    Ok(mc_run(inst, a, trials, rng_seed, exec, false)?.estimate)
}

/// Like [`mc_score`], also returning each node's mean exposure level.
pub fn mc_evaluate(
    inst: &Instance,
    a: &Assignment,
    trials: usize,
    rng_seed: u64,
    exec: Execution,
) -> Result<McEvaluation> {
    mc_run(inst, a, trials, rng_seed, exec, true)
}

/// A deterministic realization of the colored edges, indexed `edge * h + item`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PossibleWorld {
    live: Vec<bool>,
    h: usize,
}

impl PossibleWorld {
    #[inline]
    pub fn is_live(&self, edge: EdgeId, item: ItemId) -> bool {
        self.live[edge as usize * self.h + item as usize]
    }

    /// Items reaching each node when `a` is seeded in this world.
    pub fn exposure(&self, inst: &Instance, a: &Assignment) -> Result<ExposureOutcome> {
        let n = inst.node_count();
        let h = inst.item_count();
        a.check_ids(n, h)?;
        let mut exposed = vec![Vec::new(); n];
        let mut cascade = Cascade::new(n);
        for (item, seeds) in a.seeds_by_item(h).iter().enumerate() {
            let item = item as ItemId;
            cascade.spread(
                inst,
                seeds,
                |e, _, _| self.is_live(e, item),
                |v| exposed[v as usize].push(item),
            );
        }
        Ok(exposed_sorted(exposed))
    }
}

fn exposed_sorted(mut exposed: Vec<Vec<ItemId>>) -> ExposureOutcome {
    for v in &mut exposed {
        v.sort_unstable();
    }
    ExposureOutcome { exposed }
}

/// All possible worlds over the colored edges of `items`, with their probabilities.
///
/// Edges with probability 0 or 1 are fixed; the rest are enumerated in
/// `(edge, item)` order, with world index bit `j` giving the state of the
/// `j`-th uncertain edge.
pub struct PossibleWorlds {
    template: PossibleWorld,
    uncertain: Vec<(usize, f64)>,
}

impl PossibleWorlds {
    pub fn new(inst: &Instance, items: &[ItemId], cap: usize) -> Result<Self> {
        let h = inst.item_count();
        let g = inst.graph();
        let mut relevant = vec![false; h];
        for &i in items {
            relevant[i as usize] = true;
        }
        let mut live = vec![false; g.edge_count() * h];
        let mut uncertain = Vec::new();
        for u in 0..g.node_count() as NodeId {
            for (e, v) in g.out_edges(u) {
                for i in 0..h as ItemId {
                    if !relevant[i as usize] {
                        continue;
                    }
                    let p = inst.probability(e, u, v, i);
                    let slot = e as usize * h + i as usize;
                    if p >= 1.0 {
                        live[slot] = true;
                    } else if p > 0.0 {
                        uncertain.push((slot, p));
                    }
                }
            }
        }
        // out_edges visits edges in id order, so `uncertain` is sorted by (edge, item).
        if uncertain.len() > cap || uncertain.len() >= usize::BITS as usize {
            return Err(Error::TooLarge {
                uncertain: uncertain.len(),
                cap,
            });
        }
        Ok(PossibleWorlds {
            template: PossibleWorld { live, h },
            uncertain,
        })
    }

    pub fn uncertain_count(&self) -> usize {
        self.uncertain.len()
    }

    pub fn world_count(&self) -> usize {
        1usize << self.uncertain.len()
    }

    /// Calls `f(probability, world)` for every world.
    pub fn for_each(&self, mut f: impl FnMut(f64, &PossibleWorld)) {
        let mut world = self.template.clone();
        for mask in 0..self.world_count() {
            let mut prob = 1.0;
            for (j, &(slot, p)) in self.uncertain.iter().enumerate() {
                let on = mask >> j & 1 == 1;
                world.live[slot] = on;
                prob *= if on { p } else { 1.0 - p };
            }
            f(prob, &world);
        }
    }
}

/// Neumaier-compensated running sum.
#[derive(Default)]
struct CompensatedSum {
    sum: f64,
    carry: f64,
}

impl CompensatedSum {
    fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.carry += (self.sum - t) + x;
        } else {
            self.carry += (x - t) + self.sum;
        }
        self.sum = t;
    }

    fn value(&self) -> f64 {
        self.sum + self.carry
    }
}

/// Exact expected score by enumerating every possible world.
pub fn exact_score(inst: &Instance, a: &Assignment) -> Result<f64> {
    exact_score_capped(inst, a, DEFAULT_EXACT_CAP)
}

pub fn exact_score_capped(inst: &Instance, a: &Assignment, cap: usize) -> Result<f64> {
    let n = inst.node_count();
    let h = inst.item_count();
    a.check_ids(n, h)?;
    if a.is_empty() {
        return Ok(0.0);
    }
    let seeds = a.seeds_by_item(h);
    let items: Vec<ItemId> = (0..h as ItemId).filter(|&i| !seeds[i as usize].is_empty()).collect();
    let worlds = PossibleWorlds::new(inst, &items, cap)?;
    let mut cascade = Cascade::new(n);
    let mut total = CompensatedSum::default();
    worlds.for_each(|prob, world| {
        let score = cascade.run_world(inst, &seeds, |e, _, _, i| world.is_live(e, i));
        total.add(prob * score);
    });
    Ok(total.value())
}
