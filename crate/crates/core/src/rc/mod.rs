//! Random reverse co-exposure (RC) sets and the sample-based score estimator.
//!
//! An RC-set holds every `(node, item)` pair that reaches a random target
//! node through item-colored edges of a random possible world. For an
//! assignment `A`, the width of the leaning span `A` induces on a set is an
//! unbiased estimate of `F(A) / n`.

mod dump;
mod sample;

pub use sample::{RcSample, DEFAULT_MEMORY_BUDGET};

use rand::Rng;

use crate::model::{EdgeId, Instance, ItemId, NodeId, Pair};
use crate::rng::{stream_rng, Stream};

/// One reverse co-exposure set.
#[derive(Debug, Clone, PartialEq)]
pub struct RcSet {
    pub target: NodeId,
    pub target_leaning: f64,
    /// Packed pair ids (`node * h + item`), sorted and distinct.
    pub members: Vec<u32>,
}

impl RcSet {
    pub fn contains(&self, pair: Pair, h: usize) -> bool {
        self.members.binary_search(&pair.pack(h)).is_ok()
    }

    pub fn pairs(&self, h: usize) -> impl Iterator<Item = Pair> + '_ {
        self.members.iter().map(move |&id| Pair::unpack(id, h))
    }
}

/// Scratch state for reverse searches on one instance.
pub struct RcGenerator {
    inst: Instance,
    visited: Vec<u32>,
    epoch: u32,
    queue: Vec<NodeId>,
}

impl RcGenerator {
    pub fn new(inst: &Instance) -> Self {
        RcGenerator {
            inst: inst.clone(),
            visited: vec![0; inst.node_count()],
            epoch: 0,
            queue: Vec::new(),
        }
    }

    /// RC-set for a uniformly random target, fully determined by `seed`.
    pub fn generate(&mut self, seed: u64) -> RcSet {
        self.generate_indexed(seed, 0)
    }

    /// The `index`-th RC-set of the sample with master seed `master`.
    pub fn generate_indexed(&mut self, master: u64, index: u64) -> RcSet {
        let mut rng = stream_rng(master, Stream::RcSet, index);
        self.generate_with(&mut rng, None, |_, _| {})
    }

    /// RC-set with the target fixed to `target`.
    pub fn generate_for_target(&mut self, target: NodeId, seed: u64) -> RcSet {
        let mut rng = stream_rng(seed, Stream::RcSet, 0);
        self.generate_with(&mut rng, Some(target), |_, _| {})
    }

    /// Core search; `on_flip(edge, item)` observes every coin flip.
    pub(crate) fn generate_with<R: Rng>(
        &mut self,
        rng: &mut R,
        target: Option<NodeId>,
        mut on_flip: impl FnMut(EdgeId, ItemId),
    ) -> RcSet {
        let inst = &self.inst;
        let g = inst.graph();
        let h = inst.item_count();
        let n = g.node_count() as NodeId;
        let v = match target {
            Some(t) => t,
            None => rng.random_range(0..n),
        };
        let mut members = Vec::new();
        for item in 0..h as ItemId {
            self.epoch = self.epoch.wrapping_add(1);
            if self.epoch == 0 {
                self.visited.fill(0);
                self.epoch = 1;
            }
            let epoch = self.epoch;
            self.queue.clear();
            self.queue.push(v);
            self.visited[v as usize] = epoch;
            let mut head = 0;
            while head < self.queue.len() {
                let w = self.queue[head];
                head += 1;
                members.push(w * h as u32 + item);
                for (e, u) in g.in_edges(w) {
                    if self.visited[u as usize] == epoch {
                        continue;
                    }
                    on_flip(e, item);
                    if rng.random::<f64>() < inst.probability(e, u, w, item) {
                        self.visited[u as usize] = epoch;
                        self.queue.push(u);
                    }
                }
            }
        }
        members.sort_unstable();
        RcSet {
            target: v,
            target_leaning: g.leaning(v),
            members,
        }
    }
}
