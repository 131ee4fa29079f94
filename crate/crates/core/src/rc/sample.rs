use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::model::{Assignment, Instance, LeaningSpan, NodeId, Pair};
use crate::rc::{RcGenerator, RcSet};

/// Default cap on the estimated sample footprint: 4 GiB.
pub const DEFAULT_MEMORY_BUDGET: u64 = 4 << 30;

/// RC-sets generated per parallel batch before appending.
const BATCH: usize = 8192;

/// Estimated bytes per RC-set excluding members: target, leaning, offset, span.
const PER_SET_BYTES: u64 = 4 + 8 + 8 + 16;
/// A member id plus its inverted-index entry.
const PER_MEMBER_BYTES: u64 = 8;

/// A growable collection of RC-sets with an inverted `pair -> sets` index and
/// one leaning span per set for incremental greedy evaluation.
#[derive(Debug, Clone)]
pub struct RcSample {
    n: usize,
    h: usize,
    master_seed: u64,
    item_leanings: Vec<f64>,
    targets: Vec<NodeId>,
    target_leanings: Vec<f64>,
    offsets: Vec<usize>,
    members: Vec<u32>,
    index: Vec<Vec<u32>>,
    spans: Vec<LeaningSpan>,
    budget: u64,
}

impl RcSample {
    pub fn new(inst: &Instance, master_seed: u64) -> Self {
        Self::from_parts(
            inst.node_count(),
            inst.item_count(),
            master_seed,
            inst.items().leanings().to_vec(),
        )
    }

    pub fn with_memory_budget(mut self, bytes: u64) -> Self {
        self.budget = bytes;
        self
    }

    pub fn node_count(&self) -> usize {
        self.n
    }

    pub fn item_count(&self) -> usize {
        self.h
    }

    pub fn master_seed(&self) -> u64 {
        self.master_seed
    }

    /// Number of RC-sets.
    pub fn len(&self) -> usize {
        self.targets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.targets.is_empty()
    }

    /// Total number of memberships over all sets.
    pub fn total_size(&self) -> usize {
        self.members.len()
    }

    /// Estimated footprint in bytes.
    pub fn memory_bytes(&self) -> u64 {
        Self::estimate(self.n * self.h, self.len(), self.total_size())
    }

    fn estimate(pairs: usize, sets: usize, members: usize) -> u64 {
        (pairs as u64) * std::mem::size_of::<Vec<u32>>() as u64
            + sets as u64 * PER_SET_BYTES
            + members as u64 * PER_MEMBER_BYTES
    }

    pub fn set(&self, j: usize) -> RcSet {
        RcSet {
            target: self.targets[j],
            target_leaning: self.target_leanings[j],
            members: self.members(j).to_vec(),
        }
    }

    pub fn members(&self, j: usize) -> &[u32] {
        &self.members[self.offsets[j]..self.offsets[j + 1]]
    }

    pub fn span(&self, j: usize) -> LeaningSpan {
        self.spans[j]
    }

    /// Indices of the sets containing `pair`, ascending.
    pub fn sets_containing(&self, pair: Pair) -> &[u32] {
        &self.index[pair.pack(self.h) as usize]
    }

    /// Appends one set, extending the inverted index.
    pub fn push(&mut self, set: RcSet) -> Result<()> {
        let needed = Self::estimate(
            self.n * self.h,
            self.len() + 1,
            self.total_size() + set.members.len(),
        );
        if needed > self.budget {
            return Err(Error::MemoryBudget {
                needed,
                budget: self.budget,
            });
        }
        if self.len() >= u32::MAX as usize {
            return Err(Error::Invalid("sample exceeds 2^32 sets".into()));
        }
        let j = self.len() as u32;
        for &id in &set.members {
            self.index[id as usize].push(j);
        }
        self.members.extend_from_slice(&set.members);
        self.offsets.push(self.members.len());
        self.targets.push(set.target);
        self.target_leanings.push(set.target_leaning);
        self.spans.push(LeaningSpan::point(set.target_leaning));
        Ok(())
    }

    /// Generates sets with indices `len()..count` from the master seed.
    ///
    /// The content of set `j` depends only on `(master_seed, j)`.
    pub fn grow_to(&mut self, inst: &Instance, count: usize, exec: Execution) -> Result<()> {
        if inst.node_count() != self.n || inst.item_count() != self.h {
            return Err(Error::Invalid("sample and instance dimensions differ".into()));
        }
        if count > 0 && self.n == 0 {
            return Err(Error::Empty("graph"));
        }
        let master = self.master_seed;
        while self.len() < count {
            let start = self.len();
            let end = count.min(start + BATCH);
            let batch = exec.map_init(
                start..end,
                || RcGenerator::new(inst),
                |gen, j| gen.generate_indexed(master, j as u64),
            );
            for set in batch {
                self.push(set)?;
            }
        }
        Ok(())
    }

    /// Mean over sets of the span width `a` induces; ignores committed spans.
    pub fn sample_weight(&self, a: &Assignment) -> Result<f64> {
        if self.is_empty() {
            return Err(Error::Empty("sample"));
        }
        let total: f64 = self.set_weights(a)?.iter().sum();
        Ok(total / self.len() as f64)
    }

    /// Per-set weights `w(A ∩ R)` in set order.
    pub fn set_weights(&self, a: &Assignment) -> Result<Vec<f64>> {
        a.check_ids(self.n, self.h)?;
        let mut spans: Vec<LeaningSpan> =
            self.target_leanings.iter().map(|&t| LeaningSpan::point(t)).collect();
        for &p in a.pairs() {
            let x = self.item_leanings[p.item as usize];
            for &j in self.sets_containing(p) {
                spans[j as usize].extend(x);
            }
        }
        Ok(spans.iter().map(LeaningSpan::width).collect())
    }

    /// Raw (unnormalized) gain of `pair` against the committed spans.
    #[inline]
    pub(crate) fn peek_raw(&self, pair: Pair) -> f64 {
        let x = self.item_leanings[pair.item as usize];
        self.sets_containing(pair)
            .iter()
            .map(|&j| self.spans[j as usize].gain(x))
            .sum()
    }

    pub(crate) fn apply_raw(&mut self, pair: Pair) -> f64 {
        let x = self.item_leanings[pair.item as usize];
        let list = &self.index[pair.pack(self.h) as usize];
        let spans = &mut self.spans;
        list.iter().map(|&j| spans[j as usize].extend(x)).sum()
    }

    /// Marginal weight of `pair` given the committed spans, without committing.
    pub fn peek_gain(&self, pair: Pair) -> f64 {
        if self.is_empty() {
            return 0.0;
        }
        self.peek_raw(pair) / self.len() as f64
    }

    /// Commits `pair` into every set containing it and returns its marginal weight.
    pub fn apply_pair(&mut self, pair: Pair) -> f64 {
        if self.is_empty() {
            return 0.0;
        }
        self.apply_raw(pair) / self.len() as f64
    }

    /// Restores every span to its target leaning.
    pub fn reset_spans(&mut self) {
        for (s, &t) in self.spans.iter_mut().zip(&self.target_leanings) {
            *s = LeaningSpan::point(t);
        }
    }

    pub(crate) fn from_parts(
        n: usize,
        h: usize,
        master_seed: u64,
        item_leanings: Vec<f64>,
    ) -> Self {
        RcSample {
            n,
            h,
            master_seed,
            item_leanings,
            targets: Vec::new(),
            target_leanings: Vec::new(),
            offsets: vec![0],
            members: Vec::new(),
            index: vec![Vec::new(); n * h],
            spans: Vec::new(),
            budget: DEFAULT_MEMORY_BUDGET,
        }
    }

    pub(crate) fn targets(&self) -> &[NodeId] {
        &self.targets
    }

    pub(crate) fn target_leanings(&self) -> &[f64] {
        &self.target_leanings
    }
}
