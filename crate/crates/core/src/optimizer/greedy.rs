use std::cmp::Ordering;
use std::collections::{BinaryHeap, HashMap};

use crate::error::{Error, Result};
use crate::model::{Assignment, ConstraintSet, NodeId, Pair};
use crate::rc::RcSample;

/// How [`rc_greedy`] finds the best pair each round.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum GreedyEngine {
    /// CELF lazy evaluation over a max-heap of stale gains.
    #[default]
    Lazy,
    /// Rescans every pair each round. Slow; kept as a reference.
    Naive,
}

/// What a greedy run did, in selection order.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct GreedyTrace {
    pub pairs: Vec<Pair>,
    /// Estimated marginal score of each selected pair.
    pub gains: Vec<f64>,
    /// Estimated score of the final assignment.
    pub estimate: f64,
    /// Number of RC-sets used (0 for oracle-driven greedy).
    pub theta: usize,
    /// Lower bound on the optimum found by the sampling phase, if any.
    pub lb: Option<f64>,
    /// Lower-bound iterations run by the sampling phase.
    pub sampling_iterations: usize,
    /// Set when fewer than `k` pairs could be placed.
    pub constraint_exhausted: bool,
}

/// Per-node usage tracker for the node capacity constraints.
struct Usage<'a> {
    c: &'a ConstraintSet,
    counts: HashMap<NodeId, usize>,
}

impl<'a> Usage<'a> {
    fn new(c: &'a ConstraintSet) -> Self {
        Usage {
            c,
            counts: HashMap::new(),
        }
    }

    fn has_room(&self, node: NodeId) -> bool {
        self.counts.get(&node).copied().unwrap_or(0) < self.c.bound(node)
    }

    fn take(&mut self, node: NodeId) {
        *self.counts.entry(node).or_insert(0) += 1;
    }
}

/// Greedy maximization of an arbitrary set-function `oracle` over `ground`.
///
/// Ties within a relative `1e-12` are broken toward the smallest pair; once
/// no candidate improves the score, remaining slots are filled in pair order.
pub fn exact_greedy<F>(
    mut oracle: F,
    c: &ConstraintSet,
    ground: &[Pair],
) -> Result<(Assignment, GreedyTrace)>
where
    F: FnMut(&Assignment) -> Result<f64>,
{
    let mut ground = ground.to_vec();
    ground.sort_unstable();
    ground.dedup();

    let mut a = Assignment::new();
    let mut usage = Usage::new(c);
    let mut trace = GreedyTrace::default();
    let mut current = oracle(&a)?;

    while a.len() < c.k() {
        let mut best: Option<(Pair, f64)> = None;
        for &p in &ground {
            if a.contains(p) || !usage.has_room(p.node) {
                continue;
            }
            let mut trial = a.clone();
            trial.push(p)?;
            let value = oracle(&trial)?;
            let tol = 1e-12 * current.abs().max(1.0);
            match best {
                Some((_, b)) if value <= b + tol => {}
                _ => best = Some((p, value)),
            }
        }
        let Some((p, value)) = best else { break };
        a.push(p)?;
        usage.take(p.node);
        trace.pairs.push(p);
        trace.gains.push(value - current);
        current = value;
    }
    trace.estimate = current;
    trace.constraint_exhausted = a.len() < c.k();
    Ok((a, trace))
}

/// Heap entry; greater means larger gain, then smaller pair id.
#[derive(Debug, Clone, Copy)]
struct Candidate {
    gain: f64,
    id: u32,
    round: usize,
}

impl PartialEq for Candidate {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Candidate {}

impl PartialOrd for Candidate {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Candidate {
    fn cmp(&self, other: &Self) -> Ordering {
        self.gain
            .total_cmp(&other.gain)
            .then_with(|| other.id.cmp(&self.id))
    }
}

struct Run<'a> {
    a: Assignment,
    usage: Usage<'a>,
    chosen: Vec<bool>,
    trace: GreedyTrace,
    raw_total: f64,
    h: usize,
    scale: f64,
}

impl Run<'_> {
    fn commit(&mut self, sample: &mut RcSample, id: u32) {
        let p = Pair::unpack(id, self.h);
        let raw = sample.apply_raw(p);
        self.a.push(p).expect("pair chosen once");
        self.chosen[id as usize] = true;
        self.usage.take(p.node);
        self.trace.pairs.push(p);
        self.trace.gains.push(raw * self.scale);
        self.raw_total += raw;
    }
}

/// Greedy maximization of the sample weight `W_R` under `c`.
///
/// Both engines select identical pairs: the marginal gain of a pair in each
/// set can only shrink as spans widen, so stale heap gains are true upper
/// bounds even under floating-point rounding.
pub fn rc_greedy(
    sample: &mut RcSample,
    c: &ConstraintSet,
    engine: GreedyEngine,
) -> Result<(Assignment, GreedyTrace)> {
    if sample.is_empty() {
        return Err(Error::Empty("sample"));
    }
    sample.reset_spans();
    let h = sample.item_count();
    let pairs = sample.node_count() * h;
    let scale = sample.node_count() as f64 / sample.len() as f64;

    let mut run = Run {
        a: Assignment::new(),
        usage: Usage::new(c),
        chosen: vec![false; pairs],
        trace: GreedyTrace {
            theta: sample.len(),
            ..GreedyTrace::default()
        },
        raw_total: 0.0,
        h,
        scale,
    };

    match engine {
        GreedyEngine::Lazy => {
            let mut heap: BinaryHeap<Candidate> = (0..pairs as u32)
                .filter(|&id| !sample.sets_containing(Pair::unpack(id, h)).is_empty())
                .map(|id| Candidate {
                    gain: sample.peek_raw(Pair::unpack(id, h)),
                    id,
                    round: 0,
                })
                .collect();
            let mut round = 0;
            while run.a.len() < c.k() {
                let Some(top) = heap.pop() else { break };
                let p = Pair::unpack(top.id, h);
                if !run.usage.has_room(p.node) {
                    continue;
                }
                if top.round != round {
                    heap.push(Candidate {
                        gain: sample.peek_raw(p),
                        round,
                        ..top
                    });
                    continue;
                }
                if top.gain <= 0.0 {
                    break;
                }
                run.commit(sample, top.id);
                round += 1;
            }
        }
        GreedyEngine::Naive => {
            while run.a.len() < c.k() {
                let mut best: Option<(u32, f64)> = None;
                for id in 0..pairs as u32 {
                    let p = Pair::unpack(id, h);
                    if run.chosen[id as usize] || !run.usage.has_room(p.node) {
                        continue;
                    }
                    let gain = sample.peek_raw(p);
                    if best.is_none_or(|(_, b)| gain > b) {
                        best = Some((id, gain));
                    }
                }
                match best {
                    Some((id, gain)) if gain > 0.0 => run.commit(sample, id),
                    _ => break,
                }
            }
        }
    }

    // Nothing improves the estimate any more: fill the budget in pair order.
    let mut id = 0u32;
    while run.a.len() < c.k() && (id as usize) < pairs {
        let p = Pair::unpack(id, h);
        if !run.chosen[id as usize] && run.usage.has_room(p.node) {
            run.commit(sample, id);
        }
        id += 1;
    }

    let Run { a, mut trace, raw_total, .. } = run;
    trace.estimate = raw_total * scale;
    trace.constraint_exhausted = a.len() < c.k();
    Ok((a, trace))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{Instance, ItemCatalog, PropagationModel, SocialGraph};
    use crate::rc::RcSet;

    fn bare(n: usize, items: Vec<f64>, leanings: Vec<f64>) -> Instance {
        assert_eq!(leanings.len(), n);
        Instance::new(
            SocialGraph::new(&[], leanings).unwrap(),
            ItemCatalog::new(items).unwrap(),
            PropagationModel::WeightedCascade,
        )
        .unwrap()
    }

    fn push(s: &mut RcSample, target: u32, leaning: f64, pairs: &[(u32, u32)]) {
        let h = s.item_count();
        let mut members: Vec<u32> = pairs.iter().map(|&(u, i)| Pair::new(u, i).pack(h)).collect();
        members.sort();
        s.push(RcSet {
            target,
            target_leaning: leaning,
            members,
        })
        .unwrap();
    }

    #[test]
    fn picks_widest_then_fills() {
        let inst = bare(3, vec![1.0, -1.0], vec![0.0; 3]);
        let mut s = RcSample::new(&inst, 0);
        push(&mut s, 0, 0.0, &[(0, 0), (0, 1), (1, 1)]);
        push(&mut s, 1, 0.0, &[(1, 1)]);
        for engine in [GreedyEngine::Lazy, GreedyEngine::Naive] {
            let c = ConstraintSet::new(3, 1).unwrap();
            let (a, t) = rc_greedy(&mut s, &c, engine).unwrap();
            // (1,1) covers both sets; then (0,0) widens set 0; then node 2 item 0 by id.
            assert_eq!(a.pairs(), &[Pair::new(1, 1), Pair::new(0, 0), Pair::new(2, 0)]);
            assert_eq!(t.gains, vec![3.0, 1.5, 0.0]);
            assert_eq!(t.estimate, 4.5);
            assert!(!t.constraint_exhausted);
        }
    }

    #[test]
    fn ties_break_to_smallest_pair() {
        let inst = bare(2, vec![1.0, -1.0], vec![0.0; 2]);
        let mut s = RcSample::new(&inst, 0);
        push(&mut s, 0, 0.0, &[(0, 1), (1, 0)]);
        for engine in [GreedyEngine::Lazy, GreedyEngine::Naive] {
            let (a, _) = rc_greedy(&mut s, &ConstraintSet::new(1, 1).unwrap(), engine).unwrap();
            assert_eq!(a.pairs(), &[Pair::new(0, 1)]);
        }
    }

    #[test]
    fn reports_exhausted_constraints() {
        let inst = bare(2, vec![0.5], vec![0.0; 2]);
        let mut s = RcSample::new(&inst, 0);
        push(&mut s, 0, 0.0, &[(0, 0)]);
        let (a, t) = rc_greedy(&mut s, &ConstraintSet::new(5, 1).unwrap(), GreedyEngine::Lazy).unwrap();
        assert_eq!(a.len(), 2);
        assert!(t.constraint_exhausted);
    }

    #[test]
    fn empty_sample_is_an_error() {
        let inst = bare(2, vec![0.5], vec![0.0; 2]);
        let mut s = RcSample::new(&inst, 0);
        assert!(rc_greedy(&mut s, &ConstraintSet::new(1, 1).unwrap(), GreedyEngine::Lazy).is_err());
    }

    #[test]
    fn exact_greedy_on_coverage() {
        // Weighted coverage with a known greedy path.
        let sets: [(Pair, &[u32]); 3] = [
            (Pair::new(0, 0), &[0, 1, 2]),
            (Pair::new(1, 0), &[2, 3]),
            (Pair::new(2, 0), &[3]),
        ];
        let oracle = |a: &Assignment| -> Result<f64> {
            let mut covered = std::collections::BTreeSet::new();
            for p in a.pairs() {
                let (_, s) = sets.iter().find(|(q, _)| q == p).unwrap();
                covered.extend(s.iter().copied());
            }
            Ok(covered.len() as f64)
        };
        let ground: Vec<Pair> = sets.iter().map(|(p, _)| *p).collect();
        let (a, t) = exact_greedy(oracle, &ConstraintSet::new(2, 1).unwrap(), &ground).unwrap();
        assert_eq!(a.pairs(), &[Pair::new(0, 0), Pair::new(1, 0)]);
        assert_eq!(t.gains, vec![3.0, 1.0]);
        assert_eq!(t.estimate, 4.0);
    }

    #[test]
    fn exact_greedy_respects_node_bound() {
        let ground = [Pair::new(0, 0), Pair::new(0, 1), Pair::new(1, 0)];
        let oracle = |a: &Assignment| -> Result<f64> {
            Ok(a.pairs().iter().map(|p| if p.node == 0 { 2.0 } else { 1.0 }).sum())
        };
        let (a, t) = exact_greedy(oracle, &ConstraintSet::new(3, 1).unwrap(), &ground).unwrap();
        assert_eq!(a.pairs(), &[Pair::new(0, 0), Pair::new(1, 0)]);
        assert!(t.constraint_exhausted);
    }
}
