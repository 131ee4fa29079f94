use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::model::{Assignment, ConstraintSet, Instance};
use crate::optimizer::bounds::{lambda_bound, theta_i};
use crate::optimizer::greedy::{rc_greedy, GreedyEngine, GreedyTrace};
use crate::rc::{RcSample, DEFAULT_MEMORY_BUDGET};

/// Parameters of the sampling-based optimizer.
#[derive(Debug, Clone)]
pub struct TdemParams {
    pub constraints: ConstraintSet,
    /// Accuracy parameter, in `(0, 1)`.
    pub epsilon: f64,
    /// Confidence exponent, at least 1: failure probability is at most `n^-ell_conf`.
    pub ell_conf: f64,
    pub master_seed: u64,
    pub engine: GreedyEngine,
    pub memory_budget: u64,
    pub execution: Execution,
}

impl TdemParams {
    pub fn new(constraints: ConstraintSet, epsilon: f64, ell_conf: f64, master_seed: u64) -> Result<Self> {
        if !(epsilon > 0.0 && epsilon < 1.0) {
            return Err(Error::Config(format!("epsilon must lie in (0, 1), got {epsilon}")));
        }
        if !(ell_conf >= 1.0 && ell_conf.is_finite()) {
            return Err(Error::Config(format!("ell_conf must be at least 1, got {ell_conf}")));
        }
        Ok(TdemParams {
            constraints,
            epsilon,
            ell_conf,
            master_seed,
            engine: GreedyEngine::Lazy,
            memory_budget: DEFAULT_MEMORY_BUDGET,
            execution: Execution::default(),
        })
    }
}

/// Result of the sample-size search.
#[derive(Debug)]
pub struct SamplingOutcome {
    /// Final sample with `⌈λ / lb⌉` sets (or more, if the search already drew more).
    pub sample: RcSample,
    /// Lower bound on the optimum used to size the sample.
    pub lb: f64,
    /// Guaranteed lower bound from the widest seeded pair.
    pub lb0: f64,
    pub lambda: f64,
    /// Number of lower-bound iterations run.
    pub iterations: usize,
}

/// Draws RC-sets until the sample is large enough for the greedy guarantee.
///
/// Guesses `x = n / 2^(i-1)` for the optimum, halving until a greedy solution
/// on `θ_i` sets certifies `n W ≥ (1 + ε) x`; falls back to `lb0` otherwise.
pub fn sampling_phase(inst: &Instance, params: &TdemParams) -> Result<SamplingOutcome> {
    let n = inst.node_count();
    let h = inst.item_count();
    if n == 0 {
        return Err(Error::Empty("graph"));
    }
    let lb0 = inst.max_pair_gap();
    if lb0 <= 0.0 {
        return Err(Error::AssumptionViolated);
    }
    let k = params.constraints.k();
    let eps = params.epsilon;
    let lambda = lambda_bound(n, h, k, eps, params.ell_conf);

    let mut sample =
        RcSample::new(inst, params.master_seed).with_memory_budget(params.memory_budget);
    let mut lb = lb0;
    let rounds = (usize::BITS - n.leading_zeros()) as usize;
    let mut iterations = 0;
    for i in 1..=rounds {
        iterations = i;
        let x = 2.0 * n as f64 / 2f64.powi(i as i32);
        let theta = theta_i(n, h, k, eps, params.ell_conf, x).ceil() as usize;
        sample.grow_to(inst, theta.max(1), params.execution)?;
        let (_, trace) = rc_greedy(&mut sample, &params.constraints, params.engine)?;
        if trace.estimate >= (1.0 + eps) * x {
            lb = lb.max(trace.estimate / (1.0 + eps));
            break;
        }
    }

    let theta = (lambda / lb).ceil() as usize;
    sample.grow_to(inst, theta.max(1), params.execution)?;
    sample.reset_spans();
    Ok(SamplingOutcome {
        sample,
        lb,
        lb0,
        lambda,
        iterations,
    })
}

/// Sampling-based optimizer: sizes an RC-set sample, then runs greedy on it.
pub fn tdem(inst: &Instance, params: &TdemParams) -> Result<(Assignment, GreedyTrace)> {
    let mut outcome = sampling_phase(inst, params)?;
    let (a, mut trace) = rc_greedy(&mut outcome.sample, &params.constraints, params.engine)?;
    trace.lb = Some(outcome.lb);
    trace.sampling_iterations = outcome.iterations;
    Ok((a, trace))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{ItemCatalog, PropagationModel, SocialGraph};

    fn line(n: u32) -> Instance {
        let edges: Vec<(u32, u32)> = (0..n - 1).map(|u| (u, u + 1)).collect();
        let leanings = (0..n).map(|v| v as f64 / (n - 1) as f64 * 2.0 - 1.0).collect();
        Instance::new(
            SocialGraph::new(&edges, leanings).unwrap(),
            ItemCatalog::new(vec![-1.0, 1.0]).unwrap(),
            PropagationModel::Linear { beta: 1.0 },
        )
        .unwrap()
    }

    #[test]
    fn rejects_bad_parameters() {
        let c = ConstraintSet::new(2, 1).unwrap();
        assert!(TdemParams::new(c.clone(), 0.0, 1.0, 0).is_err());
        assert!(TdemParams::new(c.clone(), 1.0, 1.0, 0).is_err());
        assert!(TdemParams::new(c.clone(), 0.2, 0.5, 0).is_err());
        assert!(TdemParams::new(c, 0.2, 1.0, 0).is_ok());
    }

    #[test]
    fn zero_gap_violates_assumption() {
        let inst = Instance::new(
            SocialGraph::new(&[(0, 1)], vec![0.5, 0.5]).unwrap(),
            ItemCatalog::new(vec![0.5]).unwrap(),
            PropagationModel::WeightedCascade,
        )
        .unwrap();
        let p = TdemParams::new(ConstraintSet::new(1, 1).unwrap(), 0.2, 1.0, 0).unwrap();
        assert!(matches!(tdem(&inst, &p), Err(Error::AssumptionViolated)));
    }

    #[test]
    fn sample_reaches_lambda_over_lb() {
        let inst = line(12);
        let p = TdemParams::new(ConstraintSet::new(2, 1).unwrap(), 0.5, 1.0, 7).unwrap();
        let out = sampling_phase(&inst, &p).unwrap();
        assert!(out.lb >= out.lb0);
        assert!(out.sample.len() as f64 >= out.lambda / out.lb);
        assert!(out.iterations >= 1 && out.iterations <= 4);
    }

    fn explicit(edges: &[(u32, u32)], n: usize, items: Vec<f64>, p: f64) -> Instance {
        let h = items.len() as u32;
        let table = (0..edges.len() as u32)
            .flat_map(|e| (0..h).map(move |i| ((e, i), p)))
            .collect();
        Instance::new(
            SocialGraph::new(edges, vec![0.0; n]).unwrap(),
            ItemCatalog::new(items).unwrap(),
            PropagationModel::Explicit(table),
        )
        .unwrap()
    }

    #[test]
    fn high_spread_stops_after_first_guess() {
        let n = 16u32;
        let edges: Vec<(u32, u32)> = (0..n).flat_map(|u| [(u, (u + 1) % n), ((u + 1) % n, u)]).collect();
        let inst = explicit(&edges, n as usize, vec![-1.0, 1.0], 1.0);
        let p = TdemParams::new(ConstraintSet::new(2, 1).unwrap(), 0.2, 1.0, 1).unwrap();
        let out = sampling_phase(&inst, &p).unwrap();
        assert_eq!(out.iterations, 1);
        // Every node sees both extremes, so n W = 2n exactly.
        assert!((out.lb - 2.0 * n as f64 / 1.2).abs() < 1e-9);
        assert_eq!(out.sample.len(), (out.lambda / out.lb).ceil() as usize);
    }

    #[test]
    fn negligible_spread_falls_back_to_lb0() {
        let n = 16u32;
        let edges: Vec<(u32, u32)> = (0..n - 1).map(|u| (u, u + 1)).collect();
        let inst = explicit(&edges, n as usize, vec![1.0], 0.0);
        let p = TdemParams::new(ConstraintSet::new(1, 1).unwrap(), 0.2, 1.0, 2).unwrap();
        let out = sampling_phase(&inst, &p).unwrap();
        assert_eq!(out.iterations, 5);
        assert_eq!(out.lb, out.lb0);
        assert_eq!(out.lb0, 1.0);
        let last = theta_i(16, 1, 1, 0.2, 1.0, 1.0).ceil() as usize;
        assert_eq!(out.sample.len(), last.max((out.lambda / out.lb0).ceil() as usize));
    }

    #[test]
    fn deterministic_and_feasible() {
        let inst = line(10);
        let p = TdemParams::new(ConstraintSet::new(3, 1).unwrap(), 0.5, 1.0, 3).unwrap();
        let (a, t) = tdem(&inst, &p).unwrap();
        let (b, u) = tdem(&inst, &p).unwrap();
        assert_eq!(a, b);
        assert_eq!(t, u);
        assert_eq!(a.len(), 3);
        assert!(crate::model::check_feasible(&a, &p.constraints).is_feasible());
        assert!(t.lb.is_some());
    }
}
