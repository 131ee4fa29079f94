//! Experiment configuration, driver and report files.
//!
//! A configuration is flat `key=value` text. Every run is scored by the same
//! Monte-Carlo evaluator under `eval_seed`, which is disjoint from the
//! optimizer's seed, so reported scores carry no selection bias.

use std::collections::BTreeMap;
use std::fmt::{self, Write as _};
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::time::Instant;

use crate::baselines::Baseline;
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::io;
use crate::model::{
    assignment_stats, Assignment, AssignmentStats, ConstraintSet, Instance, ItemCatalog, ItemId,
    NodeId, Pair, PropagationModel,
};
use crate::optimizer::{exact_greedy, rc_greedy, sampling_phase, GreedyEngine, TdemParams};
use crate::world::{exact_score, mc_evaluate, mc_score, McEvaluation};

pub const REPORT_VERSION: u32 = 1;
const REPORT_FORMAT: &str = "exposure-report";

/// Environment variable that overrides `out_dir`.
pub const OUT_DIR_ENV: &str = "EXPOSURE_OUT_DIR";

/// Every recognised configuration key.
pub const CONFIG_KEYS: &[&str] = &[
    "graph",
    "node_leanings",
    "items",
    "item_leanings",
    "prob_mode",
    "beta",
    "gamma",
    "prob_path",
    "k",
    "ku",
    "ku_overrides",
    "epsilon",
    "ell_conf",
    "seed",
    "eval_seed",
    "algorithm",
    "trials",
    "greedy_trials",
    "engine",
    "execution",
    "memory_budget_mb",
    "threads",
    "out_dir",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Algorithm {
    Tdem,
    ExactGreedy,
    McGreedy,
    Close,
    Far,
    Weight,
}

impl Algorithm {
    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Tdem => "tdem",
            Algorithm::ExactGreedy => "exact-greedy",
            Algorithm::McGreedy => "mc-greedy",
            Algorithm::Close => "close",
            Algorithm::Far => "far",
            Algorithm::Weight => "weight",
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "tdem" => Algorithm::Tdem,
            "exact-greedy" => Algorithm::ExactGreedy,
            "mc-greedy" => Algorithm::McGreedy,
            "close" => Algorithm::Close,
            "far" => Algorithm::Far,
            "weight" => Algorithm::Weight,
            _ => return Err(Error::Config(format!("unknown algorithm {s:?}"))),
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum ItemSource {
    /// `h` items evenly spread over `[-1, 1]`.
    EvenSpread(usize),
    File(PathBuf),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProbMode {
    Linear,
    Exponential,
    WeightedCascade,
    Explicit,
}

impl FromStr for ProbMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "linear" => ProbMode::Linear,
            "exp" | "exponential" => ProbMode::Exponential,
            "wc" | "weighted-cascade" => ProbMode::WeightedCascade,
            "explicit" => ProbMode::Explicit,
            _ => return Err(Error::Config(format!("unknown prob_mode {s:?}"))),
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub graph: PathBuf,
    pub node_leanings: PathBuf,
    pub items: ItemSource,
    pub prob_mode: ProbMode,
    pub beta: f64,
    pub gamma: f64,
    pub prob_path: Option<PathBuf>,
    pub k: usize,
    pub ku: usize,
    pub ku_overrides: Option<PathBuf>,
    pub epsilon: f64,
    pub ell_conf: f64,
    pub seed: u64,
    pub eval_seed: u64,
    pub algorithm: Algorithm,
    /// Monte-Carlo trials for the final evaluation.
    pub trials: usize,
    /// Monte-Carlo trials per oracle call of `mc-greedy`.
    pub greedy_trials: usize,
    pub engine: GreedyEngine,
    pub execution: Execution,
    pub memory_budget_mb: u64,
    /// Worker threads; 0 uses the ambient pool.
    pub threads: usize,
    pub out_dir: PathBuf,
}

/// Parses `key=value` lines; `#` starts a comment line.
pub fn parse_key_values(text: &str, origin: &Path) -> Result<BTreeMap<String, String>> {
    let mut map = BTreeMap::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let err = |message: String| Error::Parse {
            path: origin.to_path_buf(),
            line: i + 1,
            message,
        };
        let Some((key, value)) = line.split_once('=') else {
            return Err(err(format!("expected key=value, found {line:?}")));
        };
        let key = key.trim().to_string();
        if map.insert(key.clone(), value.trim().to_string()).is_some() {
            return Err(err(format!("duplicate key {key}")));
        }
    }
    Ok(map)
}

fn parse_value<T: FromStr>(map: &BTreeMap<String, String>, key: &str) -> Result<Option<T>> {
    map.get(key)
        .map(|v| {
            v.parse()
                .map_err(|_| Error::Config(format!("invalid value {v:?} for {key}")))
        })
        .transpose()
}

fn required<T: FromStr>(map: &BTreeMap<String, String>, key: &str) -> Result<T> {
    parse_value(map, key)?.ok_or_else(|| Error::Config(format!("missing required key {key}")))
}

impl ExperimentConfig {
    pub fn from_map(map: &BTreeMap<String, String>) -> Result<Self> {
        if let Some(key) = map.keys().find(|k| !CONFIG_KEYS.contains(&k.as_str())) {
            return Err(Error::Config(format!("unknown key {key}")));
        }
        let items = match (map.get("items"), map.get("item_leanings")) {
            (Some(_), Some(_)) => {
                return Err(Error::Config("set only one of items and item_leanings".into()))
            }
            (None, Some(p)) => ItemSource::File(p.into()),
            (Some(_), None) => ItemSource::EvenSpread(required(map, "items")?),
            (None, None) => return Err(Error::Config("missing items or item_leanings".into())),
        };
        let seed: u64 = parse_value(map, "seed")?.unwrap_or(0);
        let engine = match map.get("engine").map(String::as_str) {
            None | Some("lazy") => GreedyEngine::Lazy,
            Some("naive") => GreedyEngine::Naive,
            Some(other) => return Err(Error::Config(format!("unknown engine {other:?}"))),
        };
        let execution = match map.get("execution").map(String::as_str) {
            None | Some("parallel") => Execution::Parallel,
            Some("sequential") => Execution::Sequential,
            Some(other) => return Err(Error::Config(format!("unknown execution {other:?}"))),
        };
        let cfg = ExperimentConfig {
            graph: required::<String>(map, "graph")?.into(),
            node_leanings: required::<String>(map, "node_leanings")?.into(),
            items,
            prob_mode: parse_value(map, "prob_mode")?.unwrap_or(ProbMode::Exponential),
            beta: parse_value(map, "beta")?.unwrap_or(0.25),
            gamma: parse_value(map, "gamma")?.unwrap_or(2.0),
            prob_path: map.get("prob_path").map(PathBuf::from),
            k: required(map, "k")?,
            ku: parse_value(map, "ku")?.unwrap_or(1),
            ku_overrides: map.get("ku_overrides").map(PathBuf::from),
            epsilon: parse_value(map, "epsilon")?.unwrap_or(0.2),
            ell_conf: parse_value(map, "ell_conf")?.unwrap_or(1.0),
            seed,
            eval_seed: parse_value(map, "eval_seed")?.unwrap_or(!seed),
            algorithm: parse_value(map, "algorithm")?.unwrap_or(Algorithm::Tdem),
            trials: parse_value(map, "trials")?.unwrap_or(10_000),
            greedy_trials: parse_value(map, "greedy_trials")?.unwrap_or(1_000),
            engine,
            execution,
            memory_budget_mb: parse_value(map, "memory_budget_mb")?.unwrap_or(4096),
            threads: parse_value(map, "threads")?.unwrap_or(0),
            out_dir: map.get("out_dir").map_or_else(|| PathBuf::from("out"), PathBuf::from),
        };
        cfg.validate()?;
        Ok(cfg)
    }

    fn validate(&self) -> Result<()> {
        if self.eval_seed == self.seed {
            return Err(Error::Config("eval_seed must differ from seed".into()));
        }
        if self.trials == 0 || self.greedy_trials == 0 {
            return Err(Error::Config("trial counts must be at least 1".into()));
        }
        if self.prob_mode == ProbMode::Explicit && self.prob_path.is_none() {
            return Err(Error::Config("prob_mode=explicit needs prob_path".into()));
        }
        if let ItemSource::EvenSpread(0) = self.items {
            return Err(Error::Config("items must be at least 1".into()));
        }
        ConstraintSet::new(self.k, self.ku)?;
        TdemParams::new(ConstraintSet::new(self.k, self.ku)?, self.epsilon, self.ell_conf, self.seed)?;
        self.model().validate()
    }

    /// Reads a config file, applies `overrides` on top, then the
    /// output-directory environment override.
    pub fn load(path: &Path, overrides: &[(String, String)]) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::io(format!("reading {}", path.display()), e))?;
        let mut map = parse_key_values(&text, path)?;
        for (k, v) in overrides {
            map.insert(k.clone(), v.clone());
        }
        if let Ok(dir) = std::env::var(OUT_DIR_ENV) {
            if !dir.is_empty() {
                map.insert("out_dir".into(), dir);
            }
        }
        Self::from_map(&map)
    }

    fn model(&self) -> PropagationModel {
        match self.prob_mode {
            ProbMode::Linear => PropagationModel::Linear { beta: self.beta },
            ProbMode::Exponential => PropagationModel::Exponential {
                beta: self.beta,
                gamma: self.gamma,
            },
            ProbMode::WeightedCascade => PropagationModel::WeightedCascade,
            ProbMode::Explicit => PropagationModel::Explicit(Default::default()),
        }
    }

    pub fn tdem_params(&self, constraints: ConstraintSet) -> Result<TdemParams> {
        let mut p = TdemParams::new(constraints, self.epsilon, self.ell_conf, self.seed)?;
        p.engine = self.engine;
        p.execution = self.execution;
        p.memory_budget = self.memory_budget_mb.saturating_mul(1 << 20);
        Ok(p)
    }

    /// Loads the instance and constraints the config describes.
    pub fn build_instance(&self) -> Result<(Instance, ConstraintSet)> {
        let graph = io::load_graph(&self.graph, &self.node_leanings)?;
        let items = match &self.items {
            ItemSource::EvenSpread(h) => ItemCatalog::even_spread(*h)?,
            ItemSource::File(p) => io::load_items(p)?,
        };
        let mut constraints = ConstraintSet::new(self.k, self.ku)?;
        if let Some(p) = &self.ku_overrides {
            constraints = io::load_overrides(p, &graph, constraints)?;
        }
        let model = match (self.prob_mode, &self.prob_path) {
            (ProbMode::Explicit, Some(p)) => {
                PropagationModel::Explicit(io::load_probabilities(p, &graph, &items)?)
            }
            _ => self.model(),
        };
        Ok((Instance::new(graph, items, model)?, constraints))
    }

    /// Runs `f` inside a pool with the configured thread count.
    pub fn with_pool<T: Send>(&self, f: impl FnOnce() -> T + Send) -> Result<T> {
        #[cfg(feature = "parallel")]
        if self.threads > 0 {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(self.threads)
                .build()
                .map_err(|e| Error::Config(format!("thread pool: {e}")))?;
            return Ok(pool.install(f));
        }
        Ok(f())
    }
}

/// Outcome of one experiment. Everything except `runtime_secs` and
/// `node_levels` is written to the structured report.
#[derive(Debug, Clone, PartialEq)]
pub struct ScoreReport {
    pub algorithm: Algorithm,
    pub nodes: usize,
    pub edges: usize,
    pub items: usize,
    pub k: usize,
    pub ku: usize,
    pub epsilon: f64,
    pub ell_conf: f64,
    pub seed: u64,
    pub eval_seed: u64,
    pub trials: usize,
    /// Monte-Carlo estimate of the expected score.
    pub score: f64,
    pub std_error: f64,
    /// `score / nodes`.
    pub mean_level: f64,
    /// The optimizer's own estimate, when it has one.
    pub optimizer_estimate: Option<f64>,
    /// RC-sets in the final sample (0 if none were drawn).
    pub theta: usize,
    pub lb: Option<f64>,
    pub sampling_iterations: usize,
    pub constraint_exhausted: bool,
    /// Estimated footprint of the RC-set sample.
    pub peak_memory_bytes: u64,
    pub stats: Option<AssignmentStats>,
    /// Seed pairs as `(node label, item label)` in selection order.
    pub assignment: Vec<(String, String)>,
    /// `(node label, leaning, mean exposure level)` per node.
    pub node_levels: Vec<(String, f64, f64)>,
    pub runtime_secs: f64,
}

struct Selection {
    assignment: Assignment,
    estimate: Option<f64>,
    theta: usize,
    lb: Option<f64>,
    iterations: usize,
    exhausted: bool,
    memory: u64,
}

fn select(cfg: &ExperimentConfig, inst: &Instance, c: &ConstraintSet) -> Result<Selection> {
    let plain = |assignment: Assignment, exhausted: bool| Selection {
        assignment,
        estimate: None,
        theta: 0,
        lb: None,
        iterations: 0,
        exhausted,
        memory: 0,
    };
    let ground = || -> Vec<Pair> {
        (0..inst.node_count() as NodeId)
            .flat_map(|u| (0..inst.item_count() as ItemId).map(move |i| Pair::new(u, i)))
            .collect()
    };
    let baseline = |b: Baseline| {
        let out = b.run(inst.graph(), inst.items(), c);
        plain(out.assignment, out.exhausted)
    };
    Ok(match cfg.algorithm {
        Algorithm::Tdem => {
            let params = cfg.tdem_params(c.clone())?;
            let mut outcome = sampling_phase(inst, &params)?;
            let memory = outcome.sample.memory_bytes();
            let (a, trace) = rc_greedy(&mut outcome.sample, c, params.engine)?;
            Selection {
                assignment: a,
                estimate: Some(trace.estimate),
                theta: trace.theta,
                lb: Some(outcome.lb),
                iterations: outcome.iterations,
                exhausted: trace.constraint_exhausted,
                memory,
            }
        }
        Algorithm::ExactGreedy => {
            let (a, trace) = exact_greedy(|a| exact_score(inst, a), c, &ground())?;
            Selection {
                estimate: Some(trace.estimate),
                ..plain(a, trace.constraint_exhausted)
            }
        }
        Algorithm::McGreedy => {
            let oracle = |a: &Assignment| {
                Ok(mc_score(inst, a, cfg.greedy_trials, cfg.seed, cfg.execution)?.mean)
            };
            let (a, trace) = exact_greedy(oracle, c, &ground())?;
            Selection {
                estimate: Some(trace.estimate),
                ..plain(a, trace.constraint_exhausted)
            }
        }
        Algorithm::Close => baseline(Baseline::Close),
        Algorithm::Far => baseline(Baseline::Far),
        Algorithm::Weight => baseline(Baseline::Weight),
    })
}

/// Scores `a` with the configured evaluator.
pub fn evaluate(cfg: &ExperimentConfig, inst: &Instance, a: &Assignment) -> Result<McEvaluation> {
    mc_evaluate(inst, a, cfg.trials, cfg.eval_seed, cfg.execution)
}

/// Runs the configured algorithm and scores its assignment.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ScoreReport> {
    cfg.with_pool(|| run_in_pool(cfg))?
}

fn run_in_pool(cfg: &ExperimentConfig) -> Result<ScoreReport> {
    let start = Instant::now();
    let (inst, c) = cfg.build_instance()?;
    let sel = select(cfg, &inst, &c)?;
    let eval = evaluate(cfg, &inst, &sel.assignment)?;
    let g = inst.graph();
    let items = inst.items();
    let stats = if sel.assignment.is_empty() {
        None
    } else {
        Some(assignment_stats(&sel.assignment, g, items)?)
    };
    Ok(ScoreReport {
        algorithm: cfg.algorithm,
        nodes: g.node_count(),
        edges: g.edge_count(),
        items: items.len(),
        k: cfg.k,
        ku: cfg.ku,
        epsilon: cfg.epsilon,
        ell_conf: cfg.ell_conf,
        seed: cfg.seed,
        eval_seed: cfg.eval_seed,
        trials: cfg.trials,
        score: eval.estimate.mean,
        std_error: eval.estimate.std_error,
        mean_level: eval.estimate.mean / g.node_count() as f64,
        optimizer_estimate: sel.estimate,
        theta: sel.theta,
        lb: sel.lb,
        sampling_iterations: sel.iterations,
        constraint_exhausted: sel.exhausted,
        peak_memory_bytes: sel.memory,
        stats,
        assignment: sel
            .assignment
            .pairs()
            .iter()
            .map(|p| (g.label(p.node).to_string(), items.label(p.item).to_string()))
            .collect(),
        node_levels: (0..g.node_count() as NodeId)
            .map(|v| (g.label(v).to_string(), g.leaning(v), eval.node_levels[v as usize]))
            .collect(),
        runtime_secs: start.elapsed().as_secs_f64(),
    })
}

/// Re-scores an assignment given by labels, e.g. one read back from a report.
pub fn rescore(cfg: &ExperimentConfig, pairs: &[(String, String)]) -> Result<McEvaluation> {
    cfg.with_pool(|| {
        let (inst, _) = cfg.build_instance()?;
        let g = inst.graph();
        let items = inst.items();
        let mut a = Assignment::new();
        for (u, i) in pairs {
            let node = g.labels().iter().position(|l| l == u);
            let item = items.labels().iter().position(|l| l == i);
            let (Some(node), Some(item)) = (node, item) else {
                return Err(Error::Config(format!("pair ({u}, {i}) not in instance")));
            };
            a.push(Pair::new(node as NodeId, item as ItemId))?;
        }
        evaluate(cfg, &inst, &a)
    })?
}

fn opt(x: Option<f64>) -> String {
    x.map_or_else(|| "none".into(), |v| v.to_string())
}

impl ScoreReport {
    /// The versioned `key=value` report; byte-identical across reruns.
    pub fn to_structured(&self) -> String {
        let mut s = String::new();
        let mut kv = |k: &str, v: String| {
            let _ = writeln!(s, "{k}={v}");
        };
        kv("format", REPORT_FORMAT.into());
        kv("version", REPORT_VERSION.to_string());
        kv("algorithm", self.algorithm.to_string());
        kv("nodes", self.nodes.to_string());
        kv("edges", self.edges.to_string());
        kv("items", self.items.to_string());
        kv("k", self.k.to_string());
        kv("ku", self.ku.to_string());
        kv("epsilon", self.epsilon.to_string());
        kv("ell_conf", self.ell_conf.to_string());
        kv("seed", self.seed.to_string());
        kv("eval_seed", self.eval_seed.to_string());
        kv("trials", self.trials.to_string());
        kv("score", self.score.to_string());
        kv("std_error", self.std_error.to_string());
        kv("mean_level", self.mean_level.to_string());
        kv("optimizer_estimate", opt(self.optimizer_estimate));
        kv("theta", self.theta.to_string());
        kv("lb", opt(self.lb));
        kv("sampling_iterations", self.sampling_iterations.to_string());
        kv("constraint_exhausted", self.constraint_exhausted.to_string());
        kv("peak_memory_bytes", self.peak_memory_bytes.to_string());
        if let Some(st) = &self.stats {
            kv("stats.seed_exposure", st.seed_exposure.to_string());
            kv("stats.normalized_degree", st.normalized_degree.to_string());
            kv("stats.mean_degree", st.mean_degree.to_string());
            kv("stats.node_leaning_sq", st.node_leaning_sq.to_string());
            kv("stats.item_leaning_sq", st.item_leaning_sq.to_string());
            kv("stats.distinct_items", st.distinct_items.to_string());
            kv("stats.distinct_item_fraction", st.distinct_item_fraction.to_string());
        }
        kv("pairs", self.assignment.len().to_string());
        for (u, i) in &self.assignment {
            kv("pair", format!("{u}\t{i}"));
        }
        s
    }

    /// Parses [`to_structured`](Self::to_structured) output. Runtime and
    /// per-node levels are not part of the report and come back empty.
    pub fn parse(text: &str, origin: &Path) -> Result<Self> {
        let mut map = BTreeMap::new();
        let mut assignment = Vec::new();
        let bad = |line: usize, message: String| Error::Parse {
            path: origin.to_path_buf(),
            line,
            message,
        };
        for (i, line) in text.lines().enumerate() {
            let Some((k, v)) = line.split_once('=') else {
                return Err(bad(i + 1, format!("expected key=value, found {line:?}")));
            };
            if k == "pair" {
                let Some((u, item)) = v.split_once('\t') else {
                    return Err(bad(i + 1, "pair needs node<TAB>item".into()));
                };
                assignment.push((u.to_string(), item.to_string()));
            } else if map.insert(k.to_string(), v.to_string()).is_some() {
                return Err(bad(i + 1, format!("duplicate key {k}")));
            }
        }
        let field = |k: &str| -> Result<String> {
            map.get(k)
                .cloned()
                .ok_or_else(|| bad(0, format!("report lacks {k}")))
        };
        fn num<T: FromStr>(k: &str, v: &str, origin: &Path) -> Result<T> {
            v.parse().map_err(|_| Error::Parse {
                path: origin.to_path_buf(),
                line: 0,
                message: format!("bad value {v:?} for {k}"),
            })
        }
        macro_rules! n {
            ($k:literal) => {
                num($k, &field($k)?, origin)?
            };
        }
        let optional = |k: &str| -> Result<Option<f64>> {
            let v = field(k)?;
            if v == "none" {
                Ok(None)
            } else {
                num(k, &v, origin).map(Some)
            }
        };
        if field("format")? != REPORT_FORMAT {
            return Err(bad(1, "not an exposure report".into()));
        }
        let version: u32 = n!("version");
        if version != REPORT_VERSION {
            return Err(bad(2, format!("unsupported report version {version}")));
        }
        let stats = if map.contains_key("stats.seed_exposure") {
            Some(AssignmentStats {
                seed_exposure: n!("stats.seed_exposure"),
                normalized_degree: n!("stats.normalized_degree"),
                mean_degree: n!("stats.mean_degree"),
                node_leaning_sq: n!("stats.node_leaning_sq"),
                item_leaning_sq: n!("stats.item_leaning_sq"),
                distinct_items: n!("stats.distinct_items"),
                distinct_item_fraction: n!("stats.distinct_item_fraction"),
            })
        } else {
            None
        };
        let pairs: usize = n!("pairs");
        if pairs != assignment.len() {
            return Err(bad(0, format!("report lists {} of {pairs} pairs", assignment.len())));
        }
        Ok(ScoreReport {
            algorithm: field("algorithm")?.parse()?,
            nodes: n!("nodes"),
            edges: n!("edges"),
            items: n!("items"),
            k: n!("k"),
            ku: n!("ku"),
            epsilon: n!("epsilon"),
            ell_conf: n!("ell_conf"),
            seed: n!("seed"),
            eval_seed: n!("eval_seed"),
            trials: n!("trials"),
            score: n!("score"),
            std_error: n!("std_error"),
            mean_level: n!("mean_level"),
            optimizer_estimate: optional("optimizer_estimate")?,
            theta: n!("theta"),
            lb: optional("lb")?,
            sampling_iterations: n!("sampling_iterations"),
            constraint_exhausted: n!("constraint_exhausted"),
            peak_memory_bytes: n!("peak_memory_bytes"),
            stats,
            assignment,
            node_levels: Vec::new(),
            runtime_secs: 0.0,
        })
    }

    /// One header row and one value row, tab-separated.
    pub fn to_summary_tsv(&self) -> String {
        let st = self.stats.as_ref();
        format!(
            "algorithm\tscore\tstd_error\tmean_level\tseed_exposure\tnormalized_degree\ttheta\tpeak_memory_bytes\truntime_secs\n\
             {}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{:.3}\n",
            self.algorithm,
            self.score,
            self.std_error,
            self.mean_level,
            st.map_or(0.0, |s| s.seed_exposure),
            st.map_or(0.0, |s| s.normalized_degree),
            self.theta,
            self.peak_memory_bytes,
            self.runtime_secs,
        )
    }

    pub fn to_exposure_tsv(&self) -> String {
        let mut s = String::from("node\tleaning\tlevel\n");
        for (v, l, f) in &self.node_levels {
            let _ = writeln!(s, "{v}\t{l}\t{f}");
        }
        s
    }

    pub fn to_assignment_tsv(&self) -> String {
        let mut s = String::new();
        for (u, i) in &self.assignment {
            let _ = writeln!(s, "{u}\t{i}");
        }
        s
    }

    /// Writes `report.txt`, `summary.tsv`, `exposure.tsv` and
    /// `assignment.tsv` into `dir`, creating it if needed.
    pub fn write_to_dir(&self, dir: &Path) -> Result<()> {
        std::fs::create_dir_all(dir)
            .map_err(|e| Error::io(format!("creating {}", dir.display()), e))?;
        io::write_file(&dir.join("report.txt"), &self.to_structured())?;
        io::write_file(&dir.join("summary.tsv"), &self.to_summary_tsv())?;
        io::write_file(&dir.join("exposure.tsv"), &self.to_exposure_tsv())?;
        io::write_file(&dir.join("assignment.tsv"), &self.to_assignment_tsv())
    }
}
