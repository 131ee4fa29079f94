use std::fs::File;
use std::io::BufWriter;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use exposure_core::error::{Category, Error, Result};
use exposure_core::experiment::{evaluate, rescore, run_experiment, ExperimentConfig, ScoreReport};
use exposure_core::io;
use exposure_core::model::ItemCatalog;
use exposure_core::optimizer::sampling_phase;
use exposure_core::rc::RcSample;
use exposure_core::synth::{generate_synthetic, DegreeModel, LeaningDist, SynthSpec};

/// Diversity exposure maximization on social graphs.
#[derive(Parser)]
#[command(name = "exposure", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the configured algorithm and write its report files.
    Run(ConfigArgs),
    /// Draw an RC-set sample and dump it in binary form.
    Sample {
        #[command(flatten)]
        config: ConfigArgs,
        /// Output file for the sample.
        #[arg(long)]
        output: PathBuf,
        /// Draw exactly this many sets instead of running the adaptive sizing.
        #[arg(long)]
        count: Option<usize>,
    },
    /// Re-score an assignment file, or the assignment inside a report.
    Score {
        #[command(flatten)]
        config: ConfigArgs,
        #[arg(long, conflicts_with = "report", required_unless_present = "report")]
        assignment: Option<PathBuf>,
        /// Report whose pairs, evaluation seed and trial count are reused.
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Generate a random graph with node leanings.
    Synth(SynthArgs),
}

#[derive(Args)]
struct ConfigArgs {
    /// key=value configuration file.
    #[arg(long)]
    config: PathBuf,
    /// Overrides as `--key value` or `--key=value` for any configuration key.
    #[arg(trailing_var_arg = true, allow_hyphen_values = true, value_name = "OVERRIDES")]
    overrides: Vec<String>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Leanings {
    Uniform,
    Polarized,
}

#[derive(Clone, Copy, ValueEnum)]
enum Degrees {
    Uniform,
    PowerLaw,
}

#[derive(Args)]
struct SynthArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    m: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value = "uniform")]
    leanings: Leanings,
    /// Mode distance from 0 of the polarized mixture.
    #[arg(long, default_value_t = 0.6)]
    mode: f64,
    /// Standard deviation of each polarized component.
    #[arg(long, default_value_t = 0.2)]
    sd: f64,
    #[arg(long, value_enum, default_value = "uniform")]
    degrees: Degrees,
    /// Out-degree tail exponent for `--degrees power-law`.
    #[arg(long, default_value_t = 2.5)]
    exponent: f64,
    /// Weight penalty for edges across the leaning sign, in [0, 1).
    #[arg(long, default_value_t = 0.0)]
    homophily: f64,
    /// Also write `items.tsv` with this many evenly spread items.
    #[arg(long)]
    items: Option<usize>,
    #[arg(long)]
    out_dir: PathBuf,
}

fn parse_overrides(raw: &[String]) -> Result<Vec<(String, String)>> {
    let mut out = Vec::new();
    let mut it = raw.iter();
    while let Some(tok) = it.next() {
        let Some(key) = tok.strip_prefix("--") else {
            return Err(Error::Config(format!("expected --key, found {tok:?}")));
        };
        match key.split_once('=') {
            Some((k, v)) => out.push((k.to_string(), v.to_string())),
            None => {
                let v = it
                    .next()
                    .ok_or_else(|| Error::Config(format!("missing value for --{key}")))?;
                out.push((key.to_string(), v.clone()));
            }
        }
    }
    Ok(out)
}

fn load(args: &ConfigArgs) -> Result<ExperimentConfig> {
    ExperimentConfig::load(&args.config, &parse_overrides(&args.overrides)?)
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    File::create(path)
        .map(BufWriter::new)
        .map_err(|e| Error::Io {
            context: format!("creating {}", path.display()),
            source: e,
        })
}

fn execute(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Run(args) => {
            let cfg = load(&args)?;
            let report = run_experiment(&cfg)?;
            report.write_to_dir(&cfg.out_dir)?;
            print!("{}", report.to_summary_tsv());
            if report.constraint_exhausted {
                eprintln!("warning: constraints admit fewer than k = {} pairs", report.k);
            }
        }
        Command::Sample { config, output, count } => {
            let cfg = load(&config)?;
            let sample = cfg.with_pool(|| -> Result<RcSample> {
                let (inst, c) = cfg.build_instance()?;
                let params = cfg.tdem_params(c)?;
                match count {
                    Some(count) => {
                        let mut s = RcSample::new(&inst, cfg.seed).with_memory_budget(params.memory_budget);
                        s.grow_to(&inst, count, cfg.execution)?;
                        Ok(s)
                    }
                    None => Ok(sampling_phase(&inst, &params)?.sample),
                }
            })??;
            sample.write_to(create(&output)?)?;
            println!("sets\ttotal_size\tmemory_bytes");
            println!("{}\t{}\t{}", sample.len(), sample.total_size(), sample.memory_bytes());
        }
        Command::Score { config, assignment, report } => {
            let mut cfg = load(&config)?;
            let eval = match (assignment, report) {
                (_, Some(path)) => {
                    let text = std::fs::read_to_string(&path).map_err(|e| Error::Io {
                        context: format!("reading {}", path.display()),
                        source: e,
                    })?;
                    let r = ScoreReport::parse(&text, &path)?;
                    cfg.eval_seed = r.eval_seed;
                    cfg.trials = r.trials;
                    rescore(&cfg, &r.assignment)?
                }
                (Some(path), None) => cfg.with_pool(|| {
                    let (inst, _) = cfg.build_instance()?;
                    let a = io::load_assignment(&path, inst.graph(), inst.items())?;
                    evaluate(&cfg, &inst, &a)
                })??,
                (None, None) => unreachable!("clap requires one source"),
            };
            println!("score\tstd_error\ttrials");
            println!("{}\t{}\t{}", eval.estimate.mean, eval.estimate.std_error, eval.estimate.trials);
        }
        Command::Synth(a) => {
            let spec = SynthSpec {
                n: a.n,
                m: a.m,
                leanings: match a.leanings {
                    Leanings::Uniform => LeaningDist::Uniform,
                    Leanings::Polarized => LeaningDist::Polarized { mode: a.mode, sd: a.sd },
                },
                degrees: match a.degrees {
                    Degrees::Uniform => DegreeModel::Uniform,
                    Degrees::PowerLaw => DegreeModel::PowerLaw { exponent: a.exponent },
                },
                homophily: a.homophily,
                seed: a.seed,
            };
            let g = generate_synthetic(&spec)?;
            std::fs::create_dir_all(&a.out_dir).map_err(|e| Error::Io {
                context: format!("creating {}", a.out_dir.display()),
                source: e,
            })?;
            io::write_graph(&g, &a.out_dir.join("edges.tsv"), &a.out_dir.join("leanings.tsv"))?;
            if let Some(h) = a.items {
                io::write_items(&ItemCatalog::even_spread(h)?, &a.out_dir.join("items.tsv"))?;
            }
            println!("nodes\tedges");
            println!("{}\t{}", g.node_count(), g.edge_count());
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match execute(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(match e.category() {
                Category::Parse => 2,
                Category::Config => 3,
                Category::Resource => 4,
                Category::Other => 1,
            })
        }
    }
}
