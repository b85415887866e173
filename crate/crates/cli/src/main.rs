mod settings;

use std::fmt;
use std::fs::{self, File};
use std::io::{BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, Context, Result};
use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use slsim::experiments::SweepManifest;
use slsim::sim::{generate_evidence, write_metrics_csv};
use slsim::{
    compute_stats, preset, run, run_sweep, EvidenceMatrix, EvidenceMix, Graph, GraphSource, GraphStats,
    SeedStrategy, SimConfig, StepMetrics, SweepSpec,
};

use settings::Settings;

const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Parser)]
#[command(name = "slsim", version, about = "Subjective-logic opinion dynamics simulator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Simulate one run and write metrics.csv, snapshot.csv and manifest.json.
    Run(RunArgs),
    /// Run a parameter grid and write sweep.csv and manifest.json.
    Sweep(SweepArgs),
    /// Print graph statistics as JSON.
    Stats {
        /// Edge-list path or `synthetic:<model>,k=v,...`.
        graph: String,
    },
}

#[derive(Args)]
struct RunArgs {
    /// `key = value` settings file; flags override it.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Read the evidence matrix from a file instead of generating it.
    #[arg(long)]
    evidence: Option<PathBuf>,
    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Args)]
#[command(group = clap::ArgGroup::new("grid").required(true).args(["preset", "spec"]))]
struct SweepArgs {
    /// Named grid (valuable-sweep, noisy-sweep, tc-under-pv, tc-under-cv).
    #[arg(long)]
    preset: Option<String>,
    /// Settings file defining `axis1` and `axis2` (and any other key).
    #[arg(long)]
    spec: Option<PathBuf>,
    /// Worker threads.
    #[arg(long, default_value_t = 1)]
    parallel: usize,
    #[arg(long)]
    replications: Option<usize>,
    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Args)]
struct CommonArgs {
    /// Edge-list path or `synthetic:<model>,k=v,...`.
    #[arg(long)]
    graph: Option<String>,
    /// 200-node graph and 30 replications instead of the full-size setup.
    #[arg(long)]
    desk_scale: bool,
    #[arg(long, env = "SLSIM_OUT_DIR", default_value = "out")]
    out_dir: PathBuf,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    steps: Option<usize>,
    #[arg(long)]
    gamma: Option<f64>,
    #[arg(long)]
    tc_mu: Option<f64>,
    #[arg(long)]
    tc_std: Option<f64>,
    #[arg(long)]
    a_mu: Option<f64>,
    #[arg(long)]
    a_std: Option<f64>,
    #[arg(long)]
    originator_fraction: Option<f64>,
    /// Exact number of originators.
    #[arg(long)]
    originators: Option<usize>,
    /// uniform-random or highest-degree.
    #[arg(long)]
    seeding: Option<SeedStrategy>,
    #[arg(long)]
    propagator_w: Option<f64>,
    #[arg(long)]
    n_pv: Option<u64>,
    #[arg(long)]
    n_pn: Option<u64>,
    #[arg(long)]
    n_cv: Option<u64>,
    #[arg(long)]
    n_cn: Option<u64>,
}

#[derive(Debug, Clone, Copy)]
enum Stage {
    Parse,
    Config,
    Run,
    Write,
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Stage::Parse => "parse",
            Stage::Config => "config",
            Stage::Run => "run",
            Stage::Write => "write",
        })
    }
}

trait AtStage<T> {
    fn at(self, stage: Stage) -> Result<T>;
}

impl<T, E: Into<anyhow::Error>> AtStage<T> for std::result::Result<T, E> {
    fn at(self, stage: Stage) -> Result<T> {
        self.map_err(|e| e.into().context(format!("{stage} stage failed")))
    }
}

impl CommonArgs {
    fn flags(&self) -> Result<Settings> {
        Ok(Settings {
            graph: self.graph.as_deref().map(str::parse).transpose().at(Stage::Parse)?,
            gamma: self.gamma,
            tc_mu: self.tc_mu,
            tc_std: self.tc_std,
            a_mu: self.a_mu,
            a_std: self.a_std,
            originator_fraction: self.originator_fraction,
            originators: self.originators,
            seeding: self.seeding,
            propagator_w: self.propagator_w,
            steps: self.steps,
            seed: self.seed,
            n_pv: self.n_pv,
            n_pn: self.n_pn,
            n_cv: self.n_cv,
            n_cn: self.n_cn,
            ..Default::default()
        })
    }

    fn graph_source(&self, settings: &Settings) -> GraphSource {
        settings.graph.clone().unwrap_or_else(|| {
            if self.desk_scale {
                GraphSource::desk_scale()
            } else {
                GraphSource::full_scale()
            }
        })
    }
}

fn read_settings(path: &Path) -> Result<Settings> {
    let text = fs::read_to_string(path)
        .with_context(|| format!("cannot read {}", path.display()))
        .at(Stage::Parse)?;
    Settings::parse(&text)
        .with_context(|| format!("in {}", path.display()))
        .at(Stage::Config)
}

fn load_graph(source: &GraphSource) -> Result<Graph> {
    source
        .load()
        .context("cannot load graph")
        .at(Stage::Parse)
}

fn create_out_dir(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir)
        .with_context(|| format!("cannot create output directory {}", dir.display()))
        .at(Stage::Write)
}

fn write_file(path: &Path, body: impl FnOnce(&mut BufWriter<File>) -> Result<()>) -> Result<()> {
    let attempt = || -> Result<()> {
        let mut out = BufWriter::new(File::create(path)?);
        body(&mut out)?;
        out.flush()?;
        Ok(())
    };
    attempt()
        .with_context(|| format!("cannot write {}", path.display()))
        .at(Stage::Write)
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    write_file(path, |out| {
        serde_json::to_writer_pretty(&mut *out, value)?;
        writeln!(out)?;
        Ok(())
    })
}

#[derive(Serialize)]
struct RunManifest {
    tool_version: String,
    config: SimConfig,
    graph_source: String,
    graph_stats: GraphStats,
    evidence_file: Option<PathBuf>,
    evidence_mix: EvidenceMix,
    initial: StepMetrics,
    #[serde(rename = "final")]
    last: StepMetrics,
    first_full_activation: Option<usize>,
}

fn cmd_run(args: RunArgs) -> Result<()> {
    let file = match &args.config {
        Some(path) => read_settings(path)?,
        None => Settings::default(),
    };
    let mut settings = file.overlay(args.common.flags()?);
    if args.evidence.is_some() {
        settings.evidence_file = args.evidence.clone();
    }
    let mut cfg = SimConfig::default();
    settings.apply(&mut cfg);

    let source = args.common.graph_source(&settings);
    let g = load_graph(&source)?;
    let ev = match &settings.evidence_file {
        Some(path) => {
            let ev = File::open(path)
                .map_err(anyhow::Error::from)
                .and_then(|f| Ok(EvidenceMatrix::read_from(BufReader::new(f))?))
                .with_context(|| format!("cannot read evidence {}", path.display()))
                .at(Stage::Parse)?;
            cfg.evidence = ev.mix();
            ev
        }
        None => generate_evidence(&cfg).at(Stage::Config)?,
    };
    cfg.validate().at(Stage::Config)?;
    let out = run(&g, &cfg, &ev).at(Stage::Run)?;

    let dir = &args.common.out_dir;
    create_out_dir(dir)?;
    write_file(&dir.join("metrics.csv"), |w| Ok(write_metrics_csv(&out.steps, w)?))?;
    write_file(&dir.join("snapshot.csv"), |w| Ok(out.population.write_snapshot_csv(w)?))?;
    write_json(
        &dir.join("manifest.json"),
        &RunManifest {
            tool_version: VERSION.to_owned(),
            graph_source: source.to_string(),
            graph_stats: compute_stats(&g),
            evidence_file: settings.evidence_file,
            evidence_mix: cfg.evidence,
            initial: out.initial,
            last: out.final_metrics(),
            first_full_activation: out.first_full_activation,
            config: cfg,
        },
    )?;
    eprintln!("wrote {} steps to {}", out.steps.len(), dir.display());
    Ok(())
}

fn cmd_sweep(args: SweepArgs) -> Result<()> {
    let (mut spec, file) = match (&args.preset, &args.spec) {
        (Some(name), _) => (preset(name).at(Stage::Config)?, Settings::default()),
        (None, Some(path)) => {
            let file = read_settings(path)?;
            let (Some(axis1), Some(axis2)) = (file.axis1.clone(), file.axis2.clone()) else {
                return Err(anyhow!("{} must set both axis1 and axis2", path.display())).at(Stage::Config);
            };
            let spec = SweepSpec {
                base: SimConfig::default(),
                axis1,
                axis2,
                replications: SweepSpec::FULL_REPLICATIONS,
            };
            (spec, file)
        }
        (None, None) => unreachable!("clap requires --preset or --spec"),
    };
    let mut settings = file.overlay(args.common.flags()?);
    if args.replications.is_some() {
        settings.replications = args.replications;
    }
    settings.apply(&mut spec.base);
    if let Some(a) = settings.axis1.clone() {
        spec.axis1 = a;
    }
    if let Some(a) = settings.axis2.clone() {
        spec.axis2 = a;
    }
    spec.replications = settings.replications.unwrap_or(if args.common.desk_scale {
        SweepSpec::DESK_REPLICATIONS
    } else {
        spec.replications
    });
    spec.validate().at(Stage::Config)?;

    let source = args.common.graph_source(&settings);
    let g = load_graph(&source)?;
    let result = run_sweep(&spec, &g, args.parallel).at(Stage::Run)?;

    let dir = &args.common.out_dir;
    create_out_dir(dir)?;
    write_file(&dir.join("sweep.csv"), |w| Ok(result.write_csv(w)?))?;
    write_json(
        &dir.join("manifest.json"),
        &SweepManifest {
            tool_version: VERSION.to_owned(),
            preset: args.preset.clone(),
            master_seed: spec.base.seed,
            graph_source: source.to_string(),
            graph_stats: compute_stats(&g),
            spec,
        },
    )?;
    eprintln!("wrote {} cells to {}", result.cells.len(), dir.display());
    Ok(())
}

fn cmd_stats(graph: &str) -> Result<()> {
    let source: GraphSource = graph.parse().at(Stage::Parse)?;
    let g = load_graph(&source)?;
    println!("{}", serde_json::to_string(&compute_stats(&g)).at(Stage::Write)?);
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Run(args) => cmd_run(args),
        Command::Sweep(args) => cmd_sweep(args),
        Command::Stats { graph } => cmd_stats(&graph),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
