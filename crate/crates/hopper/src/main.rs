use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use hopper::config::{BrainConfig, RunConfig};
use hopper::report::RunReport;
use hopper::{analyze_pca_file, best_of_snapshot, run_scenario, verify_file};
use hopper_core::analysis::report::VerifyOptions;
use hopper_core::analysis::width::DefectConvention;

#[derive(Parser)]
#[command(name = "hopper", version, about = "Vertex-hopping search for polytopes with extreme combinatorics")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Convention {
    DeckNodes,
    DeckNeighbours,
}

#[derive(Subcommand)]
enum Command {
    /// Run a search scenario from a TOML configuration.
    Run {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        agents: Option<usize>,
        /// Scoring service address (`unix:/path` or `host:port`).
        #[arg(long)]
        brain: Option<String>,
        #[arg(long)]
        stop_on_first: bool,
        /// Where to write the JSON report (overrides the configuration).
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Exact verification report of a polytope file.
    Verify {
        file: PathBuf,
        #[arg(long, value_enum, default_value = "deck-nodes")]
        defect_convention: Convention,
        /// Skip the neighbourliness count.
        #[arg(long)]
        skip_neighbourliness: bool,
    },
    /// Principal-component profile of a prismatoid's vertices.
    AnalyzePca { file: PathBuf },
    /// SVG plot of a run report.
    Plot {
        report: PathBuf,
        #[arg(long, short)]
        out: Option<PathBuf>,
    },
    /// Print the best entries of a repository snapshot as polytope files.
    Export {
        #[arg(long)]
        repo: PathBuf,
        #[arg(long, default_value_t = 1)]
        best: usize,
        /// Directory for `best-<rank>.txt`; stdout when absent.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn main() -> Result<()> {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info")).init();
    match Cli::parse().command {
        Command::Run { config, seed, agents, brain, stop_on_first, report } => {
            let mut cfg = RunConfig::load(&config).with_context(|| format!("loading {}", config.display()))?;
            if let Some(s) = seed {
                cfg.seed = s;
            }
            if let Some(a) = agents {
                cfg.agent_count = a;
            }
            if let Some(addr) = brain {
                cfg.brain = Some(BrainConfig::new(addr));
            }
            cfg.stop_on_first |= stop_on_first;
            if report.is_some() {
                cfg.output.report = report;
            }
            cfg.validate()?;
            let outcome = run_scenario(&cfg)?;
            outcome.save(&cfg.output)?;
            print!("{}", outcome.report.summary());
            println!("elapsed {:.1}s", outcome.elapsed.as_secs_f64());
        }
        Command::Verify { file, defect_convention, skip_neighbourliness } => {
            let opts = VerifyOptions {
                defect_convention: match defect_convention {
                    Convention::DeckNodes => DefectConvention::DeckNodes,
                    Convention::DeckNeighbours => DefectConvention::DeckNeighbours,
                },
                skip_neighbourliness,
            };
            let report = verify_file(&file, &opts).with_context(|| format!("verifying {}", file.display()))?;
            println!("{}", serde_json::to_string_pretty(&report)?);
        }
        Command::AnalyzePca { file } => {
            let profile = analyze_pca_file(&file).with_context(|| format!("analyzing {}", file.display()))?;
            println!("{}", serde_json::json!({
                "eigenMin": profile.eigen_min,
                "eigenMax": profile.eigen_max,
                "ratio": profile.ratio(),
            }));
        }
        Command::Plot { report, out } => {
            let text = std::fs::read_to_string(&report).with_context(|| format!("reading {}", report.display()))?;
            let parsed: RunReport = serde_json::from_str(&text).context("parsing run report")?;
            let svg = hopper::plot::render_svg(&parsed);
            match out {
                Some(path) => std::fs::write(&path, svg)?,
                None => print!("{svg}"),
            }
        }
        Command::Export { repo, best, out } => {
            if best == 0 {
                bail!("--best must be positive");
            }
            let entries = best_of_snapshot(&repo, best)?;
            if let Some(dir) = &out {
                std::fs::create_dir_all(dir)?;
            }
            for (rank, e) in entries.iter().enumerate() {
                match &out {
                    Some(dir) => std::fs::write(dir.join(format!("best-{}.txt", rank + 1)), e.polytope.to_text())?,
                    None => {
                        println!("# entry {} fitness {} ({})", e.id, e.fitness.value, e.fitness.objective);
                        print!("{}", e.polytope.to_text());
                    }
                }
            }
        }
    }
    Ok(())
}
