use std::fs::File;
use std::io::{self, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Context;
use clap::{Parser, Subcommand};
use qexplore::experiment::{
    compare, read_records, render_comparison, render_summary, run, summarize, write_records,
    ExperimentConfig, ExperimentError,
};

#[derive(Parser)]
#[command(
    name = "qexplore",
    version,
    about = "Seeded PAC quantile-exploration sweeps"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a sweep and write one CSV row per trial.
    Run {
        config: PathBuf,
        /// CSV destination; defaults to the config's `output`, else stdout.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        trials: Option<usize>,
        #[arg(long)]
        jobs: Option<usize>,
    },
    /// Run several compatible configs on paired seeds and report sample ratios
    /// against the first.
    Compare {
        #[arg(required = true, num_args = 2..)]
        configs: Vec<PathBuf>,
        #[arg(long)]
        jobs: Option<usize>,
    },
    /// Re-check the failure rate of every sweep point in a CSV.
    Verify { csv: PathBuf },
}

enum Failure {
    Config(anyhow::Error),
    Pac,
}

impl From<ExperimentError> for Failure {
    fn from(e: ExperimentError) -> Self {
        Failure::Config(e.into())
    }
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Config(e)
    }
}

fn load(path: &Path) -> Result<ExperimentConfig, Failure> {
    ExperimentConfig::load(path)
        .with_context(|| format!("loading {}", path.display()))
        .map_err(Failure::Config)
}

fn cmd_run(
    config: &Path,
    out: Option<PathBuf>,
    seed: Option<u64>,
    trials: Option<usize>,
    jobs: Option<usize>,
) -> Result<(), Failure> {
    let mut cfg = load(config)?;
    if let Some(s) = seed {
        cfg.seed = s;
    }
    if let Some(t) = trials {
        cfg.trials = t;
    }
    if jobs.is_some() {
        cfg.jobs = jobs;
    }
    if out.is_some() {
        cfg.output = out;
    }
    let output = run(&cfg)?;
    let summary = render_summary(&output.summaries);
    match &cfg.output {
        Some(path) => {
            let file =
                File::create(path).with_context(|| format!("creating {}", path.display()))?;
            write_records(BufWriter::new(file), &output.records)?;
            print!("{summary}");
        }
        None => {
            write_records(io::stdout().lock(), &output.records)?;
            eprint!("{summary}");
        }
    }
    Ok(())
}

fn cmd_compare(paths: &[PathBuf], jobs: Option<usize>) -> Result<(), Failure> {
    let mut configs = paths
        .iter()
        .map(|p| load(p))
        .collect::<Result<Vec<_>, _>>()?;
    if jobs.is_some() {
        for c in &mut configs {
            c.jobs = jobs;
        }
    }
    let points = compare(&configs)?;
    print!(
        "{}",
        render_comparison(configs[0].sweep.param.name(), &points)
    );
    Ok(())
}

fn cmd_verify(csv: &Path) -> Result<(), Failure> {
    let file = File::open(csv).with_context(|| format!("opening {}", csv.display()))?;
    let records = read_records(BufReader::new(file))?;
    let summaries = summarize(&records);
    print!("{}", render_summary(&summaries));
    let failed = summaries.iter().filter(|s| s.pass == Some(false)).count();
    let unchecked = summaries.iter().filter(|s| s.pass.is_none()).count();
    if unchecked > 0 {
        println!("{unchecked} sweep point(s) have fewer than 30 trials and were not checked");
    }
    if failed > 0 {
        println!("PAC check failed at {failed} sweep point(s)");
        return Err(Failure::Pac);
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Run {
            config,
            out,
            seed,
            trials,
            jobs,
        } => cmd_run(&config, out, seed, trials, jobs),
        Command::Compare { configs, jobs } => cmd_compare(&configs, jobs),
        Command::Verify { csv } => cmd_verify(&csv),
    };
    let _ = io::stdout().flush();
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Pac) => ExitCode::from(2),
        Err(Failure::Config(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
