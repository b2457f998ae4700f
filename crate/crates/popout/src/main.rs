use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Parser, Subcommand};
use popout::config::Config;
use popout::simulate::FIXATIONS_FILE;

#[derive(Parser)]
#[command(name = "popout", version, about = "Pop-out stimulus dataset generator and gaze evaluator")]
struct Cli {
    /// key = value configuration file
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output directory
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Families to generate, by number (repeat or comma-separate)
    #[arg(long, global = true, value_delimiter = ',')]
    family: Vec<u8>,
    /// Master seed
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Worker threads, 0 for one per core
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Render images, masks, layouts and the manifest
    Gen,
    /// Simulate observers on every manifest stimulus
    Simulate {
        #[arg(long)]
        participants: Option<usize>,
        #[arg(long)]
        aoi_bias: Option<f64>,
        /// Destination CSV, default <out>/fixations.csv
        #[arg(long)]
        fixations: Option<PathBuf>,
    },
    /// Evaluate a fixation CSV against the manifest
    Eval {
        /// Fixation CSV, default <out>/fixations.csv
        #[arg(long)]
        fixations: Option<PathBuf>,
    },
    /// Write report tables from evaluation results
    Report,
    /// Check the manifest against the files on disk
    Verify,
    /// Print the effective configuration
    Config,
}

fn load_config(cli: &Cli) -> anyhow::Result<Config> {
    let mut cfg = match &cli.config {
        Some(p) => Config::load(p)?,
        None => Config::default(),
    };
    if let Some(o) = &cli.out {
        cfg.out = o.clone();
    }
    if !cli.family.is_empty() {
        let list = cli.family.iter().map(u8::to_string).collect::<Vec<_>>().join(",");
        cfg.set("families", &list).map_err(anyhow::Error::msg)?;
    }
    if let Some(s) = cli.seed {
        cfg.seed = s;
    }
    if let Some(j) = cli.jobs {
        cfg.jobs = j;
    }
    Ok(cfg)
}

fn run(cli: Cli) -> anyhow::Result<()> {
    let mut cfg = load_config(&cli)?;
    match cli.cmd {
        Cmd::Gen => {
            let m = popout::gen::run(&cfg).context("gen")?;
            println!("wrote {} stimuli to {}", m.stimuli.len(), cfg.out.display());
        }
        Cmd::Simulate { participants, aoi_bias, fixations } => {
            if let Some(p) = participants {
                cfg.participants = p;
            }
            if let Some(b) = aoi_bias {
                cfg.observer.aoi_bias = b;
            }
            let dest = fixations.unwrap_or_else(|| cfg.out.join(FIXATIONS_FILE));
            let n = popout::simulate::run(&cfg, &dest).context("simulate")?;
            println!("wrote {n} scanpaths to {}", dest.display());
        }
        Cmd::Eval { fixations } => {
            let src = fixations.unwrap_or_else(|| cfg.out.join(FIXATIONS_FILE));
            let ev = popout::eval::run(&cfg, &src).context("eval")?;
            if ev.rows.is_empty() {
                eprintln!("warning: no scanpaths evaluated from {}", src.display());
            }
            if !ev.rejects.is_empty() {
                eprintln!("warning: {} scanpaths on unknown stimuli, see rejects.csv", ev.rejects.len());
            }
            println!("evaluated {} scanpaths", ev.rows.len());
        }
        Cmd::Report => {
            let lines = popout::report::run(&cfg.out).context("report")?;
            println!("reported {} stimulus rows", lines.len());
        }
        Cmd::Verify => {
            let problems = popout::verify::run(&cfg.out).context("verify")?;
            for p in &problems {
                eprintln!("{p}");
            }
            if !problems.is_empty() {
                bail!("{} problems found", problems.len());
            }
            println!("ok");
        }
        Cmd::Config => print!("{}", cfg.to_text()),
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
