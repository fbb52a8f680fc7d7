use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use registra::report::{self, Analysis, AnalysisConfig};
use registra::{Error, Result};

#[derive(Parser)]
#[command(name = "registra", version, about = "Function-word PCA and register analysis of text corpora")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// JSON run configuration.
    #[arg(long)]
    config: PathBuf,
    /// Output directory, overriding `output_dir` from the config.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Tokenize a manifest's texts into a corpus cache file.
    Ingest {
        #[arg(long)]
        manifest: Option<PathBuf>,
        #[arg(long)]
        config: Option<PathBuf>,
        /// Cache file to write.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Function-word principal component analysis.
    Fwpca(Common),
    /// Factor analysis of tagged register features.
    Mda(Common),
    /// Word-class rates per group.
    Pos(Common),
    /// Function/content split of each group's most frequent words.
    Profile(Common),
    /// Rank-sum comparisons over an existing scores table.
    Compare(Common),
    /// Generate texts through a chat endpoint (GEN_ENDPOINT, GEN_API_KEY).
    Generate(Common),
}

fn load_config(common: &Common) -> Result<AnalysisConfig> {
    let mut config = AnalysisConfig::from_path(&common.config)?;
    if let Some(out) = &common.out {
        config.output_dir = absolute(out)?;
        config.validate()?;
    }
    Ok(config)
}

fn absolute(p: &Path) -> Result<PathBuf> {
    Ok(if p.is_absolute() {
        p.to_path_buf()
    } else {
        std::env::current_dir()?.join(p)
    })
}

fn analyse(common: &Common, analysis: Analysis) -> Result<()> {
    let config = load_config(common)?;
    let (dir, record) = report::execute(&config, analysis)?;
    for n in &record.notices {
        log::warn!("{n}");
    }
    println!("{} -> {}", analysis.id(), dir.display());
    for f in &record.outputs {
        println!("  {}", f.path);
    }
    Ok(())
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Ingest { manifest, config, out } => {
            let mut cfg = match &config {
                Some(p) => AnalysisConfig::from_path(p)?,
                None => AnalysisConfig::default(),
            };
            let manifest = manifest
                .or_else(|| cfg.manifest.take())
                .ok_or_else(|| Error::Input("ingest needs --manifest or a config naming one".into()))?;
            let out = match out.or_else(|| cfg.corpus_cache.clone()) {
                Some(p) => p,
                None => cfg.output_dir.join("corpus.json"),
            };
            cfg.manifest = Some(manifest.clone());
            let record = report::ingest(&manifest, &out, &cfg)?;
            for n in &record.notices {
                log::warn!("{n}");
            }
            println!("ingested {} files -> {}", record.inputs.len() - 1, out.display());
            Ok(())
        }
        Command::Fwpca(c) => analyse(&c, Analysis::Fwpca),
        Command::Mda(c) => analyse(&c, Analysis::Mda),
        Command::Pos(c) => analyse(&c, Analysis::Pos),
        Command::Profile(c) => analyse(&c, Analysis::ContentProfile),
        Command::Compare(c) => analyse(&c, Analysis::Compare),
        Command::Generate(c) => {
            let config = load_config(&c)?;
            let (outcome, lengths) = report::generate(&config)?;
            println!(
                "{} texts written, {} failed, {} resumed -> {}",
                outcome.records.len(),
                outcome.failures.len(),
                outcome.resumed,
                outcome.manifest_path.display()
            );
            for l in lengths {
                println!("  {}: n={} mean={:.1} min={} max={}", l.template, l.n, l.mean, l.min, l.max);
            }
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
