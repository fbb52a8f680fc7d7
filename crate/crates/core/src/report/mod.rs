//! Analysis runs: configuration, pipelines, CSV/SVG/markdown emission and the
//! run record written beside every set of outputs.

mod config;
mod markdown;
mod runs;
mod svg;

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::corpus::{load_corpus, CorpusManifest};
use crate::error::{Error, Result};
use crate::genclient::{
    generate_corpus, length_report, load_jobs, EchoTransport, GenerationOutcome, HttpTransport, LengthSummary,
    Transport, TransportKind,
};
use crate::multivariate::OutputFile;

pub use config::{Analysis, AnalysisConfig};
pub use runs::{
    run_analysis, run_compare, run_content_profile, run_fwpca, run_mda, run_pos_contrast, RunOutput,
    LOADING_DISPLAY_THRESHOLD,
};
pub use svg::{emit_svg, PlotSpec, Point, Series, HEIGHT, WIDTH};

pub const RUN_RECORD: &str = "run.json";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FileDigest {
    pub path: String,
    pub sha256: String,
    pub bytes: u64,
}

impl FileDigest {
    fn of(path: impl Into<String>, bytes: &[u8]) -> Self {
        FileDigest {
            path: path.into(),
            sha256: hex::encode(Sha256::digest(bytes)),
            bytes: bytes.len() as u64,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub tool: String,
    pub version: String,
    pub command: String,
    pub config: serde_json::Value,
    pub inputs: Vec<FileDigest>,
    pub outputs: Vec<FileDigest>,
    pub notices: Vec<String>,
    pub started_at: String,
    pub finished_at: String,
}

fn now() -> String {
    chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Millis, true)
}

fn digest_inputs(paths: &[PathBuf]) -> Result<Vec<FileDigest>> {
    paths
        .iter()
        .map(|p| {
            let bytes = fs::read(p).map_err(|source| Error::Load {
                path: p.clone(),
                source,
            })?;
            Ok(FileDigest::of(p.display().to_string(), &bytes))
        })
        .collect()
}

impl RunRecord {
    fn new(command: &str, config: &AnalysisConfig, started_at: String) -> Result<Self> {
        Ok(RunRecord {
            tool: env!("CARGO_PKG_NAME").into(),
            version: env!("CARGO_PKG_VERSION").into(),
            command: command.into(),
            config: serde_json::to_value(config)?,
            inputs: Vec::new(),
            outputs: Vec::new(),
            notices: Vec::new(),
            started_at,
            finished_at: String::new(),
        })
    }

    pub fn from_path(path: &Path) -> Result<Self> {
        let body = fs::read_to_string(path).map_err(|source| Error::Load {
            path: path.to_path_buf(),
            source,
        })?;
        Ok(serde_json::from_str(&body)?)
    }
}

/// Writes `files` and the run record into `dir`. Files are staged in a
/// sibling directory and moved into place together; a previous run in `dir`
/// is replaced only if it carries a run record.
pub fn write_outputs(dir: &Path, files: &[OutputFile], record: &RunRecord) -> Result<()> {
    let parent = dir.parent().unwrap_or(Path::new("."));
    let name = dir
        .file_name()
        .ok_or_else(|| Error::Input(format!("bad output directory {}", dir.display())))?
        .to_string_lossy()
        .into_owned();
    fs::create_dir_all(parent)?;
    if dir.exists() && !dir.join(RUN_RECORD).exists() {
        return Err(Error::Input(format!(
            "{} exists and was not written by a previous run; refusing to replace it",
            dir.display()
        )));
    }
    let staging = parent.join(format!(".{name}.staging"));
    if staging.exists() {
        fs::remove_dir_all(&staging)?;
    }
    fs::create_dir_all(&staging)?;
    let result = (|| -> Result<()> {
        for f in files {
            fs::write(staging.join(&f.name), &f.bytes)?;
        }
        let mut body = serde_json::to_string_pretty(record)?;
        body.push('\n');
        fs::write(staging.join(RUN_RECORD), body)?;
        if dir.exists() {
            fs::remove_dir_all(dir)?;
        }
        fs::rename(&staging, dir)?;
        Ok(())
    })();
    if result.is_err() {
        let _ = fs::remove_dir_all(&staging);
    }
    result
}

/// Runs one analysis and writes its files to `<output_dir>/<analysis>/`.
pub fn execute(config: &AnalysisConfig, analysis: Analysis) -> Result<(PathBuf, RunRecord)> {
    let started = now();
    let output = run_analysis(config, analysis)?;
    let mut record = RunRecord::new(analysis.id(), config, started)?;
    record.inputs = digest_inputs(&output.inputs)?;
    record.outputs = output.files.iter().map(|f| FileDigest::of(&f.name, &f.bytes)).collect();
    record.notices = output.notices.clone();
    record.finished_at = now();
    let dir = config.output_dir.join(analysis.id());
    write_outputs(&dir, &output.files, &record)?;
    Ok((dir, record))
}

/// Loads a manifest and writes the tokenized corpus cache to `out`, with the
/// run record beside it as `<out>.run.json`.
pub fn ingest(manifest_path: &Path, out: &Path, config: &AnalysisConfig) -> Result<RunRecord> {
    let started = now();
    let manifest = CorpusManifest::from_path(manifest_path).map_err(|e| e.at("load"))?;
    let corpus = load_corpus(&manifest).map_err(|e| e.at("load"))?;
    let cache = corpus.to_cache_json()?;
    let mut inputs = vec![manifest_path.to_path_buf()];
    inputs.extend(manifest.texts.iter().map(|e| manifest.resolve(e)));
    let mut record = RunRecord::new("ingest", config, started)?;
    record.inputs = digest_inputs(&inputs)?;
    let name = out
        .file_name()
        .map(|n| n.to_string_lossy().into_owned())
        .unwrap_or_else(|| "corpus.json".into());
    record.outputs = vec![FileDigest::of(name, cache.as_bytes())];
    record.notices = corpus
        .groups
        .iter()
        .filter(|g| g.members.is_empty())
        .map(|g| format!("group `{}` has no texts", g.label))
        .collect();
    record.finished_at = now();
    if let Some(parent) = out.parent().filter(|p| !p.as_os_str().is_empty()) {
        fs::create_dir_all(parent)?;
    }
    fs::write(out, cache)?;
    let mut body = serde_json::to_string_pretty(&record)?;
    body.push('\n');
    fs::write(run_record_beside(out), body)?;
    Ok(record)
}

fn run_record_beside(out: &Path) -> PathBuf {
    let mut name = out.file_name().unwrap_or_default().to_os_string();
    name.push(".run.json");
    out.with_file_name(name)
}

/// Runs the `generation` block of `config` with the transport it names.
pub fn generate(config: &AnalysisConfig) -> Result<(GenerationOutcome, Vec<LengthSummary>)> {
    let settings = config
        .generation
        .as_ref()
        .ok_or_else(|| Error::Input("config has no `generation` block".into()))?;
    let transport: Box<dyn Transport> = match settings.transport {
        TransportKind::Echo => Box::new(EchoTransport),
        TransportKind::Http => Box::new(HttpTransport::from_env(std::time::Duration::from_secs(settings.timeout_secs))?),
    };
    generate_with(config, transport.as_ref())
}

pub fn generate_with(config: &AnalysisConfig, transport: &dyn Transport) -> Result<(GenerationOutcome, Vec<LengthSummary>)> {
    let started = now();
    let settings = config
        .generation
        .as_ref()
        .ok_or_else(|| Error::Input("config has no `generation` block".into()))?;
    let out_dir = settings
        .output_dir
        .clone()
        .unwrap_or_else(|| config.output_dir.join("generated"));
    let jobs = load_jobs(&settings.jobs)?;
    let outcome = generate_corpus(&jobs, transport, &out_dir, &settings.options()?)?;
    let lengths = length_report(&outcome.records);

    let mut record = RunRecord::new("generate", config, started)?;
    record.inputs = digest_inputs(&[settings.jobs.clone()])?;
    let mut outputs = vec![
        out_dir.join("manifest.json"),
        out_dir.join("records.jsonl"),
        out_dir.join("failures.json"),
    ];
    outputs.extend(outcome.records.iter().map(|r| out_dir.join("texts").join(format!("{}.txt", r.job.id))));
    record.outputs = outputs
        .iter()
        .map(|p| {
            let bytes = fs::read(p)?;
            let rel = p.strip_prefix(&out_dir).unwrap_or(p).display().to_string();
            Ok(FileDigest::of(rel, &bytes))
        })
        .collect::<Result<_>>()?;
    record.notices = outcome
        .failures
        .iter()
        .map(|f| format!("job `{}` failed after {} attempts: {}", f.job_id, f.attempts, f.error))
        .collect();
    if outcome.resumed > 0 {
        record.notices.push(format!("{} jobs resumed from an earlier run", outcome.resumed));
    }
    record.finished_at = now();
    let mut body = serde_json::to_string_pretty(&record)?;
    body.push('\n');
    fs::write(out_dir.join(RUN_RECORD), body)?;
    Ok((outcome, lengths))
}
