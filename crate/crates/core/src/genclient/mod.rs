//! Corpus regeneration: prompt templates rendered per topic, sent through a
//! pluggable transport, saved as a manifest-backed corpus.

mod template;
mod transport;

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fs::{self, File, OpenOptions};
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicBool, AtomicUsize, Ordering};
use std::sync::Mutex;
use std::thread;
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};
use sha2::{Digest, Sha256};

use crate::corpus::{word_count, CorpusManifest, ManifestEntry};
use crate::error::{Error, Result};

pub use template::{render_prompt, PromptTemplate, TemplateId, PLACEHOLDER};
pub use transport::{
    DenyTransport, EchoTransport, FlakyTransport, HttpTransport, Transport, API_KEY_VAR, ENDPOINT_VAR,
};

pub const SAMPLE_JOBS: &str = include_str!("../../data/sample_jobs.json");

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RetryPolicy {
    pub max_attempts: u32,
    pub backoff_ms: u64,
    pub multiplier: f64,
    pub max_backoff_ms: u64,
}

impl Default for RetryPolicy {
    fn default() -> Self {
        RetryPolicy {
            max_attempts: 3,
            backoff_ms: 2000,
            multiplier: 2.0,
            max_backoff_ms: 60_000,
        }
    }
}

impl RetryPolicy {
    /// Pause after the given failed attempt (1-based).
    pub fn delay(&self, attempt: u32) -> Duration {
        let ms = self.backoff_ms as f64 * self.multiplier.powi(attempt.saturating_sub(1) as i32);
        Duration::from_millis(ms.min(self.max_backoff_ms as f64) as u64)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GenerationJob {
    /// File stem of the generated text and its manifest id.
    pub id: String,
    pub template: TemplateId,
    pub topic: String,
    pub group: String,
    /// Sampling fields sent verbatim with the request.
    #[serde(default)]
    pub params: Map<String, Value>,
    #[serde(default)]
    pub retry: RetryPolicy,
}

impl GenerationJob {
    pub fn new(id: &str, template: TemplateId, topic: &str, group: &str) -> Self {
        GenerationJob {
            id: id.into(),
            template,
            topic: topic.into(),
            group: group.into(),
            params: Map::new(),
            retry: RetryPolicy::default(),
        }
    }

    fn validate(&self) -> Result<()> {
        let safe = !self.id.is_empty()
            && !self.id.starts_with('.')
            && self
                .id
                .chars()
                .all(|c| c.is_ascii_alphanumeric() || matches!(c, '-' | '_' | '.'));
        if !safe {
            return Err(Error::Input(format!("job id `{}` is not a safe file name", self.id)));
        }
        if self.retry.max_attempts < 1 {
            return Err(Error::Input(format!("job `{}`: max_attempts must be at least 1", self.id)));
        }
        if self.group.is_empty() {
            return Err(Error::Input(format!("job `{}` has no target group", self.id)));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GenerationRecord {
    pub job: GenerationJob,
    pub prompt: String,
    pub response: String,
    pub word_count: usize,
    pub timestamp: String,
    pub attempts: u32,
    /// SHA-256 of the transport identity.
    pub endpoint_digest: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JobFailure {
    pub job_id: String,
    pub template: TemplateId,
    pub topic: String,
    pub group: String,
    pub attempts: u32,
    pub error: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GenerationOutcome {
    pub manifest: CorpusManifest,
    pub manifest_path: PathBuf,
    /// Records of every successful job, in job order.
    pub records: Vec<GenerationRecord>,
    pub failures: Vec<JobFailure>,
    /// Jobs skipped because an earlier run already completed them.
    pub resumed: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum TransportKind {
    #[default]
    Http,
    Echo,
}

/// The `generation` block of a run configuration. Endpoint and key are
/// never read from here; see [`ENDPOINT_VAR`] and [`API_KEY_VAR`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GenerationSettings {
    pub jobs: PathBuf,
    /// Defaults to `<output_dir>/generated`.
    pub output_dir: Option<PathBuf>,
    pub concurrency: usize,
    pub rate_limit_per_minute: Option<u32>,
    pub timeout_secs: u64,
    pub transport: TransportKind,
    /// Replacement template texts.
    pub templates: BTreeMap<TemplateId, String>,
}

impl Default for GenerationSettings {
    fn default() -> Self {
        GenerationSettings {
            jobs: PathBuf::from("jobs.json"),
            output_dir: None,
            concurrency: 2,
            rate_limit_per_minute: None,
            timeout_secs: 120,
            transport: TransportKind::Http,
            templates: BTreeMap::new(),
        }
    }
}

impl GenerationSettings {
    pub fn resolve_paths(&mut self, base: &Path) {
        if self.jobs.is_relative() {
            self.jobs = base.join(&self.jobs);
        }
        if let Some(d) = &mut self.output_dir {
            if d.is_relative() {
                *d = base.join(&*d);
            }
        }
    }

    pub fn options(&self) -> Result<GenerationOptions> {
        let mut templates: BTreeMap<TemplateId, PromptTemplate> =
            TemplateId::ALL.iter().map(|&id| (id, PromptTemplate::builtin(id))).collect();
        for (&id, text) in &self.templates {
            templates.insert(id, PromptTemplate::new(id, text.clone())?);
        }
        Ok(GenerationOptions {
            concurrency: self.concurrency.max(1),
            rate_limit_per_minute: self.rate_limit_per_minute,
            templates,
        })
    }
}

#[derive(Debug, Clone)]
pub struct GenerationOptions {
    pub concurrency: usize,
    pub rate_limit_per_minute: Option<u32>,
    pub templates: BTreeMap<TemplateId, PromptTemplate>,
}

impl Default for GenerationOptions {
    fn default() -> Self {
        GenerationSettings::default()
            .options()
            .expect("built-in templates are valid")
    }
}

pub fn load_jobs(path: &Path) -> Result<Vec<GenerationJob>> {
    let body = fs::read_to_string(path).map_err(|source| Error::Load {
        path: path.to_path_buf(),
        source,
    })?;
    serde_json::from_str(&body).map_err(|e| Error::Input(format!("jobs file {}: {e}", path.display())))
}

pub fn sample_jobs() -> Vec<GenerationJob> {
    serde_json::from_str(SAMPLE_JOBS).expect("bundled jobs file parses")
}

/// Spaces requests at least `interval` apart across all workers.
struct RateLimiter {
    interval: Option<Duration>,
    next: Mutex<Option<Instant>>,
}

impl RateLimiter {
    fn new(per_minute: Option<u32>) -> Self {
        RateLimiter {
            interval: per_minute
                .filter(|&n| n > 0)
                .map(|n| Duration::from_secs_f64(60.0 / n as f64)),
            next: Mutex::new(None),
        }
    }

    fn wait(&self) {
        let Some(interval) = self.interval else { return };
        let slot = {
            let mut next = self.next.lock().expect("rate limiter poisoned");
            let now = Instant::now();
            let slot = next.map_or(now, |t| t.max(now));
            *next = Some(slot + interval);
            slot
        };
        let now = Instant::now();
        if slot > now {
            thread::sleep(slot - now);
        }
    }
}

fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

fn text_path(out_dir: &Path, id: &str) -> PathBuf {
    out_dir.join("texts").join(format!("{id}.txt"))
}

fn read_previous_records(path: &Path) -> Vec<GenerationRecord> {
    let Ok(body) = fs::read_to_string(path) else {
        return Vec::new();
    };
    body.lines()
        .filter_map(|l| serde_json::from_str::<GenerationRecord>(l).ok())
        .collect()
}

fn write_json_lines(path: &Path, records: &[GenerationRecord]) -> Result<()> {
    let mut body = String::new();
    for r in records {
        body.push_str(&serde_json::to_string(r)?);
        body.push('\n');
    }
    fs::write(path, body)?;
    Ok(())
}

enum JobResult {
    Done(GenerationRecord),
    Failed(JobFailure),
    Aborted(String),
}

fn run_job(
    job: &GenerationJob,
    prompt: &str,
    transport: &dyn Transport,
    limiter: &RateLimiter,
    abort: &AtomicBool,
) -> std::result::Result<(String, u32), JobResult> {
    let mut last = String::new();
    let mut attempts = 0;
    for attempt in 1..=job.retry.max_attempts {
        if abort.load(Ordering::SeqCst) {
            return Err(JobResult::Aborted("run aborted".into()));
        }
        attempts = attempt;
        limiter.wait();
        match transport.complete(prompt, &job.params) {
            Ok(text) if !text.trim().is_empty() => return Ok((text, attempt)),
            Ok(_) => last = "empty response".into(),
            Err(e) if matches!(e.root(), Error::Auth(_)) => {
                abort.store(true, Ordering::SeqCst);
                return Err(JobResult::Aborted(e.to_string()));
            }
            Err(e) => last = e.to_string(),
        }
        log::warn!("job {} attempt {attempt} failed: {last}", job.id);
        if attempt < job.retry.max_attempts {
            thread::sleep(job.retry.delay(attempt));
        }
    }
    Err(JobResult::Failed(JobFailure {
        job_id: job.id.clone(),
        template: job.template,
        topic: job.topic.clone(),
        group: job.group.clone(),
        attempts,
        error: last,
    }))
}

/// Runs every job not already completed in `out_dir`, writing
/// `texts/<id>.txt`, `records.jsonl`, `failures.json` and `manifest.json`.
pub fn generate_corpus(
    jobs: &[GenerationJob],
    transport: &dyn Transport,
    out_dir: &Path,
    options: &GenerationOptions,
) -> Result<GenerationOutcome> {
    let mut ids = HashSet::new();
    let mut prompts = Vec::with_capacity(jobs.len());
    for job in jobs {
        job.validate()?;
        if !ids.insert(job.id.as_str()) {
            return Err(Error::Input(format!("duplicate job id `{}`", job.id)));
        }
        let template = options
            .templates
            .get(&job.template)
            .ok_or_else(|| Error::Input(format!("no template {}", job.template)))?;
        prompts.push(render_prompt(template, &job.topic)?);
    }
    fs::create_dir_all(out_dir.join("texts"))?;
    let records_path = out_dir.join("records.jsonl");

    let mut done: HashMap<String, GenerationRecord> = HashMap::new();
    for r in read_previous_records(&records_path) {
        let current = jobs.iter().find(|j| j.id == r.job.id);
        let intact = fs::read(text_path(out_dir, &r.job.id))
            .map(|b| sha256_hex(&b) == sha256_hex(r.response.as_bytes()))
            .unwrap_or(false);
        if current == Some(&r.job) && intact {
            done.insert(r.job.id.clone(), r);
        }
    }
    let resumed = done.len();
    let pending: Vec<usize> = (0..jobs.len()).filter(|&i| !done.contains_key(&jobs[i].id)).collect();

    let endpoint_digest = sha256_hex(transport.identity().as_bytes());
    let limiter = RateLimiter::new(options.rate_limit_per_minute);
    let abort = AtomicBool::new(false);
    let cursor = AtomicUsize::new(0);
    let results: Mutex<Vec<Option<JobResult>>> = Mutex::new((0..jobs.len()).map(|_| None).collect());
    let log_file: Mutex<File> = Mutex::new(OpenOptions::new().create(true).append(true).open(&records_path)?);
    let io_error: Mutex<Option<Error>> = Mutex::new(None);

    let workers = options.concurrency.max(1).min(pending.len().max(1));
    thread::scope(|s| {
        for _ in 0..workers {
            s.spawn(|| loop {
                let k = cursor.fetch_add(1, Ordering::SeqCst);
                let Some(&i) = pending.get(k) else { break };
                let job = &jobs[i];
                let result = match run_job(job, &prompts[i], transport, &limiter, &abort) {
                    Ok((response, attempts)) => {
                        let record = GenerationRecord {
                            job: job.clone(),
                            prompt: prompts[i].clone(),
                            word_count: word_count(&response),
                            response,
                            timestamp: chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true),
                            attempts,
                            endpoint_digest: endpoint_digest.clone(),
                        };
                        let saved = fs::write(text_path(out_dir, &job.id), record.response.as_bytes())
                            .map_err(Error::from)
                            .and_then(|_| {
                                let line = serde_json::to_string(&record)?;
                                let mut f = log_file.lock().expect("record log poisoned");
                                writeln!(f, "{line}")?;
                                Ok(())
                            });
                        if let Err(e) = saved {
                            io_error.lock().expect("error slot poisoned").get_or_insert(e);
                            abort.store(true, Ordering::SeqCst);
                        }
                        JobResult::Done(record)
                    }
                    Err(r) => r,
                };
                results.lock().expect("result table poisoned")[i] = Some(result);
            });
        }
    });

    if let Some(e) = io_error.into_inner().expect("error slot poisoned") {
        return Err(e);
    }
    let results = results.into_inner().expect("result table poisoned");
    let mut records = Vec::new();
    let mut failures = Vec::new();
    let mut auth = None;
    for (i, job) in jobs.iter().enumerate() {
        if let Some(r) = done.remove(&job.id) {
            records.push(r);
            continue;
        }
        match &results[i] {
            Some(JobResult::Done(r)) => records.push(r.clone()),
            Some(JobResult::Failed(f)) => failures.push(f.clone()),
            Some(JobResult::Aborted(msg)) => {
                auth.get_or_insert_with(|| msg.clone());
            }
            None => {}
        }
    }
    if let Some(msg) = auth {
        return Err(Error::Auth(format!(
            "{msg}; completed jobs are kept in {} and will be skipped on the next run. \
             Set {ENDPOINT_VAR} and {API_KEY_VAR} in the environment",
            records_path.display()
        )));
    }

    write_json_lines(&records_path, &records)?;
    fs::write(out_dir.join("failures.json"), serde_json::to_string_pretty(&failures)? + "\n")?;

    let mut groups: Vec<String> = Vec::new();
    for job in jobs {
        if !groups.contains(&job.group) {
            groups.push(job.group.clone());
        }
    }
    let texts = records
        .iter()
        .map(|r| ManifestEntry {
            id: r.job.id.clone(),
            path: format!("texts/{}.txt", r.job.id),
            group: r.job.group.clone(),
            topic: r.job.topic.clone(),
        })
        .collect();
    let mut manifest = CorpusManifest::new(groups, texts);
    manifest.validate()?;
    let manifest_path = out_dir.join("manifest.json");
    fs::write(&manifest_path, manifest.to_json()?)?;
    manifest.base_dir = out_dir.to_path_buf();

    Ok(GenerationOutcome {
        manifest,
        manifest_path,
        records,
        failures,
        resumed,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LengthSummary {
    pub template: TemplateId,
    pub n: usize,
    pub mean: f64,
    pub min: usize,
    pub max: usize,
}

/// Response lengths per template, in words as counted by the corpus tokenizer.
pub fn length_report(records: &[GenerationRecord]) -> Vec<LengthSummary> {
    let mut by: BTreeMap<TemplateId, Vec<usize>> = BTreeMap::new();
    for r in records {
        by.entry(r.job.template).or_default().push(word_count(&r.response));
    }
    by.into_iter()
        .map(|(template, counts)| LengthSummary {
            template,
            n: counts.len(),
            mean: counts.iter().sum::<usize>() as f64 / counts.len() as f64,
            min: counts.iter().copied().min().unwrap_or(0),
            max: counts.iter().copied().max().unwrap_or(0),
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn backoff_grows_and_caps() {
        let p = RetryPolicy {
            max_attempts: 5,
            backoff_ms: 100,
            multiplier: 2.0,
            max_backoff_ms: 300,
        };
        assert_eq!(p.delay(1), Duration::from_millis(100));
        assert_eq!(p.delay(2), Duration::from_millis(200));
        assert_eq!(p.delay(3), Duration::from_millis(300));
    }

    #[test]
    fn sample_jobs_cover_ten_topics() {
        let jobs = sample_jobs();
        let topics: HashSet<&str> = jobs.iter().map(|j| j.topic.as_str()).collect();
        assert_eq!(topics.len(), 10);
        for j in &jobs {
            j.validate().unwrap();
        }
    }

    #[test]
    fn unsafe_ids_are_rejected() {
        for id in ["", "../x", ".hidden", "a/b"] {
            assert!(GenerationJob::new(id, TemplateId::P1Essay, "t", "g").validate().is_err());
        }
    }

    #[test]
    fn one_record_length() {
        let job = GenerationJob::new("a", TemplateId::P2Essay, "t", "g");
        let response = vec!["word"; 500].join(" ");
        let rec = GenerationRecord {
            job,
            prompt: "p".into(),
            word_count: 500,
            response,
            timestamp: String::new(),
            attempts: 1,
            endpoint_digest: String::new(),
        };
        let rep = length_report(&[rec]);
        assert_eq!(rep.len(), 1);
        assert_eq!(rep[0].mean, 500.0);
        assert_eq!((rep[0].min, rep[0].max), (500, 500));
    }
}
