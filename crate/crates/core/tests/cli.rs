mod common;

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn registra(args: &[&str], cwd: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_registra"))
        .args(args)
        .current_dir(cwd)
        .env_remove("GEN_ENDPOINT")
        .env_remove("GEN_API_KEY")
        .output()
        .unwrap()
}

fn config_path() -> String {
    common::fixture_dir().join("fixture_config.json").display().to_string()
}

#[test]
fn fwpca_succeeds_with_exit_zero() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("o");
    let o = registra(&["fwpca", "--config", &config_path(), "--out", out.to_str().unwrap()], tmp.path());
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(out.join("fwpca/run.json").exists());
}

#[test]
fn relative_out_is_taken_from_the_working_directory() {
    let tmp = tempfile::tempdir().unwrap();
    let o = registra(&["pos", "--config", &config_path(), "--out", "rel"], tmp.path());
    assert_eq!(o.status.code(), Some(0));
    assert!(tmp.path().join("rel/pos/word_class_rates.csv").exists());
}

#[test]
fn input_errors_exit_one() {
    let tmp = tempfile::tempdir().unwrap();
    let o = registra(&["fwpca", "--config", "missing.json"], tmp.path());
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("missing.json"));

    let bad = tmp.path().join("bad.json");
    fs::write(&bad, r#"{"manifest": "x.json", "k": 0}"#).unwrap();
    let o = registra(&["mda", "--config", bad.to_str().unwrap()], tmp.path());
    assert_eq!(o.status.code(), Some(1));

    let o = registra(&["fwpca"], tmp.path());
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn selection_failure_leaves_no_files() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = tmp.path().join("c.json");
    let manifest = common::fixture_dir().join("corpus/manifest.json");
    fs::write(
        &cfg,
        serde_json::json!({"manifest": manifest, "min_rate": 5000.0, "output_dir": "out"}).to_string(),
    )
    .unwrap();
    let o = registra(&["fwpca", "--config", cfg.to_str().unwrap()], tmp.path());
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("select:"));
    assert!(!tmp.path().join("out").exists());
}

#[test]
fn numerical_failure_exits_two() {
    let tmp = tempfile::tempdir().unwrap();
    let dir = tmp.path();
    fs::create_dir_all(dir.join("texts")).unwrap();
    fs::create_dir_all(dir.join("tagged")).unwrap();
    let mut entries = Vec::new();
    // Every adjective precedes a noun, so the two rates are perfectly
    // correlated and the correlation matrix cannot be inverted.
    for (i, verbs) in [2, 1, 3, 1, 2, 3].iter().enumerate() {
        let id = format!("d{i}");
        let mut tagged = String::new();
        for _ in 0..=i {
            tagged.push_str("big\tJJ\ndogs\tNNS\n");
        }
        for _ in 0..*verbs {
            tagged.push_str("ran\tVBD\n");
        }
        tagged.push_str(".\t.\n");
        fs::write(dir.join(format!("tagged/{id}.tsv")), tagged).unwrap();
        fs::write(dir.join(format!("texts/{id}.txt")), "unused").unwrap();
        entries.push(serde_json::json!({"id": id, "path": format!("texts/{id}.txt"), "group": if i % 2 == 0 { "a" } else { "b" }, "topic": "t"}));
    }
    fs::write(dir.join("manifest.json"), serde_json::json!({"groups": ["a", "b"], "texts": entries}).to_string()).unwrap();
    fs::write(
        dir.join("c.json"),
        serde_json::json!({"manifest": "manifest.json", "tagged_dir": "tagged", "tag_min_rate": 0.001, "k": 1}).to_string(),
    )
    .unwrap();
    let o = registra(&["mda", "--config", "c.json", "--out", "o"], dir);
    let stderr = String::from_utf8_lossy(&o.stderr);
    assert_eq!(o.status.code(), Some(2), "{stderr}");
    assert!(stderr.contains("factor:"), "{stderr}");
    assert!(!dir.join("o").exists());
}

#[test]
fn ingest_then_analyse_from_cache() {
    let tmp = tempfile::tempdir().unwrap();
    let manifest = common::fixture_dir().join("corpus/manifest.json");
    let cache = tmp.path().join("cache/corpus.json");
    let o = registra(
        &["ingest", "--manifest", manifest.to_str().unwrap(), "--out", cache.to_str().unwrap()],
        tmp.path(),
    );
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(cache.exists());
    let record: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(tmp.path().join("cache/corpus.json.run.json")).unwrap()).unwrap();
    assert_eq!(record["command"], "ingest");
    assert_eq!(record["inputs"].as_array().unwrap().len(), 25);

    let cfg = tmp.path().join("c.json");
    fs::write(&cfg, serde_json::json!({"corpus_cache": cache, "output_dir": "o"}).to_string()).unwrap();
    let o = registra(&["fwpca", "--config", cfg.to_str().unwrap()], tmp.path());
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let from_cache = fs::read(tmp.path().join("o/fwpca/scores.csv")).unwrap();
    let o = registra(&["fwpca", "--config", &config_path(), "--out", "direct"], tmp.path());
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(from_cache, fs::read(tmp.path().join("direct/fwpca/scores.csv")).unwrap());
}

#[test]
fn generate_with_echo_transport() {
    let tmp = tempfile::tempdir().unwrap();
    let jobs = tmp.path().join("jobs.json");
    fs::write(
        &jobs,
        r#"[{"id": "a1", "template": "P2-wiki", "topic": "photosynthesis", "group": "wiki_p2", "retry": {"backoff_ms": 0}}]"#,
    )
    .unwrap();
    let cfg = tmp.path().join("c.json");
    fs::write(&cfg, r#"{"generation": {"jobs": "jobs.json", "transport": "echo"}}"#).unwrap();
    let o = registra(&["generate", "--config", cfg.to_str().unwrap(), "--out", "g"], tmp.path());
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let text = fs::read_to_string(tmp.path().join("g/generated/texts/a1.txt")).unwrap();
    assert_eq!(text, "Write a 1,000-word encyclopedia page on photosynthesis");
    let run = fs::read_to_string(tmp.path().join("g/generated/run.json")).unwrap();
    assert!(run.contains("\"command\": \"generate\""));
}

#[test]
fn generate_without_endpoint_explains_the_variable() {
    let tmp = tempfile::tempdir().unwrap();
    fs::write(tmp.path().join("jobs.json"), "[]").unwrap();
    let cfg = tmp.path().join("c.json");
    fs::write(&cfg, r#"{"generation": {"jobs": "jobs.json"}}"#).unwrap();
    let o = registra(&["generate", "--config", cfg.to_str().unwrap()], tmp.path());
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("GEN_ENDPOINT"));
}
