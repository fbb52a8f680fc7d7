use std::collections::HashSet;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// One text in a manifest. `path` is resolved against the manifest's directory.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ManifestEntry {
    pub id: String,
    pub path: String,
    pub group: String,
    pub topic: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorpusManifest {
    pub groups: Vec<String>,
    pub texts: Vec<ManifestEntry>,
    #[serde(skip)]
    pub base_dir: PathBuf,
}

impl CorpusManifest {
    pub fn new(groups: Vec<String>, texts: Vec<ManifestEntry>) -> Self {
        CorpusManifest {
            groups,
            texts,
            base_dir: PathBuf::new(),
        }
    }

    /// JSON manifest, or the TAB-separated form when the extension is `.tsv`.
    pub fn from_path(path: &Path) -> Result<Self> {
        let body = fs::read_to_string(path).map_err(|source| Error::Load {
            path: path.to_path_buf(),
            source,
        })?;
        let base_dir = path.parent().map(Path::to_path_buf).unwrap_or_default();
        if path.extension().is_some_and(|e| e.eq_ignore_ascii_case("tsv")) {
            return Self::from_tsv(&body, &base_dir);
        }
        let mut manifest: CorpusManifest = serde_json::from_str(&body)
            .map_err(|e| Error::Manifest(format!("{}: {e}", path.display())))?;
        manifest.base_dir = base_dir;
        manifest.validate()?;
        Ok(manifest)
    }

    /// Converts `id<TAB>path<TAB>group<TAB>topic` lines. Groups are declared in
    /// order of first appearance; `#` lines and blank lines are skipped.
    pub fn from_tsv(body: &str, base_dir: &Path) -> Result<Self> {
        let mut groups: Vec<String> = Vec::new();
        let mut texts = Vec::new();
        for (n, line) in body.lines().enumerate() {
            let line = line.trim_end_matches('\r');
            if line.trim().is_empty() || line.starts_with('#') {
                continue;
            }
            let fields: Vec<&str> = line.split('\t').collect();
            let [id, path, group, topic] = fields[..] else {
                return Err(Error::Parse {
                    line: n + 1,
                    message: format!("expected 4 TAB-separated fields, found {}", fields.len()),
                });
            };
            if !groups.iter().any(|g| g == group) {
                groups.push(group.to_string());
            }
            texts.push(ManifestEntry {
                id: id.to_string(),
                path: path.to_string(),
                group: group.to_string(),
                topic: topic.to_string(),
            });
        }
        let mut manifest = CorpusManifest::new(groups, texts);
        manifest.base_dir = base_dir.to_path_buf();
        manifest.validate()?;
        Ok(manifest)
    }

    pub fn validate(&self) -> Result<()> {
        let mut declared = HashSet::new();
        for g in &self.groups {
            if !declared.insert(g.as_str()) {
                return Err(Error::Manifest(format!("group `{g}` declared twice")));
            }
        }
        let mut ids = HashSet::new();
        let mut paths = HashSet::new();
        for entry in &self.texts {
            if entry.id.is_empty() {
                return Err(Error::Manifest(format!("entry for `{}` has an empty id", entry.path)));
            }
            if !declared.contains(entry.group.as_str()) {
                return Err(Error::Manifest(format!(
                    "text `{}` uses undeclared group `{}`",
                    entry.id, entry.group
                )));
            }
            if !ids.insert(entry.id.as_str()) {
                return Err(Error::Manifest(format!("duplicate text id `{}`", entry.id)));
            }
            if !paths.insert(entry.path.as_str()) {
                return Err(Error::Manifest(format!("duplicate path `{}`", entry.path)));
            }
        }
        Ok(())
    }

    pub fn resolve(&self, entry: &ManifestEntry) -> PathBuf {
        let p = Path::new(&entry.path);
        if p.is_absolute() {
            p.to_path_buf()
        } else {
            self.base_dir.join(p)
        }
    }

    pub fn to_json(&self) -> Result<String> {
        let mut s = serde_json::to_string_pretty(self)?;
        s.push('\n');
        Ok(s)
    }
}
