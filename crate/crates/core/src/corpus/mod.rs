//! Corpus ingestion: manifests, documents, group index and the alphabetic-run
//! tokenizer shared by every lexical analysis.

mod manifest;
mod tokenize;

use std::collections::{HashMap, HashSet};
use std::fs;
use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use manifest::{CorpusManifest, ManifestEntry};
pub use tokenize::{tokenize, word_count, Token};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Document {
    pub id: String,
    pub group: String,
    pub topic: String,
    pub raw_text: String,
    pub tokens: Vec<Token>,
    pub word_count: usize,
}

impl Document {
    pub fn new(id: impl Into<String>, group: impl Into<String>, topic: impl Into<String>, raw_text: impl Into<String>) -> Self {
        let raw_text = raw_text.into();
        let tokens = tokenize(&raw_text);
        Document {
            id: id.into(),
            group: group.into(),
            topic: topic.into(),
            word_count: tokens.len(),
            tokens,
            raw_text,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroupIndex {
    pub label: String,
    pub members: Vec<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GroupSummary {
    pub n_texts: usize,
    pub total_words: usize,
    pub mean_length: f64,
}

/// Documents in manifest order plus the declared group index.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Corpus {
    pub documents: Vec<Document>,
    pub groups: Vec<GroupIndex>,
}

impl Corpus {
    /// Builds a corpus from already-constructed documents. Groups are declared in
    /// order of first appearance.
    pub fn from_documents(documents: Vec<Document>) -> Result<Self> {
        let mut labels: Vec<String> = Vec::new();
        for d in &documents {
            if !labels.contains(&d.group) {
                labels.push(d.group.clone());
            }
        }
        Self::with_groups(labels, documents)
    }

    pub fn with_groups(labels: Vec<String>, documents: Vec<Document>) -> Result<Self> {
        let mut seen = HashSet::new();
        for d in &documents {
            if !seen.insert(d.id.as_str()) {
                return Err(Error::Manifest(format!("duplicate text id `{}`", d.id)));
            }
        }
        let mut groups: Vec<GroupIndex> = labels
            .into_iter()
            .map(|label| GroupIndex { label, members: Vec::new() })
            .collect();
        for d in &documents {
            let g = groups
                .iter_mut()
                .find(|g| g.label == d.group)
                .ok_or_else(|| Error::Manifest(format!("text `{}` uses undeclared group `{}`", d.id, d.group)))?;
            g.members.push(d.id.clone());
        }
        Ok(Corpus { documents, groups })
    }

    pub fn len(&self) -> usize {
        self.documents.len()
    }

    pub fn is_empty(&self) -> bool {
        self.documents.is_empty()
    }

    pub fn total_words(&self) -> usize {
        self.documents.iter().map(|d| d.word_count).sum()
    }

    pub fn group_labels(&self) -> Vec<&str> {
        self.groups.iter().map(|g| g.label.as_str()).collect()
    }

    pub fn document(&self, id: &str) -> Option<&Document> {
        self.documents.iter().find(|d| d.id == id)
    }

    pub fn group_documents(&self, group: &str) -> Result<Vec<&Document>> {
        if !self.groups.iter().any(|g| g.label == group) {
            return Err(Error::UnknownGroup(group.to_string()));
        }
        Ok(self.documents.iter().filter(|d| d.group == group).collect())
    }

    pub fn group_summary(&self, group: &str) -> Result<GroupSummary> {
        let docs = self.group_documents(group)?;
        Ok(summarize_docs(&docs))
    }

    /// Summary over several groups pooled together.
    pub fn pooled_summary(&self, groups: &[&str]) -> Result<GroupSummary> {
        let mut docs = Vec::new();
        for g in groups {
            docs.extend(self.group_documents(g)?);
        }
        Ok(summarize_docs(&docs))
    }

    /// Keeps only documents of the listed groups, in corpus order.
    pub fn subset(&self, groups: &[String]) -> Result<Corpus> {
        for g in groups {
            if !self.groups.iter().any(|x| &x.label == g) {
                return Err(Error::UnknownGroup(g.clone()));
            }
        }
        let labels: Vec<String> = self
            .groups
            .iter()
            .filter(|g| groups.contains(&g.label))
            .map(|g| g.label.clone())
            .collect();
        let docs = self
            .documents
            .iter()
            .filter(|d| groups.contains(&d.group))
            .cloned()
            .collect();
        Corpus::with_groups(labels, docs)
    }

    /// Deterministic JSON serialization used as the ingest cache.
    pub fn to_cache_json(&self) -> Result<String> {
        let mut s = serde_json::to_string_pretty(self)?;
        s.push('\n');
        Ok(s)
    }

    pub fn from_cache_json(body: &str) -> Result<Self> {
        let corpus: Corpus = serde_json::from_str(body)?;
        corpus.check_invariants()?;
        Ok(corpus)
    }

    pub fn check_invariants(&self) -> Result<()> {
        let mut owner: HashMap<&str, &str> = HashMap::new();
        for g in &self.groups {
            for id in &g.members {
                if owner.insert(id, &g.label).is_some() {
                    return Err(Error::Validation(format!("document `{id}` appears in more than one group")));
                }
            }
        }
        for d in &self.documents {
            if owner.get(d.id.as_str()) != Some(&d.group.as_str()) {
                return Err(Error::Validation(format!("document `{}` missing from group `{}`", d.id, d.group)));
            }
            if d.word_count != d.tokens.len() || d.tokens != tokenize(&d.raw_text) {
                return Err(Error::Validation(format!("document `{}` tokens do not match its text", d.id)));
            }
        }
        if owner.len() != self.documents.len() {
            return Err(Error::Validation("group index lists unknown documents".into()));
        }
        Ok(())
    }
}

fn summarize_docs(docs: &[&Document]) -> GroupSummary {
    let n_texts = docs.len();
    let total_words: usize = docs.iter().map(|d| d.word_count).sum();
    let mean_length = if n_texts == 0 { 0.0 } else { total_words as f64 / n_texts as f64 };
    GroupSummary {
        n_texts,
        total_words,
        mean_length,
    }
}

/// Reads and tokenizes every manifest entry. Files are read in parallel; the
/// result is in manifest order regardless.
pub fn load_corpus(manifest: &CorpusManifest) -> Result<Corpus> {
    manifest.validate()?;
    let documents: Vec<Document> = manifest
        .texts
        .par_iter()
        .map(|entry| {
            let path = manifest.resolve(entry);
            let raw = fs::read_to_string(&path).map_err(|source| Error::Load { path, source })?;
            Ok(Document::new(&entry.id, &entry.group, &entry.topic, raw))
        })
        .collect::<Result<_>>()?;
    Corpus::with_groups(manifest.groups.clone(), documents)
}

pub fn load_corpus_from_path(path: &Path) -> Result<Corpus> {
    load_corpus(&CorpusManifest::from_path(path)?)
}
