use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::corpus::{Corpus, Document};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum Scope {
    Corpus,
    Group(String),
    Document(String),
}

/// Raw and per-1,000-word counts over some scope.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FrequencyTable {
    pub scope: Scope,
    pub counts: BTreeMap<String, u64>,
    pub total_words: u64,
    pub normalized: BTreeMap<String, f64>,
}

impl FrequencyTable {
    pub fn from_documents(scope: Scope, docs: &[&Document]) -> Self {
        let counts = docs
            .par_iter()
            .map(|d| count_tokens(d))
            .reduce(BTreeMap::new, merge_counts);
        let total_words = counts.values().sum();
        let normalized = counts
            .iter()
            .map(|(w, &c)| (w.clone(), per_thousand(c, total_words)))
            .collect();
        FrequencyTable {
            scope,
            counts,
            total_words,
            normalized,
        }
    }

    pub fn for_corpus(corpus: &Corpus) -> Self {
        let docs: Vec<&Document> = corpus.documents.iter().collect();
        Self::from_documents(Scope::Corpus, &docs)
    }

    pub fn rate(&self, word: &str) -> f64 {
        self.normalized.get(word).copied().unwrap_or(0.0)
    }

    /// Words by descending count; equal counts are broken alphabetically.
    pub fn ranked(&self, top_n: usize) -> Vec<RankedWord> {
        let mut entries: Vec<(&String, &u64)> = self.counts.iter().collect();
        // BTreeMap iteration is alphabetical, and the sort is stable.
        entries.sort_by(|a, b| b.1.cmp(a.1));
        entries
            .into_iter()
            .take(top_n)
            .map(|(w, &c)| RankedWord {
                word: w.clone(),
                count: c,
                rate: per_thousand(c, self.total_words),
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RankedWord {
    pub word: String,
    pub count: u64,
    /// Occurrences per 1,000 words.
    pub rate: f64,
}

impl RankedWord {
    pub fn new(word: impl Into<String>, rate: f64) -> Self {
        RankedWord {
            word: word.into(),
            count: 0,
            rate,
        }
    }
}

fn per_thousand(count: u64, total: u64) -> f64 {
    if total == 0 {
        0.0
    } else {
        1000.0 * count as f64 / total as f64
    }
}

pub(crate) fn count_tokens(doc: &Document) -> BTreeMap<String, u64> {
    let mut counts = BTreeMap::new();
    for t in &doc.tokens {
        *counts.entry(t.as_str().to_string()).or_insert(0) += 1;
    }
    counts
}

fn merge_counts(mut a: BTreeMap<String, u64>, b: BTreeMap<String, u64>) -> BTreeMap<String, u64> {
    for (w, c) in b {
        *a.entry(w).or_insert(0) += c;
    }
    a
}

/// The `top_n` most frequent words of the corpus with their pooled rate per
/// 1,000 words.
pub fn rank_words(corpus: &Corpus, top_n: usize) -> Result<Vec<RankedWord>> {
    rank_documents(&corpus.documents.iter().collect::<Vec<_>>(), top_n)
}

pub fn rank_documents(docs: &[&Document], top_n: usize) -> Result<Vec<RankedWord>> {
    if top_n == 0 {
        return Err(Error::Input("top_n must be at least 1".into()));
    }
    let table = FrequencyTable::from_documents(Scope::Corpus, docs);
    if table.total_words == 0 {
        return Err(Error::Analysis("cannot rank words of an empty corpus".into()));
    }
    Ok(table.ranked(top_n))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn corpus(texts: &[&str]) -> Corpus {
        Corpus::from_documents(
            texts
                .iter()
                .enumerate()
                .map(|(i, t)| Document::new(format!("d{i}"), "G", "t", *t))
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn single_document_ranking() {
        let r = rank_words(&corpus(&["a a b"]), 2).unwrap();
        assert_eq!(r[0].word, "a");
        assert!((r[0].rate - 666.666_666_666_666_7).abs() < 1e-9);
        assert_eq!(r[1].word, "b");
        assert!((r[1].rate - 333.333_333_333_333_3).abs() < 1e-9);
    }

    #[test]
    fn ties_break_alphabetically() {
        let r = rank_words(&corpus(&["zeta alpha mid", "mid"]), 3).unwrap();
        let words: Vec<_> = r.iter().map(|w| w.word.as_str()).collect();
        assert_eq!(words, ["mid", "alpha", "zeta"]);
    }

    #[test]
    fn empty_corpus_is_an_error() {
        assert!(matches!(rank_words(&corpus(&["123 !!"]), 5), Err(Error::Analysis(_))));
        assert!(matches!(rank_words(&corpus(&["a"]), 0), Err(Error::Input(_))));
    }

    #[test]
    fn rates_sum_to_a_thousand() {
        let c = corpus(&["the cat sat on the mat", "a dog ran"]);
        let t = FrequencyTable::for_corpus(&c);
        assert_eq!(t.counts.values().sum::<u64>(), t.total_words);
        let sum: f64 = t.normalized.values().sum();
        assert!((sum - 1000.0).abs() < 1e-9);
    }
}
