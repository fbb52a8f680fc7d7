use std::collections::HashMap;
use std::path::Path;

use super::tagset::is_valid_tag;
use crate::error::{Error, Result};

/// Word to most-likely-tag lookup table.
#[derive(Debug, Clone, Default)]
pub struct TagLexicon {
    entries: HashMap<String, String>,
}

impl TagLexicon {
    pub fn parse(text: &str) -> Result<Self> {
        let mut entries = HashMap::new();
        for (n, line) in text.lines().enumerate() {
            if line.starts_with('#') || line.starts_with(";;;") || line.trim().is_empty() {
                continue;
            }
            let mut parts = line.split_whitespace();
            let (Some(word), Some(tag), None) = (parts.next(), parts.next(), parts.next()) else {
                return Err(Error::Parse {
                    line: n + 1,
                    message: format!("expected `word TAG`, got {line:?}"),
                });
            };
            if !is_valid_tag(tag) {
                return Err(Error::Validation(format!("lexicon line {}: unknown tag {tag}", n + 1)));
            }
            entries.insert(word.to_string(), tag.to_string());
        }
        Ok(TagLexicon { entries })
    }

    pub fn from_path(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| Error::Load {
            path: path.to_path_buf(),
            source,
        })?;
        Self::parse(&text)
    }

    pub fn get(&self, word: &str) -> Option<&str> {
        self.entries.get(word).map(String::as_str)
    }

    pub fn insert(&mut self, word: &str, tag: &str) {
        self.entries.insert(word.to_string(), tag.to_string());
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}
