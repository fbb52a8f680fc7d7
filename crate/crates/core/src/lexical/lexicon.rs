use std::collections::HashSet;
use std::fs;
use std::path::Path;

use crate::error::{Error, Result};

const BUILTIN: &str = include_str!("../../data/function_words.txt");

/// Closed-class word inventory used to separate function words from content words.
#[derive(Debug, Clone)]
pub struct FunctionWordLexicon {
    id: String,
    words: HashSet<String>,
}

impl FunctionWordLexicon {
    pub fn builtin() -> Self {
        Self::parse("builtin-v1", BUILTIN)
    }

    pub fn from_path(path: &Path) -> Result<Self> {
        let body = fs::read_to_string(path).map_err(|source| Error::Load {
            path: path.to_path_buf(),
            source,
        })?;
        Ok(Self::parse(&path.display().to_string(), &body))
    }

    /// One word per line; `#` starts a comment. Words are lowercased.
    pub fn parse(id: &str, body: &str) -> Self {
        let words = body
            .lines()
            .map(|l| l.split('#').next().unwrap_or("").trim())
            .filter(|l| !l.is_empty())
            .map(str::to_lowercase)
            .collect();
        FunctionWordLexicon { id: id.to_string(), words }
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn contains(&self, word: &str) -> bool {
        self.words.contains(word)
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }
}

impl Default for FunctionWordLexicon {
    fn default() -> Self {
        Self::builtin()
    }
}
