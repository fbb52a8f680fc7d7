use std::fmt;

use serde::{Deserialize, Serialize};

/// A case-folded run of alphabetic characters.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Token(String);

impl Token {
    pub fn as_str(&self) -> &str {
        &self.0
    }

    pub fn into_string(self) -> String {
        self.0
    }
}

impl fmt::Display for Token {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl AsRef<str> for Token {
    fn as_ref(&self) -> &str {
        &self.0
    }
}

/// Splits text into maximal runs of alphabetic characters and case-folds each run.
///
/// Everything that is not alphabetic (digits, punctuation, apostrophes, hyphens,
/// whitespace) separates tokens, so `"It's"` yields `it` and `s`.
pub fn tokenize(raw_text: &str) -> Vec<Token> {
    let mut tokens = Vec::new();
    let mut start: Option<usize> = None;
    for (i, c) in raw_text.char_indices() {
        if c.is_alphabetic() {
            start.get_or_insert(i);
        } else if let Some(s) = start.take() {
            push_folded(&mut tokens, &raw_text[s..i]);
        }
    }
    if let Some(s) = start {
        push_folded(&mut tokens, &raw_text[s..]);
    }
    tokens
}

fn push_folded(tokens: &mut Vec<Token>, run: &str) {
    let folded = caseless::default_case_fold_str(run);
    // Folding can in principle introduce non-letters (combining marks); re-split to
    // keep the alphabetic-only invariant.
    if folded.chars().all(char::is_alphabetic) {
        tokens.push(Token(folded));
    } else {
        tokens.extend(
            folded
                .split(|c: char| !c.is_alphabetic())
                .filter(|s| !s.is_empty())
                .map(|s| Token(s.to_string())),
        );
    }
}

/// Word count under the alphabetic-run rule.
pub fn word_count(raw_text: &str) -> usize {
    tokenize(raw_text).len()
}
