use serde::Serialize;

use super::frequency::rank_documents;
use super::lexicon::FunctionWordLexicon;
use crate::corpus::Document;
use crate::error::Result;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProfileEntry {
    pub word: String,
    /// 1-based rank.
    pub rank: usize,
    pub rate: f64,
    pub is_content: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ContentProfile {
    pub entries: Vec<ProfileEntry>,
    pub first_content_rank: Option<usize>,
    pub content_count: usize,
}

impl ContentProfile {
    pub fn content_words(&self) -> Vec<&str> {
        self.entries
            .iter()
            .filter(|e| e.is_content)
            .map(|e| e.word.as_str())
            .collect()
    }
}

/// Marks each of the `top_n` most frequent words as content (not in the lexicon)
/// or function.
pub fn content_word_profile(
    docs: &[&Document],
    top_n: usize,
    lexicon: &FunctionWordLexicon,
) -> Result<ContentProfile> {
    let ranked = rank_documents(docs, top_n)?;
    let entries: Vec<ProfileEntry> = ranked
        .into_iter()
        .enumerate()
        .map(|(i, w)| ProfileEntry {
            is_content: !lexicon.contains(&w.word),
            rank: i + 1,
            rate: w.rate,
            word: w.word,
        })
        .collect();
    let first_content_rank = entries.iter().find(|e| e.is_content).map(|e| e.rank);
    let content_count = entries.iter().filter(|e| e.is_content).count();
    Ok(ContentProfile {
        entries,
        first_content_rank,
        content_count,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pure_function_words_have_no_content() {
        let d = Document::new("d", "g", "t", "the of and the to a in is the of");
        let p = content_word_profile(&[&d], 10, &FunctionWordLexicon::builtin()).unwrap();
        assert_eq!(p.content_count, 0);
        assert_eq!(p.first_content_rank, None);
    }

    #[test]
    fn first_content_rank_is_one_based() {
        let d = Document::new("d", "g", "t", "the the the of of water");
        let p = content_word_profile(&[&d], 3, &FunctionWordLexicon::builtin()).unwrap();
        assert_eq!(p.first_content_rank, Some(3));
        assert_eq!(p.content_words(), ["water"]);
    }
}
