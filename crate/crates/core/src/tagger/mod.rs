//! Part-of-speech tagging and per-document grammatical feature rates.
//!
//! The built-in tagger assigns each token its lexicon tag (or a guess from
//! its shape and suffix) and then applies contextual transformation rules.
//! Streams produced by another tagger can be read with [`ingest_tagged`].

mod features;
mod lexicon;
mod rules;
mod stream;
mod tagset;
mod tokenize;
mod unknown;

use std::path::Path;
use std::sync::OnceLock;

use crate::corpus::Document;
use crate::error::Result;

pub use features::{
    annotate, extract_biber_features, extract_with, feature_csv, feature_vector, word_class_profile,
    BiberFeatureVector, FeatureCode, FeatureLists, WordClassProfile, WORD_CLASS_TAGS,
};
pub use lexicon::TagLexicon;
pub use rules::RuleSet;
pub use stream::{ingest_tagged, parse_tagged, TagStream, TaggedToken};
pub use tagset::{is_noun, is_valid_tag, TAGSET};
pub use tokenize::{tokenize as tagger_tokenize, tokenize_sentences};
pub use unknown::guess as guess_unknown;

/// Context rules may look at most this many tokens to either side.
pub const MAX_CONTEXT: usize = 2;

const OPENERS: &[&str] = &["``", "-LRB-", ":", "--"];

#[derive(Debug, Clone)]
pub struct Tagger {
    lexicon: TagLexicon,
    rules: RuleSet,
}

impl Tagger {
    pub fn new(lexicon: TagLexicon, rules: RuleSet) -> Self {
        Tagger { lexicon, rules }
    }

    /// The bundled lexicon and rules, loaded once.
    pub fn builtin() -> &'static Tagger {
        static TAGGER: OnceLock<Tagger> = OnceLock::new();
        TAGGER.get_or_init(|| {
            let lexicon = TagLexicon::parse(include_str!("../../data/lexicon.txt"))
                .expect("bundled lexicon is valid");
            let mut rules = RuleSet::parse(include_str!("../../data/context_rules.txt"), MAX_CONTEXT)
                .expect("bundled rules are valid");
            rules.extend(
                RuleSet::parse(include_str!("../../data/extra_rules.txt"), MAX_CONTEXT)
                    .expect("bundled rules are valid"),
            );
            Tagger { lexicon, rules }
        })
    }

    /// Loads a lexicon file and one or more rule files applied in order.
    pub fn from_files(lexicon: &Path, rule_files: &[&Path]) -> Result<Self> {
        let lexicon = TagLexicon::from_path(lexicon)?;
        let mut rules = RuleSet::default();
        for path in rule_files {
            let text = std::fs::read_to_string(path).map_err(|source| crate::Error::Load {
                path: path.to_path_buf(),
                source,
            })?;
            rules.extend(RuleSet::parse(&text, MAX_CONTEXT)?);
        }
        Ok(Tagger { lexicon, rules })
    }

    fn initial_tag(&self, word: &str, sentence_initial: bool) -> String {
        let lower = word.to_lowercase();
        let capitalized = word.chars().next().is_some_and(char::is_uppercase);
        let found = if sentence_initial {
            self.lexicon.get(&lower).or_else(|| self.lexicon.get(word))
        } else {
            self.lexicon.get(word).or_else(|| {
                if capitalized && word.chars().skip(1).any(char::is_lowercase) {
                    None
                } else {
                    self.lexicon.get(&lower)
                }
            })
        };
        match found {
            Some(tag) => tag.to_string(),
            None => unknown::guess(word, capitalized && !sentence_initial).to_string(),
        }
    }

    /// Tags one sentence of already tokenized text.
    pub fn tag_sentence(&self, tokens: &[String]) -> Vec<String> {
        let mut tags: Vec<String> = tokens
            .iter()
            .enumerate()
            .map(|(i, w)| {
                let initial = i == 0 || tokens[..i].iter().all(|t| OPENERS.contains(&t.as_str()))
                    || OPENERS.contains(&tokens[i - 1].as_str());
                self.initial_tag(w, initial)
            })
            .collect();
        self.rules.apply(tokens, &mut tags);
        tags
    }

    /// Tags raw text, splitting it into sentences first.
    pub fn tag_text(&self, doc_id: &str, text: &str) -> TagStream {
        let mut stream = TagStream {
            doc_id: doc_id.to_string(),
            ..TagStream::default()
        };
        for sentence in tokenize_sentences(text) {
            if !stream.tokens.is_empty() {
                stream.sentence_starts.push(stream.tokens.len());
            }
            let tags = self.tag_sentence(&sentence);
            stream
                .tokens
                .extend(sentence.into_iter().zip(tags).map(|(w, t)| TaggedToken::new(w, t)));
        }
        stream
    }

    pub fn lexicon(&self) -> &TagLexicon {
        &self.lexicon
    }

    pub fn rules(&self) -> &RuleSet {
        &self.rules
    }
}

/// Tags a document with the built-in tagger.
pub fn pos_tag(document: &Document) -> TagStream {
    Tagger::builtin().tag_text(&document.id, &document.raw_text)
}

/// Tags a sentence of gold tokens with the built-in tagger.
pub fn tag_tokens(tokens: &[String]) -> Vec<String> {
    Tagger::builtin().tag_sentence(tokens)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tags(text: &str) -> Vec<String> {
        Tagger::builtin().tag_text("t", text).tags().map(str::to_string).collect()
    }

    #[test]
    fn trivial_sentence() {
        assert_eq!(tags("The dog barked."), ["DT", "NN", "VBD", "."]);
    }

    #[test]
    fn empty_text() {
        assert!(Tagger::builtin().tag_text("t", "").is_empty());
    }

    #[test]
    fn rule_tags_are_in_tagset() {
        for t in Tagger::builtin().rules().tags_out() {
            assert!(is_valid_tag(t), "{t}");
        }
    }
}
