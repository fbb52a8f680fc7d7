//! Word frequency ranking, function-word feature selection and the
//! function/content word profile.

mod frequency;
mod lexicon;
mod matrix;
mod profile;

use serde::Serialize;

use crate::corpus::Corpus;
use crate::error::{Error, Result};
use crate::matrix::Matrix;

pub use frequency::{rank_documents, rank_words, FrequencyTable, RankedWord, Scope};
pub use lexicon::FunctionWordLexicon;
pub use matrix::{FeatureMatrix, RateUnit};
pub use profile::{content_word_profile, ContentProfile, ProfileEntry};

pub const DEFAULT_TOP_N: usize = 100;
pub const DEFAULT_MIN_RATE: f64 = 2.0;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SelectionParams {
    pub top_n: usize,
    pub min_rate_per_1000: f64,
    pub lexicon_id: String,
}

/// Ordered function-word features.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FeatureSet {
    pub words: Vec<String>,
    pub rates: Vec<f64>,
    pub selection_params: SelectionParams,
}

impl FeatureSet {
    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }
}

/// Keeps the lexicon members of `ranked` whose rate is at least `min_rate`,
/// in rank order.
pub fn select_function_words(
    ranked: &[RankedWord],
    lexicon: &FunctionWordLexicon,
    min_rate: f64,
) -> Result<FeatureSet> {
    if !(min_rate >= 0.0) {
        return Err(Error::Input(format!("min_rate must be non-negative, got {min_rate}")));
    }
    let (words, rates): (Vec<String>, Vec<f64>) = ranked
        .iter()
        .filter(|w| lexicon.contains(&w.word) && w.rate >= min_rate)
        .map(|w| (w.word.clone(), w.rate))
        .unzip();
    if words.is_empty() {
        return Err(Error::Selection(format!(
            "no function word among the {} ranked words reaches {min_rate} per 1,000 (lexicon {})",
            ranked.len(),
            lexicon.id()
        )));
    }
    Ok(FeatureSet {
        words,
        rates,
        selection_params: SelectionParams {
            top_n: ranked.len(),
            min_rate_per_1000: min_rate,
            lexicon_id: lexicon.id().to_string(),
        },
    })
}

/// Per-text rate per 1,000 words of every feature word.
pub fn build_feature_matrix(corpus: &Corpus, features: &FeatureSet) -> Result<FeatureMatrix> {
    if features.is_empty() {
        return Err(Error::Input("feature set is empty".into()));
    }
    let mut values = Matrix::zeros(corpus.len(), features.len());
    for (i, doc) in corpus.documents.iter().enumerate() {
        if doc.word_count == 0 {
            return Err(Error::Analysis(format!("document `{}` has no words", doc.id)));
        }
        let counts = frequency::count_tokens(doc);
        for (j, w) in features.words.iter().enumerate() {
            let c = counts.get(w).copied().unwrap_or(0);
            values[(i, j)] = 1000.0 * c as f64 / doc.word_count as f64;
        }
    }
    FeatureMatrix::new(
        corpus.documents.iter().map(|d| d.id.clone()).collect(),
        corpus.documents.iter().map(|d| d.group.clone()).collect(),
        features.words.clone(),
        values,
        RateUnit::PerThousand,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::Document;

    #[test]
    fn content_words_are_filtered_out() {
        let ranked = vec![
            RankedWord::new("the", 30.0),
            RankedWord::new("life", 3.0),
            RankedWord::new("of", 2.5),
        ];
        let fs = select_function_words(&ranked, &FunctionWordLexicon::builtin(), 2.0).unwrap();
        assert_eq!(fs.words, ["the", "of"]);
        assert_eq!(fs.selection_params.top_n, 3);
    }

    #[test]
    fn threshold_applies() {
        let ranked = vec![RankedWord::new("the", 30.0), RankedWord::new("of", 1.9)];
        let fs = select_function_words(&ranked, &FunctionWordLexicon::builtin(), 2.0).unwrap();
        assert_eq!(fs.words, ["the"]);
    }

    #[test]
    fn no_function_words_is_a_selection_error() {
        let ranked = vec![
            RankedWord::new("cat", 9.0),
            RankedWord::new("dog", 8.0),
            RankedWord::new("run", 7.0),
        ];
        let err = select_function_words(&ranked, &FunctionWordLexicon::builtin(), 2.0).unwrap_err();
        assert!(matches!(err, Error::Selection(_)));
    }

    #[test]
    fn matrix_rates_and_absent_features() {
        let corpus = Corpus::from_documents(vec![Document::new("d1", "g", "t", "the cat the")]).unwrap();
        let ranked = rank_words(&corpus, 10).unwrap();
        let mut fs = select_function_words(&ranked, &FunctionWordLexicon::builtin(), 0.0).unwrap();
        fs.words.push("of".into());
        let m = build_feature_matrix(&corpus, &fs).unwrap();
        assert!((m.values[(0, 0)] - 2000.0 / 3.0).abs() < 1e-9);
        assert_eq!(m.values[(0, 1)], 0.0);
    }

    #[test]
    fn empty_document_is_named() {
        let corpus = Corpus::from_documents(vec![
            Document::new("ok", "g", "t", "the"),
            Document::new("blank", "g", "t", "42"),
        ])
        .unwrap();
        let fs = FeatureSet {
            words: vec!["the".into()],
            rates: vec![1.0],
            selection_params: SelectionParams {
                top_n: 1,
                min_rate_per_1000: 0.0,
                lexicon_id: "t".into(),
            },
        };
        let err = build_feature_matrix(&corpus, &fs).unwrap_err();
        assert!(err.to_string().contains("blank"));
    }
}
