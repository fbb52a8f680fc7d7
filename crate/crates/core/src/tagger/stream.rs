use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::features::FeatureCode;
use super::tagset::is_valid_tag;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TaggedToken {
    pub token: String,
    pub tag: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub features: Vec<FeatureCode>,
}

impl TaggedToken {
    pub fn new(token: impl Into<String>, tag: impl Into<String>) -> Self {
        TaggedToken {
            token: token.into(),
            tag: tag.into(),
            features: Vec::new(),
        }
    }
}

/// The tagged form of one document.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize, Default)]
pub struct TagStream {
    pub doc_id: String,
    pub tokens: Vec<TaggedToken>,
    /// Token indices at which a new sentence begins, excluding 0.
    pub sentence_starts: Vec<usize>,
}

impl TagStream {
    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    pub fn tags(&self) -> impl Iterator<Item = &str> {
        self.tokens.iter().map(|t| t.tag.as_str())
    }

    /// Token slices of each sentence.
    pub fn sentences(&self) -> Vec<&[TaggedToken]> {
        let mut bounds = vec![0];
        bounds.extend(self.sentence_starts.iter().copied());
        bounds.push(self.tokens.len());
        bounds
            .windows(2)
            .filter(|w| w[0] < w[1])
            .map(|w| &self.tokens[w[0]..w[1]])
            .collect()
    }

    pub fn validate(&self) -> Result<()> {
        for (i, t) in self.tokens.iter().enumerate() {
            if !is_valid_tag(&t.tag) {
                return Err(Error::Validation(format!(
                    "{}: token {} ({:?}) has unknown tag {}",
                    self.doc_id, i, t.token, t.tag
                )));
            }
        }
        let ordered = self.sentence_starts.windows(2).all(|w| w[0] < w[1]);
        let in_range = self.sentence_starts.iter().all(|&s| s > 0 && s < self.tokens.len());
        if !ordered || !in_range {
            return Err(Error::Validation(format!("{}: bad sentence boundaries", self.doc_id)));
        }
        Ok(())
    }

    /// Renders the stream in the `token<TAB>tag[<TAB>FEATURES]` line format.
    pub fn to_tagged_text(&self) -> String {
        let mut out = String::new();
        let mut starts = self.sentence_starts.iter().peekable();
        for (i, t) in self.tokens.iter().enumerate() {
            if starts.peek() == Some(&&i) {
                out.push('\n');
                starts.next();
            }
            let _ = write!(out, "{}\t{}", t.token, t.tag);
            if !t.features.is_empty() {
                let codes: Vec<&str> = t.features.iter().map(|f| f.code()).collect();
                let _ = write!(out, "\t{}", codes.join(","));
            }
            out.push('\n');
        }
        out
    }

    pub fn export(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_tagged_text())?;
        Ok(())
    }
}

fn is_comment(line: &str) -> bool {
    line.starts_with('#') && (!line.contains('\t') || line.starts_with("# "))
}

/// Parses text in the tagged line format.
pub fn parse_tagged(text: &str, doc_id: &str) -> Result<TagStream> {
    let mut stream = TagStream {
        doc_id: doc_id.to_string(),
        ..TagStream::default()
    };
    let mut pending_break = false;
    for (n, raw) in text.lines().enumerate() {
        let line = raw.strip_suffix('\r').unwrap_or(raw);
        if line.trim().is_empty() {
            pending_break = true;
            continue;
        }
        if is_comment(line) {
            continue;
        }
        let fields: Vec<&str> = line.split('\t').collect();
        let parse_err = |message: String| Error::Parse { line: n + 1, message };
        if fields.len() < 2 || fields.len() > 3 {
            return Err(parse_err(format!("expected token<TAB>tag, got {line:?}")));
        }
        let (token, tag) = (fields[0], fields[1]);
        if token.is_empty() || token.chars().any(char::is_whitespace) || tag.is_empty() {
            return Err(parse_err(format!("malformed token or tag in {line:?}")));
        }
        if !is_valid_tag(tag) {
            return Err(Error::Validation(format!("line {}: unknown tag {tag:?}", n + 1)));
        }
        let mut features = Vec::new();
        if let Some(codes) = fields.get(2) {
            for code in codes.split(',') {
                let f: FeatureCode = code
                    .parse()
                    .map_err(|_| Error::Validation(format!("line {}: unknown feature code {code:?}", n + 1)))?;
                features.push(f);
            }
        }
        if pending_break && !stream.tokens.is_empty() {
            stream.sentence_starts.push(stream.tokens.len());
        }
        pending_break = false;
        stream.tokens.push(TaggedToken {
            token: token.to_string(),
            tag: tag.to_string(),
            features,
        });
    }
    Ok(stream)
}

/// Reads a tagged file; the document id is the file stem.
pub fn ingest_tagged(path: &Path) -> Result<TagStream> {
    let text = std::fs::read_to_string(path).map_err(|source| Error::Load {
        path: path.to_path_buf(),
        source,
    })?;
    let id = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    parse_tagged(&text, &id)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn one_line() {
        let s = parse_tagged("dog\tNN\n", "d").unwrap();
        assert_eq!(s.len(), 1);
        assert_eq!(s.tokens[0], TaggedToken::new("dog", "NN"));
    }

    #[test]
    fn space_separated_is_parse_error() {
        let err = parse_tagged("# header\ndog NN\n", "d").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }), "{err:?}");
    }

    #[test]
    fn unknown_tag_is_validation_error() {
        assert!(matches!(parse_tagged("dog\tNOUN\n", "d"), Err(Error::Validation(_))));
    }

    #[test]
    fn hash_token_is_not_a_comment() {
        let s = parse_tagged("#\t#\n# a comment\n5\tCD\n", "d").unwrap();
        assert_eq!(s.len(), 2);
    }

    #[test]
    fn round_trip_with_sentences_and_features() {
        let mut s = parse_tagged("It\tPRP\nrained\tVBD\n.\t.\n\nSo\tRB\n", "d").unwrap();
        assert_eq!(s.sentence_starts, vec![3]);
        s.tokens[0].features.push(FeatureCode::Pit);
        let back = parse_tagged(&s.to_tagged_text(), "d").unwrap();
        assert_eq!(back, s);
        assert_eq!(back.sentences().len(), 2);
    }
}
