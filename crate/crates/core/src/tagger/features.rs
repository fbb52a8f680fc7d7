use std::collections::HashSet;
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::stream::TagStream;
use super::tagset::{coarse_class, is_adjective, is_adverb, is_noun, is_verb};
use crate::error::{Error, Result};

macro_rules! feature_codes {
    ($($variant:ident => $code:literal, $name:literal;)*) => {
        #[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
        #[serde(into = "String", try_from = "String")]
        pub enum FeatureCode { $($variant),* }

        impl FeatureCode {
            pub const ALL: [FeatureCode; 20] = [$(FeatureCode::$variant),*];

            pub fn code(self) -> &'static str {
                match self { $(FeatureCode::$variant => $code),* }
            }

            pub fn name(self) -> &'static str {
                match self { $(FeatureCode::$variant => $name),* }
            }
        }

        impl FromStr for FeatureCode {
            type Err = Error;
            fn from_str(s: &str) -> Result<Self> {
                match s.trim_start_matches("X.") {
                    $($code => Ok(FeatureCode::$variant),)*
                    other => Err(Error::Validation(format!("unknown feature code {other:?}"))),
                }
            }
        }
    };
}

feature_codes! {
    Andc => "ANDC", "clausal coordination";
    Bema => "BEMA", "be as main verb";
    Demo => "DEMO", "demonstratives";
    Ger => "GER", "gerunds";
    Jj => "JJ", "attributive adjectives";
    Nn => "NN", "nouns";
    Nomz => "NOMZ", "nominalizations";
    Pass => "PASS", "passives";
    Peas => "PEAS", "perfect aspect";
    Phc => "PHC", "phrasal coordination";
    Pin => "PIN", "prepositional phrases";
    Pit => "PIT", "pronoun it";
    Pomd => "POMD", "possibility modals";
    Pred => "PRED", "predicative adjectives";
    Priv => "PRIV", "private verbs";
    Rb => "RB", "adverbs";
    To => "TO", "to infinitives";
    Tpp3 => "TPP3", "third person pronouns";
    Vbd => "VBD", "past tense";
    Vprt => "VPRT", "present tense";
}

impl FeatureCode {
    pub fn index(self) -> usize {
        self as usize
    }
}

impl fmt::Display for FeatureCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.code())
    }
}

impl From<FeatureCode> for String {
    fn from(c: FeatureCode) -> String {
        c.code().to_string()
    }
}

impl TryFrom<String> for FeatureCode {
    type Error = Error;
    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

/// Word lists behind the lexical feature rules.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FeatureLists {
    pub private_verbs: HashSet<String>,
    pub prepositions: HashSet<String>,
    pub third_person: HashSet<String>,
}

fn parse_list(text: &str) -> HashSet<String> {
    text.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(str::to_lowercase)
        .collect()
}

impl FeatureLists {
    pub fn builtin() -> Self {
        FeatureLists {
            private_verbs: parse_list(include_str!("../../data/private_verbs.txt")),
            prepositions: parse_list(include_str!("../../data/prepositions.txt")),
            third_person: parse_list(include_str!("../../data/third_person_pronouns.txt")),
        }
    }

    /// Reads `private_verbs.txt`, `prepositions.txt` and
    /// `third_person_pronouns.txt` from `dir`, keeping the built-in list for
    /// any file that is absent.
    pub fn from_dir(dir: &Path) -> Result<Self> {
        let mut lists = Self::builtin();
        let slots: [(&str, &mut HashSet<String>); 3] = [
            ("private_verbs.txt", &mut lists.private_verbs),
            ("prepositions.txt", &mut lists.prepositions),
            ("third_person_pronouns.txt", &mut lists.third_person),
        ];
        for (name, slot) in slots {
            let path = dir.join(name);
            if path.exists() {
                let text = std::fs::read_to_string(&path).map_err(|source| Error::Load {
                    path: path.clone(),
                    source,
                })?;
                *slot = parse_list(&text);
            }
        }
        Ok(lists)
    }
}

impl Default for FeatureLists {
    fn default() -> Self {
        Self::builtin()
    }
}

const BE: &[&str] = &["be", "am", "is", "are", "was", "were", "been", "being", "'s", "'re", "'m"];
const HAVE: &[&str] = &["have", "has", "had", "having", "'ve", "'d"];
const DO: &[&str] = &["do", "does", "did"];
const SEEM: &[&str] = &[
    "seem", "seems", "seemed", "seeming", "appear", "appears", "appeared", "appearing",
];
const CLAUSE_STARTERS: &[&str] = &[
    "i", "we", "you", "he", "she", "they", "it", "this", "that", "these", "those", "who", "what",
    "where", "when", "why", "how", "which", "whose",
];
const POSSIBILITY_MODALS: &[&str] = &["can", "may", "might", "could", "ca"];
const DEMONSTRATIVES: &[&str] = &["this", "that", "these", "those"];
const NOMINALIZATION_SUFFIXES: &[&str] = &[
    "tions", "tion", "sions", "sion", "ments", "ment", "nesses", "ness", "ities", "ity",
];
const ING_STOPLIST: &[&str] = &[
    "thing", "things", "something", "anything", "nothing", "everything", "morning", "mornings",
    "evening", "evenings", "king", "kings", "ring", "rings", "spring", "springs", "string",
    "strings", "wing", "wings", "ceiling", "ceilings", "during",
];

const IRREGULAR_LEMMAS: &[(&str, &str)] = &[
    ("knew", "know"), ("known", "know"), ("thought", "think"), ("felt", "feel"),
    ("found", "find"), ("saw", "see"), ("seen", "see"), ("shown", "show"), ("heard", "hear"),
    ("held", "hold"), ("meant", "mean"), ("understood", "understand"), ("forgot", "forget"),
    ("forgotten", "forget"), ("foresaw", "foresee"), ("foreseen", "foresee"),
    ("proven", "prove"), ("learnt", "learn"), ("dreamt", "dream"), ("dreamed", "dream"),
];

fn nominalization(word: &str) -> bool {
    NOMINALIZATION_SUFFIXES
        .iter()
        .any(|s| word.len() >= s.len() + 2 && word.ends_with(s))
}

/// Candidate base forms of an inflected verb.
fn lemma_candidates(word: &str) -> Vec<String> {
    if let Some((_, lemma)) = IRREGULAR_LEMMAS.iter().find(|(w, _)| *w == word) {
        return vec![lemma.to_string()];
    }
    let mut out = vec![word.to_string()];
    let mut strip = |suffix: &str, add: &str| {
        if let Some(stem) = word.strip_suffix(suffix) {
            if stem.len() >= 2 {
                out.push(format!("{stem}{add}"));
                let b = stem.as_bytes();
                if add.is_empty() && b.len() >= 2 && b[b.len() - 1] == b[b.len() - 2] {
                    out.push(stem[..stem.len() - 1].to_string());
                }
            }
        }
    };
    strip("ies", "y");
    strip("es", "");
    strip("s", "");
    strip("ied", "y");
    strip("ed", "");
    strip("ed", "e");
    strip("ing", "");
    strip("ing", "e");
    out
}

/// Assigns feature codes to the tokens of `stream`, replacing any existing
/// annotations.
pub fn annotate(stream: &mut TagStream, lists: &FeatureLists) {
    let words: Vec<String> = stream.tokens.iter().map(|t| t.token.to_lowercase()).collect();
    let tags: Vec<String> = stream.tokens.iter().map(|t| t.tag.clone()).collect();
    let n = words.len();
    let w = |i: usize| words[i].as_str();
    let tag_at = |i: Option<usize>| i.map(|i| tags[i].as_str()).unwrap_or("");
    let next_non_rb = |i: usize| (i + 1..n).find(|&j| !is_adverb(&tags[j]));
    let prev_non_rb = |i: usize| (0..i).rev().find(|&j| !is_adverb(&tags[j]));
    let verb_in = |j: Option<usize>, forms: &[&str]| {
        j.is_some_and(|j| is_verb(&tags[j]) && forms.contains(&words[j].as_str()))
    };
    let auxiliary = |i: usize| {
        let next = tag_at(next_non_rb(i));
        let word = w(i);
        (BE.contains(&word) && matches!(next, "VBN" | "VBG"))
            || (HAVE.contains(&word) && next == "VBN")
            || (DO.contains(&word) && next == "VB")
    };
    let infinitival = |i: usize| w(i) == "to" && tags[i] == "TO" && tag_at(next_non_rb(i)) == "VB";

    let mut annotations = vec![Vec::new(); n];
    for i in 0..n {
        let tag = tags[i].as_str();
        let word = w(i);
        let prev = (i > 0).then(|| i - 1);
        let next = (i + 1 < n).then_some(i + 1);
        let mut hit = |f: FeatureCode| annotations[i].push(f);

        let mut andc = false;
        if word == "and" {
            let clause_punct = matches!(tag_at(prev), "," | ":") || prev.is_some_and(|p| w(p) == ";");
            let clause_start = next.is_some_and(|j| CLAUSE_STARTERS.contains(&w(j)));
            if clause_punct || clause_start {
                andc = true;
                hit(FeatureCode::Andc);
            }
        }
        if is_verb(tag) && BE.contains(&word) && !matches!(tag_at(next_non_rb(i)), "VBN" | "VBG") {
            hit(FeatureCode::Bema);
        }
        if DEMONSTRATIVES.contains(&word) && tag == "DT" {
            let nt = tag_at(next);
            let complementizer = word == "that" && (is_verb(nt) || nt == "MD" || nt == "PRP");
            if !complementizer {
                hit(FeatureCode::Demo);
            }
        }
        if is_noun(tag) {
            if nominalization(word) {
                hit(FeatureCode::Nomz);
            } else if (word.ends_with("ing") || word.ends_with("ings"))
                && !ING_STOPLIST.contains(&word)
                && matches!(tag_at(prev), "DT" | "IN" | "PRP$" | "POS")
            {
                hit(FeatureCode::Ger);
            } else {
                hit(FeatureCode::Nn);
            }
        }
        if is_adjective(tag) {
            let nt = tag_at(next);
            if is_noun(nt) || is_adjective(nt) {
                hit(FeatureCode::Jj);
            } else if verb_in(prev_non_rb(i), BE) || verb_in(prev_non_rb(i), SEEM) {
                hit(FeatureCode::Pred);
            }
        }
        if tag == "VBN" {
            if verb_in(prev_non_rb(i), BE) {
                hit(FeatureCode::Pass);
            } else if verb_in(prev_non_rb(i), HAVE) {
                hit(FeatureCode::Peas);
            }
        }
        if (word == "and" || word == "or") && !andc {
            let (a, b) = (coarse_class(tag_at(prev)), coarse_class(tag_at(next)));
            if a.is_some() && a == b {
                hit(FeatureCode::Phc);
            }
        }
        if (tag == "IN" && lists.prepositions.contains(word)) || (tag == "TO" && word == "to" && !infinitival(i)) {
            hit(FeatureCode::Pin);
        }
        if word == "it" {
            hit(FeatureCode::Pit);
        }
        if tag == "MD" && POSSIBILITY_MODALS.contains(&word) {
            hit(FeatureCode::Pomd);
        }
        if is_verb(tag) && lemma_candidates(word).iter().any(|l| lists.private_verbs.contains(l)) {
            hit(FeatureCode::Priv);
        }
        if is_adverb(tag) && word != "not" && word != "n't" {
            hit(FeatureCode::Rb);
        }
        if infinitival(i) {
            hit(FeatureCode::To);
        }
        if lists.third_person.contains(word) {
            hit(FeatureCode::Tpp3);
        }
        if tag == "VBD" && !auxiliary(i) {
            hit(FeatureCode::Vbd);
        }
        if matches!(tag, "VBP" | "VBZ") && !auxiliary(i) {
            hit(FeatureCode::Vprt);
        }
    }
    for (tok, mut feats) in stream.tokens.iter_mut().zip(annotations) {
        feats.sort();
        tok.features = feats;
    }
}

/// Per-100-token rates of the 20 features for one document.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BiberFeatureVector {
    pub doc_id: String,
    pub n_tokens: usize,
    pub counts: Vec<u64>,
    pub rates: Vec<f64>,
}

impl BiberFeatureVector {
    pub fn count(&self, code: FeatureCode) -> u64 {
        self.counts[code.index()]
    }

    pub fn rate(&self, code: FeatureCode) -> f64 {
        self.rates[code.index()]
    }
}

/// Counts the features annotated on `stream` and normalizes by its token
/// count, punctuation included.
pub fn feature_vector(stream: &TagStream) -> Result<BiberFeatureVector> {
    if stream.is_empty() {
        return Err(Error::Analysis(format!("{}: empty tag stream", stream.doc_id)));
    }
    let mut counts = vec![0u64; FeatureCode::ALL.len()];
    for t in &stream.tokens {
        for f in &t.features {
            counts[f.index()] += 1;
        }
    }
    let n = stream.len();
    let rates = counts.iter().map(|&c| c as f64 * 100.0 / n as f64).collect();
    Ok(BiberFeatureVector {
        doc_id: stream.doc_id.clone(),
        n_tokens: n,
        counts,
        rates,
    })
}

/// Annotates a copy of `stream` using the built-in lists and returns its
/// feature rates.
pub fn extract_biber_features(stream: &TagStream) -> Result<BiberFeatureVector> {
    extract_with(stream, &FeatureLists::builtin())
}

pub fn extract_with(stream: &TagStream, lists: &FeatureLists) -> Result<BiberFeatureVector> {
    if stream.is_empty() {
        return Err(Error::Analysis(format!("{}: empty tag stream", stream.doc_id)));
    }
    let mut annotated = stream.clone();
    annotate(&mut annotated, lists);
    feature_vector(&annotated)
}

/// CSV with `doc_id`, `group` and the 20 feature rates.
pub fn feature_csv(vectors: &[BiberFeatureVector], groups: &[String]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut header = vec!["doc_id".to_string(), "group".to_string()];
    header.extend(FeatureCode::ALL.iter().map(|c| c.code().to_string()));
    w.write_record(&header)?;
    for (v, g) in vectors.iter().zip(groups) {
        let mut row = vec![v.doc_id.clone(), g.clone()];
        row.extend(v.rates.iter().map(|r| format!("{r:.6}")));
        w.write_record(&row)?;
    }
    let bytes = w.into_inner().map_err(|e| e.into_error())?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

pub const WORD_CLASS_TAGS: [FeatureCode; 8] = [
    FeatureCode::Nn,
    FeatureCode::Nomz,
    FeatureCode::Jj,
    FeatureCode::Phc,
    FeatureCode::Vbd,
    FeatureCode::Rb,
    FeatureCode::Tpp3,
    FeatureCode::Pred,
];

/// Group mean rates per 1,000 tokens for the eight word-class tags.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WordClassProfile {
    pub group: String,
    pub n_texts: usize,
    pub tags: Vec<FeatureCode>,
    pub rates: Vec<f64>,
}

impl WordClassProfile {
    pub fn rate(&self, code: FeatureCode) -> Option<f64> {
        self.tags.iter().position(|&c| c == code).map(|i| self.rates[i])
    }
}

pub fn word_class_profile(vectors: &[BiberFeatureVector], group: &str) -> Result<WordClassProfile> {
    if vectors.is_empty() {
        return Err(Error::Analysis(format!("group {group:?} has no documents")));
    }
    let n = vectors.len() as f64;
    let rates = WORD_CLASS_TAGS
        .iter()
        .map(|&c| vectors.iter().map(|v| v.rate(c)).sum::<f64>() / n * 10.0)
        .collect();
    Ok(WordClassProfile {
        group: group.to_string(),
        n_texts: vectors.len(),
        tags: WORD_CLASS_TAGS.to_vec(),
        rates,
    })
}
