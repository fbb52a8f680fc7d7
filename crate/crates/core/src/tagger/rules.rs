//! Brill-style contextual transformation rules.
//!
//! Each line of a rule file reads `FROM TO TEMPLATE X [Y]`. `FROM` may be `*`.
//! Positions outside the sentence carry the word and tag `STAART`.

use crate::error::{Error, Result};

pub(crate) const BOUNDARY: &str = "STAART";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Template {
    PrevTag,
    NextTag,
    Prev2Tag,
    Next2Tag,
    Prev1or2Tag,
    Next1or2Tag,
    Prev1or2or3Tag,
    Next1or2or3Tag,
    SurroundTag,
    CurWd,
    PrevWd,
    NextWd,
    Prev2Wd,
    Next2Wd,
    Prev1or2Wd,
    Next1or2Wd,
    PrevWdTag,
    NextWdTag,
    WdPrevTag,
    WdNextTag,
    WdAnd2Aft,
    WdAnd2Bfr,
    WdAnd2TagAft,
    WdAnd2TagBfr,
    LBigram,
    RBigram,
    PrevBigram,
    NextBigram,
}

impl Template {
    fn parse(s: &str) -> Option<(Template, usize)> {
        use Template::*;
        Some(match s.to_ascii_uppercase().as_str() {
            "PREVTAG" => (PrevTag, 1),
            "NEXTTAG" => (NextTag, 1),
            "PREV2TAG" => (Prev2Tag, 1),
            "NEXT2TAG" => (Next2Tag, 1),
            "PREV1OR2TAG" => (Prev1or2Tag, 1),
            "NEXT1OR2TAG" => (Next1or2Tag, 1),
            "PREV1OR2OR3TAG" => (Prev1or2or3Tag, 1),
            "NEXT1OR2OR3TAG" => (Next1or2or3Tag, 1),
            "SURROUNDTAG" => (SurroundTag, 2),
            "CURWD" => (CurWd, 1),
            "PREVWD" => (PrevWd, 1),
            "NEXTWD" => (NextWd, 1),
            "PREV2WD" => (Prev2Wd, 1),
            "NEXT2WD" => (Next2Wd, 1),
            "PREV1OR2WD" => (Prev1or2Wd, 1),
            "NEXT1OR2WD" => (Next1or2Wd, 1),
            "PREVWDTAG" => (PrevWdTag, 2),
            "NEXTWDTAG" => (NextWdTag, 2),
            "WDPREVTAG" => (WdPrevTag, 2),
            "WDNEXTTAG" => (WdNextTag, 2),
            "WDAND2AFT" => (WdAnd2Aft, 2),
            "WDAND2BFR" => (WdAnd2Bfr, 2),
            "WDAND2TAGAFT" => (WdAnd2TagAft, 2),
            "WDAND2TAGBFR" => (WdAnd2TagBfr, 2),
            "LBIGRAM" => (LBigram, 2),
            "RBIGRAM" => (RBigram, 2),
            "PREVBIGRAM" => (PrevBigram, 2),
            "NEXTBIGRAM" => (NextBigram, 2),
            _ => return None,
        })
    }

    fn reach(self) -> usize {
        use Template::*;
        match self {
            Prev1or2or3Tag | Next1or2or3Tag => 3,
            Prev2Tag | Next2Tag | Prev1or2Tag | Next1or2Tag | Prev2Wd | Next2Wd | Prev1or2Wd
            | Next1or2Wd | WdAnd2Aft | WdAnd2Bfr | WdAnd2TagAft | WdAnd2TagBfr | PrevBigram
            | NextBigram => 2,
            CurWd => 0,
            _ => 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct ContextRule {
    from: Option<String>,
    to: String,
    template: Template,
    x: String,
    y: String,
}

struct Window<'a> {
    words: &'a [String],
    tags: &'a [String],
}

impl Window<'_> {
    fn word(&self, i: isize) -> &str {
        if i < 0 || i as usize >= self.words.len() {
            BOUNDARY
        } else {
            &self.words[i as usize]
        }
    }
    fn tag(&self, i: isize) -> &str {
        if i < 0 || i as usize >= self.tags.len() {
            BOUNDARY
        } else {
            &self.tags[i as usize]
        }
    }
}

impl ContextRule {
    fn matches(&self, w: &Window<'_>, i: usize) -> bool {
        use Template::*;
        let i = i as isize;
        let (x, y) = (self.x.as_str(), self.y.as_str());
        match self.template {
            PrevTag => w.tag(i - 1) == x,
            NextTag => w.tag(i + 1) == x,
            Prev2Tag => w.tag(i - 2) == x,
            Next2Tag => w.tag(i + 2) == x,
            Prev1or2Tag => w.tag(i - 1) == x || w.tag(i - 2) == x,
            Next1or2Tag => w.tag(i + 1) == x || w.tag(i + 2) == x,
            Prev1or2or3Tag => (1..=3).any(|d| w.tag(i - d) == x),
            Next1or2or3Tag => (1..=3).any(|d| w.tag(i + d) == x),
            SurroundTag => w.tag(i - 1) == x && w.tag(i + 1) == y,
            CurWd => w.word(i) == x,
            PrevWd => w.word(i - 1) == x,
            NextWd => w.word(i + 1) == x,
            Prev2Wd => w.word(i - 2) == x,
            Next2Wd => w.word(i + 2) == x,
            Prev1or2Wd => w.word(i - 1) == x || w.word(i - 2) == x,
            Next1or2Wd => w.word(i + 1) == x || w.word(i + 2) == x,
            PrevWdTag => w.word(i - 1) == x && w.tag(i - 1) == y,
            NextWdTag => w.word(i + 1) == x && w.tag(i + 1) == y,
            WdPrevTag => w.tag(i - 1) == x && w.word(i) == y,
            WdNextTag => w.word(i) == x && w.tag(i + 1) == y,
            WdAnd2Aft => w.word(i) == x && w.word(i + 2) == y,
            WdAnd2Bfr => w.word(i - 2) == x && w.word(i) == y,
            WdAnd2TagAft => w.word(i) == x && w.tag(i + 2) == y,
            WdAnd2TagBfr => w.tag(i - 2) == x && w.word(i) == y,
            LBigram => w.word(i - 1) == x && w.word(i) == y,
            RBigram => w.word(i) == x && w.word(i + 1) == y,
            PrevBigram => w.tag(i - 2) == x && w.tag(i - 1) == y,
            NextBigram => w.tag(i + 1) == x && w.tag(i + 2) == y,
        }
    }
}

/// Whether a word first tagged `initial` can carry `target` given its
/// inflectional ending.
fn plausible(word: &str, initial: &str, target: &str) -> bool {
    let w = word.to_lowercase();
    match target {
        "VBG" => w.ends_with("ing"),
        "VBZ" => w.ends_with('s'),
        "NNS" | "NNPS" => w.ends_with('s') || matches!(initial, "NNS" | "NNPS"),
        "VBD" | "VBN" => {
            w.ends_with("ed") || matches!(initial, "VB" | "VBD" | "VBN" | "VBP" | "VBZ")
        }
        "WDT" => matches!(w.as_str(), "that" | "which" | "whatever" | "whichever" | "what"),
        "WP" => matches!(w.as_str(), "who" | "whom" | "what" | "whoever" | "whomever"),
        "WRB" => matches!(w.as_str(), "how" | "when" | "where" | "why" | "whenever" | "wherever"),
        "EX" => w == "there",
        "TO" => w == "to",
        "POS" => w == "'s" || w == "'",
        _ if matches!(w.as_str(), "not" | "n't") => target == "RB",
        _ => true,
    }
}

/// An ordered list of contextual rules.
#[derive(Debug, Clone, Default)]
pub struct RuleSet {
    rules: Vec<ContextRule>,
}

impl RuleSet {
    /// Parses rule lines, skipping blanks and `;;;` / `#` comments. Rules
    /// whose context reaches further than `max_reach` tokens are dropped.
    pub fn parse(text: &str, max_reach: usize) -> Result<Self> {
        let mut set = RuleSet::default();
        for (n, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with(";;;") || line.starts_with('#') {
                continue;
            }
            let fields: Vec<&str> = line.split_whitespace().collect();
            let bad = |message: &str| Error::Parse {
                line: n + 1,
                message: message.to_string(),
            };
            if fields.len() < 4 {
                return Err(bad("expected FROM TO TEMPLATE X [Y]"));
            }
            let (template, arity) =
                Template::parse(fields[2]).ok_or_else(|| bad(&format!("unknown template {}", fields[2])))?;
            if fields.len() != 3 + arity {
                return Err(bad(&format!("{} takes {arity} argument(s)", fields[2])));
            }
            if template.reach() > max_reach {
                continue;
            }
            set.push(ContextRule {
                from: (fields[0] != "*").then(|| fields[0].to_string()),
                to: fields[1].to_string(),
                template,
                x: fields[3].to_string(),
                y: fields.get(4).map(|s| s.to_string()).unwrap_or_default(),
            });
        }
        Ok(set)
    }

    fn push(&mut self, rule: ContextRule) {
        self.rules.push(rule);
    }

    pub fn extend(&mut self, other: RuleSet) {
        for rule in other.rules {
            self.push(rule);
        }
    }

    pub fn len(&self) -> usize {
        self.rules.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rules.is_empty()
    }

    #[cfg(test)]
    pub(crate) fn tags_out(&self) -> impl Iterator<Item = &str> {
        self.rules.iter().map(|r| r.to.as_str())
    }

    /// Applies every rule in order, each one sweeping the sentence left to
    /// right and seeing the changes made before it.
    pub fn apply(&self, words: &[String], tags: &mut [String]) {
        if words.is_empty() {
            return;
        }
        let initial = tags.to_vec();
        for rule in &self.rules {
            for i in 0..words.len() {
                if rule.from.as_deref().is_some_and(|f| f != tags[i]) {
                    continue;
                }
                if rule.matches(&Window { words, tags }, i) && plausible(&words[i], &initial[i], &rule.to) {
                    tags[i] = rule.to.clone();
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn strs(v: &[&str]) -> Vec<String> {
        v.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn prevtag_rewrites() {
        let rules = RuleSet::parse("NN VB PREVTAG TO\n", 3).unwrap();
        let words = strs(&["to", "walk"]);
        let mut tags = strs(&["TO", "NN"]);
        rules.apply(&words, &mut tags);
        assert_eq!(tags, strs(&["TO", "VB"]));
    }

    #[test]
    fn boundary_and_wildcard() {
        let rules = RuleSet::parse("* NNP PREVWD STAART\n", 3).unwrap();
        let words = strs(&["Paris", "sleeps"]);
        let mut tags = strs(&["NN", "VBZ"]);
        rules.apply(&words, &mut tags);
        assert_eq!(tags, strs(&["NNP", "VBZ"]));
    }

    #[test]
    fn later_rules_see_earlier_changes() {
        let rules = RuleSet::parse("NN VB PREVTAG MD\nVB VBP PREVTAG PRP\n", 3).unwrap();
        let words = strs(&["can", "run"]);
        let mut tags = strs(&["MD", "NN"]);
        rules.apply(&words, &mut tags);
        assert_eq!(tags[1], "VB");
    }

    #[test]
    fn reach_filter_and_errors() {
        let rules = RuleSet::parse("VBP VB PREV1OR2OR3TAG MD\nNN VB PREVTAG TO\n", 2).unwrap();
        assert_eq!(rules.len(), 1);
        assert!(matches!(RuleSet::parse("NN VB NOSUCH TO", 3), Err(Error::Parse { line: 1, .. })));
        assert!(RuleSet::parse("NN VB SURROUNDTAG TO", 3).is_err());
    }
}
