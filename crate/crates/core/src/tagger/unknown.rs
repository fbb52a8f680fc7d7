//! Tags for words missing from the lexicon, chosen from their shape and suffix.

const NOUN_SUFFIXES: &[&str] = &[
    "tion", "sion", "ment", "ness", "ity", "ism", "ship", "ance", "ence", "hood", "dom", "ist",
    "er", "or", "age", "ure", "logy", "graphy", "phy", "cy",
];

const ADJ_SUFFIXES: &[&str] = &[
    "ous", "ful", "ive", "able", "ible", "al", "ic", "less", "ish", "ary", "ent", "ant", "like",
    "esque", "ese", "ian", "oid",
];

const VERB_SUFFIXES: &[&str] = &["ize", "ise", "ify", "ate", "en"];

fn is_numeric(word: &str) -> bool {
    word.chars().any(|c| c.is_ascii_digit())
        && word
            .chars()
            .all(|c| c.is_ascii_digit() || matches!(c, '.' | ',' | '/' | ':' | '%' | '-'))
}

fn ends_with_any(word: &str, suffixes: &[&str]) -> bool {
    suffixes.iter().any(|s| word.len() > s.len() + 1 && word.ends_with(s))
}

/// Picks the most plausible tag for a word the lexicon does not list.
/// `capitalized_midsentence` marks words whose capital letter is not explained
/// by sentence position.
pub fn guess(word: &str, capitalized_midsentence: bool) -> &'static str {
    if is_numeric(word) {
        return "CD";
    }
    if word.chars().next().is_some_and(|c| c.is_ascii_digit()) {
        let lower = word.to_lowercase();
        if ["st", "nd", "rd", "th"].iter().any(|s| lower.ends_with(s)) {
            return "JJ";
        }
        if lower.ends_with('s') {
            return "CD";
        }
        return if word.contains('-') { "JJ" } else { "CD" };
    }
    if !word.chars().any(char::is_alphanumeric) {
        return "SYM";
    }
    if capitalized_midsentence {
        return if word.len() > 3 && word.ends_with('s') && !word.ends_with("ss") {
            "NNPS"
        } else {
            "NNP"
        };
    }
    let lower = word.to_lowercase();
    let w = lower.as_str();
    if w.contains('-') && !w.starts_with('-') && !w.ends_with('-') {
        let last = w.rsplit('-').next().unwrap_or(w);
        if ends_with_any(last, NOUN_SUFFIXES) && !last.ends_with("er") {
            return "NN";
        }
        return "JJ";
    }
    if w.ends_with("ly") && w.len() > 4 {
        return "RB";
    }
    if w.ends_with("ing") && w.len() > 5 {
        return "VBG";
    }
    if w.ends_with("ed") && w.len() > 4 {
        return "VBN";
    }
    if w.ends_with("est") && w.len() > 5 {
        return "JJS";
    }
    if w.ends_with('s') && !w.ends_with("ss") && !w.ends_with("us") && !w.ends_with("is") && w.len() > 3 {
        let stem = &w[..w.len() - 1];
        if ends_with_any(stem, VERB_SUFFIXES) {
            return "VBZ";
        }
        return "NNS";
    }
    if ends_with_any(w, NOUN_SUFFIXES) {
        return "NN";
    }
    if ends_with_any(w, ADJ_SUFFIXES) {
        return "JJ";
    }
    if ends_with_any(w, VERB_SUFFIXES) {
        return "VB";
    }
    "NN"
}

#[cfg(test)]
mod tests {
    use super::guess;

    #[test]
    fn shapes_and_suffixes() {
        assert_eq!(guess("1990", false), "CD");
        assert_eq!(guess("3.5%", false), "CD");
        assert_eq!(guess("1990s", false), "CD");
        assert_eq!(guess("21st", false), "JJ");
        assert_eq!(guess("Zorblax", true), "NNP");
        assert_eq!(guess("state-of-the-art", false), "JJ");
        assert_eq!(guess("glorpingly", false), "RB");
        assert_eq!(guess("glorping", false), "VBG");
        assert_eq!(guess("glorped", false), "VBN");
        assert_eq!(guess("glorpification", false), "NN");
        assert_eq!(guess("glorpous", false), "JJ");
        assert_eq!(guess("glorps", false), "NNS");
        assert_eq!(guess("glorpize", false), "VB");
        assert_eq!(guess("glorp", false), "NN");
    }
}
