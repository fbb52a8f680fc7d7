/// Penn Treebank part-of-speech tags plus the punctuation tags.
pub const TAGSET: &[&str] = &[
    "CC", "CD", "DT", "EX", "FW", "IN", "JJ", "JJR", "JJS", "LS", "MD", "NN", "NNS", "NNP",
    "NNPS", "PDT", "POS", "PRP", "PRP$", "RB", "RBR", "RBS", "RP", "SYM", "TO", "UH", "VB",
    "VBD", "VBG", "VBN", "VBP", "VBZ", "WDT", "WP", "WP$", "WRB", ".", ",", ":", "``", "''",
    "-LRB-", "-RRB-", "#", "$",
];

pub fn is_valid_tag(tag: &str) -> bool {
    TAGSET.contains(&tag)
}

pub fn is_noun(tag: &str) -> bool {
    matches!(tag, "NN" | "NNS" | "NNP" | "NNPS")
}

pub fn is_adjective(tag: &str) -> bool {
    matches!(tag, "JJ" | "JJR" | "JJS")
}

pub fn is_adverb(tag: &str) -> bool {
    matches!(tag, "RB" | "RBR" | "RBS")
}

pub fn is_verb(tag: &str) -> bool {
    tag.starts_with("VB")
}

/// Coarse word class used to compare coordinated items.
pub fn coarse_class(tag: &str) -> Option<char> {
    if is_noun(tag) {
        Some('N')
    } else if is_verb(tag) {
        Some('V')
    } else if is_adjective(tag) {
        Some('J')
    } else if is_adverb(tag) {
        Some('R')
    } else {
        None
    }
}
