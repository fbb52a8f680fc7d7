//! Tagger tokenization: punctuation becomes separate tokens, clitics are
//! split off their host, quotes become `` and ''.

const ABBREVIATIONS: &[&str] = &[
    "mr.", "mrs.", "ms.", "dr.", "prof.", "st.", "jr.", "sr.", "vs.", "etc.", "inc.", "ltd.",
    "co.", "corp.", "no.", "vol.", "fig.", "jan.", "feb.", "mar.", "apr.", "jun.", "jul.",
    "aug.", "sep.", "sept.", "oct.", "nov.", "dec.", "approx.", "dept.", "e.g.", "i.e.", "cf.",
];

const CLITICS: &[&str] = &["'s", "'re", "'ve", "'ll", "'d", "'m"];

fn normalize(text: &str) -> String {
    text.chars()
        .map(|c| match c {
            '\u{2018}' | '\u{2019}' | '\u{02BC}' | '\u{2032}' => '\'',
            '\u{201C}' | '\u{201D}' | '\u{201E}' | '\u{00AB}' | '\u{00BB}' => '"',
            '\u{00A0}' | '\u{2009}' | '\u{202F}' => ' ',
            c => c,
        })
        .collect()
}

fn is_leading_punct(c: char) -> bool {
    matches!(c, '(' | '[' | '{' | '"' | '\'' | '`' | '<')
}

fn is_trailing_punct(c: char) -> bool {
    matches!(
        c,
        '.' | ',' | ';' | ':' | '!' | '?' | ')' | ']' | '}' | '"' | '\'' | '>' | '\u{2026}'
    )
}

fn is_dash(c: char) -> bool {
    matches!(c, '\u{2014}' | '\u{2013}' | '\u{2015}')
}

fn is_abbreviation(chunk: &str) -> bool {
    let lower = chunk.to_lowercase();
    if ABBREVIATIONS.contains(&lower.as_str()) {
        return true;
    }
    // Initialisms such as U.S. or A.D.
    let parts: Vec<&str> = chunk.split('.').collect();
    parts.len() >= 3
        && parts.last() == Some(&"")
        && parts[..parts.len() - 1]
            .iter()
            .all(|p| p.chars().count() == 1 && p.chars().all(char::is_alphabetic))
}

/// Splits a word into host and clitic pieces.
fn split_clitics(word: &str, out: &mut Vec<String>) {
    let lower = word.to_lowercase();
    if lower == "cannot" {
        out.push(word[..3].to_string());
        out.push(word[3..].to_string());
        return;
    }
    if lower.len() > 3 && lower.ends_with("n't") {
        let cut = word.len() - 3;
        out.push(word[..cut].to_string());
        out.push(word[cut..].to_string());
        return;
    }
    for clitic in CLITICS {
        if lower.len() > clitic.len() && lower.ends_with(clitic) {
            let cut = word.len() - clitic.len();
            out.push(word[..cut].to_string());
            out.push(word[cut..].to_string());
            return;
        }
    }
    out.push(word.to_string());
}

fn push_quote(c: char, opening: bool, out: &mut Vec<String>) {
    match c {
        '"' | '`' => out.push(if opening { "``" } else { "''" }.to_string()),
        _ => out.push(c.to_string()),
    }
}

fn split_chunk(chunk: &str, out: &mut Vec<String>) {
    // Dashes between words separate them.
    if chunk.chars().any(is_dash) || chunk.contains("--") {
        let replaced = chunk.replace("--", "\u{2014}");
        let mut first = true;
        for piece in replaced.split(is_dash) {
            if !first {
                out.push("--".to_string());
            }
            first = false;
            if !piece.is_empty() {
                split_chunk(piece, out);
            }
        }
        return;
    }

    let chars: Vec<char> = chunk.chars().collect();
    let mut start = 0;
    let mut end = chars.len();
    let mut leading = Vec::new();
    while start < end && is_leading_punct(chars[start]) {
        leading.push(chars[start]);
        start += 1;
    }
    let mut trailing: Vec<String> = Vec::new();
    loop {
        if start >= end {
            break;
        }
        let core: String = chars[start..end].iter().collect();
        if core.ends_with("...") {
            trailing.push("...".to_string());
            end -= 3;
            continue;
        }
        let c = chars[end - 1];
        if !is_trailing_punct(c) {
            break;
        }
        if c == '.' && is_abbreviation(&core) {
            break;
        }
        if c == '\'' {
            // students' keeps its possessive marker as a token.
            trailing.push("'".to_string());
            end -= 1;
            continue;
        }
        trailing.push(match c {
            '"' => "''".to_string(),
            '\u{2026}' => "...".to_string(),
            c => c.to_string(),
        });
        end -= 1;
    }

    for c in leading {
        push_quote(c, true, out);
    }
    if start < end {
        let core: String = chars[start..end].iter().collect();
        split_clitics(&core, out);
    }
    out.extend(trailing.into_iter().rev());
}

/// Tokenizes raw text into sentences of tagger tokens.
pub fn tokenize_sentences(text: &str) -> Vec<Vec<String>> {
    let normalized = normalize(text);
    let mut tokens = Vec::new();
    for chunk in normalized.split_whitespace() {
        split_chunk(chunk, &mut tokens);
    }
    split_sentences(tokens)
}

/// Tokenizes raw text into a flat token sequence.
pub fn tokenize(text: &str) -> Vec<String> {
    tokenize_sentences(text).into_iter().flatten().collect()
}

fn is_closer(t: &str) -> bool {
    matches!(t, "''" | ")" | "]" | "}" | "'")
}

fn split_sentences(tokens: Vec<String>) -> Vec<Vec<String>> {
    let mut sentences = Vec::new();
    let mut current: Vec<String> = Vec::new();
    let mut ended = false;
    for tok in tokens {
        if ended && !is_closer(&tok) {
            sentences.push(std::mem::take(&mut current));
            ended = false;
        }
        ended = ended || matches!(tok.as_str(), "." | "!" | "?" | "...");
        current.push(tok);
    }
    if !current.is_empty() {
        sentences.push(current);
    }
    sentences
}
