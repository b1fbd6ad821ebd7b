//! Narrative cleaning.
//!
//! Cleaning lowercases the text, strips punctuation other than `!` and
//! `?`, drops stop words, dollar amounts, frequent corpus words and
//! redaction masks, and removes sentences opening with "thanks" or
//! "thank you".

use std::collections::HashSet;
use std::io::{BufRead, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::ingest::dollar_pattern;

/// Words never treated as stop words: they carry negation.
pub const NEGATIONS: [&str; 5] = ["not", "no", "never", "nor", "cannot"];

/// Tokens with sentiment that survive punctuation stripping.
pub const SEMANTIC_PUNCTUATION: [&str; 2] = ["!", "?"];

pub fn is_punctuation_token(token: &str) -> bool {
    SEMANTIC_PUNCTUATION.contains(&token)
}

/// Lowercase stop words. Negations are always excluded.
#[derive(Debug, Clone, Default)]
pub struct StopWordList {
    words: HashSet<String>,
}

impl StopWordList {
    pub fn new<I, S>(words: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let words = words
            .into_iter()
            .map(|w| w.as_ref().trim().to_lowercase())
            .filter(|w| !w.is_empty() && !NEGATIONS.contains(&w.as_str()))
            .collect();
        Self { words }
    }

    /// One word per line.
    pub fn from_text(text: &str) -> Self {
        Self::new(text.lines())
    }

    pub fn from_path(path: &Path) -> Result<Self> {
        Ok(Self::from_text(&read_to_string(path)?))
    }

    /// The bundled English list.
    pub fn bundled() -> Self {
        Self::from_text(crate::data::STOP_WORDS)
    }

    pub fn contains(&self, word: &str) -> bool {
        self.words.contains(word)
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }
}

/// Reads a one-word-per-line list into a lowercase set.
pub fn word_set_from_text(text: &str) -> HashSet<String> {
    text.lines()
        .map(|w| w.trim().to_lowercase())
        .filter(|w| !w.is_empty())
        .collect()
}

pub(crate) fn read_to_string(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::io(path, e))
}

/// Whether `!`/`?` tokens count as words.
///
/// With the default (`false`) they stay in the cleaned token list but are
/// left out of word counts, term frequencies and sentiment scores.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct TokenPolicy {
    pub punctuation_is_word: bool,
}

impl TokenPolicy {
    pub fn counts(&self, token: &str) -> bool {
        self.punctuation_is_word || !is_punctuation_token(token)
    }
}

/// A cleaned narrative (`d_i`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CleanedNarrative {
    pub id: String,
    pub tokens: Vec<String>,
}

impl CleanedNarrative {
    /// Tokens that count as words under `policy`.
    pub fn words<'a>(&'a self, policy: TokenPolicy) -> impl Iterator<Item = &'a str> + 'a {
        self.tokens
            .iter()
            .map(String::as_str)
            .filter(move |t| policy.counts(t))
    }

    /// `m_i^TI` under `policy`.
    pub fn word_count(&self, policy: TokenPolicy) -> usize {
        self.words(policy).count()
    }

    pub fn joined(&self) -> String {
        self.tokens.join(" ")
    }
}

/// `m_i^TI` with punctuation excluded.
pub fn word_count_ti(narrative: &CleanedNarrative) -> usize {
    narrative.word_count(TokenPolicy::default())
}

/// Holds the word lists used for cleaning.
#[derive(Debug, Clone)]
pub struct Cleaner {
    pub stop_words: StopWordList,
    pub frequent_words: HashSet<String>,
}

impl Default for Cleaner {
    fn default() -> Self {
        Self {
            stop_words: StopWordList::bundled(),
            frequent_words: word_set_from_text(crate::data::FREQUENT_WORDS),
        }
    }
}

impl Cleaner {
    pub fn new(stop_words: StopWordList, frequent_words: HashSet<String>) -> Self {
        Self {
            stop_words,
            frequent_words,
        }
    }

    pub fn clean(&self, id: impl Into<String>, raw_narrative: &str) -> CleanedNarrative {
        CleanedNarrative {
            id: id.into(),
            tokens: clean_tokens(raw_narrative, &self.stop_words, &self.frequent_words),
        }
    }

    /// Cleans `(id, narrative)` pairs in order.
    pub fn clean_all<'a, I>(&self, items: I) -> Vec<CleanedNarrative>
    where
        I: IntoIterator<Item = (&'a str, &'a str)>,
    {
        items.into_iter().map(|(id, text)| self.clean(id, text)).collect()
    }
}

/// Cleans one narrative into its token list.
pub fn clean(
    raw_narrative: &str,
    stop_words: &StopWordList,
    frequent_words: &HashSet<String>,
) -> CleanedNarrative {
    CleanedNarrative {
        id: String::new(),
        tokens: clean_tokens(raw_narrative, stop_words, frequent_words),
    }
}

fn clean_tokens(
    raw: &str,
    stop_words: &StopWordList,
    frequent_words: &HashSet<String>,
) -> Vec<String> {
    let mut tokens = Vec::new();
    for sentence in sentences(raw) {
        if opens_with_thanks(sentence) {
            continue;
        }
        let lowered = sentence.to_lowercase();
        let without_amounts = dollar_pattern().replace_all(&lowered, " ");
        for token in strip_punctuation(&without_amounts).split_whitespace() {
            if stop_words.contains(token)
                || frequent_words.contains(token)
                || is_redaction_mask(token)
            {
                continue;
            }
            tokens.push(token.to_string());
        }
    }
    tokens
}

/// Splits on runs of `.`, `!` or `?` followed by whitespace or the end of
/// the text. Terminators stay attached to their sentence.
fn sentences(text: &str) -> Vec<&str> {
    let mut out = Vec::new();
    let mut start = 0;
    let mut chars = text.char_indices().peekable();
    while let Some((i, c)) = chars.next() {
        if !matches!(c, '.' | '!' | '?') {
            continue;
        }
        let mut end = i + c.len_utf8();
        while let Some(&(j, d)) = chars.peek() {
            if matches!(d, '.' | '!' | '?') {
                end = j + d.len_utf8();
                chars.next();
            } else {
                break;
            }
        }
        let at_boundary = chars.peek().is_none_or(|&(_, d)| d.is_whitespace());
        if at_boundary {
            out.push(&text[start..end]);
            start = end;
        }
    }
    if start < text.len() {
        out.push(&text[start..]);
    }
    out
}

fn opens_with_thanks(sentence: &str) -> bool {
    let mut words = sentence
        .split(|c: char| !c.is_alphabetic())
        .filter(|w| !w.is_empty())
        .map(str::to_lowercase);
    match words.next().as_deref() {
        Some("thanks") => true,
        Some("thank") => words.next().as_deref() == Some("you"),
        _ => false,
    }
}

fn strip_punctuation(text: &str) -> String {
    let mut out = String::with_capacity(text.len() + 8);
    for c in text.chars() {
        match c {
            '!' | '?' => {
                out.push(' ');
                out.push(c);
                out.push(' ');
            }
            '\'' | '\u{2019}' => {}
            c if c.is_alphanumeric() => out.push(c),
            _ => out.push(' '),
        }
    }
    out
}

/// `xx`, `xxxx`, ...: the CFPB redaction placeholder.
pub fn is_redaction_mask(token: &str) -> bool {
    token.len() >= 2 && token.bytes().all(|b| b == b'x')
}

/// Writes `id<TAB>token token ...` lines.
pub fn write_cleaned<W: Write>(mut writer: W, corpus: &[CleanedNarrative]) -> Result<()> {
    for doc in corpus {
        if doc.id.contains(['\t', '\n', '\r']) {
            return Err(Error::Parse(format!("id `{}` contains a tab or newline", doc.id)));
        }
        writeln!(writer, "{}\t{}", doc.id, doc.joined()).map_err(|e| Error::io("<cleaned>", e))?;
    }
    writer.flush().map_err(|e| Error::io("<cleaned>", e))
}

pub fn read_cleaned<R: BufRead>(reader: R) -> Result<Vec<CleanedNarrative>> {
    let mut out = Vec::new();
    for (n, line) in reader.lines().enumerate() {
        let line = line.map_err(|e| Error::io("<cleaned>", e))?;
        if line.is_empty() {
            continue;
        }
        let (id, rest) = line
            .split_once('\t')
            .ok_or_else(|| Error::Parse(format!("cleaned corpus line {}: missing tab", n + 1)))?;
        out.push(CleanedNarrative {
            id: id.to_string(),
            tokens: rest.split_whitespace().map(str::to_string).collect(),
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tokens(text: &str) -> Vec<String> {
        Cleaner::default().clean("t", text).tokens
    }

    #[test]
    fn stop_list_never_holds_negations() {
        let list = StopWordList::new(["the", "not", "No", "never", "nor", "cannot", "a"]);
        assert_eq!(list.len(), 2);
        for w in NEGATIONS {
            assert!(!StopWordList::bundled().contains(w));
        }
    }

    #[test]
    fn macys_row() {
        assert_eq!(
            tokens("Macys did not reverse out my $230.00 dispute Similar to cfpg XXXX"),
            ["macys", "not", "reverse", "dispute", "similar", "cfpg"]
        );
    }

    #[test]
    fn exclamation_run_becomes_single_tokens() {
        let t = tokens(
            "Someone fraudulently charged $750.00 from XXXX on our card and Citi will not take it off!!!!!!!!!!",
        );
        let (words, marks) = t.split_at(7);
        assert_eq!(words, ["someone", "fraudulently", "charged", "card", "citi", "not", "take"]);
        assert_eq!(marks.len(), 10);
        assert!(marks.iter().all(|m| m == "!"));
    }

    #[test]
    fn thanks_sentences_are_dropped() {
        assert!(tokens("Thank you for your help.").is_empty());
        assert_eq!(tokens("Card declined. Thanks for nothing! Fees remain."), ["card", "declined", "fees", "remain"]);
        assert_eq!(tokens("I thank you for the refund."), ["thank", "refund"]);
    }

    #[test]
    fn decimal_points_do_not_split_sentences() {
        assert_eq!(sentences("Paid $230.00 today. Thank you"), ["Paid $230.00 today.", " Thank you"]);
        assert_eq!(sentences("what?! really"), ["what?!", " really"]);
    }

    #[test]
    fn word_counts() {
        let macys = Cleaner::default()
            .clean("m", "Macys did not reverse out my $230.00 dispute Similar to cfpg XXXX");
        assert_eq!(word_count_ti(&macys), 6);
        assert_eq!(word_count_ti(&Cleaner::default().clean("e", "")), 0);
        let bangs = Cleaner::default().clean("b", "!!!");
        assert_eq!(bangs.tokens.len(), 3);
        assert_eq!(word_count_ti(&bangs), 0);
        assert_eq!(bangs.word_count(TokenPolicy { punctuation_is_word: true }), 3);
    }

    #[test]
    fn masks_and_contractions() {
        assert!(is_redaction_mask("xxxx"));
        assert!(!is_redaction_mask("x"));
        assert!(!is_redaction_mask("xerox"));
        assert_eq!(tokens("I didn't get XX/XX/2019 statement"), ["didnt", "get", "2019", "statement"]);
    }

    #[test]
    fn cleaned_file_round_trip() {
        let corpus = vec![
            Cleaner::default().clean("1", "Bad fees!"),
            Cleaner::default().clean("2", "the"),
        ];
        let mut buf = Vec::new();
        write_cleaned(&mut buf, &corpus).unwrap();
        assert_eq!(String::from_utf8(buf.clone()).unwrap(), "1\tbad fees !\n2\t\n");
        assert_eq!(read_cleaned(buf.as_slice()).unwrap(), corpus);
    }
}
