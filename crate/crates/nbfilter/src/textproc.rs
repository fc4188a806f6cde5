//! Text normalization: tokenization, optional lemmatization, optional
//! stop-list removal, and collapse to a distinct-word set.
//!
//! The lemmatizer is table-driven with a fixed suffix-rule fallback. A
//! table hit is authoritative; otherwise the first matching rule of
//! `-ies -> -y`, `-sses -> -ss`, `-es -> -e-or-stem`, `-s -> (drop)` unless
//! the word ends in `-ss`, `-ing -> (drop)` for stems of length >= 3, and
//! `-ed -> (drop)` for stems of length >= 2 is applied, repeating until no
//! rule fires so the mapping is idempotent. When both modules are enabled
//! the stop-list is applied after lemmatization.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt;
use std::fs;
use std::path::Path;
use std::str::FromStr;

use crate::corpus::{Corpus, Label, Message};
use crate::error::{Error, Result};
use crate::exec;

const DEFAULT_STOPLIST: &str = include_str!("../assets/stoplist_en.txt");
const DEFAULT_LEMMAS: &str = include_str!("../assets/lemmas_en.tsv");

/// The four filter configurations: each normalization module on or off.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PipelineChoice {
    Bare,
    Stoplist,
    Lemmatizer,
    LemmatizerStoplist,
}

impl PipelineChoice {
    pub const ALL: [PipelineChoice; 4] = [
        PipelineChoice::Bare,
        PipelineChoice::Stoplist,
        PipelineChoice::Lemmatizer,
        PipelineChoice::LemmatizerStoplist,
    ];

    pub fn use_lemmatizer(self) -> bool {
        matches!(
            self,
            PipelineChoice::Lemmatizer | PipelineChoice::LemmatizerStoplist
        )
    }

    pub fn use_stoplist(self) -> bool {
        matches!(
            self,
            PipelineChoice::Stoplist | PipelineChoice::LemmatizerStoplist
        )
    }

    /// Builds the pipeline with the bundled stop-list and lemma table.
    pub fn config(self) -> PipelineConfig {
        PipelineConfig::new(self.use_lemmatizer(), self.use_stoplist())
    }

    /// Name safe for use in file names.
    pub fn file_tag(self) -> &'static str {
        match self {
            PipelineChoice::Bare => "bare",
            PipelineChoice::Stoplist => "stop",
            PipelineChoice::Lemmatizer => "lemma",
            PipelineChoice::LemmatizerStoplist => "lemma_stop",
        }
    }
}

impl fmt::Display for PipelineChoice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            PipelineChoice::Bare => "bare",
            PipelineChoice::Stoplist => "stop",
            PipelineChoice::Lemmatizer => "lemma",
            PipelineChoice::LemmatizerStoplist => "lemma+stop",
        };
        write!(f, "{name}")
    }
}

impl FromStr for PipelineChoice {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "bare" => Ok(PipelineChoice::Bare),
            "stop" => Ok(PipelineChoice::Stoplist),
            "lemma" => Ok(PipelineChoice::Lemmatizer),
            "lemma+stop" => Ok(PipelineChoice::LemmatizerStoplist),
            other => Err(Error::InvalidArgument(format!(
                "unknown pipeline {other:?}; expected bare, stop, lemma, or lemma+stop"
            ))),
        }
    }
}

/// Normalization settings: which modules run and with which word lists.
#[derive(Debug, Clone)]
pub struct PipelineConfig {
    pub use_lemmatizer: bool,
    pub use_stoplist: bool,
    stoplist: HashSet<String>,
    lemma_table: HashMap<String, String>,
}

impl PipelineConfig {
    pub fn new(use_lemmatizer: bool, use_stoplist: bool) -> Self {
        Self {
            use_lemmatizer,
            use_stoplist,
            stoplist: default_stoplist(),
            lemma_table: default_lemma_table(),
        }
    }

    pub fn bare() -> Self {
        Self::new(false, false)
    }

    pub fn with_stoplist(mut self, stoplist: HashSet<String>) -> Self {
        self.stoplist = stoplist;
        self
    }

    pub fn with_lemma_table(mut self, table: HashMap<String, String>) -> Self {
        self.lemma_table = table;
        self
    }

    pub fn stoplist(&self) -> &HashSet<String> {
        &self.stoplist
    }

    pub fn lemma_table(&self) -> &HashMap<String, String> {
        &self.lemma_table
    }
}

/// A message reduced to its distinct normalized words (binary presence).
#[derive(Debug, Clone)]
pub struct TokenizedMessage {
    pub id: String,
    pub label: Label,
    pub tokens: BTreeSet<String>,
}

/// The bundled 100-word high-frequency English stop-list.
pub fn default_stoplist() -> HashSet<String> {
    parse_stoplist(DEFAULT_STOPLIST).expect("bundled stop-list is valid")
}

/// The bundled irregular-forms lemma table.
pub fn default_lemma_table() -> HashMap<String, String> {
    parse_lemma_table(DEFAULT_LEMMAS).expect("bundled lemma table is valid")
}

fn check_word(word: &str, what: &str, line: usize) -> Result<()> {
    if word.is_empty() || !word.bytes().all(|b| b.is_ascii_lowercase()) {
        return Err(Error::InvalidArgument(format!(
            "{what} line {line}: entry {word:?} must be a non-empty lowercase word"
        )));
    }
    Ok(())
}

/// Parses a stop-list: one lowercase word per line, `#` comments allowed.
pub fn parse_stoplist(text: &str) -> Result<HashSet<String>> {
    let mut words = HashSet::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        check_word(line, "stop-list", i + 1)?;
        words.insert(line.to_string());
    }
    Ok(words)
}

/// Parses a lemma table: two whitespace-separated columns,
/// `inflected base`, one pair per line, `#` comments allowed.
pub fn parse_lemma_table(text: &str) -> Result<HashMap<String, String>> {
    let mut table = HashMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut cols = line.split_whitespace();
        let (inflected, base) = match (cols.next(), cols.next(), cols.next()) {
            (Some(a), Some(b), None) => (a, b),
            _ => {
                return Err(Error::InvalidArgument(format!(
                    "lemma table line {}: expected two columns, got {line:?}",
                    i + 1
                )))
            }
        };
        check_word(inflected, "lemma table", i + 1)?;
        check_word(base, "lemma table", i + 1)?;
        table.insert(inflected.to_string(), base.to_string());
    }
    Ok(table)
}

pub fn load_stoplist(path: &Path) -> Result<HashSet<String>> {
    let text = fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse_stoplist(&text)
}

pub fn load_lemma_table(path: &Path) -> Result<HashMap<String, String>> {
    let text = fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse_lemma_table(&text)
}

/// Lowercases the text and returns maximal runs of ASCII letters in order.
/// Digits, punctuation, and all other characters act as separators.
pub fn tokenize(text: &str) -> Vec<String> {
    let mut tokens = Vec::new();
    let mut current = String::new();
    for c in text.chars() {
        if c.is_ascii_alphabetic() {
            current.push(c.to_ascii_lowercase());
        } else if !current.is_empty() {
            tokens.push(std::mem::take(&mut current));
        }
    }
    if !current.is_empty() {
        tokens.push(current);
    }
    tokens
}

fn apply_suffix_rule(word: &str) -> Option<String> {
    let n = word.len();
    if word.ends_with("ies") && n > 3 {
        return Some(format!("{}y", &word[..n - 3]));
    }
    if word.ends_with("sses") {
        return Some(word[..n - 2].to_string());
    }
    if word.ends_with("es") && n > 2 {
        let strip_es = ["xes", "ches", "shes", "oes", "zzes"]
            .iter()
            .any(|suf| word.ends_with(suf));
        if strip_es {
            return Some(word[..n - 2].to_string());
        }
        return Some(word[..n - 1].to_string());
    }
    if word.ends_with('s') && !word.ends_with("ss") && n >= 2 {
        return Some(word[..n - 1].to_string());
    }
    if word.ends_with("ing") && n >= 6 {
        return Some(word[..n - 3].to_string());
    }
    if word.ends_with("ed") && n >= 4 {
        return Some(word[..n - 2].to_string());
    }
    None
}

/// Maps one token to its base form: a table hit is returned as-is,
/// otherwise suffix rules are applied until none fires.
pub fn lemmatize_word(word: &str, table: &HashMap<String, String>) -> String {
    let mut w = word.to_string();
    loop {
        if let Some(base) = table.get(&w) {
            return base.clone();
        }
        match apply_suffix_rule(&w) {
            Some(next) => w = next,
            None => return w,
        }
    }
}

/// Lemmatizes every token in order.
pub fn lemmatize(tokens: &[String], table: &HashMap<String, String>) -> Vec<String> {
    tokens.iter().map(|t| lemmatize_word(t, table)).collect()
}

/// Runs the full normalization pipeline on one message: tokenize the
/// subject and body, lemmatize and drop stop-words as configured, collapse
/// to a distinct-word set.
pub fn preprocess(message: &Message, config: &PipelineConfig) -> TokenizedMessage {
    let text = format!("{} {}", message.subject, message.body);
    let mut tokens = tokenize(&text);
    if config.use_lemmatizer {
        tokens = lemmatize(&tokens, &config.lemma_table);
    }
    let set: BTreeSet<String> = if config.use_stoplist {
        tokens
            .into_iter()
            .filter(|t| !config.stoplist.contains(t))
            .collect()
    } else {
        tokens.into_iter().collect()
    };
    TokenizedMessage {
        id: message.id.clone(),
        label: message.label,
        tokens: set,
    }
}

/// Preprocesses every corpus message, in corpus order. Runs on the rayon
/// pool when the `parallel` feature is enabled.
pub fn preprocess_corpus(corpus: &Corpus, config: &PipelineConfig) -> Vec<TokenizedMessage> {
    exec::map_slice(corpus.messages(), |m| preprocess(m, config))
}
