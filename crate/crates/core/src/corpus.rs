//! Corpus ingestion: tokenization and vocabulary construction.
//!
//! The tokenizer rule is deliberately simple and fully documented so that
//! artifact builds are reproducible: maximal runs of alphabetic characters
//! become lowercase tokens, everything else separates. Sentence-final
//! punctuation (`.` `!` `?`) and blank lines insert segment boundaries that
//! co-occurrence windows never cross.

use std::collections::{HashMap, HashSet};
use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::util::fnv1a64;

/// Bundled fallback stopword list, used when no stopword file is supplied.
const DEFAULT_STOPWORDS: &[&str] = &[
    "a", "about", "after", "all", "also", "an", "and", "any", "are", "as", "at", "be", "been",
    "but", "by", "can", "could", "did", "do", "does", "for", "from", "had", "has", "have", "he",
    "her", "him", "his", "how", "i", "if", "in", "into", "is", "it", "its", "may", "me", "more",
    "most", "my", "no", "not", "of", "on", "or", "our", "she", "should", "so", "some", "such",
    "than", "that", "the", "their", "them", "then", "there", "these", "they", "this", "those",
    "to", "was", "we", "were", "what", "when", "where", "which", "who", "why", "will", "with",
    "would", "you", "your",
];

/// Returns the bundled default stopword set.
pub fn default_stopwords() -> HashSet<String> {
    DEFAULT_STOPWORDS.iter().map(|s| s.to_string()).collect()
}

/// Loads a stopword file: one word per line, blank lines ignored.
/// Entries are lowercased so they match tokenizer output.
pub fn load_stopwords(path: &Path) -> Result<HashSet<String>> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    Ok(text
        .lines()
        .map(|l| l.trim().to_lowercase())
        .filter(|l| !l.is_empty())
        .collect())
}

/// An ordered stream of lowercase alphabetic tokens with segment boundaries.
///
/// `boundary_after[p] == true` means a sentence/paragraph break sits between
/// positions `p` and `p + 1`; windows must not span it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TokenStream {
    tokens: Vec<String>,
    boundary_after: Vec<bool>,
    decode_warnings: usize,
}

impl TokenStream {
    /// Builds a stream from pre-tokenized input.
    ///
    /// Tokens must be non-empty, all-alphabetic, and contain no uppercase
    /// characters; `boundary_after` must have one flag per token.
    pub fn from_tokens(tokens: Vec<String>, boundary_after: Vec<bool>) -> Result<Self> {
        if tokens.len() != boundary_after.len() {
            return Err(Error::InvalidInput(format!(
                "boundary flag count {} does not match token count {}",
                boundary_after.len(),
                tokens.len()
            )));
        }
        for t in &tokens {
            if t.is_empty() || t.chars().any(|c| !c.is_alphabetic() || c.is_uppercase()) {
                return Err(Error::InvalidInput(format!(
                    "token '{t}' is not a non-empty lowercase alphabetic string"
                )));
            }
        }
        Ok(TokenStream {
            tokens,
            boundary_after,
            decode_warnings: 0,
        })
    }

    pub fn tokens(&self) -> &[String] {
        &self.tokens
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    /// Whether a segment boundary sits immediately after position `pos`.
    pub fn boundary_after(&self, pos: usize) -> bool {
        self.boundary_after.get(pos).copied().unwrap_or(false)
    }

    /// Number of undecodable byte spans skipped while reading the source.
    pub fn decode_warnings(&self) -> usize {
        self.decode_warnings
    }
}

fn flush_token(tokens: &mut Vec<String>, flags: &mut Vec<bool>, current: &mut String) {
    if !current.is_empty() {
        tokens.push(std::mem::take(current));
        flags.push(false);
    }
}

fn mark_boundary(flags: &mut [bool]) {
    if let Some(last) = flags.last_mut() {
        *last = true;
    }
}

/// Tokenizes text: maximal alphabetic runs become lowercase tokens, all other
/// characters are separators. `.` `!` `?` and blank lines mark boundaries.
///
/// Lowercase expansions that produce non-letters (combining marks) are
/// dropped inside the token rather than splitting it.
pub fn tokenize(text: &str) -> TokenStream {
    let mut tokens = Vec::new();
    let mut flags = Vec::new();
    let mut current = String::new();

    for line in text.lines() {
        if line.chars().all(char::is_whitespace) {
            mark_boundary(&mut flags);
            continue;
        }
        for ch in line.chars() {
            if ch.is_alphabetic() {
                for lc in ch.to_lowercase() {
                    if lc.is_alphabetic() {
                        current.push(lc);
                    }
                }
            } else {
                flush_token(&mut tokens, &mut flags, &mut current);
                if matches!(ch, '.' | '!' | '?') {
                    mark_boundary(&mut flags);
                }
            }
        }
        // Newline is a separator but not a boundary.
        flush_token(&mut tokens, &mut flags, &mut current);
    }
    flush_token(&mut tokens, &mut flags, &mut current);

    TokenStream {
        tokens,
        boundary_after: flags,
        decode_warnings: 0,
    }
}

/// Tokenizes raw bytes. Undecodable spans are skipped (they act as
/// separators) and counted as warnings, one per maximal bad span.
pub fn tokenize_bytes(bytes: &[u8]) -> TokenStream {
    let text = String::from_utf8_lossy(bytes);
    let mut warnings = 0;
    let mut in_bad_span = false;
    for ch in text.chars() {
        if ch == char::REPLACEMENT_CHARACTER {
            if !in_bad_span {
                warnings += 1;
                in_bad_span = true;
            }
        } else {
            in_bad_span = false;
        }
    }
    let mut stream = tokenize(&text);
    stream.decode_warnings = warnings;
    stream
}

/// A filtered vocabulary with dense indices and raw corpus frequencies.
///
/// Index order is descending frequency with lexicographic tie-break, so
/// identical inputs always yield identical index assignments.
#[derive(Debug, Clone)]
pub struct Vocabulary {
    tokens: Vec<String>,
    index: HashMap<String, usize>,
    freqs: Vec<u64>,
    fingerprint: u64,
}

impl Vocabulary {
    fn from_parts(entries: Vec<(String, u64)>) -> Result<Self> {
        let mut index = HashMap::with_capacity(entries.len());
        let mut tokens = Vec::with_capacity(entries.len());
        let mut freqs = Vec::with_capacity(entries.len());
        for (word, freq) in entries {
            if word.is_empty() {
                return Err(Error::InvalidInput("empty word in vocabulary".into()));
            }
            if freq == 0 {
                return Err(Error::InvalidInput(format!("word '{word}' has frequency 0")));
            }
            if index.insert(word.clone(), tokens.len()).is_some() {
                return Err(Error::InvalidInput(format!(
                    "duplicate word '{word}' in vocabulary"
                )));
            }
            tokens.push(word);
            freqs.push(freq);
        }
        let fingerprint = fingerprint_of(&tokens, &freqs);
        Ok(Vocabulary {
            tokens,
            index,
            freqs,
            fingerprint,
        })
    }

    /// Number of words (V).
    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    pub fn words(&self) -> &[String] {
        &self.tokens
    }

    /// The word at a dense index. Panics if out of range.
    pub fn token(&self, index: usize) -> &str {
        &self.tokens[index]
    }

    pub fn index_of(&self, word: &str) -> Option<usize> {
        self.index.get(word).copied()
    }

    /// Raw corpus occurrence count of the word at `index`. Panics if out of range.
    pub fn freq(&self, index: usize) -> u64 {
        self.freqs[index]
    }

    pub fn freq_of(&self, word: &str) -> Option<u64> {
        self.index_of(word).map(|i| self.freqs[i])
    }

    /// Stable content hash over (word, freq) pairs in index order. Artifacts
    /// built over the same vocabulary carry the same fingerprint.
    pub fn fingerprint(&self) -> u64 {
        self.fingerprint
    }

    /// Maps each of this vocabulary's indices to the matching index in
    /// `other` (by word), or `None` where the word is absent.
    pub fn mapping_to(&self, other: &Vocabulary) -> Vec<Option<usize>> {
        self.tokens.iter().map(|t| other.index_of(t)).collect()
    }

    /// Keeps only the words for which `keep` returns true, preserving
    /// relative order and frequencies; indices are re-densified.
    pub fn retain_words(&self, mut keep: impl FnMut(&str) -> bool) -> Result<Vocabulary> {
        let entries: Vec<(String, u64)> = self
            .tokens
            .iter()
            .zip(&self.freqs)
            .filter(|(w, _)| keep(w))
            .map(|(w, f)| (w.clone(), *f))
            .collect();
        if entries.is_empty() {
            return Err(Error::EmptyVocabulary(
                "no vocabulary word survived the restriction".into(),
            ));
        }
        Vocabulary::from_parts(entries)
    }

    /// Writes the `VOCABv1` text format: header `VOCABv1\t<V>`, then one
    /// `<word>\t<freq>` line per word; the 0-based record number is the index.
    pub fn save(&self, path: &Path) -> Result<()> {
        let mut out = String::new();
        writeln!(out, "VOCABv1\t{}", self.len()).unwrap();
        for (word, freq) in self.tokens.iter().zip(&self.freqs) {
            writeln!(out, "{word}\t{freq}").unwrap();
        }
        fs::write(path, out).map_err(|e| Error::io(path, e))
    }

    /// Loads a `VOCABv1` file, validating the header, record count,
    /// frequencies, and duplicate-freeness. Line numbers in errors are
    /// 1-based and include the header line.
    pub fn load(path: &Path) -> Result<Vocabulary> {
        let name = path.display().to_string();
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let mut lines = text.lines().enumerate();

        let (_, header) = lines
            .next()
            .ok_or_else(|| Error::parse(&name, 1, "empty file, expected VOCABv1 header"))?;
        let mut parts = header.split('\t');
        if parts.next() != Some("VOCABv1") {
            return Err(Error::parse(&name, 1, "expected VOCABv1 header"));
        }
        let declared: usize = parts
            .next()
            .and_then(|v| v.parse().ok())
            .ok_or_else(|| Error::parse(&name, 1, "header must be VOCABv1\\t<V>"))?;
        if parts.next().is_some() {
            return Err(Error::parse(&name, 1, "header must be VOCABv1\\t<V>"));
        }

        let mut entries = Vec::with_capacity(declared);
        let mut seen: HashSet<&str> = HashSet::with_capacity(declared);
        for (idx, line) in lines {
            let lineno = idx + 1;
            let (word, freq_str) = line.split_once('\t').ok_or_else(|| {
                Error::parse(&name, lineno, "expected 2 tab-separated fields: word, freq")
            })?;
            if word.is_empty() {
                return Err(Error::parse(&name, lineno, "empty word"));
            }
            if !seen.insert(word) {
                return Err(Error::parse(&name, lineno, format!("duplicate word '{word}'")));
            }
            let freq: u64 = freq_str.parse().map_err(|_| {
                Error::parse(&name, lineno, format!("invalid frequency '{freq_str}'"))
            })?;
            if freq == 0 {
                return Err(Error::parse(&name, lineno, "frequency must be >= 1"));
            }
            entries.push((word.to_string(), freq));
        }
        if entries.len() != declared {
            return Err(Error::parse(
                &name,
                1,
                format!("header declares {} words, found {}", declared, entries.len()),
            ));
        }
        Vocabulary::from_parts(entries)
    }
}

fn fingerprint_of(tokens: &[String], freqs: &[u64]) -> u64 {
    let mut bytes = Vec::new();
    for (t, f) in tokens.iter().zip(freqs) {
        bytes.extend_from_slice(t.as_bytes());
        bytes.push(0);
        bytes.extend_from_slice(&f.to_le_bytes());
    }
    fnv1a64(&bytes)
}

/// Builds the vocabulary of tokens occurring at least `min_count` times and
/// not in `stopwords`. Frequencies are counts over the full stream; ordering
/// is descending frequency, ties broken lexicographically.
pub fn build_vocabulary(
    stream: &TokenStream,
    min_count: u64,
    stopwords: &HashSet<String>,
) -> Result<Vocabulary> {
    if min_count == 0 {
        return Err(Error::InvalidInput("min_count must be >= 1".into()));
    }
    let mut counts: HashMap<&str, u64> = HashMap::new();
    for token in stream.tokens() {
        *counts.entry(token.as_str()).or_insert(0) += 1;
    }
    let distinct = counts.len();
    let mut kept: Vec<(String, u64)> = counts
        .into_iter()
        .filter(|(word, count)| *count >= min_count && !stopwords.contains(*word))
        .map(|(word, count)| (word.to_string(), count))
        .collect();
    kept.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
    if kept.is_empty() {
        return Err(Error::EmptyVocabulary(format!(
            "no token passed the filters (min_count={min_count}, stopwords={}, distinct_tokens={distinct})",
            stopwords.len()
        )));
    }
    Vocabulary::from_parts(kept)
}
