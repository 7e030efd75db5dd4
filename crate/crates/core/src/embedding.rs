//! Base vectors and contextual embeddings.
//!
//! A contextual embedding of a target word given a context multiset is the
//! mean, over retained in-vocabulary context tokens, of each token's base
//! vector weighted by its normalized co-occurrence with the target. The
//! Euclidean norm of that vector doubles as a relevance score: contexts that
//! never co-occur with the target produce the zero vector.
//!
//! Summation always runs in ascending word index order, so results are
//! bit-stable across runs and thread counts.

use std::collections::HashSet;
use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::cooccurrence::CoocMatrix;
use crate::corpus::Vocabulary;
use crate::error::{Error, Result};
use crate::util::l2_norm;

/// Dense `d x V` base-vector table, one vector per vocabulary word.
#[derive(Debug, Clone)]
pub struct EmbeddingMatrix {
    dim: usize,
    flat: Vec<f64>,
    norms: Vec<f64>,
    vocab_fingerprint: u64,
}

impl EmbeddingMatrix {
    /// Builds a matrix from one vector per vocabulary word, in index order.
    pub fn from_vectors(vocab: &Vocabulary, vectors: Vec<Vec<f64>>) -> Result<EmbeddingMatrix> {
        if vectors.len() != vocab.len() {
            return Err(Error::InvalidInput(format!(
                "expected {} vectors (one per vocabulary word), got {}",
                vocab.len(),
                vectors.len()
            )));
        }
        let dim = match vectors.first() {
            Some(v) if !v.is_empty() => v.len(),
            _ => return Err(Error::InvalidInput("embedding matrix needs at least one nonempty vector".into())),
        };
        let mut flat = Vec::with_capacity(dim * vectors.len());
        for (i, v) in vectors.iter().enumerate() {
            if v.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    got: v.len(),
                });
            }
            if v.iter().any(|x| !x.is_finite()) {
                return Err(Error::InvalidInput(format!(
                    "non-finite component in vector for word index {i}"
                )));
            }
            flat.extend_from_slice(v);
        }
        let norms = vectors.iter().map(|v| l2_norm(v)).collect();
        Ok(EmbeddingMatrix {
            dim,
            flat,
            norms,
            vocab_fingerprint: vocab.fingerprint(),
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Number of words (columns).
    pub fn len(&self) -> usize {
        self.norms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.norms.is_empty()
    }

    /// Base vector of the word at `index`. Panics if out of range.
    pub fn vector(&self, index: usize) -> &[f64] {
        &self.flat[index * self.dim..(index + 1) * self.dim]
    }

    /// Cached Euclidean norm of the word's base vector.
    pub fn norm(&self, index: usize) -> f64 {
        self.norms[index]
    }

    pub fn vocab_fingerprint(&self) -> u64 {
        self.vocab_fingerprint
    }

    /// Writes the plain-text vector format: header `<V> <d>`, then one
    /// `word v1 ... vd` line per word. Full round-trip precision.
    pub fn save(&self, vocab: &Vocabulary, path: &Path) -> Result<()> {
        if vocab.len() != self.len() || vocab.fingerprint() != self.vocab_fingerprint {
            return Err(Error::VocabularyMismatch(
                "embedding matrix was not built over this vocabulary".into(),
            ));
        }
        let mut out = String::new();
        writeln!(out, "{} {}", self.len(), self.dim).unwrap();
        for i in 0..self.len() {
            out.push_str(vocab.token(i));
            for x in self.vector(i) {
                write!(out, " {x}").unwrap();
            }
            out.push('\n');
        }
        fs::write(path, out).map_err(|e| Error::io(path, e))
    }
}

/// Loads word vectors from the plain-text interchange format (optional
/// `<V> <d>` first line, then `word v1 ... vd` records) and intersects them
/// with `vocab`. Returns the matrix over the intersection together with the
/// correspondingly shrunken, re-indexed vocabulary (original order kept).
pub fn load_embeddings(path: &Path, vocab: &Vocabulary) -> Result<(EmbeddingMatrix, Vocabulary)> {
    let name = path.display().to_string();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let mut lines = text.lines().enumerate().peekable();

    // A first line of exactly two integers is read as a `<V> <d>` header.
    let mut declared: Option<(usize, usize)> = None;
    if let Some((_, first)) = lines.peek() {
        let fields: Vec<&str> = first.split_whitespace().collect();
        if fields.len() == 2 {
            if let (Ok(v), Ok(d)) = (fields[0].parse::<usize>(), fields[1].parse::<usize>()) {
                declared = Some((v, d));
                lines.next();
            }
        }
    }

    let mut dim: Option<usize> = declared.map(|(_, d)| d);
    let mut records = 0usize;
    let mut found: std::collections::HashMap<String, Vec<f64>> = std::collections::HashMap::new();
    for (idx, line) in lines {
        let lineno = idx + 1;
        if line.is_empty() {
            continue;
        }
        let mut fields = line.split_whitespace();
        let word = fields
            .next()
            .ok_or_else(|| Error::parse(&name, lineno, "empty record"))?;
        let comps: Vec<f64> = fields
            .map(|f| {
                f.parse::<f64>()
                    .map_err(|_| Error::parse(&name, lineno, format!("invalid vector component '{f}'")))
            })
            .collect::<Result<_>>()?;
        if comps.is_empty() {
            return Err(Error::parse(&name, lineno, "record has a word but no vector components"));
        }
        if comps.iter().any(|x| !x.is_finite()) {
            return Err(Error::parse(&name, lineno, "non-finite vector component"));
        }
        match dim {
            None => dim = Some(comps.len()),
            Some(d) if d != comps.len() => {
                return Err(Error::parse(
                    &name,
                    lineno,
                    format!("dimension mismatch: expected {d} components, found {}", comps.len()),
                ));
            }
            _ => {}
        }
        records += 1;
        if vocab.index_of(word).is_some() && found.insert(word.to_string(), comps).is_some() {
            return Err(Error::parse(&name, lineno, format!("duplicate vector for word '{word}'")));
        }
    }
    if let Some((v, _)) = declared {
        if records != v {
            return Err(Error::parse(
                &name,
                1,
                format!("header declares {v} records, found {records}"),
            ));
        }
    }
    if found.is_empty() {
        return Err(Error::InvalidInput(format!(
            "no overlap between vectors in {name} and the vocabulary"
        )));
    }

    let shrunk = vocab.retain_words(|w| found.contains_key(w))?;
    let vectors: Vec<Vec<f64>> = shrunk
        .words()
        .iter()
        .map(|w| found.remove(w).expect("retained word has a vector"))
        .collect();
    let matrix = EmbeddingMatrix::from_vectors(&shrunk, vectors)?;
    Ok((matrix, shrunk))
}

/// A context: the multiset of tokens supplied alongside a target word.
/// Duplicates each contribute a term; out-of-vocabulary tokens are ignored.
#[derive(Debug, Clone)]
pub struct Context {
    pub words: Vec<String>,
    /// When false, every occurrence of the target word is removed from the
    /// multiset before the effective size is taken.
    pub include_target: bool,
}

impl Context {
    pub fn new<I, S>(words: I, include_target: bool) -> Context
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        Context {
            words: words.into_iter().map(Into::into).collect(),
            include_target,
        }
    }
}

/// The contextual embedding `u` of a target word, with its Euclidean norm
/// and the effective (retained in-vocabulary) context size.
#[derive(Debug, Clone)]
pub struct ContextualEmbedding {
    pub vector: Vec<f64>,
    pub norm: f64,
    pub target: usize,
    pub effective_context_size: usize,
}

fn check_pairing(w: &CoocMatrix, c: &EmbeddingMatrix, vocab: &Vocabulary) -> Result<()> {
    if w.vocab_fingerprint() != vocab.fingerprint() || w.size() != vocab.len() {
        return Err(Error::VocabularyMismatch(
            "co-occurrence matrix was not built over this vocabulary".into(),
        ));
    }
    if c.vocab_fingerprint() != vocab.fingerprint() || c.len() != vocab.len() {
        return Err(Error::VocabularyMismatch(
            "embedding matrix was not built over this vocabulary".into(),
        ));
    }
    Ok(())
}

fn embed(
    target: usize,
    words: &[String],
    include_target: bool,
    w: &CoocMatrix,
    c: &EmbeddingMatrix,
    vocab: &Vocabulary,
) -> Result<ContextualEmbedding> {
    check_pairing(w, c, vocab)?;
    if target >= vocab.len() {
        return Err(Error::IndexOutOfRange {
            index: target,
            size: vocab.len(),
        });
    }
    let target_token = vocab.token(target);
    let mut retained: Vec<usize> = words
        .iter()
        .filter(|t| include_target || t.as_str() != target_token)
        .filter_map(|t| vocab.index_of(t))
        .collect();
    retained.sort_unstable();

    let mut u = vec![0.0; c.dim()];
    let size = retained.len();
    if size > 0 {
        let row = w.row(target)?;
        for &j in &retained {
            let weight = match row.binary_search_by_key(&j, |&(p, _)| p) {
                Ok(pos) => row[pos].1,
                Err(_) => continue,
            };
            let base = c.vector(j);
            for (acc, x) in u.iter_mut().zip(base) {
                *acc += weight * x;
            }
        }
        let m = size as f64;
        for acc in &mut u {
            *acc /= m;
        }
    }
    let norm = l2_norm(&u);
    Ok(ContextualEmbedding {
        vector: u,
        norm,
        target,
        effective_context_size: size,
    })
}

/// Computes the contextual embedding of `target` given `ctx`.
/// An effective context of size zero yields the zero vector, not an error.
pub fn contextual_embedding(
    target: usize,
    ctx: &Context,
    w: &CoocMatrix,
    c: &EmbeddingMatrix,
    vocab: &Vocabulary,
) -> Result<ContextualEmbedding> {
    embed(target, &ctx.words, ctx.include_target, w, c, vocab)
}

/// Relevance of `ctx` to `target`: the norm of the contextual embedding with
/// the target always excluded from the context.
pub fn relevance_score(
    target: usize,
    ctx: &Context,
    w: &CoocMatrix,
    c: &EmbeddingMatrix,
    vocab: &Vocabulary,
) -> Result<f64> {
    Ok(embed(target, &ctx.words, false, w, c, vocab)?.norm)
}

/// Embeds a phrase as the mean of its in-vocabulary tokens' contextual
/// embeddings, each taken with the phrase itself as (target-inclusive)
/// context. Errors if no phrase token is in the vocabulary.
pub fn phrase_embedding(
    phrase: &[String],
    w: &CoocMatrix,
    c: &EmbeddingMatrix,
    vocab: &Vocabulary,
) -> Result<Vec<f64>> {
    check_pairing(w, c, vocab)?;
    let mut members: Vec<usize> = phrase.iter().filter_map(|t| vocab.index_of(t)).collect();
    if members.is_empty() {
        return Err(Error::InvalidInput(
            "phrase has no in-vocabulary token".into(),
        ));
    }
    members.sort_unstable();
    let mut acc = vec![0.0; c.dim()];
    for &m in &members {
        let ce = embed(m, phrase, true, w, c, vocab)?;
        for (a, x) in acc.iter_mut().zip(&ce.vector) {
            *a += x;
        }
    }
    let n = members.len() as f64;
    for a in &mut acc {
        *a /= n;
    }
    Ok(acc)
}

/// Ranks every vocabulary word by the norm of its contextual embedding under
/// `ctx` (target always included, so a context word can rank itself).
/// Returns the top `min(k, V)` as `(word index, norm)`, ties broken by
/// ascending index; words with zero norm pad the tail in index order.
pub fn top_norm_words(
    ctx: &Context,
    w: &CoocMatrix,
    c: &EmbeddingMatrix,
    vocab: &Vocabulary,
    k: usize,
) -> Result<Vec<(usize, f64)>> {
    check_pairing(w, c, vocab)?;
    if k == 0 {
        return Err(Error::InvalidInput("k must be >= 1".into()));
    }
    let v = vocab.len();
    let want = k.min(v);

    let mut ctx_idxs: Vec<usize> = ctx.words.iter().filter_map(|t| vocab.index_of(t)).collect();
    ctx_idxs.sort_unstable();
    let m = ctx_idxs.len() as f64;

    // Only words co-occurring with some context word can have nonzero norm.
    let candidates: Vec<usize> = {
        let mut set = HashSet::new();
        for &j in &ctx_idxs {
            for &(partner, _) in w.row(j)? {
                set.insert(partner);
            }
        }
        let mut v: Vec<usize> = set.into_iter().collect();
        v.sort_unstable();
        v
    };

    let mut nonzero: Vec<(usize, f64)> = Vec::new();
    let mut u = vec![0.0; c.dim()];
    for &cand in &candidates {
        u.iter_mut().for_each(|x| *x = 0.0);
        for &j in &ctx_idxs {
            let weight = w.get(j, cand)?;
            if weight != 0.0 {
                for (acc, x) in u.iter_mut().zip(c.vector(j)) {
                    *acc += weight * x;
                }
            }
        }
        if m > 0.0 {
            for acc in &mut u {
                *acc /= m;
            }
        }
        let norm = l2_norm(&u);
        if norm > 0.0 {
            nonzero.push((cand, norm));
        }
    }
    nonzero.sort_by(|a, b| b.1.total_cmp(&a.1).then_with(|| a.0.cmp(&b.0)));

    let mut out = nonzero;
    out.truncate(want);
    if out.len() < want {
        let taken: HashSet<usize> = out.iter().map(|&(i, _)| i).collect();
        for i in 0..v {
            if out.len() == want {
                break;
            }
            if !taken.contains(&i) {
                out.push((i, 0.0));
            }
        }
    }
    Ok(out)
}
