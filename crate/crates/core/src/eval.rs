//! Task datasets and the evaluation harness.
//!
//! Four task families share one pattern: load a tab-separated dataset whose
//! first line names the schema, embed (word, context) pairs, score them, and
//! aggregate. The target word is included in its own context everywhere
//! except word-context relevance, which scores the norm with the target
//! excluded.
//!
//! Loaders fail loudly: every rejection carries the 1-based physical line
//! number (the header is line 1).

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::cooccurrence::CoocMatrix;
use crate::corpus::Vocabulary;
use crate::embedding::{contextual_embedding, relevance_score, Context, EmbeddingMatrix};
use crate::error::{Error, Result};
use crate::metrics::{self, ScoredLabels};
use crate::similarity::{alpha_similarity, Alpha};
use crate::util::fnv1a64;

/// Senses with fewer examples than this are removed before word-sense
/// classification.
pub const MIN_SENSE_EXAMPLES: usize = 10;

/// One scored entry of a word-context relevance test.
#[derive(Debug, Clone)]
pub struct WcrEntry {
    pub word: String,
    pub context: Vec<String>,
    pub label: bool,
}

/// A relevance test: one positive (word, context) pair and `m` negatives.
#[derive(Debug, Clone)]
pub struct WcrTest {
    pub id: String,
    pub entries: Vec<WcrEntry>,
    /// Number of negative entries.
    pub m: usize,
}

impl WcrTest {
    pub fn new(id: String, entries: Vec<WcrEntry>) -> Result<WcrTest> {
        let positives = entries.iter().filter(|e| e.label).count();
        if positives != 1 {
            return Err(Error::InvalidInput(format!(
                "test '{id}': expected exactly one positive entry, found {positives}"
            )));
        }
        let m = entries.len() - 1;
        if m == 0 {
            return Err(Error::InvalidInput(format!(
                "test '{id}': needs at least one negative entry"
            )));
        }
        Ok(WcrTest { id, entries, m })
    }
}

/// A (word, context) pair of a contextual-word-similarity test.
#[derive(Debug, Clone)]
pub struct CwsPair {
    pub word: String,
    pub context: Vec<String>,
}

/// A similarity test: rank the positives above the negatives against the query.
#[derive(Debug, Clone)]
pub struct CwsTest {
    pub id: String,
    pub query: CwsPair,
    pub positives: Vec<CwsPair>,
    pub negatives: Vec<CwsPair>,
}

/// A human-scored pair of word-context pairs.
#[derive(Debug, Clone)]
pub struct ScwsTest {
    pub id: String,
    pub word1: String,
    pub context1: Vec<String>,
    pub word2: String,
    pub context2: Vec<String>,
    pub gold: f64,
}

/// A sense-labeled example sentence for one word.
#[derive(Debug, Clone)]
pub struct WscExample {
    pub sense: String,
    pub word: String,
    pub sentence: Vec<String>,
}

fn read_lines(path: &Path) -> Result<(String, String)> {
    let name = path.display().to_string();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    Ok((name, text))
}

fn expect_header(name: &str, text: &str, tag: &str) -> Result<()> {
    match text.lines().next() {
        Some(line) if line == tag => Ok(()),
        Some(line) => Err(Error::parse(
            name,
            1,
            format!("expected {tag} header, found '{line}'"),
        )),
        None => Err(Error::parse(name, 1, format!("empty file, expected {tag} header"))),
    }
}

fn split_context(field: &str) -> Vec<String> {
    field.split_whitespace().map(|s| s.to_string()).collect()
}

/// Loads a `WCRv1` file: `<test_id>\t<label 0|1>\t<word>\t<context words>`.
/// Tests keep their first-appearance order; each must contain exactly one
/// positive and at least one negative.
pub fn load_wcr(path: &Path) -> Result<Vec<WcrTest>> {
    let (name, text) = read_lines(path)?;
    expect_header(&name, &text, "WCRv1")?;

    struct Pending {
        first_line: usize,
        positive_line: Option<usize>,
        entries: Vec<WcrEntry>,
    }
    let mut order: Vec<String> = Vec::new();
    let mut tests: BTreeMap<String, Pending> = BTreeMap::new();

    for (idx, line) in text.lines().enumerate().skip(1) {
        let lineno = idx + 1;
        let fields: Vec<&str> = line.split('\t').collect();
        if fields.len() != 4 {
            return Err(Error::parse(
                &name,
                lineno,
                format!("expected 4 tab-separated fields, found {}", fields.len()),
            ));
        }
        let (id, label_str, word, ctx) = (fields[0], fields[1], fields[2], fields[3]);
        if id.is_empty() {
            return Err(Error::parse(&name, lineno, "empty test id"));
        }
        let label = match label_str {
            "0" => false,
            "1" => true,
            other => {
                return Err(Error::parse(
                    &name,
                    lineno,
                    format!("label must be 0 or 1, found '{other}'"),
                ))
            }
        };
        if word.is_empty() {
            return Err(Error::parse(&name, lineno, "empty word"));
        }
        let pending = tests.entry(id.to_string()).or_insert_with(|| {
            order.push(id.to_string());
            Pending {
                first_line: lineno,
                positive_line: None,
                entries: Vec::new(),
            }
        });
        if label {
            if let Some(prev) = pending.positive_line {
                return Err(Error::parse(
                    &name,
                    lineno,
                    format!("test '{id}': second positive entry (first at line {prev})"),
                ));
            }
            pending.positive_line = Some(lineno);
        }
        pending.entries.push(WcrEntry {
            word: word.to_string(),
            context: split_context(ctx),
            label,
        });
    }

    let mut out = Vec::with_capacity(order.len());
    for id in order {
        let pending = tests.remove(&id).expect("ordered id present");
        if pending.positive_line.is_none() {
            return Err(Error::parse(
                &name,
                pending.first_line,
                format!("test '{id}' has no positive entry"),
            ));
        }
        if pending.entries.len() < 2 {
            return Err(Error::parse(
                &name,
                pending.first_line,
                format!("test '{id}' has no negative entries"),
            ));
        }
        out.push(WcrTest::new(id, pending.entries)?);
    }
    Ok(out)
}

/// Loads a `CWSv1` file: `<test_id>\t<role query|pos|neg>\t<word>\t<context words>`.
/// Each test needs exactly one query, at least one positive, and at least
/// one negative.
pub fn load_cws(path: &Path) -> Result<Vec<CwsTest>> {
    let (name, text) = read_lines(path)?;
    expect_header(&name, &text, "CWSv1")?;

    struct Pending {
        first_line: usize,
        query: Option<(usize, CwsPair)>,
        positives: Vec<CwsPair>,
        negatives: Vec<CwsPair>,
    }
    let mut order: Vec<String> = Vec::new();
    let mut tests: BTreeMap<String, Pending> = BTreeMap::new();

    for (idx, line) in text.lines().enumerate().skip(1) {
        let lineno = idx + 1;
        let fields: Vec<&str> = line.split('\t').collect();
        if fields.len() != 4 {
            return Err(Error::parse(
                &name,
                lineno,
                format!("expected 4 tab-separated fields, found {}", fields.len()),
            ));
        }
        let (id, role, word, ctx) = (fields[0], fields[1], fields[2], fields[3]);
        if id.is_empty() {
            return Err(Error::parse(&name, lineno, "empty test id"));
        }
        if word.is_empty() {
            return Err(Error::parse(&name, lineno, "empty word"));
        }
        let pair = CwsPair {
            word: word.to_string(),
            context: split_context(ctx),
        };
        let pending = tests.entry(id.to_string()).or_insert_with(|| {
            order.push(id.to_string());
            Pending {
                first_line: lineno,
                query: None,
                positives: Vec::new(),
                negatives: Vec::new(),
            }
        });
        match role {
            "query" => {
                if let Some((prev, _)) = pending.query {
                    return Err(Error::parse(
                        &name,
                        lineno,
                        format!("test '{id}': second query entry (first at line {prev})"),
                    ));
                }
                pending.query = Some((lineno, pair));
            }
            "pos" => pending.positives.push(pair),
            "neg" => pending.negatives.push(pair),
            other => {
                return Err(Error::parse(
                    &name,
                    lineno,
                    format!("role must be query, pos, or neg, found '{other}'"),
                ))
            }
        }
    }

    let mut out = Vec::with_capacity(order.len());
    for id in order {
        let pending = tests.remove(&id).expect("ordered id present");
        let query = match pending.query {
            Some((_, q)) => q,
            None => {
                return Err(Error::parse(
                    &name,
                    pending.first_line,
                    format!("test '{id}' has no query entry"),
                ))
            }
        };
        if pending.positives.is_empty() || pending.negatives.is_empty() {
            return Err(Error::parse(
                &name,
                pending.first_line,
                format!("test '{id}' needs at least one pos and one neg entry"),
            ));
        }
        out.push(CwsTest {
            id,
            query,
            positives: pending.positives,
            negatives: pending.negatives,
        });
    }
    Ok(out)
}

/// Loads an `SCWSv1` file:
/// `<test_id>\t<word1>\t<context1>\t<word2>\t<context2>\t<gold score>`.
pub fn load_scws(path: &Path) -> Result<Vec<ScwsTest>> {
    let (name, text) = read_lines(path)?;
    expect_header(&name, &text, "SCWSv1")?;
    let mut out = Vec::new();
    for (idx, line) in text.lines().enumerate().skip(1) {
        let lineno = idx + 1;
        let fields: Vec<&str> = line.split('\t').collect();
        if fields.len() != 6 {
            return Err(Error::parse(
                &name,
                lineno,
                format!("expected 6 tab-separated fields, found {}", fields.len()),
            ));
        }
        if fields[0].is_empty() {
            return Err(Error::parse(&name, lineno, "empty test id"));
        }
        if fields[1].is_empty() || fields[3].is_empty() {
            return Err(Error::parse(&name, lineno, "empty word"));
        }
        let context1 = split_context(fields[2]);
        let context2 = split_context(fields[4]);
        if context1.is_empty() || context2.is_empty() {
            return Err(Error::parse(&name, lineno, "contexts must be non-empty"));
        }
        let gold: f64 = fields[5]
            .parse()
            .map_err(|_| Error::parse(&name, lineno, format!("invalid gold score '{}'", fields[5])))?;
        if !gold.is_finite() {
            return Err(Error::parse(&name, lineno, "gold score must be finite"));
        }
        out.push(ScwsTest {
            id: fields[0].to_string(),
            word1: fields[1].to_string(),
            context1,
            word2: fields[3].to_string(),
            context2,
            gold,
        });
    }
    Ok(out)
}

/// Loads a `WSCv1` file: `<sense_label>\t<word>\t<sentence words>`.
pub fn load_wsc(path: &Path) -> Result<Vec<WscExample>> {
    let (name, text) = read_lines(path)?;
    expect_header(&name, &text, "WSCv1")?;
    let mut out = Vec::new();
    for (idx, line) in text.lines().enumerate().skip(1) {
        let lineno = idx + 1;
        let fields: Vec<&str> = line.split('\t').collect();
        if fields.len() != 3 {
            return Err(Error::parse(
                &name,
                lineno,
                format!("expected 3 tab-separated fields, found {}", fields.len()),
            ));
        }
        if fields[0].is_empty() {
            return Err(Error::parse(&name, lineno, "empty sense label"));
        }
        if fields[1].is_empty() {
            return Err(Error::parse(&name, lineno, "empty word"));
        }
        out.push(WscExample {
            sense: fields[0].to_string(),
            word: fields[1].to_string(),
            sentence: split_context(fields[2]),
        });
    }
    Ok(out)
}

/// Word-context relevance results. `mean_spearman` is `None` when every
/// evaluated test had all-tied scores.
#[derive(Debug, Clone)]
pub struct WcrSummary {
    pub mean_spearman: Option<f64>,
    pub mean_precision_at_1: f64,
    pub evaluated: usize,
    pub skipped_oov: usize,
    /// Tests whose per-test correlation was undefined (all scores tied).
    pub spearman_skipped: usize,
}

/// Scores every entry of every test by target-excluded relevance, then
/// averages per-test Spearman (against the 0/1 labels) and Precision@1.
/// Tests whose positive word is out of vocabulary, or that lose all
/// negatives to vocabulary filtering, are skipped and counted.
pub fn eval_wcr(
    tests: &[WcrTest],
    w: &CoocMatrix,
    c: &EmbeddingMatrix,
    vocab: &Vocabulary,
) -> Result<WcrSummary> {
    let mut pooled: Vec<ScoredLabels> = Vec::new();
    let mut spearmans: Vec<f64> = Vec::new();
    let mut skipped_oov = 0usize;
    let mut spearman_skipped = 0usize;

    for test in tests {
        let retained: Vec<&WcrEntry> = test
            .entries
            .iter()
            .filter(|e| vocab.index_of(&e.word).is_some())
            .collect();
        let positives = retained.iter().filter(|e| e.label).count();
        let negatives = retained.len() - positives;
        if positives != 1 || negatives == 0 {
            skipped_oov += 1;
            continue;
        }
        let mut scores = Vec::with_capacity(retained.len());
        let mut labels = Vec::with_capacity(retained.len());
        for entry in &retained {
            let target = vocab.index_of(&entry.word).expect("filtered to in-vocab");
            let ctx = Context::new(entry.context.iter().cloned(), true);
            scores.push(relevance_score(target, &ctx, w, c, vocab)?);
            labels.push(entry.label);
        }
        let gold: Vec<f64> = labels.iter().map(|&l| if l { 1.0 } else { 0.0 }).collect();
        match metrics::spearman(&scores, &gold) {
            Ok(sp) => spearmans.push(sp),
            Err(Error::UndefinedMetric(_)) => spearman_skipped += 1,
            Err(e) => return Err(e),
        }
        pooled.push(ScoredLabels::new(scores, labels)?);
    }

    if pooled.is_empty() {
        return Err(Error::InvalidInput(
            "no evaluable relevance tests after vocabulary filtering".into(),
        ));
    }
    let mean_precision_at_1 = metrics::precision_at_1(&pooled)?;
    let mean_spearman = if spearmans.is_empty() {
        None
    } else {
        Some(spearmans.iter().sum::<f64>() / spearmans.len() as f64)
    };
    Ok(WcrSummary {
        mean_spearman,
        mean_precision_at_1,
        evaluated: pooled.len(),
        skipped_oov,
        spearman_skipped,
    })
}

/// Contextual word similarity results.
#[derive(Debug, Clone)]
pub struct CwsSummary {
    pub mean_auc: f64,
    pub mean_ap: f64,
    pub evaluated: usize,
    pub skipped: usize,
}

/// Embeds the query and every candidate (targets included in their own
/// contexts), scores candidates against the query by cosine, and averages
/// per-test ROC-AUC and Average Precision. Candidates are scored positives
/// first, in dataset order.
pub fn eval_cws(
    tests: &[CwsTest],
    w: &CoocMatrix,
    c: &EmbeddingMatrix,
    vocab: &Vocabulary,
) -> Result<CwsSummary> {
    let mut aucs: Vec<f64> = Vec::new();
    let mut aps: Vec<f64> = Vec::new();
    let mut skipped = 0usize;

    for test in tests {
        let query_idx = match vocab.index_of(&test.query.word) {
            Some(i) => i,
            None => {
                skipped += 1;
                continue;
            }
        };
        let in_vocab = |p: &&CwsPair| vocab.index_of(&p.word).is_some();
        let positives: Vec<&CwsPair> = test.positives.iter().filter(in_vocab).collect();
        let negatives: Vec<&CwsPair> = test.negatives.iter().filter(in_vocab).collect();
        if positives.is_empty() || negatives.is_empty() {
            skipped += 1;
            continue;
        }
        let query_ctx = Context::new(test.query.context.iter().cloned(), true);
        let query_u = contextual_embedding(query_idx, &query_ctx, w, c, vocab)?;

        let mut scores = Vec::with_capacity(positives.len() + negatives.len());
        let mut labels = Vec::with_capacity(scores.capacity());
        for (pair, label) in positives
            .iter()
            .map(|p| (*p, true))
            .chain(negatives.iter().map(|p| (*p, false)))
        {
            let idx = vocab.index_of(&pair.word).expect("filtered to in-vocab");
            let ctx = Context::new(pair.context.iter().cloned(), true);
            let u = contextual_embedding(idx, &ctx, w, c, vocab)?;
            scores.push(alpha_similarity(&u.vector, &query_u.vector, Alpha::ONE)?);
            labels.push(label);
        }
        let data = ScoredLabels::new(scores, labels)?;
        aucs.push(metrics::roc_auc(&data)?);
        aps.push(metrics::average_precision(&data)?);
    }

    if aucs.is_empty() {
        return Err(Error::InvalidInput(
            "no evaluable similarity tests after vocabulary filtering".into(),
        ));
    }
    Ok(CwsSummary {
        mean_auc: aucs.iter().sum::<f64>() / aucs.len() as f64,
        mean_ap: aps.iter().sum::<f64>() / aps.len() as f64,
        evaluated: aucs.len(),
        skipped,
    })
}

/// Human-judgment similarity results.
#[derive(Debug, Clone)]
pub struct ScwsSummary {
    pub spearman: f64,
    pub evaluated: usize,
    pub dropped_oov: usize,
}

/// Scores each pair by the cosine of the two contextual embeddings (targets
/// included) and reports the Spearman correlation against the gold scores.
/// Pairs with an out-of-vocabulary word are dropped and counted; a zero
/// embedding on either side scores 0.
pub fn eval_scws(
    tests: &[ScwsTest],
    w: &CoocMatrix,
    c: &EmbeddingMatrix,
    vocab: &Vocabulary,
) -> Result<ScwsSummary> {
    let mut preds: Vec<f64> = Vec::new();
    let mut golds: Vec<f64> = Vec::new();
    let mut dropped = 0usize;
    for test in tests {
        let (i1, i2) = match (vocab.index_of(&test.word1), vocab.index_of(&test.word2)) {
            (Some(a), Some(b)) => (a, b),
            _ => {
                dropped += 1;
                continue;
            }
        };
        let u1 = contextual_embedding(i1, &Context::new(test.context1.iter().cloned(), true), w, c, vocab)?;
        let u2 = contextual_embedding(i2, &Context::new(test.context2.iter().cloned(), true), w, c, vocab)?;
        preds.push(alpha_similarity(&u1.vector, &u2.vector, Alpha::ONE)?);
        golds.push(test.gold);
    }
    if preds.len() < 2 {
        return Err(Error::InvalidInput(format!(
            "fewer than 2 tests retained after vocabulary filtering ({})",
            preds.len()
        )));
    }
    let spearman = metrics::spearman(&preds, &golds)?;
    Ok(ScwsSummary {
        spearman,
        evaluated: preds.len(),
        dropped_oov: dropped,
    })
}

/// Parameters of the word-sense classification task.
#[derive(Debug, Clone, Copy)]
pub struct WscParams {
    /// Neighbor count of the K-NN classifier.
    pub k: usize,
    /// Fraction of each sense's examples placed in the training split.
    pub split_fraction: f64,
    pub seed: u64,
}

impl Default for WscParams {
    fn default() -> Self {
        WscParams {
            k: 5,
            split_fraction: 0.8,
            seed: 0,
        }
    }
}

/// Per-word classification outcome.
#[derive(Debug, Clone)]
pub struct WordAccuracy {
    pub word: String,
    pub senses: usize,
    pub train_size: usize,
    pub test_size: usize,
    pub correct: usize,
    pub accuracy: f64,
}

/// Word-sense classification results.
#[derive(Debug, Clone)]
pub struct WscSummary {
    pub mean_accuracy: f64,
    pub per_word: Vec<WordAccuracy>,
    pub words_evaluated: usize,
    pub words_skipped_single_sense: usize,
    pub words_skipped_oov: usize,
    /// Words whose training split was smaller than K, with the reason.
    pub words_skipped_knn: Vec<String>,
    pub params: WscParams,
}

/// Per word: filters rare senses, makes a seeded stratified train/test
/// split, embeds every example sentence (target included), classifies the
/// test split by K-NN, and averages accuracy across words.
///
/// Each word's split is drawn from an RNG seeded by `(seed, word)`, so
/// results do not depend on evaluation order or thread count.
pub fn eval_wsc(
    examples: &[WscExample],
    w: &CoocMatrix,
    c: &EmbeddingMatrix,
    vocab: &Vocabulary,
    params: &WscParams,
) -> Result<WscSummary> {
    if params.k == 0 {
        return Err(Error::InvalidInput("K must be >= 1".into()));
    }
    if !(params.split_fraction > 0.0 && params.split_fraction < 1.0) {
        return Err(Error::InvalidInput(format!(
            "split fraction must lie strictly between 0 and 1, got {}",
            params.split_fraction
        )));
    }

    let mut by_word: BTreeMap<&str, Vec<&WscExample>> = BTreeMap::new();
    for ex in examples {
        by_word.entry(&ex.word).or_default().push(ex);
    }

    let mut per_word: Vec<WordAccuracy> = Vec::new();
    let mut skipped_single_sense = 0usize;
    let mut skipped_oov = 0usize;
    let mut skipped_knn: Vec<String> = Vec::new();

    for (word, items) in by_word {
        let target = match vocab.index_of(word) {
            Some(i) => i,
            None => {
                skipped_oov += 1;
                continue;
            }
        };
        let mut by_sense: BTreeMap<&str, Vec<&WscExample>> = BTreeMap::new();
        for ex in items {
            by_sense.entry(&ex.sense).or_default().push(ex);
        }
        by_sense.retain(|_, v| v.len() >= MIN_SENSE_EXAMPLES);
        if by_sense.len() < 2 {
            skipped_single_sense += 1;
            continue;
        }

        let senses = by_sense.len();
        let mut rng = ChaCha8Rng::seed_from_u64(params.seed ^ fnv1a64(word.as_bytes()));
        let mut train: Vec<(Vec<f64>, usize)> = Vec::new();
        let mut test: Vec<(Vec<f64>, usize)> = Vec::new();
        for (label, (_, sense_items)) in by_sense.iter().enumerate() {
            let mut shuffled: Vec<&&WscExample> = sense_items.iter().collect();
            shuffled.shuffle(&mut rng);
            let n = shuffled.len();
            let n_train = ((n as f64 * params.split_fraction).floor() as usize).clamp(1, n - 1);
            for (pos, ex) in shuffled.iter().enumerate() {
                let ctx = Context::new(ex.sentence.iter().cloned(), true);
                let u = contextual_embedding(target, &ctx, w, c, vocab)?.vector;
                if pos < n_train {
                    train.push((u, label));
                } else {
                    test.push((u, label));
                }
            }
        }
        if params.k > train.len() {
            skipped_knn.push(format!(
                "{word}: K={} exceeds training size {}",
                params.k,
                train.len()
            ));
            continue;
        }
        let mut correct = 0usize;
        for (u, label) in &test {
            if metrics::knn_classify(&train, u, params.k)? == *label {
                correct += 1;
            }
        }
        let accuracy = correct as f64 / test.len() as f64;
        per_word.push(WordAccuracy {
            word: word.to_string(),
            senses,
            train_size: train.len(),
            test_size: test.len(),
            correct,
            accuracy,
        });
    }

    if per_word.is_empty() {
        let mut message = String::from("no classifiable words after sense filtering");
        if !skipped_knn.is_empty() {
            message.push_str(&format!(" ({})", skipped_knn.join("; ")));
        }
        return Err(Error::InvalidInput(message));
    }
    let mean_accuracy =
        per_word.iter().map(|p| p.accuracy).sum::<f64>() / per_word.len() as f64;
    Ok(WscSummary {
        mean_accuracy,
        words_evaluated: per_word.len(),
        per_word,
        words_skipped_single_sense: skipped_single_sense,
        words_skipped_oov: skipped_oov,
        words_skipped_knn: skipped_knn,
        params: *params,
    })
}
