//! Shared fixtures and independent oracles for the integration suites.
//!
//! Every oracle here is written from the definition, separately from the
//! library code it checks.

#![allow(dead_code)]

use std::collections::{HashMap, HashSet};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use polysense::cooccurrence::CoocMatrix;
use polysense::corpus::{build_vocabulary, tokenize, TokenStream, Vocabulary};
use polysense::embedding::EmbeddingMatrix;

/// Purely alphabetic word names: index 0 -> "waa", 1 -> "wab", ...
pub fn word_name(i: usize) -> String {
    let hi = (b'a' + (i / 26 % 26) as u8) as char;
    let lo = (b'a' + (i % 26) as u8) as char;
    format!("w{hi}{lo}")
}

/// Random token stream over `pool` with independent boundary flags.
pub fn random_stream(
    rng: &mut ChaCha8Rng,
    len: usize,
    pool: &[String],
    boundary_prob: f64,
) -> TokenStream {
    let tokens: Vec<String> = (0..len)
        .map(|_| pool[rng.gen_range(0..pool.len())].clone())
        .collect();
    let flags: Vec<bool> = (0..len).map(|_| rng.gen_bool(boundary_prob)).collect();
    TokenStream::from_tokens(tokens, flags).expect("valid synthetic tokens")
}

/// Brute-force co-occurrence oracle: enumerate every position pair.
pub fn brute_force_counts(
    stream: &TokenStream,
    vocab: &Vocabulary,
    radius: usize,
) -> HashMap<(usize, usize), u64> {
    let mut counts = HashMap::new();
    let tokens = stream.tokens();
    let n = tokens.len();
    for p in 0..n {
        'pair: for q in p + 1..n.min(p + radius + 1) {
            for gap in p..q {
                if stream.boundary_after(gap) {
                    continue 'pair;
                }
            }
            if let (Some(i), Some(j)) = (vocab.index_of(&tokens[p]), vocab.index_of(&tokens[q])) {
                let key = if i <= j { (i, j) } else { (j, i) };
                *counts.entry(key).or_insert(0) += 1;
            }
        }
    }
    counts
}

/// Rank-then-Pearson Spearman oracle with O(n^2) rank assignment.
pub fn spearman_oracle(pred: &[f64], gold: &[f64]) -> f64 {
    fn ranks(values: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; values.len()];
        for i in 0..values.len() {
            let mut less = 0usize;
            let mut equal = 0usize;
            for j in 0..values.len() {
                if values[j] < values[i] {
                    less += 1;
                } else if values[j] == values[i] {
                    equal += 1;
                }
            }
            out[i] = less as f64 + (equal as f64 + 1.0) / 2.0;
        }
        out
    }
    let (a, b) = (ranks(pred), ranks(gold));
    let n = a.len() as f64;
    let (ma, mb) = (a.iter().sum::<f64>() / n, b.iter().sum::<f64>() / n);
    let cov: f64 = a.iter().zip(&b).map(|(x, y)| (x - ma) * (y - mb)).sum();
    let va: f64 = a.iter().map(|x| (x - ma) * (x - ma)).sum();
    let vb: f64 = b.iter().map(|y| (y - mb) * (y - mb)).sum();
    cov / (va * vb).sqrt()
}

/// O(P*N) pair-counting AUC oracle with half credit for ties.
pub fn auc_oracle(scores: &[f64], labels: &[bool]) -> f64 {
    let mut wins = 0.0;
    let mut pairs = 0.0;
    for (i, &li) in labels.iter().enumerate() {
        if !li {
            continue;
        }
        for (j, &lj) in labels.iter().enumerate() {
            if lj {
                continue;
            }
            pairs += 1.0;
            if scores[i] > scores[j] {
                wins += 1.0;
            } else if scores[i] == scores[j] {
                wins += 0.5;
            }
        }
    }
    wins / pairs
}

/// Sort-and-scan average precision oracle (score desc, index asc).
pub fn ap_oracle(scores: &[f64], labels: &[bool]) -> f64 {
    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_by(|&a, &b| scores[b].total_cmp(&scores[a]).then(a.cmp(&b)));
    let mut hits = 0.0;
    let mut sum = 0.0;
    for (rank0, &i) in order.iter().enumerate() {
        if labels[i] {
            hits += 1.0;
            sum += hits / (rank0 + 1) as f64;
        }
    }
    sum / hits
}

/// Full-sort K-NN vote oracle with the same tie rules, written directly.
pub fn knn_oracle(train: &[(Vec<f64>, usize)], query: &[f64], k: usize) -> usize {
    let mut order: Vec<usize> = (0..train.len()).collect();
    let d2 = |v: &[f64]| -> f64 { v.iter().zip(query).map(|(a, b)| (a - b) * (a - b)).sum() };
    order.sort_by(|&a, &b| d2(&train[a].0).total_cmp(&d2(&train[b].0)).then(a.cmp(&b)));
    let top = &order[..k];
    let mut votes: HashMap<usize, usize> = HashMap::new();
    for &i in top {
        *votes.entry(train[i].1).or_insert(0) += 1;
    }
    let best = *votes.values().max().unwrap();
    for &i in top {
        if votes[&train[i].1] == best {
            return train[i].1;
        }
    }
    unreachable!()
}

/// Synthetic two-sense world: pseudoword `gavagai` occurs 500 times with
/// sense-A contexts and 500 times with sense-B contexts (disjoint word
/// pools); a third pool of words never co-occurs with it.
pub struct SenseWorld {
    pub corpus_text: String,
    pub vocab: Vocabulary,
    pub matrix: CoocMatrix,
    /// Random base vectors.
    pub embeddings: EmbeddingMatrix,
    /// Block-orthogonal base vectors: sense-A words span one block of
    /// coordinates, sense-B words a disjoint block.
    pub embeddings_ortho: EmbeddingMatrix,
    pub target: String,
    pub a_words: Vec<String>,
    pub b_words: Vec<String>,
    pub irrelevant_words: Vec<String>,
}

pub const SENSE_OCCURRENCES: usize = 500;
pub const SENSE_CONTEXT_LEN: usize = 5;

pub fn sample_words(rng: &mut ChaCha8Rng, pool: &[String], len: usize) -> Vec<String> {
    (0..len).map(|_| pool[rng.gen_range(0..pool.len())].clone()).collect()
}

pub fn build_sense_world(seed: u64) -> SenseWorld {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let target = "gavagai".to_string();
    let a_words: Vec<String> = (0..10).map(|i| format!("alpha{}", word_name(i))).collect();
    let b_words: Vec<String> = (0..10).map(|i| format!("beta{}", word_name(i))).collect();
    let irrelevant_words: Vec<String> = (0..20).map(|i| format!("noise{}", word_name(i))).collect();

    let mut sentences: Vec<String> = Vec::new();
    for i in 0..SENSE_OCCURRENCES * 2 {
        let pool = if i % 2 == 0 { &a_words } else { &b_words };
        let mut s = vec![target.clone()];
        s.extend(sample_words(&mut rng, pool, SENSE_CONTEXT_LEN));
        sentences.push(s.join(" "));
        // filler sentence of never-co-occurring words
        sentences.push(sample_words(&mut rng, &irrelevant_words, 6).join(" "));
    }
    let corpus_text = sentences.join(".\n") + ".\n";

    let stream = tokenize(&corpus_text);
    let vocab = build_vocabulary(&stream, 1, &HashSet::new()).expect("nonempty corpus");
    let raw = polysense::cooccurrence::count_cooccurrences(&stream, &vocab, SENSE_CONTEXT_LEN)
        .expect("radius >= 1");
    let matrix = polysense::cooccurrence::normalize(&raw, &vocab).expect("paired vocab");

    let dim = 16;
    let vectors: Vec<Vec<f64>> = (0..vocab.len())
        .map(|_| (0..dim).map(|_| rng.gen_range(-1.0..1.0)).collect())
        .collect();
    let embeddings = EmbeddingMatrix::from_vectors(&vocab, vectors).unwrap();

    let ortho_dim = 24;
    let block_of = |word: &str| -> usize {
        if word.starts_with("alpha") {
            0
        } else if word.starts_with("beta") {
            1
        } else {
            2
        }
    };
    let ortho: Vec<Vec<f64>> = vocab
        .words()
        .iter()
        .map(|word| {
            let mut v = vec![0.0; ortho_dim];
            let block = block_of(word);
            for x in v.iter_mut().skip(block * 8).take(8) {
                *x = rng.gen_range(0.1..1.0);
            }
            v
        })
        .collect();
    let embeddings_ortho = EmbeddingMatrix::from_vectors(&vocab, ortho).unwrap();

    SenseWorld {
        corpus_text,
        vocab,
        matrix,
        embeddings,
        embeddings_ortho,
        target,
        a_words,
        b_words,
        irrelevant_words,
    }
}

/// Mean of the base vectors of `words` under `c`.
pub fn centroid(c: &EmbeddingMatrix, vocab: &Vocabulary, words: &[String]) -> Vec<f64> {
    let mut acc = vec![0.0; c.dim()];
    for w in words {
        let i = vocab.index_of(w).expect("centroid word in vocab");
        for (a, x) in acc.iter_mut().zip(c.vector(i)) {
            *a += x;
        }
    }
    for a in &mut acc {
        *a /= words.len() as f64;
    }
    acc
}
