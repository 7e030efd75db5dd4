//! Ranking and classification metrics: Spearman correlation, Precision@1,
//! ROC-AUC, Average Precision, and a K-NN majority-vote classifier.
//!
//! Tie policies are pinned so that heavily tied score lists (a normal outcome
//! of norm filtering, where many candidates score exactly 0) evaluate
//! deterministically: Precision@1 counts a tied top as a miss, ROC-AUC grants
//! half credit to tied positive/negative pairs, and Average Precision breaks
//! score ties by original index.

use std::collections::HashMap;
use std::hash::Hash;

use crate::error::{Error, Result};

/// Parallel scores and binary labels for one ranking problem.
#[derive(Debug, Clone)]
pub struct ScoredLabels {
    scores: Vec<f64>,
    labels: Vec<bool>,
}

impl ScoredLabels {
    /// Scores must be finite and match the label list in length (>= 1).
    pub fn new(scores: Vec<f64>, labels: Vec<bool>) -> Result<ScoredLabels> {
        if scores.len() != labels.len() {
            return Err(Error::DimensionMismatch {
                expected: labels.len(),
                got: scores.len(),
            });
        }
        if scores.is_empty() {
            return Err(Error::InvalidInput("empty score list".into()));
        }
        if scores.iter().any(|s| !s.is_finite()) {
            return Err(Error::InvalidInput("non-finite score".into()));
        }
        Ok(ScoredLabels { scores, labels })
    }

    pub fn len(&self) -> usize {
        self.scores.len()
    }

    pub fn is_empty(&self) -> bool {
        self.scores.is_empty()
    }

    pub fn scores(&self) -> &[f64] {
        &self.scores
    }

    pub fn labels(&self) -> &[bool] {
        &self.labels
    }

    pub fn positives(&self) -> usize {
        self.labels.iter().filter(|&&l| l).count()
    }
}

/// Fractional (average) ranks, 1-based; tied values share the mean of their
/// rank positions.
fn average_ranks(values: &[f64]) -> Vec<f64> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    let mut ranks = vec![0.0; values.len()];
    let mut i = 0;
    while i < order.len() {
        let mut j = i;
        while j + 1 < order.len() && values[order[j + 1]] == values[order[i]] {
            j += 1;
        }
        // positions i..=j are tied; mean 1-based rank
        let mean = (i + j) as f64 / 2.0 + 1.0;
        for &idx in &order[i..=j] {
            ranks[idx] = mean;
        }
        i = j + 1;
    }
    ranks
}

/// Spearman rank correlation: Pearson correlation of fractional ranks.
/// Both lists must have equal length >= 2 and be non-constant.
pub fn spearman(pred: &[f64], gold: &[f64]) -> Result<f64> {
    if pred.len() != gold.len() {
        return Err(Error::DimensionMismatch {
            expected: gold.len(),
            got: pred.len(),
        });
    }
    if pred.len() < 2 {
        return Err(Error::InvalidInput(
            "spearman needs at least 2 observations".into(),
        ));
    }
    if pred.iter().chain(gold).any(|v| !v.is_finite()) {
        return Err(Error::InvalidInput("non-finite value".into()));
    }
    if pred.iter().all(|&v| v == pred[0]) {
        return Err(Error::UndefinedMetric(
            "undefined correlation: predicted list is constant".into(),
        ));
    }
    if gold.iter().all(|&v| v == gold[0]) {
        return Err(Error::UndefinedMetric(
            "undefined correlation: gold list is constant".into(),
        ));
    }
    let rp = average_ranks(pred);
    let rg = average_ranks(gold);
    let n = rp.len() as f64;
    let mp = rp.iter().sum::<f64>() / n;
    let mg = rg.iter().sum::<f64>() / n;
    let mut cov = 0.0;
    let mut vp = 0.0;
    let mut vg = 0.0;
    for (a, b) in rp.iter().zip(&rg) {
        let da = a - mp;
        let db = b - mg;
        cov += da * db;
        vp += da * da;
        vg += db * db;
    }
    Ok(cov / (vp * vg).sqrt())
}

/// Fraction of tests whose single positive strictly outscores every
/// negative. Ties at the top count as misses.
pub fn precision_at_1(tests: &[ScoredLabels]) -> Result<f64> {
    if tests.is_empty() {
        return Err(Error::InvalidInput("no tests".into()));
    }
    let mut hits = 0usize;
    for (t, test) in tests.iter().enumerate() {
        let positives = test.positives();
        if positives != 1 {
            return Err(Error::InvalidInput(format!(
                "test {t}: expected exactly one positive label, found {positives}"
            )));
        }
        let pos_score = test
            .scores
            .iter()
            .zip(&test.labels)
            .find(|(_, &l)| l)
            .map(|(&s, _)| s)
            .expect("one positive present");
        let top_negative = test
            .scores
            .iter()
            .zip(&test.labels)
            .filter(|(_, &l)| !l)
            .map(|(&s, _)| s)
            .fold(f64::NEG_INFINITY, f64::max);
        if pos_score > top_negative {
            hits += 1;
        }
    }
    Ok(hits as f64 / tests.len() as f64)
}

/// ROC-AUC by the rank-sum formulation: the probability that a random
/// positive outscores a random negative, with half credit for ties.
pub fn roc_auc(data: &ScoredLabels) -> Result<f64> {
    let p = data.positives();
    let n = data.len() - p;
    if p == 0 || n == 0 {
        return Err(Error::UndefinedMetric(
            "ROC AUC needs at least one positive and one negative".into(),
        ));
    }
    let ranks = average_ranks(&data.scores);
    let rank_sum: f64 = ranks
        .iter()
        .zip(&data.labels)
        .filter(|(_, &l)| l)
        .map(|(&r, _)| r)
        .sum();
    let p = p as f64;
    let n = n as f64;
    Ok((rank_sum - p * (p + 1.0) / 2.0) / (p * n))
}

/// Mean of precision values at the rank of each positive, scanning in
/// descending score order with ties broken by original index.
pub fn average_precision(data: &ScoredLabels) -> Result<f64> {
    let positives = data.positives();
    if positives == 0 {
        return Err(Error::UndefinedMetric(
            "average precision needs at least one positive".into(),
        ));
    }
    let mut order: Vec<usize> = (0..data.len()).collect();
    order.sort_by(|&a, &b| data.scores[b].total_cmp(&data.scores[a]).then(a.cmp(&b)));
    let mut hits = 0usize;
    let mut sum = 0.0;
    for (rank0, &idx) in order.iter().enumerate() {
        if data.labels[idx] {
            hits += 1;
            sum += hits as f64 / (rank0 + 1) as f64;
        }
    }
    Ok(sum / positives as f64)
}

/// Majority class among the `k` training examples nearest to `query` under
/// Euclidean distance. Distance ties break by training index; vote ties go
/// to the class of the nearest member among the tied classes.
pub fn knn_classify<L>(train: &[(Vec<f64>, L)], query: &[f64], k: usize) -> Result<L>
where
    L: Clone + Eq + Hash,
{
    if train.is_empty() {
        return Err(Error::InvalidInput("empty training set".into()));
    }
    if k == 0 || k > train.len() {
        return Err(Error::InvalidInput(format!(
            "K must satisfy 1 <= K <= {}, got {k}",
            train.len()
        )));
    }
    let mut dists: Vec<(f64, usize)> = Vec::with_capacity(train.len());
    for (idx, (v, _)) in train.iter().enumerate() {
        if v.len() != query.len() {
            return Err(Error::DimensionMismatch {
                expected: query.len(),
                got: v.len(),
            });
        }
        let d2: f64 = v.iter().zip(query).map(|(a, b)| (a - b) * (a - b)).sum();
        dists.push((d2, idx));
    }
    dists.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
    let neighbors = &dists[..k];

    let mut votes: HashMap<&L, usize> = HashMap::new();
    for &(_, idx) in neighbors {
        *votes.entry(&train[idx].1).or_insert(0) += 1;
    }
    let best = votes.values().copied().max().expect("k >= 1");
    // first neighbor whose class holds the best vote count wins vote ties
    for &(_, idx) in neighbors {
        if votes[&train[idx].1] == best {
            return Ok(train[idx].1.clone());
        }
    }
    unreachable!("some neighbor holds the winning class")
}
