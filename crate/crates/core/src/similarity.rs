//! The alpha-blended similarity measure and exact nearest-word queries.
//!
//! `alpha_similarity` interpolates geometrically between cosine similarity
//! (alpha = 1) and the raw dot product (alpha = 0):
//!
//! ```text
//! d(x, y; alpha) = sign(s) * |c|^alpha * |s|^(1 - alpha)
//! ```
//!
//! with `s = x . y` and `c = s / (|x| |y|)`. Carrying the sign keeps the
//! measure defined for negative dot products and agreeing with the plain
//! geometric mean whenever `s > 0`. Zero vectors score 0 against everything.

use std::collections::HashSet;

use crate::embedding::EmbeddingMatrix;
use crate::error::{Error, Result};
use crate::metrics;

/// Blend parameter, validated to lie in `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Alpha(f64);

impl Alpha {
    /// Cosine similarity.
    pub const ONE: Alpha = Alpha(1.0);
    /// Dot product.
    pub const ZERO: Alpha = Alpha(0.0);

    pub fn new(value: f64) -> Result<Alpha> {
        if value.is_finite() && (0.0..=1.0).contains(&value) {
            Ok(Alpha(value))
        } else {
            Err(Error::InvalidInput(format!(
                "alpha must lie in [0, 1], got {value}"
            )))
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

impl std::fmt::Display for Alpha {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Core formula given a precomputed dot product and norms.
/// alpha = 1 returns the cosine exactly; alpha = 0 the dot product exactly.
fn blend(dot: f64, norm_x: f64, norm_y: f64, alpha: f64) -> f64 {
    if norm_x == 0.0 || norm_y == 0.0 {
        return 0.0;
    }
    if alpha == 1.0 {
        return dot / (norm_x * norm_y);
    }
    if alpha == 0.0 {
        return dot;
    }
    if dot == 0.0 {
        return 0.0;
    }
    let sign = if dot < 0.0 { -1.0 } else { 1.0 };
    let cos = dot / (norm_x * norm_y);
    sign * cos.abs().powf(alpha) * dot.abs().powf(1.0 - alpha)
}

/// Scores a vector pair under the alpha-blended measure.
pub fn alpha_similarity(x: &[f64], y: &[f64], alpha: Alpha) -> Result<f64> {
    if x.len() != y.len() {
        return Err(Error::DimensionMismatch {
            expected: x.len(),
            got: y.len(),
        });
    }
    if x.iter().chain(y).any(|v| v.is_nan()) {
        return Err(Error::InvalidInput("NaN in input vector".into()));
    }
    let mut dot = 0.0;
    let mut sx = 0.0;
    let mut sy = 0.0;
    for (a, b) in x.iter().zip(y) {
        dot += a * b;
        sx += a * a;
        sy += b * b;
    }
    Ok(blend(dot, sx.sqrt(), sy.sqrt(), alpha.value()))
}

/// Scores every non-excluded vocabulary word's base vector against `query`
/// and returns the top `min(k, remaining)` as `(word index, score)`,
/// descending, ties broken by ascending index.
///
/// A zero query is an error at alpha = 1 (its cosine is undefined); for
/// alpha < 1 every score is 0 and words come back in index order.
pub fn nearest_words(
    query: &[f64],
    c: &EmbeddingMatrix,
    alpha: Alpha,
    k: usize,
    exclude: &HashSet<usize>,
) -> Result<Vec<(usize, f64)>> {
    if k == 0 {
        return Err(Error::InvalidInput("k must be >= 1".into()));
    }
    if query.len() != c.dim() {
        return Err(Error::DimensionMismatch {
            expected: c.dim(),
            got: query.len(),
        });
    }
    if query.iter().any(|v| v.is_nan()) {
        return Err(Error::InvalidInput("NaN in query vector".into()));
    }
    let qnorm = crate::util::l2_norm(query);
    if qnorm == 0.0 && alpha.value() == 1.0 {
        return Err(Error::InvalidInput(
            "cosine of zero vector undefined".into(),
        ));
    }

    let mut scored: Vec<(usize, f64)> = Vec::with_capacity(c.len());
    for i in 0..c.len() {
        if exclude.contains(&i) {
            continue;
        }
        let score = if qnorm == 0.0 {
            0.0
        } else {
            let base = c.vector(i);
            let dot: f64 = query.iter().zip(base).map(|(a, b)| a * b).sum();
            blend(dot, qnorm, c.norm(i), alpha.value())
        };
        scored.push((i, score));
    }
    scored.sort_by(|a, b| b.1.total_cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
    scored.truncate(k);
    Ok(scored)
}

/// Scores each `(x, y, gold)` pair at every alpha and reports the Spearman
/// correlation against the gold scores, as `(alpha, spearman)` rows.
pub fn alpha_sweep(
    pairs: &[(Vec<f64>, Vec<f64>, f64)],
    alphas: &[Alpha],
) -> Result<Vec<(f64, f64)>> {
    if pairs.len() < 2 {
        return Err(Error::InvalidInput(format!(
            "alpha sweep needs at least 2 pairs, got {}",
            pairs.len()
        )));
    }
    let gold: Vec<f64> = pairs.iter().map(|p| p.2).collect();
    if gold.iter().all(|&g| g == gold[0]) {
        return Err(Error::UndefinedMetric("gold scores are constant".into()));
    }
    let mut out = Vec::with_capacity(alphas.len());
    for &alpha in alphas {
        let scores: Vec<f64> = pairs
            .iter()
            .map(|(x, y, _)| alpha_similarity(x, y, alpha))
            .collect::<Result<_>>()?;
        let sp = metrics::spearman(&scores, &gold)?;
        out.push((alpha.value(), sp));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{build_vocabulary, TokenStream};

    fn a(v: f64) -> Alpha {
        Alpha::new(v).unwrap()
    }

    #[test]
    fn endpoint_semantics() {
        let x = [1.0, 0.0];
        let y = [2.0, 0.0];
        assert_eq!(alpha_similarity(&x, &y, a(1.0)).unwrap(), 1.0);
        assert_eq!(alpha_similarity(&x, &y, a(0.0)).unwrap(), 2.0);
        let mid = alpha_similarity(&x, &y, a(0.5)).unwrap();
        assert!((mid - 2f64.sqrt()).abs() <= 1e-12);
    }

    #[test]
    fn sign_carries_through_fractional_alpha() {
        let x = [1.0, 0.0];
        let y = [-2.0, 0.0];
        let got = alpha_similarity(&x, &y, a(0.5)).unwrap();
        assert!((got + 2f64.sqrt()).abs() <= 1e-12, "{got}");
    }

    #[test]
    fn zero_vector_scores_zero_for_any_alpha() {
        let x = [1.0, 2.0];
        let z = [0.0, 0.0];
        for alpha in [0.0, 0.3, 1.0] {
            assert_eq!(alpha_similarity(&x, &z, a(alpha)).unwrap(), 0.0);
            assert_eq!(alpha_similarity(&z, &x, a(alpha)).unwrap(), 0.0);
        }
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(alpha_similarity(&[1.0], &[1.0, 2.0], a(1.0)).is_err());
        assert!(alpha_similarity(&[f64::NAN], &[1.0], a(1.0)).is_err());
        assert!(Alpha::new(1.5).is_err());
        assert!(Alpha::new(-0.1).is_err());
        assert!(Alpha::new(f64::NAN).is_err());
    }

    #[test]
    fn symmetry() {
        let x = [0.3, -1.2, 0.7];
        let y = [-0.5, 0.9, 2.0];
        for alpha in [0.0, 0.25, 0.5, 0.9, 1.0] {
            let ab = alpha_similarity(&x, &y, a(alpha)).unwrap();
            let ba = alpha_similarity(&y, &x, a(alpha)).unwrap();
            assert_eq!(ab, ba);
        }
    }

    #[test]
    fn log_linear_in_alpha_for_positive_dot() {
        let x = [1.0, 0.5];
        let y = [0.8, 0.4];
        let s: f64 = x.iter().zip(&y).map(|(a, b)| a * b).sum();
        let c = s / (crate::util::l2_norm(&x) * crate::util::l2_norm(&y));
        for alpha in [0.1, 0.4, 0.75] {
            let d = alpha_similarity(&x, &y, a(alpha)).unwrap();
            let expected = (alpha * c.ln() + (1.0 - alpha) * s.ln()).exp();
            assert!((d - expected).abs() <= 1e-12 * expected.abs().max(1.0));
        }
    }

    fn random_matrix(words: usize, dim: usize, seed: u64) -> (crate::corpus::Vocabulary, EmbeddingMatrix) {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let tokens: Vec<String> = (0..words)
            .map(|i| {
                let a = (b'a' + (i / 26) as u8) as char;
                let b = (b'a' + (i % 26) as u8) as char;
                format!("w{a}{b}")
            })
            .collect();
        let stream = TokenStream::from_tokens(tokens, vec![false; words]).unwrap();
        let vocab = build_vocabulary(&stream, 1, &std::collections::HashSet::new()).unwrap();
        let vectors: Vec<Vec<f64>> = (0..words)
            .map(|_| (0..dim).map(|_| rng.gen_range(-1.0..1.0)).collect())
            .collect();
        let c = EmbeddingMatrix::from_vectors(&vocab, vectors).unwrap();
        (vocab, c)
    }

    #[test]
    fn self_query_ranks_first_at_cosine() {
        let (vocab, c) = random_matrix(50, 8, 5);
        let w = vocab.index_of(vocab.token(17)).unwrap();
        let top = nearest_words(c.vector(w), &c, Alpha::ONE, 3, &HashSet::new()).unwrap();
        assert_eq!(top[0].0, w);
        assert!((top[0].1 - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn top_k_matches_full_sort_oracle() {
        let (_, c) = random_matrix(50, 8, 6);
        let query: Vec<f64> = c.vector(3).to_vec();
        for alpha in [0.0, 0.5, 0.75, 0.9, 1.0] {
            // oracle: score everything independently, full sort, take 10
            let mut oracle: Vec<(usize, f64)> = (0..c.len())
                .map(|i| {
                    let y = c.vector(i);
                    let dot: f64 = query.iter().zip(y).map(|(a, b)| a * b).sum();
                    let nx = crate::util::l2_norm(&query);
                    let ny = crate::util::l2_norm(y);
                    let score = if nx == 0.0 || ny == 0.0 {
                        0.0
                    } else if alpha == 1.0 {
                        dot / (nx * ny)
                    } else if alpha == 0.0 {
                        dot
                    } else if dot == 0.0 {
                        0.0
                    } else {
                        dot.signum()
                            * (dot / (nx * ny)).abs().powf(alpha)
                            * dot.abs().powf(1.0 - alpha)
                    };
                    (i, score)
                })
                .collect();
            oracle.sort_by(|p, q| q.1.total_cmp(&p.1).then_with(|| p.0.cmp(&q.0)));
            oracle.truncate(10);
            let got = nearest_words(&query, &c, a(alpha), 10, &HashSet::new()).unwrap();
            let got_ids: Vec<usize> = got.iter().map(|&(i, _)| i).collect();
            let want_ids: Vec<usize> = oracle.iter().map(|&(i, _)| i).collect();
            assert_eq!(got_ids, want_ids, "alpha={alpha}");
        }
    }

    #[test]
    fn cosine_ranking_is_scale_invariant() {
        let (_, c) = random_matrix(40, 6, 9);
        let query: Vec<f64> = c.vector(11).iter().map(|x| x + 0.01).collect();
        let scaled: Vec<f64> = query.iter().map(|x| 3.7 * x).collect();
        let base = nearest_words(&query, &c, Alpha::ONE, 40, &HashSet::new()).unwrap();
        let resc = nearest_words(&scaled, &c, Alpha::ONE, 40, &HashSet::new()).unwrap();
        let ids = |v: &[(usize, f64)]| v.iter().map(|&(i, _)| i).collect::<Vec<_>>();
        assert_eq!(ids(&base), ids(&resc));
    }

    #[test]
    fn zero_query_rules() {
        let (_, c) = random_matrix(10, 4, 2);
        let zero = vec![0.0; 4];
        assert!(nearest_words(&zero, &c, Alpha::ONE, 3, &HashSet::new()).is_err());
        let got = nearest_words(&zero, &c, a(0.5), 3, &HashSet::new()).unwrap();
        assert_eq!(got.len(), 3);
        assert!(got.iter().all(|&(_, s)| s == 0.0));
        // all-tied scores come back in index order
        assert_eq!(got.iter().map(|&(i, _)| i).collect::<Vec<_>>(), vec![0, 1, 2]);
    }

    #[test]
    fn exclusion_is_honored() {
        let (_, c) = random_matrix(10, 4, 3);
        let exclude: HashSet<usize> = [4].into_iter().collect();
        let got = nearest_words(c.vector(4), &c, Alpha::ONE, 10, &exclude).unwrap();
        assert!(got.iter().all(|&(i, _)| i != 4));
        assert_eq!(got.len(), 9);
    }

    #[test]
    fn sweep_finds_perfect_alignment() {
        // gold equals the dot product ordering
        let pairs: Vec<(Vec<f64>, Vec<f64>, f64)> = (1..=5)
            .map(|i| {
                let x = vec![i as f64, 0.0];
                let y = vec![1.0, 0.0];
                (x, y, i as f64)
            })
            .collect();
        let got = alpha_sweep(&pairs, &[Alpha::ZERO]).unwrap();
        assert_eq!(got.len(), 1);
        assert!((got[0].1 - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn sweep_rejects_degenerate_inputs() {
        let pairs = vec![
            (vec![1.0], vec![1.0], 1.0),
            (vec![2.0], vec![1.0], 1.0),
        ];
        assert!(alpha_sweep(&pairs, &[Alpha::ONE]).is_err());
        let one = vec![(vec![1.0], vec![1.0], 1.0)];
        assert!(alpha_sweep(&one, &[Alpha::ONE]).is_err());
        // constant predicted scores: cosine of collinear vectors
        let collinear: Vec<(Vec<f64>, Vec<f64>, f64)> = (1..=4)
            .map(|i| (vec![i as f64], vec![1.0], i as f64))
            .collect();
        let err = alpha_sweep(&collinear, &[Alpha::ONE]).unwrap_err();
        assert!(matches!(err, Error::UndefinedMetric(_)));
    }

    #[test]
    fn sweep_matches_independent_recomputation() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(21);
        let pairs: Vec<(Vec<f64>, Vec<f64>, f64)> = (0..20)
            .map(|_| {
                let x: Vec<f64> = (0..4).map(|_| rng.gen_range(-1.0..1.0)).collect();
                let y: Vec<f64> = (0..4).map(|_| rng.gen_range(-1.0..1.0)).collect();
                let g: f64 = rng.gen_range(0.0..10.0);
                (x, y, g)
            })
            .collect();
        let got = alpha_sweep(&pairs, &[Alpha::ZERO, Alpha::ONE]).unwrap();
        let gold: Vec<f64> = pairs.iter().map(|p| p.2).collect();
        for (alpha, sp) in got {
            let scores: Vec<f64> = pairs
                .iter()
                .map(|(x, y, _)| alpha_similarity(x, y, a(alpha)).unwrap())
                .collect();
            let oracle = crate::metrics::spearman(&scores, &gold).unwrap();
            assert_eq!(sp, oracle);
        }
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn finite_vec(len: usize) -> impl Strategy<Value = Vec<f64>> {
            proptest::collection::vec(-10.0f64..10.0, len)
        }

        proptest! {
            #[test]
            fn similarity_is_symmetric(
                x in finite_vec(5),
                y in finite_vec(5),
                alpha in 0.0f64..=1.0,
            ) {
                let ab = alpha_similarity(&x, &y, a(alpha)).unwrap();
                let ba = alpha_similarity(&y, &x, a(alpha)).unwrap();
                prop_assert_eq!(ab, ba);
            }

            // alpha = 1 is invariant under positive rescaling of either side;
            // alpha = 0 scales linearly in each side's positive scale factor
            #[test]
            fn endpoint_scaling_laws(
                x in finite_vec(4),
                y in finite_vec(4),
                scale in 0.5f64..8.0,
            ) {
                let sx: Vec<f64> = x.iter().map(|v| v * scale).collect();
                let cos = alpha_similarity(&x, &y, Alpha::ONE).unwrap();
                let cos_scaled = alpha_similarity(&sx, &y, Alpha::ONE).unwrap();
                prop_assert!((cos - cos_scaled).abs() <= 1e-9 * cos.abs().max(1.0));
                let dot = alpha_similarity(&x, &y, Alpha::ZERO).unwrap();
                let dot_scaled = alpha_similarity(&sx, &y, Alpha::ZERO).unwrap();
                prop_assert!((dot * scale - dot_scaled).abs() <= 1e-9 * dot.abs().max(1.0) * scale);
            }
        }
    }
}
