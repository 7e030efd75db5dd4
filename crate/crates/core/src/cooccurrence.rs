//! Sparse symmetric co-occurrence statistics.
//!
//! Counting slides a window of `window_radius` tokens over each boundary-free
//! segment of the stream; every unordered in-vocabulary pair within the
//! window counts one event, including a word type with itself.
//! Out-of-vocabulary tokens keep their positions, so they widen gaps instead
//! of shrinking them. Normalization divides each pair count by the product of
//! the two words' corpus frequencies.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::corpus::{TokenStream, Vocabulary};
use crate::error::{Error, Result};

/// Raw window co-occurrence events keyed by canonical `(i, j)` with `i <= j`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RawCoocCounts {
    counts: HashMap<(usize, usize), u64>,
    window_radius: usize,
}

impl RawCoocCounts {
    pub fn window_radius(&self) -> usize {
        self.window_radius
    }

    /// Number of stored (canonical) pairs.
    pub fn len(&self) -> usize {
        self.counts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    /// Count for an unordered pair; 0 if absent.
    pub fn get(&self, i: usize, j: usize) -> u64 {
        let key = if i <= j { (i, j) } else { (j, i) };
        self.counts.get(&key).copied().unwrap_or(0)
    }

    /// Canonical entries sorted by `(i, j)`.
    pub fn sorted_entries(&self) -> Vec<((usize, usize), u64)> {
        let mut v: Vec<_> = self.counts.iter().map(|(&k, &c)| (k, c)).collect();
        v.sort_unstable_by_key(|&(k, _)| k);
        v
    }
}

/// Counts co-occurrences over the whole stream with a single shard.
pub fn count_cooccurrences(
    stream: &TokenStream,
    vocab: &Vocabulary,
    window_radius: usize,
) -> Result<RawCoocCounts> {
    count_cooccurrences_sharded(stream, vocab, window_radius, 1)
}

/// Sharded counting: the stream is split into chunks, each chunk counts the
/// pairs whose *left* position falls inside it (scanning right across the
/// chunk edge), and the integer maps are merged. The merge is commutative,
/// so the result is identical for every thread count.
pub fn count_cooccurrences_sharded(
    stream: &TokenStream,
    vocab: &Vocabulary,
    window_radius: usize,
    threads: usize,
) -> Result<RawCoocCounts> {
    if window_radius == 0 {
        return Err(Error::InvalidInput("window_radius must be >= 1".into()));
    }
    if threads == 0 {
        return Err(Error::InvalidInput("threads must be >= 1".into()));
    }

    let ids: Vec<Option<usize>> = stream
        .tokens()
        .iter()
        .map(|t| vocab.index_of(t))
        .collect();
    let n = ids.len();

    let count_range = |lo: usize, hi: usize| -> HashMap<(usize, usize), u64> {
        let mut map: HashMap<(usize, usize), u64> = HashMap::new();
        for p in lo..hi {
            let q_max = (p + window_radius).min(n.saturating_sub(1));
            for q in p + 1..=q_max {
                if stream.boundary_after(q - 1) {
                    break;
                }
                if let (Some(i), Some(j)) = (ids[p], ids[q]) {
                    let key = if i <= j { (i, j) } else { (j, i) };
                    *map.entry(key).or_insert(0) += 1;
                }
            }
        }
        map
    };

    let counts = if threads == 1 || n < 2 * threads {
        count_range(0, n)
    } else {
        let chunk = n.div_ceil(threads);
        let mut maps = std::thread::scope(|scope| {
            let handles: Vec<_> = (0..threads)
                .map(|t| {
                    let lo = t * chunk;
                    let hi = ((t + 1) * chunk).min(n);
                    let f = &count_range;
                    scope.spawn(move || f(lo, hi))
                })
                .collect();
            handles
                .into_iter()
                .map(|h| h.join().expect("count shard panicked"))
                .collect::<Vec<_>>()
        });
        let mut merged = maps.pop().unwrap_or_default();
        for map in maps {
            for (key, c) in map {
                *merged.entry(key).or_insert(0) += c;
            }
        }
        merged
    };

    Ok(RawCoocCounts {
        counts,
        window_radius,
    })
}

/// The normalized co-occurrence matrix: `W[i][j] = count(i,j) / (freq_i * freq_j)`.
///
/// Stored as a full symmetric adjacency (each canonical entry appears in both
/// rows) with partners sorted ascending; `nnz` counts canonical entries only.
/// Immutable after construction and safe to share across threads.
#[derive(Debug, Clone)]
pub struct CoocMatrix {
    size: usize,
    nnz: usize,
    window_radius: usize,
    rows: Vec<Vec<(usize, f64)>>,
    vocab_fingerprint: u64,
    corpus_id: String,
}

impl CoocMatrix {
    /// Builds a matrix from canonical or uncanonical `(i, j, value)` entries.
    /// Values must be finite and positive; duplicate pairs are rejected.
    pub fn from_entries(
        vocab: &Vocabulary,
        window_radius: usize,
        entries: impl IntoIterator<Item = (usize, usize, f64)>,
    ) -> Result<CoocMatrix> {
        let size = vocab.len();
        let mut rows: Vec<Vec<(usize, f64)>> = vec![Vec::new(); size];
        let mut nnz = 0;
        let mut seen: HashMap<(usize, usize), ()> = HashMap::new();
        for (a, b, value) in entries {
            let (i, j) = if a <= b { (a, b) } else { (b, a) };
            if j >= size {
                return Err(Error::IndexOutOfRange { index: j, size });
            }
            if !(value.is_finite() && value > 0.0) {
                return Err(Error::InvalidInput(format!(
                    "co-occurrence value for ({i}, {j}) must be finite and > 0, got {value}"
                )));
            }
            if seen.insert((i, j), ()).is_some() {
                return Err(Error::InvalidInput(format!("duplicate entry ({i}, {j})")));
            }
            rows[i].push((j, value));
            if i != j {
                rows[j].push((i, value));
            }
            nnz += 1;
        }
        for row in &mut rows {
            row.sort_unstable_by_key(|&(j, _)| j);
        }
        Ok(CoocMatrix {
            size,
            nnz,
            window_radius,
            rows,
            vocab_fingerprint: vocab.fingerprint(),
            corpus_id: String::new(),
        })
    }

    pub fn size(&self) -> usize {
        self.size
    }

    /// Number of stored canonical entries.
    pub fn nnz(&self) -> usize {
        self.nnz
    }

    pub fn window_radius(&self) -> usize {
        self.window_radius
    }

    /// Fingerprint of the vocabulary this matrix was built over.
    pub fn vocab_fingerprint(&self) -> u64 {
        self.vocab_fingerprint
    }

    pub fn corpus_id(&self) -> &str {
        &self.corpus_id
    }

    pub fn set_corpus_id(&mut self, id: impl Into<String>) {
        self.corpus_id = id.into();
    }

    /// All nonzero entries of row `i` as `(partner, value)` pairs sorted by
    /// partner index; absent partners are zero.
    pub fn row(&self, i: usize) -> Result<&[(usize, f64)]> {
        self.rows.get(i).map(|r| r.as_slice()).ok_or(Error::IndexOutOfRange {
            index: i,
            size: self.size,
        })
    }

    /// Single-element lookup; 0.0 for absent pairs.
    pub fn get(&self, i: usize, j: usize) -> Result<f64> {
        if j >= self.size {
            return Err(Error::IndexOutOfRange {
                index: j,
                size: self.size,
            });
        }
        let row = self.row(i)?;
        Ok(match row.binary_search_by_key(&j, |&(p, _)| p) {
            Ok(pos) => row[pos].1,
            Err(_) => 0.0,
        })
    }

    /// Canonical entries `(i, j, value)` with `i <= j`, ascending.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        self.rows.iter().enumerate().flat_map(|(i, row)| {
            row.iter()
                .filter(move |&&(j, _)| j >= i)
                .map(move |&(j, v)| (i, j, v))
        })
    }

    /// Writes the `COOCv1` text format. Values print with full round-trip
    /// precision so save/load is bit-exact.
    pub fn save(&self, path: &Path) -> Result<()> {
        let mut out = String::new();
        writeln!(out, "COOCv1\t{}\t{}\t{}", self.size, self.nnz, self.window_radius).unwrap();
        for (i, j, v) in self.entries() {
            writeln!(out, "{i}\t{j}\t{v}").unwrap();
        }
        fs::write(path, out).map_err(|e| Error::io(path, e))
    }

    /// Loads a `COOCv1` file paired with the vocabulary it references.
    /// Validates the header, monotone `(i, j)` ordering, `i <= j`, positive
    /// values, and the entry count.
    pub fn load(path: &Path, vocab: &Vocabulary) -> Result<CoocMatrix> {
        let name = path.display().to_string();
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let mut lines = text.lines().enumerate();

        let (_, header) = lines
            .next()
            .ok_or_else(|| Error::parse(&name, 1, "empty file, expected COOCv1 header"))?;
        let fields: Vec<&str> = header.split('\t').collect();
        if fields.len() != 4 || fields[0] != "COOCv1" {
            return Err(Error::parse(&name, 1, "header must be COOCv1\\t<V>\\t<nnz>\\t<window_radius>"));
        }
        let size: usize = fields[1]
            .parse()
            .map_err(|_| Error::parse(&name, 1, format!("invalid V '{}'", fields[1])))?;
        let nnz: usize = fields[2]
            .parse()
            .map_err(|_| Error::parse(&name, 1, format!("invalid nnz '{}'", fields[2])))?;
        let window_radius: usize = fields[3]
            .parse()
            .map_err(|_| Error::parse(&name, 1, format!("invalid window radius '{}'", fields[3])))?;
        if window_radius == 0 {
            return Err(Error::parse(&name, 1, "window radius must be >= 1"));
        }
        if size != vocab.len() {
            return Err(Error::parse(
                &name,
                1,
                format!("header V={} does not match paired vocabulary size {}", size, vocab.len()),
            ));
        }

        let mut entries: Vec<(usize, usize, f64)> = Vec::with_capacity(nnz);
        let mut prev: Option<(usize, usize)> = None;
        for (idx, line) in lines {
            let lineno = idx + 1;
            let fields: Vec<&str> = line.split('\t').collect();
            if fields.len() != 3 {
                return Err(Error::parse(&name, lineno, "expected 3 tab-separated fields: i, j, value"));
            }
            let i: usize = fields[0]
                .parse()
                .map_err(|_| Error::parse(&name, lineno, format!("invalid index '{}'", fields[0])))?;
            let j: usize = fields[1]
                .parse()
                .map_err(|_| Error::parse(&name, lineno, format!("invalid index '{}'", fields[1])))?;
            let value: f64 = fields[2]
                .parse()
                .map_err(|_| Error::parse(&name, lineno, format!("invalid value '{}'", fields[2])))?;
            if i > j {
                return Err(Error::parse(&name, lineno, format!("entries must satisfy i <= j, got ({i}, {j})")));
            }
            if j >= size {
                return Err(Error::parse(&name, lineno, format!("index {j} out of range for V={size}")));
            }
            if !(value.is_finite() && value > 0.0) {
                return Err(Error::parse(&name, lineno, format!("value must be finite and > 0, got {value}")));
            }
            if let Some(p) = prev {
                if (i, j) <= p {
                    return Err(Error::parse(&name, lineno, "entries must be in strictly increasing (i, j) order"));
                }
            }
            prev = Some((i, j));
            entries.push((i, j, value));
        }
        if entries.len() != nnz {
            return Err(Error::parse(
                &name,
                1,
                format!("header declares nnz={}, found {} entries", nnz, entries.len()),
            ));
        }
        let mut matrix = CoocMatrix::from_entries(vocab, window_radius, entries)?;
        matrix.corpus_id = name;
        Ok(matrix)
    }

    /// Re-indexes the matrix onto a restricted vocabulary. `old_to_new[i]`
    /// gives the new index of old word `i`, or `None` if dropped. Values are
    /// copied unchanged: the normalization denominators are the original
    /// corpus frequencies, which the restricted vocabulary retains.
    pub fn restrict(&self, old_to_new: &[Option<usize>], new_vocab: &Vocabulary) -> Result<CoocMatrix> {
        if old_to_new.len() != self.size {
            return Err(Error::VocabularyMismatch(format!(
                "index map covers {} words, matrix has {}",
                old_to_new.len(),
                self.size
            )));
        }
        let kept = self.entries().filter_map(|(i, j, v)| {
            match (old_to_new[i], old_to_new[j]) {
                (Some(a), Some(b)) => Some((a, b, v)),
                _ => None,
            }
        });
        let mut out = CoocMatrix::from_entries(new_vocab, self.window_radius, kept)?;
        out.corpus_id = self.corpus_id.clone();
        Ok(out)
    }
}

/// Divides each raw count by the product of the two words' frequencies.
/// A referenced word missing from the vocabulary or carrying zero frequency
/// means the counts and vocabulary were not built together.
pub fn normalize(raw: &RawCoocCounts, vocab: &Vocabulary) -> Result<CoocMatrix> {
    let size = vocab.len();
    let mut entries = Vec::with_capacity(raw.len());
    for ((i, j), count) in raw.sorted_entries() {
        if j >= size {
            return Err(Error::VocabularyMismatch(format!(
                "co-occurrence pair ({i}, {j}) references a word outside the vocabulary (V={size})"
            )));
        }
        let (fi, fj) = (vocab.freq(i), vocab.freq(j));
        if fi == 0 || fj == 0 {
            return Err(Error::VocabularyMismatch(format!(
                "zero frequency for word index {} referenced by the counts",
                if fi == 0 { i } else { j }
            )));
        }
        entries.push((i, j, count as f64 / (fi as f64 * fj as f64)));
    }
    CoocMatrix::from_entries(vocab, raw.window_radius(), entries)
}
