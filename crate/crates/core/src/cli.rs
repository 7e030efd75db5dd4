//! Command-line interface: build artifacts, query embeddings, run evaluations.
//!
//! One binary, six subcommands: `build`, `neighbors`, `phrase`, `top-norm`,
//! `eval`, `alpha-sweep`. Every command is a pure function of its flags and
//! input files; tables print with 4 decimal places, report files carry full
//! precision. Exit codes: 0 success, 1 usage error, 2 data/format error,
//! 3 internal invariant violation.

use std::collections::{HashMap, HashSet};
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::cooccurrence::{count_cooccurrences_sharded, normalize, CoocMatrix};
use crate::corpus::{
    build_vocabulary, default_stopwords, load_stopwords, tokenize_bytes, Vocabulary,
};
use crate::embedding::{
    contextual_embedding, load_embeddings, phrase_embedding, top_norm_words, Context,
    EmbeddingMatrix,
};
use crate::error::Error;
use crate::eval::{
    eval_cws, eval_scws, eval_wcr, eval_wsc, load_cws, load_scws, load_wcr, load_wsc, WscParams,
};
use crate::similarity::{alpha_sweep, nearest_words, Alpha};
use crate::util::l2_norm;

const EXIT_USAGE: i32 = 1;
const EXIT_DATA: i32 = 2;
const EXIT_INTERNAL: i32 = 3;

enum CliError {
    Usage(String),
    Lib(Error),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Lib(e)
    }
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::VocabularyMismatch(_) | Error::IndexOutOfRange { .. } => EXIT_INTERNAL,
        _ => EXIT_DATA,
    }
}

#[derive(Parser)]
#[command(
    name = "polysense",
    version,
    about = "Contextual word embeddings from co-occurrence statistics"
)]
struct Cli {
    /// Flat key=value file supplying defaults for any long flag.
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build vocabulary and co-occurrence artifacts from a corpus.
    Build(BuildArgs),
    /// Show the nearest words to a contextual embedding.
    Neighbors(NeighborsArgs),
    /// Embed a phrase and show its nearest words (phrase words excluded).
    Phrase(PhraseArgs),
    /// Rank vocabulary words by contextual-embedding norm under a context.
    TopNorm(TopNormArgs),
    /// Run a task evaluation over a dataset and write a report.
    Eval(EvalArgs),
    /// Sweep the similarity blend parameter over a scored pair dataset.
    AlphaSweep(AlphaSweepArgs),
}

#[derive(Args)]
struct BuildArgs {
    /// Corpus text file to ingest.
    #[arg(long)]
    corpus: Option<PathBuf>,
    /// Output vocabulary file (VOCABv1).
    #[arg(long)]
    vocab: Option<PathBuf>,
    /// Output co-occurrence file (COOCv1).
    #[arg(long)]
    cooc: Option<PathBuf>,
    /// Minimum occurrence count for vocabulary words [default: 2000].
    #[arg(long = "min-count")]
    min_count: Option<u64>,
    /// Stopword file, one word per line (bundled list when omitted).
    #[arg(long)]
    stopwords: Option<PathBuf>,
    /// Co-occurrence window radius in tokens [default: 5].
    #[arg(long)]
    window: Option<usize>,
    /// Worker threads for counting [default: 1].
    #[arg(long)]
    threads: Option<usize>,
}

#[derive(Args)]
struct NeighborsArgs {
    /// Target word.
    word: String,
    /// Context words.
    context: Vec<String>,
    #[arg(long)]
    vocab: Option<PathBuf>,
    #[arg(long)]
    cooc: Option<PathBuf>,
    #[arg(long)]
    embeddings: Option<PathBuf>,
    /// Similarity blend: 1 = cosine, 0 = dot product [default: 1].
    #[arg(long)]
    alpha: Option<f64>,
    /// Number of neighbors to list [default: 5].
    #[arg(long)]
    k: Option<usize>,
    /// Keep the target word inside its own context [default: true].
    #[arg(long = "include-target")]
    include_target: Option<bool>,
}

#[derive(Args)]
struct PhraseArgs {
    /// Phrase words.
    #[arg(required = true, num_args = 1..)]
    words: Vec<String>,
    #[arg(long)]
    vocab: Option<PathBuf>,
    #[arg(long)]
    cooc: Option<PathBuf>,
    #[arg(long)]
    embeddings: Option<PathBuf>,
    /// Similarity blend: 1 = cosine, 0 = dot product [default: 1].
    #[arg(long)]
    alpha: Option<f64>,
    /// Number of neighbors to list [default: 5].
    #[arg(long)]
    k: Option<usize>,
}

#[derive(Args)]
struct TopNormArgs {
    /// Context words.
    #[arg(required = true, num_args = 1..)]
    context: Vec<String>,
    #[arg(long)]
    vocab: Option<PathBuf>,
    #[arg(long)]
    cooc: Option<PathBuf>,
    #[arg(long)]
    embeddings: Option<PathBuf>,
    /// Number of words to list [default: 5].
    #[arg(long)]
    k: Option<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Task {
    Wcr,
    Cws,
    Scws,
    Wsc,
}

impl Task {
    fn name(self) -> &'static str {
        match self {
            Task::Wcr => "wcr",
            Task::Cws => "cws",
            Task::Scws => "scws",
            Task::Wsc => "wsc",
        }
    }
}

#[derive(Args)]
struct EvalArgs {
    /// Task to evaluate: wcr, cws, scws, or wsc.
    #[arg(long, value_enum)]
    task: Option<Task>,
    /// Dataset file in the task's schema.
    #[arg(long)]
    dataset: Option<PathBuf>,
    #[arg(long)]
    vocab: Option<PathBuf>,
    #[arg(long)]
    cooc: Option<PathBuf>,
    #[arg(long)]
    embeddings: Option<PathBuf>,
    /// K of the word-sense K-NN classifier [default: 5].
    #[arg(long = "knn-k")]
    knn_k: Option<usize>,
    /// Train fraction of word-sense splits [default: 0.8].
    #[arg(long)]
    split: Option<f64>,
    /// Seed of the word-sense splits [default: 0].
    #[arg(long)]
    seed: Option<u64>,
    /// Key=value report file to write.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Accepted for interface parity; evaluation is sequential.
    #[arg(long)]
    threads: Option<usize>,
}

#[derive(Args)]
struct AlphaSweepArgs {
    /// Dataset of scored pairs (SCWSv1 schema).
    #[arg(long)]
    dataset: Option<PathBuf>,
    #[arg(long)]
    vocab: Option<PathBuf>,
    #[arg(long)]
    cooc: Option<PathBuf>,
    #[arg(long)]
    embeddings: Option<PathBuf>,
    /// Comma-separated blend values [default: 0,0.25,0.5,0.75,0.9,1].
    #[arg(long)]
    alpha: Option<String>,
    /// Optional key=value report file.
    #[arg(long)]
    out: Option<PathBuf>,
}

const CONFIG_KEYS: &[&str] = &[
    "corpus",
    "vocab",
    "cooc",
    "embeddings",
    "min-count",
    "stopwords",
    "window",
    "alpha",
    "k",
    "knn-k",
    "split",
    "seed",
    "dataset",
    "task",
    "out",
    "threads",
    "include-target",
];

/// Flag resolution: an explicit flag wins, then the config file, then the
/// built-in default.
struct Resolver {
    cfg: HashMap<String, String>,
}

impl Resolver {
    fn new(path: Option<&Path>) -> Result<Resolver, CliError> {
        let mut cfg = HashMap::new();
        if let Some(p) = path {
            if !p.is_file() {
                return Err(CliError::Usage(format!(
                    "config file not found: {}",
                    p.display()
                )));
            }
            let text = fs::read_to_string(p).map_err(|e| Error::io(p, e))?;
            for (i, raw) in text.lines().enumerate() {
                let line = raw.trim();
                if line.is_empty() || line.starts_with('#') {
                    continue;
                }
                let (key, value) = line.split_once('=').ok_or_else(|| {
                    CliError::Usage(format!("config line {}: expected key=value", i + 1))
                })?;
                let key = key.trim();
                if !CONFIG_KEYS.contains(&key) {
                    return Err(CliError::Usage(format!(
                        "config line {}: unknown key '{key}'",
                        i + 1
                    )));
                }
                cfg.insert(key.to_string(), value.trim().to_string());
            }
        }
        Ok(Resolver { cfg })
    }

    fn lookup(&self, key: &str) -> Option<&str> {
        self.cfg.get(key).map(|s| s.as_str())
    }

    fn path(&self, flag: Option<PathBuf>, key: &str) -> Option<PathBuf> {
        flag.or_else(|| self.lookup(key).map(PathBuf::from))
    }

    fn req_path(&self, flag: Option<PathBuf>, key: &str) -> Result<PathBuf, CliError> {
        self.path(flag, key)
            .ok_or_else(|| CliError::Usage(format!("missing required --{key}")))
    }

    fn req_input(&self, flag: Option<PathBuf>, key: &str) -> Result<PathBuf, CliError> {
        let p = self.req_path(flag, key)?;
        if !p.is_file() {
            return Err(CliError::Usage(format!(
                "--{key}: input path does not exist: {}",
                p.display()
            )));
        }
        Ok(p)
    }

    fn opt_input(&self, flag: Option<PathBuf>, key: &str) -> Result<Option<PathBuf>, CliError> {
        match self.path(flag, key) {
            Some(p) if p.is_file() => Ok(Some(p)),
            Some(p) => Err(CliError::Usage(format!(
                "--{key}: input path does not exist: {}",
                p.display()
            ))),
            None => Ok(None),
        }
    }

    fn value<T: FromStr>(&self, flag: Option<T>, key: &str, default: T) -> Result<T, CliError> {
        match flag {
            Some(v) => Ok(v),
            None => match self.lookup(key) {
                Some(s) => s.parse().map_err(|_| {
                    CliError::Usage(format!("config key '{key}': invalid value '{s}'"))
                }),
                None => Ok(default),
            },
        }
    }

    fn task(&self, flag: Option<Task>) -> Result<Task, CliError> {
        if let Some(t) = flag {
            return Ok(t);
        }
        match self.lookup("task") {
            Some("wcr") => Ok(Task::Wcr),
            Some("cws") => Ok(Task::Cws),
            Some("scws") => Ok(Task::Scws),
            Some("wsc") => Ok(Task::Wsc),
            Some(other) => Err(CliError::Usage(format!(
                "config key 'task': must be wcr, cws, scws, or wsc, got '{other}'"
            ))),
            None => Err(CliError::Usage("missing required --task".into())),
        }
    }
}

fn positive<T: PartialOrd + Default + std::fmt::Display>(
    value: T,
    key: &str,
) -> Result<T, CliError> {
    if value > T::default() {
        Ok(value)
    } else {
        Err(CliError::Usage(format!("--{key} must be >= 1, got {value}")))
    }
}

fn alpha_of(value: f64) -> Result<Alpha, CliError> {
    Alpha::new(value).map_err(|_| {
        CliError::Usage(format!("--alpha must lie in [0, 1], got {value}"))
    })
}

fn first_line(s: &str) -> &str {
    s.lines().find(|l| !l.trim().is_empty()).unwrap_or("error")
}

/// Parses `std::env::args` and runs; returns the process exit code.
pub fn run() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = e.print();
                return 0;
            }
            eprintln!("{}", first_line(&e.to_string()));
            return EXIT_USAGE;
        }
    };
    match dispatch(cli) {
        Ok(()) => 0,
        Err(CliError::Usage(msg)) => {
            eprintln!("error: usage: {msg}");
            EXIT_USAGE
        }
        Err(CliError::Lib(e)) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

fn dispatch(cli: Cli) -> Result<(), CliError> {
    let r = Resolver::new(cli.config.as_deref())?;
    match cli.command {
        Command::Build(a) => cmd_build(&r, a),
        Command::Neighbors(a) => cmd_neighbors(&r, a),
        Command::Phrase(a) => cmd_phrase(&r, a),
        Command::TopNorm(a) => cmd_top_norm(&r, a),
        Command::Eval(a) => cmd_eval(&r, a),
        Command::AlphaSweep(a) => cmd_alpha_sweep(&r, a),
    }
}

fn cmd_build(r: &Resolver, a: BuildArgs) -> Result<(), CliError> {
    let corpus = r.req_input(a.corpus, "corpus")?;
    let vocab_out = r.req_path(a.vocab, "vocab")?;
    let cooc_out = r.req_path(a.cooc, "cooc")?;
    let min_count = positive(r.value(a.min_count, "min-count", 2000u64)?, "min-count")?;
    let window = positive(r.value(a.window, "window", 5usize)?, "window")?;
    let threads = positive(r.value(a.threads, "threads", 1usize)?, "threads")?;
    let stopword_path = r.opt_input(a.stopwords, "stopwords")?;
    let stopwords = match &stopword_path {
        Some(p) => load_stopwords(p)?,
        None => default_stopwords(),
    };

    let bytes = fs::read(&corpus).map_err(|e| Error::io(&corpus, e))?;
    let stream = tokenize_bytes(&bytes);
    if stream.decode_warnings() > 0 {
        eprintln!(
            "warning: skipped {} undecodable byte spans",
            stream.decode_warnings()
        );
    }
    let vocab = build_vocabulary(&stream, min_count, &stopwords)?;
    let raw = count_cooccurrences_sharded(&stream, &vocab, window, threads)?;
    let mut matrix = normalize(&raw, &vocab)?;
    matrix.set_corpus_id(
        corpus
            .file_name()
            .map(|n| n.to_string_lossy().into_owned())
            .unwrap_or_default(),
    );
    vocab.save(&vocab_out)?;
    matrix.save(&cooc_out)?;
    println!("tokens: {}", stream.len());
    println!("vocab: {}", vocab.len());
    println!("nnz: {}", matrix.nnz());
    Ok(())
}

/// Loads the vocab/cooc/embedding triple and aligns all three onto the
/// intersection vocabulary.
fn load_model(
    r: &Resolver,
    vocab: Option<PathBuf>,
    cooc: Option<PathBuf>,
    embeddings: Option<PathBuf>,
) -> Result<(Vocabulary, CoocMatrix, EmbeddingMatrix), CliError> {
    let vocab_path = r.req_input(vocab, "vocab")?;
    let cooc_path = r.req_input(cooc, "cooc")?;
    let emb_path = r.req_input(embeddings, "embeddings")?;
    let full_vocab = Vocabulary::load(&vocab_path)?;
    let full_matrix = CoocMatrix::load(&cooc_path, &full_vocab)?;
    let (embeddings, vocab) = load_embeddings(&emb_path, &full_vocab)?;
    let matrix = if vocab.len() == full_vocab.len() {
        full_matrix
    } else {
        full_matrix.restrict(&full_vocab.mapping_to(&vocab), &vocab)?
    };
    Ok((vocab, matrix, embeddings))
}

fn print_ranked(rows: &[(usize, f64)], vocab: &Vocabulary, value_col: &str) {
    println!("{:<6}{:<24}{:>12}", "rank", "word", value_col);
    for (n, &(idx, value)) in rows.iter().enumerate() {
        println!("{:<6}{:<24}{:>12.4}", n + 1, vocab.token(idx), value);
    }
}

fn cmd_neighbors(r: &Resolver, a: NeighborsArgs) -> Result<(), CliError> {
    let alpha = alpha_of(r.value(a.alpha, "alpha", 1.0)?)?;
    let k = positive(r.value(a.k, "k", 5usize)?, "k")?;
    let include_target = r.value(a.include_target, "include-target", true)?;
    let (vocab, matrix, embeddings) = load_model(r, a.vocab, a.cooc, a.embeddings)?;

    let target = vocab
        .index_of(&a.word)
        .ok_or_else(|| Error::OovWord(a.word.clone()))?;
    let ctx = Context::new(a.context, include_target);
    let ce = contextual_embedding(target, &ctx, &matrix, &embeddings, &vocab)?;
    println!("norm: {:.4}", ce.norm);
    if ce.norm == 0.0 && alpha.value() < 1.0 {
        eprintln!("warning: zero contextual embedding; all similarity scores are 0");
    }
    let top = nearest_words(&ce.vector, &embeddings, alpha, k, &HashSet::new())?;
    print_ranked(&top, &vocab, "score");
    Ok(())
}

fn cmd_phrase(r: &Resolver, a: PhraseArgs) -> Result<(), CliError> {
    let alpha = alpha_of(r.value(a.alpha, "alpha", 1.0)?)?;
    let k = positive(r.value(a.k, "k", 5usize)?, "k")?;
    let (vocab, matrix, embeddings) = load_model(r, a.vocab, a.cooc, a.embeddings)?;

    let u = phrase_embedding(&a.words, &matrix, &embeddings, &vocab)?;
    println!("norm: {:.4}", l2_norm(&u));
    if l2_norm(&u) == 0.0 && alpha.value() < 1.0 {
        eprintln!("warning: zero phrase embedding; all similarity scores are 0");
    }
    // the phrase's own words are excluded from the neighbor list
    let exclude: HashSet<usize> = a.words.iter().filter_map(|t| vocab.index_of(t)).collect();
    let top = nearest_words(&u, &embeddings, alpha, k, &exclude)?;
    print_ranked(&top, &vocab, "score");
    Ok(())
}

fn cmd_top_norm(r: &Resolver, a: TopNormArgs) -> Result<(), CliError> {
    let k = positive(r.value(a.k, "k", 5usize)?, "k")?;
    let (vocab, matrix, embeddings) = load_model(r, a.vocab, a.cooc, a.embeddings)?;
    let ctx = Context::new(a.context, true);
    let top = top_norm_words(&ctx, &matrix, &embeddings, &vocab, k)?;
    print_ranked(&top, &vocab, "norm");
    Ok(())
}

fn write_report(path: &Path, rows: &[(String, String)]) -> Result<(), Error> {
    let mut out = String::new();
    for (key, value) in rows {
        writeln!(out, "{key}={value}").unwrap();
    }
    fs::write(path, out).map_err(|e| Error::io(path, e))
}

fn kv(key: &str, value: impl std::fmt::Display) -> (String, String) {
    (key.to_string(), value.to_string())
}

fn cmd_eval(r: &Resolver, a: EvalArgs) -> Result<(), CliError> {
    let task = r.task(a.task)?;
    let dataset = r.req_input(a.dataset, "dataset")?;
    let out = r.req_path(a.out, "out")?;
    let knn_k = positive(r.value(a.knn_k, "knn-k", 5usize)?, "knn-k")?;
    let split = r.value(a.split, "split", 0.8f64)?;
    let seed = r.value(a.seed, "seed", 0u64)?;
    positive(r.value(a.threads, "threads", 1usize)?, "threads")?;
    if !(split > 0.0 && split < 1.0) {
        return Err(CliError::Usage(format!(
            "--split must lie strictly between 0 and 1, got {split}"
        )));
    }
    let (vocab, matrix, embeddings) = load_model(r, a.vocab, a.cooc, a.embeddings)?;

    let mut report = vec![
        kv("task", task.name()),
        kv("dataset", dataset.display()),
    ];
    println!("task: {}", task.name());
    match task {
        Task::Wcr => {
            let tests = load_wcr(&dataset)?;
            let s = eval_wcr(&tests, &matrix, &embeddings, &vocab)?;
            println!("tests evaluated: {}", s.evaluated);
            println!("tests skipped (oov): {}", s.skipped_oov);
            println!("spearman skipped (degenerate): {}", s.spearman_skipped);
            match s.mean_spearman {
                Some(sp) => println!("mean spearman: {sp:.4}"),
                None => println!("mean spearman: n/a"),
            }
            println!("mean p@1: {:.4}", s.mean_precision_at_1);
            report.push(kv("tests_evaluated", s.evaluated));
            report.push(kv("tests_skipped_oov", s.skipped_oov));
            report.push(kv("spearman_skipped", s.spearman_skipped));
            report.push(kv("mean_spearman", s.mean_spearman.unwrap_or(f64::NAN)));
            report.push(kv("mean_p_at_1", s.mean_precision_at_1));
        }
        Task::Cws => {
            let tests = load_cws(&dataset)?;
            let s = eval_cws(&tests, &matrix, &embeddings, &vocab)?;
            println!("tests evaluated: {}", s.evaluated);
            println!("tests skipped: {}", s.skipped);
            println!("mean auc: {:.4}", s.mean_auc);
            println!("mean ap: {:.4}", s.mean_ap);
            report.push(kv("tests_evaluated", s.evaluated));
            report.push(kv("tests_skipped", s.skipped));
            report.push(kv("mean_auc", s.mean_auc));
            report.push(kv("mean_ap", s.mean_ap));
        }
        Task::Scws => {
            let tests = load_scws(&dataset)?;
            let s = eval_scws(&tests, &matrix, &embeddings, &vocab)?;
            println!("tests evaluated: {}", s.evaluated);
            println!("tests dropped (oov): {}", s.dropped_oov);
            println!("spearman: {:.4}", s.spearman);
            report.push(kv("tests_evaluated", s.evaluated));
            report.push(kv("tests_dropped_oov", s.dropped_oov));
            report.push(kv("spearman", s.spearman));
        }
        Task::Wsc => {
            let examples = load_wsc(&dataset)?;
            let params = WscParams {
                k: knn_k,
                split_fraction: split,
                seed,
            };
            let s = eval_wsc(&examples, &matrix, &embeddings, &vocab, &params)?;
            for note in &s.words_skipped_knn {
                eprintln!("warning: skipped {note}");
            }
            println!("knn k: {knn_k}");
            println!("split: {split}");
            println!("seed: {seed}");
            println!("words evaluated: {}", s.words_evaluated);
            println!("words skipped (single sense): {}", s.words_skipped_single_sense);
            println!("words skipped (oov): {}", s.words_skipped_oov);
            println!("words skipped (knn): {}", s.words_skipped_knn.len());
            println!("mean accuracy: {:.4}", s.mean_accuracy);
            println!("{:<24}{:>8}{:>8}{:>8}{:>12}", "word", "senses", "train", "test", "accuracy");
            for wacc in &s.per_word {
                println!(
                    "{:<24}{:>8}{:>8}{:>8}{:>12.4}",
                    wacc.word, wacc.senses, wacc.train_size, wacc.test_size, wacc.accuracy
                );
            }
            report.push(kv("knn_k", knn_k));
            report.push(kv("split_fraction", split));
            report.push(kv("seed", seed));
            report.push(kv("words_evaluated", s.words_evaluated));
            report.push(kv("words_skipped_single_sense", s.words_skipped_single_sense));
            report.push(kv("words_skipped_oov", s.words_skipped_oov));
            report.push(kv("words_skipped_knn", s.words_skipped_knn.len()));
            report.push(kv("mean_accuracy", s.mean_accuracy));
            for wacc in &s.per_word {
                report.push(kv(&format!("word.{}.senses", wacc.word), wacc.senses));
                report.push(kv(&format!("word.{}.train", wacc.word), wacc.train_size));
                report.push(kv(&format!("word.{}.test", wacc.word), wacc.test_size));
                report.push(kv(&format!("word.{}.accuracy", wacc.word), wacc.accuracy));
            }
        }
    }
    write_report(&out, &report)?;
    Ok(())
}

fn cmd_alpha_sweep(r: &Resolver, a: AlphaSweepArgs) -> Result<(), CliError> {
    let dataset = r.req_input(a.dataset, "dataset")?;
    let out = r.path(a.out, "out");
    let spec = match a.alpha {
        Some(s) => s,
        None => r
            .lookup("alpha")
            .unwrap_or("0,0.25,0.5,0.75,0.9,1")
            .to_string(),
    };
    let mut tokens: Vec<String> = Vec::new();
    let mut alphas: Vec<Alpha> = Vec::new();
    for tok in spec.split(',') {
        let tok = tok.trim();
        let value: f64 = tok
            .parse()
            .map_err(|_| CliError::Usage(format!("--alpha: invalid value '{tok}'")))?;
        alphas.push(alpha_of(value)?);
        tokens.push(tok.to_string());
    }
    if alphas.is_empty() {
        return Err(CliError::Usage("--alpha: no values given".into()));
    }
    let (vocab, matrix, embeddings) = load_model(r, a.vocab, a.cooc, a.embeddings)?;

    let tests = load_scws(&dataset)?;
    let mut pairs: Vec<(Vec<f64>, Vec<f64>, f64)> = Vec::new();
    let mut dropped = 0usize;
    for t in &tests {
        let (i1, i2) = match (vocab.index_of(&t.word1), vocab.index_of(&t.word2)) {
            (Some(a), Some(b)) => (a, b),
            _ => {
                dropped += 1;
                continue;
            }
        };
        let u1 = contextual_embedding(i1, &Context::new(t.context1.iter().cloned(), true), &matrix, &embeddings, &vocab)?;
        let u2 = contextual_embedding(i2, &Context::new(t.context2.iter().cloned(), true), &matrix, &embeddings, &vocab)?;
        pairs.push((u1.vector, u2.vector, t.gold));
    }
    let rows = alpha_sweep(&pairs, &alphas)?;

    println!("pairs: {}", pairs.len());
    println!("dropped (oov): {dropped}");
    println!("{:<12}{:>12}", "alpha", "spearman");
    for (tok, (_, sp)) in tokens.iter().zip(&rows) {
        println!("{:<12}{:>12.4}", tok, sp);
    }
    if let Some(out) = out {
        let mut report = vec![
            kv("task", "alpha-sweep"),
            kv("dataset", dataset.display()),
            kv("pairs", pairs.len()),
            kv("dropped_oov", dropped),
        ];
        for (tok, (_, sp)) in tokens.iter().zip(&rows) {
            report.push(kv(&format!("spearman_at_{tok}"), *sp));
        }
        write_report(&out, &report)?;
    }
    Ok(())
}
