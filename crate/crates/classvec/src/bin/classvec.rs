//! Command-line pipeline: phrase annotation, training, prediction,
//! evaluation, feature export, information analysis, and baselines.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use classvec::baselines::{bow_featurize, compute_idf, nb_lr_feature_map, BowMode, NaiveBayes};
use classvec::classify::{accuracy, lr_fit, lr_predict};
use classvec::corpus::{build_vocabulary, load_labeled_corpus, LabeledCorpus, Vocabulary};
use classvec::embed::{init_model, TrainConfig};
use classvec::infosel::{info_table, total_expected_information, write_info_csv};
use classvec::model_io::{export_word2vec, load_model, save_model};
use classvec::phrase::{annotate_corpus, learn_phrases};
use classvec::scoring::{
    cv_lr_feature_map, cv_score_with_dists, featurize_document, log_class_word_softmax,
    norm_cv_lr_feature_map, FeatureMap,
};
use classvec::{EmbeddingModel, Error, SparseVector};

#[derive(Parser)]
#[command(name = "classvec", version, about = "Class vectors: joint word/class embeddings for document classification")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Detect frequent bigrams and rewrite the corpus with underscore phrases
    Phrases {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 2)]
        passes: usize,
        /// Per-pass score thresholds, comma separated; the last value repeats
        #[arg(long, value_delimiter = ',', default_values_t = [100.0, 50.0])]
        threshold: Vec<f64>,
        #[arg(long, default_value_t = 5)]
        delta: u64,
        #[arg(long = "min-count", default_value_t = 5)]
        min_count: u64,
    },
    /// Train word and class vectors on a labeled corpus
    Train {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        model: PathBuf,
        #[arg(long, default_value_t = 100)]
        dim: usize,
        #[arg(long, default_value_t = 10)]
        window: usize,
        #[arg(long, default_value_t = 5)]
        negative: usize,
        #[arg(long, default_value_t = 1)]
        hs: u8,
        #[arg(long, default_value_t = 1e-3)]
        sample: f64,
        #[arg(long = "min-count", default_value_t = 5)]
        min_count: u64,
        #[arg(long, default_value_t = 40)]
        iter: usize,
        #[arg(long, default_value_t = 1.0)]
        lambda: f32,
        #[arg(long, default_value_t = 0.025)]
        lr: f32,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        threads: usize,
        /// Write matrices as raw little-endian f32 instead of text
        #[arg(long)]
        binary: bool,
        /// Also write word2vec-format text vectors to this path
        #[arg(long = "export-word2vec")]
        export_word2vec: Option<PathBuf>,
    },
    /// Predict classes for a corpus file with a trained model
    Predict {
        #[arg(long)]
        model: PathBuf,
        #[arg(long, default_value = "cv-score")]
        method: String,
        #[arg(long = "in")]
        input: PathBuf,
        /// Training corpus used to resolve unscorable documents to the
        /// majority class; defaults to the model's first class
        #[arg(long)]
        train: Option<PathBuf>,
        /// Prediction output file (defaults to stdout)
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Train a classifier on one file, report accuracy on another
    Eval {
        #[arg(long)]
        model: Option<PathBuf>,
        /// cv-score | cv-lr | norm-cv-lr | nb-lr | bow-binary | bow-tf | bow-idf | bow-tfidf
        #[arg(long)]
        method: String,
        #[arg(long)]
        train: PathBuf,
        #[arg(long)]
        test: PathBuf,
        #[arg(long, default_value_t = 1.0)]
        l2: f64,
        #[arg(long, default_value_t = 1.0)]
        alpha: f64,
        #[arg(long = "min-count", default_value_t = 5)]
        min_count: u64,
        #[arg(long = "pred-out", default_value = "predictions.tsv")]
        pred_out: PathBuf,
    },
    /// Export a per-word feature map as CSV, sorted by score
    Features {
        #[arg(long)]
        model: PathBuf,
        /// cv-lr | norm-cv-lr
        #[arg(long)]
        method: String,
        #[arg(long)]
        out: PathBuf,
    },
    /// Realized/expected information per word, exported as CSV
    Info {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        train: PathBuf,
        #[arg(long, default_value_t = 1500)]
        top: usize,
        #[arg(long)]
        normalized: bool,
        #[arg(long)]
        out: PathBuf,
    },
    /// Bag-of-words and Naive Bayes baselines
    Baseline {
        /// binary | tf | idf | tfidf | nb | nb-lr
        #[arg(long)]
        method: String,
        #[arg(long)]
        train: PathBuf,
        #[arg(long)]
        test: PathBuf,
        #[arg(long, default_value_t = 1.0)]
        alpha: f64,
        #[arg(long, default_value_t = 1.0)]
        l2: f64,
        #[arg(long = "min-count", default_value_t = 5)]
        min_count: u64,
        #[arg(long = "pred-out", default_value = "predictions.tsv")]
        pred_out: PathBuf,
    },
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}

fn run(cli: Cli) -> classvec::Result<()> {
    match cli.command {
        Command::Phrases {
            input,
            out,
            passes,
            threshold,
            delta,
            min_count,
        } => cmd_phrases(&input, &out, passes, &threshold, delta, min_count),
        Command::Train {
            input,
            model,
            dim,
            window,
            negative,
            hs,
            sample,
            min_count,
            iter,
            lambda,
            lr,
            seed,
            threads,
            binary,
            export_word2vec: export,
        } => {
            let seed = std::env::var("CLASSVEC_SEED")
                .ok()
                .and_then(|s| s.parse().ok())
                .unwrap_or(seed);
            let config = TrainConfig {
                dim,
                window,
                negatives: negative,
                sample,
                epochs: iter,
                lambda,
                hs: hs != 0,
                initial_lr: lr,
                min_lr: lr * 1e-4,
                seed,
                workers: threads,
            };
            cmd_train(&input, &model, min_count, &config, binary, export.as_deref())
        }
        Command::Predict {
            model,
            method,
            input,
            train,
            out,
        } => {
            if method != "cv-score" {
                return Err(Error::UnknownMode(method));
            }
            cmd_predict(&model, &input, train.as_deref(), out.as_deref())
        }
        Command::Eval {
            model,
            method,
            train,
            test,
            l2,
            alpha,
            min_count,
            pred_out,
        } => cmd_eval(
            model.as_deref(),
            &method,
            &train,
            &test,
            l2,
            alpha,
            min_count,
            &pred_out,
        ),
        Command::Features { model, method, out } => cmd_features(&model, &method, &out),
        Command::Info {
            model,
            train,
            top,
            normalized,
            out,
        } => cmd_info(&model, &train, top, normalized, &out),
        Command::Baseline {
            method,
            train,
            test,
            alpha,
            l2,
            min_count,
            pred_out,
        } => cmd_baseline(&method, &train, &test, alpha, l2, min_count, &pred_out),
    }
}

fn create(path: &std::path::Path) -> classvec::Result<BufWriter<File>> {
    Ok(BufWriter::new(
        File::create(path).map_err(|e| Error::Io {
            path: path.to_owned(),
            source: e,
        })?,
    ))
}

fn cmd_phrases(
    input: &std::path::Path,
    out: &std::path::Path,
    passes: usize,
    thresholds: &[f64],
    delta: u64,
    min_count: u64,
) -> classvec::Result<()> {
    let corpus = load_labeled_corpus(input)?;
    let mut docs: Vec<Vec<String>> = corpus.documents.iter().map(|d| d.tokens.clone()).collect();
    for pass in 0..passes {
        let threshold = thresholds
            .get(pass)
            .or(thresholds.last())
            .copied()
            .unwrap_or(100.0);
        let table = learn_phrases(&docs, min_count, threshold, delta);
        docs = annotate_corpus(&docs, &table);
        eprintln!("pass {}: {} phrases at threshold {}", pass + 1, table.len(), threshold);
    }
    let mut writer = create(out)?;
    for (doc, tokens) in corpus.documents.iter().zip(&docs) {
        writeln!(writer, "{}\t{}", doc.label, tokens.join(" "))
            .map_err(|e| Error::io(out, e))?;
    }
    Ok(())
}

fn cmd_train(
    input: &std::path::Path,
    model_path: &std::path::Path,
    min_count: u64,
    config: &TrainConfig,
    binary: bool,
    export: Option<&std::path::Path>,
) -> classvec::Result<()> {
    let corpus = load_labeled_corpus(input)?;
    let vocab = build_vocabulary(&corpus, min_count)?;
    eprintln!(
        "vocabulary: {} words, {} classes, {} training tokens",
        vocab.len(),
        corpus.classes.len(),
        corpus.total_tokens()
    );
    let mut model = init_model(vocab, corpus.classes.clone(), config)?;
    model.train(&corpus, config)?;
    save_model(&model, model_path, binary)?;
    if let Some(path) = export {
        export_word2vec(&model, path)?;
    }
    Ok(())
}

/// Score every document with CV Score; unscorable documents fall back to
/// `fallback_class`. Returns (predicted labels, per-class scores, unscorable count).
fn cv_score_corpus(
    model: &EmbeddingModel,
    corpus: &LabeledCorpus,
    fallback_class: usize,
) -> (Vec<String>, Vec<Vec<f64>>, usize) {
    let log_dists: Vec<Vec<f64>> = (0..model.class_count())
        .map(|c| log_class_word_softmax(model, c))
        .collect();
    let mut labels = Vec::with_capacity(corpus.documents.len());
    let mut scores = Vec::with_capacity(corpus.documents.len());
    let mut unscorable = 0;
    for doc in &corpus.documents {
        let scored = cv_score_with_dists(model, &log_dists, &doc.tokens);
        let class = scored.predicted.unwrap_or_else(|| {
            unscorable += 1;
            fallback_class
        });
        labels.push(model.classes[class].clone());
        scores.push(scored.scores);
    }
    (labels, scores, unscorable)
}

fn write_predictions(
    path: &std::path::Path,
    labels: &[String],
    scores: &[Vec<f64>],
) -> classvec::Result<()> {
    let mut writer = create(path)?;
    for (label, score) in labels.iter().zip(scores) {
        let cols: Vec<String> = score.iter().map(|s| s.to_string()).collect();
        writeln!(writer, "{label}\t{}", cols.join("\t")).map_err(|e| Error::io(path, e))?;
    }
    Ok(())
}

fn majority_class_index(model: &EmbeddingModel, corpus: &LabeledCorpus) -> usize {
    corpus
        .majority_class()
        .and_then(|label| model.classes.iter().position(|c| c == label))
        .unwrap_or(0)
}

fn cmd_predict(
    model_path: &std::path::Path,
    input: &std::path::Path,
    train: Option<&std::path::Path>,
    out: Option<&std::path::Path>,
) -> classvec::Result<()> {
    let model = load_model(model_path)?;
    let corpus = load_labeled_corpus(input)?;
    let fallback = match train {
        Some(path) => majority_class_index(&model, &load_labeled_corpus(path)?),
        None => 0,
    };
    let (labels, scores, unscorable) = cv_score_corpus(&model, &corpus, fallback);
    if unscorable > 0 {
        eprintln!("unscorable={unscorable} (mapped to class {})", model.classes[fallback]);
    }
    match out {
        Some(path) => write_predictions(path, &labels, &scores)?,
        None => {
            let stdout = std::io::stdout();
            let mut lock = stdout.lock();
            for (label, score) in labels.iter().zip(&scores) {
                let cols: Vec<String> = score.iter().map(|s| s.to_string()).collect();
                writeln!(lock, "{label}\t{}", cols.join("\t"))
                    .map_err(|e| Error::io("<stdout>", e))?;
            }
        }
    }
    Ok(())
}

/// Fit logistic regression on weighted bag-of-words rows and predict the
/// test corpus. The positive LR label is the first class of `classes`.
fn lr_eval(
    train_rows: &[SparseVector],
    train_labels: &[bool],
    test_rows: &[SparseVector],
    classes: &[String],
    l2: f64,
) -> classvec::Result<(Vec<String>, Vec<Vec<f64>>)> {
    let lr = lr_fit(train_rows, train_labels, l2, 1e-6, 500)?;
    let mut labels = Vec::with_capacity(test_rows.len());
    let mut scores = Vec::with_capacity(test_rows.len());
    for row in test_rows {
        let (p, positive) = lr_predict(&lr, row)?;
        labels.push(classes[if positive { 0 } else { 1 }].clone());
        scores.push(vec![p, 1.0 - p]);
    }
    Ok((labels, scores))
}

fn binary_labels(corpus: &LabeledCorpus, positive: &str) -> Vec<bool> {
    corpus
        .documents
        .iter()
        .map(|d| d.label == positive)
        .collect()
}

#[allow(clippy::too_many_arguments)]
fn cmd_eval(
    model_path: Option<&std::path::Path>,
    method: &str,
    train_path: &std::path::Path,
    test_path: &std::path::Path,
    l2: f64,
    alpha: f64,
    min_count: u64,
    pred_out: &std::path::Path,
) -> classvec::Result<()> {
    let train = load_labeled_corpus(train_path)?;
    let test = load_labeled_corpus(test_path)?;
    let gold: Vec<String> = test.documents.iter().map(|d| d.label.clone()).collect();

    let (labels, scores) = match method {
        "cv-score" => {
            let model = load_model(model_path.ok_or_else(|| {
                Error::UnknownMode("cv-score requires --model".into())
            })?)?;
            let fallback = majority_class_index(&model, &train);
            let (labels, scores, unscorable) = cv_score_corpus(&model, &test, fallback);
            if unscorable > 0 {
                eprintln!("unscorable={unscorable}");
            }
            (labels, scores)
        }
        "cv-lr" | "norm-cv-lr" => {
            let model = load_model(model_path.ok_or_else(|| {
                Error::UnknownMode(format!("{method} requires --model"))
            })?)?;
            if model.class_count() != 2 {
                return Err(Error::NotBinary(model.class_count()));
            }
            let map = match method {
                "cv-lr" => cv_lr_feature_map(&model, 0, 1)?,
                _ => norm_cv_lr_feature_map(&model, 0, 1)?,
            };
            let featurize = |corpus: &LabeledCorpus| -> Vec<SparseVector> {
                corpus
                    .documents
                    .iter()
                    .map(|d| featurize_document(&d.tokens, &map, &model.vocab))
                    .collect()
            };
            lr_eval(
                &featurize(&train),
                &binary_labels(&train, &model.classes[0]),
                &featurize(&test),
                &model.classes,
                l2,
            )?
        }
        "nb-lr" => {
            let vocab = eval_vocab(model_path, &train, min_count)?;
            let map = nb_lr_feature_map(&train, &vocab, alpha)?;
            map_eval(&map, &vocab, &train, &test, l2)?
        }
        bow if bow.starts_with("bow-") => {
            let mode: BowMode = bow["bow-".len()..].parse()?;
            let vocab = eval_vocab(model_path, &train, min_count)?;
            let idf = compute_idf(&vocab, &train);
            let featurize = |corpus: &LabeledCorpus| -> classvec::Result<Vec<SparseVector>> {
                corpus
                    .documents
                    .iter()
                    .map(|d| bow_featurize(&d.tokens, mode, &vocab, Some(&idf)))
                    .collect()
            };
            lr_eval(
                &featurize(&train)?,
                &binary_labels(&train, &train.classes[0]),
                &featurize(&test)?,
                &train.classes,
                l2,
            )?
        }
        other => return Err(Error::UnknownMode(other.to_owned())),
    };

    write_predictions(pred_out, &labels, &scores)?;
    println!("accuracy={}", accuracy(&labels, &gold)?);
    Ok(())
}

fn eval_vocab(
    model_path: Option<&std::path::Path>,
    train: &LabeledCorpus,
    min_count: u64,
) -> classvec::Result<Vocabulary> {
    match model_path {
        Some(path) => Ok(load_model(path)?.vocab),
        None => build_vocabulary(train, min_count),
    }
}

/// LR evaluation of a feature map over binary presence features.
fn map_eval(
    map: &FeatureMap,
    vocab: &Vocabulary,
    train: &LabeledCorpus,
    test: &LabeledCorpus,
    l2: f64,
) -> classvec::Result<(Vec<String>, Vec<Vec<f64>>)> {
    let featurize = |corpus: &LabeledCorpus| -> Vec<SparseVector> {
        corpus
            .documents
            .iter()
            .map(|d| featurize_document(&d.tokens, map, vocab))
            .collect()
    };
    lr_eval(
        &featurize(train),
        &binary_labels(train, &train.classes[0]),
        &featurize(test),
        &train.classes,
        l2,
    )
}

fn cmd_features(
    model_path: &std::path::Path,
    method: &str,
    out: &std::path::Path,
) -> classvec::Result<()> {
    let model = load_model(model_path)?;
    if model.class_count() != 2 {
        return Err(Error::NotBinary(model.class_count()));
    }
    let map = match method {
        "cv-lr" => cv_lr_feature_map(&model, 0, 1)?,
        "norm-cv-lr" => norm_cv_lr_feature_map(&model, 0, 1)?,
        other => return Err(Error::UnknownMode(other.to_owned())),
    };
    let mut rows: Vec<(usize, f64)> = map.values.iter().copied().enumerate().collect();
    rows.sort_by(|a, b| b.1.partial_cmp(&a.1).unwrap());
    let mut writer = create(out)?;
    writeln!(writer, "word,f").map_err(|e| Error::io(out, e))?;
    for (id, f) in rows {
        writeln!(writer, "{},{}", model.vocab.token(id), f).map_err(|e| Error::io(out, e))?;
    }
    Ok(())
}

fn cmd_info(
    model_path: &std::path::Path,
    train_path: &std::path::Path,
    top: usize,
    normalized: bool,
    out: &std::path::Path,
) -> classvec::Result<()> {
    let model = load_model(model_path)?;
    let train = load_labeled_corpus(train_path)?;
    if top > model.word_count() {
        eprintln!(
            "requested top {top} words but the vocabulary has {}; clipping",
            model.word_count()
        );
    }
    let records = info_table(&model, &train, top, normalized)?;
    let writer = create(out)?;
    write_info_csv(&records, writer).map_err(|e| Error::io(out, e))?;
    println!(
        "words={} total_expected_information_bits={}",
        records.len(),
        total_expected_information(&records)
    );
    Ok(())
}

fn cmd_baseline(
    method: &str,
    train_path: &std::path::Path,
    test_path: &std::path::Path,
    alpha: f64,
    l2: f64,
    min_count: u64,
    pred_out: &std::path::Path,
) -> classvec::Result<()> {
    let train = load_labeled_corpus(train_path)?;
    let test = load_labeled_corpus(test_path)?;
    let vocab = build_vocabulary(&train, min_count)?;
    let gold: Vec<String> = test.documents.iter().map(|d| d.label.clone()).collect();

    let (labels, scores) = match method {
        "nb" => {
            let nb = NaiveBayes::fit(&train, &vocab, alpha)?;
            let mut labels = Vec::new();
            let mut scores = Vec::new();
            for doc in &test.documents {
                let class = nb.predict(&doc.tokens, &vocab);
                labels.push(train.classes[class].clone());
                scores.push(vec![class as f64]);
            }
            (labels, scores)
        }
        "nb-lr" => {
            let map = nb_lr_feature_map(&train, &vocab, alpha)?;
            map_eval(&map, &vocab, &train, &test, l2)?
        }
        bow => {
            let mode: BowMode = bow.parse()?;
            let idf = compute_idf(&vocab, &train);
            let featurize = |corpus: &LabeledCorpus| -> classvec::Result<Vec<SparseVector>> {
                corpus
                    .documents
                    .iter()
                    .map(|d| bow_featurize(&d.tokens, mode, &vocab, Some(&idf)))
                    .collect()
            };
            lr_eval(
                &featurize(&train)?,
                &binary_labels(&train, &train.classes[0]),
                &featurize(&test)?,
                &train.classes,
                l2,
            )?
        }
    };

    write_predictions(pred_out, &labels, &scores)?;
    println!("accuracy={}", accuracy(&labels, &gold)?);
    Ok(())
}
