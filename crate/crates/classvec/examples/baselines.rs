//! Bag-of-words and Naive Bayes baselines on the synthetic corpus.
//!
//! Run with: cargo run --release --example baselines

use classvec::baselines::{
    bow_featurize, compute_idf, naive_bayes_fit_predict, nb_lr_feature_map, BowMode,
};
use classvec::classify::{accuracy, lr_fit, lr_predict};
use classvec::corpus::build_vocabulary;
use classvec::scoring::featurize_document;
use classvec::synth::{two_class_corpus, SynthSpec};
use classvec::{LabeledCorpus, SparseVector, Vocabulary};

fn lr_accuracy(
    featurize: impl Fn(&LabeledCorpus) -> classvec::Result<Vec<SparseVector>>,
    corpus: &classvec::synth::SyntheticCorpus,
) -> classvec::Result<f64> {
    let y: Vec<bool> = corpus
        .train
        .documents
        .iter()
        .map(|d| d.label == corpus.train.classes[0])
        .collect();
    let lr = lr_fit(&featurize(&corpus.train)?, &y, 1.0, 1e-6, 500)?;
    let predictions: Vec<&str> = featurize(&corpus.test)?
        .iter()
        .map(|x| {
            let (_, positive) = lr_predict(&lr, x).unwrap();
            corpus.train.classes[usize::from(!positive)].as_str()
        })
        .collect();
    let gold: Vec<&str> = corpus
        .test
        .documents
        .iter()
        .map(|d| d.label.as_str())
        .collect();
    accuracy(&predictions, &gold)
}

fn main() -> classvec::Result<()> {
    let corpus = two_class_corpus(&SynthSpec::default());
    let vocab: Vocabulary = build_vocabulary(&corpus.train, 5)?;
    let idf = compute_idf(&vocab, &corpus.train);

    for (name, mode) in [
        ("binary", BowMode::Binary),
        ("tf", BowMode::Tf),
        ("idf", BowMode::Idf),
        ("tfidf", BowMode::TfIdf),
    ] {
        let acc = lr_accuracy(
            |c| {
                c.documents
                    .iter()
                    .map(|d| bow_featurize(&d.tokens, mode, &vocab, Some(&idf)))
                    .collect()
            },
            &corpus,
        )?;
        println!("bow-{name:<8} accuracy {acc:.4}");
    }

    let map = nb_lr_feature_map(&corpus.train, &vocab, 1.0)?;
    let acc = lr_accuracy(
        |c| {
            Ok(c.documents
                .iter()
                .map(|d| featurize_document(&d.tokens, &map, &vocab))
                .collect())
        },
        &corpus,
    )?;
    println!("nb-lr        accuracy {acc:.4}");

    let test_docs: Vec<Vec<String>> = corpus
        .test
        .documents
        .iter()
        .map(|d| d.tokens.clone())
        .collect();
    let predictions = naive_bayes_fit_predict(&corpus.train, &test_docs, 1.0)?;
    let labels: Vec<&str> = predictions
        .iter()
        .map(|&c| corpus.train.classes[c].as_str())
        .collect();
    let gold: Vec<&str> = corpus
        .test
        .documents
        .iter()
        .map(|d| d.label.as_str())
        .collect();
    println!("naive-bayes  accuracy {:.4}", accuracy(&labels, &gold)?);
    Ok(())
}
