//! Compare the classifiers built on class–word similarity: the raw CV
//! Score, CV-LR, and norm CV-LR feature maps fed to logistic regression.
//!
//! Run with: cargo run --release --example classify

use classvec::classify::{accuracy, lr_fit, lr_predict};
use classvec::corpus::build_vocabulary;
use classvec::embed::{init_model, TrainConfig};
use classvec::scoring::{
    cv_lr_feature_map, cv_score_document, featurize_document, norm_cv_lr_feature_map, FeatureMap,
};
use classvec::synth::{two_class_corpus, SynthSpec};
use classvec::{LabeledCorpus, SparseVector};

fn main() -> classvec::Result<()> {
    let corpus = two_class_corpus(&SynthSpec::default());
    let config = TrainConfig {
        dim: 50,
        epochs: 10,
        lambda: 1.0,
        seed: 1,
        ..TrainConfig::default()
    };
    let vocab = build_vocabulary(&corpus.train, 5)?;
    let mut model = init_model(vocab, corpus.train.classes.clone(), &config)?;
    model.train(&corpus.train, &config)?;

    let gold: Vec<&str> = corpus
        .test
        .documents
        .iter()
        .map(|d| d.label.as_str())
        .collect();

    // direct CV Score: argmax over summed log class-word probabilities
    let predictions: Vec<&str> = corpus
        .test
        .documents
        .iter()
        .map(|d| {
            let scored = cv_score_document(&model, &d.tokens);
            model.classes[scored.predicted.unwrap_or(0)].as_str()
        })
        .collect();
    println!("cv-score    accuracy {:.4}", accuracy(&predictions, &gold)?);

    // feature maps + in-house logistic regression
    let featurize = |corpus: &LabeledCorpus, map: &FeatureMap| -> Vec<SparseVector> {
        corpus
            .documents
            .iter()
            .map(|d| featurize_document(&d.tokens, map, &model.vocab))
            .collect()
    };
    let y: Vec<bool> = corpus
        .train
        .documents
        .iter()
        .map(|d| d.label == corpus.train.classes[0])
        .collect();

    for (name, map) in [
        ("cv-lr", cv_lr_feature_map(&model, 0, 1)?),
        ("norm-cv-lr", norm_cv_lr_feature_map(&model, 0, 1)?),
    ] {
        let lr = lr_fit(&featurize(&corpus.train, &map), &y, 1.0, 1e-6, 500)?;
        let predictions: Vec<&str> = featurize(&corpus.test, &map)
            .iter()
            .map(|x| {
                let (_, positive) = lr_predict(&lr, x).unwrap();
                if positive {
                    corpus.train.classes[0].as_str()
                } else {
                    corpus.train.classes[1].as_str()
                }
            })
            .collect();
        println!("{name:<11} accuracy {:.4}", accuracy(&predictions, &gold)?);
    }
    Ok(())
}
