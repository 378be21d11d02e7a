//! Save a trained model in text and binary form, reload it, and export
//! word2vec-format vectors with the class rows included.
//!
//! Run with: cargo run --release --example save_load

use classvec::corpus::build_vocabulary;
use classvec::embed::{init_model, TrainConfig};
use classvec::model_io::{export_word2vec, load_model, save_model};
use classvec::scoring::cv_score_document;
use classvec::synth::{two_class_corpus, SynthSpec};

fn main() -> classvec::Result<()> {
    let corpus = two_class_corpus(&SynthSpec {
        train_docs: 200,
        test_docs: 40,
        ..SynthSpec::default()
    });
    let config = TrainConfig {
        dim: 40,
        epochs: 8,
        seed: 1,
        ..TrainConfig::default()
    };
    let vocab = build_vocabulary(&corpus.train, 5)?;
    let mut model = init_model(vocab, corpus.train.classes.clone(), &config)?;
    model.train(&corpus.train, &config)?;

    let dir = std::env::temp_dir().join("classvec_example");
    std::fs::create_dir_all(&dir).expect("create temp dir");

    // text stores weights as %.7e and is lossy; binary is bit-exact
    let doc = &corpus.test.documents[0].tokens;
    let original = cv_score_document(&model, doc);
    for (name, binary) in [("model.txt", false), ("model.bin", true)] {
        let path = dir.join(name);
        save_model(&model, &path, binary)?;
        let loaded = load_model(&path)?;
        let reloaded = cv_score_document(&loaded, doc);
        assert_eq!(original.predicted, reloaded.predicted);
        if binary {
            assert_eq!(original.scores, reloaded.scores);
        }
        let max_diff = original
            .scores
            .iter()
            .zip(&reloaded.scores)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0f64, f64::max);
        let bytes = std::fs::metadata(&path).expect("stat model file").len();
        println!("{name}: {bytes} bytes, max score drift after reload {max_diff:.2e}");
    }

    let w2v = dir.join("vectors.txt");
    export_word2vec(&model, &w2v)?;
    println!(
        "word2vec export: {} vectors of dim {} (includes __class_<name>__ rows)",
        model.word_count() + model.class_count(),
        model.dim
    );
    Ok(())
}
