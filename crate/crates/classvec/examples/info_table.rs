//! Rank vocabulary words by the information their embedding carries about
//! the class, in bits, and show how markers separate from filler words.
//!
//! Run with: cargo run --release --example info_table

use classvec::corpus::build_vocabulary;
use classvec::embed::{init_model, TrainConfig};
use classvec::infosel::{info_table, total_expected_information};
use classvec::synth::{two_class_corpus, SynthSpec};

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

    let mut records = info_table(&model, &corpus.train, model.word_count(), true)?;
    records.sort_by(|a, b| b.realized.total_cmp(&a.realized));

    println!("{:<14} {:>10} {:>10}  kind", "word", "realized", "expected");
    for record in records.iter().take(15) {
        let kind = if corpus.markers.iter().flatten().any(|m| m == &record.word) {
            "marker"
        } else {
            "filler"
        };
        println!(
            "{:<14} {:>10.4} {:>10.6}  {kind}",
            record.word, record.realized, record.expected
        );
    }
    println!(
        "\ntotal expected information: {:.4} bits",
        total_expected_information(&records)
    );
    Ok(())
}
