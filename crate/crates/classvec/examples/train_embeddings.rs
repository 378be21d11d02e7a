//! Train word and class vectors on a synthetic two-class corpus and print
//! the nearest neighbors of each class vector.
//!
//! Run with: cargo run --release --example train_embeddings

use classvec::corpus::build_vocabulary;
use classvec::embed::{init_model, TrainConfig};
use classvec::synth::{two_class_corpus, SynthSpec};

fn main() -> classvec::Result<()> {
    let corpus = two_class_corpus(&SynthSpec::default());
    println!(
        "corpus: {} train docs, {} test docs, classes {:?}",
        corpus.train.documents.len(),
        corpus.test.documents.len(),
        corpus.train.classes
    );

    let config = TrainConfig {
        dim: 50,
        epochs: 10,
        lambda: 1.0,
        seed: 1,
        ..TrainConfig::default()
    };
    let vocab = build_vocabulary(&corpus.train, 5)?;
    println!("vocabulary: {} words", vocab.len());

    let mut model = init_model(vocab, corpus.train.classes.clone(), &config)?;
    model.train(&corpus.train, &config)?;

    for class in 0..model.class_count() {
        println!("\nnearest neighbors of class '{}':", model.classes[class]);
        for (word, sim) in model.nearest_neighbors(model.class_row(class), 10)? {
            let marker = corpus.markers[class].contains(&word);
            println!(
                "  {word:<12} {sim:.4}{}",
                if marker { "  (marker)" } else { "" }
            );
        }
    }
    Ok(())
}
