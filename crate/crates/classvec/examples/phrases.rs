//! Detect multiword phrases with the discounted bigram score and rewrite
//! a corpus so that frequent pairs become single underscore tokens.
//!
//! Run with: cargo run --example phrases

use classvec::phrase::{annotate_corpus, learn_phrases};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn main() {
    // filler words churn so that ordinary bigrams stay rare, while
    // "new york" (and sometimes "new york city") repeats verbatim
    let fillers: Vec<String> = (0..50).map(|i| format!("word{i:02}")).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut docs: Vec<Vec<String>> = Vec::new();
    for i in 0..2000 {
        let mut doc: Vec<String> = (0..8)
            .map(|_| fillers[rng.gen_range(0..fillers.len())].clone())
            .collect();
        if i % 10 == 0 {
            doc.insert(3, "new".to_string());
            doc.insert(4, "york".to_string());
            if i % 40 == 0 {
                doc.insert(5, "city".to_string());
            }
        }
        docs.push(doc);
    }

    for (pass, threshold) in [(1usize, 50.0), (2, 25.0)] {
        let table = learn_phrases(&docs, 5, threshold, 5);
        println!(
            "pass {pass}: {} phrases above threshold {threshold}",
            table.len()
        );
        for (phrase, score) in table.entries() {
            println!("  {phrase:<20} score {score:.1}");
        }
        docs = annotate_corpus(&docs, &table);
    }

    println!("\nrewritten sample:");
    println!("  {}", docs[0].join(" "));
}
