//! Seeded synthetic two-class corpora for examples, benchmarks, and tests.
//!
//! Each class owns a disjoint set of marker words; all documents share a
//! common filler vocabulary. Marker words make the classes separable while
//! fillers carry no class signal, so classifier and information-analysis
//! behavior on these corpora is predictable.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::corpus::{Document, LabeledCorpus};

/// Shape of a generated corpus.
#[derive(Debug, Clone)]
pub struct SynthSpec {
    pub train_docs: usize,
    pub test_docs: usize,
    pub markers_per_class: usize,
    pub filler_words: usize,
    /// Marker tokens per document.
    pub markers_per_doc: usize,
    /// Filler tokens per document.
    pub fillers_per_doc: usize,
    /// Occurrences of the one deliberately rare marker per class.
    pub rare_marker_occurrences: usize,
    pub seed: u64,
}

impl Default for SynthSpec {
    fn default() -> Self {
        SynthSpec {
            train_docs: 400,
            test_docs: 200,
            markers_per_class: 20,
            filler_words: 100,
            markers_per_doc: 8,
            fillers_per_doc: 22,
            rare_marker_occurrences: 6,
            seed: 42,
        }
    }
}

/// A generated corpus with its word lists.
#[derive(Debug, Clone)]
pub struct SyntheticCorpus {
    pub train: LabeledCorpus,
    pub test: LabeledCorpus,
    /// Marker words per class, aligned with `classes`.
    pub markers: [Vec<String>; 2],
    /// The rare marker of each class (last entry of each marker list).
    pub rare_markers: [String; 2],
    pub fillers: Vec<String>,
    pub classes: [String; 2],
}

/// Generate a two-class corpus. Documents alternate between the classes so
/// both splits are balanced; the last marker of each class is injected into
/// exactly `rare_marker_occurrences` training documents instead of being
/// sampled, making it a low-frequency, high-signal word.
pub fn two_class_corpus(spec: &SynthSpec) -> SyntheticCorpus {
    let classes = ["pos".to_string(), "neg".to_string()];
    let markers: [Vec<String>; 2] = [
        (0..spec.markers_per_class)
            .map(|i| format!("posmark{i:02}"))
            .collect(),
        (0..spec.markers_per_class)
            .map(|i| format!("negmark{i:02}"))
            .collect(),
    ];
    let rare_markers = [
        markers[0].last().unwrap().clone(),
        markers[1].last().unwrap().clone(),
    ];
    let fillers: Vec<String> = (0..spec.filler_words).map(|i| format!("fill{i:03}")).collect();

    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let make_doc = |class: usize, rng: &mut ChaCha8Rng| -> Document {
        // the rare marker is only ever injected explicitly
        let common = &markers[class][..markers[class].len() - 1];
        let mut tokens: Vec<String> = Vec::with_capacity(spec.markers_per_doc + spec.fillers_per_doc);
        for _ in 0..spec.markers_per_doc {
            tokens.push(common.choose(rng).unwrap().clone());
        }
        for _ in 0..spec.fillers_per_doc {
            tokens.push(fillers.choose(rng).unwrap().clone());
        }
        tokens.shuffle(rng);
        Document {
            tokens,
            label: classes[class].clone(),
        }
    };

    let mut train_docs: Vec<Document> = (0..spec.train_docs)
        .map(|i| make_doc(i % 2, &mut rng))
        .collect();
    // inject the rare markers into a few training documents of their class
    for class in 0..2 {
        let mut injected = 0;
        let mut i = class; // documents of this class sit at i % 2 == class
        while injected < spec.rare_marker_occurrences && i < train_docs.len() {
            let pos = rng.gen_range(0..=train_docs[i].tokens.len());
            train_docs[i].tokens.insert(pos, rare_markers[class].clone());
            injected += 1;
            i += 2;
        }
    }
    let test_docs: Vec<Document> = (0..spec.test_docs)
        .map(|i| make_doc(i % 2, &mut rng))
        .collect();

    SyntheticCorpus {
        train: LabeledCorpus::from_documents(train_docs),
        test: LabeledCorpus::from_documents(test_docs),
        markers,
        rare_markers,
        fillers,
        classes,
    }
}
