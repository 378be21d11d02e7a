//! Bag-of-words feature variants, multinomial Naive Bayes, and the NB-LR
//! log-count-ratio feature map.

use std::collections::HashSet;
use std::str::FromStr;

use crate::corpus::{LabeledCorpus, Vocabulary};
use crate::scoring::{FeatureKind, FeatureMap};
use crate::sparse::SparseVector;
use crate::{Error, Result};

/// Inverse document frequencies over the retained vocabulary.
#[derive(Debug, Clone)]
pub struct IdfTable {
    pub idf: Vec<f64>,
    pub num_docs: u64,
}

/// `idf(w) = ln(N / df(w))` with the corpus document count N.
pub fn compute_idf(vocab: &Vocabulary, corpus: &LabeledCorpus) -> IdfTable {
    let n = corpus.documents.len() as u64;
    let idf = (0..vocab.len())
        .map(|id| (n as f64 / vocab.doc_freq(id) as f64).ln())
        .collect();
    IdfTable { idf, num_docs: n }
}

/// Bag-of-words weighting schemes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BowMode {
    Binary,
    Tf,
    Idf,
    TfIdf,
}

impl FromStr for BowMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "binary" => Ok(BowMode::Binary),
            "tf" => Ok(BowMode::Tf),
            "idf" => Ok(BowMode::Idf),
            "tfidf" => Ok(BowMode::TfIdf),
            other => Err(Error::UnknownMode(other.to_owned())),
        }
    }
}

/// Featurize a document under one of the bag-of-words schemes. The idf
/// table is required for the idf and tfidf modes.
pub fn bow_featurize(
    tokens: &[String],
    mode: BowMode,
    vocab: &Vocabulary,
    idf: Option<&IdfTable>,
) -> Result<SparseVector> {
    let idf = match mode {
        BowMode::Idf | BowMode::TfIdf => Some(
            idf.ok_or_else(|| Error::UnknownMode("idf table required".into()))?,
        ),
        _ => None,
    };
    let mut counts = vec![0u64; vocab.len()];
    for token in tokens {
        if let Some(id) = vocab.id(token) {
            counts[id] += 1;
        }
    }
    let pairs = counts
        .iter()
        .enumerate()
        .filter(|&(_, c)| *c > 0)
        .map(|(id, &c)| {
            let v = match mode {
                BowMode::Binary => 1.0,
                BowMode::Tf => c as f64,
                BowMode::Idf => idf.unwrap().idf[id],
                BowMode::TfIdf => c as f64 * idf.unwrap().idf[id],
            };
            (id, v)
        })
        .collect();
    Ok(SparseVector::from_pairs(vocab.len(), pairs))
}

/// Multinomial Naive Bayes with Laplace smoothing over token counts and
/// log-frequency class priors.
#[derive(Debug, Clone)]
pub struct NaiveBayes {
    pub log_priors: Vec<f64>,
    /// Per class: log p(w|c) over the vocabulary.
    pub log_likelihoods: Vec<Vec<f64>>,
}

impl NaiveBayes {
    pub fn fit(corpus: &LabeledCorpus, vocab: &Vocabulary, alpha: f64) -> Result<Self> {
        if corpus.classes.len() < 2 {
            return Err(Error::TooFewClasses(corpus.classes.len()));
        }
        let n_classes = corpus.classes.len();
        let mut doc_counts = vec![0u64; n_classes];
        let mut token_counts = vec![vec![0u64; vocab.len()]; n_classes];
        for doc in &corpus.documents {
            let c = corpus.class_index(&doc.label).unwrap();
            doc_counts[c] += 1;
            for token in &doc.tokens {
                if let Some(id) = vocab.id(token) {
                    token_counts[c][id] += 1;
                }
            }
        }
        let total_docs: u64 = doc_counts.iter().sum();
        let log_priors = doc_counts
            .iter()
            .map(|&d| (d as f64 / total_docs as f64).ln())
            .collect();
        let log_likelihoods = token_counts
            .iter()
            .map(|counts| {
                let total: f64 =
                    counts.iter().sum::<u64>() as f64 + alpha * vocab.len() as f64;
                counts
                    .iter()
                    .map(|&c| ((c as f64 + alpha) / total).ln())
                    .collect()
            })
            .collect();
        Ok(NaiveBayes {
            log_priors,
            log_likelihoods,
        })
    }

    /// Argmax of log prior + Σ count · log p(w|c); ties go to the earlier
    /// class.
    pub fn predict(&self, tokens: &[String], vocab: &Vocabulary) -> usize {
        let mut scores = self.log_priors.clone();
        for token in tokens {
            if let Some(id) = vocab.id(token) {
                for (score, ll) in scores.iter_mut().zip(&self.log_likelihoods) {
                    *score += ll[id];
                }
            }
        }
        let mut best = 0;
        for c in 1..scores.len() {
            if scores[c] > scores[best] {
                best = c;
            }
        }
        best
    }
}

/// Fit NB on the training corpus (vocabulary from the training tokens,
/// min_count 1) and predict each test document's class index.
pub fn naive_bayes_fit_predict(
    train: &LabeledCorpus,
    test_docs: &[Vec<String>],
    alpha: f64,
) -> Result<Vec<usize>> {
    let vocab = crate::corpus::build_vocabulary(train, 1)?;
    let nb = NaiveBayes::fit(train, &vocab, alpha)?;
    Ok(test_docs.iter().map(|d| nb.predict(d, &vocab)).collect())
}

/// NB-LR feature map: smoothed log-ratio of binary-presence counts between
/// the two classes, `r(w) = log((p/‖p‖₁) / (q/‖q‖₁))` with
/// `p = alpha + presence counts` over positive-class documents.
pub fn nb_lr_feature_map(
    train: &LabeledCorpus,
    vocab: &Vocabulary,
    alpha: f64,
) -> Result<FeatureMap> {
    if train.classes.len() != 2 {
        return Err(Error::NotBinary(train.classes.len()));
    }
    let mut p = vec![alpha; vocab.len()];
    let mut q = vec![alpha; vocab.len()];
    for doc in &train.documents {
        let counts = if doc.label == train.classes[0] {
            &mut p
        } else {
            &mut q
        };
        let mut seen = HashSet::new();
        for token in &doc.tokens {
            if let Some(id) = vocab.id(token) {
                if seen.insert(id) {
                    counts[id] += 1.0;
                }
            }
        }
    }
    let p_norm: f64 = p.iter().sum();
    let q_norm: f64 = q.iter().sum();
    let values = p
        .iter()
        .zip(&q)
        .map(|(pi, qi)| ((pi / p_norm) / (qi / q_norm)).ln())
        .collect();
    Ok(FeatureMap {
        values,
        kind: FeatureKind::NbLr,
    })
}
