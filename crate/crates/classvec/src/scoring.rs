//! Class-word similarity scoring: softmax distributions over the
//! vocabulary per class, the CV Score document rule, and the CV-LR /
//! norm CV-LR feature maps.

use crate::embed::EmbeddingModel;
use crate::sparse::SparseVector;
use crate::{Error, Result};

/// Provenance of a feature map.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FeatureKind {
    CvLr,
    NormCvLr,
    NbLr,
}

impl std::fmt::Display for FeatureKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            FeatureKind::CvLr => write!(f, "cv-lr"),
            FeatureKind::NormCvLr => write!(f, "norm-cv-lr"),
            FeatureKind::NbLr => write!(f, "nb-lr"),
        }
    }
}

/// A per-vocabulary-word real score `f(w)` used to weight bag-of-words
/// features.
#[derive(Debug, Clone)]
pub struct FeatureMap {
    pub values: Vec<f64>,
    pub kind: FeatureKind,
}

impl FeatureMap {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

fn dot_f64(a: &[f32], b: &[f32]) -> f64 {
    a.iter().zip(b).map(|(x, y)| *x as f64 * *y as f64).sum()
}

/// Dot products of one class row against every word row, in f64.
fn class_word_dots(model: &EmbeddingModel, class_idx: usize) -> Vec<f64> {
    let class_vec = model.input_row(model.class_row(class_idx));
    (0..model.word_count())
        .map(|w| dot_f64(class_vec, model.input_row(w)))
        .collect()
}

fn log_softmax(dots: &[f64]) -> Vec<f64> {
    let max = dots.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let log_z = dots.iter().map(|d| (d - max).exp()).sum::<f64>().ln() + max;
    dots.iter().map(|d| d - log_z).collect()
}

/// Probability distribution over vocabulary words for one class:
/// `s(w|c) = exp(v_c·v_w) / Σ_w exp(v_c·v_w)`, using the un-normalized
/// input vectors and max-subtraction for overflow safety.
pub fn class_word_softmax(model: &EmbeddingModel, class_idx: usize) -> Vec<f64> {
    log_class_word_softmax(model, class_idx)
        .into_iter()
        .map(f64::exp)
        .collect()
}

/// Log of [`class_word_softmax`], computed directly for CV Score sums.
pub fn log_class_word_softmax(model: &EmbeddingModel, class_idx: usize) -> Vec<f64> {
    log_softmax(&class_word_dots(model, class_idx))
}

/// Per-class log scores for a document and the argmax class.
#[derive(Debug, Clone)]
pub struct DocumentScore {
    /// Σ log s(w|c) per class over the in-vocabulary tokens.
    pub scores: Vec<f64>,
    /// Winning class index, or `None` when no token was in vocabulary.
    pub predicted: Option<usize>,
    pub known_tokens: usize,
}

/// CV Score: sum per-class log word probabilities over the document and
/// predict the class with the maximum. Ties break by class order.
pub fn cv_score_document(model: &EmbeddingModel, tokens: &[String]) -> DocumentScore {
    let log_dists: Vec<Vec<f64>> = (0..model.class_count())
        .map(|c| log_class_word_softmax(model, c))
        .collect();
    cv_score_with_dists(model, &log_dists, tokens)
}

/// CV Score against precomputed per-class log distributions, so corpora can
/// be scored without recomputing the softmax per document.
pub fn cv_score_with_dists(
    model: &EmbeddingModel,
    log_dists: &[Vec<f64>],
    tokens: &[String],
) -> DocumentScore {
    let mut scores = vec![0.0f64; log_dists.len()];
    let mut known = 0usize;
    for token in tokens {
        if let Some(id) = model.vocab.id(token) {
            known += 1;
            for (score, dist) in scores.iter_mut().zip(log_dists) {
                *score += dist[id];
            }
        }
    }
    let predicted = if known == 0 {
        None
    } else {
        let mut best = 0;
        for c in 1..scores.len() {
            if scores[c] > scores[best] {
                best = c;
            }
        }
        Some(best)
    };
    DocumentScore {
        scores,
        predicted,
        known_tokens: known,
    }
}

/// CV-LR feature map: `f(w) = log s(w|c_pos) − log s(w|c_neg)`.
pub fn cv_lr_feature_map(
    model: &EmbeddingModel,
    pos_class: usize,
    neg_class: usize,
) -> Result<FeatureMap> {
    if pos_class == neg_class {
        return Err(Error::SameClass);
    }
    let pos = log_class_word_softmax(model, pos_class);
    let neg = log_class_word_softmax(model, neg_class);
    Ok(FeatureMap {
        values: pos.iter().zip(&neg).map(|(p, n)| p - n).collect(),
        kind: FeatureKind::CvLr,
    })
}

/// norm CV-LR feature map: cosine difference between the two class vectors
/// and each word vector, all rows l2-normalized first.
pub fn norm_cv_lr_feature_map(
    model: &EmbeddingModel,
    pos_class: usize,
    neg_class: usize,
) -> Result<FeatureMap> {
    if pos_class == neg_class {
        return Err(Error::SameClass);
    }
    let normalized = |row: usize| -> Result<Vec<f64>> {
        let v = model.input_row(row);
        let norm = dot_f64(v, v).sqrt();
        if norm == 0.0 {
            return Err(Error::ZeroNorm(row));
        }
        Ok(v.iter().map(|x| *x as f64 / norm).collect())
    };
    let pos = normalized(model.class_row(pos_class))?;
    let neg = normalized(model.class_row(neg_class))?;
    let mut values = Vec::with_capacity(model.word_count());
    for w in 0..model.word_count() {
        let word = normalized(w)?;
        let sim_pos: f64 = pos.iter().zip(&word).map(|(a, b)| a * b).sum();
        let sim_neg: f64 = neg.iter().zip(&word).map(|(a, b)| a * b).sum();
        values.push(sim_pos - sim_neg);
    }
    Ok(FeatureMap {
        values,
        kind: FeatureKind::NormCvLr,
    })
}

/// Bag-of-words features weighted by a feature map: binary presence times
/// `f(w)`. Repeated tokens contribute once; unknown tokens are ignored.
pub fn featurize_document(
    tokens: &[String],
    map: &FeatureMap,
    vocab: &crate::Vocabulary,
) -> SparseVector {
    let mut present = vec![false; vocab.len()];
    for token in tokens {
        if let Some(id) = vocab.id(token) {
            present[id] = true;
        }
    }
    SparseVector::from_pairs(
        vocab.len(),
        present
            .iter()
            .enumerate()
            .filter(|&(_, p)| *p)
            .map(|(id, _)| (id, map.values[id]))
            .collect(),
    )
}
