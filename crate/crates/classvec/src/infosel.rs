//! Information-theoretic vocabulary analysis: realized and expected
//! information of the class given each word, computed from class-word
//! posteriors and document frequencies.

use std::io::Write;

use crate::corpus::LabeledCorpus;
use crate::embed::EmbeddingModel;
use crate::{Error, Result};

/// Per-word information summary.
#[derive(Debug, Clone)]
pub struct InfoRecord {
    pub word: String,
    /// Document-frequency fraction p(w).
    pub doc_freq_fraction: f64,
    /// Realized information `H(C) − H(C|w)` in bits.
    pub realized: f64,
    /// Per-word expected information `p(w)·realized` in bits.
    pub expected: f64,
    pub class_posterior: Vec<f64>,
}

/// Softmax over classes for one word:
/// `p(c|w) = exp(v_c·v_w) / Σ_j exp(v_cj·v_w)`. With `normalized`, every
/// vector is l2-normalized before the dot products.
pub fn class_posterior(
    model: &EmbeddingModel,
    word: usize,
    normalized: bool,
) -> Result<Vec<f64>> {
    let to_f64 = |row: usize| -> Result<Vec<f64>> {
        let v: Vec<f64> = model.input_row(row).iter().map(|x| *x as f64).collect();
        if normalized {
            let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
            if norm == 0.0 {
                return Err(Error::ZeroNorm(row));
            }
            Ok(v.into_iter().map(|x| x / norm).collect())
        } else {
            Ok(v)
        }
    };
    let word_vec = to_f64(word)?;
    let dots: Vec<f64> = (0..model.class_count())
        .map(|c| {
            let class_vec = to_f64(model.class_row(c))?;
            Ok(class_vec.iter().zip(&word_vec).map(|(a, b)| a * b).sum())
        })
        .collect::<Result<_>>()?;
    let max = dots.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let exps: Vec<f64> = dots.iter().map(|d| (d - max).exp()).collect();
    let z: f64 = exps.iter().sum();
    Ok(exps.into_iter().map(|e| e / z).collect())
}

/// `I(C; w=w_i) = log₂(N_c) − H(posterior)` in bits, with `0·log 0 = 0`.
/// H(C) is taken as maximal regardless of class imbalance.
pub fn realized_information(posterior: &[f64]) -> Result<f64> {
    if posterior.iter().any(|&p| p < 0.0) {
        return Err(Error::NegativePosterior);
    }
    let entropy: f64 = posterior
        .iter()
        .filter(|&&p| p > 0.0)
        .map(|&p| -p * p.log2())
        .sum();
    Ok((posterior.len() as f64).log2() - entropy)
}

/// Per-word expected information: document-frequency fraction times
/// realized information.
pub fn expected_information(realized: f64, doc_freq_fraction: f64) -> f64 {
    doc_freq_fraction * realized
}

/// Information records for the `top_k` most frequent vocabulary words
/// (clipped to the vocabulary size), in frequency order.
pub fn info_table(
    model: &EmbeddingModel,
    corpus: &LabeledCorpus,
    top_k: usize,
    normalized: bool,
) -> Result<Vec<InfoRecord>> {
    let k = top_k.min(model.word_count());
    let num_docs = corpus.documents.len() as f64;
    // ids are assigned by descending frequency, so the top-k are 0..k
    (0..k)
        .map(|word| {
            let posterior = class_posterior(model, word, normalized)?;
            let realized = realized_information(&posterior)?;
            let p_w = model.vocab.doc_freq(word) as f64 / num_docs;
            Ok(InfoRecord {
                word: model.vocab.token(word).to_owned(),
                doc_freq_fraction: p_w,
                realized,
                expected: expected_information(realized, p_w),
                class_posterior: posterior,
            })
        })
        .collect()
}

/// Corpus-level expected information: the sum of per-word contributions.
pub fn total_expected_information(records: &[InfoRecord]) -> f64 {
    records.iter().map(|r| r.expected).sum()
}

/// CSV export: `word,doc_freq,realized_bits,expected_bits`.
pub fn write_info_csv(records: &[InfoRecord], mut out: impl Write) -> std::io::Result<()> {
    writeln!(out, "word,doc_freq,realized_bits,expected_bits")?;
    for r in records {
        writeln!(
            out,
            "{},{},{},{}",
            r.word, r.doc_freq_fraction, r.realized, r.expected
        )?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{build_vocabulary, Document};
    use crate::embed::{init_model, TrainConfig};

    fn fixture(words: &[(&str, u64)], dim: usize) -> (EmbeddingModel, LabeledCorpus) {
        let text: Vec<String> = words
            .iter()
            .flat_map(|(w, n)| std::iter::repeat(w.to_string()).take(*n as usize))
            .collect();
        let corpus = LabeledCorpus::from_documents(vec![
            Document {
                tokens: text,
                label: "pos".into(),
            },
            Document {
                tokens: vec![],
                label: "neg".into(),
            },
        ]);
        let vocab = build_vocabulary(&corpus, 1).unwrap();
        let cfg = TrainConfig {
            dim,
            negatives: 2,
            hs: false,
            seed: 9,
            ..TrainConfig::default()
        };
        let model = init_model(vocab, vec!["pos".into(), "neg".into()], &cfg).unwrap();
        (model, corpus)
    }

    fn set_row(model: &mut EmbeddingModel, row: usize, values: &[f32]) {
        let dim = model.dim;
        model.input[row * dim..(row + 1) * dim].copy_from_slice(values);
    }

    #[test]
    fn posterior_uniform_when_dots_equal() {
        let (mut model, _) = fixture(&[("a", 2), ("b", 1)], 2);
        set_row(&mut model, 0, &[1.0, 0.0]);
        let pos_row = model.class_row(0);
        let neg_row = model.class_row(1);
        set_row(&mut model, pos_row, &[0.0, 1.0]);
        set_row(&mut model, neg_row, &[0.0, -1.0]);
        // word a is orthogonal to both class vectors
        let p = class_posterior(&model, 0, false).unwrap();
        assert!((p[0] - 0.5).abs() < 1e-12);
        assert!((p[1] - 0.5).abs() < 1e-12);
    }

    #[test]
    fn posterior_ln3_example() {
        // dots (ln 3, 0) -> (0.75, 0.25)
        let (mut model, _) = fixture(&[("a", 2), ("b", 1)], 2);
        set_row(&mut model, 0, &[(3.0f32).ln(), 0.0]);
        let pos_row = model.class_row(0);
        let neg_row = model.class_row(1);
        set_row(&mut model, pos_row, &[1.0, 0.0]);
        set_row(&mut model, neg_row, &[0.0, 0.0]);
        let p = class_posterior(&model, 0, false).unwrap();
        assert!((p[0] - 0.75).abs() < 1e-6);
        assert!((p[1] - 0.25).abs() < 1e-6);
    }

    #[test]
    fn posterior_sums_to_one() {
        let (model, _) = fixture(&[("a", 3), ("b", 2), ("c", 1)], 7);
        for w in 0..3 {
            for normalized in [false, true] {
                let p = class_posterior(&model, w, normalized).unwrap();
                assert!((p.iter().sum::<f64>() - 1.0).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn normalized_posterior_invariant_under_rescaling() {
        let (mut model, _) = fixture(&[("a", 2), ("b", 1)], 4);
        let before = class_posterior(&model, 0, true).unwrap();
        let dim = model.dim;
        for v in model.input[..dim].iter_mut() {
            *v *= 7.5;
        }
        let after = class_posterior(&model, 0, true).unwrap();
        for (a, b) in before.iter().zip(&after) {
            assert!((a - b).abs() < 1e-6);
        }
    }

    #[test]
    fn normalized_posterior_rejects_zero_norm() {
        let (mut model, _) = fixture(&[("a", 2), ("b", 1)], 4);
        let dim = model.dim;
        model.input[..dim].fill(0.0);
        assert!(matches!(
            class_posterior(&model, 0, true),
            Err(Error::ZeroNorm(0))
        ));
        assert!(class_posterior(&model, 0, false).is_ok());
    }

    #[test]
    fn realized_information_corners() {
        assert!((realized_information(&[1.0, 0.0]).unwrap() - 1.0).abs() < 1e-12);
        assert!(realized_information(&[0.5, 0.5]).unwrap().abs() < 1e-12);
        let r = realized_information(&[0.75, 0.25]).unwrap();
        assert!((r - 0.18872187554086717).abs() < 1e-12);
        assert!(realized_information(&[-0.1, 1.1]).is_err());
    }

    #[test]
    fn realized_information_permutation_invariant() {
        let a = realized_information(&[0.7, 0.2, 0.1]).unwrap();
        let b = realized_information(&[0.1, 0.7, 0.2]).unwrap();
        assert!((a - b).abs() < 1e-12);
    }

    #[test]
    fn expected_information_products() {
        assert_eq!(expected_information(0.5, 0.0), 0.0);
        assert_eq!(expected_information(1.0, 1.0), 1.0);
        let r = realized_information(&[0.75, 0.25]).unwrap();
        assert!((expected_information(r, 0.5) - r / 2.0).abs() < 1e-12);
    }

    #[test]
    fn info_table_clips_and_orders_by_frequency() {
        let (model, corpus) = fixture(&[("a", 3), ("b", 2), ("c", 1)], 4);
        assert!(info_table(&model, &corpus, 0, false).unwrap().is_empty());
        let records = info_table(&model, &corpus, 100, false).unwrap();
        assert_eq!(records.len(), 3);
        assert_eq!(records[0].word, "a");
        for r in &records {
            assert!(r.expected <= r.realized + 1e-15);
            assert!((r.class_posterior.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn csv_export_shape() {
        let (model, corpus) = fixture(&[("a", 3), ("b", 2)], 4);
        let records = info_table(&model, &corpus, 2, false).unwrap();
        let mut buf = Vec::new();
        write_info_csv(&records, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 3);
        assert_eq!(lines[0], "word,doc_freq,realized_bits,expected_bits");
        assert!(lines[1].starts_with("a,"));
    }
}
