//! Bigram phrase detection and corpus annotation.
//!
//! Frequent, coherent adjacent pairs are joined into single underscore
//! tokens. Running two sequential passes produces up-to-4-gram phrases.

use std::collections::HashMap;

/// Scored bigrams that passed the selection threshold.
#[derive(Debug, Clone, Default)]
pub struct PhraseTable {
    entries: HashMap<(String, String), f64>,
    pub threshold: f64,
    pub delta: u64,
}

impl PhraseTable {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn score(&self, left: &str, right: &str) -> Option<f64> {
        self.entries
            .get(&(left.to_owned(), right.to_owned()))
            .copied()
    }

    /// Kept phrases with their scores, highest score first.
    pub fn entries(&self) -> Vec<(String, f64)> {
        let mut out: Vec<(String, f64)> = self
            .entries
            .iter()
            .map(|((l, r), score)| (format!("{l}_{r}"), *score))
            .collect();
        out.sort_by(|a, b| b.1.total_cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
        out
    }

    pub fn contains(&self, left: &str, right: &str) -> bool {
        self.entries
            .contains_key(&(left.to_owned(), right.to_owned()))
    }

    #[cfg(test)]
    fn insert(&mut self, left: &str, right: &str, score: f64) {
        self.entries
            .insert((left.to_owned(), right.to_owned()), score);
    }
}

/// Score adjacent pairs by discounted pointwise co-occurrence:
/// `(count(ab) - delta) * total_tokens / (count(a) * count(b))`.
/// Pairs with pair count >= `min_count` and score >= `threshold` are kept.
pub fn learn_phrases(
    documents: &[Vec<String>],
    min_count: u64,
    threshold: f64,
    delta: u64,
) -> PhraseTable {
    let mut unigrams: HashMap<&str, u64> = HashMap::new();
    let mut bigrams: HashMap<(&str, &str), u64> = HashMap::new();
    let mut total: u64 = 0;
    for doc in documents {
        for token in doc {
            *unigrams.entry(token).or_insert(0) += 1;
            total += 1;
        }
        for pair in doc.windows(2) {
            *bigrams.entry((&pair[0], &pair[1])).or_insert(0) += 1;
        }
    }

    let mut entries = HashMap::new();
    for ((left, right), pair_count) in bigrams {
        if pair_count < min_count {
            continue;
        }
        let discounted = pair_count.saturating_sub(delta) as f64;
        let score = discounted * total as f64 / (unigrams[left] as f64 * unigrams[right] as f64);
        if score >= threshold {
            entries.insert((left.to_owned(), right.to_owned()), score);
        }
    }
    PhraseTable {
        entries,
        threshold,
        delta,
    }
}

/// Greedy left-to-right join: a pair in the table becomes one token joined
/// by an underscore and the scan advances past both members.
pub fn annotate_document(tokens: &[String], table: &PhraseTable) -> Vec<String> {
    let mut out = Vec::with_capacity(tokens.len());
    let mut i = 0;
    while i < tokens.len() {
        if i + 1 < tokens.len() && table.contains(&tokens[i], &tokens[i + 1]) {
            out.push(format!("{}_{}", tokens[i], tokens[i + 1]));
            i += 2;
        } else {
            out.push(tokens[i].clone());
            i += 1;
        }
    }
    out
}

pub fn annotate_corpus(documents: &[Vec<String>], table: &PhraseTable) -> Vec<Vec<String>> {
    documents
        .iter()
        .map(|doc| annotate_document(doc, table))
        .collect()
}
