//! Corpus ingestion, tokenization, vocabulary construction, and subsampling.

use std::collections::{HashMap, HashSet};
use std::fs::File;
use std::io::{BufRead, BufReader};
use std::path::Path;

use crate::{Error, Result};

/// Punctuation replaced by whitespace during tokenization. Apostrophes are
/// kept so tokens like "don't" survive.
const PUNCTUATION: &[char] = &['.', ',', '!', '?', ';', ':', '"', '(', ')'];

/// Lowercase the text, strip the fixed punctuation set, and split on
/// whitespace. Underscores are preserved so phrase tokens round-trip.
pub fn tokenize(text: &str) -> Vec<String> {
    text.to_lowercase()
        .split(|c: char| c.is_whitespace() || PUNCTUATION.contains(&c))
        .filter(|t| !t.is_empty())
        .map(str::to_owned)
        .collect()
}

/// A single tokenized document with its class label.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Document {
    pub tokens: Vec<String>,
    pub label: String,
}

/// A set of labeled documents plus per-class token totals.
#[derive(Debug, Clone)]
pub struct LabeledCorpus {
    pub documents: Vec<Document>,
    /// Distinct class names in first-appearance order.
    pub classes: Vec<String>,
    /// Total token count per class, aligned with `classes`.
    pub per_class_token_counts: Vec<u64>,
}

impl LabeledCorpus {
    pub fn from_documents(documents: Vec<Document>) -> Self {
        let mut classes: Vec<String> = Vec::new();
        let mut counts: Vec<u64> = Vec::new();
        for doc in &documents {
            let idx = match classes.iter().position(|c| c == &doc.label) {
                Some(i) => i,
                None => {
                    classes.push(doc.label.clone());
                    counts.push(0);
                    classes.len() - 1
                }
            };
            counts[idx] += doc.tokens.len() as u64;
        }
        LabeledCorpus {
            documents,
            classes,
            per_class_token_counts: counts,
        }
    }

    pub fn class_index(&self, label: &str) -> Option<usize> {
        self.classes.iter().position(|c| c == label)
    }

    pub fn total_tokens(&self) -> u64 {
        self.per_class_token_counts.iter().sum()
    }

    /// Class with the most documents; ties go to the earlier class.
    pub fn majority_class(&self) -> Option<&str> {
        let mut doc_counts = vec![0usize; self.classes.len()];
        for doc in &self.documents {
            if let Some(i) = self.class_index(&doc.label) {
                doc_counts[i] += 1;
            }
        }
        doc_counts
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.cmp(b.1).then(b.0.cmp(&a.0)))
            .map(|(i, _)| self.classes[i].as_str())
    }
}

/// Load a corpus file: UTF-8, one `<label>\t<text>` document per line,
/// blank lines skipped.
pub fn load_labeled_corpus(path: impl AsRef<Path>) -> Result<LabeledCorpus> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    let reader = BufReader::new(file);
    let mut documents = Vec::new();
    for (lineno, line) in reader.lines().enumerate() {
        let line = line.map_err(|e| Error::io(path, e))?;
        if line.trim().is_empty() {
            continue;
        }
        let (label, text) = line
            .split_once('\t')
            .ok_or(Error::MissingTab { line: lineno + 1 })?;
        documents.push(Document {
            tokens: tokenize(text),
            label: label.to_owned(),
        });
    }
    Ok(LabeledCorpus::from_documents(documents))
}

/// Token-to-id map with corpus and document frequencies.
///
/// Ids are dense in `[0, T)` and assigned by descending corpus frequency,
/// ties broken lexicographically, so id 0 is the most frequent token.
#[derive(Debug, Clone, PartialEq)]
pub struct Vocabulary {
    tokens: Vec<String>,
    index: HashMap<String, usize>,
    counts: Vec<u64>,
    doc_freqs: Vec<u64>,
    /// Sum of retained token counts.
    pub total_tokens: u64,
}

impl Vocabulary {
    /// Reassemble a vocabulary from persisted parts. Tokens must already be
    /// in id order with their counts and document frequencies aligned.
    pub(crate) fn from_parts(tokens: Vec<String>, counts: Vec<u64>, doc_freqs: Vec<u64>) -> Self {
        let index = tokens
            .iter()
            .enumerate()
            .map(|(id, t)| (t.clone(), id))
            .collect();
        let total_tokens = counts.iter().sum();
        Vocabulary {
            tokens,
            index,
            counts,
            doc_freqs,
            total_tokens,
        }
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    pub fn id(&self, token: &str) -> Option<usize> {
        self.index.get(token).copied()
    }

    pub fn token(&self, id: usize) -> &str {
        &self.tokens[id]
    }

    pub fn count(&self, id: usize) -> u64 {
        self.counts[id]
    }

    pub fn doc_freq(&self, id: usize) -> u64 {
        self.doc_freqs[id]
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    /// Relative corpus frequency of a retained token.
    pub fn rel_freq(&self, id: usize) -> f64 {
        self.counts[id] as f64 / self.total_tokens as f64
    }
}

/// Build a vocabulary keeping tokens with corpus frequency >= `min_count`.
pub fn build_vocabulary(corpus: &LabeledCorpus, min_count: u64) -> Result<Vocabulary> {
    let mut counts: HashMap<&str, u64> = HashMap::new();
    let mut doc_freqs: HashMap<&str, u64> = HashMap::new();
    for doc in &corpus.documents {
        let mut seen: HashSet<&str> = HashSet::new();
        for token in &doc.tokens {
            *counts.entry(token).or_insert(0) += 1;
            if seen.insert(token) {
                *doc_freqs.entry(token).or_insert(0) += 1;
            }
        }
    }

    let mut retained: Vec<(&str, u64)> = counts
        .into_iter()
        .filter(|&(_, c)| c >= min_count)
        .collect();
    if retained.is_empty() {
        return Err(Error::EmptyVocabulary { min_count });
    }
    retained.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(b.0)));

    let mut tokens = Vec::with_capacity(retained.len());
    let mut index = HashMap::with_capacity(retained.len());
    let mut count_vec = Vec::with_capacity(retained.len());
    let mut df_vec = Vec::with_capacity(retained.len());
    let mut total = 0u64;
    for (id, (token, count)) in retained.into_iter().enumerate() {
        index.insert(token.to_owned(), id);
        df_vec.push(doc_freqs[token]);
        tokens.push(token.to_owned());
        count_vec.push(count);
        total += count;
    }
    Ok(Vocabulary {
        tokens,
        index,
        counts: count_vec,
        doc_freqs: df_vec,
        total_tokens: total,
    })
}

/// Probability of keeping a token during training, given its relative
/// corpus frequency. `sample = 0` disables subsampling.
pub fn subsample_keep_prob(rel_freq: f64, sample: f64) -> Result<f64> {
    if rel_freq <= 0.0 || rel_freq > 1.0 {
        return Err(Error::ZeroFrequency);
    }
    if sample == 0.0 {
        return Ok(1.0);
    }
    Ok(((sample / rel_freq).sqrt() + sample / rel_freq).min(1.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::io::Write;

    fn corpus_from(lines: &[(&str, &str)]) -> LabeledCorpus {
        LabeledCorpus::from_documents(
            lines
                .iter()
                .map(|(label, text)| Document {
                    tokens: tokenize(text),
                    label: label.to_string(),
                })
                .collect(),
        )
    }

    #[test]
    fn tokenize_strips_punctuation_and_lowercases() {
        assert_eq!(tokenize("Great product!"), vec!["great", "product"]);
        assert_eq!(tokenize(""), Vec::<String>::new());
        assert_eq!(
            tokenize("very_pleased, really"),
            vec!["very_pleased", "really"]
        );
        // apostrophes survive
        assert_eq!(tokenize("don't stop"), vec!["don't", "stop"]);
    }

    #[test]
    fn load_corpus_parses_lines_and_orders_classes() {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        writeln!(f, "pos\tgreat buy").unwrap();
        writeln!(f).unwrap();
        writeln!(f, "neg\tbad one").unwrap();
        let corpus = load_labeled_corpus(f.path()).unwrap();
        assert_eq!(corpus.documents.len(), 2);
        assert_eq!(corpus.documents[0].tokens, vec!["great", "buy"]);
        assert_eq!(corpus.documents[0].label, "pos");
        assert_eq!(corpus.classes, vec!["pos", "neg"]);
    }

    #[test]
    fn load_corpus_reports_missing_tab_with_line_number() {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        writeln!(f, "pos\tfine").unwrap();
        writeln!(f, "great buy").unwrap();
        match load_labeled_corpus(f.path()) {
            Err(Error::MissingTab { line }) => assert_eq!(line, 2),
            other => panic!("expected MissingTab, got {other:?}"),
        }
    }

    #[test]
    fn vocabulary_threshold_and_ordering() {
        // a:6, b:5, c:4
        let corpus = corpus_from(&[("x", "a a a a a a b b b"), ("y", "b b c c c c")]);
        let vocab = build_vocabulary(&corpus, 5).unwrap();
        assert_eq!(vocab.len(), 2);
        assert_eq!(vocab.id("a"), Some(0));
        assert_eq!(vocab.id("b"), Some(1));
        assert_eq!(vocab.id("c"), None);
        assert_eq!(vocab.count(0), 6);
        assert_eq!(vocab.doc_freq(0), 1);
        assert_eq!(vocab.doc_freq(1), 2);
    }

    #[test]
    fn vocabulary_ties_break_lexicographically() {
        let corpus = corpus_from(&[("x", "b b b b b a a a a a")]);
        let vocab = build_vocabulary(&corpus, 5).unwrap();
        assert_eq!(vocab.id("a"), Some(0));
        assert_eq!(vocab.id("b"), Some(1));
    }

    #[test]
    fn vocabulary_empty_is_an_error() {
        let corpus = corpus_from(&[("x", "a b c")]);
        assert!(matches!(
            build_vocabulary(&corpus, 5),
            Err(Error::EmptyVocabulary { min_count: 5 })
        ));
    }

    #[test]
    fn per_class_counts_sum_to_total() {
        let corpus = corpus_from(&[("pos", "a b c"), ("neg", "d e"), ("pos", "f")]);
        assert_eq!(corpus.per_class_token_counts, vec![4, 2]);
        assert_eq!(
            corpus.total_tokens(),
            corpus.documents.iter().map(|d| d.tokens.len() as u64).sum()
        );
    }

    #[test]
    fn subsample_examples() {
        let s = 1e-3;
        assert_eq!(subsample_keep_prob(s, s).unwrap(), 1.0);
        assert!((subsample_keep_prob(4.0 * s, s).unwrap() - 0.75).abs() < 1e-12);
        assert_eq!(subsample_keep_prob(0.9, 0.0).unwrap(), 1.0);
        assert!(subsample_keep_prob(0.0, s).is_err());
    }

    proptest! {
        #[test]
        fn tokenize_idempotent(text in "\\PC{0,120}") {
            let once = tokenize(&text);
            let again = tokenize(&once.join(" "));
            prop_assert_eq!(once, again);
        }

        #[test]
        fn subsample_in_unit_interval_and_monotone(
            a in 1e-9f64..1.0, b in 1e-9f64..1.0, s in 0f64..0.1
        ) {
            let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
            let p_lo = subsample_keep_prob(lo, s).unwrap();
            let p_hi = subsample_keep_prob(hi, s).unwrap();
            prop_assert!(p_lo > 0.0 && p_lo <= 1.0);
            prop_assert!(p_hi > 0.0 && p_hi <= 1.0);
            prop_assert!(p_lo >= p_hi);
        }

        #[test]
        fn vocabulary_ids_are_dense(words in proptest::collection::vec("[a-e]", 1..60)) {
            let text = words.join(" ");
            let corpus = corpus_from(&[("x", &text)]);
            if let Ok(vocab) = build_vocabulary(&corpus, 1) {
                let mut seen = vec![false; vocab.len()];
                for id in (0..vocab.len()).map(|i| vocab.id(vocab.token(i)).unwrap()) {
                    prop_assert!(!seen[id]);
                    seen[id] = true;
                }
                prop_assert!(seen.iter().all(|&s| s));
            }
        }
    }
}
