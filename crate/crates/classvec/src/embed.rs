//! Joint training of word vectors and class vectors by skip-gram with
//! negative sampling and/or hierarchical softmax.
//!
//! The input matrix holds one row per vocabulary word followed by one row
//! per class. Class rows are trained as pseudo-center words against every
//! surviving token of their documents; they never appear in the Huffman
//! tree, the noise table, or as negative samples.

use std::cmp::Reverse;
use std::collections::BinaryHeap;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::LazyLock;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::corpus::{subsample_keep_prob, LabeledCorpus, Vocabulary};
use crate::{Error, Result};

const SIGMOID_TABLE_SIZE: usize = 1000;
const MAX_SIGMOID: f32 = 6.0;

static SIGMOID_TABLE: LazyLock<[f32; SIGMOID_TABLE_SIZE + 1]> = LazyLock::new(|| {
    let mut table = [0.0f32; SIGMOID_TABLE_SIZE + 1];
    for (i, slot) in table.iter_mut().enumerate() {
        let x = (i as f64 / SIGMOID_TABLE_SIZE as f64 * 2.0 - 1.0) * MAX_SIGMOID as f64;
        *slot = (1.0 / (1.0 + (-x).exp())) as f32;
    }
    table
});

/// Table-interpolated sigmoid used in the training fast path.
#[inline]
pub fn sigmoid_fast(x: f32) -> f32 {
    if x >= MAX_SIGMOID {
        return *SIGMOID_TABLE.last().unwrap();
    }
    if x <= -MAX_SIGMOID {
        return SIGMOID_TABLE[0];
    }
    let pos = (x + MAX_SIGMOID) / (2.0 * MAX_SIGMOID) * SIGMOID_TABLE_SIZE as f32;
    let i = pos as usize;
    let frac = pos - i as f32;
    SIGMOID_TABLE[i] * (1.0 - frac) + SIGMOID_TABLE[i + 1] * frac
}

/// Exact sigmoid, used in test and diagnostic paths.
#[inline]
pub fn sigmoid_exact(x: f64) -> f64 {
    1.0 / (1.0 + (-x).exp())
}

/// Training hyperparameters.
#[derive(Debug, Clone)]
pub struct TrainConfig {
    pub dim: usize,
    pub window: usize,
    pub negatives: usize,
    pub sample: f64,
    pub epochs: usize,
    pub lambda: f32,
    pub hs: bool,
    pub initial_lr: f32,
    pub min_lr: f32,
    pub seed: u64,
    pub workers: usize,
}

impl Default for TrainConfig {
    fn default() -> Self {
        TrainConfig {
            dim: 100,
            window: 10,
            negatives: 5,
            sample: 1e-3,
            epochs: 40,
            lambda: 1.0,
            hs: true,
            initial_lr: 0.025,
            min_lr: 0.025 * 1e-4,
            seed: 1,
            workers: 1,
        }
    }
}

impl TrainConfig {
    pub fn validate(&self) -> Result<()> {
        if self.dim == 0 {
            return Err(Error::BadConfig("dim must be at least 1".into()));
        }
        if self.window == 0 {
            return Err(Error::BadConfig("window must be at least 1".into()));
        }
        if !self.hs && self.negatives == 0 {
            return Err(Error::BadConfig(
                "need hierarchical softmax or at least one negative sample".into(),
            ));
        }
        if self.lambda < 0.0 {
            return Err(Error::BadConfig("lambda must be non-negative".into()));
        }
        if !(self.initial_lr > self.min_lr && self.min_lr >= 0.0) {
            return Err(Error::BadConfig(
                "need initial_lr > min_lr >= 0".into(),
            ));
        }
        if self.workers == 0 {
            return Err(Error::BadConfig("workers must be at least 1".into()));
        }
        Ok(())
    }
}

/// Huffman code and inner-node path per vocabulary word.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HuffmanCoding {
    codes: Vec<Vec<bool>>,
    paths: Vec<Vec<usize>>,
}

impl HuffmanCoding {
    pub fn code(&self, word: usize) -> &[bool] {
        &self.codes[word]
    }

    /// Inner-node ids (indices into the hierarchical-softmax output matrix)
    /// from the root down to the word's parent.
    pub fn path(&self, word: usize) -> &[usize] {
        &self.paths[word]
    }

    pub fn len(&self) -> usize {
        self.codes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.codes.is_empty()
    }

    /// Number of inner nodes, i.e. rows of the hierarchical-softmax matrix.
    pub fn inner_count(&self) -> usize {
        self.codes.len().saturating_sub(1).max(1)
    }
}

/// Standard Huffman construction over word frequencies. Merges pick the
/// smallest (weight, node id) pair first; the first popped node becomes the
/// left child with code bit 0.
pub fn build_huffman(vocab: &Vocabulary) -> Result<HuffmanCoding> {
    let t = vocab.len();
    if t == 0 {
        return Err(Error::EmptyVocabulary { min_count: 0 });
    }
    if t == 1 {
        return Ok(HuffmanCoding {
            codes: vec![vec![false]],
            paths: vec![vec![0]],
        });
    }

    // node ids: 0..t leaves, t..2t-1 internal
    let mut parent = vec![usize::MAX; 2 * t - 1];
    let mut bit = vec![false; 2 * t - 1];
    let mut heap: BinaryHeap<Reverse<(u64, usize)>> = (0..t)
        .map(|id| Reverse((vocab.count(id), id)))
        .collect();
    let mut next_id = t;
    while heap.len() > 1 {
        let Reverse((w_left, left)) = heap.pop().unwrap();
        let Reverse((w_right, right)) = heap.pop().unwrap();
        parent[left] = next_id;
        bit[left] = false;
        parent[right] = next_id;
        bit[right] = true;
        heap.push(Reverse((w_left + w_right, next_id)));
        next_id += 1;
    }

    let mut codes = Vec::with_capacity(t);
    let mut paths = Vec::with_capacity(t);
    for leaf in 0..t {
        let mut code = Vec::new();
        let mut path = Vec::new();
        let mut node = leaf;
        while parent[node] != usize::MAX {
            code.push(bit[node]);
            path.push(parent[node] - t);
            node = parent[node];
        }
        code.reverse();
        path.reverse();
        codes.push(code);
        paths.push(path);
    }
    Ok(HuffmanCoding { codes, paths })
}

/// Unigram noise distribution for negative sampling, `P_n(w) ∝ count^power`.
#[derive(Debug, Clone, PartialEq)]
pub struct NoiseTable {
    cumulative: Vec<f64>,
}

pub fn build_noise_table(vocab: &Vocabulary, power: f64) -> NoiseTable {
    let weights: Vec<f64> = (0..vocab.len())
        .map(|id| (vocab.count(id) as f64).powf(power))
        .collect();
    let total: f64 = weights.iter().sum();
    let mut cumulative = Vec::with_capacity(weights.len());
    let mut acc = 0.0;
    for w in &weights {
        acc += w / total;
        cumulative.push(acc);
    }
    if let Some(last) = cumulative.last_mut() {
        *last = 1.0;
    }
    NoiseTable { cumulative }
}

impl NoiseTable {
    pub fn len(&self) -> usize {
        self.cumulative.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cumulative.is_empty()
    }

    pub fn prob(&self, id: usize) -> f64 {
        let prev = if id == 0 { 0.0 } else { self.cumulative[id - 1] };
        self.cumulative[id] - prev
    }

    pub fn sample(&self, rng: &mut impl Rng) -> usize {
        let u: f64 = rng.gen();
        self.cumulative.partition_point(|&c| c <= u).min(self.cumulative.len() - 1)
    }
}

/// Word vectors, class vectors, and output-side parameters.
#[derive(Debug, Clone)]
pub struct EmbeddingModel {
    pub vocab: Vocabulary,
    pub classes: Vec<String>,
    pub dim: usize,
    /// `(T + N_c) × dim` row-major; rows `0..T` are words, `T..T+N_c` classes.
    pub input: Vec<f32>,
    /// `T × dim` output vectors for negative sampling.
    pub output_ns: Option<Vec<f32>>,
    /// Inner-node vectors for hierarchical softmax.
    pub output_hs: Option<Vec<f32>>,
    pub huffman: Option<HuffmanCoding>,
    pub noise: Option<NoiseTable>,
}

/// Initialize a model: input rows uniform in `(-0.5/dim, 0.5/dim)` from a
/// seeded generator, output matrices zero, auxiliary tables built per the
/// configured output methods.
pub fn init_model(
    vocab: Vocabulary,
    classes: Vec<String>,
    config: &TrainConfig,
) -> Result<EmbeddingModel> {
    config.validate()?;
    if vocab.is_empty() {
        return Err(Error::EmptyVocabulary { min_count: 0 });
    }
    if classes.len() < 2 {
        return Err(Error::TooFewClasses(classes.len()));
    }
    let t = vocab.len();
    let dim = config.dim;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let half = 0.5 / dim as f32;
    let input: Vec<f32> = (0..(t + classes.len()) * dim)
        .map(|_| rng.gen_range(-half..half))
        .collect();

    let (huffman, output_hs) = if config.hs {
        let coding = build_huffman(&vocab)?;
        let rows = coding.inner_count();
        (Some(coding), Some(vec![0.0; rows * dim]))
    } else {
        (None, None)
    };
    let (noise, output_ns) = if config.negatives > 0 {
        (
            Some(build_noise_table(&vocab, 0.75)),
            Some(vec![0.0; t * dim]),
        )
    } else {
        (None, None)
    };

    Ok(EmbeddingModel {
        vocab,
        classes,
        dim,
        input,
        output_ns,
        output_hs,
        huffman,
        noise,
    })
}

// Raw views over the weight matrices so hogwild workers can update them
// without locks. Overlapping writes between workers are tolerated; the
// single-worker path is deterministic.
#[derive(Clone, Copy)]
struct SharedWeights {
    input: *mut f32,
    output_ns: *mut f32,
    output_hs: *mut f32,
    dim: usize,
}

unsafe impl Send for SharedWeights {}
unsafe impl Sync for SharedWeights {}

impl SharedWeights {
    #[inline]
    unsafe fn row<'a>(ptr: *mut f32, idx: usize, dim: usize) -> &'a mut [f32] {
        std::slice::from_raw_parts_mut(ptr.add(idx * dim), dim)
    }

    fn train_pair_ns(
        &self,
        center_row: usize,
        target: usize,
        lr: f32,
        k: usize,
        noise: &NoiseTable,
        rng: &mut impl Rng,
        grad: &mut [f32],
    ) {
        let dim = self.dim;
        grad.fill(0.0);
        let center = unsafe { Self::row(self.input, center_row, dim) };
        for sample_idx in 0..=k {
            let (word, label) = if sample_idx == 0 {
                (target, 1.0f32)
            } else {
                let mut drawn = noise.sample(rng);
                let mut attempts = 0;
                while drawn == target {
                    attempts += 1;
                    if attempts >= 100 {
                        break;
                    }
                    drawn = noise.sample(rng);
                }
                if drawn == target {
                    continue;
                }
                (drawn, 0.0f32)
            };
            let out = unsafe { Self::row(self.output_ns, word, dim) };
            let dot: f32 = center.iter().zip(out.iter()).map(|(a, b)| a * b).sum();
            let g = (label - sigmoid_fast(dot)) * lr;
            for d in 0..dim {
                grad[d] += g * out[d];
                out[d] += g * center[d];
            }
        }
        for d in 0..dim {
            center[d] += grad[d];
        }
    }

    fn train_pair_hs(
        &self,
        center_row: usize,
        target: usize,
        lr: f32,
        huffman: &HuffmanCoding,
        grad: &mut [f32],
    ) {
        let dim = self.dim;
        grad.fill(0.0);
        let center = unsafe { Self::row(self.input, center_row, dim) };
        for (&node, &bit) in huffman.path(target).iter().zip(huffman.code(target)) {
            let out = unsafe { Self::row(self.output_hs, node, dim) };
            let dot: f32 = center.iter().zip(out.iter()).map(|(a, b)| a * b).sum();
            let label = if bit { 0.0f32 } else { 1.0 };
            let g = (label - sigmoid_fast(dot)) * lr;
            for d in 0..dim {
                grad[d] += g * out[d];
                out[d] += g * center[d];
            }
        }
        for d in 0..dim {
            center[d] += grad[d];
        }
    }

    #[allow(clippy::too_many_arguments)]
    fn train_document(
        &self,
        word_ids: &[u32],
        class_row: usize,
        cfg: &TrainConfig,
        keep: &[f64],
        huffman: Option<&HuffmanCoding>,
        noise: Option<&NoiseTable>,
        lr: f32,
        rng: &mut impl Rng,
        grad: &mut [f32],
    ) {
        let kept: Vec<u32> = word_ids
            .iter()
            .copied()
            .filter(|&w| {
                let p = keep[w as usize];
                p >= 1.0 || rng.gen::<f64>() < p
            })
            .collect();
        for i in 0..kept.len() {
            let center = kept[i] as usize;
            let b = rng.gen_range(1..=cfg.window);
            let lo = i.saturating_sub(b);
            let hi = (i + b).min(kept.len().saturating_sub(1));
            for j in lo..=hi {
                if j == i {
                    continue;
                }
                let target = kept[j] as usize;
                if let Some(noise) = noise {
                    self.train_pair_ns(center, target, lr, cfg.negatives, noise, rng, grad);
                }
                if let Some(huffman) = huffman {
                    self.train_pair_hs(center, target, lr, huffman, grad);
                }
            }
            // class term: the class row co-occurs with every surviving token
            if cfg.lambda > 0.0 {
                let class_lr = lr * cfg.lambda;
                if let Some(noise) = noise {
                    self.train_pair_ns(class_row, center, class_lr, cfg.negatives, noise, rng, grad);
                }
                if let Some(huffman) = huffman {
                    self.train_pair_hs(class_row, center, class_lr, huffman, grad);
                }
            }
        }
    }
}

impl EmbeddingModel {
    pub fn word_count(&self) -> usize {
        self.vocab.len()
    }

    pub fn class_count(&self) -> usize {
        self.classes.len()
    }

    /// Row index of a class vector in the input matrix.
    pub fn class_row(&self, class_idx: usize) -> usize {
        self.vocab.len() + class_idx
    }

    pub fn input_row(&self, row: usize) -> &[f32] {
        &self.input[row * self.dim..(row + 1) * self.dim]
    }

    fn shared(&mut self) -> SharedWeights {
        SharedWeights {
            input: self.input.as_mut_ptr(),
            output_ns: self
                .output_ns
                .as_mut()
                .map(|m| m.as_mut_ptr())
                .unwrap_or(std::ptr::null_mut()),
            output_hs: self
                .output_hs
                .as_mut()
                .map(|m| m.as_mut_ptr())
                .unwrap_or(std::ptr::null_mut()),
            dim: self.dim,
        }
    }

    /// One negative-sampling ascent step for a (center row, target word)
    /// pair with `k` negatives drawn from the noise table.
    pub fn train_pair_ns(
        &mut self,
        center_row: usize,
        target_word: usize,
        lr: f32,
        k: usize,
        rng: &mut impl Rng,
    ) {
        let mut grad = vec![0.0f32; self.dim];
        let noise = self.noise.clone().expect("model built without negative sampling");
        self.shared()
            .train_pair_ns(center_row, target_word, lr, k, &noise, rng, &mut grad);
    }

    /// One hierarchical-softmax ascent step along the target's Huffman path.
    pub fn train_pair_hs(&mut self, center_row: usize, target_word: usize, lr: f32) {
        let mut grad = vec![0.0f32; self.dim];
        let huffman = self
            .huffman
            .clone()
            .expect("model built without hierarchical softmax");
        self.shared()
            .train_pair_hs(center_row, target_word, lr, &huffman, &mut grad);
    }

    /// Exact hierarchical-softmax log-probability of a word given a center
    /// row. Diagnostic path; uses the exact sigmoid in f64.
    pub fn hs_log_prob(&self, center_row: usize, word: usize) -> f64 {
        let huffman = self.huffman.as_ref().expect("no hierarchical softmax");
        let output = self.output_hs.as_ref().unwrap();
        let center = self.input_row(center_row);
        let mut logp = 0.0;
        for (&node, &bit) in huffman.path(word).iter().zip(huffman.code(word)) {
            let out = &output[node * self.dim..(node + 1) * self.dim];
            let dot: f64 = center
                .iter()
                .zip(out.iter())
                .map(|(a, b)| *a as f64 * *b as f64)
                .sum();
            let sign = if bit { -1.0 } else { 1.0 };
            logp += sigmoid_exact(sign * dot).ln();
        }
        logp
    }

    /// Train on a labeled corpus. Single-worker training is deterministic
    /// for a fixed seed; with more workers, updates race hogwild-style.
    pub fn train(&mut self, corpus: &LabeledCorpus, config: &TrainConfig) -> Result<()> {
        config.validate()?;
        let mut class_of: Vec<usize> = Vec::with_capacity(corpus.documents.len());
        for doc in &corpus.documents {
            let idx = self
                .classes
                .iter()
                .position(|c| c == &doc.label)
                .ok_or_else(|| Error::UnknownClass(doc.label.clone()))?;
            class_of.push(idx);
        }
        if config.epochs == 0 {
            return Ok(());
        }

        let docs: Vec<Vec<u32>> = corpus
            .documents
            .iter()
            .map(|doc| {
                doc.tokens
                    .iter()
                    .filter_map(|t| self.vocab.id(t))
                    .map(|id| id as u32)
                    .collect()
            })
            .collect();
        let tokens_per_epoch: u64 = docs.iter().map(|d| d.len() as u64).sum();
        if tokens_per_epoch == 0 {
            return Ok(());
        }
        let planned = tokens_per_epoch * config.epochs as u64;

        let keep: Vec<f64> = (0..self.vocab.len())
            .map(|id| subsample_keep_prob(self.vocab.rel_freq(id), config.sample))
            .collect::<Result<_>>()?;

        let t = self.vocab.len();
        let huffman = self.huffman.clone();
        let noise = self.noise.clone();
        let weights = self.shared();
        let lr_at = |processed: u64| -> f32 {
            let remaining = 1.0 - processed as f64 / planned as f64;
            (config.initial_lr * remaining as f32).max(config.min_lr)
        };

        if config.workers <= 1 {
            let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
            let mut grad = vec![0.0f32; self.dim];
            let mut order: Vec<usize> = (0..docs.len()).collect();
            let mut processed = 0u64;
            for _ in 0..config.epochs {
                order.shuffle(&mut rng);
                for &di in &order {
                    let lr = lr_at(processed);
                    weights.train_document(
                        &docs[di],
                        t + class_of[di],
                        config,
                        &keep,
                        huffman.as_ref(),
                        noise.as_ref(),
                        lr,
                        &mut rng,
                        &mut grad,
                    );
                    processed += docs[di].len() as u64;
                }
            }
        } else {
            let processed = AtomicU64::new(0);
            std::thread::scope(|scope| {
                for worker in 0..config.workers {
                    let docs = &docs;
                    let class_of = &class_of;
                    let keep = &keep;
                    let huffman = huffman.as_ref();
                    let noise = noise.as_ref();
                    let processed = &processed;
                    let dim = self.dim;
                    scope.spawn(move || {
                        let mut rng =
                            ChaCha8Rng::seed_from_u64(config.seed.wrapping_add(worker as u64 + 1));
                        let mut grad = vec![0.0f32; dim];
                        let mut order: Vec<usize> = (worker..docs.len())
                            .step_by(config.workers)
                            .collect();
                        for _ in 0..config.epochs {
                            order.shuffle(&mut rng);
                            for &di in &order {
                                let lr = lr_at(processed.load(Ordering::Relaxed));
                                weights.train_document(
                                    &docs[di],
                                    t + class_of[di],
                                    config,
                                    keep,
                                    huffman,
                                    noise,
                                    lr,
                                    &mut rng,
                                    &mut grad,
                                );
                                processed.fetch_add(docs[di].len() as u64, Ordering::Relaxed);
                            }
                        }
                    });
                }
            });
        }
        Ok(())
    }

    /// Top-n vocabulary words by cosine similarity to the query row. Class
    /// rows and the query itself are excluded from candidates; ties break
    /// lexicographically.
    pub fn nearest_neighbors(&self, row: usize, n: usize) -> Result<Vec<(String, f64)>> {
        let query = self.input_row(row);
        let qnorm = norm(query);
        if qnorm == 0.0 {
            return Err(Error::ZeroNorm(row));
        }
        let mut scored: Vec<(usize, f64)> = (0..self.vocab.len())
            .filter(|&w| w != row)
            .map(|w| {
                let v = self.input_row(w);
                let vnorm = norm(v);
                let sim = if vnorm == 0.0 {
                    0.0
                } else {
                    dot(query, v) / (qnorm * vnorm)
                };
                (w, sim)
            })
            .collect();
        scored.sort_by(|a, b| {
            b.1.partial_cmp(&a.1)
                .unwrap()
                .then_with(|| self.vocab.token(a.0).cmp(self.vocab.token(b.0)))
        });
        Ok(scored
            .into_iter()
            .take(n)
            .map(|(w, sim)| (self.vocab.token(w).to_owned(), sim))
            .collect())
    }

    /// True when no weight is NaN or infinite.
    pub fn all_finite(&self) -> bool {
        let finite = |m: &[f32]| m.iter().all(|v| v.is_finite());
        finite(&self.input)
            && self.output_ns.as_deref().map_or(true, finite)
            && self.output_hs.as_deref().map_or(true, finite)
    }
}

fn dot(a: &[f32], b: &[f32]) -> f64 {
    a.iter().zip(b).map(|(x, y)| *x as f64 * *y as f64).sum()
}

fn norm(v: &[f32]) -> f64 {
    dot(v, v).sqrt()
}

/// Pure f64 forms of the training objectives and their analytic gradients,
/// for gradient checking against finite differences.
pub mod gradcheck {
    use super::sigmoid_exact;

    fn dot(a: &[f64], b: &[f64]) -> f64 {
        a.iter().zip(b).map(|(x, y)| x * y).sum()
    }

    /// Negative-sampling objective:
    /// `log σ(c·t) + Σ_j log σ(−c·n_j)` for fixed negatives.
    pub fn ns_objective(center: &[f64], target: &[f64], negatives: &[Vec<f64>]) -> f64 {
        let mut obj = sigmoid_exact(dot(center, target)).ln();
        for neg in negatives {
            obj += sigmoid_exact(-dot(center, neg)).ln();
        }
        obj
    }

    pub fn ns_grad_center(center: &[f64], target: &[f64], negatives: &[Vec<f64>]) -> Vec<f64> {
        let mut grad = vec![0.0; center.len()];
        let gpos = 1.0 - sigmoid_exact(dot(center, target));
        for (g, t) in grad.iter_mut().zip(target) {
            *g += gpos * t;
        }
        for neg in negatives {
            let gneg = -sigmoid_exact(dot(center, neg));
            for (g, n) in grad.iter_mut().zip(neg) {
                *g += gneg * n;
            }
        }
        grad
    }

    pub fn ns_grad_target(center: &[f64], target: &[f64]) -> Vec<f64> {
        let g = 1.0 - sigmoid_exact(dot(center, target));
        center.iter().map(|c| g * c).collect()
    }

    pub fn ns_grad_negative(center: &[f64], negative: &[f64]) -> Vec<f64> {
        let g = -sigmoid_exact(dot(center, negative));
        center.iter().map(|c| g * c).collect()
    }

    /// Hierarchical-softmax log-probability along one Huffman path.
    pub fn hs_objective(center: &[f64], nodes: &[Vec<f64>], bits: &[bool]) -> f64 {
        nodes
            .iter()
            .zip(bits)
            .map(|(node, &bit)| {
                let sign = if bit { -1.0 } else { 1.0 };
                sigmoid_exact(sign * dot(center, node)).ln()
            })
            .sum()
    }

    pub fn hs_grad_center(center: &[f64], nodes: &[Vec<f64>], bits: &[bool]) -> Vec<f64> {
        let mut grad = vec![0.0; center.len()];
        for (node, &bit) in nodes.iter().zip(bits) {
            let label = if bit { 0.0 } else { 1.0 };
            let g = label - sigmoid_exact(dot(center, node));
            for (gd, nd) in grad.iter_mut().zip(node) {
                *gd += g * nd;
            }
        }
        grad
    }

    pub fn hs_grad_node(center: &[f64], node: &[f64], bit: bool) -> Vec<f64> {
        let label = if bit { 0.0 } else { 1.0 };
        let g = label - sigmoid_exact(dot(center, node));
        center.iter().map(|c| g * c).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{build_vocabulary, tokenize, Document};

    pub(crate) fn vocab_from_counts(counts: &[(&str, u64)]) -> Vocabulary {
        let text: Vec<String> = counts
            .iter()
            .flat_map(|(tok, n)| std::iter::repeat(tok.to_string()).take(*n as usize))
            .collect();
        let corpus = LabeledCorpus::from_documents(vec![
            Document {
                tokens: text,
                label: "a".into(),
            },
            Document {
                tokens: vec![],
                label: "b".into(),
            },
        ]);
        build_vocabulary(&corpus, 1).unwrap()
    }

    fn tiny_config() -> TrainConfig {
        TrainConfig {
            dim: 8,
            window: 2,
            negatives: 3,
            sample: 0.0,
            epochs: 1,
            lambda: 1.0,
            hs: true,
            initial_lr: 0.025,
            min_lr: 0.025e-4,
            seed: 7,
            workers: 1,
        }
    }

    #[test]
    fn sigmoid_table_matches_exact_within_1e3() {
        let mut x = -8.0f32;
        while x <= 8.0 {
            let exact = sigmoid_exact(x as f64) as f32;
            let got = sigmoid_fast(x);
            if x.abs() < MAX_SIGMOID {
                assert!((got - exact).abs() < 1e-3, "x={x}: {got} vs {exact}");
            }
            x += 0.0137;
        }
    }

    #[test]
    fn huffman_hand_example() {
        let vocab = vocab_from_counts(&[("a", 4), ("b", 2), ("c", 1), ("d", 1)]);
        let coding = build_huffman(&vocab).unwrap();
        let lens: Vec<usize> = (0..4).map(|w| coding.code(w).len()).collect();
        assert_eq!(lens, vec![1, 2, 3, 3]);
    }

    #[test]
    fn huffman_two_leaves() {
        let vocab = vocab_from_counts(&[("a", 1), ("b", 1)]);
        let coding = build_huffman(&vocab).unwrap();
        assert_eq!(coding.code(0).len(), 1);
        assert_eq!(coding.code(1).len(), 1);
        assert_ne!(coding.code(0), coding.code(1));
    }

    #[test]
    fn huffman_kraft_equality_exact() {
        let vocab = vocab_from_counts(&[
            ("a", 40),
            ("b", 12),
            ("c", 7),
            ("d", 7),
            ("e", 3),
            ("f", 1),
        ]);
        let coding = build_huffman(&vocab).unwrap();
        let max_len = (0..vocab.len()).map(|w| coding.code(w).len()).max().unwrap();
        let total: u128 = (0..vocab.len())
            .map(|w| 1u128 << (max_len - coding.code(w).len()))
            .sum();
        assert_eq!(total, 1u128 << max_len);
    }

    #[test]
    fn huffman_monotone_code_lengths() {
        let vocab = vocab_from_counts(&[("a", 30), ("b", 20), ("c", 10), ("d", 5), ("e", 2)]);
        let coding = build_huffman(&vocab).unwrap();
        // ids are ordered by descending frequency
        for w in 1..vocab.len() {
            assert!(coding.code(w - 1).len() <= coding.code(w).len());
        }
    }

    #[test]
    fn noise_table_examples() {
        let vocab = vocab_from_counts(&[("a", 1), ("b", 1)]);
        let table = build_noise_table(&vocab, 0.75);
        assert!((table.prob(0) - 0.5).abs() < 1e-12);

        let vocab = vocab_from_counts(&[("a", 16), ("b", 1)]);
        let table = build_noise_table(&vocab, 0.75);
        assert!((table.prob(0) - 8.0 / 9.0).abs() < 1e-12);

        let vocab = vocab_from_counts(&[("a", 100), ("b", 3), ("c", 1)]);
        let table = build_noise_table(&vocab, 0.0);
        for id in 0..3 {
            assert!((table.prob(id) - 1.0 / 3.0).abs() < 1e-12);
        }
    }

    #[test]
    fn noise_probs_sum_to_one_and_cover_vocab() {
        let vocab = vocab_from_counts(&[("a", 9), ("b", 5), ("c", 2), ("d", 1)]);
        let table = build_noise_table(&vocab, 0.75);
        let total: f64 = (0..vocab.len()).map(|id| table.prob(id)).sum();
        assert!((total - 1.0).abs() < 1e-12);
        assert!((0..vocab.len()).all(|id| table.prob(id) > 0.0));
    }

    #[test]
    fn init_is_seeded_and_in_range() {
        let vocab = vocab_from_counts(&[("a", 5), ("b", 4), ("c", 3)]);
        let cfg = TrainConfig {
            dim: 100,
            ..tiny_config()
        };
        let classes = vec!["pos".to_string(), "neg".to_string()];
        let m1 = init_model(vocab.clone(), classes.clone(), &cfg).unwrap();
        let m2 = init_model(vocab, classes, &cfg).unwrap();
        assert_eq!(m1.input, m2.input);
        assert!(m1.input.iter().all(|v| v.abs() < 0.005));
        assert!(m1.output_ns.as_ref().unwrap().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn zero_dim_rejected() {
        let vocab = vocab_from_counts(&[("a", 5), ("b", 4)]);
        let cfg = TrainConfig {
            dim: 0,
            ..tiny_config()
        };
        assert!(init_model(vocab, vec!["p".into(), "n".into()], &cfg).is_err());
    }

    #[test]
    fn hs_distribution_sums_to_one() {
        let vocab = vocab_from_counts(&[("a", 9), ("b", 5), ("c", 2), ("d", 1), ("e", 1)]);
        let cfg = tiny_config();
        let mut model = init_model(vocab, vec!["p".into(), "n".into()], &cfg).unwrap();
        // perturb the inner nodes so the check is not trivially at 0.5
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for v in model.output_hs.as_mut().unwrap().iter_mut() {
            *v = rng.gen_range(-1.0..1.0);
        }
        for center in 0..model.word_count() + model.class_count() {
            let total: f64 = (0..model.word_count())
                .map(|w| model.hs_log_prob(center, w).exp())
                .sum();
            assert!((total - 1.0).abs() < 1e-9, "center {center}: {total}");
        }
    }

    #[test]
    fn hs_all_zero_gives_two_to_minus_code_length() {
        let vocab = vocab_from_counts(&[("a", 4), ("b", 2), ("c", 1), ("d", 1)]);
        let model = init_model(vocab, vec!["p".into(), "n".into()], &tiny_config()).unwrap();
        for w in 0..model.word_count() {
            let len = model.huffman.as_ref().unwrap().code(w).len();
            let p = model.hs_log_prob(0, w).exp();
            assert!((p - 0.5f64.powi(len as i32)).abs() < 1e-12);
        }
    }

    #[test]
    fn ns_update_with_k0_increases_log_likelihood() {
        let vocab = vocab_from_counts(&[("a", 5), ("b", 4), ("c", 3)]);
        let cfg = tiny_config();
        let mut model = init_model(vocab, vec!["p".into(), "n".into()], &cfg).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for v in model.output_ns.as_mut().unwrap().iter_mut() {
            *v = rng.gen_range(-0.5..0.5);
        }
        let objective = |m: &EmbeddingModel| {
            let c = m.input_row(0);
            let t = &m.output_ns.as_ref().unwrap()[m.dim..2 * m.dim];
            let d: f64 = c.iter().zip(t).map(|(a, b)| *a as f64 * *b as f64).sum();
            sigmoid_exact(d).ln()
        };
        let before = objective(&model);
        model.train_pair_ns(0, 1, 0.01, 0, &mut rng);
        assert!(objective(&model) > before);
    }

    #[test]
    fn zero_output_rows_leave_center_unmoved() {
        let vocab = vocab_from_counts(&[("a", 5), ("b", 4), ("c", 3)]);
        let mut model =
            init_model(vocab, vec!["p".into(), "n".into()], &tiny_config()).unwrap();
        let before = model.input_row(0).to_vec();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        // k=0: only positive term; v' is zero so the center gradient is zero
        model.train_pair_ns(0, 1, 0.05, 0, &mut rng);
        assert_eq!(model.input_row(0), &before[..]);
    }

    #[test]
    fn train_rejects_unknown_class() {
        let corpus = LabeledCorpus::from_documents(vec![Document {
            tokens: tokenize("a b a b"),
            label: "mystery".into(),
        }]);
        let vocab = build_vocabulary(&corpus, 1).unwrap();
        let mut model =
            init_model(vocab, vec!["p".into(), "n".into()], &tiny_config()).unwrap();
        assert!(matches!(
            model.train(&corpus, &tiny_config()),
            Err(Error::UnknownClass(_))
        ));
    }

    #[test]
    fn zero_epochs_is_a_noop() {
        let corpus = LabeledCorpus::from_documents(vec![
            Document {
                tokens: tokenize("a b a b a"),
                label: "p".into(),
            },
            Document {
                tokens: tokenize("b a b a b"),
                label: "n".into(),
            },
        ]);
        let vocab = build_vocabulary(&corpus, 1).unwrap();
        let cfg = TrainConfig {
            epochs: 0,
            ..tiny_config()
        };
        let mut model = init_model(vocab, vec!["p".into(), "n".into()], &cfg).unwrap();
        let before = model.input.clone();
        model.train(&corpus, &cfg).unwrap();
        assert_eq!(model.input, before);
    }

    #[test]
    fn nearest_neighbor_edge_cases() {
        let vocab = vocab_from_counts(&[("a", 5), ("b", 4), ("c", 3)]);
        let mut model =
            init_model(vocab, vec!["p".into(), "n".into()], &tiny_config()).unwrap();
        let dim = model.dim;
        // duplicate vectors rank first with similarity 1
        let row0: Vec<f32> = model.input_row(0).to_vec();
        model.input[dim..2 * dim].copy_from_slice(&row0);
        let neighbors = model.nearest_neighbors(0, 2).unwrap();
        assert_eq!(neighbors[0].0, "b");
        assert!((neighbors[0].1 - 1.0).abs() < 1e-9);

        // zero-norm query is an error
        for v in model.input[..dim].iter_mut() {
            *v = 0.0;
        }
        assert!(matches!(model.nearest_neighbors(0, 1), Err(Error::ZeroNorm(0))));
    }

    #[test]
    fn nearest_neighbors_orthogonal_ties_break_lexicographically() {
        let vocab = vocab_from_counts(&[("a", 5), ("b", 4), ("c", 3)]);
        let mut model =
            init_model(vocab, vec!["p".into(), "n".into()], &tiny_config()).unwrap();
        let dim = model.dim;
        model.input.fill(0.0);
        // query on axis 0; words on axis 1 -> all similarities 0
        let query_row = model.class_row(0);
        model.input[query_row * dim] = 1.0;
        for w in 0..3 {
            model.input[w * dim + 1] = 1.0;
        }
        let neighbors = model.nearest_neighbors(query_row, 3).unwrap();
        let names: Vec<&str> = neighbors.iter().map(|(t, _)| t.as_str()).collect();
        assert_eq!(names, vec!["a", "b", "c"]);
        assert!(neighbors.iter().all(|&(_, s)| s.abs() < 1e-12));
    }
}
