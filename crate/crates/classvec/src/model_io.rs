//! Model persistence.
//!
//! The `CLASSVEC1` format stores a text header (dimensions, vocabulary,
//! class names) followed by the weight matrices, either as decimal text
//! with 8 significant digits or as raw little-endian f32 ("bin" mode,
//! bit-exact round trips). A word2vec-compatible text export is also
//! provided; class rows appear there under `__class_<name>__`.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Read, Write};
use std::path::Path;

use crate::corpus::Vocabulary;
use crate::embed::{build_huffman, build_noise_table, EmbeddingModel};
use crate::{Error, Result};

const MAGIC: &str = "CLASSVEC1";

/// Write a model in text or binary mode.
pub fn save_model(model: &EmbeddingModel, path: impl AsRef<Path>, binary: bool) -> Result<()> {
    let path = path.as_ref();
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    let mut out = BufWriter::new(file);
    let io_err = |e| Error::io(path, e);

    let t = model.word_count();
    let n_c = model.class_count();
    let ns = model.output_ns.is_some() as u8;
    let hs = model.output_hs.is_some() as u8;
    writeln!(out, "{MAGIC} {}", if binary { "bin" } else { "text" }).map_err(io_err)?;
    writeln!(out, "{t} {n_c} {} {ns} {hs}", model.dim).map_err(io_err)?;
    for id in 0..t {
        writeln!(
            out,
            "{} {} {}",
            model.vocab.token(id),
            model.vocab.count(id),
            model.vocab.doc_freq(id)
        )
        .map_err(io_err)?;
    }
    for class in &model.classes {
        writeln!(out, "{class}").map_err(io_err)?;
    }

    let matrices: Vec<&[f32]> = [
        Some(model.input.as_slice()),
        model.output_ns.as_deref(),
        model.output_hs.as_deref(),
    ]
    .into_iter()
    .flatten()
    .collect();
    if binary {
        for matrix in matrices {
            for value in matrix {
                out.write_all(&value.to_le_bytes()).map_err(io_err)?;
            }
        }
    } else {
        for matrix in matrices {
            for row in matrix.chunks(model.dim) {
                let line: Vec<String> = row.iter().map(|v| format!("{v:.7e}")).collect();
                writeln!(out, "{}", line.join(" ")).map_err(io_err)?;
            }
        }
    }
    out.flush().map_err(io_err)
}

/// Word2vec-style text export: `count dim` header, then one line per word
/// vector. Class rows are appended with `__class_<name>__` names.
pub fn export_word2vec(model: &EmbeddingModel, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    let mut out = BufWriter::new(file);
    let io_err = |e| Error::io(path, e);

    let rows = model.word_count() + model.class_count();
    writeln!(out, "{rows} {}", model.dim).map_err(io_err)?;
    for row in 0..rows {
        let name = if row < model.word_count() {
            model.vocab.token(row).to_owned()
        } else {
            format!("__class_{}__", model.classes[row - model.word_count()])
        };
        let values: Vec<String> = model
            .input_row(row)
            .iter()
            .map(|v| format!("{v:.7e}"))
            .collect();
        writeln!(out, "{name} {}", values.join(" ")).map_err(io_err)?;
    }
    out.flush().map_err(io_err)
}

fn read_line(reader: &mut impl BufRead) -> Result<String> {
    let mut line = String::new();
    let n = reader.read_line(&mut line).map_err(|e| Error::io("<model>", e))?;
    if n == 0 {
        return Err(Error::Truncated);
    }
    Ok(line.trim_end_matches(['\n', '\r']).to_owned())
}

fn parse_field<T: std::str::FromStr>(field: Option<&str>, what: &str) -> Result<T> {
    field
        .and_then(|f| f.parse().ok())
        .ok_or_else(|| Error::HeaderMismatch(format!("bad {what} field")))
}

/// Load a model written by [`save_model`]. The Huffman coding and noise
/// table are rebuilt deterministically from the stored vocabulary.
pub fn load_model(path: impl AsRef<Path>) -> Result<EmbeddingModel> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    let mut reader = BufReader::new(file);

    let first = read_line(&mut reader)?;
    let mut parts = first.split_whitespace();
    if parts.next() != Some(MAGIC) {
        return Err(Error::BadMagic);
    }
    let binary = match parts.next() {
        Some("bin") => true,
        Some("text") => false,
        _ => return Err(Error::HeaderMismatch("unknown mode".into())),
    };

    let header = read_line(&mut reader)?;
    let mut fields = header.split_whitespace();
    let t: usize = parse_field(fields.next(), "T")?;
    let n_c: usize = parse_field(fields.next(), "N_c")?;
    let dim: usize = parse_field(fields.next(), "dim")?;
    let ns: u8 = parse_field(fields.next(), "ns")?;
    let hs: u8 = parse_field(fields.next(), "hs")?;
    if t == 0 || dim == 0 || n_c < 2 {
        return Err(Error::HeaderMismatch(format!(
            "implausible sizes T={t} N_c={n_c} dim={dim}"
        )));
    }

    let mut tokens = Vec::with_capacity(t);
    let mut counts = Vec::with_capacity(t);
    let mut doc_freqs = Vec::with_capacity(t);
    for _ in 0..t {
        let line = read_line(&mut reader)?;
        let mut fields = line.split_whitespace();
        tokens.push(
            fields
                .next()
                .ok_or_else(|| Error::HeaderMismatch("empty vocab line".into()))?
                .to_owned(),
        );
        counts.push(parse_field(fields.next(), "count")?);
        doc_freqs.push(parse_field(fields.next(), "doc_freq")?);
    }
    let vocab = Vocabulary::from_parts(tokens, counts, doc_freqs);

    let mut classes = Vec::with_capacity(n_c);
    for _ in 0..n_c {
        classes.push(read_line(&mut reader)?);
    }

    let huffman = if hs == 1 { Some(build_huffman(&vocab)?) } else { None };
    let inner = huffman.as_ref().map(|h| h.inner_count()).unwrap_or(0);
    let sizes: Vec<usize> = [
        Some((t + n_c) * dim),
        (ns == 1).then_some(t * dim),
        (hs == 1).then_some(inner * dim),
    ]
    .into_iter()
    .flatten()
    .collect();

    let mut matrices: Vec<Vec<f32>> = Vec::with_capacity(sizes.len());
    if binary {
        for size in sizes {
            let mut bytes = vec![0u8; size * 4];
            reader.read_exact(&mut bytes).map_err(|e| {
                if e.kind() == std::io::ErrorKind::UnexpectedEof {
                    Error::Truncated
                } else {
                    Error::io(path, e)
                }
            })?;
            matrices.push(
                bytes
                    .chunks_exact(4)
                    .map(|b| f32::from_le_bytes([b[0], b[1], b[2], b[3]]))
                    .collect(),
            );
        }
    } else {
        for size in sizes {
            let rows = size / dim;
            let mut matrix = Vec::with_capacity(size);
            for _ in 0..rows {
                let line = read_line(&mut reader)?;
                let values: Vec<f32> = line
                    .split_whitespace()
                    .map(|v| v.parse())
                    .collect::<std::result::Result<_, _>>()
                    .map_err(|_| Error::HeaderMismatch("bad matrix value".into()))?;
                if values.len() != dim {
                    return Err(Error::HeaderMismatch(format!(
                        "row has {} values, expected {dim}",
                        values.len()
                    )));
                }
                matrix.extend(values);
            }
            matrices.push(matrix);
        }
    }

    let mut iter = matrices.into_iter();
    let input = iter.next().unwrap();
    let output_ns = (ns == 1).then(|| iter.next().unwrap());
    let output_hs = (hs == 1).then(|| iter.next().unwrap());
    let noise = (ns == 1).then(|| build_noise_table(&vocab, 0.75));

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
