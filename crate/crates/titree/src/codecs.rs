//! Text encodings of generated trees: graph6, sparse6 and parent lists.
//!
//! graph6 and sparse6 follow the byte layout of nauty's `formats.txt`,
//! without the optional `>>graph6<<` / `>>sparse6<<` headers. Vertex labels
//! are the generator's own labels. The decoders exist so tests can check the
//! encoders; the command line never reads these formats.

use std::fmt::Write as _;

use thiserror::Error;
use titree_core::WtiTree;

/// Largest order encodable with the four-byte size field.
pub const MAX_CODEC_ORDER: usize = 258_047;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CodecError {
    #[error("graph order {0} outside 1..={MAX_CODEC_ORDER}")]
    OrderOutOfRange(usize),
    #[error("edge ({0}, {1}) is not between two distinct vertices of the graph")]
    InvalidEdge(usize, usize),
    #[error("malformed {format} data: {reason}")]
    Malformed {
        format: &'static str,
        reason: &'static str,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Format {
    Graph6,
    Sparse6,
    ParentList,
}

/// One encoded tree, without the trailing newline.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EncodedGraph {
    pub format: Format,
    pub bytes: Vec<u8>,
}

impl EncodedGraph {
    pub fn as_str(&self) -> &str {
        // All three encoders only produce ASCII.
        std::str::from_utf8(&self.bytes).expect("encodings are ASCII")
    }
}

/// The `n - 1` tree edges as `(smaller, larger)` pairs, sorted.
pub fn to_edge_list(tree: &WtiTree) -> Vec<(usize, usize)> {
    let mut edges: Vec<(usize, usize)> = tree
        .parents()
        .iter()
        .enumerate()
        .skip(1)
        .map(|(x, &p)| (p as usize, x))
        .collect();
    edges.sort_unstable();
    edges
}

/// Encodes `tree` in `format`.
pub fn encode(tree: &WtiTree, format: Format) -> EncodedGraph {
    match format {
        Format::Graph6 => encode_graph6(&to_edge_list(tree), tree.order()),
        Format::Sparse6 => encode_sparse6(&to_edge_list(tree), tree.order()),
        Format::ParentList => Ok(encode_parent_list(tree)),
    }
    .expect("generated trees are always encodable")
}

pub fn encode_graph6(edges: &[(usize, usize)], order: usize) -> Result<EncodedGraph, CodecError> {
    let mut bytes = size_field(order)?;
    let mut bits = vec![false; order * (order - 1) / 2];
    for &(u, v) in edges {
        check_edge(u, v, order)?;
        let (i, j) = (u.min(v), u.max(v));
        // Upper triangle, column by column.
        bits[j * (j - 1) / 2 + i] = true;
    }
    let mut packer = SixBitPacker::default();
    for bit in bits {
        packer.push_bit(bit);
    }
    bytes.extend(packer.finish(Padding::Zeros));
    Ok(EncodedGraph {
        format: Format::Graph6,
        bytes,
    })
}

pub fn encode_sparse6(edges: &[(usize, usize)], order: usize) -> Result<EncodedGraph, CodecError> {
    let mut bytes = vec![b':'];
    bytes.extend(size_field(order)?);
    let width = bits_for(order - 1);

    let mut sorted = Vec::with_capacity(edges.len());
    for &(u, v) in edges {
        check_edge(u, v, order)?;
        sorted.push((u.max(v), u.min(v)));
    }
    sorted.sort_unstable();

    let mut packer = SixBitPacker::default();
    let mut current = 0usize;
    for &(v, u) in &sorted {
        if v == current {
            packer.push_bit(false);
        } else if v == current + 1 {
            current = v;
            packer.push_bit(true);
        } else {
            // Jump straight to v, then emit the edge without advancing.
            current = v;
            packer.push_bit(true);
            packer.push_bits(v, width);
            packer.push_bit(false);
        }
        packer.push_bits(u, width);
    }

    // 1-bit padding would read as an edge {n-1, n-1} in this one case.
    let pad = packer.padding();
    let special = width > 0
        && pad > width
        && order == 1 << width
        && !sorted.is_empty()
        && current == order - 2;
    bytes.extend(packer.finish(if special {
        Padding::ZeroThenOnes
    } else {
        Padding::Ones
    }));
    Ok(EncodedGraph {
        format: Format::Sparse6,
        bytes,
    })
}

/// `parents[1] .. parents[n-1]` separated by single spaces.
pub fn encode_parent_list(tree: &WtiTree) -> EncodedGraph {
    let mut text = String::new();
    for (i, p) in tree.parents().iter().skip(1).enumerate() {
        if i > 0 {
            text.push(' ');
        }
        write!(text, "{p}").unwrap();
    }
    EncodedGraph {
        format: Format::ParentList,
        bytes: text.into_bytes(),
    }
}

fn check_edge(u: usize, v: usize, order: usize) -> Result<(), CodecError> {
    if u == v || u >= order || v >= order {
        Err(CodecError::InvalidEdge(u, v))
    } else {
        Ok(())
    }
}

fn size_field(order: usize) -> Result<Vec<u8>, CodecError> {
    match order {
        1..=62 => Ok(vec![order as u8 + 63]),
        63..=MAX_CODEC_ORDER => Ok(vec![
            126,
            ((order >> 12) & 63) as u8 + 63,
            ((order >> 6) & 63) as u8 + 63,
            (order & 63) as u8 + 63,
        ]),
        _ => Err(CodecError::OrderOutOfRange(order)),
    }
}

/// Number of bits needed to write `x` in binary (0 for 0).
fn bits_for(x: usize) -> usize {
    (usize::BITS - x.leading_zeros()) as usize
}

#[derive(Default)]
struct SixBitPacker {
    out: Vec<u8>,
    acc: u8,
    filled: usize,
}

impl SixBitPacker {
    fn push_bit(&mut self, bit: bool) {
        self.acc = (self.acc << 1) | bit as u8;
        self.filled += 1;
        if self.filled == 6 {
            self.out.push(self.acc + 63);
            self.acc = 0;
            self.filled = 0;
        }
    }

    fn push_bits(&mut self, value: usize, width: usize) {
        for i in (0..width).rev() {
            self.push_bit((value >> i) & 1 == 1);
        }
    }

    /// Bits still missing from the last group.
    fn padding(&self) -> usize {
        if self.filled == 0 {
            0
        } else {
            6 - self.filled
        }
    }

    fn finish(mut self, padding: Padding) -> Vec<u8> {
        let pad = self.padding();
        for i in 0..pad {
            let bit = match padding {
                Padding::Zeros => false,
                Padding::Ones => true,
                Padding::ZeroThenOnes => i > 0,
            };
            self.push_bit(bit);
        }
        self.out
    }
}

#[derive(Clone, Copy)]
enum Padding {
    Zeros,
    Ones,
    ZeroThenOnes,
}

/// Graph order and edge list, as decoded from one encoded line.
pub type DecodedGraph = (usize, Vec<(usize, usize)>);

fn decode_size<'a>(data: &'a [u8], format: &'static str) -> Result<(usize, &'a [u8]), CodecError> {
    let malformed = |reason| CodecError::Malformed { format, reason };
    let sextet = |b: u8| {
        if (63..=126).contains(&b) {
            Ok((b - 63) as usize)
        } else {
            Err(malformed("byte outside 63..=126"))
        }
    };
    match data {
        [] => Err(malformed("missing size field")),
        [126, 126, ..] => Err(malformed("orders above 258047 are not supported")),
        [126, rest @ ..] => {
            if rest.len() < 3 {
                return Err(malformed("truncated size field"));
            }
            let n = (sextet(rest[0])? << 12) | (sextet(rest[1])? << 6) | sextet(rest[2])?;
            Ok((n, &rest[3..]))
        }
        [b, rest @ ..] => Ok((sextet(*b)?, rest)),
    }
}

fn unpack_bits(data: &[u8], format: &'static str) -> Result<Vec<bool>, CodecError> {
    let mut bits = Vec::with_capacity(data.len() * 6);
    for &b in data {
        if !(63..=126).contains(&b) {
            return Err(CodecError::Malformed {
                format,
                reason: "byte outside 63..=126",
            });
        }
        let v = b - 63;
        bits.extend((0..6).rev().map(|i| (v >> i) & 1 == 1));
    }
    Ok(bits)
}

/// Decodes one graph6 line (no header, no newline).
pub fn decode_graph6(line: &[u8]) -> Result<DecodedGraph, CodecError> {
    let (n, body) = decode_size(line, "graph6")?;
    let needed = n * n.saturating_sub(1) / 2;
    if body.len() != needed.div_ceil(6) {
        return Err(CodecError::Malformed {
            format: "graph6",
            reason: "body length does not match the order",
        });
    }
    let bits = unpack_bits(body, "graph6")?;
    let mut edges = Vec::new();
    let mut k = 0;
    for j in 1..n {
        for i in 0..j {
            if bits[k] {
                edges.push((i, j));
            }
            k += 1;
        }
    }
    edges.sort_unstable();
    Ok((n, edges))
}

/// Decodes one sparse6 line (leading ':' included, no newline).
pub fn decode_sparse6(line: &[u8]) -> Result<DecodedGraph, CodecError> {
    let Some(rest) = line.strip_prefix(b":") else {
        return Err(CodecError::Malformed {
            format: "sparse6",
            reason: "missing ':' prefix",
        });
    };
    let (n, body) = decode_size(rest, "sparse6")?;
    let bits = unpack_bits(body, "sparse6")?;
    let k = bits_for(n.saturating_sub(1));
    let mut edges = Vec::new();
    let mut v = 0usize;
    let mut pos = 0;
    // An incomplete (b, x) pair at the end is padding.
    while pos + 1 + k <= bits.len() {
        let b = bits[pos];
        let x = bits[pos + 1..pos + 1 + k]
            .iter()
            .fold(0usize, |acc, &bit| (acc << 1) | bit as usize);
        pos += 1 + k;
        if b {
            v += 1;
        }
        if v >= n {
            break;
        }
        if x > v {
            v = x;
        } else {
            edges.push((x, v));
        }
    }
    edges.sort_unstable();
    Ok((n, edges))
}
