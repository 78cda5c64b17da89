//! Readers for standard graph corpus formats and the report line schema.
//!
//! graph6 and sparse6 follow Brendan McKay's published descriptions (bytes
//! offset by 63, big-endian 6-bit groups); planar_code follows the plantri
//! distribution's format. All readers emit edges in lexicographic order, and
//! that order is what signature bit strings and CNF encodings refer to.

mod graph6;
mod planar_code;
pub mod report;
mod signed_text;
mod sparse6;

pub use graph6::{encode_graph6, parse_graph6};
pub use planar_code::PlanarCodeReader;
pub use signed_text::parse_signed_graph;
pub use sparse6::parse_sparse6;

use std::io::BufRead;

use thiserror::Error;

use crate::graph::{Graph, GraphError};

/// Maximum vertex count accepted by the graph6/sparse6 readers (the 3-byte
/// size field's documented range; the 6-byte form is rejected).
pub const MAX_SIZE_FIELD: usize = 258_047;

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("bad size field: {0}")]
    BadSizeField(String),
    #[error("record ends before its payload is complete")]
    TruncatedRecord,
    #[error("record carries bytes past its payload")]
    TrailingData,
    #[error("byte {0} outside the canonical range 63..=126")]
    NonCanonicalByte(u8),
    #[error("nonzero padding bits")]
    BadPadding,
    #[error("record does not start with {expected:?}")]
    BadRecordStart { expected: &'static str },
    #[error("graph on {n} vertices exceeds the supported size field")]
    GraphTooLarge { n: usize },
    #[error("planar_code stream is missing the >>planar_code<< header")]
    MissingHeader,
    #[error("planar_code records with two-byte vertex counts are not supported")]
    TwoByteVariantUnsupported,
    #[error("vertex {vertex} lists neighbour {neighbour} outside 1..=n")]
    BadNeighbour { vertex: usize, neighbour: usize },
    #[error("vertex {u} lists {v} but {v} does not list {u}")]
    AsymmetricAdjacency { u: usize, v: usize },
    #[error("line {line}: {message}")]
    Text { line: usize, message: String },
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Corpus encodings selectable from the command line. No sniffing: the
/// format is always chosen explicitly.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CorpusFormat {
    Graph6,
    Sparse6,
    PlanarCode,
}

impl CorpusFormat {
    pub fn parse_name(name: &str) -> Option<Self> {
        match name {
            "graph6" => Some(CorpusFormat::Graph6),
            "sparse6" => Some(CorpusFormat::Sparse6),
            "planar-code" | "planar_code" => Some(CorpusFormat::PlanarCode),
            _ => None,
        }
    }
}

/// Streams graphs out of a corpus file. Records are yielded in file order
/// and [`CorpusReader::position`] reports the index of the next record.
pub struct CorpusReader<R: BufRead> {
    inner: CorpusInner<R>,
    position: usize,
}

enum CorpusInner<R: BufRead> {
    Lines {
        reader: R,
        sparse: bool,
        header_seen: bool,
    },
    Planar(PlanarCodeReader<R>),
}

impl<R: BufRead> CorpusReader<R> {
    pub fn new(format: CorpusFormat, reader: R) -> Self {
        let inner = match format {
            CorpusFormat::Graph6 => CorpusInner::Lines {
                reader,
                sparse: false,
                header_seen: false,
            },
            CorpusFormat::Sparse6 => CorpusInner::Lines {
                reader,
                sparse: true,
                header_seen: false,
            },
            CorpusFormat::PlanarCode => CorpusInner::Planar(PlanarCodeReader::new(reader)),
        };
        CorpusReader { inner, position: 0 }
    }

    /// Index of the next record to be yielded.
    pub fn position(&self) -> usize {
        self.position
    }

    fn next_record(&mut self) -> Option<Result<Graph, FormatError>> {
        match &mut self.inner {
            CorpusInner::Lines {
                reader,
                sparse,
                header_seen,
            } => loop {
                let mut line = String::new();
                match reader.read_line(&mut line) {
                    Ok(0) => return None,
                    Ok(_) => {}
                    Err(e) => return Some(Err(e.into())),
                }
                let mut record = line.trim_end_matches(['\n', '\r']);
                if !*header_seen {
                    *header_seen = true;
                    let header = if *sparse { ">>sparse6<<" } else { ">>graph6<<" };
                    record = record.strip_prefix(header).unwrap_or(record);
                }
                if record.is_empty() {
                    continue;
                }
                let parsed = if *sparse {
                    parse_sparse6(record.as_bytes())
                } else {
                    parse_graph6(record.as_bytes())
                };
                return Some(parsed);
            },
            CorpusInner::Planar(reader) => reader.next_graph(),
        }
    }
}

impl<R: BufRead> Iterator for CorpusReader<R> {
    type Item = Result<Graph, FormatError>;

    fn next(&mut self) -> Option<Self::Item> {
        let item = self.next_record();
        if item.is_some() {
            self.position += 1;
        }
        item
    }
}

/// Reads the size field shared by graph6 and sparse6: one byte for
/// `n <= 62`, or 126 followed by three bytes of an 18-bit big-endian value.
fn parse_size_field(bytes: &[u8]) -> Result<(usize, usize), FormatError> {
    let first = *bytes.first().ok_or(FormatError::TruncatedRecord)?;
    check_canonical(first)?;
    if first != 126 {
        return Ok(((first - 63) as usize, 1));
    }
    let rest = bytes.get(1..4).ok_or(FormatError::TruncatedRecord)?;
    if rest[0] == 126 {
        return Err(FormatError::BadSizeField(format!(
            "six-byte size fields (n > {MAX_SIZE_FIELD}) are not supported"
        )));
    }
    let mut n = 0usize;
    for &b in rest {
        check_canonical(b)?;
        n = (n << 6) | (b - 63) as usize;
    }
    if n < 63 {
        return Err(FormatError::BadSizeField(format!(
            "three-byte size field used for n = {n} < 63"
        )));
    }
    if n > MAX_SIZE_FIELD {
        return Err(FormatError::BadSizeField(format!(
            "n = {n} exceeds the supported maximum {MAX_SIZE_FIELD}"
        )));
    }
    Ok((n, 4))
}

fn check_canonical(byte: u8) -> Result<(), FormatError> {
    if !(63..=126).contains(&byte) {
        return Err(FormatError::NonCanonicalByte(byte));
    }
    Ok(())
}

/// Encodes the size field (test-support encoder and fixtures only).
fn encode_size_field(n: usize, out: &mut Vec<u8>) -> Result<(), FormatError> {
    if n <= 62 {
        out.push(n as u8 + 63);
    } else if n <= MAX_SIZE_FIELD {
        out.push(126);
        out.push(((n >> 12) & 0x3f) as u8 + 63);
        out.push(((n >> 6) & 0x3f) as u8 + 63);
        out.push((n & 0x3f) as u8 + 63);
    } else {
        return Err(FormatError::GraphTooLarge { n });
    }
    Ok(())
}

/// Sorts decoded edges into the lexicographic index order all readers share.
fn lex_sorted(mut edges: Vec<(usize, usize)>) -> Vec<(usize, usize)> {
    edges.sort_unstable();
    edges
}
