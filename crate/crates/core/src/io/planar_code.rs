//! planar_code, as written by plantri and friends: the ASCII header
//! `>>planar_code<<`, then per record a vertex count byte followed by each
//! vertex's neighbour list (1-based) in rotational order, zero-terminated.
//! Only the one-byte variant (n < 256) is supported; rotation order is
//! dropped and the edge set kept.

use std::io::{ErrorKind, Read};

use super::{lex_sorted, FormatError};
use crate::graph::{Graph, GraphError};

const HEADER: &[u8] = b">>planar_code<<";

pub struct PlanarCodeReader<R> {
    reader: R,
    header_checked: bool,
    failed: bool,
}

impl<R: Read> PlanarCodeReader<R> {
    pub fn new(reader: R) -> Self {
        PlanarCodeReader {
            reader,
            header_checked: false,
            failed: false,
        }
    }

    /// Next record, or None at end of stream. After an error the stream is
    /// considered unusable and yields None.
    pub fn next_graph(&mut self) -> Option<Result<Graph, FormatError>> {
        if self.failed {
            return None;
        }
        let result = self.read_record();
        if matches!(result, Some(Err(_))) {
            self.failed = true;
        }
        result
    }

    fn read_record(&mut self) -> Option<Result<Graph, FormatError>> {
        if !self.header_checked {
            self.header_checked = true;
            let mut header = [0u8; HEADER.len()];
            if let Err(e) = self.reader.read_exact(&mut header) {
                return Some(Err(if e.kind() == ErrorKind::UnexpectedEof {
                    FormatError::MissingHeader
                } else {
                    e.into()
                }));
            }
            if header != *HEADER {
                return Some(Err(FormatError::MissingHeader));
            }
        }

        let n = match self.read_byte() {
            Ok(Some(0)) => return Some(Err(FormatError::TwoByteVariantUnsupported)),
            Ok(Some(n)) => n as usize,
            Ok(None) => return None, // clean end of stream
            Err(e) => return Some(Err(e)),
        };

        let mut neighbour_lists: Vec<Vec<usize>> = Vec::with_capacity(n);
        for vertex in 0..n {
            let mut list = Vec::new();
            loop {
                match self.read_byte() {
                    Ok(Some(0)) => break,
                    Ok(Some(w)) => {
                        let w = w as usize;
                        if w > n {
                            return Some(Err(FormatError::BadNeighbour {
                                vertex,
                                neighbour: w,
                            }));
                        }
                        list.push(w - 1);
                    }
                    Ok(None) => return Some(Err(FormatError::TruncatedRecord)),
                    Err(e) => return Some(Err(e)),
                }
            }
            neighbour_lists.push(list);
        }
        Some(build_graph(n, &neighbour_lists))
    }

    fn read_byte(&mut self) -> Result<Option<u8>, FormatError> {
        let mut byte = [0u8; 1];
        match self.reader.read_exact(&mut byte) {
            Ok(()) => Ok(Some(byte[0])),
            Err(e) if e.kind() == ErrorKind::UnexpectedEof => Ok(None),
            Err(e) => Err(e.into()),
        }
    }
}

fn build_graph(n: usize, neighbour_lists: &[Vec<usize>]) -> Result<Graph, FormatError> {
    let mut edges = Vec::new();
    for (u, list) in neighbour_lists.iter().enumerate() {
        for (pos, &w) in list.iter().enumerate() {
            if w == u {
                return Err(GraphError::LoopEdge(u).into());
            }
            // repeats within one rotation would be parallel edges
            if list[..pos].contains(&w) {
                let (a, b) = if u < w { (u, w) } else { (w, u) };
                return Err(GraphError::DuplicateEdge(a, b).into());
            }
            if !neighbour_lists[w].contains(&u) {
                return Err(FormatError::AsymmetricAdjacency { u, v: w });
            }
            if u < w {
                edges.push((u, w));
            }
        }
    }
    Ok(Graph::new(n, lex_sorted(edges))?)
}
