//! sparse6: ':' then the size field, then a stream of (b, x) pairs where b
//! is one bit and x is a k-bit vertex number, k being the least number of
//! bits with 2^k >= n. b increments the current vertex; x either jumps the
//! current vertex forward or names the other endpoint of an edge.

use super::{lex_sorted, parse_size_field, FormatError};
use crate::graph::{Graph, GraphError};

/// Decodes one sparse6 record. Loops and repeated edges, legal in sparse6
/// streams generally, are rejected under the simple-graph policy.
pub fn parse_sparse6(record: &[u8]) -> Result<Graph, FormatError> {
    let rest = record
        .strip_prefix(b":")
        .ok_or(FormatError::BadRecordStart { expected: ":" })?;
    let (n, consumed) = parse_size_field(rest)?;
    let payload = &rest[consumed..];
    for &b in payload {
        super::check_canonical(b)?;
    }

    let mut k = 1usize;
    while (1usize << k) < n {
        k += 1;
    }

    let mut bits = BitReader::new(payload);
    let mut edges = Vec::new();
    let mut seen = std::collections::HashSet::new();
    let mut v: usize = 0;
    while let Some(b) = bits.take(1) {
        let Some(x) = bits.take(k) else { break };
        if b == 1 {
            v += 1;
        }
        // padding with one-bits runs the counters off the end
        if x >= n || v >= n {
            break;
        }
        if x > v {
            v = x;
        } else {
            if x == v {
                return Err(GraphError::LoopEdge(v).into());
            }
            if !seen.insert((x, v)) {
                return Err(GraphError::DuplicateEdge(x, v).into());
            }
            edges.push((x, v));
        }
    }
    Ok(Graph::new(n, lex_sorted(edges))?)
}

/// Big-endian bit cursor over 6-bit groups (byte value minus 63).
struct BitReader<'a> {
    payload: &'a [u8],
    pos: usize,
}

impl<'a> BitReader<'a> {
    fn new(payload: &'a [u8]) -> Self {
        BitReader { payload, pos: 0 }
    }

    /// Next `count` bits as an integer, or None when the payload runs out.
    fn take(&mut self, count: usize) -> Option<usize> {
        if self.pos + count > self.payload.len() * 6 {
            return None;
        }
        let mut value = 0usize;
        for _ in 0..count {
            let group = self.payload[self.pos / 6] - 63;
            let bit = (group >> (5 - self.pos % 6)) & 1;
            value = (value << 1) | bit as usize;
            self.pos += 1;
        }
        Some(value)
    }
}
