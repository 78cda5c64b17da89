//! graph6: size field, then the upper triangle of the adjacency matrix as a
//! bit vector, column by column — pairs (i, j) for j in 1..n, i in 0..j —
//! packed big-endian into 6-bit groups offset by 63.

use super::{encode_size_field, lex_sorted, parse_size_field, FormatError};
use crate::graph::Graph;

/// Decodes one graph6 record (no header, no trailing newline).
pub fn parse_graph6(record: &[u8]) -> Result<Graph, FormatError> {
    let (n, consumed) = parse_size_field(record)?;
    let payload = &record[consumed..];
    for &b in payload {
        super::check_canonical(b)?;
    }

    let bit_count = n * n.saturating_sub(1) / 2;
    let expected_bytes = bit_count.div_ceil(6);
    if payload.len() < expected_bytes {
        return Err(FormatError::TruncatedRecord);
    }
    if payload.len() > expected_bytes {
        return Err(FormatError::TrailingData);
    }

    let bit = |t: usize| (payload[t / 6] - 63) >> (5 - t % 6) & 1 == 1;
    let mut edges = Vec::new();
    let mut t = 0;
    for j in 1..n {
        for i in 0..j {
            if bit(t) {
                edges.push((i, j));
            }
            t += 1;
        }
    }
    // canonical encoders pad the final group with zero bits
    for pad in bit_count..expected_bytes * 6 {
        if bit(pad) {
            return Err(FormatError::BadPadding);
        }
    }
    Ok(Graph::new(n, lex_sorted(edges))?)
}

/// Encodes a graph as one graph6 record. Test-support encoder: round-trip
/// checks and fixture construction; corpus writing is out of scope.
pub fn encode_graph6(g: &Graph) -> Result<Vec<u8>, FormatError> {
    let n = g.vertex_count();
    let mut out = Vec::new();
    encode_size_field(n, &mut out)?;

    let bit_count = n * n.saturating_sub(1) / 2;
    let mut bits = vec![0u8; bit_count.div_ceil(6)];
    let mut t = 0;
    for j in 1..n {
        for i in 0..j {
            if g.has_edge(i, j) {
                bits[t / 6] |= 1 << (5 - t % 6);
            }
            t += 1;
        }
    }
    out.extend(bits.iter().map(|b| b + 63));
    Ok(out)
}
