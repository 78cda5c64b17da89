//! Plain-text signed graphs: a `n <count>` line, then one `u v s` line per
//! edge with s in {+, -} (omitted means +). `#` starts a comment. This is
//! the input format for solve/chromatic/encode-cnf, since graph6 cannot
//! carry signs.

use super::FormatError;
use crate::graph::Graph;
use crate::signed::{Signature, SignedGraph};

pub fn parse_signed_graph(text: &str) -> Result<SignedGraph, FormatError> {
    let mut n: Option<usize> = None;
    let mut edges = Vec::new();
    let mut signs: Vec<i8> = Vec::new();

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let err = |message: String| FormatError::Text {
            line: line_no,
            message,
        };
        let tokens: Vec<&str> = line.split_whitespace().collect();
        if n.is_none() {
            if tokens.len() != 2 || tokens[0] != "n" {
                return Err(err("expected header line `n <count>`".into()));
            }
            n = Some(
                tokens[1]
                    .parse()
                    .map_err(|_| err(format!("bad vertex count {:?}", tokens[1])))?,
            );
            continue;
        }
        if tokens.len() < 2 || tokens.len() > 3 {
            return Err(err("expected `u v [+|-]`".into()));
        }
        let u: usize = tokens[0]
            .parse()
            .map_err(|_| err(format!("bad vertex {:?}", tokens[0])))?;
        let v: usize = tokens[1]
            .parse()
            .map_err(|_| err(format!("bad vertex {:?}", tokens[1])))?;
        let sign = match tokens.get(2) {
            None | Some(&"+") => 1,
            Some(&"-") => -1,
            Some(other) => return Err(err(format!("bad sign {other:?}"))),
        };
        edges.push((u, v));
        signs.push(sign);
    }

    let n = n.ok_or(FormatError::Text {
        line: 0,
        message: "missing `n <count>` header".into(),
    })?;
    let graph = Graph::new(n, edges)?;
    Ok(SignedGraph::new(graph, Signature::new(signs)).expect("one sign per edge"))
}
