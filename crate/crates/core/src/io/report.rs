//! Line-oriented report schema (version 1).
//!
//! One record per line, space-separated `key=value` pairs, no spaces inside
//! values:
//!
//! ```text
//! v=1 graph=<id> object=<obj> k=<k> outcome=<outcome> nodes=<n> cert=<cert> digest=<hex16|->
//!     [sigma=<pm>] [lists=<lists>] [reason=<reason>] [ms=<ms>]
//! ```
//!
//! * `object`: `s:<+->` signature bits over edge indices, `l:<hex16>` digest
//!   of a canonical list assignment, or `-` for whole-graph records.
//! * `cert`: `f:<c0,c1,..>` signed colouring, `phi:<p0,p1,..>` L-colouring,
//!   or `-`. `digest` is the first 16 hex chars of SHA-256 of the cert token.
//! * `sigma` is always present on `not-4-colourable` records; `lists`
//!   (`min,max;min,max;..`) on list-mode counterexample candidates.
//! * `ms` appears only when a scan opts into wall-clock timing, which gives
//!   up byte-identical reports.
//!
//! Lines are written in canonical scan order, so a fixed seed and config
//! reproduce a report byte for byte.

use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::harness::{Certificate, ObjectId, Outcome, ScanRecord, SkipReason};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ReportParseError {
    #[error("missing key {0}")]
    MissingKey(&'static str),
    #[error("bad value for {key}: {value:?}")]
    BadValue { key: &'static str, value: String },
    #[error("token {0:?} is not key=value")]
    BadToken(String),
    #[error("not-4-colourable record without sigma")]
    MissingSigma,
}

/// First 16 hex characters of SHA-256.
pub fn digest16(token: &str) -> String {
    let hash = Sha256::digest(token.as_bytes());
    hash.iter().take(8).map(|b| format!("{b:02x}")).collect()
}

/// Serializes a certificate to its token form.
pub fn certificate_token(certificate: &Certificate) -> String {
    match certificate {
        Certificate::SignedColouring(colours) => {
            format!("f:{}", join(colours.iter()))
        }
        Certificate::ListColouring(phi) => {
            format!("phi:{}", join(phi.iter()))
        }
    }
}

fn join<T: ToString>(items: impl Iterator<Item = T>) -> String {
    items
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join(",")
}

/// One self-contained report line for a record (no trailing newline).
pub fn write_report_line(record: &ScanRecord) -> String {
    let cert = record
        .certificate
        .as_ref()
        .map(certificate_token)
        .unwrap_or_else(|| "-".into());
    let digest = match (&record.digest, &record.certificate) {
        (Some(stored), _) => stored.clone(),
        (None, Some(_)) => digest16(&cert),
        (None, None) => "-".into(),
    };
    let mut line = format!(
        "v=1 graph={} object={} k={} outcome={} nodes={} cert={} digest={}",
        record.graph_id,
        record.object,
        record.k,
        record.outcome.as_str(),
        record.nodes,
        cert,
        digest,
    );
    if let Some(sigma) = &record.sigma {
        line.push_str(&format!(" sigma={sigma}"));
    }
    if let Some(lists) = &record.lists {
        line.push_str(&format!(" lists={lists}"));
    }
    if let Some(reason) = record.reason {
        line.push_str(&format!(" reason={}", reason.as_str()));
    }
    if let Some(ms) = record.millis {
        line.push_str(&format!(" ms={ms}"));
    }
    line
}

/// Parses one report line back into a record.
pub fn parse_report_line(line: &str) -> Result<ScanRecord, ReportParseError> {
    let mut graph_id = None;
    let mut object = None;
    let mut k = None;
    let mut outcome = None;
    let mut nodes = None;
    let mut cert_token: Option<String> = None;
    let mut digest = None;
    let mut sigma = None;
    let mut lists = None;
    let mut reason = None;
    let mut millis = None;

    for token in line.split_whitespace() {
        let (key, value) = token
            .split_once('=')
            .ok_or_else(|| ReportParseError::BadToken(token.into()))?;
        let bad = |key: &'static str| ReportParseError::BadValue {
            key,
            value: value.into(),
        };
        match key {
            "v" => {
                if value != "1" {
                    return Err(bad("v"));
                }
            }
            "graph" => graph_id = Some(value.parse().map_err(|_| bad("graph"))?),
            "object" => {
                object = Some(if value == "-" {
                    ObjectId::WholeGraph
                } else if let Some(pm) = value.strip_prefix("s:") {
                    ObjectId::Signature(pm.into())
                } else if let Some(d) = value.strip_prefix("l:") {
                    ObjectId::Lists(d.into())
                } else {
                    return Err(bad("object"));
                });
            }
            "k" => k = Some(value.parse().map_err(|_| bad("k"))?),
            "outcome" => {
                outcome = Some(Outcome::parse_name(value).ok_or_else(|| bad("outcome"))?)
            }
            "nodes" => nodes = Some(value.parse().map_err(|_| bad("nodes"))?),
            "cert" => cert_token = Some(value.into()),
            "digest" => {
                if value != "-" {
                    digest = Some(value.to_string());
                }
            }
            "sigma" => sigma = Some(value.to_string()),
            "lists" => lists = Some(value.to_string()),
            "reason" => {
                reason = Some(SkipReason::parse_name(value).ok_or_else(|| bad("reason"))?)
            }
            "ms" => millis = Some(value.parse().map_err(|_| bad("ms"))?),
            _ => return Err(ReportParseError::BadToken(token.into())),
        }
    }

    let certificate = match cert_token.as_deref() {
        None => return Err(ReportParseError::MissingKey("cert")),
        Some("-") => None,
        Some(token) => Some(parse_certificate(token)?),
    };
    let record = ScanRecord {
        graph_id: graph_id.ok_or(ReportParseError::MissingKey("graph"))?,
        object: object.ok_or(ReportParseError::MissingKey("object"))?,
        k: k.ok_or(ReportParseError::MissingKey("k"))?,
        outcome: outcome.ok_or(ReportParseError::MissingKey("outcome"))?,
        nodes: nodes.ok_or(ReportParseError::MissingKey("nodes"))?,
        certificate,
        sigma,
        lists,
        reason,
        millis,
        digest,
    };
    if record.outcome == Outcome::NotFourColourable && record.sigma.is_none() {
        return Err(ReportParseError::MissingSigma);
    }
    Ok(record)
}

fn parse_certificate(token: &str) -> Result<Certificate, ReportParseError> {
    let bad = || ReportParseError::BadValue {
        key: "cert",
        value: token.into(),
    };
    if let Some(body) = token.strip_prefix("f:") {
        Ok(Certificate::SignedColouring(parse_numbers(body).ok_or_else(bad)?))
    } else if let Some(body) = token.strip_prefix("phi:") {
        Ok(Certificate::ListColouring(parse_numbers(body).ok_or_else(bad)?))
    } else {
        Err(bad())
    }
}

fn parse_numbers<T: std::str::FromStr>(body: &str) -> Option<Vec<T>> {
    if body.is_empty() {
        return Some(Vec::new());
    }
    body.split(',').map(|s| s.parse().ok()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn colourable_record() -> ScanRecord {
        ScanRecord {
            graph_id: 3,
            object: ObjectId::Signature("++-".into()),
            k: 4,
            outcome: Outcome::Colourable,
            nodes: 17,
            certificate: Some(Certificate::SignedColouring(vec![1, -2, 2])),
            sigma: None,
            lists: None,
            reason: None,
            millis: None,
            digest: None,
        }
    }

    #[test]
    fn colourable_line_shape() {
        let line = write_report_line(&colourable_record());
        assert!(line.starts_with("v=1 graph=3 object=s:++- k=4 outcome=colourable nodes=17 cert=f:1,-2,2 digest="));
        assert!(!line.contains("ms="));
    }

    #[test]
    fn counterexample_line_carries_signature() {
        let record = ScanRecord {
            graph_id: 0,
            object: ObjectId::Signature("+-".into()),
            k: 4,
            outcome: Outcome::NotFourColourable,
            nodes: 44,
            certificate: None,
            sigma: Some("+-".into()),
            lists: None,
            reason: None,
            millis: None,
            digest: None,
        };
        let line = write_report_line(&record);
        assert!(line.contains("outcome=not-4-colourable"));
        assert!(line.contains("sigma=+-"));
        assert!(line.contains("cert=- digest=-"));
    }

    #[test]
    fn bipartite_ok_line() {
        let record = ScanRecord {
            graph_id: 1,
            object: ObjectId::Lists("00ff00ff00ff00ff".into()),
            k: 4,
            outcome: Outcome::BipartiteClassesOk,
            nodes: 5,
            certificate: Some(Certificate::ListColouring(vec![2, 2, 3])),
            sigma: None,
            lists: None,
            reason: None,
            millis: None,
            digest: None,
        };
        let line = write_report_line(&record);
        assert!(line.contains("outcome=bipartite-classes-ok"));
        assert!(line.contains("cert=phi:2,2,3"));
    }

    #[test]
    fn round_trip() {
        let records = vec![
            colourable_record(),
            ScanRecord {
                graph_id: 9,
                object: ObjectId::WholeGraph,
                k: 4,
                outcome: Outcome::Skipped,
                nodes: 0,
                certificate: None,
                sigma: None,
                lists: None,
                reason: Some(SkipReason::EulerScreen),
                millis: None,
                digest: None,
            },
            ScanRecord {
                graph_id: 2,
                object: ObjectId::Lists("abcd0123abcd0123".into()),
                k: 4,
                outcome: Outcome::NotFourColourable,
                nodes: 100,
                certificate: None,
                sigma: Some("--+".into()),
                lists: Some("1,2;2,3;1,4".into()),
                reason: None,
                millis: Some(12),
                digest: None,
            },
        ];
        for record in records {
            let line = write_report_line(&record);
            let parsed = parse_report_line(&line).unwrap();
            // a parsed record carries the written digest
            let mut expected = record.clone();
            expected.digest = record
                .certificate
                .as_ref()
                .map(|c| digest16(&certificate_token(c)));
            assert_eq!(parsed, expected, "line {line}");
        }
    }

    #[test]
    fn digest_is_stable() {
        assert_eq!(digest16("f:1,-2,2").len(), 16);
        assert_eq!(digest16("f:1,-2,2"), digest16("f:1,-2,2"));
        assert_ne!(digest16("f:1,-2,2"), digest16("f:1,2,2"));
    }

    #[test]
    fn parse_errors() {
        assert!(parse_report_line("v=2 graph=0").is_err());
        assert!(parse_report_line("graph=0 object=s: k=4").is_err()); // missing keys
        assert!(parse_report_line(
            "v=1 graph=0 object=s:+ k=4 outcome=not-4-colourable nodes=0 cert=- digest=-"
        )
        .is_err()); // no sigma
        assert!(parse_report_line("v=1 graph=zero").is_err());
        assert!(parse_report_line("junk").is_err());
    }

    #[test]
    fn empty_value_tokens() {
        // n = 0 scans produce empty signature bits and empty certificates
        let record = ScanRecord {
            graph_id: 0,
            object: ObjectId::Signature(String::new()),
            k: 4,
            outcome: Outcome::Colourable,
            nodes: 0,
            certificate: Some(Certificate::SignedColouring(vec![])),
            sigma: None,
            lists: None,
            reason: None,
            millis: None,
            digest: None,
        };
        let line = write_report_line(&record);
        let parsed = parse_report_line(&line).unwrap();
        assert_eq!(parsed.object, ObjectId::Signature(String::new()));
        assert_eq!(parsed.certificate, Some(Certificate::SignedColouring(vec![])));
    }
}
