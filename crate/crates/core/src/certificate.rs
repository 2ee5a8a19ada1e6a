//! Text certificates for both sides of a Ramsey value.
//!
//! ```text
//! poset-ramsey-cert v1
//! kind: good-coloring
//! mode: strong
//! t: 1
//! k: 2
//! host_n: 3
//! targets: diamond:2,diamond:2
//! colors: 11121222
//! ```
//!
//! Exhaustion records carry `nodes:`, `group:` and `elapsed_ms:` instead of
//! `colors:`. They are checked by re-running the deterministic search and
//! comparing node counts.

use std::fmt::Write as _;
use std::path::Path;

use crate::coloring::{ChainColoring, RamseyInstance};
use crate::embedding::EmbeddingMode;
use crate::error::{Error, Result};
use crate::poset::parse_targets;
use crate::search::{is_ramsey_at, verify_coloring, Budget, ColoringVerdict, RamseyVerdict, SearchOptions, SearchStats};
use crate::symmetry::GroupDescriptor;

pub const CERT_HEADER: &str = "poset-ramsey-cert v1";

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CertificatePayload {
    GoodColoring(ChainColoring),
    Exhaustion {
        nodes: u64,
        group: GroupDescriptor,
        elapsed_ms: u64,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Certificate {
    pub instance: RamseyInstance,
    pub host_n: u32,
    pub payload: CertificatePayload,
}

/// Outcome of independently re-checking a certificate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CertificateCheck {
    Verified,
    /// The certificate is well-formed but false; the reason names a witness
    /// or the mismatch.
    Falsified(String),
    /// The replay of an exhaustion record ran out of budget.
    Inconclusive,
}

impl Certificate {
    pub fn good_coloring(instance: RamseyInstance, coloring: ChainColoring) -> Self {
        Certificate {
            instance,
            host_n: coloring.host_n(),
            payload: CertificatePayload::GoodColoring(coloring),
        }
    }

    pub fn exhaustion(instance: RamseyInstance, host_n: u32, stats: &SearchStats) -> Self {
        Certificate {
            instance,
            host_n,
            payload: CertificatePayload::Exhaustion {
                nodes: stats.nodes,
                group: stats.group,
                elapsed_ms: stats.elapsed.as_millis() as u64,
            },
        }
    }

    pub fn kind(&self) -> &'static str {
        match self.payload {
            CertificatePayload::GoodColoring(_) => "good-coloring",
            CertificatePayload::Exhaustion { .. } => "exhaustion",
        }
    }

    pub fn to_text(&self) -> Result<String> {
        let mut s = String::new();
        let inst = &self.instance;
        writeln!(s, "{CERT_HEADER}").unwrap();
        writeln!(s, "kind: {}", self.kind()).unwrap();
        writeln!(s, "mode: {}", inst.mode()).unwrap();
        writeln!(s, "t: {}", inst.t()).unwrap();
        writeln!(s, "k: {}", inst.k()).unwrap();
        writeln!(s, "host_n: {}", self.host_n).unwrap();
        writeln!(s, "targets: {}", inst.targets_spec()?).unwrap();
        match &self.payload {
            CertificatePayload::GoodColoring(c) => {
                let body: Vec<String> = c.colors().iter().map(|x| x.to_string()).collect();
                let sep = if inst.k() <= 9 { "" } else { "," };
                writeln!(s, "colors: {}", body.join(sep)).unwrap();
            }
            CertificatePayload::Exhaustion {
                nodes,
                group,
                elapsed_ms,
            } => {
                writeln!(s, "nodes: {nodes}").unwrap();
                writeln!(s, "group: {group}").unwrap();
                writeln!(s, "elapsed_ms: {elapsed_ms}").unwrap();
            }
        }
        Ok(s)
    }

    /// Re-checks the certificate from scratch.
    pub fn check(&self) -> Result<CertificateCheck> {
        match &self.payload {
            CertificatePayload::GoodColoring(c) => Ok(match verify_coloring(&self.instance, self.host_n, c)? {
                ColoringVerdict::Good => CertificateCheck::Verified,
                ColoringVerdict::Bad { color, witness } => {
                    CertificateCheck::Falsified(format!("color {color} contains {witness}"))
                }
            }),
            CertificatePayload::Exhaustion { nodes, group, .. } => {
                let options = SearchOptions {
                    budget: Budget::nodes(nodes.saturating_mul(2).saturating_add(4096)),
                    symmetry: !group.is_trivial(),
                    jobs: 1,
                };
                Ok(match is_ramsey_at(&self.instance, self.host_n, &options)? {
                    RamseyVerdict::Ramsey(stats) if stats.nodes == *nodes && stats.group == *group => {
                        CertificateCheck::Verified
                    }
                    RamseyVerdict::Ramsey(stats) => CertificateCheck::Falsified(format!(
                        "replay used {} nodes under {}, record says {nodes} under {group}",
                        stats.nodes, stats.group
                    )),
                    RamseyVerdict::NotRamsey(c, _) => CertificateCheck::Falsified(format!(
                        "replay found a good coloring: {}",
                        colors_string(c.colors(), c.k())
                    )),
                    RamseyVerdict::Inconclusive(_) => CertificateCheck::Inconclusive,
                })
            }
        }
    }
}

fn colors_string(colors: &[u8], k: u8) -> String {
    let body: Vec<String> = colors.iter().map(|x| x.to_string()).collect();
    body.join(if k <= 9 { "" } else { "," })
}

/// Parses without re-verifying; shape errors are parse errors.
pub fn parse_certificate(text: &str) -> Result<Certificate> {
    let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty());
    if lines.next() != Some(CERT_HEADER) {
        return Err(Error::parse(format!("missing header `{CERT_HEADER}`")));
    }
    let mut fields: Vec<(&str, &str)> = Vec::new();
    for line in lines {
        let (key, value) = line
            .split_once(':')
            .ok_or_else(|| Error::parse(format!("expected `key: value`, got `{line}`")))?;
        fields.push((key.trim(), value.trim()));
    }
    let get = |key: &str| -> Result<&str> {
        fields
            .iter()
            .find(|(k, _)| *k == key)
            .map(|(_, v)| *v)
            .ok_or_else(|| Error::parse(format!("missing field `{key}`")))
    };
    fn num<T: std::str::FromStr>(key: &str, v: &str) -> Result<T> {
        v.parse()
            .map_err(|_| Error::parse(format!("field `{key}` is not an integer: `{v}`")))
    }
    let mode: EmbeddingMode = get("mode")?.parse().map_err(|e: Error| Error::parse(e.to_string()))?;
    let t: usize = num("t", get("t")?)?;
    let k: u8 = num("k", get("k")?)?;
    let host_n: u32 = num("host_n", get("host_n")?)?;
    let targets = parse_targets(get("targets")?).map_err(|e| Error::parse(e.to_string()))?;
    if targets.len() != k as usize {
        return Err(Error::parse(format!("k = {k} but {} targets listed", targets.len())));
    }
    let instance = RamseyInstance::new(t, targets, mode).map_err(|e| Error::parse(e.to_string()))?;
    let payload = match get("kind")? {
        "good-coloring" => {
            let raw = get("colors")?;
            let colors: Vec<u8> = if raw.is_empty() {
                Vec::new()
            } else if k <= 9 {
                raw.chars()
                    .map(|ch| {
                        ch.to_digit(10)
                            .map(|d| d as u8)
                            .ok_or_else(|| Error::parse(format!("bad color digit `{ch}`")))
                    })
                    .collect::<Result<_>>()?
            } else {
                raw.split(',').map(|v| num("colors", v.trim())).collect::<Result<_>>()?
            };
            let coloring =
                ChainColoring::new(host_n, t, k, colors).map_err(|e| Error::parse(e.to_string()))?;
            CertificatePayload::GoodColoring(coloring)
        }
        "exhaustion" => CertificatePayload::Exhaustion {
            nodes: num("nodes", get("nodes")?)?,
            group: get("group")?.parse()?,
            elapsed_ms: num("elapsed_ms", get("elapsed_ms")?)?,
        },
        other => return Err(Error::parse(format!("unknown certificate kind `{other}`"))),
    };
    Ok(Certificate {
        instance,
        host_n,
        payload,
    })
}

/// Parses and re-verifies; anything short of [`CertificateCheck::Verified`]
/// is an error.
pub fn load_certificate_str(text: &str) -> Result<Certificate> {
    let cert = parse_certificate(text)?;
    match cert.check()? {
        CertificateCheck::Verified => Ok(cert),
        CertificateCheck::Falsified(why) => Err(Error::Verification(why)),
        CertificateCheck::Inconclusive => {
            Err(Error::Verification("replay exceeded its node budget".into()))
        }
    }
}

pub fn load_certificate(path: impl AsRef<Path>) -> Result<Certificate> {
    load_certificate_str(&std::fs::read_to_string(path)?)
}

/// Writes the certificate; good colorings are re-verified first.
pub fn emit_certificate(cert: &Certificate, path: impl AsRef<Path>) -> Result<()> {
    if let CertificatePayload::GoodColoring(_) = cert.payload {
        if let CertificateCheck::Falsified(why) = cert.check()? {
            return Err(Error::Verification(why));
        }
    }
    std::fs::write(path, cert.to_text()?)?;
    Ok(())
}


#[cfg(test)]
mod tests {
    use super::*;

    fn diamond_instance() -> RamseyInstance {
        RamseyInstance::new(1, parse_targets("diamond:2,diamond:2").unwrap(), EmbeddingMode::Strong).unwrap()
    }

    fn band_coloring() -> ChainColoring {
        ChainColoring::from_element_fn(3, 2, |s| if s.count_ones() <= 1 { 1 } else { 2 }).unwrap()
    }

    #[test]
    fn round_trip() {
        let cert = Certificate::good_coloring(diamond_instance(), band_coloring());
        let text = cert.to_text().unwrap();
        assert!(text.contains("colors: 11121222"));
        assert_eq!(load_certificate_str(&text).unwrap(), cert);
    }

    #[test]
    fn wrong_length_is_a_parse_error() {
        let text = Certificate::good_coloring(diamond_instance(), band_coloring())
            .to_text()
            .unwrap()
            .replace("11121222", "1112122");
        assert!(matches!(parse_certificate(&text), Err(Error::Parse(_))));
    }

    #[test]
    fn tampered_coloring_fails() {
        // recoloring {1,2} with color 1 puts B_2 entirely into color 1
        let text = Certificate::good_coloring(diamond_instance(), band_coloring())
            .to_text()
            .unwrap()
            .replace("11121222", "11111222");
        assert!(matches!(load_certificate_str(&text), Err(Error::Verification(_))));
    }

    #[test]
    fn wide_palette_uses_commas() {
        let targets = ["chain:2"; 10].join(",");
        let inst = RamseyInstance::new(1, parse_targets(&targets).unwrap(), EmbeddingMode::Weak).unwrap();
        let c = ChainColoring::from_element_fn(1, 10, |s| s as u8 + 1).unwrap();
        let cert = Certificate::good_coloring(inst, c);
        let text = cert.to_text().unwrap();
        assert!(text.contains("colors: 1,2"));
        assert_eq!(parse_certificate(&text).unwrap(), cert);
    }

    #[test]
    fn bad_header() {
        assert!(parse_certificate("poset-ramsey-cert v2\n").is_err());
    }
}
