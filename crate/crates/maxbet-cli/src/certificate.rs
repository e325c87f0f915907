//! Machine-readable certificates for certified bounds.
//!
//! A certificate is a self-describing key-value text document, one file per
//! claim, extension `.cert`. Every number that matters is an exact fraction
//! string; re-running the echoed `config` line reproduces the same bound
//! byte for byte. `wall_time_ms` is the only field expected to vary between
//! runs.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use maxbet_core::algebra::{Point, Rat};

pub const ENGINE: &str = concat!("maxbet ", env!("CARGO_PKG_VERSION"));

/// One sub-result: a solved MILP part or an oracle enumeration.
#[derive(Debug, Clone)]
pub struct PartRecord {
    pub name: String,
    pub value: Rat,
    pub status: String,
    /// Branch-and-bound node count, when the part came from the solver.
    pub node_count: Option<u64>,
    /// Enumerated face count, when the part came from the oracle.
    pub cell_count: Option<usize>,
    pub hyperplane_count: usize,
    pub witness: Option<Point>,
    pub witness_signs: Option<String>,
}

#[derive(Debug, Clone)]
pub struct Certificate {
    pub claim: String,
    pub certified: bool,
    pub n: u32,
    pub method: String,
    pub s: String,
    pub t: String,
    pub domain: String,
    pub alpha_n: Rat,
    /// Certified lower bound on the round-`n` partial-sum difference.
    pub bound: Rat,
    /// The recombined lower bound on `delta_n - alpha_n` (decomposed method).
    pub recombination: Option<Rat>,
    pub parts: Vec<PartRecord>,
    pub hyperplane_count: usize,
    pub config: String,
    pub wall_time_ms: u128,
}

impl Certificate {
    pub fn render(&self) -> String {
        fn line(out: &mut String, k: &str, v: String) {
            let _ = writeln!(out, "{}: {}", k, v);
        }
        let mut out = String::new();
        line(&mut out, "maxbet-certificate", "v1".into());
        line(&mut out, "claim", self.claim.clone());
        line(
            &mut out,
            "status",
            if self.certified { "certified".into() } else { "not-certified".into() },
        );
        line(&mut out, "n", self.n.to_string());
        line(&mut out, "method", self.method.clone());
        line(&mut out, "s", self.s.clone());
        line(&mut out, "t", self.t.clone());
        line(&mut out, "domain", self.domain.clone());
        line(&mut out, "alpha_n", self.alpha_n.to_string());
        line(&mut out, "bound", self.bound.to_string());
        if let Some(r) = &self.recombination {
            line(&mut out, "recombination", r.to_string());
        }
        line(&mut out, "hyperplane_count", self.hyperplane_count.to_string());
        let _ = writeln!(out, "parts:");
        for part in &self.parts {
            let _ = writeln!(out, "  - name: {}", part.name);
            let _ = writeln!(out, "    value: {}", part.value);
            let _ = writeln!(out, "    status: {}", part.status);
            if let Some(nodes) = part.node_count {
                let _ = writeln!(out, "    node_count: {}", nodes);
            }
            if let Some(cells) = part.cell_count {
                let _ = writeln!(out, "    cell_count: {}", cells);
            }
            let _ = writeln!(out, "    hyperplane_count: {}", part.hyperplane_count);
            if let Some(w) = &part.witness {
                let _ = writeln!(out, "    witness: {}", w);
            }
            if let Some(signs) = &part.witness_signs {
                let _ = writeln!(out, "    witness_signs: {}", signs);
            }
        }
        line(&mut out, "engine", ENGINE.into());
        line(&mut out, "config", self.config.clone());
        line(&mut out, "wall_time_ms", self.wall_time_ms.to_string());
        out
    }
}

/// Top-level scalar fields of a rendered certificate.
pub fn parse_fields(text: &str) -> BTreeMap<String, String> {
    let mut fields = BTreeMap::new();
    for line in text.lines() {
        if line.starts_with(' ') || line.starts_with('\t') {
            continue;
        }
        if let Some((key, value)) = line.split_once(':') {
            fields.insert(key.trim().to_string(), value.trim().to_string());
        }
    }
    fields
}

/// The certificate text minus the fields that legitimately vary between
/// runs (wall time); what remains must be byte-identical for any worker
/// count.
pub fn comparable_text(text: &str) -> String {
    text.lines()
        .filter(|line| !line.starts_with("wall_time_ms:"))
        .collect::<Vec<_>>()
        .join("\n")
}

#[cfg(test)]
mod tests {
    use super::*;
    use maxbet_core::algebra::rat;

    fn sample() -> Certificate {
        Certificate {
            claim: "lemma-xy".into(),
            certified: true,
            n: 4,
            method: "decomposed".into(),
            s: "(x, y, z)".into(),
            t: "(y, x, z)".into(),
            domain: "{x > 0}".into(),
            alpha_n: rat(1, 20),
            bound: rat(43, 648),
            recombination: Some(rat(53, 3240)),
            parts: vec![PartRecord {
                name: "delta-3-shifted-min".into(),
                value: rat(-1, 60),
                status: "optimal".into(),
                node_count: Some(2599),
                cell_count: None,
                hyperplane_count: 43,
                witness: Some(Point::from_ints(4, 5, 6)),
                witness_signs: Some("+-0".into()),
            }],
            hyperplane_count: 162,
            config: "certify lemma-xy --method decomposed --n 4".into(),
            wall_time_ms: 7,
        }
    }

    #[test]
    fn fields_round_trip() {
        let text = sample().render();
        let fields = parse_fields(&text);
        assert_eq!(fields["bound"], "43/648");
        assert_eq!(fields["recombination"], "53/3240");
        assert_eq!(fields["config"], "certify lemma-xy --method decomposed --n 4");
        assert_eq!(fields["status"], "certified");
    }

    #[test]
    fn wall_time_is_stripped_for_comparison() {
        let mut a = sample();
        let mut b = sample();
        a.wall_time_ms = 1;
        b.wall_time_ms = 99999;
        assert_ne!(a.render(), b.render());
        assert_eq!(comparable_text(&a.render()), comparable_text(&b.render()));
    }
}
