//! JSON certificates `{claim, verdict, witness, proof, timing}`.
//! Vertex ids inside certificates are 0-indexed. `timing.elapsed_ms` is
//! only filled when the caller asks for it, so certificates are otherwise
//! byte-for-byte reproducible.

use std::time::Duration;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::bramble::Bramble;
use crate::chipfire::{Divisor, GonalityResult, GonalityStatus, WinCheck};
use crate::error::Result;
use crate::graph::Graph;
use crate::hitting::min_hitting_set;
use crate::treewidth::{validate_tree_decomposition, WidthResult, WidthStatus};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CertVerdict {
    Pass,
    Fail,
    /// The computation stopped at a budget before deciding the claim.
    Undecided,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Claim {
    /// `bramble_order`, `treewidth`, `gonality` or `winning_divisor`.
    pub kind: String,
    pub graph: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub subject: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub value: Option<i64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Timing {
    pub nodes: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub claim: Claim,
    pub verdict: CertVerdict,
    pub witness: Value,
    pub proof: Value,
    pub timing: Timing,
}

impl Certificate {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("certificate serializes")
    }

    pub fn from_json(text: &str) -> serde_json::Result<Self> {
        serde_json::from_str(text)
    }

    pub fn passed(&self) -> bool {
        self.verdict == CertVerdict::Pass
    }

    pub fn with_elapsed(mut self, elapsed: Duration) -> Self {
        self.timing.elapsed_ms = Some(elapsed.as_millis() as u64);
        self
    }
}

fn verdict(ok: bool) -> CertVerdict {
    if ok {
        CertVerdict::Pass
    } else {
        CertVerdict::Fail
    }
}

/// Computes the order of `b` and compares it with `claimed`.
pub fn verify_order_certificate(b: &Bramble, claimed: usize) -> Result<Certificate> {
    order_certificate(b, Some(claimed))
}

/// Without a claim the certificate records the computed order and passes.
pub fn order_certificate(b: &Bramble, claimed: Option<usize>) -> Result<Certificate> {
    let cert = min_hitting_set(b, None)?;
    Ok(Certificate {
        claim: Claim {
            kind: "bramble_order".into(),
            graph: b.graph().label(),
            subject: Some(b.label().name().into()),
            value: Some(claimed.unwrap_or(cert.order) as i64),
        },
        verdict: verdict(claimed.is_none_or(|c| c == cert.order)),
        witness: json!({
            "order": cert.order,
            "hitting_set": cert.witness.to_vec(),
        }),
        proof: json!({
            "elements": b.len(),
            "lower_bound": cert.proof,
        }),
        timing: Timing {
            nodes: cert.nodes,
            elapsed_ms: None,
        },
    })
}

/// Packages a solver result; with `claimed = None` the certificate passes
/// whenever the decomposition validates.
pub fn width_certificate(g: &Graph, res: &WidthResult, claimed: Option<usize>) -> Result<Certificate> {
    let valid = validate_tree_decomposition(g, &res.decomposition)?.is_valid();
    let decided = res.status == WidthStatus::Exact;
    let verdict = match claimed {
        _ if !valid => CertVerdict::Fail,
        None => CertVerdict::Pass,
        Some(c) if decided => verdict(c == res.treewidth),
        Some(c) if c < res.lower || c > res.upper => CertVerdict::Fail,
        Some(_) => CertVerdict::Undecided,
    };
    let bags: Vec<Vec<usize>> = res.decomposition.bags().iter().map(|b| b.to_vec()).collect();
    Ok(Certificate {
        claim: Claim {
            kind: "treewidth".into(),
            graph: g.label(),
            subject: None,
            value: claimed.map(|c| c as i64),
        },
        verdict,
        witness: json!({
            "treewidth": res.treewidth,
            "elimination_order": res.elimination_order,
            "bags": bags,
            "tree_edges": res.decomposition.tree_edges(),
        }),
        proof: json!({
            "method": res.method,
            "status": res.status,
            "lower": res.lower,
            "upper": res.upper,
            "decomposition_valid": valid,
        }),
        timing: Timing {
            nodes: res.nodes,
            elapsed_ms: None,
        },
    })
}

pub fn gonality_certificate(g: &Graph, res: &GonalityResult, claimed: Option<usize>) -> Certificate {
    let verdict = match (res.status, claimed) {
        (GonalityStatus::Exact, None) => CertVerdict::Pass,
        (GonalityStatus::Exact, Some(c)) => verdict(res.gonality == Some(c)),
        (_, Some(c)) if c < res.lower => CertVerdict::Fail,
        _ => CertVerdict::Undecided,
    };
    let losing: Vec<Value> = res
        .losing_proof
        .iter()
        .map(|e| json!({"placement": e.placement, "opponent": e.opponent}))
        .collect();
    Certificate {
        claim: Claim {
            kind: "gonality".into(),
            graph: g.label(),
            subject: None,
            value: claimed.map(|c| c as i64),
        },
        verdict,
        witness: json!({
            "gonality": res.gonality,
            "winning_divisor": res.winning_divisor,
        }),
        proof: json!({
            "status": res.status,
            "lower": res.lower,
            "losing_degree": res.lower.saturating_sub(1),
            "losing_placements": losing,
        }),
        timing: Timing {
            nodes: res.candidates,
            elapsed_ms: None,
        },
    }
}

pub fn winning_certificate(g: &Graph, d: &Divisor, check: &WinCheck, subject: Option<String>) -> Certificate {
    Certificate {
        claim: Claim {
            kind: "winning_divisor".into(),
            graph: g.label(),
            subject,
            value: Some(d.degree()),
        },
        verdict: verdict(check.wins),
        witness: json!({ "divisor": d }),
        proof: json!({ "failing_vertex": check.failing_vertex }),
        timing: Timing {
            nodes: g.vertex_count() as u64,
            elapsed_ms: None,
        },
    }
}
