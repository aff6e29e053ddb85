//! Structured report: serde model for json output and the deterministic
//! text rendering (timings are json-only so text output is byte-stable).

use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct CheckJson {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct ValidationJson {
    pub pass: bool,
    pub checks: Vec<CheckJson>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct BFunctionJson {
    pub p: i64,
    pub roots: Vec<i64>,
    pub factored: String,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct KSupportJson {
    pub p: i64,
    pub u: i64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dim: Option<usize>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct FiberJson {
    pub p0: i64,
    pub reltype: i64,
    pub reg: i64,
    pub e: i64,
    pub r: i64,
    pub equation: String,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct HeuristicJson {
    pub degrees: Vec<(i64, i64)>,
    pub reltype_lower_bound: i64,
    pub note: String,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct OracleCellJson {
    pub p: i64,
    pub u: i64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub hilbert: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub kernel: Option<usize>,
    pub support_from_b: Option<bool>,
}

#[derive(Clone, Debug, Default, Serialize, Deserialize, PartialEq)]
pub struct Report {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub validation: Option<ValidationJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bfunctions: Option<Vec<BFunctionJson>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ksupport: Option<Vec<KSupportJson>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fiber: Option<FiberJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub heuristic_generators: Option<HeuristicJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub oracle: Option<Vec<OracleCellJson>>,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub timeouts: Vec<String>,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub errors: Vec<String>,
    pub timings: BTreeMap<String, f64>,
}

impl Report {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    /// Deterministic text rendering; timings are intentionally omitted.
    pub fn to_text(&self, bare_bfunctions: bool) -> String {
        let mut out = String::new();
        if let Some(v) = &self.validation {
            out.push_str(&format!(
                "validation: {}\n",
                if v.pass { "PASS" } else { "FAIL" }
            ));
            for c in &v.checks {
                out.push_str(&format!(
                    "  [{}] {}: {}\n",
                    if c.pass { "ok" } else { "FAIL" },
                    c.name,
                    c.detail
                ));
            }
        }
        if let Some(bs) = &self.bfunctions {
            if !bare_bfunctions {
                out.push_str("b-functions:\n");
            }
            for b in bs {
                if bare_bfunctions {
                    out.push_str(&format!("{}\n", b.factored));
                } else {
                    out.push_str(&format!("  p = {}: {}\n", b.p, b.factored));
                }
            }
        }
        if let Some(ks) = &self.ksupport {
            out.push_str("K support (p, u):\n");
            for k in ks {
                match k.dim {
                    Some(d) => out.push_str(&format!("  ({}, {})  dim = {}\n", k.p, k.u, d)),
                    None => out.push_str(&format!("  ({}, {})\n", k.p, k.u)),
                }
            }
        }
        if let Some(f) = &self.fiber {
            out.push_str(&format!(
                "fiber invariants:\n  p0 = {}\n  reltype F(I) = {}\n  reg F(I) = {}\n  e(F(I)) = {}\n  r(I) = {}\n  fiber equation: {}\n",
                f.p0, f.reltype, f.reg, f.e, f.r, f.equation
            ));
        }
        if let Some(h) = &self.heuristic_generators {
            let degs: Vec<String> = h
                .degrees
                .iter()
                .map(|(p, u)| format!("({p}, {u})"))
                .collect();
            out.push_str(&format!(
                "heuristic generator degrees: {}\n  reltype R(I) >= {}\n  note: {}\n",
                degs.join(", "),
                h.reltype_lower_bound,
                h.note
            ));
        }
        if let Some(cells) = &self.oracle {
            out.push_str("oracle grid:\n");
            for c in cells {
                let mut parts = Vec::new();
                if let Some(h) = c.hilbert {
                    parts.push(format!("hilbert = {h}"));
                }
                if let Some(k) = c.kernel {
                    parts.push(format!("kernel = {k}"));
                }
                if let Some(s) = c.support_from_b {
                    parts.push(format!("b-support = {}", if s { "yes" } else { "no" }));
                }
                out.push_str(&format!("  ({}, {}): {}\n", c.p, c.u, parts.join(", ")));
            }
        }
        for t in &self.timeouts {
            out.push_str(&format!("TIMEOUT: {t}\n"));
        }
        for e in &self.errors {
            out.push_str(&format!("ERROR: {e}\n"));
        }
        out
    }
}
