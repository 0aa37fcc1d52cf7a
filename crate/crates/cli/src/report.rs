use std::collections::BTreeMap;
use std::fmt::Write as _;

use bicrit::rational::{achieved_factor, le_scaled};
use bicrit::{Cost, EdgeId, Rational};
use serde::Serialize;

use crate::Format;

#[derive(Debug, Clone, Default, Serialize)]
pub struct Params {
    #[serde(rename = "D")]
    pub d: Option<Cost>,
    #[serde(rename = "C")]
    pub c: Option<Cost>,
    pub eps: Option<String>,
    pub gamma: Option<String>,
}

/// `value <= promised * base`, checked exactly.
#[derive(Debug, Clone, Serialize)]
pub struct Bound {
    pub what: String,
    pub value: Cost,
    pub base: Cost,
    pub promised: String,
    /// `value / base`; absent when `base` is zero.
    pub achieved: Option<String>,
    pub holds: bool,
}

impl Bound {
    pub fn new(what: impl Into<String>, value: Cost, promised: Rational, base: Cost) -> Self {
        Bound {
            what: what.into(),
            value,
            base,
            promised: promised.to_string(),
            achieved: achieved_factor(value, base).map(|r| r.to_string()),
            holds: le_scaled(value as u128, promised, base as u128),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct OracleValue {
    pub what: String,
    /// `None` when no tree satisfies the constraint.
    pub value: Option<Cost>,
}

#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    pub instance: String,
    pub algorithm: &'static str,
    pub params: Params,
    pub total_c: Cost,
    pub diameter_d: Cost,
    pub edge_ids: Vec<EdgeId>,
    pub oracle: Option<OracleValue>,
    pub oracle_note: Option<String>,
    pub guarantees: Vec<Bound>,
    pub details: BTreeMap<String, String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_time_ms: Option<f64>,
}

impl RunReport {
    pub fn violations(&self) -> Vec<String> {
        self.guarantees
            .iter()
            .filter(|b| !b.holds)
            .map(|b| {
                format!(
                    "{} = {} exceeds {} * {}",
                    b.what, b.value, b.promised, b.base
                )
            })
            .collect()
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => {
                let mut s = serde_json::to_string_pretty(self).expect("report serializes");
                s.push('\n');
                s
            }
            Format::Csv => {
                let opt = |v: Option<String>| v.unwrap_or_default();
                let bounds: Vec<String> = self
                    .guarantees
                    .iter()
                    .map(|b| {
                        format!(
                            "{}<={}*{}:{}:{}",
                            b.what,
                            b.promised,
                            b.base,
                            b.achieved.clone().unwrap_or_else(|| "-".into()),
                            if b.holds { "ok" } else { "FAIL" }
                        )
                    })
                    .collect();
                let details: Vec<String> = self
                    .details
                    .iter()
                    .map(|(k, v)| format!("{k}={v}"))
                    .collect();
                let ids: Vec<String> = self.edge_ids.iter().map(|id| id.to_string()).collect();
                let fields = [
                    self.instance.clone(),
                    self.algorithm.to_string(),
                    opt(self.params.d.map(|x| x.to_string())),
                    opt(self.params.c.map(|x| x.to_string())),
                    opt(self.params.eps.clone()),
                    opt(self.params.gamma.clone()),
                    self.total_c.to_string(),
                    self.diameter_d.to_string(),
                    opt(self
                        .oracle
                        .as_ref()
                        .and_then(|o| o.value)
                        .map(|v| v.to_string())),
                    bounds.join(";"),
                    ids.join(" "),
                    details.join(";"),
                    opt(self.wall_time_ms.map(|t| format!("{t:.3}"))),
                ];
                let mut out = String::from(
                    "instance,algorithm,D,C,eps,gamma,total_c,diameter_d,oracle_opt,guarantees,edge_ids,details,wall_time_ms\n",
                );
                let _ = writeln!(out, "{}", fields.map(|f| csv_field(&f)).join(","));
                out
            }
        }
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use bicrit::rational::{int, ratio};

    #[test]
    fn bound_is_exact() {
        let b = Bound::new("x", 3, ratio(3, 2), 2);
        assert!(b.holds);
        assert_eq!(b.achieved.as_deref(), Some("3/2"));
        assert!(!Bound::new("x", 4, ratio(3, 2), 2).holds);
        let zero = Bound::new("x", 0, int(1), 0);
        assert!(zero.holds && zero.achieved.is_none());
    }

    #[test]
    fn csv_quotes_only_when_needed() {
        assert_eq!(csv_field("a b"), "a b");
        assert_eq!(csv_field("a,b"), "\"a,b\"");
    }
}
