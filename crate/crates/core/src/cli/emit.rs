//! Report records and their csv / json / pretty renderings.

use std::fmt::Write as _;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::analysis::{ConvergenceTable, StabilityReport};
use crate::error::Result;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Json,
    Pretty,
}

/// One row of a stability-limit table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StabilityRecord {
    pub problem: u32,
    pub nodes: usize,
    #[serde(serialize_with = "ser_extended", deserialize_with = "de_extended")]
    pub gamma_m: f64,
    #[serde(rename = "gamma_M", serialize_with = "ser_extended", deserialize_with = "de_extended")]
    pub gamma_max: f64,
}

impl From<&StabilityReport> for StabilityRecord {
    fn from(r: &StabilityReport) -> Self {
        StabilityRecord {
            problem: r.problem.id(),
            nodes: r.nodes,
            gamma_m: r.gamma_m,
            gamma_max: r.gamma_max,
        }
    }
}

/// One row of a convergence table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceRecord {
    pub nodes: usize,
    #[serde(rename = "err_p_L2")]
    pub err_p_l2: f64,
    #[serde(rename = "err_w_H1")]
    pub err_w_h1: f64,
    #[serde(rename = "err_w_H1_linear")]
    pub err_w_h1_linear: f64,
    pub order: Option<f64>,
}

impl ConvergenceRecord {
    pub fn rows(table: &ConvergenceTable) -> Vec<Self> {
        table
            .rows
            .iter()
            .map(|r| ConvergenceRecord {
                nodes: r.nodes,
                err_p_l2: r.err_p_l2,
                err_w_h1: r.err_w_h1,
                err_w_h1_linear: r.err_w_h1_linear,
                order: r.order,
            })
            .collect()
    }
}

/// One inf-sup estimate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InfSupRecord {
    pub problem: u32,
    pub nodes: usize,
    pub element: String,
    pub beta: f64,
    pub kernel_dim: usize,
}

/// A report renders as a plain array of records.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(untagged)]
pub enum Report {
    Stability(Vec<StabilityRecord>),
    Convergence(Vec<ConvergenceRecord>),
    InfSup(Vec<InfSupRecord>),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportKind {
    Stability,
    Convergence,
    InfSup,
}

impl Report {
    pub fn kind(&self) -> ReportKind {
        match self {
            Report::Stability(_) => ReportKind::Stability,
            Report::Convergence(_) => ReportKind::Convergence,
            Report::InfSup(_) => ReportKind::InfSup,
        }
    }
}

/// Infinite loads are written as the strings `"inf"` / `"-inf"`.
fn ser_extended<S: Serializer>(v: &f64, s: S) -> std::result::Result<S::Ok, S::Error> {
    if v.is_infinite() {
        s.serialize_str(if *v > 0.0 { "inf" } else { "-inf" })
    } else {
        s.serialize_f64(*v)
    }
}

fn de_extended<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<f64, D::Error> {
    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Num {
        F(f64),
        S(String),
    }
    match Num::deserialize(d)? {
        Num::F(v) => Ok(v),
        Num::S(s) => match s.as_str() {
            "inf" => Ok(f64::INFINITY),
            "-inf" => Ok(f64::NEG_INFINITY),
            other => Err(serde::de::Error::custom(format!("invalid load value {other:?}"))),
        },
    }
}

/// Critical loads with two decimals; unbounded limits as `inf` / `-inf`.
pub fn format_load(v: f64) -> String {
    if v.is_infinite() {
        if v > 0.0 { "inf" } else { "-inf" }.to_string()
    } else {
        format!("{v:.2}")
    }
}

/// Errors with four decimals in scientific notation.
pub fn format_error(v: f64) -> String {
    format!("{v:.4e}")
}

fn format_order(o: Option<f64>) -> String {
    o.map(|v| format!("{v:.2}")).unwrap_or_else(|| "--".into())
}

pub fn emit(report: &Report, format: Format) -> Result<Vec<u8>> {
    let text = match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(report)?;
            s.push('\n');
            s
        }
        Format::Csv => csv(report),
        Format::Pretty => pretty(report),
    };
    Ok(text.into_bytes())
}

/// Parses the json rendering of a `kind` report.
pub fn parse_json(bytes: &[u8], kind: ReportKind) -> Result<Report> {
    Ok(match kind {
        ReportKind::Stability => Report::Stability(serde_json::from_slice(bytes)?),
        ReportKind::Convergence => Report::Convergence(serde_json::from_slice(bytes)?),
        ReportKind::InfSup => Report::InfSup(serde_json::from_slice(bytes)?),
    })
}

fn csv(report: &Report) -> String {
    let mut out = String::new();
    match report {
        Report::Stability(rows) => {
            out.push_str("problem,nodes,gamma_m,gamma_M\n");
            for r in rows {
                let _ = writeln!(out, "{},{},{},{}", r.problem, r.nodes, format_load(r.gamma_m), format_load(r.gamma_max));
            }
        }
        Report::Convergence(rows) => {
            out.push_str("nodes,err_p_L2,err_w_H1,err_w_H1_linear,order\n");
            for r in rows {
                let order = r.order.map(|o| format!("{o:.2}")).unwrap_or_default();
                let _ = writeln!(
                    out,
                    "{},{},{},{},{}",
                    r.nodes,
                    format_error(r.err_p_l2),
                    format_error(r.err_w_h1),
                    format_error(r.err_w_h1_linear),
                    order
                );
            }
        }
        Report::InfSup(rows) => {
            out.push_str("problem,nodes,element,beta,kernel_dim\n");
            for r in rows {
                let _ = writeln!(out, "{},{},{},{:.4e},{}", r.problem, r.nodes, r.element, r.beta, r.kernel_dim);
            }
        }
    }
    out
}

fn pretty(report: &Report) -> String {
    let mut out = String::new();
    match report {
        Report::Stability(rows) => {
            let _ = writeln!(out, "{:>8}  {:>10}  {:>10}", "Nodes", "gamma_m", "gamma_M");
            for r in rows {
                let nodes = format!("{0}x{0}", r.nodes);
                let _ = writeln!(out, "{:>8}  {:>10}  {:>10}", nodes, format_load(r.gamma_m), format_load(r.gamma_max));
            }
        }
        Report::Convergence(rows) => {
            let _ = writeln!(
                out,
                "{:>8}  {:>12}  {:>12}  {:>12}  {:>6}",
                "Nodes", "|p-p_h|_0", "|w-w_h|_1", "(P1 part)", "order"
            );
            for r in rows {
                let nodes = format!("{0}x{0}", r.nodes);
                let _ = writeln!(
                    out,
                    "{:>8}  {:>12}  {:>12}  {:>12}  {:>6}",
                    nodes,
                    format_error(r.err_p_l2),
                    format_error(r.err_w_h1),
                    format_error(r.err_w_h1_linear),
                    format_order(r.order)
                );
            }
        }
        Report::InfSup(rows) => {
            let _ = writeln!(out, "{:>8}  {:>6}  {:>12}  {:>6}", "Nodes", "elem", "beta", "kernel");
            for r in rows {
                let nodes = format!("{0}x{0}", r.nodes);
                let _ = writeln!(out, "{:>8}  {:>6}  {:>12.4e}  {:>6}", nodes, r.element, r.beta, r.kernel_dim);
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn stability_csv_row() {
        let report = Report::Stability(vec![
            StabilityRecord { problem: 1, nodes: 5, gamma_m: f64::NEG_INFINITY, gamma_max: f64::INFINITY },
            StabilityRecord { problem: 1, nodes: 9, gamma_m: f64::NEG_INFINITY, gamma_max: 14.68359375 },
        ]);
        let text = String::from_utf8(emit(&report, Format::Csv).unwrap()).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines, ["problem,nodes,gamma_m,gamma_M", "1,5,-inf,inf", "1,9,-inf,14.68"]);
    }

    #[test]
    fn empty_convergence_is_header_only() {
        let text = String::from_utf8(emit(&Report::Convergence(vec![]), Format::Csv).unwrap()).unwrap();
        assert_eq!(text, "nodes,err_p_L2,err_w_H1,err_w_H1_linear,order\n");
    }

    #[test]
    fn json_keys() {
        let report = Report::Stability(vec![StabilityRecord {
            problem: 2,
            nodes: 33,
            gamma_m: f64::NEG_INFINITY,
            gamma_max: 3.23828125,
        }]);
        let v: serde_json::Value = serde_json::from_slice(&emit(&report, Format::Json).unwrap()).unwrap();
        assert_eq!(v[0]["gamma_m"], "-inf");
        assert_eq!(v[0]["gamma_M"], 3.23828125);
        assert_eq!(v[0]["problem"], 2);

        let conv = Report::Convergence(vec![ConvergenceRecord {
            nodes: 5,
            err_p_l2: 0.0629,
            err_w_h1: 3.5e-5,
            err_w_h1_linear: 7.9e-6,
            order: None,
        }]);
        let v: serde_json::Value = serde_json::from_slice(&emit(&conv, Format::Json).unwrap()).unwrap();
        for key in ["nodes", "err_p_L2", "err_w_H1", "order"] {
            assert!(v[0].get(key).is_some(), "missing {key}");
        }
        assert!(v[0]["order"].is_null());
    }

    #[test]
    fn json_round_trip_is_exact() {
        let reports = [
            Report::Stability(vec![
                StabilityRecord { problem: 1, nodes: 5, gamma_m: f64::NEG_INFINITY, gamma_max: f64::INFINITY },
                StabilityRecord { problem: 1, nodes: 33, gamma_m: -0.1 - 0.2, gamma_max: 7.12890625 },
            ]),
            Report::Convergence(vec![]),
            Report::Convergence(vec![ConvergenceRecord {
                nodes: 9,
                err_p_l2: 1.0 / 3.0,
                err_w_h1: std::f64::consts::PI * 1e-7,
                err_w_h1_linear: 5e-324,
                order: Some(1.9987654321),
            }]),
            Report::InfSup(vec![InfSupRecord {
                problem: 2,
                nodes: 17,
                element: "mini".into(),
                beta: 0.30990123,
                kernel_dim: 0,
            }]),
        ];
        for r in reports {
            let bytes = emit(&r, Format::Json).unwrap();
            assert_eq!(parse_json(&bytes, r.kind()).unwrap(), r);
        }
    }

    #[test]
    fn pretty_mirrors_table_layout() {
        let report = Report::Stability(vec![StabilityRecord {
            problem: 1,
            nodes: 17,
            gamma_m: f64::NEG_INFINITY,
            gamma_max: 8.26953125,
        }]);
        let text = String::from_utf8(emit(&report, Format::Pretty).unwrap()).unwrap();
        assert!(text.contains("17x17"));
        assert!(text.contains("8.27"));
    }

    #[test]
    fn load_formatting() {
        assert_eq!(format_load(7.125), "7.12");
        assert_eq!(format_load(f64::INFINITY), "inf");
        assert_eq!(format_error(6.0469e-2), "6.0469e-2");
    }
}
