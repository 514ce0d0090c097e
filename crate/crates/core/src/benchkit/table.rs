use std::fmt::Write as _;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::experiment::ExperimentId;
use crate::clusterkit::Linkage;
use crate::distkit::Measure;
use crate::error::{format_err, invalid, Result};
use crate::simkit::WindowLabel;

/// Mean Sim score of every measure for one `(T, k)` setting.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScoreRow {
    pub t: usize,
    pub k: usize,
    /// Replications that completed.
    pub n: usize,
    /// One mean per measure, aligned with [`ResultTable::measures`].
    pub means: Vec<f64>,
}

/// Window-by-cluster assignment counts over replications.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CountTable {
    pub k: usize,
    pub linkage: Linkage,
    pub n: usize,
    pub truth: Vec<WindowLabel>,
    /// `counts[w][c]`: replications placing window `w` in cluster `c`,
    /// clusters numbered by their earliest window.
    pub counts: Vec<Vec<usize>>,
    /// `joins[w][p]`: replications where window `w` shares a cluster with the
    /// majority of phase `p`'s windows in that same replication.
    #[serde(default)]
    pub joins: Vec<Vec<usize>>,
}

impl CountTable {
    /// Most frequent cluster of window `w`; ties go to the lower cluster.
    pub fn modal_cluster(&self, w: usize) -> usize {
        let row = &self.counts[w];
        (0..row.len()).fold(0, |best, c| if row[c] > row[best] { c } else { best })
    }

    /// Share of replications placing window `w` in cluster `c`.
    pub fn share(&self, w: usize, c: usize) -> f64 {
        self.counts[w][c] as f64 / self.n as f64
    }

    /// Share of replications where window `w` joined the cluster of phase `p`.
    /// Unlike [`share`](Self::share) this does not depend on cluster numbering.
    pub fn join_share(&self, w: usize, p: usize) -> f64 {
        self.joins[w][p] as f64 / self.n as f64
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultTable {
    pub experiment: ExperimentId,
    pub seed: u64,
    pub measures: Vec<Measure>,
    pub rows: Vec<ScoreRow>,
    pub transition: Vec<CountTable>,
    /// Replications aborted by an error, summed over settings.
    pub failures: usize,
}

impl ResultTable {
    pub fn score(&self, measure: Measure, t: usize, k: usize) -> Option<f64> {
        let col = self.measures.iter().position(|m| *m == measure)?;
        self.rows.iter().find(|r| r.t == t && r.k == k).map(|r| r.means[col])
    }

    pub fn counts(&self, k: usize) -> Option<&CountTable> {
        self.transition.iter().find(|c| c.k == k)
    }

    /// Parse the score CSV written by [`emit_table`].
    pub fn scores_from_csv(experiment: ExperimentId, seed: u64, s: &str) -> Result<Self> {
        let mut rdr = csv::Reader::from_reader(s.as_bytes());
        let headers = rdr.headers()?.clone();
        if headers.len() < 4 || &headers[0] != "T" || &headers[1] != "k" || &headers[2] != "N" {
            return Err(format_err(None, "expected a T,k,N,<measures...> header"));
        }
        let measures = headers
            .iter()
            .skip(3)
            .map(Measure::from_str)
            .collect::<Result<Vec<_>>>()?;
        let mut rows = Vec::new();
        for (i, rec) in rdr.records().enumerate() {
            let rec = rec?;
            let num = |j: usize| -> Result<f64> {
                rec.get(j)
                    .and_then(|v| v.parse().ok())
                    .ok_or_else(|| format_err(Some(i + 1), format!("bad value in column {}", j + 1)))
            };
            rows.push(ScoreRow {
                t: num(0)? as usize,
                k: num(1)? as usize,
                n: num(2)? as usize,
                means: (3..3 + measures.len()).map(num).collect::<Result<_>>()?,
            });
        }
        Ok(Self { experiment, seed, measures, rows, transition: Vec::new(), failures: 0 })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TableFormat {
    Csv,
    Json,
    Markdown,
}

impl FromStr for TableFormat {
    type Err = crate::Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "csv" => Ok(TableFormat::Csv),
            "json" => Ok(TableFormat::Json),
            "md" | "markdown" => Ok(TableFormat::Markdown),
            _ => Err(invalid(format!("unknown table format {s:?}"))),
        }
    }
}

fn round3(v: f64) -> f64 {
    (v * 1000.0).round() / 1000.0
}

fn truth_tag(l: &WindowLabel) -> String {
    match l {
        WindowLabel::Phase(i) => format!("phase{}", i + 1),
        WindowLabel::Transition(i) => format!("transition{}", i + 1),
    }
}

/// Render a result table. Means are printed with 3 decimals.
pub fn emit_table(t: &ResultTable, format: TableFormat) -> Result<String> {
    if t.rows.is_empty() && t.transition.is_empty() {
        return Err(invalid("empty result table"));
    }
    match format {
        TableFormat::Json => {
            let mut rounded = t.clone();
            for r in &mut rounded.rows {
                r.means.iter_mut().for_each(|v| *v = round3(*v));
            }
            Ok(serde_json::to_string_pretty(&rounded)?)
        }
        TableFormat::Csv => emit_csv(t),
        TableFormat::Markdown => Ok(emit_markdown(t)),
    }
}

fn emit_csv(t: &ResultTable) -> Result<String> {
    let mut out = csv::Writer::from_writer(Vec::new());
    if !t.rows.is_empty() {
        let mut header = vec!["T".to_string(), "k".into(), "N".into()];
        header.extend(t.measures.iter().map(|m| m.name().to_string()));
        out.write_record(&header)?;
        for r in &t.rows {
            let mut rec = vec![r.t.to_string(), r.k.to_string(), r.n.to_string()];
            rec.extend(r.means.iter().map(|v| format!("{v:.3}")));
            out.write_record(&rec)?;
        }
    } else {
        let kmax = t.transition.iter().map(|c| c.k).max().unwrap_or(0);
        let mut header = vec!["k".to_string(), "linkage".into(), "N".into(), "window".into(), "truth".into()];
        header.extend((1..=kmax).map(|c| format!("cluster{c}")));
        out.write_record(&header)?;
        for c in &t.transition {
            for (w, row) in c.counts.iter().enumerate() {
                let mut rec = vec![
                    c.k.to_string(),
                    c.linkage.to_string(),
                    c.n.to_string(),
                    (w + 1).to_string(),
                    truth_tag(&c.truth[w]),
                ];
                rec.extend((0..kmax).map(|j| row.get(j).map(|v| v.to_string()).unwrap_or_default()));
                out.write_record(&rec)?;
            }
        }
    }
    let bytes = out.into_inner().map_err(|e| invalid(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

fn emit_markdown(t: &ResultTable) -> String {
    let mut s = String::new();
    if !t.rows.is_empty() {
        let names: Vec<&str> = t.measures.iter().map(|m| m.name()).collect();
        let _ = writeln!(s, "| T | k | N | {} |", names.join(" | "));
        let _ = writeln!(s, "|---|---|---|{}", "---|".repeat(names.len()));
        for r in &t.rows {
            let vals: Vec<String> = r.means.iter().map(|v| format!("{v:.3}")).collect();
            let _ = writeln!(s, "| {} | {} | {} | {} |", r.t, r.k, r.n, vals.join(" | "));
        }
    }
    for (i, c) in t.transition.iter().enumerate() {
        if i > 0 || !t.rows.is_empty() {
            s.push('\n');
        }
        let _ = writeln!(s, "k = {}, {} linkage, N = {}\n", c.k, c.linkage, c.n);
        let cols: Vec<String> = (1..=c.k).map(|j| j.to_string()).collect();
        let _ = writeln!(s, "| window | truth | {} |", cols.join(" | "));
        let _ = writeln!(s, "|---|---|{}", "---|".repeat(c.k));
        for (w, row) in c.counts.iter().enumerate() {
            let vals: Vec<String> = row
                .iter()
                .map(|&v| if v == 0 { String::new() } else { v.to_string() })
                .collect();
            let _ = writeln!(s, "| {} | {} | {} |", w + 1, truth_tag(&c.truth[w]), vals.join(" | "));
        }
    }
    s
}
