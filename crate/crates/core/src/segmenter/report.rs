use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::pipeline::SegmentationReport;
use crate::error::{invalid, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ReportFormat {
    Json,
    Csv,
    Gnuplot,
}

impl FromStr for ReportFormat {
    type Err = crate::Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "json" => Ok(ReportFormat::Json),
            "csv" => Ok(ReportFormat::Csv),
            "gnuplot" | "gp" => Ok(ReportFormat::Gnuplot),
            _ => Err(invalid(format!("unknown report format {s:?}"))),
        }
    }
}

/// A rendered output file: name and contents.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReportFile {
    pub name: String,
    pub contents: String,
}

/// Render a report. Json and csv give one file; gnuplot gives a data file
/// with columns `t hs tp label` and a script plotting it.
pub fn emit_report(r: &SegmentationReport, format: ReportFormat) -> Result<Vec<ReportFile>> {
    Ok(match format {
        ReportFormat::Json => vec![ReportFile {
            name: "report.json".into(),
            contents: serde_json::to_string_pretty(r)?,
        }],
        ReportFormat::Csv => vec![ReportFile { name: "windows.csv".into(), contents: windows_csv(r)? }],
        ReportFormat::Gnuplot => vec![
            ReportFile { name: "segments.dat".into(), contents: gnuplot_data(r) },
            ReportFile { name: "segments.gp".into(), contents: gnuplot_script(r, "segments.dat") },
        ],
    })
}

/// [`emit_report`] into `dir`, returning the written paths.
pub fn write_report(r: &SegmentationReport, format: ReportFormat, dir: impl AsRef<Path>) -> Result<Vec<PathBuf>> {
    let dir = dir.as_ref();
    std::fs::create_dir_all(dir)?;
    emit_report(r, format)?
        .into_iter()
        .map(|f| {
            let path = dir.join(&f.name);
            std::fs::write(&path, f.contents)?;
            Ok(path)
        })
        .collect()
}

fn windows_csv(r: &SegmentationReport) -> Result<String> {
    let mut out = csv::Writer::from_writer(Vec::new());
    out.write_record(["window", "t", "hs", "tp", "label", "interval", "degenerate", "low_confidence"])?;
    for w in &r.windows {
        let stationary = r.stationary_intervals.iter().any(|s| s.contains(w.index));
        out.write_record([
            w.index.to_string(),
            w.start_s.to_string(),
            format!("{:.4}", w.hs),
            format!("{:.4}", w.tp),
            w.label.map(|l| (l + 1).to_string()).unwrap_or_default(),
            if stationary { "stationary" } else { "transition" }.to_string(),
            w.degenerate.to_string(),
            w.low_confidence.to_string(),
        ])?;
    }
    let bytes = out.into_inner().map_err(|e| invalid(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

fn gnuplot_data(r: &SegmentationReport) -> String {
    let mut s = String::from("# t hs tp label\n");
    for w in &r.windows {
        let label = w.label.map(|l| (l + 1).to_string()).unwrap_or_else(|| "NaN".into());
        let _ = writeln!(s, "{} {:.4} {:.4} {}", w.start_s, w.hs, w.tp, label);
    }
    s
}

fn gnuplot_script(r: &SegmentationReport, data: &str) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "set multiplot layout 2,1");
    let _ = writeln!(s, "set xlabel 'time (h)'");
    let _ = writeln!(s, "set palette maxcolors {}", r.chosen_k.max(1));
    let _ = writeln!(s, "set cbrange [0.5:{}.5]", r.chosen_k.max(1));
    let _ = writeln!(s, "set cbtics 1");
    for iv in &r.transition_intervals {
        let (a, b) = (
            iv.start as f64 * r.window_samples as f64 * r.dt / 3600.0,
            iv.end as f64 * r.window_samples as f64 * r.dt / 3600.0,
        );
        let _ = writeln!(
            s,
            "set object rect from {a},graph 0 to {b},graph 1 fc rgb 'gray90' fs solid noborder behind"
        );
    }
    let _ = writeln!(s, "set ylabel 'Hs (m)'");
    let _ = writeln!(s, "plot '{data}' using ($1/3600):2:4 with points pt 7 palette notitle");
    let _ = writeln!(s, "set ylabel 'Tp (s)'");
    let _ = writeln!(s, "plot '{data}' using ($1/3600):3:4 with points pt 7 palette notitle");
    let _ = writeln!(s, "unset multiplot");
    s
}
