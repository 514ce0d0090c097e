//! Sea-state segmentation of long elevation records: split into windows,
//! cluster the windows by TV distance between their normalized spectra, and
//! read stationary intervals off contiguous runs of one cluster.

mod ingest;
mod pipeline;
mod report;

pub use ingest::{ingest, ingest_csv, window_split, WindowSplit, DT_TOLERANCE};
pub use pipeline::{
    contiguity, segment, summarize_window, Interval, SegmentConfig, SegmentationReport, WindowSummary,
    NO_TRANSITION_SHARE,
};
pub use report::{emit_report, write_report, ReportFile, ReportFormat};
