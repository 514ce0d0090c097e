use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::{Parser, Subcommand, ValueEnum};

use tvclust::benchkit::{emit_table, run_experiment, ExperimentId, ExperimentSpec, TableFormat};
use tvclust::clusterkit::Linkage;
use tvclust::distkit::Measure;
use tvclust::segmenter::{emit_report, ingest, segment, write_report, ReportFormat, SegmentConfig};
use tvclust::simkit::{
    save_series_csv, simulate_transition_record, PeakConvention, TransitionMode, TransitionScenario,
    WindowLabel,
};
use tvclust::Error;

#[derive(Parser)]
#[command(name = "tvclust", version, about = "Cluster time series by TV distance between normalized spectra")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run a simulation benchmark and write its result table.
    Experiment(ExperimentArgs),
    /// Segment an elevation record into stationary and transition intervals.
    Segment(SegmentArgs),
    /// Simulate a multi-phase record as `t,x` CSV.
    Simulate(SimulateArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Convention {
    /// Peak frequency pi / Tp.
    Pi,
    /// Peak frequency 2 pi / Tp.
    TwoPi,
}

impl From<Convention> for PeakConvention {
    fn from(c: Convention) -> Self {
        match c {
            Convention::Pi => PeakConvention::PiOverTp,
            Convention::TwoPi => PeakConvention::TwoPiOverTp,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Windowed,
    Continuous,
}

impl From<Mode> for TransitionMode {
    fn from(m: Mode) -> Self {
        match m {
            Mode::Windowed => TransitionMode::Windowed,
            Mode::Continuous => TransitionMode::Continuous,
        }
    }
}

#[derive(clap::Args)]
struct ExperimentArgs {
    /// 1, 2, 3 or transition.
    #[arg(long)]
    id: ExperimentId,
    /// Series lengths, comma separated.
    #[arg(long = "T", value_delimiter = ',')]
    lengths: Option<Vec<usize>>,
    /// Replications.
    #[arg(long = "N")]
    replications: Option<usize>,
    /// Cluster counts, comma separated.
    #[arg(long = "k", value_delimiter = ',')]
    ks: Option<Vec<usize>>,
    /// Measure names, comma separated (ACFU, ACFG, P, NP, LP, LNP, CEP, TV, L1, W, ISD).
    #[arg(long, value_delimiter = ',')]
    measures: Option<Vec<Measure>>,
    #[arg(long)]
    linkage: Option<Linkage>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Peak-frequency convention of the wave spectra.
    #[arg(long, value_enum)]
    convention: Option<Convention>,
    /// Transition scheme of the transition study.
    #[arg(long, value_enum)]
    transition_mode: Option<Mode>,
    /// Scenario JSON for the transition study.
    #[arg(long)]
    scenario: Option<PathBuf>,
    /// csv, json or md.
    #[arg(long, default_value = "csv")]
    format: TableFormat,
    /// Output file; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(clap::Args)]
struct SegmentArgs {
    /// `t,x` CSV record.
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long, default_value_t = 1800.0)]
    window_s: f64,
    #[arg(long, default_value = "average")]
    linkage: Linkage,
    /// Candidate k for Dunn's index, as `min:max`.
    #[arg(long, default_value = "2:10")]
    k_range: String,
    /// Use this k instead of Dunn's choice.
    #[arg(long)]
    k: Option<usize>,
    #[arg(long, default_value_t = 3)]
    min_run: usize,
    /// Silhouette revision passes.
    #[arg(long, default_value_t = 1)]
    revision_rounds: usize,
    /// JSON report; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Also write the per-window CSV here.
    #[arg(long)]
    csv: Option<PathBuf>,
    /// Directory for a gnuplot script and data file.
    #[arg(long)]
    emit_gnuplot: Option<PathBuf>,
}

#[derive(clap::Args)]
struct SimulateArgs {
    /// Scenario JSON; the three-phase default when absent.
    #[arg(long)]
    scenario: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "pi")]
    convention: Convention,
    #[arg(long, value_enum, default_value = "windowed")]
    transition_mode: Mode,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
    /// Also write `window,truth` labels.
    #[arg(long)]
    labels: Option<PathBuf>,
}

fn parse_range(s: &str) -> anyhow::Result<(usize, usize)> {
    let (a, b) = s.split_once(':').context("k range must look like 2:10")?;
    Ok((a.trim().parse()?, b.trim().parse()?))
}

fn write_out(out: Option<&PathBuf>, text: &str) -> anyhow::Result<()> {
    match out {
        Some(p) => std::fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run_experiment_cmd(a: ExperimentArgs) -> anyhow::Result<()> {
    let mut spec = ExperimentSpec::published(a.id);
    if let Some(v) = a.lengths {
        spec.lengths = v;
    }
    if let Some(n) = a.replications {
        spec.replications = n;
    }
    if let Some(v) = a.ks {
        spec.ks = v;
    }
    if let Some(v) = a.measures {
        spec.measures = v;
    }
    if let Some(l) = a.linkage {
        spec.linkage = l;
    }
    if let Some(c) = a.convention {
        spec.convention = c.into();
    }
    if let Some(m) = a.transition_mode {
        spec.transition_mode = m.into();
    }
    if let Some(p) = a.scenario {
        let text = std::fs::read_to_string(&p).with_context(|| format!("reading {}", p.display()))?;
        spec.scenario = Some(TransitionScenario::from_json(&text)?);
    }
    spec.seed = a.seed;
    let table = run_experiment(&spec)?;
    if table.failures > 0 {
        eprintln!("{} replications failed and were skipped", table.failures);
    }
    write_out(a.out.as_ref(), &emit_table(&table, a.format)?)
}

fn run_segment_cmd(a: SegmentArgs) -> anyhow::Result<()> {
    let (k_min, k_max) = parse_range(&a.k_range)?;
    let cfg = SegmentConfig {
        window_len_s: a.window_s,
        linkage: a.linkage,
        k_min,
        k_max,
        k: a.k,
        min_run: a.min_run,
        revision_rounds: a.revision_rounds,
        ..Default::default()
    };
    let ts = ingest(&a.input)?;
    let report = segment(&ts, &cfg)?;
    if report.dropped_seconds > 0.0 {
        eprintln!("dropped a {} s partial window at the end", report.dropped_seconds);
    }
    if !report.excluded.is_empty() {
        eprintln!("constant windows excluded: {:?}", report.excluded);
    }
    if report.no_transition_found {
        eprintln!("no transition found");
    }
    let json = emit_report(&report, ReportFormat::Json)?.remove(0);
    write_out(a.out.as_ref(), &json.contents)?;
    if let Some(p) = a.csv {
        let file = emit_report(&report, ReportFormat::Csv)?.remove(0);
        std::fs::write(&p, file.contents).with_context(|| format!("writing {}", p.display()))?;
    }
    if let Some(dir) = a.emit_gnuplot {
        write_report(&report, ReportFormat::Gnuplot, dir)?;
    }
    Ok(())
}

fn run_simulate_cmd(a: SimulateArgs) -> anyhow::Result<()> {
    let scenario = match a.scenario {
        Some(p) => {
            let text = std::fs::read_to_string(&p).with_context(|| format!("reading {}", p.display()))?;
            TransitionScenario::from_json(&text)?
        }
        None => {
            let mut s = TransitionScenario::three_phase_with(a.convention.into());
            s.mode = a.transition_mode.into();
            s
        }
    };
    let rec = simulate_transition_record(&scenario, a.seed)?;
    save_series_csv(&rec.series, &a.out)?;
    if let Some(p) = a.labels {
        let mut s = String::from("window,truth\n");
        for (w, l) in rec.labels.iter().enumerate() {
            let tag = match l {
                WindowLabel::Phase(i) => format!("phase{}", i + 1),
                WindowLabel::Transition(i) => format!("transition{}", i + 1),
            };
            s.push_str(&format!("{},{tag}\n", w + 1));
        }
        std::fs::write(&p, s).with_context(|| format!("writing {}", p.display()))?;
    }
    Ok(())
}

/// 2 for malformed input, 3 for degenerate data, 1 otherwise.
fn exit_code(e: &anyhow::Error) -> u8 {
    match e.downcast_ref::<Error>() {
        Some(Error::Format { .. } | Error::Csv(_) | Error::Json(_)) => 2,
        Some(Error::Degenerate(_)) => 3,
        _ => 1,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let res = match cli.cmd {
        Cmd::Experiment(a) => run_experiment_cmd(a),
        Cmd::Segment(a) => run_segment_cmd(a),
        Cmd::Simulate(a) => run_simulate_cmd(a),
    };
    match res {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
