//! Text, JSON and CSV renderings of reports, findings and trajectories.

use std::fmt::Write as _;

use serde::Serialize;
use uindex_core::{AnomalyFinding, MetricReport, TrajectoryPoint};

/// Placeholder in the count column for papers outside the counted prefix.
pub const NOT_COUNTED: &str = "\u{2212}";

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum OutputFormat {
    Table,
    Json,
    Csv,
}

/// Metrics of the profile before any event is applied.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Snapshot {
    pub u_index: usize,
    pub h_index: usize,
    pub cif: f64,
    pub paper_count: usize,
}

impl Snapshot {
    pub fn of(report: &MetricReport) -> Self {
        Self {
            u_index: report.u_index,
            h_index: report.h_index,
            cif: report.cif,
            paper_count: report.paper_count,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReplayOutput {
    pub initial: Snapshot,
    pub points: Vec<TrajectoryPoint>,
}

pub fn json<T: Serialize>(value: &T) -> String {
    let mut out = serde_json::to_string_pretty(value).expect("report types serialize");
    out.push('\n');
    out
}

/// Left-align the first column, right-align the rest.
fn align(rows: &[Vec<String>]) -> String {
    let cols = rows.iter().map(Vec::len).max().unwrap_or(0);
    let mut widths = vec![0; cols];
    for row in rows {
        for (i, cell) in row.iter().enumerate() {
            widths[i] = widths[i].max(cell.chars().count());
        }
    }
    let mut out = String::new();
    for row in rows {
        let mut line = String::new();
        for (i, cell) in row.iter().enumerate() {
            if i == 0 {
                let _ = write!(line, "{cell:<w$}", w = widths[0]);
            } else {
                let _ = write!(line, "  {cell:>w$}", w = widths[i]);
            }
        }
        out.push_str(line.trim_end());
        out.push('\n');
    }
    out
}

fn csv_string(header: &[&str], rows: Vec<Vec<String>>) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).expect("in-memory write");
    for row in rows {
        w.write_record(&row).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("csv output is utf-8")
}

pub fn report_table(report: &MetricReport) -> String {
    let mut rows = vec![["Author", "C", "IF", "C/IF", "CIF", "N(C/IF \u{2265} CIF)"]
        .map(String::from)
        .to_vec()];
    for (i, e) in report.ranked.iter().enumerate() {
        let n = if report.counts(i) {
            e.rank.to_string()
        } else {
            NOT_COUNTED.to_owned()
        };
        rows.push(vec![
            e.id.clone(),
            e.citations.to_string(),
            format!("{:.2}", e.impact_factor),
            format!("{:.2}", e.ratio),
            format!("{:.2}", report.cif),
            n,
        ]);
    }
    let mut out = format!("author {}\n", report.author_id);
    out.push_str(&align(&rows));
    let _ = writeln!(
        out,
        "u = {}, h = {}, CIF = {:.2} ({}), N = {}",
        report.u_index,
        report.h_index,
        report.cif,
        match report.cif_source {
            uindex_core::CifSource::Computed => "computed",
            uindex_core::CifSource::Override => "override",
        },
        report.paper_count
    );
    out
}

pub fn report_csv(report: &MetricReport) -> String {
    let rows = report
        .ranked
        .iter()
        .enumerate()
        .map(|(i, e)| {
            vec![
                e.rank.to_string(),
                e.id.clone(),
                e.citations.to_string(),
                e.impact_factor.to_string(),
                e.ratio.to_string(),
                report.cif.to_string(),
                if report.counts(i) {
                    e.rank.to_string()
                } else {
                    String::new()
                },
            ]
        })
        .collect();
    csv_string(
        &[
            "rank",
            "id",
            "citations",
            "impact_factor",
            "ratio",
            "cif",
            "counted",
        ],
        rows,
    )
}

fn measurements(f: &AnomalyFinding, sep: &str, precision: Option<usize>) -> String {
    f.measurements
        .iter()
        .map(|(k, v)| match precision {
            Some(p) => format!("{k}={v:.p$}"),
            None => format!("{k}={v}"),
        })
        .collect::<Vec<_>>()
        .join(sep)
}

pub fn findings_table(report: &MetricReport, findings: &[AnomalyFinding]) -> String {
    let mut out = format!(
        "author {}: u = {}, CIF = {:.2}\n",
        report.author_id, report.u_index, report.cif
    );
    if findings.is_empty() {
        out.push_str("no anomalies found\n");
        return out;
    }
    for (i, f) in findings.iter().enumerate() {
        let _ = writeln!(
            out,
            "{}. {} [{}]",
            i + 1,
            f.category,
            f.publication_ids.join(", ")
        );
        let _ = writeln!(out, "   {}", measurements(f, ", ", Some(2)));
        let _ = writeln!(out, "   {}", f.explanation);
    }
    out
}

pub fn findings_csv(findings: &[AnomalyFinding]) -> String {
    let rows = findings
        .iter()
        .map(|f| {
            vec![
                f.category.to_string(),
                f.publication_ids.join(";"),
                measurements(f, ";", None),
                f.explanation.clone(),
            ]
        })
        .collect();
    csv_string(
        &["category", "publication_ids", "measurements", "explanation"],
        rows,
    )
}

pub fn replay_table(output: &ReplayOutput) -> String {
    let mut rows = vec![["event", "u", "h", "CIF", "N"].map(String::from).to_vec()];
    let s = output.initial;
    rows.push(vec![
        "initial".into(),
        s.u_index.to_string(),
        s.h_index.to_string(),
        format!("{:.2}", s.cif),
        s.paper_count.to_string(),
    ]);
    for p in &output.points {
        rows.push(vec![
            p.sequence_no.to_string(),
            p.u_index.to_string(),
            p.h_index.to_string(),
            format!("{:.2}", p.cif),
            p.paper_count.to_string(),
        ]);
    }
    align(&rows)
}

pub fn replay_csv(output: &ReplayOutput) -> String {
    let s = output.initial;
    let mut rows = vec![vec![
        "initial".into(),
        s.u_index.to_string(),
        s.h_index.to_string(),
        s.cif.to_string(),
        s.paper_count.to_string(),
    ]];
    rows.extend(output.points.iter().map(|p| {
        vec![
            p.sequence_no.to_string(),
            p.u_index.to_string(),
            p.h_index.to_string(),
            p.cif.to_string(),
            p.paper_count.to_string(),
        ]
    }));
    csv_string(
        &["sequence_no", "u_index", "h_index", "cif", "paper_count"],
        rows,
    )
}

/// `rank ratio` lines under a `# CIF` comment, at full precision.
pub fn plot_series(report: &MetricReport) -> String {
    let mut out = format!("# CIF {}\n", report.cif);
    for e in report.ranked.iter() {
        let _ = writeln!(out, "{} {}", e.rank, e.ratio);
    }
    out
}
