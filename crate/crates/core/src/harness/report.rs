use std::fmt;
use std::fs;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::mixed_norm::Exponent;

/// Summary statistics of one (experiment, budget) cell.
///
/// Field order is the CSV column order.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Record {
    pub experiment: String,
    pub n: usize,
    #[serde(rename = "N1")]
    pub n1: usize,
    #[serde(rename = "N2")]
    pub n2: usize,
    pub p: Exponent,
    pub q: Exponent,
    pub u: Exponent,
    pub v: Exponent,
    /// Median repetitions, for the row-selection algorithms only.
    pub m: Option<usize>,
    pub trials: usize,
    pub mean_error: f64,
    pub std_error: f64,
    pub w_moment_error: f64,
    pub query_count: u64,
    pub bound_value: f64,
    pub seed: u64,
}

/// Ordinary least squares on `(log2 n, log2 error)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RateFit {
    pub slope: f64,
    pub intercept: f64,
    pub r2: f64,
    pub points: usize,
    /// Cells left out because their error was exactly zero.
    pub excluded_zero: usize,
}

/// Adaptive versus best concrete non-adaptive error at one budget.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GapPoint {
    pub n: usize,
    pub adaptive_error: f64,
    pub adaptive_std_error: f64,
    pub best_nonadaptive: String,
    pub nonadaptive_error: f64,
    pub nonadaptive_std_error: f64,
    /// `nonadaptive_error / (adaptive_error + f64::EPSILON)`.
    pub ratio: f64,
    pub ratio_std_error: f64,
    /// `sqrt(n) / (8 log2 n)`.
    pub threshold: f64,
    /// Same ratio against the adaptive algorithm planned to spend at most `n` queries.
    pub matched_ratio: f64,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub records: Vec<Record>,
    #[serde(default)]
    pub fit: Option<RateFit>,
    #[serde(default)]
    pub gap: Vec<GapPoint>,
    #[serde(default)]
    pub notes: Vec<String>,
}

impl Report {
    /// Orders records by `(experiment, n)`.
    pub fn sort(&mut self) {
        self.records
            .sort_by(|a, b| a.experiment.cmp(&b.experiment).then(a.n.cmp(&b.n)));
        self.gap.sort_by_key(|g| g.n);
    }

    pub fn merge(&mut self, other: Report) {
        self.records.extend(other.records);
        self.gap.extend(other.gap);
        for note in other.notes {
            if !self.notes.contains(&note) {
                self.notes.push(note);
            }
        }
        if other.fit.is_some() {
            self.fit = other.fit;
        }
        self.sort();
    }

    pub fn from_json(text: &str) -> Result<Report> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn check_finite(&self) -> Result<()> {
        for r in &self.records {
            let stats = [r.mean_error, r.std_error, r.w_moment_error, r.bound_value];
            if stats.iter().any(|x| !x.is_finite()) {
                return Err(Error::Invariant(format!("non-finite statistic in {} at n={}", r.experiment, r.n)));
            }
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Csv,
    Json,
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Format> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            other => Err(Error::Parse(format!("unknown format '{other}' (expected csv or json)"))),
        }
    }
}

impl fmt::Display for Format {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Format::Csv => "csv",
            Format::Json => "json",
        })
    }
}

pub const CSV_HEADER: &str =
    "experiment,n,N1,N2,p,q,u,v,m,trials,mean_error,std_error,w_moment_error,query_count,bound_value,seed";

/// Renders the records as CSV (header always present) or the whole report as JSON.
pub fn render(report: &Report, format: Format) -> Result<String> {
    match format {
        Format::Csv => {
            let mut out = String::from(CSV_HEADER);
            out.push('\n');
            let mut writer = csv::WriterBuilder::new().has_headers(false).from_writer(Vec::new());
            for r in &report.records {
                writer.serialize(r)?;
            }
            let bytes = writer.into_inner().map_err(|e| Error::Invariant(e.to_string()))?;
            out.push_str(&String::from_utf8(bytes).expect("csv output is utf-8"));
            Ok(out)
        }
        Format::Json => {
            let mut text = serde_json::to_string_pretty(report)?;
            text.push('\n');
            Ok(text)
        }
    }
}

/// Writes the rendered report to `path`.
pub fn emit_report(report: &Report, path: &Path, format: Format) -> Result<()> {
    let text = render(report, format)?;
    fs::write(path, text).map_err(|source| Error::Io { path: path.to_owned(), source })
}

/// Parses CSV produced by [`render`].
pub fn parse_csv(text: &str) -> Result<Vec<Record>> {
    let mut reader = csv::Reader::from_reader(text.as_bytes());
    let mut out = Vec::new();
    for row in reader.deserialize() {
        out.push(row?);
    }
    Ok(out)
}
