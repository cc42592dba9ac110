//! Result tables: fixed, versioned column sets per experiment, written as CSV
//! with a `#` provenance header and an `# end rows=N` footer.

use std::fs::File;
use std::io::Write;
use std::path::{Path, PathBuf};

use crate::config::{Experiment, ExperimentConfig};
use crate::error::{io_err, HarnessError, Result};

pub const SCHEMA_VERSION: u32 = 1;
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

pub fn columns(experiment: Experiment) -> &'static [&'static str] {
    match experiment {
        Experiment::Toy => &[
            "experiment_id", "x", "theta", "d", "noise_value", "simulated", "closed_form",
            "abs_error", "symmetry_gap", "wall_time_s",
        ],
        Experiment::Symmetry => &[
            "experiment_id", "model", "n", "d", "noise_value", "seed", "variance", "chi2", "lm",
            "mean_prediction", "wall_time_s",
        ],
        Experiment::Train => &[
            "experiment_id", "model", "n", "d", "noise_value", "seed", "epoch", "loss",
            "train_accuracy", "threshold", "wall_time_s",
        ],
        Experiment::Sweep => &[
            "experiment_id", "model", "n", "d", "noise_value", "seed", "accuracy", "lm", "chi2",
            "variance", "final_loss", "threshold", "wall_time_s",
        ],
        Experiment::Zne => &[
            "experiment_id", "model", "n", "d", "noise_value", "seed", "lm_unmitigated",
            "lm_mitigated", "chi2_unmitigated", "chi2_mitigated", "error_unmitigated",
            "error_mitigated", "wall_time_s",
        ],
    }
}

/// Parsed result file.
#[derive(Clone, Debug, PartialEq)]
pub struct Table {
    pub experiment: Experiment,
    pub config_hash: String,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn column(&self, name: &str) -> Option<usize> {
        columns(self.experiment).iter().position(|c| *c == name)
    }

    pub fn text<'a>(&self, row: &'a [String], name: &str) -> &'a str {
        &row[self.column(name).expect("known column")]
    }

    pub fn num(&self, row: &[String], name: &str) -> f64 {
        self.text(row, name).parse().unwrap_or(f64::NAN)
    }
}

/// Single writer for one result file. Rows are appended in the order given;
/// [`finish`](Self::finish) writes the footer and moves the file into place.
pub struct Appender {
    writer: csv::Writer<File>,
    partial: PathBuf,
    target: PathBuf,
    rows: usize,
    width: usize,
}

impl Appender {
    pub fn create(target: &Path, cfg: &ExperimentConfig) -> Result<Self> {
        let partial = target.with_extension("csv.partial");
        let mut file = File::create(&partial).map_err(io_err(&partial))?;
        let mut head = format!(
            "# eqnn-noise-lab {TOOL_VERSION}\n# schema {} v{SCHEMA_VERSION}\n# config-hash {}\n# config:\n",
            cfg.experiment,
            cfg.hash()
        );
        for line in cfg.resolved_toml().lines() {
            if line.is_empty() {
                head.push_str("#\n");
            } else {
                head.push_str(&format!("#   {line}\n"));
            }
        }
        file.write_all(head.as_bytes()).map_err(io_err(&partial))?;
        let mut writer = csv::Writer::from_writer(file);
        let cols = columns(cfg.experiment);
        writer.write_record(cols)?;
        Ok(Self {
            writer,
            partial,
            target: target.to_path_buf(),
            rows: 0,
            width: cols.len(),
        })
    }

    pub fn append(&mut self, row: &[String]) -> Result<()> {
        assert_eq!(row.len(), self.width, "row width");
        self.writer.write_record(row)?;
        self.rows += 1;
        Ok(())
    }

    pub fn finish(self) -> Result<PathBuf> {
        let mut file = self
            .writer
            .into_inner()
            .map_err(|e| HarnessError::Io { path: self.partial.clone(), err: e.into_error() })?;
        writeln!(file, "# end rows={}", self.rows).map_err(io_err(&self.partial))?;
        file.sync_all().map_err(io_err(&self.partial))?;
        std::fs::rename(&self.partial, &self.target).map_err(io_err(&self.target))?;
        Ok(self.target)
    }

    /// Drops the partial file after a failed run.
    pub fn abandon(self) {
        let partial = self.partial.clone();
        drop(self.writer);
        let _ = std::fs::remove_file(partial);
    }
}

pub fn read_table(path: &Path) -> Result<Table> {
    let text = std::fs::read_to_string(path).map_err(io_err(path))?;
    let schema = |reason: String| HarnessError::Schema {
        path: path.to_path_buf(),
        reason,
    };
    let mut experiment = None;
    let mut config_hash = None;
    let mut footer = None;
    let mut body = String::new();
    for line in text.lines() {
        if let Some(comment) = line.strip_prefix('#') {
            let comment = comment.trim();
            if let Some(rest) = comment.strip_prefix("schema ") {
                let (name, version) = rest
                    .split_once(" v")
                    .ok_or_else(|| schema(format!("bad schema line '{comment}'")))?;
                if version != SCHEMA_VERSION.to_string() {
                    return Err(schema(format!("schema version {version}, expected {SCHEMA_VERSION}")));
                }
                experiment = Some(name.parse::<Experiment>().map_err(|e| schema(e.to_string()))?);
            } else if let Some(h) = comment.strip_prefix("config-hash ") {
                config_hash = Some(h.to_string());
            } else if let Some(n) = comment.strip_prefix("end rows=") {
                footer = Some(n.parse::<usize>().map_err(|_| schema("bad footer".into()))?);
            }
        } else if footer.is_some() {
            return Err(schema("data after footer".into()));
        } else {
            body.push_str(line);
            body.push('\n');
        }
    }
    let experiment = experiment.ok_or_else(|| schema("missing schema line".into()))?;
    let config_hash = config_hash.ok_or_else(|| schema("missing config hash".into()))?;
    let expected_rows = footer.ok_or_else(|| schema("missing end marker (truncated file?)".into()))?;

    let mut reader = csv::ReaderBuilder::new().has_headers(true).from_reader(body.as_bytes());
    let header: Vec<String> = reader
        .headers()
        .map_err(|e| schema(e.to_string()))?
        .iter()
        .map(str::to_string)
        .collect();
    let cols = columns(experiment);
    if header != cols {
        return Err(schema(format!("columns {header:?} do not match {experiment} v{SCHEMA_VERSION}")));
    }
    let mut rows = Vec::new();
    for rec in reader.records() {
        let rec = rec.map_err(|e| schema(e.to_string()))?;
        rows.push(rec.iter().map(str::to_string).collect::<Vec<_>>());
    }
    if rows.len() != expected_rows {
        return Err(schema(format!("{} rows, end marker says {expected_rows}", rows.len())));
    }
    Ok(Table {
        experiment,
        config_hash,
        rows,
    })
}
