//! CSV records of experiment runs and the files written next to them.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::config::{ExperimentConfig, Mode};
use crate::error::{Error, Result};

/// One CSV row per experiment. Quantities a mode does not produce are empty.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentRecord {
    pub mode: Mode,
    /// Wave number (not divided by 2 pi).
    pub k: f64,
    pub q: f64,
    #[serde(rename = "N")]
    pub layers: usize,
    #[serde(rename = "N1")]
    pub blocks: Option<usize>,
    pub gamma0: f64,
    pub e_i: Option<f64>,
    pub e_f: Option<f64>,
    pub e_s: Option<f64>,
    pub iters_plain: Option<usize>,
    pub iters_precond: Option<usize>,
    pub wall_ms: f64,
}

pub const CSV_HEADER: [&str; 12] = [
    "mode",
    "k",
    "q",
    "N",
    "N1",
    "gamma0",
    "e_i",
    "e_f",
    "e_s",
    "iters_plain",
    "iters_precond",
    "wall_ms",
];

fn csv_err(e: csv::Error) -> Error {
    Error::Io(e.to_string())
}

pub fn write_records<W: std::io::Write>(out: W, records: &[ExperimentRecord]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for r in records {
        w.serialize(r).map_err(csv_err)?;
    }
    if records.is_empty() {
        w.write_record(CSV_HEADER).map_err(csv_err)?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_records<R: std::io::Read>(input: R) -> Result<Vec<ExperimentRecord>> {
    let mut r = csv::Reader::from_reader(input);
    r.deserialize().map(|row| row.map_err(csv_err)).collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResidualRow {
    pub iteration: usize,
    pub residual: f64,
    pub preconditioned_flag: bool,
}

pub fn write_residuals<W: std::io::Write>(out: W, plain: &[f64], precond: &[f64]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for (flag, hist) in [(false, plain), (true, precond)] {
        for (iteration, &residual) in hist.iter().enumerate() {
            w.serialize(ResidualRow {
                iteration,
                residual,
                preconditioned_flag: flag,
            })
            .map_err(csv_err)?;
        }
    }
    w.flush()?;
    Ok(())
}

/// `results.csv` gives `results.<suffix>`.
pub fn sibling_path(out: &Path, suffix: &str) -> PathBuf {
    let stem = out.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    out.with_file_name(format!("{stem}.{suffix}"))
}

/// Writes the record CSV at `out`, the config echo at `<out>.config.json` and,
/// when histories are given, `<out>.residuals.csv`.
pub fn write_outputs(
    out: &Path,
    record: &ExperimentRecord,
    config: &ExperimentConfig,
    histories: Option<(&[f64], &[f64])>,
) -> Result<Vec<PathBuf>> {
    let mut written = vec![out.to_path_buf()];
    write_records(std::fs::File::create(out)?, std::slice::from_ref(record))?;
    let json = sibling_path(out, "config.json");
    std::fs::write(&json, config.to_json())?;
    written.push(json);
    if let Some((plain, precond)) = histories {
        let path = sibling_path(out, "residuals.csv");
        write_residuals(std::fs::File::create(&path)?, plain, precond)?;
        written.push(path);
    }
    Ok(written)
}
