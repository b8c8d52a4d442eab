use std::fs::File;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::RateReport;
use crate::error::{Error, Result};

pub const DATA_HEADER: [&str; 9] = ["case", "d", "h", "z_re", "z_im", "norm_estimate", "residual_max", "iterations", "seed"];
pub const RATE_HEADER: [&str; 9] = ["case", "d", "z_re", "z_im", "slope", "intercept", "r2", "expected", "pass"];

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DataRow {
    pub case: String,
    pub d: usize,
    pub h: f64,
    pub z_re: f64,
    pub z_im: f64,
    pub norm_estimate: f64,
    pub residual_max: f64,
    pub iterations: usize,
    pub seed: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RateRow {
    pub case: String,
    pub d: usize,
    pub z_re: f64,
    pub z_im: f64,
    pub slope: f64,
    pub intercept: f64,
    pub r2: f64,
    pub expected: f64,
    pub pass: bool,
}

impl RateReport {
    pub fn data_rows(&self) -> Vec<DataRow> {
        self.cells
            .iter()
            .map(|c| DataRow {
                case: self.case.to_string(),
                d: self.dim,
                h: c.h,
                z_re: c.z.re,
                z_im: c.z.im,
                norm_estimate: c.norm_estimate,
                residual_max: c.residual_max,
                iterations: c.iterations,
                seed: self.seed,
            })
            .collect()
    }

    pub fn rate_rows(&self) -> Vec<RateRow> {
        self.rates
            .iter()
            .map(|r| {
                let (slope, intercept, r2) = r.fit.map_or((f64::NAN, f64::NAN, f64::NAN), |f| (f.slope, f.intercept, f.r2));
                RateRow {
                    case: self.case.to_string(),
                    d: self.dim,
                    z_re: r.z.re,
                    z_im: r.z.im,
                    slope,
                    intercept,
                    r2,
                    expected: self.expected,
                    pass: r.pass,
                }
            })
            .collect()
    }
}

/// `out.csv` ↦ `out.rates.csv`.
pub fn rates_path(path: &Path) -> PathBuf {
    let stem = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    path.with_file_name(format!("{stem}.rates.csv"))
}

fn write_table<T: Serialize>(path: &Path, header: &[&str], rows: &[T]) -> Result<()> {
    let csv_err = |source| Error::Csv {
        path: path.to_path_buf(),
        source,
    };
    let file = File::create(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(file);
    w.write_record(header).map_err(csv_err)?;
    for row in rows {
        w.serialize(row).map_err(csv_err)?;
    }
    w.flush().map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn read_table<T: for<'de> Deserialize<'de>>(path: &Path, header: &[&str]) -> Result<Vec<T>> {
    let csv_err = |source| Error::Csv {
        path: path.to_path_buf(),
        source,
    };
    let mut r = csv::Reader::from_path(path).map_err(csv_err)?;
    let found: Vec<String> = r.headers().map_err(csv_err)?.iter().map(str::to_owned).collect();
    if found != header {
        return Err(Error::Validation(format!("{}: unexpected header {found:?}", path.display())));
    }
    r.deserialize().collect::<std::result::Result<_, _>>().map_err(csv_err)
}

/// Writes the data table to `path` and the rate table to [`rates_path`].
pub fn emit_csv(report: &RateReport, path: &Path) -> Result<()> {
    write_table(path, &DATA_HEADER, &report.data_rows())?;
    write_table(&rates_path(path), &RATE_HEADER, &report.rate_rows())
}

/// Reads back both tables written by [`emit_csv`].
pub fn read_csv(path: &Path) -> Result<(Vec<DataRow>, Vec<RateRow>)> {
    Ok((read_table(path, &DATA_HEADER)?, read_table(&rates_path(path), &RATE_HEADER)?))
}
