use std::path::Path;

use serde::Serialize;

use crate::error::{Error, Result};

/// One output line. Columns that do not apply to a study are left empty.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct ResultRow {
    pub study: String,
    pub model: String,
    pub kind: Option<String>,
    pub alpha: f64,
    pub d: usize,
    pub n: u64,
    pub reps: usize,
    pub mean_bias: Option<f64>,
    pub sd: Option<f64>,
    pub mc_se: Option<f64>,
    pub t_stat: Option<f64>,
    pub significant: Option<bool>,
    pub mean_terms: Option<f64>,
    pub terms_se: Option<f64>,
    pub prob_rn: Option<f64>,
    pub prob_r: Option<f64>,
    pub ratio: Option<f64>,
    pub ratio_se: Option<f64>,
    pub ratio_exact: Option<f64>,
    pub proxy_bound: Option<f64>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct ResultTable {
    pub study: String,
    pub rows: Vec<ResultRow>,
    /// One line per (cell, likelihood) combination that was not run.
    pub skipped: Vec<String>,
}

impl ResultTable {
    pub fn find(&self, kind: Option<&str>, alpha: f64, d: usize, n: u64) -> Option<&ResultRow> {
        self.rows
            .iter()
            .find(|r| r.kind.as_deref() == kind && r.alpha == alpha && r.d == d && r.n == n)
    }

    pub fn write_csv<W: std::io::Write>(&self, out: W) -> std::result::Result<(), csv::Error> {
        let mut w = csv::Writer::from_writer(out);
        if self.rows.is_empty() {
            w.write_record(HEADER)?;
        }
        for row in &self.rows {
            w.serialize(row)?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn to_csv_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf).expect("writing to memory");
        String::from_utf8(buf).expect("csv output is utf-8")
    }

    pub fn save_csv(&self, path: &Path) -> Result<()> {
        let file = std::fs::File::create(path).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })?;
        self.write_csv(std::io::BufWriter::new(file))
            .map_err(|source| Error::Csv {
                path: path.to_path_buf(),
                source,
            })
    }
}

pub const HEADER: [&str; 20] = [
    "study",
    "model",
    "kind",
    "alpha",
    "d",
    "n",
    "reps",
    "mean_bias",
    "sd",
    "mc_se",
    "t_stat",
    "significant",
    "mean_terms",
    "terms_se",
    "prob_rn",
    "prob_r",
    "ratio",
    "ratio_se",
    "ratio_exact",
    "proxy_bound",
];
