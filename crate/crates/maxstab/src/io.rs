//! CSV formats for datasets and fit results.
//!
//! Dataset: one row per observation,
//! `d,n,model,alpha_true,obs,partition,x1,…,xd`, with the partition in its
//! text form (`1,2|3`) and maxima printed with round-trip precision.
//!
//! Fit result: `kind,alpha_hat,loglik,evaluations,converged,boundary_flag`.

use std::io::{Read, Write};
use std::path::Path;

use maxstab_core::{Dataset, FitResult, MaxBlockObservation, ModelKind, Partition};

use crate::error::{Error, Result};

fn csv_err(path: &Path) -> impl FnOnce(csv::Error) -> Error + '_ {
    move |source| Error::Csv {
        path: path.to_path_buf(),
        source,
    }
}

pub fn write_dataset<W: Write>(ds: &Dataset, out: W) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let d = ds.dim();
    let mut header: Vec<String> = ["d", "n", "model", "alpha_true", "obs", "partition"]
        .iter()
        .map(|s| s.to_string())
        .collect();
    header.extend((1..=d).map(|j| format!("x{j}")));
    w.write_record(&header)?;
    let (d_s, n_s, model_s, alpha_s) = (
        d.to_string(),
        ds.block_size().to_string(),
        ds.model.to_string(),
        ds.alpha_true.to_string(),
    );
    for (i, obs) in ds.observations().iter().enumerate() {
        let mut rec = vec![
            d_s.clone(),
            n_s.clone(),
            model_s.clone(),
            alpha_s.clone(),
            i.to_string(),
            obs.partition.to_string(),
        ];
        rec.extend(obs.maxima.iter().map(f64::to_string));
        w.write_record(&rec)?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_dataset<R: Read>(input: R) -> Result<Dataset> {
    let mut r = csv::Reader::from_reader(input);
    let bad = |msg: String| Error::Format(msg);
    let mut observations = Vec::new();
    let mut meta: Option<(usize, u64, ModelKind, f64)> = None;
    for (line, rec) in r.records().enumerate() {
        let rec = rec.map_err(|e| bad(e.to_string()))?;
        let field = |k: usize| rec.get(k).ok_or_else(|| bad(format!("row {line}: missing column {k}")));
        let d: usize = field(0)?.parse().map_err(|e| bad(format!("row {line}: d: {e}")))?;
        let n: u64 = field(1)?.parse().map_err(|e| bad(format!("row {line}: n: {e}")))?;
        let model: ModelKind = field(2)?.parse()?;
        let alpha: f64 = field(3)?.parse().map_err(|e| bad(format!("row {line}: alpha_true: {e}")))?;
        match meta {
            None => meta = Some((d, n, model, alpha)),
            Some(m) if m != (d, n, model, alpha) && !(alpha.is_nan() && m.3.is_nan()) => {
                return Err(bad(format!("row {line}: metadata differs from first row")));
            }
            _ => {}
        }
        let partition: Partition = field(5)?.parse()?;
        if rec.len() != 6 + d {
            return Err(bad(format!("row {line}: expected {} columns, got {}", 6 + d, rec.len())));
        }
        let maxima = (0..d)
            .map(|j| field(6 + j)?.parse::<f64>().map_err(|e| bad(format!("row {line}: x{}: {e}", j + 1))))
            .collect::<Result<Vec<f64>>>()?;
        observations.push(MaxBlockObservation::new(maxima, partition, n)?);
    }
    let Some((_, _, model, alpha)) = meta else {
        return Err(bad("dataset file has no observations".into()));
    };
    Ok(Dataset::new(observations, model, alpha)?)
}

pub fn save_dataset(ds: &Dataset, path: &Path) -> Result<()> {
    let file = std::fs::File::create(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    write_dataset(ds, std::io::BufWriter::new(file)).map_err(csv_err(path))
}

pub fn load_dataset(path: &Path) -> Result<Dataset> {
    let file = std::fs::File::open(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    read_dataset(std::io::BufReader::new(file))
}

pub const FIT_HEADER: [&str; 6] = ["kind", "alpha_hat", "loglik", "evaluations", "converged", "boundary_flag"];

pub fn write_fit_results<W: Write>(results: &[FitResult], out: W) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(FIT_HEADER)?;
    for r in results {
        w.write_record([
            r.kind.to_string(),
            r.alpha_hat.to_string(),
            r.loglik.to_string(),
            r.evaluations.to_string(),
            r.converged.to_string(),
            r.boundary.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}
