use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use super::ExperimentError;

pub const CSV_HEADER: &str =
    "algorithm,k,rho,m,n,eps,delta,bound,prior,trial,seed,samples,success,wall_ms";

/// One CSV row: the outcome of a single trial.
///
/// `m` and `n` are empty for prior-driven arms; `rho` is `m/n` for finite ones.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub algorithm: String,
    pub k: usize,
    pub rho: f64,
    pub m: Option<usize>,
    pub n: Option<usize>,
    pub eps: f64,
    pub delta: f64,
    pub bound: String,
    pub prior: String,
    pub trial: usize,
    pub seed: u64,
    pub samples: u64,
    pub success: bool,
    pub wall_ms: u64,
}

pub fn write_records<W: Write>(out: W, records: &[TrialRecord]) -> Result<(), ExperimentError> {
    let mut w = csv::Writer::from_writer(out);
    if records.is_empty() {
        w.write_record(CSV_HEADER.split(','))?;
    }
    for r in records {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_records<R: Read>(input: R) -> Result<Vec<TrialRecord>, ExperimentError> {
    let mut r = csv::Reader::from_reader(input);
    let header: Vec<String> = r.headers()?.iter().map(str::to_owned).collect();
    if header.join(",") != CSV_HEADER {
        return Err(ExperimentError::config(
            "csv header",
            format!("expected `{CSV_HEADER}`, found `{}`", header.join(",")),
        ));
    }
    Ok(r.deserialize().collect::<Result<Vec<TrialRecord>, _>>()?)
}
