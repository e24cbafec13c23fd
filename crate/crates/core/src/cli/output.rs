//! Trajectory CSV and report JSON encodings.

use std::io::{Read, Write};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::memristor::TrajectoryPoint;
use crate::scalar::{as_f64, Real};

/// Exact CSV header of trajectory files.
pub const CSV_HEADER: [&str; 5] = ["t", "control", "response", "phi", "n_env"];

/// Twelve significant digits in scientific notation.
pub fn format_value(x: f64) -> String {
    format!("{x:.11e}")
}

fn csv_error(e: csv::Error) -> Error {
    Error::invalid(format!("csv: {e}"))
}

/// Writes the header and one row per sample.
pub fn write_trajectory_csv<T: Real, W: Write>(
    points: &[TrajectoryPoint<T>],
    out: W,
) -> Result<()> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(out);
    w.write_record(CSV_HEADER).map_err(csv_error)?;
    for p in points {
        w.write_record(
            [p.t, p.control, p.response, p.phi, p.n_env].map(|x| format_value(as_f64(x))),
        )
        .map_err(csv_error)?;
    }
    w.flush().map_err(|e| Error::invalid(format!("write: {e}")))
}

/// Parses a file produced by [`write_trajectory_csv`].
pub fn read_trajectory_csv<R: Read>(input: R) -> Result<Vec<TrajectoryPoint<f64>>> {
    let mut r = csv::Reader::from_reader(input);
    let header = r.headers().map_err(csv_error)?;
    if header.iter().ne(CSV_HEADER) {
        return Err(Error::invalid(format!(
            "unexpected trajectory header {:?}",
            header.iter().collect::<Vec<_>>()
        )));
    }
    let mut points = Vec::new();
    for record in r.records() {
        let record = record.map_err(csv_error)?;
        let mut v = [0.0f64; 5];
        for (slot, field) in v.iter_mut().zip(record.iter()) {
            *slot = field
                .parse()
                .map_err(|e| Error::invalid(format!("bad number {field:?}: {e}")))?;
        }
        if record.len() != 5 {
            return Err(Error::invalid(format!(
                "row has {} fields, expected 5",
                record.len()
            )));
        }
        points.push(TrajectoryPoint {
            t: v[0],
            control: v[1],
            response: v[2],
            phi: v[3],
            n_env: v[4],
        });
    }
    Ok(points)
}

/// Pretty JSON followed by a newline.
pub fn write_json<S: Serialize, W: Write>(value: &S, mut out: W) -> Result<()> {
    serde_json::to_writer_pretty(&mut out, value)
        .map_err(|e| Error::invalid(format!("json: {e}")))?;
    out.write_all(b"\n")
        .map_err(|e| Error::invalid(format!("write: {e}")))
}
