//! CSV and JSON file helpers.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use rieszcap::{PointCloud64, RecordedPath};
use serde::Serialize;

use crate::error::{io_err, CliError, CliResult};

fn csv_err(path: &Path) -> impl Fn(csv::Error) -> CliError + '_ {
    move |source| CliError::Csv {
        path: path.display().to_string(),
        source,
    }
}

pub fn coordinate_header(d: usize) -> Vec<String> {
    (1..=d).map(|k| format!("x{k}")).collect()
}

/// Writes points under the header `x1,…,xd`. Values use the shortest
/// representation that parses back to the same `f64`.
pub fn write_points_csv(path: &Path, points: &PointCloud64) -> CliResult<()> {
    let mut w = csv::Writer::from_path(path).map_err(csv_err(path))?;
    w.write_record(coordinate_header(points.dim())).map_err(csv_err(path))?;
    let mut row = Vec::with_capacity(points.dim());
    for p in points.iter() {
        row.clear();
        row.extend(p.iter().map(|x| x.to_string()));
        w.write_record(&row).map_err(csv_err(path))?;
    }
    w.flush().map_err(io_err(path))
}

/// Reads a hit CSV; the dimension is the number of header columns.
pub fn read_points_csv(path: &Path) -> CliResult<PointCloud64> {
    let mut r = csv::Reader::from_path(path).map_err(csv_err(path))?;
    let header = r.headers().map_err(csv_err(path))?.clone();
    let d = header.len();
    if d == 0 || header.iter().enumerate().any(|(k, h)| h.trim() != format!("x{}", k + 1)) {
        return Err(CliError::Field {
            path: path.display().to_string(),
            field: "header".into(),
            message: format!("expected x1,...,x{d}, found {}", header.iter().collect::<Vec<_>>().join(",")),
        });
    }
    let mut data = Vec::new();
    for (line, rec) in r.records().enumerate() {
        let rec = rec.map_err(csv_err(path))?;
        for (k, field) in rec.iter().enumerate() {
            let x: f64 = field.trim().parse().map_err(|_| CliError::Parse {
                path: path.display().to_string(),
                line: line + 2,
                column: k + 1,
                message: format!("cannot parse `{field}` as a number"),
            })?;
            data.push(x);
        }
    }
    Ok(PointCloud64::from_flat(d, data)?)
}

/// One row per recorded position: `path_id,step,x1,…,xd`.
pub fn write_paths_csv(path: &Path, d: usize, paths: &[RecordedPath<f64>]) -> CliResult<()> {
    let mut w = csv::Writer::from_path(path).map_err(csv_err(path))?;
    let mut header = vec!["path_id".to_string(), "step".to_string()];
    header.extend(coordinate_header(d));
    w.write_record(&header).map_err(csv_err(path))?;
    for p in paths {
        for (step, x) in p.positions.iter().enumerate() {
            let mut row = vec![p.path_id.to_string(), step.to_string()];
            row.extend(x.iter().map(|v| v.to_string()));
            w.write_record(&row).map_err(csv_err(path))?;
        }
    }
    w.flush().map_err(io_err(path))
}

pub fn write_json<S: Serialize>(path: &Path, value: &S) -> CliResult<()> {
    let file = File::create(path).map_err(io_err(path))?;
    let mut w = BufWriter::new(file);
    serde_json::to_writer_pretty(&mut w, value).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
    writeln!(w).map_err(io_err(path))?;
    w.flush().map_err(io_err(path))
}

pub fn to_json_string<S: Serialize>(value: &S) -> String {
    serde_json::to_string_pretty(value).expect("report types serialize")
}
