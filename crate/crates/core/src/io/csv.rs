//! Wide and long CSV curve tables, and the truth-label sidecar.
//!
//! Wide: a header row of grid coordinates, then one row per curve.
//! Long: columns `curve_id,t,value`, one row per observation.
//! Sidecar: columns `curve_id,is_outlier` with 0-based curve ids.

use std::collections::HashMap;
use std::io::{Read, Write};

use crate::data::{FunctionalDataset, Grid};
use crate::error::{Error, Result};

fn parse_cell(cell: &str, row: usize, col: usize) -> Result<f64> {
    let v: f64 = cell.trim().parse().map_err(|_| Error::Parse {
        location: format!("row {row}, column {col}"),
        message: format!("not a number: {cell:?}"),
    })?;
    if !v.is_finite() {
        return Err(Error::Parse {
            location: format!("row {row}, column {col}"),
            message: format!("not a finite number: {cell:?}"),
        });
    }
    Ok(v)
}

fn csv_error(e: csv::Error) -> Error {
    let location = e
        .position()
        .map(|p| format!("line {}", p.line()))
        .unwrap_or_else(|| "csv".to_string());
    match e.into_kind() {
        csv::ErrorKind::Io(io) => Error::Io(io),
        kind => Error::Parse {
            location,
            message: format!("{kind:?}"),
        },
    }
}

/// Reads a wide table, keeping every `stride`-th column. Rows and columns in
/// error messages are 1-based.
pub fn read_wide_csv<R: Read>(reader: R, stride: usize) -> Result<FunctionalDataset> {
    let stride = stride.max(1);
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(reader);
    let mut records = rdr.records();
    let header = match records.next() {
        Some(r) => r.map_err(csv_error)?,
        None => {
            return Err(Error::Parse {
                location: "row 1".into(),
                message: "empty input; expected a header of grid coordinates".into(),
            })
        }
    };
    let points = header
        .iter()
        .enumerate()
        .map(|(c, cell)| parse_cell(cell, 1, c + 1))
        .collect::<Result<Vec<f64>>>()?;
    let m = points.len();
    if let Some(c) = points.windows(2).position(|w| w[0] >= w[1]) {
        return Err(Error::Parse {
            location: format!("row 1, column {}", c + 2),
            message: "grid coordinates must be strictly increasing".into(),
        });
    }
    let grid = Grid::new(points)
        .map_err(|e| Error::Parse {
            location: "row 1".into(),
            message: e.to_string(),
        })?
        .subsample(stride)?;

    let mut values = Vec::new();
    let mut n = 0;
    for (k, record) in records.enumerate() {
        let row = k + 2;
        let record = record.map_err(csv_error)?;
        if record.len() == 1 && record.get(0) == Some("") {
            continue;
        }
        if record.len() != m {
            return Err(Error::Parse {
                location: format!("row {row}"),
                message: format!("{} cells, header has {m}", record.len()),
            });
        }
        for (c, cell) in record.iter().enumerate().step_by(stride) {
            values.push(parse_cell(cell, row, c + 1)?);
        }
        n += 1;
    }
    if n == 0 {
        return Err(Error::Parse {
            location: "row 2".into(),
            message: "no curves after the header".into(),
        });
    }
    FunctionalDataset::new(grid, values, n)
}

/// Writes a wide table; values use the shortest representation that parses
/// back to the same `f64`.
pub fn write_wide_csv<W: Write>(ds: &FunctionalDataset, writer: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(ds.grid().points().iter().map(f64::to_string))
        .map_err(csv_error)?;
    for row in ds.rows() {
        w.write_record(row.iter().map(f64::to_string))
            .map_err(csv_error)?;
    }
    w.flush()?;
    Ok(())
}

/// Reads a long table. Curves are ordered by first appearance of their id and
/// the grid is the sorted set of distinct `t` values.
pub fn read_long_csv<R: Read>(reader: R) -> Result<FunctionalDataset> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_reader(reader);
    let headers = rdr.headers().map_err(csv_error)?.clone();
    let col = |name: &str| {
        headers.iter().position(|h| h == name).ok_or_else(|| Error::Parse {
            location: "row 1".into(),
            message: format!("missing column {name:?} (expected curve_id,t,value)"),
        })
    };
    let (ci, ti, vi) = (col("curve_id")?, col("t")?, col("value")?);

    let mut ids: Vec<String> = Vec::new();
    let mut index: HashMap<String, usize> = HashMap::new();
    let mut cells: HashMap<(usize, u64), f64> = HashMap::new();
    let mut ts: Vec<f64> = Vec::new();
    for (k, record) in rdr.records().enumerate() {
        let row = k + 2;
        let record = record.map_err(csv_error)?;
        let id = record.get(ci).unwrap_or_default().to_string();
        let t = parse_cell(record.get(ti).unwrap_or_default(), row, ti + 1)?;
        let v = parse_cell(record.get(vi).unwrap_or_default(), row, vi + 1)?;
        let t = if t == 0.0 { 0.0 } else { t };
        let j = *index.entry(id.clone()).or_insert_with(|| {
            ids.push(id.clone());
            ids.len() - 1
        });
        if cells.insert((j, t.to_bits()), v).is_some() {
            return Err(Error::DuplicateCell { curve: id, t });
        }
        ts.push(t);
    }
    if ids.is_empty() {
        return Err(Error::Parse {
            location: "row 2".into(),
            message: "no observations".into(),
        });
    }
    ts.sort_unstable_by(f64::total_cmp);
    ts.dedup();
    let mut values = Vec::with_capacity(ids.len() * ts.len());
    for (j, id) in ids.iter().enumerate() {
        for &t in &ts {
            match cells.get(&(j, t.to_bits())) {
                Some(&v) => values.push(v),
                None => {
                    return Err(Error::IncompleteGrid {
                        curve: id.clone(),
                        t,
                    })
                }
            }
        }
    }
    FunctionalDataset::new(Grid::new(ts)?, values, ids.len())
}

pub fn write_truth<W: Write>(truth: &[bool], writer: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(["curve_id", "is_outlier"]).map_err(csv_error)?;
    for (j, &t) in truth.iter().enumerate() {
        w.write_record([j.to_string(), t.to_string()])
            .map_err(csv_error)?;
    }
    w.flush()?;
    Ok(())
}

/// Reads a truth sidecar; accepts `true`/`false` or `1`/`0`.
pub fn read_truth<R: Read>(reader: R) -> Result<Vec<bool>> {
    let mut rdr = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(reader);
    let mut truth = Vec::new();
    for (k, record) in rdr.records().enumerate() {
        let row = k + 2;
        let record = record.map_err(csv_error)?;
        let id: usize = record
            .get(0)
            .unwrap_or_default()
            .parse()
            .map_err(|_| Error::Parse {
                location: format!("row {row}, column 1"),
                message: "curve_id is not a nonnegative integer".into(),
            })?;
        if id != truth.len() {
            return Err(Error::Parse {
                location: format!("row {row}, column 1"),
                message: format!("expected curve_id {}, got {id}", truth.len()),
            });
        }
        let flag = match record.get(1).unwrap_or_default() {
            "true" | "1" => true,
            "false" | "0" => false,
            other => {
                return Err(Error::Parse {
                    location: format!("row {row}, column 2"),
                    message: format!("not a boolean: {other:?}"),
                })
            }
        };
        truth.push(flag);
    }
    Ok(truth)
}
