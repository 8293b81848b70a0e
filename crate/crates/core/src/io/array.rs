//! Dense signal arrays on disk.
//!
//! Binary arrays are little-endian `f32`, row-major, one row per look angle.
//! Complex arrays (`c64`) interleave real and imaginary parts. A JSON
//! sidecar next to the payload (`data.bin` pairs with `data.json`) records
//! the shape. CSV arrays need a header row: `c0,c1,...` for real data and
//! `c0_re,c0_im,c1_re,...` for complex data.

use std::fs;
use std::path::{Path, PathBuf};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::domain::{DomainDescriptor, SignalMap};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Dtype {
    F32,
    C64,
}

impl Dtype {
    fn bytes_per_value(self) -> usize {
        match self {
            Dtype::F32 => 4,
            Dtype::C64 => 8,
        }
    }
}

/// JSON sidecar of a binary array.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ArrayHeader {
    pub rows: usize,
    pub cols: usize,
    pub dtype: Dtype,
    #[serde(default = "degrees")]
    pub angular_units: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub range_bin_m: Option<f64>,
}

fn degrees() -> String {
    "deg".to_string()
}

/// Sidecar path for a binary payload.
pub fn sidecar_path(payload: &Path) -> PathBuf {
    payload.with_extension("json")
}

fn format_error(path: &Path, location: impl Into<String>, message: impl Into<String>) -> Error {
    Error::Format {
        path: path.to_path_buf(),
        location: location.into(),
        message: message.into(),
    }
}

/// Read a signal array, choosing the format from the extension: `.csv` is
/// CSV, anything with a JSON sidecar is binary.
pub fn ingest_array(path: &Path) -> Result<SignalMap> {
    if !path.exists() {
        return Err(Error::io(
            path,
            std::io::Error::new(std::io::ErrorKind::NotFound, "no such file"),
        ));
    }
    let is_csv = path
        .extension()
        .is_some_and(|e| e.eq_ignore_ascii_case("csv"));
    if is_csv {
        read_csv_array(path)
    } else if sidecar_path(path).exists() {
        read_binary_array(path)
    } else {
        Err(format_error(
            path,
            "file",
            "unknown array format: expected a .csv file or a binary payload with a .json sidecar",
        ))
    }
}

/// Write a map in the format implied by the extension (`.csv` or binary).
pub fn write_array(map: &SignalMap, path: &Path, range_bin_m: Option<f64>) -> Result<()> {
    if path
        .extension()
        .is_some_and(|e| e.eq_ignore_ascii_case("csv"))
    {
        write_csv_array(map, path)
    } else {
        write_binary_array(map, path, range_bin_m)
    }
}

pub fn read_binary_array(path: &Path) -> Result<SignalMap> {
    let sidecar = sidecar_path(path);
    let text = fs::read_to_string(&sidecar).map_err(|e| Error::io(&sidecar, e))?;
    let header: ArrayHeader = serde_json::from_str(&text).map_err(|e| {
        format_error(
            &sidecar,
            format!("line {}, column {}", e.line(), e.column()),
            e.to_string(),
        )
    })?;
    if header.angular_units != "deg" {
        return Err(format_error(
            &sidecar,
            "angular_units",
            format!("unsupported angular units {:?}", header.angular_units),
        ));
    }
    let bytes = fs::read(path).map_err(|e| Error::io(path, e))?;
    let row_bytes = header.cols * header.dtype.bytes_per_value();
    let expected = header.rows * row_bytes;
    if bytes.len() != expected {
        let found = bytes
            .len()
            .checked_div(row_bytes)
            .map_or(String::new(), |r| format!(" ({r} full rows)"));
        return Err(Error::Shape(format!(
            "{}: header declares {} rows x {} cols of {:?} ({expected} bytes) but the file has {} bytes{found}",
            path.display(),
            header.rows,
            header.cols,
            header.dtype,
            bytes.len()
        )));
    }
    let mut values = Vec::with_capacity(bytes.len() / 4);
    for (k, chunk) in bytes.chunks_exact(4).enumerate() {
        let v = f32::from_le_bytes(chunk.try_into().expect("chunks of four bytes"));
        if !v.is_finite() {
            return Err(format_error(
                path,
                format!("byte offset {}", 4 * k),
                format!("non-finite value {v}"),
            ));
        }
        values.push(v as f64);
    }
    let samples = match header.dtype {
        Dtype::F32 => values.into_iter().map(|v| Complex64::new(v, 0.0)).collect(),
        Dtype::C64 => values
            .chunks_exact(2)
            .map(|p| Complex64::new(p[0], p[1]))
            .collect(),
    };
    SignalMap::new(DomainDescriptor::circle(header.rows)?, header.cols, samples)
}

/// Write a circle-domain map as `f32` (real maps) or `c64` (complex maps).
/// Values are rounded to single precision.
pub fn write_binary_array(map: &SignalMap, path: &Path, range_bin_m: Option<f64>) -> Result<()> {
    let rows = map.n_points();
    let dtype = if map.is_real() {
        Dtype::F32
    } else {
        Dtype::C64
    };
    let mut bytes = Vec::with_capacity(map.samples().len() * dtype.bytes_per_value());
    for z in map.samples() {
        bytes.extend_from_slice(&(z.re as f32).to_le_bytes());
        if dtype == Dtype::C64 {
            bytes.extend_from_slice(&(z.im as f32).to_le_bytes());
        }
    }
    let header = ArrayHeader {
        rows,
        cols: map.channels(),
        dtype,
        angular_units: degrees(),
        range_bin_m,
    };
    fs::write(path, bytes).map_err(|e| Error::io(path, e))?;
    let sidecar = sidecar_path(path);
    let json = serde_json::to_string_pretty(&header).expect("header serializes");
    fs::write(&sidecar, json + "\n").map_err(|e| Error::io(&sidecar, e))
}

pub fn read_csv_array(path: &Path) -> Result<SignalMap> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .from_path(path)
        .map_err(|e| csv_error(path, e))?;
    let headers = reader.headers().map_err(|e| csv_error(path, e))?.clone();
    let names: Vec<&str> = headers.iter().collect();
    if names.is_empty() || names.iter().all(|h| h.is_empty()) {
        return Err(format_error(path, "row 1", "missing header row"));
    }
    let complex = names
        .iter()
        .any(|h| h.ends_with("_re") || h.ends_with("_im"));
    if complex {
        if !names.len().is_multiple_of(2) {
            return Err(format_error(
                path,
                "row 1",
                "complex columns must come in _re/_im pairs",
            ));
        }
        for (c, pair) in names.chunks(2).enumerate() {
            if !(pair[0].ends_with("_re") && pair[1].ends_with("_im")) {
                return Err(format_error(
                    path,
                    format!("row 1, column {}", 2 * c + 1),
                    format!(
                        "expected a _re/_im pair, found {:?}, {:?}",
                        pair[0], pair[1]
                    ),
                ));
            }
        }
    }
    let width = names.len();
    let mut values = Vec::new();
    let mut rows = 0;
    for (r, record) in reader.records().enumerate() {
        let record = record.map_err(|e| csv_error(path, e))?;
        // header is row 1 of the file
        let line = r + 2;
        if record.len() != width {
            return Err(Error::Shape(format!(
                "{}: row {line} has {} cells, header has {width}",
                path.display(),
                record.len()
            )));
        }
        for (c, cell) in record.iter().enumerate() {
            let v: f64 = cell.trim().parse().map_err(|_| {
                format_error(
                    path,
                    format!("row {line}, column {}", c + 1),
                    format!("not a number: {cell:?}"),
                )
            })?;
            if !v.is_finite() {
                return Err(format_error(
                    path,
                    format!("row {line}, column {}", c + 1),
                    "non-finite value",
                ));
            }
            values.push(v);
        }
        rows += 1;
    }
    let (channels, samples) = if complex {
        (
            width / 2,
            values
                .chunks_exact(2)
                .map(|p| Complex64::new(p[0], p[1]))
                .collect(),
        )
    } else {
        (
            width,
            values.into_iter().map(|v| Complex64::new(v, 0.0)).collect(),
        )
    };
    SignalMap::new(DomainDescriptor::circle(rows)?, channels, samples)
}

pub fn write_csv_array(map: &SignalMap, path: &Path) -> Result<()> {
    let mut writer = csv::Writer::from_path(path).map_err(|e| csv_error(path, e))?;
    let complex = !map.is_real();
    let header: Vec<String> = (0..map.channels())
        .flat_map(|c| {
            if complex {
                vec![format!("c{c}_re"), format!("c{c}_im")]
            } else {
                vec![format!("c{c}")]
            }
        })
        .collect();
    writer
        .write_record(&header)
        .map_err(|e| csv_error(path, e))?;
    for i in 0..map.n_points() {
        let row: Vec<String> = map
            .row(i)
            .iter()
            .flat_map(|z| {
                if complex {
                    vec![z.re.to_string(), z.im.to_string()]
                } else {
                    vec![z.re.to_string()]
                }
            })
            .collect();
        writer.write_record(&row).map_err(|e| csv_error(path, e))?;
    }
    writer.flush().map_err(|e| Error::io(path, e))
}

pub(crate) fn csv_error(path: &Path, e: csv::Error) -> Error {
    let location = match e.position() {
        Some(p) => format!("row {}, byte offset {}", p.line(), p.byte()),
        None => "file".to_string(),
    };
    match e.into_kind() {
        csv::ErrorKind::Io(io) => Error::io(path, io),
        kind => format_error(path, location, format!("{kind:?}")),
    }
}
