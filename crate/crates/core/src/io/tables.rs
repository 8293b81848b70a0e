//! CSV tables for point clouds and persistence diagrams.

use std::path::Path;

use crate::domain::{Label, PointCloud};
use crate::error::{Error, Result};
use crate::io::array::csv_error;
use crate::rips::{Feature, PersistenceDiagram};

fn label_columns(labels: Option<&[Label]>) -> Vec<&'static str> {
    match labels.and_then(|l| l.first()) {
        Some(Label::Angle(_)) => vec!["angle_deg"],
        Some(Label::AzEl { .. }) => vec!["azimuth_deg", "elevation_deg"],
        Some(Label::Param(_)) => vec!["param"],
        None => vec![],
    }
}

/// Write `label columns..., x0, x1, ...`.
pub fn write_cloud_csv(cloud: &PointCloud, path: &Path) -> Result<()> {
    let mut writer = csv::Writer::from_path(path).map_err(|e| csv_error(path, e))?;
    let label_cols = label_columns(cloud.labels());
    let mut header: Vec<String> = label_cols.iter().map(|s| s.to_string()).collect();
    header.extend((0..cloud.ambient_dim()).map(|k| format!("x{k}")));
    writer
        .write_record(&header)
        .map_err(|e| csv_error(path, e))?;
    for i in 0..cloud.len() {
        let mut row: Vec<String> = match cloud.labels().map(|l| l[i]) {
            Some(Label::Angle(a)) | Some(Label::Param(a)) => vec![a.to_string()],
            Some(Label::AzEl { azimuth, elevation }) => {
                vec![azimuth.to_string(), elevation.to_string()]
            }
            None => vec![],
        };
        row.extend(cloud.point(i).iter().map(|x| x.to_string()));
        writer.write_record(&row).map_err(|e| csv_error(path, e))?;
    }
    writer.flush().map_err(|e| Error::io(path, e))
}

/// Read a cloud written by [`write_cloud_csv`]. Columns named `x*` are
/// coordinates; recognized label columns become labels.
pub fn read_cloud_csv(path: &Path) -> Result<PointCloud> {
    let mut reader = csv::Reader::from_path(path).map_err(|e| csv_error(path, e))?;
    let headers: Vec<String> = reader
        .headers()
        .map_err(|e| csv_error(path, e))?
        .iter()
        .map(str::to_string)
        .collect();
    let coord_cols: Vec<usize> = (0..headers.len())
        .filter(|&c| headers[c].starts_with('x'))
        .collect();
    if coord_cols.is_empty() {
        return Err(Error::Format {
            path: path.to_path_buf(),
            location: "row 1".into(),
            message: "no coordinate columns (x0, x1, ...)".into(),
        });
    }
    let col = |name: &str| headers.iter().position(|h| h == name);
    let (angle, az, el, param) = (
        col("angle_deg"),
        col("azimuth_deg"),
        col("elevation_deg"),
        col("param"),
    );

    let mut coords = Vec::new();
    let mut labels = Vec::new();
    for (r, record) in reader.records().enumerate() {
        let record = record.map_err(|e| csv_error(path, e))?;
        let line = r + 2;
        let cell = |c: usize| -> Result<f64> {
            let text = record.get(c).unwrap_or("");
            text.trim().parse().map_err(|_| Error::Format {
                path: path.to_path_buf(),
                location: format!("row {line}, column {}", c + 1),
                message: format!("not a number: {text:?}"),
            })
        };
        for &c in &coord_cols {
            coords.push(cell(c)?);
        }
        match (angle, az, el, param) {
            (Some(a), ..) => labels.push(Label::Angle(cell(a)?)),
            (None, Some(a), Some(e), _) => labels.push(Label::AzEl {
                azimuth: cell(a)?,
                elevation: cell(e)?,
            }),
            (None, _, _, Some(p)) => labels.push(Label::Param(cell(p)?)),
            _ => {}
        }
    }
    let labels = (!labels.is_empty()).then_some(labels);
    PointCloud::new(coord_cols.len(), coords, labels)
}

/// Write `dim,birth,death,truncated` with `inf` for infinite deaths.
pub fn write_diagram_csv(diagram: &PersistenceDiagram, path: &Path) -> Result<()> {
    let mut writer = csv::Writer::from_path(path).map_err(|e| csv_error(path, e))?;
    writer
        .write_record(["dim", "birth", "death", "truncated"])
        .map_err(|e| csv_error(path, e))?;
    for f in diagram.features() {
        writer
            .write_record([
                f.dim.to_string(),
                f.birth.to_string(),
                f.death.to_string(),
                f.truncated.to_string(),
            ])
            .map_err(|e| csv_error(path, e))?;
    }
    writer.flush().map_err(|e| Error::io(path, e))
}

/// Read a diagram CSV. The cap is not stored in the file, so it is passed in.
pub fn read_diagram_csv(path: &Path, max_eps: f64) -> Result<PersistenceDiagram> {
    let mut reader = csv::Reader::from_path(path).map_err(|e| csv_error(path, e))?;
    let mut features = Vec::new();
    for (r, record) in reader.records().enumerate() {
        let record = record.map_err(|e| csv_error(path, e))?;
        let line = r + 2;
        let bad = |c: usize, what: &str| Error::Format {
            path: path.to_path_buf(),
            location: format!("row {line}, column {}", c + 1),
            message: format!("expected {what}, found {:?}", record.get(c).unwrap_or("")),
        };
        let get = |c: usize| record.get(c).unwrap_or("").trim();
        let dim: usize = get(0).parse().map_err(|_| bad(0, "a dimension"))?;
        let birth: f64 = get(1).parse().map_err(|_| bad(1, "a number"))?;
        let death: f64 = get(2).parse().map_err(|_| bad(2, "a number or inf"))?;
        let truncated: bool = get(3).parse().map_err(|_| bad(3, "true or false"))?;
        if dim > 2 || !(birth <= death) {
            return Err(bad(0, "a well-formed feature"));
        }
        features.push(Feature {
            dim,
            birth,
            death,
            truncated,
        });
    }
    Ok(PersistenceDiagram::new(features, max_eps))
}
