//! Field files: CSV tables, JSON documents and sidecars, and grayscale PPM images.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use hyperwigner::{Grid, PhaseSpaceField};
use serde::{Deserialize, Serialize};

use crate::config::{Format, RunConfig};
use crate::CliError;

pub const SCHEMA: &str = "hyperwigner-field/1";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ErrorEstimates {
    /// Tolerance requested from every quadrature behind a value.
    pub pointwise_tol: f64,
    /// (2k−1)/π ∫ W dμ − 1 and its quadrature error, when computed.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub normalization: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub normalization_error: Option<f64>,
}

/// Everything about a field file except its samples.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Metadata {
    pub schema: String,
    pub version: String,
    pub config: serde_json::Value,
    pub k: f64,
    pub s: f64,
    pub state: serde_json::Value,
    pub grid: Grid,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub time: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hamiltonian: Option<String>,
    pub columns: Vec<String>,
    pub n_points: usize,
    pub min: f64,
    pub max: f64,
    pub errors: ErrorEstimates,
    /// Data file described by a sidecar.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub data: Option<String>,
}

/// A JSON field document: metadata plus samples.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FieldDocument {
    #[serde(flatten)]
    pub meta: Metadata,
    pub coords: Vec<(f64, f64)>,
    pub values: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub im_values: Option<Vec<f64>>,
}

pub fn columns(field: &PhaseSpaceField) -> Vec<String> {
    let (a, b) = field.grid.axis_names();
    let mut cols = vec![a.to_string(), b.to_string(), "value".to_string()];
    if field.im_values.is_some() {
        cols.push("im_value".to_string());
    }
    cols
}

pub fn metadata(config: &RunConfig, field: &PhaseSpaceField, errors: ErrorEstimates) -> Metadata {
    let (min, max) = field.min_max();
    Metadata {
        schema: SCHEMA.to_string(),
        version: hyperwigner_version(),
        config: serde_json::to_value(config).expect("config serializes"),
        k: field.k.value(),
        s: field.s.s(),
        state: serde_json::to_value(&field.meta.state).expect("state serializes"),
        grid: field.grid.clone(),
        time: field.meta.time,
        hamiltonian: field.meta.hamiltonian.clone(),
        columns: columns(field),
        n_points: field.len(),
        min,
        max,
        errors,
        data: None,
    }
}

pub fn hyperwigner_version() -> String {
    env!("CARGO_PKG_VERSION").to_string()
}

fn create(path: &Path) -> Result<BufWriter<File>, CliError> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    }
    File::create(path)
        .map(BufWriter::new)
        .map_err(|e| CliError::io(path, e))
}

fn write_all(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    let mut w = create(path)?;
    w.write_all(bytes)
        .and_then(|_| w.flush())
        .map_err(|e| CliError::io(path, e))
}

/// CSV with a header row; floats use the shortest representation that parses back exactly.
pub fn write_csv(path: &Path, field: &PhaseSpaceField) -> Result<(), CliError> {
    let mut s = columns(field).join(",");
    s.push('\n');
    for (i, &(a, b)) in field.coords.iter().enumerate() {
        s.push_str(&format!("{a:?},{b:?},{:?}", field.values[i]));
        if let Some(im) = &field.im_values {
            s.push_str(&format!(",{:?}", im[i]));
        }
        s.push('\n');
    }
    write_all(path, s.as_bytes())
}

/// Rows of a CSV written by [`write_csv`]: header and numeric columns.
pub fn read_csv(path: &Path) -> Result<(Vec<String>, Vec<Vec<f64>>), CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    let mut lines = text.lines();
    let header: Vec<String> = lines
        .next()
        .ok_or_else(|| CliError::Usage(format!("{}: empty file", path.display())))?
        .split(',')
        .map(str::to_string)
        .collect();
    let rows = lines
        .enumerate()
        .map(|(i, line)| {
            line.split(',')
                .map(|t| t.parse::<f64>())
                .collect::<Result<Vec<f64>, _>>()
                .map_err(|e| CliError::Usage(format!("{} line {}: {e}", path.display(), i + 2)))
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok((header, rows))
}

/// Rebuilds a field from a CSV and its sidecar.
pub fn read_field(csv: &Path, sidecar: &Path) -> Result<(Metadata, FieldDocument), CliError> {
    let text = std::fs::read_to_string(sidecar).map_err(|e| CliError::io(sidecar, e))?;
    let meta: Metadata =
        serde_json::from_str(&text).map_err(|e| CliError::Usage(format!("{}: {e}", sidecar.display())))?;
    let (header, rows) = read_csv(csv)?;
    if header != meta.columns {
        return Err(CliError::Usage(format!(
            "{}: columns {header:?} do not match the sidecar",
            csv.display()
        )));
    }
    let im = header.len() == 4;
    let doc = FieldDocument {
        meta: meta.clone(),
        coords: rows.iter().map(|r| (r[0], r[1])).collect(),
        values: rows.iter().map(|r| r[2]).collect(),
        im_values: im.then(|| rows.iter().map(|r| r[3]).collect()),
    };
    Ok((meta, doc))
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<(), CliError> {
    let mut text = serde_json::to_string_pretty(value).expect("serializable");
    text.push('\n');
    write_all(path, text.as_bytes())
}

/// Linear grayscale, black at the minimum and white at the maximum. Polar grids map radii to
/// rows and angles to columns; pixels outside a disc grid's window are black.
pub fn write_ppm(path: &Path, field: &PhaseSpaceField, plain: bool) -> Result<(), CliError> {
    let (rows, cols) = field.grid.shape();
    let (lo, hi) = field.min_max();
    let span = if hi > lo { hi - lo } else { 1.0 };
    let mut pixels = vec![0u8; rows * cols];
    let points = field.grid.points()?;
    for (i, p) in points.iter().enumerate() {
        let (r, c) = p.pixel.unwrap_or((i / cols, i % cols));
        pixels[r * cols + c] = (255.0 * (field.values[i] - lo) / span).round().clamp(0.0, 255.0) as u8;
    }
    let mut out = Vec::new();
    if plain {
        out.extend_from_slice(format!("P2\n{cols} {rows}\n255\n").as_bytes());
        for row in pixels.chunks(cols) {
            let line: Vec<String> = row.iter().map(u8::to_string).collect();
            out.extend_from_slice(line.join(" ").as_bytes());
            out.push(b'\n');
        }
    } else {
        out.extend_from_slice(format!("P5\n{cols} {rows}\n255\n").as_bytes());
        out.extend_from_slice(&pixels);
    }
    write_all(path, &out)
}

pub fn sidecar_path(path: &Path) -> PathBuf {
    if path.extension().is_some_and(|e| e == "json") {
        let stem = path
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_default();
        path.with_file_name(format!("{stem}.meta.json"))
    } else {
        path.with_extension("json")
    }
}

/// Writes the field in the requested format; returns the files written.
pub fn write_field(
    path: &Path,
    format: Format,
    plain: bool,
    mut meta: Metadata,
    field: &PhaseSpaceField,
) -> Result<Vec<PathBuf>, CliError> {
    match format {
        Format::Json => {
            let doc = FieldDocument {
                meta,
                coords: field.coords.clone(),
                values: field.values.clone(),
                im_values: field.im_values.clone(),
            };
            write_json(path, &doc)?;
            Ok(vec![path.to_path_buf()])
        }
        Format::Csv | Format::Ppm => {
            if format == Format::Csv {
                write_csv(path, field)?;
            } else {
                write_ppm(path, field, plain)?;
            }
            let sidecar = sidecar_path(path);
            meta.data = path.file_name().map(|n| n.to_string_lossy().into_owned());
            write_json(&sidecar, &meta)?;
            Ok(vec![path.to_path_buf(), sidecar])
        }
    }
}
