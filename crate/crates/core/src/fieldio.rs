//! Field, spectrum and report files.
//!
//! Binary fields use the HWMF1 layout: one UTF-8 JSON header line, then
//! `nx·ny` samples as little-endian `f64` pairs `(re, im)`, row-major with
//! `y` outermost. Text outputs print floats with 17 significant digits.

use std::fs;
use std::io::{BufWriter, Write};
use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{HwmError, Result};
use crate::spectral::{OamSpectrum, RingSpectrum};
use crate::waves::{FieldGrid, FieldMeta};

pub const MAGIC: &str = "HWMF1";

const SAMPLE_BYTES: usize = 16;

/// Relative tolerance for recognizing a uniform lattice in CSV input.
const LATTICE_TOLERANCE: f64 = 1.0e-9;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FieldFileHeader {
    pub magic: String,
    pub nx: usize,
    pub ny: usize,
    pub dx: f64,
    pub dy: f64,
    pub x0: f64,
    pub y0: f64,
    pub k: f64,
    pub theta: f64,
    pub z_plane: f64,
    pub description: String,
}

impl FieldFileHeader {
    fn of(field: &FieldGrid) -> Self {
        FieldFileHeader {
            magic: MAGIC.to_string(),
            nx: field.nx,
            ny: field.ny,
            dx: field.dx,
            dy: field.dy,
            x0: field.x0,
            y0: field.y0,
            k: field.meta.k,
            theta: field.meta.theta,
            z_plane: field.meta.z_plane,
            description: field.meta.description.clone(),
        }
    }
}

/// `{:.16e}`: 17 significant digits, enough to reproduce any `f64`.
pub fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

fn write_bytes(path: &Path, bytes: &[u8]) -> Result<()> {
    fs::write(path, bytes).map_err(|e| HwmError::io(path, e))
}

pub fn encode_field(field: &FieldGrid) -> Vec<u8> {
    let header = serde_json::to_string(&FieldFileHeader::of(field)).expect("header serializes");
    let mut out = Vec::with_capacity(header.len() + 1 + field.values.len() * SAMPLE_BYTES);
    out.extend_from_slice(header.as_bytes());
    out.push(b'\n');
    for v in &field.values {
        out.extend_from_slice(&v.re.to_le_bytes());
        out.extend_from_slice(&v.im.to_le_bytes());
    }
    out
}

pub fn write_field(field: &FieldGrid, path: impl AsRef<Path>) -> Result<()> {
    write_bytes(path.as_ref(), &encode_field(field))
}

pub fn decode_field(bytes: &[u8]) -> Result<FieldGrid> {
    let newline = bytes
        .iter()
        .position(|&b| b == b'\n')
        .ok_or_else(|| HwmError::format(bytes.len() as u64, "header line is not terminated"))?;
    let header: FieldFileHeader = serde_json::from_slice(&bytes[..newline]).map_err(|e| {
        HwmError::format(
            e.column().saturating_sub(1) as u64,
            format!("bad header: {e}"),
        )
    })?;
    if header.magic != MAGIC {
        return Err(HwmError::format(
            0,
            format!("bad magic `{}`, expected `{MAGIC}`", header.magic),
        ));
    }
    let start = newline + 1;
    let payload = &bytes[start..];
    let expected = header
        .nx
        .checked_mul(header.ny)
        .ok_or_else(|| HwmError::format(0, "grid dimensions overflow"))?;
    if !payload.len().is_multiple_of(SAMPLE_BYTES) || payload.len() / SAMPLE_BYTES != expected {
        return Err(HwmError::format(
            bytes.len() as u64,
            format!(
                "payload holds {} samples ({} bytes), header declares {expected} ({}x{})",
                payload.len() / SAMPLE_BYTES,
                payload.len(),
                header.nx,
                header.ny
            ),
        ));
    }
    let mut values = Vec::with_capacity(expected);
    for (s, chunk) in payload.chunks_exact(SAMPLE_BYTES).enumerate() {
        let re = f64::from_le_bytes(chunk[..8].try_into().expect("8 bytes"));
        let im = f64::from_le_bytes(chunk[8..].try_into().expect("8 bytes"));
        for (part, v) in [(0, re), (8, im)] {
            if !v.is_finite() {
                return Err(HwmError::format(
                    (start + s * SAMPLE_BYTES + part) as u64,
                    format!(
                        "non-finite value {v} in sample ({}, {})",
                        s % header.nx,
                        s / header.nx
                    ),
                ));
            }
        }
        values.push(Complex64::new(re, im));
    }
    FieldGrid::new(
        header.nx,
        header.ny,
        header.dx,
        header.dy,
        header.x0,
        header.y0,
        values,
        FieldMeta {
            k: header.k,
            theta: header.theta,
            z_plane: header.z_plane,
            description: header.description,
        },
    )
    .map_err(|e| HwmError::format(0, format!("header describes an invalid grid: {e}")))
}

pub fn read_field(path: impl AsRef<Path>) -> Result<FieldGrid> {
    let path = path.as_ref();
    let bytes = fs::read(path).map_err(|e| HwmError::io(path, e))?;
    decode_field(&bytes)
}

/// CSV `x,y,re,im`, one row per node in storage order.
pub fn encode_field_csv(field: &FieldGrid) -> String {
    let mut out = String::from("x,y,re,im\n");
    for j in 0..field.ny {
        for i in 0..field.nx {
            let v = field.at(i, j);
            out.push_str(&format!(
                "{},{},{},{}\n",
                fmt_f64(field.x(i)),
                fmt_f64(field.y(j)),
                fmt_f64(v.re),
                fmt_f64(v.im)
            ));
        }
    }
    out
}

pub fn write_field_csv(field: &FieldGrid, path: impl AsRef<Path>) -> Result<()> {
    write_bytes(path.as_ref(), encode_field_csv(field).as_bytes())
}

/// Sorted distinct coordinates and the lattice they span, `(origin, step, count)`.
fn lattice(mut coords: Vec<f64>, axis: &str) -> Result<(f64, f64, Vec<f64>)> {
    coords.sort_by(f64::total_cmp);
    let span = coords[coords.len() - 1] - coords[0];
    let tol = LATTICE_TOLERANCE * span.abs().max(1.0);
    coords.dedup_by(|a, b| (*a - *b).abs() <= tol);
    if coords.len() < 2 {
        return Err(HwmError::format(
            0,
            format!("only one distinct {axis} coordinate"),
        ));
    }
    let step = span / (coords.len() - 1) as f64;
    for (i, c) in coords.iter().enumerate() {
        let want = coords[0] + i as f64 * step;
        if (c - want).abs() > 1.0e-6 * step {
            return Err(HwmError::format(
                0,
                format!("{axis} coordinates are not uniformly spaced near {axis} = {c}"),
            ));
        }
    }
    Ok((coords[0], step, coords))
}

/// Parses a complete rectangular lattice from `x,y,re,im` rows in any
/// order. `meta` supplies the cone metadata the CSV cannot carry.
pub fn decode_field_csv(text: &str, meta: FieldMeta) -> Result<FieldGrid> {
    let mut rows: Vec<(u64, f64, f64, Complex64)> = Vec::new();
    let mut offset = 0u64;
    for (lineno, line) in text.split_inclusive('\n').enumerate() {
        let here = offset;
        offset += line.len() as u64;
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let cols: Vec<&str> = line.split(',').map(str::trim).collect();
        if lineno == 0 {
            if cols != ["x", "y", "re", "im"] {
                return Err(HwmError::format(here, "expected header `x,y,re,im`"));
            }
            continue;
        }
        if cols.len() != 4 {
            return Err(HwmError::format(
                here,
                format!("line {} has {} columns, expected 4", lineno + 1, cols.len()),
            ));
        }
        let mut vals = [0.0_f64; 4];
        for (v, c) in vals.iter_mut().zip(&cols) {
            *v = c.parse().map_err(|_| {
                HwmError::format(here, format!("line {}: `{c}` is not a number", lineno + 1))
            })?;
            if !v.is_finite() {
                return Err(HwmError::format(
                    here,
                    format!("line {}: non-finite value `{c}`", lineno + 1),
                ));
            }
        }
        rows.push((here, vals[0], vals[1], Complex64::new(vals[2], vals[3])));
    }
    if rows.is_empty() {
        return Err(HwmError::format(offset, "no samples"));
    }
    let (x0, dx, xs) = lattice(rows.iter().map(|r| r.1).collect(), "x")?;
    let (y0, dy, ys) = lattice(rows.iter().map(|r| r.2).collect(), "y")?;
    let (nx, ny) = (xs.len(), ys.len());
    let mut slots: Vec<Option<Complex64>> = vec![None; nx * ny];
    for &(at, x, y, v) in &rows {
        let i = ((x - x0) / dx).round() as usize;
        let j = ((y - y0) / dy).round() as usize;
        let slot = &mut slots[j * nx + i];
        if slot.is_some() {
            return Err(HwmError::format(at, format!("duplicate node ({x}, {y})")));
        }
        *slot = Some(v);
    }
    if let Some(missing) = slots.iter().position(Option::is_none) {
        let (i, j) = (missing % nx, missing / nx);
        return Err(HwmError::format(
            offset,
            format!(
                "lattice is incomplete: node ({i}, {j}) at (x, y) = ({}, {}) is missing",
                xs[i], ys[j]
            ),
        ));
    }
    let values = slots.into_iter().map(|v| v.expect("checked")).collect();
    FieldGrid::new(nx, ny, dx, dy, x0, y0, values, meta)
        .map_err(|e| HwmError::format(0, format!("invalid lattice: {e}")))
}

pub fn read_field_csv(path: impl AsRef<Path>, meta: FieldMeta) -> Result<FieldGrid> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| HwmError::io(path, e))?;
    decode_field_csv(&text, meta)
}

/// Ring spectrum as CSV `phi,re,im`.
pub fn encode_ring_csv(ring: &RingSpectrum) -> String {
    let mut out = String::from("phi,re,im\n");
    for (m, v) in ring.samples.iter().enumerate() {
        out.push_str(&format!(
            "{},{},{}\n",
            fmt_f64(ring.azimuth(m)),
            fmt_f64(v.re),
            fmt_f64(v.im)
        ));
    }
    out
}

/// Charge spectrum as CSV `n,re,im,abs2`.
pub fn encode_oam_csv(spec: &OamSpectrum) -> String {
    let mut out = String::from("n,re,im,abs2\n");
    for (n, c) in spec.charges() {
        out.push_str(&format!(
            "{n},{},{},{}\n",
            fmt_f64(c.re),
            fmt_f64(c.im),
            fmt_f64(c.norm_sqr())
        ));
    }
    out
}

pub fn write_ring_csv(ring: &RingSpectrum, path: impl AsRef<Path>) -> Result<()> {
    write_bytes(path.as_ref(), encode_ring_csv(ring).as_bytes())
}

pub fn write_oam_csv(spec: &OamSpectrum, path: impl AsRef<Path>) -> Result<()> {
    write_bytes(path.as_ref(), encode_oam_csv(spec).as_bytes())
}

/// Pretty JSON. Floats use the shortest representation that parses back to
/// the same `f64` (at most 17 significant digits).
pub fn write_json<T: Serialize>(value: &T, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let file = fs::File::create(path).map_err(|e| HwmError::io(path, e))?;
    let mut w = BufWriter::new(file);
    serde_json::to_writer_pretty(&mut w, value)
        .map_err(|e| HwmError::io(path, std::io::Error::other(e)))?;
    w.write_all(b"\n")
        .and_then(|_| w.flush())
        .map_err(|e| HwmError::io(path, e))
}
