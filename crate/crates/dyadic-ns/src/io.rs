//! Binary field and trajectory files.
//!
//! Field file: magic `DNSF`, `u8` version = 1, `u8` dim, `u8` components,
//! `u32` little-endian n, then per component the coefficients as
//! little-endian `f64` (re, im) pairs in row-major mode order. Round trips
//! are bit-exact.
//!
//! Trajectory file: magic `DNST`, `u8` version = 1, `u8` dim,
//! `u8` components, `u32` LE n, `u32` LE node count, `f64` LE horizon, the
//! node times as a `f64` table, then one coefficient block per node in field
//! order.

use crate::error::{Error, Result};
use crate::field::SpectralField;
use crate::grid::{make_grid, Grid};
use crate::timegrid::{TimeGrid, TimeSeriesField};
use num_complex::Complex64;
use std::io::{Read, Write};
use std::path::Path;

const FIELD_MAGIC: &[u8; 4] = b"DNSF";
const SERIES_MAGIC: &[u8; 4] = b"DNST";
const VERSION: u8 = 1;

fn write_coeffs(out: &mut impl Write, coeffs: &[Complex64]) -> Result<()> {
    let mut buf = Vec::with_capacity(coeffs.len() * 16);
    for c in coeffs {
        buf.extend_from_slice(&c.re.to_le_bytes());
        buf.extend_from_slice(&c.im.to_le_bytes());
    }
    out.write_all(&buf)?;
    Ok(())
}

fn read_coeffs(input: &mut impl Read, count: usize) -> Result<Vec<Complex64>> {
    let mut buf = vec![0u8; count * 16];
    input.read_exact(&mut buf)?;
    Ok(buf
        .chunks_exact(16)
        .map(|chunk| {
            let re = f64::from_le_bytes(chunk[0..8].try_into().unwrap());
            let im = f64::from_le_bytes(chunk[8..16].try_into().unwrap());
            Complex64::new(re, im)
        })
        .collect())
}

fn write_header(out: &mut impl Write, magic: &[u8; 4], grid: Grid, components: usize) -> Result<()> {
    out.write_all(magic)?;
    out.write_all(&[VERSION, grid.dim() as u8, components as u8])?;
    out.write_all(&(grid.n() as u32).to_le_bytes())?;
    Ok(())
}

fn read_header(input: &mut impl Read, magic: &[u8; 4]) -> Result<(Grid, usize)> {
    let mut head = [0u8; 11];
    input.read_exact(&mut head)?;
    if &head[0..4] != magic {
        return Err(Error::Format(format!(
            "bad magic, expected {:?}",
            std::str::from_utf8(magic).unwrap()
        )));
    }
    if head[4] != VERSION {
        return Err(Error::Format(format!("unsupported version {}", head[4])));
    }
    let dim = head[5] as usize;
    let components = head[6] as usize;
    let n = u32::from_le_bytes(head[7..11].try_into().unwrap()) as usize;
    let grid = make_grid(dim, n)?;
    Ok((grid, components))
}

pub fn write_field(out: &mut impl Write, field: &SpectralField) -> Result<()> {
    write_header(out, FIELD_MAGIC, field.grid(), field.components())?;
    write_coeffs(out, field.coeffs())
}

pub fn read_field(input: &mut impl Read) -> Result<SpectralField> {
    let (grid, components) = read_header(input, FIELD_MAGIC)?;
    let coeffs = read_coeffs(input, components * grid.len())?;
    SpectralField::from_coeffs(grid, components, coeffs)
}

pub fn save_field(path: impl AsRef<Path>, field: &SpectralField) -> Result<()> {
    let mut out = std::io::BufWriter::new(std::fs::File::create(path)?);
    write_field(&mut out, field)
}

pub fn load_field(path: impl AsRef<Path>) -> Result<SpectralField> {
    let mut input = std::io::BufReader::new(std::fs::File::open(path)?);
    read_field(&mut input)
}

pub fn write_series(out: &mut impl Write, series: &TimeSeriesField) -> Result<()> {
    let grid = series.grid();
    write_header(out, SERIES_MAGIC, grid, series.components())?;
    let tg = series.timegrid();
    out.write_all(&(tg.steps() as u32).to_le_bytes())?;
    out.write_all(&tg.horizon().to_le_bytes())?;
    for &t in tg.nodes() {
        out.write_all(&t.to_le_bytes())?;
    }
    for snap in series.snapshots() {
        write_coeffs(out, snap.coeffs())?;
    }
    Ok(())
}

pub fn read_series(input: &mut impl Read) -> Result<TimeSeriesField> {
    let (grid, components) = read_header(input, SERIES_MAGIC)?;
    let mut word = [0u8; 4];
    input.read_exact(&mut word)?;
    let steps = u32::from_le_bytes(word) as usize;
    let mut f64buf = [0u8; 8];
    input.read_exact(&mut f64buf)?;
    let horizon = f64::from_le_bytes(f64buf);
    let mut times = Vec::with_capacity(steps);
    for _ in 0..steps {
        input.read_exact(&mut f64buf)?;
        times.push(f64::from_le_bytes(f64buf));
    }
    let timegrid = TimeGrid::graded(horizon, steps)?;
    for (stored, derived) in times.iter().zip(timegrid.nodes()) {
        if (stored - derived).abs() > 1e-12 * horizon {
            return Err(Error::Format(
                "node-time table does not match the graded grid".into(),
            ));
        }
    }
    let mut snapshots = Vec::with_capacity(steps);
    for _ in 0..steps {
        let coeffs = read_coeffs(input, components * grid.len())?;
        snapshots.push(SpectralField::from_coeffs(grid, components, coeffs)?);
    }
    TimeSeriesField::new(grid, timegrid, snapshots)
}

pub fn save_series(path: impl AsRef<Path>, series: &TimeSeriesField) -> Result<()> {
    let mut out = std::io::BufWriter::new(std::fs::File::create(path)?);
    write_series(&mut out, series)
}

pub fn load_series(path: impl AsRef<Path>) -> Result<TimeSeriesField> {
    let mut input = std::io::BufReader::new(std::fs::File::open(path)?);
    read_series(&mut input)
}

/// Sniff the magic of a file that may hold either a field or a trajectory.
pub enum StoredObject {
    Field(SpectralField),
    Series(TimeSeriesField),
}

pub fn load_any(path: impl AsRef<Path>) -> Result<StoredObject> {
    let bytes = std::fs::read(path)?;
    let mut cursor = std::io::Cursor::new(&bytes);
    match bytes.get(0..4) {
        Some(m) if m == FIELD_MAGIC => Ok(StoredObject::Field(read_field(&mut cursor)?)),
        Some(m) if m == SERIES_MAGIC => Ok(StoredObject::Series(read_series(&mut cursor)?)),
        _ => Err(Error::Format("unrecognized file magic".into())),
    }
}
