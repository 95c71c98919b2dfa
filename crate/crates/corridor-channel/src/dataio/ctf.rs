//! CTF dataset persistence.
//!
//! Two encodings share one logical schema (sweep header, distance list,
//! complex samples):
//!
//! * a human-auditable text form, CSV rows under `#` header lines, with
//!   shortest-roundtrip float formatting so values survive a round trip
//!   bit-exactly;
//! * a length-prefixed little-endian binary form for full-size grids.
//!
//! Readers validate dimensions before allocating, reject non-finite samples
//! and refuse files written by a newer major format version.

use std::fs;
use std::io::{BufWriter, Write};
use std::path::Path;

use num_complex::Complex64;

use crate::grid::FrequencyGrid;
use crate::synthesis::{CtfDataset, Provenance};
use crate::{Error, Result};

const TEXT_MAGIC: &str = "# ctf-text v";
const BINARY_MAGIC: &[u8; 4] = b"CTFB";
const FORMAT_MAJOR: u16 = 1;
const FORMAT_MINOR: u16 = 0;

/// On-disk encoding of a CTF dataset.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CtfFormat {
    Binary,
    Text,
}

fn provenance_str(p: Provenance) -> &'static str {
    match p {
        Provenance::Simulated => "simulated",
        Provenance::Measured => "measured",
    }
}

fn parse_err(location: impl Into<String>, message: impl Into<String>) -> Error {
    Error::Parse { location: location.into(), message: message.into() }
}

// ---------------------------------------------------------------------------
// Text encoding
// ---------------------------------------------------------------------------

pub fn write_ctf_text<W: Write>(dataset: &CtfDataset, mut w: W) -> std::io::Result<()> {
    let grid = dataset.grid();
    writeln!(w, "{TEXT_MAGIC}{FORMAT_MAJOR}.{FORMAT_MINOR}")?;
    writeln!(w, "# f_start_hz = {}", grid.f_start_hz())?;
    writeln!(w, "# f_step_hz = {}", grid.f_step_hz())?;
    writeln!(w, "# count = {}", grid.count())?;
    writeln!(w, "# provenance = {}", provenance_str(dataset.provenance()))?;
    if !dataset.metadata().is_empty() {
        debug_assert!(!dataset.metadata().contains('\n'));
        writeln!(w, "# metadata = {}", dataset.metadata())?;
    }
    writeln!(w, "distance_m,frequency_hz,real,imag")?;
    for (di, &d) in dataset.distances_m().iter().enumerate() {
        for (k, v) in dataset.row(di).iter().enumerate() {
            writeln!(w, "{},{},{:e},{:e}", d, grid.frequency_hz(k), v.re, v.im)?;
        }
    }
    Ok(())
}

pub fn parse_ctf_text(text: &str) -> Result<CtfDataset> {
    let mut lines = text.lines().enumerate();

    let (_, first) = lines.next().ok_or_else(|| parse_err("line 1", "empty file"))?;
    let version = first
        .strip_prefix(TEXT_MAGIC)
        .ok_or_else(|| parse_err("line 1", format!("expected `{TEXT_MAGIC}<version>` header")))?;
    let major: u16 = version
        .split('.')
        .next()
        .unwrap_or("")
        .parse()
        .map_err(|_| parse_err("line 1", format!("bad version `{version}`")))?;
    if major > FORMAT_MAJOR {
        return Err(Error::UnsupportedVersion { found: major, supported: FORMAT_MAJOR });
    }

    let mut f_start = None;
    let mut f_step = None;
    let mut count = None;
    let mut provenance = None;
    let mut metadata = String::new();
    let mut header_done = false;
    let mut samples: Vec<Complex64> = Vec::new();
    let mut distances: Vec<f64> = Vec::new();
    let mut grid: Option<FrequencyGrid> = None;
    let mut row_in_block = 0usize;

    for (idx, line) in lines {
        let loc = || format!("line {}", idx + 1);
        if !header_done {
            if let Some(rest) = line.strip_prefix('#') {
                let (key, value) = rest
                    .split_once('=')
                    .ok_or_else(|| parse_err(loc(), "header line is not `# key = value`"))?;
                let (key, value) = (key.trim(), value.trim());
                match key {
                    "f_start_hz" => f_start = Some(parse_f64(value, loc)?),
                    "f_step_hz" => f_step = Some(parse_f64(value, loc)?),
                    "count" => {
                        count = Some(value.parse::<usize>().map_err(|e| {
                            parse_err(loc(), format!("bad count `{value}`: {e}"))
                        })?)
                    }
                    "provenance" => {
                        provenance = Some(match value {
                            "simulated" => Provenance::Simulated,
                            "measured" => Provenance::Measured,
                            other => {
                                return Err(parse_err(loc(), format!("unknown provenance `{other}`")))
                            }
                        })
                    }
                    "metadata" => metadata = value.to_string(),
                    other => return Err(parse_err(loc(), format!("unknown header key `{other}`"))),
                }
                continue;
            }
            if line != "distance_m,frequency_hz,real,imag" {
                return Err(parse_err(loc(), "expected the column header after the # block"));
            }
            let c = count.ok_or_else(|| parse_err(loc(), "missing `count` header"))?;
            grid = Some(FrequencyGrid::new(
                f_start.ok_or_else(|| parse_err(loc(), "missing `f_start_hz` header"))?,
                f_step.ok_or_else(|| parse_err(loc(), "missing `f_step_hz` header"))?,
                c,
            )?);
            header_done = true;
            continue;
        }

        if line.is_empty() {
            continue;
        }
        let grid = grid.as_ref().expect("grid set when header completes");
        let mut fields = line.split(',');
        let mut next = |name: &str| -> Result<f64> {
            let raw = fields
                .next()
                .ok_or_else(|| parse_err(loc(), format!("missing `{name}` column")))?;
            parse_f64(raw, loc)
        };
        let d = next("distance_m")?;
        let f = next("frequency_hz")?;
        let re = next("real")?;
        let im = next("imag")?;
        if fields.next().is_some() {
            return Err(parse_err(loc(), "too many columns"));
        }
        if row_in_block == 0 {
            distances.push(d);
        } else if d != *distances.last().unwrap() {
            return Err(parse_err(loc(), "distance changed mid-block"));
        }
        let expected_f = grid.frequency_hz(row_in_block);
        if (f - expected_f).abs() > grid.f_step_hz() * 1e-6 {
            return Err(parse_err(
                loc(),
                format!("frequency {f} does not match sweep point {expected_f}"),
            ));
        }
        if !re.is_finite() || !im.is_finite() {
            return Err(Error::NonFinite(loc()));
        }
        samples.push(Complex64::new(re, im));
        row_in_block = (row_in_block + 1) % grid.count();
    }

    let grid = grid.ok_or_else(|| parse_err("end of file", "missing header"))?;
    if row_in_block != 0 {
        return Err(Error::DimensionMismatch(format!(
            "last distance block has {row_in_block} of {} rows",
            grid.count()
        )));
    }
    CtfDataset::new(
        grid,
        distances,
        samples,
        provenance.ok_or_else(|| parse_err("header", "missing `provenance`"))?,
        metadata,
    )
}

fn parse_f64(raw: &str, loc: impl Fn() -> String) -> Result<f64> {
    raw.trim()
        .parse::<f64>()
        .map_err(|e| parse_err(loc(), format!("bad number `{raw}`: {e}")))
}

// ---------------------------------------------------------------------------
// Binary encoding
// ---------------------------------------------------------------------------

pub fn write_ctf_binary<W: Write>(dataset: &CtfDataset, mut w: W) -> std::io::Result<()> {
    let grid = dataset.grid();
    w.write_all(BINARY_MAGIC)?;
    w.write_all(&FORMAT_MAJOR.to_le_bytes())?;
    w.write_all(&FORMAT_MINOR.to_le_bytes())?;
    w.write_all(&grid.f_start_hz().to_le_bytes())?;
    w.write_all(&grid.f_step_hz().to_le_bytes())?;
    w.write_all(&(grid.count() as u64).to_le_bytes())?;
    w.write_all(&(dataset.n_distances() as u64).to_le_bytes())?;
    w.write_all(&[match dataset.provenance() {
        Provenance::Simulated => 0u8,
        Provenance::Measured => 1u8,
    }])?;
    let meta = dataset.metadata().as_bytes();
    w.write_all(&(meta.len() as u64).to_le_bytes())?;
    w.write_all(meta)?;
    for d in dataset.distances_m() {
        w.write_all(&d.to_le_bytes())?;
    }
    for v in dataset.values() {
        w.write_all(&v.re.to_le_bytes())?;
        w.write_all(&v.im.to_le_bytes())?;
    }
    Ok(())
}

/// Sequential reader over a byte buffer with descriptive underrun errors.
struct Cursor<'a> {
    buf: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn take(&mut self, len: usize, what: &str) -> Result<&'a [u8]> {
        let end = self
            .pos
            .checked_add(len)
            .filter(|&e| e <= self.buf.len())
            .ok_or_else(|| parse_err(format!("offset {}", self.pos), format!("truncated {what}")))?;
        let slice = &self.buf[self.pos..end];
        self.pos = end;
        Ok(slice)
    }

    fn u16(&mut self, what: &str) -> Result<u16> {
        Ok(u16::from_le_bytes(self.take(2, what)?.try_into().unwrap()))
    }

    fn u64(&mut self, what: &str) -> Result<u64> {
        Ok(u64::from_le_bytes(self.take(8, what)?.try_into().unwrap()))
    }

    fn f64(&mut self, what: &str) -> Result<f64> {
        Ok(f64::from_le_bytes(self.take(8, what)?.try_into().unwrap()))
    }
}

pub fn parse_ctf_binary(bytes: &[u8]) -> Result<CtfDataset> {
    let mut c = Cursor { buf: bytes, pos: 0 };
    if c.take(4, "magic")? != BINARY_MAGIC {
        return Err(parse_err("offset 0", "not a CTF binary file"));
    }
    let major = c.u16("version")?;
    let _minor = c.u16("version")?;
    if major > FORMAT_MAJOR {
        return Err(Error::UnsupportedVersion { found: major, supported: FORMAT_MAJOR });
    }
    let f_start = c.f64("f_start_hz")?;
    let f_step = c.f64("f_step_hz")?;
    let count = c.u64("count")?;
    let n_dist = c.u64("distance count")?;
    let prov = match c.take(1, "provenance")?[0] {
        0 => Provenance::Simulated,
        1 => Provenance::Measured,
        other => return Err(parse_err("provenance byte", format!("unknown tag {other}"))),
    };
    let meta_len = c.u64("metadata length")?;

    // Bound every length against the actual buffer before allocating.
    let remaining = (bytes.len() - c.pos) as u64;
    let sample_bytes = count
        .checked_mul(n_dist)
        .and_then(|s| s.checked_mul(16))
        .ok_or_else(|| Error::DimensionMismatch("sample count overflows".into()))?;
    let expected = meta_len
        .checked_add(n_dist.checked_mul(8).ok_or_else(|| {
            Error::DimensionMismatch("distance count overflows".into())
        })?)
        .and_then(|s| s.checked_add(sample_bytes))
        .ok_or_else(|| Error::DimensionMismatch("payload size overflows".into()))?;
    if expected != remaining {
        return Err(Error::DimensionMismatch(format!(
            "payload is {remaining} bytes, header promises {expected}"
        )));
    }

    let metadata = String::from_utf8(c.take(meta_len as usize, "metadata")?.to_vec())
        .map_err(|e| parse_err("metadata", e.to_string()))?;
    let grid = FrequencyGrid::new(f_start, f_step, count as usize)?;
    let mut distances = Vec::with_capacity(n_dist as usize);
    for i in 0..n_dist {
        distances.push(c.f64(&format!("distance {i}"))?);
    }
    let total = (count * n_dist) as usize;
    let mut values = Vec::with_capacity(total);
    for i in 0..total {
        let re = c.f64(&format!("sample {i}"))?;
        let im = c.f64(&format!("sample {i}"))?;
        if !re.is_finite() || !im.is_finite() {
            return Err(Error::NonFinite(format!("sample {i}")));
        }
        values.push(Complex64::new(re, im));
    }
    CtfDataset::new(grid, distances, values, prov, metadata)
}

// ---------------------------------------------------------------------------
// File-level helpers
// ---------------------------------------------------------------------------

pub fn write_ctf(path: &Path, dataset: &CtfDataset, format: CtfFormat) -> Result<()> {
    let file = fs::File::create(path).map_err(|e| Error::io(path, e))?;
    let mut w = BufWriter::new(file);
    let res = match format {
        CtfFormat::Binary => write_ctf_binary(dataset, &mut w),
        CtfFormat::Text => write_ctf_text(dataset, &mut w),
    };
    res.and_then(|()| w.flush()).map_err(|e| Error::io(path, e))
}

/// Reads either encoding, sniffing the binary magic.
pub fn read_ctf(path: &Path) -> Result<CtfDataset> {
    let bytes = fs::read(path).map_err(|e| Error::io(path, e))?;
    if bytes.starts_with(BINARY_MAGIC) {
        parse_ctf_binary(&bytes)
    } else {
        let text = std::str::from_utf8(&bytes)
            .map_err(|e| parse_err(path.display().to_string(), e.to_string()))?;
        parse_ctf_text(text)
    }
}
