//! Zero tables on disk: plain-text listings and the binary cache format.
//!
//! Cache layout, all little-endian: `"ZTBL"`, `u32` version, `f64` range
//! low, `f64` range high, `u64` count, `u32` label length, label bytes
//! (UTF-8), `count` × `f64` ordinates, then a `u64` FNV-1a hash of every
//! preceding byte.

use std::fs;
use std::io::Write;
use std::path::Path;

use crate::error::{Error, Result};
use crate::zeros::{Source, ZeroTable};

pub const MAGIC: &[u8; 4] = b"ZTBL";
pub const FORMAT_VERSION: u32 = 1;
/// Default matching tolerance for [`cross_check`].
pub const CROSS_CHECK_TOL: f64 = 1e-6;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    PlainText,
    Cached,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ZeroFileHeader {
    pub format_version: u32,
    pub range_lo: f64,
    pub range_hi: f64,
    pub count: u64,
    pub source_label: String,
    pub checksum: u64,
}

pub fn fnv1a(bytes: &[u8]) -> u64 {
    const OFFSET: u64 = 0xcbf2_9ce4_8422_2325;
    const PRIME: u64 = 0x0000_0100_0000_01b3;
    bytes
        .iter()
        .fold(OFFSET, |h, &b| (h ^ u64::from(b)).wrapping_mul(PRIME))
}

/// Serialises a table in the cache format.
pub fn encode(table: &ZeroTable) -> Vec<u8> {
    let label = table.source.as_str().as_bytes();
    let mut out = Vec::with_capacity(40 + label.len() + 8 * table.len());
    out.extend_from_slice(MAGIC);
    out.extend_from_slice(&FORMAT_VERSION.to_le_bytes());
    out.extend_from_slice(&table.range_lo().to_le_bytes());
    out.extend_from_slice(&table.range_hi().to_le_bytes());
    out.extend_from_slice(&(table.len() as u64).to_le_bytes());
    out.extend_from_slice(&(label.len() as u32).to_le_bytes());
    out.extend_from_slice(label);
    for g in table.ordinates() {
        out.extend_from_slice(&g.to_le_bytes());
    }
    let sum = fnv1a(&out);
    out.extend_from_slice(&sum.to_le_bytes());
    out
}

struct Cursor<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn take(&mut self, n: usize) -> Result<&'a [u8]> {
        let end = self.pos.checked_add(n).filter(|&e| e <= self.bytes.len());
        let end = end.ok_or_else(|| Error::Format("truncated zero table".into()))?;
        let s = &self.bytes[self.pos..end];
        self.pos = end;
        Ok(s)
    }

    fn u32(&mut self) -> Result<u32> {
        Ok(u32::from_le_bytes(self.take(4)?.try_into().unwrap()))
    }

    fn u64(&mut self) -> Result<u64> {
        Ok(u64::from_le_bytes(self.take(8)?.try_into().unwrap()))
    }

    fn f64(&mut self) -> Result<f64> {
        Ok(f64::from_le_bytes(self.take(8)?.try_into().unwrap()))
    }
}

/// Parses the cache format, verifying the checksum before anything else.
pub fn decode(bytes: &[u8]) -> Result<(ZeroFileHeader, Vec<f64>)> {
    if bytes.len() < 8 {
        return Err(Error::Format("file too short for a zero table".into()));
    }
    let (body, tail) = bytes.split_at(bytes.len() - 8);
    let stored = u64::from_le_bytes(tail.try_into().unwrap());
    let computed = fnv1a(body);
    if stored != computed {
        return Err(Error::ChecksumMismatch { stored, computed });
    }
    let mut c = Cursor { bytes: body, pos: 0 };
    if c.take(4)? != MAGIC {
        return Err(Error::Format("missing ZTBL magic".into()));
    }
    let format_version = c.u32()?;
    if format_version != FORMAT_VERSION {
        return Err(Error::Format(format!("unsupported format version {format_version}")));
    }
    let range_lo = c.f64()?;
    let range_hi = c.f64()?;
    let count = c.u64()?;
    let label_len = c.u32()? as usize;
    let source_label = std::str::from_utf8(c.take(label_len)?)
        .map_err(|_| Error::Format("source label is not UTF-8".into()))?
        .to_string();
    let n = usize::try_from(count).map_err(|_| Error::Format("count too large".into()))?;
    if body.len() - c.pos != n.saturating_mul(8) {
        return Err(Error::Format(format!(
            "header announces {count} ordinates, payload holds {} bytes",
            body.len() - c.pos
        )));
    }
    let ordinates = (0..n).map(|_| c.f64()).collect::<Result<Vec<_>>>()?;
    let header = ZeroFileHeader {
        format_version,
        range_lo,
        range_hi,
        count,
        source_label,
        checksum: stored,
    };
    Ok((header, ordinates))
}

/// Reads one ordinate per line; blank lines and `#` comments are skipped.
/// The table spans `(0, last ordinate]`.
pub fn parse_plain_text(text: &str) -> Result<ZeroTable> {
    let mut ords: Vec<f64> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let g: f64 = line.parse().map_err(|_| Error::Parse {
            line: i + 1,
            message: format!("not a decimal number: {line:?}"),
        })?;
        if !(g > 0.0 && g.is_finite()) {
            return Err(Error::Parse {
                line: i + 1,
                message: format!("ordinate must be positive and finite, got {line}"),
            });
        }
        if let Some(&last) = ords.last() {
            if !(g > last) {
                return Err(Error::NonMonotone { line: i + 1 });
            }
        }
        ords.push(g);
    }
    let hi = ords.last().copied().unwrap_or(0.0);
    ZeroTable::new(0.0, hi, ords, Source::Ingested)
}

pub fn load_zero_table(path: &Path, format: Format) -> Result<ZeroTable> {
    match format {
        Format::PlainText => parse_plain_text(&fs::read_to_string(path)?),
        Format::Cached => {
            let (h, ords) = decode(&fs::read(path)?)?;
            ZeroTable::new(h.range_lo, h.range_hi, ords, Source::Ingested)
        }
    }
}

/// Writes the cache format; identical tables give identical bytes.
pub fn save_zero_table(table: &ZeroTable, path: &Path) -> Result<()> {
    let bytes = encode(table);
    let tmp = path.with_extension("partial");
    {
        let mut f = fs::File::create(&tmp)?;
        f.write_all(&bytes)?;
        f.sync_all()?;
    }
    fs::rename(&tmp, path)?;
    Ok(())
}

#[derive(Clone, Debug, PartialEq)]
pub struct CrossCheckReport {
    /// Common range `(lo, hi]`; empty when `lo ≥ hi`.
    pub overlap_lo: f64,
    pub overlap_hi: f64,
    pub matched: usize,
    pub unmatched_computed: Vec<f64>,
    pub unmatched_ingested: Vec<f64>,
    pub max_deviation: f64,
}

/// Pairs ordinates of the common range (widened by `tol` at both ends) in
/// order, greedily, within `tol`.
pub fn cross_check(computed: &ZeroTable, ingested: &ZeroTable, tol: f64) -> CrossCheckReport {
    let lo = computed.range_lo().max(ingested.range_lo());
    let hi = computed.range_hi().min(ingested.range_hi());
    let within = |t: &ZeroTable| -> Vec<f64> {
        t.ordinates()
            .iter()
            .copied()
            .filter(|&g| g > lo - tol && g <= hi + tol)
            .collect()
    };
    let (a, b) = (within(computed), within(ingested));
    let mut report = CrossCheckReport {
        overlap_lo: lo,
        overlap_hi: hi,
        matched: 0,
        unmatched_computed: Vec::new(),
        unmatched_ingested: Vec::new(),
        max_deviation: 0.0,
    };
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        let d = a[i] - b[j];
        if d.abs() <= tol {
            report.matched += 1;
            report.max_deviation = report.max_deviation.max(d.abs());
            i += 1;
            j += 1;
        } else if d < 0.0 {
            report.unmatched_computed.push(a[i]);
            i += 1;
        } else {
            report.unmatched_ingested.push(b[j]);
            j += 1;
        }
    }
    report.unmatched_computed.extend_from_slice(&a[i..]);
    report.unmatched_ingested.extend_from_slice(&b[j..]);
    report
}
