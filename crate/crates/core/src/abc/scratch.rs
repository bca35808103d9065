//! Fixed-width binary spill file for simulation records: seven little-endian f64 per record
//! (d, phi, theta, sigma2, H_h, H_ARMA, H_sigma2), absent coefficients stored as NaN.

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Seek, SeekFrom, Write};
use std::path::Path;

use super::AbcRecord;
use crate::error::Result;
use crate::params::ArfimaParams;

pub const RECORD_BYTES: usize = 56;

pub(crate) fn encode(r: &AbcRecord) -> [u8; RECORD_BYTES] {
    let mut out = [0u8; RECORD_BYTES];
    let p = r.params.to_array();
    for (i, v) in p.iter().chain(r.distances.iter()).enumerate() {
        out[8 * i..8 * i + 8].copy_from_slice(&v.to_le_bytes());
    }
    out
}

pub(crate) fn decode(buf: &[u8; RECORD_BYTES]) -> AbcRecord {
    let f = |i: usize| f64::from_le_bytes(buf[8 * i..8 * i + 8].try_into().expect("8 bytes"));
    let opt = |v: f64| if v.is_nan() { None } else { Some(v) };
    AbcRecord {
        params: ArfimaParams { d: f(0), phi: opt(f(1)), theta: opt(f(2)), sigma2: f(3) },
        distances: [f(4), f(5), f(6)],
    }
}

pub struct ScratchWriter {
    out: BufWriter<File>,
    written: usize,
}

impl ScratchWriter {
    pub fn create(path: &Path) -> Result<Self> {
        Ok(ScratchWriter { out: BufWriter::new(File::create(path)?), written: 0 })
    }

    pub fn push(&mut self, r: &AbcRecord) -> Result<()> {
        self.out.write_all(&encode(r))?;
        self.written += 1;
        Ok(())
    }

    pub fn finish(mut self) -> Result<usize> {
        self.out.flush()?;
        Ok(self.written)
    }
}

/// Read every record of a scratch file.
pub fn read_scratch(path: &Path) -> Result<Vec<AbcRecord>> {
    let mut reader = BufReader::new(File::open(path)?);
    let mut buf = [0u8; RECORD_BYTES];
    let mut out = Vec::new();
    loop {
        match reader.read_exact(&mut buf) {
            Ok(()) => out.push(decode(&buf)),
            Err(e) if e.kind() == std::io::ErrorKind::UnexpectedEof => break,
            Err(e) => return Err(e.into()),
        }
    }
    Ok(out)
}

/// Read the records at the given (sorted) positions.
pub fn read_scratch_at(path: &Path, positions: &[usize]) -> Result<Vec<AbcRecord>> {
    let mut file = File::open(path)?;
    let mut buf = [0u8; RECORD_BYTES];
    let mut out = Vec::with_capacity(positions.len());
    for &i in positions {
        file.seek(SeekFrom::Start((i * RECORD_BYTES) as u64))?;
        file.read_exact(&mut buf)?;
        out.push(decode(&buf));
    }
    Ok(out)
}
