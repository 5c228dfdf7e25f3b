//! Binary caches for matrices, vectors and quantized weights.
//!
//! All integers are unsigned 64-bit little-endian and all floats are IEEE 754
//! binary64 little-endian. Each file starts with a five-byte ASCII magic.
//!
//! | file | layout |
//! |------|--------|
//! | matrix | `CSOR1`, n, nnz, row_offsets\[n+1\], col_indices\[nnz\], values\[nnz\], diag\[n\] |
//! | vector | `CSORV`, n, values\[n\] |
//! | quantized weights | `CSORQ`, n, exponents\[n\] (one byte each) |
//!
//! Readers reject wrong magic, truncation, trailing bytes and any structure
//! the in-memory types would reject.

use std::fs;
use std::io::Write;
use std::path::Path;

use certsor_core::{QuantizedWeights, SparseMatrix};

use crate::error::{Error, Result};

pub const MATRIX_MAGIC: [u8; 5] = *b"CSOR1";
pub const VECTOR_MAGIC: [u8; 5] = *b"CSORV";
pub const QUANTIZED_MAGIC: [u8; 5] = *b"CSORQ";

pub fn encode_matrix(a: &SparseMatrix) -> Vec<u8> {
    let n = a.dim();
    let mut out = Vec::with_capacity(5 + 8 * (3 + 2 * n + 2 * a.nnz()));
    out.extend_from_slice(&MATRIX_MAGIC);
    out.extend_from_slice(&(n as u64).to_le_bytes());
    out.extend_from_slice(&(a.nnz() as u64).to_le_bytes());
    for &o in a.row_offsets() {
        out.extend_from_slice(&(o as u64).to_le_bytes());
    }
    for &c in a.col_indices() {
        out.extend_from_slice(&(c as u64).to_le_bytes());
    }
    for v in a.values().iter().chain(a.diag()) {
        out.extend_from_slice(&v.to_le_bytes());
    }
    out
}

pub fn encode_vector(x: &[f64]) -> Vec<u8> {
    let mut out = Vec::with_capacity(13 + 8 * x.len());
    out.extend_from_slice(&VECTOR_MAGIC);
    out.extend_from_slice(&(x.len() as u64).to_le_bytes());
    for v in x {
        out.extend_from_slice(&v.to_le_bytes());
    }
    out
}

pub fn encode_quantized(q: &QuantizedWeights) -> Vec<u8> {
    let mut out = Vec::with_capacity(13 + q.len());
    out.extend_from_slice(&QUANTIZED_MAGIC);
    out.extend_from_slice(&(q.len() as u64).to_le_bytes());
    out.extend_from_slice(q.exponents());
    out
}

/// Cursor over a byte buffer; errors are plain messages, the caller adds the path.
struct Reader<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Reader<'a> {
    fn new(bytes: &'a [u8], magic: &[u8; 5]) -> std::result::Result<Self, String> {
        if bytes.len() < 5 || &bytes[..5] != magic {
            return Err(format!("missing magic {:?}", std::str::from_utf8(magic).unwrap_or("?")));
        }
        Ok(Reader { bytes, pos: 5 })
    }

    fn take(&mut self, len: usize) -> std::result::Result<&'a [u8], String> {
        let end = self.pos.checked_add(len).filter(|&e| e <= self.bytes.len()).ok_or("truncated file")?;
        let slice = &self.bytes[self.pos..end];
        self.pos = end;
        Ok(slice)
    }

    fn u64(&mut self) -> std::result::Result<u64, String> {
        Ok(u64::from_le_bytes(self.take(8)?.try_into().unwrap()))
    }

    fn count(&mut self, what: &str) -> std::result::Result<usize, String> {
        let v = self.u64()?;
        // Every counted item takes at least one byte, so a count beyond the
        // remaining length is corrupt; checking here avoids huge allocations.
        let remaining = (self.bytes.len() - self.pos) as u64;
        if v > remaining {
            return Err(format!("{what} {v} exceeds the file size"));
        }
        Ok(v as usize)
    }

    fn u64s(&mut self, len: usize) -> std::result::Result<Vec<usize>, String> {
        let bytes = self.take(len.checked_mul(8).ok_or("truncated file")?)?;
        bytes
            .chunks_exact(8)
            .map(|c| {
                usize::try_from(u64::from_le_bytes(c.try_into().unwrap())).map_err(|_| "index too large".to_string())
            })
            .collect()
    }

    fn f64s(&mut self, len: usize) -> std::result::Result<Vec<f64>, String> {
        let bytes = self.take(len.checked_mul(8).ok_or("truncated file")?)?;
        Ok(bytes.chunks_exact(8).map(|c| f64::from_le_bytes(c.try_into().unwrap())).collect())
    }

    fn finish(self) -> std::result::Result<(), String> {
        if self.pos == self.bytes.len() {
            Ok(())
        } else {
            Err(format!("{} trailing bytes", self.bytes.len() - self.pos))
        }
    }
}

fn parse_matrix(bytes: &[u8]) -> std::result::Result<SparseMatrix, String> {
    let mut r = Reader::new(bytes, &MATRIX_MAGIC)?;
    let n = r.count("dimension")?;
    let nnz = r.count("nonzero count")?;
    let offsets = r.u64s(n + 1)?;
    let cols = r.u64s(nnz)?;
    let values = r.f64s(nnz)?;
    let diag = r.f64s(n)?;
    r.finish()?;
    let a = SparseMatrix::from_csr(n, offsets, cols, values).map_err(|e| e.to_string())?;
    if a.diag().iter().zip(&diag).any(|(x, y)| x.to_bits() != y.to_bits()) {
        return Err("stored diagonal disagrees with the matrix entries".into());
    }
    Ok(a)
}

fn parse_vector(bytes: &[u8]) -> std::result::Result<Vec<f64>, String> {
    let mut r = Reader::new(bytes, &VECTOR_MAGIC)?;
    let n = r.count("length")?;
    let x = r.f64s(n)?;
    r.finish()?;
    Ok(x)
}

fn parse_quantized(bytes: &[u8]) -> std::result::Result<QuantizedWeights, String> {
    let mut r = Reader::new(bytes, &QUANTIZED_MAGIC)?;
    let n = r.count("length")?;
    let e = r.take(n)?.to_vec();
    r.finish()?;
    Ok(QuantizedWeights::from_exponents(e))
}

pub fn decode_matrix(bytes: &[u8]) -> Result<SparseMatrix> {
    parse_matrix(bytes).map_err(|m| Error::format("<memory>", m))
}

pub fn decode_vector(bytes: &[u8]) -> Result<Vec<f64>> {
    parse_vector(bytes).map_err(|m| Error::format("<memory>", m))
}

pub fn decode_quantized(bytes: &[u8]) -> Result<QuantizedWeights> {
    parse_quantized(bytes).map_err(|m| Error::format("<memory>", m))
}

/// Reads a whole file, mapping failures to [`Error::Io`].
pub fn read_file(path: &Path) -> Result<Vec<u8>> {
    fs::read(path).map_err(|e| Error::io(path, e))
}

/// Writes a whole file, creating parent directories as needed.
pub fn write_file(path: &Path, bytes: &[u8]) -> Result<()> {
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        fs::create_dir_all(parent).map_err(|e| Error::io(parent, e))?;
    }
    let mut file = fs::File::create(path).map_err(|e| Error::io(path, e))?;
    file.write_all(bytes).and_then(|_| file.sync_all()).map_err(|e| Error::io(path, e))
}

pub fn load_matrix(path: &Path) -> Result<SparseMatrix> {
    parse_matrix(&read_file(path)?).map_err(|m| Error::format(path, m))
}

pub fn load_vector(path: &Path) -> Result<Vec<f64>> {
    parse_vector(&read_file(path)?).map_err(|m| Error::format(path, m))
}

pub fn load_quantized(path: &Path) -> Result<QuantizedWeights> {
    parse_quantized(&read_file(path)?).map_err(|m| Error::format(path, m))
}

pub fn save_matrix(path: &Path, a: &SparseMatrix) -> Result<()> {
    write_file(path, &encode_matrix(a))
}

pub fn save_vector(path: &Path, x: &[f64]) -> Result<()> {
    write_file(path, &encode_vector(x))
}

pub fn save_quantized(path: &Path, q: &QuantizedWeights) -> Result<()> {
    write_file(path, &encode_quantized(q))
}
