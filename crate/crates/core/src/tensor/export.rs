//! Tensor serialization.
//!
//! Binary layout, all little-endian:
//!
//! | bytes  | field                         |
//! |--------|-------------------------------|
//! | 0..4   | magic `b"CTNS"`               |
//! | 4..8   | `u32` version (1)             |
//! | 8..12  | `u32` order M                 |
//! | 12..16 | `u32` mode dimension (3 or 4) |
//! | 16..   | `f64` entries, last mode fastest |
//!
//! CSV has a header `a1,...,aM,value` and one row per entry; indices are
//! `1..=3` for correlation tensors and `0..=3` for extended tensors.

use std::io::{Read, Write};

use super::{CorrTensor, ExtendedTensor};
use crate::error::{Error, Result};

pub const MAGIC: &[u8; 4] = b"CTNS";
pub const FORMAT_VERSION: u32 = 1;

/// A decoded binary tensor file.
#[derive(Clone, Debug, PartialEq)]
pub struct TensorFile {
    pub order: usize,
    pub mode_dim: usize,
    pub entries: Vec<f64>,
}

impl TensorFile {
    pub fn from_corr(t: &CorrTensor) -> Self {
        Self {
            order: t.order(),
            mode_dim: 3,
            entries: t.entries().to_vec(),
        }
    }

    pub fn from_extended(t: &ExtendedTensor) -> Self {
        Self {
            order: t.order(),
            mode_dim: 4,
            entries: t.entries().to_vec(),
        }
    }

    /// Rebuilds a correlation tensor over qubits `1..=order`.
    pub fn into_corr(self) -> Result<CorrTensor> {
        if self.mode_dim != 3 {
            return Err(Error::Format(format!("mode dimension {} is not 3", self.mode_dim)));
        }
        CorrTensor::from_entries((1..=self.order).collect(), self.entries)
    }

    pub fn into_extended(self) -> Result<ExtendedTensor> {
        if self.mode_dim != 4 {
            return Err(Error::Format(format!("mode dimension {} is not 4", self.mode_dim)));
        }
        ExtendedTensor::from_entries(self.order, self.entries)
    }

    fn expected_len(order: usize, mode_dim: usize) -> Option<usize> {
        let order = u32::try_from(order).ok()?;
        mode_dim.checked_pow(order)
    }

    pub fn write_binary<W: Write>(&self, mut w: W) -> Result<()> {
        if !matches!(self.mode_dim, 3 | 4) {
            return Err(Error::Format(format!("mode dimension {} is not 3 or 4", self.mode_dim)));
        }
        if Self::expected_len(self.order, self.mode_dim) != Some(self.entries.len()) {
            return Err(Error::Format("entry count does not match order".into()));
        }
        let mut buf = Vec::with_capacity(16 + 8 * self.entries.len());
        buf.extend_from_slice(MAGIC);
        buf.extend_from_slice(&FORMAT_VERSION.to_le_bytes());
        buf.extend_from_slice(&(self.order as u32).to_le_bytes());
        buf.extend_from_slice(&(self.mode_dim as u32).to_le_bytes());
        for v in &self.entries {
            buf.extend_from_slice(&v.to_le_bytes());
        }
        w.write_all(&buf).map_err(io_err)
    }

    pub fn read_binary<R: Read>(mut r: R) -> Result<Self> {
        let mut header = [0u8; 16];
        r.read_exact(&mut header).map_err(io_err)?;
        if &header[0..4] != MAGIC {
            return Err(Error::Format("bad magic".into()));
        }
        let word = |i: usize| u32::from_le_bytes(header[i..i + 4].try_into().unwrap());
        let version = word(4);
        if version != FORMAT_VERSION {
            return Err(Error::Format(format!("unsupported version {version}")));
        }
        let order = word(8) as usize;
        let mode_dim = word(12) as usize;
        if !matches!(mode_dim, 3 | 4) {
            return Err(Error::Format(format!("mode dimension {mode_dim} is not 3 or 4")));
        }
        let len = Self::expected_len(order, mode_dim)
            .filter(|&l| l <= 1 << 28)
            .ok_or_else(|| Error::Format(format!("order {order} too large")))?;
        let mut body = Vec::new();
        r.read_to_end(&mut body).map_err(io_err)?;
        if body.len() != 8 * len {
            return Err(Error::Format(format!(
                "expected {} payload bytes, found {}",
                8 * len,
                body.len()
            )));
        }
        let entries = body
            .chunks_exact(8)
            .map(|c| f64::from_le_bytes(c.try_into().unwrap()))
            .collect();
        Ok(Self {
            order,
            mode_dim,
            entries,
        })
    }

    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        let base = if self.mode_dim == 3 { 1 } else { 0 };
        let header: Vec<String> = (1..=self.order).map(|k| format!("a{k}")).collect();
        let mut out = String::new();
        out.push_str(&header.join(","));
        if self.order > 0 {
            out.push(',');
        }
        out.push_str("value\n");
        let mut digits = vec![0usize; self.order];
        for v in &self.entries {
            for d in &digits {
                out.push_str(&(d + base).to_string());
                out.push(',');
            }
            out.push_str(&format!("{v:.16e}\n"));
            for d in digits.iter_mut().rev() {
                *d += 1;
                if *d < self.mode_dim {
                    break;
                }
                *d = 0;
            }
        }
        w.write_all(out.as_bytes()).map_err(io_err)
    }
}

fn io_err(e: std::io::Error) -> Error {
    Error::Format(e.to_string())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::state::PureState;
    use crate::tensor::{extended_tensor, full_correlation_tensor};
    use num_complex::Complex64 as C64;

    fn w3() -> PureState {
        let a = C64::new(1.0, 0.0);
        let z = C64::new(0.0, 0.0);
        PureState::from_unnormalized(3, vec![z, a, a, z, a, z, z, z]).unwrap()
    }

    #[test]
    fn binary_round_trip() {
        let t = full_correlation_tensor(&w3()).unwrap();
        let mut buf = Vec::new();
        TensorFile::from_corr(&t).write_binary(&mut buf).unwrap();
        assert_eq!(buf.len(), 16 + 8 * 27);
        assert_eq!(&buf[0..4], b"CTNS");
        let back = TensorFile::read_binary(&buf[..]).unwrap().into_corr().unwrap();
        assert_eq!(back, t);

        let e = extended_tensor(&w3()).unwrap();
        let mut buf = Vec::new();
        TensorFile::from_extended(&e).write_binary(&mut buf).unwrap();
        let back = TensorFile::read_binary(&buf[..]).unwrap().into_extended().unwrap();
        assert_eq!(back, e);
    }

    #[test]
    fn rejects_truncated_and_bad_magic() {
        let t = full_correlation_tensor(&w3()).unwrap();
        let mut buf = Vec::new();
        TensorFile::from_corr(&t).write_binary(&mut buf).unwrap();
        assert!(TensorFile::read_binary(&buf[..buf.len() - 1]).is_err());
        buf[0] = b'X';
        assert!(TensorFile::read_binary(&buf[..]).is_err());
    }

    #[test]
    fn csv_rows() {
        let t = full_correlation_tensor(&w3()).unwrap();
        let mut buf = Vec::new();
        TensorFile::from_corr(&t).write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "a1,a2,a3,value");
        assert_eq!(lines.len(), 28);
        assert!(lines[1].starts_with("1,1,1,"));
        assert!(lines[27].starts_with("3,3,3,-1.0"));
    }
}
