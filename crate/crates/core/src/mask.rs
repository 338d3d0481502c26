//! Observation masks: which quaternion entries are known.
//!
//! On disk a mask is a 16-byte header followed by run lengths:
//!
//! ```text
//! "QMSK"  version: u16  I3: u16  I1: u32  I2: u32     (little endian)
//! LEB128 run lengths, alternating unobserved / observed, starting unobserved
//! ```
//!
//! Runs follow the tensor's frontal-slice-major order.

use std::io::{Read, Write};
use std::path::Path;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{dims_mismatch, invalid, Error, Result};
use crate::qtensor::{Dims, QTensor3};
use crate::Quaternion;

const MAGIC: &[u8; 4] = b"QMSK";
const VERSION: u16 = 1;

/// Boolean tensor marking observed entries.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mask {
    dims: Dims,
    bits: Vec<bool>,
}

/// Sampling rate and seed for [`sample_mask`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MaskSpec {
    sample_rate: f64,
    seed: u64,
}

impl MaskSpec {
    pub fn new(sample_rate: f64, seed: u64) -> Result<Self> {
        if !(sample_rate > 0.0 && sample_rate <= 1.0) {
            return Err(invalid("sample_rate", format!("{sample_rate} is outside (0, 1]")));
        }
        Ok(Self { sample_rate, seed })
    }

    pub fn sample_rate(&self) -> f64 {
        self.sample_rate
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// `floor(SR·n)`, guarded against products like `0.3·10 = 2.9999…`.
    pub fn observed_count(&self, n: usize) -> usize {
        ((self.sample_rate * n as f64 + 1e-9).floor() as usize).min(n)
    }
}

/// Marks exactly `floor(SR·I1·I2·I3)` entries, uniformly without replacement.
pub fn sample_mask(dims: Dims, spec: &MaskSpec) -> Mask {
    let n = dims.0 * dims.1 * dims.2;
    let m = spec.observed_count(n);
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut bits = vec![false; n];
    for idx in rand::seq::index::sample(&mut rng, n, m) {
        bits[idx] = true;
    }
    Mask { dims, bits }
}

impl Mask {
    pub fn full(dims: Dims) -> Self {
        Self { dims, bits: vec![true; dims.0 * dims.1 * dims.2] }
    }

    pub fn from_vec(dims: Dims, bits: Vec<bool>) -> Result<Self> {
        if bits.len() != dims.0 * dims.1 * dims.2 {
            return Err(dims_mismatch("Mask::from_vec", dims.0 * dims.1 * dims.2, bits.len()));
        }
        Ok(Self { dims, bits })
    }

    pub fn dims(&self) -> Dims {
        self.dims
    }

    pub fn as_slice(&self) -> &[bool] {
        &self.bits
    }

    /// Number of observed entries.
    pub fn count(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }

    pub fn get(&self, i: usize, j: usize, k: usize) -> bool {
        self.bits[(k * self.dims.0 + i) * self.dims.1 + j]
    }

    /// `P_Ω(T)`: observed entries kept, the rest zeroed.
    pub fn project(&self, t: &QTensor3) -> QTensor3 {
        assert_eq!(t.dims(), self.dims, "mask dims");
        let data = t
            .as_slice()
            .iter()
            .zip(&self.bits)
            .map(|(&q, &b)| if b { q } else { Quaternion::ZERO })
            .collect();
        QTensor3::from_vec(self.dims, data)
    }

    /// Overwrites the observed entries of `t` with those of `data`.
    pub fn impose(&self, t: &mut QTensor3, data: &QTensor3) {
        assert_eq!(t.dims(), self.dims, "mask dims");
        assert_eq!(data.dims(), self.dims, "mask dims");
        for ((o, &d), &b) in t.as_mut_slice().iter_mut().zip(data.as_slice()).zip(&self.bits) {
            if b {
                *o = d;
            }
        }
    }

    pub fn write_to(&self, mut w: impl Write) -> Result<()> {
        let (n1, n2, n3) = self.dims;
        let n3 = u16::try_from(n3).map_err(|_| invalid("mask", "more than 65535 frames"))?;
        let n1 = u32::try_from(n1).map_err(|_| invalid("mask", "too many rows"))?;
        let n2 = u32::try_from(n2).map_err(|_| invalid("mask", "too many columns"))?;
        let mut buf = Vec::with_capacity(16 + self.bits.len() / 4);
        buf.extend_from_slice(MAGIC);
        buf.extend_from_slice(&VERSION.to_le_bytes());
        buf.extend_from_slice(&n3.to_le_bytes());
        buf.extend_from_slice(&n1.to_le_bytes());
        buf.extend_from_slice(&n2.to_le_bytes());

        let mut current = false;
        let mut run = 0u64;
        for &b in &self.bits {
            if b == current {
                run += 1;
            } else {
                write_varint(&mut buf, run);
                current = b;
                run = 1;
            }
        }
        write_varint(&mut buf, run);
        w.write_all(&buf)?;
        Ok(())
    }

    pub fn read_from(mut r: impl Read) -> Result<Self> {
        let mut bytes = Vec::new();
        r.read_to_end(&mut bytes)?;
        let bad = |reason: &str| Error::Format { kind: "mask", reason: reason.into() };
        if bytes.len() < 16 || &bytes[..4] != MAGIC {
            return Err(bad("missing QMSK header"));
        }
        let version = u16::from_le_bytes([bytes[4], bytes[5]]);
        if version != VERSION {
            return Err(bad(&format!("unsupported version {version}")));
        }
        let n3 = u16::from_le_bytes([bytes[6], bytes[7]]) as usize;
        let n1 = u32::from_le_bytes(bytes[8..12].try_into().unwrap()) as usize;
        let n2 = u32::from_le_bytes(bytes[12..16].try_into().unwrap()) as usize;
        let n = n1 * n2 * n3;

        let mut bits = Vec::with_capacity(n);
        let mut pos = 16;
        let mut value = false;
        while pos < bytes.len() {
            let run = read_varint(&bytes, &mut pos).ok_or_else(|| bad("truncated run length"))?;
            if run as usize > n - bits.len() {
                return Err(bad("runs exceed tensor size"));
            }
            bits.extend(std::iter::repeat_n(value, run as usize));
            value = !value;
        }
        if bits.len() != n {
            return Err(bad("runs do not cover the tensor"));
        }
        Ok(Self { dims: (n1, n2, n3), bits })
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let f = std::fs::File::create(path)?;
        self.write_to(std::io::BufWriter::new(f))
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::read_from(std::fs::File::open(path)?)
    }
}

fn write_varint(buf: &mut Vec<u8>, mut v: u64) {
    loop {
        let byte = (v & 0x7f) as u8;
        v >>= 7;
        if v == 0 {
            buf.push(byte);
            return;
        }
        buf.push(byte | 0x80);
    }
}

fn read_varint(bytes: &[u8], pos: &mut usize) -> Option<u64> {
    let mut v = 0u64;
    let mut shift = 0;
    loop {
        let b = *bytes.get(*pos)?;
        *pos += 1;
        if shift >= 64 {
            return None;
        }
        v |= u64::from(b & 0x7f) << shift;
        if b & 0x80 == 0 {
            return Some(v);
        }
        shift += 7;
    }
}
