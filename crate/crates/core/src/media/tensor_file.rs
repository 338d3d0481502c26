//! Raw quaternion tensor files.
//!
//! ```text
//! "QTEN"  version: u16  reserved: u16  I1: u32  I2: u32  I3: u32
//! w x y z as f64 per entry, frontal-slice-major             (little endian)
//! ```

use std::io::{Read, Write};
use std::path::Path;

use crate::error::{invalid, Error, Result};
use crate::qtensor::QTensor3;
use crate::Quaternion;

const MAGIC: &[u8; 4] = b"QTEN";
const VERSION: u16 = 1;
const HEADER: usize = 20;

pub fn write_tensor(t: &QTensor3, mut w: impl Write) -> Result<()> {
    let (n1, n2, n3) = t.dims();
    let dim = |n: usize| u32::try_from(n).map_err(|_| invalid("tensor", "dimension exceeds u32"));
    let mut buf = Vec::with_capacity(HEADER + 32 * t.len());
    buf.extend_from_slice(MAGIC);
    buf.extend_from_slice(&VERSION.to_le_bytes());
    buf.extend_from_slice(&0u16.to_le_bytes());
    for n in [n1, n2, n3] {
        buf.extend_from_slice(&dim(n)?.to_le_bytes());
    }
    for q in t.as_slice() {
        for v in [q.w, q.x, q.y, q.z] {
            buf.extend_from_slice(&v.to_le_bytes());
        }
    }
    w.write_all(&buf)?;
    Ok(())
}

pub fn read_tensor(mut r: impl Read) -> Result<QTensor3> {
    let mut bytes = Vec::new();
    r.read_to_end(&mut bytes)?;
    let bad = |reason: String| Error::Format { kind: "tensor", reason };
    if bytes.len() < HEADER || &bytes[..4] != MAGIC {
        return Err(bad("missing QTEN header".into()));
    }
    let version = u16::from_le_bytes([bytes[4], bytes[5]]);
    if version != VERSION {
        return Err(bad(format!("unsupported version {version}")));
    }
    let dim = |o: usize| u32::from_le_bytes(bytes[o..o + 4].try_into().unwrap()) as usize;
    let dims = (dim(8), dim(12), dim(16));
    let n = dims.0 * dims.1 * dims.2;
    let body = &bytes[HEADER..];
    if body.len() != 32 * n {
        return Err(bad(format!("expected {} data bytes, found {}", 32 * n, body.len())));
    }
    let data = body
        .chunks_exact(32)
        .map(|c| {
            let f = |o: usize| f64::from_le_bytes(c[o..o + 8].try_into().unwrap());
            Quaternion::new(f(0), f(8), f(16), f(24))
        })
        .collect();
    Ok(QTensor3::from_vec(dims, data))
}

pub fn save_tensor(t: &QTensor3, path: impl AsRef<Path>) -> Result<()> {
    write_tensor(t, std::io::BufWriter::new(std::fs::File::create(path)?))
}

pub fn load_tensor(path: impl AsRef<Path>) -> Result<QTensor3> {
    read_tensor(std::fs::File::open(path)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_is_exact() {
        let t = QTensor3::from_fn((3, 2, 2), |i, j, k| {
            Quaternion::new(0.1 * i as f64, -1.0 / (j + 3) as f64, std::f64::consts::PI * k as f64, 1e-300)
        });
        let mut buf = Vec::new();
        write_tensor(&t, &mut buf).unwrap();
        assert_eq!(buf.len(), 20 + 32 * 12);
        assert_eq!(read_tensor(buf.as_slice()).unwrap(), t);
        assert!(read_tensor(&buf[..buf.len() - 1]).is_err());
    }
}
