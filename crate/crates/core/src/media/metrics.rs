use rayon::prelude::*;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::FrameSequence;
use crate::error::{dims_mismatch, Result};

/// SSIM window side.
pub const SSIM_WINDOW: usize = 8;
const C1: f64 = 0.01 * 0.01;
const C2: f64 = 0.03 * 0.03;

fn check(a: &FrameSequence, b: &FrameSequence, op: &'static str) -> Result<()> {
    if !a.same_shape(b) {
        return Err(dims_mismatch(
            op,
            (a.height(), a.width(), a.frames()),
            (b.height(), b.width(), b.frames()),
        ));
    }
    Ok(())
}

/// `10·log10(1/MSE)` over every sample; `+∞` for identical inputs.
pub fn psnr(reference: &FrameSequence, test: &FrameSequence) -> Result<f64> {
    check(reference, test, "psnr")?;
    let n = reference.as_slice().len() as f64;
    let sse: f64 = reference.as_slice().iter().zip(test.as_slice()).map(|(a, b)| (a - b) * (a - b)).sum();
    if sse == 0.0 {
        return Ok(f64::INFINITY);
    }
    Ok(10.0 * (n / sse).log10())
}

/// Mean SSIM over every `8×8` window (stride 1) of two planes.
///
/// Windows shrink to the plane when it is smaller than 8 on a side.
/// Local statistics use uniform weights and population variances.
pub fn ssim_plane(a: &[f64], b: &[f64], height: usize, width: usize) -> f64 {
    assert_eq!(a.len(), height * width);
    assert_eq!(b.len(), height * width);
    let win = SSIM_WINDOW.min(height).min(width);
    if win == 0 {
        return 1.0;
    }
    let sa = SummedArea::new(a.iter().copied(), height, width);
    let sb = SummedArea::new(b.iter().copied(), height, width);
    let saa = SummedArea::new(a.iter().map(|x| x * x), height, width);
    let sbb = SummedArea::new(b.iter().map(|x| x * x), height, width);
    let sab = SummedArea::new(a.iter().zip(b).map(|(x, y)| x * y), height, width);

    let inv = 1.0 / (win * win) as f64;
    let mut total = 0.0;
    let mut count = 0usize;
    for i in 0..=height - win {
        for j in 0..=width - win {
            let mx = sa.window(i, j, win) * inv;
            let my = sb.window(i, j, win) * inv;
            let vx = saa.window(i, j, win) * inv - mx * mx;
            let vy = sbb.window(i, j, win) * inv - my * my;
            let cxy = sab.window(i, j, win) * inv - mx * my;
            total += ((2.0 * mx * my + C1) * (2.0 * cxy + C2)) / ((mx * mx + my * my + C1) * (vx + vy + C2));
            count += 1;
        }
    }
    total / count as f64
}

/// Per-channel SSIM averaged over channels, then over frames.
pub fn assim(reference: &FrameSequence, test: &FrameSequence) -> Result<f64> {
    check(reference, test, "assim")?;
    let (h, w) = (reference.height(), reference.width());
    let per_frame: Vec<f64> = (0..reference.frames())
        .into_par_iter()
        .map(|t| {
            (0..3).map(|c| ssim_plane(&reference.plane(t, c), &test.plane(t, c), h, w)).sum::<f64>() / 3.0
        })
        .collect();
    Ok(per_frame.iter().sum::<f64>() / per_frame.len() as f64)
}

struct SummedArea {
    width: usize,
    // (height + 1) × (width + 1), zero first row and column
    table: Vec<f64>,
}

impl SummedArea {
    fn new(values: impl Iterator<Item = f64>, height: usize, width: usize) -> Self {
        let stride = width + 1;
        let mut table = vec![0.0; (height + 1) * stride];
        let mut values = values;
        for i in 0..height {
            let mut row = 0.0;
            for j in 0..width {
                row += values.next().expect("plane size");
                table[(i + 1) * stride + j + 1] = table[i * stride + j + 1] + row;
            }
        }
        Self { width, table }
    }

    fn window(&self, i: usize, j: usize, n: usize) -> f64 {
        let s = self.width + 1;
        let t = &self.table;
        t[(i + n) * s + j + n] - t[i * s + j + n] - t[(i + n) * s + j] + t[i * s + j]
    }
}

/// Quality summary written next to a recovery.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Metrics {
    pub schema: u32,
    /// Decibels; infinite for a perfect match, written as `"inf"`.
    #[serde(serialize_with = "ser_db", deserialize_with = "de_db")]
    pub psnr: f64,
    pub assim: f64,
    pub iterations: usize,
    /// Wall time, present only when timing was requested.
    pub seconds: Option<f64>,
}

impl Metrics {
    pub const SCHEMA: u32 = 1;

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)? + "\n")
    }
}

fn ser_db<S: Serializer>(v: &f64, s: S) -> std::result::Result<S::Ok, S::Error> {
    if v.is_infinite() && *v > 0.0 {
        s.serialize_str("inf")
    } else {
        s.serialize_f64(*v)
    }
}

fn de_db<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<f64, D::Error> {
    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Db {
        Num(f64),
        Text(String),
    }
    match Db::deserialize(d)? {
        Db::Num(v) => Ok(v),
        Db::Text(s) if s == "inf" => Ok(f64::INFINITY),
        Db::Text(s) => Err(serde::de::Error::custom(format!("unexpected psnr value {s:?}"))),
    }
}
