//! Synthetic test data: exactly low-rank pure tensors and smooth color videos.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{invalid, Error, Result};
use crate::media::FrameSequence;
use crate::qtensor::{qt_product, Dims, QTensor3, TransformSpec};
use crate::Quaternion;

/// Pure quaternion tensor of tubal rank exactly `rank` under `spec`.
///
/// Built as `P ⋆ W` with `P` real `I1×r×I3` and `W` pure `r×I2×I3`; a real
/// slice times a pure slice is pure, so the product stays pure. The result
/// is scaled so the largest component has magnitude 1.
pub fn lowrank(dims: Dims, rank: usize, seed: u64, spec: &TransformSpec) -> Result<QTensor3> {
    let (n1, n2, n3) = dims;
    if rank == 0 || rank >= n1.min(n2) {
        return Err(Error::InvalidTruncation { rank, limit: n1.min(n2) });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut g = || rng.sample::<f64, _>(StandardNormal);
    let p = QTensor3::from_fn((n1, rank, n3), |_, _, _| Quaternion::real(g()));
    let w = QTensor3::from_fn((rank, n2, n3), |_, _, _| Quaternion::pure(g(), g(), g()));
    let t = qt_product(&p, &w, spec)?;
    let peak = t.as_slice().iter().map(|q| q.x.abs().max(q.y.abs()).max(q.z.abs())).fold(0.0, f64::max);
    Ok(t.map(|q| Quaternion::pure(q.x / peak, q.y / peak, q.z / peak)))
}

/// Smooth color video: a few low-frequency cosine fields per channel plus a
/// soft blob drifting across the frame. Values stay inside `[0.05, 0.95]`.
pub fn smooth_video(height: usize, width: usize, frames: usize, seed: u64) -> Result<FrameSequence> {
    if height == 0 || width == 0 || frames == 0 {
        return Err(invalid("dims", "height, width and frames must be positive"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    const MODES: usize = 4;
    let mut fields = [[(0usize, 0usize, 0usize, 0.0f64); MODES]; 3];
    let mut base = [0.0; 3];
    for c in 0..3 {
        base[c] = rng.gen_range(0.35..0.55);
        for f in fields[c].iter_mut() {
            *f = (
                rng.gen_range(0..=3),
                rng.gen_range(0..=3),
                rng.gen_range(0..=1),
                rng.gen_range(-0.06..0.06),
            );
        }
    }
    let color: [f64; 3] = std::array::from_fn(|_| rng.gen_range(0.1..0.3));
    let (x0, y0) = (rng.gen_range(0.25..0.45), rng.gen_range(0.25..0.45));
    let (vx, vy) = (rng.gen_range(0.01..0.03), rng.gen_range(0.01..0.03));
    let radius = 0.12;

    let (hf, wf, nf) = (height as f64, width as f64, frames as f64);
    let mut data = Vec::with_capacity(height * width * frames * 3);
    for t in 0..frames {
        let (cx, cy) = (x0 + vx * t as f64, y0 + vy * t as f64);
        for i in 0..height {
            for j in 0..width {
                let (u, v) = ((i as f64 + 0.5) / hf, (j as f64 + 0.5) / wf);
                let blob = (-((u - cx).powi(2) + (v - cy).powi(2)) / (2.0 * radius * radius)).exp();
                for c in 0..3 {
                    let mut val = base[c] + color[c] * blob;
                    for &(a, b, k, amp) in &fields[c] {
                        val += amp
                            * (PI * a as f64 * u).cos()
                            * (PI * b as f64 * v).cos()
                            * (PI * k as f64 * (t as f64 + 0.5) / nf).cos();
                    }
                    data.push(val.clamp(0.05, 0.95));
                }
            }
        }
    }
    FrameSequence::from_vec(height, width, frames, data)
}
