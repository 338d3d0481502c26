use std::path::{Path, PathBuf};

use image::RgbImage;
use rayon::prelude::*;

use crate::error::{dims_mismatch, invalid, Error, Result};
use crate::qtensor::QTensor3;
use crate::Quaternion;

/// RGB video with channel values in `[0, 1]`.
///
/// Samples are stored frame by frame, row-major, channels interleaved.
#[derive(Clone, Debug, PartialEq)]
pub struct FrameSequence {
    height: usize,
    width: usize,
    frames: usize,
    data: Vec<f64>,
}

impl FrameSequence {
    pub fn from_vec(height: usize, width: usize, frames: usize, data: Vec<f64>) -> Result<Self> {
        if frames == 0 {
            return Err(invalid("frames", "a sequence needs at least one frame"));
        }
        if data.len() != height * width * frames * 3 {
            return Err(dims_mismatch("FrameSequence::from_vec", height * width * frames * 3, data.len()));
        }
        if let Some(v) = data.iter().find(|v| !(0.0..=1.0).contains(*v)) {
            return Err(invalid("pixels", format!("channel value {v} is outside [0, 1]")));
        }
        Ok(Self { height, width, frames, data })
    }

    /// Sequence from 8-bit frames, all the same size.
    pub fn from_images(images: &[RgbImage]) -> Result<Self> {
        let first = images.first().ok_or_else(|| invalid("frames", "no frames given"))?;
        let (w, h) = first.dimensions();
        let mut data = Vec::with_capacity(images.len() * (w * h * 3) as usize);
        for img in images {
            if img.dimensions() != (w, h) {
                return Err(dims_mismatch("frame size", (w, h), img.dimensions()));
            }
            data.extend(img.as_raw().iter().map(|&b| f64::from(b) / 255.0));
        }
        Self::from_vec(h as usize, w as usize, images.len(), data)
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn frames(&self) -> usize {
        self.frames
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn same_shape(&self, other: &FrameSequence) -> bool {
        (self.height, self.width, self.frames) == (other.height, other.width, other.frames)
    }

    /// Channel `c` of frame `t` as a row-major plane.
    pub fn plane(&self, t: usize, c: usize) -> Vec<f64> {
        let n = self.height * self.width;
        self.data[t * n * 3..(t + 1) * n * 3].iter().skip(c).step_by(3).copied().collect()
    }

    /// Frame `t` quantized to 8 bits.
    pub fn to_image(&self, t: usize) -> RgbImage {
        let n = self.height * self.width * 3;
        let raw = self.data[t * n..(t + 1) * n].iter().map(|&v| quantize(v)).collect();
        RgbImage::from_raw(self.width as u32, self.height as u32, raw).expect("buffer size matches")
    }

    /// The same sequence after an 8-bit round trip.
    pub fn quantized(&self) -> Self {
        Self { data: self.data.iter().map(|&v| f64::from(quantize(v)) / 255.0).collect(), ..self.clone() }
    }

    /// Writes `frame_0001.png`, `frame_0002.png`, … into `dir`, creating it.
    pub fn save_dir(&self, dir: impl AsRef<Path>) -> Result<()> {
        let dir = dir.as_ref();
        std::fs::create_dir_all(dir)?;
        (0..self.frames)
            .into_par_iter()
            .try_for_each(|t| self.to_image(t).save(dir.join(frame_name(t))).map_err(Error::from))
    }

    /// Reads every `.png` in `dir` in lexicographic file-name order.
    pub fn load_dir(dir: impl AsRef<Path>) -> Result<Self> {
        let dir = dir.as_ref();
        let paths = png_files(dir)?;
        if paths.is_empty() {
            return Err(Error::NoFrames(dir.to_path_buf()));
        }
        let images = paths.par_iter().map(|p| Ok(image::open(p)?.to_rgb8())).collect::<Result<Vec<_>>>()?;
        Self::from_images(&images)
    }
}

/// `frame_{t+1:04}.png`.
pub fn frame_name(t: usize) -> String {
    format!("frame_{:04}.png", t + 1)
}

fn png_files(dir: &Path) -> Result<Vec<PathBuf>> {
    let mut out = Vec::new();
    for entry in std::fs::read_dir(dir)? {
        let path = entry?.path();
        let is_png = path.extension().and_then(|e| e.to_str()).is_some_and(|e| e.eq_ignore_ascii_case("png"));
        if is_png && path.is_file() {
            out.push(path);
        }
    }
    out.sort();
    Ok(out)
}

/// Clamp to `[0, 1]` and round to the nearest 8-bit level.
pub fn quantize(v: f64) -> u8 {
    (v.clamp(0.0, 1.0) * 255.0).round() as u8
}

/// Pixel `(i, j)` of frame `k` becomes `R·i + G·j + B·k` at `(i, j, k)`.
pub fn rgb_to_qtensor(seq: &FrameSequence) -> QTensor3 {
    let dims = (seq.height, seq.width, seq.frames);
    let data = seq.data.chunks_exact(3).map(|p| Quaternion::pure(p[0], p[1], p[2])).collect();
    QTensor3::from_vec(dims, data)
}

/// Imaginary parts clamped and quantized to 8 bits; the real part is dropped.
pub fn qtensor_to_rgb(t: &QTensor3) -> FrameSequence {
    let (h, w, f) = t.dims();
    let level = |v: f64| f64::from(quantize(v)) / 255.0;
    let data = t.as_slice().iter().flat_map(|q| [level(q.x), level(q.y), level(q.z)]).collect();
    FrameSequence { height: h, width: w, frames: f, data }
}

#[cfg(test)]
mod tests {
    use super::*;
    use image::Rgb;

    #[test]
    fn encoding_examples() {
        let img = RgbImage::from_pixel(1, 1, Rgb([255, 0, 0]));
        let seq = FrameSequence::from_images(&[img]).unwrap();
        assert_eq!(rgb_to_qtensor(&seq)[(0, 0, 0)], Quaternion::pure(1.0, 0.0, 0.0));

        let t = QTensor3::from_vec((1, 1, 1), vec![Quaternion::new(0.0, 1.2, -0.1, 0.5)]);
        let back = qtensor_to_rgb(&t);
        assert_eq!(back.to_image(0).get_pixel(0, 0), &Rgb([255, 0, 128]));
    }

    #[test]
    fn eight_bit_round_trip() {
        let raw: Vec<u8> = (0..4 * 3 * 3 * 2).map(|v| (v * 37 % 256) as u8).collect();
        let images: Vec<RgbImage> =
            raw.chunks(4 * 3 * 3).map(|c| RgbImage::from_raw(3, 4, c.to_vec()).unwrap()).collect();
        let seq = FrameSequence::from_images(&images).unwrap();
        let t = rgb_to_qtensor(&seq);
        assert!(t.is_pure());
        let back = qtensor_to_rgb(&t);
        assert_eq!(back, seq);
        assert_eq!(back.to_image(1), images[1]);
    }

    #[test]
    fn rejects_out_of_range_and_ragged() {
        assert!(FrameSequence::from_vec(1, 1, 1, vec![0.0, 1.5, 0.0]).is_err());
        assert!(FrameSequence::from_vec(1, 1, 0, vec![]).is_err());
        let a = RgbImage::new(2, 2);
        let b = RgbImage::new(3, 2);
        assert!(FrameSequence::from_images(&[a, b]).is_err());
    }

    #[test]
    fn plane_extraction() {
        let seq = FrameSequence::from_vec(1, 2, 1, vec![0.1, 0.2, 0.3, 0.4, 0.5, 0.6]).unwrap();
        assert_eq!(seq.plane(0, 1), vec![0.2, 0.5]);
    }
}
