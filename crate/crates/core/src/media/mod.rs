//! Frame sequences on disk, the RGB ↔ pure quaternion encoding, quality
//! metrics and raw tensor files.

mod frames;
mod metrics;
mod tensor_file;

pub use frames::{frame_name, qtensor_to_rgb, quantize, rgb_to_qtensor, FrameSequence};
pub use metrics::{assim, psnr, ssim_plane, Metrics, SSIM_WINDOW};
pub use tensor_file::{load_tensor, read_tensor, save_tensor, write_tensor};
