//! Rasterization of stars and streaks into electron-count frames.

mod frame;
mod noise;
mod psf;
mod scene;

pub use frame::{Frame, StreakAnnotation};
pub use noise::{apply_noise_and_quantize, quantize, NoiseConfig};
pub use psf::{
    auto_annotate, clip_segment, render_point, render_streak, AnnotationBox, PSF_SUPPORT_SIGMA,
};
pub use scene::{
    render_frame, render_interleaved, visible_streaks, InterleavedFrames, Scene, StreakGeometry,
};
