//! autocine: automatic 2D editing of equirectangular 360° video.
//!
//! Given per-frame object tracks, the planner cuts the video into fixed-length
//! shot windows and for each one picks a virtual-camera path (tracking,
//! static, medium, pan or preference-driven) by scoring candidate paths on
//! the saliency of the objects they keep in frame. The renderer then turns
//! the resulting edit list into perspective frames.
//!
//! Modules:
//!
//! * [`sphere`] – spherical coordinates, gnomonic projection, solid angles.
//! * [`tracks`] – track files and per-shot object statistics.
//! * [`saliency`] – per-object saliency per shot type.
//! * [`planner`] – hypothesis generation, scoring, selection, edit lists.
//! * [`renderer`] – viewport rendering and contact sheets.
//! * [`frames`] – frame containers and on-disk frame sequences.
//! * [`synth`] – synthetic scenes with ground truth.

pub mod frames;
pub mod planner;
pub mod renderer;
pub mod saliency;
pub mod sphere;
pub mod synth;
pub mod tracks;

pub use frames::{EquirectFrame, FrameError, FrameSource};
pub use planner::{plan_edit, EditList, PlanError, PlannerConfig, Shot, ShotHypothesis, ShotType};
pub use renderer::{render_contact_sheet, render_edit, render_viewport, RenderError, RenderSpec};
pub use saliency::{saliency, ClassPriors, PreferenceMap, SaliencyWeights};
pub use sphere::{SphericalPoint, Viewport};
pub use tracks::{compute_shot_stats, parse_tracks, ShotObjectStats, TrackSet};

/// SHA-256 of `bytes` as lowercase hex.
pub fn sha256_hex(bytes: &[u8]) -> String {
    use sha2::{Digest, Sha256};
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}
