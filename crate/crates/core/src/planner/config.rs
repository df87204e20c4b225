use serde::{Deserialize, Serialize};

use super::ShotType;
use crate::tracks::StatsParams;

/// Horizontal field of view per shot type, degrees.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct FovTable {
    pub tracking: f64,
    #[serde(rename = "static")]
    pub static_: f64,
    pub medium: f64,
    pub pan: f64,
    pub recommender: f64,
}

impl Default for FovTable {
    fn default() -> Self {
        Self { tracking: 75.0, static_: 115.0, medium: 90.0, pan: 90.0, recommender: 75.0 }
    }
}

impl FovTable {
    pub fn degrees(&self, t: ShotType) -> f64 {
        match t {
            ShotType::Tracking => self.tracking,
            ShotType::Static => self.static_,
            ShotType::Medium => self.medium,
            ShotType::Pan => self.pan,
            ShotType::Recommender => self.recommender,
        }
    }

    pub fn radians(&self, t: ShotType) -> f64 {
        self.degrees(t).to_radians()
    }
}

/// Planner tunables. Angles are degrees and times seconds, as in config
/// files; conversion to radians happens at use.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct PlannerConfig {
    pub shot_len_s: f64,
    pub fov_deg: FovTable,
    pub hyps_per_type: usize,
    pub type_quota: f64,
    pub max_consecutive_same_type: usize,
    pub jump_cut_min_angle_deg: f64,
    pub jump_cut_fov_delta_deg: f64,
    pub jump_cut_penalty: f64,
    pub max_cam_speed_deg_s: f64,
    pub max_pan_speed_deg_s: f64,
    /// Per-frame exponential smoothing of tracking paths at 25 fps.
    pub smoothing_alpha: f64,
    pub cluster_threshold_deg: f64,
    pub pan_min_sep_deg: f64,
    pub pan_max_sep_deg: f64,
    pub nbhd_ref_deg: f64,
    pub visited_shots: usize,
    pub max_motion_gap: u32,
    /// Viewport width / height used for coverage tests.
    pub aspect: f64,
    /// Reserved; planning is deterministic and ignores it.
    pub rng_seed: u64,
}

impl Default for PlannerConfig {
    fn default() -> Self {
        Self {
            shot_len_s: 3.0,
            fov_deg: FovTable::default(),
            hyps_per_type: 3,
            type_quota: 0.4,
            max_consecutive_same_type: 2,
            jump_cut_min_angle_deg: 30.0,
            jump_cut_fov_delta_deg: 20.0,
            jump_cut_penalty: 0.5,
            max_cam_speed_deg_s: 60.0,
            max_pan_speed_deg_s: 30.0,
            smoothing_alpha: 0.3,
            cluster_threshold_deg: 40.0,
            pan_min_sep_deg: 40.0,
            pan_max_sep_deg: 120.0,
            nbhd_ref_deg: 30.0,
            visited_shots: 3,
            max_motion_gap: 5,
            aspect: 16.0 / 9.0,
            rng_seed: 0,
        }
    }
}

impl PlannerConfig {
    pub fn validate(&self) -> Result<(), String> {
        let positive = [
            ("shot_len_s", self.shot_len_s),
            ("jump_cut_min_angle_deg", self.jump_cut_min_angle_deg),
            ("jump_cut_fov_delta_deg", self.jump_cut_fov_delta_deg),
            ("jump_cut_penalty", self.jump_cut_penalty),
            ("max_cam_speed_deg_s", self.max_cam_speed_deg_s),
            ("max_pan_speed_deg_s", self.max_pan_speed_deg_s),
            ("cluster_threshold_deg", self.cluster_threshold_deg),
            ("pan_min_sep_deg", self.pan_min_sep_deg),
            ("pan_max_sep_deg", self.pan_max_sep_deg),
            ("nbhd_ref_deg", self.nbhd_ref_deg),
            ("aspect", self.aspect),
        ];
        if let Some((name, v)) = positive.iter().find(|(_, v)| !(v.is_finite() && *v > 0.0)) {
            return Err(format!("{name} must be positive, got {v}"));
        }
        for t in ShotType::ALL {
            let f = self.fov_deg.degrees(t);
            if !(f > 0.0 && f < 180.0) {
                return Err(format!("fov for {t} must lie in (0, 180), got {f}"));
            }
        }
        if !(self.type_quota > 0.0 && self.type_quota <= 1.0) {
            return Err(format!("type_quota must lie in (0, 1], got {}", self.type_quota));
        }
        if !(self.smoothing_alpha > 0.0 && self.smoothing_alpha <= 1.0) {
            return Err(format!("smoothing_alpha must lie in (0, 1], got {}", self.smoothing_alpha));
        }
        if self.hyps_per_type == 0 || self.max_consecutive_same_type == 0 {
            return Err("hyps_per_type and max_consecutive_same_type must be positive".into());
        }
        if self.visited_shots == 0 || self.max_motion_gap == 0 {
            return Err("visited_shots and max_motion_gap must be positive".into());
        }
        if self.pan_min_sep_deg > self.pan_max_sep_deg {
            return Err("pan_min_sep_deg exceeds pan_max_sep_deg".into());
        }
        Ok(())
    }

    /// Hypotheses generated per type, kept within 2..=4.
    pub fn hyps(&self) -> usize {
        self.hyps_per_type.clamp(2, 4)
    }

    pub fn shot_frames(&self, fps: f64) -> u32 {
        ((self.shot_len_s * fps).round() as u32).max(1)
    }

    /// Per-frame smoothing factor rescaled to the video frame rate.
    pub fn alpha_at(&self, fps: f64) -> f64 {
        1.0 - (1.0 - self.smoothing_alpha).powf(25.0 / fps)
    }

    pub fn stats_params(&self) -> StatsParams {
        StatsParams {
            nbhd_ref: self.nbhd_ref_deg.to_radians(),
            visited_shots: self.visited_shots,
            max_motion_gap: self.max_motion_gap,
            aspect: self.aspect,
        }
    }
}
