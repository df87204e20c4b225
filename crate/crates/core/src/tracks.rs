//! Object tracks on the equirectangular frame and the per-shot object
//! statistics derived from them.

use std::collections::{BTreeMap, HashSet};
use std::f64::consts::{FRAC_PI_2, PI, TAU};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::planner::Shot;
use crate::sphere::{
    angular_distance, band_solid_angle_fraction, gnomonic_project, pix_to_sph, spherical_centroid,
    SphericalPoint, Viewport, YawInterval,
};

#[derive(Debug, Error)]
pub enum TrackError {
    #[error("malformed track file: {0}")]
    Json(#[from] serde_json::Error),
    #[error("{path}: {msg}")]
    Schema { path: String, msg: String },
    #[error("tracks[{index}]: duplicate track id {id}")]
    DuplicateId { index: usize, id: u32 },
    #[error("{path}: frame {frame} does not follow frame {prev}")]
    NonMonotone { path: String, prev: u32, frame: u32 },
    #[error("frame size {width}x{height} is not 2:1")]
    NotEquirect { width: u32, height: u32 },
}

#[derive(Debug, Error, PartialEq)]
pub enum StatsError {
    #[error("empty shot range [{start}, {end})")]
    EmptyRange { start: u32, end: u32 },
    #[error("shot range [{start}, {end}) exceeds video of {n_frames} frames")]
    OutOfRange { start: u32, end: u32, n_frames: u32 },
}

/// One bounding box in equirectangular pixels; `x + w` past the right edge
/// wraps across the seam.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrackBox {
    #[serde(rename = "f")]
    pub frame: u32,
    pub x: f64,
    pub y: f64,
    pub w: f64,
    pub h: f64,
}

impl TrackBox {
    /// Box centre on the sphere.
    pub fn center(&self, width: u32, height: u32) -> SphericalPoint {
        box_center(self, width, height)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ObjectTrack {
    pub id: u32,
    #[serde(rename = "class")]
    pub class_label: String,
    pub boxes: Vec<TrackBox>,
}

impl ObjectTrack {
    /// Box at `frame`, if the object was observed there.
    pub fn box_at(&self, frame: u32) -> Option<&TrackBox> {
        self.boxes
            .binary_search_by_key(&frame, |b| b.frame)
            .ok()
            .map(|i| &self.boxes[i])
    }

    /// Boxes with frames in `[start, end)`.
    pub fn boxes_in(&self, start: u32, end: u32) -> &[TrackBox] {
        let lo = self.boxes.partition_point(|b| b.frame < start);
        let hi = self.boxes.partition_point(|b| b.frame < end);
        &self.boxes[lo..hi]
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrackSet {
    pub fps: f64,
    pub width: u32,
    pub height: u32,
    pub n_frames: u32,
    pub tracks: Vec<ObjectTrack>,
}

impl TrackSet {
    pub fn track(&self, id: u32) -> Option<&ObjectTrack> {
        self.tracks.iter().find(|t| t.id == id)
    }

    pub fn class_of(&self, id: u32) -> Option<&str> {
        self.track(id).map(|t| t.class_label.as_str())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("track set serializes")
    }

    /// Checks every structural invariant of a track file.
    pub fn validate(&self) -> Result<(), TrackError> {
        let schema = |path: String, msg: String| Err(TrackError::Schema { path, msg });
        if !(self.fps.is_finite() && self.fps > 0.0) {
            return schema("fps".into(), format!("must be positive, got {}", self.fps));
        }
        if self.height == 0 || self.width != 2 * self.height {
            return Err(TrackError::NotEquirect { width: self.width, height: self.height });
        }
        let (fw, fh) = (self.width as f64, self.height as f64);
        let mut seen = HashSet::new();
        for (ti, track) in self.tracks.iter().enumerate() {
            if !seen.insert(track.id) {
                return Err(TrackError::DuplicateId { index: ti, id: track.id });
            }
            let mut prev: Option<u32> = None;
            for (bi, b) in track.boxes.iter().enumerate() {
                let path = format!("tracks[{ti}].boxes[{bi}]");
                if let Some(p) = prev {
                    if b.frame <= p {
                        return Err(TrackError::NonMonotone { path, prev: p, frame: b.frame });
                    }
                }
                prev = Some(b.frame);
                if b.frame >= self.n_frames {
                    return schema(path, format!("frame {} >= n_frames {}", b.frame, self.n_frames));
                }
                let finite = [b.x, b.y, b.w, b.h].iter().all(|v| v.is_finite());
                if !finite || !(0.0..fw).contains(&b.x) {
                    return schema(path, format!("x {} outside [0, {fw})", b.x));
                }
                if !(b.w > 0.0 && b.w <= fw) {
                    return schema(path, format!("w {} outside (0, {fw}]", b.w));
                }
                if !(b.h > 0.0 && b.y >= 0.0 && b.y + b.h <= fh) {
                    return schema(path, format!("y {} h {} outside [0, {fh}]", b.y, b.h));
                }
            }
        }
        Ok(())
    }
}

/// Parses and validates a track file.
pub fn parse_tracks(bytes: &[u8]) -> Result<TrackSet, TrackError> {
    let ts: TrackSet = serde_json::from_slice(bytes)?;
    ts.validate()?;
    Ok(ts)
}

pub fn box_center(b: &TrackBox, width: u32, height: u32) -> SphericalPoint {
    let w = width as f64;
    let cx = (b.x + b.w / 2.0).rem_euclid(w);
    let cy = b.y + b.h / 2.0;
    pix_to_sph(cx, cy, width, height).expect("validated box centre lies inside the frame")
}

/// Solid-angle fraction covered by the box's latitude/longitude extent.
pub fn box_size(b: &TrackBox, width: u32, height: u32) -> f64 {
    let (w, h) = (width as f64, height as f64);
    let yaw = YawInterval { start: TAU * b.x / w - PI, span: TAU * b.w / w };
    let top = FRAC_PI_2 - PI * b.y / h;
    let bottom = FRAC_PI_2 - PI * (b.y + b.h) / h;
    band_solid_angle_fraction(yaw, bottom.max(-FRAC_PI_2), top.min(FRAC_PI_2)).unwrap_or(0.0)
}

/// Per-object measures for one shot window.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ShotObjectStats {
    pub track_id: u32,
    /// Mean solid-angle fraction.
    pub avg_size: f64,
    /// Mean angular speed of the box centre, degrees per second.
    pub motion_mag: f64,
    /// 1 for an isolated object.
    pub nbhd_score: f64,
    /// Fraction of recent on-screen samples in which the object was visible.
    pub visited_score: f64,
    pub presence: f64,
    pub mean_center: SphericalPoint,
}

/// Tunables of [`compute_shot_stats`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StatsParams {
    /// Neighbour distance at which an object counts as fully isolated, radians.
    pub nbhd_ref: f64,
    /// Number of most recent shots consulted for the visited score.
    pub visited_shots: usize,
    /// Present-frame pairs further apart than this are skipped for motion.
    pub max_motion_gap: u32,
    /// Viewport aspect used when replaying past shots.
    pub aspect: f64,
}

impl Default for StatsParams {
    fn default() -> Self {
        Self {
            nbhd_ref: 30f64.to_radians(),
            visited_shots: 3,
            max_motion_gap: 5,
            aspect: 16.0 / 9.0,
        }
    }
}

/// Computes [`ShotObjectStats`] for every track observed in `[start, end)`.
pub fn compute_shot_stats(
    ts: &TrackSet,
    start: u32,
    end: u32,
    history: &[Shot],
    params: &StatsParams,
) -> Result<Vec<ShotObjectStats>, StatsError> {
    if start >= end {
        return Err(StatsError::EmptyRange { start, end });
    }
    if end > ts.n_frames {
        return Err(StatsError::OutOfRange { start, end, n_frames: ts.n_frames });
    }
    let (w, h) = (ts.width, ts.height);
    let n_window = (end - start) as f64;

    // centres per frame, for neighbour lookups
    let mut by_frame: BTreeMap<u32, Vec<(u32, SphericalPoint)>> = BTreeMap::new();
    for t in &ts.tracks {
        for b in t.boxes_in(start, end) {
            by_frame.entry(b.frame).or_default().push((t.id, box_center(b, w, h)));
        }
    }

    let recent = &history[history.len().saturating_sub(params.visited_shots)..];

    let mut out = Vec::new();
    for t in &ts.tracks {
        let boxes = t.boxes_in(start, end);
        if boxes.is_empty() {
            continue;
        }
        let centers: Vec<SphericalPoint> = boxes.iter().map(|b| box_center(b, w, h)).collect();
        let n = boxes.len() as f64;

        let avg_size = boxes.iter().map(|b| box_size(b, w, h)).sum::<f64>() / n;

        let mut speed_sum = 0.0;
        let mut pairs = 0usize;
        for i in 1..boxes.len() {
            let gap = boxes[i].frame - boxes[i - 1].frame;
            if gap > params.max_motion_gap {
                continue;
            }
            let dt = gap as f64 / ts.fps;
            speed_sum += angular_distance(centers[i - 1], centers[i]).to_degrees() / dt;
            pairs += 1;
        }
        let motion_mag = if pairs == 0 { 0.0 } else { speed_sum / pairs as f64 };

        let mut nbhd_sum = 0.0;
        for (b, c) in boxes.iter().zip(&centers) {
            let nearest = by_frame[&b.frame]
                .iter()
                .filter(|(id, _)| *id != t.id)
                .map(|(_, o)| angular_distance(*c, *o))
                .min_by(f64::total_cmp);
            nbhd_sum += match nearest {
                Some(d) => (d / params.nbhd_ref).clamp(0.0, 1.0),
                None => 1.0,
            };
        }
        let nbhd_score = nbhd_sum / n;

        let visited_score = visited_score(t, recent, w, h, params.aspect);

        let mean_center =
            spherical_centroid(centers.iter().map(|c| (*c, 1.0))).unwrap_or(centers[0]);

        out.push(ShotObjectStats {
            track_id: t.id,
            avg_size,
            motion_mag,
            nbhd_score,
            visited_score,
            presence: n / n_window,
            mean_center,
        });
    }
    Ok(out)
}

fn visited_score(track: &ObjectTrack, shots: &[Shot], w: u32, h: u32, aspect: f64) -> f64 {
    let mut samples = 0usize;
    let mut visible = 0usize;
    for shot in shots {
        for frame in shot.start_frame..shot.end_frame {
            samples += 1;
            let (Some(center), Some(b)) = (shot.center_at(frame), track.box_at(frame)) else {
                continue;
            };
            let Ok(view) = Viewport::new(center, shot.chosen.hfov, aspect) else {
                continue;
            };
            if gnomonic_project(&view, box_center(b, w, h)).is_inside() {
                visible += 1;
            }
        }
    }
    if samples == 0 {
        0.0
    } else {
        visible as f64 / samples as f64
    }
}
