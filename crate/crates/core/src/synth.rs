//! Synthetic 360° scenes with exact ground-truth tracks.
//!
//! Actors are flat-coloured latitude/longitude rectangles moving at constant
//! angular velocity over a smooth gradient background. Yaw motion wraps
//! across the seam; pitch motion reflects off the poles so boxes stay inside
//! the frame.

use std::f64::consts::PI;

use image::{Rgb, RgbImage};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::frames::{EquirectFrame, FrameError, FrameSource};
use crate::sphere::{sph_to_pix, wrap_yaw, SphericalPoint};
use crate::tracks::{ObjectTrack, TrackBox, TrackSet};

#[derive(Debug, Error, PartialEq)]
pub enum SynthError {
    #[error("invalid synthetic scene: {0}")]
    Invalid(String),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Actor {
    #[serde(rename = "class")]
    pub class_label: String,
    pub yaw_deg: f64,
    pub pitch_deg: f64,
    /// Angular velocity `[yaw, pitch]`, degrees per second.
    #[serde(default)]
    pub velocity_deg_s: [f64; 2],
    /// Box extent `[yaw, pitch]`, degrees.
    pub size_deg: [f64; 2],
    pub color: [u8; 3],
}

impl Actor {
    fn pitch_limits(&self) -> (f64, f64) {
        let half = self.size_deg[1] / 2.0;
        (-90.0 + half, 90.0 - half)
    }

    /// Box centre after `t` seconds, degrees `(yaw, pitch)` with yaw
    /// unwrapped.
    pub fn center_deg_at(&self, t: f64) -> (f64, f64) {
        let yaw = self.yaw_deg + self.velocity_deg_s[0] * t;
        let (lo, hi) = self.pitch_limits();
        let span = hi - lo;
        let raw = self.pitch_deg + self.velocity_deg_s[1] * t - lo;
        let folded = raw.rem_euclid(2.0 * span);
        let pitch = lo + if folded > span { 2.0 * span - folded } else { folded };
        (yaw, pitch)
    }

    pub fn center_at(&self, t: f64) -> SphericalPoint {
        let (yaw, pitch) = self.center_deg_at(t);
        SphericalPoint::new(wrap_yaw(yaw.to_radians()), pitch.to_radians().clamp(-PI / 2.0, PI / 2.0))
            .expect("pitch kept inside the frame")
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SynthSpec {
    pub duration_s: f64,
    pub fps: f64,
    /// Frame width in pixels; height is half of it.
    pub width: u32,
    #[serde(default)]
    pub actors: Vec<Actor>,
}

impl SynthSpec {
    pub fn height(&self) -> u32 {
        self.width / 2
    }

    pub fn n_frames(&self) -> u32 {
        (self.duration_s * self.fps).round() as u32
    }

    pub fn validate(&self) -> Result<(), SynthError> {
        let bad = |m: String| Err(SynthError::Invalid(m));
        if !(self.fps.is_finite() && self.fps > 0.0) {
            return bad(format!("fps must be positive, got {}", self.fps));
        }
        if self.n_frames() == 0 {
            return bad(format!("duration {} s yields no frames", self.duration_s));
        }
        if self.width < 4 || !self.width.is_multiple_of(2) {
            return bad(format!("width must be even and at least 4, got {}", self.width));
        }
        for (i, a) in self.actors.iter().enumerate() {
            let [sw, sh] = a.size_deg;
            if !(sw > 0.0 && sw <= 360.0 && sh > 0.0 && sh < 180.0) {
                return bad(format!("actors[{i}]: size {:?} out of range", a.size_deg));
            }
            if !(-90.0..=90.0).contains(&a.pitch_deg) || !a.yaw_deg.is_finite() {
                return bad(format!("actors[{i}]: bad start direction"));
            }
            if a.velocity_deg_s.iter().any(|v| !v.is_finite()) {
                return bad(format!("actors[{i}]: bad velocity"));
            }
        }
        Ok(())
    }
}

/// A validated scene that can produce frames and tracks.
#[derive(Debug, Clone)]
pub struct SynthScene {
    spec: SynthSpec,
    background: RgbImage,
}

impl SynthScene {
    pub fn new(spec: SynthSpec) -> Result<Self, SynthError> {
        spec.validate()?;
        let background = gradient_background(spec.width, spec.height());
        Ok(Self { spec, background })
    }

    pub fn spec(&self) -> &SynthSpec {
        &self.spec
    }

    pub fn n_frames(&self) -> u32 {
        self.spec.n_frames()
    }

    /// Pixel box of `actor` at `frame`, using the seam-wrap convention.
    pub fn actor_box(&self, actor: &Actor, frame: u32) -> TrackBox {
        let (w, h) = (self.spec.width, self.spec.height());
        let (fw, fh) = (w as f64, h as f64);
        let (cx, cy) = sph_to_pix(actor.center_at(frame as f64 / self.spec.fps), w, h);
        let bw = (actor.size_deg[0] / 360.0 * fw).min(fw);
        let bh = (actor.size_deg[1] / 180.0 * fh).min(fh);
        let mut x = (cx - bw / 2.0).rem_euclid(fw);
        if x >= fw {
            x -= fw;
        }
        let y = (cy - bh / 2.0).clamp(0.0, fh - bh);
        TrackBox { frame, x: x.max(0.0), y, w: bw, h: bh }
    }

    /// Exact ground-truth tracks; actor `i` gets id `i + 1`.
    pub fn tracks(&self) -> TrackSet {
        let n = self.n_frames();
        let tracks = self
            .spec
            .actors
            .iter()
            .enumerate()
            .map(|(i, a)| ObjectTrack {
                id: i as u32 + 1,
                class_label: a.class_label.clone(),
                boxes: (0..n).map(|f| self.actor_box(a, f)).collect(),
            })
            .collect();
        TrackSet {
            fps: self.spec.fps,
            width: self.spec.width,
            height: self.spec.height(),
            n_frames: n,
            tracks,
        }
    }

    pub fn render_frame(&self, frame: u32) -> EquirectFrame {
        let mut img = self.background.clone();
        let (w, h) = (self.spec.width as i64, self.spec.height() as i64);
        for actor in &self.spec.actors {
            let b = self.actor_box(actor, frame);
            // pixels whose centres fall inside [x, x + w) x [y, y + h)
            let c0 = (b.x - 0.5).ceil() as i64;
            let c1 = (b.x + b.w - 0.5).ceil() as i64;
            let r0 = ((b.y - 0.5).ceil() as i64).max(0);
            let r1 = ((b.y + b.h - 0.5).ceil() as i64).min(h);
            for r in r0..r1 {
                for c in c0..c1.min(c0 + w) {
                    img.put_pixel(c.rem_euclid(w) as u32, r as u32, Rgb(actor.color));
                }
            }
        }
        EquirectFrame::new(img).expect("2:1 by construction")
    }
}

impl FrameSource for SynthScene {
    fn len(&self) -> usize {
        self.n_frames() as usize
    }

    fn frame(&self, index: usize) -> Result<EquirectFrame, FrameError> {
        if index >= self.len() {
            return Err(FrameError::Layout(format!("frame {index} out of range")));
        }
        Ok(self.render_frame(index as u32))
    }
}

fn gradient_background(width: u32, height: u32) -> RgbImage {
    RgbImage::from_fn(width, height, |x, y| {
        let yaw = 2.0 * PI * (x as f64 + 0.5) / width as f64 - PI;
        let v = (y as f64 + 0.5) / height as f64;
        Rgb([
            (40.0 + 100.0 * v).round() as u8,
            (60.0 + 60.0 * (0.5 + 0.5 * yaw.cos())).round() as u8,
            (120.0 + 40.0 * (0.5 + 0.5 * yaw.sin())).round() as u8,
        ])
    })
}

const CLASSES: [&str; 6] = ["human", "human", "dog", "cat", "bicycle", "car"];

/// Reproducible random scene of `n_actors` moving actors.
pub fn random_scene(seed: u64, n_actors: usize, duration_s: f64, fps: f64, width: u32) -> SynthSpec {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let actors = (0..n_actors)
        .map(|_| {
            let speed = rng.gen_range(5.0..40.0) * if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
            Actor {
                class_label: CLASSES[rng.gen_range(0..CLASSES.len())].to_string(),
                yaw_deg: rng.gen_range(-180.0..180.0),
                pitch_deg: rng.gen_range(-20.0..20.0),
                velocity_deg_s: [speed, rng.gen_range(-5.0..5.0)],
                size_deg: [rng.gen_range(8.0..20.0), rng.gen_range(10.0..30.0)],
                color: [rng.gen_range(200..=255), rng.gen_range(0..=60), rng.gen_range(0..=255)],
            }
        })
        .collect();
    SynthSpec { duration_s, fps, width, actors }
}
