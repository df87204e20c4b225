#![allow(dead_code)]

pub mod plan_oracle;
pub mod render_oracle;
pub mod stats_oracle;

use std::f64::consts::PI;

use autocine::planner::{Shot, ShotHypothesis, ShotType};
use autocine::synth::{Actor, SynthSpec};
use autocine::tracks::{ObjectTrack, TrackBox, TrackSet};
use autocine::SphericalPoint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Great-circle distance from latitude/longitude trig (Vincenty form),
/// independent of the library's vector formula.
pub fn vincenty(lon1: f64, lat1: f64, lon2: f64, lat2: f64) -> f64 {
    let dl = lon2 - lon1;
    let (s1, c1) = lat1.sin_cos();
    let (s2, c2) = lat2.sin_cos();
    let a = c2 * dl.sin();
    let b = c1 * s2 - s1 * c2 * dl.cos();
    (a * a + b * b).sqrt().atan2(s1 * s2 + c1 * c2 * dl.cos())
}

pub fn dist(a: SphericalPoint, b: SphericalPoint) -> f64 {
    vincenty(a.yaw(), a.pitch(), b.yaw(), b.pitch())
}

/// Camera-space coordinates of direction (lon, lat) for a level camera
/// looking at (clon, clat): yaw rotation then pitch rotation.
pub fn camera_coords(clon: f64, clat: f64, lon: f64, lat: f64) -> (f64, f64, f64) {
    // world vector, x right, y up, z forward
    let (x, y, z) = (lat.cos() * lon.sin(), lat.sin(), lat.cos() * lon.cos());
    // undo camera yaw about the vertical axis
    let (sy, cy) = clon.sin_cos();
    let (x1, z1) = (x * cy - z * sy, x * sy + z * cy);
    // undo camera pitch about the right axis
    let (sp, cp) = clat.sin_cos();
    let (y2, z2) = (y * cp - z1 * sp, y * sp + z1 * cp);
    (x1, y2, z2)
}

/// Whether (lon, lat) falls inside a level perspective camera.
pub fn in_view(center: SphericalPoint, hfov: f64, aspect: f64, lon: f64, lat: f64) -> bool {
    let (x, y, z) = camera_coords(center.yaw(), center.pitch(), lon, lat);
    if z <= 1e-12 {
        return false;
    }
    let tx = (hfov / 2.0).tan();
    let ty = tx / aspect;
    (x / z).abs() <= tx && (y / z).abs() <= ty
}

pub fn shot(start: u32, keyframes: Vec<SphericalPoint>, hfov: f64, t: ShotType) -> Shot {
    Shot {
        start_frame: start,
        end_frame: start + keyframes.len() as u32,
        chosen: ShotHypothesis {
            shot_type: t,
            keyframes,
            hfov,
            focus_ids: vec![],
            score: 0.0,
            jump_cut: false,
            gen_index: 0,
        },
    }
}

/// Small random track set: up to 3 objects, up to 10 frames, random gaps,
/// boxes clustered in a 90 degree sector so neighbours matter, plus a random
/// shot window and history.
pub struct SmallScene {
    pub ts: TrackSet,
    pub start: u32,
    pub end: u32,
    pub history: Vec<Shot>,
}

pub fn random_small_scene(seed: u64) -> SmallScene {
    let mut r = rng(seed);
    let height = 256u32;
    let width = 2 * height;
    let (fw, fh) = (width as f64, height as f64);
    let n_frames = r.gen_range(2..=10u32);
    let n_obj = r.gen_range(1..=3u32);
    let sector = r.gen_range(0.0..fw);
    let mut tracks = Vec::new();
    for id in 0..n_obj {
        let mut boxes = Vec::new();
        for f in 0..n_frames {
            if !r.gen_bool(0.75) {
                continue;
            }
            let w = r.gen_range(2.0..fw / 6.0);
            let h = r.gen_range(2.0..fh / 4.0);
            let x = (sector + r.gen_range(0.0..fw / 4.0)) % fw;
            let y = r.gen_range(0.0..fh - h);
            boxes.push(TrackBox { frame: f, x, y, w, h });
        }
        let class = ["human", "dog", "car", "kite"][r.gen_range(0..4)].to_string();
        tracks.push(ObjectTrack { id: id * 3 + 1, class_label: class, boxes });
    }
    let ts = TrackSet { fps: r.gen_range(10.0..30.0), width, height, n_frames, tracks };
    ts.validate().expect("generator produces valid track sets");

    let start = r.gen_range(0..n_frames);
    let end = r.gen_range(start + 1..=n_frames);
    let mut history = Vec::new();
    let mut f = 0;
    while f < start {
        let len = r.gen_range(1..=start - f);
        let keys = (0..len)
            .map(|_| SphericalPoint::new(r.gen_range(-PI..PI), r.gen_range(-1.2..1.2)).unwrap())
            .collect();
        history.push(shot(f, keys, r.gen_range(1.0..2.0), ShotType::Static));
        f += len;
    }
    SmallScene { ts, start, end, history }
}

pub fn mover(class: &str, yaw: f64, pitch: f64, vel: f64, color: [u8; 3]) -> Actor {
    Actor {
        class_label: class.into(),
        yaw_deg: yaw,
        pitch_deg: pitch,
        velocity_deg_s: [vel, 0.0],
        size_deg: [12.0, 24.0],
        color,
    }
}

/// Six humans 60 degrees apart drifting together, so every shot type has
/// at least four eligible targets.
pub fn six_movers(duration_s: f64, width: u32) -> SynthSpec {
    let actors = (0..6)
        .map(|i| {
            let c = 40 * i as u8;
            mover("human", -150.0 + 60.0 * i as f64, -10.0 + 4.0 * i as f64, 8.0, [255, c, 255 - c])
        })
        .collect();
    SynthSpec { duration_s, fps: 25.0, width, actors }
}
