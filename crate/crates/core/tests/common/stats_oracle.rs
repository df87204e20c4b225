//! Direct-summation reference for per-shot object statistics.

use std::f64::consts::{FRAC_PI_2, PI};

use autocine::planner::Shot;
use autocine::tracks::{ObjectTrack, TrackBox, TrackSet};

use super::{in_view, vincenty};

#[derive(Debug, Clone)]
pub struct OracleStats {
    pub track_id: u32,
    pub avg_size: f64,
    pub motion_mag: f64,
    pub nbhd_score: f64,
    pub visited_score: f64,
    pub presence: f64,
    pub mean_lon: f64,
    pub mean_lat: f64,
}

pub const D_REF: f64 = 30.0 * PI / 180.0;
pub const HISTORY_K: usize = 3;
pub const MAX_GAP: u32 = 5;
pub const ASPECT: f64 = 16.0 / 9.0;

fn find(track: &ObjectTrack, frame: u32) -> Option<&TrackBox> {
    track.boxes.iter().find(|b| b.frame == frame)
}

/// (lon, lat) of a box centre.
pub fn center(b: &TrackBox, width: u32, height: u32) -> (f64, f64) {
    let (w, h) = (width as f64, height as f64);
    let mut cx = b.x + b.w / 2.0;
    if cx >= w {
        cx -= w;
    }
    let cy = b.y + b.h / 2.0;
    (cx / w * 2.0 * PI - PI, FRAC_PI_2 - cy / h * PI)
}

pub fn size(b: &TrackBox, width: u32, height: u32) -> f64 {
    let (w, h) = (width as f64, height as f64);
    let dlon = b.w / w * 2.0 * PI;
    let top = FRAC_PI_2 - b.y / h * PI;
    let bottom = FRAC_PI_2 - (b.y + b.h) / h * PI;
    dlon * (top.sin() - bottom.sin()) / (4.0 * PI)
}

pub fn stats(ts: &TrackSet, start: u32, end: u32, history: &[Shot]) -> Vec<OracleStats> {
    let (w, h) = (ts.width, ts.height);
    let mut out = Vec::new();
    for t in &ts.tracks {
        let present: Vec<(u32, &TrackBox)> =
            (start..end).filter_map(|f| find(t, f).map(|b| (f, b))).collect();
        if present.is_empty() {
            continue;
        }
        let n = present.len() as f64;

        let mut size_sum = 0.0;
        for (_, b) in &present {
            size_sum += size(b, w, h);
        }

        let mut speeds = Vec::new();
        for k in 1..present.len() {
            let (f0, b0) = present[k - 1];
            let (f1, b1) = present[k];
            if f1 - f0 > MAX_GAP {
                continue;
            }
            let (l0, p0) = center(b0, w, h);
            let (l1, p1) = center(b1, w, h);
            let deg = vincenty(l0, p0, l1, p1) * 180.0 / PI;
            speeds.push(deg * ts.fps / (f1 - f0) as f64);
        }
        let motion = if speeds.is_empty() { 0.0 } else { speeds.iter().sum::<f64>() / speeds.len() as f64 };

        let mut nb = 0.0;
        for (f, b) in &present {
            let (l, p) = center(b, w, h);
            let mut best = f64::INFINITY;
            for o in &ts.tracks {
                if o.id == t.id {
                    continue;
                }
                if let Some(ob) = find(o, *f) {
                    let (ol, op) = center(ob, w, h);
                    best = best.min(vincenty(l, p, ol, op));
                }
            }
            nb += if best.is_infinite() { 1.0 } else { (best / D_REF).min(1.0) };
        }

        let recent = if history.len() > HISTORY_K { &history[history.len() - HISTORY_K..] } else { history };
        let mut samples = 0.0;
        let mut seen = 0.0;
        for s in recent {
            for f in s.start_frame..s.end_frame {
                samples += 1.0;
                let cam = s.chosen.keyframes[(f - s.start_frame) as usize];
                if let Some(b) = find(t, f) {
                    let (l, p) = center(b, w, h);
                    if in_view(cam, s.chosen.hfov, ASPECT, l, p) {
                        seen += 1.0;
                    }
                }
            }
        }
        let visited = if samples == 0.0 { 0.0 } else { seen / samples };

        let (mut sx, mut sy, mut sz) = (0.0, 0.0, 0.0);
        for (_, b) in &present {
            let (l, p) = center(b, w, h);
            sx += p.cos() * l.sin();
            sy += p.sin();
            sz += p.cos() * l.cos();
        }
        let mean_lon = sx.atan2(sz);
        let mean_lat = sy.atan2((sx * sx + sz * sz).sqrt());

        out.push(OracleStats {
            track_id: t.id,
            avg_size: size_sum / n,
            motion_mag: motion,
            nbhd_score: nb / n,
            visited_score: visited,
            presence: n / (end - start) as f64,
            mean_lon,
            mean_lat,
        });
    }
    out
}

/// Largest discrepancy between the library and the oracle over all fields;
/// mean centres compared by angular distance.
pub fn max_discrepancy(lib: &[autocine::ShotObjectStats], oracle: &[OracleStats]) -> Result<f64, String> {
    if lib.len() != oracle.len() {
        return Err(format!("{} library stats vs {} oracle stats", lib.len(), oracle.len()));
    }
    let mut worst: f64 = 0.0;
    for (a, b) in lib.iter().zip(oracle) {
        if a.track_id != b.track_id {
            return Err(format!("track order differs: {} vs {}", a.track_id, b.track_id));
        }
        for d in [
            a.avg_size - b.avg_size,
            a.motion_mag - b.motion_mag,
            a.nbhd_score - b.nbhd_score,
            a.visited_score - b.visited_score,
            a.presence - b.presence,
            vincenty(a.mean_center.yaw(), a.mean_center.pitch(), b.mean_lon, b.mean_lat),
        ] {
            worst = worst.max(d.abs());
        }
    }
    Ok(worst)
}
