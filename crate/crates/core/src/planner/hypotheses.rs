//! Candidate camera paths for one shot window.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};

use super::{PlanInputs, PlannerConfig, ShotHypothesis, ShotType, Window};
use crate::saliency::saliency;
use crate::sphere::{
    angular_distance, gnomonic_project, slerp, spherical_centroid, step_toward, SphericalPoint,
    Viewport,
};
use crate::tracks::{box_center, ObjectTrack, ShotObjectStats, TrackSet};

/// Minimum presence for an object to be followed by a tracking shot.
pub const TRACKING_MIN_PRESENCE: f64 = 0.8;
/// Minimum presence for an object to anchor a medium shot.
pub const MEDIUM_MIN_PRESENCE: f64 = 0.5;
/// Static candidates closer than this (radians) are treated as duplicates.
const DUPLICATE_EPS: f64 = 1.0 * std::f64::consts::PI / 180.0;

/// Saliency of `stats` for `shot_type`; zero when it cannot be evaluated
/// (recommender without preferences).
pub fn object_saliency(
    stats: &ShotObjectStats,
    ts: &TrackSet,
    shot_type: ShotType,
    inputs: &PlanInputs<'_>,
) -> f64 {
    let class = ts.class_of(stats.track_id).unwrap_or("");
    saliency(stats, class, shot_type, inputs.weights, inputs.priors, inputs.prefs).unwrap_or(0.0)
}

/// Generates up to `cfg.hyps()` unscored hypotheses of one type.
pub fn generate_hypotheses(
    shot_type: ShotType,
    stats: &[ShotObjectStats],
    ts: &TrackSet,
    window: Window,
    cfg: &PlannerConfig,
    inputs: &PlanInputs<'_>,
) -> Vec<ShotHypothesis> {
    let n = cfg.hyps();
    let hfov = cfg.fov_deg.radians(shot_type);
    let frames = window.len() as usize;
    let mut out: Vec<ShotHypothesis> = match shot_type {
        ShotType::Tracking => tracking_targets(stats, ts, shot_type, inputs)
            .into_iter()
            .take(n)
            .map(|(id, _)| tracking_hypothesis(shot_type, id, ts, window, hfov, cfg))
            .collect(),
        ShotType::Static => {
            if stats.is_empty() {
                vec![fixed(shot_type, SphericalPoint::FORWARD, hfov, frames, Vec::new())]
            } else {
                static_candidates(stats, ts, shot_type, hfov, cfg, inputs)
                    .into_iter()
                    .take(n)
                    .map(|c| fixed(shot_type, c.center, hfov, frames, c.focus))
                    .collect()
            }
        }
        ShotType::Medium => {
            let mut ranked: Vec<(&ShotObjectStats, f64)> = stats
                .iter()
                .filter(|s| s.presence >= MEDIUM_MIN_PRESENCE)
                .map(|s| (s, object_saliency(s, ts, shot_type, inputs)))
                .collect();
            ranked.sort_by(|a, b| by_score_then_id(a.1, a.0.track_id, b.1, b.0.track_id));
            ranked
                .into_iter()
                .take(n)
                .map(|(s, _)| fixed(shot_type, s.mean_center, hfov, frames, vec![s.track_id]))
                .collect()
        }
        ShotType::Pan => pan_hypotheses(stats, ts, hfov, window, cfg, inputs, n),
        ShotType::Recommender => {
            if inputs.prefs.is_none() {
                Vec::new()
            } else {
                recommender_hypotheses(stats, ts, hfov, window, cfg, inputs, n)
            }
        }
    };
    for (i, h) in out.iter_mut().enumerate() {
        h.gen_index = i;
    }
    out
}

fn by_score_then_id(sa: f64, ia: u32, sb: f64, ib: u32) -> Ordering {
    sb.total_cmp(&sa).then(ia.cmp(&ib))
}

fn fixed(
    shot_type: ShotType,
    center: SphericalPoint,
    hfov: f64,
    frames: usize,
    focus_ids: Vec<u32>,
) -> ShotHypothesis {
    ShotHypothesis {
        shot_type,
        keyframes: vec![center; frames],
        hfov,
        focus_ids,
        score: 0.0,
        jump_cut: false,
        gen_index: 0,
    }
}

/// Eligible moving objects ranked by saliency for `shot_type`.
fn tracking_targets(
    stats: &[ShotObjectStats],
    ts: &TrackSet,
    shot_type: ShotType,
    inputs: &PlanInputs<'_>,
) -> Vec<(u32, f64)> {
    let mut ranked: Vec<(u32, f64)> = stats
        .iter()
        .filter(|s| s.presence >= TRACKING_MIN_PRESENCE && s.motion_mag > 0.0)
        .map(|s| (s.track_id, object_saliency(s, ts, shot_type, inputs)))
        .collect();
    ranked.sort_by(|a, b| by_score_then_id(a.1, a.0, b.1, b.0));
    ranked
}

fn tracking_hypothesis(
    shot_type: ShotType,
    id: u32,
    ts: &TrackSet,
    window: Window,
    hfov: f64,
    cfg: &PlannerConfig,
) -> ShotHypothesis {
    let track = ts.track(id).expect("stats refer to known tracks");
    let raw = object_path(track, ts, window);
    let alpha = cfg.alpha_at(ts.fps);
    let max_step = max_step(cfg.max_cam_speed_deg_s, ts.fps);
    let mut keyframes = Vec::with_capacity(raw.len());
    let mut cur = raw[0];
    keyframes.push(cur);
    for &target in &raw[1..] {
        let smoothed = slerp(cur, target, alpha)
            .unwrap_or_else(|_| step_toward(cur, target, alpha * std::f64::consts::PI));
        cur = step_toward(cur, smoothed, max_step);
        keyframes.push(cur);
    }
    ShotHypothesis {
        shot_type,
        keyframes,
        hfov,
        focus_ids: vec![id],
        score: 0.0,
        jump_cut: false,
        gen_index: 0,
    }
}

/// Per-frame angular step allowed by a speed limit, with a little headroom
/// for rounding.
pub(crate) fn max_step(speed_deg_s: f64, fps: f64) -> f64 {
    speed_deg_s.to_radians() / fps * (1.0 - 1e-9)
}

/// Object centre for every frame of the window: observed where present,
/// slerped across gaps, held before the first and after the last sighting.
pub fn object_path(track: &ObjectTrack, ts: &TrackSet, window: Window) -> Vec<SphericalPoint> {
    let boxes = track.boxes_in(window.start, window.end);
    assert!(!boxes.is_empty(), "object_path needs at least one box in the window");
    let obs: Vec<(u32, SphericalPoint)> = boxes
        .iter()
        .map(|b| (b.frame, box_center(b, ts.width, ts.height)))
        .collect();
    let mut path = Vec::with_capacity(window.len() as usize);
    let mut k = 0;
    for f in window.start..window.end {
        while k + 1 < obs.len() && obs[k + 1].0 <= f {
            k += 1;
        }
        let (f0, c0) = obs[k];
        let p = if f <= f0 || k + 1 == obs.len() {
            c0
        } else {
            let (f1, c1) = obs[k + 1];
            let t = (f - f0) as f64 / (f1 - f0) as f64;
            slerp(c0, c1, t).unwrap_or(if t < 0.5 { c0 } else { c1 })
        };
        path.push(p);
    }
    path
}

#[derive(Debug, Clone)]
struct Candidate {
    center: SphericalPoint,
    focus: Vec<u32>,
    proxy: f64,
}

/// Fixed framings of object groups, best first.
///
/// Candidates are single-linkage cluster centroids, the saliency-weighted
/// centroid of the whole scene, then individual objects.
fn static_candidates(
    stats: &[ShotObjectStats],
    ts: &TrackSet,
    shot_type: ShotType,
    hfov: f64,
    cfg: &PlannerConfig,
    inputs: &PlanInputs<'_>,
) -> Vec<Candidate> {
    let sal: Vec<f64> = stats.iter().map(|s| object_saliency(s, ts, shot_type, inputs)).collect();
    let mut centers = Vec::new();

    for members in clusters(stats, cfg.cluster_threshold_deg.to_radians()) {
        let c = spherical_centroid(members.iter().map(|&i| (stats[i].mean_center, 1.0)))
            .unwrap_or_else(|| {
                let best = members
                    .iter()
                    .copied()
                    .max_by(|&a, &b| sal[a].total_cmp(&sal[b]).then(b.cmp(&a)))
                    .expect("clusters are non-empty");
                stats[best].mean_center
            });
        centers.push(c);
    }
    if let Some(c) = spherical_centroid(stats.iter().zip(&sal).map(|(s, w)| (s.mean_center, *w))) {
        centers.push(c);
    }
    let mut order: Vec<usize> = (0..stats.len()).collect();
    order.sort_by(|&a, &b| by_score_then_id(sal[a], stats[a].track_id, sal[b], stats[b].track_id));
    centers.extend(order.iter().map(|&i| stats[i].mean_center));

    let mut out: Vec<Candidate> = Vec::new();
    for c in centers {
        if out.iter().any(|o| angular_distance(o.center, c) < DUPLICATE_EPS) {
            continue;
        }
        let view = Viewport::new(c, hfov, cfg.aspect).expect("validated fov");
        let mut focus = Vec::new();
        let mut proxy = 0.0;
        for (s, w) in stats.iter().zip(&sal) {
            if gnomonic_project(&view, s.mean_center).is_inside() {
                focus.push(s.track_id);
                proxy += w;
            }
        }
        out.push(Candidate { center: c, focus, proxy });
    }
    out.sort_by(|a, b| b.proxy.total_cmp(&a.proxy));
    out
}

/// Single-linkage clusters of mean centres, each listed by ascending index.
fn clusters(stats: &[ShotObjectStats], threshold: f64) -> Vec<Vec<usize>> {
    let n = stats.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn root(parent: &mut [usize], mut i: usize) -> usize {
        while parent[i] != i {
            parent[i] = parent[parent[i]];
            i = parent[i];
        }
        i
    }
    for i in 0..n {
        for j in i + 1..n {
            if angular_distance(stats[i].mean_center, stats[j].mean_center) <= threshold {
                let (ri, rj) = (root(&mut parent, i), root(&mut parent, j));
                if ri != rj {
                    parent[ri.max(rj)] = ri.min(rj);
                }
            }
        }
    }
    let mut groups: Vec<Vec<usize>> = Vec::new();
    let mut slot = vec![usize::MAX; n];
    for i in 0..n {
        let r = root(&mut parent, i);
        if slot[r] == usize::MAX {
            slot[r] = groups.len();
            groups.push(Vec::new());
        }
        groups[slot[r]].push(i);
    }
    groups
}

fn pan_hypotheses(
    stats: &[ShotObjectStats],
    ts: &TrackSet,
    hfov: f64,
    window: Window,
    cfg: &PlannerConfig,
    inputs: &PlanInputs<'_>,
    n: usize,
) -> Vec<ShotHypothesis> {
    if stats.is_empty() {
        return Vec::new();
    }
    let cands = static_candidates(stats, ts, ShotType::Pan, hfov, cfg, inputs);
    let sal: BTreeMap<u32, f64> =
        stats.iter().map(|s| (s.track_id, object_saliency(s, ts, ShotType::Pan, inputs))).collect();
    let (lo, hi) = (cfg.pan_min_sep_deg.to_radians(), cfg.pan_max_sep_deg.to_radians());
    let mut pairs = Vec::new();
    for i in 0..cands.len() {
        for j in 0..cands.len() {
            if i == j {
                continue;
            }
            let sep = angular_distance(cands[i].center, cands[j].center);
            if (lo..=hi).contains(&sep) {
                // objects framed at either end, each counted once
                let seen: BTreeSet<u32> = cands[i].focus.iter().chain(&cands[j].focus).copied().collect();
                pairs.push((i, j, seen.iter().map(|id| sal[id]).sum::<f64>()));
            }
        }
    }
    pairs.sort_by(|a, b| b.2.total_cmp(&a.2));
    let step = max_step(cfg.max_pan_speed_deg_s, ts.fps);
    pairs
        .into_iter()
        .take(n)
        .map(|(i, j, _)| {
            let (a, b) = (cands[i].center, cands[j].center);
            let mut focus = cands[i].focus.clone();
            for id in &cands[j].focus {
                if !focus.contains(id) {
                    focus.push(*id);
                }
            }
            ShotHypothesis {
                shot_type: ShotType::Pan,
                keyframes: pan_path(a, b, window.len() as usize, step),
                hfov,
                focus_ids: focus,
                score: 0.0,
                jump_cut: false,
                gen_index: 0,
            }
        })
        .collect()
}

/// Constant-speed sweep from `a` toward `b` over `frames` frames. The sweep
/// spans the whole shot unless that would exceed `max_step` per frame, in
/// which case it moves at the limit and stops short of `b`.
pub fn pan_path(a: SphericalPoint, b: SphericalPoint, frames: usize, max_step: f64) -> Vec<SphericalPoint> {
    let theta = angular_distance(a, b);
    if frames <= 1 || theta == 0.0 {
        return vec![a; frames];
    }
    let per_frame = (theta / (frames - 1) as f64).min(max_step);
    (0..frames)
        .map(|i| {
            let t = (i as f64 * per_frame / theta).min(1.0);
            slerp(a, b, t).expect("pan endpoints are at most pan_max_sep apart")
        })
        .collect()
}

fn recommender_hypotheses(
    stats: &[ShotObjectStats],
    ts: &TrackSet,
    hfov: f64,
    window: Window,
    cfg: &PlannerConfig,
    inputs: &PlanInputs<'_>,
    n: usize,
) -> Vec<ShotHypothesis> {
    let t = ShotType::Recommender;
    let frames = window.len() as usize;
    let mut ranked: Vec<(f64, ShotHypothesis)> = tracking_targets(stats, ts, t, inputs)
        .into_iter()
        .map(|(id, s)| (s, tracking_hypothesis(t, id, ts, window, hfov, cfg)))
        .collect();
    if !stats.is_empty() {
        ranked.extend(
            static_candidates(stats, ts, t, hfov, cfg, inputs)
                .into_iter()
                .map(|c| (c.proxy, fixed(t, c.center, hfov, frames, c.focus))),
        );
    }
    ranked.sort_by(|a, b| b.0.total_cmp(&a.0));
    ranked.into_iter().take(n).map(|(_, h)| h).collect()
}
