//! Exhaustive reference for two-window planning.
//!
//! Every hypothesis of window 1 is paired with every hypothesis that window 2
//! would offer after it. Each pair is ranked with an independently written
//! scoring rule (own saliency formula, own projection, own jump-cut test) and
//! the selection preferences; the lexicographically best pair must equal the
//! planner's greedy choice.

use std::cmp::Ordering;

use autocine::planner::{generate_hypotheses, PlanInputs, PlannerConfig, Shot, ShotHypothesis, ShotType, Window};
use autocine::tracks::TrackSet;
use autocine::{compute_shot_stats, ClassPriors, PreferenceMap, SaliencyWeights, ShotObjectStats};

use super::stats_oracle::center;
use super::{dist, in_view};

pub struct OracleInputs<'a> {
    pub cfg: &'a PlannerConfig,
    pub weights: &'a SaliencyWeights,
    pub priors: &'a ClassPriors,
    pub prefs: Option<&'a PreferenceMap>,
}

fn oracle_saliency(s: &ShotObjectStats, class: &str, t: ShotType, inp: &OracleInputs<'_>) -> f64 {
    let w = inp.weights.for_type(t);
    let prior = inp.priors.priors.get(class).copied().unwrap_or(inp.priors.default_prior);
    let size = if s.avg_size >= inp.weights.size_ref { 1.0 } else { s.avg_size / inp.weights.size_ref };
    let motion = if s.motion_mag >= inp.weights.motion_ref { 1.0 } else { s.motion_mag / inp.weights.motion_ref };
    let mut v = (prior * w.class + size * w.size + motion * w.motion + s.nbhd_score * w.nbhd
        + (1.0 - s.visited_score) * w.novel)
        * s.presence;
    if t == ShotType::Recommender {
        let Some(p) = inp.prefs else { return 0.0 };
        let pref = p
            .by_track
            .get(&s.track_id)
            .or_else(|| p.by_class.get(class))
            .copied()
            .unwrap_or(0.5);
        v *= 0.5 + 0.5 * pref;
    }
    v.clamp(0.0, 1.0)
}

fn is_jump(h: &ShotHypothesis, prev: Option<&Shot>, cfg: &PlannerConfig) -> bool {
    let Some(prev) = prev else { return false };
    let a = h.keyframes[0];
    let b = *prev.chosen.keyframes.last().unwrap();
    dist(a, b).to_degrees() < cfg.jump_cut_min_angle_deg
        && (h.hfov.to_degrees() - prev.chosen.hfov.to_degrees()).abs() < cfg.jump_cut_fov_delta_deg
}

/// Score and jump-cut flag by direct evaluation.
pub fn oracle_score(
    h: &ShotHypothesis,
    stats: &[ShotObjectStats],
    ts: &TrackSet,
    start: u32,
    prev: Option<&Shot>,
    inp: &OracleInputs<'_>,
) -> (f64, bool) {
    let mut sum = 0.0;
    for (i, cam) in h.keyframes.iter().enumerate() {
        let f = start + i as u32;
        for s in stats {
            let t = ts.tracks.iter().find(|t| t.id == s.track_id).unwrap();
            let Some(b) = t.boxes.iter().find(|b| b.frame == f) else { continue };
            let (lon, lat) = center(b, ts.width, ts.height);
            if in_view(*cam, h.hfov, inp.cfg.aspect, lon, lat) {
                sum += oracle_saliency(s, &t.class_label, h.shot_type, inp);
            }
        }
    }
    let jump = is_jump(h, prev, inp.cfg);
    let mut score = sum / h.keyframes.len() as f64;
    if jump {
        score -= inp.cfg.jump_cut_penalty;
    }
    (score.max(0.0), jump)
}

#[derive(Clone)]
struct Ranked {
    h: ShotHypothesis,
    score: f64,
    jump: bool,
}

/// Preference tier: 0 best. Limiter compliance dominates jump-cut freedom.
fn tier(r: &Ranked, counts: &[usize; 5], last: Option<(ShotType, usize)>, cfg: &PlannerConfig) -> u8 {
    let total: usize = counts.iter().sum();
    let cap = (cfg.type_quota * (total + 1) as f64).ceil() as usize;
    let mut ok = counts[r.h.shot_type as usize] < cap;
    if let Some((t, run)) = last {
        if t == r.h.shot_type && run >= cfg.max_consecutive_same_type {
            ok = false;
        }
    }
    match (ok, r.jump) {
        (true, false) => 0,
        (true, true) => 1,
        (false, false) => 2,
        (false, true) => 3,
    }
}

fn prefer(a: &Ranked, ta: u8, b: &Ranked, tb: u8) -> Ordering {
    ta.cmp(&tb)
        .then(b.score.total_cmp(&a.score))
        .then((a.h.shot_type as usize).cmp(&(b.h.shot_type as usize)))
        .then(a.h.gen_index.cmp(&b.h.gen_index))
}

fn pool(
    ts: &TrackSet,
    w: Window,
    history: &[Shot],
    inp: &OracleInputs<'_>,
) -> Vec<Ranked> {
    let stats = compute_shot_stats(ts, w.start, w.end, history, &inp.cfg.stats_params()).unwrap();
    let pi = PlanInputs { weights: inp.weights, priors: inp.priors, prefs: inp.prefs };
    let mut out = Vec::new();
    for t in ShotType::ALL {
        for h in generate_hypotheses(t, &stats, ts, w, inp.cfg, &pi) {
            let (score, jump) = oracle_score(&h, &stats, ts, w.start, history.last(), inp);
            out.push(Ranked { h, score, jump });
        }
    }
    out
}

/// Chosen hypotheses for the (at most two) windows of `ts`.
pub fn oracle_plan(ts: &TrackSet, inp: &OracleInputs<'_>) -> Vec<(ShotType, Vec<autocine::SphericalPoint>, f64)> {
    let len = ((inp.cfg.shot_len_s * ts.fps).round() as u32).max(1);
    let w1 = Window { start: 0, end: len.min(ts.n_frames) };
    let p1 = pool(ts, w1, &[], inp);
    if w1.end == ts.n_frames {
        let best = p1
            .iter()
            .min_by(|a, b| prefer(a, tier(a, &[0; 5], None, inp.cfg), b, tier(b, &[0; 5], None, inp.cfg)))
            .unwrap();
        return vec![(best.h.shot_type, best.h.keyframes.clone(), best.score)];
    }
    assert!(w1.end + len >= ts.n_frames, "oracle handles two windows");
    let w2 = Window { start: w1.end, end: ts.n_frames };

    let mut best: Option<(Ranked, u8, Ranked, u8)> = None;
    for a in &p1 {
        let ta = tier(a, &[0; 5], None, inp.cfg);
        let first = Shot { start_frame: w1.start, end_frame: w1.end, chosen: a.h.clone() };
        let mut counts = [0usize; 5];
        counts[a.h.shot_type as usize] = 1;
        for b in pool(ts, w2, std::slice::from_ref(&first), inp) {
            let tb = tier(&b, &counts, Some((a.h.shot_type, 1)), inp.cfg);
            let better = match &best {
                None => true,
                Some((ba, bta, bb, btb)) => match prefer(a, ta, ba, *bta) {
                    Ordering::Less => true,
                    Ordering::Greater => false,
                    Ordering::Equal => prefer(&b, tb, bb, *btb) == Ordering::Less,
                },
            };
            if better {
                best = Some((a.clone(), ta, b, tb));
            }
        }
    }
    let (a, _, b, _) = best.expect("non-empty pools");
    vec![(a.h.shot_type, a.h.keyframes, a.score), (b.h.shot_type, b.h.keyframes, b.score)]
}
