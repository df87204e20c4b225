//! Hypothesis scoring and the per-shot selection rule.

use std::cmp::Ordering;

use super::hypotheses::object_saliency;
use super::{FallbackKind, PlanInputs, PlannerConfig, Shot, ShotHypothesis, ShotType, Window};
use crate::sphere::{angular_distance, gnomonic_project, Viewport};
use crate::tracks::{box_center, ShotObjectStats, TrackSet};

/// Whether cutting from `prev` to `h` joins two near-identical framings.
pub fn is_jump_cut(h: &ShotHypothesis, prev: &Shot, cfg: &PlannerConfig) -> bool {
    let (Some(first), Some(last)) = (h.first_center(), prev.chosen.last_center()) else {
        return false;
    };
    angular_distance(first, last) < cfg.jump_cut_min_angle_deg.to_radians()
        && (h.hfov - prev.chosen.hfov).abs() < cfg.jump_cut_fov_delta_deg.to_radians()
}

/// Mean per-frame saliency mass of on-screen objects, less the jump-cut
/// penalty. Returns the score and whether the penalty applied.
pub fn score_hypothesis(
    h: &ShotHypothesis,
    stats: &[ShotObjectStats],
    ts: &TrackSet,
    window: Window,
    prev: Option<&Shot>,
    cfg: &PlannerConfig,
    inputs: &PlanInputs<'_>,
) -> (f64, bool) {
    let objects: Vec<_> = stats
        .iter()
        .filter_map(|s| {
            let track = ts.track(s.track_id)?;
            Some((track, object_saliency(s, ts, h.shot_type, inputs)))
        })
        .filter(|(_, sal)| *sal > 0.0)
        .collect();

    let mut total = 0.0;
    for (i, center) in h.keyframes.iter().enumerate() {
        let frame = window.start + i as u32;
        let Ok(view) = Viewport::new(*center, h.hfov, cfg.aspect) else {
            continue;
        };
        for (track, sal) in &objects {
            if let Some(b) = track.box_at(frame) {
                if gnomonic_project(&view, box_center(b, ts.width, ts.height)).is_inside() {
                    total += sal;
                }
            }
        }
    }
    let base = if h.keyframes.is_empty() { 0.0 } else { total / h.keyframes.len() as f64 };
    let jump = prev.is_some_and(|p| is_jump_cut(h, p, cfg));
    let score = if jump { base - cfg.jump_cut_penalty } else { base };
    (score.max(0.0), jump)
}

/// Shot-type usage so far, for the occurrence limiter.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct SelectionState {
    pub counts: [usize; 5],
    /// Type of the most recent shot and how many shots in a row used it.
    pub run: Option<(ShotType, usize)>,
}

impl SelectionState {
    pub fn shots_so_far(&self) -> usize {
        self.counts.iter().sum()
    }

    /// Whether one more shot of type `t` keeps within quota and run length.
    pub fn allows(&self, t: ShotType, cfg: &PlannerConfig) -> bool {
        let cap = (cfg.type_quota * (self.shots_so_far() + 1) as f64).ceil() as usize;
        if self.counts[t.index()] + 1 > cap {
            return false;
        }
        !matches!(self.run, Some((rt, len)) if rt == t && len + 1 > cfg.max_consecutive_same_type)
    }

    pub fn record(&mut self, t: ShotType) {
        self.counts[t.index()] += 1;
        self.run = match self.run {
            Some((rt, len)) if rt == t => Some((t, len + 1)),
            _ => Some((t, 1)),
        };
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Selection {
    /// Index into the pooled hypotheses.
    pub index: usize,
    pub fallbacks: Vec<FallbackKind>,
}

/// Orders by score, then shot-type priority, then generation index.
fn better(a: &ShotHypothesis, b: &ShotHypothesis) -> Ordering {
    a.score
        .total_cmp(&b.score)
        .then(b.shot_type.cmp(&a.shot_type))
        .then(b.gen_index.cmp(&a.gen_index))
}

fn argmax<'a>(pool: &'a [ShotHypothesis], keep: impl Fn(&ShotHypothesis) -> bool) -> Option<usize> {
    pool.iter()
        .enumerate()
        .filter(|(_, h)| keep(h))
        .fold(None::<(usize, &'a ShotHypothesis)>, |best, (i, h)| match best {
            Some((_, b)) if better(h, b) != Ordering::Greater => best,
            _ => Some((i, h)),
        })
        .map(|(i, _)| i)
}

/// Picks the best hypothesis that respects the occurrence limiter and avoids
/// jump cuts, relaxing the jump-cut rule first and the limiter second when
/// nothing survives. Returns `None` only for an empty pool.
pub fn select_shot(
    pool: &[ShotHypothesis],
    state: &SelectionState,
    cfg: &PlannerConfig,
) -> Option<Selection> {
    let allowed = |h: &ShotHypothesis| state.allows(h.shot_type, cfg);
    if let Some(index) = argmax(pool, |h| allowed(h) && !h.jump_cut) {
        return Some(Selection { index, fallbacks: Vec::new() });
    }
    if let Some(index) = argmax(pool, allowed) {
        return Some(Selection { index, fallbacks: vec![FallbackKind::JumpCut] });
    }
    if let Some(index) = argmax(pool, |h| !h.jump_cut) {
        return Some(Selection { index, fallbacks: vec![FallbackKind::Limiter] });
    }
    argmax(pool, |_| true)
        .map(|index| Selection { index, fallbacks: vec![FallbackKind::Limiter, FallbackKind::JumpCut] })
}
