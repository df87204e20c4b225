//! Editing-rule checks over a finished edit list.

use serde::Serialize;

use super::{is_jump_cut, EditList, FallbackKind, ShotType};
use crate::sphere::angular_distance;

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct AuditReport {
    /// Shots per type, indexed like [`ShotType::ALL`].
    pub histogram: [usize; 5],
    /// Shot indices that cut from a near-identical framing without a
    /// recorded jump-cut fallback.
    pub jump_cut_violations: Vec<usize>,
    /// Shot indices recorded as jump-cut fallbacks.
    pub jump_cut_fallbacks: Vec<usize>,
    pub limiter_fallbacks: Vec<usize>,
    /// Types whose final count exceeds `ceil(quota * shots)`.
    pub quota_violations: Vec<ShotType>,
    /// Longest run of one shot type.
    pub longest_run: usize,
    /// Whether shots tile `[0, n_frames)` without gaps or overlaps.
    pub tiled: bool,
    /// Fastest in-shot camera motion, degrees per second (when fps is known).
    pub max_speed_deg_s: Option<f64>,
}

impl AuditReport {
    /// No editing rule was broken or relaxed.
    pub fn is_clean(&self, max_consecutive: usize, max_speed_deg_s: f64) -> bool {
        self.jump_cut_violations.is_empty()
            && self.jump_cut_fallbacks.is_empty()
            && self.limiter_fallbacks.is_empty()
            && self.quota_violations.is_empty()
            && self.longest_run <= max_consecutive
            && self.tiled
            && self.max_speed_deg_s.is_none_or(|s| s <= max_speed_deg_s + 1e-3)
    }
}

pub fn audit(edit: &EditList) -> AuditReport {
    let cfg = &edit.config.planner;
    let mut report = AuditReport { tiled: true, ..Default::default() };
    for ev in &edit.provenance.fallbacks {
        match ev.kind {
            FallbackKind::JumpCut => report.jump_cut_fallbacks.push(ev.shot),
            FallbackKind::Limiter => report.limiter_fallbacks.push(ev.shot),
        }
    }

    let mut next = 0;
    let mut run = 0;
    let mut max_step: f64 = 0.0;
    for (i, shot) in edit.shots.iter().enumerate() {
        report.histogram[shot.chosen.shot_type.index()] += 1;
        if shot.start_frame != next
            || shot.end_frame <= shot.start_frame
            || shot.chosen.keyframes.len() != shot.len() as usize
        {
            report.tiled = false;
        }
        next = shot.end_frame;

        if i > 0 {
            let prev = &edit.shots[i - 1];
            run = if prev.chosen.shot_type == shot.chosen.shot_type { run + 1 } else { 1 };
            if is_jump_cut(&shot.chosen, prev, cfg) && !report.jump_cut_fallbacks.contains(&i) {
                report.jump_cut_violations.push(i);
            }
        } else {
            run = 1;
        }
        report.longest_run = report.longest_run.max(run);

        for pair in shot.chosen.keyframes.windows(2) {
            max_step = max_step.max(angular_distance(pair[0], pair[1]));
        }
    }

    let total = edit.shots.len();
    for t in ShotType::ALL {
        let cap = (cfg.type_quota * total as f64).ceil() as usize;
        if report.histogram[t.index()] > cap {
            report.quota_violations.push(t);
        }
    }
    report.max_speed_deg_s = edit.provenance.fps.map(|fps| max_step.to_degrees() * fps);
    report
}
