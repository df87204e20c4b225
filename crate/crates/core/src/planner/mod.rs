//! Shot-by-shot automatic editing.
//!
//! For every shot window the planner measures the objects on screen,
//! generates a handful of candidate camera paths per shot type, scores them
//! by the saliency they put in frame (with a penalty for jump cuts), and keeps
//! the best one that respects the shot-type occurrence limiter. Choices feed
//! back into later windows through the visited score.

pub mod audit;
mod config;
mod edl;
pub mod hypotheses;
pub mod select;
mod types;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use audit::{audit, AuditReport};
pub use config::{FovTable, PlannerConfig};
pub use edl::{EdlError, EdlPoint, EdlShot};
pub use hypotheses::{generate_hypotheses, object_path, pan_path};
pub use select::{is_jump_cut, score_hypothesis, select_shot, Selection, SelectionState};
pub use types::{FallbackEvent, FallbackKind, Provenance, Shot, ShotHypothesis, ShotType};

use crate::saliency::{ClassPriors, PreferenceMap, SaliencyWeights};
use crate::tracks::{compute_shot_stats, StatsError, TrackSet};

#[derive(Debug, Error)]
pub enum PlanError {
    #[error("video has no frames")]
    EmptyVideo,
    #[error("invalid planner configuration: {0}")]
    Config(String),
    #[error(transparent)]
    Stats(#[from] StatsError),
    #[error("no shot hypothesis for window [{start}, {end})")]
    NoHypothesis { start: u32, end: u32 },
}

/// Half-open frame range of one shot.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Window {
    pub start: u32,
    pub end: u32,
}

impl Window {
    pub fn len(&self) -> u32 {
        self.end - self.start
    }

    pub fn is_empty(&self) -> bool {
        self.start >= self.end
    }
}

/// Splits `[0, n_frames)` into windows of `shot_frames`, the last one
/// taking the remainder.
pub fn shot_windows(n_frames: u32, shot_frames: u32) -> Vec<Window> {
    let step = shot_frames.max(1);
    (0..n_frames)
        .step_by(step as usize)
        .map(|start| Window { start, end: (start + step).min(n_frames) })
        .collect()
}

/// Saliency model shared by generation and scoring.
#[derive(Debug, Clone, Copy)]
pub struct PlanInputs<'a> {
    pub weights: &'a SaliencyWeights,
    pub priors: &'a ClassPriors,
    pub prefs: Option<&'a PreferenceMap>,
}

/// Settings an edit list was produced with.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct ConfigSnapshot {
    pub planner: PlannerConfig,
    pub saliency: SaliencyWeights,
    pub priors: ClassPriors,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EditList {
    pub shots: Vec<Shot>,
    pub config: ConfigSnapshot,
    pub provenance: Provenance,
}

impl EditList {
    /// Total frames covered by the shots.
    pub fn n_frames(&self) -> u32 {
        self.shots.last().map_or(0, |s| s.end_frame)
    }

    /// The shot containing `frame`.
    pub fn shot_at(&self, frame: u32) -> Option<&Shot> {
        let i = self.shots.partition_point(|s| s.end_frame <= frame);
        self.shots.get(i).filter(|s| s.start_frame <= frame)
    }
}

/// Everything produced for one window, kept for inspection and testing.
#[derive(Debug, Clone)]
pub struct WindowPlan {
    pub window: Window,
    pub pool: Vec<ShotHypothesis>,
    pub selection: Selection,
}

/// Generates and scores the pooled hypotheses of all types for one window.
pub fn pooled_hypotheses(
    ts: &TrackSet,
    window: Window,
    history: &[Shot],
    cfg: &PlannerConfig,
    inputs: &PlanInputs<'_>,
) -> Result<Vec<ShotHypothesis>, PlanError> {
    let stats = compute_shot_stats(ts, window.start, window.end, history, &cfg.stats_params())?;
    let prev = history.last();
    let mut pool = Vec::new();
    for t in ShotType::ALL {
        for mut h in generate_hypotheses(t, &stats, ts, window, cfg, inputs) {
            let (score, jump) = score_hypothesis(&h, &stats, ts, window, prev, cfg, inputs);
            h.score = score;
            h.jump_cut = jump;
            pool.push(h);
        }
    }
    Ok(pool)
}

/// Plans the whole video, also returning the per-window pools.
pub fn plan_edit_detailed(
    ts: &TrackSet,
    cfg: &PlannerConfig,
    weights: &SaliencyWeights,
    priors: &ClassPriors,
    prefs: Option<&PreferenceMap>,
) -> Result<(EditList, Vec<WindowPlan>), PlanError> {
    if ts.n_frames == 0 {
        return Err(PlanError::EmptyVideo);
    }
    cfg.validate().map_err(PlanError::Config)?;
    weights.validate().map_err(|e| PlanError::Config(e.to_string()))?;
    priors.validate().map_err(|e| PlanError::Config(e.to_string()))?;

    let inputs = PlanInputs { weights, priors, prefs };
    let mut shots: Vec<Shot> = Vec::new();
    let mut state = SelectionState::default();
    let mut provenance = Provenance { fps: Some(ts.fps), ..Default::default() };
    let mut details = Vec::new();

    for window in shot_windows(ts.n_frames, cfg.shot_frames(ts.fps)) {
        let pool = pooled_hypotheses(ts, window, &shots, cfg, &inputs)?;
        let selection = select_shot(&pool, &state, cfg)
            .ok_or(PlanError::NoHypothesis { start: window.start, end: window.end })?;
        let chosen = pool[selection.index].clone();
        for kind in &selection.fallbacks {
            log::warn!("shot {}: {:?} fallback", shots.len(), kind);
            provenance.fallbacks.push(FallbackEvent { shot: shots.len(), kind: *kind });
        }
        log::debug!(
            "window [{}, {}): {} hypotheses, chose {} ({:.3})",
            window.start,
            window.end,
            pool.len(),
            chosen.shot_type,
            chosen.score
        );
        state.record(chosen.shot_type);
        shots.push(Shot { start_frame: window.start, end_frame: window.end, chosen });
        details.push(WindowPlan { window, pool, selection });
    }

    let config = ConfigSnapshot {
        planner: cfg.clone(),
        saliency: weights.clone(),
        priors: priors.clone(),
    };
    Ok((EditList { shots, config, provenance }, details))
}

/// Plans the shot sequence for a whole video.
pub fn plan_edit(
    ts: &TrackSet,
    cfg: &PlannerConfig,
    weights: &SaliencyWeights,
    priors: &ClassPriors,
    prefs: Option<&PreferenceMap>,
) -> Result<EditList, PlanError> {
    plan_edit_detailed(ts, cfg, weights, priors, prefs).map(|(edit, _)| edit)
}
