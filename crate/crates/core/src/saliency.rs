//! Per-object "interestingness" for each shot type.
//!
//! The score is a convex combination of five normalised factors (class prior,
//! size, motion, isolation, novelty) scaled by the object's presence in the
//! window. Recommender shots additionally weight by viewer preference.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::planner::ShotType;
use crate::tracks::ShotObjectStats;

#[derive(Debug, Error, PartialEq)]
pub enum SaliencyError {
    #[error("recommender saliency needs a preference map")]
    MissingPreferences,
    #[error("{0}")]
    Invalid(String),
}

/// Factor weights for one shot type; must sum to one.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FactorWeights {
    pub class: f64,
    pub size: f64,
    pub motion: f64,
    pub nbhd: f64,
    pub novel: f64,
}

impl FactorWeights {
    pub const fn new(class: f64, size: f64, motion: f64, nbhd: f64, novel: f64) -> Self {
        Self { class, size, motion, nbhd, novel }
    }

    fn as_array(&self) -> [f64; 5] {
        [self.class, self.size, self.motion, self.nbhd, self.novel]
    }

    pub fn validate(&self) -> Result<(), SaliencyError> {
        let w = self.as_array();
        if w.iter().any(|v| !v.is_finite() || *v < 0.0) {
            return Err(SaliencyError::Invalid(format!("negative weight in {w:?}")));
        }
        let sum: f64 = w.iter().sum();
        if (sum - 1.0).abs() > 1e-9 {
            return Err(SaliencyError::Invalid(format!("weights {w:?} sum to {sum}, not 1")));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SaliencyWeights {
    pub tracking: FactorWeights,
    #[serde(rename = "static")]
    pub static_: FactorWeights,
    pub medium: FactorWeights,
    pub pan: FactorWeights,
    pub recommender: FactorWeights,
    /// Solid-angle fraction at which the size factor saturates.
    pub size_ref: f64,
    /// Degrees per second at which the motion factor saturates.
    pub motion_ref: f64,
}

impl Default for SaliencyWeights {
    fn default() -> Self {
        let tracking = FactorWeights::new(0.15, 0.25, 0.30, 0.20, 0.10);
        Self {
            tracking,
            static_: FactorWeights::new(0.25, 0.25, 0.10, 0.05, 0.35),
            medium: FactorWeights::new(0.25, 0.30, 0.15, 0.20, 0.10),
            pan: FactorWeights::new(0.20, 0.20, 0.20, 0.10, 0.30),
            recommender: tracking,
            size_ref: 0.02,
            motion_ref: 20.0,
        }
    }
}

impl SaliencyWeights {
    pub fn for_type(&self, t: ShotType) -> &FactorWeights {
        match t {
            ShotType::Tracking => &self.tracking,
            ShotType::Static => &self.static_,
            ShotType::Medium => &self.medium,
            ShotType::Pan => &self.pan,
            ShotType::Recommender => &self.recommender,
        }
    }

    pub fn validate(&self) -> Result<(), SaliencyError> {
        for t in ShotType::ALL {
            self.for_type(t)
                .validate()
                .map_err(|e| SaliencyError::Invalid(format!("{t}: {e}")))?;
        }
        if !(self.size_ref > 0.0 && self.motion_ref > 0.0) {
            return Err(SaliencyError::Invalid("size_ref and motion_ref must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ClassPriors {
    pub priors: BTreeMap<String, f64>,
    pub default_prior: f64,
}

impl Default for ClassPriors {
    fn default() -> Self {
        let priors = [("human", 1.0), ("dog", 0.8), ("cat", 0.8), ("bicycle", 0.6), ("car", 0.6)]
            .into_iter()
            .map(|(k, v)| (k.to_string(), v))
            .collect();
        Self { priors, default_prior: 0.4 }
    }
}

impl ClassPriors {
    pub fn prior(&self, class_label: &str) -> f64 {
        self.priors.get(class_label).copied().unwrap_or(self.default_prior)
    }

    pub fn validate(&self) -> Result<(), SaliencyError> {
        let bad = self
            .priors
            .iter()
            .map(|(k, v)| (k.as_str(), *v))
            .chain(std::iter::once(("default_prior", self.default_prior)))
            .find(|(_, v)| !(0.0..=1.0).contains(v));
        match bad {
            Some((k, v)) => Err(SaliencyError::Invalid(format!("prior {k} = {v} outside [0, 1]"))),
            None => Ok(()),
        }
    }
}

/// Viewer preference per track or class; a track entry overrides its class.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct PreferenceMap {
    #[serde(default)]
    pub by_track: BTreeMap<u32, f64>,
    #[serde(default)]
    pub by_class: BTreeMap<String, f64>,
}

impl PreferenceMap {
    pub fn from_json(bytes: &[u8]) -> Result<Self, SaliencyError> {
        let map: PreferenceMap =
            serde_json::from_slice(bytes).map_err(|e| SaliencyError::Invalid(e.to_string()))?;
        map.validate()?;
        Ok(map)
    }

    pub fn validate(&self) -> Result<(), SaliencyError> {
        let out = |v: &f64| !(0.0..=1.0).contains(v);
        if let Some((k, v)) = self.by_track.iter().find(|(_, v)| out(v)) {
            return Err(SaliencyError::Invalid(format!("by_track.{k} = {v} outside [0, 1]")));
        }
        if let Some((k, v)) = self.by_class.iter().find(|(_, v)| out(v)) {
            return Err(SaliencyError::Invalid(format!("by_class.{k} = {v} outside [0, 1]")));
        }
        Ok(())
    }

    pub fn preference(&self, track_id: u32, class_label: &str) -> Option<f64> {
        self.by_track
            .get(&track_id)
            .or_else(|| self.by_class.get(class_label))
            .copied()
    }
}

/// Saliency of one object for one shot type, in `[0, 1]`.
pub fn saliency(
    stats: &ShotObjectStats,
    class_label: &str,
    shot_type: ShotType,
    weights: &SaliencyWeights,
    priors: &ClassPriors,
    prefs: Option<&PreferenceMap>,
) -> Result<f64, SaliencyError> {
    let w = weights.for_type(shot_type);
    let base = w.class * priors.prior(class_label)
        + w.size * (stats.avg_size / weights.size_ref).min(1.0)
        + w.motion * (stats.motion_mag / weights.motion_ref).min(1.0)
        + w.nbhd * stats.nbhd_score
        + w.novel * (1.0 - stats.visited_score);
    let mut s = base * stats.presence;
    if shot_type == ShotType::Recommender {
        let prefs = prefs.ok_or(SaliencyError::MissingPreferences)?;
        let pref = prefs.preference(stats.track_id, class_label).unwrap_or(0.5);
        s *= 0.5 + 0.5 * pref;
    }
    Ok(s.clamp(0.0, 1.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sphere::SphericalPoint;

    fn stats(size: f64, motion: f64, nbhd: f64, visited: f64, presence: f64) -> ShotObjectStats {
        ShotObjectStats {
            track_id: 1,
            avg_size: size,
            motion_mag: motion,
            nbhd_score: nbhd,
            visited_score: visited,
            presence,
            mean_center: SphericalPoint::FORWARD,
        }
    }

    #[test]
    fn defaults_are_valid() {
        SaliencyWeights::default().validate().unwrap();
        ClassPriors::default().validate().unwrap();
    }

    #[test]
    fn saturated_stats_give_one() {
        let w = SaliencyWeights::default();
        let p = ClassPriors::default();
        let s = stats(0.5, 100.0, 1.0, 0.0, 1.0);
        for t in [ShotType::Tracking, ShotType::Static, ShotType::Medium, ShotType::Pan] {
            let v = saliency(&s, "human", t, &w, &p, None).unwrap();
            assert!((v - 1.0).abs() < 1e-12, "{t}: {v}");
        }
    }

    #[test]
    fn absent_object_scores_zero() {
        let w = SaliencyWeights::default();
        let s = stats(0.5, 100.0, 1.0, 0.0, 0.0);
        assert_eq!(saliency(&s, "human", ShotType::Static, &w, &ClassPriors::default(), None), Ok(0.0));
    }

    #[test]
    fn tracking_worked_example() {
        let w = SaliencyWeights::default();
        let s = stats(w.size_ref, w.motion_ref / 2.0, 1.0, 0.0, 1.0);
        let v = saliency(&s, "human", ShotType::Tracking, &w, &ClassPriors::default(), None).unwrap();
        assert!((v - 0.85).abs() < 1e-12, "{v}");
    }

    #[test]
    fn recommender_requires_prefs() {
        let w = SaliencyWeights::default();
        let s = stats(0.01, 5.0, 1.0, 0.0, 1.0);
        assert_eq!(
            saliency(&s, "dog", ShotType::Recommender, &w, &ClassPriors::default(), None),
            Err(SaliencyError::MissingPreferences)
        );
        let base = saliency(&s, "dog", ShotType::Tracking, &w, &ClassPriors::default(), None).unwrap();
        let mut prefs = PreferenceMap::default();
        // absent preference defaults to 0.5 -> factor 0.75
        let v = saliency(&s, "dog", ShotType::Recommender, &w, &ClassPriors::default(), Some(&prefs))
            .unwrap();
        assert!((v - 0.75 * base).abs() < 1e-12);
        prefs.by_class.insert("dog".into(), 0.0);
        prefs.by_track.insert(1, 1.0);
        let v = saliency(&s, "dog", ShotType::Recommender, &w, &ClassPriors::default(), Some(&prefs))
            .unwrap();
        assert!((v - base).abs() < 1e-12);
    }

    #[test]
    fn preference_json() {
        let p = PreferenceMap::from_json(br#"{"by_track": {"4": 0.9}, "by_class": {"car": 0.1}}"#)
            .unwrap();
        assert_eq!(p.preference(4, "car"), Some(0.9));
        assert_eq!(p.preference(5, "car"), Some(0.1));
        assert_eq!(p.preference(5, "dog"), None);
        assert!(PreferenceMap::from_json(br#"{"by_class": {"car": 1.5}}"#).is_err());
    }

    #[test]
    fn invalid_weights_rejected() {
        let mut w = SaliencyWeights::default();
        w.pan.novel = 0.5;
        assert!(w.validate().is_err());
        let p = ClassPriors { default_prior: -0.1, ..Default::default() };
        assert!(p.validate().is_err());
    }
}
