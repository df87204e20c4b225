use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::sphere::SphericalPoint;

/// Shot styles. Declaration order is the tie-break priority in selection.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ShotType {
    Tracking,
    Static,
    Medium,
    Pan,
    Recommender,
}

impl ShotType {
    pub const ALL: [ShotType; 5] = [
        ShotType::Tracking,
        ShotType::Static,
        ShotType::Medium,
        ShotType::Pan,
        ShotType::Recommender,
    ];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn as_str(self) -> &'static str {
        match self {
            ShotType::Tracking => "tracking",
            ShotType::Static => "static",
            ShotType::Medium => "medium",
            ShotType::Pan => "pan",
            ShotType::Recommender => "recommender",
        }
    }
}

impl fmt::Display for ShotType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ShotType {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        ShotType::ALL
            .into_iter()
            .find(|t| t.as_str() == s)
            .ok_or_else(|| format!("unknown shot type {s:?}"))
    }
}

/// A candidate camera path for one shot window.
#[derive(Debug, Clone, PartialEq)]
pub struct ShotHypothesis {
    pub shot_type: ShotType,
    /// One viewport centre per frame of the window.
    pub keyframes: Vec<SphericalPoint>,
    /// Horizontal field of view, radians.
    pub hfov: f64,
    pub focus_ids: Vec<u32>,
    pub score: f64,
    /// Set by scoring when the hypothesis would cut too close to the
    /// previous shot's framing.
    pub jump_cut: bool,
    /// Position within its type's generated list.
    pub gen_index: usize,
}

impl ShotHypothesis {
    pub fn first_center(&self) -> Option<SphericalPoint> {
        self.keyframes.first().copied()
    }

    pub fn last_center(&self) -> Option<SphericalPoint> {
        self.keyframes.last().copied()
    }
}

/// A chosen hypothesis placed on the timeline; `end_frame` is exclusive.
#[derive(Debug, Clone, PartialEq)]
pub struct Shot {
    pub start_frame: u32,
    pub end_frame: u32,
    pub chosen: ShotHypothesis,
}

impl Shot {
    pub fn len(&self) -> u32 {
        self.end_frame - self.start_frame
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Camera centre at absolute frame `frame`, if the shot covers it.
    pub fn center_at(&self, frame: u32) -> Option<SphericalPoint> {
        if frame < self.start_frame || frame >= self.end_frame {
            return None;
        }
        self.chosen.keyframes.get((frame - self.start_frame) as usize).copied()
    }
}

/// Which selection safeguard had to be relaxed for a shot.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FallbackKind {
    /// Every hypothesis violated the occurrence limiter.
    Limiter,
    /// Every limiter-compliant hypothesis was a jump cut.
    JumpCut,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FallbackEvent {
    pub shot: usize,
    pub kind: FallbackKind,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    /// Frame rate of the planned video.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fps: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tracks_sha256: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub prefs_sha256: Option<String>,
    #[serde(default)]
    pub fallbacks: Vec<FallbackEvent>,
}
