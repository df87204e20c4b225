//! JSON edit-list format.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::{ConfigSnapshot, EditList, Provenance, Shot, ShotHypothesis, ShotType};
use crate::sphere::SphericalPoint;

#[derive(Debug, Error)]
pub enum EdlError {
    #[error("malformed edit list: {0}")]
    Json(#[from] serde_json::Error),
    #[error("shots[{shot}]: {msg}")]
    Invalid { shot: usize, msg: String },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EdlPoint {
    pub f: u32,
    pub yaw_deg: f64,
    pub pitch_deg: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EdlShot {
    pub start: u32,
    pub end: u32,
    #[serde(rename = "type")]
    pub shot_type: ShotType,
    pub fov_deg: f64,
    pub score: f64,
    pub focus_ids: Vec<u32>,
    pub path: Vec<EdlPoint>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct EdlDocument {
    config: ConfigSnapshot,
    #[serde(default)]
    provenance: Provenance,
    shots: Vec<EdlShot>,
}

fn round6(v: f64) -> f64 {
    let r = (v * 1e6).round() / 1e6;
    if r == 0.0 {
        0.0
    } else {
        r
    }
}

impl EdlShot {
    fn from_shot(shot: &Shot) -> Self {
        let path = shot
            .chosen
            .keyframes
            .iter()
            .enumerate()
            .map(|(i, p)| EdlPoint {
                f: shot.start_frame + i as u32,
                yaw_deg: round6(p.yaw().to_degrees()),
                pitch_deg: round6(p.pitch().to_degrees()),
            })
            .collect();
        Self {
            start: shot.start_frame,
            end: shot.end_frame,
            shot_type: shot.chosen.shot_type,
            fov_deg: round6(shot.chosen.hfov.to_degrees()),
            score: round6(shot.chosen.score),
            focus_ids: shot.chosen.focus_ids.clone(),
            path,
        }
    }

    fn into_shot(self, index: usize, expected_start: u32) -> Result<Shot, EdlError> {
        let invalid = |msg: String| EdlError::Invalid { shot: index, msg };
        if self.start != expected_start {
            return Err(invalid(format!("starts at {} but previous shot ends at {expected_start}", self.start)));
        }
        if self.end <= self.start {
            return Err(invalid(format!("empty frame range [{}, {})", self.start, self.end)));
        }
        if !(self.fov_deg > 0.0 && self.fov_deg < 180.0) {
            return Err(invalid(format!("fov_deg {} outside (0, 180)", self.fov_deg)));
        }
        if self.path.len() != (self.end - self.start) as usize {
            return Err(invalid(format!(
                "path has {} points for {} frames",
                self.path.len(),
                self.end - self.start
            )));
        }
        let mut keyframes = Vec::with_capacity(self.path.len());
        for (i, p) in self.path.iter().enumerate() {
            if p.f != self.start + i as u32 {
                return Err(invalid(format!("path[{i}] has frame {} out of order", p.f)));
            }
            let c = SphericalPoint::from_degrees(p.yaw_deg, p.pitch_deg)
                .map_err(|e| invalid(format!("path[{i}]: {e}")))?;
            keyframes.push(c);
        }
        Ok(Shot {
            start_frame: self.start,
            end_frame: self.end,
            chosen: ShotHypothesis {
                shot_type: self.shot_type,
                keyframes,
                hfov: self.fov_deg.to_radians(),
                focus_ids: self.focus_ids,
                score: self.score,
                jump_cut: false,
                gen_index: 0,
            },
        })
    }
}

impl EditList {
    /// Serialises to the edit-list JSON format; angles in degrees rounded to
    /// six decimals.
    pub fn to_json(&self) -> String {
        let doc = EdlDocument {
            config: self.config.clone(),
            provenance: self.provenance.clone(),
            shots: self.shots.iter().map(EdlShot::from_shot).collect(),
        };
        serde_json::to_string_pretty(&doc).expect("edit list serializes")
    }

    /// Parses and validates an edit list; shots must tile from frame 0.
    pub fn from_json(bytes: &[u8]) -> Result<Self, EdlError> {
        let doc: EdlDocument = serde_json::from_slice(bytes)?;
        let mut shots = Vec::with_capacity(doc.shots.len());
        let mut next = 0;
        for (i, s) in doc.shots.into_iter().enumerate() {
            let shot = s.into_shot(i, next)?;
            next = shot.end_frame;
            shots.push(shot);
        }
        Ok(EditList { shots, config: doc.config, provenance: doc.provenance })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn edit() -> EditList {
        let hyp = |t, c: SphericalPoint, n| ShotHypothesis {
            shot_type: t,
            keyframes: vec![c; n],
            hfov: 75f64.to_radians(),
            focus_ids: vec![1, 2],
            score: 0.123456789,
            jump_cut: false,
            gen_index: 0,
        };
        EditList {
            shots: vec![
                Shot { start_frame: 0, end_frame: 3, chosen: hyp(ShotType::Tracking, SphericalPoint::FORWARD, 3) },
                Shot {
                    start_frame: 3,
                    end_frame: 5,
                    chosen: hyp(ShotType::Pan, SphericalPoint::from_degrees(-120.5, 10.25).unwrap(), 2),
                },
            ],
            config: ConfigSnapshot::default(),
            provenance: Provenance::default(),
        }
    }

    #[test]
    fn json_layout() {
        let json = edit().to_json();
        let v: serde_json::Value = serde_json::from_str(&json).unwrap();
        let shot = &v["shots"][1];
        assert_eq!(shot["type"], "pan");
        assert_eq!(shot["start"], 3);
        assert_eq!(shot["end"], 5);
        assert_eq!(shot["fov_deg"], 75.0);
        assert_eq!(shot["score"], 0.123457);
        assert_eq!(shot["path"][0]["f"], 3);
        assert_eq!(shot["path"][0]["yaw_deg"], -120.5);
        assert_eq!(shot["path"][1]["pitch_deg"], 10.25);
        assert_eq!(v["config"]["planner"]["shot_len_s"], 3.0);
    }

    #[test]
    fn round_trip() {
        let e = edit();
        let back = EditList::from_json(e.to_json().as_bytes()).unwrap();
        assert_eq!(back.n_frames(), 5);
        assert_eq!(back.shots[1].chosen.shot_type, ShotType::Pan);
        assert_eq!(back.to_json(), e.to_json());
    }

    #[test]
    fn rejects_gaps_and_short_paths() {
        let mut v: serde_json::Value = serde_json::from_str(&edit().to_json()).unwrap();
        v["shots"][1]["start"] = 4.into();
        let err = EditList::from_json(v.to_string().as_bytes()).unwrap_err();
        assert!(err.to_string().starts_with("shots[1]"), "{err}");

        let mut v: serde_json::Value = serde_json::from_str(&edit().to_json()).unwrap();
        v["shots"][0]["path"].as_array_mut().unwrap().pop();
        assert!(EditList::from_json(v.to_string().as_bytes()).is_err());
        assert!(matches!(EditList::from_json(b"{"), Err(EdlError::Json(_))));
    }
}
