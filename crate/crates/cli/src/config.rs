//! Layered run configuration: defaults, then the TOML file, then flags.

use std::fs;
use std::path::Path;

use anyhow::{anyhow, bail, Context, Result};
use autocine::{ClassPriors, PlannerConfig, SaliencyWeights};
use serde::{Deserialize, Serialize};
use toml::{Table, Value};

use crate::cli::PlannerFlags;

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub planner: PlannerConfig,
    pub saliency: SaliencyWeights,
    pub priors: ClassPriors,
}

/// Tables whose keys are open-ended (class names) rather than fixed fields.
const OPEN_TABLES: &[&str] = &["priors.priors"];

fn merge(base: &mut Table, over: Table, path: &str) -> Result<()> {
    for (key, value) in over {
        let here = if path.is_empty() { key.clone() } else { format!("{path}.{key}") };
        match (base.get_mut(&key), value) {
            (Some(Value::Table(b)), Value::Table(o)) => merge(b, o, &here)?,
            (Some(Value::Table(_)), _) => bail!("{here}: expected a table"),
            (Some(slot), v) => *slot = v,
            (None, v) if OPEN_TABLES.contains(&path) => {
                base.insert(key, v);
            }
            (None, _) => bail!("unknown setting {here}"),
        }
    }
    Ok(())
}

impl RunConfig {
    /// Defaults overlaid with `path`, if given.
    pub fn load(path: Option<&Path>) -> Result<Self> {
        let Some(path) = path else {
            return Ok(Self::default());
        };
        let text = fs::read_to_string(path).with_context(|| format!("cannot read config {}", path.display()))?;
        Self::from_toml(&text).with_context(|| format!("invalid config {}", path.display()))
    }

    pub fn from_toml(text: &str) -> Result<Self> {
        let file: Table = toml::from_str(text)?;
        let mut base = match Value::try_from(Self::default())? {
            Value::Table(t) => t,
            _ => return Err(anyhow!("defaults do not serialise to a table")),
        };
        merge(&mut base, file, "")?;
        Ok(Value::Table(base).try_into()?)
    }

    pub fn apply_flags(&mut self, flags: &PlannerFlags) {
        let p = &mut self.planner;
        if let Some(v) = flags.shot_len {
            p.shot_len_s = v;
        }
        if let Some(v) = flags.fov_tracking {
            p.fov_deg.tracking = v;
        }
        if let Some(v) = flags.fov_static {
            p.fov_deg.static_ = v;
        }
        if let Some(v) = flags.fov_medium {
            p.fov_deg.medium = v;
        }
        if let Some(v) = flags.fov_pan {
            p.fov_deg.pan = v;
        }
        if let Some(v) = flags.hyps_per_type {
            p.hyps_per_type = v;
        }
        if let Some(v) = flags.type_quota {
            p.type_quota = v;
        }
        if let Some(v) = flags.seed {
            p.rng_seed = v;
        }
    }

    pub fn resolve(flags: &PlannerFlags) -> Result<Self> {
        let mut cfg = Self::load(flags.config.as_deref())?;
        cfg.apply_flags(flags);
        Ok(cfg)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_file_is_defaults() {
        assert_eq!(RunConfig::from_toml("").unwrap(), RunConfig::default());
    }

    #[test]
    fn file_overrides_nested_fields() {
        let cfg = RunConfig::from_toml(
            "[planner]\nshot_len_s = 2.0\n[planner.fov_deg]\nstatic = 120.0\n\
             [saliency.pan]\nclass = 0.2\nsize = 0.2\nmotion = 0.2\nnbhd = 0.2\nnovel = 0.2\n\
             [priors.priors]\nkite = 0.9\n",
        )
        .unwrap();
        assert_eq!(cfg.planner.shot_len_s, 2.0);
        assert_eq!(cfg.planner.fov_deg.static_, 120.0);
        assert_eq!(cfg.planner.fov_deg.tracking, 75.0);
        assert_eq!(cfg.saliency.pan.nbhd, 0.2);
        assert_eq!(cfg.priors.prior("kite"), 0.9);
        assert_eq!(cfg.priors.prior("human"), 1.0);
    }

    #[test]
    fn typos_are_rejected() {
        assert!(RunConfig::from_toml("[planner]\nshot_length = 2.0\n").is_err());
        assert!(RunConfig::from_toml("[saliencey]\n").is_err());
        assert!(RunConfig::from_toml("planner = 3\n").is_err());
    }

    #[test]
    fn flags_beat_file() {
        let mut cfg = RunConfig::from_toml("[planner]\nshot_len_s = 2.0\ntype_quota = 0.5\n").unwrap();
        cfg.apply_flags(&PlannerFlags { shot_len: Some(4.0), fov_pan: Some(80.0), ..Default::default() });
        assert_eq!(cfg.planner.shot_len_s, 4.0);
        assert_eq!(cfg.planner.type_quota, 0.5);
        assert_eq!(cfg.planner.fov_deg.pan, 80.0);
    }
}
