//! Run configuration file: `{"pipeline": {...}, "extraction": {...}}`.

use std::path::Path;

use anyhow::{Context, Result};
use ghostscan::{ExtractionConfig, PipelineConfig};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Config {
    pub pipeline: PipelineConfig,
    pub extraction: ExtractionConfig,
}

impl Config {
    pub fn validate(&self) -> Result<()> {
        self.pipeline.validate().context("invalid pipeline config")?;
        self.extraction.validate().context("invalid extraction config")?;
        Ok(())
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: Config = serde_json::from_str(text).context("malformed config")?;
        cfg.validate()?;
        Ok(cfg)
    }

    /// Defaults when no path is given.
    pub fn load(path: Option<&Path>) -> Result<Self> {
        match path {
            None => Ok(Config::default()),
            Some(p) => {
                let text = std::fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?;
                Config::from_json(&text).with_context(|| format!("config {}", p.display()))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn partial_config_keeps_defaults() {
        let cfg = Config::from_json(r#"{"pipeline":{"similarity_min_count":2}}"#).unwrap();
        assert_eq!(cfg.pipeline.similarity_min_count, 2);
        assert_eq!(cfg.pipeline.buffer_len, PipelineConfig::default().buffer_len);
        assert_eq!(cfg.extraction, ExtractionConfig::default());
    }

    #[test]
    fn unknown_and_invalid_fields_rejected() {
        assert!(Config::from_json(r#"{"pipeline":{"bogus":1}}"#).is_err());
        assert!(Config::from_json(r#"{"pipeline":{"buffer_len":0}}"#).is_err());
    }

    #[test]
    fn defaults_round_trip() {
        let text = serde_json::to_string(&Config::default()).unwrap();
        assert_eq!(Config::from_json(&text).unwrap(), Config::default());
    }
}
