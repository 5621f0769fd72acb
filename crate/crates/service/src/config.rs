//! Service configuration: a TOML file, then `NADEA_*` environment overrides.

use std::net::SocketAddr;
use std::path::{Path, PathBuf};

use nadea_core::prover::Budget;
use nadea_core::semantics::SearchConfig;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Config {
    pub bind: SocketAddr,
    /// Session journals live here. Without it sessions are kept in memory only.
    pub data_dir: Option<PathBuf>,
    pub prover: Budget,
    pub countermodel: SearchConfig,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            bind: SocketAddr::from(([127, 0, 0, 1], 8080)),
            data_dir: None,
            prover: Budget::default(),
            countermodel: SearchConfig::default(),
        }
    }
}

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {source}")]
    Read { path: PathBuf, source: std::io::Error },
    #[error("invalid config file {path}: {source}")]
    Parse { path: PathBuf, source: toml::de::Error },
    #[error("invalid value for {var}: {value:?}")]
    Env { var: &'static str, value: String },
}

impl Config {
    /// Reads `path` if given and applies overrides from the process environment.
    pub fn load(path: Option<&Path>) -> Result<Config, ConfigError> {
        Config::load_with(path, |k| std::env::var(k).ok())
    }

    pub fn load_with(path: Option<&Path>, env: impl Fn(&str) -> Option<String>) -> Result<Config, ConfigError> {
        let mut config = match path {
            Some(path) => {
                let text = std::fs::read_to_string(path)
                    .map_err(|source| ConfigError::Read { path: path.to_owned(), source })?;
                toml::from_str(&text).map_err(|source| ConfigError::Parse { path: path.to_owned(), source })?
            }
            None => Config::default(),
        };
        config.apply_env(env)?;
        Ok(config)
    }

    fn apply_env(&mut self, env: impl Fn(&str) -> Option<String>) -> Result<(), ConfigError> {
        fn parse<T: std::str::FromStr>(var: &'static str, value: String) -> Result<T, ConfigError> {
            value.trim().parse().map_err(|_| ConfigError::Env { var, value })
        }
        if let Some(v) = env("NADEA_BIND") {
            self.bind = parse("NADEA_BIND", v)?;
        }
        if let Some(v) = env("NADEA_DATA_DIR") {
            self.data_dir = (!v.is_empty()).then(|| PathBuf::from(v));
        }
        if let Some(v) = env("NADEA_PROVER_MAX_DEPTH") {
            self.prover.max_depth = parse("NADEA_PROVER_MAX_DEPTH", v)?;
        }
        if let Some(v) = env("NADEA_PROVER_WALL_TIME_MS") {
            self.prover.wall_time_ms = parse("NADEA_PROVER_WALL_TIME_MS", v)?;
        }
        if let Some(v) = env("NADEA_COUNTERMODEL_MAX_SIZE") {
            self.countermodel.max_size = parse("NADEA_COUNTERMODEL_MAX_SIZE", v)?;
        }
        if let Some(v) = env("NADEA_COUNTERMODEL_BUDGET") {
            self.countermodel.budget = parse("NADEA_COUNTERMODEL_BUDGET", v)?;
        }
        if let Some(v) = env("NADEA_COUNTERMODEL_SEED") {
            self.countermodel.seed = parse("NADEA_COUNTERMODEL_SEED", v)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn file_then_env() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("nadea.toml");
        std::fs::write(&path, "bind = \"0.0.0.0:9000\"\n[prover]\nmax_depth = 4\n").unwrap();
        let c =
            Config::load_with(Some(&path), |k| (k == "NADEA_PROVER_WALL_TIME_MS").then(|| "50".to_string())).unwrap();
        assert_eq!(c.bind.port(), 9000);
        assert_eq!(c.prover, Budget { max_depth: 4, wall_time_ms: 50 });
        assert_eq!(c.countermodel, SearchConfig::default());
        let bad = Config::load_with(None, |k| (k == "NADEA_BIND").then(|| "nowhere".to_string()));
        assert!(matches!(bad, Err(ConfigError::Env { var: "NADEA_BIND", .. })));
        std::fs::write(&path, "port = 1\n").unwrap();
        assert!(matches!(Config::load_with(Some(&path), |_| None), Err(ConfigError::Parse { .. })));
    }
}
