use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use fieldscope::corpus::Origin;
use fieldscope::pipelines::DelineationConfig;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum ReportFormat {
    #[default]
    Json,
    Csv,
}

/// Everything a run needs. Relative paths are taken from the config file's
/// directory.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub corpus: Option<PathBuf>,
    pub registry: Option<PathBuf>,
    pub clusters: Option<PathBuf>,
    /// Query file per origin database.
    pub queries: BTreeMap<Origin, PathBuf>,
    pub ballots: Option<PathBuf>,
    pub ratings: Option<PathBuf>,
    pub delineation: DelineationConfig,
    pub output_dir: Option<PathBuf>,
    pub format: ReportFormat,
    /// Accept the known defects of hand-written query files, with warnings.
    pub lenient_queries: bool,
    pub drop_unresolved_citations: bool,
}

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("cannot read config {path}: {source}")]
    Read {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("config {path}: {message}")]
    Parse { path: String, message: String },
    #[error("{what} path does not exist: {path}")]
    Missing { what: String, path: String },
    #[error("{what} path is required for this command (set `{key}` in the config)")]
    Required { what: String, key: &'static str },
    #[error("{0}")]
    Invalid(String),
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = fs::read_to_string(path).map_err(|source| ConfigError::Read {
            path: path.display().to_string(),
            source,
        })?;
        let de = &mut serde_json::Deserializer::from_str(&text);
        let mut cfg: RunConfig = serde_path_to_error::deserialize(de).map_err(|e| ConfigError::Parse {
            path: path.display().to_string(),
            message: e.to_string(),
        })?;
        if let Some(base) = path.parent() {
            cfg.rebase(base);
        }
        Ok(cfg)
    }

    fn rebase(&mut self, base: &Path) {
        let fix = |p: &mut PathBuf| {
            if p.is_relative() {
                *p = base.join(&*p);
            }
        };
        for p in [
            &mut self.corpus,
            &mut self.registry,
            &mut self.clusters,
            &mut self.ballots,
            &mut self.ratings,
            &mut self.output_dir,
        ]
        .into_iter()
        .flatten()
        {
            fix(p);
        }
        self.queries.values_mut().for_each(fix);
    }

    /// Every named input must exist; the output directory may be created later.
    pub fn validate(&self) -> Result<(), ConfigError> {
        let mut named: Vec<(String, &PathBuf)> = [
            ("corpus", &self.corpus),
            ("registry", &self.registry),
            ("clusters", &self.clusters),
            ("ballots", &self.ballots),
            ("ratings", &self.ratings),
        ]
        .into_iter()
        .filter_map(|(w, p)| p.as_ref().map(|p| (w.to_string(), p)))
        .collect();
        named.extend(self.queries.iter().map(|(o, p)| (format!("{o} query"), p)));
        for (what, p) in named {
            if !p.exists() {
                return Err(ConfigError::Missing {
                    what,
                    path: p.display().to_string(),
                });
            }
        }
        self.delineation
            .validate()
            .map_err(|e| ConfigError::Invalid(e.to_string()))
    }

    pub fn require<'a>(p: &'a Option<PathBuf>, key: &'static str) -> Result<&'a Path, ConfigError> {
        p.as_deref().ok_or(ConfigError::Required {
            what: key.replace('_', " "),
            key,
        })
    }
}
