//! Run configuration: defaults, then a `key = value` file, then `ADEBRANE_*`
//! environment variables, then command-line flags.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use anyhow::{bail, Context, Result};
use clap::ValueEnum;
use serde::Serialize;

use adebrane::Tols;

pub const ENV_PREFIX: &str = "ADEBRANE_";
const KEYS: [&str; 6] = ["tol", "rank_tol", "cluster_tol", "flow_tol", "degree_cap", "output_format"];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Json,
    Csv,
    Dot,
}

impl FromStr for OutputFormat {
    type Err = anyhow::Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "json" => Ok(OutputFormat::Json),
            "csv" => Ok(OutputFormat::Csv),
            "dot" => Ok(OutputFormat::Dot),
            other => bail!("unknown output format `{other}`"),
        }
    }
}

impl fmt::Display for OutputFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            OutputFormat::Json => "json",
            OutputFormat::Csv => "csv",
            OutputFormat::Dot => "dot",
        };
        f.write_str(s)
    }
}

/// Settings of one invocation; echoed verbatim into every output.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunConfig {
    pub seed: Option<u64>,
    pub tol: f64,
    pub rank_tol: f64,
    pub cluster_tol: f64,
    pub flow_tol: f64,
    pub degree_cap: Option<usize>,
    pub output_format: Option<OutputFormat>,
}

impl Default for RunConfig {
    fn default() -> Self {
        let t = Tols::default();
        RunConfig {
            seed: None,
            tol: t.tol,
            rank_tol: t.rank_tol,
            cluster_tol: t.cluster_tol,
            flow_tol: t.flow_tol,
            degree_cap: None,
            output_format: None,
        }
    }
}

/// Parses `key = value` lines; `#` starts a comment.
pub fn parse_key_values(text: &str) -> Result<BTreeMap<String, String>> {
    let mut out = BTreeMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .with_context(|| format!("config line {}: expected `key = value`", i + 1))?;
        let key = key.trim().to_ascii_lowercase();
        if out.insert(key.clone(), value.trim().to_string()).is_some() {
            bail!("config line {}: duplicate key `{key}`", i + 1);
        }
    }
    Ok(out)
}

fn parse_value<V: FromStr>(key: &str, value: &str) -> Result<V>
where
    V::Err: fmt::Display,
{
    value.parse().map_err(|e| anyhow::anyhow!("invalid value `{value}` for `{key}`: {e}"))
}

impl RunConfig {
    /// Assembles the configuration from an optional file and the given
    /// environment variables.
    pub fn load(file: Option<&Path>, env: impl IntoIterator<Item = (String, String)>) -> Result<Self> {
        let mut config = RunConfig::default();
        if let Some(path) = file {
            let text = std::fs::read_to_string(path).with_context(|| format!("reading config {}", path.display()))?;
            for (key, value) in parse_key_values(&text)? {
                config.set(&key, &value)?;
            }
        }
        let mut overrides: Vec<(String, String)> = env
            .into_iter()
            .filter_map(|(k, v)| {
                let key = k.strip_prefix(ENV_PREFIX)?.to_ascii_lowercase();
                KEYS.contains(&key.as_str()).then_some((key, v))
            })
            .collect();
        overrides.sort();
        for (key, value) in overrides {
            config.set(&key, &value)?;
        }
        Ok(config)
    }

    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        match key {
            "tol" => self.tol = parse_value(key, value)?,
            "rank_tol" => self.rank_tol = parse_value(key, value)?,
            "cluster_tol" => self.cluster_tol = parse_value(key, value)?,
            "flow_tol" => self.flow_tol = parse_value(key, value)?,
            "degree_cap" => self.degree_cap = Some(parse_value(key, value)?),
            "output_format" => self.output_format = Some(parse_value(key, value)?),
            "seed" => bail!("`seed` is taken from --seed only"),
            _ => bail!("unknown config key `{key}`"),
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<()> {
        let t = self.tolerances();
        if !t.all_positive() || ![t.tol, t.rank_tol, t.cluster_tol, t.flow_tol].iter().all(|x| x.is_finite()) {
            bail!("all tolerances must be positive and finite");
        }
        Ok(())
    }

    pub fn tolerances(&self) -> Tols {
        Tols { tol: self.tol, rank_tol: self.rank_tol, cluster_tol: self.cluster_tol, flow_tol: self.flow_tol }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_match_library_tolerances() {
        let c = RunConfig::default();
        assert_eq!(c.tolerances(), Tols::default());
        assert!(c.validate().is_ok());
    }

    #[test]
    fn key_values_skip_comments_and_blanks() {
        let map = parse_key_values("# header\n\ntol = 1e-10  # tighter\nRANK_TOL=1e-7\n").unwrap();
        assert_eq!(map["tol"], "1e-10");
        assert_eq!(map["rank_tol"], "1e-7");
        assert!(parse_key_values("tol 1").is_err());
        assert!(parse_key_values("tol=1\ntol=2").is_err());
    }

    #[test]
    fn environment_overrides_file_values() {
        let dir = std::env::temp_dir().join(format!("adebrane-config-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("run.conf");
        std::fs::write(&path, "tol = 1e-10\ncluster_tol = 1e-5\n").unwrap();
        let env = vec![
            ("ADEBRANE_CLUSTER_TOL".to_string(), "1e-4".to_string()),
            ("ADEBRANE_UNRELATED".to_string(), "x".to_string()),
            ("PATH".to_string(), "/bin".to_string()),
        ];
        let c = RunConfig::load(Some(&path), env).unwrap();
        assert_eq!(c.tol, 1e-10);
        assert_eq!(c.cluster_tol, 1e-4);
        std::fs::remove_dir_all(&dir).ok();
    }

    #[test]
    fn bad_values_are_rejected() {
        let mut c = RunConfig::default();
        assert!(c.set("tol", "abc").is_err());
        assert!(c.set("seed", "3").is_err());
        assert!(c.set("colour", "red").is_err());
        c.set("flow_tol", "-1").unwrap();
        assert!(c.validate().is_err());
        c.set("flow_tol", "inf").unwrap();
        assert!(c.validate().is_err());
    }

    #[test]
    fn output_format_parses_case_insensitively() {
        assert_eq!("DOT".parse::<OutputFormat>().unwrap(), OutputFormat::Dot);
        assert!("xml".parse::<OutputFormat>().is_err());
    }
}
