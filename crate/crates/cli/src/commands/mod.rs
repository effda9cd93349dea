//! Subcommand implementations. Each returns the text to print on stdout.

pub mod equiv;
pub mod group;
pub mod hilb;
pub mod invariants;
pub mod resolve;

use std::path::Path;

use anyhow::{bail, Context as _, Result};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use adebrane::group::{AdeLabel, FiniteSubgroup};
use adebrane::io::{parse_triples, TripleFile};
use adebrane::{Characters, Group};

use crate::config::{OutputFormat, RunConfig};
use crate::output::{config_comment, spectra_csv, to_json, write_file, Envelope};

/// What a subcommand needs besides its own arguments.
pub struct Context<'a> {
    pub command: &'a str,
    pub config: &'a RunConfig,
}

impl Context<'_> {
    pub fn json<R: Serialize>(&self, result: &R) -> Result<String> {
        to_json(&Envelope { command: self.command, config: self.config, result })
    }

    pub fn comment(&self, prefix: &str) -> Result<String> {
        config_comment(prefix, self.config)
    }

    /// The requested output format, rejected unless the command supports it.
    pub fn format(&self, allowed: &[OutputFormat]) -> Result<Option<OutputFormat>> {
        match self.config.output_format {
            Some(f) if !allowed.contains(&f) => bail!("output format `{f}` is not available for `{}`", self.command),
            other => Ok(other),
        }
    }

    pub fn seed(&self) -> Result<u64> {
        self.config.seed.with_context(|| format!("`{}` is randomized and requires --seed", self.command))
    }

    pub fn rng(&self) -> Result<ChaCha8Rng> {
        Ok(ChaCha8Rng::seed_from_u64(self.seed()?))
    }

    /// CSV text of the spectra, headed by the configuration comment.
    pub fn spectra_csv(&self, spectra: &[adebrane::Spectrum]) -> Result<String> {
        Ok(self.comment("#")? + &spectra_csv(spectra))
    }

    /// Writes the spectra to `csv_path` when given; returns the stdout text
    /// for the chosen format.
    pub fn emit_with_spectra<R: Serialize>(
        &self,
        result: &R,
        spectra: &[adebrane::Spectrum],
        csv_path: Option<&Path>,
    ) -> Result<String> {
        if let Some(path) = csv_path {
            write_file(path, &self.spectra_csv(spectra)?)?;
        }
        match self.format(&[OutputFormat::Json, OutputFormat::Csv])? {
            Some(OutputFormat::Csv) => self.spectra_csv(spectra),
            _ => self.json(result),
        }
    }
}

pub fn parse_label(label: &str) -> Result<AdeLabel> {
    Ok(label.parse::<AdeLabel>()?)
}

pub fn build_group(label: &str, tol: f64) -> Result<(Group, Characters)> {
    let group = FiniteSubgroup::build(parse_label(label)?, tol)?;
    let table = group.character_table()?;
    Ok((group, table))
}

pub fn read_triples(path: &Path) -> Result<Vec<TripleFile>> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let triples = parse_triples(&text).with_context(|| format!("parsing {}", path.display()))?;
    if triples.is_empty() {
        bail!("{} contains no triples", path.display());
    }
    Ok(triples)
}
