//! Envelopes and emitters shared by the subcommands.

use std::fmt::Write as _;
use std::path::Path;

use anyhow::{Context, Result};
use serde::Serialize;

use adebrane::io::{complex_to_json, JsonComplex};
use adebrane::Spectrum;

use crate::config::RunConfig;

/// Successful output: the command, the configuration echo and the result.
#[derive(Serialize)]
pub struct Envelope<'a, R: Serialize> {
    pub command: &'a str,
    pub config: &'a RunConfig,
    pub result: R,
}

#[derive(Serialize)]
pub struct ErrorBody {
    pub kind: String,
    pub message: String,
}

#[derive(Serialize)]
pub struct ErrorEnvelope<'a> {
    pub command: &'a str,
    pub config: Option<&'a RunConfig>,
    pub error: ErrorBody,
}

/// A data file annotated with the configuration that produced it; readers
/// ignore the extra field.
#[derive(Serialize)]
pub struct Annotated<'a, D: Serialize> {
    pub config: &'a RunConfig,
    #[serde(flatten)]
    pub data: &'a D,
}

pub fn to_json<S: Serialize>(value: &S) -> Result<String> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    Ok(text)
}

pub fn write_file(path: &Path, contents: &str) -> Result<()> {
    std::fs::write(path, contents).with_context(|| format!("writing {}", path.display()))
}

/// One line `# config: {...}` for formats without a native metadata slot.
pub fn config_comment(prefix: &str, config: &RunConfig) -> Result<String> {
    Ok(format!("{prefix} config: {}\n", serde_json::to_string(config)?))
}

/// A support point of the joint spectrum with its multiplicity.
#[derive(Debug, Clone, Serialize)]
pub struct SpectrumPoint {
    pub x: JsonComplex,
    pub y: JsonComplex,
    pub multiplicity: usize,
}

pub fn spectrum_points(spectrum: &Spectrum, cluster_tol: f64) -> Vec<SpectrumPoint> {
    spectrum
        .clustered(cluster_tol)
        .into_iter()
        .map(|(p, multiplicity)| SpectrumPoint { x: complex_to_json(p[0]), y: complex_to_json(p[1]), multiplicity })
        .collect()
}

/// Joint spectra of several triples, one eigenvalue pair per row.
pub fn spectra_csv(spectra: &[Spectrum]) -> String {
    let mut out = String::from("triple,re1,im1,re2,im2\n");
    for (i, s) in spectra.iter().enumerate() {
        for p in &s.points {
            let _ = writeln!(out, "{i},{},{},{},{}", p[0].re, p[0].im, p[1].re, p[1].im);
        }
    }
    out
}

/// Name of the error variant, e.g. `NotCommuting`.
pub fn error_kind(err: &anyhow::Error) -> String {
    if let Some(e) = err.downcast_ref::<adebrane::Error>() {
        let debug = format!("{e:?}");
        return debug.chars().take_while(|c| c.is_ascii_alphanumeric()).collect();
    }
    if err.downcast_ref::<std::io::Error>().is_some() {
        return "Io".into();
    }
    if err.downcast_ref::<serde_json::Error>().is_some() {
        return "Json".into();
    }
    "Invalid".into()
}

pub fn error_message(err: &anyhow::Error) -> String {
    err.chain().map(ToString::to_string).collect::<Vec<_>>().join(": ")
}
