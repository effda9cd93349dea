//! `hilb sample` and `hilb verify`: cyclic commuting triples and monomial ideals.

use std::path::PathBuf;

use anyhow::{bail, Result};
use clap::{Args, Subcommand};
use serde::Serialize;

use adebrane::commuting::{random_cyclic_triple, MonomialIdeal};
use adebrane::io::TripleFile;
use adebrane::CyclicTriple;

use super::Context;
use crate::output::{spectrum_points, to_json, write_file, Annotated, SpectrumPoint};

#[derive(Debug, Subcommand)]
pub enum HilbCommand {
    /// Random stable triple of rank r.
    Sample(SampleArgs),
    /// Builds the triple of a monomial ideal and checks the round trip.
    Verify(VerifyArgs),
}

#[derive(Debug, Args)]
pub struct SampleArgs {
    #[arg(long)]
    pub r: usize,
    #[arg(long)]
    pub seed: u64,
    /// Writes the triple file here.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Writes the joint spectrum as CSV here.
    #[arg(long)]
    pub csv: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Staircase cells `a,b;a,b;...` or `partition:p1,p2,...`.
    #[arg(long)]
    pub ideal: String,
    #[arg(long)]
    pub csv: Option<PathBuf>,
}

#[derive(Serialize)]
struct TripleReport {
    r: usize,
    commutator_residual: f64,
    cyclic: bool,
    algebra_dimension: usize,
    spectrum: Vec<SpectrumPoint>,
    triple: TripleFile,
}

fn triple_report(t: &CyclicTriple, ctx: &Context) -> Result<(TripleReport, adebrane::Spectrum)> {
    let tols = ctx.config.tolerances();
    let spectrum = t.pair.joint_spectrum(&tols)?;
    let report = TripleReport {
        r: t.r(),
        commutator_residual: t.pair.commutator_residual(),
        cyclic: t.is_cyclic(&tols),
        algebra_dimension: t.pair.algebra_dimension(&tols),
        spectrum: spectrum_points(&spectrum, tols.cluster_tol),
        triple: TripleFile::from_triple(t),
    };
    Ok((report, spectrum))
}

pub fn run_sample(args: &SampleArgs, ctx: &Context) -> Result<String> {
    if args.r == 0 {
        bail!("--r must be positive");
    }
    let mut rng = ctx.rng()?;
    let t = random_cyclic_triple::<f64, _>(args.r, &mut rng);
    let (report, spectrum) = triple_report(&t, ctx)?;
    if let Some(path) = &args.out {
        write_file(path, &to_json(&Annotated { config: ctx.config, data: &report.triple })?)?;
    }
    ctx.emit_with_spectra(&report, &[spectrum], args.csv.as_deref())
}

#[derive(Serialize)]
struct VerifyReport {
    ideal: String,
    partition: Vec<usize>,
    recovered_ideal: String,
    hilbert_function: Vec<usize>,
    round_trip: bool,
    #[serde(flatten)]
    triple: TripleReport,
}

pub fn run_verify(args: &VerifyArgs, ctx: &Context) -> Result<String> {
    let tols = ctx.config.tolerances();
    let ideal: MonomialIdeal = args.ideal.parse()?;
    let t = ideal.to_triple::<f64>();
    let data = t.to_ideal(&tols)?;
    let (triple, spectrum) = triple_report(&t, ctx)?;
    let round_trip = data.staircase == ideal && triple.cyclic && triple.algebra_dimension == ideal.r();
    let report = VerifyReport {
        ideal: ideal.to_string(),
        partition: ideal.partition(),
        recovered_ideal: data.staircase.to_string(),
        hilbert_function: data.hilbert_function(),
        round_trip,
        triple,
    };
    if !round_trip {
        bail!("ideal {} came back as {}", report.ideal, report.recovered_ideal);
    }
    ctx.emit_with_spectra(&report, &[spectrum], args.csv.as_deref())
}
