//! `resolve sample|map|flow|incidence`: points of the resolution.

use std::collections::BTreeMap;
use std::path::PathBuf;

use anyhow::{bail, Result};
use clap::{Args, Subcommand};
use serde::Serialize;

use adebrane::group::AdeLabel;
use adebrane::io::{complex_to_json, JsonComplex, TripleFile, TripleList};
use adebrane::resolution::{
    exceptional_fiber_sample, incidence_check_a, kempf_ness_flow, kempf_ness_flow_equivariant, resolution_map,
    FlowOptions, FlowSummary,
};
use adebrane::scalar::modulus;
use adebrane::{Characters, Group, InvariantModel};

use super::invariants::{degree_cap, relation_is_gated};
use super::{build_group, parse_label, read_triples, Context};
use crate::output::{spectrum_points, to_json, write_file, Annotated, SpectrumPoint};

#[derive(Debug, Subcommand)]
pub enum ResolveCommand {
    /// Random stable triples over the singular point.
    Sample(SampleArgs),
    /// Image of stable triples in the quotient.
    Map(MapArgs),
    /// Moment-map flow to the Kempf–Ness representative.
    Flow(FlowArgs),
    /// Fixed points and exceptional curves of the toric charts for `A<n>`.
    Incidence(IncidenceArgs),
}

#[derive(Debug, Args)]
pub struct SampleArgs {
    #[arg(long)]
    pub group: String,
    #[arg(long, default_value_t = 1)]
    pub count: usize,
    #[arg(long)]
    pub seed: u64,
    /// Writes the sampled triples here; otherwise they are part of the output.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub csv: Option<PathBuf>,
    #[arg(long)]
    pub degree_cap: Option<usize>,
}

#[derive(Debug, Args)]
pub struct MapArgs {
    #[arg(long = "in")]
    pub input: PathBuf,
    /// Also evaluate the relation for E7 and E8, which is slow.
    #[arg(long)]
    pub relation: bool,
    #[arg(long)]
    pub degree_cap: Option<usize>,
    #[arg(long)]
    pub csv: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct FlowArgs {
    #[arg(long = "in")]
    pub input: PathBuf,
    /// Target moment-map residual.
    #[arg(long)]
    pub tol: Option<f64>,
    /// Target `|v|²/r` after rescaling the input.
    #[arg(long, default_value_t = 1.0)]
    pub zeta: f64,
    #[arg(long, default_value_t = 5000)]
    pub max_iters: usize,
    /// Writes the flowed triples here; otherwise they are part of the output.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub csv: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct IncidenceArgs {
    /// A cyclic label `A<n-1>`.
    #[arg(long)]
    pub group: String,
}

struct Model {
    label: AdeLabel,
    group: Group,
    table: Characters,
    invariants: InvariantModel,
}

fn build_model(label: AdeLabel, with_relation: bool, ctx: &Context) -> Result<Model> {
    let (group, table) = build_group(&label.to_string(), ctx.config.tol)?;
    let cap = degree_cap(label, ctx.config.degree_cap);
    let invariants = InvariantModel::build(&group, cap, with_relation, ctx.config.rank_tol)?;
    Ok(Model { label, group, table, invariants })
}

fn json_values(values: &[adebrane::scalar::Complex<f64>]) -> Vec<JsonComplex> {
    values.iter().map(|&z| complex_to_json(z)).collect()
}

#[derive(Serialize)]
struct SampleEntry {
    image: Vec<JsonComplex>,
    max_image_modulus: f64,
    orbil: String,
}

#[derive(Serialize)]
struct SampleReport {
    group: String,
    requested: usize,
    produced: usize,
    max_image_modulus: f64,
    samples: Vec<SampleEntry>,
    #[serde(skip_serializing_if = "Option::is_none")]
    triples: Option<TripleList>,
}

pub fn run_sample(args: &SampleArgs, ctx: &Context) -> Result<String> {
    let tols = ctx.config.tolerances();
    let label = parse_label(&args.group)?;
    let model = build_model(label, false, ctx)?;
    let mut rng = ctx.rng()?;
    let triples = exceptional_fiber_sample(&model.group, &model.table, &model.invariants, args.count, &tols, &mut rng)?;
    let mut samples = Vec::with_capacity(triples.len());
    let mut spectra = Vec::with_capacity(triples.len());
    for e in &triples {
        let image = resolution_map(e, &model.group, &model.table, &model.invariants, &tols)?;
        let support = e.support_classification(&model.group, &tols)?;
        spectra.push(e.pair.joint_spectrum(&tols)?);
        samples.push(SampleEntry {
            max_image_modulus: image.iter().map(|&z| modulus(z)).fold(0.0, f64::max),
            image: json_values(&image),
            orbil: support.orbil.to_string(),
        });
    }
    let list = TripleList::new(triples.iter().map(|e| TripleFile::from_equivariant(e, &model.group)).collect());
    let embedded = match &args.out {
        Some(path) => {
            write_file(path, &to_json(&Annotated { config: ctx.config, data: &list })?)?;
            None
        }
        None => Some(list),
    };
    let report = SampleReport {
        group: label.to_string(),
        requested: args.count,
        produced: samples.len(),
        max_image_modulus: samples.iter().map(|s| s.max_image_modulus).fold(0.0, f64::max),
        samples,
        triples: embedded,
    };
    ctx.emit_with_spectra(&report, &spectra, args.csv.as_deref())
}

#[derive(Serialize)]
struct MapEntry {
    group: String,
    generator_degrees: Vec<usize>,
    image: Vec<JsonComplex>,
    #[serde(skip_serializing_if = "Option::is_none")]
    relation_value: Option<f64>,
    spectrum: Vec<SpectrumPoint>,
}

pub fn run_map(args: &MapArgs, ctx: &Context) -> Result<String> {
    let tols = ctx.config.tolerances();
    let files = read_triples(&args.input)?;
    let mut models: BTreeMap<String, Model> = BTreeMap::new();
    let mut entries = Vec::with_capacity(files.len());
    let mut spectra = Vec::with_capacity(files.len());
    for file in &files {
        let label = file.group_label()?;
        let key = label.to_string();
        if !models.contains_key(&key) {
            let with_relation = args.relation || !relation_is_gated(label);
            if args.relation && relation_is_gated(label) {
                eprintln!("warning: relation search for {label} may take minutes");
            }
            models.insert(key.clone(), build_model(label, with_relation, ctx)?);
        }
        let model = &models[&key];
        let e = file.to_equivariant(&model.group, ctx.config.tol)?;
        let image = resolution_map(&e, &model.group, &model.table, &model.invariants, &tols)?;
        let spectrum = e.pair.joint_spectrum(&tols)?;
        entries.push(MapEntry {
            group: model.label.to_string(),
            generator_degrees: model.invariants.generators.iter().map(|g| g.degree).collect(),
            relation_value: model.invariants.relation.as_ref().map(|r| modulus(r.eval(&image))),
            image: json_values(&image),
            spectrum: spectrum_points(&spectrum, tols.cluster_tol),
        });
        spectra.push(spectrum);
    }
    ctx.emit_with_spectra(&entries, &spectra, args.csv.as_deref())
}

#[derive(Serialize)]
struct FlowEntry {
    #[serde(flatten)]
    summary: FlowSummary,
    spectrum: Vec<SpectrumPoint>,
}

#[derive(Serialize)]
struct FlowReportOut {
    flows: Vec<FlowEntry>,
    #[serde(skip_serializing_if = "Option::is_none")]
    triples: Option<TripleList>,
}

pub fn run_flow(args: &FlowArgs, ctx: &Context) -> Result<String> {
    let tols = ctx.config.tolerances();
    if !(args.zeta > 0.0 && args.zeta.is_finite()) {
        bail!("--zeta must be positive");
    }
    let opts = FlowOptions { zeta: args.zeta, max_iters: args.max_iters, flow_tol: tols.flow_tol, ..FlowOptions::default() };
    let files = read_triples(&args.input)?;
    let mut entries = Vec::with_capacity(files.len());
    let mut spectra = Vec::with_capacity(files.len());
    let mut outputs = Vec::with_capacity(files.len());
    for file in &files {
        let (summary, out, spectrum) = if file.rho.is_some() {
            let (group, _) = build_group(&file.group_label()?.to_string(), ctx.config.tol)?;
            let e = file.to_equivariant(&group, ctx.config.tol)?;
            let report = kempf_ness_flow_equivariant(&e, &group, &opts, &tols)?;
            let spectrum = report.triple_out.pair.joint_spectrum(&tols)?;
            (report.summary(), TripleFile::from_equivariant(&report.triple_out, &group), spectrum)
        } else {
            let report = kempf_ness_flow(&file.to_triple::<f64>()?, &opts, &tols)?;
            let spectrum = report.triple_out.pair.joint_spectrum(&tols)?;
            (report.summary(), TripleFile::from_triple(&report.triple_out), spectrum)
        };
        entries.push(FlowEntry { summary, spectrum: spectrum_points(&spectrum, tols.cluster_tol) });
        spectra.push(spectrum);
        outputs.push(out);
    }
    let list = TripleList::new(outputs);
    let embedded = match &args.out {
        Some(path) => {
            write_file(path, &to_json(&Annotated { config: ctx.config, data: &list })?)?;
            None
        }
        None => Some(list),
    };
    ctx.emit_with_spectra(&FlowReportOut { flows: entries, triples: embedded }, &spectra, args.csv.as_deref())
}

pub fn run_incidence(args: &IncidenceArgs, ctx: &Context) -> Result<String> {
    ctx.format(&[crate::config::OutputFormat::Json])?;
    let n = match parse_label(&args.group)? {
        AdeLabel::A(k) => k + 1,
        other => bail!("incidence is implemented for cyclic groups A<n>, not {other}"),
    };
    let report = incidence_check_a::<f64>(n, &ctx.config.tolerances())?;
    ctx.json(&report)
}
