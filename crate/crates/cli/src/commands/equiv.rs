//! `equiv solve` and `equiv classify`: Γ-equivariant pairs and triples.

use std::path::PathBuf;

use anyhow::{bail, Result};
use clap::{Args, Subcommand, ValueEnum};
use serde::Serialize;

use adebrane::equivariant::{pair_from_vector, solve_equivariant_space, OrbifoldPointReport};
use adebrane::io::{matrix_to_json, JsonMatrix, RhoBlock, TripleFile};
use adebrane::{Characters, Group, Rep};

use super::{build_group, read_triples, Context};
use crate::output::{spectrum_points, SpectrumPoint};

/// Largest representation dimension accepted by `equiv solve`.
const MAX_SOLVE_DIM: usize = 32;

#[derive(Debug, Subcommand)]
pub enum EquivCommand {
    /// Basis of the pairs `(m₁, m₂)` intertwining the group action with `ρ`.
    Solve(SolveArgs),
    /// Stability and support of equivariant triples read from a file.
    Classify(ClassifyArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum RepKind {
    Regular,
    Defining,
    Trivial,
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    #[arg(long)]
    pub group: String,
    #[arg(long, value_enum, default_value = "regular")]
    pub rep: RepKind,
    /// Include the basis pairs in the output.
    #[arg(long)]
    pub basis: bool,
}

#[derive(Debug, Args)]
pub struct ClassifyArgs {
    #[arg(long = "in")]
    pub input: PathBuf,
    #[arg(long)]
    pub csv: Option<PathBuf>,
}

#[derive(Serialize)]
struct BasisPair {
    m1: JsonMatrix,
    m2: JsonMatrix,
}

#[derive(Serialize)]
struct SolveReport {
    group: String,
    rep: String,
    r: usize,
    dimension: usize,
    rho: RhoBlock,
    #[serde(skip_serializing_if = "Option::is_none")]
    basis: Option<Vec<BasisPair>>,
}

fn representation(kind: RepKind, group: &Group) -> Rep {
    match kind {
        RepKind::Regular => Rep::regular(group),
        RepKind::Defining => Rep::defining(group),
        RepKind::Trivial => Rep::trivial(group, 1, true),
    }
}

pub fn rho_block(label: &str, rho: &Rep, group: &Group) -> RhoBlock {
    RhoBlock {
        group: label.to_string(),
        is_anti: rho.is_anti,
        generators: rho.generator_matrices(group).iter().map(matrix_to_json).collect(),
    }
}

pub fn run_solve(args: &SolveArgs, ctx: &Context) -> Result<String> {
    ctx.format(&[crate::config::OutputFormat::Json])?;
    let (group, _) = build_group(&args.group, ctx.config.tol)?;
    let rho = representation(args.rep, &group);
    if rho.dim > MAX_SOLVE_DIM {
        bail!("representation of dimension {} exceeds the solver limit {MAX_SOLVE_DIM}", rho.dim);
    }
    let space = solve_equivariant_space(&group, &rho, ctx.config.rank_tol);
    let name = group.label.map_or_else(|| args.group.clone(), |l| l.to_string());
    let basis = args.basis.then(|| {
        space
            .column_iter()
            .map(|c| {
                let p = pair_from_vector(&c.into_owned(), rho.dim);
                BasisPair { m1: matrix_to_json(&p.m1), m2: matrix_to_json(&p.m2) }
            })
            .collect()
    });
    ctx.json(&SolveReport {
        rho: rho_block(&name, &rho, &group),
        group: name,
        rep: format!("{:?}", args.rep).to_lowercase(),
        r: rho.dim,
        dimension: space.ncols(),
        basis,
    })
}

#[derive(Serialize)]
pub struct ClassifyReport {
    pub group: String,
    pub r: usize,
    pub commutator_residual: f64,
    pub equivariance_residual: f64,
    pub regular_type: bool,
    pub stable: bool,
    pub spectrum: Vec<SpectrumPoint>,
    pub support: OrbifoldPointReport,
    /// Orbifold length as `"p/q"`.
    pub orbil: String,
}

pub fn classify(file: &TripleFile, ctx: &Context) -> Result<(ClassifyReport, adebrane::Spectrum)> {
    let tols = ctx.config.tolerances();
    let label = file.group_label()?;
    let (group, table): (Group, Characters) = build_group(&label.to_string(), ctx.config.tol)?;
    let e = file.to_equivariant(&group, ctx.config.tol)?;
    let stability = e.stacky_stability(&group, &table, &tols)?;
    let spectrum = e.pair.joint_spectrum(&tols)?;
    let support = e.support_classification(&group, &tols)?;
    let report = ClassifyReport {
        group: label.to_string(),
        r: e.r(),
        commutator_residual: e.pair.commutator_residual(),
        equivariance_residual: e.equivariance_residual(&group),
        regular_type: stability.regular_type,
        stable: stability.is_stable(),
        spectrum: spectrum_points(&spectrum, tols.cluster_tol),
        orbil: support.orbil.to_string(),
        support,
    };
    Ok((report, spectrum))
}

pub fn run_classify(args: &ClassifyArgs, ctx: &Context) -> Result<String> {
    let files = read_triples(&args.input)?;
    let (reports, spectra): (Vec<_>, Vec<_>) =
        files.iter().map(|f| classify(f, ctx)).collect::<Result<Vec<_>>>()?.into_iter().unzip();
    ctx.emit_with_spectra(&reports, &spectra, args.csv.as_deref())
}
