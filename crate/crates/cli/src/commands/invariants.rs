//! `invariants`: generators, relation and Molien coefficients of `ℂ[z₁, z₂]^Γ`.

use anyhow::Result;
use clap::Args;
use serde::Serialize;

use adebrane::group::AdeLabel;
use adebrane::invariants::default_degree_cap;
use adebrane::io::{complex_to_json, JsonComplex};
use adebrane::{InvariantModel, Poly};

use super::{build_group, parse_label, Context};
use crate::config::OutputFormat;

#[derive(Debug, Args)]
pub struct InvariantsArgs {
    pub label: String,
    /// Highest degree searched for generators.
    #[arg(long)]
    pub degree_cap: Option<usize>,
    /// Search for the relation also for E7 and E8, which is slow.
    #[arg(long)]
    pub relation: bool,
}

#[derive(Serialize)]
pub struct Term {
    pub exponents: Vec<usize>,
    pub coefficient: JsonComplex,
}

#[derive(Serialize)]
pub struct GeneratorReport {
    pub degree: usize,
    pub terms: Vec<Term>,
}

#[derive(Serialize)]
pub struct RelationReport {
    pub degree: usize,
    pub terms: Vec<Term>,
    pub residual: f64,
}

#[derive(Serialize)]
struct InvariantsReport {
    label: String,
    degree_cap: usize,
    molien: Vec<usize>,
    generators: Vec<GeneratorReport>,
    relation: Option<RelationReport>,
}

/// Relation search for these groups runs to degree 18 and 30.
pub fn relation_is_gated(label: AdeLabel) -> bool {
    matches!(label, AdeLabel::E7 | AdeLabel::E8)
}

pub fn degree_cap(label: AdeLabel, requested: Option<usize>) -> usize {
    requested.unwrap_or_else(|| default_degree_cap(label))
}

fn poly_terms(p: &Poly) -> Vec<Term> {
    let mut terms: Vec<Term> = p
        .terms()
        .map(|(&(a, b), &c)| Term { exponents: vec![a, b], coefficient: complex_to_json(c) })
        .collect();
    terms.sort_by(|x, y| x.exponents.cmp(&y.exponents));
    terms
}

pub fn generator_reports(model: &InvariantModel) -> Vec<GeneratorReport> {
    model.generators.iter().map(|g| GeneratorReport { degree: g.degree, terms: poly_terms(&g.polynomial) }).collect()
}

pub fn relation_report(model: &InvariantModel) -> Option<RelationReport> {
    let relation = model.relation.as_ref()?;
    let mut terms: Vec<Term> = relation
        .terms
        .iter()
        .map(|(e, c)| Term { exponents: e.clone(), coefficient: complex_to_json(*c) })
        .collect();
    terms.sort_by(|x, y| x.exponents.cmp(&y.exponents));
    Some(RelationReport { degree: relation.degree, terms, residual: model.relation_residual().unwrap_or(0.0) })
}

pub fn run(args: &InvariantsArgs, ctx: &Context) -> Result<String> {
    ctx.format(&[OutputFormat::Json])?;
    let label = parse_label(&args.label)?;
    let with_relation = args.relation || !relation_is_gated(label);
    if args.relation && relation_is_gated(label) {
        eprintln!("warning: relation search for {label} builds evaluation systems up to degree 30 and may take minutes");
    }
    let (group, _) = build_group(&args.label, ctx.config.tol)?;
    let cap = degree_cap(label, args.degree_cap.or(ctx.config.degree_cap));
    let model = InvariantModel::build(&group, cap, with_relation, ctx.config.rank_tol)?;
    ctx.json(&InvariantsReport {
        label: label.to_string(),
        degree_cap: cap,
        molien: model.molien.clone(),
        generators: generator_reports(&model),
        relation: relation_report(&model),
    })
}
