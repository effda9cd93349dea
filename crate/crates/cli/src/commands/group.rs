//! `group` and `mckay`.

use std::fmt::Write as _;

use anyhow::Result;
use clap::Args;
use serde::Serialize;

use adebrane::io::{complex_to_json, JsonComplex, JsonMatrix};
use adebrane::mckay::{mckay_quiver, QuiverGraph};
use adebrane::{Characters, Group};

use super::{build_group, Context};
use crate::config::OutputFormat;

#[derive(Debug, Args)]
pub struct GroupArgs {
    /// ADE label: A<n>, D<n>, E6, E7 or E8.
    pub label: String,
    /// Emit JSON instead of a text summary.
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Args)]
pub struct MckayArgs {
    pub label: String,
    /// Emit Graphviz DOT instead of JSON.
    #[arg(long)]
    pub dot: bool,
}

#[derive(Serialize)]
struct ClassReport {
    size: usize,
    trace: JsonComplex,
    elements: Vec<usize>,
}

#[derive(Serialize)]
struct GroupReport {
    label: String,
    order: usize,
    generators: Vec<usize>,
    elements: Vec<JsonMatrix>,
    classes: Vec<ClassReport>,
    character_table: Vec<Vec<JsonComplex>>,
    irrep_dims: Vec<usize>,
    orthogonality_defect: f64,
}

fn group_report(label: &str, group: &Group, table: &Characters) -> GroupReport {
    GroupReport {
        label: label.to_string(),
        order: group.order(),
        generators: group.generators.clone(),
        elements: group
            .elements
            .iter()
            .map(|e| (0..2).map(|i| (0..2).map(|j| complex_to_json(e.matrix[(i, j)])).collect()).collect())
            .collect(),
        classes: table
            .classes
            .iter()
            .map(|c| ClassReport { size: c.len(), trace: complex_to_json(group.elements[c[0]].trace()), elements: c.clone() })
            .collect(),
        character_table: table.characters.iter().map(|row| row.iter().map(|&z| complex_to_json(z)).collect()).collect(),
        irrep_dims: table.irrep_dims.clone(),
        orthogonality_defect: table.orthogonality_defect(),
    }
}

fn text_summary(report: &GroupReport) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "group {} of order {}", report.label, report.order);
    let _ = writeln!(out, "classes: {}", report.classes.len());
    let sizes: Vec<String> = report.classes.iter().map(|c| c.size.to_string()).collect();
    let _ = writeln!(out, "class sizes: {}", sizes.join(" "));
    let dims: Vec<String> = report.irrep_dims.iter().map(ToString::to_string).collect();
    let _ = writeln!(out, "irrep dims: {}", dims.join(" "));
    let _ = writeln!(out, "character table:");
    for row in &report.character_table {
        let cells: Vec<String> = row.iter().map(|z| format_complex(*z)).collect();
        let _ = writeln!(out, "  {}", cells.join("  "));
    }
    out
}

fn format_complex(z: JsonComplex) -> String {
    let clean = |x: f64| if x.abs() < 1e-12 { 0.0 } else { x };
    let (re, im) = (clean(z[0]), clean(z[1]));
    if im == 0.0 {
        format!("{re:.4}")
    } else {
        format!("{re:.4}{im:+.4}i")
    }
}

pub fn run_group(args: &GroupArgs, ctx: &Context) -> Result<String> {
    let json = args.json || ctx.format(&[OutputFormat::Json])?.is_some();
    let (group, table) = build_group(&args.label, ctx.config.tol)?;
    let report = group_report(&args.label, &group, &table);
    if json {
        ctx.json(&report)
    } else {
        Ok(ctx.comment("#")? + &text_summary(&report))
    }
}

#[derive(Serialize)]
struct MckayReport<'a> {
    label: &'a str,
    #[serde(flatten)]
    quiver: &'a QuiverGraph,
    perron_eigenvalue: f64,
    perron_vector: Vec<f64>,
    symmetric: bool,
    zero_diagonal: bool,
    connected: bool,
    matches_cartan: bool,
}

pub fn run_mckay(args: &MckayArgs, ctx: &Context) -> Result<String> {
    let format = if args.dot {
        OutputFormat::Dot
    } else {
        ctx.format(&[OutputFormat::Json, OutputFormat::Dot])?.unwrap_or(OutputFormat::Json)
    };
    let (group, table) = build_group(&args.label, ctx.config.tol)?;
    let quiver = mckay_quiver(&group, &table)?;
    if format == OutputFormat::Dot {
        return Ok(ctx.comment("//")? + &quiver.to_dot());
    }
    let perron = quiver.perron::<f64>();
    ctx.json(&MckayReport {
        label: &args.label,
        quiver: &quiver,
        perron_eigenvalue: perron.eigenvalue,
        perron_vector: perron.eigenvector,
        symmetric: quiver.is_symmetric(),
        zero_diagonal: quiver.has_zero_diagonal(),
        connected: quiver.is_connected(),
        matches_cartan: quiver.matches_cartan(),
    })
}
