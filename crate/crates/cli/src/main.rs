//! `adebrane`: command-line front end for groups, McKay quivers, invariant
//! rings, commuting triples and resolutions of `ℂ²/Γ`.

mod commands;
mod config;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Result;
use clap::{Parser, Subcommand};

use commands::equiv::EquivCommand;
use commands::group::{GroupArgs, MckayArgs};
use commands::hilb::HilbCommand;
use commands::invariants::InvariantsArgs;
use commands::resolve::ResolveCommand;
use commands::Context;
use config::{OutputFormat, RunConfig, ENV_PREFIX};
use output::{error_kind, error_message, to_json, ErrorBody, ErrorEnvelope};

const EXIT_FAILURE: u8 = 1;
const EXIT_USAGE: u8 = 2;

#[derive(Debug, Parser)]
#[command(name = "adebrane", version, about = "Kleinian singularities through commuting matrices")]
struct Cli {
    /// `key = value` configuration file; defaults to $ADEBRANE_CONFIG.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output format, where the command supports it.
    #[arg(long, global = true, value_enum)]
    format: Option<OutputFormat>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Elements, classes and character table of a finite subgroup of SU(2).
    Group(GroupArgs),
    /// McKay quiver and its affine Dynkin type.
    Mckay(MckayArgs),
    /// Generators and relation of the invariant ring.
    Invariants(InvariantsArgs),
    #[command(subcommand)]
    Hilb(HilbCommand),
    #[command(subcommand)]
    Equiv(EquivCommand),
    #[command(subcommand)]
    Resolve(ResolveCommand),
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Group(_) => "group",
            Command::Mckay(_) => "mckay",
            Command::Invariants(_) => "invariants",
            Command::Hilb(HilbCommand::Sample(_)) => "hilb sample",
            Command::Hilb(HilbCommand::Verify(_)) => "hilb verify",
            Command::Equiv(EquivCommand::Solve(_)) => "equiv solve",
            Command::Equiv(EquivCommand::Classify(_)) => "equiv classify",
            Command::Resolve(ResolveCommand::Sample(_)) => "resolve sample",
            Command::Resolve(ResolveCommand::Map(_)) => "resolve map",
            Command::Resolve(ResolveCommand::Flow(_)) => "resolve flow",
            Command::Resolve(ResolveCommand::Incidence(_)) => "resolve incidence",
        }
    }

    /// Command-line values that take precedence over the configuration.
    fn apply_overrides(&self, config: &mut RunConfig) {
        match self {
            Command::Hilb(HilbCommand::Sample(a)) => config.seed = Some(a.seed),
            Command::Resolve(ResolveCommand::Sample(a)) => {
                config.seed = Some(a.seed);
                config.degree_cap = a.degree_cap.or(config.degree_cap);
            }
            Command::Resolve(ResolveCommand::Map(a)) => config.degree_cap = a.degree_cap.or(config.degree_cap),
            Command::Resolve(ResolveCommand::Flow(a)) => config.flow_tol = a.tol.unwrap_or(config.flow_tol),
            Command::Invariants(a) => config.degree_cap = a.degree_cap.or(config.degree_cap),
            _ => {}
        }
    }

    fn run(&self, ctx: &Context) -> Result<String> {
        match self {
            Command::Group(a) => commands::group::run_group(a, ctx),
            Command::Mckay(a) => commands::group::run_mckay(a, ctx),
            Command::Invariants(a) => commands::invariants::run(a, ctx),
            Command::Hilb(HilbCommand::Sample(a)) => commands::hilb::run_sample(a, ctx),
            Command::Hilb(HilbCommand::Verify(a)) => commands::hilb::run_verify(a, ctx),
            Command::Equiv(EquivCommand::Solve(a)) => commands::equiv::run_solve(a, ctx),
            Command::Equiv(EquivCommand::Classify(a)) => commands::equiv::run_classify(a, ctx),
            Command::Resolve(ResolveCommand::Sample(a)) => commands::resolve::run_sample(a, ctx),
            Command::Resolve(ResolveCommand::Map(a)) => commands::resolve::run_map(a, ctx),
            Command::Resolve(ResolveCommand::Flow(a)) => commands::resolve::run_flow(a, ctx),
            Command::Resolve(ResolveCommand::Incidence(a)) => commands::resolve::run_incidence(a, ctx),
        }
    }
}

fn load_config(cli: &Cli) -> Result<RunConfig> {
    let file = cli.config.clone().or_else(|| std::env::var_os(format!("{ENV_PREFIX}CONFIG")).map(PathBuf::from));
    let mut config = RunConfig::load(file.as_deref(), std::env::vars())?;
    if cli.format.is_some() {
        config.output_format = cli.format;
    }
    cli.command.apply_overrides(&mut config);
    config.validate()?;
    Ok(config)
}

fn fail(command: &str, config: Option<&RunConfig>, kind: String, message: String, code: u8) -> ExitCode {
    let envelope = ErrorEnvelope { command, config, error: ErrorBody { kind, message } };
    match to_json(&envelope) {
        Ok(text) => print!("{text}"),
        Err(_) => println!("{{\"error\":{{\"kind\":\"Internal\",\"message\":\"unserializable error\"}}}}"),
    }
    ExitCode::from(code)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let message = e.render().to_string().trim().to_string();
            return fail("", None, "Usage".into(), message, EXIT_USAGE);
        }
    };
    let name = cli.command.name();
    let config = match load_config(&cli) {
        Ok(c) => c,
        Err(e) => return fail(name, None, "Config".into(), error_message(&e), EXIT_USAGE),
    };
    let ctx = Context { command: name, config: &config };
    match cli.command.run(&ctx) {
        Ok(text) => {
            print!("{text}");
            ExitCode::SUCCESS
        }
        Err(e) => fail(name, Some(&config), error_kind(&e), error_message(&e), EXIT_FAILURE),
    }
}
