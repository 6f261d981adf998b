//! `framemult`: batch interface over the multiplier toolkit.
//!
//! Exit codes: 0 on success (certificate fired, diagnostics clean), 2 when
//! no rule fired or a diagnostics verdict is `violated`, 1 on errors.

mod report;
mod schema;

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use framemult::catalogue::{self, Params};
use framemult::inversion::Rule;
use framemult::Tolerances;

use schema::{ConfigSchema, SchemaError, SpecSchema};

#[derive(Parser)]
#[command(name = "framemult", version, about = "Frame multiplier toolkit: bounds, convergence diagnostics, invertibility certificates, inverses")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Frame bound brackets of a family (or of both families of a spec).
    Bounds(JobArgs),
    /// Necessary-condition traces for unconditional convergence over a
    /// truncation sweep.
    Diagnose(JobArgs),
    /// Try the certificate rules in order and report the first that fires.
    Certify(JobArgs),
    /// Certify and emit the dense inverse matrix.
    Invert(JobArgs),
    /// Apply the multiplier to vectors.
    Apply(ApplyArgs),
    /// The fixture catalogue.
    Catalogue {
        #[command(subcommand)]
        action: CatalogueAction,
    },
}

#[derive(Args)]
struct JobArgs {
    /// Input JSON file (a spec, or a bare family for `bounds`).
    #[arg(long = "in")]
    input: PathBuf,
    /// Write the JSON report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Truncation sweep, e.g. 8,16,32,64.
    #[arg(long, value_delimiter = ',')]
    dims: Option<Vec<usize>>,
    /// Target residual for series inverses.
    #[arg(long)]
    tol: Option<f64>,
    /// Rule order for `certify`/`invert`, e.g. riesz,gphi,p1,cp1,p3,mpos,p4.
    #[arg(long, value_delimiter = ',')]
    order: Option<Vec<String>>,
    /// Skip the advisory oracle quantities in reports.
    #[arg(long)]
    no_oracle: bool,
}

#[derive(Args)]
struct ApplyArgs {
    #[command(flatten)]
    job: JobArgs,
    /// JSON file with the vectors to apply the multiplier to.
    #[arg(long = "vec")]
    vectors: PathBuf,
}

#[derive(Subcommand)]
enum CatalogueAction {
    /// List every fixture with its parameters.
    List {
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Emit a fixture as an explicit spec in the JSON schema.
    Emit {
        id: String,
        #[arg(long, default_value_t = 32)]
        dim: usize,
        /// Fixture parameters as name=value.
        #[arg(long = "param", value_parser = parse_param)]
        params: Vec<(String, f64)>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn parse_param(s: &str) -> Result<(String, f64), String> {
    let (name, value) = s.split_once('=').ok_or_else(|| format!("`{s}` is not name=value"))?;
    let value: f64 = value.parse().map_err(|e| format!("`{s}`: {e}"))?;
    Ok((name.to_string(), value))
}

/// Everything that can go wrong, with its exit code 1 payload.
enum CliError {
    Io(String),
    Schema(SchemaError),
    Other(String),
}

impl CliError {
    fn json(&self) -> serde_json::Value {
        match self {
            CliError::Io(msg) => serde_json::json!({"error": msg}),
            CliError::Schema(e) => serde_json::json!({"error": e.message, "pointer": e.pointer}),
            CliError::Other(msg) => serde_json::json!({"error": msg}),
        }
    }
}

impl From<SchemaError> for CliError {
    fn from(e: SchemaError) -> Self {
        CliError::Schema(e)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("{}", serde_json::to_string_pretty(&e.json()).unwrap());
            ExitCode::from(1)
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode, CliError> {
    match cli.command {
        Command::Bounds(args) => report::bounds(&job(args)?),
        Command::Diagnose(args) => report::diagnose(&job(args)?),
        Command::Certify(args) => report::certify(&job(args)?, false),
        Command::Invert(args) => report::certify(&job(args)?, true),
        Command::Apply(args) => {
            let vectors = read_json::<schema::VectorsSchema>(&args.vectors)?;
            report::apply(&job(args.job)?, &vectors)
        }
        Command::Catalogue { action } => match action {
            CatalogueAction::List { out } => report::catalogue_list(out.as_deref()),
            CatalogueAction::Emit { id, dim, params, out } => {
                let params: Params = params.into_iter().collect();
                let inst = catalogue::instantiate(&id, &params, dim)
                    .map_err(|e| CliError::Other(e.to_string()))?;
                let spec = SpecSchema::explicit(&inst.spec);
                report::write_json(out.as_deref(), &serde_json::to_value(&spec).unwrap())?;
                Ok(ExitCode::SUCCESS)
            }
        },
    }
}

/// A resolved job: parsed input, effective tolerances, sweep, rule order.
pub struct Job {
    pub raw: serde_json::Value,
    pub out: Option<PathBuf>,
    pub dims: Vec<usize>,
    pub explicit_dims: bool,
    pub order: Vec<Rule>,
    pub series_tol: f64,
    pub tols: Tolerances,
    pub oracle: bool,
}

fn job(args: JobArgs) -> Result<Job, CliError> {
    let raw: serde_json::Value = read_json(&args.input)?;
    let config: ConfigSchema = raw
        .get("config")
        .map(|v| serde_json::from_value(v.clone()))
        .transpose()
        .map_err(|e| CliError::Schema(SchemaError { pointer: "/config".into(), message: e.to_string() }))?
        .unwrap_or_default();

    let mut tols = Tolerances::default();
    if let Ok(cap) = std::env::var("FRAMEMULT_ORACLE_CAP") {
        tols.oracle_dim_cap = cap
            .parse()
            .map_err(|e| CliError::Other(format!("FRAMEMULT_ORACLE_CAP: {e}")))?;
    }
    if let Some(t) = config.tol_lin {
        tols.tol_lin = t;
    }
    if let Some(t) = config.tol_dual {
        tols.tol_dual_coeff = t;
    }
    if let Some(t) = config.tol_inv.or(args.tol) {
        tols.tol_inv = t;
    }
    let series_tol = args.tol.or(config.tol_inv).unwrap_or(tols.tol_inv);

    let order_names = args.order.or(config.order);
    let order = match order_names {
        None => Rule::DEFAULT_ORDER.to_vec(),
        Some(names) => {
            let mut order = Vec::new();
            for name in &names {
                order.push(Rule::from_wire_name(name).ok_or_else(|| {
                    CliError::Other(format!(
                        "unknown rule `{name}` (expected one of riesz, gphi, p1, cp1, p3, mpos, p4)"
                    ))
                })?);
            }
            order
        }
    };

    let explicit_dims = args.dims.is_some() || config.dims.is_some();
    let dims = args
        .dims
        .or(config.dims)
        .unwrap_or_else(|| framemult::convergence::DEFAULT_SWEEP.to_vec());
    let oracle = !args.no_oracle && config.oracle.unwrap_or(true);

    Ok(Job { raw, out: args.out, dims, explicit_dims, order, series_tol, tols, oracle })
}

fn read_json<T: serde::de::DeserializeOwned>(path: &std::path::Path) -> Result<T, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text)
        .map_err(|e| CliError::Schema(SchemaError { pointer: "/".into(), message: e.to_string() }))
}
