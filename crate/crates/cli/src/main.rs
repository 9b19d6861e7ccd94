//! `mardl` command-line tool.
//!
//! Exit codes: 0 success, 2 input error, 3 configuration error.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use mardl::io::{
    deserialize_model, read_table, serialize_model, write_assignments, write_clustering, write_table, Table,
};
use mardl::labeling::{label_dataset_with, LabelOptions};
use mardl::sampling::sample_split;
use mardl::{
    compare_methods, kmodes::kmodes_cluster, DataPoint, FallbackPolicy, IoError, LabelingError, Method, PipelineError,
    PruningPolicy, RepresentativeError, RepresentativeModel,
};

#[derive(Debug, Parser)]
#[command(
    name = "mardl",
    version,
    about = "Label categorical data points with cluster representatives"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Cluster a sample of the rows with k-modes.
    Cluster {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Share of the rows to cluster, in (0, 1].
        #[arg(long, default_value_t = 1.0)]
        fraction: f64,
        /// Clustered sample, with a `__cluster` column.
        #[arg(long)]
        out: PathBuf,
        /// Rows left out of the sample.
        #[arg(long)]
        unlabeled_out: Option<PathBuf>,
    },
    /// Build the representative model of a clustered table.
    Represent {
        #[arg(long)]
        input: PathBuf,
        /// Drop multi-node nodesets whose best importance is below this.
        #[arg(long)]
        prune_theta: Option<f64>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Assign each row to the cluster it most resembles.
    Label {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        input: PathBuf,
        #[arg(long, value_parser = parse_method)]
        method: Method,
        #[arg(long, value_enum)]
        fallback: Option<Fallback>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Label every row under several methods and report where they disagree.
    Compare {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        input: PathBuf,
        /// `all` or a comma-separated list of methods.
        #[arg(long, default_value = "all", value_parser = parse_methods)]
        methods: MethodList,
        #[arg(long)]
        out: PathBuf,
    },
    /// Print the worked example with every intermediate value.
    Demo,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Fallback {
    LargestCluster,
}

#[derive(Debug, Clone)]
struct MethodList(Vec<Method>);

fn parse_method(s: &str) -> Result<Method, String> {
    s.parse()
}

fn parse_methods(s: &str) -> Result<MethodList, String> {
    if s.trim() == "all" {
        return Ok(MethodList(Method::ALL.to_vec()));
    }
    let mut methods = Vec::new();
    for part in s.split(',') {
        let m: Method = part.trim().parse()?;
        if !methods.contains(&m) {
            methods.push(m);
        }
    }
    Ok(MethodList(methods))
}

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("{0}")]
    Config(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Input(_) => 2,
            CliError::Config(_) => 3,
        }
    }

    fn input(context: &Path, e: impl std::fmt::Display) -> Self {
        CliError::Input(format!("{}: {e}", context.display()))
    }
}

impl From<PipelineError> for CliError {
    fn from(e: PipelineError) -> Self {
        match e {
            PipelineError::InvalidFraction(_)
            | PipelineError::InvalidK
            | PipelineError::TooFewPoints { .. }
            | PipelineError::NoMethods
            | PipelineError::Representative(RepresentativeError::InvalidThreshold(_)) => {
                CliError::Config(e.to_string())
            }
            _ => CliError::Input(e.to_string()),
        }
    }
}

impl From<RepresentativeError> for CliError {
    fn from(e: RepresentativeError) -> Self {
        match e {
            RepresentativeError::InvalidThreshold(_) => CliError::Config(e.to_string()),
            _ => CliError::Input(e.to_string()),
        }
    }
}

impl From<LabelingError> for CliError {
    fn from(e: LabelingError) -> Self {
        CliError::Input(e.to_string())
    }
}

fn load_table(path: &Path) -> Result<Table, CliError> {
    read_table(path).map_err(|e| CliError::input(path, e))
}

fn load_model(path: &Path) -> Result<RepresentativeModel, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::input(path, e))?;
    deserialize_model(&text).map_err(|e| CliError::input(path, e))
}

fn save(path: &Path, text: &str) -> Result<(), CliError> {
    fs::write(path, text).map_err(|e| CliError::input(path, e))
}

fn io_error(path: &Path) -> impl Fn(IoError) -> CliError + '_ {
    move |e| CliError::input(path, e)
}

/// Rows of `table` with their values in the model's attribute order.
fn align(table: Table, model: &RepresentativeModel, path: &Path) -> Result<Vec<DataPoint>, CliError> {
    let schema = model.schema();
    let mut order = Vec::with_capacity(schema.len());
    for name in schema.names() {
        let i = table
            .schema
            .index_of(name)
            .ok_or_else(|| CliError::input(path, format!("missing attribute `{name}` required by the model")))?;
        order.push(i);
    }
    if table.schema.len() != schema.len() {
        let extra: Vec<&str> = table
            .schema
            .names()
            .iter()
            .filter(|n| schema.index_of(n).is_none())
            .map(String::as_str)
            .collect();
        return Err(CliError::input(
            path,
            format!("attributes not in the model: {}", extra.join(", ")),
        ));
    }
    table
        .points
        .iter()
        .map(|p| {
            let values: Vec<&str> = order.iter().map(|&i| p.values()[i].as_str()).collect();
            let point = DataPoint::new(values).map_err(|e| CliError::input(path, e))?;
            Ok(match p.id() {
                Some(id) => point.with_id(id),
                None => point,
            })
        })
        .collect()
}

fn run(command: Command) -> Result<(), CliError> {
    match command {
        Command::Cluster {
            input,
            k,
            seed,
            fraction,
            out,
            unlabeled_out,
        } => {
            let table = load_table(&input)?;
            let (sample, held_out) = sample_split(&table.points, fraction, seed)?;
            let clustering = kmodes_cluster(&table.schema, &sample, k, seed)?;
            save(&out, &write_clustering(&clustering).map_err(io_error(&out))?)?;
            if let Some(path) = unlabeled_out {
                save(
                    &path,
                    &write_table(&table.schema, &held_out, None).map_err(io_error(&path))?,
                )?;
            }
        }
        Command::Represent {
            input,
            prune_theta,
            out,
        } => {
            let policy = match prune_theta {
                Some(theta) => PruningPolicy::threshold(theta)?,
                None => PruningPolicy::None,
            };
            let clustering = load_table(&input)?.into_clustering().map_err(io_error(&input))?;
            let model = RepresentativeModel::build(&clustering, policy)?;
            save(&out, &serialize_model(&model))?;
        }
        Command::Label {
            model,
            input,
            method,
            fallback,
            out,
        } => {
            let rep = load_model(&model)?;
            let points = align(load_table(&input)?, &rep, &input)?;
            let options = LabelOptions {
                fallback: match fallback {
                    Some(Fallback::LargestCluster) => FallbackPolicy::LargestCluster,
                    None => FallbackPolicy::None,
                },
                ..Default::default()
            };
            let labels = label_dataset_with(&points, &rep, method, options)?;
            save(&out, &write_assignments(&labels).map_err(io_error(&out))?)?;
        }
        Command::Compare {
            model,
            input,
            methods,
            out,
        } => {
            let rep = load_model(&model)?;
            let points = align(load_table(&input)?, &rep, &input)?;
            let report = compare_methods(&points, &rep, &methods.0)?;
            save(&out, &report.to_json())?;
        }
        Command::Demo => print!("{}", mardl::demo::demo_example1()),
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(3)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code())
        }
    }
}
