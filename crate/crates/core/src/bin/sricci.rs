use std::path::PathBuf;
use std::process::ExitCode;

use clap::{ArgGroup, Parser, ValueEnum};

use sricci::document::{parse_document, ComplexDocument};
use sricci::generate::generate;
use sricci::report::{run, Command, RunOptions};
use sricci::{Error, WeightScheme};

#[derive(Clone, Copy, Debug, ValueEnum)]
enum CommandArg {
    Summary,
    Spectrum,
    Curvature,
    Verify,
    Dual,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum WeightsArg {
    Delta,
    Unit,
    Custom,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Readable,
    Machine,
}

/// Ricci curvature and Laplacian spectra on the faces of simplicial complexes.
#[derive(Debug, Parser)]
#[command(name = "sricci", version)]
#[command(group(ArgGroup::new("source").required(true).args(["input", "generate"])))]
struct Cli {
    command: CommandArg,

    /// JSON document with "facets" and optional "weights" and "metadata".
    #[arg(long, value_name = "PATH")]
    input: Option<PathBuf>,

    /// Built-in fixture followed by its integer parameters, e.g. `torus_grid 3 3`.
    #[arg(long, num_args = 1.., value_name = "NAME ARGS")]
    generate: Option<Vec<String>>,

    /// Face dimension to analyse (default: top dimension).
    #[arg(long)]
    dim: Option<usize>,

    #[arg(long, value_enum, default_value = "delta")]
    weights: WeightsArg,

    #[arg(long, value_enum, default_value = "readable")]
    format: Format,

    /// Eigenvalues with absolute value at or below this count as zero.
    #[arg(long, default_value_t = sricci::spectral::DEFAULT_ZERO_THRESHOLD)]
    zero_threshold: f64,

    /// Agreement required between consecutive curvature ratios while halving ε.
    #[arg(long, default_value_t = 1e-9)]
    eps_tolerance: f64,
}

fn load(cli: &Cli) -> Result<ComplexDocument, Error> {
    if let Some(path) = &cli.input {
        return parse_document(path);
    }
    let spec = cli.generate.as_deref().unwrap_or_default();
    let (name, args) = spec
        .split_first()
        .ok_or_else(|| Error::BadParams("missing generator name".into()))?;
    let params = args
        .iter()
        .map(|a| {
            a.parse::<u64>()
                .map_err(|_| Error::BadParams(format!("generator parameter {a:?} is not a nonnegative integer")))
        })
        .collect::<Result<Vec<_>, _>>()?;
    generate(name, &params)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let command = match cli.command {
        CommandArg::Summary => Command::Summary,
        CommandArg::Spectrum => Command::Spectrum,
        CommandArg::Curvature => Command::Curvature,
        CommandArg::Verify => Command::Verify,
        CommandArg::Dual => Command::Dual,
    };
    let opts = RunOptions {
        dim: cli.dim,
        weights: match cli.weights {
            WeightsArg::Delta => WeightScheme::Delta,
            WeightsArg::Unit => WeightScheme::Unit,
            WeightsArg::Custom => WeightScheme::Custom,
        },
        zero_threshold: cli.zero_threshold,
        eps_tolerance: cli.eps_tolerance,
        ..RunOptions::default()
    };
    let report = match load(&cli).and_then(|doc| run(command, &doc, &opts)) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    match cli.format {
        Format::Readable => print!("{}", report.render()),
        Format::Machine => println!("{}", report.to_json()),
    }
    ExitCode::from(report.exit_code() as u8)
}
