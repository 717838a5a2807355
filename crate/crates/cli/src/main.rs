use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use upsilon_cli::{
    run_check, run_eval, run_examples_emit, run_examples_list, GlobalOpts, OutputFormat,
    EXIT_CONFIG, EXIT_PASS,
};

/// Evaluate and verify the geometric structures a metric and a connection
/// induce on the tangent bundle of a spacetime chart.
#[derive(Parser)]
#[command(name = "upsilon", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Residual tolerance override.
    #[arg(long, global = true)]
    tol: Option<f64>,
    /// Sample point count override.
    #[arg(long, global = true)]
    points: Option<usize>,
    /// Sampling seed override.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Write output to a file instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Report format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Machine,
}

#[derive(Subcommand)]
enum Command {
    /// Run the verification suites over a model config.
    ///
    /// Exit codes: 0 pass, 1 verification failure, 2 config error, 3
    /// internal inconsistency.
    Check {
        /// Model config path.
        config: PathBuf,
    },
    /// Evaluate one geometric object at one tangent point.
    Eval {
        /// Model config path.
        config: PathBuf,
        /// One of: upsilon, lambda, d-upsilon, schouten, torsion,
        /// curvature, nabla-g, d-K-g, lie-K-gflat, contraction.
        object: String,
        /// Base coordinates, comma separated.
        #[arg(long, allow_hyphen_values = true)]
        x: String,
        /// Fiber coordinates, comma separated (default: zeros).
        #[arg(long, allow_hyphen_values = true)]
        v: Option<String>,
    },
    /// List or emit the built-in example configs.
    Examples {
        #[command(subcommand)]
        action: ExamplesAction,
    },
}

#[derive(Subcommand)]
enum ExamplesAction {
    /// Print the names of the built-in examples.
    List,
    /// Write the named example config (to `<name>.cfg` unless --out).
    Emit { name: String },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let opts = GlobalOpts {
        tol: cli.tol,
        points: cli.points,
        seed: cli.seed,
        format: match cli.format {
            Format::Text => OutputFormat::Text,
            Format::Machine => OutputFormat::Machine,
        },
    };

    let (code, output, default_file): (i32, String, Option<PathBuf>) = match &cli.command {
        Command::Check { config } => {
            let (code, output) = run_check(config, &opts);
            (code, output, None)
        }
        Command::Eval {
            config,
            object,
            x,
            v,
        } => {
            let (code, output) = run_eval(config, object, x, v.as_deref(), &opts);
            (code, output, None)
        }
        Command::Examples { action } => match action {
            ExamplesAction::List => {
                let (code, output) = run_examples_list();
                (code, output, None)
            }
            ExamplesAction::Emit { name } => {
                let (code, output) = run_examples_emit(name);
                (code, output, Some(PathBuf::from(format!("{name}.cfg"))))
            }
        },
    };

    if code != EXIT_PASS && output.starts_with("error:") {
        eprint!("{output}");
        return ExitCode::from(code as u8);
    }

    // `examples emit` writes a file by default; other commands write to
    // stdout unless --out is given.
    let target = cli.out.clone().or(default_file);
    match target {
        Some(path) => {
            if let Err(e) = std::fs::write(&path, &output) {
                eprintln!("error: cannot write {}: {e}", path.display());
                return ExitCode::from(EXIT_CONFIG as u8);
            }
            println!("wrote {}", path.display());
        }
        None => print!("{output}"),
    }
    ExitCode::from(code as u8)
}
