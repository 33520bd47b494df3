use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use graded_cli::run::{run, Command, Construction};
use graded_cli::spec::parse;

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Parser, Debug)]
#[command(name = "graded", version, about = "Checks and constructions on graded bundles and weighted algebroids")]
struct Cli {
    /// Report rendering.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,
    /// Spec file to read.
    #[arg(long, global = true)]
    spec: Option<PathBuf>,
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Validate an atlas: weights, homogeneity, cocycle and inverse laws.
    Validate,
    /// Emit the linearisation D(F) and test it for symmetry.
    Linearise,
    /// Emit the linear dual and check the canonical pairing.
    Dual,
    /// Emit the Mironian and check that its momenta transform over the base.
    Mironian,
    /// Check compatibility of each transition with the holonomic embedding.
    Embed,
    /// Classify an odd field and compare [Q,Q], [P,P] and Jacobi.
    CheckQ,
    /// Derived bracket of two sections, with the reduced form on a Lie tower.
    Bracket,
    /// Build a named algebroid or bundle.
    Construct {
        #[command(subcommand)]
        what: Build,
    },
}

#[derive(Subcommand, Debug)]
enum Build {
    /// Tangent bundle with its de Rham field.
    Tangent,
    /// Cotangent bundle of a Poisson bivector.
    Cotangent,
    /// Higher tangent bundle over a polynomial change of charts.
    Tk,
    /// Lie algebra tower from structure constants.
    LieTower,
    /// Prolongation of an algebroid.
    Prolong,
}

fn command(c: &Cmd) -> Command {
    match c {
        Cmd::Validate => Command::Validate,
        Cmd::Linearise => Command::Linearise,
        Cmd::Dual => Command::Dual,
        Cmd::Mironian => Command::Mironian,
        Cmd::Embed => Command::Embed,
        Cmd::CheckQ => Command::CheckQ,
        Cmd::Bracket => Command::Bracket,
        Cmd::Construct { what } => Command::Construct(match what {
            Build::Tangent => Construction::Tangent,
            Build::Cotangent => Construction::Cotangent,
            Build::Tk => Construction::Tk,
            Build::LieTower => Construction::LieTower,
            Build::Prolong => Construction::Prolong,
        }),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let Some(path) = &cli.spec else {
        eprintln!("error: --spec <path> is required");
        return ExitCode::from(2);
    };
    let text = match std::fs::read_to_string(path) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: cannot read {}: {e}", path.display());
            return ExitCode::from(2);
        }
    };
    let report = match parse(&text).and_then(|doc| run(command(&cli.command), &doc)) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("{}:{e}", path.display());
            return ExitCode::from(2);
        }
    };
    print!(
        "{}",
        match cli.format {
            Format::Text => report.render_text(),
            Format::Json => report.render_json(),
        }
    );
    if report.passed() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
