use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use ekor_cli::{cmd_adm, cmd_building, cmd_ekor, cmd_kr, cmd_rdt, cmd_zips, compare_golden, CliError, OutputRecord};

/// Admissible sets, KR/EKOR strata, standard zips and apartment lattice
/// chains for GSp(2g).
#[derive(Parser)]
#[command(name = "ekor", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[arg(long, value_enum, default_value_t = Format::Tsv, global = true)]
    format: Format,
    /// Compare with a golden file; exit code 1 on mismatch.
    #[arg(long, global = true)]
    golden: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Tsv,
    Json,
}

#[derive(Args)]
struct Level {
    #[arg(long)]
    g: usize,
    /// Comma-separated vertex list, e.g. `0,2`.
    #[arg(long, value_delimiter = ',', required = true)]
    vertices: Vec<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Admissible set with Frobenius matrices.
    Adm {
        #[arg(long)]
        g: usize,
    },
    /// Kottwitz-Rapoport tags with their order.
    Kr(Level),
    /// EKOR elements with their KR types.
    Ekor(Level),
    /// Strata table of standard zips (needs 0 and g among the vertices).
    Zips(Level),
    /// Distinguished subspaces and the reductive quotient.
    Rdt(Level),
    /// Graded lattice chain, parahoric pattern and walls of an apartment point.
    Building {
        /// A named point (hs, paramodular, klingen, siegel, iwahori) or
        /// coordinates such as `(-1/4,-1/4,1/4,1/4)`.
        #[arg(long)]
        point: String,
    },
}

fn run(cli: &Cli) -> Result<(OutputRecord, Option<String>), CliError> {
    let record = match &cli.command {
        Command::Adm { g } => cmd_adm(*g)?,
        Command::Kr(l) => cmd_kr(l.g, &l.vertices)?,
        Command::Ekor(l) => cmd_ekor(l.g, &l.vertices)?,
        Command::Zips(l) => cmd_zips(l.g, &l.vertices)?,
        Command::Rdt(l) => cmd_rdt(l.g, &l.vertices)?,
        Command::Building { point } => cmd_building(point)?,
    };
    let report = match &cli.golden {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| CliError::Invalid(format!("cannot read {}: {e}", path.display())))?;
            Some(compare_golden(&record, &text)?)
        }
        None => None,
    };
    Ok((record, report))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok((record, report)) => {
            match cli.format {
                Format::Tsv => print!("{}", record.to_tsv()),
                Format::Json => print!("{}", record.to_json()),
            }
            if let Some(r) = report {
                eprint!("{r}");
                if !r.ends_with('\n') {
                    eprintln!();
                }
            }
            ExitCode::SUCCESS
        }
        Err(CliError::Invalid(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Mismatch(msg)) => {
            eprint!("golden mismatch:\n{msg}");
            ExitCode::from(1)
        }
    }
}
