use clap::{Parser, Subcommand};
use std::process::ExitCode;

/// Exact homology, spectral sequences and cyclic homology of finite
/// groupoids. Input files are JSON documents of named groupoids,
/// homomorphisms and sheaves; reports are deterministic JSON on stdout.
#[derive(Parser)]
#[command(name = "ghom", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Homology of a groupoid with sheaf coefficients
    Homology {
        input: std::path::PathBuf,
        #[arg(long)]
        groupoid: Option<String>,
        #[arg(long)]
        sheaf: Option<String>,
        #[arg(long, default_value = "Z")]
        coeff: String,
        #[arg(long, default_value_t = 4)]
        max_degree: usize,
    },
    /// Cohomology via the invariant cochain complex on the nerve
    Cohomology {
        input: std::path::PathBuf,
        #[arg(long)]
        groupoid: Option<String>,
        #[arg(long)]
        sheaf: Option<String>,
        #[arg(long, default_value = "Z")]
        coeff: String,
        #[arg(long, default_value_t = 4)]
        max_degree: usize,
    },
    /// Leray spectral sequence of a homomorphism (field coefficients)
    Leray {
        input: std::path::PathBuf,
        #[arg(long)]
        hom: String,
        #[arg(long)]
        sheaf: Option<String>,
        #[arg(long, default_value = "F2")]
        coeff: String,
        #[arg(long, default_value_t = 3)]
        max_degree: usize,
    },
    /// Morita-equivalence test with a witness on failure
    Morita {
        input: std::path::PathBuf,
        #[arg(long)]
        hom: String,
    },
    /// Hochschild and cyclic homology of the convolution algebra (over Q)
    Cyclic {
        input: std::path::PathBuf,
        #[arg(long)]
        groupoid: Option<String>,
        #[arg(long, default_value = "Q")]
        coeff: String,
        #[arg(long, default_value_t = 4)]
        max_degree: usize,
        /// "units" or "all-orbits"
        #[arg(long)]
        localize: Option<String>,
        #[arg(long, default_value_t = false)]
        compare_loops: bool,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let run = || -> Result<serde_json::Value, ghom::CmdError> {
        match &cli.command {
            Command::Homology {
                input,
                groupoid,
                sheaf,
                coeff,
                max_degree,
            } => {
                let text = read(input)?;
                ghom::cmd_homology(&text, groupoid.as_deref(), sheaf.as_deref(), coeff, *max_degree)
            }
            Command::Cohomology {
                input,
                groupoid,
                sheaf,
                coeff,
                max_degree,
            } => {
                let text = read(input)?;
                ghom::cmd_cohomology(&text, groupoid.as_deref(), sheaf.as_deref(), coeff, *max_degree)
            }
            Command::Leray {
                input,
                hom,
                sheaf,
                coeff,
                max_degree,
            } => {
                let text = read(input)?;
                ghom::cmd_leray(&text, hom, sheaf.as_deref(), coeff, *max_degree)
            }
            Command::Morita { input, hom } => {
                let text = read(input)?;
                ghom::cmd_morita(&text, hom)
            }
            Command::Cyclic {
                input,
                groupoid,
                coeff,
                max_degree,
                localize,
                compare_loops,
            } => {
                let text = read(input)?;
                ghom::cmd_cyclic(
                    &text,
                    groupoid.as_deref(),
                    coeff,
                    *max_degree,
                    localize.as_deref(),
                    *compare_loops,
                )
            }
        }
    };
    match run() {
        Ok(report) => {
            print!("{}", ghom::render(&report));
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn read(path: &std::path::Path) -> Result<String, ghom::CmdError> {
    std::fs::read_to_string(path).map_err(|e| {
        ghom::CmdError::Input(ghom::input::InputError::Parse(format!(
            "cannot read {}: {e}",
            path.display()
        )))
    })
}
