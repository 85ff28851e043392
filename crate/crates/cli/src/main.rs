use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use nilmoduli_cli::commands::{self, WITNESS_TOL};
use nilmoduli_cli::input::read_json;
use nilmoduli_cli::output::{sorted, to_json, to_text};
use nilmoduli_cli::verify::{self, Mutation, Suite};
use nilmoduli_cli::{tables, CliError, Report};

#[derive(Parser)]
#[command(
    name = "nilmoduli",
    version,
    about = "Moduli of left-invariant metrics on six-dimensional nilpotent groups"
)]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    format: Format,
    /// Leave out the wall time so reports compare byte for byte.
    #[arg(long, global = true)]
    no_timing: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Clone, Copy, ValueEnum)]
enum SuiteArg {
    All,
    Algebra,
    Moduli,
    Hermitian,
}

#[derive(Clone, Copy, ValueEnum)]
enum MutationArg {
    SignFlip,
}

#[derive(Subcommand)]
enum Command {
    /// Brackets, nilpotency step, derivations and components of an algebra.
    Describe {
        /// h2, h4, h5, h6, h9, h9hat, or a Salamon string such as "(0,0,0,0,12,34)".
        algebra: String,
    },
    /// Canonical form and automorphism witness of a metric.
    Canonicalize {
        #[arg(long)]
        algebra: String,
        /// JSON file holding a 6×6 matrix.
        #[arg(long)]
        input: String,
        /// Witness tolerance relative to max(1, ‖g‖).
        #[arg(long, default_value_t = WITNESS_TOL)]
        tol: f64,
    },
    /// Isotropy group of a canonical form, with verification.
    Isometry {
        #[arg(long)]
        algebra: String,
        /// Canonical form as JSON, or @file.
        #[arg(long)]
        form: String,
    },
    /// Hermitian structures compatible with a canonical form.
    Hermitian {
        #[arg(long)]
        algebra: String,
        /// Canonical form as JSON, or @file.
        #[arg(long)]
        form: String,
        /// Also run the numeric search.
        #[arg(long)]
        search: bool,
        /// Random starts for the search.
        #[arg(long, default_value_t = 64)]
        budget: usize,
        /// Residual below which the search reports a structure.
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
    },
    /// Regenerates the isotropy and Hermitian tables.
    Tables,
    /// Runs the property suites.
    Verify {
        #[arg(long, value_enum, default_value_t = SuiteArg::All)]
        suite: SuiteArg,
        #[arg(long, env = "NILMODULI_SEED", default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, hide = true)]
        mutate: Option<MutationArg>,
    },
}

fn run(command: Command) -> Result<Report, CliError> {
    match command {
        Command::Describe { algebra } => commands::describe(&algebra),
        Command::Canonicalize { algebra, input, tol } => {
            let text = std::fs::read_to_string(&input)?;
            let value = serde_json::from_str(&text)?;
            commands::canonicalize_metric(&algebra, &value, tol)
        }
        Command::Isometry { algebra, form } => commands::isometry(&algebra, read_json(&form)?),
        Command::Hermitian {
            algebra,
            form,
            search,
            budget,
            tol,
        } => commands::hermitian(&algebra, read_json(&form)?, search.then_some(budget), tol),
        Command::Tables => tables::tables(),
        Command::Verify { suite, seed, mutate } => {
            let suite = match suite {
                SuiteArg::All => Suite::All,
                SuiteArg::Algebra => Suite::Algebra,
                SuiteArg::Moduli => Suite::Moduli,
                SuiteArg::Hermitian => Suite::Hermitian,
            };
            Ok(verify::verify(
                suite,
                seed,
                mutate.map(|MutationArg::SignFlip| Mutation::SignFlip),
            ))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let start = Instant::now();
    let (value, code) = match run(cli.command) {
        Ok(mut report) => {
            if !cli.no_timing {
                report.wall_time_s = Some(start.elapsed().as_secs_f64());
            }
            let code = report.exit_code();
            (sorted(&report), code)
        }
        Err(e) => {
            let error = serde_json::json!({ "error": e.to_string(), "exit_code": e.exit_code(), "schema": nilmoduli_cli::SCHEMA });
            (error, e.exit_code())
        }
    };
    let text = match cli.format {
        Format::Json => to_json(&value) + "\n",
        Format::Text => to_text(&value),
    };
    if code == 0 || code == 1 {
        print!("{text}");
    } else {
        eprint!("{text}");
    }
    ExitCode::from(code as u8)
}
