//! `karamata`: run scenarios, project points, estimate indices and predict
//! rate bounds from the command line.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

#[derive(Parser)]
#[command(name = "karamata", version, about = "Convergence rates of fixed-point iterations under Karamata-regular error bounds")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a scenario described by a JSON config.
    Solve {
        #[arg(long)]
        config: PathBuf,
        /// Directory for report.csv and the plot data; without it only the
        /// summary is printed.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Project a point onto a set.
    Project {
        /// JSON descriptor or a short form such as `exp_cone`, `line(0.5)`,
        /// `power_epigraph(2)`.
        #[arg(long)]
        set: String,
        /// Comma-separated coordinates.
        #[arg(long, allow_hyphen_values = true)]
        point: String,
    },
    /// Estimate the index of regular variation at zero.
    RvIndex {
        /// Catalog id (e.g. `power(0.3)`, `sqrt_log2`) or a CSV file of `t,f(t)` rows.
        #[arg(long)]
        function: String,
    },
    /// Tabulate the rate bound R(k) for a catalog regularity function.
    Predict {
        #[arg(long)]
        psi: String,
        #[arg(long, default_value_t = 0.5)]
        alpha: f64,
        #[arg(long, default_value_t = 1.0)]
        nu: f64,
        #[arg(long, default_value_t = 1)]
        s: u64,
        /// Initial distance to the solution set.
        #[arg(long)]
        d0: f64,
        #[arg(long)]
        k_max: u64,
        /// Number of log-spaced k values.
        #[arg(long, default_value_t = 40)]
        points: usize,
    },
    /// Run a catalog scenario and write its report.
    Bench {
        scenario: String,
        /// Scenario parameter, repeatable: `--param theta=0.5`.
        #[arg(long = "param", value_name = "KEY=VALUE")]
        params: Vec<String>,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        max_iter: Option<u64>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Solve { config, out } => commands::solve(&config, out.as_deref()),
        Command::Project { set, point } => commands::project(&set, &point),
        Command::RvIndex { function } => commands::rv_index(&function),
        Command::Predict {
            psi,
            alpha,
            nu,
            s,
            d0,
            k_max,
            points,
        } => commands::predict(&psi, alpha, nu, s, d0, k_max, points),
        Command::Bench {
            scenario,
            params,
            out,
            seed,
            max_iter,
        } => commands::bench(&scenario, &params, &out, seed, max_iter),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {:#}", f.error());
            ExitCode::from(f.code())
        }
    }
}
