//! Command-line front end: manifest verification, coefficient fitting,
//! deformations and the construction pipeline, with deterministic
//! machine-readable reports.
//!
//! Exit codes: 0 all checks pass, 1 at least one check failed, 2 input error.

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use spaceform_cli::pipeline::{cmd_construct, cmd_deform, cmd_fit, cmd_verify, Suite, VerifyOptions};
use spaceform_cli::registry;
use spaceform_cli::report::Report;
use spaceform_core::fit::FitGauge;

#[derive(Parser)]
#[command(
    name = "spaceform",
    version,
    about = "Exact verification engine for contact metric geometry"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct OutputArgs {
    /// Write the JSON report to this path.
    #[arg(long)]
    out: Option<std::path::PathBuf>,
    /// Print the JSON report instead of the text summary.
    #[arg(long)]
    json: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Run the full verification pipeline on a manifest.
    Verify {
        /// Bundled manifest name or path to a manifest file.
        manifest: String,
        /// Check group: all, structure, curvature, fit, identities, ricci.
        #[arg(long, default_value = "all")]
        suite: String,
        /// Comma-separated rational values for the last coordinate,
        /// overriding the manifest sample points.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        points: Option<Vec<String>>,
        /// Worker threads for per-point checks.
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Fit the six coefficient functions pointwise and print the tables.
    Fit {
        manifest: String,
        /// Gauge: auto, none or three-d-reduced.
        #[arg(long, default_value = "auto")]
        gauge: String,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        points: Option<Vec<String>>,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Apply a D_a-homothetic deformation.
    Deform {
        /// Manifest to deform at its sample points.
        manifest: Option<String>,
        /// Deform bare parameters instead: --km KAPPA MU.
        #[arg(long, num_args = 2, value_names = ["KAPPA", "MU"], allow_hyphen_values = true)]
        km: Option<Vec<String>>,
        /// Deformation scale a > 0.
        #[arg(long, allow_hyphen_values = true)]
        a: Option<String>,
        /// Choose a = (kappa-1)/(mu-2) automatically.
        #[arg(long)]
        auto: bool,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Run the construction pipeline for a target f6 > -1.
    Construct {
        #[arg(long, allow_hyphen_values = true)]
        f6: String,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// List the bundled manifests.
    List,
}

fn emit(report: &Report, output: &OutputArgs) -> std::io::Result<()> {
    if output.json {
        print!("{}", report.to_json());
    } else {
        print!("{}", report.render_text());
    }
    if let Some(path) = &output.out {
        std::fs::write(path, report.to_json())?;
    }
    Ok(())
}

fn run() -> Result<ExitCode, String> {
    let cli = Cli::parse();
    let (report, output) = match cli.command {
        Command::Verify {
            manifest,
            suite,
            points,
            jobs,
            output,
        } => {
            let m = registry::load_manifest(&manifest).map_err(|e| e.to_string())?;
            let opts = VerifyOptions {
                suite: Suite::parse(&suite).map_err(|e| e.to_string())?,
                points_override: points,
                jobs: jobs.max(1),
            };
            (cmd_verify(&m, &opts).map_err(|e| e.to_string())?, output)
        }
        Command::Fit {
            manifest,
            gauge,
            points,
            jobs,
            output,
        } => {
            let m = registry::load_manifest(&manifest).map_err(|e| e.to_string())?;
            let gauge = match gauge.as_str() {
                "auto" => None,
                "none" => Some(FitGauge::None),
                "three-d-reduced" | "three_d_reduced" => Some(FitGauge::ThreeDReduced),
                other => return Err(format!("--gauge: unknown gauge `{other}`")),
            };
            let opts = VerifyOptions {
                suite: Suite::All,
                points_override: points,
                jobs: jobs.max(1),
            };
            (cmd_fit(&m, gauge, &opts).map_err(|e| e.to_string())?, output)
        }
        Command::Deform {
            manifest,
            km,
            a,
            auto,
            output,
        } => {
            let m = match &manifest {
                Some(spec) => Some(registry::load_manifest(spec).map_err(|e| e.to_string())?),
                None => None,
            };
            let km_pair = km.map(|v| (v[0].clone(), v[1].clone()));
            (
                cmd_deform(m.as_ref(), km_pair, a, auto).map_err(|e| e.to_string())?,
                output,
            )
        }
        Command::Construct { f6, output } => {
            (cmd_construct(&f6).map_err(|e| e.to_string())?, output)
        }
        Command::List => {
            for name in registry::BUILTIN_NAMES {
                let m = registry::load_manifest(name).map_err(|e| e.to_string())?;
                let blurb = m.description.unwrap_or_default();
                println!("{name}: {blurb}");
            }
            return Ok(ExitCode::SUCCESS);
        }
    };
    emit(&report, &output).map_err(|e| format!("cannot write report: {e}"))?;
    Ok(if report.has_failures() {
        ExitCode::from(1)
    } else {
        ExitCode::SUCCESS
    })
}

fn main() -> ExitCode {
    match run() {
        Ok(code) => code,
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
    }
}
