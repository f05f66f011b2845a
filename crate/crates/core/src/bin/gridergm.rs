use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Result;
use clap::{Args, Parser, Subcommand};
use grid_ergm::estimator::EEConfig;
use grid_ergm::model::{ModelKind, PARAMETER_NAMES};
use grid_ergm::pipeline::{cmd_analyze, cmd_closed_form, cmd_estimate, cmd_sample};
use grid_ergm::sampler::SamplerConfig;

#[derive(Parser)]
#[command(name = "gridergm", version, about = "Synthetic grid topologies from connected-graph ERG models")]
struct Cli {
    /// Output directory.
    #[arg(long, global = true, env = "GRIDERGM_OUT_DIR", default_value = "out")]
    out: PathBuf,

    /// Keep branches whose status column is 0.
    #[arg(long, global = true, default_value_t = true, action = clap::ArgAction::Set)]
    include_oos_branches: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Statistics row and graph manifest for a case.
    Analyze { input: PathBuf },
    /// Equilibrium-expectation parameter estimation.
    Estimate {
        input: PathBuf,
        #[command(flatten)]
        ee: EstimateArgs,
    },
    /// Ensemble generation from fixed parameters.
    Sample {
        /// Reference case (.m) or graph manifest.
        reference: PathBuf,
        /// Parameter file written by `estimate` or `closed-form`.
        beta: PathBuf,
        #[command(flatten)]
        sampler: SampleArgs,
    },
    /// Exact parameters of the edges-only model.
    ClosedForm { input: PathBuf },
}

#[derive(Args)]
struct EstimateArgs {
    /// Total chain steps.
    #[arg(long = "T", default_value_t = 20_000_000, value_parser = clap::value_parser!(u64).range(1..))]
    steps: u64,
    #[arg(long, default_value_t = 0.001)]
    alpha: f64,
    #[arg(long, default_value_t = 0.001)]
    c: f64,
    #[arg(long, default_value_t = 100, value_parser = clap::value_parser!(u64).range(1..))]
    theta: u64,
    #[arg(long = "burn-in", default_value_t = 0.75)]
    burn_in: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = ModelKind::Full)]
    model: ModelKind,
    #[arg(long)]
    enforce_triangle_sign: bool,
}

#[derive(Args)]
struct SampleArgs {
    #[arg(long, default_value_t = 20_000_000, value_parser = clap::value_parser!(u64).range(1..))]
    steps: u64,
    #[arg(long, default_value_t = 1100)]
    max_samples: usize,
    /// Thinning threshold as a multiple of n on the edge-difference scale.
    #[arg(long, default_value_t = 1.0)]
    thin: f64,
    #[arg(long, default_value_t = 1)]
    chains: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

fn run(cli: Cli) -> Result<()> {
    let oos = cli.include_oos_branches;
    match cli.command {
        Command::Analyze { input } => {
            let out = cmd_analyze(&input, &cli.out, oos)?;
            let r = out.report;
            println!("n={} m={} t1={} t2={} C={:.4} APL={:.4} lambda2={:.4}", r.n, r.m, r.triangles, r.two_triangles, r.clustering, r.average_path_length, r.algebraic_connectivity);
            println!("wrote {} and {}", out.report_path.display(), out.manifest_path.display());
        }
        Command::Estimate { input, ee } => {
            let cfg = EEConfig {
                steps: ee.steps,
                alpha: ee.alpha,
                c: ee.c,
                theta: ee.theta,
                burn_in_fraction: ee.burn_in,
                enforce_triangle_sign: ee.enforce_triangle_sign,
                seed: ee.seed,
                model: ee.model,
            };
            let out = cmd_estimate(&input, &cli.out, &cfg, oos)?;
            let c = out.trace.counters;
            println!("accepted {:.3}% of proposals", 100.0 * c.acceptance_rate());
            println!("rejected {:.3}% of proposals for disconnection", 100.0 * c.connectivity_rejection_rate());
            for (name, b) in PARAMETER_NAMES.iter().zip(out.trace.estimate.0) {
                println!("{name} = {b:.4}");
            }
            println!("wrote {} and {}", out.trace_path.display(), out.parameters_path.display());
        }
        Command::Sample { reference, beta, sampler } => {
            let cfg = SamplerConfig {
                steps: sampler.steps,
                thinning_multiplier: sampler.thin,
                max_samples: sampler.max_samples,
                seed: sampler.seed,
            };
            let out = cmd_sample(&reference, &beta, &cli.out, &cfg, sampler.chains, oos)?;
            let (mean, std) = (out.summary.mean, out.summary.std);
            println!("{} samples", out.ensemble.len());
            println!("m = {:.2} ({:.2}), C = {:.4} ({:.4}), APL = {:.3} ({:.3})", mean.m, std.m, mean.clustering, std.clustering, mean.average_path_length, std.average_path_length);
            println!("wrote {}", out.out_dir.display());
        }
        Command::ClosedForm { input } => {
            let out = cmd_closed_form(&input, &cli.out, oos)?;
            for (k, name) in PARAMETER_NAMES[..6].iter().enumerate() {
                println!("{name} = {:.4} (target {})", out.beta[k], out.targets[k]);
            }
            println!("wrote {} and {}", out.parameters_path.display(), out.table_path.display());
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
