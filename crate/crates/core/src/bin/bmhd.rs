use clap::{Parser, Subcommand};
use std::path::PathBuf;
use std::process::ExitCode;

use bmhd::harness::{
    load_config, load_sweep_config, run_property_suite, run_single, run_sweep, SuiteOptions,
};
use bmhd::Error;

/// Compressible MHD vs its incompressible limit at large volume viscosity.
///
/// Exit codes: 0 success, 1 failed property, 2 config error, 3 blow-up,
/// 4 I/O error. BMHD_THREADS caps sweep parallelism.
///
/// Config defaults: stepper {dt 0.01, cfl 0.4, t_end 1, norm_stride 1},
/// initial_data {family "taylor-green-mhd", amplitude 0.1, seed 0,
/// density "inverse-kappa", density_scale 1, compressive_fraction 0},
/// outputs {no directory, checkpoint_stride 0, formats [csv, json, gnuplot]},
/// budget {c_universal 1, threshold 0.01}, grid {d 2, L 2π, dealias 2/3}.
#[derive(Parser)]
#[command(name = "bmhd", version)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run the property suite and print the verdict table.
    CheckLp {
        /// Scale the dyadic profile (fault injection).
        #[arg(long, default_value_t = 1.0)]
        profile_scale: f64,
        #[arg(long, default_value_t = 2024)]
        seed: u64,
    },
    /// Run both systems for one configuration.
    Run {
        #[arg(long)]
        config: PathBuf,
    },
    /// Run a κ-sweep.
    Sweep {
        #[arg(long)]
        config: PathBuf,
    },
    /// Summarize a run or sweep output directory.
    Report {
        #[arg(long)]
        dir: PathBuf,
    },
}

fn fail(e: Error) -> ExitCode {
    eprintln!("error: {e}");
    ExitCode::from(e.exit_code() as u8)
}

fn summarize(dir: &std::path::Path) -> Result<(), Error> {
    let sweep = dir.join("sweep_report.json");
    let single = dir.join("report.json");
    let path = if sweep.exists() { sweep } else { single };
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&path)?)?;
    if let Some(members) = v.get("members").and_then(|m| m.as_array()) {
        println!(
            "{:>10} {:>12} {:>12} {:>12} {:>6} {:>6}",
            "kappa", "dev_u", "dev_b", "delta0", "k-chk", "d-chk"
        );
        for m in members {
            let b = &m["budget"];
            println!(
                "{:>10} {:>12} {:>12} {:>12} {:>6} {:>6}",
                m["kappa"],
                m["dev_u_sup"],
                m["dev_b_sup"],
                b["delta0"],
                b["kappa_check"],
                b["delta_check"]
            );
        }
        println!("slope_u = {}", v["slope_u"]);
        println!(
            "strictly decreasing = {}",
            v["deviations_strictly_decreasing"]
        );
        println!("partial = {}", v["partial"]);
    } else {
        for key in [
            "completed",
            "final_time",
            "steps",
            "dev_u_sup",
            "dev_b_sup",
            "z_d_final",
            "x_d_initial",
        ] {
            println!("{key:>14} = {}", v[key]);
        }
        println!("{:>14} = {}", "energy_drift", v["energy"]["max_drift"]);
        println!("{:>14} = {}", "delta0", v["budget"]["delta0"]);
        println!("{:>14} = {}", "blow_up", v["blow_up"]);
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.cmd {
        Cmd::CheckLp {
            profile_scale,
            seed,
        } => {
            let opts = SuiteOptions {
                profile_scale,
                seed,
                ..SuiteOptions::default()
            };
            match run_property_suite(&opts) {
                Ok(r) => {
                    print!("{}", r.table());
                    ExitCode::from(if r.passed { 0 } else { 1 })
                }
                Err(e) => fail(e),
            }
        }
        Cmd::Run { config } => {
            let cfg = match load_config(&config) {
                Ok(c) => c,
                Err(e) => return fail(e),
            };
            match run_single(&cfg) {
                Ok(o) => {
                    let r = &o.report;
                    println!(
                        "t = {} after {} steps; sup|u-U| = {:e}, energy drift = {:e}",
                        r.final_time, r.steps, r.dev_u_sup, r.energy.max_drift
                    );
                    match &r.blow_up {
                        Some(b) => {
                            eprintln!("blow-up at t = {}: {}", b.time, b.reason);
                            ExitCode::from(3)
                        }
                        None => ExitCode::SUCCESS,
                    }
                }
                Err(e) => fail(e),
            }
        }
        Cmd::Sweep { config } => {
            let cfg = match load_sweep_config(&config) {
                Ok(c) => c,
                Err(e) => return fail(e),
            };
            match run_sweep(&cfg) {
                Ok(r) => {
                    for m in &r.members {
                        println!("kappa = {:e}: sup|u-U| = {:e}", m.kappa, m.dev_u_sup);
                    }
                    println!("fitted slope = {:?}", r.slope_u);
                    ExitCode::from(if r.partial { 3 } else { 0 })
                }
                Err(e) => fail(e),
            }
        }
        Cmd::Report { dir } => match summarize(&dir) {
            Ok(()) => ExitCode::SUCCESS,
            Err(e) => fail(e),
        },
    }
}
