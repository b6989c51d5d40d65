//! `qvol`: command-line driver for the quantum-invariant verification
//! pipeline.
//!
//! Exit codes: `0` all executed checks passed, `1` a check failed,
//! `2` usage error, `3` numeric/runtime error.

use clap::{Args, Parser, Subcommand, ValueEnum};
use qvol_core::{
    build_quantum_tables, classify, colored_jones, reproduce_appendix, rt_invariant_with,
    run_identity_suite, solve_structure, verify_conjecture_with, Classification, Precision,
    RtOptions, SurgerySpec,
};
use serde::Serialize;
use serde_json::json;
use std::fs;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "qvol", version, about = "Quantum invariants of twist-knot surgeries")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

/// Filling coordinates shared by most subcommands.
#[derive(Args)]
struct SpecArgs {
    /// Filling numerator p (coprime to q)
    #[arg(long)]
    p: i64,
    /// Filling denominator q (nonzero)
    #[arg(long)]
    q: i64,
    /// Twist parameter p′
    #[arg(long)]
    twist: i64,
}

impl SpecArgs {
    fn parse(&self) -> Result<SurgerySpec, String> {
        SurgerySpec::new(self.p, self.q, self.twist).map_err(|e| e.to_string())
    }
}

#[derive(Copy, Clone, ValueEnum)]
enum PrecisionArg {
    Double,
    Extended,
}

#[derive(Subcommand)]
enum Command {
    /// Solve the hyperbolic structure and report volume / Chern-Simons
    Geometry {
        #[command(flatten)]
        spec: SpecArgs,
        /// Emit CSV instead of JSON
        #[arg(long, conflicts_with = "json")]
        csv: bool,
        /// Emit JSON (default)
        #[arg(long)]
        json: bool,
        /// Residual threshold for the pass verdict
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
    },
    /// Evaluate the quantum invariant RT_r at one level
    Rt {
        #[command(flatten)]
        spec: SpecArgs,
        /// Odd level r
        #[arg(long)]
        r: u64,
        /// Scalar backend
        #[arg(long, value_enum, default_value = "double")]
        precision: PrecisionArg,
        /// Worker threads (default: QVOL_THREADS env, else all cores)
        #[arg(long)]
        threads: Option<usize>,
        /// Fixed-tree reduction, bit-identical across thread counts
        #[arg(long)]
        deterministic: bool,
    },
    /// Evaluate one colored Jones value of the twist knot at e^{4πi/r}
    Jones {
        /// Twist parameter p′
        #[arg(long)]
        twist: i64,
        /// Color N
        #[arg(long)]
        color: i64,
        /// Odd level r
        #[arg(long)]
        r: u64,
    },
    /// Run the growth-rate verification over a range of levels
    Verify {
        #[command(flatten)]
        spec: SpecArgs,
        /// Smallest odd level
        #[arg(long)]
        r_min: u64,
        /// Largest odd level
        #[arg(long)]
        r_max: u64,
        /// Write the JSON report to a file instead of stdout
        #[arg(long)]
        out: Option<String>,
        /// Emit the per-level rows as CSV on stdout
        #[arg(long)]
        csv: bool,
        /// Worker threads (default: QVOL_THREADS env, else all cores)
        #[arg(long)]
        threads: Option<usize>,
        /// Fixed-tree reduction, bit-identical across thread counts
        #[arg(long)]
        deterministic: bool,
    },
    /// Run the seeded identity suite
    Identities {
        /// RNG seed
        #[arg(long, default_value_t = 42)]
        seed: u64,
        /// Samples per identity
        #[arg(long, default_value_t = 200)]
        samples: u32,
    },
    /// Reproduce the face-maximization table
    Appendix,
}

fn thread_default(cli_threads: Option<usize>) -> Option<usize> {
    cli_threads.or_else(|| {
        std::env::var("QVOL_THREADS").ok().and_then(|v| v.parse().ok())
    })
}

fn print_json<T: Serialize>(value: &T) -> Result<(), String> {
    let text = serde_json::to_string_pretty(value).map_err(|e| e.to_string())?;
    println!("{text}");
    Ok(())
}

/// `Ok(true)` = pass, `Ok(false)` = a check failed.
fn run(cli: Cli) -> Result<bool, String> {
    match cli.command {
        Command::Geometry { spec, csv, json: _, tol } => {
            let spec = spec.parse()?;
            if let Classification::Exceptional(reason) = classify(&spec) {
                return Err(format!("exceptional filling: {reason}"));
            }
            let sol = solve_structure(&spec).map_err(|e| e.to_string())?;
            let pass = sol.residual < tol;
            if csv {
                println!("volume,cs_mod_pi2,residual,geometric");
                println!("{},{},{},{}", sol.volume, sol.cs, sol.residual, sol.geometric);
            } else {
                print_json(&json!({
                    "spec": spec,
                    "volume": sol.volume,
                    "cs_mod_pi2": sol.cs,
                    "shapes": sol.shapes.iter().map(|z| (z.re, z.im)).collect::<Vec<_>>(),
                    "residual": sol.residual,
                    "geometric": sol.geometric,
                    "pass": pass,
                }))?;
            }
            Ok(pass)
        }
        Command::Rt { spec, r, precision, threads, deterministic } => {
            let spec = spec.parse()?;
            let opts = RtOptions {
                precision: match precision {
                    PrecisionArg::Double => Precision::Double,
                    PrecisionArg::Extended => Precision::Extended,
                },
                threads: thread_default(threads),
                deterministic,
                ..RtOptions::default()
            };
            let value = rt_invariant_with(spec, r, &opts).map_err(|e| e.to_string())?;
            print_json(&json!({
                "spec": spec,
                "r": value.r,
                "re": value.value.re,
                "im": value.value.im,
                "log_abs": value.log_abs,
                "terms_summed": value.terms_summed,
            }))?;
            Ok(true)
        }
        Command::Jones { twist, color, r } => {
            let tables = build_quantum_tables(r).map_err(|e| e.to_string())?;
            let value = colored_jones(&tables, twist, color).map_err(|e| e.to_string())?;
            print_json(&json!({
                "twist": twist,
                "color": color,
                "r": r,
                "re": value.re,
                "im": value.im,
            }))?;
            Ok(true)
        }
        Command::Verify { spec, r_min, r_max, out, csv, threads, deterministic } => {
            let spec = spec.parse()?;
            let opts = RtOptions {
                threads: thread_default(threads),
                deterministic,
                ..RtOptions::default()
            };
            let report =
                verify_conjecture_with(&spec, r_min, r_max, &opts).map_err(|e| e.to_string())?;
            if csv {
                println!("r,re,im,log_abs,growth_rate,seconds");
                for row in &report.rt_rows {
                    println!(
                        "{},{},{},{},{},{}",
                        row.r, row.re, row.im, row.log_abs, row.growth_rate, row.seconds
                    );
                }
            }
            let text = serde_json::to_string_pretty(&report).map_err(|e| e.to_string())?;
            match out {
                Some(path) => fs::write(&path, text).map_err(|e| e.to_string())?,
                None if !csv => println!("{text}"),
                None => {}
            }
            Ok(report.verdict.pass)
        }
        Command::Identities { seed, samples } => {
            let report = run_identity_suite(seed, samples).map_err(|e| e.to_string())?;
            print_json(&report)?;
            Ok(report.all_pass)
        }
        Command::Appendix => {
            let rows = reproduce_appendix().map_err(|e| e.to_string())?;
            let pass = rows.iter().all(|row| {
                let tol = if row.name.starts_with("corner identity") { 1e-10 } else { 1e-3 };
                row.abs_err < tol
            });
            print_json(&json!({ "rows": rows, "pass": pass }))?;
            Ok(pass)
        }
    }
}

fn main() -> ExitCode {
    // clap exits with code 2 on usage errors by itself
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::from(0),
        Ok(false) => ExitCode::from(1),
        Err(message) => {
            eprintln!("qvol: {message}");
            ExitCode::from(3)
        }
    }
}
