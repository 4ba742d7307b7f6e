//! mcmcb: simulate noisy mid-circuit measurements and learn their noise
//! SPAM-robustly through cycle benchmarking on the pattern transfer graph.

mod opts;
mod output;
mod verify;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use mcmcb_core::analysis::{
    characterize, cycle_key, independence_test, reconstruct_error_rate, CorrelationQuery,
};
use mcmcb_core::bits::Bits;
use mcmcb_core::channels::{instrument_to_json, InstrumentData};
use mcmcb_core::error::{CoreError, Result};
use mcmcb_core::graph::{build_ptg, cycle_basis};
use mcmcb_core::model::NoiseModel;
use mcmcb_core::pauli::PauliOp;

use opts::{BudgetOpts, GateOpts, InstrumentOpts};
use output::{fmt17, fmt_opt, out_path, write_csv, write_json, write_plot_data, Meta};

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Parser, Debug)]
#[command(
    name = "mcmcb",
    version,
    about = "Noise characterization for mid-circuit measurements: generalized \
             cycle benchmarking over the pattern transfer graph"
)]
struct Cli {
    /// RNG seed; mandatory for every sampling command.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Worker threads for independent estimations.
    #[arg(long, global = true, default_value_t = 1)]
    workers: usize,
    /// Replace sampling by exact outcome enumeration.
    #[arg(long, global = true)]
    exact: bool,
    /// Output directory for result files.
    #[arg(long, global = true, default_value = ".")]
    out_dir: PathBuf,
    /// Primary report format; JSON is always written, CSV additionally.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Generate a random instrument and write it as JSON.
    Generate {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: usize,
        #[arg(long)]
        eps: f64,
        /// usi | map
        #[arg(long, default_value = "usi")]
        kind: String,
        /// Output file; defaults to instrument.json in the output directory.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Build the pattern transfer graph and its cycle basis.
    Graph {
        #[command(flatten)]
        gate: GateOpts,
    },
    /// Learn the geometric-mean fidelity of every basis cycle.
    Learn {
        #[command(flatten)]
        gate: GateOpts,
        #[command(flatten)]
        instrument: InstrumentOpts,
        #[command(flatten)]
        budget: BudgetOpts,
        /// Concatenate each cycle to roughly this many MCMs per circuit.
        #[arg(long, default_value_t = 12)]
        total_length: usize,
    },
    /// Test measurement/preparation independence via the correlations
    /// c^Q_{0,1,0,1}.
    Independence {
        #[command(flatten)]
        gate: GateOpts,
        #[command(flatten)]
        instrument: InstrumentOpts,
        #[command(flatten)]
        budget: BudgetOpts,
    },
    /// Reconstruct one Pauli error rate p_{a,b}^P from its learnable chain.
    ErrorRate {
        #[command(flatten)]
        gate: GateOpts,
        #[command(flatten)]
        instrument: InstrumentOpts,
        #[command(flatten)]
        budget: BudgetOpts,
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
        #[arg(long)]
        p: String,
        #[arg(long, default_value_t = 10)]
        repetitions: usize,
    },
    /// Run the exact-mode invariant suite; nonzero exit on any failure.
    Verify {
        /// Comma-separated seed list.
        #[arg(long, default_value = "1,2,3,4,5")]
        seeds: String,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if cli.workers > 1 {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(cli.workers)
            .build_global()
        {
            eprintln!("mcmcb: failed to build worker pool: {e}");
            return ExitCode::from(2);
        }
    }
    match run(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("mcmcb: {e}");
            let code = match e {
                CoreError::EstimationFailed(_) => 3,
                _ => 2,
            };
            ExitCode::from(code)
        }
    }
}

fn require_seed(cli: &Cli) -> Result<u64> {
    cli.seed.ok_or_else(|| {
        CoreError::InvalidConfig("--seed is mandatory for sampling commands".into())
    })
}

fn build_model(
    gate: &GateOpts,
    instrument: &InstrumentOpts,
    seed: u64,
) -> Result<(NoiseModel, opts::ResolvedGate, InstrumentData)> {
    let resolved = gate.resolve()?;
    let data = instrument.load(resolved.n, resolved.m, seed)?;
    let spam = instrument.spam(resolved.n + resolved.m, seed)?;
    let model = NoiseModel::new(resolved.gate.clone(), data.usi(), spam)?;
    Ok((model, resolved, data))
}

fn run(cli: &Cli) -> Result<ExitCode> {
    std::fs::create_dir_all(&cli.out_dir)?;
    match &cli.command {
        Command::Generate { n, m, eps, kind, out } => {
            let seed = require_seed(cli)?;
            let opts = InstrumentOpts {
                instrument: None,
                eps: Some(*eps),
                kind: kind.clone(),
                spam_strength: 0.0,
            };
            let data = opts.load(*n, *m, seed)?;
            let file = instrument_to_json(&data);
            let path = out
                .clone()
                .unwrap_or_else(|| out_path(&cli.out_dir, "instrument.json"));
            std::fs::write(&path, serde_json::to_string_pretty(&file)?)?;
            println!("wrote {}", path.display());
            Ok(ExitCode::SUCCESS)
        }
        Command::Graph { gate } => {
            let resolved = gate.resolve()?;
            let g = build_ptg(resolved.gate.tableau(), resolved.n, resolved.m)?;
            let basis = cycle_basis(&g);
            let meta = Meta::new("graph", cli.seed);
            write_json(
                &out_path(&cli.out_dir, "graph.json"),
                &meta,
                &json!({
                    "n": resolved.n,
                    "m": resolved.m,
                    "vertices": g.n_vertices(),
                    "edges": g.to_json_edges(),
                    "cycle_basis_size": basis.len(),
                }),
            )?;
            std::fs::write(out_path(&cli.out_dir, "graph.dot"), g.to_dot())?;
            let cycles: Vec<serde_json::Value> = basis
                .iter()
                .map(|c| {
                    let map: std::collections::BTreeMap<String, f64> = c
                        .iter()
                        .map(|(e, coeff)| (g.edge(e).label.to_string(), coeff))
                        .collect();
                    serde_json::to_value(map).unwrap()
                })
                .collect();
            write_json(
                &out_path(&cli.out_dir, "cycles.json"),
                &meta,
                &json!({ "basis": cycles }),
            )?;
            println!(
                "graph: {} vertices, {} edges, {} basis cycles",
                g.n_vertices(),
                g.n_edges(),
                basis.len()
            );
            Ok(ExitCode::SUCCESS)
        }
        Command::Learn {
            gate,
            instrument,
            budget,
            total_length,
        } => {
            let seed = require_seed(cli)?;
            let (model, resolved, _) = build_model(gate, instrument, seed)?;
            let g = build_ptg(resolved.gate.tableau(), resolved.n, resolved.m)?;
            let result = characterize(
                &model,
                &g,
                &budget.to_budget(),
                seed,
                cli.exact,
                *total_length,
            )?;
            let meta = Meta::new("learn", Some(seed));
            write_json(&out_path(&cli.out_dir, "learn.json"), &meta, &result)?;
            if cli.format == Format::Csv {
                let rows: Vec<Vec<String>> = result
                    .cycles
                    .iter()
                    .map(|c| {
                        vec![
                            cycle_key(&c.edges),
                            fmt_opt(c.geo_mean),
                            fmt17(c.geo_std),
                            fmt_opt(c.log_sum),
                            fmt17(c.log_std),
                            c.length.to_string(),
                            c.directed.to_string(),
                            c.trivial.to_string(),
                            c.failed.to_string(),
                        ]
                    })
                    .collect();
                write_csv(
                    &out_path(&cli.out_dir, "learn.csv"),
                    &[
                        "cycle", "geo_mean", "geo_std", "log_sum", "log_std", "length",
                        "directed", "trivial", "failed",
                    ],
                    &rows,
                )?;
            }
            // Plot data for the learned-cycle figure; the trivially-1 loop is
            // omitted.
            let plot: Vec<(String, f64, f64)> = result
                .cycles
                .iter()
                .filter(|c| !c.trivial && c.geo_mean.is_some())
                .map(|c| (cycle_key(&c.edges), c.geo_mean.unwrap(), c.geo_std))
                .collect();
            write_plot_data(&out_path(&cli.out_dir, "learn_plot.csv"), &plot)?;
            let failed = result.cycles.iter().filter(|c| c.failed).count();
            println!(
                "learned {} cycles ({} failed); reports in {}",
                result.cycles.len(),
                failed,
                cli.out_dir.display()
            );
            if failed > 0 {
                return Ok(ExitCode::from(3));
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Independence {
            gate,
            instrument,
            budget,
        } => {
            let seed = require_seed(cli)?;
            let (model, resolved, _) = build_model(gate, instrument, seed)?;
            if resolved.n != 1 {
                return Err(CoreError::InvalidConfig(
                    "the built-in query set covers one measured ancilla".into(),
                ));
            }
            let g = build_ptg(resolved.gate.tableau(), resolved.n, resolved.m)?;
            let queries = CorrelationQuery::canonical_single_ancilla(resolved.m);
            let rows = independence_test(
                &model,
                &g,
                &queries,
                &budget.to_budget(),
                seed,
                cli.exact,
            )?;
            let meta = Meta::new("independence", Some(seed));
            write_json(&out_path(&cli.out_dir, "independence.json"), &meta, &rows)?;
            if cli.format == Format::Csv {
                let csv_rows: Vec<Vec<String>> = rows
                    .iter()
                    .map(|r| {
                        vec![
                            r.query.key(),
                            fmt_opt(r.value),
                            fmt17(r.std),
                            match r.consistent_with_zero {
                                Some(true) => "consistent".into(),
                                Some(false) => "nonzero".into(),
                                None => "failed".into(),
                            },
                        ]
                    })
                    .collect();
                write_csv(
                    &out_path(&cli.out_dir, "independence.csv"),
                    &["query", "value", "std", "verdict"],
                    &csv_rows,
                )?;
            }
            let plot: Vec<(String, f64, f64)> = rows
                .iter()
                .filter_map(|r| r.value.map(|v| (r.query.key(), v, r.std)))
                .collect();
            write_plot_data(&out_path(&cli.out_dir, "independence_plot.csv"), &plot)?;
            for r in &rows {
                println!(
                    "{}: {} +- {} [{}]",
                    r.query.key(),
                    fmt_opt(r.value),
                    fmt17(r.std),
                    match r.consistent_with_zero {
                        Some(true) => "consistent with 0",
                        Some(false) => "nonzero",
                        None => "failed",
                    }
                );
            }
            if rows.iter().any(|r| r.value.is_none()) {
                return Ok(ExitCode::from(3));
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::ErrorRate {
            gate,
            instrument,
            budget,
            a,
            b,
            p,
            repetitions,
        } => {
            let seed = require_seed(cli)?;
            let (model, resolved, _) = build_model(gate, instrument, seed)?;
            let g = build_ptg(resolved.gate.tableau(), resolved.n, resolved.m)?;
            let a: Bits = a.parse()?;
            let b: Bits = b.parse()?;
            let p: PauliOp = p.parse()?;
            let est = reconstruct_error_rate(
                &a,
                &b,
                &p,
                &model,
                &g,
                &budget.to_budget(),
                seed,
                cli.exact,
                *repetitions,
            )?;
            let meta = Meta::new("error-rate", Some(seed));
            write_json(&out_path(&cli.out_dir, "error_rate.json"), &meta, &est)?;
            if cli.format == Format::Csv {
                write_csv(
                    &out_path(&cli.out_dir, "error_rate.csv"),
                    &["a", "b", "p", "value", "std", "repetitions"],
                    &[vec![
                        a.to_string(),
                        b.to_string(),
                        p.to_string(),
                        fmt_opt(est.value),
                        fmt17(est.std),
                        repetitions.to_string(),
                    ]],
                )?;
            }
            println!(
                "p_{{{a},{b}}}^{p} = {} +- {}",
                fmt_opt(est.value),
                fmt17(est.std)
            );
            if est.failed {
                return Ok(ExitCode::from(3));
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Verify { seeds } => {
            let seeds: Vec<u64> = seeds
                .split(',')
                .map(|s| {
                    s.trim()
                        .parse()
                        .map_err(|_| CoreError::Parse(format!("bad seed {s:?}")))
                })
                .collect::<Result<_>>()?;
            let rows = verify::run_verify(&seeds)?;
            let meta = Meta::new("verify", None);
            write_json(&out_path(&cli.out_dir, "verify.json"), &meta, &rows)?;
            let mut all_pass = true;
            for r in &rows {
                println!(
                    "{} seed={} residual={:.3e} tol={:.0e} {}",
                    r.check,
                    r.seed,
                    r.residual,
                    r.tolerance,
                    if r.pass { "PASS" } else { "FAIL" }
                );
                all_pass &= r.pass;
            }
            if all_pass {
                Ok(ExitCode::SUCCESS)
            } else {
                Ok(ExitCode::from(4))
            }
        }
    }
}
