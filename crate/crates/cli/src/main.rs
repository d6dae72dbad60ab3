//! `q2sat` — command-line driver for the Q2SAT adiabatic-rotation toolkit.
//!
//! Exit codes: 0 success, 1 usage error, 2 numerical failure (diagnostic on
//! stderr). Zero-flag defaults mirror the reference setting: Δ = 1,
//! β = 1/√2 + 0i, d = 0.1, bin width 0.1, schedule multiplier 1, y axis.

use clap::{Args, Parser, Subcommand};
use q2sat_core::chain::{chain_instance, gap_law_rows, Boundary, ChainSpec};
use q2sat_core::dynamics::{
    default_step_count, evolve_lab, evolve_rotating, schedule_from_gap, EvolutionResult,
};
use q2sat_core::experiments::{
    self, fit_loglog, histogram_inv_sq_gap, paper_samples, run_dynamics_sweep, run_scaling,
    ScalingConfig, SweepConfig,
};
use q2sat_core::hamiltonian::{RotatingHamiltonian, RotationSchedule};
use q2sat_core::holonomy::{compute_holonomy, predict_final_state, unitarity_defect, GaugeSign};
use q2sat_core::instance::{
    generate_instance, instance_to_string, read_instance, write_instance, ClauseParams,
    Q2SATInstance,
};
use q2sat_core::parallel::Parallelism;
use q2sat_core::spectrum::{ground_and_gap, InstanceRecord, Method, SpectrumOptions};
use q2sat_core::state::StateVector;
use q2sat_core::{fmt_f64, C64};
use std::path::{Path, PathBuf};
use std::time::Instant;

#[derive(Parser)]
#[command(name = "q2sat", version, about = "Adiabatic-rotation simulator for identical-clause Q2SAT instances")]
struct Cli {
    /// Worker threads for ensemble commands (0 = all cores). Results are
    /// byte-identical for every setting.
    #[arg(long, global = true, default_value_t = 0)]
    threads: usize,

    /// Output directory for pipeline files (env: Q2SAT_OUTDIR; default ".").
    #[arg(long, global = true, env = "Q2SAT_OUTDIR")]
    out_dir: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct ClauseArgs {
    /// Real part of beta.
    #[arg(long, default_value_t = std::f64::consts::FRAC_1_SQRT_2)]
    beta_re: f64,
    /// Imaginary part of beta.
    #[arg(long, default_value_t = 0.0)]
    beta_im: f64,
    /// Coupling Delta (> 0).
    #[arg(long, default_value_t = 1.0)]
    delta: f64,
}

impl ClauseArgs {
    fn build(&self) -> anyhow::Result<ClauseParams> {
        Ok(ClauseParams::new(C64::new(self.beta_re, self.beta_im), self.delta)?)
    }
}

#[derive(Subcommand)]
enum Command {
    /// Generate a random instance file.
    Gen {
        #[arg(long)]
        n: usize,
        /// Edge probability.
        #[arg(long, default_value_t = 0.1)]
        d: f64,
        #[arg(long)]
        seed: u64,
        #[command(flatten)]
        clause: ClauseArgs,
        /// Output path ("-" for stdout).
        #[arg(long, default_value = "-")]
        out: String,
    },
    /// Ground energy, degeneracy, and gap of an instance (JSON report).
    Spectrum {
        /// Instance file.
        #[arg(long = "in")]
        input: PathBuf,
        /// Solver: auto | dense | iterative.
        #[arg(long, default_value = "auto")]
        method: String,
        /// Also dump the Hamiltonian in coordinate text format to this path.
        #[arg(long)]
        dump_coo: Option<PathBuf>,
    },
    /// Adiabatic rotation from |00…0⟩ with measurement report (JSON).
    Evolve {
        #[arg(long = "in")]
        input: PathBuf,
        /// T = multiplier·π/(50δ²).
        #[arg(long, default_value_t = 1.0)]
        multiplier: f64,
        /// Override the step-count rule.
        #[arg(long)]
        steps: Option<usize>,
        /// Emit k intermediate diagnostics rows.
        #[arg(long, default_value_t = 0)]
        checkpoints: usize,
        /// Integrator frame: lab | rotating.
        #[arg(long, default_value = "lab")]
        frame: String,
    },
    /// Wilczek–Zee gauge matrix, holonomy, and dynamics cross-check (JSON).
    Holonomy {
        #[arg(long = "in")]
        input: PathBuf,
        /// Total rotation time for the cross-check evolution.
        #[arg(long, default_value_t = 1000.0)]
        t_total: f64,
        /// Path-ordering steps (1 = direct exponential).
        #[arg(long, default_value_t = 1)]
        steps: usize,
    },
    /// One-magnon gap-law table for chains (CSV to --out).
    Chain {
        #[arg(long, default_value_t = 8)]
        n_min: usize,
        #[arg(long, default_value_t = 64)]
        n_max: usize,
        /// Step between chain lengths.
        #[arg(long, default_value_t = 4)]
        n_step: usize,
        #[arg(long, default_value_t = std::f64::consts::FRAC_1_SQRT_2)]
        beta: f64,
        #[arg(long, default_value_t = 1.0)]
        delta: f64,
        /// open | periodic.
        #[arg(long, default_value = "periodic")]
        boundary: String,
        /// Output CSV path ("-" for stdout).
        #[arg(long, default_value = "-")]
        out: String,
    },
    /// Gap-scaling ensemble: scaling.csv, scaling_fit.json, scaling_plot.dat.
    Scaling {
        /// Qubit range, e.g. 5..11 (inclusive).
        #[arg(long, default_value = "5..11")]
        n: String,
        #[arg(long, default_value_t = 0.1)]
        d: f64,
        /// Samples per n (omit for desk-scale defaults).
        #[arg(long)]
        samples: Option<usize>,
        /// Use the paper's full ensemble counts (long-running).
        #[arg(long)]
        paper_counts: bool,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[command(flatten)]
        clause: ClauseArgs,
    },
    /// 1/δ² histogram: hist_nXX.csv.
    Hist {
        #[arg(long, default_value_t = 11)]
        n: usize,
        #[arg(long, default_value_t = 2000)]
        samples: usize,
        #[arg(long, default_value_t = 0.1)]
        d: f64,
        #[arg(long, default_value_t = 0.1)]
        bin_width: f64,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[command(flatten)]
        clause: ClauseArgs,
    },
    /// Trivial-probability sweep: dynamics.csv, sweep_plot.dat.
    Sweep {
        /// Qubit range, e.g. 8..10 (inclusive).
        #[arg(long, default_value = "8..10")]
        n: String,
        #[arg(long, default_value_t = 0.1)]
        d: f64,
        /// Gapped instances per n.
        #[arg(long, default_value_t = 50)]
        samples: usize,
        #[arg(long, default_value_t = 1.0)]
        multiplier: f64,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long)]
        steps: Option<usize>,
        /// Largest n accepted (state vectors grow as 2^n).
        #[arg(long, default_value_t = 14)]
        n_cap: usize,
        #[command(flatten)]
        clause: ClauseArgs,
    },
}

fn parse_range(text: &str) -> anyhow::Result<Vec<usize>> {
    if let Some((lo, hi)) = text.split_once("..") {
        let lo: usize = lo.trim().parse()?;
        let hi: usize = hi.trim().trim_start_matches('=').parse()?;
        if hi < lo {
            anyhow::bail!("empty range {text}");
        }
        Ok((lo..=hi).collect())
    } else {
        Ok(vec![text.trim().parse()?])
    }
}

fn out_dir(cli_dir: &Option<PathBuf>) -> PathBuf {
    cli_dir.clone().unwrap_or_else(|| PathBuf::from("."))
}

fn fnv1a(bytes: &[u8]) -> u64 {
    let mut h: u64 = 0xcbf29ce484222325;
    for &b in bytes {
        h ^= b as u64;
        h = h.wrapping_mul(0x100000001b3);
    }
    h
}

fn instance_digest(inst: &Q2SATInstance) -> String {
    format!(
        "n{}m{}seed{}-{:016x}",
        inst.n,
        inst.m(),
        inst.seed,
        fnv1a(instance_to_string(inst).as_bytes())
    )
}

/// Probabilities sorted descending with their ground-basis indices, as JSON.
fn probabilities_json(probs: &[f64]) -> String {
    let mut indexed: Vec<(usize, f64)> = probs.iter().copied().enumerate().collect();
    indexed.sort_by(|a, b| b.1.total_cmp(&a.1).then(a.0.cmp(&b.0)));
    let mut out = String::from("[");
    for (i, (idx, p)) in indexed.iter().enumerate() {
        if i > 0 {
            out.push_str(", ");
        }
        out.push_str(&format!("{{\"basis_index\": {}, \"probability\": {}}}", idx, fmt_f64(*p)));
    }
    out.push(']');
    out
}

fn evolution_report(inst: &Q2SATInstance, result: &EvolutionResult, wall_ms: f64) -> String {
    let mut checkpoints = String::from("[");
    for (i, cp) in result.checkpoints.iter().enumerate() {
        if i > 0 {
            checkpoints.push_str(", ");
        }
        checkpoints.push_str(&format!(
            "{{\"t\": {}, \"norm\": {}, \"energy\": {}, \"leakage\": {}}}",
            fmt_f64(cp.t),
            fmt_f64(cp.norm),
            fmt_f64(cp.energy),
            fmt_f64(cp.leakage)
        ));
    }
    checkpoints.push(']');
    format!(
        "{{\n  \"instance\": \"{}\",\n  \"T\": {},\n  \"steps\": {},\n  \"frame\": \"{}\",\n  \"ground_fidelity\": {},\n  \"trivial_probability\": {},\n  \"probabilities\": {},\n  \"norm_drift\": {},\n  \"wall_time_ms\": {},\n  \"checkpoints\": {}\n}}",
        instance_digest(inst),
        fmt_f64(result.schedule.total_time),
        result.step_count,
        result.frame,
        fmt_f64(result.ground_fidelity),
        fmt_f64(result.trivial_probability),
        probabilities_json(&result.probabilities),
        fmt_f64(result.norm_drift),
        fmt_f64(wall_ms),
        checkpoints
    )
}

fn run(cli: Cli) -> anyhow::Result<()> {
    let workers = Parallelism::from_workers(cli.threads);
    let dir = out_dir(&cli.out_dir);
    match cli.command {
        Command::Gen { n, d, seed, clause, out } => {
            let inst = generate_instance(n, d, clause.build()?, seed)?;
            if out == "-" {
                print!("{}", instance_to_string(&inst));
            } else {
                write_instance(&inst, Path::new(&out))?;
                eprintln!("wrote {out} (n = {}, m = {})", inst.n, inst.m());
            }
        }
        Command::Spectrum { input, method, dump_coo } => {
            let inst = read_instance(&input)?;
            let method = match method.as_str() {
                "auto" => Method::Auto,
                "dense" => Method::DenseSector,
                "iterative" => Method::Deflated,
                other => anyhow::bail!("unknown method `{other}` (auto|dense|iterative)"),
            };
            if let Some(path) = dump_coo {
                let h = q2sat_core::hamiltonian::build_h0(&inst);
                experiments::write_text(&path, &h.to_coo_text())?;
            }
            let t0 = Instant::now();
            let res = ground_and_gap(&inst, &SpectrumOptions::default().with_method(method))?;
            let record =
                InstanceRecord::from_result(&inst, &res, t0.elapsed().as_secs_f64() * 1e3);
            println!("{}", serde_json::to_string_pretty(&record)?);
            if res.ambiguous {
                eprintln!("warning: eigenvalue in the ambiguity band; rerun with tighter tolerances");
            }
        }
        Command::Evolve { input, multiplier, steps, checkpoints, frame } => {
            let inst = read_instance(&input)?;
            let spectrum = ground_and_gap(&inst, &SpectrumOptions::default())?;
            let delta = spectrum
                .gap_delta
                .ok_or_else(|| anyhow::anyhow!("instance has no excited level (m = 0)"))?;
            let sched = schedule_from_gap(delta, multiplier)?;
            let rot = RotatingHamiltonian::new(&inst, sched);
            let psi0 = StateVector::all_zeros(inst.n);
            let t0 = Instant::now();
            let result = match frame.as_str() {
                "lab" => {
                    let steps = steps.unwrap_or_else(|| {
                        default_step_count(sched.total_time, inst.m(), inst.clause.delta, inst.n)
                    });
                    evolve_lab(&rot, &psi0, &spectrum, Some(steps), checkpoints)?
                }
                "rotating" => evolve_rotating(&rot, &psi0, &spectrum, 1 << 10)?,
                other => anyhow::bail!("unknown frame `{other}` (lab|rotating)"),
            };
            println!(
                "{}",
                evolution_report(&inst, &result, t0.elapsed().as_secs_f64() * 1e3)
            );
        }
        Command::Holonomy { input, t_total, steps } => {
            let inst = read_instance(&input)?;
            let spectrum = ground_and_gap(&inst, &SpectrumOptions::default())?;
            let sched = RotationSchedule::y_axis(t_total)?;
            let hol = compute_holonomy(&spectrum.ground_basis, &sched, GaugeSign::FromFrame, steps)?;
            let psi0 = StateVector::all_zeros(inst.n);
            let predicted = predict_final_state(&hol, &psi0, &spectrum.ground_basis)?;
            let rot = RotatingHamiltonian::new(&inst, sched);
            let exact = evolve_rotating(&rot, &psi0, &spectrum, 1 << 10)?;
            let fidelity = predicted.fidelity(&exact.final_state)?;
            let (probs, _) =
                q2sat_core::dynamics::measure_against_basis(&predicted, &spectrum.ground_basis)?;
            println!(
                "{{\n  \"instance\": \"{}\",\n  \"g\": {},\n  \"unitarity_defect\": {},\n  \"fidelity_vs_evolution\": {},\n  \"predicted_probabilities\": {}\n}}",
                instance_digest(&inst),
                spectrum.degeneracy,
                fmt_f64(unitarity_defect(&hol.holonomy)),
                fmt_f64(fidelity),
                probabilities_json(&probs)
            );
        }
        Command::Chain { n_min, n_max, n_step, beta, delta, boundary, out } => {
            let boundary = match boundary.as_str() {
                "open" => Boundary::Open,
                "periodic" => Boundary::Periodic,
                other => anyhow::bail!("unknown boundary `{other}` (open|periodic)"),
            };
            if n_step == 0 {
                anyhow::bail!("n_step must be positive");
            }
            let ns: Vec<usize> = (n_min..=n_max).step_by(n_step).collect();
            let rows = gap_law_rows(&ns, beta, delta, boundary)?;
            let mut csv = String::from("n,beta,boundary,gap\n");
            let bname = if boundary == Boundary::Open { "open" } else { "periodic" };
            for (n, gap) in &rows {
                csv.push_str(&format!("{},{},{},{}\n", n, fmt_f64(beta), bname, fmt_f64(*gap)));
            }
            // Sanity anchor: the n_min chain must agree with the full solver.
            let spec0 = ChainSpec::new(ns[0], beta, delta, boundary)?;
            let _ = chain_instance(&spec0)?;
            if out == "-" {
                print!("{csv}");
            } else {
                experiments::write_text(Path::new(&out), &csv)?;
                eprintln!("wrote {out} ({} rows)", rows.len());
            }
        }
        Command::Scaling { n, d, samples, paper_counts, seed, clause } => {
            let n_values = parse_range(&n)?;
            let mut cfg = ScalingConfig::new(n_values.clone(), d, samples, seed);
            cfg.clause = clause.build()?;
            cfg.workers = workers;
            if paper_counts && samples.is_none() {
                // Full §V protocol: run per n with the published counts.
                let mut records = Vec::new();
                for &nv in &n_values {
                    let mut c = cfg.clone();
                    c.n_values = vec![nv];
                    c.samples_per_n = Some(paper_samples(nv));
                    records.extend(run_scaling(&c)?);
                }
                finish_scaling(&dir, records)?;
            } else {
                let records = run_scaling(&cfg)?;
                finish_scaling(&dir, records)?;
            }
        }
        Command::Hist { n, samples, d, bin_width, seed, clause } => {
            let mut cfg = ScalingConfig::new(vec![n], d, Some(samples), seed);
            cfg.clause = clause.build()?;
            cfg.workers = workers;
            let records = run_scaling(&cfg)?;
            let values: Vec<f64> = records[0].rows.iter().filter_map(|r| r.inv_sq_gap).collect();
            let bins = histogram_inv_sq_gap(&values, bin_width)?;
            let path = dir.join(format!("hist_n{n:02}.csv"));
            experiments::write_text(&path, &experiments::hist_csv(&bins))?;
            eprintln!(
                "wrote {} ({} bins, {} samples, {} excluded)",
                path.display(),
                bins.len(),
                values.len(),
                records[0].excluded_count
            );
        }
        Command::Sweep { n, d, samples, multiplier, seed, steps, n_cap, clause } => {
            let mut cfg = SweepConfig::new(parse_range(&n)?, d, samples, seed);
            cfg.clause = clause.build()?;
            cfg.schedule_multiplier = multiplier;
            cfg.steps_override = steps;
            cfg.workers = workers;
            cfg.n_cap = n_cap;
            let records = run_dynamics_sweep(&cfg)?;
            experiments::write_text(&dir.join("dynamics.csv"), &experiments::dynamics_csv(&records))?;
            experiments::write_text(&dir.join("sweep_plot.dat"), &experiments::sweep_plot_dat(&records))?;
            for rec in &records {
                eprintln!(
                    "n = {}: mean fidelity {:.4}, mean trivial {:.4}, median trivial {:.4} ({} skipped)",
                    rec.n,
                    rec.mean_ground_fidelity,
                    rec.mean_trivial_probability,
                    rec.median_trivial_probability,
                    rec.skipped
                );
            }
            eprintln!("wrote {}", dir.join("dynamics.csv").display());
        }
    }
    Ok(())
}

fn finish_scaling(dir: &Path, records: Vec<experiments::ScalingRecord>) -> anyhow::Result<()> {
    let fit = fit_loglog(&records)?;
    experiments::write_text(&dir.join("scaling.csv"), &experiments::scaling_csv(&records))?;
    experiments::write_text(
        &dir.join("scaling_fit.json"),
        &experiments::scaling_fit_json(&fit, &records),
    )?;
    experiments::write_text(
        &dir.join("scaling_plot.dat"),
        &experiments::scaling_plot_dat(&records, &fit),
    )?;
    eprintln!(
        "slope {:.4}, intercept {:.4}, r {:.4}; wrote {}",
        fit.slope,
        fit.intercept,
        fit.correlation_r,
        dir.join("scaling.csv").display()
    );
    Ok(())
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // Usage problems exit 1; --help/--version print normally.
            use clap::error::ErrorKind;
            match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    print!("{e}");
                    std::process::exit(0);
                }
                _ => {
                    eprint!("{e}");
                    std::process::exit(1);
                }
            }
        }
    };
    if let Err(err) = run(cli) {
        eprintln!("error: {err}");
        std::process::exit(2);
    }
}
