//! Ensemble drivers: gap-scaling statistics, the 1/δ² histogram, and
//! trivial-probability sweeps, with deterministic parallel execution and
//! plot-ready output files (floats at 17 significant digits).

use crate::dynamics::{default_step_count, evolve_lab, schedule_from_gap};
use crate::hamiltonian::RotatingHamiltonian;
use crate::instance::{generate_instance, ClauseParams};
use crate::parallel::{map_indexed, Parallelism};
use crate::spectrum::{ground_and_gap, SpectrumOptions};
use crate::state::StateVector;
use crate::{fmt_f64, Error, Result};
use std::io::Write;
use std::path::Path;

/// Desk-scale default sample counts (minutes, not days).
pub fn default_samples(n: usize) -> usize {
    match n {
        0..=11 => 500,
        12 | 13 => 100,
        _ => 30,
    }
}

/// The paper's §V ensemble protocol counts (long-running).
pub fn paper_samples(n: usize) -> usize {
    match n {
        0..=11 => 10_000,
        12..=14 => 1_000,
        _ => 100,
    }
}

#[derive(Debug, Clone)]
pub struct ScalingConfig {
    pub n_values: Vec<usize>,
    pub d: f64,
    /// Samples per n; `None` uses [`default_samples`].
    pub samples_per_n: Option<usize>,
    pub clause: ClauseParams,
    pub base_seed: u64,
    pub workers: Parallelism,
    pub spectrum: SpectrumOptions,
}

impl ScalingConfig {
    pub fn new(n_values: Vec<usize>, d: f64, samples_per_n: Option<usize>, base_seed: u64) -> Self {
        ScalingConfig {
            n_values,
            d,
            samples_per_n,
            clause: ClauseParams::symmetric(),
            base_seed,
            workers: Parallelism::Auto,
            spectrum: SpectrumOptions::default().gap_only(),
        }
    }
}

/// One instance of a scaling ensemble. Excluded instances (no edges, or gap
/// below the exclusion threshold) keep their row with empty gap fields.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleRow {
    pub seed: u64,
    pub m: usize,
    pub degeneracy: usize,
    pub gap_delta: Option<f64>,
    pub inv_sq_gap: Option<f64>,
}

#[derive(Debug, Clone)]
pub struct ScalingRecord {
    pub n: usize,
    pub sample_count: usize,
    /// Arithmetic mean of 1/δ² over included samples (the paper averages the
    /// inverse square, never 1/⟨δ⟩²); None when everything was excluded.
    pub mean_inv_sq_gap: Option<f64>,
    pub excluded_count: usize,
    pub rows: Vec<SampleRow>,
}

/// Generates `samples` instances per n with seeds base_seed + index, computes
/// per-instance gaps sector-iteratively, and averages 1/δ². Deterministic for
/// any worker count: results merge in (n, index) order.
pub fn run_scaling(config: &ScalingConfig) -> Result<Vec<ScalingRecord>> {
    if !(0.0..=1.0).contains(&config.d) {
        return Err(Error::invalid(format!("d = {} outside [0, 1]", config.d)));
    }
    let mut tasks = Vec::new();
    for &n in &config.n_values {
        let samples = config.samples_per_n.unwrap_or_else(|| default_samples(n));
        if samples == 0 {
            return Err(Error::invalid("samples_per_n must be at least 1"));
        }
        for i in 0..samples {
            tasks.push((n, config.base_seed + i as u64));
        }
    }
    let clause = config.clause;
    let d = config.d;
    let spectrum_opts = config.spectrum.gap_only();
    let results: Vec<Result<(usize, SampleRow)>> = map_indexed(tasks, config.workers, move |(n, seed)| {
        let inst = generate_instance(n, d, clause, seed)?;
        let res = ground_and_gap(&inst, &spectrum_opts)?;
        let inv = res.inverse_square_gap().ok();
        Ok((
            n,
            SampleRow {
                seed,
                m: inst.m(),
                degeneracy: res.degeneracy,
                gap_delta: if inv.is_some() { res.gap_delta } else { None },
                inv_sq_gap: inv,
            },
        ))
    });

    let mut records: Vec<ScalingRecord> = config
        .n_values
        .iter()
        .map(|&n| ScalingRecord {
            n,
            sample_count: config.samples_per_n.unwrap_or_else(|| default_samples(n)),
            mean_inv_sq_gap: None,
            excluded_count: 0,
            rows: Vec::new(),
        })
        .collect();
    let index_of: std::collections::HashMap<usize, usize> =
        config.n_values.iter().enumerate().map(|(i, &n)| (n, i)).collect();

    for item in results {
        let (n, row) = item?;
        let rec = &mut records[index_of[&n]];
        if row.inv_sq_gap.is_none() {
            rec.excluded_count += 1;
        }
        rec.rows.push(row);
    }
    for rec in &mut records {
        let included: Vec<f64> = rec.rows.iter().filter_map(|r| r.inv_sq_gap).collect();
        if !included.is_empty() {
            rec.mean_inv_sq_gap = Some(included.iter().sum::<f64>() / included.len() as f64);
        }
    }
    Ok(records)
}

#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct FitResult {
    pub slope: f64,
    pub intercept: f64,
    pub correlation_r: f64,
}

/// Ordinary least squares on explicit (x, y) points with the Pearson r.
pub fn fit_loglog_xy(points: &[(f64, f64)]) -> Result<FitResult> {
    let distinct = {
        let mut xs: Vec<f64> = points.iter().map(|p| p.0).collect();
        xs.sort_by(f64::total_cmp);
        xs.dedup_by(|a, b| (*a - *b).abs() < 1e-15);
        xs.len()
    };
    if distinct < 2 {
        return Err(Error::invalid(format!(
            "least-squares fit needs at least 2 distinct x values, got {distinct}"
        )));
    }
    let n = points.len() as f64;
    let sx: f64 = points.iter().map(|p| p.0).sum();
    let sy: f64 = points.iter().map(|p| p.1).sum();
    let sxx: f64 = points.iter().map(|p| p.0 * p.0).sum();
    let syy: f64 = points.iter().map(|p| p.1 * p.1).sum();
    let sxy: f64 = points.iter().map(|p| p.0 * p.1).sum();
    let cov = sxy - sx * sy / n;
    let var_x = sxx - sx * sx / n;
    let var_y = syy - sy * sy / n;
    let slope = cov / var_x;
    let intercept = (sy - slope * sx) / n;
    let correlation_r = if var_y <= 0.0 {
        1.0 // exactly collinear data (all residuals zero)
    } else {
        cov / (var_x * var_y).sqrt()
    };
    Ok(FitResult { slope, intercept, correlation_r })
}

/// log⟨1/δ²⟩ against log n, unweighted across n (the paper does not state a
/// weighting; noted in the project docs).
pub fn fit_loglog(records: &[ScalingRecord]) -> Result<FitResult> {
    let points: Vec<(f64, f64)> = records
        .iter()
        .filter_map(|r| r.mean_inv_sq_gap.map(|m| ((r.n as f64).ln(), m.ln())))
        .collect();
    fit_loglog_xy(&points)
}

/// Right-closed histogram bin (lo, hi].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HistBin {
    pub lo: f64,
    pub hi: f64,
    pub count: usize,
}

/// Bins samples into right-closed intervals (j·w, (j+1)·w]; the full range
/// between the smallest and largest occupied bin is emitted (empty bins
/// included), so counts sum to the sample count and the file plots directly.
pub fn histogram_inv_sq_gap(samples: &[f64], bin_width: f64) -> Result<Vec<HistBin>> {
    if !(bin_width > 0.0) {
        return Err(Error::invalid(format!("bin width {bin_width} must be positive")));
    }
    if samples.is_empty() {
        return Ok(Vec::new());
    }
    let index = |x: f64| ((x / bin_width).ceil() as i64 - 1).max(-1);
    let (mut lo_idx, mut hi_idx) = (i64::MAX, i64::MIN);
    for &x in samples {
        let i = index(x);
        lo_idx = lo_idx.min(i);
        hi_idx = hi_idx.max(i);
    }
    let mut counts = vec![0usize; (hi_idx - lo_idx + 1) as usize];
    for &x in samples {
        counts[(index(x) - lo_idx) as usize] += 1;
    }
    Ok(counts
        .into_iter()
        .enumerate()
        .map(|(k, count)| {
            let j = lo_idx + k as i64;
            HistBin {
                lo: j as f64 * bin_width,
                hi: (j + 1) as f64 * bin_width,
                count,
            }
        })
        .collect())
}

#[derive(Debug, Clone)]
pub struct SweepConfig {
    pub n_values: Vec<usize>,
    pub d: f64,
    /// Valid (gapped) instances collected per n.
    pub samples_per_n: usize,
    pub clause: ClauseParams,
    pub base_seed: u64,
    /// T = multiplier·π/(50δ²); 1 reproduces the paper's schedule.
    pub schedule_multiplier: f64,
    pub steps_override: Option<usize>,
    pub workers: Parallelism,
    /// Refuse n beyond this (state vectors grow as 2ⁿ).
    pub n_cap: usize,
}

impl SweepConfig {
    pub fn new(n_values: Vec<usize>, d: f64, samples_per_n: usize, base_seed: u64) -> Self {
        SweepConfig {
            n_values,
            d,
            samples_per_n,
            clause: ClauseParams::symmetric(),
            base_seed,
            schedule_multiplier: 1.0,
            steps_override: None,
            workers: Parallelism::Auto,
            n_cap: 14,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DynamicsRow {
    pub n: usize,
    pub seed: u64,
    pub m: usize,
    pub degeneracy: usize,
    pub total_time: f64,
    pub steps: usize,
    pub ground_fidelity: f64,
    pub trivial_probability: f64,
}

#[derive(Debug, Clone)]
pub struct SweepRecord {
    pub n: usize,
    pub rows: Vec<DynamicsRow>,
    /// Seeds skipped because the instance had no usable gap.
    pub skipped: usize,
    pub mean_ground_fidelity: f64,
    pub mean_trivial_probability: f64,
    pub median_trivial_probability: f64,
}

/// Per instance: spectrum → T = multiplier·π/(50δ²) → RK4 evolution from
/// |00…0⟩ → trivial probability and ground fidelity. Seeds advance from
/// base_seed until `samples_per_n` gapped instances are collected.
pub fn run_dynamics_sweep(config: &SweepConfig) -> Result<Vec<SweepRecord>> {
    for &n in &config.n_values {
        if n > config.n_cap {
            return Err(Error::Guard {
                what: "dynamics sweep n",
                got: n,
                limit: config.n_cap,
                advice: "raise n_cap explicitly if you accept the 2^n state cost",
            });
        }
    }
    let mut out = Vec::with_capacity(config.n_values.len());
    for &n in &config.n_values {
        // Select usable seeds first (cheap gap-only solves, sequential and
        // deterministic), then evolve the survivors in parallel.
        let mut chosen = Vec::with_capacity(config.samples_per_n);
        let mut skipped = 0usize;
        let mut offset = 0u64;
        let attempt_cap = (config.samples_per_n as u64) * 50;
        while chosen.len() < config.samples_per_n && offset < attempt_cap {
            let seed = config.base_seed + offset;
            offset += 1;
            let inst = generate_instance(n, config.d, config.clause, seed)?;
            let gap_probe = ground_and_gap(&inst, &SpectrumOptions::default().gap_only())?;
            if gap_probe.inverse_square_gap().is_ok() {
                chosen.push(seed);
            } else {
                skipped += 1;
            }
        }
        if chosen.len() < config.samples_per_n {
            return Err(Error::invalid(format!(
                "n = {n}: only {} gapped instances in {attempt_cap} seeds (d too small?)",
                chosen.len()
            )));
        }

        let clause = config.clause;
        let d = config.d;
        let multiplier = config.schedule_multiplier;
        let steps_override = config.steps_override;
        let rows: Vec<Result<DynamicsRow>> = map_indexed(chosen, config.workers, move |seed| {
            let run = || -> Result<DynamicsRow> {
                let inst = generate_instance(n, d, clause, seed)?;
                let spectrum = ground_and_gap(&inst, &SpectrumOptions::default())?;
                let delta = spectrum
                    .gap_delta
                    .ok_or_else(|| Error::ZeroGap(0.0))?;
                let sched = schedule_from_gap(delta, multiplier)?;
                let rot = RotatingHamiltonian::new(&inst, sched);
                let psi0 = StateVector::all_zeros(n);
                let steps = steps_override
                    .unwrap_or_else(|| default_step_count(sched.total_time, inst.m(), clause.delta, n));
                let result = evolve_lab(&rot, &psi0, &spectrum, Some(steps), 0)?;
                Ok(DynamicsRow {
                    n,
                    seed,
                    m: inst.m(),
                    degeneracy: spectrum.degeneracy,
                    total_time: sched.total_time,
                    steps,
                    ground_fidelity: result.ground_fidelity,
                    trivial_probability: result.trivial_probability,
                })
            };
            run().map_err(|e| Error::invalid(format!("n = {n}, seed = {seed}: {e}")))
        });
        let rows: Vec<DynamicsRow> = rows.into_iter().collect::<Result<_>>()?;

        let mean_fid = rows.iter().map(|r| r.ground_fidelity).sum::<f64>() / rows.len() as f64;
        let mean_triv =
            rows.iter().map(|r| r.trivial_probability).sum::<f64>() / rows.len() as f64;
        let mut trivs: Vec<f64> = rows.iter().map(|r| r.trivial_probability).collect();
        trivs.sort_by(f64::total_cmp);
        let median = trivs[trivs.len() / 2];
        out.push(SweepRecord {
            n,
            rows,
            skipped,
            mean_ground_fidelity: mean_fid,
            mean_trivial_probability: mean_triv,
            median_trivial_probability: median,
        });
    }
    Ok(out)
}

fn opt_f64(x: Option<f64>) -> String {
    x.map(fmt_f64).unwrap_or_default()
}

/// `scaling.csv`: n, seed, m, gap, inv_sq_gap, degeneracy (one row per
/// sample, excluded rows with empty gap fields).
pub fn scaling_csv(records: &[ScalingRecord]) -> String {
    let mut out = String::from("n,seed,m,gap,inv_sq_gap,degeneracy\n");
    for rec in records {
        for row in &rec.rows {
            out.push_str(&format!(
                "{},{},{},{},{},{}\n",
                rec.n,
                row.seed,
                row.m,
                opt_f64(row.gap_delta),
                opt_f64(row.inv_sq_gap),
                row.degeneracy
            ));
        }
    }
    out
}

/// `scaling_fit.json`: slope, intercept, r, included sample count, exclusions.
pub fn scaling_fit_json(fit: &FitResult, records: &[ScalingRecord]) -> String {
    let included: usize = records.iter().map(|r| r.rows.len() - r.excluded_count).sum();
    let excluded: usize = records.iter().map(|r| r.excluded_count).sum();
    let mut per_n = String::new();
    for (i, rec) in records.iter().enumerate() {
        if i > 0 {
            per_n.push_str(", ");
        }
        per_n.push_str(&format!(
            "{{\"n\": {}, \"mean_inv_sq_gap\": {}, \"excluded\": {}}}",
            rec.n,
            rec.mean_inv_sq_gap.map(fmt_f64).unwrap_or_else(|| "null".into()),
            rec.excluded_count
        ));
    }
    format!(
        "{{\n  \"slope\": {},\n  \"intercept\": {},\n  \"r\": {},\n  \"samples\": {},\n  \"exclusions\": {},\n  \"per_n\": [{}]\n}}\n",
        fmt_f64(fit.slope),
        fmt_f64(fit.intercept),
        fmt_f64(fit.correlation_r),
        included,
        excluded,
        per_n
    )
}

/// `hist_nXX.csv`: bin_lo, bin_hi, count.
pub fn hist_csv(bins: &[HistBin]) -> String {
    let mut out = String::from("bin_lo,bin_hi,count\n");
    for b in bins {
        out.push_str(&format!("{},{},{}\n", fmt_f64(b.lo), fmt_f64(b.hi), b.count));
    }
    out
}

/// `dynamics.csv`: n, seed, T, steps, ground_fidelity, trivial_probability.
pub fn dynamics_csv(records: &[SweepRecord]) -> String {
    let mut out = String::from("n,seed,T,steps,ground_fidelity,trivial_probability\n");
    for rec in records {
        for row in &rec.rows {
            out.push_str(&format!(
                "{},{},{},{},{},{}\n",
                row.n,
                row.seed,
                fmt_f64(row.total_time),
                row.steps,
                fmt_f64(row.ground_fidelity),
                fmt_f64(row.trivial_probability)
            ));
        }
    }
    out
}

/// Gnuplot-ready scaling data: log n, log⟨1/δ²⟩, fitted line.
pub fn scaling_plot_dat(records: &[ScalingRecord], fit: &FitResult) -> String {
    let mut out = String::from("# log_n log_mean_inv_sq_gap fit\n");
    for rec in records {
        if let Some(mean) = rec.mean_inv_sq_gap {
            let x = (rec.n as f64).ln();
            out.push_str(&format!(
                "{} {} {}\n",
                fmt_f64(x),
                fmt_f64(mean.ln()),
                fmt_f64(fit.slope * x + fit.intercept)
            ));
        }
    }
    out
}

/// Gnuplot-ready sweep aggregates: n, mean fidelity, mean/median trivial
/// probability.
pub fn sweep_plot_dat(records: &[SweepRecord]) -> String {
    let mut out =
        String::from("# n mean_ground_fidelity mean_trivial_probability median_trivial_probability\n");
    for rec in records {
        out.push_str(&format!(
            "{} {} {} {}\n",
            rec.n,
            fmt_f64(rec.mean_ground_fidelity),
            fmt_f64(rec.mean_trivial_probability),
            fmt_f64(rec.median_trivial_probability)
        ));
    }
    out
}

pub fn write_text(path: &Path, text: &str) -> Result<()> {
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            std::fs::create_dir_all(parent)?;
        }
    }
    let mut f = std::fs::File::create(path)?;
    f.write_all(text.as_bytes())?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fit_recovers_exact_linear_data() {
        // Synthetic points on the paper's fit line: slope and intercept are
        // recovered exactly and r = 1.
        let pts: Vec<(f64, f64)> = (5..=11)
            .map(|n| {
                let x = (n as f64).ln();
                (x, 3.8634 * x - 7.2048)
            })
            .collect();
        let fit = fit_loglog_xy(&pts).unwrap();
        assert!((fit.slope - 3.8634).abs() < 1e-12);
        assert!((fit.intercept + 7.2048).abs() < 1e-12);
        assert!((fit.correlation_r - 1.0).abs() < 1e-12);
    }

    #[test]
    fn two_points_give_unit_correlation() {
        let fit = fit_loglog_xy(&[(0.0, 1.0), (1.0, 3.0)]).unwrap();
        assert!((fit.correlation_r - 1.0).abs() < 1e-12);
        let fit = fit_loglog_xy(&[(0.0, 3.0), (1.0, 1.0)]).unwrap();
        assert!((fit.correlation_r + 1.0).abs() < 1e-12);
        assert!(fit_loglog_xy(&[(1.0, 1.0)]).is_err());
        assert!(fit_loglog_xy(&[(1.0, 1.0), (1.0, 2.0)]).is_err());
    }

    /// Closed-form least-squares oracle on random synthetic data.
    #[test]
    fn fit_matches_normal_equations_oracle() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..20 {
            let pts: Vec<(f64, f64)> = (0..12)
                .map(|i| (i as f64 * 0.3 + rng.gen::<f64>(), rng.gen::<f64>() * 4.0 - 2.0))
                .collect();
            let fit = fit_loglog_xy(&pts).unwrap();
            let n = pts.len() as f64;
            let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
            let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
            let cov: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
            let vx: f64 = pts.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
            let vy: f64 = pts.iter().map(|p| (p.1 - my) * (p.1 - my)).sum();
            assert!((fit.slope - cov / vx).abs() < 1e-12);
            assert!((fit.intercept - (my - cov / vx * mx)).abs() < 1e-12);
            assert!((fit.correlation_r - cov / (vx * vy).sqrt()).abs() < 1e-12);
        }
    }

    #[test]
    fn histogram_examples() {
        let bins = histogram_inv_sq_gap(&[0.05, 0.15, 0.15], 0.1).unwrap();
        assert_eq!(bins.len(), 2);
        assert!((bins[0].lo - 0.0).abs() < 1e-15 && (bins[0].hi - 0.1).abs() < 1e-15);
        assert_eq!(bins[0].count, 1);
        assert_eq!(bins[1].count, 2);

        assert!(histogram_inv_sq_gap(&[], 0.1).unwrap().is_empty());
        assert!(histogram_inv_sq_gap(&[1.0], 0.0).is_err());

        // Right-closed: a sample exactly on a bin edge belongs below.
        let bins = histogram_inv_sq_gap(&[0.1, 0.1000001], 0.1).unwrap();
        assert_eq!(bins[0].count, 1);
        assert_eq!(bins[1].count, 1);
    }

    #[test]
    fn histogram_counts_are_permutation_invariant() {
        let a = [3.7, 0.2, 1.1, 1.1, 0.9, 2.6];
        let mut b = a;
        b.reverse();
        let ha = histogram_inv_sq_gap(&a, 0.25).unwrap();
        let hb = histogram_inv_sq_gap(&b, 0.25).unwrap();
        assert_eq!(ha, hb);
        let total: usize = ha.iter().map(|x| x.count).sum();
        assert_eq!(total, a.len());
    }

    #[test]
    fn scaling_single_sample_is_reproducible() {
        let cfg = ScalingConfig::new(vec![5], 0.3, Some(1), 99);
        let a = run_scaling(&cfg).unwrap();
        let b = run_scaling(&cfg).unwrap();
        assert_eq!(a[0].rows, b[0].rows);
        assert_eq!(a[0].rows.len(), 1);
    }

    #[test]
    fn zero_density_excludes_everything() {
        let cfg = ScalingConfig::new(vec![5, 6], 0.0, Some(4), 0);
        let recs = run_scaling(&cfg).unwrap();
        for r in &recs {
            assert_eq!(r.excluded_count, 4);
            assert_eq!(r.mean_inv_sq_gap, None);
        }
        assert!(fit_loglog(&recs).is_err());
    }

    #[test]
    fn scaling_is_parallelism_invariant() {
        let mut cfg = ScalingConfig::new(vec![5, 6, 7], 0.2, Some(12), 3);
        let mut outputs = Vec::new();
        for workers in [1usize, 4, 16] {
            cfg.workers = Parallelism::Fixed(workers);
            let recs = run_scaling(&cfg).unwrap();
            let fit = fit_loglog(&recs);
            let text = scaling_csv(&recs)
                + &fit.map(|f| scaling_fit_json(&f, &recs)).unwrap_or_default();
            outputs.push(text);
        }
        assert_eq!(outputs[0], outputs[1]);
        assert_eq!(outputs[1], outputs[2]);
    }

    #[test]
    fn sweep_runs_and_aggregates() {
        let mut cfg = SweepConfig::new(vec![5], 0.25, 3, 17);
        cfg.steps_override = Some(2000);
        let recs = run_dynamics_sweep(&cfg).unwrap();
        assert_eq!(recs.len(), 1);
        assert_eq!(recs[0].rows.len(), 3);
        for row in &recs[0].rows {
            assert!(row.ground_fidelity >= 0.0 && row.ground_fidelity <= 1.0 + 1e-9);
            assert!(row.trivial_probability <= row.ground_fidelity + 1e-8);
        }
    }

    #[test]
    fn sweep_respects_the_n_cap() {
        let cfg = SweepConfig::new(vec![15], 0.1, 1, 0);
        match run_dynamics_sweep(&cfg) {
            Err(Error::Guard { what, .. }) => assert_eq!(what, "dynamics sweep n"),
            other => panic!("expected guard, got {other:?}"),
        }
    }

    #[test]
    fn csv_emitters_are_stable() {
        let recs = vec![ScalingRecord {
            n: 5,
            sample_count: 2,
            mean_inv_sq_gap: Some(2.5),
            excluded_count: 1,
            rows: vec![
                SampleRow { seed: 1, m: 2, degeneracy: 6, gap_delta: Some(0.5), inv_sq_gap: Some(4.0) },
                SampleRow { seed: 2, m: 0, degeneracy: 32, gap_delta: None, inv_sq_gap: None },
            ],
        }];
        let csv = scaling_csv(&recs);
        assert!(csv.starts_with("n,seed,m,gap,inv_sq_gap,degeneracy\n"));
        assert!(csv.contains("5,2,0,,,32\n"));
        let line: Vec<&str> = csv.lines().collect();
        assert_eq!(line.len(), 3);
    }
}
