use alphadiv::diffusion::{
    certify_log_growth, generator_action_power_sum, scale_density, scale_function, simulate_chain_with, simulate_sde,
    speed_density, speed_measure, ChainKernel, ChainMode, DiversityPath, SdeScheme, SimplexPoint,
};
use alphadiv::gibbs::{
    eppf, m1_pmf, weights_gg_asymptotic, weights_gg_exact, weights_gg_quadrature, weights_pd, GGParams, VTable,
};
use alphadiv::particle::{conditioned_step, simulate_rescaled, ClockMode, MoranKernel, ParticleSystem};
use alphadiv::rng;
use alphadiv::urn::{sample_partition, PartitionState};

use crate::config::{Clock, Experiment, ExperimentConfig, Route, Scheme};
use crate::output::{Cell, Report, Table};
use crate::CliError;

/// Number of ordered frequencies written per row of a frequency path.
const FREQ_COLUMNS: usize = 50;

pub fn run(experiment: Experiment, cfg: &ExperimentConfig) -> Result<Report, CliError> {
    match experiment {
        Experiment::Weights => weights(cfg),
        Experiment::EppfCheck => eppf_check(cfg),
        Experiment::M1Check => m1_check(cfg),
        Experiment::Chain => chain(cfg),
        Experiment::Sde => sde(cfg),
        Experiment::Figure1 => figure1(cfg),
        Experiment::Particles => particles(cfg),
        Experiment::Conditioned => conditioned(cfg),
        Experiment::Boundary => boundary(cfg),
        Experiment::GeneratorCheck => generator_check(cfg),
    }
}

fn path_table(name: String, path: &DiversityPath) -> Table {
    let mut t = Table::new(name, &["step", "time_rescaled", "value"]);
    for i in 0..path.len() {
        t.push(vec![path.steps[i].into(), path.times[i].into(), path.values[i].into()]);
    }
    t
}

fn frequency_table(name: String) -> Table {
    let mut cols = vec!["time_rescaled".to_string(), "s".to_string()];
    cols.extend((1..=FREQ_COLUMNS).map(|i| format!("z{i}")));
    Table::with_columns(name, cols)
}

fn frequency_row(t: f64, s: f64, z: &SimplexPoint) -> Vec<Cell> {
    let mut row: Vec<Cell> = vec![t.into(), s.into()];
    row.extend(z.padded(FREQ_COLUMNS).into_iter().map(Cell::from));
    row
}

fn time_grid(t_max: f64, points: usize) -> Vec<f64> {
    if points == 1 {
        return vec![t_max];
    }
    (0..points).map(|i| t_max * i as f64 / (points - 1) as f64).collect()
}

fn mean_se(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let m = xs.iter().sum::<f64>() / n;
    if xs.len() < 2 {
        return (m, f64::NAN);
    }
    let v = xs.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (n - 1.0);
    (m, (v / n).sqrt())
}

fn limit(name: &str, value: usize, max: usize) -> Result<(), CliError> {
    if value > max {
        return Err(CliError::Usage(format!("{name} = {value} exceeds the limit {max} for this experiment")));
    }
    Ok(())
}

fn weights(cfg: &ExperimentConfig) -> Result<Report, CliError> {
    let n = cfg.n.unwrap_or(50);
    let route = cfg.route.unwrap_or(Route::Quadrature);
    let pd = match &cfg.params {
        Some(p) => p.pd()?,
        None => return Err(CliError::Usage("config needs \"params\"".into())),
    };
    let mut t = Table::new("weights", &["n", "k", "g0", "g1", "residual", "condition_log10"]);
    let mut worst = 0.0f64;
    for k in 1..=n {
        let (w, alpha) = match pd {
            Some(p) => (weights_pd(n, k, &p)?, p.alpha()),
            None => {
                let p = cfg.gg()?;
                let w = match route {
                    Route::Exact => weights_gg_exact(n, k, &p)?,
                    Route::Quadrature => weights_gg_quadrature(n, k, &p)?,
                    Route::Asymptotic => weights_gg_asymptotic(n, k, &p)?,
                };
                (w, p.alpha())
            }
        };
        let r = w.constraint_residual(n, k, alpha);
        worst = worst.max(r.abs());
        t.push(vec![n.into(), k.into(), w.g0.into(), w.g1.into(), r.into(), w.condition_estimate.into()]);
    }
    let mut report = Report { tables: vec![t], ..Default::default() };
    report.note("max_abs_residual", worst);
    Ok(report)
}

/// Integer partitions of `n` in nonincreasing order, parts at most `max`.
fn integer_partitions(n: usize, max: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for first in (1..=n.min(max)).rev() {
        for mut rest in integer_partitions(n - first, first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// Number of set partitions of `n` items whose block sizes are `shape`.
fn set_partition_count(shape: &[usize]) -> u64 {
    let fact = |m: usize| (1..=m as u64).product::<u64>();
    let n: usize = shape.iter().sum();
    let mut denom = 1u64;
    let mut i = 0;
    while i < shape.len() {
        let j = shape[i..].iter().take_while(|&&m| m == shape[i]).count();
        denom *= fact(shape[i]).pow(j as u32) * fact(j);
        i += j;
    }
    fact(n) / denom
}

fn eppf_check(cfg: &ExperimentConfig) -> Result<Report, CliError> {
    let n = cfg.n.unwrap_or(6);
    limit("n", n, 12)?;
    let reps = cfg.replicates.unwrap_or(100_000);
    let p = cfg.gg()?;
    let table = VTable::new(p, n)?;
    let shapes: Vec<Vec<usize>> = rng::replicate(cfg.seed(), reps, |_, r| sample_partition(n, &table, r).map(|s| s.shape()))
        .into_iter()
        .collect::<Result<_, _>>()?;
    let mut t = Table::new("eppf_check", &["shape", "set_partitions", "eppf", "probability", "mc_frequency", "z_score"]);
    let mut total = 0.0;
    for shape in integer_partitions(n, n) {
        let count = set_partition_count(&shape);
        let e = eppf(&shape, &p)?;
        let prob = count as f64 * e;
        total += prob;
        let freq = shapes.iter().filter(|s| **s == shape).count() as f64 / reps as f64;
        let z = (freq - prob) / (prob * (1.0 - prob) / reps as f64).sqrt();
        let label = shape.iter().map(|m| m.to_string()).collect::<Vec<_>>().join("+");
        t.push(vec![label.into(), count.into(), e.into(), prob.into(), freq.into(), z.into()]);
    }
    let mut report = Report { tables: vec![t], ..Default::default() };
    report.note("total_probability", total);
    if !((total - 1.0).abs() <= 1e-7) {
        report.failure = Some(format!("EPPF total probability {total} differs from 1 by more than 1e-7"));
    }
    Ok(report)
}

fn m1_check(cfg: &ExperimentConfig) -> Result<Report, CliError> {
    let n = cfg.n.unwrap_or(10);
    let reps = cfg.replicates.unwrap_or(100_000);
    let p = cfg.gg()?;
    let pmf = (0..=n).map(|m| m1_pmf(n, m, &p)).collect::<Result<Vec<_>, _>>()?;
    let table = VTable::new(p, n)?;
    let mut counts = vec![0usize; n + 1];
    for m in rng::replicate(cfg.seed(), reps, |_, r| sample_partition(n, &table, r).map(|s| s.multiplicity(1))) {
        counts[m?] += 1;
    }
    let mut t = Table::new("m1_check", &["m", "pmf", "mc_frequency", "z_score"]);
    let mut tv = 0.0;
    for (m, &q) in pmf.iter().enumerate() {
        let freq = counts[m] as f64 / reps as f64;
        tv += 0.5 * (freq - q).abs();
        let z = if q > 0.0 && q < 1.0 { (freq - q) / (q * (1.0 - q) / reps as f64).sqrt() } else { f64::NAN };
        t.push(vec![m.into(), q.into(), freq.into(), z.into()]);
    }
    let mut report = Report { tables: vec![t], ..Default::default() };
    report.note("pmf_total", pmf.iter().sum::<f64>());
    report.note("total_variation", tv);
    Ok(report)
}

fn chain_mode(cfg: &ExperimentConfig) -> ChainMode {
    match cfg.route {
        Some(Route::Asymptotic) => ChainMode::Asymptotic,
        _ => ChainMode::Exact,
    }
}

fn chain(cfg: &ExperimentConfig) -> Result<Report, CliError> {
    let n = cfg.n.unwrap_or(200);
    let steps = cfg.steps.unwrap_or(300_000);
    let k0 = cfg.start_k.unwrap_or(1);
    let every = cfg.record_every.unwrap_or(1);
    let kernel = ChainKernel::new(n, &cfg.gg()?, chain_mode(cfg))?;
    let paths = rng::replicate(cfg.seed(), cfg.replicates.unwrap_or(1), |_, r| simulate_chain_with(&kernel, steps, k0, every, r));
    let mut report = Report::default();
    for (i, path) in paths.into_iter().enumerate() {
        report.tables.push(path_table(format!("chain_r{i}"), &path?));
    }
    Ok(report)
}

fn sde(cfg: &ExperimentConfig) -> Result<Report, CliError> {
    let beta = cfg.gg()?.beta();
    let s0 = cfg.s0.unwrap_or(1.0);
    let dt = cfg.dt.unwrap_or(1e-4);
    let t_max = cfg.t_max.unwrap_or(1.0);
    let every = cfg.record_every.unwrap_or(100);
    let scheme = match cfg.scheme.unwrap_or(Scheme::FullTruncation) {
        Scheme::FullTruncation => SdeScheme::FullTruncation,
        Scheme::DriftImplicit => SdeScheme::DriftImplicit,
    };
    let paths = rng::replicate(cfg.seed(), cfg.replicates.unwrap_or(1), |_, r| simulate_sde(s0, beta, dt, t_max, scheme, every, r));
    let mut report = Report::default();
    for (i, path) in paths.into_iter().enumerate() {
        report.tables.push(path_table(format!("sde_r{i}"), &path?));
    }
    Ok(report)
}

fn figure1(cfg: &ExperimentConfig) -> Result<Report, CliError> {
    let n = cfg.n.unwrap_or(200);
    let steps = cfg.steps.unwrap_or(300_000);
    let k0 = cfg.start_k.unwrap_or(1);
    let every = cfg.record_every.unwrap_or(1);
    let betas = cfg.betas.clone().unwrap_or_else(|| vec![0.0, 100.0, 1000.0]);
    let alpha = match &cfg.params {
        Some(p) => p.gg()?.alpha(),
        None => 0.5,
    };
    let tail_from = steps - steps / 3;
    let mut report = Report::default();
    let mut tail_means = Vec::with_capacity(betas.len());
    for (i, &beta) in betas.iter().enumerate() {
        let kernel = ChainKernel::new(n, &GGParams::from_beta(beta, alpha)?, ChainMode::Exact)?;
        let path = simulate_chain_with(&kernel, steps, k0, every, &mut rng::stream(cfg.seed(), i as u64))?;
        let tail: Vec<f64> = path.steps.iter().zip(&path.values).filter(|(&m, _)| m > tail_from).map(|(_, &v)| v).collect();
        tail_means.push(tail.iter().sum::<f64>() / tail.len() as f64);
        report.tables.push(path_table(format!("figure1_beta{beta}"), &path));
    }
    report.note("betas", &betas);
    report.note("tail_means", &tail_means);
    Ok(report)
}

fn gibbs_start(p: GGParams, n: usize, rng: &mut rng::Rng) -> Result<ParticleSystem, CliError> {
    let table = VTable::new(p, n)?;
    Ok(ParticleSystem::from_partition(&sample_partition(n, &table, rng)?)?)
}

fn particles(cfg: &ExperimentConfig) -> Result<Report, CliError> {
    let n = cfg.n.unwrap_or(200);
    let p = cfg.gg()?;
    let kernel = MoranKernel::new(n, &p)?;
    let grid = time_grid(cfg.t_max.unwrap_or(1.0), cfg.points.unwrap_or(101));
    let clock = match cfg.clock.unwrap_or(Clock::Discrete) {
        Clock::Discrete => ClockMode::Discrete,
        Clock::Exponential => ClockMode::Exponential,
    };
    let runs = rng::replicate(cfg.seed(), cfg.replicates.unwrap_or(1), |_, r| -> Result<_, CliError> {
        let sys0 = gibbs_start(p, n, r)?;
        Ok(simulate_rescaled(&sys0, &kernel, &grid, clock, FREQ_COLUMNS, r)?)
    });
    let mut report = Report::default();
    for (i, run) in runs.into_iter().enumerate() {
        let run = run?;
        report.tables.push(path_table(format!("particles_k_r{i}"), &run.diversity));
        let mut t = frequency_table(format!("particles_freq_r{i}"));
        for (j, &time) in run.frequency_times.iter().enumerate() {
            t.push(frequency_row(time, run.frequency_diversity[j], &run.frequencies[j]));
        }
        report.tables.push(t);
    }
    Ok(report)
}

fn conditioned(cfg: &ExperimentConfig) -> Result<Report, CliError> {
    let n = cfg.n.unwrap_or(200);
    let k = cfg.k.unwrap_or(((n as f64).sqrt().round() as usize).max(1));
    if k > n {
        return Err(CliError::Usage(format!("k = {k} exceeds n = {n}")));
    }
    let alpha = match &cfg.params {
        Some(p) => p.gg()?.alpha(),
        None => 0.5,
    };
    let sizes: Vec<usize> = (0..k).map(|j| n / k + usize::from(j < n % k)).collect();
    let sys0 = ParticleSystem::from_partition(&PartitionState::from_block_sizes(&sizes)?)?;
    let grid = time_grid(cfg.t_max.unwrap_or(10.0), cfg.points.unwrap_or(101));
    let unit = 0.5 * (n * n) as f64;
    let runs = rng::replicate(cfg.seed(), cfg.replicates.unwrap_or(1), |_, r| -> Result<_, CliError> {
        let mut sys = sys0.clone();
        let mut events = 0u64;
        let mut rows = Vec::with_capacity(grid.len());
        for &t in &grid {
            while (events as f64) < unit * t {
                conditioned_step(&mut sys, alpha, r)?;
                events += 1;
            }
            rows.push((t, sys.diversity(alpha), sys.ordered_frequencies()));
        }
        Ok(rows)
    });
    let s = k as f64 / (n as f64).powf(alpha);
    let mut report = Report::default();
    let mut phi2 = Vec::new();
    for (i, rows) in runs.into_iter().enumerate() {
        let mut t = frequency_table(format!("conditioned_r{i}"));
        for (j, (time, div, z)) in rows?.iter().enumerate() {
            if j > 0 {
                phi2.push(z.power_sum(2));
            }
            t.push(frequency_row(*time, *div, z));
        }
        report.tables.push(t);
    }
    report.note("s", s);
    report.note("mean_phi2", phi2.iter().sum::<f64>() / phi2.len().max(1) as f64);
    // E[phi_2] under the limiting PD(s^2 / 4, 1/2) law
    let theta = s * s / 4.0;
    report.note("pd_phi2", (1.0 - alpha) / (1.0 + theta));
    Ok(report)
}

fn boundary(cfg: &ExperimentConfig) -> Result<Report, CliError> {
    let beta = cfg.gg()?.beta();
    let y0 = cfg.y0.unwrap_or(1.0);
    let points = cfg.points.unwrap_or(41).max(2);
    let mut t = Table::new("boundary", &["x", "scale_density", "speed_density", "scale_function", "speed_from_one"]);
    for i in 0..points {
        let x = 10f64.powf(-4.0 + 8.0 * i as f64 / (points - 1) as f64);
        let speed = if x > 1.0 {
            speed_measure(1.0, x, beta, y0)?
        } else if x < 1.0 {
            -speed_measure(x, 1.0, beta, y0)?
        } else {
            0.0
        };
        t.push(vec![
            x.into(),
            scale_density(x, beta, y0)?.into(),
            speed_density(x, beta, y0)?.into(),
            scale_function(x, beta, 1.0, y0)?.into(),
            speed.into(),
        ]);
    }
    let cert = certify_log_growth(beta, &[1e2, 1e4, 1e6], 0.1)?;
    let mut report = Report { tables: vec![t], ..Default::default() };
    report.note("beta", beta);
    report.note("c2_partial_integrals", &cert.partial_integrals);
    report.note("c2_increment_ratios", &cert.increment_ratios);
    report.note("c2_log_growth_passed", cert.passed);
    Ok(report)
}

fn generator_check(cfg: &ExperimentConfig) -> Result<Report, CliError> {
    let n = cfg.n.unwrap_or(300);
    let p = cfg.gg()?;
    let h = cfg.dt.unwrap_or(0.01);
    let reps = cfg.replicates.unwrap_or(10_000);
    let max_power = cfg.max_power.unwrap_or(3).max(2);
    let sys0 = gibbs_start(p, n, &mut rng::stream(cfg.seed(), u64::MAX))?;
    let kernel = MoranKernel::new(n, &p)?;
    let grid = [0.0, h];
    let ends = rng::replicate(cfg.seed(), reps, |_, r| simulate_rescaled(&sys0, &kernel, &grid, ClockMode::Discrete, n, r));
    let ends = ends.into_iter().map(|e| e.map(|path| path.frequencies[1].clone())).collect::<Result<Vec<_>, _>>()?;
    let z0 = sys0.ordered_frequencies();
    let s0 = sys0.diversity(p.alpha());
    let mut t = Table::new("generator_check", &["m", "finite_difference", "se", "generator", "z_score"]);
    for m in 2..=max_power {
        let before = z0.power_sum(m as i32);
        let diffs: Vec<f64> = ends.iter().map(|z| (z.power_sum(m as i32) - before) / h).collect();
        let (fd, se) = mean_se(&diffs);
        let want = generator_action_power_sum(m, s0, &z0, &p)?;
        t.push(vec![(m as u64).into(), fd.into(), se.into(), want.into(), ((fd - want) / se).into()]);
    }
    let mut report = Report { tables: vec![t], ..Default::default() };
    report.note("s0", s0);
    report.note("k0", sys0.k());
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn partitions_of_five() {
        let parts = integer_partitions(5, 5);
        assert_eq!(parts.len(), 7);
        let total: u64 = parts.iter().map(|s| set_partition_count(s)).sum();
        assert_eq!(total, 52);
    }

    #[test]
    fn grid_endpoints() {
        assert_eq!(time_grid(2.0, 3), vec![0.0, 1.0, 2.0]);
        assert_eq!(time_grid(2.0, 1), vec![2.0]);
    }
}
