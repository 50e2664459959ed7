//! `experiment scaling`: rounds against n.

use std::path::Path;

use anyhow::{bail, Context, Result};
use serde::{Deserialize, Serialize};

use ktcol_core::generators::{random_lists, Family, GenSpec};
use ktcol_core::{distributed_list_colour, verify_colouring, AlgoParams, Error};

fn default_trials() -> usize {
    3
}

fn default_block_size() -> usize {
    12
}

fn default_t() -> usize {
    4
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub family: Family,
    /// Non-empty and strictly ascending.
    pub sizes: Vec<usize>,
    #[serde(default = "default_trials")]
    pub trials: usize,
    /// Trial `j` at size index `i` uses `seed + 1000 i + j`.
    pub seed: u64,
    pub list_size: usize,
    /// Defaults to twice the list size.
    #[serde(default)]
    pub universe: Option<u32>,
    #[serde(default = "default_t")]
    pub t: usize,
    #[serde(default = "default_block_size")]
    pub block_size: usize,
    /// Defaults to the tuned parameters for `list_size`.
    #[serde(default)]
    pub params: Option<AlgoParams>,
}

impl ExperimentConfig {
    fn validate(&self) -> Result<()> {
        if self.sizes.is_empty() || self.sizes.windows(2).any(|w| w[0] >= w[1]) {
            bail!(Error::InvalidParameter("sizes must be non-empty and strictly ascending".into()));
        }
        if self.trials < 1 {
            bail!(Error::InvalidParameter("trials must be at least 1".into()));
        }
        Ok(())
    }
}

#[derive(Serialize)]
struct Trial {
    n: usize,
    trial: usize,
    seed: u64,
    vertices: usize,
    rounds: u64,
    levels: usize,
    min_progress: f64,
}

#[derive(Serialize)]
struct Row {
    n: usize,
    median_rounds: u64,
    max_rounds: u64,
    min_progress: f64,
}

#[derive(Serialize)]
struct Fit {
    a: f64,
    b: f64,
}

#[derive(Serialize)]
struct Results<'a> {
    config: &'a ExperimentConfig,
    params: AlgoParams,
    trials: Vec<Trial>,
    table: Vec<Row>,
    fit: Fit,
}

/// Least squares of `y` on `log2 n`.
fn fit(points: &[(usize, u64)]) -> Fit {
    let m = points.len() as f64;
    let xs: Vec<f64> = points.iter().map(|&(n, _)| (n as f64).log2()).collect();
    let ys: Vec<f64> = points.iter().map(|&(_, r)| r as f64).collect();
    let (sx, sy) = (xs.iter().sum::<f64>(), ys.iter().sum::<f64>());
    let sxx: f64 = xs.iter().map(|x| x * x).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| x * y).sum();
    let denom = m * sxx - sx * sx;
    if points.len() < 2 || denom.abs() < 1e-12 {
        return Fit { a: 0.0, b: sy / m };
    }
    let a = (m * sxy - sx * sy) / denom;
    Fit { a, b: (sy - a * sx) / m }
}

pub fn scaling(config: &Path, output: &Path) -> Result<()> {
    let text = std::fs::read_to_string(config).with_context(|| format!("reading {}", config.display()))?;
    let cfg: ExperimentConfig = serde_json::from_str(&text).map_err(|e| Error::Parse {
        location: format!("{} line {} column {}", config.display(), e.line(), e.column()),
        message: e.to_string(),
    })?;
    cfg.validate()?;
    let p = match &cfg.params {
        Some(p) => p.clone(),
        None => AlgoParams::for_t(cfg.list_size)?,
    };
    p.validate()?;
    let universe = cfg.universe.unwrap_or(2 * cfg.list_size as u32);

    let mut trials = Vec::new();
    let mut table = Vec::new();
    for (i, &n) in cfg.sizes.iter().enumerate() {
        let mut rounds = Vec::new();
        let mut min_progress = f64::INFINITY;
        for j in 0..cfg.trials {
            let seed = cfg.seed.wrapping_add(1000 * i as u64 + j as u64);
            let mut spec = GenSpec::new(cfg.family, n, seed);
            spec.t = cfg.t;
            spec.block_size = cfg.block_size;
            let (g, _) = spec.generate()?;
            let l = random_lists(&g, cfg.list_size, universe, seed)?;
            let (phi, trace, levels) =
                distributed_list_colour(&g, &l, &p).with_context(|| format!("n = {n}, trial {j}, seed {seed}"))?;
            if !verify_colouring(&g, &phi, Some(&l))?.is_ok() {
                bail!(Error::Refused(format!("n = {n}, trial {j}, seed {seed}: colouring failed verification")));
            }
            let least = levels.iter().map(|r| r.progress()).fold(1.0, f64::min);
            min_progress = min_progress.min(least);
            rounds.push(trace.rounds);
            trials.push(Trial {
                n,
                trial: j,
                seed,
                vertices: g.n(),
                rounds: trace.rounds,
                levels: levels.len(),
                min_progress: least,
            });
        }
        rounds.sort_unstable();
        table.push(Row {
            n,
            median_rounds: rounds[rounds.len() / 2],
            max_rounds: *rounds.last().unwrap(),
            min_progress,
        });
    }
    let fit = fit(&table.iter().map(|r| (r.n, r.median_rounds)).collect::<Vec<_>>());

    println!("{:>10} {:>14} {:>11} {:>13}", "n", "median_rounds", "max_rounds", "min_progress");
    for r in &table {
        println!("{:>10} {:>14} {:>11} {:>13.4}", r.n, r.median_rounds, r.max_rounds, r.min_progress);
    }
    println!("rounds ~ {:.3} log2 n + {:.3}", fit.a, fit.b);

    let results = Results {
        config: &cfg,
        params: p,
        trials,
        table,
        fit,
    };
    std::fs::write(output, serde_json::to_string_pretty(&results)?).with_context(|| format!("writing {}", output.display()))?;
    Ok(())
}
