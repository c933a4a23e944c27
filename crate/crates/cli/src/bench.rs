use std::time::Instant;

use anyhow::{bail, Result};
use fwsfm::functions::{cut_oracle, iwata_oracle};
use fwsfm::graph::{path_instance, random_cut_instance, WeightedGraph};
use fwsfm::maxflow::max_flow;
use fwsfm::parallel;
use fwsfm::sfm::{minimize, SfmOptions};
use fwsfm::verify::brute_min;
use fwsfm::wolfe::Termination;
use fwsfm::{SetFunction, SubmodularOracle};

use crate::record::BenchRecord;

/// Ground sets up to this size are also checked by enumeration.
const CROSS_CHECK_LIMIT: usize = 12;

#[derive(Debug, Clone)]
pub struct RunSettings {
    pub epsilon: Option<f64>,
    pub max_iter: usize,
    pub timing: bool,
}

impl RunSettings {
    fn options(&self) -> SfmOptions {
        let opts = SfmOptions::default()
            .max_iterations(self.max_iter)
            .keep_trace(false);
        match self.epsilon {
            Some(eps) => opts.epsilon(eps),
            None => opts,
        }
    }
}

pub fn termination_name(t: Termination) -> &'static str {
    match t {
        Termination::Converged => "converged",
        Termination::IterationCap => "iteration-cap",
        Termination::Stalled => "stalled",
    }
}

fn trial<F: SetFunction>(
    id: String,
    family: &str,
    oracle: &SubmodularOracle<F>,
    reference: Option<f64>,
    settings: &RunSettings,
) -> Result<BenchRecord> {
    let start = Instant::now();
    let res = minimize(oracle, &settings.options())?;
    let wall = start.elapsed().as_secs_f64() * 1e3;
    let offset = res.offset;
    let reference = match reference {
        Some(r) => Some(r),
        None if oracle.n() <= CROSS_CHECK_LIMIT => Some(brute_min(oracle)?.min_value + offset),
        None => None,
    };
    let record = BenchRecord {
        id,
        family: family.to_string(),
        n: oracle.n(),
        f_max: oracle.compute_f(),
        epsilon: res.epsilon_used,
        major: res.major_cycles,
        minor: res.minor_cycles,
        total: res.iterations,
        eo_calls: res.eo_calls,
        wall_ms: settings.timing.then_some(wall),
        min_value: res.raw_min_value(),
        lower_bound: res.lower_bound + offset,
        gap: res.gap,
        termination: termination_name(res.termination).to_string(),
        reference,
    };
    if res.termination == Termination::Converged && !record.gap_within_bound() {
        bail!("{}: gap {} exceeds 2nε", record.id, record.gap);
    }
    if let Some(r) = record.reference {
        if res.is_certified_exact() && oracle.is_integer_valued() && record.min_value != r {
            bail!(
                "{}: solver reports {} but the independent optimum is {}",
                record.id,
                record.min_value,
                r
            );
        }
    }
    Ok(record)
}

fn graph_trial(id: String, family: &str, g: WeightedGraph, settings: &RunSettings) -> Result<BenchRecord> {
    let reference = (g.vertex_count() - 2 <= CROSS_CHECK_LIMIT)
        .then(|| max_flow(&g))
        .transpose()?;
    let oracle = cut_oracle(g)?;
    trial(id, family, &oracle, reference, settings)
}

/// Seed of trial `t` at size `n` in a suite seeded with `seed`.
pub fn trial_seed(seed: u64, n: usize, t: usize) -> u64 {
    seed.wrapping_mul(0x9E37_79B9_7F4A_7C15)
        .wrapping_add((n as u64) << 20)
        .wrapping_add(t as u64)
}

/// Erdős–Rényi cut suite. `sizes` are graph vertex counts (terminals
/// included).
pub fn erdos_renyi(
    sizes: &[usize],
    p: f64,
    max_capacity: u32,
    trials: usize,
    seed: u64,
    settings: &RunSettings,
) -> Result<Vec<BenchRecord>> {
    let jobs: Vec<(usize, usize)> = sizes
        .iter()
        .flat_map(|&n| (0..trials).map(move |t| (n, t)))
        .collect();
    parallel::map(jobs, |(n, t)| {
        let g = random_cut_instance(n, p, max_capacity, trial_seed(seed, n, t))?;
        graph_trial(format!("er-n{n}-t{t}"), "cut", g, settings)
    })
    .into_iter()
    .collect()
}

/// Path graphs with `path_n` inner vertices at each capacity scale.
pub fn scaling(path_n: usize, scales: &[u64], settings: &RunSettings) -> Result<Vec<BenchRecord>> {
    if let Some(bad) = scales.iter().find(|&&s| s == 0) {
        bail!("scales must be positive, got {bad}");
    }
    parallel::map(scales.to_vec(), |scale| {
        let g = path_instance(path_n, scale)?;
        graph_trial(format!("path-n{path_n}-s{scale}"), "path", g, settings)
    })
    .into_iter()
    .collect()
}

pub fn iwata(sizes: &[usize], settings: &RunSettings) -> Result<Vec<BenchRecord>> {
    parallel::map(sizes.to_vec(), |n| {
        let oracle = iwata_oracle(n)?;
        trial(format!("iwata-n{n}"), "iwata", &oracle, None, settings)
    })
    .into_iter()
    .collect()
}
