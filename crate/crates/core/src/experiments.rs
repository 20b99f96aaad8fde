//! Monte Carlo harness: the root-neighbor tree-distance statistic `L_n` on
//! `T_d(n) × T_b(n)` and the component census on windows.
//!
//! Trials are pure functions of `(master_seed, trial_index, params)`. They run
//! in fixed-size chunks on the current rayon pool and are handed to the sink
//! strictly in index order, so output never depends on the worker count.

use std::sync::atomic::{AtomicBool, Ordering};
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::forest::kruskal_mst;
use crate::graph::{build_grid_box, build_rooted_tree, direct_product, Graph, RootedTreeSpec};
use crate::labeling::{derive_seed, EdgeLabeling};
use crate::stats;
use crate::window::{census_components, Window, WindowDescriptor};

const CHUNK: usize = 256;
const STATS_STREAM: u64 = 0x5747_4154_5354_4154;
pub const DEFAULT_QUANTILES: [f64; 7] = [0.10, 0.25, 0.50, 0.75, 0.90, 0.95, 0.99];
pub const BOOTSTRAP_RESAMPLES: usize = 1000;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum TrialParams {
    Ln { d: usize, b: usize, n: usize },
    Census { window: WindowDescriptor },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum TrialOutcome {
    Ln {
        ln: u64,
        neighbor_distances: Vec<u32>,
    },
    Census {
        retained: usize,
        removed: usize,
        unknown: usize,
        core_vertices: usize,
        /// Upper bound on ambient components meeting the core.
        core_components: usize,
        budget_truncated: usize,
    },
}

/// One Monte Carlo outcome; serialized as one JSON line.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub experiment: String,
    pub master_seed: u64,
    pub trial_index: u64,
    /// Label seed, `derive_seed(master_seed, trial_index)`.
    pub seed: u64,
    #[serde(flatten)]
    pub params: TrialParams,
    #[serde(flatten)]
    pub outcome: TrialOutcome,
    /// Not serialized: trial output must be reproducible byte for byte.
    #[serde(skip)]
    pub wall_time: Duration,
}

impl TrialRecord {
    pub fn ln(&self) -> Option<u64> {
        match self.outcome {
            TrialOutcome::Ln { ln, .. } => Some(ln),
            _ => None,
        }
    }

    pub fn components_per_core_vertex(&self) -> Option<f64> {
        match self.outcome {
            TrialOutcome::Census {
                core_vertices,
                core_components,
                ..
            } => Some(if core_vertices == 0 {
                0.0
            } else {
                core_components as f64 / core_vertices as f64
            }),
            _ => None,
        }
    }

    pub fn unknown_fraction(&self) -> Option<f64> {
        match self.outcome {
            TrialOutcome::Census {
                retained,
                removed,
                unknown,
                ..
            } => {
                let total = retained + removed + unknown;
                Some(if total == 0 { 0.0 } else { unknown as f64 / total as f64 })
            }
            _ => None,
        }
    }
}

/// The product graph `T_d(n) × T_b(n)` with its root `(ρ, ρ)`.
#[derive(Debug, Clone)]
pub struct LnSetup {
    pub d: usize,
    pub b: usize,
    pub n: usize,
    graph: Graph,
}

impl LnSetup {
    pub fn new(d: usize, b: usize, n: usize) -> Result<Self> {
        let left = build_rooted_tree(RootedTreeSpec::new(d, n)?)?;
        let right = build_rooted_tree(RootedTreeSpec::new(b, n)?)?;
        let graph = direct_product(&left, &right)?;
        debug_assert_eq!(graph.meta().root, Some(0));
        Ok(LnSetup { d, b, n, graph })
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn run(&self, master_seed: u64, trial_index: u64) -> TrialRecord {
        let start = Instant::now();
        let seed = derive_seed(master_seed, trial_index);
        let (ln, neighbor_distances) = ln_statistic(&self.graph, &EdgeLabeling::new(seed));
        TrialRecord {
            experiment: "ln".into(),
            master_seed,
            trial_index,
            seed,
            params: TrialParams::Ln {
                d: self.d,
                b: self.b,
                n: self.n,
            },
            outcome: TrialOutcome::Ln { ln, neighbor_distances },
            wall_time: start.elapsed(),
        }
    }
}

/// Sum over graph neighbors `w` of vertex 0 of the MST distance from 0 to
/// `w`, plus the individual distances in neighbor order.
pub fn ln_statistic(g: &Graph, labels: &EdgeLabeling) -> (u64, Vec<u32>) {
    let tree = kruskal_mst(g, labels).rooted();
    // Vertex 0 is the root of its component, so depth is distance to it.
    let distances: Vec<u32> = g.neighbors(0).iter().map(|&w| tree.depth(w)).collect();
    (distances.iter().map(|&x| x as u64).sum(), distances)
}

pub fn run_ln_trial(d: usize, b: usize, n: usize, master_seed: u64, trial_index: u64) -> Result<TrialRecord> {
    Ok(LnSetup::new(d, b, n)?.run(master_seed, trial_index))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TightnessConfig {
    pub d: usize,
    pub b: usize,
    pub n_list: Vec<usize>,
    pub trials: usize,
    pub master_seed: u64,
    /// Probe points `M`; default: quantiles of the smallest-`n` sample.
    pub probes: Option<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CdfPoint {
    pub m: f64,
    pub p_hat: f64,
    pub ci_half_width: f64,
    pub standard_error: f64,
    /// Wald interval (true) or Wilson fallback when `n p̂ < 10`.
    pub wald: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LnSummary {
    pub n: usize,
    pub trials: usize,
    pub min: f64,
    pub max: f64,
    pub mean: f64,
    pub mean_ci_half_width: f64,
    pub median: f64,
    pub median_ci_half_width: f64,
    pub median_standard_error: f64,
    pub cdf: Vec<CdfPoint>,
    /// Fewer than two trials: intervals are meaningless.
    pub degenerate: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrendCheck {
    pub m: Option<f64>,
    pub delta: f64,
    pub tolerance: f64,
    pub within_tolerance: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrendDiagnostic {
    pub from_n: usize,
    pub to_n: usize,
    /// `median(to) - median(from)`, expected nonnegative.
    pub median: TrendCheck,
    /// `p̂(to) - p̂(from)` per probe, expected nonpositive.
    pub cdf: Vec<TrendCheck>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TightnessReport {
    pub d: usize,
    pub b: usize,
    pub master_seed: u64,
    pub trials_requested: usize,
    pub probes: Vec<f64>,
    /// 90th percentile of the smallest-`n` sample.
    pub reference_m: f64,
    pub per_n: Vec<LnSummary>,
    pub diagnostics: Vec<TrendDiagnostic>,
    pub truncated: bool,
}

impl TightnessReport {
    pub fn summary(&self, n: usize) -> Option<&LnSummary> {
        self.per_n.iter().find(|s| s.n == n)
    }

    /// Rows `n, M, p_hat, ci_half_width, trials`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("n,M,p_hat,ci_half_width,trials\n");
        for s in &self.per_n {
            for c in &s.cdf {
                out.push_str(&format!(
                    "{},{},{},{},{}\n",
                    s.n, c.m, c.p_hat, c.ci_half_width, s.trials
                ));
            }
        }
        out
    }
}

/// Runs `trials` L_n trials for each `n` (ascending) and aggregates the
/// empirical CDF at the probe points. Records are passed to `sink` in trial
/// index order. Setting `cancel` stops after the current chunk and marks the
/// report truncated.
pub fn tightness_experiment(
    config: &TightnessConfig,
    sink: &mut dyn FnMut(&TrialRecord) -> Result<()>,
    cancel: &AtomicBool,
) -> Result<TightnessReport> {
    let mut n_list = config.n_list.clone();
    n_list.sort_unstable();
    n_list.dedup();
    if n_list.is_empty() {
        return Err(Error::Parameter("n-list is empty".into()));
    }
    if config.trials == 0 {
        return Err(Error::Parameter("trials must be positive".into()));
    }

    let mut samples: Vec<(usize, Vec<f64>)> = Vec::new();
    let mut truncated = false;
    let mut next_index: u64 = 0;
    'outer: for &n in &n_list {
        let setup = LnSetup::new(config.d, config.b, n)?;
        let mut values = Vec::with_capacity(config.trials);
        let base = next_index;
        next_index += config.trials as u64;
        for chunk_start in (0..config.trials).step_by(CHUNK) {
            if cancel.load(Ordering::Relaxed) {
                truncated = true;
                samples.push((n, values));
                break 'outer;
            }
            let chunk_end = (chunk_start + CHUNK).min(config.trials);
            let records: Vec<TrialRecord> = (chunk_start..chunk_end)
                .into_par_iter()
                .map(|i| setup.run(config.master_seed, base + i as u64))
                .collect();
            for r in &records {
                sink(r)?;
                values.push(r.ln().expect("ln trial") as f64);
            }
        }
        samples.push((n, values));
    }
    samples.retain(|(_, v)| !v.is_empty());
    if samples.is_empty() {
        return Err(Error::Parameter("interrupted before any trial completed".into()));
    }
    for (_, v) in samples.iter_mut() {
        v.sort_unstable_by(f64::total_cmp);
    }

    let base = &samples[0].1;
    let reference_m = stats::quantile_nearest_rank(base, 0.9);
    let probes = match &config.probes {
        Some(p) if !p.is_empty() => {
            let mut p = p.clone();
            p.sort_unstable_by(f64::total_cmp);
            p.dedup();
            p
        }
        _ => {
            let mut p: Vec<f64> = DEFAULT_QUANTILES
                .iter()
                .map(|&q| stats::quantile_nearest_rank(base, q))
                .collect();
            p.dedup();
            p
        }
    };

    let per_n: Vec<LnSummary> = samples
        .iter()
        .map(|(n, v)| {
            summarize_ln(
                *n,
                v,
                &probes,
                derive_seed(config.master_seed ^ STATS_STREAM, *n as u64),
            )
        })
        .collect();
    let diagnostics = per_n.windows(2).map(|w| trend(&w[0], &w[1])).collect();

    Ok(TightnessReport {
        d: config.d,
        b: config.b,
        master_seed: config.master_seed,
        trials_requested: config.trials,
        probes,
        reference_m,
        per_n,
        diagnostics,
        truncated,
    })
}

fn summarize_ln(n: usize, sorted: &[f64], probes: &[f64], stats_seed: u64) -> LnSummary {
    let trials = sorted.len();
    let boot = stats::bootstrap_median(sorted, BOOTSTRAP_RESAMPLES, stats_seed);
    let cdf = probes
        .iter()
        .map(|&m| {
            let p_hat = stats::ecdf_at(sorted, m);
            let iv = stats::proportion_interval(p_hat, trials);
            CdfPoint {
                m,
                p_hat,
                ci_half_width: iv.half_width,
                standard_error: iv.standard_error,
                wald: iv.wald,
            }
        })
        .collect();
    LnSummary {
        n,
        trials,
        min: sorted[0],
        max: sorted[trials - 1],
        mean: stats::mean(sorted),
        mean_ci_half_width: stats::Z95 * stats::standard_error(sorted),
        median: stats::median(sorted),
        median_ci_half_width: boot.half_width,
        median_standard_error: boot.standard_error,
        cdf,
        degenerate: trials < 2,
    }
}

fn trend(from: &LnSummary, to: &LnSummary) -> TrendDiagnostic {
    let median_delta = to.median - from.median;
    let median_tol = 2.0 * from.median_standard_error.hypot(to.median_standard_error);
    let cdf = from
        .cdf
        .iter()
        .zip(&to.cdf)
        .map(|(a, b)| {
            let delta = b.p_hat - a.p_hat;
            let tolerance = 2.0 * a.standard_error.hypot(b.standard_error);
            TrendCheck {
                m: Some(a.m),
                delta,
                tolerance,
                within_tolerance: delta <= tolerance,
            }
        })
        .collect();
    TrendDiagnostic {
        from_n: from.n,
        to_n: to.n,
        median: TrendCheck {
            m: None,
            delta: median_delta,
            tolerance: median_tol,
            within_tolerance: median_delta >= -median_tol,
        },
        cdf,
    }
}

/// Window families accepted by the census.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum WindowFamily {
    /// Balls `T_d(R) × T_b(R)`; a size is a radius.
    TreeProduct { d: usize, b: usize },
    /// Boxes of `Z²`; a size is `(width, height)`.
    Grid,
    /// Finite grid boxes with no frontier.
    FiniteGrid,
}

impl WindowFamily {
    pub fn descriptor(&self, size: (usize, usize), margin: u32) -> WindowDescriptor {
        match *self {
            WindowFamily::TreeProduct { d, b } => WindowDescriptor::TreeProduct {
                d,
                b,
                radius: size.0,
                margin,
            },
            WindowFamily::Grid => WindowDescriptor::Grid {
                width: size.0,
                height: size.1,
                margin,
            },
            WindowFamily::FiniteGrid => WindowDescriptor::FiniteGrid {
                width: size.0,
                height: size.1,
            },
        }
    }
}

pub fn build_window(desc: WindowDescriptor) -> Result<Window> {
    match desc {
        WindowDescriptor::TreeProduct { d, b, radius, margin } => Window::tree_product(d, b, radius, margin),
        WindowDescriptor::Grid { width, height, margin } => Window::grid_box(width, height, margin),
        WindowDescriptor::FiniteGrid { width, height } => {
            let g = build_grid_box(width, height)?;
            Window::new(g, &[], None, 0, desc)
        }
        WindowDescriptor::Finite { .. } => Err(Error::Parameter(
            "a finite window descriptor does not determine its graph".into(),
        )),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CensusConfig {
    pub windows: Vec<WindowDescriptor>,
    pub seeds: usize,
    pub master_seed: u64,
    pub node_budget: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CensusSummary {
    pub window: WindowDescriptor,
    pub edges: usize,
    pub core_vertices: usize,
    pub seeds: usize,
    pub mean_components_per_core_vertex: f64,
    pub components_per_core_vertex_sd: f64,
    pub components_per_core_vertex_ci_half_width: f64,
    pub mean_unknown_fraction: f64,
    pub unknown_fraction_standard_error: f64,
    pub budget_truncated: usize,
}

impl CensusSummary {
    pub fn ci(&self) -> (f64, f64) {
        let m = self.mean_components_per_core_vertex;
        let h = self.components_per_core_vertex_ci_half_width;
        (m - h, m + h)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CensusReport {
    pub master_seed: u64,
    pub seeds: usize,
    /// Component counts come from Retained edges only and bound the ambient
    /// component count from above.
    pub component_count_kind: String,
    pub per_window: Vec<CensusSummary>,
    /// Consecutive windows: change in mean Unknown fraction, expected
    /// nonpositive as windows grow.
    pub unknown_trend: Vec<TrendCheck>,
    pub truncated: bool,
}

impl CensusReport {
    pub fn to_csv(&self) -> String {
        let mut out = String::from(
            "window,edges,core_vertices,seeds,mean_components_per_core_vertex,ci_half_width,mean_unknown_fraction,unknown_fraction_se\n",
        );
        for s in &self.per_window {
            out.push_str(&format!(
                "{},{},{},{},{},{},{},{}\n",
                window_label(&s.window),
                s.edges,
                s.core_vertices,
                s.seeds,
                s.mean_components_per_core_vertex,
                s.components_per_core_vertex_ci_half_width,
                s.mean_unknown_fraction,
                s.unknown_fraction_standard_error
            ));
        }
        out
    }
}

pub fn window_label(w: &WindowDescriptor) -> String {
    match *w {
        WindowDescriptor::TreeProduct { d, b, radius, margin } => {
            format!("tree-product(d={d};b={b};R={radius};margin={margin})")
        }
        WindowDescriptor::Grid { width, height, margin } => format!("grid({width}x{height};margin={margin})"),
        WindowDescriptor::FiniteGrid { width, height } => format!("finite-grid({width}x{height})"),
        WindowDescriptor::Finite { vertices, edges } => format!("finite(v={vertices};e={edges})"),
    }
}

/// Classifies every window under `seeds` matched label seeds and censuses the
/// certified forest. Seed `i` is `derive_seed(master_seed, i)` for every
/// window, so windows of one family see the same ambient labels.
pub fn census_experiment(
    config: &CensusConfig,
    sink: &mut dyn FnMut(&TrialRecord) -> Result<()>,
    cancel: &AtomicBool,
) -> Result<CensusReport> {
    if config.windows.is_empty() || config.seeds == 0 {
        return Err(Error::Parameter("census needs at least one window and one seed".into()));
    }
    let mut per_window = Vec::new();
    let mut truncated = false;
    'outer: for &desc in &config.windows {
        let window = build_window(desc)?;
        let mut records = Vec::with_capacity(config.seeds);
        for chunk_start in (0..config.seeds).step_by(CHUNK) {
            if cancel.load(Ordering::Relaxed) {
                truncated = true;
                if !records.is_empty() {
                    per_window.push(summarize_census(&window, &records));
                }
                break 'outer;
            }
            let chunk_end = (chunk_start + CHUNK).min(config.seeds);
            let chunk: Vec<TrialRecord> = (chunk_start..chunk_end)
                .into_par_iter()
                .map(|i| census_trial(&window, config.master_seed, i as u64, config.node_budget))
                .collect();
            for r in chunk {
                sink(&r)?;
                records.push(r);
            }
        }
        per_window.push(summarize_census(&window, &records));
    }

    let unknown_trend = per_window
        .windows(2)
        .map(|w| {
            let delta = w[1].mean_unknown_fraction - w[0].mean_unknown_fraction;
            let tolerance = 2.0
                * w[0]
                    .unknown_fraction_standard_error
                    .hypot(w[1].unknown_fraction_standard_error);
            TrendCheck {
                m: None,
                delta,
                tolerance,
                within_tolerance: delta <= tolerance,
            }
        })
        .collect();
    Ok(CensusReport {
        master_seed: config.master_seed,
        seeds: config.seeds,
        component_count_kind: "upper_bound".into(),
        per_window,
        unknown_trend,
        truncated,
    })
}

pub fn census_trial(window: &Window, master_seed: u64, index: u64, node_budget: usize) -> TrialRecord {
    let start = Instant::now();
    let seed = derive_seed(master_seed, index);
    let labels = EdgeLabeling::new(seed);
    let classification = window.labeled(&labels).with_budget(node_budget).classify_all();
    let c = census_components(window, &classification);
    TrialRecord {
        experiment: "census".into(),
        master_seed,
        trial_index: index,
        seed,
        params: TrialParams::Census {
            window: window.descriptor(),
        },
        outcome: TrialOutcome::Census {
            retained: c.retained,
            removed: c.removed,
            unknown: c.unknown,
            core_vertices: c.core_vertices,
            core_components: c.core_components,
            budget_truncated: classification.budget_truncated(),
        },
        wall_time: start.elapsed(),
    }
}

fn summarize_census(window: &Window, records: &[TrialRecord]) -> CensusSummary {
    let cpv: Vec<f64> = records.iter().filter_map(|r| r.components_per_core_vertex()).collect();
    let unknown: Vec<f64> = records.iter().filter_map(|r| r.unknown_fraction()).collect();
    let budget_truncated = records
        .iter()
        .map(|r| match r.outcome {
            TrialOutcome::Census { budget_truncated, .. } => budget_truncated,
            _ => 0,
        })
        .sum();
    CensusSummary {
        window: window.descriptor(),
        edges: window.graph().edge_count(),
        core_vertices: window.core_count(),
        seeds: records.len(),
        mean_components_per_core_vertex: stats::mean(&cpv),
        components_per_core_vertex_sd: stats::std_dev(&cpv),
        components_per_core_vertex_ci_half_width: stats::Z95 * stats::standard_error(&cpv),
        mean_unknown_fraction: stats::mean(&unknown),
        unknown_fraction_standard_error: stats::standard_error(&unknown),
        budget_truncated,
    }
}
