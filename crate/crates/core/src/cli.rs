//! Command-line surface.
//!
//! Exit codes: 0 success, 2 usage error, 3 input format error, 4 capacity
//! error, 5 internal invariant violation, 130 interrupted (partial results
//! written and marked truncated).

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::sync::atomic::AtomicBool;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Deserialize;
use serde_json::json;

use crate::edgelist;
use crate::error::{Error, Result};
use crate::experiments::{
    census_experiment, tightness_experiment, CensusConfig, TightnessConfig, TrialRecord, WindowFamily,
};
use crate::forest::{kruskal_mst, kruskal_mst_strict};
use crate::graph::{
    build_grid_box_with, build_path, build_rooted_tree_with, direct_product_with, Capacity, Graph, RootedTreeSpec,
};
use crate::labeling::EdgeLabeling;
use crate::manifest::{self, parse_seed, RunManifest};
use crate::window::{DEFAULT_MARGIN, DEFAULT_NODE_BUDGET};

pub const EXIT_INTERRUPTED: i32 = 130;

#[derive(Debug, Parser)]
#[command(name = "prodforest", version, about = "Minimal spanning forests on product graphs")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate a graph and write it as an edge list.
    GenGraph(GenGraphArgs),
    /// Minimal spanning tree (forest) of an edge-list graph.
    Mst(MstArgs),
    /// L_n Monte Carlo on T_d(n) x T_b(n).
    LnExperiment(LnArgs),
    /// Certified FMSF component census over windows.
    FmsfCensus(CensusArgs),
    /// Re-check every digest recorded in a manifest.
    Verify(VerifyArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum GraphKind {
    RootedTree,
    Grid,
    Product,
    Path,
}

#[derive(Debug, Args)]
pub struct GenGraphArgs {
    pub kind: GraphKind,
    /// Tree degree (rooted-tree).
    #[arg(long)]
    pub d: Option<usize>,
    /// Tree depth (rooted-tree).
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub width: Option<usize>,
    #[arg(long)]
    pub height: Option<usize>,
    /// Vertex count (path).
    #[arg(long)]
    pub vertices: Option<usize>,
    /// Left factor edge list (product).
    #[arg(long)]
    pub left: Option<PathBuf>,
    /// Right factor edge list (product).
    #[arg(long)]
    pub right: Option<PathBuf>,
    #[arg(long)]
    pub max_edges: Option<usize>,
    #[arg(long, default_value = "graph.edgelist")]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct MstArgs {
    #[arg(long)]
    pub graph: PathBuf,
    /// Decimal or 0x-hex.
    #[arg(long)]
    pub seed: String,
    #[arg(long)]
    pub out: PathBuf,
    /// Fail on disconnected input instead of returning a forest.
    #[arg(long)]
    pub strict: bool,
}

#[derive(Debug, Args)]
pub struct LnArgs {
    /// TOML file with an `[ln]` table; flags override it.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub d: Option<usize>,
    #[arg(long)]
    pub b: Option<usize>,
    #[arg(long, value_delimiter = ',')]
    pub n_list: Option<Vec<usize>>,
    #[arg(long)]
    pub trials: Option<usize>,
    #[arg(long)]
    pub seed: Option<String>,
    /// Probe points M; default: quantiles of the smallest-n sample.
    #[arg(long, value_delimiter = ',')]
    pub probes: Option<Vec<f64>>,
    /// Worker threads; default: logical CPU count.
    #[arg(long)]
    pub workers: Option<usize>,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FamilyArg {
    TreeProduct,
    Grid,
    FiniteGrid,
}

#[derive(Debug, Args)]
pub struct CensusArgs {
    /// TOML file with a `[census]` table; flags override it.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub family: Option<FamilyArg>,
    #[arg(long)]
    pub d: Option<usize>,
    #[arg(long)]
    pub b: Option<usize>,
    /// Radii for tree-product (`3,4`), `WxH` boxes for grids (`20x20,30x30`).
    #[arg(long, value_delimiter = ',')]
    pub sizes: Option<Vec<String>>,
    /// Number of label seeds per window.
    #[arg(long)]
    pub seeds: Option<usize>,
    #[arg(long)]
    pub seed: Option<String>,
    #[arg(long)]
    pub margin: Option<u32>,
    /// Cluster-search node budget per edge.
    #[arg(long)]
    pub budget: Option<usize>,
    #[arg(long)]
    pub workers: Option<usize>,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    pub manifest: PathBuf,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
enum SeedValue {
    Int(u64),
    Text(String),
}

impl SeedValue {
    fn into_string(self) -> String {
        match self {
            SeedValue::Int(i) => i.to_string(),
            SeedValue::Text(s) => s,
        }
    }
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct LnFile {
    d: Option<usize>,
    b: Option<usize>,
    n_list: Option<Vec<usize>>,
    trials: Option<usize>,
    seed: Option<SeedValue>,
    probes: Option<Vec<f64>>,
    workers: Option<usize>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct CensusFile {
    family: Option<FamilyArg>,
    d: Option<usize>,
    b: Option<usize>,
    sizes: Option<Vec<String>>,
    seeds: Option<usize>,
    seed: Option<SeedValue>,
    margin: Option<u32>,
    budget: Option<usize>,
    workers: Option<usize>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct BatchFile {
    #[serde(default)]
    ln: Option<LnFile>,
    #[serde(default)]
    census: Option<CensusFile>,
}

fn read_batch(path: &Path) -> Result<BatchFile> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    toml::from_str(&text).map_err(|e| Error::Format {
        path: path.to_path_buf(),
        line: e.span().map(|s| text[..s.start].lines().count().max(1)).unwrap_or(1),
        message: e.message().to_string(),
    })
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, S>(args: I, cancel: &AtomicBool) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<String>,
{
    let args: Vec<String> = args.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    match execute(cli, args, cancel) {
        Ok(Outcome::Complete) => 0,
        Ok(Outcome::Truncated) => {
            eprintln!("interrupted: partial results written and marked truncated");
            EXIT_INTERRUPTED
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Complete,
    Truncated,
}

pub fn execute(cli: Cli, command_line: Vec<String>, cancel: &AtomicBool) -> Result<Outcome> {
    match cli.command {
        Command::GenGraph(a) => gen_graph(a, command_line),
        Command::Mst(a) => mst(a, command_line),
        Command::LnExperiment(a) => ln_experiment(a, command_line, cancel),
        Command::FmsfCensus(a) => fmsf_census(a, command_line, cancel),
        Command::Verify(a) => verify(a),
    }
}

fn need<T>(value: Option<T>, flag: &str, kind: &str) -> Result<T> {
    value.ok_or_else(|| Error::Parameter(format!("{kind} requires --{flag}")))
}

fn sibling_manifest(out: &Path) -> PathBuf {
    let mut name = out.file_name().unwrap_or_default().to_os_string();
    name.push(".manifest.json");
    out.with_file_name(name)
}

fn base_dir(out: &Path) -> PathBuf {
    match out.parent() {
        Some(p) if !p.as_os_str().is_empty() => p.to_path_buf(),
        _ => PathBuf::from("."),
    }
}

fn gen_graph(a: GenGraphArgs, command_line: Vec<String>) -> Result<Outcome> {
    let mut cap = Capacity::default();
    if let Some(m) = a.max_edges {
        cap.max_edges = m;
    }
    let (graph, params): (Graph, _) = match a.kind {
        GraphKind::RootedTree => {
            let (d, n) = (need(a.d, "d", "rooted-tree")?, need(a.n, "n", "rooted-tree")?);
            (
                build_rooted_tree_with(RootedTreeSpec::new(d, n)?, cap)?,
                json!({"kind": "rooted-tree", "d": d, "n": n}),
            )
        }
        GraphKind::Grid => {
            let (w, h) = (need(a.width, "width", "grid")?, need(a.height, "height", "grid")?);
            (
                build_grid_box_with(w, h, cap)?,
                json!({"kind": "grid", "width": w, "height": h}),
            )
        }
        GraphKind::Path => {
            let n = need(a.vertices, "vertices", "path")?;
            (build_path(n)?, json!({"kind": "path", "vertices": n}))
        }
        GraphKind::Product => {
            let left = need(a.left, "left", "product")?;
            let right = need(a.right, "right", "product")?;
            let lg = edgelist::read_file(&left)?.graph;
            let rg = edgelist::read_file(&right)?.graph;
            let params = json!({
                "kind": "product",
                "left": left.to_string_lossy(),
                "right": right.to_string_lossy(),
            });
            (direct_product_with(&lg, &rg, cap)?, params)
        }
    };
    edgelist::write_file(&a.out, &graph, None)?;
    let mut m = RunManifest::begin(command_line, None, params);
    m.add_output(&base_dir(&a.out), &a.out)?;
    m.finish_and_write(&sibling_manifest(&a.out))?;
    Ok(Outcome::Complete)
}

fn mst(a: MstArgs, command_line: Vec<String>) -> Result<Outcome> {
    let seed = parse_seed(&a.seed)?;
    let input = edgelist::read_file(&a.graph)?;
    let labels = EdgeLabeling::new(seed);
    let forest = if a.strict {
        kruskal_mst_strict(&input.graph, &labels)?
    } else {
        kruskal_mst(&input.graph, &labels)
    };
    let mut tree = forest.to_graph();
    tree.set_descriptor(format!("mst({})", input.graph.descriptor()));
    edgelist::write_file(&a.out, &tree, Some(forest.total_label(&labels)))?;
    let params = json!({
        "graph": a.graph.to_string_lossy(),
        "strict": a.strict,
        "spanning": forest.is_spanning(),
        "components": forest.component_count(),
    });
    let mut m = RunManifest::begin(command_line, Some(&a.seed), params);
    m.add_output(&base_dir(&a.out), &a.out)?;
    m.finish_and_write(&sibling_manifest(&a.out))?;
    Ok(Outcome::Complete)
}

fn with_workers<T: Send>(workers: Option<usize>, job: impl FnOnce() -> T + Send) -> Result<T> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.unwrap_or(0))
        .build()
        .map_err(|e| Error::Parameter(format!("cannot start worker pool: {e}")))?;
    Ok(pool.install(job))
}

struct ExperimentOutput {
    dir: PathBuf,
    trials: BufWriter<File>,
}

impl ExperimentOutput {
    fn create(dir: &Path) -> Result<Self> {
        std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
        let path = dir.join("trials.jsonl");
        let file = File::create(&path).map_err(|e| Error::io(&path, e))?;
        Ok(ExperimentOutput {
            dir: dir.to_path_buf(),
            trials: BufWriter::new(file),
        })
    }

    fn push(&mut self, r: &TrialRecord) -> Result<()> {
        let path = self.dir.join("trials.jsonl");
        serde_json::to_writer(&mut self.trials, r)?;
        self.trials.write_all(b"\n").map_err(|e| Error::io(&path, e))
    }

    fn finish(
        mut self,
        report: &impl serde::Serialize,
        csv: &str,
        mut manifest: RunManifest,
        truncated: bool,
    ) -> Result<Outcome> {
        let trials_path = self.dir.join("trials.jsonl");
        self.trials.flush().map_err(|e| Error::io(&trials_path, e))?;
        let report_path = self.dir.join("report.json");
        let mut text = serde_json::to_string_pretty(report)?;
        text.push('\n');
        std::fs::write(&report_path, text).map_err(|e| Error::io(&report_path, e))?;
        let csv_path = self.dir.join("report.csv");
        std::fs::write(&csv_path, csv).map_err(|e| Error::io(&csv_path, e))?;
        for p in [&trials_path, &report_path, &csv_path] {
            manifest.add_output(&self.dir, p)?;
        }
        manifest.truncated = truncated;
        manifest.finish_and_write(&self.dir.join("manifest.json"))?;
        Ok(if truncated {
            Outcome::Truncated
        } else {
            Outcome::Complete
        })
    }
}

fn ln_experiment(a: LnArgs, command_line: Vec<String>, cancel: &AtomicBool) -> Result<Outcome> {
    let file = match &a.config {
        Some(p) => read_batch(p)?.ln.unwrap_or_default(),
        None => LnFile::default(),
    };
    let seed_text = a
        .seed
        .or(file.seed.map(SeedValue::into_string))
        .ok_or_else(|| Error::Parameter("ln-experiment requires --seed".into()))?;
    let config = TightnessConfig {
        d: a.d.or(file.d).unwrap_or(3),
        b: a.b.or(file.b).unwrap_or(3),
        n_list: a.n_list.or(file.n_list).unwrap_or_else(|| vec![2, 3, 4]),
        trials: a.trials.or(file.trials).unwrap_or(2000),
        master_seed: parse_seed(&seed_text)?,
        probes: a.probes.or(file.probes),
    };
    let workers = a.workers.or(file.workers);
    if config.trials < 100 {
        eprintln!(
            "warning: {} trials per n is below 100; intervals are not reportable",
            config.trials
        );
    }

    let mut out = ExperimentOutput::create(&a.out)?;
    let report = with_workers(workers, || tightness_experiment(&config, &mut |r| out.push(r), cancel))??;
    let mut params = serde_json::to_value(&config)?;
    params["workers"] = json!(workers);
    let manifest = RunManifest::begin(command_line, Some(&seed_text), params);
    let csv = report.to_csv();
    let truncated = report.truncated;
    out.finish(&report, &csv, manifest, truncated)
}

fn parse_size(family: FamilyArg, s: &str) -> Result<(usize, usize)> {
    let bad = || Error::Parameter(format!("bad window size {s:?}"));
    match family {
        FamilyArg::TreeProduct => Ok((s.trim().parse().map_err(|_| bad())?, 0)),
        FamilyArg::Grid | FamilyArg::FiniteGrid => match s.trim().split_once(['x', 'X']) {
            Some((w, h)) => Ok((w.parse().map_err(|_| bad())?, h.parse().map_err(|_| bad())?)),
            None => {
                let side = s.trim().parse().map_err(|_| bad())?;
                Ok((side, side))
            }
        },
    }
}

fn fmsf_census(a: CensusArgs, command_line: Vec<String>, cancel: &AtomicBool) -> Result<Outcome> {
    let file = match &a.config {
        Some(p) => read_batch(p)?.census.unwrap_or_default(),
        None => CensusFile::default(),
    };
    let family = a
        .family
        .or(file.family)
        .ok_or_else(|| Error::Parameter("fmsf-census requires --family".into()))?;
    let seed_text = a
        .seed
        .or(file.seed.map(SeedValue::into_string))
        .ok_or_else(|| Error::Parameter("fmsf-census requires --seed".into()))?;
    let sizes = a
        .sizes
        .or(file.sizes)
        .ok_or_else(|| Error::Parameter("fmsf-census requires --sizes".into()))?;
    let margin = a.margin.or(file.margin).unwrap_or(DEFAULT_MARGIN);
    let family = match family {
        FamilyArg::TreeProduct => WindowFamily::TreeProduct {
            d: a.d.or(file.d).unwrap_or(3),
            b: a.b.or(file.b).unwrap_or(3),
        },
        FamilyArg::Grid => WindowFamily::Grid,
        FamilyArg::FiniteGrid => WindowFamily::FiniteGrid,
    };
    let family_arg = a.family.or(file.family).expect("checked above");
    let windows = sizes
        .iter()
        .map(|s| parse_size(family_arg, s).map(|size| family.descriptor(size, margin)))
        .collect::<Result<Vec<_>>>()?;
    let config = CensusConfig {
        windows,
        seeds: a.seeds.or(file.seeds).unwrap_or(50),
        master_seed: parse_seed(&seed_text)?,
        node_budget: a.budget.or(file.budget).unwrap_or(DEFAULT_NODE_BUDGET),
    };
    let workers = a.workers.or(file.workers);

    let mut out = ExperimentOutput::create(&a.out)?;
    let report = with_workers(workers, || census_experiment(&config, &mut |r| out.push(r), cancel))??;
    let mut params = serde_json::to_value(&config)?;
    params["family"] = serde_json::to_value(family)?;
    params["workers"] = json!(workers);
    let manifest = RunManifest::begin(command_line, Some(&seed_text), params);
    let csv = report.to_csv();
    let truncated = report.truncated;
    out.finish(&report, &csv, manifest, truncated)
}

fn verify(a: VerifyArgs) -> Result<Outcome> {
    let checks = manifest::verify(&a.manifest)?;
    let mut bad = 0;
    for c in &checks {
        if c.ok {
            println!("ok       {}", c.path.display());
        } else {
            bad += 1;
            println!("MISMATCH {} ({})", c.path.display(), c.detail);
        }
    }
    if bad > 0 {
        return Err(Error::Invariant(format!(
            "{bad} of {} outputs failed verification",
            checks.len()
        )));
    }
    Ok(Outcome::Complete)
}
