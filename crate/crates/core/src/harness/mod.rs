//! Seeded benchmark trials, cost-versus-time aggregation, and CSV/JSON
//! emission.
//!
//! A trial pins (problem, planner, seed) and records a sample at every cost
//! improvement plus a 0.5 s cadence while planning. Cadence sampling is
//! wall-clock driven and therefore only enabled for pure time-budget runs;
//! iteration-capped runs emit improvement events only, which makes their
//! records reproducible bit-for-bit apart from the wall-clock column.
//!
//! The trial CSV schema is
//! `problem,planner,seed,wall_s,best_cost,tree_size,meta_iter` (header row
//! mandatory, UTF-8, '.' decimal, LF line endings). Aggregation averages
//! best-cost-so-far over runs on a uniform 0.1 s grid with step-hold
//! interpolation; runs without a solution at a grid point are excluded from
//! that point's mean and counted.

use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::meta::{ao_plan, est_runtime_bound, m_x_plan, CostEvent, MetaMonitor, MetaResult};
use crate::planners::{Budget, PlannerConfig, PlannerKind, SearchMonitor};
use crate::problems::{ProblemId, RectObstacleWorld};

/// Aggregation grid spacing in seconds.
pub const GRID_DT: f64 = 0.1;
/// Cadence between passive samples in seconds.
pub const CADENCE_S: f64 = 0.5;

/// Planner names accepted by the harness.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PlannerId {
    AoRrt,
    AoEst,
    MRrt,
    MRrtPrune,
    MEst,
    MEstPrune,
}

impl PlannerId {
    pub const ALL: [PlannerId; 6] = [
        PlannerId::AoRrt,
        PlannerId::AoEst,
        PlannerId::MRrt,
        PlannerId::MRrtPrune,
        PlannerId::MEst,
        PlannerId::MEstPrune,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            PlannerId::AoRrt => "ao-rrt",
            PlannerId::AoEst => "ao-est",
            PlannerId::MRrt => "m-rrt",
            PlannerId::MRrtPrune => "m-rrt-prune",
            PlannerId::MEst => "m-est",
            PlannerId::MEstPrune => "m-est-prune",
        }
    }

    pub fn kind(&self) -> PlannerKind {
        match self {
            PlannerId::AoRrt | PlannerId::MRrt | PlannerId::MRrtPrune => PlannerKind::Rrt,
            PlannerId::AoEst | PlannerId::MEst | PlannerId::MEstPrune => PlannerKind::Est,
        }
    }

    /// Whether this is the anytime planner (as opposed to a restart baseline).
    pub fn is_anytime(&self) -> bool {
        matches!(self, PlannerId::AoRrt | PlannerId::AoEst)
    }

    /// Whether a restart baseline prunes against the incumbent.
    pub fn prunes(&self) -> bool {
        matches!(self, PlannerId::MRrtPrune | PlannerId::MEstPrune)
    }
}

impl std::str::FromStr for PlannerId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        PlannerId::ALL
            .iter()
            .find(|p| p.name() == s)
            .copied()
            .ok_or_else(|| Error::UnknownPlanner(s.to_string()))
    }
}

impl std::fmt::Display for PlannerId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// One recorded sample of a trial.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TrialSample {
    pub wall_seconds: f64,
    pub best_cost: f64,
    pub tree_size: usize,
    pub meta_iteration: usize,
}

/// The timestamped record of one seeded run.
#[derive(Clone, Debug, PartialEq)]
pub struct TrialRecord {
    pub problem: String,
    pub planner: String,
    pub seed: u64,
    pub samples: Vec<TrialSample>,
    pub final_cost: Option<f64>,
}

impl TrialRecord {
    fn push_sample(&mut self, sample: TrialSample) {
        if let Some(last) = self.samples.last() {
            assert!(
                sample.wall_seconds >= last.wall_seconds - 1e-9,
                "wall clock must be non-decreasing"
            );
            assert!(
                sample.best_cost <= last.best_cost + 1e-12,
                "best cost must be non-increasing"
            );
        }
        self.samples.push(sample);
    }

    /// Best cost known at time `t` under step-hold interpolation.
    pub fn best_cost_at(&self, t: f64) -> Option<f64> {
        self.samples
            .iter()
            .take_while(|s| s.wall_seconds <= t)
            .last()
            .map(|s| s.best_cost)
    }

    pub fn first_solution_time(&self) -> Option<f64> {
        self.samples.first().map(|s| s.wall_seconds)
    }
}

/// Full configuration of a benchmark run. Unset optional fields fall back
/// to per-problem defaults.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub problem: String,
    pub planner: String,
    #[serde(default = "default_time_limit")]
    pub time_limit_s: f64,
    #[serde(default = "default_runs")]
    pub runs: usize,
    #[serde(default)]
    pub base_seed: u64,
    /// Cost-axis weight in the RRT metric; per-problem default when unset.
    #[serde(default)]
    pub cost_weight: Option<f64>,
    #[serde(default)]
    pub goal_bias: Option<f64>,
    /// Per-trial iteration cap. Disables cadence sampling, making records
    /// reproducible apart from wall-clock columns.
    #[serde(default)]
    pub max_iterations: Option<u64>,
    /// Iteration cap per restart-baseline inner call.
    #[serde(default)]
    pub per_call_iteration_cap: Option<u64>,
    /// Concurrent trials; defaults to min(runs, available parallelism).
    #[serde(default)]
    pub jobs: Option<usize>,
    #[serde(default)]
    pub out_dir: Option<PathBuf>,
    #[serde(default)]
    pub fixtures_dir: Option<PathBuf>,
}

fn default_time_limit() -> f64 {
    60.0
}

fn default_runs() -> usize {
    10
}

impl RunConfig {
    pub fn new(problem: &str, planner: &str) -> Self {
        Self {
            problem: problem.to_string(),
            planner: planner.to_string(),
            time_limit_s: default_time_limit(),
            runs: default_runs(),
            base_seed: 0,
            cost_weight: None,
            goal_bias: None,
            max_iterations: None,
            per_call_iteration_cap: None,
            jobs: None,
            out_dir: None,
            fixtures_dir: None,
        }
    }
}

/// The cost-axis metric weight each problem runs with unless overridden.
/// The planar path-length problems use weight 1: there the cost coordinate
/// measures cost-to-go exactly and speeds convergence; elsewhere the cost
/// axis is left out of the metric.
pub fn default_cost_weight(problem: ProblemId) -> f64 {
    match problem {
        ProblemId::Kink | ProblemId::Bugtrap => 1.0,
        _ => 0.0,
    }
}

/// The goal-bias probability each problem runs with unless overridden. The
/// pendulum explores without goal biasing: reaching the inverted set is a
/// matter of pumping energy, not of steering toward sampled goal states,
/// and unbiased exploration gives markedly better per-solution improvement.
pub fn default_goal_bias(problem: ProblemId) -> f64 {
    match problem {
        ProblemId::Pendulum => 0.0,
        _ => 0.05,
    }
}

/// Default iteration cap for one restart-baseline inner call.
pub const DEFAULT_PER_CALL_CAP: u64 = 1_000_000;

/// Builds the planner configuration a run will use.
pub fn planner_config(cfg: &RunConfig, problem: ProblemId, planner: PlannerId) -> PlannerConfig {
    PlannerConfig {
        goal_bias: cfg.goal_bias.unwrap_or_else(|| default_goal_bias(problem)),
        cost_weight: cfg.cost_weight.unwrap_or_else(|| default_cost_weight(problem)),
        per_call_iteration_cap: if planner.is_anytime() {
            None
        } else {
            Some(cfg.per_call_iteration_cap.unwrap_or(DEFAULT_PER_CALL_CAP))
        },
        ..PlannerConfig::default()
    }
}

/// Monitor that assembles a [`TrialRecord`] from solution events plus an
/// optional wall-clock cadence.
struct TrialMonitor {
    record: TrialRecord,
    started: Instant,
    cadence: Option<Duration>,
    last_sample: Instant,
    best: Option<(f64, usize)>,
}

impl TrialMonitor {
    fn new(problem: &str, planner: &str, seed: u64, cadence: Option<Duration>) -> Self {
        let now = Instant::now();
        Self {
            record: TrialRecord {
                problem: problem.to_string(),
                planner: planner.to_string(),
                seed,
                samples: Vec::new(),
                final_cost: None,
            },
            started: now,
            cadence,
            last_sample: now,
            best: None,
        }
    }
}

impl SearchMonitor for TrialMonitor {
    fn on_iteration(&mut self, _total_iterations: u64, tree_size: usize) {
        let Some(cadence) = self.cadence else { return };
        let Some((best_cost, meta_iteration)) = self.best else { return };
        let now = Instant::now();
        if now.duration_since(self.last_sample) >= cadence {
            self.last_sample = now;
            self.record.push_sample(TrialSample {
                wall_seconds: now.duration_since(self.started).as_secs_f64(),
                best_cost,
                tree_size,
                meta_iteration,
            });
        }
    }
}

impl MetaMonitor for TrialMonitor {
    fn on_solution(&mut self, event: &CostEvent) {
        self.best = Some((event.cost, event.meta_iteration));
        self.last_sample = Instant::now();
        self.record.push_sample(TrialSample {
            wall_seconds: event.wall_seconds,
            best_cost: event.cost,
            tree_size: event.tree_size,
            meta_iteration: event.meta_iteration,
        });
    }
}

/// Loads a problem's obstacle layout from an explicit fixtures directory.
pub fn load_world(dir: &Path, problem: ProblemId) -> Result<Option<RectObstacleWorld>> {
    match problem.fixture_file() {
        None => Ok(None),
        Some(name) => {
            let path = dir.join(name);
            let text = std::fs::read_to_string(&path)
                .map_err(|_| Error::FixtureMissing(path.display().to_string()))?;
            Ok(Some(RectObstacleWorld::parse(&text)?))
        }
    }
}

/// Runs one seeded trial and returns its record.
pub fn run_trial(
    cfg: &RunConfig,
    problem: ProblemId,
    planner: PlannerId,
    world: Option<RectObstacleWorld>,
    seed: u64,
) -> Result<TrialRecord> {
    let system = problem.build(world);
    let pcfg = planner_config(cfg, problem, planner);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let cadence = if cfg.max_iterations.is_none() {
        Some(Duration::from_secs_f64(CADENCE_S))
    } else {
        None
    };
    let mut monitor = TrialMonitor::new(problem.name(), planner.name(), seed, cadence);
    let budget = Budget {
        deadline: Some(Instant::now() + Duration::from_secs_f64(cfg.time_limit_s)),
        max_iterations: cfg.max_iterations,
    };
    let result: MetaResult = if planner.is_anytime() {
        ao_plan(system.as_ref(), planner.kind(), &pcfg, budget, &mut rng, &mut monitor)?
    } else {
        m_x_plan(
            system.as_ref(),
            planner.kind(),
            &pcfg,
            budget,
            planner.prunes(),
            &mut rng,
            &mut monitor,
        )?
    };
    let mut record = monitor.record;
    record.final_cost = result.final_cost();
    Ok(record)
}

/// Executes `cfg.runs` seeded trials (seeds `base_seed..base_seed+runs`),
/// concurrently up to the jobs limit, and returns the records in seed order.
pub fn run_benchmark(cfg: &RunConfig) -> Result<Vec<TrialRecord>> {
    let problem: ProblemId = cfg.problem.parse()?;
    let planner: PlannerId = cfg.planner.parse()?;
    if cfg.runs < 1 {
        return Err(Error::Config("runs must be at least 1".into()));
    }
    if !(cfg.time_limit_s > 0.0) {
        return Err(Error::Config("time limit must be positive".into()));
    }
    let world = match &cfg.fixtures_dir {
        Some(dir) => load_world(dir, problem)?,
        None => None,
    };
    let jobs = cfg
        .jobs
        .unwrap_or_else(|| std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1))
        .clamp(1, cfg.runs.max(1));
    let seeds: Vec<u64> = (0..cfg.runs as u64).map(|i| cfg.base_seed + i).collect();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| Error::Config(format!("thread pool: {e}")))?;
    pool.install(|| {
        use rayon::prelude::*;
        seeds
            .par_iter()
            .map(|&seed| run_trial(cfg, problem, planner, world.clone(), seed))
            .collect()
    })
}

/// Mean cost-vs-time curve over records of one (problem, planner) pair.
#[derive(Clone, Debug, PartialEq)]
pub struct AggregateCurve {
    pub times: Vec<f64>,
    /// Mean best-cost over the runs that have a solution at each time.
    pub mean_cost: Vec<Option<f64>>,
    /// How many runs were excluded (no solution yet) at each time.
    pub excluded: Vec<usize>,
}

/// Step-hold aggregation on a uniform grid over [0, t_max].
pub fn aggregate(records: &[TrialRecord], grid_dt: f64, t_max: f64) -> AggregateCurve {
    assert!(!records.is_empty(), "aggregate needs at least one record");
    assert!(grid_dt > 0.0 && t_max >= 0.0);
    let n_points = (t_max / grid_dt).floor() as usize + 1;
    let mut times = Vec::with_capacity(n_points);
    let mut mean_cost = Vec::with_capacity(n_points);
    let mut excluded = Vec::with_capacity(n_points);
    for i in 0..n_points {
        let t = i as f64 * grid_dt;
        let mut sum = 0.0;
        let mut count = 0usize;
        let mut missing = 0usize;
        for r in records {
            match r.best_cost_at(t) {
                Some(c) => {
                    sum += c;
                    count += 1;
                }
                None => missing += 1,
            }
        }
        times.push(t);
        mean_cost.push(if count > 0 { Some(sum / count as f64) } else { None });
        excluded.push(missing);
    }
    AggregateCurve { times, mean_cost, excluded }
}

/// Per-pair summary statistics, serialized as the summary JSON.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct Summary {
    pub problem: String,
    pub planner: String,
    pub runs: usize,
    pub mean_final_cost: Option<f64>,
    pub std_final_cost: Option<f64>,
    pub mean_first_solution_s: Option<f64>,
    pub excluded_counts_per_gridpoint: Vec<usize>,
}

pub fn summarize(records: &[TrialRecord], curve: &AggregateCurve) -> Summary {
    let finals: Vec<f64> = records.iter().filter_map(|r| r.final_cost).collect();
    let mean_final = if finals.is_empty() {
        None
    } else {
        Some(finals.iter().sum::<f64>() / finals.len() as f64)
    };
    let std_final = match (mean_final, finals.len()) {
        (Some(m), n) if n >= 2 => {
            Some((finals.iter().map(|c| (c - m).powi(2)).sum::<f64>() / (n as f64 - 1.0)).sqrt())
        }
        (Some(_), _) => Some(0.0),
        _ => None,
    };
    let firsts: Vec<f64> = records.iter().filter_map(|r| r.first_solution_time()).collect();
    let mean_first = if firsts.is_empty() {
        None
    } else {
        Some(firsts.iter().sum::<f64>() / firsts.len() as f64)
    };
    Summary {
        problem: records[0].problem.clone(),
        planner: records[0].planner.clone(),
        runs: records.len(),
        mean_final_cost: mean_final,
        std_final_cost: std_final,
        mean_first_solution_s: mean_first,
        excluded_counts_per_gridpoint: curve.excluded.clone(),
    }
}

/// Serializes trial records to the CSV schema. Floats print in shortest
/// round-trip form so parsing reproduces them bit-for-bit.
pub fn trials_to_csv(records: &[TrialRecord]) -> String {
    let mut out = String::from("problem,planner,seed,wall_s,best_cost,tree_size,meta_iter\n");
    for r in records {
        for s in &r.samples {
            out.push_str(&format!(
                "{},{},{},{},{},{},{}\n",
                r.problem, r.planner, r.seed, s.wall_seconds, s.best_cost, s.tree_size,
                s.meta_iteration
            ));
        }
    }
    out
}

/// Parses the trial CSV back into records (one per contiguous
/// problem/planner/seed group). Trials that never produced a sample have no
/// rows and cannot be reconstructed.
pub fn trials_from_csv(text: &str) -> Result<Vec<TrialRecord>> {
    let mut lines = text.lines();
    let header = lines.next().ok_or_else(|| Error::Config("empty CSV".into()))?;
    if header != "problem,planner,seed,wall_s,best_cost,tree_size,meta_iter" {
        return Err(Error::Config(format!("unexpected CSV header: {header}")));
    }
    let mut records: Vec<TrialRecord> = Vec::new();
    for (i, line) in lines.enumerate() {
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 7 {
            return Err(Error::Config(format!("row {}: expected 7 fields", i + 2)));
        }
        let parse_err = |what: &str| Error::Config(format!("row {}: bad {what}", i + 2));
        let seed: u64 = fields[2].parse().map_err(|_| parse_err("seed"))?;
        let sample = TrialSample {
            wall_seconds: fields[3].parse().map_err(|_| parse_err("wall_s"))?,
            best_cost: fields[4].parse().map_err(|_| parse_err("best_cost"))?,
            tree_size: fields[5].parse().map_err(|_| parse_err("tree_size"))?,
            meta_iteration: fields[6].parse().map_err(|_| parse_err("meta_iter"))?,
        };
        let same_group = records.last().map_or(false, |r: &TrialRecord| {
            r.problem == fields[0] && r.planner == fields[1] && r.seed == seed
        });
        if !same_group {
            records.push(TrialRecord {
                problem: fields[0].to_string(),
                planner: fields[1].to_string(),
                seed,
                samples: Vec::new(),
                final_cost: None,
            });
        }
        let r = records.last_mut().expect("group exists");
        r.samples.push(sample);
        r.final_cost = Some(sample.best_cost);
    }
    Ok(records)
}

/// Aggregate curve as a gnuplot-ready CSV (`nan` marks gridpoints where no
/// run had a solution).
pub fn curve_to_csv(curve: &AggregateCurve) -> String {
    let mut out = String::from("t_s,mean_cost,excluded_runs\n");
    for i in 0..curve.times.len() {
        let mean = curve.mean_cost[i].map_or("nan".to_string(), |m| m.to_string());
        out.push_str(&format!("{},{},{}\n", curve.times[i], mean, curve.excluded[i]));
    }
    out
}

/// The goal-volume grid used for the runtime-bound curves: 120 log-spaced
/// points from 1e-3 up to (but excluding) 1.
pub fn fig4_goal_volumes() -> Vec<f64> {
    (0..120).map(|i| 10f64.powf(-3.0 + 0.025 * i as f64)).collect()
}

/// The (α, β) visibility constants for the easy, medium, and hard spaces.
pub const FIG4_CONSTANTS: [(f64, f64); 3] = [(0.04, 0.04), (0.02, 0.02), (0.01, 0.01)];

/// Expected-runtime bound curves (seconds at 1000 samples/s) per difficulty.
pub fn fig4_csv_string() -> Result<String> {
    let mut out = String::from("g,easy_s,medium_s,hard_s\n");
    for g in fig4_goal_volumes() {
        let mut row = vec![g.to_string()];
        for (alpha, beta) in FIG4_CONSTANTS {
            let b = est_runtime_bound(g, alpha, beta)?;
            row.push((b.expected_samples / 1000.0).to_string());
        }
        out.push_str(&row.join(","));
        out.push('\n');
    }
    Ok(out)
}

/// Writes the runtime-bound curves CSV.
pub fn emit_fig4_curves(path: &Path) -> Result<()> {
    let mut f = std::fs::File::create(path)?;
    f.write_all(fig4_csv_string()?.as_bytes())?;
    Ok(())
}

/// Writes the per-trial CSV, aggregate-curve CSV, and summary JSON for one
/// benchmark's records. Returns the written paths.
pub fn write_outputs(
    out_dir: &Path,
    cfg: &RunConfig,
    records: &[TrialRecord],
) -> Result<Vec<PathBuf>> {
    std::fs::create_dir_all(out_dir)?;
    let stem = format!("{}_{}", cfg.problem, cfg.planner);
    let trials_path = out_dir.join(format!("{stem}.csv"));
    std::fs::write(&trials_path, trials_to_csv(records))?;
    let curve = aggregate(records, GRID_DT, cfg.time_limit_s);
    let curve_path = out_dir.join(format!("{stem}_curve.csv"));
    std::fs::write(&curve_path, curve_to_csv(&curve))?;
    let summary_path = out_dir.join(format!("{stem}_summary.json"));
    let summary = summarize(records, &curve);
    std::fs::write(&summary_path, serde_json::to_string_pretty(&summary)?)?;
    Ok(vec![trials_path, curve_path, summary_path])
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Config(format!("JSON: {e}"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn record(seed: u64, samples: &[(f64, f64)]) -> TrialRecord {
        let mut r = TrialRecord {
            problem: "kink".into(),
            planner: "ao-est".into(),
            seed,
            samples: Vec::new(),
            final_cost: None,
        };
        for &(t, c) in samples {
            r.push_sample(TrialSample {
                wall_seconds: t,
                best_cost: c,
                tree_size: 1,
                meta_iteration: 0,
            });
        }
        r.final_cost = r.samples.last().map(|s| s.best_cost);
        r
    }

    #[test]
    fn single_record_curve_is_its_own_step_function() {
        let r = record(0, &[(0.25, 10.0), (0.75, 6.0)]);
        let c = aggregate(std::slice::from_ref(&r), 0.1, 1.0);
        assert_eq!(c.mean_cost[0], None);
        assert_eq!(c.mean_cost[3], Some(10.0)); // t = 0.3
        assert_eq!(c.mean_cost[7], Some(10.0)); // t = 0.7
        assert_eq!(c.mean_cost[8], Some(6.0)); // t = 0.8
        assert_eq!(c.excluded[0], 1);
        assert_eq!(c.excluded[8], 0);
    }

    #[test]
    fn two_constant_records_average_midway() {
        let a = record(0, &[(0.0, 2.0)]);
        let b = record(1, &[(0.0, 4.0)]);
        let c = aggregate(&[a, b], 0.1, 0.5);
        for m in &c.mean_cost {
            assert_eq!(*m, Some(3.0));
        }
    }

    #[test]
    fn aggregation_matches_hand_recomputation() {
        // Three fixture records recomputed by hand:
        //   r1 improves at 0.2 s (10) and 1.0 s (6)
        //   r2 improves at 0.5 s (8)
        //   r3 improves at 1.5 s (7)
        let r1 = record(0, &[(0.2, 10.0), (1.0, 6.0)]);
        let r2 = record(1, &[(0.5, 8.0)]);
        let r3 = record(2, &[(1.5, 7.0)]);
        let c = aggregate(&[r1, r2, r3], 0.1, 2.0);
        let at = |t: f64| {
            let i = (t / 0.1).round() as usize;
            (c.mean_cost[i], c.excluded[i])
        };
        assert_eq!(at(0.0), (None, 3));
        assert_eq!(at(0.2), (Some(10.0), 2));
        assert_eq!(at(0.5), (Some(9.0), 1)); // (10 + 8) / 2
        assert_eq!(at(0.9), (Some(9.0), 1));
        assert_eq!(at(1.0), (Some(7.0), 1)); // (6 + 8) / 2
        assert_eq!(at(1.5), (Some(7.0), 0)); // (6 + 8 + 7) / 3
        assert_eq!(at(2.0), (Some(7.0), 0));
    }

    #[test]
    fn csv_round_trip_is_exact() {
        let r1 = record(3, &[(0.123456789012345, 1.0000000000000002), (0.9, 0.3333333333333333)]);
        let r2 = record(4, &[(1.5e-3, 9.87654321e8)]);
        let text = trials_to_csv(&[r1.clone(), r2.clone()]);
        let parsed = trials_from_csv(&text).unwrap();
        assert_eq!(parsed, vec![r1, r2]);
    }

    #[test]
    fn csv_rejects_bad_input() {
        assert!(trials_from_csv("nope\n").is_err());
        let text = "problem,planner,seed,wall_s,best_cost,tree_size,meta_iter\nkink,ao-est,0,1.0\n";
        assert!(trials_from_csv(text).is_err());
    }

    #[test]
    #[should_panic(expected = "best cost must be non-increasing")]
    fn record_rejects_cost_increase() {
        record(0, &[(0.1, 1.0), (0.2, 2.0)]);
    }

    #[test]
    fn planner_names_round_trip() {
        for p in PlannerId::ALL {
            let parsed: PlannerId = p.name().parse().unwrap();
            assert_eq!(parsed, p);
        }
        assert!("rrt-star".parse::<PlannerId>().is_err());
    }

    #[test]
    fn fig4_curves_are_ordered_and_monotone() {
        let text = fig4_csv_string().unwrap();
        let mut prev: Option<(f64, f64, f64)> = None;
        for line in text.lines().skip(1) {
            let v: Vec<f64> = line.split(',').map(|t| t.parse().unwrap()).collect();
            let (easy, medium, hard) = (v[1], v[2], v[3]);
            assert!(easy < medium && medium < hard, "difficulty ordering broken at g={}", v[0]);
            if let Some((pe, pm, ph)) = prev {
                // Monotone decreasing in g for every difficulty.
                assert!(easy <= pe && medium <= pm && hard <= ph);
            }
            prev = Some((easy, medium, hard));
        }
        assert_eq!(text.lines().count(), 121);
    }

    #[test]
    fn unknown_problem_or_planner_fails_before_running() {
        let cfg = RunConfig::new("nonesuch", "ao-est");
        assert!(matches!(run_benchmark(&cfg), Err(Error::UnknownProblem(_))));
        let cfg = RunConfig::new("kink", "nonesuch");
        assert!(matches!(run_benchmark(&cfg), Err(Error::UnknownPlanner(_))));
    }

    #[test]
    fn invalid_run_parameters_are_config_errors() {
        let mut cfg = RunConfig::new("kink", "ao-est");
        cfg.runs = 0;
        assert!(matches!(run_benchmark(&cfg), Err(Error::Config(_))));
        let mut cfg = RunConfig::new("kink", "ao-est");
        cfg.time_limit_s = 0.0;
        assert!(matches!(run_benchmark(&cfg), Err(Error::Config(_))));
    }

    #[test]
    fn missing_fixture_directory_is_distinguished() {
        let mut cfg = RunConfig::new("kink", "ao-est");
        cfg.fixtures_dir = Some(PathBuf::from("/nonexistent-fixtures"));
        assert!(matches!(run_benchmark(&cfg), Err(Error::FixtureMissing(_))));
    }
}
