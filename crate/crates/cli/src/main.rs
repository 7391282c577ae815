//! `aox` — seeded benchmark runs, analytic bound curves, oracle
//! recomputation, and fixture rendering for the state-cost planners.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, Context};
use clap::{Args, Parser, Subcommand};

use aox_core::harness::{
    aggregate, emit_fig4_curves, run_benchmark, summarize, write_outputs, RunConfig, GRID_DT,
};
use aox_core::oracle::grid_shortest_path;
use aox_core::problems::{ProblemId, RectObstacleWorld, WorldGoal};
use aox_core::Error;

#[derive(Parser)]
#[command(
    name = "aox",
    version,
    about = "Anytime asymptotically-optimal kinodynamic planning benchmarks"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run seeded benchmark trials and write CSV/JSON outputs.
    Run(RunArgs),
    /// Emit the analytic expected-runtime bound curves as CSV.
    Fig4 {
        /// Output CSV path.
        #[arg(long, default_value = "fig4.csv")]
        out: PathBuf,
    },
    /// Recompute a planar problem's grid-Dijkstra optimum and compare it to
    /// the value stored in its fixture.
    Oracle {
        /// Problem name (kink or bugtrap).
        #[arg(long)]
        problem: String,
        /// Grid resolution per axis.
        #[arg(long, default_value_t = 1000)]
        resolution: usize,
        /// Directory holding fixture files (embedded layouts otherwise).
        #[arg(long)]
        fixtures_dir: Option<PathBuf>,
    },
    /// Render a problem's obstacle layout to an SVG for visual comparison.
    Render {
        /// Problem name with a planar layout (kink, bugtrap, flappy).
        #[arg(long)]
        problem: String,
        /// Output SVG path (defaults to <problem>.svg).
        #[arg(long)]
        out: Option<PathBuf>,
        /// Directory holding fixture files (embedded layouts otherwise).
        #[arg(long)]
        fixtures_dir: Option<PathBuf>,
    },
}

/// Flags mirror the run-configuration fields; unset flags fall back to the
/// config file (when given), then to built-in defaults.
#[derive(Args)]
struct RunArgs {
    /// TOML file with run-configuration fields.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    problem: Option<String>,
    /// One of: ao-rrt, ao-est, m-rrt, m-rrt-prune, m-est, m-est-prune.
    #[arg(long)]
    planner: Option<String>,
    /// Wall-clock budget per trial, in seconds.
    #[arg(long)]
    time_limit: Option<f64>,
    /// Number of seeded trials (seeds base_seed..base_seed+runs).
    #[arg(long)]
    runs: Option<usize>,
    /// Base seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Cost-axis weight in the RRT metric.
    #[arg(long)]
    cost_weight: Option<f64>,
    /// Probability of goal-biased target sampling.
    #[arg(long)]
    goal_bias: Option<f64>,
    /// Per-trial iteration cap (disables cadence sampling; reproducible).
    #[arg(long)]
    max_iterations: Option<u64>,
    /// Iteration cap per restart-baseline inner call.
    #[arg(long)]
    per_call_cap: Option<u64>,
    /// Concurrent trials.
    #[arg(long)]
    jobs: Option<usize>,
    /// Output directory for CSV/JSON files.
    #[arg(long)]
    out_dir: Option<PathBuf>,
    /// Directory holding fixture files.
    #[arg(long)]
    fixtures_dir: Option<PathBuf>,
}

fn main() -> ExitCode {
    match run() {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(exit_code_for(&err))
        }
    }
}

/// Exit codes: 0 success, 2 configuration error, 3 missing fixture,
/// 1 anything else.
fn exit_code_for(err: &anyhow::Error) -> u8 {
    match err.downcast_ref::<Error>() {
        Some(Error::FixtureMissing(_)) => 3,
        Some(
            Error::Config(_)
            | Error::UnknownProblem(_)
            | Error::UnknownPlanner(_)
            | Error::InvalidParameter(_)
            | Error::FixtureParse { .. },
        ) => 2,
        _ => 1,
    }
}

fn run() -> anyhow::Result<()> {
    match Cli::parse().command {
        Command::Run(args) => cmd_run(args),
        Command::Fig4 { out } => {
            emit_fig4_curves(&out)?;
            println!("wrote {}", out.display());
            Ok(())
        }
        Command::Oracle { problem, resolution, fixtures_dir } => {
            cmd_oracle(&problem, resolution, fixtures_dir.as_deref())
        }
        Command::Render { problem, out, fixtures_dir } => {
            cmd_render(&problem, out, fixtures_dir.as_deref())
        }
    }
}

fn merged_config(args: RunArgs) -> anyhow::Result<RunConfig> {
    let mut cfg = match &args.config {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .with_context(|| format!("reading config {}", path.display()))?;
            toml::from_str::<RunConfig>(&text)
                .map_err(|e| anyhow::Error::new(Error::Config(format!("config file: {e}"))))?
        }
        None => {
            let problem = args.problem.clone().ok_or_else(|| {
                Error::Config("--problem is required without a config file".into())
            })?;
            let planner = args.planner.clone().ok_or_else(|| {
                Error::Config("--planner is required without a config file".into())
            })?;
            RunConfig::new(&problem, &planner)
        }
    };
    // Explicit flags override the file.
    if let Some(v) = args.problem {
        cfg.problem = v;
    }
    if let Some(v) = args.planner {
        cfg.planner = v;
    }
    if let Some(v) = args.time_limit {
        cfg.time_limit_s = v;
    }
    if let Some(v) = args.runs {
        cfg.runs = v;
    }
    if let Some(v) = args.seed {
        cfg.base_seed = v;
    }
    if let Some(v) = args.cost_weight {
        cfg.cost_weight = Some(v);
    }
    if let Some(v) = args.goal_bias {
        cfg.goal_bias = Some(v);
    }
    if let Some(v) = args.max_iterations {
        cfg.max_iterations = Some(v);
    }
    if let Some(v) = args.per_call_cap {
        cfg.per_call_iteration_cap = Some(v);
    }
    if let Some(v) = args.jobs {
        cfg.jobs = Some(v);
    }
    if let Some(v) = args.out_dir {
        cfg.out_dir = Some(v);
    }
    if let Some(v) = args.fixtures_dir {
        cfg.fixtures_dir = Some(v);
    }
    Ok(cfg)
}

fn cmd_run(args: RunArgs) -> anyhow::Result<()> {
    let cfg = merged_config(args)?;
    let records = run_benchmark(&cfg)?;
    let curve = aggregate(&records, GRID_DT, cfg.time_limit_s);
    let summary = summarize(&records, &curve);
    let out_dir = cfg.out_dir.clone().unwrap_or_else(|| PathBuf::from("out"));
    let paths = write_outputs(&out_dir, &cfg, &records)?;
    println!(
        "{} × {} | runs {} | mean final cost {} | mean first solution {}",
        summary.problem,
        summary.planner,
        summary.runs,
        summary.mean_final_cost.map_or("n/a".to_string(), |v| format!("{v:.6}")),
        summary.mean_first_solution_s.map_or("n/a".to_string(), |v| format!("{v:.2}s")),
    );
    for p in paths {
        println!("wrote {}", p.display());
    }
    Ok(())
}

fn load_world_for(
    problem: ProblemId,
    fixtures_dir: Option<&Path>,
) -> anyhow::Result<RectObstacleWorld> {
    match fixtures_dir {
        Some(dir) => Ok(aox_core::harness::load_world(dir, problem)?
            .ok_or_else(|| anyhow!("problem '{problem}' has no obstacle layout"))?),
        None => problem
            .embedded_world()
            .ok_or_else(|| anyhow!("problem '{problem}' has no obstacle layout")),
    }
}

fn cmd_oracle(problem: &str, resolution: usize, fixtures_dir: Option<&Path>) -> anyhow::Result<()> {
    let id: ProblemId = problem.parse::<ProblemId>().map_err(anyhow::Error::new)?;
    if !matches!(id, ProblemId::Kink | ProblemId::Bugtrap) {
        return Err(Error::Config(format!("no grid oracle for problem '{problem}'")).into());
    }
    let world = load_world_for(id, fixtures_dir)?;
    let value = grid_shortest_path(&world, resolution)
        .ok_or_else(|| anyhow!("goal unreachable at resolution {resolution}"))?;
    println!("{problem} grid optimum at {resolution}²: {value}");
    match world.oracle_optimum {
        Some(stored) => {
            let rel = ((value - stored) / stored).abs();
            println!("stored fixture value: {stored} (relative difference {rel:.2e})");
        }
        None => println!("fixture has no stored value; add `oracle_optimum {value}`"),
    }
    Ok(())
}

/// Writes a simple SVG of the layout: obstacles gray, start green dot, goal
/// green outline.
fn cmd_render(
    problem: &str,
    out: Option<PathBuf>,
    fixtures_dir: Option<&Path>,
) -> anyhow::Result<()> {
    let id: ProblemId = problem.parse::<ProblemId>().map_err(anyhow::Error::new)?;
    let world = load_world_for(id, fixtures_dir)?;
    let out = out.unwrap_or_else(|| PathBuf::from(format!("{problem}.svg")));
    let d = world.domain;
    let scale = 800.0 / d.w.max(d.h);
    let (w_px, h_px) = (d.w * scale, d.h * scale);
    // Flip y so the layout renders with y increasing upward.
    let tx = |x: f64| (x - d.x) * scale;
    let ty = |y: f64| h_px - (y - d.y) * scale;
    let mut svg = format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{w_px:.0}\" height=\"{h_px:.0}\" \
         viewBox=\"0 0 {w_px:.2} {h_px:.2}\">\n\
         <rect x=\"0\" y=\"0\" width=\"{w_px:.2}\" height=\"{h_px:.2}\" fill=\"white\" stroke=\"black\"/>\n"
    );
    for r in &world.obstacles {
        svg.push_str(&format!(
            "<rect x=\"{:.2}\" y=\"{:.2}\" width=\"{:.2}\" height=\"{:.2}\" fill=\"gray\"/>\n",
            tx(r.x),
            ty(r.y + r.h),
            r.w * scale,
            r.h * scale
        ));
    }
    match world.goal {
        WorldGoal::Disc { cx, cy, radius } => svg.push_str(&format!(
            "<circle cx=\"{:.2}\" cy=\"{:.2}\" r=\"{:.2}\" fill=\"none\" stroke=\"green\" stroke-width=\"2\"/>\n",
            tx(cx),
            ty(cy),
            radius * scale
        )),
        WorldGoal::Rect(r) => svg.push_str(&format!(
            "<rect x=\"{:.2}\" y=\"{:.2}\" width=\"{:.2}\" height=\"{:.2}\" fill=\"none\" stroke=\"green\" stroke-width=\"2\"/>\n",
            tx(r.x),
            ty(r.y + r.h),
            r.w * scale,
            r.h * scale
        )),
    }
    svg.push_str(&format!(
        "<circle cx=\"{:.2}\" cy=\"{:.2}\" r=\"4\" fill=\"green\"/>\n</svg>\n",
        tx(world.start[0]),
        ty(world.start[1])
    ));
    std::fs::write(&out, svg)?;
    println!("wrote {}", out.display());
    Ok(())
}
