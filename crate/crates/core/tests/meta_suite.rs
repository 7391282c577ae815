//! Meta-planner integration tests: the discrete bounded-suboptimal loop
//! against its Dijkstra oracle, anytime/restart agreement on first paths,
//! shrinkage diagnostics, and the geometric decay consistency check.

mod common;

use std::sync::Mutex;

use aox_core::meta::{
    ao_plan, bounded_suboptimal, m_x_plan, shrinkage_diagnostic, MetaResult, Termination,
};
use aox_core::planners::{Budget, NullMonitor, PlannerConfig, PlannerKind};
use aox_core::problems::make_kink;
use common::GridWorld;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

// Timed or CPU-heavy tests take this lock so they never run concurrently.
static HEAVY: Mutex<()> = Mutex::new(());

fn heavy_lock() -> std::sync::MutexGuard<'static, ()> {
    HEAVY.lock().unwrap_or_else(|e| e.into_inner())
}

#[test]
fn grid_bounded_suboptimal_meets_the_tolerance() {
    for seed in 0..8u64 {
        let world = GridWorld::random(8, seed);
        let c_star = world.dijkstra().unwrap() as f64;
        for eps in [1.0, 2.0, 5.0] {
            let r = bounded_suboptimal(eps, |cbar| world.complete_bfs_plan(cbar), 10_000).unwrap();
            assert_eq!(r.termination, Termination::Converged);
            let final_cost = r.final_cost().unwrap();
            assert!(
                final_cost <= c_star + eps,
                "seed {seed} eps {eps}: {final_cost} vs C* {c_star}"
            );
            let c0 = r.first_cost().unwrap();
            let improving = r.events.len() - 1;
            let cap = ((c0 - c_star) / eps).ceil() as usize;
            assert!(improving <= cap, "seed {seed} eps {eps}: {improving} loops > cap {cap}");
            // Costs decrease by at least eps per improving iteration.
            for pair in r.events.windows(2) {
                assert!(pair[1].cost <= pair[0].cost - eps + 1e-9);
            }
        }
    }
}

#[test]
fn grid_walled_goal_reports_infeasible() {
    let world = GridWorld::walled(8, 3);
    assert!(world.dijkstra().is_none());
    let r = bounded_suboptimal(1.0, |cbar| world.complete_bfs_plan(cbar), 10_000).unwrap();
    assert_eq!(r.termination, Termination::Infeasible);
    assert!(r.best.is_none());
}

#[test]
fn grid_start_in_goal_terminates_first_iteration() {
    let mut world = GridWorld::random(8, 5);
    world.goal = world.start;
    let r = bounded_suboptimal(1.0, |cbar| world.complete_bfs_plan(cbar), 10_000).unwrap();
    assert_eq!(r.termination, Termination::Converged);
    assert_eq!(r.final_cost(), Some(0.0));
    assert_eq!(r.events.len(), 1);
}

#[test]
fn restart_baseline_first_path_matches_anytime_planner() {
    // Same seed, prune = false: both run the identical unbounded first call
    // on the identical RNG stream, so the first event must agree exactly.
    let _lock = heavy_lock();
    let kink = make_kink();
    let cfg = PlannerConfig { cost_weight: 1.0, ..Default::default() };
    for seed in [0u64, 1, 2] {
        let budget = Budget::iterations(400_000);
        let mut rng_a = ChaCha8Rng::seed_from_u64(seed);
        let ao: MetaResult =
            ao_plan(&kink, PlannerKind::Est, &cfg, budget, &mut rng_a, &mut NullMonitor).unwrap();
        let mut rng_m = ChaCha8Rng::seed_from_u64(seed);
        let m: MetaResult =
            m_x_plan(&kink, PlannerKind::Est, &cfg, budget, false, &mut rng_m, &mut NullMonitor)
                .unwrap();
        let (Some(a0), Some(m0)) = (ao.first_cost(), m.first_cost()) else {
            panic!("seed {seed}: a planner found no first path");
        };
        assert_eq!(a0, m0, "seed {seed}: first paths diverged");
        assert_eq!(
            ao.events[0].planner_iterations, m.events[0].planner_iterations,
            "seed {seed}: first paths found at different iterations"
        );
    }
}

#[test]
fn unbounded_shrinkage_trials_equal_restart_first_paths() {
    // With cbar = ∞ the diagnostic runs exactly the restart baseline's
    // first call, so per-seed costs coincide.
    let _lock = heavy_lock();
    let kink = make_kink();
    let cfg = PlannerConfig { cost_weight: 1.0, ..Default::default() };
    let n = 4;
    let est = shrinkage_diagnostic(
        &kink,
        PlannerKind::Est,
        &cfg,
        f64::INFINITY,
        0.0,
        n,
        100,
        None,
        Some(400_000),
    )
    .unwrap();
    assert_eq!(est.failures, 0, "unbounded trials must all find a path");
    assert!(est.w_hat.is_none(), "ŵ is undefined for an unbounded cbar");
    for (t, &cost) in est.costs.iter().enumerate() {
        let mut rng = ChaCha8Rng::seed_from_u64(100 + t as u64);
        let m = m_x_plan(
            &kink,
            PlannerKind::Est,
            &cfg,
            Budget::iterations(400_000),
            false,
            &mut rng,
            &mut NullMonitor,
        )
        .unwrap();
        assert_eq!(m.first_cost(), Some(cost), "trial {t} diverged from the restart baseline");
    }
}

#[test]
fn anytime_cost_sequences_strictly_decrease_and_prune_holds() {
    let _lock = heavy_lock();
    let kink = make_kink();
    let cfg = PlannerConfig { cost_weight: 1.0, ..Default::default() };
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let r = ao_plan(
        &kink,
        PlannerKind::Est,
        &cfg,
        Budget::iterations(600_000),
        &mut rng,
        &mut NullMonitor,
    )
    .unwrap();
    assert!(r.events.len() >= 2, "expected several improvements");
    for pair in r.events.windows(2) {
        assert!(pair[1].cost < pair[0].cost - 1e-12, "cost sequence not strictly decreasing");
    }
    assert_eq!(r.final_cost(), r.best.as_ref().unwrap().total_cost());
}

#[test]
fn suboptimality_decays_inside_the_geometric_envelope() {
    // Consistency check of the expected-decay recursion: over repeated
    // anytime runs, mean suboptimality at meta-iteration i is non-increasing
    // and sits below (1 − ŵ)^i of the initial gap. ŵ comes from the
    // shrinkage diagnostic near the optimum; its 95% lower confidence bound
    // absorbs the estimation noise of both sides.
    let _lock = heavy_lock();
    let kink = make_kink();
    let world = kink.world().clone();
    let c_star = world.oracle_optimum.unwrap();
    let cfg = PlannerConfig { cost_weight: 1.0, ..Default::default() };

    let est = shrinkage_diagnostic(
        &kink,
        PlannerKind::Est,
        &cfg,
        1.2 * c_star,
        c_star,
        30,
        500,
        None,
        Some(400_000),
    )
    .unwrap();
    let w_hat = est.w_hat_lower(1.96).expect("bounded diagnostic yields ŵ");
    assert!(w_hat > 0.0, "shrinkage estimate must be positive, got {w_hat}");

    let runs = 20;
    let handles: Vec<_> = (0..runs)
        .map(|seed| {
            let kink = make_kink();
            let cfg = cfg.clone();
            std::thread::spawn(move || {
                let mut rng = ChaCha8Rng::seed_from_u64(1000 + seed);
                ao_plan(
                    &kink,
                    PlannerKind::Est,
                    &cfg,
                    Budget::iterations(500_000),
                    &mut rng,
                    &mut NullMonitor,
                )
                .unwrap()
            })
        })
        .collect();
    let results: Vec<MetaResult> = handles.into_iter().map(|h| h.join().unwrap()).collect();
    let depth = results.iter().map(|r| r.events.len()).min().unwrap();
    assert!(depth >= 3, "runs produced too few solutions to compare ({depth})");

    let mean_gap = |i: usize| {
        results.iter().map(|r| r.events[i].cost - c_star).sum::<f64>() / runs as f64
    };
    let gap0 = mean_gap(0);
    let mut prev = f64::INFINITY;
    for i in 0..depth {
        let gap = mean_gap(i);
        assert!(gap <= prev + 1e-12, "mean suboptimality increased at iteration {i}");
        assert!(
            gap <= (1.0 - w_hat).powi(i as i32) * gap0 + 1e-12,
            "iteration {i}: gap {gap} above envelope {}",
            (1.0 - w_hat).powi(i as i32) * gap0
        );
        prev = gap;
    }
}
