//! Benchmark problem factories with the published parameters, and the
//! obstacle-layout fixtures they load.
//!
//! The planar layouts (Kink, Bugtrap, Flappy) live in versioned plain-text
//! fixture files embedded at compile time; `make_*_from` variants accept an
//! externally loaded layout so the harness can point at an alternate
//! fixtures directory.

mod double_integrator;
mod dubins;
mod flappy;
mod kinematic;
mod pendulum;
mod world;

pub use double_integrator::DoubleIntegrator;
pub use dubins::DubinsCar;
pub use flappy::{Flappy, FlappyCost};
pub use kinematic::Kinematic2d;
pub use pendulum::Pendulum;
pub use world::{Rect, RectObstacleWorld, WorldGoal};

use crate::error::{Error, Result};
use crate::system::ControlSystem;

/// Canonical fixture text for the Kink layout.
pub const KINK_FIXTURE: &str = include_str!("../../../../fixtures/kink.txt");
/// Canonical fixture text for the Bugtrap layout.
pub const BUGTRAP_FIXTURE: &str = include_str!("../../../../fixtures/bugtrap.txt");
/// Canonical fixture text for the Flappy layout.
pub const FLAPPY_FIXTURE: &str = include_str!("../../../../fixtures/flappy.txt");

/// Maximum tree-expansion length shared by the planar kinematic problems.
pub const KINEMATIC_MAX_EXPANSION: f64 = 0.15;

/// Narrow-corridor shortest-path problem in the unit square.
pub fn make_kink() -> Kinematic2d {
    let world = RectObstacleWorld::parse(KINK_FIXTURE).expect("embedded kink fixture parses");
    make_kink_from(world)
}

pub fn make_kink_from(world: RectObstacleWorld) -> Kinematic2d {
    Kinematic2d::new(world, KINEMATIC_MAX_EXPANSION)
}

/// Escape-a-local-minimum shortest-path problem in the unit square.
pub fn make_bugtrap() -> Kinematic2d {
    let world = RectObstacleWorld::parse(BUGTRAP_FIXTURE).expect("embedded bugtrap fixture parses");
    make_bugtrap_from(world)
}

pub fn make_bugtrap_from(world: RectObstacleWorld) -> Kinematic2d {
    Kinematic2d::new(world, KINEMATIC_MAX_EXPANSION)
}

/// Sideways-translation car with minimal execution time.
pub fn make_dubins() -> DubinsCar {
    DubinsCar::new()
}

/// Bounded-velocity point mass with minimal execution time.
pub fn make_double_integrator() -> DoubleIntegrator {
    DoubleIntegrator::new()
}

/// Torque-limited pendulum swing-up with minimal execution time.
pub fn make_pendulum() -> Pendulum {
    Pendulum::new()
}

/// Screen-crossing problem with the selected cost function.
pub fn make_flappy(cost: FlappyCost) -> Flappy {
    let world = RectObstacleWorld::parse(FLAPPY_FIXTURE).expect("embedded flappy fixture parses");
    make_flappy_from(world, cost)
}

pub fn make_flappy_from(world: RectObstacleWorld, cost: FlappyCost) -> Flappy {
    Flappy::new(world, cost)
}

/// Problem names accepted by the harness and CLI.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ProblemId {
    Kink,
    Bugtrap,
    Dubins,
    DoubleIntegrator,
    Pendulum,
    Flappy,
    FlappyLowAltitude,
}

impl ProblemId {
    pub const ALL: [ProblemId; 7] = [
        ProblemId::Kink,
        ProblemId::Bugtrap,
        ProblemId::Dubins,
        ProblemId::DoubleIntegrator,
        ProblemId::Pendulum,
        ProblemId::Flappy,
        ProblemId::FlappyLowAltitude,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            ProblemId::Kink => "kink",
            ProblemId::Bugtrap => "bugtrap",
            ProblemId::Dubins => "dubins",
            ProblemId::DoubleIntegrator => "double-integrator",
            ProblemId::Pendulum => "pendulum",
            ProblemId::Flappy => "flappy",
            ProblemId::FlappyLowAltitude => "flappy-low-altitude",
        }
    }

    /// Fixture file name for problems with an obstacle layout.
    pub fn fixture_file(&self) -> Option<&'static str> {
        match self {
            ProblemId::Kink => Some("kink.txt"),
            ProblemId::Bugtrap => Some("bugtrap.txt"),
            ProblemId::Flappy | ProblemId::FlappyLowAltitude => Some("flappy.txt"),
            _ => None,
        }
    }

    /// The embedded canonical layout, where one exists.
    pub fn embedded_world(&self) -> Option<RectObstacleWorld> {
        let text = match self {
            ProblemId::Kink => KINK_FIXTURE,
            ProblemId::Bugtrap => BUGTRAP_FIXTURE,
            ProblemId::Flappy | ProblemId::FlappyLowAltitude => FLAPPY_FIXTURE,
            _ => return None,
        };
        Some(RectObstacleWorld::parse(text).expect("embedded fixture parses"))
    }

    /// Instantiates the problem, optionally over an externally loaded layout.
    pub fn build(&self, world: Option<RectObstacleWorld>) -> Box<dyn ControlSystem + Send + Sync> {
        match self {
            ProblemId::Kink => Box::new(match world {
                Some(w) => make_kink_from(w),
                None => make_kink(),
            }),
            ProblemId::Bugtrap => Box::new(match world {
                Some(w) => make_bugtrap_from(w),
                None => make_bugtrap(),
            }),
            ProblemId::Dubins => Box::new(make_dubins()),
            ProblemId::DoubleIntegrator => Box::new(make_double_integrator()),
            ProblemId::Pendulum => Box::new(make_pendulum()),
            ProblemId::Flappy => Box::new(match world {
                Some(w) => make_flappy_from(w, FlappyCost::Length),
                None => make_flappy(FlappyCost::Length),
            }),
            ProblemId::FlappyLowAltitude => Box::new(match world {
                Some(w) => make_flappy_from(w, FlappyCost::LowAltitude),
                None => make_flappy(FlappyCost::LowAltitude),
            }),
        }
    }
}

impl std::str::FromStr for ProblemId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ProblemId::ALL
            .iter()
            .find(|p| p.name() == s)
            .copied()
            .ok_or_else(|| Error::UnknownProblem(s.to_string()))
    }
}

impl std::fmt::Display for ProblemId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}
