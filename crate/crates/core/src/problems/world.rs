//! Planar rectangle worlds and their plain-text fixture format.
//!
//! Fixture files are versioned plain text: header lines carry the domain,
//! start, goal, and (once computed) the grid-oracle optimum; every other
//! non-comment line is one axis-aligned obstacle rectangle as `x y w h`
//! (lower-left corner plus extents). `#` starts a comment. Commas are
//! accepted as separators.
//!
//! ```text
//! version 1
//! domain 0 0 1 1
//! start 0.1 0.1
//! goal 0.9 0.9 0.05          # disc: cx cy radius
//! oracle_optimum 1.18
//! 0.42 0.00 0.16 0.38
//! ```
//! Rectangle goals use `goal_rect x y w h` instead of `goal`.

use crate::error::{Error, Result};

/// Closed axis-aligned rectangle, lower-left corner plus extents.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Rect {
    pub x: f64,
    pub y: f64,
    pub w: f64,
    pub h: f64,
}

impl Rect {
    pub fn contains(&self, px: f64, py: f64) -> bool {
        px >= self.x && px <= self.x + self.w && py >= self.y && py <= self.y + self.h
    }

    /// Exact closed-rectangle/segment intersection via parametric clipping.
    pub fn intersects_segment(&self, ax: f64, ay: f64, bx: f64, by: f64) -> bool {
        let mut t0 = 0.0f64;
        let mut t1 = 1.0f64;
        for (p0, d, lo, hi) in [
            (ax, bx - ax, self.x, self.x + self.w),
            (ay, by - ay, self.y, self.y + self.h),
        ] {
            if d == 0.0 {
                if p0 < lo || p0 > hi {
                    return false;
                }
            } else {
                let (mut ta, mut tb) = ((lo - p0) / d, (hi - p0) / d);
                if ta > tb {
                    std::mem::swap(&mut ta, &mut tb);
                }
                t0 = t0.max(ta);
                t1 = t1.min(tb);
                if t0 > t1 {
                    return false;
                }
            }
        }
        true
    }

    pub fn center(&self) -> (f64, f64) {
        (self.x + self.w / 2.0, self.y + self.h / 2.0)
    }

    /// Euclidean distance from a point to the closed rectangle.
    pub fn distance_to(&self, px: f64, py: f64) -> f64 {
        let dx = (self.x - px).max(0.0).max(px - (self.x + self.w));
        let dy = (self.y - py).max(0.0).max(py - (self.y + self.h));
        (dx * dx + dy * dy).sqrt()
    }
}

/// Goal region of a planar world.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum WorldGoal {
    Disc { cx: f64, cy: f64, radius: f64 },
    Rect(Rect),
}

/// A planar problem layout: domain, obstacles, start, goal, and the frozen
/// grid-oracle optimum where one exists.
#[derive(Clone, Debug, PartialEq)]
pub struct RectObstacleWorld {
    pub version: u32,
    pub domain: Rect,
    pub start: Vec<f64>,
    pub goal: WorldGoal,
    pub oracle_optimum: Option<f64>,
    pub obstacles: Vec<Rect>,
}

impl RectObstacleWorld {
    pub fn point_free(&self, px: f64, py: f64) -> bool {
        self.domain.contains(px, py) && !self.obstacles.iter().any(|r| r.contains(px, py))
    }

    /// Exact continuous feasibility of a straight segment: both endpoints in
    /// the (convex) domain and no obstacle crossed.
    pub fn segment_free(&self, ax: f64, ay: f64, bx: f64, by: f64) -> bool {
        self.domain.contains(ax, ay)
            && self.domain.contains(bx, by)
            && !self
                .obstacles
                .iter()
                .any(|r| r.intersects_segment(ax, ay, bx, by))
    }

    pub fn in_goal(&self, px: f64, py: f64) -> bool {
        match self.goal {
            WorldGoal::Disc { cx, cy, radius } => {
                ((px - cx).powi(2) + (py - cy).powi(2)).sqrt() <= radius
            }
            WorldGoal::Rect(r) => r.contains(px, py),
        }
    }

    /// Distance to the goal region (0 inside).
    pub fn goal_distance(&self, px: f64, py: f64) -> f64 {
        match self.goal {
            WorldGoal::Disc { cx, cy, radius } => {
                (((px - cx).powi(2) + (py - cy).powi(2)).sqrt() - radius).max(0.0)
            }
            WorldGoal::Rect(r) => r.distance_to(px, py),
        }
    }

    /// Bounding rectangle of the goal region, clipped to the domain.
    pub fn goal_bbox(&self) -> Rect {
        let raw = match self.goal {
            WorldGoal::Disc { cx, cy, radius } => {
                Rect { x: cx - radius, y: cy - radius, w: 2.0 * radius, h: 2.0 * radius }
            }
            WorldGoal::Rect(r) => r,
        };
        let x0 = raw.x.max(self.domain.x);
        let y0 = raw.y.max(self.domain.y);
        let x1 = (raw.x + raw.w).min(self.domain.x + self.domain.w);
        let y1 = (raw.y + raw.h).min(self.domain.y + self.domain.h);
        Rect { x: x0, y: y0, w: (x1 - x0).max(0.0), h: (y1 - y0).max(0.0) }
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut version = None;
        let mut domain = None;
        let mut start = None;
        let mut goal = None;
        let mut oracle_optimum = None;
        let mut obstacles = Vec::new();

        for (idx, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let err = |message: &str| Error::FixtureParse { line: idx + 1, message: message.into() };
            let tokens: Vec<&str> = line
                .split(|c: char| c.is_whitespace() || c == ',')
                .filter(|t| !t.is_empty())
                .collect();
            let nums = |from: usize| -> Result<Vec<f64>> {
                tokens[from..]
                    .iter()
                    .map(|t| t.parse::<f64>().map_err(|_| err(&format!("bad number '{t}'"))))
                    .collect()
            };
            match tokens[0] {
                "version" => {
                    version = Some(
                        tokens
                            .get(1)
                            .and_then(|t| t.parse().ok())
                            .ok_or_else(|| err("version needs an integer"))?,
                    );
                }
                "domain" => {
                    let v = nums(1)?;
                    if v.len() != 4 {
                        return Err(err("domain needs x y w h"));
                    }
                    domain = Some(Rect { x: v[0], y: v[1], w: v[2], h: v[3] });
                }
                "start" => {
                    let v = nums(1)?;
                    if v.len() < 2 {
                        return Err(err("start needs at least x y"));
                    }
                    start = Some(v);
                }
                "goal" => {
                    let v = nums(1)?;
                    if v.len() != 3 {
                        return Err(err("goal needs cx cy radius"));
                    }
                    goal = Some(WorldGoal::Disc { cx: v[0], cy: v[1], radius: v[2] });
                }
                "goal_rect" => {
                    let v = nums(1)?;
                    if v.len() != 4 {
                        return Err(err("goal_rect needs x y w h"));
                    }
                    goal = Some(WorldGoal::Rect(Rect { x: v[0], y: v[1], w: v[2], h: v[3] }));
                }
                "oracle_optimum" => {
                    let v = nums(1)?;
                    if v.len() != 1 {
                        return Err(err("oracle_optimum needs one value"));
                    }
                    oracle_optimum = Some(v[0]);
                }
                _ => {
                    let v = nums(0)?;
                    if v.len() != 4 {
                        return Err(err("obstacle line needs x y w h"));
                    }
                    obstacles.push(Rect { x: v[0], y: v[1], w: v[2], h: v[3] });
                }
            }
        }

        Ok(Self {
            version: version
                .ok_or(Error::FixtureParse { line: 0, message: "missing version".into() })?,
            domain: domain
                .ok_or(Error::FixtureParse { line: 0, message: "missing domain".into() })?,
            start: start.ok_or(Error::FixtureParse { line: 0, message: "missing start".into() })?,
            goal: goal.ok_or(Error::FixtureParse { line: 0, message: "missing goal".into() })?,
            oracle_optimum,
            obstacles,
        })
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("version {}\n", self.version));
        let d = self.domain;
        out.push_str(&format!("domain {} {} {} {}\n", d.x, d.y, d.w, d.h));
        let start: Vec<String> = self.start.iter().map(|v| v.to_string()).collect();
        out.push_str(&format!("start {}\n", start.join(" ")));
        match self.goal {
            WorldGoal::Disc { cx, cy, radius } => {
                out.push_str(&format!("goal {cx} {cy} {radius}\n"));
            }
            WorldGoal::Rect(r) => {
                out.push_str(&format!("goal_rect {} {} {} {}\n", r.x, r.y, r.w, r.h));
            }
        }
        if let Some(v) = self.oracle_optimum {
            out.push_str(&format!("oracle_optimum {v}\n"));
        }
        for r in &self.obstacles {
            out.push_str(&format!("{} {} {} {}\n", r.x, r.y, r.w, r.h));
        }
        out
    }
}
