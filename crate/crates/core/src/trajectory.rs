//! Timed polylines and first-visit bookkeeping for boundary points.
//!
//! A [`Trajectory`] is a list of waypoints with scheduled arrival times. Between
//! two waypoints the robot moves on the straight segment at constant speed
//! `len / dt`, which must not exceed 1; any slack is waiting spread along the
//! segment. After the last waypoint the robot stays put.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{EvacError, Result};
use crate::geometry::{dist, Point, Shape, GEOM_TOL};

/// Allowed excess of segment length over elapsed time.
pub const SPEED_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Waypoint {
    pub point: Point,
    pub time: f64,
}

impl Waypoint {
    pub fn new(point: Point, time: f64) -> Self {
        Waypoint { point, time }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Waypoint>", into = "Vec<Waypoint>")]
pub struct Trajectory {
    waypoints: Vec<Waypoint>,
}

impl TryFrom<Vec<Waypoint>> for Trajectory {
    type Error = EvacError;
    fn try_from(w: Vec<Waypoint>) -> Result<Self> {
        Trajectory::new(w)
    }
}

impl From<Trajectory> for Vec<Waypoint> {
    fn from(t: Trajectory) -> Self {
        t.waypoints
    }
}

impl Trajectory {
    /// Validates ordering, finiteness and the unit speed limit.
    pub fn new(waypoints: Vec<Waypoint>) -> Result<Self> {
        if waypoints.is_empty() {
            return Err(EvacError::InvalidTrajectory("no waypoints".into()));
        }
        for (i, w) in waypoints.iter().enumerate() {
            if !w.point.is_finite() || !w.time.is_finite() {
                return Err(EvacError::InvalidTrajectory(format!(
                    "waypoint {i} is not finite"
                )));
            }
        }
        if waypoints[0].time < 0.0 {
            return Err(EvacError::InvalidTrajectory(
                "trajectory starts before time 0".into(),
            ));
        }
        for (i, pair) in waypoints.windows(2).enumerate() {
            let dt = pair[1].time - pair[0].time;
            if dt < 0.0 {
                return Err(EvacError::InvalidTrajectory(format!(
                    "arrival times decrease between waypoints {i} and {}",
                    i + 1
                )));
            }
            let len = dist(pair[0].point, pair[1].point);
            if len > dt + SPEED_TOL {
                return Err(EvacError::InvalidTrajectory(format!(
                    "speed limit exceeded between waypoints {i} and {}: length {len} in time {dt}",
                    i + 1
                )));
            }
        }
        Ok(Trajectory { waypoints })
    }

    /// Full-speed traversal of `points` starting at `start_time`.
    pub fn from_path(start_time: f64, points: &[Point]) -> Self {
        let mut b = PathBuilder::new(points[0], start_time);
        for p in &points[1..] {
            b.go(*p);
        }
        b.finish()
    }

    pub fn waypoints(&self) -> &[Waypoint] {
        &self.waypoints
    }

    pub fn start(&self) -> Waypoint {
        self.waypoints[0]
    }

    pub fn end(&self) -> Waypoint {
        *self.waypoints.last().expect("nonempty")
    }

    pub fn start_time(&self) -> f64 {
        self.start().time
    }

    pub fn end_time(&self) -> f64 {
        self.end().time
    }

    /// Total path length (not duration).
    pub fn length(&self) -> f64 {
        self.waypoints
            .windows(2)
            .map(|w| dist(w[0].point, w[1].point))
            .sum()
    }

    pub fn segments(&self) -> impl Iterator<Item = (Waypoint, Waypoint)> + '_ {
        self.waypoints.windows(2).map(|w| (w[0], w[1]))
    }

    /// Position at time `t`; before the start the robot is at its first
    /// waypoint, after the end at its last.
    pub fn position_at(&self, t: f64) -> Point {
        let w = &self.waypoints;
        if t <= w[0].time {
            return w[0].point;
        }
        // first waypoint with time >= t
        let idx = w.partition_point(|p| p.time < t);
        if idx >= w.len() {
            return w[w.len() - 1].point;
        }
        let (a, b) = (w[idx - 1], w[idx]);
        let dt = b.time - a.time;
        if dt <= 0.0 {
            return b.point;
        }
        a.point.lerp(b.point, (t - a.time) / dt)
    }

    /// The same schedule reflected across `x = 1/2`.
    pub fn mirrored(&self) -> Trajectory {
        Trajectory {
            waypoints: self
                .waypoints
                .iter()
                .map(|w| Waypoint::new(w.point.mirrored(), w.time))
                .collect(),
        }
    }
}

/// Incremental full-speed path construction.
#[derive(Debug, Clone)]
pub struct PathBuilder {
    waypoints: Vec<Waypoint>,
}

impl PathBuilder {
    pub fn new(start: Point, time: f64) -> Self {
        PathBuilder {
            waypoints: vec![Waypoint::new(start, time)],
        }
    }

    /// Moves at unit speed to `p`.
    pub fn go(&mut self, p: Point) -> &mut Self {
        let last = *self.waypoints.last().expect("nonempty");
        let d = dist(last.point, p);
        if d > 0.0 {
            self.waypoints.push(Waypoint::new(p, last.time + d));
        }
        self
    }

    pub fn go_all(&mut self, pts: &[Point]) -> &mut Self {
        for p in pts {
            self.go(*p);
        }
        self
    }

    /// Waits at the current point until time `t`.
    pub fn wait_until(&mut self, t: f64) -> &mut Self {
        let last = *self.waypoints.last().expect("nonempty");
        if t > last.time {
            self.waypoints.push(Waypoint::new(last.point, t));
        }
        self
    }

    pub fn here(&self) -> Point {
        self.waypoints.last().expect("nonempty").point
    }

    pub fn time(&self) -> f64 {
        self.waypoints.last().expect("nonempty").time
    }

    pub fn finish(self) -> Trajectory {
        Trajectory {
            waypoints: self.waypoints,
        }
    }
}

/// A stretch of boundary `[lo, hi]` (arc coordinates, `hi` may equal the
/// perimeter) swept by one robot, with the visit time affine in arc length.
/// Point visits have `lo == hi`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Coverage {
    pub robot: usize,
    pub lo: f64,
    pub hi: f64,
    pub t_lo: f64,
    pub t_hi: f64,
}

impl Coverage {
    fn time_at(&self, u: f64) -> f64 {
        if self.hi <= self.lo {
            return self.t_lo;
        }
        let f = ((u - self.lo) / (self.hi - self.lo)).clamp(0.0, 1.0);
        self.t_lo + (self.t_hi - self.t_lo) * f
    }

    /// `u` shifted by a multiple of the perimeter into this piece, if it fits.
    fn locate(&self, u: f64, perimeter: f64) -> Option<f64> {
        [u, u + perimeter, u - perimeter]
            .into_iter()
            .find(|&v| v >= self.lo - GEOM_TOL && v <= self.hi + GEOM_TOL)
    }
}

/// Earliest scheduled visit time of every boundary point, per robot.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FirstVisitProfile {
    perimeter: f64,
    robots: usize,
    pieces: Vec<Coverage>,
}

impl FirstVisitProfile {
    pub fn build(shape: &Shape, trajectories: &[Trajectory]) -> Self {
        let mut pieces = Vec::new();
        for (robot, traj) in trajectories.iter().enumerate() {
            for w in traj.waypoints() {
                if let Some(side) = shape.sides_containing(w.point).first() {
                    let s = shape.arc_on_side(*side, w.point);
                    pieces.push(Coverage {
                        robot,
                        lo: s,
                        hi: s,
                        t_lo: w.time,
                        t_hi: w.time,
                    });
                }
            }
            for (a, b) in traj.segments() {
                if dist(a.point, b.point) <= GEOM_TOL {
                    continue;
                }
                let sa = shape.sides_containing(a.point);
                let sb = shape.sides_containing(b.point);
                // Convexity: a segment with both ends on one side runs along it.
                if let Some(&side) = sa.iter().find(|s| sb.contains(s)) {
                    let ua = shape.arc_on_side(side, a.point);
                    let ub = shape.arc_on_side(side, b.point);
                    let (lo, hi, t_lo, t_hi) = if ua <= ub {
                        (ua, ub, a.time, b.time)
                    } else {
                        (ub, ua, b.time, a.time)
                    };
                    pieces.push(Coverage {
                        robot,
                        lo,
                        hi,
                        t_lo,
                        t_hi,
                    });
                }
            }
        }
        FirstVisitProfile {
            perimeter: shape.perimeter,
            robots: trajectories.len(),
            pieces,
        }
    }

    pub fn pieces(&self) -> &[Coverage] {
        &self.pieces
    }

    /// Earliest visit over all robots; ties go to the lowest robot id.
    pub fn first_visit(&self, s: f64) -> Option<(f64, usize)> {
        let mut best: Option<(f64, usize)> = None;
        for piece in &self.pieces {
            if let Some(u) = piece.locate(s, self.perimeter) {
                let t = piece.time_at(u);
                best = match best {
                    Some((bt, br)) if bt < t || (bt == t && br <= piece.robot) => Some((bt, br)),
                    _ => Some((t, piece.robot)),
                };
            }
        }
        best
    }

    /// Earliest visit of `s` by one robot.
    pub fn first_visit_by(&self, robot: usize, s: f64) -> Option<f64> {
        self.pieces
            .iter()
            .filter(|p| p.robot == robot)
            .filter_map(|p| p.locate(s, self.perimeter).map(|u| p.time_at(u)))
            .reduce(f64::min)
    }

    pub fn robots(&self) -> usize {
        self.robots
    }

    /// Arc intervals (not points) covered by the schedules, unsorted.
    pub fn swept_intervals(&self) -> Vec<(f64, f64)> {
        self.pieces
            .iter()
            .filter(|p| p.hi > p.lo)
            .map(|p| (p.lo, p.hi))
            .collect()
    }
}

/// Parses the line-oriented trajectory format:
///
/// ```text
/// # comment
/// 0: (0.5,0.2887)@0; (0.5,0)@0.2887; (0,0)@0.7887
/// 1: (0.5,0.2887)@0; (0.5,0)@0.2887; (1,0)@0.7887
/// ```
///
/// Robot ids must be distinct; the result is ordered by id.
pub fn parse_trajectories(text: &str) -> Result<Vec<(usize, Trajectory)>> {
    let mut out: Vec<(usize, Trajectory)> = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let perr = |message: String| EvacError::Parse {
            line: lineno + 1,
            message,
        };
        let (id, rest) = line
            .split_once(':')
            .ok_or_else(|| perr("expected `id: waypoints`".into()))?;
        let id: usize = id
            .trim()
            .parse()
            .map_err(|_| perr(format!("bad robot id `{}`", id.trim())))?;
        let mut wps = Vec::new();
        for item in rest.split(';').map(str::trim).filter(|s| !s.is_empty()) {
            let (pt, t) = item
                .split_once('@')
                .ok_or_else(|| perr(format!("waypoint `{item}` lacks `@time`")))?;
            let pt = pt.trim();
            let inner = pt
                .strip_prefix('(')
                .and_then(|s| s.strip_suffix(')'))
                .ok_or_else(|| perr(format!("point `{pt}` must be `(x,y)`")))?;
            let (x, y) = inner
                .split_once(',')
                .ok_or_else(|| perr(format!("point `{pt}` must be `(x,y)`")))?;
            let num = |s: &str| {
                s.trim()
                    .parse::<f64>()
                    .map_err(|_| perr(format!("bad number `{}`", s.trim())))
            };
            wps.push(Waypoint::new(Point::new(num(x)?, num(y)?), num(t)?));
        }
        let traj = Trajectory::new(wps).map_err(|e| perr(e.to_string()))?;
        if out.iter().any(|(i, _)| *i == id) {
            return Err(perr(format!("duplicate robot id {id}")));
        }
        out.push((id, traj));
    }
    out.sort_by_key(|(id, _)| *id);
    Ok(out)
}

/// Writes trajectories in the format read by [`parse_trajectories`].
pub fn format_trajectories(trajectories: &[Trajectory]) -> String {
    let mut s = String::new();
    for (id, t) in trajectories.iter().enumerate() {
        let items: Vec<String> = t
            .waypoints()
            .iter()
            .map(|w| format!("({},{})@{}", w.point.x, w.point.y, w.time))
            .collect();
        let _ = writeln!(s, "{id}: {}", items.join("; "));
    }
    s
}
