//! Two-robot triangle protocols whose boundary sweeps are interrupted by
//! interior detours placed so an informed partner can catch them.
//!
//! Robot 1 (index 1) sweeps `F → C → A` and robot 0 mirrors it on `F → B → A`.
//! Every detour waypoint `w` is the point on a given segment where
//! `T_other(d) + |d w| = T_self(w)`: the partner, having found the exit at
//! `d`, arrives at `w` exactly when the detouring robot does.

use serde::Serialize;

use super::{params_of, Layout, Policy, Protocol};
use crate::error::{EvacError, Result};
use crate::geometry::{dist, Point, Shape};
use crate::numeric::bisect;
use crate::trajectory::PathBuilder;

/// Point `w` on segment `from → to` with `t_other + |d w| = t_from + |from w|`.
///
/// The left side minus the right side is nonincreasing along the segment, so
/// the root is bracketed by the endpoints or does not exist.
pub(crate) fn solve_interception_point(
    constraint: &str,
    segment: &str,
    from: Point,
    to: Point,
    t_from: f64,
    d: Point,
    t_other: f64,
) -> Result<Point> {
    let len = dist(from, to);
    let at = |l: f64| from.toward(to, l);
    let g = |l: f64| t_other + dist(d, at(l)) - (t_from + l);
    let infeasible = || EvacError::InfeasibleConstraint {
        constraint: constraint.to_string(),
        segment: segment.to_string(),
    };
    if len == 0.0 {
        return if g(0.0).abs() <= 1e-12 {
            Ok(from)
        } else {
            Err(infeasible())
        };
    }
    let l = bisect(g, 0.0, len, 1e-15).ok_or_else(infeasible)?;
    Ok(at(l))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DetourSpec {
    pub z: f64,
    pub q1: Point,
    pub q2: Point,
    pub r1: Point,
    pub r2: Point,
    pub p1: Point,
    pub p2: Point,
    /// `|q2 r2| + |r2 p2| + |p2 q2|`.
    pub detour_len: f64,
    /// Evacuation time for an exit at `B` or `C`.
    pub t1: f64,
    /// Evacuation time for an exit just past `q1` or `q2` toward `A`.
    pub t2: f64,
    /// Residuals of the two waypoint constraints.
    pub residuals: [f64; 2],
}

struct Detour {
    r: Point,
    p: Point,
    len: f64,
}

/// Detour of the robot that reaches `q_self` at `t_self`, while the partner
/// starts sweeping from `q_other` (prior exit candidate `d_prev`, reached at
/// `t_prev`) at `t_other` toward `q_next`.
#[allow(clippy::too_many_arguments)]
fn detour(
    names: [&str; 4],
    q_self: Point,
    t_self: f64,
    d_prev: Point,
    t_prev: f64,
    q_next: Point,
    t_next: f64,
) -> Result<Detour> {
    let r = solve_interception_point(names[0], names[1], q_self, d_prev, t_self, d_prev, t_prev)?;
    let p = solve_interception_point(
        names[2],
        names[3],
        r,
        q_next,
        t_self + dist(q_self, r),
        q_next,
        t_next,
    )?;
    Ok(Detour {
        r,
        p,
        len: dist(q_self, r) + dist(r, p) + dist(p, q_self),
    })
}

fn check_open(name: &str, v: f64, lo: f64, hi: f64) -> Result<()> {
    if v > lo && v < hi && v.is_finite() {
        Ok(())
    } else {
        Err(EvacError::param(name, v, format!("{lo} < {name} < {hi}")))
    }
}

/// One detour per robot, with `z = |B q1| = |C q2|`.
pub fn build_triangle_detour1(z: f64) -> Result<Protocol> {
    check_open("z", z, 0.5, 1.0)?;
    let tri = Shape::triangle();
    let (a, b, c) = (tri.vertex('A'), tri.vertex('B'), tri.vertex('C'));
    let f = tri.start_midpoint();
    let y = tri.centroid_to_side();
    let q1 = b.lerp(a, z);
    let q2 = c.lerp(a, z);
    let t_q = y + 0.5 + z;
    let d = detour(
        [
            "z + |q2r2| = |r2B|",
            "q2B",
            "|q2r2| + |r2p2| = |p2q1|",
            "r2q1",
        ],
        q2,
        t_q,
        b,
        y + 0.5,
        q1,
        t_q,
    )?;
    let residuals = [
        z + dist(q2, d.r) - dist(d.r, b),
        dist(q2, d.r) + dist(d.r, d.p) - dist(d.p, q1),
    ];
    let mut r1 = PathBuilder::new(tri.centroid, 0.0);
    r1.go_all(&[f, c, q2, d.r, d.p, q2, a]);
    let r1 = r1.finish();
    let r0 = r1.mirrored();
    let spec = DetourSpec {
        z,
        q1,
        q2,
        r1: d.r.mirrored(),
        r2: d.r,
        p1: d.p.mirrored(),
        p2: d.p,
        detour_len: d.len,
        t1: t_q + dist(q2, b),
        t2: t_q + d.len + 2.0 * (1.0 - z),
        residuals,
    };
    let marks = vec![
        ("F", f),
        ("q1", q1),
        ("q2", q2),
        ("r1", spec.r1),
        ("r2", spec.r2),
        ("p1", spec.p1),
        ("p2", spec.p2),
    ];
    Ok(Protocol::new(
        tri,
        vec![r0, r1],
        Policy::Intercept,
        None,
        params_of(&[("z", z)]),
        Layout::TriangleDetour1(spec),
    )?
    .with_landmarks(marks))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Detour2Spec {
    pub b1: f64,
    pub b2: f64,
    pub q1: Point,
    pub q2: Point,
    pub r2: Point,
    pub p2: Point,
    pub q1b: Point,
    pub q2b: Point,
    pub r2b: Point,
    pub p2b: Point,
    pub detour_lens: [f64; 2],
    /// Worst-case times of the three boundary sections.
    pub t1: f64,
    pub t2: f64,
    pub t3: f64,
}

/// Two detours per robot; `b1 = |B q1|` and `b2 = |B q1'|` locate their anchors.
pub fn build_triangle_detour2(b1: f64, b2: f64) -> Result<Protocol> {
    check_open("b1", b1, 0.5, 1.0)?;
    check_open("b2", b2, b1, 1.0)?;
    let tri = Shape::triangle();
    let (a, b, c) = (tri.vertex('A'), tri.vertex('B'), tri.vertex('C'));
    let f = tri.start_midpoint();
    let y = tri.centroid_to_side();
    let (q1, q2) = (b.lerp(a, b1), c.lerp(a, b1));
    let (q1b, q2b) = (b.lerp(a, b2), c.lerp(a, b2));
    let t_q = y + 0.5 + b1;
    let first = detour(
        [
            "b1 + |q2r2| = |r2B|",
            "q2B",
            "|q2r2| + |r2p2| = |p2q1|",
            "r2q1",
        ],
        q2,
        t_q,
        b,
        y + 0.5,
        q1,
        t_q,
    )?;
    let t_back = t_q + first.len;
    let t_qb = t_back + (b2 - b1);
    let second = detour(
        [
            "T1 + |q1r2'| = T1 + (b2 - b1) + |q2'r2'|",
            "q2'q1",
            "|q2'r2'| + |r2'p2'| = |p2'q1'|",
            "r2'q1'",
        ],
        q2b,
        t_qb,
        q1,
        t_back,
        q1b,
        t_qb,
    )?;
    let mut r1 = PathBuilder::new(tri.centroid, 0.0);
    r1.go_all(&[
        f, c, q2, first.r, first.p, q2, q2b, second.r, second.p, q2b, a,
    ]);
    let r1 = r1.finish();
    let r0 = r1.mirrored();
    let spec = Detour2Spec {
        b1,
        b2,
        q1,
        q2,
        r2: first.r,
        p2: first.p,
        q1b,
        q2b,
        r2b: second.r,
        p2b: second.p,
        detour_lens: [first.len, second.len],
        t1: t_q + dist(q2, b),
        t2: t_qb + dist(q2b, q1),
        t3: t_qb + second.len + 2.0 * (1.0 - b2),
    };
    let marks = vec![
        ("F", f),
        ("q1", q1),
        ("q2", q2),
        ("r2", first.r),
        ("p2", first.p),
        ("q1'", q1b),
        ("q2'", q2b),
        ("r2'", second.r),
        ("p2'", second.p),
    ];
    Ok(Protocol::new(
        tri,
        vec![r0, r1],
        Policy::Intercept,
        None,
        params_of(&[("b1", b1), ("b2", b2)]),
        Layout::TriangleDetour2(spec),
    )?
    .with_landmarks(marks))
}
