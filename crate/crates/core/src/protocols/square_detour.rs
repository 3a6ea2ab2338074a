use serde::Serialize;

use super::detour::solve_interception_point;
use super::{params_of, Layout, Policy, Protocol};
use crate::analysis::SquareDetourScalars;
use crate::error::Result;
use crate::geometry::{dist, Point, Shape};
use crate::trajectory::PathBuilder;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SquareDetourSpec {
    pub p: f64,
    pub q: f64,
    pub f: Point,
    pub e: Point,
    pub g: Point,
    pub h: Point,
    pub i: Point,
    pub j: Point,
    pub k: Point,
    pub m: Point,
    pub scalars: SquareDetourScalars,
    /// Residuals of the `G` and `I` constraints.
    pub residuals: [f64; 2],
}

/// Square, two robots. Robot 0 walks `O → F → D → A → E`, detours
/// `E → G → I → E` and ends at `M`; robot 1 is its mirror image. `G` lies on
/// `EC` and `I` on `GJ`, placed so the partner finding the exit at `C` (resp.
/// `J`) intercepts robot 0 there.
pub fn build_square_detour(p: f64, q: f64) -> Result<Protocol> {
    let scalars = SquareDetourScalars::compute(p, q)?;
    let sq = Shape::square();
    let (a, c, d) = (sq.vertex('A'), sq.vertex('C'), sq.vertex('D'));
    let f = sq.start_midpoint();
    let m = Point::new(0.5, 1.0);
    let e = Point::new(p, 1.0);
    let j = Point::new(1.0, q);
    let t_e = 2.0 + p;
    let g = solve_interception_point("|DA| + |AE| + |EG| = |CG|", "EC", e, c, t_e, c, 1.0)?;
    let eg = dist(e, g);
    let i = solve_interception_point(
        "|CJ| + |JI| = |DA| + |AE| + |EG| + |GI|",
        "GJ",
        g,
        j,
        t_e + eg,
        j,
        1.0 + q,
    )?;
    let residuals = [
        1.0 + p + eg - dist(c, g),
        q + dist(j, i) - (1.0 + p + eg + dist(g, i)),
    ];
    let mut r0 = PathBuilder::new(sq.centroid, 0.0);
    r0.go_all(&[f, d, a, e, g, i, e, m]);
    let r0 = r0.finish();
    let r1 = r0.mirrored();
    let h = Point::new(p, g.y);
    let k = Point::new(scalars.r, 1.0);
    let spec = SquareDetourSpec {
        p,
        q,
        f,
        e,
        g,
        h,
        i,
        j,
        k,
        m,
        scalars,
        residuals,
    };
    let marks = vec![
        ("F", f),
        ("E", e),
        ("G", g),
        ("I", i),
        ("J", j),
        ("K", k),
        ("M", m),
    ];
    Ok(Protocol::new(
        sq,
        vec![r0, r1],
        Policy::Intercept,
        None,
        params_of(&[("p", p), ("q", q)]),
        Layout::SquareDetour(spec),
    )?
    .with_landmarks(marks))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::EvacError;

    fn spec(p: f64, q: f64) -> SquareDetourSpec {
        match build_square_detour(p, q).unwrap().layout {
            Layout::SquareDetour(s) => s,
            _ => unreachable!(),
        }
    }

    #[test]
    fn constraints_and_closed_forms_agree() {
        for (p, q) in [(0.1556, 0.501), (0.1, 0.3), (0.2, 0.7), (0.05, 0.5)] {
            let s = spec(p, q);
            assert!(
                s.residuals.iter().all(|r| r.abs() < 1e-10),
                "{:?}",
                s.residuals
            );
            let k = &s.scalars;
            assert!((dist(s.e, s.g) - k.eg).abs() < 1e-10);
            assert!((dist(s.g, sq_c()) - k.gc).abs() < 1e-10);
            assert!((dist(s.g, s.j) - k.gj).abs() < 1e-10);
            assert!((dist(s.i, s.j) - k.ij).abs() < 1e-10);
            assert!((dist(s.g, s.i) - k.gi).abs() < 1e-10);
            assert!((dist(s.i, sq_c()) - k.ic).abs() < 1e-10);
            assert!((dist(s.e, s.i) - k.ei).abs() < 1e-10);
            assert!((dist(s.h, s.g) - k.hg).abs() < 1e-10);
            assert!((dist(s.k, s.j) - k.kj).abs() < 1e-10);
        }
    }

    fn sq_c() -> Point {
        Point::new(1.0, 0.0)
    }

    #[test]
    fn published_point_values() {
        let s = spec(0.1556, 0.501);
        assert!((s.scalars.ec - 1.30882).abs() < 1e-5);
        assert!((s.i.x - 0.28271).abs() < 1e-5 && (s.i.y - 0.89842).abs() < 1e-5);
        assert!((s.g.x - 0.20503).abs() < 1e-5 && (s.g.y - 0.94147).abs() < 1e-5);
    }

    #[test]
    fn robot_lengths_match() {
        let p = build_square_detour(0.1556, 0.501).unwrap();
        let s = spec(0.1556, 0.501);
        let want = 2.5 + s.scalars.detour;
        for t in &p.trajectories {
            assert!((t.length() - want).abs() < 1e-12);
        }
    }

    #[test]
    fn infeasible_inputs_name_constraint() {
        assert!(matches!(
            build_square_detour(0.3, 0.5),
            Err(EvacError::InvalidParameter { .. })
        ));
        assert!(build_square_detour(0.15, 0.99).is_err());
        assert!(build_square_detour(0.15, 0.0).is_err());
    }
}
