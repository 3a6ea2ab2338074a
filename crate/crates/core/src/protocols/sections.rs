//! Equal-travel partition of a boundary stretch into contiguous sections.
//!
//! A section `[a, b]` (arc coordinates, `b` may exceed one lap) costs
//! `|O a| + (b − a) + |b O|`: out from the centroid, along the boundary and
//! back. The cost is nondecreasing in `b`, so the end of a section with a
//! given cost is a bisection root, and the common cost that makes `k`
//! consecutive sections end exactly at a target is another bisection.

use crate::geometry::Shape;
use crate::numeric::bisect;

const ARC_TOL: f64 = 1e-15;

pub(crate) fn leg_cost(shape: &Shape, from: f64, to: f64) -> f64 {
    shape.centroid_dist_at(from) + (to - from) + shape.centroid_dist_at(to)
}

/// End of the section starting at `from` whose cost is `budget`; a budget
/// below the bare out-and-back cost gives an empty section. `None` if the
/// budget exceeds a full lap.
fn section_end(shape: &Shape, from: f64, budget: f64) -> Option<f64> {
    let g = |e: f64| leg_cost(shape, from, e) - budget;
    if g(from) >= 0.0 {
        return Some(from);
    }
    let lap = from + shape.perimeter;
    if g(lap) < 0.0 {
        return None;
    }
    bisect(g, from, lap, ARC_TOL)
}

/// Endpoints of `k` consecutive sections of cost `budget` from `start`.
fn march(shape: &Shape, start: f64, budget: f64, k: usize) -> Option<Vec<f64>> {
    let mut pts = Vec::with_capacity(k + 1);
    pts.push(start);
    let mut s = start;
    for _ in 0..k {
        s = section_end(shape, s, budget)?;
        pts.push(s);
    }
    Some(pts)
}

/// Splits `[start, end]` into `k` sections of equal cost. Returns the cost
/// and the `k + 1` endpoints (first `start`, last exactly `end`).
pub(crate) fn equalize(shape: &Shape, start: f64, end: f64, k: usize) -> (f64, Vec<f64>) {
    let overshoots = |budget: f64| match march(shape, start, budget, k) {
        Some(pts) => pts[k] >= end,
        None => true,
    };
    let mut lo = 0.0;
    let mut hi = 2.0 * shape.centroid_to_vertex() + (end - start);
    debug_assert!(overshoots(hi));
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if overshoots(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    let mut pts = march(shape, start, hi, k).unwrap_or_else(|| vec![start; k + 1]);
    pts[k] = end;
    for p in &mut pts[1..k] {
        *p = p.min(end);
    }
    (hi, pts)
}
