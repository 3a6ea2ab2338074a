//! Worst-case search over exit positions, closed-form critical times and
//! lower-bound floors.

mod critical;
mod worst_case;

pub use critical::{
    critical_times, critical_times_square, Approach, CriticalFormulas, CriticalTime,
    SquareDetourScalars,
};
pub use worst_case::{
    one_sided_limit, scan_curve, worst_case, BreakpointProbe, WorstCaseReport, PROBE_OFFSET,
    WORST_BAND,
};

use crate::geometry::ShapeKind;

/// Best known lower bound on the worst-case evacuation time of any algorithm.
///
/// Square with three or more robots has no proven bound; the floor there is
/// the trivial `√2` (a vertex is `√2/2` from the start and the exit may sit
/// at whichever vertex is explored last).
pub fn lower_bound_floor(shape: ShapeKind, k: usize) -> f64 {
    match (shape, k) {
        (ShapeKind::Triangle, 2) => 1.0 + 2.0 / 3f64.sqrt(),
        (ShapeKind::Triangle, _) => 3f64.sqrt(),
        (ShapeKind::Square, 2) => 1.0 + 3.0 * 2f64.sqrt() / 2.0,
        (ShapeKind::Square, _) => 2f64.sqrt(),
    }
}

/// `"proven"` or `"trivial floor"`.
pub fn lower_bound_kind(shape: ShapeKind, k: usize) -> &'static str {
    match (shape, k) {
        (ShapeKind::Square, k) if k >= 3 => "trivial floor",
        _ => "proven",
    }
}
