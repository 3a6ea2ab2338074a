use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

use super::{lower_bound_floor, lower_bound_kind};
use crate::geometry::{ShapeKind, GEOM_TOL};
use crate::numeric::golden_max;
use crate::protocols::Protocol;
use crate::simulator::evac_time;

/// Offset of the one-sided probes around each breakpoint.
pub const PROBE_OFFSET: f64 = 1e-7;
/// Exits within this much of the maximum are reported as worst.
pub const WORST_BAND: f64 = 1e-6;
/// Local maxima further than this below the running maximum are not refined.
const REFINE_BAND: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BreakpointProbe {
    pub s: f64,
    pub value: f64,
    pub left_limit: f64,
    pub right_limit: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WorstCaseReport {
    pub shape: ShapeKind,
    pub k: usize,
    pub protocol: String,
    pub params: BTreeMap<String, f64>,
    pub worst_time: f64,
    pub worst_exits: Vec<f64>,
    pub breakpoints_probed: Vec<BreakpointProbe>,
    pub lower_bound: f64,
    pub lower_bound_kind: String,
    pub margin: f64,
    pub samples_used: usize,
}

impl WorstCaseReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn probe_at(&self, s: f64) -> Option<&BreakpointProbe> {
        self.breakpoints_probed
            .iter()
            .find(|b| (b.s - s).abs() <= GEOM_TOL)
    }
}

/// Limit of the evacuation time as the exit approaches `s` from one side
/// (`dir = −1` from below, `+1` from above).
///
/// Exits closer than the visit tolerance to a waypoint count as that
/// waypoint, so the limit is extrapolated linearly from two probes at
/// `PROBE_OFFSET` and twice that.
pub fn one_sided_limit(protocol: &Protocol, s: f64, dir: f64) -> f64 {
    let (f1, f2) = one_sided_probes(protocol, s, dir);
    2.0 * f1 - f2
}

fn one_sided_probes(protocol: &Protocol, s: f64, dir: f64) -> (f64, f64) {
    let at = |d: f64| evac_time(protocol, protocol.shape.wrap(s + dir * d).0);
    (at(PROBE_OFFSET), at(2.0 * PROBE_OFFSET))
}

/// Sampled curve `(s, evac_time)`: the uniform grid plus one probe on each side
/// of every breakpoint, sorted by `s`.
pub fn scan_curve(protocol: &Protocol, samples_per_unit: usize) -> Vec<(f64, f64)> {
    let mut xs = sample_points(protocol, samples_per_unit);
    for b in protocol.breakpoints() {
        xs.push(protocol.shape.wrap(b - PROBE_OFFSET).0);
        xs.push(protocol.shape.wrap(b + PROBE_OFFSET).0);
    }
    xs.sort_by(f64::total_cmp);
    xs.par_iter()
        .map(|&s| (s, evac_time(protocol, s)))
        .collect()
}

fn sample_points(protocol: &Protocol, samples_per_unit: usize) -> Vec<f64> {
    let per = protocol.shape.perimeter;
    let n = (samples_per_unit as f64 * per).round().max(1.0) as usize;
    (0..n).map(|i| i as f64 * per / n as f64).collect()
}

/// Supremum of the evacuation time over all exits.
///
/// Samples a uniform grid, probes both sides of every breakpoint, and refines
/// each promising local maximum by golden-section search inside the smooth
/// piece that contains it.
pub fn worst_case(
    protocol: &Protocol,
    samples_per_unit: usize,
    refine_tol: f64,
) -> WorstCaseReport {
    let shape = &protocol.shape;
    let per = shape.perimeter;
    let bps = protocol.breakpoints();

    let probes: Vec<BreakpointProbe> = bps
        .par_iter()
        .map(|&b| {
            let (l1, l2) = one_sided_probes(protocol, b, -1.0);
            let (r1, r2) = one_sided_probes(protocol, b, 1.0);
            BreakpointProbe {
                s: b,
                value: evac_time(protocol, b),
                left_limit: 2.0 * l1 - l2,
                right_limit: 2.0 * r1 - r2,
            }
        })
        .collect();

    let curve = scan_curve(protocol, samples_per_unit);
    let samples_used = curve.len();
    let mut best = curve.iter().map(|c| c.1).fold(f64::MIN, f64::max);
    let mut candidates: Vec<(f64, f64)> = curve.clone();
    for p in &probes {
        best = best.max(p.value).max(p.left_limit).max(p.right_limit);
        candidates.push((p.s, p.value));
        candidates.push((p.s, p.left_limit));
        candidates.push((p.s, p.right_limit));
    }

    // Local maxima of the cyclic sample sequence that sit strictly inside a
    // smooth piece get a golden-section refinement.
    let n = curve.len();
    let brackets: Vec<(f64, f64)> = (0..n)
        .filter(|&i| {
            let (prev, next) = (curve[(i + n - 1) % n].1, curve[(i + 1) % n].1);
            let v = curve[i].1;
            v >= prev && v >= next && v >= best - REFINE_BAND
        })
        .filter_map(|i| {
            let s = curve[i].0;
            let lo = if i == 0 {
                curve[n - 1].0 - per
            } else {
                curve[i - 1].0
            };
            let hi = if i + 1 == n {
                curve[0].0 + per
            } else {
                curve[i + 1].0
            };
            let (pl, pr) = enclosing_piece(&bps, per, s);
            let lo = lo.max(pl + 2.0 * PROBE_OFFSET);
            let hi = hi.min(pr - 2.0 * PROBE_OFFSET);
            (hi > lo).then_some((lo, hi))
        })
        .collect();
    let refined: Vec<(f64, f64)> = brackets
        .par_iter()
        .map(|&(lo, hi)| {
            let r = golden_max(|s| evac_time(protocol, shape.wrap(s).0), lo, hi, refine_tol);
            (shape.wrap(r.x).0, r.value)
        })
        .collect();
    for r in refined {
        best = best.max(r.1);
        candidates.push(r);
    }

    // Probe hits are reported at their breakpoint.
    let snap = |s: f64| {
        bps.iter()
            .copied()
            .find(|b| {
                let d = (s - b).rem_euclid(per);
                d.min(per - d) <= 3.0 * PROBE_OFFSET
            })
            .unwrap_or(s)
    };
    let mut worst_exits: Vec<f64> = candidates
        .iter()
        .filter(|c| c.1 >= best - WORST_BAND)
        .map(|c| shape.wrap(snap(c.0)).0)
        .collect();
    worst_exits.sort_by(f64::total_cmp);
    worst_exits.dedup_by(|a, b| (*a - *b).abs() <= WORST_BAND);
    if worst_exits.len() > 1
        && worst_exits[0] + per - worst_exits[worst_exits.len() - 1] <= WORST_BAND
    {
        worst_exits.pop();
    }

    let lower_bound = lower_bound_floor(shape.kind, protocol.k());
    WorstCaseReport {
        shape: shape.kind,
        k: protocol.k(),
        protocol: protocol.family().to_string(),
        params: protocol.params.clone(),
        worst_time: best,
        worst_exits,
        breakpoints_probed: probes,
        lower_bound,
        lower_bound_kind: lower_bound_kind(shape.kind, protocol.k()).to_string(),
        margin: best - lower_bound,
        samples_used,
    }
}

/// Breakpoints immediately below and above `s` (unwrapped around `s`).
fn enclosing_piece(bps: &[f64], per: f64, s: f64) -> (f64, f64) {
    if bps.is_empty() {
        return (s - per, s + per);
    }
    let idx = bps.partition_point(|b| *b <= s);
    let lo = if idx == 0 {
        bps[bps.len() - 1] - per
    } else {
        bps[idx - 1]
    };
    let hi = if idx == bps.len() {
        bps[0] + per
    } else {
        bps[idx]
    };
    (lo, hi)
}
