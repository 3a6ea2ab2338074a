use serde::Serialize;

use super::sections::{equalize, leg_cost};
use super::{params_of, Layout, Policy, Protocol};
use crate::error::{EvacError, Result};
use crate::geometry::Shape;
use crate::numeric::golden_min;
use crate::trajectory::PathBuilder;

const ROTATION_SCAN: usize = 240;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EqualTravelSpec {
    /// Section endpoints as unwrapped arc coordinates, `k + 1` of them.
    pub bounds: Vec<f64>,
    /// Out-explore-return time of each robot.
    pub travel_times: Vec<f64>,
}

/// `k` robots split the whole boundary into sections of equal
/// out-explore-return time, chosen with the rotation that minimizes it, and
/// meet back at the centroid.
pub fn build_equal_travel(shape: &Shape, k: usize) -> Result<Protocol> {
    if k < 2 {
        return Err(EvacError::param("k", k as f64, "k >= 2"));
    }
    let per = shape.perimeter;
    let cost = |s0: f64| equalize(shape, s0, s0 + per, k).0;
    // Every side is equivalent under rotation, so one side of offsets suffices.
    let step = 1.0 / ROTATION_SCAN as f64;
    let (mut best_s, mut best_c) = (0.0, cost(0.0));
    for i in 1..ROTATION_SCAN {
        let s = i as f64 * step;
        let c = cost(s);
        if c < best_c - 1e-13 {
            best_s = s;
            best_c = c;
        }
    }
    let refined = golden_min(cost, best_s - step, best_s + step, 1e-10);
    let s0 = if refined.value < best_c - 1e-13 {
        refined.x.rem_euclid(1.0)
    } else {
        best_s
    };
    let (_, bounds) = equalize(shape, s0, s0 + per, k);
    build_from_bounds(shape, &bounds)
}

fn build_from_bounds(shape: &Shape, bounds: &[f64]) -> Result<Protocol> {
    let k = bounds.len() - 1;
    let mut trajectories = Vec::with_capacity(k);
    let mut travel_times = Vec::with_capacity(k);
    for w in bounds.windows(2) {
        let mut b = PathBuilder::new(shape.centroid, 0.0);
        b.go_all(&shape.boundary_path(w[0], w[1]));
        b.go(shape.centroid);
        travel_times.push(leg_cost(shape, w[0], w[1]));
        trajectories.push(b.finish());
    }
    let meeting_time = trajectories
        .iter()
        .map(|t| t.end_time())
        .fold(0.0, f64::max);
    Protocol::new(
        shape.clone(),
        trajectories,
        Policy::Rendezvous {
            meeting_point: shape.centroid,
            meeting_time,
        },
        None,
        params_of(&[("k", k as f64)]),
        Layout::EqualTravel(EqualTravelSpec {
            bounds: bounds.to_vec(),
            travel_times,
        }),
    )
}
