#![allow(dead_code)]

use evacsim::geometry::{dist, dist_to_segment, Point, Shape};
use evacsim::protocols::{
    build_early_meeting, build_equal_travel, build_square_detour, build_triangle_detour1,
    build_triangle_detour2, symmetric_common_section_start, Protocol,
};
use evacsim::trajectory::{Trajectory, Waypoint};
use rand::Rng;
use rayon::prelude::*;
use std::sync::OnceLock;

/// Every protocol the library builds, at the published parameters.
pub fn reference_protocols() -> &'static [(String, Protocol)] {
    static ALL: OnceLock<Vec<(String, Protocol)>> = OnceLock::new();
    ALL.get_or_init(build_all)
}

fn build_all() -> Vec<(String, Protocol)> {
    let tri = Shape::triangle();
    let sq = Shape::square();
    let a = symmetric_common_section_start(&sq);
    let mut out = vec![
        (
            "detour1".to_string(),
            build_triangle_detour1(0.70745).unwrap(),
        ),
        (
            "detour2".to_string(),
            build_triangle_detour2(0.666, 0.9023).unwrap(),
        ),
        (
            "early T k=3".to_string(),
            build_early_meeting(&tri, 3, 0.38601).unwrap(),
        ),
        (
            "early T k=4".to_string(),
            build_early_meeting(&tri, 4, 0.4678).unwrap(),
        ),
        (
            "early T k=5".to_string(),
            build_early_meeting(&tri, 5, 0.3746).unwrap(),
        ),
        (
            "early S k=3".to_string(),
            build_early_meeting(&sq, 3, a).unwrap(),
        ),
        (
            "early S k=4".to_string(),
            build_early_meeting(&sq, 4, a).unwrap(),
        ),
        (
            "square detour".to_string(),
            build_square_detour(0.1556, 0.501).unwrap(),
        ),
    ];
    for k in 2..=8 {
        out.push((
            format!("equal T k={k}"),
            build_equal_travel(&tri, k).unwrap(),
        ));
    }
    for k in 2..=4 {
        out.push((
            format!("equal S k={k}"),
            build_equal_travel(&sq, k).unwrap(),
        ));
    }
    out
}

/// First time any robot passes through `e`, found by stepping every schedule
/// in increments of `h` and testing each short chord against the point.
pub fn brute_first_visit(protocol: &Protocol, e: Point, h: f64) -> Option<f64> {
    protocol
        .trajectories
        .iter()
        .filter_map(|t| {
            let n = ((t.end_time() - t.start_time()) / h).ceil() as usize;
            let mut prev = t.position_at(t.start_time());
            (1..=n).find_map(|i| {
                let time = t.start_time() + i as f64 * h;
                let cur = t.position_at(time);
                let hit = dist_to_segment(e, prev, cur) <= 1e-9;
                prev = cur;
                hit.then_some(time - h)
            })
        })
        .fold(None, |m: Option<f64>, t| Some(m.map_or(t, |m| m.min(t))))
}

/// First grid time `t ≥ free_from` with `dist(chaser, target(t)) ≤ t − free_from`.
pub fn brute_interception(
    chaser: Point,
    free_from: f64,
    target: &Trajectory,
    h: f64,
) -> Option<f64> {
    let horizon = target.end_time().max(free_from) + 4.0;
    let n = ((horizon - free_from) / h).ceil() as usize;
    (0..=n)
        .into_par_iter()
        .find_first(|&i| {
            let t = free_from + i as f64 * h;
            dist(chaser, target.position_at(t)) <= t - free_from + 1e-12
        })
        .map(|i| free_from + i as f64 * h)
}

/// A random chase: a target polyline in the unit box moving at speed at most
/// one with occasional waits, and a chaser released somewhere in the box.
pub fn random_chase(rng: &mut impl Rng) -> (Point, f64, Trajectory) {
    let mut pt = Point::new(rng.gen(), rng.gen());
    let mut t = rng.gen_range(0.0..0.5);
    let mut wps = vec![Waypoint::new(pt, t)];
    for _ in 0..rng.gen_range(1..5) {
        let next = Point::new(rng.gen(), rng.gen());
        t += dist(pt, next)
            * if rng.gen_bool(0.3) {
                rng.gen_range(1.0..2.0)
            } else {
                1.0
            };
        pt = next;
        wps.push(Waypoint::new(pt, t));
    }
    let chaser = Point::new(rng.gen(), rng.gen());
    let free_from = rng.gen_range(0.0..1.5);
    (chaser, free_from, Trajectory::new(wps).unwrap())
}

/// Validates `value` against one of the shipped schemas.
pub fn check_schema(name: &str, value: &serde_json::Value) -> Result<(), String> {
    let path = format!("{}/schemas/{name}.schema.json", env!("CARGO_MANIFEST_DIR"));
    let text = std::fs::read_to_string(&path).map_err(|e| format!("{path}: {e}"))?;
    let schema: serde_json::Value = serde_json::from_str(&text).map_err(|e| e.to_string())?;
    let v = jsonschema::validator_for(&schema).map_err(|e| e.to_string())?;
    let errors: Vec<String> = v.iter_errors(value).map(|e| e.to_string()).collect();
    if errors.is_empty() {
        Ok(())
    } else {
        Err(errors.join("; "))
    }
}
