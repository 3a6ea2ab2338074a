use serde::Serialize;

use super::sections::{equalize, leg_cost};
use super::{params_of, CommonSection, Layout, Policy, Protocol};
use crate::error::{EvacError, Result};
use crate::geometry::{Shape, ShapeKind};
use crate::numeric::bisect;
use crate::trajectory::PathBuilder;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EarlyMeetingSpec {
    /// Arc coordinate of the common-section start.
    pub p1: f64,
    /// Arc coordinate of the common-section end.
    pub p2: f64,
    /// Section boundaries between consecutive robots, `k − 1` arc coordinates
    /// in counterclockwise order starting after `p2`.
    pub breaks: Vec<f64>,
    pub travel_times: Vec<f64>,
    /// Meeting time plus the centroid-to-vertex distance.
    pub worst_time: f64,
}

/// Phase 1: the boundary outside the common section `[p1, p2]` is split into
/// `k` equal-travel sections and everyone meets at the centroid. Phase 2:
/// the group enters at `p1` and walks to `p2`. The common section is sized so
/// that `|O p1| + |p1 p2|` equals the centroid-to-vertex distance.
pub fn build_early_meeting(shape: &Shape, k: usize, p1: f64) -> Result<Protocol> {
    let allowed = match shape.kind {
        ShapeKind::Triangle => (3..=5).contains(&k),
        ShapeKind::Square => (3..=4).contains(&k),
    };
    if !allowed {
        return Err(EvacError::Unsupported(format!(
            "early meeting on the {} is defined for k in {}",
            shape.kind,
            match shape.kind {
                ShapeKind::Triangle => "3..=5",
                ShapeKind::Square => "3..=4",
            }
        )));
    }
    if !(p1 > 0.0 && p1 < 1.0) {
        return Err(EvacError::param("p1", p1, "0 < p1 < 1"));
    }
    let reach = shape.centroid_to_vertex();
    let common = reach - shape.centroid_dist_at(p1);
    let p2 = p1 + common;
    if p2 > 1.0 {
        return Err(EvacError::param(
            "p1",
            p1,
            "common section [p1, p1 + x - |Op1|] must stay on the first side",
        ));
    }
    let per = shape.perimeter;
    let (_, bounds) = equalize(shape, p2, p1 + per, k);
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
    let entry = shape.point_at_arc(p1);
    let spec = EarlyMeetingSpec {
        p1,
        p2,
        breaks: bounds[1..k].iter().map(|b| shape.wrap(*b).0).collect(),
        travel_times,
        worst_time: meeting_time + reach,
    };
    let mut marks = vec![("p1", entry), ("p2", shape.point_at_arc(p2))];
    let names = ["r1", "r2", "r3", "r4"];
    for (name, s) in names.iter().zip(&spec.breaks) {
        marks.push((name, shape.point_at_arc(*s)));
    }
    Ok(Protocol::new(
        shape.clone(),
        trajectories,
        Policy::Rendezvous {
            meeting_point: shape.centroid,
            meeting_time,
        },
        Some(CommonSection {
            start: p1,
            length: common,
            entry,
        }),
        params_of(&[("p1", p1)]),
        Layout::EarlyMeeting(spec),
    )?
    .with_landmarks(marks))
}

/// The `p1` whose common section is centered on the first side, i.e.
/// `|D p1| = |C p2|` on the square.
pub fn symmetric_common_section_start(shape: &Shape) -> f64 {
    let reach = shape.centroid_to_vertex();
    bisect(
        |a| shape.centroid_dist_at(a) + (1.0 - 2.0 * a) - reach,
        0.0,
        0.5,
        1e-15,
    )
    .expect("sign change between vertex and midpoint")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::dist;

    fn spec(p: &Protocol) -> &EarlyMeetingSpec {
        match &p.layout {
            Layout::EarlyMeeting(s) => s,
            _ => unreachable!(),
        }
    }

    #[test]
    fn triangle_three_robots() {
        let tri = Shape::triangle();
        let p = build_early_meeting(&tri, 3, 0.38601).unwrap();
        let s = spec(&p);
        let tt = &s.travel_times;
        assert!(tt.iter().all(|t| (t - tt[0]).abs() < 1e-8));
        let common = p.common_section.unwrap();
        let x = tri.centroid_to_vertex();
        assert!((dist(tri.centroid, common.entry) + common.length - x).abs() < 1e-10);
        // |Cr| on CA and |Br| on AB
        assert!((s.breaks[0] - 1.0 - 0.5454).abs() < 1e-3);
        assert!((3.0 - s.breaks[1] - 0.5252).abs() < 1e-3);
        assert!((s.worst_time - 2.0888).abs() < 5e-4);
    }

    #[test]
    fn square_symmetric_start() {
        let sq = Shape::square();
        let a = symmetric_common_section_start(&sq);
        assert!((a - 0.4012).abs() < 1e-3);
        let p = build_early_meeting(&sq, 4, a).unwrap();
        let s = spec(&p);
        assert!((1.0 - s.p2 - a).abs() < 1e-12);
        assert!((s.breaks[1] - 2.5).abs() < 1e-6);
    }

    #[test]
    fn rejects_unsupported_and_infeasible() {
        let tri = Shape::triangle();
        assert!(matches!(
            build_early_meeting(&tri, 6, 0.4),
            Err(EvacError::Unsupported(_))
        ));
        assert!(build_early_meeting(&Shape::square(), 5, 0.4).is_err());
        assert!(matches!(
            build_early_meeting(&tri, 3, 1.2),
            Err(EvacError::InvalidParameter { .. })
        ));
        assert!(build_early_meeting(&tri, 3, 0.0).is_err());
    }
}
