//! Protocol builders: equal travel, triangle detours, early meeting and the
//! square detour, plus the shared [`Protocol`] container.

mod detour;
mod early_meeting;
mod equal_travel;
mod sections;
mod square_detour;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

pub use detour::{build_triangle_detour1, build_triangle_detour2, Detour2Spec, DetourSpec};
pub use early_meeting::{build_early_meeting, symmetric_common_section_start, EarlyMeetingSpec};
pub use equal_travel::{build_equal_travel, EqualTravelSpec};
pub use square_detour::{build_square_detour, SquareDetourSpec};

use crate::error::{EvacError, Result};
use crate::geometry::{dist, make_shape, Point, Shape, ShapeKind, GEOM_TOL};
use crate::trajectory::{FirstVisitProfile, Trajectory, Waypoint};

/// How the robots share the location of the exit.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Policy {
    /// Two robots; the finder chases the other along its known schedule.
    Intercept,
    /// All robots meet at `meeting_point` at `meeting_time` and walk together.
    Rendezvous {
        meeting_point: Point,
        meeting_time: f64,
    },
}

/// Boundary stretch left for the joint second phase.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CommonSection {
    /// Arc coordinate where the group enters the boundary.
    pub start: f64,
    /// Arc length swept counterclockwise from `start`.
    pub length: f64,
    pub entry: Point,
}

impl CommonSection {
    /// Arc distance from the entry to `s`, if `s` lies in the section.
    pub fn offset_of(&self, s: f64, perimeter: f64) -> Option<f64> {
        let off = (s - self.start).rem_euclid(perimeter);
        if off <= self.length + GEOM_TOL {
            Some(off.min(self.length))
        } else if perimeter - off <= GEOM_TOL {
            Some(0.0)
        } else {
            None
        }
    }
}

/// Family-specific derived data kept alongside the trajectories.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "family", rename_all = "kebab-case")]
pub enum Layout {
    EqualTravel(EqualTravelSpec),
    TriangleDetour1(DetourSpec),
    TriangleDetour2(Detour2Spec),
    EarlyMeeting(EarlyMeetingSpec),
    SquareDetour(SquareDetourSpec),
    Custom,
}

impl Layout {
    /// Protocol family name as used on the command line.
    pub fn family(&self) -> &'static str {
        match self {
            Layout::EqualTravel(_) => "equal",
            Layout::TriangleDetour1(_) => "detour1",
            Layout::TriangleDetour2(_) => "detour2",
            Layout::EarlyMeeting(_) => "early",
            Layout::SquareDetour(_) => "square-detour",
            Layout::Custom => "custom",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Protocol {
    pub shape: Shape,
    pub trajectories: Vec<Trajectory>,
    pub policy: Policy,
    pub common_section: Option<CommonSection>,
    pub params: BTreeMap<String, f64>,
    pub layout: Layout,
    /// Named interior and boundary points worth marking in figures.
    pub landmarks: Vec<(String, Point)>,
    profile: FirstVisitProfile,
}

impl Protocol {
    /// Assembles and validates a protocol.
    pub fn new(
        shape: Shape,
        trajectories: Vec<Trajectory>,
        policy: Policy,
        common_section: Option<CommonSection>,
        params: BTreeMap<String, f64>,
        layout: Layout,
    ) -> Result<Self> {
        let profile = FirstVisitProfile::build(&shape, &trajectories);
        let p = Protocol {
            shape,
            trajectories,
            policy,
            common_section,
            params,
            layout,
            landmarks: Vec::new(),
            profile,
        };
        p.validate()?;
        Ok(p)
    }

    pub(crate) fn with_landmarks(mut self, landmarks: Vec<(&str, Point)>) -> Self {
        self.landmarks = landmarks
            .into_iter()
            .map(|(n, p)| (n.to_string(), p))
            .collect();
        self
    }

    pub fn k(&self) -> usize {
        self.trajectories.len()
    }

    pub fn family(&self) -> &'static str {
        self.layout.family()
    }

    pub fn profile(&self) -> &FirstVisitProfile {
        &self.profile
    }

    /// Earliest scheduled visit of the exit at arc `s`, ignoring notification.
    pub fn first_visit(&self, s: f64) -> Option<(f64, usize)> {
        self.profile.first_visit(self.shape.wrap(s).0)
    }

    /// Checks coverage, rendezvous collocation and mirror symmetry.
    pub fn validate(&self) -> Result<()> {
        let k = self.k();
        if k < 2 {
            return Err(EvacError::ProtocolInvariant(format!(
                "need at least two robots, got {k}"
            )));
        }
        if let Some(gap) = self.coverage_gap() {
            return Err(EvacError::ProtocolInvariant(format!(
                "boundary near s={gap} is never explored"
            )));
        }
        match self.policy {
            Policy::Rendezvous {
                meeting_point,
                meeting_time,
            } => {
                for (i, t) in self.trajectories.iter().enumerate() {
                    let d = dist(t.position_at(meeting_time), meeting_point);
                    if d > GEOM_TOL {
                        return Err(EvacError::ProtocolInvariant(format!(
                            "robot {i} is {d:e} away from the meeting point at the meeting time"
                        )));
                    }
                }
            }
            Policy::Intercept => {
                if k != 2 {
                    return Err(EvacError::ProtocolInvariant(
                        "interception protocols take exactly two robots".into(),
                    ));
                }
                if !mirror_pair(&self.trajectories[0], &self.trajectories[1], 1e-12) {
                    return Err(EvacError::ProtocolInvariant(
                        "interception trajectories are not mirror images".into(),
                    ));
                }
            }
        }
        Ok(())
    }

    /// A boundary arc not covered by any schedule or the common section.
    fn coverage_gap(&self) -> Option<f64> {
        let per = self.shape.perimeter;
        let mut iv = self.profile.swept_intervals();
        if let Some(c) = self.common_section {
            let a = c.start.rem_euclid(per);
            let b = a + c.length;
            if b > per {
                iv.push((a, per));
                iv.push((0.0, b - per));
            } else {
                iv.push((a, b));
            }
        }
        iv.sort_by(|x, y| x.0.total_cmp(&y.0));
        let mut reach = 0.0;
        for (lo, hi) in iv {
            if lo > reach + GEOM_TOL {
                return Some(0.5 * (reach + lo));
            }
            reach = f64::max(reach, hi);
        }
        (reach < per - GEOM_TOL).then_some(0.5 * (reach + per))
    }

    /// Exit locations where the evacuation time may change formula: boundary
    /// waypoints, boundary landmarks (mirrored for interception protocols),
    /// the common-section ends and the vertices. Sorted.
    pub fn breakpoints(&self) -> Vec<f64> {
        let mut out = Vec::new();
        for t in &self.trajectories {
            for w in t.waypoints() {
                if let Ok(c) = self.shape.arc_of(w.point) {
                    out.push(c.0);
                }
            }
        }
        for (_, pt) in &self.landmarks {
            if let Ok(c) = self.shape.arc_of(*pt) {
                out.push(c.0);
                if self.policy == Policy::Intercept {
                    out.push(self.shape.mirror_arc(c.0).0);
                }
            }
        }
        if let Some(c) = self.common_section {
            out.push(self.shape.wrap(c.start).0);
            out.push(self.shape.wrap(c.start + c.length).0);
        }
        for i in 0..self.shape.sides() {
            out.push(i as f64);
        }
        out.sort_by(f64::total_cmp);
        out.dedup_by(|a, b| (*a - *b).abs() <= GEOM_TOL);
        if out.len() > 1 && self.shape.perimeter - out[out.len() - 1] <= GEOM_TOL {
            out.pop();
        }
        out
    }

    pub fn to_document(&self) -> ProtocolDocument {
        ProtocolDocument {
            shape: self.shape.kind,
            k: self.k(),
            protocol: self.family().to_string(),
            params: self.params.clone(),
            policy: self.policy,
            common_section: self.common_section,
            trajectories: self
                .trajectories
                .iter()
                .map(|t| t.waypoints().to_vec())
                .collect(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_document()).expect("protocol serializes")
    }

    /// Reads a document written by [`Protocol::to_json`]. Known families are
    /// rebuilt from their parameters so the derived layout is available; if the
    /// stored schedules differ from the rebuilt ones the document wins and the
    /// layout is dropped.
    pub fn from_json(text: &str) -> Result<Self> {
        let doc: ProtocolDocument =
            serde_json::from_str(text).map_err(|e| EvacError::Config(e.to_string()))?;
        Protocol::from_document(doc)
    }

    pub fn from_document(doc: ProtocolDocument) -> Result<Self> {
        if doc.k != doc.trajectories.len() {
            return Err(EvacError::Config(format!(
                "k = {} but {} trajectories given",
                doc.k,
                doc.trajectories.len()
            )));
        }
        let trajectories = doc
            .trajectories
            .into_iter()
            .map(Trajectory::new)
            .collect::<Result<Vec<_>>>()?;
        if let Ok(rebuilt) = build_family(&doc.protocol, doc.shape, doc.k, &doc.params) {
            if rebuilt.trajectories == trajectories
                && rebuilt.policy == doc.policy
                && rebuilt.common_section == doc.common_section
            {
                return Ok(rebuilt);
            }
        }
        Protocol::new(
            make_shape(doc.shape),
            trajectories,
            doc.policy,
            doc.common_section,
            doc.params,
            Layout::Custom,
        )
    }
}

/// Serialized form of a [`Protocol`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProtocolDocument {
    pub shape: ShapeKind,
    pub k: usize,
    pub protocol: String,
    pub params: BTreeMap<String, f64>,
    pub policy: Policy,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub common_section: Option<CommonSection>,
    pub trajectories: Vec<Vec<Waypoint>>,
}

fn mirror_pair(a: &Trajectory, b: &Trajectory, tol: f64) -> bool {
    a.waypoints().len() == b.waypoints().len()
        && a.waypoints().iter().zip(b.waypoints()).all(|(u, v)| {
            dist(u.point.mirrored(), v.point) <= tol && (u.time - v.time).abs() <= tol
        })
}

fn need(params: &BTreeMap<String, f64>, name: &str) -> Result<f64> {
    params
        .get(name)
        .copied()
        .ok_or_else(|| EvacError::Config(format!("missing parameter `{name}`")))
}

/// Builds a protocol by family name (`equal`, `detour1`, `detour2`, `early`,
/// `square-detour`) from named parameters.
pub fn build_family(
    family: &str,
    shape: ShapeKind,
    k: usize,
    params: &BTreeMap<String, f64>,
) -> Result<Protocol> {
    let only = |s: ShapeKind, n: usize| -> Result<()> {
        if shape != s || k != n {
            return Err(EvacError::Unsupported(format!(
                "protocol `{family}` is defined for the {s} with k = {n}"
            )));
        }
        Ok(())
    };
    match family {
        "equal" => build_equal_travel(&make_shape(shape), k),
        "detour1" => {
            only(ShapeKind::Triangle, 2)?;
            build_triangle_detour1(need(params, "z")?)
        }
        "detour2" => {
            only(ShapeKind::Triangle, 2)?;
            build_triangle_detour2(need(params, "b1")?, need(params, "b2")?)
        }
        "early" => build_early_meeting(&make_shape(shape), k, need(params, "p1")?),
        "square-detour" => {
            only(ShapeKind::Square, 2)?;
            build_square_detour(need(params, "p")?, need(params, "q")?)
        }
        other => Err(EvacError::Config(format!(
            "unknown protocol family `{other}`"
        ))),
    }
}

/// Wraps hand-written trajectories. Two robots use interception and must be
/// mirror images; more robots meet at the centroid once the last is back.
pub fn build_custom(shape: &Shape, trajectories: Vec<Trajectory>) -> Result<Protocol> {
    let policy = if trajectories.len() == 2 {
        Policy::Intercept
    } else {
        Policy::Rendezvous {
            meeting_point: shape.centroid,
            meeting_time: trajectories
                .iter()
                .map(|t| t.end_time())
                .fold(0.0, f64::max),
        }
    };
    Protocol::new(
        shape.clone(),
        trajectories,
        policy,
        None,
        BTreeMap::new(),
        Layout::Custom,
    )
}

pub(crate) fn params_of(pairs: &[(&str, f64)]) -> BTreeMap<String, f64> {
    pairs.iter().map(|(n, v)| (n.to_string(), *v)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn common_section_membership_wraps() {
        let c = CommonSection {
            start: 3.8,
            length: 0.4,
            entry: Point::new(0.0, 0.2),
        };
        assert!((c.offset_of(0.1, 4.0).unwrap() - 0.3).abs() < 1e-12);
        assert_eq!(c.offset_of(3.8, 4.0), Some(0.0));
        assert!(c.offset_of(1.0, 4.0).is_none());
    }

    #[test]
    fn json_roundtrip_is_exact() {
        for p in [
            build_triangle_detour1(0.70745).unwrap(),
            build_square_detour(0.1556, 0.501).unwrap(),
            build_early_meeting(&Shape::triangle(), 3, 0.38601).unwrap(),
            build_equal_travel(&Shape::square(), 3).unwrap(),
        ] {
            let text = p.to_json();
            let back = Protocol::from_json(&text).unwrap();
            assert_eq!(back.trajectories, p.trajectories);
            assert_eq!(back.layout.family(), p.layout.family());
            assert_eq!(back.to_json(), text);
        }
    }

    #[test]
    fn edited_document_becomes_custom() {
        let p = build_triangle_detour1(0.7).unwrap();
        let mut doc = p.to_document();
        for w in doc.trajectories.iter_mut().flat_map(|t| t.iter_mut()) {
            w.time *= 1.5;
        }
        let back = Protocol::from_document(doc).unwrap();
        assert_eq!(back.family(), "custom");
    }

    #[test]
    fn family_dispatch_rejects_wrong_shape() {
        let params = params_of(&[("z", 0.7)]);
        assert!(matches!(
            build_family("detour1", ShapeKind::Square, 2, &params),
            Err(EvacError::Unsupported(_))
        ));
        assert!(build_family("detour1", ShapeKind::Triangle, 2, &BTreeMap::new()).is_err());
        assert!(build_family("spiral", ShapeKind::Triangle, 2, &params).is_err());
    }

    #[test]
    fn breakpoints_include_vertices_and_sections() {
        let p = build_early_meeting(&Shape::triangle(), 3, 0.38601).unwrap();
        let bps = p.breakpoints();
        for v in [0.0, 1.0, 2.0] {
            assert!(bps.iter().any(|b| (b - v).abs() < 1e-12));
        }
        assert!(bps.iter().any(|b| (b - 0.38601).abs() < 1e-9));
        assert!(bps.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn uncovered_boundary_is_rejected() {
        let sq = Shape::square();
        let t = Trajectory::from_path(0.0, &[sq.centroid, Point::new(0.5, 0.0)]);
        let err = Protocol::new(
            sq,
            vec![t.clone(), t],
            Policy::Rendezvous {
                meeting_point: Point::new(0.5, 0.0),
                meeting_time: 0.5,
            },
            None,
            BTreeMap::new(),
            Layout::Custom,
        )
        .unwrap_err();
        assert!(matches!(err, EvacError::ProtocolInvariant(_)));
    }
}
