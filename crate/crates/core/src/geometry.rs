//! Regions, boundary parameterization and planar primitives.
//!
//! Both regions have unit sides and canonical coordinates:
//!
//! * triangle: `B = (0, 0)`, `C = (1, 0)`, `A = (1/2, √3/2)`, centroid `O = (1/2, √3/6)`;
//! * square: `D = (0, 0)`, `C = (1, 0)`, `B = (1, 1)`, `A = (0, 1)`, centroid `O = (1/2, 1/2)`.
//!
//! Boundary positions are arc lengths measured counterclockwise from the first
//! listed vertex (`B` for the triangle, `D` for the square), so the first side
//! is always the horizontal one the robots start from.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{EvacError, Result};

/// Tolerance for "this point lies on that line/point" decisions.
pub const GEOM_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const fn new(x: f64, y: f64) -> Self {
        Point { x, y }
    }

    pub fn dot(self, other: Point) -> f64 {
        self.x * other.x + self.y * other.y
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn norm_sq(self) -> f64 {
        self.dot(self)
    }

    /// Point at fraction `t` of the way from `self` to `other`.
    pub fn lerp(self, other: Point, t: f64) -> Point {
        self + (other - self) * t
    }

    /// Point at distance `d` from `self` in the direction of `toward`.
    pub fn toward(self, toward: Point, d: f64) -> Point {
        let len = dist(self, toward);
        if len == 0.0 {
            return self;
        }
        self + (toward - self) * (d / len)
    }

    /// Reflection across the vertical line `x = 1/2`, the symmetry axis
    /// through the starting side's midpoint in both canonical regions.
    pub fn mirrored(self) -> Point {
        Point::new(1.0 - self.x, self.y)
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }
}

impl Add for Point {
    type Output = Point;
    fn add(self, o: Point) -> Point {
        Point::new(self.x + o.x, self.y + o.y)
    }
}

impl Sub for Point {
    type Output = Point;
    fn sub(self, o: Point) -> Point {
        Point::new(self.x - o.x, self.y - o.y)
    }
}

impl Mul<f64> for Point {
    type Output = Point;
    fn mul(self, k: f64) -> Point {
        Point::new(self.x * k, self.y * k)
    }
}

impl Neg for Point {
    type Output = Point;
    fn neg(self) -> Point {
        Point::new(-self.x, -self.y)
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

/// Euclidean distance.
pub fn dist(p: Point, q: Point) -> f64 {
    (p - q).norm()
}

/// Distance from `p` to the closed segment `ab`.
pub fn dist_to_segment(p: Point, a: Point, b: Point) -> f64 {
    let ab = b - a;
    let len_sq = ab.norm_sq();
    if len_sq == 0.0 {
        return dist(p, a);
    }
    let t = ((p - a).dot(ab) / len_sq).clamp(0.0, 1.0);
    dist(p, a + ab * t)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ShapeKind {
    Triangle,
    Square,
}

impl fmt::Display for ShapeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ShapeKind::Triangle => f.write_str("triangle"),
            ShapeKind::Square => f.write_str("square"),
        }
    }
}

impl std::str::FromStr for ShapeKind {
    type Err = EvacError;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "triangle" | "t" => Ok(ShapeKind::Triangle),
            "square" | "s" => Ok(ShapeKind::Square),
            other => Err(EvacError::Config(format!("unknown shape `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum ShapeConstants {
    /// Height, centroid-to-vertex and centroid-to-side distances.
    Triangle {
        h: f64,
        x_c: f64,
        y_c: f64,
    },
    Square {
        half_diag: f64,
    },
}

/// A unit-sided region with labeled vertices in counterclockwise order.
#[derive(Debug, Clone, PartialEq)]
pub struct Shape {
    pub kind: ShapeKind,
    pub vertices: Vec<(char, Point)>,
    pub centroid: Point,
    pub perimeter: f64,
    pub constants: ShapeConstants,
}

/// Arc-length position on a shape's boundary.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(transparent)]
pub struct BoundaryCoord(pub f64);

impl BoundaryCoord {
    /// Wraps `s` into `[0, perimeter)`.
    pub fn wrapped(s: f64, perimeter: f64) -> Self {
        let mut w = s.rem_euclid(perimeter);
        if w >= perimeter {
            w = 0.0;
        }
        BoundaryCoord(w)
    }

    pub fn s(self) -> f64 {
        self.0
    }
}

impl fmt::Display for BoundaryCoord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "s={}", self.0)
    }
}

pub fn make_shape(kind: ShapeKind) -> Shape {
    match kind {
        ShapeKind::Triangle => {
            let h = 3f64.sqrt() / 2.0;
            Shape {
                kind,
                vertices: vec![
                    ('B', Point::new(0.0, 0.0)),
                    ('C', Point::new(1.0, 0.0)),
                    ('A', Point::new(0.5, h)),
                ],
                centroid: Point::new(0.5, h / 3.0),
                perimeter: 3.0,
                constants: ShapeConstants::Triangle {
                    h,
                    x_c: 2.0 * h / 3.0,
                    y_c: h / 3.0,
                },
            }
        }
        ShapeKind::Square => Shape {
            kind,
            vertices: vec![
                ('D', Point::new(0.0, 0.0)),
                ('C', Point::new(1.0, 0.0)),
                ('B', Point::new(1.0, 1.0)),
                ('A', Point::new(0.0, 1.0)),
            ],
            centroid: Point::new(0.5, 0.5),
            perimeter: 4.0,
            constants: ShapeConstants::Square {
                half_diag: 2f64.sqrt() / 2.0,
            },
        },
    }
}

impl Shape {
    pub fn triangle() -> Shape {
        make_shape(ShapeKind::Triangle)
    }

    pub fn square() -> Shape {
        make_shape(ShapeKind::Square)
    }

    pub fn sides(&self) -> usize {
        self.vertices.len()
    }

    /// Vertex `i` (mod number of sides), which is also the start of side `i`.
    pub fn corner(&self, i: usize) -> Point {
        self.vertices[i % self.vertices.len()].1
    }

    /// Vertex by label; panics on an unknown label since labels are fixed per shape.
    pub fn vertex(&self, label: char) -> Point {
        self.vertices
            .iter()
            .find(|(l, _)| *l == label)
            .map(|(_, p)| *p)
            .unwrap_or_else(|| panic!("{} has no vertex {label}", self.kind))
    }

    /// Arc coordinate of a labeled vertex.
    pub fn vertex_arc(&self, label: char) -> f64 {
        self.vertices
            .iter()
            .position(|(l, _)| *l == label)
            .map(|i| i as f64)
            .unwrap_or_else(|| panic!("{} has no vertex {label}", self.kind))
    }

    /// Distance from the centroid to the farthest boundary point (a vertex).
    pub fn centroid_to_vertex(&self) -> f64 {
        match self.constants {
            ShapeConstants::Triangle { x_c, .. } => x_c,
            ShapeConstants::Square { half_diag } => half_diag,
        }
    }

    /// Distance from the centroid to each side.
    pub fn centroid_to_side(&self) -> f64 {
        match self.constants {
            ShapeConstants::Triangle { y_c, .. } => y_c,
            ShapeConstants::Square { .. } => 0.5,
        }
    }

    /// Midpoint of the starting side (arc 1/2).
    pub fn start_midpoint(&self) -> Point {
        self.corner(0).lerp(self.corner(1), 0.5)
    }

    pub fn wrap(&self, s: f64) -> BoundaryCoord {
        BoundaryCoord::wrapped(s, self.perimeter)
    }

    /// Point on the boundary at arc length `s` (any real; wrapped).
    pub fn boundary_point(&self, c: BoundaryCoord) -> Point {
        self.point_at_arc(c.0)
    }

    pub fn point_at_arc(&self, s: f64) -> Point {
        let s = self.wrap(s).0;
        let n = self.sides();
        let i = (s.floor() as usize).min(n - 1);
        let f = s - i as f64;
        self.corner(i).lerp(self.corner(i + 1), f)
    }

    /// Sides (by index) whose closed segment contains `p` within [`GEOM_TOL`].
    pub fn sides_containing(&self, p: Point) -> Vec<usize> {
        (0..self.sides())
            .filter(|&i| dist_to_segment(p, self.corner(i), self.corner(i + 1)) <= GEOM_TOL)
            .collect()
    }

    pub fn distance_to_boundary(&self, p: Point) -> f64 {
        (0..self.sides())
            .map(|i| dist_to_segment(p, self.corner(i), self.corner(i + 1)))
            .fold(f64::INFINITY, f64::min)
    }

    pub fn on_boundary(&self, p: Point) -> bool {
        self.distance_to_boundary(p) <= GEOM_TOL
    }

    /// Arc coordinate of `p` measured along side `side`, in `[side, side + 1]`.
    pub fn arc_on_side(&self, side: usize, p: Point) -> f64 {
        let a = self.corner(side);
        let b = self.corner(side + 1);
        let t = ((p - a).dot(b - a)).clamp(0.0, 1.0);
        side as f64 + t
    }

    /// Inverse of [`Shape::boundary_point`]; rejects points off the boundary.
    pub fn arc_of(&self, p: Point) -> Result<BoundaryCoord> {
        let (side, d) = (0..self.sides())
            .map(|i| (i, dist_to_segment(p, self.corner(i), self.corner(i + 1))))
            .min_by(|a, b| a.1.total_cmp(&b.1))
            .expect("shape has sides");
        if d > GEOM_TOL {
            return Err(EvacError::OffBoundary {
                x: p.x,
                y: p.y,
                distance: d,
            });
        }
        Ok(self.wrap(self.arc_on_side(side, p)))
    }

    /// Arc coordinate of the mirror image (about `x = 1/2`) of the point at `s`.
    pub fn mirror_arc(&self, s: f64) -> BoundaryCoord {
        self.wrap(1.0 - s)
    }

    /// Boundary polyline from arc `from` to arc `to` (counterclockwise,
    /// `to >= from`, may exceed one lap), including every vertex passed.
    pub fn boundary_path(&self, from: f64, to: f64) -> Vec<Point> {
        let mut pts = vec![self.point_at_arc(from)];
        let mut v = from.floor() + 1.0;
        while v < to - GEOM_TOL {
            if v > from + GEOM_TOL {
                pts.push(self.point_at_arc(v));
            }
            v += 1.0;
        }
        if to > from {
            pts.push(self.point_at_arc(to));
        }
        pts
    }

    /// Distance from the centroid to the boundary point at arc `s`.
    pub fn centroid_dist_at(&self, s: f64) -> f64 {
        dist(self.centroid, self.point_at_arc(s))
    }
}
