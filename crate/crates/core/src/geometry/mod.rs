//! Planar primitives: points, convex polygons and half-plane clipping.

mod power;
mod quadrature;

pub use power::{compute_power_diagram, owner_of, PowerCell, Site};
pub use quadrature::{cell_moments, gauss_legendre, integrate_polygon, CellMoments, QUAD_ORDER};

use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Collinearity and point-coincidence tolerance, in meters.
pub const GEOM_EPS: f64 = 1e-9;

/// Cells with less area than this are reported as empty.
const MIN_CELL_AREA: f64 = 1e-14;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GeometryError {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("invalid polygon: {0}")]
    InvalidPolygon(String),
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Point2 {
    pub x: f64,
    pub y: f64,
}

impl Point2 {
    pub const ORIGIN: Point2 = Point2 { x: 0.0, y: 0.0 };

    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    pub fn dot(self, other: Point2) -> f64 {
        self.x * other.x + self.y * other.y
    }

    /// z-component of the 3D cross product.
    pub fn cross(self, other: Point2) -> f64 {
        self.x * other.y - self.y * other.x
    }

    pub fn norm_sq(self) -> f64 {
        self.dot(self)
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn distance(self, other: Point2) -> f64 {
        (self - other).norm()
    }

    pub fn lerp(self, other: Point2, t: f64) -> Point2 {
        self + (other - self) * t
    }
}

impl Add for Point2 {
    type Output = Point2;
    fn add(self, rhs: Point2) -> Point2 {
        Point2::new(self.x + rhs.x, self.y + rhs.y)
    }
}

impl Sub for Point2 {
    type Output = Point2;
    fn sub(self, rhs: Point2) -> Point2 {
        Point2::new(self.x - rhs.x, self.y - rhs.y)
    }
}

impl Mul<f64> for Point2 {
    type Output = Point2;
    fn mul(self, k: f64) -> Point2 {
        Point2::new(self.x * k, self.y * k)
    }
}

impl Neg for Point2 {
    type Output = Point2;
    fn neg(self) -> Point2 {
        Point2::new(-self.x, -self.y)
    }
}

/// Closed half-plane `{q : (q - point) · normal <= 0}`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HalfPlane {
    point: Point2,
    normal: Point2,
}

impl HalfPlane {
    pub fn new(point: Point2, normal: Point2) -> Result<Self, GeometryError> {
        if !point.is_finite() || !normal.is_finite() {
            return Err(GeometryError::InvalidArgument(
                "half-plane point and normal must be finite".into(),
            ));
        }
        if normal.norm() <= GEOM_EPS * GEOM_EPS {
            return Err(GeometryError::InvalidArgument(
                "half-plane normal is degenerate".into(),
            ));
        }
        Ok(Self { point, normal })
    }

    pub fn point(&self) -> Point2 {
        self.point
    }

    pub fn normal(&self) -> Point2 {
        self.normal
    }

    /// Signed distance of `q` from the boundary line, positive outside.
    pub fn signed_distance(&self, q: Point2) -> f64 {
        (q - self.point).dot(self.normal) / self.normal.norm()
    }
}

/// Convex polygon with counter-clockwise vertices.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Point2>", into = "Vec<Point2>")]
pub struct ConvexPolygon {
    vertices: Vec<Point2>,
}

impl TryFrom<Vec<Point2>> for ConvexPolygon {
    type Error = GeometryError;
    fn try_from(v: Vec<Point2>) -> Result<Self, Self::Error> {
        ConvexPolygon::new(v)
    }
}

impl From<ConvexPolygon> for Vec<Point2> {
    fn from(p: ConvexPolygon) -> Self {
        p.vertices
    }
}

impl ConvexPolygon {
    /// Validates and normalizes a vertex list.
    ///
    /// Clockwise input is reversed. Consecutive duplicates and collinear
    /// vertices (within [`GEOM_EPS`]) are dropped.
    pub fn new(vertices: Vec<Point2>) -> Result<Self, GeometryError> {
        if vertices.iter().any(|v| !v.is_finite()) {
            return Err(GeometryError::InvalidArgument(
                "polygon vertices must be finite".into(),
            ));
        }
        let mut vertices = simplify(vertices);
        if vertices.len() < 3 {
            return Err(GeometryError::InvalidPolygon(
                "polygon needs at least 3 distinct, non-collinear vertices".into(),
            ));
        }
        if signed_area(&vertices) < 0.0 {
            vertices.reverse();
        }
        let n = vertices.len();
        for i in 0..n {
            let a = vertices[i];
            let b = vertices[(i + 1) % n];
            let c = vertices[(i + 2) % n];
            let turn =
                (b - a).cross(c - b) / ((b - a).norm() * (c - b).norm()).max(f64::MIN_POSITIVE);
            if turn < -GEOM_EPS {
                return Err(GeometryError::InvalidPolygon(format!(
                    "polygon is not convex at vertex ({}, {})",
                    b.x, b.y
                )));
            }
        }
        Ok(Self { vertices })
    }

    /// Axis-aligned rectangle `[x0, x1] × [y0, y1]`.
    pub fn rectangle(x0: f64, y0: f64, x1: f64, y1: f64) -> Result<Self, GeometryError> {
        if !(x1 > x0 && y1 > y0) {
            return Err(GeometryError::InvalidPolygon(format!(
                "rectangle [{x0}, {x1}] x [{y0}, {y1}] is empty"
            )));
        }
        Self::new(vec![
            Point2::new(x0, y0),
            Point2::new(x1, y0),
            Point2::new(x1, y1),
            Point2::new(x0, y1),
        ])
    }

    pub fn vertices(&self) -> &[Point2] {
        &self.vertices
    }

    pub fn edges(&self) -> impl Iterator<Item = (Point2, Point2)> + '_ {
        let n = self.vertices.len();
        (0..n).map(move |i| (self.vertices[i], self.vertices[(i + 1) % n]))
    }

    pub fn area(&self) -> f64 {
        signed_area(&self.vertices)
    }

    /// Geometric centroid (uniform density).
    pub fn centroid(&self) -> Point2 {
        let origin = self.vertices[0];
        let mut acc = Point2::ORIGIN;
        let mut area2 = 0.0;
        for (a, b) in self.edges() {
            let (a, b) = (a - origin, b - origin);
            let cr = a.cross(b);
            area2 += cr;
            acc = acc + (a + b) * cr;
        }
        origin + acc * (1.0 / (3.0 * area2))
    }

    pub fn contains(&self, q: Point2, tol: f64) -> bool {
        self.edges().all(|(a, b)| {
            let e = b - a;
            e.cross(q - a) / e.norm() >= -tol
        })
    }

    /// Nearest point of the polygon to `q` (identity for interior points).
    pub fn project(&self, q: Point2) -> Point2 {
        if self.contains(q, 0.0) {
            return q;
        }
        let mut best = self.vertices[0];
        let mut best_d = f64::INFINITY;
        for (a, b) in self.edges() {
            let e = b - a;
            let t = ((q - a).dot(e) / e.norm_sq()).clamp(0.0, 1.0);
            let c = a + e * t;
            let d = (q - c).norm_sq();
            if d < best_d {
                best_d = d;
                best = c;
            }
        }
        best
    }

    pub fn translate(&self, offset: Point2) -> ConvexPolygon {
        ConvexPolygon {
            vertices: self.vertices.iter().map(|&v| v + offset).collect(),
        }
    }

    /// Bounding box as `(min, max)`.
    pub fn bounds(&self) -> (Point2, Point2) {
        let mut lo = Point2::new(f64::INFINITY, f64::INFINITY);
        let mut hi = Point2::new(f64::NEG_INFINITY, f64::NEG_INFINITY);
        for v in &self.vertices {
            lo = Point2::new(lo.x.min(v.x), lo.y.min(v.y));
            hi = Point2::new(hi.x.max(v.x), hi.y.max(v.y));
        }
        (lo, hi)
    }

    /// Builds a polygon from clipper output, or `None` if it has collapsed.
    fn from_clipped(vertices: Vec<Point2>) -> Option<Self> {
        let vertices = simplify(vertices);
        if vertices.len() < 3 || signed_area(&vertices) <= MIN_CELL_AREA {
            return None;
        }
        Some(Self { vertices })
    }
}

fn signed_area(v: &[Point2]) -> f64 {
    if v.len() < 3 {
        return 0.0;
    }
    let origin = v[0];
    let n = v.len();
    let mut s = 0.0;
    for i in 1..n - 1 {
        s += (v[i] - origin).cross(v[i + 1] - origin);
    }
    0.5 * s
}

/// Drops repeated and collinear vertices in a closed ring.
fn simplify(mut v: Vec<Point2>) -> Vec<Point2> {
    v.dedup_by(|b, a| a.distance(*b) <= GEOM_EPS);
    while v.len() > 1 && v[0].distance(v[v.len() - 1]) <= GEOM_EPS {
        v.pop();
    }
    let mut changed = true;
    while changed && v.len() >= 3 {
        changed = false;
        let n = v.len();
        for i in 0..n {
            let a = v[(i + n - 1) % n];
            let b = v[i];
            let c = v[(i + 1) % n];
            let ac = c - a;
            let len = ac.norm();
            if len <= GEOM_EPS || (b - a).cross(ac).abs() / len <= GEOM_EPS {
                v.remove(i);
                changed = true;
                break;
            }
        }
    }
    v
}

/// Intersects `poly` with the closed half-plane `{q : (q − point)·normal ≤ 0}`.
///
/// Returns `Ok(None)` when the intersection has no area.
pub fn halfplane_clip(
    poly: &ConvexPolygon,
    line: &HalfPlane,
) -> Result<Option<ConvexPolygon>, GeometryError> {
    Ok(clip_raw(poly, line.point, line.normal))
}

/// Sutherland–Hodgman against a single boundary. `normal` is assumed nonzero.
fn clip_raw(poly: &ConvexPolygon, point: Point2, normal: Point2) -> Option<ConvexPolygon> {
    let scale = normal.norm();
    let dist = |q: Point2| (q - point).dot(normal) / scale;
    let verts = &poly.vertices;
    let d: Vec<f64> = verts.iter().map(|&v| dist(v)).collect();

    if d.iter().all(|&s| s <= GEOM_EPS) {
        return Some(poly.clone());
    }
    if d.iter().all(|&s| s >= -GEOM_EPS) {
        return None;
    }

    let n = verts.len();
    let mut out = Vec::with_capacity(n + 1);
    for i in 0..n {
        let j = (i + 1) % n;
        let (a, b) = (verts[i], verts[j]);
        let (da, db) = (d[i], d[j]);
        if da <= 0.0 {
            out.push(a);
        }
        if (da < 0.0 && db > 0.0) || (da > 0.0 && db < 0.0) {
            out.push(a.lerp(b, da / (da - db)));
        }
    }
    ConvexPolygon::from_clipped(out)
}
