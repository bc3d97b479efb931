//! Exact planar geometry over the rationals: convex hulls, membership,
//! and fractional-linear (projective) maps.

use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::exact::{fmt_rat, Rat};

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Point {
    pub x: Rat,
    pub y: Rat,
}

impl Point {
    pub fn new(x: Rat, y: Rat) -> Self {
        Self { x, y }
    }

    pub fn describe(&self) -> String {
        format!("({}, {})", fmt_rat(&self.x), fmt_rat(&self.y))
    }
}

#[derive(Debug, Error)]
pub enum GeometryError {
    #[error("need at least 3 points, got {0}")]
    TooFewPoints(usize),
    #[error("all points collinear")]
    Degenerate,
    #[error("projective map denominator vanishes at {0}")]
    SingularMap(String),
}

/// Orientation of the triple (o, a, b): positive for a left turn.
pub fn cross(o: &Point, a: &Point, b: &Point) -> Rat {
    (&a.x - &o.x) * (&b.y - &o.y) - (&a.y - &o.y) * (&b.x - &o.x)
}

/// Half-plane `a*x + b*y >= c` (or strict).
#[derive(Clone, Debug)]
pub struct HalfPlane {
    pub a: Rat,
    pub b: Rat,
    pub c: Rat,
    pub strict: bool,
}

impl HalfPlane {
    pub fn new(a: Rat, b: Rat, c: Rat, strict: bool) -> Self {
        assert!(
            !(a.is_zero() && b.is_zero()),
            "degenerate half-plane normal"
        );
        Self { a, b, c, strict }
    }

    /// Inner side of the directed edge p -> q for a CCW polygon.
    pub fn from_edge(p: &Point, q: &Point, strict: bool) -> Self {
        let a = -(&q.y - &p.y);
        let b = &q.x - &p.x;
        let c = &a * &p.x + &b * &p.y;
        Self::new(a, b, c, strict)
    }

    pub fn satisfied_by(&self, p: &Point) -> bool {
        let v = &self.a * &p.x + &self.b * &p.y;
        if self.strict {
            v > self.c
        } else {
            v >= self.c
        }
    }
}

/// Convex polygon: CCW vertex order starting from the lexicographic minimum,
/// with no three retained vertices collinear.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HullPolygon {
    vertices: Vec<Point>,
}

impl HullPolygon {
    /// Wraps a vertex list already known to be strictly convex and CCW.
    /// Verified; panics on violation so bad callers fail loudly.
    pub fn from_ccw_vertices(vertices: Vec<Point>) -> Self {
        let poly = Self { vertices };
        assert!(poly.check_strict_convexity(), "vertex list not strictly convex CCW");
        poly
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// Every consecutive vertex triple must make a strict left turn.
    pub fn check_strict_convexity(&self) -> bool {
        let n = self.vertices.len();
        if n < 3 {
            return false;
        }
        (0..n).all(|i| {
            let o = &self.vertices[i];
            let a = &self.vertices[(i + 1) % n];
            let b = &self.vertices[(i + 2) % n];
            cross(o, a, b).is_positive()
        })
    }

    pub fn edges(&self, strict: bool) -> Vec<HalfPlane> {
        let n = self.vertices.len();
        (0..n)
            .map(|i| HalfPlane::from_edge(&self.vertices[i], &self.vertices[(i + 1) % n], strict))
            .collect()
    }

    /// Point membership: every edge half-plane must hold
    /// (non-strict when `closed`, strict otherwise).
    pub fn contains(&self, p: &Point, closed: bool) -> bool {
        let n = self.vertices.len();
        (0..n).all(|i| {
            let c = cross(&self.vertices[i], &self.vertices[(i + 1) % n], p);
            if closed {
                !c.is_negative()
            } else {
                c.is_positive()
            }
        })
    }

    pub fn centroid(&self) -> Point {
        let n = Rat::from_integer(num_bigint::BigInt::from(self.vertices.len()));
        let mut x = Rat::zero();
        let mut y = Rat::zero();
        for v in &self.vertices {
            x += &v.x;
            y += &v.y;
        }
        Point::new(x / &n, y / &n)
    }
}

fn sorted_dedup(points: &[Point]) -> Vec<Point> {
    let mut pts = points.to_vec();
    pts.sort();
    pts.dedup();
    pts
}

/// Andrew's monotone chain over exact rationals. Collinear intermediate
/// points are dropped, so only extreme points remain. The result is CCW and
/// starts at the lexicographically smallest input point.
pub fn convex_hull(points: &[Point]) -> Result<HullPolygon, GeometryError> {
    if points.len() < 3 {
        return Err(GeometryError::TooFewPoints(points.len()));
    }
    let pts = sorted_dedup(points);
    if pts.len() < 3 {
        return Err(GeometryError::Degenerate);
    }

    let mut lower: Vec<Point> = Vec::new();
    for p in &pts {
        while lower.len() >= 2
            && !cross(&lower[lower.len() - 2], &lower[lower.len() - 1], p).is_positive()
        {
            lower.pop();
        }
        lower.push(p.clone());
    }
    let mut upper: Vec<Point> = Vec::new();
    for p in pts.iter().rev() {
        while upper.len() >= 2
            && !cross(&upper[upper.len() - 2], &upper[upper.len() - 1], p).is_positive()
        {
            upper.pop();
        }
        upper.push(p.clone());
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    if lower.len() < 3 {
        return Err(GeometryError::Degenerate);
    }
    Ok(HullPolygon { vertices: lower })
}

/// Upper hull only, left to right: the concave-from-above chain from the
/// lexicographic minimum to maximum. Collinear points are dropped.
pub fn upper_hull(points: &[Point]) -> Vec<Point> {
    let pts = sorted_dedup(points);
    let mut upper: Vec<Point> = Vec::new();
    for p in &pts {
        while upper.len() >= 2
            && !cross(&upper[upper.len() - 2], &upper[upper.len() - 1], p).is_negative()
        {
            upper.pop();
        }
        upper.push(p.clone());
    }
    upper
}

/// `P(k, l) = (phi1/phi2, phi3/phi2)` with affine `phi_i`.
#[derive(Clone, Debug)]
pub struct ProjectiveMap {
    /// Rows phi1, phi2, phi3; each row is (coefficient of x, of y, constant).
    pub phi: [[Rat; 3]; 3],
}

impl ProjectiveMap {
    pub fn new(phi: [[Rat; 3]; 3]) -> Self {
        Self { phi }
    }

    pub fn identity() -> Self {
        let z = Rat::zero;
        let one = || Rat::from_integer(1.into());
        Self::new([
            [one(), z(), z()],
            [z(), z(), one()],
            [z(), one(), z()],
        ])
    }

    fn row(&self, i: usize, p: &Point) -> Rat {
        &self.phi[i][0] * &p.x + &self.phi[i][1] * &p.y + &self.phi[i][2]
    }

    pub fn map_point(&self, p: &Point) -> Result<Point, GeometryError> {
        let den = self.row(1, p);
        if den.is_zero() {
            return Err(GeometryError::SingularMap(p.describe()));
        }
        Ok(Point::new(self.row(0, p) / &den, self.row(2, p) / &den))
    }
}

fn on_segment_parameter(a: &Point, b: &Point, p: &Point) -> Option<Rat> {
    // p = a + mu (b - a) exactly, with mu in [0, 1].
    if !cross(a, b, p).is_zero() {
        return None;
    }
    let dx = &b.x - &a.x;
    let mu = if !dx.is_zero() {
        (&p.x - &a.x) / dx
    } else {
        let dy = &b.y - &a.y;
        if dy.is_zero() {
            return None;
        }
        (&p.y - &a.y) / dy
    };
    if mu < Rat::zero() || mu > Rat::from_integer(1.into()) {
        return None;
    }
    Some(mu)
}

/// Checks the quasilinearity of a projective map on a segment: every sampled
/// interior point must map exactly onto the segment [P(p1), P(p2)], with the
/// induced parameter increasing from 0 to 1.
pub fn segment_image_is_segment(
    map: &ProjectiveMap,
    p1: &Point,
    p2: &Point,
    samples: u32,
) -> Result<bool, GeometryError> {
    // The denominator is affine on the segment, so an endpoint sign change
    // means it vanishes somewhere between.
    let d1 = map.row(1, p1);
    let d2 = map.row(1, p2);
    if d1.is_zero() || d2.is_zero() || (d1.is_positive() != d2.is_positive()) {
        return Err(GeometryError::SingularMap(format!(
            "segment {} - {}",
            p1.describe(),
            p2.describe()
        )));
    }
    let q1 = map.map_point(p1)?;
    let q2 = map.map_point(p2)?;
    let mut last_mu = Rat::zero();
    for i in 1..=samples {
        let lambda = Rat::new(i.into(), (samples + 1).into());
        let one = Rat::from_integer(1.into());
        let mid = Point::new(
            &p1.x * &lambda + &p2.x * (&one - &lambda),
            &p1.y * &lambda + &p2.y * (&one - &lambda),
        );
        let img = map.map_point(&mid)?;
        // lambda runs 0 -> 1 from p2 to p1 here; the induced parameter must
        // do the same on the image segment.
        let mu = match on_segment_parameter(&q2, &q1, &img) {
            Some(mu) => mu,
            None => return Ok(false),
        };
        if mu <= last_mu {
            return Ok(false);
        }
        last_mu = mu;
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;

    fn pt(a: i64, b: i64, c: i64, d: i64) -> Point {
        Point::new(rat(a, b), rat(c, d))
    }

    #[test]
    fn unit_square_with_center() {
        let pts = vec![
            pt(0, 1, 0, 1),
            pt(1, 1, 0, 1),
            pt(1, 1, 1, 1),
            pt(0, 1, 1, 1),
            pt(1, 2, 1, 2),
        ];
        let hull = convex_hull(&pts).unwrap();
        assert_eq!(hull.len(), 4);
        assert!(!hull.vertices().contains(&pt(1, 2, 1, 2)));
        assert!(hull.contains(&pt(1, 2, 1, 2), true));
        assert!(hull.contains(&pt(1, 2, 1, 2), false));
        assert!(hull.contains(&pt(0, 1, 0, 1), true));
        assert!(!hull.contains(&pt(0, 1, 0, 1), false));
    }

    #[test]
    fn triangle_of_three_points() {
        let pts = vec![pt(1, 3, 1, 7), pt(2, 3, 5, 7), pt(1, 2, 6, 7)];
        let hull = convex_hull(&pts).unwrap();
        assert_eq!(hull.len(), 3);
        for p in &pts {
            assert!(hull.vertices().contains(p));
        }
    }

    #[test]
    fn collinear_is_degenerate() {
        let pts = vec![pt(0, 1, 0, 1), pt(1, 1, 1, 1), pt(2, 1, 2, 1)];
        assert!(matches!(
            convex_hull(&pts),
            Err(GeometryError::Degenerate)
        ));
        assert!(matches!(
            convex_hull(&pts[..2]),
            Err(GeometryError::TooFewPoints(2))
        ));
    }

    #[test]
    fn hull_starts_at_lexicographic_minimum() {
        let pts = vec![pt(3, 1, 0, 1), pt(0, 1, 2, 1), pt(1, 1, -1, 1), pt(2, 1, 3, 1)];
        let hull = convex_hull(&pts).unwrap();
        assert_eq!(hull.vertices()[0], pt(0, 1, 2, 1));
        assert!(hull.check_strict_convexity());
    }

    #[test]
    fn centroid_inside() {
        let pts = vec![pt(0, 1, 0, 1), pt(1, 1, 0, 1), pt(1, 1, 1, 1), pt(0, 1, 1, 1)];
        let hull = convex_hull(&pts).unwrap();
        assert!(hull.contains(&hull.centroid(), true));
    }

    #[test]
    fn identity_map_fixes_points() {
        let id = ProjectiveMap::identity();
        let p = pt(1, 3, 2, 3);
        assert_eq!(id.map_point(&p).unwrap(), p);
    }

    #[test]
    fn affine_map_preserves_segments() {
        // (x, y) -> (y - 1/2, x + 1/2)
        let z = Rat::zero;
        let map = ProjectiveMap::new([
            [z(), rat(1, 1), rat(-1, 2)],
            [z(), z(), rat(1, 1)],
            [rat(1, 1), z(), rat(1, 2)],
        ]);
        assert!(segment_image_is_segment(&map, &pt(0, 1, 1, 1), &pt(1, 2, 1, 2), 20).unwrap());
    }

    #[test]
    fn singular_map_detected() {
        // phi2 = x - 1/2 vanishes mid-segment.
        let z = Rat::zero;
        let map = ProjectiveMap::new([
            [rat(1, 1), z(), z()],
            [rat(1, 1), z(), rat(-1, 2)],
            [z(), rat(1, 1), z()],
        ]);
        let res = segment_image_is_segment(&map, &pt(0, 1, 0, 1), &pt(1, 1, 0, 1), 3);
        assert!(matches!(res, Err(GeometryError::SingularMap(_))));
    }

    #[test]
    fn upper_hull_chain() {
        let pts = vec![
            pt(0, 1, 0, 1),
            pt(1, 4, 1, 2),
            pt(1, 2, 3, 4),
            pt(3, 4, 1, 2),
            pt(1, 1, 0, 1),
            pt(1, 2, 1, 4),
        ];
        let chain = upper_hull(&pts);
        assert_eq!(
            chain,
            vec![
                pt(0, 1, 0, 1),
                pt(1, 4, 1, 2),
                pt(1, 2, 3, 4),
                pt(3, 4, 1, 2),
                pt(1, 1, 0, 1)
            ]
        );
    }
}
