//! Planar primitives with an exact orientation predicate.
//!
//! Only [`orient`] decides topology and it is evaluated with adaptive exact
//! arithmetic. Distances and lengths are plain `f64`.

use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

use thiserror::Error;

/// Absolute tolerance for non-topological floating point comparisons.
pub const EPS: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeomError {
    #[error("non-finite coordinate in ({x}, {y})")]
    NonFinite { x: f64, y: f64 },
    #[error("degenerate segment: both endpoints at ({x}, {y})")]
    DegenerateSegment { x: f64, y: f64 },
    #[error("polyline needs at least two vertices, got {0}")]
    TooFewVertices(usize),
    #[error("polyline has a zero-length edge at vertex {0}")]
    ZeroLengthEdge(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const fn new(x: f64, y: f64) -> Self {
        Point { x, y }
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    pub fn check_finite(self) -> Result<Self, GeomError> {
        if self.is_finite() {
            Ok(self)
        } else {
            Err(GeomError::NonFinite {
                x: self.x,
                y: self.y,
            })
        }
    }

    pub fn dot(self, o: Point) -> f64 {
        self.x * o.x + self.y * o.y
    }

    /// z-component of the 2D cross product.
    pub fn cross(self, o: Point) -> f64 {
        self.x * o.y - self.y * o.x
    }

    pub fn norm(self) -> f64 {
        libm::hypot(self.x, self.y)
    }

    pub fn dist(self, o: Point) -> f64 {
        (self - o).norm()
    }

    /// Unit vector in the same direction. Zero stays zero.
    pub fn normalized(self) -> Point {
        let n = self.norm();
        if n == 0.0 {
            self
        } else {
            Point::new(self.x / n, self.y / n)
        }
    }

    /// Rotation by +90 degrees (left normal of a direction).
    pub fn perp(self) -> Point {
        Point::new(-self.y, self.x)
    }

    pub fn rotated(self, angle: f64) -> Point {
        let (s, c) = (libm::sin(angle), libm::cos(angle));
        Point::new(c * self.x - s * self.y, s * self.x + c * self.y)
    }

    pub fn angle(self) -> f64 {
        libm::atan2(self.y, self.x)
    }

    pub fn lerp(self, o: Point, t: f64) -> Point {
        self + (o - self) * t
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

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Orientation {
    Clockwise,
    Collinear,
    CounterClockwise,
}

impl Orientation {
    pub fn sign(self) -> i8 {
        match self {
            Orientation::Clockwise => -1,
            Orientation::Collinear => 0,
            Orientation::CounterClockwise => 1,
        }
    }
}

/// Sign of the signed area of triangle `pqr`, evaluated exactly.
pub fn orient(p: Point, q: Point, r: Point) -> Result<Orientation, GeomError> {
    p.check_finite()?;
    q.check_finite()?;
    r.check_finite()?;
    Ok(orient_unchecked(p, q, r))
}

#[inline]
pub(crate) fn orient_unchecked(p: Point, q: Point, r: Point) -> Orientation {
    // Shewchuk's stage-A error bound; exact evaluation only near zero.
    const ERR_A: f64 = 3.330_669_073_875_471_6e-16;
    let left = (p.x - r.x) * (q.y - r.y);
    let right = (p.y - r.y) * (q.x - r.x);
    let det = left - right;
    let det = if det.abs() >= ERR_A * (left.abs() + right.abs()) && det != 0.0 {
        det
    } else {
        let c = |p: Point| robust::Coord { x: p.x, y: p.y };
        robust::orient2d(c(p), c(q), c(r))
    };
    if det > 0.0 {
        Orientation::CounterClockwise
    } else if det < 0.0 {
        Orientation::Clockwise
    } else {
        Orientation::Collinear
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Segment {
    a: Point,
    b: Point,
}

impl Segment {
    pub fn new(a: Point, b: Point) -> Result<Self, GeomError> {
        a.check_finite()?;
        b.check_finite()?;
        if a == b {
            return Err(GeomError::DegenerateSegment { x: a.x, y: a.y });
        }
        Ok(Segment { a, b })
    }

    pub fn a(&self) -> Point {
        self.a
    }

    pub fn b(&self) -> Point {
        self.b
    }

    pub fn length(&self) -> f64 {
        self.a.dist(self.b)
    }

    pub fn direction(&self) -> Point {
        (self.b - self.a).normalized()
    }

    fn bbox_overlaps(&self, o: &Segment) -> bool {
        let (x0, x1) = minmax(self.a.x, self.b.x);
        let (y0, y1) = minmax(self.a.y, self.b.y);
        let (u0, u1) = minmax(o.a.x, o.b.x);
        let (v0, v1) = minmax(o.a.y, o.b.y);
        x0 <= u1 && u0 <= x1 && y0 <= v1 && v0 <= y1
    }
}

fn minmax(a: f64, b: f64) -> (f64, f64) {
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}

/// How two closed segments meet.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SegmentRelation {
    Disjoint,
    /// Some point is interior to both segments (a crossing or a collinear overlap).
    Proper,
    /// They meet, but every common point is an endpoint of at least one of them.
    Touching,
}

/// `p` is known collinear with `s`; is it inside the closed segment?
fn on_collinear(s: &Segment, p: Point) -> bool {
    let (x0, x1) = minmax(s.a.x, s.b.x);
    let (y0, y1) = minmax(s.a.y, s.b.y);
    x0 <= p.x && p.x <= x1 && y0 <= p.y && p.y <= y1
}

pub fn segments_intersect(s1: &Segment, s2: &Segment) -> SegmentRelation {
    if !s1.bbox_overlaps(s2) {
        return SegmentRelation::Disjoint;
    }
    relation(s1, s2)
}

/// Sign of `orient(p, q, r)` when the float evaluation is certain, else 0.
#[inline(always)]
fn orient_filtered(p: Point, q: Point, r: Point) -> f64 {
    const ERR_A: f64 = 3.330_669_073_875_471_6e-16;
    let left = (p.x - r.x) * (q.y - r.y);
    let right = (p.y - r.y) * (q.x - r.x);
    let det = left - right;
    if det.abs() > ERR_A * (left.abs() + right.abs()) {
        det
    } else {
        0.0
    }
}

/// `segments_intersect` for segments whose bounding boxes are known to overlap.
#[inline(always)]
fn relation(s1: &Segment, s2: &Segment) -> SegmentRelation {
    let d1 = orient_filtered(s1.a, s1.b, s2.a);
    let d2 = orient_filtered(s1.a, s1.b, s2.b);
    if d1 * d2 > 0.0 {
        return SegmentRelation::Disjoint;
    }
    let d3 = orient_filtered(s2.a, s2.b, s1.a);
    let d4 = orient_filtered(s2.a, s2.b, s1.b);
    if d3 * d4 > 0.0 {
        return SegmentRelation::Disjoint;
    }
    relation_exact(s1, s2)
}

fn relation_exact(s1: &Segment, s2: &Segment) -> SegmentRelation {
    let o1 = orient_unchecked(s1.a, s1.b, s2.a).sign();
    let o2 = orient_unchecked(s1.a, s1.b, s2.b).sign();
    if o1 * o2 > 0 {
        return SegmentRelation::Disjoint;
    }
    let o3 = orient_unchecked(s2.a, s2.b, s1.a).sign();
    let o4 = orient_unchecked(s2.a, s2.b, s1.b).sign();

    if o1 == 0 && o2 == 0 {
        // Collinear: compare projections on the dominant axis.
        let use_x = (s1.b.x - s1.a.x).abs() >= (s1.b.y - s1.a.y).abs();
        let key = |p: Point| if use_x { p.x } else { p.y };
        let (a0, a1) = minmax(key(s1.a), key(s1.b));
        let (b0, b1) = minmax(key(s2.a), key(s2.b));
        let lo = if a0 > b0 { a0 } else { b0 };
        let hi = if a1 < b1 { a1 } else { b1 };
        return if lo < hi {
            SegmentRelation::Proper
        } else if lo == hi {
            SegmentRelation::Touching
        } else {
            SegmentRelation::Disjoint
        };
    }
    if o1 * o2 < 0 && o3 * o4 < 0 {
        return SegmentRelation::Proper;
    }
    let touches = (o1 == 0 && on_collinear(s1, s2.a))
        || (o2 == 0 && on_collinear(s1, s2.b))
        || (o3 == 0 && on_collinear(s2, s1.a))
        || (o4 == 0 && on_collinear(s2, s1.b));
    if touches {
        SegmentRelation::Touching
    } else {
        SegmentRelation::Disjoint
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Polyline {
    vertices: Vec<Point>,
}

impl Polyline {
    pub fn new(vertices: Vec<Point>) -> Result<Self, GeomError> {
        if vertices.len() < 2 {
            return Err(GeomError::TooFewVertices(vertices.len()));
        }
        for p in &vertices {
            p.check_finite()?;
        }
        for (i, w) in vertices.windows(2).enumerate() {
            if w[0] == w[1] {
                return Err(GeomError::ZeroLengthEdge(i));
            }
        }
        Ok(Polyline { vertices })
    }

    /// Drops consecutive vertices closer than [`EPS`] before validating.
    pub fn from_points_dedup(points: impl IntoIterator<Item = Point>) -> Result<Self, GeomError> {
        let points = points.into_iter();
        let mut vertices: Vec<Point> = Vec::with_capacity(points.size_hint().0);
        for p in points {
            match vertices.last() {
                Some(&last) if (last - p).dot(last - p) < EPS * EPS => {}
                _ => vertices.push(p),
            }
        }
        Polyline::new(vertices)
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn first(&self) -> Point {
        self.vertices[0]
    }

    pub fn last(&self) -> Point {
        self.vertices[self.vertices.len() - 1]
    }

    pub fn segments(&self) -> impl Iterator<Item = Segment> + '_ {
        self.vertices
            .windows(2)
            .map(|w| Segment { a: w[0], b: w[1] })
    }

    pub fn length(&self) -> f64 {
        self.segments().map(|s| s.length()).sum()
    }

    pub fn into_vertices(self) -> Vec<Point> {
        self.vertices
    }

    fn bbox(&self) -> (Point, Point) {
        let mut lo = self.vertices[0];
        let mut hi = lo;
        for p in &self.vertices[1..] {
            lo.x = lo.x.min(p.x);
            lo.y = lo.y.min(p.y);
            hi.x = hi.x.max(p.x);
            hi.y = hi.y.max(p.y);
        }
        (lo, hi)
    }
}

/// First offending segment pair found by [`polylines_disjoint`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PolylineConflict {
    pub segment_a: usize,
    pub segment_b: usize,
    pub relation: SegmentRelation,
}

/// Checks that two polylines do not meet. With `shared_endpoints_ok`, the only
/// tolerated contact is a common terminal vertex (first or last of both).
pub fn polylines_disjoint(
    p1: &Polyline,
    p2: &Polyline,
    shared_endpoints_ok: bool,
) -> Result<(), PolylineConflict> {
    let (lo1, hi1) = p1.bbox();
    let (lo2, hi2) = p2.bbox();
    if lo1.x > hi2.x || lo2.x > hi1.x || lo1.y > hi2.y || lo2.y > hi1.y {
        return Ok(());
    }
    let n1 = p1.vertices.len() - 1;
    let n2 = p2.vertices.len() - 1;
    let ends1 = [p1.first(), p1.last()];
    let ends2 = [p2.first(), p2.last()];
    for (i, s1) in p1.segments().enumerate() {
        for (j, s2) in p2.segments().enumerate() {
            let rel = segments_intersect(&s1, &s2);
            match rel {
                SegmentRelation::Disjoint => continue,
                SegmentRelation::Touching if shared_endpoints_ok => {
                    let end1 = [(i == 0).then_some(s1.a), (i + 1 == n1).then_some(s1.b)];
                    let end2 = [(j == 0).then_some(s2.a), (j + 1 == n2).then_some(s2.b)];
                    let shared = end1.iter().flatten().any(|p| {
                        ends1.contains(p)
                            && ends2.contains(p)
                            && end2.iter().flatten().any(|q| q == p)
                    });
                    if shared {
                        continue;
                    }
                }
                _ => {}
            }
            return Err(PolylineConflict {
                segment_a: i,
                segment_b: j,
                relation: rel,
            });
        }
    }
    Ok(())
}

/// Pairs of polylines in `lines` that meet, found by a sweep over segment
/// bounding boxes. Pairs are `(i, j)` with `i < j`, sorted.
/// With `first_only`, stops at the first pair found.
pub fn meeting_pairs(lines: &[&Polyline], first_only: bool) -> Vec<(usize, usize)> {
    #[derive(Clone, Copy)]
    struct Item {
        bucket: u64,
        x0: f64,
        x1: f64,
        y0: f64,
        y1: f64,
        line: u32,
        seg: u32,
    }
    // Order-preserving integer image of a finite float.
    let key = |x: f64| {
        let b = x.to_bits();
        if b >> 63 == 1 {
            !b
        } else {
            b | (1 << 63)
        }
    };
    let mut segs: Vec<Segment> = Vec::with_capacity(lines.iter().map(|l| l.vertices.len()).sum());
    let mut raw: Vec<Item> = Vec::with_capacity(segs.capacity());
    for (k, l) in lines.iter().enumerate() {
        for seg in l.segments() {
            let (x0, x1) = minmax(seg.a.x, seg.b.x);
            let (y0, y1) = minmax(seg.a.y, seg.b.y);
            raw.push(Item { bucket: 0, x0, x1, y0, y1, line: k as u32, seg: segs.len() as u32 });
            segs.push(seg);
        }
    }
    // Sort on the left end with its low key bits replaced by the item index.
    // Within a bucket the order is arbitrary, so the sweep stops only once a
    // whole bucket lies right of the current segment.
    let bits = usize::BITS - raw.len().leading_zeros();
    let low = (1u64 << bits) - 1;
    let mut order: Vec<u64> = raw.iter().enumerate().map(|(i, it)| (key(it.x0) & !low) | i as u64).collect();
    order.sort_unstable();
    let items: Vec<Item> = order
        .iter()
        .map(|&k| Item { bucket: k & !low, ..raw[(k & low) as usize] })
        .collect();
    let mut out: Vec<(usize, usize)> = Vec::new();
    for (k, p) in items.iter().enumerate() {
        let right = key(p.x1);
        for q in &items[k + 1..] {
            if q.bucket > right {
                break;
            }
            if (p.line == q.line) | (p.y0 > q.y1) | (q.y0 > p.y1) | (q.x0 > p.x1) | (p.x0 > q.x1) {
                continue;
            }
            let (i, j) = (p.line as usize, q.line as usize);
            let pair = if i < j { (i, j) } else { (j, i) };
            if !out.is_empty() && out.contains(&pair) {
                continue;
            }
            if relation(&segs[p.seg as usize], &segs[q.seg as usize]) != SegmentRelation::Disjoint {
                out.push(pair);
                if first_only {
                    return out;
                }
            }
        }
    }
    out.sort_unstable();
    out
}

pub fn point_segment_distance(p: Point, s: &Segment) -> f64 {
    let d = s.b - s.a;
    let t = ((p - s.a).dot(d) / d.dot(d)).clamp(0.0, 1.0);
    p.dist(s.a + d * t)
}

/// Minimum Euclidean distance from `p` to any segment of `pl`.
pub fn point_polyline_clearance(p: Point, pl: &Polyline) -> f64 {
    pl.segments()
        .map(|s| point_segment_distance(p, &s))
        .fold(f64::INFINITY, f64::min)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn seg(ax: f64, ay: f64, bx: f64, by: f64) -> Segment {
        Segment::new(Point::new(ax, ay), Point::new(bx, by)).unwrap()
    }

    #[test]
    fn orient_basic_cases() {
        let o = Point::new(0.0, 0.0);
        assert_eq!(
            orient(o, Point::new(1.0, 0.0), Point::new(0.0, 1.0))
                .unwrap()
                .sign(),
            1
        );
        assert_eq!(
            orient(o, Point::new(1.0, 0.0), Point::new(2.0, 0.0))
                .unwrap()
                .sign(),
            0
        );
        assert_eq!(
            orient(o, Point::new(0.0, 1.0), Point::new(1.0, 0.0))
                .unwrap()
                .sign(),
            -1
        );
    }

    #[test]
    fn orient_rejects_nan() {
        let bad = Point::new(f64::NAN, 0.0);
        assert!(matches!(
            orient(bad, Point::new(1.0, 0.0), Point::new(0.0, 1.0)),
            Err(GeomError::NonFinite { .. })
        ));
        assert!(orient(
            Point::new(0.0, f64::INFINITY),
            Point::default(),
            Point::default()
        )
        .is_err());
    }

    #[test]
    fn segment_relation_examples() {
        assert_eq!(
            segments_intersect(&seg(0.0, 0.0, 2.0, 2.0), &seg(0.0, 2.0, 2.0, 0.0)),
            SegmentRelation::Proper
        );
        assert_eq!(
            segments_intersect(&seg(0.0, 0.0, 1.0, 0.0), &seg(2.0, 0.0, 3.0, 0.0)),
            SegmentRelation::Disjoint
        );
        // shared endpoint
        assert_eq!(
            segments_intersect(&seg(0.0, 0.0, 1.0, 0.0), &seg(1.0, 0.0, 1.0, 1.0)),
            SegmentRelation::Touching
        );
        // T junction
        assert_eq!(
            segments_intersect(&seg(0.0, 0.0, 2.0, 0.0), &seg(1.0, 0.0, 1.0, 1.0)),
            SegmentRelation::Touching
        );
        // collinear overlap and collinear abutting
        assert_eq!(
            segments_intersect(&seg(0.0, 0.0, 2.0, 0.0), &seg(1.0, 0.0, 3.0, 0.0)),
            SegmentRelation::Proper
        );
        assert_eq!(
            segments_intersect(&seg(0.0, 0.0, 1.0, 0.0), &seg(1.0, 0.0, 3.0, 0.0)),
            SegmentRelation::Touching
        );
    }

    #[test]
    fn degenerate_segment_rejected() {
        assert!(Segment::new(Point::new(1.0, 1.0), Point::new(1.0, 1.0)).is_err());
    }

    #[test]
    fn polyline_validation() {
        assert_eq!(
            Polyline::new(vec![Point::default()]),
            Err(GeomError::TooFewVertices(1))
        );
        assert_eq!(
            Polyline::new(vec![Point::default(), Point::default()]),
            Err(GeomError::ZeroLengthEdge(0))
        );
        let pl = Polyline::from_points_dedup([
            Point::new(0.0, 0.0),
            Point::new(0.0, 0.0),
            Point::new(1.0, 0.0),
        ])
        .unwrap();
        assert_eq!(pl.vertices().len(), 2);
    }

    #[test]
    fn parallel_polylines_are_disjoint() {
        let a = Polyline::new(vec![
            Point::new(0.0, 0.0),
            Point::new(5.0, 0.0),
            Point::new(9.0, 0.0),
        ])
        .unwrap();
        let b = Polyline::new(vec![Point::new(0.0, 1.0), Point::new(9.0, 1.0)]).unwrap();
        assert!(polylines_disjoint(&a, &b, false).is_ok());
    }

    #[test]
    fn shared_final_vertex_needs_flag() {
        let a = Polyline::new(vec![Point::new(0.0, 0.0), Point::new(2.0, 2.0)]).unwrap();
        let b = Polyline::new(vec![
            Point::new(4.0, 0.0),
            Point::new(3.0, 1.0),
            Point::new(2.0, 2.0),
        ])
        .unwrap();
        assert!(polylines_disjoint(&a, &b, true).is_ok());
        let err = polylines_disjoint(&a, &b, false).unwrap_err();
        assert_eq!(err.relation, SegmentRelation::Touching);
        assert_eq!((err.segment_a, err.segment_b), (0, 1));
    }

    #[test]
    fn touching_at_interior_vertex_is_a_violation_even_with_flag() {
        let a = Polyline::new(vec![
            Point::new(0.0, 0.0),
            Point::new(1.0, 1.0),
            Point::new(2.0, 0.0),
        ])
        .unwrap();
        let b = Polyline::new(vec![Point::new(1.0, 2.0), Point::new(1.0, 1.0)]).unwrap();
        assert!(polylines_disjoint(&a, &b, true).is_err());
    }

    #[test]
    fn crossing_polylines_report_pair() {
        let a = Polyline::new(vec![
            Point::new(0.0, 0.0),
            Point::new(1.0, 0.0),
            Point::new(3.0, 0.0),
        ])
        .unwrap();
        let b = Polyline::new(vec![Point::new(2.0, -1.0), Point::new(2.0, 1.0)]).unwrap();
        let err = polylines_disjoint(&a, &b, true).unwrap_err();
        assert_eq!(
            (err.segment_a, err.segment_b, err.relation),
            (1, 0, SegmentRelation::Proper)
        );
    }

    #[test]
    fn clearance_examples() {
        let pl = Polyline::new(vec![Point::new(-1.0, 0.0), Point::new(1.0, 0.0)]).unwrap();
        assert!((point_polyline_clearance(Point::new(0.0, 1.0), &pl) - 1.0).abs() < 1e-12);
        assert!((point_polyline_clearance(Point::new(2.0, 0.0), &pl) - 1.0).abs() < 1e-12);
    }
}
