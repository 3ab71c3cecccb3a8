//! Exact integer predicates and point-set measures.
//!
//! Every predicate that steers an algorithm is evaluated exactly: coordinates
//! are integers bounded by [`MAX_COORD`], orientation tests fit in `i64`,
//! parameters along segments fit in `i128`, and the one product that can
//! outgrow `i128` (a dot product at a rational intersection point) is done
//! with big integers. Floats appear only in reported lengths and ratios.

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use std::cmp::Ordering;

use crate::error::{Error, Result};

/// Largest supported absolute coordinate value.
pub const MAX_COORD: i64 = 1 << 20;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Color {
    Red,
    Blue,
    None,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Point {
    pub id: usize,
    pub x: i64,
    pub y: i64,
    pub color: Color,
}

impl Point {
    pub fn new(x: i64, y: i64) -> Self {
        Point { id: 0, x, y, color: Color::None }
    }

    pub fn colored(x: i64, y: i64, color: Color) -> Self {
        Point { id: 0, x, y, color }
    }

    pub fn with_color(mut self, color: Color) -> Self {
        self.color = color;
        self
    }

    fn sub(&self, other: &Point) -> (i64, i64) {
        (self.x - other.x, self.y - other.y)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum PositionClass {
    /// No three points collinear.
    General,
    /// Strictly convex position, stored in clockwise hull order.
    Convex,
    /// Blue points on one horizontal line, red points off it; the only
    /// collinear triples are triples of blue points.
    SemiCollinear,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointSet {
    points: Vec<Point>,
    class: PositionClass,
}

impl PointSet {
    /// Builds a point set and validates the declared position class.
    /// Point ids are reassigned to their index.
    pub fn new(mut points: Vec<Point>, class: PositionClass) -> Result<Self> {
        if points.len() < 2 {
            return Err(Error::InvalidPointSet {
                declared: class,
                reason: format!("need at least 2 points, got {}", points.len()),
            });
        }
        for (i, p) in points.iter_mut().enumerate() {
            p.id = i;
            for c in [p.x, p.y] {
                if c.abs() > MAX_COORD {
                    return Err(Error::CoordinateOutOfRange(c, i));
                }
            }
        }
        check_distinct(&points)?;
        let invalid = |reason: String| Error::InvalidPointSet { declared: class, reason };
        match class {
            PositionClass::General => {
                if let Some(t) = find_collinear_triple(&points, |_| false) {
                    return Err(invalid(format!("points {t:?} are collinear")));
                }
            }
            PositionClass::Convex => check_convex_clockwise(&points).map_err(invalid)?,
            PositionClass::SemiCollinear => check_semi_collinear(&points).map_err(invalid)?,
        }
        Ok(PointSet { points, class })
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn point(&self, i: usize) -> &Point {
        &self.points[i]
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn class(&self) -> PositionClass {
        self.class
    }

    pub fn color(&self, i: usize) -> Color {
        self.points[i].color
    }

    pub fn spread(&self) -> Result<f64> {
        spread(&self.points)
    }

    /// Indices of points with the given color.
    pub fn indices_of(&self, color: Color) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.points[i].color == color).collect()
    }

    /// Same points with new colors (one per point); the class is revalidated.
    pub fn recolored(&self, colors: &[Color]) -> Result<Self> {
        assert_eq!(colors.len(), self.len());
        let pts = self.points.iter().zip(colors).map(|(p, &c)| p.with_color(c)).collect();
        PointSet::new(pts, self.class)
    }
}

fn check_distinct(points: &[Point]) -> Result<()> {
    let mut order: Vec<usize> = (0..points.len()).collect();
    order.sort_by_key(|&i| (points[i].x, points[i].y));
    for w in order.windows(2) {
        let (a, b) = (&points[w[0]], &points[w[1]]);
        if a.x == b.x && a.y == b.y {
            return Err(Error::DuplicatePoints(w[0].min(w[1]), w[0].max(w[1])));
        }
    }
    Ok(())
}

/// First collinear triple (lexicographic) not excused by `allowed`.
pub(crate) fn find_collinear_triple(
    points: &[Point],
    allowed: impl Fn([usize; 3]) -> bool,
) -> Option<[usize; 3]> {
    let n = points.len();
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                if orientation(&points[i], &points[j], &points[k]) == Orientation::Collinear
                    && !allowed([i, j, k])
                {
                    return Some([i, j, k]);
                }
            }
        }
    }
    None
}

fn check_convex_clockwise(points: &[Point]) -> std::result::Result<(), String> {
    let n = points.len();
    if n < 3 {
        return Ok(());
    }
    // Every hull edge must have all remaining points strictly on its right.
    for i in 0..n {
        let (a, b) = (&points[i], &points[(i + 1) % n]);
        for (k, c) in points.iter().enumerate() {
            if k == i || k == (i + 1) % n {
                continue;
            }
            if orientation(a, b, c) != Orientation::Clockwise {
                return Err(format!(
                    "point {k} is not strictly right of hull edge ({i}, {})",
                    (i + 1) % n
                ));
            }
        }
    }
    Ok(())
}

fn check_semi_collinear(points: &[Point]) -> std::result::Result<(), String> {
    let blues: Vec<&Point> = points.iter().filter(|p| p.color == Color::Blue).collect();
    if points.iter().any(|p| p.color == Color::None) {
        return Err("every point must be red or blue".into());
    }
    let Some(line_y) = blues.first().map(|p| p.y) else {
        return Err("no blue points".into());
    };
    if blues.iter().any(|p| p.y != line_y) {
        return Err("blue points are not on one horizontal line".into());
    }
    if let Some(r) = points.iter().find(|p| p.color == Color::Red && p.y == line_y) {
        return Err(format!("red point {} lies on the blue line", r.id));
    }
    let all_blue = |t: [usize; 3]| t.iter().all(|&i| points[i].color == Color::Blue);
    if let Some(t) = find_collinear_triple(points, all_blue) {
        return Err(format!("points {t:?} are collinear"));
    }
    Ok(())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Orientation {
    Clockwise,
    CounterClockwise,
    Collinear,
}

/// Exact 2D cross product `(b - a) x (c - a)`.
#[inline]
pub fn cross(a: &Point, b: &Point, c: &Point) -> i64 {
    let (ux, uy) = b.sub(a);
    let (vx, vy) = c.sub(a);
    ux * vy - uy * vx
}

#[inline]
pub fn orientation(a: &Point, b: &Point, c: &Point) -> Orientation {
    match cross(a, b, c).cmp(&0) {
        Ordering::Greater => Orientation::CounterClockwise,
        Ordering::Less => Orientation::Clockwise,
        Ordering::Equal => Orientation::Collinear,
    }
}

/// True iff the open segments `ab` and `cd` meet in exactly one interior point.
/// Shared endpoints, touching and collinear overlap are not crossings.
#[inline]
pub fn segments_cross(a: &Point, b: &Point, c: &Point, d: &Point) -> bool {
    let o1 = cross(a, b, c).signum();
    let o2 = cross(a, b, d).signum();
    let o3 = cross(c, d, a).signum();
    let o4 = cross(c, d, b).signum();
    o1 * o2 < 0 && o3 * o4 < 0
}

/// [`segments_cross`] for points promised to be in general position: reports
/// any collinear triple among the four endpoints instead of answering.
pub fn segments_cross_checked(a: &Point, b: &Point, c: &Point, d: &Point) -> Result<bool> {
    let pts = [a, b, c, d];
    for i in 0..4 {
        for j in i + 1..4 {
            for k in j + 1..4 {
                if orientation(pts[i], pts[j], pts[k]) == Orientation::Collinear {
                    return Err(Error::DegenerateInput([pts[i].id, pts[j].id, pts[k].id]));
                }
            }
        }
    }
    Ok(segments_cross(a, b, c, d))
}

/// A point with rational coordinates `(x / den, y / den)`, `den > 0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RationalPoint {
    pub x: i128,
    pub y: i128,
    pub den: i128,
}

impl RationalPoint {
    pub fn from_point(p: &Point) -> Self {
        RationalPoint { x: p.x as i128, y: p.y as i128, den: 1 }
    }

    /// Reduced form, so equal points compare equal.
    pub fn normalized(self) -> Self {
        let g = gcd(gcd(self.x.abs(), self.y.abs()), self.den);
        if g > 1 {
            RationalPoint { x: self.x / g, y: self.y / g, den: self.den / g }
        } else {
            self
        }
    }

    pub fn to_f64(&self) -> (f64, f64) {
        (self.x as f64 / self.den as f64, self.y as f64 / self.den as f64)
    }
}

fn gcd(mut a: i128, mut b: i128) -> i128 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a.abs()
}

/// Intersection point of two crossing segments, exact.
pub fn intersection_point(a: &Point, b: &Point, c: &Point, d: &Point) -> Result<RationalPoint> {
    if !segments_cross(a, b, c, d) {
        return Err(Error::NotCrossing(
            crate::graph::Edge::new(a.id, b.id),
            crate::graph::Edge::new(c.id, d.id),
        ));
    }
    let (t_num, t_den) = param_on_first(a, b, c, d);
    let (mut num, mut den) = (t_num as i128, t_den as i128);
    if den < 0 {
        num = -num;
        den = -den;
    }
    let x = a.x as i128 * den + num * (b.x - a.x) as i128;
    let y = a.y as i128 * den + num * (b.y - a.y) as i128;
    Ok(RationalPoint { x, y, den }.normalized())
}

/// Parameter `t = num / den` of the intersection of line `ab` with line `cd`,
/// measured along `ab` (`a` at 0, `b` at 1). `den` is zero for parallel lines.
#[inline]
pub(crate) fn param_on_first(a: &Point, b: &Point, c: &Point, d: &Point) -> (i64, i64) {
    let (ex, ey) = b.sub(a);
    let (fx, fy) = d.sub(c);
    let (gx, gy) = c.sub(a);
    let den = ex * fy - ey * fx;
    let num = gx * fy - gy * fx;
    (num, den)
}

/// True iff the angle `r o q` is at most a right angle, i.e. the dot product
/// `(r - o) . (q - o)` is non-negative. Exact over the rationals.
pub fn angle_at_most_right(o: &RationalPoint, r: &Point, q: &Point) -> bool {
    dot_at(o, r, q) >= BigInt::from(0)
}

/// `den^2 * ((r - o) . (q - o))`, which has the sign of the dot product.
fn dot_at(o: &RationalPoint, r: &Point, q: &Point) -> BigInt {
    let rx = BigInt::from(r.x as i128 * o.den - o.x);
    let ry = BigInt::from(r.y as i128 * o.den - o.y);
    let qx = BigInt::from(q.x as i128 * o.den - o.x);
    let qy = BigInt::from(q.y as i128 * o.den - o.y);
    rx * qx + ry * qy
}

#[inline]
pub fn dist2(a: &Point, b: &Point) -> i64 {
    let (dx, dy) = a.sub(b);
    dx * dx + dy * dy
}

#[inline]
pub fn dist(a: &Point, b: &Point) -> f64 {
    (dist2(a, b) as f64).sqrt()
}

/// Minimum pairwise distance, both exact squared and as a float.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MinDistance {
    pub squared: i64,
    pub value: f64,
}

pub fn min_pairwise_distance(points: &[Point]) -> MinDistance {
    assert!(points.len() >= 2, "min_pairwise_distance needs two points");
    let mut best = i64::MAX;
    for (i, p) in points.iter().enumerate() {
        for q in &points[i + 1..] {
            best = best.min(dist2(p, q));
        }
    }
    MinDistance { squared: best, value: (best as f64).sqrt() }
}

/// Largest and smallest squared pairwise distances.
pub fn extreme_dist2(points: &[Point]) -> (i64, i64) {
    let mut lo = i64::MAX;
    let mut hi = 0;
    for (i, p) in points.iter().enumerate() {
        for q in &points[i + 1..] {
            let d = dist2(p, q);
            lo = lo.min(d);
            hi = hi.max(d);
        }
    }
    (hi, lo)
}

/// Ratio of the largest to the smallest pairwise distance.
pub fn spread(points: &[Point]) -> Result<f64> {
    assert!(points.len() >= 2, "spread needs two points");
    let (hi, lo) = extreme_dist2(points);
    if lo == 0 {
        let (i, j) = first_duplicate(points);
        return Err(Error::DuplicatePoints(i, j));
    }
    Ok((hi as f64 / lo as f64).sqrt())
}

fn first_duplicate(points: &[Point]) -> (usize, usize) {
    for i in 0..points.len() {
        for j in i + 1..points.len() {
            if dist2(&points[i], &points[j]) == 0 {
                return (i, j);
            }
        }
    }
    unreachable!("no duplicate present")
}

/// Depth of the chord between points `i` and `j`: the smaller number of
/// points strictly on either side of the line through them.
pub fn chord_depth(ps: &PointSet, i: usize, j: usize) -> usize {
    assert_ne!(i, j);
    let (a, b) = (ps.point(i), ps.point(j));
    let (mut left, mut right) = (0, 0);
    for p in ps.points() {
        match orientation(a, b, p) {
            Orientation::CounterClockwise => left += 1,
            Orientation::Clockwise => right += 1,
            Orientation::Collinear => {}
        }
    }
    left.min(right)
}
