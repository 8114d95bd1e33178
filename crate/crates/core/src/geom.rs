//! Exact planar primitives.
//!
//! Incidence questions (orientation, containment, intersection) are answered
//! over `BigRational` coordinates and are never subject to rounding. Metric
//! quantities are computed in `f64` from the rational values.

use std::cmp::Ordering;
use std::fmt;

use num::bigint::Sign;
use num::{BigInt, BigRational, FromPrimitive, One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Global comparison tolerance for metric values.
pub const TAU: f64 = 1e-9;

/// Tolerance scaled to the magnitude being compared (relative above 1).
#[inline]
pub fn tol(scale: f64) -> f64 {
    TAU * scale.abs().max(1.0)
}

pub type Rational = BigRational;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Point {
    pub x: Rational,
    pub y: Rational,
}

impl Point {
    pub fn new(x: Rational, y: Rational) -> Self {
        Point { x, y }
    }

    pub fn from_ints(x: i64, y: i64) -> Self {
        Point::new(Rational::from_integer(x.into()), Rational::from_integer(y.into()))
    }

    /// Exact rational value of the given doubles.
    pub fn from_f64(x: f64, y: f64) -> Result<Self> {
        Ok(Point::new(rational_from_f64(x)?, rational_from_f64(y)?))
    }

    pub fn parse(x: &str, y: &str) -> Result<Self> {
        Ok(Point::new(parse_rational(x)?, parse_rational(y)?))
    }

    pub fn to_f64(&self) -> [f64; 2] {
        [to_f64(&self.x), to_f64(&self.y)]
    }

    /// `self + t * (other - self)`.
    pub fn lerp(&self, other: &Point, t: &Rational) -> Point {
        Point::new(
            &self.x + t * (&other.x - &self.x),
            &self.y + t * (&other.y - &self.y),
        )
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", format_rational(&self.x), format_rational(&self.y))
    }
}

/// Wire form of a point: coordinates as exact decimal (or `p/q`) strings.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PointJson {
    pub x: String,
    pub y: String,
}

impl From<&Point> for PointJson {
    fn from(p: &Point) -> Self {
        PointJson { x: format_rational(&p.x), y: format_rational(&p.y) }
    }
}

impl TryFrom<&PointJson> for Point {
    type Error = Error;
    fn try_from(p: &PointJson) -> Result<Self> {
        Point::parse(&p.x, &p.y)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SegmentGeom {
    pub a: Point,
    pub b: Point,
}

impl SegmentGeom {
    pub fn new(a: Point, b: Point) -> Result<Self> {
        if a == b {
            return Err(Error::ZeroLengthSegment);
        }
        Ok(SegmentGeom { a, b })
    }

    pub fn length(&self) -> f64 {
        dist(&self.a, &self.b)
    }

    /// Endpoints in lexicographic order.
    pub fn sorted(&self) -> (&Point, &Point) {
        if self.a <= self.b {
            (&self.a, &self.b)
        } else {
            (&self.b, &self.a)
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Intersection {
    Empty,
    Point(Point),
    Overlap(SegmentGeom),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HullPolygon {
    /// Counter-clockwise, strictly convex, starting at the lexicographically
    /// smallest vertex. One or two vertices for degenerate inputs.
    pub vertices: Vec<Point>,
}

impl HullPolygon {
    /// Inclusive containment test.
    pub fn contains(&self, p: &Point) -> bool {
        match self.vertices.len() {
            0 => false,
            1 => &self.vertices[0] == p,
            2 => point_on_segment(p, &self.vertices[0], &self.vertices[1]),
            n => (0..n).all(|i| orient(&self.vertices[i], &self.vertices[(i + 1) % n], p) >= 0),
        }
    }

    pub fn edges(&self) -> Vec<(&Point, &Point)> {
        let n = self.vertices.len();
        match n {
            0 | 1 => Vec::new(),
            2 => vec![(&self.vertices[0], &self.vertices[1])],
            _ => (0..n).map(|i| (&self.vertices[i], &self.vertices[(i + 1) % n])).collect(),
        }
    }
}

pub fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

pub fn rational_from_f64(v: f64) -> Result<Rational> {
    if !v.is_finite() {
        return Err(Error::NonFinite);
    }
    Rational::from_f64(v).ok_or(Error::NonFinite)
}

/// Parses `-12.5`, `3`, `1e-3`, `2.5E2` or `p/q` into an exact rational.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let err = || Error::Parse(s.to_string());
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| err())?;
        let d: BigInt = d.trim().parse().map_err(|_| err())?;
        if d.is_zero() {
            return Err(err());
        }
        return Ok(Rational::new(n, d));
    }
    let (mantissa, exp) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i32>().map_err(|_| err())?),
        None => (s, 0),
    };
    let (neg, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(err());
    }
    if !int_part.bytes().chain(frac_part.bytes()).all(|b| b.is_ascii_digit()) {
        return Err(err());
    }
    let all: String = format!("{int_part}{frac_part}");
    let mut num: BigInt = if all.is_empty() { BigInt::zero() } else { all.parse().map_err(|_| err())? };
    if neg {
        num = -num;
    }
    let scale = exp - frac_part.len() as i32;
    let ten = BigInt::from(10);
    Ok(if scale >= 0 {
        Rational::from_integer(num * num::pow(ten, scale as usize))
    } else {
        Rational::new(num, num::pow(ten, (-scale) as usize))
    })
}

/// Exact decimal when the denominator divides a power of ten, `p/q` otherwise.
pub fn format_rational(r: &Rational) -> String {
    if r.is_integer() {
        return r.numer().to_string();
    }
    let mut d = r.denom().clone();
    let (two, five) = (BigInt::from(2), BigInt::from(5));
    let (mut twos, mut fives) = (0usize, 0usize);
    while (&d % &two).is_zero() {
        d /= &two;
        twos += 1;
    }
    while (&d % &five).is_zero() {
        d /= &five;
        fives += 1;
    }
    if !d.is_one() {
        return format!("{}/{}", r.numer(), r.denom());
    }
    let places = twos.max(fives);
    let scaled = r * Rational::from_integer(num::pow(BigInt::from(10), places));
    let n = scaled.to_integer();
    let neg = n.sign() == Sign::Minus;
    let digits = n.abs().to_string();
    let digits = format!("{digits:0>width$}", width = places + 1);
    let (ip, fp) = digits.split_at(digits.len() - places);
    format!("{}{}.{}", if neg { "-" } else { "" }, ip, fp)
}

fn cross(o: &Point, a: &Point, b: &Point) -> Rational {
    (&a.x - &o.x) * (&b.y - &o.y) - (&a.y - &o.y) * (&b.x - &o.x)
}

/// Sign of the signed area of the triangle `(p, q, r)`: +1 for a left turn.
pub fn orient(p: &Point, q: &Point, r: &Point) -> i8 {
    let c = cross(p, q, r);
    if c.is_positive() {
        1
    } else if c.is_negative() {
        -1
    } else {
        0
    }
}

fn between(v: &Rational, a: &Rational, b: &Rational) -> bool {
    if a <= b {
        a <= v && v <= b
    } else {
        b <= v && v <= a
    }
}

/// Whether `p` lies on the closed segment `ab`.
pub fn point_on_segment(p: &Point, a: &Point, b: &Point) -> bool {
    orient(a, b, p) == 0 && between(&p.x, &a.x, &b.x) && between(&p.y, &a.y, &b.y)
}

pub fn point_on(p: &Point, s: &SegmentGeom) -> bool {
    point_on_segment(p, &s.a, &s.b)
}

/// Intersection of the supporting lines of `ab` and `cd`, if they are not parallel.
pub fn line_intersection(a: &Point, b: &Point, c: &Point, d: &Point) -> Option<Point> {
    let rx = &b.x - &a.x;
    let ry = &b.y - &a.y;
    let sx = &d.x - &c.x;
    let sy = &d.y - &c.y;
    let denom = &rx * &sy - &ry * &sx;
    if denom.is_zero() {
        return None;
    }
    let t = ((&c.x - &a.x) * &sy - (&c.y - &a.y) * &sx) / denom;
    Some(Point::new(&a.x + &t * rx, &a.y + &t * ry))
}

/// Exact classification of the intersection of two closed segments.
pub fn seg_intersect(s1: &SegmentGeom, s2: &SegmentGeom) -> Intersection {
    let (a, b, c, d) = (&s1.a, &s1.b, &s2.a, &s2.b);
    let o1 = orient(a, b, c);
    let o2 = orient(a, b, d);
    let o3 = orient(c, d, a);
    let o4 = orient(c, d, b);
    if o1 == 0 && o2 == 0 {
        // Collinear: points on a common line are ordered lexicographically.
        let (lo1, hi1) = s1.sorted();
        let (lo2, hi2) = s2.sorted();
        let lo = lo1.max(lo2);
        let hi = hi1.min(hi2);
        return match lo.cmp(hi) {
            Ordering::Greater => Intersection::Empty,
            Ordering::Equal => Intersection::Point(lo.clone()),
            Ordering::Less => Intersection::Overlap(SegmentGeom { a: lo.clone(), b: hi.clone() }),
        };
    }
    if o1 * o2 > 0 || o3 * o4 > 0 {
        return Intersection::Empty;
    }
    // Endpoint touches are reported with the exact endpoint value.
    if o1 == 0 {
        return Intersection::Point(c.clone());
    }
    if o2 == 0 {
        return Intersection::Point(d.clone());
    }
    if o3 == 0 {
        return Intersection::Point(a.clone());
    }
    if o4 == 0 {
        return Intersection::Point(b.clone());
    }
    match line_intersection(a, b, c, d) {
        Some(p) => Intersection::Point(p),
        None => Intersection::Empty,
    }
}

pub fn dist_f(a: [f64; 2], b: [f64; 2]) -> f64 {
    (a[0] - b[0]).hypot(a[1] - b[1])
}

pub fn dist(a: &Point, b: &Point) -> f64 {
    dist_f(a.to_f64(), b.to_f64())
}

/// Convex hull by monotone chain with exact orientation. Collinear boundary
/// points are dropped; all-collinear input yields its two extreme points.
pub fn convex_hull(points: &[Point]) -> Result<HullPolygon> {
    if points.is_empty() {
        return Err(Error::EmptyInput);
    }
    let mut pts: Vec<&Point> = points.iter().collect();
    pts.sort();
    pts.dedup();
    if pts.len() <= 2 {
        return Ok(HullPolygon { vertices: pts.into_iter().cloned().collect() });
    }
    let mut lower: Vec<&Point> = Vec::new();
    for &p in &pts {
        while lower.len() >= 2 && orient(lower[lower.len() - 2], lower[lower.len() - 1], p) <= 0 {
            lower.pop();
        }
        lower.push(p);
    }
    let mut upper: Vec<&Point> = Vec::new();
    for &p in pts.iter().rev() {
        while upper.len() >= 2 && orient(upper[upper.len() - 2], upper[upper.len() - 1], p) <= 0 {
            upper.pop();
        }
        upper.push(p);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    Ok(HullPolygon { vertices: lower.into_iter().cloned().collect() })
}

/// Largest Euclidean distance between two of the points.
pub fn hull_diameter(points: &[Point]) -> Result<f64> {
    if points.len() < 2 {
        return Err(Error::TooFewPoints { needed: 2, got: points.len() });
    }
    let hull = convex_hull(points)?;
    let v: Vec<[f64; 2]> = hull.vertices.iter().map(Point::to_f64).collect();
    let mut best = 0.0f64;
    for i in 0..v.len() {
        for j in i + 1..v.len() {
            best = best.max(dist_f(v[i], v[j]));
        }
    }
    Ok(best)
}

/// Euclidean distance between two closed segments given in floating point.
pub fn segment_distance(a: [f64; 2], b: [f64; 2], c: [f64; 2], d: [f64; 2]) -> f64 {
    fn seg_point(p: [f64; 2], a: [f64; 2], b: [f64; 2]) -> f64 {
        let (dx, dy) = (b[0] - a[0], b[1] - a[1]);
        let l2 = dx * dx + dy * dy;
        if l2 == 0.0 {
            return dist_f(p, a);
        }
        let t = (((p[0] - a[0]) * dx + (p[1] - a[1]) * dy) / l2).clamp(0.0, 1.0);
        dist_f(p, [a[0] + t * dx, a[1] + t * dy])
    }
    fn orient_f(p: [f64; 2], q: [f64; 2], r: [f64; 2]) -> f64 {
        (q[0] - p[0]) * (r[1] - p[1]) - (q[1] - p[1]) * (r[0] - p[0])
    }
    let o1 = orient_f(a, b, c);
    let o2 = orient_f(a, b, d);
    let o3 = orient_f(c, d, a);
    let o4 = orient_f(c, d, b);
    if o1 * o2 < 0.0 && o3 * o4 < 0.0 {
        return 0.0;
    }
    seg_point(a, c, d)
        .min(seg_point(b, c, d))
        .min(seg_point(c, a, b))
        .min(seg_point(d, a, b))
}
