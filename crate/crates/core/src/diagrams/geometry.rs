//! Exact planar predicates over rational coordinates.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

pub type Q = BigRational;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn qr(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Point {
    pub x: Q,
    pub y: Q,
}

impl Point {
    pub fn new(x: Q, y: Q) -> Self {
        Point { x, y }
    }

    pub fn int(x: i64, y: i64) -> Self {
        Point::new(q(x), q(y))
    }

    pub fn sub(&self, o: &Point) -> Point {
        Point::new(&self.x - &o.x, &self.y - &o.y)
    }

    pub fn add(&self, o: &Point) -> Point {
        Point::new(&self.x + &o.x, &self.y + &o.y)
    }

    pub fn scale(&self, k: &Q) -> Point {
        Point::new(&self.x * k, &self.y * k)
    }

    pub fn neg(&self) -> Point {
        Point::new(-&self.x, -&self.y)
    }

    pub fn norm2(&self) -> Q {
        &self.x * &self.x + &self.y * &self.y
    }

    pub fn is_zero(&self) -> bool {
        self.x.is_zero() && self.y.is_zero()
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

pub fn cross(a: &Point, b: &Point) -> Q {
    &a.x * &b.y - &a.y * &b.x
}

pub fn dot(a: &Point, b: &Point) -> Q {
    &a.x * &b.x + &a.y * &b.y
}

/// Sign of the turn `p -> q -> r`: positive for counterclockwise.
pub fn orient(p: &Point, q: &Point, r: &Point) -> Ordering {
    cross(&q.sub(p), &r.sub(p)).cmp(&Q::zero())
}

/// Whether `x` lies on the closed segment `[a, b]`.
pub fn on_segment(a: &Point, b: &Point, x: &Point) -> bool {
    orient(a, b, x) == Ordering::Equal && dot(&x.sub(a), &x.sub(b)) <= Q::zero()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SegmentContact {
    None,
    /// Transverse crossing interior to both segments, with the parameters along each.
    Proper { point: Point, s: Q, t: Q },
    /// Any other contact: an endpoint on the other segment, or collinear overlap.
    Touch { point: Point, collinear: bool },
}

pub fn segment_contact(a0: &Point, a1: &Point, b0: &Point, b1: &Point) -> SegmentContact {
    let o1 = orient(a0, a1, b0);
    let o2 = orient(a0, a1, b1);
    let o3 = orient(b0, b1, a0);
    let o4 = orient(b0, b1, a1);
    use Ordering::*;
    if o1 != Equal && o2 != Equal && o3 != Equal && o4 != Equal {
        if o1 != o2 && o3 != o4 {
            let da = a1.sub(a0);
            let db = b1.sub(b0);
            let denom = cross(&da, &db);
            let s = cross(&b0.sub(a0), &db) / &denom;
            let t = cross(&b0.sub(a0), &da) / &denom;
            let point = a0.add(&da.scale(&s));
            return SegmentContact::Proper { point, s, t };
        }
        return SegmentContact::None;
    }
    let collinear = o1 == Equal && o2 == Equal;
    for (p, on) in [
        (b0, on_segment(a0, a1, b0)),
        (b1, on_segment(a0, a1, b1)),
        (a0, on_segment(b0, b1, a0)),
        (a1, on_segment(b0, b1, a1)),
    ] {
        if on {
            return SegmentContact::Touch { point: p.clone(), collinear };
        }
    }
    SegmentContact::None
}

/// 0 for directions in `[0, pi)`, 1 for `[pi, 2 pi)`.
fn half(d: &Point) -> u8 {
    if d.y.is_positive() || (d.y.is_zero() && d.x.is_positive()) {
        0
    } else {
        1
    }
}

/// Orders nonzero directions by angle in `[0, 2 pi)`.
pub fn angle_cmp(a: &Point, b: &Point) -> Ordering {
    half(a).cmp(&half(b)).then_with(|| Q::zero().cmp(&cross(a, b)))
}

/// `d` expressed in a frame rotated so that `base` points along the positive x axis.
pub fn relative(base: &Point, d: &Point) -> Point {
    Point::new(dot(base, d), cross(base, d))
}

/// True when `x` lies strictly inside the counterclockwise sweep from `from` to `to`.
pub fn ccw_strictly_between(from: &Point, x: &Point, to: &Point) -> bool {
    let rx = relative(from, x);
    let rt = relative(from, to);
    let x_at_zero = rx.y.is_zero() && rx.x.is_positive();
    !x_at_zero && angle_cmp(&rx, &rt) == Ordering::Less
}

/// Same direction (positive multiples).
pub fn same_direction(a: &Point, b: &Point) -> bool {
    cross(a, b).is_zero() && dot(a, b).is_positive()
}

/// Signed crossing of the segment `[p0, p1]` with the ray from `origin` along `dir`.
///
/// The caller guarantees neither endpoint lies on the open ray. A crossing
/// from the right of the ray to its left counts `+1`.
pub fn ray_crossing(origin: &Point, dir: &Point, p0: &Point, p1: &Point) -> i64 {
    let s0 = cross(dir, &p0.sub(origin));
    let s1 = cross(dir, &p1.sub(origin));
    if !((s0.is_negative() && s1.is_positive()) || (s0.is_positive() && s1.is_negative())) {
        return 0;
    }
    let u = &s0 / (&s0 - &s1);
    let hit = p0.add(&p1.sub(p0).scale(&u));
    if !dot(dir, &hit.sub(origin)).is_positive() {
        return 0;
    }
    if s0.is_negative() {
        1
    } else {
        -1
    }
}

/// Squared distance from `x` to the segment `[a, b]`.
pub fn dist2_point_segment(a: &Point, b: &Point, x: &Point) -> Q {
    let ab = b.sub(a);
    let len2 = ab.norm2();
    if len2.is_zero() {
        return x.sub(a).norm2();
    }
    let t = dot(&x.sub(a), &ab) / &len2;
    if !t.is_positive() {
        x.sub(a).norm2()
    } else if t >= q(1) {
        x.sub(b).norm2()
    } else {
        x.sub(&a.add(&ab.scale(&t))).norm2()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(x: i64, y: i64) -> Point {
        Point::int(x, y)
    }

    #[test]
    fn proper_crossing() {
        match segment_contact(&p(0, 0), &p(2, 2), &p(0, 2), &p(2, 0)) {
            SegmentContact::Proper { point, s, t } => {
                assert_eq!(point, p(1, 1));
                assert_eq!(s, qr(1, 2));
                assert_eq!(t, qr(1, 2));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn touching_and_disjoint() {
        assert!(matches!(segment_contact(&p(0, 0), &p(2, 0), &p(1, 0), &p(1, 3)), SegmentContact::Touch { collinear: false, .. }));
        assert!(matches!(segment_contact(&p(0, 0), &p(2, 0), &p(1, 0), &p(3, 0)), SegmentContact::Touch { collinear: true, .. }));
        assert_eq!(segment_contact(&p(0, 0), &p(1, 0), &p(0, 1), &p(1, 1)), SegmentContact::None);
        assert_eq!(segment_contact(&p(0, 0), &p(1, 0), &p(2, 0), &p(3, 0)), SegmentContact::None);
    }

    #[test]
    fn angles() {
        let dirs = [p(1, 0), p(1, 1), p(0, 1), p(-1, 0), p(-1, -1), p(0, -1), p(1, -1)];
        for w in dirs.windows(2) {
            assert_eq!(angle_cmp(&w[0], &w[1]), Ordering::Less);
        }
        assert!(ccw_strictly_between(&p(1, 0), &p(0, 1), &p(-1, 0)));
        assert!(!ccw_strictly_between(&p(-1, 0), &p(0, 1), &p(1, 0)));
        assert!(ccw_strictly_between(&p(-1, 0), &p(0, -1), &p(1, 0)));
        assert!(ccw_strictly_between(&p(0, 1), &p(1, 0), &p(1, 1)));
        assert!(!ccw_strictly_between(&p(0, 1), &p(0, 1), &p(1, 1)));
    }

    #[test]
    fn ray_crossing_signs() {
        let o = p(0, 0);
        let up = p(0, 1);
        // counterclockwise square around the origin crosses the up-ray right to left
        assert_eq!(ray_crossing(&o, &up, &p(1, 1), &p(-1, 1)), 1);
        assert_eq!(ray_crossing(&o, &up, &p(-1, 1), &p(1, 1)), -1);
        assert_eq!(ray_crossing(&o, &up, &p(-1, -1), &p(1, -1)), 0);
        assert_eq!(ray_crossing(&o, &up, &p(0, 0), &p(1, 1)), 0);
    }
}
