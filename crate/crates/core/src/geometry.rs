//! Exact planar predicates: orientation, convex hulls, angular order around a
//! hull vertex, and projective maps of the plane.

use std::cmp::Ordering;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::linalg;
use crate::rational::{int, sign, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Point2 {
    pub x: Rational,
    pub y: Rational,
}

impl Point2 {
    pub fn new(x: Rational, y: Rational) -> Self {
        Point2 { x, y }
    }

    pub fn from_ints(x: i64, y: i64) -> Self {
        Point2 { x: int(x), y: int(y) }
    }

    fn sub(&self, o: &Point2) -> (Rational, Rational) {
        (&self.x - &o.x, &self.y - &o.y)
    }
}

/// Twice the signed area of the triangle `pqr`.
pub fn cross(p: &Point2, q: &Point2, r: &Point2) -> Rational {
    let (ax, ay) = q.sub(p);
    let (bx, by) = r.sub(p);
    ax * by - ay * bx
}

/// Sign of the determinant `|q - p, r - p|`; `+1` means `p, q, r` turn counterclockwise.
pub fn orientation(p: &Point2, q: &Point2, r: &Point2) -> i8 {
    sign(&cross(p, q, r))
}

/// A planar point set labelled `0..n` by position. Coordinates are distinct.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PointConfiguration {
    points: Vec<Point2>,
}

impl PointConfiguration {
    pub fn new(points: Vec<Point2>) -> Result<Self> {
        let mut seen = std::collections::HashMap::new();
        for (i, p) in points.iter().enumerate() {
            if let Some(&j) = seen.get(p) {
                return Err(Error::DuplicatePoint(i, j));
            }
            seen.insert(p.clone(), i);
        }
        Ok(PointConfiguration { points })
    }

    pub fn from_ints(coords: &[(i64, i64)]) -> Result<Self> {
        Self::new(coords.iter().map(|&(x, y)| Point2::from_ints(x, y)).collect())
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[Point2] {
        &self.points
    }

    pub fn point(&self, label: usize) -> &Point2 {
        &self.points[label]
    }

    pub fn orient(&self, a: usize, b: usize, c: usize) -> i8 {
        orientation(&self.points[a], &self.points[b], &self.points[c])
    }

    /// The sub-configuration on `labels`, relabelled `0..labels.len()` in the given order.
    pub fn restrict(&self, labels: &[usize]) -> PointConfiguration {
        PointConfiguration { points: labels.iter().map(|&l| self.points[l].clone()).collect() }
    }
}

pub fn in_general_position(config: &PointConfiguration) -> bool {
    let n = config.len();
    for a in 0..n {
        for b in a + 1..n {
            for c in b + 1..n {
                if config.orient(a, b, c) == 0 {
                    return false;
                }
            }
        }
    }
    true
}

/// Extreme points of the hull in counterclockwise order, plus the points that
/// lie on the hull boundary without being extreme.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Hull {
    pub cycle: Vec<usize>,
    pub boundary_collinear: Vec<usize>,
}

impl Hull {
    pub fn contains_vertex(&self, label: usize) -> bool {
        self.cycle.contains(&label)
    }

    /// Counterclockwise successor of a hull vertex.
    pub fn next(&self, label: usize) -> usize {
        let i = self.cycle.iter().position(|&l| l == label).expect("hull vertex");
        self.cycle[(i + 1) % self.cycle.len()]
    }

    pub fn prev(&self, label: usize) -> usize {
        let i = self.cycle.iter().position(|&l| l == label).expect("hull vertex");
        self.cycle[(i + self.cycle.len() - 1) % self.cycle.len()]
    }
}

pub fn convex_hull(config: &PointConfiguration) -> Result<Hull> {
    let labels: Vec<usize> = (0..config.len()).collect();
    let cycle = hull_cycle(&labels, |a, b| config.point(a).cmp(config.point(b)), |a, b, c| {
        config.orient(a, b, c)
    });
    if cycle.len() < 3 {
        return Err(Error::DegenerateHull);
    }
    let k = cycle.len();
    let boundary_collinear = labels
        .iter()
        .copied()
        .filter(|l| !cycle.contains(l))
        .filter(|&l| (0..k).any(|i| config.orient(cycle[i], cycle[(i + 1) % k], l) == 0))
        .collect();
    Ok(Hull { cycle, boundary_collinear })
}

/// Monotone-chain hull over an arbitrary label set, parameterized by a total
/// order (lexicographic by coordinates) and an orientation oracle. Collinear
/// boundary points are dropped. Fewer than three labels are returned when the
/// set is collinear.
pub(crate) fn hull_cycle(
    labels: &[usize],
    lex: impl Fn(usize, usize) -> Ordering,
    orient: impl Fn(usize, usize, usize) -> i8,
) -> Vec<usize> {
    let mut pts = labels.to_vec();
    pts.sort_by(|&a, &b| lex(a, b));
    pts.dedup();
    if pts.len() < 3 {
        return pts;
    }
    let mut lower: Vec<usize> = Vec::new();
    for &p in &pts {
        while lower.len() >= 2 && orient(lower[lower.len() - 2], lower[lower.len() - 1], p) <= 0 {
            lower.pop();
        }
        lower.push(p);
    }
    let mut upper: Vec<usize> = Vec::new();
    for &p in pts.iter().rev() {
        while upper.len() >= 2 && orient(upper[upper.len() - 2], upper[upper.len() - 1], p) <= 0 {
            upper.pop();
        }
        upper.push(p);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    if lower.len() < 3 {
        // all collinear: report the two extremes only
        lower.truncate(2);
    }
    lower
}

/// Points other than the apex sorted counterclockwise as seen from it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AngularOrder {
    pub apex: usize,
    /// First point of the order; the hull successor of the apex.
    pub b: usize,
    /// Last point of the order; the hull predecessor of the apex.
    pub c: usize,
    pub order: Vec<usize>,
}

impl AngularOrder {
    /// Position of `label` in the order, `None` for the apex.
    pub fn index_of(&self, label: usize) -> Option<usize> {
        self.order.iter().position(|&l| l == label)
    }
}

pub fn angular_order(config: &PointConfiguration, apex: usize) -> Result<AngularOrder> {
    if apex >= config.len() {
        return Err(Error::LabelOutOfRange(apex));
    }
    let hull = convex_hull(config)?;
    if !hull.contains_vertex(apex) {
        return Err(Error::NotHullVertex(apex));
    }
    let mut order: Vec<usize> = (0..config.len()).filter(|&l| l != apex).collect();
    // every other point lies in a cone of angle < pi at a hull vertex, so the
    // orientation sign is a strict order unless two points share a ray
    for i in 0..order.len() {
        for j in i + 1..order.len() {
            if config.orient(apex, order[i], order[j]) == 0 {
                return Err(Error::TiedAngles(order[i], order[j]));
            }
        }
    }
    order.sort_by(|&p, &q| {
        if p == q {
            Ordering::Equal
        } else if config.orient(apex, p, q) > 0 {
            Ordering::Less
        } else {
            Ordering::Greater
        }
    });
    let b = order[0];
    let c = *order.last().unwrap();
    debug_assert_eq!(b, hull.next(apex));
    debug_assert_eq!(c, hull.prev(apex));
    Ok(AngularOrder { apex, b, c, order })
}

/// A projective transformation of the plane acting on homogeneous coordinates
/// `(x, y, 1)` by left multiplication.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProjectiveMap {
    matrix: [[Rational; 3]; 3],
}

impl ProjectiveMap {
    pub fn new(matrix: [[Rational; 3]; 3]) -> Result<Self> {
        let m = ProjectiveMap { matrix };
        if m.determinant().is_zero() {
            return Err(Error::SingularMap);
        }
        Ok(m)
    }

    pub fn identity() -> Self {
        let z = Rational::zero;
        let o = Rational::one;
        ProjectiveMap { matrix: [[o(), z(), z()], [z(), o(), z()], [z(), z(), o()]] }
    }

    pub fn matrix(&self) -> &[[Rational; 3]; 3] {
        &self.matrix
    }

    pub fn determinant(&self) -> Rational {
        let rows: Vec<Vec<Rational>> = self.matrix.iter().map(|r| r.to_vec()).collect();
        linalg::determinant(&rows)
    }

    /// Homogenizing coordinate of the image of `p`.
    pub fn weight(&self, p: &Point2) -> Rational {
        let r = &self.matrix[2];
        &r[0] * &p.x + &r[1] * &p.y + &r[2]
    }

    pub fn apply(&self, p: &Point2) -> Option<Point2> {
        let w = self.weight(p);
        if w.is_zero() {
            return None;
        }
        let row = |r: &[Rational; 3]| (&r[0] * &p.x + &r[1] * &p.y + &r[2]) / &w;
        Some(Point2 { x: row(&self.matrix[0]), y: row(&self.matrix[1]) })
    }

    /// A map with positive determinant that sends the line `a x + b y + c = 0`
    /// to infinity, with positive weight exactly on the side where `a x + b y + c > 0`.
    pub fn sending_line_to_infinity(a: Rational, b: Rational, c: Rational) -> Result<Self> {
        let z = Rational::zero;
        let o = Rational::one;
        let last = [a, b, c];
        let candidates = [
            [[o(), z(), z()], [z(), o(), z()]],
            [[o(), z(), z()], [z(), z(), o()]],
            [[z(), o(), z()], [z(), z(), o()]],
        ];
        for [r0, r1] in candidates {
            let mut m = ProjectiveMap { matrix: [r0, r1, last.clone()] };
            let det = m.determinant();
            if det.is_zero() {
                continue;
            }
            if det.is_negative() {
                for x in m.matrix[0].iter_mut() {
                    *x = -x.clone();
                }
            }
            return Ok(m);
        }
        Err(Error::SingularMap)
    }
}

pub fn apply_projective(map: &ProjectiveMap, config: &PointConfiguration) -> Result<PointConfiguration> {
    let mut pts = Vec::with_capacity(config.len());
    for (i, p) in config.points().iter().enumerate() {
        pts.push(map.apply(p).ok_or(Error::PointAtInfinity(i))?);
    }
    PointConfiguration::new(pts)
}

/// Intersection point of lines `p1 p2` and `q1 q2`, `None` when parallel.
pub fn line_intersection(p1: &Point2, p2: &Point2, q1: &Point2, q2: &Point2) -> Option<Point2> {
    let (dx, dy) = p2.sub(p1);
    let (ex, ey) = q2.sub(q1);
    let den = &dx * &ey - &dy * &ex;
    if den.is_zero() {
        return None;
    }
    let (wx, wy) = q1.sub(p1);
    let t = (&wx * &ey - &wy * &ex) / &den;
    Some(Point2 { x: &p1.x + &t * &dx, y: &p1.y + &t * &dy })
}

/// Twice the signed area of a polygon given by its vertices in order.
pub fn polygon_area2(pts: &[&Point2]) -> Rational {
    let k = pts.len();
    let mut s = Rational::zero();
    for i in 0..k {
        let p = pts[i];
        let q = pts[(i + 1) % k];
        s += &p.x * &q.y - &p.y * &q.x;
    }
    s
}

/// Precomputed orientation signs and lexicographic ranks for a configuration,
/// so combinatorial predicates run without rational arithmetic.
#[derive(Debug, Clone)]
pub(crate) struct OrientTable {
    n: usize,
    signs: Vec<i8>,
    rank: Vec<usize>,
}

impl OrientTable {
    pub fn new(config: &PointConfiguration) -> Self {
        let n = config.len();
        let mut signs = vec![0i8; n * n * n];
        for a in 0..n {
            for b in a + 1..n {
                for c in b + 1..n {
                    let s = config.orient(a, b, c);
                    for (x, y, z, t) in [
                        (a, b, c, s),
                        (b, c, a, s),
                        (c, a, b, s),
                        (b, a, c, -s),
                        (a, c, b, -s),
                        (c, b, a, -s),
                    ] {
                        signs[(x * n + y) * n + z] = t;
                    }
                }
            }
        }
        let mut by_lex: Vec<usize> = (0..n).collect();
        by_lex.sort_by(|&a, &b| config.point(a).cmp(config.point(b)));
        let mut rank = vec![0; n];
        for (r, &l) in by_lex.iter().enumerate() {
            rank[l] = r;
        }
        OrientTable { n, signs, rank }
    }

    #[inline]
    pub fn orient(&self, a: usize, b: usize, c: usize) -> i8 {
        self.signs[(a * self.n + b) * self.n + c]
    }

    #[inline]
    pub fn rank(&self, a: usize) -> usize {
        self.rank[a]
    }

    /// Counterclockwise extreme points of the given labels.
    pub fn hull(&self, labels: &[usize]) -> Vec<usize> {
        hull_cycle(labels, |a, b| self.rank[a].cmp(&self.rank[b]), |a, b, c| self.orient(a, b, c))
    }

    /// Whether `p` lies in the closed convex polygon with counterclockwise `cycle`.
    pub fn in_polygon(&self, cycle: &[usize], p: usize) -> bool {
        let k = cycle.len();
        (0..k).all(|i| self.orient(cycle[i], cycle[(i + 1) % k], p) >= 0)
    }

    /// Whether `p` lies on the closed segment `ab` (assumes `a != b`).
    pub fn on_segment(&self, a: usize, b: usize, p: usize) -> bool {
        if self.orient(a, b, p) != 0 {
            return false;
        }
        let (lo, hi) = if self.rank[a] < self.rank[b] { (a, b) } else { (b, a) };
        self.rank[lo] <= self.rank[p] && self.rank[p] <= self.rank[hi]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn hex6() -> PointConfiguration {
        PointConfiguration::from_ints(&[(4, 0), (2, 3), (-2, 3), (-4, 0), (-2, -3), (2, -3)]).unwrap()
    }

    fn moae6() -> PointConfiguration {
        PointConfiguration::from_ints(&[(0, 0), (6, 0), (0, 6), (1, 1), (4, 1), (1, 4)]).unwrap()
    }

    fn fan6() -> PointConfiguration {
        PointConfiguration::from_ints(&[(0, 0), (1, 0), (2, 0), (3, 0), (4, 0), (2, 3)]).unwrap()
    }

    #[test]
    fn orientation_examples() {
        let p = |x, y| Point2::from_ints(x, y);
        assert_eq!(orientation(&p(0, 0), &p(1, 0), &p(0, 1)), 1);
        assert_eq!(orientation(&p(0, 0), &p(1, 1), &p(2, 2)), 0);
        assert_eq!(orientation(&p(0, 0), &p(0, 1), &p(1, 0)), -1);
    }

    #[test]
    fn general_position_examples() {
        assert!(in_general_position(&hex6()));
        assert!(!in_general_position(&fan6()));
        assert!(in_general_position(&PointConfiguration::from_ints(&[(0, 0), (1, 1)]).unwrap()));
    }

    #[test]
    fn duplicate_points_rejected() {
        let err = PointConfiguration::from_ints(&[(0, 0), (1, 0), (0, 0)]).unwrap_err();
        assert_eq!(err, Error::DuplicatePoint(2, 0));
    }

    #[test]
    fn hull_examples() {
        let h = convex_hull(&hex6()).unwrap();
        assert_eq!(h.cycle, vec![3, 4, 5, 0, 1, 2]);
        let h = convex_hull(&moae6()).unwrap();
        let mut c = h.cycle.clone();
        c.sort();
        assert_eq!(c, vec![0, 1, 2]);
        let h = convex_hull(&fan6()).unwrap();
        assert_eq!(h.cycle, vec![0, 4, 5]);
        assert_eq!(h.boundary_collinear, vec![1, 2, 3]);
        let line = PointConfiguration::from_ints(&[(0, 0), (1, 1), (2, 2)]).unwrap();
        assert_eq!(convex_hull(&line), Err(Error::DegenerateHull));
    }

    #[test]
    fn angular_order_examples() {
        let ao = angular_order(&hex6(), 1).unwrap();
        assert_eq!((ao.b, ao.c), (2, 0));
        assert_eq!(ao.order, vec![2, 3, 4, 5, 0]);
        let ao = angular_order(&moae6(), 2).unwrap();
        assert_eq!((ao.b, ao.c), (0, 1));
        assert_eq!(ao.order.len(), 5);
        assert_eq!(angular_order(&moae6(), 3), Err(Error::NotHullVertex(3)));
    }

    #[test]
    fn projective_identity_and_scaling() {
        let id = ProjectiveMap::identity();
        assert_eq!(apply_projective(&id, &hex6()).unwrap(), hex6());
        let z = Rational::zero;
        let scale = ProjectiveMap::new([[int(2), z(), z()], [z(), int(2), z()], [z(), z(), int(1)]]).unwrap();
        let img = apply_projective(&scale, &hex6()).unwrap();
        assert_eq!(img.point(1), &Point2::from_ints(4, 6));
        let c = hex6();
        for (a, b, d) in [(0, 1, 2), (0, 2, 1), (3, 4, 5)] {
            assert_eq!(c.orient(a, b, d), img.orient(a, b, d));
        }
    }

    #[test]
    fn projective_point_at_infinity() {
        let m = ProjectiveMap::sending_line_to_infinity(int(1), int(0), int(-4)).unwrap();
        assert!(m.determinant().is_positive());
        assert_eq!(apply_projective(&m, &hex6()), Err(Error::PointAtInfinity(0)));
    }

    #[test]
    fn orient_table_agrees() {
        let c = moae6();
        let t = OrientTable::new(&c);
        for a in 0..6 {
            for b in 0..6 {
                for d in 0..6 {
                    if a != b && b != d && a != d {
                        assert_eq!(t.orient(a, b, d), c.orient(a, b, d));
                    }
                }
            }
        }
        let mut h = t.hull(&[0, 1, 2, 3, 4, 5]);
        h.sort();
        assert_eq!(h, vec![0, 1, 2]);
        assert!(t.in_polygon(&[0, 1, 2], 3));
        assert!(!t.in_polygon(&[3, 4, 5], 0));
    }
}
