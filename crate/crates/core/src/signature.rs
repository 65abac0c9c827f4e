//! Link signatures of subdivisions seen from a hull vertex, monotone
//! polylines, stars, negative intervals and extended stars, and the
//! constructions that extend an extended star to a regular subdivision.

use std::collections::HashMap;
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, Zero};

use crate::census::assoc_faces;
use crate::error::{Error, Result};
use crate::geometry::{
    angular_order, apply_projective, convex_hull, cross, in_general_position, line_intersection, AngularOrder,
    OrientTable, Point2, PointConfiguration, ProjectiveMap,
};
use crate::linalg;
use crate::rational::{int, Rational};
use crate::subdivision::{
    face_dimension, is_regular, lift_subdivision, lower_face_heights, validate_subdivision, Cell, HeightVector,
    Subdivision,
};

/// Signs of the interior points `P_1..P_{n-3}` in angular order from the apex.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Signature {
    pub apex: usize,
    pub entries: Vec<i8>,
}

impl Signature {
    pub fn new(apex: usize, entries: Vec<i8>) -> Result<Self> {
        if let Some(e) = entries.iter().find(|e| !(-1..=1).contains(*e)) {
            return Err(Error::InvalidSignature(format!("entry {e} is not -1, 0 or +1")));
        }
        Ok(Signature { apex, entries })
    }

    pub fn parse(apex: usize, s: &str) -> Result<Self> {
        let entries = s
            .trim()
            .chars()
            .map(|c| match c {
                '+' => Ok(1),
                '-' => Ok(-1),
                '0' => Ok(0),
                other => Err(Error::InvalidSignature(format!("unexpected character {other:?}"))),
            })
            .collect::<Result<Vec<i8>>>()?;
        Ok(Signature { apex, entries })
    }

    /// Entry of angular index `i` in `1..=n-3`.
    pub fn at(&self, i: usize) -> i8 {
        self.entries[i - 1]
    }

    pub fn zeros(&self) -> usize {
        self.entries.iter().filter(|&&e| e == 0).count()
    }

    pub fn negatives(&self) -> usize {
        self.entries.iter().filter(|&&e| e < 0).count()
    }

    /// Every signature over `{-1, 0, +1}` of the given length, in lexicographic order of strings `+ - 0`.
    pub fn all(apex: usize, len: usize) -> Vec<Signature> {
        let mut out = vec![Vec::new()];
        for _ in 0..len {
            out = out
                .into_iter()
                .flat_map(|v: Vec<i8>| {
                    [1i8, -1, 0].into_iter().map(move |e| {
                        let mut w = v.clone();
                        w.push(e);
                        w
                    })
                })
                .collect();
        }
        out.into_iter().map(|entries| Signature { apex, entries }).collect()
    }
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &e in &self.entries {
            f.write_str(match e {
                1 => "+",
                -1 => "-",
                _ => "0",
            })?;
        }
        Ok(())
    }
}

/// A monotone polyline given by angular indices, from `0` (B) to `n-2` (C).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Polyline {
    pub indices: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NegativeInterval {
    pub start: usize,
    pub end: usize,
    /// Angular indices strictly between `start` and `end` with negative sign.
    pub negatives: Vec<usize>,
}

impl NegativeInterval {
    pub fn length(&self) -> usize {
        self.negatives.len()
    }

    pub fn indices(&self) -> Vec<usize> {
        let mut v = vec![self.start];
        v.extend(&self.negatives);
        v.push(self.end);
        v
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StarCell {
    Above(usize),
    Below(usize),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtendedStar {
    pub cells_above: Vec<Cell>,
    pub cells_below: Vec<Cell>,
    /// The intervals behind `cells_below`, in the same order.
    pub intervals: Vec<NegativeInterval>,
    pub polyline: Polyline,
    pub shelling_order: Vec<StarCell>,
}

impl ExtendedStar {
    pub fn cells(&self) -> impl Iterator<Item = &Cell> {
        self.cells_above.iter().chain(&self.cells_below)
    }
}

/// Angular data around an apex in a general-position configuration.
pub(crate) struct Frame<'a> {
    pub config: &'a PointConfiguration,
    pub ao: AngularOrder,
    pub t: OrientTable,
}

impl<'a> Frame<'a> {
    pub fn new(config: &'a PointConfiguration, apex: usize) -> Result<Self> {
        if config.len() < 3 {
            return Err(Error::TooFewPoints { needed: 3, got: config.len() });
        }
        if !in_general_position(config) {
            return Err(Error::GeneralPositionRequired);
        }
        let ao = angular_order(config, apex)?;
        Ok(Frame { config, ao, t: OrientTable::new(config) })
    }

    pub fn apex(&self) -> usize {
        self.ao.apex
    }

    /// Number of signature entries, `n - 3`.
    pub fn m(&self) -> usize {
        self.config.len() - 3
    }

    /// Angular index of C.
    pub fn last(&self) -> usize {
        self.config.len() - 2
    }

    pub fn label(&self, i: usize) -> usize {
        self.ao.order[i]
    }

    pub fn index(&self, label: usize) -> Option<usize> {
        self.ao.index_of(label)
    }

    /// Whether `P_i` and the apex lie on opposite sides of the line `P_l P_r`.
    pub fn beyond(&self, l: usize, r: usize, i: usize) -> bool {
        let (pl, pr) = (self.label(l), self.label(r));
        self.t.orient(pl, pr, self.label(i)) != self.t.orient(pl, pr, self.apex())
    }

    pub fn check(&self, sigma: &Signature) -> Result<()> {
        if sigma.apex != self.apex() {
            return Err(Error::InvalidSignature(format!(
                "signature is for apex {}, not {}",
                sigma.apex,
                self.apex()
            )));
        }
        if sigma.entries.len() != self.m() {
            return Err(Error::InvalidSignature(format!(
                "expected {} entries, got {}",
                self.m(),
                sigma.entries.len()
            )));
        }
        Ok(())
    }

    /// Signature of a polyline with entries in `{-1, +1}`.
    pub fn forward(&self, line: &[usize]) -> Vec<i8> {
        (1..=self.m())
            .map(|i| match line.binary_search(&i) {
                Ok(k) => {
                    if self.beyond(line[k - 1], line[k + 1], i) {
                        1
                    } else {
                        -1
                    }
                }
                Err(k) => {
                    if self.beyond(line[k - 1], line[k], i) {
                        -1
                    } else {
                        1
                    }
                }
            })
            .collect()
    }

    pub fn all_polylines(&self) -> Vec<Polyline> {
        let m = self.m();
        (0..1usize << m)
            .map(|mask| {
                let mut v = vec![0];
                v.extend((1..=m).filter(|i| mask >> (i - 1) & 1 == 1));
                v.push(self.last());
                Polyline { indices: v }
            })
            .collect()
    }

    pub fn polyline_for(&self, sigma: &Signature) -> Result<Polyline> {
        let target: Vec<i8> = sigma.entries.iter().map(|&e| if e == 0 { 1 } else { e }).collect();
        self.all_polylines()
            .into_iter()
            .find(|l| self.forward(&l.indices) == target)
            .ok_or_else(|| Error::Internal(format!("no monotone polyline has signature {sigma}")))
    }

    fn labels(&self, indices: impl IntoIterator<Item = usize>) -> Vec<usize> {
        indices.into_iter().map(|i| self.label(i)).collect()
    }

    /// Star cells with their spans `[p, q]` as positions along the polyline.
    pub fn star(&self, sigma: &Signature, line: &Polyline) -> Vec<(Cell, usize, usize)> {
        let l = &line.indices;
        let split: Vec<usize> =
            (0..l.len()).filter(|&k| k == 0 || k == l.len() - 1 || sigma.at(l[k]) != 0).collect();
        split
            .windows(2)
            .map(|w| {
                let (p, q) = (w[0], w[1]);
                let mut members = vec![self.apex()];
                members.extend(self.labels(l[p..=q].iter().copied()));
                members.extend(self.labels(
                    (l[p] + 1..l[q]).filter(|i| l.binary_search(i).is_err() && sigma.at(*i) == 0),
                ));
                (Cell::new(members), p, q)
            })
            .collect()
    }

    /// All negative intervals including those of length zero, with spans along the polyline.
    pub fn intervals(&self, sigma: &Signature, line: &Polyline) -> Vec<(NegativeInterval, usize, usize)> {
        let l = &line.indices;
        let nonneg: Vec<usize> =
            (0..l.len()).filter(|&k| k == 0 || k == l.len() - 1 || sigma.at(l[k]) >= 0).collect();
        nonneg
            .windows(2)
            .map(|w| {
                let (i, j) = (l[w[0]], l[w[1]]);
                let negatives = (i + 1..j).filter(|&k| sigma.at(k) < 0).collect();
                (NegativeInterval { start: i, end: j, negatives }, w[0], w[1])
            })
            .collect()
    }

    pub fn extended_star(&self, sigma: &Signature) -> Result<ExtendedStar> {
        self.check(sigma)?;
        let line = self.polyline_for(sigma)?;
        let above = self.star(sigma, &line);
        let below: Vec<_> = self.intervals(sigma, &line).into_iter().filter(|(iv, _, _)| iv.length() > 0).collect();
        let mut keys: Vec<((usize, usize, u8), StarCell)> = Vec::new();
        for (k, (_, p, q)) in above.iter().enumerate() {
            keys.push(((*p, *q, 1), StarCell::Above(k)));
        }
        for (k, (_, p, q)) in below.iter().enumerate() {
            keys.push(((*p, *q, 0), StarCell::Below(k)));
        }
        keys.sort_by_key(|(k, _)| *k);
        Ok(ExtendedStar {
            cells_above: above.into_iter().map(|(c, _, _)| c).collect(),
            cells_below: below.iter().map(|(iv, _, _)| Cell::new(self.labels(iv.indices()))).collect(),
            intervals: below.into_iter().map(|(iv, _, _)| iv).collect(),
            polyline: line,
            shelling_order: keys.into_iter().map(|(_, c)| c).collect(),
        })
    }
}

pub fn polyline_signature(config: &PointConfiguration, apex: usize, line: &Polyline) -> Result<Signature> {
    let f = Frame::new(config, apex)?;
    let l = &line.indices;
    let ok = l.first() == Some(&0) && l.last() == Some(&f.last()) && l.windows(2).all(|w| w[0] < w[1]);
    if !ok {
        return Err(Error::InvalidSignature("polyline must increase from 0 to n-2".into()));
    }
    Ok(Signature { apex, entries: f.forward(l) })
}

pub fn polyline_of_signature(config: &PointConfiguration, apex: usize, sigma: &Signature) -> Result<Polyline> {
    let f = Frame::new(config, apex)?;
    f.check(sigma)?;
    if sigma.entries.contains(&0) {
        return Err(Error::InvalidSignature("polyline signatures have no zero entries".into()));
    }
    f.polyline_for(sigma)
}

pub fn link_signature(config: &PointConfiguration, apex: usize, sub: &Subdivision) -> Result<Signature> {
    let f = Frame::new(config, apex)?;
    let mut chains: Vec<Vec<usize>> = Vec::new();
    for c in sub.cells.iter().filter(|c| c.contains(apex)) {
        let cyc = f.t.hull(&c.members);
        let k = cyc.iter().position(|&v| v == apex).ok_or(Error::ApexNotInAnyCell(apex))?;
        let chain: Vec<usize> = (1..cyc.len())
            .map(|s| f.index(cyc[(k + s) % cyc.len()]).unwrap())
            .collect();
        chains.push(chain);
    }
    if chains.is_empty() {
        return Err(Error::ApexNotInAnyCell(apex));
    }
    chains.sort();
    let mut line: Vec<usize> = Vec::new();
    let mut edge = vec![false; f.last() + 1];
    for ch in &chains {
        edge[ch[0]] = true;
        edge[*ch.last().unwrap()] = true;
        for &v in ch {
            if line.last() != Some(&v) {
                line.push(v);
            }
        }
    }
    let monotone = line.first() == Some(&0)
        && line.last() == Some(&f.last())
        && line.windows(2).all(|w| w[0] < w[1]);
    if !monotone {
        return Err(Error::InvalidSubdivision("the link of the apex is not a monotone polyline".into()));
    }
    let geometric = f.forward(&line);
    let entries = (1..=f.m())
        .map(|i| {
            let s = geometric[i - 1];
            if s < 0 {
                -1
            } else if edge[i] || !sub.uses(f.label(i)) {
                1
            } else {
                0
            }
        })
        .collect();
    Ok(Signature { apex, entries })
}

/// The cells containing the apex in any subdivision with link signature `sigma`.
pub fn star_of_signature(config: &PointConfiguration, apex: usize, sigma: &Signature) -> Result<Vec<Cell>> {
    let f = Frame::new(config, apex)?;
    f.check(sigma)?;
    let line = f.polyline_for(sigma)?;
    Ok(f.star(sigma, &line).into_iter().map(|(c, _, _)| c).collect())
}

/// Negative intervals of positive length, in order along the polyline.
pub fn negative_intervals(config: &PointConfiguration, apex: usize, sigma: &Signature) -> Result<Vec<NegativeInterval>> {
    let f = Frame::new(config, apex)?;
    f.check(sigma)?;
    let line = f.polyline_for(sigma)?;
    Ok(f.intervals(sigma, &line).into_iter().map(|(iv, _, _)| iv).filter(|iv| iv.length() > 0).collect())
}

pub fn extended_star(config: &PointConfiguration, apex: usize, sigma: &Signature) -> Result<ExtendedStar> {
    Frame::new(config, apex)?.extended_star(sigma)
}

fn sub_point(p: &Point2, q: &Point2) -> Point2 {
    Point2::new(&p.x - &q.x, &p.y - &q.y)
}

fn point_dot(p: &Point2, q: &Point2) -> Rational {
    &p.x * &q.x + &p.y * &q.y
}

/// Affine function `(a, b, c)` with `a x + b y + c = h` at the given points.
fn affine_fit(points: &[(&Point2, Rational)]) -> Option<Vec<Rational>> {
    let rows: Vec<Vec<Rational>> = points.iter().map(|(p, _)| vec![p.x.clone(), p.y.clone(), int(1)]).collect();
    let rhs: Vec<Rational> = points.iter().map(|(_, h)| h.clone()).collect();
    linalg::solve(&rows, &rhs, 3)
}

fn eval_affine(f: &[Rational], p: &Point2) -> Rational {
    &f[0] * &p.x + &f[1] * &p.y + &f[2]
}

/// Point where the lines through `B B'` and `C C'` meet beyond the hull, as
/// seen from the apex; the midpoint of `BC` when the hull is the triangle `ABC`.
fn far_corner(cfg: &PointConfiguration, b: usize, b2: usize, c: usize, c2: usize) -> Option<Point2> {
    let (pb, pc) = (cfg.point(b), cfg.point(c));
    if b2 == c {
        let half = Rational::new(1.into(), 2.into());
        return Some(Point2::new((&pb.x + &pc.x) * &half, (&pb.y + &pc.y) * &half));
    }
    let (pb2, pc2) = (cfg.point(b2), cfg.point(c2));
    let x = line_intersection(pb, pb2, pc, pc2)?;
    let db = sub_point(pb2, pb);
    let dc = sub_point(pc2, pc);
    let t = point_dot(&sub_point(&x, pb), &db);
    let u = point_dot(&sub_point(&x, pc), &dc);
    (t.is_positive() && u.is_positive()).then_some(x)
}

/// A map sending a line that separates the meeting point of `BB'` and `CC'`
/// from the hull to infinity, so that the lines meet on the far side.
fn separating_map(cfg: &PointConfiguration, b: usize, b2: usize, c: usize, c2: usize) -> Result<ProjectiveMap> {
    let (pb, pc) = (cfg.point(b), cfg.point(c));
    let (pb2, pc2) = (cfg.point(b2), cfg.point(c2));
    let (a_x, a_y, c0) = match line_intersection(pb, pb2, pc, pc2) {
        None => {
            // parallel lines: cut the strip beyond the apex end
            let d = sub_point(pb, pb2);
            let top = cfg.points().iter().map(|p| point_dot(&d, p)).max().unwrap();
            (-d.x, -d.y, top + int(1))
        }
        Some(x) => {
            // barycentric-like coordinates a, b of p - X in the basis B - X, C - X
            let e1 = sub_point(pb, &x);
            let e2 = sub_point(pc, &x);
            let det = &e1.x * &e2.y - &e1.y * &e2.x;
            let ax = (&e2.y - &e1.y) / &det;
            let ay = (&e1.x - &e2.x) / &det;
            let level = |p: &Point2| &ax * (&p.x - &x.x) + &ay * (&p.y - &x.y);
            let min = cfg.points().iter().map(level).min().unwrap();
            if !min.is_positive() {
                return Err(Error::Internal("hull is not inside the cone at the meeting point".into()));
            }
            let s = min / int(2);
            let c0 = -(&ax * &x.x + &ay * &x.y) - s;
            (ax, ay, c0)
        }
    };
    ProjectiveMap::sending_line_to_infinity(a_x, a_y, c0)
}

/// Heights on the configuration whose lift contains every cell of the extended star.
///
/// The heights come from fanning the cells below the polyline to an auxiliary
/// point beyond the hull and propagating coplanar heights cell by cell. When
/// that fan does not tile (a polyline segment can separate the auxiliary point
/// from the hull on the apex side), the heights are found instead as a strictly
/// feasible point of the lower-face constraints of the star cells.
pub fn complete_extended_star(
    config: &PointConfiguration,
    apex: usize,
    sigma: &Signature,
) -> Result<(HeightVector, Subdivision)> {
    let f = Frame::new(config, apex)?;
    let star = f.extended_star(sigma)?;
    let heights = match propagated_heights(config, &f, &star, sigma)? {
        Some(h) => h,
        None => {
            let cells: Vec<Cell> = star.cells().cloned().collect();
            let h = lower_face_heights(config, &cells)
                .ok_or_else(|| Error::Internal("extended star admits no lifting".into()))?;
            HeightVector::new(h)
        }
    };
    let result = lift_subdivision(config, &heights)?;
    if !star.cells().all(|c| result.contains_cell(c)) {
        return Err(Error::Internal("completed subdivision misses an extended-star cell".into()));
    }
    Ok((heights, result))
}

fn propagated_heights(
    config: &PointConfiguration,
    f: &Frame,
    star: &ExtendedStar,
    sigma: &Signature,
) -> Result<Option<HeightVector>> {
    let apex = f.apex();
    let n = config.len();
    let line = &star.polyline;
    let in_line = |i: usize| line.indices.binary_search(&i).is_ok();

    // phase one: positive polyline vertices behave as zeros
    let sigma1 = Signature {
        apex,
        entries: (1..=f.m()).map(|i| if sigma.at(i) > 0 && in_line(i) { 0 } else { sigma.at(i) }).collect(),
    };
    let above1 = f.star(&sigma1, line);
    let intervals = f.intervals(&sigma1, line);

    let hull = convex_hull(config)?;
    let (b, c) = (f.ao.b, f.ao.c);
    let (b2, c2) = (hull.next(b), hull.prev(c));
    let (cfg, weights) = if far_corner(config, b, b2, c, c2).is_some() {
        (config.clone(), vec![int(1); n])
    } else {
        let map = separating_map(config, b, b2, c, c2)?;
        let image = apply_projective(&map, config)?;
        let w = config.points().iter().map(|p| map.weight(p)).collect();
        (image, w)
    };
    let Some(x) = far_corner(&cfg, b, b2, c, c2) else {
        return Ok(None);
    };

    let pa = cfg.point(apex).clone();
    let (pb, pc) = (cfg.point(b).clone(), cfg.point(c).clone());
    // D must lie where ABDC is convex and contains the hull: past the meeting
    // point inside both the opposite wedge and the apex wedge, or past BC
    // inside the apex wedge when the hull is a triangle
    let (origin, u1, u2) = if b2 == c {
        (pa.clone(), sub_point(&pb, &pa), sub_point(&pc, &pa))
    } else {
        (x.clone(), sub_point(&x, &pb), sub_point(&x, &pc))
    };
    let side_b = cross(&pa, &pb, &pc).signum();
    let side_c = cross(&pa, &pc, &pb).signum();
    let steps = [(1, 1), (1, 2), (2, 1), (2, 3), (3, 2), (1, 3), (3, 1), (3, 4), (4, 3), (2, 5), (5, 2)];
    let mut d = None;
    'search: for shrink in 4..64u32 {
        let scale = Rational::new(1.into(), BigInt::from(2u32).pow(shrink));
        for (s1, s2) in steps {
            let (s1, s2) = (int(s1) * &scale, int(s2) * &scale);
            let cand = Point2::new(&origin.x + &s1 * &u1.x + &s2 * &u2.x, &origin.y + &s1 * &u1.y + &s2 * &u2.y);
            let inside = cross(&pa, &pb, &cand).signum() == side_b && cross(&pa, &pc, &cand).signum() == side_c;
            let clash = (0..n).any(|i| {
                cfg.point(i) == &cand || (i + 1..n).any(|j| cross(cfg.point(i), cfg.point(j), &cand).is_zero())
            });
            if inside && !clash {
                d = Some(cand);
                break 'search;
            }
        }
    }
    let Some(d) = d else {
        return Ok(None);
    };
    let mut pts = cfg.points().to_vec();
    pts.push(d);
    let ext = PointConfiguration::new(pts)?;

    let mut cells: Vec<Cell> = above1.iter().map(|(c, _, _)| c.clone()).collect();
    for (iv, _, _) in &intervals {
        let mut m = f.labels(iv.indices());
        m.push(n);
        cells.push(Cell::new(m));
    }

    let mut h: Vec<Option<Rational>> = vec![None; n + 1];
    h[apex] = Some(int(0));
    h[b] = Some(int(0));
    h[n] = Some(int(0));
    h[f.label(line.indices[1])] = Some(int(-1));
    let t_ext = OrientTable::new(&ext);
    loop {
        let mut progress = false;
        for cell in &cells {
            let known: Vec<usize> = cell.members.iter().copied().filter(|&l| h[l].is_some()).collect();
            if known.len() == cell.len() || t_ext.hull(&known).len() < 3 {
                continue;
            }
            let fit: Vec<(&Point2, Rational)> = known.iter().map(|&l| (ext.point(l), h[l].clone().unwrap())).collect();
            let Some(g) = affine_fit(&fit) else {
                return Ok(None);
            };
            for &l in &cell.members {
                if h[l].is_none() {
                    h[l] = Some(eval_affine(&g, ext.point(l)));
                }
            }
            progress = true;
        }
        if !progress {
            break;
        }
    }
    let used: Vec<bool> = (0..=n).map(|l| cells.iter().any(|c| c.contains(l))).collect();
    if (0..=n).any(|l| used[l] && h[l].is_none()) {
        return Ok(None);
    }
    let top = h.iter().flatten().max().cloned().unwrap_or_else(Rational::zero) + int(1);
    let h: Vec<Rational> = h.into_iter().map(|x| x.unwrap_or_else(|| top.clone())).collect();
    let expected = Subdivision::new(cells, n + 1);
    if lift_subdivision(&ext, &HeightVector::new(h.clone()))? != expected {
        return Ok(None);
    }

    let alpha: Vec<Rational> = (0..n).map(|i| &h[i] * &weights[i]).collect();
    let mut levels = vec![alpha];
    let positives: Vec<usize> = (1..=f.m()).filter(|&i| sigma.at(i) > 0 && in_line(i)).map(|i| f.label(i)).collect();
    if !positives.is_empty() {
        let pa = config.point(apex);
        levels.push(
            config
                .points()
                .iter()
                .map(|x| positives.iter().fold(Rational::zero(), |acc, &p| acc + cross(pa, config.point(p), x).abs()))
                .collect(),
        );
    }
    let heights = HeightVector::from_levels(levels)?;
    let result = lift_subdivision(config, &heights)?;
    Ok(star.cells().all(|c| result.contains_cell(c)).then_some(heights))
}

/// Product of associahedron face numbers over the negative intervals.
pub fn signature_lower_bound(config: &PointConfiguration, apex: usize, sigma: &Signature, delta: &[usize]) -> Result<BigUint> {
    let lengths: Vec<usize> = negative_intervals(config, apex, sigma)?.iter().map(|iv| iv.length()).collect();
    face_product(&lengths, delta)
}

fn face_product(lengths: &[usize], delta: &[usize]) -> Result<BigUint> {
    if lengths.len() != delta.len() {
        return Err(Error::InvalidDelta(format!("expected {} entries, got {}", lengths.len(), delta.len())));
    }
    let mut p = BigUint::one();
    for (&m, &d) in lengths.iter().zip(delta) {
        if d >= m {
            return Err(Error::InvalidDelta(format!("entry {d} is not below the interval length {m}")));
        }
        p *= assoc_faces(m, d)?;
    }
    Ok(p)
}

/// Lengths of the maximal runs of negative entries.
pub fn negative_runs(sigma: &Signature) -> Vec<usize> {
    let mut runs = Vec::new();
    let mut cur = 0;
    for &e in &sigma.entries {
        if e < 0 {
            cur += 1;
        } else if cur > 0 {
            runs.push(cur);
            cur = 0;
        }
    }
    if cur > 0 {
        runs.push(cur);
    }
    runs
}

/// Number of subdivisions of a convex polygon with extended signature `(sigma, delta)`.
pub fn convex_exact_count(sigma: &Signature, delta: &[usize]) -> Result<BigUint> {
    face_product(&negative_runs(sigma), delta)
}

/// Moves every non-apex point outward along its ray from the apex onto a
/// common circle through the apex, giving a configuration in convex position.
pub fn radial_convexification(config: &PointConfiguration, apex: usize) -> Result<PointConfiguration> {
    let f = Frame::new(config, apex)?;
    if convex_hull(config)?.cycle.len() == config.len() {
        return Ok(config.clone());
    }
    let pa = config.point(apex);
    let vb = sub_point(config.point(f.ao.b), pa);
    let vc = sub_point(config.point(f.ao.c), pa);
    // inward normals of the two hull edges at the apex
    let nb = Point2::new(-vb.y.clone(), vb.x.clone());
    let nc = Point2::new(vc.y.clone(), -vc.x.clone());
    let u = Point2::new(&nb.x + &nc.x, &nb.y + &nc.y);
    let vs: Vec<Point2> = (0..config.len()).map(|i| sub_point(config.point(i), pa)).collect();
    let lambda = (0..config.len())
        .filter(|&i| i != apex)
        .map(|i| point_dot(&vs[i], &vs[i]) / point_dot(&u, &vs[i]))
        .max()
        .unwrap();
    let pts = (0..config.len())
        .map(|i| {
            if i == apex {
                return pa.clone();
            }
            let v = &vs[i];
            let t = int(2) * &lambda * point_dot(&u, v) / point_dot(v, v);
            Point2::new(&pa.x + &t * &v.x, &pa.y + &t * &v.y)
        })
        .collect();
    PointConfiguration::new(pts)
}

/// The labels of a below cell, sorted, which index the sub-configuration its
/// subdivisions refer to.
pub fn cell_configuration(config: &PointConfiguration, cell: &Cell) -> PointConfiguration {
    config.restrict(&cell.members)
}

/// Builds a well-formed regular subdivision with extended signature
/// `(sigma, delta)` that restricts to `cell_subdivisions[i]` on the `i`-th
/// cell below the polyline. Each of those is a subdivision of
/// [`cell_configuration`] of that cell, labelled by position in the cell's
/// sorted member list.
pub fn build_well_formed(
    config: &PointConfiguration,
    apex: usize,
    sigma: &Signature,
    delta: &[usize],
    cell_subdivisions: &[Subdivision],
) -> Result<Subdivision> {
    let f = Frame::new(config, apex)?;
    let star = f.extended_star(sigma)?;
    let lengths: Vec<usize> = star.intervals.iter().map(|iv| iv.length()).collect();
    face_product(&lengths, delta)?;
    if cell_subdivisions.len() != delta.len() {
        return Err(Error::InvalidDelta(format!(
            "expected {} cell subdivisions, got {}",
            delta.len(),
            cell_subdivisions.len()
        )));
    }
    let mut witnesses = Vec::new();
    for (k, (cell, ti)) in star.cells_below.iter().zip(cell_subdivisions).enumerate() {
        let sub_cfg = cell_configuration(config, cell);
        if !validate_subdivision(&sub_cfg, ti).is_empty() {
            return Err(Error::InvalidSubdivision(format!("subdivision of below cell {k} is invalid")));
        }
        let cert = is_regular(&sub_cfg, ti)?;
        let Some(w) = cert.witness else {
            return Err(Error::NotRegular);
        };
        let dim = face_dimension(&sub_cfg, ti)?;
        if dim != delta[k] {
            return Err(Error::InvalidDelta(format!("subdivision of below cell {k} has dimension {dim}, not {}", delta[k])));
        }
        witnesses.push(w.primary().to_vec());
    }

    let (alpha, _) = complete_extended_star(config, apex, sigma)?;
    let n = config.len();
    let mut omega: Vec<Option<Rational>> = vec![None; n];
    omega[apex] = Some(int(0));
    omega[f.ao.b] = Some(int(0));
    for step in &star.shelling_order {
        let (cell, local) = match *step {
            StarCell::Above(k) => (&star.cells_above[k], None),
            StarCell::Below(k) => (&star.cells_below[k], Some(&witnesses[k])),
        };
        let base = |pos: usize| local.map_or_else(Rational::zero, |w| w[pos].clone());
        let fit: Vec<(&Point2, Rational)> = cell
            .members
            .iter()
            .enumerate()
            .filter_map(|(pos, &l)| omega[l].as_ref().map(|v| (config.point(l), v - base(pos))))
            .collect();
        let g = affine_fit(&fit).ok_or_else(|| Error::Internal("cannot match heights along the shelling".into()))?;
        for (pos, &l) in cell.members.iter().enumerate() {
            let v = base(pos) + eval_affine(&g, config.point(l));
            match &omega[l] {
                Some(old) if *old != v => {
                    return Err(Error::Internal("shelling step changed an assigned height".into()))
                }
                _ => omega[l] = Some(v),
            }
        }
    }
    let omega: Vec<Rational> = omega.into_iter().map(|v| v.unwrap_or_else(Rational::zero)).collect();

    // lifting vectors affine on every prescribed cell, used to break the
    // remaining ties generically
    let mut prescribed: Vec<Cell> = star.cells_above.clone();
    for (cell, ti) in star.cells_below.iter().zip(cell_subdivisions) {
        for c in &ti.cells {
            prescribed.push(Cell::new(c.members.iter().map(|&p| cell.members[p]).collect()));
        }
    }
    let mut eqs = Vec::new();
    for c in &prescribed {
        let cyc = f.t.hull(&c.members);
        let fit3 = [cyc[0], cyc[1], cyc[2]];
        for &p in &c.members {
            if fit3.contains(&p) {
                continue;
            }
            let mut row = vec![Rational::zero(); n];
            let [i, j, k] = fit3;
            let pt = |l: usize| config.point(l);
            row[p] += cross(pt(i), pt(j), pt(k));
            row[i] -= cross(pt(p), pt(j), pt(k));
            row[j] -= cross(pt(i), pt(p), pt(k));
            row[k] -= cross(pt(i), pt(j), pt(p));
            eqs.push(row);
        }
    }
    let basis = linalg::kernel(&eqs, n);
    let target = sigma.zeros() + delta.iter().sum::<usize>();
    for attempt in 0..8i64 {
        let mut v = vec![Rational::zero(); n];
        for (k, bvec) in basis.iter().enumerate() {
            let coeff = int(((k as i64 + 3) * (attempt * 7 + 5) * 131) % 61 - 30);
            for (vi, bi) in v.iter_mut().zip(bvec) {
                *vi += &coeff * bi;
            }
        }
        let mut levels = alpha.levels().to_vec();
        levels.push(omega.clone());
        levels.push(v);
        let hv = HeightVector::from_levels(levels)?;
        let t = lift_subdivision(config, &hv)?;
        if !prescribed.iter().all(|c| t.contains_cell(c)) {
            return Err(Error::Internal("well-formed lift lost a prescribed cell".into()));
        }
        if face_dimension(config, &t)? == target {
            return Ok(t);
        }
    }
    Err(Error::Internal(format!("no tie-breaking lift reached dimension {target}")))
}

/// Cells of `sub` lying inside `cell`, relabelled to the cell's sub-configuration.
pub fn restrict_to_cell(config: &PointConfiguration, sub: &Subdivision, cell: &Cell) -> Option<Subdivision> {
    let pos: HashMap<usize, usize> = cell.members.iter().enumerate().map(|(k, &l)| (l, k)).collect();
    let cells: Vec<Cell> = sub
        .cells
        .iter()
        .filter(|c| c.is_subset_of(cell))
        .map(|c| Cell::new(c.members.iter().map(|l| pos[l]).collect()))
        .collect();
    let sub_cfg = cell_configuration(config, cell);
    let r = Subdivision::new(cells, cell.len());
    validate_subdivision(&sub_cfg, &r).is_empty().then_some(r)
}

/// Negative intervals of `sigma` in a configuration in convex position:
/// runs of negative entries, each framed by its non-negative neighbours.
#[cfg(test)]
fn runs_as_intervals(sigma: &Signature) -> Vec<NegativeInterval> {
    let m = sigma.entries.len();
    let mut out = Vec::new();
    let mut i = 0;
    while i < m {
        if sigma.entries[i] < 0 {
            let start = i;
            while i < m && sigma.entries[i] < 0 {
                i += 1;
            }
            out.push(NegativeInterval { start, end: i + 1, negatives: (start + 1..=i).collect() });
        } else {
            i += 1;
        }
    }
    out
}
