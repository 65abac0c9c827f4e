//! Gale duals of configurations with `n = d + 4` points as vectors on the
//! 2-sphere, crossings of the geodesic arcs between them, and the chamber
//! counts they determine.

use std::collections::{BTreeSet, HashMap, HashSet};

use num_bigint::{BigInt, BigUint};
use num_traits::{Signed, Zero};

use crate::census::{face_census, DEFAULT_LIMIT};
use crate::error::{Error, Result};
use crate::geometry::{Point2, PointConfiguration};
use crate::linalg;
use crate::lp;
use crate::rational::{int, primitive_integer, ratio, sign, Rational};

/// Points of `R^d` with exact coordinates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HighDimConfiguration {
    dim: usize,
    points: Vec<Vec<Rational>>,
}

impl HighDimConfiguration {
    pub fn new(dim: usize, points: Vec<Vec<Rational>>) -> Result<Self> {
        let mut seen = HashMap::new();
        for (i, p) in points.iter().enumerate() {
            if p.len() != dim {
                return Err(Error::DimensionMismatch { expected: dim, got: p.len() });
            }
            if let Some(&j) = seen.get(p) {
                return Err(Error::DuplicatePoint(i, j));
            }
            seen.insert(p.clone(), i);
        }
        Ok(HighDimConfiguration { dim, points })
    }

    pub fn from_planar(config: &PointConfiguration) -> Self {
        HighDimConfiguration {
            dim: 2,
            points: config.points().iter().map(|p| vec![p.x.clone(), p.y.clone()]).collect(),
        }
    }

    pub fn to_planar(&self) -> Result<PointConfiguration> {
        if self.dim != 2 {
            return Err(Error::DimensionMismatch { expected: 2, got: self.dim });
        }
        PointConfiguration::new(self.points.iter().map(|p| Point2::new(p[0].clone(), p[1].clone())).collect())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[Vec<Rational>] {
        &self.points
    }

    /// The `(d+1) × n` matrix with columns `(1, p)`.
    fn homogeneous_rows(&self) -> Vec<Vec<Rational>> {
        let mut rows = vec![vec![int(1); self.len()]];
        for k in 0..self.dim {
            rows.push(self.points.iter().map(|p| p[k].clone()).collect());
        }
        rows
    }

    /// Deterministic small rational perturbation; `strength` scales the offsets.
    pub fn perturbed(&self, strength: u32) -> Result<Self> {
        let den = 1000 * i64::from(strength.max(1));
        let points = self
            .points
            .iter()
            .enumerate()
            .map(|(i, p)| {
                p.iter()
                    .enumerate()
                    .map(|(k, x)| x + ratio(((i as i64 * 7 + k as i64 * 13 + 5) * 37) % 11 - 5, den))
                    .collect()
            })
            .collect();
        HighDimConfiguration::new(self.dim, points)
    }
}

pub fn moment_curve(n: usize, d: usize, parameters: &[Rational]) -> Result<HighDimConfiguration> {
    if d == 0 {
        return Err(Error::OutOfRange("dimension must be at least 1".into()));
    }
    if parameters.len() != n {
        return Err(Error::DimensionMismatch { expected: n, got: parameters.len() });
    }
    let mut seen = HashSet::new();
    for t in parameters {
        if !seen.insert(t.clone()) {
            return Err(Error::DuplicateParameter(t.to_string()));
        }
    }
    let points = parameters
        .iter()
        .map(|t| {
            let mut v = Vec::with_capacity(d);
            let mut pw = t.clone();
            for _ in 0..d {
                v.push(pw.clone());
                pw *= t;
            }
            v
        })
        .collect();
    HighDimConfiguration::new(d, points)
}

/// Nonzero direction vectors in `R^3`; only their rays matter.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SphericalVectors {
    vectors: Vec<[Rational; 3]>,
}

impl SphericalVectors {
    pub fn new(vectors: Vec<[Rational; 3]>) -> Result<Self> {
        if let Some(i) = vectors.iter().position(|v| v.iter().all(|x| x.is_zero())) {
            return Err(Error::OutOfRange(format!("vector {i} is zero")));
        }
        Ok(SphericalVectors { vectors })
    }

    pub fn vectors(&self) -> &[[Rational; 3]] {
        &self.vectors
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }
}

fn det3(a: &[Rational; 3], b: &[Rational; 3], c: &[Rational; 3]) -> Rational {
    &a[0] * (&b[1] * &c[2] - &b[2] * &c[1]) - &a[1] * (&b[0] * &c[2] - &b[2] * &c[0])
        + &a[2] * (&b[0] * &c[1] - &b[1] * &c[0])
}

fn parallel(a: &[Rational; 3], b: &[Rational; 3]) -> Option<i8> {
    let crossz = (&a[1] * &b[2] - &a[2] * &b[1]).is_zero()
        && (&a[2] * &b[0] - &a[0] * &b[2]).is_zero()
        && (&a[0] * &b[1] - &a[1] * &b[0]).is_zero();
    if !crossz {
        return None;
    }
    let d = &a[0] * &b[0] + &a[1] * &b[1] + &a[2] * &b[2];
    Some(sign(&d))
}

/// Rows of a kernel basis of the homogeneous coordinate matrix.
pub fn gale_dual(config: &HighDimConfiguration) -> Result<SphericalVectors> {
    let n = config.len();
    let rows = config.homogeneous_rows();
    if linalg::rank(&rows, n) != config.dim() + 1 {
        return Err(Error::RankDeficient);
    }
    let basis = linalg::kernel(&rows, n);
    if basis.len() != 3 {
        return Err(Error::DimensionMismatch { expected: config.dim() + 4, got: n });
    }
    let vectors: Vec<[Rational; 3]> =
        (0..n).map(|i| [basis[0][i].clone(), basis[1][i].clone(), basis[2][i].clone()]).collect();
    if let Some(i) = vectors.iter().position(|v| v.iter().all(|x| x.is_zero())) {
        return Err(Error::NotGeneric(format!("point {i} has a zero Gale vector")));
    }
    SphericalVectors::new(vectors)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GenericityViolation {
    CoincidentPair(usize, usize),
    CoplanarTriple(usize, usize, usize),
    /// Several arcs through one crossing point, given as the arcs involved.
    MultipleCrossing(Vec<(usize, usize)>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CrossingReport {
    /// Unordered pairs of vertex-disjoint arcs that cross in their relative interiors.
    pub c: u64,
    pub generic: bool,
    pub violations: Vec<GenericityViolation>,
    pub crossing_points: u64,
    /// Faces of the arc arrangement from Euler's formula; `None` when a
    /// vector lies on an arc between two others.
    pub euler_faces: Option<u64>,
}

fn combine(x: &Rational, a: &[Rational; 3], y: &Rational, b: &[Rational; 3]) -> Vec<BigInt> {
    let v: Vec<Rational> = (0..3).map(|k| x * &a[k] + y * &b[k]).collect();
    primitive_integer(&v)
}

pub fn arc_crossings(vs: &SphericalVectors) -> Result<CrossingReport> {
    let v = vs.vectors();
    let n = v.len();
    let mut violations = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            match parallel(&v[i], &v[j]) {
                Some(s) if s < 0 => return Err(Error::AntipodalPair(i, j)),
                Some(_) => violations.push(GenericityViolation::CoincidentPair(i, j)),
                None => {}
            }
        }
    }
    let mut coplanar = false;
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                if det3(&v[i], &v[j], &v[k]).is_zero() {
                    coplanar = true;
                    violations.push(GenericityViolation::CoplanarTriple(i, j, k));
                }
            }
        }
    }
    let arcs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
    let mut c = 0u64;
    let mut points: HashMap<Vec<BigInt>, BTreeSet<(usize, usize)>> = HashMap::new();
    for (x, &(a, b)) in arcs.iter().enumerate() {
        for &(cc, d) in &arcs[x + 1..] {
            if a == cc || a == d || b == cc || b == d {
                continue;
            }
            // affine dependence x_a a + x_b b + x_c c + x_d d = 0
            let xa = det3(&v[b], &v[cc], &v[d]);
            let xb = -det3(&v[a], &v[cc], &v[d]);
            let xc = det3(&v[a], &v[b], &v[d]);
            let xd = -det3(&v[a], &v[b], &v[cc]);
            let (sa, sb, sc, sd) = (sign(&xa), sign(&xb), sign(&xc), sign(&xd));
            if sa != 0 && sa == sb && sc == -sa && sd == -sa {
                c += 1;
                let p = if sa > 0 { combine(&xa, &v[a], &xb, &v[b]) } else { combine(&-xa, &v[a], &-xb, &v[b]) };
                let e = points.entry(p).or_default();
                e.insert((a, b));
                e.insert((cc, d));
            }
        }
    }
    for arcs_at in points.values() {
        if arcs_at.len() > 2 {
            violations.push(GenericityViolation::MultipleCrossing(arcs_at.iter().copied().collect()));
        }
    }
    let crossing_points = points.len() as u64;
    let euler_faces = (!coplanar).then(|| {
        let vertices = n as u64 + crossing_points;
        let edges = arcs.len() as u64 + points.values().map(|s| s.len() as u64).sum::<u64>();
        edges + 2 - vertices
    });
    Ok(CrossingReport { c, generic: violations.is_empty(), violations, crossing_points, euler_faces })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChamberReport {
    pub crossings: CrossingReport,
    /// `c + C(n,2) - n + 2`.
    pub formula: u64,
    pub euler: u64,
}

pub fn chamber_count(vs: &SphericalVectors) -> Result<ChamberReport> {
    let crossings = arc_crossings(vs)?;
    if !crossings.generic {
        return Err(Error::NotGeneric(format!("{:?}", crossings.violations)));
    }
    let n = vs.len() as u64;
    let formula = crossings.c + n * (n - 1) / 2 + 2 - n;
    let euler = crossings.euler_faces.expect("generic arrangements have Euler counts");
    if formula != euler {
        return Err(Error::Internal(format!("chamber formula {formula} disagrees with Euler count {euler}")));
    }
    Ok(ChamberReport { crossings, formula, euler })
}

/// `⌊n/2⌋⌊(n-1)/2⌋⌊(n-2)/2⌋⌊(n-3)/2⌋ / 4`.
pub fn hill_number(n: usize) -> BigUint {
    if n < 3 {
        return BigUint::zero();
    }
    let f = |k: usize| BigUint::from(k / 2);
    f(n) * f(n - 1) * f(n - 2) * f(n - 3) / BigUint::from(4u32)
}

/// A rational approximation of `tan(θ/2)` with denominator 1000.
fn half_angle(theta: f64) -> Rational {
    ratio(((theta / 2.0).tan() * 1000.0).round() as i64, 1000)
}

/// `⌈n/2⌉` rays around the north pole and `⌊n/2⌋` around the south pole on
/// two small circles. The southern circle is rotated by a fifth of a step and
/// the angles carry a small fixed jitter so that no three arcs meet.
pub fn two_circle_vectors(n: usize) -> Result<SphericalVectors> {
    if n < 5 {
        return Err(Error::OutOfRange(format!("two-circle drawings need n >= 5, got {n}")));
    }
    let north = n.div_ceil(2);
    let south = n / 2;
    let mut vectors = Vec::with_capacity(n);
    let mut ring = |count: usize, offset: f64, z: i64| {
        for i in 0..count {
            let jitter = 0.01 * ((i * i * 7 + 1) % 5) as f64;
            let theta = std::f64::consts::TAU * (i as f64 + offset + jitter) / count as f64;
            // exact rational point (1 - t², 2t) / (1 + t²) on the unit circle
            let v = if (theta - std::f64::consts::PI).abs() < 1e-9 {
                [int(-1), int(0), int(5 * z)]
            } else {
                let t = half_angle(theta);
                let q = int(1) + &t * &t;
                [int(1) - &t * &t, int(2) * &t, int(5 * z) * q]
            };
            vectors.push(v);
        }
    };
    ring(north, 0.0, 1);
    ring(south, 0.2, -1);
    let vs = SphericalVectors::new(vectors)?;
    let report = arc_crossings(&vs)?;
    if !report.generic {
        return Err(Error::Internal(format!("two-circle drawing for n = {n} is not generic")));
    }
    Ok(vs)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DualityReport {
    pub n: usize,
    pub d: usize,
    pub crossings: CrossingReport,
    /// Chambers of the arc arrangement of the Gale dual.
    pub chambers: u64,
    /// Regular triangulations counted directly on the primal side.
    pub triangulations: u64,
    pub matches: bool,
}

/// Compares the chamber count of the Gale dual with a direct count of
/// regular triangulations: the planar census for `d = 2`, a brute-force
/// enumerator for `d = 3`. When the only defects of the dual are several
/// arcs through one point, chambers come from Euler's formula instead.
pub fn duality_check(config: &HighDimConfiguration) -> Result<DualityReport> {
    let n = config.len();
    let d = config.dim();
    if n != d + 4 {
        return Err(Error::DimensionMismatch { expected: d + 4, got: n });
    }
    let vs = gale_dual(config)?;
    let crossings = arc_crossings(&vs)?;
    // with several arcs through a point the formula overcounts, but the
    // arrangement's faces are still the chambers
    let chambers = match (crossings.generic, crossings.euler_faces) {
        (true, _) => chamber_count(&vs)?.formula,
        (false, Some(faces)) => faces,
        (false, None) => return Err(Error::NotGeneric(format!("{:?}", crossings.violations))),
    };
    let triangulations = match d {
        2 => {
            let census = face_census(&config.to_planar()?, None, Some(DEFAULT_LIMIT))?;
            u64::try_from(census.f_vector[0].clone()).map_err(|_| Error::Internal("count overflow".into()))?
        }
        3 => regular_triangulations_3d(config)?.len() as u64,
        _ => return Err(Error::SizeLimit { n, limit: 7 }),
    };
    Ok(DualityReport { n, d, crossings, chambers, triangulations, matches: chambers == triangulations })
}

/// Affine dependence among five points of `R^3` in general position,
/// normalized so that the coefficient of the last point is positive.
fn dependence5(pts: &[&Vec<Rational>; 5]) -> Result<Vec<Rational>> {
    let mut rows = vec![vec![int(1); 5]];
    for k in 0..3 {
        rows.push(pts.iter().map(|p| p[k].clone()).collect());
    }
    let ker = linalg::kernel(&rows, 5);
    if ker.len() != 1 || ker[0].iter().any(|x| x.is_zero()) {
        return Err(Error::NotGeneric("four points of the configuration are coplanar".into()));
    }
    let mut lam = ker.into_iter().next().unwrap();
    if lam[4].is_negative() {
        for x in lam.iter_mut() {
            *x = -x.clone();
        }
    }
    Ok(lam)
}

fn orient3(p: &[Vec<Rational>], a: usize, b: usize, c: usize, d: usize) -> i8 {
    let m: Vec<Vec<Rational>> = [b, c, d].iter().map(|&q| (0..3).map(|k| &p[q][k] - &p[a][k]).collect()).collect();
    sign(&linalg::determinant(&m))
}

/// Regular triangulations of a spatial configuration in general position
/// whose points are all hull vertices; each as a sorted list of tetrahedra.
pub(crate) fn regular_triangulations_3d(config: &HighDimConfiguration) -> Result<Vec<Vec<[usize; 4]>>> {
    let p = config.points();
    let n = p.len();
    if config.dim() != 3 || n > 8 {
        return Err(Error::SizeLimit { n, limit: 8 });
    }
    let tets: Vec<[usize; 4]> = (0..n)
        .flat_map(|a| (a + 1..n).flat_map(move |b| (b + 1..n).flat_map(move |c| (c + 1..n).map(move |d| [a, b, c, d]))))
        .collect();
    for t in &tets {
        if orient3(p, t[0], t[1], t[2], t[3]) == 0 {
            return Err(Error::NotGeneric("four points of the configuration are coplanar".into()));
        }
    }
    let facet_side = |f: [usize; 3], q: usize| orient3(p, f[0], f[1], f[2], q);
    let mut hull_facets = HashSet::new();
    for a in 0..n {
        for b in a + 1..n {
            for c in b + 1..n {
                let sides: HashSet<i8> =
                    (0..n).filter(|&q| q != a && q != b && q != c).map(|q| facet_side([a, b, c], q)).collect();
                if sides.len() == 1 {
                    hull_facets.insert([a, b, c]);
                }
            }
        }
    }
    for q in 0..n {
        if !hull_facets.iter().any(|f| f.contains(&q)) {
            return Err(Error::NotGeneric(format!("point {q} is not a hull vertex")));
        }
    }

    // circuits: every five points carry one affine dependence
    let mut circuits: HashMap<[usize; 5], Vec<i8>> = HashMap::new();
    for t in &tets {
        for q in t[3] + 1..n {
            let s = [t[0], t[1], t[2], t[3], q];
            let lam = dependence5(&[&p[s[0]], &p[s[1]], &p[s[2]], &p[s[3]], &p[s[4]]])?;
            circuits.insert(s, lam.iter().map(sign).collect());
        }
    }
    let proper = |x: &[usize; 4], y: &[usize; 4]| -> bool {
        let union: BTreeSet<usize> = x.iter().chain(y).copied().collect();
        let u: Vec<usize> = union.into_iter().collect();
        let k = u.len();
        if k < 5 {
            return x != y;
        }
        for mask in 0u32..(1 << k) {
            if mask.count_ones() != 5 {
                continue;
            }
            let s: Vec<usize> = (0..k).filter(|i| mask >> i & 1 == 1).map(|i| u[i]).collect();
            let key = [s[0], s[1], s[2], s[3], s[4]];
            let signs = &circuits[&key];
            for flip in [1i8, -1] {
                let pos_in_x = s.iter().zip(signs).all(|(q, &sg)| sg * flip <= 0 || x.contains(q));
                let neg_in_y = s.iter().zip(signs).all(|(q, &sg)| sg * flip >= 0 || y.contains(q));
                if pos_in_x && neg_in_y {
                    return false;
                }
            }
        }
        true
    };
    let compat: Vec<Vec<bool>> =
        (0..tets.len()).map(|a| (0..tets.len()).map(|b| a != b && proper(&tets[a], &tets[b])).collect()).collect();
    let facets_of = |t: &[usize; 4]| -> [([usize; 3], usize); 4] {
        [
            ([t[1], t[2], t[3]], t[0]),
            ([t[0], t[2], t[3]], t[1]),
            ([t[0], t[1], t[3]], t[2]),
            ([t[0], t[1], t[2]], t[3]),
        ]
    };
    let mut by_facet: HashMap<[usize; 3], Vec<(usize, usize)>> = HashMap::new();
    for (k, t) in tets.iter().enumerate() {
        for (f, apex) in facets_of(t) {
            by_facet.entry(f).or_default().push((k, apex));
        }
    }

    struct Dfs<'a> {
        tets: &'a [[usize; 4]],
        hull: &'a HashSet<[usize; 3]>,
        by_facet: &'a HashMap<[usize; 3], Vec<(usize, usize)>>,
        compat: &'a [Vec<bool>],
        side: &'a dyn Fn([usize; 3], usize) -> i8,
    }
    impl Dfs<'_> {
        fn run(&self, chosen: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
            let mut count: HashMap<[usize; 3], (u32, usize)> = HashMap::new();
            for &c in chosen.iter() {
                let t = self.tets[c];
                for (f, apex) in [
                    ([t[1], t[2], t[3]], t[0]),
                    ([t[0], t[2], t[3]], t[1]),
                    ([t[0], t[1], t[3]], t[2]),
                    ([t[0], t[1], t[2]], t[3]),
                ] {
                    let e = count.entry(f).or_insert((0, apex));
                    e.0 += 1;
                }
            }
            let open = count.iter().filter(|(f, (k, _))| *k == 1 && !self.hull.contains(*f)).map(|(f, (_, a))| (*f, *a)).min();
            let Some((f, apex)) = open else {
                out.push(chosen.clone());
                return;
            };
            let inner = (self.side)(f, apex);
            for &(cand, q) in &self.by_facet[&f] {
                if (self.side)(f, q) == inner || chosen.contains(&cand) {
                    continue;
                }
                if chosen.iter().all(|&d| self.compat[cand][d]) {
                    chosen.push(cand);
                    self.run(chosen, out);
                    chosen.pop();
                }
            }
        }
    }
    let start = *hull_facets.iter().min().unwrap();
    let dfs = Dfs { tets: &tets, hull: &hull_facets, by_facet: &by_facet, compat: &compat, side: &facet_side };
    let mut found = Vec::new();
    for &(cand, _) in &by_facet[&start] {
        dfs.run(&mut vec![cand], &mut found);
    }

    let volume = |t: &[usize; 4]| -> Rational {
        let m: Vec<Vec<Rational>> =
            t[1..].iter().map(|&q| (0..3).map(|k| &p[q][k] - &p[t[0]][k]).collect()).collect();
        linalg::determinant(&m).abs()
    };
    let anchor = 0usize;
    let hull_volume = hull_facets
        .iter()
        .filter(|f| !f.contains(&anchor))
        .fold(Rational::zero(), |acc, f| acc + volume(&[anchor, f[0], f[1], f[2]]));

    let mut result = BTreeSet::new();
    for tri in found {
        let total = tri.iter().fold(Rational::zero(), |acc, &k| acc + volume(&tets[k]));
        if total != hull_volume {
            return Err(Error::Internal("spatial triangulation does not fill the hull".into()));
        }
        let mut strict = Vec::new();
        for (i, &x) in tri.iter().enumerate() {
            for &y in &tri[i + 1..] {
                let shared: Vec<usize> = tets[x].iter().copied().filter(|q| tets[y].contains(q)).collect();
                if shared.len() != 3 {
                    continue;
                }
                let a = tets[x].iter().copied().find(|q| !shared.contains(q)).unwrap();
                let b = tets[y].iter().copied().find(|q| !shared.contains(q)).unwrap();
                let five = [&p[shared[0]], &p[shared[1]], &p[shared[2]], &p[a], &p[b]];
                let lam = dependence5(&five)?;
                let mut form = vec![Rational::zero(); n];
                for (q, l) in [shared[0], shared[1], shared[2], a, b].into_iter().zip(lam) {
                    form[q] += l;
                }
                strict.push(form);
            }
        }
        if lp::strictly_feasible_point(n, &[], &strict).is_some() {
            let mut ts: Vec<[usize; 4]> = tri.iter().map(|&k| tets[k]).collect();
            ts.sort();
            result.insert(ts);
        }
    }
    Ok(result.into_iter().collect())
}
