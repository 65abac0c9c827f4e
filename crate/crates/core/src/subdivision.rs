//! Polyhedral subdivisions of planar configurations: lifting, validation,
//! regularity certificates and secondary-polytope face dimensions.

use std::collections::{BTreeSet, HashMap};

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::geometry::{convex_hull, cross, polygon_area2, OrientTable, PointConfiguration};
use crate::linalg;
use crate::lp;
use crate::rational::{normalized_form, sign, to_rationals, Rational};

/// A cell given by its sorted member labels.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Cell {
    pub members: Vec<usize>,
}

impl Cell {
    pub fn new(mut members: Vec<usize>) -> Self {
        members.sort_unstable();
        members.dedup();
        Cell { members }
    }

    pub fn contains(&self, label: usize) -> bool {
        self.members.binary_search(&label).is_ok()
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn is_subset_of(&self, other: &Cell) -> bool {
        self.members.iter().all(|&m| other.contains(m))
    }

    /// Extreme members in counterclockwise order.
    pub fn vertices(&self, config: &PointConfiguration) -> Vec<usize> {
        OrientTable::new(config).hull(&self.members)
    }

    /// Twice the area of the cell's convex hull.
    pub fn area2(&self, config: &PointConfiguration) -> Rational {
        let cycle = self.vertices(config);
        polygon_area2(&cycle.iter().map(|&l| config.point(l)).collect::<Vec<_>>())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Subdivision {
    pub cells: Vec<Cell>,
    pub unused: Vec<usize>,
}

impl Subdivision {
    /// Canonical form: cells sorted, unused computed as the complement of the cells.
    pub fn new(mut cells: Vec<Cell>, n: usize) -> Self {
        cells.sort();
        cells.dedup();
        let mut used = vec![false; n];
        for c in &cells {
            for &m in &c.members {
                if m < n {
                    used[m] = true;
                }
            }
        }
        let unused = (0..n).filter(|&l| !used[l]).collect();
        Subdivision { cells, unused }
    }

    pub fn trivial(n: usize) -> Self {
        Subdivision { cells: vec![Cell::new((0..n).collect())], unused: Vec::new() }
    }

    pub fn is_triangulation(&self) -> bool {
        self.cells.iter().all(|c| c.len() == 3)
    }

    pub fn uses(&self, label: usize) -> bool {
        self.unused.binary_search(&label).is_err()
    }

    pub fn contains_cell(&self, cell: &Cell) -> bool {
        self.cells.binary_search(cell).is_ok()
    }
}

/// Heights with optional infinitesimal refinements: the value of point `i` is
/// `levels[0][i] + ε levels[1][i] + ε² levels[2][i] + …` for a formal positive
/// infinitesimal `ε`, so comparisons are lexicographic over levels.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HeightVector {
    levels: Vec<Vec<Rational>>,
}

impl HeightVector {
    pub fn new(values: Vec<Rational>) -> Self {
        HeightVector { levels: vec![values] }
    }

    pub fn from_levels(levels: Vec<Vec<Rational>>) -> Result<Self> {
        let Some(first) = levels.first() else {
            return Err(Error::DimensionMismatch { expected: 1, got: 0 });
        };
        let n = first.len();
        for l in &levels {
            if l.len() != n {
                return Err(Error::DimensionMismatch { expected: n, got: l.len() });
            }
        }
        Ok(HeightVector { levels })
    }

    pub fn zero(n: usize) -> Self {
        HeightVector::new(vec![Rational::zero(); n])
    }

    /// `α + ε ω`, with all of `ω`'s levels placed after those of `α`.
    pub fn perturbed(alpha: &HeightVector, omega: &HeightVector) -> Result<Self> {
        let mut levels = alpha.levels.clone();
        levels.extend(omega.levels.iter().cloned());
        HeightVector::from_levels(levels)
    }

    pub fn len(&self) -> usize {
        self.levels[0].len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn levels(&self) -> &[Vec<Rational>] {
        &self.levels
    }

    pub fn primary(&self) -> &[Rational] {
        &self.levels[0]
    }

    /// Lexicographic sign of `Σ coeffs[k] h[labels[k]]`.
    pub(crate) fn form_sign(&self, terms: &[(usize, &Rational)]) -> i8 {
        for level in &self.levels {
            let mut s = Rational::zero();
            for (l, c) in terms {
                if !c.is_zero() {
                    s += *c * &level[*l];
                }
            }
            let sg = sign(&s);
            if sg != 0 {
                return sg;
            }
        }
        0
    }
}

/// Coefficients `(p, i, j, k)` of the affine dependence among four points:
/// `O(ijk) h_p − O(pjk) h_i − O(ipk) h_j − O(ijp) h_k`, which is positive
/// exactly when `p` lifts above the plane through `i, j, k` and `O(ijk) > 0`.
fn dependence(config: &PointConfiguration, p: usize, i: usize, j: usize, k: usize) -> [(usize, Rational); 4] {
    let pt = |l| config.point(l);
    let oijk = cross(pt(i), pt(j), pt(k));
    [
        (p, oijk),
        (i, -cross(pt(p), pt(j), pt(k))),
        (j, -cross(pt(i), pt(p), pt(k))),
        (k, -cross(pt(i), pt(j), pt(p))),
    ]
}

/// Linear form in the heights that is positive iff `p` lifts strictly above
/// the plane through the non-collinear `i, j, k`.
fn above_form(config: &PointConfiguration, p: usize, i: usize, j: usize, k: usize) -> Vec<Rational> {
    let dep = dependence(config, p, i, j, k);
    let flip = sign(&dep[0].1) < 0;
    let mut form = vec![Rational::zero(); config.len()];
    for (l, c) in dep {
        form[l] += if flip { -c } else { c };
    }
    form
}

fn above_sign(config: &PointConfiguration, h: &HeightVector, p: usize, i: usize, j: usize, k: usize) -> i8 {
    let dep = dependence(config, p, i, j, k);
    let s = h.form_sign(&dep.iter().map(|(l, c)| (*l, c)).collect::<Vec<_>>());
    if sign(&dep[0].1) < 0 {
        -s
    } else {
        s
    }
}

fn check_basic(config: &PointConfiguration) -> Result<()> {
    if config.len() < 3 {
        return Err(Error::TooFewPoints { needed: 3, got: config.len() });
    }
    convex_hull(config)?;
    Ok(())
}

pub fn lift_subdivision(config: &PointConfiguration, heights: &HeightVector) -> Result<Subdivision> {
    check_basic(config)?;
    let n = config.len();
    if heights.len() != n {
        return Err(Error::DimensionMismatch { expected: n, got: heights.len() });
    }
    let mut cells = BTreeSet::new();
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                if config.orient(i, j, k) == 0 {
                    continue;
                }
                let mut members = vec![i, j, k];
                let mut lower = true;
                for p in 0..n {
                    if p == i || p == j || p == k {
                        continue;
                    }
                    match above_sign(config, heights, p, i, j, k) {
                        0 => members.push(p),
                        s if s < 0 => {
                            lower = false;
                            break;
                        }
                        _ => {}
                    }
                }
                if lower {
                    cells.insert(Cell::new(members));
                }
            }
        }
    }
    Ok(Subdivision::new(cells.into_iter().collect(), n))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    LabelOutOfRange(usize),
    TooFewMembers { cell: usize },
    Degenerate { cell: usize },
    DuplicateCell { cell: usize },
    UnusedMismatch { label: usize },
    Overlap { a: usize, b: usize },
    MembershipMismatch { a: usize, b: usize },
    NotCovering { covered: Rational, hull: Rational },
}

/// Combinatorial data of a cell over a fixed orientation table.
#[derive(Debug, Clone)]
pub(crate) struct CellShape {
    pub members: Vec<usize>,
    pub cycle: Vec<usize>,
    /// Directed boundary edges between consecutive members along the boundary, counterclockwise.
    pub edges: Vec<(usize, usize)>,
}

impl CellShape {
    /// `None` when the members are collinear.
    pub fn new(t: &OrientTable, members: &[usize]) -> Option<Self> {
        let cycle = t.hull(members);
        if cycle.len() < 3 {
            return None;
        }
        let k = cycle.len();
        let mut edges = Vec::new();
        for e in 0..k {
            let (a, b) = (cycle[e], cycle[(e + 1) % k]);
            let mut on: Vec<usize> = members.iter().copied().filter(|&m| t.on_segment(a, b, m)).collect();
            let asc = t.rank(a) < t.rank(b);
            on.sort_by_key(|&m| t.rank(m));
            if !asc {
                on.reverse();
            }
            for w in on.windows(2) {
                edges.push((w[0], w[1]));
            }
        }
        Some(CellShape { members: members.to_vec(), cycle, edges })
    }

    fn members_on(&self, t: &OrientTable, a: usize, b: usize) -> Vec<usize> {
        self.members.iter().copied().filter(|&m| t.on_segment(a, b, m)).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Compat {
    Proper,
    Overlap,
    Membership,
}

/// Whether two cells intersect properly: their hulls meet in a common face
/// (empty, a shared vertex or a shared edge) carrying the same members.
pub(crate) fn compatibility(t: &OrientTable, p: &CellShape, q: &CellShape) -> Compat {
    for (x, y) in [(p, q), (q, p)] {
        let k = x.cycle.len();
        for e in 0..k {
            let (a, b) = (x.cycle[e], x.cycle[(e + 1) % k]);
            if y.cycle.iter().any(|&v| t.orient(a, b, v) > 0) {
                continue;
            }
            let on: Vec<usize> = y.cycle.iter().copied().filter(|&v| t.orient(a, b, v) == 0).collect();
            return match on.len() {
                0 => Compat::Proper,
                1 => {
                    let v = on[0];
                    if v == a || v == b || !t.on_segment(a, b, v) {
                        Compat::Proper
                    } else {
                        Compat::Membership
                    }
                }
                _ => {
                    let (c, d) = (on[0], on[1]);
                    let r = |l: usize| t.rank(l);
                    let (lo1, hi1) = (r(a).min(r(b)), r(a).max(r(b)));
                    let (lo2, hi2) = (r(c).min(r(d)), r(c).max(r(d)));
                    let lo = lo1.max(lo2);
                    let hi = hi1.min(hi2);
                    if lo >= hi {
                        Compat::Proper
                    } else if lo1 == lo2 && hi1 == hi2 && x.members_on(t, a, b) == y.members_on(t, a, b) {
                        Compat::Proper
                    } else {
                        Compat::Membership
                    }
                }
            };
        }
    }
    Compat::Overlap
}

pub fn validate_subdivision(config: &PointConfiguration, sub: &Subdivision) -> Vec<Violation> {
    let n = config.len();
    let mut out = Vec::new();
    for c in &sub.cells {
        for &m in &c.members {
            if m >= n {
                out.push(Violation::LabelOutOfRange(m));
            }
        }
    }
    for &u in &sub.unused {
        if u >= n {
            out.push(Violation::LabelOutOfRange(u));
        }
    }
    if !out.is_empty() {
        return out;
    }
    let t = OrientTable::new(config);
    let mut shapes = Vec::new();
    let mut seen = BTreeSet::new();
    for (ci, c) in sub.cells.iter().enumerate() {
        let members: Vec<usize> = c.members.iter().copied().collect::<BTreeSet<_>>().into_iter().collect();
        if !seen.insert(members.clone()) {
            out.push(Violation::DuplicateCell { cell: ci });
        }
        if members.len() < 3 {
            out.push(Violation::TooFewMembers { cell: ci });
            continue;
        }
        match CellShape::new(&t, &members) {
            Some(s) => shapes.push((ci, s)),
            None => out.push(Violation::Degenerate { cell: ci }),
        }
    }
    let mut used = vec![false; n];
    for c in &sub.cells {
        for &m in &c.members {
            used[m] = true;
        }
    }
    let unused: BTreeSet<usize> = sub.unused.iter().copied().collect();
    for l in 0..n {
        if used[l] == unused.contains(&l) {
            out.push(Violation::UnusedMismatch { label: l });
        }
    }
    for i in 0..shapes.len() {
        for j in i + 1..shapes.len() {
            match compatibility(&t, &shapes[i].1, &shapes[j].1) {
                Compat::Proper => {}
                Compat::Overlap => out.push(Violation::Overlap { a: shapes[i].0, b: shapes[j].0 }),
                Compat::Membership => {
                    out.push(Violation::MembershipMismatch { a: shapes[i].0, b: shapes[j].0 })
                }
            }
        }
    }
    if let Ok(hull) = convex_hull(config) {
        let hull_area = polygon_area2(&hull.cycle.iter().map(|&l| config.point(l)).collect::<Vec<_>>());
        let covered = shapes.iter().fold(Rational::zero(), |acc, (_, s)| {
            acc + polygon_area2(&s.cycle.iter().map(|&l| config.point(l)).collect::<Vec<_>>())
        });
        if covered != hull_area {
            out.push(Violation::NotCovering { covered, hull: hull_area });
        }
    }
    out
}

fn ensure_valid(config: &PointConfiguration, sub: &Subdivision) -> Result<()> {
    check_basic(config)?;
    let v = validate_subdivision(config, sub);
    if v.is_empty() {
        Ok(())
    } else {
        Err(Error::InvalidSubdivision(format!("{:?}", v[0])))
    }
}

/// Every cell of `t` lies inside some cell of `s`.
pub fn refines(t: &Subdivision, s: &Subdivision) -> bool {
    t.cells.iter().all(|c| s.cells.iter().any(|d| c.is_subset_of(d)))
}

/// Homogeneous linear constraints on lifting vectors inducing a subdivision.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SecondaryCone {
    pub equalities: Vec<Vec<Rational>>,
    pub strict_inequalities: Vec<Vec<Rational>>,
}

fn coplanarity_equalities(config: &PointConfiguration, t: &OrientTable, sub: &Subdivision) -> Vec<Vec<Rational>> {
    let mut seen = BTreeSet::new();
    let mut eqs = Vec::new();
    for c in &sub.cells {
        let cyc = t.hull(&c.members);
        let (i, j, k) = (cyc[0], cyc[1], cyc[2]);
        for &p in &c.members {
            if p == i || p == j || p == k {
                continue;
            }
            let f = above_form(config, p, i, j, k);
            let key = normalized_form(&f);
            if seen.insert(key.clone()) {
                eqs.push(to_rationals(&key));
            }
        }
    }
    eqs
}

/// The equalities and strict inequalities whose common solutions are exactly
/// the lifting vectors inducing `sub`.
pub fn secondary_cone(config: &PointConfiguration, sub: &Subdivision) -> Result<SecondaryCone> {
    ensure_valid(config, sub)?;
    let t = OrientTable::new(config);
    let equalities = coplanarity_equalities(config, &t, sub);
    let shapes: Vec<CellShape> = sub.cells.iter().map(|c| CellShape::new(&t, &c.members).unwrap()).collect();
    let mut edge_owner: HashMap<(usize, usize), usize> = HashMap::new();
    for (ci, s) in shapes.iter().enumerate() {
        for &e in &s.edges {
            edge_owner.insert(e, ci);
        }
    }
    let mut seen = BTreeSet::new();
    let mut strict = Vec::new();
    let mut push = |f: Vec<Rational>| {
        let key = crate::rational::primitive_integer(&f);
        if seen.insert(key.clone()) {
            strict.push(to_rationals(&key));
        }
    };
    for (ci, s) in shapes.iter().enumerate() {
        for &(u, v) in &s.edges {
            let Some(&cj) = edge_owner.get(&(v, u)) else { continue };
            if cj < ci {
                continue;
            }
            let a = s.cycle.iter().copied().find(|&x| t.orient(u, v, x) != 0).unwrap();
            let other = &shapes[cj];
            let b = other.cycle.iter().copied().find(|&x| t.orient(u, v, x) != 0).unwrap();
            push(above_form(config, b, u, v, a));
        }
    }
    for &p in &sub.unused {
        let s = shapes.iter().find(|s| t.in_polygon(&s.cycle, p)).ok_or_else(|| {
            Error::InvalidSubdivision(format!("unused point {p} lies in no cell"))
        })?;
        push(above_form(config, p, s.cycle[0], s.cycle[1], s.cycle[2]));
    }
    Ok(SecondaryCone { equalities, strict_inequalities: strict })
}

/// Heights under which every given cell is a lower face of the lift, if any.
pub(crate) fn lower_face_heights(config: &PointConfiguration, cells: &[Cell]) -> Option<Vec<Rational>> {
    let t = OrientTable::new(config);
    let mut equalities = Vec::new();
    let mut strict = Vec::new();
    for c in cells {
        let cyc = t.hull(&c.members);
        let (i, j, k) = (cyc[0], cyc[1], cyc[2]);
        for p in (0..config.len()).filter(|&p| p != i && p != j && p != k) {
            let form = above_form(config, p, i, j, k);
            if c.contains(p) {
                equalities.push(form);
            } else {
                strict.push(form);
            }
        }
    }
    lp::strictly_feasible_point(config.len(), &equalities, &strict)
}

/// Dimension of the space of lifting vectors that are affine on every cell.
pub fn secondary_span_dimension(config: &PointConfiguration, sub: &Subdivision) -> Result<usize> {
    ensure_valid(config, sub)?;
    let t = OrientTable::new(config);
    let eqs = coplanarity_equalities(config, &t, sub);
    Ok(config.len() - linalg::rank(&eqs, config.len()))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Regular,
    NotRegular,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RegularityCertificate {
    pub verdict: Verdict,
    pub witness: Option<HeightVector>,
}

impl RegularityCertificate {
    pub fn is_regular(&self) -> bool {
        self.verdict == Verdict::Regular
    }
}

/// Decides regularity exactly. A regular verdict carries an integer witness
/// in the relative interior of the secondary cone.
pub fn is_regular(config: &PointConfiguration, sub: &Subdivision) -> Result<RegularityCertificate> {
    let cone = secondary_cone(config, sub)?;
    let n = config.len();
    match lp::strictly_feasible_point(n, &cone.equalities, &cone.strict_inequalities) {
        Some(w) => {
            let witness = HeightVector::new(w);
            let lifted = lift_subdivision(config, &witness)?;
            if &lifted != sub {
                return Err(Error::Internal("regularity witness does not reproduce the subdivision".into()));
            }
            Ok(RegularityCertificate { verdict: Verdict::Regular, witness: Some(witness) })
        }
        None => Ok(RegularityCertificate { verdict: Verdict::NotRegular, witness: None }),
    }
}

/// Dimension of the face of the secondary polytope corresponding to `sub`.
pub fn face_dimension(config: &PointConfiguration, sub: &Subdivision) -> Result<usize> {
    if !is_regular(config, sub)?.is_regular() {
        return Err(Error::NotRegular);
    }
    Ok(config.len() - secondary_span_dimension(config, sub)?)
}

/// The regular refinement of the subdivision induced by `alpha` obtained by
/// subdividing each of its cells as `omega` prescribes.
pub fn refine_with(config: &PointConfiguration, alpha: &HeightVector, omega: &HeightVector) -> Result<Subdivision> {
    let n = config.len();
    for h in [alpha, omega] {
        if h.len() != n {
            return Err(Error::DimensionMismatch { expected: n, got: h.len() });
        }
    }
    lift_subdivision(config, &HeightVector::perturbed(alpha, omega)?)
}
