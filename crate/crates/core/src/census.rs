//! Exhaustive enumeration of subdivisions, face counts of secondary
//! polytopes, associahedron numbers, and the comparisons against the convex
//! polygon that they are meant to dominate.

use std::collections::{BTreeMap, HashMap, HashSet};

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::geometry::{convex_hull, in_general_position, polygon_area2, OrientTable, PointConfiguration};
use crate::rational::Rational;
use crate::signature::{
    build_well_formed, cell_configuration, link_signature, negative_runs, radial_convexification, restrict_to_cell, Frame, Signature,
};
use crate::subdivision::{
    compatibility, face_dimension, is_regular, secondary_span_dimension, Cell, CellShape, Compat, HeightVector,
    Subdivision,
};

pub const DEFAULT_LIMIT: usize = 9;
pub const DEFAULT_STRATIFIED_LIMIT: usize = 7;

fn binomial(n: usize, k: usize) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut r = BigUint::one();
    for i in 0..k {
        r = r * BigUint::from(n - i) / BigUint::from(i + 1);
    }
    r
}

pub fn catalan(n: usize) -> BigUint {
    binomial(2 * n, n) / BigUint::from(n + 1)
}

/// Number of `k`-dimensional faces of the associahedron whose vertices are
/// the `C_n` triangulations of a convex `(n+2)`-gon.
pub fn assoc_faces(n: usize, k: usize) -> Result<BigUint> {
    if n == 0 && k == 0 {
        return Ok(BigUint::one());
    }
    if n == 0 || k > n - 1 {
        return Err(Error::OutOfRange(format!("face dimension {k} for n = {n}")));
    }
    Ok(binomial(n - 1, k) * binomial(2 * n - k, n) / BigUint::from(n + 1))
}

/// [`assoc_faces`] extended by zero outside its range.
pub fn assoc_faces_or_zero(n: usize, k: usize) -> BigUint {
    assoc_faces(n, k).unwrap_or_else(|_| BigUint::zero())
}

#[derive(Debug, Clone, Default)]
pub struct EnumerateOptions {
    pub regular_only: bool,
    /// Keep only regular subdivisions of this face dimension.
    pub dimension: Option<usize>,
    pub triangulations_only: bool,
    /// Largest accepted configuration size; [`DEFAULT_LIMIT`] when `None`.
    pub limit: Option<usize>,
}

#[derive(Debug, Clone)]
pub struct ClassifiedSubdivision {
    pub subdivision: Subdivision,
    pub regular: bool,
    pub dimension: Option<usize>,
    pub witness: Option<HeightVector>,
}

fn check_size(config: &PointConfiguration, limit: Option<usize>) -> Result<()> {
    let limit = limit.unwrap_or(DEFAULT_LIMIT);
    if config.len() > limit {
        return Err(Error::SizeLimit { n: config.len(), limit });
    }
    if config.len() < 3 {
        return Err(Error::TooFewPoints { needed: 3, got: config.len() });
    }
    convex_hull(config)?;
    Ok(())
}

struct Search<'a> {
    t: &'a OrientTable,
    shapes: Vec<CellShape>,
    by_edge: HashMap<(usize, usize), Vec<usize>>,
    boundary: Vec<Vec<bool>>,
    compat: Vec<Vec<bool>>,
}

impl Search<'_> {
    fn open_edge(&self, chosen: &[usize]) -> Option<(usize, usize)> {
        let present: HashSet<(usize, usize)> =
            chosen.iter().flat_map(|&c| self.shapes[c].edges.iter().copied()).collect();
        present
            .iter()
            .copied()
            .filter(|&(u, v)| !self.boundary[u][v] && !present.contains(&(v, u)))
            .min()
    }

    fn extend(&self, chosen: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        let Some((u, v)) = self.open_edge(chosen) else {
            out.push(chosen.clone());
            return;
        };
        let Some(cands) = self.by_edge.get(&(v, u)) else { return };
        for &c in cands {
            if chosen.iter().all(|&d| self.compat[c][d]) {
                chosen.push(c);
                self.extend(chosen, out);
                chosen.pop();
            }
        }
    }
}

/// Every polyhedral subdivision, regular or not, in canonical order.
pub fn all_subdivisions(config: &PointConfiguration, limit: Option<usize>) -> Result<Vec<Subdivision>> {
    check_size(config, limit)?;
    let n = config.len();
    let t = OrientTable::new(config);
    let mut shapes = Vec::new();
    for mask in 0u32..(1 << n) {
        if mask.count_ones() < 3 {
            continue;
        }
        let members: Vec<usize> = (0..n).filter(|i| mask >> i & 1 == 1).collect();
        if let Some(s) = CellShape::new(&t, &members) {
            shapes.push(s);
        }
    }
    let mut by_edge: HashMap<(usize, usize), Vec<usize>> = HashMap::new();
    for (k, s) in shapes.iter().enumerate() {
        for &e in &s.edges {
            by_edge.entry(e).or_default().push(k);
        }
    }
    let boundary: Vec<Vec<bool>> =
        (0..n).map(|u| (0..n).map(|v| u != v && (0..n).all(|w| w == u || w == v || t.orient(u, v, w) >= 0)).collect()).collect();
    let compat: Vec<Vec<bool>> = (0..shapes.len())
        .into_par_iter()
        .map(|a| (0..shapes.len()).map(|b| a != b && compatibility(&t, &shapes[a], &shapes[b]) == Compat::Proper).collect())
        .collect();
    let search = Search { t: &t, shapes, by_edge, boundary, compat };

    // every subdivision has exactly one cell leaving the lowest point along the next hull edge
    let hull = convex_hull(config)?;
    let p0 = *hull.cycle.iter().min_by_key(|&&l| search.t.rank(l)).unwrap();
    let h1 = hull.next(p0);
    let first: Vec<usize> = (0..search.shapes.len())
        .filter(|&k| search.shapes[k].edges.iter().any(|&(u, v)| u == p0 && search.t.on_segment(p0, h1, v)))
        .collect();
    let hull_area = polygon_area2(&hull.cycle.iter().map(|&l| config.point(l)).collect::<Vec<_>>());
    let found: Vec<Vec<usize>> = first
        .par_iter()
        .flat_map_iter(|&c| {
            let mut out = Vec::new();
            search.extend(&mut vec![c], &mut out);
            out
        })
        .collect();
    let mut subs = Vec::with_capacity(found.len());
    for cells in found {
        let area = cells.iter().fold(Rational::zero(), |acc, &c| {
            acc + polygon_area2(&search.shapes[c].cycle.iter().map(|&l| config.point(l)).collect::<Vec<_>>())
        });
        if area != hull_area {
            return Err(Error::Internal("enumerated cells do not cover the hull".into()));
        }
        subs.push(Subdivision::new(
            cells.iter().map(|&c| Cell::new(search.shapes[c].members.clone())).collect(),
            n,
        ));
    }
    subs.sort();
    subs.dedup();
    Ok(subs)
}

/// All subdivisions with their regularity verdicts and face dimensions.
pub fn classify_all(config: &PointConfiguration, limit: Option<usize>) -> Result<Vec<ClassifiedSubdivision>> {
    let subs = all_subdivisions(config, limit)?;
    subs.into_par_iter()
        .map(|s| {
            let cert = is_regular(config, &s)?;
            let dimension = if cert.is_regular() {
                Some(config.len() - secondary_span_dimension(config, &s)?)
            } else {
                None
            };
            Ok(ClassifiedSubdivision { regular: cert.is_regular(), dimension, witness: cert.witness, subdivision: s })
        })
        .collect()
}

pub fn enumerate_subdivisions(config: &PointConfiguration, options: &EnumerateOptions) -> Result<Vec<Subdivision>> {
    let all = classify_all(config, options.limit)?;
    Ok(all
        .into_iter()
        .filter(|c| !options.regular_only || c.regular)
        .filter(|c| options.dimension.is_none() || c.dimension == options.dimension)
        .filter(|c| !options.triangulations_only || c.subdivision.is_triangulation())
        .map(|c| c.subdivision)
        .collect())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FaceCensus {
    pub n: usize,
    /// Regular subdivisions by face dimension `0..=n-3`.
    pub f_vector: Vec<BigUint>,
    pub total: BigUint,
    pub non_regular: BigUint,
    pub apex: Option<usize>,
    /// Regular subdivisions by link signature from the apex.
    pub per_signature: BTreeMap<Signature, BigUint>,
}

pub fn face_census(config: &PointConfiguration, apex: Option<usize>, limit: Option<usize>) -> Result<FaceCensus> {
    let all = classify_all(config, limit)?;
    census_from(config, &all, apex)
}

fn census_from(config: &PointConfiguration, all: &[ClassifiedSubdivision], apex: Option<usize>) -> Result<FaceCensus> {
    let n = config.len();
    let mut f = vec![BigUint::zero(); n - 2];
    let mut non_regular = BigUint::zero();
    let mut per_signature = BTreeMap::new();
    for c in all {
        match c.dimension {
            Some(d) => f[d] += 1u32,
            None => non_regular += 1u32,
        }
        if let (Some(a), true) = (apex, c.regular) {
            let s = link_signature(config, a, &c.subdivision)?;
            *per_signature.entry(s).or_insert_with(BigUint::zero) += 1u32;
        }
    }
    let total = f.iter().sum();
    Ok(FaceCensus { n, f_vector: f, total, non_regular, apex, per_signature })
}

/// Face numbers of the secondary polytope of the convex `n`-gon.
pub fn assoc_f_vector(n: usize) -> Vec<BigUint> {
    (0..n.saturating_sub(2)).map(|k| assoc_faces_or_zero(n - 2, k)).collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MainTheoremReport {
    pub census: FaceCensus,
    pub assoc_f_vector: Vec<BigUint>,
    pub margins: Vec<BigInt>,
    pub holds: bool,
}

pub fn verify_main_theorem(config: &PointConfiguration, limit: Option<usize>) -> Result<MainTheoremReport> {
    if !in_general_position(config) {
        return Err(Error::GeneralPositionRequired);
    }
    let census = face_census(config, None, limit)?;
    Ok(main_report(census))
}

pub(crate) fn main_report(census: FaceCensus) -> MainTheoremReport {
    let assoc = assoc_f_vector(census.n);
    let margins: Vec<BigInt> =
        census.f_vector.iter().zip(&assoc).map(|(f, a)| BigInt::from(f.clone()) - BigInt::from(a.clone())).collect();
    let holds = margins.iter().all(|m| *m >= BigInt::zero());
    MainTheoremReport { census, assoc_f_vector: assoc, margins, holds }
}

/// Extended signature of a regular subdivision when it is well formed.
pub fn well_formed_signature(
    config: &PointConfiguration,
    apex: usize,
    sub: &Subdivision,
    dimension: usize,
) -> Result<Option<(Signature, Vec<usize>)>> {
    let f = Frame::new(config, apex)?;
    let sigma = link_signature(config, apex, sub)?;
    let star = f.extended_star(&sigma)?;
    let mut delta = Vec::new();
    for cell in &star.cells_below {
        let Some(ti) = restrict_to_cell(config, sub, cell) else {
            return Ok(None);
        };
        delta.push(face_dimension(&config.restrict(&cell.members), &ti)?);
    }
    let well = dimension == sigma.zeros() + delta.iter().sum::<usize>();
    Ok(well.then_some((sigma, delta)))
}

/// A well-formed subdivision with extended signature `(sigma, delta)`, using
/// on each cell below the polyline the first regular subdivision of face
/// dimension `delta_i` in canonical order.
pub fn well_formed_example(config: &PointConfiguration, apex: usize, sigma: &Signature, delta: &[usize]) -> Result<Subdivision> {
    let star = Frame::new(config, apex)?.extended_star(sigma)?;
    if star.cells_below.len() != delta.len() {
        return Err(Error::InvalidDelta(format!("expected {} entries, got {}", star.cells_below.len(), delta.len())));
    }
    let mut pieces = Vec::new();
    for (cell, &d) in star.cells_below.iter().zip(delta) {
        let options = EnumerateOptions { regular_only: true, dimension: Some(d), ..Default::default() };
        let found = enumerate_subdivisions(&cell_configuration(config, cell), &options)?;
        let first = found
            .into_iter()
            .next()
            .ok_or_else(|| Error::InvalidDelta(format!("no regular subdivision of dimension {d} on cell {:?}", cell.members)))?;
        pieces.push(first);
    }
    build_well_formed(config, apex, sigma, delta, &pieces)
}

/// All dimension vectors `δ` with `δ_i < lengths_i`.
pub fn valid_deltas(lengths: &[usize]) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for &m in lengths {
        out = out
            .into_iter()
            .flat_map(|v: Vec<usize>| {
                (0..m).map(move |d| {
                    let mut w = v.clone();
                    w.push(d);
                    w
                })
            })
            .collect();
    }
    out
}

/// `Σ Π C_{m_j}^{γ_j}` over all `γ` summing to `d`.
pub fn face_convolution(ms: &[usize], d: usize) -> BigUint {
    let mut acc = vec![BigUint::zero(); d + 1];
    acc[0] = BigUint::one();
    for &m in ms {
        let mut next = vec![BigUint::zero(); d + 1];
        for (s, a) in acc.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for g in 0..=d - s {
                let c = assoc_faces_or_zero(m, g);
                if !c.is_zero() {
                    next[s + g] += a * c;
                }
            }
        }
        acc = next;
    }
    acc[d].clone()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StratumRow {
    pub sigma: Signature,
    pub delta: Vec<usize>,
    /// Well-formed regular subdivisions with this extended signature.
    pub count: BigUint,
    pub lower_bound: BigUint,
    /// Subdivisions of the radially convexified configuration whose extended signature maps to this one.
    pub convex_count: BigUint,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SignatureRow {
    pub sigma: Signature,
    pub count: BigUint,
    pub convex_count: BigUint,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StratifiedReport {
    pub apex: usize,
    pub strata: Vec<StratumRow>,
    pub signatures: Vec<SignatureRow>,
    pub holds: bool,
}

/// Groups the negative runs of `sigma` (its intervals in convex position)
/// by the negative intervals of the configuration they fall in.
fn grouped_runs(frame: &Frame, sigma: &Signature) -> Result<Vec<Vec<usize>>> {
    let star = frame.extended_star(sigma)?;
    let runs = negative_runs(sigma);
    let mut positions = Vec::new();
    let mut cur: Option<(usize, usize)> = None;
    for (k, &e) in sigma.entries.iter().enumerate() {
        if e < 0 {
            cur = Some(cur.map_or((k + 1, k + 1), |(s, _)| (s, k + 1)));
        } else if let Some(r) = cur.take() {
            positions.push(r);
        }
    }
    positions.extend(cur);
    let mut groups = vec![Vec::new(); star.intervals.len()];
    for (r, &(s, e)) in runs.iter().zip(&positions) {
        let g = star
            .intervals
            .iter()
            .position(|iv| iv.negatives.contains(&s) && iv.negatives.contains(&e))
            .ok_or_else(|| Error::Internal(format!("negative run of {sigma} straddles two intervals")))?;
        groups[g].push(*r);
    }
    Ok(groups)
}

pub fn stratified_comparison(config: &PointConfiguration, apex: usize, limit: Option<usize>) -> Result<StratifiedReport> {
    let limit = Some(limit.unwrap_or(DEFAULT_STRATIFIED_LIMIT));
    check_size(config, limit)?;
    let frame = Frame::new(config, apex)?;
    let all = classify_all(config, limit)?;
    let convex = radial_convexification(config, apex)?;
    let convex_frame = Frame::new(&convex, apex)?;

    let classified: Vec<Option<(Signature, Vec<usize>)>> = all
        .par_iter()
        .filter(|c| c.regular)
        .map(|c| well_formed_signature(config, apex, &c.subdivision, c.dimension.unwrap()))
        .collect::<Result<_>>()?;
    let mut counts: HashMap<(Signature, Vec<usize>), BigUint> = HashMap::new();
    for key in classified.into_iter().flatten() {
        *counts.entry(key).or_insert_with(BigUint::zero) += 1u32;
    }
    let mut by_sigma: HashMap<Signature, BigUint> = HashMap::new();
    for c in all.iter().filter(|c| c.regular) {
        *by_sigma.entry(link_signature(config, apex, &c.subdivision)?).or_insert_with(BigUint::zero) += 1u32;
    }

    let mut strata = Vec::new();
    let mut signatures = Vec::new();
    let mut holds = true;
    for sigma in Signature::all(apex, frame.m()) {
        let star = frame.extended_star(&sigma)?;
        let lengths: Vec<usize> = star.intervals.iter().map(|iv| iv.length()).collect();
        let groups = grouped_runs(&frame, &sigma)?;
        // the convexified configuration must see exactly the runs of sigma
        let convex_lengths: Vec<usize> =
            convex_frame.extended_star(&sigma)?.intervals.iter().map(|iv| iv.length()).collect();
        if convex_lengths != negative_runs(&sigma) {
            return Err(Error::Internal("convexified intervals differ from negative runs".into()));
        }
        for delta in valid_deltas(&lengths) {
            let count = counts.get(&(sigma.clone(), delta.clone())).cloned().unwrap_or_default();
            let lower_bound: BigUint = lengths.iter().zip(&delta).map(|(&m, &d)| assoc_faces_or_zero(m, d)).product();
            let convex_count: BigUint = groups.iter().zip(&delta).map(|(g, &d)| face_convolution(g, d)).product();
            holds &= count >= lower_bound && lower_bound >= convex_count;
            strata.push(StratumRow { sigma: sigma.clone(), delta, count, lower_bound, convex_count });
        }
        let count = by_sigma.get(&sigma).cloned().unwrap_or_default();
        let convex_count: BigUint = negative_runs(&sigma)
            .iter()
            .map(|&m| (0..m).map(|k| assoc_faces_or_zero(m, k)).sum::<BigUint>())
            .product();
        holds &= count >= convex_count;
        signatures.push(SignatureRow { sigma, count, convex_count });
    }
    Ok(StratifiedReport { apex, strata, signatures, holds })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CatalanReport {
    pub product: BigUint,
    pub catalan_of_sum: BigUint,
    pub convolution: BigUint,
    pub faces_of_sum: BigUint,
    pub holds: bool,
}

/// Evaluates `Π C_{m_i} ≤ C_{Σ m_i}` and `Σ_{d_1+…=d} Π C_{m_i}^{d_i} ≤ C_{Σ m_i}^d`.
pub fn catalan_inequalities(ms: &[usize], d: usize) -> CatalanReport {
    let sum: usize = ms.iter().sum();
    let product: BigUint = ms.iter().map(|&m| catalan(m)).product();
    let catalan_of_sum = catalan(sum);
    let convolution = face_convolution(ms, d);
    let faces_of_sum = assoc_faces_or_zero(sum, d);
    let holds = product <= catalan_of_sum && convolution <= faces_of_sum;
    CatalanReport { product, catalan_of_sum, convolution, faces_of_sum, holds }
}
