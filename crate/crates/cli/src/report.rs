//! Command execution and report rendering.

use std::fmt::Write as _;

use num_bigint::BigUint;
use secpoly::census::{
    assoc_f_vector, assoc_faces, assoc_faces_or_zero, catalan_inequalities, enumerate_subdivisions, face_census,
    stratified_comparison, verify_main_theorem, well_formed_example, EnumerateOptions,
};
use secpoly::gale::{
    arc_crossings, chamber_count, duality_check, gale_dual, hill_number, two_circle_vectors, CrossingReport,
    GenericityViolation, SphericalVectors,
};
use secpoly::rational::format_rational;
use secpoly::signature::{complete_extended_star, extended_star, link_signature, negative_runs, Signature};
use secpoly::{
    angular_order, face_dimension, in_general_position, lift_subdivision, Cell, Error, HeightVector, Rational, Result,
    Subdivision,
};
use serde_json::{json, Map, Value};

use crate::input::{parse_csv, parse_heights, parse_planar, parse_points, parse_subdivision};
use crate::Command;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    Fail,
    NotApplicable,
}

impl Verdict {
    fn from_bool(ok: bool) -> Self {
        if ok {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }

    fn as_str(self) -> &'static str {
        match self {
            Verdict::Pass => "PASS",
            Verdict::Fail => "FAIL",
            Verdict::NotApplicable => "N/A",
        }
    }
}

pub struct Outcome {
    pub json: Value,
    pub text: String,
    pub verdict: Option<Verdict>,
}

fn count(x: &BigUint) -> Value {
    u64::try_from(x).map(Value::from).unwrap_or_else(|_| Value::from(x.to_string()))
}

fn counts(xs: &[BigUint]) -> Value {
    Value::Array(xs.iter().map(count).collect())
}

fn joined<T: ToString>(xs: &[T]) -> String {
    xs.iter().map(ToString::to_string).collect::<Vec<_>>().join(" ")
}

fn rationals(xs: &[Rational]) -> Value {
    Value::Array(xs.iter().map(|x| Value::from(format_rational(x))).collect())
}

fn cell_json(c: &Cell) -> Value {
    json!(c.members)
}

fn subdivision_json(s: &Subdivision) -> Value {
    json!({ "cells": s.cells.iter().map(cell_json).collect::<Vec<_>>(), "unused": s.unused })
}

fn subdivision_text(s: &Subdivision) -> String {
    let mut t = String::new();
    for c in &s.cells {
        let _ = writeln!(t, "  cell {{{}}}", joined(&c.members));
    }
    if !s.unused.is_empty() {
        let _ = writeln!(t, "  unused {{{}}}", joined(&s.unused));
    }
    t
}

fn heights_json(h: &HeightVector) -> Value {
    Value::Array(h.levels().iter().map(|l| rationals(l)).collect())
}

fn with_verdict(mut json: Value, verdict: Verdict) -> Value {
    json["verdict"] = Value::from(verdict.as_str());
    json
}

fn signature_convex_count(sigma: &Signature) -> BigUint {
    negative_runs(sigma).iter().map(|&m| (0..m).map(|k| assoc_faces_or_zero(m, k)).sum::<BigUint>()).product()
}

pub fn run(command: &Command, limit: Option<usize>) -> Result<Outcome> {
    match command {
        Command::Census { points, apex, regular_only, dim } => census(&parse_planar(points)?, *apex, *regular_only, *dim, limit),
        Command::Lift { points, heights } => {
            let config = parse_planar(points)?;
            let h = parse_heights(heights, config.len())?;
            let sub = lift_subdivision(&config, &h)?;
            let text = format!("{} cells\n{}", sub.cells.len(), subdivision_text(&sub));
            Ok(Outcome { json: json!({ "subdivision": subdivision_json(&sub) }), text, verdict: None })
        }
        Command::Signature { points, subdivision, apex } => {
            let config = parse_planar(points)?;
            let sub = parse_subdivision(subdivision, &config)?;
            let s = link_signature(&config, *apex, &sub)?;
            Ok(Outcome { json: json!({ "apex": apex, "signature": s.to_string() }), text: format!("{s}\n"), verdict: None })
        }
        Command::Star { points, apex, sigma } => {
            let config = parse_planar(points)?;
            let sigma = Signature::parse(*apex, sigma)?;
            let star = extended_star(&config, *apex, &sigma)?;
            let order = angular_order(&config, *apex)?.order;
            let polyline: Vec<usize> = star.polyline.indices.iter().map(|&i| order[i]).collect();
            let intervals: Vec<Value> = star
                .intervals
                .iter()
                .map(|iv| json!({ "points": iv.indices().iter().map(|&i| order[i]).collect::<Vec<_>>(), "length": iv.length() }))
                .collect();
            let json = json!({
                "polyline": polyline,
                "cells_above": star.cells_above.iter().map(cell_json).collect::<Vec<_>>(),
                "cells_below": star.cells_below.iter().map(cell_json).collect::<Vec<_>>(),
                "intervals": intervals,
            });
            let mut text = format!("polyline {}\nabove\n", joined(&polyline));
            text += &subdivision_text(&Subdivision { cells: star.cells_above.clone(), unused: vec![] });
            text += "below\n";
            text += &subdivision_text(&Subdivision { cells: star.cells_below.clone(), unused: vec![] });
            Ok(Outcome { json, text, verdict: None })
        }
        Command::CompleteStar { points, apex, sigma } => {
            let config = parse_planar(points)?;
            let sigma = Signature::parse(*apex, sigma)?;
            let (h, sub) = complete_extended_star(&config, *apex, &sigma)?;
            let mut text = String::new();
            for (k, level) in h.levels().iter().enumerate() {
                let _ = writeln!(text, "level {k}: {}", level.iter().map(format_rational).collect::<Vec<_>>().join(" "));
            }
            text += &subdivision_text(&sub);
            Ok(Outcome { json: json!({ "heights": heights_json(&h), "subdivision": subdivision_json(&sub) }), text, verdict: None })
        }
        Command::WellFormed { points, apex, sigma, delta } => {
            let config = parse_planar(points)?;
            let sigma = Signature::parse(*apex, sigma)?;
            let delta = parse_csv(delta)?;
            let sub = well_formed_example(&config, *apex, &sigma, &delta)?;
            let dim = face_dimension(&config, &sub)?;
            let expected = sigma.zeros() + delta.iter().sum::<usize>();
            let verdict = Verdict::from_bool(dim == expected);
            let json = with_verdict(
                json!({ "subdivision": subdivision_json(&sub), "face_dimension": dim, "expected_dimension": expected }),
                verdict,
            );
            let text = format!("face dimension {dim} (expected {expected}): {}\n{}", verdict.as_str(), subdivision_text(&sub));
            Ok(Outcome { json, text, verdict: Some(verdict) })
        }
        Command::VerifyMain { points } => verify_main(&parse_planar(points)?, limit),
        Command::Stratify { points, apex } => stratify(&parse_planar(points)?, *apex, limit),
        Command::Assoc { n, dim } => {
            let faces: Vec<BigUint> = match dim {
                Some(k) => vec![assoc_faces(*n, *k)?],
                None => assoc_f_vector(n + 2),
            };
            let json = match dim {
                Some(k) => json!({ "n": n, "dim": k, "faces": count(&faces[0]) }),
                None => json!({ "n": n, "faces": counts(&faces) }),
            };
            Ok(Outcome { json, text: format!("{}\n", joined(&faces)), verdict: None })
        }
        Command::Catalan { parts, dim } => {
            let ms = parse_csv(parts)?;
            let r = catalan_inequalities(&ms, *dim);
            let verdict = Verdict::from_bool(r.holds);
            let json = with_verdict(
                json!({
                    "parts": ms,
                    "dim": dim,
                    "product": count(&r.product),
                    "catalan_of_sum": count(&r.catalan_of_sum),
                    "convolution": count(&r.convolution),
                    "faces_of_sum": count(&r.faces_of_sum),
                }),
                verdict,
            );
            let text = format!(
                "product {} <= {}\nconvolution {} <= {}\n{}\n",
                r.product,
                r.catalan_of_sum,
                r.convolution,
                r.faces_of_sum,
                verdict.as_str()
            );
            Ok(Outcome { json, text, verdict: Some(verdict) })
        }
        Command::Gale { points, perturb } => {
            let mut config = parse_points(points)?;
            if *perturb {
                config = config.perturbed(1)?;
            }
            let vs = gale_dual(&config)?;
            let report = arc_crossings(&vs)?;
            Ok(sphere_outcome(&vs, &report, None))
        }
        Command::TwoCircle { n } => {
            let vs = two_circle_vectors(*n)?;
            let report = arc_crossings(&vs)?;
            let z = hill_number(*n);
            Ok(sphere_outcome(&vs, &report, Some(z)))
        }
        Command::Hill { n } => {
            let z = hill_number(*n);
            Ok(Outcome { json: json!({ "n": n, "z": count(&z) }), text: format!("{z}\n"), verdict: None })
        }
        Command::Duality { points, perturb } => {
            let mut config = parse_points(points)?;
            if *perturb {
                config = config.perturbed(1)?;
            }
            let r = duality_check(&config)?;
            let verdict = Verdict::from_bool(r.matches);
            let json = with_verdict(
                json!({
                    "n": r.n,
                    "d": r.d,
                    "crossings": r.crossings.c,
                    "generic": r.crossings.generic,
                    "chambers": r.chambers,
                    "triangulations": r.triangulations,
                }),
                verdict,
            );
            let text = format!(
                "chambers {} (crossings {}, generic {})\nregular triangulations {}\n{}\n",
                r.chambers,
                r.crossings.c,
                r.crossings.generic,
                r.triangulations,
                verdict.as_str()
            );
            Ok(Outcome { json, text, verdict: Some(verdict) })
        }
    }
}

fn violation_text(v: &GenericityViolation) -> String {
    match v {
        GenericityViolation::CoincidentPair(i, j) => format!("coincident {i} {j}"),
        GenericityViolation::CoplanarTriple(i, j, k) => format!("coplanar {i} {j} {k}"),
        GenericityViolation::MultipleCrossing(arcs) => {
            format!("multiple crossing {}", arcs.iter().map(|(a, b)| format!("{a}-{b}")).collect::<Vec<_>>().join(" "))
        }
    }
}

fn sphere_outcome(vs: &SphericalVectors, report: &CrossingReport, hill: Option<BigUint>) -> Outcome {
    let vectors: Vec<Value> = vs.vectors().iter().map(|v| rationals(v)).collect();
    let chambers = if report.generic { chamber_count(vs).ok().map(|c| c.formula) } else { None };
    let mut json = json!({
        "vectors": vectors,
        "crossings": report.c,
        "generic": report.generic,
        "violations": report.violations.iter().map(violation_text).collect::<Vec<_>>(),
        "chambers": chambers,
        "euler_faces": report.euler_faces,
    });
    let mut text = format!("{} vectors, {} crossings, generic {}\n", vs.len(), report.c, report.generic);
    if let Some(c) = chambers {
        let _ = writeln!(text, "chambers {c}");
    }
    for v in &report.violations {
        let _ = writeln!(text, "violation: {}", violation_text(v));
    }
    let mut verdict = None;
    if let Some(z) = hill {
        let v = Verdict::from_bool(BigUint::from(report.c) == z);
        json["hill"] = count(&z);
        json = with_verdict(json, v);
        let _ = writeln!(text, "Z(n) = {z}: {}", v.as_str());
        verdict = Some(v);
    }
    Outcome { json, text, verdict }
}

fn census(
    config: &secpoly::PointConfiguration,
    apex: Option<usize>,
    regular_only: bool,
    dim: Option<usize>,
    limit: Option<usize>,
) -> Result<Outcome> {
    let f = face_census(config, apex, limit)?;
    let assoc = assoc_f_vector(config.len());
    let verdict = if in_general_position(config) {
        Verdict::from_bool(f.f_vector.iter().zip(&assoc).all(|(a, b)| a >= b))
    } else {
        Verdict::NotApplicable
    };
    let mut per_signature = Map::new();
    let mut text = format!(
        "n = {}\nf-vector {}\nassociahedron {}\nnon-regular {}\n",
        f.n,
        joined(&f.f_vector),
        joined(&assoc),
        f.non_regular
    );
    if let Some(a) = apex {
        for sigma in Signature::all(a, config.len() - 3) {
            let c = f.per_signature.get(&sigma).cloned().unwrap_or_default();
            let convex = signature_convex_count(&sigma);
            let _ = writeln!(text, "  {sigma}: {c} (convex {convex})");
            per_signature.insert(sigma.to_string(), json!({ "count": count(&c), "convex_count": count(&convex) }));
        }
    }
    let mut json = json!({
        "n": f.n,
        "f_vector": counts(&f.f_vector),
        "assoc_f_vector": counts(&assoc),
        "per_signature": per_signature,
    });
    if regular_only || dim.is_some() {
        let options = EnumerateOptions { regular_only: true, dimension: dim, limit, ..Default::default() };
        let subs = enumerate_subdivisions(config, &options)?;
        for s in &subs {
            let _ = writeln!(text, "subdivision\n{}", subdivision_text(s));
        }
        json["subdivisions"] = Value::Array(subs.iter().map(subdivision_json).collect());
    }
    let _ = writeln!(text, "{}", verdict.as_str());
    Ok(Outcome { json: with_verdict(json, verdict), text, verdict: Some(verdict) })
}

fn verify_main(config: &secpoly::PointConfiguration, limit: Option<usize>) -> Result<Outcome> {
    if !in_general_position(config) {
        let v = Verdict::NotApplicable;
        let text = "configuration is not in general position\nN/A\n".to_string();
        return Ok(Outcome { json: with_verdict(json!({ "n": config.len() }), v), text, verdict: Some(v) });
    }
    let r = verify_main_theorem(config, limit)?;
    let verdict = Verdict::from_bool(r.holds);
    let margins: Vec<String> = r.margins.iter().map(ToString::to_string).collect();
    let json = with_verdict(
        json!({
            "n": r.census.n,
            "f_vector": counts(&r.census.f_vector),
            "assoc_f_vector": counts(&r.assoc_f_vector),
            "margins": r.margins.iter().map(|m| i64::try_from(m).map(Value::from).unwrap_or_else(|_| Value::from(m.to_string()))).collect::<Vec<_>>(),
        }),
        verdict,
    );
    let text = format!(
        "f-vector {}\nassociahedron {}\nmargins {}\n{}\n",
        joined(&r.census.f_vector),
        joined(&r.assoc_f_vector),
        margins.join(" "),
        verdict.as_str()
    );
    Ok(Outcome { json, text, verdict: Some(verdict) })
}

fn stratify(config: &secpoly::PointConfiguration, apex: usize, limit: Option<usize>) -> Result<Outcome> {
    if !in_general_position(config) {
        return Err(Error::GeneralPositionRequired);
    }
    let r = stratified_comparison(config, apex, limit)?;
    let verdict = Verdict::from_bool(r.holds);
    let mut text = String::new();
    let strata: Vec<Value> = r
        .strata
        .iter()
        .map(|s| {
            let delta: Vec<String> = s.delta.iter().map(ToString::to_string).collect();
            let _ = writeln!(
                text,
                "{} ({}): {} >= {} >= {}",
                s.sigma,
                delta.join(","),
                s.count,
                s.lower_bound,
                s.convex_count
            );
            json!({
                "sigma": s.sigma.to_string(),
                "delta": s.delta,
                "count": count(&s.count),
                "lower_bound": count(&s.lower_bound),
                "convex_count": count(&s.convex_count),
            })
        })
        .collect();
    let signatures: Vec<Value> = r
        .signatures
        .iter()
        .map(|s| json!({ "sigma": s.sigma.to_string(), "count": count(&s.count), "convex_count": count(&s.convex_count) }))
        .collect();
    let _ = writeln!(text, "{}", verdict.as_str());
    let json = with_verdict(json!({ "apex": apex, "strata": strata, "signatures": signatures }), verdict);
    Ok(Outcome { json, text, verdict: Some(verdict) })
}
