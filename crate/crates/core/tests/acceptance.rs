//! End-to-end acceptance criteria. Runs without the libtest harness and
//! prints one PASS/FAIL line per criterion.

mod common;

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use num_bigint::BigUint;
use secpoly::census::{
    assoc_faces_or_zero, catalan_inequalities, enumerate_subdivisions, face_census,
    stratified_comparison, valid_deltas, verify_main_theorem, EnumerateOptions,
};
use secpoly::gale::{
    arc_crossings, chamber_count, duality_check, hill_number, moment_curve, two_circle_vectors,
    HighDimConfiguration, SphericalVectors,
};
use secpoly::rational::int;
use secpoly::signature::{
    build_well_formed, cell_configuration, complete_extended_star, extended_star, link_signature,
    polyline_of_signature, polyline_signature, Polyline, Signature,
};
use secpoly::{
    convex_hull, face_dimension, lift_subdivision, refine_with, refines, signature::restrict_to_cell,
    PointConfiguration, Rational,
};

use common::*;

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn big(v: &[u64]) -> Vec<BigUint> {
    v.iter().map(|&x| BigUint::from(x)).collect()
}

fn err<E: std::fmt::Debug>(e: E) -> String {
    format!("{e:?}")
}

fn hexagon_census() -> Outcome {
    let f = face_census(&hex6(), None, None).map_err(err)?;
    ensure(f.f_vector == big(&[14, 21, 9, 1]), || format!("f-vector {:?}", f.f_vector))?;
    ensure(f.non_regular == BigUint::from(0u32), || "non-regular subdivisions of a hexagon".into())?;
    Ok(format!("f = {:?}", f.f_vector))
}

fn convex_sweep() -> Outcome {
    let mut notes = Vec::new();
    for n in 5..=8 {
        let f = face_census(&convex_ngon(n), None, None).map_err(err)?;
        let expected: Vec<BigUint> = (0..n - 2).map(|k| assoc_faces_or_zero(n - 2, k)).collect();
        ensure(f.f_vector == expected, || format!("n = {n}: {:?} vs {:?}", f.f_vector, expected))?;
        notes.push(format!("n={n} {:?}", f.f_vector));
    }
    Ok(notes.join("; "))
}

fn mother_of_all_examples() -> Outcome {
    let r = verify_main_theorem(&moae6(), None).map_err(err)?;
    let f = &r.census.f_vector;
    ensure(f[2] == BigUint::from(10u32), || format!("f_2 = {}", f[2]))?;
    ensure(r.holds, || format!("f = {f:?} below {:?}", r.assoc_f_vector))?;
    Ok(format!("f = {f:?}, non-regular = {}", r.census.non_regular))
}

fn main_theorem_suite() -> Outcome {
    let mut rng = rng(4);
    for k in 0..50 {
        let n = if k % 2 == 0 { 6 } else { 7 };
        let c = random_config(&mut rng, n);
        let r = verify_main_theorem(&c, None).map_err(err)?;
        ensure(r.holds, || format!("instance {k}: f = {:?}, margins {:?}", r.census.f_vector, r.margins))?;
    }
    Ok("50 configurations".into())
}

fn signature_bijection() -> Outcome {
    let mut rng = rng(5);
    for k in 0..20 {
        let n = 6 + k % 3;
        let c = random_config(&mut rng, n);
        for &apex in &convex_hull(&c).map_err(err)?.cycle {
            let mut seen = BTreeSet::new();
            for mask in 0u32..(1 << (n - 3)) {
                let mut indices = vec![0];
                indices.extend((1..=n - 3).filter(|i| mask >> (i - 1) & 1 == 1));
                indices.push(n - 2);
                let line = Polyline { indices };
                let s = polyline_signature(&c, apex, &line).map_err(err)?;
                ensure(s.entries.iter().all(|&e| e == 1 || e == -1), || format!("signature {s} has zeros"))?;
                let back = polyline_of_signature(&c, apex, &s).map_err(err)?;
                ensure(back == line, || format!("instance {k}: {s} inverts to {back:?}, not {line:?}"))?;
                seen.insert(s);
            }
            ensure(seen.len() == 1 << (n - 3), || format!("instance {k}: only {} signatures", seen.len()))?;
        }
    }
    Ok("20 configurations, every apex".into())
}

fn completion_configs() -> Vec<PointConfiguration> {
    let mut rng = rng(6);
    (0..10).map(|k| random_config(&mut rng, 6 + k % 2)).collect()
}

fn first_apex(c: &PointConfiguration) -> usize {
    convex_hull(c).unwrap().cycle[0]
}

fn extended_star_completion() -> Outcome {
    let mut checked = 0;
    for (k, c) in completion_configs().iter().enumerate() {
        let apex = first_apex(c);
        for sigma in Signature::all(apex, c.len() - 3) {
            let star = extended_star(c, apex, &sigma).map_err(err)?;
            let (heights, _) = complete_extended_star(c, apex, &sigma).map_err(err)?;
            let lifted = lift_subdivision(c, &heights).map_err(err)?;
            for cell in star.cells() {
                ensure(lifted.contains_cell(cell), || format!("instance {k}, {sigma}: cell {:?} missing", cell.members))?;
            }
            checked += 1;
        }
    }
    Ok(format!("{checked} signatures"))
}

fn well_formed_dimension() -> Outcome {
    let mut checked = 0;
    for (k, c) in completion_configs().iter().enumerate() {
        let apex = first_apex(c);
        for sigma in Signature::all(apex, c.len() - 3) {
            let star = extended_star(c, apex, &sigma).map_err(err)?;
            let lengths: Vec<usize> = star.intervals.iter().map(|iv| iv.length()).collect();
            let per_cell: Vec<Vec<_>> = star
                .cells_below
                .iter()
                .map(|cell| {
                    let options = EnumerateOptions { regular_only: true, ..Default::default() };
                    let cfg = cell_configuration(c, cell);
                    enumerate_subdivisions(&cfg, &options)
                        .map(|subs| subs.into_iter().map(|s| (face_dimension(&cfg, &s).unwrap(), s)).collect())
                })
                .collect::<Result<_, _>>()
                .map_err(err)?;
            for delta in valid_deltas(&lengths) {
                let pieces: Vec<_> = per_cell
                    .iter()
                    .zip(&delta)
                    .map(|(subs, &d)| subs.iter().find(|(dim, _)| *dim == d).map(|(_, s)| s.clone()))
                    .collect::<Option<_>>()
                    .ok_or_else(|| format!("instance {k}, {sigma}: no cell subdivision for {delta:?}"))?;
                let t = build_well_formed(c, apex, &sigma, &delta, &pieces).map_err(err)?;
                let dim = face_dimension(c, &t).map_err(err)?;
                let expected = sigma.zeros() + delta.iter().sum::<usize>();
                ensure(dim == expected, || format!("instance {k}, {sigma}, {delta:?}: dimension {dim}, expected {expected}"))?;
                ensure(link_signature(c, apex, &t).map_err(err)? == sigma, || format!("instance {k}: signature changed"))?;
                checked += 1;
            }
        }
    }
    Ok(format!("{checked} extended signatures"))
}

fn stratified_domination() -> Outcome {
    let mut rng = rng(8);
    let mut configs = vec![moae6()];
    configs.extend((0..4).map(|_| random_config(&mut rng, 6)));
    configs.extend((0..3).map(|_| random_config(&mut rng, 7)));
    let mut strata = 0;
    for (k, c) in configs.iter().enumerate() {
        let apex = first_apex(c);
        let r = stratified_comparison(c, apex, None).map_err(err)?;
        for row in &r.strata {
            ensure(row.count >= row.lower_bound && row.lower_bound >= row.convex_count, || {
                format!("instance {k}: {} {:?}: {} / {} / {}", row.sigma, row.delta, row.count, row.lower_bound, row.convex_count)
            })?;
        }
        ensure(r.holds, || format!("instance {k}: per-signature totals fail"))?;
        strata += r.strata.len();
    }
    Ok(format!("{} configurations, {strata} strata", configs.len()))
}

fn degenerate_fan() -> Outcome {
    let c = fan6();
    let all = EnumerateOptions { triangulations_only: true, ..Default::default() };
    let total = enumerate_subdivisions(&c, &all).map_err(err)?.len();
    let regular = EnumerateOptions { triangulations_only: true, regular_only: true, ..Default::default() };
    let reg = enumerate_subdivisions(&c, &regular).map_err(err)?.len();
    ensure(total == 8, || format!("{total} triangulations"))?;
    Ok(format!("{total} triangulations, {reg} regular"))
}

fn compositions(total: usize) -> Vec<Vec<usize>> {
    if total == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for first in 1..=total {
        for mut rest in compositions(total - first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

fn catalan_lemmas() -> Outcome {
    let mut count = 0;
    for total in 1..=10 {
        for ms in compositions(total) {
            for d in 0..=total {
                let r = catalan_inequalities(&ms, d);
                ensure(r.holds, || format!("{ms:?}, d = {d}: {r:?}"))?;
                count += 1;
            }
        }
    }
    Ok(format!("{count} tuples"))
}

fn hill_crossings() -> Outcome {
    let mut notes = Vec::new();
    for (n, z) in [(5u64, 1u64), (6, 3), (7, 9), (8, 18)] {
        let vs = two_circle_vectors(n as usize).map_err(err)?;
        let r = chamber_count(&vs).map_err(err)?;
        ensure(r.crossings.c == z && hill_number(n as usize) == BigUint::from(z), || format!("n = {n}: {} crossings", r.crossings.c))?;
        notes.push(format!("n={n} c={} t={}", r.crossings.c, r.formula));
    }
    let mut rng = rng(11);
    let mut generic = 0;
    for _ in 0..30 {
        use rand::Rng;
        let n = rng.gen_range(5..=8);
        let vectors: Vec<[Rational; 3]> =
            (0..n).map(|_| [int(rng.gen_range(-9..=9)), int(rng.gen_range(-9..=9)), int(rng.gen_range(-9..=9))]).collect();
        let Ok(vs) = SphericalVectors::new(vectors) else { continue };
        match arc_crossings(&vs) {
            Ok(r) if r.generic => {
                let t = chamber_count(&vs).map_err(err)?;
                ensure(t.formula == t.euler, || "formula differs from Euler count".into())?;
                generic += 1;
            }
            _ => {}
        }
    }
    notes.push(format!("{generic} random generic arrangements agree"));
    Ok(notes.join("; "))
}

fn duality() -> Outcome {
    let mut notes = Vec::new();
    for (name, c) in [("hex6", hex6()), ("moae6", moae6())] {
        let r = duality_check(&HighDimConfiguration::from_planar(&c)).map_err(err)?;
        ensure(r.matches, || format!("{name}: {} chambers, {} triangulations", r.chambers, r.triangulations))?;
        notes.push(format!("{name} {}={}", r.chambers, r.triangulations));
    }
    let params: Vec<Rational> = (1..=7).map(int).collect();
    let cyclic = moment_curve(7, 3, &params).map_err(err)?;
    let r = match duality_check(&cyclic) {
        Err(secpoly::Error::NotGeneric(_)) => duality_check(&cyclic.perturbed(1).map_err(err)?),
        other => other,
    }
    .map_err(err)?;
    ensure(r.triangulations == 25, || format!("enumerator found {} triangulations", r.triangulations))?;
    ensure(r.chambers == 25, || format!("{} chambers", r.chambers))?;
    notes.push(format!("cyclic(7,3) {}={}", r.chambers, r.triangulations));
    Ok(notes.join("; "))
}

fn refinement_lemma() -> Outcome {
    let mut rng = rng(13);
    for k in 0..100 {
        let n = 4 + k % 4;
        let c = random_config(&mut rng, n);
        let alpha = random_heights(&mut rng, n, 2);
        let omega = random_heights(&mut rng, n, 20);
        let s = lift_subdivision(&c, &alpha).map_err(err)?;
        let t = refine_with(&c, &alpha, &omega).map_err(err)?;
        ensure(refines(&t, &s), || format!("instance {k}: no refinement"))?;
        for cell in &s.cells {
            let restricted =
                restrict_to_cell(&c, &t, cell).ok_or_else(|| format!("instance {k}: restriction to {:?} invalid", cell.members))?;
            let cfg = cell_configuration(&c, cell);
            let w = secpoly::HeightVector::new(cell.members.iter().map(|&i| omega.primary()[i].clone()).collect());
            let direct = lift_subdivision(&cfg, &w).map_err(err)?;
            ensure(restricted == direct, || format!("instance {k}: cell {:?} restricts differently", cell.members))?;
        }
    }
    Ok("100 pairs".into())
}

fn main() {
    let criteria: [(&str, fn() -> Outcome, Duration); 13] = [
        ("hexagon census", hexagon_census, Duration::from_secs(10)),
        ("convex sweep n=5..8", convex_sweep, Duration::from_secs(300)),
        ("two concentric triangles", mother_of_all_examples, Duration::from_secs(60)),
        ("main theorem on 50 random configurations", main_theorem_suite, Duration::from_secs(1800)),
        ("signature bijection", signature_bijection, Duration::MAX),
        ("extended-star completion", extended_star_completion, Duration::MAX),
        ("well-formed dimension", well_formed_dimension, Duration::MAX),
        ("stratified domination", stratified_domination, Duration::MAX),
        ("collinear fan triangulations", degenerate_fan, Duration::MAX),
        ("Catalan inequalities", catalan_lemmas, Duration::MAX),
        ("two-circle crossings", hill_crossings, Duration::from_secs(60)),
        ("Gale duality", duality, Duration::from_secs(600)),
        ("regular refinement", refinement_lemma, Duration::MAX),
    ];
    let only: Option<usize> = std::env::args().nth(1).and_then(|a| a.parse().ok());
    let mut failures = 0;
    for (k, (name, run, limit)) in criteria.iter().enumerate() {
        if only.is_some_and(|o| o != k + 1) {
            continue;
        }
        let start = Instant::now();
        let outcome = run();
        let elapsed = start.elapsed();
        let outcome = match outcome {
            Ok(note) if elapsed > *limit => Err(format!("{note}; took {elapsed:.1?}, limit {limit:?}")),
            other => other,
        };
        match outcome {
            Ok(note) => println!("criterion {:>2} PASS {name} ({elapsed:.1?}): {note}", k + 1),
            Err(why) => {
                failures += 1;
                println!("criterion {:>2} FAIL {name} ({elapsed:.1?}): {why}", k + 1);
            }
        }
    }
    if failures > 0 {
        println!("{failures} criteria failed");
        std::process::exit(1);
    }
}
