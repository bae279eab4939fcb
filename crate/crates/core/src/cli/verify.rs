use serde_json::{json, Value};

use super::report::Status;
use crate::error::{Error, Result};
use crate::geometry::{LineId, Space};
use crate::groups::{affinity_generators, certify_plucker_group, Perm, Sampler};
use crate::maps::{
    check_isomorphism, count_constraint_search, edge_count_lemma, induced_line_map, is_isomorphism,
    plane_class_scramble, plane_order_criterion, plane_parallel_transposition, reconstruct_point_map,
    semicollineation_with, star_transport_violation, Collineation, CountSolution, LineMap, Mode, PlaneCounterexample,
};
use crate::pluecker::{
    classify_clique, is_maximal_related_set, nonstar_maximal_clique, CliqueKind, CliqueRecord, ConcurrenceGraph,
    QuotientSpace,
};

pub type Outcome = (Status, Value);

fn require_target_dim(space: &Space) -> Result<()> {
    if space.dim() < 3 {
        return Err(Error::Dimension { role: "target", needed: 3, got: space.dim() });
    }
    Ok(())
}

pub fn error_witness(e: &Error) -> Value {
    match e {
        Error::WellDefinedness { pair, point, reason } => json!({
            "error": e.kind(),
            "pair": [pair.0, pair.1],
            "point": point,
            "reason": reason,
        }),
        _ => json!({ "error": e.kind(), "message": e.to_string() }),
    }
}

fn generator_perms(space: &Space) -> Vec<Perm> {
    affinity_generators(space).into_iter().map(|g| g.points).collect()
}

/// Random affinities as generator words: induce the line map, reconstruct
/// the point map and compare.
pub fn theorem1(space: &Space, seed: u64, trials: usize) -> Result<Outcome> {
    require_target_dim(space)?;
    let gens = generator_perms(space);
    let mut sampler = Sampler::new(seed);
    let (mut isomorphisms, mut round_trips, mut transports) = (0, 0, 0);
    let mut failure = Value::Null;
    for trial in 0..trials {
        let k = sampler.random_word(space.point_count(), &gens);
        let col = Collineation::new(space, space, k.images().to_vec())?;
        let f = induced_line_map(&col);
        let iso = check_isomorphism(&f);
        let iso_ok = iso.via_related && iso.via_unrelated;
        let kappa = reconstruct_point_map(&f, Mode::Kappa);
        let round = matches!(&kappa, Ok(m) if m.table() == k.images());
        let transport = matches!(&kappa, Ok(m) if star_transport_violation(&f, m).is_none());
        isomorphisms += iso_ok as usize;
        round_trips += round as usize;
        transports += transport as usize;
        if !(iso_ok && round && transport) && failure.is_null() {
            failure = json!({
                "trial": trial,
                "points": k,
                "isomorphism": iso,
                "reconstruction": match &kappa {
                    Ok(m) => json!(m.table()),
                    Err(e) => error_witness(e),
                },
            });
        }
    }
    let pass = round_trips == trials && isomorphisms == trials && transports == trials;
    Ok((
        Status::from_bool(pass),
        json!({
            "trials": trials,
            "isomorphisms": isomorphisms,
            "round_trips": round_trips,
            "star_transport": transports,
            "generators": gens.len(),
            "first_failure": failure,
        }),
    ))
}

/// Even trials use induced maps of random affinities, odd trials the same
/// map with two random line images swapped. A trial is classified correctly
/// when the edge-count certificate, the direct isomorphism test and the
/// expectation agree, and genuine maps give back their affinity under the
/// one-directional reconstruction.
pub fn theorem2(space: &Space, seed: u64, trials: usize) -> Result<Outcome> {
    require_target_dim(space)?;
    let gens = generator_perms(space);
    let mut sampler = Sampler::new(seed);
    let lines = space.line_count();
    let (mut genuine_count, mut certified, mut rejected, mut correct) = (0, 0, 0, 0);
    let mut failure = Value::Null;
    for trial in 0..trials {
        let k = sampler.random_word(space.point_count(), &gens);
        let col = Collineation::new(space, space, k.images().to_vec())?;
        let induced = induced_line_map(&col);
        let genuine = trial % 2 == 0;
        let (f, swapped) = if genuine {
            (induced, None)
        } else {
            let a = sampler.below(lines);
            let mut b = sampler.below(lines - 1);
            if b >= a {
                b += 1;
            }
            let mut table = induced.table().to_vec();
            table.swap(a, b);
            (LineMap::new(space, space, table)?, Some([a as LineId, b as LineId]))
        };
        let lemma = edge_count_lemma(&f);
        let iso = is_isomorphism(&f);
        let lambda = reconstruct_point_map(&f, Mode::Lambda);
        let recovered = matches!(&lambda, Ok(m) if m.table() == k.images());
        let ok = if genuine {
            lemma.certified_isomorphism && iso && recovered
        } else {
            !lemma.forward && !lemma.certified_isomorphism && !iso && lambda.is_err()
        };
        genuine_count += genuine as usize;
        certified += lemma.certified_isomorphism as usize;
        rejected += (!lemma.forward) as usize;
        correct += ok as usize;
        if !ok && failure.is_null() {
            failure = json!({
                "trial": trial,
                "genuine": genuine,
                "swapped": swapped,
                "lemma": lemma,
                "isomorphism": iso,
                "lambda": match &lambda {
                    Ok(m) => json!(m.table()),
                    Err(e) => error_witness(e),
                },
            });
        }
    }
    Ok((
        Status::from_bool(correct == trials),
        json!({
            "trials": trials,
            "genuine": genuine_count,
            "perturbed": trials - genuine_count,
            "certified_isomorphisms": certified,
            "forward_rejected": rejected,
            "correctly_classified": correct,
            "first_failure": failure,
        }),
    ))
}

/// Quotient at the origin is a projective space of dimension `n - 1`, and
/// induced maps restrict to semicollineations of the quotients.
pub fn theorem3(space: &Space, seed: u64, trials: usize) -> Result<Outcome> {
    require_target_dim(space)?;
    let quotient = QuotientSpace::new(space, 0)?;
    let axioms = quotient.verify_axioms();
    let proj_dim = quotient.projective_dimension();
    let dim_ok = proj_dim.map(|d| d + 1) == Some(space.dim());

    let gens = generator_perms(space);
    let mut sampler = Sampler::new(seed);
    let mut passed = 0;
    let mut failure = Value::Null;
    for trial in 0..trials {
        let k = sampler.random_word(space.point_count(), &gens);
        let q = sampler.below(space.point_count()) as u32;
        let col = Collineation::new(space, space, k.images().to_vec())?;
        let f = induced_line_map(&col);
        let lambda = reconstruct_point_map(&f, Mode::Lambda)?;
        let report = semicollineation_with(&f, &lambda, q)?;
        let ok = report.is_semicollineation() && report.image == k.apply(q);
        passed += ok as usize;
        if !ok && failure.is_null() {
            failure = json!({ "trial": trial, "points": k, "report": report });
        }
    }
    let pass = axioms.is_ok() && dim_ok && passed == trials;
    Ok((
        Status::from_bool(pass),
        json!({
            "quotient": {
                "origin": quotient.origin,
                "points": quotient.point_count(),
                "lines": quotient.line_count(),
                "line_size": quotient.lines.first().map_or(0, |l| l.len()),
                "axioms": match &axioms { Ok(()) => "verified".to_string(), Err(e) => e.clone() },
                "projective_dimension": proj_dim,
                "affine_dimension": space.dim(),
                "dimension_formula": dim_ok,
            },
            "semicollineations": { "trials": trials, "passed": passed, "first_failure": failure },
        }),
    ))
}

pub fn theorem4_count(n_max: u32, q_max: u32) -> Outcome {
    let found = count_constraint_search(n_max, q_max);
    let expected: Vec<CountSolution> =
        if q_max >= 2 { (3..=n_max).map(|n| CountSolution { n, m: n, p: 2, h: 1 }).collect() } else { Vec::new() };
    let unexpected: Vec<&CountSolution> = found.iter().filter(|s| !expected.contains(s)).collect();
    let missing: Vec<&CountSolution> = expected.iter().filter(|s| !found.contains(s)).collect();
    (
        Status::from_bool(unexpected.is_empty() && missing.is_empty()),
        json!({
            "n_range": [3, n_max],
            "q_range": [2, q_max],
            "solutions": found,
            "unexpected": unexpected,
            "missing": missing,
        }),
    )
}

/// Stars are maximal cliques, two stars share exactly one line, and three
/// stars share a line exactly when their centres are collinear.
pub fn stars(space: &Space) -> Result<Outcome> {
    let graph = ConcurrenceGraph::build(space)?;
    let points = space.point_count() as u32;
    let mut failure = Value::Null;
    let mut maximal = 0;
    for q in 0..points {
        let star = space.star(q);
        let ok = graph.is_maximal_clique(star) && is_maximal_related_set(space, star);
        maximal += ok as usize;
        if !ok && failure.is_null() {
            failure = json!({ "non_maximal_star": q });
        }
    }
    let (mut pairs, mut pair_ok) = (0usize, 0usize);
    let (mut triples, mut collinear, mut triple_ok) = (0usize, 0usize, 0usize);
    for a in 0..points {
        for b in a + 1..points {
            pairs += 1;
            if space.pair_star_count(a, b) == 1 {
                pair_ok += 1;
            } else if failure.is_null() {
                failure = json!({ "pair": [a, b], "common_lines": space.pair_star_count(a, b) });
            }
            for c in b + 1..points {
                triples += 1;
                let col = space.collinear(a, b, c)?;
                let count = space.triple_star_count(a, b, c);
                collinear += col as usize;
                if count == col as usize {
                    triple_ok += 1;
                } else if failure.is_null() {
                    failure = json!({ "triple": [a, b, c], "collinear": col, "common_lines": count });
                }
            }
        }
    }
    let pass = maximal == points as usize && pair_ok == pairs && triple_ok == triples;
    Ok((
        Status::from_bool(pass),
        json!({
            "stars": points,
            "maximal_stars": maximal,
            "pairs": pairs,
            "pairs_sharing_one_line": pair_ok,
            "triples": triples,
            "collinear_triples": collinear,
            "triples_matching": triple_ok,
            "first_failure": failure,
        }),
    ))
}

/// Exhaustive maximal clique enumeration; anything that is neither a star
/// nor a plane transversal set is reported as `other`.
pub fn cliques(space: &Space) -> Result<Outcome> {
    let graph = ConcurrenceGraph::build(space)?;
    let all = graph.enumerate_maximal_cliques()?;
    let (mut stars, mut nonstars, mut other) = (0, 0, 0);
    let mut records = Vec::with_capacity(all.len());
    for c in &all {
        match classify_clique(space, c) {
            CliqueKind::Star { .. } => stars += 1,
            CliqueKind::NonStar { .. } => nonstars += 1,
            CliqueKind::Other => other += 1,
        }
        records.push(CliqueRecord::new(space, c));
    }
    Ok((
        Status::from_bool(other == 0),
        json!({
            "maximal_cliques": all.len(),
            "stars": stars,
            "nonstars": nonstars,
            "other": other,
            "cliques": records,
        }),
    ))
}

pub fn plane_order(a: &Space, b: &Space) -> Result<Outcome> {
    let result = plane_order_criterion(a, b)?;
    let isomorphic = result.isomorphism.is_some();
    Ok((
        Status::from_bool(isomorphic == result.equal_order),
        json!({
            "orders": [a.order(), b.order()],
            "equal_order": result.equal_order,
            "isomorphic": isomorphic,
            "isomorphism": result.isomorphism.map(|f| f.to_file()),
        }),
    ))
}

pub fn plucker_group(space: &Space) -> Result<Outcome> {
    let cert = certify_plucker_group(space)?;
    let value = serde_json::to_value(&cert).expect("certificate serializes");
    Ok((Status::from_bool(cert.pass), value))
}

fn counterexample_witness(c: &PlaneCounterexample) -> Outcome {
    let ok = c.isomorphism.via_related
        && c.isomorphism.via_unrelated
        && matches!(c.reconstruction, Error::WellDefinedness { .. });
    (
        Status::from_bool(ok),
        json!({
            "isomorphism": c.isomorphism.via_related && c.isomorphism.via_unrelated,
            "isomorphism_check": c.isomorphism,
            "reconstruction": error_witness(&c.reconstruction),
            "broken_stars": c.broken_stars,
            "map": c.map.to_file(),
        }),
    )
}

/// Swaps the first two lines of the first parallel class.
pub fn plane_transposition(space: &Space) -> Result<Outcome> {
    if space.dim() != 2 {
        return Err(Error::NotAPlane(space.dim()));
    }
    let class = &space.parallel_classes()[0];
    let (a, b) = (class[0], class[1]);
    let c = plane_parallel_transposition(space, a, b)?;
    let (status, mut w) = counterexample_witness(&c);
    w["transposed"] = json!([a, b]);
    Ok((status, w))
}

pub fn plane_scramble(space: &Space) -> Result<Outcome> {
    let c = plane_class_scramble(space)?;
    Ok(counterexample_witness(&c))
}

/// The non-star maximal clique in the first plane through the origin.
pub fn nonstar_clique(space: &Space) -> Result<Outcome> {
    if space.dim() < 2 {
        return Err(Error::Dimension { role: "source", needed: 2, got: space.dim() });
    }
    let graph = ConcurrenceGraph::build(space)?;
    let plane = space.planes_through(0).into_iter().next().expect("a plane through the origin");
    let clique = nonstar_maximal_clique(space, 0, &plane)?;
    let maximal = graph.is_maximal_clique(&clique.lines) && is_maximal_related_set(space, &clique.lines);
    let star = matches!(classify_clique(space, &clique.lines), CliqueKind::Star { .. });
    Ok((
        Status::from_bool(maximal && !star),
        json!({
            "size": clique.lines.len(),
            "maximal": maximal,
            "star": star,
            "replaced": clique.replaced,
            "translated": clique.translated,
            "clique": CliqueRecord::new(space, &clique.lines),
        }),
    ))
}
