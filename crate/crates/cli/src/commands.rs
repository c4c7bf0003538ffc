//! One function per subcommand. Each returns the report body and whether
//! every internal consistency check passed.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_complex::Complex64;
use serde::Serialize;
use serde_json::{json, Value};

use groupoidlab::calgebra::{
    appendix_a_suite, block_decompose, build_doubled_model, build_rt_model, convolve, induced_rep, involute,
    reduced_norm, AlgebraElement, AppendixOptions, ACCUMULATED_TOL, STRUCTURAL_TOL,
};
use groupoidlab::finspace::{
    check_local_local_compactness, classify_map, closed_hausdorff_core, space_properties, FinSpace, SpaceMap,
};
use groupoidlab::graphfell::{fell_verdict, periodic_fell_verdict, validate_graph, DirectedGraph, PeriodicGraph, Verdict};
use groupoidlab::groupoid::{
    build_relation_groupoid, fell_check, groupoid_properties, orbit_map_check, orbit_space, FinGroupoid, GroupoidError,
    GroupoidInput,
};
use groupoidlab::twist::{
    are_cohomologous, cech_is_coboundary, extension_associativity_failures, nerve_class_count, verify_cech,
    verify_two_cocycle, CechCoboundary, CechData, CechJson, TwoCocycle,
};

use crate::input::{decode, decode_twisted, InputError, InputResult};

/// Largest groupoid `algebra-verify` accepts.
pub const MAX_ALGEBRA_MORPHISMS: usize = 256;

pub struct Outcome {
    pub report: Value,
    pub healthy: bool,
}

pub fn to_value<T: Serialize>(t: &T) -> Value {
    serde_json::to_value(t).expect("reports serialise")
}

fn input_err(e: impl std::fmt::Display) -> InputError {
    InputError::new(e)
}

pub fn space_check(doc: &Value) -> InputResult<Outcome> {
    let x: FinSpace = decode(doc, "")?;
    let lc = check_local_local_compactness(&x);
    let (_, core) = closed_hausdorff_core(&x);
    let healthy = lc.holds && core.holds();
    let report = json!({
        "points": x.len(),
        "properties": to_value(&space_properties(&x)),
        "local_local_compactness": to_value(&lc),
        "closed_hausdorff_core": to_value(&core),
    });
    Ok(Outcome { report, healthy })
}

pub fn map_classify(doc: &Value) -> InputResult<Outcome> {
    let f: SpaceMap = decode(doc, "")?;
    let p = classify_map(&f);
    let healthy = (!p.local_homeomorphism || (p.continuous && p.open_map)) && (!p.quotient || (p.surjective && p.continuous));
    let report = json!({
        "properties": to_value(&p),
        "final_topology": to_value(&f.final_topology()),
    });
    Ok(Outcome { report, healthy })
}

pub fn build_rpsi(doc: &Value) -> InputResult<Outcome> {
    let psi: SpaceMap = decode(doc, "")?;
    let r = build_relation_groupoid(&psi).map_err(input_err)?;
    let g = &r.groupoid;
    let orbits = orbit_space(g);
    let check = orbit_map_check(&psi).map_err(input_err)?;
    let units = g.unit_space();
    let orbit_names: Vec<Vec<String>> =
        orbits.orbits.iter().map(|o| o.iter().map(|&p| units.name(p).to_string()).collect()).collect();
    let report = json!({
        "groupoid": to_value(g),
        "morphisms": g.len(),
        "properties": to_value(&groupoid_properties(g)),
        "map_properties": to_value(&classify_map(&psi)),
        "orbits": orbit_names,
        "orbit_space": to_value(&orbits.space),
        "orbit_map_open_when_etale": orbits.q_open_when_etale,
        "orbit_map_check": to_value(&check),
    });
    Ok(Outcome { report, healthy: check.all_hold() && orbits.q_open_when_etale != Some(false) })
}

pub fn fell(doc: &Value) -> InputResult<Outcome> {
    let input: GroupoidInput = crate::input::decode_groupoid(doc, "")?;
    let g = input.into_groupoid().map_err(input_err)?;
    let props = groupoid_properties(&g);
    let (fell, witness) = match fell_check(&g) {
        Ok(report) => (Some(report), None),
        Err(GroupoidError::NonPrincipal { a, b }) => (None, Some(vec![a, b])),
        Err(e) => return Err(input_err(e)),
    };
    let healthy = fell.as_ref().is_none_or(|f| !f.is_fell_model || props.cartan_literal);
    let report = json!({
        "properties": to_value(&props),
        "fell": fell.as_ref().map(to_value),
        "non_principal_witness": witness,
    });
    Ok(Outcome { report, healthy })
}

pub fn graph_fell(doc: &Value) -> InputResult<Outcome> {
    if doc.get("block").is_some() {
        let p: PeriodicGraph = decode(doc, "")?;
        let verdict = periodic_fell_verdict(&p);
        let healthy = match (&verdict.verdict, &verdict.witness) {
            (Verdict::NotFell, Some(w)) => p.unroll(p.exact_depth() + 2).graph.check_path_pair(w),
            (Verdict::NotFell, None) => false,
            _ => true,
        };
        let report = json!({
            "kind": "periodic",
            "validation": to_value(&p.validate()),
            "exact_depth": p.exact_depth(),
            "verdict": to_value(&verdict),
        });
        Ok(Outcome { report, healthy })
    } else {
        let g: DirectedGraph = decode(doc, "")?;
        let verdict = fell_verdict(&g);
        let report = json!({
            "kind": "finite",
            "validation": to_value(&validate_graph(&g)),
            "verdict": to_value(&verdict),
        });
        Ok(Outcome { report, healthy: true })
    }
}

fn twisted_groupoid(input: GroupoidInput) -> InputResult<Arc<FinGroupoid>> {
    input.into_groupoid().map(Arc::new).map_err(|e| InputError::at("/groupoid", e))
}

fn cocycle_from(g: &Arc<FinGroupoid>, json: Option<&groupoidlab::twist::TwoCocycleJson>) -> InputResult<TwoCocycle> {
    match json {
        Some(c) => TwoCocycle::from_json(g.clone(), c).map_err(|e| InputError::at("/cocycle", e)),
        None => Ok(TwoCocycle::trivial(g.clone(), 1)),
    }
}

pub fn cocycle_verify(doc: &Value) -> InputResult<Outcome> {
    let input = decode_twisted(doc, &["groupoid", "cocycle"])?;
    let json = input.cocycle.as_ref().ok_or_else(|| InputError::at("/", "missing field `cocycle`"))?;
    let g = twisted_groupoid(input.groupoid)?;
    let sigma = cocycle_from(&g, Some(json))?;
    let report = verify_two_cocycle(&sigma);
    let failures = extension_associativity_failures(&sigma);
    let trivialising = if report.valid {
        are_cohomologous(&sigma, &TwoCocycle::trivial(g.clone(), sigma.n()))
            .map_err(input_err)?
            .map(|b| (0..g.len()).filter(|&a| b.value(a) != 0).map(|a| (g.name(a).to_string(), b.value(a))).collect::<BTreeMap<_, _>>())
    } else {
        None
    };
    let healthy = report.valid == failures.is_empty();
    let out = json!({
        "n": sigma.n(),
        "composable_pairs": g.num_pairs(),
        "valid": report.valid,
        "report": to_value(&report),
        "extension_associative": failures.is_empty(),
        "coboundary": trivialising.is_some(),
        "trivialising_cochain": trivialising,
    });
    Ok(Outcome { report: out, healthy })
}

fn cech_data(doc: &Value) -> InputResult<CechData> {
    let json: CechJson = decode(doc, "")?;
    CechData::from_json(&json).map_err(input_err)
}

pub fn cech_cert(doc: &Value) -> InputResult<Outcome> {
    let c = cech_data(doc)?;
    let check = verify_cech(&c).map_err(input_err)?;
    let mut report = json!({
        "n": c.n(),
        "points": c.points(),
        "indices": c.indices(),
        "cocycle": to_value(&check),
        "nerve_classes": u64::try_from(nerve_class_count(&c)).map(Value::from).unwrap_or_else(|_| Value::from(nerve_class_count(&c).to_string())),
    });
    if !check.valid {
        report["verdict"] = json!("not a cocycle");
        return Ok(Outcome { report, healthy: true });
    }
    let n = c.n();
    let healthy = match cech_is_coboundary(&c).map_err(input_err)? {
        CechCoboundary::Coboundary(mu) => {
            let signed: BTreeMap<(u32, u32), i64> = mu.iter().map(|(&p, &v)| (p, v as i64)).collect();
            let reproduces = c.coboundary_of(&signed).raw() == c.with_lambda(sorted_lambda(&c)).raw();
            report["verdict"] = json!("coboundary");
            report["mu"] = to_value(&mu.iter().map(|(&(i, j), &v)| (format!("{i},{j}"), v)).collect::<BTreeMap<_, _>>());
            reproduces
        }
        CechCoboundary::NotCoboundary { certificate, pairing } => {
            // The weights must annihilate δ of every basis cochain.
            let ix = c.indices().to_vec();
            let annihilates = ix.iter().enumerate().all(|(a, &i)| {
                ix[a + 1..].iter().all(|&j| {
                    let basis = c.coboundary_of(&BTreeMap::from([((i, j), 1)]));
                    certificate.iter().fold(0, |acc, (&(p, q, r), &w)| (acc + w * basis.value(p, q, r).unwrap_or(0)) % n) == 0
                })
            });
            report["verdict"] = json!("not a coboundary");
            report["certificate"] = to_value(
                &certificate.iter().map(|(&(i, j, k), &w)| (format!("{i},{j},{k}"), w)).collect::<BTreeMap<_, _>>(),
            );
            report["pairing"] = json!(pairing);
            annihilates && pairing != 0
        }
    };
    Ok(Outcome { report, healthy })
}

fn sorted_lambda(c: &CechData) -> Vec<((u32, u32, u32), i64)> {
    c.sorted_triples().into_iter().map(|(i, j, k)| ((i, j, k), c.value(i, j, k).unwrap_or(0) as i64)).collect()
}

#[derive(Serialize, Default)]
struct AxiomDeviations {
    associativity: f64,
    involution: f64,
    anti_multiplicativity: f64,
    representation: f64,
    representation_adjoint: f64,
}

pub fn algebra_verify(doc: &Value) -> InputResult<Outcome> {
    let input = decode_twisted(doc, &["groupoid", "cocycle", "elements"])?;
    let relation = match &input.groupoid {
        GroupoidInput::Relation { psi } => Some(build_relation_groupoid(psi).map_err(|e| InputError::at("/groupoid", e))?),
        GroupoidInput::Explicit(_) => None,
    };
    let g = twisted_groupoid(input.groupoid)?;
    if g.len() > MAX_ALGEBRA_MORPHISMS {
        return Err(InputError::at(
            "/groupoid",
            format!("groupoid has {} morphisms, above the cap of {MAX_ALGEBRA_MORPHISMS}", g.len()),
        ));
    }
    let sigma = Arc::new(cocycle_from(&g, input.cocycle.as_ref())?);
    let check = verify_two_cocycle(&sigma);
    if !check.valid {
        return Err(InputError::at(
            "/cocycle",
            format!(
                "not a normalised 2-cocycle: {} cocycle violations (first {:?}), {} normalisation violations (first {:?})",
                check.cocycle_violations.len(),
                check.cocycle_violations.first(),
                check.normalization_violations.len(),
                check.normalization_violations.first()
            ),
        ));
    }
    let mut elements = Vec::new();
    for (k, e) in input.elements.iter().enumerate() {
        elements.push(AlgebraElement::from_json(sigma.clone(), e).map_err(|err| InputError::at(format!("/elements/{k}"), err))?);
    }
    if elements.is_empty() {
        let ones = AlgebraElement::from_coeffs(sigma.clone(), vec![Complex64::new(1.0, 0.0); g.len()]);
        elements.push(ones);
        elements.push(AlgebraElement::identity(sigma.clone()));
    }

    let delta = |a: usize| AlgebraElement::point_mass(sigma.clone(), a);
    let conv = |f: &AlgebraElement, h: &AlgebraElement| convolve(f, h).expect("same algebra");
    let mut dev = AxiomDeviations::default();
    for a in 0..g.len() {
        let da = delta(a);
        dev.involution = dev.involution.max(involute(&involute(&da)).max_abs_diff(&da));
        for &(b, _) in g.composable_with(a) {
            let db = delta(b);
            let ab = conv(&da, &db);
            dev.anti_multiplicativity =
                dev.anti_multiplicativity.max(involute(&ab).max_abs_diff(&conv(&involute(&db), &involute(&da))));
            for &(c, _) in g.composable_with(b) {
                let dc = delta(c);
                dev.associativity = dev.associativity.max(conv(&ab, &dc).max_abs_diff(&conv(&da, &conv(&db, &dc))));
            }
        }
    }
    for &u in g.units() {
        let reps: Vec<_> = (0..g.len()).map(|a| induced_rep(u, &delta(a)).expect("unit").matrix).collect();
        for a in 0..g.len() {
            let adj = induced_rep(u, &involute(&delta(a))).expect("unit").matrix;
            dev.representation_adjoint = dev.representation_adjoint.max(adj.max_abs_diff(&reps[a].adjoint()));
            for &(b, _) in g.composable_with(a) {
                let lhs = induced_rep(u, &conv(&delta(a), &delta(b))).expect("unit").matrix;
                dev.representation = dev.representation.max(lhs.max_abs_diff(&(&reps[a] * &reps[b])));
            }
        }
    }

    let blocks = match &relation {
        Some(r) if r.base().is_discrete() => Some(block_decompose(r, sigma.clone()).map_err(input_err)?),
        _ => None,
    };
    let mut element_reports = Vec::new();
    let mut norms_ok = true;
    for f in &elements {
        let norm = reduced_norm(f);
        let cstar = (reduced_norm(&conv(&involute(f), f)) - norm * norm).abs();
        let block_norm = blocks.as_ref().map(|b| b.norm(f));
        norms_ok &= cstar < ACCUMULATED_TOL && block_norm.is_none_or(|b| (b - norm).abs() < ACCUMULATED_TOL);
        element_reports.push(json!({
            "element": to_value(&f.to_json()),
            "reduced_norm": norm,
            "block_norm": block_norm,
            "cstar_identity_deviation": cstar,
        }));
    }
    let healthy = dev.associativity < ACCUMULATED_TOL
        && dev.involution < STRUCTURAL_TOL
        && dev.anti_multiplicativity < STRUCTURAL_TOL
        && dev.representation < STRUCTURAL_TOL
        && dev.representation_adjoint < STRUCTURAL_TOL
        && norms_ok
        && blocks.as_ref().is_none_or(|b| b.report.is_isomorphism);
    let report = json!({
        "n": sigma.n(),
        "morphisms": g.len(),
        "units": g.units().len(),
        "point_mass_deviations": to_value(&dev),
        "elements": element_reports,
        "blocks": blocks.as_ref().map(|b| to_value(&b.report)),
        "block_summary": blocks.as_ref().map(|b| b.report.summary()),
    });
    Ok(Outcome { report, healthy })
}

pub fn model_doubled(levels: usize, sheets: usize) -> InputResult<Outcome> {
    let model = build_doubled_model(levels, sheets).map_err(input_err)?;
    let report = json!({
        "report": to_value(&model.report),
        "block_summary": model.blocks.report.summary(),
        "blocks": to_value(&model.blocks.report),
    });
    Ok(Outcome { report, healthy: model.report.holds && model.blocks.report.is_isomorphism })
}

pub fn model_rt(doc: &Value) -> InputResult<Outcome> {
    let c = cech_data(doc)?;
    let (_, report) = build_rt_model(&c).map_err(input_err)?;
    Ok(Outcome { healthy: report.holds, report: to_value(&report) })
}

pub fn appendix_a(doc: &Value, drop_conjugation: bool) -> InputResult<Outcome> {
    let input = decode_twisted(doc, &["groupoid", "cocycle"])?;
    let json = input.cocycle.as_ref().ok_or_else(|| InputError::at("/", "missing field `cocycle`"))?;
    let g = twisted_groupoid(input.groupoid)?;
    let sigma = cocycle_from(&g, Some(json))?;
    let report = appendix_a_suite(&g, &sigma, AppendixOptions { drop_conjugation }).map_err(input_err)?;
    Ok(Outcome { healthy: report.holds, report: to_value(&report) })
}
