//! Bundled regression models, run in order as one report.

use std::sync::Arc;

use serde::Serialize;
use serde_json::{json, Value};

use groupoidlab::calgebra::{
    appendix_a_suite, block_decompose, build_doubled_model, build_rt_model, convolve, AlgebraElement, AppendixOptions,
    ACCUMULATED_TOL, STRUCTURAL_TOL,
};
use groupoidlab::corpus;
use groupoidlab::finspace::{classify_map, closed_hausdorff_core, quotient_space, FinSpace, SpaceMap};
use groupoidlab::graphfell::{periodic_fell_verdict, PeriodicGraph, Verdict};
use groupoidlab::groupoid::{build_relation_groupoid, fell_check, groupoid_properties, orbit_map_check, FinGroupoid};
use groupoidlab::twist::{
    cech_is_coboundary, cocycle_violations, coboundary_twist, extension_associativity_failures, CechData, CechJson,
    OneCochain, TwoCocycle,
};

pub const LADDER: &str = include_str!("../data/doubled_ladder.json");
pub const TETRAHEDRON_Z3: &str = include_str!("../data/tetrahedron_z3.json");

type Check = fn(&Fixtures) -> Result<String, String>;

pub const ENTRIES: &[(&str, Check)] = &[
    ("orbit space of a quotient map", orbit_space_of_quotient),
    ("etale relation iff local homeomorphism", etale_iff_local_homeomorphism),
    ("fell model implies cartan", fell_implies_cartan),
    ("discrete surjections are fell", discrete_surjections_are_fell),
    ("doubled ladder graph criterion", doubled_ladder),
    ("doubled interval slice isomorphism", doubled_interval_slices),
    ("doubled interval induced equivalence", doubled_interval_equivalence),
    ("relation algebra block decomposition", relation_blocks),
    ("tetrahedron twist certified", tetrahedron_certified),
    ("character at added point", character_at_added_point),
    ("kernel of the character", kernel_of_character),
    ("extension algebra slice map", extension_slice_map),
    ("closed hausdorff core", closed_core),
    ("twisted convolution associativity", convolution_associativity),
    ("extension groupoid associativity", extension_associativity),
];

/// Inputs shared by the entries. Only the two associativity entries read
/// `sigma`, which is what fault injection perturbs.
pub struct Fixtures {
    sigma: TwoCocycle,
}

impl Fixtures {
    pub fn new(inject_fault: bool) -> Self {
        let g = pair_groupoid(3);
        let mut sigma = coboundary_twist(&cochain(&g, 3, |a| (a * a + 1) % 3));
        if inject_fault {
            let (a, c, _) = g
                .composable_pairs()
                .find(|&(a, c, _)| !g.is_unit(a) && !g.is_unit(c) && !cocycle_violations(&sigma.perturbed(a, c, 1)).is_empty())
                .expect("some perturbation breaks the identity");
            sigma = sigma.perturbed(a, c, 1);
        }
        Self { sigma }
    }
}

#[derive(Serialize)]
pub struct Entry {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

pub fn run(inject_fault: bool) -> Vec<Entry> {
    let fixtures = Fixtures::new(inject_fault);
    ENTRIES
        .iter()
        .map(|&(name, check)| {
            let (passed, detail) = match check(&fixtures) {
                Ok(d) => (true, d),
                Err(d) => (false, d),
            };
            Entry { name, passed, detail }
        })
        .collect()
}

pub fn report(entries: &[Entry]) -> Value {
    let failed = entries.iter().filter(|e| !e.passed).count();
    json!({
        "entries": entries,
        "total": entries.len(),
        "failed": failed,
        "all_passed": failed == 0,
    })
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn err(e: impl std::fmt::Display) -> String {
    e.to_string()
}

fn names(k: usize) -> Vec<String> {
    (1..=k).map(|i| i.to_string()).collect()
}

/// `R(ψ)` for `ψ` collapsing `k` discrete points to one.
fn pair_groupoid(k: usize) -> Arc<FinGroupoid> {
    let y = FinSpace::discrete(&names(k));
    let (_, psi) = quotient_space(&y, &[(0..k).collect()]).expect("partition");
    Arc::new(build_relation_groupoid(&psi).expect("relation").groupoid)
}

/// A cochain with values `f(a)` off the units.
fn cochain(g: &Arc<FinGroupoid>, n: u64, f: impl Fn(i64) -> i64) -> OneCochain {
    let values = (0..g.len()).map(|a| if g.is_unit(a) { 0 } else { f(a as i64) }).collect();
    OneCochain::new(g.clone(), n, values).expect("zero on units")
}

fn orbit_space_of_quotient(_: &Fixtures) -> Result<String, String> {
    let mut checked = 0;
    for psi in corpus::all_quotient_maps(3) {
        let report = orbit_map_check(&psi).map_err(err)?;
        ensure(report.all_hold(), || format!("{psi:?}: {report:?}"))?;
        checked += 1;
    }
    Ok(format!("orbit map clauses hold on {checked} quotient maps of spaces with at most 3 points"))
}

fn etale_iff_local_homeomorphism(_: &Fixtures) -> Result<String, String> {
    let mut checked = 0;
    for psi in corpus::all_quotient_maps(3) {
        let etale = build_relation_groupoid(&psi).map_err(err)?.groupoid.is_etale();
        ensure(etale == classify_map(&psi).local_homeomorphism, || format!("{psi:?}"))?;
        checked += 1;
    }
    Ok(format!("equivalence holds on {checked} quotient maps"))
}

fn discrete_relations(max: usize) -> impl Iterator<Item = (SpaceMap, FinGroupoid)> {
    (1..=max).flat_map(|k| {
        let y = FinSpace::discrete(&names(k));
        corpus::set_partitions(k).into_iter().map(move |p| {
            let (_, psi) = quotient_space(&y, &p).expect("partition");
            let g = build_relation_groupoid(&psi).expect("relation").groupoid;
            (psi, g)
        })
    })
}

fn fell_implies_cartan(_: &Fixtures) -> Result<String, String> {
    let mut groupoids: Vec<FinGroupoid> = discrete_relations(5).map(|(_, g)| g).collect();
    groupoids.extend(corpus::all_spaces(3).into_iter().map(FinGroupoid::unit_groupoid));
    for psi in corpus::all_quotient_maps(3) {
        groupoids.push(build_relation_groupoid(&psi).map_err(err)?.groupoid);
    }
    groupoids.push(isolated_arrows()?);
    let mut fell = 0;
    for g in &groupoids {
        if fell_check(g).map_err(err)?.is_fell_model {
            fell += 1;
            ensure(groupoid_properties(g).cartan_literal, || format!("Fell but not Cartan: {g:?}"))?;
        }
    }
    Ok(format!("{fell} of {} principal groupoids are Fell, all Cartan", groupoids.len()))
}

/// The pair groupoid on an indiscrete two-point space with its non-unit
/// arrows made open; `r×s` is then not open.
fn isolated_arrows() -> Result<FinGroupoid, String> {
    let y = FinSpace::indiscrete(&["0", "1"]);
    let psi = SpaceMap::new(y, FinSpace::discrete(&["*"]), vec![0, 0]).map_err(err)?;
    let g = build_relation_groupoid(&psi).map_err(err)?.groupoid;
    let t = FinSpace::from_named(&[
        ("(0,0)", &["(0,0)", "(1,1)"]),
        ("(0,1)", &["(0,1)"]),
        ("(1,0)", &["(1,0)"]),
        ("(1,1)", &["(0,0)", "(1,1)"]),
    ])
    .map_err(err)?;
    g.with_topology(t).map_err(err)
}

fn discrete_surjections_are_fell(_: &Fixtures) -> Result<String, String> {
    let mut checked = 0;
    for (psi, g) in discrete_relations(6) {
        let fell = fell_check(&g).map_err(err)?;
        ensure(g.is_principal() && g.is_etale() && fell.is_fell_model, || format!("{psi:?}: {fell:?}"))?;
        checked += 1;
    }
    Ok(format!("{checked} surjections of discrete spaces with at most 6 points"))
}

fn doubled_ladder(_: &Fixtures) -> Result<String, String> {
    let ladder: PeriodicGraph = serde_json::from_str(LADDER).map_err(err)?;
    ensure(ladder == PeriodicGraph::doubled_ladder(), || "bundled ladder differs from the built-in one".into())?;
    let v = periodic_fell_verdict(&ladder);
    ensure(v.verdict == Verdict::NotFell, || format!("verdict {:?}", v.verdict))?;
    let w = v.witness.clone().ok_or("no witness")?;
    ensure(w.paths == [vec!["f1_2".to_string()], vec!["f2_2".to_string()]], || format!("witness {w:?}"))?;
    ensure(ladder.unroll(ladder.exact_depth() + 2).graph.check_path_pair(&w), || "witness does not revalidate".into())?;
    for id in ["f1", "f2"] {
        let cut = ladder.without_block_edge(id).ok_or("missing edge")?;
        let verdict = periodic_fell_verdict(&cut).verdict;
        ensure(verdict == Verdict::Fell, || format!("without {id}: {verdict:?}"))?;
    }
    Ok(format!("NOT_FELL with paths {:?}; deleting f1 or f2 gives FELL", w.paths))
}

fn doubled_interval_slices(_: &Fixtures) -> Result<String, String> {
    for (m, n) in [(2, 2), (3, 2), (3, 3)] {
        let r = build_doubled_model(m, n).map_err(err)?.report;
        ensure(r.rho_bijective && r.rho_multiplicative && r.rho_involutive && r.matches_orbit_blocks, || format!("{r:?}"))?;
    }
    Ok("rho is a bijective *-isomorphism for (m, N) in (2,2), (3,2), (3,3)".into())
}

fn doubled_interval_equivalence(_: &Fixtures) -> Result<String, String> {
    let mut worst = 0.0f64;
    for (m, n) in [(2, 2), (3, 2), (3, 3)] {
        let r = build_doubled_model(m, n).map_err(err)?.report;
        worst = worst.max(r.unitary_equivalence_deviation);
    }
    ensure(worst < STRUCTURAL_TOL, || format!("deviation {worst:e}"))?;
    Ok(format!("largest entrywise deviation {worst:e}"))
}

fn relation_blocks(_: &Fixtures) -> Result<String, String> {
    let y = FinSpace::discrete(&names(5));
    let (_, psi) = quotient_space(&y, &[vec![0, 1, 2], vec![3], vec![4]]).map_err(err)?;
    let r = build_relation_groupoid(&psi).map_err(err)?;
    let g = Arc::new(r.groupoid.clone());
    let blocks = block_decompose(&r, Arc::new(coboundary_twist(&cochain(&g, 4, |a| a)))).map_err(err)?;
    let rep = &blocks.report;
    ensure(rep.dimension_conserved && rep.is_isomorphism && rep.untwisted, || format!("{rep:?}"))?;
    Ok(format!("{} with {} morphisms", rep.summary(), rep.morphisms))
}

fn tetrahedron() -> Result<CechData, String> {
    let json: CechJson = serde_json::from_str(TETRAHEDRON_Z3).map_err(err)?;
    CechData::from_json(&json).map_err(err)
}

fn tetrahedron_certified(_: &Fixtures) -> Result<String, String> {
    match cech_is_coboundary(&tetrahedron()?).map_err(err)? {
        groupoidlab::twist::CechCoboundary::NotCoboundary { certificate, pairing } => {
            ensure(pairing != 0, || "certificate pairs to zero".into())?;
            Ok(format!("certificate on {} triples pairs to {pairing}", certificate.len()))
        }
        other => Err(format!("claimed coboundary: {other:?}")),
    }
}

fn character_at_added_point(_: &Fixtures) -> Result<String, String> {
    let (_, r) = build_rt_model(&tetrahedron()?).map_err(err)?;
    ensure(r.axioms.holds && r.doubled.cocycle_valid && r.doubled.pi0_character, || format!("{:?}", r.doubled))?;
    Ok(format!("pi0 is a *-character on {} morphisms", r.doubled.morphisms))
}

fn kernel_of_character(_: &Fixtures) -> Result<String, String> {
    let (_, r) = build_rt_model(&tetrahedron()?).map_err(err)?;
    let d = &r.doubled;
    ensure(
        r.holds
            && d.phi_bijective
            && d.kernel_dimension == d.target_dimension
            && d.target_axioms.holds
            && d.phi_multiplicative_deviation < STRUCTURAL_TOL
            && d.phi_involution_deviation < STRUCTURAL_TOL
            && d.induced_match_deviation < STRUCTURAL_TOL,
        || format!("{d:?}"),
    )?;
    Ok(format!("kernel of dimension {} matches the target algebra", d.kernel_dimension))
}

fn extension_slice_map(_: &Fixtures) -> Result<String, String> {
    let g = pair_groupoid(3);
    let sigma = coboundary_twist(&cochain(&g, 4, |a| 3 * a + 1));
    let ok = appendix_a_suite(&g, &sigma, AppendixOptions::default()).map_err(err)?;
    ensure(ok.holds, || format!("{ok:?}"))?;
    let fault = appendix_a_suite(&g, &sigma, AppendixOptions { drop_conjugation: true }).map_err(err)?;
    ensure(fault.fault_detectable && !fault.holds, || format!("fault run {fault:?}"))?;
    Ok(format!(
        "slice map bijective, deviations {:e} and {:e}; dropping the conjugation is detected",
        ok.rho_multiplicative_deviation, ok.induced_equivalence_deviation
    ))
}

fn closed_core(_: &Fixtures) -> Result<String, String> {
    let spaces = corpus::all_spaces(4);
    for x in &spaces {
        let (_, report) = closed_hausdorff_core(x);
        ensure(report.holds(), || format!("{x:?}: {report:?}"))?;
    }
    Ok(format!("core open and Hausdorff on all {} spaces with at most 4 points", spaces.len()))
}

fn convolution_associativity(f: &Fixtures) -> Result<String, String> {
    let sigma = Arc::new(f.sigma.clone());
    let g = sigma.groupoid().clone();
    let delta = |a| AlgebraElement::point_mass(sigma.clone(), a);
    let conv = |x: &AlgebraElement, y: &AlgebraElement| convolve(x, y).expect("same algebra");
    let mut worst = 0.0f64;
    for (a, b, _) in g.composable_pairs() {
        let ab = conv(&delta(a), &delta(b));
        for &(c, _) in g.composable_with(b) {
            let lhs = conv(&ab, &delta(c));
            let rhs = conv(&delta(a), &conv(&delta(b), &delta(c)));
            worst = worst.max(lhs.max_abs_diff(&rhs));
        }
    }
    ensure(worst < ACCUMULATED_TOL, || format!("associativity deviation {worst:e}"))?;
    Ok(format!("point-mass triples associate within {worst:e}"))
}

fn extension_associativity(f: &Fixtures) -> Result<String, String> {
    let failures = extension_associativity_failures(&f.sigma);
    ensure(failures.is_empty(), || format!("{} non-associative triples, first {:?}", failures.len(), failures[0]))?;
    Ok(format!("extension by Z_{} associates", f.sigma.n()))
}
