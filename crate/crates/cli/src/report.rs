//! Running scenarios and rendering deterministic JSON reports.
//!
//! Keys are sorted (serde_json's default map is ordered). Flags are lists of
//! subspaces, each `{"dim": d, "basis": rows}` with the RREF basis rows as
//! element codes; members appear in increasing dimension.

use std::time::Instant;

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use serde_json::{json, Map, Value};
use tits_cr::corpus::{enumerate_subgroups, evaluate_all, CorpusRow, LeviOutcome};
use tits_cr::cr::{
    self, clifford_check, gsigma_cr, gsigma_cr_in_extension, quotient_transfer_check, relative_cr,
    sigma_cr, sigma_variant_cr, tau_search, BlockSubgroup, KSimplex,
};
use tits_cr::groups::is_sigma_stable;
use tits_cr::oracle::is_semisimple_module;
use tits_cr::topology::{
    classify, levi_sphere_complex, levi_sphere_containment, order_complex, reduced_homology,
    LeviSearch,
};
use tits_cr::{
    Building, BuildingAuto, BuildingAutoSet, Caps, CrVerdict, Field, FixedComplex, Flag, FqMatrix,
    HomologyProfile, LeviSphere, MatGroup, Strategy, Subspace, TopoClass,
};

use crate::scenario::{Analysis, Scenario};

pub const TOOL: &str = "tits-cr";

#[derive(Clone, Debug)]
pub struct RunOptions {
    pub caps: Caps,
    /// Seed for the randomized conjugation self-check. Never affects verdicts.
    pub seed: u64,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions {
            caps: Caps::default(),
            seed: 0,
        }
    }
}

#[derive(Clone, Debug)]
pub struct Report {
    pub id: String,
    pub value: Value,
    /// Names of failed invariant checks.
    pub violations: Vec<String>,
    pub error: Option<String>,
}

impl Report {
    pub fn ok(&self) -> bool {
        self.violations.is_empty() && self.error.is_none()
    }

    /// The report without its `timings` field, for determinism checks.
    pub fn without_timings(&self) -> Value {
        let mut v = self.value.clone();
        if let Some(m) = v.as_object_mut() {
            m.remove("timings");
        }
        v
    }
}

pub fn matrix_json(m: &FqMatrix) -> Value {
    json!(m.to_rows())
}

pub fn subspace_json(v: &Subspace) -> Value {
    json!({ "dim": v.dim(), "basis": v.basis().to_rows() })
}

pub fn flag_json(f: &Flag) -> Value {
    Value::Array(f.chain().iter().map(subspace_json).collect())
}

/// Inverse of [`flag_json`], validating the chain.
pub fn flag_from_json(field: &Field, n: usize, v: &Value) -> Option<Flag> {
    let chain = v
        .as_array()?
        .iter()
        .map(|s| {
            let rows: Vec<Vec<u16>> = serde_json::from_value(s.get("basis")?.clone()).ok()?;
            let sub = Subspace::from_vectors(field, n, &rows).ok()?;
            (s.get("dim")?.as_u64()? == sub.dim() as u64).then_some(sub)
        })
        .collect::<Option<Vec<_>>>()?;
    Flag::new(field, n, chain).ok()
}

fn k_simplex_json(s: &KSimplex) -> Value {
    Value::Array(s.parts.iter().map(flag_json).collect())
}

fn verdict_json(v: &CrVerdict) -> Value {
    json!({
        "cr": v.is_cr(),
        "witnesses": v.witnesses().iter().map(|(f, g)| json!([flag_json(f), flag_json(g)])).collect::<Vec<_>>(),
        "counterexample": v.counterexample().map(flag_json),
    })
}

pub fn class_json(c: &TopoClass) -> Value {
    match c {
        TopoClass::PointLike => json!({ "tag": "PointLike" }),
        TopoClass::SphereBouquetLike { dim, count } => {
            json!({ "tag": "SphereBouquetLike", "dim": dim, "count": count })
        }
        TopoClass::Other => json!({ "tag": "Other" }),
    }
}

pub fn homology_json(hp: &HomologyProfile) -> Value {
    json!({
        "reduced_betti": hp.reduced_betti,
        "torsion": hp.torsion.iter().map(|t| t.iter().map(ToString::to_string).collect::<Vec<_>>()).collect::<Vec<_>>(),
        "euler_reduced": hp.euler_reduced,
    })
}

fn levi_json(s: &LeviSearch) -> Value {
    match s {
        LeviSearch::Found(sphere) => json!({
            "outcome": "found",
            "parts": sphere.parts.iter().map(subspace_json).collect::<Vec<_>>(),
            "dim": sphere.dim(),
        }),
        LeviSearch::NotFound => json!({ "outcome": "not_found" }),
        LeviSearch::Inconclusive => json!({ "outcome": "inconclusive" }),
    }
}

fn levi_outcome_str(l: LeviOutcome) -> &'static str {
    match l {
        LeviOutcome::Found => "found",
        LeviOutcome::NotFound => "not_found",
        LeviOutcome::Inconclusive => "inconclusive",
    }
}

fn auto_json(a: &BuildingAuto) -> Value {
    match a {
        BuildingAuto::Inner(g) => json!({ "kind": "inner", "matrix": matrix_json(g) }),
        BuildingAuto::Frobenius(k) => json!({ "kind": "frobenius", "power": k }),
        BuildingAuto::Duality => json!({ "kind": "duality" }),
    }
}

type Checks = Vec<(&'static str, bool)>;
type Outcome = tits_cr::Result<(Value, Checks)>;

fn group(s: &Scenario, caps: &Caps) -> tits_cr::Result<MatGroup> {
    MatGroup::closure(&s.field, s.n, s.generators.clone(), caps)
}

fn gamma(h: &MatGroup, sigma: &[BuildingAuto]) -> BuildingAutoSet {
    sigma
        .iter()
        .fold(BuildingAutoSet::from_group(h), |set, a| set.with(a.clone()))
}

/// A uniformly random invertible matrix by rejection sampling.
fn random_invertible(field: &Field, n: usize, rng: &mut StdRng) -> FqMatrix {
    loop {
        let data = (0..n * n)
            .map(|_| rng.gen_range(0..field.order()) as u16)
            .collect();
        let m = FqMatrix::from_flat(n, n, data);
        if m.is_invertible(field) {
            return m;
        }
    }
}

/// Fixed complex, verdict, homology, shape and Levi sphere search for `Γ`.
fn fixed_point_analysis(
    b: &Building,
    autos: &BuildingAutoSet,
    caps: &Caps,
) -> tits_cr::Result<(Value, Checks, CrVerdict)> {
    let fc = FixedComplex::new(b, autos)?;
    let verdict = cr::is_cr(&fc);
    let sc = order_complex(&fc, caps)?;
    let hp = reduced_homology(&sc);
    let class = classify(&hp, fc.dim());
    let mut checks: Checks = vec![
        ("witnesses_valid", fc.validate(&verdict)),
        (
            "euler_characteristic",
            hp.euler_reduced == sc.reduced_euler_characteristic(),
        ),
    ];
    let levi = if fc.type_preserving() {
        let search = levi_sphere_containment(&fc, caps);
        if !fc.is_empty() {
            checks.push((
                "levi_sphere_iff_cr",
                search.found().is_some() == verdict.is_cr(),
            ));
        }
        levi_json(&search)
    } else {
        json!({ "outcome": "not_applicable" })
    };
    if !fc.is_empty() {
        let shape = match &class {
            TopoClass::PointLike => !verdict.is_cr(),
            TopoClass::SphereBouquetLike { dim, .. } => {
                verdict.is_cr() && *dim as isize == fc.dim()
            }
            TopoClass::Other => false,
        };
        checks.push(("shape_matches_cr", shape));
    }
    let value = json!({
        "type_preserving": fc.type_preserving(),
        "stable_flags": fc.stable().len(),
        "dim": fc.dim(),
        "verdict": verdict_json(&verdict),
        "homology": homology_json(&hp),
        "class": class_json(&class),
        "levi_sphere": levi,
    });
    Ok((value, checks, verdict))
}

fn analyze_cr(s: &Scenario, caps: &Caps, seed: u64) -> Outcome {
    let h = group(s, caps)?;
    let b = Building::build(s.n, &s.field, caps)?;
    let (mut value, mut checks, verdict) =
        fixed_point_analysis(&b, &BuildingAutoSet::from_group(&h), caps)?;
    let semisimple = is_semisimple_module(&h, caps)?;
    checks.push(("oracle_agrees", semisimple == verdict.is_cr()));
    let q = quotient_transfer_check(&b, &h, caps)?;
    checks.push(("scalar_saturation_consistent", q.consistent()));
    let mut rng = StdRng::seed_from_u64(seed);
    let g = random_invertible(&s.field, s.n, &mut rng);
    let conj = h.conjugate(&g)?;
    let conj_cr = cr::group_cr(&b, &conj)?.is_cr();
    checks.push(("conjugation_invariant", conj_cr == verdict.is_cr()));
    let m = value.as_object_mut().expect("object");
    m.insert("order".into(), json!(h.order()));
    m.insert("semisimple".into(), json!(semisimple));
    m.insert(
        "scalar_saturation".into(),
        json!({ "order": q.saturated_order, "cr": q.saturated_cr }),
    );
    m.insert(
        "self_check".into(),
        json!({ "seed": seed, "conjugator": matrix_json(&g), "cr": conj_cr }),
    );
    Ok((value, checks))
}

fn analyze_sigma_cr(s: &Scenario, caps: &Caps) -> Outcome {
    let h = group(s, caps)?;
    let b = Building::build(s.n, &s.field, caps)?;
    let sigma = BuildingAuto::Frobenius(s.params.frobenius.unwrap_or(1));
    let rep = sigma_cr(&b, &h, &sigma)?;
    let plain = cr::group_cr(&b, &h)?.is_cr();
    let stable = is_sigma_stable(&h, &sigma);
    let mut checks = vec![("definitional_agrees", rep.agree())];
    if stable {
        checks.push(("sigma_cr_equals_cr", rep.verdict.is_cr() == plain));
    }
    let value = json!({
        "order": h.order(),
        "sigma": auto_json(&sigma),
        "sigma_stable": stable,
        "verdict": verdict_json(&rep.verdict),
        "definitional": rep.definitional,
        "plain_cr": plain,
    });
    Ok((value, checks))
}

fn analyze_gsigma_cr(s: &Scenario, caps: &Caps) -> Outcome {
    let h = group(s, caps)?;
    let rep = match s.params.base_m {
        Some(base_m) => {
            gsigma_cr_in_extension(&h, &Field::new(s.field.characteristic(), base_m)?, caps)?
        }
        None => gsigma_cr(&h, s.params.r.unwrap_or(2), caps)?,
    };
    let value = json!({
        "order": h.order(),
        "rational": verdict_json(&rep.rational),
        "definitional": rep.definitional,
        "extension": rep.extension.as_ref().map(|e| json!({
            "degree": e.degree,
            "sigma_cr": e.sigma_cr,
            "plain_cr": e.plain_cr,
        })),
    });
    Ok((value, vec![("consistent", rep.consistent())]))
}

fn analyze_relative(s: &Scenario, caps: &Caps) -> Outcome {
    let h = group(s, caps)?;
    let sizes = s.params.blocks.as_deref().expect("checked at parse time");
    let conj = s
        .params
        .kconj
        .clone()
        .unwrap_or_else(|| FqMatrix::identity(s.n));
    let k = BlockSubgroup::conjugated(&s.field, sizes, conj.clone())?;
    let rep = relative_cr(&h, &k, caps)?;
    let value = json!({
        "order": h.order(),
        "blocks": sizes,
        "conjugator": matrix_json(&conj),
        "direct": rep.direct,
        "via_building": rep.via_building,
        "cocharacter_pairs": rep.cocharacter_pairs,
        "k_simplices": rep.k_simplices,
        "stable_k_simplices": rep.stable_k_simplices,
        "counterexample": rep.counterexample.as_ref().map(k_simplex_json),
    });
    Ok((value, vec![("direct_equals_via_building", rep.agree())]))
}

fn analyze_sigma_variant(s: &Scenario, caps: &Caps) -> Outcome {
    let h = group(s, caps)?;
    let b = Building::build(s.n, &s.field, caps)?;
    let sigma = BuildingAutoSet::new(s.params.sigma.clone(), "sigma")?;
    let rep = sigma_variant_cr(&b, &h, &sigma)?;
    let value = json!({
        "order": h.order(),
        "sigma": s.params.sigma.iter().map(auto_json).collect::<Vec<_>>(),
        "verdict": verdict_json(&rep.verdict),
        "literal": rep.literal,
    });
    Ok((value, vec![("literal_agrees", rep.agree())]))
}

fn analyze_clifford(s: &Scenario, caps: &Caps) -> Outcome {
    let h = group(s, caps)?;
    let n = MatGroup::closure(&s.field, s.n, s.params.normal_gens.clone(), caps)?;
    let b = Building::build(s.n, &s.field, caps)?;
    let rep = clifford_check(&b, &h, &n)?;
    let value = json!({
        "order": h.order(),
        "normal_order": n.order(),
        "h": verdict_json(&rep.h),
        "n": verdict_json(&rep.n),
    });
    Ok((value, vec![("consistent", rep.consistent())]))
}

fn analyze_tau(s: &Scenario, caps: &Caps) -> Outcome {
    let h = group(s, caps)?;
    let rep = tau_search(&h, s.params.r_max.unwrap_or(3), caps)?;
    let value = json!({
        "order": h.order(),
        "found": rep.found,
        "rounds": rep.rounds.iter().map(|r| json!({
            "degree": r.degree,
            "h_cr": r.h_cr,
            "normalizer_order": r.normalizer_order,
            "normalizer_cr": r.normalizer_cr,
        })).collect::<Vec<_>>(),
    });
    Ok((value, Vec::new()))
}

fn analyze_topology(s: &Scenario, caps: &Caps) -> Outcome {
    let h = group(s, caps)?;
    let b = Building::build(s.n, &s.field, caps)?;
    let autos = gamma(&h, &s.params.sigma);
    let (mut value, checks, _) = fixed_point_analysis(&b, &autos, caps)?;
    let m = value.as_object_mut().expect("object");
    m.insert("order".into(), json!(h.order()));
    m.insert(
        "sigma".into(),
        Value::Array(s.params.sigma.iter().map(auto_json).collect()),
    );
    Ok((value, checks))
}

fn analyze_levi(s: &Scenario, caps: &Caps) -> Outcome {
    if let Some(sizes) = &s.params.blocks {
        let sphere = LeviSphere::from_block_sizes(&s.field, sizes)?;
        let hp = reduced_homology(&levi_sphere_complex(&sphere));
        let class = classify(&hp, sphere.dim());
        let matching = sphere.opposition_is_perfect_matching(&s.field);
        let expected = sphere.dim() >= 0
            && class
                == TopoClass::SphereBouquetLike {
                    dim: sphere.dim() as usize,
                    count: 1,
                };
        let value = json!({
            "blocks": sizes,
            "dim": sphere.dim(),
            "flags": sphere.flags.len(),
            "opposition_perfect_matching": matching,
            "homology": homology_json(&hp),
            "class": class_json(&class),
        });
        let mut checks = vec![("opposition_perfect_matching", matching)];
        if sizes.len() >= 2 {
            checks.push(("single_sphere", expected));
        }
        return Ok((value, checks));
    }
    let h = group(s, caps)?;
    let b = Building::build(s.n, &s.field, caps)?;
    let fc = FixedComplex::new(&b, &gamma(&h, &s.params.sigma))?;
    let search = levi_sphere_containment(&fc, caps);
    let value = json!({
        "order": h.order(),
        "stable_flags": fc.stable().len(),
        "dim": fc.dim(),
        "search": levi_json(&search),
    });
    Ok((value, Vec::new()))
}

fn row_json(i: usize, r: &CorpusRow) -> Value {
    json!({
        "index": i,
        "order": r.group.order(),
        "generators": r.group.generators().iter().map(matrix_json).collect::<Vec<_>>(),
        "cr": r.is_cr(),
        "semisimple": r.semisimple,
        "stable_flags": r.stable_flags,
        "dim": r.dim,
        "homology": homology_json(&r.homology),
        "class": class_json(&r.class),
        "levi_sphere": levi_outcome_str(r.levi),
        "consistent": r.consistent(),
    })
}

fn analyze_corpus(s: &Scenario, caps: &Caps) -> Outcome {
    let ambient = if s.generators.is_empty() {
        MatGroup::general_linear(&s.field, s.n, caps)?
    } else {
        group(s, caps)?
    };
    let b = Building::build(s.n, &s.field, caps)?;
    let subs = enumerate_subgroups(&ambient, Strategy::Parallel);
    let results = evaluate_all(&b, &subs, caps, Strategy::Parallel);
    let mut rows = Vec::new();
    let mut errors = Vec::new();
    let mut table: Map<String, Value> = Map::new();
    let mut mismatches = 0usize;
    for (i, r) in results.iter().enumerate() {
        match r {
            Ok(row) => {
                if !row.consistent() {
                    mismatches += 1;
                }
                let class = match row.class {
                    TopoClass::PointLike => "PointLike",
                    TopoClass::SphereBouquetLike { .. } => "SphereBouquetLike",
                    TopoClass::Other => "Other",
                };
                let key = format!(
                    "cr={} semisimple={} class={} levi={}",
                    row.is_cr(),
                    row.semisimple,
                    if row.stable_flags == 0 {
                        "empty"
                    } else {
                        class
                    },
                    levi_outcome_str(row.levi)
                );
                let slot = table.entry(key).or_insert(json!(0));
                *slot = json!(slot.as_u64().unwrap_or(0) + 1);
                rows.push(row_json(i, row));
            }
            Err(e) => {
                errors.push(json!({ "index": i, "order": subs[i].order(), "error": e.to_string() }))
            }
        }
    }
    let value = json!({
        "ambient_order": ambient.order(),
        "subgroups": subs.len(),
        "mismatches": mismatches,
        "errors": errors,
        "agreement": table,
        "rows": rows,
    });
    Ok((value, vec![("all_rows_consistent", mismatches == 0)]))
}

fn dispatch(s: &Scenario, caps: &Caps, seed: u64) -> Outcome {
    match s.analysis {
        Analysis::Cr => analyze_cr(s, caps, seed),
        Analysis::SigmaCr => analyze_sigma_cr(s, caps),
        Analysis::GsigmaCr => analyze_gsigma_cr(s, caps),
        Analysis::RelativeCr => analyze_relative(s, caps),
        Analysis::SigmaVariantCr => analyze_sigma_variant(s, caps),
        Analysis::Clifford => analyze_clifford(s, caps),
        Analysis::TauSearch => analyze_tau(s, caps),
        Analysis::Topology => analyze_topology(s, caps),
        Analysis::LeviSphere => analyze_levi(s, caps),
        Analysis::Corpus => analyze_corpus(s, caps),
    }
}

/// Runs one scenario. Library errors (for example an exceeded cap) are
/// recorded in the report rather than propagated.
pub fn run(s: &Scenario, opts: &RunOptions) -> Report {
    let caps = s.caps(&opts.caps);
    let start = Instant::now();
    let outcome = dispatch(s, &caps, opts.seed);
    let elapsed = start.elapsed();
    let (result, checks, error) = match outcome {
        Ok((v, c)) => (v, c, None),
        Err(e) => (Value::Null, Vec::new(), Some(e.to_string())),
    };
    let violations: Vec<String> = checks
        .iter()
        .filter(|(_, ok)| !ok)
        .map(|(k, _)| k.to_string())
        .collect();
    let invariants: Map<String, Value> = checks
        .iter()
        .map(|(k, ok)| (k.to_string(), json!(ok)))
        .collect();
    let value = json!({
        "id": s.id,
        "analysis": s.analysis.name(),
        "group": {
            "n": s.n,
            "p": s.field.characteristic(),
            "m": s.field.degree(),
            "q": s.field.order(),
            "generators": s.generators.iter().map(matrix_json).collect::<Vec<_>>(),
        },
        "result": result,
        "error": error,
        "invariants": invariants,
        "ok": violations.is_empty() && error.is_none(),
        "timings": { "total_ms": elapsed.as_secs_f64() * 1000.0 },
        "tool": { "name": TOOL, "version": env!("CARGO_PKG_VERSION") },
    });
    Report {
        id: s.id.clone(),
        value,
        violations,
        error,
    }
}

/// Runs scenarios independently in parallel, keeping input order.
pub fn run_batch(scenarios: &[Scenario], opts: &RunOptions) -> Vec<Report> {
    tits_cr::exec::map(Strategy::Parallel, scenarios, |s| run(s, opts))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scenario::parse_scenario;

    fn report(text: &str) -> Report {
        run(&parse_scenario(text).unwrap(), &RunOptions::default())
    }

    #[test]
    fn unipotent_report() {
        let r = report("id = u\nn = 2\np = 2\nanalysis = cr\ngen = [[1,1],[0,1]]\n");
        assert!(r.ok(), "{:?}", r.violations);
        let res = &r.value["result"];
        assert_eq!(res["verdict"]["cr"], json!(false));
        assert_eq!(
            res["verdict"]["counterexample"],
            json!([{ "dim": 1, "basis": [[1, 0]] }])
        );
        assert_eq!(res["class"], json!({ "tag": "PointLike" }));
        assert_eq!(res["semisimple"], json!(false));
    }

    #[test]
    fn torus_report() {
        let r = report("id = t\nn = 3\np = 3\nanalysis = cr\ngen = [[2,0,0],[0,1,0],[0,0,1]]\ngen = [[1,0,0],[0,2,0],[0,0,1]]\n");
        assert!(r.ok(), "{:?}", r.violations);
        let res = &r.value["result"];
        assert_eq!(res["verdict"]["cr"], json!(true));
        assert_eq!(
            res["class"],
            json!({ "tag": "SphereBouquetLike", "dim": 1, "count": 1 })
        );
        assert_eq!(res["levi_sphere"]["outcome"], json!("found"));
    }

    #[test]
    fn cap_errors_are_reported_per_item() {
        let r = report("id = big\nn = 3\np = 3\nanalysis = cr\ncap_subspaces = 5\n");
        assert!(r.error.as_deref().unwrap().contains("exceeds the cap"));
        assert_eq!(r.value["ok"], json!(false));
    }

    #[test]
    fn flags_round_trip() {
        let f2 = Field::new(2, 1).unwrap();
        let b = Building::build(3, &f2, &Caps::default()).unwrap();
        for f in b.flags() {
            assert_eq!(flag_from_json(&f2, 3, &flag_json(f)).as_ref(), Some(f));
        }
    }
}
