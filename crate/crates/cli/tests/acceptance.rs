//! Acceptance suite. One line per criterion on stdout; exits non-zero if any fails.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::{Path, PathBuf};
use std::process::Command;
use std::sync::Arc;
use std::time::{Duration, Instant};

use awfslab::algebra::{
    count_problems, identity_structure, make_lifting_function, replay_cells, soa_factorize, vertical_compose, LiftingFunction,
    SoaConfig, SoaError, SoaMode,
};
use awfslab::gen::*;
use awfslab::jfib::{is_jfib_morphism, extend_along, validate_jfib, JFibObject, ExtendError};
use awfslab::json::*;
use awfslab::lifting::{enumerate_fillers, j_edge, j_point, Choice};
use awfslab::pushout::Presheaf;
use awfslab::ssset::horns_up_to;
use awfslab::{Arrow, Exec, FiniteCategory, FiniteGraph, Instance, SemiSimplicialSet};
use awfslab_cli::{run_in, Outcome};
use serde_json::Value;

type Verdict = Result<String, String>;

fn fixtures() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

fn args(s: &str) -> Vec<String> {
    s.split_whitespace().map(str::to_string).collect()
}

/// Commands run so far, for the determinism rerun.
#[derive(Default)]
struct Runs(Vec<(Vec<String>, i32, String)>);

impl Runs {
    fn run(&mut self, cmd: &str) -> (Outcome, Duration) {
        let a = args(cmd);
        let t = Instant::now();
        let o = run_in(&fixtures(), &a);
        let dt = t.elapsed();
        self.0.push((a, o.exit, o.text()));
        (o, dt)
    }
}

fn finding<'a>(o: &'a Outcome, check: &str) -> Result<&'a Value, String> {
    o.report["findings"]
        .as_array()
        .and_then(|fs| fs.iter().find(|f| f["check"] == check || f["law"] == check))
        .ok_or_else(|| format!("no `{check}` finding in {}", o.text()))
}

fn passed(o: &Outcome, check: &str) -> Result<(), String> {
    let f = finding(o, check)?;
    if f["status"] == "pass" {
        Ok(())
    } else {
        Err(format!("{check}: {f}"))
    }
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn counterexample(runs: &mut Runs) -> Verdict {
    let (o, dt) = runs.run("catgph counterexample");
    ensure(o.exit == 0, || format!("exit {}", o.exit))?;
    let w = finding(&o, "not_weak_equivalence")?;
    ensure(w["pi0_source"] == 2 && w["pi0_target"] == 1 && w["status"] == "pass", || format!("pi0: {w}"))?;
    passed(&o, "structural_shortcut")?;
    let p = finding(&o, "probe")?;
    ensure(p["holds"] == true && p["max_nodes"] == 4 && p["status"] == "pass", || format!("probe: {p}"))?;
    ensure(dt < Duration::from_secs(10), || format!("took {dt:?}"))?;
    Ok(format!("pi0 (2,1), shortcut PASS, {} monos on <= 4 nodes, {dt:.2?}", p["monos"]))
}

fn comonad(runs: &mut Runs) -> Verdict {
    let (o, dt) = runs.run("catgph comonad-laws --corpus --mutations");
    ensure(o.exit == 0, || format!("exit {}: {}", o.exit, o.text()))?;
    let info = &o.report["findings"][0]["corpus"];
    let b = &info["bounds"];
    ensure(b["max_objects"] == 3 && b["max_morphisms"] == 6 && info["random"] == 100, || format!("corpus {info}"))?;
    for law in ["counit_left", "counit_right", "coassociativity"] {
        passed(&o, law)?;
    }
    let m = finding(&o, "mutations")?;
    ensure(m["status"] == "pass" && m["total"].as_u64().unwrap_or(0) > 0, || format!("mutations {m}"))?;
    ensure(dt < Duration::from_secs(60), || format!("took {dt:?}"))?;
    Ok(format!("{} generated + 100 random categories, {} mutations all caught, {dt:.2?}", info["generated"], m["total"]))
}

fn extend_ok<C: Instance>(inst: &ExtendInstance<C>, choice: Choice) -> Result<(), String> {
    let (z, _) = extend_along(&inst.x, &inst.y, &inst.i, &inst.q, choice, Exec::default()).map_err(|e| e.to_string())?;
    ensure(validate_jfib(&z).is_empty(), || "structure invalid".into())?;
    ensure(is_jfib_morphism(&inst.i.hom, &inst.x, &z), || "i does not preserve".into())?;
    ensure(is_jfib_morphism(&inst.q.hom, &z, &inst.y), || "q does not preserve".into())
}

fn moved<C: Instance>(f: &awfslab::Hom, x: &JFibObject<C>, y: &JFibObject<C>, k: &awfslab::jfib::ExtKey) -> bool {
    let e = x.get(k.j, &k.a).expect("key of x");
    y.get(k.j, &k.a.then(f)) != Some(&e.then(f))
}

fn defect_ok<C: Instance>(inst: &ExtendInstance<C>, d: Defect) -> Result<(), String> {
    match (d, extend_along(&inst.x, &inst.y, &inst.i, &inst.q, Choice::First, Exec::default())) {
        (Defect::NonMono, Err(ExtendError::NotMono { sort, first, second })) => ensure(
            first != second && inst.i.hom.image(sort, first) == inst.i.hom.image(sort, second),
            || "mono witness does not collide".into(),
        ),
        (Defect::NonFibration, Err(ExtendError::NotFibration { generator, square })) => ensure(
            square.right == inst.q && square.left == inst.x.gens[generator] && enumerate_fillers(&square, Some(1)).is_empty(),
            || "fibration witness has a filler".into(),
        ),
        (Defect::NonMorphism, Err(ExtendError::NotMorphism(k))) => ensure(moved(&inst.i.hom.then(&inst.q.hom), &inst.x, &inst.y, &k), || {
            "morphism witness is preserved".into()
        }),
        (d, other) => Err(format!("{d:?} gave {:?}", other.map(|_| ()))),
    }
}

fn extension(runs: &mut Runs) -> Verdict {
    let mut r = rng(DEFAULT_SEED);
    for n in 0..500 {
        let res = if n % 2 == 0 {
            let inst = extension_graph_instance(&mut r);
            extend_ok(&inst, Choice::First).and_then(|_| extend_ok(&inst, Choice::Last))
        } else {
            let inst = extension_ss_instance(&mut r);
            extend_ok(&inst, Choice::First).and_then(|_| extend_ok(&inst, Choice::Last))
        };
        res.map_err(|e| format!("instance {n}: {e}"))?;
    }
    for n in 0..100 {
        let d = Defect::ALL[n % 3];
        let res = if (n / 3) % 2 == 0 {
            defect_ok(&extension_graph_defect(&mut r, d), d)
        } else {
            defect_ok(&extension_ss_defect(&mut r, d), d)
        };
        res.map_err(|e| format!("defect fixture {n}: {e}"))?;
    }
    let (o, _) = runs.run("jfib extend --x extend_graph/x.json --y extend_graph/y.json --i extend_graph/i.json --q extend_graph/q.json");
    ensure(o.exit == 0, || o.text())?;
    let (o, _) = runs.run("jfib extend --x extend_ss/x.json --y extend_ss/y.json --i extend_ss/i.json --q extend_ss/q.json --choice last");
    ensure(o.exit == 0, || o.text())?;
    for (d, violated) in [("non_mono", "mono"), ("non_fibration", "fibration"), ("non_morphism", "morphism")] {
        let dir = format!("defect_{d}");
        let (o, _) = runs.run(&format!("jfib extend --x {dir}/x.json --y {dir}/y.json --i {dir}/i.json --q {dir}/q.json"));
        let f = finding(&o, "precondition")?;
        ensure(o.exit == 1 && f["violated"] == violated && f.get("witness").is_some(), || o.text())?;
    }
    Ok("500 instances under first and last choice, 100 defect fixtures rejected with checked witnesses".into())
}

fn vertical_chain<C: Instance>(chain: &[Arrow<C>], gens: &Arc<Vec<Arrow<C>>>, made: &mut Vec<LiftingFunction<C>>) -> Result<(), String> {
    let e = |e: awfslab::algebra::AlgebraError<C>| e.to_string();
    let phis = chain
        .iter()
        .map(|f| make_lifting_function(f, gens.clone(), None, Choice::Last, Exec::default()).map_err(e))
        .collect::<Result<Vec<_>, _>>()?;
    for phi in &phis {
        let left = identity_structure(phi.carrier.dom.clone(), gens.clone());
        let right = identity_structure(phi.carrier.cod.clone(), gens.clone());
        ensure(vertical_compose(&left, phi).map_err(e)? == *phi, || "left unit".into())?;
        ensure(vertical_compose(phi, &right).map_err(e)? == *phi, || "right unit".into())?;
        made.extend([left, right]);
    }
    let ab = vertical_compose(&phis[0], &phis[1]).map_err(e)?;
    let bc = vertical_compose(&phis[1], &phis[2]).map_err(e)?;
    let l = vertical_compose(&ab, &phis[2]).map_err(e)?;
    let r = vertical_compose(&phis[0], &bc).map_err(e)?;
    ensure(l == r, || "associativity".into())?;
    made.extend(phis);
    made.extend([ab, bc, l, r]);
    Ok(())
}

fn algebra_laws(_: &mut Runs) -> Verdict {
    let mut r = rng(DEFAULT_SEED);
    let gg = Arc::new(vec![j_point(), j_edge()]);
    let sg = Arc::new(horns_up_to(2, 2).map_err(|e| e.to_string())?);
    let mut graphs = Vec::new();
    let mut sss = Vec::new();
    for n in 0..30 {
        vertical_chain(&graph_fibration_chain(&mut r, 3), &gg, &mut graphs).map_err(|e| format!("graph chain {n}: {e}"))?;
        vertical_chain(&codiscrete_fibration_chain(&mut r, 3), &sg, &mut sss).map_err(|e| format!("simplicial chain {n}: {e}"))?;
    }
    let mut cats: Vec<LiftingFunction<FiniteCategory>> = free_rmap_corpus(FREE_RMAP_BOUNDS).into_iter().map(|(_, phi)| phi).collect();
    cats.push(awfslab::catgph::two_lift_fixture().1);
    let bad = graphs.iter().filter(|p| !p.is_valid(Exec::default())).count()
        + sss.iter().filter(|p| !p.is_valid(Exec::default())).count()
        + cats.iter().filter(|p| !p.is_valid(Exec::default())).count();
    ensure(bad == 0, || format!("{bad} structures fail re-verification"))?;
    Ok(format!("60 three-step chains, {} structures re-verified", graphs.len() + sss.len() + cats.len()))
}

fn soa_contract<C: Presheaf>(f: &Arrow<C>, gens: &Arc<Vec<Arrow<C>>>, mode: SoaMode) -> Result<bool, String> {
    let cfg = SoaConfig {
        max_rounds: 5,
        mode,
        problem_limit: Some(20_000),
        ..SoaConfig::default()
    };
    let fact = match soa_factorize(f, gens.clone(), cfg) {
        Ok(x) => x,
        Err(SoaError::BudgetExhausted { .. } | SoaError::TooManyProblems { .. }) => return Ok(false),
        Err(e) => return Err(e.to_string()),
    };
    ensure(fact.left.then(&fact.right.carrier) == *f, || "r after l differs from f".into())?;
    let (e, l) = replay_cells(&f.dom, gens, &fact.cells).map_err(|e| e.to_string())?;
    ensure(*e == *fact.right.carrier.dom && l == fact.left.hom, || "cells do not replay".into())?;
    ensure(fact.right.verify(Exec::default()).is_empty(), || "right structure invalid".into())?;
    ensure(fact.right.len() == count_problems(&fact.right.carrier, gens), || "right structure not total".into())?;
    Ok(true)
}

fn soa(runs: &mut Runs) -> Verdict {
    let mut r = rng(DEFAULT_SEED);
    let gg = Arc::new(vec![j_point(), j_edge()]);
    let sg = Arc::new(SemiSimplicialSet::named_generators("boundaries", 2).ok_or("boundaries")?);
    let modes = [SoaMode::Free, SoaMode::ReuseExisting];
    let (mut graphs, mut sss, mut tried) = (0, 0, 0);
    while (graphs < 25 || sss < 25) && tried < 1000 {
        let mode = modes[tried % 2];
        if graphs < 25 && soa_contract::<FiniteGraph>(&soa_graph_instance(&mut r), &gg, mode)? {
            graphs += 1;
        }
        if sss < 25 && soa_contract::<SemiSimplicialSet>(&soa_ss_instance(&mut r), &sg, mode)? {
            sss += 1;
        }
        tried += 1;
    }
    ensure(graphs == 25 && sss == 25, || format!("only {graphs} + {sss} terminating instances"))?;
    let (o, _) = runs.run("factorize --map horn_to_point.json --gens horns --max-rounds 3");
    let f = finding(&o, "run")?;
    let out: Vec<u64> = f["detail"]["outstanding"].as_array().map(|a| a.iter().filter_map(Value::as_u64).collect()).unwrap_or_default();
    ensure(
        o.exit == 3 && f["code"] == "budget_exhausted" && out.len() == 4 && out.windows(2).all(|w| w[0] < w[1]),
        || o.text(),
    )?;
    Ok(format!("25 graph + 25 simplicial factorisations in {tried} tries, horn budget outstanding {out:?}"))
}

fn rmaps(runs: &mut Runs) -> Verdict {
    let (a, _) = runs.run("catgph rmap-iff-section --corpus");
    passed(&a, "agree")?;
    let (b, _) = runs.run("catgph free-rmap --corpus");
    passed(&b, "unique_mediator")?;
    let (c, _) = runs.run("catgph free-rmap --guard");
    passed(&c, "unique_mediator")?;
    passed(&c, "guard")?;
    let a = finding(&a, "agree")?;
    let b = finding(&b, "unique_mediator")?;
    Ok(format!("{} functors agree, {} free R-maps with one mediator, guard separates", a["functors"], b["instances"]))
}

fn tfib(runs: &mut Runs) -> Verdict {
    let (o, _) = runs.run("catgph tfib-check --corpus");
    passed(&o, "agree")?;
    let f = finding(&o, "agree")?;
    ensure(f["disagreements"] == 0, || f.to_string())?;
    Ok(format!("{} functors, {} trivial fibrations, 0 disagreements", f["functors"], f["trivial_fibrations"]))
}

fn round_trip_as<C: Codec>(v: &Value) -> awfslab::Result<Value> {
    match v["kind"].as_str().unwrap_or("") {
        "square" => Ok(square_to_value(&square_from_value::<C>(v)?)),
        "jfib" => Ok(jfib_to_value(&jfib_from_value::<C>(v)?)),
        "lifting_function" => Ok(lifting_function_to_value(&lifting_function_from_value::<C>(v)?)),
        k if k == C::KIND => Ok(C::from_value(v)?.to_value()),
        _ => Ok(arrow_to_value(&arrow_from_value::<C>(v)?)),
    }
}

/// Re-encodes an emitted or stored instance; `None` for values that are not instances.
fn round_trip(v: &Value) -> Option<awfslab::Result<Value>> {
    let kind = v.get("kind")?.as_str()?;
    let inner = match kind {
        "square" => &v["left"],
        "jfib" | "lifting_function" => &v["carrier"],
        _ => v,
    };
    Some(match inner["kind"].as_str()? {
        "graph" | "graph_map" => round_trip_as::<FiniteGraph>(v),
        "category" | "functor" => round_trip_as::<FiniteCategory>(v),
        "ssset" | "ss_map" => round_trip_as::<SemiSimplicialSet>(v),
        _ => return None,
    })
}

fn emitted_round_trip(v: &Value, count: &mut usize) -> Result<(), String> {
    if let Some(r) = round_trip(v) {
        *count += 1;
        let back = r.map_err(|e| format!("{e}: {v}"))?;
        return ensure(back == *v, || format!("changed on round trip: {v}"));
    }
    match v {
        Value::Array(a) => a.iter().try_for_each(|x| emitted_round_trip(x, count)),
        Value::Object(m) => m.values().try_for_each(|x| emitted_round_trip(x, count)),
        _ => Ok(()),
    }
}

fn json_files(dir: &Path, out: &mut Vec<PathBuf>) {
    let mut entries: Vec<_> = std::fs::read_dir(dir).expect("fixtures dir").flatten().map(|e| e.path()).collect();
    entries.sort();
    for p in entries {
        if p.is_dir() {
            json_files(&p, out);
        } else if p.extension().is_some_and(|e| e == "json") {
            out.push(p);
        }
    }
}

fn determinism(runs: &mut Runs) -> Verdict {
    let bin = env!("CARGO_BIN_EXE_awfslab");
    for (a, exit, text) in &runs.0 {
        let out = Command::new(bin).args(a).current_dir(fixtures()).env_remove("AWFSLAB_SEED").output().map_err(|e| e.to_string())?;
        ensure(out.stdout == text.as_bytes(), || format!("binary output differs: {a:?}"))?;
        ensure(out.status.code() == Some(*exit), || format!("binary exit {:?} for {a:?}", out.status.code()))?;
    }
    let mut emitted = 0;
    for (_, _, text) in &runs.0 {
        let v: Value = serde_json::from_str(text).map_err(|e| e.to_string())?;
        emitted_round_trip(&v, &mut emitted)?;
    }
    let mut files = Vec::new();
    json_files(&fixtures(), &mut files);
    let mut instances = 0;
    for p in &files {
        let text = std::fs::read_to_string(p).map_err(|e| e.to_string())?;
        let v = parse(&text).map_err(|e| format!("{}: {e}", p.display()))?;
        let Some(back) = round_trip(&v) else { continue };
        let back = back.map_err(|e| format!("{}: {e}", p.display()))?;
        ensure(canonical(&back) == text, || format!("{} changes on round trip", p.display()))?;
        instances += 1;
    }
    ensure(instances > 0, || "no fixtures found".into())?;
    Ok(format!(
        "{} commands byte-identical on a second run through the binary, {emitted} emitted and {instances} fixture instances round-trip",
        runs.0.len()
    ))
}

fn main() {
    let criteria: [(&str, fn(&mut Runs) -> Verdict); 8] = [
        ("codiagonal counterexample", counterexample),
        ("comonad laws", comonad),
        ("extension along mono and fibration", extension),
        ("vertical composition laws", algebra_laws),
        ("small object argument contract", soa),
        ("R-maps, sections and freeness", rmaps),
        ("trivial fibration characterisation", tfib),
        ("determinism and round-trip", determinism),
    ];
    let mut runs = Runs::default();
    let mut failed = 0;
    for (n, (name, f)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let v = catch_unwind(AssertUnwindSafe(|| f(&mut runs))).unwrap_or_else(|_| Err("panicked".into()));
        match v {
            Ok(d) => println!("PASS {} {name}: {d} [{:.1?}]", n + 1, t.elapsed()),
            Err(e) => {
                failed += 1;
                println!("FAIL {} {name}: {e}", n + 1);
            }
        }
    }
    if failed > 0 {
        println!("{failed} of {} criteria failed", criteria.len());
        std::process::exit(1);
    }
    println!("all {} criteria pass", criteria.len());
}
