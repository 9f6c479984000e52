//! validate, lift, rlp, factorize

use std::path::Path;
use std::sync::Arc;

use awfslab::algebra::{replay_cells, soa_factorize, SoaConfig, SoaError, SoaMode};
use awfslab::category::validate_category;
use awfslab::gen::probe_monos;
use awfslab::jfib::validate_jfib;
use awfslab::json::*;
use awfslab::lifting::{has_rlp, Choice};
use awfslab::pushout::Presheaf;
use awfslab::{Arrow, Exec, FiniteCategory, FiniteGraph, SemiSimplicialSet};
use serde_json::{json, Value};

use crate::input::{by_kind, by_presheaf_kind, generators, read_value, Kind};
use crate::report::{CliError, CmdResult, Findings};
use crate::{Ctx, FactorizeArgs};

/// Law violations of an object, as report values.
pub trait Checked: Codec {
    fn violations(&self) -> Vec<Value>;
}

impl Checked for FiniteGraph {
    fn violations(&self) -> Vec<Value> {
        Vec::new()
    }
}

impl Checked for FiniteCategory {
    fn violations(&self) -> Vec<Value> {
        validate_category(self).iter().map(|v| serde_json::to_value(v).expect("serialisable")).collect()
    }
}

impl Checked for SemiSimplicialSet {
    fn violations(&self) -> Vec<Value> {
        self.identity_violations().iter().map(|v| serde_json::to_value(v).expect("serialisable")).collect()
    }
}

fn field<'a>(v: &'a Value, key: &str) -> Result<&'a Value, CliError> {
    v.get(key).ok_or_else(|| CliError::input("schema_violation", format!("missing field `{key}`")))
}

fn kind_str(v: &Value) -> &str {
    v.get("kind").and_then(Value::as_str).unwrap_or("")
}

fn object_findings<C: Checked>(f: &mut Findings, role: &str, c: &C) {
    let v = c.violations();
    f.check(role, v.is_empty(), json!({"kind": C::KIND, "violations": v}));
}

fn validate_object<C: Checked>(v: &Value) -> CmdResult {
    let c = C::from_value(v)?;
    let mut f = Findings::default();
    object_findings(&mut f, "object", &c);
    f.push(json!({"instance": c.to_value()}));
    Ok(f)
}

fn validate_map<C: Checked>(v: &Value) -> CmdResult {
    let dom = C::from_value(field(v, "source")?)?;
    let cod = C::from_value(field(v, "target")?)?;
    let mut f = Findings::default();
    object_findings(&mut f, "source", &dom);
    object_findings(&mut f, "target", &cod);
    let hom = C::decode_hom(&dom, &cod, v)?;
    match hom.map_violation(&dom, &cod) {
        None => {
            let a = Arrow::new_unchecked(Arc::new(dom), Arc::new(cod), hom);
            f.check("map", true, json!({"mono": a.is_mono(), "epi": a.is_epi()}));
            f.push(json!({"instance": arrow_to_value(&a)}));
        }
        Some(why) => f.check("map", false, json!({"witness": why})),
    }
    Ok(f)
}

fn validate_square<C: Checked>(v: &Value) -> CmdResult {
    let mut f = Findings::default();
    match square_from_value::<C>(v) {
        Ok(s) => {
            f.check("square", true, Value::Null);
            f.push(json!({"instance": square_to_value(&s)}));
        }
        Err(awfslab::Error::NotAMap(why)) => f.check("square", false, json!({"witness": why})),
        Err(e) => return Err(e.into()),
    }
    Ok(f)
}

fn validate_jfib_file<C: Checked>(v: &Value) -> CmdResult {
    let x = jfib_from_value::<C>(v)?;
    let mut f = Findings::default();
    object_findings(&mut f, "carrier", &*x.carrier);
    let bad: Vec<Value> = validate_jfib(&x)
        .iter()
        .map(|b| json!({"violation": b.kind(), "key": ext_key_to_value(&*x.carrier, &x.gens, b.key())}))
        .collect();
    f.check("chosen_extensions", bad.is_empty(), json!({"entries": x.chooser().len(), "violations": bad}));
    f.push(json!({"instance": jfib_to_value(&x)}));
    Ok(f)
}

fn validate_lifting_function<C: Checked>(v: &Value) -> CmdResult {
    let phi = lifting_function_from_value::<C>(v)?;
    let mut f = Findings::default();
    let bad: Vec<Value> = phi
        .verify(Exec::default())
        .iter()
        .map(|b| json!({"violation": b.kind(), "problem": problem_to_value(&phi.carrier, &phi.gens, b.problem())}))
        .collect();
    f.check("lifting_function", bad.is_empty(), json!({"entries": phi.len(), "violations": bad}));
    f.push(json!({"instance": lifting_function_to_value(&phi)}));
    Ok(f)
}

pub fn validate(ctx: &Ctx, input: &Path) -> CmdResult {
    let v = read_value(ctx, input)?;
    match kind_str(&v) {
        "graph" | "category" | "ssset" => by_kind!(Kind::of_object(&v)?, validate_object(&v)),
        "graph_map" | "functor" | "ss_map" => by_kind!(Kind::of_map(&v)?, validate_map(&v)),
        "square" => by_kind!(Kind::of_map(field(&v, "left")?)?, validate_square(&v)),
        "jfib" => by_kind!(Kind::of_object(field(&v, "carrier")?)?, validate_jfib_file(&v)),
        "lifting_function" => by_kind!(Kind::of_map(field(&v, "carrier")?)?, validate_lifting_function(&v)),
        k => Err(CliError::input("schema_violation", format!("unknown kind `{k}`"))),
    }
}

fn lift_at<C: Codec>(v: &Value, choice: Choice) -> CmdResult {
    let s = square_from_value::<C>(v)?;
    let mut f = Findings::default();
    match s.filler(choice) {
        Some(d) => f.check("filler", true, json!({"filler": hom_to_value(&*s.left.cod, &*s.right.dom, &d)})),
        None => f.check("filler", false, json!({"witness": square_to_value(&s)})),
    }
    Ok(f)
}

pub fn lift(ctx: &Ctx, square: &Path, choice: Choice) -> CmdResult {
    let v = read_value(ctx, square)?;
    by_kind!(Kind::of_map(field(&v, "left")?)?, lift_at(&v, choice))
}

fn dim_of<C: Codec>(f: &Arrow<C>) -> usize {
    f.dom.dim_hint().max(f.cod.dim_hint())
}

fn rlp_findings<C: Codec>(f: &Arrow<C>, gens: &[Arrow<C>], against: Value) -> Findings {
    let out = has_rlp(f, gens, Exec::default());
    let mut fs = Findings::default();
    let mut extra = json!({"against": against, "generators": gens.len(), "squares_checked": out.squares_checked});
    if let Some((k, s)) = &out.witness {
        extra["witness"] = json!({"generator": k, "square": square_to_value(s)});
    }
    fs.check("rlp", out.holds, extra);
    fs
}

fn rlp_at<C: Codec>(ctx: &Ctx, v: &Value, against: &str) -> CmdResult {
    let f: Arrow<C> = arrow_from_value(v)?;
    let gens = generators::<C>(ctx, against, dim_of(&f))?;
    Ok(rlp_findings(&f, &gens, Value::String(against.into())))
}

pub fn rlp(ctx: &Ctx, map: &Path, against: Option<&str>, probe_nodes: usize, probe_edges: usize) -> CmdResult {
    let v = read_value(ctx, map)?;
    let kind = Kind::of_map(&v)?;
    match (kind, against) {
        (Kind::Graph, None) => {
            let f: Arrow<FiniteGraph> = arrow_from_value(&v)?;
            let monos = probe_monos(probe_nodes, probe_edges);
            Ok(rlp_findings(&f, &monos, json!({"monos": {"max_nodes": probe_nodes, "max_edges": probe_edges}})))
        }
        (Kind::Category, None) => rlp_at::<FiniteCategory>(ctx, &v, "cat"),
        (Kind::SSet, None) => rlp_at::<SemiSimplicialSet>(ctx, &v, "horns"),
        (_, Some(a)) => by_kind!(kind, rlp_at(ctx, &v, a)),
    }
}

pub(crate) fn soa_error(e: SoaError) -> CliError {
    match e {
        SoaError::BudgetExhausted { rounds, outstanding } => CliError::budget(
            format!("problems remain after {rounds} rounds"),
            json!({"rounds": rounds, "outstanding": outstanding}),
        ),
        SoaError::TooManyProblems { limit } => CliError::input("bound_violation", format!("more than {limit} lifting problems in one round")),
        SoaError::Instance(e) => e.into(),
    }
}

fn factorize_at<C: Codec + Presheaf>(ctx: &Ctx, v: &Value, a: &FactorizeArgs) -> CmdResult {
    let f: Arrow<C> = arrow_from_value(v)?;
    let gens = Arc::new(generators::<C>(ctx, &a.gens, dim_of(&f))?);
    let cfg = SoaConfig {
        max_rounds: a.max_rounds,
        mode: if a.reuse_existing { SoaMode::ReuseExisting } else { SoaMode::Free },
        choice: a.choice.into(),
        exec: Exec::default(),
        problem_limit: Some(a.problem_limit),
    };
    let fact = soa_factorize(&f, gens.clone(), cfg).map_err(soa_error)?;
    let mut fs = Findings::default();
    fs.check("composite", fact.left.then(&fact.right.carrier) == f, Value::Null);
    let (e, l) = replay_cells(&f.dom, &gens, &fact.cells)?;
    fs.check("replay", *e == *fact.right.carrier.dom && l == fact.left.hom, json!({"cells": fact.cells.len()}));
    let bad = fact.right.verify(Exec::default());
    fs.check("right_structure", bad.is_empty(), json!({"entries": fact.right.len(), "violations": bad.len()}));
    let mut out = json!({
        "attached_per_round": fact.attached_per_round,
        "left": arrow_to_value(&fact.left),
        "right": arrow_to_value(&fact.right.carrier),
    });
    if a.structure {
        out["structure"] = lifting_function_to_value(&fact.right);
    }
    fs.push(out);
    Ok(fs)
}

pub fn factorize(ctx: &Ctx, a: &FactorizeArgs) -> CmdResult {
    let v = read_value(ctx, &a.map)?;
    by_presheaf_kind!(Kind::of_map(&v)?, factorize_at(ctx, &v, a))
}
