//! jfib validate | morphism | extend | replace

use std::sync::Arc;

use awfslab::algebra::{SoaConfig, SoaMode};
use awfslab::jfib::{free_jfib_replacement, jfib_morphism_violation, extend_along, validate_jfib, JFibObject, ExtendError, MorphismFailure, ReplacementError};
use awfslab::json::*;
use awfslab::lifting::Choice;
use awfslab::pushout::Presheaf;
use awfslab::ssset::to_terminal;
use awfslab::{Arrow, Exec, FiniteGraph, Hom, Instance, SemiSimplicialSet};
use serde_json::{json, Value};

use crate::basic::{soa_error, validate};
use crate::input::{by_kind, by_presheaf_kind, generators, read_value, Kind};
use crate::report::{CliError, CmdResult, Findings};
use crate::{Ctx, JfibCommand};

pub fn run(ctx: &Ctx, cmd: &JfibCommand) -> CmdResult {
    match cmd {
        JfibCommand::Validate { input } => {
            let v = read_value(ctx, input)?;
            if v.get("kind").and_then(Value::as_str) != Some("jfib") {
                return Err(CliError::input("schema_violation", "expected kind `jfib`"));
            }
            validate(ctx, input)
        }
        JfibCommand::Morphism { map, source, target } => {
            let m = read_value(ctx, map)?;
            let x = read_value(ctx, source)?;
            let y = read_value(ctx, target)?;
            by_kind!(Kind::of_map(&m)?, morphism_at(&m, &x, &y))
        }
        JfibCommand::Extend { x, y, i, q, choice } => {
            let vals = [read_value(ctx, x)?, read_value(ctx, y)?, read_value(ctx, i)?, read_value(ctx, q)?];
            by_kind!(Kind::of_map(&vals[2])?, extend_at(&vals, (*choice).into()))
        }
        JfibCommand::Replace {
            input,
            gens,
            max_rounds,
            free,
        } => {
            let v = read_value(ctx, input)?;
            let cfg = SoaConfig {
                max_rounds: *max_rounds,
                mode: if *free { SoaMode::Free } else { SoaMode::ReuseExisting },
                ..SoaConfig::default()
            };
            by_presheaf_kind!(Kind::of_object(&v)?, replace_at(ctx, &v, gens, cfg))
        }
    }
}

fn failure_value<C: Codec>(x: &JFibObject<C>, e: &MorphismFailure) -> Value {
    match e {
        MorphismFailure::GeneratorMismatch => json!({"failure": "generator_mismatch"}),
        MorphismFailure::NotAMap(why) => json!({"failure": "not_a_map", "reason": why}),
        MorphismFailure::Moved(k) => json!({"failure": "moved", "key": ext_key_to_value(&*x.carrier, &x.gens, k)}),
    }
}

fn morphism_at<C: Codec>(m: &Value, x: &Value, y: &Value) -> CmdResult {
    let f: Arrow<C> = arrow_from_value(m)?;
    let x = jfib_from_value::<C>(x)?;
    let y = jfib_from_value::<C>(y)?;
    if *f.dom != *x.carrier || *f.cod != *y.carrier {
        return Err(CliError::input("schema_violation", "the map does not go between the two carriers"));
    }
    let mut fs = Findings::default();
    match jfib_morphism_violation(&f.hom, &x, &y) {
        None => fs.check("morphism", true, Value::Null),
        Some(e) => fs.check("morphism", false, json!({"witness": failure_value(&x, &e)})),
    }
    Ok(fs)
}

fn element_id<C: Instance>(c: &C, sort: usize, idx: usize) -> &str {
    &c.ids(sort)[idx]
}

fn extend_at<C: Codec>(vals: &[Value; 4], choice: Choice) -> CmdResult {
    let x = jfib_from_value::<C>(&vals[0])?;
    let y = jfib_from_value::<C>(&vals[1])?;
    let i: Arrow<C> = arrow_from_value(&vals[2])?;
    let q: Arrow<C> = arrow_from_value(&vals[3])?;
    let mut fs = Findings::default();
    match extend_along(&x, &y, &i, &q, choice, Exec::default()) {
        Ok((z, counts)) => {
            let bad = validate_jfib(&z).len();
            fs.check("structure", bad == 0, json!({"violations": bad}));
            fs.check("i_preserves", jfib_morphism_violation(&i.hom, &x, &z).is_none(), Value::Null);
            fs.check("q_preserves", jfib_morphism_violation(&q.hom, &z, &y).is_none(), Value::Null);
            fs.push(json!({"through_i": counts.through_i, "lifted": counts.lifted, "z": jfib_to_value(&z)}));
        }
        Err(ExtendError::NotMono { sort, first, second }) => fs.check(
            "precondition",
            false,
            json!({"violated": "mono", "witness": {
                "sort": sort,
                "first": element_id(&*i.dom, sort, first),
                "second": element_id(&*i.dom, sort, second),
                "image": element_id(&*i.cod, sort, i.hom.image(sort, first)),
            }}),
        ),
        Err(ExtendError::NotFibration { generator, square }) => fs.check(
            "precondition",
            false,
            json!({"violated": "fibration", "witness": {"generator": generator, "square": square_to_value(&square)}}),
        ),
        Err(ExtendError::NotMorphism(k)) => fs.check(
            "precondition",
            false,
            json!({"violated": "morphism", "witness": ext_key_to_value(&*x.carrier, &x.gens, &k)}),
        ),
        Err(e @ (ExtendError::InvalidInput { .. } | ExtendError::Shape(_))) => {
            return Err(CliError::input("precondition", e.to_string()));
        }
        Err(e) => fs.check("construction", false, json!({"error": e.to_string()})),
    }
    Ok(fs)
}

/// The map to the terminal object.
pub trait Terminal: Instance + Sized {
    fn to_terminal(x: &Arc<Self>) -> Arrow<Self>;
}

impl Terminal for FiniteGraph {
    fn to_terminal(x: &Arc<Self>) -> Arrow<Self> {
        let t = Arc::new(FiniteGraph::terminal());
        Arrow::new_unchecked(x.clone(), t, Hom::from_parts(vec![vec![0; x.nodes().len()], vec![0; x.edges().len()]]))
    }
}

impl Terminal for SemiSimplicialSet {
    fn to_terminal(x: &Arc<Self>) -> Arrow<Self> {
        to_terminal(x)
    }
}

fn replace_at<C: Codec + Presheaf + Terminal>(ctx: &Ctx, v: &Value, gens: &str, cfg: SoaConfig) -> CmdResult {
    let x = Arc::new(C::from_value(v)?);
    let gens = Arc::new(generators::<C>(ctx, gens, x.dim_hint())?);
    let (fib, fact) = match free_jfib_replacement(&C::to_terminal(&x), gens, cfg) {
        Ok(r) => r,
        Err(ReplacementError::Soa(e)) => return Err(soa_error(e)),
        Err(ReplacementError::Instance(e)) => return Err(e.into()),
        Err(e @ ReplacementError::NotTerminal) => return Err(CliError::input("precondition", e.to_string())),
    };
    let mut fs = Findings::default();
    let bad = validate_jfib(&fib).len();
    fs.check("structure", bad == 0, json!({"violations": bad}));
    fs.push(json!({
        "attached_per_round": fact.attached_per_round,
        "inclusion": arrow_to_value(&fact.left),
        "replacement": jfib_to_value(&fib),
    }));
    Ok(fs)
}
