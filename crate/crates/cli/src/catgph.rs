//! catgph subcommands

use std::path::Path;

use awfslab::algebra::LiftingFunction;
use awfslab::category::validate_category;
use awfslab::catgph::*;
use awfslab::gen::*;
use awfslab::json::*;
use awfslab::lifting::{codiagonal, has_rlp, is_trivial_fibration_cat, j_cat, trivial_fibration_cat_witness};
use awfslab::{Arrow, Exec, FiniteCategory};
use serde_json::{json, Value};

use crate::input::read_value;
use crate::report::{CliError, CmdResult, Findings};
use crate::{BoundsArgs, CatgphCommand, Ctx};

const COF_FAMILY_BOUNDS: CorpusBounds = CorpusBounds {
    max_objects: 2,
    max_morphisms: 2,
    max_endo: 1,
};

fn bounds(b: &BoundsArgs, default: CorpusBounds) -> CorpusBounds {
    CorpusBounds {
        max_objects: b.max_objects.unwrap_or(default.max_objects),
        max_morphisms: b.max_morphisms.unwrap_or(default.max_morphisms),
        max_endo: b.max_endo.unwrap_or(default.max_endo),
    }
}

fn ser<T: serde::Serialize>(t: &T) -> Value {
    serde_json::to_value(t).expect("serialisable")
}

pub fn run(ctx: &Ctx, cmd: &CatgphCommand) -> CmdResult {
    match cmd {
        CatgphCommand::ComonadLaws {
            cat,
            corpus: _,
            bounds: b,
            random,
            mutations,
            max_nesting,
        } => {
            let cfg = ComonadConfig { max_nesting: *max_nesting };
            match cat {
                Some(p) => comonad_one(&category(ctx, p)?, cfg, *mutations),
                None => comonad_corpus(bounds(b, CorpusBounds::default()), *random, ctx.seed, cfg, *mutations),
            }
        }
        CatgphCommand::Counterexample { probe_nodes, probe_edges } => Ok(counterexample(*probe_nodes, *probe_edges)),
        CatgphCommand::RmapIffSection { functor, corpus: _, bounds: b } => match functor {
            Some(p) => {
                let f = functor_file(ctx, p)?;
                let r = rmap_iff_section(&f)?;
                let mut fs = Findings::default();
                fs.check("agree", r.agree, ser(&r));
                Ok(fs)
            }
            None => Ok(rmap_corpus(bounds(b, FUNCTOR_CORPUS_BOUNDS))),
        },
        CatgphCommand::FreeRmap {
            g,
            rstruct,
            corpus,
            guard,
            bounds: b,
        } => {
            if *guard {
                let (g, phi) = two_lift_fixture();
                let r = free_rmap_mediator(&g, &phi)?;
                let mut fs = Findings::default();
                fs.check("unique_mediator", r.unique && r.constructed_is_mediator, ser(&r));
                fs.check("guard", r.commuting > r.mediators, json!({"commuting": r.commuting, "mediators": r.mediators}));
                return Ok(fs);
            }
            if *corpus {
                return Ok(free_rmap_sweep(bounds(b, FREE_RMAP_BOUNDS)));
            }
            match (g, rstruct) {
                (Some(g), Some(r)) => {
                    let g = functor_file(ctx, g)?;
                    let phi: LiftingFunction<FiniteCategory> = lifting_function_from_value(&read_value(ctx, r)?)?;
                    let r = free_rmap_mediator(&g, &phi)?;
                    let mut fs = Findings::default();
                    fs.check("unique_mediator", r.unique && r.constructed_is_mediator, ser(&r));
                    Ok(fs)
                }
                _ => Err(CliError::input("usage", "free-rmap needs --g and --rstruct, --corpus or --guard")),
            }
        }
        CatgphCommand::FCofProbe {
            probe_nodes,
            probe_edges,
            bounds: b,
        } => {
            let family = functor_corpus(&category_corpus(bounds(b, COF_FAMILY_BOUNDS)));
            let r = f_preserves_cofibrations_probe(*probe_nodes, *probe_edges, &family, Exec::default());
            let mut fs = Findings::default();
            fs.check("llp", r.holds, ser(&r));
            fs.check("point_is_surjectivity", r.point_disagreements == 0, json!({"family": family.len()}));
            fs.check("edge_is_fullness", r.edge_disagreements == 0, json!({"family": family.len()}));
            Ok(fs)
        }
        CatgphCommand::TfibCheck { functor, corpus: _, bounds: b } => match functor {
            Some(p) => {
                let f = functor_file(ctx, p)?;
                Ok(tfib_findings(&[f], Value::Null))
            }
            None => {
                let bd = bounds(b, FUNCTOR_CORPUS_BOUNDS);
                let fs = functor_corpus(&category_corpus(bd));
                Ok(tfib_findings(&fs, ser(&bd)))
            }
        },
    }
}

fn category(ctx: &Ctx, p: &Path) -> Result<FiniteCategory, CliError> {
    let c: FiniteCategory = Codec::from_value(&read_value(ctx, p)?)?;
    let bad = validate_category(&c);
    if !bad.is_empty() {
        return Err(CliError::input("precondition", format!("not a category: {}", ser(&bad[0]))));
    }
    Ok(c)
}

fn functor_file(ctx: &Ctx, p: &Path) -> Result<Arrow<FiniteCategory>, CliError> {
    Ok(arrow_from_value(&read_value(ctx, p)?)?)
}

fn law_value(r: &LawResult) -> Value {
    ser(r)
}

/// Outcome of every check on one category.
struct CatRun {
    laws: Vec<LawResult>,
    counit: LawResult,
    mutations: usize,
    undetected: Vec<String>,
}

fn run_category(x: &FiniteCategory, cfg: ComonadConfig, mutations: bool) -> Result<CatRun, awfslab::Error> {
    let laws = comonad_verify(&ComonadData::new(x), cfg)?;
    let counit = counit_rmap_check(x);
    let (mut total, mut undetected) = (0, Vec::new());
    if mutations {
        for m in comonad_mutations(x) {
            total += 1;
            if laws_hold(&comonad_verify(&m.data, cfg)?) {
                undetected.push(m.description);
            }
        }
    }
    Ok(CatRun {
        laws,
        counit,
        mutations: total,
        undetected,
    })
}

fn comonad_one(x: &FiniteCategory, cfg: ComonadConfig, mutations: bool) -> CmdResult {
    let r = run_category(x, cfg, mutations)?;
    let mut fs = Findings::default();
    for l in &r.laws {
        fs.push(law_value(l));
    }
    fs.push(law_value(&r.counit));
    if mutations {
        fs.check("mutations", r.undetected.is_empty(), json!({"total": r.mutations, "undetected": r.undetected}));
    }
    Ok(fs)
}

fn comonad_corpus(b: CorpusBounds, random: usize, seed: u64, cfg: ComonadConfig, mutations: bool) -> CmdResult {
    let mut cats = category_corpus(b);
    let generated = cats.len();
    cats.extend(random_categories(seed, random));
    let runs = Exec::default().map(&cats, |x| run_category(x, cfg, mutations));
    let runs = runs.into_iter().collect::<Result<Vec<_>, _>>()?;
    let mut fs = Findings::default();
    fs.push(json!({"corpus": {"bounds": ser(&b), "generated": generated, "random": random, "seed": seed}}));
    let names: Vec<&'static str> = runs.first().map(|r| r.laws.iter().map(|l| l.law).collect()).unwrap_or_default();
    for (k, name) in names.iter().enumerate() {
        let failing: Vec<usize> = (0..runs.len()).filter(|&i| runs[i].laws[k].status == awfslab::catgph::Status::Fail).collect();
        let mut extra = json!({"categories": runs.len(), "failures": failing.len()});
        if let Some(&i) = failing.first() {
            extra["witness"] = json!({"category": cats[i].to_value(), "generator": runs[i].laws[k].witness});
        }
        fs.check(name, failing.is_empty(), extra);
    }
    let counit_fail = runs.iter().position(|r| r.counit.status == awfslab::catgph::Status::Fail);
    let mut extra = json!({"categories": runs.len()});
    if let Some(i) = counit_fail {
        extra["witness"] = json!({"category": cats[i].to_value(), "generator": runs[i].counit.witness});
    }
    fs.check("counit_section", counit_fail.is_none(), extra);
    if mutations {
        let total: usize = runs.iter().map(|r| r.mutations).sum();
        let undetected: Vec<Value> = runs
            .iter()
            .enumerate()
            .flat_map(|(i, r)| r.undetected.iter().map(move |d| json!({"category": i, "mutation": d})))
            .take(10)
            .collect();
        fs.check("mutations", undetected.is_empty(), json!({"total": total, "undetected": undetected}));
    }
    Ok(fs)
}

fn counterexample(n: usize, e: usize) -> Findings {
    let r = codiagonal_counterexample(n, e, Exec::default());
    let mut fs = Findings::default();
    fs.push(json!({"map": arrow_to_value(&codiagonal())}));
    fs.check(
        "not_weak_equivalence",
        !r.weak_equivalence,
        json!({"pi0_source": r.pi0_source, "pi0_target": r.pi0_target}),
    );
    fs.check("structural_shortcut", r.shortcut_holds, json!({"verdict": r.shortcut}));
    fs.check("probe", r.probe.holds, ser(&r.probe));
    fs.check("conclusion", r.passes(), json!({"conclusion": r.conclusion}));
    fs
}

fn rmap_corpus(b: CorpusBounds) -> Findings {
    let fs: Vec<Arrow<FiniteCategory>> = functor_corpus(&category_corpus(b)).into_iter().filter(is_bijective_on_objects).collect();
    let reports = Exec::default().map(&fs, |f| rmap_iff_section(f).expect("bijective on objects"));
    let bad: Vec<usize> = (0..fs.len()).filter(|&i| !reports[i].agree).collect();
    let mut extra = json!({
        "bounds": ser(&b),
        "functors": fs.len(),
        "with_structure": reports.iter().filter(|r| r.structure_exists).count(),
        "disagreements": bad.len(),
    });
    if let Some(&i) = bad.first() {
        extra["witness"] = json!({"functor": arrow_to_value(&fs[i]), "report": ser(&reports[i])});
    }
    let mut out = Findings::default();
    out.check("agree", bad.is_empty(), extra);
    out
}

fn free_rmap_sweep(b: CorpusBounds) -> Findings {
    let inst = free_rmap_corpus(b);
    let reports = Exec::default().map(&inst, |(g, phi)| free_rmap_mediator(g, phi).expect("valid corpus instance"));
    let bad: Vec<usize> = (0..inst.len()).filter(|&i| !(reports[i].unique && reports[i].constructed_is_mediator)).collect();
    let strict = reports.iter().filter(|r| r.commuting > r.mediators).count();
    let mut extra = json!({"bounds": ser(&b), "instances": inst.len(), "failures": bad.len()});
    if let Some(&i) = bad.first() {
        extra["witness"] = json!({
            "g": arrow_to_value(&inst[i].0),
            "rstruct": lifting_function_to_value(&inst[i].1),
            "report": ser(&reports[i]),
        });
    }
    let mut out = Findings::default();
    out.check("unique_mediator", bad.is_empty(), extra);
    out.check("guard", strict > 0, json!({"instances_with_more_commuting": strict}));
    out
}

fn tfib_findings(fs: &[Arrow<FiniteCategory>], b: Value) -> Findings {
    let gens = j_cat();
    let pairs = Exec::default().map(fs, |f| (is_trivial_fibration_cat(f), has_rlp(f, &gens, Exec::Sequential).holds));
    let bad: Vec<usize> = (0..fs.len()).filter(|&i| pairs[i].0 != pairs[i].1).collect();
    let mut extra = json!({
        "functors": fs.len(),
        "trivial_fibrations": pairs.iter().filter(|p| p.0).count(),
        "disagreements": bad.len(),
    });
    if !b.is_null() {
        extra["bounds"] = b;
    }
    if fs.len() == 1 {
        extra["trivial_fibration"] = json!(pairs[0].0);
        extra["rlp"] = json!(pairs[0].1);
        if let Some(w) = trivial_fibration_cat_witness(&fs[0]) {
            extra["why_not"] = ser(&w);
        }
    }
    if let Some(&i) = bad.first() {
        extra["witness"] = arrow_to_value(&fs[i]);
    }
    let mut out = Findings::default();
    out.check("agree", bad.is_empty(), extra);
    out
}
