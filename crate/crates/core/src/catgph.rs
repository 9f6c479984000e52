//! Categories and graphs: the weak equivalences and cofibrations, the free
//! category comonad `(FU, ε, Fη)`, R-map structures against the generating
//! cofibrations of Cat, free R-maps, and the codiagonal counterexample.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::Serialize;

use crate::algebra::{problems, LiftingFunction};
use crate::category::{pi0_cat, underlying_graph, FiniteCategory};
use crate::error::{Error, Result};
use crate::free::{counit_eps, duplicate, flatten, free_category, Edge, Free, FreeCategory, FunctorFromFree, Gen, Path};
use crate::gen::probe_monos;
use crate::graph::{block_of, pi0_graph, FiniteGraph, Partition};
use crate::instance::{Arrow, Hom, HomSearch};
use crate::lifting::{codiagonal, edge_free_rlp_against_monos, enumerate_fillers, has_llp, has_rlp, is_trivial_fibration_cat, j_cat, j_edge, j_point};
use crate::par::Exec;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

impl Status {
    pub fn of(ok: bool) -> Self {
        if ok {
            Status::Pass
        } else {
            Status::Fail
        }
    }
}

// ---------------------------------------------------------------------------
// classes

fn pi0_bijection(dom: &Partition, cod: &Partition, image: impl Fn(&str) -> String) -> bool {
    let block = block_of(cod);
    let mut hit = vec![false; cod.len()];
    for b in dom {
        let k = block[&image(&b[0])];
        if std::mem::replace(&mut hit[k], true) {
            return false;
        }
    }
    hit.into_iter().all(|h| h)
}

/// Whether `f` induces a bijection on path components.
pub fn cat_is_weq(f: &Arrow<FiniteCategory>) -> bool {
    pi0_bijection(&pi0_cat(&f.dom), &pi0_cat(&f.cod), |o| f.apply(0, o).expect("object").to_string())
}

pub fn gph_is_weq(f: &Arrow<FiniteGraph>) -> bool {
    pi0_bijection(&pi0_graph(&f.dom), &pi0_graph(&f.cod), |v| f.apply(0, v).expect("node").to_string())
}

pub fn gph_is_cofibration(f: &Arrow<FiniteGraph>) -> bool {
    f.is_mono()
}

pub fn is_surjective_on_objects(f: &Arrow<FiniteCategory>) -> bool {
    let mut hit = vec![false; f.cod.objects().len()];
    for &o in f.hom.part(0) {
        hit[o] = true;
    }
    hit.into_iter().all(|h| h)
}

pub fn is_full(f: &Arrow<FiniteCategory>) -> bool {
    let n = f.dom.objects().len();
    (0..n).all(|a| {
        (0..n).all(|b| {
            let (fa, fb) = (f.hom.image(0, a), f.hom.image(0, b));
            let hit: Vec<usize> = f.dom.hom(a, b).iter().map(|&m| f.hom.image(1, m)).collect();
            f.cod.hom(fa, fb).iter().all(|m| hit.contains(m))
        })
    })
}

/// `U f` as a map of underlying graphs.
pub fn underlying_map(f: &Arrow<FiniteCategory>) -> Arrow<FiniteGraph> {
    Arrow::new_unchecked(
        Arc::new(underlying_graph(&f.dom)),
        Arc::new(underlying_graph(&f.cod)),
        f.hom.clone(),
    )
}

// ---------------------------------------------------------------------------
// the comonad

/// `QX = FUX` with its counit and comultiplication, both given on generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComonadData {
    pub x: FiniteCategory,
    pub q: FreeCategory,
    pub eps: FunctorFromFree<Gen, String>,
    /// Edges of `Q(QX)` are paths of `QX`.
    pub delta: FunctorFromFree<Gen, Path<Path<Gen>>>,
}

impl ComonadData {
    /// `ε_X` and `Δ_X = F η_{UX}`.
    pub fn new(x: &FiniteCategory) -> Self {
        let q = free_category(&underlying_graph(x));
        let delta = FunctorFromFree {
            object_map: x.objects().iter().map(|o| (o.clone(), o.clone())).collect(),
            generator_map: q
                .generators()
                .iter()
                .map(|m| (m.clone(), Path::single(Path::single(m.clone()))))
                .collect(),
        };
        ComonadData {
            x: x.clone(),
            q,
            eps: counit_eps(x),
            delta,
        }
    }

    pub fn with_delta(&self, m: &Gen, image: Path<Path<Gen>>) -> Self {
        let mut out = self.clone();
        out.delta.generator_map.insert(m.clone(), image);
        out
    }

    pub fn with_eps(&self, m: &Gen, image: String) -> Self {
        let mut out = self.clone();
        out.eps.generator_map.insert(m.clone(), image);
        out
    }

    fn generator_of(&self, morphism: &str) -> Option<Gen> {
        self.q.generator(morphism).cloned()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ComonadConfig {
    /// Deepest nesting of paths the checks may build.
    pub max_nesting: usize,
}

impl Default for ComonadConfig {
    fn default() -> Self {
        ComonadConfig { max_nesting: 3 }
    }
}

/// Coassociativity compares paths of paths of paths.
pub const NESTING_NEEDED: usize = 3;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LawResult {
    pub law: &'static str,
    pub status: Status,
    /// First generator at which the law fails.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

fn law(name: &'static str, gens: &[Gen], holds: impl Fn(&Gen) -> bool) -> LawResult {
    let witness = gens.iter().find(|m| !holds(m)).map(|m| m.id.clone());
    LawResult {
        law: name,
        status: Status::of(witness.is_none()),
        witness,
    }
}

/// Checks the comonad laws on every generator:
/// `ε_{QX} ∘ Δ = 1`, `Q(ε) ∘ Δ = 1` and `Δ_{QX} ∘ Δ = Q(Δ) ∘ Δ`,
/// after checking that `ε` and `Δ` are the identity on objects.
pub fn comonad_verify(d: &ComonadData, cfg: ComonadConfig) -> Result<Vec<LawResult>> {
    if cfg.max_nesting < NESTING_NEEDED {
        return Err(Error::NestingDepth {
            requested: NESTING_NEEDED,
            max: cfg.max_nesting,
        });
    }
    let gens = d.q.generators();
    let objects_fixed = d.x.objects().iter().all(|o| {
        d.eps.object_map.get(o) == Some(o) && d.delta.object_map.get(o) == Some(o)
    });
    let delta_of = |m: &Gen| {
        d.delta
            .generator_map
            .get(m)
            .filter(|p| p.source() == m.source && p.target() == m.target)
    };
    let counit_left = law("counit_left", gens, |m| {
        delta_of(m).is_some_and(|p| flatten(p) == Path::single(m.clone()))
    });
    let counit_right = law("counit_right", gens, |m| {
        let Some(p) = delta_of(m) else { return false };
        let edges: Option<Vec<Gen>> = p
            .edges()
            .iter()
            .map(|e| d.eps.evaluate(&d.x, e).and_then(|mor| d.generator_of(&mor)))
            .collect();
        edges.and_then(|es| Path::from_edges(p.source().to_string(), es)) == Some(Path::single(m.clone()))
    });
    let free = Free::<Path<Gen>>::default();
    let coassociativity = law("coassociativity", gens, |m| {
        let Some(p) = delta_of(m) else { return false };
        let lhs = duplicate(p);
        let edges: Option<Vec<Path<Path<Gen>>>> = p.edges().iter().map(|e| d.delta.evaluate(&free, e)).collect();
        edges.and_then(|es| Path::from_edges(p.source().to_string(), es)) == Some(lhs)
    });
    Ok(vec![
        LawResult {
            law: "identity_on_objects",
            status: Status::of(objects_fixed),
            witness: None,
        },
        counit_left,
        counit_right,
        coassociativity,
    ])
}

pub fn laws_hold(results: &[LawResult]) -> bool {
    results.iter().all(|r| r.status == Status::Pass)
}

/// A perturbed `Δ` or `ε`, with a description of the perturbation.
#[derive(Clone, Debug)]
pub struct Mutation {
    pub description: String,
    pub data: ComonadData,
}

/// Single-entry perturbations of `Δ_X` and `ε_X`. Every one of them breaks a law.
pub fn comonad_mutations(x: &FiniteCategory) -> Vec<Mutation> {
    let base = ComonadData::new(x);
    let gens = base.q.generators().to_vec();
    let id_gen = |o: &str| base.generator_of(&x.morphisms()[x.identity(x.object_index(o).expect("object"))]).expect("identity generator");
    let mut out = Vec::new();
    for m in &gens {
        let (a, b) = (m.source.as_str(), m.target.as_str());
        let mut delta = |what: String, p: Option<Path<Path<Gen>>>| {
            if let Some(p) = p {
                out.push(Mutation {
                    description: format!("delta({m}) = {what}"),
                    data: base.with_delta(m, p),
                });
            }
        };
        let pre = Path::from_edges(a, vec![id_gen(a), m.clone()]);
        delta(format!("[[1_{a},{m}]]"), pre.map(Path::single));
        delta(
            format!("[[{m}],[1_{b}]]"),
            Path::from_edges(a, vec![Path::single(m.clone()), Path::single(id_gen(b))]),
        );
        delta(
            format!("[[{m}],[]@{b}]"),
            Path::from_edges(a, vec![Path::single(m.clone()), Path::identity(b)]),
        );
        for other in gens.iter().filter(|o| *o != m && o.source == m.source && o.target == m.target) {
            delta(format!("[[{other}]]"), Some(Path::single(Path::single(other.clone()))));
        }
        if a == b {
            delta(format!("[]@{a}"), Some(Path::identity(a)));
        }
        for other in gens.iter().filter(|o| *o != m && o.source == m.source && o.target == m.target) {
            out.push(Mutation {
                description: format!("eps({m}) = {other}"),
                data: base.with_eps(m, other.id.clone()),
            });
        }
    }
    out
}

/// Checks that `η_{UX}` is a section of `Uε_X` and that the induced choices
/// `φ_z = z`, `φ_α = [α]` solve every lifting problem of `ε_X` against `J`.
pub fn counit_rmap_check(x: &FiniteCategory) -> LawResult {
    let eps = counit_eps(x);
    let gens = crate::free::morphism_generators(x);
    let mut r = law("counit_section", &gens, |m| {
        let p = Path::single(m.clone());
        eps.evaluate(x, &p).as_deref() == Some(m.id.as_str())
            && p.source() == m.source
            && p.target() == m.target
    });
    if x.objects().iter().any(|o| eps.object_map.get(o) != Some(o)) {
        r.status = Status::Fail;
    }
    r
}

// ---------------------------------------------------------------------------
// R-maps against J_cat

/// R-map structures on `f`: total filler tables against `J_cat`, in
/// lexicographic order of the tables, at most `limit` of them.
pub fn rmap_structure_enumerate(f: &Arrow<FiniteCategory>, limit: Option<usize>) -> Vec<LiftingFunction<FiniteCategory>> {
    let gens = Arc::new(j_cat());
    let ps = problems(f, &gens, None, Exec::Sequential).unwrap_or_default();
    let fillers: Vec<Vec<Hom>> = ps
        .iter()
        .map(|p| {
            let s = crate::lifting::Square::new_unchecked(gens[p.j].clone(), f.clone(), p.a.clone(), p.b.clone());
            enumerate_fillers(&s, None)
        })
        .collect();
    if fillers.iter().any(Vec::is_empty) {
        return Vec::new();
    }
    let mut out = Vec::new();
    let mut idx = vec![0; ps.len()];
    loop {
        if limit.is_some_and(|l| out.len() >= l) {
            break;
        }
        let table = ps.iter().cloned().zip(idx.iter().zip(&fillers).map(|(&i, fs)| fs[i].clone())).collect();
        out.push(LiftingFunction::from_table(f.clone(), gens.clone(), table));
        let mut k = ps.len();
        loop {
            if k == 0 {
                return out;
            }
            k -= 1;
            idx[k] += 1;
            if idx[k] < fillers[k].len() {
                break;
            }
            idx[k] = 0;
        }
    }
    out
}

/// Number of R-map structures on `f` (saturating).
pub fn rmap_structure_count(f: &Arrow<FiniteCategory>) -> u64 {
    let gens = j_cat();
    let ps = problems(f, &gens, None, Exec::Sequential).unwrap_or_default();
    ps.iter()
        .map(|p| {
            let s = crate::lifting::Square::new_unchecked(gens[p.j].clone(), f.clone(), p.a.clone(), p.b.clone());
            s.search().count() as u64
        })
        .fold(1u64, u64::saturating_mul)
}

/// A graph map `s: UZ -> UY` with `s ; Uf = 1`, if any.
pub fn graph_section(f: &Arrow<FiniteCategory>) -> Option<Hom> {
    let u = underlying_map(f);
    HomSearch::new(&*u.cod, &*u.dom).over(&u.hom, &Hom::identity(&*u.cod)).first()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SectionReport {
    pub structures: u64,
    pub structure_exists: bool,
    pub section_exists: bool,
    pub agree: bool,
}

/// For a bijective-on-objects functor: an R-map structure exists iff `Uf` has a section.
/// The two sides are enumerated independently.
pub fn rmap_iff_section(f: &Arrow<FiniteCategory>) -> Result<SectionReport> {
    if !crate::gen::is_bijective_on_objects(f) {
        return Err(Error::Precondition("functor is not bijective on objects".into()));
    }
    let structures = rmap_structure_count(f);
    let structure_exists = !rmap_structure_enumerate(f, Some(1)).is_empty();
    let section_exists = graph_section(f).is_some();
    Ok(SectionReport {
        structures,
        structure_exists,
        section_exists,
        agree: structure_exists == section_exists && (structures > 0) == structure_exists,
    })
}

fn object_key() -> Hom {
    Hom::empty(&FiniteCategory::empty())
}

fn point_at(c: &FiniteCategory, o: usize) -> Hom {
    Hom::from_parts(vec![vec![o], vec![c.identity(o)]])
}

fn pair_at(c: &FiniteCategory, a: usize, b: usize) -> Hom {
    Hom::from_parts(vec![vec![a, b], vec![c.identity(a), c.identity(b)]])
}

fn arrow_at(c: &FiniteCategory, m: usize) -> Hom {
    let (a, b) = c.ends(m);
    // morphisms of the arrow category in id order: 1_0, 1_1, f
    Hom::from_parts(vec![vec![a, b], vec![c.identity(a), c.identity(b), m]])
}

/// `φ_z` of an R-map structure.
fn object_lift(phi: &LiftingFunction<FiniteCategory>, z: usize) -> Option<usize> {
    let d = phi.get(0, &object_key(), &point_at(&phi.carrier.cod, z))?;
    Some(d.image(0, 0))
}

/// `φ_α` for `y0, y1` over the ends of `α`.
fn morphism_lift(phi: &LiftingFunction<FiniteCategory>, y0: usize, y1: usize, alpha: usize) -> Option<usize> {
    let d = phi.get(1, &pair_at(&phi.carrier.dom, y0, y1), &arrow_at(&phi.carrier.cod, alpha))?;
    Some(d.image(1, 2))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MediatorReport {
    pub object_map: BTreeMap<String, String>,
    pub generator_map: BTreeMap<String, String>,
    /// All functors `FUX -> Y` (object map and generator images).
    pub candidates: u64,
    /// Those making the square `f ∘ ḡ = g ∘ ε` commute.
    pub commuting: u64,
    /// Those that are moreover morphisms of R-maps.
    pub mediators: u64,
    pub constructed_is_mediator: bool,
    pub unique: bool,
}

/// The morphism of R-maps from the free R-map `ε_X: FUX -> X` to `(f, φ)`
/// over `g: X -> Z`, with an exhaustive uniqueness count.
pub fn free_rmap_mediator(g: &Arrow<FiniteCategory>, phi: &LiftingFunction<FiniteCategory>) -> Result<MediatorReport> {
    let f = &phi.carrier;
    if *g.cod != *f.cod {
        return Err(Error::Precondition("g and f have different codomains".into()));
    }
    if *phi.gens != j_cat() {
        return Err(Error::Precondition("structure is not against the generating cofibrations of Cat".into()));
    }
    if !phi.is_valid(Exec::Sequential) {
        return Err(Error::Precondition("structure is not a valid lifting function".into()));
    }
    let (x, y) = (&*g.dom, &*f.dom);
    let nx = x.objects().len();
    let ny = y.objects().len();
    let lift_obj: Vec<usize> = (0..nx)
        .map(|o| object_lift(phi, g.hom.image(0, o)).expect("total structure"))
        .collect();
    let lift_mor = |o: &[usize], m: usize| {
        let (a, b) = x.ends(m);
        morphism_lift(phi, o[a], o[b], g.hom.image(1, m)).expect("total structure")
    };
    let generators: Vec<usize> = (0..x.morphisms().len()).collect();
    let mut candidates = 0u64;
    let mut commuting = 0u64;
    let mut mediators = 0u64;
    let mut o = vec![0; nx];
    let mut done = nx > 0 && ny == 0;
    while !done {
        let options = |m: usize| {
            let (a, b) = x.ends(m);
            y.hom(o[a], o[b])
        };
        candidates = candidates.saturating_add(generators.iter().map(|&m| options(m).len() as u64).fold(1, u64::saturating_mul));
        if (0..nx).all(|v| f.hom.image(0, o[v]) == g.hom.image(0, v)) {
            let over = |m: usize| options(m).into_iter().filter(move |&k| f.hom.image(1, k) == g.hom.image(1, m));
            commuting = commuting.saturating_add(generators.iter().map(|&m| over(m).count() as u64).fold(1, u64::saturating_mul));
            if o == lift_obj {
                let fixed = |m: usize| over(m).filter(|&k| k == lift_mor(&o, m)).count() as u64;
                mediators = mediators.saturating_add(generators.iter().map(|&m| fixed(m)).fold(1, u64::saturating_mul));
            }
        }
        // next object map
        let mut k = 0;
        loop {
            if k == nx {
                done = true;
                break;
            }
            o[k] += 1;
            if o[k] < ny {
                break;
            }
            o[k] = 0;
            k += 1;
        }
    }
    let object_map: BTreeMap<String, String> =
        (0..nx).map(|v| (x.objects()[v].clone(), y.objects()[lift_obj[v]].clone())).collect();
    let images: Vec<usize> = generators.iter().map(|&m| lift_mor(&lift_obj, m)).collect();
    let generator_map: BTreeMap<String, String> = generators
        .iter()
        .map(|&m| (x.morphisms()[m].clone(), y.morphisms()[images[m]].clone()))
        .collect();
    let constructed_is_mediator = (0..nx).all(|v| f.hom.image(0, lift_obj[v]) == g.hom.image(0, v))
        && generators.iter().all(|&m| {
            let (a, b) = x.ends(m);
            y.ends(images[m]) == (lift_obj[a], lift_obj[b]) && f.hom.image(1, images[m]) == g.hom.image(1, m)
        });
    Ok(MediatorReport {
        object_map,
        generator_map,
        candidates,
        commuting,
        mediators,
        constructed_is_mediator,
        unique: mediators == 1,
    })
}

/// Objects `0, 1`, parallel `u, v: 0 -> 1` over the arrow category, with the
/// structure choosing `u`. Over `g = 1` both lifts commute; only `u` mediates.
pub fn two_lift_fixture() -> (Arrow<FiniteCategory>, LiftingFunction<FiniteCategory>) {
    let y = FiniteCategory::new(
        ["0", "1"],
        [("1_0", "0", "0"), ("1_1", "1", "1"), ("u", "0", "1"), ("v", "0", "1")],
        [("0", "1_0"), ("1", "1_1")],
        [
            ("1_0", "1_0", "1_0"),
            ("1_1", "1_1", "1_1"),
            ("1_0", "u", "u"),
            ("1_0", "v", "v"),
            ("u", "1_1", "u"),
            ("v", "1_1", "v"),
        ],
    )
    .expect("valid");
    let z = Arc::new(FiniteCategory::arrow());
    let f = Arrow::new(Arc::new(y), z.clone(), Hom::from_parts(vec![vec![0, 1], vec![0, 1, 2, 2]])).expect("functor");
    let phi = crate::algebra::make_lifting_function(&f, Arc::new(j_cat()), None, crate::lifting::Choice::First, Exec::Sequential)
        .expect("f is full and surjective on objects");
    (Arrow::identity(z), phi)
}

// ---------------------------------------------------------------------------
// the counterexample

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ProbeReport {
    pub max_nodes: usize,
    pub max_edges: usize,
    pub monos: usize,
    pub squares: usize,
    pub holds: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CounterexampleReport {
    pub pi0_source: usize,
    pub pi0_target: usize,
    pub weak_equivalence: bool,
    pub shortcut: String,
    pub shortcut_holds: bool,
    pub probe: ProbeReport,
    pub conclusion: String,
}

impl CounterexampleReport {
    pub fn passes(&self) -> bool {
        !self.weak_equivalence && self.shortcut_holds && self.probe.holds
    }
}

/// Lifting property of `f` against every subgraph inclusion within the bounds.
pub fn probe_rlp_against_monos(f: &Arrow<FiniteGraph>, max_nodes: usize, max_edges: usize, exec: Exec) -> ProbeReport {
    let monos = probe_monos(max_nodes, max_edges);
    let out = has_rlp(f, &monos, exec);
    ProbeReport {
        max_nodes,
        max_edges,
        monos: monos.len(),
        squares: out.squares_checked,
        holds: out.holds,
        witness: out.witness.map(|(k, s)| {
            format!(
                "mono {k} from {:?} into {:?} with top {:?} and bottom {:?}",
                s.left.dom.nodes(),
                s.left.cod.nodes(),
                s.top.part(0),
                s.bottom.part(0)
            )
        }),
    }
}

/// The codiagonal `• ⊔ • -> •` has the lifting property against all monos
/// but is not a bijection on path components.
pub fn codiagonal_counterexample(max_nodes: usize, max_edges: usize, exec: Exec) -> CounterexampleReport {
    let f = codiagonal();
    let (src, tgt) = (pi0_graph(&f.dom).len(), pi0_graph(&f.cod).len());
    let weak_equivalence = gph_is_weq(&f);
    let verdict = edge_free_rlp_against_monos(&f).expect("codomain has no edges");
    let shortcut = format!(
        "all squares reduce to set-level surjection lifting: {}",
        if verdict.holds { "PASS" } else { "FAIL" }
    );
    let probe = probe_rlp_against_monos(&f, max_nodes, max_edges, exec);
    let conclusion = if !weak_equivalence && verdict.holds && probe.holds {
        "trivial fibration but not a weak equivalence"
    } else {
        "counterexample not reproduced"
    };
    CounterexampleReport {
        pi0_source: src,
        pi0_target: tgt,
        weak_equivalence,
        shortcut,
        shortcut_holds: verdict.holds,
        probe,
        conclusion: conclusion.into(),
    }
}

// ---------------------------------------------------------------------------
// F on monos against trivial fibrations

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CofProbeReport {
    pub max_nodes: usize,
    pub max_edges: usize,
    pub monos: usize,
    pub right_legs: usize,
    pub holds: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
    /// Family members where LLP of `∅ -> •` differs from surjectivity on objects.
    pub point_disagreements: usize,
    /// Family members where LLP of the edge inclusion differs from fullness.
    pub edge_disagreements: usize,
    pub limitation: String,
}

/// For every mono `f` within the bounds, `Ff` has the left lifting property
/// against every full and surjective-on-objects functor of `family`.
/// Lifting against `Ff` is decided through `F ⊣ U`: squares and fillers from
/// `F A` are graph maps from `A`.
pub fn f_preserves_cofibrations_probe(
    max_nodes: usize,
    max_edges: usize,
    family: &[Arrow<FiniteCategory>],
    exec: Exec,
) -> CofProbeReport {
    let monos = probe_monos(max_nodes, max_edges);
    let rights: Vec<Arrow<FiniteGraph>> = family.iter().filter(|p| is_trivial_fibration_cat(p)).map(underlying_map).collect();
    let results = exec.map(&monos, |m| has_llp(m, &rights, Exec::Sequential));
    let failed = results.iter().position(|r| !r.holds);
    let witness = failed.map(|k| {
        let w = results[k].witness.as_ref().map_or(0, |(i, _)| *i);
        format!("mono {k} against right leg {w}")
    });
    let (mut point_disagreements, mut edge_disagreements) = (0, 0);
    let (jp, je) = (j_point(), j_edge());
    for p in family {
        let up = [underlying_map(p)];
        if has_llp(&jp, &up, Exec::Sequential).holds != is_surjective_on_objects(p) {
            point_disagreements += 1;
        }
        if has_llp(&je, &up, Exec::Sequential).holds != is_full(p) {
            edge_disagreements += 1;
        }
    }
    CofProbeReport {
        max_nodes,
        max_edges,
        monos: monos.len(),
        right_legs: rights.len(),
        holds: failed.is_none(),
        witness,
        point_disagreements,
        edge_disagreements,
        limitation: "cofibrations of Cat are not decided in general; only maps Ff for graph monos f are probed, against a finite family of trivial fibrations".into(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gen::{category_corpus, functor_corpus, is_bijective_on_objects, CorpusBounds};
    use crate::instance::homs;

    fn functor(c: FiniteCategory, d: FiniteCategory, parts: Vec<Vec<usize>>) -> Arrow<FiniteCategory> {
        Arrow::new(Arc::new(c), Arc::new(d), Hom::from_parts(parts)).unwrap()
    }

    #[test]
    fn weak_equivalences_of_categories() {
        let a = Arc::new(FiniteCategory::arrow());
        assert!(cat_is_weq(&Arrow::identity(a.clone())));
        let incl = functor(FiniteCategory::terminal(), FiniteCategory::arrow(), vec![vec![0], vec![0]]);
        assert!(cat_is_weq(&incl));
        let collapse = functor(FiniteCategory::discrete(2), FiniteCategory::terminal(), vec![vec![0, 0], vec![0, 0]]);
        assert!(!cat_is_weq(&collapse));
    }

    #[test]
    fn graph_classes_on_examples() {
        assert!(!gph_is_weq(&codiagonal()));
        assert!(gph_is_cofibration(&j_edge()));
        // merge the two ends of an edge: connected to connected, not injective
        let e = j_edge().cod;
        let lp = Arc::new(FiniteGraph::new(["*"], [("l", "*", "*")]).unwrap());
        let merge = Arrow::new(e, lp, Hom::from_parts(vec![vec![0, 0], vec![0]])).unwrap();
        assert!(gph_is_weq(&merge));
        assert!(!gph_is_cofibration(&merge));
    }

    #[test]
    fn comonad_laws_on_small_examples() {
        let mut x = FiniteCategory::new(
            ["a", "b"],
            [("1_a", "a", "a"), ("1_b", "b", "b"), ("e", "a", "a"), ("h", "a", "b")],
            [("a", "1_a"), ("b", "1_b")],
            [
                ("1_a", "1_a", "1_a"),
                ("1_b", "1_b", "1_b"),
                ("1_a", "e", "e"),
                ("e", "1_a", "e"),
                ("e", "e", "e"),
                ("1_a", "h", "h"),
                ("h", "1_b", "h"),
                ("e", "h", "h"),
            ],
        )
        .unwrap();
        assert!(crate::category::validate_category(&x).is_empty());
        for c in [FiniteCategory::terminal(), FiniteCategory::arrow(), x.clone()] {
            let r = comonad_verify(&ComonadData::new(&c), ComonadConfig::default()).unwrap();
            assert!(laws_hold(&r), "{r:?}");
            assert_eq!(r.len(), 4);
        }
        // the documented mutation: m ↦ the length-one path on [1_a, m]
        let d = ComonadData::new(&x);
        let h = d.q.generator("h").unwrap().clone();
        let ida = d.q.generator("1_a").unwrap().clone();
        let bad = d.with_delta(&h, Path::single(Path::from_edges("a", vec![ida, h.clone()]).unwrap()));
        let r = comonad_verify(&bad, ComonadConfig::default()).unwrap();
        assert_eq!(r[1].status, Status::Fail);
        assert_eq!(r[1].witness.as_deref(), Some("h"));
        x = FiniteCategory::empty();
        assert!(laws_hold(&comonad_verify(&ComonadData::new(&x), ComonadConfig::default()).unwrap()));
    }

    #[test]
    fn nesting_bound_is_enforced() {
        let d = ComonadData::new(&FiniteCategory::terminal());
        assert_eq!(
            comonad_verify(&d, ComonadConfig { max_nesting: 2 }),
            Err(Error::NestingDepth { requested: 3, max: 2 })
        );
    }

    #[test]
    fn hand_evaluated_counit_on_the_arrow() {
        // Q(ε) ∘ Δ sends f ↦ [[f]] ↦ [f]; ε of [1_0, f, 1_1] is f
        let x = FiniteCategory::arrow();
        let d = ComonadData::new(&x);
        let g = |id: &str| d.q.generator(id).unwrap().clone();
        let p = Path::from_edges("0", vec![g("1_0"), g("f"), g("1_1")]).unwrap();
        assert_eq!(d.eps.evaluate(&x, &p).as_deref(), Some("f"));
        assert_eq!(d.delta.generator_map[&g("f")].to_string(), "[[f]]");
    }

    #[test]
    fn every_mutation_is_detected() {
        for c in category_corpus(CorpusBounds { max_objects: 2, max_morphisms: 3, max_endo: 2 }) {
            for m in comonad_mutations(&c) {
                let r = comonad_verify(&m.data, ComonadConfig::default()).unwrap();
                assert!(!laws_hold(&r), "{} undetected", m.description);
            }
        }
    }

    #[test]
    fn counit_is_an_rmap_via_the_unit() {
        for c in [FiniteCategory::terminal(), FiniteCategory::arrow(), FiniteCategory::discrete(2)] {
            assert_eq!(counit_rmap_check(&c).status, Status::Pass);
        }
    }

    #[test]
    fn identity_has_one_structure_and_a_section() {
        let f = Arrow::identity(Arc::new(FiniteCategory::arrow()));
        assert_eq!(rmap_structure_enumerate(&f, None).len(), 1);
        let r = rmap_iff_section(&f).unwrap();
        assert!(r.structure_exists && r.section_exists && r.agree);
        assert_eq!(r.structures, 1);
    }

    #[test]
    fn non_full_bijective_functor_has_neither() {
        // discrete 2 into the arrow: bijective on objects, misses f
        let f = functor(FiniteCategory::discrete(2), FiniteCategory::arrow(), vec![vec![0, 1], vec![0, 1]]);
        let r = rmap_iff_section(&f).unwrap();
        assert!(!r.structure_exists && !r.section_exists && r.agree);
        let g = functor(FiniteCategory::discrete(2), FiniteCategory::terminal(), vec![vec![0, 0], vec![0, 0]]);
        assert!(matches!(rmap_iff_section(&g), Err(Error::Precondition(_))));
    }

    #[test]
    fn structures_are_valid_lifting_functions() {
        let (_, phi) = two_lift_fixture();
        let all = rmap_structure_enumerate(&phi.carrier, None);
        // one problem with two fillers (u or v over f), the rest forced
        assert_eq!(all.len(), 2);
        assert!(all.iter().all(|s| s.is_valid(Exec::Sequential)));
        assert_eq!(rmap_structure_count(&phi.carrier), 2);
    }

    #[test]
    fn iff_section_on_small_bijective_functors() {
        let cats = category_corpus(CorpusBounds { max_objects: 2, max_morphisms: 2, max_endo: 1 });
        for f in functor_corpus(&cats).iter().filter(|f| is_bijective_on_objects(f)) {
            assert!(rmap_iff_section(f).unwrap().agree);
        }
    }

    #[test]
    fn mediator_on_a_point_picks_the_lift() {
        // X = •, g picks z; ḡ picks φ_z
        let (_, phi) = two_lift_fixture();
        let z = phi.carrier.cod.clone();
        for o in 0..2 {
            let g = Arrow::new(Arc::new(FiniteCategory::terminal()), z.clone(), point_at(&z, o)).unwrap();
            let r = free_rmap_mediator(&g, &phi).unwrap();
            assert!(r.unique && r.constructed_is_mediator);
            assert_eq!(r.object_map["*"], o.to_string());
        }
    }

    #[test]
    fn uniqueness_guard_distinguishes_the_morphism_condition() {
        let (g, phi) = two_lift_fixture();
        let r = free_rmap_mediator(&g, &phi).unwrap();
        assert_eq!((r.mediators, r.commuting), (1, 2));
        assert_eq!(r.generator_map["f"], "u");
        // candidates: object maps 4, with 1 or 2 choices per generator
        let brute = homs(&underlying_graph(&g.dom), &underlying_graph(&phi.carrier.dom), None).len() as u64;
        assert_eq!(r.candidates, brute);
    }

    #[test]
    fn mediator_for_identity_structure_is_evaluation() {
        let z = Arc::new(FiniteCategory::arrow());
        let f = Arrow::identity(z.clone());
        let phi = crate::algebra::make_lifting_function(&f, Arc::new(j_cat()), None, crate::lifting::Choice::First, Exec::Sequential).unwrap();
        let g = Arrow::identity(z.clone());
        let r = free_rmap_mediator(&g, &phi).unwrap();
        assert!(r.unique);
        assert!(r.generator_map.iter().all(|(k, v)| k == v));
    }

    #[test]
    fn counterexample_report() {
        let r = codiagonal_counterexample(2, 2, Exec::Sequential);
        assert_eq!((r.pi0_source, r.pi0_target), (2, 1));
        assert!(!r.weak_equivalence && r.shortcut_holds && r.probe.holds);
        assert_eq!(r.shortcut, "all squares reduce to set-level surjection lifting: PASS");
        assert_eq!(r.conclusion, "trivial fibration but not a weak equivalence");
        // edge-free B with n <= 2 nodes; A ⊆ B; tops A -> • ⊔ •, one bottom
        let oracle: usize = (0..=2usize)
            .map(|n| (0..1usize << n).map(|mask| 1usize << (mask as u32).count_ones()).sum::<usize>())
            .sum();
        assert_eq!(r.probe.squares, oracle);
        assert_eq!(r.probe.squares, 13);
    }

    #[test]
    fn point_and_edge_llp_characterise_surjective_and_full() {
        let cats = category_corpus(CorpusBounds { max_objects: 2, max_morphisms: 2, max_endo: 1 });
        let family = functor_corpus(&cats);
        let r = f_preserves_cofibrations_probe(2, 1, &family, Exec::Sequential);
        assert!(r.holds);
        assert!(r.right_legs > 0);
        assert_eq!((r.point_disagreements, r.edge_disagreements), (0, 0));
    }
}
