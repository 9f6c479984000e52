//! Deterministic instance families: graph probes, an exhaustive corpus of
//! small categories, seeded random categories and fixtures for the
//! structure-lifting construction.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::category::FiniteCategory;
use crate::free::free_category;
use crate::graph::FiniteGraph;
use crate::instance::{homs, Arrow, Hom, HomSearch, Instance};
use crate::jfib::{ext_keys, ExtKey, JFibObject};
use crate::algebra::{make_lifting_function, LiftingFunction};
use crate::lifting::{is_trivial_fibration_cat, j_cat, j_point, Choice, Square};
use crate::par::Exec;
use crate::ssset::{horns_up_to, SSMap, SemiSimplicialSet};

/// Seed used when neither a flag nor `AWFSLAB_SEED` gives one.
pub const DEFAULT_SEED: u64 = 0;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..n).collect();
    fn go(k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if k == cur.len() {
            out.push(cur.clone());
            return;
        }
        for i in k..cur.len() {
            cur.swap(k, i);
            go(k + 1, cur, out);
            cur.swap(k, i);
        }
    }
    go(0, &mut cur, &mut out);
    out.sort();
    out
}

// ---------------------------------------------------------------------------
// graphs

/// Graphs with at most `max_nodes` nodes and `max_edges` edges (loops and
/// parallel edges allowed), one per isomorphism class. Nodes are `0..n`,
/// edges `e0, e1, ...` in order of their endpoints.
pub fn graph_classes(max_nodes: usize, max_edges: usize) -> Vec<FiniteGraph> {
    let mut out = Vec::new();
    for n in 0..=max_nodes {
        let pairs: Vec<(usize, usize)> = (0..n).flat_map(|s| (0..n).map(move |t| (s, t))).collect();
        let perms = permutations(n);
        let mut seen = HashSet::new();
        // multisets of pairs, as non-decreasing index sequences
        let mut stack: Vec<Vec<usize>> = vec![Vec::new()];
        while let Some(ms) = stack.pop() {
            let mut edges: Vec<(usize, usize)> = ms.iter().map(|&k| pairs[k]).collect();
            edges.sort();
            let canon = perms
                .iter()
                .map(|p| {
                    let mut e: Vec<(usize, usize)> = edges.iter().map(|&(s, t)| (p[s], p[t])).collect();
                    e.sort();
                    e
                })
                .min()
                .unwrap_or_default();
            if canon == edges && seen.insert(canon) {
                out.push(numbered_graph(n, &edges));
            }
            if ms.len() < max_edges {
                let from = ms.last().copied().unwrap_or(0);
                for k in (from..pairs.len()).rev() {
                    let mut next = ms.clone();
                    next.push(k);
                    stack.push(next);
                }
            }
        }
    }
    out.sort_by_key(|g| (g.nodes().len(), g.edges().len()));
    out
}

fn numbered_graph(n: usize, edges: &[(usize, usize)]) -> FiniteGraph {
    let width = edges.len().to_string().len();
    FiniteGraph::new(
        (0..n).map(|v| v.to_string()).collect::<Vec<_>>(),
        edges
            .iter()
            .enumerate()
            .map(|(k, &(s, t))| (format!("e{k:0width$}"), s.to_string(), t.to_string()))
            .collect::<Vec<_>>(),
    )
    .expect("numbered graph")
}

/// Every subgraph inclusion `A ⊆ B` for `B` in [`graph_classes`]. Every mono
/// between graphs within the bounds is isomorphic (as an arrow) to one of these.
pub fn probe_monos(max_nodes: usize, max_edges: usize) -> Vec<Arrow<FiniteGraph>> {
    let mut out = Vec::new();
    for b in graph_classes(max_nodes, max_edges) {
        let b = Arc::new(b);
        let (n, m) = (b.nodes().len(), b.edges().len());
        for node_mask in 0u32..(1 << n) {
            let edges: Vec<usize> = (0..m)
                .filter(|&e| {
                    let (s, t) = b.edge_ends(e);
                    node_mask & (1 << s) != 0 && node_mask & (1 << t) != 0
                })
                .collect();
            for edge_mask in 0u32..(1 << edges.len()) {
                let keep_nodes: Vec<usize> = (0..n).filter(|&v| node_mask & (1 << v) != 0).collect();
                let keep_edges: Vec<usize> = edges
                    .iter()
                    .enumerate()
                    .filter(|(k, _)| edge_mask & (1 << k) != 0)
                    .map(|(_, &e)| e)
                    .collect();
                out.push(subgraph(&b, &keep_nodes, &keep_edges));
            }
        }
    }
    out
}

/// Inclusion of the subgraph spanned by the given (sorted) node and edge indices.
pub fn subgraph(b: &Arc<FiniteGraph>, nodes: &[usize], edges: &[usize]) -> Arrow<FiniteGraph> {
    let a = FiniteGraph::new(
        nodes.iter().map(|&v| b.nodes()[v].clone()).collect::<Vec<_>>(),
        edges
            .iter()
            .map(|&e| {
                let (s, t) = b.edge_ends(e);
                (b.edges()[e].clone(), b.nodes()[s].clone(), b.nodes()[t].clone())
            })
            .collect::<Vec<_>>(),
    )
    .expect("subgraph");
    Arrow::new_unchecked(Arc::new(a), b.clone(), Hom::from_parts(vec![nodes.to_vec(), edges.to_vec()]))
}

// ---------------------------------------------------------------------------
// the category corpus

/// Size bounds of [`category_corpus`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct CorpusBounds {
    pub max_objects: usize,
    /// Non-identity morphisms in total.
    pub max_morphisms: usize,
    /// Non-identity endomorphisms of each object.
    pub max_endo: usize,
}

impl Default for CorpusBounds {
    fn default() -> Self {
        CorpusBounds {
            max_objects: 3,
            max_morphisms: 6,
            max_endo: 2,
        }
    }
}

/// Hom-set shape: `h[a][b]` non-identity morphisms `a -> b`.
type Shape = Vec<Vec<usize>>;

fn shapes(n: usize, b: CorpusBounds) -> Vec<Shape> {
    let cells: Vec<(usize, usize)> = (0..n).flat_map(|a| (0..n).map(move |c| (a, c))).collect();
    let mut out = Vec::new();
    let mut cur = vec![vec![0; n]; n];
    fn go(k: usize, left: usize, cells: &[(usize, usize)], b: CorpusBounds, cur: &mut Shape, out: &mut Vec<Shape>) {
        if k == cells.len() {
            out.push(cur.clone());
            return;
        }
        let (a, c) = cells[k];
        let cap = if a == c { left.min(b.max_endo) } else { left };
        for v in 0..=cap {
            cur[a][c] = v;
            go(k + 1, left - v, cells, b, cur, out);
        }
        cur[a][c] = 0;
    }
    go(0, b.max_morphisms, &cells, b, &mut cur, &mut out);
    let perms = permutations(n);
    out.retain(|s| perms.iter().all(|p| permute_shape(s, p) >= *s));
    out
}

fn permute_shape(s: &Shape, p: &[usize]) -> Shape {
    let n = s.len();
    let mut t = vec![vec![0; n]; n];
    for a in 0..n {
        for c in 0..n {
            t[p[a]][p[c]] = s[a][c];
        }
    }
    t
}

/// A composition table being filled in for a fixed shape.
struct Table {
    ends: Vec<(usize, usize)>,
    identity: Vec<usize>,
    is_id: Vec<bool>,
    hom: Vec<Vec<Vec<usize>>>,
    comp: Vec<Option<usize>>,
    n: usize,
}

impl Table {
    fn new(shape: &Shape) -> Self {
        let objs = shape.len();
        let mut ends = Vec::new();
        let mut is_id = Vec::new();
        let mut identity = vec![0; objs];
        let mut hom = vec![vec![Vec::new(); objs]; objs];
        for a in 0..objs {
            for c in 0..objs {
                if a == c {
                    identity[a] = ends.len();
                    hom[a][c].push(ends.len());
                    ends.push((a, c));
                    is_id.push(true);
                }
                for _ in 0..shape[a][c] {
                    hom[a][c].push(ends.len());
                    ends.push((a, c));
                    is_id.push(false);
                }
            }
        }
        let n = ends.len();
        let mut comp = vec![None; n * n];
        for f in 0..n {
            for g in 0..n {
                if ends[f].1 == ends[g].0 {
                    if is_id[f] {
                        comp[f * n + g] = Some(g);
                    } else if is_id[g] {
                        comp[f * n + g] = Some(f);
                    }
                }
            }
        }
        Table {
            ends,
            identity,
            is_id,
            hom,
            comp,
            n,
        }
    }

    fn get(&self, f: usize, g: usize) -> Option<usize> {
        self.comp[f * self.n + g]
    }

    fn associative_where_known(&self, triples: &[(usize, usize, usize)]) -> bool {
        triples.iter().all(|&(f, g, h)| {
            let l = self.get(f, g).and_then(|fg| self.get(fg, h));
            let r = self.get(g, h).and_then(|gh| self.get(f, gh));
            match (l, r) {
                (Some(x), Some(y)) => x == y,
                _ => true,
            }
        })
    }

    /// Canonical code under object permutations preserving the shape and
    /// relabelings inside each hom-set.
    fn canonical(&self, shape: &Shape, perms: &[Vec<usize>]) -> Vec<u8> {
        let objs = shape.len();
        let mut best: Option<Vec<u8>> = None;
        for p in perms.iter().filter(|p| permute_shape(shape, p) == *shape) {
            // hom-sets in the order of the relabeled category
            let mut blocks: Vec<(usize, usize)> = (0..objs).flat_map(|a| (0..objs).map(move |c| (a, c))).collect();
            blocks.sort_by_key(|&(a, c)| (p[a], p[c]));
            let non_id: Vec<Vec<usize>> = blocks
                .iter()
                .map(|&(a, c)| self.hom[a][c].iter().copied().filter(|&m| !self.is_id[m]).collect())
                .collect();
            let choices: Vec<Vec<Vec<usize>>> = non_id
                .iter()
                .map(|ms| permutations(ms.len()).into_iter().map(|q| q.iter().map(|&i| ms[i]).collect()).collect())
                .collect();
            let mut idx = vec![0; blocks.len()];
            loop {
                let mut order = Vec::with_capacity(self.n);
                for (k, &(a, c)) in blocks.iter().enumerate() {
                    if a == c {
                        order.push(self.identity[a]);
                    }
                    order.extend(&choices[k][idx[k]]);
                }
                let mut new_of = vec![0; self.n];
                for (new, &old) in order.iter().enumerate() {
                    new_of[old] = new;
                }
                let code: Vec<u8> = order
                    .iter()
                    .flat_map(|&f| order.iter().map(move |&g| (f, g)))
                    .map(|(f, g)| self.get(f, g).map_or(u8::MAX, |h| new_of[h] as u8))
                    .collect();
                if best.as_ref().is_none_or(|b| code < *b) {
                    best = Some(code);
                }
                let mut k = 0;
                while k < idx.len() {
                    idx[k] += 1;
                    if idx[k] < choices[k].len() {
                        break;
                    }
                    idx[k] = 0;
                    k += 1;
                }
                if k == idx.len() {
                    break;
                }
            }
        }
        best.unwrap_or_default()
    }

    fn to_category(&self, shape: &Shape) -> FiniteCategory {
        let objs = shape.len();
        let objects: Vec<String> = (0..objs).map(|a| a.to_string()).collect();
        let mut names = vec![String::new(); self.n];
        for a in 0..objs {
            for c in 0..objs {
                let mut k = 0;
                for &m in &self.hom[a][c] {
                    names[m] = if self.is_id[m] {
                        format!("id{a}")
                    } else {
                        k += 1;
                        format!("m{a}{c}{}", k - 1)
                    };
                }
            }
        }
        FiniteCategory::new(
            objects.clone(),
            (0..self.n)
                .map(|m| (names[m].clone(), objects[self.ends[m].0].clone(), objects[self.ends[m].1].clone()))
                .collect::<Vec<_>>(),
            (0..objs).map(|a| (objects[a].clone(), names[self.identity[a]].clone())).collect::<Vec<_>>(),
            (0..self.n)
                .flat_map(|f| (0..self.n).map(move |g| (f, g)))
                .filter_map(|(f, g)| self.get(f, g).map(|h| (names[f].clone(), names[g].clone(), names[h].clone())))
                .collect::<Vec<_>>(),
        )
        .expect("generated table")
    }
}

fn categories_of_shape(shape: &Shape) -> Vec<FiniteCategory> {
    let mut t = Table::new(shape);
    let n = t.n;
    let unknown: Vec<(usize, usize)> = (0..n)
        .flat_map(|f| (0..n).map(move |g| (f, g)))
        .filter(|&(f, g)| !t.is_id[f] && !t.is_id[g] && t.ends[f].1 == t.ends[g].0)
        .collect();
    let triples: Vec<(usize, usize, usize)> = unknown
        .iter()
        .flat_map(|&(f, g)| (0..n).map(move |h| (f, g, h)))
        .filter(|&(_, g, h)| !t.is_id[h] && t.ends[g].1 == t.ends[h].0)
        .collect();
    let candidates: Vec<Vec<usize>> = unknown
        .iter()
        .map(|&(f, g)| t.hom[t.ends[f].0][t.ends[g].1].clone())
        .collect();
    if candidates.iter().any(Vec::is_empty) {
        return Vec::new();
    }
    let perms = permutations(shape.len());
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    fn go(
        k: usize,
        t: &mut Table,
        unknown: &[(usize, usize)],
        candidates: &[Vec<usize>],
        triples: &[(usize, usize, usize)],
        shape: &Shape,
        perms: &[Vec<usize>],
        seen: &mut HashSet<Vec<u8>>,
        out: &mut Vec<FiniteCategory>,
    ) {
        if k == unknown.len() {
            if seen.insert(t.canonical(shape, perms)) {
                out.push(t.to_category(shape));
            }
            return;
        }
        let (f, g) = unknown[k];
        for &h in &candidates[k] {
            t.comp[f * t.n + g] = Some(h);
            if t.associative_where_known(triples) {
                go(k + 1, t, unknown, candidates, triples, shape, perms, seen, out);
            }
        }
        t.comp[f * t.n + g] = None;
    }
    go(0, &mut t, &unknown, &candidates, &triples, shape, &perms, &mut seen, &mut out);
    out
}

/// Every finite category within the bounds, one per isomorphism class.
/// Objects are `0, 1, ...`; identities `id{a}`; other morphisms `m{a}{b}{k}`.
pub fn category_corpus(bounds: CorpusBounds) -> Vec<FiniteCategory> {
    let mut out = Vec::new();
    for n in 0..=bounds.max_objects {
        for shape in shapes(n, bounds) {
            out.extend(categories_of_shape(&shape));
        }
    }
    out
}

/// Bounds of the functor corpus: every functor between every ordered pair of
/// categories of this smaller corpus.
pub const FUNCTOR_CORPUS_BOUNDS: CorpusBounds = CorpusBounds {
    max_objects: 3,
    max_morphisms: 3,
    max_endo: 1,
};

/// All functors between ordered pairs drawn from `cats`, in pair order then
/// lexicographic order.
pub fn functor_corpus(cats: &[FiniteCategory]) -> Vec<Arrow<FiniteCategory>> {
    let cats: Vec<Arc<FiniteCategory>> = cats.iter().cloned().map(Arc::new).collect();
    let mut out = Vec::new();
    for c in &cats {
        for d in &cats {
            for h in homs(&**c, &**d, None) {
                out.push(Arrow::new_unchecked(c.clone(), d.clone(), h));
            }
        }
    }
    out
}

pub fn is_bijective_on_objects(f: &Arrow<FiniteCategory>) -> bool {
    let mut seen = vec![false; f.cod.objects().len()];
    f.dom.objects().len() == f.cod.objects().len()
        && f.hom.part(0).iter().all(|&o| !std::mem::replace(&mut seen[o], true))
}

// ---------------------------------------------------------------------------
// random categories

/// A random finite category: either a category of functions between small
/// sets closed under composition, or the free category on a random acyclic
/// graph. At most 14 morphisms.
pub fn random_category<R: Rng>(rng: &mut R) -> FiniteCategory {
    if rng.gen_bool(0.5) {
        loop {
            if let Some(c) = random_function_category(rng) {
                return c;
            }
        }
    } else {
        let n = rng.gen_range(1..=4);
        let m = rng.gen_range(0..=4);
        let mut edges = Vec::new();
        for k in 0..m {
            let s = rng.gen_range(0..n);
            let t = rng.gen_range(0..n);
            if s != t {
                let (s, t) = (s.min(t), s.max(t));
                edges.push((format!("e{k}"), s.to_string(), t.to_string()));
            }
        }
        let g = FiniteGraph::new((0..n).map(|v| v.to_string()).collect::<Vec<_>>(), edges).expect("dag");
        free_category(&g).truncate(n)
    }
}

fn random_function_category<R: Rng>(rng: &mut R) -> Option<FiniteCategory> {
    let objs = rng.gen_range(1..=3);
    let sizes: Vec<usize> = (0..objs).map(|_| rng.gen_range(1..=3)).collect();
    // morphism = (dom, cod, function table)
    let mut mors: Vec<(usize, usize, Vec<usize>)> = (0..objs).map(|a| (a, a, (0..sizes[a]).collect())).collect();
    let mut index: HashMap<(usize, usize, Vec<usize>), usize> = mors.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect();
    for _ in 0..rng.gen_range(1..=3) {
        let a = rng.gen_range(0..objs);
        let b = rng.gen_range(0..objs);
        let table: Vec<usize> = (0..sizes[a]).map(|_| rng.gen_range(0..sizes[b])).collect();
        let m = (a, b, table);
        if !index.contains_key(&m) {
            index.insert(m.clone(), mors.len());
            mors.push(m);
        }
    }
    let mut comp = BTreeMap::new();
    let mut k = 0;
    while k < mors.len() {
        for f in 0..=k {
            for (x, y) in [(f, k), (k, f)] {
                let (a, b, ref t1) = mors[x];
                let (b2, c, ref t2) = mors[y];
                if b != b2 || comp.contains_key(&(x, y)) {
                    continue;
                }
                let t: Vec<usize> = t1.iter().map(|&v| t2[v]).collect();
                let m = (a, c, t);
                let h = match index.get(&m) {
                    Some(&h) => h,
                    None => {
                        index.insert(m.clone(), mors.len());
                        mors.push(m);
                        mors.len() - 1
                    }
                };
                comp.insert((x, y), h);
            }
        }
        if mors.len() > 14 {
            return None;
        }
        k += 1;
    }
    let name = |i: usize| if i < objs { format!("id{i}") } else { format!("m{:02}", i - objs) };
    let objects: Vec<String> = (0..objs).map(|a| a.to_string()).collect();
    FiniteCategory::new(
        objects.clone(),
        mors.iter()
            .enumerate()
            .map(|(i, (a, b, _))| (name(i), objects[*a].clone(), objects[*b].clone()))
            .collect::<Vec<_>>(),
        (0..objs).map(|a| (objects[a].clone(), name(a))).collect::<Vec<_>>(),
        comp.iter().map(|(&(f, g), &h)| (name(f), name(g), name(h))).collect::<Vec<_>>(),
    )
    .ok()
}

pub fn random_categories(seed: u64, count: usize) -> Vec<FiniteCategory> {
    let mut r = rng(seed);
    (0..count).map(|_| random_category(&mut r)).collect()
}

// ---------------------------------------------------------------------------
// fixtures for the structure-lifting construction

/// Input of the extension step: structured `X`, `Y`, a mono `i: X -> Z` and a
/// J-fibration `q: Z -> Y` such that `i;q` preserves chosen extensions.
#[derive(Clone, Debug)]
pub struct ExtendInstance<C> {
    pub x: JFibObject<C>,
    pub y: JFibObject<C>,
    pub i: Arrow<C>,
    pub q: Arrow<C>,
}

/// Which precondition a broken fixture violates.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Defect {
    NonMono,
    NonFibration,
    NonMorphism,
}

impl Defect {
    pub const ALL: [Defect; 3] = [Defect::NonMono, Defect::NonFibration, Defect::NonMorphism];
}

/// The chooser for `{∅ -> •}` picking `node`.
fn point_structure(carrier: Arc<FiniteGraph>, gens: &Arc<Vec<Arrow<FiniteGraph>>>, node: &str) -> JFibObject<FiniteGraph> {
    let v = carrier.node_index(node).expect("node exists");
    let key = ExtKey {
        j: 0,
        a: Hom::empty(&FiniteGraph::empty()),
    };
    let chooser = BTreeMap::from([(key, Hom::from_parts(vec![vec![v], vec![]]))]);
    JFibObject::from_chooser(carrier, gens.clone(), chooser)
}

fn graph_from(nodes: &[String], edges: &[(String, String, String)]) -> Arc<FiniteGraph> {
    Arc::new(FiniteGraph::new(nodes.to_vec(), edges.to_vec()).expect("fixture graph"))
}

/// Map between graphs given on ids.
fn graph_map(a: &Arc<FiniteGraph>, b: &Arc<FiniteGraph>, node: impl Fn(&str) -> String, edge: impl Fn(&str) -> String) -> Arrow<FiniteGraph> {
    let parts = vec![
        a.nodes().iter().map(|v| b.node_index(&node(v)).expect("node image")).collect(),
        a.edges().iter().map(|e| b.edge_index(&edge(e)).expect("edge image")).collect(),
    ];
    Arrow::new(a.clone(), b.clone(), Hom::from_parts(parts)).expect("fixture map")
}

struct GraphTower {
    y_nodes: Vec<String>,
    y_edges: Vec<(String, String, String)>,
    z_nodes: Vec<String>,
    z_edges: Vec<(String, String, String)>,
    over: BTreeMap<String, String>,
}

fn random_tower<R: Rng>(rng: &mut R, min_y: usize) -> GraphTower {
    let ny = rng.gen_range(min_y..=3);
    let y_nodes: Vec<String> = (0..ny).map(|k| format!("y{k}")).collect();
    let y_edges: Vec<(String, String, String)> = (0..rng.gen_range(0..=2))
        .map(|k| (format!("f{k}"), y_nodes.choose(rng).unwrap().clone(), y_nodes.choose(rng).unwrap().clone()))
        .collect();
    let mut z_nodes = Vec::new();
    let mut over = BTreeMap::new();
    let mut fibers: Vec<Vec<String>> = Vec::new();
    for y in &y_nodes {
        let room = 5 - (z_nodes.len() + (ny - fibers.len() - 1));
        let size = rng.gen_range(1..=room.min(2));
        let fiber: Vec<String> = (0..size).map(|k| format!("z{}", z_nodes.len() + k)).collect();
        for z in &fiber {
            z_nodes.push(z.clone());
            over.insert(z.clone(), y.clone());
        }
        fibers.push(fiber);
    }
    let fiber_of = |y: &str| &fibers[y_nodes.iter().position(|v| v == y).unwrap()];
    let mut z_edges = Vec::new();
    for (f, s, t) in &y_edges {
        for _ in 0..rng.gen_range(0..=2) {
            let id = format!("g{}", z_edges.len());
            over.insert(id.clone(), f.clone());
            z_edges.push((id, fiber_of(s).choose(rng).unwrap().clone(), fiber_of(t).choose(rng).unwrap().clone()));
        }
    }
    GraphTower {
        y_nodes,
        y_edges,
        z_nodes,
        z_edges,
        over,
    }
}

/// A valid instance over graphs with `J = {∅ -> •}`; at most 5 nodes in each graph.
pub fn extension_graph_instance<R: Rng>(rng: &mut R) -> ExtendInstance<FiniteGraph> {
    let t = random_tower(rng, 1);
    graph_instance_from(rng, &t, None)
}

fn graph_instance_from<R: Rng>(rng: &mut R, t: &GraphTower, y_pick: Option<&str>) -> ExtendInstance<FiniteGraph> {
    let gens = Arc::new(vec![j_point()]);
    let mut x_nodes: Vec<String> = t.z_nodes.iter().filter(|_| rng.gen_bool(0.6)).cloned().collect();
    if x_nodes.is_empty() {
        x_nodes.push(t.z_nodes.choose(rng).unwrap().clone());
    }
    let x_edges: Vec<(String, String, String)> = t
        .z_edges
        .iter()
        .filter(|(_, s, tt)| x_nodes.contains(s) && x_nodes.contains(tt))
        .filter(|_| rng.gen_bool(0.6))
        .cloned()
        .collect();
    let (x, z, y) = (graph_from(&x_nodes, &x_edges), graph_from(&t.z_nodes, &t.z_edges), graph_from(&t.y_nodes, &t.y_edges));
    let i = graph_map(&x, &z, str::to_string, str::to_string);
    let q = graph_map(&z, &y, |v| t.over[v].clone(), |e| t.over[e].clone());
    let x0 = x_nodes.choose(rng).unwrap().clone();
    let y0 = y_pick.map_or_else(|| t.over[&x0].clone(), str::to_string);
    ExtendInstance {
        x: point_structure(x, &gens, &x0),
        y: point_structure(y, &gens, &y0),
        i,
        q,
    }
}

/// An instance over graphs violating exactly the precondition `defect`.
pub fn extension_graph_defect<R: Rng>(rng: &mut R, defect: Defect) -> ExtendInstance<FiniteGraph> {
    match defect {
        Defect::NonMono => {
            let t = random_tower(rng, 1);
            let base = graph_instance_from(rng, &t, None);
            let x0 = chosen_node(&base.x);
            let mut nodes = base.x.carrier.nodes().to_vec();
            nodes.push("w".into());
            let edges: Vec<(String, String, String)> = base.x.carrier.edge_triples().map(|(e, s, t)| (e.into(), s.into(), t.into())).collect();
            let x = graph_from(&nodes, &edges);
            let i = graph_map(&x, &base.i.cod, |v| if v == "w" { x0.clone() } else { v.to_string() }, str::to_string);
            let gens = base.x.gens.clone();
            ExtendInstance {
                x: point_structure(x, &gens, &x0),
                i,
                ..base
            }
        }
        Defect::NonFibration => {
            let mut t = random_tower(rng, 1);
            t.y_nodes.push("yz".into());
            graph_instance_from(rng, &t, None)
        }
        Defect::NonMorphism => {
            let t = random_tower(rng, 2);
            let base = graph_instance_from(rng, &t, None);
            let y0 = t.over[&chosen_node(&base.x)].clone();
            let other = t.y_nodes.iter().find(|v| **v != y0).expect("two nodes").clone();
            let gens = base.y.gens.clone();
            ExtendInstance {
                y: point_structure(base.y.carrier.clone(), &gens, &other),
                ..base
            }
        }
    }
}

fn chosen_node(x: &JFibObject<FiniteGraph>) -> String {
    let ext = x.chooser().values().next().expect("one key");
    x.carrier.nodes()[ext.image(0, 0)].clone()
}

/// Map between codiscrete sets induced by a vertex function.
pub fn codiscrete_map(
    a: &Arc<SemiSimplicialSet>,
    b: &Arc<SemiSimplicialSet>,
    vertex: impl Fn(&str) -> String,
) -> SSMap {
    let parts = (0..a.sorts())
        .map(|m| {
            a.ids(m)
                .iter()
                .map(|id| {
                    let img: Vec<String> = id.split('.').map(&vertex).collect();
                    b.position(m, &img.join(".")).expect("tuple image")
                })
                .collect()
        })
        .collect();
    Arrow::new(a.clone(), b.clone(), Hom::from_parts(parts)).expect("vertex functions induce maps")
}

fn codiscrete(vs: &[String]) -> Arc<SemiSimplicialSet> {
    let refs: Vec<&str> = vs.iter().map(String::as_str).collect();
    Arc::new(SemiSimplicialSet::codiscrete(&refs, 2).expect("codiscrete"))
}

fn random_choice<R: Rng>(rng: &mut R) -> Choice {
    if rng.gen_bool(0.5) {
        Choice::First
    } else {
        Choice::Last
    }
}

/// Pushes the structure of `x` forward along an injective `f: X -> Y`,
/// keeping `y`'s choices elsewhere.
fn push_forward(x: &JFibObject<SemiSimplicialSet>, y: JFibObject<SemiSimplicialSet>, f: &Hom) -> JFibObject<SemiSimplicialSet> {
    let mut out = y;
    for (k, e) in x.chooser() {
        out = out.with_entry(ExtKey { j: k.j, a: k.a.then(f) }, e.then(f));
    }
    out
}

/// Pulls `y`'s choices back along a horn fibration `f: X -> Y` by choosing fillers.
fn pull_back(
    xc: Arc<SemiSimplicialSet>,
    y: &JFibObject<SemiSimplicialSet>,
    f: &SSMap,
    choice: Choice,
) -> Option<JFibObject<SemiSimplicialSet>> {
    let mut chooser = BTreeMap::new();
    for key in ext_keys(&*xc, &y.gens) {
        let j = &y.gens[key.j];
        let b = y.get(key.j, &key.a.then(&f.hom))?.clone();
        let sq = Square::new(j.clone(), f.clone(), key.a.clone(), b).ok()?;
        let e = sq.filler(choice)?;
        chooser.insert(key, e);
    }
    Some(JFibObject::from_chooser(xc, y.gens.clone(), chooser))
}

fn names(prefix: &str, n: usize) -> Vec<String> {
    (0..n).map(|k| format!("{prefix}{k}")).collect()
}

/// A valid instance over semi-simplicial sets of dimension 2 with `J` all horns.
/// `Z` and `Y` are codiscrete and `q` is induced by a surjection of vertices;
/// `X` is a codiscrete subset or a diagonal copy of the terminal set.
pub fn extension_ss_instance<R: Rng>(rng: &mut R) -> ExtendInstance<SemiSimplicialSet> {
    let gens = Arc::new(horns_up_to(2, 2).expect("horns"));
    loop {
        let vz = names("a", rng.gen_range(2..=3));
        let w = names("u", rng.gen_range(1..=2));
        let p: BTreeMap<String, String> = vz.iter().map(|v| (v.clone(), w.choose(rng).unwrap().clone())).collect();
        if w.iter().any(|u| !p.values().any(|v| v == u)) {
            continue;
        }
        let (z, y) = (codiscrete(&vz), codiscrete(&w));
        let q = codiscrete_map(&z, &y, |v| p[v].clone());
        let (x, i) = if rng.gen_bool(0.25) {
            let v = vz.choose(rng).unwrap().clone();
            let x = Arc::new(SemiSimplicialSet::terminal(2));
            let parts = (0..3)
                .map(|m| vec![z.position(m, &vec![v.as_str(); m + 1].join(".")).expect("diagonal")])
                .collect();
            let i = Arrow::new(x.clone(), z.clone(), Hom::from_parts(parts)).expect("diagonal map");
            (x, i)
        } else {
            let s: Vec<String> = vz.iter().filter(|_| rng.gen_bool(0.6)).cloned().collect();
            if s.is_empty() {
                continue;
            }
            let x = codiscrete(&s);
            let i = codiscrete_map(&x, &z, str::to_string);
            (x, i)
        };
        let f = i.then(&q);
        let surjective = f.hom.part(0).len() > 0 && f.is_epi();
        let (xs, ys) = if surjective {
            let ys = JFibObject::choose(y.clone(), gens.clone(), random_choice(rng)).expect("codiscrete is fibrant");
            match pull_back(x.clone(), &ys, &f, random_choice(rng)) {
                Some(xs) => (xs, ys),
                None => continue,
            }
        } else if f.is_mono() {
            let xs = JFibObject::choose(x.clone(), gens.clone(), random_choice(rng)).expect("fibrant");
            let ys = JFibObject::choose(y.clone(), gens.clone(), random_choice(rng)).expect("fibrant");
            let ys = push_forward(&xs, ys, &f.hom);
            (xs, ys)
        } else {
            continue;
        };
        return ExtendInstance { x: xs, y: ys, i, q };
    }
}

/// An instance over semi-simplicial sets violating exactly the precondition `defect`.
pub fn extension_ss_defect<R: Rng>(rng: &mut R, defect: Defect) -> ExtendInstance<SemiSimplicialSet> {
    let gens = Arc::new(horns_up_to(2, 2).expect("horns"));
    match defect {
        Defect::NonMono => {
            let vz = names("a", rng.gen_range(2..=3));
            let w = names("u", 1);
            let (z, y) = (codiscrete(&vz), codiscrete(&w));
            let q = codiscrete_map(&z, &y, |_| w[0].clone());
            let s = names("b", 2);
            let x = codiscrete(&s);
            let target = vz.choose(rng).unwrap().clone();
            let i = codiscrete_map(&x, &z, |_| target.clone());
            let ys = JFibObject::choose(y, gens.clone(), random_choice(rng)).expect("fibrant");
            let xs = pull_back(x, &ys, &i.then(&q), random_choice(rng)).expect("maps to a point are fibrations");
            ExtendInstance { x: xs, y: ys, i, q }
        }
        Defect::NonFibration => {
            let vz = names("a", rng.gen_range(1..=3));
            let w = names("u", 2);
            let (z, y) = (codiscrete(&vz), codiscrete(&w));
            let q = codiscrete_map(&z, &y, |_| w[0].clone());
            let v = vz.choose(rng).unwrap().clone();
            let x = codiscrete(std::slice::from_ref(&v));
            let i = codiscrete_map(&x, &z, str::to_string);
            let xs = JFibObject::choose(x, gens.clone(), random_choice(rng)).expect("fibrant");
            let ys = JFibObject::choose(y, gens.clone(), random_choice(rng)).expect("fibrant");
            let ys = push_forward(&xs, ys, &i.then(&q).hom);
            ExtendInstance { x: xs, y: ys, i, q }
        }
        Defect::NonMorphism => {
            let vz = names("a", rng.gen_range(2..=3));
            let w = names("u", 2);
            let (z, y) = (codiscrete(&vz), codiscrete(&w));
            let p: BTreeMap<String, String> = vz.iter().enumerate().map(|(k, v)| (v.clone(), w[k.min(1)].clone())).collect();
            let q = codiscrete_map(&z, &y, |v| p[v].clone());
            let v = vz.choose(rng).unwrap().clone();
            let x = codiscrete(std::slice::from_ref(&v));
            let i = codiscrete_map(&x, &z, str::to_string);
            let f = i.then(&q);
            let xs = JFibObject::choose(x, gens.clone(), random_choice(rng)).expect("fibrant");
            let ys = JFibObject::choose(y.clone(), gens.clone(), random_choice(rng)).expect("fibrant");
            let ys = push_forward(&xs, ys, &f.hom);
            // move one pushed-forward choice along a one-dimensional horn
            let key = xs
                .chooser()
                .keys()
                .find(|k| gens[k.j].cod.len(1) == 1)
                .expect("a one-dimensional horn key");
            let b = key.a.then(&f.hom);
            let current = ys.get(key.j, &b).expect("total").clone();
            let j = &gens[key.j];
            let other = HomSearch::new(&*j.cod, &*y)
                .extending(&j.hom, &b)
                .collect(None)
                .into_iter()
                .find(|e| *e != current)
                .expect("two extensions along a one-dimensional horn");
            ExtendInstance {
                y: ys.with_entry(ExtKey { j: key.j, a: b }, other),
                x: xs,
                i,
                q,
            }
        }
    }
}

// ---------------------------------------------------------------------------
// chains of fibrations and inputs for the small object argument

/// A random graph over `base` whose projection has the lifting property
/// against `∅ -> •` and `(• •) -> (• -> •)`: fibers are non-empty and every
/// pair of nodes over the ends of an edge has an edge over it.
pub fn graph_fibration_over<R: Rng>(rng: &mut R, base: &Arc<FiniteGraph>, prefix: &str) -> Arrow<FiniteGraph> {
    let mut nodes = Vec::new();
    let mut over = Vec::new();
    for v in 0..base.nodes().len() {
        for _ in 0..if rng.gen_bool(0.3) { 2 } else { 1 } {
            nodes.push(format!("{prefix}{}", nodes.len()));
            over.push(v);
        }
    }
    let mut edges = Vec::new();
    let mut edge_over = Vec::new();
    for e in 0..base.edges().len() {
        let (s, t) = base.edge_ends(e);
        for u in (0..nodes.len()).filter(|&u| over[u] == s) {
            for w in (0..nodes.len()).filter(|&w| over[w] == t) {
                for _ in 0..if rng.gen_bool(0.2) { 2 } else { 1 } {
                    edges.push((format!("{prefix}e{}", edges.len()), nodes[u].clone(), nodes[w].clone()));
                    edge_over.push(e);
                }
            }
        }
    }
    let top = graph_from(&nodes, &edges);
    let node_over: BTreeMap<&String, usize> = nodes.iter().zip(&over).map(|(n, &v)| (n, v)).collect();
    let edge_over: BTreeMap<&String, usize> = edges.iter().map(|(id, _, _)| id).zip(edge_over).collect();
    graph_map(
        &top,
        base,
        |v| base.nodes()[node_over[&v.to_string()]].clone(),
        |e| base.edges()[edge_over[&e.to_string()]].clone(),
    )
}

pub fn random_graph<R: Rng>(rng: &mut R, max_nodes: usize, max_edges: usize, prefix: &str) -> FiniteGraph {
    let n = rng.gen_range(1..=max_nodes);
    let nodes: Vec<String> = (0..n).map(|k| format!("{prefix}{k}")).collect();
    let edges: Vec<(String, String, String)> = (0..rng.gen_range(0..=max_edges))
        .map(|k| (format!("{prefix}e{k}"), nodes.choose(rng).unwrap().clone(), nodes.choose(rng).unwrap().clone()))
        .collect();
    FiniteGraph::new(nodes, edges).expect("random graph")
}

/// `len` composable fibrations of graphs, first map first.
pub fn graph_fibration_chain<R: Rng>(rng: &mut R, len: usize) -> Vec<Arrow<FiniteGraph>> {
    let mut base = Arc::new(random_graph(rng, 2, 2, "z"));
    let mut out = Vec::new();
    for level in 0..len {
        let f = graph_fibration_over(rng, &base, &format!("l{level}."));
        base = f.dom.clone();
        out.push(f);
    }
    out.reverse();
    out
}

/// `len` composable maps of codiscrete sets induced by vertex surjections;
/// each is a fibration for the horns of dimension at most 2.
pub fn codiscrete_fibration_chain<R: Rng>(rng: &mut R, len: usize) -> Vec<Arrow<SemiSimplicialSet>> {
    let mut verts = names("v0_", rng.gen_range(1..=2));
    let mut base = codiscrete(&verts);
    let mut out = Vec::new();
    for level in 1..=len {
        let n = rng.gen_range(verts.len()..=3);
        let top = names(&format!("v{level}_"), n);
        let mut p: Vec<String> = verts.clone();
        while p.len() < n {
            p.push(verts.choose(rng).unwrap().clone());
        }
        p.shuffle(rng);
        let image: BTreeMap<String, String> = top.iter().cloned().zip(p).collect();
        let x = codiscrete(&top);
        out.push(codiscrete_map(&x, &base, |v| image[v].clone()));
        base = x;
        verts = top;
    }
    out.reverse();
    out
}

/// A random map of small graphs.
pub fn soa_graph_instance<R: Rng>(rng: &mut R) -> Arrow<FiniteGraph> {
    loop {
        let x = Arc::new(random_graph(rng, 3, 2, "x"));
        let y = Arc::new(random_graph(rng, 3, 3, "y"));
        let all = homs(&*x, &*y, None);
        if let Some(h) = all.choose(rng) {
            return Arrow::new_unchecked(x, y, h.clone());
        }
    }
}

/// Subcomplex of `y` spanned by a random face-closed choice of simplices, with its inclusion.
pub fn random_subcomplex<R: Rng>(rng: &mut R, y: &Arc<SemiSimplicialSet>) -> SSMap {
    let mut keep: Vec<Vec<usize>> = Vec::new();
    for m in 0..=y.dim() {
        let level: Vec<usize> = (0..y.len(m))
            .filter(|&i| m == 0 || (0..=m).all(|k| keep[m - 1].contains(&y.face(m, i, k))))
            .filter(|_| rng.gen_bool(0.7))
            .collect();
        keep.push(level);
    }
    let cells: Vec<Vec<String>> = keep.iter().enumerate().map(|(m, l)| l.iter().map(|&i| y.cells(m)[i].clone()).collect()).collect();
    let faces = (1..=y.dim())
        .flat_map(|m| {
            let keep = &keep;
            keep[m].iter().map(move |&i| {
                (y.cells(m)[i].clone(), (0..=m).map(|k| y.cells(m - 1)[y.face(m, i, k)].clone()).collect())
            })
        })
        .collect();
    let x = SemiSimplicialSet::new(y.dim(), cells, faces).expect("subcomplex");
    Arrow::new_unchecked(Arc::new(x), y.clone(), Hom::from_parts(keep))
}

/// A random subcomplex inclusion into a small simplex-like set, or the map of such a set to the point.
pub fn soa_ss_instance<R: Rng>(rng: &mut R) -> SSMap {
    use crate::ssset::{boundary, horn, pad_arrow, standard_simplex, to_terminal};
    let y = match rng.gen_range(0..5) {
        0 => pad_arrow(&Arrow::identity(Arc::new(standard_simplex(1).expect("simplex"))), 2).cod,
        1 => Arc::new(standard_simplex(2).expect("simplex")),
        2 => pad_arrow(&boundary(2).expect("boundary"), 2).dom,
        3 => horn(2, rng.gen_range(0..=2)).expect("horn").dom.clone(),
        _ => Arc::new(SemiSimplicialSet::terminal(2)),
    };
    let y = Arc::new(y.padded(2));
    if rng.gen_bool(0.3) {
        to_terminal(&y)
    } else {
        random_subcomplex(rng, &y)
    }
}

/// Bounds of the categories feeding [`free_rmap_corpus`].
pub const FREE_RMAP_BOUNDS: CorpusBounds = CorpusBounds {
    max_objects: 2,
    max_morphisms: 2,
    max_endo: 1,
};

/// Pairs `(g: X -> Z, φ on f: Y -> Z)` over the categories of `bounds`:
/// `f` ranges over the trivial fibrations, `φ` is its first-filler structure
/// and `g` over every functor into `Z`.
pub fn free_rmap_corpus(bounds: CorpusBounds) -> Vec<(Arrow<FiniteCategory>, LiftingFunction<FiniteCategory>)> {
    let cats = category_corpus(bounds);
    let gens = Arc::new(j_cat());
    let mut out = Vec::new();
    for f in functor_corpus(&cats).into_iter().filter(is_trivial_fibration_cat) {
        let phi = make_lifting_function(&f, gens.clone(), None, Choice::First, Exec::Sequential).expect("trivial fibrations lift");
        for x in &cats {
            let x = Arc::new(x.clone());
            for h in homs(&*x, &*f.cod, None) {
                out.push((Arrow::new_unchecked(x.clone(), f.cod.clone(), h), phi.clone()));
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::category::validate_category;
    use crate::jfib::validate_jfib;
    use crate::lifting::is_j_fibration;

    #[test]
    fn graph_classes_small_counts() {
        // up to isomorphism: 1 empty; one node with 0..2 loops; two nodes with at most one edge
        let g = graph_classes(1, 2);
        assert_eq!(g.len(), 1 + 3);
        let g2 = graph_classes(2, 1);
        // n=0: 1; n=1: 0 or 1 loop; n=2: no edge, one edge, one loop
        assert_eq!(g2.len(), 1 + 2 + 3);
    }

    #[test]
    fn monoids_of_small_order() {
        // monoids of order 1, 2, 3 up to isomorphism: 1, 2, 7
        let one_object = |k| {
            category_corpus(CorpusBounds {
                max_objects: 1,
                max_morphisms: k,
                max_endo: k,
            })
            .into_iter()
            .filter(|c| c.objects().len() == 1)
            .count()
        };
        assert_eq!(one_object(0), 1);
        assert_eq!(one_object(1), 1 + 2);
        assert_eq!(one_object(2), 1 + 2 + 7);
    }

    /// Brute force: all labeled composition tables, isomorphism by trying every
    /// object and morphism bijection.
    fn brute_categories(objs: usize, shape: &Shape) -> usize {
        let t0 = Table::new(shape);
        let n = t0.n;
        let pairs: Vec<(usize, usize)> = (0..n)
            .flat_map(|f| (0..n).map(move |g| (f, g)))
            .filter(|&(f, g)| !t0.is_id[f] && !t0.is_id[g] && t0.ends[f].1 == t0.ends[g].0)
            .collect();
        let cands: Vec<Vec<usize>> = pairs.iter().map(|&(f, g)| t0.hom[t0.ends[f].0][t0.ends[g].1].clone()).collect();
        let total: usize = cands.iter().map(Vec::len).product();
        let mut valid: Vec<FiniteCategory> = Vec::new();
        for mut code in 0..total {
            let mut t = Table::new(shape);
            for (k, &(f, g)) in pairs.iter().enumerate() {
                t.comp[f * n + g] = Some(cands[k][code % cands[k].len()]);
                code /= cands[k].len();
            }
            let c = t.to_category(shape);
            if validate_category(&c).is_empty() {
                valid.push(c);
            }
        }
        let _ = objs;
        let mut reps: Vec<FiniteCategory> = Vec::new();
        for c in valid {
            let iso = reps.iter().any(|r| {
                homs(&c, r, None).into_iter().any(|h| Arrow::new_unchecked(Arc::new(c.clone()), Arc::new(r.clone()), h).is_iso())
            });
            if !iso {
                reps.push(c);
            }
        }
        reps.len()
    }

    #[test]
    fn corpus_agrees_with_brute_force_on_small_shapes() {
        let b = CorpusBounds {
            max_objects: 2,
            max_morphisms: 3,
            max_endo: 2,
        };
        for n in 0..=2 {
            for shape in shapes(n, b) {
                assert_eq!(categories_of_shape(&shape).len(), brute_categories(n, &shape), "{shape:?}");
            }
        }
    }

    #[test]
    fn corpus_members_are_categories() {
        let corpus = category_corpus(CorpusBounds {
            max_objects: 2,
            max_morphisms: 4,
            max_endo: 2,
        });
        assert!(corpus.iter().all(|c| validate_category(c).is_empty()));
    }

    #[test]
    fn random_categories_are_valid_and_seeded() {
        let a = random_categories(7, 40);
        assert_eq!(a, random_categories(7, 40));
        for c in &a {
            assert!(validate_category(c).is_empty(), "{c:?}");
            assert!(c.morphisms().len() <= 14);
        }
    }

    #[test]
    fn probe_monos_are_monos() {
        let ms = probe_monos(2, 2);
        assert!(ms.iter().all(|m| m.is_mono() && m.hom.is_map(&*m.dom, &*m.cod)));
        // subsets of the two-node edge-free graph
        assert!(ms.iter().filter(|m| m.cod.edges().is_empty() && m.cod.nodes().len() == 2).count() == 4);
    }

    #[test]
    fn extension_fixtures_meet_their_description() {
        let mut r = rng(3);
        for _ in 0..20 {
            let g = extension_graph_instance(&mut r);
            assert!(validate_jfib(&g.x).is_empty() && validate_jfib(&g.y).is_empty());
            assert!(g.i.is_mono());
            assert!(is_j_fibration(&g.q, &g.x.gens, Exec::Sequential));
            let s = extension_ss_instance(&mut r);
            assert!(validate_jfib(&s.x).is_empty() && validate_jfib(&s.y).is_empty());
            assert!(s.i.is_mono());
            assert!(is_j_fibration(&s.q, &s.x.gens, Exec::Sequential));
            assert!(crate::jfib::is_jfib_morphism(&s.i.then(&s.q).hom, &s.x, &s.y));
        }
        for d in Defect::ALL {
            let g = extension_graph_defect(&mut r, d);
            assert!(validate_jfib(&g.x).is_empty() && validate_jfib(&g.y).is_empty());
            let s = extension_ss_defect(&mut r, d);
            assert!(validate_jfib(&s.x).is_empty() && validate_jfib(&s.y).is_empty());
        }
    }

    fn vertical_laws<C: crate::pushout::Presheaf>(chain: &[Arrow<C>], gens: &Arc<Vec<Arrow<C>>>) {
        use crate::algebra::{identity_structure, make_lifting_function, vertical_compose};
        let phis: Vec<_> = chain
            .iter()
            .map(|f| make_lifting_function(f, gens.clone(), None, Choice::Last, Exec::Parallel).unwrap())
            .collect();
        for phi in &phis {
            assert!(phi.is_valid(Exec::Parallel));
            let left = identity_structure(phi.carrier.dom.clone(), gens.clone());
            let right = identity_structure(phi.carrier.cod.clone(), gens.clone());
            assert_eq!(vertical_compose(&left, phi).unwrap(), *phi);
            assert_eq!(vertical_compose(phi, &right).unwrap(), *phi);
        }
        let ab = vertical_compose(&phis[0], &phis[1]).unwrap();
        let bc = vertical_compose(&phis[1], &phis[2]).unwrap();
        let l = vertical_compose(&ab, &phis[2]).unwrap();
        assert!(l.is_valid(Exec::Parallel));
        assert_eq!(l, vertical_compose(&phis[0], &bc).unwrap());
    }

    #[test]
    fn graph_chains_are_fibrations_and_compose() {
        use crate::lifting::j_edge;
        let gens = Arc::new(vec![j_point(), j_edge()]);
        let mut r = rng(11);
        for _ in 0..10 {
            let chain = graph_fibration_chain(&mut r, 3);
            for w in chain.windows(2) {
                assert_eq!(w[0].cod, w[1].dom);
            }
            for f in &chain {
                assert!(f.hom.is_map(&*f.dom, &*f.cod));
                assert!(is_j_fibration(f, &gens, Exec::Sequential));
            }
            vertical_laws(&chain, &gens);
        }
    }

    #[test]
    fn codiscrete_chains_are_fibrations_and_compose() {
        let gens = Arc::new(horns_up_to(2, 2).unwrap());
        let mut r = rng(12);
        for _ in 0..10 {
            let chain = codiscrete_fibration_chain(&mut r, 3);
            for f in &chain {
                assert!(f.hom.is_map(&*f.dom, &*f.cod));
                assert!(is_j_fibration(f, &gens, Exec::Sequential));
            }
            vertical_laws(&chain, &gens);
        }
    }

    #[test]
    fn soa_instances_are_maps() {
        let mut r = rng(13);
        for _ in 0..30 {
            let f = soa_graph_instance(&mut r);
            assert!(f.hom.is_map(&*f.dom, &*f.cod));
            let g = soa_ss_instance(&mut r);
            assert!(g.hom.is_map(&*g.dom, &*g.cod));
            assert!(g.dom.identity_violations().is_empty());
        }
    }
}
