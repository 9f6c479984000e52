//! Free categories on graphs, represented symbolically by paths.
//!
//! Morphisms of a free category are finite composable edge sequences; the
//! empty sequence at an object is its identity. Edge labels may themselves be
//! paths, which gives the nested free categories `F U F U X` used by the
//! cofibrant replacement comonad. A functor out of a free category is stored
//! by its values on objects and generators only.

use std::collections::BTreeMap;
use std::fmt;
use std::marker::PhantomData;

use serde::{Serialize, Serializer};

use crate::category::FiniteCategory;
use crate::error::{Error, Result};
use crate::graph::FiniteGraph;


/// Something with a source and a target object, usable as a free-category generator.
pub trait Edge: Clone + Ord + fmt::Debug + fmt::Display + Send + Sync {
    fn source(&self) -> &str;
    fn target(&self) -> &str;
}

/// A named generator edge.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Gen {
    pub id: String,
    pub source: String,
    pub target: String,
}

impl Gen {
    pub fn new(id: impl Into<String>, source: impl Into<String>, target: impl Into<String>) -> Self {
        Gen {
            id: id.into(),
            source: source.into(),
            target: target.into(),
        }
    }
}

impl fmt::Display for Gen {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.id)
    }
}

impl Edge for Gen {
    fn source(&self) -> &str {
        &self.source
    }
    fn target(&self) -> &str {
        &self.target
    }
}

/// A morphism of a free category. Displayed as `[e1,e2]`, identities as `[]@x`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Path<E> {
    source: String,
    target: String,
    edges: Vec<E>,
}

impl<E: Edge> Path<E> {
    pub fn identity(obj: impl Into<String>) -> Self {
        let o = obj.into();
        Path {
            source: o.clone(),
            target: o,
            edges: Vec::new(),
        }
    }

    /// The length-one path on `e`.
    pub fn single(e: E) -> Self {
        Path {
            source: e.source().to_string(),
            target: e.target().to_string(),
            edges: vec![e],
        }
    }

    /// Builds a path starting at `source`, checking composability.
    pub fn from_edges(source: impl Into<String>, edges: Vec<E>) -> Option<Self> {
        let source = source.into();
        let mut at = source.clone();
        for e in &edges {
            if e.source() != at {
                return None;
            }
            at = e.target().to_string();
        }
        Some(Path {
            source,
            target: at,
            edges,
        })
    }

    pub fn edges(&self) -> &[E] {
        &self.edges
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    /// First `self`, then `next`.
    pub fn then(&self, next: &Path<E>) -> Option<Path<E>> {
        if self.target != next.source {
            return None;
        }
        let mut edges = self.edges.clone();
        edges.extend(next.edges.iter().cloned());
        Some(Path {
            source: self.source.clone(),
            target: next.target.clone(),
            edges,
        })
    }
}

impl<E: Edge> Edge for Path<E> {
    fn source(&self) -> &str {
        &self.source
    }
    fn target(&self) -> &str {
        &self.target
    }
}

impl<E: fmt::Display> fmt::Display for Path<E> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.edges.is_empty() {
            return write!(f, "[]@{}", self.source);
        }
        f.write_str("[")?;
        for (i, e) in self.edges.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{e}")?;
        }
        f.write_str("]")
    }
}

impl<E: fmt::Display> Serialize for Path<E> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// Concatenation of a path of paths (the counit of a free category on its own underlying graph).
pub fn flatten<E: Edge>(p: &Path<Path<E>>) -> Path<E> {
    let mut out = Path::identity(p.source.clone());
    for q in &p.edges {
        out = out.then(q).expect("composable path of paths");
    }
    out
}

/// `F(η)`: each edge becomes the length-one path on its singleton path.
pub fn duplicate<E: Edge>(p: &Path<E>) -> Path<Path<E>> {
    Path {
        source: p.source.clone(),
        target: p.target.clone(),
        edges: p.edges.iter().cloned().map(Path::single).collect(),
    }
}

/// `F(h)` for an edge map `h`: applies `h` to each edge.
pub fn map_edges<E: Edge, D: Edge>(p: &Path<E>, h: impl Fn(&E) -> D) -> Path<D> {
    let edges: Vec<D> = p.edges.iter().map(h).collect();
    Path::from_edges(p.source.clone(), edges).expect("edge map preserves endpoints")
}

/// Composition in a target category of a functor out of a free category.
pub trait Composition {
    type Mor: Clone + PartialEq + fmt::Debug;
    fn identity_at(&self, obj: &str) -> Option<Self::Mor>;
    fn compose_then(&self, first: &Self::Mor, second: &Self::Mor) -> Option<Self::Mor>;
}

impl Composition for FiniteCategory {
    type Mor = String;

    fn identity_at(&self, obj: &str) -> Option<String> {
        let o = self.object_index(obj)?;
        Some(self.morphisms()[self.identity(o)].clone())
    }

    fn compose_then(&self, first: &String, second: &String) -> Option<String> {
        let f = self.morphism_index(first)?;
        let g = self.morphism_index(second)?;
        self.compose(f, g).map(|h| self.morphisms()[h].clone())
    }
}

/// The free category with generators of type `E`, used as a composition target.
pub struct Free<E>(PhantomData<E>);

impl<E> Default for Free<E> {
    fn default() -> Self {
        Free(PhantomData)
    }
}

impl<E: Edge> Composition for Free<E> {
    type Mor = Path<E>;

    fn identity_at(&self, obj: &str) -> Option<Path<E>> {
        Some(Path::identity(obj))
    }

    fn compose_then(&self, first: &Path<E>, second: &Path<E>) -> Option<Path<E>> {
        first.then(second)
    }
}

/// A functor out of a free category: values on objects and on generators.
/// Two such functors are equal exactly when these values agree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FunctorFromFree<E: Ord, M> {
    pub object_map: BTreeMap<String, String>,
    pub generator_map: BTreeMap<E, M>,
}

impl<E: Edge, M: Clone + PartialEq + fmt::Debug> FunctorFromFree<E, M> {
    /// Image of a path, composing generator images in `target`.
    pub fn evaluate<T: Composition<Mor = M>>(&self, target: &T, p: &Path<E>) -> Option<M> {
        let start = self.object_map.get(p.source())?;
        let mut acc = target.identity_at(start)?;
        for e in p.edges() {
            let m = self.generator_map.get(e)?;
            acc = target.compose_then(&acc, m)?;
        }
        Some(acc)
    }
}

/// The free category on a finite graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FreeCategory {
    graph: FiniteGraph,
    generators: Vec<Gen>,
    out: Vec<Vec<usize>>,
}

pub fn free_category(g: &FiniteGraph) -> FreeCategory {
    let generators = g.edge_triples().map(|(e, s, t)| Gen::new(e, s, t)).collect();
    FreeCategory {
        graph: g.clone(),
        generators,
        out: g.out_edges(),
    }
}

impl FreeCategory {
    pub fn base(&self) -> &FiniteGraph {
        &self.graph
    }

    pub fn objects(&self) -> &[String] {
        self.graph.nodes()
    }

    pub fn generators(&self) -> &[Gen] {
        &self.generators
    }

    pub fn generator(&self, id: &str) -> Option<&Gen> {
        self.graph.edge_index(id).map(|e| &self.generators[e])
    }

    /// Lazily enumerates `Hom(a, b)` by length, then lexicographically by edge id.
    /// Without `max_len` the base graph must be acyclic.
    pub fn hom(&self, a: &str, b: &str, max_len: Option<usize>) -> Result<HomPaths<'_>> {
        let start = self.graph.node_index(a).ok_or_else(|| Error::UnknownId {
            what: "object".into(),
            id: a.into(),
        })?;
        let end = self.graph.node_index(b).ok_or_else(|| Error::UnknownId {
            what: "object".into(),
            id: b.into(),
        })?;
        let max_len = match max_len {
            Some(l) => l,
            None if self.graph.has_directed_cycle() => return Err(Error::UnboundedHomSet),
            None => self.graph.nodes().len().saturating_sub(1),
        };
        Ok(HomPaths {
            cat: self,
            start,
            end,
            max_len,
            len: 0,
            stack: Vec::new(),
            fresh: true,
        })
    }

    /// Every path of length at most `max_len`, grouped by length.
    pub fn paths_up_to(&self, max_len: usize) -> Vec<Path<Gen>> {
        let mut out = Vec::new();
        for a in self.objects() {
            for b in self.objects() {
                out.extend(self.hom(a, b, Some(max_len)).expect("known objects"));
            }
        }
        out.sort_by(|p, q| p.len().cmp(&q.len()).then_with(|| p.cmp(q)));
        out
    }

    /// The finite category of paths of length at most `max_len`. Composites
    /// longer than the bound are left undefined, so the table is a category
    /// exactly when it closes (e.g. when `max_len` bounds all paths of an acyclic graph).
    pub fn truncate(&self, max_len: usize) -> FiniteCategory {
        let paths = self.paths_up_to(max_len);
        let name = |p: &Path<Gen>| p.to_string();
        let mut composition = Vec::new();
        for p in &paths {
            for q in &paths {
                if let Some(r) = p.then(q) {
                    if r.len() <= max_len {
                        composition.push((name(p), name(q), name(&r)));
                    }
                }
            }
        }
        FiniteCategory::new(
            self.objects().to_vec(),
            paths
                .iter()
                .map(|p| (name(p), p.source().to_string(), p.target().to_string()))
                .collect::<Vec<_>>(),
            self.objects()
                .iter()
                .map(|o| (o.clone(), name(&Path::<Gen>::identity(o.clone()))))
                .collect::<Vec<_>>(),
            composition,
        )
        .expect("path ids are unique")
    }
}

/// Iterator over the paths `a -> b` of length `0..=max_len`.
pub struct HomPaths<'a> {
    cat: &'a FreeCategory,
    start: usize,
    end: usize,
    max_len: usize,
    len: usize,
    /// Positions into the out-edge lists along the current partial path.
    stack: Vec<usize>,
    fresh: bool,
}

impl HomPaths<'_> {
    fn node_after(&self, depth: usize) -> usize {
        let mut v = self.start;
        for &i in &self.stack[..depth] {
            v = self.cat.graph.edge_ends(self.cat.out[v][i]).1;
        }
        v
    }

    /// Advances to the next full-length path of the current length, if any.
    fn advance(&mut self) -> bool {
        loop {
            if self.fresh {
                self.fresh = false;
                self.stack.clear();
            } else {
                // bump the deepest position that can move
                loop {
                    let Some(last) = self.stack.pop() else { return false };
                    let v = self.node_after(self.stack.len());
                    if last + 1 < self.cat.out[v].len() {
                        self.stack.push(last + 1);
                        break;
                    }
                }
            }
            // extend greedily to full length
            let mut ok = true;
            while self.stack.len() < self.len {
                let v = self.node_after(self.stack.len());
                if self.cat.out[v].is_empty() {
                    ok = false;
                    break;
                }
                self.stack.push(0);
            }
            if ok {
                return true;
            }
            // dead end: backtrack from the current prefix
            if self.stack.is_empty() {
                return false;
            }
        }
    }

    fn current(&self) -> Path<Gen> {
        let mut v = self.start;
        let mut edges = Vec::with_capacity(self.stack.len());
        for &i in &self.stack {
            let e = self.cat.out[v][i];
            edges.push(self.cat.generators[e].clone());
            v = self.cat.graph.edge_ends(e).1;
        }
        Path::from_edges(self.cat.graph.nodes()[self.start].clone(), edges).expect("walk")
    }
}

impl Iterator for HomPaths<'_> {
    type Item = Path<Gen>;

    fn next(&mut self) -> Option<Path<Gen>> {
        while self.len <= self.max_len {
            if self.len == 0 {
                self.len = 1;
                self.fresh = true;
                if self.start == self.end {
                    return Some(Path::identity(self.cat.graph.nodes()[self.start].clone()));
                }
                continue;
            }
            while self.advance() {
                if self.node_after(self.stack.len()) == self.end {
                    return Some(self.current());
                }
            }
            self.len += 1;
            self.fresh = true;
        }
        None
    }
}

/// The unit `η_G: G -> U F G`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UnitMap {
    pub node_map: BTreeMap<String, String>,
    pub edge_map: BTreeMap<String, Path<Gen>>,
}

pub fn unit_eta(g: &FiniteGraph) -> UnitMap {
    UnitMap {
        node_map: g.nodes().iter().map(|n| (n.clone(), n.clone())).collect(),
        edge_map: g
            .edge_triples()
            .map(|(e, s, t)| (e.to_string(), Path::single(Gen::new(e, s, t))))
            .collect(),
    }
}

/// Generators of `F U C`: one per morphism of `C`, identities included.
pub fn morphism_generators(c: &FiniteCategory) -> Vec<Gen> {
    (0..c.morphisms().len())
        .map(|m| {
            let (a, b) = c.ends(m);
            Gen::new(c.morphisms()[m].clone(), c.objects()[a].clone(), c.objects()[b].clone())
        })
        .collect()
}

/// The counit `ε_C: F U C -> C`: identity on objects, each generator to its morphism.
pub fn counit_eps(c: &FiniteCategory) -> FunctorFromFree<Gen, String> {
    FunctorFromFree {
        object_map: c.objects().iter().map(|o| (o.clone(), o.clone())).collect(),
        generator_map: morphism_generators(c).into_iter().map(|g| (g.clone(), g.id)).collect(),
    }
}

/// Checks that a generator table respects endpoints in a finite target category.
pub fn functor_from_free_violation(
    generators: &[Gen],
    f: &FunctorFromFree<Gen, String>,
    target: &FiniteCategory,
) -> Option<String> {
    for g in generators {
        let Some(m) = f.generator_map.get(g) else {
            return Some(format!("generator {g} has no image"));
        };
        let Some(mi) = target.morphism_index(m) else {
            return Some(format!("image {m} of {g} is not a morphism"));
        };
        let (a, b) = target.ends(mi);
        let want = (f.object_map.get(&g.source), f.object_map.get(&g.target));
        if want != (Some(&target.objects()[a]), Some(&target.objects()[b])) {
            return Some(format!("image {m} of {g} has the wrong endpoints"));
        }
    }
    None
}
