//! Finite instance objects and the maps between them.
//!
//! Every instance category in this crate (graphs, finite categories,
//! truncated semi-simplicial sets) stores an object as a stack of *sorts*:
//! sort 0 holds the bottom elements (nodes, objects, vertices) and every
//! element of sort `s > 0` carries an ordered list of *faces* in sort `s - 1`.
//! A map is a family of index functions, one per sort, that commutes with
//! faces. Finite categories add identity and composition constraints through
//! [`Instance::extra_check`].
//!
//! Element ids are kept sorted inside each sort, so index order is the
//! lexicographic order of ids and every search below runs in lexicographic
//! order of the produced maps.

use std::collections::HashMap;
use std::fmt::Debug;
use std::ops::ControlFlow;
use std::sync::Arc;

use crate::error::{Error, Result};

/// A finite object of one of the instance categories.
pub trait Instance: Clone + Debug + PartialEq + Eq + Send + Sync + 'static {
    /// `kind` tag of the object in instance files.
    const KIND: &'static str;
    /// `kind` tag of maps between such objects.
    const MAP_KIND: &'static str;

    fn sorts(&self) -> usize;

    /// Sorted element ids of `sort`; empty for sorts the object does not have.
    fn ids(&self, sort: usize) -> &[String];

    /// Faces (indices into sort `sort - 1`) of element `idx` of `sort`.
    fn faces(&self, sort: usize, idx: usize) -> &[usize];

    /// Additional constraint checked when a map search assigns `(sort, idx)`.
    /// All elements ordered before `(sort, idx)` are already assigned in `parts`.
    fn extra_check(&self, _cod: &Self, _parts: &[Vec<usize>], _sort: usize, _idx: usize) -> bool {
        true
    }

    /// Whether maps are exactly the face-preserving families, with no [`Instance::extra_check`].
    const FACES_ONLY: bool = true;

    fn len(&self, sort: usize) -> usize {
        self.ids(sort).len()
    }

    fn is_empty(&self) -> bool {
        (0..self.sorts()).all(|s| self.len(s) == 0)
    }

    fn size(&self) -> usize {
        (0..self.sorts()).map(|s| self.len(s)).sum()
    }

    fn position(&self, sort: usize, id: &str) -> Option<usize> {
        self.ids(sort).binary_search_by(|probe| probe.as_str().cmp(id)).ok()
    }
}

/// Index-level data of a map: `parts[s][i]` is the image of element `i` of sort `s`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Hom {
    parts: Vec<Vec<usize>>,
}

impl Hom {
    pub fn from_parts(parts: Vec<Vec<usize>>) -> Self {
        Hom { parts }
    }

    pub fn identity<C: Instance>(obj: &C) -> Self {
        Hom {
            parts: (0..obj.sorts()).map(|s| (0..obj.len(s)).collect()).collect(),
        }
    }

    /// The unique map out of an object with no elements.
    pub fn empty<C: Instance>(obj: &C) -> Self {
        Hom {
            parts: vec![Vec::new(); obj.sorts()],
        }
    }

    pub fn parts(&self) -> &[Vec<usize>] {
        &self.parts
    }

    pub fn part(&self, sort: usize) -> &[usize] {
        self.parts.get(sort).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn image(&self, sort: usize, idx: usize) -> usize {
        self.parts[sort][idx]
    }

    /// Diagrammatic composite: first `self`, then `next`.
    pub fn then(&self, next: &Hom) -> Hom {
        Hom {
            parts: self
                .parts
                .iter()
                .enumerate()
                .map(|(s, part)| part.iter().map(|&x| next.parts[s][x]).collect())
                .collect(),
        }
    }

    pub fn is_injective(&self) -> bool {
        self.injectivity_witness().is_none()
    }

    /// First pair of distinct elements with a common image.
    pub fn injectivity_witness(&self) -> Option<(usize, usize, usize)> {
        for (s, part) in self.parts.iter().enumerate() {
            let mut seen: HashMap<usize, usize> = HashMap::new();
            for (i, &y) in part.iter().enumerate() {
                if let Some(&j) = seen.get(&y) {
                    return Some((s, j, i));
                }
                seen.insert(y, i);
            }
        }
        None
    }

    pub fn is_surjective_onto<C: Instance>(&self, cod: &C) -> bool {
        (0..cod.sorts()).all(|s| {
            let mut hit = vec![false; cod.len(s)];
            for &y in self.part(s) {
                hit[y] = true;
            }
            hit.into_iter().all(|h| h)
        })
    }

    /// Checks that this is a map `dom -> cod`.
    pub fn is_map<C: Instance>(&self, dom: &C, cod: &C) -> bool {
        self.map_violation(dom, cod).is_none()
    }

    /// Describes the first reason this is not a map `dom -> cod`.
    pub fn map_violation<C: Instance>(&self, dom: &C, cod: &C) -> Option<String> {
        if self.parts.len() != dom.sorts() {
            return Some(format!(
                "map has {} components, source has {} sorts",
                self.parts.len(),
                dom.sorts()
            ));
        }
        for s in 0..dom.sorts() {
            if self.parts[s].len() != dom.len(s) {
                return Some(format!("component {s} is not total"));
            }
            for (i, &y) in self.parts[s].iter().enumerate() {
                if y >= cod.len(s) {
                    return Some(format!("{} has no image in sort {s}", dom.ids(s)[i]));
                }
                if s > 0 {
                    let mapped: Vec<usize> = dom.faces(s, i).iter().map(|&f| self.parts[s - 1][f]).collect();
                    if mapped != cod.faces(s, y) {
                        return Some(format!(
                            "{} -> {} does not commute with faces",
                            dom.ids(s)[i],
                            cod.ids(s)[y]
                        ));
                    }
                }
                if !dom.extra_check(cod, &self.parts, s, i) {
                    return Some(format!("{} -> {} breaks structure", dom.ids(s)[i], cod.ids(s)[y]));
                }
            }
        }
        None
    }
}

/// A map together with its source and target objects.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Arrow<C> {
    pub dom: Arc<C>,
    pub cod: Arc<C>,
    pub hom: Hom,
}

impl<C: Instance> Arrow<C> {
    pub fn new(dom: Arc<C>, cod: Arc<C>, hom: Hom) -> Result<Self> {
        if let Some(reason) = hom.map_violation(&*dom, &*cod) {
            return Err(Error::NotAMap(reason));
        }
        Ok(Arrow { dom, cod, hom })
    }

    /// Builds an arrow without checking that `hom` commutes with structure.
    pub fn new_unchecked(dom: Arc<C>, cod: Arc<C>, hom: Hom) -> Self {
        Arrow { dom, cod, hom }
    }

    pub fn identity(obj: Arc<C>) -> Self {
        let hom = Hom::identity(&*obj);
        Arrow {
            dom: obj.clone(),
            cod: obj,
            hom,
        }
    }

    /// Diagrammatic composite: first `self`, then `next`.
    pub fn then(&self, next: &Arrow<C>) -> Arrow<C> {
        debug_assert!(Arc::ptr_eq(&self.cod, &next.dom) || self.cod == next.dom);
        Arrow {
            dom: self.dom.clone(),
            cod: next.cod.clone(),
            hom: self.hom.then(&next.hom),
        }
    }

    pub fn is_mono(&self) -> bool {
        self.hom.is_injective()
    }

    pub fn is_epi(&self) -> bool {
        self.hom.is_surjective_onto(&*self.cod)
    }

    pub fn is_iso(&self) -> bool {
        self.is_mono() && self.is_epi()
    }

    /// Inverse of an isomorphism.
    pub fn inverse(&self) -> Option<Arrow<C>> {
        if !self.is_iso() {
            return None;
        }
        let parts = (0..self.cod.sorts())
            .map(|s| {
                let mut inv = vec![0; self.cod.len(s)];
                for (i, &y) in self.hom.part(s).iter().enumerate() {
                    inv[y] = i;
                }
                inv
            })
            .collect();
        Some(Arrow {
            dom: self.cod.clone(),
            cod: self.dom.clone(),
            hom: Hom::from_parts(parts),
        })
    }

    /// Image id of the element `id` of `sort`.
    pub fn apply(&self, sort: usize, id: &str) -> Option<&str> {
        let i = self.dom.position(sort, id)?;
        Some(self.cod.ids(sort)[self.hom.image(sort, i)].as_str())
    }
}

/// Depth-first enumeration of maps `dom -> cod` subject to element-wise
/// constraints, in lexicographic order of the flattened image vector
/// (or reverse lexicographic order when [`HomSearch::reversed`]).
pub struct HomSearch<'a, C: Instance> {
    dom: &'a C,
    cod: &'a C,
    fixed: Vec<Vec<Option<usize>>>,
    fibers: Option<Fibers>,
    infeasible: bool,
    reverse: bool,
}

/// Candidate lists for each domain element coming from a constraint `f ∘ d = b`.
struct Fibers {
    /// `by_target[s][y]`: elements of the search codomain over `y`.
    by_target: Vec<Vec<Vec<usize>>>,
    /// `wanted[s][e]`: the prescribed image under `f` of the element `e` of the search domain.
    wanted: Vec<Vec<usize>>,
}

impl<'a, C: Instance> HomSearch<'a, C> {
    pub fn new(dom: &'a C, cod: &'a C) -> Self {
        HomSearch {
            dom,
            cod,
            fixed: (0..dom.sorts()).map(|s| vec![None; dom.len(s)]).collect(),
            fibers: None,
            infeasible: false,
            reverse: false,
        }
    }

    pub fn fix(mut self, sort: usize, idx: usize, value: usize) -> Self {
        match self.fixed[sort][idx] {
            Some(v) if v != value => self.infeasible = true,
            _ => self.fixed[sort][idx] = Some(value),
        }
        self
    }

    /// Requires `left ∘ d = top` where `left: A -> dom` and `top: A -> cod`.
    pub fn extending(mut self, left: &Hom, top: &Hom) -> Self {
        for (s, part) in left.parts().iter().enumerate() {
            for (e, &b) in part.iter().enumerate() {
                self = self.fix(s, b, top.image(s, e));
            }
        }
        self
    }

    /// Requires `d ∘ right = bottom` where `right: cod -> Y` and `bottom: dom -> Y`.
    pub fn over(mut self, right: &Hom, bottom: &Hom) -> Self {
        let mut by_target = Vec::with_capacity(self.dom.sorts());
        for s in 0..self.dom.sorts() {
            let width = right
                .part(s)
                .iter()
                .chain(bottom.part(s).iter())
                .map(|&y| y + 1)
                .max()
                .unwrap_or(0);
            let mut fib = vec![Vec::new(); width];
            for (x, &y) in right.part(s).iter().enumerate() {
                fib[y].push(x);
            }
            by_target.push(fib);
        }
        self.fibers = Some(Fibers {
            by_target,
            wanted: bottom.parts().to_vec(),
        });
        self
    }

    pub fn reversed(mut self) -> Self {
        self.reverse = true;
        self
    }

    /// Visits maps in order until the visitor breaks. Returns `true` if it broke early.
    pub fn for_each(&self, mut visit: impl FnMut(&Hom) -> ControlFlow<()>) -> bool {
        if self.infeasible {
            return false;
        }
        let order: Vec<(usize, usize)> = (0..self.dom.sorts())
            .flat_map(|s| (0..self.dom.len(s)).map(move |i| (s, i)))
            .collect();
        let index = FaceIndex::build(self.cod);
        let mut parts: Vec<Vec<usize>> = (0..self.dom.sorts()).map(|s| vec![usize::MAX; self.dom.len(s)]).collect();
        self.dfs(&order, 0, &index, &mut parts, &mut visit).is_break()
    }

    fn candidates(&self, index: &FaceIndex, parts: &[Vec<usize>], s: usize, i: usize) -> Vec<usize> {
        if s >= self.cod.sorts() {
            return Vec::new();
        }
        let mut cands: Vec<usize> = if let Some(v) = self.fixed[s][i] {
            vec![v]
        } else if let Some(fib) = &self.fibers {
            let y = fib.wanted[s][i];
            fib.by_target[s].get(y).cloned().unwrap_or_default()
        } else if s == 0 {
            (0..self.cod.len(0)).collect()
        } else {
            let key: Vec<usize> = self.dom.faces(s, i).iter().map(|&f| parts[s - 1][f]).collect();
            return self.ordered(index.lookup(s, &key).to_vec());
        };
        if let Some(fib) = &self.fibers {
            if self.fixed[s][i].is_some() {
                let y = fib.wanted[s][i];
                cands.retain(|c| fib.by_target[s].get(y).is_some_and(|l| l.contains(c)));
            }
        }
        if s > 0 {
            cands.retain(|&c| {
                c < self.cod.len(s)
                    && self
                        .dom
                        .faces(s, i)
                        .iter()
                        .zip(self.cod.faces(s, c))
                        .all(|(&f, &g)| parts[s - 1][f] == g)
            });
        } else {
            cands.retain(|&c| c < self.cod.len(0));
        }
        self.ordered(cands)
    }

    fn ordered(&self, mut cands: Vec<usize>) -> Vec<usize> {
        if self.reverse {
            cands.reverse();
        }
        cands
    }

    fn dfs(
        &self,
        order: &[(usize, usize)],
        pos: usize,
        index: &FaceIndex,
        parts: &mut Vec<Vec<usize>>,
        visit: &mut impl FnMut(&Hom) -> ControlFlow<()>,
    ) -> ControlFlow<()> {
        if pos == order.len() {
            let hom = Hom { parts: parts.clone() };
            return visit(&hom);
        }
        let (s, i) = order[pos];
        for c in self.candidates(index, parts, s, i) {
            parts[s][i] = c;
            if self.dom.extra_check(self.cod, parts, s, i) {
                self.dfs(order, pos + 1, index, parts, visit)?;
            }
        }
        parts[s][i] = usize::MAX;
        ControlFlow::Continue(())
    }

    pub fn first(&self) -> Option<Hom> {
        let mut found = None;
        self.for_each(|h| {
            found = Some(h.clone());
            ControlFlow::Break(())
        });
        found
    }

    pub fn collect(&self, limit: Option<usize>) -> Vec<Hom> {
        let mut out = Vec::new();
        if limit == Some(0) {
            return out;
        }
        self.for_each(|h| {
            out.push(h.clone());
            if limit.is_some_and(|l| out.len() >= l) {
                ControlFlow::Break(())
            } else {
                ControlFlow::Continue(())
            }
        });
        out
    }

    pub fn count(&self) -> usize {
        if C::FACES_ONLY {
            return self.count_top_down();
        }
        self.count_by_enumeration()
    }

    pub(crate) fn count_by_enumeration(&self) -> usize {
        let mut n = 0;
        self.for_each(|_| {
            n += 1;
            ControlFlow::Continue(())
        });
        n
    }

    pub fn exists(&self) -> bool {
        self.first().is_some()
    }
}

impl<C: Instance> HomSearch<'_, C> {
    /// Counts maps by assigning cells before their faces; order-free, so only
    /// valid for instances whose maps are determined by faces alone.
    pub(crate) fn count_top_down(&self) -> usize {
        if self.infeasible {
            return 0;
        }
        let order: Vec<(usize, usize)> = (0..self.dom.sorts())
            .rev()
            .flat_map(|s| (0..self.dom.len(s)).map(move |i| (s, i)))
            .collect();
        let index = CofaceIndex::build(self.cod);
        let mut parts: Vec<Vec<usize>> = (0..self.dom.sorts()).map(|s| vec![usize::MAX; self.dom.len(s)]).collect();
        let mut trail = Vec::new();
        self.count_from(&order, 0, &index, &mut parts, &mut trail)
    }

    fn count_from(
        &self,
        order: &[(usize, usize)],
        mut pos: usize,
        index: &CofaceIndex,
        parts: &mut Vec<Vec<usize>>,
        trail: &mut Vec<(usize, usize)>,
    ) -> usize {
        while pos < order.len() && parts[order[pos].0][order[pos].1] != usize::MAX {
            pos += 1;
        }
        if pos == order.len() {
            return 1;
        }
        let (s, i) = order[pos];
        if s >= self.cod.sorts() {
            return 0;
        }
        let cands: Vec<usize> = self.top_down_candidates(index, parts, s, i);
        let mut total = 0;
        for c in cands {
            let mark = trail.len();
            if self.assign(parts, trail, s, i, c) {
                total += self.count_from(order, pos + 1, index, parts, trail);
            }
            while trail.len() > mark {
                let (t, k) = trail.pop().expect("trail");
                parts[t][k] = usize::MAX;
            }
        }
        total
    }

    fn top_down_candidates(&self, index: &CofaceIndex, parts: &[Vec<usize>], s: usize, i: usize) -> Vec<usize> {
        if let Some(v) = self.fixed[s][i] {
            return vec![v];
        }
        let mut best: Option<&[usize]> = None;
        for (k, &f) in self.dom.faces(s, i).iter().enumerate() {
            let v = parts[s - 1][f];
            if v != usize::MAX {
                let l = index.lookup(s, k, v);
                if best.is_none_or(|b| l.len() < b.len()) {
                    best = Some(l);
                }
            }
        }
        if let Some(fib) = &self.fibers {
            let l = fib.by_target[s].get(fib.wanted[s][i]).map(Vec::as_slice).unwrap_or(&[]);
            if best.is_none_or(|b| l.len() < b.len()) {
                best = Some(l);
            }
        }
        match best {
            Some(l) => l.to_vec(),
            None => (0..self.cod.len(s)).collect(),
        }
    }

    /// Assigns `(s, i) -> c` and propagates to faces; `false` on conflict.
    fn assign(&self, parts: &mut [Vec<usize>], trail: &mut Vec<(usize, usize)>, s: usize, i: usize, c: usize) -> bool {
        let cur = parts[s][i];
        if cur != usize::MAX {
            return cur == c;
        }
        if c >= self.cod.len(s) || self.fixed[s][i].is_some_and(|v| v != c) {
            return false;
        }
        if let Some(fib) = &self.fibers {
            let y = fib.wanted[s][i];
            if !fib.by_target[s].get(y).is_some_and(|l| l.binary_search(&c).is_ok()) {
                return false;
            }
        }
        parts[s][i] = c;
        trail.push((s, i));
        if s == 0 {
            return true;
        }
        let dom_faces = self.dom.faces(s, i);
        let cod_faces = self.cod.faces(s, c);
        dom_faces
            .iter()
            .zip(cod_faces)
            .all(|(&f, &g)| self.assign(parts, trail, s - 1, f, g))
    }
}

/// Codomain cells indexed by `(face position, face value)`.
struct CofaceIndex {
    by_face: Vec<Vec<Vec<Vec<usize>>>>,
}

impl CofaceIndex {
    fn build<C: Instance>(cod: &C) -> Self {
        let by_face = (0..cod.sorts())
            .map(|s| {
                if s == 0 {
                    return Vec::new();
                }
                let below = cod.len(s - 1);
                let width = (0..cod.len(s)).map(|c| cod.faces(s, c).len()).max().unwrap_or(0);
                let mut idx = vec![vec![Vec::new(); below]; width];
                for c in 0..cod.len(s) {
                    for (k, &f) in cod.faces(s, c).iter().enumerate() {
                        idx[k][f].push(c);
                    }
                }
                idx
            })
            .collect();
        CofaceIndex { by_face }
    }

    fn lookup(&self, s: usize, k: usize, v: usize) -> &[usize] {
        self.by_face
            .get(s)
            .and_then(|l| l.get(k))
            .and_then(|l| l.get(v))
            .map(Vec::as_slice)
            .unwrap_or(&[])
    }
}

/// Codomain elements grouped by their face tuples.
struct FaceIndex {
    by_faces: Vec<HashMap<Vec<usize>, Vec<usize>>>,
}

impl FaceIndex {
    fn build<C: Instance>(cod: &C) -> Self {
        let by_faces = (0..cod.sorts())
            .map(|s| {
                let mut m: HashMap<Vec<usize>, Vec<usize>> = HashMap::new();
                if s > 0 {
                    for c in 0..cod.len(s) {
                        m.entry(cod.faces(s, c).to_vec()).or_default().push(c);
                    }
                }
                m
            })
            .collect();
        FaceIndex { by_faces }
    }

    fn lookup(&self, s: usize, key: &[usize]) -> &[usize] {
        self.by_faces
            .get(s)
            .and_then(|m| m.get(key))
            .map(Vec::as_slice)
            .unwrap_or(&[])
    }
}

/// All maps `dom -> cod` in lexicographic order, truncated at `limit`.
pub fn homs<C: Instance>(dom: &C, cod: &C, limit: Option<usize>) -> Vec<Hom> {
    HomSearch::new(dom, cod).collect(limit)
}

/// Sorts ids and returns them with a lookup from id to index, rejecting duplicates.
pub(crate) fn sorted_ids(what: &str, ids: impl IntoIterator<Item = String>) -> Result<Vec<String>> {
    let mut v: Vec<String> = ids.into_iter().collect();
    v.sort();
    for w in v.windows(2) {
        if w[0] == w[1] {
            return Err(Error::DuplicateId {
                what: what.to_string(),
                id: w[0].clone(),
            });
        }
    }
    Ok(v)
}

pub(crate) fn index_of(ids: &[String], what: &str, id: &str) -> Result<usize> {
    ids.binary_search_by(|p| p.as_str().cmp(id)).map_err(|_| Error::UnknownId {
        what: what.to_string(),
        id: id.to_string(),
    })
}
