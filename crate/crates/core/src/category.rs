//! Finite categories given by composition tables.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{components, FiniteGraph, Partition};
use crate::instance::{index_of, sorted_ids, Instance};

/// A finite category. Composition is stored diagrammatically: the entry for
/// `(first, second)` is "first, then second".
///
/// Construction checks only that every id referred to exists; the category
/// laws are checked by [`validate_category`].
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FiniteCategory {
    objects: Vec<String>,
    morphisms: Vec<String>,
    ends: Vec<[usize; 2]>,
    identity: Vec<usize>,
    identity_of: Vec<Option<usize>>,
    comp: Vec<Option<usize>>,
    /// Composition entries grouped by the largest index among (first, second, result).
    comp_by_max: Vec<Vec<(usize, usize, usize)>>,
}

/// One broken law in a composition table.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(tag = "violation", rename_all = "snake_case")]
pub enum CategoryViolation {
    IdentityNotEndo { object: String, morphism: String },
    MissingComposite { first: String, second: String },
    NotComposable { first: String, second: String },
    CompositeEnds { first: String, second: String, result: String },
    LeftUnit { morphism: String },
    RightUnit { morphism: String },
    Associativity { first: String, second: String, third: String },
}

impl FiniteCategory {
    pub fn new<S: Into<String>>(
        objects: impl IntoIterator<Item = S>,
        morphisms: impl IntoIterator<Item = (S, S, S)>,
        identities: impl IntoIterator<Item = (S, S)>,
        composition: impl IntoIterator<Item = (S, S, S)>,
    ) -> Result<Self> {
        let objects = sorted_ids("object", objects.into_iter().map(Into::into))?;
        let mut raw: Vec<(String, String, String)> = morphisms
            .into_iter()
            .map(|(m, d, c)| (m.into(), d.into(), c.into()))
            .collect();
        raw.sort();
        let morphisms = sorted_ids("morphism", raw.iter().map(|(m, _, _)| m.clone()))?;
        let ends = raw
            .iter()
            .map(|(_, d, c)| Ok([index_of(&objects, "object", d)?, index_of(&objects, "object", c)?]))
            .collect::<Result<Vec<_>>>()?;
        let mut identity = vec![usize::MAX; objects.len()];
        for (o, m) in identities {
            let (o, m): (String, String) = (o.into(), m.into());
            let oi = index_of(&objects, "object", &o)?;
            if identity[oi] != usize::MAX {
                return Err(Error::Malformed(format!("object {o} has two identities")));
            }
            identity[oi] = index_of(&morphisms, "morphism", &m)?;
        }
        if let Some(o) = identity.iter().position(|&m| m == usize::MAX) {
            return Err(Error::Malformed(format!("object {} has no identity", objects[o])));
        }
        let n = morphisms.len();
        let mut comp = vec![None; n * n];
        for (f, g, h) in composition {
            let (f, g, h): (String, String, String) = (f.into(), g.into(), h.into());
            let fi = index_of(&morphisms, "morphism", &f)?;
            let gi = index_of(&morphisms, "morphism", &g)?;
            let hi = index_of(&morphisms, "morphism", &h)?;
            if comp[fi * n + gi].is_some() {
                return Err(Error::Malformed(format!("two composites for ({f}, {g})")));
            }
            comp[fi * n + gi] = Some(hi);
        }
        Ok(Self::assemble(objects, morphisms, ends, identity, comp))
    }

    fn assemble(
        objects: Vec<String>,
        morphisms: Vec<String>,
        ends: Vec<[usize; 2]>,
        identity: Vec<usize>,
        comp: Vec<Option<usize>>,
    ) -> Self {
        let n = morphisms.len();
        let mut identity_of = vec![None; n];
        for (o, &m) in identity.iter().enumerate() {
            identity_of[m] = Some(o);
        }
        let mut comp_by_max = vec![Vec::new(); n];
        for f in 0..n {
            for g in 0..n {
                if let Some(h) = comp[f * n + g] {
                    comp_by_max[f.max(g).max(h)].push((f, g, h));
                }
            }
        }
        FiniteCategory {
            objects,
            morphisms,
            ends,
            identity,
            identity_of,
            comp,
            comp_by_max,
        }
    }

    pub fn empty() -> Self {
        Self::assemble(Vec::new(), Vec::new(), Vec::new(), Vec::new(), Vec::new())
    }

    /// The discrete category on objects `0..n`, identities `1_i`.
    pub fn discrete(n: usize) -> Self {
        let objs: Vec<String> = (0..n).map(|i| i.to_string()).collect();
        FiniteCategory::new(
            objs.clone(),
            objs.iter().map(|o| (format!("1_{o}"), o.clone(), o.clone())).collect::<Vec<_>>(),
            objs.iter().map(|o| (o.clone(), format!("1_{o}"))).collect::<Vec<_>>(),
            objs.iter().map(|o| (format!("1_{o}"), format!("1_{o}"), format!("1_{o}"))).collect::<Vec<_>>(),
        )
        .expect("valid")
    }

    /// One object `*`, one morphism `1_*`.
    pub fn terminal() -> Self {
        FiniteCategory::new(["*"], [("1_*", "*", "*")], [("*", "1_*")], [("1_*", "1_*", "1_*")]).expect("valid")
    }

    /// Objects `0`, `1` and one non-identity morphism `f: 0 -> 1`.
    pub fn arrow() -> Self {
        FiniteCategory::new(
            ["0", "1"],
            [("1_0", "0", "0"), ("1_1", "1", "1"), ("f", "0", "1")],
            [("0", "1_0"), ("1", "1_1")],
            [
                ("1_0", "1_0", "1_0"),
                ("1_1", "1_1", "1_1"),
                ("1_0", "f", "f"),
                ("f", "1_1", "f"),
            ],
        )
        .expect("valid")
    }

    pub fn objects(&self) -> &[String] {
        &self.objects
    }

    pub fn morphisms(&self) -> &[String] {
        &self.morphisms
    }

    pub fn ends(&self, m: usize) -> (usize, usize) {
        (self.ends[m][0], self.ends[m][1])
    }

    pub fn identity(&self, obj: usize) -> usize {
        self.identity[obj]
    }

    pub fn identity_object(&self, m: usize) -> Option<usize> {
        self.identity_of[m]
    }

    pub fn is_identity(&self, m: usize) -> bool {
        self.identity_of[m].is_some()
    }

    /// First `f`, then `g`.
    pub fn compose(&self, f: usize, g: usize) -> Option<usize> {
        self.comp[f * self.morphisms.len() + g]
    }

    pub fn object_index(&self, id: &str) -> Option<usize> {
        self.position(0, id)
    }

    pub fn morphism_index(&self, id: &str) -> Option<usize> {
        self.position(1, id)
    }

    /// Morphisms `a -> b` in id order.
    pub fn hom(&self, a: usize, b: usize) -> Vec<usize> {
        (0..self.morphisms.len()).filter(|&m| self.ends[m] == [a, b]).collect()
    }

    /// `(first, second, result)` triples of the composition table in index order.
    pub fn composition_triples(&self) -> Vec<(usize, usize, usize)> {
        let n = self.morphisms.len();
        (0..n)
            .flat_map(|f| (0..n).filter_map(move |g| self.comp[f * n + g].map(|h| (f, g, h))))
            .collect()
    }

    pub fn non_identity_count(&self) -> usize {
        self.identity_of.iter().filter(|o| o.is_none()).count()
    }

    /// Replaces one composite; used to build broken fixtures.
    pub fn with_composite(&self, first: &str, second: &str, result: &str) -> Result<Self> {
        let f = index_of(&self.morphisms, "morphism", first)?;
        let g = index_of(&self.morphisms, "morphism", second)?;
        let h = index_of(&self.morphisms, "morphism", result)?;
        let mut comp = self.comp.clone();
        comp[f * self.morphisms.len() + g] = Some(h);
        Ok(Self::assemble(
            self.objects.clone(),
            self.morphisms.clone(),
            self.ends.clone(),
            self.identity.clone(),
            comp,
        ))
    }

    /// Disjoint union; ids are prefixed with `left`/`right`.
    pub fn coproduct(&self, other: &FiniteCategory, left: &str, right: &str) -> Result<Self> {
        let tag = |p: &str, s: &String| format!("{p}{s}");
        let mut objects = Vec::new();
        let mut morphisms = Vec::new();
        let mut identities = Vec::new();
        let mut composition = Vec::new();
        for (c, p) in [(self, left), (other, right)] {
            objects.extend(c.objects.iter().map(|o| tag(p, o)));
            for (m, id) in c.morphisms.iter().enumerate() {
                morphisms.push((tag(p, id), tag(p, &c.objects[c.ends[m][0]]), tag(p, &c.objects[c.ends[m][1]])));
            }
            for (o, &m) in c.identity.iter().enumerate() {
                identities.push((tag(p, &c.objects[o]), tag(p, &c.morphisms[m])));
            }
            for (f, g, h) in c.composition_triples() {
                composition.push((tag(p, &c.morphisms[f]), tag(p, &c.morphisms[g]), tag(p, &c.morphisms[h])));
            }
        }
        FiniteCategory::new(objects, morphisms, identities, composition)
    }
}

impl Instance for FiniteCategory {
    const KIND: &'static str = "category";
    const MAP_KIND: &'static str = "functor";
    const FACES_ONLY: bool = false;

    fn sorts(&self) -> usize {
        2
    }

    fn ids(&self, sort: usize) -> &[String] {
        match sort {
            0 => &self.objects,
            1 => &self.morphisms,
            _ => &[],
        }
    }

    fn faces(&self, sort: usize, idx: usize) -> &[usize] {
        if sort == 1 {
            &self.ends[idx]
        } else {
            &[]
        }
    }

    fn extra_check(&self, cod: &Self, parts: &[Vec<usize>], sort: usize, idx: usize) -> bool {
        if sort != 1 {
            return true;
        }
        let img = &parts[1];
        if let Some(o) = self.identity_of[idx] {
            if img[idx] != cod.identity[parts[0][o]] {
                return false;
            }
        }
        self.comp_by_max[idx]
            .iter()
            .all(|&(f, g, h)| cod.compose(img[f], img[g]) == Some(img[h]))
    }
}

/// Lists every broken category law; empty means `c` is a category.
pub fn validate_category(c: &FiniteCategory) -> Vec<CategoryViolation> {
    let name = |m: usize| c.morphisms[m].clone();
    let n = c.morphisms.len();
    let mut out = BTreeSet::new();
    for (o, &m) in c.identity.iter().enumerate() {
        if c.ends[m] != [o, o] {
            out.insert(CategoryViolation::IdentityNotEndo {
                object: c.objects[o].clone(),
                morphism: name(m),
            });
        }
    }
    for f in 0..n {
        for g in 0..n {
            let composable = c.ends[f][1] == c.ends[g][0];
            match (composable, c.compose(f, g)) {
                (true, None) => {
                    out.insert(CategoryViolation::MissingComposite {
                        first: name(f),
                        second: name(g),
                    });
                }
                (false, Some(_)) => {
                    out.insert(CategoryViolation::NotComposable {
                        first: name(f),
                        second: name(g),
                    });
                }
                (true, Some(h)) if c.ends[h] != [c.ends[f][0], c.ends[g][1]] => {
                    out.insert(CategoryViolation::CompositeEnds {
                        first: name(f),
                        second: name(g),
                        result: name(h),
                    });
                }
                _ => {}
            }
        }
    }
    for m in 0..n {
        let [a, b] = c.ends[m];
        if c.compose(c.identity[a], m) != Some(m) {
            out.insert(CategoryViolation::LeftUnit { morphism: name(m) });
        }
        if c.compose(m, c.identity[b]) != Some(m) {
            out.insert(CategoryViolation::RightUnit { morphism: name(m) });
        }
    }
    for f in 0..n {
        for g in 0..n {
            let Some(fg) = c.compose(f, g) else { continue };
            for h in 0..n {
                let Some(gh) = c.compose(g, h) else { continue };
                let left = c.compose(fg, h);
                let right = c.compose(f, gh);
                if left.is_some() && right.is_some() && left != right {
                    out.insert(CategoryViolation::Associativity {
                        first: name(f),
                        second: name(g),
                        third: name(h),
                    });
                }
            }
        }
    }
    out.into_iter().collect()
}

/// `U(C)`: objects as nodes, every morphism (identities included) as an edge.
pub fn underlying_graph(c: &FiniteCategory) -> FiniteGraph {
    FiniteGraph::from_sorted(c.objects.clone(), c.morphisms.clone(), c.ends.clone())
}

/// Path components of the objects under the zigzag closure of morphisms.
pub fn pi0_cat(c: &FiniteCategory) -> Partition {
    components(&c.objects, c.ends.iter().map(|[a, b]| (*a, *b)))
}
