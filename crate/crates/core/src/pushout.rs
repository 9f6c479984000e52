//! Pushouts in the presheaf-like instance categories (graphs and
//! semi-simplicial sets), computed sort by sort as set-level pushouts.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use petgraph::unionfind::UnionFind;

use crate::error::{Error, Result};
use crate::graph::FiniteGraph;
use crate::instance::{Arrow, Hom, HomSearch, Instance};
use crate::ssset::SemiSimplicialSet;

/// Instances whose objects are determined by sorted ids and faces alone.
pub trait Presheaf: Instance {
    /// `ids[s]` must be sorted and `faces[s][i]` index into `ids[s - 1]`.
    fn from_sorted_parts(ids: Vec<Vec<String>>, faces: Vec<Vec<Vec<usize>>>) -> Self;
}

impl Presheaf for FiniteGraph {
    fn from_sorted_parts(mut ids: Vec<Vec<String>>, faces: Vec<Vec<Vec<usize>>>) -> Self {
        let edges = ids.pop().unwrap_or_default();
        let nodes = ids.pop().unwrap_or_default();
        let ends = faces
            .get(1)
            .map(|l| l.iter().map(|f| [f[0], f[1]]).collect())
            .unwrap_or_default();
        FiniteGraph::from_sorted(nodes, edges, ends)
    }
}

impl Presheaf for SemiSimplicialSet {
    fn from_sorted_parts(ids: Vec<Vec<String>>, mut faces: Vec<Vec<Vec<usize>>>) -> Self {
        if faces.is_empty() {
            faces.push(Vec::new());
        }
        faces[0] = Vec::new();
        SemiSimplicialSet::from_sorted(ids, faces)
    }
}

/// One cell to attach: a left leg `j: A -> B`, an attaching map `A -> X`,
/// and the prefix naming the new elements coming from `B`.
#[derive(Clone, Debug)]
pub struct Attachment<'a, C> {
    pub left: &'a Arrow<C>,
    pub attach: &'a Hom,
    pub prefix: String,
}

/// The result of attaching cells to `X`.
#[derive(Clone, Debug)]
pub struct Attached<C> {
    pub object: Arc<C>,
    /// `X -> P`
    pub from_base: Hom,
    /// `B_k -> P`, one per attachment.
    pub from_cells: Vec<Hom>,
}

/// Pushout of the coproduct of all left legs along the induced map into `base`.
///
/// Elements of `base` keep their ids; an element of some `B_k` not identified
/// with anything in `base` is named `prefix_k + id`. A class identifying
/// several base elements is named by the least of them.
pub fn attach_cells<C: Presheaf>(base: &C, cells: &[Attachment<'_, C>]) -> Result<Attached<C>> {
    let sorts = base.sorts().max(cells.iter().map(|c| c.left.cod.sorts()).max().unwrap_or(0));
    // per sort: base elements first, then each B_k in order
    let mut offsets: Vec<Vec<usize>> = Vec::with_capacity(sorts);
    let mut totals = Vec::with_capacity(sorts);
    for s in 0..sorts {
        let mut off = Vec::with_capacity(cells.len());
        let mut n = base.len(s);
        for c in cells {
            off.push(n);
            n += c.left.cod.len(s);
        }
        offsets.push(off);
        totals.push(n);
    }

    let mut classes = Vec::with_capacity(sorts);
    for s in 0..sorts {
        let mut uf = UnionFind::<usize>::new(totals[s]);
        for (k, c) in cells.iter().enumerate() {
            for (a, &b) in c.left.hom.part(s).iter().enumerate() {
                uf.union(offsets[s][k] + b, c.attach.image(s, a));
            }
        }
        classes.push(uf);
    }

    let mut ids: Vec<Vec<String>> = Vec::with_capacity(sorts);
    let mut class_index: Vec<BTreeMap<usize, usize>> = Vec::with_capacity(sorts);
    for s in 0..sorts {
        let uf = &classes[s];
        // representative -> (name, has_base)
        let mut names: BTreeMap<usize, (String, bool)> = BTreeMap::new();
        for x in 0..base.len(s) {
            let r = uf.find(x);
            let id = &base.ids(s)[x];
            names
                .entry(r)
                .and_modify(|(n, _)| {
                    if id < n {
                        *n = id.clone();
                    }
                })
                .or_insert((id.clone(), true));
        }
        for (k, c) in cells.iter().enumerate() {
            for (b, id) in c.left.cod.ids(s).iter().enumerate() {
                let r = uf.find(offsets[s][k] + b);
                let candidate = format!("{}{}", c.prefix, id);
                match names.get_mut(&r) {
                    Some((_, true)) => {}
                    Some((n, false)) => {
                        if candidate < *n {
                            *n = candidate;
                        }
                    }
                    None => {
                        names.insert(r, (candidate, false));
                    }
                }
            }
        }
        let mut seen = BTreeSet::new();
        for (n, _) in names.values() {
            if !seen.insert(n.clone()) {
                return Err(Error::DuplicateId {
                    what: format!("sort {s} element of the pushout"),
                    id: n.clone(),
                });
            }
        }
        let sorted: Vec<String> = seen.into_iter().collect();
        let idx: BTreeMap<usize, usize> = names
            .iter()
            .map(|(&r, (n, _))| (r, sorted.binary_search(n).expect("present")))
            .collect();
        ids.push(sorted);
        class_index.push(idx);
    }

    let locate = |s: usize, x: usize| class_index[s][&classes[s].find(x)];

    let mut faces: Vec<Vec<Vec<usize>>> = vec![Vec::new(); sorts];
    for s in 1..sorts {
        let mut level: Vec<Option<Vec<usize>>> = vec![None; ids[s].len()];
        for x in 0..base.len(s) {
            let p = locate(s, x);
            level[p].get_or_insert_with(|| base.faces(s, x).iter().map(|&f| locate(s - 1, f)).collect());
        }
        for (k, c) in cells.iter().enumerate() {
            for b in 0..c.left.cod.len(s) {
                let p = locate(s, offsets[s][k] + b);
                level[p].get_or_insert_with(|| {
                    c.left
                        .cod
                        .faces(s, b)
                        .iter()
                        .map(|&f| locate(s - 1, offsets[s - 1][k] + f))
                        .collect()
                });
            }
        }
        faces[s] = level.into_iter().map(|f| f.expect("every class has a member")).collect();
    }

    let from_base = Hom::from_parts((0..base.sorts()).map(|s| (0..base.len(s)).map(|x| locate(s, x)).collect()).collect());
    let from_cells = cells
        .iter()
        .enumerate()
        .map(|(k, c)| {
            Hom::from_parts(
                (0..c.left.cod.sorts())
                    .map(|s| (0..c.left.cod.len(s)).map(|b| locate(s, offsets[s][k] + b)).collect())
                    .collect(),
            )
        })
        .collect();
    Ok(Attached {
        object: Arc::new(C::from_sorted_parts(ids, faces)),
        from_base,
        from_cells,
    })
}

/// A pushout square `B -> P <- X` of a span `B <-i- A -a-> X`.
#[derive(Clone, Debug)]
pub struct Pushout<C> {
    pub object: Arc<C>,
    pub from_left: Hom,
    pub from_right: Hom,
    left: Arrow<C>,
    right: Arrow<C>,
}

/// Pushout of `i: A -> B` along `a: A -> X`. Elements of `X` keep their ids;
/// new elements from `B` keep theirs, primed until they do not clash.
pub fn pushout<C: Presheaf>(i: &Arrow<C>, a: &Arrow<C>) -> Result<Pushout<C>> {
    let taken: BTreeSet<&String> = (0..a.cod.sorts()).flat_map(|s| a.cod.ids(s)).collect();
    let mut prefix = String::new();
    while (0..i.cod.sorts()).any(|s| i.cod.ids(s).iter().any(|id| taken.contains(&format!("{prefix}{id}")))) {
        prefix.push('\'');
    }
    let att = attach_cells(
        &*a.cod,
        &[Attachment {
            left: i,
            attach: &a.hom,
            prefix,
        }],
    )?;
    Ok(Pushout {
        object: att.object,
        from_left: att.from_cells.into_iter().next().expect("one cell"),
        from_right: att.from_base,
        left: i.clone(),
        right: a.clone(),
    })
}

impl<C: Presheaf> Pushout<C> {
    /// Whether `to_w_from_b: B -> W` and `to_w_from_x: X -> W` form a cocone.
    pub fn is_cocone(&self, from_b: &Hom, from_x: &Hom) -> bool {
        self.left.hom.then(from_b) == self.right.hom.then(from_x)
    }

    /// The map `P -> W` induced by a cocone, if the cocone is compatible.
    pub fn induced(&self, w: &C, from_b: &Hom, from_x: &Hom) -> Option<Hom> {
        if !self.is_cocone(from_b, from_x) {
            return None;
        }
        let p = &*self.object;
        let mut parts: Vec<Vec<Option<usize>>> = (0..p.sorts()).map(|s| vec![None; p.len(s)]).collect();
        for (leg, cone) in [(&self.from_left, from_b), (&self.from_right, from_x)] {
            for (s, part) in leg.parts().iter().enumerate() {
                for (e, &q) in part.iter().enumerate() {
                    let v = cone.image(s, e);
                    match parts[s][q] {
                        Some(u) if u != v => return None,
                        _ => parts[s][q] = Some(v),
                    }
                }
            }
        }
        let hom = Hom::from_parts(
            parts
                .into_iter()
                .map(|l| l.into_iter().collect::<Option<Vec<_>>>())
                .collect::<Option<Vec<_>>>()?,
        );
        hom.is_map(p, w).then_some(hom)
    }

    /// Number of maps `P -> W` factoring the cocone, found by exhaustive search.
    pub fn mediator_count(&self, w: &C, from_b: &Hom, from_x: &Hom) -> usize {
        HomSearch::new(&*self.object, w)
            .extending(&self.from_left, from_b)
            .extending(&self.from_right, from_x)
            .count()
    }

    pub fn left_coprojection(&self) -> Arrow<C> {
        Arrow::new_unchecked(self.left.cod.clone(), self.object.clone(), self.from_left.clone())
    }

    pub fn right_coprojection(&self) -> Arrow<C> {
        Arrow::new_unchecked(self.right.cod.clone(), self.object.clone(), self.from_right.clone())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::homs;
    use crate::ssset::{horn, pad_arrow};

    fn g(nodes: &[&str], edges: &[(&str, &str, &str)]) -> Arc<FiniteGraph> {
        Arc::new(FiniteGraph::new(nodes.to_vec(), edges.to_vec()).unwrap())
    }

    fn arrow(dom: &Arc<FiniteGraph>, cod: &Arc<FiniteGraph>, nodes: &[&str], edges: &[&str]) -> Arrow<FiniteGraph> {
        let parts = vec![
            nodes.iter().map(|n| cod.node_index(n).unwrap()).collect(),
            edges.iter().map(|e| cod.edge_index(e).unwrap()).collect(),
        ];
        Arrow::new(dom.clone(), cod.clone(), Hom::from_parts(parts)).unwrap()
    }

    /// Set-level pushout oracle: quotient of the disjoint union by the generated relation.
    fn oracle_sizes(i: &Arrow<FiniteGraph>, a: &Arrow<FiniteGraph>) -> (usize, usize) {
        let mut sizes = [0; 2];
        for s in 0..2 {
            let nb = i.cod.len(s);
            let nx = a.cod.len(s);
            let mut label: Vec<usize> = (0..nb + nx).collect();
            loop {
                let mut changed = false;
                for e in 0..i.dom.len(s) {
                    let (p, q) = (i.hom.image(s, e), nb + a.hom.image(s, e));
                    let (lo, hi) = (label[p].min(label[q]), label[p].max(label[q]));
                    if lo != hi {
                        for l in label.iter_mut().filter(|l| **l == hi) {
                            *l = lo;
                        }
                        changed = true;
                    }
                }
                if !changed {
                    break;
                }
            }
            let distinct: BTreeSet<usize> = label.into_iter().collect();
            sizes[s] = distinct.len();
        }
        (sizes[0], sizes[1])
    }

    #[test]
    fn pushout_of_identity_is_the_target() {
        let x = g(&["u", "v"], &[("e", "u", "v")]);
        let a = g(&["p"], &[]);
        let i = Arrow::identity(a.clone());
        let at = arrow(&a, &x, &["u"], &[]);
        let p = pushout(&i, &at).unwrap();
        assert_eq!(*p.object, *x);
        assert_eq!(p.from_right, Hom::identity(&*x));
    }

    #[test]
    fn coproduct_case() {
        let x = g(&["u", "v"], &[("e", "u", "v")]);
        let empty = Arc::new(FiniteGraph::empty());
        let point = Arc::new(FiniteGraph::point());
        let i = arrow(&empty, &point, &[], &[]);
        let a = arrow(&empty, &x, &[], &[]);
        let p = pushout(&i, &a).unwrap();
        assert_eq!(p.object.nodes(), &["*", "u", "v"]);
        assert_eq!(p.object.edges().len(), 1);
    }

    #[test]
    fn attaching_an_edge() {
        let two = g(&["0", "1"], &[]);
        let edge = g(&["0", "1"], &[("e", "0", "1")]);
        let x = g(&["u", "v", "w"], &[("k", "v", "w")]);
        let i = arrow(&two, &edge, &["0", "1"], &[]);
        let a = arrow(&two, &x, &["u", "v"], &[]);
        let p = pushout(&i, &a).unwrap();
        assert_eq!(p.object.nodes(), x.nodes());
        let triples: Vec<_> = p.object.edge_triples().map(|(e, s, t)| (e.to_string(), s.to_string(), t.to_string())).collect();
        assert_eq!(
            triples,
            vec![("e".into(), "u".into(), "v".into()), ("k".into(), "v".into(), "w".into())]
        );
        assert_eq!(oracle_sizes(&i, &a), (p.object.nodes().len(), p.object.edges().len()));
        assert!(p.left_coprojection().is_mono());
    }

    #[test]
    fn clashing_ids_are_primed() {
        let empty = Arc::new(FiniteGraph::empty());
        let point = Arc::new(FiniteGraph::point());
        let i = arrow(&empty, &point, &[], &[]);
        let a = arrow(&empty, &point, &[], &[]);
        let p = pushout(&i, &a).unwrap();
        assert_eq!(p.object.nodes(), &["'*", "*"]);
    }

    #[test]
    fn universal_property_on_small_cocones() {
        let two = g(&["0", "1"], &[]);
        let edge = g(&["0", "1"], &[("e", "0", "1")]);
        let x = g(&["u", "v"], &[("k", "u", "u")]);
        let i = arrow(&two, &edge, &["0", "1"], &[]);
        let a = arrow(&two, &x, &["u", "u"], &[]);
        let p = pushout(&i, &a).unwrap();
        assert_eq!(oracle_sizes(&i, &a), (p.object.nodes().len(), p.object.edges().len()));
        let w = g(&["s", "t"], &[("x", "s", "s"), ("y", "s", "s"), ("z", "t", "t")]);
        let mut checked = 0;
        for fb in homs(&*edge, &*w, None) {
            for fx in homs(&*x, &*w, None) {
                if !p.is_cocone(&fb, &fx) {
                    assert!(p.induced(&w, &fb, &fx).is_none());
                    continue;
                }
                let u = p.induced(&w, &fb, &fx).expect("cocone induces a map");
                assert_eq!(p.from_left.then(&u), fb);
                assert_eq!(p.from_right.then(&u), fx);
                assert_eq!(p.mediator_count(&w, &fb, &fx), 1);
                checked += 1;
            }
        }
        assert!(checked > 0);
    }

    #[test]
    fn semi_simplicial_pushouts_satisfy_identities() {
        // glue two 2-simplices along the horn Λ^1[2]
        let h = pad_arrow(&horn(2, 1).unwrap(), 2);
        let p = pushout(&h, &h).unwrap();
        assert!(p.object.identity_violations().is_empty());
        assert_eq!((p.object.len(0), p.object.len(1), p.object.len(2)), (3, 4, 2));
    }
}
