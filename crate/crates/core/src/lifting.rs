//! Lifting problems, filler enumeration and right lifting property checks.

use std::ops::ControlFlow;
use std::sync::Arc;

use serde::Serialize;

use crate::category::FiniteCategory;
use crate::error::{Error, Result};
use crate::graph::FiniteGraph;
use crate::instance::{Arrow, Hom, HomSearch, Instance};
use crate::par::Exec;

/// Which filler to pick when several exist.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Choice {
    #[default]
    First,
    Last,
}

/// A commuting square `left: A -> B`, `right: X -> Y`, `top: A -> X`, `bottom: B -> Y`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Square<C> {
    pub left: Arrow<C>,
    pub right: Arrow<C>,
    pub top: Hom,
    pub bottom: Hom,
}

impl<C: Instance> Square<C> {
    pub fn new(left: Arrow<C>, right: Arrow<C>, top: Hom, bottom: Hom) -> Result<Self> {
        if let Some(v) = top.map_violation(&*left.dom, &*right.dom) {
            return Err(Error::NotAMap(format!("top: {v}")));
        }
        if let Some(v) = bottom.map_violation(&*left.cod, &*right.cod) {
            return Err(Error::NotAMap(format!("bottom: {v}")));
        }
        if left.hom.then(&bottom) != top.then(&right.hom) {
            return Err(Error::NotAMap("square does not commute".into()));
        }
        Ok(Square { left, right, top, bottom })
    }

    pub(crate) fn new_unchecked(left: Arrow<C>, right: Arrow<C>, top: Hom, bottom: Hom) -> Self {
        Square { left, right, top, bottom }
    }

    /// Search space of diagonals `d: B -> X` with `d ∘ left = top` and `right ∘ d = bottom`.
    pub fn search(&self) -> HomSearch<'_, C> {
        HomSearch::new(&*self.left.cod, &*self.right.dom)
            .extending(&self.left.hom, &self.top)
            .over(&self.right.hom, &self.bottom)
    }

    pub fn is_filler(&self, d: &Hom) -> bool {
        d.is_map(&*self.left.cod, &*self.right.dom)
            && self.left.hom.then(d) == self.top
            && d.then(&self.right.hom) == self.bottom
    }

    pub fn filler(&self, choice: Choice) -> Option<Hom> {
        match choice {
            Choice::First => self.search().first(),
            Choice::Last => self.search().reversed().first(),
        }
    }
}

/// All fillers of `s` in lexicographic order, truncated at `limit`.
pub fn enumerate_fillers<C: Instance>(s: &Square<C>, limit: Option<usize>) -> Vec<Hom> {
    s.search().collect(limit)
}

/// Visits every commuting square with left leg `j` and right leg `f`:
/// tops in lexicographic order, then bottoms extending each top.
pub fn for_each_square<C: Instance>(
    j: &Arrow<C>,
    f: &Arrow<C>,
    mut visit: impl FnMut(&Hom, &Hom) -> ControlFlow<()>,
) -> bool {
    HomSearch::new(&*j.dom, &*f.dom).for_each(|a| bottoms_for(j, f, a, |b| visit(a, b)))
}

/// Tops `A -> X` of squares from `j` to `f`.
pub fn tops<C: Instance>(j: &Arrow<C>, f: &Arrow<C>) -> Vec<Hom> {
    HomSearch::new(&*j.dom, &*f.dom).collect(None)
}

fn bottoms_for<C: Instance>(
    j: &Arrow<C>,
    f: &Arrow<C>,
    a: &Hom,
    mut visit: impl FnMut(&Hom) -> ControlFlow<()>,
) -> ControlFlow<()> {
    let fa = a.then(&f.hom);
    if HomSearch::new(&*j.cod, &*f.cod).extending(&j.hom, &fa).for_each(&mut visit) {
        ControlFlow::Break(())
    } else {
        ControlFlow::Continue(())
    }
}

/// All `(top, bottom)` pairs of squares from `j` to `f`, in canonical order.
pub fn squares<C: Instance>(j: &Arrow<C>, f: &Arrow<C>) -> Vec<(Hom, Hom)> {
    let mut out = Vec::new();
    for_each_square(j, f, |a, b| {
        out.push((a.clone(), b.clone()));
        ControlFlow::Continue(())
    });
    out
}

/// Outcome of a right lifting property check.
#[derive(Clone, Debug)]
pub struct RlpOutcome<C> {
    pub holds: bool,
    /// Squares examined, up to and including the witness when the property fails.
    pub squares_checked: usize,
    /// Index into the generator list and the first unsolvable square.
    pub witness: Option<(usize, Square<C>)>,
}

/// Per-top result: squares seen and the first unsolvable bottom.
fn scan_top<C: Instance>(j: &Arrow<C>, f: &Arrow<C>, a: &Hom) -> (usize, Option<Hom>) {
    let mut seen = 0;
    let mut bad = None;
    let _ = bottoms_for(j, f, a, |b| {
        seen += 1;
        let solvable = HomSearch::new(&*j.cod, &*f.dom)
            .extending(&j.hom, a)
            .over(&f.hom, b)
            .exists();
        if solvable {
            ControlFlow::Continue(())
        } else {
            bad = Some(b.clone());
            ControlFlow::Break(())
        }
    });
    (seen, bad)
}

/// Whether `f` has the right lifting property against every map in `gens`.
/// The witness is the first unsolvable square in canonical order.
pub fn has_rlp<C: Instance>(f: &Arrow<C>, gens: &[Arrow<C>], exec: Exec) -> RlpOutcome<C> {
    let mut checked = 0;
    for (g, j) in gens.iter().enumerate() {
        let ts = tops(j, f);
        let results = exec.map(&ts, |a| scan_top(j, f, a));
        for (a, (seen, bad)) in ts.into_iter().zip(results) {
            checked += seen;
            if let Some(b) = bad {
                return RlpOutcome {
                    holds: false,
                    squares_checked: checked,
                    witness: Some((g, Square::new_unchecked(j.clone(), f.clone(), a, b))),
                };
            }
        }
    }
    RlpOutcome {
        holds: true,
        squares_checked: checked,
        witness: None,
    }
}

pub fn is_j_fibration<C: Instance>(f: &Arrow<C>, gens: &[Arrow<C>], exec: Exec) -> bool {
    has_rlp(f, gens, exec).holds
}

/// Left lifting property of `j` against each right leg; the dual of [`has_rlp`].
pub fn has_llp<C: Instance>(j: &Arrow<C>, rights: &[Arrow<C>], exec: Exec) -> RlpOutcome<C> {
    let mut checked = 0;
    for (g, f) in rights.iter().enumerate() {
        let out = has_rlp(f, std::slice::from_ref(j), exec);
        checked += out.squares_checked;
        if let Some((_, sq)) = out.witness {
            return RlpOutcome {
                holds: false,
                squares_checked: checked,
                witness: Some((g, sq)),
            };
        }
    }
    RlpOutcome {
        holds: true,
        squares_checked: checked,
        witness: None,
    }
}

/// Why a functor fails to be full and surjective on objects.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "reason", rename_all = "snake_case")]
pub enum TrivialFibrationFailure {
    MissedObject { object: String },
    NotFull { source: String, target: String, morphism: String },
}

/// Full and surjective on objects, with the first failure.
pub fn trivial_fibration_cat_witness(f: &Arrow<FiniteCategory>) -> Option<TrivialFibrationFailure> {
    let (x, y) = (&*f.dom, &*f.cod);
    let objs = f.hom.part(0);
    for z in 0..y.objects().len() {
        if !objs.contains(&z) {
            return Some(TrivialFibrationFailure::MissedObject {
                object: y.objects()[z].clone(),
            });
        }
    }
    let mors = f.hom.part(1);
    for a in 0..x.objects().len() {
        for b in 0..x.objects().len() {
            let hit: Vec<usize> = x.hom(a, b).into_iter().map(|m| mors[m]).collect();
            for m in y.hom(objs[a], objs[b]) {
                if !hit.contains(&m) {
                    return Some(TrivialFibrationFailure::NotFull {
                        source: x.objects()[a].clone(),
                        target: x.objects()[b].clone(),
                        morphism: y.morphisms()[m].clone(),
                    });
                }
            }
        }
    }
    None
}

pub fn is_trivial_fibration_cat(f: &Arrow<FiniteCategory>) -> bool {
    trivial_fibration_cat_witness(f).is_none()
}

fn functor(dom: FiniteCategory, cod: FiniteCategory, objects: &[&str], morphisms: &[&str]) -> Arrow<FiniteCategory> {
    let parts = vec![
        objects.iter().map(|o| cod.object_index(o).expect("object")).collect(),
        morphisms.iter().map(|m| cod.morphism_index(m).expect("morphism")).collect(),
    ];
    Arrow::new(Arc::new(dom), Arc::new(cod), Hom::from_parts(parts)).expect("valid functor")
}

/// The generating cofibrations of Cat: `∅ -> •` and `(• •) -> (• -> •)`.
pub fn j_cat() -> Vec<Arrow<FiniteCategory>> {
    vec![
        functor(FiniteCategory::empty(), FiniteCategory::terminal(), &[], &[]),
        functor(FiniteCategory::discrete(2), FiniteCategory::arrow(), &["0", "1"], &["1_0", "1_1"]),
    ]
}

fn graph_map(dom: FiniteGraph, cod: FiniteGraph, nodes: &[&str], edges: &[&str]) -> Arrow<FiniteGraph> {
    let parts = vec![
        nodes.iter().map(|n| cod.node_index(n).expect("node")).collect(),
        edges.iter().map(|e| cod.edge_index(e).expect("edge")).collect(),
    ];
    Arrow::new(Arc::new(dom), Arc::new(cod), Hom::from_parts(parts)).expect("valid graph map")
}

/// `∅ -> •` in graphs.
pub fn j_point() -> Arrow<FiniteGraph> {
    graph_map(FiniteGraph::empty(), FiniteGraph::point(), &[], &[])
}

/// `(• •) -> (• -> •)` in graphs.
pub fn j_edge() -> Arrow<FiniteGraph> {
    let edge = FiniteGraph::new(["0", "1"], [("e", "0", "1")]).expect("valid");
    graph_map(FiniteGraph::discrete(2), edge, &["0", "1"], &[])
}

/// The codiagonal `• ⊔ • -> •`.
pub fn codiagonal() -> Arrow<FiniteGraph> {
    graph_map(FiniteGraph::discrete(2), FiniteGraph::point(), &["*", "*"], &[])
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EdgeFreeVerdict {
    pub holds: bool,
    pub unhit_node: Option<String>,
}

/// Exact decision of the lifting property against all monos for maps into
/// an edge-free graph. `None` when the codomain has edges.
///
/// A square over such `f` has edge-free `B` (it maps to the codomain), hence
/// edge-free `A` and `X`; the problem is lifting an injection of sets against
/// the node function of `f`, solvable for every injection iff that function is
/// surjective.
pub fn edge_free_rlp_against_monos(f: &Arrow<FiniteGraph>) -> Option<EdgeFreeVerdict> {
    if !f.cod.edges().is_empty() {
        return None;
    }
    let hit = f.hom.part(0);
    let unhit = (0..f.cod.nodes().len()).find(|y| !hit.contains(y));
    Some(EdgeFreeVerdict {
        holds: unhit.is_none(),
        unhit_node: unhit.map(|y| f.cod.nodes()[y].clone()),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::homs;
    use crate::ssset::{horn, pad_arrow, standard_simplex, to_terminal};

    fn g(nodes: &[&str], edges: &[(&str, &str, &str)]) -> FiniteGraph {
        FiniteGraph::new(nodes.to_vec(), edges.to_vec()).unwrap()
    }

    /// Brute-force filler oracle: all maps `B -> X` filtered by both equations.
    fn oracle_fillers<C: Instance>(s: &Square<C>) -> Vec<Hom> {
        homs(&*s.left.cod, &*s.right.dom, None).into_iter().filter(|d| s.is_filler(d)).collect()
    }

    #[test]
    fn identity_left_leg_has_one_filler() {
        let x = Arc::new(g(&["u", "v"], &[("e", "u", "v")]));
        let y = Arc::new(FiniteGraph::terminal());
        let f = Arrow::new(x.clone(), y.clone(), Hom::from_parts(vec![vec![0, 0], vec![0]])).unwrap();
        let a = Arc::new(g(&["p", "q"], &[("k", "p", "q")]));
        let i = Arrow::identity(a.clone());
        for top in homs(&*a, &*x, None) {
            let bottom = top.then(&f.hom);
            let s = Square::new(i.clone(), f.clone(), top.clone(), bottom).unwrap();
            assert_eq!(enumerate_fillers(&s, None), vec![top]);
        }
    }

    #[test]
    fn point_fillers_are_nodes() {
        let x = Arc::new(g(&["a", "b", "c"], &[("e", "a", "b")]));
        let y = Arc::new(FiniteGraph::point());
        let f = Arrow::new(x.clone(), y.clone(), Hom::from_parts(vec![vec![0; 3], vec![]]));
        // the edge has nowhere to go
        assert!(f.is_err());
        let x = Arc::new(g(&["a", "b", "c"], &[]));
        let f = Arrow::new(x.clone(), y, Hom::from_parts(vec![vec![0; 3], vec![]])).unwrap();
        let j = j_point();
        let s = Square::new(j, f, Hom::from_parts(vec![vec![], vec![]]), Hom::from_parts(vec![vec![0], vec![]])).unwrap();
        let fillers = enumerate_fillers(&s, None);
        assert_eq!(fillers.len(), 3);
        assert_eq!(fillers, oracle_fillers(&s));
        assert_eq!(s.filler(Choice::Last), Some(Hom::from_parts(vec![vec![2], vec![]])));
        assert_eq!(enumerate_fillers(&s, Some(2)).len(), 2);
    }

    #[test]
    fn iso_right_leg_forces_inverse() {
        let x = Arc::new(g(&["a", "b"], &[("e", "a", "b")]));
        let y = Arc::new(g(&["p", "q"], &[("k", "p", "q")]));
        let f = Arrow::new(x, y, Hom::from_parts(vec![vec![0, 1], vec![0]])).unwrap();
        let j = j_edge();
        for (a, b) in squares(&j, &f) {
            let s = Square::new(j.clone(), f.clone(), a, b.clone()).unwrap();
            let inv = f.inverse().unwrap();
            assert_eq!(enumerate_fillers(&s, None), vec![b.then(&inv.hom)]);
        }
    }

    #[test]
    fn square_validation() {
        let f = codiagonal();
        let j = j_point();
        let bad_bottom = Hom::from_parts(vec![vec![5], vec![]]);
        assert!(Square::new(j.clone(), f.clone(), Hom::from_parts(vec![vec![], vec![]]), bad_bottom).is_err());
    }

    #[test]
    fn rlp_examples() {
        let f = codiagonal();
        assert!(has_rlp(&Arrow::identity(f.dom.clone()), &[j_point(), j_edge()], Exec::Sequential).holds);
        assert!(has_rlp(&f, &[j_point()], Exec::Sequential).holds);
        // no graph map (• -> •) -> •, so no squares at all
        let out = has_rlp(&f, &[j_edge()], Exec::Sequential);
        assert!(out.holds);
        // node without edges over a node with a loop: surjective on nodes
        let loopless = Arc::new(FiniteGraph::point());
        let looped = Arc::new(FiniteGraph::terminal());
        let h = Arrow::new(loopless, looped, Hom::from_parts(vec![vec![0], vec![]])).unwrap();
        assert!(has_rlp(&h, &[j_point()], Exec::Sequential).holds);
        let out = has_rlp(&h, &[j_edge()], Exec::Sequential);
        assert!(!out.holds);
        let (gi, sq) = out.witness.unwrap();
        assert_eq!(gi, 0);
        assert!(enumerate_fillers(&sq, None).is_empty());
        assert_eq!(out.squares_checked, 1);
    }

    #[test]
    fn parallel_and_sequential_agree() {
        let x = Arc::new(g(&["a", "b", "c"], &[("e", "a", "b"), ("k", "b", "c")]));
        let y = Arc::new(g(&["p", "q"], &[("l", "p", "q"), ("m", "q", "q")]));
        for hom in homs(&*x, &*y, None) {
            let f = Arrow::new(x.clone(), y.clone(), hom).unwrap();
            let s = has_rlp(&f, &[j_point(), j_edge()], Exec::Sequential);
            let p = has_rlp(&f, &[j_point(), j_edge()], Exec::Parallel);
            assert_eq!((s.holds, s.squares_checked), (p.holds, p.squares_checked));
            assert_eq!(s.witness.map(|w| (w.0, w.1.top, w.1.bottom)), p.witness.map(|w| (w.0, w.1.top, w.1.bottom)));
        }
    }

    #[test]
    fn horn_fibrations() {
        let j = pad_arrow(&horn(2, 1).unwrap(), 2);
        let d2 = Arc::new(standard_simplex(2).unwrap());
        assert!(is_j_fibration(&to_terminal(&d2), &[j.clone()], Exec::Sequential));
        let out = has_rlp(&to_terminal(&j.dom), &[j.clone()], Exec::Sequential);
        assert!(!out.holds);
        let (_, sq) = out.witness.unwrap();
        assert!(enumerate_fillers(&sq, None).is_empty());
    }

    #[test]
    fn trivial_fibrations_in_cat() {
        let arrow = Arc::new(FiniteCategory::arrow());
        assert!(is_trivial_fibration_cat(&Arrow::identity(arrow.clone())));
        let incl = functor(FiniteCategory::terminal(), FiniteCategory::arrow(), &["0"], &["1_0"]);
        assert_eq!(
            trivial_fibration_cat_witness(&incl),
            Some(TrivialFibrationFailure::MissedObject { object: "1".into() })
        );
        // codiagonal of discrete categories: Hom(0, 1) is empty but 1_* must be lifted
        let codiag = functor(FiniteCategory::discrete(2), FiniteCategory::terminal(), &["*", "*"], &["1_*", "1_*"]);
        assert!(matches!(
            trivial_fibration_cat_witness(&codiag),
            Some(TrivialFibrationFailure::NotFull { .. })
        ));
        let out = has_rlp(&codiag, &j_cat(), Exec::Sequential);
        assert!(!out.holds);
        assert_eq!(out.witness.unwrap().0, 1);
        let not_full = functor(FiniteCategory::discrete(2), FiniteCategory::arrow(), &["0", "1"], &["1_0", "1_1"]);
        assert!(matches!(
            trivial_fibration_cat_witness(&not_full),
            Some(TrivialFibrationFailure::NotFull { .. })
        ));
        assert!(!has_rlp(&not_full, &j_cat(), Exec::Sequential).holds);
    }

    #[test]
    fn edge_free_shortcut() {
        assert_eq!(
            edge_free_rlp_against_monos(&codiagonal()),
            Some(EdgeFreeVerdict { holds: true, unhit_node: None })
        );
        let miss = graph_map(FiniteGraph::point(), FiniteGraph::discrete(2), &["0"], &[]);
        assert_eq!(edge_free_rlp_against_monos(&miss).map(|v| v.holds), Some(false));
        assert!(edge_free_rlp_against_monos(&j_edge()).is_none());
    }

    #[test]
    fn retracts_inherit_rlp() {
        // f is a retract of f ⊔ f via the coprojection and the codiagonal
        let x = Arc::new(g(&["a", "b"], &[("e", "a", "b")]));
        let y = Arc::new(g(&["p"], &[("l", "p", "p")]));
        let f = Arrow::new(x.clone(), y.clone(), Hom::from_parts(vec![vec![0, 0], vec![0]])).unwrap();
        let xx = Arc::new(x.coproduct(&x, "l", "r").unwrap());
        let yy = Arc::new(y.coproduct(&y, "l", "r").unwrap());
        let gg = Arrow::new(xx.clone(), yy.clone(), Hom::from_parts(vec![vec![0, 0, 1, 1], vec![0, 1]])).unwrap();
        let gens = [j_point(), j_edge()];
        let rg = has_rlp(&gg, &gens, Exec::Sequential).holds;
        let rf = has_rlp(&f, &gens, Exec::Sequential).holds;
        assert!(!rg || rf);
        assert_eq!(rg, rf);
    }
}
