//! Instance files: canonical JSON for objects, maps, chosen-extension
//! structures and lifting functions.
//!
//! Output is canonical: object keys sorted, arrays in id order, no
//! whitespace, one trailing newline.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde_json::{json, Map, Value};

use crate::algebra::{LiftingFunction, Problem};
use crate::category::FiniteCategory;
use crate::error::{Error, Result};
use crate::graph::FiniteGraph;
use crate::instance::{Arrow, Hom, Instance};
use crate::jfib::{ExtKey, JFibObject};
use crate::lifting::{j_cat, j_edge, j_point, Square};
use crate::ssset::{boundary, horns_up_to, pad_arrow, SemiSimplicialSet};

fn bad(msg: impl Into<String>) -> Error {
    Error::Malformed(msg.into())
}

fn field<'a>(v: &'a Value, key: &str) -> Result<&'a Value> {
    v.get(key).ok_or_else(|| bad(format!("missing field `{key}`")))
}

fn str_of<'a>(v: &'a Value, what: &str) -> Result<&'a str> {
    v.as_str().ok_or_else(|| bad(format!("{what} must be a string")))
}

fn strings(v: &Value, what: &str) -> Result<Vec<String>> {
    v.as_array()
        .ok_or_else(|| bad(format!("{what} must be an array")))?
        .iter()
        .map(|x| str_of(x, what).map(str::to_string))
        .collect()
}

fn object<'a>(v: &'a Value, what: &str) -> Result<&'a Map<String, Value>> {
    v.as_object().ok_or_else(|| bad(format!("{what} must be an object")))
}

fn check_kind(v: &Value, kind: &str) -> Result<()> {
    let k = str_of(field(v, "kind")?, "kind")?;
    if k != kind {
        return Err(bad(format!("expected kind `{kind}`, found `{k}`")));
    }
    Ok(())
}

/// Compact text with sorted keys and a trailing newline.
pub fn canonical(v: &Value) -> String {
    let mut s = serde_json::to_string(v).expect("values serialise");
    s.push('\n');
    s
}

pub fn parse(text: &str) -> Result<Value> {
    Ok(serde_json::from_str(text)?)
}

/// JSON encoding of one instance category.
pub trait Codec: Instance + Sized {
    /// Keys of the per-sort components of a map, e.g. `node_map`, `edge_map`.
    const MAP_KEYS: &'static [&'static str];

    fn to_value(&self) -> Value;
    fn from_value(v: &Value) -> Result<Self>;

    /// Generating sets that files may refer to by name.
    fn named_generators(name: &str, dim: usize) -> Option<Vec<Arrow<Self>>>;
    const GENERATOR_NAMES: &'static [&'static str];

    fn dim_hint(&self) -> usize {
        0
    }

    fn encode_hom(dom: &Self, cod: &Self, h: &Hom) -> Map<String, Value> {
        Self::MAP_KEYS
            .iter()
            .enumerate()
            .map(|(s, key)| (key.to_string(), sort_map(dom, cod, h, s)))
            .collect()
    }

    fn decode_hom(dom: &Self, cod: &Self, v: &Value) -> Result<Hom> {
        let parts = Self::MAP_KEYS
            .iter()
            .enumerate()
            .map(|(s, key)| read_sort_map(dom, cod, field(v, key)?, s))
            .collect::<Result<Vec<_>>>()?;
        Ok(Hom::from_parts(parts))
    }
}

fn sort_map<C: Instance>(dom: &C, cod: &C, h: &Hom, s: usize) -> Value {
    let m: Map<String, Value> = dom
        .ids(s)
        .iter()
        .enumerate()
        .map(|(i, id)| (id.clone(), Value::String(cod.ids(s)[h.image(s, i)].clone())))
        .collect();
    Value::Object(m)
}

fn read_sort_map<C: Instance>(dom: &C, cod: &C, v: &Value, s: usize) -> Result<Vec<usize>> {
    let m = object(v, "a component map")?;
    if m.len() != dom.len(s) {
        return Err(bad(format!("component map of sort {s} has {} entries for {} elements", m.len(), dom.len(s))));
    }
    dom.ids(s)
        .iter()
        .map(|id| {
            let img = str_of(m.get(id).ok_or_else(|| bad(format!("`{id}` has no image")))?, "an image")?;
            cod.position(s, img).ok_or_else(|| Error::UnknownId {
                what: format!("target element of sort {s}"),
                id: img.to_string(),
            })
        })
        .collect()
}

fn edges_value(ids: &[String], ends: impl Fn(usize) -> (usize, usize), nodes: &[String]) -> Value {
    Value::Array(
        ids.iter()
            .enumerate()
            .map(|(e, id)| {
                let (s, t) = ends(e);
                json!({"id": id, "src": nodes[s], "tgt": nodes[t]})
            })
            .collect(),
    )
}

fn read_edges(v: &Value) -> Result<Vec<(String, String, String)>> {
    v.as_array()
        .ok_or_else(|| bad("edges must be an array"))?
        .iter()
        .map(|e| {
            Ok((
                str_of(field(e, "id")?, "edge id")?.to_string(),
                str_of(field(e, "src")?, "edge src")?.to_string(),
                str_of(field(e, "tgt")?, "edge tgt")?.to_string(),
            ))
        })
        .collect()
}

impl Codec for FiniteGraph {
    const MAP_KEYS: &'static [&'static str] = &["node_map", "edge_map"];
    const GENERATOR_NAMES: &'static [&'static str] = &["point", "point_edge"];

    fn to_value(&self) -> Value {
        json!({
            "kind": "graph",
            "nodes": self.nodes(),
            "edges": edges_value(self.edges(), |e| self.edge_ends(e), self.nodes()),
        })
    }

    fn from_value(v: &Value) -> Result<Self> {
        check_kind(v, "graph")?;
        FiniteGraph::new(strings(field(v, "nodes")?, "nodes")?, read_edges(field(v, "edges")?)?)
    }

    fn named_generators(name: &str, _dim: usize) -> Option<Vec<Arrow<Self>>> {
        match name {
            "point" => Some(vec![j_point()]),
            "point_edge" => Some(vec![j_point(), j_edge()]),
            _ => None,
        }
    }
}

impl Codec for FiniteCategory {
    const MAP_KEYS: &'static [&'static str] = &["object_map", "morphism_map"];
    const GENERATOR_NAMES: &'static [&'static str] = &["cat"];

    fn to_value(&self) -> Value {
        let identities: Map<String, Value> = (0..self.objects().len())
            .map(|o| (self.objects()[o].clone(), Value::String(self.morphisms()[self.identity(o)].clone())))
            .collect();
        let mut comp: Vec<(&String, &String, &String)> = self
            .composition_triples()
            .into_iter()
            .map(|(f, g, h)| (&self.morphisms()[f], &self.morphisms()[g], &self.morphisms()[h]))
            .collect();
        comp.sort();
        json!({
            "kind": "category",
            "nodes": self.objects(),
            "edges": edges_value(self.morphisms(), |m| self.ends(m), self.objects()),
            "identities": identities,
            "composition": comp
                .into_iter()
                .map(|(f, g, h)| json!({"first": f, "second": g, "result": h}))
                .collect::<Vec<_>>(),
        })
    }

    fn from_value(v: &Value) -> Result<Self> {
        check_kind(v, "category")?;
        let identities = object(field(v, "identities")?, "identities")?
            .iter()
            .map(|(o, m)| Ok((o.clone(), str_of(m, "identity")?.to_string())))
            .collect::<Result<Vec<_>>>()?;
        let composition = field(v, "composition")?
            .as_array()
            .ok_or_else(|| bad("composition must be an array"))?
            .iter()
            .map(|c| {
                Ok((
                    str_of(field(c, "first")?, "first")?.to_string(),
                    str_of(field(c, "second")?, "second")?.to_string(),
                    str_of(field(c, "result")?, "result")?.to_string(),
                ))
            })
            .collect::<Result<Vec<_>>>()?;
        FiniteCategory::new(
            strings(field(v, "nodes")?, "nodes")?,
            read_edges(field(v, "edges")?)?,
            identities,
            composition,
        )
    }

    fn named_generators(name: &str, _dim: usize) -> Option<Vec<Arrow<Self>>> {
        (name == "cat").then(j_cat)
    }
}

impl Codec for SemiSimplicialSet {
    const MAP_KEYS: &'static [&'static str] = &[];
    const GENERATOR_NAMES: &'static [&'static str] = &["horns", "boundaries"];

    fn to_value(&self) -> Value {
        let cells: Map<String, Value> = (0..=self.dim()).map(|m| (m.to_string(), json!(self.cells(m)))).collect();
        let faces: Map<String, Value> = (1..=self.dim())
            .map(|m| {
                let per: Map<String, Value> = self
                    .cells(m)
                    .iter()
                    .enumerate()
                    .map(|(i, id)| {
                        let fs: Vec<&String> = (0..=m).map(|k| &self.cells(m - 1)[self.face(m, i, k)]).collect();
                        (id.clone(), json!(fs))
                    })
                    .collect();
                (m.to_string(), Value::Object(per))
            })
            .collect();
        json!({"kind": "ssset", "dim": self.dim(), "cells": cells, "faces": faces})
    }

    fn from_value(v: &Value) -> Result<Self> {
        check_kind(v, "ssset")?;
        let dim = field(v, "dim")?.as_u64().ok_or_else(|| bad("dim must be a non-negative integer"))? as usize;
        if dim > crate::ssset::MAX_DIM {
            return Err(Error::IndexOutOfRange(format!("dimension {dim}")));
        }
        let cells_v = object(field(v, "cells")?, "cells")?;
        let cells = (0..=dim)
            .map(|m| cells_v.get(&m.to_string()).map_or(Ok(Vec::new()), |c| strings(c, "cells")))
            .collect::<Result<Vec<_>>>()?;
        if let Some(k) = cells_v.keys().find(|k| k.parse::<usize>().map_or(true, |m| m > dim)) {
            return Err(bad(format!("cells of unexpected dimension `{k}`")));
        }
        let faces_v = object(field(v, "faces")?, "faces")?;
        let mut faces = Vec::new();
        for (m, per) in faces_v {
            if m.parse::<usize>().map_or(true, |m| m == 0 || m > dim) {
                return Err(bad(format!("faces of unexpected dimension `{m}`")));
            }
            for (id, fs) in object(per, "faces")? {
                faces.push((id.clone(), strings(fs, "faces")?));
            }
        }
        SemiSimplicialSet::new(dim, cells, faces)
    }

    fn named_generators(name: &str, dim: usize) -> Option<Vec<Arrow<Self>>> {
        match name {
            "horns" => horns_up_to(dim, dim).ok(),
            "boundaries" => (0..=dim).map(|m| boundary(m).ok().map(|b| pad_arrow(&b, dim))).collect(),
            _ => None,
        }
    }

    fn dim_hint(&self) -> usize {
        self.dim()
    }

    fn encode_hom(dom: &Self, cod: &Self, h: &Hom) -> Map<String, Value> {
        let maps: Map<String, Value> = (0..dom.sorts()).map(|s| (s.to_string(), sort_map(dom, cod, h, s))).collect();
        Map::from_iter([("maps".to_string(), Value::Object(maps))])
    }

    fn decode_hom(dom: &Self, cod: &Self, v: &Value) -> Result<Hom> {
        let maps = object(field(v, "maps")?, "maps")?;
        let empty = Value::Object(Map::new());
        let parts = (0..dom.sorts())
            .map(|s| read_sort_map(dom, cod, maps.get(&s.to_string()).unwrap_or(&empty), s))
            .collect::<Result<Vec<_>>>()?;
        Ok(Hom::from_parts(parts))
    }
}

pub fn object_to_string<C: Codec>(c: &C) -> String {
    canonical(&c.to_value())
}

pub fn object_from_str<C: Codec>(text: &str) -> Result<C> {
    C::from_value(&parse(text)?)
}

pub fn arrow_to_value<C: Codec>(a: &Arrow<C>) -> Value {
    let mut m = C::encode_hom(&a.dom, &a.cod, &a.hom);
    m.insert("kind".into(), Value::String(C::MAP_KIND.into()));
    m.insert("source".into(), a.dom.to_value());
    m.insert("target".into(), a.cod.to_value());
    Value::Object(m)
}

pub fn arrow_from_value<C: Codec>(v: &Value) -> Result<Arrow<C>> {
    check_kind(v, C::MAP_KIND)?;
    let dom = C::from_value(field(v, "source")?)?;
    let cod = C::from_value(field(v, "target")?)?;
    let hom = C::decode_hom(&dom, &cod, v)?;
    Arrow::new(Arc::new(dom), Arc::new(cod), hom)
}

/// A bare map between known objects: one id-to-id object per sort.
pub fn hom_to_value<C: Instance>(dom: &C, cod: &C, h: &Hom) -> Value {
    Value::Array((0..dom.sorts()).map(|s| sort_map(dom, cod, h, s)).collect())
}

pub fn hom_from_value<C: Instance>(dom: &C, cod: &C, v: &Value) -> Result<Hom> {
    let arr = v.as_array().ok_or_else(|| bad("a map must be an array of component maps"))?;
    if arr.len() != dom.sorts() {
        return Err(bad(format!("a map needs {} components", dom.sorts())));
    }
    let parts = arr.iter().enumerate().map(|(s, c)| read_sort_map(dom, cod, c, s)).collect::<Result<Vec<_>>>()?;
    let h = Hom::from_parts(parts);
    if let Some(why) = h.map_violation(dom, cod) {
        return Err(Error::NotAMap(why));
    }
    Ok(h)
}

/// A named generating set when `gens` is one, otherwise the maps themselves.
pub fn generators_to_value<C: Codec>(gens: &[Arrow<C>], dim: usize) -> Value {
    for name in C::GENERATOR_NAMES {
        if C::named_generators(name, dim).is_some_and(|g| g == gens) {
            return Value::String(name.to_string());
        }
    }
    Value::Array(gens.iter().map(arrow_to_value).collect())
}

pub fn generators_from_value<C: Codec>(v: &Value, dim: usize) -> Result<Vec<Arrow<C>>> {
    match v {
        Value::String(name) => C::named_generators(name, dim).ok_or_else(|| bad(format!("unknown generating set `{name}`"))),
        Value::Array(items) => items.iter().map(arrow_from_value).collect(),
        _ => Err(bad("generators must be a name or an array of maps")),
    }
}

pub fn jfib_to_value<C: Codec>(x: &JFibObject<C>) -> Value {
    let gens = &x.gens;
    let chooser: Vec<Value> = x
        .chooser()
        .iter()
        .map(|(k, e)| {
            let j = &gens[k.j];
            json!({
                "generator": k.j,
                "attach": hom_to_value(&*j.dom, &*x.carrier, &k.a),
                "extension": hom_to_value(&*j.cod, &*x.carrier, e),
            })
        })
        .collect();
    json!({
        "kind": "jfib",
        "carrier": x.carrier.to_value(),
        "generators": generators_to_value(gens, x.carrier.dim_hint()),
        "chooser": chooser,
    })
}

fn generator_index(v: &Value, count: usize) -> Result<usize> {
    let j = v.as_u64().ok_or_else(|| bad("generator must be an index"))? as usize;
    if j >= count {
        return Err(Error::IndexOutOfRange(format!("generator {j}")));
    }
    Ok(j)
}

pub fn jfib_from_value<C: Codec>(v: &Value) -> Result<JFibObject<C>> {
    check_kind(v, "jfib")?;
    let carrier = Arc::new(C::from_value(field(v, "carrier")?)?);
    let gens = Arc::new(generators_from_value::<C>(field(v, "generators")?, carrier.dim_hint())?);
    let mut chooser = BTreeMap::new();
    for entry in field(v, "chooser")?.as_array().ok_or_else(|| bad("chooser must be an array"))? {
        let j = generator_index(field(entry, "generator")?, gens.len())?;
        let g = &gens[j];
        let a = hom_from_value(&*g.dom, &*carrier, field(entry, "attach")?)?;
        let e = hom_from_value(&*g.cod, &*carrier, field(entry, "extension")?)?;
        if chooser.insert(ExtKey { j, a }, e).is_some() {
            return Err(bad("two extensions for one attaching map"));
        }
    }
    Ok(JFibObject::from_chooser(carrier, gens, chooser))
}

pub fn lifting_function_to_value<C: Codec>(phi: &LiftingFunction<C>) -> Value {
    let f = &phi.carrier;
    let table: Vec<Value> = phi
        .table()
        .iter()
        .map(|(p, d)| {
            let j = &phi.gens[p.j];
            json!({
                "generator": p.j,
                "top": hom_to_value(&*j.dom, &*f.dom, &p.a),
                "bottom": hom_to_value(&*j.cod, &*f.cod, &p.b),
                "filler": hom_to_value(&*j.cod, &*f.dom, d),
            })
        })
        .collect();
    json!({
        "kind": "lifting_function",
        "carrier": arrow_to_value(f),
        "generators": generators_to_value(&phi.gens, f.dom.dim_hint().max(f.cod.dim_hint())),
        "table": table,
    })
}

pub fn lifting_function_from_value<C: Codec>(v: &Value) -> Result<LiftingFunction<C>> {
    check_kind(v, "lifting_function")?;
    let f: Arrow<C> = arrow_from_value(field(v, "carrier")?)?;
    let gens = Arc::new(generators_from_value::<C>(field(v, "generators")?, f.dom.dim_hint().max(f.cod.dim_hint()))?);
    let mut table = BTreeMap::new();
    for entry in field(v, "table")?.as_array().ok_or_else(|| bad("table must be an array"))? {
        let j = generator_index(field(entry, "generator")?, gens.len())?;
        let g = &gens[j];
        let a = hom_from_value(&*g.dom, &*f.dom, field(entry, "top")?)?;
        let b = hom_from_value(&*g.cod, &*f.cod, field(entry, "bottom")?)?;
        let d = hom_from_value(&*g.cod, &*f.dom, field(entry, "filler")?)?;
        if table.insert(Problem { j, a, b }, d).is_some() {
            return Err(bad("two fillers for one problem"));
        }
    }
    Ok(LiftingFunction::from_table(f, gens, table))
}

pub fn square_to_value<C: Codec>(s: &Square<C>) -> Value {
    json!({
        "kind": "square",
        "left": arrow_to_value(&s.left),
        "right": arrow_to_value(&s.right),
        "top": hom_to_value(&*s.left.dom, &*s.right.dom, &s.top),
        "bottom": hom_to_value(&*s.left.cod, &*s.right.cod, &s.bottom),
    })
}

/// Reads a square and checks that it commutes.
pub fn square_from_value<C: Codec>(v: &Value) -> Result<Square<C>> {
    check_kind(v, "square")?;
    let left: Arrow<C> = arrow_from_value(field(v, "left")?)?;
    let right: Arrow<C> = arrow_from_value(field(v, "right")?)?;
    let top = hom_from_value(&*left.dom, &*right.dom, field(v, "top")?)?;
    let bottom = hom_from_value(&*left.cod, &*right.cod, field(v, "bottom")?)?;
    Square::new(left, right, top, bottom)
}

/// A lifting problem of `f` against `gens[p.j]`, without the maps themselves.
pub fn problem_to_value<C: Codec>(f: &Arrow<C>, gens: &[Arrow<C>], p: &Problem) -> Value {
    let j = &gens[p.j];
    json!({
        "generator": p.j,
        "top": hom_to_value(&*j.dom, &*f.dom, &p.a),
        "bottom": hom_to_value(&*j.cod, &*f.cod, &p.b),
    })
}

pub fn ext_key_to_value<C: Codec>(x: &C, gens: &[Arrow<C>], k: &ExtKey) -> Value {
    json!({
        "generator": k.j,
        "attach": hom_to_value(&*gens[k.j].dom, x, &k.a),
    })
}

/// An instance of any of the three categories.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AnyObject {
    Graph(FiniteGraph),
    Category(FiniteCategory),
    SSet(SemiSimplicialSet),
}

/// Reads any object or map file, dispatching on `kind`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AnyInstance {
    Object(AnyObject),
    GraphMap(Arrow<FiniteGraph>),
    Functor(Arrow<FiniteCategory>),
    SSMap(Arrow<SemiSimplicialSet>),
}

pub fn any_from_value(v: &Value) -> Result<AnyInstance> {
    let kind = str_of(field(v, "kind")?, "kind")?;
    Ok(match kind {
        "graph" => AnyInstance::Object(AnyObject::Graph(FiniteGraph::from_value(v)?)),
        "category" => AnyInstance::Object(AnyObject::Category(FiniteCategory::from_value(v)?)),
        "ssset" => AnyInstance::Object(AnyObject::SSet(SemiSimplicialSet::from_value(v)?)),
        "graph_map" => AnyInstance::GraphMap(arrow_from_value(v)?),
        "functor" => AnyInstance::Functor(arrow_from_value(v)?),
        "ss_map" => AnyInstance::SSMap(arrow_from_value(v)?),
        other => return Err(bad(format!("unknown kind `{other}`"))),
    })
}

pub fn any_to_value(x: &AnyInstance) -> Value {
    match x {
        AnyInstance::Object(AnyObject::Graph(g)) => g.to_value(),
        AnyInstance::Object(AnyObject::Category(c)) => c.to_value(),
        AnyInstance::Object(AnyObject::SSet(s)) => s.to_value(),
        AnyInstance::GraphMap(f) => arrow_to_value(f),
        AnyInstance::Functor(f) => arrow_to_value(f),
        AnyInstance::SSMap(f) => arrow_to_value(f),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::make_lifting_function;
    use crate::lifting::{codiagonal, Choice};
    use crate::par::Exec;
    use crate::ssset::{horn, standard_simplex};

    fn round_trip<C: Codec>(c: &C) {
        let text = object_to_string(c);
        let back: C = object_from_str(&text).unwrap();
        assert_eq!(&back, c);
        assert_eq!(object_to_string(&back), text);
        assert!(text.ends_with('\n') && !text.contains(": ") && !text.contains(", "));
    }

    #[test]
    fn objects_round_trip() {
        round_trip(&FiniteGraph::new(["b", "a"], [("e", "a", "b"), ("d", "b", "b")]).unwrap());
        round_trip(&FiniteCategory::arrow());
        round_trip(&FiniteCategory::empty());
        round_trip(&standard_simplex(3).unwrap());
        round_trip(&SemiSimplicialSet::codiscrete(&["p", "q"], 2).unwrap());
    }

    #[test]
    fn graph_format_is_the_documented_one() {
        let g = FiniteGraph::new(["b", "a"], [("e", "a", "b")]).unwrap();
        assert_eq!(
            object_to_string(&g),
            "{\"edges\":[{\"id\":\"e\",\"src\":\"a\",\"tgt\":\"b\"}],\"kind\":\"graph\",\"nodes\":[\"a\",\"b\"]}\n"
        );
    }

    #[test]
    fn maps_round_trip() {
        let f = codiagonal();
        let v = arrow_to_value(&f);
        assert_eq!(arrow_from_value::<FiniteGraph>(&v).unwrap(), f);
        let h = horn(2, 1).unwrap();
        let v = arrow_to_value(&h);
        assert_eq!(v["kind"], "ss_map");
        assert_eq!(arrow_from_value::<SemiSimplicialSet>(&v).unwrap(), h);
        for j in j_cat() {
            assert_eq!(arrow_from_value::<FiniteCategory>(&arrow_to_value(&j)).unwrap(), j);
        }
    }

    #[test]
    fn rejects_malformed_input() {
        assert!(object_from_str::<FiniteGraph>("{\"kind\":\"graph\",\"nodes\":[\"a\",\"a\"],\"edges\":[]}").is_err());
        assert!(object_from_str::<FiniteGraph>("{\"kind\":\"category\"}").is_err());
        assert!(object_from_str::<FiniteGraph>("not json").is_err());
        let mut v = arrow_to_value(&codiagonal());
        v["node_map"]["1"] = json!("nowhere");
        assert!(arrow_from_value::<FiniteGraph>(&v).is_err());
        let mut v = arrow_to_value(&j_edge());
        v["edge_map"] = json!({});
        v["target"]["edges"] = json!([]);
        v["source"]["edges"] = json!([{"id": "x", "src": "0", "tgt": "1"}]);
        assert!(arrow_from_value::<FiniteGraph>(&v).is_err());
    }

    #[test]
    fn structures_round_trip() {
        let s = Arc::new(standard_simplex(2).unwrap());
        let gens = Arc::new(horns_up_to(2, 2).unwrap());
        let x = JFibObject::choose(Arc::new(SemiSimplicialSet::codiscrete(&["p", "q"], 2).unwrap()), gens.clone(), Choice::Last).unwrap();
        let v = jfib_to_value(&x);
        assert_eq!(v["generators"], "horns");
        assert_eq!(jfib_from_value::<SemiSimplicialSet>(&v).unwrap(), x);
        let f = Arrow::identity(s);
        let phi = make_lifting_function(&f, gens, None, Choice::First, Exec::Sequential).unwrap();
        let v = lifting_function_to_value(&phi);
        let back = lifting_function_from_value::<SemiSimplicialSet>(&v).unwrap();
        assert_eq!(back.table(), phi.table());
        assert_eq!(canonical(&lifting_function_to_value(&back)), canonical(&v));
    }

    #[test]
    fn any_dispatch() {
        let c = FiniteCategory::terminal();
        let v = c.to_value();
        assert_eq!(any_from_value(&v).unwrap(), AnyInstance::Object(AnyObject::Category(c)));
        assert!(any_from_value(&json!({"kind": "sheaf"})).is_err());
    }
}
