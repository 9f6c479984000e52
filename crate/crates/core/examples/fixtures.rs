//! Writes the fixture files used by the command-line tests.
//!
//! `cargo run -p awfslab --example fixtures -- <dir>`

use std::path::{Path, PathBuf};
use std::sync::Arc;

use awfslab::gen::*;
use awfslab::instance::homs;
use awfslab::json::*;
use awfslab::lifting::{codiagonal, j_edge, j_point, Square};
use awfslab::ssset::{horn, pad_arrow, to_terminal};
use awfslab::{Arrow, FiniteCategory, FiniteGraph, Hom, SemiSimplicialSet};
use serde_json::Value;

fn write(dir: &Path, name: &str, v: &Value) {
    let p = dir.join(name);
    std::fs::create_dir_all(p.parent().unwrap()).unwrap();
    std::fs::write(&p, canonical(v)).unwrap();
}

fn functor(dom: FiniteCategory, cod: FiniteCategory, pick: impl Fn(&Arrow<FiniteCategory>) -> bool) -> Arrow<FiniteCategory> {
    let (dom, cod) = (Arc::new(dom), Arc::new(cod));
    homs(&*dom, &*cod, None)
        .into_iter()
        .map(|h| Arrow::new_unchecked(dom.clone(), cod.clone(), h))
        .find(|f| pick(f))
        .expect("a functor")
}

fn extend_files<C: Codec>(dir: &Path, stem: &str, inst: &ExtendInstance<C>) {
    write(dir, &format!("{stem}/x.json"), &jfib_to_value(&inst.x));
    write(dir, &format!("{stem}/y.json"), &jfib_to_value(&inst.y));
    write(dir, &format!("{stem}/i.json"), &arrow_to_value(&inst.i));
    write(dir, &format!("{stem}/q.json"), &arrow_to_value(&inst.q));
}

fn main() {
    let dir: PathBuf = std::env::args().nth(1).unwrap_or_else(|| "fixtures".into()).into();

    write(&dir, "terminal_category.json", &FiniteCategory::terminal().to_value());
    write(&dir, "arrow_category.json", &FiniteCategory::arrow().to_value());
    write(&dir, "codiagonal.json", &arrow_to_value(&codiagonal()));

    // the point lifts against the codiagonal; the edge does not lift against (• •) -> terminal
    let c = codiagonal();
    let s = Square::new(j_point(), c.clone(), Hom::empty(&*j_point().dom), Hom::from_parts(vec![vec![0], vec![]])).unwrap();
    write(&dir, "square_fillable.json", &square_to_value(&s));
    let two = Arc::new(FiniteGraph::discrete(2));
    let t = Arc::new(FiniteGraph::terminal());
    let bang = Arrow::new(two.clone(), t.clone(), Hom::from_parts(vec![vec![0, 0], vec![]])).unwrap();
    write(&dir, "two_points_to_loop.json", &arrow_to_value(&bang));
    let je = j_edge();
    let bottom = Hom::from_parts(vec![vec![0; je.cod.nodes().len()], vec![0; je.cod.edges().len()]]);
    let s = Square::new(je.clone(), bang, Hom::identity(&*two), bottom).unwrap();
    write(&dir, "square_unfillable.json", &square_to_value(&s));

    let h = pad_arrow(&horn(2, 1).unwrap(), 2);
    let hx: Arc<SemiSimplicialSet> = h.dom.clone();
    write(&dir, "horn.json", &hx.to_value());
    write(&dir, "horn_to_point.json", &arrow_to_value(&to_terminal(&hx)));

    let mut r = rng(DEFAULT_SEED);
    let g = extension_graph_instance(&mut r);
    extend_files(&dir, "extend_graph", &g);
    let mut broken = jfib_to_value(&g.x);
    broken["chooser"] = Value::Array(Vec::new());
    write(&dir, "jfib_point.json", &jfib_to_value(&g.x));
    write(&dir, "mutation/jfib_missing_extension.json", &broken);
    extend_files(&dir, "extend_ss", &extension_ss_instance(&mut r));
    for d in Defect::ALL {
        let name = serde_json::to_value(d).unwrap();
        extend_files(&dir, &format!("defect_{}", name.as_str().unwrap()), &extension_graph_defect(&mut r, d));
    }

    let codiag = functor(FiniteCategory::discrete(2), FiniteCategory::terminal(), |_| true);
    write(&dir, "codiagonal_functor.json", &arrow_to_value(&codiag));
    let onto_arrow = functor(FiniteCategory::discrete(2), FiniteCategory::arrow(), |f| f.hom.part(0) == [0, 1]);
    write(&dir, "discrete_into_arrow.json", &arrow_to_value(&onto_arrow));
    let arrow_down = functor(FiniteCategory::arrow(), FiniteCategory::terminal(), |_| true);
    write(&dir, "arrow_to_point.json", &arrow_to_value(&arrow_down));

    let corpus = free_rmap_corpus(FREE_RMAP_BOUNDS);
    let (g, phi) = corpus.iter().max_by_key(|(_, phi)| phi.len()).unwrap();
    write(&dir, "free_rmap/g.json", &arrow_to_value(g));
    write(&dir, "free_rmap/rstruct.json", &lifting_function_to_value(phi));
}
