//! Truncated semi-simplicial sets: simplices with face maps, no degeneracies.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::instance::{index_of, sorted_ids, Arrow, Hom, Instance};

/// Largest dimension accepted by the standard-simplex constructors.
pub const MAX_DIM: usize = 9;

/// A semi-simplicial set truncated at dimension `dim`. Sort `m` holds the
/// `m`-simplices; an `m`-simplex with `m >= 1` has faces `d_0 .. d_m`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SemiSimplicialSet {
    cells: Vec<Vec<String>>,
    faces: Vec<Vec<Vec<usize>>>,
}

/// A failure of `d_i d_j = d_{j-1} d_i` for `i < j`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SimplicialIdentityViolation {
    pub simplex: String,
    pub i: usize,
    pub j: usize,
}

pub type SSMap = Arrow<SemiSimplicialSet>;

impl SemiSimplicialSet {
    /// `cells[m]` lists the `m`-simplices; `faces` gives `(id, [d_0 .. d_m])` for every simplex of dimension >= 1.
    pub fn new(dim: usize, cells: Vec<Vec<String>>, faces: Vec<(String, Vec<String>)>) -> Result<Self> {
        if cells.len() > dim + 1 {
            return Err(Error::Malformed(format!("cells above dimension bound {dim}")));
        }
        let mut sorted = Vec::with_capacity(dim + 1);
        for m in 0..=dim {
            sorted.push(sorted_ids(&format!("{m}-simplex"), cells.get(m).cloned().unwrap_or_default())?);
        }
        let mut face_map: BTreeMap<String, Vec<String>> = BTreeMap::new();
        for (id, fs) in faces {
            if face_map.insert(id.clone(), fs).is_some() {
                return Err(Error::Malformed(format!("faces of {id} given twice")));
            }
        }
        let mut all_faces = vec![Vec::new()];
        for m in 1..=dim {
            let mut level = Vec::with_capacity(sorted[m].len());
            for id in &sorted[m] {
                let fs = face_map
                    .remove(id)
                    .ok_or_else(|| Error::Malformed(format!("{m}-simplex {id} has no faces")))?;
                if fs.len() != m + 1 {
                    return Err(Error::Malformed(format!("{m}-simplex {id} needs {} faces", m + 1)));
                }
                level.push(
                    fs.iter()
                        .map(|f| index_of(&sorted[m - 1], &format!("{}-simplex", m - 1), f))
                        .collect::<Result<Vec<_>>>()?,
                );
            }
            all_faces.push(level);
        }
        if let Some(id) = face_map.keys().next() {
            return Err(Error::Malformed(format!("faces given for unknown simplex {id}")));
        }
        Ok(SemiSimplicialSet {
            cells: sorted,
            faces: all_faces,
        })
    }

    pub(crate) fn from_sorted(cells: Vec<Vec<String>>, faces: Vec<Vec<Vec<usize>>>) -> Self {
        SemiSimplicialSet { cells, faces }
    }

    pub fn dim(&self) -> usize {
        self.cells.len() - 1
    }

    pub fn cells(&self, m: usize) -> &[String] {
        self.ids(m)
    }

    pub fn face(&self, m: usize, idx: usize, i: usize) -> usize {
        self.faces[m][idx][i]
    }

    pub fn empty(dim: usize) -> Self {
        SemiSimplicialSet {
            cells: vec![Vec::new(); dim + 1],
            faces: vec![Vec::new(); dim + 1],
        }
    }

    /// One simplex `*m` in each dimension `m <= dim`.
    pub fn terminal(dim: usize) -> Self {
        SemiSimplicialSet {
            cells: (0..=dim).map(|m| vec![format!("*{m}")]).collect(),
            faces: (0..=dim)
                .map(|m| if m == 0 { Vec::new() } else { vec![vec![0; m + 1]] })
                .collect(),
        }
    }

    /// The same simplices with the dimension bound raised to `dim`.
    pub fn padded(&self, dim: usize) -> Self {
        let mut out = self.clone();
        while out.cells.len() <= dim {
            out.cells.push(Vec::new());
            out.faces.push(Vec::new());
        }
        out
    }

    /// Simplices are all `(m+1)`-tuples of vertices, faces drop one coordinate.
    /// Ids are the vertex names joined with `.`.
    pub fn codiscrete(vertices: &[&str], dim: usize) -> Result<Self> {
        let verts = sorted_ids("vertex", vertices.iter().map(|v| v.to_string()))?;
        let mut tuples: Vec<Vec<Vec<usize>>> = vec![(0..verts.len()).map(|v| vec![v]).collect()];
        for m in 1..=dim {
            let prev = &tuples[m - 1];
            let mut next = Vec::new();
            for t in prev {
                for v in 0..verts.len() {
                    let mut u = t.clone();
                    u.push(v);
                    next.push(u);
                }
            }
            tuples.push(next);
        }
        let name = |t: &[usize]| t.iter().map(|&v| verts[v].as_str()).collect::<Vec<_>>().join(".");
        let cells: Vec<Vec<String>> = tuples.iter().map(|l| l.iter().map(|t| name(t)).collect()).collect();
        let faces = (1..=dim)
            .flat_map(|m| {
                let name = &name;
                tuples[m].iter().map(move |t| {
                    let fs = (0..=m)
                        .map(|i| {
                            let mut u = t.clone();
                            u.remove(i);
                            name(&u)
                        })
                        .collect();
                    (name(t), fs)
                })
            })
            .collect();
        SemiSimplicialSet::new(dim, cells, faces)
    }

    /// Disjoint union with ids prefixed by `left`/`right`; the result has the larger dimension bound.
    pub fn coproduct(&self, other: &Self, left: &str, right: &str) -> Self {
        let dim = self.dim().max(other.dim());
        let (a, b) = (self.padded(dim), other.padded(dim));
        let mut cells = Vec::new();
        let mut faces = Vec::new();
        for m in 0..=dim {
            let mut level: Vec<(String, Vec<String>)> = Vec::new();
            for (x, p) in [(&a, left), (&b, right)] {
                for (i, id) in x.cells[m].iter().enumerate() {
                    let fs = if m == 0 {
                        Vec::new()
                    } else {
                        x.faces[m][i].iter().map(|&f| format!("{p}{}", x.cells[m - 1][f])).collect()
                    };
                    level.push((format!("{p}{id}"), fs));
                }
            }
            cells.push(level.iter().map(|(id, _)| id.clone()).collect());
            if m > 0 {
                faces.extend(level);
            }
        }
        SemiSimplicialSet::new(dim, cells, faces).expect("coproduct of valid sets")
    }

    /// Every failure of the semi-simplicial identities.
    pub fn identity_violations(&self) -> Vec<SimplicialIdentityViolation> {
        let mut out = Vec::new();
        for m in 2..self.cells.len() {
            for (x, fs) in self.faces[m].iter().enumerate() {
                for j in 1..=m {
                    for i in 0..j {
                        // d_i d_j x = d_{j-1} d_i x
                        let lhs = self.faces[m - 1][fs[j]][i];
                        let rhs = self.faces[m - 1][fs[i]][j - 1];
                        if lhs != rhs {
                            out.push(SimplicialIdentityViolation {
                                simplex: self.cells[m][x].clone(),
                                i,
                                j,
                            });
                        }
                    }
                }
            }
        }
        out
    }
}

impl Instance for SemiSimplicialSet {
    const KIND: &'static str = "ssset";
    const MAP_KIND: &'static str = "ss_map";

    fn sorts(&self) -> usize {
        self.cells.len()
    }

    fn ids(&self, sort: usize) -> &[String] {
        self.cells.get(sort).map(Vec::as_slice).unwrap_or(&[])
    }

    fn faces(&self, sort: usize, idx: usize) -> &[usize] {
        if sort == 0 {
            &[]
        } else {
            &self.faces[sort][idx]
        }
    }
}

fn subset_name(vs: &[usize]) -> String {
    vs.iter().map(|v| v.to_string()).collect()
}

fn simplex_faces(vs: &[usize]) -> Vec<String> {
    (0..vs.len())
        .map(|i| {
            let mut u = vs.to_vec();
            u.remove(i);
            subset_name(&u)
        })
        .collect()
}

/// Nonempty strictly increasing subsets of `0..=m` of size `d + 1`.
fn subsets(m: usize, d: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, m: usize, left: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if left == 0 {
            out.push(cur.clone());
            return;
        }
        for v in start..=m {
            cur.push(v);
            go(v + 1, m, left - 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, m, d + 1, &mut Vec::new(), &mut out);
    out
}

fn simplex_filtered(m: usize, keep: impl Fn(&[usize]) -> bool) -> SemiSimplicialSet {
    let mut cells = Vec::new();
    let mut faces = Vec::new();
    for d in 0..=m {
        let level: Vec<Vec<usize>> = subsets(m, d).into_iter().filter(|s| keep(s)).collect();
        cells.push(level.iter().map(|s| subset_name(s)).collect());
        if d > 0 {
            faces.extend(level.iter().map(|s| (subset_name(s), simplex_faces(s))));
        }
    }
    SemiSimplicialSet::new(m, cells, faces).expect("subcomplex of a simplex")
}

/// The standard `m`-simplex: simplices are increasing vertex lists, named by their digits.
pub fn standard_simplex(m: usize) -> Result<SemiSimplicialSet> {
    if m > MAX_DIM {
        return Err(Error::IndexOutOfRange(format!("dimension {m} exceeds {MAX_DIM}")));
    }
    Ok(simplex_filtered(m, |_| true))
}

/// The horn `Λ^k[m]` and its inclusion into `Δ[m]`: everything except the top
/// simplex and its `k`-th face.
pub fn horn(m: usize, k: usize) -> Result<SSMap> {
    if m == 0 || k > m || m > MAX_DIM {
        return Err(Error::IndexOutOfRange(format!("horn({m}, {k})")));
    }
    let missing: Vec<usize> = (0..=m).filter(|&v| v != k).collect();
    let horn = simplex_filtered(m, |s| s.len() <= m && s != missing.as_slice());
    let simplex = standard_simplex(m)?;
    let parts = (0..=m)
        .map(|d| {
            horn.ids(d)
                .iter()
                .map(|id| simplex.position(d, id).expect("subcomplex"))
                .collect()
        })
        .collect();
    Arrow::new(Arc::new(horn), Arc::new(simplex), Hom::from_parts(parts))
}

/// The boundary `∂Δ[m]` and its inclusion into `Δ[m]`: everything except the top simplex.
/// For `m = 0` the boundary is empty.
pub fn boundary(m: usize) -> Result<SSMap> {
    if m > MAX_DIM {
        return Err(Error::IndexOutOfRange(format!("boundary({m})")));
    }
    let simplex = standard_simplex(m)?;
    let bd = simplex_filtered(m, |s| s.len() <= m);
    let parts = (0..=m)
        .map(|d| {
            bd.ids(d)
                .iter()
                .map(|id| simplex.position(d, id).expect("subcomplex"))
                .collect()
        })
        .collect();
    Arrow::new(Arc::new(bd), Arc::new(simplex), Hom::from_parts(parts))
}

/// All horn inclusions `Λ^k[m]` for `1 <= m <= max_dim`, each padded to dimension `pad`.
pub fn horns_up_to(max_dim: usize, pad: usize) -> Result<Vec<SSMap>> {
    let mut out = Vec::new();
    for m in 1..=max_dim {
        for k in 0..=m {
            let h = horn(m, k)?;
            out.push(pad_arrow(&h, pad));
        }
    }
    Ok(out)
}

/// Raises the dimension bound of both ends of a map.
pub fn pad_arrow(f: &SSMap, dim: usize) -> SSMap {
    let dom = f.dom.padded(dim);
    let cod = f.cod.padded(dim);
    let mut parts = f.hom.parts().to_vec();
    while parts.len() < dom.sorts() {
        parts.push(Vec::new());
    }
    Arrow::new_unchecked(Arc::new(dom), Arc::new(cod), Hom::from_parts(parts))
}

/// The unique map to the terminal set of the same dimension bound.
pub fn to_terminal(x: &Arc<SemiSimplicialSet>) -> SSMap {
    let t = SemiSimplicialSet::terminal(x.dim());
    let parts = (0..x.sorts()).map(|m| vec![0; x.len(m)]).collect();
    Arrow::new_unchecked(x.clone(), Arc::new(t), Hom::from_parts(parts))
}
