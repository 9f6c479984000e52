//! Finite directed multigraphs (quivers) and connected components.

use std::collections::BTreeMap;

use petgraph::unionfind::UnionFind;

use crate::error::Result;
use crate::instance::{index_of, sorted_ids, Instance};

/// A finite directed multigraph. Loops and parallel edges are allowed.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FiniteGraph {
    nodes: Vec<String>,
    edges: Vec<String>,
    ends: Vec<[usize; 2]>,
}

/// Blocks of a partition, each sorted, blocks ordered by their least element.
pub type Partition = Vec<Vec<String>>;

impl FiniteGraph {
    pub fn new<N, E, S>(nodes: N, edges: E) -> Result<Self>
    where
        N: IntoIterator<Item = S>,
        E: IntoIterator<Item = (S, S, S)>,
        S: Into<String>,
    {
        let nodes = sorted_ids("node", nodes.into_iter().map(Into::into))?;
        let mut raw: Vec<(String, String, String)> = edges
            .into_iter()
            .map(|(e, s, t)| (e.into(), s.into(), t.into()))
            .collect();
        raw.sort();
        let edges = sorted_ids("edge", raw.iter().map(|(e, _, _)| e.clone()))?;
        let ends = raw
            .iter()
            .map(|(_, s, t)| Ok([index_of(&nodes, "node", s)?, index_of(&nodes, "node", t)?]))
            .collect::<Result<Vec<_>>>()?;
        Ok(FiniteGraph { nodes, edges, ends })
    }

    pub(crate) fn from_sorted(nodes: Vec<String>, edges: Vec<String>, ends: Vec<[usize; 2]>) -> Self {
        FiniteGraph { nodes, edges, ends }
    }

    pub fn empty() -> Self {
        FiniteGraph {
            nodes: Vec::new(),
            edges: Vec::new(),
            ends: Vec::new(),
        }
    }

    /// One node `*`, no edges.
    pub fn point() -> Self {
        FiniteGraph::new(["*"], Vec::<(&str, &str, &str)>::new()).expect("valid")
    }

    /// `n` isolated nodes `0..n`.
    pub fn discrete(n: usize) -> Self {
        FiniteGraph::new((0..n).map(|i| i.to_string()), Vec::<(String, String, String)>::new()).expect("valid")
    }

    /// The terminal graph: one node `*` with one loop `*`.
    pub fn terminal() -> Self {
        FiniteGraph::new(["*"], [("*", "*", "*")]).expect("valid")
    }

    pub fn nodes(&self) -> &[String] {
        &self.nodes
    }

    pub fn edges(&self) -> &[String] {
        &self.edges
    }

    pub fn edge_ends(&self, e: usize) -> (usize, usize) {
        (self.ends[e][0], self.ends[e][1])
    }

    /// Edge triples `(id, source, target)` in id order.
    pub fn edge_triples(&self) -> impl Iterator<Item = (&str, &str, &str)> {
        self.edges.iter().zip(&self.ends).map(move |(e, [s, t])| {
            (e.as_str(), self.nodes[*s].as_str(), self.nodes[*t].as_str())
        })
    }

    pub fn node_index(&self, id: &str) -> Option<usize> {
        self.position(0, id)
    }

    pub fn edge_index(&self, id: &str) -> Option<usize> {
        self.position(1, id)
    }

    /// Outgoing edges of each node, in edge-id order.
    pub fn out_edges(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.nodes.len()];
        for (e, [s, _]) in self.ends.iter().enumerate() {
            out[*s].push(e);
        }
        out
    }

    pub fn has_directed_cycle(&self) -> bool {
        // 0 = unvisited, 1 = on stack, 2 = done
        let out = self.out_edges();
        let mut state = vec![0u8; self.nodes.len()];
        for root in 0..self.nodes.len() {
            if state[root] != 0 {
                continue;
            }
            let mut stack: Vec<(usize, usize)> = vec![(root, 0)];
            state[root] = 1;
            while let Some(&mut (v, ref mut next)) = stack.last_mut() {
                if *next < out[v].len() {
                    let w = self.ends[out[v][*next]][1];
                    *next += 1;
                    match state[w] {
                        1 => return true,
                        0 => {
                            state[w] = 1;
                            stack.push((w, 0));
                        }
                        _ => {}
                    }
                } else {
                    state[v] = 2;
                    stack.pop();
                }
            }
        }
        false
    }

    /// Disjoint union; ids are prefixed with `left`/`right`.
    pub fn coproduct(&self, other: &FiniteGraph, left: &str, right: &str) -> Result<FiniteGraph> {
        let nodes = self
            .nodes
            .iter()
            .map(|n| format!("{left}{n}"))
            .chain(other.nodes.iter().map(|n| format!("{right}{n}")));
        let edges = self
            .edge_triples()
            .map(|(e, s, t)| (format!("{left}{e}"), format!("{left}{s}"), format!("{left}{t}")))
            .chain(
                other
                    .edge_triples()
                    .map(|(e, s, t)| (format!("{right}{e}"), format!("{right}{s}"), format!("{right}{t}"))),
            );
        FiniteGraph::new(nodes.collect::<Vec<_>>(), edges.collect::<Vec<_>>())
    }
}

impl Instance for FiniteGraph {
    const KIND: &'static str = "graph";
    const MAP_KIND: &'static str = "graph_map";

    fn sorts(&self) -> usize {
        2
    }

    fn ids(&self, sort: usize) -> &[String] {
        match sort {
            0 => &self.nodes,
            1 => &self.edges,
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
}

/// Connected components of the symmetrised graph.
pub fn pi0_graph(g: &FiniteGraph) -> Partition {
    components(&g.nodes, g.ends.iter().map(|[s, t]| (*s, *t)))
}

pub(crate) fn components(labels: &[String], links: impl Iterator<Item = (usize, usize)>) -> Partition {
    let mut uf = UnionFind::<usize>::new(labels.len());
    for (a, b) in links {
        uf.union(a, b);
    }
    let mut blocks: BTreeMap<usize, Vec<String>> = BTreeMap::new();
    for (i, label) in labels.iter().enumerate() {
        blocks.entry(uf.find(i)).or_default().push(label.clone());
    }
    let mut out: Partition = blocks.into_values().collect();
    for b in &mut out {
        b.sort();
    }
    out.sort();
    out
}

/// Block index of every element of `labels` in `partition`.
pub fn block_of(partition: &Partition) -> BTreeMap<String, usize> {
    partition
        .iter()
        .enumerate()
        .flat_map(|(b, block)| block.iter().map(move |x| (x.clone(), b)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;

    fn dag() -> FiniteGraph {
        FiniteGraph::new(["A", "B", "C"], [("f", "A", "B"), ("g", "B", "C"), ("h", "A", "C")]).unwrap()
    }

    #[test]
    fn rejects_dangling_edges_and_duplicates() {
        assert!(matches!(
            FiniteGraph::new(["a"], [("e", "a", "b")]),
            Err(Error::UnknownId { .. })
        ));
        assert!(matches!(
            FiniteGraph::new(["a", "a"], Vec::<(&str, &str, &str)>::new()),
            Err(Error::DuplicateId { .. })
        ));
    }

    #[test]
    fn pi0_examples() {
        assert_eq!(pi0_graph(&FiniteGraph::discrete(2)).len(), 2);
        assert_eq!(pi0_graph(&FiniteGraph::point()).len(), 1);
        assert_eq!(pi0_graph(&dag()).len(), 1);
        assert!(pi0_graph(&FiniteGraph::empty()).is_empty());
    }

    #[test]
    fn cycle_detection() {
        assert!(!dag().has_directed_cycle());
        assert!(FiniteGraph::terminal().has_directed_cycle());
        let two_cycle = FiniteGraph::new(["a", "b"], [("x", "a", "b"), ("y", "b", "a")]).unwrap();
        assert!(two_cycle.has_directed_cycle());
    }
}
