//! Core data model: collections of graphs on a shared labeled vertex set,
//! stars, the auxiliary center/leaf digraph, and rainbow witnesses.
//!
//! A *collection* is an ordered multiset of graphs on the vertex set
//! `{0, .., vertex_count - 1}`; the position of a graph in the list is its
//! *color index*. A *rainbow* copy of a graph H is a copy of H that uses at
//! most one edge from each color class.

use serde::{Deserialize, Deserializer, Serialize};
use std::collections::BTreeSet;
use std::fmt;
use thiserror::Error;

/// Errors raised while building or validating model values.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum ModelError {
    #[error("invalid JSON: {0}")]
    Json(String),
    #[error("vertex count must be positive")]
    EmptyVertexSet,
    #[error("graph {graph}: vertex {vertex} out of range 0..{limit}")]
    InvalidVertex {
        graph: usize,
        vertex: usize,
        limit: usize,
    },
    #[error("graph {graph}: self-loop at vertex {vertex}")]
    SelfLoop { graph: usize, vertex: usize },
    #[error("graph {graph}: duplicate edge {u}-{v}")]
    DuplicateEdge { graph: usize, u: usize, v: usize },
    #[error("graph {graph}: declared center {center} is not an endpoint of every edge")]
    BadCenter { graph: usize, center: usize },
    #[error("graph {graph} is not a star")]
    NotAStar { graph: usize },
    #[error("graph {graph}: single-edge star without a designated center")]
    AmbiguousCenter { graph: usize },
    #[error("graph {graph}: single-edge stars are not supported (need at least two leaves)")]
    StarTooSmall { graph: usize },
    #[error("vertex {vertex} out of range 0..{limit}")]
    VertexOutOfRange { vertex: usize, limit: usize },
    #[error("star center {center} listed among its own leaves")]
    CenterAmongLeaves { center: usize },
    #[error("star must have at least one leaf")]
    NoLeaves,
}

/// An undirected edge between two distinct vertices, stored with the smaller
/// endpoint first.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Edge(usize, usize);

impl Edge {
    /// Builds an edge, normalizing endpoint order. Panics on a self-loop;
    /// validated construction paths reject self-loops before calling this.
    pub fn new(u: usize, v: usize) -> Self {
        assert!(u != v, "self-loop at vertex {u}");
        if u < v {
            Edge(u, v)
        } else {
            Edge(v, u)
        }
    }

    pub fn u(&self) -> usize {
        self.0
    }

    pub fn v(&self) -> usize {
        self.1
    }

    pub fn endpoints(&self) -> (usize, usize) {
        (self.0, self.1)
    }

    pub fn touches(&self, w: usize) -> bool {
        self.0 == w || self.1 == w
    }

    /// The endpoint opposite `w`, if `w` is an endpoint.
    pub fn other(&self, w: usize) -> Option<usize> {
        if self.0 == w {
            Some(self.1)
        } else if self.1 == w {
            Some(self.0)
        } else {
            None
        }
    }
}

impl fmt::Debug for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}-{}", self.0, self.1)
    }
}

impl<'de> Deserialize<'de> for Edge {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let [u, v] = <[usize; 2]>::deserialize(deserializer)?;
        if u == v {
            return Err(serde::de::Error::custom(format!("self-loop at vertex {u}")));
        }
        Ok(Edge::new(u, v))
    }
}

/// One color class: an edge list in insertion order, plus an optional
/// declared star center. The declared center matters only for single-edge
/// stars, which the star operations currently reject.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Graph {
    edges: Vec<Edge>,
    center: Option<usize>,
}

impl Graph {
    pub fn new(edges: Vec<Edge>) -> Self {
        Graph {
            edges,
            center: None,
        }
    }

    pub fn with_center(edges: Vec<Edge>, center: usize) -> Self {
        Graph {
            edges,
            center: Some(center),
        }
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn declared_center(&self) -> Option<usize> {
        self.center
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn contains_edge(&self, e: Edge) -> bool {
        self.edges.contains(&e)
    }

    /// All vertices incident to at least one edge.
    pub fn vertex_set(&self) -> BTreeSet<usize> {
        let mut s = BTreeSet::new();
        for e in &self.edges {
            s.insert(e.u());
            s.insert(e.v());
        }
        s
    }

    pub fn degree_of(&self, v: usize) -> usize {
        self.edges.iter().filter(|e| e.touches(v)).count()
    }

    /// Number of vertices spanned by the edges.
    pub fn order(&self) -> usize {
        self.vertex_set().len()
    }

    /// Interprets this graph as a star with at least two leaves.
    /// `graph_index` is the color index used in error reports.
    pub fn as_star(&self, graph_index: usize) -> Result<StarGraph, ModelError> {
        match self.edges.len() {
            0 => Err(ModelError::NotAStar { graph: graph_index }),
            1 => {
                if self.center.is_some() {
                    Err(ModelError::StarTooSmall { graph: graph_index })
                } else {
                    Err(ModelError::AmbiguousCenter { graph: graph_index })
                }
            }
            _ => {
                let (a, b) = self.edges[0].endpoints();
                let mut candidates: BTreeSet<usize> = [a, b].into_iter().collect();
                for e in &self.edges[1..] {
                    candidates.retain(|&c| e.touches(c));
                    if candidates.is_empty() {
                        return Err(ModelError::NotAStar { graph: graph_index });
                    }
                }
                // Two distinct edges share at most one vertex, so with more
                // than one edge the candidate is unique; two survivors mean
                // a duplicated edge slipped past validation.
                let center = match candidates.len() {
                    1 => *candidates.iter().next().unwrap(),
                    _ => return Err(ModelError::NotAStar { graph: graph_index }),
                };
                let leaves = self
                    .edges
                    .iter()
                    .map(|e| e.other(center).unwrap())
                    .collect();
                StarGraph::new(center, leaves)
            }
        }
    }

    /// Connected and acyclic on its own support (order = edges + 1).
    pub fn is_tree(&self) -> bool {
        if self.edges.is_empty() {
            return false;
        }
        let vertices = self.vertex_set();
        if vertices.len() != self.edges.len() + 1 {
            return false;
        }
        let mut uf = UnionFind::from_keys(&vertices);
        for e in &self.edges {
            if !uf.union(e.u(), e.v()) {
                return false;
            }
        }
        true
    }
}

/// A star: one center joined to a nonempty set of leaves.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct StarGraph {
    center: usize,
    leaves: BTreeSet<usize>,
}

impl StarGraph {
    pub fn new(center: usize, leaves: BTreeSet<usize>) -> Result<Self, ModelError> {
        if leaves.is_empty() {
            return Err(ModelError::NoLeaves);
        }
        if leaves.contains(&center) {
            return Err(ModelError::CenterAmongLeaves { center });
        }
        Ok(StarGraph { center, leaves })
    }

    pub fn center(&self) -> usize {
        self.center
    }

    pub fn leaves(&self) -> &BTreeSet<usize> {
        &self.leaves
    }

    /// Number of leaves (the Δ of a K_{1,Δ}).
    pub fn degree(&self) -> usize {
        self.leaves.len()
    }

    pub fn edges(&self) -> impl Iterator<Item = Edge> + '_ {
        self.leaves.iter().map(move |&l| Edge::new(self.center, l))
    }

    /// Edge-list form, leaves in ascending order.
    pub fn to_graph(&self) -> Graph {
        Graph::new(self.edges().collect())
    }
}

/// An ordered multiset of graphs (color classes) sharing the vertex set
/// `{0, .., vertex_count - 1}`. Duplicate graphs at different positions are
/// allowed; within one graph duplicate edges are not.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GraphCollection {
    vertex_count: usize,
    graphs: Vec<Graph>,
}

impl GraphCollection {
    pub fn new(vertex_count: usize, graphs: Vec<Graph>) -> Result<Self, ModelError> {
        if vertex_count == 0 {
            return Err(ModelError::EmptyVertexSet);
        }
        for (i, g) in graphs.iter().enumerate() {
            let mut seen = BTreeSet::new();
            for e in g.edges() {
                for w in [e.u(), e.v()] {
                    if w >= vertex_count {
                        return Err(ModelError::InvalidVertex {
                            graph: i,
                            vertex: w,
                            limit: vertex_count,
                        });
                    }
                }
                if !seen.insert(*e) {
                    return Err(ModelError::DuplicateEdge {
                        graph: i,
                        u: e.u(),
                        v: e.v(),
                    });
                }
            }
            if let Some(c) = g.declared_center() {
                if c >= vertex_count {
                    return Err(ModelError::InvalidVertex {
                        graph: i,
                        vertex: c,
                        limit: vertex_count,
                    });
                }
                if !g.edges().iter().all(|e| e.touches(c)) {
                    return Err(ModelError::BadCenter {
                        graph: i,
                        center: c,
                    });
                }
            }
        }
        Ok(GraphCollection {
            vertex_count,
            graphs,
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    /// Number of color classes.
    pub fn color_count(&self) -> usize {
        self.graphs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.graphs.is_empty()
    }

    pub fn graphs(&self) -> &[Graph] {
        &self.graphs
    }

    pub fn graph(&self, color: usize) -> &Graph {
        &self.graphs[color]
    }

    pub fn vertices(&self) -> std::ops::Range<usize> {
        0..self.vertex_count
    }

    /// A copy of this collection with one more color class appended.
    pub fn with_graph(&self, g: Graph) -> Result<Self, ModelError> {
        let mut graphs = self.graphs.clone();
        graphs.push(g);
        GraphCollection::new(self.vertex_count, graphs)
    }

    /// Colors having at least one edge at `v`, ascending.
    pub fn colors_at(&self, v: usize) -> Vec<usize> {
        (0..self.graphs.len())
            .filter(|&c| self.graphs[c].edges().iter().any(|e| e.touches(v)))
            .collect()
    }

    /// Neighbors of `v` in the given color class, ascending.
    pub fn neighbors_in(&self, color: usize, v: usize) -> Vec<usize> {
        let mut out: Vec<usize> = self.graphs[color]
            .edges()
            .iter()
            .filter_map(|e| e.other(v))
            .collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    pub fn from_json_str(s: &str) -> Result<Self, ModelError> {
        let wire: WireCollection =
            serde_json::from_str(s).map_err(|e| ModelError::Json(e.to_string()))?;
        wire.try_into()
    }

    pub fn from_json_reader<R: std::io::Read>(r: R) -> Result<Self, ModelError> {
        let wire: WireCollection =
            serde_json::from_reader(r).map_err(|e| ModelError::Json(e.to_string()))?;
        wire.try_into()
    }

    /// Compact wire-format JSON; byte-stable for a fixed collection.
    pub fn to_json_string(&self) -> String {
        serde_json::to_string(&WireCollection::from(self)).expect("wire serialization")
    }

    pub fn to_json_pretty(&self) -> String {
        serde_json::to_string_pretty(&WireCollection::from(self)).expect("wire serialization")
    }
}

/// Wire schema: `{"vertices": n, "graphs": [{"edges": [[u,v], ...]}, ...]}`
/// with `0 <= u < v < n`; the optional per-graph `"center"` field designates
/// a star center.
#[derive(Serialize, Deserialize)]
struct WireCollection {
    vertices: usize,
    graphs: Vec<WireGraph>,
}

#[derive(Serialize, Deserialize)]
struct WireGraph {
    edges: Vec<[usize; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    center: Option<usize>,
}

impl TryFrom<WireCollection> for GraphCollection {
    type Error = ModelError;

    fn try_from(wire: WireCollection) -> Result<Self, ModelError> {
        if wire.vertices == 0 {
            return Err(ModelError::EmptyVertexSet);
        }
        let mut graphs = Vec::with_capacity(wire.graphs.len());
        for (i, wg) in wire.graphs.into_iter().enumerate() {
            let mut edges = Vec::with_capacity(wg.edges.len());
            for [u, v] in wg.edges {
                if u == v {
                    return Err(ModelError::SelfLoop {
                        graph: i,
                        vertex: u,
                    });
                }
                for w in [u, v] {
                    if w >= wire.vertices {
                        return Err(ModelError::InvalidVertex {
                            graph: i,
                            vertex: w,
                            limit: wire.vertices,
                        });
                    }
                }
                edges.push(Edge::new(u, v));
            }
            let g = match wg.center {
                Some(c) => Graph::with_center(edges, c),
                None => Graph::new(edges),
            };
            graphs.push(g);
        }
        GraphCollection::new(wire.vertices, graphs)
    }
}

impl From<&GraphCollection> for WireCollection {
    fn from(c: &GraphCollection) -> Self {
        WireCollection {
            vertices: c.vertex_count,
            graphs: c
                .graphs
                .iter()
                .map(|g| WireGraph {
                    edges: g.edges().iter().map(|e| [e.u(), e.v()]).collect(),
                    center: g.declared_center(),
                })
                .collect(),
        }
    }
}

/// The auxiliary digraph of a star collection: one arc (x, y) for every edge
/// xy of a star centered at x. The centers C are the vertices carrying at
/// least one star; every arc tail lies in C, so the non-centers L induce no
/// arcs and receive no parallel arcs.
#[derive(Clone, Debug)]
pub struct AuxDigraph {
    vertex_count: usize,
    arcs: BTreeSet<(usize, usize)>,
    centers: BTreeSet<usize>,
    in_deg: Vec<usize>,
    out_deg: Vec<usize>,
}

impl AuxDigraph {
    /// Requires every graph of the collection to be a star with >= 2 leaves.
    pub fn build(collection: &GraphCollection) -> Result<Self, ModelError> {
        let n = collection.vertex_count();
        let mut arcs = BTreeSet::new();
        let mut centers = BTreeSet::new();
        for (i, g) in collection.graphs().iter().enumerate() {
            let star = g.as_star(i)?;
            centers.insert(star.center());
            for &leaf in star.leaves() {
                arcs.insert((star.center(), leaf));
            }
        }
        let mut in_deg = vec![0; n];
        let mut out_deg = vec![0; n];
        for &(x, y) in &arcs {
            out_deg[x] += 1;
            in_deg[y] += 1;
        }
        Ok(AuxDigraph {
            vertex_count: n,
            arcs,
            centers,
            in_deg,
            out_deg,
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn arcs(&self) -> &BTreeSet<(usize, usize)> {
        &self.arcs
    }

    /// C: vertices that center at least one star.
    pub fn centers(&self) -> &BTreeSet<usize> {
        &self.centers
    }

    /// L = V - C.
    pub fn leaves_set(&self) -> BTreeSet<usize> {
        (0..self.vertex_count)
            .filter(|v| !self.centers.contains(v))
            .collect()
    }

    pub fn is_center(&self, v: usize) -> bool {
        self.centers.contains(&v)
    }

    pub fn in_degree(&self, v: usize) -> usize {
        self.in_deg[v]
    }

    pub fn out_degree(&self, v: usize) -> usize {
        self.out_deg[v]
    }

    /// d_u: in-degree of a center within the center-induced subdigraph.
    /// Arc tails are always centers, so for u in C this equals the plain
    /// in-degree.
    pub fn center_in_degree(&self, u: usize) -> usize {
        debug_assert!(self.is_center(u));
        self.in_deg[u]
    }

    /// Out-degree of a center within the center-induced subdigraph.
    pub fn center_out_degree(&self, u: usize) -> usize {
        self.arcs
            .range((u, 0)..=(u, usize::MAX))
            .filter(|&&(_, y)| self.centers.contains(&y))
            .count()
    }

    /// Arcs with both endpoints in C.
    pub fn center_arcs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.arcs
            .iter()
            .copied()
            .filter(|&(x, y)| self.centers.contains(&x) && self.centers.contains(&y))
    }

    /// |A(D[C])|.
    pub fn center_arc_count(&self) -> usize {
        self.center_arcs().count()
    }
}

/// All stars of the collection centered at `u`, with multiplicity, in color
/// order. Requires every graph to be a star.
pub fn star_multiset_at(
    collection: &GraphCollection,
    u: usize,
) -> Result<Vec<StarGraph>, ModelError> {
    if u >= collection.vertex_count() {
        return Err(ModelError::VertexOutOfRange {
            vertex: u,
            limit: collection.vertex_count(),
        });
    }
    let mut out = Vec::new();
    for (i, g) in collection.graphs().iter().enumerate() {
        let star = g.as_star(i)?;
        if star.center() == u {
            out.push(star);
        }
    }
    Ok(out)
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum WitnessKind {
    Star,
    Tree,
}

/// One edge of a witness together with the color it is drawn from.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct ColoredEdge {
    pub edge: Edge,
    pub color: usize,
}

/// Errors raised when a witness fails re-validation.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum WitnessError {
    #[error("color {0} used more than once")]
    DuplicateColor(usize),
    #[error("color {0} out of range")]
    ColorOutOfRange(usize),
    #[error("edge {0}-{1} is not an edge of graph {2}")]
    EdgeNotInColor(usize, usize, usize),
    #[error("edges do not form a star centered at {0}")]
    NotAStarShape(usize),
    #[error("edges do not form a tree")]
    NotATreeShape,
    #[error("star witness is missing its center")]
    MissingCenter,
}

/// A concrete rainbow star or rainbow tree: a list of edges drawn from
/// pairwise distinct colors.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RainbowWitness {
    pub kind: WitnessKind,
    pub edges: Vec<ColoredEdge>,
    /// Star center; for trees, the sole vertex of an edgeless witness.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub center: Option<usize>,
}

impl RainbowWitness {
    pub fn star(center: usize, edges: Vec<ColoredEdge>) -> Self {
        RainbowWitness {
            kind: WitnessKind::Star,
            edges,
            center: Some(center),
        }
    }

    pub fn tree(edges: Vec<ColoredEdge>) -> Self {
        assert!(!edges.is_empty(), "edgeless trees need an anchor vertex");
        RainbowWitness {
            kind: WitnessKind::Tree,
            edges,
            center: None,
        }
    }

    /// A single-vertex tree.
    pub fn singleton(v: usize) -> Self {
        RainbowWitness {
            kind: WitnessKind::Tree,
            edges: Vec::new(),
            center: Some(v),
        }
    }

    pub fn vertex_set(&self) -> BTreeSet<usize> {
        let mut s = BTreeSet::new();
        for ce in &self.edges {
            s.insert(ce.edge.u());
            s.insert(ce.edge.v());
        }
        if let Some(c) = self.center {
            s.insert(c);
        }
        s
    }

    /// Number of vertices.
    pub fn order(&self) -> usize {
        self.vertex_set().len()
    }

    pub fn colors(&self) -> BTreeSet<usize> {
        self.edges.iter().map(|ce| ce.color).collect()
    }

    /// Leaf count of a star witness (edge count).
    pub fn leaf_count(&self) -> usize {
        self.edges.len()
    }

    /// Re-checks every witness invariant against the collection: distinct
    /// colors, each edge present in its color class, and the declared shape.
    pub fn validate(&self, collection: &GraphCollection) -> Result<(), WitnessError> {
        let mut seen = BTreeSet::new();
        for ce in &self.edges {
            if ce.color >= collection.color_count() {
                return Err(WitnessError::ColorOutOfRange(ce.color));
            }
            if !seen.insert(ce.color) {
                return Err(WitnessError::DuplicateColor(ce.color));
            }
            if !collection.graph(ce.color).contains_edge(ce.edge) {
                return Err(WitnessError::EdgeNotInColor(
                    ce.edge.u(),
                    ce.edge.v(),
                    ce.color,
                ));
            }
        }
        match self.kind {
            WitnessKind::Star => {
                let center = self.center.ok_or(WitnessError::MissingCenter)?;
                let mut leaves = BTreeSet::new();
                for ce in &self.edges {
                    match ce.edge.other(center) {
                        Some(l) => {
                            if !leaves.insert(l) {
                                return Err(WitnessError::NotAStarShape(center));
                            }
                        }
                        None => return Err(WitnessError::NotAStarShape(center)),
                    }
                }
                Ok(())
            }
            WitnessKind::Tree => {
                if self.edges.is_empty() {
                    return match self.center {
                        Some(_) => Ok(()),
                        None => Err(WitnessError::NotATreeShape),
                    };
                }
                let vertices = self.vertex_set();
                if vertices.len() != self.edges.len() + 1 {
                    return Err(WitnessError::NotATreeShape);
                }
                let mut uf = UnionFind::from_keys(&vertices);
                for ce in &self.edges {
                    if !uf.union(ce.edge.u(), ce.edge.v()) {
                        return Err(WitnessError::NotATreeShape);
                    }
                }
                Ok(())
            }
        }
    }
}

/// Union-find over sparse vertex ids, used for tree checks.
pub(crate) struct UnionFind {
    parent: std::collections::BTreeMap<usize, usize>,
}

impl UnionFind {
    pub(crate) fn from_keys(keys: &BTreeSet<usize>) -> Self {
        UnionFind {
            parent: keys.iter().map(|&k| (k, k)).collect(),
        }
    }

    pub(crate) fn find(&mut self, x: usize) -> usize {
        let p = self.parent[&x];
        if p == x {
            return x;
        }
        let root = self.find(p);
        self.parent.insert(x, root);
        root
    }

    /// Joins the two components; false if already joined (a cycle).
    pub(crate) fn union(&mut self, a: usize, b: usize) -> bool {
        let ra = self.find(a);
        let rb = self.find(b);
        if ra == rb {
            return false;
        }
        self.parent.insert(ra, rb);
        true
    }
}
