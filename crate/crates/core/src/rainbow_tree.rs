//! Rainbow trees in collections of trees: greedy maximal trees, exact
//! maximum search by branch and bound, and the phase decomposition that
//! repeatedly extracts a rainbow tree from the untouched colors on the
//! remaining vertices.
//!
//! Tie-breaking is fixed everywhere (lowest color index, then
//! lexicographically smallest edge), so every result is reproducible.

use crate::model::{ColoredEdge, Edge, GraphCollection, RainbowWitness};
use serde::Serialize;
use std::collections::BTreeSet;
use thiserror::Error;

/// Default branch-and-bound node budget for exact searches.
pub const DEFAULT_NODE_BUDGET: u64 = 10_000_000;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TreeError {
    #[error("graph {graph} is not a tree")]
    NotATree { graph: usize },
    #[error("graph {graph} has order {found}, expected {expected}")]
    MixedOrder {
        graph: usize,
        found: usize,
        expected: usize,
    },
    #[error("search budget of {budget} nodes exceeded")]
    BudgetExceeded { budget: u64 },
    #[error("no vertices available")]
    NoVerticesAvailable,
    #[error("phase index {0} out of range")]
    PhaseOutOfRange(usize),
    #[error("decomposition does not match the collection")]
    Mismatch,
    #[error("bridge edge must come from a reach color and cross the phase boundary")]
    InvalidBridge,
    #[error("extension stuck: some reach color has no boundary edge")]
    ExtensionStuck,
}

/// Validates that every graph is a tree and all orders agree; returns the
/// common order (None for an empty collection).
pub fn tree_order(collection: &GraphCollection) -> Result<Option<usize>, TreeError> {
    let mut order = None;
    for (i, g) in collection.graphs().iter().enumerate() {
        if !g.is_tree() {
            return Err(TreeError::NotATree { graph: i });
        }
        let found = g.order();
        match order {
            None => order = Some(found),
            Some(expected) if expected != found => {
                return Err(TreeError::MixedOrder {
                    graph: i,
                    found,
                    expected,
                })
            }
            _ => {}
        }
    }
    Ok(order)
}

fn sorted_edges(collection: &GraphCollection) -> Vec<Vec<Edge>> {
    collection
        .graphs()
        .iter()
        .map(|g| {
            let mut edges = g.edges().to_vec();
            edges.sort_unstable();
            edges
        })
        .collect()
}

/// Greedily grows a rainbow tree that cannot be extended by any single edge
/// of an unused, unforbidden color with exactly one endpoint in the tree.
/// Seeds with the lexicographically least edge of the lowest available
/// color; with no edges available, returns the single-vertex tree of the
/// lowest available vertex.
pub fn find_maximal_rainbow_tree(
    collection: &GraphCollection,
    forbidden_colors: &BTreeSet<usize>,
    forbidden_vertices: &BTreeSet<usize>,
) -> Result<RainbowWitness, TreeError> {
    let allowed = |v: usize| !forbidden_vertices.contains(&v);
    let lowest_vertex = collection
        .vertices()
        .find(|&v| allowed(v))
        .ok_or(TreeError::NoVerticesAvailable)?;

    let per_color = sorted_edges(collection);
    let usable_colors: Vec<usize> = (0..collection.color_count())
        .filter(|c| !forbidden_colors.contains(c))
        .collect();

    // Seed edge: lowest color owning an edge inside the allowed vertices.
    let mut tree_edges: Vec<ColoredEdge> = Vec::new();
    let mut in_tree: BTreeSet<usize> = BTreeSet::new();
    let mut used_colors: BTreeSet<usize> = BTreeSet::new();
    'seed: for &c in &usable_colors {
        for &e in &per_color[c] {
            if allowed(e.u()) && allowed(e.v()) {
                tree_edges.push(ColoredEdge { edge: e, color: c });
                in_tree.insert(e.u());
                in_tree.insert(e.v());
                used_colors.insert(c);
                break 'seed;
            }
        }
    }
    if tree_edges.is_empty() {
        return Ok(RainbowWitness::singleton(lowest_vertex));
    }

    loop {
        let mut extension = None;
        'scan: for &c in &usable_colors {
            if used_colors.contains(&c) {
                continue;
            }
            for &e in &per_color[c] {
                let u_in = in_tree.contains(&e.u());
                let v_in = in_tree.contains(&e.v());
                if u_in != v_in {
                    let outside = if u_in { e.v() } else { e.u() };
                    if allowed(outside) {
                        extension = Some(ColoredEdge { edge: e, color: c });
                        break 'scan;
                    }
                }
            }
        }
        match extension {
            Some(ce) => {
                in_tree.insert(ce.edge.u());
                in_tree.insert(ce.edge.v());
                used_colors.insert(ce.color);
                tree_edges.push(ce);
            }
            None => break,
        }
    }
    Ok(RainbowWitness::tree(tree_edges))
}

struct MaxTreeSearch<'a> {
    per_color: &'a [Vec<Edge>],
    usable_color: Vec<bool>,
    allowed_vertex: Vec<bool>,
    limit: usize,
    budget: u64,
    nodes: u64,
    min_vertex: usize,
    in_tree: Vec<bool>,
    tree_order: usize,
    used_color: Vec<bool>,
    unused_colors: usize,
    allowed_remaining: usize,
    tree_edges: Vec<ColoredEdge>,
    banned: BTreeSet<(usize, Edge)>,
    best_edges: Vec<ColoredEdge>,
    best_order: usize,
    best_root: usize,
    done: bool,
}

impl<'a> MaxTreeSearch<'a> {
    /// First extension candidate in tie-break order: lowest unused color,
    /// then lexicographically smallest edge with exactly one endpoint in the
    /// tree, the other allowed, at least `min_vertex`, and not banned.
    fn next_candidate(&self) -> Option<(usize, Edge)> {
        for (c, edges) in self.per_color.iter().enumerate() {
            if !self.usable_color[c] || self.used_color[c] {
                continue;
            }
            for &e in edges {
                let u_in = self.in_tree[e.u()];
                let v_in = self.in_tree[e.v()];
                if u_in == v_in {
                    continue;
                }
                let outside = if u_in { e.v() } else { e.u() };
                if outside < self.min_vertex || !self.allowed_vertex[outside] {
                    continue;
                }
                if self.banned.contains(&(c, e)) {
                    continue;
                }
                return Some((c, e));
            }
        }
        None
    }

    fn dfs(&mut self) -> Result<(), TreeError> {
        self.nodes += 1;
        if self.nodes > self.budget {
            return Err(TreeError::BudgetExceeded {
                budget: self.budget,
            });
        }
        if self.tree_order > self.best_order {
            self.best_order = self.tree_order;
            self.best_edges = self.tree_edges.clone();
            self.best_root = self.min_vertex;
            if self.best_order >= self.limit {
                self.done = true;
            }
        }
        if self.done {
            return Ok(());
        }
        // Each further edge adds one vertex, so unused colors and untouched
        // allowed vertices both cap the attainable order.
        let upper = self.tree_order + self.unused_colors.min(self.allowed_remaining);
        if upper <= self.best_order {
            return Ok(());
        }
        let Some((c, e)) = self.next_candidate() else {
            return Ok(());
        };

        // Include the candidate.
        let outside = if self.in_tree[e.u()] { e.v() } else { e.u() };
        self.in_tree[outside] = true;
        self.tree_order += 1;
        self.used_color[c] = true;
        self.unused_colors -= 1;
        self.allowed_remaining -= 1;
        self.tree_edges.push(ColoredEdge { edge: e, color: c });
        self.dfs()?;
        self.tree_edges.pop();
        self.allowed_remaining += 1;
        self.unused_colors += 1;
        self.used_color[c] = false;
        self.tree_order -= 1;
        self.in_tree[outside] = false;
        if self.done {
            return Ok(());
        }

        // Exclude it for the rest of this branch.
        self.banned.insert((c, e));
        self.dfs()?;
        self.banned.remove(&(c, e));
        Ok(())
    }
}

/// Exact maximum rainbow tree, avoiding the forbidden colors and vertices,
/// with early exit once `limit_order` is reached. The greedy maximal tree
/// seeds the search as a lower bound; ties are resolved by discovery order
/// (roots ascending, then lowest color, then smallest edge).
pub fn find_max_rainbow_tree_avoiding(
    collection: &GraphCollection,
    forbidden_colors: &BTreeSet<usize>,
    forbidden_vertices: &BTreeSet<usize>,
    limit_order: usize,
    node_budget: u64,
) -> Result<RainbowWitness, TreeError> {
    let greedy = find_maximal_rainbow_tree(collection, forbidden_colors, forbidden_vertices)?;
    if greedy.order() >= limit_order {
        return Ok(greedy);
    }

    let n = collection.vertex_count();
    let per_color = sorted_edges(collection);
    let usable_color: Vec<bool> = (0..collection.color_count())
        .map(|c| !forbidden_colors.contains(&c))
        .collect();
    let allowed_vertex: Vec<bool> = (0..n).map(|v| !forbidden_vertices.contains(&v)).collect();
    let usable_count = usable_color.iter().filter(|&&b| b).count();

    let mut search = MaxTreeSearch {
        per_color: &per_color,
        usable_color,
        allowed_vertex,
        limit: limit_order,
        budget: node_budget,
        nodes: 0,
        min_vertex: 0,
        in_tree: vec![false; n],
        tree_order: 0,
        used_color: vec![false; collection.color_count()],
        unused_colors: 0,
        allowed_remaining: 0,
        tree_edges: Vec::new(),
        banned: BTreeSet::new(),
        best_edges: greedy.edges.clone(),
        best_order: greedy.order(),
        best_root: greedy.vertex_set().first().copied().unwrap_or(0),
        done: false,
    };

    for root in 0..n {
        if search.done {
            break;
        }
        if !search.allowed_vertex[root] {
            continue;
        }
        let allowed_ge_root = (root..n).filter(|&v| search.allowed_vertex[v]).count();
        search.min_vertex = root;
        search.in_tree[root] = true;
        search.tree_order = 1;
        search.unused_colors = usable_count;
        search.allowed_remaining = allowed_ge_root - 1;
        search.tree_edges.clear();
        search.banned.clear();
        search.dfs()?;
        search.in_tree[root] = false;
    }

    if search.best_edges.is_empty() {
        Ok(RainbowWitness::singleton(search.best_root))
    } else {
        Ok(RainbowWitness::tree(search.best_edges))
    }
}

/// Exact maximum rainbow tree over the whole collection. Desk-scale only:
/// past roughly 16 vertices or 14 colors expect the node budget to bite.
pub fn find_max_rainbow_tree(
    collection: &GraphCollection,
    limit_order: usize,
    node_budget: u64,
) -> Result<RainbowWitness, TreeError> {
    find_max_rainbow_tree_avoiding(
        collection,
        &BTreeSet::new(),
        &BTreeSet::new(),
        limit_order,
        node_budget,
    )
}

/// Removes leaves (largest vertex first) until the tree has exactly `order`
/// vertices; any connected rainbow subtree of a rainbow tree stays rainbow.
fn trim_to_order(witness: RainbowWitness, order: usize) -> RainbowWitness {
    let mut edges = witness.edges;
    while edges.len() + 1 > order && !edges.is_empty() {
        let mut degree: std::collections::BTreeMap<usize, usize> =
            std::collections::BTreeMap::new();
        for ce in &edges {
            *degree.entry(ce.edge.u()).or_insert(0) += 1;
            *degree.entry(ce.edge.v()).or_insert(0) += 1;
        }
        let drop_leaf = degree
            .iter()
            .filter(|&(_, &d)| d == 1)
            .map(|(&v, _)| v)
            .max()
            .expect("a tree with edges has leaves");
        edges.retain(|ce| !ce.edge.touches(drop_leaf));
    }
    if edges.is_empty() {
        RainbowWitness::singleton(witness.center.unwrap_or(0))
    } else {
        RainbowWitness::tree(edges)
    }
}

/// Does the collection contain a rainbow tree of the given order? Returns a
/// witness of exactly that order when it does.
pub fn has_rainbow_tree_of_order(
    collection: &GraphCollection,
    order: usize,
    node_budget: u64,
) -> Result<Option<RainbowWitness>, TreeError> {
    if order <= 1 {
        return Ok(Some(RainbowWitness::singleton(0)));
    }
    let best = find_max_rainbow_tree(collection, order, node_budget)?;
    if best.order() >= order {
        Ok(Some(trim_to_order(best, order)))
    } else {
        Ok(None)
    }
}

/// Decomposition strategy: the exact maximum rainbow tree per phase, or the
/// greedy maximal one.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Strategy {
    Exact,
    Greedy,
}

/// One phase: the extracted rainbow tree, its vertex set, and the colors
/// donating its edges.
#[derive(Clone, Debug, Serialize)]
pub struct Phase {
    pub tree: RainbowWitness,
    pub vertices: BTreeSet<usize>,
    pub colors: BTreeSet<usize>,
}

/// The full phase sequence. Phase vertex sets partition the vertex set;
/// phase color sets are pairwise disjoint with |colors| = |vertices| - 1.
/// When the collection has no rainbow tree of the common order, every color
/// is assigned to some phase; in general a color whose usable edges are
/// exhausted by earlier phases can stay unassigned.
#[derive(Clone, Debug, Serialize)]
pub struct Decomposition {
    pub strategy: Strategy,
    pub phases: Vec<Phase>,
    pub vertex_count: usize,
    pub color_count: usize,
}

impl Decomposition {
    /// s: the number of phases.
    pub fn phase_count(&self) -> usize {
        self.phases.len()
    }

    pub fn assigned_color_count(&self) -> usize {
        self.phases.iter().map(|p| p.colors.len()).sum()
    }

    pub fn unassigned_colors(&self) -> Vec<usize> {
        let assigned: BTreeSet<usize> = self
            .phases
            .iter()
            .flat_map(|p| p.colors.iter().copied())
            .collect();
        (0..self.color_count)
            .filter(|c| !assigned.contains(c))
            .collect()
    }
}

/// Runs the phase decomposition: repeatedly extract a maximum (exact) or
/// maximal (greedy) rainbow tree among the untouched colors on the remaining
/// vertices; with no extractable edge the phase is the lowest remaining
/// vertex alone.
pub fn decompose(
    collection: &GraphCollection,
    strategy: Strategy,
    node_budget: u64,
) -> Result<Decomposition, TreeError> {
    tree_order(collection)?;
    let mut used_vertices: BTreeSet<usize> = BTreeSet::new();
    let mut touched_colors: BTreeSet<usize> = BTreeSet::new();
    let mut phases = Vec::new();
    while used_vertices.len() < collection.vertex_count() {
        let remaining = collection.vertex_count() - used_vertices.len();
        let tree = match strategy {
            Strategy::Greedy => {
                find_maximal_rainbow_tree(collection, &touched_colors, &used_vertices)?
            }
            Strategy::Exact => find_max_rainbow_tree_avoiding(
                collection,
                &touched_colors,
                &used_vertices,
                remaining,
                node_budget,
            )?,
        };
        let tree = if tree.order() <= 1 {
            let lowest = collection
                .vertices()
                .find(|v| !used_vertices.contains(v))
                .expect("vertices remain");
            RainbowWitness::singleton(lowest)
        } else {
            tree
        };
        let vertices = tree.vertex_set();
        let colors = tree.colors();
        used_vertices.extend(vertices.iter().copied());
        touched_colors.extend(colors.iter().copied());
        phases.push(Phase {
            tree,
            vertices,
            colors,
        });
    }
    Ok(Decomposition {
        strategy,
        phases,
        vertex_count: collection.vertex_count(),
        color_count: collection.color_count(),
    })
}

/// Colors of earlier phases whose tree touches this phase's vertex set.
#[derive(Clone, Debug, Serialize)]
pub struct RSet {
    pub colors: BTreeSet<usize>,
}

impl RSet {
    /// r_i.
    pub fn r(&self) -> usize {
        self.colors.len()
    }
}

/// Per-phase reach sets, aligned with the phases (the first entry is always
/// empty: no earlier phases exist).
pub fn reach_sets(
    decomposition: &Decomposition,
    collection: &GraphCollection,
) -> Result<Vec<RSet>, TreeError> {
    if decomposition.vertex_count != collection.vertex_count()
        || decomposition.color_count != collection.color_count()
    {
        return Err(TreeError::Mismatch);
    }
    let supports: Vec<BTreeSet<usize>> =
        collection.graphs().iter().map(|g| g.vertex_set()).collect();
    let mut out = Vec::with_capacity(decomposition.phases.len());
    let mut earlier: BTreeSet<usize> = BTreeSet::new();
    for phase in &decomposition.phases {
        let colors = earlier
            .iter()
            .copied()
            .filter(|&j| supports[j].intersection(&phase.vertices).next().is_some())
            .collect();
        out.push(RSet { colors });
        earlier.extend(phase.colors.iter().copied());
    }
    Ok(out)
}

/// Grows the phase tree through a bridging edge and then one boundary edge
/// from each remaining reach color, producing a rainbow tree of order
/// |U_i| + r_i. The bridge must belong to a reach color and have exactly one
/// endpoint in the phase's vertex set.
pub fn extend_through_reach(
    decomposition: &Decomposition,
    collection: &GraphCollection,
    phase_index: usize,
    bridge: ColoredEdge,
) -> Result<RainbowWitness, TreeError> {
    if phase_index >= decomposition.phases.len() {
        return Err(TreeError::PhaseOutOfRange(phase_index));
    }
    let reach = reach_sets(decomposition, collection)?;
    let phase = &decomposition.phases[phase_index];
    let r_set = &reach[phase_index];

    let in_phase = |v: usize| phase.vertices.contains(&v);
    let valid_bridge = r_set.colors.contains(&bridge.color)
        && collection.graph(bridge.color).contains_edge(bridge.edge)
        && (in_phase(bridge.edge.u()) != in_phase(bridge.edge.v()));
    if !valid_bridge {
        return Err(TreeError::InvalidBridge);
    }

    let mut edges = phase.tree.edges.clone();
    let mut vertices = phase.vertices.clone();
    edges.push(bridge);
    vertices.insert(bridge.edge.u());
    vertices.insert(bridge.edge.v());

    for &c in r_set.colors.iter().filter(|&&c| c != bridge.color) {
        let mut sorted = collection.graph(c).edges().to_vec();
        sorted.sort_unstable();
        let step = sorted
            .into_iter()
            .find(|e| vertices.contains(&e.u()) != vertices.contains(&e.v()));
        match step {
            Some(e) => {
                vertices.insert(e.u());
                vertices.insert(e.v());
                edges.push(ColoredEdge { edge: e, color: c });
            }
            None => return Err(TreeError::ExtensionStuck),
        }
    }
    Ok(RainbowWitness::tree(edges))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::extremal::{construct_tree_family, TreeKind};
    use crate::model::Graph;

    fn path(vs: &[usize]) -> Graph {
        Graph::new(vs.windows(2).map(|w| Edge::new(w[0], w[1])).collect())
    }

    fn no_exclusions() -> (BTreeSet<usize>, BTreeSet<usize>) {
        (BTreeSet::new(), BTreeSet::new())
    }

    /// Exhaustive maximum rainbow tree order: every rainbow forest is
    /// enumerated (one optional edge per color, acyclic), and connected ones
    /// are measured.
    fn brute_force_max_order(collection: &GraphCollection) -> usize {
        fn is_single_component(edges: &[Edge]) -> bool {
            if edges.is_empty() {
                return false;
            }
            let vertices: BTreeSet<usize> = edges.iter().flat_map(|e| [e.u(), e.v()]).collect();
            let mut uf = crate::model::UnionFind::from_keys(&vertices);
            for e in edges {
                uf.union(e.u(), e.v());
            }
            let root = uf.find(*vertices.iter().next().unwrap());
            let all: Vec<usize> = vertices.iter().copied().collect();
            all.into_iter().all(|v| uf.find(v) == root)
        }
        fn go(
            collection: &GraphCollection,
            color: usize,
            chosen: &mut Vec<Edge>,
            best: &mut usize,
        ) {
            if color == collection.color_count() {
                if is_single_component(chosen) {
                    *best = (*best).max(chosen.len() + 1);
                }
                return;
            }
            go(collection, color + 1, chosen, best);
            for &e in collection.graph(color).edges() {
                // Keep only acyclic selections.
                let vertices: BTreeSet<usize> = chosen
                    .iter()
                    .chain(std::iter::once(&e))
                    .flat_map(|e| [e.u(), e.v()])
                    .collect();
                let mut uf = crate::model::UnionFind::from_keys(&vertices);
                let mut acyclic = true;
                for d in chosen.iter().chain(std::iter::once(&e)) {
                    if !uf.union(d.u(), d.v()) {
                        acyclic = false;
                        break;
                    }
                }
                if acyclic {
                    chosen.push(e);
                    go(collection, color + 1, chosen, best);
                    chosen.pop();
                }
            }
        }
        let mut best = 1;
        go(collection, 0, &mut Vec::new(), &mut best);
        best
    }

    #[test]
    fn single_tree_yields_an_order_two_maximal_tree() {
        let c = GraphCollection::new(4, vec![path(&[0, 1, 2, 3])]).unwrap();
        let (fc, fv) = no_exclusions();
        let t = find_maximal_rainbow_tree(&c, &fc, &fv).unwrap();
        assert_eq!(t.order(), 2);
        t.validate(&c).unwrap();
    }

    #[test]
    fn distinct_triangle_paths_reach_order_three() {
        let paths = [path(&[0, 1, 2]), path(&[1, 0, 2]), path(&[0, 2, 1])];
        let (fc, fv) = no_exclusions();
        for (i, a) in paths.iter().enumerate() {
            for (j, b) in paths.iter().enumerate() {
                if i == j {
                    continue;
                }
                let c = GraphCollection::new(3, vec![a.clone(), b.clone()]).unwrap();
                let t = find_maximal_rainbow_tree(&c, &fc, &fv).unwrap();
                assert_eq!(t.order(), 3, "pair ({i}, {j})");
                t.validate(&c).unwrap();
            }
        }
    }

    #[test]
    fn extremal_member_greedy_tree_stops_at_order_three() {
        let c = construct_tree_family(4, 4, TreeKind::Path).unwrap();
        let (fc, fv) = no_exclusions();
        let t = find_maximal_rainbow_tree(&c, &fc, &fv).unwrap();
        assert_eq!(t.order(), 3);
    }

    #[test]
    fn maximal_tree_with_no_edges_is_the_lowest_vertex() {
        let c = GraphCollection::new(3, vec![]).unwrap();
        let (fc, fv) = no_exclusions();
        let t = find_maximal_rainbow_tree(&c, &fc, &fv).unwrap();
        assert_eq!(t.order(), 1);
        assert_eq!(t.center, Some(0));

        let mut forbidden = BTreeSet::new();
        forbidden.insert(0);
        let t = find_maximal_rainbow_tree(&c, &fc, &forbidden).unwrap();
        assert_eq!(t.center, Some(1));
    }

    #[test]
    fn exact_search_examples() {
        let one = GraphCollection::new(4, vec![path(&[0, 1, 2, 3])]).unwrap();
        let t = find_max_rainbow_tree(&one, usize::MAX, DEFAULT_NODE_BUDGET).unwrap();
        assert_eq!(t.order(), 2);

        // Two identical spanning trees: order is capped by colors + 1.
        let twice =
            GraphCollection::new(4, vec![path(&[0, 1, 2, 3]), path(&[0, 1, 2, 3])]).unwrap();
        let t = find_max_rainbow_tree(&twice, usize::MAX, DEFAULT_NODE_BUDGET).unwrap();
        assert_eq!(t.order(), 3);
        assert_eq!(brute_force_max_order(&twice), 3);

        let two = GraphCollection::new(3, vec![path(&[0, 1, 2]), path(&[1, 0, 2])]).unwrap();
        let t = find_max_rainbow_tree(&two, usize::MAX, DEFAULT_NODE_BUDGET).unwrap();
        assert_eq!(t.order(), 3);
        assert_eq!(brute_force_max_order(&two), 3);
        t.validate(&two).unwrap();
    }

    #[test]
    fn exact_matches_brute_force_at_the_desk_scale_envelope() {
        // Ten vertices, eight colors: seeded order-4 trees of mixed shape.
        let mut rng = crate::extremal::SplitMix64::new(1123);
        let mut graphs = Vec::new();
        for color in 0..8 {
            let mut support: Vec<usize> = (0..10).collect();
            for i in (1..10).rev() {
                support.swap(i, rng.below(i as u64 + 1) as usize);
            }
            support.truncate(4);
            support.sort_unstable();
            if color % 2 == 0 {
                graphs.push(path(&support));
            } else {
                let center = support[rng.below(4) as usize];
                graphs.push(Graph::new(
                    support
                        .iter()
                        .filter(|&&v| v != center)
                        .map(|&v| Edge::new(center, v))
                        .collect(),
                ));
            }
        }
        let c = GraphCollection::new(10, graphs).unwrap();
        let t = find_max_rainbow_tree(&c, usize::MAX, DEFAULT_NODE_BUDGET).unwrap();
        assert_eq!(t.order(), brute_force_max_order(&c));
        t.validate(&c).unwrap();
    }

    #[test]
    fn exact_matches_brute_force_on_small_instances() {
        let instances = vec![
            GraphCollection::new(
                5,
                vec![path(&[0, 1, 2]), path(&[2, 3, 4]), path(&[1, 3, 0])],
            )
            .unwrap(),
            GraphCollection::new(
                6,
                vec![
                    path(&[0, 2, 4]),
                    path(&[1, 3, 5]),
                    path(&[0, 5, 2]),
                    path(&[4, 1, 2]),
                ],
            )
            .unwrap(),
            construct_tree_family(3, 6, TreeKind::Star).unwrap(),
            construct_tree_family(4, 8, TreeKind::Pruefer { seed: 7 }).unwrap(),
        ];
        for c in &instances {
            let t = find_max_rainbow_tree(c, usize::MAX, DEFAULT_NODE_BUDGET).unwrap();
            assert_eq!(t.order(), brute_force_max_order(c));
            t.validate(c).unwrap();
        }
    }

    #[test]
    fn order_query_examples() {
        let member = construct_tree_family(4, 4, TreeKind::Path).unwrap();
        assert!(has_rainbow_tree_of_order(&member, 4, DEFAULT_NODE_BUDGET)
            .unwrap()
            .is_none());

        let spanning = GraphCollection::new(
            4,
            vec![
                path(&[0, 1, 2, 3]),
                path(&[1, 0, 2, 3]),
                path(&[2, 0, 3, 1]),
            ],
        )
        .unwrap();
        let w = has_rainbow_tree_of_order(&spanning, 4, DEFAULT_NODE_BUDGET)
            .unwrap()
            .expect("three distinct spanning paths span a rainbow tree");
        assert_eq!(w.order(), 4);
        w.validate(&spanning).unwrap();

        let single = GraphCollection::new(3, vec![path(&[0, 1])]).unwrap();
        let w = has_rainbow_tree_of_order(&single, 2, DEFAULT_NODE_BUDGET)
            .unwrap()
            .expect("any edge is a rainbow tree of order 2");
        assert_eq!(w.order(), 2);
    }

    #[test]
    fn decompose_extremal_two_block_family() {
        let c = construct_tree_family(4, 8, TreeKind::Path).unwrap();
        for strategy in [Strategy::Exact, Strategy::Greedy] {
            let d = decompose(&c, strategy, DEFAULT_NODE_BUDGET).unwrap();
            let mut sizes: Vec<usize> = d.phases.iter().map(|p| p.vertices.len()).collect();
            sizes.sort_unstable();
            assert_eq!(sizes, vec![1, 1, 3, 3]);
            assert_eq!(d.phase_count(), 4);
            assert_eq!(d.assigned_color_count(), 4);
            assert_eq!(d.color_count, 4);
            // t = m - s
            assert_eq!(d.color_count, d.vertex_count - d.phase_count());
        }
    }

    #[test]
    fn decompose_single_tree() {
        let m = 5;
        let c = GraphCollection::new(m, vec![path(&[0, 1, 2, 3, 4])]).unwrap();
        let d = decompose(&c, Strategy::Exact, DEFAULT_NODE_BUDGET).unwrap();
        assert_eq!(d.phase_count(), m - 1);
        assert_eq!(d.phases[0].vertices.len(), 2);
        for p in &d.phases[1..] {
            assert_eq!(p.vertices.len(), 1);
        }
        assert_eq!(d.assigned_color_count(), 1);
    }

    #[test]
    fn decompose_empty_collection() {
        let c = GraphCollection::new(4, vec![]).unwrap();
        let d = decompose(&c, Strategy::Greedy, DEFAULT_NODE_BUDGET).unwrap();
        assert_eq!(d.phase_count(), 4);
        assert!(d.phases.iter().all(|p| p.vertices.len() == 1));
        assert_eq!(d.assigned_color_count(), 0);
    }

    #[test]
    fn reach_sets_on_single_block_member() {
        let c = construct_tree_family(4, 4, TreeKind::Path).unwrap();
        let d = decompose(&c, Strategy::Exact, DEFAULT_NODE_BUDGET).unwrap();
        assert_eq!(d.phase_count(), 2);
        assert_eq!(d.phases[1].vertices.len(), 1);
        let r = reach_sets(&d, &c).unwrap();
        assert!(r[0].colors.is_empty());
        // Both spanning trees touch the leftover vertex.
        assert_eq!(r[1].r(), 2);
        assert_eq!(d.phases[1].vertices.len() + r[1].r(), 3);
    }

    #[test]
    fn reach_is_empty_across_disjoint_blocks() {
        let c = construct_tree_family(3, 6, TreeKind::Star).unwrap();
        let d = decompose(&c, Strategy::Exact, DEFAULT_NODE_BUDGET).unwrap();
        let r = reach_sets(&d, &c).unwrap();
        // The first phase that lands in the second block has no reach from
        // the first block.
        let second_block_phase = d
            .phases
            .iter()
            .position(|p| p.vertices.iter().all(|&v| v >= 3))
            .unwrap();
        if d.phases[second_block_phase].vertices.len() > 1 {
            assert_eq!(r[second_block_phase].r(), 0);
        }
    }

    #[test]
    fn extension_reaches_the_full_reach_order() {
        let c = construct_tree_family(4, 4, TreeKind::Path).unwrap();
        let d = decompose(&c, Strategy::Exact, DEFAULT_NODE_BUDGET).unwrap();
        let r = reach_sets(&d, &c).unwrap();
        let phase_index = 1;
        assert_eq!(d.phases[phase_index].vertices.len(), 1);
        let u = *d.phases[phase_index].vertices.iter().next().unwrap();
        // Any boundary edge of a reach color works as the bridge.
        let color = *r[phase_index].colors.iter().next().unwrap();
        let bridge_edge = c
            .graph(color)
            .edges()
            .iter()
            .copied()
            .find(|e| e.touches(u))
            .unwrap();
        let t = extend_through_reach(
            &d,
            &c,
            phase_index,
            ColoredEdge {
                edge: bridge_edge,
                color,
            },
        )
        .unwrap();
        assert_eq!(
            t.order(),
            d.phases[phase_index].vertices.len() + r[phase_index].r()
        );
        t.validate(&c).unwrap();
        // Equality case: order n - 1 with no unused color left to extend.
        assert_eq!(t.order(), 3);
        let used = t.colors();
        let unused: Vec<usize> = (0..c.color_count()).filter(|c| !used.contains(c)).collect();
        assert!(unused.is_empty());
    }

    #[test]
    fn single_reach_color_extends_by_the_bridge_alone() {
        // Single path: after the order-2 phase, the singleton phase has one
        // reach color, so the extension is the phase tree plus the bridge.
        let c = GraphCollection::new(3, vec![path(&[0, 1, 2])]).unwrap();
        let d = decompose(&c, Strategy::Exact, DEFAULT_NODE_BUDGET).unwrap();
        assert_eq!(d.phase_count(), 2);
        let r = reach_sets(&d, &c).unwrap();
        assert_eq!(r[1].r(), 1);
        let t = extend_through_reach(
            &d,
            &c,
            1,
            ColoredEdge {
                edge: Edge::new(1, 2),
                color: 0,
            },
        )
        .unwrap();
        assert_eq!(t.order(), 2);
        assert_eq!(t.edges.len(), 1);
        t.validate(&c).unwrap();
    }

    #[test]
    fn invalid_bridge_is_rejected() {
        let c = construct_tree_family(4, 4, TreeKind::Path).unwrap();
        let d = decompose(&c, Strategy::Exact, DEFAULT_NODE_BUDGET).unwrap();
        // An edge fully inside phase 0 is no bridge for phase 0.
        let inner = d.phases[0].tree.edges[0];
        assert_eq!(
            extend_through_reach(&d, &c, 0, inner).unwrap_err(),
            TreeError::InvalidBridge
        );
    }

    #[test]
    fn budget_exhaustion_is_an_error() {
        let c = GraphCollection::new(
            6,
            vec![
                path(&[0, 1, 2, 3, 4, 5]),
                path(&[1, 0, 2, 3, 5, 4]),
                path(&[2, 0, 3, 1, 4, 5]),
                path(&[3, 0, 1, 5, 2, 4]),
            ],
        )
        .unwrap();
        assert_eq!(
            find_max_rainbow_tree(&c, usize::MAX, 2).unwrap_err(),
            TreeError::BudgetExceeded { budget: 2 }
        );
    }

    #[test]
    fn non_tree_and_mixed_orders_are_rejected() {
        let triangle = Graph::new(vec![Edge::new(0, 1), Edge::new(1, 2), Edge::new(0, 2)]);
        let c = GraphCollection::new(3, vec![triangle]).unwrap();
        assert_eq!(
            decompose(&c, Strategy::Greedy, DEFAULT_NODE_BUDGET).unwrap_err(),
            TreeError::NotATree { graph: 0 }
        );

        let c = GraphCollection::new(4, vec![path(&[0, 1, 2]), path(&[0, 1, 2, 3])]).unwrap();
        assert_eq!(
            decompose(&c, Strategy::Greedy, DEFAULT_NODE_BUDGET).unwrap_err(),
            TreeError::MixedOrder {
                graph: 1,
                found: 4,
                expected: 3
            }
        );
    }
}
