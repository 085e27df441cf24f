//! Property suites over randomized instances: detector correctness against
//! brute force, witness soundness, decomposition bookkeeping, wire-format
//! round trips, and canonicalization invariance.

use proptest::prelude::*;
use rainbow_core::extremal::{construct_tree_family, TreeKind};
use rainbow_core::model::{AuxDigraph, Edge, Graph, GraphCollection, StarGraph};
use rainbow_core::oracle::{canonical_form, CanonMode};
use rainbow_core::rainbow_star::{find_rainbow_star, max_rainbow_star_at, star_capacities};
use rainbow_core::rainbow_tree::{decompose, find_max_rainbow_tree, Strategy, DEFAULT_NODE_BUDGET};
use std::collections::BTreeSet;

/// Deterministic generator so instances are reproducible from a seed.
struct Rng(u64);

impl Rng {
    fn new(seed: u64) -> Self {
        Rng(seed.wrapping_add(0x9e3779b97f4a7c15))
    }

    fn next(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9e3779b97f4a7c15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
        z ^ (z >> 31)
    }

    fn below(&mut self, n: usize) -> usize {
        (self.next() % n as u64) as usize
    }
}

fn random_star(rng: &mut Rng, n: usize, delta: usize) -> Graph {
    let center = rng.below(n);
    let mut leaves = BTreeSet::new();
    while leaves.len() < delta {
        let v = rng.below(n);
        if v != center {
            leaves.insert(v);
        }
    }
    StarGraph::new(center, leaves).unwrap().to_graph()
}

fn random_tree(rng: &mut Rng, m: usize, order: usize) -> Graph {
    let mut support: Vec<usize> = (0..m).collect();
    for i in (1..support.len()).rev() {
        support.swap(i, rng.below(i + 1));
    }
    support.truncate(order);
    support.sort_unstable();
    if order == 2 {
        return Graph::new(vec![Edge::new(support[0], support[1])]);
    }
    // Random sequence decode: attach each leaf in increasing order.
    let seq: Vec<usize> = (0..order - 2).map(|_| rng.below(order)).collect();
    let mut degree = vec![1usize; order];
    for &a in &seq {
        degree[a] += 1;
    }
    let mut leaves: BTreeSet<usize> = (0..order).filter(|&i| degree[i] == 1).collect();
    let mut edges = Vec::new();
    for &a in &seq {
        let u = *leaves.iter().next().unwrap();
        leaves.remove(&u);
        edges.push(Edge::new(support[u], support[a]));
        degree[a] -= 1;
        if degree[a] == 1 {
            leaves.insert(a);
        }
    }
    let mut it = leaves.into_iter();
    let (u, v) = (it.next().unwrap(), it.next().unwrap());
    edges.push(Edge::new(support[u], support[v]));
    Graph::new(edges)
}

fn random_graph(rng: &mut Rng, n: usize) -> Graph {
    let mut edges = BTreeSet::new();
    let target = rng.below(2 * n).min(n * (n - 1) / 2);
    let mut attempts = 0;
    while edges.len() < target && attempts < 8 * n {
        attempts += 1;
        let u = rng.below(n);
        let v = rng.below(n);
        if u != v {
            edges.insert(Edge::new(u, v));
        }
    }
    Graph::new(edges.into_iter().collect())
}

fn random_collection(seed: u64, n: usize, colors: usize) -> GraphCollection {
    let mut rng = Rng::new(seed);
    let graphs = (0..colors).map(|_| random_graph(&mut rng, n)).collect();
    GraphCollection::new(n, graphs).unwrap()
}

/// Brute-force maximum rainbow star at v: all injective color-to-leaf maps.
fn brute_force_capacity(collection: &GraphCollection, v: usize) -> usize {
    fn go(
        collection: &GraphCollection,
        v: usize,
        colors: &[usize],
        used: &mut Vec<usize>,
    ) -> usize {
        if colors.is_empty() {
            return 0;
        }
        let rest = &colors[1..];
        let mut best = go(collection, v, rest, used);
        for w in collection.neighbors_in(colors[0], v) {
            if !used.contains(&w) {
                used.push(w);
                best = best.max(1 + go(collection, v, rest, used));
                used.pop();
            }
        }
        best
    }
    let colors = collection.colors_at(v);
    go(collection, v, &colors, &mut Vec::new())
}

/// Brute-force maximum rainbow tree order: enumerate rainbow forests, track
/// the largest connected one.
fn brute_force_max_tree_order(collection: &GraphCollection) -> usize {
    fn acyclic_and_single_component(edges: &[Edge]) -> (bool, bool) {
        if edges.is_empty() {
            return (true, false);
        }
        let vertices: BTreeSet<usize> = edges.iter().flat_map(|e| [e.u(), e.v()]).collect();
        let mut parent: std::collections::BTreeMap<usize, usize> =
            vertices.iter().map(|&v| (v, v)).collect();
        fn find(parent: &mut std::collections::BTreeMap<usize, usize>, x: usize) -> usize {
            let p = parent[&x];
            if p == x {
                return x;
            }
            let r = find(parent, p);
            parent.insert(x, r);
            r
        }
        let mut components = vertices.len();
        for e in edges {
            let (ru, rv) = (find(&mut parent, e.u()), find(&mut parent, e.v()));
            if ru == rv {
                return (false, false);
            }
            parent.insert(ru, rv);
            components -= 1;
        }
        (true, components == 1)
    }
    fn go(collection: &GraphCollection, color: usize, chosen: &mut Vec<Edge>, best: &mut usize) {
        let (acyclic, connected) = acyclic_and_single_component(chosen);
        if !acyclic {
            return;
        }
        if connected {
            *best = (*best).max(chosen.len() + 1);
        }
        if color == collection.color_count() {
            return;
        }
        go(collection, color + 1, chosen, best);
        for &e in collection.graph(color).edges() {
            chosen.push(e);
            go(collection, color + 1, chosen, best);
            chosen.pop();
        }
    }
    let mut best = 1;
    go(collection, 0, &mut Vec::new(), &mut best);
    best
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn capacity_matches_brute_force(seed in any::<u64>(), n in 2usize..7, colors in 0usize..6) {
        let c = random_collection(seed, n, colors);
        for v in c.vertices() {
            let (size, witness) = max_rainbow_star_at(&c, v).unwrap();
            prop_assert_eq!(size, brute_force_capacity(&c, v));
            if let Some(w) = witness {
                w.validate(&c).unwrap();
                prop_assert_eq!(w.leaf_count(), size);
                prop_assert_eq!(w.center, Some(v));
            } else {
                prop_assert_eq!(size, 0);
            }
        }
    }

    #[test]
    fn capacity_is_monotone_under_adding_graphs(seed in any::<u64>(), n in 2usize..7, colors in 0usize..5) {
        let c = random_collection(seed, n, colors);
        let mut rng = Rng::new(seed ^ 0xabcdef);
        let extended = c.with_graph(random_graph(&mut rng, n)).unwrap();
        let before = star_capacities(&c);
        let after = star_capacities(&extended);
        for v in 0..n {
            prop_assert!(after.capacities[v] >= before.capacities[v]);
        }
    }

    #[test]
    fn capacity_respects_its_bounds(seed in any::<u64>(), n in 2usize..7, colors in 0usize..6) {
        let c = random_collection(seed, n, colors);
        let report = star_capacities(&c);
        for v in c.vertices() {
            let touching = c.colors_at(v).len();
            prop_assert!(report.capacities[v] <= touching.min(n - 1));
        }
    }

    #[test]
    fn freeness_is_equivalent_to_capacity_below_delta(seed in any::<u64>(), n in 2usize..7, colors in 0usize..5, delta in 2usize..5) {
        let c = random_collection(seed, n, colors);
        let free = find_rainbow_star(&c, delta).is_none();
        let all_below = star_capacities(&c).capacities.iter().all(|&cap| cap < delta);
        prop_assert_eq!(free, all_below);
        if let Some(w) = find_rainbow_star(&c, delta) {
            w.validate(&c).unwrap();
            prop_assert_eq!(w.leaf_count(), delta);
        }
    }

    #[test]
    fn star_collection_out_degree_reaches_delta(seed in any::<u64>(), n_extra in 0usize..4, delta in 2usize..5, colors in 1usize..6) {
        // Stars K_{1,delta} on at least delta + 1 vertices: every center's
        // out-degree in the auxiliary digraph is at least delta.
        let n = delta + 1 + n_extra;
        let mut rng = Rng::new(seed);
        let graphs: Vec<Graph> = (0..colors).map(|_| random_star(&mut rng, n, delta)).collect();
        let c = GraphCollection::new(n, graphs).unwrap();
        let d = AuxDigraph::build(&c).unwrap();
        for &u in d.centers() {
            prop_assert!(d.out_degree(u) >= delta);
        }
        // Arc tails are centers; non-centers induce nothing.
        for &(x, _) in d.arcs() {
            prop_assert!(d.is_center(x));
        }
    }

    #[test]
    fn wire_round_trip_is_idempotent(seed in any::<u64>(), n in 1usize..8, colors in 0usize..5) {
        let c = random_collection(seed, n, colors);
        let emitted = c.to_json_string();
        let reloaded = GraphCollection::from_json_str(&emitted).unwrap();
        prop_assert_eq!(reloaded.to_json_string(), emitted);
        prop_assert_eq!(reloaded, c);
    }

    #[test]
    fn exact_tree_search_matches_brute_force(seed in any::<u64>(), m in 3usize..7, colors in 0usize..4, order in 2usize..5) {
        let order = order.min(m);
        let mut rng = Rng::new(seed);
        let graphs: Vec<Graph> = (0..colors).map(|_| random_tree(&mut rng, m, order)).collect();
        let c = GraphCollection::new(m, graphs).unwrap();
        let best = find_max_rainbow_tree(&c, usize::MAX, DEFAULT_NODE_BUDGET).unwrap();
        prop_assert_eq!(best.order(), brute_force_max_tree_order(&c));
        best.validate(&c).unwrap();
    }

    #[test]
    fn decomposition_bookkeeping_holds_for_any_tree_collection(seed in any::<u64>(), m in 2usize..9, colors in 0usize..5, order in 2usize..5) {
        let order = order.min(m);
        let mut rng = Rng::new(seed);
        let graphs: Vec<Graph> = (0..colors).map(|_| random_tree(&mut rng, m, order)).collect();
        let c = GraphCollection::new(m, graphs).unwrap();
        for strategy in [Strategy::Exact, Strategy::Greedy] {
            let d = decompose(&c, strategy, DEFAULT_NODE_BUDGET).unwrap();
            // Phase vertex sets partition the vertex set.
            let mut seen = BTreeSet::new();
            for p in &d.phases {
                for &v in &p.vertices {
                    prop_assert!(seen.insert(v), "vertex {} reused", v);
                }
                // Donated colors number exactly |U_i| - 1.
                prop_assert_eq!(p.colors.len(), p.vertices.len() - 1);
                p.tree.validate(&c).unwrap();
            }
            prop_assert_eq!(seen.len(), m);
            // Phase color sets are pairwise disjoint.
            let mut all_colors = BTreeSet::new();
            for p in &d.phases {
                for &col in &p.colors {
                    prop_assert!(all_colors.insert(col), "color {} reused", col);
                }
            }
            // Assigned colors always count m - s.
            prop_assert_eq!(d.assigned_color_count(), m - d.phase_count());
        }
    }

    #[test]
    fn canonical_form_is_relabeling_invariant(seed in any::<u64>(), n in 1usize..7, colors in 0usize..4) {
        let c = random_collection(seed, n, colors);
        // Random permutation of the vertices.
        let mut rng = Rng::new(seed ^ 0x5eed);
        let mut perm: Vec<usize> = (0..n).collect();
        for i in (1..n).rev() {
            perm.swap(i, rng.below(i + 1));
        }
        let relabeled = GraphCollection::new(
            n,
            c.graphs()
                .iter()
                .map(|g| {
                    Graph::new(
                        g.edges()
                            .iter()
                            .map(|e| Edge::new(perm[e.u()], perm[e.v()]))
                            .collect(),
                    )
                })
                .collect(),
        )
        .unwrap();
        for mode in [CanonMode::Vertices, CanonMode::VerticesAndColors] {
            prop_assert_eq!(
                canonical_form(&c, mode).unwrap(),
                canonical_form(&relabeled, mode).unwrap()
            );
        }
        // Shuffling colors is invisible only to the coarser mode.
        if c.color_count() >= 2 {
            let mut graphs = c.graphs().to_vec();
            graphs.rotate_left(1);
            let rotated = GraphCollection::new(n, graphs).unwrap();
            prop_assert_eq!(
                canonical_form(&c, CanonMode::VerticesAndColors).unwrap(),
                canonical_form(&rotated, CanonMode::VerticesAndColors).unwrap()
            );
        }
    }

    #[test]
    fn extremal_tree_families_are_free_and_reproducible(n in 3usize..5, blocks in 1usize..3, seed in any::<u64>()) {
        let m = n * blocks;
        let c = construct_tree_family(n, m, TreeKind::Pruefer { seed }).unwrap();
        let again = construct_tree_family(n, m, TreeKind::Pruefer { seed }).unwrap();
        prop_assert_eq!(&c, &again);
        prop_assert!(rainbow_core::rainbow_tree::has_rainbow_tree_of_order(&c, n, DEFAULT_NODE_BUDGET).unwrap().is_none());
    }
}
