//! Independent brute-force ground truth at desk scale: exhaustive
//! maximization of rainbow-free star families, exhaustive confirmation of
//! the tree threshold in both directions, saturation sweeps, and canonical
//! forms for enumeration up to symmetry.

use crate::extremal::{
    construct_tree_family, decompose_params, star_bound, tree_bound, ExtremalError, TreeKind,
};
use crate::model::{AuxDigraph, Graph, GraphCollection, ModelError, StarGraph};
use crate::rainbow_star::find_rainbow_star;
use crate::rainbow_tree::{has_rainbow_tree_of_order, TreeError, DEFAULT_NODE_BUDGET};
use std::collections::{BTreeSet, HashSet};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum OracleError {
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Extremal(#[from] ExtremalError),
    #[error(transparent)]
    Tree(#[from] TreeError),
    #[error("vertex count {0} exceeds the exact canonicalization limit of 12")]
    TooManyVertices(usize),
    #[error("canonicalization size limit exceeded ({0} candidate relabelings)")]
    SizeLimit(u64),
    #[error("vertex count {0} exceeds the oracle search limit of 8")]
    SearchTooLarge(usize),
    #[error("precondition violated: {0}")]
    Precondition(String),
}

/// Whether canonicalization quotients by vertex relabeling alone, or by
/// vertex relabeling together with color (position) permutation.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum CanonMode {
    Vertices,
    VerticesAndColors,
}

/// A total-order key invariant under the chosen symmetry group: equal keys
/// exactly for collections related by a permutation of that group.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct CanonicalForm {
    vertex_count: usize,
    mode: CanonMode,
    key: Vec<Vec<(usize, usize)>>,
}

const PERM_LIMIT: u64 = 5_000_000;

fn encode_under(
    collection: &GraphCollection,
    perm: &[usize],
    mode: CanonMode,
) -> Vec<Vec<(usize, usize)>> {
    let mut key: Vec<Vec<(usize, usize)>> = collection
        .graphs()
        .iter()
        .map(|g| {
            let mut edges: Vec<(usize, usize)> = g
                .edges()
                .iter()
                .map(|e| {
                    let (a, b) = (perm[e.u()], perm[e.v()]);
                    if a < b {
                        (a, b)
                    } else {
                        (b, a)
                    }
                })
                .collect();
            edges.sort_unstable();
            edges
        })
        .collect();
    if mode == CanonMode::VerticesAndColors {
        key.sort_unstable();
    }
    key
}

/// Enumerates the permutations that respect the invariant classes (classes
/// ordered by invariant value, images assigned block by block), calling `f`
/// on each.
fn for_each_class_permutation(classes: &[Vec<usize>], n: usize, mut f: impl FnMut(&[usize])) {
    fn go(
        classes: &[Vec<usize>],
        class_index: usize,
        offset: usize,
        perm: &mut Vec<usize>,
        used: &mut Vec<bool>,
        f: &mut impl FnMut(&[usize]),
    ) {
        if class_index == classes.len() {
            f(perm);
            return;
        }
        let class = &classes[class_index];
        // Assign images offset..offset+len to the class members in every
        // order.
        fn assign(
            class: &[usize],
            slot: usize,
            offset: usize,
            perm: &mut Vec<usize>,
            used: &mut Vec<bool>,
            rest: &mut dyn FnMut(&mut Vec<usize>, &mut Vec<bool>),
        ) {
            if slot == class.len() {
                rest(perm, used);
                return;
            }
            for image in offset..offset + class.len() {
                if used[image] {
                    continue;
                }
                used[image] = true;
                perm[class[slot]] = image;
                assign(class, slot + 1, offset, perm, used, rest);
                used[image] = false;
            }
        }
        let next_offset = offset + class.len();
        assign(
            class,
            0,
            offset,
            perm,
            used,
            &mut |perm: &mut Vec<usize>, used: &mut Vec<bool>| {
                go(classes, class_index + 1, next_offset, perm, used, f);
            },
        );
    }
    let mut perm = vec![0; n];
    let mut used = vec![false; n];
    go(classes, 0, 0, &mut perm, &mut used, &mut f);
}

fn factorial_product(classes: &[Vec<usize>]) -> u64 {
    let mut product: u64 = 1;
    for c in classes {
        for k in 1..=c.len() as u64 {
            product = product.saturating_mul(k);
        }
    }
    product
}

/// Exact canonical form by minimizing the encoding over all relabelings that
/// respect per-vertex degree invariants (any isomorphism does). Intended for
/// desk-scale inputs; errors above 12 vertices or past the relabeling
/// budget.
pub fn canonical_form(
    collection: &GraphCollection,
    mode: CanonMode,
) -> Result<CanonicalForm, OracleError> {
    let n = collection.vertex_count();
    if n > 12 {
        return Err(OracleError::TooManyVertices(n));
    }
    // Invariant per vertex: the color-indexed degree vector, or its sorted
    // multiset when colors may be permuted.
    let invariant = |v: usize| -> Vec<usize> {
        let mut degrees: Vec<usize> = collection.graphs().iter().map(|g| g.degree_of(v)).collect();
        if mode == CanonMode::VerticesAndColors {
            degrees.sort_unstable();
        }
        degrees
    };
    let mut by_invariant: std::collections::BTreeMap<Vec<usize>, Vec<usize>> =
        std::collections::BTreeMap::new();
    for v in 0..n {
        by_invariant.entry(invariant(v)).or_default().push(v);
    }
    let classes: Vec<Vec<usize>> = by_invariant.into_values().collect();
    let candidates = factorial_product(&classes);
    if candidates > PERM_LIMIT {
        return Err(OracleError::SizeLimit(candidates));
    }

    let mut best: Option<Vec<Vec<(usize, usize)>>> = None;
    for_each_class_permutation(&classes, n, |perm| {
        let key = encode_under(collection, perm, mode);
        if best.as_ref().is_none_or(|b| key < *b) {
            best = Some(key);
        }
    });
    Ok(CanonicalForm {
        vertex_count: n,
        mode,
        key: best.expect("at least the identity relabeling"),
    })
}

/// All K_{1,delta} stars on n labeled vertices, ordered by (center, leaves).
pub fn all_stars(n: usize, delta: usize) -> Vec<StarGraph> {
    let mut out = Vec::new();
    for center in 0..n {
        let others: Vec<usize> = (0..n).filter(|&v| v != center).collect();
        for leaves in combinations(&others, delta) {
            out.push(StarGraph::new(center, leaves.into_iter().collect()).expect("valid star"));
        }
    }
    out
}

/// k-subsets of `items` in lexicographic order.
fn combinations(items: &[usize], k: usize) -> Vec<Vec<usize>> {
    fn go(
        items: &[usize],
        k: usize,
        start: usize,
        cur: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        let needed = k - cur.len();
        for i in start..=items.len().saturating_sub(needed) {
            cur.push(items[i]);
            go(items, k, i + 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if k <= items.len() {
        go(items, k, 0, &mut Vec::new(), &mut out);
    }
    out
}

/// Tunable search options; disabling prunes must not change the reported
/// maximum (tested at tiny scale).
#[derive(Clone, Copy, Debug)]
pub struct OracleOptions {
    pub budget: u64,
    /// Skip extensions violating the per-center capacity bound
    /// |S_u| <= Δ - d_u - 1 before running the matching detector.
    pub capacity_prune: bool,
    /// Stop descending when n(Δ-1) - |C|Δ cannot beat the best size found.
    pub cap_prune: bool,
    /// Explore only multisets that are lexicographically minimal in their
    /// relabeling orbit.
    pub orbit_prune: bool,
    /// Cap star repetitions at Δ-1 (Δ identical copies of a star already
    /// contain a rainbow copy: match copy i to leaf i).
    pub repetition_cap: bool,
}

impl Default for OracleOptions {
    fn default() -> Self {
        OracleOptions {
            budget: DEFAULT_NODE_BUDGET,
            capacity_prune: true,
            cap_prune: true,
            orbit_prune: true,
            repetition_cap: true,
        }
    }
}

/// Result of the exhaustive star-family maximization.
#[derive(Clone, Debug)]
pub struct StarMaxReport {
    pub max_size: usize,
    pub witness: GraphCollection,
    /// False when the node budget truncated the search; the maximum is then
    /// only a lower bound.
    pub complete: bool,
    pub nodes: u64,
}

/// Is the sorted star multiset lexicographically minimal in its vertex
/// relabeling orbit? Full-group minimization keeps prefix-closure sound.
fn is_lexmin_star_multiset(stars: &[&StarGraph], n: usize) -> bool {
    let encode = |stars: &[(usize, Vec<usize>)]| -> Vec<(usize, Vec<usize>)> {
        let mut v = stars.to_vec();
        v.sort();
        v
    };
    let own: Vec<(usize, Vec<usize>)> = stars
        .iter()
        .map(|s| (s.center(), s.leaves().iter().copied().collect()))
        .collect();
    let own_key = encode(&own);
    let mut perm: Vec<usize> = (0..n).collect();
    loop {
        let mapped: Vec<(usize, Vec<usize>)> = stars
            .iter()
            .map(|s| {
                let mut leaves: Vec<usize> = s.leaves().iter().map(|&l| perm[l]).collect();
                leaves.sort_unstable();
                (perm[s.center()], leaves)
            })
            .collect();
        if encode(&mapped) < own_key {
            return false;
        }
        if !next_permutation(&mut perm) {
            return true;
        }
    }
}

fn next_permutation(perm: &mut [usize]) -> bool {
    let n = perm.len();
    if n < 2 {
        return false;
    }
    let mut i = n - 1;
    while i > 0 && perm[i - 1] >= perm[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = n - 1;
    while perm[j] <= perm[i - 1] {
        j -= 1;
    }
    perm.swap(i - 1, j);
    perm[i..].reverse();
    true
}

/// Exhaustive maximum size of a rainbow-K_{1,Δ}-free multiset of K_{1,Δ}
/// stars on n labeled vertices, by depth-first search over sorted star
/// multisets. Budget exhaustion yields an incomplete report carrying the
/// best lower bound found, never an error.
pub fn oracle_star_max(
    n: usize,
    delta: usize,
    options: OracleOptions,
) -> Result<StarMaxReport, OracleError> {
    decompose_params(n, delta)?;
    if n > 8 {
        return Err(OracleError::SearchTooLarge(n));
    }
    let stars = all_stars(n, delta);

    struct Search<'a> {
        stars: &'a [StarGraph],
        n: usize,
        delta: usize,
        options: OracleOptions,
        nodes: u64,
        complete: bool,
        best: Vec<usize>,
        chosen: Vec<usize>,
    }

    impl Search<'_> {
        fn collection(&self, indices: &[usize]) -> GraphCollection {
            GraphCollection::new(
                self.n,
                indices.iter().map(|&i| self.stars[i].to_graph()).collect(),
            )
            .expect("stars are valid graphs")
        }

        fn dfs(&mut self, start: usize) {
            self.nodes += 1;
            if self.nodes > self.options.budget {
                self.complete = false;
                return;
            }
            if self.chosen.len() > self.best.len() {
                self.best = self.chosen.clone();
            }
            for idx in start..self.stars.len() {
                if !self.complete {
                    return;
                }
                if self.options.repetition_cap {
                    let copies = self.chosen.iter().filter(|&&i| i == idx).count();
                    if copies >= self.delta - 1 {
                        continue;
                    }
                }
                self.chosen.push(idx);
                let candidate = self.collection(&self.chosen);
                let mut viable = true;

                if self.options.capacity_prune {
                    let d = AuxDigraph::build(&candidate).expect("stars");
                    for &u in d.centers() {
                        let s_u = self
                            .chosen
                            .iter()
                            .filter(|&&i| self.stars[i].center() == u)
                            .count();
                        if s_u + d.center_in_degree(u) + 1 > self.delta {
                            viable = false;
                            break;
                        }
                    }
                }
                if viable && find_rainbow_star(&candidate, self.delta).is_some() {
                    viable = false;
                }
                if viable && self.options.orbit_prune {
                    let refs: Vec<&StarGraph> =
                        self.chosen.iter().map(|&i| &self.stars[i]).collect();
                    if !is_lexmin_star_multiset(&refs, self.n) {
                        viable = false;
                    }
                }
                if viable {
                    if self.chosen.len() > self.best.len() {
                        self.best = self.chosen.clone();
                    }
                    let descend = if self.options.cap_prune {
                        let d = AuxDigraph::build(&candidate).expect("stars");
                        let cap = self.n * (self.delta - 1) - d.centers().len() * self.delta;
                        cap > self.best.len()
                    } else {
                        true
                    };
                    if descend {
                        self.dfs(idx);
                    }
                }
                self.chosen.pop();
            }
        }
    }

    let mut search = Search {
        stars: &stars,
        n,
        delta,
        options,
        nodes: 0,
        complete: true,
        best: Vec::new(),
        chosen: Vec::new(),
    };
    search.dfs(0);

    let witness = search.collection(&search.best);
    Ok(StarMaxReport {
        max_size: search.best.len(),
        witness,
        complete: search.complete,
        nodes: search.nodes,
    })
}

/// Result of the two-direction tree threshold confirmation.
#[derive(Clone, Debug)]
pub struct TreeThresholdReport {
    pub bound: usize,
    /// The constructed extremal family has the bound size and no rainbow
    /// tree of the target order.
    pub extremal_family_free: bool,
    /// Every multiset of bound+1 labeled trees contains a rainbow tree of
    /// the target order.
    pub all_larger_contain: bool,
    pub counterexample: Option<GraphCollection>,
    pub complete: bool,
    pub multisets_checked: u64,
    pub orbits_checked: u64,
}

impl TreeThresholdReport {
    pub fn confirmed(&self) -> bool {
        self.complete && self.extremal_family_free && self.all_larger_contain
    }
}

/// All labeled trees of order `n` on m vertices: every n-subset support in
/// lexicographic order, each carrying its trees in sequence order.
pub fn all_labeled_trees(n: usize, m: usize) -> Vec<Graph> {
    let supports = combinations(&(0..m).collect::<Vec<_>>(), n);
    let mut out = Vec::new();
    for support in supports {
        if n == 2 {
            out.push(Graph::new(vec![crate::model::Edge::new(
                support[0], support[1],
            )]));
            continue;
        }
        // Every sequence over the support of length n-2 decodes to a
        // distinct labeled tree.
        let mut seq = vec![0usize; n - 2];
        loop {
            let edges = pruefer_decode_on(&seq, &support);
            out.push(Graph::new(edges));
            // Next sequence in lexicographic order.
            let mut pos = seq.len();
            loop {
                if pos == 0 {
                    break;
                }
                pos -= 1;
                if seq[pos] + 1 < n {
                    seq[pos] += 1;
                    for s in seq[pos + 1..].iter_mut() {
                        *s = 0;
                    }
                    break;
                }
                if pos == 0 {
                    seq.clear();
                }
            }
            if seq.is_empty() {
                break;
            }
            if seq.iter().all(|&s| s == 0) {
                break;
            }
        }
    }
    out
}

fn pruefer_decode_on(seq: &[usize], support: &[usize]) -> Vec<crate::model::Edge> {
    let n = seq.len() + 2;
    let mut degree = vec![1usize; n];
    for &a in seq {
        degree[a] += 1;
    }
    let mut leaves: BTreeSet<usize> = (0..n).filter(|&i| degree[i] == 1).collect();
    let mut edges = Vec::with_capacity(n - 1);
    for &a in seq {
        let u = *leaves.iter().next().expect("leaf available");
        leaves.remove(&u);
        edges.push(crate::model::Edge::new(support[u], support[a]));
        degree[a] -= 1;
        if degree[a] == 1 {
            leaves.insert(a);
        }
    }
    let mut last = leaves.into_iter();
    let u = last.next().expect("two leaves remain");
    let v = last.next().expect("two leaves remain");
    edges.push(crate::model::Edge::new(support[u], support[v]));
    edges
}

/// Confirms the tree threshold in both directions at desk scale:
/// (a) the constructed extremal family of size m(n-2)/n has no rainbow tree
/// of order n; (b) every multiset of m(n-2)/n + 1 labeled order-n trees on m
/// vertices contains one, enumerated with canonical-form deduplication.
pub fn oracle_tree_threshold(
    n: usize,
    m: usize,
    budget: u64,
) -> Result<TreeThresholdReport, OracleError> {
    let bound = tree_bound(n, m)?;
    let family = construct_tree_family(n, m, TreeKind::Path)?;
    let extremal_family_free =
        family.color_count() == bound && has_rainbow_tree_of_order(&family, n, budget)?.is_none();

    let trees = all_labeled_trees(n, m);
    let target = bound + 1;
    let seen: HashSet<CanonicalForm> = HashSet::new();
    let mut report = TreeThresholdReport {
        bound,
        extremal_family_free,
        all_larger_contain: true,
        counterexample: None,
        complete: true,
        multisets_checked: 0,
        orbits_checked: 0,
    };

    // Sorted index tuples enumerate every multiset once; the canonical set
    // collapses relabeling-equivalent multisets, sound because containment
    // of a rainbow tree is relabeling-invariant.
    struct Scan<'a> {
        trees: &'a [Graph],
        m: usize,
        n: usize,
        target: usize,
        budget: u64,
        stack: Vec<usize>,
        seen: HashSet<CanonicalForm>,
    }

    impl Scan<'_> {
        fn run(
            &mut self,
            start: usize,
            report: &mut TreeThresholdReport,
        ) -> Result<(), OracleError> {
            if report.counterexample.is_some() || !report.complete {
                return Ok(());
            }
            if self.stack.len() == self.target {
                report.multisets_checked += 1;
                if report.multisets_checked > self.budget {
                    report.complete = false;
                    return Ok(());
                }
                let collection = GraphCollection::new(
                    self.m,
                    self.stack.iter().map(|&i| self.trees[i].clone()).collect(),
                )
                .expect("trees are valid graphs");
                let canon = canonical_form(&collection, CanonMode::VerticesAndColors)?;
                if !self.seen.insert(canon) {
                    return Ok(());
                }
                report.orbits_checked += 1;
                if has_rainbow_tree_of_order(&collection, self.n, DEFAULT_NODE_BUDGET)?.is_none() {
                    report.all_larger_contain = false;
                    report.counterexample = Some(collection);
                }
                return Ok(());
            }
            for idx in start..self.trees.len() {
                self.stack.push(idx);
                self.run(idx, report)?;
                self.stack.pop();
                if report.counterexample.is_some() || !report.complete {
                    return Ok(());
                }
            }
            Ok(())
        }
    }

    let mut scan = Scan {
        trees: &trees,
        m,
        n,
        target,
        budget,
        stack: Vec::with_capacity(target),
        seen,
    };
    scan.run(0, &mut report)?;
    Ok(report)
}

/// Saturation sweep over every candidate star.
#[derive(Clone, Debug)]
pub struct SaturationReport {
    pub saturated: bool,
    pub candidates: usize,
    pub counterexamples: Vec<StarGraph>,
}

/// For a rainbow-free star family of exactly the extremal size: adding any
/// K_{1,Δ} star on the vertex set must create a rainbow K_{1,Δ}. Reports
/// counterexamples (which would refute the extremal bound).
pub fn saturation_check(
    collection: &GraphCollection,
    delta: usize,
) -> Result<SaturationReport, OracleError> {
    let n = collection.vertex_count();
    let bound = star_bound(n, delta)?;
    if collection.color_count() != bound {
        return Err(OracleError::Precondition(format!(
            "collection has {} graphs, the extremal size is {bound}",
            collection.color_count()
        )));
    }
    if find_rainbow_star(collection, delta).is_some() {
        return Err(OracleError::Precondition(
            "collection contains a rainbow star".to_string(),
        ));
    }
    let mut counterexamples = Vec::new();
    let candidates = all_stars(n, delta);
    for star in &candidates {
        let extended = collection.with_graph(star.to_graph())?;
        if find_rainbow_star(&extended, delta).is_none() {
            counterexamples.push(star.clone());
        }
    }
    Ok(SaturationReport {
        saturated: counterexamples.is_empty(),
        candidates: candidates.len(),
        counterexamples,
    })
}
