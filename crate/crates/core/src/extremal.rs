//! Exact extremal bounds and the families attaining them.
//!
//! For stars: the maximum size of a rainbow-K_{1,Δ}-free collection of
//! K_{1,Δ} stars on n labeled vertices, with n = a(2Δ-1) + b and
//! b(Δ-1) = k1(2Δ-1) + k2 splitting the parameter space into three regimes.
//! For trees: the maximum number of order-n trees on m vertices (n | m)
//! admitting no rainbow tree of order n, which is m(n-2)/n.

use crate::model::{Edge, Graph, GraphCollection, StarGraph};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ExtremalError {
    #[error("delta must be at least 2")]
    DeltaTooSmall,
    #[error("need n >= delta + 1 (got n = {n}, delta = {delta})")]
    VertexCountTooSmall { n: usize, delta: usize },
    #[error("variant does not apply to (n, delta) = ({n}, {delta})")]
    RegimeMismatch { n: usize, delta: usize },
    #[error("tree order must be at least 2")]
    OrderTooSmall,
    #[error("tree order {n} exceeds the vertex count {m}")]
    OrderExceedsVertexCount { n: usize, m: usize },
    #[error("tree order {n} must divide the vertex count {m}")]
    IndivisibleVertexCount { n: usize, m: usize },
}

/// The parameter split of (n, Δ): n = a(2Δ-1) + b with 0 <= b <= 2Δ-2, and
/// b(Δ-1) = k1(2Δ-1) + k2 with 0 <= k2 <= 2Δ-2.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct StarParams {
    pub n: usize,
    pub delta: usize,
    pub a: usize,
    pub b: usize,
    pub k1: usize,
    pub k2: usize,
}

impl StarParams {
    /// Recomposes (n, delta); the split is a bijection.
    pub fn recompose(&self) -> (usize, usize) {
        (self.n, self.delta)
    }
}

/// Euclidean split of (n, Δ). Requires Δ >= 2 and n >= Δ + 1.
pub fn decompose_params(n: usize, delta: usize) -> Result<StarParams, ExtremalError> {
    if delta < 2 {
        return Err(ExtremalError::DeltaTooSmall);
    }
    if n < delta + 1 {
        return Err(ExtremalError::VertexCountTooSmall { n, delta });
    }
    let modulus = 2 * delta - 1;
    let a = n / modulus;
    let b = n % modulus;
    let k1 = b * (delta - 1) / modulus;
    let k2 = b * (delta - 1) % modulus;
    Ok(StarParams {
        n,
        delta,
        a,
        b,
        k1,
        k2,
    })
}

/// The maximum size of a rainbow-K_{1,Δ}-free collection of K_{1,Δ} stars on
/// n labeled vertices.
pub fn star_bound(n: usize, delta: usize) -> Result<usize, ExtremalError> {
    let p = decompose_params(n, delta)?;
    let s = delta - 1;
    Ok(if p.a == 0 {
        (n - 1) * (n - 1) / 4
    } else if p.k2 <= delta {
        p.a * s * s + p.k1 * s
    } else {
        // The two formulas agree at k2 = delta.
        p.a * s * s + p.k1 * s + p.k2 - delta
    })
}

/// Which extremal construction to build. `Auto` picks the regime from the
/// parameters; the explicit variants error on a regime mismatch.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StarVariant {
    Auto,
    Case1,
    Case2,
    /// The small regime Δ+1 <= n <= 2Δ-2. For even n the center count may be
    /// (n-2)/2 or n/2; `ceil_centers` selects the larger.
    Case3 {
        ceil_centers: bool,
    },
}

/// Vertex layout of a construction: centers first, then leaves.
/// `center(i)`/`leaf(j)` take 1-based indices and wrap around, so the
/// windowed constructions can index past the end.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CLLayout {
    pub center_count: usize,
    pub leaf_count: usize,
}

impl CLLayout {
    pub fn total(&self) -> usize {
        self.center_count + self.leaf_count
    }

    /// Vertex id of x_i (1-based, mod the center count).
    pub fn center(&self, i: usize) -> usize {
        debug_assert!(i >= 1);
        (i - 1) % self.center_count
    }

    /// Vertex id of y_j (1-based, mod the leaf count); residue 0 maps to the
    /// last leaf.
    pub fn leaf(&self, j: usize) -> usize {
        debug_assert!(j >= 1);
        self.center_count + (j - 1) % self.leaf_count
    }
}

/// Builds a rainbow-K_{1,Δ}-free family of exactly `star_bound(n, delta)`
/// stars K_{1,Δ} on n vertices.
pub fn construct_star_family(
    n: usize,
    delta: usize,
    variant: StarVariant,
) -> Result<GraphCollection, ExtremalError> {
    let p = decompose_params(n, delta)?;
    let collection = match variant {
        StarVariant::Auto => {
            if p.a == 0 {
                build_case3(&p, false)
            } else if p.k2 <= delta {
                build_case1(&p)
            } else {
                build_case2(&p)
            }
        }
        StarVariant::Case1 => {
            if p.a >= 1 && p.k2 <= delta {
                build_case1(&p)
            } else {
                return Err(ExtremalError::RegimeMismatch { n, delta });
            }
        }
        StarVariant::Case2 => {
            if p.a >= 1 && p.k2 >= delta {
                build_case2(&p)
            } else {
                return Err(ExtremalError::RegimeMismatch { n, delta });
            }
        }
        StarVariant::Case3 { ceil_centers } => {
            if p.a == 0 {
                build_case3(&p, ceil_centers)
            } else {
                return Err(ExtremalError::RegimeMismatch { n, delta });
            }
        }
    };
    let expected = star_bound(n, delta)?;
    assert_eq!(
        collection.color_count(),
        expected,
        "construction size must equal the bound"
    );
    Ok(collection)
}

fn push_copies(graphs: &mut Vec<Graph>, star: &StarGraph, copies: usize, delta: usize) {
    assert_eq!(
        star.degree(),
        delta,
        "every star must have exactly delta leaves"
    );
    for _ in 0..copies {
        graphs.push(star.to_graph());
    }
}

/// Large regime, k2 <= delta: p = a(Δ-1) + k1 centers, each carrying Δ-1
/// copies of one star whose leaves are a window of Δ consecutive leaf slots;
/// windows tile the leaf range contiguously, so leaf in-degrees differ by at
/// most one and stay below Δ.
fn build_case1(p: &StarParams) -> GraphCollection {
    let delta = p.delta;
    let centers = p.a * (delta - 1) + p.k1;
    let leaves = p.a * delta + p.b - p.k1;
    let layout = CLLayout {
        center_count: centers,
        leaf_count: leaves,
    };
    assert_eq!(layout.total(), p.n);
    let mut graphs = Vec::new();
    for i in 1..=centers {
        let window: std::collections::BTreeSet<usize> = ((i - 1) * delta + 1..=i * delta)
            .map(|j| layout.leaf(j))
            .collect();
        let star = StarGraph::new(layout.center(i), window).expect("valid star");
        push_copies(&mut graphs, &star, delta - 1, delta);
    }
    GraphCollection::new(p.n, graphs).expect("valid construction")
}

/// Large regime, k2 >= delta: p = a(Δ-1) + k1 + 1 centers. The first center
/// carries Δ-1 copies of a star whose leaves are the first k2-Δ+1 leaf slots
/// together with the centers x_2 .. x_{2Δ-k2}; those centers carry Δ-2
/// copies, the rest Δ-1. The leaf windows continue the tiling right after
/// the first star's leaf prefix, giving every leaf in-degree exactly Δ-1.
fn build_case2(p: &StarParams) -> GraphCollection {
    let delta = p.delta;
    let centers = p.a * (delta - 1) + p.k1 + 1;
    let leaves = p.a * delta + p.b - p.k1 - 1;
    let layout = CLLayout {
        center_count: centers,
        leaf_count: leaves,
    };
    assert_eq!(layout.total(), p.n);
    let arc_targets = 2 * delta - p.k2; // centers x_2 .. x_{arc_targets}
    let prefix = p.k2 - delta + 1; // leaf slots taken by the first star
    let mut graphs = Vec::new();

    let first_leaves: std::collections::BTreeSet<usize> = (1..=prefix)
        .map(|j| layout.leaf(j))
        .chain((2..=arc_targets).map(|i| layout.center(i)))
        .collect();
    let first = StarGraph::new(layout.center(1), first_leaves).expect("valid star");
    push_copies(&mut graphs, &first, delta - 1, delta);

    for i in 2..=centers {
        let start = prefix + (i - 2) * delta + 1;
        let window: std::collections::BTreeSet<usize> =
            (start..start + delta).map(|j| layout.leaf(j)).collect();
        let star = StarGraph::new(layout.center(i), window).expect("valid star");
        let copies = if i <= arc_targets {
            delta - 2
        } else {
            delta - 1
        };
        push_copies(&mut graphs, &star, copies, delta);
    }
    GraphCollection::new(p.n, graphs).expect("valid construction")
}

/// Small regime Δ+1 <= n <= 2Δ-2: every center carries q-1 copies of one
/// star whose leaves are all of L plus the next Δ-q centers cyclically.
fn build_case3(p: &StarParams, ceil_centers: bool) -> GraphCollection {
    let n = p.n;
    let delta = p.delta;
    let centers = if n.is_multiple_of(2) && ceil_centers {
        n / 2
    } else {
        (n - 1) / 2
    };
    let leaves = n - centers;
    let layout = CLLayout {
        center_count: centers,
        leaf_count: leaves,
    };
    assert!(delta >= leaves, "each star must cover all leaves");
    assert!(
        delta - leaves <= centers.saturating_sub(1),
        "cyclic center window must fit"
    );
    let mut graphs = Vec::new();
    for i in 1..=centers {
        let mut leaf_set: std::collections::BTreeSet<usize> =
            (1..=leaves).map(|j| layout.leaf(j)).collect();
        for k in i + 1..=i + (delta - leaves) {
            leaf_set.insert(layout.center(k));
        }
        let star = StarGraph::new(layout.center(i), leaf_set).expect("valid star");
        push_copies(&mut graphs, &star, leaves - 1, delta);
    }
    GraphCollection::new(n, graphs).expect("valid construction")
}

/// The maximum number of order-n trees on m vertices with no rainbow tree of
/// order n: m(n-2)/n. Requires 2 <= n <= m and n | m.
pub fn tree_bound(n: usize, m: usize) -> Result<usize, ExtremalError> {
    if n < 2 {
        return Err(ExtremalError::OrderTooSmall);
    }
    if n > m {
        return Err(ExtremalError::OrderExceedsVertexCount { n, m });
    }
    if !m.is_multiple_of(n) {
        return Err(ExtremalError::IndivisibleVertexCount { n, m });
    }
    Ok(m / n * (n - 2))
}

/// Shape of the spanning trees placed on each block.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TreeKind {
    /// The increasing path through the block.
    Path,
    /// The star centered at the block's first vertex.
    Star,
    /// Uniform random labeled spanning trees drawn from the seed;
    /// repetitions are allowed.
    Pruefer { seed: u64 },
}

/// Builds an extremal tree family: the vertex set splits into m/n blocks of
/// n consecutive ids, and each block carries n-2 spanning trees of the
/// chosen kind. For n = 2 the family is empty.
pub fn construct_tree_family(
    n: usize,
    m: usize,
    kind: TreeKind,
) -> Result<GraphCollection, ExtremalError> {
    let bound = tree_bound(n, m)?;
    let mut graphs = Vec::with_capacity(bound);
    let mut rng = match kind {
        TreeKind::Pruefer { seed } => Some(SplitMix64::new(seed)),
        _ => None,
    };
    for block in 0..m / n {
        let base = block * n;
        for _ in 0..n.saturating_sub(2) {
            let edges = match kind {
                TreeKind::Path => (0..n - 1)
                    .map(|j| Edge::new(base + j, base + j + 1))
                    .collect(),
                TreeKind::Star => (1..n).map(|j| Edge::new(base, base + j)).collect(),
                TreeKind::Pruefer { .. } => {
                    let rng = rng.as_mut().expect("seeded generator");
                    let seq: Vec<usize> =
                        (0..n - 2).map(|_| rng.below(n as u64) as usize).collect();
                    pruefer_decode(&seq, base)
                }
            };
            graphs.push(Graph::new(edges));
        }
    }
    let collection = GraphCollection::new(m, graphs).expect("valid construction");
    assert_eq!(collection.color_count(), bound);
    Ok(collection)
}

/// Decodes a sequence over {0, .., n-1} (n = len + 2) into the edge list of
/// the corresponding labeled tree on vertices base .. base+n.
fn pruefer_decode(seq: &[usize], base: usize) -> Vec<Edge> {
    let n = seq.len() + 2;
    let mut degree = vec![1usize; n];
    for &a in seq {
        degree[a] += 1;
    }
    let mut leaves: std::collections::BTreeSet<usize> =
        (0..n).filter(|&i| degree[i] == 1).collect();
    let mut edges = Vec::with_capacity(n - 1);
    for &a in seq {
        let u = *leaves.iter().next().expect("a leaf always remains");
        leaves.remove(&u);
        edges.push(Edge::new(base + u, base + a));
        degree[a] -= 1;
        if degree[a] == 1 {
            leaves.insert(a);
        }
    }
    let mut last = leaves.into_iter();
    let u = last.next().expect("two final leaves");
    let v = last.next().expect("two final leaves");
    edges.push(Edge::new(base + u, base + v));
    edges
}

/// Deterministic 64-bit generator for seeded constructions; self-contained
/// so identical seeds always produce identical families.
pub(crate) struct SplitMix64(u64);

impl SplitMix64 {
    pub(crate) fn new(seed: u64) -> Self {
        SplitMix64(seed)
    }

    pub(crate) fn next(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9e3779b97f4a7c15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
        z ^ (z >> 31)
    }

    /// Uniform value in [0, n) by rejection.
    pub(crate) fn below(&mut self, n: u64) -> u64 {
        assert!(n > 0);
        let zone = u64::MAX - u64::MAX % n;
        loop {
            let x = self.next();
            if x < zone {
                return x % n;
            }
        }
    }
}
