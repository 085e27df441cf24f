//! Rainbow-star detection.
//!
//! The largest rainbow star centered at a vertex v is a maximum bipartite
//! matching between the colors having an edge at v and the neighbors of v
//! across all colors. Witnesses are canonicalized: among the matchings of the
//! target size, the one assigning each color (in ascending order) its
//! smallest feasible leaf.

use crate::model::{AuxDigraph, ColoredEdge, Edge, GraphCollection, ModelError, RainbowWitness};
use std::collections::BTreeMap;

/// Per-vertex maximum rainbow-star sizes: `capacities[v]` is the largest ℓ
/// such that a rainbow K_{1,ℓ} centered at v exists.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StarCapacityReport {
    pub capacities: Vec<usize>,
}

impl StarCapacityReport {
    pub fn max(&self) -> usize {
        self.capacities.iter().copied().max().unwrap_or(0)
    }
}

/// Hopcroft-Karp maximum matching. `adj[l]` lists the right-side partners of
/// left vertex l in ascending order. Returns `right_match[r] = Some(l)`.
fn hopcroft_karp(adj: &[Vec<usize>], right_size: usize) -> Vec<Option<usize>> {
    const INF: usize = usize::MAX;
    let left_size = adj.len();
    let mut right_match: Vec<Option<usize>> = vec![None; right_size];
    let mut left_match: Vec<Option<usize>> = vec![None; left_size];

    loop {
        // BFS layering from unmatched left vertices.
        let mut dist = vec![INF; left_size];
        let mut queue: std::collections::VecDeque<usize> = (0..left_size)
            .filter(|&l| left_match[l].is_none())
            .collect();
        for &l in &queue {
            dist[l] = 0;
        }
        let mut reachable_free = false;
        while let Some(l) = queue.pop_front() {
            for &r in &adj[l] {
                match right_match[r] {
                    None => reachable_free = true,
                    Some(l2) => {
                        if dist[l2] == INF {
                            dist[l2] = dist[l] + 1;
                            queue.push_back(l2);
                        }
                    }
                }
            }
        }
        if !reachable_free {
            break;
        }

        fn dfs(
            l: usize,
            adj: &[Vec<usize>],
            dist: &mut [usize],
            left_match: &mut [Option<usize>],
            right_match: &mut [Option<usize>],
        ) -> bool {
            let d = std::mem::replace(&mut dist[l], usize::MAX);
            for &r in &adj[l] {
                let ok = match right_match[r] {
                    None => true,
                    Some(l2) => dist[l2] == d + 1 && dfs(l2, adj, dist, left_match, right_match),
                };
                if ok {
                    right_match[r] = Some(l);
                    left_match[l] = Some(r);
                    return true;
                }
            }
            false
        }

        let mut progressed = false;
        for l in 0..left_size {
            if left_match[l].is_none() && dist[l] == 0 {
                progressed |= dfs(l, adj, &mut dist, &mut left_match, &mut right_match);
            }
        }
        if !progressed {
            break;
        }
    }
    right_match
}

fn max_matching_size(adj: &[Vec<usize>], right_size: usize) -> usize {
    hopcroft_karp(adj, right_size)
        .iter()
        .filter(|m| m.is_some())
        .count()
}

/// The lexicographically least matching of exactly `target` pairs: left
/// vertices considered in ascending order, each fixed to the smallest right
/// partner that keeps `target` attainable. None if `target` exceeds the
/// maximum matching size.
fn lex_min_matching(
    adj: &[Vec<usize>],
    right_size: usize,
    target: usize,
) -> Option<Vec<(usize, usize)>> {
    if max_matching_size(adj, right_size) < target {
        return None;
    }
    let mut fixed: Vec<(usize, usize)> = Vec::with_capacity(target);
    let mut right_used = vec![false; right_size];
    for l in 0..adj.len() {
        if fixed.len() == target {
            break;
        }
        for &r in &adj[l] {
            if right_used[r] {
                continue;
            }
            // Feasible iff the remaining left vertices can supply the rest of
            // the target on the remaining right vertices.
            let rest: Vec<Vec<usize>> = (l + 1..adj.len())
                .map(|l2| {
                    adj[l2]
                        .iter()
                        .copied()
                        .filter(|&r2| !right_used[r2] && r2 != r)
                        .collect()
                })
                .collect();
            if fixed.len() + 1 + max_matching_size(&rest, right_size) >= target {
                fixed.push((l, r));
                right_used[r] = true;
                break;
            }
        }
    }
    if fixed.len() == target {
        Some(fixed)
    } else {
        None
    }
}

/// Color/leaf incidence at `v`: the colors with an edge at v (ascending) and,
/// per color, the neighbor list compressed to right-side indices.
fn incidence_at(
    collection: &GraphCollection,
    v: usize,
) -> (Vec<usize>, Vec<usize>, Vec<Vec<usize>>) {
    let colors = collection.colors_at(v);
    let mut leaf_ids: BTreeMap<usize, usize> = BTreeMap::new();
    let mut neighbor_lists: Vec<Vec<usize>> = Vec::with_capacity(colors.len());
    for &c in &colors {
        neighbor_lists.push(collection.neighbors_in(c, v));
    }
    for list in &neighbor_lists {
        for &w in list {
            let next = leaf_ids.len();
            leaf_ids.entry(w).or_insert(next);
        }
    }
    let leaves: Vec<usize> = {
        let mut pairs: Vec<(usize, usize)> = leaf_ids.iter().map(|(&w, &i)| (i, w)).collect();
        pairs.sort_unstable();
        pairs.into_iter().map(|(_, w)| w).collect()
    };
    let adj: Vec<Vec<usize>> = neighbor_lists
        .iter()
        .map(|list| list.iter().map(|w| leaf_ids[w]).collect())
        .collect();
    (colors, leaves, adj)
}

/// A canonical rainbow K_{1,target} centered at `v`, if one exists.
fn star_witness_at(
    collection: &GraphCollection,
    v: usize,
    target: usize,
) -> Option<RainbowWitness> {
    if target == 0 {
        return None;
    }
    let (colors, leaves, adj) = incidence_at(collection, v);
    let pairs = lex_min_matching(&adj, leaves.len(), target)?;
    let edges = pairs
        .into_iter()
        .map(|(ci, ri)| ColoredEdge {
            edge: Edge::new(v, leaves[ri]),
            color: colors[ci],
        })
        .collect();
    Some(RainbowWitness::star(v, edges))
}

/// Maximum rainbow-star size at `v`, with a canonical witness when positive.
pub fn max_rainbow_star_at(
    collection: &GraphCollection,
    v: usize,
) -> Result<(usize, Option<RainbowWitness>), ModelError> {
    if v >= collection.vertex_count() {
        return Err(ModelError::VertexOutOfRange {
            vertex: v,
            limit: collection.vertex_count(),
        });
    }
    let (_, leaves, adj) = incidence_at(collection, v);
    let size = max_matching_size(&adj, leaves.len());
    let witness = star_witness_at(collection, v, size);
    Ok((size, witness))
}

/// Capacities for every vertex.
pub fn star_capacities(collection: &GraphCollection) -> StarCapacityReport {
    let capacities = collection
        .vertices()
        .map(|v| {
            let (_, leaves, adj) = incidence_at(collection, v);
            max_matching_size(&adj, leaves.len())
        })
        .collect();
    StarCapacityReport { capacities }
}

/// Searches for a rainbow K_{1,delta}: the witness at the lowest-id vertex
/// whose capacity reaches `delta`, or None when the collection is
/// rainbow-K_{1,delta}-free. Works for arbitrary graphs, not only stars.
pub fn find_rainbow_star(collection: &GraphCollection, delta: usize) -> Option<RainbowWitness> {
    assert!(delta >= 2, "rainbow stars need delta >= 2");
    for v in collection.vertices() {
        let (_, leaves, adj) = incidence_at(collection, v);
        if max_matching_size(&adj, leaves.len()) >= delta {
            let witness = star_witness_at(collection, v, delta).expect("capacity checked");
            return Some(witness);
        }
    }
    None
}

pub fn is_rainbow_star_free(collection: &GraphCollection, delta: usize) -> bool {
    find_rainbow_star(collection, delta).is_none()
}

/// Structural consequences of rainbow-freeness for a collection of K_{1,Δ}
/// stars: per-center star counts bounded by Δ - d_u - 1, total size bounded
/// by n(Δ-1) - |C|Δ, and leaf in-degrees bounded by Δ-1.
#[derive(Clone, Debug)]
pub struct FreeStarStructureReport {
    pub center_bound_ok: bool,
    pub size_cap_ok: bool,
    pub leaf_indegree_ok: bool,
    /// |S_u| per center.
    pub center_star_counts: BTreeMap<usize, usize>,
    /// d_u per center.
    pub center_in_degrees: BTreeMap<usize, usize>,
    pub violations: Vec<String>,
}

impl FreeStarStructureReport {
    pub fn ok(&self) -> bool {
        self.center_bound_ok && self.size_cap_ok && self.leaf_indegree_ok
    }
}

/// Errors for the structure checker.
#[derive(Debug, thiserror::Error)]
pub enum StarCheckError {
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("graph {graph} is a K_{{1,{found}}} star, expected K_{{1,{expected}}}")]
    WrongDelta {
        graph: usize,
        found: usize,
        expected: usize,
    },
    #[error("collection contains a rainbow star and is not rainbow-free")]
    NotFree,
}

/// Verifies the structural bounds that every rainbow-K_{1,Δ}-free collection
/// of K_{1,Δ} stars must satisfy. Errors if the collection is not rainbow
/// free or not made of K_{1,Δ} stars.
pub fn check_free_star_structure(
    collection: &GraphCollection,
    delta: usize,
) -> Result<FreeStarStructureReport, StarCheckError> {
    for (i, g) in collection.graphs().iter().enumerate() {
        let s = g.as_star(i)?;
        if s.degree() != delta {
            return Err(StarCheckError::WrongDelta {
                graph: i,
                found: s.degree(),
                expected: delta,
            });
        }
    }
    if !is_rainbow_star_free(collection, delta) {
        return Err(StarCheckError::NotFree);
    }

    let d = AuxDigraph::build(collection)?;
    let n = collection.vertex_count();
    let mut violations = Vec::new();

    let mut center_star_counts: BTreeMap<usize, usize> = BTreeMap::new();
    for (i, g) in collection.graphs().iter().enumerate() {
        let s = g.as_star(i).expect("validated above");
        *center_star_counts.entry(s.center()).or_insert(0) += 1;
    }
    let center_in_degrees: BTreeMap<usize, usize> = d
        .centers()
        .iter()
        .map(|&u| (u, d.center_in_degree(u)))
        .collect();

    let mut center_bound_ok = true;
    for (&u, &count) in &center_star_counts {
        let d_u = center_in_degrees[&u];
        if count + d_u + 1 > delta {
            center_bound_ok = false;
            violations.push(format!(
                "center {u}: {count} stars with in-degree {d_u} exceeds the bound {}",
                delta - 1
            ));
        }
    }

    let cap = n * (delta - 1) - d.centers().len() * delta;
    let size_cap_ok = collection.color_count() <= cap;
    if !size_cap_ok {
        violations.push(format!(
            "collection size {} exceeds the cap {cap}",
            collection.color_count()
        ));
    }

    let mut leaf_indegree_ok = true;
    for v in d.leaves_set() {
        if d.in_degree(v) > delta - 1 {
            leaf_indegree_ok = false;
            violations.push(format!(
                "leaf {v}: in-degree {} exceeds {}",
                d.in_degree(v),
                delta - 1
            ));
        }
    }

    Ok(FreeStarStructureReport {
        center_bound_ok,
        size_cap_ok,
        leaf_indegree_ok,
        center_star_counts,
        center_in_degrees,
        violations,
    })
}
