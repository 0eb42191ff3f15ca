//! Exact ground-truth oracles.
//!
//! The distance from a family to intersecting equals the minimum vertex
//! cover of its disjointness graph (the Kneser graph restricted to the
//! members): a cover is exactly a removal set whose complement is pairwise
//! intersecting. Cross-intersecting distance is the bipartite analogue and
//! reduces to maximum matching by Koenig's theorem. These oracles are exact
//! and deliberately budgeted to desk scale; everything statistical in the
//! crate is validated against them.

use crate::combinatorics::{elements_disjoint, unrank};
use crate::error::{Error, Result};
use crate::family::ExplicitFamily;
use crate::rat::Rat;

/// Default cap on disjointness-graph edges for the exact oracles.
pub const DEFAULT_EDGE_BUDGET: u64 = 20_000;

/// The disjointness graph induced by a family: vertices are member ranks,
/// edges join disjoint members.
#[derive(Debug, Clone)]
pub struct DisjointnessGraph {
    pub vertices: Vec<u64>,
    pub adj: Vec<Vec<u32>>,
    pub edge_count: u64,
}

impl DisjointnessGraph {
    /// Builds the graph, failing once more than `max_edges` edges appear.
    pub fn build(family: &ExplicitFamily, max_edges: u64) -> Result<Self> {
        let vertices = family.member_ranks();
        let sets = family.member_sets();
        let v = sets.len();
        let mut adj: Vec<Vec<u32>> = vec![Vec::new(); v];
        let mut edge_count = 0u64;
        for i in 0..v {
            for j in (i + 1)..v {
                if elements_disjoint(sets[i].elements(), sets[j].elements()) {
                    edge_count += 1;
                    if edge_count > max_edges {
                        return Err(Error::Budget(format!(
                            "disjointness graph exceeds {max_edges} edges"
                        )));
                    }
                    adj[i].push(j as u32);
                    adj[j].push(i as u32);
                }
            }
        }
        Ok(DisjointnessGraph {
            vertices,
            adj,
            edge_count,
        })
    }
}

/// Minimum removals that leave `family` intersecting: the minimum vertex
/// cover of its disjointness graph, via kernelization plus branch and bound.
/// Uses the default edge budget.
pub fn exact_distance(family: &ExplicitFamily) -> Result<u64> {
    exact_distance_with_budget(family, DEFAULT_EDGE_BUDGET)
}

pub fn exact_distance_with_budget(family: &ExplicitFamily, max_edges: u64) -> Result<u64> {
    let graph = DisjointnessGraph::build(family, max_edges)?;
    Ok(min_vertex_cover(&graph))
}

/// Exact minimum vertex cover size. Kernel rules: isolated vertices are
/// dropped, a degree-1 vertex forces its neighbor into the cover, and a
/// max-degree-2 remainder (paths and cycles) is solved in closed form.
/// Branching takes a maximum-degree vertex v and recurses on "v in cover"
/// and "N(v) in cover", pruning with a greedy-matching lower bound.
pub fn min_vertex_cover(graph: &DisjointnessGraph) -> u64 {
    let v = graph.adj.len();
    let mut alive = vec![true; v];
    let mut deg: Vec<u32> = graph.adj.iter().map(|a| a.len() as u32).collect();
    let mut best = greedy_cover(
        &graph.adj,
        &mut alive.clone(),
        &mut deg.clone(),
        graph.edge_count,
    );
    branch(
        &graph.adj,
        &mut alive,
        &mut deg,
        graph.edge_count,
        0,
        &mut best,
    );
    best
}

fn remove_vertex(adj: &[Vec<u32>], alive: &mut [bool], deg: &mut [u32], edges: &mut u64, u: usize) {
    alive[u] = false;
    for &w in &adj[u] {
        let w = w as usize;
        if alive[w] {
            deg[w] -= 1;
            *edges -= 1;
        }
    }
    deg[u] = 0;
}

fn greedy_cover(adj: &[Vec<u32>], alive: &mut [bool], deg: &mut [u32], mut edges: u64) -> u64 {
    let mut taken = 0;
    while edges > 0 {
        let u = deg
            .iter()
            .enumerate()
            .filter(|(i, _)| alive[*i])
            .max_by_key(|(_, &d)| d)
            .map(|(i, _)| i)
            .expect("edges remain");
        remove_vertex(adj, alive, deg, &mut edges, u);
        taken += 1;
    }
    taken
}

fn greedy_matching_size(adj: &[Vec<u32>], alive: &[bool]) -> u64 {
    let mut used = vec![false; alive.len()];
    let mut size = 0;
    for u in 0..alive.len() {
        if !alive[u] || used[u] {
            continue;
        }
        for &w in &adj[u] {
            let w = w as usize;
            if alive[w] && !used[w] && w != u {
                used[u] = true;
                used[w] = true;
                size += 1;
                break;
            }
        }
    }
    size
}

/// Closed-form cover of a max-degree-2 graph: each component is a path
/// (floor(p/2)) or a cycle (ceil(p/2)).
fn cover_paths_and_cycles(adj: &[Vec<u32>], alive: &[bool], deg: &[u32]) -> u64 {
    let v = alive.len();
    let mut seen = vec![false; v];
    let mut total = 0u64;
    for s in 0..v {
        if !alive[s] || seen[s] || deg[s] == 0 {
            seen[s] = true;
            continue;
        }
        if seen[s] {
            continue;
        }
        // walk the component, counting vertices and edge endpoints
        let mut stack = vec![s];
        seen[s] = true;
        let mut vertices = 0u64;
        let mut endpoint_sum = 0u64;
        while let Some(u) = stack.pop() {
            vertices += 1;
            endpoint_sum += u64::from(deg[u]);
            for &w in &adj[u] {
                let w = w as usize;
                if alive[w] && !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        let edges = endpoint_sum / 2;
        total += if edges == vertices {
            vertices.div_ceil(2) // cycle
        } else {
            vertices / 2 // path
        };
    }
    total
}

fn branch(
    adj: &[Vec<u32>],
    alive: &mut [bool],
    deg: &mut [u32],
    mut edges: u64,
    mut taken: u64,
    best: &mut u64,
) {
    loop {
        if taken >= *best {
            return;
        }
        if edges == 0 {
            *best = taken;
            return;
        }
        // degree-1 kernel: take the neighbor
        if let Some(u) = (0..alive.len()).find(|&u| alive[u] && deg[u] == 1) {
            let w = adj[u]
                .iter()
                .map(|&w| w as usize)
                .find(|&w| alive[w])
                .expect("degree-1 vertex has a live neighbor");
            remove_vertex(adj, alive, deg, &mut edges, w);
            taken += 1;
            continue;
        }
        let (v_max, d_max) = (0..alive.len())
            .filter(|&u| alive[u])
            .map(|u| (u, deg[u]))
            .max_by_key(|&(_, d)| d)
            .expect("edges remain");
        if d_max <= 2 {
            let closed = taken + cover_paths_and_cycles(adj, alive, deg);
            if closed < *best {
                *best = closed;
            }
            return;
        }
        if taken + greedy_matching_size(adj, alive) >= *best {
            return;
        }
        // branch 1: N(v) in cover
        {
            let mut a2 = alive.to_vec();
            let mut d2 = deg.to_vec();
            let mut e2 = edges;
            let mut t2 = taken;
            let nbrs: Vec<usize> = adj[v_max]
                .iter()
                .map(|&w| w as usize)
                .filter(|&w| a2[w])
                .collect();
            remove_vertex(adj, &mut a2, &mut d2, &mut e2, v_max);
            for w in nbrs {
                remove_vertex(adj, &mut a2, &mut d2, &mut e2, w);
                t2 += 1;
            }
            branch(adj, &mut a2, &mut d2, e2, t2, best);
        }
        // branch 2: v in cover (reuse current buffers; we are done with them)
        remove_vertex(adj, alive, deg, &mut edges, v_max);
        taken += 1;
    }
}

/// Greedy maximal matching of the disjointness graph: returns
/// `(|M|, 2|M|)`, which brackets the exact distance. No edge budget; the
/// scan is quadratic in the member count but allocates nothing per pair.
pub fn matching_bounds(family: &ExplicitFamily) -> (u64, u64) {
    let sets = family.member_sets();
    let v = sets.len();
    let mut used = vec![false; v];
    let mut size = 0u64;
    for i in 0..v {
        if used[i] {
            continue;
        }
        for j in (i + 1)..v {
            if !used[j] && elements_disjoint(sets[i].elements(), sets[j].elements()) {
                used[i] = true;
                used[j] = true;
                size += 1;
                break;
            }
        }
    }
    (size, 2 * size)
}

/// Minimum removals (counted per side) making every surviving member of
/// `f1` intersect every surviving member of `f2`. Equals the maximum
/// matching of the bipartite disjointness graph by Koenig's theorem.
pub fn cross_distance(f1: &ExplicitFamily, f2: &ExplicitFamily) -> Result<u64> {
    cross_distance_with_budget(f1, f2, DEFAULT_EDGE_BUDGET)
}

pub fn cross_distance_with_budget(
    f1: &ExplicitFamily,
    f2: &ExplicitFamily,
    max_edges: u64,
) -> Result<u64> {
    if f1.n() != f2.n() || f1.k() != f2.k() {
        return Err(Error::UniverseMismatch {
            expected_n: f1.n(),
            expected_k: f1.k(),
            got_n: f2.n(),
            got_k: f2.k(),
        });
    }
    let left = f1.member_sets();
    let right = f2.member_sets();
    let mut adj: Vec<Vec<u32>> = vec![Vec::new(); left.len()];
    let mut edges = 0u64;
    for (i, a) in left.iter().enumerate() {
        for (j, b) in right.iter().enumerate() {
            if elements_disjoint(a.elements(), b.elements()) {
                edges += 1;
                if edges > max_edges {
                    return Err(Error::Budget(format!(
                        "bipartite disjointness graph exceeds {max_edges} edges"
                    )));
                }
                adj[i].push(j as u32);
            }
        }
    }
    Ok(hopcroft_karp(&adj, right.len()))
}

/// Maximum bipartite matching; `adj` maps left vertices to right vertices.
pub fn hopcroft_karp(adj: &[Vec<u32>], right_count: usize) -> u64 {
    const FREE: u32 = u32::MAX;
    let left_count = adj.len();
    let mut mate_left = vec![FREE; left_count];
    let mut mate_right = vec![FREE; right_count];
    let mut matching = 0u64;
    loop {
        // BFS from free left vertices to build layered distances
        let mut dist = vec![u32::MAX; left_count];
        let mut queue = std::collections::VecDeque::new();
        for u in 0..left_count {
            if mate_left[u] == FREE {
                dist[u] = 0;
                queue.push_back(u);
            }
        }
        let mut found_free = false;
        while let Some(u) = queue.pop_front() {
            for &w in &adj[u] {
                let m = mate_right[w as usize];
                if m == FREE {
                    found_free = true;
                } else if dist[m as usize] == u32::MAX {
                    dist[m as usize] = dist[u] + 1;
                    queue.push_back(m as usize);
                }
            }
        }
        if !found_free {
            return matching;
        }
        // DFS for vertex-disjoint shortest augmenting paths
        fn dfs(
            u: usize,
            adj: &[Vec<u32>],
            dist: &mut [u32],
            mate_left: &mut [u32],
            mate_right: &mut [u32],
        ) -> bool {
            const FREE: u32 = u32::MAX;
            let d = std::mem::replace(&mut dist[u], u32::MAX);
            for &w in &adj[u] {
                let m = mate_right[w as usize];
                let ok = if m == FREE {
                    true
                } else {
                    dist[m as usize] == d + 1 && dfs(m as usize, adj, dist, mate_left, mate_right)
                };
                if ok {
                    mate_right[w as usize] = u as u32;
                    mate_left[u] = w;
                    return true;
                }
            }
            false
        }
        for u in 0..left_count {
            if mate_left[u] == FREE
                && dist[u] == 0
                && dfs(u, adj, &mut dist, &mut mate_left, &mut mate_right)
            {
                matching += 1;
            }
        }
    }
}

/// A restriction pattern `(A, B)` with `B` a subset of `A`, both strictly
/// increasing element lists.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RestrictionSpec {
    a: Vec<u32>,
    b: Vec<u32>,
}

impl RestrictionSpec {
    pub fn new(a: Vec<u32>, b: Vec<u32>) -> Result<Self> {
        for set in [&a, &b] {
            if set.first().is_some_and(|&e| e < 1) {
                return Err(Error::InvalidParameter(
                    "restriction set elements are 1-based".into(),
                ));
            }
            for w in set.windows(2) {
                if w[0] >= w[1] {
                    return Err(Error::InvalidParameter(
                        "restriction sets must be strictly increasing".into(),
                    ));
                }
            }
        }
        if !b.iter().all(|e| a.binary_search(e).is_ok()) {
            return Err(Error::InvalidParameter(
                "restriction requires B to be a subset of A".into(),
            ));
        }
        Ok(RestrictionSpec { a, b })
    }

    pub fn a(&self) -> &[u32] {
        &self.a
    }

    pub fn b(&self) -> &[u32] {
        &self.b
    }
}

fn sorted_intersection(lhs: &[u32], rhs: &[u32]) -> Vec<u32> {
    let mut out = Vec::new();
    let (mut i, mut j) = (0, 0);
    while i < lhs.len() && j < rhs.len() {
        match lhs[i].cmp(&rhs[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                out.push(lhs[i]);
                i += 1;
                j += 1;
            }
        }
    }
    out
}

/// The members of `family` whose intersection with `A` is exactly `B`;
/// universe and k are unchanged.
pub fn restriction(family: &ExplicitFamily, spec: &RestrictionSpec) -> Result<ExplicitFamily> {
    if spec.a.last().is_some_and(|&e| e > family.n()) {
        return Err(Error::InvalidParameter(format!(
            "restriction set element beyond universe [1..{}]",
            family.n()
        )));
    }
    let mut out = ExplicitFamily::empty_with_cap(family.n(), family.k(), u64::MAX)?;
    for r in family.member_ranks() {
        let s = unrank(family.table(), r, family.n(), family.k())?;
        if sorted_intersection(s.elements(), &spec.a) == spec.b {
            out.insert_rank(r);
        }
    }
    Ok(out)
}

/// True iff `A` eps-captures the family: fewer than `eps * C(n,k)` members
/// are disjoint from `A`.
pub fn captures(family: &ExplicitFamily, a: &[u32], eps: Rat) -> Result<bool> {
    for w in a.windows(2) {
        if w[0] >= w[1] {
            return Err(Error::InvalidParameter(
                "capture set must be strictly increasing".into(),
            ));
        }
    }
    if a.first().is_some_and(|&e| e < 1) || a.last().is_some_and(|&e| e > family.n()) {
        return Err(Error::InvalidParameter(format!(
            "capture set element beyond universe [1..{}]",
            family.n()
        )));
    }
    let mut escaping = 0u64;
    for s in family.member_sets() {
        if elements_disjoint(s.elements(), a) {
            escaping += 1;
        }
    }
    Ok(eps.count_below(escaping, family.universe_size()))
}

/// Number of members disjoint from at least `threshold` other members.
pub fn useful_sets(family: &ExplicitFamily, threshold: u64) -> Result<u64> {
    let graph = DisjointnessGraph::build(family, DEFAULT_EDGE_BUDGET)?;
    Ok(graph
        .adj
        .iter()
        .filter(|nbrs| nbrs.len() as u64 >= threshold)
        .count() as u64)
}

/// A certified far restriction: `(F(A|B), F(A|C))` is far from
/// cross-intersecting at the residual level and no small subset of the
/// remaining coordinates captures the second side.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FarRestriction {
    pub a: Vec<u32>,
    pub b: Vec<u32>,
    pub c: Vec<u32>,
}

/// Exhaustive budget for [`search_far_restriction`].
const SEARCH_MAX_UNIVERSE: u64 = 120;
const SEARCH_MAX_N: u32 = 10;

fn pow3(e: u32) -> Result<u64> {
    3u64.checked_pow(e)
        .ok_or_else(|| Error::Overflow(format!("3^{e} exceeds u64")))
}

fn combinations(pool: &[u32], size: usize) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    let mut idx: Vec<usize> = (0..size).collect();
    if size == 0 {
        return vec![Vec::new()];
    }
    if size > pool.len() {
        return out;
    }
    loop {
        out.push(idx.iter().map(|&i| pool[i]).collect());
        let mut i = size;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if idx[i] != i + pool.len() - size {
                break;
            }
        }
        idx[i] += 1;
        for j in (i + 1)..size {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

fn subsets_sorted(pool: &[u32]) -> Vec<Vec<u32>> {
    let mut out: Vec<Vec<u32>> = (0..1u32 << pool.len())
        .map(|mask| {
            pool.iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, &e)| e)
                .collect()
        })
        .collect();
    out.sort();
    out
}

fn merge_sorted(lhs: &[u32], rhs: &[u32]) -> Vec<u32> {
    let mut out: Vec<u32> = lhs.iter().chain(rhs).copied().collect();
    out.sort_unstable();
    out
}

/// Searches for sets `A` and disjoint `B, C` inside `A` such that the
/// restrictions `(F(A|B), F(A|C))` stay `eps/3^(r^2)`-far from
/// cross-intersecting while no subset of `[n] \ A` of size below `r`
/// captures the second side at that level. Follows the inductive
/// construction: grow `A` by the first capturing set of size at most `r`
/// (by size, then lexicographic), and restrict along the disjoint trace
/// pair maximizing the exact cross-distance, ties broken lexicographically.
/// Returns `None` when `(F,F)` is not eps-far from cross-intersecting.
pub fn search_far_restriction(
    family: &ExplicitFamily,
    r: u32,
    eps: Rat,
) -> Result<Option<FarRestriction>> {
    if family.universe_size() > SEARCH_MAX_UNIVERSE || family.n() > SEARCH_MAX_N {
        return Err(Error::Budget(format!(
            "restriction search limited to C(n,k) <= {SEARCH_MAX_UNIVERSE}, n <= {SEARCH_MAX_N}"
        )));
    }
    if r < 1 {
        return Err(Error::InvalidParameter(
            "restriction search requires r >= 1".into(),
        ));
    }
    let universe = family.universe_size();
    let cd = cross_distance(family, family)?;
    if !eps.count_exceeds(cd, universe) {
        return Ok(None);
    }

    let mut acc_a: Vec<u32> = Vec::new();
    let mut acc_b: Vec<u32> = Vec::new();
    let mut acc_c: Vec<u32> = Vec::new();
    let mut f1 = family.clone();
    let mut f2 = family.clone();

    for t in 1..=r {
        let level = eps.div_by(pow3(r * t)?)?;
        let outside: Vec<u32> = (1..=family.n())
            .filter(|e| acc_a.binary_search(e).is_err())
            .collect();
        let mut capturing: Option<Vec<u32>> = None;
        'sizes: for size in 1..=(r as usize) {
            for cand in combinations(&outside, size) {
                if captures(&f2, &cand, level)? {
                    capturing = Some(cand);
                    break 'sizes;
                }
            }
        }
        let Some(a_prime) = capturing else {
            break;
        };
        // All disjoint (B', C') trace pairs inside A', in lexicographic order.
        let subsets = subsets_sorted(&a_prime);
        let mut best: Option<(u64, &Vec<u32>, &Vec<u32>)> = None;
        for b_prime in &subsets {
            for c_prime in &subsets {
                if !elements_disjoint(b_prime, c_prime) {
                    continue;
                }
                let g1 = restriction(
                    &f1,
                    &RestrictionSpec::new(a_prime.clone(), b_prime.clone())?,
                )?;
                let g2 = restriction(
                    &f2,
                    &RestrictionSpec::new(a_prime.clone(), c_prime.clone())?,
                )?;
                let d = cross_distance(&g1, &g2)?;
                if best.as_ref().is_none_or(|(bd, _, _)| d > *bd) {
                    best = Some((d, b_prime, c_prime));
                }
            }
        }
        let (_, b_prime, c_prime) = best.expect("subset pairs are nonempty");
        f1 = restriction(
            &f1,
            &RestrictionSpec::new(a_prime.clone(), b_prime.clone())?,
        )?;
        f2 = restriction(
            &f2,
            &RestrictionSpec::new(a_prime.clone(), c_prime.clone())?,
        )?;
        acc_b = merge_sorted(&acc_b, b_prime);
        acc_c = merge_sorted(&acc_c, c_prime);
        acc_a = merge_sorted(&acc_a, &a_prime);
    }

    // Re-verify both certificates at the final level.
    let final_level = eps.div_by(pow3(r * r)?)?;
    let final_cd = cross_distance(&f1, &f2)?;
    if !final_level.count_exceeds(final_cd, universe) {
        return Err(Error::Search(format!(
            "constructed restriction is not {final_level}-far from cross-intersecting"
        )));
    }
    let outside: Vec<u32> = (1..=family.n())
        .filter(|e| acc_a.binary_search(e).is_err())
        .collect();
    for size in 0..(r as usize) {
        for cand in combinations(&outside, size) {
            if captures(&f2, &cand, final_level)? {
                return Err(Error::Search(format!(
                    "set {cand:?} still {final_level}-captures the restricted family"
                )));
            }
        }
    }
    Ok(Some(FarRestriction {
        a: acc_a,
        b: acc_b,
        c: acc_c,
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combinatorics::{BinomialTable, KSubset};
    use crate::family::{dno_family, full_family, random_family, star_family};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    /// Independent oracle: maximum intersecting subfamily by exhaustive
    /// branch on members. Distance = |F| - maximum.
    fn exhaustive_distance(family: &ExplicitFamily) -> u64 {
        let sets = family.member_sets();
        fn recurse(sets: &[KSubset], chosen: &mut Vec<usize>, next: usize, best: &mut usize) {
            if chosen.len() + (sets.len() - next) <= *best {
                return;
            }
            if next == sets.len() {
                *best = (*best).max(chosen.len());
                return;
            }
            let compatible = chosen
                .iter()
                .all(|&i| !elements_disjoint(sets[i].elements(), sets[next].elements()));
            if compatible {
                chosen.push(next);
                recurse(sets, chosen, next + 1, best);
                chosen.pop();
            }
            recurse(sets, chosen, next + 1, best);
        }
        let mut best = 0;
        recurse(&sets, &mut Vec::new(), 0, &mut best);
        family.member_count() - best as u64
    }

    /// Independent oracle for cross distance: branch on violating pairs.
    fn exhaustive_cross_distance(f1: &ExplicitFamily, f2: &ExplicitFamily) -> u64 {
        let left = f1.member_sets();
        let right = f2.member_sets();
        fn recurse(
            left: &[KSubset],
            right: &[KSubset],
            la: &mut Vec<bool>,
            ra: &mut Vec<bool>,
            removed: u64,
            best: &mut u64,
        ) {
            if removed >= *best {
                return;
            }
            for (i, a) in left.iter().enumerate() {
                if !la[i] {
                    continue;
                }
                for (j, b) in right.iter().enumerate() {
                    if !ra[j] {
                        continue;
                    }
                    if elements_disjoint(a.elements(), b.elements()) {
                        la[i] = false;
                        recurse(left, right, la, ra, removed + 1, best);
                        la[i] = true;
                        ra[j] = false;
                        recurse(left, right, la, ra, removed + 1, best);
                        ra[j] = true;
                        return;
                    }
                }
            }
            *best = removed;
        }
        let mut best = (left.len() + right.len()) as u64;
        recurse(
            &left,
            &right,
            &mut vec![true; left.len()],
            &mut vec![true; right.len()],
            0,
            &mut best,
        );
        best
    }

    #[test]
    fn exact_distance_examples() {
        let full = full_family(4, 2).unwrap();
        assert_eq!(exact_distance(&full).unwrap(), 3);
        let star = star_family(7, 3, 2).unwrap();
        assert_eq!(exact_distance(&star).unwrap(), 0);
    }

    #[test]
    fn ekr_identity_small() {
        let t = BinomialTable::new(12, 3).unwrap();
        for (n, k) in [(4u32, 2u32), (5, 2), (6, 2), (6, 3), (8, 3)] {
            let full = full_family(n, k).unwrap();
            let expect = t.binomial(n, k) - t.binomial(n - 1, k - 1);
            assert_eq!(exact_distance(&full).unwrap(), expect, "(n,k)=({n},{k})");
        }
    }

    #[test]
    fn distance_agrees_with_exhaustive_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for trial in 0..200 {
            let (n, k) = [(4, 2), (5, 2), (6, 2), (6, 3)][trial % 4];
            let p = Rat::new(1 + (trial as u64 % 9), 10).unwrap();
            let f = random_family(n, k, p, &mut rng).unwrap();
            if f.member_count() > 20 {
                continue;
            }
            assert_eq!(
                exact_distance(&f).unwrap(),
                exhaustive_distance(&f),
                "trial {trial}"
            );
        }
    }

    #[test]
    fn matching_bounds_examples() {
        let star = star_family(6, 2, 1).unwrap();
        assert_eq!(matching_bounds(&star), (0, 0));
        let full = full_family(4, 2).unwrap();
        assert_eq!(matching_bounds(&full), (3, 6));
        assert_eq!(exact_distance(&full).unwrap(), 3);
    }

    #[test]
    fn matching_brackets_distance() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        for trial in 0..300 {
            let (n, k) = [(4, 2), (5, 2), (6, 2), (6, 3)][trial % 4];
            let p = Rat::new(1 + (trial as u64 % 9), 10).unwrap();
            let f = random_family(n, k, p, &mut rng).unwrap();
            let (lo, hi) = matching_bounds(&f);
            let exact = exact_distance(&f).unwrap();
            assert!(lo <= exact && exact <= hi, "({lo},{exact},{hi})");
        }
    }

    #[test]
    fn dno_distance_exceeds_threshold() {
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        let eps = Rat::new(3, 10).unwrap();
        let f = dno_family(5, 2, eps, &mut rng).unwrap();
        let d = exact_distance(&f).unwrap();
        assert_eq!(d, 4);
        assert!(eps.count_exceeds(d, f.universe_size()));
    }

    #[test]
    fn cross_distance_examples() {
        let s1 = star_family(4, 2, 1).unwrap();
        assert_eq!(cross_distance(&s1, &s1).unwrap(), 0);

        let mut f1 = ExplicitFamily::empty(4, 2).unwrap();
        f1.insert(&KSubset::new(4, vec![1, 2]).unwrap()).unwrap();
        let mut f2 = ExplicitFamily::empty(4, 2).unwrap();
        f2.insert(&KSubset::new(4, vec![3, 4]).unwrap()).unwrap();
        assert_eq!(cross_distance(&f1, &f2).unwrap(), 1);

        let full = full_family(4, 2).unwrap();
        assert_eq!(cross_distance(&full, &full).unwrap(), 6);
        assert!(cross_distance(&full, &full).unwrap() >= exact_distance(&full).unwrap());
    }

    #[test]
    fn koenig_agrees_with_exhaustive_removal() {
        let mut rng = ChaCha8Rng::seed_from_u64(47);
        let mut checked = 0;
        while checked < 120 {
            let p = Rat::new(1 + (checked as u64 % 5), 10).unwrap();
            let f1 = random_family(5, 2, p, &mut rng).unwrap();
            let f2 = random_family(5, 2, p, &mut rng).unwrap();
            if f1.member_count() + f2.member_count() > 16 {
                continue;
            }
            checked += 1;
            assert_eq!(
                cross_distance(&f1, &f2).unwrap(),
                exhaustive_cross_distance(&f1, &f2)
            );
        }
    }

    #[test]
    fn restriction_examples() {
        let star = star_family(5, 2, 1).unwrap();
        let all = restriction(&star, &RestrictionSpec::new(vec![], vec![]).unwrap()).unwrap();
        assert_eq!(all, star);

        let none = restriction(&star, &RestrictionSpec::new(vec![1], vec![]).unwrap()).unwrap();
        assert_eq!(none.member_count(), 0);

        let full = full_family(5, 2).unwrap();
        let got = restriction(&full, &RestrictionSpec::new(vec![1, 2], vec![1]).unwrap()).unwrap();
        let members: Vec<String> = got.member_sets().iter().map(|s| s.to_text()).collect();
        assert_eq!(members, vec!["1 3", "1 4", "1 5"]);

        assert!(RestrictionSpec::new(vec![1, 2], vec![3]).is_err());
    }

    #[test]
    fn restriction_partitions_family() {
        let mut rng = ChaCha8Rng::seed_from_u64(53);
        for _ in 0..20 {
            let f = random_family(6, 2, Rat::new(1, 2).unwrap(), &mut rng).unwrap();
            for a in [vec![1u32], vec![2, 5], vec![1, 3, 6]] {
                let mut total = 0;
                let mut seen = std::collections::HashSet::new();
                for b in subsets_sorted(&a) {
                    let part =
                        restriction(&f, &RestrictionSpec::new(a.clone(), b).unwrap()).unwrap();
                    for r in part.member_ranks() {
                        assert!(seen.insert(r), "rank {r} in two parts");
                    }
                    total += part.member_count();
                }
                assert_eq!(total, f.member_count());
            }
        }
    }

    #[test]
    fn captures_examples() {
        let star = star_family(5, 2, 1).unwrap();
        assert!(captures(&star, &[1], Rat::new(1, 100).unwrap()).unwrap());
        // A = empty never captures a family of density >= eps
        assert!(!captures(&star, &[], Rat::new(2, 5).unwrap()).unwrap());
        let full = full_family(5, 2).unwrap();
        assert!(!captures(&full, &[1], Rat::new(1, 2).unwrap()).unwrap());
        assert!(captures(&full, &[1], Rat::new(7, 10).unwrap()).unwrap());
    }

    #[test]
    fn useful_sets_examples() {
        let star = star_family(5, 2, 1).unwrap();
        assert_eq!(useful_sets(&star, 1).unwrap(), 0);
        assert_eq!(useful_sets(&star, 0).unwrap(), 4);
        let full = full_family(4, 2).unwrap();
        assert_eq!(useful_sets(&full, 1).unwrap(), 6);
    }

    #[test]
    fn useful_threshold_over_far_corpus() {
        // For every eps-far family at (5,2) with |F| > k^2 C(n-2,k-2) = 4,
        // more than eps/2 * C(n,k) members are disjoint from at least
        // ceil((|F| - 4)/2) members, where eps = (distance-1)/C(n,k).
        let t = BinomialTable::new(5, 2).unwrap();
        let universe = t.binomial(5, 2);
        for mask in 0u32..(1 << universe) {
            let mut f = ExplicitFamily::empty(5, 2).unwrap();
            for r in 0..universe {
                if mask >> r & 1 == 1 {
                    f.insert_rank(r);
                }
            }
            let d = exact_distance(&f).unwrap();
            if d == 0 || f.member_count() <= 4 {
                continue;
            }
            let eps = Rat::new(d - 1, universe).unwrap();
            let threshold = (f.member_count() - 4).div_ceil(2);
            let useful = useful_sets(&f, threshold).unwrap();
            // useful > (eps/2) * C(n,k)  <=>  2 * useful * den > num * C
            assert!(
                2 * u128::from(useful) * u128::from(eps.den())
                    > u128::from(eps.num()) * u128::from(universe),
                "family mask {mask:#b}"
            );
        }
    }

    #[test]
    fn chain_cover_bound_small() {
        // Greedy chains as in the one-sided analysis: the members meeting
        // every chain set number at most k^r * C(n-r,k-r).
        let t = BinomialTable::new(8, 3).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(61);
        for trial in 0..60 {
            let (n, k) = [(6u32, 2u32), (7, 2), (8, 3), (8, 2)][trial % 4];
            let f = random_family(n, k, Rat::new(1, 2).unwrap(), &mut rng).unwrap();
            let sets = f.member_sets();
            if sets.is_empty() {
                continue;
            }
            // r = 1: chain {F}; bound k * C(n-1,k-1)
            for root in &sets {
                let meet_all = sets
                    .iter()
                    .filter(|s| !elements_disjoint(s.elements(), root.elements()))
                    .count() as u64;
                assert!(meet_all <= u64::from(k) * t.binomial(n - 1, k - 1));
            }
            // r = 2: chain {F} + {F_j1 for each j1 in F}; bound k^2 C(n-2,k-2)
            'roots: for root in &sets {
                let mut chain = vec![root.clone()];
                for &j1 in root.elements() {
                    match sets.iter().find(|s| !s.contains(j1)) {
                        Some(s) => chain.push(s.clone()),
                        None => continue 'roots, // chain incomplete
                    }
                }
                let meet_all = sets
                    .iter()
                    .filter(|s| {
                        chain
                            .iter()
                            .all(|c| !elements_disjoint(s.elements(), c.elements()))
                    })
                    .count() as u64;
                assert!(
                    meet_all <= u64::from(k) * u64::from(k) * t.binomial(n - 2, k - 2),
                    "(n,k)=({n},{k})"
                );
            }
        }
    }

    #[test]
    fn search_far_restriction_trivial_cases() {
        let star = star_family(5, 2, 1).unwrap();
        // Intersecting: hypothesis fails
        assert!(search_far_restriction(&star, 1, Rat::new(1, 10).unwrap())
            .unwrap()
            .is_none());

        // Far family with no capturing singleton: the empty triple qualifies
        let full = full_family(5, 2).unwrap();
        let eps = Rat::new(1, 2).unwrap();
        let found = search_far_restriction(&full, 1, eps).unwrap().unwrap();
        assert_eq!(
            found,
            FarRestriction {
                a: vec![],
                b: vec![],
                c: vec![]
            }
        );
    }

    #[test]
    fn search_far_restriction_r2_certificates() {
        // Two refinement rounds: the final level is eps/3^4 and capture
        // candidates run up to singletons.
        let eps_grid = [
            Rat::new(1, 5).unwrap(),
            Rat::new(1, 4).unwrap(),
            Rat::new(3, 10).unwrap(),
            Rat::new(2, 5).unwrap(),
        ];
        for seed in 0..8u64 {
            let n = 7 + (seed % 4) as u32;
            let eps = eps_grid[(seed % 4) as usize];
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let f = dno_family(n, 2, eps, &mut rng).unwrap();
            let found = search_far_restriction(&f, 2, eps).unwrap().unwrap();
            let level = eps.div_by(81).unwrap();
            let g1 =
                restriction(&f, &RestrictionSpec::new(found.a.clone(), found.b.clone()).unwrap())
                    .unwrap();
            let g2 =
                restriction(&f, &RestrictionSpec::new(found.a.clone(), found.c.clone()).unwrap())
                    .unwrap();
            let cd = cross_distance(&g1, &g2).unwrap();
            assert!(level.count_exceeds(cd, f.universe_size()), "seed {seed}");
            assert!(!captures(&g2, &[], level).unwrap());
            for e in 1..=n {
                if !found.a.contains(&e) {
                    assert!(!captures(&g2, &[e], level).unwrap(), "seed {seed}, element {e}");
                }
            }
        }
    }

    #[test]
    fn search_far_restriction_certificates_hold() {
        let mut rng = ChaCha8Rng::seed_from_u64(71);
        let eps = Rat::new(3, 10).unwrap();
        let f = dno_family(5, 2, eps, &mut rng).unwrap();
        let found = search_far_restriction(&f, 1, eps).unwrap().unwrap();
        let level = eps.div_by(3).unwrap();
        let g1 = restriction(
            &f,
            &RestrictionSpec::new(found.a.clone(), found.b.clone()).unwrap(),
        )
        .unwrap();
        let g2 = restriction(
            &f,
            &RestrictionSpec::new(found.a.clone(), found.c.clone()).unwrap(),
        )
        .unwrap();
        let cd = cross_distance(&g1, &g2).unwrap();
        assert!(level.count_exceeds(cd, f.universe_size()));
        // no subset of size <= r-1 = 0 captures: only the empty set
        assert!(!captures(&g2, &[], level).unwrap());
    }

    #[test]
    fn budget_errors_are_loud() {
        let full = full_family(12, 2).unwrap();
        // C(12,2)=66 members, K(12,2) has 66*C(10,2)/2 = 1485 edges; force a
        // tiny budget to observe the failure mode.
        assert!(matches!(
            exact_distance_with_budget(&full, 100),
            Err(Error::Budget(_))
        ));
        let big = full_family(40, 2).unwrap();
        assert!(search_far_restriction(&big, 1, Rat::new(1, 10).unwrap()).is_err());
    }
}
