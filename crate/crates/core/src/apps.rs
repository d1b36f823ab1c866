//! Distance and edge separators built on the engine, plus exact checks of
//! the small lower-bound constructions.

use crate::assign::{int, Rational, VertexAssignment};
use crate::engine::{base_solver_exact, is_balanced_mask, iterate_separator};
use crate::error::{Error, Result};
use crate::graph::{bfs_distances, components, gen_star, BicliqueLayout, Graph};
use crate::ordering::{heuristic_ordering, reverse_reach, wcol_under, LinearOrdering};
use crate::reach::power_reach_graph;
use crate::vset::VertexSet;

/// How component sizes are measured when checking balance.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BalanceMode {
    /// Components weigh `w(K)` against `w(G)`.
    Weighted,
    /// Components weigh `|K|` against `|V(G)|`.
    Unweighted,
}

impl BalanceMode {
    pub fn weights(self, w: &VertexAssignment) -> VertexAssignment {
        match self {
            BalanceMode::Weighted => w.clone(),
            BalanceMode::Unweighted => VertexAssignment::ones(w.len()),
        }
    }
}

/// `V = A ∪ B ∪ C ∪ Z` with no path of length `<= r` from `A` to `B` in `G - Z - C`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DistanceSeparatorResult {
    pub z: VertexSet,
    pub c: VertexSet,
    pub a: VertexSet,
    pub b: VertexSet,
    pub r: usize,
    /// Outliers of the underlying power-graph separator; `z` adds rebalancing vertices.
    pub z0: VertexSet,
    /// `t · wcol_r` used for the power-graph run.
    pub scaled_t: u64,
}

/// Distance-`r` separator of size `<= n/t` after deleting `z`.
pub fn distance_separator(g: &Graph, t: u64, r: usize, a: usize) -> Result<DistanceSeparatorResult> {
    if t == 0 {
        return Err(Error::param("t must be >= 1"));
    }
    if r == 0 {
        return Err(Error::param("distance r must be >= 1"));
    }
    let n = g.n();
    let empty = VertexSet::new(n);
    if n == 0 {
        return Ok(DistanceSeparatorResult {
            z: empty.clone(),
            c: empty.clone(),
            a: empty.clone(),
            b: empty.clone(),
            r,
            z0: empty,
            scaled_t: t,
        });
    }
    let ord = heuristic_ordering(g, r);
    let power = power_reach_graph(g, &ord, r)?;
    let reverse = reverse_reach(g, &ord, r);
    let rho = VertexAssignment::from_integers(&reverse.iter().map(|s| s.len() as u64).collect::<Vec<_>>());
    let wcol = wcol_under(g, &ord, r)? as u64;
    let scaled_t = t.saturating_mul(wcol);
    let outcome = iterate_separator(&power.graph, &VertexAssignment::ones(n), &rho, scaled_t, a, &ord)?;
    let sep = &outcome.result.separator;
    let z0 = outcome.result.outliers.clone();

    let mut comps = components(&power.graph, sep);
    comps.sort_by(|x, y| y.len().cmp(&x.len()).then(x[0].cmp(&y[0])));
    let mut side_a = VertexSet::new(n);
    let mut side_b = VertexSet::new(n);
    for comp in comps {
        let target = if side_a.len() <= side_b.len() {
            &mut side_a
        } else {
            &mut side_b
        };
        for v in comp {
            target.insert(v);
        }
    }
    let mut c_prime = VertexSet::new(n);
    for u in sep.iter().filter(|&u| !z0.contains(u)) {
        for &v in &reverse[u] {
            c_prime.insert(v);
        }
    }
    side_a.difference_with(&c_prime);
    side_b.difference_with(&c_prime);

    let gap = side_a.len().abs_diff(side_b.len());
    let take = (2 * z0.len()).min(gap);
    let larger = if side_a.len() >= side_b.len() {
        &mut side_a
    } else {
        &mut side_b
    };
    let z1: Vec<usize> = larger.iter().take(take).collect();
    let mut z = z0.clone();
    for v in z1 {
        larger.remove(v);
        z.insert(v);
    }
    c_prime.difference_with(&z);
    let result = DistanceSeparatorResult {
        z,
        c: c_prime,
        a: side_a,
        b: side_b,
        r,
        z0,
        scaled_t,
    };
    if let Err(msg) = check_distance_separator(g, t, &result) {
        return Err(Error::Invariant {
            msg,
            trace: outcome.trace,
        });
    }
    Ok(result)
}

/// Independent re-check of a distance separator: partition, balance,
/// size `|C| <= n/t`, and BFS distance `> r` between the sides.
pub fn check_distance_separator(g: &Graph, t: u64, res: &DistanceSeparatorResult) -> std::result::Result<(), String> {
    let n = g.n();
    let parts = [&res.z, &res.c, &res.a, &res.b];
    let mut seen = VertexSet::new(n);
    for p in parts {
        if p.capacity() != n || !p.is_disjoint(&seen) {
            return Err("parts overlap or have the wrong size".into());
        }
        seen.union_with(p);
    }
    if seen.len() != n {
        return Err("parts do not cover the graph".into());
    }
    let rest = n - res.z.len();
    if 3 * res.a.len() > 2 * rest || 3 * res.b.len() > 2 * rest {
        return Err(format!(
            "unbalanced sides {} and {} for {} remaining vertices",
            res.a.len(),
            res.b.len(),
            rest
        ));
    }
    if res.c.len() as u64 * t > n as u64 {
        return Err(format!("separator has {} > n/t vertices", res.c.len()));
    }
    let mut blocked = res.z.clone();
    blocked.union_with(&res.c);
    let dist = bfs_distances(g, &res.a, &blocked, res.r);
    if let Some(v) = res.b.iter().find(|&v| dist[v].is_some()) {
        return Err(format!("vertex {v} of B is within distance {} of A", res.r));
    }
    Ok(())
}

/// Deleted vertices `z` and cut edges `f` (each as `(u, v)` with `u < v`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeSeparatorResult {
    pub z: VertexSet,
    pub f: Vec<(usize, usize)>,
    /// The vertex separator the edges were read off from.
    pub separator: VertexSet,
}

/// Balanced edge separator with at most `2|E|/t` edges after deleting `z`.
pub fn edge_separator(g: &Graph, t: u64, a: usize) -> Result<EdgeSeparatorResult> {
    edge_separator_with(g, t, a, &heuristic_ordering(g, 2))
}

pub fn edge_separator_with(g: &Graph, t: u64, a: usize, ord: &LinearOrdering) -> Result<EdgeSeparatorResult> {
    let n = g.n();
    if n == 1 {
        // A single vertex weighs more than 2/3 of the graph unless deleted.
        let all = VertexSet::full(1);
        return Ok(EdgeSeparatorResult {
            z: all.clone(),
            f: Vec::new(),
            separator: all,
        });
    }
    let rho = VertexAssignment::from_integers(&(0..n).map(|v| g.degree(v) as u64).collect::<Vec<_>>());
    let outcome = iterate_separator(g, &VertexAssignment::ones(n), &rho, t, a, ord)?;
    let sep = outcome.result.separator;
    let z = outcome.result.outliers;
    let f: Vec<(usize, usize)> = g
        .edges()
        .filter(|&(u, v)| {
            let cut = |x: usize| sep.contains(x) && !z.contains(x);
            (cut(u) || cut(v)) && !z.contains(u) && !z.contains(v)
        })
        .collect();
    let result = EdgeSeparatorResult { z, f, separator: sep };
    if let Err(msg) = check_edge_separator(g, t, &result) {
        return Err(Error::Invariant {
            msg,
            trace: outcome.trace,
        });
    }
    Ok(result)
}

/// Independent re-check: `|F| <= 2|E|/t` and every component of
/// `(G - Z) - F` has at most `2/3 |V(G)|` vertices.
pub fn check_edge_separator(g: &Graph, t: u64, res: &EdgeSeparatorResult) -> std::result::Result<(), String> {
    let n = g.n();
    if res.f.len() as u64 * t > 2 * g.m() as u64 {
        return Err(format!("{} edges exceed 2|E|/t", res.f.len()));
    }
    let cut: std::collections::HashSet<(usize, usize)> = res.f.iter().copied().collect();
    let kept = g
        .edges()
        .filter(|&(u, v)| !cut.contains(&(u, v)) && !res.z.contains(u) && !res.z.contains(v));
    let h = Graph::from_edges(n, kept).map_err(|e| e.to_string())?;
    for comp in components(&h, &res.z) {
        if 3 * comp.len() > 2 * n {
            return Err(format!("component of {} vertices exceeds 2/3 of {}", comp.len(), n));
        }
    }
    Ok(())
}

/// Fewest greedy outliers over all `w`-balanced separators (exhaustive, small `n`).
pub fn min_outliers_oracle(g: &Graph, w: &VertexAssignment, rho: &VertexAssignment, t: u64) -> Result<usize> {
    Ok(base_solver_exact(g, w, rho, t)?.outliers.len())
}

/// As [`min_outliers_oracle`] with the balance measured per `mode`.
pub fn min_outliers_oracle_mode(
    g: &Graph,
    w: &VertexAssignment,
    rho: &VertexAssignment,
    t: u64,
    mode: BalanceMode,
) -> Result<usize> {
    min_outliers_oracle(g, &mode.weights(w), rho, t)
}

/// Costs of the star example: `n/3` on the center, `1` on each leaf.
pub fn star_paper_costs(leaves: usize) -> VertexAssignment {
    let mut v = vec![int(1u32); leaves + 1];
    v[0] = int(leaves as u64) / int(3u32);
    VertexAssignment::new(v).unwrap()
}

/// Exhaustively confirms that every (unweighted) balanced separator of the
/// star with `n` leaves costs at least a quarter of the total.
pub fn star_cost_bound_check(n: usize) -> Result<bool> {
    if !(3..=13).contains(&n) {
        return Err(Error::param("star check needs 3 <= n <= 13"));
    }
    let g = gen_star(n);
    let rho = star_paper_costs(n);
    let ones = VertexAssignment::ones(n + 1);
    let masks = g.masks();
    let limit = int(2u32) * ones.total() / int(3u32);
    let quarter = rho.total() / int(4u32);
    for sep in 0u64..1 << (n + 1) {
        if is_balanced_mask(&masks, &ones, sep, &limit) {
            let cost = rho.sum((0..=n).filter(|&v| sep >> v & 1 == 1));
            if cost < quarter {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// The weight and cost presets on `G_{s,n}`: `w = 1` on `B`, `ρ = n` on `A`,
/// `ρ = s` on `B`, and `1` on subdivision vertices.
pub fn biclique_paper_assignments(layout: &BicliqueLayout) -> (VertexAssignment, VertexAssignment) {
    let total = layout.subdivision.end;
    let mut w = vec![0u64; total];
    let mut rho = vec![1u64; total];
    for v in layout.a_part.clone() {
        rho[v] = layout.n as u64;
    }
    for v in layout.b_part.clone() {
        w[v] = 1;
        rho[v] = layout.s as u64;
    }
    (
        VertexAssignment::from_integers(&w),
        VertexAssignment::from_integers(&rho),
    )
}

const SYMMETRY_CASE_CAP: u128 = 1 << 20;

/// Minimum outliers for `G_{s,n}` with its presets, enumerating separators
/// up to symmetry.
///
/// A separator is described by how many `A` and `B` vertices it contains
/// and by how the remaining `A` vertices are grouped into components. Each
/// remaining `B` vertex joins one group (cutting its paths to the other
/// remaining `A` vertices, one subdivision vertex per path) or is cut off
/// from all of them. Groups hold at most `⌊2n/3⌋` of the weight.
pub fn min_outliers_biclique(s: usize, n: usize, t: u64) -> Result<usize> {
    if s < 3 || n < 1 || t == 0 {
        return Err(Error::param("need s >= 3, n >= 1, t >= 1"));
    }
    let partitions: Vec<Vec<Vec<usize>>> = (0..=s).map(integer_partitions).collect();
    let cases: u128 = (0..=s).map(|a| partitions[a].len() as u128).sum::<u128>() * (n as u128 + 1);
    if cases > SYMMETRY_CASE_CAP {
        return Err(Error::Capacity {
            what: "min_outliers_biclique",
            size: cases as usize,
            cap: SYMMETRY_CASE_CAP as usize,
        });
    }
    let cap = 2 * n / 3;
    let budget_num = (s * s * n) as u128;
    let mut best = usize::MAX;
    for k_a in 0..=s {
        let alpha = s - k_a;
        for k_b in 0..=n {
            let beta = n - k_b;
            let Some(cuts) = partitions[alpha]
                .iter()
                .filter_map(|p| assignment_cost(p, alpha, beta, cap))
                .min()
            else {
                continue;
            };
            let mut costs: Vec<u128> = Vec::new();
            costs.extend(std::iter::repeat_n(n as u128, k_a));
            costs.extend(std::iter::repeat_n(s as u128, k_b));
            costs.sort_unstable_by(|x, y| y.cmp(x));
            let mut rest: u128 = costs.iter().sum::<u128>() + cuts as u128;
            let mut dropped = 0;
            let mut ones = cuts as u128;
            let mut iter = costs.into_iter();
            while rest * t as u128 > budget_num {
                match iter.next() {
                    Some(c) => rest -= c,
                    None => {
                        // Only unit-cost cuts remain.
                        let excess = rest * t as u128 - budget_num;
                        let need = excess.div_ceil(t as u128).min(ones);
                        dropped += need as usize;
                        ones -= need;
                        rest -= need;
                        continue;
                    }
                }
                dropped += 1;
            }
            best = best.min(dropped);
        }
    }
    Ok(best)
}

/// Cheapest cut count placing `beta` weight-one vertices among the groups
/// `parts` of `alpha` remaining hubs; `None` if some vertex cannot be placed.
fn assignment_cost(parts: &[usize], alpha: usize, beta: usize, cap: usize) -> Option<usize> {
    let mut left = beta;
    let mut cost = 0;
    for &p in parts {
        let k = left.min(cap);
        cost += k * (alpha - p);
        left -= k;
    }
    if left > 0 && cap == 0 {
        // With n = 1 even a lone weighted vertex exceeds 2/3 of the total.
        return None;
    }
    Some(cost + left * alpha)
}

/// Partitions of `k` into non-increasing positive parts.
fn integer_partitions(k: usize) -> Vec<Vec<usize>> {
    fn rec(k: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if k == 0 {
            out.push(cur.clone());
            return;
        }
        for p in (1..=max.min(k)).rev() {
            cur.push(p);
            rec(k - p, p, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(k, k, &mut Vec::new(), &mut out);
    out
}

/// Outcome of [`lower_bound_family_check`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LowerBoundCheck {
    /// `s - 3s²/t`.
    pub analytic: Rational,
    pub oracle: usize,
    pub pass: bool,
}

/// Compares the exact minimum outlier count on `G_{s,n}` with `⌈s - 3s²/t⌉`.
pub fn lower_bound_family_check(s: usize, n: usize, t: u64) -> Result<LowerBoundCheck> {
    if s < 3 || n <= 3 * s || t == 0 {
        return Err(Error::param("need s >= 3, n > 3s, t >= 1"));
    }
    let analytic = int(s as u64) - int(3 * (s * s) as u64) / int(t);
    let oracle = min_outliers_biclique(s, n, t)?;
    let need = analytic.ceil().to_integer();
    let pass = num_bigint::BigInt::from(oracle) >= need;
    Ok(LowerBoundCheck { analytic, oracle, pass })
}

/// `ρ(G_{s,n})` under the presets.
pub fn biclique_total_cost(layout: &BicliqueLayout) -> Rational {
    biclique_paper_assignments(layout).1.total().clone()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{gen_complete, gen_grid, gen_path, gen_subdivided_biclique};

    #[test]
    fn partitions_of_four() {
        assert_eq!(integer_partitions(4).len(), 5);
        assert_eq!(integer_partitions(0), vec![Vec::<usize>::new()]);
    }

    #[test]
    fn oracle_examples() {
        let g = gen_star(9);
        let costs = {
            let mut v = vec![1u64; 10];
            v[0] = 3;
            VertexAssignment::from_integers(&v)
        };
        assert_eq!(
            min_outliers_oracle(&g, &VertexAssignment::ones(10), &costs, 5).unwrap(),
            1
        );
        let k2 = gen_complete(2);
        let ones = VertexAssignment::ones(2);
        assert_eq!(min_outliers_oracle(&k2, &ones, &ones, 2).unwrap(), 0);
        assert_eq!(
            min_outliers_oracle(&g, &VertexAssignment::ones(10), &costs, 1).unwrap(),
            0
        );
    }

    #[test]
    fn star_bound_holds() {
        for n in [3, 9, 12] {
            assert!(star_cost_bound_check(n).unwrap(), "n={n}");
        }
    }

    #[test]
    fn biclique_total() {
        for s in 3..=4 {
            for n in 4..=10 {
                let (_, layout) = gen_subdivided_biclique(s, n).unwrap();
                assert_eq!(biclique_total_cost(&layout), int((s * s * n) as u64));
            }
        }
    }

    #[test]
    fn symmetric_oracle_matches_exhaustive() {
        for (s, n) in [(3, 1), (3, 2), (4, 1)] {
            let (g, layout) = gen_subdivided_biclique(s, n).unwrap();
            let (w, rho) = biclique_paper_assignments(&layout);
            for t in [1, 2, 3, 4, 6, 9, 12, 20, 40, 100] {
                let exact = min_outliers_oracle(&g, &w, &rho, t).unwrap();
                assert_eq!(min_outliers_biclique(s, n, t).unwrap(), exact, "s={s} n={n} t={t}");
            }
        }
    }

    #[test]
    fn lower_bound_instance() {
        let check = lower_bound_family_check(3, 10, 36).unwrap();
        assert_eq!(check.analytic, Rational::new(9.into(), 4.into()));
        assert!(check.oracle >= 3);
        assert!(check.pass);
    }

    #[test]
    fn path_edge_separator() {
        let g = gen_path(3);
        let res = edge_separator(&g, 1, 1).unwrap();
        assert!(check_edge_separator(&g, 1, &res).is_ok());
    }

    #[test]
    fn grid_distance_separator() {
        let g = gen_grid(6);
        let res = distance_separator(&g, 2, 2, 1).unwrap();
        assert!(check_distance_separator(&g, 2, &res).is_ok());
        assert!(res.c.len() <= 18);
    }

    #[test]
    fn distance_one_has_no_cross_edges() {
        let g = gen_grid(4);
        let res = distance_separator(&g, 1, 1, 1).unwrap();
        for (u, v) in g.edges() {
            assert!(!(res.a.contains(u) && res.b.contains(v) || res.a.contains(v) && res.b.contains(u)));
        }
    }
}
