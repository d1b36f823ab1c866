//! Reachability power graphs and shallow-minor oracles.

use num_traits::Zero;

use crate::assign::{int, Rational};
use crate::caps::caps;
use crate::error::{Error, Result};
use crate::graph::{ratio, Graph};
use crate::ordering::{all_reachable_sets, reverse_reach, LinearOrdering};
use crate::vset::VertexSet;

/// `G^[≺,m]`, or its restriction to the union of `L_m(x)` over a generating set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PowerGraph {
    pub graph: Graph,
    pub radius: usize,
    /// Base id of each local vertex, sorted increasingly.
    pub vertices: Vec<usize>,
    /// The generating set, for the restricted form.
    pub generators: Option<VertexSet>,
}

impl PowerGraph {
    pub fn local_of(&self, base: usize) -> Option<usize> {
        self.vertices.binary_search(&base).ok()
    }
}

/// Power graph joining every `v` to each `u ≠ v` in `L_m(v)`.
pub fn power_reach_graph(g: &Graph, ord: &LinearOrdering, m: usize) -> Result<PowerGraph> {
    if m == 0 {
        return Err(Error::param("power graph radius must be >= 1"));
    }
    let mut adj = vec![Vec::new(); g.n()];
    for (u, reached) in reverse_reach(g, ord, m).into_iter().enumerate() {
        for v in reached {
            if v != u {
                adj[u].push(v);
                adj[v].push(u);
            }
        }
    }
    Ok(PowerGraph {
        graph: Graph::from_adjacency(adj),
        radius: m,
        vertices: (0..g.n()).collect(),
        generators: None,
    })
}

/// Induced subgraph of the power graph on `∪_{x∈X} L_m(x)`.
pub fn restricted_reach_graph(g: &Graph, ord: &LinearOrdering, m: usize, generators: &VertexSet) -> Result<PowerGraph> {
    let full = power_reach_graph(g, ord, m)?;
    let sets = all_reachable_sets(g, ord, m);
    let mut keep = VertexSet::new(g.n());
    for x in generators.iter() {
        for &u in &sets[x] {
            keep.insert(u);
        }
    }
    let vertices = keep.to_vec();
    Ok(PowerGraph {
        graph: full.graph.induced(&vertices),
        radius: m,
        vertices,
        generators: Some(generators.clone()),
    })
}

/// Enumerates every way to pick disjoint vertex groups ("bags") in a graph with
/// at most 64 vertices, calling `visit` with the bag masks. Each vertex is
/// either unused or in one bag; bags are canonical (restricted growth).
fn for_each_bag_system(n: usize, mut visit: impl FnMut(&[u64])) {
    fn rec(v: usize, n: usize, bags: &mut Vec<u64>, visit: &mut dyn FnMut(&[u64])) {
        if v == n {
            visit(bags);
            return;
        }
        rec(v + 1, n, bags, visit);
        for i in 0..bags.len() {
            bags[i] |= 1 << v;
            rec(v + 1, n, bags, visit);
            bags[i] &= !(1 << v);
        }
        bags.push(1 << v);
        rec(v + 1, n, bags, visit);
        bags.pop();
    }
    rec(0, n, &mut Vec::new(), &mut visit);
}

/// Per-mask check: `mask` induces a connected subgraph of radius at most `r`.
fn shallow_bag_table(masks: &[u64], r: usize) -> Vec<bool> {
    let n = masks.len();
    (0..1u64 << n)
        .map(|bag| {
            if bag == 0 {
                return false;
            }
            (0..n).filter(|&c| bag >> c & 1 == 1).any(|c| {
                let mut reached = 1u64 << c;
                let mut frontier = reached;
                for _ in 0..r {
                    let mut next = 0;
                    for x in 0..n {
                        if frontier >> x & 1 == 1 {
                            next |= masks[x];
                        }
                    }
                    frontier = next & bag & !reached;
                    reached |= frontier;
                }
                reached == bag
            })
        })
        .collect()
}

fn check_cap(g: &Graph, what: &'static str) -> Result<()> {
    let cap = caps().nabla;
    if g.n() > cap {
        return Err(Error::Capacity { what, size: g.n(), cap });
    }
    Ok(())
}

/// Visits each depth-`r` minor as the list of adjacency masks between its bags.
fn for_each_shallow_minor(g: &Graph, r: usize, mut visit: impl FnMut(&[u64], &[Vec<bool>])) {
    let masks = g.masks();
    let valid = shallow_bag_table(&masks, r);
    let mut adjacency: Vec<Vec<bool>> = Vec::new();
    for_each_bag_system(g.n(), |bags| {
        if bags.is_empty() || !bags.iter().all(|&b| valid[b as usize]) {
            return;
        }
        let reach: Vec<u64> = bags
            .iter()
            .map(|&b| (0..g.n()).filter(|&x| b >> x & 1 == 1).fold(0, |acc, x| acc | masks[x]))
            .collect();
        adjacency.clear();
        for i in 0..bags.len() {
            adjacency.push((0..bags.len()).map(|j| i != j && reach[i] & bags[j] != 0).collect());
        }
        visit(bags, &adjacency);
    });
}

/// Exact `∇_r(g)`: maximum `|E(H)|/|V(H)|` over depth-`r` minors `H`.
pub fn nabla_bruteforce(g: &Graph, r: usize) -> Result<Rational> {
    check_cap(g, "nabla_bruteforce")?;
    let mut best = Rational::zero();
    for_each_shallow_minor(g, r, |bags, adjacency| {
        let edges: usize = adjacency
            .iter()
            .map(|row| row.iter().filter(|&&x| x).count())
            .sum::<usize>()
            / 2;
        let d = ratio(edges, bags.len());
        if d > best {
            best = d;
        }
    });
    Ok(best)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OmegaMode {
    Exact,
    Greedy,
}

/// Bounds on `ω_l`. Exact mode returns equal bounds. In greedy mode `lower` is
/// certified by an explicit clique minor and `upper` is the density surrogate
/// `2∇̂+1`, where `∇̂` comes from densest-subgraph peeling; it is not certified.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OmegaBounds {
    pub lower: usize,
    pub upper: usize,
}

pub fn omega_shallow(g: &Graph, l: usize, mode: OmegaMode) -> Result<OmegaBounds> {
    match mode {
        OmegaMode::Exact => {
            check_cap(g, "omega_shallow (exact)")?;
            let mut best = 0;
            for_each_shallow_minor(g, l, |bags, adjacency| {
                let k = bags.len();
                if k > best && (0..k).all(|i| (0..k).all(|j| i == j || adjacency[i][j])) {
                    best = k;
                }
            });
            Ok(OmegaBounds {
                lower: best,
                upper: best,
            })
        }
        OmegaMode::Greedy => {
            let lower = greedy_clique_minor(g, l).len();
            let dens = peeling_density(g);
            let surrogate = (int(2u32) * dens).floor().to_integer();
            let surrogate: usize = surrogate.try_into().unwrap_or(usize::MAX - 1) + 1;
            let upper = if g.n() == 0 { 0 } else { surrogate.max(lower) };
            Ok(OmegaBounds { lower, upper })
        }
    }
}

/// Grows a clique minor bag by bag: each new bag is the union of shortest
/// paths (within `l` steps through unused vertices) from a fresh center to a
/// neighbor of every existing bag.
pub fn greedy_clique_minor(g: &Graph, l: usize) -> Vec<Vec<usize>> {
    let n = g.n();
    let mut used = VertexSet::new(n);
    let mut bags: Vec<VertexSet> = Vec::new();
    for center in 0..n {
        if used.contains(center) {
            continue;
        }
        let (dist, parent) = bfs_tree(g, center, &used, l);
        let mut bag = VertexSet::from_slice(n, &[center]);
        let mut ok = true;
        for existing in &bags {
            let target = (0..n)
                .filter(|&u| dist[u].is_some() && g.neighbors(u).iter().any(|&x| existing.contains(x)))
                .min_by_key(|&u| (dist[u], u));
            match target {
                Some(mut u) => {
                    while u != center {
                        bag.insert(u);
                        u = parent[u];
                    }
                }
                None => {
                    ok = false;
                    break;
                }
            }
        }
        if ok {
            used.union_with(&bag);
            bags.push(bag);
        }
    }
    bags.into_iter().map(|b| b.to_vec()).collect()
}

pub(crate) fn bfs_tree(
    g: &Graph,
    root: usize,
    forbidden: &VertexSet,
    max_depth: usize,
) -> (Vec<Option<usize>>, Vec<usize>) {
    let n = g.n();
    let mut dist = vec![None; n];
    let mut parent = vec![usize::MAX; n];
    dist[root] = Some(0);
    let mut queue = std::collections::VecDeque::from([root]);
    while let Some(u) = queue.pop_front() {
        let d = dist[u].unwrap();
        if d == max_depth {
            continue;
        }
        for &x in g.neighbors(u) {
            if dist[x].is_none() && !forbidden.contains(x) {
                dist[x] = Some(d + 1);
                parent[x] = u;
                queue.push_back(x);
            }
        }
    }
    (dist, parent)
}

/// Largest density seen while peeling minimum-degree vertices.
pub fn peeling_density(g: &Graph) -> Rational {
    let n = g.n();
    if n == 0 {
        return Rational::zero();
    }
    let mut deg: Vec<usize> = (0..n).map(|v| g.degree(v)).collect();
    let mut alive = VertexSet::full(n);
    let mut edges = g.m();
    let mut best = ratio(edges, n);
    for remaining in (2..=n).rev() {
        let v = alive.iter().min_by_key(|&v| (deg[v], v)).unwrap();
        alive.remove(v);
        edges -= deg[v];
        for &u in g.neighbors(v) {
            if alive.contains(u) {
                deg[u] -= 1;
            }
        }
        let d = ratio(edges, remaining - 1);
        if d > best {
            best = d;
        }
    }
    best
}

/// Expansion polynomial of a power graph: if `∇_r(G) <= c(r+1)^k` then
/// `∇_r(G^[≺,m]) <= c'(r+1)^(k+2)` with `c' = 5·wcol_m²·(2m+1)^(k+2)·c`.
pub fn expansion_bound_after_power(c: &Rational, k: u32, m: u64, wcol_m: u64) -> Result<(Rational, u32)> {
    if c < &int(1u32) || m == 0 || wcol_m == 0 {
        return Err(Error::param("need c >= 1, m >= 1, wcol_m >= 1"));
    }
    let base = int(2 * m + 1);
    let power = num_traits::pow(base, (k + 2) as usize);
    let c_prime = int(5u32) * int(wcol_m) * int(wcol_m) * power * c;
    Ok((c_prime, k + 2))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::assign::rat;
    use crate::graph::{gen_complete, gen_path, gen_star};

    #[test]
    fn power_graph_examples() {
        let path = gen_path(3);
        let id = LinearOrdering::identity(3);
        assert_eq!(power_reach_graph(&path, &id, 1).unwrap().graph, path);
        let p2 = power_reach_graph(&path, &id, 2).unwrap();
        assert_eq!(p2.graph, gen_complete(3));
        let edgeless = Graph::empty(4);
        assert_eq!(
            power_reach_graph(&edgeless, &LinearOrdering::identity(4), 3)
                .unwrap()
                .graph
                .m(),
            0
        );
        assert!(power_reach_graph(&path, &id, 0).is_err());
    }

    #[test]
    fn restricted_examples() {
        let path = gen_path(3);
        let id = LinearOrdering::identity(3);
        let empty = restricted_reach_graph(&path, &id, 2, &VertexSet::new(3)).unwrap();
        assert_eq!(empty.graph.n(), 0);
        let all = restricted_reach_graph(&path, &id, 2, &VertexSet::full(3)).unwrap();
        assert_eq!(all.graph, power_reach_graph(&path, &id, 2).unwrap().graph);
        let top = restricted_reach_graph(&path, &id, 2, &VertexSet::from_slice(3, &[2])).unwrap();
        assert_eq!(top.vertices, vec![0, 1, 2]);
        assert_eq!(top.graph.m(), 3);
        let low = restricted_reach_graph(&path, &id, 2, &VertexSet::from_slice(3, &[0])).unwrap();
        assert_eq!(low.vertices, vec![0]);
    }

    #[test]
    fn nabla_examples() {
        assert_eq!(nabla_bruteforce(&gen_complete(4), 0).unwrap(), rat(3, 2));
        for r in 0..3 {
            assert_eq!(nabla_bruteforce(&Graph::empty(5), r).unwrap(), rat(0, 1));
        }
        assert_eq!(nabla_bruteforce(&gen_star(3), 1).unwrap(), rat(3, 4));
        // Contracting a path of 5 at depth 1 gives at best a path again.
        assert_eq!(nabla_bruteforce(&gen_path(5), 1).unwrap(), rat(4, 5));
        // C4 contracts to a triangle at depth 1.
        let c4 = Graph::from_edges(4, [(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap();
        assert_eq!(nabla_bruteforce(&c4, 1).unwrap(), rat(1, 1));
        assert!(matches!(nabla_bruteforce(&gen_path(8), 1), Err(Error::Capacity { .. })));
    }

    #[test]
    fn omega_examples() {
        let exact = |g: &Graph, l| omega_shallow(g, l, OmegaMode::Exact).unwrap().lower;
        assert_eq!(exact(&gen_complete(4), 0), 4);
        assert_eq!(exact(&gen_path(5), 1), 2);
        assert_eq!(exact(&gen_star(3), 1), 2);
        let c4 = Graph::from_edges(4, [(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap();
        assert_eq!(exact(&c4, 0), 2);
        assert_eq!(exact(&c4, 1), 3);
    }

    #[test]
    fn omega_greedy_brackets_exact_lower() {
        let k4 = gen_complete(4);
        let b = omega_shallow(&k4, 1, OmegaMode::Greedy).unwrap();
        assert_eq!(b, OmegaBounds { lower: 4, upper: 4 });
        let path = gen_path(6);
        let b = omega_shallow(&path, 2, OmegaMode::Greedy).unwrap();
        assert_eq!(b.lower, 2);
        assert_eq!(b.upper, 2);
    }

    #[test]
    fn expansion_bound_formula() {
        let one = rat(1, 1);
        assert_eq!(expansion_bound_after_power(&one, 0, 1, 1).unwrap(), (rat(45, 1), 2));
        assert_eq!(expansion_bound_after_power(&one, 0, 1, 2).unwrap(), (rat(180, 1), 2));
        let (_, k) = expansion_bound_after_power(&rat(7, 2), 3, 2, 4).unwrap();
        assert_eq!(k, 5);
        assert!(expansion_bound_after_power(&rat(1, 2), 0, 1, 1).is_err());
    }
}
