//! Random instance generators and brute-force oracles shared by the test targets.
#![allow(dead_code)]

use cheapsep::assign::VertexAssignment;
use cheapsep::graph::{components, Graph};
use cheapsep::ordering::LinearOrdering;
use cheapsep::vset::VertexSet;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn gnp(rng: &mut impl Rng, n: usize, p: f64) -> Graph {
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(p) {
                edges.push((u, v));
            }
        }
    }
    Graph::from_edges(n, edges).unwrap()
}

/// A random spanning tree plus `G(n,p)` edges.
pub fn connected(rng: &mut impl Rng, n: usize, p: f64) -> Graph {
    let mut edges = Vec::new();
    for v in 1..n {
        edges.push((rng.gen_range(0..v), v));
    }
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(p) {
                edges.push((u, v));
            }
        }
    }
    Graph::from_edges(n, edges).unwrap()
}

/// Random edges kept only while both ends have degree below `max_degree`.
pub fn bounded_degree(rng: &mut impl Rng, n: usize, max_degree: usize) -> Graph {
    let mut deg = vec![0usize; n];
    let mut edges = std::collections::BTreeSet::new();
    if n >= 2 {
        for _ in 0..2 * n * max_degree {
            let u = rng.gen_range(0..n);
            let v = rng.gen_range(0..n);
            let key = (u.min(v), u.max(v));
            if u != v && deg[u] < max_degree && deg[v] < max_degree && edges.insert(key) {
                deg[u] += 1;
                deg[v] += 1;
            }
        }
    }
    Graph::from_edges(n, edges).unwrap()
}

pub fn assignment(rng: &mut impl Rng, n: usize, lo: u64, hi: u64) -> VertexAssignment {
    VertexAssignment::from_integers(&(0..n).map(|_| rng.gen_range(lo..=hi)).collect::<Vec<_>>())
}

pub fn ordering(rng: &mut impl Rng, n: usize) -> LinearOrdering {
    let mut seq: Vec<usize> = (0..n).collect();
    seq.shuffle(rng);
    LinearOrdering::from_sequence(seq).unwrap()
}

pub fn subset(rng: &mut impl Rng, n: usize, p: f64) -> VertexSet {
    let mut s = VertexSet::new(n);
    for v in 0..n {
        if rng.gen_bool(p) {
            s.insert(v);
        }
    }
    s
}

/// One representative of every connected graph on `1..=max_n` vertices up to
/// isomorphism, found by minimizing the edge bitmask over all relabelings.
pub fn connected_graphs_up_to_iso(max_n: usize) -> Vec<Graph> {
    let mut out = Vec::new();
    for n in 1..=max_n {
        let pairs: Vec<(usize, usize)> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
        let index = |u: usize, v: usize| pairs.iter().position(|&p| p == (u.min(v), u.max(v))).unwrap();
        let perms = permutations(n);
        let remap: Vec<Vec<usize>> = perms
            .iter()
            .map(|p| pairs.iter().map(|&(u, v)| index(p[u], p[v])).collect())
            .collect();
        let mut seen = std::collections::HashSet::new();
        for mask in 0u32..1 << pairs.len() {
            let g = Graph::from_edges(
                n,
                pairs
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| mask >> i & 1 == 1)
                    .map(|(_, &e)| e),
            )
            .unwrap();
            if components(&g, &VertexSet::new(n)).len() != 1 {
                continue;
            }
            let canon = remap
                .iter()
                .map(|m| {
                    m.iter()
                        .enumerate()
                        .filter(|(i, _)| mask >> i & 1 == 1)
                        .fold(0u32, |acc, (_, &j)| acc | 1 << j)
                })
                .min()
                .unwrap();
            if seen.insert(canon) {
                out.push(g);
            }
        }
    }
    out
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for i in 0..=p.len() {
            let mut q: Vec<usize> = p.clone();
            q.insert(i, n - 1);
            out.push(q);
        }
    }
    out
}

/// Integer numerators of `a` over a common denominator.
fn scaled(a: &VertexAssignment) -> Vec<i128> {
    use num_integer::Integer;
    let den = a
        .values()
        .iter()
        .fold(num_bigint::BigInt::from(1), |acc, x| acc.lcm(x.denom()));
    a.values()
        .iter()
        .map(|x| i128::try_from(x.numer() * (&den / x.denom())).unwrap())
        .collect()
}

/// Minimum number of outliers over all balanced separators, trying every
/// outlier subset by increasing size. Shares no code with the library solvers.
pub fn brute_min_outliers(g: &Graph, w: &VertexAssignment, rho: &VertexAssignment, t: u64) -> usize {
    let n = g.n();
    let (wv, rv) = (scaled(w), scaled(rho));
    let w_total: i128 = wv.iter().sum();
    let r_total: i128 = rv.iter().sum();
    let mut best = usize::MAX;
    for mask in 0u32..1 << n {
        let members: Vec<usize> = (0..n).filter(|&v| mask >> v & 1 == 1).collect();
        let sep = VertexSet::from_slice(n, &members);
        let balanced = components(g, &sep)
            .iter()
            .all(|c| 3 * c.iter().map(|&v| wv[v]).sum::<i128>() <= 2 * w_total);
        if !balanced {
            continue;
        }
        let k = members.len();
        'size: for q in 0..=k.min(best.saturating_sub(1)) {
            for drop in 0u32..1 << k {
                if drop.count_ones() as usize != q {
                    continue;
                }
                let cost: i128 = members
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| drop >> i & 1 == 0)
                    .map(|(_, &v)| rv[v])
                    .sum();
                if cost * t as i128 <= r_total {
                    best = best.min(q);
                    break 'size;
                }
            }
        }
    }
    best
}
