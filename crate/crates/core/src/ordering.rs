//! Linear orderings, weak reachability, weak coloring numbers and admissibility.

use std::collections::VecDeque;

use crate::caps::caps;
use crate::error::{Error, Result};
use crate::flow::FlowNetwork;
use crate::graph::Graph;
use crate::vset::VertexSet;

/// A bijection between vertices and positions `0..n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearOrdering {
    position: Vec<usize>,
    inverse: Vec<usize>,
}

impl LinearOrdering {
    pub fn identity(n: usize) -> Self {
        LinearOrdering {
            position: (0..n).collect(),
            inverse: (0..n).collect(),
        }
    }

    /// `sequence[i]` is the vertex at position `i`.
    pub fn from_sequence(sequence: Vec<usize>) -> Result<Self> {
        let n = sequence.len();
        let mut position = vec![usize::MAX; n];
        for (i, &v) in sequence.iter().enumerate() {
            if v >= n || position[v] != usize::MAX {
                return Err(Error::param(format!("not a permutation of 0..{n}: vertex {v}")));
            }
            position[v] = i;
        }
        Ok(LinearOrdering {
            position,
            inverse: sequence,
        })
    }

    /// Ordering of `0..keys.len()` by increasing key; keys must be distinct.
    pub fn from_keys(keys: &[usize]) -> Self {
        let mut seq: Vec<usize> = (0..keys.len()).collect();
        seq.sort_by_key(|&v| keys[v]);
        Self::from_sequence(seq).unwrap()
    }

    /// The induced ordering on `vertices`, re-indexed to local ids.
    pub fn restrict(&self, vertices: &[usize]) -> Self {
        let keys: Vec<usize> = vertices.iter().map(|&v| self.position[v]).collect();
        Self::from_keys(&keys)
    }

    pub fn len(&self) -> usize {
        self.position.len()
    }

    pub fn is_empty(&self) -> bool {
        self.position.is_empty()
    }

    pub fn position(&self, v: usize) -> usize {
        self.position[v]
    }

    pub fn vertex_at(&self, i: usize) -> usize {
        self.inverse[i]
    }

    pub fn sequence(&self) -> &[usize] {
        &self.inverse
    }

    pub fn precedes(&self, u: usize, v: usize) -> bool {
        self.position[u] < self.position[v]
    }

    pub fn to_text(&self) -> String {
        self.inverse.iter().map(|v| format!("{v}\n")).collect()
    }

    pub fn parse(text: &str, n: usize) -> Result<Self> {
        let mut seq = Vec::with_capacity(n);
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let v = line
                .parse()
                .map_err(|_| Error::parse(i + 1, format!("not a vertex id: {line:?}")))?;
            seq.push(v);
        }
        if seq.len() != n {
            return Err(Error::parse(
                0,
                format!("ordering has {} entries, graph has {n}", seq.len()),
            ));
        }
        Self::from_sequence(seq)
    }
}

/// BFS from `root` inside `allowed`, depth at most `radius`. Returns reached vertices.
fn bounded_bfs(g: &Graph, root: usize, radius: usize, allowed: impl Fn(usize) -> bool, out: &mut Vec<usize>) {
    out.clear();
    let mut depth = vec![usize::MAX; g.n()];
    depth[root] = 0;
    out.push(root);
    let mut queue = VecDeque::from([root]);
    while let Some(u) = queue.pop_front() {
        if depth[u] == radius {
            continue;
        }
        for &x in g.neighbors(u) {
            if depth[x] == usize::MAX && allowed(x) {
                depth[x] = depth[u] + 1;
                out.push(x);
                queue.push_back(x);
            }
        }
    }
}

/// For every `u`, the vertices `v` with `u` in `L_r(v)` (including `u`).
/// These are the vertices within distance `r` of `u` in the subgraph on `{x : u ⪯ x}`.
pub fn reverse_reach(g: &Graph, ord: &LinearOrdering, r: usize) -> Vec<Vec<usize>> {
    let radius = r.min(g.n());
    let mut buf = Vec::new();
    (0..g.n())
        .map(|u| {
            let pu = ord.position(u);
            bounded_bfs(g, u, radius, |x| ord.position(x) > pu, &mut buf);
            let mut set = buf.clone();
            set.sort_unstable();
            set
        })
        .collect()
}

/// `L_r(v)` for every vertex, each sorted by id.
pub fn all_reachable_sets(g: &Graph, ord: &LinearOrdering, r: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new(); g.n()];
    for (u, reached) in reverse_reach(g, ord, r).into_iter().enumerate() {
        for v in reached {
            out[v].push(u);
        }
    }
    out
}

/// `L_r(v)`: vertices `u` reachable from `v` by a path of length at most `r`
/// on which `u` is the minimum.
pub fn reachable_set(g: &Graph, ord: &LinearOrdering, r: usize, v: usize) -> VertexSet {
    let radius = r.min(g.n());
    let pv = ord.position(v);
    let mut out = VertexSet::new(g.n());
    let mut buf = Vec::new();
    for u in 0..g.n() {
        let pu = ord.position(u);
        if pu > pv {
            continue;
        }
        bounded_bfs(g, u, radius, |x| ord.position(x) > pu, &mut buf);
        if buf.contains(&v) {
            out.insert(u);
        }
    }
    out
}

/// `max_v |L_r(v)|` under the given ordering.
pub fn wcol_under(g: &Graph, ord: &LinearOrdering, r: usize) -> Result<usize> {
    if g.n() == 0 {
        return Err(Error::param("weak coloring number of the empty graph"));
    }
    let mut counts = vec![0usize; g.n()];
    for reached in reverse_reach(g, ord, r) {
        for v in reached {
            counts[v] += 1;
        }
    }
    Ok(counts.into_iter().max().unwrap())
}

/// Minimum of `wcol_under` over all orderings, with a witness ordering.
pub fn wcol_exact(g: &Graph, r: usize) -> Result<(usize, LinearOrdering)> {
    wcol_exact_capped(g, r, caps().wcol_exact)
}

pub fn wcol_exact_capped(g: &Graph, r: usize, cap: usize) -> Result<(usize, LinearOrdering)> {
    let n = g.n();
    if n > cap {
        return Err(Error::Capacity {
            what: "wcol_exact (use the heuristic ordering instead)",
            size: n,
            cap,
        });
    }
    if n == 0 {
        return Err(Error::param("weak coloring number of the empty graph"));
    }
    let start = heuristic_ordering(g, r);
    let start_value = wcol_under(g, &start, r)?;
    let mut search = ExactWcol {
        g,
        radius: r.min(n),
        best: start_value,
        best_seq: start.sequence().to_vec(),
        placed: VertexSet::new(n),
        prefix: Vec::with_capacity(n),
        counts: vec![0; n],
        buf: Vec::new(),
    };
    search.descend(0);
    let ord = LinearOrdering::from_sequence(search.best_seq)?;
    Ok((search.best, ord))
}

/// Branch and bound over orderings built front to back. Placing `u` next fixes
/// everything `u` contributes: `u ∈ L(v)` iff `v` is near `u` avoiding earlier vertices.
struct ExactWcol<'a> {
    g: &'a Graph,
    radius: usize,
    best: usize,
    best_seq: Vec<usize>,
    placed: VertexSet,
    prefix: Vec<usize>,
    counts: Vec<usize>,
    buf: Vec<usize>,
}

impl ExactWcol<'_> {
    fn descend(&mut self, current_max: usize) {
        let n = self.g.n();
        if self.prefix.len() == n {
            if current_max < self.best {
                self.best = current_max;
                self.best_seq = self.prefix.clone();
            }
            return;
        }
        for u in 0..n {
            if self.placed.contains(u) {
                continue;
            }
            let placed = &self.placed;
            let mut reached = std::mem::take(&mut self.buf);
            bounded_bfs(self.g, u, self.radius, |x| !placed.contains(x), &mut reached);
            let mut new_max = current_max;
            for &v in &reached {
                self.counts[v] += 1;
                new_max = new_max.max(self.counts[v]);
            }
            if new_max < self.best {
                self.placed.insert(u);
                self.prefix.push(u);
                self.buf = Vec::new();
                self.descend(new_max);
                self.prefix.pop();
                self.placed.remove(u);
            }
            for &v in &reached {
                self.counts[v] -= 1;
            }
            self.buf = reached;
        }
    }
}

/// Distance-`r` smallest-last ordering.
///
/// Repeatedly removes the vertex with the fewest remaining vertices within
/// distance `r` in the remaining graph; ties prefer the smaller count in the
/// full graph, then the larger id. The last vertex removed comes first.
pub fn heuristic_ordering(g: &Graph, r: usize) -> LinearOrdering {
    let n = g.n();
    let radius = r.min(n);
    let mut buf = Vec::new();
    let static_count: Vec<usize> = (0..n)
        .map(|v| {
            bounded_bfs(g, v, radius, |_| true, &mut buf);
            buf.len() - 1
        })
        .collect();
    let mut alive = VertexSet::full(n);
    let mut count = static_count.clone();
    let mut removal = Vec::with_capacity(n);
    for _ in 0..n {
        let v = alive
            .iter()
            .min_by_key(|&v| (count[v], static_count[v], std::cmp::Reverse(v)))
            .unwrap();
        bounded_bfs(g, v, radius, |x| alive.contains(x), &mut buf);
        let affected = buf.clone();
        alive.remove(v);
        for u in affected.into_iter().filter(|&u| u != v) {
            bounded_bfs(g, u, radius, |x| alive.contains(x), &mut buf);
            count[u] = buf.len() - 1;
        }
        removal.push(v);
    }
    removal.reverse();
    LinearOrdering::from_sequence(removal).unwrap()
}

/// Maximum number of paths of length at most `r` from `v`, pairwise disjoint
/// except at `v`, each ending at a vertex before `v`.
pub fn kappa(g: &Graph, ord: &LinearOrdering, r: usize, v: usize) -> Result<usize> {
    if r == 0 {
        return Err(Error::param("admissibility needs r >= 1"));
    }
    let upper = fan_flow_bound(g, ord, r, v);
    if upper == 0 {
        return Ok(0);
    }
    let mut search = FanSearch {
        g,
        ord,
        root: v,
        radius: r,
        used: VertexSet::from_slice(g.n(), &[v]),
        best: 0,
        upper,
    };
    let starts: Vec<usize> = g.neighbors(v).to_vec();
    search.choose(&starts, 0, 0);
    Ok(search.best)
}

/// Time-expanded max-flow: a relaxation that is exact for `r <= 2`, and an
/// upper bound in general.
fn fan_flow_bound(g: &Graph, ord: &LinearOrdering, r: usize, v: usize) -> usize {
    let n = g.n();
    let below = |x: usize| ord.precedes(x, v);
    // nodes: source, sink, per-vertex endpoint node, per (vertex, layer) in/out.
    let source = 0;
    let sink = 1;
    let end_node = |x: usize| 2 + x;
    let layer_in = |x: usize, d: usize| 2 + n + 2 * (x * r + (d - 1));
    let layer_out = |x: usize, d: usize| layer_in(x, d) + 1;
    let mut net = FlowNetwork::new(2 + n + 2 * n * r);
    for x in 0..n {
        if below(x) {
            net.add_arc(end_node(x), sink, 1);
        }
        for d in 1..=r {
            net.add_arc(layer_in(x, d), layer_out(x, d), 1);
        }
    }
    for &x in g.neighbors(v) {
        net.add_arc(source, layer_in(x, 1), 1);
    }
    for x in 0..n {
        if x == v {
            continue;
        }
        for d in 1..=r {
            if below(x) {
                net.add_arc(layer_out(x, d), end_node(x), 1);
                continue;
            }
            if d == r {
                continue;
            }
            for &y in g.neighbors(x) {
                if y != v {
                    net.add_arc(layer_out(x, d), layer_in(y, d + 1), 1);
                }
            }
        }
    }
    net.max_flow(source, sink) as usize
}

struct FanSearch<'a> {
    g: &'a Graph,
    ord: &'a LinearOrdering,
    root: usize,
    radius: usize,
    used: VertexSet,
    best: usize,
    upper: usize,
}

impl FanSearch<'_> {
    /// Decides, for each first vertex `starts[i..]`, whether a path begins there.
    fn choose(&mut self, starts: &[usize], i: usize, count: usize) {
        if count > self.best {
            self.best = count;
        }
        if self.best >= self.upper || i == starts.len() {
            return;
        }
        if count + (starts.len() - i) <= self.best {
            return;
        }
        let first = starts[i];
        if !self.used.contains(first) {
            self.used.insert(first);
            let mut path = vec![first];
            self.extend(starts, i, count, &mut path);
            self.used.remove(first);
        }
        if self.best >= self.upper {
            return;
        }
        self.choose(starts, i + 1, count);
    }

    /// Extends a path that currently ends at `path.last()`, stopping at the
    /// first vertex before the root.
    fn extend(&mut self, starts: &[usize], i: usize, count: usize, path: &mut Vec<usize>) {
        let tip = *path.last().unwrap();
        if self.ord.precedes(tip, self.root) {
            self.choose(starts, i + 1, count + 1);
            return;
        }
        if path.len() == self.radius {
            return;
        }
        let next: Vec<usize> = self.g.neighbors(tip).to_vec();
        for x in next {
            if self.used.contains(x) {
                continue;
            }
            self.used.insert(x);
            path.push(x);
            self.extend(starts, i, count, path);
            path.pop();
            self.used.remove(x);
            if self.best >= self.upper {
                return;
            }
        }
    }
}

pub fn adm_under(g: &Graph, ord: &LinearOrdering, r: usize) -> Result<usize> {
    let mut best = 0;
    for v in 0..g.n() {
        best = best.max(kappa(g, ord, r, v)?);
    }
    Ok(best)
}

/// All permutations of `0..n` in lexicographic order.
pub(crate) fn for_each_permutation(n: usize, mut f: impl FnMut(&[usize])) {
    let mut perm: Vec<usize> = (0..n).collect();
    loop {
        f(&perm);
        let Some(i) = (1..n).rev().find(|&i| perm[i - 1] < perm[i]) else {
            return;
        };
        let j = (i..n).rev().find(|&j| perm[j] > perm[i - 1]).unwrap();
        perm.swap(i - 1, j);
        perm[i..].reverse();
    }
}

/// Minimum of `adm_under` over all orderings, by exhaustion.
pub fn adm_exact(g: &Graph, r: usize) -> Result<(usize, LinearOrdering)> {
    let cap = caps().nabla;
    if g.n() > cap {
        return Err(Error::Capacity {
            what: "adm_exact",
            size: g.n(),
            cap,
        });
    }
    let mut best: Option<(usize, Vec<usize>)> = None;
    let mut failure = None;
    for_each_permutation(g.n(), |perm| {
        if failure.is_some() {
            return;
        }
        let ord = LinearOrdering::from_sequence(perm.to_vec()).unwrap();
        match adm_under(g, &ord, r) {
            Ok(a) if best.as_ref().is_none_or(|(b, _)| a < *b) => best = Some((a, perm.to_vec())),
            Ok(_) => {}
            Err(e) => failure = Some(e),
        }
    });
    if let Some(e) = failure {
        return Err(e);
    }
    let (value, seq) = best.unwrap_or((0, Vec::new()));
    Ok((value, LinearOrdering::from_sequence(seq)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{gen_complete, gen_path, gen_star};

    fn ord(seq: &[usize]) -> LinearOrdering {
        LinearOrdering::from_sequence(seq.to_vec()).unwrap()
    }

    #[test]
    fn ordering_basics() {
        let o = ord(&[2, 0, 1]);
        assert_eq!(o.position(2), 0);
        assert!(o.precedes(0, 1));
        assert_eq!(LinearOrdering::parse(&o.to_text(), 3).unwrap(), o);
        assert!(LinearOrdering::from_sequence(vec![0, 0]).is_err());
        let r = o.restrict(&[1, 2]);
        assert_eq!(r.sequence(), &[1, 0]);
    }

    #[test]
    fn reachable_examples() {
        let path = gen_path(3);
        let id = LinearOrdering::identity(3);
        assert_eq!(reachable_set(&path, &id, 0, 2).to_vec(), vec![2]);
        assert_eq!(reachable_set(&path, &id, 2, 2).to_vec(), vec![0, 1, 2]);
        let star = gen_star(3);
        let center_first = LinearOrdering::identity(4);
        assert_eq!(reachable_set(&star, &center_first, 1, 2).to_vec(), vec![0, 2]);
    }

    #[test]
    fn wcol_examples() {
        let edgeless = Graph::empty(4);
        assert_eq!(wcol_under(&edgeless, &LinearOrdering::identity(4), 3).unwrap(), 1);
        let star = gen_star(3);
        assert_eq!(wcol_under(&star, &LinearOrdering::identity(4), 1).unwrap(), 2);
        assert_eq!(wcol_under(&gen_path(3), &LinearOrdering::identity(3), 2).unwrap(), 3);
        assert!(wcol_under(&Graph::empty(0), &LinearOrdering::identity(0), 1).is_err());
    }

    #[test]
    fn wcol_exact_examples() {
        assert_eq!(wcol_exact(&gen_complete(3), 1).unwrap().0, 3);
        assert_eq!(wcol_exact(&Graph::empty(3), 2).unwrap().0, 1);
        let (value, witness) = wcol_exact(&gen_star(3), 2).unwrap();
        assert_eq!(value, 2);
        assert_eq!(witness.vertex_at(0), 0);
        assert!(matches!(
            wcol_exact_capped(&gen_path(5), 1, 4),
            Err(Error::Capacity { .. })
        ));
    }

    #[test]
    fn heuristic_examples() {
        let star = gen_star(5);
        assert_eq!(heuristic_ordering(&star, 1).vertex_at(0), 0);
        assert_eq!(heuristic_ordering(&Graph::empty(4), 2), LinearOrdering::identity(4));
        let path = gen_path(3);
        let h = heuristic_ordering(&path, 1);
        assert_eq!(h.vertex_at(0), 1);
        assert_eq!(wcol_under(&path, &h, 1).unwrap(), 2);
    }

    #[test]
    fn kappa_examples() {
        let star = gen_star(4);
        let center_last = ord(&[1, 2, 3, 4, 0]);
        assert_eq!(kappa(&star, &center_last, 1, 0).unwrap(), 4);
        let id = LinearOrdering::identity(5);
        assert_eq!(kappa(&star, &id, 3, 0).unwrap(), 0);
        let path = gen_path(3);
        assert_eq!(kappa(&path, &LinearOrdering::identity(3), 2, 1).unwrap(), 1);
        assert!(kappa(&path, &LinearOrdering::identity(3), 0, 1).is_err());
    }

    #[test]
    fn adm_examples() {
        let star = gen_star(4);
        assert_eq!(adm_under(&star, &LinearOrdering::identity(5), 1).unwrap(), 1);
        assert_eq!(adm_under(&Graph::empty(1), &LinearOrdering::identity(1), 2).unwrap(), 0);
        let k4 = gen_complete(4);
        assert_eq!(adm_under(&k4, &ord(&[3, 1, 0, 2]), 1).unwrap(), 3);
    }

    #[test]
    fn kappa_needs_search_beyond_flow() {
        // v = 0 last; two routes share vertex 1 at different depths.
        //   0-1, 0-2, 2-1, 1-3, 1-4 ; 3,4 before 0, 1,2 after 0.
        let g = Graph::from_edges(5, [(0, 1), (0, 2), (2, 1), (1, 3), (1, 4)]).unwrap();
        let o = ord(&[3, 4, 0, 1, 2]);
        assert_eq!(kappa(&g, &o, 3, 0).unwrap(), 1);
    }

    #[test]
    fn permutations_count() {
        let mut count = 0;
        for_each_permutation(4, |_| count += 1);
        assert_eq!(count, 24);
    }
}
