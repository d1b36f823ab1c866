//! Simple undirected graphs over dense ids, traversals, generators and the
//! edge-list format.

use std::collections::VecDeque;
use std::ops::Range;

use crate::assign::{int, Rational};
use crate::error::{Error, Result};
use crate::vset::VertexSet;

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Graph {
    adj: Vec<Vec<usize>>,
    edge_count: usize,
}

impl Graph {
    pub fn empty(n: usize) -> Self {
        Graph {
            adj: vec![Vec::new(); n],
            edge_count: 0,
        }
    }

    /// Builds a simple graph. Duplicate edges are collapsed; self-loops and
    /// out-of-range endpoints are rejected.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut adj = vec![Vec::new(); n];
        for (u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::param(format!("edge {u}-{v} out of range for n={n}")));
            }
            if u == v {
                return Err(Error::param(format!("self-loop at {u}")));
            }
            adj[u].push(v);
            adj[v].push(u);
        }
        Ok(Self::from_adjacency(adj))
    }

    /// Sorts and dedups the lists. The caller guarantees symmetry and no loops.
    pub(crate) fn from_adjacency(mut adj: Vec<Vec<usize>>) -> Self {
        let mut total = 0;
        for list in &mut adj {
            list.sort_unstable();
            list.dedup();
            total += list.len();
        }
        Graph {
            adj,
            edge_count: total / 2,
        }
    }

    pub fn n(&self) -> usize {
        self.adj.len()
    }

    pub fn m(&self) -> usize {
        self.edge_count
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn max_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u].binary_search(&v).is_ok()
    }

    /// Each edge once, as `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adj
            .iter()
            .enumerate()
            .flat_map(|(u, list)| list.iter().filter(move |&&v| u < v).map(move |&v| (u, v)))
    }

    /// Induced subgraph; local id `i` corresponds to `vertices[i]`.
    pub fn induced(&self, vertices: &[usize]) -> Graph {
        let mut local = vec![usize::MAX; self.n()];
        for (i, &v) in vertices.iter().enumerate() {
            local[v] = i;
        }
        let adj = vertices
            .iter()
            .map(|&v| {
                self.adj[v]
                    .iter()
                    .filter_map(|&u| (local[u] != usize::MAX).then_some(local[u]))
                    .collect()
            })
            .collect();
        Graph::from_adjacency(adj)
    }

    /// Adjacency bitmasks, for graphs with at most 64 vertices.
    pub(crate) fn masks(&self) -> Vec<u64> {
        assert!(self.n() <= 64);
        self.adj
            .iter()
            .map(|list| list.iter().fold(0u64, |m, &v| m | 1 << v))
            .collect()
    }

    pub fn density(&self) -> Result<Rational> {
        if self.n() == 0 {
            return Err(Error::param("density of the empty graph"));
        }
        Ok(Rational::new((self.m() as u64).into(), (self.n() as u64).into()))
    }

    pub fn to_edge_list(&self) -> String {
        let mut out = format!("{} {}\n", self.n(), self.m());
        for (u, v) in self.edges() {
            out.push_str(&format!("{u} {v}\n"));
        }
        out
    }

    /// Parses the `n m` header followed by `m` lines `u v`. `#` lines are comments.
    pub fn parse_edge_list(text: &str) -> Result<Graph> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
        let (hline, header) = lines.next().ok_or_else(|| Error::parse(1, "missing header"))?;
        let (n, m) = parse_pair(hline, header)?;
        let mut adj = vec![Vec::new(); n];
        let mut seen = 0;
        for (lineno, line) in lines {
            let (u, v) = parse_pair(lineno, line)?;
            if u >= n || v >= n {
                return Err(Error::parse(lineno, format!("vertex id out of range (n={n})")));
            }
            if u == v {
                return Err(Error::parse(lineno, format!("self-loop at vertex {u}")));
            }
            adj[u].push(v);
            adj[v].push(u);
            seen += 1;
        }
        if seen != m {
            return Err(Error::parse(hline, format!("header declares {m} edges, found {seen}")));
        }
        Ok(Graph::from_adjacency(adj))
    }
}

fn parse_pair(lineno: usize, line: &str) -> Result<(usize, usize)> {
    let mut it = line.split_whitespace();
    let mut next = || -> Result<usize> {
        it.next()
            .ok_or_else(|| Error::parse(lineno, "expected two integers"))?
            .parse()
            .map_err(|_| Error::parse(lineno, format!("malformed line {line:?}")))
    };
    let a = next()?;
    let b = next()?;
    if it.next().is_some() {
        return Err(Error::parse(lineno, format!("trailing tokens in {line:?}")));
    }
    Ok((a, b))
}

/// Connected components of `g - removed`, each sorted, listed by smallest vertex.
pub fn components(g: &Graph, removed: &VertexSet) -> Vec<Vec<usize>> {
    let mut seen = removed.clone();
    let mut out = Vec::new();
    let mut queue = VecDeque::new();
    for s in 0..g.n() {
        if seen.contains(s) {
            continue;
        }
        seen.insert(s);
        queue.push_back(s);
        let mut comp = Vec::new();
        while let Some(u) = queue.pop_front() {
            comp.push(u);
            for &v in g.neighbors(u) {
                if seen.insert(v) {
                    queue.push_back(v);
                }
            }
        }
        comp.sort_unstable();
        out.push(comp);
    }
    out
}

/// Hop distances from `sources` avoiding `forbidden`, explored up to `max_depth`.
/// Unreached vertices get `None`.
pub fn bfs_distances(g: &Graph, sources: &VertexSet, forbidden: &VertexSet, max_depth: usize) -> Vec<Option<usize>> {
    let mut dist = vec![None; g.n()];
    let mut queue = VecDeque::new();
    for s in sources.iter() {
        if !forbidden.contains(s) {
            dist[s] = Some(0);
            queue.push_back(s);
        }
    }
    while let Some(u) = queue.pop_front() {
        let d = dist[u].unwrap();
        if d == max_depth {
            continue;
        }
        for &v in g.neighbors(u) {
            if dist[v].is_none() && !forbidden.contains(v) {
                dist[v] = Some(d + 1);
                queue.push_back(v);
            }
        }
    }
    dist
}

/// Vertices within `radius` steps of `sources` in `g - forbidden`.
pub fn ball(g: &Graph, sources: &VertexSet, radius: usize, forbidden: &VertexSet) -> VertexSet {
    let dist = bfs_distances(g, sources, forbidden, radius);
    let mut out = VertexSet::new(g.n());
    for (v, d) in dist.iter().enumerate() {
        if d.is_some() {
            out.insert(v);
        }
    }
    out
}

/// `N(X)`: vertices outside `set` and outside `forbidden` with a neighbor in `set`.
pub fn neighborhood(g: &Graph, set: &VertexSet, forbidden: &VertexSet) -> VertexSet {
    let mut out = VertexSet::new(g.n());
    for u in set.iter() {
        for &v in g.neighbors(u) {
            if !set.contains(v) && !forbidden.contains(v) {
                out.insert(v);
            }
        }
    }
    out
}

/// Distance between two vertex sets in `g - forbidden`, `None` if disconnected.
pub fn set_distance(g: &Graph, a: &VertexSet, b: &VertexSet, forbidden: &VertexSet) -> Option<usize> {
    let dist = bfs_distances(g, a, forbidden, usize::MAX);
    b.iter().filter_map(|v| dist[v]).min()
}

pub fn gen_path(n: usize) -> Graph {
    Graph::from_edges(n, (1..n).map(|i| (i - 1, i))).unwrap()
}

pub fn gen_complete(n: usize) -> Graph {
    Graph::from_edges(n, (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v)))).unwrap()
}

/// `k x k` grid, row-major ids.
pub fn gen_grid(k: usize) -> Graph {
    let id = |r: usize, c: usize| r * k + c;
    let mut edges = Vec::new();
    for r in 0..k {
        for c in 0..k {
            if c + 1 < k {
                edges.push((id(r, c), id(r, c + 1)));
            }
            if r + 1 < k {
                edges.push((id(r, c), id(r + 1, c)));
            }
        }
    }
    Graph::from_edges(k * k, edges).unwrap()
}

/// `K_{1,leaves}` with the center at id 0.
pub fn gen_star(leaves: usize) -> Graph {
    Graph::from_edges(leaves + 1, (1..=leaves).map(|i| (0, i))).unwrap()
}

/// Vertex layout of the subdivided biclique `G_{s,n}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BicliqueLayout {
    pub s: usize,
    pub n: usize,
    pub a_part: Range<usize>,
    pub b_part: Range<usize>,
    pub subdivision: Range<usize>,
}

impl BicliqueLayout {
    /// Internal vertices of the path from `a_part[i]` to `b_part[j]`, ordered from the A end.
    pub fn path_vertices(&self, i: usize, j: usize) -> Range<usize> {
        let len = self.s - 2;
        let start = self.subdivision.start + (i * self.n + j) * len;
        start..start + len
    }
}

/// `K_{s,n}` with every edge subdivided `s - 2` times. Ids: A, then B, then
/// subdivision vertices path by path (`(i, j)` in lexicographic order).
pub fn gen_subdivided_biclique(s: usize, n: usize) -> Result<(Graph, BicliqueLayout)> {
    if s < 3 {
        return Err(Error::param(format!("G_(s,n) needs s >= 3, got {s}")));
    }
    if n < 1 {
        return Err(Error::param("G_(s,n) needs n >= 1"));
    }
    let sub_start = s + n;
    let total = sub_start + n * s * (s - 2);
    let layout = BicliqueLayout {
        s,
        n,
        a_part: 0..s,
        b_part: s..s + n,
        subdivision: sub_start..total,
    };
    let mut edges = Vec::new();
    for i in 0..s {
        for j in 0..n {
            let mut prev = i;
            for x in layout.path_vertices(i, j) {
                edges.push((prev, x));
                prev = x;
            }
            edges.push((prev, s + j));
        }
    }
    Ok((Graph::from_edges(total, edges)?, layout))
}

/// Exact density `|E| / |V|`.
pub fn density(g: &Graph) -> Result<Rational> {
    g.density()
}

pub(crate) fn ratio(p: usize, q: usize) -> Rational {
    int(p as u64) / int(q as u64)
}
