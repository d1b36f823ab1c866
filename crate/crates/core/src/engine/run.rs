//! The separator state machine: steps (a)-(e) over `(A, B, C, D, K, r_i)`.

use num_traits::{One, Zero};

use super::params::EngineParams;
use super::{verify_separator, SeparatorResult, SubSolver};
use crate::assign::{int, Rational, VertexAssignment};
use crate::error::{Error, Result};
use crate::expander::{grow_within, ExpanderWitness};
use crate::graph::{bfs_distances, neighborhood, Graph};
use crate::ordering::LinearOrdering;
use crate::reach::{bfs_tree, restricted_reach_graph};
use crate::vset::VertexSet;

/// Result of [`run_engine`] with its transition log.
#[derive(Debug, Clone)]
pub struct EngineOutcome {
    pub result: SeparatorResult,
    /// One line per transition of the final attempt, plus a line per restart.
    pub trace: Vec<String>,
    pub transitions: usize,
    pub restarts: usize,
    /// Parameters of the attempt that succeeded.
    pub params: EngineParams,
}

/// Runs the engine, doubling `ω̂` and restarting whenever a clique minor
/// outgrows it.
pub fn run_engine(
    g: &Graph,
    w: &VertexAssignment,
    rho: &VertexAssignment,
    ord: &LinearOrdering,
    params: &EngineParams,
    sub: &mut dyn SubSolver,
) -> Result<EngineOutcome> {
    let base = params.clone();
    run_engine_with(g, w, rho, ord, params, sub, &mut |omega| base.with_omega(omega))
}

pub(crate) fn run_engine_with(
    g: &Graph,
    w: &VertexAssignment,
    rho: &VertexAssignment,
    ord: &LinearOrdering,
    params: &EngineParams,
    sub: &mut dyn SubSolver,
    on_restart: &mut dyn FnMut(u64) -> EngineParams,
) -> Result<EngineOutcome> {
    if params.t == 0 {
        return Err(Error::param("t must be >= 1"));
    }
    if w.len() != g.n() || rho.len() != g.n() || ord.len() != g.n() {
        return Err(Error::param("assignment or ordering size does not match the graph"));
    }
    let n = g.n();
    if rho.total().is_zero() {
        let all = VertexSet::full(n);
        return Ok(EngineOutcome {
            result: SeparatorResult::new(g, w, rho, all, VertexSet::new(n)),
            trace: vec![format!("step=a |A|=0 |B|=0 |C|={n} |D|=0 |K|=0 r=0")],
            transitions: 0,
            restarts: 0,
            params: params.clone(),
        });
    }
    let mut params = params.clone();
    let mut trace = Vec::new();
    let mut restarts = 0;
    loop {
        let mut run = Run::new(g, w, rho, ord, &params, &mut *sub);
        match run.execute()? {
            Attempt::Done(result) => {
                trace.extend(run.trace);
                return Ok(EngineOutcome {
                    result,
                    trace,
                    transitions: run.transitions,
                    restarts,
                    params,
                });
            }
            Attempt::Restart(bags) => {
                let omega = params.omega_hat.saturating_mul(2).max(bags as u64);
                params = on_restart(omega);
                restarts += 1;
                trace.push(format!("restart omega_hat={}", params.omega_hat));
            }
        }
    }
}

enum Attempt {
    Done(SeparatorResult),
    /// The clique minor would need this many bags.
    Restart(usize),
}

#[derive(Debug, Clone)]
struct Bag {
    vertices: VertexSet,
    center: usize,
    paths: Vec<Vec<usize>>,
}

struct Heavy {
    vertices: Vec<usize>,
    components: Vec<Vec<usize>>,
}

enum Step {
    Stop,
    Witness(ExpanderWitness),
    AbsorbHeavy(Vec<usize>),
    Subsolve,
    DropBag(usize),
    NewBag(Bag),
    Restart(usize),
}

struct Run<'a> {
    g: &'a Graph,
    w: &'a VertexAssignment,
    rho: &'a VertexAssignment,
    ord: &'a LinearOrdering,
    p: &'a EngineParams,
    sub: &'a mut dyn SubSolver,
    rho_g: Rational,
    heavy_threshold: Rational,
    a: VertexSet,
    b: VertexSet,
    c: VertexSet,
    d: VertexSet,
    k: VertexSet,
    r_i: u64,
    bags: Vec<Bag>,
    trace: Vec<String>,
    transitions: usize,
}

impl<'a> Run<'a> {
    fn new(
        g: &'a Graph,
        w: &'a VertexAssignment,
        rho: &'a VertexAssignment,
        ord: &'a LinearOrdering,
        p: &'a EngineParams,
        sub: &'a mut dyn SubSolver,
    ) -> Self {
        let n = g.n();
        let rho_g = rho.total().clone();
        let five_t = int(5u32) * int(p.t);
        let c0_threshold = &rho_g / (&five_t * int(p.n));
        let mut c = VertexSet::new(n);
        for v in 0..n {
            if rho.get(v) < &c0_threshold {
                c.insert(v);
            }
        }
        let heavy_threshold = &rho_g / (&five_t * int(p.b));
        Run {
            g,
            w,
            rho,
            ord,
            p,
            sub,
            rho_g,
            heavy_threshold,
            a: VertexSet::new(n),
            b: VertexSet::new(n),
            c,
            d: VertexSet::new(n),
            k: VertexSet::new(n),
            r_i: 0,
            bags: Vec::new(),
            trace: Vec::new(),
            transitions: 0,
        }
    }

    fn n(&self) -> usize {
        self.g.n()
    }

    fn removed(&self) -> VertexSet {
        let mut s = self.a.clone();
        for x in [&self.b, &self.c, &self.d, &self.k] {
            s.union_with(x);
        }
        s
    }

    fn clamp(&self, x: u64) -> usize {
        x.min(self.n() as u64) as usize
    }

    fn status(&self, step: &str) -> String {
        format!(
            "step={} |A|={} |B|={} |C|={} |D|={} |K|={} r={}",
            step,
            self.a.len(),
            self.b.len(),
            self.c.len(),
            self.d.len(),
            self.k.len(),
            self.r_i
        )
    }

    fn fail(&self, msg: impl Into<String>) -> Error {
        Error::Invariant {
            msg: msg.into(),
            trace: self.trace.clone(),
        }
    }

    fn execute(&mut self) -> Result<Attempt> {
        let n = self.n() as u128;
        let limit = (n + self.p.r as u128) * (n + 1);
        self.check_invariants()?;
        loop {
            let step = self.choose()?;
            let label = match step {
                Step::Stop => {
                    self.trace.push(self.status("a"));
                    return self.finish().map(Attempt::Done);
                }
                Step::Restart(bags) => return Ok(Attempt::Restart(bags)),
                Step::Witness(z) => {
                    let removed = self.removed();
                    let boundary = neighborhood(self.g, &z.set, &removed);
                    self.a.union_with(&z.set);
                    self.b.union_with(&boundary);
                    "b"
                }
                Step::AbsorbHeavy(h) => {
                    for v in h {
                        self.c.insert(v);
                    }
                    "c1"
                }
                Step::Subsolve => {
                    self.subsolve()?;
                    "c2"
                }
                Step::DropBag(i) => {
                    let bag = self.bags.remove(i);
                    self.k.difference_with(&bag.vertices);
                    self.a.union_with(&bag.vertices);
                    "d"
                }
                Step::NewBag(bag) => {
                    self.k.union_with(&bag.vertices);
                    self.bags.push(bag);
                    "e"
                }
            };
            self.transitions += 1;
            self.trace.push(self.status(label));
            if self.transitions as u128 > limit {
                return Err(self.fail(format!("more than {limit} transitions")));
            }
            self.check_invariants()?;
        }
    }

    fn choose(&mut self) -> Result<Step> {
        let removed = self.removed();
        let residual = removed.complement();
        let w_r = self.w.sum(residual.iter());
        if w_r * int(3u32) <= int(2u32) * self.w.total() {
            return Ok(Step::Stop);
        }
        let heavy = self.heavy_graph(&removed);
        if !heavy.vertices.is_empty() {
            let rho_h = self.rho.sum(heavy.vertices.iter().copied());
            if &rho_h * int(5u32) * int(self.p.t) <= self.rho_g {
                return Ok(Step::AbsorbHeavy(heavy.vertices));
            }
            let rho_m = self.rho.sum(heavy.components[0].iter().copied());
            if rho_m * int(4u32) >= &rho_h * int(3u32) {
                return Ok(Step::Subsolve);
            }
            return self.split_witness(&heavy, &rho_h, &removed);
        }
        for (i, bag) in self.bags.iter().enumerate() {
            if neighborhood(self.g, &bag.vertices, &removed).is_empty() {
                return Ok(Step::DropBag(i));
            }
        }
        self.grow_minor(&removed)
    }

    /// `H`: heavy residual vertices, adjacent when at residual distance `<= m`.
    /// Components are sorted by decreasing cost, then smallest vertex.
    fn heavy_graph(&self, removed: &VertexSet) -> Heavy {
        let n = self.n();
        let vertices: Vec<usize> = (0..n)
            .filter(|&v| !removed.contains(v) && self.rho.get(v) > &self.heavy_threshold)
            .collect();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(parent: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while parent[r] != r {
                r = parent[r];
            }
            let mut y = x;
            while parent[y] != r {
                let next = parent[y];
                parent[y] = r;
                y = next;
            }
            r
        }
        let is_heavy = VertexSet::from_slice(n, &vertices);
        let depth = self.clamp(self.p.m);
        for &u in &vertices {
            let dist = bfs_distances(self.g, &VertexSet::from_slice(n, &[u]), removed, depth);
            for v in is_heavy.iter() {
                if dist[v].is_some() {
                    let (ru, rv) = (find(&mut parent, u), find(&mut parent, v));
                    if ru != rv {
                        parent[ru.max(rv)] = ru.min(rv);
                    }
                }
            }
        }
        let mut groups: Vec<Vec<usize>> = Vec::new();
        let mut index = vec![usize::MAX; n];
        for &v in &vertices {
            let root = find(&mut parent, v);
            if index[root] == usize::MAX {
                index[root] = groups.len();
                groups.push(Vec::new());
            }
            groups[index[root]].push(v);
        }
        let mut keyed: Vec<(Rational, Vec<usize>)> = groups
            .into_iter()
            .map(|c| (self.rho.sum(c.iter().copied()), c))
            .collect();
        keyed.sort_by(|x, y| y.0.cmp(&x.0).then(x.1[0].cmp(&y.1[0])));
        Heavy {
            vertices,
            components: keyed.into_iter().map(|(_, c)| c).collect(),
        }
    }

    /// When no component of `H` dominates, balls grown from two halves of `H`
    /// cannot both keep expanding; the stalled one certifies non-expansion.
    fn split_witness(&self, heavy: &Heavy, rho_h: &Rational, removed: &VertexSet) -> Result<Step> {
        let n = self.n();
        let quarter = rho_h / int(4u32);
        let mut first = VertexSet::new(n);
        let mut second = VertexSet::new(n);
        let mut acc = Rational::zero();
        for comp in &heavy.components {
            if acc > quarter {
                second.union_with(&VertexSet::from_slice(n, comp));
            } else {
                acc += self.rho.sum(comp.iter().copied());
                first.union_with(&VertexSet::from_slice(n, comp));
            }
        }
        if self.rho.sum(second.iter()) <= quarter {
            return Err(self.fail("heavy split left a light half"));
        }
        let steps = self.clamp(self.p.m / 2);
        if let Some(z) = self.two_ball_witness(&first, &second, steps, removed)? {
            return Ok(Step::Witness(z));
        }
        Err(self.fail("heavy components are close but no witness of non-expansion was found"))
    }

    fn two_ball_witness(
        &self,
        x: &VertexSet,
        y: &VertexSet,
        steps: usize,
        removed: &VertexSet,
    ) -> Result<Option<ExpanderWitness>> {
        let w_host = self.w.sum(removed.complement().iter());
        let t = self.p.t.saturating_mul(5);
        for seed in [x, y] {
            let grown = grow_within(self.g, removed, self.w, self.rho, t, seed, steps, &w_host)?;
            if grown.witness.is_some() {
                return Ok(grown.witness);
            }
        }
        Ok(None)
    }

    /// Step (e): a new bag joining the `≺`-least residual vertex to every bag.
    fn grow_minor(&self, removed: &VertexSet) -> Result<Step> {
        let n = self.n();
        let v = (0..n)
            .map(|i| self.ord.vertex_at(i))
            .find(|&x| !removed.contains(x))
            .expect("residual is non-empty");
        let depth = self.clamp(self.p.l);
        let (dist, parent) = bfs_tree(self.g, v, removed, depth);
        let mut paths = Vec::new();
        let mut vertices = VertexSet::from_slice(n, &[v]);
        for bag in &self.bags {
            let target = neighborhood(self.g, &bag.vertices, removed)
                .iter()
                .filter(|&u| dist[u].is_some())
                .min_by_key(|&u| (dist[u], u));
            let Some(mut u) = target else {
                let nearest = neighborhood(self.g, &bag.vertices, removed)
                    .iter()
                    .next()
                    .expect("bag has a residual neighbor");
                let half = self.clamp(self.p.l / 2);
                let seeds = (VertexSet::from_slice(n, &[v]), VertexSet::from_slice(n, &[nearest]));
                if let Some(z) = self.two_ball_witness(&seeds.0, &seeds.1, half, removed)? {
                    return Ok(Step::Witness(z));
                }
                return Err(self.fail("bag beyond distance l but no witness of non-expansion was found"));
            };
            let mut path = vec![u];
            while u != v {
                u = parent[u];
                path.push(u);
            }
            path.reverse();
            for &x in &path {
                vertices.insert(x);
            }
            paths.push(path);
        }
        if paths.is_empty() {
            paths.push(vec![v]);
        }
        let bags = self.bags.len() + 1;
        if bags as u64 > self.p.omega_hat {
            return Ok(Step::Restart(bags));
        }
        Ok(Step::NewBag(Bag {
            vertices,
            center: v,
            paths,
        }))
    }

    /// Step (c) when one heavy component dominates: separate `H` inside the
    /// restricted reach graph of the residual and charge the parts to `C` and `D`.
    fn subsolve(&mut self) -> Result<()> {
        let removed = self.removed();
        let residual = removed.complement().to_vec();
        let heavy = self.heavy_graph(&removed);
        let rg = self.g.induced(&residual);
        let rord = self.ord.restrict(&residual);
        let local_heavy: Vec<usize> = heavy
            .vertices
            .iter()
            .map(|v| residual.binary_search(v).unwrap())
            .collect();
        let m = self.clamp(self.p.m).max(1);
        let pg = restricted_reach_graph(&rg, &rord, m, &VertexSet::from_slice(rg.n(), &local_heavy))?;
        let base: Vec<usize> = pg.vertices.iter().map(|&x| residual[x]).collect();
        if base.len() as u128 > self.p.n_prime {
            return Err(self.fail(format!(
                "reach graph has {} vertices, more than n' = {}",
                base.len(),
                self.p.n_prime
            )));
        }
        let is_heavy = VertexSet::from_slice(self.n(), &heavy.vertices);
        let w_sub = VertexAssignment::new(
            base.iter()
                .map(|&v| {
                    if is_heavy.contains(v) {
                        self.rho.get(v).clone()
                    } else {
                        Rational::zero()
                    }
                })
                .collect(),
        )?;
        let rho_sub = self.rho.restrict(&base);
        let t_sub = self.p.t.saturating_mul(5).saturating_mul(self.p.r);
        let ord_sub = self.ord.restrict(&base);
        let res = self.sub.solve(&pg.graph, &w_sub, &rho_sub, t_sub, &ord_sub)?;
        let verdict = verify_separator(&pg.graph, &w_sub, &rho_sub, t_sub, &res);
        if !verdict.ok() {
            return Err(self.fail(format!("subsolver result invalid: {}", verdict.detail)));
        }
        if res.outliers.len() as u128 > self.sub.outlier_bound() {
            return Err(self.fail("subsolver exceeded its outlier bound"));
        }
        for x in res.separator.iter() {
            if res.outliers.contains(x) {
                self.d.insert(base[x]);
            } else {
                self.c.insert(base[x]);
            }
        }
        self.r_i += 1;
        Ok(())
    }

    fn finish(&self) -> Result<SeparatorResult> {
        let mut sep = self.b.clone();
        for x in [&self.c, &self.d, &self.k] {
            sep.union_with(x);
        }
        let result = SeparatorResult::new(self.g, self.w, self.rho, sep, self.d.clone());
        let verdict = verify_separator(self.g, self.w, self.rho, self.p.t, &result);
        if !verdict.ok() {
            return Err(self.fail(format!("final separator invalid: {}", verdict.detail)));
        }
        Ok(result)
    }

    fn check_invariants(&self) -> Result<()> {
        let n = self.n();
        let sets = [&self.a, &self.b, &self.c, &self.d, &self.k];
        for i in 0..sets.len() {
            for j in i + 1..sets.len() {
                if !sets[i].is_disjoint(sets[j]) {
                    return Err(self.fail("state sets overlap"));
                }
            }
        }
        let removed = self.removed();
        let five_t = int(5u32) * int(self.p.t);

        // (i)
        if self.w.sum(self.a.iter()) * int(3u32) > int(2u32) * self.w.total() {
            return Err(self.fail("(i) w(A) exceeds 2/3 w(G)"));
        }
        let mut rest = removed.clone();
        rest.difference_with(&self.a);
        if !neighborhood(self.g, &self.a, &VertexSet::new(n)).is_subset(&rest) {
            return Err(self.fail("(i) A touches the residual"));
        }
        // (ii)
        if self.rho.sum(self.a.iter()) < &five_t * self.rho.sum(self.b.iter()) {
            return Err(self.fail("(ii) rho(A) < 5t rho(B)"));
        }
        // (iii)
        let heavy = self.heavy_graph(&removed);
        let delta = if heavy.vertices.is_empty() { 1u64 } else { 0 };
        let allowance = (Rational::one() + int(self.r_i) / int(self.p.r) + int(delta)) / &five_t;
        if self.rho.sum(self.c.iter()) > allowance * &self.rho_g {
            return Err(self.fail("(iii) rho(C) over its allowance"));
        }
        // (iv)
        let bound = self.sub.outlier_bound().saturating_mul(self.r_i as u128);
        if self.d.len() as u128 > bound {
            return Err(self.fail("(iv) too many outliers"));
        }
        // (v)
        self.check_minor()?;
        if self.k.iter().any(|v| self.rho.get(v) > &self.heavy_threshold) {
            return Err(self.fail("(v) heavy vertex in the clique minor"));
        }
        // (vi)
        if self.r_i > self.p.r {
            return Err(self.fail("(vi) r_i exceeds r"));
        }
        let cap = num_traits::pow(Rational::new(8.into(), 9.into()), self.r_i as usize) * &self.rho_g;
        for comp in &heavy.components {
            if self.rho.sum(comp.iter().copied()) > cap {
                return Err(self.fail("(vi) heavy component too costly"));
            }
        }
        Ok(())
    }

    fn check_minor(&self) -> Result<()> {
        let n = self.n();
        let max_paths = self.p.omega_hat.saturating_sub(1).max(1) as usize;
        let mut union = VertexSet::new(n);
        for bag in &self.bags {
            if !bag.vertices.is_disjoint(&union) {
                return Err(self.fail("(v) bags overlap"));
            }
            union.union_with(&bag.vertices);
            if bag.paths.len() > max_paths {
                return Err(self.fail("(v) bag needs too many paths"));
            }
            let mut covered = VertexSet::new(n);
            for path in &bag.paths {
                if path.first() != Some(&bag.center) || (path.len() - 1) as u64 > self.p.l {
                    return Err(self.fail("(v) path does not start at the center or is too long"));
                }
                if path.windows(2).any(|e| !self.g.has_edge(e[0], e[1])) {
                    return Err(self.fail("(v) path uses a non-edge"));
                }
                for &x in path {
                    covered.insert(x);
                }
            }
            if covered != bag.vertices {
                return Err(self.fail("(v) paths do not cover the bag"));
            }
        }
        if union != self.k {
            return Err(self.fail("(v) bags do not partition K"));
        }
        for (i, x) in self.bags.iter().enumerate() {
            let touch = neighborhood(self.g, &x.vertices, &VertexSet::new(n));
            if self.bags[i + 1..].iter().any(|y| touch.is_disjoint(&y.vertices)) {
                return Err(self.fail("(v) two bags are not adjacent"));
            }
        }
        Ok(())
    }
}
