//! Balanced separators with few outliers: result checking, base solvers, the
//! state-machine engine and its iterated recursion.

mod iterate;
pub mod params;
mod run;

use std::fmt;

use num_traits::Zero;

use crate::assign::{int, Rational, VertexAssignment};
use crate::caps::caps;
use crate::error::{Error, Result};
use crate::graph::{components, Graph};
use crate::ordering::LinearOrdering;
use crate::vset::VertexSet;

pub use iterate::{iterate_separator, IterateOutcome};
pub use run::{run_engine, EngineOutcome};

/// A `w`-balanced separator together with the outlier vertices excused from the cost bound.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeparatorResult {
    pub separator: VertexSet,
    pub outliers: VertexSet,
    /// `w` of every component of `G - separator`, listed by smallest vertex.
    pub component_weights: Vec<Rational>,
    /// `ρ(separator \ outliers)`.
    pub nonoutlier_cost: Rational,
}

impl SeparatorResult {
    pub fn new(
        g: &Graph,
        w: &VertexAssignment,
        rho: &VertexAssignment,
        separator: VertexSet,
        outliers: VertexSet,
    ) -> Self {
        let component_weights = components(g, &separator).into_iter().map(|c| w.sum(c)).collect();
        let nonoutlier_cost = rho.sum(separator.iter().filter(|&v| !outliers.contains(v)));
        SeparatorResult {
            separator,
            outliers,
            component_weights,
            nonoutlier_cost,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Clause {
    Subset,
    Balance,
    Cheapness,
}

impl fmt::Display for Clause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Clause::Subset => "subset",
            Clause::Balance => "balance",
            Clause::Cheapness => "cheapness",
        })
    }
}

/// Outcome of [`verify_separator`]; `failed` names the first violated clause.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Verdict {
    pub failed: Option<Clause>,
    pub detail: String,
}

impl Verdict {
    pub fn ok(&self) -> bool {
        self.failed.is_none()
    }
}

/// Checks that `result` is `w`-balanced and `(ρ/t)`-cheap with its outliers.
pub fn verify_separator(
    g: &Graph,
    w: &VertexAssignment,
    rho: &VertexAssignment,
    t: u64,
    result: &SeparatorResult,
) -> Verdict {
    let fail = |clause, detail: String| Verdict {
        failed: Some(clause),
        detail,
    };
    let n = g.n();
    if result.separator.capacity() != n
        || result.outliers.capacity() != n
        || !result.outliers.is_subset(&result.separator)
    {
        return fail(Clause::Subset, "outliers must be a subset of the separator".into());
    }
    let limit = int(2u32) * w.total() / int(3u32);
    for comp in components(g, &result.separator) {
        let wc = w.sum(comp.iter().copied());
        if wc > limit {
            return fail(
                Clause::Balance,
                format!("component containing {} has weight {} > {}", comp[0], wc, limit),
            );
        }
    }
    let cost = rho.sum(result.separator.iter().filter(|&v| !result.outliers.contains(v)));
    let budget = rho.total() / int(t);
    if cost > budget {
        return fail(Clause::Cheapness, format!("cost {} exceeds {}", cost, budget));
    }
    Verdict {
        failed: None,
        detail: String::new(),
    }
}

/// Outliers chosen by repeatedly dropping the costliest vertex of `set`
/// (ties: smaller id) until the rest costs at most `ρ(G)/t`.
pub fn greedy_outliers(rho: &VertexAssignment, set: &[usize], t: u64) -> Vec<usize> {
    let budget = rho.total() / int(t);
    let mut order: Vec<usize> = set.to_vec();
    order.sort_by(|&a, &b| rho.get(b).cmp(rho.get(a)).then(a.cmp(&b)));
    let mut rest = rho.sum(set.iter().copied());
    let mut out = Vec::new();
    for v in order {
        if rest <= budget {
            break;
        }
        rest -= rho.get(v);
        out.push(v);
    }
    out
}

/// Everything is separator and everything is an outlier.
pub fn base_solver_trivial(g: &Graph) -> SeparatorResult {
    let all = VertexSet::full(g.n());
    SeparatorResult {
        separator: all.clone(),
        outliers: all,
        component_weights: Vec::new(),
        nonoutlier_cost: Rational::zero(),
    }
}

/// Balanced separator minimizing the greedy outlier count over all vertex
/// subsets. Ties go to the smaller separator, then the lexicographically
/// smaller sorted id list.
pub fn base_solver_exact(g: &Graph, w: &VertexAssignment, rho: &VertexAssignment, t: u64) -> Result<SeparatorResult> {
    let n = g.n();
    let cap = caps().exact;
    if n > cap {
        return Err(Error::Capacity {
            what: "base_solver_exact",
            size: n,
            cap,
        });
    }
    let masks = g.masks();
    let limit = int(2u32) * w.total() / int(3u32);
    let mut best: Option<(usize, Vec<usize>, Vec<usize>)> = None;
    for k in 0..=n {
        let mut combo: Vec<usize> = (0..k).collect();
        loop {
            let sep_mask = combo.iter().fold(0u64, |acc, &v| acc | 1 << v);
            if is_balanced_mask(&masks, w, sep_mask, &limit) {
                let outliers = greedy_outliers(rho, &combo, t);
                if best.as_ref().is_none_or(|b| outliers.len() < b.0) {
                    best = Some((outliers.len(), combo.clone(), outliers));
                }
            }
            if !next_combination(&mut combo, n) {
                break;
            }
        }
        if best.as_ref().is_some_and(|b| b.0 == 0) {
            break;
        }
    }
    let (_, sep, out) = best.expect("the full vertex set is always balanced");
    Ok(SeparatorResult::new(
        g,
        w,
        rho,
        VertexSet::from_slice(n, &sep),
        VertexSet::from_slice(n, &out),
    ))
}

pub(crate) fn is_balanced_mask(masks: &[u64], w: &VertexAssignment, removed: u64, limit: &Rational) -> bool {
    let n = masks.len();
    let mut seen = removed;
    for s in 0..n {
        if seen >> s & 1 == 1 {
            continue;
        }
        let mut comp = 1u64 << s;
        let mut frontier = comp;
        while frontier != 0 {
            let mut next = 0u64;
            let mut f = frontier;
            while f != 0 {
                let v = f.trailing_zeros() as usize;
                f &= f - 1;
                next |= masks[v];
            }
            next &= !comp & !removed;
            comp |= next;
            frontier = next;
        }
        seen |= comp;
        let mut weight = Rational::zero();
        let mut c = comp;
        while c != 0 {
            weight += w.get(c.trailing_zeros() as usize);
            c &= c - 1;
        }
        if &weight > limit {
            return false;
        }
    }
    true
}

/// Advances `combo` to the next `k`-subset of `0..n` in lexicographic order.
fn next_combination(combo: &mut [usize], n: usize) -> bool {
    let k = combo.len();
    let mut i = k;
    while i > 0 {
        i -= 1;
        if combo[i] < n - k + i {
            combo[i] += 1;
            for j in i + 1..k {
                combo[j] = combo[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// A solver for the instances the engine hands down in its heavy-vertex step.
pub trait SubSolver {
    fn solve(
        &mut self,
        g: &Graph,
        w: &VertexAssignment,
        rho: &VertexAssignment,
        t: u64,
        ord: &LinearOrdering,
    ) -> Result<SeparatorResult>;

    /// Guaranteed maximum number of outliers in any returned result.
    fn outlier_bound(&self) -> u128;
}

/// Exact search on small instances and the trivial answer otherwise.
#[derive(Debug, Clone)]
pub struct BaseSolver {
    /// Claimed outlier guarantee; instances must not exceed this many vertices.
    pub bound: u128,
}

impl SubSolver for BaseSolver {
    fn solve(
        &mut self,
        g: &Graph,
        w: &VertexAssignment,
        rho: &VertexAssignment,
        t: u64,
        _ord: &LinearOrdering,
    ) -> Result<SeparatorResult> {
        if g.n() <= caps().exact {
            base_solver_exact(g, w, rho, t)
        } else {
            Ok(base_solver_trivial(g))
        }
    }

    fn outlier_bound(&self) -> u128 {
        self.bound
    }
}
