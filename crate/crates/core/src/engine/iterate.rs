//! The engine applied recursively: level `i` hands its heavy-vertex instances
//! to level `i+1`, and level `a` answers with a base solver.

use std::cell::RefCell;
use std::collections::HashMap;
use std::rc::Rc;

use num_traits::Zero;

use super::params::{outlier_bound, param_schedule, EngineParams, LevelParams};
use super::run::run_engine_with;
use super::{verify_separator, BaseSolver, SeparatorResult, SubSolver};
use crate::assign::VertexAssignment;
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::ordering::{wcol_under, LinearOrdering};
use crate::reach::{omega_shallow, power_reach_graph, OmegaMode};
use crate::vset::VertexSet;

#[derive(Debug, Clone)]
pub struct IterateOutcome {
    pub result: SeparatorResult,
    /// The schedule in force when the run finished.
    pub schedule: Vec<LevelParams>,
    /// Transition log of the top-level engine run.
    pub trace: Vec<String>,
    /// Restarts across all levels.
    pub restarts: usize,
}

/// Probes for the schedule. Both run on the full input graph under the
/// shared ordering; results are cached by radius.
struct Schedule<'a> {
    g: &'a Graph,
    ord: &'a LinearOrdering,
    n: usize,
    t: u64,
    a: usize,
    omega_floor: Vec<u64>,
    wcol_cache: HashMap<u64, u64>,
    omega_cache: HashMap<(u64, u64), u64>,
    levels: Vec<LevelParams>,
    restarts: usize,
}

impl<'a> Schedule<'a> {
    fn new(g: &'a Graph, ord: &'a LinearOrdering, t: u64, a: usize) -> Self {
        let mut s = Schedule {
            g,
            ord,
            n: g.n(),
            t,
            a,
            omega_floor: vec![1; a + 1],
            wcol_cache: HashMap::new(),
            omega_cache: HashMap::new(),
            levels: Vec::new(),
            restarts: 0,
        };
        s.recompute();
        s
    }

    fn recompute(&mut self) {
        let (g, ord, n) = (self.g, self.ord, self.n);
        let clamp = |x: u64| x.min(n as u64).max(1) as usize;
        let wcol_cache = &mut self.wcol_cache;
        let omega_cache = &mut self.omega_cache;
        let floor = &self.omega_floor;
        self.levels = param_schedule(
            n,
            self.t,
            self.a,
            &mut |m| {
                *wcol_cache
                    .entry(clamp(m) as u64)
                    .or_insert_with(|| wcol_under(g, ord, clamp(m)).unwrap_or(1) as u64)
            },
            &mut |level, m, l| {
                let key = (clamp(m) as u64, clamp(l) as u64);
                let probe = *omega_cache.entry(key).or_insert_with(|| {
                    let pg = power_reach_graph(g, ord, clamp(m)).expect("radius is positive");
                    omega_shallow(&pg.graph, clamp(l), OmegaMode::Greedy)
                        .map(|b| b.upper as u64)
                        .unwrap_or(1)
                });
                probe.max(floor[level])
            },
        );
    }

    fn bump(&mut self, level: usize, omega: u64) {
        self.omega_floor[level] = self.omega_floor[level].max(omega);
        self.restarts += 1;
        self.recompute();
    }

    fn engine_params(&self, level: usize, size: usize) -> EngineParams {
        let mut p = self.levels[level].engine_params();
        p.n = p.n.max(size as u128);
        p
    }
}

struct LevelSolver<'a> {
    level: usize,
    ctx: Rc<RefCell<Schedule<'a>>>,
    trace: Vec<String>,
}

impl SubSolver for LevelSolver<'_> {
    fn solve(
        &mut self,
        g: &Graph,
        w: &VertexAssignment,
        rho: &VertexAssignment,
        t: u64,
        ord: &LinearOrdering,
    ) -> Result<SeparatorResult> {
        let (a, bound) = {
            let ctx = self.ctx.borrow();
            (ctx.a, ctx.levels[ctx.a].n)
        };
        if self.level == a {
            return BaseSolver { bound }.solve(g, w, rho, t, ord);
        }
        let params = self.ctx.borrow().engine_params(self.level, g.n());
        debug_assert_eq!(params.t, t);
        let mut sub = LevelSolver {
            level: self.level + 1,
            ctx: Rc::clone(&self.ctx),
            trace: Vec::new(),
        };
        let ctx = Rc::clone(&self.ctx);
        let level = self.level;
        let size = g.n();
        let outcome = run_engine_with(g, w, rho, ord, &params, &mut sub, &mut |omega| {
            let mut c = ctx.borrow_mut();
            c.bump(level, omega);
            c.engine_params(level, size)
        })?;
        self.trace = outcome.trace;
        Ok(outcome.result)
    }

    fn outlier_bound(&self) -> u128 {
        let ctx = self.ctx.borrow();
        outlier_bound(&ctx.levels, self.level)
    }
}

/// Separator of `g` from `a` nested engine levels, with the outlier count
/// checked against the schedule's guarantee `n_a ∏ r_i`.
pub fn iterate_separator(
    g: &Graph,
    w: &VertexAssignment,
    rho: &VertexAssignment,
    t: u64,
    a: usize,
    ord: &LinearOrdering,
) -> Result<IterateOutcome> {
    if t == 0 {
        return Err(Error::param("t must be >= 1"));
    }
    if w.len() != g.n() || rho.len() != g.n() || ord.len() != g.n() {
        return Err(Error::param("assignment or ordering size does not match the graph"));
    }
    let n = g.n();
    let ctx = Rc::new(RefCell::new(Schedule::new(g, ord, t, a)));
    if rho.total().is_zero() {
        return Ok(IterateOutcome {
            result: SeparatorResult::new(g, w, rho, VertexSet::full(n), VertexSet::new(n)),
            schedule: ctx.borrow().levels.clone(),
            trace: Vec::new(),
            restarts: 0,
        });
    }
    let mut top = LevelSolver {
        level: 0,
        ctx: Rc::clone(&ctx),
        trace: Vec::new(),
    };
    let result = top.solve(g, w, rho, t, ord)?;
    let bound = top.outlier_bound();
    let ctx = ctx.borrow();
    if result.outliers.len() as u128 > bound {
        return Err(Error::Invariant {
            msg: format!("{} outliers exceed the guarantee {}", result.outliers.len(), bound),
            trace: top.trace,
        });
    }
    let verdict = verify_separator(g, w, rho, t, &result);
    if !verdict.ok() {
        return Err(Error::Invariant {
            msg: format!("iterated separator invalid: {}", verdict.detail),
            trace: top.trace,
        });
    }
    Ok(IterateOutcome {
        result,
        schedule: ctx.levels.clone(),
        trace: top.trace,
        restarts: ctx.restarts,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::base_solver_exact;
    use crate::graph::gen_grid;
    use crate::ordering::heuristic_ordering;

    #[test]
    fn zero_levels_is_the_base_solver() {
        let g = gen_grid(3);
        let ones = VertexAssignment::ones(9);
        let ord = LinearOrdering::identity(9);
        let out = iterate_separator(&g, &ones, &ones, 2, 0, &ord).unwrap();
        assert_eq!(out.result, base_solver_exact(&g, &ones, &ones, 2).unwrap());
    }

    #[test]
    fn zero_cost_gives_everything() {
        let g = gen_grid(3);
        let ones = VertexAssignment::ones(9);
        let zero = VertexAssignment::from_integers(&[0; 9]);
        let out = iterate_separator(&g, &ones, &zero, 3, 2, &LinearOrdering::identity(9)).unwrap();
        assert_eq!(out.result.separator.len(), 9);
        assert!(out.result.outliers.is_empty());
    }

    #[test]
    fn one_level_on_grid() {
        let g = gen_grid(4);
        let ones = VertexAssignment::ones(16);
        let ord = heuristic_ordering(&g, 2);
        let out = iterate_separator(&g, &ones, &ones, 2, 1, &ord).unwrap();
        assert!(verify_separator(&g, &ones, &ones, 2, &out.result).ok());
        let s = &out.schedule;
        assert!(out.result.outliers.len() as u128 <= s[1].n * s[0].r as u128);
    }
}
