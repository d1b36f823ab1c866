//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit if any fail.

mod common;

use std::time::Instant;

use cheapsep::apps::{
    biclique_total_cost, check_distance_separator, check_edge_separator, distance_separator, edge_separator,
    lower_bound_family_check, min_outliers_oracle, star_cost_bound_check, star_paper_costs,
};
use cheapsep::assign::{int, VertexAssignment};
use cheapsep::engine::params::{ell, refinement_rounds};
use cheapsep::engine::{iterate_separator, verify_separator};
use cheapsep::expander::{find_witness_exhaustive, within_distance_bound};
use cheapsep::graph::{bfs_distances, components, gen_grid, gen_star, gen_subdivided_biclique, Graph};
use cheapsep::ordering::{adm_exact, adm_under, heuristic_ordering, wcol_exact, wcol_under};
use cheapsep::reach::{nabla_bruteforce, power_reach_graph, restricted_reach_graph};
use cheapsep::vset::VertexSet;
use num_traits::Zero;
use rand::Rng;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

struct Instance {
    label: String,
    g: Graph,
    w: VertexAssignment,
    rho: VertexAssignment,
    t: u64,
    a: usize,
}

/// The 200 engine instances: grids, bounded-degree random graphs and stars.
fn engine_instances() -> Vec<Instance> {
    let mut rng = common::rng(2024);
    let ts = [1u64, 2, 4, 8];
    let mut out = Vec::new();
    for i in 0..200 {
        let t = ts[i % 4];
        let a = (i / 4) % 3;
        let (label, g, w, rho) = match i % 5 {
            0 | 1 => {
                let k = 2 + (i / 5) % 11;
                let g = gen_grid(k);
                let n = g.n();
                if i % 5 == 0 {
                    (
                        format!("grid {k}x{k} uniform"),
                        g,
                        VertexAssignment::ones(n),
                        VertexAssignment::ones(n),
                    )
                } else {
                    let w = common::assignment(&mut rng, n, 0, 4);
                    let rho = common::assignment(&mut rng, n, 0, 6);
                    (format!("grid {k}x{k} random"), g, w, rho)
                }
            }
            2 | 3 => {
                let n = if i % 5 == 2 {
                    rng.gen_range(4..=12)
                } else {
                    rng.gen_range(10..=60)
                };
                let g = common::bounded_degree(&mut rng, n, 4);
                let w = common::assignment(&mut rng, n, 0, 3);
                let rho = common::assignment(&mut rng, n, 1, 9);
                (format!("random n={n}"), g, w, rho)
            }
            _ => {
                let leaves = 3 + (i / 5) % 13;
                let g = gen_star(leaves);
                (
                    format!("star {leaves}"),
                    g,
                    VertexAssignment::ones(leaves + 1),
                    star_paper_costs(leaves),
                )
            }
        };
        out.push(Instance { label, g, w, rho, t, a });
    }
    out
}

struct EngineRun {
    outliers: usize,
    transitions: usize,
}

fn run_instances(instances: &[Instance]) -> (Vec<Result<EngineRun, String>>, usize) {
    let mut over_limit = 0;
    let runs = instances
        .iter()
        .map(|ins| {
            let ord = heuristic_ordering(&ins.g, 2);
            let out = iterate_separator(&ins.g, &ins.w, &ins.rho, ins.t, ins.a, &ord)
                .map_err(|e| format!("{}: {e}", ins.label))?;
            let verdict = verify_separator(&ins.g, &ins.w, &ins.rho, ins.t, &out.result);
            if !verdict.ok() {
                return Err(format!("{}: {}", ins.label, verdict.detail));
            }
            let transitions = out
                .trace
                .iter()
                .filter(|l| l.starts_with("step=") && !l.starts_with("step=a"))
                .count();
            let n = ins.g.n();
            let r = refinement_rounds(ins.t) as usize;
            if transitions > (n + r) * (n + 1) {
                over_limit += 1;
            }
            Ok(EngineRun {
                outliers: out.result.outliers.len(),
                transitions,
            })
        })
        .collect();
    (runs, over_limit)
}

fn star_example() -> Outcome {
    let failing: Vec<usize> = (3..=13).filter(|&n| !star_cost_bound_check(n).unwrap()).collect();
    outcome(failing.is_empty(), format!("n=3..13, failing: {failing:?}"))
}

fn engine_validity(runs: &[Result<EngineRun, String>]) -> Outcome {
    let errors: Vec<&String> = runs.iter().filter_map(|r| r.as_ref().err()).collect();
    let detail = match errors.first() {
        Some(e) => format!("{} of {} failed, first: {e}", errors.len(), runs.len()),
        None => format!("{} runs valid, invariants held at every transition", runs.len()),
    };
    outcome(errors.is_empty(), detail)
}

fn termination(runs: &[Result<EngineRun, String>], over_limit: usize) -> Outcome {
    let done = runs.iter().filter(|r| r.is_ok()).count();
    let most = runs
        .iter()
        .filter_map(|r| r.as_ref().ok())
        .map(|r| r.transitions)
        .max()
        .unwrap_or(0);
    outcome(
        over_limit == 0 && done == runs.len(),
        format!("{done} runs finished, {over_limit} over the transition bound, longest top-level run {most}"),
    )
}

fn optimality_gap(instances: &[Instance], runs: &[Result<EngineRun, String>]) -> Outcome {
    let mut checked = 0;
    let mut bad = Vec::new();
    for (ins, run) in instances.iter().zip(runs) {
        let Ok(run) = run else { continue };
        if ins.g.n() > 12 {
            continue;
        }
        checked += 1;
        let oracle = min_outliers_oracle(&ins.g, &ins.w, &ins.rho, ins.t).unwrap();
        let brute = common::brute_min_outliers(&ins.g, &ins.w, &ins.rho, ins.t);
        if oracle != brute || run.outliers < oracle {
            bad.push(format!(
                "{} (engine {}, oracle {}, brute {})",
                ins.label, run.outliers, oracle, brute
            ));
        }
    }
    outcome(
        bad.is_empty() && checked > 0,
        format!("{checked} small instances, mismatches: {bad:?}"),
    )
}

fn separation_transfer() -> Outcome {
    let mut rng = common::rng(7);
    let mut pairs = 0;
    let mut exceptions = 0;
    for _ in 0..300 {
        let n = rng.gen_range(2..=12);
        let g = {
            let p = rng.gen_range(0.15..0.6);
            common::gnp(&mut rng, n, p)
        };
        let ord = common::ordering(&mut rng, n);
        let m = rng.gen_range(1..=3);
        let x = common::subset(&mut rng, n, 0.5);
        let pg = restricted_reach_graph(&g, &ord, m, &x).unwrap();
        let local = pg.vertices.len();
        let c_local = common::subset(&mut rng, local, 0.3);
        let mut c = VertexSet::new(n);
        for v in c_local.iter() {
            c.insert(pg.vertices[v]);
        }
        let comps = components(&pg.graph, &c_local);
        let mut comp_of = vec![usize::MAX; local];
        for (i, comp) in comps.iter().enumerate() {
            for &v in comp {
                comp_of[v] = i;
            }
        }
        let xs: Vec<usize> = x.iter().filter(|&v| !c.contains(v)).collect();
        for (i, &u) in xs.iter().enumerate() {
            let dist = bfs_distances(&g, &VertexSet::from_slice(n, &[u]), &c, m);
            for &v in &xs[i + 1..] {
                let (lu, lv) = (pg.local_of(u).unwrap(), pg.local_of(v).unwrap());
                if comp_of[lu] != comp_of[lv] {
                    pairs += 1;
                    if dist[v].is_some() {
                        exceptions += 1;
                    }
                }
            }
        }
    }
    outcome(
        exceptions == 0,
        format!("{pairs} separated pairs, {exceptions} within distance m"),
    )
}

fn distance_bound() -> Outcome {
    let mut rng = common::rng(11);
    let mut found = 0;
    let mut attempts = 0;
    let mut exceptions = 0;
    let mut pairs = 0;
    while found < 100 && attempts < 20_000 {
        attempts += 1;
        let n = rng.gen_range(2..=12);
        let g = {
            let p = rng.gen_range(0.1..0.9);
            common::connected(&mut rng, n, p)
        };
        let w = common::assignment(&mut rng, n, 0, 3);
        let rho = common::assignment(&mut rng, n, 1, 4);
        let t = rng.gen_range(1..=3);
        if w.total().is_zero() || find_witness_exhaustive(&g, &w, &rho, t).unwrap().is_some() {
            continue;
        }
        found += 1;
        let min = rho.values().iter().min().unwrap().clone();
        let b = rho.total() / min;
        for u in 0..n {
            for v in u + 1..n {
                pairs += 1;
                let (x1, x2) = (VertexSet::from_slice(n, &[u]), VertexSet::from_slice(n, &[v]));
                if !within_distance_bound(&g, t, &x1, &x2, &b, &b) {
                    exceptions += 1;
                }
            }
        }
    }
    outcome(
        exceptions == 0 && found == 100,
        format!("{found} expanders in {attempts} samples, {pairs} pairs, {exceptions} exceptions"),
    )
}

fn admissibility_power_bound() -> Outcome {
    let mut rng = common::rng(13);
    let mut exceptions = [0usize; 4];
    let mut checked = [0usize; 4];
    for i in 0..200 {
        let n = rng.gen_range(1..=9);
        let g = {
            let p = rng.gen_range(0.1..0.7);
            common::gnp(&mut rng, n, p)
        };
        let ord = common::ordering(&mut rng, n);
        let r = 1 + i % 3;
        let wcol = wcol_under(&g, &ord, r).unwrap() as u64;
        let adm = adm_under(&g, &ord, r).unwrap() as u64;
        checked[r] += 1;
        let ok = if adm == 0 {
            g.m() == 0 && wcol == 1
        } else {
            wcol as u128 <= ((r * r) as u128 * adm as u128).pow(r as u32)
        };
        if !ok {
            exceptions[r] += 1;
        }
    }
    let total: usize = exceptions.iter().sum();
    outcome(
        total == 0,
        format!(
            "exceptions r=1: {}/{}, r=2: {}/{}, r=3: {}/{}",
            exceptions[1], checked[1], exceptions[2], checked[2], exceptions[3], checked[3]
        ),
    )
}

fn expansion_spot_checks() -> Outcome {
    let graphs = common::connected_graphs_up_to_iso(6);
    let mut wcol_fail = Vec::new();
    let mut nabla_fail = Vec::new();
    let mut adm_fail = Vec::new();
    for g in &graphs {
        let nabla = nabla_bruteforce(g, 1).unwrap();
        let (wcol1, _) = wcol_exact(g, 1).unwrap();
        let (wcol4, _) = wcol_exact(g, 4).unwrap();
        let (adm, _) = adm_exact(g, 1).unwrap();
        let name = format!("n={} m={}", g.n(), g.m());
        let cube = &nabla * &nabla * &nabla;
        if int(wcol1 as u64) > int(8u32) * &cube {
            wcol_fail.push(name.clone());
        }
        if nabla > int(wcol4 as u64) {
            nabla_fail.push(name.clone());
        }
        if int(adm as u64) > int(6u32) * &cube {
            adm_fail.push(name);
        }
    }
    let pass = wcol_fail.is_empty() && nabla_fail.is_empty() && adm_fail.is_empty();
    outcome(
        pass,
        format!(
            "{} graphs; wcol bound fails on {:?}; density bound fails on {:?}; admissibility bound fails on {:?}",
            graphs.len(),
            wcol_fail,
            nabla_fail,
            adm_fail
        ),
    )
}

fn ell_helper() -> Outcome {
    let mut bad = Vec::new();
    for t in 1..=64u64 {
        for b in 1..=64u64 {
            let ceil_log = 64 - b.leading_zeros() as u64; // ⌈log2(b+1)⌉
            if ell(t, &int(b)) > t * ceil_log {
                bad.push((t, b));
            }
        }
    }
    let exact = ell(3, &int(10u32));
    outcome(
        bad.is_empty() && exact == 9,
        format!("ell(3,10)={exact}, bound violations {bad:?}"),
    )
}

fn lower_bound_family() -> Outcome {
    let check = lower_bound_family_check(3, 10, 36).unwrap();
    let mut totals_ok = true;
    for s in 3..=4 {
        for n in 4..=10 {
            let (_, layout) = gen_subdivided_biclique(s, n).unwrap();
            totals_ok &= biclique_total_cost(&layout) == int((s * s * n) as u64);
        }
    }
    outcome(
        check.pass && totals_ok,
        format!(
            "s=3 n=10 t=36: bound {} needs {} outliers, oracle {}; cost totals {}",
            check.analytic,
            check.analytic.ceil(),
            check.oracle,
            if totals_ok { "match" } else { "mismatch" }
        ),
    )
}

fn distance_and_edge_separators() -> Outcome {
    let mut problems = Vec::new();
    for k in 3..=8 {
        let g = gen_grid(k);
        match distance_separator(&g, 2, 2, 1) {
            Ok(res) => {
                if let Err(e) = check_distance_separator(&g, 2, &res) {
                    problems.push(format!("grid {k} distance: {e}"));
                }
            }
            Err(e) => problems.push(format!("grid {k} distance: {e}")),
        }
    }
    let mut graphs: Vec<(String, Graph)> = (2..=8).map(|k| (format!("grid {k}"), gen_grid(k))).collect();
    graphs.extend((3..=12).map(|l| (format!("star {l}"), gen_star(l))));
    for (name, g) in &graphs {
        for t in [1u64, 2, 4] {
            match edge_separator(g, t, 1) {
                Ok(res) => {
                    if let Err(e) = check_edge_separator(g, t, &res) {
                        problems.push(format!("{name} t={t} edges: {e}"));
                    }
                }
                Err(e) => problems.push(format!("{name} t={t} edges: {e}")),
            }
        }
    }
    outcome(problems.is_empty(), format!("problems: {problems:?}"))
}

fn power_graph_identity() -> Outcome {
    let mut rng = common::rng(17);
    let mut bad = 0;
    let mut size_bad = 0;
    for _ in 0..100 {
        let n = rng.gen_range(1..=20);
        let g = {
            let p = rng.gen_range(0.05..0.5);
            common::gnp(&mut rng, n, p)
        };
        let ord = common::ordering(&mut rng, n);
        if power_reach_graph(&g, &ord, 1).unwrap().graph != g {
            bad += 1;
        }
        let m = rng.gen_range(1..=4);
        let x = common::subset(&mut rng, n, 0.3);
        let pg = restricted_reach_graph(&g, &ord, m, &x).unwrap();
        if pg.vertices.len() > wcol_under(&g, &ord, m).unwrap() * x.len() {
            size_bad += 1;
        }
    }
    outcome(
        bad == 0 && size_bad == 0,
        format!("{bad} radius-1 mismatches, {size_bad} oversized restrictions"),
    )
}

fn main() {
    let mut all_pass = true;
    let mut report = |id: usize, name: &str, f: &mut dyn FnMut() -> Outcome| {
        let start = Instant::now();
        let o = f();
        all_pass &= o.pass;
        println!(
            "{} {:>2} {}: {} ({:.1}s)",
            if o.pass { "PASS" } else { "FAIL" },
            id,
            name,
            o.detail,
            start.elapsed().as_secs_f64()
        );
    };
    let instances = engine_instances();
    let mut runs = None;
    report(1, "star cost bound", &mut star_example);
    report(2, "engine validity", &mut || {
        let (r, over) = run_instances(&instances);
        let o = engine_validity(&r);
        runs = Some((r, over));
        o
    });
    let (runs, over) = runs.unwrap();
    report(3, "termination bound", &mut || termination(&runs, over));
    report(4, "oracle gap", &mut || optimality_gap(&instances, &runs));
    report(5, "separation transfer", &mut separation_transfer);
    report(6, "expander distance bound", &mut distance_bound);
    report(7, "wcol vs admissibility", &mut admissibility_power_bound);
    report(8, "expansion spot checks", &mut expansion_spot_checks);
    report(9, "ell helper", &mut ell_helper);
    report(10, "lower-bound family", &mut lower_bound_family);
    report(11, "distance and edge separators", &mut distance_and_edge_separators);
    report(12, "power-graph identity", &mut power_graph_identity);
    if !all_pass {
        std::process::exit(1);
    }
}
