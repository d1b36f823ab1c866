use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use cheapsep::apps::{biclique_paper_assignments, min_outliers_oracle_mode, star_paper_costs, BalanceMode};
use cheapsep::assign::{format_rational, int, parse_rational, VertexAssignment};
use cheapsep::caps::caps;
use cheapsep::engine::{iterate_separator, verify_separator, SeparatorResult};
use cheapsep::expander::find_witness_exhaustive;
use cheapsep::graph::{gen_grid, gen_star, gen_subdivided_biclique, Graph};
use cheapsep::ordering::{adm_under, wcol_exact, wcol_under};
use cheapsep::reach::nabla_bruteforce;
use cheapsep::vset::VertexSet;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::doc::{LevelDoc, Metadata, ResultDoc};
use crate::input::{self, check_t, CliError, CliResult};
use crate::{AnalyzeArgs, Family, Format, GenerateArgs, OracleArgs, SeparateArgs, VerifyArgs};

/// Radius of the ordering handed to the engine.
const ENGINE_RADIUS: usize = 2;

pub fn analyze(args: AnalyzeArgs) -> CliResult<()> {
    let inst = input::load(&args.instance)?;
    let g = &inst.g;
    if let Some(&bad) = args.radii.iter().find(|&&r| r == 0) {
        return Err(CliError::Usage(format!("radius must be ≥ 1, got {bad}")));
    }
    let cap = caps();
    let exact_wcol = g.n() <= cap.wcol_exact;
    let exact_nabla = g.n() <= cap.nabla;
    if !exact_wcol {
        eprintln!(
            "warning: {} vertices exceed the wcol_exact cap {}; column left empty",
            g.n(),
            cap.wcol_exact
        );
    }
    if !exact_nabla {
        eprintln!(
            "warning: {} vertices exceed the nabla cap {}; column left empty",
            g.n(),
            cap.nabla
        );
    }
    let mut out = String::from("r,wcol_under,adm_under,wcol_exact,nabla\n");
    for &r in &args.radii {
        let ord = input::ordering(&args.ordering, g, r)?;
        let wcol = wcol_under(g, &ord, r)?;
        let adm = adm_under(g, &ord, r)?;
        let exact = if exact_wcol {
            wcol_exact(g, r)?.0.to_string()
        } else {
            String::new()
        };
        let nabla = if exact_nabla {
            format_rational(&nabla_bruteforce(g, r)?)
        } else {
            String::new()
        };
        writeln!(out, "{r},{wcol},{adm},{exact},{nabla}").unwrap();
    }
    if let Some(t) = args.expander {
        check_t(t)?;
        if g.n() > cap.witness {
            eprintln!(
                "warning: {} vertices exceed the witness cap {}; expander check skipped",
                g.n(),
                cap.witness
            );
        } else {
            match find_witness_exhaustive(g, &inst.w, &inst.rho, t)? {
                None => writeln!(out, "# expander t={t}: yes").unwrap(),
                Some(wit) => writeln!(
                    out,
                    "# expander t={t}: no, witness {} with rho {} and boundary rho {}",
                    join(&wit.set.to_vec(), " "),
                    format_rational(&wit.rho_of_set),
                    format_rational(&wit.rho_of_boundary)
                )
                .unwrap(),
            }
        }
    }
    print!("{out}");
    Ok(())
}

pub fn separate(args: SeparateArgs) -> CliResult<()> {
    check_t(args.t)?;
    let inst = input::load(&args.instance)?;
    let ord = input::ordering(&args.ordering, &inst.g, ENGINE_RADIUS)?;
    let out = iterate_separator(&inst.g, &inst.w, &inst.rho, args.t, args.a, &ord)?;
    let trace_path = match &args.trace {
        Some(path) => {
            let mut text = out.trace.join("\n");
            text.push('\n');
            input::write(path, &text)?;
            Some(path.display().to_string())
        }
        None => None,
    };
    let res = &out.result;
    let doc = ResultDoc {
        separator: res.separator.to_vec(),
        outliers: res.outliers.to_vec(),
        nonoutlier_cost: format_rational(&res.nonoutlier_cost),
        component_weights: res.component_weights.iter().map(format_rational).collect(),
        schedule: out.schedule.iter().map(LevelDoc::from).collect(),
        trace_path,
        metadata: Metadata {
            version: env!("CARGO_PKG_VERSION").into(),
            graph: args.instance.graph.display().to_string(),
            vertices: inst.g.n(),
            edges: inst.g.m(),
            weights: inst.w_source.describe(),
            costs: inst.rho_source.describe(),
            t: args.t,
            a: args.a,
            ordering: args.ordering.clone(),
            restarts: out.restarts,
            budget: format_rational(&(inst.rho.total() / int(args.t))),
        },
    };
    let verdict = verify_separator(&inst.g, &inst.w, &inst.rho, args.t, res);
    let mut text = serde_json::to_string_pretty(&doc).expect("document serializes");
    text.push('\n');
    match &args.output {
        Some(path) => input::write(path, &text)?,
        None => print!("{text}"),
    }
    if !verdict.ok() {
        return Err(CliError::Verify(format!(
            "{}: {}",
            verdict.failed.unwrap(),
            verdict.detail
        )));
    }
    Ok(())
}

pub fn oracle(args: OracleArgs) -> CliResult<()> {
    check_t(args.t)?;
    let inst = input::load(&args.instance)?;
    let mode = if args.unweighted {
        BalanceMode::Unweighted
    } else {
        BalanceMode::Weighted
    };
    let k = min_outliers_oracle_mode(&inst.g, &inst.w, &inst.rho, args.t, mode)?;
    match args.format {
        Format::Json => println!(
            "{}",
            serde_json::json!({ "t": args.t, "vertices": inst.g.n(), "min_outliers": k })
        ),
        Format::Csv => print!("t,vertices,min_outliers\n{},{},{k}\n", args.t, inst.g.n()),
    }
    Ok(())
}

pub fn generate(args: GenerateArgs) -> CliResult<()> {
    let (g, presets) = match args.family {
        Family::Star => {
            let presets = args
                .paper_costs
                .then(|| (VertexAssignment::ones(args.size + 1), star_paper_costs(args.size)));
            (gen_star(args.size), presets)
        }
        Family::Grid => {
            no_presets(&args, "grid")?;
            (gen_grid(args.size), None)
        }
        Family::Biclique => {
            let (g, layout) = gen_subdivided_biclique(args.size, args.n)?;
            (g, args.paper_costs.then(|| biclique_paper_assignments(&layout)))
        }
        Family::Random => {
            no_presets(&args, "random")?;
            (random_graph(args.size, args.degree, args.seed), None)
        }
    };
    let (w, rho) = presets.unwrap_or_else(|| (VertexAssignment::ones(g.n()), VertexAssignment::ones(g.n())));
    input::write(&with_suffix(&args.out, "edges"), &g.to_edge_list())?;
    input::write(&with_suffix(&args.out, "weights"), &w.to_text())?;
    input::write(&with_suffix(&args.out, "costs"), &rho.to_text())?;
    Ok(())
}

fn no_presets(args: &GenerateArgs, family: &str) -> CliResult<()> {
    if args.paper_costs {
        return Err(CliError::Usage(format!(
            "--paper-costs has no preset for {family} graphs"
        )));
    }
    Ok(())
}

fn with_suffix(prefix: &Path, suffix: &str) -> PathBuf {
    let mut name = prefix.as_os_str().to_owned();
    name.push(".");
    name.push(suffix);
    PathBuf::from(name)
}

/// Random pairs joined while both ends have spare degree.
fn random_graph(n: usize, max_degree: usize, seed: u64) -> Graph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = BTreeSet::new();
    let mut degree = vec![0; n];
    if n >= 2 {
        for _ in 0..n * max_degree {
            let u = rng.gen_range(0..n);
            let v = rng.gen_range(0..n);
            if u == v || degree[u] >= max_degree || degree[v] >= max_degree || !edges.insert((u.min(v), u.max(v))) {
                continue;
            }
            degree[u] += 1;
            degree[v] += 1;
        }
    }
    Graph::from_edges(n, edges).unwrap()
}

pub fn verify(args: VerifyArgs) -> CliResult<()> {
    let inst = input::load(&args.instance)?;
    let path = args.result.display().to_string();
    let doc: ResultDoc = serde_json::from_str(&input::read(&args.result)?)
        .map_err(|e| CliError::Usage(format!("{path}: not a result document: {e}")))?;
    let t = args.t.unwrap_or(doc.metadata.t);
    check_t(t)?;
    let n = inst.g.n();
    let set = |ids: &[usize], what: &str| -> CliResult<VertexSet> {
        match ids.iter().find(|&&v| v >= n) {
            Some(v) => Err(CliError::Usage(format!("{path}: {what} id {v} out of range (n={n})"))),
            None => Ok(VertexSet::from_slice(n, ids)),
        }
    };
    let separator = set(&doc.separator, "separator")?;
    let outliers = set(&doc.outliers, "outlier")?;
    let actual = SeparatorResult::new(&inst.g, &inst.w, &inst.rho, separator, outliers);
    let verdict = verify_separator(&inst.g, &inst.w, &inst.rho, t, &actual);
    if let Some(clause) = verdict.failed {
        return Err(CliError::Verify(format!("{clause}: {}", verdict.detail)));
    }
    let claimed_cost = parse_rational(&doc.nonoutlier_cost);
    if claimed_cost.as_ref() != Some(&actual.nonoutlier_cost) {
        return Err(CliError::Verify(format!(
            "cheapness: document claims nonoutlier_cost {}, actual {}",
            doc.nonoutlier_cost,
            format_rational(&actual.nonoutlier_cost)
        )));
    }
    let claimed_weights: Option<Vec<_>> = doc.component_weights.iter().map(|s| parse_rational(s)).collect();
    if claimed_weights.as_ref() != Some(&actual.component_weights) {
        return Err(CliError::Verify(
            "balance: document component_weights do not match the graph".into(),
        ));
    }
    println!(
        "ok: {} separator vertices, {} outliers, t={t}",
        doc.separator.len(),
        doc.outliers.len()
    );
    Ok(())
}

fn join(ids: &[usize], sep: &str) -> String {
    ids.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(sep)
}
