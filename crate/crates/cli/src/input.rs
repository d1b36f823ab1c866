use std::fs;
use std::path::Path;

use cheapsep::assign::VertexAssignment;
use cheapsep::graph::Graph;
use cheapsep::ordering::{heuristic_ordering, wcol_exact, LinearOrdering};
use thiserror::Error;

use crate::InstanceArgs;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),

    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },

    #[error("{path}: {source}")]
    Parse { path: String, source: cheapsep::Error },

    #[error(transparent)]
    Core(#[from] cheapsep::Error),

    #[error("verification failed: {0}")]
    Verify(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Verify(_) => 1,
            CliError::Usage(_) | CliError::Io { .. } | CliError::Parse { .. } => 2,
            CliError::Core(e) => match e {
                cheapsep::Error::Capacity { .. } => 3,
                cheapsep::Error::Invariant { .. } => 4,
                _ => 2,
            },
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;

pub fn read(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })
}

pub fn write(path: &Path, text: &str) -> CliResult<()> {
    fs::write(path, text).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })
}

fn parse_err(path: &Path) -> impl FnOnce(cheapsep::Error) -> CliError + '_ {
    move |source| CliError::Parse {
        path: path.display().to_string(),
        source,
    }
}

/// Where an assignment came from, for the result metadata.
#[derive(Debug, Clone)]
pub enum Source {
    File(String),
    Uniform,
}

impl Source {
    pub fn describe(&self) -> String {
        match self {
            Source::File(p) => p.clone(),
            Source::Uniform => "uniform 1 (no file given)".into(),
        }
    }
}

pub struct Instance {
    pub g: Graph,
    pub w: VertexAssignment,
    pub rho: VertexAssignment,
    pub w_source: Source,
    pub rho_source: Source,
}

fn assignment(path: Option<&Path>, n: usize) -> CliResult<(VertexAssignment, Source)> {
    match path {
        None => Ok((VertexAssignment::ones(n), Source::Uniform)),
        Some(p) => {
            let values = VertexAssignment::parse(&read(p)?, n).map_err(parse_err(p))?;
            Ok((values, Source::File(p.display().to_string())))
        }
    }
}

pub fn load(args: &InstanceArgs) -> CliResult<Instance> {
    let g = Graph::parse_edge_list(&read(&args.graph)?).map_err(parse_err(&args.graph))?;
    let (w, w_source) = assignment(args.weights.as_deref(), g.n())?;
    let (rho, rho_source) = assignment(args.costs.as_deref(), g.n())?;
    Ok(Instance {
        g,
        w,
        rho,
        w_source,
        rho_source,
    })
}

/// Resolves `heuristic`, `exact` or `file:PATH`. Heuristic and exact orderings
/// target radius `r`.
pub fn ordering(spec: &str, g: &Graph, r: usize) -> CliResult<LinearOrdering> {
    match spec {
        "heuristic" => Ok(heuristic_ordering(g, r)),
        "exact" => Ok(wcol_exact(g, r)?.1),
        _ => match spec.strip_prefix("file:") {
            Some(path) => {
                let path = Path::new(path);
                LinearOrdering::parse(&read(path)?, g.n()).map_err(parse_err(path))
            }
            None => Err(CliError::Usage(format!(
                "unknown ordering {spec:?}; expected heuristic, exact or file:PATH"
            ))),
        },
    }
}

pub fn check_t(t: u64) -> CliResult<()> {
    if t == 0 {
        return Err(CliError::Usage("t must be ≥ 1".into()));
    }
    Ok(())
}
