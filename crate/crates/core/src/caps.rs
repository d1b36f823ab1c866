//! Size caps for the exhaustive oracles.
//!
//! Defaults can be raised through `SEP_EXACT_CAPS`, e.g.
//! `SEP_EXACT_CAPS="wcol=10,nabla=8,witness=22,exact=16"`.

use std::sync::OnceLock;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Caps {
    /// Permutation search for `wcol_exact` and best-ordering admissibility.
    pub wcol_exact: usize,
    /// Partition enumeration for shallow-minor oracles.
    pub nabla: usize,
    /// Subset enumeration for expander witnesses.
    pub witness: usize,
    /// Subset enumeration for the exact base solver and outlier oracle.
    pub exact: usize,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            wcol_exact: 9,
            nabla: 7,
            witness: 20,
            exact: 14,
        }
    }
}

impl Caps {
    /// Parses a `key=value,...` override string on top of the defaults.
    /// Unknown keys and malformed values are ignored.
    pub fn parse_overrides(spec: &str) -> Caps {
        let mut caps = Caps::default();
        for item in spec.split(',') {
            let Some((key, value)) = item.split_once('=') else {
                continue;
            };
            let Ok(value) = value.trim().parse::<usize>() else {
                continue;
            };
            match key.trim() {
                "wcol" => caps.wcol_exact = value,
                "nabla" => caps.nabla = value,
                "witness" => caps.witness = value,
                "exact" => caps.exact = value,
                _ => {}
            }
        }
        caps
    }
}

/// Process-wide caps, read once from the environment.
pub fn caps() -> Caps {
    static CAPS: OnceLock<Caps> = OnceLock::new();
    *CAPS.get_or_init(|| match std::env::var("SEP_EXACT_CAPS") {
        Ok(spec) => Caps::parse_overrides(&spec),
        Err(_) => Caps::default(),
    })
}
