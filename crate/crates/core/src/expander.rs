//! Witnesses of non-expansion: exhaustive search and certified ball growing.

use num_traits::Zero;

use crate::assign::{int, Rational, VertexAssignment};
use crate::caps::caps;
use crate::engine::params::ell;
use crate::error::{Error, Result};
use crate::graph::{neighborhood, set_distance, Graph};
use crate::vset::VertexSet;

/// A set `Z` with `w(Z) <= w/2` and `ρ(N(Z)) < ρ(Z)/t`, where `w` and `N`
/// are taken in the host graph (or the host minus a forbidden set).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExpanderWitness {
    pub set: VertexSet,
    pub w_of_set: Rational,
    pub rho_of_set: Rational,
    pub rho_of_boundary: Rational,
}

impl ExpanderWitness {
    /// Validates `set` against the definition in `g`; `None` if it is not a witness.
    pub fn certify(g: &Graph, w: &VertexAssignment, rho: &VertexAssignment, t: u64, set: &VertexSet) -> Option<Self> {
        certify_within(g, &VertexSet::new(g.n()), w, rho, t, set, w.total())
    }
}

/// As [`ExpanderWitness::certify`] inside `g - forbidden`, whose total weight is `w_host`.
pub(crate) fn certify_within(
    g: &Graph,
    forbidden: &VertexSet,
    w: &VertexAssignment,
    rho: &VertexAssignment,
    t: u64,
    set: &VertexSet,
    w_host: &Rational,
) -> Option<ExpanderWitness> {
    if set.is_empty() || !set.is_disjoint(forbidden) {
        return None;
    }
    let w_of_set = w.sum(set.iter());
    if w_of_set * int(2u32) > *w_host {
        return None;
    }
    let rho_of_set = rho.sum(set.iter());
    let boundary = neighborhood(g, set, forbidden);
    let rho_of_boundary = rho.sum(boundary.iter());
    if &rho_of_boundary * int(t) >= rho_of_set {
        return None;
    }
    Some(ExpanderWitness {
        set: set.clone(),
        w_of_set: w.sum(set.iter()),
        rho_of_set,
        rho_of_boundary,
    })
}

/// Smallest witness of non-expansion by exhaustive search (ties: smaller
/// bitmask), or `None` when `g` is a `(w,ρ,t)`-expander.
pub fn find_witness_exhaustive(
    g: &Graph,
    w: &VertexAssignment,
    rho: &VertexAssignment,
    t: u64,
) -> Result<Option<ExpanderWitness>> {
    let n = g.n();
    if rho.total().is_zero() {
        return Err(Error::domain("expander undefined: total cost is zero"));
    }
    let cap = caps().witness.min(30);
    if n > cap {
        return Err(Error::Capacity {
            what: "find_witness_exhaustive",
            size: n,
            cap,
        });
    }
    let masks = g.masks();
    let (w_num, _) = common_denominator(w);
    let (r_num, _) = common_denominator(rho);
    let w_total: num_bigint::BigInt = w_num.iter().sum();
    let t_big = num_bigint::BigInt::from(t);
    for k in 1..=n {
        // Gosper's hack: masks with k bits in increasing order.
        let mut x: u64 = (1u64 << k) - 1;
        while x < 1u64 << n {
            let wx: num_bigint::BigInt = bits(x).map(|v| &w_num[v]).sum();
            if &wx * 2 <= w_total {
                let nb = bits(x).fold(0u64, |acc, v| acc | masks[v]) & !x;
                let rx: num_bigint::BigInt = bits(x).map(|v| &r_num[v]).sum();
                let rn: num_bigint::BigInt = bits(nb).map(|v| &r_num[v]).sum();
                if rn * &t_big < rx {
                    let set = VertexSet::from_slice(n, &bits(x).collect::<Vec<_>>());
                    let witness =
                        ExpanderWitness::certify(g, w, rho, t, &set).expect("enumerated witness must certify");
                    return Ok(Some(witness));
                }
            }
            let c = x & x.wrapping_neg();
            let r = x + c;
            x = (((r ^ x) >> 2) / c) | r;
        }
    }
    Ok(None)
}

fn bits(mask: u64) -> impl Iterator<Item = usize> {
    let mut m = mask;
    std::iter::from_fn(move || {
        if m == 0 {
            return None;
        }
        let b = m.trailing_zeros() as usize;
        m &= m - 1;
        Some(b)
    })
}

/// Integer numerators over a shared denominator.
fn common_denominator(a: &VertexAssignment) -> (Vec<num_bigint::BigInt>, num_bigint::BigInt) {
    use num_integer::Integer;
    let den = a
        .values()
        .iter()
        .fold(num_bigint::BigInt::from(1), |acc, x| acc.lcm(x.denom()));
    let nums = a.values().iter().map(|x| x.numer() * (&den / x.denom())).collect();
    (nums, den)
}

/// Outcome of [`grow_ball_certified`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BallGrowth {
    pub reached: VertexSet,
    pub steps: usize,
    pub witness: Option<ExpanderWitness>,
}

/// Grows `X ← X ∪ N(X)` from `seed` for up to `max_steps` steps, returning
/// the first `X` that witnesses non-expansion. Without a witness after `i`
/// steps, `ρ(X) >= (1+1/t)^i ρ(seed)` or `w(X) > w(g)/2`.
pub fn grow_ball_certified(
    g: &Graph,
    w: &VertexAssignment,
    rho: &VertexAssignment,
    t: u64,
    seed: &VertexSet,
    max_steps: usize,
) -> Result<BallGrowth> {
    grow_within(g, &VertexSet::new(g.n()), w, rho, t, seed, max_steps, w.total())
}

#[allow(clippy::too_many_arguments)]
pub(crate) fn grow_within(
    g: &Graph,
    forbidden: &VertexSet,
    w: &VertexAssignment,
    rho: &VertexAssignment,
    t: u64,
    seed: &VertexSet,
    max_steps: usize,
    w_host: &Rational,
) -> Result<BallGrowth> {
    if rho.sum(seed.iter()).is_zero() {
        return Err(Error::domain("ball growth needs a seed of positive cost"));
    }
    let mut reached = seed.clone();
    let mut steps = 0;
    loop {
        if let Some(witness) = certify_within(g, forbidden, w, rho, t, &reached, w_host) {
            return Ok(BallGrowth {
                reached,
                steps,
                witness: Some(witness),
            });
        }
        let boundary = neighborhood(g, &reached, forbidden);
        if steps == max_steps || boundary.is_empty() {
            return Ok(BallGrowth {
                reached,
                steps,
                witness: None,
            });
        }
        reached.union_with(&boundary);
        steps += 1;
    }
}

/// Default step budget `ℓ(t, ⌈ρ(G)/ρ(seed)⌉)`.
pub fn default_max_steps(t: u64, rho: &VertexAssignment, seed: &VertexSet) -> Result<usize> {
    let rs = rho.sum(seed.iter());
    if rs.is_zero() {
        return Err(Error::domain("seed of zero cost"));
    }
    let bound = (rho.total() / rs).ceil();
    Ok(ell(t, &bound) as usize)
}

/// Checks `d(X1, X2) <= ℓ(t,b1) + ℓ(t,b2)` on a graph certified to be an
/// expander by exhaustive search.
#[allow(clippy::too_many_arguments)]
pub fn check_distance_lemma(
    g: &Graph,
    w: &VertexAssignment,
    rho: &VertexAssignment,
    t: u64,
    x1: &VertexSet,
    x2: &VertexSet,
    b1: &Rational,
    b2: &Rational,
) -> Result<bool> {
    let one = int(1u32);
    if b1 < &one || b2 < &one {
        return Err(Error::domain("b1, b2 must be at least 1"));
    }
    for (x, b) in [(x1, b1), (x2, b2)] {
        if rho.sum(x.iter()) * b < *rho.total() || x.is_empty() {
            return Err(Error::domain("cost precondition ρ(X) >= ρ(G)/b fails"));
        }
    }
    if find_witness_exhaustive(g, w, rho, t)?.is_some() {
        return Err(Error::domain("graph is not an expander"));
    }
    Ok(within_distance_bound(g, t, x1, x2, b1, b2))
}

/// The distance half of [`check_distance_lemma`], for callers that have
/// already certified `g` and checked the cost preconditions.
pub fn within_distance_bound(g: &Graph, t: u64, x1: &VertexSet, x2: &VertexSet, b1: &Rational, b2: &Rational) -> bool {
    let bound = ell(t, b1) + ell(t, b2);
    match set_distance(g, x1, x2, &VertexSet::new(g.n())) {
        Some(d) => d as u64 <= bound,
        None => false,
    }
}
