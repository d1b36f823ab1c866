//! `ℓ(t,b)`, the level parameters and the iterated parameter schedule.

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive};

use crate::assign::{int, Rational};

/// Above this many bits the float estimate is trusted even near an integer.
const EXACT_BIT_LIMIT: f64 = (1u64 << 24) as f64;

/// Smallest `e >= 0` with `(p/q)^e > b`, for integers `p > q >= 1`.
///
/// Decided by exact integer powers whenever the powers stay small. For very
/// large exponents a floating-point estimate is accepted when it is far
/// from an integer boundary or the powers would be huge; otherwise the exact
/// test is run.
pub fn min_exponent_exceeding(p: u64, q: u64, b: &Rational) -> u64 {
    assert!(p > q && q >= 1, "base must exceed one");
    if b < &Rational::one() {
        return 0;
    }
    let exceeds = |e: u64| -> bool {
        let e = e as usize;
        let lhs = num_traits::pow(BigInt::from(p), e) * b.denom();
        let rhs = num_traits::pow(BigInt::from(q), e) * b.numer();
        lhs > rhs
    };
    let step = ((p - q) as f64 / q as f64).ln_1p();
    let x = ln_rational(b) / step;
    let guess = x.floor().max(0.0) as u64 + 1;
    let bits = guess as f64 * (p as f64).log2();
    let frac = x - x.floor();
    let tolerance = 1e-12 * (1.0 + x.abs());
    if bits > 65_536.0 && (frac.min(1.0 - frac) > tolerance || bits > EXACT_BIT_LIMIT) {
        return guess;
    }
    let mut e = guess;
    while e > 0 && exceeds(e - 1) {
        e -= 1;
    }
    while !exceeds(e) {
        e += 1;
    }
    e
}

fn ln_bigint(n: &BigInt) -> f64 {
    let bits = n.bits();
    if bits <= 1000 {
        return n.to_f64().unwrap().ln();
    }
    let shift = bits - 64;
    let top: BigInt = n >> shift;
    top.to_f64().unwrap().ln() + shift as f64 * std::f64::consts::LN_2
}

fn ln_rational(b: &Rational) -> f64 {
    debug_assert!(b.is_positive());
    ln_bigint(b.numer()) - ln_bigint(b.denom())
}

/// `ℓ(t,b)`: the minimum `ℓ` with `(1+1/t)^ℓ > b`.
pub fn ell(t: u64, b: &Rational) -> u64 {
    assert!(t >= 1, "t must be at least 1");
    min_exponent_exceeding(t + 1, t, b)
}

/// `⌈log_{9/8}(20t/3)⌉`, the cap on heavy-graph refinement rounds.
pub fn refinement_rounds(t: u64) -> u64 {
    min_exponent_exceeding(9, 8, &(int(20 * t) / int(3u32)))
}

/// Parameters of one engine run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EngineParams {
    pub t: u64,
    /// Vertex-count parameter used for `C_0` and `l` (at least the instance size).
    pub n: u128,
    pub l: u64,
    pub m: u64,
    pub r: u64,
    pub omega_hat: u64,
    pub b: u128,
    pub wcol_m: u64,
    pub n_prime: u128,
}

impl EngineParams {
    /// Parameters for a single run on an `n`-vertex instance.
    pub fn single(n: usize, t: u64, omega_hat: u64, wcol_m: u64) -> Self {
        let n = n.max(1) as u128;
        let l = 2 * ell(5 * t, &(int(5 * t) * int(n)));
        let m = 2 * ell(5 * t, &int(20 * t));
        let b = (omega_hat as u128)
            .saturating_mul(omega_hat as u128)
            .saturating_mul(l as u128);
        EngineParams {
            t,
            n,
            l,
            m,
            r: refinement_rounds(t),
            omega_hat,
            b,
            wcol_m,
            n_prime: 5u128
                .saturating_mul(b)
                .saturating_mul(t as u128)
                .saturating_mul(wcol_m as u128),
        }
    }

    /// The same run with clique-minor bound `omega_hat`, updating `b` and `n′`.
    pub fn with_omega(&self, omega_hat: u64) -> Self {
        let b = (omega_hat as u128)
            .saturating_mul(omega_hat as u128)
            .saturating_mul(self.l as u128);
        EngineParams {
            omega_hat,
            b,
            n_prime: 5u128
                .saturating_mul(b)
                .saturating_mul(self.t as u128)
                .saturating_mul(self.wcol_m as u128),
            ..self.clone()
        }
    }
}

/// One level of the iterated construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LevelParams {
    pub level: usize,
    pub t: u64,
    pub r: u64,
    /// Power-graph radius `m_i` relating this level's instances to `G`.
    pub m: u64,
    /// Radius used inside this level's engine, `2ℓ(5t_i, 20t_i)`.
    pub engine_m: u64,
    pub l: u64,
    pub omega_hat: u64,
    pub b: u128,
    pub n: u128,
    /// `wcol^≺_{m_{i+1}}(G)`.
    pub wcol_next: u64,
    pub n_next: u128,
}

impl LevelParams {
    pub fn engine_params(&self) -> EngineParams {
        EngineParams {
            t: self.t,
            n: self.n,
            l: self.l,
            m: self.engine_m,
            r: self.r,
            omega_hat: self.omega_hat,
            b: self.b,
            wcol_m: self.wcol_next,
            n_prime: self.n_next,
        }
    }
}

/// The recurrences `t_{i+1} = 5r_i t_i`, `m_{i+1} = 2ℓ(5t_i,20t_i) m_i`,
/// `l_i = 2ℓ(5t_i, 5t_i n_i)`, `b_i = ω̂_i² l_i`, `n_{i+1} = 5 b_i t_i wcol_{m_{i+1}}`
/// for levels `0..=a`, starting from `t_0 = t`, `n_0 = n`, `m_0 = 1`.
///
/// `wcol_probe(m)` supplies `wcol^≺_m(G)`; `omega_probe(level, m_i, l_i)`
/// supplies the clique-minor bound for `G^[≺,m_i]` at depth `l_i`.
pub fn param_schedule(
    n: usize,
    t: u64,
    a: usize,
    wcol_probe: &mut dyn FnMut(u64) -> u64,
    omega_probe: &mut dyn FnMut(usize, u64, u64) -> u64,
) -> Vec<LevelParams> {
    let mut out = Vec::with_capacity(a + 1);
    let (mut t_i, mut n_i, mut m_i) = (t, n.max(1) as u128, 1u64);
    for level in 0..=a {
        let r = refinement_rounds(t_i);
        let five_t = t_i.saturating_mul(5);
        let engine_m = 2 * ell(five_t, &int(t_i.saturating_mul(20)));
        let m_next = engine_m.saturating_mul(m_i);
        let l = 2 * ell(five_t, &(int(five_t) * int(n_i)));
        let omega_hat = omega_probe(level, m_i, l).max(1);
        let b = (omega_hat as u128)
            .saturating_mul(omega_hat as u128)
            .saturating_mul(l as u128);
        let wcol_next = wcol_probe(m_next);
        let n_next = 5u128
            .saturating_mul(b)
            .saturating_mul(t_i as u128)
            .saturating_mul(wcol_next as u128);
        out.push(LevelParams {
            level,
            t: t_i,
            r,
            m: m_i,
            engine_m,
            l,
            omega_hat,
            b,
            n: n_i,
            wcol_next,
            n_next,
        });
        t_i = five_t.saturating_mul(r);
        n_i = n_next;
        m_i = m_next;
    }
    out
}

/// `n_a · ∏_{i=from}^{a-1} r_i`: the outlier guarantee for a level-`from` solve.
pub fn outlier_bound(schedule: &[LevelParams], from: usize) -> u128 {
    let a = schedule.len() - 1;
    schedule[from..a]
        .iter()
        .fold(schedule[a].n, |acc, p| acc.saturating_mul(p.r as u128))
}
