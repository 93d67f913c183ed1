//! The characteristic function of a random signed harmonic sum and the
//! quantities that control how concentrated that sum is.
//!
//! For uniform random signs, `X_A = Σ_{n∈A} ±1/n` has characteristic function
//! `ρ_A(t) = Π cos(2πt/n)`. Everything here works with `log|ρ_A|` so that
//! products over thousands of factors never underflow.

use std::f64::consts::PI;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, ToPrimitive, Zero};
use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::numerics::{lcm_of, BigFixed, ExactRational};
use crate::support::SupportSet;

/// A logarithm that may be `-∞` because a factor vanished exactly.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum LogValue {
    NegInfinity,
    Finite(f64),
}

impl LogValue {
    pub fn to_f64(self) -> f64 {
        match self {
            LogValue::NegInfinity => f64::NEG_INFINITY,
            LogValue::Finite(v) => v,
        }
    }

    pub fn is_neg_infinity(self) -> bool {
        matches!(self, LogValue::NegInfinity)
    }

    /// `self ≤ bound`, with `-∞` below everything.
    pub fn le(self, bound: f64) -> bool {
        match self {
            LogValue::NegInfinity => true,
            LogValue::Finite(v) => v <= bound,
        }
    }
}

impl Serialize for LogValue {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            LogValue::NegInfinity => serializer.serialize_str("-inf"),
            LogValue::Finite(v) => serializer.serialize_f64(*v),
        }
    }
}

impl std::fmt::Display for LogValue {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            LogValue::NegInfinity => f.write_str("-inf"),
            LogValue::Finite(v) => write!(f, "{v}"),
        }
    }
}

/// Signed distance from `x` to the nearest integer, in `[-1/2, 1/2]`.
fn centered_frac(x: f64) -> f64 {
    x - x.round()
}

/// `‖x‖`, the distance from `x` to the nearest integer.
pub fn dist_to_int(x: f64) -> f64 {
    centered_frac(x).abs()
}

/// `log|cos(2πt/n)|`, or `None` when the cosine vanishes (`4t/n` an odd integer).
fn log_abs_cos(t: f64, n: u64) -> Option<f64> {
    let theta = centered_frac(t / n as f64);
    let four = 4.0 * t / n as f64;
    if four == four.round() && (four.round() as i64).rem_euclid(2) == 1 {
        return None;
    }
    let c = (2.0 * PI * theta).cos().abs();
    if c == 0.0 {
        None
    } else {
        Some(c.ln())
    }
}

/// `log|ρ_A(t)| = Σ_{n∈A} log|cos(2πt/n)|`.
pub fn char_fn_log_abs(a: &SupportSet, t: f64) -> LogValue {
    let mut acc = 0.0;
    for n in a.iter() {
        match log_abs_cos(t, n) {
            Some(v) => acc += v,
            None => return LogValue::NegInfinity,
        }
    }
    LogValue::Finite(acc)
}

/// Both sides of `|cos(2πθ)| ≤ exp(−2π²‖θ‖²)`.
pub fn gaussian_cos_bound(theta: f64) -> (f64, f64) {
    let lhs = (2.0 * PI * theta).cos().abs();
    let d = dist_to_int(theta);
    (lhs, (-2.0 * PI * PI * d * d).exp())
}

/// Upper bound for `log|cos(2πt/n)|` valid for every `t`:
/// `|cos πx| ≤ exp(−(π²/2)‖x‖²)` with `x = 2t/n`.
pub fn cos_log_bound(t: f64, n: u64) -> f64 {
    let d = dist_to_int(2.0 * t / n as f64);
    -0.5 * PI * PI * d * d
}

/// `log|ρ_A|` and its Gaussian upper bound on a grid of `t`.
#[derive(Clone, Debug, Serialize)]
pub struct DensityProfile {
    pub t: Vec<f64>,
    pub log_abs_rho: Vec<LogValue>,
    pub bound_log: Vec<f64>,
}

pub fn density_profile(a: &SupportSet, grid: &[f64]) -> DensityProfile {
    let rows: Vec<(LogValue, f64)> = grid
        .par_iter()
        .map(|&t| {
            let bound = a.iter().map(|n| cos_log_bound(t, n)).sum();
            (char_fn_log_abs(a, t), bound)
        })
        .collect();
    DensityProfile {
        t: grid.to_vec(),
        log_abs_rho: rows.iter().map(|r| r.0).collect(),
        bound_log: rows.iter().map(|r| r.1).collect(),
    }
}

/// `|{n ∈ B : ‖t/n‖ ≤ δ}|`.
pub fn s_count(b: &SupportSet, t: f64, delta: f64) -> usize {
    b.iter().filter(|&n| dist_to_int(t / n as f64) <= delta).count()
}

/// `δ = (1/4k)(log log t / log t)^k · |B|/N`, clamped to `[0, 1/2]`.
pub fn delta_choice(b_size: usize, n: u64, k: u32, t: f64) -> Result<f64> {
    if !(t > std::f64::consts::E) {
        return Err(Error::Domain(format!("t = {t} ≤ e")));
    }
    if k == 0 || n == 0 {
        return Err(Error::Domain("k and N must be positive".into()));
    }
    Ok(delta_unclamped(b_size, n, k, t).clamp(0.0, 0.5))
}

fn delta_unclamped(b_size: usize, n: u64, k: u32, t: f64) -> f64 {
    let lt = t.ln();
    (lt.ln() / lt).powi(k as i32) / (4.0 * k as f64) * b_size as f64 / n as f64
}

/// Why a parameter set admits no concentration bound.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Feasibility {
    Feasible,
    /// `|B| ≤ N^{2/3}`, so the local constant is not positive.
    BasisTooSmall,
    /// `η_min > 1/N`: no admissible threshold.
    EtaWindowEmpty,
    /// `T ≤ T₀`: the decay range is empty.
    DecayWindowEmpty,
}

/// Parameters of the local concentration bound for one basis.
#[derive(Clone, Debug, Serialize)]
pub struct EtaBudget {
    pub n: u64,
    pub b_size: usize,
    pub k: u32,
    pub c_loc: f64,
    /// `ln η_min`.
    pub log_eta_min: f64,
    pub t0: f64,
    /// `ln T`.
    pub log_t: f64,
    pub feasibility: Feasibility,
}

impl EtaBudget {
    pub fn is_feasible(&self) -> bool {
        self.feasibility == Feasibility::Feasible
    }

    pub fn t(&self) -> f64 {
        self.log_t.exp()
    }

    /// `η_min` as a fixed-point interval. The float exponent is trusted to
    /// about 1e-9 relative, which is folded into the error bound.
    pub fn eta_min(&self, scale_bits: u32) -> Result<BigFixed> {
        log_to_fixed(self.log_eta_min, scale_bits)
    }
}

/// `exp(log_v)` as a fixed-point interval, usable when `exp` underflows f64.
pub fn log_to_fixed(log_v: f64, scale_bits: u32) -> Result<BigFixed> {
    if !log_v.is_finite() {
        return Err(Error::Domain(format!("log value {log_v}")));
    }
    // exp(log_v) = 2^e · m with e integral and m ∈ [1, 2).
    let l2 = log_v / std::f64::consts::LN_2;
    let e = l2.floor();
    let m = ((l2 - e) * std::f64::consts::LN_2).exp();
    let shift = e as i64 + scale_bits as i64;
    if shift < -60 {
        return Ok(BigFixed::zero(scale_bits).with_extra_error(&BigUint::one()));
    }
    let m_fixed = (m * (1u64 << 52) as f64).round() as i64;
    let mantissa = if shift >= 52 {
        BigInt::from(m_fixed) << (shift - 52) as usize
    } else {
        BigInt::from(m_fixed) >> (52 - shift) as usize
    };
    // About 1e-9 relative: covers the float rounding of the exponent itself.
    let err = (mantissa.magnitude() >> 30usize) + 2u32;
    BigFixed::new(mantissa, scale_bits, err)
}

/// Computes the concentration parameters for a basis of size `b_size` at scale `N`.
pub fn eta_budget(n: u64, b_size: usize, k: u32, x0: f64, c: f64) -> EtaBudget {
    let ln_n = (n as f64).ln();
    let b = b_size.max(1) as f64;
    let c_loc = (3.0 * b.ln() - 2.0 * ln_n) / ln_n;
    let k = k.max(1);
    let t0 = {
        let a = if x0 == 0.0 { f64::INFINITY } else { 1.0 / (4.0 * x0.abs()) };
        a.min(c * n as f64 / 4.0)
    };
    let expo = |denom: f64| -> f64 {
        if c_loc <= 1e-12 {
            return 0.0;
        }
        let kk = 2.0 * k as f64;
        let base = c_loc.powf(kk) / denom * b.powi(3) / (n as f64).powi(2);
        base.powf(1.0 / (kk + 1.0)) * ln_n.powf(kk / (kk + 1.0))
    };
    let log_eta_min = -expo(100.0);
    let log_t = expo(32.0);
    let feasibility = if c_loc <= 1e-12 {
        Feasibility::BasisTooSmall
    } else if log_eta_min > -ln_n {
        Feasibility::EtaWindowEmpty
    } else if log_t <= t0.ln() {
        Feasibility::DecayWindowEmpty
    } else {
        Feasibility::Feasible
    };
    EtaBudget {
        n,
        b_size,
        k,
        c_loc,
        log_eta_min,
        t0,
        log_t,
        feasibility,
    }
}

/// `count` points in `(lo, hi]`, log-spaced with uniform jitter inside each
/// cell, reproducible from `seed`.
pub fn log_spaced_samples(lo: f64, hi: f64, count: usize, seed: u64) -> Result<Vec<f64>> {
    if !(lo > 0.0 && hi > lo) {
        return Err(Error::Domain(format!("empty sampling window ({lo}, {hi}]")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (a, b) = (lo.ln(), hi.ln());
    let cell = (b - a) / count.max(1) as f64;
    Ok((0..count)
        .map(|i| {
            let u: f64 = 1.0 - rng.gen::<f64>();
            (a + cell * (i as f64 + u)).exp().clamp(lo.next_up(), hi)
        })
        .collect())
}

/// One failed check in a decay certificate.
#[derive(Clone, Debug, Serialize)]
pub struct DecayViolation {
    pub t: f64,
    pub delta: f64,
    pub s_count: usize,
    pub log_abs_rho: LogValue,
    pub count_failed: bool,
    pub decay_failed: bool,
}

/// Result of checking `S_{B,δ}(t) ≤ |B|/2` and `|ρ_A(t)| ≤ t^{-2}` on samples.
#[derive(Clone, Debug, Serialize)]
pub struct DecayReport {
    pub n: u64,
    pub k: u32,
    pub samples: usize,
    pub violations: Vec<DecayViolation>,
    /// Set when the certificate cannot be run at all.
    pub infeasible: Option<String>,
    /// Largest `log|ρ_A(t)| + 2 log t` seen (negative means slack).
    pub worst_margin: f64,
}

impl DecayReport {
    pub fn passed(&self) -> bool {
        self.infeasible.is_none() && self.violations.is_empty()
    }
}

pub fn decay_certificate(a: &SupportSet, b: &SupportSet, n: u64, k: u32, t_samples: &[f64]) -> DecayReport {
    let mut report = DecayReport {
        n,
        k,
        samples: t_samples.len(),
        violations: Vec::new(),
        infeasible: None,
        worst_margin: f64::NEG_INFINITY,
    };
    if b.len() < 2 {
        report.infeasible = Some(format!("|B| = {} leaves no room for |B|/2", b.len()));
        return report;
    }
    if !b.is_subset(a) {
        report.infeasible = Some("B is not a subset of A".into());
        return report;
    }
    let rows: Vec<(f64, Result<f64>, usize, LogValue)> = t_samples
        .par_iter()
        .map(|&t| {
            let delta = delta_choice(b.len(), n, k, t);
            let count = delta.as_ref().map_or(0, |&d| s_count(b, t, d));
            (t, delta, count, char_fn_log_abs(a, t))
        })
        .collect();
    for (t, delta, count, log_rho) in rows {
        let delta = match delta {
            Ok(d) => d,
            Err(e) => {
                report.infeasible = Some(format!("t = {t}: {e}"));
                return report;
            }
        };
        let bound = -2.0 * t.ln();
        if let LogValue::Finite(v) = log_rho {
            report.worst_margin = report.worst_margin.max(v - bound);
        }
        let count_failed = 2 * count > b.len();
        let decay_failed = !log_rho.le(bound);
        if count_failed || decay_failed {
            report.violations.push(DecayViolation {
                t,
                delta,
                s_count: count,
                log_abs_rho: log_rho,
                count_failed,
                decay_failed,
            });
        }
    }
    report
}

/// Exact integer model of `|X_A − x₀| ≤ η`: with `D = lcm(A)`, a sign vector
/// qualifies iff `Σ ±D/n ∈ [lo, hi]`.
enum Window {
    Small { weights: Vec<i128>, lo: i128, hi: i128 },
    Big { weights: Vec<BigInt>, lo: BigInt, hi: BigInt },
    Empty,
}

impl Window {
    fn new(a: &SupportSet, x0: &ExactRational, eta: &ExactRational) -> Result<Window> {
        if eta.signum() < 0 {
            return Ok(Window::Empty);
        }
        let d = BigInt::from(lcm_of(a.iter(), 1 << 20)?);
        let scale = |v: &ExactRational| -> (BigInt, BigInt) { (v.numer() * &d, v.denom().clone()) };
        let (ln, ld) = scale(&(x0 - eta));
        let (hn, hd) = scale(&(x0 + eta));
        let lo = num_integer::Integer::div_ceil(&ln, &ld);
        let hi = num_integer::Integer::div_floor(&hn, &hd);
        if lo > hi {
            return Ok(Window::Empty);
        }
        let weights: Vec<BigInt> = a.iter().map(|n| &d / BigInt::from(n)).collect();
        let total: BigInt = weights.iter().sum();
        // Clamp to the reachable range so the bounds fit whenever the weights do.
        let lo = lo.max(-&total - 1);
        let hi = hi.min(&total + 1);
        let fits = total.bits() < 120;
        if fits {
            Ok(Window::Small {
                weights: weights.iter().map(|w| w.to_i128().unwrap()).collect(),
                lo: lo.to_i128().unwrap(),
                hi: hi.to_i128().unwrap(),
            })
        } else {
            Ok(Window::Big { weights, lo, hi })
        }
    }

    /// Whether the sign vector encoded by the low `len` bits of `bits`
    /// (bit set = +1) qualifies.
    fn hits(&self, bits: u64) -> bool {
        match self {
            Window::Empty => false,
            Window::Small { weights, lo, hi } => {
                let mut s = 0i128;
                for (i, w) in weights.iter().enumerate() {
                    if bits >> i & 1 == 1 {
                        s += w;
                    } else {
                        s -= w;
                    }
                }
                *lo <= s && s <= *hi
            }
            Window::Big { weights, lo, hi } => {
                let mut s = BigInt::zero();
                for (i, w) in weights.iter().enumerate() {
                    if bits >> i & 1 == 1 {
                        s += w;
                    } else {
                        s -= w;
                    }
                }
                lo <= &s && &s <= hi
            }
        }
    }
}

/// Largest support accepted by [`exhaustive_probability`].
pub const EXHAUSTIVE_MAX: usize = 25;

/// `P(|X_A − x₀| ≤ η)` exactly, by enumerating all `2^|A|` sign vectors.
pub fn exhaustive_probability(a: &SupportSet, x0: &ExactRational, eta: &ExactRational) -> Result<ExactRational> {
    if a.len() > EXHAUSTIVE_MAX {
        return Err(Error::Resource(format!(
            "|A| = {} exceeds the exhaustive limit {EXHAUSTIVE_MAX}",
            a.len()
        )));
    }
    let m = a.len();
    let window = Window::new(a, x0, eta)?;
    let hits: u64 = match &window {
        Window::Empty => 0,
        Window::Small { weights, lo, hi } => {
            // Gray-code walk: one weight changes per step.
            let mut s: i128 = -weights.iter().sum::<i128>();
            let mut count = u64::from(*lo <= s && s <= *hi);
            for step in 1u64..(1u64 << m) {
                let i = step.trailing_zeros() as usize;
                let gray = step ^ (step >> 1);
                if gray >> i & 1 == 1 {
                    s += 2 * weights[i];
                } else {
                    s -= 2 * weights[i];
                }
                count += u64::from(*lo <= s && s <= *hi);
            }
            count
        }
        Window::Big { .. } => (0u64..(1u64 << m)).filter(|&b| window.hits(b)).count() as u64,
    };
    ExactRational::new(BigInt::from(hits), BigInt::one() << m)
}

/// Samples drawn per chunk in [`mc_probability`]; chunk `i` uses seed `seed ^ i`.
pub const MC_CHUNK: usize = 8192;

/// Monte-Carlo estimate of `P(|X_A − x₀| ≤ η)` with its standard error.
pub fn mc_probability(
    a: &SupportSet,
    x0: &ExactRational,
    eta: &ExactRational,
    samples: usize,
    seed: u64,
) -> Result<(f64, f64)> {
    if samples == 0 {
        return Err(Error::Domain("at least one sample is required".into()));
    }
    if a.len() > 64 {
        return Err(Error::Resource("Monte-Carlo sampling supports |A| ≤ 64".into()));
    }
    let window = Window::new(a, x0, eta)?;
    let mask = if a.len() == 64 { u64::MAX } else { (1u64 << a.len()) - 1 };
    let chunks = samples.div_ceil(MC_CHUNK);
    let hits: u64 = (0..chunks)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed ^ i as u64);
            let len = MC_CHUNK.min(samples - i * MC_CHUNK);
            (0..len).filter(|_| window.hits(rng.next_u64() & mask)).count() as u64
        })
        .sum();
    let p = hits as f64 / samples as f64;
    Ok((p, (p * (1.0 - p) / samples as f64).sqrt()))
}
