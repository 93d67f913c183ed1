//! Completely multiplicative `±1` functions and their logarithmic means.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::constructor::{eta_to_fixed, flip_to_target, mitm_weighted, verify_signs, DEFAULT_FREE};
use crate::density::log_to_fixed;
use crate::error::{Error, Result};
use crate::numerics::{compare_to_threshold, exact_rational_sum, signed_harmonic_sum, BigFixed, Comparison, ExactRational};
use crate::sieve::SieveTable;
use crate::support::{SignSequence, SupportSet};

/// The values a function takes at primes before any overrides.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SeedRule {
    /// `−1` at every prime.
    Liouville,
    /// `+1` at every prime.
    One,
    /// `(p/3)` at primes `p ≠ 3`, and `−1` at 3.
    Chi3Star,
    /// `−1` at every prime except the listed ones, which get `+1`.
    LiouvilleExcept(Vec<u64>),
}

impl SeedRule {
    pub fn prime_sign(&self, p: u64) -> i8 {
        match self {
            SeedRule::Liouville => -1,
            SeedRule::One => 1,
            SeedRule::Chi3Star => match p % 3 {
                1 => 1,
                _ => -1,
            },
            SeedRule::LiouvilleExcept(plus) => {
                if plus.contains(&p) {
                    1
                } else {
                    -1
                }
            }
        }
    }
}

impl fmt::Display for SeedRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SeedRule::Liouville => f.write_str("liouville"),
            SeedRule::One => f.write_str("one"),
            SeedRule::Chi3Star => f.write_str("chi3"),
            SeedRule::LiouvilleExcept(ps) => {
                let list: Vec<String> = ps.iter().map(u64::to_string).collect();
                write!(f, "liouville+{}", list.join(","))
            }
        }
    }
}

impl FromStr for SeedRule {
    type Err = Error;

    /// `liouville`, `one`, `chi3`, or `liouville+p1,p2,...`.
    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "liouville" => Ok(SeedRule::Liouville),
            "one" => Ok(SeedRule::One),
            "chi3" => Ok(SeedRule::Chi3Star),
            other => {
                let list = other
                    .strip_prefix("liouville+")
                    .ok_or_else(|| Error::Parse(format!("unknown seed rule {other:?}")))?;
                let ps = list
                    .split(',')
                    .map(|p| p.trim().parse::<u64>().map_err(|_| Error::Parse(format!("bad prime {p:?}"))))
                    .collect::<Result<Vec<_>>>()?;
                Ok(SeedRule::LiouvilleExcept(ps))
            }
        }
    }
}

impl Serialize for SeedRule {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

/// A completely multiplicative `f: ℕ → {±1}` tabulated up to the sieve limit.
#[derive(Clone, Debug)]
pub struct MultiplicativeFn {
    rule: SeedRule,
    overrides: BTreeMap<u64, i8>,
    sieve: Arc<SieveTable>,
    values: Vec<i8>,
}

impl MultiplicativeFn {
    pub fn new(sieve: Arc<SieveTable>, rule: SeedRule, overrides: BTreeMap<u64, i8>) -> Result<Self> {
        if let SeedRule::LiouvilleExcept(ps) = &rule {
            for &p in ps {
                if !sieve.is_prime(p)? {
                    return Err(Error::Domain(format!("seed rule lists non-prime {p}")));
                }
            }
        }
        for (&p, &s) in &overrides {
            if !sieve.is_prime(p)? {
                return Err(Error::Domain(format!("override at non-prime {p}")));
            }
            if s != 1 && s != -1 {
                return Err(Error::Domain(format!("override value {s} is not ±1")));
            }
        }
        let limit = sieve.limit() as usize;
        let mut values = vec![1i8; limit + 1];
        for n in 2..=limit {
            let p = sieve.spf(n as u64)?.expect("n ≥ 2") as usize;
            let fp = overrides.get(&(p as u64)).copied().unwrap_or_else(|| rule.prime_sign(p as u64));
            values[n] = fp * values[n / p];
        }
        values[0] = 0;
        Ok(MultiplicativeFn {
            rule,
            overrides,
            sieve,
            values,
        })
    }

    pub fn from_rule(sieve: Arc<SieveTable>, rule: SeedRule) -> Result<Self> {
        MultiplicativeFn::new(sieve, rule, BTreeMap::new())
    }

    /// The same rule with additional (or replaced) prime overrides.
    pub fn with_overrides(&self, more: impl IntoIterator<Item = (u64, i8)>) -> Result<Self> {
        let mut overrides = self.overrides.clone();
        overrides.extend(more);
        MultiplicativeFn::new(self.sieve.clone(), self.rule.clone(), overrides)
    }

    pub fn rule(&self) -> &SeedRule {
        &self.rule
    }

    pub fn overrides(&self) -> &BTreeMap<u64, i8> {
        &self.overrides
    }

    pub fn sieve(&self) -> &Arc<SieveTable> {
        &self.sieve
    }

    pub fn limit(&self) -> u64 {
        self.sieve.limit()
    }

    pub fn evaluate(&self, n: u64) -> Result<i8> {
        if n == 0 {
            return Err(Error::Domain("f(0)".into()));
        }
        if n > self.limit() {
            return Err(Error::Range(format!("{n} exceeds limit {}", self.limit())));
        }
        Ok(self.values[n as usize])
    }

    /// `f(1), ..., f(N)` as a sign sequence on `[1, N]`.
    pub fn signs(&self, n: u64) -> Result<SignSequence> {
        if n > self.limit() {
            return Err(Error::Range(format!("{n} exceeds limit {}", self.limit())));
        }
        SignSequence::new(SupportSet::interval(1, n), self.values[1..=n as usize].to_vec())
    }

    /// `M(f, N) = Σ_{n≤N} f(n)`.
    pub fn partial_sum(&self, n: u64) -> Result<i64> {
        if n > self.limit() {
            return Err(Error::Range(format!("{n} exceeds limit {}", self.limit())));
        }
        Ok(self.values[1..=n as usize].iter().map(|&v| v as i64).sum())
    }

    /// `L(f, N) = Σ_{n≤N} f(n)/n` with error at most `N` ulps.
    pub fn log_mean(&self, n: u64, scale_bits: u32) -> Result<BigFixed> {
        Ok(signed_harmonic_sum(&self.signs(n)?, scale_bits))
    }

    pub fn log_mean_exact(&self, n: u64) -> Result<ExactRational> {
        exact_rational_sum(&self.signs(n)?)
    }
}

/// `M(χ*₋₃, 3^K + 1)` against `(−1)^K + 1` for each `K`.
#[derive(Clone, Debug, Serialize)]
pub struct Chi3Report {
    /// `(K, M(χ*₋₃, 3^K + 1), (−1)^K + 1)`.
    pub rows: Vec<(u32, i64, i64)>,
    pub first_failure: Option<u32>,
}

impl Chi3Report {
    pub fn passed(&self) -> bool {
        self.first_failure.is_none()
    }
}

pub fn chi3_star_check(sieve: Arc<SieveTable>, k_max: u32) -> Result<Chi3Report> {
    let top = 3u64.checked_pow(k_max).map(|v| v + 1);
    if top.is_none_or(|t| t > sieve.limit()) {
        return Err(Error::Range(format!("3^{k_max} + 1 exceeds the sieve limit")));
    }
    let f = MultiplicativeFn::from_rule(sieve, SeedRule::Chi3Star)?;
    let mut rows = Vec::new();
    let mut first_failure = None;
    for k in 1..=k_max {
        let m = f.partial_sum(3u64.pow(k) + 1)?;
        let want = if k % 2 == 0 { 2 } else { 0 };
        if m != want && first_failure.is_none() {
            first_failure = Some(k);
        }
        rows.push((k, m, want));
    }
    Ok(Chi3Report { rows, first_failure })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Crossing {
    Found { c: u64 },
    NotFound { limit: u64 },
}

/// Smallest `C > 1` with `Σ_{n≤C} f(n)/n < 0`.
///
/// The running sum is kept in 100-bit fixed point; after `n` terms it is
/// within `n/2` ulps of the truth, so its sign is certain unless it is that
/// close to zero, in which case the prefix is summed exactly.
pub fn first_negative_crossing(f: &MultiplicativeFn, limit: u64) -> Result<Crossing> {
    const BITS: u32 = 100;
    let limit = limit.min(f.limit());
    let one: i128 = 1 << BITS;
    let mut s: i128 = 0;
    for n in 1..=limit {
        let w = (one + (n as i128) / 2) / n as i128;
        if f.values[n as usize] > 0 {
            s += w;
        } else {
            s -= w;
        }
        if n == 1 {
            continue;
        }
        let err = n as i128 / 2 + 1;
        if s < -err {
            return Ok(Crossing::Found { c: n });
        }
        if s.abs() <= err && f.log_mean_exact(n)?.signum() < 0 {
            return Ok(Crossing::Found { c: n });
        }
    }
    Ok(Crossing::NotFound { limit })
}

/// Number of sampled pairs `(m, n)` with `mn ≤ limit` and `f(mn) ≠ f(m)f(n)`.
pub fn multiplicativity_violations(f: &MultiplicativeFn, pairs: usize, seed: u64) -> usize {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let limit = f.limit();
    let mut bad = 0;
    for _ in 0..pairs {
        let m = rng.gen_range(1..=limit.isqrt().max(1) * 4).min(limit);
        let n = rng.gen_range(1..=(limit / m).max(1));
        let (fm, fn_, fmn) = (f.values[m as usize], f.values[n as usize], f.values[(m * n) as usize]);
        if fmn != fm * fn_ {
            bad += 1;
        }
    }
    bad
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum PipelineMode {
    /// Requires `Δ > 0` and fails on the first infeasible scale.
    Strict,
    /// Accepts any `Δ ≠ 0`; an infeasible scale commits the signs that bring
    /// `L` closest to zero and the pipeline continues.
    Relaxed,
}

/// Scales `start · factor^i` for `i < count`.
pub fn geometric_scales(start: u64, factor: u64, count: usize) -> Vec<u64> {
    (0..count as u32).map(|i| start * factor.pow(i)).collect()
}

#[derive(Clone, Debug)]
pub struct PipelineConfig {
    pub seed_rule: SeedRule,
    /// The crossing constant; searched for when absent.
    pub c_cross: Option<u64>,
    pub crossing_limit: u64,
    pub scales: Vec<u64>,
    pub mode: PipelineMode,
    pub max_free: usize,
    pub eta: ExactRational,
    pub rng_seed: u64,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig {
            seed_rule: SeedRule::Liouville,
            c_cross: Some(3),
            crossing_limit: 1_000_000,
            scales: geometric_scales(2000, 8, 2),
            mode: PipelineMode::Relaxed,
            max_free: DEFAULT_FREE,
            eta: ExactRational::from_ratio(1, 10_000_000_000).expect("nonzero"),
            rng_seed: 0,
        }
    }
}

/// What happened at one scale of the pipeline.
#[derive(Clone, Debug, Serialize)]
pub struct ScaleOutcome {
    pub n: u64,
    /// `(N/2, N]`.
    pub p1_interval: (u64, u64),
    /// `(N/(C+1), N/C]`.
    pub p2_interval: (u64, u64),
    pub p1_count: usize,
    pub p2_count: usize,
    pub free_count: usize,
    /// Contribution of the integers with no prime factor in either interval.
    pub e: f64,
    /// The direct value of that contribution equals `L − Σ₁ − κΣ₂`.
    pub identity_holds: bool,
    /// Every value of `L(f, N)` the two prime blocks can reach.
    pub reachable: (f64, f64),
    pub feasible: bool,
    /// Exact value left after balancing, when the scale was feasible.
    pub residual: Option<f64>,
    pub infeasible_reason: Option<String>,
    /// `|L(f, N)|` for the final function.
    pub achieved: BigFixed,
    pub achieved_log10: f64,
    pub eta: BigFixed,
    pub verdict: Comparison,
    pub precision_bits: u32,
    /// Largest `c₀` with `|L| ≤ exp(−c₀ (N/log N)^{1/3})`.
    pub c0: Option<f64>,
    /// `|L| ≤ exp(−(1/1000)(N/log N)^{1/3})`, decided on intervals.
    pub cube_root_bound: Comparison,
}

#[derive(Clone, Debug, Serialize)]
pub struct PipelineState {
    pub seed_rule: SeedRule,
    pub mode: PipelineMode,
    pub scales: Vec<u64>,
    pub c_cross: u64,
    /// `Δ = −Σ_{n≤C} seed(n)/n`.
    pub delta: ExactRational,
    /// `0 < Δ < 1/C`.
    pub delta_below_inv_c: bool,
    pub modified_intervals: Vec<[(u64, u64); 2]>,
    /// Signs chosen on the modified primes.
    pub modified_primes: Vec<(u64, i8)>,
    pub reports: Vec<ScaleOutcome>,
}

impl PipelineState {
    pub fn in_modified_interval(&self, p: u64) -> bool {
        self.modified_intervals
            .iter()
            .any(|iv| iv.iter().any(|&(lo, hi)| p > lo && p <= hi))
    }

    pub fn all_below(&self) -> bool {
        self.reports.iter().all(|r| r.verdict == Comparison::Below)
    }
}

/// Signs for one scale: `f` on the `(N/2, N]` primes and on the
/// `(N/(C+1), N/C]` primes, with the exact remaining value of `L(f, N)`.
#[derive(Debug)]
pub(crate) struct Balance {
    pub p1_signs: Vec<i8>,
    pub p2_signs: Vec<i8>,
    pub residual: ExactRational,
}

fn signed_unit_sum(ps: &[u64], signs: &[i8]) -> Result<ExactRational> {
    exact_rational_sum(&SignSequence::new(SupportSet::new(ps.to_vec())?, signs.to_vec())?)
}

/// Drives `e + Σ_{P1} f(p)/p + κ Σ_{P2} f(p)/p` to its exact minimum over the
/// free primes: the flipping trick on the smaller `P1` primes, then
/// meet-in-the-middle over all of `P2` (up to `max_free`) and the largest
/// `P1` primes. `P2` primes that do not fit keep their seed signs.
pub(crate) fn balance_scale(
    e: &ExactRational,
    p1: &[u64],
    p2: &[u64],
    p2_seed: &[i8],
    kappa: &ExactRational,
    max_free: usize,
) -> Result<Balance> {
    if kappa.is_zero() {
        return Err(Error::Precondition("κ = 0 gives no lever on the second block".into()));
    }
    let k2 = p2.len().min(max_free);
    let k1 = (max_free - k2).min(p1.len().saturating_sub(1));
    let (p1_low, p1_free) = p1.split_at(p1.len() - k1);
    let (p2_fixed, p2_free) = p2.split_at(p2.len() - k2);
    let kappa_sign: i8 = if kappa.signum() > 0 { 1 } else { -1 };

    let r0 = e + &(kappa * &signed_unit_sum(p2_fixed, &p2_seed[..p2_fixed.len()])?);
    let low = SupportSet::new(p1_low.to_vec())?;
    let low_signs = if low.is_empty() {
        Vec::new()
    } else {
        flip_to_target(&low, &-r0.clone())?.signs().to_vec()
    };
    let r1 = &r0 + &signed_unit_sum(p1_low, &low_signs)?;

    let k_abs = kappa.abs();
    let mut weights: Vec<ExactRational> = p1_free.iter().map(|&p| ExactRational::unit(p)).collect::<Result<_>>()?;
    for &p in p2_free {
        weights.push(&k_abs * &ExactRational::unit(p)?);
    }
    let s = mitm_weighted(&weights, &-r1.clone())?;
    let mut residual = r1;
    for (w, &si) in weights.iter().zip(&s) {
        residual = if si > 0 { &residual + w } else { &residual - w };
    }
    let mut p1_signs = low_signs;
    p1_signs.extend_from_slice(&s[..k1]);
    let mut p2_signs = p2_seed[..p2_fixed.len()].to_vec();
    p2_signs.extend(s[k1..].iter().map(|&si| si * kappa_sign));
    Ok(Balance {
        p1_signs,
        p2_signs,
        residual,
    })
}

/// Modifies `f` on `(N/2, N]` and `(N/(C+1), N/C]` at each scale so that
/// `L(f, N)` becomes tiny, leaving every other prime at its seed value.
pub fn theorem1_pipeline(sieve: Arc<SieveTable>, cfg: &PipelineConfig) -> Result<(MultiplicativeFn, PipelineState)> {
    let seed_fn = MultiplicativeFn::from_rule(sieve.clone(), cfg.seed_rule.clone())?;
    let c = match cfg.c_cross {
        Some(c) => c,
        None => match first_negative_crossing(&seed_fn, cfg.crossing_limit)? {
            Crossing::Found { c } => c,
            Crossing::NotFound { limit } => {
                return Err(Error::Precondition(format!(
                    "the seed's logarithmic sums stay positive up to {limit}"
                )))
            }
        },
    };
    if c < 2 {
        return Err(Error::Domain(format!("C = {c} must exceed 1")));
    }
    let scales = &cfg.scales;
    if scales.is_empty() {
        return Err(Error::Domain("no scales".into()));
    }
    for w in scales.windows(2) {
        if w[1] < 8 * w[0] {
            return Err(Error::Domain(format!("scale {} grows less than 8× over {}", w[1], w[0])));
        }
        if w[1] / (c + 1) < w[0] {
            return Err(Error::Precondition(format!(
                "intervals at {} and {} overlap for C = {c}",
                w[0], w[1]
            )));
        }
    }
    if scales[0] < (c + 1) * (c + 1) {
        return Err(Error::Precondition(format!("N₀ = {} < (C+1)²", scales[0])));
    }
    let top = *scales.last().expect("nonempty");
    if top > sieve.limit() {
        return Err(Error::Range(format!("scale {top} exceeds the sieve limit")));
    }

    let delta = -seed_fn.log_mean_exact(c)?;
    match cfg.mode {
        PipelineMode::Strict if delta.signum() <= 0 => {
            return Err(Error::Precondition(format!("Δ = {delta} is not positive")))
        }
        PipelineMode::Relaxed if delta.is_zero() => return Err(Error::Precondition("Δ = 0".into())),
        _ => {}
    }
    let delta_below_inv_c = delta.signum() > 0 && delta < ExactRational::unit(c)?;
    let kappa = -delta.clone();

    let mut f = seed_fn.clone();
    let mut modified_intervals = Vec::new();
    let mut pending = Vec::new();
    for &n in scales {
        let p1_iv = (n / 2, n);
        let p2_iv = (n / (c + 1), n / c);
        let p1 = sieve.primes_in(p1_iv.0, p1_iv.1)?;
        let p2 = sieve.primes_in(p2_iv.0, p2_iv.1)?;
        modified_intervals.push([p1_iv, p2_iv]);

        let mut excluded = vec![false; n as usize + 1];
        for &p in &p1 {
            excluded[p as usize] = true;
        }
        for &p in &p2 {
            for m in (p..=n).step_by(p as usize) {
                excluded[m as usize] = true;
            }
        }
        let rest: Vec<(u64, i8)> = (1..=n)
            .filter(|&m| !excluded[m as usize])
            .map(|m| (m, f.values[m as usize]))
            .collect();
        let e_direct = exact_rational_sum(&SignSequence::from_pairs(rest)?)?;
        let fvals = |ps: &[u64]| -> Vec<i8> { ps.iter().map(|&p| f.values[p as usize]).collect() };
        let s1 = signed_unit_sum(&p1, &fvals(&p1))?;
        let s2 = signed_unit_sum(&p2, &fvals(&p2))?;
        let kappa_now = f.log_mean_exact(c)?;
        let e_sub = &(&f.log_mean_exact(n)? - &s1) - &(&kappa_now * &s2);
        let identity_holds = e_sub == e_direct;
        let e = e_direct;

        let ones = |ps: &[u64]| signed_unit_sum(ps, &vec![1; ps.len()]);
        let b = &ones(&p1)? + &(&kappa.abs() * &ones(&p2)?);
        let reachable = ((&e - &b).to_f64(), (&e + &b).to_f64());
        let free_count = p2.len().min(cfg.max_free) + (cfg.max_free - p2.len().min(cfg.max_free)).min(p1.len().saturating_sub(1));

        let (p1_signs, p2_signs, residual, reason) = if e.abs() < b {
            let bal = balance_scale(&e, &p1, &p2, &fvals(&p2), &kappa, cfg.max_free);
            match bal {
                Ok(bal) => (bal.p1_signs, bal.p2_signs, Some(bal.residual.to_f64()), None),
                Err(err) if err.is_infeasible() && cfg.mode == PipelineMode::Relaxed => {
                    let s = -e.signum();
                    (vec![s; p1.len()], vec![s * kappa.signum(); p2.len()], None, Some(err.to_string()))
                }
                Err(err) => return Err(err),
            }
        } else {
            let reason = format!(
                "0 lies outside the reachable interval [{:.6e}, {:.6e}] at N = {n}",
                reachable.0, reachable.1
            );
            if cfg.mode == PipelineMode::Strict {
                return Err(Error::infeasible(reason, Some((&e.abs() - &b).to_f64())));
            }
            let s = -e.signum();
            (vec![s; p1.len()], vec![s * kappa.signum(); p2.len()], None, Some(reason))
        };
        let overrides: Vec<(u64, i8)> = p1
            .iter()
            .copied()
            .zip(p1_signs)
            .chain(p2.iter().copied().zip(p2_signs))
            .collect();
        f = f.with_overrides(overrides)?;
        pending.push((n, p1_iv, p2_iv, p1.len(), p2.len(), free_count, e.to_f64(), identity_holds, reachable, residual, reason));
    }

    let mut reports = Vec::new();
    for (n, p1_interval, p2_interval, p1_count, p2_count, free_count, e, identity_holds, reachable, residual, infeasible_reason) in
        pending
    {
        let signs = f.signs(n)?;
        let eta = eta_to_fixed(&cfg.eta, signs.len());
        let v = verify_signs(&signs, &ExactRational::zero(), &eta);
        let cube = ((n as f64) / (n as f64).ln()).cbrt();
        let ln_achieved = v.achieved_log10 * std::f64::consts::LN_10;
        let c0 = (ln_achieved.is_finite() && ln_achieved < 0.0).then(|| -ln_achieved / cube);
        let bits = v.precision_bits.max(64);
        let cube_root = log_to_fixed(-cube / 1000.0, bits)?;
        let cube_root_bound = compare_to_threshold(&v.achieved, &cube_root);
        reports.push(ScaleOutcome {
            n,
            p1_interval,
            p2_interval,
            p1_count,
            p2_count,
            free_count,
            e,
            identity_holds,
            reachable,
            feasible: residual.is_some(),
            residual,
            infeasible_reason,
            achieved: v.achieved,
            achieved_log10: v.achieved_log10,
            eta,
            verdict: v.verdict,
            precision_bits: v.precision_bits,
            c0,
            cube_root_bound,
        });
    }
    let modified_primes: Vec<(u64, i8)> = f.overrides().iter().map(|(&p, &s)| (p, s)).collect();
    let state = PipelineState {
        seed_rule: cfg.seed_rule.clone(),
        mode: cfg.mode,
        scales: scales.clone(),
        c_cross: c,
        delta,
        delta_below_inv_c,
        modified_intervals,
        modified_primes,
        reports,
    };
    Ok((f, state))
}

/// Primes up to `upto` outside every modified interval where `f` differs
/// from its seed rule.
pub fn locality_violations(f: &MultiplicativeFn, state: &PipelineState, upto: u64) -> Result<Vec<u64>> {
    let seed = MultiplicativeFn::from_rule(f.sieve().clone(), f.rule().clone())?;
    let mut bad = Vec::new();
    for p in f.sieve().primes_in(0, upto.min(f.limit()))? {
        if !state.in_modified_interval(p) && f.evaluate(p)? != seed.evaluate(p)? {
            bad.push(p);
        }
    }
    Ok(bad)
}

/// `Σ_{n≤N} f(n)/n` as an f64, for quick inspection.
pub fn log_mean_f64(f: &MultiplicativeFn, n: u64) -> Result<f64> {
    let sum = f.log_mean(n, 80)?;
    Ok(sum.midpoint().to_f64().to_f64().unwrap_or(f64::NAN))
}
