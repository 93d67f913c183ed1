//! Prime tables and arithmetic functions backed by a smallest-prime-factor sieve.

use num_bigint::{BigInt, BigUint};
use num_integer::{Integer, Roots};
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::numerics::BigFixed;
use crate::support::SupportSet;

/// Largest sieve limit accepted (four bytes per entry).
pub const MAX_SIEVE_LIMIT: u64 = 200_000_000;

/// Smallest prime factors of every integer up to `limit`.
#[derive(Clone, Debug)]
pub struct SieveTable {
    limit: u64,
    spf: Vec<u32>,
    primes: Vec<u32>,
}

/// Linear sieve: each composite is struck exactly once by its smallest prime.
pub fn build_sieve(limit: u64) -> Result<SieveTable> {
    if limit < 2 {
        return Err(Error::Domain(format!("sieve limit {limit} < 2")));
    }
    if limit > MAX_SIEVE_LIMIT {
        return Err(Error::Resource(format!(
            "sieve limit {limit} exceeds {MAX_SIEVE_LIMIT}"
        )));
    }
    let n = limit as usize;
    let mut spf = vec![0u32; n + 1];
    let mut primes: Vec<u32> = Vec::new();
    for i in 2..=n {
        if spf[i] == 0 {
            spf[i] = i as u32;
            primes.push(i as u32);
        }
        let si = spf[i];
        for &p in &primes {
            let m = p as usize * i;
            if p > si || m > n {
                break;
            }
            spf[m] = p;
        }
    }
    Ok(SieveTable { limit, spf, primes })
}

impl SieveTable {
    pub fn limit(&self) -> u64 {
        self.limit
    }

    fn check(&self, n: u64) -> Result<()> {
        if n > self.limit {
            Err(Error::Range(format!("{n} exceeds sieve limit {}", self.limit)))
        } else {
            Ok(())
        }
    }

    /// Smallest prime factor; `None` for 0 and 1.
    pub fn spf(&self, n: u64) -> Result<Option<u64>> {
        self.check(n)?;
        Ok(if n < 2 { None } else { Some(self.spf[n as usize] as u64) })
    }

    pub fn is_prime(&self, n: u64) -> Result<bool> {
        self.check(n)?;
        Ok(n >= 2 && self.spf[n as usize] as u64 == n)
    }

    /// All primes up to the limit, ascending.
    pub fn primes(&self) -> &[u32] {
        &self.primes
    }

    /// Prime factorization as ascending `(p, exponent)` pairs.
    pub fn factorize(&self, n: u64) -> Result<Vec<(u64, u32)>> {
        self.check(n)?;
        if n == 0 {
            return Err(Error::Domain("factorization of 0".into()));
        }
        let mut out: Vec<(u64, u32)> = Vec::new();
        let mut m = n as usize;
        while m > 1 {
            let p = self.spf[m] as u64;
            match out.last_mut() {
                Some((q, e)) if *q == p => *e += 1,
                _ => out.push((p, 1)),
            }
            m /= p as usize;
        }
        Ok(out)
    }

    /// `Ω(n)`, prime factors counted with multiplicity.
    pub fn big_omega(&self, n: u64) -> Result<u32> {
        self.check(n)?;
        if n == 0 {
            return Err(Error::Domain("Ω(0)".into()));
        }
        let mut m = n as usize;
        let mut k = 0;
        while m > 1 {
            m /= self.spf[m] as usize;
            k += 1;
        }
        Ok(k)
    }

    /// `ω(n)`, distinct prime factors.
    pub fn small_omega(&self, n: u64) -> Result<u32> {
        Ok(self.factorize(n)?.len() as u32)
    }

    /// `λ(n) = (−1)^Ω(n)`.
    pub fn liouville(&self, n: u64) -> Result<i8> {
        Ok(if self.big_omega(n)? % 2 == 0 { 1 } else { -1 })
    }

    /// `P⁺(n)`, with `P⁺(1) = 1`.
    pub fn largest_prime_factor(&self, n: u64) -> Result<u64> {
        self.check(n)?;
        if n == 0 {
            return Err(Error::Domain("P⁺(0)".into()));
        }
        let mut m = n as usize;
        let mut p = 1;
        while m > 1 {
            p = self.spf[m] as u64;
            m /= p as usize;
        }
        Ok(p)
    }

    /// Primes `p` with `a < p ≤ b`.
    pub fn primes_in(&self, a: u64, b: u64) -> Result<Vec<u64>> {
        self.check(b)?;
        if b <= a {
            return Ok(Vec::new());
        }
        let lo = self.primes.partition_point(|&p| (p as u64) <= a);
        let hi = self.primes.partition_point(|&p| (p as u64) <= b);
        Ok(self.primes[lo..hi].iter().map(|&p| p as u64).collect())
    }

    /// `Σ 1/p` over primes in `(a, b]`, as an interval at `scale_bits` bits.
    pub fn prime_reciprocal_sum(&self, a: u64, b: u64, scale_bits: u32) -> Result<BigFixed> {
        let primes = self.primes_in(a, b)?;
        let scale_bits = scale_bits.max(1);
        let pow = BigUint::one() << scale_bits as usize;
        let mut acc = BigUint::zero();
        let mut err = 0u64;
        for p in primes {
            let (q, r) = pow.div_rem(&BigUint::from(p));
            acc += q;
            if !r.is_zero() {
                err += 1;
                if (r << 1usize) >= BigUint::from(p) {
                    acc += 1u32;
                }
            }
        }
        BigFixed::new(BigInt::from(acc), scale_bits, BigUint::from(err))
    }

    /// Splits `n` into its `y`-rough and `y`-smooth parts.
    pub fn rough_smooth_split(&self, n: u64, y: u64) -> Result<RoughSmoothSplit> {
        let mut rough = 1;
        let mut smooth = 1;
        for (p, e) in self.factorize(n)? {
            let pe = p.pow(e);
            if p > y {
                rough *= pe;
            } else {
                smooth *= pe;
            }
        }
        Ok(RoughSmoothSplit { n, y, rough, smooth })
    }

    /// `Ψ(x, y)`: integers `1 ≤ n ≤ x` with every prime factor at most `y`.
    pub fn psi_count(&self, x: u64, y: u64) -> Result<u64> {
        self.check(x)?;
        if x == 0 {
            return Ok(0);
        }
        if y >= x {
            return Ok(x);
        }
        let mut count = 1; // n = 1
        for n in 2..=x {
            if self.largest_prime_factor(n)? <= y {
                count += 1;
            }
        }
        Ok(count)
    }
}

/// `n = rough · smooth` with every prime of `rough` above `y` and every prime
/// of `smooth` at most `y`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct RoughSmoothSplit {
    pub n: u64,
    pub y: u64,
    pub rough: u64,
    pub smooth: u64,
}

/// `⌊N^ε⌋`, computed with an integer root when `ε = 1/m`.
pub fn floor_power(n: u64, eps: f64) -> u64 {
    let inv = 1.0 / eps;
    if (inv - inv.round()).abs() < 1e-12 && inv.round() >= 1.0 {
        return n.nth_root(inv.round() as u32);
    }
    (n as f64).powf(eps).floor() as u64
}

/// The set of `N^ε₁`-rough parts of the elements of `a`, deduplicated.
pub fn rough_part_set(sieve: &SieveTable, a: &SupportSet, eps1: f64, n: u64) -> Result<SupportSet> {
    if !(eps1 > 0.0 && eps1 < 1.0) {
        return Err(Error::Domain(format!("ε₁ = {eps1} outside (0, 1)")));
    }
    let y = floor_power(n, eps1);
    let mut parts = Vec::with_capacity(a.len());
    for m in a.iter() {
        parts.push(sieve.rough_smooth_split(m, y)?.rough);
    }
    SupportSet::new(parts)
}

/// Elements of `a` with `Ω(n) ≤ 2 ln ln N`.
pub fn select_low_omega_subset(sieve: &SieveTable, a: &SupportSet, n: u64) -> Result<SupportSet> {
    if n < 16 {
        return Err(Error::Domain(format!("N = {n} < 16")));
    }
    let threshold = 2.0 * (n as f64).ln().ln();
    let mut keep = Vec::new();
    for m in a.iter() {
        if sieve.big_omega(m)? as f64 <= threshold {
            keep.push(m);
        }
    }
    Ok(SupportSet::from_sorted_unchecked(keep))
}

/// Default number of integration steps per unit for [`dickman_rho`].
pub const DICKMAN_STEPS: usize = 1000;

/// Tabulated Dickman function on a uniform grid.
#[derive(Clone, Debug)]
pub struct DickmanTable {
    steps: usize,
    values: Vec<f64>,
}

impl DickmanTable {
    /// Solves `u ρ(u) = ∫_{u−1}^{u} ρ(t) dt` on `[0, u_max]` with step
    /// `1/steps`, composite Simpson on each unit window. The unknown endpoint
    /// enters the rule linearly, so each step is solved in closed form.
    pub fn new(u_max: f64, steps: usize) -> Result<Self> {
        if !(u_max >= 0.0) || !u_max.is_finite() {
            return Err(Error::Domain(format!("u = {u_max}")));
        }
        let steps = (steps.max(2) + 1) & !1;
        let h = 1.0 / steps as f64;
        let count = (u_max * steps as f64).ceil() as usize + 3;
        let mut values = vec![1.0; count.max(steps + 1)];
        for i in steps + 1..values.len() {
            let u = i as f64 * h;
            let start = i - steps;
            let mut known = values[start];
            for j in 1..steps {
                let w = if j % 2 == 1 { 4.0 } else { 2.0 };
                known += w * values[start + j];
            }
            values[i] = known * h / 3.0 / (u - h / 3.0);
        }
        Ok(DickmanTable { steps, values })
    }

    /// `ρ(u)`, interpolated with a cubic through the four nearest nodes.
    pub fn rho(&self, u: f64) -> Result<f64> {
        if u < 0.0 || u.is_nan() {
            return Err(Error::Domain(format!("ρ({u})")));
        }
        if u <= 1.0 {
            return Ok(1.0);
        }
        let x = u * self.steps as f64;
        let i = x.floor() as usize;
        if i + 2 >= self.values.len() {
            return Err(Error::Range(format!("u = {u} beyond the table")));
        }
        let frac = x - i as f64;
        if frac == 0.0 {
            return Ok(self.values[i]);
        }
        let base = i - 1;
        let mut acc = 0.0;
        for a in 0..4 {
            let mut l = 1.0;
            for b in 0..4 {
                if a != b {
                    l *= (frac + 1.0 - b as f64) / (a as f64 - b as f64);
                }
            }
            acc += l * self.values[base + a];
        }
        Ok(acc)
    }
}

/// Dickman's `ρ(u)` with `steps` integration steps per unit.
pub fn dickman_rho(u: f64, steps: usize) -> Result<f64> {
    if u < 0.0 || u.is_nan() {
        return Err(Error::Domain(format!("ρ({u})")));
    }
    DickmanTable::new(u, steps)?.rho(u)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn table() -> SieveTable {
        build_sieve(100_000).unwrap()
    }

    #[test]
    fn spf_examples() {
        let s = table();
        assert_eq!(s.spf(12).unwrap(), Some(2));
        assert_eq!(s.spf(97).unwrap(), Some(97));
        assert_eq!(s.spf(91).unwrap(), Some(7));
        assert!(matches!(s.spf(100_001), Err(Error::Range(_))));
        assert!(build_sieve(1).is_err());
    }

    #[test]
    fn spf_matches_trial_division() {
        let s = build_sieve(5000).unwrap();
        for n in 2..=5000u64 {
            let trial = (2..=n).find(|d| n % d == 0).unwrap();
            assert_eq!(s.spf(n).unwrap(), Some(trial));
            let p = trial;
            assert!(p == n || p * p <= n);
        }
    }

    #[test]
    fn omega_examples() {
        let s = table();
        assert_eq!(s.big_omega(12).unwrap(), 3);
        assert_eq!(s.small_omega(12).unwrap(), 2);
        assert_eq!(s.liouville(12).unwrap(), -1);
        assert_eq!(s.big_omega(1).unwrap(), 0);
        assert_eq!(s.liouville(1).unwrap(), 1);
        assert_eq!(s.big_omega(1024).unwrap(), 10);
        assert_eq!(s.liouville(1024).unwrap(), 1);
    }

    #[test]
    fn liouville_is_multiplicative_through_the_table() {
        let s = table();
        for n in 2..=100_000u64 {
            let p = s.spf(n).unwrap().unwrap();
            assert_eq!(
                s.liouville(n).unwrap(),
                s.liouville(p).unwrap() * s.liouville(n / p).unwrap()
            );
        }
    }

    #[test]
    fn primes_in_examples() {
        let s = table();
        assert_eq!(s.primes_in(10, 20).unwrap(), vec![11, 13, 17, 19]);
        assert!(s.primes_in(13, 13).unwrap().is_empty());
        assert_eq!(s.primes_in(1, 10).unwrap(), vec![2, 3, 5, 7]);
        assert_eq!(s.primes_in(0, 100).unwrap().len(), 25);
    }

    #[test]
    fn prime_reciprocal_examples() {
        let s = table();
        let third = s.prime_reciprocal_sum(2, 3, 40).unwrap();
        assert!(third.contains(&"1/3".parse().unwrap()));
        let empty = s.prime_reciprocal_sum(24, 28, 40).unwrap();
        assert!(empty.is_exact() && empty.mantissa().is_zero());
    }

    #[test]
    fn prime_reciprocals_near_log2_over_logn() {
        let n = 1_000_000u64;
        let s = build_sieve(n).unwrap();
        let v = s.prime_reciprocal_sum(n / 2, n, 64).unwrap().to_f64();
        let ln = (n as f64).ln();
        let direct: f64 = s.primes_in(n / 2, n).unwrap().iter().map(|&p| 1.0 / p as f64).sum();
        assert!((v - direct).abs() < 1e-12);
        assert!((v - std::f64::consts::LN_2 / ln).abs() <= 10.0 / (ln * ln));
    }

    #[test]
    fn rough_smooth_examples() {
        let s = table();
        let a = s.rough_smooth_split(12, 2).unwrap();
        assert_eq!((a.rough, a.smooth), (3, 4));
        let b = s.rough_smooth_split(30, 3).unwrap();
        assert_eq!((b.rough, b.smooth), (5, 6));
        let c = s.rough_smooth_split(97, 10).unwrap();
        assert_eq!((c.rough, c.smooth), (97, 1));
    }

    proptest! {
        #[test]
        fn rough_smooth_split_invariants(n in 1u64..=100_000, y in 1u64..400) {
            let s = table_cached();
            let sp = s.rough_smooth_split(n, y).unwrap();
            prop_assert_eq!(sp.rough * sp.smooth, n);
            if sp.rough > 1 {
                prop_assert!(s.spf(sp.rough).unwrap().unwrap() > y);
            }
            prop_assert!(s.largest_prime_factor(sp.smooth).unwrap() <= y);
        }
    }

    fn table_cached() -> &'static SieveTable {
        use std::sync::OnceLock;
        static T: OnceLock<SieveTable> = OnceLock::new();
        T.get_or_init(table)
    }

    #[test]
    fn rough_part_examples() {
        let s = table();
        let a = SupportSet::new(vec![2, 3, 4]).unwrap();
        assert_eq!(rough_part_set(&s, &a, 0.5, 100).unwrap().as_slice(), &[1]);
        let b = SupportSet::new(vec![22, 33]).unwrap();
        assert_eq!(rough_part_set(&s, &b, 0.5, 100).unwrap().as_slice(), &[11]);
    }

    #[test]
    fn rough_parts_of_full_interval_are_many() {
        let s = table();
        let n = 100_000u64;
        let r = rough_part_set(&s, &SupportSet::interval(1, n), 0.1, n).unwrap();
        assert!(r.len() as f64 >= (n as f64).powf(0.9), "{}", r.len());
        let k = (1.0f64 / 0.1).floor() as u32;
        assert!(r.iter().all(|m| s.big_omega(m).unwrap() <= k));
    }

    #[test]
    fn floor_power_is_exact_for_roots() {
        assert_eq!(floor_power(100, 0.5), 10);
        assert_eq!(floor_power(99, 0.5), 9);
        assert_eq!(floor_power(1000, 1.0 / 3.0), 10);
        assert_eq!(floor_power(4096, 0.25), 8);
    }

    #[test]
    fn psi_examples() {
        let s = table();
        assert_eq!(s.psi_count(100, 100).unwrap(), 100);
        let mut oracle = 0;
        for a in 0..7 {
            for b in 0..5 {
                if 2u64.pow(a) * 3u64.pow(b) <= 100 {
                    oracle += 1;
                }
            }
        }
        assert_eq!(oracle, 20);
        assert_eq!(s.psi_count(100, 3).unwrap(), 20);
        assert_eq!(s.psi_count(500, 1).unwrap(), 1);
    }

    #[test]
    fn psi_is_monotone() {
        let s = build_sieve(2000).unwrap();
        for y in [1u64, 2, 5, 30, 100] {
            let mut prev = 0;
            for x in (1..=2000).step_by(37) {
                let v = s.psi_count(x, y).unwrap();
                assert!(v >= prev);
                assert!(v <= s.psi_count(x, y + 1).unwrap());
                prev = v;
            }
        }
    }

    #[test]
    fn dickman_examples() {
        assert_eq!(dickman_rho(1.0, DICKMAN_STEPS).unwrap(), 1.0);
        assert_eq!(dickman_rho(0.3, DICKMAN_STEPS).unwrap(), 1.0);
        let r2 = dickman_rho(2.0, DICKMAN_STEPS).unwrap();
        assert!((r2 - (1.0 - std::f64::consts::LN_2)).abs() < 1e-6, "{r2}");
        assert!(dickman_rho(10.0, DICKMAN_STEPS).unwrap() < 1e-10);
        assert!(matches!(dickman_rho(-0.5, DICKMAN_STEPS), Err(Error::Domain(_))));
    }

    #[test]
    fn dickman_closed_form_on_one_to_two() {
        let t = DickmanTable::new(2.0, DICKMAN_STEPS).unwrap();
        for u in [1.1, 1.37, 1.5, 1.999] {
            let exact = 1.0 - f64::ln(u);
            assert!((t.rho(u).unwrap() - exact).abs() < 1e-6, "u = {u}");
        }
    }

    #[test]
    fn dickman_is_monotone_and_stable_under_refinement() {
        let coarse = DickmanTable::new(10.0, DICKMAN_STEPS).unwrap();
        let fine = DickmanTable::new(10.0, 2 * DICKMAN_STEPS).unwrap();
        let mut prev = 1.0;
        for i in 0..=100 {
            let u = i as f64 * 0.1;
            let r = coarse.rho(u).unwrap();
            assert!(r > 0.0 && r <= 1.0);
            assert!(r <= prev + 1e-15);
            prev = r;
            let rel = (r - fine.rho(u).unwrap()).abs() / r;
            assert!(rel < 1e-5, "u = {u}, rel = {rel}");
        }
    }

    #[test]
    fn low_omega_examples() {
        let n = 100_000u64;
        let s = build_sieve(2 * n).unwrap();
        let primes = SupportSet::new(s.primes_in(n, 2 * n).unwrap()).unwrap();
        assert_eq!(select_low_omega_subset(&s, &primes, n).unwrap(), primes);

        let threshold = 2.0 * (n as f64).ln().ln();
        let powers: SupportSet = (0..64)
            .map(|k| 1u64 << k)
            .filter(|&m| m <= 2 * n && (m.trailing_zeros() as f64) > threshold)
            .collect();
        assert!(!powers.is_empty());
        assert!(select_low_omega_subset(&s, &powers, n).unwrap().is_empty());

        let full = SupportSet::interval(n + 1, 2 * n);
        let b = select_low_omega_subset(&s, &full, n).unwrap();
        assert!(2 * b.len() >= full.len());
        assert!(select_low_omega_subset(&s, &full, 15).is_err());
    }
}
