//! Rigorous arithmetic for harmonic sums.
//!
//! Two representations are used side by side. [`ExactRational`] is exact and
//! always reduced; it is cheap enough for supports of a few tens of thousands
//! of integers because sums are taken over the lcm of the support in one pass.
//! [`BigFixed`] is a fixed-point value `mantissa · 2^-P` carrying an absolute
//! error bound of `err_ulps · 2^-P`, so every computed quantity is an interval
//! known to contain the true value.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::support::SignSequence;

/// Largest lcm (in bits) that [`exact_rational_sum`] will build by default.
pub const DEFAULT_LCM_BUDGET_BITS: u64 = 1 << 23;

/// Guard bits added on top of the bits needed to resolve a target.
pub const GUARD_BITS: u32 = 16;

/// An exact, reduced rational number.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ExactRational(BigRational);

impl ExactRational {
    pub fn new(numerator: BigInt, denominator: BigInt) -> Result<Self> {
        if denominator.is_zero() {
            return Err(Error::Domain("zero denominator".into()));
        }
        Ok(ExactRational(BigRational::new(numerator, denominator)))
    }

    pub fn zero() -> Self {
        ExactRational(BigRational::zero())
    }

    pub fn one() -> Self {
        ExactRational(BigRational::one())
    }

    pub fn from_integer(v: i64) -> Self {
        ExactRational(BigRational::from_integer(BigInt::from(v)))
    }

    pub fn from_ratio(numerator: i64, denominator: u64) -> Result<Self> {
        ExactRational::new(BigInt::from(numerator), BigInt::from(denominator))
    }

    /// `1/n`.
    pub fn unit(n: u64) -> Result<Self> {
        if n == 0 {
            return Err(Error::Domain("1/0".into()));
        }
        Ok(ExactRational(BigRational::new(BigInt::one(), BigInt::from(n))))
    }

    /// The exact value of a finite float.
    pub fn from_f64(v: f64) -> Result<Self> {
        BigRational::from_float(v)
            .map(ExactRational)
            .ok_or_else(|| Error::Domain(format!("{v} is not finite")))
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    /// Always positive.
    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn signum(&self) -> i8 {
        match self.0.numer().sign() {
            Sign::Minus => -1,
            Sign::NoSign => 0,
            Sign::Plus => 1,
        }
    }

    pub fn abs(&self) -> Self {
        ExactRational(self.0.abs())
    }

    pub fn recip(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::Domain("reciprocal of zero".into()));
        }
        Ok(ExactRational(self.0.recip()))
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }

    /// `log10 |self|`, usable far below the f64 range; `-inf` for zero.
    pub fn log10_abs(&self) -> f64 {
        if self.is_zero() {
            return f64::NEG_INFINITY;
        }
        log2_big(&self.numer().magnitude().clone()) * std::f64::consts::LOG10_2
            - log2_big(self.denom().magnitude()) * std::f64::consts::LOG10_2
    }
}

/// Approximate `log2 x` for a positive big integer.
fn log2_big(x: &BigUint) -> f64 {
    let bits = x.bits();
    if bits <= 1000 {
        return x.to_f64().map_or(f64::INFINITY, f64::log2);
    }
    let shift = bits - 64;
    let top = (x >> shift).to_f64().unwrap_or(f64::NAN);
    top.log2() + shift as f64
}

impl fmt::Display for ExactRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.denom().is_one() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl FromStr for ExactRational {
    type Err = Error;

    /// Accepts `p`, `p/q` and plain decimals such as `-0.05`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::Parse(format!("not a rational number: {s:?}"));
        if let Some((p, q)) = s.split_once('/') {
            let p: BigInt = p.trim().parse().map_err(|_| bad())?;
            let q: BigInt = q.trim().parse().map_err(|_| bad())?;
            return ExactRational::new(p, q);
        }
        if let Some((int, frac)) = s.split_once('.') {
            let negative = int.trim_start().starts_with('-');
            let int_part: BigInt = match int.trim() {
                "" | "-" | "+" => BigInt::zero(),
                t => t.parse().map_err(|_| bad())?,
            };
            if !frac.chars().all(|c| c.is_ascii_digit()) {
                return Err(bad());
            }
            let scale = BigInt::from(10u32).pow(frac.len() as u32);
            let frac_part: BigInt = if frac.is_empty() {
                BigInt::zero()
            } else {
                frac.parse().map_err(|_| bad())?
            };
            let mag = int_part.abs() * &scale + frac_part;
            let num = if negative { -mag } else { mag };
            return ExactRational::new(num, scale);
        }
        let p: BigInt = s.parse().map_err(|_| bad())?;
        Ok(ExactRational(BigRational::from_integer(p)))
    }
}

macro_rules! rational_binop {
    ($trait:ident, $method:ident) => {
        impl $trait for ExactRational {
            type Output = ExactRational;
            fn $method(self, rhs: ExactRational) -> ExactRational {
                ExactRational(self.0.$method(rhs.0))
            }
        }
        impl<'a> $trait<&'a ExactRational> for &'a ExactRational {
            type Output = ExactRational;
            fn $method(self, rhs: &'a ExactRational) -> ExactRational {
                ExactRational((&self.0).$method(&rhs.0))
            }
        }
    };
}

rational_binop!(Add, add);
rational_binop!(Sub, sub);
rational_binop!(Mul, mul);

impl Neg for ExactRational {
    type Output = ExactRational;
    fn neg(self) -> ExactRational {
        ExactRational(-self.0)
    }
}

impl Neg for &ExactRational {
    type Output = ExactRational;
    fn neg(self) -> ExactRational {
        ExactRational(-self.0.clone())
    }
}

impl Serialize for ExactRational {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for ExactRational {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// `round(num / den)` to nearest, ties away from zero. `den > 0`.
fn round_div(num: &BigInt, den: &BigInt) -> (BigInt, bool) {
    let (q, r) = num.div_mod_floor(den);
    if r.is_zero() {
        return (q, true);
    }
    let twice = &r << 1usize;
    match twice.cmp(den) {
        Ordering::Less => (q, false),
        _ => (q + 1, false),
    }
}

/// A fixed-point value `mantissa · 2^-scale_bits` with absolute error at most
/// `err_ulps · 2^-scale_bits`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BigFixed {
    mantissa: BigInt,
    scale_bits: u32,
    err_ulps: BigUint,
}

impl BigFixed {
    pub fn new(mantissa: BigInt, scale_bits: u32, err_ulps: BigUint) -> Result<Self> {
        if scale_bits == 0 {
            return Err(Error::Domain("scale_bits must be positive".into()));
        }
        Ok(BigFixed {
            mantissa,
            scale_bits,
            err_ulps,
        })
    }

    pub fn zero(scale_bits: u32) -> Self {
        BigFixed {
            mantissa: BigInt::zero(),
            scale_bits: scale_bits.max(1),
            err_ulps: BigUint::zero(),
        }
    }

    /// `1/n` rounded to nearest at `scale_bits` bits: error at most one ulp,
    /// zero when `n` divides `2^scale_bits`.
    pub fn unit_fraction(n: u64, scale_bits: u32) -> Result<Self> {
        if n == 0 {
            return Err(Error::Domain("unit fraction 1/0".into()));
        }
        if scale_bits == 0 {
            return Err(Error::Domain("scale_bits must be positive".into()));
        }
        let pow = BigInt::one() << scale_bits as usize;
        let (m, exact) = round_div(&pow, &BigInt::from(n));
        Ok(BigFixed {
            mantissa: m,
            scale_bits,
            err_ulps: if exact { BigUint::zero() } else { BigUint::one() },
        })
    }

    /// Rounds an exact rational to nearest; error 0 if representable, else 1 ulp.
    pub fn from_rational(v: &ExactRational, scale_bits: u32) -> Self {
        let scale_bits = scale_bits.max(1);
        let num = v.numer() << scale_bits as usize;
        let (m, exact) = round_div(&num, v.denom());
        BigFixed {
            mantissa: m,
            scale_bits,
            err_ulps: if exact { BigUint::zero() } else { BigUint::one() },
        }
    }

    pub fn from_f64(v: f64, scale_bits: u32) -> Result<Self> {
        Ok(BigFixed::from_rational(&ExactRational::from_f64(v)?, scale_bits))
    }

    /// Widens the error bound by `extra` ulps.
    pub fn with_extra_error(mut self, extra: &BigUint) -> Self {
        self.err_ulps += extra;
        self
    }

    pub fn mantissa(&self) -> &BigInt {
        &self.mantissa
    }

    pub fn scale_bits(&self) -> u32 {
        self.scale_bits
    }

    pub fn err_ulps(&self) -> &BigUint {
        &self.err_ulps
    }

    pub fn is_exact(&self) -> bool {
        self.err_ulps.is_zero()
    }

    /// Re-expresses the value at another precision. Going up is exact; going
    /// down rounds to nearest and rounds the error bound up.
    pub fn rescale(&self, scale_bits: u32) -> BigFixed {
        let scale_bits = scale_bits.max(1);
        match scale_bits.cmp(&self.scale_bits) {
            Ordering::Equal => self.clone(),
            Ordering::Greater => {
                let shift = (scale_bits - self.scale_bits) as usize;
                BigFixed {
                    mantissa: &self.mantissa << shift,
                    scale_bits,
                    err_ulps: &self.err_ulps << shift,
                }
            }
            Ordering::Less => {
                let shift = (self.scale_bits - scale_bits) as usize;
                let den = BigInt::one() << shift;
                let (m, exact) = round_div(&self.mantissa, &den);
                let den_u = BigUint::one() << shift;
                let (q, r) = self.err_ulps.div_rem(&den_u);
                let mut err = if r.is_zero() { q } else { q + 1u32 };
                if !exact {
                    err += 1u32;
                }
                BigFixed {
                    mantissa: m,
                    scale_bits,
                    err_ulps: err,
                }
            }
        }
    }

    pub fn abs(&self) -> BigFixed {
        BigFixed {
            mantissa: self.mantissa.abs(),
            scale_bits: self.scale_bits,
            err_ulps: self.err_ulps.clone(),
        }
    }

    fn ulp_denominator(&self) -> BigInt {
        BigInt::one() << self.scale_bits as usize
    }

    pub fn midpoint(&self) -> ExactRational {
        ExactRational(BigRational::new(self.mantissa.clone(), self.ulp_denominator()))
    }

    pub fn lower(&self) -> ExactRational {
        let m = &self.mantissa - BigInt::from(self.err_ulps.clone());
        ExactRational(BigRational::new(m, self.ulp_denominator()))
    }

    pub fn upper(&self) -> ExactRational {
        let m = &self.mantissa + BigInt::from(self.err_ulps.clone());
        ExactRational(BigRational::new(m, self.ulp_denominator()))
    }

    /// Whether the interval contains `v`.
    pub fn contains(&self, v: &ExactRational) -> bool {
        // |v·2^P − m| ≤ err  ⇔  |v.num·2^P − m·v.den| ≤ err·v.den
        let lhs = (v.numer() << self.scale_bits as usize) - &self.mantissa * v.denom();
        let rhs = BigInt::from(self.err_ulps.clone()) * v.denom();
        lhs.abs() <= rhs
    }

    pub fn to_f64(&self) -> f64 {
        self.midpoint().to_f64()
    }

    /// Width of the error bound as a float.
    pub fn err_f64(&self) -> f64 {
        ExactRational(BigRational::new(
            BigInt::from(self.err_ulps.clone()),
            self.ulp_denominator(),
        ))
        .to_f64()
    }

    /// `log10` of the largest absolute value in the interval.
    pub fn log10_upper_abs(&self) -> f64 {
        let m = BigInt::from(self.mantissa.magnitude().clone()) + BigInt::from(self.err_ulps.clone());
        ExactRational(BigRational::new(m, self.ulp_denominator())).log10_abs()
    }

    fn align(a: &BigFixed, b: &BigFixed) -> (BigFixed, BigFixed) {
        let p = a.scale_bits.max(b.scale_bits);
        (a.rescale(p), b.rescale(p))
    }

    /// Parses the `"<value> ± <err>"` form written by `Display`, at the given
    /// precision. The result interval contains the written interval.
    pub fn parse(s: &str, scale_bits: u32) -> Result<BigFixed> {
        let (value, err) = match s.split_once('±') {
            Some((v, e)) => (v.trim(), Some(e.trim())),
            None => (s.trim(), None),
        };
        let v = parse_scientific(value)?;
        let mut out = BigFixed::from_rational(&v, scale_bits);
        if let Some(e) = err {
            let e = parse_scientific(e)?.abs();
            let ulps = (e.numer() << scale_bits as usize).div_ceil(e.denom());
            out.err_ulps += ulps.to_biguint().unwrap_or_default();
        }
        Ok(out)
    }
}

fn parse_scientific(s: &str) -> Result<ExactRational> {
    let (mant, exp) = match s.split_once(['e', 'E']) {
        Some((m, e)) => (
            m,
            e.parse::<i32>()
                .map_err(|_| Error::Parse(format!("bad exponent in {s:?}")))?,
        ),
        None => (s, 0),
    };
    let m: ExactRational = mant.parse()?;
    let ten = BigInt::from(10u32).pow(exp.unsigned_abs());
    Ok(if exp >= 0 {
        ExactRational(m.0 * BigRational::from_integer(ten))
    } else {
        ExactRational(m.0 / BigRational::from_integer(ten))
    })
}

/// Writes `|v|` in scientific notation with `digits` significant digits,
/// rounding toward +inf when `round_up`, else to nearest. Returns the text
/// and the absolute rounding error introduced.
fn format_scientific(v: &ExactRational, digits: u32, round_up: bool) -> (String, ExactRational) {
    if v.is_zero() {
        return ("0".to_string(), ExactRational::zero());
    }
    let negative = v.signum() < 0;
    let a = v.abs();
    let mut exp = a.log10_abs().floor() as i32;
    // The float estimate can be off by one near powers of ten.
    let pow10 = |e: i32| -> BigRational {
        let p = BigRational::from_integer(BigInt::from(10u32).pow(e.unsigned_abs()));
        if e >= 0 {
            p
        } else {
            p.recip()
        }
    };
    while pow10(exp) > a.0 {
        exp -= 1;
    }
    while pow10(exp + 1) <= a.0 {
        exp += 1;
    }
    let scaled = &a.0 / pow10(exp - (digits as i32 - 1));
    let mut int = if round_up {
        scaled.ceil().to_integer()
    } else {
        scaled.round().to_integer()
    };
    let mut exp_out = exp;
    if int >= BigInt::from(10u32).pow(digits) {
        int /= 10u32;
        exp_out += 1;
        if round_up && BigRational::from_integer(int.clone()) * pow10(exp_out - (digits as i32 - 1)) < a.0 {
            int += 1u32;
        }
    }
    let shown = BigRational::from_integer(int.clone()) * pow10(exp_out - (digits as i32 - 1));
    let rounding = ExactRational((shown - &a.0).abs());
    let s = int.to_string();
    let (head, tail) = s.split_at(1);
    let mut text = String::new();
    if negative {
        text.push('-');
    }
    text.push_str(head);
    if !tail.is_empty() {
        text.push('.');
        text.push_str(tail);
    }
    text.push_str(&format!("e{exp_out}"));
    (text, rounding)
}

impl fmt::Display for BigFixed {
    /// `"<value> ± <err>"`; the printed error also covers the rounding of the
    /// printed value, so parsing the text back gives a sound interval.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (value, rounding) = format_scientific(&self.midpoint(), 24, false);
        let err = ExactRational(BigRational::new(
            BigInt::from(self.err_ulps.clone()),
            self.ulp_denominator(),
        )) + rounding;
        let (err_text, _) = format_scientific(&err, 3, true);
        write!(f, "{value} ± {err_text}")
    }
}

impl Serialize for BigFixed {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl Add for &BigFixed {
    type Output = BigFixed;
    fn add(self, rhs: &BigFixed) -> BigFixed {
        let (a, b) = BigFixed::align(self, rhs);
        BigFixed {
            mantissa: a.mantissa + b.mantissa,
            scale_bits: a.scale_bits,
            err_ulps: a.err_ulps + b.err_ulps,
        }
    }
}

impl Sub for &BigFixed {
    type Output = BigFixed;
    fn sub(self, rhs: &BigFixed) -> BigFixed {
        let (a, b) = BigFixed::align(self, rhs);
        BigFixed {
            mantissa: a.mantissa - b.mantissa,
            scale_bits: a.scale_bits,
            err_ulps: a.err_ulps + b.err_ulps,
        }
    }
}

impl Neg for &BigFixed {
    type Output = BigFixed;
    fn neg(self) -> BigFixed {
        BigFixed {
            mantissa: -self.mantissa.clone(),
            scale_bits: self.scale_bits,
            err_ulps: self.err_ulps.clone(),
        }
    }
}

/// Outcome of comparing `|v|` with a threshold under interval semantics.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Comparison {
    Below,
    Above,
    /// The intervals overlap; precision must be raised to decide.
    Indeterminate,
}

impl fmt::Display for Comparison {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Comparison::Below => "Below",
            Comparison::Above => "Above",
            Comparison::Indeterminate => "Indeterminate",
        })
    }
}

pub fn compare_to_threshold(v: &BigFixed, eta: &BigFixed) -> Comparison {
    let (v, eta) = BigFixed::align(v, eta);
    let v_abs = v.mantissa.abs();
    let v_err = BigInt::from(v.err_ulps);
    let e_err = BigInt::from(eta.err_ulps);
    if &v_abs + &v_err < &eta.mantissa - &e_err {
        Comparison::Below
    } else if &v_abs - &v_err > &eta.mantissa + &e_err {
        Comparison::Above
    } else {
        Comparison::Indeterminate
    }
}

/// `⌈log2(support_len / eta)⌉ + GUARD_BITS`, so that the accumulated error
/// of a sum over the support stays below `eta / 2`.
pub fn default_precision(support_len: usize, eta: f64) -> u32 {
    let len = support_len.max(1) as f64;
    let needed = if eta > 0.0 && eta.is_finite() {
        (len / eta).log2().ceil()
    } else {
        64.0
    };
    (needed.max(1.0) as u32).saturating_add(GUARD_BITS)
}

/// Same as [`default_precision`] but for thresholds given as `log10 η`,
/// which may be far below the f64 range.
pub fn precision_for_log10(support_len: usize, log10_eta: f64) -> u32 {
    let len = support_len.max(1) as f64;
    let needed = (len.log2() - log10_eta / std::f64::consts::LOG10_2).ceil();
    (needed.max(1.0) as u32).saturating_add(GUARD_BITS)
}

/// `Σ aₙ/n` over the support, as a fixed-point interval with error at most
/// one ulp per non-dyadic term.
pub fn signed_harmonic_sum(signs: &SignSequence, scale_bits: u32) -> BigFixed {
    let scale_bits = scale_bits.max(1);
    let pow = BigUint::one() << scale_bits as usize;
    let mut acc = BigInt::zero();
    let mut err = 0u64;
    for (n, s) in signs.iter() {
        let (q, r) = pow.div_rem(&BigUint::from(n));
        let mut term = q;
        if !r.is_zero() {
            err += 1;
            if (r << 1usize) >= BigUint::from(n) {
                term += 1u32;
            }
        }
        let term = BigInt::from(term);
        if s > 0 {
            acc += term;
        } else {
            acc -= term;
        }
    }
    BigFixed {
        mantissa: acc,
        scale_bits,
        err_ulps: BigUint::from(err),
    }
}

/// `lcm` of a set of positive integers, failing once it exceeds `budget_bits`.
pub fn lcm_of(values: impl IntoIterator<Item = u64>, budget_bits: u64) -> Result<BigUint> {
    let mut l = BigUint::one();
    for n in values {
        if n == 0 {
            return Err(Error::Domain("lcm of a set containing 0".into()));
        }
        let r = (&l % n).to_u64().expect("remainder fits");
        let g = n.gcd(&r);
        l *= n / g;
        if l.bits() > budget_bits {
            return Err(Error::Resource(format!(
                "lcm exceeds the {budget_bits}-bit budget"
            )));
        }
    }
    Ok(l)
}

/// The exact value of `Σ aₙ/n`, computed over `lcm(support)` and reduced once.
pub fn exact_rational_sum(signs: &SignSequence) -> Result<ExactRational> {
    exact_rational_sum_with_budget(signs, DEFAULT_LCM_BUDGET_BITS)
}

pub fn exact_rational_sum_with_budget(signs: &SignSequence, budget_bits: u64) -> Result<ExactRational> {
    if signs.is_empty() {
        return Ok(ExactRational::zero());
    }
    let d = lcm_of(signs.support().iter(), budget_bits)?;
    let mut num = BigInt::zero();
    for (n, s) in signs.iter() {
        let q = BigInt::from(&d / n);
        if s > 0 {
            num += q;
        } else {
            num -= q;
        }
    }
    ExactRational::new(num, BigInt::from(d))
}

/// A list of rationals rescaled to one shared denominator, so that signed
/// sums of them are exact integer additions.
#[derive(Clone, Debug)]
pub struct CommonDenominator {
    denom: BigUint,
    numerators: Vec<BigInt>,
}

impl CommonDenominator {
    pub fn new(values: &[ExactRational]) -> Self {
        let mut denom = BigUint::one();
        for v in values {
            let d = v.denom().magnitude();
            let g = denom.gcd(d);
            denom = denom / g * d;
        }
        let numerators = values
            .iter()
            .map(|v| v.numer() * BigInt::from(&denom / v.denom().magnitude()))
            .collect();
        CommonDenominator { denom, numerators }
    }

    pub fn denom(&self) -> &BigUint {
        &self.denom
    }

    pub fn numerators(&self) -> &[BigInt] {
        &self.numerators
    }

    pub fn to_rational(&self, numerator: BigInt) -> ExactRational {
        ExactRational(BigRational::new(numerator, BigInt::from(self.denom.clone())))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::support::SupportSet;

    fn q(s: &str) -> ExactRational {
        s.parse().unwrap()
    }

    #[test]
    fn unit_fraction_examples() {
        let half = BigFixed::unit_fraction(2, 64).unwrap();
        assert_eq!(half.mantissa(), &(BigInt::one() << 63usize));
        assert!(half.is_exact());

        let one = BigFixed::unit_fraction(1, 8).unwrap();
        assert_eq!(one.mantissa(), &BigInt::from(256));
        assert!(one.is_exact());

        let third = BigFixed::unit_fraction(3, 8).unwrap();
        assert_eq!(third.mantissa(), &BigInt::from(85));
        assert!(third.err_ulps() <= &BigUint::one());
        assert!(third.contains(&q("1/3")));

        assert!(matches!(BigFixed::unit_fraction(0, 8), Err(Error::Domain(_))));
    }

    #[test]
    fn signed_sum_examples() {
        let one = SignSequence::from_pairs([(1, 1)]).unwrap();
        let v = signed_harmonic_sum(&one, 32);
        assert!(v.is_exact());
        assert_eq!(v.midpoint(), ExactRational::one());

        let half = SignSequence::from_pairs([(1, 1), (2, -1)]).unwrap();
        let v = signed_harmonic_sum(&half, 32);
        assert!(v.is_exact());
        assert_eq!(v.midpoint(), q("1/2"));

        let alt = SignSequence::new(SupportSet::interval(1, 4), vec![1, -1, 1, -1]).unwrap();
        let v = signed_harmonic_sum(&alt, 32);
        assert!(v.contains(&q("7/12")));
        assert!(v.err_ulps() <= &BigUint::from(4u32));
        assert_eq!(exact_rational_sum(&alt).unwrap(), q("7/12"));

        let empty = signed_harmonic_sum(&SignSequence::empty(), 32);
        assert!(empty.is_exact() && empty.mantissa().is_zero());
    }

    /// Pairwise reduction: fold the fractions one at a time with a gcd after
    /// every step.
    fn pairwise_sum(terms: &[(i64, u64)]) -> (i128, i128) {
        let (mut p, mut qd) = (0i128, 1i128);
        for &(s, n) in terms {
            p = p * n as i128 + s as i128 * qd;
            qd *= n as i128;
            let g = p.abs().gcd(&qd);
            if g > 1 {
                p /= g;
                qd /= g;
            }
        }
        (p, qd)
    }

    #[test]
    fn exact_sum_examples() {
        let all = SignSequence::constant(SupportSet::interval(1, 6), 1).unwrap();
        let oracle = pairwise_sum(&[(1, 1), (1, 2), (1, 3), (1, 4), (1, 5), (1, 6)]);
        assert_eq!(oracle, (49, 20));
        assert_eq!(exact_rational_sum(&all).unwrap(), q("49/20"));

        let zero = SignSequence::from_pairs([(1, 1), (2, -1), (3, -1), (6, -1)]).unwrap();
        assert!(exact_rational_sum(&zero).unwrap().is_zero());

        let mut it = 1u64;
        for n in 1..=10u64 {
            it = it / it.gcd(&n) * n;
        }
        assert_eq!(it, 2520);
        assert_eq!(lcm_of(1..=10, 64).unwrap(), BigUint::from(2520u32));
    }

    #[test]
    fn exact_sum_respects_budget() {
        let s = SignSequence::constant(SupportSet::interval(1, 200), 1).unwrap();
        assert!(matches!(
            exact_rational_sum_with_budget(&s, 64),
            Err(Error::Resource(_))
        ));
    }

    #[test]
    fn nonzero_sums_are_at_least_one_over_lcm() {
        let s = SignSequence::new(SupportSet::interval(1, 12), vec![1, -1, -1, 1, -1, 1, -1, 1, 1, -1, 1, -1]).unwrap();
        let v = exact_rational_sum(&s).unwrap();
        let l = lcm_of(1..=12, 64).unwrap();
        assert!(!v.is_zero());
        assert!(v.abs() >= ExactRational::new(BigInt::one(), BigInt::from(l)).unwrap());
    }

    fn fixed(m: i64, p: u32, e: u64) -> BigFixed {
        BigFixed::new(BigInt::from(m), p, BigUint::from(e)).unwrap()
    }

    #[test]
    fn comparison_examples() {
        let half = BigFixed::from_rational(&q("1/2"), 16);
        let one = BigFixed::from_rational(&ExactRational::one(), 16);
        assert_eq!(compare_to_threshold(&half, &one), Comparison::Below);
        assert_eq!(compare_to_threshold(&one, &half), Comparison::Above);
        // 0 ± 2^-10 against 2^-11 ± 0, at 16 bits.
        let v = fixed(0, 16, 1 << 6);
        let eta = fixed(1 << 5, 16, 0);
        assert_eq!(compare_to_threshold(&v, &eta), Comparison::Indeterminate);
        // Mixed scales are aligned first.
        let eta8 = fixed(1, 8, 0);
        assert_eq!(compare_to_threshold(&fixed(1, 16, 0), &eta8), Comparison::Below);
    }

    #[test]
    fn rescale_keeps_the_value_inside() {
        let v = q("-355/113");
        for p in [8u32, 20, 64] {
            let a = BigFixed::from_rational(&v, 64);
            let b = a.rescale(p);
            assert!(b.contains(&v), "p = {p}");
            let c = b.rescale(90);
            assert!(c.contains(&v));
        }
    }

    #[test]
    fn display_round_trips_soundly() {
        let v = q("-355/113");
        let a = BigFixed::from_rational(&v, 80);
        let text = a.to_string();
        assert!(text.contains('±'), "{text}");
        let back = BigFixed::parse(&text, 90).unwrap();
        assert!(back.contains(&v));
        assert!(back.contains(&a.lower()) && back.contains(&a.upper()));

        let z = BigFixed::zero(32);
        assert!(BigFixed::parse(&z.to_string(), 32).unwrap().contains(&ExactRational::zero()));
    }

    #[test]
    fn rational_parsing() {
        assert_eq!(q("0.05"), q("1/20"));
        assert_eq!(q("-1.5"), q("-3/2"));
        assert_eq!(q("-0.5"), q("-1/2"));
        assert_eq!(q("7"), ExactRational::from_integer(7));
        assert!("1/0".parse::<ExactRational>().is_err());
        assert!("abc".parse::<ExactRational>().is_err());
        assert_eq!(parse_scientific("2.5e-3").unwrap(), q("1/400"));
    }

    #[test]
    fn log10_of_tiny_values() {
        let tiny = ExactRational::new(BigInt::one(), BigInt::one() << 5000usize).unwrap();
        let expected = -5000.0 * std::f64::consts::LOG10_2;
        assert!((tiny.log10_abs() - expected).abs() < 1e-9);
        assert!((q("1/1000").log10_abs() + 3.0).abs() < 1e-12);
    }

    #[test]
    fn default_precision_resolves_target() {
        let p = default_precision(1000, 1e-12);
        // 1000 ulps must stay below half the target.
        assert!(1000.0 * 2f64.powi(-(p as i32)) < 0.5e-12);
        assert_eq!(precision_for_log10(1000, -12.0), p);
    }

    #[test]
    fn common_denominator_sums_are_exact() {
        let vals = vec![q("1/6"), q("-3/10"), q("5/4")];
        let cd = CommonDenominator::new(&vals);
        assert_eq!(cd.denom(), &BigUint::from(60u32));
        let total: BigInt = cd.numerators().iter().sum();
        assert_eq!(cd.to_rational(total), q("1/6") + q("-3/10") + q("5/4"));
    }
}
