//! Finite index sets and sign assignments over them.

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// A finite, sorted, duplicate-free set of positive integers.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct SupportSet(Vec<u64>);

impl SupportSet {
    pub fn new(mut values: Vec<u64>) -> Result<Self> {
        if values.contains(&0) {
            return Err(Error::Domain("support sets hold positive integers only".into()));
        }
        values.sort_unstable();
        values.dedup();
        Ok(SupportSet(values))
    }

    /// Builds from values already known to be positive, sorted and distinct.
    pub(crate) fn from_sorted_unchecked(values: Vec<u64>) -> Self {
        debug_assert!(values.windows(2).all(|w| w[0] < w[1]));
        debug_assert!(values.first().is_none_or(|&v| v > 0));
        SupportSet(values)
    }

    pub fn empty() -> Self {
        SupportSet(Vec::new())
    }

    /// The integers of `[lo, hi]`; `lo` is clamped to 1.
    pub fn interval(lo: u64, hi: u64) -> Self {
        let lo = lo.max(1);
        if lo > hi {
            return SupportSet::empty();
        }
        SupportSet((lo..=hi).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[u64] {
        &self.0
    }

    pub fn iter(&self) -> impl DoubleEndedIterator<Item = u64> + ExactSizeIterator + '_ {
        self.0.iter().copied()
    }

    pub fn contains(&self, n: u64) -> bool {
        self.0.binary_search(&n).is_ok()
    }

    pub fn position(&self, n: u64) -> Option<usize> {
        self.0.binary_search(&n).ok()
    }

    pub fn min(&self) -> Option<u64> {
        self.0.first().copied()
    }

    pub fn max(&self) -> Option<u64> {
        self.0.last().copied()
    }

    /// Elements `n` with `lo < n <= hi`.
    pub fn range(&self, lo: u64, hi: u64) -> SupportSet {
        let start = self.0.partition_point(|&v| v <= lo);
        let end = self.0.partition_point(|&v| v <= hi);
        SupportSet(self.0[start..end.max(start)].to_vec())
    }

    pub fn filter(&self, mut keep: impl FnMut(u64) -> bool) -> SupportSet {
        SupportSet(self.0.iter().copied().filter(|&n| keep(n)).collect())
    }

    /// Splits off the `k` largest elements: returns `(rest, top)`.
    pub fn split_largest(&self, k: usize) -> (SupportSet, SupportSet) {
        let cut = self.0.len().saturating_sub(k);
        (
            SupportSet(self.0[..cut].to_vec()),
            SupportSet(self.0[cut..].to_vec()),
        )
    }

    pub fn union(&self, other: &SupportSet) -> SupportSet {
        let mut v: Vec<u64> = self.0.iter().chain(other.0.iter()).copied().collect();
        v.sort_unstable();
        v.dedup();
        SupportSet(v)
    }

    pub fn difference(&self, other: &SupportSet) -> SupportSet {
        self.filter(|n| !other.contains(n))
    }

    pub fn is_subset(&self, other: &SupportSet) -> bool {
        self.0.iter().all(|&n| other.contains(n))
    }

    /// Maximal runs of consecutive integers, as inclusive `(start, end)` pairs.
    pub fn to_ranges(&self) -> Vec<(u64, u64)> {
        let mut out: Vec<(u64, u64)> = Vec::new();
        for &n in &self.0 {
            match out.last_mut() {
                Some((_, end)) if *end + 1 == n => *end = n,
                _ => out.push((n, n)),
            }
        }
        out
    }

    pub fn from_ranges(ranges: &[(u64, u64)]) -> Result<SupportSet> {
        let mut v = Vec::new();
        for &(a, b) in ranges {
            if a == 0 || a > b {
                return Err(Error::Parse(format!("bad support range [{a}, {b}]")));
            }
            v.extend(a..=b);
        }
        SupportSet::new(v)
    }
}

impl FromIterator<u64> for SupportSet {
    /// Collects, sorts and deduplicates; zero is dropped.
    fn from_iter<I: IntoIterator<Item = u64>>(iter: I) -> Self {
        let mut v: Vec<u64> = iter.into_iter().filter(|&n| n > 0).collect();
        v.sort_unstable();
        v.dedup();
        SupportSet(v)
    }
}

impl<'a> IntoIterator for &'a SupportSet {
    type Item = u64;
    type IntoIter = std::iter::Copied<std::slice::Iter<'a, u64>>;

    fn into_iter(self) -> Self::IntoIter {
        self.0.iter().copied()
    }
}

/// An assignment `n -> ±1` defined on exactly the elements of its support.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SignSequence {
    support: SupportSet,
    signs: Vec<i8>,
}

impl SignSequence {
    pub fn new(support: SupportSet, signs: Vec<i8>) -> Result<Self> {
        if support.len() != signs.len() {
            return Err(Error::Domain(format!(
                "{} signs for a support of size {}",
                signs.len(),
                support.len()
            )));
        }
        if let Some(bad) = signs.iter().find(|&&s| s != 1 && s != -1) {
            return Err(Error::Domain(format!("sign {bad} is not ±1")));
        }
        Ok(SignSequence { support, signs })
    }

    pub fn empty() -> Self {
        SignSequence {
            support: SupportSet::empty(),
            signs: Vec::new(),
        }
    }

    pub fn constant(support: SupportSet, sign: i8) -> Result<Self> {
        let signs = vec![sign; support.len()];
        SignSequence::new(support, signs)
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = (u64, i8)>) -> Result<Self> {
        let mut pairs: Vec<(u64, i8)> = pairs.into_iter().collect();
        pairs.sort_unstable_by_key(|p| p.0);
        if pairs.windows(2).any(|w| w[0].0 == w[1].0) {
            return Err(Error::Domain("duplicate index in sign assignment".into()));
        }
        let support = SupportSet::new(pairs.iter().map(|p| p.0).collect())?;
        SignSequence::new(support, pairs.into_iter().map(|p| p.1).collect())
    }

    pub fn support(&self) -> &SupportSet {
        &self.support
    }

    pub fn signs(&self) -> &[i8] {
        &self.signs
    }

    pub fn len(&self) -> usize {
        self.signs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.signs.is_empty()
    }

    pub fn sign_of(&self, n: u64) -> Option<i8> {
        self.support.position(n).map(|i| self.signs[i])
    }

    pub fn iter(&self) -> impl Iterator<Item = (u64, i8)> + '_ {
        self.support.iter().zip(self.signs.iter().copied())
    }

    /// Union of two assignments with disjoint supports.
    pub fn merge(&self, other: &SignSequence) -> Result<SignSequence> {
        SignSequence::from_pairs(self.iter().chain(other.iter()))
    }

    /// Restriction to `lo < n <= hi`.
    pub fn range(&self, lo: u64, hi: u64) -> SignSequence {
        let pairs: Vec<(u64, i8)> = self.iter().filter(|&(n, _)| n > lo && n <= hi).collect();
        SignSequence {
            support: SupportSet::from_sorted_unchecked(pairs.iter().map(|p| p.0).collect()),
            signs: pairs.into_iter().map(|p| p.1).collect(),
        }
    }

    /// Run-length encoding of the signs in support order.
    pub fn rle(&self) -> Vec<(i8, usize)> {
        let mut out: Vec<(i8, usize)> = Vec::new();
        for &s in &self.signs {
            match out.last_mut() {
                Some((t, c)) if *t == s => *c += 1,
                _ => out.push((s, 1)),
            }
        }
        out
    }

    pub fn from_rle(support: SupportSet, rle: &[(i8, usize)]) -> Result<SignSequence> {
        let signs: Vec<i8> = rle
            .iter()
            .flat_map(|&(s, c)| std::iter::repeat_n(s, c))
            .collect();
        SignSequence::new(support, signs)
    }
}

/// Serialized as inclusive `[lo, hi]` runs.
impl Serialize for SupportSet {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_ranges().serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for SupportSet {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let ranges = Vec::<(u64, u64)>::deserialize(deserializer)?;
        SupportSet::from_ranges(&ranges).map_err(serde::de::Error::custom)
    }
}

#[derive(Serialize, Deserialize)]
struct SignSequenceWire {
    support: Vec<(u64, u64)>,
    signs: Vec<(i8, usize)>,
}

impl Serialize for SignSequence {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        SignSequenceWire {
            support: self.support.to_ranges(),
            signs: self.rle(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for SignSequence {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let wire = SignSequenceWire::deserialize(deserializer)?;
        let support = SupportSet::from_ranges(&wire.support).map_err(serde::de::Error::custom)?;
        SignSequence::from_rle(support, &wire.signs).map_err(serde::de::Error::custom)
    }
}

/// A possibly infinite set of positive integers, given by a membership rule.
///
/// Text grammar: `all`, `a..b` (inclusive interval), `mod m: r1,r2,...`
/// (residue classes) and `@path` (file with one integer per line).
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SetSpec {
    All,
    Interval { lo: u64, hi: u64 },
    Residues { modulus: u64, residues: Vec<u64> },
    Explicit(SupportSet),
}

impl SetSpec {
    pub fn contains(&self, n: u64) -> bool {
        if n == 0 {
            return false;
        }
        match self {
            SetSpec::All => true,
            SetSpec::Interval { lo, hi } => (*lo..=*hi).contains(&n),
            SetSpec::Residues { modulus, residues } => residues.contains(&(n % modulus)),
            SetSpec::Explicit(s) => s.contains(n),
        }
    }

    /// Members in `[lo, hi]`.
    pub fn materialize(&self, lo: u64, hi: u64) -> SupportSet {
        match self {
            SetSpec::Explicit(s) => s.range(lo.saturating_sub(1), hi),
            _ => (lo.max(1)..=hi).filter(|&n| self.contains(n)).collect(),
        }
    }

    /// `|A ∩ [1, n]|`.
    pub fn count_upto(&self, n: u64) -> u64 {
        match self {
            SetSpec::All => n,
            SetSpec::Interval { lo, hi } => {
                if n < *lo {
                    0
                } else {
                    n.min(*hi) - lo + 1
                }
            }
            SetSpec::Residues { modulus, residues } => {
                let full = n / modulus;
                let rem = n % modulus;
                residues
                    .iter()
                    .map(|&r| {
                        
                        if r == 0 { full } else { full + u64::from(r <= rem) }
                    })
                    .sum()
            }
            SetSpec::Explicit(s) => s.range(0, n).len() as u64,
        }
    }

    pub fn from_file(path: &Path) -> Result<SetSpec> {
        let text = std::fs::read_to_string(path)?;
        let mut values = Vec::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let v: u64 = line
                .parse()
                .map_err(|_| Error::Parse(format!("{}:{}: not an integer: {line:?}", path.display(), i + 1)))?;
            values.push(v);
        }
        Ok(SetSpec::Explicit(SupportSet::new(values)?))
    }
}

impl FromStr for SetSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.eq_ignore_ascii_case("all") {
            return Ok(SetSpec::All);
        }
        if let Some(path) = s.strip_prefix('@') {
            return SetSpec::from_file(Path::new(path));
        }
        if let Some(rest) = s.strip_prefix("mod") {
            let (m, rs) = rest
                .split_once(':')
                .ok_or_else(|| Error::Parse(format!("expected `mod m: r1,r2`, got {s:?}")))?;
            let modulus: u64 = m
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("bad modulus in {s:?}")))?;
            if modulus == 0 {
                return Err(Error::Parse("modulus must be positive".into()));
            }
            let mut residues = rs
                .split(',')
                .map(|r| r.trim().parse::<u64>().map(|r| r % modulus))
                .collect::<std::result::Result<Vec<_>, _>>()
                .map_err(|_| Error::Parse(format!("bad residue list in {s:?}")))?;
            residues.sort_unstable();
            residues.dedup();
            return Ok(SetSpec::Residues { modulus, residues });
        }
        if let Some((a, b)) = s.split_once("..") {
            let lo: u64 = a
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("bad interval start in {s:?}")))?;
            let hi: u64 = b
                .trim()
                .trim_start_matches('=')
                .parse()
                .map_err(|_| Error::Parse(format!("bad interval end in {s:?}")))?;
            if lo == 0 || lo > hi {
                return Err(Error::Parse(format!("empty or non-positive interval {s:?}")));
            }
            return Ok(SetSpec::Interval { lo, hi });
        }
        Err(Error::Parse(format!("unrecognised set specification {s:?}")))
    }
}

impl fmt::Display for SetSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SetSpec::All => f.write_str("all"),
            SetSpec::Interval { lo, hi } => write!(f, "{lo}..{hi}"),
            SetSpec::Residues { modulus, residues } => {
                let rs: Vec<String> = residues.iter().map(|r| r.to_string()).collect();
                write!(f, "mod {modulus}: {}", rs.join(","))
            }
            SetSpec::Explicit(s) => write!(f, "explicit({} elements)", s.len()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn range_is_half_open_on_the_left() {
        let s = SupportSet::interval(1, 10);
        assert_eq!(s.range(3, 6).as_slice(), &[4, 5, 6]);
        assert!(s.range(13, 13).is_empty());
        assert!(s.range(7, 3).is_empty());
    }

    #[test]
    fn zero_is_rejected() {
        assert!(SupportSet::new(vec![0, 1]).is_err());
    }

    #[test]
    fn ranges_and_rle() {
        let s = SupportSet::new(vec![1, 2, 3, 7, 9, 10]).unwrap();
        assert_eq!(s.to_ranges(), vec![(1, 3), (7, 7), (9, 10)]);
        assert_eq!(SupportSet::from_ranges(&s.to_ranges()).unwrap(), s);
        let signs = SignSequence::new(s.clone(), vec![1, 1, -1, -1, -1, 1]).unwrap();
        assert_eq!(signs.rle(), vec![(1, 2), (-1, 3), (1, 1)]);
        assert_eq!(SignSequence::from_rle(s, &signs.rle()).unwrap(), signs);
    }

    #[test]
    fn sign_sequence_checks_lengths_and_values() {
        let s = SupportSet::interval(1, 3);
        assert!(SignSequence::new(s.clone(), vec![1, -1]).is_err());
        assert!(SignSequence::new(s, vec![1, 0, 1]).is_err());
        assert!(SignSequence::from_pairs([(2, 1), (2, -1)]).is_err());
    }

    #[test]
    fn set_spec_grammar() {
        assert_eq!("1..256".parse::<SetSpec>().unwrap(), SetSpec::Interval { lo: 1, hi: 256 });
        let r: SetSpec = "mod 3: 1, 2".parse().unwrap();
        assert_eq!(
            r,
            SetSpec::Residues {
                modulus: 3,
                residues: vec![1, 2]
            }
        );
        assert!(r.contains(4) && !r.contains(6));
        assert_eq!(r.count_upto(10), 7);
        assert_eq!(r.materialize(1, 10).len(), 7);
        assert!("mod 0: 1".parse::<SetSpec>().is_err());
        assert!("5..2".parse::<SetSpec>().is_err());
        assert!("banana".parse::<SetSpec>().is_err());
    }

    #[test]
    fn residue_count_matches_enumeration() {
        let spec = SetSpec::Residues {
            modulus: 7,
            residues: vec![0, 3, 6],
        };
        for n in 0..200 {
            let direct = (1..=n).filter(|&k| spec.contains(k)).count() as u64;
            assert_eq!(spec.count_upto(n), direct, "n = {n}");
        }
    }

    #[test]
    fn explicit_file_round_trip() {
        let dir = std::env::temp_dir().join(format!("support-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("set.txt");
        std::fs::write(&path, "5\n# comment\n3\n\n9\n").unwrap();
        let spec: SetSpec = format!("@{}", path.display()).parse().unwrap();
        assert_eq!(spec.materialize(1, 100).as_slice(), &[3, 5, 9]);
        assert_eq!(spec.count_upto(5), 2);
        std::fs::remove_dir_all(dir).ok();
    }
}
