//! Weight vectors, boundary subsets and the light/heavy trichotomy.
//!
//! A boundary subset is stored as the canonical representative of the pair
//! `{S, S^c}`: the side of smaller cardinality wins, and an even split is
//! represented by the side containing marking 1. All classification is done
//! through the *light side* (the side of weight sum at most 1), which for an
//! admissible weight vector is unique when it exists.

use crate::{rat_int, Error, Rat, Result};
use num_traits::Zero;
use std::fmt;
use std::str::FromStr;

/// Rational weights `a_i` with `0 < a_i <= 1`, one per marked point.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct WeightVector {
    weights: Vec<Rat>,
}

impl WeightVector {
    pub fn new(weights: Vec<Rat>) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::InvalidWeights("empty weight vector".into()));
        }
        if weights.len() > 62 {
            return Err(Error::InvalidWeights("more than 62 markings".into()));
        }
        let one = rat_int(1);
        for (i, w) in weights.iter().enumerate() {
            if *w <= Rat::zero() || *w > one {
                return Err(Error::InvalidWeights(format!(
                    "weight a_{} = {} is outside (0, 1]",
                    i + 1,
                    w
                )));
            }
        }
        Ok(WeightVector { weights })
    }

    pub fn uniform(n: usize, w: Rat) -> Result<Self> {
        Self::new(vec![w; n])
    }

    pub fn n(&self) -> usize {
        self.weights.len()
    }

    pub fn weights(&self) -> &[Rat] {
        &self.weights
    }

    /// Weight of marking `i` (1-based).
    pub fn weight(&self, i: usize) -> &Rat {
        &self.weights[i - 1]
    }

    pub fn total(&self) -> Rat {
        self.weights.iter().sum()
    }

    /// Genus-0 admissibility: the total weight exceeds 2, so that
    /// `omega_C(sum a_i p_i)` has positive degree on an irreducible fiber.
    pub fn is_admissible(&self) -> bool {
        self.total() > rat_int(2)
    }

    /// The stronger threshold `2g - 2 + sum a_i > 2` specialized to genus 0,
    /// i.e. total weight above 4. Exposed as an opt-in check; the standard
    /// admissibility bound is [`WeightVector::is_admissible`].
    pub fn is_strict_admissible(&self) -> bool {
        self.total() > rat_int(4)
    }

    pub fn pair_weight(&self, i: usize, j: usize) -> Rat {
        self.weight(i) + self.weight(j)
    }

    /// Sum of the weights of the markings in `bits` (bit `i-1` = marking `i`).
    pub fn bits_weight(&self, bits: u64) -> Rat {
        let mut total = Rat::zero();
        for (idx, w) in self.weights.iter().enumerate() {
            if bits & (1 << idx) != 0 {
                total += w;
            }
        }
        total
    }
}

impl fmt::Display for WeightVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.weights.iter().map(|w| w.to_string()).collect();
        write!(f, "{}", parts.join(","))
    }
}

impl fmt::Debug for WeightVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "WeightVector({self})")
    }
}

impl FromStr for WeightVector {
    type Err = Error;

    /// Parses `"a1,a2,...,an"` with each entry `p/q` or an integer.
    fn from_str(s: &str) -> Result<Self> {
        let weights = s
            .split(',')
            .map(crate::parse_rat)
            .collect::<Result<Vec<_>>>()?;
        WeightVector::new(weights)
    }
}

/// Canonical representative of a boundary index `{S, S^c}` with
/// `2 <= |S| <= n - 2`.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct MarkedSubset {
    n: usize,
    bits: u64,
}

fn full_mask(n: usize) -> u64 {
    (1u64 << n) - 1
}

fn canonical_bits(n: usize, bits: u64) -> u64 {
    let comp = full_mask(n) & !bits;
    let s = bits.count_ones();
    let c = comp.count_ones();
    if s < c {
        bits
    } else if s > c {
        comp
    } else if bits & 1 != 0 {
        // Even split: keep the side containing marking 1.
        bits
    } else {
        comp
    }
}

impl MarkedSubset {
    pub fn new(n: usize, members: &[usize]) -> Result<Self> {
        let mut bits = 0u64;
        for &i in members {
            if i < 1 || i > n {
                return Err(Error::IndexOutOfRange { index: i, n });
            }
            bits |= 1 << (i - 1);
        }
        Self::from_bits(n, bits)
    }

    pub fn from_bits(n: usize, bits: u64) -> Result<Self> {
        if !(4..=62).contains(&n) {
            return Err(Error::InvalidSubset(format!(
                "n = {n} is out of range (need 4 <= n <= 62)"
            )));
        }
        let size = bits.count_ones() as usize;
        if size < 2 || size > n - 2 {
            return Err(Error::InvalidSubset(format!(
                "subset {} of {{1..{}}} needs at least two markings on each side",
                members_string(bits),
                n
            )));
        }
        Ok(MarkedSubset {
            n,
            bits: canonical_bits(n, bits),
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Size of the stored canonical side.
    pub fn size(&self) -> usize {
        self.bits.count_ones() as usize
    }

    pub fn bits(&self) -> u64 {
        self.bits
    }

    pub fn complement_bits(&self) -> u64 {
        full_mask(self.n) & !self.bits
    }

    pub fn contains(&self, i: usize) -> bool {
        self.bits & (1 << (i - 1)) != 0
    }

    pub fn members(&self) -> Vec<usize> {
        bits_members(self.bits)
    }

    pub fn complement_members(&self) -> Vec<usize> {
        bits_members(self.complement_bits())
    }
}

/// Sorted 1-based markings of a bitmask (bit `i-1` = marking `i`).
pub fn bits_members(bits: u64) -> Vec<usize> {
    (0..64)
        .filter(|idx| bits & (1 << idx) != 0)
        .map(|idx| idx + 1)
        .collect()
}

fn members_string(bits: u64) -> String {
    let parts: Vec<String> = bits_members(bits).iter().map(|i| i.to_string()).collect();
    format!("{{{}}}", parts.join(","))
}

impl Ord for MarkedSubset {
    /// Size first, then by member list: of two equally sized subsets the one
    /// containing the smallest non-shared marking comes first.
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.size()
            .cmp(&other.size())
            .then_with(|| {
                let diff = self.bits ^ other.bits;
                if diff == 0 {
                    return std::cmp::Ordering::Equal;
                }
                let low = diff & diff.wrapping_neg();
                if self.bits & low != 0 {
                    std::cmp::Ordering::Less
                } else {
                    std::cmp::Ordering::Greater
                }
            })
            .then_with(|| self.n.cmp(&other.n))
    }
}

impl PartialOrd for MarkedSubset {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for MarkedSubset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", members_string(self.bits))
    }
}

impl fmt::Debug for MarkedSubset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MarkedSubset(n={}, {})", self.n, self)
    }
}

/// Parses `"{i,j,...}"` given `n`.
pub fn parse_subset(n: usize, s: &str) -> Result<MarkedSubset> {
    let t = s.trim();
    let inner = t
        .strip_prefix('{')
        .and_then(|t| t.strip_suffix('}'))
        .ok_or_else(|| Error::InvalidSubset(format!("expected {{i,j,...}}, got {t:?}")))?;
    let members = inner
        .split(',')
        .map(|p| {
            p.trim()
                .parse::<usize>()
                .map_err(|e| Error::InvalidSubset(format!("bad index {p:?}: {e}")))
        })
        .collect::<Result<Vec<_>>>()?;
    MarkedSubset::new(n, &members)
}

/// The trichotomy of a boundary subset under a weight vector.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum SubsetClass {
    /// The light side is a pair: the two markings may coincide.
    CoincidencePair,
    /// The light side has three or more markings: the corresponding boundary
    /// divisor is contracted by the reduction morphism.
    Contracted,
    /// Neither side is light: the divisor keeps parameterizing nodal curves.
    Nodal,
}

/// Bits of the light side (weight sum at most 1) of `{S, S^c}`, if any.
pub fn light_side_bits(s: &MarkedSubset, a: &WeightVector) -> Result<Option<u64>> {
    check_subset_weights(s, a)?;
    let one = rat_int(1);
    if a.bits_weight(s.bits()) <= one {
        debug_assert!(a.bits_weight(s.complement_bits()) > one);
        Ok(Some(s.bits()))
    } else if a.bits_weight(s.complement_bits()) <= one {
        Ok(Some(s.complement_bits()))
    } else {
        Ok(None)
    }
}

fn check_subset_weights(s: &MarkedSubset, a: &WeightVector) -> Result<()> {
    if s.n() != a.n() {
        return Err(Error::DimensionMismatch(format!(
            "subset on n={} against weight vector of length {}",
            s.n(),
            a.n()
        )));
    }
    if !a.is_admissible() {
        return Err(Error::InvalidWeights(format!(
            "weight vector {a} is not admissible (total {} <= 2)",
            a.total()
        )));
    }
    Ok(())
}

pub fn classify_subset(s: &MarkedSubset, a: &WeightVector) -> Result<SubsetClass> {
    Ok(match light_side_bits(s, a)? {
        None => SubsetClass::Nodal,
        Some(bits) if bits.count_ones() == 2 => SubsetClass::CoincidencePair,
        Some(_) => SubsetClass::Contracted,
    })
}

/// All canonical boundary subsets for `n` markings, ordered by size then by
/// member list. The count is `2^(n-1) - n - 1`.
pub fn boundary_subsets(n: usize) -> Result<Vec<MarkedSubset>> {
    if !(4..=62).contains(&n) {
        return Err(Error::Unsupported(format!(
            "boundary subsets need 4 <= n <= 62, got {n}"
        )));
    }
    let mut out = Vec::with_capacity((1usize << (n - 1)) - n - 1);
    for bits in 1..full_mask(n) {
        let size = bits.count_ones() as usize;
        if size < 2 || size > n - 2 {
            continue;
        }
        if canonical_bits(n, bits) == bits {
            out.push(MarkedSubset { n, bits });
        }
    }
    out.sort();
    Ok(out)
}
