//! Transport of divisor classes along reduction and replacement morphisms.
//!
//! A reduction morphism `f : M_{0,n} -> M_{0,A}` contracts the boundary
//! divisors whose light side has three or more markings and maps light pairs
//! onto coincidence divisors. The pullback rules on generators are
//!
//! - `psi'_i  |-> psi_i - sum bd(S)` over light classes whose light side
//!   contains `i`;
//! - `coinc(i,j) |-> sum bd(S)` over light classes whose light side contains
//!   both `i` and `j`;
//! - `nodal(S) |-> bd(S)`;
//!
//! and pushforward is the one-sided inverse sending `bd(S)` to the
//! coincidence class, zero or the nodal class according to the trichotomy,
//! and `psi_i` to `psi'_i + sum coinc(i,j)` over light pairs through `i`.
//! These rules are validated by three independent anchors in the test
//! suites: the canonical degree bookkeeping on `M_{0,(1,1,1/2,1/2)}`, the
//! vanishing of pullbacks against curves inside contracted divisors, and the
//! discrepancy coefficients `(|S|-1)(1 - w(S))` of the log-canonical
//! comparison.

use crate::markings::{
    bits_members, boundary_subsets, light_side_bits, MarkedSubset, SubsetClass, WeightVector,
};
use crate::picard::{DivisorClass, Generator, GitWeights, SpaceTag};
use crate::{rat_int, Error, Rat, Result};
use num_traits::Zero;
use std::collections::BTreeMap;

/// Reduction morphism `M_{0,n} -> M_{0,A}` with the light/heavy trichotomy
/// of every boundary class precomputed.
#[derive(Clone, Debug)]
pub struct ReductionMap {
    n: usize,
    target: WeightVector,
    pairs: Vec<MarkedSubset>,
    contracted: Vec<MarkedSubset>,
    nodal: Vec<MarkedSubset>,
    /// Light classes (pairs and contracted) with the bits of their light side.
    light: Vec<(MarkedSubset, u64)>,
    class_of: BTreeMap<MarkedSubset, (SubsetClass, u64)>,
}

impl ReductionMap {
    pub fn new(n: usize, target: WeightVector) -> Result<Self> {
        if target.n() != n {
            return Err(Error::DimensionMismatch(format!(
                "reduction for n={n} against weight vector of length {}",
                target.n()
            )));
        }
        // Constructing the target space validates admissibility.
        SpaceTag::hassett(target.clone())?;
        let mut pairs = Vec::new();
        let mut contracted = Vec::new();
        let mut nodal = Vec::new();
        let mut light = Vec::new();
        let mut class_of = BTreeMap::new();
        for s in boundary_subsets(n)? {
            match light_side_bits(&s, &target)? {
                Some(bits) if bits.count_ones() == 2 => {
                    pairs.push(s);
                    light.push((s, bits));
                    class_of.insert(s, (SubsetClass::CoincidencePair, bits));
                }
                Some(bits) => {
                    contracted.push(s);
                    light.push((s, bits));
                    class_of.insert(s, (SubsetClass::Contracted, bits));
                }
                None => {
                    nodal.push(s);
                    class_of.insert(s, (SubsetClass::Nodal, 0));
                }
            }
        }
        Ok(ReductionMap {
            n,
            target,
            pairs,
            contracted,
            nodal,
            light,
            class_of,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn target(&self) -> &WeightVector {
        &self.target
    }

    pub fn source_space(&self) -> SpaceTag {
        SpaceTag::ModuliBar { n: self.n }
    }

    pub fn target_space(&self) -> SpaceTag {
        SpaceTag::Hassett {
            weights: self.target.clone(),
        }
    }

    pub fn coincidence_pairs(&self) -> &[MarkedSubset] {
        &self.pairs
    }

    pub fn contracted(&self) -> &[MarkedSubset] {
        &self.contracted
    }

    pub fn nodal(&self) -> &[MarkedSubset] {
        &self.nodal
    }

    /// Bits of the light side of a light class; 0 for nodal classes.
    pub fn light_bits_of(&self, s: &MarkedSubset) -> u64 {
        self.class_of.get(s).map(|(_, b)| *b).unwrap_or(0)
    }

    pub fn classification(&self, s: &MarkedSubset) -> Option<SubsetClass> {
        self.class_of.get(s).map(|(c, _)| *c)
    }

    /// True when no boundary divisor is contracted (`f` is an isomorphism).
    pub fn contracts_nothing(&self) -> bool {
        self.contracted.is_empty()
    }

    fn check_target_class(&self, c: &DivisorClass) -> Result<()> {
        match c.space() {
            SpaceTag::Hassett { weights } if *weights == self.target => Ok(()),
            other => Err(Error::SpaceMismatch {
                expected: self.target_space().to_string(),
                found: other.to_string(),
            }),
        }
    }
}

/// Pullback along a reduction morphism, generator by generator.
pub fn pullback(f: &ReductionMap, c: &DivisorClass) -> Result<DivisorClass> {
    f.check_target_class(c)?;
    let mut out = DivisorClass::zero(f.source_space());
    for (g, coeff) in c.iter() {
        match g {
            Generator::Psi(i) => {
                out.add_term(Generator::Psi(*i), coeff.clone())?;
                let bit = 1u64 << (i - 1);
                for (s, light) in &f.light {
                    if light & bit != 0 {
                        out.add_term(Generator::Boundary(*s), -coeff.clone())?;
                    }
                }
            }
            Generator::Coincidence(i, j) => {
                let needed = (1u64 << (i - 1)) | (1u64 << (j - 1));
                for (s, light) in &f.light {
                    if light & needed == needed {
                        out.add_term(Generator::Boundary(*s), coeff.clone())?;
                    }
                }
            }
            Generator::Nodal(s) => {
                out.add_term(Generator::Boundary(*s), coeff.clone())?;
            }
            Generator::Boundary(_) => {
                return Err(Error::IllegalGenerator {
                    gen: g.to_string(),
                    space: c.space().to_string(),
                })
            }
        }
    }
    Ok(out)
}

/// Pushforward along a reduction morphism; satisfies
/// `pushforward . pullback = id`.
pub fn pushforward(f: &ReductionMap, c: &DivisorClass) -> Result<DivisorClass> {
    match c.space() {
        SpaceTag::ModuliBar { n } if *n == f.n => {}
        other => {
            return Err(Error::SpaceMismatch {
                expected: f.source_space().to_string(),
                found: other.to_string(),
            })
        }
    }
    let mut out = DivisorClass::zero(f.target_space());
    for (g, coeff) in c.iter() {
        match g {
            Generator::Psi(i) => {
                out.add_term(Generator::Psi(*i), coeff.clone())?;
                for j in 1..=f.n {
                    if j != *i && f.target.pair_weight(*i, j) <= rat_int(1) {
                        out.add_term(Generator::coincidence(*i, j)?, coeff.clone())?;
                    }
                }
            }
            Generator::Boundary(s) => match f.classification(s) {
                Some(SubsetClass::CoincidencePair) => {
                    let members = bits_members(f.light_bits_of(s));
                    out.add_term(
                        Generator::coincidence(members[0], members[1])?,
                        coeff.clone(),
                    )?;
                }
                Some(SubsetClass::Contracted) => {}
                Some(SubsetClass::Nodal) => {
                    out.add_term(Generator::Nodal(*s), coeff.clone())?;
                }
                None => {
                    return Err(Error::IllegalGenerator {
                        gen: g.to_string(),
                        space: c.space().to_string(),
                    })
                }
            },
            _ => {
                return Err(Error::IllegalGenerator {
                    gen: g.to_string(),
                    space: c.space().to_string(),
                })
            }
        }
    }
    Ok(out)
}

/// Replacement morphism data: marking 1 of the source weight vector `A` is
/// split into `k` coincident markings of weights `b_1, ..., b_k` with
/// `sum b_l = a_1`; the target vector is `B = (b_1..b_k, a_2..a_n)`.
#[derive(Clone, Debug)]
pub struct ReplacementData {
    source: WeightVector,
    split: Vec<Rat>,
    target: WeightVector,
}

impl ReplacementData {
    pub fn new(source: WeightVector, split: Vec<Rat>) -> Result<Self> {
        if split.is_empty() {
            return Err(Error::InvalidSplit("empty split".into()));
        }
        let total: Rat = split.iter().sum();
        if &total != source.weight(1) {
            return Err(Error::InvalidSplit(format!(
                "split sums to {total}, expected a_1 = {}",
                source.weight(1)
            )));
        }
        let mut entries = split.clone();
        entries.extend_from_slice(&source.weights()[1..]);
        let target = WeightVector::new(entries)?;
        // Same total weight, so admissibility carries over; still check both
        // ends so the space tags can be built.
        SpaceTag::hassett(source.clone())?;
        SpaceTag::hassett(target.clone())?;
        Ok(ReplacementData {
            source,
            split,
            target,
        })
    }

    pub fn k(&self) -> usize {
        self.split.len()
    }

    pub fn split(&self) -> &[Rat] {
        &self.split
    }

    pub fn source(&self) -> &WeightVector {
        &self.source
    }

    pub fn target(&self) -> &WeightVector {
        &self.target
    }

    pub fn source_space(&self) -> SpaceTag {
        SpaceTag::Hassett {
            weights: self.source.clone(),
        }
    }

    pub fn target_space(&self) -> SpaceTag {
        SpaceTag::Hassett {
            weights: self.target.clone(),
        }
    }

    /// Marking of `A` that a marking of `B` restricts to.
    fn map_index(&self, b: usize) -> usize {
        if b <= self.k() {
            1
        } else {
            b - self.k() + 1
        }
    }

    /// Image of a subset of the `B`-markings, provided it does not separate
    /// the replaced markings.
    fn map_bits(&self, bits: u64) -> Option<u64> {
        let k = self.k();
        let tau = (1u64 << k) - 1;
        let t = bits & tau;
        if t == 0 {
            Some(bits >> (k - 1))
        } else if t == tau {
            Some(((bits & !tau) >> (k - 1)) | 1)
        } else {
            None
        }
    }
}

/// Pullback along the replacement morphism `chi : M_{0,A} -> M_{0,B}`.
///
/// Generator rules: `psi_{tau_l} |-> psi_1`; `coinc(tau_l, tau_m) |-> -psi_1`
/// (the replaced sections coincide identically); `coinc(tau_l, j) |->
/// coinc(1, j)` when that class exists on the source and 0 otherwise (the
/// coincidence locus is empty there); nodal classes map by substituting the
/// block of replaced markings by marking 1, and vanish when the subset
/// separates the replaced markings (such a divisor is disjoint from the image
/// of `chi`).
pub fn replacement_pullback(r: &ReplacementData, c: &DivisorClass) -> Result<DivisorClass> {
    match c.space() {
        SpaceTag::Hassett { weights } if *weights == *r.target() => {}
        other => {
            return Err(Error::SpaceMismatch {
                expected: r.target_space().to_string(),
                found: other.to_string(),
            })
        }
    }
    let k = r.k();
    let source_space = r.source_space();
    let mut out = DivisorClass::zero(source_space.clone());
    for (g, coeff) in c.iter() {
        match g {
            Generator::Psi(b) => {
                out.add_term(Generator::Psi(r.map_index(*b)), coeff.clone())?;
            }
            Generator::Coincidence(b1, b2) => {
                let (i, j) = (r.map_index(*b1), r.map_index(*b2));
                if i == j {
                    debug_assert!(*b1 <= k && *b2 <= k);
                    out.add_term(Generator::Psi(1), -coeff.clone())?;
                } else {
                    let gen = Generator::coincidence(i, j)?;
                    if gen.legal_on(&source_space) {
                        out.add_term(gen, coeff.clone())?;
                    }
                    // Otherwise the coincidence locus is empty on the source.
                }
            }
            Generator::Nodal(s) => {
                if let Some(bits) = r.map_bits(s.bits()) {
                    let mapped = MarkedSubset::from_bits(r.source().n(), bits)?;
                    out.add_term(Generator::Nodal(mapped), coeff.clone())?;
                }
            }
            Generator::Boundary(_) => {
                return Err(Error::IllegalGenerator {
                    gen: g.to_string(),
                    space: c.space().to_string(),
                })
            }
        }
    }
    Ok(out)
}

/// Discrepancy coefficients of the reduction morphism: with
/// `L = K + sum_{light pairs} (a_i + a_j) bd({i,j}) + Delta_rest` upstairs,
/// the difference `L - f^*(A + lambda)` is supported on the contracted
/// classes with coefficient `(|S| - 1)(1 - w(S))` at the light side of `S`.
/// The identity is recomputed from scratch and any deviation is reported as
/// an error, never corrected.
pub fn discrepancy(f: &ReductionMap) -> Result<BTreeMap<MarkedSubset, Rat>> {
    let upstairs = crate::divisors::log_canonical_upstairs(f.n(), f.target())?;
    let (a_class, _) = crate::divisors::class_a(&f.target_space(), f.target())?;
    let pulled = pullback(f, &a_class)?;
    let diff = upstairs.sub(&pulled)?;

    let mut expected_map = BTreeMap::new();
    let mut expected = DivisorClass::zero(f.source_space());
    for s in f.contracted() {
        let light = f.light_bits_of(s);
        let size = light.count_ones() as i64;
        let coeff = rat_int(size - 1) * (rat_int(1) - f.target().bits_weight(light));
        if !coeff.is_zero() {
            expected_map.insert(*s, coeff.clone());
            expected.add_term(Generator::Boundary(*s), coeff)?;
        }
    }
    if diff != expected {
        return Err(Error::IdentityViolation {
            identity: "L - f^*(A + lambda) = sum (|S|-1)(1 - w(S)) bd(S) over contracted S"
                .into(),
            witness: diff.sub(&expected)?.to_json().to_string(),
        });
    }
    Ok(expected_map)
}

/// Pullback from a GIT quotient to `M_{0,n}`: every boundary class has a
/// side of weight strictly below 1 when the linearization is typical, and
/// `psi'_i |-> psi_i - sum bd(S)` over the classes whose light side contains
/// `i`. Atypical weights are rejected with the violating subset.
pub fn git_reduction_pullback(x: &GitWeights, c: &DivisorClass) -> Result<DivisorClass> {
    match c.space() {
        SpaceTag::GitQuotient { x: cx } if cx == x => {}
        other => {
            return Err(Error::SpaceMismatch {
                expected: format!("GIT({x})"),
                found: other.to_string(),
            })
        }
    }
    let n = x.n();
    let light: Vec<(MarkedSubset, u64)> = boundary_subsets(n)?
        .into_iter()
        .map(|s| x.light_side_bits(&s).map(|bits| (s, bits)))
        .collect::<Result<_>>()?;
    let mut out = DivisorClass::zero(SpaceTag::ModuliBar { n });
    for (g, coeff) in c.iter() {
        match g {
            Generator::Psi(i) => {
                out.add_term(Generator::Psi(*i), coeff.clone())?;
                let bit = 1u64 << (i - 1);
                for (s, lb) in &light {
                    if lb & bit != 0 {
                        out.add_term(Generator::Boundary(*s), -coeff.clone())?;
                    }
                }
            }
            other => {
                return Err(Error::IllegalGenerator {
                    gen: other.to_string(),
                    space: c.space().to_string(),
                })
            }
        }
    }
    Ok(out)
}
