//! Divisor classes in tautological generators.
//!
//! A [`DivisorClass`] is a sparse rational combination of the generators that
//! exist on its ambient space: `psi_i` everywhere; boundary classes `bd(S)`
//! on `M_{0,n}`; coincidence classes `coinc(i,j)` (light pairs) and nodal
//! classes `nodal(S)` (both sides heavy) on a weighted space; `psi_i` only on
//! a GIT quotient, where `coinc(i,j) = -(psi_i + psi_j)/2` and the nodal
//! classes vanish.
//!
//! `kappa` and `lambda` are rewritten eagerly (`lambda = 0` in genus zero and
//! `kappa = -Dnodal` by the Mumford relation), so every class is in generator
//! normal form. Equality of classes is Picard-group equality, decided by
//! F-curve fingerprints; see [`eq_classes`].

use crate::fcurves;
use crate::markings::{
    boundary_subsets, classify_subset, MarkedSubset, SubsetClass, WeightVector,
};
use crate::morphisms;
use crate::{rat, rat_int, Error, Rat, Result};
use num_traits::Zero;
use serde_json::json;
use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

/// GIT linearization weights: rationals in `(0, 1]` with total exactly 2.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct GitWeights {
    x: Vec<Rat>,
}

impl GitWeights {
    pub fn new(x: Vec<Rat>) -> Result<Self> {
        if x.len() < 4 || x.len() > 62 {
            return Err(Error::InvalidWeights(format!(
                "GIT weights need 4 <= n <= 62 entries, got {}",
                x.len()
            )));
        }
        let one = rat_int(1);
        for (i, w) in x.iter().enumerate() {
            if *w <= Rat::zero() || *w > one {
                return Err(Error::InvalidWeights(format!(
                    "GIT weight x_{} = {} is outside (0, 1]",
                    i + 1,
                    w
                )));
            }
        }
        let total: Rat = x.iter().sum();
        if total != rat_int(2) {
            return Err(Error::InvalidWeights(format!(
                "GIT weights must sum to 2, got {total}"
            )));
        }
        Ok(GitWeights { x })
    }

    pub fn n(&self) -> usize {
        self.x.len()
    }

    pub fn entries(&self) -> &[Rat] {
        &self.x
    }

    /// Weight of marking `i` (1-based).
    pub fn entry(&self, i: usize) -> &Rat {
        &self.x[i - 1]
    }

    pub fn bits_weight(&self, bits: u64) -> Rat {
        let mut total = Rat::zero();
        for (idx, w) in self.x.iter().enumerate() {
            if bits & (1 << idx) != 0 {
                total += w;
            }
        }
        total
    }

    /// Boundary subsets whose weight sum is exactly 1 (on either side).
    /// These are the strictly semistable walls; transport refuses them.
    pub fn atypical_subsets(&self) -> Vec<MarkedSubset> {
        let one = rat_int(1);
        boundary_subsets(self.n())
            .expect("n validated at construction")
            .into_iter()
            .filter(|s| {
                self.bits_weight(s.bits()) == one || self.bits_weight(s.complement_bits()) == one
            })
            .collect()
    }

    pub fn is_typical(&self) -> bool {
        self.atypical_subsets().is_empty()
    }

    /// Bits of the side of `{S, S^c}` with weight sum strictly below 1.
    /// Exactly one side qualifies when the weights are typical.
    pub fn light_side_bits(&self, s: &MarkedSubset) -> Result<u64> {
        let one = rat_int(1);
        let w = self.bits_weight(s.bits());
        if w < one {
            Ok(s.bits())
        } else if w > one {
            let comp = s.complement_bits();
            if self.bits_weight(comp) < one {
                Ok(comp)
            } else {
                Err(Error::AtypicalGitWeights {
                    subset: s.to_string(),
                })
            }
        } else {
            Err(Error::AtypicalGitWeights {
                subset: s.to_string(),
            })
        }
    }
}

impl fmt::Display for GitWeights {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.x.iter().map(|w| w.to_string()).collect();
        write!(f, "{}", parts.join(","))
    }
}

impl fmt::Debug for GitWeights {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GitWeights({self})")
    }
}

impl FromStr for GitWeights {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let x = s
            .split(',')
            .map(crate::parse_rat)
            .collect::<Result<Vec<_>>>()?;
        GitWeights::new(x)
    }
}

/// The ambient space a divisor class lives on.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum SpaceTag {
    ModuliBar { n: usize },
    Hassett { weights: WeightVector },
    GitQuotient { x: GitWeights },
}

impl SpaceTag {
    pub fn moduli_bar(n: usize) -> Result<Self> {
        if !(4..=62).contains(&n) {
            return Err(Error::Unsupported(format!(
                "moduli space needs 4 <= n <= 62 markings, got {n}"
            )));
        }
        Ok(SpaceTag::ModuliBar { n })
    }

    pub fn hassett(weights: WeightVector) -> Result<Self> {
        if weights.n() < 4 {
            return Err(Error::InvalidWeights(format!(
                "weighted space needs at least 4 markings, got {}",
                weights.n()
            )));
        }
        if !weights.is_admissible() {
            return Err(Error::InvalidWeights(format!(
                "weights {weights} are not admissible: total {} <= 2",
                weights.total()
            )));
        }
        Ok(SpaceTag::Hassett { weights })
    }

    pub fn git_quotient(x: GitWeights) -> Self {
        SpaceTag::GitQuotient { x }
    }

    pub fn n(&self) -> usize {
        match self {
            SpaceTag::ModuliBar { n } => *n,
            SpaceTag::Hassett { weights } => weights.n(),
            SpaceTag::GitQuotient { x } => x.n(),
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        match self {
            SpaceTag::ModuliBar { n } => json!({"kind": "modulibar", "n": n}),
            SpaceTag::Hassett { weights } => json!({
                "kind": "hassett",
                "weights": weights.weights().iter().map(|w| w.to_string()).collect::<Vec<_>>(),
            }),
            SpaceTag::GitQuotient { x } => json!({
                "kind": "git",
                "x": x.entries().iter().map(|w| w.to_string()).collect::<Vec<_>>(),
            }),
        }
    }
}

impl fmt::Display for SpaceTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SpaceTag::ModuliBar { n } => write!(f, "M0bar({n})"),
            SpaceTag::Hassett { weights } => write!(f, "Hassett({weights})"),
            SpaceTag::GitQuotient { x } => write!(f, "GIT({x})"),
        }
    }
}

/// A tautological generator of the rational Picard group of a space.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Generator {
    Psi(usize),
    Boundary(MarkedSubset),
    Coincidence(usize, usize),
    Nodal(MarkedSubset),
}

impl Generator {
    /// Normalized coincidence generator; rejects `i == j`.
    pub fn coincidence(i: usize, j: usize) -> Result<Generator> {
        if i == j {
            return Err(Error::InvalidSubset(format!(
                "coincidence class needs two distinct markings, got ({i},{i})"
            )));
        }
        Ok(Generator::Coincidence(i.min(j), i.max(j)))
    }

    pub fn legal_on(&self, space: &SpaceTag) -> bool {
        match (self, space) {
            (Generator::Psi(i), sp) => (1..=sp.n()).contains(i),
            (Generator::Boundary(s), SpaceTag::ModuliBar { n }) => s.n() == *n,
            (Generator::Coincidence(i, j), SpaceTag::Hassett { weights }) => {
                *i >= 1
                    && i < j
                    && *j <= weights.n()
                    && weights.pair_weight(*i, *j) <= rat_int(1)
            }
            (Generator::Nodal(s), SpaceTag::Hassett { weights }) => {
                s.n() == weights.n()
                    && matches!(classify_subset(s, weights), Ok(SubsetClass::Nodal))
            }
            _ => false,
        }
    }

    /// Stable key used in the canonical JSON encoding.
    pub fn key(&self) -> String {
        match self {
            Generator::Psi(i) => format!("psi:{i}"),
            Generator::Boundary(s) => format!("bd:{s}"),
            Generator::Coincidence(i, j) => format!("coinc:{i},{j}"),
            Generator::Nodal(s) => format!("nodal:{s}"),
        }
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Generator::Psi(i) => write!(f, "psi({i})"),
            Generator::Boundary(s) => write!(f, "bd({s})"),
            Generator::Coincidence(i, j) => write!(f, "coinc({i},{j})"),
            Generator::Nodal(s) => write!(f, "nodal({s})"),
        }
    }
}

/// Sparse rational combination of generators on a fixed ambient space.
///
/// Structural equality (`==`) compares coefficient maps; equality in the
/// rational Picard group is [`eq_classes`].
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct DivisorClass {
    space: SpaceTag,
    coeffs: BTreeMap<Generator, Rat>,
}

impl DivisorClass {
    pub fn zero(space: SpaceTag) -> Self {
        DivisorClass {
            space,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn from_terms<I>(space: SpaceTag, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Generator, Rat)>,
    {
        let mut out = DivisorClass::zero(space);
        for (g, c) in terms {
            out.add_term(g, c)?;
        }
        Ok(out)
    }

    pub fn space(&self) -> &SpaceTag {
        &self.space
    }

    /// Adds `coeff * gen`, checking that the generator exists on the space.
    /// Terms cancelling to zero are dropped.
    pub fn add_term(&mut self, gen: Generator, coeff: Rat) -> Result<()> {
        if !gen.legal_on(&self.space) {
            return Err(Error::IllegalGenerator {
                gen: gen.to_string(),
                space: self.space.to_string(),
            });
        }
        self.add_term_unchecked(gen, coeff);
        Ok(())
    }

    fn add_term_unchecked(&mut self, gen: Generator, coeff: Rat) {
        if coeff.is_zero() {
            return;
        }
        debug_assert!(gen.legal_on(&self.space), "illegal generator {gen}");
        let entry = self.coeffs.entry(gen).or_insert_with(Rat::zero);
        *entry += coeff;
        if entry.is_zero() {
            self.coeffs.remove(&gen);
        }
    }

    pub fn coeff(&self, gen: &Generator) -> Rat {
        self.coeffs.get(gen).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Generator, &Rat)> {
        self.coeffs.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.coeffs.len()
    }

    /// Structural zero: no terms at all.
    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    fn check_same_space(&self, other: &Self) -> Result<()> {
        if self.space != other.space {
            return Err(Error::SpaceMismatch {
                expected: self.space.to_string(),
                found: other.space.to_string(),
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same_space(other)?;
        let mut out = self.clone();
        for (g, c) in other.iter() {
            out.add_term_unchecked(*g, c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        self.scale(&rat_int(-1))
    }

    pub fn scale(&self, factor: &Rat) -> Self {
        if factor.is_zero() {
            return DivisorClass::zero(self.space.clone());
        }
        DivisorClass {
            space: self.space.clone(),
            coeffs: self
                .coeffs
                .iter()
                .map(|(g, c)| (*g, c * factor))
                .collect(),
        }
    }

    /// Canonical JSON encoding, sorted by generator key.
    pub fn to_json(&self) -> serde_json::Value {
        let mut items: Vec<(String, String)> = self
            .coeffs
            .iter()
            .map(|(g, c)| (g.key(), c.to_string()))
            .collect();
        items.sort();
        json!({
            "space": self.space.to_json(),
            "coeffs": items
                .into_iter()
                .map(|(gen, val)| json!({"gen": gen, "val": val}))
                .collect::<Vec<_>>(),
        })
    }
}

/// Aggregate classes addressable by name.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Aggregate {
    PsiTotal,
    DeltaNodal,
    DeltaS,
    DeltaR(usize),
    DeltaTotal,
    Kappa,
    Lambda,
}

impl fmt::Display for Aggregate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Aggregate::PsiTotal => write!(f, "Psi"),
            Aggregate::DeltaNodal => write!(f, "Dnodal"),
            Aggregate::DeltaS => write!(f, "Ds"),
            Aggregate::DeltaR(r) => write!(f, "Dr({r})"),
            Aggregate::DeltaTotal => write!(f, "Delta"),
            Aggregate::Kappa => write!(f, "kappa"),
            Aggregate::Lambda => write!(f, "lambda"),
        }
    }
}

/// Expands a named aggregate into generator normal form on `space`.
pub fn expand_aggregate(space: &SpaceTag, agg: Aggregate) -> Result<DivisorClass> {
    let n = space.n();
    match agg {
        Aggregate::Lambda => Ok(DivisorClass::zero(space.clone())),
        Aggregate::Kappa => Ok(expand_aggregate(space, Aggregate::DeltaNodal)?.neg()),
        Aggregate::PsiTotal => {
            let mut out = DivisorClass::zero(space.clone());
            for i in 1..=n {
                out.add_term(Generator::Psi(i), rat_int(1))?;
            }
            Ok(out)
        }
        Aggregate::DeltaNodal => {
            let mut out = DivisorClass::zero(space.clone());
            match space {
                SpaceTag::ModuliBar { .. } => {
                    for s in boundary_subsets(n)? {
                        out.add_term(Generator::Boundary(s), rat_int(1))?;
                    }
                }
                SpaceTag::Hassett { weights } => {
                    for s in boundary_subsets(n)? {
                        if classify_subset(&s, weights)? == SubsetClass::Nodal {
                            out.add_term(Generator::Nodal(s), rat_int(1))?;
                        }
                    }
                }
                SpaceTag::GitQuotient { .. } => {}
            }
            Ok(out)
        }
        Aggregate::DeltaS => {
            let mut out = DivisorClass::zero(space.clone());
            match space {
                SpaceTag::ModuliBar { .. } => {
                    for i in 1..=n {
                        for j in (i + 1)..=n {
                            let s = MarkedSubset::new(n, &[i, j])?;
                            out.add_term(Generator::Boundary(s), rat_int(1))?;
                        }
                    }
                }
                SpaceTag::Hassett { weights } => {
                    for i in 1..=n {
                        for j in (i + 1)..=n {
                            if weights.pair_weight(i, j) <= rat_int(1) {
                                out.add_term(Generator::Coincidence(i, j), rat_int(1))?;
                            }
                        }
                    }
                }
                SpaceTag::GitQuotient { x } => {
                    for i in 1..=n {
                        for j in (i + 1)..=n {
                            out = out.add(&git_coincidence_class(x, i, j)?)?;
                        }
                    }
                }
            }
            Ok(out)
        }
        Aggregate::DeltaR(r) => match space {
            SpaceTag::ModuliBar { .. } => {
                if r < 2 || r > n / 2 {
                    return Err(Error::IllegalAggregate {
                        name: format!("Dr({r})"),
                        space: space.to_string(),
                    });
                }
                let mut out = DivisorClass::zero(space.clone());
                for s in boundary_subsets(n)? {
                    if s.size() == r {
                        out.add_term(Generator::Boundary(s), rat_int(1))?;
                    }
                }
                Ok(out)
            }
            _ => Err(Error::IllegalAggregate {
                name: format!("Dr({r})"),
                space: space.to_string(),
            }),
        },
        Aggregate::DeltaTotal => {
            let s = expand_aggregate(space, Aggregate::DeltaS)?;
            match space {
                SpaceTag::ModuliBar { .. } => expand_aggregate(space, Aggregate::DeltaNodal),
                _ => s.add(&expand_aggregate(space, Aggregate::DeltaNodal)?),
            }
        }
    }
}

/// `coinc(i,j) = -(psi_i + psi_j)/2` on a GIT quotient.
pub fn git_coincidence_class(x: &GitWeights, i: usize, j: usize) -> Result<DivisorClass> {
    let n = x.n();
    if i == j {
        return Err(Error::InvalidSubset(format!(
            "coincidence class needs distinct markings, got ({i},{i})"
        )));
    }
    for idx in [i, j] {
        if idx < 1 || idx > n {
            return Err(Error::IndexOutOfRange { index: idx, n });
        }
    }
    let mut out = DivisorClass::zero(SpaceTag::git_quotient(x.clone()));
    out.add_term(Generator::Psi(i), rat(-1, 2))?;
    out.add_term(Generator::Psi(j), rat(-1, 2))?;
    Ok(out)
}

/// The boundary relation `sum_{i,j in S; k,l notin S} bd(S) -
/// sum_{i,k in S; j,l notin S} bd(S)` on `M_{0,n}`; its F-curve fingerprint
/// vanishes identically.
pub fn keel_relation(n: usize, i: usize, j: usize, k: usize, l: usize) -> Result<DivisorClass> {
    let space = SpaceTag::moduli_bar(n)?;
    let idx = [i, j, k, l];
    for &v in &idx {
        if v < 1 || v > n {
            return Err(Error::IndexOutOfRange { index: v, n });
        }
    }
    for a in 0..4 {
        for b in (a + 1)..4 {
            if idx[a] == idx[b] {
                return Err(Error::InvalidSubset(format!(
                    "indices must be distinct, got ({i},{j},{k},{l})"
                )));
            }
        }
    }
    let mut out = DivisorClass::zero(space);
    let accumulate = |inside: (usize, usize), outside: (usize, usize),
                      sign: i64, out: &mut DivisorClass|
     -> Result<()> {
        let base = (1u64 << (inside.0 - 1)) | (1u64 << (inside.1 - 1));
        let excluded = base | (1u64 << (outside.0 - 1)) | (1u64 << (outside.1 - 1));
        let free: Vec<usize> = (0..n).filter(|b| excluded & (1 << b) == 0).collect();
        for pattern in 0..(1u64 << free.len()) {
            let mut bits = base;
            for (pos, b) in free.iter().enumerate() {
                if pattern & (1 << pos) != 0 {
                    bits |= 1 << b;
                }
            }
            let s = MarkedSubset::from_bits(n, bits)?;
            out.add_term(Generator::Boundary(s), rat_int(sign))?;
        }
        Ok(())
    };
    accumulate((i, j), (k, l), 1, &mut out)?;
    accumulate((i, k), (j, l), -1, &mut out)?;
    Ok(out)
}

/// Coefficient of `Dr(r)` in the boundary expansion of `kappa + psi` on
/// `M_{0,n}`: `(r(n-r) - n + 1)/(n - 1)`.
pub fn positivity_coefficient(n: usize, r: usize) -> Rat {
    let n = n as i64;
    let r = r as i64;
    rat(r * (n - r) - n + 1, n - 1)
}

/// `kappa + psi - sum_r coeff(n,r) * Dr(r)` on `M_{0,n}`, fully expanded.
/// The result is zero in the Picard group (fingerprint identically zero).
pub fn positivity_relation(n: usize) -> Result<DivisorClass> {
    let space = SpaceTag::moduli_bar(n)?;
    let mut out = expand_aggregate(&space, Aggregate::Kappa)?
        .add(&expand_aggregate(&space, Aggregate::PsiTotal)?)?;
    for r in 2..=(n / 2) {
        let dr = expand_aggregate(&space, Aggregate::DeltaR(r))?;
        out = out.sub(&dr.scale(&positivity_coefficient(n, r)))?;
    }
    Ok(out)
}

/// Equality in the rational Picard group.
///
/// On `M_{0,n}` classes are compared through their F-curve fingerprints; on a
/// weighted space both sides are pulled back along the reduction morphism
/// first (pullback along a birational morphism to a normal target is
/// injective on rational divisor classes); on a GIT quotient the psi
/// coefficient vectors are compared directly.
pub fn eq_classes(c1: &DivisorClass, c2: &DivisorClass) -> Result<bool> {
    if c1.space() != c2.space() {
        return Err(Error::SpaceMismatch {
            expected: c1.space().to_string(),
            found: c2.space().to_string(),
        });
    }
    match c1.space() {
        SpaceTag::ModuliBar { .. } => {
            let diff = c1.sub(c2)?;
            Ok(fcurves::fingerprint(&diff)?.iter().all(|d| d.is_zero()))
        }
        SpaceTag::Hassett { weights } => {
            let f = morphisms::ReductionMap::new(weights.n(), weights.clone())?;
            let diff = c1.sub(c2)?;
            let up = morphisms::pullback(&f, &diff)?;
            Ok(fcurves::fingerprint(&up)?.iter().all(|d| d.is_zero()))
        }
        SpaceTag::GitQuotient { .. } => Ok(c1.sub(c2)?.is_zero()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn m0(n: usize) -> SpaceTag {
        SpaceTag::moduli_bar(n).unwrap()
    }

    fn hassett(entries: &[(i64, i64)]) -> SpaceTag {
        SpaceTag::hassett(
            WeightVector::new(entries.iter().map(|&(p, q)| rat(p, q)).collect()).unwrap(),
        )
        .unwrap()
    }

    fn git(entries: &[(i64, i64)]) -> GitWeights {
        GitWeights::new(entries.iter().map(|&(p, q)| rat(p, q)).collect()).unwrap()
    }

    #[test]
    fn git_weights_validation() {
        assert!(GitWeights::new(vec![rat(1, 2); 4]).is_ok());
        assert!(GitWeights::new(vec![rat(1, 2); 5]).is_err(), "sum 5/2");
        assert!(GitWeights::new(vec![rat(1, 3); 6]).is_ok());
        let x = git(&[(1, 2); 4]);
        assert!(!x.is_typical());
        assert_eq!(x.atypical_subsets().len(), 3);
        let y = git(&[(2, 5); 5]);
        assert!(y.is_typical());
    }

    #[test]
    fn generator_legality() {
        let bar = m0(5);
        let h = hassett(&[(1, 1), (1, 1), (1, 10), (1, 10), (1, 10)]);
        let s34 = MarkedSubset::new(5, &[3, 4]).unwrap();
        assert!(Generator::Boundary(s34).legal_on(&bar));
        assert!(!Generator::Boundary(s34).legal_on(&h));
        assert!(Generator::Coincidence(3, 4).legal_on(&h));
        assert!(!Generator::Coincidence(1, 2).legal_on(&h), "weight 2 > 1");
        let s13 = MarkedSubset::new(5, &[1, 3]).unwrap();
        assert!(Generator::Nodal(s13).legal_on(&h));
        assert!(!Generator::Nodal(s34).legal_on(&h), "{{3,4}} is a light pair");
        assert!(Generator::Psi(5).legal_on(&bar));
        assert!(!Generator::Psi(6).legal_on(&bar));
        assert!(Generator::coincidence(4, 3).unwrap() == Generator::Coincidence(3, 4));
        assert!(Generator::coincidence(3, 3).is_err());
    }

    #[test]
    fn class_arithmetic_basics() {
        let space = m0(5);
        let mut a = DivisorClass::zero(space.clone());
        a.add_term(Generator::Psi(1), rat_int(2)).unwrap();
        a.add_term(Generator::Psi(1), rat_int(-2)).unwrap();
        assert!(a.is_zero(), "cancelling terms are dropped");
        a.add_term(Generator::Psi(2), rat(1, 3)).unwrap();
        let b = a.scale(&rat_int(3));
        assert_eq!(b.coeff(&Generator::Psi(2)), rat_int(1));
        assert!(a.sub(&a).unwrap().is_zero());
        let other = DivisorClass::zero(m0(6));
        assert!(a.add(&other).is_err(), "space mismatch");
    }

    #[test]
    fn kappa_on_moduli_bar_five() {
        let k = expand_aggregate(&m0(5), Aggregate::Kappa).unwrap();
        assert_eq!(k.num_terms(), 10);
        for (g, c) in k.iter() {
            assert!(matches!(g, Generator::Boundary(_)));
            assert_eq!(*c, rat_int(-1));
        }
    }

    #[test]
    fn lambda_is_zero_everywhere() {
        for space in [
            m0(6),
            hassett(&[(1, 2); 6]),
            SpaceTag::git_quotient(git(&[(2, 5); 5])),
        ] {
            assert!(expand_aggregate(&space, Aggregate::Lambda).unwrap().is_zero());
        }
    }

    #[test]
    fn git_aggregates() {
        let x = git(&[(2, 5); 5]);
        let space = SpaceTag::git_quotient(x.clone());
        assert!(expand_aggregate(&space, Aggregate::DeltaNodal).unwrap().is_zero());
        // Mumford relation: kappa = -Dnodal = 0 here as well.
        assert!(expand_aggregate(&space, Aggregate::Kappa).unwrap().is_zero());
        // Summing coinc(i,j) = -(psi_i+psi_j)/2 over pairs gives
        // -(n-1)/2 * sum psi_i.
        let ds = expand_aggregate(&space, Aggregate::DeltaS).unwrap();
        let psi = expand_aggregate(&space, Aggregate::PsiTotal).unwrap();
        assert_eq!(ds, psi.scale(&rat(-4, 2)));
    }

    #[test]
    fn git_coincidence_examples() {
        let x = git(&[(2, 5); 5]);
        let c = git_coincidence_class(&x, 1, 2).unwrap();
        assert_eq!(c.coeff(&Generator::Psi(1)), rat(-1, 2));
        assert_eq!(c.coeff(&Generator::Psi(2)), rat(-1, 2));
        assert_eq!(c.num_terms(), 2);
        assert_eq!(c, git_coincidence_class(&x, 2, 1).unwrap());
        assert!(git_coincidence_class(&x, 2, 2).is_err());
    }

    #[test]
    fn hassett_delta_s_may_be_empty() {
        // All pair weights exceed 1: no coincidence classes at all.
        let space = hassett(&[(1, 1), (1, 1), (1, 1), (3, 4), (3, 4)]);
        assert!(expand_aggregate(&space, Aggregate::DeltaS).unwrap().is_zero());
    }

    #[test]
    fn mumford_relation_on_every_space() {
        for space in [
            m0(5),
            m0(7),
            hassett(&[(1, 1), (1, 1), (1, 10), (1, 10), (1, 10)]),
            hassett(&[(1, 2); 6]),
            SpaceTag::git_quotient(git(&[(2, 5); 5])),
        ] {
            let k = expand_aggregate(&space, Aggregate::Kappa).unwrap();
            let dn = expand_aggregate(&space, Aggregate::DeltaNodal).unwrap();
            assert!(k.add(&dn).unwrap().is_zero());
        }
    }

    /// Independent enumeration of the subsets entering a Keel relation term.
    fn subsets_with(n: usize, inside: &[usize], outside: &[usize]) -> Vec<u64> {
        let mut out = Vec::new();
        for bits in 1u64..(1 << n) {
            let size = bits.count_ones() as usize;
            if size < 2 || size > n - 2 {
                continue;
            }
            if inside.iter().all(|i| bits & (1 << (i - 1)) != 0)
                && outside.iter().all(|i| bits & (1 << (i - 1)) == 0)
            {
                out.push(bits);
            }
        }
        out
    }

    #[test]
    fn keel_relation_small_cases() {
        let r4 = keel_relation(4, 1, 2, 3, 4).unwrap();
        let d12 = Generator::Boundary(MarkedSubset::new(4, &[1, 2]).unwrap());
        let d13 = Generator::Boundary(MarkedSubset::new(4, &[1, 3]).unwrap());
        assert_eq!(r4.coeff(&d12), rat_int(1));
        assert_eq!(r4.coeff(&d13), rat_int(-1));
        assert_eq!(r4.num_terms(), 2);

        // n = 5: the first sum ranges over {1,2} and {1,2,5}.
        let first = subsets_with(5, &[1, 2], &[3, 4]);
        assert_eq!(
            first
                .iter()
                .map(|&b| MarkedSubset::from_bits(5, b).unwrap().to_string())
                .collect::<Vec<_>>(),
            vec!["{1,2}", "{3,4}"],
            "{{1,2,5}} is stored via its complement {{3,4}}"
        );
        let r5 = keel_relation(5, 1, 2, 3, 4).unwrap();
        for bits in first {
            let s = MarkedSubset::from_bits(5, bits).unwrap();
            assert_eq!(r5.coeff(&Generator::Boundary(s)), rat_int(1));
        }
        for bits in subsets_with(5, &[1, 3], &[2, 4]) {
            let s = MarkedSubset::from_bits(5, bits).unwrap();
            assert_eq!(r5.coeff(&Generator::Boundary(s)), rat_int(-1));
        }
        assert!(keel_relation(5, 1, 1, 3, 4).is_err());
        assert!(keel_relation(5, 1, 2, 3, 9).is_err());
    }

    #[test]
    fn positivity_relation_instantiations() {
        assert_eq!(positivity_coefficient(5, 2), rat(1, 2));
        assert_eq!(positivity_coefficient(6, 2), rat(3, 5));
        assert_eq!(positivity_coefficient(6, 3), rat(4, 5));
        // kappa + psi has boundary coefficient -1 everywhere, so the n = 5
        // relation reads kappa + psi = Dr(2)/2 after moving terms across.
        let n5 = positivity_relation(5).unwrap();
        for s in boundary_subsets(5).unwrap() {
            assert_eq!(n5.coeff(&Generator::Boundary(s)), rat(-3, 2));
        }
        for i in 1..=5 {
            assert_eq!(n5.coeff(&Generator::Psi(i)), rat_int(1));
        }
    }

    #[test]
    fn eq_classes_examples() {
        // kappa + psi = Dr(2)/2 on M_{0,5} in the Picard group, although the
        // coefficient maps differ.
        let space = m0(5);
        let kp = expand_aggregate(&space, Aggregate::Kappa)
            .unwrap()
            .add(&expand_aggregate(&space, Aggregate::PsiTotal).unwrap())
            .unwrap();
        let half_d2 = expand_aggregate(&space, Aggregate::DeltaR(2))
            .unwrap()
            .scale(&rat(1, 2));
        assert_ne!(kp, half_d2);
        assert!(eq_classes(&kp, &half_d2).unwrap());

        let zero = DivisorClass::zero(space.clone());
        assert!(eq_classes(&zero, &keel_relation(5, 1, 2, 3, 4).unwrap()).unwrap());

        let psi1 = DivisorClass::from_terms(
            space.clone(),
            [(Generator::Psi(1), rat_int(1))],
        )
        .unwrap();
        let psi2 = DivisorClass::from_terms(
            space.clone(),
            [(Generator::Psi(2), rat_int(1))],
        )
        .unwrap();
        assert!(!eq_classes(&psi1, &psi2).unwrap());

        let other = DivisorClass::zero(m0(6));
        assert!(eq_classes(&zero, &other).is_err());
    }

    #[test]
    fn json_encoding_is_sorted_and_stable() {
        let space = m0(5);
        let mut c = DivisorClass::zero(space);
        c.add_term(Generator::Psi(3), rat(1, 2)).unwrap();
        c.add_term(
            Generator::Boundary(MarkedSubset::new(5, &[1, 2]).unwrap()),
            rat_int(-2),
        )
        .unwrap();
        let v = c.to_json();
        assert_eq!(
            v.to_string(),
            r#"{"coeffs":[{"gen":"bd:{1,2}","val":"-2"},{"gen":"psi:3","val":"1/2"}],"space":{"kind":"modulibar","n":5}}"#
        );
    }

    proptest! {
        #[test]
        fn vector_space_axioms(
            coeffs in proptest::collection::vec((-20i64..=20, 1i64..=12, 1usize..=5), 1..6),
            factor_num in -6i64..=6,
            factor_den in 1i64..=4,
        ) {
            let space = m0(5);
            let mut a = DivisorClass::zero(space.clone());
            let mut b = DivisorClass::zero(space.clone());
            for (idx, (p, q, i)) in coeffs.iter().enumerate() {
                let target = if idx % 2 == 0 { &mut a } else { &mut b };
                target.add_term(Generator::Psi(*i), rat(*p, *q)).unwrap();
            }
            let f = rat(factor_num, factor_den);
            prop_assert_eq!(a.add(&b).unwrap(), b.add(&a).unwrap());
            prop_assert_eq!(
                a.add(&b).unwrap().scale(&f),
                a.scale(&f).add(&b.scale(&f)).unwrap()
            );
            prop_assert!(a.sub(&a).unwrap().is_zero());
        }
    }
}
