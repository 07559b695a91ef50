//! Constructors for the named divisor classes.
//!
//! The weight arguments of `A`, `B` and `C` act as formal coefficients and
//! may be evaluated on any ambient space with the same number of markings; a
//! pair term whose coincidence class does not exist on the ambient space
//! contributes zero and is reported through a [`Warning`] rather than an
//! error. On a GIT quotient the pair classes are rewritten through
//! `coinc(i,j) = -(psi_i + psi_j)/2`, which is valid for every pair and
//! brings `A(x)` into the normal form `-(n-2)/2 * sum x_i psi_i`.

use crate::markings::WeightVector;
use crate::morphisms;
use crate::picard::{expand_aggregate, Aggregate, DivisorClass, Generator, GitWeights, SpaceTag};
use crate::{rat, rat_int, Error, Rat, Result};
use num_traits::One;
use std::fmt;

/// A structured note that an addressed generator does not exist on the
/// ambient space and contributed zero.
#[derive(Clone, Debug)]
pub struct Warning {
    pub generator: String,
    pub space: String,
    pub reason: String,
}

impl fmt::Display for Warning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} does not exist on {} ({}); contributed 0",
            self.generator, self.space, self.reason
        )
    }
}

fn check_arity(space: &SpaceTag, w: &WeightVector) -> Result<()> {
    if space.n() != w.n() {
        return Err(Error::DimensionMismatch(format!(
            "weight argument of length {} on {space}",
            w.n()
        )));
    }
    Ok(())
}

/// Adds `coeff * coinc(i,j)` in whatever form the space supports.
fn add_pair_term(
    out: &mut DivisorClass,
    warnings: &mut Vec<Warning>,
    i: usize,
    j: usize,
    coeff: Rat,
) -> Result<()> {
    match out.space().clone() {
        SpaceTag::ModuliBar { n } => {
            let s = crate::markings::MarkedSubset::new(n, &[i, j])?;
            out.add_term(Generator::Boundary(s), coeff)?;
        }
        SpaceTag::Hassett { weights } => {
            let gen = Generator::coincidence(i, j)?;
            if weights.pair_weight(i, j) <= rat_int(1) {
                out.add_term(gen, coeff)?;
            } else {
                warnings.push(Warning {
                    generator: gen.to_string(),
                    space: out.space().to_string(),
                    reason: format!(
                        "pair weight {} exceeds 1",
                        weights.pair_weight(i, j)
                    ),
                });
            }
        }
        SpaceTag::GitQuotient { .. } => {
            out.add_term(Generator::Psi(i), -coeff.clone() / rat_int(2))?;
            out.add_term(Generator::Psi(j), -coeff / rat_int(2))?;
        }
    }
    Ok(())
}

/// Whether the pair `{i,j}` enters the formal pair sums of `A`, `B`, `C`.
/// On a GIT quotient the rewriting is valid for every pair; elsewhere only
/// light pairs of the weight argument appear.
fn pair_included(space: &SpaceTag, w: &WeightVector, i: usize, j: usize) -> bool {
    match space {
        SpaceTag::GitQuotient { .. } => true,
        _ => w.pair_weight(i, j) <= rat_int(1),
    }
}

/// `A(a) = kappa + psi + sum_{i<j light} (a_i + a_j) coinc(i,j)`.
pub fn class_a(space: &SpaceTag, w: &WeightVector) -> Result<(DivisorClass, Vec<Warning>)> {
    check_arity(space, w)?;
    let mut warnings = Vec::new();
    let mut out = expand_aggregate(space, Aggregate::Kappa)?
        .add(&expand_aggregate(space, Aggregate::PsiTotal)?)?;
    let n = space.n();
    for i in 1..=n {
        for j in (i + 1)..=n {
            if pair_included(space, w, i, j) {
                add_pair_term(&mut out, &mut warnings, i, j, w.pair_weight(i, j))?;
            }
        }
    }
    Ok((out, warnings))
}

/// `B(a) = kappa + sum (2a_i - a_i^2) psi_i + sum_{i<j light} 2 a_i a_j coinc(i,j)`.
pub fn class_b(space: &SpaceTag, w: &WeightVector) -> Result<(DivisorClass, Vec<Warning>)> {
    check_arity(space, w)?;
    let mut warnings = Vec::new();
    let mut out = expand_aggregate(space, Aggregate::Kappa)?;
    let n = space.n();
    for i in 1..=n {
        let a = w.weight(i);
        out.add_term(Generator::Psi(i), rat_int(2) * a - a * a)?;
    }
    for i in 1..=n {
        for j in (i + 1)..=n {
            if pair_included(space, w, i, j) {
                let coeff = rat_int(2) * w.weight(i) * w.weight(j);
                add_pair_term(&mut out, &mut warnings, i, j, coeff)?;
            }
        }
    }
    Ok((out, warnings))
}

/// `C_i(a) = (1 - a_i) psi_i + sum_{j != i, light} a_j coinc(i,j)`.
pub fn class_c(
    space: &SpaceTag,
    w: &WeightVector,
    i: usize,
) -> Result<(DivisorClass, Vec<Warning>)> {
    check_arity(space, w)?;
    let n = space.n();
    if i < 1 || i > n {
        return Err(Error::IndexOutOfRange { index: i, n });
    }
    let mut warnings = Vec::new();
    let mut out = DivisorClass::zero(space.clone());
    out.add_term(Generator::Psi(i), Rat::one() - w.weight(i))?;
    for j in 1..=n {
        if j != i && pair_included(space, w, i, j) {
            add_pair_term(&mut out, &mut warnings, i, j, w.weight(j).clone())?;
        }
    }
    Ok((out, warnings))
}

/// `C(a) = sum_i C_i(a)`, with pair coefficient `a_i + a_j`.
pub fn class_c_total(space: &SpaceTag, w: &WeightVector) -> Result<(DivisorClass, Vec<Warning>)> {
    check_arity(space, w)?;
    let mut out = DivisorClass::zero(space.clone());
    let mut warnings = Vec::new();
    let n = space.n();
    for i in 1..=n {
        out.add_term(Generator::Psi(i), Rat::one() - w.weight(i))?;
    }
    for i in 1..=n {
        for j in (i + 1)..=n {
            if pair_included(space, w, i, j) {
                add_pair_term(&mut out, &mut warnings, i, j, w.pair_weight(i, j))?;
            }
        }
    }
    Ok((out, warnings))
}

/// The canonical class in its genus-zero form `psi - 2 Dnodal`.
pub fn class_k(space: &SpaceTag) -> Result<DivisorClass> {
    expand_aggregate(space, Aggregate::PsiTotal)?
        .sub(&expand_aggregate(space, Aggregate::DeltaNodal)?.scale(&rat_int(2)))
}

/// The upstairs log-canonical class on `M_{0,n}`:
/// `K + sum_{light pairs} (a_i + a_j) bd({i,j}) + Delta_rest`, where
/// `Delta_rest` is the total boundary minus the light pairs.
pub fn log_canonical_upstairs(n: usize, w: &WeightVector) -> Result<DivisorClass> {
    let space = SpaceTag::moduli_bar(n)?;
    check_arity(&space, w)?;
    let mut out = class_k(&space)?.add(&expand_aggregate(&space, Aggregate::DeltaTotal)?)?;
    for i in 1..=n {
        for j in (i + 1)..=n {
            let pw = w.pair_weight(i, j);
            if pw <= rat_int(1) {
                let s = crate::markings::MarkedSubset::new(n, &[i, j])?;
                out.add_term(Generator::Boundary(s), pw - rat_int(1))?;
            }
        }
    }
    Ok(out)
}

/// Pullback of the GIT polarization class to `M_{0,n}`: `A(x)` on the
/// quotient is brought to the normal form `-(n-2)/2 sum x_i psi_i` and
/// transported along the reduction to the quotient. Atypical weights are
/// rejected with the violating subset.
pub fn git_polarization_pullback(x: &GitWeights) -> Result<DivisorClass> {
    if let Some(first) = x.atypical_subsets().first() {
        return Err(Error::AtypicalGitWeights {
            subset: first.to_string(),
        });
    }
    let space = SpaceTag::git_quotient(x.clone());
    let as_weights = WeightVector::new(x.entries().to_vec())?;
    let (polarization, _) = class_a(&space, &as_weights)?;
    // Normal form sanity: coefficient of psi_i is -(n-2)/2 * x_i.
    debug_assert!({
        let n = x.n() as i64;
        (1..=x.n()).all(|i| {
            polarization.coeff(&Generator::Psi(i)) == rat(-(n - 2), 2) * x.entry(i)
        })
    });
    morphisms::git_reduction_pullback(x, &polarization)
}
