//! Square-free intersection calculus on `(P^1)^n x P^1`.
//!
//! Classes are rational combinations of square-free monomials in the
//! hyperplane pullbacks `H_1, ..., H_{n+1}` (with `H_i^2 = 0` applied
//! eagerly). The fiber variable is `H_{n+1}`; the relative dualizing class is
//! `omega = -2 H_{n+1}` and the sections are `tau_i = H_i + H_{n+1}`.
//! Pushing forward along the projection keeps the monomials divisible by the
//! fiber class and strips it.

use crate::picard::{DivisorClass, Generator, GitWeights, SpaceTag};
use crate::{rat, rat_int, Error, Rat, Result};
use num_traits::Zero;
use serde_json::json;
use std::collections::BTreeMap;
use std::fmt;

/// Formal rational combination of square-free monomials in `H_1..H_nvars`,
/// keyed by the bitmask of the index set.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SquareFreeClass {
    nvars: usize,
    terms: BTreeMap<u64, Rat>,
}

impl SquareFreeClass {
    pub fn zero(nvars: usize) -> Self {
        SquareFreeClass {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, value: Rat) -> Self {
        let mut out = Self::zero(nvars);
        out.insert(0, value);
        out
    }

    /// The generator `H_i` (1-based).
    pub fn generator(nvars: usize, i: usize) -> Result<Self> {
        if i < 1 || i > nvars {
            return Err(Error::IndexOutOfRange { index: i, n: nvars });
        }
        let mut out = Self::zero(nvars);
        out.insert(1 << (i - 1), rat_int(1));
        Ok(out)
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, mask: u64) -> Rat {
        self.terms.get(&mask).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&u64, &Rat)> {
        self.terms.iter()
    }

    fn insert(&mut self, mask: u64, coeff: Rat) {
        if coeff.is_zero() {
            return;
        }
        let entry = self.terms.entry(mask).or_insert_with(Rat::zero);
        *entry += coeff;
        if entry.is_zero() {
            self.terms.remove(&mask);
        }
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.nvars != other.nvars {
            return Err(Error::DimensionMismatch(format!(
                "square-free classes in {} and {} variables",
                self.nvars, other.nvars
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let mut out = self.clone();
        for (mask, c) in other.iter() {
            out.insert(*mask, c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(&rat_int(-1)))
    }

    pub fn scale(&self, factor: &Rat) -> Self {
        if factor.is_zero() {
            return Self::zero(self.nvars);
        }
        SquareFreeClass {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (*m, c * factor))
                .collect(),
        }
    }

    /// Product with `H_i^2 = 0`: overlapping monomials die.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let mut out = Self::zero(self.nvars);
        for (m1, c1) in self.iter() {
            for (m2, c2) in other.iter() {
                if m1 & m2 == 0 {
                    out.insert(m1 | m2, c1 * c2);
                }
            }
        }
        Ok(out)
    }

    /// Pushforward along the fiber projection: keeps monomials divisible by
    /// the last variable and divides them by it.
    pub fn pushforward_pi(&self) -> Self {
        let fiber = 1u64 << (self.nvars - 1);
        let mut out = Self::zero(self.nvars);
        for (mask, c) in self.iter() {
            if mask & fiber != 0 {
                out.insert(mask & !fiber, c.clone());
            }
        }
        out
    }
}

impl fmt::Display for SquareFreeClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (mask, coeff) in &self.terms {
            if first {
                first = false;
            } else {
                write!(f, " + ")?;
            }
            let vars: Vec<String> = (0..self.nvars)
                .filter(|b| mask & (1 << b) != 0)
                .map(|b| format!("H{}", b + 1))
                .collect();
            if vars.is_empty() {
                write!(f, "{coeff}")?;
            } else {
                write!(f, "{}*{}", coeff, vars.join("*"))?;
            }
        }
        Ok(())
    }
}

/// `omega = -2 H_{n+1}` on `(P^1)^n x P^1`.
pub fn omega(n: usize) -> SquareFreeClass {
    let mut out = SquareFreeClass::zero(n + 1);
    out.insert(1 << n, rat_int(-2));
    out
}

/// Section class `tau_i = H_i + H_{n+1}`.
pub fn tau(n: usize, i: usize) -> Result<SquareFreeClass> {
    let mut out = SquareFreeClass::generator(n + 1, i)?;
    out.insert(1 << n, rat_int(1));
    Ok(out)
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum CheckStatus {
    Holds,
    Violated,
    Info,
}

impl CheckStatus {
    pub fn as_str(&self) -> &'static str {
        match self {
            CheckStatus::Holds => "holds",
            CheckStatus::Violated => "violated",
            CheckStatus::Info => "info",
        }
    }
}

#[derive(Clone, Debug)]
pub struct DescentCheck {
    pub name: String,
    pub status: CheckStatus,
    pub witness: Option<String>,
}

/// Outcome of the symbolic descent verification for one weight vector.
#[derive(Clone, Debug)]
pub struct GitDescentReport {
    pub n: usize,
    pub x: String,
    pub checks: Vec<DescentCheck>,
    pub passed: bool,
}

impl GitDescentReport {
    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "n": self.n,
            "x": self.x,
            "passed": self.passed,
            "checks": self.checks.iter().map(|c| json!({
                "name": c.name,
                "status": c.status.as_str(),
                "witness": c.witness,
            })).collect::<Vec<_>>(),
        })
    }
}

/// Verifies the descent computations for the polarization on the GIT
/// quotient: the displayed product and pushforward identities on
/// `(P^1)^n x P^1`, the psi descent `pi_*(-tau_i^2) = -2 H_i`, and the
/// normal form `A(x) = -(n-2)/2 sum x_i psi_i` on the quotient. The square
/// `(tau_i - tau_j)^2` is reported informationally: it is `-2 H_i H_j` as a
/// class upstairs (not zero), while its pushforward vanishes.
pub fn verify_git_descent(x: &GitWeights) -> Result<GitDescentReport> {
    let n = x.n();
    let mut checks = Vec::new();

    let omega_class = omega(n);
    let taus: Vec<SquareFreeClass> = (1..=n).map(|i| tau(n, i)).collect::<Result<_>>()?;

    // L = omega + sum x_i tau_i, and the auxiliary omega + sum tau_i.
    let mut l = omega_class.clone();
    for (i, t) in taus.iter().enumerate() {
        l = l.add(&t.scale(x.entry(i + 1)))?;
    }
    let mut aux = omega_class;
    for t in &taus {
        aux = aux.add(t)?;
    }
    let product = l.mul(&aux)?;

    // Product identity: (omega + sum x tau)(omega + sum tau)
    //                 = (sum x_i H_i)((n-2) H_{n+1} + sum H_i).
    let sum_x_h = {
        let mut acc = SquareFreeClass::zero(n + 1);
        for i in 1..=n {
            acc = acc.add(&SquareFreeClass::generator(n + 1, i)?.scale(x.entry(i)))?;
        }
        acc
    };
    let rhs_factor = {
        let mut acc = SquareFreeClass::generator(n + 1, n + 1)?.scale(&rat_int(n as i64 - 2));
        for i in 1..=n {
            acc = acc.add(&SquareFreeClass::generator(n + 1, i)?)?;
        }
        acc
    };
    let product_rhs = sum_x_h.mul(&rhs_factor)?;
    push_check(
        &mut checks,
        "product-identity",
        product.sub(&product_rhs)?,
    );

    // Pushforward identity: pi_*(product) = (n-2) sum x_i H_i.
    let pushed = product.pushforward_pi();
    let expected = sum_x_h.scale(&rat_int(n as i64 - 2));
    push_check(&mut checks, "pushforward-polarization", pushed.sub(&expected)?);

    // psi descent: pi_*(-tau_i^2) = -2 H_i for every i.
    let mut psi_witness = None;
    for i in 1..=n {
        let lhs = taus[i - 1]
            .mul(&taus[i - 1])?
            .scale(&rat_int(-1))
            .pushforward_pi();
        let rhs = SquareFreeClass::generator(n + 1, i)?.scale(&rat_int(-2));
        let diff = lhs.sub(&rhs)?;
        if !diff.is_zero() {
            psi_witness = Some(format!("i={i}: residue {diff}"));
            break;
        }
    }
    checks.push(DescentCheck {
        name: "psi-descent".into(),
        status: if psi_witness.is_none() {
            CheckStatus::Holds
        } else {
            CheckStatus::Violated
        },
        witness: psi_witness,
    });

    // Normal form on the quotient: A(x) = -(n-2)/2 sum x_i psi_i.
    let space = SpaceTag::git_quotient(x.clone());
    let as_weights = crate::markings::WeightVector::new(x.entries().to_vec())?;
    let (a_class, _) = crate::divisors::class_a(&space, &as_weights)?;
    let mut expected_nf = DivisorClass::zero(space);
    for i in 1..=n {
        expected_nf.add_term(Generator::Psi(i), rat(-(n as i64 - 2), 2) * x.entry(i))?;
    }
    let nf_diff = a_class.sub(&expected_nf)?;
    checks.push(DescentCheck {
        name: "polarization-normal-form".into(),
        status: if nf_diff.is_zero() {
            CheckStatus::Holds
        } else {
            CheckStatus::Violated
        },
        witness: if nf_diff.is_zero() {
            None
        } else {
            Some(nf_diff.to_json().to_string())
        },
    });

    // (tau_1 - tau_2)^2: nonzero upstairs, zero after pushforward.
    let diff12 = taus[0].sub(&taus[1])?;
    let square = diff12.mul(&diff12)?;
    checks.push(DescentCheck {
        name: "tau-difference-square".into(),
        status: CheckStatus::Info,
        witness: Some(format!(
            "(tau_1 - tau_2)^2 = {square} as a class upstairs; its pushforward is {}",
            if square.pushforward_pi().is_zero() {
                "0"
            } else {
                "nonzero"
            }
        )),
    });

    let passed = checks
        .iter()
        .all(|c| c.status != CheckStatus::Violated);
    Ok(GitDescentReport {
        n,
        x: x.to_string(),
        checks,
        passed,
    })
}

fn push_check(checks: &mut Vec<DescentCheck>, name: &str, residue: SquareFreeClass) {
    let ok = residue.is_zero();
    checks.push(DescentCheck {
        name: name.into(),
        status: if ok {
            CheckStatus::Holds
        } else {
            CheckStatus::Violated
        },
        witness: if ok {
            None
        } else {
            Some(residue.to_string())
        },
    });
}
