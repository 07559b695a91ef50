//! F-nefness certificates and exact cone-membership probes.
//!
//! Certificates are deliberately labeled "f-nef": they assert nonnegativity
//! against every F-curve, nothing stronger. Membership works in fingerprint
//! coordinates (one per F-curve), so no basis of the Picard group has to be
//! chosen; rank deficiency of the fingerprint map is harmless for
//! feasibility.

use crate::fcurves::{fcurves_cached, fingerprint, FCurve};
use crate::lp::{solve_nonneg, LpOutcome};
use crate::morphisms::{git_reduction_pullback, pullback, ReductionMap};
use crate::picard::{DivisorClass, SpaceTag};
use crate::{Error, Rat, Result};
use num_traits::Zero;
use serde_json::json;

/// The label every nefness certificate carries.
pub const CERTIFICATE_LABEL: &str = "f-nef";

/// Full list of F-curve degrees of a class with the minimum and the
/// violating curves.
#[derive(Clone, Debug)]
pub struct NefCertificate {
    n: usize,
    fingerprint: Vec<Rat>,
    min_degree: Rat,
    violators: Vec<FCurve>,
}

impl NefCertificate {
    pub fn label(&self) -> &'static str {
        CERTIFICATE_LABEL
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn fingerprint(&self) -> &[Rat] {
        &self.fingerprint
    }

    pub fn min_degree(&self) -> &Rat {
        &self.min_degree
    }

    pub fn violators(&self) -> &[FCurve] {
        &self.violators
    }

    pub fn is_fnef(&self) -> bool {
        self.violators.is_empty()
    }

    pub fn to_json(&self, verbose: bool) -> serde_json::Value {
        let mut value = json!({
            "certificate": CERTIFICATE_LABEL,
            "n": self.n,
            "curves": self.fingerprint.len(),
            "min_degree": self.min_degree.to_string(),
            "f_nef": self.is_fnef(),
            "violators": self.violators.iter().map(|f| f.to_string()).collect::<Vec<_>>(),
        });
        if verbose {
            value["fingerprint"] = json!(self
                .fingerprint
                .iter()
                .map(|d| d.to_string())
                .collect::<Vec<_>>());
        }
        value
    }
}

/// Transports a class to `M_{0,n}` if needed: weighted-space classes pull
/// back along the reduction morphism, GIT classes along the quotient map.
/// A class is nef downstairs exactly when its pullback is nef, since every
/// curve downstairs is a pushforward.
pub fn on_moduli_bar(c: &DivisorClass) -> Result<DivisorClass> {
    match c.space() {
        SpaceTag::ModuliBar { .. } => Ok(c.clone()),
        SpaceTag::Hassett { weights } => {
            let f = ReductionMap::new(weights.n(), weights.clone())?;
            pullback(&f, c)
        }
        SpaceTag::GitQuotient { x } => git_reduction_pullback(x, c),
    }
}

/// Full F-degree sweep of a class (after transport to `M_{0,n}`), with
/// violators in enumeration order.
pub fn fnef_certificate(c: &DivisorClass) -> Result<NefCertificate> {
    let upstairs = on_moduli_bar(c)?;
    let n = upstairs.space().n();
    let fp = fingerprint(&upstairs)?;
    let curves = fcurves_cached(n)?;
    let min_degree = fp
        .iter()
        .min()
        .cloned()
        .unwrap_or_else(Rat::zero);
    let violators: Vec<FCurve> = fp
        .iter()
        .zip(curves.iter())
        .filter(|(d, _)| **d < Rat::zero())
        .map(|(_, f)| *f)
        .collect();
    Ok(NefCertificate {
        n,
        fingerprint: fp,
        min_degree,
        violators,
    })
}

/// Nonnegative coefficients expressing the target in the supplied
/// generators, exactly.
#[derive(Clone, Debug)]
pub struct MembershipCertificate {
    pub coefficients: Vec<Rat>,
}

/// Exact Farkas separation: `y . fp(g) <= 0` for every supplied generator
/// and `y . fp(target) > 0`.
#[derive(Clone, Debug)]
pub struct FarkasCertificate {
    pub vector: Vec<Rat>,
}

/// Result of a membership probe. `NotFound` only refutes membership in the
/// cone of the *supplied* generators.
#[derive(Clone, Debug)]
pub enum Membership {
    Found(MembershipCertificate),
    NotFound(FarkasCertificate),
}

impl Membership {
    pub fn to_json(&self) -> serde_json::Value {
        match self {
            Membership::Found(c) => json!({
                "result": "certificate",
                "coefficients": c.coefficients.iter().map(|v| v.to_string()).collect::<Vec<_>>(),
            }),
            Membership::NotFound(f) => json!({
                "result": "not-found",
                "farkas": f.vector.iter().map(|v| v.to_string()).collect::<Vec<_>>(),
            }),
        }
    }
}

/// Exact LP probe: is the target a nonnegative combination of the supplied
/// generators in fingerprint coordinates?
///
/// A returned certificate is re-multiplied against the target before it is
/// handed back; a `NotFound` carries a Farkas vector that separates exactly.
pub fn cone_membership(target: &DivisorClass, generators: &[DivisorClass]) -> Result<Membership> {
    let n = match target.space() {
        SpaceTag::ModuliBar { n } => *n,
        other => {
            return Err(Error::SpaceMismatch {
                expected: "M0bar(n)".into(),
                found: other.to_string(),
            })
        }
    };
    let mut columns = Vec::with_capacity(generators.len());
    for g in generators {
        match g.space() {
            SpaceTag::ModuliBar { n: gn } if *gn == n => {}
            other => {
                return Err(Error::DimensionMismatch(format!(
                    "generator on {other}, target on M0bar({n})"
                )))
            }
        }
        columns.push(fingerprint(g)?);
    }
    let rhs = fingerprint(target)?;

    // Trivial membership first: a target that is one of the generators (in
    // fingerprint coordinates) gets the unit certificate, not whatever
    // combination the pivot order happens to reach.
    if let Some(j) = columns.iter().position(|col| *col == rhs) {
        let mut mu = vec![Rat::zero(); columns.len()];
        mu[j] = num_traits::One::one();
        return Ok(Membership::Found(MembershipCertificate { coefficients: mu }));
    }

    match solve_nonneg(&columns, &rhs)? {
        LpOutcome::Feasible(mu) => {
            // Independent re-multiplication check against the target.
            let mut recombined = vec![Rat::zero(); rhs.len()];
            for (j, col) in columns.iter().enumerate() {
                if !mu[j].is_zero() {
                    for (acc, v) in recombined.iter_mut().zip(col) {
                        *acc += &mu[j] * v;
                    }
                }
            }
            if recombined != rhs {
                return Err(Error::IdentityViolation {
                    identity: "membership certificate re-multiplication".into(),
                    witness: "recombined fingerprint differs from target".into(),
                });
            }
            Ok(Membership::Found(MembershipCertificate { coefficients: mu }))
        }
        LpOutcome::Infeasible(y) => {
            for (j, col) in columns.iter().enumerate() {
                let dot: Rat = y.iter().zip(col).map(|(a, b)| a * b).sum();
                if dot > Rat::zero() {
                    return Err(Error::IdentityViolation {
                        identity: "Farkas certificate".into(),
                        witness: format!("generator {j} not separated"),
                    });
                }
            }
            let dot: Rat = y.iter().zip(&rhs).map(|(a, b)| a * b).sum();
            if dot <= Rat::zero() {
                return Err(Error::IdentityViolation {
                    identity: "Farkas certificate".into(),
                    witness: "target not separated".into(),
                });
            }
            Ok(Membership::NotFound(FarkasCertificate { vector: y }))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::divisors::{class_a, class_c_total, git_polarization_pullback};
    use crate::markings::WeightVector;
    use crate::picard::{expand_aggregate, Aggregate, Generator, GitWeights};
    use crate::{rat, rat_int};

    fn weights(entries: &[(i64, i64)]) -> WeightVector {
        WeightVector::new(entries.iter().map(|&(p, q)| rat(p, q)).collect()).unwrap()
    }

    #[test]
    fn zero_class_certificate() {
        let c = DivisorClass::zero(SpaceTag::moduli_bar(6).unwrap());
        let cert = fnef_certificate(&c).unwrap();
        assert!(cert.is_fnef());
        assert!(cert.min_degree().is_zero());
        assert_eq!(cert.fingerprint().len(), 65);
        assert_eq!(cert.label(), "f-nef");
    }

    #[test]
    fn negative_psi_has_violators() {
        let space = SpaceTag::moduli_bar(5).unwrap();
        let c = DivisorClass::from_terms(space, [(Generator::Psi(1), rat_int(-1))]).unwrap();
        let cert = fnef_certificate(&c).unwrap();
        assert!(!cert.is_fnef());
        assert_eq!(cert.min_degree(), &rat_int(-1));
        // Violators are exactly the curves isolating marking 1 on a leg.
        assert!(!cert.violators().is_empty());
        for f in cert.violators() {
            assert!(f
                .block_masks()
                .iter()
                .any(|m| *m == 1));
        }
    }

    #[test]
    fn doubled_nodal_minus_psi_is_fnef_on_uniform_half() {
        // 2 Dnodal - psi on the (1/2)^6 space is nef; its pullback sweeps
        // 65 F-curves without a violator.
        let w = weights(&[(1, 2); 6]);
        let space = SpaceTag::hassett(w).unwrap();
        let c = expand_aggregate(&space, Aggregate::DeltaNodal)
            .unwrap()
            .scale(&rat_int(2))
            .sub(&expand_aggregate(&space, Aggregate::PsiTotal).unwrap())
            .unwrap();
        let cert = fnef_certificate(&c).unwrap();
        assert!(cert.is_fnef(), "violators: {:?}", cert.violators());
        assert!(cert.min_degree().is_zero());
    }

    #[test]
    fn ample_class_pullback_is_fnef() {
        let w = weights(&[(1, 2); 6]);
        let space = SpaceTag::hassett(w.clone()).unwrap();
        let (a, _) = class_a(&space, &w).unwrap();
        let cert = fnef_certificate(&a).unwrap();
        assert!(cert.is_fnef());
        assert!(*cert.min_degree() >= Rat::zero());
    }

    #[test]
    fn membership_of_a_supplied_generator_is_trivial() {
        let space = SpaceTag::moduli_bar(5).unwrap();
        let gens: Vec<DivisorClass> = vec![
            expand_aggregate(&space, Aggregate::PsiTotal).unwrap(),
            expand_aggregate(&space, Aggregate::DeltaTotal).unwrap(),
        ];
        match cone_membership(&gens[1], &gens).unwrap() {
            Membership::Found(c) => {
                assert_eq!(c.coefficients, vec![rat_int(0), rat_int(1)]);
            }
            other => panic!("expected certificate, got {other:?}"),
        }
    }

    #[test]
    fn membership_finds_scaled_generator() {
        // psi + Ds = (3/2) C((1/3)^6) pulled back from the (1/2)^6 space.
        let ambient = weights(&[(1, 2); 6]);
        let space = SpaceTag::hassett(ambient).unwrap();
        let (ct, _) = class_c_total(&space, &weights(&[(1, 3); 6])).unwrap();
        let target_class = expand_aggregate(&space, Aggregate::PsiTotal)
            .unwrap()
            .add(&expand_aggregate(&space, Aggregate::DeltaS).unwrap())
            .unwrap();
        let target = on_moduli_bar(&target_class).unwrap();
        let gens = vec![on_moduli_bar(&ct).unwrap()];
        match cone_membership(&target, &gens).unwrap() {
            Membership::Found(c) => assert_eq!(c.coefficients, vec![rat(3, 2)]),
            other => panic!("expected certificate, got {other:?}"),
        }
    }

    #[test]
    fn not_found_carries_exact_farkas_vector() {
        let space = SpaceTag::moduli_bar(5).unwrap();
        let psi = expand_aggregate(&space, Aggregate::PsiTotal).unwrap();
        let target = psi.neg();
        let gens = vec![psi];
        match cone_membership(&target, &gens).unwrap() {
            Membership::NotFound(f) => {
                assert_eq!(f.vector.len(), 10);
            }
            other => panic!("expected not-found, got {other:?}"),
        }
    }

    #[test]
    fn git_pullback_membership_probe() {
        let x = GitWeights::new(vec![rat(2, 5); 5]).unwrap();
        let target = git_polarization_pullback(&x).unwrap();
        assert!(fnef_certificate(&target).unwrap().is_fnef());
        // Probe against pullbacks of named nef classes from an admissible
        // weighted space; either outcome must carry an exact certificate.
        let w = weights(&[(1, 2); 5]);
        let space = SpaceTag::hassett(w.clone()).unwrap();
        let (a, _) = class_a(&space, &w).unwrap();
        let (ct, _) = class_c_total(&space, &w).unwrap();
        let gens = vec![on_moduli_bar(&a).unwrap(), on_moduli_bar(&ct).unwrap()];
        let outcome = cone_membership(&target, &gens).unwrap();
        match outcome {
            Membership::Found(c) => {
                assert!(c.coefficients.iter().all(|v| *v >= Rat::zero()));
            }
            Membership::NotFound(f) => {
                assert!(!f.vector.is_empty());
            }
        }
    }
}
