//! Acceptance suite: one test per criterion, every check exact (tolerance 0)
//! in rational arithmetic. Each test prints a single PASS/FAIL line.

use num_bigint::BigInt;
use num_traits::Zero;
use rand::Rng;
use std::time::Instant;

use wstab::cones::{cone_membership, fnef_certificate, Membership, CERTIFICATE_LABEL};
use wstab::divisors::{
    class_a, class_b, class_c, class_c_total, git_polarization_pullback, log_canonical_upstairs,
};
use wstab::fcurves::{enumerate_fcurves, fingerprint, pair_generator};
use wstab::gitcalc::verify_git_descent;
use wstab::linalg::rank_bareiss;
use wstab::markings::{boundary_subsets, WeightVector};
use wstab::morphisms::{discrepancy, pullback, pushforward, replacement_pullback, ReductionMap,
    ReplacementData};
use wstab::picard::{
    eq_classes, expand_aggregate, keel_relation, positivity_coefficient, positivity_relation,
    Aggregate, DivisorClass, Generator, GitWeights, SpaceTag,
};
use wstab::{rat, rat_int, sample, Rat};

fn report(criterion: &str, pass: bool, detail: &str) {
    println!(
        "[{criterion}] {} - {detail}",
        if pass { "PASS" } else { "FAIL" }
    );
}

/// Criterion 1: the boundary expansion of kappa + psi vanishes in the Picard
/// group for n = 4..8, with the pinned coefficients at n = 5 and 6, in under
/// five seconds.
#[test]
fn c01_positivity_relation_vanishes_through_n8() {
    let start = Instant::now();
    for n in 4..=8 {
        let rel = positivity_relation(n).unwrap();
        let fp = fingerprint(&rel).unwrap();
        assert!(
            fp.iter().all(|d| d.is_zero()),
            "nonzero fingerprint at n={n}"
        );
    }
    let elapsed = start.elapsed();

    // n = 5 instantiation: kappa + psi = Dr(2)/2.
    assert_eq!(positivity_coefficient(5, 2), rat(1, 2));
    let space = SpaceTag::moduli_bar(5).unwrap();
    let kp = expand_aggregate(&space, Aggregate::Kappa)
        .unwrap()
        .add(&expand_aggregate(&space, Aggregate::PsiTotal).unwrap())
        .unwrap();
    let rhs = expand_aggregate(&space, Aggregate::DeltaR(2))
        .unwrap()
        .scale(&rat(1, 2));
    assert!(eq_classes(&kp, &rhs).unwrap());

    // n = 6 coefficients 3/5 and 4/5.
    assert_eq!(positivity_coefficient(6, 2), rat(3, 5));
    assert_eq!(positivity_coefficient(6, 3), rat(4, 5));

    let within_budget = elapsed.as_secs_f64() < 5.0;
    report(
        "c01",
        within_budget,
        &format!(
            "kappa+psi relation fingerprints vanish for n=4..8 (1701 F-curves at n=8) in {:.2}s",
            elapsed.as_secs_f64()
        ),
    );
    assert!(within_budget, "runtime {:?} exceeds 5s", elapsed);
}

/// Criterion 2: every Keel relation fingerprint vanishes for all ordered
/// 4-tuples of distinct indices, n = 4..6.
#[test]
fn c02_keel_relations_fingerprint_to_zero() {
    let mut relations = 0usize;
    for n in 4..=6 {
        for i in 1..=n {
            for j in 1..=n {
                for k in 1..=n {
                    for l in 1..=n {
                        let distinct = i != j
                            && i != k
                            && i != l
                            && j != k
                            && j != l
                            && k != l;
                        if !distinct {
                            continue;
                        }
                        let rel = keel_relation(n, i, j, k, l).unwrap();
                        let fp = fingerprint(&rel).unwrap();
                        assert!(
                            fp.iter().all(|d| d.is_zero()),
                            "keel({i},{j},{k},{l}) at n={n}"
                        );
                        relations += 1;
                    }
                }
            }
        }
    }
    report(
        "c02",
        true,
        &format!("{relations} Keel relations pair to zero against every F-curve (n=4..6)"),
    );
}

/// Criterion 3: the boundary-vs-F-curve pairing matrix has full Picard rank
/// 2^(n-1) - C(n,2) - 1 for n = 4..7 (1, 5, 16, 42).
#[test]
fn c03_fingerprint_rank_equals_picard_number() {
    let expected = [(4usize, 1usize), (5, 5), (6, 16), (7, 42)];
    for (n, want) in expected {
        let subsets = boundary_subsets(n).unwrap();
        let curves = enumerate_fcurves(n).unwrap();
        let matrix: Vec<Vec<BigInt>> = subsets
            .iter()
            .map(|s| {
                curves
                    .iter()
                    .map(|f| BigInt::from(pair_generator(&Generator::Boundary(*s), f)))
                    .collect()
            })
            .collect();
        let rank = rank_bareiss(matrix);
        assert_eq!(rank, want, "rank at n={n}");
        let picard = (1usize << (n - 1)) - n * (n - 1) / 2 - 1;
        assert_eq!(rank, picard);
    }
    report(
        "c03",
        true,
        "exact pairing-matrix ranks 1, 5, 16, 42 at n=4..7 match the Picard numbers",
    );
}

/// Criterion 4: pullbacks of A, B and every C_i are F-nef for 100 seeded
/// random admissible weight vectors at each n = 5, 6, 7.
#[test]
fn c04_named_divisors_are_fnef_at_desk_scale() {
    let mut rng = sample::rng(0xC4);
    let mut classes_checked = 0usize;
    let mut violators = 0usize;
    for n in [5usize, 6, 7] {
        for _ in 0..100 {
            let w = sample::admissible_weights(&mut rng, n);
            let space = SpaceTag::hassett(w.clone()).unwrap();
            let mut classes = vec![
                class_a(&space, &w).unwrap().0,
                class_b(&space, &w).unwrap().0,
            ];
            for i in 1..=n {
                classes.push(class_c(&space, &w, i).unwrap().0);
            }
            for c in classes {
                let cert = fnef_certificate(&c).unwrap();
                classes_checked += 1;
                violators += cert.violators().len();
            }
        }
    }
    report(
        "c04",
        violators == 0,
        &format!(
            "{classes_checked} pullbacks of A, B, C_i swept over all F-curves with {violators} violators"
        ),
    );
    assert_eq!(violators, 0);
}

fn replacement_instances() -> Vec<(WeightVector, Vec<Rat>)> {
    let mut rng = sample::rng(0xC5);
    let mut instances = Vec::with_capacity(51);
    for _ in 0..50 {
        let n = rng.gen_range(4..=7);
        let w = sample::admissible_weights(&mut rng, n);
        let split = sample::weight_split(&mut rng, &w, 3);
        instances.push((w, split));
    }
    // The named instance: (1/2)^6 with 1/2 = 1/4 + 1/4.
    instances.push((
        WeightVector::new(vec![rat(1, 2); 6]).unwrap(),
        vec![rat(1, 4), rat(1, 4)],
    ));
    instances
}

/// Criterion 5, quoted form: chi^*(A(B)) = A(A) + (1 - a_1) psi_1 for the 50
/// seeded instances and the named (1/2)^6 instance.
///
/// This displayed simplification is NOT an identity of the replacement
/// pullback: restricting the universal family forces
/// chi^*(A(B)) = A(A) + (k-1) * C_1(A), and the quoted form only agrees when
/// k = 2 and no coincidence class through marking 1 exists (already the
/// trivial split k = 1 contradicts it). On the named instance the residual
/// is (1/2) * sum_j coinc(1,j), which pairs to 1 against ({1}|{2}|{3}|{4,5,6}).
/// The test asserts the quoted form faithfully and is expected to stay red;
/// the exact identity is the green sibling below, and `verify replacement`
/// reports both forms with witnesses.
#[test]
fn c05_replacement_pullback_as_quoted_simplified_form() {
    let mut failures = Vec::new();
    let instances = replacement_instances();
    let total = instances.len();
    for (w, split) in instances {
        let r = ReplacementData::new(w.clone(), split.clone()).unwrap();
        let (ab, _) = class_a(&r.target_space(), r.target()).unwrap();
        let lhs = replacement_pullback(&r, &ab).unwrap();
        let (aa, _) = class_a(&r.source_space(), &w).unwrap();
        let psi1 = DivisorClass::from_terms(
            r.source_space(),
            [(Generator::Psi(1), rat_int(1) - w.weight(1))],
        )
        .unwrap();
        let rhs = aa.add(&psi1).unwrap();
        if !eq_classes(&lhs, &rhs).unwrap() {
            failures.push(format!("weights ({w}), split {split:?}"));
        }
    }
    let pass = failures.is_empty();
    report(
        "c05",
        pass,
        &format!(
            "quoted replacement identity chi^*A(B) = A(A) + (1-a_1)psi_1 holds on {}/{total} instances",
            total - failures.len(),
        ),
    );
    assert!(
        pass,
        "the quoted simplification fails on {}/{} instances (first: {}). It omits the \
         coincidence part of C_1 and the split multiplicity: the exact identity is \
         chi^*(A(B)) = A(A) + (k-1)*C_1(A), verified coefficient-by-coefficient by \
         c05_replacement_pullback_exact_functorial_form on the same instances. On the \
         named (1/2)^6 instance the residual (1/2)*sum_j coinc(1,j) has F-degree 1 \
         against ({{1}}|{{2}}|{{3}}|{{4,5,6}}), so no transport rule compatible with \
         psi_tau = psi_1, coinc(tau_l,tau_m) = -psi_1 can satisfy the quoted form. \
         See `wstab verify replacement --json` for per-instance witnesses.",
        failures.len(),
        total,
        failures[0]
    );
}

/// Criterion 5, exact form: chi^*(A(B)) = A(A) + (k-1) * C_1(A) on the same
/// 50 seeded instances plus the named one, as an equality of coefficient
/// vectors (stronger than Picard-group equality).
#[test]
fn c05_replacement_pullback_exact_functorial_form() {
    let instances = replacement_instances();
    let total = instances.len();
    for (w, split) in instances {
        let r = ReplacementData::new(w.clone(), split.clone()).unwrap();
        let (ab, _) = class_a(&r.target_space(), r.target()).unwrap();
        let lhs = replacement_pullback(&r, &ab).unwrap();
        let (aa, _) = class_a(&r.source_space(), &w).unwrap();
        let (c1, _) = class_c(&r.source_space(), &w, 1).unwrap();
        let rhs = aa
            .add(&c1.scale(&rat_int(r.k() as i64 - 1)))
            .unwrap();
        assert_eq!(lhs, rhs, "weights ({w}), split {split:?}");
        assert!(eq_classes(&lhs, &rhs).unwrap());
    }
    report(
        "c05",
        true,
        &format!(
            "exact replacement identity chi^*A(B) = A(A) + (k-1)C_1(A) holds on {total}/{total} instances"
        ),
    );
}

/// Criterion 6: discrepancy support and coefficients, the hand-derived
/// instance, and pushforward of the upstairs log-canonical class.
#[test]
fn c06_discrepancies_match_the_closed_formula() {
    let mut rng = sample::rng(0xC6);
    let mut checked = 0usize;
    for n in [5usize, 6, 7] {
        for _ in 0..50 {
            let w = sample::admissible_weights(&mut rng, n);
            let f = ReductionMap::new(n, w.clone()).unwrap();
            // discrepancy() recomputes L - f^*(A) and fails on any deviation.
            let d = discrepancy(&f).unwrap();
            for s in f.contracted() {
                let light = f.light_bits_of(s);
                let size = light.count_ones() as i64;
                let expected = rat_int(size - 1) * (rat_int(1) - w.bits_weight(light));
                let got = d.get(s).cloned().unwrap_or_else(Rat::zero);
                assert_eq!(got, expected, "weights {w}, class {s}");
                assert!(got >= Rat::zero(), "effectivity at {s} for {w}");
            }
            assert!(d.keys().all(|s| f.contracted().contains(s)));

            // Theorem pushforward: the upstairs class descends to A.
            let down = pushforward(&f, &log_canonical_upstairs(n, &w).unwrap()).unwrap();
            let (a, _) = class_a(&f.target_space(), &w).unwrap();
            assert_eq!(down, a, "pushforward at {w}");
            checked += 1;
        }
    }

    // Hand-derived instance: the light triple {3,4,5} carries 2(1 - 3/10).
    let w = WeightVector::new(vec![
        rat(1, 1),
        rat(1, 1),
        rat(1, 10),
        rat(1, 10),
        rat(1, 10),
    ])
    .unwrap();
    let f = ReductionMap::new(5, w).unwrap();
    let d = discrepancy(&f).unwrap();
    assert_eq!(d.len(), 1);
    let (s, coeff) = d.iter().next().unwrap();
    assert_eq!(
        wstab::markings::bits_members(f.light_bits_of(s)),
        vec![3, 4, 5]
    );
    assert_eq!(*coeff, rat(7, 5));
    report(
        "c06",
        true,
        &format!(
            "{checked} reductions: support in the contracted classes, coefficients (|S|-1)(1-w) >= 0, f_*(L) = A; named instance {{3,4,5}} -> 7/5"
        ),
    );
}

/// Criterion 7: the n = 6 suite on the uniform (1/2)^6 space plus the
/// (1,1,1/2,1/2) degree bookkeeping.
#[test]
fn c07_n6_relations_and_degree_bookkeeping() {
    let w = WeightVector::new(vec![rat(1, 2); 6]).unwrap();
    let space = SpaceTag::hassett(w.clone()).unwrap();
    let f = ReductionMap::new(6, w).unwrap();
    let psi = expand_aggregate(&space, Aggregate::PsiTotal).unwrap();
    let ds = expand_aggregate(&space, Aggregate::DeltaS).unwrap();
    let dn = expand_aggregate(&space, Aggregate::DeltaNodal).unwrap();

    // 5 psi + 2 Ds - 9 Dnodal pulls back to the zero fingerprint.
    let relation = psi
        .scale(&rat_int(5))
        .add(&ds.scale(&rat_int(2)))
        .unwrap()
        .sub(&dn.scale(&rat_int(9)))
        .unwrap();
    let fp = fingerprint(&pullback(&f, &relation).unwrap()).unwrap();
    assert!(fp.iter().all(|d| d.is_zero()));

    // 2 Dnodal - psi is F-nef (and extremal: minimum degree exactly 0).
    let extremal = dn.scale(&rat_int(2)).sub(&psi).unwrap();
    let cert = fnef_certificate(&extremal).unwrap();
    assert!(cert.is_fnef());
    assert!(cert.min_degree().is_zero());

    // psi + Ds = (3/2) C((1/3)^6) as classes on the (1/2)^6 space.
    let third = WeightVector::new(vec![rat(1, 3); 6]).unwrap();
    let (ct, _) = class_c_total(&space, &third).unwrap();
    let lhs = psi.add(&ds).unwrap();
    assert!(eq_classes(&lhs, &ct.scale(&rat(3, 2))).unwrap());

    // Degree bookkeeping on M_{0,(1,1,1/2,1/2)}: component degrees 2, 1, 2
    // and (2/3)*2 + (2/3)*1 - 2 = 0.
    let w4 = WeightVector::new(vec![rat(1, 1), rat(1, 1), rat(1, 2), rat(1, 2)]).unwrap();
    let f4 = ReductionMap::new(4, w4.clone()).unwrap();
    let h4 = f4.target_space();
    let curve = &enumerate_fcurves(4).unwrap()[0];
    let deg = |c: &DivisorClass| -> Rat {
        wstab::fcurves::pair(&pullback(&f4, c).unwrap(), curve).unwrap()
    };
    let psi4 = expand_aggregate(&h4, Aggregate::PsiTotal).unwrap();
    let ds4 = expand_aggregate(&h4, Aggregate::DeltaS).unwrap();
    let dn4 = expand_aggregate(&h4, Aggregate::DeltaNodal).unwrap();
    assert_eq!(deg(&psi4), rat_int(2));
    assert_eq!(deg(&ds4), rat_int(1));
    assert_eq!(deg(&dn4), rat_int(2));
    let total = rat(2, 3) * deg(&psi4) + rat(2, 3) * deg(&ds4) - deg(&dn4);
    assert!(total.is_zero());
    report(
        "c07",
        true,
        "5psi+2Ds-9Dnodal fingerprints to zero; 2Dnodal-psi is F-nef; psi+Ds = (3/2)C((1/3)^6); degrees (2,1,2) give 4/3+2/3-2=0",
    );
}

/// Criterion 8: symbolic GIT descent for symmetric and random typical
/// weights, and F-nefness of the polarization pullback at n = 5, 6.
#[test]
fn c08_git_descent_and_polarization_pullbacks() {
    let mut rng = sample::rng(0xC8);
    let mut reports = 0usize;
    let mut sweeps = 0usize;
    for n in 4..=8 {
        let symmetric = GitWeights::new(vec![rat(2, n as i64); n]).unwrap();
        assert!(verify_git_descent(&symmetric).unwrap().passed, "n={n}");
        reports += 1;
        for _ in 0..100 {
            let x = sample::typical_git(&mut rng, n);
            assert!(verify_git_descent(&x).unwrap().passed, "x={x}");
            reports += 1;
            if n == 5 || n == 6 {
                let up = git_polarization_pullback(&x).unwrap();
                let cert = fnef_certificate(&up).unwrap();
                assert!(cert.is_fnef(), "polarization pullback at x={x}");
                sweeps += 1;
            }
        }
    }
    // The symmetric n = 5 linearization is typical and F-nef as well.
    let x = GitWeights::new(vec![rat(2, 5); 5]).unwrap();
    assert!(fnef_certificate(&git_polarization_pullback(&x).unwrap())
        .unwrap()
        .is_fnef());
    report(
        "c08",
        true,
        &format!("{reports} descent reports hold; {sweeps} polarization pullbacks F-nef at n=5,6"),
    );
}

/// Criterion 9: the LP engine returns certificates that re-multiply exactly,
/// Farkas vectors that separate exactly, finds trivial memberships, and runs
/// the grid experiment against the GIT polarization target.
#[test]
fn c09_lp_certificates_are_exact() {
    // Trivial membership across spaces.
    for n in [5usize, 6] {
        let space = SpaceTag::moduli_bar(n).unwrap();
        let gens = vec![
            expand_aggregate(&space, Aggregate::PsiTotal).unwrap(),
            expand_aggregate(&space, Aggregate::DeltaTotal).unwrap(),
            positivity_relation(n).unwrap(),
        ];
        for (idx, g) in gens.iter().enumerate() {
            match cone_membership(g, &gens).unwrap() {
                Membership::Found(c) => {
                    assert_eq!(c.coefficients[idx], rat_int(1), "unit certificate at {idx}");
                    assert!(c
                        .coefficients
                        .iter()
                        .enumerate()
                        .all(|(j, v)| j == idx || v.is_zero()));
                }
                other => panic!("trivial membership not found: {other:?}"),
            }
        }
    }

    // A certificate that re-multiplies: 2*psi + 3*Delta from {psi, Delta}.
    let space = SpaceTag::moduli_bar(6).unwrap();
    let psi = expand_aggregate(&space, Aggregate::PsiTotal).unwrap();
    let delta = expand_aggregate(&space, Aggregate::DeltaTotal).unwrap();
    let target = psi.scale(&rat_int(2)).add(&delta.scale(&rat_int(3))).unwrap();
    let gens = vec![psi.clone(), delta.clone()];
    match cone_membership(&target, &gens).unwrap() {
        Membership::Found(c) => {
            let fp_target = fingerprint(&target).unwrap();
            let fp_gens: Vec<Vec<Rat>> =
                gens.iter().map(|g| fingerprint(g).unwrap()).collect();
            for (row, want) in fp_target.iter().enumerate() {
                let got: Rat = c
                    .coefficients
                    .iter()
                    .zip(&fp_gens)
                    .map(|(mu, col)| mu * &col[row])
                    .sum();
                assert_eq!(got, *want);
            }
        }
        other => panic!("expected certificate, got {other:?}"),
    }

    // An exact Farkas separation for an impossible target.
    let neg = psi.neg();
    match cone_membership(&neg, &gens).unwrap() {
        Membership::NotFound(farkas) => {
            let fp_gens: Vec<Vec<Rat>> =
                gens.iter().map(|g| fingerprint(g).unwrap()).collect();
            for col in &fp_gens {
                let dot: Rat = farkas.vector.iter().zip(col).map(|(a, b)| a * b).sum();
                assert!(dot <= Rat::zero());
            }
            let fp_neg = fingerprint(&neg).unwrap();
            let dot: Rat = farkas.vector.iter().zip(&fp_neg).map(|(a, b)| a * b).sum();
            assert!(dot > Rat::zero());
        }
        other => panic!("expected not-found, got {other:?}"),
    }

    // Grid experiment: the GIT polarization pullback at (2/5)^5 against
    // pullbacks of A, B, C over 50 seeded admissible weight vectors. The
    // F-nef pass is mandatory; the membership outcome is reported either way.
    let x = GitWeights::new(vec![rat(2, 5); 5]).unwrap();
    let target = git_polarization_pullback(&x).unwrap();
    assert!(fnef_certificate(&target).unwrap().is_fnef());
    let mut rng = sample::rng(0xC9);
    let mut grid = Vec::with_capacity(150);
    for _ in 0..50 {
        let w = sample::admissible_weights(&mut rng, 5);
        let space = SpaceTag::hassett(w.clone()).unwrap();
        let f = ReductionMap::new(5, w.clone()).unwrap();
        grid.push(pullback(&f, &class_a(&space, &w).unwrap().0).unwrap());
        grid.push(pullback(&f, &class_b(&space, &w).unwrap().0).unwrap());
        grid.push(pullback(&f, &class_c_total(&space, &w).unwrap().0).unwrap());
    }
    let outcome = cone_membership(&target, &grid).unwrap();
    let detail = match &outcome {
        Membership::Found(c) => format!(
            "grid probe: certificate with {} nonzero coefficients",
            c.coefficients.iter().filter(|v| !v.is_zero()).count()
        ),
        Membership::NotFound(_) => "grid probe: not in the supplied cone (exact Farkas)".into(),
    };
    report(
        "c09",
        true,
        &format!("trivial, recombination and Farkas certificates all exact; {detail}"),
    );
}

/// Criterion 10: the artifact certifies F-nefness only; ampleness and cone
/// equality are documented as out of reach, and the certificates say so.
#[test]
fn c10_limitations_are_documented() {
    assert_eq!(CERTIFICATE_LABEL, "f-nef");
    let zero = DivisorClass::zero(SpaceTag::moduli_bar(5).unwrap());
    let cert = fnef_certificate(&zero).unwrap();
    let json = cert.to_json(false);
    assert_eq!(json["certificate"], "f-nef");

    let readme = include_str!("../../../README.md");
    let lower = readme.to_lowercase();
    assert!(
        lower.contains("f-nef"),
        "README must describe certificates as F-nef"
    );
    assert!(
        lower.contains("not") && lower.contains("ampleness"),
        "README must state that ampleness is not certified"
    );
    assert!(
        lower.contains("cone"),
        "README must discuss the cone experiments' scope"
    );
    report(
        "c10",
        true,
        "certificates labeled f-nef; README states the ampleness/cone-equality limitation",
    );
}
