//! Seeded random weight vectors, splits, GIT weights and sparse classes for
//! the verification suites. All sampling goes through a ChaCha stream so
//! reports replay exactly from the seed in their header.

use crate::markings::{boundary_subsets, classify_subset, MarkedSubset, SubsetClass, WeightVector};
use crate::picard::{DivisorClass, Generator, GitWeights, SpaceTag};
use crate::{rat, Rat};
use num_traits::Zero;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

const DENOMINATORS: [i64; 8] = [2, 3, 4, 5, 6, 8, 10, 12];

fn random_weight<R: Rng>(rng: &mut R) -> Rat {
    let den = DENOMINATORS[rng.gen_range(0..DENOMINATORS.len())];
    let num = rng.gen_range(1..=den);
    rat(num, den)
}

/// Random admissible weight vector (total above 2) with small denominators.
pub fn admissible_weights<R: Rng>(rng: &mut R, n: usize) -> WeightVector {
    loop {
        let weights: Vec<Rat> = (0..n).map(|_| random_weight(rng)).collect();
        let wv = WeightVector::new(weights).expect("entries sampled inside (0, 1]");
        if wv.is_admissible() {
            return wv;
        }
    }
}

/// Random split of the first weight into `1..=max_k` positive rational
/// parts summing exactly to it.
pub fn weight_split<R: Rng>(rng: &mut R, w: &WeightVector, max_k: usize) -> Vec<Rat> {
    let k = rng.gen_range(1..=max_k.max(1));
    let total_shares = rng.gen_range(k..=k + 5) as i64;
    let mut shares = vec![1i64; k];
    for _ in 0..(total_shares - k as i64) {
        let idx = rng.gen_range(0..k);
        shares[idx] += 1;
    }
    shares
        .into_iter()
        .map(|s| w.weight(1) * rat(s, total_shares))
        .collect()
}

/// Random typical GIT weights: entries in `(0, 1]` summing to 2, with no
/// boundary subset of weight exactly 1.
pub fn typical_git<R: Rng>(rng: &mut R, n: usize) -> GitWeights {
    loop {
        let shares: Vec<i64> = (0..n).map(|_| rng.gen_range(1..=12)).collect();
        let total: i64 = shares.iter().sum();
        if shares.iter().any(|&s| 2 * s > total) {
            continue;
        }
        let x: Vec<Rat> = shares.iter().map(|&s| rat(2 * s, total)).collect();
        if let Ok(weights) = GitWeights::new(x) {
            if weights.is_typical() {
                return weights;
            }
        }
    }
}

/// All generators that exist on a space.
pub fn legal_generators(space: &SpaceTag) -> Vec<Generator> {
    let n = space.n();
    let mut out: Vec<Generator> = (1..=n).map(Generator::Psi).collect();
    match space {
        SpaceTag::ModuliBar { .. } => {
            for s in boundary_subsets(n).expect("n validated by the space") {
                out.push(Generator::Boundary(s));
            }
        }
        SpaceTag::Hassett { weights } => {
            for s in boundary_subsets(n).expect("n validated by the space") {
                match classify_subset(&s, weights).expect("space is admissible") {
                    SubsetClass::Nodal => out.push(Generator::Nodal(s)),
                    SubsetClass::CoincidencePair => {
                        let members = crate::markings::bits_members(
                            crate::markings::light_side_bits(&s, weights)
                                .expect("admissible")
                                .expect("light"),
                        );
                        out.push(Generator::Coincidence(members[0], members[1]));
                    }
                    SubsetClass::Contracted => {}
                }
            }
        }
        SpaceTag::GitQuotient { .. } => {}
    }
    out
}

/// Random sparse class with at most `max_terms` terms and small rational
/// coefficients.
pub fn sparse_class<R: Rng>(rng: &mut R, space: &SpaceTag, max_terms: usize) -> DivisorClass {
    let gens = legal_generators(space);
    let mut out = DivisorClass::zero(space.clone());
    let terms = rng.gen_range(1..=max_terms.max(1));
    for _ in 0..terms {
        let gen = gens[rng.gen_range(0..gens.len())];
        let mut coeff = rat(rng.gen_range(-12i64..=12), rng.gen_range(1i64..=6));
        if coeff.is_zero() {
            coeff = rat(1, 1);
        }
        out.add_term(gen, coeff).expect("generator drawn from the legal set");
    }
    out
}

/// Random permutation of `{1..n}` as a 1-based lookup table.
pub fn permutation<R: Rng>(rng: &mut R, n: usize) -> Vec<usize> {
    let mut perm: Vec<usize> = (1..=n).collect();
    for i in (1..n).rev() {
        let j = rng.gen_range(0..=i);
        perm.swap(i, j);
    }
    perm
}

/// Image of a marking bitmask under a permutation table.
pub fn relabel_bits(bits: u64, perm: &[usize]) -> u64 {
    let mut out = 0u64;
    for (idx, &image) in perm.iter().enumerate() {
        if bits & (1 << idx) != 0 {
            out |= 1 << (image - 1);
        }
    }
    out
}

/// Relabels a class on `M_{0,n}` by a permutation of the markings.
pub fn relabel_class(c: &DivisorClass, perm: &[usize]) -> DivisorClass {
    let n = c.space().n();
    assert!(matches!(c.space(), SpaceTag::ModuliBar { .. }));
    let mut out = DivisorClass::zero(c.space().clone());
    for (g, coeff) in c.iter() {
        let image = match g {
            Generator::Psi(i) => Generator::Psi(perm[i - 1]),
            Generator::Boundary(s) => Generator::Boundary(
                MarkedSubset::from_bits(n, relabel_bits(s.bits(), perm))
                    .expect("relabeling preserves validity"),
            ),
            other => *other,
        };
        out.add_term(image, coeff.clone()).expect("legal by relabeling");
    }
    out
}
