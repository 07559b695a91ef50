//! F-curves on `M_{0,n}` and the intersection pairing with divisor classes.
//!
//! An F-curve is an unordered partition of the markings into four nonempty
//! blocks. The pairing rules against the tautological generators:
//! `psi(k) . F = 1` when `{k}` is a block and 0 otherwise; `bd(S) . F = +1`
//! when `S` (or its complement) is the union of exactly two blocks, `-1` when
//! `S` (or its complement) is a single block, and 0 otherwise. The rules are
//! pinned down by the vanishing of every Keel relation against every F-curve,
//! which the test suites check exhaustively for small `n`.

use crate::picard::{DivisorClass, Generator, SpaceTag};
use crate::{Error, Rat, Result};
use num_traits::Zero;
use once_cell::sync::Lazy;
use rayon::prelude::*;
use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex};

/// Partition of `{1..n}` into four nonempty blocks, stored with the blocks
/// sorted by their minimum element.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct FCurve {
    n: usize,
    blocks: [u64; 4],
}

impl FCurve {
    pub fn new(n: usize, blocks: [&[usize]; 4]) -> Result<Self> {
        let mut masks = [0u64; 4];
        for (b, members) in blocks.iter().enumerate() {
            for &i in *members {
                if i < 1 || i > n {
                    return Err(Error::IndexOutOfRange { index: i, n });
                }
                masks[b] |= 1 << (i - 1);
            }
        }
        Self::from_masks(n, masks)
    }

    pub fn from_masks(n: usize, mut masks: [u64; 4]) -> Result<Self> {
        if !(4..=62).contains(&n) {
            return Err(Error::Unsupported(format!(
                "F-curves need 4 <= n <= 62 markings, got {n}"
            )));
        }
        let full = (1u64 << n) - 1;
        let mut seen = 0u64;
        for m in masks {
            if m == 0 {
                return Err(Error::InvalidSubset("empty F-curve block".into()));
            }
            if m & seen != 0 {
                return Err(Error::InvalidSubset("F-curve blocks overlap".into()));
            }
            seen |= m;
        }
        if seen != full {
            return Err(Error::InvalidSubset(format!(
                "F-curve blocks do not cover {{1..{n}}}"
            )));
        }
        masks.sort_by_key(|m| m.trailing_zeros());
        Ok(FCurve { n, blocks: masks })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn block_masks(&self) -> [u64; 4] {
        self.blocks
    }

    pub fn blocks(&self) -> [Vec<usize>; 4] {
        self.blocks.map(crate::markings::bits_members)
    }

    pub fn singleton_blocks(&self) -> usize {
        self.blocks.iter().filter(|m| m.count_ones() == 1).count()
    }
}

impl fmt::Display for FCurve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let text: Vec<String> = self
            .blocks()
            .iter()
            .map(|block| {
                let parts: Vec<String> = block.iter().map(|i| i.to_string()).collect();
                format!("{{{}}}", parts.join(","))
            })
            .collect();
        write!(f, "({})", text.join("|"))
    }
}

/// Parses the textual form `"({1,2}|{3}|{4}|{5})"`.
pub fn parse_fcurve(n: usize, s: &str) -> Result<FCurve> {
    let t = s.trim();
    let inner = t
        .strip_prefix('(')
        .and_then(|t| t.strip_suffix(')'))
        .ok_or_else(|| Error::InvalidSubset(format!("expected ({{..}}|..|..|..), got {t:?}")))?;
    let parts: Vec<&str> = inner.split('|').collect();
    if parts.len() != 4 {
        return Err(Error::InvalidSubset(format!(
            "an F-curve has exactly 4 blocks, got {}",
            parts.len()
        )));
    }
    let mut masks = [0u64; 4];
    for (b, part) in parts.iter().enumerate() {
        let body = part
            .trim()
            .strip_prefix('{')
            .and_then(|p| p.strip_suffix('}'))
            .ok_or_else(|| Error::InvalidSubset(format!("expected {{i,..}}, got {part:?}")))?;
        for item in body.split(',') {
            let i: usize = item
                .trim()
                .parse()
                .map_err(|e| Error::InvalidSubset(format!("bad index {item:?}: {e}")))?;
            if i < 1 || i > n {
                return Err(Error::IndexOutOfRange { index: i, n });
            }
            masks[b] |= 1 << (i - 1);
        }
    }
    FCurve::from_masks(n, masks)
}

/// All F-curves for `n` markings in a fixed deterministic order (restricted
/// growth strings in lexicographic order). The count is the Stirling number
/// of the second kind `S(n, 4)`.
pub fn enumerate_fcurves(n: usize) -> Result<Vec<FCurve>> {
    if !(4..=62).contains(&n) {
        return Err(Error::Unsupported(format!(
            "F-curves need 4 <= n <= 62 markings, got {n}"
        )));
    }
    let mut out = Vec::new();
    let mut assignment = vec![0u8; n];
    fn rec(assignment: &mut Vec<u8>, pos: usize, used: u8, n: usize, out: &mut Vec<FCurve>) {
        if pos == n {
            if used == 4 {
                let mut masks = [0u64; 4];
                for (i, &b) in assignment.iter().enumerate() {
                    masks[b as usize] |= 1 << i;
                }
                out.push(FCurve { n, blocks: masks });
            }
            return;
        }
        // Not enough markings left to populate four blocks: prune.
        if (4 - used as usize) > n - pos {
            return;
        }
        let max_label = used.min(3);
        for label in 0..=max_label {
            assignment[pos] = label;
            rec(assignment, pos + 1, used.max(label + 1), n, out);
        }
    }
    rec(&mut assignment, 0, 0, n, &mut out);
    Ok(out)
}

static FCURVE_CACHE: Lazy<Mutex<HashMap<usize, Arc<Vec<FCurve>>>>> =
    Lazy::new(|| Mutex::new(HashMap::new()));

/// Cached deterministic F-curve list; the fingerprint coordinate order.
pub fn fcurves_cached(n: usize) -> Result<Arc<Vec<FCurve>>> {
    let mut cache = FCURVE_CACHE.lock().expect("fcurve cache poisoned");
    if let Some(list) = cache.get(&n) {
        return Ok(Arc::clone(list));
    }
    let list = Arc::new(enumerate_fcurves(n)?);
    cache.insert(n, Arc::clone(&list));
    Ok(list)
}

/// Intersection number of a single generator with an F-curve (always 0, 1 or
/// -1 for the generators of `M_{0,n}`).
pub fn pair_generator(gen: &Generator, f: &FCurve) -> i64 {
    match gen {
        Generator::Psi(k) => {
            let mask = 1u64 << (k - 1);
            if f.blocks.iter().any(|b| *b == mask) {
                1
            } else {
                0
            }
        }
        Generator::Boundary(s) => {
            let bits = s.bits();
            let mut covered = 0u64;
            let mut count = 0u32;
            for b in f.blocks {
                if b & bits == b {
                    covered |= b;
                    count += 1;
                }
            }
            if covered != bits {
                return 0;
            }
            match count {
                2 => 1,
                // Either the subset itself is a block, or its complement is
                // (a union of three blocks on this side).
                1 | 3 => -1,
                _ => unreachable!("a proper subset covers 1..3 blocks"),
            }
        }
        _ => 0,
    }
}

/// Intersection number of a divisor class on `M_{0,n}` with an F-curve.
pub fn pair(c: &DivisorClass, f: &FCurve) -> Result<Rat> {
    match c.space() {
        SpaceTag::ModuliBar { n } if *n == f.n() => {}
        other => {
            return Err(Error::SpaceMismatch {
                expected: format!("M0bar({})", f.n()),
                found: other.to_string(),
            })
        }
    }
    let mut acc = Rat::zero();
    for (g, coeff) in c.iter() {
        match pair_generator(g, f) {
            0 => {}
            1 => acc += coeff,
            -1 => acc -= coeff,
            _ => unreachable!(),
        }
    }
    Ok(acc)
}

/// Degrees of a class against every F-curve, in enumeration order.
pub fn fingerprint(c: &DivisorClass) -> Result<Vec<Rat>> {
    let n = match c.space() {
        SpaceTag::ModuliBar { n } => *n,
        other => {
            return Err(Error::SpaceMismatch {
                expected: "M0bar(n)".into(),
                found: other.to_string(),
            })
        }
    };
    let curves = fcurves_cached(n)?;
    let terms: Vec<(&Generator, &Rat)> = c.iter().collect();
    Ok(curves
        .par_iter()
        .map(|f| {
            let mut acc = Rat::zero();
            for (g, coeff) in &terms {
                match pair_generator(g, f) {
                    0 => {}
                    1 => acc += *coeff,
                    -1 => acc -= *coeff,
                    _ => unreachable!(),
                }
            }
            acc
        })
        .collect())
}
