//! Small constructors for the crate-wide rational scalar.

use crate::{Error, Rat, Result};
use num_bigint::BigInt;

/// `rat(p, q)` is the reduced fraction p/q. Panics if `q == 0`.
pub fn rat(num: i64, den: i64) -> Rat {
    Rat::new(BigInt::from(num), BigInt::from(den))
}

pub fn rat_int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// Parses `"p/q"` or a bare integer `"p"`.
pub fn parse_rat(text: &str) -> Result<Rat> {
    let t = text.trim();
    t.parse::<Rat>()
        .map_err(|e| Error::InvalidRational(format!("{t:?}: {e}")))
}
