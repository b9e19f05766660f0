//! Exact diagram and relation counts for the Y-subspace.
//!
//! `u(n, k)` counts homotopy diagrams with one Y-component and `n` struts,
//! `r(n, k)` counts link-relation configurations (an ordered special strut
//! plus `n + 1` further struts). Everything is computed with big integers
//! and exact rationals.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// `C(n, r)` for machine-sized arguments.
pub fn binomial(n: u64, r: u64) -> BigUint {
    if r > n {
        return BigUint::zero();
    }
    let r = r.min(n - r);
    let mut acc = BigUint::one();
    for i in 0..r {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

/// Multisets of size `r` from `n` types: `C(n + r - 1, r)`.
pub fn multichoose(n: u64, r: u64) -> BigUint {
    if r == 0 {
        return BigUint::one();
    }
    if n == 0 {
        return BigUint::zero();
    }
    binomial(n + r - 1, r)
}

fn pairs(k: u64) -> u64 {
    k * (k - 1) / 2
}

fn require_k(k: u32, min: u32) -> Result<u64> {
    if k < min {
        Err(Error::Domain(format!("k must be at least {min}, got {k}")))
    } else {
        Ok(u64::from(k))
    }
}

/// `C(k,3) * C(C(k,2) + n - 1, n)`.
pub fn u(n: u64, k: u32) -> Result<BigUint> {
    let k = require_k(k, 3)?;
    Ok(binomial(k, 3) * multichoose(pairs(k), n))
}

/// `k(k-1) * C(C(k,2) + n, n + 1)`.
pub fn r(n: u64, k: u32) -> Result<BigUint> {
    let k = require_k(k, 2)?;
    Ok(BigUint::from(k * (k - 1)) * multichoose(pairs(k), n + 1))
}

/// `r/u` in closed form: `6 (C(k,2) + n) / ((k - 2)(n + 1))`.
pub fn ratio(n: u64, k: u32) -> Result<BigRational> {
    let k = require_k(k, 3)?;
    let num = BigInt::from(6u64) * BigInt::from(pairs(k) + n);
    let den = BigInt::from(k - 2) * BigInt::from(n + 1);
    Ok(BigRational::new(num, den))
}

/// Limit of the ratio as `n` grows: `6 / (k - 2)`.
pub fn ratio_limit(k: u32) -> Result<BigRational> {
    let k = require_k(k, 3)?;
    Ok(BigRational::new(BigInt::from(6u64), BigInt::from(k - 2)))
}

/// Exact root of `ratio(n, k) = 1` and its ceiling.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Crossing {
    pub root: BigRational,
    pub ceiling: BigInt,
}

/// Solves `6 (C(k,2) + n) = (k - 2)(n + 1)`, i.e. `n = (6 C(k,2) - k + 2) / (k - 8)`.
pub fn crossing_n(k: u32) -> Result<Crossing> {
    if k <= 8 {
        return Err(Error::NoCrossing(k));
    }
    let k64 = u64::from(k);
    let num = BigInt::from(6 * pairs(k64)) - BigInt::from(k64 - 2);
    let root = BigRational::new(num, BigInt::from(k64 - 8));
    let ceiling = root.ceil().to_integer();
    Ok(Crossing { root, ceiling })
}

/// `u(n, k) - r(n, k)`; positive values force nontrivial diagrams of degree `n + 2`.
pub fn existence_bound(n: u64, k: u32) -> Result<BigInt> {
    Ok(BigInt::from(u(n, k)?) - BigInt::from(r(n, k)?))
}

/// Configurations whose distinguished color appears on some rest strut:
/// `k(k-1) * (C(S + n, n + 1) - C(S - (k-1) + n, n + 1))` with `S = C(k,2)`.
pub fn nonempty_configurations(n: u64, k: u32) -> Result<BigUint> {
    let k = require_k(k, 2)?;
    let avoiding = pairs(k) - (k - 1);
    let all = multichoose(pairs(k), n + 1);
    let miss = multichoose(avoiding, n + 1);
    Ok(BigUint::from(k * (k - 1)) * (all - miss))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CountReport {
    pub n: u64,
    pub k: u32,
    pub u: BigUint,
    pub r: BigUint,
    pub ratio: BigRational,
    pub existence_bound: BigInt,
}

impl CountReport {
    pub fn new(n: u64, k: u32) -> Result<Self> {
        Ok(CountReport {
            n,
            k,
            u: u(n, k)?,
            r: r(n, k)?,
            ratio: ratio(n, k)?,
            existence_bound: existence_bound(n, k)?,
        })
    }

    /// Degree (type) of the diagrams counted: `n + 2`.
    pub fn invariant_type(&self) -> u64 {
        self.n + 2
    }
}

/// Formats a rational as `num/den`, keeping the denominator even when it is 1.
pub fn format_ratio(q: &BigRational) -> String {
    format!("{}/{}", q.numer(), q.denom())
}
