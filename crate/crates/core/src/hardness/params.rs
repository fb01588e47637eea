//! Size parameters of the recursive hard distributions.
//!
//! Level `j` embeds instances on `n_{j-1}` vertices into a DUP graph with
//! `k_j + 1 = 2^j` layers of `b_j` vertices, so `n_j = 2·b_j·n_{j-1}`. For
//! `j ≥ 2` the two factors are tied by `b_j = n_{j-1}^{1 + 1/(2^{j-1}-1)}`,
//! which gives
//!
//! ```text
//! n_{j-1} = (n_j/2)^((2^{j-1}-1)/(2^j-1)),   b_j = (n_j/2)^(2^{j-1}/(2^j-1)),
//! ```
//!
//! and `b_1 = n_1/(2·n_0)`. Integer values floor `n_{j-1}` exactly (no
//! floating point) and set `b_j = ⌊n_j/(2·n_{j-1})⌋`; the remainder is
//! absorbed by padding the DUP layers.

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LevelParams {
    /// Level index `j ≥ 1`.
    pub level: usize,
    /// DUP path length in edges, `2^j - 1`.
    pub k: usize,
    /// Vertices of a level-`j` instance.
    pub n: u128,
    /// Vertices of each level-`(j-1)` sub-instance.
    pub n_prev: u128,
    /// DUP layer size.
    pub b: u128,
    pub p: u128,
    pub q: u128,
    /// Unrounded `n_{j-1}` and `b_j` as functions of the integer `n_j`.
    pub n_prev_real: f64,
    pub b_real: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParamTable {
    pub r: usize,
    pub n: u128,
    pub n_0: u128,
    pub eta_p: f64,
    pub eta_q: f64,
    /// `levels[j-1]` describes level `j`.
    pub levels: Vec<LevelParams>,
}

impl ParamTable {
    pub fn level(&self, j: usize) -> &LevelParams {
        &self.levels[j - 1]
    }
}

/// `½·(2·n_0)^{2^r - 1}`, the smallest admissible size for `r` rounds.
pub fn minimum_size(r: usize, n_0: u128) -> BigUint {
    let exp = (1u32 << r) - 1;
    let full = BigUint::from(2 * n_0).pow(exp);
    // (2n_0)^e is even for e ≥ 1, and for e = 0 the bound ½ rounds up to 1
    if exp == 0 {
        BigUint::one()
    } else {
        full / 2u32
    }
}

/// Largest `m` with `m^root ≤ value`.
pub(crate) fn integer_root(value: &BigUint, root: u32) -> BigUint {
    if root == 1 || value.is_zero() {
        return value.clone();
    }
    let mut lo = BigUint::zero();
    let mut hi = BigUint::one() << (value.bits() / root as u64 + 1);
    // invariant: lo^root ≤ value < hi^root
    while &hi - &lo > BigUint::one() {
        let mid: BigUint = (&lo + &hi) >> 1;
        if mid.pow(root) <= *value {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lo
}

fn to_u128(v: &BigUint, what: &str) -> Result<u128> {
    v.to_u128()
        .ok_or_else(|| Error::InvalidParameter(format!("{what} does not fit in 128 bits")))
}

/// `x / exp(η·(ln x)^{3/4})`, floored.
pub fn dup_count(x: u128, eta: f64) -> u128 {
    if x <= 1 {
        return x;
    }
    let xf = x as f64;
    (xf / (eta * xf.ln().powf(0.75)).exp()).floor() as u128
}

/// Parameters of every level of an `r`-round instance on `n` vertices.
pub fn compute_parameters(r: usize, n: u128, n_0: u128, eta_p: f64, eta_q: f64) -> Result<ParamTable> {
    if n_0 < 2 || !n_0.is_multiple_of(2) {
        return Err(Error::InvalidParameter(format!("n0 must be even and at least 2, got {n_0}")));
    }
    if !(eta_p > 0.0 && eta_q > 0.0) {
        return Err(Error::InvalidParameter("eta values must be positive".into()));
    }
    if r > 6 {
        return Err(Error::InvalidParameter(format!("r={r} exceeds the supported maximum of 6")));
    }
    if r == 0 && n != n_0 {
        return Err(Error::InvalidParameter(format!(
            "a 0-round instance has exactly n0={n_0} vertices, got n={n}"
        )));
    }
    let mut levels = Vec::with_capacity(r);
    let mut n_j = n;
    for j in (1..=r).rev() {
        let required = minimum_size(j, n_0);
        if BigUint::from(n_j) < required {
            return Err(Error::SizeRelationViolated {
                level: j,
                n: n_j,
                required: required.to_string(),
            });
        }
        let k = (1usize << j) - 1;
        let (n_prev, n_prev_real, b_real) = if j == 1 {
            (n_0, n_0 as f64, n_j as f64 / (2.0 * n_0 as f64))
        } else {
            let a = (1u32 << (j - 1)) - 1;
            let e = (1u32 << j) - 1;
            // m^e ≤ ⌊n^a / 2^a⌋ iff m^e ≤ (n/2)^a
            let m = integer_root(&(BigUint::from(n_j).pow(a) >> a as usize), e);
            let half = n_j as f64 / 2.0;
            (
                to_u128(&m, "n_prev")?,
                half.powf(a as f64 / e as f64),
                half.powf((a + 1) as f64 / e as f64),
            )
        };
        if n_prev == 0 {
            return Err(Error::SizeRelationViolated {
                level: j,
                n: n_j,
                required: required.to_string(),
            });
        }
        let b = n_j / (2 * n_prev);
        let dup_size = b.saturating_mul(k as u128 + 1);
        levels.push(LevelParams {
            level: j,
            k,
            n: n_j,
            n_prev,
            b,
            p: dup_count(dup_size, eta_p),
            q: dup_count(dup_size, eta_q),
            n_prev_real,
            b_real,
        });
        n_j = n_prev;
    }
    levels.reverse();
    Ok(ParamTable {
        r,
        n,
        n_0,
        eta_p,
        eta_q,
        levels,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_rounds_on_1024() {
        let t = compute_parameters(2, 1024, 4, 1.0, 1.0).unwrap();
        let top = t.level(2);
        assert_eq!((top.n_prev, top.b), (8, 64));
        assert_eq!(2 * top.b * top.n_prev, 1024);
        assert_eq!(t.level(1).n, 8);
        assert_eq!(t.level(1).b, 1);
    }

    #[test]
    fn one_round_b() {
        let t = compute_parameters(1, 64, 4, 1.0, 1.0).unwrap();
        assert_eq!(t.level(1).b, 8);
        assert_eq!(t.level(1).n_prev, 4);
    }

    #[test]
    fn size_relation_is_enforced() {
        let err = compute_parameters(2, 100, 4, 1.0, 1.0).unwrap_err();
        assert_eq!(
            err,
            Error::SizeRelationViolated {
                level: 2,
                n: 100,
                required: "256".into()
            }
        );
        assert!(compute_parameters(2, 256, 4, 1.0, 1.0).is_ok());
    }

    #[test]
    fn integer_roots() {
        assert_eq!(integer_root(&BigUint::from(26u32), 3), BigUint::from(2u32));
        assert_eq!(integer_root(&BigUint::from(27u32), 3), BigUint::from(3u32));
        assert_eq!(
            integer_root(&(BigUint::from(1u32) << 294usize), 7),
            BigUint::from(1u32) << 42usize
        );
    }

    #[test]
    fn rejects_odd_base() {
        assert!(compute_parameters(1, 64, 3, 1.0, 1.0).is_err());
        assert!(compute_parameters(0, 6, 4, 1.0, 1.0).is_err());
        assert!(compute_parameters(0, 4, 4, 1.0, 1.0).unwrap().levels.is_empty());
    }
}
