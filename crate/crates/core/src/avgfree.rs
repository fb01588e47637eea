//! Average-free vector sets.
//!
//! A set `A ⊆ [ℓ]^d` is average-free when no multiset of its members that
//! are not all equal has a coordinate-wise average lying in `A`. The
//! largest class of `[ℓ]^d` sharing one squared Euclidean norm has this
//! property for every multiset size, and by pigeonhole it holds at least
//! `ℓ^d / (d·ℓ²)` vectors.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::budget::{Budget, SharedMeter};
use crate::error::{Error, Result};

/// A point of `[ℓ]^d`, coordinates starting at 1.
pub type Vector = Vec<u32>;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AvgFreeSet {
    ell: u32,
    d: u32,
    /// Members in lexicographic order.
    vectors: Vec<Vector>,
    /// Shared squared norm, `None` for hand-built sets mixing norms.
    norm_sq: Option<u64>,
}

pub fn norm_sq(v: &[u32]) -> u64 {
    v.iter().map(|&c| c as u64 * c as u64).sum()
}

/// Calls `f` on every vector of `[ell]^d` in lexicographic order.
fn for_each_vector(ell: u32, d: u32, mut f: impl FnMut(&[u32])) {
    let mut v = vec![1u32; d as usize];
    loop {
        f(&v);
        let mut pos = d as usize;
        loop {
            if pos == 0 {
                return;
            }
            pos -= 1;
            if v[pos] < ell {
                v[pos] += 1;
                break;
            }
            v[pos] = 1;
        }
    }
}

/// `ell^d` as an exact integer, saturating far above any budget.
pub(crate) fn pow_u128(base: u64, exp: u32) -> u128 {
    let mut acc: u128 = 1;
    for _ in 0..exp {
        acc = acc.saturating_mul(base as u128);
    }
    acc
}

/// Largest equal-norm class of `[ell]^d`; ties go to the smallest squared norm.
pub fn build_avg_free_set(ell: u32, d: u32, budget: &Budget) -> Result<AvgFreeSet> {
    if ell == 0 || d == 0 {
        return Err(Error::InvalidParameter(format!(
            "ell and d must be at least 1 (got ell={ell}, d={d})"
        )));
    }
    Budget::check("candidate vectors", pow_u128(ell as u64, d), budget.vectors)?;

    let mut counts: BTreeMap<u64, u64> = BTreeMap::new();
    for_each_vector(ell, d, |v| *counts.entry(norm_sq(v)).or_default() += 1);
    // BTreeMap iterates norms ascending, so strict `>` keeps the smallest on ties.
    let mut best = (0u64, 0u64);
    for (&norm, &count) in &counts {
        if count > best.1 {
            best = (norm, count);
        }
    }
    let mut vectors = Vec::with_capacity(best.1 as usize);
    for_each_vector(ell, d, |v| {
        if norm_sq(v) == best.0 {
            vectors.push(v.to_vec());
        }
    });
    Ok(AvgFreeSet {
        ell,
        d,
        vectors,
        norm_sq: Some(best.0),
    })
}

impl AvgFreeSet {
    /// Wraps an arbitrary candidate set, e.g. one recovered from a file.
    /// Members are sorted and deduplicated; the set is not checked for the
    /// average-free property here.
    pub fn from_vectors(ell: u32, d: u32, mut vectors: Vec<Vector>) -> Result<Self> {
        if ell == 0 || d == 0 {
            return Err(Error::InvalidParameter("ell and d must be at least 1".into()));
        }
        for v in &vectors {
            if v.len() != d as usize || v.iter().any(|&c| c == 0 || c > ell) {
                return Err(Error::InvalidParameter(format!(
                    "vector {v:?} is not in [{ell}]^{d}"
                )));
            }
        }
        vectors.sort();
        vectors.dedup();
        let norm_sq = match vectors.first() {
            Some(first) => {
                let n = norm_sq(first);
                vectors.iter().all(|v| norm_sq(v) == n).then_some(n)
            }
            None => None,
        };
        Ok(AvgFreeSet {
            ell,
            d,
            vectors,
            norm_sq,
        })
    }

    pub fn ell(&self) -> u32 {
        self.ell
    }

    pub fn d(&self) -> u32 {
        self.d
    }

    pub fn vectors(&self) -> &[Vector] {
        &self.vectors
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn norm_sq(&self) -> Option<u64> {
        self.norm_sq
    }

    /// `⌈ℓ^d / (d·ℓ²)⌉`, the guaranteed size of the largest norm class.
    pub fn pigeonhole_bound(ell: u32, d: u32) -> u128 {
        let total = pow_u128(ell as u64, d);
        let classes = d as u128 * ell as u128 * ell as u128;
        total.div_ceil(classes)
    }

    pub fn contains(&self, v: &[u32]) -> bool {
        self.vectors.binary_search_by(|x| x.as_slice().cmp(v)).is_ok()
    }
}

/// Exhaustive check that no multiset of `t ∈ [2, max_multiset_size]`
/// not-all-equal members averages to a member.
///
/// The average of `y_1..y_t` equals `a` exactly when `Σ y_i = t·a`, so the
/// check works on integer sums. For each target `a` and each `t` the search
/// walks multisets in non-decreasing index order and cuts a branch only
/// when some coordinate can no longer reach `t·a` with the remaining picks.
pub fn verify_avg_free(set: &AvgFreeSet, max_multiset_size: usize, budget: &Budget) -> Result<bool> {
    if max_multiset_size < 2 {
        return Err(Error::InvalidParameter(
            "max_multiset_size must be at least 2".into(),
        ));
    }
    let members = set.vectors();
    if members.len() <= 1 {
        return Ok(true);
    }
    let d = set.d() as usize;
    let m = members.len();
    // suffix_min[i][c] = min over members[i..] of coordinate c
    let mut suffix_min = vec![vec![u64::MAX; d]; m + 1];
    let mut suffix_max = vec![vec![0u64; d]; m + 1];
    for i in (0..m).rev() {
        for c in 0..d {
            let x = members[i][c] as u64;
            suffix_min[i][c] = suffix_min[i + 1][c].min(x);
            suffix_max[i][c] = suffix_max[i + 1][c].max(x);
        }
    }
    let meter = SharedMeter::new("multiset search nodes", budget.multisets);
    let search = Search {
        members,
        suffix_min: &suffix_min,
        suffix_max: &suffix_max,
        meter: &meter,
    };
    let jobs: Vec<(usize, usize)> = (2..=max_multiset_size)
        .flat_map(|t| (0..m).map(move |a| (t, a)))
        .collect();
    let found = jobs
        .par_iter()
        .map(|&(t, a)| search.has_violation(t, a))
        .try_fold(|| false, |acc, r| r.map(|hit| acc || hit))
        .try_reduce(|| false, |x, y| Ok(x || y))?;
    Ok(!found)
}

struct Search<'a> {
    members: &'a [Vector],
    suffix_min: &'a [Vec<u64>],
    suffix_max: &'a [Vec<u64>],
    meter: &'a SharedMeter,
}

impl Search<'_> {
    fn has_violation(&self, t: usize, target_idx: usize) -> Result<bool> {
        let target: Vec<u64> = self.members[target_idx]
            .iter()
            .map(|&c| c as u64 * t as u64)
            .collect();
        let mut partial = vec![0u64; target.len()];
        self.dfs(t, target_idx, &target, 0, 0, true, &mut partial)
    }

    #[allow(clippy::too_many_arguments)]
    fn dfs(
        &self,
        t: usize,
        target_idx: usize,
        target: &[u64],
        start: usize,
        picked: usize,
        all_target: bool,
        partial: &mut [u64],
    ) -> Result<bool> {
        self.meter.tick()?;
        if picked == t {
            return Ok(!all_target && partial == target);
        }
        let remaining = (t - picked) as u64;
        for i in start..self.members.len() {
            let feasible = (0..target.len()).all(|c| {
                partial[c] + remaining * self.suffix_min[i][c] <= target[c]
                    && target[c] <= partial[c] + remaining * self.suffix_max[i][c]
            });
            if !feasible {
                continue;
            }
            for (p, &x) in partial.iter_mut().zip(&self.members[i]) {
                *p += x as u64;
            }
            let hit = self.dfs(
                t,
                target_idx,
                target,
                i,
                picked + 1,
                all_target && i == target_idx,
                partial,
            )?;
            for (p, &x) in partial.iter_mut().zip(&self.members[i]) {
                *p -= x as u64;
            }
            if hit {
                return Ok(true);
            }
        }
        Ok(false)
    }
}
