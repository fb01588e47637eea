//! Enumeration caps shared by the brute-force routines.
//!
//! Every exhaustive routine takes a [`Budget`] and fails with
//! [`Error::BudgetExceeded`] instead of running away. The defaults can be
//! overridden through the `MISFORGE_BUDGET` environment variable, either as a
//! single integer (applied to every counting cap) or as a comma-separated
//! list of `key=value` pairs with keys `vectors`, `multisets`, `paths`,
//! `edges` and `mis_vertices`.

use std::sync::atomic::{AtomicU64, Ordering};

use crate::error::{Error, Result};

pub const BUDGET_ENV: &str = "MISFORGE_BUDGET";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Budget {
    /// Candidate vectors enumerated when building an average-free set or a DUP layer.
    pub vectors: u64,
    /// Search nodes visited while checking multiset averages.
    pub multisets: u64,
    /// Layered paths (and DFS nodes) visited while enumerating paths.
    pub paths: u64,
    /// Edges materialized for one generated instance.
    pub edges: u64,
    /// Largest graph handed to the exact MIS enumerator.
    pub mis_vertices: usize,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            vectors: 1 << 24,
            multisets: 1 << 32,
            paths: 1 << 28,
            edges: 1 << 27,
            mis_vertices: 24,
        }
    }
}

impl Budget {
    /// Defaults, overridden by `MISFORGE_BUDGET` when it is set.
    pub fn from_env() -> Result<Self> {
        match std::env::var(BUDGET_ENV) {
            Ok(value) => Budget::default().with_overrides(&value),
            Err(_) => Ok(Budget::default()),
        }
    }

    pub fn with_overrides(mut self, spec: &str) -> Result<Self> {
        let spec = spec.trim();
        if spec.is_empty() {
            return Ok(self);
        }
        if let Ok(all) = spec.parse::<u64>() {
            if all == 0 {
                return Err(Error::InvalidParameter("budget must be positive".into()));
            }
            self.vectors = all;
            self.multisets = all;
            self.paths = all;
            self.edges = all;
            return Ok(self);
        }
        for part in spec.split(',') {
            let (key, value) = part.split_once('=').ok_or_else(|| {
                Error::InvalidParameter(format!("budget entry `{part}` is not key=value"))
            })?;
            let value: u64 = value.trim().parse().map_err(|_| {
                Error::InvalidParameter(format!("budget value `{value}` is not an integer"))
            })?;
            if value == 0 {
                return Err(Error::InvalidParameter("budget must be positive".into()));
            }
            match key.trim() {
                "vectors" => self.vectors = value,
                "multisets" => self.multisets = value,
                "paths" => self.paths = value,
                "edges" => self.edges = value,
                "mis_vertices" => self.mis_vertices = value as usize,
                other => {
                    return Err(Error::InvalidParameter(format!("unknown budget key `{other}`")))
                }
            }
        }
        Ok(self)
    }

    pub(crate) fn check(what: &'static str, needed: u128, cap: u64) -> Result<()> {
        if needed > cap as u128 {
            Err(Error::BudgetExceeded {
                what,
                needed,
                cap: cap as u128,
            })
        } else {
            Ok(())
        }
    }
}

/// Thread-safe work counter for searches that fan out across rayon tasks.
#[derive(Debug)]
pub(crate) struct SharedMeter {
    what: &'static str,
    used: AtomicU64,
    cap: u64,
}

impl SharedMeter {
    pub(crate) fn new(what: &'static str, cap: u64) -> Self {
        SharedMeter {
            what,
            used: AtomicU64::new(0),
            cap,
        }
    }

    #[inline]
    pub(crate) fn tick(&self) -> Result<()> {
        let used = self.used.fetch_add(1, Ordering::Relaxed) + 1;
        if used > self.cap {
            Err(Error::BudgetExceeded {
                what: self.what,
                needed: used as u128,
                cap: self.cap as u128,
            })
        } else {
            Ok(())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_value_overrides_counting_caps() {
        let b = Budget::default().with_overrides("1000").unwrap();
        assert_eq!(b.vectors, 1000);
        assert_eq!(b.paths, 1000);
        assert_eq!(b.multisets, 1000);
        assert_eq!(b.mis_vertices, 24);
    }

    #[test]
    fn keyed_overrides() {
        let b = Budget::default()
            .with_overrides("paths=7, mis_vertices=30")
            .unwrap();
        assert_eq!(b.paths, 7);
        assert_eq!(b.mis_vertices, 30);
        assert_eq!(b.vectors, 1 << 24);
        assert!(Budget::default().with_overrides("bogus=1").is_err());
        assert!(Budget::default().with_overrides("0").is_err());
    }

    #[test]
    fn meter_trips_past_cap() {
        let m = SharedMeter::new("x", 2);
        assert!(m.tick().is_ok());
        assert!(m.tick().is_ok());
        assert!(m.tick().unwrap_err().is_budget());
    }
}
