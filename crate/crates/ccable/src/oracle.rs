//! Brute-force ground truth: enumerates every subdivision vector satisfying
//! the side equations by direct depth-first search.
//!
//! This module deliberately knows nothing about the closed forms or the
//! propagation algebra; it only checks e_i = s_{i-1} + s_{i+1} row by row.
//! The solvers are tested against it.
//!
//! Calls are pure and thread-safe; callers wanting parallelism can shard
//! the instance space (or the outermost s_0 range) and take the union.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::types::{Mode, PatchSpec, SubdivisionVector};

/// Cap on the number of candidate assignments the search may visit.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OracleBudget {
    pub max_candidates: u64,
}

impl Default for OracleBudget {
    fn default() -> Self {
        OracleBudget {
            max_candidates: 10_000_000,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("oracle budget exceeded: visited {visited} candidates (cap {max_candidates})")]
    BudgetExceeded { visited: u64, max_candidates: u64 },
}

/// Enumerates the exact set of subdivision vectors for `spec` in `mode`.
///
/// Components are bounded above by max_j e_j, which is sound because
/// s_i <= s_i + s_{i+2} = e_{i+1}. Each side equation is checked as soon as
/// both of its terms are fixed, pruning the search.
pub fn brute_force_solutions(
    spec: &PatchSpec,
    mode: Mode,
    budget: OracleBudget,
) -> Result<BTreeSet<SubdivisionVector>, OracleError> {
    let bound = spec.edges().iter().copied().max().unwrap_or(0);
    brute_force_with_bound(spec, mode, budget, bound)
}

fn brute_force_with_bound(
    spec: &PatchSpec,
    mode: Mode,
    budget: OracleBudget,
    bound: i64,
) -> Result<BTreeSet<SubdivisionVector>, OracleError> {
    let n = spec.n();
    // rows_ready[k] lists the side equations whose two terms are all fixed
    // once s_0..=s_k are assigned.
    let mut rows_ready: Vec<Vec<usize>> = vec![Vec::new(); n];
    for i in 0..n {
        let a = (i + n - 1) % n;
        let b = (i + 1) % n;
        rows_ready[a.max(b)].push(i);
    }
    let mut search = Search {
        spec,
        lo: mode.min_sub_side(),
        bound,
        rows_ready,
        budget: budget.max_candidates,
        visited: 0,
        s: vec![0; n],
        out: BTreeSet::new(),
    };
    search.dfs(0)?;
    Ok(search.out)
}

struct Search<'a> {
    spec: &'a PatchSpec,
    lo: i64,
    bound: i64,
    rows_ready: Vec<Vec<usize>>,
    budget: u64,
    visited: u64,
    s: Vec<i64>,
    out: BTreeSet<SubdivisionVector>,
}

impl Search<'_> {
    fn dfs(&mut self, k: usize) -> Result<(), OracleError> {
        if k == self.s.len() {
            self.out.insert(SubdivisionVector::new(self.s.clone()));
            return Ok(());
        }
        for v in self.lo..=self.bound {
            self.visited += 1;
            if self.visited > self.budget {
                return Err(OracleError::BudgetExceeded {
                    visited: self.visited,
                    max_candidates: self.budget,
                });
            }
            self.s[k] = v;
            if self.rows_ready[k].iter().all(|&i| self.row_holds(i)) {
                self.dfs(k + 1)?;
            }
        }
        Ok(())
    }

    fn row_holds(&self, i: usize) -> bool {
        let n = self.s.len();
        self.spec.edges()[i] == self.s[(i + n - 1) % n] + self.s[(i + 1) % n]
    }
}
