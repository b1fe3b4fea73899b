//! Closed-form feasibility decision and subdivision computation for patches
//! with 2 to 8 sides, with per-condition diagnostics.
//!
//! Everything here is exact integer arithmetic: the conditions are parities,
//! equalities and linear inequalities on the edge counts, and the solutions
//! are integer vectors recovered by inverting the circulant side equations.

use crate::types::{
    Condition, ConditionStatus, Family, FreeParam, IndexParity, Mode, PatchSpec, SingularityClass,
    SolveError, SolveOutcome, SubdivisionVector, violations,
};

/// True iff the total edge count is even. A necessary condition for any
/// all-quad tessellation.
pub fn check_parity(spec: &PatchSpec) -> bool {
    spec.total_edges() % 2 == 0
}

/// Placement of the irregular vertex implied by a subdivision vector.
pub fn classify(s: &SubdivisionVector) -> SingularityClass {
    s.classify()
}

/// Evaluates every feasibility condition applicable to `spec` (2 <= n <= 8).
///
/// The list is consistent with [`solve`] in both modes: a strict solution
/// exists iff every condition is satisfied strictly, and a non-strict one
/// exists iff no condition is violated.
pub fn condition_report(spec: &PatchSpec) -> Result<Vec<ConditionStatus>, SolveError> {
    let e = |i: isize| spec.edge(i);
    let n = spec.n() as isize;
    let mut out = vec![ConditionStatus::parity(Condition::Parity, spec.total_edges())];
    match spec.n() {
        2 => {
            out.push(subset_parity(spec, IndexParity::Even));
            out.push(subset_parity(spec, IndexParity::Odd));
        }
        3 => {
            for i in 0..n {
                out.push(ConditionStatus::inequality(
                    i as usize,
                    e(i - 1) + e(i + 1),
                    e(i),
                ));
            }
        }
        4 => {
            out.push(ConditionStatus::equality(IndexParity::Even, e(0), e(2)));
            out.push(ConditionStatus::equality(IndexParity::Odd, e(1), e(3)));
            out.push(ConditionStatus::param_gap(0, 0, 2, 0, e(1)));
            out.push(ConditionStatus::param_gap(1, 1, 3, 0, e(0)));
        }
        5 => {
            for i in 0..n {
                out.push(ConditionStatus::inequality(
                    i as usize,
                    e(i - 1) + e(i) + e(i + 1),
                    e(i - 2) + e(i + 2),
                ));
            }
        }
        6 => {
            out.push(subset_parity(spec, IndexParity::Even));
            out.push(subset_parity(spec, IndexParity::Odd));
            for i in 0..n {
                out.push(ConditionStatus::inequality(
                    i as usize,
                    e(i - 1) + e(i + 1),
                    e(i + 3),
                ));
            }
        }
        7 => {
            for i in 0..n {
                out.push(ConditionStatus::inequality(
                    i as usize,
                    e(i - 2) + e(i - 1) + e(i + 1) + e(i + 2),
                    e(i) + e(i + 3) + e(i + 4),
                ));
            }
        }
        8 => {
            out.push(ConditionStatus::equality(
                IndexParity::Even,
                e(0) + e(4),
                e(2) + e(6),
            ));
            out.push(ConditionStatus::equality(
                IndexParity::Odd,
                e(1) + e(5),
                e(3) + e(7),
            ));
            // k_0 = s_0: lower bounds from s_0 and s_4, uppers from s_2, s_6.
            for (lower_from, lower) in [(0usize, 0), (4, e(1) - e(3))] {
                out.push(ConditionStatus::param_gap(0, lower_from, 2, lower, e(1)));
                out.push(ConditionStatus::param_gap(0, lower_from, 6, lower, e(7)));
            }
            // k_1 = s_1: lower bounds from s_1 and s_5, uppers from s_3, s_7.
            for (lower_from, lower) in [(1usize, 0), (5, e(2) - e(4))] {
                out.push(ConditionStatus::param_gap(1, lower_from, 3, lower, e(2)));
                out.push(ConditionStatus::param_gap(1, lower_from, 7, lower, e(0)));
            }
        }
        n => return Err(SolveError::UnsupportedSideCount { n }),
    }
    Ok(out)
}

fn subset_parity(spec: &PatchSpec, subset: IndexParity) -> ConditionStatus {
    let offset = match subset {
        IndexParity::Even => 0,
        IndexParity::Odd => 1,
    };
    let sum = spec
        .edges()
        .iter()
        .skip(offset)
        .step_by(2)
        .copied()
        .sum::<i64>();
    ConditionStatus::parity(Condition::SubsetParity { subset }, sum)
}

/// Decides CC-ability of `spec` in `mode` and returns the unique solution,
/// the two-parameter family, or every violated condition.
pub fn solve(spec: &PatchSpec, mode: Mode) -> Result<SolveOutcome, SolveError> {
    spec.validate_for(mode)?;
    let conditions = condition_report(spec)?;
    let reasons = violations(&conditions, mode);
    if !reasons.is_empty() {
        return Ok(SolveOutcome::infeasible(reasons, spec.n()));
    }

    let e = |i: isize| spec.edge(i);
    let outcome = match spec.n() {
        2 => unique(spec, mode, vec![e(1) / 2, e(0) / 2]),
        3 => half(spec, mode, |i| e(i - 1) - e(i) + e(i + 1)),
        5 => half(spec, mode, |i| {
            e(i - 1) + e(i) + e(i + 1) - e(i - 2) - e(i + 2)
        }),
        6 => half(spec, mode, |i| e(i - 1) + e(i + 1) - e(i + 3)),
        7 => half(spec, mode, |i| {
            e(i - 2) + e(i - 1) + e(i + 1) + e(i + 2) - e(i) - e(i + 3) - e(i + 4)
        }),
        4 => SolveOutcome::family(Family::new(
            vec![0, 0, e(1), e(0)],
            vec![1, 1, -1, -1],
            [
                free_param(0, e(1), mode),
                free_param(0, e(0), mode),
            ],
        )),
        8 => SolveOutcome::family(Family::new(
            vec![0, 0, e(1), e(2), e(3) - e(1), e(4) - e(2), e(7), e(0)],
            vec![1, 1, -1, -1, 1, 1, -1, -1],
            [
                free_param((e(1) - e(3)).max(0), e(1).min(e(7)), mode),
                free_param((e(2) - e(4)).max(0), e(2).min(e(0)), mode),
            ],
        )),
        _ => unreachable!("condition_report rejected n outside 2..=8"),
    };
    Ok(outcome)
}

fn free_param(lower: i64, upper: i64, mode: Mode) -> FreeParam {
    FreeParam {
        lower,
        upper,
        open: mode == Mode::Strict,
    }
}

/// Builds the unique solution s_i = numerator(i) / 2, asserting that the
/// parity conditions made every division exact.
fn half(spec: &PatchSpec, mode: Mode, numerator: impl Fn(isize) -> i64) -> SolveOutcome {
    let s = (0..spec.n() as isize)
        .map(|i| {
            let num = numerator(i);
            assert!(num % 2 == 0, "parity conditions guarantee exact division");
            num / 2
        })
        .collect();
    unique(spec, mode, s)
}

fn unique(spec: &PatchSpec, mode: Mode, s: Vec<i64>) -> SolveOutcome {
    let s = SubdivisionVector::new(s);
    debug_assert!(s.satisfies(spec));
    debug_assert!(s.values().iter().all(|&v| v >= mode.min_sub_side()));
    SolveOutcome::unique(s)
}
