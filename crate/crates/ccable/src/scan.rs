//! Batch enumeration over bounded instance boxes [e_min..e_max]^n and
//! empirical verification of the solver claims: oracle equivalence,
//! uniqueness for side counts not divisible by four, octagon feasibility,
//! and the equality-count probe for non-strict solutions.
//!
//! Everything is embarrassingly parallel over instances; all aggregation is
//! commutative and results are sorted before reporting, so worker count
//! never changes any reported number.

use std::collections::{BTreeMap, BTreeSet};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::general;
use crate::oracle::{self, OracleBudget, OracleError};
use crate::solver;
use crate::types::{Mode, PatchSpec, SolveError, SolveOutcome, SubdivisionVector};

/// Default ceiling on a scan box's instance count.
pub const DEFAULT_INSTANCE_CAP: u64 = 10_000_000;

/// A box of patch instances: every edge vector in [e_min..e_max]^n.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScanRange {
    pub n: usize,
    pub e_min: i64,
    pub e_max: i64,
    pub mode: Mode,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ScanError {
    #[error("scan box holds {instances} instances, above the cap of {cap}")]
    CapExceeded { instances: u128, cap: u64 },
    #[error("e_min must be at least {minimum} in {mode} mode, got {e_min}")]
    EdgeMinimumBelowMode { e_min: i64, minimum: i64, mode: Mode },
    #[error("empty edge range: e_min {e_min} > e_max {e_max}")]
    EmptyRange { e_min: i64, e_max: i64 },
    #[error("verification expects {expected}, got n = {n}")]
    WrongSideCount { n: usize, expected: &'static str },
    #[error(transparent)]
    Solve(#[from] SolveError),
}

impl ScanRange {
    pub fn instance_count(&self) -> u128 {
        let width = (self.e_max - self.e_min + 1).max(0) as u128;
        width.pow(self.n as u32)
    }

    pub fn validate(&self, cap: u64) -> Result<(), ScanError> {
        if self.n < 2 {
            return Err(SolveError::SideCountBelowTwo { n: self.n }.into());
        }
        if self.e_min > self.e_max {
            return Err(ScanError::EmptyRange {
                e_min: self.e_min,
                e_max: self.e_max,
            });
        }
        let minimum = self.mode.min_edge_count();
        if self.e_min < minimum {
            return Err(ScanError::EdgeMinimumBelowMode {
                e_min: self.e_min,
                minimum,
                mode: self.mode,
            });
        }
        let instances = self.instance_count();
        if instances > cap as u128 {
            return Err(ScanError::CapExceeded { instances, cap });
        }
        Ok(())
    }

    /// Decodes instance `index` (mixed radix, side 0 most significant, so
    /// iteration order is lexicographic over edge vectors).
    pub fn instance(&self, index: u64) -> PatchSpec {
        let width = (self.e_max - self.e_min + 1) as u64;
        let mut edges = vec![self.e_min; self.n];
        let mut rest = index;
        for i in (0..self.n).rev() {
            edges[i] = self.e_min + (rest % width) as i64;
            rest /= width;
        }
        PatchSpec::new(edges).expect("validated range produces valid specs")
    }
}

/// Runs `f` on a rayon pool with the requested worker count (`None` uses
/// the global pool). Scan results do not depend on this choice.
pub fn run_with_workers<R: Send>(workers: Option<usize>, f: impl FnOnce() -> R + Send) -> R {
    match workers {
        None => f(),
        Some(w) => rayon::ThreadPoolBuilder::new()
            .num_threads(w.max(1))
            .build()
            .expect("thread pool")
            .install(f),
    }
}

/// An instance that broke a claim the scan checks, with a description.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Counterexample {
    pub edges: Vec<i64>,
    pub detail: String,
}

/// Aggregate counts over a scan box.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScanReport {
    pub range: ScanRange,
    pub total_instances: u64,
    pub parity_passing: u64,
    pub ccable: u64,
    /// Solution count -> number of instances with that many solutions.
    pub solution_multiplicity: BTreeMap<u64, u64>,
    /// Zero components per solution -> number of solutions.
    pub zero_count: BTreeMap<usize, u64>,
    pub counterexamples: Vec<Counterexample>,
}

impl ScanReport {
    fn empty(range: ScanRange) -> Self {
        ScanReport {
            range,
            total_instances: 0,
            parity_passing: 0,
            ccable: 0,
            solution_multiplicity: BTreeMap::new(),
            zero_count: BTreeMap::new(),
            counterexamples: Vec::new(),
        }
    }

    fn merge(mut self, other: ScanReport) -> Self {
        self.total_instances += other.total_instances;
        self.parity_passing += other.parity_passing;
        self.ccable += other.ccable;
        for (k, v) in other.solution_multiplicity {
            *self.solution_multiplicity.entry(k).or_insert(0) += v;
        }
        for (k, v) in other.zero_count {
            *self.zero_count.entry(k).or_insert(0) += v;
        }
        self.counterexamples.extend(other.counterexamples);
        self
    }
}

/// Solves with the closed forms when they apply, falling back to the
/// propagation solver for n > 8.
pub fn solve_auto(spec: &PatchSpec, mode: Mode) -> Result<SolveOutcome, SolveError> {
    if spec.n() <= 8 {
        solver::solve(spec, mode)
    } else {
        general::solve_general(spec, mode)
    }
}

/// The effective solution set of a solve result: infeasibility and per-mode
/// edge-minimum rejections both mean "no solutions".
pub fn effective_set(
    result: Result<SolveOutcome, SolveError>,
) -> Result<BTreeSet<SubdivisionVector>, SolveError> {
    match result {
        Ok(outcome) => Ok(general::enumerate_solutions(&outcome, usize::MAX)
            .into_iter()
            .collect()),
        Err(SolveError::EdgeCountBelowMinimum { .. }) => Ok(BTreeSet::new()),
        Err(e) => Err(e),
    }
}

/// Scans the whole box, tallying parity, CC-ability, solution multiplicity
/// and zero counts, and recording instances that break solver-internal
/// claims (side equations, solver agreement, uniqueness class).
pub fn scan_range(range: &ScanRange, cap: u64) -> Result<ScanReport, ScanError> {
    range.validate(cap)?;
    let total = range.instance_count() as u64;
    let report = (0..total)
        .into_par_iter()
        .fold(
            || ScanReport::empty(*range),
            |mut acc, index| {
                let spec = range.instance(index);
                acc.total_instances += 1;
                if spec.total_edges() % 2 == 0 {
                    acc.parity_passing += 1;
                }
                let outcome = solve_auto(&spec, range.mode).expect("validated instances solve");
                if spec.n() <= 8 {
                    let general_outcome =
                        general::solve_general(&spec, range.mode).expect("validated");
                    let a: BTreeSet<_> = general::enumerate_solutions(&outcome, usize::MAX)
                        .into_iter()
                        .collect();
                    let b: BTreeSet<_> = general::enumerate_solutions(&general_outcome, usize::MAX)
                        .into_iter()
                        .collect();
                    if a != b {
                        acc.counterexamples.push(Counterexample {
                            edges: spec.edges().to_vec(),
                            detail: "closed-form and propagation solvers disagree".into(),
                        });
                    }
                }
                let solutions = general::enumerate_solutions(&outcome, usize::MAX);
                if !solutions.is_empty() {
                    acc.ccable += 1;
                    *acc
                        .solution_multiplicity
                        .entry(solutions.len() as u64)
                        .or_insert(0) += 1;
                    if !spec.n().is_multiple_of(4) && solutions.len() > 1 {
                        acc.counterexamples.push(Counterexample {
                            edges: spec.edges().to_vec(),
                            detail: format!(
                                "{} solutions for a uniqueness-class side count",
                                solutions.len()
                            ),
                        });
                    }
                }
                for s in &solutions {
                    if !s.satisfies(&spec)
                        || s.values().iter().any(|&v| v < range.mode.min_sub_side())
                    {
                        acc.counterexamples.push(Counterexample {
                            edges: spec.edges().to_vec(),
                            detail: format!("solution {:?} fails the side equations", s.values()),
                        });
                    }
                    *acc.zero_count.entry(s.zero_indices().len()).or_insert(0) += 1;
                }
                acc
            },
        )
        .reduce(|| ScanReport::empty(*range), ScanReport::merge);
    let mut report = report;
    report.counterexamples.sort();
    report.counterexamples.dedup();
    Ok(report)
}

/// A disagreement between solver output and the brute-force oracle.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Mismatch {
    pub edges: Vec<i64>,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EquivalenceReport {
    pub range: ScanRange,
    pub checked: u64,
    /// Instances the oracle could not finish within budget.
    pub skipped: Vec<Vec<i64>>,
    pub mismatches: Vec<Mismatch>,
}

/// Compares the closed-form and propagation solution sets against the
/// brute-force oracle on every instance of the box. Budget blowups are
/// recorded as skipped, never as mismatches.
pub fn verify_oracle_equivalence(
    range: &ScanRange,
    budget: OracleBudget,
    cap: u64,
) -> Result<EquivalenceReport, ScanError> {
    range.validate(cap)?;
    let total = range.instance_count() as u64;
    let (skipped, mismatches, checked) = (0..total)
        .into_par_iter()
        .fold(
            || (Vec::new(), Vec::new(), 0u64),
            |(mut skipped, mut mismatches, mut checked), index| {
                let spec = range.instance(index);
                let truth = match oracle::brute_force_solutions(&spec, range.mode, budget) {
                    Ok(set) => set,
                    Err(OracleError::BudgetExceeded { .. }) => {
                        skipped.push(spec.edges().to_vec());
                        return (skipped, mismatches, checked);
                    }
                };
                checked += 1;
                let closed = effective_set(solve_auto(&spec, range.mode)).expect("in-range");
                if closed != truth {
                    mismatches.push(Mismatch {
                        edges: spec.edges().to_vec(),
                        detail: format!(
                            "solver found {} solutions, oracle {}",
                            closed.len(),
                            truth.len()
                        ),
                    });
                }
                if spec.n() <= 8 {
                    let gen =
                        effective_set(general::solve_general(&spec, range.mode)).expect("in-range");
                    if gen != truth {
                        mismatches.push(Mismatch {
                            edges: spec.edges().to_vec(),
                            detail: format!(
                                "propagation found {} solutions, oracle {}",
                                gen.len(),
                                truth.len()
                            ),
                        });
                    }
                }
                (skipped, mismatches, checked)
            },
        )
        .reduce(
            || (Vec::new(), Vec::new(), 0),
            |(mut s1, mut m1, c1), (s2, m2, c2)| {
                s1.extend(s2);
                m1.extend(m2);
                (s1, m1, c1 + c2)
            },
        );
    let mut skipped = skipped;
    let mut mismatches = mismatches;
    skipped.sort();
    mismatches.sort();
    Ok(EquivalenceReport {
        range: *range,
        checked,
        skipped,
        mismatches,
    })
}

/// Lists instances with two or more solutions, which must not exist for
/// side counts outside the multiple-of-four classes. Counts come from the
/// oracle, independently of the solvers.
pub fn verify_uniqueness(
    range: &ScanRange,
    budget: OracleBudget,
    cap: u64,
) -> Result<Vec<Counterexample>, ScanError> {
    if range.n.is_multiple_of(4) {
        return Err(ScanError::WrongSideCount {
            n: range.n,
            expected: "a side count not divisible by 4",
        });
    }
    range.validate(cap)?;
    let total = range.instance_count() as u64;
    let mut violations: Vec<Counterexample> = (0..total)
        .into_par_iter()
        .filter_map(|index| {
            let spec = range.instance(index);
            let truth = oracle::brute_force_solutions(&spec, range.mode, budget).ok()?;
            (truth.len() > 1).then(|| Counterexample {
                edges: spec.edges().to_vec(),
                detail: format!("{} solutions found by the oracle", truth.len()),
            })
        })
        .collect();
    violations.sort();
    Ok(violations)
}

/// For n = 8, strict mode: every instance passing the two opposite-pair
/// equalities must admit at least one strict solution.
pub fn verify_octa_feasibility(range: &ScanRange, cap: u64) -> Result<Vec<Counterexample>, ScanError> {
    if range.n != 8 {
        return Err(ScanError::WrongSideCount {
            n: range.n,
            expected: "n = 8",
        });
    }
    if range.mode != Mode::Strict {
        return Err(ScanError::EdgeMinimumBelowMode {
            e_min: range.e_min,
            minimum: Mode::Strict.min_edge_count(),
            mode: range.mode,
        });
    }
    range.validate(cap)?;
    let total = range.instance_count() as u64;
    let mut violations: Vec<Counterexample> = (0..total)
        .into_par_iter()
        .filter_map(|index| {
            let spec = range.instance(index);
            let e = spec.edges();
            let balanced = e[0] + e[4] == e[2] + e[6] && e[1] + e[5] == e[3] + e[7];
            if !balanced {
                return None;
            }
            let outcome = solver::solve(&spec, Mode::Strict).expect("in-range");
            (outcome.solution_count() == 0).then(|| Counterexample {
                edges: e.to_vec(),
                detail: "balanced octagon without a strict solution".into(),
            })
        })
        .collect();
    violations.sort();
    Ok(violations)
}

/// Distribution of zero components over all non-strict solutions in a box,
/// with the extremal instances. Reports findings; asserts nothing.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProbeReport {
    pub range: ScanRange,
    pub zero_histogram: BTreeMap<usize, u64>,
    pub max_zero_count: usize,
    /// Instances and solutions attaining the maximum (capped list).
    pub extremal: Vec<(Vec<i64>, Vec<i64>)>,
}

const EXTREMAL_CAP: usize = 12;

/// Counts zero components of every non-strict solution in the box.
pub fn probe_equality_count(range: &ScanRange, cap: u64) -> Result<ProbeReport, ScanError> {
    if range.mode != Mode::NonStrict {
        return Err(ScanError::EdgeMinimumBelowMode {
            e_min: range.e_min,
            minimum: Mode::NonStrict.min_edge_count(),
            mode: range.mode,
        });
    }
    range.validate(cap)?;
    let total = range.instance_count() as u64;
    type Acc = (BTreeMap<usize, u64>, usize, Vec<(Vec<i64>, Vec<i64>)>);
    fn merge(mut a: Acc, b: Acc) -> Acc {
        for (k, v) in b.0 {
            *a.0.entry(k).or_insert(0) += v;
        }
        use std::cmp::Ordering;
        match a.1.cmp(&b.1) {
            Ordering::Less => {
                a.1 = b.1;
                a.2 = b.2;
            }
            Ordering::Equal => a.2.extend(b.2),
            Ordering::Greater => {}
        }
        a.2.sort();
        a.2.dedup();
        a.2.truncate(EXTREMAL_CAP);
        a
    }
    let (zero_histogram, max_zero_count, extremal) = (0..total)
        .into_par_iter()
        .fold(
            || (BTreeMap::new(), 0usize, Vec::new()),
            |acc: Acc, index| {
                let spec = range.instance(index);
                let outcome = solve_auto(&spec, Mode::NonStrict).expect("in-range");
                let mut local: Acc = (BTreeMap::new(), 0, Vec::new());
                for s in general::enumerate_solutions(&outcome, usize::MAX) {
                    let zeros = s.zero_indices().len();
                    *local.0.entry(zeros).or_insert(0) += 1;
                    if zeros > local.1 {
                        local.1 = zeros;
                        local.2 = vec![(spec.edges().to_vec(), s.values().to_vec())];
                    } else if zeros == local.1 && zeros > 0 {
                        local.2.push((spec.edges().to_vec(), s.values().to_vec()));
                    }
                }
                merge(acc, local)
            },
        )
        .reduce(|| (BTreeMap::new(), 0, Vec::new()), merge);
    Ok(ProbeReport {
        range: *range,
        zero_histogram,
        max_zero_count,
        extremal,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn range(n: usize, e_min: i64, e_max: i64, mode: Mode) -> ScanRange {
        ScanRange {
            n,
            e_min,
            e_max,
            mode,
        }
    }

    #[test]
    fn triangle_box_matches_conditions() {
        let report = scan_range(&range(3, 2, 4, Mode::Strict), DEFAULT_INSTANCE_CAP).unwrap();
        assert_eq!(report.total_instances, 27);
        assert!(report.counterexamples.is_empty());
        // CC-able exactly when parity and the three inequalities hold.
        let mut expected = 0;
        for e0 in 2..=4i64 {
            for e1 in 2..=4i64 {
                for e2 in 2..=4i64 {
                    let parity = (e0 + e1 + e2) % 2 == 0;
                    let tri = e1 + e2 > e0 && e0 + e2 > e1 && e0 + e1 > e2;
                    if parity && tri {
                        expected += 1;
                    }
                }
            }
        }
        assert_eq!(report.ccable, expected);
    }

    #[test]
    fn two_sided_box_lists_even_pairs() {
        let report = scan_range(&range(2, 2, 5, Mode::Strict), DEFAULT_INSTANCE_CAP).unwrap();
        assert_eq!(report.total_instances, 16);
        assert_eq!(report.ccable, 4); // (2,2),(2,4),(4,2),(4,4)
        assert!(report.counterexamples.is_empty());
    }

    #[test]
    fn octagon_box_has_multiple_solutions_somewhere() {
        let report = scan_range(&range(8, 2, 4, Mode::Strict), DEFAULT_INSTANCE_CAP).unwrap();
        assert!(report.counterexamples.is_empty());
        assert!(report.solution_multiplicity.keys().any(|&k| k >= 2));
        assert!(report.solution_multiplicity.values().sum::<u64>() == report.ccable);
    }

    #[test]
    fn oracle_equivalence_small_boxes() {
        for r in [
            range(5, 2, 4, Mode::Strict),
            range(5, 1, 3, Mode::NonStrict),
            range(6, 2, 3, Mode::Strict),
            range(4, 1, 3, Mode::NonStrict),
        ] {
            let report =
                verify_oracle_equivalence(&r, OracleBudget::default(), DEFAULT_INSTANCE_CAP)
                    .unwrap();
            assert!(report.mismatches.is_empty(), "{r:?}");
            assert!(report.skipped.is_empty(), "{r:?}");
            assert_eq!(report.checked, r.instance_count() as u64);
        }
    }

    #[test]
    fn uniqueness_holds_for_small_boxes() {
        for r in [
            range(3, 2, 6, Mode::Strict),
            range(5, 2, 4, Mode::Strict),
            range(7, 2, 3, Mode::Strict),
            range(6, 1, 3, Mode::NonStrict),
        ] {
            let violations =
                verify_uniqueness(&r, OracleBudget::default(), DEFAULT_INSTANCE_CAP).unwrap();
            assert!(violations.is_empty(), "{r:?}");
        }
        assert!(matches!(
            verify_uniqueness(
                &range(8, 2, 3, Mode::Strict),
                OracleBudget::default(),
                DEFAULT_INSTANCE_CAP
            ),
            Err(ScanError::WrongSideCount { .. })
        ));
    }

    #[test]
    fn octa_feasibility_small_box() {
        let violations =
            verify_octa_feasibility(&range(8, 2, 3, Mode::Strict), DEFAULT_INSTANCE_CAP).unwrap();
        assert!(violations.is_empty());
    }

    #[test]
    fn probe_finds_the_four_zero_octagon() {
        let report =
            probe_equality_count(&range(8, 1, 2, Mode::NonStrict), DEFAULT_INSTANCE_CAP).unwrap();
        assert_eq!(report.max_zero_count, 4);
        assert!(report.extremal.iter().all(|(_, s)| s.iter().filter(|&&v| v == 0).count() == 4));

        // The all-2 octagon contributes the four-zero member directly.
        let single =
            probe_equality_count(&range(8, 2, 2, Mode::NonStrict), DEFAULT_INSTANCE_CAP).unwrap();
        assert_eq!(single.max_zero_count, 4);
        assert!(single
            .extremal
            .iter()
            .any(|(e, s)| e == &vec![2; 8] && s == &vec![0, 0, 2, 2, 0, 0, 2, 2]));

        let tri = probe_equality_count(&range(3, 1, 5, Mode::NonStrict), DEFAULT_INSTANCE_CAP)
            .unwrap();
        assert!(tri.max_zero_count <= 2);
    }

    #[test]
    fn reports_do_not_depend_on_worker_count() {
        let r = range(6, 2, 3, Mode::Strict);
        let one = run_with_workers(Some(1), || scan_range(&r, DEFAULT_INSTANCE_CAP)).unwrap();
        let four = run_with_workers(Some(4), || scan_range(&r, DEFAULT_INSTANCE_CAP)).unwrap();
        assert_eq!(one, four);
        let probe_range = range(5, 1, 3, Mode::NonStrict);
        let p1 =
            run_with_workers(Some(1), || probe_equality_count(&probe_range, DEFAULT_INSTANCE_CAP))
                .unwrap();
        let p4 =
            run_with_workers(Some(4), || probe_equality_count(&probe_range, DEFAULT_INSTANCE_CAP))
                .unwrap();
        assert_eq!(p1, p4);
    }

    #[test]
    fn budget_exhaustion_is_recorded_as_skipped() {
        let r = range(8, 2, 3, Mode::Strict);
        let report =
            verify_oracle_equivalence(&r, OracleBudget { max_candidates: 20 }, DEFAULT_INSTANCE_CAP)
                .unwrap();
        assert!(report.mismatches.is_empty());
        assert!(!report.skipped.is_empty());
        assert_eq!(
            report.checked + report.skipped.len() as u64,
            r.instance_count() as u64
        );
    }

    #[test]
    fn scan_covers_side_counts_beyond_the_closed_forms() {
        let report = scan_range(&range(12, 3, 3, Mode::Strict), DEFAULT_INSTANCE_CAP).unwrap();
        assert_eq!(report.total_instances, 1);
        assert_eq!(report.ccable, 1);
        assert_eq!(report.solution_multiplicity.get(&4), Some(&1));
        assert!(report.counterexamples.is_empty());
    }

    #[test]
    fn cap_and_mode_validation() {
        assert!(matches!(
            scan_range(&range(8, 1, 8, Mode::NonStrict), 1000),
            Err(ScanError::CapExceeded { .. })
        ));
        assert!(matches!(
            scan_range(&range(3, 1, 4, Mode::Strict), DEFAULT_INSTANCE_CAP),
            Err(ScanError::EdgeMinimumBelowMode { .. })
        ));
        assert!(matches!(
            probe_equality_count(&range(3, 2, 4, Mode::Strict), DEFAULT_INSTANCE_CAP),
            Err(ScanError::EdgeMinimumBelowMode { .. })
        ));
    }
}
