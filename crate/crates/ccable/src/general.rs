//! Propagation solver for arbitrary side counts.
//!
//! The side equations link every other sub-side: s_{i+2} = e_{i+1} - s_i.
//! Seeding one symbolic parameter per index-parity chain (a single chain
//! when n is odd) and walking each chain yields every s_i as an affine
//! expression, plus one closure constraint per chain. Odd-length chains pin
//! their parameter; even-length chains (n divisible by 4) leave it free
//! subject to a consistency equation, producing the two-parameter families.

use crate::types::{
    Family, FailureReason, FreeParam, IndexParity, Mode, PatchSpec, SolveError, SolveOutcome,
    SubdivisionVector,
};

/// A sub-side count during propagation, as a degree-1 expression
/// coeffs . e + sign * k_param. The parameter sign stays in {+1, -1}
/// because each propagation step only negates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AffineExpr {
    edge_coeffs: Vec<i64>,
    param_sign: i64,
    param: usize,
}

impl AffineExpr {
    fn seed(n: usize, param: usize) -> Self {
        AffineExpr {
            edge_coeffs: vec![0; n],
            param_sign: 1,
            param,
        }
    }

    /// The expression for the next chain element, s_next = e_edge - self.
    fn step(&self, edge: usize) -> Self {
        let mut edge_coeffs: Vec<i64> = self.edge_coeffs.iter().map(|&c| -c).collect();
        edge_coeffs[edge] += 1;
        AffineExpr {
            edge_coeffs,
            param_sign: -self.param_sign,
            param: self.param,
        }
    }

    /// The constant term a in s = a + sign * k, for a concrete spec.
    pub fn constant(&self, spec: &PatchSpec) -> i64 {
        dot(&self.edge_coeffs, spec.edges())
    }

    pub fn param_sign(&self) -> i64 {
        self.param_sign
    }

    pub fn param(&self) -> usize {
        self.param
    }
}

/// What a chain's closing equation demands of its seeded parameter.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ClosureConstraint {
    /// 2k = coeffs . e: the chain has odd length and pins k.
    UniqueValue { param: usize, coeffs: Vec<i64> },
    /// coeffs . e must vanish: the chain has even length and k stays free.
    ConsistencyEquation { param: usize, coeffs: Vec<i64> },
}

fn dot(coeffs: &[i64], edges: &[i64]) -> i64 {
    coeffs.iter().zip(edges).map(|(&c, &e)| c * e).sum()
}

/// Splits coeffs . e into the positive and negative contributions, giving
/// the two comparable sides of a condition on the edge counts alone.
fn sides(coeffs: &[i64], edges: &[i64]) -> (i64, i64) {
    let mut lhs = 0;
    let mut rhs = 0;
    for (&c, &e) in coeffs.iter().zip(edges) {
        if c > 0 {
            lhs += c * e;
        } else {
            rhs -= c * e;
        }
    }
    (lhs, rhs)
}

fn propagate(spec: &PatchSpec) -> (Vec<AffineExpr>, Vec<ClosureConstraint>) {
    let n = spec.n();
    let seeds: &[usize] = if n % 2 == 1 { &[0] } else { &[0, 1] };
    let mut exprs: Vec<Option<AffineExpr>> = vec![None; n];
    let mut closures = Vec::new();
    for (param, &start) in seeds.iter().enumerate() {
        let mut cur = AffineExpr::seed(n, param);
        exprs[start] = Some(cur.clone());
        let mut idx = start;
        loop {
            let next = cur.step((idx + 1) % n);
            let next_idx = (idx + 2) % n;
            if next_idx == start {
                // Closing equation: k = coeffs . e + sign * k.
                closures.push(if next.param_sign == -1 {
                    ClosureConstraint::UniqueValue {
                        param,
                        coeffs: next.edge_coeffs,
                    }
                } else {
                    ClosureConstraint::ConsistencyEquation {
                        param,
                        coeffs: next.edge_coeffs,
                    }
                });
                break;
            }
            exprs[next_idx] = Some(next.clone());
            cur = next;
            idx = next_idx;
        }
    }
    let exprs = exprs.into_iter().map(Option::unwrap).collect();
    (exprs, closures)
}

/// The alternating subset of edges a chain consumes: the chain seeded on
/// even sub-sides steps through odd-indexed edges and vice versa.
fn edge_subset_of(param: usize) -> IndexParity {
    if param == 0 {
        IndexParity::Odd
    } else {
        IndexParity::Even
    }
}

fn subset_sum(spec: &PatchSpec, subset: IndexParity) -> i64 {
    let offset = match subset {
        IndexParity::Even => 0,
        IndexParity::Odd => 1,
    };
    spec.edges().iter().skip(offset).step_by(2).sum()
}

/// Solves the side equations for any n >= 2 by symbolic propagation.
///
/// Agrees with [`crate::solver::solve`] on the full solution set wherever
/// both apply (2 <= n <= 8).
pub fn solve_general(spec: &PatchSpec, mode: Mode) -> Result<SolveOutcome, SolveError> {
    spec.validate_for(mode)?;
    let (exprs, closures) = propagate(spec);
    let pinned = matches!(closures[0], ClosureConstraint::UniqueValue { .. });
    if pinned {
        Ok(solve_pinned(spec, mode, &exprs, &closures))
    } else {
        Ok(solve_family(spec, mode, &exprs, &closures))
    }
}

/// Odd n and n = 2 (mod 4): every chain pins its parameter.
fn solve_pinned(
    spec: &PatchSpec,
    mode: Mode,
    exprs: &[AffineExpr],
    closures: &[ClosureConstraint],
) -> SolveOutcome {
    let n = spec.n();
    let edges = spec.edges();
    let mut reasons = Vec::new();

    let total = spec.total_edges();
    if n.is_multiple_of(2) && total % 2 != 0 {
        reasons.push(FailureReason::ParityViolation { total });
    }

    let mut closure_coeffs: Vec<&[i64]> = vec![&[]; closures.len()];
    for closure in closures {
        let ClosureConstraint::UniqueValue { param, coeffs } = closure else {
            unreachable!("pinned path sees only UniqueValue closures");
        };
        let c = dot(coeffs, edges);
        if n % 2 == 1 {
            // The closing constant has the parity of the full edge total.
            assert_eq!(c.rem_euclid(2), total.rem_euclid(2));
            if c % 2 != 0 {
                reasons.push(FailureReason::ParityViolation { total });
            }
        } else {
            let subset = edge_subset_of(*param);
            let sum = subset_sum(spec, subset);
            assert_eq!(c.rem_euclid(2), sum.rem_euclid(2));
            if c % 2 != 0 {
                reasons.push(FailureReason::SubsetParityViolation { subset, sum });
            }
        }
        closure_coeffs[*param] = coeffs;
    }

    // Sign conditions, evaluated on doubled values so they are meaningful
    // even when a parity check failed: 2 s_i = (2 a + sign * c) with integer
    // coefficients on the edge counts.
    let mut doubled = Vec::with_capacity(n);
    for expr in exprs {
        let c = closure_coeffs[expr.param];
        let d: Vec<i64> = expr
            .edge_coeffs
            .iter()
            .zip(c)
            .map(|(&a, &b)| 2 * a + expr.param_sign * b)
            .collect();
        doubled.push(d);
    }
    for (i, d) in doubled.iter().enumerate() {
        let (lhs, rhs) = sides(d, edges);
        let violated = match mode {
            Mode::Strict => lhs <= rhs,
            Mode::NonStrict => lhs < rhs,
        };
        if violated {
            reasons.push(FailureReason::InequalityViolation { index: i, lhs, rhs });
        }
    }

    if !reasons.is_empty() {
        return SolveOutcome::infeasible(reasons, n);
    }
    let s = doubled
        .iter()
        .map(|d| {
            let twice = dot(d, edges);
            assert!(twice % 2 == 0, "parity checks guarantee exact division");
            twice / 2
        })
        .collect();
    let s = SubdivisionVector::new(s);
    debug_assert!(s.satisfies(spec));
    SolveOutcome::unique(s)
}

/// n = 0 (mod 4): both parameters stay free; feasibility is two equalities
/// plus non-empty parameter intervals.
fn solve_family(
    spec: &PatchSpec,
    mode: Mode,
    exprs: &[AffineExpr],
    closures: &[ClosureConstraint],
) -> SolveOutcome {
    let n = spec.n();
    let edges = spec.edges();
    let mut reasons = Vec::new();

    let total = spec.total_edges();
    if total % 2 != 0 {
        reasons.push(FailureReason::ParityViolation { total });
    }

    for closure in closures {
        let ClosureConstraint::ConsistencyEquation { param, coeffs } = closure else {
            unreachable!("family path sees only consistency closures");
        };
        if dot(coeffs, edges) != 0 {
            let (lhs, rhs) = sides(coeffs, edges);
            reasons.push(FailureReason::EqualitySystemViolation {
                system: edge_subset_of(*param),
                lhs,
                rhs,
            });
        }
    }

    // Interval per parameter: s_i = a_i + k >= lo gives lower bounds,
    // s_i = a_i - k >= lo gives upper bounds. In exclusive form the bounds
    // are -a_i and a_i regardless of mode; strictness decides openness.
    let mut params = [FreeParam {
        lower: 0,
        upper: 0,
        open: mode == Mode::Strict,
    }; 2];
    let mut offsets = Vec::with_capacity(n);
    let mut signs = Vec::with_capacity(n);
    for (p, param) in params.iter_mut().enumerate() {
        let mut lower: Option<(i64, usize)> = None;
        let mut upper: Option<(i64, usize)> = None;
        for (i, expr) in exprs.iter().enumerate() {
            if expr.param != p {
                continue;
            }
            let a = expr.constant(spec);
            if expr.param_sign == 1 {
                if lower.is_none() || -a > lower.unwrap().0 {
                    lower = Some((-a, i));
                }
            } else if upper.is_none() || a < upper.unwrap().0 {
                upper = Some((a, i));
            }
        }
        let (lower, _lower_from) = lower.expect("even chains have both signs");
        let (upper, upper_from) = upper.expect("even chains have both signs");
        *param = FreeParam {
            lower,
            upper,
            open: mode == Mode::Strict,
        };
        if param.is_empty() {
            reasons.push(FailureReason::InequalityViolation {
                index: upper_from,
                lhs: upper,
                rhs: if mode == Mode::Strict { lower + 1 } else { lower },
            });
        }
    }
    for expr in exprs {
        offsets.push(expr.constant(spec));
        signs.push(expr.param_sign);
    }

    if !reasons.is_empty() {
        return SolveOutcome::infeasible(reasons, n);
    }
    SolveOutcome::family(Family::new(offsets, signs, params))
}

/// Materializes solutions in lexicographic (k_0, k_1) order, at most `limit`.
/// Infeasible outcomes yield an empty list.
pub fn enumerate_solutions(outcome: &SolveOutcome, limit: usize) -> Vec<SubdivisionVector> {
    match &outcome.kind {
        crate::types::OutcomeKind::Infeasible(_) => Vec::new(),
        crate::types::OutcomeKind::Unique(s) => {
            std::iter::once(s.clone()).take(limit).collect()
        }
        crate::types::OutcomeKind::Family(f) => f.members().take(limit).collect(),
    }
}

/// The two parameter intervals of a family outcome.
pub fn feasibility_intervals(outcome: &SolveOutcome) -> Option<[FreeParam; 2]> {
    outcome.as_family().map(|f| *f.params())
}

/// Explicit alternating-sum form for odd n:
/// s_i = 1/2 * sum_j (-1)^j e_{(i+1+2j) mod n}.
///
/// Returns `None` for even n or when the total parity fails. Components may
/// be negative; this is the raw inversion, before sign conditions.
pub fn odd_closed_form(spec: &PatchSpec) -> Option<SubdivisionVector> {
    let n = spec.n();
    if n.is_multiple_of(2) {
        return None;
    }
    let mut s = Vec::with_capacity(n);
    for i in 0..n {
        let mut twice = 0;
        for j in 0..n {
            let term = spec.edges()[(i + 1 + 2 * j) % n];
            twice += if j % 2 == 0 { term } else { -term };
        }
        if twice.rem_euclid(2) != 0 {
            return None;
        }
        s.push(twice / 2);
    }
    Some(SubdivisionVector::new(s))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::{brute_force_solutions, OracleBudget};
    use crate::solver;
    use crate::types::OutcomeKind;
    use std::collections::BTreeSet;

    fn spec(edges: &[i64]) -> PatchSpec {
        PatchSpec::new(edges.to_vec()).unwrap()
    }

    fn sv(values: &[i64]) -> SubdivisionVector {
        SubdivisionVector::new(values.to_vec())
    }

    fn solution_set(outcome: &SolveOutcome) -> BTreeSet<SubdivisionVector> {
        enumerate_solutions(outcome, usize::MAX).into_iter().collect()
    }

    #[test]
    fn twelve_gon_of_threes_has_four_members() {
        let out = solve_general(&spec(&[3; 12]), Mode::Strict).unwrap();
        let family = out.as_family().expect("family");
        assert_eq!(
            family.params()[0],
            FreeParam {
                lower: 0,
                upper: 3,
                open: true
            }
        );
        assert_eq!(
            family.params()[1],
            FreeParam {
                lower: 0,
                upper: 3,
                open: true
            }
        );
        assert_eq!(family.solution_count(), 4);
        let sp = spec(&[3; 12]);
        for member in family.members() {
            assert!(member.satisfies(&sp));
        }
    }

    #[test]
    fn symmetric_heptagon() {
        let out = solve_general(&spec(&[2; 7]), Mode::Strict).unwrap();
        assert_eq!(out.kind, OutcomeKind::Unique(sv(&[1; 7])));
    }

    #[test]
    fn pentagon_matches_closed_form() {
        let sp = spec(&[6, 4, 3, 5, 4]);
        let general = solve_general(&sp, Mode::Strict).unwrap();
        let closed = solver::solve(&sp, Mode::Strict).unwrap();
        assert_eq!(general.kind, OutcomeKind::Unique(sv(&[3, 2, 1, 1, 4])));
        assert_eq!(solution_set(&general), solution_set(&closed));
    }

    #[test]
    fn nine_gon_agrees_with_oracle() {
        let sp = spec(&[2, 3, 2, 3, 2, 3, 2, 3, 4]);
        for mode in [Mode::Strict, Mode::NonStrict] {
            let out = solve_general(&sp, mode).unwrap();
            let oracle = brute_force_solutions(&sp, mode, OracleBudget::default()).unwrap();
            assert_eq!(solution_set(&out), oracle, "mode {mode:?}");
        }
    }

    #[test]
    fn octagon_enumeration_is_lexicographic() {
        let out = solve_general(&spec(&[4, 3, 4, 3, 4, 3, 4, 3]), Mode::Strict).unwrap();
        let all = enumerate_solutions(&out, usize::MAX);
        assert_eq!(all.len(), 6);
        assert_eq!(all[0], sv(&[1, 1, 2, 3, 1, 1, 2, 3]));
        let sp = spec(&[4, 3, 4, 3, 4, 3, 4, 3]);
        for s in &all {
            assert!(s.satisfies(&sp));
        }
        assert_eq!(enumerate_solutions(&out, 2).len(), 2);
        let unique = solve_general(&spec(&[6, 4, 3, 5, 4]), Mode::Strict).unwrap();
        assert_eq!(enumerate_solutions(&unique, 5), vec![sv(&[3, 2, 1, 1, 4])]);
        let infeasible = solve_general(&spec(&[6, 2, 2]), Mode::Strict).unwrap();
        assert!(enumerate_solutions(&infeasible, 5).is_empty());
    }

    #[test]
    fn interval_examples() {
        let octa = spec(&[4, 3, 4, 3, 4, 3, 4, 3]);
        let strict = feasibility_intervals(&solve_general(&octa, Mode::Strict).unwrap()).unwrap();
        assert_eq!(
            strict,
            [
                FreeParam {
                    lower: 0,
                    upper: 3,
                    open: true
                },
                FreeParam {
                    lower: 0,
                    upper: 4,
                    open: true
                }
            ]
        );
        let lax = feasibility_intervals(&solve_general(&octa, Mode::NonStrict).unwrap()).unwrap();
        assert_eq!(
            lax,
            [
                FreeParam {
                    lower: 0,
                    upper: 3,
                    open: false
                },
                FreeParam {
                    lower: 0,
                    upper: 4,
                    open: false
                }
            ]
        );
        let quad = spec(&[3, 5, 3, 5]);
        let q = feasibility_intervals(&solve_general(&quad, Mode::Strict).unwrap()).unwrap();
        assert_eq!(q[0].lower, 0);
        assert_eq!(q[0].upper, 5);
        assert_eq!(q[1].lower, 0);
        assert_eq!(q[1].upper, 3);
    }

    #[test]
    fn empty_interval_reports_the_binding_inequality() {
        let sp = spec(&[4, 2, 2, 2, 2, 2, 4, 2, 2, 2, 2, 2]);
        let out = solve_general(&sp, Mode::Strict).unwrap();
        match &out.kind {
            OutcomeKind::Infeasible(reasons) => {
                assert!(reasons
                    .iter()
                    .any(|r| matches!(r, FailureReason::InequalityViolation { .. })));
            }
            other => panic!("expected infeasible, got {other:?}"),
        }
        for mode in [Mode::Strict, Mode::NonStrict] {
            let out = solve_general(&sp, mode).unwrap();
            let oracle = brute_force_solutions(&sp, mode, OracleBudget::default()).unwrap();
            assert_eq!(solution_set(&out), oracle, "mode {mode:?}");
        }
    }

    #[test]
    fn odd_formula_reproduces_propagation() {
        for edges in [
            vec![2, 2, 2],
            vec![6, 4, 3, 5, 4],
            vec![2, 2, 2, 4, 2],
            vec![3, 2, 3, 2, 3, 2, 2],
            vec![2, 3, 2, 3, 2, 3, 2, 3, 4],
            vec![3, 3, 4, 3, 3, 4, 3, 3, 4, 2, 2],
        ] {
            let sp = spec(&edges);
            let formula = odd_closed_form(&sp);
            if formula.is_none() {
                assert!(sp.total_edges() % 2 != 0);
                continue;
            }
            let formula = formula.unwrap();
            // Whenever the formula lands on admissible values, it must be
            // exactly the propagation solution.
            for mode in [Mode::Strict, Mode::NonStrict] {
                let out = solve_general(&sp, mode).unwrap();
                if formula.values().iter().all(|&v| v >= mode.min_sub_side()) {
                    assert_eq!(out.kind, OutcomeKind::Unique(formula.clone()));
                } else {
                    assert!(!out.is_ccable(), "edges {edges:?} mode {mode:?}");
                }
            }
        }
    }

    #[test]
    fn consistency_equations_imply_total_parity() {
        for n in [4usize, 8, 12] {
            for seed in 0..200u64 {
                let edges: Vec<i64> = (0..n as u64)
                    .map(|i| 1 + (seed.wrapping_mul(31).wrapping_add(i * 17) % 6) as i64)
                    .collect();
                let sp = spec(&edges);
                let out = solve_general(&sp, Mode::NonStrict).unwrap();
                let equalities_hold = match &out.kind {
                    OutcomeKind::Infeasible(reasons) => !reasons.iter().any(|r| {
                        matches!(
                            r,
                            FailureReason::EqualitySystemViolation { .. }
                                | FailureReason::ParityViolation { .. }
                        )
                    }),
                    _ => true,
                };
                if equalities_hold {
                    assert_eq!(sp.total_edges() % 2, 0, "edges {edges:?}");
                }
            }
        }
    }

    #[test]
    fn large_odd_side_count() {
        let out = solve_general(&spec(&[2; 101]), Mode::Strict).unwrap();
        assert_eq!(out.kind, OutcomeKind::Unique(sv(&[1; 101])));
        let slanted: Vec<i64> = (0..100).map(|i| 4 + (i % 2)).collect();
        let out = solve_general(&spec(&slanted), Mode::Strict).unwrap();
        if let Some(s) = enumerate_solutions(&out, 1).first() {
            assert!(s.satisfies(&spec(&slanted)));
        }
    }

    #[test]
    fn two_sided_patch_via_propagation() {
        let out = solve_general(&spec(&[4, 6]), Mode::Strict).unwrap();
        assert_eq!(out.kind, OutcomeKind::Unique(sv(&[3, 2])));
        let odd = solve_general(&spec(&[3, 4]), Mode::Strict).unwrap();
        match &odd.kind {
            OutcomeKind::Infeasible(reasons) => {
                assert!(reasons.contains(&FailureReason::SubsetParityViolation {
                    subset: IndexParity::Even,
                    sum: 3
                }));
            }
            other => panic!("expected infeasible, got {other:?}"),
        }
    }
}
