//! Shared domain types: patch specifications, subdivision vectors, solve
//! outcomes, and the condition/diagnostic vocabulary used by the solvers.

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Strictness of the sought quadrangulation.
///
/// `Strict` requires the single irregular vertex to sit in the patch
/// interior (every sub-side count positive). `NonStrict` also admits
/// solutions where it degenerates onto the boundary or a corner
/// (sub-side counts may be zero).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Mode {
    #[serde(rename = "strict")]
    Strict,
    #[serde(rename = "non-strict")]
    NonStrict,
}

impl Mode {
    /// Smallest admissible edge count per side. A side must still split in
    /// two non-empty sub-sides in strict mode, hence 2; non-strict allows 1.
    pub fn min_edge_count(self) -> i64 {
        match self {
            Mode::Strict => 2,
            Mode::NonStrict => 1,
        }
    }

    /// Smallest admissible sub-side count: 1 (strict) or 0 (non-strict).
    pub fn min_sub_side(self) -> i64 {
        match self {
            Mode::Strict => 1,
            Mode::NonStrict => 0,
        }
    }
}

impl std::fmt::Display for Mode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Mode::Strict => write!(f, "strict"),
            Mode::NonStrict => write!(f, "non-strict"),
        }
    }
}

/// Validation and dispatch errors shared by the solvers.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SolveError {
    #[error("a patch needs at least two sides, got {n}")]
    SideCountBelowTwo { n: usize },
    #[error("side {index} has {value} edges, below the minimum of {minimum}")]
    EdgeCountBelowMinimum {
        index: usize,
        value: i64,
        minimum: i64,
    },
    #[error("closed forms cover 2..=8 sides; use the general solver for n = {n}")]
    UnsupportedSideCount { n: usize },
}

/// An n-sided patch instance: the number of boundary edges on each side,
/// listed counterclockwise from side 0.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PatchSpec {
    edges: Vec<i64>,
}

impl PatchSpec {
    /// Builds a spec from per-side edge counts. Requires at least two sides
    /// and at least one edge per side.
    pub fn new(edges: Vec<i64>) -> Result<Self, SolveError> {
        if edges.len() < 2 {
            return Err(SolveError::SideCountBelowTwo { n: edges.len() });
        }
        for (index, &value) in edges.iter().enumerate() {
            if value < 1 {
                return Err(SolveError::EdgeCountBelowMinimum {
                    index,
                    value,
                    minimum: 1,
                });
            }
        }
        Ok(PatchSpec { edges })
    }

    pub fn n(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[i64] {
        &self.edges
    }

    /// Edge count of side `i`, with the index reduced modulo n.
    pub fn edge(&self, i: isize) -> i64 {
        self.edges[self.wrap(i)]
    }

    /// Reduces a possibly negative side index modulo n.
    pub fn wrap(&self, i: isize) -> usize {
        let n = self.edges.len() as isize;
        i.rem_euclid(n) as usize
    }

    pub fn total_edges(&self) -> i64 {
        self.edges.iter().sum()
    }

    /// Checks the per-mode edge minimum on every side.
    pub fn validate_for(&self, mode: Mode) -> Result<(), SolveError> {
        let minimum = mode.min_edge_count();
        for (index, &value) in self.edges.iter().enumerate() {
            if value < minimum {
                return Err(SolveError::EdgeCountBelowMinimum {
                    index,
                    value,
                    minimum,
                });
            }
        }
        Ok(())
    }

    /// The spec with side labels rotated left by `r`: side i of the result
    /// is side i+r of the original.
    pub fn rotated(&self, r: usize) -> PatchSpec {
        let n = self.edges.len();
        let edges = (0..n).map(|i| self.edges[(i + r) % n]).collect();
        PatchSpec { edges }
    }

    /// The spec with the side ordering reflected: side i becomes side -i.
    pub fn reflected(&self) -> PatchSpec {
        let n = self.edges.len();
        let edges = (0..n).map(|i| self.edges[(n - i) % n]).collect();
        PatchSpec { edges }
    }
}

/// The n sub-side counts s_0..s_{n-1} that fully describe a tessellation:
/// s_{i-1} and s_{i+1} are the two halves of side i, and s_i is the length
/// of the spoke joining side i's split point to the central vertex.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SubdivisionVector {
    s: Vec<i64>,
}

impl SubdivisionVector {
    pub fn new(s: Vec<i64>) -> Self {
        SubdivisionVector { s }
    }

    pub fn values(&self) -> &[i64] {
        &self.s
    }

    pub fn len(&self) -> usize {
        self.s.len()
    }

    pub fn is_empty(&self) -> bool {
        self.s.is_empty()
    }

    /// Component i, index reduced modulo n.
    pub fn get(&self, i: isize) -> i64 {
        let n = self.s.len() as isize;
        self.s[i.rem_euclid(n) as usize]
    }

    /// True iff e_i = s_{i-1} + s_{i+1} holds for every side of `spec` and
    /// no component is negative.
    pub fn satisfies(&self, spec: &PatchSpec) -> bool {
        if self.s.len() != spec.n() || self.s.iter().any(|&v| v < 0) {
            return false;
        }
        (0..spec.n() as isize).all(|i| spec.edge(i) == self.get(i - 1) + self.get(i + 1))
    }

    pub fn zero_indices(&self) -> Vec<usize> {
        self.s
            .iter()
            .enumerate()
            .filter(|(_, &v)| v == 0)
            .map(|(i, _)| i)
            .collect()
    }

    /// Where the construction places the irregular vertex, read off the
    /// zero pattern: no zeros puts it in the interior, a single zero on the
    /// matching side, two adjacent zeros on the corner between them, and
    /// anything else is a degenerate pattern.
    pub fn classify(&self) -> SingularityClass {
        let n = self.s.len();
        let zeros = self.zero_indices();
        match zeros.as_slice() {
            [] => SingularityClass::Interior,
            [i] => SingularityClass::Boundary { spoke: *i },
            [i, j] if j - i == 1 => SingularityClass::Corner { corner: (i + 1) % n },
            [0, j] if *j == n - 1 && n > 2 => SingularityClass::Corner { corner: 0 },
            _ => SingularityClass::Degenerate { zeros },
        }
    }

    pub fn rotated(&self, r: usize) -> SubdivisionVector {
        let n = self.s.len();
        SubdivisionVector::new((0..n).map(|i| self.s[(i + r) % n]).collect())
    }

    pub fn reflected(&self) -> SubdivisionVector {
        let n = self.s.len();
        SubdivisionVector::new((0..n).map(|i| self.s[(n - i) % n]).collect())
    }
}

/// Placement of the single irregular vertex implied by a subdivision vector.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum SingularityClass {
    /// Interior vertex of valency n.
    Interior,
    /// On side `spoke`'s split point: a boundary vertex of edge-valency != 3.
    Boundary { spoke: usize },
    /// On corner `corner`: a corner vertex of edge-valency != 2.
    Corner { corner: usize },
    /// Zero pattern not covered by the single-equality cases.
    Degenerate { zeros: Vec<usize> },
}

/// Which alternating index subset a condition talks about.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum IndexParity {
    Even,
    Odd,
}

/// Why a patch fails to be quadrangulable in the requested mode. Infeasible
/// outcomes carry every violated reason, not just the first.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum FailureReason {
    /// The total edge count is odd.
    ParityViolation { total: i64 },
    /// The even- or odd-indexed sides have an odd combined edge count.
    SubsetParityViolation { subset: IndexParity, sum: i64 },
    /// A sign constraint fails: `lhs` must exceed `rhs` (strict) or reach it
    /// (non-strict). For family cases the inequality is on the bounds of a
    /// free parameter and `index` names the sub-side giving the upper bound.
    InequalityViolation { index: usize, lhs: i64, rhs: i64 },
    /// One of the two rank-deficiency equalities fails (n divisible by 4).
    EqualitySystemViolation {
        system: IndexParity,
        lhs: i64,
        rhs: i64,
    },
    /// A side has fewer edges than the mode admits.
    EdgeCountBelowMinimum { index: usize, value: i64 },
    /// Fewer than two sides.
    SideCountBelowTwo { n: usize },
}

/// Admissible integer range for one free family parameter.
///
/// `open` bounds exclude their endpoints (strict mode); closed bounds
/// include them (non-strict mode).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FreeParam {
    pub lower: i64,
    pub upper: i64,
    pub open: bool,
}

impl FreeParam {
    /// Smallest admissible integer value.
    pub fn min_value(&self) -> i64 {
        if self.open {
            self.lower + 1
        } else {
            self.lower
        }
    }

    /// Largest admissible integer value.
    pub fn max_value(&self) -> i64 {
        if self.open {
            self.upper - 1
        } else {
            self.upper
        }
    }

    pub fn contains(&self, k: i64) -> bool {
        k >= self.min_value() && k <= self.max_value()
    }

    /// Number of admissible integer values.
    pub fn count(&self) -> u64 {
        (self.max_value() - self.min_value() + 1).max(0) as u64
    }

    pub fn is_empty(&self) -> bool {
        self.count() == 0
    }
}

impl std::fmt::Display for FreeParam {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.open {
            write!(f, "({}, {})", self.lower, self.upper)
        } else {
            write!(f, "[{}, {}]", self.lower, self.upper)
        }
    }
}

/// A two-parameter affine family of subdivision vectors, arising when n is
/// divisible by 4: s_i = offset_i + sign_i * k_{i mod 2}.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Family {
    offsets: Vec<i64>,
    signs: Vec<i64>,
    params: [FreeParam; 2],
}

impl Family {
    pub fn new(offsets: Vec<i64>, signs: Vec<i64>, params: [FreeParam; 2]) -> Self {
        debug_assert_eq!(offsets.len(), signs.len());
        debug_assert!(offsets.len().is_multiple_of(4));
        debug_assert!(signs.iter().all(|&b| b == 1 || b == -1));
        Family {
            offsets,
            signs,
            params,
        }
    }

    pub fn n(&self) -> usize {
        self.offsets.len()
    }

    pub fn params(&self) -> &[FreeParam; 2] {
        &self.params
    }

    /// The member at (k_0, k_1), or `None` when the pick is out of bounds.
    pub fn member(&self, k0: i64, k1: i64) -> Option<SubdivisionVector> {
        if !self.params[0].contains(k0) || !self.params[1].contains(k1) {
            return None;
        }
        Some(self.member_unchecked(k0, k1))
    }

    fn member_unchecked(&self, k0: i64, k1: i64) -> SubdivisionVector {
        let k = [k0, k1];
        let s = self
            .offsets
            .iter()
            .zip(&self.signs)
            .enumerate()
            .map(|(i, (&a, &b))| a + b * k[i % 2])
            .collect();
        SubdivisionVector::new(s)
    }

    /// The lexicographically smallest admissible (k_0, k_1), if any.
    pub fn smallest_pick(&self) -> Option<(i64, i64)> {
        if self.params[0].is_empty() || self.params[1].is_empty() {
            return None;
        }
        Some((self.params[0].min_value(), self.params[1].min_value()))
    }

    pub fn solution_count(&self) -> u64 {
        self.params[0].count() * self.params[1].count()
    }

    /// All members in lexicographic (k_0, k_1) order.
    pub fn members(&self) -> impl Iterator<Item = SubdivisionVector> + '_ {
        let p0 = self.params[0];
        let p1 = self.params[1];
        (p0.min_value()..=p0.max_value()).flat_map(move |k0| {
            (p1.min_value()..=p1.max_value()).map(move |k1| self.member_unchecked(k0, k1))
        })
    }
}

/// The three possible answers of a solve.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OutcomeKind {
    Infeasible(Vec<FailureReason>),
    Unique(SubdivisionVector),
    Family(Family),
}

/// Full solve result. `tessellation_equivalent` is true exactly for n = 4,
/// where every family member describes the same regular grid.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolveOutcome {
    pub kind: OutcomeKind,
    pub tessellation_equivalent: bool,
}

impl SolveOutcome {
    pub fn infeasible(reasons: Vec<FailureReason>, n: usize) -> Self {
        SolveOutcome {
            kind: OutcomeKind::Infeasible(reasons),
            tessellation_equivalent: n == 4,
        }
    }

    pub fn unique(s: SubdivisionVector) -> Self {
        SolveOutcome {
            kind: OutcomeKind::Unique(s),
            tessellation_equivalent: false,
        }
    }

    pub fn family(family: Family) -> Self {
        let n = family.n();
        SolveOutcome {
            kind: OutcomeKind::Family(family),
            tessellation_equivalent: n == 4,
        }
    }

    pub fn is_ccable(&self) -> bool {
        !matches!(self.kind, OutcomeKind::Infeasible(_))
    }

    pub fn solution_count(&self) -> u64 {
        match &self.kind {
            OutcomeKind::Infeasible(_) => 0,
            OutcomeKind::Unique(_) => 1,
            OutcomeKind::Family(f) => f.solution_count(),
        }
    }

    pub fn as_family(&self) -> Option<&Family> {
        match &self.kind {
            OutcomeKind::Family(f) => Some(f),
            _ => None,
        }
    }
}

/// Status of a single feasibility condition. The equality tier applies to
/// sign inequalities and interval gaps; parity and equality-system
/// conditions are binary (satisfied counts as strict).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ConditionStatusKind {
    SatisfiedStrictly,
    SatisfiedAsEquality,
    Violated,
}

/// Identity of one feasibility condition.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "condition", rename_all = "kebab-case")]
pub enum Condition {
    /// Total edge count must be even.
    Parity,
    /// An alternating index subset's edge total must be even.
    SubsetParity { subset: IndexParity },
    /// Sub-side `index` must be positive (strict) or non-negative.
    SignInequality { index: usize },
    /// Rank-deficiency equality of one alternating subsystem.
    SystemEquality { system: IndexParity },
    /// A free parameter's lower bound (from sub-side `lower_from`) must
    /// leave room under its upper bound (from sub-side `upper_from`).
    ParamGap {
        param: usize,
        lower_from: usize,
        upper_from: usize,
    },
}

/// One evaluated condition: the identity, the two sides of the comparison,
/// and the resulting status. For parity conditions `lhs` is the inspected
/// sum and `rhs` is zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConditionStatus {
    #[serde(flatten)]
    pub condition: Condition,
    pub lhs: i64,
    pub rhs: i64,
    pub status: ConditionStatusKind,
}

impl ConditionStatus {
    /// Evaluates a parity-style condition on `sum`.
    pub fn parity(condition: Condition, sum: i64) -> Self {
        let status = if sum % 2 == 0 {
            ConditionStatusKind::SatisfiedStrictly
        } else {
            ConditionStatusKind::Violated
        };
        ConditionStatus {
            condition,
            lhs: sum,
            rhs: 0,
            status,
        }
    }

    /// Evaluates an equality-system condition `lhs == rhs`.
    pub fn equality(system: IndexParity, lhs: i64, rhs: i64) -> Self {
        let status = if lhs == rhs {
            ConditionStatusKind::SatisfiedStrictly
        } else {
            ConditionStatusKind::Violated
        };
        ConditionStatus {
            condition: Condition::SystemEquality { system },
            lhs,
            rhs,
            status,
        }
    }

    /// Evaluates a sign inequality `lhs > rhs` (strict) / `lhs >= rhs`.
    pub fn inequality(index: usize, lhs: i64, rhs: i64) -> Self {
        let status = match lhs.cmp(&rhs) {
            std::cmp::Ordering::Greater => ConditionStatusKind::SatisfiedStrictly,
            std::cmp::Ordering::Equal => ConditionStatusKind::SatisfiedAsEquality,
            std::cmp::Ordering::Less => ConditionStatusKind::Violated,
        };
        ConditionStatus {
            condition: Condition::SignInequality { index },
            lhs,
            rhs,
            status,
        }
    }

    /// Evaluates an interval-gap condition: the open interval
    /// (`lower`, `upper`) must contain an integer for a strict solution,
    /// the closed interval must be non-empty for a non-strict one.
    pub fn param_gap(param: usize, lower_from: usize, upper_from: usize, lower: i64, upper: i64) -> Self {
        let status = if upper - lower >= 2 {
            ConditionStatusKind::SatisfiedStrictly
        } else if upper >= lower {
            ConditionStatusKind::SatisfiedAsEquality
        } else {
            ConditionStatusKind::Violated
        };
        ConditionStatus {
            condition: Condition::ParamGap {
                param,
                lower_from,
                upper_from,
            },
            lhs: upper,
            rhs: lower,
            status,
        }
    }

    /// Whether this condition rules out a solution in `mode`.
    pub fn violated_in(&self, mode: Mode) -> bool {
        match self.status {
            ConditionStatusKind::Violated => true,
            ConditionStatusKind::SatisfiedAsEquality => mode == Mode::Strict,
            ConditionStatusKind::SatisfiedStrictly => false,
        }
    }

    /// The failure reason reported when this condition is violated in `mode`.
    pub fn failure_reason(&self, mode: Mode) -> FailureReason {
        match self.condition {
            Condition::Parity => FailureReason::ParityViolation { total: self.lhs },
            Condition::SubsetParity { subset } => FailureReason::SubsetParityViolation {
                subset,
                sum: self.lhs,
            },
            Condition::SignInequality { index } => FailureReason::InequalityViolation {
                index,
                lhs: self.lhs,
                rhs: self.rhs,
            },
            Condition::SystemEquality { system } => FailureReason::EqualitySystemViolation {
                system,
                lhs: self.lhs,
                rhs: self.rhs,
            },
            Condition::ParamGap { upper_from, .. } => FailureReason::InequalityViolation {
                index: upper_from,
                lhs: self.lhs,
                // In strict mode the requirement is upper > lower + 1.
                rhs: if mode == Mode::Strict {
                    self.rhs + 1
                } else {
                    self.rhs
                },
            },
        }
    }
}

/// Derives the mode-specific infeasibility reasons from a condition list;
/// empty means the patch is quadrangulable in `mode`.
pub fn violations(conditions: &[ConditionStatus], mode: Mode) -> Vec<FailureReason> {
    conditions
        .iter()
        .filter(|c| c.violated_in(mode))
        .map(|c| c.failure_reason(mode))
        .collect()
}
